use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use varcount_core::gen::{mutate_text, random_spec, random_text, small_fields, Limits};
use varcount_core::parser::{parse_system, serialize, serialize_json, ParseOptions};
use varcount_core::{FieldSpec, VarietySpec};

fn wide_fields() -> Vec<FieldSpec> {
    let mut f = small_fields();
    f.push(FieldSpec::new(5, 3, Some(&[2, 0, 1, 1])).unwrap());
    f.push(FieldSpec::new(7, 2, Some(&[1, 0, 1])).unwrap());
    f.push(FieldSpec::prime(10007).unwrap());
    f
}

fn generated(seed: u64) -> VarietySpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fields = wide_fields();
    let f = &fields[rng.gen_range(0..fields.len())];
    let limits = Limits {
        max_equations: 4,
        max_blocks: 4,
        max_monomials: 6,
        max_variables: 8,
        max_exponent: Some(1000),
    };
    random_spec(&mut rng, f, &limits)
}

fn reparse(text: &str) -> VarietySpec {
    parse_system(text, ParseOptions::default()).unwrap_or_else(|e| panic!("{e}\n{text}"))
}

proptest! {
    #[test]
    fn text_round_trip(seed in any::<u64>()) {
        let spec = generated(seed);
        let text = serialize(&spec);
        prop_assert_eq!(&reparse(&text), &spec);
        prop_assert_eq!(serialize(&reparse(&text)), text);
    }

    #[test]
    fn json_round_trip(seed in any::<u64>()) {
        let spec = generated(seed);
        let json = serialize_json(&spec);
        prop_assert_eq!(&reparse(&json), &spec);
        prop_assert_eq!(serialize_json(&reparse(&json)), json);
    }

    #[test]
    fn whitespace_and_comments_are_insignificant(seed in any::<u64>(), pad in "[ \t]{0,3}") {
        let spec = generated(seed);
        let text = serialize(&spec);
        let mut lines = text.lines();
        let header = lines.next().unwrap();
        let mut noisy = format!("# leading comment\n\n{pad}{header}{pad}# trailing\n");
        for line in lines {
            let squeezed: String = line.chars().filter(|c| !c.is_whitespace()).collect();
            let spread = line.replace(' ', &format!(" {pad}"));
            noisy.push_str(if seed % 2 == 0 { &squeezed } else { &spread });
            noisy.push_str("   \n\n");
        }
        prop_assert_eq!(reparse(&noisy), spec);
    }
}

#[test]
fn fuzzed_inputs_never_panic() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xF022);
    let mut accepted = 0;
    for i in 0..10_000u64 {
        let input = match i % 4 {
            0 => mutate_text(&mut rng, &serialize(&generated(i))),
            1 => mutate_text(&mut rng, &serialize_json(&generated(i))),
            2 => random_text(&mut rng, 80),
            _ => format!(
                "field {}\n{}",
                rng.gen_range(0..40),
                mutate_text(&mut rng, "x1^2 + 3*x1*x2 = 1")
            ),
        };
        if let Ok(spec) = parse_system(&input, ParseOptions::default()) {
            accepted += 1;
            assert_eq!(reparse(&serialize(&spec)), spec);
        }
    }
    assert!(
        accepted > 100,
        "fuzzer too destructive: {accepted} accepted"
    );
}
