use num_bigint::BigUint;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use varcount_core::counting::{
    closed_form_applicable, count_nl_with, independent_nonzero_count, square_unimodular_count,
};
use varcount_core::gen::{random_spec, random_square_unimodular, small_fields, Limits};
use varcount_core::oracle::DEFAULT_ORACLE_CAP;
use varcount_core::{
    brute_count, count_points, partition_profile, CountError, CountOptions, FilterStrategy,
    LevelPath, LogTable, VarietySpec,
};

fn specs(seed: u64, count: usize) -> Vec<VarietySpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fields = small_fields();
    (0..count)
        .map(|_| {
            let f = &fields[rng.gen_range(0..fields.len())];
            random_spec(&mut rng, f, &Limits::default())
        })
        .collect()
}

fn total(spec: &VarietySpec, opts: &CountOptions) -> BigUint {
    count_points(spec, opts).unwrap().total
}

#[test]
fn formula_matches_oracle_and_partition() {
    for spec in specs(1, 120) {
        let report = count_points(&spec, &CountOptions::default()).unwrap();
        let brute = brute_count(&spec, DEFAULT_ORACLE_CAP).unwrap();
        assert_eq!(report.total, BigUint::from(brute), "{spec:?}");

        let profile = partition_profile(&spec, DEFAULT_ORACLE_CAP).unwrap();
        let rt = *spec.r().last().unwrap();
        assert_eq!(profile.len(), rt + 1);
        for (&n, &mn) in &profile {
            let expected = if n == 0 {
                report.zero_term.clone().unwrap_or_default()
            } else if let Some(l) = spec.r().iter().position(|&r| r == n) {
                report.levels[l].term.clone()
            } else {
                BigUint::zero()
            };
            assert_eq!(BigUint::from(mn), expected, "M_{n} of {spec:?}");
        }
        if !spec.homogeneous() {
            assert_eq!(profile[&0], 0);
        }
    }
}

#[test]
fn strategies_and_paths_agree() {
    for spec in specs(2, 150) {
        let base = total(&spec, &CountOptions::default());
        let direct = CountOptions {
            strategy: FilterStrategy::Direct,
            ..Default::default()
        };
        match count_points(&spec, &direct) {
            Ok(r) => assert_eq!(r.total, base),
            Err(CountError::ResourceLimit { .. }) => {}
            Err(e) => panic!("{e}"),
        }
        let general = CountOptions {
            closed_form: false,
            ..Default::default()
        };
        let g = count_points(&spec, &general).unwrap();
        assert!(g.levels.iter().all(|l| l.path == LevelPath::General));
        assert_eq!(g.total, base);
        let checked = CountOptions {
            cross_check: true,
            ..Default::default()
        };
        assert_eq!(total(&spec, &checked), base);
    }
}

#[test]
fn closed_form_whenever_applicable() {
    let mut seen = 0;
    for spec in specs(3, 300) {
        if !closed_form_applicable(&spec).unwrap() {
            continue;
        }
        seen += 1;
        let report = count_points(&spec, &CountOptions::default()).unwrap();
        assert!(report
            .levels
            .iter()
            .all(|l| l.path == LevelPath::ClosedForm));
        assert!(report.alpha.is_none());
        let general = CountOptions {
            closed_form: false,
            ..Default::default()
        };
        assert_eq!(total(&spec, &general), report.total);
    }
    assert!(seen > 10, "only {seen} closed-form instances");
}

#[test]
fn nl_bounded_by_unfiltered_product() {
    for spec in specs(4, 150) {
        let q = spec.field().order() as u64;
        let report = count_points(&spec, &CountOptions::default()).unwrap();
        for level in &report.levels {
            let bound = independent_nonzero_count(
                spec.equations(),
                spec.r_at(level.l),
                spec.zero_constants(),
                q,
            );
            assert!(level.n_l <= bound);
        }
    }
}

#[test]
fn nl_independent_of_primitive_element() {
    for spec in specs(5, 60) {
        let field = spec.field();
        for l in 1..=spec.blocks() {
            let values: Vec<BigUint> = field
                .primitive_elements()
                .into_iter()
                .map(|alpha| {
                    let logs = LogTable::new(field, alpha).unwrap();
                    count_nl_with(&spec, l, &logs, FilterStrategy::Grouped).unwrap()
                })
                .collect();
            assert!(
                values.windows(2).all(|w| w[0] == w[1]),
                "{spec:?} level {l}: {values:?}"
            );
        }
    }
}

#[test]
fn square_unimodular_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let fields = small_fields();
    for _ in 0..40 {
        let f = &fields[rng.gen_range(0..fields.len())];
        let spec = random_square_unimodular(&mut rng, f, 4);
        let n = spec.variables();
        let expected = square_unimodular_count(n, spec.homogeneous(), f.order() as u64);
        assert_eq!(total(&spec, &CountOptions::default()), expected);
        if (f.order() as u64).pow(n as u32) <= 100_000 {
            assert_eq!(
                BigUint::from(brute_count(&spec, DEFAULT_ORACLE_CAP).unwrap()),
                expected
            );
        }
    }
}
