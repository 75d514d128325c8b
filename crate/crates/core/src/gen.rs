//! Random members of the family, for property tests and benchmarks.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use rand::seq::index::sample;
use rand::Rng;

use crate::congruence::CongruenceSystem;
use crate::field::{FieldElement, FieldSpec};
use crate::intlinalg::IntMatrix;
use crate::variety::{RawVarietySpec, VarietySpec};

/// Shape bounds for [`random_spec`].
#[derive(Debug, Clone, Copy)]
pub struct Limits {
    pub max_equations: usize,
    pub max_blocks: usize,
    pub max_monomials: usize,
    pub max_variables: usize,
    /// Largest exponent; `2(q-1)` when `None`.
    pub max_exponent: Option<u64>,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_equations: 3,
            max_blocks: 3,
            max_monomials: 4,
            max_variables: 6,
            max_exponent: None,
        }
    }
}

/// `F_3, F_5, F_7, F_9 = F_3[x]/(x^2+1), F_11, F_13`.
pub fn small_fields() -> Vec<FieldSpec> {
    vec![
        FieldSpec::prime(3).unwrap(),
        FieldSpec::prime(5).unwrap(),
        FieldSpec::prime(7).unwrap(),
        FieldSpec::new(3, 2, Some(&[1, 0, 1])).unwrap(),
        FieldSpec::prime(11).unwrap(),
        FieldSpec::prime(13).unwrap(),
    ]
}

/// `count` distinct sorted values from `1..=top`, always including `top`.
fn increasing_ending_at<R: Rng>(rng: &mut R, count: usize, top: usize) -> Vec<usize> {
    let mut v: Vec<usize> = sample(rng, top - 1, count - 1)
        .into_iter()
        .map(|i| i + 1)
        .collect();
    v.push(top);
    v.sort_unstable();
    v
}

pub fn random_nonzero<R: Rng>(rng: &mut R, field: &FieldSpec) -> FieldElement {
    FieldElement::from_code(rng.gen_range(1..field.order()))
}

pub fn random_element<R: Rng>(rng: &mut R, field: &FieldSpec) -> FieldElement {
    FieldElement::from_code(rng.gen_range(0..field.order()))
}

/// A random valid system over `field` within `limits`.
pub fn random_spec<R: Rng>(rng: &mut R, field: &FieldSpec, limits: &Limits) -> VarietySpec {
    let m = rng.gen_range(1..=limits.max_equations);
    let rt = rng.gen_range(1..=limits.max_monomials);
    let nt = rng.gen_range(1..=limits.max_variables);
    let t = rng.gen_range(1..=limits.max_blocks.min(rt).min(nt));
    let r = increasing_ending_at(rng, t, rt);
    let n = increasing_ending_at(rng, t, nt);
    let emax = limits
        .max_exponent
        .unwrap_or(2 * (field.order() as u64 - 1))
        .max(1);

    let mut widths = Vec::with_capacity(rt);
    let mut prev = 0;
    for (&rj, &nj) in r.iter().zip(&n) {
        widths.extend(std::iter::repeat_n(nj, rj - prev));
        prev = rj;
    }

    let a = (0..m)
        .map(|_| (0..rt).map(|_| random_nonzero(rng, field)).collect())
        .collect();
    let e = (0..m)
        .map(|_| {
            widths
                .iter()
                .map(|&w| (0..w).map(|_| rng.gen_range(1..=emax) as i64).collect())
                .collect()
        })
        .collect();
    let all_zero = rng.gen_bool(0.25);
    let b = (0..m)
        .map(|_| {
            if all_zero || rng.gen_bool(0.3) {
                FieldElement::ZERO
            } else {
                random_nonzero(rng, field)
            }
        })
        .collect();
    RawVarietySpec {
        field: field.clone(),
        r,
        n,
        a,
        b,
        e,
    }
    .validate()
    .expect("generated system is valid")
}

/// A random single-equation, single-block square system whose exponent
/// determinant is a unit mod `q-1`, with `1..=max_n` variables.
pub fn random_square_unimodular<R: Rng>(
    rng: &mut R,
    field: &FieldSpec,
    max_n: usize,
) -> VarietySpec {
    let qm1 = BigInt::from(field.order() - 1);
    let n = rng.gen_range(1..=max_n);
    let emax = 2 * (field.order() as i64 - 1);
    loop {
        let e: Vec<Vec<i64>> = (0..n)
            .map(|_| (0..n).map(|_| rng.gen_range(1..=emax)).collect())
            .collect();
        let det = IntMatrix::from_rows(&e).unwrap().determinant().unwrap();
        if !det.gcd(&qm1).is_one() {
            continue;
        }
        let b = if rng.gen_bool(0.5) {
            FieldElement::ZERO
        } else {
            random_nonzero(rng, field)
        };
        return RawVarietySpec {
            field: field.clone(),
            r: vec![n],
            n: vec![n],
            a: vec![(0..n).map(|_| random_nonzero(rng, field)).collect()],
            b: vec![b],
            e: vec![e],
        }
        .validate()
        .expect("generated system is valid");
    }
}

/// A random system `H y ≡ B (mod m)` with nonzero `H`, `2 <= m <= 12` and
/// `m^n <= max_space`. Half of the right-hand sides are images `H y`, so
/// solvable systems are common.
pub fn random_congruence_system<R: Rng>(rng: &mut R, max_space: u64) -> CongruenceSystem {
    loop {
        let modulus: u64 = rng.gen_range(2..=12);
        let max_n = (1..=8u32)
            .take_while(|&n| modulus.checked_pow(n).is_some_and(|s| s <= max_space))
            .last()
            .unwrap_or(1);
        let n = rng.gen_range(1..=max_n as usize);
        let s = rng.gen_range(1..=4);
        let data: Vec<BigInt> = (0..s * n)
            .map(|_| BigInt::from(rng.gen_range(-15i64..=15)))
            .collect();
        let h = IntMatrix::new(s, n, data).unwrap();
        if h.is_zero() {
            continue;
        }
        let b: Vec<BigInt> = if rng.gen_bool(0.5) {
            let y: Vec<BigInt> = (0..n)
                .map(|_| BigInt::from(rng.gen_range(0..modulus)))
                .collect();
            h.mul_vec(&y).unwrap()
        } else {
            (0..s)
                .map(|_| BigInt::from(rng.gen_range(-20i64..=20)))
                .collect()
        };
        return CongruenceSystem::new(h, b, BigInt::from(modulus)).unwrap();
    }
}

const FUZZ_ALPHABET: &[u8] = b" \t\nx1234567890^*+=[],#-_{}\":fieldmodpnabc";

/// Apply one to four random edits to `text`: deletions, insertions and
/// replacements drawn from the input grammar's alphabet, duplicated slices,
/// and long digit runs.
pub fn mutate_text<R: Rng>(rng: &mut R, text: &str) -> String {
    let mut bytes = text.as_bytes().to_vec();
    let pick = |rng: &mut R| FUZZ_ALPHABET[rng.gen_range(0..FUZZ_ALPHABET.len())];
    for _ in 0..rng.gen_range(1..=4) {
        let len = bytes.len();
        match rng.gen_range(0..5) {
            0 if len > 0 => {
                bytes.remove(rng.gen_range(0..len));
            }
            1 => {
                let c = pick(rng);
                bytes.insert(rng.gen_range(0..=len), c);
            }
            2 if len > 0 => {
                let i = rng.gen_range(0..len);
                bytes[i] = pick(rng);
            }
            3 if len > 1 => {
                let (a, b) = (rng.gen_range(0..len), rng.gen_range(0..len));
                let chunk = bytes[a.min(b)..a.max(b)].to_vec();
                let at = rng.gen_range(0..=len);
                bytes.splice(at..at, chunk);
            }
            _ => {
                let at = rng.gen_range(0..=len);
                let digits: Vec<u8> = (0..rng.gen_range(1..25))
                    .map(|_| b'0' + rng.gen_range(0..10u8))
                    .collect();
                bytes.splice(at..at, digits);
            }
        }
    }
    String::from_utf8_lossy(&bytes).into_owned()
}

/// Random bytes from the grammar alphabet.
pub fn random_text<R: Rng>(rng: &mut R, max_len: usize) -> String {
    (0..rng.gen_range(0..=max_len))
        .map(|_| FUZZ_ALPHABET[rng.gen_range(0..FUZZ_ALPHABET.len())] as char)
        .collect()
}
