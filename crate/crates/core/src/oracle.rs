//! Brute-force ground truth: evaluate every equation at every point of
//! `F_q^{n_t}`.
//!
//! Nothing here touches Smith forms, index tables or the counting module;
//! only field arithmetic and the system model are shared.

use std::collections::BTreeMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::field::FieldElement;
use crate::variety::VarietySpec;

/// Default bound on `q^{n_t}`.
pub const DEFAULT_ORACLE_CAP: u64 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{q}^{n} points exceed the oracle cap {cap}")]
    CapExceeded { q: u64, n: usize, cap: u64 },
    #[error("point {point:?} satisfies the system but equations disagree on the number of nonzero monomials: {counts:?}")]
    StructureViolation { point: Vec<u32>, counts: Vec<usize> },
}

fn point_space(spec: &VarietySpec, cap: u64) -> Result<u64, OracleError> {
    let q = spec.field().order() as u64;
    let n = spec.variables();
    q.checked_pow(n as u32)
        .filter(|&s| s <= cap)
        .ok_or(OracleError::CapExceeded { q, n, cap })
}

/// Visit every point, splitting the space into disjoint ranges of the
/// leading coordinates for parallel workers.
fn scan<A, V, M>(spec: &VarietySpec, cap: u64, visit: V, merge: M) -> Result<A, OracleError>
where
    A: Default + Send,
    V: Fn(&[FieldElement], &mut A) -> Result<(), OracleError> + Sync,
    M: Fn(A, A) -> A + Sync + Send,
{
    point_space(spec, cap)?;
    let q = spec.field().order();
    let n = spec.variables();
    // Outer coordinates are the trailing ones; the odometer runs over the rest.
    let mut outer = 0;
    let mut chunks = 1u64;
    while outer < n && chunks < 256 {
        outer += 1;
        chunks *= q as u64;
    }
    let inner = n - outer;
    (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut x = vec![FieldElement::ZERO; n];
            let mut c = chunk;
            for slot in x[inner..].iter_mut() {
                *slot = FieldElement::from_code((c % q as u64) as u32);
                c /= q as u64;
            }
            let mut acc = A::default();
            loop {
                visit(&x, &mut acc)?;
                let mut pos = 0;
                loop {
                    if pos == inner {
                        return Ok(acc);
                    }
                    let next = x[pos].code() + 1;
                    if next < q {
                        x[pos] = FieldElement::from_code(next);
                        break;
                    }
                    x[pos] = FieldElement::ZERO;
                    pos += 1;
                }
            }
        })
        .try_reduce(A::default, |a, b| Ok(merge(a, b)))
}

/// Field tables built once per scan: `x^e` for every exponent in the system,
/// plus addition and multiplication tables when `q` is small.
struct Evaluator<'a> {
    spec: &'a VarietySpec,
    q: usize,
    add: Option<Vec<u32>>,
    mul: Option<Vec<u32>>,
    /// `powers[k][i][j][x] = x^{e_kij}`.
    powers: Vec<Vec<Vec<Vec<u32>>>>,
}

const TABLE_ORDER: usize = 256;

impl<'a> Evaluator<'a> {
    fn new(spec: &'a VarietySpec) -> Self {
        let f = spec.field();
        let q = f.order() as usize;
        let table = |op: &dyn Fn(FieldElement, FieldElement) -> FieldElement| {
            (q <= TABLE_ORDER).then(|| {
                (0..q * q)
                    .map(|ab| {
                        let (a, b) = ((ab / q) as u32, (ab % q) as u32);
                        op(FieldElement::from_code(a), FieldElement::from_code(b)).code()
                    })
                    .collect()
            })
        };
        let powers = (0..spec.equations())
            .map(|k| {
                (0..spec.monomials())
                    .map(|i| {
                        spec.exponents(k, i)
                            .iter()
                            .map(|&e| f.elements().map(|x| f.pow(x, e).code()).collect())
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Evaluator {
            spec,
            q,
            add: table(&|a, b| f.add(a, b)),
            mul: table(&|a, b| f.mul(a, b)),
            powers,
        }
    }

    fn add(&self, a: u32, b: u32) -> u32 {
        match &self.add {
            Some(t) => t[a as usize * self.q + b as usize],
            None => self
                .spec
                .field()
                .add(FieldElement::from_code(a), FieldElement::from_code(b))
                .code(),
        }
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        match &self.mul {
            Some(t) => t[a as usize * self.q + b as usize],
            None => self
                .spec
                .field()
                .mul(FieldElement::from_code(a), FieldElement::from_code(b))
                .code(),
        }
    }

    fn monomial(&self, k: usize, i: usize, x: &[FieldElement]) -> u32 {
        self.powers[k][i]
            .iter()
            .zip(x)
            .fold(1, |acc, (pw, xj)| self.mul(acc, pw[xj.code() as usize]))
    }

    fn satisfies(&self, x: &[FieldElement]) -> bool {
        let f = self.spec.field();
        (0..self.spec.equations()).all(|k| {
            let mut acc = f.neg(self.spec.constant(k)).code();
            for i in 0..self.spec.monomials() {
                let term = self.mul(self.spec.coefficient(k, i).code(), self.monomial(k, i, x));
                acc = self.add(acc, term);
            }
            acc == 0
        })
    }
}

/// Number of points of `F_q^{n_t}` on the variety.
pub fn brute_count(spec: &VarietySpec, cap: u64) -> Result<u64, OracleError> {
    point_space(spec, cap)?;
    let ev = Evaluator::new(spec);
    scan(
        spec,
        cap,
        |x, acc: &mut u64| {
            if ev.satisfies(x) {
                *acc += 1;
            }
            Ok(())
        },
        |a, b| a + b,
    )
}

/// Solution counts `M_n` grouped by the number `n` of nonzero monomials in
/// each equation, for every `n` in `0..=r_t`.
pub fn partition_profile(
    spec: &VarietySpec,
    cap: u64,
) -> Result<BTreeMap<usize, u64>, OracleError> {
    point_space(spec, cap)?;
    let rt = spec.monomials();
    let ev = Evaluator::new(spec);
    let counts = scan(
        spec,
        cap,
        |x, acc: &mut Vec<u64>| {
            if acc.is_empty() {
                acc.resize(rt + 1, 0);
            }
            if !ev.satisfies(x) {
                return Ok(());
            }
            let nonzero: Vec<usize> = (0..spec.equations())
                .map(|k| (0..rt).filter(|&i| ev.monomial(k, i, x) != 0).count())
                .collect();
            if nonzero.iter().any(|&c| c != nonzero[0]) {
                return Err(OracleError::StructureViolation {
                    point: x.iter().map(|e| e.code()).collect(),
                    counts: nonzero,
                });
            }
            acc[nonzero[0]] += 1;
            Ok(())
        },
        |a, b| {
            if a.is_empty() {
                return b;
            }
            if b.is_empty() {
                return a;
            }
            a.iter().zip(&b).map(|(x, y)| x + y).collect()
        },
    )?;
    Ok((0..=rt)
        .map(|n| (n, counts.get(n).copied().unwrap_or(0)))
        .collect())
}
