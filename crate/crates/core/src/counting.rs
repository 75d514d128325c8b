//! Rational point counts through Smith normal forms of the level matrices.
//!
//! For each level `l` the points whose first `r_l` monomials (per equation)
//! are nonzero and the rest vanish contribute
//!
//! ```text
//! N_l * q^(n_t - n_{l+1}) * (q-1)^(n_l - s_l) * (q^(n_{l+1}-n_l) - (q-1)^(n_{l+1}-n_l)) * prod_j gcd(q-1, d_j)
//! ```
//!
//! (the two middle factors drop out at `l = t`), where `N_l` counts the
//! nonzero solutions `u` of the linear system `sum_i a_ki u_ki = b_k` whose
//! index vector lies in the image of the level matrix mod `q-1`. Points with a
//! vanishing coordinate among `x_1..x_{n_1}` contribute only when every `b_k`
//! is zero.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::congruence::ResidueFilter;
use crate::field::{FieldElement, FieldError, FieldSpec, LogTable};
use crate::intlinalg::{smith_normal_form, verify_snf, IntMatrix, LinalgError, SnfDecomposition};
use crate::variety::{VarietyError, VarietySpec};

/// Default bound on enumerated candidates (product sizes, join work).
pub const DEFAULT_PRODUCT_CAP: u64 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CountError {
    #[error(transparent)]
    Variety(#[from] VarietyError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("{what}: {size} exceeds the cap {cap}")]
    ResourceLimit {
        what: &'static str,
        size: String,
        cap: u64,
    },
    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
}

/// How `N_l` filters the candidate index vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FilterStrategy {
    /// Bucket each equation's solutions by their residues under the filter
    /// and join the buckets.
    #[default]
    Grouped,
    /// Stream the full product `S_1 x ... x S_m` through the filter.
    Direct,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LevelPath {
    General,
    ClosedForm,
}

impl LevelPath {
    pub fn as_str(self) -> &'static str {
        match self {
            LevelPath::General => "general",
            LevelPath::ClosedForm => "closed_form",
        }
    }
}

#[derive(Debug, Clone)]
pub struct CountOptions {
    pub strategy: FilterStrategy,
    pub product_cap: u64,
    /// Primitive element for the index tables; the least one when `None`.
    pub alpha: Option<FieldElement>,
    /// Use the closed form on levels whose invariant factors are all prime
    /// to `q-1` and whose matrix has full row rank.
    pub closed_form: bool,
    /// Also run the general path on closed-form levels and compare.
    pub cross_check: bool,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions {
            strategy: FilterStrategy::Grouped,
            product_cap: DEFAULT_PRODUCT_CAP,
            alpha: None,
            closed_form: true,
            cross_check: false,
        }
    }
}

fn big(v: u64) -> BigInt {
    BigInt::from(v)
}

fn to_unsigned(v: BigInt) -> BigUint {
    v.to_biguint().expect("count is nonnegative")
}

/// Solutions of `c_1 x_1 + ... + c_k x_k = c` with every `x_i` nonzero, for
/// nonzero `c_i`; depends only on `k` and whether `c = 0`.
pub fn linear_nonzero_count(k: usize, c_is_zero: bool, q: u64) -> BigUint {
    let qm1: BigInt = big(q) - 1;
    let sign = if k.is_multiple_of(2) {
        BigInt::one()
    } else {
        -BigInt::one()
    };
    let top = num_traits::pow(qm1.clone(), k);
    let num = if c_is_zero {
        top + sign * qm1
    } else {
        top - sign
    };
    to_unsigned(num / big(q))
}

/// Point count of a single square diagonal equation in `n` variables whose
/// exponent determinant is prime to `q-1`:
/// `q^n - (q-1)^n + ((q-1)^n + (-1)^n (q-1))/q` when `b = 0`, else
/// `((q-1)^n - (-1)^n)/q`.
pub fn square_unimodular_count(n: usize, b_is_zero: bool, q: u64) -> BigUint {
    let qm1: BigInt = big(q) - 1;
    let sign = if n.is_multiple_of(2) {
        BigInt::one()
    } else {
        -BigInt::one()
    };
    let top = num_traits::pow(qm1.clone(), n);
    let v = if b_is_zero {
        num_traits::pow(big(q), n) - &top + (&top + sign * &qm1) / big(q)
    } else {
        (top - sign) / big(q)
    };
    to_unsigned(v)
}

/// Nonzero solutions of `m` independent equations of `k` terms each, of which
/// `zero_count` have right-hand side 0.
pub fn independent_nonzero_count(m: usize, k: usize, zero_count: usize, q: u64) -> BigUint {
    assert!(zero_count <= m, "more zero constants than equations");
    let qm1: BigInt = big(q) - 1;
    let sign = if k.is_multiple_of(2) {
        BigInt::one()
    } else {
        -BigInt::one()
    };
    let zero_eq = &qm1 * (num_traits::pow(qm1.clone(), k - 1) + &sign);
    let nonzero_eq = num_traits::pow(qm1.clone(), k) - &sign;
    let num = num_traits::pow(zero_eq, zero_count) * num_traits::pow(nonzero_eq, m - zero_count);
    let den = num_traits::pow(big(q), m);
    debug_assert!(num.is_multiple_of(&den));
    to_unsigned(num / den)
}

/// `gcd(q-1, d_j)` for each invariant factor.
pub fn gcd_factors(snf: &SnfDecomposition, q: u64) -> Vec<BigUint> {
    let qm1 = big(q - 1);
    snf.d.iter().map(|d| to_unsigned(d.gcd(&qm1))).collect()
}

/// Whether a level with `rows = m r_l` rows has SNF shape `(D 0)` with
/// `gcd(det D, q-1) = 1`.
pub fn level_admits_closed_form(snf: &SnfDecomposition, rows: usize, q: u64) -> bool {
    let det: BigInt = snf.d.iter().product();
    snf.rank() == rows && det.gcd(&big(q - 1)).is_one()
}

/// Level matrix and its verified Smith normal form.
pub fn level_snf(
    spec: &VarietySpec,
    l: usize,
) -> Result<(IntMatrix, SnfDecomposition), CountError> {
    let matrix = spec.level_matrix(l)?;
    let snf = smith_normal_form(&matrix)?;
    if !verify_snf(&matrix, &snf)? {
        return Err(CountError::InvariantViolation(format!(
            "Smith form of level {l} failed verification"
        )));
    }
    Ok((matrix, snf))
}

pub fn closed_form_applicable(spec: &VarietySpec) -> Result<bool, CountError> {
    let q = spec.field().order() as u64;
    for l in 1..=spec.blocks() {
        let (_, snf) = level_snf(spec, l)?;
        if !level_admits_closed_form(&snf, spec.equations() * spec.r_at(l), q) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Index vectors of the nonzero solutions of one equation truncated to
/// `width` terms, stored flat.
#[derive(Debug, Clone)]
pub struct SolutionSet {
    width: usize,
    data: Vec<u32>,
}

impl SolutionSet {
    pub fn len(&self) -> usize {
        self.data.len() / self.width
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u32]> + '_ {
        self.data.chunks_exact(self.width)
    }
}

/// Solve `sum_{i<width} a_ki u_i = b_k` over `(F_q^*)^width`: the first
/// `width-1` unknowns range freely and the last is determined.
pub fn equation_solutions(
    spec: &VarietySpec,
    k: usize,
    width: usize,
    logs: &LogTable,
    cap: u64,
) -> Result<SolutionSet, CountError> {
    let f = spec.field();
    let group = logs.group_order() as u64;
    let free = width - 1;
    let candidates = BigUint::from(group).pow(free as u32);
    if candidates > BigUint::from(cap) {
        return Err(CountError::ResourceLimit {
            what: "free unknowns of one equation",
            size: candidates.to_string(),
            cap,
        });
    }
    let a = spec.coefficients(k);
    let last_inv = f.inv(a[free])?;
    let b = spec.constant(k);
    let mut data = Vec::new();
    let mut idx = vec![0u32; free];
    loop {
        let partial = idx.iter().zip(a).fold(FieldElement::ZERO, |acc, (&e, &c)| {
            f.add(acc, f.mul(c, logs.power(e as u64)))
        });
        let last = f.mul(f.sub(b, partial), last_inv);
        if let Some(li) = logs.index(last) {
            data.extend_from_slice(&idx);
            data.push(li);
        }
        let mut pos = 0;
        loop {
            if pos == free {
                return Ok(SolutionSet { width, data });
            }
            idx[pos] += 1;
            if (idx[pos] as u64) < group {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// `N_l` together with the per-equation solution counts `|S_k|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NlCount {
    pub count: BigUint,
    pub set_sizes: Vec<BigUint>,
}

fn count_direct(
    sets: &[SolutionSet],
    filter: &ResidueFilter,
    cap: u64,
) -> Result<BigUint, CountError> {
    let product: BigUint = sets.iter().map(|s| BigUint::from(s.len())).product();
    if product > BigUint::from(cap) {
        return Err(CountError::ResourceLimit {
            what: "solution product",
            size: product.to_string(),
            cap,
        });
    }
    if product.is_zero() {
        return Ok(BigUint::zero());
    }
    let width = sets[0].width;
    let total = width * sets.len();
    let rest = &sets[1..];
    let hits: u64 = sets[0]
        .data
        .par_chunks_exact(width)
        .map(|head| {
            let mut rhs = vec![0u64; total];
            for (slot, &v) in rhs.iter_mut().zip(head) {
                *slot = v as u64;
            }
            let mut pos = vec![0usize; rest.len()];
            let mut hits = 0u64;
            loop {
                for (j, set) in rest.iter().enumerate() {
                    let row = &set.data[pos[j] * width..(pos[j] + 1) * width];
                    for (slot, &v) in rhs[(j + 1) * width..(j + 2) * width].iter_mut().zip(row) {
                        *slot = v as u64;
                    }
                }
                if filter.accepts(&rhs) {
                    hits += 1;
                }
                let mut j = 0;
                loop {
                    if j == rest.len() {
                        return hits;
                    }
                    pos[j] += 1;
                    if pos[j] < rest[j].len() {
                        break;
                    }
                    pos[j] = 0;
                    j += 1;
                }
            }
        })
        .sum();
    Ok(BigUint::from(hits))
}

type Histogram = HashMap<Vec<u32>, u128>;

fn count_grouped(
    sets: &[SolutionSet],
    filter: &ResidueFilter,
    cap: u64,
) -> Result<BigUint, CountError> {
    if filter.is_trivial() || sets.iter().any(SolutionSet::is_empty) {
        return Ok(sets.iter().map(|s| BigUint::from(s.len())).product());
    }
    let moduli: Vec<u32> = filter.divisors().into_iter().map(|g| g as u32).collect();
    let histograms: Vec<Histogram> = sets
        .par_iter()
        .enumerate()
        .map(|(k, set)| {
            let mut h = Histogram::new();
            for s in set.iter() {
                let part: Vec<u64> = s.iter().map(|&v| v as u64).collect();
                *h.entry(filter.partial_residues(k * set.width, &part))
                    .or_default() += 1;
            }
            h
        })
        .collect();

    let overflow = || CountError::ResourceLimit {
        what: "joined multiplicities",
        size: "more than 2^128".into(),
        cap,
    };
    let (last, init) = histograms.split_last().expect("at least one equation");
    let mut acc: Histogram = HashMap::from([(vec![0u32; moduli.len()], 1u128)]);
    for h in init {
        let work = acc.len() as u128 * h.len() as u128;
        if work > cap as u128 {
            return Err(CountError::ResourceLimit {
                what: "residue join",
                size: work.to_string(),
                cap,
            });
        }
        let mut next = Histogram::with_capacity(acc.len().max(h.len()));
        for (ka, &ca) in &acc {
            for (kb, &cb) in h {
                let key: Vec<u32> = ka
                    .iter()
                    .zip(kb)
                    .zip(&moduli)
                    .map(|((&x, &y), &g)| (x + y) % g)
                    .collect();
                let c = ca.checked_mul(cb).ok_or_else(overflow)?;
                let slot = next.entry(key).or_default();
                *slot = slot.checked_add(c).ok_or_else(overflow)?;
            }
        }
        acc = next;
    }
    let mut hits = BigUint::zero();
    for (key, &c) in &acc {
        let need: Vec<u32> = key
            .iter()
            .zip(&moduli)
            .map(|(&x, &g)| (g - x) % g)
            .collect();
        if let Some(&d) = last.get(&need) {
            hits += BigUint::from(c) * BigUint::from(d);
        }
    }
    Ok(hits)
}

/// `N_l` by enumeration: the nonzero solutions of the level-`l` linear system
/// whose index vectors pass the solvability test of the level matrix mod `q-1`.
pub fn count_nl(
    spec: &VarietySpec,
    l: usize,
    snf: &SnfDecomposition,
    logs: &LogTable,
    strategy: FilterStrategy,
    cap: u64,
) -> Result<NlCount, CountError> {
    if l == 0 || l > spec.blocks() {
        return Err(VarietyError::LevelOutOfRange {
            level: l,
            t: spec.blocks(),
        }
        .into());
    }
    let width = spec.r_at(l);
    if snf.u.rows() != spec.equations() * width {
        return Err(CountError::InvariantViolation(format!(
            "Smith form has {} rows, level {l} has {}",
            snf.u.rows(),
            spec.equations() * width
        )));
    }
    let sets = (0..spec.equations())
        .map(|k| equation_solutions(spec, k, width, logs, cap))
        .collect::<Result<Vec<_>, _>>()?;
    let filter = ResidueFilter::new(snf, logs.group_order() as u64);
    let count = match strategy {
        FilterStrategy::Grouped => count_grouped(&sets, &filter, cap)?,
        FilterStrategy::Direct => count_direct(&sets, &filter, cap)?,
    };
    Ok(NlCount {
        count,
        set_sizes: sets.iter().map(|s| BigUint::from(s.len())).collect(),
    })
}

/// `N_l` computed with a fresh Smith form, the entry point for comparing
/// primitive elements.
pub fn count_nl_with(
    spec: &VarietySpec,
    l: usize,
    logs: &LogTable,
    strategy: FilterStrategy,
) -> Result<BigUint, CountError> {
    let (_, snf) = level_snf(spec, l)?;
    Ok(count_nl(spec, l, &snf, logs, strategy, DEFAULT_PRODUCT_CAP)?.count)
}

/// Contribution of the points with some of `x_1..x_{n_1}` zero, present only
/// when every constant vanishes.
pub fn zero_term(spec: &VarietySpec) -> BigUint {
    let q = BigUint::from(spec.field().order());
    let qm1 = &q - 1u32;
    let (n1, nt) = (spec.n_at(1), spec.variables());
    num_traits::pow(q.clone(), nt - n1) * (num_traits::pow(q, n1) - num_traits::pow(qm1, n1))
}

/// Contribution of level `l` given `N_l` and the level's Smith form.
pub fn level_term(
    spec: &VarietySpec,
    l: usize,
    n_l: &BigUint,
    snf: &SnfDecomposition,
) -> Result<BigUint, CountError> {
    let t = spec.blocks();
    if l == 0 || l > t {
        return Err(VarietyError::LevelOutOfRange { level: l, t }.into());
    }
    let q = BigUint::from(spec.field().order());
    let qm1 = &q - 1u32;
    let nl = spec.n_at(l);
    let s = snf.rank();
    if s > nl {
        return Err(CountError::InvariantViolation(format!(
            "rank {s} exceeds {nl} columns at level {l}"
        )));
    }
    let gprod: BigUint = gcd_factors(snf, spec.field().order() as u64)
        .into_iter()
        .product();
    let mut term = n_l * num_traits::pow(qm1.clone(), nl - s) * gprod;
    if l < t {
        let (next, nt) = (spec.n_at(l + 1), spec.variables());
        let gap = next - nl;
        term *= num_traits::pow(q.clone(), nt - next);
        term *= num_traits::pow(q.clone(), gap) - num_traits::pow(qm1, gap);
    }
    Ok(term)
}

/// Everything computed for one level.
#[derive(Debug, Clone)]
pub struct LevelData {
    pub l: usize,
    pub matrix: IntMatrix,
    pub snf: SnfDecomposition,
    pub gcds: Vec<BigUint>,
    /// `|S_k|` for each equation.
    pub set_sizes: Vec<BigUint>,
    pub n_l: BigUint,
    pub term: BigUint,
    pub path: LevelPath,
}

impl LevelData {
    /// `s_l`.
    pub fn rank(&self) -> usize {
        self.snf.rank()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Timings {
    pub snf: Duration,
    pub logs: Duration,
    pub enumeration: Duration,
    pub total: Duration,
}

#[derive(Debug, Clone)]
pub struct CountReport {
    pub field: FieldSpec,
    pub equations: usize,
    pub r: Vec<usize>,
    pub n: Vec<usize>,
    /// The primitive element, when any level took the general path.
    pub alpha: Option<FieldElement>,
    pub levels: Vec<LevelData>,
    /// `Some` iff every constant is zero.
    pub zero_term: Option<BigUint>,
    pub total: BigUint,
    pub timings: Timings,
}

impl CountReport {
    pub fn includes_zero_level(&self) -> bool {
        self.zero_term.is_some()
    }

    pub fn level(&self, l: usize) -> &LevelData {
        &self.levels[l - 1]
    }
}

/// Count the rational points of `spec`.
pub fn count_points(spec: &VarietySpec, opts: &CountOptions) -> Result<CountReport, CountError> {
    let started = Instant::now();
    let field = spec.field();
    let q = field.order() as u64;
    let m = spec.equations();
    let zeros = spec.zero_constants();
    let mut timings = Timings::default();

    let mut logs: Option<LogTable> = None;
    let mut ensure_logs = |timings: &mut Timings| -> Result<LogTable, CountError> {
        if let Some(t) = &logs {
            return Ok(t.clone());
        }
        let t0 = Instant::now();
        let alpha = opts.alpha.unwrap_or_else(|| field.primitive_element());
        let table = LogTable::new(field, alpha)?;
        timings.logs += t0.elapsed();
        logs = Some(table.clone());
        Ok(table)
    };

    let mut levels = Vec::with_capacity(spec.blocks());
    let mut alpha = None;
    for l in 1..=spec.blocks() {
        let t0 = Instant::now();
        let (matrix, snf) = level_snf(spec, l)?;
        timings.snf += t0.elapsed();

        let width = spec.r_at(l);
        let bound = independent_nonzero_count(m, width, zeros, q);
        let closed = opts.closed_form && level_admits_closed_form(&snf, m * width, q);

        let t0 = Instant::now();
        let (n_l, set_sizes, path) = if closed {
            if opts.cross_check {
                let table = ensure_logs(&mut timings)?;
                alpha = Some(table.alpha());
                let general = count_nl(spec, l, &snf, &table, opts.strategy, opts.product_cap)?;
                if general.count != bound {
                    return Err(CountError::InvariantViolation(format!(
                        "level {l}: enumeration gives {} but the closed form gives {bound}",
                        general.count
                    )));
                }
            }
            let sizes = (0..m)
                .map(|k| linear_nonzero_count(width, spec.constant(k).is_zero(), q))
                .collect();
            (bound, sizes, LevelPath::ClosedForm)
        } else {
            let table = ensure_logs(&mut timings)?;
            alpha = Some(table.alpha());
            let res = count_nl(spec, l, &snf, &table, opts.strategy, opts.product_cap)?;
            let product: BigUint = res.set_sizes.iter().product();
            if product != bound {
                return Err(CountError::InvariantViolation(format!(
                    "level {l}: |S_1 x ... x S_m| = {product}, expected {bound}"
                )));
            }
            if res.count > bound {
                return Err(CountError::InvariantViolation(format!(
                    "level {l}: N_l = {} exceeds {bound}",
                    res.count
                )));
            }
            (res.count, res.set_sizes, LevelPath::General)
        };
        timings.enumeration += t0.elapsed();

        let term = level_term(spec, l, &n_l, &snf)?;
        levels.push(LevelData {
            l,
            gcds: gcd_factors(&snf, q),
            matrix,
            snf,
            set_sizes,
            n_l,
            term,
            path,
        });
    }

    let zero = spec.homogeneous().then(|| zero_term(spec));
    let total: BigUint =
        levels.iter().map(|lv| &lv.term).sum::<BigUint>() + zero.clone().unwrap_or_default();
    let space = num_traits::pow(BigUint::from(q), spec.variables());
    if total > space {
        return Err(CountError::InvariantViolation(format!(
            "total {total} exceeds q^n_t = {space}"
        )));
    }
    timings.total = started.elapsed();
    Ok(CountReport {
        field: field.clone(),
        equations: m,
        r: spec.r().to_vec(),
        n: spec.n().to_vec(),
        alpha,
        levels,
        zero_term: zero,
        total,
        timings,
    })
}

/// Total as `u64`, when it fits.
pub fn total_u64(report: &CountReport) -> Option<u64> {
    report.total.to_u64()
}
