//! Systems of staircase diagonal-monomial equations
//!
//! ```text
//! f_k(x) = sum_{i=1}^{r_t} a_ki * x^{E_i^(k)} - b_k,   k = 1..m
//! ```
//!
//! where monomial `i` of every equation involves exactly the variables
//! `x_1..x_{n_j}` of its block `j` (`r_{j-1} < i <= r_j`), with
//! `0 = r_0 < r_1 < ... < r_t` and `1 <= n_1 < ... < n_t`.
//!
//! Equations and monomials are indexed from 0; levels from 1 (level 0 is the
//! locus where some of `x_1..x_{n_1}` vanishes).

use num_bigint::BigInt;
use thiserror::Error;

use crate::field::{FieldElement, FieldSpec};
use crate::intlinalg::{stack_rows, IntMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VarietyError {
    #[error("coefficient a[{equation}][{monomial}] is zero")]
    ZeroCoefficient { equation: usize, monomial: usize },
    #[error(
        "exponent of x{variable} in monomial {monomial} of equation {equation} is not positive"
    )]
    NonPositiveExponent {
        equation: usize,
        monomial: usize,
        variable: usize,
    },
    #[error("block shape violation: {0}")]
    BlockShapeViolation(String),
    #[error("block boundaries must be strictly increasing: {0}")]
    NonIncreasingBlocks(String),
    #[error("element {0} is not in the field")]
    NotInField(String),
    #[error("level {level} out of range 1..={t}")]
    LevelOutOfRange { level: usize, t: usize },
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
}

/// Unvalidated system data, as produced by the parsers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawVarietySpec {
    pub field: FieldSpec,
    /// Cumulative monomial counts `r_1 < ... < r_t`.
    pub r: Vec<usize>,
    /// Variable counts `n_1 < ... < n_t`.
    pub n: Vec<usize>,
    /// `a[k][i]`, one row per equation.
    pub a: Vec<Vec<FieldElement>>,
    pub b: Vec<FieldElement>,
    /// `e[k][i]` lists the exponents of `x_1, x_2, ...` in monomial `i` of
    /// equation `k`.
    pub e: Vec<Vec<Vec<i64>>>,
}

/// A validated member of the family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarietySpec {
    field: FieldSpec,
    r: Vec<usize>,
    n: Vec<usize>,
    a: Vec<Vec<FieldElement>>,
    b: Vec<FieldElement>,
    e: Vec<Vec<Vec<u64>>>,
}

impl RawVarietySpec {
    pub fn validate(self) -> Result<VarietySpec, VarietyError> {
        VarietySpec::validate(self)
    }
}

fn check_increasing(name: &str, v: &[usize], min_first: usize) -> Result<(), VarietyError> {
    if v.is_empty() {
        return Err(VarietyError::NonIncreasingBlocks(format!(
            "{name} is empty"
        )));
    }
    if v[0] < min_first || v.windows(2).any(|w| w[0] >= w[1]) {
        return Err(VarietyError::NonIncreasingBlocks(format!("{name} = {v:?}")));
    }
    Ok(())
}

impl VarietySpec {
    pub fn validate(raw: RawVarietySpec) -> Result<Self, VarietyError> {
        let RawVarietySpec {
            field,
            r,
            n,
            a,
            b,
            e,
        } = raw;
        check_increasing("r", &r, 1)?;
        check_increasing("n", &n, 1)?;
        if r.len() != n.len() {
            return Err(VarietyError::NonIncreasingBlocks(format!(
                "{} monomial blocks but {} variable blocks",
                r.len(),
                n.len()
            )));
        }
        let m = b.len();
        if m == 0 {
            return Err(VarietyError::BlockShapeViolation("no equations".into()));
        }
        if a.len() != m || e.len() != m {
            return Err(VarietyError::BlockShapeViolation(format!(
                "{m} constants, {} coefficient rows, {} exponent rows",
                a.len(),
                e.len()
            )));
        }
        let rt = *r.last().unwrap();
        let widths = block_widths(&r, &n);
        let mut exps = Vec::with_capacity(m);
        for k in 0..m {
            if a[k].len() != rt || e[k].len() != rt {
                return Err(VarietyError::BlockShapeViolation(format!(
                    "equation {k} has {} coefficients and {} monomials, expected {rt}",
                    a[k].len(),
                    e[k].len()
                )));
            }
            let mut rows = Vec::with_capacity(rt);
            for i in 0..rt {
                if !field.contains(a[k][i]) {
                    return Err(VarietyError::NotInField(format!("{:?}", a[k][i])));
                }
                if a[k][i].is_zero() {
                    return Err(VarietyError::ZeroCoefficient {
                        equation: k,
                        monomial: i,
                    });
                }
                let row = &e[k][i];
                if let Some(j) = row.iter().position(|&x| x <= 0) {
                    return Err(VarietyError::NonPositiveExponent {
                        equation: k,
                        monomial: i,
                        variable: j + 1,
                    });
                }
                if row.len() != widths[i] {
                    return Err(VarietyError::BlockShapeViolation(format!(
                        "monomial {i} of equation {k} involves x1..x{} but its block uses x1..x{}",
                        row.len(),
                        widths[i]
                    )));
                }
                rows.push(row.iter().map(|&x| x as u64).collect());
            }
            exps.push(rows);
            if !field.contains(b[k]) {
                return Err(VarietyError::NotInField(format!("{:?}", b[k])));
            }
        }
        Ok(VarietySpec {
            field,
            r,
            n,
            a,
            b,
            e: exps,
        })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    /// Number of equations `m`.
    pub fn equations(&self) -> usize {
        self.b.len()
    }

    /// Number of blocks `t`.
    pub fn blocks(&self) -> usize {
        self.r.len()
    }

    /// `r_1..r_t`.
    pub fn r(&self) -> &[usize] {
        &self.r
    }

    /// `n_1..n_t`.
    pub fn n(&self) -> &[usize] {
        &self.n
    }

    /// Monomials per equation, `r_t`.
    pub fn monomials(&self) -> usize {
        *self.r.last().unwrap()
    }

    /// Variables in the ambient space, `n_t`.
    pub fn variables(&self) -> usize {
        *self.n.last().unwrap()
    }

    pub fn coefficient(&self, k: usize, i: usize) -> FieldElement {
        self.a[k][i]
    }

    pub fn coefficients(&self, k: usize) -> &[FieldElement] {
        &self.a[k]
    }

    pub fn constant(&self, k: usize) -> FieldElement {
        self.b[k]
    }

    pub fn constants(&self) -> &[FieldElement] {
        &self.b
    }

    /// Exponents of `x_1..x_w` in monomial `i` of equation `k`.
    pub fn exponents(&self, k: usize, i: usize) -> &[u64] {
        &self.e[k][i]
    }

    /// Whether every `b_k` is zero.
    pub fn homogeneous(&self) -> bool {
        self.b.iter().all(|b| b.is_zero())
    }

    /// Number of equations with `b_k = 0`.
    pub fn zero_constants(&self) -> usize {
        self.b.iter().filter(|b| b.is_zero()).count()
    }

    /// Block (1-based level) that monomial `i` belongs to.
    pub fn block_of(&self, i: usize) -> usize {
        self.r
            .iter()
            .position(|&r| i < r)
            .expect("monomial index in range")
            + 1
    }

    fn check_level(&self, l: usize) -> Result<(), VarietyError> {
        if l == 0 || l > self.blocks() {
            return Err(VarietyError::LevelOutOfRange {
                level: l,
                t: self.blocks(),
            });
        }
        Ok(())
    }

    /// `r_l` for `0 <= l <= t` (with `r_0 = 0`).
    pub fn r_at(&self, l: usize) -> usize {
        if l == 0 {
            0
        } else {
            self.r[l - 1]
        }
    }

    /// `n_l` for `1 <= l <= t`.
    pub fn n_at(&self, l: usize) -> usize {
        self.n[l - 1]
    }

    /// Exponent matrix of equation `k` truncated to level `l`:
    /// the first `r_l` rows and `n_l` columns, zero-padded.
    pub fn equation_level_matrix(&self, k: usize, l: usize) -> Result<IntMatrix, VarietyError> {
        self.check_level(l)?;
        if k >= self.equations() {
            return Err(VarietyError::IndexOutOfRange(format!("equation {k}")));
        }
        let (rl, nl) = (self.r_at(l), self.n_at(l));
        let mut data = Vec::with_capacity(rl * nl);
        for i in 0..rl {
            let row = &self.e[k][i];
            data.extend((0..nl).map(|j| BigInt::from(row.get(j).copied().unwrap_or(0))));
        }
        Ok(IntMatrix::new(rl, nl, data).expect("dimensions are positive"))
    }

    /// The `m r_l x n_l` matrix stacking the level-`l` truncations of all
    /// equations.
    pub fn level_matrix(&self, l: usize) -> Result<IntMatrix, VarietyError> {
        self.check_level(l)?;
        let blocks = (0..self.equations())
            .map(|k| self.equation_level_matrix(k, l))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(stack_rows(&blocks).expect("blocks share n_l columns"))
    }

    /// `prod_j x_j^{e_kij}` over the monomial's support.
    pub fn evaluate_monomial(
        &self,
        k: usize,
        i: usize,
        x: &[FieldElement],
    ) -> Result<FieldElement, VarietyError> {
        if k >= self.equations() || i >= self.monomials() {
            return Err(VarietyError::IndexOutOfRange(format!(
                "monomial ({k}, {i})"
            )));
        }
        let exps = &self.e[k][i];
        if x.len() < exps.len() {
            return Err(VarietyError::IndexOutOfRange(format!(
                "point has {} coordinates, monomial needs {}",
                x.len(),
                exps.len()
            )));
        }
        Ok(exps
            .iter()
            .zip(x)
            .fold(FieldElement::ONE, |acc, (&e, &xj)| {
                self.field.mul(acc, self.field.pow(xj, e))
            }))
    }

    /// `f_k(x)`.
    pub fn evaluate_equation(
        &self,
        k: usize,
        x: &[FieldElement],
    ) -> Result<FieldElement, VarietyError> {
        let f = &self.field;
        let mut acc = f.neg(self.b[k]);
        for i in 0..self.monomials() {
            let mono = self.evaluate_monomial(k, i, x)?;
            acc = f.add(acc, f.mul(self.a[k][i], mono));
        }
        Ok(acc)
    }

    /// Back to the unvalidated form.
    pub fn to_raw(&self) -> RawVarietySpec {
        RawVarietySpec {
            field: self.field.clone(),
            r: self.r.clone(),
            n: self.n.clone(),
            a: self.a.clone(),
            b: self.b.clone(),
            e: self
                .e
                .iter()
                .map(|eq| {
                    eq.iter()
                        .map(|row| row.iter().map(|&x| x as i64).collect())
                        .collect()
                })
                .collect(),
        }
    }
}

/// Support width `n_{block(i)}` for every monomial `i`.
fn block_widths(r: &[usize], n: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(*r.last().unwrap_or(&0));
    let mut prev = 0;
    for (&rj, &nj) in r.iter().zip(n) {
        out.extend(std::iter::repeat_n(nj, rj - prev));
        prev = rj;
    }
    out
}
