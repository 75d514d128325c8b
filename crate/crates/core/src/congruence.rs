//! Linear congruence systems `H Y = B (mod m)` solved through the Smith normal
//! form of `H`.
//!
//! With `U H V = diag(d_1..d_r)` and `B' = U B`, the system is solvable iff
//! `gcd(m, d_i) | b'_i` for `i <= r` and `m | b'_i` for `i > r`; it then has
//! `m^(n-r) * prod gcd(m, d_i)` solutions in `(Z/m)^n`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::intlinalg::{smith_normal_form, IntMatrix, LinalgError, SnfDecomposition};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CongruenceError {
    #[error("coefficient matrix is zero")]
    ZeroMatrix,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("modulus must be at least 2")]
    InvalidModulus,
    #[error("enumeration of {size} candidates exceeds the cap {cap}")]
    CapExceeded { size: String, cap: u64 },
}

impl From<LinalgError> for CongruenceError {
    fn from(e: LinalgError) -> Self {
        match e {
            LinalgError::ZeroMatrix => CongruenceError::ZeroMatrix,
            other => CongruenceError::DimensionMismatch(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceSystem {
    h: IntMatrix,
    b: Vec<BigInt>,
    modulus: BigInt,
}

impl CongruenceSystem {
    pub fn new(h: IntMatrix, b: Vec<BigInt>, modulus: BigInt) -> Result<Self, CongruenceError> {
        if b.len() != h.rows() {
            return Err(CongruenceError::DimensionMismatch(format!(
                "{} right-hand sides for {} rows",
                b.len(),
                h.rows()
            )));
        }
        if modulus < BigInt::from(2) {
            return Err(CongruenceError::InvalidModulus);
        }
        Ok(CongruenceSystem { h, b, modulus })
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.h
    }

    pub fn rhs(&self) -> &[BigInt] {
        &self.b
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    fn snf(&self) -> Result<SnfDecomposition, CongruenceError> {
        Ok(smith_normal_form(&self.h)?)
    }
}

/// `B' = U B`, exact.
pub fn transformed_rhs(
    sys: &CongruenceSystem,
    snf: &SnfDecomposition,
) -> Result<Vec<BigInt>, CongruenceError> {
    if snf.u.cols() != sys.b.len() {
        return Err(CongruenceError::DimensionMismatch(format!(
            "U has {} columns, B has {} entries",
            snf.u.cols(),
            sys.b.len()
        )));
    }
    Ok(snf.u.mul_vec(&sys.b)?)
}

/// Per-row divisors of the solvability test: `gcd(m, d_i)` for the first
/// `r` rows and `m` for the rest.
pub fn row_moduli(snf: &SnfDecomposition, modulus: &BigInt) -> Vec<BigInt> {
    (0..snf.u.rows())
        .map(|i| match snf.d.get(i) {
            Some(d) => modulus.gcd(d),
            None => modulus.clone(),
        })
        .collect()
}

fn solvable_with(sys: &CongruenceSystem, snf: &SnfDecomposition) -> Result<bool, CongruenceError> {
    let bp = transformed_rhs(sys, snf)?;
    Ok(bp
        .iter()
        .zip(row_moduli(snf, &sys.modulus))
        .all(|(b, g)| b.mod_floor(&sys.modulus).is_multiple_of(&g)))
}

pub fn is_solvable(sys: &CongruenceSystem) -> Result<bool, CongruenceError> {
    let snf = sys.snf()?;
    solvable_with(sys, &snf)
}

/// Number of solutions in `[0, m)^n`.
pub fn count_solutions(sys: &CongruenceSystem) -> Result<BigUint, CongruenceError> {
    let snf = sys.snf()?;
    if !solvable_with(sys, &snf)? {
        return Ok(BigUint::zero());
    }
    let m = sys.modulus.magnitude();
    let free = sys.h.cols() - snf.rank();
    let mut count = num_traits::pow(m.clone(), free);
    for d in &snf.d {
        count *= m.gcd(d.magnitude());
    }
    Ok(count)
}

/// Exhaustive list of solutions in `[0, m)^n`, in odometer order (first
/// coordinate fastest). Refuses when `m^n` exceeds `cap`.
pub fn enumerate_solutions(
    sys: &CongruenceSystem,
    cap: u64,
) -> Result<Vec<Vec<u64>>, CongruenceError> {
    let n = sys.h.cols();
    let space = num_traits::pow(sys.modulus.clone(), n);
    let too_big = || CongruenceError::CapExceeded {
        size: space.to_string(),
        cap,
    };
    if space > BigInt::from(cap) {
        return Err(too_big());
    }
    let m = sys.modulus.to_u64().ok_or_else(too_big)?;
    let rows: Vec<Vec<u64>> = (0..sys.h.rows())
        .map(|i| {
            sys.h
                .row(i)
                .iter()
                .map(|a| a.mod_floor(&sys.modulus).to_u64().unwrap())
                .collect()
        })
        .collect();
    let rhs: Vec<u64> = sys
        .b
        .iter()
        .map(|b| b.mod_floor(&sys.modulus).to_u64().unwrap())
        .collect();

    let mut out = Vec::new();
    let mut y = vec![0u64; n];
    loop {
        let ok = rows.iter().zip(&rhs).all(|(row, &b)| {
            let lhs = row.iter().zip(&y).fold(0u128, |acc, (&a, &x)| {
                (acc + a as u128 * x as u128) % m as u128
            });
            lhs == b as u128
        });
        if ok {
            out.push(y.clone());
        }
        let mut pos = 0;
        loop {
            if pos == n {
                return Ok(out);
            }
            y[pos] += 1;
            if y[pos] < m {
                break;
            }
            y[pos] = 0;
            pos += 1;
        }
    }
}

/// The solvability test of a fixed coefficient matrix, prepared for many
/// right-hand sides given as residues mod `m`.
///
/// Rows whose divisor is 1 are dropped since they accept everything.
#[derive(Debug, Clone)]
pub struct ResidueFilter {
    modulus: u64,
    /// `(row of U mod m, divisor)` for each row that constrains.
    rows: Vec<(Vec<u64>, u64)>,
}

impl ResidueFilter {
    pub fn new(snf: &SnfDecomposition, modulus: u64) -> Self {
        let m = BigInt::from(modulus);
        let rows = row_moduli(snf, &m)
            .into_iter()
            .enumerate()
            .filter(|(_, g)| !g.is_one())
            .map(|(i, g)| {
                let row = snf
                    .u
                    .row(i)
                    .iter()
                    .map(|x| x.mod_floor(&m).to_u64().unwrap())
                    .collect();
                (row, g.to_u64().unwrap())
            })
            .collect();
        ResidueFilter { modulus, rows }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Divisors of the constraining rows.
    pub fn divisors(&self) -> Vec<u64> {
        self.rows.iter().map(|(_, g)| *g).collect()
    }

    /// Whether every right-hand side is admissible.
    pub fn is_trivial(&self) -> bool {
        self.rows.is_empty()
    }

    /// Whether `H Y = B (mod m)` is solvable for `B = rhs`.
    pub fn accepts(&self, rhs: &[u64]) -> bool {
        self.rows.iter().all(|(row, g)| {
            let h = row
                .iter()
                .zip(rhs)
                .fold(0u64, |acc, (&u, &b)| (acc + u * b) % self.modulus);
            h % g == 0
        })
    }

    /// Residues `(U_cols * part) mod g_i` for each constraining row, where
    /// `part` occupies columns `offset..offset + part.len()` of `U`.
    pub fn partial_residues(&self, offset: usize, part: &[u64]) -> Vec<u32> {
        self.rows
            .iter()
            .map(|(row, g)| {
                let h = row[offset..offset + part.len()]
                    .iter()
                    .zip(part)
                    .fold(0u64, |acc, (&u, &b)| (acc + u * b) % self.modulus);
                (h % g) as u32
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(rows: &[&[i64]], b: &[i64], m: i64) -> CongruenceSystem {
        let h = IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap();
        CongruenceSystem::new(h, b.iter().map(|&x| x.into()).collect(), m.into()).unwrap()
    }

    #[test]
    fn single_congruences() {
        let s = sys(&[&[2]], &[1], 6);
        assert!(!is_solvable(&s).unwrap());
        assert_eq!(count_solutions(&s).unwrap(), BigUint::zero());
        assert!(enumerate_solutions(&s, 100).unwrap().is_empty());

        let s = sys(&[&[2]], &[4], 6);
        assert!(is_solvable(&s).unwrap());
        assert_eq!(count_solutions(&s).unwrap(), BigUint::from(2u32));
        assert_eq!(
            enumerate_solutions(&s, 100).unwrap(),
            vec![vec![2], vec![5]]
        );

        let s = sys(&[&[1]], &[3], 5);
        assert_eq!(enumerate_solutions(&s, 100).unwrap(), vec![vec![3]]);
    }

    #[test]
    fn small_systems() {
        let s = sys(&[&[1, 0], &[0, 1]], &[0, 0], 5);
        assert_eq!(count_solutions(&s).unwrap(), BigUint::one());
        let s = sys(&[&[1, 1]], &[0], 3);
        assert_eq!(count_solutions(&s).unwrap(), BigUint::from(3u32));
        assert_eq!(enumerate_solutions(&s, 100).unwrap().len(), 3);
    }

    #[test]
    fn identity_rhs_passes_through() {
        let s = sys(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]], &[4, -2, 9], 7);
        let snf = smith_normal_form(s.matrix()).unwrap();
        let expected: Vec<BigInt> = [4, -2, 9].iter().map(|&x| x.into()).collect();
        assert_eq!(transformed_rhs(&s, &snf).unwrap(), expected);
        let zero = sys(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]], &[0, 0, 0], 7);
        assert!(transformed_rhs(&zero, &snf)
            .unwrap()
            .iter()
            .all(Zero::is_zero));
    }

    #[test]
    fn errors() {
        let h = IntMatrix::from_rows(&[vec![1i64]]).unwrap();
        assert_eq!(
            CongruenceSystem::new(h.clone(), vec![1.into()], 1.into()),
            Err(CongruenceError::InvalidModulus)
        );
        assert!(matches!(
            CongruenceSystem::new(h, vec![], 5.into()),
            Err(CongruenceError::DimensionMismatch(_))
        ));
        let zero = sys(&[&[0, 0]], &[0], 4);
        assert_eq!(is_solvable(&zero), Err(CongruenceError::ZeroMatrix));
        let big = sys(&[&[1, 1, 1, 1]], &[0], 100);
        assert!(matches!(
            enumerate_solutions(&big, 1000),
            Err(CongruenceError::CapExceeded { .. })
        ));
    }

    #[test]
    fn residue_filter_matches_is_solvable() {
        let h = IntMatrix::from_rows(&[vec![1i64, 2, 2], vec![3, 2, 5], vec![2, 5, 2]]).unwrap();
        let snf = smith_normal_form(&h).unwrap();
        let filter = ResidueFilter::new(&snf, 6);
        for code in 0..216u64 {
            let b = [code % 6, code / 6 % 6, code / 36];
            let s = CongruenceSystem::new(
                h.clone(),
                b.iter().map(|&x| BigInt::from(x)).collect(),
                6.into(),
            )
            .unwrap();
            assert_eq!(filter.accepts(&b), is_solvable(&s).unwrap(), "{b:?}");
        }
    }
}
