//! Dense integer matrices and Smith normal form with unimodular transforms.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("matrix is zero")]
    ZeroMatrix,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix text, line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Row-major integer matrix with at least one row and one column.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self, LinalgError> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(IntMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "empty matrix");
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Build from nested rows of anything convertible to `BigInt`.
    pub fn from_rows<T: Clone + Into<BigInt>>(rows: &[Vec<T>]) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(LinalgError::DimensionMismatch("ragged rows".into()));
        }
        let data = rows.iter().flatten().cloned().map(Into::into).collect();
        Self::new(rows.len(), cols, data)
    }

    /// Parse whitespace-separated integers, one row per line. Blank lines and
    /// `#` comments are ignored.
    pub fn parse_text(text: &str) -> Result<Self, LinalgError> {
        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let row = line
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<BigInt>().map_err(|_| LinalgError::Parse {
                        line: idx + 1,
                        msg: format!("not an integer: {tok:?}"),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            if let Some(first) = rows.first() {
                if first.len() != row.len() {
                    return Err(LinalgError::Parse {
                        line: idx + 1,
                        msg: format!("expected {} entries, found {}", first.len(), row.len()),
                    });
                }
            }
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(LinalgError::Parse {
                line: 0,
                msg: "no rows".into(),
            });
        }
        Self::from_rows(&rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn mul(&self, rhs: &IntMatrix) -> Result<IntMatrix, LinalgError> {
        if self.cols != rhs.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * &rhs[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::DimensionMismatch(
                "determinant of a non-square matrix".into(),
            ));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[(k, k)].is_zero() {
                let Some(swap) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                    return Ok(BigInt::zero());
                };
                a.swap_rows(k, swap);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                    a[(i, j)] = v / &prev;
                }
            }
            prev = a[(k, k)].clone();
        }
        Ok(sign * &a[(n - 1, n - 1)])
    }

    pub fn is_unimodular(&self) -> bool {
        self.is_square()
            && self
                .determinant()
                .map(|d| d.abs().is_one())
                .unwrap_or(false)
    }

    /// Top-left `rows x cols` submatrix.
    pub fn submatrix(&self, rows: usize, cols: usize) -> Result<IntMatrix, LinalgError> {
        if rows == 0 || cols == 0 || rows > self.rows || cols > self.cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "{rows}x{cols} block of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let data = (0..rows)
            .flat_map(|i| self.row(i)[..cols].iter().cloned())
            .collect();
        IntMatrix::new(rows, cols, data)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += c * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, c: &BigInt) {
        for j in 0..self.cols {
            let v = c * &self[(src, j)];
            self[(dst, j)] += v;
        }
    }

    /// col[dst] += c * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, c: &BigInt) {
        for i in 0..self.rows {
            let v = c * &self[(i, src)];
            self[(i, dst)] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -std::mem::take(&mut self[(i, j)]);
            self[(i, j)] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.data.iter().map(ToString::to_string).collect();
        let width = cells.iter().map(String::len).max().unwrap_or(1);
        for i in 0..self.rows {
            let line: Vec<String> = cells[i * self.cols..(i + 1) * self.cols]
                .iter()
                .map(|c| format!("{c:>width$}"))
                .collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            write!(f, "[{}]", row.join(","))?;
        }
        write!(f, "]")
    }
}

/// `U * A * V = diag(d_1, ..., d_r)` padded with zeros, `U`, `V` unimodular.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfDecomposition {
    pub u: IntMatrix,
    pub v: IntMatrix,
    /// Invariant factors, positive, each dividing the next.
    pub d: Vec<BigInt>,
}

impl SnfDecomposition {
    pub fn rank(&self) -> usize {
        self.d.len()
    }
}

/// Vertically stack matrices sharing a column count.
pub fn stack_rows(blocks: &[IntMatrix]) -> Result<IntMatrix, LinalgError> {
    let Some(first) = blocks.first() else {
        return Err(LinalgError::DimensionMismatch("no blocks to stack".into()));
    };
    let cols = first.cols;
    if let Some(bad) = blocks.iter().find(|b| b.cols != cols) {
        return Err(LinalgError::DimensionMismatch(format!(
            "block with {} columns stacked under {cols}",
            bad.cols
        )));
    }
    let rows = blocks.iter().map(|b| b.rows).sum();
    let data = blocks.iter().flat_map(|b| b.data.iter().cloned()).collect();
    IntMatrix::new(rows, cols, data)
}

/// Position of the nonzero entry of least absolute value in the lower-right
/// block starting at `(t, t)`; ties go to the lowest row, then lowest column.
fn min_pivot(b: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), BigInt)> = None;
    for i in t..b.rows {
        for j in t..b.cols {
            let v = &b[(i, j)];
            if v.is_zero() {
                continue;
            }
            let a = v.abs();
            if best.as_ref().is_none_or(|(_, m)| a < *m) {
                best = Some(((i, j), a));
            }
        }
    }
    best.map(|(pos, _)| pos)
}

/// Smith normal form by pivoting elimination, recording every row operation
/// in `U` and every column operation in `V`.
pub fn smith_normal_form(a: &IntMatrix) -> Result<SnfDecomposition, LinalgError> {
    if a.is_zero() {
        return Err(LinalgError::ZeroMatrix);
    }
    let (m, n) = (a.rows, a.cols);
    let mut b = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    let mut d = Vec::new();

    for t in 0..m.min(n) {
        let Some((pi, pj)) = min_pivot(&b, t) else {
            break;
        };
        b.swap_rows(t, pi);
        u.swap_rows(t, pi);
        b.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            // Clear column t below and row t to the right of the pivot.
            let mut dirty = false;
            for i in t + 1..m {
                if b[(i, t)].is_zero() {
                    continue;
                }
                let quo = -b[(i, t)].div_floor(&b[(t, t)]);
                b.add_row_multiple(i, t, &quo);
                u.add_row_multiple(i, t, &quo);
                dirty |= !b[(i, t)].is_zero();
            }
            for j in t + 1..n {
                if b[(t, j)].is_zero() {
                    continue;
                }
                let quo = -b[(t, j)].div_floor(&b[(t, t)]);
                b.add_col_multiple(j, t, &quo);
                v.add_col_multiple(j, t, &quo);
                dirty |= !b[(t, j)].is_zero();
            }
            if dirty {
                // A nonzero remainder is strictly smaller than the pivot.
                let (pi, pj) = min_pivot(&b, t).expect("nonzero remainder exists");
                b.swap_rows(t, pi);
                u.swap_rows(t, pi);
                b.swap_cols(t, pj);
                v.swap_cols(t, pj);
                continue;
            }
            // Row and column are clear; the pivot must divide the rest.
            let bad_row =
                (t + 1..m).find(|&i| (t + 1..n).any(|j| !b[(i, j)].is_multiple_of(&b[(t, t)])));
            match bad_row {
                Some(i) => {
                    let one = BigInt::one();
                    b.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if b[(t, t)].is_negative() {
            b.negate_row(t);
            u.negate_row(t);
        }
        d.push(b[(t, t)].clone());
    }
    Ok(SnfDecomposition { u, v, d })
}

/// Check `U*A*V` against the claimed invariant factors, unimodularity of both
/// transforms and the divisibility chain.
pub fn verify_snf(a: &IntMatrix, s: &SnfDecomposition) -> Result<bool, LinalgError> {
    if s.u.rows != a.rows || s.u.cols != a.rows || s.v.rows != a.cols || s.v.cols != a.cols {
        return Err(LinalgError::DimensionMismatch(format!(
            "U is {}x{}, V is {}x{}, A is {}x{}",
            s.u.rows, s.u.cols, s.v.rows, s.v.cols, a.rows, a.cols
        )));
    }
    if s.d.len() > a.rows.min(a.cols) {
        return Ok(false);
    }
    if s.d.iter().any(|x| !x.is_positive()) {
        return Ok(false);
    }
    if s.d.windows(2).any(|w| !w[1].is_multiple_of(&w[0])) {
        return Ok(false);
    }
    if !s.u.is_unimodular() || !s.v.is_unimodular() {
        return Ok(false);
    }
    let prod = s.u.mul(a)?.mul(&s.v)?;
    for i in 0..a.rows {
        for j in 0..a.cols {
            let expected = if i == j && i < s.d.len() {
                s.d[i].clone()
            } else {
                BigInt::zero()
            };
            if prod[(i, j)] != expected {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn snf_of_small_level_matrix() {
        let a = mat(&[&[1, 2, 2], &[3, 2, 5], &[2, 5, 2]]);
        let s = smith_normal_form(&a).unwrap();
        assert_eq!(s.d, ints(&[1, 1, 9]));
        assert!(verify_snf(&a, &s).unwrap());
    }

    #[test]
    fn snf_identity() {
        let a = IntMatrix::identity(4);
        let s = smith_normal_form(&a).unwrap();
        assert_eq!(s.d, ints(&[1, 1, 1, 1]));
        assert_eq!(s.u, IntMatrix::identity(4));
        assert_eq!(s.v, IntMatrix::identity(4));
    }

    #[test]
    fn zero_matrix_rejected() {
        assert_eq!(
            smith_normal_form(&IntMatrix::zeros(2, 3)),
            Err(LinalgError::ZeroMatrix)
        );
    }

    #[test]
    fn rank_deficient_and_negative() {
        let a = mat(&[&[2, -4, 6], &[-1, 2, -3], &[2, -4, 6]]);
        let s = smith_normal_form(&a).unwrap();
        assert_eq!(s.d, ints(&[1]));
        assert!(verify_snf(&a, &s).unwrap());
    }

    #[test]
    fn divisibility_fix_up() {
        // diag(2, 3) has invariant factors (1, 6)
        let a = mat(&[&[2, 0], &[0, 3]]);
        let s = smith_normal_form(&a).unwrap();
        assert_eq!(s.d, ints(&[1, 6]));
        assert!(verify_snf(&a, &s).unwrap());
    }

    #[test]
    fn verify_rejects_bad_decompositions() {
        let a = mat(&[&[2, 0], &[0, 3]]);
        let other = smith_normal_form(&mat(&[&[1, 0], &[0, 1]])).unwrap();
        assert!(!verify_snf(&a, &other).unwrap());

        let broken_chain = SnfDecomposition {
            u: IntMatrix::identity(2),
            v: IntMatrix::identity(2),
            d: ints(&[2, 3]),
        };
        assert!(!verify_snf(&a, &broken_chain).unwrap());

        let wrong_shape = SnfDecomposition {
            u: IntMatrix::identity(3),
            v: IntMatrix::identity(2),
            d: ints(&[1, 6]),
        };
        assert!(verify_snf(&a, &wrong_shape).is_err());
    }

    #[test]
    fn stacking() {
        let rows = [mat(&[&[1, 2, 2]]), mat(&[&[3, 2, 5]]), mat(&[&[2, 5, 2]])];
        assert_eq!(
            stack_rows(&rows).unwrap(),
            mat(&[&[1, 2, 2], &[3, 2, 5], &[2, 5, 2]])
        );
        assert_eq!(stack_rows(&rows[..1]).unwrap(), rows[0]);
        let two = mat(&[&[1, 2, 3], &[4, 5, 6]]);
        let s = stack_rows(&[two.clone(), two]).unwrap();
        assert_eq!((s.rows(), s.cols()), (4, 3));
        assert!(stack_rows(&[mat(&[&[1, 2]]), mat(&[&[1]])]).is_err());
    }

    #[test]
    fn determinant_small() {
        assert_eq!(
            mat(&[&[0, 1], &[1, 0]]).determinant().unwrap(),
            BigInt::from(-1)
        );
        assert_eq!(
            mat(&[&[2, 0, 1], &[1, 3, 2], &[1, 1, 2]])
                .determinant()
                .unwrap(),
            BigInt::from(6)
        );
        assert_eq!(
            mat(&[&[2, 0, 1], &[1, 3, 2], &[1, 1, 1]])
                .determinant()
                .unwrap(),
            BigInt::from(0)
        );
    }

    #[test]
    fn parse_text_format() {
        let m = IntMatrix::parse_text("1 2 3\n\n -4 5 6 # comment\n").unwrap();
        assert_eq!(m, mat(&[&[1, 2, 3], &[-4, 5, 6]]));
        assert!(matches!(
            IntMatrix::parse_text("1 2\n3"),
            Err(LinalgError::Parse { line: 2, .. })
        ));
        assert!(IntMatrix::parse_text("1 x").is_err());
        assert!(IntMatrix::parse_text("  \n").is_err());
    }
}
