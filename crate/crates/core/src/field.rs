//! Arithmetic in small finite fields `F_q`, `q = p^n`.
//!
//! Elements are stored as a single integer code `c_0 + c_1 p + ... + c_{n-1} p^{n-1}`
//! over the polynomial basis `1, x, ..., x^{n-1}`. Code order is the lexicographic
//! order on coefficient tuples with the constant coordinate varying fastest, so
//! "least element" always means "least code".

use std::fmt;

use thiserror::Error;

/// Largest field cardinality accepted unless overridden.
pub const DEFAULT_MAX_ORDER: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error(
        "characteristic 2 is outside the supported family (pass the force-even option to override)"
    )]
    EvenCharacteristic,
    #[error("modulus is reducible over F_{0}")]
    ReducibleModulus(u32),
    #[error("modulus must be monic of degree {expected}, got {detail}")]
    DegreeMismatch { expected: u32, detail: String },
    #[error("field order {p}^{n} exceeds the cap {cap}")]
    TooLarge { p: u64, n: u32, cap: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("element does not belong to this field")]
    FieldMismatch,
    #[error("element {0} is not a primitive element")]
    NotPrimitive(String),
    #[error("invalid element literal: {0}")]
    InvalidLiteral(String),
}

/// Options for [`FieldSpec::with_options`].
#[derive(Debug, Clone, Copy)]
pub struct FieldOptions {
    pub max_order: u64,
    pub allow_even: bool,
}

impl Default for FieldOptions {
    fn default() -> Self {
        FieldOptions {
            max_order: DEFAULT_MAX_ORDER,
            allow_even: false,
        }
    }
}

/// A finite field `F_q` given by its characteristic, degree and (for `n > 1`)
/// a monic irreducible modulus.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldSpec {
    p: u32,
    n: u32,
    q: u32,
    /// Monic modulus, lowest coefficient first, length `n + 1`. For `n = 1`
    /// this is the implicit `x` (i.e. `[0, 1]`).
    modulus: Vec<u32>,
}

/// An element of some [`FieldSpec`], in canonical form.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct FieldElement(u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    /// The element with the given code. Membership in a particular field is
    /// checked by [`FieldSpec::contains`].
    pub const fn from_code(code: u32) -> Self {
        FieldElement(code)
    }

    pub const fn code(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

fn is_prime(v: u64) -> bool {
    if v < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= v {
        if v.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime divisors of `v`, ascending.
pub fn prime_factors(mut v: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= v {
        if v.is_multiple_of(d) {
            out.push(d);
            while v.is_multiple_of(d) {
                v /= d;
            }
        }
        d += 1;
    }
    if v > 1 {
        out.push(v);
    }
    out
}

/// Remainder of `num` modulo the monic `den` over `F_p`; coefficients lowest first.
fn poly_rem(num: &[u32], den: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u64> = num.iter().map(|&c| c as u64).collect();
    let dd = den.len() - 1;
    let p = p as u64;
    while r.len() > dd {
        let lead = r.pop().unwrap() % p;
        if lead == 0 {
            continue;
        }
        let shift = r.len() - dd;
        for (j, &c) in den[..dd].iter().enumerate() {
            let sub = lead * c as u64 % p;
            r[shift + j] = (r[shift + j] + p - sub) % p;
        }
    }
    r.into_iter().map(|c| c as u32).collect()
}

impl FieldSpec {
    /// Build `F_q` with default options (odd characteristic, `q <= 2^16`).
    pub fn new(p: u64, n: u32, modulus: Option<&[i64]>) -> Result<Self, FieldError> {
        Self::with_options(p, n, modulus, FieldOptions::default())
    }

    /// The prime field `F_p`.
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        Self::new(p, 1, None)
    }

    pub fn with_options(
        p: u64,
        n: u32,
        modulus: Option<&[i64]>,
        opts: FieldOptions,
    ) -> Result<Self, FieldError> {
        if p > opts.max_order {
            return Err(FieldError::TooLarge {
                p,
                n,
                cap: opts.max_order,
            });
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if p == 2 && !opts.allow_even {
            return Err(FieldError::EvenCharacteristic);
        }
        if n == 0 {
            return Err(FieldError::DegreeMismatch {
                expected: 0,
                detail: "extension degree must be at least 1".into(),
            });
        }
        let q = p.checked_pow(n).filter(|&q| q <= opts.max_order);
        let Some(q) = q else {
            return Err(FieldError::TooLarge {
                p,
                n,
                cap: opts.max_order,
            });
        };
        let p32 = p as u32;
        let modulus = if n == 1 {
            vec![0, 1]
        } else {
            let Some(raw) = modulus else {
                return Err(FieldError::DegreeMismatch {
                    expected: n,
                    detail: "no modulus supplied".into(),
                });
            };
            let coeffs: Vec<u32> = raw.iter().map(|&c| c.rem_euclid(p as i64) as u32).collect();
            let mut trimmed = coeffs.clone();
            while trimmed.len() > 1 && *trimmed.last().unwrap() == 0 {
                trimmed.pop();
            }
            if trimmed.len() != n as usize + 1 {
                return Err(FieldError::DegreeMismatch {
                    expected: n,
                    detail: format!("degree {}", trimmed.len().saturating_sub(1)),
                });
            }
            if trimmed[n as usize] != 1 {
                return Err(FieldError::DegreeMismatch {
                    expected: n,
                    detail: format!("leading coefficient {}", trimmed[n as usize]),
                });
            }
            if !is_irreducible(&trimmed, p32) {
                return Err(FieldError::ReducibleModulus(p32));
            }
            trimmed
        };
        Ok(FieldSpec {
            p: p32,
            n,
            q: q as u32,
            modulus,
        })
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.n
    }

    /// The cardinality `q`.
    pub fn order(&self) -> u32 {
        self.q
    }

    /// Monic modulus, lowest coefficient first (`[0, 1]` for prime fields).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn contains(&self, a: FieldElement) -> bool {
        a.0 < self.q
    }

    /// All elements in enumeration order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q).map(FieldElement)
    }

    /// Polynomial-basis coordinates of `a`, constant first.
    pub fn coeffs(&self, a: FieldElement) -> Vec<u32> {
        let mut code = a.0;
        (0..self.n)
            .map(|_| {
                let c = code % self.p;
                code /= self.p;
                c
            })
            .collect()
    }

    /// Element with the given coordinates (reduced mod p). Extra trailing
    /// coordinates are rejected.
    pub fn from_coeffs(&self, coeffs: &[i64]) -> Result<FieldElement, FieldError> {
        if coeffs.len() > self.n as usize {
            return Err(FieldError::InvalidLiteral(format!(
                "{} coordinates given for a degree-{} field",
                coeffs.len(),
                self.n
            )));
        }
        let p = self.p as i64;
        let mut code = 0u32;
        for &c in coeffs.iter().rev() {
            code = code * self.p + c.rem_euclid(p) as u32;
        }
        Ok(FieldElement(code))
    }

    /// The image of the integer `v` under `Z -> F_p -> F_q`.
    pub fn from_int(&self, v: i64) -> FieldElement {
        FieldElement(v.rem_euclid(self.p as i64) as u32)
    }

    fn pack(&self, coeffs: &[u32]) -> FieldElement {
        let mut code = 0u32;
        for &c in coeffs.iter().rev() {
            code = code * self.p + c;
        }
        FieldElement(code)
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.n == 1 {
            return FieldElement((a.0 + b.0) % self.p);
        }
        let (mut x, mut y, mut code, mut scale) = (a.0, b.0, 0, 1);
        for _ in 0..self.n {
            code += ((x % self.p + y % self.p) % self.p) * scale;
            x /= self.p;
            y /= self.p;
            scale *= self.p;
        }
        FieldElement(code)
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        if self.n == 1 {
            return FieldElement((self.p - a.0) % self.p);
        }
        let (mut x, mut code, mut scale) = (a.0, 0, 1);
        for _ in 0..self.n {
            code += ((self.p - x % self.p) % self.p) * scale;
            x /= self.p;
            scale *= self.p;
        }
        FieldElement(code)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.n == 1 {
            return FieldElement(((a.0 as u64 * b.0 as u64) % self.p as u64) as u32);
        }
        let x = self.coeffs(a);
        let y = self.coeffs(b);
        let p = self.p as u64;
        let mut prod = vec![0u32; 2 * self.n as usize - 1];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                prod[i + j] = ((prod[i + j] as u64 + xi as u64 * yj as u64) % p) as u32;
            }
        }
        self.pack(&poly_rem(&prod, &self.modulus, self.p))
    }

    /// `a^e` by square-and-multiply; `0^0 = 1`.
    pub fn pow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(self.pow(a, self.q as u64 - 2))
    }

    /// Checked binary operation on two members of this field.
    pub fn arith(
        &self,
        a: FieldElement,
        b: FieldElement,
        op: ArithOp,
    ) -> Result<FieldElement, FieldError> {
        if !self.contains(a) || !self.contains(b) {
            return Err(FieldError::FieldMismatch);
        }
        Ok(match op {
            ArithOp::Add => self.add(a, b),
            ArithOp::Sub => self.sub(a, b),
            ArithOp::Mul => self.mul(a, b),
            ArithOp::Div => self.mul(a, self.inv(b)?),
        })
    }

    /// Multiplicative order of a nonzero element, by direct powering.
    pub fn multiplicative_order(&self, a: FieldElement) -> Option<u64> {
        if a.is_zero() || !self.contains(a) {
            return None;
        }
        let mut acc = a;
        let mut k = 1;
        while acc != FieldElement::ONE {
            acc = self.mul(acc, a);
            k += 1;
        }
        Some(k)
    }

    /// Whether `a` generates `F_q^*`.
    pub fn is_primitive(&self, a: FieldElement) -> bool {
        if a.is_zero() || !self.contains(a) {
            return false;
        }
        let group = self.q as u64 - 1;
        prime_factors(group)
            .into_iter()
            .all(|l| self.pow(a, group / l) != FieldElement::ONE)
    }

    /// The least primitive element in enumeration order.
    pub fn primitive_element(&self) -> FieldElement {
        self.elements()
            .skip(1)
            .find(|&a| self.is_primitive(a))
            .expect("the multiplicative group of a finite field is cyclic")
    }

    /// All primitive elements, ascending.
    pub fn primitive_elements(&self) -> Vec<FieldElement> {
        self.elements().filter(|&a| self.is_primitive(a)).collect()
    }

    /// Render an element as it appears in system files: a residue for prime
    /// fields, `[c0,c1,...]` otherwise.
    pub fn format_element(&self, a: FieldElement) -> String {
        if self.n == 1 {
            a.0.to_string()
        } else {
            let parts: Vec<String> = self.coeffs(a).iter().map(|c| c.to_string()).collect();
            format!("[{}]", parts.join(","))
        }
    }

    /// Inverse of [`FieldSpec::format_element`]; integers are accepted in
    /// every field and map through `F_p`.
    pub fn parse_element(&self, text: &str) -> Result<FieldElement, FieldError> {
        let t = text.trim();
        let bad = || FieldError::InvalidLiteral(t.to_string());
        if let Some(inner) = t.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            let coeffs = inner
                .split(',')
                .map(|s| s.trim().parse::<i64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| bad())?;
            self.from_coeffs(&coeffs)
        } else {
            t.parse::<i64>()
                .map(|v| self.from_int(v))
                .map_err(|_| bad())
        }
    }

    /// Render the modulus as a polynomial in `x`, highest degree first.
    pub fn format_modulus(&self) -> String {
        let mut terms = Vec::new();
        for (deg, &c) in self.modulus.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match deg {
                0 => String::new(),
                1 => "x".to_string(),
                d => format!("x^{d}"),
            };
            terms.push(match (c, deg) {
                (_, 0) => c.to_string(),
                (1, _) => mono,
                _ => format!("{c}*{mono}"),
            });
        }
        terms.join(" + ")
    }
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n == 1 {
            write!(f, "F_{}", self.p)
        } else {
            write!(f, "F_{}^{} mod ({})", self.p, self.n, self.format_modulus())
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A monic polynomial of degree `n >= 2` is irreducible iff it has no monic
/// factor of degree `1..=n/2`; the candidates are enumerated exhaustively.
fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let n = poly.len() - 1;
    for d in 1..=n / 2 {
        let count = (p as u64).pow(d as u32);
        for code in 0..count {
            let mut cand = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                cand.push((c % p as u64) as u32);
                c /= p as u64;
            }
            cand.push(1);
            if poly_rem(poly, &cand, p).iter().all(|&r| r == 0) {
                return false;
            }
        }
    }
    true
}

/// Discrete logarithms to a fixed primitive base `alpha`.
///
/// Indices are the canonical representatives in `[0, q-2]`.
#[derive(Debug, Clone)]
pub struct LogTable {
    alpha: FieldElement,
    /// `powers[i] = alpha^i` for `i` in `0..q-1`.
    powers: Vec<FieldElement>,
    /// Indexed by element code; entry 0 is unused.
    index_of: Vec<u32>,
}

impl LogTable {
    pub fn new(field: &FieldSpec, alpha: FieldElement) -> Result<Self, FieldError> {
        if !field.is_primitive(alpha) {
            return Err(FieldError::NotPrimitive(field.format_element(alpha)));
        }
        let group = field.order() as usize - 1;
        let mut powers = Vec::with_capacity(group);
        let mut index_of = vec![u32::MAX; field.order() as usize];
        let mut acc = FieldElement::ONE;
        for i in 0..group {
            powers.push(acc);
            index_of[acc.code() as usize] = i as u32;
            acc = field.mul(acc, alpha);
        }
        Ok(LogTable {
            alpha,
            powers,
            index_of,
        })
    }

    pub fn alpha(&self) -> FieldElement {
        self.alpha
    }

    /// `ind_alpha(beta)`, or `None` for zero.
    pub fn index(&self, beta: FieldElement) -> Option<u32> {
        match self.index_of.get(beta.code() as usize) {
            Some(&i) if i != u32::MAX => Some(i),
            _ => None,
        }
    }

    /// `alpha^i` for `i` taken mod `q-1`.
    pub fn power(&self, i: u64) -> FieldElement {
        self.powers[(i % self.powers.len() as u64) as usize]
    }

    /// Size of the multiplicative group, `q - 1`.
    pub fn group_order(&self) -> u32 {
        self.powers.len() as u32
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f9() -> FieldSpec {
        FieldSpec::new(3, 2, Some(&[1, 0, 1])).unwrap()
    }

    #[test]
    fn construction_errors() {
        assert_eq!(FieldSpec::prime(9), Err(FieldError::NotPrime(9)));
        assert_eq!(FieldSpec::prime(2), Err(FieldError::EvenCharacteristic));
        assert!(FieldSpec::with_options(
            2,
            1,
            None,
            FieldOptions {
                allow_even: true,
                ..Default::default()
            }
        )
        .is_ok());
        // x^2 + 2 = (x+1)(x+2) over F_3
        assert_eq!(
            FieldSpec::new(3, 2, Some(&[2, 0, 1])),
            Err(FieldError::ReducibleModulus(3))
        );
        assert!(matches!(
            FieldSpec::new(3, 2, Some(&[1, 1])),
            Err(FieldError::DegreeMismatch { .. })
        ));
        assert!(matches!(
            FieldSpec::new(3, 2, Some(&[1, 0, 2])),
            Err(FieldError::DegreeMismatch { .. })
        ));
        assert!(matches!(
            FieldSpec::new(3, 2, None),
            Err(FieldError::DegreeMismatch { .. })
        ));
        assert!(matches!(
            FieldSpec::prime(65537),
            Err(FieldError::TooLarge { .. })
        ));
    }

    #[test]
    fn small_fields() {
        assert_eq!(FieldSpec::prime(7).unwrap().order(), 7);
        assert_eq!(FieldSpec::prime(11).unwrap().order(), 11);
        let f = f9();
        assert_eq!(f.order(), 9);
        assert_eq!(f.format_modulus(), "x^2 + 1");
    }

    #[test]
    fn arithmetic_examples() {
        let f7 = FieldSpec::prime(7).unwrap();
        let e = |v| f7.from_int(v);
        assert_eq!(f7.arith(e(3), e(5), ArithOp::Mul), Ok(e(1)));
        for a in f7.elements() {
            assert_eq!(f7.arith(a, e(0), ArithOp::Add), Ok(a));
        }
        assert_eq!(
            f7.arith(e(3), e(0), ArithOp::Div),
            Err(FieldError::DivisionByZero)
        );
        assert_eq!(
            f7.arith(e(3), FieldElement::from_code(7), ArithOp::Add),
            Err(FieldError::FieldMismatch)
        );

        let f = f9();
        let one_plus_x = f.from_coeffs(&[1, 1]).unwrap();
        let two_x = f.from_coeffs(&[0, 2]).unwrap();
        assert_eq!(f.arith(one_plus_x, one_plus_x, ArithOp::Mul), Ok(two_x));
    }

    #[test]
    fn primitive_elements_of_small_fields() {
        assert_eq!(FieldSpec::prime(7).unwrap().primitive_element().code(), 3);
        assert_eq!(FieldSpec::prime(11).unwrap().primitive_element().code(), 2);
        let f = f9();
        let g = f.primitive_element();
        assert_eq!(f.coeffs(g), vec![1, 1]);
        assert_eq!(f.pow(g, 4), f.from_int(2));
        assert_eq!(f.pow(g, 8), FieldElement::ONE);
    }

    #[test]
    fn log_table_examples() {
        let f7 = FieldSpec::prime(7).unwrap();
        let logs = LogTable::new(&f7, f7.from_int(3)).unwrap();
        assert_eq!(logs.index(f7.from_int(3)), Some(1));
        assert_eq!(logs.index(f7.from_int(5)), Some(5));
        assert_eq!(logs.index(f7.from_int(1)), Some(0));
        assert_eq!(logs.index(FieldElement::ZERO), None);
        assert!(matches!(
            LogTable::new(&f7, f7.from_int(2)),
            Err(FieldError::NotPrimitive(_))
        ));
    }

    #[test]
    fn element_literals() {
        let f = f9();
        let a = f.parse_element("[2, 1]").unwrap();
        assert_eq!(f.format_element(a), "[2,1]");
        assert_eq!(f.parse_element("5").unwrap(), f.from_int(2));
        assert!(f.parse_element("[1,1,1]").is_err());
        assert!(f.parse_element("x").is_err());
    }
}
