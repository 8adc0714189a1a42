//! Finite fields `F_q`, `q = p^n <= 2^31`, and the element predicates the
//! rest of the crate is built on.
//!
//! An element is stored as the base-`p` integer of its coefficient list, with
//! the constant coefficient as the least significant digit. This makes the
//! canonical enumeration order of the field simply `0, 1, ..., q - 1`, and in
//! a prime field the stored value is the residue itself.

mod poly;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::arith::{self, Factorization};

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 31;

// 2^31 has at most 31 base-p digits.
const MAX_DEGREE: usize = 31;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("extension degree must be positive")]
    ZeroDegree,
    #[error("field order {p}^{n} exceeds 2^31")]
    OrderTooLarge { p: u64, n: u32 },
    #[error("modulus {0:?} is not a monic irreducible polynomial")]
    BadModulus(Vec<u64>),
    #[error("{value} does not divide q - 1 = {qm1}")]
    NotDivisor { value: u64, qm1: u64 },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("zero has no multiplicative order")]
    ZeroOrder,
    #[error("element {0} does not belong to this field")]
    ForeignElement(u64),
    #[error("coefficient list has {got} entries, field degree is {degree}")]
    CoefficientCount { got: usize, degree: u32 },
    #[error("leading coefficient of a quadratic must be nonzero")]
    ZeroLeading,
    #[error("discriminant b^2 - 4ac is zero")]
    ZeroDiscriminant,
    #[error("cannot parse field description {0:?}")]
    Parse(String),
}

/// An element of some [`FieldSpec`], in canonical form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize)]
#[serde(transparent)]
pub struct FieldElement(u32);

impl FieldElement {
    /// Position in the canonical enumeration order.
    pub fn index(self) -> u64 {
        self.0 as u64
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Arithmetic operation selector for [`FieldSpec::arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Inv,
}

/// A concrete finite field `F_p[T] / (modulus)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    p: u64,
    n: u32,
    q: u64,
    /// Monic modulus, low degree first; empty for prime fields.
    modulus: Vec<u64>,
    qm1: Factorization,
}

impl FieldSpec {
    /// Builds `F_{p^n}` with the first monic irreducible modulus of degree `n`,
    /// comparing the lower coefficients `(c_0, ..., c_{n-1})` lexicographically.
    pub fn new(p: u64, n: u32) -> Result<Self, FieldError> {
        let q = Self::checked_order(p, n)?;
        if n == 1 {
            return Self::assemble(p, 1, q, Vec::new());
        }
        // Odometer over (c_0, ..., c_{n-1}) with c_0 as the most significant
        // digit. Every candidate with c_0 = 0 is divisible by T, so start at c_0 = 1.
        let mut lower = vec![0u64; n as usize];
        lower[0] = 1;
        loop {
            let mut candidate = lower.clone();
            candidate.push(1);
            if poly::is_irreducible(&candidate, p) {
                return Self::assemble(p, n, q, candidate);
            }
            let mut i = n as usize;
            loop {
                if i == 0 {
                    unreachable!("an irreducible polynomial of every degree exists");
                }
                i -= 1;
                lower[i] += 1;
                if lower[i] < p {
                    break;
                }
                lower[i] = 0;
            }
        }
    }

    /// Builds `F_p[T] / (modulus)` for a given monic irreducible modulus
    /// (low degree first). An empty or degree-1 modulus yields the prime field.
    pub fn with_modulus(p: u64, modulus: &[u64]) -> Result<Self, FieldError> {
        if modulus.len() <= 2 {
            if modulus.len() == 1 || (modulus.len() == 2 && modulus[1] % p != 1) {
                return Err(FieldError::BadModulus(modulus.to_vec()));
            }
            let q = Self::checked_order(p, 1)?;
            return Self::assemble(p, 1, q, Vec::new());
        }
        let n = (modulus.len() - 1) as u32;
        let q = Self::checked_order(p, n)?;
        let reduced: Vec<u64> = modulus.iter().map(|c| c % p).collect();
        if reduced[n as usize] != 1 || !poly::is_irreducible(&reduced, p) {
            return Err(FieldError::BadModulus(modulus.to_vec()));
        }
        Self::assemble(p, n, q, reduced)
    }

    /// The default field of order `q`.
    pub fn from_order(q: u64) -> Result<Self, FieldError> {
        let (p, n) = arith::prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        Self::new(p, n)
    }

    fn checked_order(p: u64, n: u32) -> Result<u64, FieldError> {
        if n == 0 {
            return Err(FieldError::ZeroDegree);
        }
        if !arith::is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        match p.checked_pow(n) {
            Some(q) if q <= MAX_ORDER => Ok(q),
            _ => Err(FieldError::OrderTooLarge { p, n }),
        }
    }

    fn assemble(p: u64, n: u32, q: u64, modulus: Vec<u64>) -> Result<Self, FieldError> {
        let qm1 = arith::factorize(q - 1).expect("q - 1 is within factorization range");
        Ok(FieldSpec { p, n, q, modulus, qm1 })
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.n
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    /// Monic modulus coefficients, low degree first; empty for prime fields.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// Factorization of `q - 1`.
    pub fn qm1_factors(&self) -> &Factorization {
        &self.qm1
    }

    pub fn is_prime_field(&self) -> bool {
        self.n == 1
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement(0)
    }

    pub fn one(&self) -> FieldElement {
        FieldElement(1)
    }

    pub fn contains(&self, x: FieldElement) -> bool {
        x.index() < self.q
    }

    /// The element with canonical index `index`.
    pub fn element(&self, index: u64) -> Result<FieldElement, FieldError> {
        if index < self.q {
            Ok(FieldElement(index as u32))
        } else {
            Err(FieldError::ForeignElement(index))
        }
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + Clone {
        (0..self.q as u32).map(FieldElement)
    }

    /// Nonzero elements in canonical order.
    pub fn units(&self) -> impl Iterator<Item = FieldElement> + Clone {
        (1..self.q as u32).map(FieldElement)
    }

    /// The image of an integer in the prime subfield.
    pub fn from_int(&self, v: i64) -> FieldElement {
        FieldElement(v.rem_euclid(self.p as i64) as u32)
    }

    /// Builds an element from its coefficients (low degree first). Shorter
    /// lists are zero-padded; coefficients are reduced mod `p`.
    pub fn from_coeffs(&self, coeffs: &[i64]) -> Result<FieldElement, FieldError> {
        if coeffs.len() > self.n as usize {
            return Err(FieldError::CoefficientCount {
                got: coeffs.len(),
                degree: self.n,
            });
        }
        let p = self.p as i64;
        let mut v = 0u64;
        for &c in coeffs.iter().rev() {
            v = v * self.p + c.rem_euclid(p) as u64;
        }
        Ok(FieldElement(v as u32))
    }

    /// Coefficient list (low degree first), always of length `n`.
    pub fn coeffs(&self, x: FieldElement) -> Vec<u64> {
        let mut v = x.index();
        (0..self.n)
            .map(|_| {
                let d = v % self.p;
                v /= self.p;
                d
            })
            .collect()
    }

    #[inline]
    fn digits(&self, x: FieldElement, out: &mut [u64; MAX_DEGREE]) {
        let mut v = x.index();
        for d in out.iter_mut().take(self.n as usize) {
            *d = v % self.p;
            v /= self.p;
        }
    }

    #[inline]
    fn undigits(&self, digits: &[u64]) -> FieldElement {
        let mut v = 0u64;
        for &d in digits[..self.n as usize].iter().rev() {
            v = v * self.p + d;
        }
        FieldElement(v as u32)
    }

    pub fn add(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        if self.n == 1 {
            let s = x.index() + y.index();
            return FieldElement(if s >= self.p { s - self.p } else { s } as u32);
        }
        let (mut a, mut b) = ([0u64; MAX_DEGREE], [0u64; MAX_DEGREE]);
        self.digits(x, &mut a);
        self.digits(y, &mut b);
        for i in 0..self.n as usize {
            a[i] = (a[i] + b[i]) % self.p;
        }
        self.undigits(&a)
    }

    pub fn neg(&self, x: FieldElement) -> FieldElement {
        if self.n == 1 {
            return FieldElement(if x.0 == 0 { 0 } else { (self.p - x.index()) as u32 });
        }
        let mut a = [0u64; MAX_DEGREE];
        self.digits(x, &mut a);
        for d in a.iter_mut().take(self.n as usize) {
            *d = (self.p - *d) % self.p;
        }
        self.undigits(&a)
    }

    pub fn sub(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        self.add(x, self.neg(y))
    }

    pub fn mul(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        if self.n == 1 {
            return FieldElement((x.index() * y.index() % self.p) as u32);
        }
        let n = self.n as usize;
        let p = self.p;
        let (mut a, mut b) = ([0u64; MAX_DEGREE], [0u64; MAX_DEGREE]);
        self.digits(x, &mut a);
        self.digits(y, &mut b);
        let mut prod = [0u64; 2 * MAX_DEGREE];
        for i in 0..n {
            if a[i] == 0 {
                continue;
            }
            for j in 0..n {
                prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
            }
        }
        // T^n = -(c_0 + ... + c_{n-1} T^{n-1}).
        for top in (n..2 * n - 1).rev() {
            let lead = prod[top];
            if lead == 0 {
                continue;
            }
            prod[top] = 0;
            for (i, &c) in self.modulus[..n].iter().enumerate() {
                let idx = top - n + i;
                prod[idx] = (prod[idx] + (p - lead) * c) % p;
            }
        }
        self.undigits(&prod)
    }

    /// Square-and-multiply. `pow(0, 0)` is one.
    pub fn pow(&self, x: FieldElement, mut e: u64) -> FieldElement {
        let mut acc = self.one();
        let mut base = x;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(base, base);
            }
        }
        acc
    }

    pub fn inv(&self, x: FieldElement) -> Result<FieldElement, FieldError> {
        if x.is_zero() {
            return Err(FieldError::ZeroInverse);
        }
        Ok(self.pow(x, self.q - 2))
    }

    /// Checked arithmetic; `y` is ignored for [`FieldOp::Inv`].
    pub fn arith(
        &self,
        op: FieldOp,
        x: FieldElement,
        y: Option<FieldElement>,
    ) -> Result<FieldElement, FieldError> {
        self.check(x)?;
        let operand = |y: Option<FieldElement>| -> Result<FieldElement, FieldError> {
            let y = y.unwrap_or_default();
            self.check(y)?;
            Ok(y)
        };
        match op {
            FieldOp::Add => Ok(self.add(x, operand(y)?)),
            FieldOp::Sub => Ok(self.sub(x, operand(y)?)),
            FieldOp::Mul => Ok(self.mul(x, operand(y)?)),
            FieldOp::Inv => self.inv(x),
        }
    }

    fn check(&self, x: FieldElement) -> Result<(), FieldError> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(FieldError::ForeignElement(x.index()))
        }
    }

    /// Fails unless `d | q - 1`.
    pub fn check_divisor(&self, d: u64) -> Result<(), FieldError> {
        if d != 0 && (self.q - 1).is_multiple_of(d) {
            Ok(())
        } else {
            Err(FieldError::NotDivisor {
                value: d,
                qm1: self.q - 1,
            })
        }
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, x: FieldElement) -> Result<u64, FieldError> {
        if x.is_zero() {
            return Err(FieldError::ZeroOrder);
        }
        let mut d = self.q - 1;
        for &(prime, e) in self.qm1.factors() {
            for _ in 0..e {
                if self.pow(x, d / prime) == self.one() {
                    d /= prime;
                } else {
                    break;
                }
            }
        }
        Ok(d)
    }

    pub fn is_primitive(&self, x: FieldElement) -> bool {
        !x.is_zero()
            && self
                .qm1
                .primes()
                .all(|prime| self.pow(x, (self.q - 1) / prime) != self.one())
    }

    /// Membership in the subgroup of nonzero `k`-th powers.
    pub fn is_kth_power(&self, x: FieldElement, k: u64) -> Result<bool, FieldError> {
        self.check_divisor(k)?;
        if x.is_zero() {
            return Ok(false);
        }
        Ok(self.pow(x, (self.q - 1) / k) == self.one())
    }

    /// `x` is `t`-free: nonzero and not an `r`-th power for any prime `r | t`.
    pub fn is_t_free(&self, x: FieldElement, t: u64) -> Result<bool, FieldError> {
        self.check_divisor(t)?;
        if x.is_zero() {
            return Ok(false);
        }
        Ok(self
            .qm1
            .primes()
            .filter(|r| t.is_multiple_of(*r))
            .all(|r| self.pow(x, (self.q - 1) / r) != self.one()))
    }

    /// The first primitive element in canonical order.
    pub fn find_generator(&self) -> FieldElement {
        self.units()
            .find(|&x| self.is_primitive(x))
            .expect("every finite field has a primitive element")
    }

    /// Human-readable element: the residue for prime fields, otherwise a
    /// polynomial in `T`.
    pub fn format_element(&self, x: FieldElement) -> String {
        if self.n == 1 {
            return x.index().to_string();
        }
        let terms: Vec<String> = self
            .coeffs(x)
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "T".to_string(),
                (1, c) => format!("{c}T"),
                (i, 1) => format!("T^{i}"),
                (i, c) => format!("{c}T^{i}"),
            })
            .collect();
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join("+")
        }
    }
}

/// `p^n:c_0,...,c_n`, e.g. `3^2:1,0,1` for `F_3[T]/(T^2+1)` and `13^1:` for a
/// prime field.
impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coeffs: Vec<String> = self.modulus.iter().map(u64::to_string).collect();
        write!(f, "{}^{}:{}", self.p, self.n, coeffs.join(","))
    }
}

impl FromStr for FieldSpec {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || FieldError::Parse(s.to_string());
        let (order, modulus) = s.split_once(':').ok_or_else(bad)?;
        let (p, n) = order.split_once('^').ok_or_else(bad)?;
        let p: u64 = p.trim().parse().map_err(|_| bad())?;
        let n: u32 = n.trim().parse().map_err(|_| bad())?;
        let coeffs: Vec<u64> = if modulus.trim().is_empty() {
            Vec::new()
        } else {
            modulus
                .split(',')
                .map(|c| c.trim().parse().map_err(|_| bad()))
                .collect::<Result<_, _>>()?
        };
        let field = if coeffs.is_empty() {
            if n != 1 {
                return Err(bad());
            }
            FieldSpec::new(p, 1)?
        } else {
            FieldSpec::with_modulus(p, &coeffs)?
        };
        if field.degree() != n {
            return Err(bad());
        }
        Ok(field)
    }
}

/// `f(x) = a x^2 + b x + c` with `a != 0` and nonzero discriminant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct QuadraticPoly {
    pub a: FieldElement,
    pub b: FieldElement,
    pub c: FieldElement,
}

impl QuadraticPoly {
    pub fn new(
        field: &FieldSpec,
        a: FieldElement,
        b: FieldElement,
        c: FieldElement,
    ) -> Result<Self, FieldError> {
        for x in [a, b, c] {
            field.check(x)?;
        }
        if a.is_zero() {
            return Err(FieldError::ZeroLeading);
        }
        let f = QuadraticPoly { a, b, c };
        if f.discriminant(field).is_zero() {
            return Err(FieldError::ZeroDiscriminant);
        }
        Ok(f)
    }

    /// Convenience constructor from integers in the prime subfield.
    pub fn from_ints(field: &FieldSpec, a: i64, b: i64, c: i64) -> Result<Self, FieldError> {
        Self::new(field, field.from_int(a), field.from_int(b), field.from_int(c))
    }

    /// `b^2 - 4ac`, computed in the field (so `b^2` in characteristic 2).
    pub fn discriminant(&self, field: &FieldSpec) -> FieldElement {
        let four_ac = field.mul(field.from_int(4), field.mul(self.a, self.c));
        field.sub(field.mul(self.b, self.b), four_ac)
    }

    /// Horner evaluation `(a x + b) x + c`.
    #[inline]
    pub fn eval(&self, field: &FieldSpec, x: FieldElement) -> FieldElement {
        let ax_b = field.add(field.mul(self.a, x), self.b);
        field.add(field.mul(ax_b, x), self.c)
    }

    /// `lambda * f`.
    pub fn scale(&self, field: &FieldSpec, lambda: FieldElement) -> Result<Self, FieldError> {
        Self::new(
            field,
            field.mul(lambda, self.a),
            field.mul(lambda, self.b),
            field.mul(lambda, self.c),
        )
    }

    pub fn format(&self, field: &FieldSpec) -> String {
        format!(
            "({})x^2+({})x+({})",
            field.format_element(self.a),
            field.format_element(self.b),
            field.format_element(self.c)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f9() -> FieldSpec {
        FieldSpec::with_modulus(3, &[1, 0, 1]).unwrap()
    }

    fn el(field: &FieldSpec, coeffs: &[i64]) -> FieldElement {
        field.from_coeffs(coeffs).unwrap()
    }

    #[test]
    fn build_field_examples() {
        let f = FieldSpec::new(3, 2).unwrap();
        assert_eq!(f.order(), 9);
        assert_eq!(f.modulus(), &[1, 0, 1]);
        assert_eq!(f.to_string(), "3^2:1,0,1");

        let f13 = FieldSpec::new(13, 1).unwrap();
        assert_eq!(f13.order(), 13);
        assert!(f13.modulus().is_empty());
        assert_eq!(f13.to_string(), "13^1:");

        let f16 = FieldSpec::new(2, 4).unwrap();
        assert_eq!(f16.order(), 16);
        // c_0 = 0 is divisible by T and T^4 + 1 = (T + 1)^4, so the first
        // irreducible in (c_0, c_1, c_2, c_3) order is T^4 + T^3 + 1.
        assert_eq!(f16.modulus(), &[1, 0, 0, 1, 1]);
    }

    #[test]
    fn build_field_errors() {
        assert_eq!(FieldSpec::new(9, 1), Err(FieldError::NotPrime(9)));
        assert_eq!(FieldSpec::new(3, 0), Err(FieldError::ZeroDegree));
        assert_eq!(
            FieldSpec::new(2, 32),
            Err(FieldError::OrderTooLarge { p: 2, n: 32 })
        );
        assert!(FieldSpec::new(2, 31).is_ok());
        assert!(FieldSpec::new(2_147_483_647, 1).is_ok());
        assert!(matches!(
            FieldSpec::with_modulus(5, &[1, 0, 1]),
            Err(FieldError::BadModulus(_))
        ));
        assert!(matches!(
            FieldSpec::with_modulus(3, &[1, 0, 2]),
            Err(FieldError::BadModulus(_))
        ));
    }

    #[test]
    fn description_round_trip() {
        for desc in ["3^2:1,0,1", "13^1:", "2^4:1,1,0,0,1", "3^2:2,1,1"] {
            let f: FieldSpec = desc.parse().unwrap();
            assert_eq!(f.to_string(), desc);
        }
        assert!("3^3:1,0,1".parse::<FieldSpec>().is_err());
        assert!("nonsense".parse::<FieldSpec>().is_err());
    }

    #[test]
    fn arithmetic_examples() {
        let f = f9();
        let t = el(&f, &[0, 1]);
        assert_eq!(f.mul(t, t), el(&f, &[2]));
        assert_eq!(f.inv(f.one()), Ok(f.one()));
        assert_eq!(f.inv(f.zero()), Err(FieldError::ZeroInverse));

        let f13 = FieldSpec::new(13, 1).unwrap();
        assert_eq!(f13.mul(f13.from_int(2), f13.from_int(7)), f13.one());
        assert_eq!(
            f13.arith(FieldOp::Add, f13.from_int(9), Some(f13.from_int(6))),
            Ok(f13.from_int(2))
        );
        assert_eq!(
            f13.arith(FieldOp::Mul, f13.from_int(3), Some(FieldElement(13))),
            Err(FieldError::ForeignElement(13))
        );
        assert_eq!(
            f13.arith(FieldOp::Inv, f13.zero(), None),
            Err(FieldError::ZeroInverse)
        );
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for (p, n) in [(2, 3), (3, 2), (5, 2), (2, 4), (7, 1)] {
            let f = FieldSpec::new(p, n).unwrap();
            for x in f.elements() {
                assert_eq!(f.add(x, f.neg(x)), f.zero());
                if !x.is_zero() {
                    assert_eq!(f.mul(x, f.inv(x).unwrap()), f.one());
                }
                for y in f.elements() {
                    assert_eq!(f.mul(x, y), f.mul(y, x));
                    assert_eq!(f.add(x, y), f.add(y, x));
                    for z in f.elements().step_by(3) {
                        assert_eq!(
                            f.mul(x, f.add(y, z)),
                            f.add(f.mul(x, y), f.mul(x, z))
                        );
                        assert_eq!(f.mul(f.mul(x, y), z), f.mul(x, f.mul(y, z)));
                    }
                }
            }
        }
    }

    #[test]
    fn pow_examples() {
        let f13 = FieldSpec::new(13, 1).unwrap();
        assert_eq!(f13.pow(f13.from_int(2), 12), f13.one());
        assert_eq!(f13.pow(f13.from_int(5), 1), f13.from_int(5));
        assert_eq!(f13.pow(f13.zero(), 0), f13.one());
        let f = f9();
        // (1+T)^2 = 2T, (2T)^2 = 4T^2 = -4 = 2.
        assert_eq!(f.pow(el(&f, &[1, 1]), 2), el(&f, &[0, 2]));
        assert_eq!(f.pow(el(&f, &[1, 1]), 4), el(&f, &[2]));
    }

    #[test]
    fn order_examples() {
        let f13 = FieldSpec::new(13, 1).unwrap();
        assert_eq!(f13.element_order(f13.one()), Ok(1));
        assert_eq!(f13.element_order(f13.from_int(2)), Ok(12));
        assert_eq!(f13.element_order(f13.zero()), Err(FieldError::ZeroOrder));
        let f = f9();
        assert_eq!(f.element_order(el(&f, &[0, 1])), Ok(4));
    }

    #[test]
    fn order_matches_brute_force() {
        for q in [13u64, 16, 25, 27, 49, 64, 81, 97] {
            let f = FieldSpec::from_order(q).unwrap();
            for x in f.units() {
                let mut y = x;
                let mut brute = 1;
                while y != f.one() {
                    y = f.mul(y, x);
                    brute += 1;
                }
                assert_eq!(f.element_order(x).unwrap(), brute);
                assert_eq!(f.is_primitive(x), brute == q - 1);
            }
        }
    }

    #[test]
    fn primitive_examples() {
        let f13 = FieldSpec::new(13, 1).unwrap();
        assert!(f13.is_primitive(f13.from_int(2)));
        assert!(!f13.is_primitive(f13.one()));
        assert!(!f13.is_primitive(f13.zero()));
        let f = f9();
        let primitive: Vec<FieldElement> = f.units().filter(|&x| f.is_primitive(x)).collect();
        let expected: Vec<FieldElement> = [[1, 1], [2, 1], [1, 2], [2, 2]]
            .iter()
            .map(|c| el(&f, c))
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        assert_eq!(primitive, expected);
    }

    #[test]
    fn power_and_freeness_examples() {
        let f17 = FieldSpec::new(17, 1).unwrap();
        assert_eq!(f17.is_kth_power(f17.from_int(9), 2), Ok(true));
        assert_eq!(f17.is_kth_power(f17.zero(), 4), Ok(false));
        let f13 = FieldSpec::new(13, 1).unwrap();
        assert_eq!(f13.is_kth_power(f13.from_int(5), 2), Ok(false));
        assert_eq!(
            f13.is_kth_power(f13.from_int(5), 5),
            Err(FieldError::NotDivisor { value: 5, qm1: 12 })
        );
        assert_eq!(f13.is_t_free(f13.from_int(4), 2), Ok(false));
        assert!(f13.units().all(|x| f13.is_t_free(x, 1) == Ok(true)));
        assert_eq!(f13.is_t_free(f13.zero(), 1), Ok(false));
        assert!(f13.is_t_free(f13.one(), 7).is_err());
        for x in f13.elements() {
            let by_order = !x.is_zero() && f13.element_order(x).unwrap() == 12;
            assert_eq!(f13.is_t_free(x, 12).unwrap(), by_order);
        }
    }

    #[test]
    fn quadratic_examples() {
        let f = f9();
        let sq = QuadraticPoly::from_ints(&f, 1, 0, 1).unwrap();
        assert_eq!(sq.eval(&f, el(&f, &[1, 1])), el(&f, &[1, 2]));
        assert_eq!(sq.eval(&f, f.zero()), sq.c);
        let f17 = FieldSpec::new(17, 1).unwrap();
        let g = QuadraticPoly::from_ints(&f17, 1, 0, 1).unwrap();
        assert_eq!(g.eval(&f17, f17.from_int(5)), f17.from_int(9));

        let f13 = FieldSpec::new(13, 1).unwrap();
        assert_eq!(
            QuadraticPoly::from_ints(&f13, 1, 2, 1),
            Err(FieldError::ZeroDiscriminant)
        );
        assert_eq!(
            QuadraticPoly::from_ints(&f13, 0, 2, 1),
            Err(FieldError::ZeroLeading)
        );
    }

    #[test]
    fn characteristic_two_discriminant_is_b_squared() {
        let f4 = FieldSpec::new(2, 2).unwrap();
        for a in f4.units() {
            for b in f4.elements() {
                for c in f4.elements() {
                    let ok = QuadraticPoly::new(&f4, a, b, c).is_ok();
                    assert_eq!(ok, !b.is_zero());
                }
            }
        }
    }

    #[test]
    fn lagrange_and_counts() {
        for q in (3..=1000u64).filter(|&q| arith::prime_power(q).is_some()) {
            let f = FieldSpec::from_order(q).unwrap();
            let mut primitive = 0;
            for x in f.units() {
                let ord = f.element_order(x).unwrap();
                assert_eq!((q - 1) % ord, 0);
                if f.is_primitive(x) {
                    primitive += 1;
                }
            }
            assert_eq!(primitive, f.qm1_factors().euler_phi(), "q = {q}");
            if q > 500 {
                continue;
            }
            for k in f.qm1_factors().divisors() {
                let powers = f.elements().filter(|&x| f.is_kth_power(x, k).unwrap()).count() as u64;
                assert_eq!(powers, (q - 1) / k, "q = {q}, k = {k}");
            }
            for x in f.elements() {
                assert_eq!(f.is_t_free(x, q - 1).unwrap(), f.is_primitive(x));
            }
        }
    }
}
