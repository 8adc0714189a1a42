//! Multiplicative characters of `F_q^x`, the indicator identities built from
//! them, the sums `S_i(chi) = sum_x chi(x) chi_k^i(f(x))`, the character
//! expansion of `N(t, k)` and an empirical check of the Weil bound.
//!
//! A character is an exponent `e` modulo `q - 1`: with the canonical generator
//! `g0` and `zeta = exp(2 pi i / (q - 1))`, `chi(g0^j) = zeta^(j e)` and
//! `chi(0) = 0`. Every value is one lookup into a table of `zeta^j` whose
//! angles are computed directly, so long sums do not accumulate rotation drift.

use std::f64::consts::TAU;

use num_complex::Complex64;
use thiserror::Error;

use crate::counting::CountQuery;
use crate::ffield::{FieldElement, FieldError, FieldSpec};

/// Largest field order for which discrete-log tables are built.
pub const DLOG_CAP: u64 = 1 << 20;

/// Largest field order accepted by [`CharacterGroup::n_via_characters`].
pub const CHARACTER_COUNT_CAP: u64 = 1 << 16;

/// Complex value of a character or character sum.
pub type ComplexValue = Complex64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CharSumError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("q = {q} exceeds the table cap {cap}")]
    OrderCap { q: u64, cap: u64 },
    #[error("the Weil check needs a nontrivial character")]
    TrivialCharacter,
    #[error("character exponent {0} is out of range")]
    BadExponent(u64),
    #[error("power index i = {i} must be below k = {k}")]
    PowerIndex { i: u64, k: u64 },
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("polynomial is an m-th power for m = {0}")]
    PerfectPower(u64),
    #[error("only polynomials of degree 1 or 2 are decided here, got degree {0}")]
    UnsupportedDegree(usize),
    #[error("character sum {re} + {im}i is not an integer (q = {q}); character tables are inconsistent")]
    NumericConsistency { re: f64, im: f64, q: u64 },
}

/// Discrete logarithms to the canonical generator (the first primitive
/// element in canonical order).
#[derive(Debug, Clone)]
pub struct DlogTable {
    generator: FieldElement,
    log: Vec<u32>,
    exp: Vec<FieldElement>,
}

impl DlogTable {
    /// Builds the table without the size cap; memory is `O(q)`.
    pub fn new(field: &FieldSpec) -> Self {
        let q = field.order() as usize;
        let generator = field.find_generator();
        let mut log = vec![u32::MAX; q];
        let mut exp = Vec::with_capacity(q - 1);
        let mut x = field.one();
        for j in 0..q - 1 {
            log[x.index() as usize] = j as u32;
            exp.push(x);
            x = field.mul(x, generator);
        }
        debug_assert_eq!(x, field.one());
        DlogTable { generator, log, exp }
    }

    pub fn generator(&self) -> FieldElement {
        self.generator
    }

    /// `log_g0(x)`, or `None` for zero.
    #[inline]
    pub fn log(&self, x: FieldElement) -> Option<u64> {
        match self.log[x.index() as usize] {
            u32::MAX => None,
            j => Some(j as u64),
        }
    }

    /// `g0^j` for `j` reduced mod `q - 1`.
    pub fn exp(&self, j: u64) -> FieldElement {
        self.exp[(j % self.exp.len() as u64) as usize]
    }

    /// Order of the multiplicative group, `q - 1`.
    pub fn group_order(&self) -> u64 {
        self.exp.len() as u64
    }
}

/// The discrete-log table of `field`, refusing fields above [`DLOG_CAP`].
pub fn dlog_table(field: &FieldSpec) -> Result<DlogTable, CharSumError> {
    if field.order() > DLOG_CAP {
        return Err(CharSumError::OrderCap {
            q: field.order(),
            cap: DLOG_CAP,
        });
    }
    Ok(DlogTable::new(field))
}

/// A multiplicative character, `chi(g0^j) = zeta^(j * exponent)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Character {
    exponent: u64,
    group_order: u64,
}

impl Character {
    pub fn exponent(self) -> u64 {
        self.exponent
    }

    pub fn is_trivial(self) -> bool {
        self.exponent == 0
    }

    /// `(q - 1) / gcd(q - 1, exponent)`.
    pub fn order(self) -> u64 {
        self.group_order / gcd(self.group_order, self.exponent)
    }

    /// `chi^i`.
    pub fn pow(self, i: u64) -> Character {
        Character {
            exponent: ((self.exponent as u128 * i as u128) % self.group_order as u128) as u64,
            group_order: self.group_order,
        }
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Outcome of [`CharacterGroup::weil_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeilCheck {
    /// `|sum_x chi(a f(x))|`
    pub lhs: f64,
    /// `(r - 1) sqrt(q)`
    pub rhs: f64,
    pub ok: bool,
}

/// The character group of a field together with its lookup tables.
#[derive(Debug, Clone)]
pub struct CharacterGroup<'a> {
    field: &'a FieldSpec,
    dlog: DlogTable,
    roots: Vec<Complex64>,
}

impl<'a> CharacterGroup<'a> {
    pub fn new(field: &'a FieldSpec) -> Result<Self, CharSumError> {
        let dlog = dlog_table(field)?;
        let m = dlog.group_order();
        let roots = (0..m)
            .map(|j| Complex64::from_polar(1.0, TAU * j as f64 / m as f64))
            .collect();
        Ok(CharacterGroup { field, dlog, roots })
    }

    pub fn field(&self) -> &'a FieldSpec {
        self.field
    }

    pub fn dlog(&self) -> &DlogTable {
        &self.dlog
    }

    fn group_order(&self) -> u64 {
        self.dlog.group_order()
    }

    pub fn trivial(&self) -> Character {
        Character {
            exponent: 0,
            group_order: self.group_order(),
        }
    }

    pub fn character(&self, exponent: u64) -> Result<Character, CharSumError> {
        if exponent >= self.group_order() {
            return Err(CharSumError::BadExponent(exponent));
        }
        Ok(Character {
            exponent,
            group_order: self.group_order(),
        })
    }

    /// `G_d`: the `phi(d)` characters of exact order `d`, exponents
    /// `(q - 1) / d * r` for `r` coprime to `d`, ascending.
    pub fn characters_of_order(&self, d: u64) -> Result<Vec<Character>, CharSumError> {
        self.field.check_divisor(d)?;
        let step = self.group_order() / d;
        Ok((0..d)
            .filter(|&r| gcd(r, d) == 1)
            .map(|r| Character {
                exponent: step * r,
                group_order: self.group_order(),
            })
            .collect())
    }

    /// The fixed character of order `k`, exponent `(q - 1) / k`.
    pub fn chi_k(&self, k: u64) -> Result<Character, CharSumError> {
        self.field.check_divisor(k)?;
        Ok(Character {
            exponent: self.group_order() / k,
            group_order: self.group_order(),
        })
    }

    /// `zeta^j`.
    #[inline]
    fn root(&self, j: u64) -> Complex64 {
        self.roots[(j % self.group_order()) as usize]
    }

    #[inline]
    fn angle(&self, chi: Character, log: u64) -> u64 {
        ((chi.exponent as u128 * log as u128) % self.group_order() as u128) as u64
    }

    /// `chi(x)`, zero at `x = 0`.
    pub fn eval(&self, chi: Character, x: FieldElement) -> ComplexValue {
        match self.dlog.log(x) {
            None => Complex64::new(0.0, 0.0),
            Some(j) => self.root(self.angle(chi, j)),
        }
    }

    /// `S_i(chi) = sum_x chi(x) chi_k^i(f(x))`.
    pub fn s_sum(
        &self,
        chi: Character,
        i: u64,
        k: u64,
        f: &crate::ffield::QuadraticPoly,
    ) -> Result<ComplexValue, CharSumError> {
        self.field.check_divisor(k)?;
        if i >= k {
            return Err(CharSumError::PowerIndex { i, k });
        }
        let psi = self.chi_k(k)?.pow(i);
        let mut sum = Complex64::new(0.0, 0.0);
        for x in self.field.units() {
            let fx = f.eval(self.field, x);
            let (Some(lx), Some(lf)) = (self.dlog.log(x), self.dlog.log(fx)) else {
                continue;
            };
            sum += self.root(self.angle(chi, lx) + self.angle(psi, lf));
        }
        Ok(sum)
    }

    /// `(phi(t)/t) sum_{d | t} mu(d)/phi(d) sum_{chi in G_d} chi(x)`, which is
    /// 1 when `x` is `t`-free and 0 otherwise.
    pub fn t_free_indicator(&self, x: FieldElement, t: u64) -> Result<ComplexValue, CharSumError> {
        self.field.check_divisor(t)?;
        let tf = crate::arith::factorize(t).expect("t divides q - 1");
        let mut sum = Complex64::new(0.0, 0.0);
        for d in tf.squarefree_divisors() {
            let df = crate::arith::factorize(d).expect("d divides t");
            let weight = df.mobius() as f64 / df.euler_phi() as f64;
            let inner: Complex64 = self
                .characters_of_order(d)?
                .into_iter()
                .map(|chi| self.eval(chi, x))
                .sum();
            sum += inner * weight;
        }
        Ok(sum * (tf.euler_phi() as f64 / t as f64))
    }

    /// `(1/k) sum_{i < k} chi_k^i(x)`, which is 1 on nonzero `k`-th powers and
    /// 0 elsewhere.
    pub fn kth_power_indicator(&self, x: FieldElement, k: u64) -> Result<ComplexValue, CharSumError> {
        let chi_k = self.chi_k(k)?;
        let sum: Complex64 = (0..k).map(|i| self.eval(chi_k.pow(i), x)).sum();
        Ok(sum / k as f64)
    }

    /// Per-element logs of `x` and `f(x)` for the nonzero `x` with `f(x) != 0`.
    fn log_pairs(&self, f: &crate::ffield::QuadraticPoly) -> Vec<(u64, u64)> {
        self.field
            .units()
            .filter_map(|x| {
                let fx = f.eval(self.field, x);
                Some((self.dlog.log(x)?, self.dlog.log(fx)?))
            })
            .collect()
    }

    /// `sum_{i < k} sum_{d | t, d square-free} mu(d)/phi(d) sum_{chi in G_d} S_i(chi)`
    /// where only divisors accepted by `keep` contribute, in the fixed order
    /// `(i, d, exponent)` so results are bit-stable.
    fn expansion(
        &self,
        pairs: &[(u64, u64)],
        k: u64,
        divisors: &[u64],
    ) -> Result<Complex64, CharSumError> {
        let chi_k = self.chi_k(k)?;
        let mut total = Complex64::new(0.0, 0.0);
        for i in 0..k {
            let psi = chi_k.pow(i);
            for &d in divisors {
                let df = crate::arith::factorize(d).expect("d divides q - 1");
                let weight = df.mobius() as f64 / df.euler_phi() as f64;
                if weight == 0.0 {
                    continue;
                }
                for chi in self.characters_of_order(d)? {
                    let s: Complex64 = pairs
                        .iter()
                        .map(|&(lx, lf)| self.root(self.angle(chi, lx) + self.angle(psi, lf)))
                        .sum();
                    total += s * weight;
                }
            }
        }
        Ok(total)
    }

    /// `N(t, k)` from its character expansion
    /// `phi(t)/(k t) sum_i sum_{d | t} mu(d)/phi(d) sum_{chi in G_d} S_i(chi)`.
    pub fn n_via_characters(&self, query: &CountQuery<'_>) -> Result<u64, CharSumError> {
        let q = self.field.order();
        if q > CHARACTER_COUNT_CAP {
            return Err(CharSumError::OrderCap {
                q,
                cap: CHARACTER_COUNT_CAP,
            });
        }
        let (t, k) = (query.t(), query.k());
        let tf = crate::arith::factorize(t).expect("t divides q - 1");
        let pairs = self.log_pairs(query.poly());
        let total = self.expansion(&pairs, k, &tf.squarefree_divisors())?;
        let value = total * (tf.euler_phi() as f64 / (k * t) as f64);
        round_checked(value, q)
    }

    /// Right side of the sieve-difference identity
    /// `N(pt, k) - (1 - 1/p) N(t, k) = phi(pt)/(k p t) sum_i sum_{d | t} mu(pd)/phi(pd) sum_{chi in G_pd} S_i(chi)`
    /// for a prime `p | q - 1` not dividing `t`.
    pub fn sieve_difference(&self, query: &CountQuery<'_>, p: u64) -> Result<f64, CharSumError> {
        let (t, k) = (query.t(), query.k());
        self.field.check_divisor(p * t)?;
        let pt = crate::arith::factorize(p * t).expect("pt divides q - 1");
        let divisors: Vec<u64> = crate::arith::factorize(t)
            .expect("t divides q - 1")
            .squarefree_divisors()
            .into_iter()
            .map(|d| p * d)
            .collect();
        let pairs = self.log_pairs(query.poly());
        let total = self.expansion(&pairs, k, &divisors)?;
        let value = total * (pt.euler_phi() as f64 / (k * p * t) as f64);
        let q = self.field.order() as f64;
        if value.im.abs() > 1e-6 * q {
            return Err(CharSumError::NumericConsistency {
                re: value.re,
                im: value.im,
                q: self.field.order(),
            });
        }
        Ok(value.re)
    }

    /// `|sum_x chi(a f(x))|` against `(r - 1) sqrt(q)` for a monic `f` of degree
    /// 1 or 2 (coefficients low degree first), deciding the "not an m-th
    /// power" hypothesis and the root count `r` itself.
    pub fn weil_check(
        &self,
        chi: Character,
        f: &[FieldElement],
        a: FieldElement,
    ) -> Result<WeilCheck, CharSumError> {
        if chi.is_trivial() {
            return Err(CharSumError::TrivialCharacter);
        }
        let field = self.field;
        if f.last() != Some(&field.one()) {
            return Err(CharSumError::NotMonic);
        }
        let roots = match f.len() - 1 {
            1 => 1,
            2 => {
                let (c, b) = (f[0], f[1]);
                let disc = field.sub(field.mul(b, b), field.mul(field.from_int(4), c));
                if !disc.is_zero() {
                    2
                } else if chi.order() == 2 {
                    return Err(CharSumError::PerfectPower(2));
                } else {
                    1
                }
            }
            0 => return Err(CharSumError::PerfectPower(chi.order())),
            deg => return Err(CharSumError::UnsupportedDegree(deg)),
        };
        self.weil_check_with_roots(chi, f, a, roots)
    }

    /// As [`weil_check`](Self::weil_check) for any degree; the caller asserts
    /// that `f` is not an `m`-th power and supplies its number of distinct
    /// roots in the algebraic closure.
    pub fn weil_check_with_roots(
        &self,
        chi: Character,
        f: &[FieldElement],
        a: FieldElement,
        roots: u64,
    ) -> Result<WeilCheck, CharSumError> {
        if chi.is_trivial() {
            return Err(CharSumError::TrivialCharacter);
        }
        let field = self.field;
        let sum: Complex64 = field
            .elements()
            .map(|x| {
                let fx = f
                    .iter()
                    .rev()
                    .fold(field.zero(), |acc, &c| field.add(field.mul(acc, x), c));
                self.eval(chi, field.mul(a, fx))
            })
            .sum();
        let lhs = sum.norm();
        let rhs = roots.saturating_sub(1) as f64 * (field.order() as f64).sqrt();
        Ok(WeilCheck {
            lhs,
            rhs,
            ok: lhs <= rhs + 1e-9,
        })
    }
}

fn round_checked(value: Complex64, q: u64) -> Result<u64, CharSumError> {
    let tol = 1e-6 * q as f64;
    let rounded = value.re.round();
    if value.im.abs() > tol || (value.re - rounded).abs() > tol || rounded < 0.0 {
        return Err(CharSumError::NumericConsistency {
            re: value.re,
            im: value.im,
            q,
        });
    }
    Ok(rounded as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::{count_n, CountQuery};
    use crate::ffield::QuadraticPoly;

    fn close(z: Complex64, re: f64, im: f64) -> bool {
        (z.re - re).abs() < 1e-9 && (z.im - im).abs() < 1e-9
    }

    #[test]
    fn dlog_examples() {
        let f13 = FieldSpec::new(13, 1).unwrap();
        let table = dlog_table(&f13).unwrap();
        assert_eq!(table.generator(), f13.from_int(2));
        assert_eq!(table.log(f13.one()), Some(0));
        assert_eq!(table.log(f13.from_int(2)), Some(1));
        assert_eq!(table.log(f13.from_int(3)), Some(4));
        assert_eq!(table.log(f13.zero()), None);
        let mut seen = [false; 12];
        for x in f13.units() {
            let j = table.log(x).unwrap() as usize;
            assert!(!seen[j]);
            seen[j] = true;
            assert_eq!(table.exp(j as u64), x);
        }
        let big = FieldSpec::new(2, 21).unwrap();
        assert!(matches!(dlog_table(&big), Err(CharSumError::OrderCap { .. })));
    }

    #[test]
    fn characters_of_order_examples() {
        let f13 = FieldSpec::new(13, 1).unwrap();
        let g = CharacterGroup::new(&f13).unwrap();
        assert_eq!(g.characters_of_order(1).unwrap(), vec![g.trivial()]);
        let quad = g.characters_of_order(2).unwrap();
        assert_eq!(quad.len(), 1);
        assert_eq!(quad[0].exponent(), 6);
        let exps: Vec<u64> = g
            .characters_of_order(12)
            .unwrap()
            .iter()
            .map(|c| c.exponent())
            .collect();
        assert_eq!(exps, vec![1, 5, 7, 11]);
        assert!(g.characters_of_order(5).is_err());
        for d in [1, 2, 3, 4, 6, 12] {
            assert!(g.characters_of_order(d).unwrap().iter().all(|c| c.order() == d));
        }
    }

    #[test]
    fn eval_examples() {
        let f13 = FieldSpec::new(13, 1).unwrap();
        let g = CharacterGroup::new(&f13).unwrap();
        for x in f13.units() {
            assert!(close(g.eval(g.trivial(), x), 1.0, 0.0));
        }
        for e in 0..12 {
            let chi = g.character(e).unwrap();
            assert!(close(g.eval(chi, f13.zero()), 0.0, 0.0));
            for x in f13.units() {
                assert!((g.eval(chi, x).norm_sqr() - 1.0).abs() <= 1e-12);
            }
        }
        let eta = g.character(6).unwrap();
        assert!(close(g.eval(eta, f13.from_int(2)), -1.0, 0.0));
        assert!(g.character(12).is_err());
    }

    #[test]
    fn eval_is_multiplicative() {
        let f = FieldSpec::new(5, 2).unwrap();
        let g = CharacterGroup::new(&f).unwrap();
        for e in [1, 3, 8, 12] {
            let chi = g.character(e).unwrap();
            for x in f.units().step_by(3) {
                for y in f.units().step_by(5) {
                    let lhs = g.eval(chi, f.mul(x, y));
                    let rhs = g.eval(chi, x) * g.eval(chi, y);
                    assert!((lhs - rhs).norm() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn s_sum_examples() {
        let f13 = FieldSpec::new(13, 1).unwrap();
        let g = CharacterGroup::new(&f13).unwrap();
        let f = QuadraticPoly::from_ints(&f13, 1, 0, 1).unwrap();
        // x != 0 and x^2 + 1 != 0 excludes 0 and the roots 5, 8: q - 3 terms.
        assert!(close(g.s_sum(g.trivial(), 0, 2, &f).unwrap(), 10.0, 0.0));
        // sum over x != 0 of eta(x^2 + 1): the full sum over F_13 is -1 and
        // the x = 0 term eta(1) = 1 is excluded.
        let direct: i64 = f13
            .units()
            .map(|x| {
                let v = f.eval(&f13, x);
                if v.is_zero() {
                    0
                } else if f13.is_kth_power(v, 2).unwrap() {
                    1
                } else {
                    -1
                }
            })
            .sum();
        assert_eq!(direct, -2);
        assert!(close(g.s_sum(g.trivial(), 1, 2, &f).unwrap(), -2.0, 0.0));
        assert!(matches!(
            g.s_sum(g.trivial(), 2, 2, &f),
            Err(CharSumError::PowerIndex { i: 2, k: 2 })
        ));
    }

    #[test]
    fn s_zero_trivial_is_q_minus_3_with_two_nonzero_roots() {
        for q in [7u64, 11, 13, 25, 27, 49] {
            let field = FieldSpec::from_order(q).unwrap();
            let g = CharacterGroup::new(&field).unwrap();
            // (x - 1)(x - r) with r a nonzero element other than 1.
            let r = field.from_int(2);
            let b = field.neg(field.add(field.one(), r));
            let f = QuadraticPoly::new(&field, field.one(), b, r).unwrap();
            let s = g.s_sum(g.trivial(), 0, 2, &f).unwrap();
            assert!(close(s, (q - 3) as f64, 0.0), "q = {q}");
        }
    }

    #[test]
    fn n_via_characters_examples() {
        let f13 = FieldSpec::new(13, 1).unwrap();
        let g13 = CharacterGroup::new(&f13).unwrap();
        let f = QuadraticPoly::from_ints(&f13, 1, 0, 1).unwrap();
        let query = CountQuery::new(&f13, 12, 2, f).unwrap();
        assert_eq!(g13.n_via_characters(&query), Ok(0));

        let f17 = FieldSpec::new(17, 1).unwrap();
        let g17 = CharacterGroup::new(&f17).unwrap();
        let f = QuadraticPoly::from_ints(&f17, 1, 0, 1).unwrap();
        for t in [1, 2, 4, 8, 16] {
            let query = CountQuery::new(&f17, t, 2, f).unwrap();
            assert_eq!(g17.n_via_characters(&query), Ok(count_n(&query)));
        }
        let t1 = CountQuery::new(&f17, 1, 2, f).unwrap();
        let direct = f17
            .units()
            .filter(|&x| f17.is_kth_power(f.eval(&f17, x), 2).unwrap())
            .count() as u64;
        assert_eq!(g17.n_via_characters(&t1), Ok(direct));
    }

    #[test]
    fn rounding_guard_trips_on_non_integers() {
        assert!(round_checked(Complex64::new(3.0000001, 0.0), 13).is_ok());
        assert!(matches!(
            round_checked(Complex64::new(3.4, 0.0), 13),
            Err(CharSumError::NumericConsistency { .. })
        ));
        assert!(matches!(
            round_checked(Complex64::new(3.0, 0.5), 13),
            Err(CharSumError::NumericConsistency { .. })
        ));
    }

    #[test]
    fn weil_examples() {
        let f13 = FieldSpec::new(13, 1).unwrap();
        let g = CharacterGroup::new(&f13).unwrap();
        let eta = g.character(6).unwrap();
        let one = f13.one();
        let check = g
            .weil_check(eta, &[one, f13.zero(), one], one)
            .unwrap();
        assert!((check.lhs - 1.0).abs() < 1e-9);
        assert!((check.rhs - 13f64.sqrt()).abs() < 1e-12);
        assert!(check.ok);

        for e in 1..12 {
            let chi = g.character(e).unwrap();
            let check = g.weil_check(chi, &[f13.zero(), one], f13.from_int(3)).unwrap();
            assert!(check.lhs < 1e-9);
            assert_eq!(check.rhs, 0.0);
            assert!(check.ok);
        }

        assert_eq!(
            g.weil_check(g.trivial(), &[one, one], one),
            Err(CharSumError::TrivialCharacter)
        );
        assert_eq!(
            g.weil_check(eta, &[one, f13.from_int(2)], one),
            Err(CharSumError::NotMonic)
        );
        // x^2 + 2x + 1 = (x + 1)^2 is a square.
        assert_eq!(
            g.weil_check(eta, &[one, f13.from_int(2), one], one),
            Err(CharSumError::PerfectPower(2))
        );
        // ...but not a cube, and has a single root.
        let cubic = g.character(4).unwrap();
        let check = g.weil_check(cubic, &[one, f13.from_int(2), one], one).unwrap();
        assert!(check.ok && check.rhs == 0.0);
        assert_eq!(
            g.weil_check(eta, &[one, one, one, one], one),
            Err(CharSumError::UnsupportedDegree(3))
        );
    }
}
