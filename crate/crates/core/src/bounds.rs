//! Explicit thresholds above which a primitive `g` with `f(g)` a nonzero
//! `k`-th power is guaranteed, the sieve parameters behind them, and the
//! table of worst-case thresholds by number of prime factors of `q - 1`.
//!
//! Thresholds are binary64 values compared against integer `q` with the rule
//! `q > bound  <=>  q >= floor(bound) + 1`.

use serde::Serialize;
use thiserror::Error;

use crate::arith::{self, ArithError};
use crate::ffield::{FieldError, FieldSpec};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundsError {
    #[error("k must be at least 2, got {0}")]
    SmallK(u64),
    #[error("sieve defect delta = {0} is not positive; the sieve does not apply")]
    NonPositiveDelta(f64),
    #[error("need 1 <= s <= omega <= 64, got s = {s}, omega = {omega}")]
    SieveShape { omega: usize, s: usize },
    #[error("W(t) and s must be positive")]
    ZeroParameter,
    #[error("primorial of {0} primes overflows 64 bits")]
    PrimorialOverflow(usize),
    #[error("Rad({t}) equals Rad(q - 1); no primes are left to sieve")]
    FullRadical { t: u64 },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// `e^(e^3)`, about `5.28491e8`.
pub fn e_e3() -> f64 {
    3f64.exp().exp()
}

/// `q > bound` for a nonnegative float bound, decided as `q >= floor(bound) + 1`.
pub fn exceeds(q: u64, bound: f64) -> bool {
    if bound < 0.0 {
        return true;
    }
    if !bound.is_finite() || bound >= u64::MAX as f64 {
        return false;
    }
    q > bound.floor() as u64
}

/// `max(e^(e^3), (2k)^6)`.
pub fn theorem_a_threshold(k: u64) -> Result<f64, BoundsError> {
    if k < 2 {
        return Err(BoundsError::SmallK(k));
    }
    Ok(e_e3().max((2.0 * k as f64).powi(6)))
}

fn check_k(field: &FieldSpec, k: u64) -> Result<(), BoundsError> {
    if k < 2 {
        return Err(BoundsError::SmallK(k));
    }
    field.check_divisor(k)?;
    Ok(())
}

/// `q > 2 k W(q - 1) sqrt(q)`, the condition under which the character-sum
/// estimate forces `N(q - 1, k) > 0`.
pub fn theorem_a_certificate(field: &FieldSpec, k: u64) -> Result<bool, BoundsError> {
    check_k(field, k)?;
    let q = field.order();
    let w = field.qm1_factors().big_w() as f64;
    Ok(exceeds(q, 2.0 * k as f64 * w * (q as f64).sqrt()))
}

/// `phi(q-1) / (k (q-1)) * (q - 2 k W(q-1) sqrt(q))`, a lower bound for
/// `N(q - 1, k)`.
pub fn theorem_a_lower_bound(field: &FieldSpec, k: u64) -> Result<f64, BoundsError> {
    check_k(field, k)?;
    sieve_term_lower_bound(field, field.order() - 1, k)
}

/// `phi(t) / (k t) * (q - 2 k W(t) sqrt(q))`, a lower bound for `N(t, k)`.
pub fn sieve_term_lower_bound(field: &FieldSpec, t: u64, k: u64) -> Result<f64, BoundsError> {
    check_k(field, k)?;
    field.check_divisor(t)?;
    let tf = arith::factorize(t)?;
    let q = field.order() as f64;
    let scale = tf.euler_phi() as f64 / (k * t) as f64;
    Ok(scale * (q - 2.0 * k as f64 * tf.big_w() as f64 * q.sqrt()))
}

/// `phi(p t) / (p t) * 2 W(t) sqrt(q)`, a bound on
/// `|N(p t, k) - (1 - 1/p) N(t, k)|` for a prime `p | q - 1` not dividing `t`.
pub fn sieve_difference_radius(field: &FieldSpec, p: u64, t: u64) -> Result<f64, BoundsError> {
    field.check_divisor(p * t)?;
    let ptf = arith::factorize(p * t)?;
    let wt = arith::big_w(t)? as f64;
    let q = field.order() as f64;
    Ok(ptf.euler_phi() as f64 / (p * t) as f64 * 2.0 * wt * q.sqrt())
}

/// `4 k^2 W(t)^2 (2 + (s - 1) / delta)^2`.
pub fn theorem_b_bound(k: u64, w_t: u64, s: usize, delta: f64) -> Result<f64, BoundsError> {
    if k < 2 {
        return Err(BoundsError::SmallK(k));
    }
    if w_t == 0 || s == 0 {
        return Err(BoundsError::ZeroParameter);
    }
    if delta <= 0.0 || delta.is_nan() {
        return Err(BoundsError::NonPositiveDelta(delta));
    }
    let (k, w) = (k as f64, w_t as f64);
    let inner = 2.0 + (s as f64 - 1.0) / delta;
    Ok(4.0 * k * k * w * w * inner * inner)
}

/// `1 - sum 1/P_i` over the `s` largest of the first `omega` primes: the
/// smallest sieve defect possible when `q - 1` has `omega` prime factors and
/// `s` of them are sieved.
pub fn worst_case_delta(omega: usize, s: usize) -> Result<f64, BoundsError> {
    if s == 0 || s > omega || omega > 64 {
        return Err(BoundsError::SieveShape { omega, s });
    }
    let primes = arith::first_primes(omega)?;
    let delta = 1.0 - primes[omega - s..].iter().map(|&p| 1.0 / p as f64).sum::<f64>();
    if delta <= 0.0 {
        return Err(BoundsError::NonPositiveDelta(delta));
    }
    Ok(delta)
}

/// Product of the first `omega` primes.
pub fn primorial(omega: usize) -> Result<u64, BoundsError> {
    if omega == 0 || omega > 64 {
        return Err(BoundsError::PrimorialOverflow(omega));
    }
    arith::first_primes(omega)?
        .into_iter()
        .try_fold(1u64, |acc, p| acc.checked_mul(p))
        .ok_or(BoundsError::PrimorialOverflow(omega))
}

/// Sieve parameters for one choice of `t | q - 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SieveProfile {
    pub t: u64,
    /// Primes dividing `q - 1` but not `t`.
    pub sieve_primes: Vec<u64>,
    pub s: usize,
    /// `1 - sum 1/p_i`.
    pub delta: f64,
    /// `W(t)`.
    pub w_t: u64,
}

impl SieveProfile {
    pub fn delta_positive(&self) -> bool {
        self.delta > 0.0
    }

    pub fn theorem_b_bound(&self, k: u64) -> Result<f64, BoundsError> {
        theorem_b_bound(k, self.w_t, self.s, self.delta)
    }

    /// `sqrt(q) (sqrt(q) - 2 k W(t) (2 + (s - 1)/delta))`, a lower bound for
    /// `k t / (delta phi(t)) * N(q - 1, k)`.
    pub fn scaled_lower_bound(&self, q: u64, k: u64) -> Result<f64, BoundsError> {
        if !self.delta_positive() {
            return Err(BoundsError::NonPositiveDelta(self.delta));
        }
        let rq = (q as f64).sqrt();
        let inner = 2.0 + (self.s as f64 - 1.0) / self.delta;
        Ok(rq * (rq - 2.0 * k as f64 * self.w_t as f64 * inner))
    }
}

/// Sieve profile for `t`, which must divide `q - 1` with `Rad(t) < Rad(q - 1)`.
pub fn sieve_profile_for(field: &FieldSpec, t: u64) -> Result<SieveProfile, BoundsError> {
    field.check_divisor(t)?;
    let sieve_primes: Vec<u64> = field.qm1_factors().primes().filter(|p| !t.is_multiple_of(*p)).collect();
    if sieve_primes.is_empty() {
        return Err(BoundsError::FullRadical { t });
    }
    let delta = 1.0 - sieve_primes.iter().map(|&p| 1.0 / p as f64).sum::<f64>();
    Ok(SieveProfile {
        t,
        s: sieve_primes.len(),
        sieve_primes,
        delta,
        w_t: arith::big_w(t)?,
    })
}

/// Every `t | q - 1` with `Rad(t) < Rad(q - 1)`, ascending.
pub fn admissible_profiles(field: &FieldSpec) -> Vec<SieveProfile> {
    field
        .qm1_factors()
        .divisors()
        .into_iter()
        .filter_map(|t| sieve_profile_for(field, t).ok())
        .collect()
}

/// `W(q - 1) <= q^(0.96 / log log q)`.
pub fn w_estimate_holds(q: u64) -> Result<bool, BoundsError> {
    let w = arith::big_w(q - 1)? as f64;
    let lq = (q as f64).ln();
    Ok(w <= (q as f64).powf(0.96 / lq.ln()))
}

/// Published worst-case thresholds for `k = 2`, indexed by `omega - 1` and
/// `s - 1`; `None` marks a blank cell.
pub const PUBLISHED_TABLE1: [(u64, [Option<u64>; 3]); 9] = [
    (2, [Some(32), None, None]),
    (6, [Some(128), Some(128), None]),
    (30, [Some(512), Some(265), None]),
    (210, [Some(2048), Some(901), Some(523)]),
    (2310, [None, Some(3384), Some(498)]),
    (30030, [None, Some(13114), None]),
    (510510, [None, Some(51725), None]),
    (9699690, [None, Some(204828), None]),
    (223092870, [None, Some(814305), None]),
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table1Cell {
    pub s: usize,
    /// Worst-case sieve threshold for this `(omega, s)`.
    pub computed: f64,
    /// Printed value, when the published table has one for this `k`.
    pub published: Option<u64>,
    /// The published value differs from `computed` by more than 1.
    pub mismatch: bool,
    /// No `q` with this many prime factors can lie below the threshold.
    pub closed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table1Row {
    pub omega: usize,
    pub primorial: u64,
    pub published_primorial: Option<u64>,
    /// Cells for `s = 1, 2, 3`; `None` where `s > omega`.
    pub cells: [Option<Table1Cell>; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table1Report {
    pub k: u64,
    pub rows: Vec<Table1Row>,
}

impl Table1Report {
    /// `(omega, s)` of every cell whose published value disagrees.
    pub fn mismatches(&self) -> Vec<(usize, usize)> {
        self.rows
            .iter()
            .flat_map(|row| {
                row.cells
                    .iter()
                    .flatten()
                    .filter(|c| c.mismatch)
                    .map(move |c| (row.omega, c.s))
            })
            .collect()
    }
}

/// Worst-case sieve thresholds for `omega = 1..=9` and `s = 1..=3`, taking
/// `W(t) = 2^(omega - s)` and `delta = worst_case_delta(omega, s)`. Published
/// values (only meaningful for `k = 2`) are attached for comparison; a
/// disagreement is flagged, never an error.
pub fn table1_report(k: u64) -> Result<Table1Report, BoundsError> {
    if k < 2 {
        return Err(BoundsError::SmallK(k));
    }
    let mut rows = Vec::with_capacity(PUBLISHED_TABLE1.len());
    for (idx, (pub_primorial, pub_cells)) in PUBLISHED_TABLE1.iter().enumerate() {
        let omega = idx + 1;
        let prim = primorial(omega)?;
        let mut cells: [Option<Table1Cell>; 3] = [None, None, None];
        for s in 1..=3.min(omega) {
            // No positive delta: the sieve says nothing for this shape.
            let delta = match worst_case_delta(omega, s) {
                Ok(d) => d,
                Err(BoundsError::NonPositiveDelta(_)) => continue,
                Err(e) => return Err(e),
            };
            let computed = theorem_b_bound(k, 1 << (omega - s), s, delta)?;
            let published = if k == 2 { pub_cells[s - 1] } else { None };
            cells[s - 1] = Some(Table1Cell {
                s,
                computed,
                published,
                mismatch: published.is_some_and(|v| (v as f64 - computed).abs() > 1.0),
                closed: exceeds(prim, computed),
            });
        }
        rows.push(Table1Row {
            omega,
            primorial: prim,
            published_primorial: Some(*pub_primorial),
            cells,
        });
    }
    Ok(Table1Report { k, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theorem_a_threshold_examples() {
        let ee3 = e_e3();
        assert!((ee3 - 5.28491e8).abs() / 5.28491e8 < 1e-5);
        assert_eq!(theorem_a_threshold(2), Ok(ee3));
        assert_eq!(theorem_a_threshold(40), Ok(80f64.powi(6)));
        assert_eq!(80f64.powi(6), 2.62144e11);
        // (2k)^6 = e^(e^3) at k = e^(e^3 / 6) / 2, about 14.2.
        let crossover = (ee3.ln() / 6.0).exp() / 2.0;
        assert!((crossover - 14.2).abs() < 0.05);
        assert_eq!(theorem_a_threshold(14), Ok(ee3));
        assert_eq!(theorem_a_threshold(15), Ok(30f64.powi(6)));
        assert_eq!(theorem_a_threshold(1), Err(BoundsError::SmallK(1)));
    }

    #[test]
    fn certificate_examples() {
        let f13 = FieldSpec::new(13, 1).unwrap();
        // 13 - 2*2*4*sqrt(13) < 0
        assert_eq!(theorem_a_certificate(&f13, 2), Ok(false));
        let big = FieldSpec::new(1_000_003, 1).unwrap();
        // 10^6 + 2 = 2 * 500001 = 2 * 3 * 166667, W = 8: 2*2*8*sqrt(q) ~ 32000 < q.
        assert_eq!(big.qm1_factors().big_w(), 8);
        assert_eq!(theorem_a_certificate(&big, 2), Ok(true));
        assert!(theorem_a_certificate(&f13, 5).is_err());
    }

    #[test]
    fn theorem_b_examples() {
        assert_eq!(theorem_b_bound(2, 1, 1, 0.5), Ok(64.0));
        for (k, w) in [(2u64, 1u64), (3, 4), (7, 2)] {
            for delta in [0.1, 0.5, 0.9] {
                let expected = (16 * k * k * w * w) as f64;
                assert_eq!(theorem_b_bound(k, w, 1, delta), Ok(expected));
            }
        }
        assert_eq!(
            theorem_b_bound(2, 1, 2, 0.0),
            Err(BoundsError::NonPositiveDelta(0.0))
        );
        assert!(theorem_b_bound(2, 1, 2, -0.1).is_err());
    }

    #[test]
    fn theorem_b_worst_triple_for_four_primes() {
        // omega = 4, s = 3, W(t) = 2: sieving the three largest of {2,3,5,7}
        // gives the largest positive delta, hence the smallest bound.
        let primes = [2u64, 3, 5, 7];
        let delta = worst_case_delta(4, 3).unwrap();
        let bound = theorem_b_bound(2, 2, 3, delta).unwrap();
        let direct = 4.0 * 4.0 * 4.0 * (2.0 + 2.0 / delta).powi(2);
        assert!((bound - direct).abs() < 1e-9 * direct);
        assert!((bound - 4278.699).abs() < 1e-3);
        for skip in 0..4 {
            let triple: Vec<u64> = (0..4).filter(|&i| i != skip).map(|i| primes[i]).collect();
            let d = 1.0 - triple.iter().map(|&p| 1.0 / p as f64).sum::<f64>();
            match theorem_b_bound(2, 2, 3, d) {
                Ok(b) => assert!(b >= bound * (1.0 - 1e-12)),
                Err(e) => assert_eq!(e, BoundsError::NonPositiveDelta(d)),
            }
        }
    }

    #[test]
    fn theorem_b_monotone() {
        let base = theorem_b_bound(3, 2, 2, 0.4).unwrap();
        assert!(theorem_b_bound(3, 4, 2, 0.4).unwrap() >= base);
        assert!(theorem_b_bound(3, 2, 3, 0.4).unwrap() >= base);
        assert!(theorem_b_bound(3, 2, 2, 0.3).unwrap() >= base);
    }

    #[test]
    fn worst_case_delta_examples() {
        assert_eq!(worst_case_delta(1, 1), Ok(0.5));
        let d = worst_case_delta(4, 3).unwrap();
        assert!((d - (1.0 - 1.0 / 3.0 - 1.0 / 5.0 - 1.0 / 7.0)).abs() < 1e-15);
        assert!((d - 0.32381).abs() < 1e-5);
        assert!((worst_case_delta(2, 2).unwrap() - 1.0 / 6.0).abs() < 1e-15);
        assert!(worst_case_delta(3, 3).is_err());
        assert!(worst_case_delta(2, 3).is_err());
    }

    #[test]
    fn primorial_examples() {
        assert_eq!(primorial(1), Ok(2));
        assert_eq!(primorial(9), Ok(223_092_870));
        assert_eq!(primorial(10), Ok(6_469_693_230));
        assert!(primorial(15).is_ok());
        assert_eq!(primorial(16), Err(BoundsError::PrimorialOverflow(16)));
    }

    #[test]
    fn sieve_profile_examples() {
        let f31 = FieldSpec::new(31, 1).unwrap();
        let prof = sieve_profile_for(&f31, 2).unwrap();
        assert_eq!(prof.sieve_primes, vec![3, 5]);
        assert_eq!(prof.s, 2);
        assert!((prof.delta - 7.0 / 15.0).abs() < 1e-15);
        assert_eq!(prof.w_t, 2);

        let f13 = FieldSpec::new(13, 1).unwrap();
        let prof = sieve_profile_for(&f13, 4).unwrap();
        assert_eq!(prof.sieve_primes, vec![3]);
        assert!((prof.delta - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(prof.w_t, 2);
        assert_eq!(
            sieve_profile_for(&f13, 12),
            Err(BoundsError::FullRadical { t: 12 })
        );
        // t = 1 sieves both primes: delta = 1 - 1/2 - 1/3.
        let prof = sieve_profile_for(&f13, 1).unwrap();
        assert!(prof.delta_positive());
        let f31_1 = sieve_profile_for(&f31, 1).unwrap();
        assert!(!f31_1.delta_positive());
        assert!(f31_1.theorem_b_bound(2).is_err());
    }

    #[test]
    fn table1_shape_and_flags() {
        let report = table1_report(2).unwrap();
        let primorials: Vec<u64> = report.rows.iter().map(|r| r.primorial).collect();
        assert_eq!(
            primorials,
            vec![2, 6, 30, 210, 2310, 30030, 510510, 9699690, 223092870]
        );
        assert!(report.rows.iter().all(|r| r.published_primorial == Some(r.primorial)));
        let first = report.rows[0].cells[0].as_ref().unwrap();
        assert_eq!(first.computed, 64.0);
        assert_eq!(first.published, Some(32));
        assert!(first.mismatch);
        assert!(report.rows[0].cells[1].is_none());
        // omega = 3, s = 3: 1 - 1/2 - 1/3 - 1/5 < 0.
        assert!(report.rows[2].cells[2].is_none());
        // Blank published cell still gets a computed value.
        let blank = report.rows[4].cells[0].as_ref().unwrap();
        assert_eq!(blank.published, None);
        assert!(!blank.mismatch);
        assert!(blank.computed > 0.0);
        assert!(report.mismatches().contains(&(1, 1)));
        assert_eq!(report, table1_report(2).unwrap());
        // Other k: no published comparison.
        assert!(table1_report(3).unwrap().mismatches().is_empty());
    }

    #[test]
    fn exceeds_rule() {
        assert!(exceeds(65, 64.0));
        assert!(!exceeds(64, 64.0));
        assert!(exceeds(65, 64.5));
        assert!(!exceeds(64, 64.5));
        assert!(exceeds(0, -1.0));
        assert!(!exceeds(u64::MAX, f64::INFINITY));
    }
}
