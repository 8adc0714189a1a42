//! Grid checks of the identities and inequalities the library relies on.
//!
//! Each check walks a grid of fields and parameters, returns the number of
//! cases it examined, or the first violation (in ascending `q`) together with
//! a command line that reproduces it. The CLI self-test and the acceptance
//! suite both drive these with their own grid sizes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::arith;
use crate::bounds;
use crate::charsum::{dlog_table, CharacterGroup};
use crate::counting::{
    count_n, scan_exceptional, scan_field, CountQuery, CountTables, Leading, ScanConfig,
    WitnessSearch,
};
use crate::ffield::{FieldElement, FieldSpec, QuadraticPoly};

/// Exceptional `q <= 1024` for `k = 2`: fields with some quadratic of
/// nonzero discriminant that takes no nonzero square value at a primitive
/// element. Found by exhaustive search over every `a`, `b`, `c`.
pub const EXCEPTIONAL_K2: [u64; 9] = [3, 5, 7, 9, 11, 13, 19, 25, 31];

/// Fixed seed used by the self-test and the acceptance suite.
pub const DEFAULT_SEED: u64 = 0x5eed_2024;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckSummary {
    pub name: &'static str,
    pub cases: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub invariant: &'static str,
    pub detail: String,
    /// Command line reproducing the failing case.
    pub repro: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} violated: {}\n  reproduce: {}", self.invariant, self.detail, self.repro)
    }
}

pub type CheckResult = Result<CheckSummary, Violation>;

/// Debug hook for exercising the failure path of the self-test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Replace the exponent of one nontrivial character by 0.
    FlipCharacterExponent,
}

/// Prime powers in `[lo, hi]`.
pub fn prime_powers(lo: u64, hi: u64) -> Vec<u64> {
    (lo.max(2)..=hi).filter(|&q| arith::prime_power(q).is_some()).collect()
}

fn field(q: u64) -> FieldSpec {
    FieldSpec::from_order(q).expect("grid contains prime powers only")
}

fn rng_for(seed: u64, q: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ q.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ salt.rotate_left(32))
}

/// `count` quadratics with uniformly random `a != 0`, `b`, `c` and nonzero
/// discriminant.
pub fn sample_quadratics(field: &FieldSpec, count: usize, rng: &mut impl Rng) -> Vec<QuadraticPoly> {
    let q = field.order();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let a = field.element(rng.gen_range(1..q)).expect("in range");
        let b = field.element(rng.gen_range(0..q)).expect("in range");
        let c = field.element(rng.gen_range(0..q)).expect("in range");
        if let Ok(f) = QuadraticPoly::new(field, a, b, c) {
            out.push(f);
        }
    }
    out
}

fn coeff_arg(field: &FieldSpec, x: FieldElement) -> String {
    let coeffs: Vec<String> = field.coeffs(x).iter().map(u64::to_string).collect();
    coeffs.join(",")
}

/// `-f` argument for the CLI: `a,b,c` over prime fields, `a0,a1;b0,b1;c0,c1`
/// otherwise.
pub fn poly_arg(field: &FieldSpec, f: &QuadraticPoly) -> String {
    let sep = if field.is_prime_field() { "," } else { ";" };
    [f.a, f.b, f.c]
        .iter()
        .map(|&x| coeff_arg(field, x))
        .collect::<Vec<_>>()
        .join(sep)
}

fn field_args(field: &FieldSpec) -> String {
    let default = FieldSpec::new(field.characteristic(), field.degree())
        .map(|d| d.modulus() == field.modulus())
        .unwrap_or(false);
    let mut out = format!("-p {} -n {}", field.characteristic(), field.degree());
    if !default {
        let m: Vec<String> = field.modulus().iter().map(u64::to_string).collect();
        out.push_str(&format!(" --modulus {}", m.join(",")));
    }
    out
}

fn count_repro(field: &FieldSpec, t: u64, k: u64, f: &QuadraticPoly) -> String {
    format!(
        "primpow count {} -t {t} -k {k} -f '{}' --method both",
        field_args(field),
        poly_arg(field, f)
    )
}

fn selftest_repro(name: &str) -> String {
    format!("primpow selftest full --only {name}")
}

/// Runs `check` for each `q` and sums the case counts, reporting the violation
/// at the smallest failing `q`.
fn over_fields(
    name: &'static str,
    qs: &[u64],
    check: impl Fn(u64) -> Result<u64, Violation> + Sync,
) -> CheckResult {
    let results: Vec<Result<u64, Violation>> = qs.par_iter().map(|&q| check(q)).collect();
    let mut cases = 0;
    for r in results {
        cases += r?;
    }
    Ok(CheckSummary { name, cases })
}

fn divisors_at_least_2(field: &FieldSpec) -> Vec<u64> {
    field
        .qm1_factors()
        .divisors()
        .into_iter()
        .filter(|&k| k >= 2)
        .collect()
}

/// Lagrange, `#primitive = phi(q - 1)`, `#k-th powers = (q - 1)/k` and
/// `(q - 1)`-free iff primitive.
pub fn field_counts(order_max: u64, power_max: u64) -> CheckResult {
    const NAME: &str = "field-counts";
    over_fields(NAME, &prime_powers(3, order_max), |q| {
        let f = field(q);
        let fail = |detail: String| Violation {
            invariant: NAME,
            detail,
            repro: selftest_repro(NAME),
        };
        let mut cases = 0;
        let mut primitive = 0;
        for x in f.units() {
            let ord = f.element_order(x).expect("nonzero");
            if (q - 1) % ord != 0 {
                return Err(fail(format!("order {ord} of {} does not divide {}", x.index(), q - 1)));
            }
            if f.is_primitive(x) {
                primitive += 1;
            }
            cases += 1;
        }
        if primitive != f.qm1_factors().euler_phi() {
            return Err(fail(format!("q = {q}: {primitive} primitive elements")));
        }
        if q <= power_max {
            for k in f.qm1_factors().divisors() {
                let n = f.elements().filter(|&x| f.is_kth_power(x, k).unwrap()).count() as u64;
                if n != (q - 1) / k {
                    return Err(fail(format!("q = {q}, k = {k}: {n} k-th powers")));
                }
                cases += 1;
            }
            for x in f.elements() {
                if f.is_t_free(x, q - 1).unwrap() != f.is_primitive(x) {
                    return Err(fail(format!("q = {q}: (q-1)-free disagrees at {}", x.index())));
                }
                cases += 1;
            }
        }
        Ok(cases)
    })
}

/// `sum_{x != 0} chi(x) = 0` for every nontrivial character.
pub fn orthogonality(q_max: u64, fault: Option<Fault>) -> CheckResult {
    const NAME: &str = "orthogonality";
    over_fields(NAME, &prime_powers(3, q_max), |q| {
        let f = field(q);
        let group = CharacterGroup::new(&f).expect("under table cap");
        for e in 1..q - 1 {
            let exponent = match fault {
                Some(Fault::FlipCharacterExponent) if e == 1 => 0,
                _ => e,
            };
            let chi = group.character(exponent).expect("in range");
            let sum: num_complex::Complex64 = f.units().map(|x| group.eval(chi, x)).sum();
            if sum.norm() > 1e-9 * q as f64 {
                return Err(Violation {
                    invariant: NAME,
                    detail: format!("q = {q}, exponent {e}: |sum| = {}", sum.norm()),
                    repro: match fault {
                        Some(_) => format!("{} --inject-fault", selftest_repro(NAME)),
                        None => selftest_repro(NAME),
                    },
                });
            }
        }
        Ok(q - 2)
    })
}

/// The character expansions of the `t`-free and `k`-th power indicators agree
/// pointwise with the predicates, within `1e-9`.
pub fn indicator_identities(q_max: u64) -> CheckResult {
    const NAME: &str = "indicator-identities";
    over_fields(NAME, &prime_powers(3, q_max), |q| {
        let f = field(q);
        let group = CharacterGroup::new(&f).expect("under table cap");
        let mut cases = 0;
        for d in f.qm1_factors().divisors() {
            for x in f.elements() {
                let expect_free = f.is_t_free(x, d).unwrap() as u8 as f64;
                let got = group.t_free_indicator(x, d).unwrap();
                if (got.re - expect_free).abs() > 1e-9 || got.im.abs() > 1e-9 {
                    return Err(Violation {
                        invariant: NAME,
                        detail: format!("t-free indicator q = {q}, t = {d}, x = {}: {got}", x.index()),
                        repro: selftest_repro(NAME),
                    });
                }
                let expect_power = f.is_kth_power(x, d).unwrap() as u8 as f64;
                let got = group.kth_power_indicator(x, d).unwrap();
                if (got.re - expect_power).abs() > 1e-9 || got.im.abs() > 1e-9 {
                    return Err(Violation {
                        invariant: NAME,
                        detail: format!("k-th power indicator q = {q}, k = {d}, x = {}: {got}", x.index()),
                        repro: selftest_repro(NAME),
                    });
                }
                cases += 2;
            }
        }
        Ok(cases)
    })
}

/// `k = 2` when it divides `q - 1`, plus the smallest odd prime dividing `q - 1`.
pub fn oracle_ks(field: &FieldSpec) -> Vec<u64> {
    let qm1 = field.order() - 1;
    let mut ks = Vec::new();
    if qm1.is_multiple_of(2) {
        ks.push(2);
    }
    if let Some(p) = field.qm1_factors().primes().find(|&p| p % 2 == 1) {
        ks.push(p);
    }
    ks
}

/// The character expansion of `N(t, k)` equals the direct count.
pub fn oracle_equivalence(q_max: u64, samples: usize, seed: u64) -> CheckResult {
    const NAME: &str = "oracle-equivalence";
    over_fields(NAME, &prime_powers(3, q_max), |q| {
        let f = field(q);
        let group = CharacterGroup::new(&f).expect("under table cap");
        let polys = sample_quadratics(&f, samples, &mut rng_for(seed, q, 1));
        let mut cases = 0;
        for k in oracle_ks(&f) {
            for t in f.qm1_factors().divisors() {
                for poly in &polys {
                    let query = CountQuery::new(&f, t, k, *poly).expect("valid");
                    let direct = count_n(&query);
                    let fail = |detail: String| Violation {
                        invariant: NAME,
                        detail,
                        repro: count_repro(&f, t, k, poly),
                    };
                    match group.n_via_characters(&query) {
                        Ok(via) if via == direct => {}
                        Ok(via) => {
                            return Err(fail(format!(
                                "q = {q}, t = {t}, k = {k}: characters give {via}, count gives {direct}"
                            )))
                        }
                        Err(e) => return Err(fail(format!("q = {q}, t = {t}, k = {k}: {e}"))),
                    }
                    cases += 1;
                }
            }
        }
        Ok(cases)
    })
}

/// Float side of an inequality `lhs >= rhs`, with a slack of `1e-9 q`.
fn at_least(lhs: f64, rhs: f64, q: u64) -> bool {
    lhs + 1e-9 * q as f64 >= rhs
}

/// Exact-count sieve inequalities for every `k | q - 1`, every admissible `t`
/// and `samples` random quadratics per `(q, k)`:
///
/// * `t' | t` implies `N(t, k) <= N(t', k)`;
/// * `N(q-1, k) >= sum_i N(p_i t, k) - (s - 1) N(t, k)`, and its `delta` form;
/// * `N(t, k) >= phi(t)/(k t) (q - 2 k W(t) sqrt q)` (for `q >= 5`);
/// * `|N(p t, k) - (1 - 1/p) N(t, k)| <= phi(p t)/(p t) 2 W(t) sqrt q`.
pub fn sieve_inequalities(q_max: u64, samples: usize, seed: u64) -> CheckResult {
    const NAME: &str = "sieve-inequalities";
    over_fields(NAME, &prime_powers(3, q_max), |q| {
        let f = field(q);
        let divisors = f.qm1_factors().divisors();
        let profiles = bounds::admissible_profiles(&f);
        let mut cases = 0;
        for k in divisors_at_least_2(&f) {
            let polys = sample_quadratics(&f, samples, &mut rng_for(seed, q, k));
            for poly in &polys {
                let n_of = |t: u64| {
                    count_n(&CountQuery::new(&f, t, k, *poly).expect("t and k divide q - 1"))
                };
                let counts: Vec<(u64, u64)> = divisors.iter().map(|&t| (t, n_of(t))).collect();
                let n = |t: u64| {
                    counts
                        .iter()
                        .find(|(d, _)| *d == t)
                        .map(|&(_, c)| c)
                        .expect("divisor of q - 1")
                };
                let fail = |t: u64, detail: String| Violation {
                    invariant: NAME,
                    detail: format!("q = {q}, k = {k}, t = {t}: {detail}"),
                    repro: count_repro(&f, t, k, poly),
                };

                for &(t, nt) in &counts {
                    for &(t2, nt2) in &counts {
                        if t2 % t == 0 && nt2 > nt {
                            return Err(fail(t2, format!("N({t2}) = {nt2} > N({t}) = {nt}")));
                        }
                    }
                    if q >= 5 {
                        let lower = bounds::sieve_term_lower_bound(&f, t, k).expect("valid");
                        if !at_least(nt as f64, lower, q) {
                            return Err(fail(t, format!("N = {nt} below lower bound {lower}")));
                        }
                    }
                    cases += 1;
                }

                let full = n(q - 1) as i64;
                for prof in &profiles {
                    let t = prof.t;
                    let nt = n(t);
                    let sieved: i64 = prof.sieve_primes.iter().map(|&p| n(p * t) as i64).sum();
                    let rhs = sieved - (prof.s as i64 - 1) * nt as i64;
                    if full < rhs {
                        return Err(fail(t, format!("N(q-1) = {full} < sieve sum {rhs}")));
                    }
                    let delta_form: f64 = prof
                        .sieve_primes
                        .iter()
                        .map(|&p| n(p * t) as f64 - (1.0 - 1.0 / p as f64) * nt as f64)
                        .sum::<f64>()
                        + prof.delta * nt as f64;
                    if !at_least(full as f64, delta_form, q) {
                        return Err(fail(t, format!("N(q-1) = {full} < delta form {delta_form}")));
                    }
                    if q >= 5 {
                        for &p in &prof.sieve_primes {
                            let diff = n(p * t) as f64 - (1.0 - 1.0 / p as f64) * nt as f64;
                            let radius = bounds::sieve_difference_radius(&f, p, t).expect("valid");
                            if !at_least(radius, diff.abs(), q) {
                                return Err(fail(
                                    t,
                                    format!("|N({}) - (1 - 1/{p}) N({t})| = {} > {radius}", p * t, diff.abs()),
                                ));
                            }
                        }
                    }
                    cases += 1;
                }
            }
        }
        Ok(cases)
    })
}

/// The character form of `N(p t, k) - (1 - 1/p) N(t, k)` (sum over characters
/// of order `p d`, `d | t`) matches the exact counts.
pub fn sieve_difference_identity(q_max: u64, samples: usize, seed: u64) -> CheckResult {
    const NAME: &str = "sieve-difference-identity";
    over_fields(NAME, &prime_powers(3, q_max), |q| {
        let f = field(q);
        let group = CharacterGroup::new(&f).expect("under table cap");
        let mut cases = 0;
        for k in divisors_at_least_2(&f) {
            let polys = sample_quadratics(&f, samples, &mut rng_for(seed, q, k + 7));
            for poly in &polys {
                for prof in bounds::admissible_profiles(&f) {
                    let t = prof.t;
                    let query = CountQuery::new(&f, t, k, *poly).expect("valid");
                    let nt = count_n(&query) as f64;
                    for &p in &prof.sieve_primes {
                        let npt = count_n(&query.with_t(p * t).expect("pt | q - 1")) as f64;
                        let exact = npt - (1.0 - 1.0 / p as f64) * nt;
                        let fail = |detail: String| Violation {
                            invariant: NAME,
                            detail: format!("q = {q}, k = {k}, t = {t}, p = {p}: {detail}"),
                            repro: count_repro(&f, p * t, k, poly),
                        };
                        match group.sieve_difference(&query, p) {
                            Ok(v) if (v - exact).abs() <= 1e-6 * q as f64 => {}
                            Ok(v) => return Err(fail(format!("characters give {v}, counts give {exact}"))),
                            Err(e) => return Err(fail(e.to_string())),
                        }
                        cases += 1;
                    }
                }
            }
        }
        Ok(cases)
    })
}

/// Random Weil-bound instances: `|sum_x chi(a f(x))| <= (r - 1) sqrt(q)` for
/// nontrivial `chi`, monic quadratic `f` with nonzero discriminant and
/// `a != 0`.
pub fn weil_fuzz(samples: usize, q_max: u64, seed: u64) -> CheckResult {
    const NAME: &str = "weil-fuzz";
    let qs = prime_powers(3, q_max);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases_by_q: Vec<(u64, u64, [u64; 3], u64)> = Vec::with_capacity(samples);
    for _ in 0..samples {
        let q = qs[rng.gen_range(0..qs.len())];
        let exponent = rng.gen_range(1..q - 1);
        // Rejection happens in the worker; draw enough randomness up front.
        let (b, c, a) = (rng.gen_range(0..q), rng.gen_range(0..q), rng.gen_range(1..q));
        cases_by_q.push((q, exponent, [b, c, a], rng.gen()));
    }
    let results: Vec<Result<(), Violation>> = cases_by_q
        .par_iter()
        .map(|&(q, exponent, [b, c, a], resample_seed)| {
            let f = field(q);
            let group = CharacterGroup::new(&f).expect("under table cap");
            let chi = group.character(exponent).expect("in range");
            let mut b = f.element(b).unwrap();
            let mut c = f.element(c).unwrap();
            let mut resample = ChaCha8Rng::seed_from_u64(resample_seed);
            while QuadraticPoly::new(&f, f.one(), b, c).is_err() {
                b = f.element(resample.gen_range(0..q)).unwrap();
                c = f.element(resample.gen_range(0..q)).unwrap();
            }
            let a = f.element(a).unwrap();
            let check = group
                .weil_check(chi, &[c, b, f.one()], a)
                .map_err(|e| Violation {
                    invariant: NAME,
                    detail: format!("q = {q}: {e}"),
                    repro: selftest_repro(NAME),
                })?;
            if !check.ok {
                return Err(Violation {
                    invariant: NAME,
                    detail: format!(
                        "q = {q}, exponent {exponent}, f = x^2 + {}x + {}, a = {}: {} > {}",
                        f.format_element(b),
                        f.format_element(c),
                        f.format_element(a),
                        check.lhs,
                        check.rhs
                    ),
                    repro: selftest_repro(NAME),
                });
            }
            Ok(())
        })
        .collect();
    for r in results {
        r?;
    }
    Ok(CheckSummary {
        name: NAME,
        cases: samples as u64,
    })
}

/// Whenever `q > 2 k W(q - 1) sqrt(q)`, sampled quadratics have a witness and
/// the explicit lower bound never exceeds the exact count. The tabulated
/// count is tied back to [`count_n`] on the first sample of each `(q, k)`.
pub fn certificate_soundness(q_max: u64, samples: usize, seed: u64) -> CheckResult {
    const NAME: &str = "certificate-soundness";
    over_fields(NAME, &prime_powers(5, q_max), |q| {
        let f = field(q);
        let mut dlog = None;
        let mut cases = 0;
        for k in divisors_at_least_2(&f) {
            if !bounds::theorem_a_certificate(&f, k).expect("k | q - 1") {
                continue;
            }
            let dlog = dlog.get_or_insert_with(|| dlog_table(&f).expect("under cap"));
            let tables = CountTables::new(&f, dlog, q - 1, k).expect("valid");
            let lower = bounds::theorem_a_lower_bound(&f, k).expect("valid");
            let polys = sample_quadratics(&f, samples, &mut rng_for(seed, q, k + 3));
            for (i, poly) in polys.iter().enumerate() {
                let n = tables.count(poly);
                let fail = |detail: String| Violation {
                    invariant: NAME,
                    detail: format!("q = {q}, k = {k}: {detail}"),
                    repro: count_repro(&f, q - 1, k, poly),
                };
                if i == 0 {
                    let direct = count_n(&CountQuery::new(&f, q - 1, k, *poly).expect("valid"));
                    if direct != n {
                        return Err(fail(format!("tabulated count {n} != direct count {direct}")));
                    }
                }
                if n == 0 {
                    return Err(fail("certificate holds but no witness exists".into()));
                }
                if !at_least(n as f64, lower, q) {
                    return Err(fail(format!("count {n} below lower bound {lower}")));
                }
                cases += 1;
            }
        }
        Ok(cases)
    })
}

/// For every admissible sieve profile with `delta > 0`: the lower-bound chain
/// `k t/(delta phi(t)) N(q-1, k) >= sqrt q (sqrt q - 2 k W(t) (2 + (s-1)/delta))`
/// holds, and `q` above the sieve threshold implies a witness.
pub fn theorem_b_soundness(q_max: u64, samples: usize, seed: u64) -> CheckResult {
    const NAME: &str = "theorem-b-soundness";
    over_fields(NAME, &prime_powers(5, q_max), |q| {
        let f = field(q);
        let dlog = dlog_table(&f).expect("under cap");
        let profiles: Vec<_> = bounds::admissible_profiles(&f)
            .into_iter()
            .filter(|p| p.delta_positive())
            .collect();
        let mut cases = 0;
        for k in divisors_at_least_2(&f) {
            let tables = CountTables::new(&f, &dlog, q - 1, k).expect("valid");
            let polys = sample_quadratics(&f, samples, &mut rng_for(seed, q, k + 5));
            let counts: Vec<u64> = polys.iter().map(|p| tables.count(p)).collect();
            for prof in &profiles {
                let phi_t = arith::euler_phi(prof.t).expect("t >= 1") as f64;
                let scale = (k * prof.t) as f64 / (prof.delta * phi_t);
                let chain = prof.scaled_lower_bound(q, k).expect("delta > 0");
                let above = bounds::exceeds(q, prof.theorem_b_bound(k).expect("delta > 0"));
                for (poly, &n) in polys.iter().zip(&counts) {
                    let fail = |detail: String| Violation {
                        invariant: NAME,
                        detail: format!("q = {q}, k = {k}, t = {}: {detail}", prof.t),
                        repro: count_repro(&f, q - 1, k, poly),
                    };
                    if !at_least(scale * n as f64, chain, q) {
                        return Err(fail(format!("scaled count {} below chain bound {chain}", scale * n as f64)));
                    }
                    if above && n == 0 {
                        return Err(fail("q exceeds the sieve threshold but no witness exists".into()));
                    }
                    cases += 1;
                }
            }
        }
        Ok(cases)
    })
}

/// `omega(n) <= 1.38402 log n / log log n` for `3 <= n <= n_max`.
pub fn robin(n_max: u64) -> CheckResult {
    const NAME: &str = "robin";
    let chunks: Vec<u64> = (3..=n_max).step_by(65_536).collect();
    let results: Vec<Result<u64, Violation>> = chunks
        .par_iter()
        .map(|&lo| {
            let hi = (lo + 65_535).min(n_max);
            for n in lo..=hi {
                if !arith::robin_holds(n).expect("n >= 3") {
                    return Err(Violation {
                        invariant: NAME,
                        detail: format!("n = {n}"),
                        repro: selftest_repro(NAME),
                    });
                }
            }
            Ok(hi - lo + 1)
        })
        .collect();
    let mut cases = 0;
    for r in results {
        cases += r?;
    }
    Ok(CheckSummary { name: NAME, cases })
}

/// `W(q - 1) <= q^(0.96 / log log q)` for prime powers `17 <= q <= q_max`.
pub fn w_estimate(q_max: u64) -> CheckResult {
    const NAME: &str = "w-estimate";
    over_fields(NAME, &prime_powers(17, q_max), |q| {
        if bounds::w_estimate_holds(q).expect("q - 1 >= 16") {
            Ok(1)
        } else {
            Err(Violation {
                invariant: NAME,
                detail: format!("q = {q}, W(q-1) = {}", arith::big_w(q - 1).unwrap()),
                repro: selftest_repro(NAME),
            })
        }
    })
}

/// Multiplying `f` by `lambda^k` leaves the witness set unchanged.
pub fn scaling_invariance(q_max: u64, samples: usize, seed: u64) -> CheckResult {
    const NAME: &str = "scaling-invariance";
    over_fields(NAME, &prime_powers(3, q_max), |q| {
        let f = field(q);
        let mut rng = rng_for(seed, q, 11);
        let mut cases = 0;
        for k in divisors_at_least_2(&f) {
            let search = WitnessSearch::new(&f, k).expect("k | q - 1");
            for poly in sample_quadratics(&f, samples, &mut rng) {
                let base: Vec<FieldElement> = search.witnesses(&poly).collect();
                for lambda in f.units() {
                    let scaled = poly.scale(&f, f.pow(lambda, k)).expect("nonzero scale");
                    if !search.witnesses(&scaled).eq(base.iter().copied()) {
                        return Err(Violation {
                            invariant: NAME,
                            detail: format!("q = {q}, k = {k}, lambda = {}", f.format_element(lambda)),
                            repro: count_repro(&f, q - 1, k, &poly),
                        });
                    }
                    cases += 1;
                }
            }
        }
        Ok(cases)
    })
}

/// Scanning every leading coefficient finds exactly `(q - 1)/k` times the
/// witnessless polynomials found with one leading coefficient per coset.
pub fn normalization_equivalence(q_max: u64) -> CheckResult {
    const NAME: &str = "normalization-equivalence";
    over_fields(NAME, &prime_powers(3, q_max), |q| {
        let f = field(q);
        let mut cases = 0;
        for k in divisors_at_least_2(&f) {
            let reduced = scan_field(&f, k, 0, Leading::CosetRepresentatives).expect("k | q - 1");
            let full = scan_field(&f, k, 0, Leading::AllUnits).expect("k | q - 1");
            if full.exceptional != reduced.exceptional
                || full.witnessless_count != reduced.witnessless_count * ((q - 1) / k)
            {
                return Err(Violation {
                    invariant: NAME,
                    detail: format!(
                        "q = {q}, k = {k}: all-units {} vs cosets {}",
                        full.witnessless_count, reduced.witnessless_count
                    ),
                    repro: format!("primpow scan -k {k} --from {q} --to {q}"),
                });
            }
            cases += 1;
        }
        Ok(cases)
    })
}

/// The `k = 2` scan over `[3, q_hi]` finds exactly the known exceptional set.
pub fn exceptional_set_k2(q_hi: u64) -> CheckResult {
    const NAME: &str = "exceptional-set-k2";
    let report = scan_exceptional(&ScanConfig::new(2, 3, q_hi)).map_err(|e| Violation {
        invariant: NAME,
        detail: e.to_string(),
        repro: format!("primpow scan -k 2 --from 3 --to {q_hi}"),
    })?;
    let expected: Vec<u64> = EXCEPTIONAL_K2.iter().copied().filter(|&q| q <= q_hi).collect();
    if report.exceptional() != expected {
        return Err(Violation {
            invariant: NAME,
            detail: format!("found {:?}, expected {:?}", report.exceptional(), expected),
            repro: format!("primpow scan -k 2 --from 3 --to {q_hi}"),
        });
    }
    Ok(CheckSummary {
        name: NAME,
        cases: report.fields_scanned() as u64,
    })
}

/// Grid sizes for a self-test run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Quick,
    Full,
}

/// Names accepted by [`run_one`], in execution order.
pub const CHECK_NAMES: [&str; 14] = [
    "field-counts",
    "orthogonality",
    "indicator-identities",
    "oracle-equivalence",
    "sieve-inequalities",
    "sieve-difference-identity",
    "weil-fuzz",
    "certificate-soundness",
    "theorem-b-soundness",
    "robin",
    "w-estimate",
    "scaling-invariance",
    "normalization-equivalence",
    "exceptional-set-k2",
];

/// Runs one named check at the given level; `None` for an unknown name.
pub fn run_one(name: &str, level: Level, seed: u64, fault: Option<Fault>) -> Option<CheckResult> {
    let full = level == Level::Full;
    let pick = |quick: u64, full_size: u64| if full { full_size } else { quick };
    Some(match name {
        "field-counts" => field_counts(pick(60, 1000), pick(60, 500)),
        "orthogonality" => orthogonality(pick(60, 200), fault),
        "indicator-identities" => indicator_identities(pick(60, 100)),
        "oracle-equivalence" => oracle_equivalence(pick(60, 199), 25, seed),
        "sieve-inequalities" => sieve_inequalities(pick(60, 200), 10, seed),
        "sieve-difference-identity" => sieve_difference_identity(pick(40, 100), 2, seed),
        "weil-fuzz" => weil_fuzz(pick(200, 1000) as usize, pick(60, 499), seed),
        "certificate-soundness" => certificate_soundness(pick(1 << 10, 1 << 14), 25, seed),
        "theorem-b-soundness" => theorem_b_soundness(pick(1 << 9, 1 << 12), 10, seed),
        "robin" => robin(pick(100_000, 1_000_000)),
        "w-estimate" => w_estimate(pick(100_000, 1_000_000)),
        "scaling-invariance" => scaling_invariance(pick(40, 100), 3, seed),
        "normalization-equivalence" => normalization_equivalence(pick(30, 50)),
        "exceptional-set-k2" => exceptional_set_k2(pick(60, 529)),
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_grids_pass() {
        for name in CHECK_NAMES {
            let summary = run_one(name, Level::Quick, DEFAULT_SEED, None)
                .expect("known name")
                .unwrap_or_else(|v| panic!("{v}"));
            assert_eq!(summary.name, name);
            assert!(summary.cases > 0, "{name} examined nothing");
        }
    }

    #[test]
    fn injected_fault_is_reported() {
        let v = orthogonality(13, Some(Fault::FlipCharacterExponent)).unwrap_err();
        assert_eq!(v.invariant, "orthogonality");
        assert!(v.repro.contains("--only orthogonality"));
    }

    #[test]
    fn unknown_check_name() {
        assert!(run_one("nope", Level::Quick, 0, None).is_none());
    }

    #[test]
    fn samples_are_valid_and_reproducible() {
        let f = FieldSpec::new(3, 3).unwrap();
        let a = sample_quadratics(&f, 20, &mut rng_for(1, 27, 0));
        let b = sample_quadratics(&f, 20, &mut rng_for(1, 27, 0));
        assert_eq!(a, b);
        assert!(a.iter().all(|p| !p.a.is_zero() && !p.discriminant(&f).is_zero()));
    }

    #[test]
    fn repro_formats() {
        let f9 = FieldSpec::new(3, 2).unwrap();
        let poly = QuadraticPoly::from_ints(&f9, 1, 0, 1).unwrap();
        assert_eq!(poly_arg(&f9, &poly), "1,0;0,0;1,0");
        assert_eq!(
            count_repro(&f9, 8, 2, &poly),
            "primpow count -p 3 -n 2 -t 8 -k 2 -f '1,0;0,0;1,0' --method both"
        );
        let other = FieldSpec::with_modulus(3, &[2, 1, 1]).unwrap();
        assert!(count_repro(&other, 8, 2, &poly).contains("--modulus 2,1,1"));
        let f13 = FieldSpec::new(13, 1).unwrap();
        let poly = QuadraticPoly::from_ints(&f13, 1, 0, 1).unwrap();
        assert_eq!(poly_arg(&f13, &poly), "1,0,1");
    }
}
