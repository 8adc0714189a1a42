//! Integer arithmetic: factorization, Möbius, Euler phi, radicals, square-free
//! divisors, small primes and the Robin estimate for the number of distinct
//! prime factors.
//!
//! Factorization uses trial division by the primes below `10^6` and falls
//! back to Brent's variant of Pollard rho, with a Miller-Rabin test whose
//! witness set is deterministic for every 64-bit input.

use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

/// Largest accepted input to [`factorize`].
pub const MAX_FACTOR_INPUT: u64 = i64::MAX as u64;

const TRIAL_LIMIT: u64 = 1_000_000;
const MAX_FIRST_PRIMES: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("{0} is outside the supported range 1..=2^63-1")]
    OutOfRange(u64),
    #[error("first_primes needs 1 <= s <= 64, got {0}")]
    PrimeCount(usize),
    #[error("robin bound is only defined for n >= 3, got {0}")]
    RobinDomain(u64),
}

/// Prime factorization `n = prod p_i^e_i` with strictly increasing primes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Factorization {
    n: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// Distinct primes dividing `n`, ascending.
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// Number of distinct prime factors.
    pub fn omega(&self) -> usize {
        self.factors.len()
    }

    pub fn radical(&self) -> u64 {
        self.primes().product()
    }

    pub fn big_w(&self) -> u64 {
        1u64 << self.omega()
    }

    pub fn mobius(&self) -> i8 {
        if self.factors.iter().any(|&(_, e)| e > 1) {
            0
        } else if self.omega().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn euler_phi(&self) -> u64 {
        self.factors
            .iter()
            .map(|&(p, e)| (p - 1) * p.pow(e - 1))
            .product()
    }

    /// Multiplies the factors back together.
    pub fn reconstruct(&self) -> u64 {
        self.factors.iter().map(|&(p, e)| p.pow(e)).product()
    }

    /// All divisors of `n`, ascending.
    pub fn divisors(&self) -> Vec<u64> {
        let mut out = vec![1u64];
        for &(p, e) in &self.factors {
            let len = out.len();
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    out.push(out[i] * pk);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Square-free divisors of `n`, ascending. There are `2^omega` of them.
    pub fn squarefree_divisors(&self) -> Vec<u64> {
        let mut out = vec![1u64];
        for p in self.primes() {
            let len = out.len();
            for i in 0..len {
                out.push(out[i] * p);
            }
        }
        out.sort_unstable();
        out
    }
}

fn small_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| primes_up_to(TRIAL_LIMIT))
}

/// Sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    for i in 2..=limit {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= limit {
            composite[j] = true;
            j += i;
        }
    }
    out
}

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for all `n < 2^64`.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Brent's cycle-finding Pollard rho. `n` must be odd and composite.
fn pollard_rho(n: u64) -> u64 {
    const BATCH: u64 = 128;
    for c in 1u64.. {
        let step = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut y, mut r, mut q) = (2u64, 1u64, 1u64);
        let (mut x, mut ys) = (y, y);
        let mut g = 1;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = step(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = step(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += BATCH;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = step(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!("pollard rho exhausted all increments")
}

fn split_large(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_rho(n);
    split_large(d, out);
    split_large(n / d, out);
}

/// Factors `n` into primes.
pub fn factorize(n: u64) -> Result<Factorization, ArithError> {
    if n == 0 || n > MAX_FACTOR_INPUT {
        return Err(ArithError::OutOfRange(n));
    }
    let mut rest = n;
    let mut factors = Vec::new();
    for &p in small_primes() {
        if p * p > rest {
            break;
        }
        if rest.is_multiple_of(p) {
            let mut e = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                e += 1;
            }
            factors.push((p, e));
        }
    }
    if rest > 1 {
        // Everything below TRIAL_LIMIT^2 that survived trial division is prime.
        if rest < TRIAL_LIMIT * TRIAL_LIMIT {
            factors.push((rest, 1));
        } else {
            let mut large = Vec::new();
            split_large(rest, &mut large);
            large.sort_unstable();
            for p in large {
                match factors.last_mut() {
                    Some((last, e)) if *last == p => *e += 1,
                    _ => factors.push((p, 1)),
                }
            }
        }
    }
    Ok(Factorization { n, factors })
}

pub fn mobius(n: u64) -> Result<i8, ArithError> {
    Ok(factorize(n)?.mobius())
}

pub fn euler_phi(n: u64) -> Result<u64, ArithError> {
    Ok(factorize(n)?.euler_phi())
}

pub fn radical(n: u64) -> Result<u64, ArithError> {
    Ok(factorize(n)?.radical())
}

/// Number of square-free divisors, `2^omega(n)`.
pub fn big_w(n: u64) -> Result<u64, ArithError> {
    Ok(factorize(n)?.big_w())
}

pub fn squarefree_divisors(n: u64) -> Result<Vec<u64>, ArithError> {
    Ok(factorize(n)?.squarefree_divisors())
}

/// The first `s` primes, `1 <= s <= 64`.
pub fn first_primes(s: usize) -> Result<Vec<u64>, ArithError> {
    if s == 0 || s > MAX_FIRST_PRIMES {
        return Err(ArithError::PrimeCount(s));
    }
    Ok(small_primes()[..s].to_vec())
}

/// Checks `omega(n) <= 1.38402 log n / log log n`.
pub fn robin_holds(n: u64) -> Result<bool, ArithError> {
    if n < 3 {
        return Err(ArithError::RobinDomain(n));
    }
    let omega = factorize(n)?.omega() as f64;
    let ln = (n as f64).ln();
    Ok(omega <= 1.38402 * ln / ln.ln())
}

/// Returns `(p, e)` with `q = p^e` when `q` is a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let f = factorize(q).ok()?;
    match f.factors() {
        [(p, e)] => Some((*p, *e)),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_divisors(n: u64) -> Vec<u64> {
        (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
    }

    fn naive_squarefree(d: u64) -> bool {
        (2..=d).take_while(|p| p * p <= d).all(|p| !d.is_multiple_of(p * p))
    }

    #[test]
    fn factorize_examples() {
        assert!(factorize(1).unwrap().factors().is_empty());
        assert_eq!(factorize(12).unwrap().factors(), &[(2, 2), (3, 1)]);
        let primorial10 = factorize(6_469_693_230).unwrap();
        let primes: Vec<u64> = primorial10.primes().collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(primorial10.factors().iter().all(|&(_, e)| e == 1));
    }

    #[test]
    fn factorize_rejects_out_of_range() {
        assert_eq!(factorize(0), Err(ArithError::OutOfRange(0)));
        assert!(factorize(MAX_FACTOR_INPUT + 1).is_err());
        assert!(factorize(MAX_FACTOR_INPUT).is_ok());
    }

    #[test]
    fn factorize_large_semiprimes() {
        // Both factors above the trial-division limit.
        let p = 1_000_003u64;
        let q = 2_147_483_647u64;
        let f = factorize(p * q).unwrap();
        assert_eq!(f.factors(), &[(p, 1), (q, 1)]);
        let f = factorize(p * p * 3).unwrap();
        assert_eq!(f.factors(), &[(3, 1), (p, 2)]);
        let big = 9_223_372_036_854_775_783u64; // largest prime below 2^63
        assert!(is_prime(big));
        assert_eq!(factorize(big).unwrap().factors(), &[(big, 1)]);
    }

    #[test]
    fn miller_rabin_matches_sieve() {
        let sieve = primes_up_to(100_000);
        let from_mr: Vec<u64> = (0..=100_000).filter(|&n| is_prime(n)).collect();
        assert_eq!(sieve, from_mr);
        // Strong pseudoprimes to several small bases.
        for n in [3_215_031_751u64, 2_152_302_898_747, 3_474_749_660_383, 341_550_071_728_321] {
            assert!(!is_prime(n), "{n}");
        }
    }

    #[test]
    fn function_examples() {
        assert_eq!(mobius(1), Ok(1));
        assert_eq!(mobius(4), Ok(0));
        assert_eq!(mobius(6), Ok(1));
        assert_eq!(mobius(30), Ok(-1));
        assert_eq!(euler_phi(1), Ok(1));
        assert_eq!(euler_phi(12), Ok(4));
        assert_eq!(euler_phi(8), Ok(4));
        assert_eq!(radical(1), Ok(1));
        assert_eq!(radical(12), Ok(6));
        assert_eq!(radical(8), Ok(2));
        assert_eq!(squarefree_divisors(1), Ok(vec![1]));
        assert_eq!(squarefree_divisors(9), Ok(vec![1, 3]));
        assert_eq!(big_w(1), Ok(1));
    }

    #[test]
    fn squarefree_examples_against_enumeration() {
        for (n, w) in [(12u64, 4u64), (30, 8)] {
            let brute: Vec<u64> = naive_divisors(n)
                .into_iter()
                .filter(|&d| naive_squarefree(d))
                .collect();
            assert_eq!(brute.len() as u64, w);
            assert_eq!(big_w(n).unwrap(), w);
            assert_eq!(squarefree_divisors(n).unwrap(), brute);
        }
    }

    #[test]
    fn first_primes_examples() {
        assert_eq!(first_primes(1), Ok(vec![2]));
        assert_eq!(first_primes(4), Ok(vec![2, 3, 5, 7]));
        assert_eq!(first_primes(10).unwrap().iter().product::<u64>(), 6_469_693_230);
        assert_eq!(first_primes(64).unwrap().last(), Some(&311));
        assert_eq!(first_primes(0), Err(ArithError::PrimeCount(0)));
        assert_eq!(first_primes(65), Err(ArithError::PrimeCount(65)));
    }

    #[test]
    fn robin_examples() {
        assert_eq!(robin_holds(3), Ok(true));
        assert_eq!(robin_holds(6), Ok(true));
        assert_eq!(robin_holds(30_030), Ok(true));
        assert_eq!(robin_holds(2), Err(ArithError::RobinDomain(2)));
    }

    #[test]
    fn divisor_identities_up_to_a_million() {
        // Dirichlet sums accumulated by walking multiples: sum of mu over
        // divisors is [n == 1] and sum of phi over divisors is n.
        const N: usize = 1_000_000;
        let mut mu_sum = vec![0i64; N + 1];
        let mut phi_sum = vec![0u64; N + 1];
        for d in 1..=N {
            let f = factorize(d as u64).unwrap();
            assert_eq!(f.reconstruct(), d as u64);
            assert_eq!(f.squarefree_divisors().len() as u64, f.big_w());
            assert_eq!(f.big_w(), 1 << f.omega());
            let (mu, phi) = (f.mobius() as i64, f.euler_phi());
            for m in (d..=N).step_by(d) {
                mu_sum[m] += mu;
                phi_sum[m] += phi;
            }
        }
        for n in 1..=N {
            assert_eq!(mu_sum[n], (n == 1) as i64, "mobius sum at {n}");
            assert_eq!(phi_sum[n], n as u64, "phi sum at {n}");
        }
    }

    #[test]
    fn prime_power_detection() {
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(13), Some((13, 1)));
        assert_eq!(prime_power(1024), Some((2, 10)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
    }

    proptest::proptest! {
        #[test]
        fn factorization_reconstructs(n in 1u64..=MAX_FACTOR_INPUT) {
            let f = factorize(n).unwrap();
            proptest::prop_assert_eq!(f.reconstruct(), n);
            let primes: Vec<u64> = f.primes().collect();
            proptest::prop_assert!(primes.windows(2).all(|w| w[0] < w[1]));
            proptest::prop_assert!(primes.iter().all(|&p| is_prime(p)));
        }
    }
}
