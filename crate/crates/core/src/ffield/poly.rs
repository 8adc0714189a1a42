//! Dense polynomials over a prime field, used only to pick and validate the
//! defining modulus of an extension field.
//!
//! Coefficients are stored low-degree first with no trailing zeros; the zero
//! polynomial is the empty vector.

pub(crate) type Poly = Vec<u64>;

fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // p is prime and a != 0 mod p.
    let mut acc = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

pub(crate) fn sub(a: &[u64], b: &[u64], p: u64) -> Poly {
    let len = a.len().max(b.len());
    let out = (0..len)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

fn mul(a: &[u64], b: &[u64], p: u64) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(out)
}

/// Remainder of `a` modulo a nonzero `m`.
pub(crate) fn rem(a: &[u64], m: &[u64], p: u64) -> Poly {
    let mut r = trim(a.to_vec());
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p);
    while r.len() > dm {
        let top = r.len() - 1;
        let factor = r[top] * lead_inv % p;
        let shift = top - dm;
        for (i, &c) in m.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - factor * c % p) % p;
        }
        r = trim(r);
    }
    r
}

fn mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Poly {
    rem(&mul(a, b, p), m, p)
}

fn pow_mod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Poly {
    let mut acc = rem(&[1], m, p);
    let mut b = rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(&acc, &b, m, p);
        }
        b = mul_mod(&b, &b, m, p);
        e >>= 1;
    }
    acc
}

pub(crate) fn gcd(a: &[u64], b: &[u64], p: u64) -> Poly {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// `x^(p^k) mod m`.
fn frobenius_power(m: &[u64], k: u32, p: u64) -> Poly {
    let mut h = rem(&[0, 1], m, p);
    for _ in 0..k {
        h = pow_mod(&h, p, m, p);
    }
    h
}

/// Rabin's test: a monic `m` of degree `n` is irreducible over `F_p` iff
/// `x^(p^n) = x mod m` and `gcd(x^(p^(n/r)) - x, m) = 1` for each prime `r | n`.
pub(crate) fn is_irreducible(m: &[u64], p: u64) -> bool {
    let n = match m.len() {
        0 | 1 => return false,
        len => (len - 1) as u32,
    };
    if n == 1 {
        return true;
    }
    let x = [0u64, 1];
    if !sub(&frobenius_power(m, n, p), &x, p).is_empty() {
        return false;
    }
    let mut rest = n;
    let mut r = 2;
    while rest > 1 {
        if rest % r == 0 {
            while rest % r == 0 {
                rest /= r;
            }
            let h = sub(&frobenius_power(m, n / r, p), &x, p);
            if gcd(m, &h, p).len() != 1 {
                return false;
            }
        }
        r += 1;
    }
    true
}
