//! Polynomials over 𝔽_p for the irreducibility probe.

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{ToPrimitive, Zero};

use crate::poly::Poly;

type P = Vec<u64>;

fn trim(mut a: P) -> P {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn inv(a: u64, p: u64) -> u64 {
    let mut r = 1;
    let (mut b, mut e) = (a % p, p - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, p);
        }
        b = mulmod(b, b, p);
        e >>= 1;
    }
    r
}

fn rem(a: &P, m: &P, p: u64) -> P {
    let mut r = a.clone();
    let dm = m.len() - 1;
    let li = inv(m[dm], p);
    while r.len() > dm {
        let c = mulmod(*r.last().unwrap(), li, p);
        let shift = r.len() - 1 - dm;
        for (j, &b) in m.iter().enumerate() {
            r[shift + j] = (r[shift + j] + p - mulmod(c, b, p)) % p;
        }
        r = trim(r);
    }
    r
}

fn mul(a: &P, b: &P, p: u64) -> P {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut c = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            c[i + j] = (c[i + j] + mulmod(x, y, p)) % p;
        }
    }
    trim(c)
}

fn sub(a: &P, b: &P, p: u64) -> P {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p)
            .collect(),
    )
}

fn gcd(a: &P, b: &P, p: u64) -> P {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn powmod(base: &P, mut e: u64, m: &P, p: u64) -> P {
    let mut r = vec![1u64];
    let mut b = rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            r = rem(&mul(&r, &b, p), m, p);
        }
        b = rem(&mul(&b, &b, p), m, p);
        e >>= 1;
    }
    r
}

fn derivative(a: &P, p: u64) -> P {
    trim(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mulmod(c, i as u64 % p, p))
            .collect(),
    )
}

fn divide(a: &P, m: &P, p: u64) -> P {
    // exact division
    let mut r = a.clone();
    let dm = m.len() - 1;
    let li = inv(m[dm], p);
    let mut q = vec![0u64; a.len() - dm];
    while r.len() > dm {
        let c = mulmod(*r.last().unwrap(), li, p);
        let shift = r.len() - 1 - dm;
        q[shift] = c;
        for (j, &b) in m.iter().enumerate() {
            r[shift + j] = (r[shift + j] + p - mulmod(c, b, p)) % p;
        }
        r = trim(r);
    }
    trim(q)
}

/// Reduction of a rational polynomial mod p, or None if p divides a
/// denominator or the leading coefficient.
fn reduce(f: &Poly, p: u64) -> Option<P> {
    let bp = BigInt::from(p);
    let mut out = Vec::new();
    for a in f.coeffs() {
        if (a.denom() % &bp).is_zero() {
            return None;
        }
        let n = a.numer().mod_floor(&bp).to_u64()?;
        let d = a.denom().mod_floor(&bp).to_u64()?;
        out.push(mulmod(n, inv(d, p), p));
    }
    if out.last() == Some(&0) {
        return None;
    }
    Some(out)
}

/// Degrees of the irreducible factors of f mod p (distinct-degree
/// factorization), or None when f is not squarefree mod p or p is bad.
pub fn factor_degrees_mod(f: &Poly, p: u64) -> Option<Vec<usize>> {
    let mut g = reduce(f, p)?;
    let d = g.len() - 1;
    if d == 0 {
        return Some(Vec::new());
    }
    if gcd(&g, &derivative(&g, p), p).len() != 1 {
        return None;
    }
    let x = vec![0u64, 1];
    let mut h = x.clone();
    let mut degrees = Vec::new();
    let mut i = 0;
    while g.len() > 1 {
        i += 1;
        if 2 * i > g.len() - 1 {
            degrees.push(g.len() - 1);
            break;
        }
        h = powmod(&h, p, &g, p);
        let c = gcd(&g, &sub(&h, &x, p), p);
        let k = c.len() - 1;
        if k > 0 {
            for _ in 0..k / i {
                degrees.push(i);
            }
            g = divide(&g, &c, p);
            h = rem(&h, &g, p);
        }
    }
    degrees.sort_unstable();
    debug_assert_eq!(degrees.iter().sum::<usize>(), d);
    Some(degrees)
}

fn subset_sums(degrees: &[usize], n: usize) -> Vec<bool> {
    let mut reach = vec![false; n + 1];
    reach[0] = true;
    for &d in degrees {
        for s in (d..=n).rev() {
            if reach[s - d] {
                reach[s] = true;
            }
        }
    }
    reach
}

/// Certifies irreducibility over ℚ when the degree patterns of f mod a
/// handful of primes leave no room for a proper factor. `false` means
/// "not certified", not "reducible".
pub fn certify_irreducible(f: &Poly, primes: &[u64]) -> bool {
    let Some(n) = f.degree() else { return false };
    if n <= 1 {
        return n == 1;
    }
    let mut possible = vec![true; n + 1];
    for &p in primes {
        if let Some(ds) = factor_degrees_mod(f, p) {
            let r = subset_sums(&ds, n);
            for (k, slot) in possible.iter_mut().enumerate() {
                *slot &= r[k];
            }
            if (1..n).all(|k| !possible[k]) {
                return true;
            }
        }
    }
    false
}
