//! Brute-force p-adic isotropy oracle, independent of Hilbert symbols.
//!
//! A diagonal form with coefficients of valuation 0 or 1 is split as
//! q = q_unit + p·q_p. A primitive zero either has a unit coordinate on a
//! unit coefficient, or after substituting x_unit = p·y it gives a zero of
//! q_p + p·q_unit with that property. Such zeros are found by exhaustive
//! search modulo p (odd p) or modulo 8 (p = 2) and are then Hensel-lifted
//! explicitly by Newton iteration. Witt indices come from repeatedly
//! splitting off an exact rational plane that is hyperbolic over ℚ_p.

use bc_tori::rational::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

fn val(n: &BigInt, p: u64) -> u32 {
    let bp = BigInt::from(p);
    let mut m = n.clone();
    let mut v = 0;
    while (&m % &bp).is_zero() {
        m /= &bp;
        v += 1;
    }
    v
}

fn val_rat(x: &Rational, p: u64) -> i64 {
    val(x.numer(), p) as i64 - val(x.denom(), p) as i64
}

fn modp(n: &BigInt, m: &BigInt) -> BigInt {
    n.mod_floor(m)
}

/// Coefficient c_i = a_i·t_i² with c_i an integer of p-valuation 0 or 1.
struct Normalized {
    coeffs: Vec<BigInt>,
    scale: Vec<Rational>,
}

fn normalize(entries: &[Rational], p: u64) -> Normalized {
    let bp = BigInt::from(p);
    let mut coeffs = Vec::new();
    let mut scale = Vec::new();
    for a in entries {
        // a·den² = num·den, so x = den·ξ
        let mut c = a.numer() * a.denom();
        let mut t = Rational::from_integer(a.denom().clone());
        let p2 = &bp * &bp;
        while (&c % &p2).is_zero() {
            c /= &p2;
            t *= Rational::new(BigInt::one(), bp.clone());
        }
        coeffs.push(c);
        scale.push(t);
    }
    Normalized { coeffs, scale }
}

/// Exhaustive search for x mod `modulus` with Σ c_i x_i² ≡ 0 and some
/// x_i on a `unit` coefficient not divisible by p.
fn residue_search(c: &[BigInt], unit: &[bool], p: u64, modulus: u64) -> Option<Vec<u64>> {
    let n = c.len();
    let m = BigInt::from(modulus);
    let cm: Vec<u64> = c.iter().map(|x| modp(x, &m).to_u64().unwrap()).collect();
    let mut x = vec![0u64; n];
    loop {
        let s: u128 = (0..n)
            .map(|i| cm[i] as u128 * (x[i] as u128 * x[i] as u128 % modulus as u128))
            .sum();
        if s.is_multiple_of(modulus as u128) && (0..n).any(|i| unit[i] && !x[i].is_multiple_of(p)) {
            return Some(x);
        }
        let mut k = 0;
        loop {
            if k == n {
                return None;
            }
            x[k] += 1;
            if x[k] < modulus {
                break;
            }
            x[k] = 0;
            k += 1;
        }
    }
}

fn inv_mod(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    assert!(e.gcd.is_one(), "not invertible");
    modp(&e.x, m)
}

/// Newton-lifts a certified residue zero along coordinate i until
/// v_p(q(x)) ≥ prec.
fn hensel_lift(c: &[BigInt], x: &mut [BigInt], i: usize, p: u64, prec: u32) {
    let bp = BigInt::from(p);
    let m = bp.pow(prec + 4);
    for _ in 0..200 {
        let q: BigInt = c.iter().zip(x.iter()).map(|(a, b)| a * b * b).sum();
        if q.is_zero() || val(&q, p) >= prec {
            return;
        }
        let deriv = BigInt::from(2) * &c[i] * &x[i];
        let dv = val(&deriv, p);
        assert!(val(&q, p) > 2 * dv, "Hensel condition fails");
        let pd = bp.pow(dv);
        let step = (&q / &pd) * inv_mod(&(&deriv / &pd), &m);
        x[i] = modp(&(&x[i] - step), &m);
    }
    panic!("Hensel lifting did not converge");
}

/// A rational vector x with v_p(q(x)) ≥ prec, or None if q is anisotropic
/// over ℚ_p.
pub fn isotropic_vector(entries: &[Rational], p: u64, prec: u32) -> Option<Vec<Rational>> {
    let norm = normalize(entries, p);
    let n = entries.len();
    let is_unit: Vec<bool> = norm.coeffs.iter().map(|c| val(c, p) == 0).collect();
    let modulus = if p == 2 { 8 } else { p };
    let bp = BigInt::from(p);
    for swap in [false, true] {
        // swap = false: q itself; swap = true: q_p + p·q_unit
        let c: Vec<BigInt> = (0..n)
            .map(|i| match (swap, is_unit[i]) {
                (false, _) => norm.coeffs[i].clone(),
                (true, true) => &norm.coeffs[i] * &bp,
                (true, false) => &norm.coeffs[i] / &bp,
            })
            .collect();
        let unit: Vec<bool> = c.iter().map(|x| val(x, p) == 0).collect();
        if let Some(r) = residue_search(&c, &unit, p, modulus) {
            let mut x: Vec<BigInt> = r.iter().map(|&v| BigInt::from(v)).collect();
            let i = (0..n).find(|&i| unit[i] && r[i] % p != 0).unwrap();
            hensel_lift(&c, &mut x, i, p, prec + 2);
            // back to the coordinates of q
            if swap {
                for j in 0..n {
                    if is_unit[j] {
                        x[j] *= &bp;
                    }
                }
            }
            return Some(
                (0..n)
                    .map(|j| Rational::from_integer(x[j].clone()) * &norm.scale[j])
                    .collect(),
            );
        }
    }
    None
}

pub fn is_isotropic(entries: &[Rational], p: u64) -> bool {
    entries.len() >= 2 && isotropic_vector(entries, p, 8).is_some()
}

/// (a, b)_p via isotropy of ⟨a, b, −1⟩.
pub fn hilbert_oracle(a: &Rational, b: &Rational, p: u64) -> i8 {
    let minus_one = Rational::from_integer(BigInt::from(-1));
    if is_isotropic(&[a.clone(), b.clone(), minus_one], p) {
        1
    } else {
        -1
    }
}

/// Square test in ℚ_p by residue search.
fn is_padic_square(x: &Rational, p: u64) -> bool {
    let v = val_rat(x, p);
    if v % 2 != 0 {
        return false;
    }
    let u = x.numer() * x.denom();
    let bp = BigInt::from(p);
    let mut u = u;
    while (&u % &bp).is_zero() {
        u /= &bp;
    }
    let modulus = if p == 2 { 8 } else { p };
    let r = modp(&u, &BigInt::from(modulus)).to_u64().unwrap();
    (1..modulus).any(|t| t % p != 0 && t * t % modulus == r)
}

fn congruence_diagonal(mut a: Vec<Vec<Rational>>) -> Vec<Rational> {
    let n = a.len();
    for k in 0..n {
        if a[k][k].is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !a[j][j].is_zero()) {
                a.swap(k, j);
                for r in a.iter_mut() {
                    r.swap(k, j);
                }
            } else {
                let j = (k + 1..n)
                    .find(|&j| !a[k][j].is_zero())
                    .expect("degenerate complement");
                for c in 0..n {
                    let t = a[j][c].clone();
                    a[k][c] += t;
                }
                for r in a.iter_mut() {
                    let t = r[j].clone();
                    r[k] += t;
                }
            }
        }
        for i in k + 1..n {
            let f = &a[i][k] / &a[k][k];
            for c in 0..n {
                let t = &f * &a[k][c];
                a[i][c] -= t;
            }
            for r in a.iter_mut() {
                let t = &f * &r[k];
                r[i] -= t;
            }
        }
    }
    (0..n).map(|i| a[i][i].clone()).collect()
}

/// Witt index over ℚ_p computed by explicit hyperbolic splitting.
pub fn witt_index_oracle(entries: &[Rational], p: u64) -> usize {
    let n = entries.len();
    if n < 2 {
        return 0;
    }
    let Some(x) = isotropic_vector(entries, p, 40) else {
        return 0;
    };
    let a = entries;
    let c: Rational = (0..n).map(|i| &a[i] * &x[i] * &x[i]).sum();
    let j = (0..n)
        .filter(|&j| !x[j].is_zero())
        .min_by_key(|&j| val_rat(&(&a[j] * &x[j] * &x[j]), p))
        .unwrap();
    let mut y = vec![Rational::zero(); n];
    y[j] = (&a[j] * &x[j]).recip();
    let qy = &a[j] * &y[j] * &y[j];
    // plane Gram [[c, 1], [1, qy]]; −det = 1 − c·qy must be a square
    let minus_det = Rational::one() - &c * &qy;
    assert!(
        c.is_zero() || is_padic_square(&minus_det, p),
        "lifted plane is not hyperbolic at {}: c={} qy={} entries={:?} x={:?}", p, c, qy, a.iter().map(|z| z.to_string()).collect::<Vec<_>>(), x.iter().map(|z| z.to_string()).collect::<Vec<_>>()
    );
    if n == 2 {
        return 1;
    }
    let rows = vec![
        (0..n).map(|i| &a[i] * &x[i]).collect::<Vec<_>>(),
        (0..n).map(|i| &a[i] * &y[i]).collect::<Vec<_>>(),
    ];
    let basis = bc_tori::linalg::nullspace(&rows, n);
    assert_eq!(basis.len(), n - 2);
    let gram: Vec<Vec<Rational>> = basis
        .iter()
        .map(|u| {
            basis
                .iter()
                .map(|w| (0..n).map(|k| &a[k] * &u[k] * &w[k]).sum())
                .collect()
        })
        .collect();
    let rest = congruence_diagonal(gram);
    1 + witt_index_oracle(&rest, p)
}

pub fn sign_of(x: &Rational) -> i8 {
    if x.is_positive() {
        1
    } else {
        -1
    }
}
