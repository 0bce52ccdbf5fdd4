use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::factor::{factor, is_prime_u64};
use super::place::Place;
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Element of ℚ^×/ℚ^×², normalized to its squarefree integer representative
/// (sign included).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SquareClass(BigInt);

impl Serialize for SquareClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for SquareClass {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let x = crate::rational::serde_str::deserialize(d)?;
        square_class(&x).map_err(serde::de::Error::custom)
    }
}

impl SquareClass {
    pub fn one() -> SquareClass {
        SquareClass(BigInt::one())
    }

    pub fn representative(&self) -> &BigInt {
        &self.0
    }

    pub fn as_rational(&self) -> Rational {
        Rational::from_integer(self.0.clone())
    }

    pub fn mul(&self, other: &SquareClass) -> SquareClass {
        let g = self.0.gcd(&other.0);
        SquareClass((&self.0 / &g) * (&other.0 / &g))
    }

    pub fn is_trivial(&self) -> bool {
        self.0.is_one()
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Squarefree part of a nonzero integer, sign kept.
pub fn squarefree_part(n: &BigInt) -> Result<BigInt> {
    let mut r = if n.is_negative() {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    for (p, e) in factor(n)? {
        if e % 2 == 1 {
            r *= p;
        }
    }
    Ok(r)
}

pub fn square_class(x: &Rational) -> Result<SquareClass> {
    if x.is_zero() {
        return Err(Error::Zero("square_class"));
    }
    Ok(SquareClass(squarefree_part(&(x.numer() * x.denom()))?))
}

/// p-adic valuation of a nonzero integer.
pub fn valuation(n: &BigInt, p: u64) -> u32 {
    debug_assert!(!n.is_zero());
    let bp = BigInt::from(p);
    let mut m = n.clone();
    let mut v = 0;
    while (&m % &bp).is_zero() {
        m /= &bp;
        v += 1;
    }
    v
}

fn split_valuation(n: &BigInt, p: u64) -> (u32, BigInt) {
    let v = valuation(n, p);
    (v, n / BigInt::from(p).pow(v))
}

fn residue(n: &BigInt, m: u64) -> u64 {
    n.mod_floor(&BigInt::from(m)).to_u64().unwrap()
}

fn legendre_unchecked(a: &BigInt, p: u64) -> i8 {
    let r = residue(a, p);
    if r == 0 {
        return 0;
    }
    let e = BigInt::from((p - 1) / 2);
    let t = BigInt::from(r).modpow(&e, &BigInt::from(p));
    if t.is_one() {
        1
    } else {
        -1
    }
}

/// Legendre symbol (a/p) for an odd prime p.
pub fn legendre(a: &BigInt, p: u64) -> Result<i8> {
    if p == 2 || !is_prime_u64(p) {
        return Err(Error::NotOddPrime(p.to_string()));
    }
    Ok(legendre_unchecked(a, p))
}

// Hilbert symbol of two nonzero integers.
fn hilbert_int(a: &BigInt, b: &BigInt, v: Place) -> i8 {
    match v {
        Place::Real => {
            if a.is_negative() && b.is_negative() {
                -1
            } else {
                1
            }
        }
        Place::Prime(2) => {
            let (alpha, u) = split_valuation(a, 2);
            let (beta, w) = split_valuation(b, 2);
            let eps = |x: &BigInt| u32::from(residue(x, 4) == 3);
            let omega = |x: &BigInt| u32::from(matches!(residue(x, 8), 3 | 5));
            let e = eps(&u) * eps(&w) + alpha * omega(&w) + beta * omega(&u);
            if e % 2 == 0 {
                1
            } else {
                -1
            }
        }
        Place::Prime(p) => {
            let (alpha, u) = split_valuation(a, p);
            let (beta, w) = split_valuation(b, p);
            let mut s: i8 = if (alpha * beta) % 2 == 1 && p % 4 == 3 {
                -1
            } else {
                1
            };
            if beta % 2 == 1 {
                s *= legendre_unchecked(&u, p);
            }
            if alpha % 2 == 1 {
                s *= legendre_unchecked(&w, p);
            }
            s
        }
    }
}

/// Hilbert symbol (a, b)_v: +1 iff z² = a·x² + b·y² has a nontrivial
/// solution over the completion of ℚ at v.
pub fn hilbert(a: &Rational, b: &Rational, v: Place) -> Result<i8> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::Zero("hilbert"));
    }
    // a·den(a)² has the same square class as a
    let ai = a.numer() * a.denom();
    let bi = b.numer() * b.denom();
    Ok(hilbert_int(&ai, &bi, v))
}

/// Whether x is a square in the completion at v.
pub fn is_local_square(x: &Rational, v: Place) -> Result<bool> {
    if x.is_zero() {
        return Err(Error::Zero("is_local_square"));
    }
    let n = x.numer() * x.denom();
    Ok(match v {
        Place::Real => n.is_positive(),
        Place::Prime(p) => {
            let (e, u) = split_valuation(&n, p);
            if e % 2 == 1 {
                false
            } else if p == 2 {
                residue(&u, 8) == 1
            } else {
                legendre_unchecked(&u, p) == 1
            }
        }
    })
}
