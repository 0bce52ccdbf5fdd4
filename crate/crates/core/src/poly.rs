//! Univariate polynomials over ℚ, Sturm sequences and exact real root
//! isolation.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::local::factor;
use crate::rational::{format_rational, Rational};

/// Coefficients low degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Poly {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Poly {
        Poly::new(vec![c])
    }

    pub fn x() -> Poly {
        Poly::new(vec![Rational::zero(), Rational::one()])
    }

    pub fn from_ints(v: &[i64]) -> Poly {
        Poly::new(crate::rational::ints(v))
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.leading().recip())
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        Poly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn neg(&self) -> Poly {
        self.scale(&-Rational::one())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![Rational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly::new(c)
    }

    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.coeffs.len() - 1;
        let lead_inv = d.leading().recip();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut q = vec![Rational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] * &lead_inv;
            if !c.is_zero() {
                for (j, b) in d.coeffs.iter().enumerate() {
                    r[k + j] -= &c * b;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (Poly::new(q), Poly::new(r))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.divrem(d).1
    }

    /// Monic gcd.
    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Inverse of `self` modulo `m`, if they are coprime.
    pub fn inverse_mod(&self, m: &Poly) -> Option<Poly> {
        // extended Euclid tracking the coefficient of self
        let (mut r0, mut r1) = (m.clone(), self.rem(m));
        let (mut s0, mut s1) = (Poly::zero(), Poly::constant(Rational::one()));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s = s0.sub(&q.mul(&s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        if r0.degree() != Some(0) {
            return None;
        }
        Some(s0.scale(&r0.leading().recip()).rem(m))
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| a * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, a| acc * x + a)
    }

    /// Enclosure of {p(t) : t ∈ [lo, hi]} by interval Horner evaluation.
    pub fn eval_interval(&self, lo: &Rational, hi: &Rational) -> (Rational, Rational) {
        let mut acc = (Rational::zero(), Rational::zero());
        for a in self.coeffs.iter().rev() {
            let prods = [&acc.0 * lo, &acc.0 * hi, &acc.1 * lo, &acc.1 * hi];
            let mn = prods.iter().min().unwrap().clone();
            let mx = prods.iter().max().unwrap().clone();
            acc = (mn + a, mx + a);
        }
        acc
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree() == Some(0)
    }

    /// Sturm sequence p, p', −rem(p, p'), …
    pub fn sturm_sequence(&self) -> Vec<Poly> {
        let mut seq = vec![self.clone(), self.derivative()];
        while let Some(last) = seq.last() {
            if last.is_zero() {
                seq.pop();
                break;
            }
            let prev = &seq[seq.len() - 2];
            let r = prev.rem(last).neg();
            if r.is_zero() {
                break;
            }
            seq.push(r);
        }
        seq
    }

    /// Bound B with every real root in (−B, B).
    pub fn cauchy_bound(&self) -> Rational {
        let lead = self.leading().abs();
        let m = self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .map(|a| a.abs() / &lead)
            .max()
            .unwrap_or_else(Rational::zero);
        m + Rational::one()
    }

    /// Rational roots of a nonzero polynomial, ascending.
    pub fn rational_roots(&self) -> Result<Vec<Rational>> {
        if self.is_zero() {
            return Err(Error::Zero("rational_roots of zero polynomial"));
        }
        // strip the factor x^k first
        let k = self.coeffs.iter().position(|a| !a.is_zero()).unwrap();
        let mut roots = Vec::new();
        if k > 0 {
            roots.push(Rational::zero());
        }
        let ints = integer_coefficients(&self.coeffs[k..]);
        if ints.len() > 1 {
            let divisors = |n: &BigInt| -> Result<Vec<BigInt>> {
                let mut ds = vec![BigInt::one()];
                for (p, e) in factor(n)? {
                    let mut next = Vec::new();
                    for d in &ds {
                        let mut pp = BigInt::one();
                        for _ in 0..=e {
                            next.push(d * &pp);
                            pp *= &p;
                        }
                    }
                    ds = next;
                }
                Ok(ds)
            };
            let nums = divisors(&ints[0])?;
            let dens = divisors(ints.last().unwrap())?;
            for n in &nums {
                for d in &dens {
                    for s in [n.clone(), -n.clone()] {
                        let r = Rational::new(s, d.clone());
                        if self.eval(&r).is_zero() && !roots.contains(&r) {
                            roots.push(r);
                        }
                    }
                }
            }
        }
        roots.sort();
        Ok(roots)
    }
}

/// Primitive integer multiple of a rational coefficient vector.
pub fn integer_coefficients(c: &[Rational]) -> Vec<BigInt> {
    let l = c
        .iter()
        .fold(BigInt::one(), |acc, a| acc.lcm(a.denom()));
    let v: Vec<BigInt> = c.iter().map(|a| (a * Rational::from_integer(l.clone())).to_integer()).collect();
    let g = v.iter().fold(BigInt::zero(), |acc, a| acc.gcd(a));
    if g.is_zero() {
        v
    } else {
        v.into_iter().map(|a| a / &g).collect()
    }
}

fn sign_changes(seq: &[Poly], x: &Rational) -> usize {
    let signs: Vec<i8> = seq
        .iter()
        .map(|p| crate::rational::sign(&p.eval(x)))
        .filter(|&s| s != 0)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// A real root of a squarefree polynomial, isolated in (lo, hi]. When
/// lo == hi the root is exactly rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootInterval {
    pub lo: Rational,
    pub hi: Rational,
}

impl RootInterval {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }
}

pub struct RealRoots {
    poly: Poly,
    sturm: Vec<Poly>,
}

impl RealRoots {
    pub fn new(poly: &Poly) -> Result<RealRoots> {
        if poly.degree().unwrap_or(0) == 0 {
            return Err(Error::Invalid("root isolation needs positive degree".into()));
        }
        if !poly.is_squarefree() {
            return Err(Error::Invalid(format!("{poly} is not squarefree")));
        }
        Ok(RealRoots {
            sturm: poly.sturm_sequence(),
            poly: poly.clone(),
        })
    }

    /// Number of roots in (a, b].
    pub fn count(&self, a: &Rational, b: &Rational) -> usize {
        sign_changes(&self.sturm, a) - sign_changes(&self.sturm, b)
    }

    pub fn isolate(&self) -> Vec<RootInterval> {
        let b = self.poly.cauchy_bound();
        let mut out = Vec::new();
        let mut stack = vec![(-b.clone(), b)];
        while let Some((lo, hi)) = stack.pop() {
            match self.count(&lo, &hi) {
                0 => {}
                1 => out.push(RootInterval { lo, hi }),
                _ => {
                    let mid = (&lo + &hi) / Rational::from_integer(BigInt::from(2));
                    stack.push((lo, mid.clone()));
                    stack.push((mid, hi));
                }
            }
        }
        out.sort_by(|x, y| x.lo.cmp(&y.lo));
        out
    }

    /// Halves the interval, keeping the root inside.
    pub fn bisect(&self, iv: &RootInterval) -> RootInterval {
        if iv.is_exact() {
            return iv.clone();
        }
        let mid = (&iv.lo + &iv.hi) / Rational::from_integer(BigInt::from(2));
        if self.poly.eval(&mid).is_zero() {
            return RootInterval {
                lo: mid.clone(),
                hi: mid,
            };
        }
        if self.count(&iv.lo, &mid) == 1 {
            RootInterval { lo: iv.lo.clone(), hi: mid }
        } else {
            RootInterval { lo: mid, hi: iv.hi.clone() }
        }
    }

    /// Sign of g at the isolated root; refines until the interval image of
    /// g excludes zero. Returns 0 only if g vanishes at an exact rational
    /// root; otherwise `max_steps` bounds the work.
    pub fn sign_at(&self, g: &Poly, iv: &RootInterval, max_steps: usize) -> Result<i8> {
        let mut iv = iv.clone();
        for _ in 0..max_steps {
            if iv.is_exact() {
                return Ok(crate::rational::sign(&g.eval(&iv.lo)));
            }
            let (lo, hi) = g.eval_interval(&iv.lo, &iv.hi);
            if lo.is_positive() {
                return Ok(1);
            }
            if hi.is_negative() {
                return Ok(-1);
            }
            iv = self.bisect(&iv);
        }
        Err(Error::Inconsistency(
            "interval refinement did not separate the value from zero".into(),
        ))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, a)| !a.is_zero())
            .map(|(i, a)| match i {
                0 => format_rational(a),
                1 => format!("{}*x", format_rational(a)),
                _ => format!("{}*x^{}", format_rational(a), i),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}
