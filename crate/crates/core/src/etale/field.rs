use std::sync::OnceLock;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::fp_poly::certify_irreducible;
use crate::local::is_prime_u64;
use crate::poly::Poly;
use crate::rational::Rational;

fn probe_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| (2..400).filter(|&p| is_prime_u64(p)).collect())
}

/// How irreducibility of a minimal polynomial was established.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Irreducibility {
    Certified,
    Assumed,
}

/// F = ℚ[x]/(f) with f monic, squarefree and (certified or assumed)
/// irreducible. Elements are polynomials of degree < deg f.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NumberFieldFactor {
    min_poly: Poly,
    irreducibility: Irreducibility,
}

impl NumberFieldFactor {
    /// Validates f and certifies irreducibility by the rational root test
    /// and degree patterns modulo small primes.
    pub fn new(min_poly: Poly) -> Result<NumberFieldFactor> {
        let f = Self::validate(min_poly)?;
        let n = f.degree().unwrap();
        if n > 1 && !f.rational_roots()?.is_empty() {
            return Err(Error::Invalid(format!("{f} has a rational root")));
        }
        if n > 3 && !certify_irreducible(&f, probe_primes()) {
            return Err(Error::Invalid(format!(
                "could not certify irreducibility of {f}; assert it explicitly to proceed"
            )));
        }
        Ok(NumberFieldFactor {
            min_poly: f,
            irreducibility: Irreducibility::Certified,
        })
    }

    /// Accepts a squarefree f whose irreducibility the caller asserts. A
    /// reducible f still defines an étale algebra, so downstream results
    /// remain valid; only the factor list is coarser.
    pub fn assume_irreducible(min_poly: Poly) -> Result<NumberFieldFactor> {
        Ok(NumberFieldFactor {
            min_poly: Self::validate(min_poly)?,
            irreducibility: Irreducibility::Assumed,
        })
    }

    pub fn rationals() -> NumberFieldFactor {
        NumberFieldFactor {
            min_poly: Poly::x(),
            irreducibility: Irreducibility::Certified,
        }
    }

    fn validate(min_poly: Poly) -> Result<Poly> {
        match min_poly.degree() {
            None | Some(0) => {
                return Err(Error::Invalid("minimal polynomial must have degree ≥ 1".into()))
            }
            _ => {}
        }
        let f = min_poly.monic();
        if !f.is_squarefree() {
            return Err(Error::Invalid(format!("{f} is not squarefree")));
        }
        Ok(f)
    }

    pub fn min_poly(&self) -> &Poly {
        &self.min_poly
    }

    pub fn degree(&self) -> usize {
        self.min_poly.degree().unwrap()
    }

    pub fn irreducibility(&self) -> Irreducibility {
        self.irreducibility
    }

    pub fn reduce(&self, a: &Poly) -> Poly {
        a.rem(&self.min_poly)
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        self.reduce(&a.mul(b))
    }

    pub fn inverse(&self, a: &Poly) -> Option<Poly> {
        a.inverse_mod(&self.min_poly)
    }

    pub fn is_invertible(&self, a: &Poly) -> bool {
        !a.is_zero() && self.min_poly.gcd(a).degree() == Some(0)
    }

    /// tr_{F/ℚ}: trace of multiplication by a on the power basis.
    pub fn trace(&self, a: &Poly) -> Rational {
        let mut t = Rational::zero();
        let mut xk = Poly::constant(Rational::one());
        for k in 0..self.degree() {
            t += self.mul(a, &xk).coeff(k);
            xk = self.mul(&xk, &Poly::x());
        }
        t
    }

    /// Coordinates of a in the power basis 1, x, …, x^{deg−1}.
    pub fn coords(&self, a: &Poly) -> Vec<Rational> {
        let a = self.reduce(a);
        (0..self.degree()).map(|i| a.coeff(i)).collect()
    }
}
