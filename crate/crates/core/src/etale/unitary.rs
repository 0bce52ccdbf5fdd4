use std::fmt;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::field::NumberFieldFactor;
use super::lemma::{MAX_HEIGHT, TRIALS_PER_HEIGHT};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::local::square_class;
use crate::poly::Poly;
use crate::rational::{format_rational, int, serde_str, Rational};

/// a + b√m in L = ℚ(√m); m is carried by the context.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadElem {
    #[serde(with = "serde_str")]
    pub re: Rational,
    #[serde(with = "serde_str")]
    pub im: Rational,
}

impl QuadElem {
    pub fn rational(re: Rational) -> QuadElem {
        QuadElem {
            re,
            im: Rational::zero(),
        }
    }

    pub fn conj(&self) -> QuadElem {
        QuadElem {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn add(&self, o: &QuadElem) -> QuadElem {
        QuadElem {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }

    pub fn mul(&self, o: &QuadElem, m: &Rational) -> QuadElem {
        QuadElem {
            re: &self.re * &o.re + m * &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    /// N_{L/ℚ} = a² − m b².
    pub fn norm(&self, m: &Rational) -> Rational {
        &self.re * &self.re - m * &self.im * &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", format_rational(&self.re))
        } else {
            write!(f, "{} + {}·√m", format_rational(&self.re), format_rational(&self.im))
        }
    }
}

/// An element p + q√m of F ⊗ L with p, q ∈ F.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorElem {
    pub p: Poly,
    pub q: Poly,
}

/// h(x, y) = c_{n−1}(x·σ(y)) on E = F ⊗ ℚ(√m), with c_i the L-coordinates
/// in the basis e^i ⊗ 1 and σ = id ⊗ conjugation.
#[derive(Clone, Debug)]
pub struct UnitaryLemmaForm {
    pub field: NumberFieldFactor,
    pub m: Rational,
    pub generator: Poly,
    /// Hermitian Gram matrix in the basis e^i ⊗ 1.
    pub gram: Vec<Vec<QuadElem>>,
    /// e^0, …, e^{witt_index−1} span a totally isotropic subspace.
    pub witt_index: usize,
    to_power_coords: Matrix,
}

impl UnitaryLemmaForm {
    fn c_last(&self, a: &Poly) -> Rational {
        let n = self.field.degree();
        linalg::mul_vec(&self.to_power_coords, &self.field.coords(a))[n - 1].clone()
    }

    pub fn mul(&self, x: &TensorElem, y: &TensorElem) -> TensorElem {
        let f = &self.field;
        TensorElem {
            p: f.reduce(&x.p.mul(&y.p).add(&x.q.mul(&y.q).scale(&self.m))),
            q: f.reduce(&x.p.mul(&y.q).add(&x.q.mul(&y.p))),
        }
    }

    pub fn sigma(&self, x: &TensorElem) -> TensorElem {
        TensorElem {
            p: x.p.clone(),
            q: x.q.neg(),
        }
    }

    pub fn eval(&self, x: &TensorElem, y: &TensorElem) -> QuadElem {
        let z = self.mul(x, &self.sigma(y));
        QuadElem {
            re: self.c_last(&z.p),
            im: self.c_last(&z.q),
        }
    }

    /// The Gram matrix has rational entries; this is that matrix.
    pub fn rational_gram(&self) -> Option<Matrix> {
        self.gram
            .iter()
            .map(|r| r.iter().map(|x| x.im.is_zero().then(|| x.re.clone())).collect())
            .collect()
    }

    pub fn random_element<R: Rng>(&self, rng: &mut R, h: i64) -> TensorElem {
        let n = self.field.degree();
        let mut draw = || Poly::new((0..n).map(|_| int(rng.gen_range(-h..=h))).collect());
        TensorElem { p: draw(), q: draw() }
    }
}

fn check_quadratic(m: &Rational) -> Result<()> {
    if m.is_zero() || square_class(m)?.is_trivial() {
        return Err(Error::Invalid(format!(
            "m = {} does not define a quadratic field",
            format_rational(m)
        )));
    }
    Ok(())
}

fn field_powers(field: &NumberFieldFactor, e: &Poly, k: usize) -> Vec<Poly> {
    let mut out = vec![Poly::constant(Rational::one())];
    for i in 1..k {
        let next = field.mul(&out[i - 1], e);
        out.push(next);
    }
    out
}

pub fn is_field_generator(field: &NumberFieldFactor, e: &Poly) -> bool {
    let n = field.degree();
    let rows: Matrix = field_powers(field, e, n).iter().map(|p| field.coords(p)).collect();
    linalg::rank(&rows) == n
}

pub fn unitary_lemma_form_with(field: &NumberFieldFactor, m: &Rational, e: &Poly) -> Result<UnitaryLemmaForm> {
    check_quadratic(m)?;
    let n = field.degree();
    let e = field.reduce(e);
    let pw = field_powers(field, &e, 2 * n - 1);
    let rows: Matrix = pw[..n].iter().map(|p| field.coords(p)).collect();
    let to_power_coords = linalg::inverse(&linalg::transpose(&rows))
        .ok_or_else(|| Error::Invalid(format!("{e} does not generate the field")))?;
    let mut form = UnitaryLemmaForm {
        field: field.clone(),
        m: m.clone(),
        generator: e,
        gram: Vec::new(),
        witt_index: n / 2,
        to_power_coords,
    };
    // e is σ-fixed, so h(e^i, e^j) = c_{n−1}(e^{i+j})
    form.gram = (0..n)
        .map(|i| (0..n).map(|j| QuadElem::rational(form.c_last(&pw[i + j]))).collect())
        .collect();
    let g = form.rational_gram().expect("Hankel entries are rational");
    if linalg::det(&g).is_zero() {
        return Err(Error::Inconsistency("unitary lemma form is degenerate".into()));
    }
    let w = form.witt_index;
    if (0..w).any(|i| (0..w).any(|j| !g[i][j].is_zero())) {
        return Err(Error::Inconsistency(
            "low powers of e are not totally isotropic".into(),
        ));
    }
    Ok(form)
}

/// Tries e = x first, then random elements with doubling height.
pub fn find_field_generator(field: &NumberFieldFactor, seed: u64) -> Result<Poly> {
    if is_field_generator(field, &Poly::x()) {
        return Ok(field.reduce(&Poly::x()));
    }
    let n = field.degree();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut h = 1;
    let mut trials = 0;
    while h <= MAX_HEIGHT {
        for _ in 0..TRIALS_PER_HEIGHT {
            trials += 1;
            let e = Poly::new((0..n).map(|_| int(rng.gen_range(-h..=h))).collect());
            if is_field_generator(field, &e) {
                return Ok(e);
            }
        }
        h *= 2;
    }
    Err(Error::GeneratorSearch {
        trials,
        height: MAX_HEIGHT,
    })
}

pub fn unitary_lemma_form(field: &NumberFieldFactor, m: &Rational, seed: u64) -> Result<UnitaryLemmaForm> {
    let e = find_field_generator(field, seed)?;
    unitary_lemma_form_with(field, m, &e)
}
