use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::algebra::{AlgebraElement, EtaleInvolutionAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::rational::Rational;

/// Candidates tried at each height before the height is doubled.
pub const TRIALS_PER_HEIGHT: usize = 32;
/// Largest coefficient height tried by the generator search.
pub const MAX_HEIGHT: i64 = 1 << 10;

/// h(x, y) = c_{n−2}(x·σ(y)), where c_i are the coordinates in the basis
/// 1, e, …, e^{n−1} for an anti-fixed generator e.
#[derive(Clone, Debug)]
pub struct LemmaForm {
    /// Gram matrix in the basis e^0, …, e^{n−1}.
    pub gram: Matrix,
    pub generator: AlgebraElement,
    /// Row i holds the standard coordinates of e^i.
    pub powers: Matrix,
    /// e^0, …, e^{iso−1} span a totally isotropic subspace.
    pub isotropic_dim: usize,
    to_power_coords: Matrix,
}

impl LemmaForm {
    /// Coordinates c_0(x), …, c_{n−1}(x).
    pub fn power_coords(&self, alg: &EtaleInvolutionAlgebra, x: &AlgebraElement) -> Vec<Rational> {
        linalg::mul_vec(&self.to_power_coords, &alg.to_coords(x))
    }

    pub fn eval(&self, alg: &EtaleInvolutionAlgebra, x: &AlgebraElement, y: &AlgebraElement) -> Rational {
        let n = alg.dim();
        let z = alg.mul(x, &alg.sigma(y));
        self.power_coords(alg, &z)[n - 2].clone()
    }

    /// Gram matrix on the standard basis of E.
    pub fn standard_gram(&self) -> Matrix {
        let t = &self.to_power_coords;
        linalg::mul(&linalg::mul(&linalg::transpose(t), &self.gram), t)
    }
}

/// Powers 1, e, …, e^{k−1} as rows of standard coordinates.
pub(crate) fn power_rows(alg: &EtaleInvolutionAlgebra, e: &AlgebraElement, k: usize) -> Matrix {
    let mut rows = Vec::with_capacity(k);
    let mut p = alg.one();
    for _ in 0..k {
        rows.push(alg.to_coords(&p));
        p = alg.mul(&p, e);
    }
    rows
}

/// Whether 1, e, …, e^{n−1} are linearly independent, i.e. e generates E.
pub fn is_generator(alg: &EtaleInvolutionAlgebra, e: &AlgebraElement) -> bool {
    let n = alg.dim();
    linalg::rank(&power_rows(alg, e, n)) == n
}

fn check_even(alg: &EtaleInvolutionAlgebra) -> Result<()> {
    if alg.fixed_count() != 0 || alg.dim() == 0 {
        return Err(Error::Precondition(format!(
            "lemma form needs positive even dimension, got {}",
            alg.dim()
        )));
    }
    Ok(())
}

/// Builds h for a given anti-fixed generator e and verifies that h is
/// nondegenerate with e^0, …, e^{ℓ−2} spanning a totally isotropic space.
pub fn lemma_form_with(alg: &EtaleInvolutionAlgebra, e: &AlgebraElement) -> Result<LemmaForm> {
    check_even(alg)?;
    if !alg.is_anti_fixed(e) {
        return Err(Error::Invalid("generator must satisfy σ(e) = −e".into()));
    }
    let n = alg.dim();
    let powers = power_rows(alg, e, n);
    let to_power_coords = linalg::inverse(&linalg::transpose(&powers))
        .ok_or_else(|| Error::Invalid("powers of e are linearly dependent".into()))?;
    let pe: Vec<AlgebraElement> = powers.iter().map(|r| alg.from_coords(r)).collect();
    let mut form = LemmaForm {
        gram: Vec::new(),
        generator: e.clone(),
        powers,
        isotropic_dim: n / 2 - 1,
        to_power_coords,
    };
    form.gram = (0..n)
        .map(|i| (0..n).map(|j| form.eval(alg, &pe[i], &pe[j])).collect())
        .collect();
    if linalg::det(&form.gram).is_zero() {
        return Err(Error::Inconsistency("lemma form is degenerate".into()));
    }
    let iso = form.isotropic_dim;
    if (0..iso).any(|i| (0..iso).any(|j| !form.gram[i][j].is_zero())) {
        return Err(Error::Inconsistency(
            "low powers of e are not totally isotropic".into(),
        ));
    }
    Ok(form)
}

/// Seeded search for an anti-fixed generator, doubling the coefficient
/// height from 1 up to [`MAX_HEIGHT`].
pub fn find_anti_fixed_generator(alg: &EtaleInvolutionAlgebra, seed: u64) -> Result<AlgebraElement> {
    check_even(alg)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut h = 1;
    let mut trials = 0;
    while h <= MAX_HEIGHT {
        for _ in 0..TRIALS_PER_HEIGHT {
            trials += 1;
            let e = alg.random_anti_fixed(&mut rng, h);
            if is_generator(alg, &e) {
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

pub fn lemma_form(alg: &EtaleInvolutionAlgebra, seed: u64) -> Result<LemmaForm> {
    let e = find_anti_fixed_generator(alg, seed)?;
    lemma_form_with(alg, &e)
}

