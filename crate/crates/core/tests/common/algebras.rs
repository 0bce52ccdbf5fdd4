use bc_tori::etale::{DoubledFactor, EtaleInvolutionAlgebra, NumberFieldFactor};
use bc_tori::poly::Poly;
use rand::Rng;

/// Rejection-samples x, x² − a or x³ + bx − a until irreducible.
pub fn random_field(rng: &mut impl Rng, k: usize) -> NumberFieldFactor {
    loop {
        let min_poly = match k {
            1 => Poly::from_ints(&[0, 1]),
            2 => Poly::from_ints(&[-rng.gen_range(-7..=7), 0, 1]),
            _ => Poly::from_ints(&[-rng.gen_range(-10..=10), rng.gen_range(-2..=2), 0, 1]),
        };
        if let Ok(f) = NumberFieldFactor::new(min_poly) {
            return f;
        }
    }
}

/// Product of doubled factors F[δ]/(δ² − d) with Σ[F:ℚ] ≤ max_half.
pub fn random_algebra(rng: &mut impl Rng, max_half: usize) -> EtaleInvolutionAlgebra {
    let half = rng.gen_range(1..=max_half);
    let mut factors = Vec::new();
    let mut left = half;
    while left > 0 {
        let k = rng.gen_range(1..=left.min(3));
        let field = random_field(rng, k);
        let d = loop {
            let c: Vec<i64> = (0..k).map(|_| rng.gen_range(-4..=4)).collect();
            let d = Poly::from_ints(&c);
            if !d.is_zero() {
                break d;
            }
        };
        factors.push(DoubledFactor::new(field, d).unwrap());
        left -= k;
    }
    EtaleInvolutionAlgebra::new(factors, 0).unwrap()
}
