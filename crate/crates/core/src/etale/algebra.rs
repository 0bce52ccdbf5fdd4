use std::fmt;

use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::field::{Irreducibility, NumberFieldFactor};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::poly::{Poly, RealRoots};
use crate::qforms::{diagonalize, DiagForm};
use crate::rational::{int, serde_str, serde_str_vec, Rational};

/// F[δ]/(δ² − d) with σ(δ) = −δ; d invertible in F.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DoubledFactor {
    field: NumberFieldFactor,
    d: Poly,
}

impl DoubledFactor {
    pub fn new(field: NumberFieldFactor, d: Poly) -> Result<DoubledFactor> {
        let d = field.reduce(&d);
        if !field.is_invertible(&d) {
            return Err(Error::Invalid(format!(
                "d = {d} is not invertible modulo {}",
                field.min_poly()
            )));
        }
        Ok(DoubledFactor { field, d })
    }

    pub fn field(&self) -> &NumberFieldFactor {
        &self.field
    }

    pub fn d(&self) -> &Poly {
        &self.d
    }

    pub fn degree(&self) -> usize {
        self.field.degree()
    }
}

/// Counts of indecomposable real algebras with involution in E ⊗ ℝ.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RealType {
    /// (ℝ, id)
    pub n_r: usize,
    /// (ℝ × ℝ, switch)
    pub n_rr: usize,
    /// (ℂ, conjugation)
    pub n_c: usize,
    /// (ℂ × ℂ, switch)
    pub n_cc: usize,
}

impl RealType {
    pub fn dim(&self) -> usize {
        self.n_r + 2 * self.n_rr + 2 * self.n_c + 4 * self.n_cc
    }

    /// (α, β, γ) of the torus SU(E ⊗ ℝ, σ).
    pub fn torus_counts(&self) -> (usize, usize, usize) {
        (self.n_rr, self.n_c, self.n_cc)
    }

    /// E ⊗ ℝ ≅ (ℂ, conjugation)^m.
    pub fn is_totally_complex(&self) -> bool {
        self.n_r == 0 && self.n_rr == 0 && self.n_cc == 0
    }
}

/// u + wδ in each doubled factor, plus the coordinate in (ℚ, id).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraElement {
    pub parts: Vec<(Poly, Poly)>,
    pub fixed: Option<Rational>,
}

/// Étale ℚ-algebra with involution in the normal form
/// ∏ F_j[δ]/(δ² − d_j) × (ℚ, id)^{0 or 1}.
///
/// Standard ℚ-basis: for each doubled factor x^0…x^{k−1} then
/// x^0δ…x^{k−1}δ, followed by the fixed factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawAlgebra", into = "RawAlgebra")]
pub struct EtaleInvolutionAlgebra {
    factors: Vec<DoubledFactor>,
    fixed: usize,
}

#[derive(Serialize, Deserialize)]
struct RawFactor {
    #[serde(with = "serde_str_vec")]
    min_poly: Vec<Rational>,
    #[serde(with = "serde_str_vec")]
    d: Vec<Rational>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    assume_irreducible: bool,
}

#[derive(Serialize, Deserialize)]
struct RawAlgebra {
    factors: Vec<RawFactor>,
    #[serde(default)]
    fixed: usize,
}

impl TryFrom<RawAlgebra> for EtaleInvolutionAlgebra {
    type Error = Error;
    fn try_from(raw: RawAlgebra) -> Result<Self> {
        let factors = raw
            .factors
            .into_iter()
            .map(|f| {
                let p = Poly::new(f.min_poly);
                let field = if f.assume_irreducible {
                    NumberFieldFactor::assume_irreducible(p)?
                } else {
                    NumberFieldFactor::new(p)?
                };
                DoubledFactor::new(field, Poly::new(f.d))
            })
            .collect::<Result<Vec<_>>>()?;
        EtaleInvolutionAlgebra::new(factors, raw.fixed)
    }
}

impl From<EtaleInvolutionAlgebra> for RawAlgebra {
    fn from(a: EtaleInvolutionAlgebra) -> RawAlgebra {
        RawAlgebra {
            factors: a
                .factors
                .into_iter()
                .map(|f| {
                    let k = f.degree();
                    RawFactor {
                        assume_irreducible: f.field.irreducibility() == Irreducibility::Assumed,
                        min_poly: f.field.min_poly().coeffs().to_vec(),
                        d: (0..k).map(|i| f.d.coeff(i)).collect(),
                    }
                })
                .collect(),
            fixed: a.fixed,
        }
    }
}

/// Whether dim E^σ = ⌊(n+1)/2⌋ for the given doubled-factor degrees and
/// number of (ℚ, id) factors.
pub fn dimension_condition_holds(doubled_degrees: &[usize], fixed: usize) -> bool {
    let s: usize = doubled_degrees.iter().sum();
    let n = 2 * s + fixed;
    s + fixed == n.div_ceil(2)
}

impl EtaleInvolutionAlgebra {
    pub fn new(factors: Vec<DoubledFactor>, fixed: usize) -> Result<Self> {
        let degrees: Vec<usize> = factors.iter().map(DoubledFactor::degree).collect();
        if !dimension_condition_holds(&degrees, fixed) {
            return Err(Error::Invalid(format!(
                "{fixed} copies of (ℚ, id) violate dim E^σ = ⌊(n+1)/2⌋"
            )));
        }
        Ok(EtaleInvolutionAlgebra { factors, fixed })
    }

    pub fn empty() -> Self {
        EtaleInvolutionAlgebra {
            factors: Vec::new(),
            fixed: 0,
        }
    }

    /// ℚ(√m) with conjugation, or (ℚ × ℚ, switch) when m is a square.
    pub fn quadratic(m: Rational) -> Result<Self> {
        let f = DoubledFactor::new(NumberFieldFactor::rationals(), Poly::constant(m))?;
        Self::new(vec![f], 0)
    }

    /// (F × F, switch), i.e. F[δ]/(δ² − 1).
    pub fn split(field: NumberFieldFactor) -> Result<Self> {
        let f = DoubledFactor::new(field, Poly::constant(Rational::one()))?;
        Self::new(vec![f], 0)
    }

    pub fn product(&self, other: &Self) -> Result<Self> {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        Self::new(factors, self.fixed + other.fixed)
    }

    pub fn factors(&self) -> &[DoubledFactor] {
        &self.factors
    }

    pub fn fixed_count(&self) -> usize {
        self.fixed
    }

    pub fn dim(&self) -> usize {
        2 * self.half_dim() + self.fixed
    }

    fn half_dim(&self) -> usize {
        self.factors.iter().map(DoubledFactor::degree).sum()
    }

    pub fn fixed_dim(&self) -> usize {
        self.half_dim() + self.fixed
    }

    pub fn check_dimension_condition(&self) -> bool {
        self.fixed_dim() == self.dim().div_ceil(2)
    }

    pub fn split_off_fixed(&self) -> Result<Self> {
        if self.fixed != 1 {
            return Err(Error::Precondition(
                "split_off_fixed needs odd dimension".into(),
            ));
        }
        Ok(EtaleInvolutionAlgebra {
            factors: self.factors.clone(),
            fixed: 0,
        })
    }

    pub fn append_fixed(&self) -> Result<Self> {
        if self.fixed != 0 {
            return Err(Error::Precondition("append_fixed needs even dimension".into()));
        }
        Ok(EtaleInvolutionAlgebra {
            factors: self.factors.clone(),
            fixed: 1,
        })
    }

    pub fn real_type(&self) -> Result<RealType> {
        let mut t = RealType {
            n_r: self.fixed,
            ..RealType::default()
        };
        for f in &self.factors {
            let rr = RealRoots::new(f.field.min_poly())?;
            let roots = rr.isolate();
            for iv in &roots {
                match rr.sign_at(&f.d, iv, 100_000)? {
                    1 => t.n_rr += 1,
                    -1 => t.n_c += 1,
                    _ => {
                        return Err(Error::Inconsistency(format!(
                            "d = {} vanishes at a real root of {}",
                            f.d,
                            f.field.min_poly()
                        )))
                    }
                }
            }
            t.n_cc += (f.degree() - roots.len()) / 2;
        }
        debug_assert_eq!(t.dim(), self.dim());
        Ok(t)
    }

    // ---- element arithmetic ----

    fn check_shape(&self, a: &AlgebraElement) -> Result<()> {
        if a.parts.len() != self.factors.len() || a.fixed.is_some() != (self.fixed == 1) {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: a.parts.len(),
            });
        }
        Ok(())
    }

    pub fn zero(&self) -> AlgebraElement {
        AlgebraElement {
            parts: vec![(Poly::zero(), Poly::zero()); self.factors.len()],
            fixed: (self.fixed == 1).then(Rational::zero),
        }
    }

    pub fn one(&self) -> AlgebraElement {
        AlgebraElement {
            parts: vec![(Poly::constant(Rational::one()), Poly::zero()); self.factors.len()],
            fixed: (self.fixed == 1).then(Rational::one),
        }
    }

    /// The element δ in every doubled factor, 0 in the fixed factor.
    pub fn delta(&self) -> AlgebraElement {
        AlgebraElement {
            parts: vec![(Poly::zero(), Poly::constant(Rational::one())); self.factors.len()],
            fixed: (self.fixed == 1).then(Rational::zero),
        }
    }

    pub fn element(&self, parts: Vec<(Poly, Poly)>, fixed: Option<Rational>) -> Result<AlgebraElement> {
        let a = AlgebraElement { parts, fixed };
        self.check_shape(&a)?;
        Ok(AlgebraElement {
            parts: a
                .parts
                .iter()
                .zip(&self.factors)
                .map(|((u, w), f)| (f.field.reduce(u), f.field.reduce(w)))
                .collect(),
            fixed: a.fixed,
        })
    }

    pub fn add(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            parts: a
                .parts
                .iter()
                .zip(&b.parts)
                .map(|((u1, w1), (u2, w2))| (u1.add(u2), w1.add(w2)))
                .collect(),
            fixed: a.fixed.as_ref().zip(b.fixed.as_ref()).map(|(x, y)| x + y),
        }
    }

    pub fn scale(&self, a: &AlgebraElement, c: &Rational) -> AlgebraElement {
        AlgebraElement {
            parts: a.parts.iter().map(|(u, w)| (u.scale(c), w.scale(c))).collect(),
            fixed: a.fixed.as_ref().map(|x| x * c),
        }
    }

    pub fn mul(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            parts: self
                .factors
                .iter()
                .zip(a.parts.iter().zip(&b.parts))
                .map(|(f, ((u1, w1), (u2, w2)))| {
                    let k = &f.field;
                    let u = k.reduce(&u1.mul(u2).add(&f.d.mul(&w1.mul(w2))));
                    let w = k.reduce(&u1.mul(w2).add(&w1.mul(u2)));
                    (u, w)
                })
                .collect(),
            fixed: a.fixed.as_ref().zip(b.fixed.as_ref()).map(|(x, y)| x * y),
        }
    }

    pub fn pow(&self, a: &AlgebraElement, k: usize) -> AlgebraElement {
        (0..k).fold(self.one(), |acc, _| self.mul(&acc, a))
    }

    pub fn sigma(&self, a: &AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            parts: a.parts.iter().map(|(u, w)| (u.clone(), w.neg())).collect(),
            fixed: a.fixed.clone(),
        }
    }

    pub fn is_fixed(&self, a: &AlgebraElement) -> bool {
        a.parts.iter().all(|(_, w)| w.is_zero())
    }

    pub fn is_anti_fixed(&self, a: &AlgebraElement) -> bool {
        a.parts.iter().all(|(u, _)| u.is_zero())
            && a.fixed.as_ref().is_none_or(Zero::is_zero)
    }

    /// Invertible iff N(u + wδ) = u² − d w² is invertible in each F_j.
    pub fn is_invertible(&self, a: &AlgebraElement) -> bool {
        self.factors.iter().zip(&a.parts).all(|(f, (u, w))| {
            let nrm = f.field.reduce(&u.mul(u).sub(&f.d.mul(&w.mul(w))));
            f.field.is_invertible(&nrm)
        }) && a.fixed.as_ref().is_none_or(|x| !x.is_zero())
    }

    pub fn to_coords(&self, a: &AlgebraElement) -> Vec<Rational> {
        let mut v = Vec::with_capacity(self.dim());
        for (f, (u, w)) in self.factors.iter().zip(&a.parts) {
            v.extend(f.field.coords(u));
            v.extend(f.field.coords(w));
        }
        if let Some(x) = &a.fixed {
            v.push(x.clone());
        }
        v
    }

    pub fn from_coords(&self, v: &[Rational]) -> AlgebraElement {
        let mut parts = Vec::new();
        let mut i = 0;
        for f in &self.factors {
            let k = f.degree();
            let u = Poly::new(v[i..i + k].to_vec());
            let w = Poly::new(v[i + k..i + 2 * k].to_vec());
            parts.push((u, w));
            i += 2 * k;
        }
        AlgebraElement {
            parts,
            fixed: (self.fixed == 1).then(|| v[i].clone()),
        }
    }

    pub fn basis(&self) -> Vec<AlgebraElement> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut v = vec![Rational::zero(); n];
                v[i] = Rational::one();
                self.from_coords(&v)
            })
            .collect()
    }

    /// Matrix of y ↦ a·y on the standard basis (columns are images).
    pub fn mult_matrix(&self, a: &AlgebraElement) -> Matrix {
        let cols: Vec<Vec<Rational>> = self
            .basis()
            .iter()
            .map(|b| self.to_coords(&self.mul(a, b)))
            .collect();
        linalg::transpose(&cols)
    }

    /// tr_{E/ℚ} as the trace of the regular representation.
    pub fn trace(&self, a: &AlgebraElement) -> Rational {
        let m = self.mult_matrix(a);
        (0..m.len()).map(|i| m[i][i].clone()).sum()
    }

    /// Uniform coefficients in [−h, h].
    pub fn random_element<R: Rng>(&self, rng: &mut R, h: i64) -> AlgebraElement {
        let v: Vec<Rational> = (0..self.dim()).map(|_| int(rng.gen_range(-h..=h))).collect();
        self.from_coords(&v)
    }

    pub fn random_fixed<R: Rng>(&self, rng: &mut R, h: i64) -> AlgebraElement {
        let a = self.random_element(rng, h);
        self.scale(&self.add(&a, &self.sigma(&a)), &crate::rational::frac(1, 2))
    }

    pub fn random_anti_fixed<R: Rng>(&self, rng: &mut R, h: i64) -> AlgebraElement {
        let a = self.random_element(rng, h);
        let s = self.sigma(&a);
        let diff = self.add(&a, &self.scale(&s, &-Rational::one()));
        self.scale(&diff, &crate::rational::frac(1, 2))
    }

    // ---- transfer forms ----

    fn check_transfer_scalar(&self, b: &AlgebraElement) -> Result<()> {
        self.check_shape(b)?;
        if !self.is_fixed(b) {
            return Err(Error::Invalid("b is not fixed by σ".into()));
        }
        if !self.is_invertible(b) {
            return Err(Error::Invalid("b is not invertible".into()));
        }
        Ok(())
    }

    /// Gram matrix of φ_b(x, y) = tr(x·b·σ(y)) on the standard basis.
    pub fn transfer_gram(&self, b: &AlgebraElement) -> Result<Matrix> {
        self.check_transfer_scalar(b)?;
        Ok(self.trace_form_gram(b))
    }

    /// Gram matrix of (x, y) ↦ tr(x·b·σ(y)) for arbitrary b; symmetric when
    /// σ(b) = b and skew-symmetric when σ(b) = −b.
    pub fn trace_form_gram(&self, b: &AlgebraElement) -> Matrix {
        let basis = self.basis();
        let n = basis.len();
        let mut g = linalg::zeros(n, n);
        for i in 0..n {
            let xb = self.mul(&basis[i], b);
            for j in 0..n {
                g[i][j] = self.trace(&self.mul(&xb, &self.sigma(&basis[j])));
            }
        }
        g
    }

    /// φ_b, diagonalized.
    pub fn transfer_form(&self, b: &AlgebraElement) -> Result<DiagForm> {
        if self.dim() == 0 {
            return Err(Error::Precondition("transfer form of the zero algebra".into()));
        }
        diagonalize(&self.transfer_gram(b)?)
    }

    /// φ_b assembled factorwise: the transfer from F_j to ℚ of
    /// ⟨2b_j, −2b_j d_j⟩, plus ⟨c⟩ for the fixed factor.
    pub fn transfer_form_per_factor(&self, b: &AlgebraElement) -> Result<DiagForm> {
        self.check_transfer_scalar(b)?;
        let mut entries = Vec::new();
        for (f, (bj, _)) in self.factors.iter().zip(&b.parts) {
            let k = &f.field;
            let two_b = bj.scale(&int(2));
            let minus_two_bd = k.mul(&two_b, &f.d).neg();
            for c in [two_b, minus_two_bd] {
                entries.extend(transfer_to_q(k, &c)?.entries().iter().cloned());
            }
        }
        if let Some(c) = &b.fixed {
            entries.push(c.clone());
        }
        DiagForm::new(entries)
    }
}

/// Tr_{F/ℚ}(⟨c⟩): the form x ↦ tr(c·x²) on the power basis.
pub fn transfer_to_q(field: &NumberFieldFactor, c: &Poly) -> Result<DiagForm> {
    let k = field.degree();
    let mut xs = vec![Poly::constant(Rational::one())];
    for i in 1..2 * k - 1 {
        let next = field.mul(&xs[i - 1], &Poly::x());
        xs.push(next);
    }
    let traces: Vec<Rational> = xs.iter().map(|p| field.trace(&field.mul(c, p))).collect();
    let g: Matrix = (0..k)
        .map(|i| (0..k).map(|j| traces[i + j].clone()).collect())
        .collect();
    diagonalize(&g)
}

impl fmt::Display for EtaleInvolutionAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .factors
            .iter()
            .map(|x| format!("(ℚ[x]/({}), d = {})", x.field.min_poly(), x.d))
            .collect();
        if self.fixed == 1 {
            parts.push("(ℚ, id)".into());
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        write!(f, "{}", parts.join(" × "))
    }
}

/// JSON shape of an [`AlgebraElement`]: per-factor `u`, `w` coefficient
/// lists and an optional fixed coordinate.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ElementJson {
    pub parts: Vec<PartJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed: Option<FixedJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PartJson {
    #[serde(with = "serde_str_vec")]
    pub u: Vec<Rational>,
    #[serde(with = "serde_str_vec")]
    pub w: Vec<Rational>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FixedJson(#[serde(with = "serde_str")] pub Rational);

impl From<&AlgebraElement> for ElementJson {
    fn from(a: &AlgebraElement) -> Self {
        ElementJson {
            parts: a
                .parts
                .iter()
                .map(|(u, w)| PartJson {
                    u: u.coeffs().to_vec(),
                    w: w.coeffs().to_vec(),
                })
                .collect(),
            fixed: a.fixed.clone().map(FixedJson),
        }
    }
}

impl ElementJson {
    pub fn into_element(self, alg: &EtaleInvolutionAlgebra) -> Result<AlgebraElement> {
        alg.element(
            self.parts
                .into_iter()
                .map(|p| (Poly::new(p.u), Poly::new(p.w)))
                .collect(),
            self.fixed.map(|f| f.0),
        )
    }
}
