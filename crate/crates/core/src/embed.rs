//! Embeddings of étale algebras with involution (E, σ) into matrix
//! algebras with involution (M_n(K), τ_f).
//!
//! (E, σ) embeds into (M_n(ℚ), τ_f) iff E carries a form h with
//! h(ax, y) = h(x, σ(a)y) that is equivalent to f up to a scalar (τ_f
//! depends on f only up to scalars). Every builder here returns such an h
//! together with the data needed to re-check it: its Gram matrix on the
//! standard basis of E, an explicit totally isotropic subspace where one is
//! claimed, and an invariant comparison with the target.

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::etale::{
    lemma_form, unitary_lemma_form, AlgebraElement, ElementJson, EtaleInvolutionAlgebra, RealType,
};
use crate::groups::{is_twin, GroupB, GroupC, TwinDecision};
use crate::linalg::{self, Matrix};
use crate::local::{hilbert, square_class, Place};
use crate::qforms::{
    diagonalize, similar_odd, similarity_scalar, DiagForm, FormInvariants,
};
use crate::rational::{int, serde_str, serde_str_mat, serde_str_opt, serde_str_vec, Rational};
use crate::real_tori::RealFormSpec;

/// Samples used for the compatibility check h(ax, y) = h(x, σ(a)y).
pub const COMPAT_SAMPLES: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InvolutionTarget {
    /// (M_n(ℚ), symplectic involution); all such are conjugate.
    Symplectic { n: usize },
    /// (M_n(ℚ), τ_f) for a diagonal quadratic form f.
    Orthogonal { form: DiagForm },
    /// (M_n(L), τ_h) for L = ℚ(√m) and a diagonal hermitian form h.
    Unitary {
        #[serde(with = "serde_str")]
        m: Rational,
        #[serde(with = "serde_str_vec")]
        h: Vec<Rational>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    /// ψ_δ(x, y) = tr(x·δ·σ(y)), skew-symmetric.
    Symplectic,
    /// h′ ⊥ ⟨−c⟩ from the lemma form on E′, scaled.
    OrthogonalSplit,
    /// The lemma form on E, scaled.
    OrthogonalQuasiSplit,
    /// c_{n−1}(x·σ(y)) over L, scaled in odd dimension.
    Unitary,
    /// A transfer form φ_b found by search, scaled.
    TransferWitness,
}

/// Invariants of the constructed form and of the target, with Hasse
/// symbols at the union of their supports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceWitness {
    pub constructed: FormInvariants,
    pub target: FormInvariants,
}

impl EquivalenceWitness {
    fn new(constructed: &DiagForm, target: &DiagForm) -> Result<Self> {
        let mut places: BTreeSet<Place> = constructed.support()?.into_iter().collect();
        places.extend(target.support()?);
        let places: Vec<Place> = places.into_iter().collect();
        Ok(EquivalenceWitness {
            constructed: constructed.invariants_at(&places)?,
            target: target.invariants_at(&places)?,
        })
    }

    pub fn matches(&self) -> bool {
        self.constructed == self.target
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EmbeddingCertificate {
    pub construction: Construction,
    /// Gram matrix on the standard basis of E (for unitary targets: the
    /// hermitian Gram matrix over L in the basis e^i, whose entries are
    /// rational).
    #[serde(with = "serde_str_mat")]
    pub gram: Matrix,
    /// The scalar μ applied to the raw construction.
    #[serde(with = "serde_str_opt")]
    pub scalar: Option<Rational>,
    /// Diagonalization of the scaled form.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constructed_form: Option<DiagForm>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<EquivalenceWitness>,
    /// Standard coordinates of a basis of a totally isotropic subspace.
    #[serde(with = "serde_str_mat")]
    pub isotropic_basis: Matrix,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<ElementJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skew_element: Option<ElementJson>,
    pub compatibility_samples: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

fn scale_matrix(m: &Matrix, c: &Rational) -> Matrix {
    m.iter().map(|r| r.iter().map(|x| x * c).collect()).collect()
}

/// Checks g(a·x, y) = g(x, σ(a)·y) on random triples.
fn check_compatibility(alg: &EtaleInvolutionAlgebra, gram: &Matrix, seed: u64) -> Result<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    for _ in 0..COMPAT_SAMPLES {
        let a = alg.random_element(&mut rng, 4);
        let x = alg.random_element(&mut rng, 4);
        let y = alg.random_element(&mut rng, 4);
        let lhs = linalg::bilinear(gram, &alg.to_coords(&alg.mul(&a, &x)), &alg.to_coords(&y));
        let rhs = linalg::bilinear(gram, &alg.to_coords(&x), &alg.to_coords(&alg.mul(&alg.sigma(&a), &y)));
        if lhs != rhs {
            return Err(Error::Inconsistency("form is not compatible with the involution".into()));
        }
    }
    Ok(COMPAT_SAMPLES)
}

fn check_isotropic(gram: &Matrix, basis: &Matrix) -> Result<()> {
    for u in basis {
        for v in basis {
            if !linalg::bilinear(gram, u, v).is_zero() {
                return Err(Error::Inconsistency("claimed isotropic subspace is not isotropic".into()));
            }
        }
    }
    if linalg::rank(basis) != basis.len() {
        return Err(Error::Inconsistency("claimed isotropic basis is dependent".into()));
    }
    Ok(())
}

/// d(E, σ): the determinant class of φ_b, independent of b.
pub fn discriminant_class(alg: &EtaleInvolutionAlgebra) -> Result<Rational> {
    Ok(alg.transfer_form(&alg.one())?.det_class()?.as_rational())
}

/// Every even-dimensional E embeds into the split symplectic algebra; the
/// skew form ψ_δ is nondegenerate and all such forms are equivalent.
pub fn embed_symplectic(alg: &EtaleInvolutionAlgebra, seed: u64) -> Result<EmbeddingCertificate> {
    if alg.fixed_count() != 0 || alg.dim() == 0 {
        return Err(Error::Precondition(format!(
            "symplectic embedding needs positive even dimension, got {}",
            alg.dim()
        )));
    }
    let delta = alg.delta();
    let gram = alg.trace_form_gram(&delta);
    let n = gram.len();
    let skew = (0..n).all(|i| (0..n).all(|j| gram[i][j] == -gram[j][i].clone()));
    if !skew || linalg::det(&gram).is_zero() {
        return Err(Error::Inconsistency("ψ_δ is not a nondegenerate alternating form".into()));
    }
    Ok(EmbeddingCertificate {
        construction: Construction::Symplectic,
        compatibility_samples: check_compatibility(alg, &gram, seed)?,
        gram,
        scalar: None,
        constructed_form: None,
        witness: None,
        isotropic_basis: Vec::new(),
        generator: None,
        skew_element: Some(ElementJson::from(&delta)),
        notes: vec!["nondegenerate alternating forms of equal rank are equivalent".into()],
    })
}

/// Odd dimension n = 2ℓ + 1 and f of Witt index ℓ: h = h′ ⊥ ⟨−c⟩ with h′
/// the lemma form on E′ and c a value of its binary residue. h has Witt
/// index ℓ and μ = det h · det f makes μh ≅ f.
pub fn embed_orthogonal_split(
    alg: &EtaleInvolutionAlgebra,
    f: &DiagForm,
    seed: u64,
) -> Result<EmbeddingCertificate> {
    if alg.fixed_count() != 1 {
        return Err(Error::Precondition("orthogonal split embedding needs odd dimension".into()));
    }
    let n = alg.dim();
    if f.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: f.dim() });
    }
    let l = (n - 1) / 2;
    let w = f.global_witt_index()?;
    if w != l {
        return Err(Error::Precondition(format!("target has Witt index {w}, need {l}")));
    }
    // h_pow is h in the basis (e^i, 1): congruent to h_std, smaller entries
    let (h_std, h_pow, isotropic, generator) = if l == 0 {
        (vec![vec![int(1)]], vec![vec![int(1)]], Vec::new(), None)
    } else {
        let e1 = alg.split_off_fixed()?;
        let lf = lemma_form(&e1, seed)?;
        let hp = &lf.gram;
        let m = 2 * l;
        // W = span(e^0..e^{ℓ−2}); W^⊥ in power coordinates
        let rows: Matrix = hp[..l - 1].to_vec();
        let perp = linalg::nullspace(&rows, m);
        let value = |u: &[Rational]| linalg::bilinear(hp, u, u);
        let mut pick = perp.iter().find(|u| !value(u).is_zero()).cloned();
        if pick.is_none() {
            'outer: for i in 0..perp.len() {
                for j in i + 1..perp.len() {
                    let s: Vec<Rational> = perp[i].iter().zip(&perp[j]).map(|(a, b)| a + b).collect();
                    if !value(&s).is_zero() {
                        pick = Some(s);
                        break 'outer;
                    }
                }
            }
        }
        let u = pick.ok_or_else(|| Error::Inconsistency("binary residue of h′ is zero".into()))?;
        let c = value(&u);
        let mut h = lf.standard_gram();
        for row in h.iter_mut() {
            row.push(Rational::zero());
        }
        let mut last = vec![Rational::zero(); m];
        last.push(-c.clone());
        h.push(last);
        // standard coordinates of e^i, and of u + 1 in E′ × ℚ
        let mut iso: Matrix = lf.powers[..l - 1]
            .iter()
            .map(|r| {
                let mut r = r.clone();
                r.push(Rational::zero());
                r
            })
            .collect();
        let mut u_std = vec![Rational::zero(); m];
        for (ui, row) in u.iter().zip(&lf.powers) {
            for (acc, x) in u_std.iter_mut().zip(row) {
                *acc += ui * x;
            }
        }
        u_std.push(Rational::one());
        iso.push(u_std);
        let mut gen = lf.generator.clone();
        gen.fixed = Some(Rational::zero());
        let mut h_pow = hp.clone();
        for row in h_pow.iter_mut() {
            row.push(Rational::zero());
        }
        let mut last = vec![Rational::zero(); m];
        last.push(-c);
        h_pow.push(last);
        (h, h_pow, iso, Some(ElementJson::from(&gen)))
    };
    check_isotropic(&h_std, &isotropic)?;
    let raw = diagonalize(&h_pow)?;
    let mu = raw.det_class()?.mul(&f.det_class()?).as_rational();
    let gram = scale_matrix(&h_std, &mu);
    let constructed = raw.scaled(&mu)?.reduced()?;
    let witness = EquivalenceWitness::new(&constructed, f)?;
    if !witness.matches() {
        return Err(Error::Inconsistency(format!(
            "constructed form {constructed} is not equivalent to {f}"
        )));
    }
    Ok(EmbeddingCertificate {
        construction: Construction::OrthogonalSplit,
        compatibility_samples: check_compatibility(alg, &gram, seed)?,
        gram,
        scalar: Some(mu),
        constructed_form: Some(constructed),
        witness: Some(witness),
        isotropic_basis: isotropic,
        generator,
        skew_element: None,
        notes: Vec::new(),
    })
}

/// Even dimension n = 2ℓ, f of Witt index ≥ ℓ − 1 with d(f) = d(E, σ):
/// the lemma form h has the same determinant and Witt index ≥ ℓ − 1, so
/// some μ has μh ≅ f.
pub fn embed_orthogonal_quasisplit_even(
    alg: &EtaleInvolutionAlgebra,
    f: &DiagForm,
    seed: u64,
) -> Result<EmbeddingCertificate> {
    if alg.fixed_count() != 0 || alg.dim() == 0 {
        return Err(Error::Precondition("quasi-split embedding needs positive even dimension".into()));
    }
    let n = alg.dim();
    if f.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: f.dim() });
    }
    let l = n / 2;
    let d_e = discriminant_class(alg)?;
    let d_f = f.det_class()?.as_rational();
    if d_e != d_f {
        return Err(Error::DeterminantMismatch {
            algebra: crate::rational::format_rational(&d_e),
            target: crate::rational::format_rational(&d_f),
        });
    }
    let w = f.global_witt_index()?;
    if w + 1 < l {
        return Err(Error::Precondition(format!("target has Witt index {w}, need ≥ {}", l - 1)));
    }
    let lf = lemma_form(alg, seed)?;
    let h_std = lf.standard_gram();
    let raw = diagonalize(&lf.gram)?.reduced()?;
    if raw.det_class()?.as_rational() != d_e {
        return Err(Error::Inconsistency("lemma form determinant differs from d(E, σ)".into()));
    }
    let mu = similarity_scalar(&raw, f)?
        .ok_or_else(|| Error::Inconsistency("no scalar relates the lemma form to the target".into()))?;
    let mu = square_class(&mu)?.as_rational();
    let gram = scale_matrix(&h_std, &mu);
    let constructed = raw.scaled(&mu)?.reduced()?;
    let witness = EquivalenceWitness::new(&constructed, f)?;
    if !witness.matches() {
        return Err(Error::Inconsistency(format!(
            "constructed form {constructed} is not equivalent to {f}"
        )));
    }
    let isotropic: Matrix = lf.powers[..lf.isotropic_dim].to_vec();
    check_isotropic(&h_std, &isotropic)?;
    Ok(EmbeddingCertificate {
        construction: Construction::OrthogonalQuasiSplit,
        compatibility_samples: check_compatibility(alg, &gram, seed)?,
        gram,
        scalar: Some(mu),
        constructed_form: Some(constructed),
        witness: Some(witness),
        isotropic_basis: isotropic,
        generator: Some(ElementJson::from(&lf.generator)),
        skew_element: None,
        notes: Vec::new(),
    })
}

/// ⟨a_1, …⟩ over ℚ(√m) ↦ the ℚ-form x ↦ h(x, x) = ⊥ ⟨a_i, −m·a_i⟩.
pub fn hermitian_trace_form(m: &Rational, h: &[Rational]) -> Result<DiagForm> {
    let mut entries = Vec::with_capacity(2 * h.len());
    for a in h {
        entries.push(a.clone());
        entries.push(-(m * a));
    }
    DiagForm::new(entries)
}

/// Witt index of a diagonal hermitian form over ℚ(√m): half that of its
/// trace form.
pub fn hermitian_witt_index(m: &Rational, h: &[Rational]) -> Result<usize> {
    Ok(hermitian_trace_form(m, h)?.global_witt_index()? / 2)
}

/// The quadratic field of a unitary algebra F[δ]/(δ² − m) with m ∈ ℚ.
fn unitary_shape(alg: &EtaleInvolutionAlgebra) -> Result<Rational> {
    let f = match alg.factors() {
        [f] if alg.fixed_count() == 0 => f,
        _ => {
            return Err(Error::Precondition(
                "a unitary algebra is F ⊗ L: one factor F[δ]/(δ² − m), no fixed factor".into(),
            ))
        }
    };
    match f.d().degree() {
        Some(0) => {
            let m = f.d().coeff(0);
            if square_class(&m)?.is_trivial() {
                return Err(Error::Precondition(
                    "δ² = m with m a square: L is not a field".into(),
                ));
            }
            Ok(m)
        }
        _ => Err(Error::Precondition("unitary algebra needs d ∈ ℚ".into())),
    }
}

/// E = F ⊗ L, target hermitian of Witt index ⌊n/2⌋ over L.
pub fn embed_unitary_quasisplit(
    alg: &EtaleInvolutionAlgebra,
    m: &Rational,
    target: &[Rational],
    seed: u64,
) -> Result<EmbeddingCertificate> {
    let d = unitary_shape(alg)?;
    if square_class(&d)? != square_class(m)? {
        return Err(Error::Precondition("algebra and target use different quadratic fields".into()));
    }
    let field = alg.factors()[0].field();
    let n = field.degree();
    if target.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: target.len() });
    }
    let w = hermitian_witt_index(&d, target)?;
    if w != n / 2 {
        return Err(Error::Precondition(format!("target has Witt index {w}, need {}", n / 2)));
    }
    let ulf = unitary_lemma_form(field, &d, seed)?;
    let g = ulf.rational_gram().expect("rational Hankel matrix");
    let raw = diagonalize(&g)?;
    let det_t: Rational = target.iter().product();
    let lambda = if n % 2 == 1 {
        square_class(&(raw.det() * &det_t))?.as_rational()
    } else {
        int(1)
    };
    let scaled = raw.scaled(&lambda)?.reduced()?;
    let t1 = hermitian_trace_form(&d, scaled.entries())?.reduced()?;
    let t2 = hermitian_trace_form(&d, target)?.reduced()?;
    let witness = EquivalenceWitness::new(&t1, &t2)?;
    if !witness.matches() {
        return Err(Error::DeterminantMismatch {
            algebra: scaled.to_string(),
            target: format!("{:?}", target.iter().map(crate::rational::format_rational).collect::<Vec<_>>()),
        });
    }
    // norm test for the determinant ratio: c ∈ N(L^×) iff (c, m)_v = 1 ∀v
    let c = scaled.det() * &det_t;
    let mut places: BTreeSet<Place> = t1.support()?.into_iter().collect();
    places.extend(t2.support()?);
    let mut is_norm = true;
    for v in places {
        is_norm &= hilbert(&c, &d, v)? == 1;
    }
    if !is_norm {
        return Err(Error::Inconsistency("determinant ratio is not a norm".into()));
    }
    let gram = scale_matrix(&g, &lambda);
    // isotropic span of e^0..e^{⌊n/2⌋−1}, in the basis e^i
    let isotropic: Matrix = (0..ulf.witt_index)
        .map(|i| (0..n).map(|j| if i == j { int(1) } else { int(0) }).collect())
        .collect();
    check_isotropic(&gram, &isotropic)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    for _ in 0..COMPAT_SAMPLES {
        let a = ulf.random_element(&mut rng, 4);
        let x = ulf.random_element(&mut rng, 4);
        let y = ulf.random_element(&mut rng, 4);
        let lhs = ulf.eval(&ulf.mul(&a, &x), &y);
        let rhs = ulf.eval(&x, &ulf.mul(&ulf.sigma(&a), &y));
        if lhs != rhs || ulf.eval(&x, &y) != ulf.eval(&y, &x).conj() {
            return Err(Error::Inconsistency("hermitian form fails compatibility".into()));
        }
    }
    let gen = AlgebraElement {
        parts: vec![(ulf.generator.clone(), crate::poly::Poly::zero())],
        fixed: None,
    };
    Ok(EmbeddingCertificate {
        construction: Construction::Unitary,
        compatibility_samples: COMPAT_SAMPLES,
        gram,
        scalar: Some(lambda),
        constructed_form: Some(scaled),
        witness: Some(witness),
        isotropic_basis: isotropic,
        generator: Some(ElementJson::from(&gen)),
        skew_element: None,
        notes: vec!["hermitian forms are compared through their trace forms".into()],
    })
}

/// Whether some φ_b on E ⊗ ℝ has signature (r, s): (ℝ×ℝ, switch) gives a
/// hyperbolic plane, (ℂ×ℂ, switch) two, (ℂ, conj) a definite plane of
/// either sign, (ℝ, id) a line of either sign.
pub fn real_signature_realizable(t: &RealType, r: usize, s: usize) -> bool {
    let base = t.n_rr + 2 * t.n_cc;
    if r + s != t.dim() || r < base || s < base {
        return false;
    }
    let extra = r - base;
    (0..=t.n_c).any(|i| 2 * i <= extra && extra - 2 * i <= t.n_r)
}

/// Embeddability of E ⊗ ℝ into the real form: the torus type of E ⊗ ℝ must
/// occur among the maximal tori of the target.
pub fn real_embeddable(alg: &EtaleInvolutionAlgebra, target: &RealFormSpec) -> Result<bool> {
    let t = alg.real_type()?;
    let n = alg.dim();
    let (need_dim, need_fixed) = match *target {
        RealFormSpec::SO { p, q } => (p + q, 1),
        _ => (2 * target.rank(), 0),
    };
    if n != need_dim || alg.fixed_count() != need_fixed {
        return Err(Error::DimensionMismatch { expected: need_dim, found: n });
    }
    let (a, b, c) = t.torus_counts();
    Ok(target
        .torus_types()
        .contains(&crate::real_tori::TorusType::new(a, b, c)))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LocalCheck {
    pub place: Place,
    pub embeddable: bool,
    pub reason: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "decision", rename_all = "snake_case")]
pub enum GlobalDecision {
    Embeds {
        reason: String,
        local: Vec<LocalCheck>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        certificate: Option<EmbeddingCertificate>,
    },
    DoesNotEmbed {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        place: Option<Place>,
        reason: String,
        local: Vec<LocalCheck>,
    },
    NotApplicable {
        reason: String,
    },
}

impl GlobalDecision {
    pub fn embeds(&self) -> Option<bool> {
        match self {
            GlobalDecision::Embeds { .. } => Some(true),
            GlobalDecision::DoesNotEmbed { .. } => Some(false),
            GlobalDecision::NotApplicable { .. } => None,
        }
    }
}

/// Search bound for a transfer-form witness φ_b ~ f.
const WITNESS_TRIALS: usize = 64;

fn transfer_witness(alg: &EtaleInvolutionAlgebra, f: &DiagForm, seed: u64) -> Result<Option<EmbeddingCertificate>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..WITNESS_TRIALS {
        let b = alg.random_fixed(&mut rng, 3);
        if !alg.is_invertible(&b) {
            continue;
        }
        let gram_b = alg.transfer_gram(&b)?;
        let q = diagonalize(&gram_b)?.reduced()?;
        let mu = if q.dim() % 2 == 1 { similar_odd(f, &q)? } else { similarity_scalar(&q, f)? };
        if let Some(mu) = mu {
            let constructed = q.scaled(&mu)?.reduced()?;
            let witness = EquivalenceWitness::new(&constructed, f)?;
            if !witness.matches() {
                continue;
            }
            let gram = scale_matrix(&gram_b, &mu);
            return Ok(Some(EmbeddingCertificate {
                construction: Construction::TransferWitness,
                compatibility_samples: check_compatibility(alg, &gram, seed)?,
                gram,
                scalar: Some(mu),
                constructed_form: Some(constructed),
                witness: Some(witness),
                isotropic_basis: Vec::new(),
                generator: None,
                skew_element: Some(ElementJson::from(&b)),
                notes: vec!["skew_element holds the transfer scalar b".into()],
            }));
        }
    }
    Ok(None)
}

/// Decides whether (E, σ) embeds into the target over ℚ, constructively
/// where a builder applies. Orthogonal targets use the local-global
/// principle, which is only available when n ≤ 5 or E ⊗ ℝ is a product of
/// (ℂ, conj) (and one (ℝ, id) in odd dimension); finite places are handled
/// only where the target is split (odd n) or has Witt index ≥ ℓ − 1 (even n).
pub fn embeds_globally(alg: &EtaleInvolutionAlgebra, target: &InvolutionTarget, seed: u64) -> Result<GlobalDecision> {
    match target {
        InvolutionTarget::Symplectic { n } => {
            if alg.dim() != *n {
                return Err(Error::DimensionMismatch { expected: *n, found: alg.dim() });
            }
            let cert = embed_symplectic(alg, seed)?;
            Ok(GlobalDecision::Embeds {
                reason: "every algebra with (E:dimen) embeds into a split symplectic algebra; local embeddings glue for symplectic targets".into(),
                local: Vec::new(),
                certificate: Some(cert),
            })
        }
        InvolutionTarget::Unitary { m, h } => {
            let w = hermitian_witt_index(m, h)?;
            if w != h.len() / 2 {
                return Ok(GlobalDecision::NotApplicable {
                    reason: format!(
                        "only quasi-split unitary targets are decided; target has Witt index {w} < {}",
                        h.len() / 2
                    ),
                });
            }
            let cert = embed_unitary_quasisplit(alg, m, h, seed)?;
            Ok(GlobalDecision::Embeds {
                reason: "quasi-split unitary target: explicit hermitian form of Witt index ⌊n/2⌋".into(),
                local: Vec::new(),
                certificate: Some(cert),
            })
        }
        InvolutionTarget::Orthogonal { form } => embeds_orthogonal(alg, form, seed),
    }
}

fn embeds_orthogonal(alg: &EtaleInvolutionAlgebra, f: &DiagForm, seed: u64) -> Result<GlobalDecision> {
    let n = alg.dim();
    if f.dim() != n || n == 0 {
        return Err(Error::DimensionMismatch { expected: n, found: f.dim() });
    }
    let l = n / 2;
    let even = n.is_multiple_of(2);
    let mut local = Vec::new();
    if even {
        let d_e = discriminant_class(alg)?;
        if d_e != f.det_class()?.as_rational() {
            return Ok(GlobalDecision::DoesNotEmbed {
                place: None,
                reason: "d(E, σ) differs from det f in ℚ^×/ℚ^×²".into(),
                local,
            });
        }
    }
    let t = alg.real_type()?;
    let (r, s) = f.signature();
    let ok_inf = real_signature_realizable(&t, r, s);
    local.push(LocalCheck {
        place: Place::Real,
        embeddable: ok_inf,
        reason: format!(
            "E ⊗ ℝ has (ℝ,ℝ×ℝ,ℂ,ℂ×ℂ) counts ({},{},{},{}); target signature ({r},{s})",
            t.n_r, t.n_rr, t.n_c, t.n_cc
        ),
    });
    if !ok_inf {
        return Ok(GlobalDecision::DoesNotEmbed {
            place: Some(Place::Real),
            reason: "no transfer form on E ⊗ ℝ has the target signature".into(),
            local,
        });
    }
    for v in f.support()? {
        let Place::Prime(_) = v else { continue };
        let w = f.witt_index(v)?.witt_index;
        let split_enough = if even { w + 1 >= l } else { w == l };
        if !split_enough {
            return Ok(GlobalDecision::NotApplicable {
                reason: format!(
                    "target has Witt index {w} at {v}; local embeddability at such finite places is not implemented"
                ),
            });
        }
        local.push(LocalCheck {
            place: v,
            embeddable: true,
            reason: format!("target has Witt index {w} at {v}"),
        });
    }
    let totally_complex = t.n_rr == 0 && t.n_cc == 0 && t.n_r == n % 2;
    if n > 5 && !totally_complex {
        return Ok(GlobalDecision::NotApplicable {
            reason: format!(
                "local-global principle needs n ≤ 5 or E ⊗ ℝ ≅ (ℂ, conj)^m (× (ℝ, id)); here n = {n} and E ⊗ ℝ has (ℝ×ℝ, ℂ×ℂ) counts ({}, {})",
                t.n_rr, t.n_cc
            ),
        });
    }
    let w = f.global_witt_index()?;
    let certificate = if !even && w == l {
        Some(embed_orthogonal_split(alg, f, seed)?)
    } else if even && w + 1 >= l {
        Some(embed_orthogonal_quasisplit_even(alg, f, seed)?)
    } else {
        transfer_witness(alg, f, seed)?
    };
    Ok(GlobalDecision::Embeds {
        reason: if n <= 5 {
            "embeds locally everywhere; local-global principle applies since n ≤ 5".into()
        } else {
            "embeds locally everywhere; local-global principle applies since E ⊗ ℝ is totally complex".into()
        },
        local,
        certificate,
    })
}

pub fn correspond_b_to_c(e1: &EtaleInvolutionAlgebra) -> Result<EtaleInvolutionAlgebra> {
    e1.split_off_fixed()
}

pub fn correspond_c_to_b(e2: &EtaleInvolutionAlgebra) -> Result<EtaleInvolutionAlgebra> {
    e2.append_fixed()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Correspondence {
    pub algebra: EtaleInvolutionAlgebra,
    pub twins: TwinDecision,
    /// Embedding of the image into the other group's algebra, for twins.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub embedding: Option<GlobalDecision>,
}

fn check_dim(alg_dim: usize, want: usize) -> Result<()> {
    if alg_dim != want {
        return Err(Error::DimensionMismatch { expected: want, found: alg_dim });
    }
    Ok(())
}

/// E1 ↦ E1′ for a maximal torus of G1 = SU(q); for twins, E1′ embeds into
/// the split symplectic algebra of G2.
pub fn correspond_b_to_c_for(
    e1: &EtaleInvolutionAlgebra,
    g1: &GroupB,
    g2: &GroupC,
    seed: u64,
) -> Result<Correspondence> {
    check_dim(e1.dim(), 2 * g1.rank() + 1)?;
    let algebra = correspond_b_to_c(e1)?;
    let twins = is_twin(g1, g2)?;
    let embedding = if !twins.twin {
        None
    } else if g2.algebra().is_split()? {
        Some(embeds_globally(&algebra, &InvolutionTarget::Symplectic { n: algebra.dim() }, seed)?)
    } else {
        Some(GlobalDecision::NotApplicable {
            reason: "quaternion algebra of G2 is not split; only split targets are built".into(),
        })
    };
    Ok(Correspondence { algebra, twins, embedding })
}

/// E2 ↦ E2 × (ℚ, id); for twins, the image embeds into (M_{2ℓ+1}, τ_q).
pub fn correspond_c_to_b_for(
    e2: &EtaleInvolutionAlgebra,
    g1: &GroupB,
    g2: &GroupC,
    seed: u64,
) -> Result<Correspondence> {
    check_dim(e2.dim(), 2 * g2.rank())?;
    let algebra = correspond_c_to_b(e2)?;
    let twins = is_twin(g1, g2)?;
    let embedding = if twins.twin {
        Some(embeds_globally(
            &algebra,
            &InvolutionTarget::Orthogonal { form: g1.form().clone() },
            seed,
        )?)
    } else {
        None
    };
    Ok(Correspondence { algebra, twins, embedding })
}
