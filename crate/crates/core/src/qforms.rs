//! Diagonal quadratic forms over ℚ and their complete invariant system.
//!
//! Hasse invariant convention: ε_v(⟨a_1,…,a_n⟩) = ∏_{i<j} (a_i, a_j)_v.
//! All comparisons (including the split reference values used elsewhere in
//! the crate) go through this one convention, so decisions do not depend on
//! it.
//!
//! Over ℚ a nondegenerate form is determined up to isometry by its
//! dimension, determinant square class, Hasse invariants and signature, so
//! equivalence is decided on invariants alone.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::local::{
    hilbert, is_local_square, is_prime_u64, primes_dividing, square_class, Place, SquareClass,
};
use crate::rational::{format_rational, int, serde_str_vec, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawForm", into = "RawForm")]
pub struct DiagForm {
    entries: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
#[serde(transparent)]
struct RawForm(#[serde(with = "serde_str_vec")] Vec<Rational>);

impl TryFrom<RawForm> for DiagForm {
    type Error = Error;
    fn try_from(raw: RawForm) -> Result<DiagForm> {
        DiagForm::new(raw.0)
    }
}

impl From<DiagForm> for RawForm {
    fn from(q: DiagForm) -> RawForm {
        RawForm(q.entries)
    }
}

impl fmt::Display for DiagForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(format_rational).collect();
        write!(f, "<{}>", parts.join(", "))
    }
}

/// Local Witt decomposition data: `2·witt_index + anisotropic_dim = dim`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WittIndex {
    pub witt_index: usize,
    pub anisotropic_dim: usize,
}

pub type WittProfile = BTreeMap<Place, WittIndex>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormInvariants {
    pub dim: usize,
    pub det: SquareClass,
    pub hasse: BTreeMap<Place, i8>,
    pub signature: (usize, usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scope {
    Local(Place),
    Global,
}

impl DiagForm {
    pub fn new(entries: Vec<Rational>) -> Result<DiagForm> {
        if entries.is_empty() {
            return Err(Error::Invalid("a form needs at least one entry".into()));
        }
        if entries.iter().any(Zero::is_zero) {
            return Err(Error::Zero("diagonal form entry"));
        }
        Ok(DiagForm { entries })
    }

    pub fn from_ints(v: &[i64]) -> Result<DiagForm> {
        DiagForm::new(crate::rational::ints(v))
    }

    /// r⟨1⟩ ⊥ s⟨−1⟩.
    pub fn signature_form(r: usize, s: usize) -> Result<DiagForm> {
        let mut e = vec![int(1); r];
        e.extend(std::iter::repeat_n(int(-1), s));
        DiagForm::new(e)
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn det(&self) -> Rational {
        self.entries.iter().fold(Rational::one(), |acc, a| acc * a)
    }

    pub fn det_class(&self) -> Result<SquareClass> {
        square_class(&self.det())
    }

    pub fn signature(&self) -> (usize, usize) {
        let pos = self.entries.iter().filter(|a| a.is_positive()).count();
        (pos, self.dim() - pos)
    }

    pub fn is_definite(&self) -> bool {
        let (p, n) = self.signature();
        p == 0 || n == 0
    }

    pub fn scaled(&self, lambda: &Rational) -> Result<DiagForm> {
        DiagForm::new(self.entries.iter().map(|a| a * lambda).collect())
    }

    /// Replaces each entry by the squarefree integer of its square class.
    pub fn reduced(&self) -> Result<DiagForm> {
        Ok(DiagForm {
            entries: self
                .entries
                .iter()
                .map(|a| Ok(square_class(a)?.as_rational()))
                .collect::<Result<_>>()?,
        })
    }

    /// Invariants with Hasse symbols listed at the given places.
    pub fn invariants_at(&self, places: &[Place]) -> Result<FormInvariants> {
        let mut hasse = BTreeMap::new();
        for &v in places {
            hasse.insert(v, self.hasse(v)?);
        }
        Ok(FormInvariants {
            dim: self.dim(),
            det: self.det_class()?,
            hasse,
            signature: self.signature(),
        })
    }

    pub fn orthogonal_sum(&self, other: &DiagForm) -> DiagForm {
        let mut e = self.entries.clone();
        e.extend(other.entries.iter().cloned());
        DiagForm { entries: e }
    }

    pub fn gram(&self) -> Matrix {
        let n = self.dim();
        let mut g = linalg::zeros(n, n);
        for (i, a) in self.entries.iter().enumerate() {
            g[i][i] = a.clone();
        }
        g
    }

    /// {∞, 2} ∪ primes dividing some entry. Off this set every entry is a
    /// unit and all local invariants are trivial.
    pub fn support(&self) -> Result<Vec<Place>> {
        support_of(self.entries.iter())
    }

    pub fn hasse(&self, v: Place) -> Result<i8> {
        let mut s = 1i8;
        for i in 0..self.dim() {
            for j in i + 1..self.dim() {
                s *= hilbert(&self.entries[i], &self.entries[j], v)?;
            }
        }
        Ok(s)
    }

    pub fn invariants(&self) -> Result<FormInvariants> {
        let mut hasse = BTreeMap::new();
        for v in self.support()? {
            hasse.insert(v, self.hasse(v)?);
        }
        Ok(FormInvariants {
            dim: self.dim(),
            det: self.det_class()?,
            hasse,
            signature: self.signature(),
        })
    }

    pub fn witt_index(&self, v: Place) -> Result<WittIndex> {
        let n = self.dim();
        let witt = match v {
            Place::Real => {
                let (p, q) = self.signature();
                p.min(q)
            }
            Place::Prime(_) => local_witt_from_invariants(n, self.det(), self.hasse(v)?, v)?,
        };
        Ok(WittIndex {
            witt_index: witt,
            anisotropic_dim: n - 2 * witt,
        })
    }

    pub fn witt_profile(&self) -> Result<WittProfile> {
        self.support()?
            .into_iter()
            .map(|v| Ok((v, self.witt_index(v)?)))
            .collect()
    }

    /// Witt index over ℚ: the minimum of the local Witt indices
    /// (Hasse–Minkowski applied to the anisotropic kernel).
    pub fn global_witt_index(&self) -> Result<usize> {
        let mut m = self.dim() / 2;
        for v in self.support()? {
            m = m.min(self.witt_index(v)?.witt_index);
        }
        Ok(m)
    }

    pub fn is_isotropic_global(&self) -> Result<bool> {
        Ok(self.global_witt_index()? >= 1)
    }

    pub fn is_isotropic_at(&self, v: Place) -> Result<bool> {
        Ok(self.witt_index(v)?.witt_index >= 1)
    }
}

pub(crate) fn support_of<'a>(xs: impl Iterator<Item = &'a Rational>) -> Result<Vec<Place>> {
    let mut ps = vec![2u64];
    for a in xs {
        ps.extend(primes_dividing(a)?);
    }
    ps.sort_unstable();
    ps.dedup();
    Ok(std::iter::once(Place::Real)
        .chain(ps.into_iter().map(Place::Prime))
        .collect())
}

fn locally_isotropic(n: usize, d: &Rational, eps: i8, v: Place) -> Result<bool> {
    let minus_one = int(-1);
    Ok(match n {
        0 | 1 => false,
        2 => is_local_square(&-d.clone(), v)?,
        3 => hilbert(&minus_one, &-d.clone(), v)? == eps,
        4 => !is_local_square(d, v)? || eps == hilbert(&minus_one, &minus_one, v)?,
        _ => true,
    })
}

/// Witt index at a finite place from (dim, det, Hasse invariant): split off
/// hyperbolic planes while the residual invariants say isotropic.
/// Splitting q = H ⊥ q' sends (n, d, ε) to (n − 2, −d, ε·(−1, −d)).
pub fn local_witt_from_invariants(n: usize, det: Rational, eps: i8, v: Place) -> Result<usize> {
    let (mut n, mut d, mut e) = (n, det, eps);
    let mut w = 0;
    while locally_isotropic(n, &d, e, v)? {
        let minus_d = -d.clone();
        e *= hilbert(&int(-1), &minus_d, v)?;
        d = minus_d;
        n -= 2;
        w += 1;
    }
    Ok(w)
}

pub fn equivalent(q1: &DiagForm, q2: &DiagForm, scope: Scope) -> Result<bool> {
    if q1.dim() != q2.dim() {
        return Ok(false);
    }
    match scope {
        Scope::Local(v) => {
            if v.is_real() {
                return Ok(q1.signature() == q2.signature());
            }
            Ok(is_local_square(&(q1.det() * q2.det()), v)? && q1.hasse(v)? == q2.hasse(v)?)
        }
        Scope::Global => {
            if q1.signature() != q2.signature() || q1.det_class()? != q2.det_class()? {
                return Ok(false);
            }
            let places = support_of(q1.entries.iter().chain(q2.entries.iter()))?;
            for v in places {
                if q1.hasse(v)? != q2.hasse(v)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

/// For odd-dimensional forms, decides whether q1 ≅ λ·q2 and returns λ.
/// The determinant forces λ ≡ det(q1)·det(q2) modulo squares.
pub fn similar_odd(q1: &DiagForm, q2: &DiagForm) -> Result<Option<Rational>> {
    if q1.dim() != q2.dim() {
        return Err(Error::DimensionMismatch {
            expected: q1.dim(),
            found: q2.dim(),
        });
    }
    if q1.dim().is_multiple_of(2) {
        return Err(Error::Precondition(
            "similarity scalar is only determined by the determinant in odd dimension".into(),
        ));
    }
    let lambda = q1.det_class()?.mul(&q2.det_class()?).as_rational();
    let scaled = q2.scaled(&lambda)?;
    Ok(equivalent(q1, &scaled, Scope::Global)?.then_some(lambda))
}

/// Upper bound on the auxiliary prime tried by [`similarity_scalar`].
pub const AUX_PRIME_BOUND: u64 = 20_000;

/// Finds μ with μ·q1 ≅ q2 for forms of equal dimension and equal
/// determinant class, or `None` if there is none (even dimension; odd
/// dimension reduces to [`similar_odd`]).
///
/// With D = (−1)^{n/2}·det, scaling changes Hasse invariants by
/// ε_v(μq) = ε_v(q)·(μ, D)_v, so μ solves an 𝔽₂-linear system in the
/// exponents of −1 and the support primes, plus at most one auxiliary
/// prime outside the support.
pub fn similarity_scalar(q1: &DiagForm, q2: &DiagForm) -> Result<Option<Rational>> {
    let n = q1.dim();
    if n != q2.dim() {
        return Err(Error::DimensionMismatch { expected: n, found: q2.dim() });
    }
    if n % 2 == 1 {
        return similar_odd(q2, q1);
    }
    if q1.det_class()? != q2.det_class()? {
        return Ok(None);
    }
    // signature decides the sign of μ
    let (s1, s2) = (q1.signature(), q2.signature());
    let sign: Option<i64> = if s1 == s2 && s1.0 == s1.1 {
        None
    } else if s1 == s2 {
        Some(1)
    } else if (s1.1, s1.0) == s2 {
        Some(-1)
    } else {
        return Ok(None);
    };
    let sign_d = if (n / 2).is_multiple_of(2) { int(1) } else { int(-1) };
    let big_d = sign_d * q1.det();
    let places = support_of(q1.entries.iter().chain(q2.entries.iter()))?;
    let mut target = Vec::with_capacity(places.len());
    for &v in &places {
        target.push(q1.hasse(v)? != q2.hasse(v)?);
    }
    let symbol_vec = |g: &Rational| -> Result<Vec<bool>> {
        places.iter().map(|&v| Ok(hilbert(g, &big_d, v)? == -1)).collect()
    };
    let mut gens: Vec<Rational> = Vec::new();
    match sign {
        None => gens.push(int(-1)),
        Some(-1) => {
            let neg = symbol_vec(&int(-1))?;
            for (t, x) in target.iter_mut().zip(neg) {
                *t ^= x;
            }
        }
        _ => {}
    }
    for v in &places {
        if let Place::Prime(p) = v {
            gens.push(Rational::from_integer((*p).into()));
        }
    }
    // local obstructions: where D is a square (μ, D)_v = 1, and the
    // symbols of a global μ multiply to 1
    let mut parity = false;
    for (&v, &t) in places.iter().zip(&target) {
        if t && is_local_square(&big_d, v)? {
            return Ok(None);
        }
        parity ^= t;
    }
    if parity {
        return Ok(None);
    }
    let base = sign.map_or(int(1), int);
    let columns: Vec<Vec<bool>> = gens.iter().map(symbol_vec).collect::<Result<_>>()?;
    let solve_with = |extra: Option<&Rational>| -> Result<Option<Rational>> {
        let mut t = target.clone();
        let mut mu = base.clone();
        if let Some(q) = extra {
            for (a, b) in t.iter_mut().zip(symbol_vec(q)?) {
                *a ^= b;
            }
            mu *= q;
        }
        let Some(x) = solve_gf2(&columns, &t) else { return Ok(None) };
        for (g, take) in gens.iter().zip(x) {
            if take {
                mu *= g;
            }
        }
        if !equivalent(&q1.scaled(&mu)?, q2, Scope::Global)? {
            return Err(Error::Inconsistency(format!(
                "scalar {} solves the symbol system but does not give an isometry",
                format_rational(&mu)
            )));
        }
        Ok(Some(mu))
    };
    if let Some(mu) = solve_with(None)? {
        return Ok(Some(mu));
    }
    let mut tried = 1;
    for q in 3..=AUX_PRIME_BOUND {
        let qp = Place::Prime(q);
        if !is_prime_u64(q) || places.contains(&qp) {
            continue;
        }
        let qr = int(q as i64);
        // q must not create a new obstruction at itself
        if hilbert(&qr, &big_d, qp)? != 1 {
            continue;
        }
        tried += 1;
        if let Some(mu) = solve_with(Some(&qr))? {
            return Ok(Some(mu));
        }
    }
    Err(Error::ScalarSearchExhausted { candidates: tried })
}

/// Some x with Σ x_j·col_j = target over 𝔽₂.
fn solve_gf2(columns: &[Vec<bool>], target: &[bool]) -> Option<Vec<bool>> {
    let rows = target.len();
    let k = columns.len();
    // augmented rows: [col_0[i] … col_{k−1}[i] | target[i]]
    let mut m: Vec<Vec<bool>> = (0..rows)
        .map(|i| {
            let mut r: Vec<bool> = columns.iter().map(|c| c[i]).collect();
            r.push(target[i]);
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..k {
        let Some(p) = (r..rows).find(|&i| m[i][c]) else { continue };
        m.swap(r, p);
        for i in 0..rows {
            if i != r && m[i][c] {
                let pr = m[r].clone();
                for (a, b) in m[i].iter_mut().zip(pr) {
                    *a ^= b;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if m[r..].iter().any(|row| row[k]) {
        return None;
    }
    let mut x = vec![false; k];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = m[i][k];
    }
    Some(x)
}

/// Congruence diagonalization of a nondegenerate symmetric rational matrix.
pub fn diagonalize(m: &Matrix) -> Result<DiagForm> {
    if !linalg::is_symmetric(m) {
        return Err(Error::NotSymmetric);
    }
    let n = m.len();
    let degenerate = |m: &Matrix| Error::Degenerate {
        rank: linalg::rank(m),
        dim: n,
    };
    let mut a = m.clone();
    for k in 0..n {
        if a[k][k].is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !a[j][j].is_zero()) {
                a.swap(k, j);
                for row in a.iter_mut() {
                    row.swap(k, j);
                }
            } else if let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
                // e_k ← e_k + e_j makes the pivot 2·a[k][j]
                for c in 0..n {
                    let t = a[j][c].clone();
                    a[k][c] += t;
                }
                for row in a.iter_mut() {
                    let t = row[j].clone();
                    row[k] += t;
                }
            } else {
                return Err(degenerate(m));
            }
        }
        let pivot = a[k][k].clone();
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &pivot;
            for c in 0..n {
                let t = &f * &a[k][c];
                a[i][c] -= t;
            }
            for row in a.iter_mut() {
                let t = &f * &row[k];
                row[i] -= t;
            }
        }
    }
    DiagForm::new((0..n).map(|i| a[i][i].clone()).collect()).map_err(|_| degenerate(m))
}
