//! Groups of type B_ℓ (SO or Spin of an odd-dimensional form) and C_ℓ
//! (unitary groups of a hermitian form over a quaternion algebra) over ℚ,
//! their local ranks, and the twin decision.
//!
//! Two such groups are twins when at every place they are both split or
//! both anisotropic. At finite places neither type is ever anisotropic, so
//! twins are split at every finite place.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::local::{hilbert, primes_dividing, Place};
use crate::qforms::{similar_odd, DiagForm};
use crate::rational::{format_rational, serde_str, serde_str_vec, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawQuaternion", into = "RawQuaternion")]
pub struct QuaternionAlgebra {
    a: Rational,
    b: Rational,
}

#[derive(Serialize, Deserialize)]
struct RawQuaternion {
    #[serde(with = "serde_str")]
    a: Rational,
    #[serde(with = "serde_str")]
    b: Rational,
}

impl TryFrom<RawQuaternion> for QuaternionAlgebra {
    type Error = Error;
    fn try_from(r: RawQuaternion) -> Result<Self> {
        QuaternionAlgebra::new(r.a, r.b)
    }
}

impl From<QuaternionAlgebra> for RawQuaternion {
    fn from(q: QuaternionAlgebra) -> Self {
        RawQuaternion { a: q.a, b: q.b }
    }
}

impl QuaternionAlgebra {
    pub fn new(a: Rational, b: Rational) -> Result<Self> {
        if a.is_zero() || b.is_zero() {
            return Err(Error::Zero("quaternion algebra parameter"));
        }
        let d = QuaternionAlgebra { a, b };
        let r = d.ramified_places()?;
        if r.len() % 2 != 0 {
            return Err(Error::Inconsistency(format!(
                "({}, {}) has an odd ramification set",
                format_rational(&d.a),
                format_rational(&d.b)
            )));
        }
        Ok(d)
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    /// ∞, 2 and the primes dividing a or b.
    pub fn support(&self) -> Result<BTreeSet<Place>> {
        let mut s: BTreeSet<Place> = [Place::Real, Place::Prime(2)].into();
        for x in [&self.a, &self.b] {
            s.extend(primes_dividing(x)?.into_iter().map(Place::Prime));
        }
        Ok(s)
    }

    pub fn is_split_at(&self, v: Place) -> Result<bool> {
        Ok(hilbert(&self.a, &self.b, v)? == 1)
    }

    pub fn ramified_places(&self) -> Result<Vec<Place>> {
        let mut out = Vec::new();
        for v in self.support()? {
            if !self.is_split_at(v)? {
                out.push(v);
            }
        }
        Ok(out)
    }

    pub fn is_split(&self) -> Result<bool> {
        Ok(self.ramified_places()?.is_empty())
    }
}

impl fmt::Display for QuaternionAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", format_rational(&self.a), format_rational(&self.b))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Isogeny {
    #[serde(rename = "adjoint")]
    Adjoint,
    #[serde(rename = "sc", alias = "simply_connected")]
    SimplyConnected,
}

/// SO(q) (adjoint) or Spin(q) (simply connected), dim q = 2ℓ + 1 ≥ 5.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawGroupB", into = "RawGroupB")]
pub struct GroupB {
    q: DiagForm,
    isogeny: Isogeny,
}

#[derive(Serialize, Deserialize)]
struct RawGroupB {
    q: DiagForm,
    isogeny: Isogeny,
}

impl TryFrom<RawGroupB> for GroupB {
    type Error = Error;
    fn try_from(r: RawGroupB) -> Result<Self> {
        GroupB::new(r.q, r.isogeny)
    }
}

impl From<GroupB> for RawGroupB {
    fn from(g: GroupB) -> Self {
        RawGroupB { q: g.q, isogeny: g.isogeny }
    }
}

impl GroupB {
    pub fn new(q: DiagForm, isogeny: Isogeny) -> Result<Self> {
        if q.dim().is_multiple_of(2) || q.dim() < 5 {
            return Err(Error::Invalid(format!(
                "type B needs odd dimension ≥ 5, got {}",
                q.dim()
            )));
        }
        Ok(GroupB { q, isogeny })
    }

    pub fn form(&self) -> &DiagForm {
        &self.q
    }

    pub fn isogeny(&self) -> Isogeny {
        self.isogeny
    }

    pub fn rank(&self) -> usize {
        (self.q.dim() - 1) / 2
    }

    pub fn support(&self) -> Result<BTreeSet<Place>> {
        Ok(self.q.support()?.into_iter().collect())
    }

    pub fn local_rank(&self, v: Place) -> Result<usize> {
        Ok(self.q.witt_index(v)?.witt_index)
    }
}

/// SU(h) for a diagonal hermitian form h = ⟨h_1, …, h_ℓ⟩ over the
/// quaternion algebra D with its canonical involution.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawGroupC", into = "RawGroupC")]
pub struct GroupC {
    d: QuaternionAlgebra,
    h: Vec<Rational>,
    isogeny: Isogeny,
}

#[derive(Serialize, Deserialize)]
struct RawGroupC {
    #[serde(with = "serde_str")]
    a: Rational,
    #[serde(with = "serde_str")]
    b: Rational,
    #[serde(with = "serde_str_vec")]
    h: Vec<Rational>,
    isogeny: Isogeny,
}

impl TryFrom<RawGroupC> for GroupC {
    type Error = Error;
    fn try_from(r: RawGroupC) -> Result<Self> {
        GroupC::new(QuaternionAlgebra::new(r.a, r.b)?, r.h, r.isogeny)
    }
}

impl From<GroupC> for RawGroupC {
    fn from(g: GroupC) -> Self {
        RawGroupC {
            a: g.d.a,
            b: g.d.b,
            h: g.h,
            isogeny: g.isogeny,
        }
    }
}

impl GroupC {
    pub fn new(d: QuaternionAlgebra, h: Vec<Rational>, isogeny: Isogeny) -> Result<Self> {
        if h.len() < 2 {
            return Err(Error::Invalid(format!("type C needs ℓ ≥ 2, got {}", h.len())));
        }
        if h.iter().any(Zero::is_zero) {
            return Err(Error::Zero("hermitian form entry"));
        }
        Ok(GroupC { d, h, isogeny })
    }

    /// The split group Sp_{2ℓ}: D = M₂(ℚ) = (1, 1).
    pub fn split(l: usize, isogeny: Isogeny) -> Result<Self> {
        let one = Rational::from_integer(1.into());
        Self::new(
            QuaternionAlgebra::new(one.clone(), one.clone())?,
            vec![one; l],
            isogeny,
        )
    }

    pub fn algebra(&self) -> &QuaternionAlgebra {
        &self.d
    }

    pub fn hermitian(&self) -> &[Rational] {
        &self.h
    }

    pub fn isogeny(&self) -> Isogeny {
        self.isogeny
    }

    pub fn rank(&self) -> usize {
        self.h.len()
    }

    /// (positive, negative) entry counts of h.
    pub fn signature(&self) -> (usize, usize) {
        let p = self.h.iter().filter(|x| x.is_positive()).count();
        (p, self.h.len() - p)
    }

    pub fn support(&self) -> Result<BTreeSet<Place>> {
        let mut s = self.d.support()?;
        for x in &self.h {
            s.extend(primes_dividing(x)?.into_iter().map(Place::Prime));
        }
        Ok(s)
    }

    /// ℓ where D splits; ⌊ℓ/2⌋ at a ramified prime; min(r, ℓ − r) at a
    /// ramified real place, (r, ℓ − r) the signature of h.
    pub fn local_rank(&self, v: Place) -> Result<usize> {
        let l = self.rank();
        if self.d.is_split_at(v)? {
            return Ok(l);
        }
        Ok(match v {
            Place::Prime(_) => l / 2,
            Place::Real => {
                let (r, s) = self.signature();
                r.min(s)
            }
        })
    }
}

/// Either group, tagged by type in JSON.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum GroupSpec {
    B(GroupB),
    C(GroupC),
}

impl GroupSpec {
    pub fn rank(&self) -> usize {
        match self {
            GroupSpec::B(g) => g.rank(),
            GroupSpec::C(g) => g.rank(),
        }
    }
}

pub fn local_rank_b(g: &GroupB, v: Place) -> Result<usize> {
    g.local_rank(v)
}

pub fn local_rank_c(g: &GroupC, v: Place) -> Result<usize> {
    g.local_rank(v)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Split,
    Anisotropic,
    Intermediate,
}

impl Status {
    pub fn of(rank: usize, l: usize) -> Status {
        if rank == l {
            Status::Split
        } else if rank == 0 {
            Status::Anisotropic
        } else {
            Status::Intermediate
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Split => "split",
            Status::Anisotropic => "anisotropic",
            Status::Intermediate => "intermediate",
        })
    }
}

/// Ranks and statuses of two groups at one place.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalStatus<P = Place> {
    pub place: P,
    pub rank1: usize,
    pub rank2: usize,
    pub status: [Status; 2],
}

impl<P> LocalStatus<P> {
    pub fn new(place: P, rank1: usize, rank2: usize, l: usize) -> Self {
        LocalStatus {
            place,
            rank1,
            rank2,
            status: [Status::of(rank1, l), Status::of(rank2, l)],
        }
    }

    /// Both split or both anisotropic.
    pub fn matches(&self) -> bool {
        self.status[0] == self.status[1] && self.status[0] != Status::Intermediate
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwinDecision<P = Place> {
    pub twin: bool,
    pub first_failure: Option<P>,
    pub certificate: Vec<LocalStatus<P>>,
}

impl<P: Clone> TwinDecision<P> {
    fn from_certificate(certificate: Vec<LocalStatus<P>>) -> Self {
        let first_failure = certificate.iter().find(|s| !s.matches()).map(|s| s.place.clone());
        TwinDecision {
            twin: first_failure.is_none(),
            first_failure,
            certificate,
        }
    }
}

fn check_equal_rank(l1: usize, l2: usize) -> Result<usize> {
    if l1 != l2 {
        return Err(Error::RankMismatch(l1, l2));
    }
    Ok(l1)
}

/// Local status table over the joint support; outside it both groups are
/// split.
pub fn local_table(g1: &GroupB, g2: &GroupC) -> Result<Vec<LocalStatus>> {
    let l = check_equal_rank(g1.rank(), g2.rank())?;
    let mut places = g1.support()?;
    places.extend(g2.support()?);
    places
        .into_iter()
        .map(|v| Ok(LocalStatus::new(v, g1.local_rank(v)?, g2.local_rank(v)?, l)))
        .collect()
}

pub fn is_twin(g1: &GroupB, g2: &GroupC) -> Result<TwinDecision> {
    Ok(TwinDecision::from_certificate(local_table(g1, g2)?))
}

fn require_rank_at_least_3(l: usize) -> Result<()> {
    match l {
        0 | 1 => Err(Error::Invalid(format!("rank {l} is below 2"))),
        2 => Err(Error::NotApplicable(
            "rank 2: B₂ = C₂, decide with the rank-2 procedure on 5-dimensional forms".into(),
        )),
        _ => Ok(()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeakCommensurability {
    pub weakly_commensurable: bool,
    /// Places of S with the local ranks of both groups there.
    pub s_check: Vec<LocalStatus>,
    pub twins: TwinDecision,
}

/// S-arithmetic subgroups are weakly commensurable iff the groups are
/// twins (ℓ ≥ 3).
pub fn weakly_commensurable(g1: &GroupB, g2: &GroupC, s: &BTreeSet<Place>) -> Result<WeakCommensurability> {
    let l = check_equal_rank(g1.rank(), g2.rank())?;
    require_rank_at_least_3(l)?;
    if !s.contains(&Place::Real) {
        return Err(Error::Precondition("S must contain the real place".into()));
    }
    let mut s_check = Vec::new();
    for &v in s {
        let st = LocalStatus::new(v, g1.local_rank(v)?, g2.local_rank(v)?, l);
        if !v.is_real() && (st.rank1 == 0 || st.rank2 == 0) {
            return Err(Error::Precondition(format!(
                "S contains the finite place {v} where a group is anisotropic"
            )));
        }
        s_check.push(st);
    }
    let twins = is_twin(g1, g2)?;
    Ok(WeakCommensurability {
        weakly_commensurable: twins.twin,
        s_check,
        twins,
    })
}

/// Same isogeny classes of maximal tori (ℓ ≥ 3).
pub fn same_isogeny_tori(g1: &GroupB, g2: &GroupC) -> Result<bool> {
    require_rank_at_least_3(check_equal_rank(g1.rank(), g2.rank())?)?;
    Ok(is_twin(g1, g2)?.twin)
}

/// Same isomorphism classes of maximal tori (ℓ ≥ 3): twins with G1
/// adjoint and G2 simply connected.
pub fn same_isomorphism_tori(g1: &GroupB, g2: &GroupC) -> Result<bool> {
    Ok(same_isogeny_tori(g1, g2)?
        && g1.isogeny == Isogeny::Adjoint
        && g2.isogeny == Isogeny::SimplyConnected)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rank2Decision {
    /// λ with q2 ≅ λ·q1, if any.
    #[serde(with = "crate::rational::serde_str_opt")]
    pub similarity: Option<Rational>,
    pub local: Vec<LocalStatus>,
    /// SO(q1) and Spin(q2) have the same maximal tori.
    pub same_tori: bool,
}

/// SO(q1) and Spin(q2) for 5-dimensional q1, q2 have the same maximal
/// tori iff q1 ~ q2 and at every place both are split or both anisotropic.
pub fn decide_rank2(q1: &DiagForm, q2: &DiagForm) -> Result<Rank2Decision> {
    for q in [q1, q2] {
        if q.dim() != 5 {
            return Err(Error::DimensionMismatch {
                expected: 5,
                found: q.dim(),
            });
        }
    }
    let similarity = similar_odd(q1, q2)?;
    let mut places: BTreeSet<Place> = q1.support()?.into_iter().collect();
    places.extend(q2.support()?);
    let local = places
        .into_iter()
        .map(|v| {
            Ok(LocalStatus::new(
                v,
                q1.witt_index(v)?.witt_index,
                q2.witt_index(v)?.witt_index,
                2,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let same_tori = similarity.is_some() && local.iter().all(LocalStatus::matches);
    Ok(Rank2Decision {
        similarity,
        local,
        same_tori,
    })
}

/// λ = √((2n+2)/(2n−1)), kept as its radicand in lowest terms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LengthRatio {
    pub n: u64,
    #[serde(with = "serde_str")]
    pub radicand: Rational,
    pub approx: f64,
}

impl fmt::Display for LengthRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "lambda = sqrt({}) ≈ {:.4}", format_rational(&self.radicand), self.approx)
    }
}

fn is_square(n: &BigInt) -> bool {
    !n.is_negative() && {
        let r = n.sqrt();
        &r * &r == *n
    }
}

pub fn length_ratio(n: u64) -> Result<LengthRatio> {
    if n < 3 {
        return Err(Error::Invalid(format!("length ratio needs n ≥ 3, got {n}")));
    }
    let radicand = Rational::new(BigInt::from(2 * n + 2), BigInt::from(2 * n - 1));
    if is_square(radicand.numer()) && is_square(radicand.denom()) {
        return Err(Error::Inconsistency(format!(
            "radicand {} is a perfect square",
            format_rational(&radicand)
        )));
    }
    let approx = (radicand.numer().to_f64().unwrap() / radicand.denom().to_f64().unwrap()).sqrt();
    Ok(LengthRatio { n, radicand, approx })
}

// ---- abstract local data ----

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlaceKind {
    Real,
    Finite,
}

/// Local datum of the type B group: Witt index, or signature at a real
/// place; optional Hasse invariant for the product-formula check.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalB {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witt_index: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signature: Option<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hasse: Option<i8>,
}

/// Local datum of the type C group: whether D ramifies, and the signature
/// of h at a ramified real place.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalC {
    #[serde(default)]
    pub ramified: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signature: Option<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbstractPlace {
    pub name: String,
    pub kind: PlaceKind,
    #[serde(default)]
    pub b: LocalB,
    #[serde(default)]
    pub c: LocalC,
}

/// Per-place data over an arbitrary number field. Places not listed are
/// taken to be split for both groups, with trivial Hasse invariant and D
/// unramified.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbstractLocalData {
    pub rank: usize,
    pub places: Vec<AbstractPlace>,
}

impl AbstractLocalData {
    /// Product formula checks: ∏ Hasse = +1 and an even ramification set.
    pub fn check_consistency(&self) -> Result<()> {
        let hasse: i8 = self.places.iter().map(|p| p.b.hasse.unwrap_or(1)).product();
        if hasse != 1 {
            return Err(Error::InconsistentLocalData(
                "the product of the Hasse invariants is −1".into(),
            ));
        }
        let ram = self.places.iter().filter(|p| p.c.ramified).count();
        if ram % 2 != 0 {
            return Err(Error::InconsistentLocalData(format!(
                "the quaternion algebra ramifies at {ram} places, an odd number"
            )));
        }
        Ok(())
    }

    fn rank_b(&self, p: &AbstractPlace) -> Result<usize> {
        let l = self.rank;
        let bad = |m: String| Error::InconsistentLocalData(format!("{}: {m}", p.name));
        let r = match (p.b.witt_index, p.b.signature, p.kind) {
            (Some(w), _, _) => w,
            (None, Some((r, s)), PlaceKind::Real) => {
                if r + s != 2 * l + 1 {
                    return Err(bad(format!("signature ({r},{s}) does not have dimension {}", 2 * l + 1)));
                }
                r.min(s)
            }
            (None, Some(_), PlaceKind::Finite) => {
                return Err(bad("a signature is only meaningful at a real place".into()))
            }
            (None, None, _) => l,
        };
        if r > l {
            return Err(bad(format!("Witt index {r} exceeds ℓ = {l}")));
        }
        if r == 0 && p.kind == PlaceKind::Finite {
            return Err(bad("a form of dimension ≥ 5 is isotropic at a finite place".into()));
        }
        Ok(r)
    }

    fn rank_c(&self, p: &AbstractPlace) -> Result<usize> {
        let l = self.rank;
        if !p.c.ramified {
            return Ok(l);
        }
        match p.kind {
            PlaceKind::Finite => Ok(l / 2),
            PlaceKind::Real => {
                let (r, s) = p.c.signature.ok_or_else(|| {
                    Error::InconsistentLocalData(format!(
                        "{}: a ramified real place needs the signature of h",
                        p.name
                    ))
                })?;
                if r + s != l {
                    return Err(Error::InconsistentLocalData(format!(
                        "{}: signature ({r},{s}) does not have dimension {l}",
                        p.name
                    )));
                }
                Ok(r.min(s))
            }
        }
    }
}

pub fn is_twin_abstract(data: &AbstractLocalData) -> Result<TwinDecision<String>> {
    if data.rank < 2 {
        return Err(Error::Invalid(format!("rank {} is below 2", data.rank)));
    }
    data.check_consistency()?;
    let certificate = data
        .places
        .iter()
        .map(|p| Ok(LocalStatus::new(p.name.clone(), data.rank_b(p)?, data.rank_c(p)?, data.rank)))
        .collect::<Result<Vec<_>>>()?;
    Ok(TwinDecision::from_certificate(certificate))
}
