//! Maximal ℝ-tori of SO(r, n−r) and Sp(r, ℓ−r).
//!
//! A real torus is ℝ-isomorphic to GL₁^α × (R¹_{ℂ/ℝ} GL₁)^β × (R_{ℂ/ℝ} GL₁)^γ
//! for unique (α, β, γ). Type sets are kept sorted by (γ, α, β).

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{self, IntMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "[usize; 3]", into = "[usize; 3]")]
pub struct TorusType {
    pub alpha: usize,
    pub beta: usize,
    pub gamma: usize,
}

impl TorusType {
    pub fn new(alpha: usize, beta: usize, gamma: usize) -> TorusType {
        TorusType { alpha, beta, gamma }
    }

    pub fn rank(&self) -> usize {
        self.alpha + self.beta + 2 * self.gamma
    }

    pub fn add(&self, o: &TorusType) -> TorusType {
        TorusType::new(self.alpha + o.alpha, self.beta + o.beta, self.gamma + o.gamma)
    }

    fn key(&self) -> (usize, usize, usize) {
        (self.gamma, self.alpha, self.beta)
    }
}

impl Ord for TorusType {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.key().cmp(&o.key())
    }
}

impl PartialOrd for TorusType {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}

impl From<[usize; 3]> for TorusType {
    fn from(a: [usize; 3]) -> Self {
        TorusType::new(a[0], a[1], a[2])
    }
}

impl From<TorusType> for [usize; 3] {
    fn from(t: TorusType) -> Self {
        [t.alpha, t.beta, t.gamma]
    }
}

impl fmt::Display for TorusType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.alpha, self.beta, self.gamma)
    }
}

pub type TorusSet = BTreeSet<TorusType>;

/// SO(p, q) with p + q = 2ℓ + 1; Sp(p, q) with p + q = ℓ; split Sp_{2ℓ}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RealFormSpec {
    SO { p: usize, q: usize },
    Sp { p: usize, q: usize },
    SplitC { l: usize },
}

impl RealFormSpec {
    pub fn so(p: usize, q: usize) -> Result<Self> {
        let f = RealFormSpec::SO { p, q };
        f.validate()?;
        Ok(f)
    }

    pub fn sp(p: usize, q: usize) -> Result<Self> {
        let f = RealFormSpec::Sp { p, q };
        f.validate()?;
        Ok(f)
    }

    pub fn split_c(l: usize) -> Result<Self> {
        let f = RealFormSpec::SplitC { l };
        f.validate()?;
        Ok(f)
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            RealFormSpec::SO { p, q } => (p + q) % 2 == 1 && p + q >= 5,
            RealFormSpec::Sp { p, q } => p + q >= 2,
            RealFormSpec::SplitC { l } => l >= 2,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Invalid(format!("{self} is not a form of type B_ℓ or C_ℓ with ℓ ≥ 2")))
        }
    }

    pub fn rank(&self) -> usize {
        match *self {
            RealFormSpec::SO { p, q } => (p + q - 1) / 2,
            RealFormSpec::Sp { p, q } => p + q,
            RealFormSpec::SplitC { l } => l,
        }
    }

    pub fn is_type_b(&self) -> bool {
        matches!(self, RealFormSpec::SO { .. })
    }

    /// Real rank zero: SO(0, n), SO(n, 0), Sp(0, ℓ), Sp(ℓ, 0).
    pub fn is_anisotropic(&self) -> bool {
        match *self {
            RealFormSpec::SO { p, q } | RealFormSpec::Sp { p, q } => p == 0 || q == 0,
            RealFormSpec::SplitC { .. } => false,
        }
    }

    pub fn is_split(&self) -> bool {
        match *self {
            RealFormSpec::SO { p, q } => p.min(q) == self.rank(),
            RealFormSpec::Sp { .. } => false,
            RealFormSpec::SplitC { .. } => true,
        }
    }

    pub fn torus_types(&self) -> TorusSet {
        match *self {
            RealFormSpec::SO { p, q } => types_b(self.rank(), p.min(q)),
            RealFormSpec::Sp { p, q } => types_c(self.rank(), p.min(q)),
            RealFormSpec::SplitC { l } => types_b(l, l),
        }
    }
}

impl fmt::Display for RealFormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            RealFormSpec::SO { p, q } => write!(f, "SO({p},{q})"),
            RealFormSpec::Sp { p, q } => write!(f, "Sp({p},{q})"),
            RealFormSpec::SplitC { l } => write!(f, "SplitC({l})"),
        }
    }
}

impl FromStr for RealFormSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse {
            what: "real form",
            input: s.to_string(),
        };
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let open = t.find('(').ok_or_else(bad)?;
        let args = t[open..]
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(bad)?;
        let nums = args
            .split(',')
            .map(|x| x.parse::<usize>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        match (&t[..open], nums.as_slice()) {
            ("SO", [p, q]) => RealFormSpec::so(*p, *q),
            ("Sp", [p, q]) => RealFormSpec::sp(*p, *q),
            ("SplitC", [l]) => RealFormSpec::split_c(*l),
            _ => Err(bad()),
        }
    }
}

impl Serialize for RealFormSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for RealFormSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// α + β + 2γ = ℓ with α + 2γ ≤ s.
fn types_b(l: usize, s: usize) -> TorusSet {
    let mut out = TorusSet::new();
    for gamma in 0..=l / 2 {
        for alpha in 0..=l - 2 * gamma {
            if alpha + 2 * gamma <= s {
                out.insert(TorusType::new(alpha, l - alpha - 2 * gamma, gamma));
            }
        }
    }
    out
}

/// α = 0, β + 2γ = ℓ with γ ≤ s.
fn types_c(l: usize, s: usize) -> TorusSet {
    (0..=(l / 2).min(s))
        .map(|gamma| TorusType::new(0, l - 2 * gamma, gamma))
        .collect()
}

/// Maximal-torus types of SO(r, n − r), n odd.
pub fn torus_types_b(r: usize, n: usize) -> Result<TorusSet> {
    if r > n {
        return Err(Error::Invalid(format!("r = {r} exceeds n = {n}")));
    }
    Ok(RealFormSpec::so(r, n - r)?.torus_types())
}

/// Maximal-torus types of Sp(r, ℓ − r).
pub fn torus_types_c(r: usize, l: usize) -> Result<TorusSet> {
    if r > l {
        return Err(Error::Invalid(format!("r = {r} exceeds ℓ = {l}")));
    }
    Ok(RealFormSpec::sp(r, l - r)?.torus_types())
}

/// Maximal-torus types of the split group Sp_{2ℓ}(ℝ).
pub fn torus_types_split_c(l: usize) -> Result<TorusSet> {
    Ok(RealFormSpec::split_c(l)?.torus_types())
}

/// Same maximal tori for a type B and a type C real form of equal rank,
/// decided by comparing type sets and cross-checked against the criterion
/// "both split or both anisotropic".
pub fn same_tori_real(b: &RealFormSpec, c: &RealFormSpec) -> Result<bool> {
    if !b.is_type_b() || c.is_type_b() {
        return Err(Error::Invalid(format!("expected a type B and a type C form, got {b}, {c}")));
    }
    if b.rank() != c.rank() {
        return Err(Error::RankMismatch(b.rank(), c.rank()));
    }
    let by_sets = b.torus_types() == c.torus_types();
    let by_shape = (b.is_split() && c.is_split()) || (b.is_anisotropic() && c.is_anisotropic());
    if by_sets != by_shape {
        return Err(Error::Inconsistency(format!(
            "type sets and split/anisotropic shape disagree for {b}, {c}"
        )));
    }
    Ok(by_sets)
}

/// Partition by equality of torus type sets, in order of first appearance.
pub fn classify_rank(forms: &[RealFormSpec]) -> Result<Vec<Vec<RealFormSpec>>> {
    if let Some(f) = forms.first() {
        if let Some(g) = forms.iter().find(|g| g.rank() != f.rank()) {
            return Err(Error::RankMismatch(f.rank(), g.rank()));
        }
    }
    let mut classes: Vec<(TorusSet, Vec<RealFormSpec>)> = Vec::new();
    for f in forms {
        let t = f.torus_types();
        match classes.iter_mut().find(|(s, _)| *s == t) {
            Some((_, c)) => c.push(*f),
            None => classes.push((t, vec![*f])),
        }
    }
    Ok(classes.into_iter().map(|(_, c)| c).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusReport {
    pub form: RealFormSpec,
    pub tori: Vec<TorusType>,
}

impl TorusReport {
    pub fn new(form: RealFormSpec) -> TorusReport {
        TorusReport {
            form,
            tori: form.torus_types().into_iter().collect(),
        }
    }
}

fn is_involution(m: &IntMatrix) -> bool {
    let n = m.len();
    m.iter().all(|r| r.len() == n) && lattice::mul(m, m) == lattice::identity(n)
}

/// (α, β, γ) of the real torus whose character lattice ℤ^n carries complex
/// conjugation M. γ = dim_𝔽₂ ℤ^n/(L⁺ + L⁻) for the eigenlattices L^±.
pub fn lattice_type(m: &IntMatrix) -> Result<TorusType> {
    if !is_involution(m) {
        return Err(Error::Invalid("matrix is not an integral involution".into()));
    }
    let n = m.len();
    let shifted = |s: i64| -> IntMatrix {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let d = if i == j { BigInt::from(s) } else { BigInt::zero() };
                        &m[i][j] - d
                    })
                    .collect()
            })
            .collect()
    };
    let plus = lattice::integer_kernel(&shifted(1), n);
    let minus = lattice::integer_kernel(&shifted(-1), n);
    let basis: IntMatrix = (0..n)
        .map(|i| plus.iter().chain(&minus).map(|v| v[i].clone()).collect())
        .collect();
    let inv = lattice::smith_invariants(&basis);
    if inv.len() != n || inv.iter().any(|d| !d.is_one() && *d != BigInt::from(2)) {
        return Err(Error::Inconsistency("eigenlattices have unexpected index".into()));
    }
    let gamma = inv.iter().filter(|d| !d.is_one()).count();
    Ok(TorusType::new(plus.len() - gamma, minus.len() - gamma, gamma))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::from_i64;

    fn set(v: &[[usize; 3]]) -> TorusSet {
        v.iter().map(|&a| a.into()).collect()
    }

    #[test]
    fn type_b_examples() {
        assert_eq!(torus_types_b(0, 7).unwrap(), set(&[[0, 3, 0]]));
        assert_eq!(torus_types_b(1, 7).unwrap(), set(&[[0, 3, 0], [1, 2, 0]]));
        assert_eq!(torus_types_b(4, 7).unwrap().len(), 6);
        assert!(torus_types_b(8, 7).is_err());
        assert!(torus_types_b(1, 6).is_err());
    }

    #[test]
    fn type_c_examples() {
        assert_eq!(torus_types_c(0, 3).unwrap(), set(&[[0, 3, 0]]));
        assert_eq!(torus_types_c(1, 3).unwrap(), set(&[[0, 3, 0], [0, 1, 1]]));
        assert_eq!(torus_types_split_c(3).unwrap(), torus_types_b(4, 7).unwrap());
    }

    #[test]
    fn same_tori_examples() {
        let f = |s: &str| s.parse::<RealFormSpec>().unwrap();
        assert!(same_tori_real(&f("SO(0,7)"), &f("Sp(0,3)")).unwrap());
        assert!(same_tori_real(&f("SO(4,3)"), &f("SplitC(3)")).unwrap());
        assert!(!same_tori_real(&f("SO(2,5)"), &f("Sp(1,2)")).unwrap());
        assert!(same_tori_real(&f("SO(2,5)"), &f("Sp(1,1)")).is_err());
    }

    #[test]
    fn exhaustive_dichotomy() {
        for l in 2..=8 {
            let n = 2 * l + 1;
            for r in 0..=n {
                let b = RealFormSpec::so(r, n - r).unwrap();
                let mut cs: Vec<RealFormSpec> =
                    (0..=l).map(|p| RealFormSpec::sp(p, l - p).unwrap()).collect();
                cs.push(RealFormSpec::split_c(l).unwrap());
                for c in &cs {
                    same_tori_real(&b, c).unwrap();
                }
            }
        }
    }

    #[test]
    fn report_json() {
        let r = TorusReport::new("SO(2,5)".parse().unwrap());
        assert_eq!(
            serde_json::to_string(&r).unwrap(),
            r#"{"form":"SO(2,5)","tori":[[0,3,0],[1,2,0],[2,1,0],[0,1,1]]}"#
        );
    }

    #[test]
    fn classify_examples() {
        let forms: Vec<RealFormSpec> = ["SO(0,7)", "SO(1,6)", "SO(2,5)", "SO(3,4)", "Sp(0,3)", "Sp(1,2)", "SplitC(3)"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        let classes = classify_rank(&forms).unwrap();
        let names: Vec<Vec<String>> = classes
            .iter()
            .map(|c| c.iter().map(ToString::to_string).collect())
            .collect();
        assert_eq!(
            names,
            vec![
                vec!["SO(0,7)", "Sp(0,3)"],
                vec!["SO(1,6)"],
                vec!["SO(2,5)"],
                vec!["SO(3,4)", "SplitC(3)"],
                vec!["Sp(1,2)"],
            ]
        );
        let two: Vec<RealFormSpec> = vec!["SO(0,5)".parse().unwrap(), "Sp(2,0)".parse().unwrap()];
        assert_eq!(classify_rank(&two).unwrap().len(), 1);
        assert_eq!(classify_rank(&forms[2..3]).unwrap().len(), 1);
    }

    #[test]
    fn lattice_examples() {
        assert_eq!(lattice_type(&from_i64(&[vec![1, 0], vec![0, 1]])).unwrap(), TorusType::new(2, 0, 0));
        assert_eq!(lattice_type(&from_i64(&[vec![0, 1], vec![1, 0]])).unwrap(), TorusType::new(0, 0, 1));
        assert_eq!(lattice_type(&from_i64(&[vec![-1, 0], vec![0, -1]])).unwrap(), TorusType::new(0, 2, 0));
        assert!(lattice_type(&from_i64(&[vec![1, 1], vec![0, 1]])).is_err());
    }
}
