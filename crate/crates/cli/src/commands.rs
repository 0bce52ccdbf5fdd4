use std::collections::BTreeSet;
use std::fmt::Write;

use bc_tori::embed::{embeds_globally, GlobalDecision, InvolutionTarget};
use bc_tori::etale::EtaleInvolutionAlgebra;
use bc_tori::groups::{
    decide_rank2, is_twin, length_ratio, weakly_commensurable, GroupB, GroupC, LocalStatus, TwinDecision,
};
use bc_tori::lattice;
use bc_tori::local::Place;
use bc_tori::qforms::{DiagForm, FormInvariants, WittIndex, WittProfile};
use bc_tori::rational::format_rational;
use bc_tori::real_tori::{classify_rank, lattice_type, RealFormSpec, TorusReport, TorusType};
use serde::Serialize;

use crate::args::{Cli, Command, ToriCommand};
use crate::input::load;
use crate::report::{CliError, Report, Verdict};

type Out = Result<Report, CliError>;

pub fn run(cli: &Cli) -> Out {
    match &cli.command {
        Command::Invariants { form } => invariants(&load(form)?),
        Command::Witt { form, place } => witt(&load(form)?, place),
        Command::Twin { g1, g2 } => twin(&load(g1)?, &load(g2)?),
        Command::Wc { g1, g2, s } => wc(&load(g1)?, &load(g2)?, s),
        Command::Tori { command } => match command {
            ToriCommand::Enumerate { form } => tori_enumerate(form),
            ToriCommand::Compare { f1, f2 } => tori_compare(f1, f2),
            ToriCommand::Classify { rank } => tori_classify(*rank),
        },
        Command::Embed { algebra, target } => embed(&load(algebra)?, &load(target)?, cli.seed),
        Command::Rank2 { q1, q2 } => rank2(&load(q1)?, &load(q2)?),
        Command::Ratio { n } => ratio(*n),
        Command::LatticeType { matrix } => lattice(&load::<Vec<Vec<i64>>>(matrix)?),
    }
}

fn sign(x: i8) -> &'static str {
    if x > 0 {
        "+1"
    } else {
        "-1"
    }
}

#[derive(Serialize)]
struct InvariantsReport {
    form: DiagForm,
    invariants: FormInvariants,
    witt_index: usize,
    witt_profile: WittProfile,
}

fn invariants(q: &DiagForm) -> Out {
    let r = InvariantsReport {
        form: q.clone(),
        invariants: q.invariants()?,
        witt_index: q.global_witt_index()?,
        witt_profile: q.witt_profile()?,
    };
    let mut t = String::new();
    let inv = &r.invariants;
    writeln!(t, "form       {}", r.form).unwrap();
    writeln!(t, "dim        {}", inv.dim).unwrap();
    writeln!(t, "det        {}", inv.det).unwrap();
    writeln!(t, "signature  ({}, {})", inv.signature.0, inv.signature.1).unwrap();
    for (v, e) in &inv.hasse {
        let w = r.witt_profile[v];
        writeln!(t, "place {v:<5}  hasse {}  witt index {}", sign(*e), w.witt_index).unwrap();
    }
    writeln!(t, "witt index over Q  {}", r.witt_index).unwrap();
    Ok(Report::new(&r, t, Verdict::Info))
}

#[derive(Serialize)]
struct WittReport {
    place: Place,
    #[serde(flatten)]
    index: WittIndex,
}

fn witt(q: &DiagForm, place: &str) -> Out {
    let place: Place = place.parse()?;
    let index = q.witt_index(place)?;
    let t = format!(
        "witt index {} at {place} (anisotropic part of dimension {})",
        index.witt_index, index.anisotropic_dim
    );
    Ok(Report::new(&WittReport { place, index }, t, Verdict::Info))
}

/// A twin decision whose first failure is the full local record.
#[derive(Serialize)]
struct TwinView<'a> {
    twin: bool,
    first_failure: Option<&'a LocalStatus>,
    certificate: &'a [LocalStatus],
}

impl<'a> TwinView<'a> {
    fn new(d: &'a TwinDecision) -> Self {
        TwinView {
            twin: d.twin,
            first_failure: d.certificate.iter().find(|s| !s.matches()),
            certificate: &d.certificate,
        }
    }
}

fn render_table(t: &mut String, rows: &[LocalStatus]) {
    writeln!(t, "place  rank(G1)  rank(G2)  status").unwrap();
    for s in rows {
        writeln!(
            t,
            "{:<6} {:>8}  {:>8}  {} / {}{}",
            s.place.to_string(),
            s.rank1,
            s.rank2,
            s.status[0],
            s.status[1],
            if s.matches() { "" } else { "  <- mismatch" }
        )
        .unwrap();
    }
}

fn twin(g1: &GroupB, g2: &GroupC) -> Out {
    let d = is_twin(g1, g2)?;
    let mut t = String::new();
    match d.first_failure {
        Some(v) => writeln!(t, "not twins: first failing place {v}").unwrap(),
        None => writeln!(t, "twins").unwrap(),
    }
    render_table(&mut t, &d.certificate);
    Ok(Report::new(&TwinView::new(&d), t, Verdict::of(d.twin)))
}

fn parse_places(s: &str) -> Result<BTreeSet<Place>, CliError> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| x.parse::<Place>().map_err(CliError::from))
        .collect()
}

#[derive(Serialize)]
struct WcView<'a> {
    weakly_commensurable: bool,
    s: &'a BTreeSet<Place>,
    s_check: &'a [LocalStatus],
    twins: TwinView<'a>,
}

fn wc(g1: &GroupB, g2: &GroupC, s: &str) -> Out {
    let s = parse_places(s)?;
    let w = weakly_commensurable(g1, g2, &s)?;
    let mut t = String::new();
    writeln!(
        t,
        "{}weakly commensurable",
        if w.weakly_commensurable { "" } else { "not " }
    )
    .unwrap();
    render_table(&mut t, &w.twins.certificate);
    let view = WcView {
        weakly_commensurable: w.weakly_commensurable,
        s: &s,
        s_check: &w.s_check,
        twins: TwinView::new(&w.twins),
    };
    Ok(Report::new(&view, t, Verdict::of(w.weakly_commensurable)))
}

fn types_text(types: &[TorusType]) -> String {
    let parts: Vec<String> = types
        .iter()
        .map(|x| format!("[{},{},{}]", x.alpha, x.beta, x.gamma))
        .collect();
    format!("[{}]", parts.join(","))
}

fn tori_enumerate(form: &str) -> Out {
    let r = TorusReport::new(form.parse::<RealFormSpec>()?);
    let t = types_text(&r.tori);
    Ok(Report::new(&r, t, Verdict::Info))
}

#[derive(Serialize)]
struct CompareReport {
    same_tori: bool,
    first: TorusReport,
    second: TorusReport,
}

fn tori_compare(f1: &str, f2: &str) -> Out {
    let (a, b): (RealFormSpec, RealFormSpec) = (f1.parse()?, f2.parse()?);
    if a.rank() != b.rank() {
        return Err(bc_tori::Error::RankMismatch(a.rank(), b.rank()).into());
    }
    let r = CompareReport {
        same_tori: a.torus_types() == b.torus_types(),
        first: TorusReport::new(a),
        second: TorusReport::new(b),
    };
    let t = format!(
        "{}\n{a}: {}\n{b}: {}",
        if r.same_tori { "same maximal tori" } else { "different maximal tori" },
        types_text(&r.first.tori),
        types_text(&r.second.tori)
    );
    Ok(Report::new(&r, t, Verdict::of(r.same_tori)))
}

/// SO(p, 2ℓ+1−p) for p ≤ ℓ, then Sp(p, ℓ−p) for p ≤ ℓ/2, then SplitC(ℓ).
pub fn real_forms_of_rank(l: usize) -> Result<Vec<RealFormSpec>, CliError> {
    let mut forms = Vec::new();
    for p in 0..=l {
        forms.push(RealFormSpec::so(p, 2 * l + 1 - p)?);
    }
    for p in 0..=l / 2 {
        forms.push(RealFormSpec::sp(p, l - p)?);
    }
    forms.push(RealFormSpec::split_c(l)?);
    Ok(forms)
}

#[derive(Serialize)]
struct ClassReport {
    forms: Vec<RealFormSpec>,
    tori: Vec<TorusType>,
}

fn tori_classify(l: usize) -> Out {
    let classes = classify_rank(&real_forms_of_rank(l)?)?;
    let r: Vec<ClassReport> = classes
        .into_iter()
        .map(|forms| ClassReport {
            tori: forms[0].torus_types().into_iter().collect(),
            forms,
        })
        .collect();
    let mut t = String::new();
    for c in &r {
        let names: Vec<String> = c.forms.iter().map(ToString::to_string).collect();
        writeln!(t, "{}: {}", names.join(" ~ "), types_text(&c.tori)).unwrap();
    }
    Ok(Report::new(&r, t, Verdict::Info))
}

fn embed(alg: &EtaleInvolutionAlgebra, target: &InvolutionTarget, seed: u64) -> Out {
    let d = embeds_globally(alg, target, seed)?;
    let mut t = String::new();
    let verdict = match &d {
        GlobalDecision::Embeds { reason, certificate, .. } => {
            writeln!(t, "embeds: {reason}").unwrap();
            if let Some(c) = certificate {
                writeln!(t, "construction {:?}", c.construction).unwrap();
                if let Some(mu) = &c.scalar {
                    writeln!(t, "scalar {}", format_rational(mu)).unwrap();
                }
                if let Some(f) = &c.constructed_form {
                    writeln!(t, "constructed form {f}").unwrap();
                }
                writeln!(t, "isotropic subspace of dimension {}", c.isotropic_basis.len()).unwrap();
            }
            Verdict::Yes
        }
        GlobalDecision::DoesNotEmbed { place, reason, .. } => {
            match place {
                Some(v) => writeln!(t, "does not embed at {v}: {reason}").unwrap(),
                None => writeln!(t, "does not embed: {reason}").unwrap(),
            }
            Verdict::No
        }
        GlobalDecision::NotApplicable { reason } => {
            writeln!(t, "not applicable: {reason}").unwrap();
            Verdict::NotApplicable
        }
    };
    Ok(Report::new(&d, t, verdict))
}

fn rank2(q1: &DiagForm, q2: &DiagForm) -> Out {
    let d = decide_rank2(q1, q2)?;
    let mut t = String::new();
    writeln!(t, "{}", if d.same_tori { "same maximal tori" } else { "different maximal tori" }).unwrap();
    match &d.similarity {
        Some(l) => writeln!(t, "q1 ~ {} * q2", format_rational(l)).unwrap(),
        None => writeln!(t, "q1 and q2 are not similar").unwrap(),
    }
    render_table(&mut t, &d.local);
    Ok(Report::new(&d, t, Verdict::of(d.same_tori)))
}

fn ratio(n: u64) -> Out {
    let r = length_ratio(n)?;
    Ok(Report::new(&r, r.to_string(), Verdict::Info))
}

fn lattice(m: &[Vec<i64>]) -> Out {
    let ty = lattice_type(&lattice::from_i64(m))?;
    let t = format!("(alpha, beta, gamma) = ({}, {}, {})", ty.alpha, ty.beta, ty.gamma);
    Ok(Report::new(&ty, t, Verdict::Info))
}
