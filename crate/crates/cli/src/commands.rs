//! The commands behind the `morita` binary. Each returns a JSON document
//! whose bytes depend only on the input.

use std::path::Path;
use std::sync::Arc;

use morita_core::bimod::{hom_into_left, hom_into_right, relative_tensor, Side};
use morita_core::diagram::{
    left_adjoint_word, normalize, rewrite_trace, right_adjoint_word, straighten, zigzag_check, Generator, Letter,
    Rule, StripWord,
};
use morita_core::dict::{
    algebra_from_fa, bimodule_from_fa, composition_agreement, fa_from_algebra, fa_from_pointed_bimodule,
    geometric_compose,
};
use morita_core::morita::{
    dual_data, is_fgp, left_adjoint, right_adjoint, two_dualizability_report, verify_snake, verify_zigzag,
};
use morita_core::pointed::{only_unit_dualizable, UnitVerdict};
use morita_core::{corpus, q, QAlgebra, QBimodule, Rational};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::format::{
    find_sig, load_algebra_file, load_any, load_bimodule, load_diagram, matrix_rows, rats, AlgebraFile, AnyInput,
    BimoduleFile, LetterSpec, SCHEMA,
};
use crate::{CliError, Outcome, Status};

fn emit<T: Serialize>(doc: &T, status: Status) -> Result<Outcome, CliError> {
    let mut json = serde_json::to_string_pretty(doc).map_err(|e| CliError::Consistency(e.to_string()))?;
    json.push('\n');
    Ok(Outcome { json, status })
}

fn status_of(consistent: bool) -> Status {
    if consistent {
        Status::Success
    } else {
        Status::Inconsistent
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Check {
    pub name: String,
    pub holds: bool,
}

fn check(name: &str, holds: bool) -> Check {
    Check {
        name: name.to_string(),
        holds,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Shape {
    pub left_dim: usize,
    pub right_dim: usize,
    pub dim: usize,
}

fn shape(m: &QBimodule) -> Shape {
    Shape {
        left_dim: m.left_algebra().dim(),
        right_dim: m.right_algebra().dim(),
        dim: m.dim(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DualSummary {
    pub dual_dim: usize,
    pub ev: Shape,
    pub coev: Shape,
    pub snake_object_side: bool,
    pub snake_dual_side: bool,
}

/// Finite generation and projectivity of a duality bimodule over each of its
/// algebras.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FgpVerdicts {
    pub ev_over_left: bool,
    pub ev_over_right: bool,
    pub coev_over_left: bool,
    pub coev_over_right: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdjointVerdicts {
    pub ev_right: bool,
    pub ev_left: bool,
    pub coev_right: bool,
    pub coev_left: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointedSummary {
    pub verdict: String,
    pub trace: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportDoc {
    pub schema: u32,
    pub command: String,
    pub name: String,
    pub dim: usize,
    pub commutative: bool,
    pub dual: DualSummary,
    pub snake: bool,
    pub separable: bool,
    pub separability_idempotent: Option<Vec<String>>,
    pub fgp: FgpVerdicts,
    pub adjoints: AdjointVerdicts,
    pub fully_2_dualizable: bool,
    pub routes_agree: bool,
    pub pointed: PointedSummary,
    pub center_dim: usize,
    pub hh0_dim: usize,
    pub checks: Vec<Check>,
    pub consistent: bool,
}

pub const UNIT_VERDICT: &str = "A ≅ 𝟙";
pub const IMPOSSIBLE_VERDICT: &str = "impossible";

pub fn report_algebra(name: &str, a: &QAlgebra) -> ReportDoc {
    let a = Arc::new(a.clone());
    let d = dual_data(&a);
    let snake = verify_snake(&d);
    let two = two_dualizability_report(&a);
    let fgp = FgpVerdicts {
        ev_over_left: is_fgp(&d.ev, Side::Left).is_some(),
        ev_over_right: is_fgp(&d.ev, Side::Right).is_some(),
        coev_over_left: is_fgp(&d.coev, Side::Left).is_some(),
        coev_over_right: is_fgp(&d.coev, Side::Right).is_some(),
    };
    let adjoints = AdjointVerdicts {
        ev_right: two.ev_right_adjoint,
        ev_left: two.ev_left_adjoint,
        coev_right: two.coev_right_adjoint,
        coev_left: two.coev_left_adjoint,
    };
    let unit = only_unit_dualizable(&a);
    let idempotent = a.separability_idempotent().map(|e| rats(&e.coords));
    let (center_dim, hh0_dim) = (a.center().dim(), a.hh0().dim());
    let commutative = a.is_commutative();
    let checks = vec![
        check("snake identities hold", snake.holds()),
        check("adjoint and separability routes agree", two.routes_agree),
        check("right adjoint of ev iff ev is fgp over its left algebra", adjoints.ev_right == fgp.ev_over_left),
        check("left adjoint of ev iff ev is fgp over its right algebra", adjoints.ev_left == fgp.ev_over_right),
        check("right adjoint of coev iff coev is fgp over its left algebra", adjoints.coev_right == fgp.coev_over_left),
        check("left adjoint of coev iff coev is fgp over its right algebra", adjoints.coev_left == fgp.coev_over_right),
        check(
            "pointed verdict is the unit exactly in dimension one",
            (unit.verdict == UnitVerdict::Unit) == (a.dim() == 1),
        ),
        check(
            "center and HH0 are the whole algebra when commutative",
            !commutative || (center_dim == a.dim() && hh0_dim == a.dim()),
        ),
    ];
    let consistent = checks.iter().all(|c| c.holds);
    ReportDoc {
        schema: SCHEMA,
        command: "report".into(),
        name: name.to_string(),
        dim: a.dim(),
        commutative,
        dual: DualSummary {
            dual_dim: d.dual.dim(),
            ev: shape(&d.ev),
            coev: shape(&d.coev),
            snake_object_side: snake.object_side.holds,
            snake_dual_side: snake.dual_side.holds,
        },
        snake: snake.holds(),
        separable: two.separable,
        separability_idempotent: idempotent,
        fgp,
        adjoints,
        fully_2_dualizable: two.fully_2_dualizable,
        routes_agree: two.routes_agree,
        pointed: PointedSummary {
            verdict: match unit.verdict {
                UnitVerdict::Unit => UNIT_VERDICT,
                UnitVerdict::Impossible => IMPOSSIBLE_VERDICT,
            }
            .to_string(),
            trace: unit.trace,
        },
        center_dim,
        hh0_dim,
        checks,
        consistent,
    }
}

pub fn cmd_report(path: &Path) -> Result<Outcome, CliError> {
    let file = load_algebra_file(path)?;
    let a = file.to_algebra()?;
    let doc = report_algebra(&file.name, &a);
    emit(&doc, status_of(doc.consistent))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum AdjointSide {
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdjunctionDoc {
    /// The adjoint bimodule.
    pub adjoint: BimoduleFile,
    /// `left ⊣ right`, composites read left to right.
    pub left: BimoduleFile,
    pub right: BimoduleFile,
    pub unit: Vec<Vec<String>>,
    pub counit: Vec<Vec<String>>,
    pub zigzag_left: bool,
    pub zigzag_right: bool,
}

/// Sizes of the dual-basis system that has no solution.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    pub acting_algebra_dim: usize,
    pub module_dim: usize,
    pub hom_dim: usize,
    pub unknowns: usize,
    pub equations: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdjointDoc {
    pub schema: u32,
    pub command: String,
    pub name: String,
    pub side: AdjointSide,
    pub verdict: String,
    pub adjunction: Option<AdjunctionDoc>,
    pub certificate: Option<Certificate>,
    pub consistent: bool,
}

pub fn adjoint_of(name: &str, m: &QBimodule, side: AdjointSide) -> AdjointDoc {
    // The right adjoint needs M projective over its left algebra.
    let (found, acting) = match side {
        AdjointSide::Right => (right_adjoint(m), Side::Left),
        AdjointSide::Left => (left_adjoint(m), Side::Right),
    };
    let fgp = is_fgp(m, acting).is_some();
    let (verdict, adjunction, certificate, consistent) = match found {
        Some(a) => {
            let z = verify_zigzag(&a);
            let adjoint = match side {
                AdjointSide::Right => &a.left,
                AdjointSide::Left => &a.right,
            };
            let doc = AdjunctionDoc {
                adjoint: BimoduleFile::from_bimodule(&format!("{name}.adjoint"), adjoint),
                left: BimoduleFile::from_bimodule(&format!("{name}.L"), &a.left),
                right: BimoduleFile::from_bimodule(&format!("{name}.R"), &a.right),
                unit: matrix_rows(&a.unit.matrix),
                counit: matrix_rows(&a.counit.matrix),
                zigzag_left: z.left_holds(),
                zigzag_right: z.right_holds(),
            };
            ("adjoint", Some(doc), None, z.holds() && fgp)
        }
        None => {
            let hom = match acting {
                Side::Left => hom_into_left(m),
                Side::Right => hom_into_right(m),
            };
            let cert = Certificate {
                acting_algebra_dim: m.algebra(acting).dim(),
                module_dim: m.dim(),
                hom_dim: hom.maps.len(),
                unknowns: m.dim() * hom.maps.len(),
                equations: m.dim() * m.dim(),
            };
            ("none", None, Some(cert), !fgp)
        }
    };
    AdjointDoc {
        schema: SCHEMA,
        command: "adjoint".into(),
        name: name.to_string(),
        side,
        verdict: verdict.into(),
        adjunction,
        certificate,
        consistent,
    }
}

pub fn cmd_adjoint(path: &Path, side: AdjointSide) -> Result<Outcome, CliError> {
    let (name, m) = load_bimodule(path)?;
    let doc = adjoint_of(&name, &m, side);
    let status = match (doc.consistent, doc.adjunction.is_some()) {
        (false, _) => Status::Inconsistent,
        (true, true) => Status::Success,
        (true, false) => Status::Negative,
    };
    emit(&doc, status)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ComposeMode {
    Algebraic,
    Geometric,
    Both,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompositeDoc {
    pub shape: Shape,
    pub composite: BimoduleFile,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgreementDoc {
    pub holds: bool,
    /// Pointed isomorphism from the geometric to the algebraic composite.
    pub witness: Option<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComposeDoc {
    pub schema: u32,
    pub command: String,
    pub mode: ComposeMode,
    pub first: String,
    pub second: String,
    pub algebraic: Option<CompositeDoc>,
    pub geometric: Option<CompositeDoc>,
    pub agreement: Option<AgreementDoc>,
}

fn composite_doc(name: &str, m: &QBimodule) -> CompositeDoc {
    CompositeDoc {
        shape: shape(m),
        composite: BimoduleFile::from_bimodule(name, m),
    }
}

pub fn compose(first: (&str, &QBimodule), second: (&str, &QBimodule), mode: ComposeMode) -> Result<ComposeDoc, CliError> {
    let name = format!("{} ⊗ {}", first.0, second.0);
    let (m, n) = (first.1, second.1);
    let mut doc = ComposeDoc {
        schema: SCHEMA,
        command: "compose".into(),
        mode,
        first: first.0.to_string(),
        second: second.0.to_string(),
        algebraic: None,
        geometric: None,
        agreement: None,
    };
    match mode {
        ComposeMode::Algebraic => {
            doc.algebraic = Some(composite_doc(&name, &relative_tensor(m, n)?.bimodule));
        }
        ComposeMode::Geometric => {
            let half = q(1, 2);
            let g = geometric_compose(&fa_from_pointed_bimodule(m, &half)?, &fa_from_pointed_bimodule(n, &half)?)?;
            doc.geometric = Some(composite_doc(&name, &bimodule_from_fa(&g)?));
        }
        ComposeMode::Both => {
            let a = composition_agreement(m, n)?;
            doc.algebraic = Some(composite_doc(&name, &a.algebraic));
            doc.geometric = Some(composite_doc(&name, &a.geometric));
            doc.agreement = Some(AgreementDoc {
                holds: a.holds(),
                witness: a.witness.as_ref().map(|w| matrix_rows(&w.matrix)),
            });
        }
    }
    Ok(doc)
}

pub fn cmd_compose(first: &Path, second: &Path, mode: ComposeMode) -> Result<Outcome, CliError> {
    let (a, m) = load_bimodule(first)?;
    let (b, n) = load_bimodule(second)?;
    let doc = compose((&a, &m), (&b, &n), mode)?;
    let ok = doc.agreement.as_ref().is_none_or(|a| a.holds);
    emit(&doc, status_of(ok))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepDoc {
    pub rule: String,
    pub position: usize,
    pub result: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZigzagDoc {
    pub word: String,
    pub left_adjoint: Option<String>,
    pub left_holds: Option<bool>,
    pub right_adjoint: Option<String>,
    pub right_holds: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramDoc {
    pub schema: u32,
    pub command: String,
    pub name: String,
    pub input: String,
    pub winding: i32,
    pub trace: Vec<StepDoc>,
    /// Normal form under the twist and fold-snake moves alone.
    pub one_cell_normal_form: String,
    pub normal_form: String,
    pub normal_form_letters: Vec<LetterSpec>,
    pub zigzags: Vec<ZigzagDoc>,
    pub consistent: bool,
}

fn zigzag_doc(w: &StripWord) -> ZigzagDoc {
    let run = |pkg: morita_core::Result<morita_core::diagram::AdjointPackage>| match pkg {
        Ok(p) => {
            let holds = zigzag_check(w, &p).map(|z| z.holds).unwrap_or(false);
            (Some(p.adjoint.to_string()), Some(holds))
        }
        Err(_) => (None, None),
    };
    let (left_adjoint, left_holds) = run(left_adjoint_word(w));
    let (right_adjoint, right_holds) = run(right_adjoint_word(w));
    ZigzagDoc {
        word: w.to_string(),
        left_adjoint,
        left_holds,
        right_adjoint,
        right_holds,
    }
}

pub fn diagram_report(file: &crate::format::DiagramFile) -> Result<DiagramDoc, CliError> {
    let w = file.to_word()?;
    let sigs = file.signatures()?;
    let trace = rewrite_trace(&w, &Rule::ALL);
    let nf = straighten(&w);
    let mut zigzags = Vec::new();
    if !w.is_empty() && w.letters().iter().all(|l| !matches!(l.generator, Generator::FoldEv { .. } | Generator::FoldCoev { .. })) {
        zigzags.push(zigzag_doc(&w));
    }
    for label in &file.zigzag {
        let sig = find_sig(&sigs, label)?;
        zigzags.push(zigzag_doc(&StripWord::single(Letter::bare(Generator::Morphism(sig.clone())))));
    }
    let consistent = zigzags.iter().all(|z| z.left_holds != Some(false) && z.right_holds != Some(false));
    Ok(DiagramDoc {
        schema: SCHEMA,
        command: "diagram".into(),
        name: file.name.clone(),
        input: w.to_string(),
        winding: w.winding(),
        trace: trace
            .iter()
            .map(|s| StepDoc {
                rule: s.rule.name().to_string(),
                position: s.position,
                result: s.result.to_string(),
            })
            .collect(),
        one_cell_normal_form: normalize(&w).to_string(),
        normal_form: nf.to_string(),
        normal_form_letters: nf.letters().iter().map(LetterSpec::from_letter).collect(),
        zigzags,
        consistent,
    })
}

pub fn cmd_diagram(path: &Path) -> Result<Outcome, CliError> {
    let doc = diagram_report(&load_diagram(path)?)?;
    emit(&doc, status_of(doc.consistent))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RoundtripDoc {
    pub schema: u32,
    pub command: String,
    pub name: String,
    pub kind: String,
    pub stratum_points: Vec<String>,
    pub region_dims: Vec<usize>,
    pub point_dims: Vec<usize>,
    /// Value → presentation → value is the identity.
    pub presentation_roundtrip: bool,
    /// Value → file → value is the identity.
    pub file_roundtrip: bool,
}

pub fn roundtrip_algebra(name: &str, a: &QAlgebra) -> Result<RoundtripDoc, CliError> {
    let arc = Arc::new(a.clone());
    let f = fa_from_algebra(&arc);
    let back = algebra_from_fa(&f)?;
    let file = AlgebraFile::from_algebra(name, a);
    Ok(RoundtripDoc {
        schema: SCHEMA,
        command: "dict-roundtrip".into(),
        name: name.to_string(),
        kind: "algebra".into(),
        stratum_points: rats(f.strat().points()),
        region_dims: f.regions().iter().map(|r| r.dim()).collect(),
        point_dims: Vec::new(),
        presentation_roundtrip: *back == *a,
        file_roundtrip: reparse(&file)?.to_algebra()? == *a,
    })
}

pub fn roundtrip_bimodule(name: &str, m: &QBimodule) -> Result<RoundtripDoc, CliError> {
    let f = fa_from_pointed_bimodule(m, &q(1, 2))?;
    let back = bimodule_from_fa(&f)?;
    let file = BimoduleFile::from_bimodule(name, m);
    Ok(RoundtripDoc {
        schema: SCHEMA,
        command: "dict-roundtrip".into(),
        name: name.to_string(),
        kind: "bimodule".into(),
        stratum_points: rats(f.strat().points()),
        region_dims: f.regions().iter().map(|r| r.dim()).collect(),
        point_dims: f.points().iter().map(|p| p.dim()).collect(),
        presentation_roundtrip: back == *m,
        file_roundtrip: reparse(&file)?.to_bimodule(Path::new(""))? == *m,
    })
}

fn reparse<T: Serialize + for<'de> Deserialize<'de>>(x: &T) -> Result<T, CliError> {
    let text = serde_json::to_string(x).map_err(|e| CliError::Consistency(e.to_string()))?;
    serde_json::from_str(&text).map_err(|e| CliError::Consistency(e.to_string()))
}

pub fn cmd_dict_roundtrip(path: &Path) -> Result<Outcome, CliError> {
    let doc = match load_any(path)? {
        AnyInput::Algebra(name, a) => roundtrip_algebra(&name, &a)?,
        AnyInput::Bimodule(name, m) => roundtrip_bimodule(&name, &m)?,
    };
    emit(&doc, status_of(doc.presentation_roundtrip && doc.file_roundtrip))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BimoduleEntry {
    pub name: String,
    pub shape: Shape,
    pub pointed: bool,
    pub fgp_over_left: bool,
    pub fgp_over_right: bool,
    pub right_adjoint: bool,
    pub left_adjoint: bool,
    pub consistent: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompositionEntry {
    pub first: String,
    pub second: String,
    pub dim: usize,
    pub agreement: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusDoc {
    pub schema: u32,
    pub command: String,
    pub algebras: Vec<ReportDoc>,
    pub bimodules: Vec<BimoduleEntry>,
    pub compositions: Vec<CompositionEntry>,
    pub consistent: bool,
}

enum Job {
    Algebra(String, QAlgebra),
    Bimodule(String, QBimodule),
    Compose(String, QBimodule, String, QBimodule),
}

enum Entry {
    Algebra(Box<ReportDoc>),
    Bimodule(BimoduleEntry),
    Compose(CompositionEntry),
}

/// Largest `dim M · dim N` for which a corpus composite is attempted.
const COMPOSE_LIMIT: usize = 64;

fn corpus_jobs() -> Vec<Job> {
    let mut jobs: Vec<Job> = corpus::standard_algebras::<Rational>()
        .into_iter()
        .map(|(n, a)| Job::Algebra(n, a))
        .collect();
    let bimodules = corpus::standard_bimodules::<Rational>();
    jobs.extend(bimodules.iter().map(|(n, m)| Job::Bimodule(n.clone(), m.clone())));
    for (a, m) in &bimodules {
        for (b, n) in &bimodules {
            if m.is_pointed()
                && n.is_pointed()
                && m.right_algebra() == n.left_algebra()
                && m.dim() * n.dim() <= COMPOSE_LIMIT
            {
                jobs.push(Job::Compose(a.clone(), m.clone(), b.clone(), n.clone()));
            }
        }
    }
    jobs
}

fn run_job(job: &Job) -> Result<Entry, CliError> {
    Ok(match job {
        Job::Algebra(name, a) => Entry::Algebra(Box::new(report_algebra(name, a))),
        Job::Bimodule(name, m) => {
            let right = adjoint_of(name, m, AdjointSide::Right);
            let left = adjoint_of(name, m, AdjointSide::Left);
            Entry::Bimodule(BimoduleEntry {
                name: name.clone(),
                shape: shape(m),
                pointed: m.is_pointed(),
                fgp_over_left: is_fgp(m, Side::Left).is_some(),
                fgp_over_right: is_fgp(m, Side::Right).is_some(),
                right_adjoint: right.adjunction.is_some(),
                left_adjoint: left.adjunction.is_some(),
                consistent: right.consistent && left.consistent,
            })
        }
        Job::Compose(a, m, b, n) => {
            let agreement = composition_agreement(m, n)?;
            Entry::Compose(CompositionEntry {
                first: a.clone(),
                second: b.clone(),
                dim: agreement.algebraic.dim(),
                agreement: agreement.holds(),
            })
        }
    })
}

/// Runs the standard corpus on `jobs` threads; the document does not depend
/// on the thread count.
pub fn corpus_run(jobs: usize) -> Result<CorpusDoc, CliError> {
    let work = corpus_jobs();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| CliError::Input(e.to_string()))?;
    let entries: Vec<Entry> = pool.install(|| work.par_iter().map(run_job).collect::<Result<Vec<_>, _>>())?;
    let mut doc = CorpusDoc {
        schema: SCHEMA,
        command: "corpus-run".into(),
        algebras: Vec::new(),
        bimodules: Vec::new(),
        compositions: Vec::new(),
        consistent: true,
    };
    for e in entries {
        match e {
            Entry::Algebra(r) => doc.algebras.push(*r),
            Entry::Bimodule(b) => doc.bimodules.push(b),
            Entry::Compose(c) => doc.compositions.push(c),
        }
    }
    doc.consistent = doc.algebras.iter().all(|r| r.consistent)
        && doc.bimodules.iter().all(|b| b.consistent)
        && doc.compositions.iter().all(|c| c.agreement);
    Ok(doc)
}

pub fn cmd_corpus_run(jobs: usize, out: Option<&Path>) -> Result<Outcome, CliError> {
    let doc = corpus_run(jobs)?;
    let outcome = emit(&doc, status_of(doc.consistent))?;
    if let Some(path) = out {
        std::fs::write(path, &outcome.json).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    }
    Ok(outcome)
}
