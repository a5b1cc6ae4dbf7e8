use std::path::{Path, PathBuf};
use std::process::Command;

use morita_cli::commands::{compose, corpus_run, diagram_report, ComposeMode};
use morita_cli::format::{parse_rat, AlgebraFile, AlgebraRef, BimoduleFile, DiagramFile, LetterSpec};
use morita_core::corpus;
use morita_core::diagram::{Atom, Generator, Letter, MorphismSig, StripWord, Turn};
use morita_core::{q, Rational};
use serde_json::Value;

fn morita(args: &[&str]) -> (i32, Value, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_morita")).args(args).output().unwrap();
    let doc = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), doc, String::from_utf8_lossy(&out.stderr).into_owned())
}

fn write(dir: &Path, name: &str, body: &impl serde::Serialize) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string_pretty(body).unwrap()).unwrap();
    path
}

fn algebra_file(name: &str, a: &morita_core::QAlgebra) -> AlgebraFile {
    AlgebraFile::from_algebra(name, a)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn rationals_parse_exactly() {
    assert_eq!(parse_rat("-3/6").unwrap(), q(-1, 2));
    assert_eq!(parse_rat("7").unwrap(), q(7, 1));
    for bad in ["1/0", "0.5", "", " 1", "1/2/3", "x"] {
        assert!(parse_rat(bad).is_err(), "{bad}");
    }
}

#[test]
fn report_on_matrices_and_scalars() {
    let dir = tempfile::tempdir().unwrap();
    let m2 = write(dir.path(), "m2.json", &algebra_file("M2", &corpus::matrix_algebra::<Rational>(2)));
    let (code, doc, _) = morita(&["report", s(&m2)]);
    assert_eq!(code, 0);
    assert_eq!(doc["fully_2_dualizable"], true);
    assert_eq!(doc["pointed"]["verdict"], "impossible");
    assert_eq!(doc["center_dim"], 1);
    let k = write(dir.path(), "q.json", &algebra_file("Q", &corpus::scalars::<Rational>()));
    let (code, doc, _) = morita(&["report", s(&k)]);
    assert_eq!(code, 0);
    assert_eq!(doc["pointed"]["verdict"], "A ≅ 𝟙");
    let t2 = write(dir.path(), "t2.json", &algebra_file("T2", &corpus::upper_triangular::<Rational>()));
    let (code, doc, _) = morita(&["report", s(&t2)]);
    assert_eq!(code, 0);
    assert_eq!(doc["fully_2_dualizable"], false);
    assert_eq!(doc["hh0_dim"], 2);
}

#[test]
fn malformed_input_exits_with_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let mut f = algebra_file("Q", &corpus::scalars::<Rational>());
    f.unit = vec!["1/0".into()];
    let bad = write(dir.path(), "bad.json", &f);
    let (code, _, err) = morita(&["report", s(&bad)]);
    assert_eq!(code, 2);
    assert!(err.contains("1/0"), "{err}");
    let mut v = serde_json::to_value(algebra_file("Q", &corpus::scalars::<Rational>())).unwrap();
    v["extra"] = Value::Bool(true);
    let unknown = write(dir.path(), "unknown.json", &v);
    assert_eq!(morita(&["report", s(&unknown)]).0, 2);
    let mut f = algebra_file("Q", &corpus::scalars::<Rational>());
    f.schema = 2;
    let future = write(dir.path(), "future.json", &f);
    assert_eq!(morita(&["report", s(&future)]).0, 2);
    // b · a = b, so b is not a unit.
    let broken = AlgebraFile {
        schema: 1,
        name: "broken".into(),
        basis: vec!["a".into(), "b".into()],
        structure: vec![
            vec![vec!["1".into(), "0".into()], vec!["0".into(), "1".into()]],
            vec![vec!["0".into(), "1".into()], vec!["0".into(), "1".into()]],
        ],
        unit: vec!["0".into(), "1".into()],
    };
    let broken = write(dir.path(), "broken.json", &broken);
    assert_eq!(morita(&["report", s(&broken)]).0, 2);
}

#[test]
fn adjoint_sides_and_none() {
    let dir = tempfile::tempdir().unwrap();
    let reg = write(
        dir.path(),
        "reg.json",
        &BimoduleFile::from_bimodule("reg", &morita_core::bimod::Bimodule::regular(&std::sync::Arc::new(corpus::group_algebra(2)))),
    );
    let (code, doc, _) = morita(&["adjoint", s(&reg), "--side", "right"]);
    assert_eq!(code, 0);
    assert_eq!(doc["adjunction"]["zigzag_left"], true);
    let cols = write(dir.path(), "cols.json", &BimoduleFile::from_bimodule("cols", &corpus::column_vectors(2)));
    let (code, doc, _) = morita(&["adjoint", s(&cols), "--side", "left"]);
    assert_eq!(code, 0);
    assert_eq!(doc["verdict"], "adjoint");
    let point = write(dir.path(), "point.json", &BimoduleFile::from_bimodule("point", &corpus::nilpotent_point()));
    let (code, doc, _) = morita(&["adjoint", s(&point), "--side", "right"]);
    assert_eq!(code, 1);
    assert_eq!(doc["verdict"], "none");
    assert_eq!(doc["certificate"]["acting_algebra_dim"], 2);
}

#[test]
fn bimodule_files_can_refer_to_algebra_files() {
    let dir = tempfile::tempdir().unwrap();
    let m = corpus::column_vectors::<Rational>(2);
    write(dir.path(), "m2.json", &algebra_file("M2", m.left_algebra()));
    write(dir.path(), "q.json", &algebra_file("Q", m.right_algebra()));
    let mut f = BimoduleFile::from_bimodule("cols", &m);
    f.left_algebra = AlgebraRef::Path("m2.json".into());
    f.right_algebra = AlgebraRef::Path("q.json".into());
    let path = write(dir.path(), "cols.json", &f);
    let (_, loaded) = morita_cli::format::load_bimodule(&path).unwrap();
    assert_eq!(loaded, m);
    let (code, doc, _) = morita(&["dict-roundtrip", s(&path)]);
    assert_eq!(code, 0);
    assert_eq!(doc["presentation_roundtrip"], true);
    assert_eq!(doc["stratum_points"], serde_json::json!(["1/2"]));
}

#[test]
fn compose_modes() {
    let rows = corpus::row_vectors::<Rational>(2);
    let cols = corpus::column_vectors::<Rational>(2);
    let inner = compose(("rows", &rows), ("cols", &cols), ComposeMode::Algebraic).unwrap();
    let outer = compose(("cols", &cols), ("rows", &rows), ComposeMode::Both).unwrap();
    assert_eq!(inner.algebraic.unwrap().shape.dim, 1);
    assert_eq!(outer.algebraic.as_ref().unwrap().shape.dim, 4);
    assert!(outer.agreement.unwrap().holds);
    let geometric = compose(("cols", &cols), ("rows", &rows), ComposeMode::Geometric).unwrap();
    assert_eq!(geometric.geometric.unwrap().shape.dim, 4);
    assert!(compose(("cols", &cols), ("cols", &cols), ComposeMode::Algebraic).is_err());

    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.json", &BimoduleFile::from_bimodule("cols", &cols));
    let b = write(dir.path(), "b.json", &BimoduleFile::from_bimodule("rows", &rows));
    assert_eq!(morita(&["compose", s(&a), s(&b), "--mode", "both"]).0, 0);
    assert_eq!(morita(&["compose", s(&a), s(&a)]).0, 2);
}

fn sig_a() -> MorphismSig {
    MorphismSig::new("A", "R", "S")
}

fn diagram(word: Vec<LetterSpec>, zigzag: Vec<String>) -> DiagramFile {
    DiagramFile {
        schema: 1,
        name: "w".into(),
        morphisms: vec![morita_cli::format::MorphismSpec {
            label: "A".into(),
            source: "R".into(),
            target: "S".into(),
        }],
        source: None,
        word,
        zigzag,
    }
}

fn twist_spec(object: &str, turn: &str) -> LetterSpec {
    serde_json::from_value(serde_json::json!({"kind": "twist", "object": object, "turn": turn})).unwrap()
}

#[test]
fn diagram_traces() {
    let pair = diagram_report(&diagram(vec![twist_spec("R", "cw"), twist_spec("R", "ccw")], vec![])).unwrap();
    assert_eq!(pair.trace.len(), 1);
    assert_eq!(pair.trace[0].rule, "twist cancellation");
    assert!(pair.normal_form_letters.is_empty());

    let a = |kind: &str| serde_json::from_value::<LetterSpec>(serde_json::json!({"kind": kind, "label": "A"})).unwrap();
    let snake = vec![a("morphism"), twist_spec("S", "cw"), a("op"), twist_spec("R", "ccw"), a("morphism")];
    let doc = diagram_report(&diagram(snake, vec!["A".into()])).unwrap();
    assert_eq!(doc.normal_form_letters, vec![a("morphism")]);
    assert!(doc.consistent);
    assert_eq!(doc.zigzags.len(), 2);

    let stuck = diagram_report(&diagram(vec![a("morphism"), a("op")], vec![])).unwrap();
    assert!(stuck.trace.is_empty());
    assert_eq!(stuck.normal_form, stuck.input);

    let ill = diagram(vec![a("morphism"), a("morphism")], vec![]);
    assert!(diagram_report(&ill).is_err());
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "ill.json", &ill);
    assert_eq!(morita(&["diagram", s(&path)]).0, 2);
}

#[test]
fn files_roundtrip_bit_for_bit() {
    for (name, a) in corpus::standard_algebras::<Rational>() {
        let f = AlgebraFile::from_algebra(&name, &a);
        let text = serde_json::to_string(&f).unwrap();
        let back: AlgebraFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back, f);
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
        assert_eq!(back.to_algebra().unwrap(), a);
    }
    for (name, m) in corpus::standard_bimodules::<Rational>() {
        let f = BimoduleFile::from_bimodule(&name, &m);
        let text = serde_json::to_string(&f).unwrap();
        let back: BimoduleFile = serde_json::from_str(&text).unwrap();
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
        assert_eq!(back.to_bimodule(Path::new("")).unwrap(), m);
    }
    let sig = sig_a();
    let w = StripWord::from_letters(vec![
        Letter::whiskered(
            Generator::Twist { object: Atom::new("R"), turn: Turn::Clockwise },
            vec![Atom::new("T").reversed()],
            vec![],
        ),
        Letter::whiskered(Generator::Morphism(sig.clone()), vec![Atom::new("T").reversed()], vec![]),
    ])
    .unwrap();
    let f = DiagramFile::from_word("w", &[sig], &w);
    let back: DiagramFile = serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap();
    assert_eq!(back.to_word().unwrap(), w);
}

#[test]
fn corpus_run_is_consistent_and_thread_independent() {
    let one = corpus_run(1).unwrap();
    assert!(one.consistent);
    assert!(one.compositions.len() >= 10);
    let two = corpus_run(2).unwrap();
    assert_eq!(serde_json::to_string(&one).unwrap(), serde_json::to_string(&two).unwrap());
}
