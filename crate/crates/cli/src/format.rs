//! JSON file formats. Rationals travel as strings (`"3"`, `"-1/2"`), never as
//! floats, and unknown fields are rejected.

use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use morita_core::algebra::Algebra;
use morita_core::bimod::Bimodule;
use morita_core::diagram::{Atom, FoldDirection, Generator, Letter, MorphismSig, StripWord, Turn};
use morita_core::exlin::{Matrix, SparseVec};
use morita_core::{QAlgebra, QBimodule, RatMatrix, Rational};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const SCHEMA: u32 = 1;

pub fn rat(x: &Rational) -> String {
    x.to_string()
}

pub fn parse_rat(s: &str) -> Result<Rational, CliError> {
    let t = s.trim();
    if t.is_empty() || t != s {
        return Err(CliError::Input(format!("malformed rational {s:?}")));
    }
    Rational::from_str(t).map_err(|e| CliError::Input(format!("malformed rational {s:?}: {e}")))
}

pub fn rats(xs: &[Rational]) -> Vec<String> {
    xs.iter().map(rat).collect()
}

pub fn parse_rats(xs: &[String]) -> Result<Vec<Rational>, CliError> {
    xs.iter().map(|s| parse_rat(s)).collect()
}

pub fn matrix_rows(m: &RatMatrix) -> Vec<Vec<String>> {
    (0..m.rows()).map(|r| rats(m.row(r))).collect()
}

pub fn parse_matrix(rows: &[Vec<String>], cols: usize) -> Result<RatMatrix, CliError> {
    let rows = rows.iter().map(|r| parse_rats(r)).collect::<Result<Vec<_>, _>>()?;
    Ok(Matrix::from_rows(cols, rows)?)
}

fn check_schema(schema: u32) -> Result<(), CliError> {
    if schema != SCHEMA {
        return Err(CliError::Input(format!("unsupported schema version {schema}, expected {SCHEMA}")));
    }
    Ok(())
}

/// `structure[i][j]` holds the coordinates of `e_i · e_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub schema: u32,
    pub name: String,
    pub basis: Vec<String>,
    pub structure: Vec<Vec<Vec<String>>>,
    pub unit: Vec<String>,
}

impl AlgebraFile {
    pub fn from_algebra(name: &str, a: &QAlgebra) -> Self {
        let d = a.dim();
        Self {
            schema: SCHEMA,
            name: name.to_string(),
            basis: (0..d).map(|i| format!("e{i}")).collect(),
            structure: (0..d)
                .map(|i| (0..d).map(|j| rats(&a.product(i, j).to_dense(d))).collect())
                .collect(),
            unit: rats(a.unit()),
        }
    }

    pub fn to_algebra(&self) -> Result<QAlgebra, CliError> {
        check_schema(self.schema)?;
        let d = self.basis.len();
        if self.structure.len() != d || self.structure.iter().any(|row| row.len() != d || row.iter().any(|v| v.len() != d)) {
            return Err(CliError::Input(format!("algebra {}: structure must be {d}×{d}×{d}", self.name)));
        }
        let mut flat = Vec::with_capacity(d * d * d);
        for row in &self.structure {
            for v in row {
                flat.extend(parse_rats(v)?);
            }
        }
        Ok(Algebra::new(d, &flat, parse_rats(&self.unit)?)?)
    }
}

/// An algebra given by path (relative to the referring file) or inline.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlgebraRef {
    Path(String),
    Inline(AlgebraFile),
}

impl AlgebraRef {
    fn resolve(&self, base: &Path) -> Result<QAlgebra, CliError> {
        match self {
            AlgebraRef::Inline(f) => f.to_algebra(),
            AlgebraRef::Path(p) => load_algebra(&base.join(p)),
        }
    }
}

/// `left_action[a][m]` holds the coordinates of `e_a · m_m`, `right_action[b][m]`
/// those of `m_m · e_b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BimoduleFile {
    pub schema: u32,
    pub name: String,
    pub left_algebra: AlgebraRef,
    pub right_algebra: AlgebraRef,
    pub left_action: Vec<Vec<Vec<String>>>,
    pub right_action: Vec<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pointing: Option<Vec<String>>,
}

fn action_rows(m: &QBimodule, n: usize, act: impl Fn(usize, usize) -> SparseVec<Rational>) -> Vec<Vec<Vec<String>>> {
    (0..n)
        .map(|a| (0..m.dim()).map(|i| rats(&act(a, i).to_dense(m.dim()))).collect())
        .collect()
}

fn parse_action(name: &str, t: &[Vec<Vec<String>>], n: usize, dim: usize) -> Result<Vec<Vec<SparseVec<Rational>>>, CliError> {
    if t.len() != n || t.iter().any(|row| row.len() != dim || row.iter().any(|v| v.len() != dim)) {
        return Err(CliError::Input(format!("bimodule {name}: action must be {n}×{dim}×{dim}")));
    }
    t.iter()
        .map(|row| row.iter().map(|v| Ok(SparseVec::from_dense(&parse_rats(v)?))).collect())
        .collect()
}

impl BimoduleFile {
    /// Writes both algebras inline.
    pub fn from_bimodule(name: &str, m: &QBimodule) -> Self {
        let (l, r) = (m.left_algebra(), m.right_algebra());
        Self {
            schema: SCHEMA,
            name: name.to_string(),
            left_algebra: AlgebraRef::Inline(AlgebraFile::from_algebra(&format!("{name}.left"), l)),
            right_algebra: AlgebraRef::Inline(AlgebraFile::from_algebra(&format!("{name}.right"), r)),
            left_action: action_rows(m, l.dim(), |a, i| m.left_action(a, i).clone()),
            right_action: action_rows(m, r.dim(), |b, i| m.right_action(b, i).clone()),
            pointing: m.pointing().map(rats),
        }
    }

    pub fn to_bimodule(&self, base: &Path) -> Result<QBimodule, CliError> {
        check_schema(self.schema)?;
        let l = Arc::new(self.left_algebra.resolve(base)?);
        let r = Arc::new(self.right_algebra.resolve(base)?);
        let dim = self.left_action.first().map_or(0, Vec::len);
        let left = parse_action(&self.name, &self.left_action, l.dim(), dim)?;
        let right = parse_action(&self.name, &self.right_action, r.dim(), dim)?;
        let pointing = self.pointing.as_deref().map(parse_rats).transpose()?;
        Ok(Bimodule::from_actions(l, r, dim, left, right, pointing)?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TurnSpec {
    Cw,
    Ccw,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DirectionSpec {
    Up,
    Down,
}

/// One letter of a word. Objects in `left`/`right` pads are names, with a
/// `^rev` suffix for the reversed orientation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum LetterSpec {
    Morphism {
        label: String,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        left: Vec<String>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        right: Vec<String>,
    },
    Op {
        label: String,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        left: Vec<String>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        right: Vec<String>,
    },
    Twist {
        object: String,
        turn: TurnSpec,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        left: Vec<String>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        right: Vec<String>,
    },
    Ev {
        label: String,
        direction: DirectionSpec,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        left: Vec<String>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        right: Vec<String>,
    },
    Coev {
        label: String,
        direction: DirectionSpec,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        left: Vec<String>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        right: Vec<String>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismSpec {
    pub label: String,
    pub source: String,
    pub target: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramFile {
    pub schema: u32,
    pub name: String,
    pub morphisms: Vec<MorphismSpec>,
    /// Needed only for the empty word.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<Vec<String>>,
    pub word: Vec<LetterSpec>,
    /// Labels whose adjoint words get a zigzag check.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub zigzag: Vec<String>,
}

pub fn parse_atom(s: &str) -> Result<Atom, CliError> {
    let (name, rev) = match s.strip_suffix("^rev") {
        Some(n) => (n, true),
        None => (s, false),
    };
    if name.is_empty() {
        return Err(CliError::Input(format!("empty object name in {s:?}")));
    }
    let a = Atom::new(name);
    Ok(if rev { a.reversed() } else { a })
}

pub fn atom_name(a: &Atom) -> String {
    if a.rev {
        format!("{}^rev", a.object)
    } else {
        a.object.to_string()
    }
}

fn parse_boundary(b: &[String]) -> Result<Vec<Atom>, CliError> {
    b.iter().map(|s| parse_atom(s)).collect()
}

fn names(b: &[Atom]) -> Vec<String> {
    b.iter().map(atom_name).collect()
}

impl DiagramFile {
    pub fn signatures(&self) -> Result<Vec<MorphismSig>, CliError> {
        check_schema(self.schema)?;
        let mut sigs: Vec<MorphismSig> = Vec::new();
        for m in &self.morphisms {
            if sigs.iter().any(|s| *s.label == *m.label) {
                return Err(CliError::Input(format!("morphism {} declared twice", m.label)));
            }
            sigs.push(MorphismSig::new(&m.label, &m.source, &m.target));
        }
        Ok(sigs)
    }

    pub fn to_word(&self) -> Result<StripWord, CliError> {
        let sigs = self.signatures()?;
        let letters = self
            .word
            .iter()
            .map(|l| l.to_letter(&sigs))
            .collect::<Result<Vec<_>, _>>()?;
        let w = match &self.source {
            Some(s) => StripWord::new(parse_boundary(s)?, letters)?,
            None if letters.is_empty() => {
                return Err(CliError::Input("an empty word needs an explicit source".into()))
            }
            None => StripWord::from_letters(letters)?,
        };
        Ok(w)
    }

    pub fn from_word(name: &str, sigs: &[MorphismSig], w: &StripWord) -> Self {
        Self {
            schema: SCHEMA,
            name: name.to_string(),
            morphisms: sigs
                .iter()
                .map(|s| MorphismSpec {
                    label: s.label.to_string(),
                    source: s.source.to_string(),
                    target: s.target.to_string(),
                })
                .collect(),
            source: Some(names(w.source())),
            word: w.letters().iter().map(LetterSpec::from_letter).collect(),
            zigzag: Vec::new(),
        }
    }
}

pub fn find_sig<'a>(sigs: &'a [MorphismSig], label: &str) -> Result<&'a MorphismSig, CliError> {
    sigs.iter()
        .find(|s| &*s.label == label)
        .ok_or_else(|| CliError::Input(format!("undeclared morphism {label}")))
}

impl LetterSpec {
    pub fn to_letter(&self, sigs: &[MorphismSig]) -> Result<Letter, CliError> {
        let dir = |d: &DirectionSpec| match d {
            DirectionSpec::Up => FoldDirection::Up,
            DirectionSpec::Down => FoldDirection::Down,
        };
        let (generator, left, right) = match self {
            LetterSpec::Morphism { label, left, right } => (Generator::Morphism(find_sig(sigs, label)?.clone()), left, right),
            LetterSpec::Op { label, left, right } => (Generator::MorphismOp(find_sig(sigs, label)?.clone()), left, right),
            LetterSpec::Twist { object, turn, left, right } => (
                Generator::Twist {
                    object: parse_atom(object)?,
                    turn: match turn {
                        TurnSpec::Cw => Turn::Clockwise,
                        TurnSpec::Ccw => Turn::Counterclockwise,
                    },
                },
                left,
                right,
            ),
            LetterSpec::Ev { label, direction, left, right } => (
                Generator::FoldEv {
                    morphism: find_sig(sigs, label)?.clone(),
                    direction: dir(direction),
                },
                left,
                right,
            ),
            LetterSpec::Coev { label, direction, left, right } => (
                Generator::FoldCoev {
                    morphism: find_sig(sigs, label)?.clone(),
                    direction: dir(direction),
                },
                left,
                right,
            ),
        };
        Ok(Letter::whiskered(generator, parse_boundary(left)?, parse_boundary(right)?))
    }

    pub fn from_letter(l: &Letter) -> Self {
        let (left, right) = (names(&l.left), names(&l.right));
        let dir = |d: &FoldDirection| match d {
            FoldDirection::Up => DirectionSpec::Up,
            FoldDirection::Down => DirectionSpec::Down,
        };
        match &l.generator {
            Generator::Morphism(m) => LetterSpec::Morphism {
                label: m.label.to_string(),
                left,
                right,
            },
            Generator::MorphismOp(m) => LetterSpec::Op {
                label: m.label.to_string(),
                left,
                right,
            },
            Generator::Twist { object, turn } => LetterSpec::Twist {
                object: atom_name(object),
                turn: match turn {
                    Turn::Clockwise => TurnSpec::Cw,
                    Turn::Counterclockwise => TurnSpec::Ccw,
                },
                left,
                right,
            },
            Generator::FoldEv { morphism, direction } => LetterSpec::Ev {
                label: morphism.label.to_string(),
                direction: dir(direction),
                left,
                right,
            },
            Generator::FoldCoev { morphism, direction } => LetterSpec::Coev {
                label: morphism.label.to_string(),
                direction: dir(direction),
                left,
                right,
            },
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn parse_json<T: for<'de> Deserialize<'de>>(path: &Path, text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn base_dir(path: &Path) -> PathBuf {
    path.parent().map(Path::to_path_buf).unwrap_or_default()
}

pub fn load_algebra_file(path: &Path) -> Result<AlgebraFile, CliError> {
    parse_json(path, &read(path)?)
}

pub fn load_algebra(path: &Path) -> Result<QAlgebra, CliError> {
    load_algebra_file(path)?.to_algebra()
}

pub fn load_bimodule(path: &Path) -> Result<(String, QBimodule), CliError> {
    let f: BimoduleFile = parse_json(path, &read(path)?)?;
    let m = f.to_bimodule(&base_dir(path))?;
    Ok((f.name, m))
}

pub fn load_diagram(path: &Path) -> Result<DiagramFile, CliError> {
    parse_json(path, &read(path)?)
}

/// Either kind of module-theoretic input, told apart by its fields.
pub enum AnyInput {
    Algebra(String, QAlgebra),
    Bimodule(String, QBimodule),
}

pub fn load_any(path: &Path) -> Result<AnyInput, CliError> {
    let text = read(path)?;
    let value: serde_json::Value = parse_json(path, &text)?;
    if value.get("left_action").is_some() {
        let f: BimoduleFile = parse_json(path, &text)?;
        let m = f.to_bimodule(&base_dir(path))?;
        Ok(AnyInput::Bimodule(f.name, m))
    } else {
        let f: AlgebraFile = parse_json(path, &text)?;
        let a = f.to_algebra()?;
        Ok(AnyInput::Algebra(f.name, a))
    }
}
