//! Framed strip words and their rewriting.
//!
//! A word is a left-to-right composite of 1-morphism strips. Letters are
//! generators whiskered by identity strips on either side, so each letter
//! maps a boundary (a tensor product of objects, possibly reversed) to
//! another. `normalize` applies the 1-cell moves: cancelling opposite twists
//! and straightening fold snakes. `straighten` also applies the 2-cell
//! bend snakes, which is what the adjunction zigzags reduce to.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::algebra::Algebra;
use crate::bimod::{relative_tensor, same_algebra, Bimodule};
use crate::corpus::scalars;
use crate::error::{input_err, Error, Result};
use crate::exlin::SparseVec;
use crate::scalar::Field;

/// An object, or its reverse, as one tensor factor of a boundary.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub object: Arc<str>,
    pub rev: bool,
}

impl Atom {
    pub fn new(object: &str) -> Self {
        Self {
            object: object.into(),
            rev: false,
        }
    }

    pub fn reversed(&self) -> Self {
        Self {
            object: self.object.clone(),
            rev: !self.rev,
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.object, if self.rev { "^rev" } else { "" })
    }
}

pub type Boundary = Vec<Atom>;

fn show_boundary(b: &[Atom]) -> String {
    if b.is_empty() {
        return "1".into();
    }
    b.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ⊗ ")
}

/// Framing rotation of a twist strip: `↻` winds `+1`, `↺` winds `-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Turn {
    Clockwise,
    Counterclockwise,
}

impl Turn {
    pub fn inverse(self) -> Self {
        match self {
            Turn::Clockwise => Turn::Counterclockwise,
            Turn::Counterclockwise => Turn::Clockwise,
        }
    }

    pub fn winding(self) -> i32 {
        match self {
            Turn::Clockwise => 1,
            Turn::Counterclockwise => -1,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Turn::Clockwise => "↻",
            Turn::Counterclockwise => "↺",
        }
    }
}

/// Whether a strip is folded up and over, or down and under.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FoldDirection {
    Up,
    Down,
}

/// A labelled 1-morphism `label: source → target` between objects.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MorphismSig {
    pub label: Arc<str>,
    pub source: Arc<str>,
    pub target: Arc<str>,
}

impl MorphismSig {
    pub fn new(label: &str, source: &str, target: &str) -> Self {
        Self {
            label: label.into(),
            source: source.into(),
            target: target.into(),
        }
    }

    fn source_atom(&self) -> Atom {
        Atom::new(&self.source)
    }

    fn target_atom(&self) -> Atom {
        Atom::new(&self.target)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    /// `A: R → S`.
    Morphism(MorphismSig),
    /// The inverted strip `A^op: S → R`.
    MorphismOp(MorphismSig),
    /// `R^↻` or `R^↺`, from an object to itself.
    Twist { object: Atom, turn: Turn },
    /// `A^>`: `S^rev ⊗ R → 1` folded up, `R ⊗ S^rev → 1` folded down.
    FoldEv { morphism: MorphismSig, direction: FoldDirection },
    /// `B^<` for `B: S → T`: `1 → T ⊗ S^rev` folded up, `1 → S^rev ⊗ T`
    /// folded down.
    FoldCoev { morphism: MorphismSig, direction: FoldDirection },
}

impl Generator {
    pub fn source(&self) -> Boundary {
        match self {
            Generator::Morphism(m) => vec![m.source_atom()],
            Generator::MorphismOp(m) => vec![m.target_atom()],
            Generator::Twist { object, .. } => vec![object.clone()],
            Generator::FoldEv { morphism, direction } => {
                let (r, s) = (morphism.source_atom(), morphism.target_atom().reversed());
                match direction {
                    FoldDirection::Up => vec![s, r],
                    FoldDirection::Down => vec![r, s],
                }
            }
            Generator::FoldCoev { .. } => Vec::new(),
        }
    }

    pub fn target(&self) -> Boundary {
        match self {
            Generator::Morphism(m) => vec![m.target_atom()],
            Generator::MorphismOp(m) => vec![m.source_atom()],
            Generator::Twist { object, .. } => vec![object.clone()],
            Generator::FoldEv { .. } => Vec::new(),
            Generator::FoldCoev { morphism, direction } => {
                let (s, t) = (morphism.source_atom().reversed(), morphism.target_atom());
                match direction {
                    FoldDirection::Up => vec![t, s],
                    FoldDirection::Down => vec![s, t],
                }
            }
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let arrow = |d: &FoldDirection| if *d == FoldDirection::Up { "↑" } else { "↓" };
        match self {
            Generator::Morphism(m) => write!(f, "{}", m.label),
            Generator::MorphismOp(m) => write!(f, "{}^op", m.label),
            Generator::Twist { object, turn } => write!(f, "{object}^{}", turn.symbol()),
            Generator::FoldEv { morphism, direction } => write!(f, "{}^>{}", morphism.label, arrow(direction)),
            Generator::FoldCoev { morphism, direction } => write!(f, "{}^<{}", morphism.label, arrow(direction)),
        }
    }
}

/// A generator whiskered by identities on `left` and `right`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub generator: Generator,
    pub left: Boundary,
    pub right: Boundary,
}

impl Letter {
    pub fn bare(generator: Generator) -> Self {
        Self {
            generator,
            left: Vec::new(),
            right: Vec::new(),
        }
    }

    pub fn whiskered(generator: Generator, left: Boundary, right: Boundary) -> Self {
        Self { generator, left, right }
    }

    fn with(&self, generator: Generator) -> Self {
        Self {
            generator,
            left: self.left.clone(),
            right: self.right.clone(),
        }
    }

    fn pad(&self, middle: Boundary) -> Boundary {
        let mut b = self.left.clone();
        b.extend(middle);
        b.extend(self.right.iter().cloned());
        b
    }

    pub fn source(&self) -> Boundary {
        self.pad(self.generator.source())
    }

    pub fn target(&self) -> Boundary {
        self.pad(self.generator.target())
    }

    fn same_pads(&self, other: &Self) -> bool {
        self.left == other.left && self.right == other.right
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.left.is_empty() && self.right.is_empty() {
            return write!(f, "{}", self.generator);
        }
        let mut parts = Vec::new();
        if !self.left.is_empty() {
            parts.push(show_boundary(&self.left));
        }
        parts.push(self.generator.to_string());
        if !self.right.is_empty() {
            parts.push(show_boundary(&self.right));
        }
        write!(f, "({})", parts.join(" ⊗ "))
    }
}

/// A well-typed composite of letters, read left to right.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StripWord {
    source: Boundary,
    letters: Vec<Letter>,
}

impl StripWord {
    pub fn new(source: Boundary, letters: Vec<Letter>) -> Result<Self> {
        let mut at = source.clone();
        for (i, l) in letters.iter().enumerate() {
            if l.source() != at {
                return input_err(format!(
                    "letter {i} ({l}) starts at {} but the word is at {}",
                    show_boundary(&l.source()),
                    show_boundary(&at)
                ));
            }
            at = l.target();
        }
        Ok(Self { source, letters })
    }

    /// A word whose source is read off its first letter.
    pub fn from_letters(letters: Vec<Letter>) -> Result<Self> {
        match letters.first() {
            Some(l) => Self::new(l.source(), letters),
            None => input_err("an empty word needs an explicit boundary"),
        }
    }

    pub fn identity(boundary: Boundary) -> Self {
        Self {
            source: boundary,
            letters: Vec::new(),
        }
    }

    pub fn single(letter: Letter) -> Self {
        Self {
            source: letter.source(),
            letters: vec![letter],
        }
    }

    pub fn source(&self) -> &Boundary {
        &self.source
    }

    pub fn target(&self) -> Boundary {
        self.letters.last().map_or_else(|| self.source.clone(), Letter::target)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn then(&self, next: &Self) -> Result<Self> {
        if self.target() != next.source {
            return Err(Error::Composition(format!(
                "word ends at {} but the next starts at {}",
                show_boundary(&self.target()),
                show_boundary(&next.source)
            )));
        }
        let mut letters = self.letters.clone();
        letters.extend(next.letters.iter().cloned());
        Ok(Self {
            source: self.source.clone(),
            letters,
        })
    }

    /// Total framing winding of the twist letters.
    pub fn winding(&self) -> i32 {
        self.letters
            .iter()
            .map(|l| match &l.generator {
                Generator::Twist { turn, .. } => turn.winding(),
                _ => 0,
            })
            .sum()
    }

    fn splice(&self, at: usize, width: usize, with: Vec<Letter>) -> Self {
        let mut letters = self.letters[..at].to_vec();
        letters.extend(with);
        letters.extend(self.letters[at + width..].iter().cloned());
        Self {
            source: self.source.clone(),
            letters,
        }
    }
}

impl fmt::Display for StripWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "id[{}]", show_boundary(&self.source));
        }
        let parts: Vec<String> = self.letters.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join(" · "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    /// `X^d · X^{-d} → id`.
    TwistCancellation,
    /// A fold coevaluation followed by a fold evaluation straightens to the
    /// composite of the two folded strips.
    FoldSnake(FoldDirection),
    /// `A · S^d · A^op · R^{-d} · A → A` for `A: R → S`.
    BendSnake,
    /// `A^op · R^{-d} · A · S^d · A^op → A^op`.
    BendSnakeMirror,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::TwistCancellation => "twist cancellation",
            Rule::FoldSnake(FoldDirection::Up) => "fold snake (up)",
            Rule::FoldSnake(FoldDirection::Down) => "fold snake (down)",
            Rule::BendSnake => "bend snake",
            Rule::BendSnakeMirror => "mirrored bend snake",
        }
    }

    /// Whether the move is an isomorphism of 1-morphisms, as opposed to an
    /// identity between composite 2-morphisms.
    pub fn is_one_cell(self) -> bool {
        matches!(self, Rule::TwistCancellation | Rule::FoldSnake(_))
    }

    pub const ONE_CELL: [Rule; 3] = [
        Rule::TwistCancellation,
        Rule::FoldSnake(FoldDirection::Up),
        Rule::FoldSnake(FoldDirection::Down),
    ];

    pub const ALL: [Rule; 5] = [
        Rule::TwistCancellation,
        Rule::FoldSnake(FoldDirection::Up),
        Rule::FoldSnake(FoldDirection::Down),
        Rule::BendSnake,
        Rule::BendSnakeMirror,
    ];
}

fn twist_of(l: &Letter) -> Option<(&Atom, Turn)> {
    match &l.generator {
        Generator::Twist { object, turn } => Some((object, *turn)),
        _ => None,
    }
}

fn concat(a: &[Atom], b: &[Atom]) -> Boundary {
    let mut out = a.to_vec();
    out.extend(b.iter().cloned());
    out
}

/// The replacement for a redex of `rule` starting at `at`, with its width.
fn redex(w: &StripWord, rule: Rule, at: usize) -> Option<(usize, Vec<Letter>)> {
    let ls = &w.letters[at..];
    match rule {
        Rule::TwistCancellation => {
            let [x, y, ..] = ls else { return None };
            let ((ox, tx), (oy, ty)) = (twist_of(x)?, twist_of(y)?);
            (ox == oy && ty == tx.inverse() && x.same_pads(y)).then(|| (2, Vec::new()))
        }
        Rule::FoldSnake(direction) => {
            let [x, y, ..] = ls else { return None };
            let Generator::FoldCoev { morphism: b, direction: dx } = &x.generator else { return None };
            let Generator::FoldEv { morphism: a, direction: dy } = &y.generator else { return None };
            if *dx != direction || *dy != direction || a.target != b.source {
                return None;
            }
            let (r, t) = (a.source_atom(), b.target_atom());
            let (p, q) = match direction {
                FoldDirection::Up => {
                    let (first, q) = x.right.split_first()?;
                    if *first != r || y.left != concat(&x.left, &[t]) || y.right != q {
                        return None;
                    }
                    (x.left.clone(), q.to_vec())
                }
                FoldDirection::Down => {
                    let (last, p) = x.left.split_last()?;
                    if *last != r || y.left != p || y.right != concat(&[t], &x.right) {
                        return None;
                    }
                    (p.to_vec(), x.right.clone())
                }
            };
            Some((
                2,
                vec![
                    Letter::whiskered(Generator::Morphism(a.clone()), p.clone(), q.clone()),
                    Letter::whiskered(Generator::Morphism(b.clone()), p, q),
                ],
            ))
        }
        Rule::BendSnake | Rule::BendSnakeMirror => {
            let [l0, l1, l2, l3, l4, ..] = ls else { return None };
            let same = [l1, l2, l3, l4].iter().all(|l| l.same_pads(l0));
            if !same {
                return None;
            }
            let (m, outer, inner) = match (&l0.generator, &l2.generator, &l4.generator) {
                (Generator::Morphism(a), Generator::MorphismOp(b), Generator::Morphism(c)) if rule == Rule::BendSnake => {
                    (a, [a, c], b)
                }
                (Generator::MorphismOp(a), Generator::Morphism(b), Generator::MorphismOp(c))
                    if rule == Rule::BendSnakeMirror =>
                {
                    (a, [a, c], b)
                }
                _ => return None,
            };
            if outer.iter().any(|x| *x != m) || inner != m {
                return None;
            }
            let ((o1, t1), (o3, t3)) = (twist_of(l1)?, twist_of(l3)?);
            let (r, s) = (m.source_atom(), m.target_atom());
            // The twist on the target carries `d`, the one on the source `-d`.
            let ok = match rule {
                Rule::BendSnake => *o1 == s && *o3 == r && t3 == t1.inverse(),
                _ => *o1 == r && *o3 == s && t1 == t3.inverse(),
            };
            ok.then(|| (5, vec![l0.clone()]))
        }
    }
}

/// One rewriting step: the rule, where it applied, and the result.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub rule: Rule,
    pub position: usize,
    pub result: StripWord,
}

/// Every single-step rewrite of `w` under `rules`.
pub fn one_step_rewrites(w: &StripWord, rules: &[Rule]) -> Vec<Step> {
    let mut out = Vec::new();
    for at in 0..w.len() {
        for &rule in rules {
            if let Some((width, with)) = redex(w, rule, at) {
                out.push(Step {
                    rule,
                    position: at,
                    result: w.splice(at, width, with),
                });
            }
        }
    }
    out
}

fn first_step(w: &StripWord, rules: &[Rule]) -> Option<Step> {
    for at in 0..w.len() {
        for &rule in rules {
            if let Some((width, with)) = redex(w, rule, at) {
                return Some(Step {
                    rule,
                    position: at,
                    result: w.splice(at, width, with),
                });
            }
        }
    }
    None
}

/// Leftmost-first rewriting to a fixpoint. Every rule lowers the number of
/// fold letters or the length, so this terminates.
pub fn rewrite_trace(w: &StripWord, rules: &[Rule]) -> Vec<Step> {
    let mut steps: Vec<Step> = Vec::new();
    let mut current = w.clone();
    while let Some(step) = first_step(&current, rules) {
        current = step.result.clone();
        steps.push(step);
    }
    steps
}

pub fn rewrite(w: &StripWord, rules: &[Rule]) -> StripWord {
    let mut current = w.clone();
    while let Some(step) = first_step(&current, rules) {
        current = step.result;
    }
    current
}

/// Normal form under the 1-cell moves.
pub fn normalize(w: &StripWord) -> StripWord {
    rewrite(w, &Rule::ONE_CELL)
}

/// Normal form under all moves, bend snakes included.
pub fn straighten(w: &StripWord) -> StripWord {
    rewrite(w, &Rule::ALL)
}

/// The words one rewrite step away from `w` whose normal forms disagree
/// with that of `w`; empty exactly when the rules are locally confluent at
/// `w`.
pub fn confluence_failures(w: &StripWord, rules: &[Rule]) -> Vec<Step> {
    let steps = one_step_rewrites(w, rules);
    // With a single redex the leftmost strategy takes it, so there is
    // nothing to compare.
    if steps.len() < 2 {
        return Vec::new();
    }
    let target = rewrite(w, rules);
    steps.into_iter().filter(|s| rewrite(&s.result, rules) != target).collect()
}

/// Totals of an exhaustive local-confluence sweep.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConfluenceSweep {
    pub words: usize,
    /// Words whose last letter creates an overlap, each compared in full.
    pub overlapping: usize,
    pub failures: Vec<StripWord>,
}

impl ConfluenceSweep {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks local confluence on every word from `source` with at most
/// `max_len` letters. Redex windows are tracked as the word grows, and a
/// word goes through [`confluence_failures`] when its last letter completes
/// a redex overlapping an earlier one. The other words need no check: a
/// joinable pair in a prefix stays joinable after appending letters, and
/// disjoint rewrites commute.
pub fn confluence_sweep(
    source: &Boundary,
    sigs: &[MorphismSig],
    max_len: usize,
    max_width: usize,
    folds: bool,
    rules: &[Rule],
) -> ConfluenceSweep {
    type Moves = std::rc::Rc<Vec<(Letter, Boundary)>>;
    struct Ctx<'a> {
        sigs: &'a [MorphismSig],
        max_len: usize,
        max_width: usize,
        folds: bool,
        rules: &'a [Rule],
        cache: HashMap<Boundary, Moves>,
        out: ConfluenceSweep,
    }
    fn go(c: &mut Ctx<'_>, w: &mut StripWord, target: &Boundary, windows: &mut Vec<(usize, usize)>, overlap: bool) {
        c.out.words += 1;
        if overlap {
            c.out.overlapping += 1;
            if !confluence_failures(w, c.rules).is_empty() {
                c.out.failures.push(w.clone());
            }
        }
        if w.len() == c.max_len {
            return;
        }
        let next = match c.cache.get(target) {
            Some(m) => m.clone(),
            None => {
                let m: Moves = std::rc::Rc::new(
                    letters_from(target, c.sigs, c.max_width, c.folds)
                        .into_iter()
                        .map(|l| {
                            let t = l.target();
                            (l, t)
                        })
                        .collect(),
                );
                c.cache.insert(target.clone(), m.clone());
                m
            }
        };
        for (l, t) in next.iter() {
            w.letters.push(l.clone());
            let n = w.len();
            let before = windows.len();
            let mut hit = false;
            for &rule in c.rules {
                let width = if matches!(rule, Rule::BendSnake | Rule::BendSnakeMirror) { 5 } else { 2 };
                if n < width {
                    continue;
                }
                let start = n - width;
                if redex(w, rule, start).is_some() {
                    hit |= windows.iter().any(|&(_, end)| end > start);
                    windows.push((start, n));
                }
            }
            go(c, w, t, windows, hit);
            windows.truncate(before);
            w.letters.pop();
        }
    }
    let mut c = Ctx {
        sigs,
        max_len,
        max_width,
        folds,
        rules,
        cache: HashMap::new(),
        out: ConfluenceSweep::default(),
    };
    let mut w = StripWord::identity(source.clone());
    go(&mut c, &mut w, source, &mut Vec::new(), false);
    c.out
}

/// A 2-morphism given by its source and target words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoCell {
    pub source: StripWord,
    pub target: StripWord,
}

/// An adjoint word together with its unit and counit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjointPackage {
    pub morphism: StripWord,
    pub adjoint: StripWord,
    /// Whether `adjoint` is the left adjoint of `morphism`.
    pub is_left: bool,
    pub unit: TwoCell,
    pub counit: TwoCell,
}

/// The adjoint of one letter: `m: X → Y` becomes `Y^a · m^op · X^b`, with
/// `(a, b) = (↻, ↺)` for the left adjoint.
fn adjoint_letter(l: &Letter, left: bool) -> Result<Vec<Letter>> {
    let (a, b) = if left {
        (Turn::Clockwise, Turn::Counterclockwise)
    } else {
        (Turn::Counterclockwise, Turn::Clockwise)
    };
    let twist = |object: Atom, turn| l.with(Generator::Twist { object, turn });
    Ok(match &l.generator {
        Generator::Morphism(m) => vec![
            twist(m.target_atom(), a),
            l.with(Generator::MorphismOp(m.clone())),
            twist(m.source_atom(), b),
        ],
        Generator::MorphismOp(m) => vec![
            twist(m.source_atom(), a),
            l.with(Generator::Morphism(m.clone())),
            twist(m.target_atom(), b),
        ],
        Generator::Twist { object, turn } => vec![twist(object.clone(), turn.inverse())],
        Generator::FoldEv { .. } | Generator::FoldCoev { .. } => {
            return Err(Error::Unsupported(format!("adjoints of fold strips such as {l}")))
        }
    })
}

fn adjoint_package(m: &StripWord, left: bool) -> Result<AdjointPackage> {
    let mut letters = Vec::new();
    for l in m.letters.iter().rev() {
        letters.extend(adjoint_letter(l, left)?);
    }
    let adjoint = StripWord::new(m.target(), letters)?;
    let id_source = StripWord::identity(m.source.clone());
    let id_target = StripWord::identity(m.target());
    let (unit, counit) = if left {
        (
            TwoCell {
                source: id_target,
                target: adjoint.then(m)?,
            },
            TwoCell {
                source: m.then(&adjoint)?,
                target: id_source,
            },
        )
    } else {
        (
            TwoCell {
                source: id_source,
                target: m.then(&adjoint)?,
            },
            TwoCell {
                source: adjoint.then(m)?,
                target: id_target,
            },
        )
    };
    Ok(AdjointPackage {
        morphism: m.clone(),
        adjoint,
        is_left: left,
        unit,
        counit,
    })
}

pub fn left_adjoint_word(m: &StripWord) -> Result<AdjointPackage> {
    adjoint_package(m, true)
}

pub fn right_adjoint_word(m: &StripWord) -> Result<AdjointPackage> {
    adjoint_package(m, false)
}

/// `m` conjugated by `k` twists: `R^d…R^d · m · S^{-d}…S^{-d}`.
pub fn twist_conjugate(m: &Letter, turn: Turn, k: usize) -> Result<StripWord> {
    let (Some(x), Some(y)) = (m.generator.source().first().cloned(), m.generator.target().first().cloned()) else {
        return Err(Error::Unsupported("conjugating a fold strip by twists".into()));
    };
    let mut letters = vec![m.with(Generator::Twist { object: x, turn }); k];
    letters.push(m.clone());
    letters.extend(vec![m.with(Generator::Twist { object: y, turn: turn.inverse() }); k]);
    StripWord::from_letters(letters)
}

/// Straightened forms of the two glued zigzag words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZigzagWords {
    pub first: StripWord,
    pub second: StripWord,
    pub holds: bool,
}

/// Glues `m · adj · m` and `adj · m · adj` and checks they straighten to
/// `m` and `adj`.
pub fn zigzag_check(m: &StripWord, package: &AdjointPackage) -> Result<ZigzagWords> {
    let adj = &package.adjoint;
    let first = straighten(&m.then(adj)?.then(m)?);
    let second = straighten(&adj.then(m)?.then(adj)?);
    let shapes = if package.is_left {
        package.counit.source == m.then(adj)? && package.unit.target == adj.then(m)?
    } else {
        package.unit.target == m.then(adj)? && package.counit.source == adj.then(m)?
    };
    let holds = shapes && first == straighten(m) && second == straighten(adj);
    Ok(ZigzagWords { first, second, holds })
}

/// Commutative algebras for the objects and bimodules for the labels.
#[derive(Clone, Debug)]
pub struct Environment<F> {
    objects: BTreeMap<Arc<str>, Arc<Algebra<F>>>,
    morphisms: BTreeMap<Arc<str>, (MorphismSig, Bimodule<F>)>,
}

impl<F: Field> Environment<F> {
    pub fn new(objects: Vec<(&str, Arc<Algebra<F>>)>, morphisms: Vec<(MorphismSig, Bimodule<F>)>) -> Result<Self> {
        let objects: BTreeMap<Arc<str>, Arc<Algebra<F>>> = objects.into_iter().map(|(k, a)| (k.into(), a)).collect();
        if let Some((name, _)) = objects.iter().find(|(_, a)| !a.is_commutative()) {
            return Err(Error::Unsupported(format!(
                "object {name} is not commutative; only commutative objects can be interpreted"
            )));
        }
        let mut table = BTreeMap::new();
        for (sig, m) in morphisms {
            let (Some(r), Some(s)) = (objects.get(&sig.source), objects.get(&sig.target)) else {
                return input_err(format!("morphism {} mentions an unknown object", sig.label));
            };
            if !same_algebra(m.left_algebra(), r) || !same_algebra(m.right_algebra(), s) {
                return input_err(format!("bimodule for {} does not match its objects", sig.label));
            }
            table.insert(sig.label.clone(), (sig, m));
        }
        Ok(Self {
            objects,
            morphisms: table,
        })
    }

    pub fn signatures(&self) -> Vec<MorphismSig> {
        self.morphisms.values().map(|(s, _)| s.clone()).collect()
    }

    pub fn object_names(&self) -> Vec<Arc<str>> {
        self.objects.keys().cloned().collect()
    }

    fn morphism(&self, sig: &MorphismSig) -> Result<&Bimodule<F>> {
        match self.morphisms.get(&sig.label) {
            Some((s, m)) if s == sig => Ok(m),
            Some(_) => input_err(format!("label {} is used with the wrong objects", sig.label)),
            None => input_err(format!("unknown label {}", sig.label)),
        }
    }

    fn atom_algebra(&self, atom: &Atom) -> Result<Arc<Algebra<F>>> {
        let Some(a) = self.objects.get(&atom.object) else {
            return input_err(format!("unknown object {}", atom.object));
        };
        Ok(if atom.rev { Arc::new(a.opposite()) } else { a.clone() })
    }

    pub fn boundary_algebra(&self, b: &[Atom]) -> Result<Arc<Algebra<F>>> {
        let Some((first, rest)) = b.split_first() else {
            return Ok(Arc::new(scalars()));
        };
        let mut acc = self.atom_algebra(first)?;
        for atom in rest {
            acc = Arc::new(acc.tensor(&*self.atom_algebra(atom)?));
        }
        Ok(acc)
    }
}

/// `M` over `(A, B)` with both actions moved to one side: over
/// `(B^op ⊗ A, F)` or `(A ⊗ B^op, F)` acting by `m ↦ a m b`.
fn fold_left<F: Field>(m: &Bimodule<F>, op_first: bool) -> Result<Bimodule<F>> {
    let (a, b) = (m.left_algebra(), m.right_algebra());
    let bop = b.opposite();
    let (da, db) = (a.dim(), b.dim());
    let algebra = Arc::new(if op_first { bop.tensor(a) } else { a.tensor(&bop) });
    let table = (0..da * db)
        .map(|k| {
            let (x, y) = if op_first { (k % da, k / da) } else { (k / db, k % db) };
            (0..m.dim())
                .map(|v| m.act_right(m.left_action(x, v), &SparseVec::unit(y)))
                .collect()
        })
        .collect();
    let k = Arc::new(scalars::<F>());
    let trivial = vec![(0..m.dim()).map(SparseVec::unit).collect()];
    Bimodule::from_actions(algebra, k, m.dim(), table, trivial, m.pointing().map(<[F]>::to_vec))
}

/// `M` over `(A, B)` as a right module: over `(F, B ⊗ A^op)` or
/// `(F, A^op ⊗ B)` acting by `m ↦ a m b`.
fn fold_right<F: Field>(m: &Bimodule<F>, op_first: bool) -> Result<Bimodule<F>> {
    let (a, b) = (m.left_algebra(), m.right_algebra());
    let aop = a.opposite();
    let (da, db) = (a.dim(), b.dim());
    let algebra = Arc::new(if op_first { aop.tensor(b) } else { b.tensor(&aop) });
    let table = (0..da * db)
        .map(|k| {
            let (x, y) = if op_first { (k / db, k % db) } else { (k % da, k / da) };
            (0..m.dim())
                .map(|v| m.act_right(m.left_action(x, v), &SparseVec::unit(y)))
                .collect()
        })
        .collect();
    let k = Arc::new(scalars::<F>());
    let trivial = vec![(0..m.dim()).map(SparseVec::unit).collect()];
    Bimodule::from_actions(k, algebra, m.dim(), trivial, table, m.pointing().map(<[F]>::to_vec))
}

/// The bimodule of one letter: the generator's bimodule whiskered by the
/// regular bimodules of the pads.
pub fn letter_bimodule<F: Field>(env: &Environment<F>, l: &Letter) -> Result<Bimodule<F>> {
    let core = match &l.generator {
        Generator::Morphism(sig) => env.morphism(sig)?.clone(),
        Generator::MorphismOp(sig) => env.morphism(sig)?.side_swap()?,
        Generator::Twist { object, .. } => Bimodule::regular(&env.atom_algebra(object)?),
        Generator::FoldEv { morphism, direction } => {
            fold_left(env.morphism(morphism)?, *direction == FoldDirection::Up)?
        }
        Generator::FoldCoev { morphism, direction } => {
            fold_right(env.morphism(morphism)?, *direction == FoldDirection::Down)?
        }
    };
    let mut out = core;
    if !l.left.is_empty() {
        out = Bimodule::regular(&env.boundary_algebra(&l.left)?).external_tensor(&out);
    }
    if !l.right.is_empty() {
        out = out.external_tensor(&Bimodule::regular(&env.boundary_algebra(&l.right)?));
    }
    Ok(out)
}

/// The word as an iterated relative tensor product; the empty word is the
/// regular bimodule of its boundary.
pub fn interpret<F: Field>(w: &StripWord, env: &Environment<F>) -> Result<Bimodule<F>> {
    let Some((first, rest)) = w.letters.split_first() else {
        return Ok(Bimodule::regular(&env.boundary_algebra(&w.source)?));
    };
    let mut acc = letter_bimodule(env, first)?;
    for l in rest {
        acc = relative_tensor(&acc, &letter_bimodule(env, l)?)?.bimodule;
    }
    Ok(acc)
}

/// All letters that can follow a word ending at `at`, over the given
/// morphisms, keeping boundaries at most `max_width` wide.
pub fn letters_from(at: &[Atom], sigs: &[MorphismSig], max_width: usize, folds: bool) -> Vec<Letter> {
    let mut out = Vec::new();
    for p in 0..at.len() {
        let (left, right) = (at[..p].to_vec(), at[p + 1..].to_vec());
        let x = &at[p];
        let mut push = |g: Generator| out.push(Letter::whiskered(g, left.clone(), right.clone()));
        if !x.rev {
            for s in sigs.iter().filter(|s| s.source == x.object) {
                push(Generator::Morphism(s.clone()));
            }
            for s in sigs.iter().filter(|s| s.target == x.object) {
                push(Generator::MorphismOp(s.clone()));
            }
        }
        for turn in [Turn::Clockwise, Turn::Counterclockwise] {
            push(Generator::Twist { object: x.clone(), turn });
        }
    }
    if !folds {
        return out;
    }
    for p in 0..at.len().saturating_sub(1) {
        for s in sigs {
            for direction in [FoldDirection::Up, FoldDirection::Down] {
                let g = Generator::FoldEv {
                    morphism: s.clone(),
                    direction,
                };
                if g.source() == at[p..p + 2] {
                    out.push(Letter::whiskered(g, at[..p].to_vec(), at[p + 2..].to_vec()));
                }
            }
        }
    }
    if at.len() + 2 <= max_width {
        for p in 0..=at.len() {
            for s in sigs {
                for direction in [FoldDirection::Up, FoldDirection::Down] {
                    let g = Generator::FoldCoev {
                        morphism: s.clone(),
                        direction,
                    };
                    out.push(Letter::whiskered(g, at[..p].to_vec(), at[p..].to_vec()));
                }
            }
        }
    }
    out
}

/// Calls `visit` on every well-typed word from `source` with at most
/// `max_len` letters, in depth-first order with shared prefixes.
pub fn for_each_word(
    source: &Boundary,
    sigs: &[MorphismSig],
    max_len: usize,
    max_width: usize,
    folds: bool,
    visit: &mut dyn FnMut(&StripWord),
) {
    fn go(
        w: &mut StripWord,
        sigs: &[MorphismSig],
        max_len: usize,
        max_width: usize,
        folds: bool,
        visit: &mut dyn FnMut(&StripWord),
    ) {
        visit(w);
        if w.len() == max_len {
            return;
        }
        for l in letters_from(&w.target(), sigs, max_width, folds) {
            w.letters.push(l);
            go(w, sigs, max_len, max_width, folds, visit);
            w.letters.pop();
        }
    }
    let mut w = StripWord::identity(source.clone());
    go(&mut w, sigs, max_len, max_width, folds, visit);
}

/// Interpretations of many words, sharing work on common prefixes.
pub struct Interpreter<'a, F> {
    env: &'a Environment<F>,
    letters: HashMap<Letter, Bimodule<F>>,
    words: HashMap<StripWord, Bimodule<F>>,
}

impl<'a, F: Field> Interpreter<'a, F> {
    pub fn new(env: &'a Environment<F>) -> Self {
        Self {
            env,
            letters: HashMap::new(),
            words: HashMap::new(),
        }
    }

    fn letter(&mut self, l: &Letter) -> Result<Bimodule<F>> {
        if let Some(m) = self.letters.get(l) {
            return Ok(m.clone());
        }
        let m = letter_bimodule(self.env, l)?;
        self.letters.insert(l.clone(), m.clone());
        Ok(m)
    }

    pub fn interpret(&mut self, w: &StripWord) -> Result<Bimodule<F>> {
        if let Some(m) = self.words.get(w) {
            return Ok(m.clone());
        }
        let m = match w.letters.split_last() {
            None => Bimodule::regular(&self.env.boundary_algebra(&w.source)?),
            Some((last, [])) => self.letter(last)?,
            Some((last, init)) => {
                let prefix = StripWord {
                    source: w.source.clone(),
                    letters: init.to_vec(),
                };
                let p = self.interpret(&prefix)?;
                relative_tensor(&p, &self.letter(last)?)?.bimodule
            }
        };
        self.words.insert(w.clone(), m.clone());
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bimod::iso_search;
    use crate::corpus::{group_algebra, twisted_cyclic};
    use crate::morita::dual_data;
    use crate::Rational;

    fn a() -> MorphismSig {
        MorphismSig::new("A", "R", "S")
    }

    fn gen(g: Generator) -> Letter {
        Letter::bare(g)
    }

    fn tw(obj: &str, turn: Turn) -> Letter {
        gen(Generator::Twist {
            object: Atom::new(obj),
            turn,
        })
    }

    fn word(ls: Vec<Letter>) -> StripWord {
        StripWord::from_letters(ls).unwrap()
    }

    use Turn::{Clockwise as CW, Counterclockwise as CCW};

    #[test]
    fn twist_pair_cancels() {
        let w = word(vec![tw("R", CW), tw("R", CCW)]);
        let trace = rewrite_trace(&w, &Rule::ONE_CELL);
        assert_eq!(trace.len(), 1);
        assert!(normalize(&w).is_empty());
        assert_eq!(normalize(&w).source(), &vec![Atom::new("R")]);
        let e = StripWord::identity(vec![Atom::new("R")]);
        assert_eq!(normalize(&e), e);
    }

    #[test]
    fn ill_typed_word_is_rejected() {
        let l = gen(Generator::Morphism(a()));
        assert!(StripWord::from_letters(vec![l.clone(), l]).is_err());
    }

    #[test]
    fn adjoint_words_pass_zigzags() {
        let m = StripWord::single(gen(Generator::Morphism(a())));
        let left = left_adjoint_word(&m).unwrap();
        assert_eq!(
            left.counit.source,
            word(vec![
                gen(Generator::Morphism(a())),
                tw("S", CW),
                gen(Generator::MorphismOp(a())),
                tw("R", CCW)
            ])
        );
        assert!(left.counit.target.is_empty());
        assert!(zigzag_check(&m, &left).unwrap().holds);
        let right = right_adjoint_word(&m).unwrap();
        assert!(zigzag_check(&m, &right).unwrap().holds);

        let snake = m.then(&left.adjoint).unwrap().then(&m).unwrap();
        assert_eq!(straighten(&snake), m);
        // Without the bend move the snake is already 1-cell normal.
        assert_eq!(normalize(&snake), snake);

        let untwisted = AdjointPackage {
            adjoint: word(vec![tw("S", CW), gen(Generator::MorphismOp(a())), tw("R", CW)]),
            ..left.clone()
        };
        let z = zigzag_check(&m, &untwisted).unwrap();
        assert!(!z.holds);
        assert!(z.first.winding() != 0);
    }

    #[test]
    fn adjoints_of_adjoints() {
        let l = gen(Generator::Morphism(a()));
        let m = StripWord::single(l.clone());
        let left = left_adjoint_word(&m).unwrap().adjoint;
        let twice = left_adjoint_word(&left).unwrap().adjoint;
        assert_eq!(normalize(&twice), twist_conjugate(&l, CW, 2).unwrap());
        let back = right_adjoint_word(&left).unwrap().adjoint;
        assert_eq!(normalize(&back), m);
    }

    #[test]
    fn zigzags_on_every_generator() {
        let sig = a();
        let gens = vec![
            Generator::Morphism(sig.clone()),
            Generator::MorphismOp(sig),
            Generator::Twist { object: Atom::new("R"), turn: CW },
            Generator::Twist { object: Atom::new("S"), turn: CCW },
        ];
        for g in gens {
            for pads in [(vec![], vec![]), (vec![Atom::new("T")], vec![Atom::new("R").reversed()])] {
                let m = StripWord::single(Letter::whiskered(g.clone(), pads.0.clone(), pads.1.clone()));
                assert!(zigzag_check(&m, &left_adjoint_word(&m).unwrap()).unwrap().holds, "{m}");
                assert!(zigzag_check(&m, &right_adjoint_word(&m).unwrap()).unwrap().holds, "{m}");
            }
        }
    }

    #[test]
    fn fold_snakes_straighten() {
        let (a, b) = (MorphismSig::new("A", "R", "S"), MorphismSig::new("B", "S", "T"));
        let (r, t) = (Atom::new("R"), Atom::new("T"));
        let up = word(vec![
            Letter::whiskered(
                Generator::FoldCoev { morphism: b.clone(), direction: FoldDirection::Up },
                vec![],
                vec![r.clone()],
            ),
            Letter::whiskered(
                Generator::FoldEv { morphism: a.clone(), direction: FoldDirection::Up },
                vec![t.clone()],
                vec![],
            ),
        ]);
        let down = word(vec![
            Letter::whiskered(
                Generator::FoldCoev { morphism: b.clone(), direction: FoldDirection::Down },
                vec![r.clone()],
                vec![],
            ),
            Letter::whiskered(
                Generator::FoldEv { morphism: a.clone(), direction: FoldDirection::Down },
                vec![],
                vec![t.clone()],
            ),
        ]);
        let straight = word(vec![gen(Generator::Morphism(a)), gen(Generator::Morphism(b))]);
        assert_eq!(normalize(&up), straight);
        assert_eq!(normalize(&down), straight);
    }

    fn c2_env() -> Environment<Rational> {
        let r = Arc::new(group_algebra::<Rational>(2));
        Environment::new(
            vec![("R", r.clone()), ("S", r.clone()), ("T", r.clone())],
            vec![
                (MorphismSig::new("A", "R", "S"), Bimodule::regular(&r)),
                (MorphismSig::new("B", "S", "T"), Bimodule::regular(&r)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn fold_evaluation_is_the_duality_evaluation() {
        let r = Arc::new(group_algebra::<Rational>(3));
        let env = Environment::new(
            vec![("R", r.clone())],
            vec![(MorphismSig::new("id", "R", "R"), Bimodule::regular(&r))],
        )
        .unwrap();
        let sig = MorphismSig::new("id", "R", "R");
        let ev = StripWord::single(gen(Generator::FoldEv { morphism: sig.clone(), direction: FoldDirection::Up }));
        let coev = StripWord::single(gen(Generator::FoldCoev { morphism: sig, direction: FoldDirection::Up }));
        let d = dual_data(&r);
        assert_eq!(interpret(&ev, &env).unwrap(), d.ev);
        assert_eq!(interpret(&coev, &env).unwrap(), d.coev);
    }

    #[test]
    fn one_cell_moves_are_sound() {
        let env = c2_env();
        let sigs = env.signatures();
        let mut interp = Interpreter::new(&env);
        let mut checked = 0;
        for_each_word(&vec![Atom::new("R")], &sigs, 4, 3, true, &mut |w| {
            for step in one_step_rewrites(w, &Rule::ONE_CELL) {
                let x = interp.interpret(w).unwrap();
                let y = interp.interpret(&step.result).unwrap();
                assert!(iso_search(&x, &y).is_some(), "{w} vs {}", step.result);
                checked += 1;
            }
        });
        assert!(checked > 0);
    }

    #[test]
    fn twisted_environment_interprets() {
        let r = Arc::new(group_algebra::<Rational>(3));
        let m = twisted_cyclic::<Rational>();
        let env = Environment::new(vec![("R", r.clone())], vec![(MorphismSig::new("A", "R", "R"), m.clone())]).unwrap();
        let sig = MorphismSig::new("A", "R", "R");
        let w = word(vec![gen(Generator::Morphism(sig.clone())), gen(Generator::MorphismOp(sig))]);
        let x = interpret(&w, &env).unwrap();
        assert_eq!(x.dim(), 3);
    }

    #[test]
    fn noncommutative_environment_is_rejected() {
        let m2 = Arc::new(crate::corpus::matrix_algebra::<Rational>(2));
        let err = Environment::<Rational>::new(vec![("R", m2)], vec![]).unwrap_err();
        assert!(matches!(err, Error::Unsupported(_)));
    }

    #[test]
    fn sweep_visits_every_word() {
        let sigs = vec![a(), MorphismSig::new("B", "S", "S")];
        let source = vec![Atom::new("R")];
        let mut words = 0;
        for_each_word(&source, &sigs, 6, 1, false, &mut |_| words += 1);
        let sweep = confluence_sweep(&source, &sigs, 6, 1, false, &Rule::ALL);
        assert_eq!(sweep.words, words);
        assert!(sweep.overlapping > 0);
        assert!(sweep.holds());
    }

    #[test]
    fn rewriting_is_locally_confluent_on_short_words() {
        let sigs = vec![a()];
        for source in [vec![Atom::new("R")], vec![Atom::new("S")]] {
            for_each_word(&source, &sigs, 8, 1, false, &mut |w| {
                assert!(confluence_failures(w, &Rule::ALL).is_empty(), "{w}");
            });
        }
        for_each_word(&vec![Atom::new("R")], &sigs, 4, 3, true, &mut |w| {
            assert!(confluence_failures(w, &Rule::ALL).is_empty(), "{w}");
        });
    }
}
