//! The diagrammatic syllogistic calculus.
//!
//! Each categorical proposition is an indecomposable diagram of term nodes,
//! bullets and oriented arrows:
//!
//! ```text
//! A(S,P)  S → P
//! E(S,P)  S → • ← P
//! I(S,P)  S ← • → P
//! O(S,P)  S ← • → • ← P
//! ```
//!
//! A syllogism is proved by superposing premiss diagrams on their common
//! extremal terms and deleting each junction term that sits between two
//! concordant arrows. Bullets are never created or deleted, so the bullet
//! count of the premisses must equal that of the conclusion.

use std::fmt;

use itertools::Itertools;
use serde::Serialize;
use thiserror::Error;

use crate::olog::{Form, Proposition, Statement, TypeId};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub enum Node {
    Term(TypeId),
    Bullet,
}

impl Node {
    pub fn term(&self) -> Option<&TypeId> {
        match self {
            Node::Term(t) => Some(t),
            Node::Bullet => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Arrow {
    Right,
    Left,
}

impl Arrow {
    pub fn flip(self) -> Arrow {
        match self {
            Arrow::Right => Arrow::Left,
            Arrow::Left => Arrow::Right,
        }
    }
}

/// An alternating sequence of nodes and arrows; `arrows[k]` joins
/// `nodes[k]` and `nodes[k + 1]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SyllDiagram {
    nodes: Vec<Node>,
    arrows: Vec<Arrow>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("a diagram needs {expected} arrows for {nodes} nodes, got {got}")]
    ArrowCount { nodes: usize, expected: usize, got: usize },
    #[error("a diagram must begin and end at a term")]
    BulletAtEnd,
}

impl SyllDiagram {
    pub fn new(nodes: Vec<Node>, arrows: Vec<Arrow>) -> Result<Self, DiagramError> {
        if nodes.is_empty() || arrows.len() + 1 != nodes.len() {
            return Err(DiagramError::ArrowCount {
                nodes: nodes.len(),
                expected: nodes.len().saturating_sub(1),
                got: arrows.len(),
            });
        }
        let d = SyllDiagram { nodes, arrows };
        if !d.is_well_formed() {
            return Err(DiagramError::BulletAtEnd);
        }
        Ok(d)
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn first_term(&self) -> &TypeId {
        self.nodes[0].term().expect("diagrams begin at a term")
    }

    pub fn last_term(&self) -> &TypeId {
        self.nodes[self.nodes.len() - 1].term().expect("diagrams end at a term")
    }

    /// Nonempty, begins and ends at a term.
    pub fn is_well_formed(&self) -> bool {
        matches!(self.nodes.first(), Some(Node::Term(_)))
            && matches!(self.nodes.last(), Some(Node::Term(_)))
            && self.arrows.len() + 1 == self.nodes.len()
    }

    /// Positions of term nodes strictly inside the diagram.
    fn interior_terms(&self) -> impl Iterator<Item = (usize, &TypeId)> {
        let last = self.nodes.len() - 1;
        self.nodes
            .iter()
            .enumerate()
            .filter(move |&(i, _)| i > 0 && i < last)
            .filter_map(|(i, n)| n.term().map(|t| (i, t)))
    }
}

impl fmt::Display for SyllDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, node) in self.nodes.iter().enumerate() {
            if i > 0 {
                let arrow = match self.arrows[i - 1] {
                    Arrow::Right => "→",
                    Arrow::Left => "←",
                };
                write!(f, " {arrow} ")?;
            }
            match node {
                Node::Term(t) => write!(f, "{t}")?,
                Node::Bullet => write!(f, "•")?,
            }
        }
        Ok(())
    }
}

pub fn diagram_of(statement: &Statement) -> SyllDiagram {
    use Arrow::*;
    let s = Node::Term(statement.subject.clone());
    let p = Node::Term(statement.predicate.clone());
    let (nodes, arrows) = match statement.form {
        Form::A => (vec![s, p], vec![Right]),
        Form::E => (vec![s, Node::Bullet, p], vec![Right, Left]),
        Form::I => (vec![s, Node::Bullet, p], vec![Left, Right]),
        Form::O => (vec![s, Node::Bullet, Node::Bullet, p], vec![Left, Right, Left]),
    };
    SyllDiagram { nodes, arrows }
}

/// Mirror image: nodes reversed, arrows reversed and flipped.
pub fn reverse(d: &SyllDiagram) -> SyllDiagram {
    SyllDiagram {
        nodes: d.nodes.iter().rev().cloned().collect(),
        arrows: d.arrows.iter().rev().map(|a| a.flip()).collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot superpose: `{left_end}` and `{right_start}` are different terms")]
pub struct SuperpositionError {
    pub left_end: TypeId,
    pub right_start: TypeId,
}

/// Glues `d2` after `d1`, sharing the common extremal term once.
pub fn superpose(d1: &SyllDiagram, d2: &SyllDiagram) -> Result<SyllDiagram, SuperpositionError> {
    if d1.last_term() != d2.first_term() {
        return Err(SuperpositionError {
            left_end: d1.last_term().clone(),
            right_start: d2.first_term().clone(),
        });
    }
    let mut nodes = d1.nodes.clone();
    nodes.extend(d2.nodes[1..].iter().cloned());
    let mut arrows = d1.arrows.clone();
    arrows.extend(d2.arrows.iter().copied());
    Ok(SyllDiagram { nodes, arrows })
}

pub fn bullet_count(d: &SyllDiagram) -> usize {
    d.nodes.iter().filter(|n| **n == Node::Bullet).count()
}

/// Why a syllogism, or one step of its proof, is rejected.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Error)]
pub enum Rejection {
    #[error("bullet count {premisses} ≠ {conclusion}")]
    BulletCountMismatch { premisses: usize, conclusion: usize },
    #[error("middle term `{middle}` sits between discordant arrows")]
    DiscordantArrows { middle: TypeId },
    #[error("the reduced diagram {diagram} is not a categorical proposition")]
    ResultNotWellFormed { diagram: String },
    #[error("the reduced diagram proves {found}, not {expected}")]
    ConclusionMismatch { found: Proposition, expected: Proposition },
    #[error("no ordering of the premisses chains them on common terms")]
    NotSuperposable,
    #[error("`{term}` is not an interior term of {diagram}")]
    MissingMiddle { term: TypeId, diagram: String },
    #[error("not a syllogism: {0}")]
    NotASyllogism(String),
}

impl Rejection {
    /// How far a candidate proof got before failing; the furthest failure is
    /// the one reported.
    fn progress(&self) -> u8 {
        match self {
            Rejection::NotASyllogism(_) | Rejection::MissingMiddle { .. } => 0,
            Rejection::NotSuperposable => 1,
            Rejection::DiscordantArrows { .. } => 2,
            Rejection::ResultNotWellFormed { .. } => 3,
            Rejection::ConclusionMismatch { .. } => 4,
            Rejection::BulletCountMismatch { .. } => 5,
        }
    }
}

/// Replaces the interior term `m` and its two arrows by one arrow of the
/// same orientation. With several occurrences, the first is deleted.
pub fn delete_middle(d: &SyllDiagram, m: &TypeId) -> Result<SyllDiagram, Rejection> {
    let Some((pos, _)) = d.interior_terms().find(|(_, t)| *t == m) else {
        return Err(Rejection::MissingMiddle {
            term: m.clone(),
            diagram: d.to_string(),
        });
    };
    delete_at(d, pos)
}

fn delete_at(d: &SyllDiagram, pos: usize) -> Result<SyllDiagram, Rejection> {
    let (before, after) = (d.arrows[pos - 1], d.arrows[pos]);
    if before != after {
        let middle = d.nodes[pos].term().expect("deleting a term").clone();
        return Err(Rejection::DiscordantArrows { middle });
    }
    let mut nodes = d.nodes.clone();
    nodes.remove(pos);
    let mut arrows = d.arrows.clone();
    arrows.remove(pos);
    Ok(SyllDiagram { nodes, arrows })
}

/// The proposition drawn by `d` or by its reversal.
pub fn classify(d: &SyllDiagram) -> Option<Proposition> {
    use Arrow::*;
    let first = d.nodes.first()?.term()?.clone();
    let last = d.nodes.last()?.term()?.clone();
    if d.nodes[1..d.nodes.len() - 1].iter().any(|n| *n != Node::Bullet) {
        return None;
    }
    Some(match d.arrows.as_slice() {
        [Right] => Proposition::a(first, last),
        [Left] => Proposition::a(last, first),
        [Right, Left] => Proposition::e(first, last),
        [Left, Right] => Proposition::i(first, last),
        [Left, Right, Left] => Proposition::o(first, last),
        [Right, Left, Right] => Proposition::o(last, first),
        _ => return None,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum SyllRule {
    Premiss(Statement),
    /// The premiss I(X,X), "Some X exists".
    ExistentialImport(TypeId),
    Reversal,
    Superposition,
    /// Deletion of the junction term `middle`.
    Composition { middle: TypeId },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SyllProofTree {
    pub root: SyllDiagram,
    pub rule: SyllRule,
    pub children: Vec<SyllProofTree>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("proof step {rule:?} does not reproduce {expected}")]
pub struct ReplayError {
    pub rule: SyllRule,
    pub expected: String,
}

impl SyllProofTree {
    fn leaf(statement: &Statement) -> Self {
        let rule = if statement.form == Form::I && statement.subject == statement.predicate {
            SyllRule::ExistentialImport(statement.subject.clone())
        } else {
            SyllRule::Premiss(statement.clone())
        };
        SyllProofTree {
            root: diagram_of(statement),
            rule,
            children: Vec::new(),
        }
    }

    /// The proposition proved by this tree.
    pub fn conclusion(&self) -> Option<Proposition> {
        classify(&self.root)
    }

    pub fn count(&self, pred: &dyn Fn(&SyllRule) -> bool) -> usize {
        usize::from(pred(&self.rule)) + self.children.iter().map(|c| c.count(pred)).sum::<usize>()
    }

    pub fn reversals(&self) -> usize {
        self.count(&|r| *r == SyllRule::Reversal)
    }

    /// Statements used at the leaves, left to right.
    pub fn leaves(&self) -> Vec<Statement> {
        match &self.rule {
            SyllRule::Premiss(s) => vec![s.clone()],
            SyllRule::ExistentialImport(x) => vec![Statement::new(Form::I, x.clone(), x.clone())],
            _ => self.children.iter().flat_map(|c| c.leaves()).collect(),
        }
    }

    /// Re-executes every rule bottom-up and checks each stored diagram.
    pub fn replay(&self) -> Result<SyllDiagram, ReplayError> {
        let kids = self
            .children
            .iter()
            .map(SyllProofTree::replay)
            .collect::<Result<Vec<_>, _>>()?;
        let produced = match (&self.rule, kids.as_slice()) {
            (SyllRule::Premiss(s), []) => Some(diagram_of(s)),
            (SyllRule::ExistentialImport(x), []) => {
                Some(diagram_of(&Statement::new(Form::I, x.clone(), x.clone())))
            }
            (SyllRule::Reversal, [d]) => Some(reverse(d)),
            (SyllRule::Superposition, [l, r]) => superpose(l, r).ok(),
            (SyllRule::Composition { middle }, [d]) => delete_middle(d, middle).ok(),
            _ => None,
        };
        match produced {
            Some(d) if d == self.root => Ok(d),
            _ => Err(ReplayError {
                rule: self.rule.clone(),
                expected: self.root.to_string(),
            }),
        }
    }

    fn write_indented(&self, f: &mut fmt::Formatter<'_>, depth: usize) -> fmt::Result {
        let rule = match &self.rule {
            SyllRule::Premiss(s) => format!("premiss {s}"),
            SyllRule::ExistentialImport(x) => format!("existential import I({x},{x})"),
            SyllRule::Reversal => "reversal".to_string(),
            SyllRule::Superposition => "superposition".to_string(),
            SyllRule::Composition { middle } => format!("composition, deleting {middle}"),
        };
        writeln!(f, "{:indent$}{}    [{}]", "", self.root, rule, indent = depth * 2)?;
        for child in &self.children {
            child.write_indented(f, depth + 1)?;
        }
        Ok(())
    }
}

impl fmt::Display for SyllProofTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_indented(f, 0)
    }
}

/// Proves `conclusion` from one to three premisses, at most one of which is
/// an existential import `I(X,X)` when three are given.
///
/// Candidates are tried with the fewest reversals first, then by premiss
/// order (lexicographic), then by which premisses are reversed (first
/// premiss varying slowest). The first chain that reduces to the
/// conclusion, up to reversal, is returned.
pub fn prove(premisses: &[Statement], conclusion: &Statement) -> Result<SyllProofTree, Rejection> {
    check_pattern(premisses, conclusion)?;
    let have: usize = premisses.iter().map(|p| bullet_count(&diagram_of(p))).sum();
    let want = bullet_count(&diagram_of(conclusion));
    if have != want {
        return Err(Rejection::BulletCountMismatch {
            premisses: have,
            conclusion: want,
        });
    }
    search(premisses, &conclusion.proposition())
}

fn check_pattern(premisses: &[Statement], conclusion: &Statement) -> Result<(), Rejection> {
    let imports = premisses
        .iter()
        .filter(|p| p.form == Form::I && p.subject == p.predicate)
        .count();
    match premisses.len() {
        1 | 2 => {}
        3 if imports >= 1 => {}
        3 => {
            return Err(Rejection::NotASyllogism(
                "three premisses need an existential import I(X,X)".into(),
            ))
        }
        n => return Err(Rejection::NotASyllogism(format!("{n} premisses"))),
    }
    for term in [&conclusion.subject, &conclusion.predicate] {
        if !premisses.iter().any(|p| &p.subject == term || &p.predicate == term) {
            return Err(Rejection::NotASyllogism(format!(
                "conclusion term `{term}` does not occur in the premisses"
            )));
        }
    }
    Ok(())
}

fn search(premisses: &[Statement], target: &Proposition) -> Result<SyllProofTree, Rejection> {
    let k = premisses.len();
    let mut worst: Option<Rejection> = None;
    for reversals in 0..=k as u32 {
        for order in (0..k).permutations(k) {
            for mask in (0..(1u32 << k)).filter(|m| m.count_ones() == reversals) {
                let reversed = |pos: usize| mask & (1 << (k - 1 - pos)) != 0;
                let attempt = chain(order.iter().enumerate().map(|(pos, &i)| (&premisses[i], reversed(pos))));
                let failure = match attempt {
                    Ok(tree) => match classify(&tree.root) {
                        Some(p) if &p == target => return Ok(tree),
                        Some(found) => Rejection::ConclusionMismatch {
                            found,
                            expected: target.clone(),
                        },
                        None => Rejection::ResultNotWellFormed {
                            diagram: tree.root.to_string(),
                        },
                    },
                    Err(r) => r,
                };
                if worst.as_ref().is_none_or(|w| failure.progress() > w.progress()) {
                    worst = Some(failure);
                }
            }
        }
    }
    Err(worst.unwrap_or(Rejection::NotSuperposable))
}

/// Superposes the given premisses in order and deletes each junction term.
fn chain<'a>(mut steps: impl Iterator<Item = (&'a Statement, bool)>) -> Result<SyllProofTree, Rejection> {
    let oriented = |(s, rev): (&Statement, bool)| {
        let leaf = SyllProofTree::leaf(s);
        if rev {
            SyllProofTree {
                root: reverse(&leaf.root),
                rule: SyllRule::Reversal,
                children: vec![leaf],
            }
        } else {
            leaf
        }
    };
    let mut acc = oriented(steps.next().expect("at least one premiss"));
    for step in steps {
        let next = oriented(step);
        let junction = acc.root.nodes.len() - 1;
        let glued = superpose(&acc.root, &next.root).map_err(|_| Rejection::NotSuperposable)?;
        let middle = acc.root.last_term().clone();
        let sup = SyllProofTree {
            root: glued,
            rule: SyllRule::Superposition,
            children: vec![acc, next],
        };
        let reduced = delete_at(&sup.root, junction)?;
        acc = SyllProofTree {
            root: reduced,
            rule: SyllRule::Composition { middle },
            children: vec![sup],
        };
    }
    Ok(acc)
}

/// For a diagonally opposed pair `{A(S,P), O(S,P)}` or `{I(S,P), E(S,P)}`,
/// a proof of `O(S,S)` or, failing that, `O(P,P)`, with S and P taken in
/// the order written in `p`.
pub fn derive_contradiction(p: &Statement, q: &Statement) -> Option<SyllProofTree> {
    let (pp, qp) = (p.proposition(), q.proposition());
    let same_terms = pp.subject() == qp.subject() && pp.predicate() == qp.predicate();
    let diagonal = matches!(
        (pp.form(), qp.form()),
        (Form::A, Form::O) | (Form::O, Form::A) | (Form::I, Form::E) | (Form::E, Form::I)
    );
    if !same_terms || !diagonal {
        return None;
    }
    let pair = [p.clone(), q.clone()];
    let terms = [p.subject.clone(), p.predicate.clone()];
    terms
        .into_iter()
        .find_map(|x| search(&pair, &Proposition::o(x.clone(), x)).ok())
}

/// The four figures, as (major premiss terms, minor premiss terms) over
/// the terms S, M, P. The conclusion is always over (S, P).
pub const FIGURES: [[(&str, &str); 2]; 4] = [
    [("M", "P"), ("S", "M")],
    [("P", "M"), ("S", "M")],
    [("M", "P"), ("M", "S")],
    [("P", "M"), ("M", "S")],
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MoodVerdict {
    /// 1 to 4.
    pub figure: u8,
    /// Three letters: major, minor, conclusion.
    pub mood: String,
    pub premisses: [Statement; 2],
    pub conclusion: Statement,
    /// Valid with no extra premiss.
    pub valid: bool,
    /// Terms whose existential import makes an otherwise invalid form valid.
    pub valid_with_import: Vec<TypeId>,
    /// Rejection of the unassisted form, when invalid.
    pub rejection: Option<Rejection>,
}

impl MoodVerdict {
    pub fn is_valid(&self, with_import: bool) -> bool {
        self.valid || (with_import && !self.valid_with_import.is_empty())
    }
}

/// Runs [`prove`] on all 256 forms, ordered by figure then mood letters.
/// With `with_import`, invalid forms are retried with `I(X,X)` added for
/// each of S, M and P.
pub fn enumerate_moods(with_import: bool) -> Vec<MoodVerdict> {
    let mut out = Vec::with_capacity(256);
    for (fi, figure) in FIGURES.iter().enumerate() {
        for (major, minor, concl) in itertools::iproduct!(Form::ALL, Form::ALL, Form::ALL) {
            let premisses = [
                Statement::new(major, figure[0].0, figure[0].1),
                Statement::new(minor, figure[1].0, figure[1].1),
            ];
            let conclusion = Statement::new(concl, "S", "P");
            let result = prove(&premisses, &conclusion);
            let valid = result.is_ok();
            let mut valid_with_import = Vec::new();
            if with_import && !valid {
                for x in ["S", "M", "P"] {
                    let mut extended = premisses.to_vec();
                    extended.push(Statement::new(Form::I, x, x));
                    if prove(&extended, &conclusion).is_ok() {
                        valid_with_import.push(TypeId::from(x));
                    }
                }
            }
            out.push(MoodVerdict {
                figure: fi as u8 + 1,
                mood: format!("{major}{minor}{concl}"),
                premisses,
                conclusion,
                valid,
                valid_with_import,
                rejection: result.err(),
            });
        }
    }
    out
}
