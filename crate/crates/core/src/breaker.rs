//! Leader-style symmetry-breaking constraints under any simple ordering.
//!
//! A leader constraint for symmetry `σ` and ordering `⪯` accepts `a` iff
//! `a ⪯ σ(a)`. Posting one for every element of a group keeps exactly the
//! `⪯`-least member of each orbit.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::{Assignment, Shape, Value};
use crate::ordering::SimpleOrdering;
use crate::symmetry::{orbits, LiteralSymmetry, OrbitPartition, Symmetry, SymmetryGroup};

/// Which symmetries receive a leader constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LeaderMode {
    /// Every element of the closure.
    Full,
    /// Generators only.
    Generators,
}

/// Breaking method as named on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    LeaderFull,
    LeaderGenerators,
    DoubleLex,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::LeaderFull, Method::LeaderGenerators, Method::DoubleLex];

    pub fn name(self) -> &'static str {
        match self {
            Method::LeaderFull => "leader-full",
            Method::LeaderGenerators => "leader-generators",
            Method::DoubleLex => "doublelex",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "leader-full" => Ok(Method::LeaderFull),
            "leader-generators" => Ok(Method::LeaderGenerators),
            "doublelex" => Ok(Method::DoubleLex),
            other => Err(Error::Parse(format!("unknown method {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    FullGroup,
    GeneratorsOnly,
    DoubleLex,
    Mapped,
}

/// `a ⪯ σ(a)`.
#[derive(Debug, Clone)]
pub struct LeaderConstraint {
    sigma: Symmetry,
    ordering: SimpleOrdering,
}

impl LeaderConstraint {
    pub fn new(sigma: Symmetry, ordering: SimpleOrdering) -> Self {
        LeaderConstraint { sigma, ordering }
    }

    pub fn sigma(&self) -> &Symmetry {
        &self.sigma
    }

    pub fn ordering(&self) -> &SimpleOrdering {
        &self.ordering
    }

    pub fn is_satisfied(&self, a: &Assignment) -> Result<bool> {
        let image = self.sigma.apply(a)?;
        Ok(self.ordering.compare(a, &image)? != Ordering::Greater)
    }
}

#[derive(Debug, Clone)]
enum Body {
    Leaders(Vec<LeaderConstraint>),
    Extensional(BTreeSet<Assignment>),
}

/// Conjunction of leader constraints, or an explicit satisfying set.
#[derive(Debug, Clone)]
pub struct SymmetryBreakingSet {
    provenance: Provenance,
    body: Body,
}

impl SymmetryBreakingSet {
    pub fn leaders(provenance: Provenance, constraints: Vec<LeaderConstraint>) -> Self {
        SymmetryBreakingSet { provenance, body: Body::Leaders(constraints) }
    }

    pub fn empty() -> Self {
        Self::leaders(Provenance::FullGroup, Vec::new())
    }

    /// A constraint set given by the assignments it admits.
    pub fn extensional(provenance: Provenance, admitted: BTreeSet<Assignment>) -> Self {
        SymmetryBreakingSet { provenance, body: Body::Extensional(admitted) }
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// Leader constraints; empty for extensional sets.
    pub fn constraints(&self) -> &[LeaderConstraint] {
        match &self.body {
            Body::Leaders(c) => c,
            Body::Extensional(_) => &[],
        }
    }

    pub fn admitted(&self) -> Option<&BTreeSet<Assignment>> {
        match &self.body {
            Body::Extensional(s) => Some(s),
            Body::Leaders(_) => None,
        }
    }

    pub fn len(&self) -> usize {
        match &self.body {
            Body::Leaders(c) => c.len(),
            Body::Extensional(s) => s.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn admits(&self, a: &Assignment) -> Result<bool> {
        match &self.body {
            Body::Leaders(cs) => {
                for c in cs {
                    if !c.is_satisfied(a)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Body::Extensional(s) => Ok(s.contains(a)),
        }
    }
}

fn is_identity(s: &Symmetry) -> bool {
    match s {
        Symmetry::Literal(l) => l.is_identity(),
        Symmetry::Assignment(a) => a.table().is_some_and(|t| t.is_empty()),
    }
}

/// One leader constraint per non-identity group element (or generator).
pub fn leader_constraints(
    g: &SymmetryGroup,
    o: &SimpleOrdering,
    mode: LeaderMode,
) -> Result<SymmetryBreakingSet> {
    let (provenance, symmetries) = match mode {
        LeaderMode::Full => (Provenance::FullGroup, g.closure()?),
        LeaderMode::Generators => (Provenance::GeneratorsOnly, g.generators()),
    };
    let constraints = symmetries
        .iter()
        .filter(|s| !is_identity(s))
        .map(|s| LeaderConstraint::new(s.clone(), o.clone()))
        .collect();
    Ok(SymmetryBreakingSet::leaders(provenance, constraints))
}

/// Lex-ordered adjacent rows and adjacent columns of a row-major matrix.
///
/// Row `i ≤lex` row `i+1` is the leader constraint of the row transposition
/// on the row-major vector; the same holds for columns.
pub fn doublelex_constraints(shape: Option<Shape>, domains: &[Vec<Value>]) -> Result<SymmetryBreakingSet> {
    let shape = shape.ok_or(Error::MissingShape)?;
    if shape.cells() != domains.len() {
        return Err(Error::ArityMismatch { expected: shape.cells(), actual: domains.len() });
    }
    let lex = SimpleOrdering::lex(domains.to_vec())?;
    let rows = (1..shape.rows).map(|r| LiteralSymmetry::row_swap(shape, r - 1, r));
    let cols = (1..shape.cols).map(|c| LiteralSymmetry::col_swap(shape, c - 1, c));
    let constraints =
        rows.chain(cols).map(|s| LeaderConstraint::new(Symmetry::Literal(s), lex.clone())).collect();
    Ok(SymmetryBreakingSet::leaders(Provenance::DoubleLex, constraints))
}

/// Solutions admitted by `b`, in input order.
pub fn filter_solutions(solutions: &[Assignment], b: &SymmetryBreakingSet) -> Result<Vec<Assignment>> {
    let mut out = Vec::new();
    for a in solutions {
        if b.admits(a)? {
            out.push(a.clone());
        }
    }
    Ok(out)
}

/// How many members of each orbit a breaking set admits.
#[derive(Debug, Clone)]
pub struct SurvivorReport {
    pub partition: OrbitPartition,
    pub survivors: Vec<Assignment>,
    pub per_orbit: Vec<usize>,
}

impl SurvivorReport {
    pub fn is_sound(&self) -> bool {
        self.per_orbit.iter().all(|&c| c >= 1)
    }

    pub fn is_complete(&self) -> bool {
        self.per_orbit.iter().all(|&c| c <= 1)
    }

    /// Orbits that keep more than one member.
    pub fn crowded_orbits(&self) -> Vec<usize> {
        (0..self.per_orbit.len()).filter(|&i| self.per_orbit[i] > 1).collect()
    }

    /// Orbits with no survivor.
    pub fn empty_orbits(&self) -> Vec<usize> {
        (0..self.per_orbit.len()).filter(|&i| self.per_orbit[i] == 0).collect()
    }
}

pub fn survivor_report(
    solutions: &[Assignment],
    b: &SymmetryBreakingSet,
    g: &SymmetryGroup,
) -> Result<SurvivorReport> {
    let partition = orbits(solutions, g)?;
    let survivors = filter_solutions(solutions, b)?;
    Ok(count_survivors(partition, survivors))
}

/// Per-orbit counts for an already filtered survivor list. Survivors that are
/// not solutions are ignored.
pub fn count_survivors(partition: OrbitPartition, survivors: Vec<Assignment>) -> SurvivorReport {
    let mut per_orbit = vec![0; partition.len()];
    let mut seen = BTreeSet::new();
    for a in &survivors {
        if let Some(b) = partition.block_of(a) {
            if seen.insert(a.clone()) {
                per_orbit[b] += 1;
            }
        }
    }
    SurvivorReport { partition, survivors, per_orbit }
}

pub fn is_sound(solutions: &[Assignment], b: &SymmetryBreakingSet, g: &SymmetryGroup) -> Result<bool> {
    Ok(survivor_report(solutions, b, g)?.is_sound())
}

pub fn is_complete(solutions: &[Assignment], b: &SymmetryBreakingSet, g: &SymmetryGroup) -> Result<bool> {
    Ok(survivor_report(solutions, b, g)?.is_complete())
}

/// The `o`-least member of a nonempty set of assignments.
pub fn ordering_minimum<'a>(
    members: impl IntoIterator<Item = &'a Assignment>,
    o: &SimpleOrdering,
) -> Result<Option<&'a Assignment>> {
    let mut best: Option<&Assignment> = None;
    for a in members {
        best = match best {
            None => Some(a),
            Some(b) => match o.compare(a, b)? {
                Ordering::Less => Some(a),
                Ordering::Equal if a != b => {
                    return Err(Error::InvariantViolation(format!(
                        "ordering ties distinct assignments {a} and {b}"
                    )))
                }
                _ => Some(b),
            },
        };
    }
    Ok(best)
}

/// True iff no member of the orbit of `a` precedes `a` under `o`.
pub fn min_in_class(a: &Assignment, g: &SymmetryGroup, o: &SimpleOrdering) -> Result<bool> {
    for b in g.orbit_of(a)? {
        if o.compare(&b, a)? == Ordering::Less {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Builds the breaking set for a named method.
pub fn breaking_set(
    method: Method,
    g: &SymmetryGroup,
    o: &SimpleOrdering,
    shape: Option<Shape>,
) -> Result<SymmetryBreakingSet> {
    match method {
        Method::LeaderFull => leader_constraints(g, o, LeaderMode::Full),
        Method::LeaderGenerators => leader_constraints(g, o, LeaderMode::Generators),
        Method::DoubleLex => doublelex_constraints(shape, g.domains()),
    }
}
