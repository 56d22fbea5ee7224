//! Symmetries, groups, orbits, and conjugation by an assignment permutation.
//!
//! Two representations coexist:
//!
//! * [`LiteralSymmetry`] acts on variable-value pairs through a variable
//!   permutation plus one value bijection per variable, so the image of a
//!   complete assignment is always a complete assignment.
//! * [`AssignmentSymmetry`] acts on whole assignments. It is either an
//!   explicit table (identity outside the listed set), the conjugate of
//!   another symmetry by an [`AssignmentPermutation`], or a composition.
//!
//! A group never mixes the two.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::model::{Assignment, AssignmentSpace, Shape, Value};
use crate::ordering::AssignmentPermutation;

pub const DEFAULT_CLOSURE_CAP: usize = 100_000;

/// `result[var_perm[i]] = val_maps[i](a[i])`.
///
/// Value maps are stored without their fixed points, so two literal
/// symmetries are equal iff they act identically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LiteralSymmetry {
    var_perm: Vec<usize>,
    val_maps: Vec<BTreeMap<Value, Value>>,
}

impl LiteralSymmetry {
    pub fn new(var_perm: Vec<usize>, val_maps: Vec<Vec<(Value, Value)>>) -> Result<Self> {
        let n = var_perm.len();
        let mut seen = vec![false; n];
        for &p in &var_perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidSymmetry(format!("{var_perm:?} is not a permutation")));
            }
        }
        if val_maps.len() != n {
            return Err(Error::InvalidSymmetry(format!("expected {n} value maps, got {}", val_maps.len())));
        }
        let mut maps = Vec::with_capacity(n);
        for (var, pairs) in val_maps.into_iter().enumerate() {
            let mut map = BTreeMap::new();
            let mut images = BTreeSet::new();
            for (from, to) in pairs {
                if map.insert(from, to).is_some() || !images.insert(to) {
                    return Err(Error::InvalidSymmetry(format!(
                        "value map of variable {var} is not injective"
                    )));
                }
            }
            map.retain(|k, v| k != v);
            maps.push(map);
        }
        Ok(LiteralSymmetry { var_perm, val_maps: maps })
    }

    pub fn identity(n: usize) -> Self {
        LiteralSymmetry { var_perm: (0..n).collect(), val_maps: vec![BTreeMap::new(); n] }
    }

    pub fn variable(var_perm: Vec<usize>) -> Result<Self> {
        let n = var_perm.len();
        Self::new(var_perm, vec![Vec::new(); n])
    }

    /// Interchanges values `a` and `b` of one variable.
    pub fn value_swap(n: usize, var: usize, a: Value, b: Value) -> Result<Self> {
        let mut maps = vec![Vec::new(); n];
        if var >= n {
            return Err(Error::InvalidSymmetry(format!("variable {var} out of range")));
        }
        maps[var] = vec![(a, b), (b, a)];
        Self::new((0..n).collect(), maps)
    }

    pub fn row_swap(shape: Shape, r1: usize, r2: usize) -> Self {
        let mut perm: Vec<usize> = (0..shape.cells()).collect();
        for c in 0..shape.cols {
            perm.swap(shape.index(r1, c), shape.index(r2, c));
        }
        LiteralSymmetry { var_perm: perm, val_maps: vec![BTreeMap::new(); shape.cells()] }
    }

    pub fn col_swap(shape: Shape, c1: usize, c2: usize) -> Self {
        let mut perm: Vec<usize> = (0..shape.cells()).collect();
        for r in 0..shape.rows {
            perm.swap(shape.index(r, c1), shape.index(r, c2));
        }
        LiteralSymmetry { var_perm: perm, val_maps: vec![BTreeMap::new(); shape.cells()] }
    }

    pub fn n(&self) -> usize {
        self.var_perm.len()
    }

    pub fn var_perm(&self) -> &[usize] {
        &self.var_perm
    }

    /// Non-identity value pairs of variable `var`.
    pub fn val_map(&self, var: usize) -> &BTreeMap<Value, Value> {
        &self.val_maps[var]
    }

    pub fn is_identity(&self) -> bool {
        self.var_perm.iter().enumerate().all(|(i, &p)| i == p) && self.val_maps.iter().all(BTreeMap::is_empty)
    }

    fn map_value(&self, var: usize, v: Value) -> Value {
        self.val_maps[var].get(&v).copied().unwrap_or(v)
    }

    /// Checks that the value map of every variable carries its domain onto
    /// the domain of the image variable.
    pub fn validate(&self, domains: &[Vec<Value>]) -> Result<()> {
        if domains.len() != self.n() {
            return Err(Error::ArityMismatch { expected: domains.len(), actual: self.n() });
        }
        for (var, dom) in domains.iter().enumerate() {
            let target = &domains[self.var_perm[var]];
            let mut image: Vec<Value> = dom.iter().map(|&v| self.map_value(var, v)).collect();
            image.sort_unstable();
            let mut expected = target.clone();
            expected.sort_unstable();
            if image != expected {
                return Err(Error::InvalidSymmetry(format!(
                    "variable {var}: value map does not carry its domain onto the domain of \
                     variable {}",
                    self.var_perm[var]
                )));
            }
        }
        Ok(())
    }

    pub fn apply(&self, a: &Assignment) -> Result<Assignment> {
        if a.len() != self.n() {
            return Err(Error::ArityMismatch { expected: self.n(), actual: a.len() });
        }
        let mut out = vec![0; self.n()];
        for (i, &v) in a.values().iter().enumerate() {
            out[self.var_perm[i]] = self.map_value(i, v);
        }
        Ok(Assignment::new(out))
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.n() != other.n() {
            return Err(Error::ArityMismatch { expected: self.n(), actual: other.n() });
        }
        let n = self.n();
        let var_perm: Vec<usize> = (0..n).map(|i| self.var_perm[other.var_perm[i]]).collect();
        let mut val_maps = Vec::with_capacity(n);
        for i in 0..n {
            let mid = other.var_perm[i];
            // a value can only move if one of the two maps moves it
            let keys: BTreeSet<Value> =
                other.val_maps[i].keys().chain(self.val_maps[mid].keys()).copied().collect();
            let mut map = BTreeMap::new();
            for v in keys {
                let w = self.map_value(mid, other.map_value(i, v));
                if w != v {
                    map.insert(v, w);
                }
            }
            val_maps.push(map);
        }
        Ok(LiteralSymmetry { var_perm, val_maps })
    }

    pub fn invert(&self) -> Self {
        let n = self.n();
        let mut var_perm = vec![0; n];
        let mut val_maps = vec![BTreeMap::new(); n];
        for i in 0..n {
            let j = self.var_perm[i];
            var_perm[j] = i;
            val_maps[j] = self.val_maps[i].iter().map(|(&k, &v)| (v, k)).collect();
        }
        LiteralSymmetry { var_perm, val_maps }
    }
}

#[derive(Debug)]
enum Action {
    Table(BTreeMap<Assignment, Assignment>),
    Conjugate { pi: Arc<AssignmentPermutation>, inner: Symmetry },
    Compose(AssignmentSymmetry, AssignmentSymmetry),
}

/// A bijection acting on whole assignments.
#[derive(Debug, Clone)]
pub struct AssignmentSymmetry(Arc<Action>);

impl AssignmentSymmetry {
    pub fn identity() -> Self {
        AssignmentSymmetry(Arc::new(Action::Table(BTreeMap::new())))
    }

    /// Explicit bijection on the listed assignments, identity elsewhere.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Assignment, Assignment)>) -> Result<Self> {
        let mut table = BTreeMap::new();
        for (from, to) in pairs {
            if table.insert(from.clone(), to).is_some() {
                return Err(Error::InvalidSymmetry(format!("{from} listed twice")));
            }
        }
        let sources: BTreeSet<&Assignment> = table.keys().collect();
        let images: BTreeSet<&Assignment> = table.values().collect();
        if sources != images {
            return Err(Error::InvalidSymmetry("listed pairs are not a bijection on the listed set".into()));
        }
        table.retain(|k, v| k != v);
        Ok(AssignmentSymmetry(Arc::new(Action::Table(table))))
    }

    /// Swaps two assignments.
    pub fn transposition(a: Assignment, b: Assignment) -> Self {
        let mut table = BTreeMap::new();
        if a != b {
            table.insert(a.clone(), b.clone());
            table.insert(b, a);
        }
        AssignmentSymmetry(Arc::new(Action::Table(table)))
    }

    /// Maps `cycle[i]` to `cycle[i + 1]`, wrapping around.
    pub fn cycle(cycle: &[Assignment]) -> Result<Self> {
        let k = cycle.len();
        Self::from_pairs((0..k).map(|i| (cycle[i].clone(), cycle[(i + 1) % k].clone())))
    }

    /// `π ∘ σ ∘ π⁻¹`.
    pub fn conjugate(pi: Arc<AssignmentPermutation>, inner: Symmetry) -> Self {
        AssignmentSymmetry(Arc::new(Action::Conjugate { pi, inner }))
    }

    /// The explicit table, if this symmetry is stored as one.
    pub fn table(&self) -> Option<&BTreeMap<Assignment, Assignment>> {
        match &*self.0 {
            Action::Table(t) => Some(t),
            _ => None,
        }
    }

    pub fn apply(&self, a: &Assignment) -> Result<Assignment> {
        match &*self.0 {
            Action::Table(t) => Ok(t.get(a).cloned().unwrap_or_else(|| a.clone())),
            Action::Conjugate { pi, inner } => pi.forward(&inner.apply(&pi.inverse(a)?)?),
            Action::Compose(outer, inner) => outer.apply(&inner.apply(a)?),
        }
    }

    pub fn compose(&self, other: &Self) -> Self {
        if let (Action::Table(s), Action::Table(o)) = (&*self.0, &*other.0) {
            let mut table = BTreeMap::new();
            for x in o.keys().chain(s.keys()) {
                let mid = o.get(x).unwrap_or(x);
                let y = s.get(mid).unwrap_or(mid);
                if y != x {
                    table.insert(x.clone(), y.clone());
                }
            }
            return AssignmentSymmetry(Arc::new(Action::Table(table)));
        }
        AssignmentSymmetry(Arc::new(Action::Compose(self.clone(), other.clone())))
    }

    pub fn invert(&self) -> Self {
        match &*self.0 {
            Action::Table(t) => AssignmentSymmetry(Arc::new(Action::Table(
                t.iter().map(|(k, v)| (v.clone(), k.clone())).collect(),
            ))),
            Action::Conjugate { pi, inner } => Self::conjugate(pi.clone(), inner.invert()),
            Action::Compose(outer, inner) => {
                AssignmentSymmetry(Arc::new(Action::Compose(inner.invert(), outer.invert())))
            }
        }
    }

    /// Explicit table of the action over `space`, fixed points dropped.
    pub fn tabulate<'a>(&self, space: impl IntoIterator<Item = &'a Assignment>) -> Result<Self> {
        if let Action::Table(_) = &*self.0 {
            return Ok(self.clone());
        }
        let mut table = BTreeMap::new();
        for a in space {
            let b = self.apply(a)?;
            if &b != a {
                table.insert(a.clone(), b);
            }
        }
        Ok(AssignmentSymmetry(Arc::new(Action::Table(table))))
    }
}

#[derive(Debug, Clone)]
pub enum Symmetry {
    Literal(LiteralSymmetry),
    Assignment(AssignmentSymmetry),
}

impl From<LiteralSymmetry> for Symmetry {
    fn from(s: LiteralSymmetry) -> Self {
        Symmetry::Literal(s)
    }
}

impl From<AssignmentSymmetry> for Symmetry {
    fn from(s: AssignmentSymmetry) -> Self {
        Symmetry::Assignment(s)
    }
}

impl Symmetry {
    pub fn apply(&self, a: &Assignment) -> Result<Assignment> {
        match self {
            Symmetry::Literal(s) => s.apply(a),
            Symmetry::Assignment(s) => s.apply(a),
        }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Symmetry) -> Result<Symmetry> {
        match (self, other) {
            (Symmetry::Literal(s), Symmetry::Literal(o)) => Ok(Symmetry::Literal(s.compose(o)?)),
            (Symmetry::Assignment(s), Symmetry::Assignment(o)) => Ok(Symmetry::Assignment(s.compose(o))),
            _ => Err(Error::MixedRepresentations),
        }
    }

    pub fn invert(&self) -> Symmetry {
        match self {
            Symmetry::Literal(s) => Symmetry::Literal(s.invert()),
            Symmetry::Assignment(s) => Symmetry::Assignment(s.invert()),
        }
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Symmetry::Literal(_))
    }
}

impl fmt::Display for Symmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symmetry::Literal(s) => {
                write!(f, "vars {:?}", s.var_perm)?;
                for (var, m) in s.val_maps.iter().enumerate().filter(|(_, m)| !m.is_empty()) {
                    write!(f, " x{var}:{m:?}")?;
                }
                Ok(())
            }
            Symmetry::Assignment(s) => match s.table() {
                Some(t) => write!(f, "table of {} moved assignments", t.len()),
                None => f.write_str("assignment-level action"),
            },
        }
    }
}

/// Adjacent row transpositions followed by adjacent column transpositions.
pub fn row_col_generators(shape: Shape) -> Vec<LiteralSymmetry> {
    let rows = (1..shape.rows).map(|r| LiteralSymmetry::row_swap(shape, r - 1, r));
    let cols = (1..shape.cols).map(|c| LiteralSymmetry::col_swap(shape, c - 1, c));
    rows.chain(cols).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum ElementKey {
    Literal(LiteralSymmetry),
    Table(Vec<(Assignment, Assignment)>),
}

/// A symmetry group given by generators over a fixed domain list.
#[derive(Debug, Clone)]
pub struct SymmetryGroup {
    domains: Vec<Vec<Value>>,
    generators: Vec<Symmetry>,
    cap: usize,
    closure: OnceLock<Result<Vec<Symmetry>>>,
}

impl SymmetryGroup {
    pub fn new(domains: Vec<Vec<Value>>, generators: Vec<Symmetry>) -> Result<Self> {
        let literal = generators.first().is_none_or(Symmetry::is_literal);
        if generators.iter().any(|g| g.is_literal() != literal) {
            return Err(Error::MixedRepresentations);
        }
        for g in &generators {
            match g {
                Symmetry::Literal(s) => s.validate(&domains)?,
                Symmetry::Assignment(s) => {
                    if let Some(t) = s.table() {
                        for a in t.keys() {
                            a.validate(&domains)?;
                        }
                    }
                }
            }
        }
        Ok(SymmetryGroup { domains, generators, cap: DEFAULT_CLOSURE_CAP, closure: OnceLock::new() })
    }

    pub fn trivial(domains: Vec<Vec<Value>>) -> Self {
        SymmetryGroup { domains, generators: Vec::new(), cap: DEFAULT_CLOSURE_CAP, closure: OnceLock::new() }
    }

    /// Row and column permutations of a matrix model.
    pub fn row_col(shape: Shape, domains: Vec<Vec<Value>>) -> Result<Self> {
        Self::new(domains, row_col_generators(shape).into_iter().map(Symmetry::Literal).collect())
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self.closure = OnceLock::new();
        self
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn domains(&self) -> &[Vec<Value>] {
        &self.domains
    }

    pub fn generators(&self) -> &[Symmetry] {
        &self.generators
    }

    fn is_literal(&self) -> bool {
        self.generators.first().is_none_or(Symmetry::is_literal)
    }

    fn identity(&self) -> Symmetry {
        if self.is_literal() {
            Symmetry::Literal(LiteralSymmetry::identity(self.domains.len()))
        } else {
            Symmetry::Assignment(AssignmentSymmetry::identity())
        }
    }

    /// All group elements, identity first, in breadth-first order.
    ///
    /// Assignment-level elements are deduplicated by their action over the
    /// full assignment space and returned in table form.
    pub fn closure(&self) -> Result<&[Symmetry]> {
        self.closure.get_or_init(|| self.compute_closure()).as_deref().map_err(Clone::clone)
    }

    fn compute_closure(&self) -> Result<Vec<Symmetry>> {
        let space: Option<Vec<Assignment>> = if self.is_literal()
            || self.generators.iter().all(|g| matches!(g, Symmetry::Assignment(s) if s.table().is_some()))
        {
            None
        } else {
            Some(AssignmentSpace::new(&self.domains).collect())
        };
        let canonical = |s: Symmetry| -> Result<(ElementKey, Symmetry)> {
            match s {
                Symmetry::Literal(l) => Ok((ElementKey::Literal(l.clone()), Symmetry::Literal(l))),
                Symmetry::Assignment(a) => {
                    let t = match &space {
                        Some(space) => a.tabulate(space)?,
                        None => a,
                    };
                    let key =
                        t.table().expect("tabulated").iter().map(|(k, v)| (k.clone(), v.clone())).collect();
                    Ok((ElementKey::Table(key), Symmetry::Assignment(t)))
                }
            }
        };

        let mut seen = BTreeSet::new();
        let mut elements = Vec::new();
        let mut queue = VecDeque::new();
        let (key, id) = canonical(self.identity())?;
        seen.insert(key);
        elements.push(id.clone());
        queue.push_back(id);
        while let Some(e) = queue.pop_front() {
            for g in &self.generators {
                let (key, c) = canonical(g.compose(&e)?)?;
                if seen.insert(key) {
                    if elements.len() == self.cap {
                        return Err(Error::CapExceeded { what: "group elements", cap: self.cap });
                    }
                    elements.push(c.clone());
                    queue.push_back(c);
                }
            }
        }
        Ok(elements)
    }

    /// Orbit of a single assignment, explored through the generators.
    pub fn orbit_of(&self, a: &Assignment) -> Result<Vec<Assignment>> {
        let mut seen = BTreeSet::new();
        seen.insert(a.clone());
        let mut orbit = vec![a.clone()];
        let mut i = 0;
        while i < orbit.len() {
            for g in &self.generators {
                let b = g.apply(&orbit[i])?;
                if seen.insert(b.clone()) {
                    if orbit.len() == self.cap {
                        return Err(Error::CapExceeded { what: "orbit members", cap: self.cap });
                    }
                    orbit.push(b);
                }
            }
            i += 1;
        }
        Ok(orbit)
    }
}

/// Disjoint blocks covering a solution set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitPartition {
    blocks: Vec<Vec<Assignment>>,
    block_of: HashMap<Assignment, usize>,
}

impl OrbitPartition {
    pub fn blocks(&self) -> &[Vec<Assignment>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn block_of(&self, a: &Assignment) -> Option<usize> {
        self.block_of.get(a).copied()
    }

    /// Block sizes in ascending order.
    pub fn size_profile(&self) -> Vec<usize> {
        let mut sizes: Vec<usize> = self.blocks.iter().map(Vec::len).collect();
        sizes.sort_unstable();
        sizes
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        // smaller index stays root so block order follows input order
        match ra.cmp(&rb) {
            std::cmp::Ordering::Less => self.parent[rb] = ra,
            std::cmp::Ordering::Greater => self.parent[ra] = rb,
            std::cmp::Ordering::Equal => {}
        }
    }
}

/// Symmetry classes of `solutions` under the group generated by `g`.
///
/// Works from generator edges only; the closure is never computed. Blocks
/// are ordered by their first member in `solutions`, and members keep the
/// input order.
pub fn orbits(solutions: &[Assignment], g: &SymmetryGroup) -> Result<OrbitPartition> {
    let mut index: HashMap<Assignment, usize> = HashMap::with_capacity(solutions.len());
    let mut distinct = Vec::with_capacity(solutions.len());
    for s in solutions {
        if !index.contains_key(s) {
            index.insert(s.clone(), distinct.len());
            distinct.push(s.clone());
        }
    }
    let mut uf = UnionFind::new(distinct.len());
    for (i, a) in distinct.iter().enumerate() {
        for gen in g.generators() {
            let b = gen.apply(a)?;
            let j = *index.get(&b).ok_or_else(|| Error::EscapesSolutionSet(a.to_string()))?;
            uf.union(i, j);
        }
    }
    let mut root_block = HashMap::new();
    let mut blocks: Vec<Vec<Assignment>> = Vec::new();
    let mut block_of = HashMap::with_capacity(distinct.len());
    for (i, a) in distinct.into_iter().enumerate() {
        let root = uf.find(i);
        let b = *root_block.entry(root).or_insert_with(|| {
            blocks.push(Vec::new());
            blocks.len() - 1
        });
        blocks[b].push(a.clone());
        block_of.insert(a, b);
    }
    Ok(OrbitPartition { blocks, block_of })
}

/// The group generated by `π σ π⁻¹` for every generator `σ` of `g`.
pub fn conjugate(pi: &Arc<AssignmentPermutation>, g: &SymmetryGroup) -> Result<SymmetryGroup> {
    if pi.domains() != g.domains() {
        return Err(Error::InvalidSymmetry("permutation and group act on different spaces".into()));
    }
    let gens = g
        .generators()
        .iter()
        .map(|s| Symmetry::Assignment(AssignmentSymmetry::conjugate(pi.clone(), s.clone())))
        .collect();
    Ok(SymmetryGroup::new(g.domains().to_vec(), gens)?.with_cap(g.cap()))
}

/// Returns the block correspondence `tau` (block `i` of `p1` maps onto block
/// `tau[i]` of `p2`) when `pi` carries `p1` onto `p2`, otherwise `None`.
pub fn partitions_isomorphic(
    p1: &OrbitPartition,
    p2: &OrbitPartition,
    pi: &AssignmentPermutation,
) -> Result<Option<Vec<usize>>> {
    if p1.len() != p2.len() {
        return Ok(None);
    }
    let mut tau = Vec::with_capacity(p1.len());
    let mut used = vec![false; p2.len()];
    for block in p1.blocks() {
        let image = block.iter().map(|a| pi.forward(a)).collect::<Result<Vec<_>>>()?;
        let Some(j) = image.first().and_then(|a| p2.block_of(a)) else {
            return Ok(None);
        };
        if used[j] || p2.blocks()[j].len() != image.len() || image.iter().any(|a| p2.block_of(a) != Some(j)) {
            return Ok(None);
        }
        used[j] = true;
        tau.push(j);
    }
    Ok(Some(tau))
}

/// Image `{π(a) | a ∈ set}` of an extensionally given constraint set.
pub fn map_constraint_set(
    pi: &AssignmentPermutation,
    set: &BTreeSet<Assignment>,
) -> Result<BTreeSet<Assignment>> {
    set.iter().map(|a| pi.forward(a)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordering::{build_pi, OrderingKind, SimpleOrdering};

    fn bits(s: &str) -> Assignment {
        s.parse().unwrap()
    }

    fn binary(n: usize) -> Vec<Vec<Value>> {
        vec![vec![0, 1]; n]
    }

    fn space(n: usize) -> Vec<Assignment> {
        AssignmentSpace::new(&binary(n)).collect()
    }

    #[test]
    fn identity_action() {
        let id = LiteralSymmetry::identity(4);
        assert_eq!(id.apply(&bits("0110")).unwrap(), bits("0110"));
        assert_eq!(AssignmentSymmetry::identity().apply(&bits("0110")).unwrap(), bits("0110"));
    }

    #[test]
    fn last_variable_value_swap() {
        let s = LiteralSymmetry::value_swap(4, 3, 0, 1).unwrap();
        assert_eq!(s.apply(&bits("1230")).unwrap(), bits("1231"));
        assert_eq!(s.apply(&bits("1231")).unwrap(), bits("1230"));
    }

    #[test]
    fn row_swap_on_two_by_two() {
        let s = LiteralSymmetry::row_swap(Shape::new(2, 2), 0, 1);
        assert_eq!(s.apply(&bits("0111")).unwrap(), bits("1101"));
        assert!(s.compose(&s).unwrap().is_identity());
    }

    #[test]
    fn col_then_row_swap_is_half_turn() {
        let shape = Shape::new(2, 2);
        let both =
            LiteralSymmetry::col_swap(shape, 0, 1).compose(&LiteralSymmetry::row_swap(shape, 0, 1)).unwrap();
        for a in space(4) {
            let v = a.values();
            let rotated = Assignment::new(vec![v[3], v[2], v[1], v[0]]);
            assert_eq!(both.apply(&a).unwrap(), rotated);
        }
    }

    #[test]
    fn compose_with_inverse_is_identity() {
        let s = LiteralSymmetry::new(vec![2, 0, 1], vec![vec![(0, 1), (1, 0)], vec![], vec![(0, 1), (1, 0)]])
            .unwrap();
        let inv = s.invert();
        assert!(s.compose(&inv).unwrap().is_identity());
        assert!(inv.compose(&s).unwrap().is_identity());
        for a in space(3) {
            assert_eq!(inv.apply(&s.apply(&a).unwrap()).unwrap(), a);
        }
    }

    #[test]
    fn literal_compose_matches_sequential_action() {
        let s1 = LiteralSymmetry::new(vec![1, 0, 2], vec![vec![(0, 1), (1, 0)], vec![], vec![]]).unwrap();
        let s2 = LiteralSymmetry::new(vec![0, 2, 1], vec![vec![], vec![], vec![(0, 1), (1, 0)]]).unwrap();
        let c = s1.compose(&s2).unwrap();
        for a in space(3) {
            assert_eq!(c.apply(&a).unwrap(), s1.apply(&s2.apply(&a).unwrap()).unwrap());
        }
    }

    #[test]
    fn invalid_literal_symmetries() {
        assert!(LiteralSymmetry::variable(vec![0, 0]).is_err());
        assert!(LiteralSymmetry::new(vec![0], vec![vec![(0, 1), (1, 1)]]).is_err());
        let shrink = LiteralSymmetry::new(vec![0], vec![vec![(0, 2)]]).unwrap();
        assert!(shrink.validate(&binary(1)).is_err());
    }

    #[test]
    fn mixed_representations_rejected() {
        let l = Symmetry::Literal(LiteralSymmetry::identity(2));
        let a = Symmetry::Assignment(AssignmentSymmetry::identity());
        assert_eq!(l.compose(&a).unwrap_err(), Error::MixedRepresentations);
        assert_eq!(SymmetryGroup::new(binary(2), vec![l, a]).unwrap_err(), Error::MixedRepresentations);
    }

    #[test]
    fn assignment_table_must_be_bijection() {
        assert!(AssignmentSymmetry::from_pairs([(bits("00"), bits("01"))]).is_err());
        let t = AssignmentSymmetry::transposition(bits("00"), bits("11"));
        assert_eq!(t.apply(&bits("00")).unwrap(), bits("11"));
        assert_eq!(t.apply(&bits("01")).unwrap(), bits("01"));
        let c = AssignmentSymmetry::cycle(&[bits("00"), bits("01"), bits("11")]).unwrap();
        let inv = c.invert();
        for a in space(2) {
            assert_eq!(inv.apply(&c.apply(&a).unwrap()).unwrap(), a);
        }
    }

    #[test]
    fn closure_sizes() {
        let inv = Symmetry::Literal(LiteralSymmetry::value_swap(2, 0, 0, 1).unwrap());
        assert_eq!(SymmetryGroup::new(binary(2), vec![inv]).unwrap().closure().unwrap().len(), 2);
        let g22 = SymmetryGroup::row_col(Shape::new(2, 2), binary(4)).unwrap();
        assert_eq!(g22.closure().unwrap().len(), 4);
        let g33 = SymmetryGroup::row_col(Shape::new(3, 3), binary(9)).unwrap();
        assert_eq!(g33.closure().unwrap().len(), 36);
        assert!(g33.closure().unwrap()[0].apply(&bits("101010101")).unwrap() == bits("101010101"));
    }

    #[test]
    fn closure_cap_overflow() {
        let g = SymmetryGroup::row_col(Shape::new(3, 3), binary(9)).unwrap().with_cap(10);
        assert!(matches!(g.closure(), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn two_by_two_full_space_has_seven_orbits() {
        let g = SymmetryGroup::row_col(Shape::new(2, 2), binary(4)).unwrap();
        let p = orbits(&space(4), &g).unwrap();
        assert_eq!(p.len(), 7);
        assert_eq!(p.size_profile(), [1, 1, 2, 2, 2, 4, 4]);
    }

    #[test]
    fn trivial_group_gives_singletons() {
        let p = orbits(&space(3), &SymmetryGroup::trivial(binary(3))).unwrap();
        assert_eq!(p.len(), 8);
    }

    #[test]
    fn escaping_generator_is_an_error() {
        let g = SymmetryGroup::row_col(Shape::new(2, 2), binary(4)).unwrap();
        let sols = vec![bits("0011"), bits("0000")];
        assert!(matches!(orbits(&sols, &g), Err(Error::EscapesSolutionSet(_))));
    }

    #[test]
    fn conjugation_by_identity_keeps_action() {
        let g = SymmetryGroup::row_col(Shape::new(2, 2), binary(4)).unwrap();
        let pi = Arc::new(AssignmentPermutation::identity(binary(4)).unwrap());
        let c = conjugate(&pi, &g).unwrap();
        for (s, t) in g.generators().iter().zip(c.generators()) {
            for a in space(4) {
                assert_eq!(s.apply(&a).unwrap(), t.apply(&a).unwrap());
            }
        }
    }

    #[test]
    fn conjugated_closure_is_tabulated() {
        let g = SymmetryGroup::row_col(Shape::new(2, 2), binary(4)).unwrap();
        let gray = SimpleOrdering::binary(OrderingKind::Gray, 4, None).unwrap();
        let pi = Arc::new(build_pi(&gray).unwrap());
        let c = conjugate(&pi, &g).unwrap();
        let elems = c.closure().unwrap();
        assert_eq!(elems.len(), 4);
        assert!(elems.iter().all(|e| matches!(e, Symmetry::Assignment(s) if s.table().is_some())));
    }

    #[test]
    fn isomorphism_checks() {
        let g = SymmetryGroup::row_col(Shape::new(2, 2), binary(4)).unwrap();
        let p = orbits(&space(4), &g).unwrap();
        let id = AssignmentPermutation::identity(binary(4)).unwrap();
        let tau = partitions_isomorphic(&p, &p, &id).unwrap().unwrap();
        assert_eq!(tau, (0..7).collect::<Vec<_>>());
        let singletons = orbits(&space(4), &SymmetryGroup::trivial(binary(4))).unwrap();
        assert_eq!(partitions_isomorphic(&p, &singletons, &id).unwrap(), None);
    }

    #[test]
    fn mapped_set_keeps_size() {
        let gray = SimpleOrdering::binary(OrderingKind::Gray, 3, None).unwrap();
        let pi = build_pi(&gray).unwrap();
        let set: BTreeSet<Assignment> = space(3).into_iter().step_by(3).collect();
        let image = map_constraint_set(&pi, &set).unwrap();
        assert_eq!(image.len(), set.len());
        let id = AssignmentPermutation::identity(binary(3)).unwrap();
        assert_eq!(map_constraint_set(&id, &set).unwrap(), set);
    }

    #[test]
    fn orbit_of_single_assignment() {
        let g = SymmetryGroup::row_col(Shape::new(2, 2), binary(4)).unwrap();
        let mut o = g.orbit_of(&bits("1101")).unwrap();
        o.sort();
        assert_eq!(o, [bits("0111"), bits("1011"), bits("1101"), bits("1110")]);
    }
}
