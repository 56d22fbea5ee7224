//! Finite-domain problems, assignments, and brute-force solution enumeration.
//!
//! Variables are indexed `0..n`. Matrix models flatten row-major, so cell
//! `(i, j)` of an `r x c` model is variable `i * c + j`. Domains are ordered
//! lists and every ordering in the crate compares values by their position in
//! the domain, not by their numeric value.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub type Value = i64;

/// Enumeration refuses spaces larger than this unless the caller passes a cap.
pub const ENUMERATION_LIMIT: u128 = 1 << 24;

/// A complete assignment: one value per variable.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Assignment(Vec<Value>);

impl Assignment {
    pub fn new(values: Vec<Value>) -> Self {
        Assignment(values)
    }

    pub fn zeros(n: usize) -> Self {
        Assignment(vec![0; n])
    }

    pub fn values(&self) -> &[Value] {
        &self.0
    }

    pub fn into_values(self) -> Vec<Value> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, var: usize) -> Value {
        self.0[var]
    }

    pub fn is_all_zero(&self) -> bool {
        self.0.iter().all(|&v| v == 0)
    }

    /// Checks arity and domain membership.
    pub fn validate(&self, domains: &[Vec<Value>]) -> Result<()> {
        if self.0.len() != domains.len() {
            return Err(Error::ArityMismatch { expected: domains.len(), actual: self.0.len() });
        }
        for (var, (value, domain)) in self.0.iter().zip(domains).enumerate() {
            if !domain.contains(value) {
                return Err(Error::ValueOutOfDomain { var, value: *value });
            }
        }
        Ok(())
    }
}

impl From<Vec<Value>> for Assignment {
    fn from(values: Vec<Value>) -> Self {
        Assignment(values)
    }
}

/// Single-digit values print as a compact string (`0110`, leftmost is
/// variable 0); anything else prints comma-separated.
impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|v| (0..=9).contains(v)) {
            for v in &self.0 {
                write!(f, "{v}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
            f.write_str(&parts.join(","))
        }
    }
}

impl FromStr for Assignment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.contains(',') {
            s.split(',')
                .map(|t| t.trim().parse::<Value>().map_err(|e| Error::Parse(format!("bad value {t:?}: {e}"))))
                .collect::<Result<Vec<_>>>()
                .map(Assignment)
        } else {
            s.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(Value::from)
                        .ok_or_else(|| Error::Parse(format!("bad digit {c:?} in {s:?}")))
                })
                .collect::<Result<Vec<_>>>()
                .map(Assignment)
        }
    }
}

/// Matrix shape for matrix models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Shape {
    pub rows: usize,
    pub cols: usize,
}

impl Shape {
    pub fn new(rows: usize, cols: usize) -> Self {
        Shape { rows, cols }
    }

    pub fn cells(&self) -> usize {
        self.rows * self.cols
    }

    pub fn index(&self, row: usize, col: usize) -> usize {
        row * self.cols + col
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.rows, self.cols)
    }
}

impl FromStr for Shape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (r, c) = s
            .split_once(['x', 'X'])
            .ok_or_else(|| Error::Parse(format!("shape must look like RxC, got {s:?}")))?;
        let parse =
            |t: &str| t.trim().parse::<usize>().map_err(|e| Error::Parse(format!("bad shape {s:?}: {e}")));
        Ok(Shape::new(parse(r)?, parse(c)?))
    }
}

/// `X = value` when positive, `X != value` otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Literal {
    pub var: usize,
    pub value: Value,
    pub positive: bool,
}

impl Literal {
    pub fn eq(var: usize, value: Value) -> Self {
        Literal { var, value, positive: true }
    }

    pub fn ne(var: usize, value: Value) -> Self {
        Literal { var, value, positive: false }
    }

    pub fn holds(&self, values: &[Value]) -> bool {
        (values[self.var] == self.value) == self.positive
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Constraint {
    /// Extensional table of allowed tuples over `scope`.
    Table { scope: Vec<usize>, tuples: Vec<Vec<Value>> },
    /// Disjunction of literals.
    Clause { literals: Vec<Literal> },
    /// Unary `var = value`.
    Fix { var: usize, value: Value },
}

impl Constraint {
    /// Builds a table constraint; tuples are sorted and deduplicated.
    pub fn table(scope: Vec<usize>, mut tuples: Vec<Vec<Value>>) -> Self {
        tuples.sort();
        tuples.dedup();
        Constraint::Table { scope, tuples }
    }

    /// Tabulates `allowed` over the cartesian product of the scope's domains.
    pub fn table_from_predicate(
        scope: Vec<usize>,
        domains: &[Vec<Value>],
        mut allowed: impl FnMut(&[Value]) -> bool,
    ) -> Self {
        let scoped: Vec<Vec<Value>> = scope.iter().map(|&v| domains[v].clone()).collect();
        let tuples =
            AssignmentSpace::new(&scoped).map(Assignment::into_values).filter(|t| allowed(t)).collect();
        Constraint::table(scope, tuples)
    }

    pub fn clause(literals: Vec<Literal>) -> Self {
        Constraint::Clause { literals }
    }

    pub fn fix(var: usize, value: Value) -> Self {
        Constraint::Fix { var, value }
    }

    /// Variables the constraint mentions, in order of first appearance.
    pub fn scope(&self) -> Vec<usize> {
        match self {
            Constraint::Table { scope, .. } => scope.clone(),
            Constraint::Clause { literals } => {
                let mut vars = Vec::new();
                for lit in literals {
                    if !vars.contains(&lit.var) {
                        vars.push(lit.var);
                    }
                }
                vars
            }
            Constraint::Fix { var, .. } => vec![*var],
        }
    }

    /// Evaluates the constraint on a full value vector.
    pub fn holds(&self, values: &[Value]) -> bool {
        match self {
            Constraint::Table { scope, tuples } => {
                let key: Vec<Value> = scope.iter().map(|&v| values[v]).collect();
                tuples.binary_search(&key).is_ok()
            }
            Constraint::Clause { literals } => literals.iter().any(|l| l.holds(values)),
            Constraint::Fix { var, value } => values[*var] == *value,
        }
    }

    fn validate(&self, domains: &[Vec<Value>]) -> Result<()> {
        let n = domains.len();
        let bad_var = |v: usize| Error::InvalidProblem(format!("variable {v} out of range 0..{n}"));
        match self {
            Constraint::Table { scope, tuples } => {
                if let Some(&v) = scope.iter().find(|&&v| v >= n) {
                    return Err(bad_var(v));
                }
                for t in tuples {
                    if t.len() != scope.len() {
                        return Err(Error::InvalidProblem(format!(
                            "table tuple {t:?} has arity {} but scope has {}",
                            t.len(),
                            scope.len()
                        )));
                    }
                    for (&var, value) in scope.iter().zip(t) {
                        if !domains[var].contains(value) {
                            return Err(Error::ValueOutOfDomain { var, value: *value });
                        }
                    }
                }
            }
            Constraint::Clause { literals } => {
                if let Some(l) = literals.iter().find(|l| l.var >= n) {
                    return Err(bad_var(l.var));
                }
            }
            Constraint::Fix { var, .. } => {
                if *var >= n {
                    return Err(bad_var(*var));
                }
            }
        }
        Ok(())
    }
}

/// A finite-domain constraint problem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Problem {
    domains: Vec<Vec<Value>>,
    constraints: Vec<Constraint>,
    shape: Option<Shape>,
}

impl Problem {
    pub fn new(domains: Vec<Vec<Value>>, constraints: Vec<Constraint>, shape: Option<Shape>) -> Result<Self> {
        for (var, d) in domains.iter().enumerate() {
            if d.is_empty() {
                return Err(Error::InvalidProblem(format!("variable {var} has an empty domain")));
            }
            let mut sorted = d.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != d.len() {
                return Err(Error::InvalidProblem(format!("variable {var} has repeated domain values")));
            }
        }
        if let Some(s) = shape {
            if s.cells() != domains.len() {
                return Err(Error::InvalidProblem(format!(
                    "shape {s} has {} cells but there are {} variables",
                    s.cells(),
                    domains.len()
                )));
            }
        }
        for c in &constraints {
            c.validate(&domains)?;
        }
        Ok(Problem { domains, constraints, shape })
    }

    /// `n` binary variables, no constraints.
    pub fn binary(n: usize) -> Self {
        Problem { domains: vec![vec![0, 1]; n], constraints: Vec::new(), shape: None }
    }

    /// Unconstrained binary matrix model.
    pub fn binary_matrix(shape: Shape) -> Self {
        Problem { domains: vec![vec![0, 1]; shape.cells()], constraints: Vec::new(), shape: Some(shape) }
    }

    pub fn with_constraint(mut self, c: Constraint) -> Result<Self> {
        c.validate(&self.domains)?;
        self.constraints.push(c);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.domains.len()
    }

    pub fn domains(&self) -> &[Vec<Value>] {
        &self.domains
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn shape(&self) -> Option<Shape> {
        self.shape
    }

    /// Product of domain sizes, `None` on 128-bit overflow.
    pub fn space_size(&self) -> Option<u128> {
        space_size(&self.domains)
    }
}

pub fn space_size(domains: &[Vec<Value>]) -> Option<u128> {
    domains.iter().try_fold(1u128, |acc, d| acc.checked_mul(d.len() as u128))
}

/// True iff `a` satisfies every constraint of `p`.
pub fn check_assignment(p: &Problem, a: &Assignment) -> Result<bool> {
    if a.len() != p.n() {
        return Err(Error::ArityMismatch { expected: p.n(), actual: a.len() });
    }
    Ok(p.constraints.iter().all(|c| c.holds(a.values())))
}

/// All solutions in lexicographic order of domain positions.
///
/// Without a cap, spaces above [`ENUMERATION_LIMIT`] are refused. With a cap,
/// finding more than `cap` solutions is an error rather than a truncation.
pub fn enumerate_solutions(p: &Problem, cap: Option<usize>) -> Result<Vec<Assignment>> {
    if cap.is_none() {
        match p.space_size() {
            Some(size) if size <= ENUMERATION_LIMIT => {}
            size => {
                return Err(Error::SpaceTooLarge {
                    size: size.map_or_else(|| ">2^128".to_string(), |s| s.to_string()),
                    limit: ENUMERATION_LIMIT,
                })
            }
        }
    }
    let n = p.n();
    let mut out = Vec::new();
    if n == 0 {
        if p.constraints.iter().all(|c| c.holds(&[])) {
            out.push(Assignment::default());
        }
        return Ok(out);
    }

    // constraints are checked as soon as their last scope variable is set
    let mut ready: Vec<Vec<&Constraint>> = vec![Vec::new(); n];
    for c in &p.constraints {
        match c.scope().into_iter().max() {
            Some(last) => ready[last].push(c),
            None => {
                if !c.holds(&[]) {
                    return Ok(out);
                }
            }
        }
    }

    let mut values: Vec<Value> = p.domains.iter().map(|d| d[0]).collect();
    let mut cursor = vec![0usize; n];
    let mut depth = 0usize;
    loop {
        let d = &p.domains[depth];
        if cursor[depth] == d.len() {
            cursor[depth] = 0;
            if depth == 0 {
                return Ok(out);
            }
            depth -= 1;
            cursor[depth] += 1;
            continue;
        }
        values[depth] = d[cursor[depth]];
        if ready[depth].iter().all(|c| c.holds(&values)) {
            if depth + 1 == n {
                if let Some(cap) = cap {
                    if out.len() == cap {
                        return Err(Error::CapExceeded { what: "solutions", cap });
                    }
                }
                out.push(Assignment(values.clone()));
                cursor[depth] += 1;
            } else {
                depth += 1;
            }
        } else {
            cursor[depth] += 1;
        }
    }
}

/// Iterates the full cartesian product of the domains in lexicographic order
/// of domain positions.
#[derive(Debug, Clone)]
pub struct AssignmentSpace<'a> {
    domains: &'a [Vec<Value>],
    cursor: Option<Vec<usize>>,
}

impl<'a> AssignmentSpace<'a> {
    pub fn new(domains: &'a [Vec<Value>]) -> Self {
        let cursor = if domains.iter().any(|d| d.is_empty()) { None } else { Some(vec![0; domains.len()]) };
        AssignmentSpace { domains, cursor }
    }
}

impl Iterator for AssignmentSpace<'_> {
    type Item = Assignment;

    fn next(&mut self) -> Option<Assignment> {
        let cursor = self.cursor.as_mut()?;
        let item = Assignment(cursor.iter().zip(self.domains).map(|(&i, d)| d[i]).collect());
        let mut pos = cursor.len();
        loop {
            if pos == 0 {
                self.cursor = None;
                break;
            }
            pos -= 1;
            cursor[pos] += 1;
            if cursor[pos] < self.domains[pos].len() {
                break;
            }
            cursor[pos] = 0;
        }
        Some(item)
    }
}

/// Per-variable candidate sets for propagation.
///
/// Candidates keep the domain order. An empty candidate list marks failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomainStore {
    candidates: Vec<Vec<Value>>,
}

impl DomainStore {
    pub fn full(domains: &[Vec<Value>]) -> Self {
        DomainStore { candidates: domains.to_vec() }
    }

    /// Builds a store, checking every candidate set against `domains`.
    pub fn restricted(domains: &[Vec<Value>], candidates: Vec<Vec<Value>>) -> Result<Self> {
        if candidates.len() != domains.len() {
            return Err(Error::InvalidStore(format!(
                "expected {} variables, got {}",
                domains.len(),
                candidates.len()
            )));
        }
        let mut out = Vec::with_capacity(domains.len());
        for (var, (cand, dom)) in candidates.iter().zip(domains).enumerate() {
            if let Some(v) = cand.iter().find(|v| !dom.contains(v)) {
                return Err(Error::ValueOutOfDomain { var, value: *v });
            }
            out.push(dom.iter().copied().filter(|v| cand.contains(v)).collect());
        }
        Ok(DomainStore { candidates: out })
    }

    pub fn len(&self) -> usize {
        self.candidates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }

    pub fn candidates(&self, var: usize) -> &[Value] {
        &self.candidates[var]
    }

    pub fn all(&self) -> &[Vec<Value>] {
        &self.candidates
    }

    pub fn contains(&self, var: usize, value: Value) -> bool {
        self.candidates[var].contains(&value)
    }

    pub fn is_failed(&self) -> bool {
        self.candidates.iter().any(Vec::is_empty)
    }

    pub fn is_fixed(&self, var: usize) -> bool {
        self.candidates[var].len() == 1
    }

    /// Keeps only values accepted by `keep`; returns how many were removed.
    pub fn retain(&mut self, var: usize, mut keep: impl FnMut(Value) -> bool) -> usize {
        let before = self.candidates[var].len();
        self.candidates[var].retain(|&v| keep(v));
        before - self.candidates[var].len()
    }

    pub fn total_size(&self) -> usize {
        self.candidates.iter().map(Vec::len).sum()
    }
}
