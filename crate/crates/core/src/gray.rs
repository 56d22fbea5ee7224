//! Decomposition of the Gray-code ordering constraint `Gray(X, Y)`.
//!
//! `X` precedes `Y` in the reflected binary Gray order iff at the first
//! position where they differ, `X` holds 0 when the shared prefix has an even
//! number of ones and 1 when it is odd. The state variables `Q_1..Q_{n+1}`
//! track that: `1` means "0 comes first here", `-1` means "1 comes first",
//! `0` means the vectors are already ordered.
//!
//! For every position `i` the decomposition posts
//!
//! ```text
//! Q_i != 1  or X_i <= Y_i
//! Q_i != -1 or X_i >= Y_i
//! X_i = Y_i or Q_{i+1} = 0
//! X_i = 1 or Y_i = 1 or Q_{i+1} = Q_i
//! X_i = 0 or Y_i = 0 or Q_{i+1} = -Q_i
//! ```
//!
//! plus `Q_1 = 1` and, in strict mode, `Q_{n+1} = 0`.
//!
//! The five lines of one position share `X_i`, `Y_i` and `Q_i`, so revising
//! them one at a time is weaker than domain consistency. Propagation
//! therefore runs on one table per position, the conjunction of its five
//! lines over `(Q_i, X_i, Y_i, Q_{i+1})`. Consecutive position tables share
//! only `Q_{i+1}`, which makes that network Berge acyclic.

use rand::Rng;

use crate::error::{Error, Result};
use crate::model::{Assignment, AssignmentSpace, Constraint, DomainStore, Value};
use crate::ordering::{OrderingKind, SimpleOrdering};
use crate::propagate::{is_berge_acyclic, Fixpoint, PropagationTrace, TableNetwork};

/// Largest `n` the enumeration oracle accepts.
pub const ORACLE_MAX_N: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LineKind {
    /// `Q_1 = 1`
    InitialState,
    /// `Q_{n+1} = 0`
    FinalState,
    /// `Q_i != 1 or X_i <= Y_i`
    ZeroFirst,
    /// `Q_i != -1 or X_i >= Y_i`
    OneFirst,
    /// `X_i = Y_i or Q_{i+1} = 0`
    Settles,
    /// `X_i = 1 or Y_i = 1 or Q_{i+1} = Q_i`
    ZerosKeep,
    /// `X_i = 0 or Y_i = 0 or Q_{i+1} = -Q_i`
    OnesFlip,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionLine {
    pub kind: LineKind,
    /// 0-based position for per-position lines.
    pub position: Option<usize>,
    pub constraint: Constraint,
}

/// Which constraint network propagation runs on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Granularity {
    /// One table per decomposition line.
    PerLine,
    /// One table per position (conjunction of its five lines).
    PerPosition,
}

/// Outcome of propagating one store.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Propagation {
    pub fixpoint: Fixpoint,
    pub trace: PropagationTrace,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayDecomposition {
    n: usize,
    strict: bool,
    domains: Vec<Vec<Value>>,
    lines: Vec<DecompositionLine>,
    per_line: TableNetwork,
    per_position: TableNetwork,
}

fn line_holds(kind: LineKind, q: Value, x: Value, y: Value, q_next: Value) -> bool {
    match kind {
        LineKind::InitialState | LineKind::FinalState => unreachable!("boundary lines are unary"),
        LineKind::ZeroFirst => q != 1 || x <= y,
        LineKind::OneFirst => q != -1 || x >= y,
        LineKind::Settles => x == y || q_next == 0,
        LineKind::ZerosKeep => x == 1 || y == 1 || q_next == q,
        LineKind::OnesFlip => x == 0 || y == 0 || q_next == -q,
    }
}

const POSITION_LINES: [LineKind; 5] =
    [LineKind::ZeroFirst, LineKind::OneFirst, LineKind::Settles, LineKind::ZerosKeep, LineKind::OnesFlip];

impl GrayDecomposition {
    pub fn new(n: usize, strict: bool) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidProblem("Gray decomposition needs n >= 1".into()));
        }
        let mut domains = vec![vec![0, 1]; 2 * n];
        domains.extend(std::iter::repeat_n(vec![-1, 0, 1], n + 1));
        let (x, y, q) = (|i| i, |i| n + i, |i| 2 * n + i);

        let mut lines = vec![DecompositionLine {
            kind: LineKind::InitialState,
            position: None,
            constraint: Constraint::fix(q(0), 1),
        }];
        if strict {
            lines.push(DecompositionLine {
                kind: LineKind::FinalState,
                position: None,
                constraint: Constraint::fix(q(n), 0),
            });
        }
        let mut blocks = lines.iter().map(|l| l.constraint.clone()).collect::<Vec<_>>();
        for i in 0..n {
            for kind in POSITION_LINES {
                // scope holds only the variables the line mentions
                let constraint = match kind {
                    LineKind::ZeroFirst | LineKind::OneFirst => {
                        Constraint::table_from_predicate(vec![q(i), x(i), y(i)], &domains, |t| {
                            line_holds(kind, t[0], t[1], t[2], 0)
                        })
                    }
                    LineKind::Settles => {
                        Constraint::table_from_predicate(vec![x(i), y(i), q(i + 1)], &domains, |t| {
                            line_holds(kind, 0, t[0], t[1], t[2])
                        })
                    }
                    _ => Constraint::table_from_predicate(vec![x(i), y(i), q(i), q(i + 1)], &domains, |t| {
                        line_holds(kind, t[2], t[0], t[1], t[3])
                    }),
                };
                lines.push(DecompositionLine { kind, position: Some(i), constraint });
            }
            blocks.push(Constraint::table_from_predicate(vec![q(i), x(i), y(i), q(i + 1)], &domains, |t| {
                POSITION_LINES.iter().all(|&k| line_holds(k, t[0], t[1], t[2], t[3]))
            }));
        }
        let line_constraints: Vec<Constraint> = lines.iter().map(|l| l.constraint.clone()).collect();
        let per_line = TableNetwork::new(domains.clone(), &line_constraints)?;
        let per_position = TableNetwork::new(domains.clone(), &blocks)?;
        Ok(GrayDecomposition { n, strict, domains, lines, per_line, per_position })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_strict(&self) -> bool {
        self.strict
    }

    pub fn x(&self, i: usize) -> usize {
        i
    }

    pub fn y(&self, i: usize) -> usize {
        self.n + i
    }

    /// State variable `Q_{i+1}` in 1-based terms; `i` ranges over `0..=n`.
    pub fn q(&self, i: usize) -> usize {
        2 * self.n + i
    }

    pub fn domains(&self) -> &[Vec<Value>] {
        &self.domains
    }

    pub fn lines(&self) -> &[DecompositionLine] {
        &self.lines
    }

    fn network(&self, g: Granularity) -> &TableNetwork {
        match g {
            Granularity::PerLine => &self.per_line,
            Granularity::PerPosition => &self.per_position,
        }
    }

    pub fn is_berge_acyclic(&self, g: Granularity) -> bool {
        is_berge_acyclic(self.domains.len(), self.network(g).scopes())
    }

    /// Largest constraint arity of the network.
    pub fn max_arity(&self, g: Granularity) -> usize {
        self.network(g).scopes().map(<[usize]>::len).max().unwrap_or(0)
    }

    /// Every X, Y, Q value still possible.
    pub fn initial_store(&self) -> DomainStore {
        DomainStore::full(&self.domains)
    }

    /// Store with the given X and Y candidate sets and full Q domains.
    pub fn store_from_xy(&self, x: &[Vec<Value>], y: &[Vec<Value>]) -> Result<DomainStore> {
        if x.len() != self.n || y.len() != self.n {
            return Err(Error::InvalidStore(format!(
                "expected {} X and {} Y candidate lists",
                self.n, self.n
            )));
        }
        let mut candidates: Vec<Vec<Value>> = x.iter().chain(y).cloned().collect();
        candidates.extend(std::iter::repeat_n(vec![-1, 0, 1], self.n + 1));
        DomainStore::restricted(&self.domains, candidates)
    }

    pub fn propagate(&self, store: DomainStore) -> Result<Propagation> {
        self.propagate_with(store, Granularity::PerPosition)
    }

    pub fn propagate_with(&self, store: DomainStore, g: Granularity) -> Result<Propagation> {
        let (fixpoint, trace) = self.network(g).run(store)?;
        Ok(Propagation { fixpoint, trace })
    }

    /// Every Q sequence that satisfies all lines for fixed `x` and `y`.
    pub fn q_chains(&self, x: &Assignment, y: &Assignment) -> Result<Vec<Vec<Value>>> {
        for v in [x, y] {
            if v.len() != self.n {
                return Err(Error::ArityMismatch { expected: self.n, actual: v.len() });
            }
        }
        let mut values: Vec<Value> = x.values().iter().chain(y.values()).copied().collect();
        values.extend(std::iter::repeat_n(0, self.n + 1));
        let mut chains = Vec::new();
        let qs: Vec<Vec<Value>> = vec![vec![-1, 0, 1]; self.n + 1];
        for q in AssignmentSpace::new(&qs) {
            values[2 * self.n..].copy_from_slice(q.values());
            if self.lines.iter().all(|l| l.constraint.holds(&values)) {
                chains.push(q.into_values());
            }
        }
        Ok(chains)
    }
}

/// Q chain induced by a fully assigned pair: starts at 1, becomes 0 at the
/// first differing position, keeps its sign across `0/0` and flips across
/// `1/1`.
pub fn induced_q_chain(x: &[Value], y: &[Value]) -> Vec<Value> {
    let mut chain = Vec::with_capacity(x.len() + 1);
    let mut q: Value = 1;
    chain.push(q);
    for (&a, &b) in x.iter().zip(y) {
        q = if q == 0 || a != b {
            0
        } else if a == 1 {
            -q
        } else {
            q
        };
        chain.push(q);
    }
    chain
}

/// Domain consistency by enumeration: keeps each X/Y value that appears in
/// some supported pair `(x, y)` with `x` before `y` in Gray order (or equal,
/// when not strict) whose induced Q chain fits the Q candidates. Q keeps the
/// values used by some supported pair's chain. `None` means no pair survives.
pub fn gac_oracle(n: usize, store: &DomainStore, strict: bool) -> Result<Option<DomainStore>> {
    if n == 0 || n > ORACLE_MAX_N {
        return Err(Error::SizeBound(format!("oracle takes 1 <= n <= {ORACLE_MAX_N}, got {n}")));
    }
    if store.len() != 3 * n + 1 {
        return Err(Error::InvalidStore(format!("expected {} variables, got {}", 3 * n + 1, store.len())));
    }
    let gray = SimpleOrdering::binary(OrderingKind::Gray, n, None)?;
    let xs: Vec<Assignment> = AssignmentSpace::new(&store.all()[..n]).collect();
    let ys: Vec<Assignment> = AssignmentSpace::new(&store.all()[n..2 * n]).collect();
    let x_ranks = xs.iter().map(|a| gray.rank(a)).collect::<Result<Vec<_>>>()?;
    let y_ranks = ys.iter().map(|a| gray.rank(a)).collect::<Result<Vec<_>>>()?;

    let mut keep: Vec<Vec<Value>> = vec![Vec::new(); 3 * n + 1];
    let mut any = false;
    for (x, rx) in xs.iter().zip(&x_ranks) {
        for (y, ry) in ys.iter().zip(&y_ranks) {
            if if strict { rx >= ry } else { rx > ry } {
                continue;
            }
            let chain = induced_q_chain(x.values(), y.values());
            if chain.iter().enumerate().any(|(i, &q)| !store.contains(2 * n + i, q)) {
                continue;
            }
            any = true;
            let all = x.values().iter().chain(y.values()).chain(&chain);
            for (var, &v) in all.enumerate() {
                if !keep[var].contains(&v) {
                    keep[var].push(v);
                }
            }
        }
    }
    if !any {
        return Ok(None);
    }
    let candidates = store
        .all()
        .iter()
        .zip(&keep)
        .map(|(cur, kept)| cur.iter().copied().filter(|v| kept.contains(v)).collect())
        .collect();
    Ok(Some(DomainStore::restricted(store.all(), candidates)?))
}

/// Propagates `store` and compares the fixpoint with [`gac_oracle`].
/// Both sides must fail, or both must reach the same domains.
pub fn agrees_with_oracle(d: &GrayDecomposition, store: &DomainStore) -> Result<bool> {
    let got = d.propagate(store.clone())?.fixpoint;
    let want = gac_oracle(d.n(), store, d.is_strict())?;
    Ok(match (got, want) {
        (Fixpoint::Fail, None) => true,
        (Fixpoint::Consistent(a), Some(b)) => a == b,
        _ => false,
    })
}

/// Random nonempty X and Y candidate sets with full Q domains.
pub fn random_store(d: &GrayDecomposition, rng: &mut impl Rng) -> DomainStore {
    const SUBSETS: [&[Value]; 3] = [&[0], &[1], &[0, 1]];
    let xy: Vec<Vec<Value>> = (0..2 * d.n()).map(|_| SUBSETS[rng.gen_range(0..3)].to_vec()).collect();
    d.store_from_xy(&xy[..d.n()], &xy[d.n()..]).expect("binary candidates fit")
}
