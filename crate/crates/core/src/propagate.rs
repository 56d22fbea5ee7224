//! Fixpoint propagation over extensional table constraints.
//!
//! Each revision keeps, for every scope variable, only the values that appear
//! in some tuple whose entries are all still candidates. Constraints are
//! revised from a FIFO queue; a constraint is re-queued when a domain in its
//! scope shrinks. The run is deterministic.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::model::{Constraint, DomainStore, Value};

#[derive(Debug, Clone, PartialEq, Eq)]
struct Table {
    scope: Vec<usize>,
    tuples: Vec<Vec<Value>>,
}

/// Counters collected during one propagation run.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PropagationTrace {
    /// Domain values removed. Each value is removed at most once.
    pub events: usize,
    /// Revisions per constraint.
    pub wakes: Vec<usize>,
}

impl PropagationTrace {
    pub fn revisions(&self) -> usize {
        self.wakes.iter().sum()
    }
}

/// Result of running a network to fixpoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Fixpoint {
    Consistent(DomainStore),
    Fail,
}

impl Fixpoint {
    pub fn store(&self) -> Option<&DomainStore> {
        match self {
            Fixpoint::Consistent(s) => Some(s),
            Fixpoint::Fail => None,
        }
    }

    pub fn is_fail(&self) -> bool {
        matches!(self, Fixpoint::Fail)
    }
}

/// A set of table constraints over a fixed variable list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableNetwork {
    domains: Vec<Vec<Value>>,
    tables: Vec<Table>,
    watchers: Vec<Vec<usize>>,
}

impl TableNetwork {
    /// Only [`Constraint::Table`] and [`Constraint::Fix`] are accepted.
    pub fn new(domains: Vec<Vec<Value>>, constraints: &[Constraint]) -> Result<Self> {
        let mut tables = Vec::with_capacity(constraints.len());
        let mut watchers = vec![Vec::new(); domains.len()];
        for (idx, c) in constraints.iter().enumerate() {
            let table = match c {
                Constraint::Table { scope, tuples } => Table { scope: scope.clone(), tuples: tuples.clone() },
                Constraint::Fix { var, value } => Table { scope: vec![*var], tuples: vec![vec![*value]] },
                Constraint::Clause { .. } => {
                    return Err(Error::InvalidProblem(
                        "table network takes tables and unary fixes only".into(),
                    ))
                }
            };
            for &v in &table.scope {
                let w = watchers
                    .get_mut(v)
                    .ok_or_else(|| Error::InvalidProblem(format!("variable {v} out of range")))?;
                if !w.contains(&idx) {
                    w.push(idx);
                }
            }
            tables.push(table);
        }
        Ok(TableNetwork { domains, tables, watchers })
    }

    pub fn len(&self) -> usize {
        self.tables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tables.is_empty()
    }

    pub fn scopes(&self) -> impl Iterator<Item = &[usize]> {
        self.tables.iter().map(|t| t.scope.as_slice())
    }

    pub fn run(&self, mut store: DomainStore) -> Result<(Fixpoint, PropagationTrace)> {
        if store.len() != self.domains.len() {
            return Err(Error::InvalidStore(format!(
                "store has {} variables, network has {}",
                store.len(),
                self.domains.len()
            )));
        }
        let mut trace = PropagationTrace { events: 0, wakes: vec![0; self.tables.len()] };
        if store.is_failed() {
            return Ok((Fixpoint::Fail, trace));
        }
        let mut queue: VecDeque<usize> = (0..self.tables.len()).collect();
        let mut queued = vec![true; self.tables.len()];
        while let Some(c) = queue.pop_front() {
            queued[c] = false;
            trace.wakes[c] += 1;
            let table = &self.tables[c];
            let mut supported: Vec<Vec<Value>> = vec![Vec::new(); table.scope.len()];
            for t in &table.tuples {
                if table.scope.iter().zip(t).all(|(&v, &x)| store.contains(v, x)) {
                    for (k, &x) in t.iter().enumerate() {
                        if !supported[k].contains(&x) {
                            supported[k].push(x);
                        }
                    }
                }
            }
            for (k, &var) in table.scope.iter().enumerate() {
                let removed = store.retain(var, |x| supported[k].contains(&x));
                if removed == 0 {
                    continue;
                }
                trace.events += removed;
                if store.candidates(var).is_empty() {
                    return Ok((Fixpoint::Fail, trace));
                }
                for &w in &self.watchers[var] {
                    if w != c && !queued[w] {
                        queued[w] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        Ok((Fixpoint::Consistent(store), trace))
    }
}

/// True iff the hypergraph with the given hyperedges is Berge acyclic, i.e.
/// its variable/constraint incidence graph is a forest.
pub fn is_berge_acyclic<'a>(n_vars: usize, scopes: impl IntoIterator<Item = &'a [usize]>) -> bool {
    // union-find over variables and constraint nodes
    let mut parent: Vec<usize> = (0..n_vars).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for scope in scopes {
        let node = parent.len();
        parent.push(node);
        let mut distinct: Vec<usize> = scope.to_vec();
        distinct.sort_unstable();
        distinct.dedup();
        for v in distinct {
            let (a, b) = (find(&mut parent, v), find(&mut parent, node));
            if a == b {
                return false;
            }
            parent[a] = b;
        }
    }
    true
}
