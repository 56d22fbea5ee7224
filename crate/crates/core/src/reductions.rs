//! Small-scale reductions showing that finding a solution under a
//! symmetry-breaking constraint can decide an NP-complete problem.
//!
//! * 1-in-3-SAT: a problem whose two solutions differ only in a final bit,
//!   a flip of that bit as the only symmetry, and an ordering whose tie-break
//!   on that bit embeds a 1-in-3-SAT decider. The lone leader tells whether
//!   the encoded instance is satisfiable.
//! * SAT: `S = models(φ) ∪ {0…0}` with one symmetry class, broken by the
//!   reverse-lex leader. Inspecting the survivor decides `φ`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::breaker::{filter_solutions, leader_constraints, LeaderMode};
use crate::error::{Error, Result};
use crate::model::{enumerate_solutions, Assignment, AssignmentSpace, Constraint, Problem, Value};
use crate::ordering::{OrderingKind, SimpleOrdering};
use crate::symmetry::{AssignmentSymmetry, LiteralSymmetry, Symmetry, SymmetryGroup};

/// Most variables a 1-in-3 gadget problem may have (`3m + 1`).
pub const PROP1_MAX_VARS: usize = 12;
/// Largest propositional variable index a 1-in-3 instance may use.
pub const PROP1_MAX_INDEX: usize = 20;
/// Most propositional variables a SAT gadget may have.
pub const PROP2_MAX_VARS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Sat,
    Unsat,
}

impl Verdict {
    fn from_bool(sat: bool) -> Self {
        if sat {
            Verdict::Sat
        } else {
            Verdict::Unsat
        }
    }

    pub fn is_sat(self) -> bool {
        self == Verdict::Sat
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Sat => "SAT",
            Verdict::Unsat => "UNSAT",
        })
    }
}

/// Positive 1-in-3-SAT: every clause needs exactly one true literal.
/// Variables are numbered from 1; repeated variables count repeatedly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OneInThreeInstance {
    pub clauses: Vec<[usize; 3]>,
}

impl OneInThreeInstance {
    pub fn new(clauses: Vec<[usize; 3]>) -> Result<Self> {
        let inst = OneInThreeInstance { clauses };
        inst.validate()?;
        Ok(inst)
    }

    pub fn m(&self) -> usize {
        self.clauses.len()
    }

    /// Largest variable index used.
    pub fn max_index(&self) -> usize {
        self.clauses.iter().flatten().copied().max().unwrap_or(0)
    }

    pub fn validate(&self) -> Result<()> {
        if self.clauses.iter().flatten().any(|&v| v == 0) {
            return Err(Error::InvalidProblem("1-in-3 variable indices start at 1".into()));
        }
        if 3 * self.m() + 1 > PROP1_MAX_VARS {
            return Err(Error::SizeBound(format!(
                "{} clauses need {} variables, limit is {PROP1_MAX_VARS}",
                self.m(),
                3 * self.m() + 1
            )));
        }
        if self.max_index() > PROP1_MAX_INDEX {
            return Err(Error::SizeBound(format!(
                "variable index {} exceeds {PROP1_MAX_INDEX}",
                self.max_index()
            )));
        }
        Ok(())
    }
}

/// Backtracking 1-in-3 decider over the clause triples read from `prefix`.
fn one_in_three_sat(prefix: &[Value]) -> bool {
    let clauses: Vec<[usize; 3]> =
        prefix.chunks_exact(3).map(|c| [c[0] as usize, c[1] as usize, c[2] as usize]).collect();
    let vars = clauses.iter().flatten().copied().max().unwrap_or(0);
    let mut truth: Vec<Option<bool>> = vec![None; vars + 1];

    fn viable(clauses: &[[usize; 3]], truth: &[Option<bool>]) -> bool {
        clauses.iter().all(|c| {
            let ones = c.iter().filter(|&&v| truth[v] == Some(true)).count();
            let open = c.iter().filter(|&&v| truth[v].is_none()).count();
            ones <= 1 && ones + open >= 1
        })
    }

    fn search(var: usize, clauses: &[[usize; 3]], truth: &mut [Option<bool>]) -> bool {
        if !viable(clauses, truth) {
            return false;
        }
        if var == truth.len() {
            return true;
        }
        for b in [false, true] {
            truth[var] = Some(b);
            if search(var + 1, clauses, truth) {
                return true;
            }
        }
        truth[var] = None;
        false
    }

    search(1, &clauses, &mut truth)
}

/// Ordering of the 1-in-3 gadget: lex on the clause prefix; on equal
/// prefixes the final bit sorts `0` first iff the instance encoded by the
/// prefix is 1-in-3 satisfiable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Prop1Ordering {
    vars: usize,
}

impl Prop1Ordering {
    pub fn compare(&self, a: &Assignment, b: &Assignment) -> Result<Ordering> {
        for v in [a, b] {
            if v.len() != self.vars {
                return Err(Error::ArityMismatch { expected: self.vars, actual: v.len() });
            }
        }
        let last = self.vars - 1;
        let prefix = a.values()[..last].cmp(&b.values()[..last]);
        if prefix.is_ne() {
            return Ok(prefix);
        }
        let bits = a.get(last).cmp(&b.get(last));
        Ok(if one_in_three_sat(&a.values()[..last]) { bits } else { bits.reverse() })
    }
}

#[derive(Debug, Clone)]
pub struct Prop1Gadget {
    pub instance: OneInThreeInstance,
    pub problem: Problem,
    pub sigma: LiteralSymmetry,
    pub ordering: Prop1Ordering,
}

pub fn build_prop1_gadget(inst: &OneInThreeInstance) -> Result<Prop1Gadget> {
    inst.validate()?;
    let m = inst.m();
    let vars = 3 * m + 1;
    let top = inst.max_index().max(1) as Value;
    let mut domains: Vec<Vec<Value>> = vec![(1..=top).collect(); 3 * m];
    domains.push(vec![0, 1]);
    let constraints =
        inst.clauses.iter().flatten().enumerate().map(|(p, &v)| Constraint::fix(p, v as Value)).collect();
    let problem = Problem::new(domains, constraints, None)?;
    let sigma = LiteralSymmetry::value_swap(vars, vars - 1, 0, 1)?;
    Ok(Prop1Gadget { instance: inst.clone(), problem, sigma, ordering: Prop1Ordering { vars } })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prop1Outcome {
    pub verdict: Verdict,
    pub survivor: Assignment,
    pub oracle: Verdict,
}

/// Solves the gadget under `X ⪯ σ(X)` and reads the verdict off the last bit.
pub fn solve_prop1(g: &Prop1Gadget) -> Result<Prop1Outcome> {
    let mut survivors = Vec::new();
    for a in enumerate_solutions(&g.problem, Some(4))? {
        if g.ordering.compare(&a, &g.sigma.apply(&a)?)? != Ordering::Greater {
            survivors.push(a);
        }
    }
    if survivors.len() != 1 {
        return Err(Error::InvariantViolation(format!(
            "expected one surviving solution, found {}",
            survivors.len()
        )));
    }
    let survivor = survivors.pop().expect("one survivor");
    let last = survivor.len() - 1;
    Ok(Prop1Outcome {
        verdict: Verdict::from_bool(survivor.get(last) == 0),
        survivor,
        oracle: Verdict::from_bool(brute_force_one_in_three(&g.instance)),
    })
}

/// Tries every truth assignment as a bitmask.
pub fn brute_force_one_in_three(inst: &OneInThreeInstance) -> bool {
    let vars = inst.max_index();
    (0u64..1 << vars)
        .any(|mask| inst.clauses.iter().all(|c| c.iter().filter(|&&v| mask >> (v - 1) & 1 == 1).count() == 1))
}

/// CNF over variables `1..=n`; literal `v` is `x_v`, `-v` is its negation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Cnf {
    pub n: usize,
    pub clauses: Vec<Vec<i32>>,
}

impl Cnf {
    pub fn new(n: usize, clauses: Vec<Vec<i32>>) -> Result<Self> {
        let cnf = Cnf { n, clauses };
        cnf.validate()?;
        Ok(cnf)
    }

    pub fn validate(&self) -> Result<()> {
        for &lit in self.clauses.iter().flatten() {
            if lit == 0 || lit.unsigned_abs() as usize > self.n {
                return Err(Error::InvalidProblem(format!("literal {lit} outside variables 1..={}", self.n)));
            }
        }
        Ok(())
    }

    pub fn satisfied_by(&self, a: &[Value]) -> bool {
        self.clauses.iter().all(|c| {
            c.iter().any(|&lit| {
                let v = a[lit.unsigned_abs() as usize - 1];
                if lit > 0 {
                    v == 1
                } else {
                    v == 0
                }
            })
        })
    }
}

impl fmt::Display for Cnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.clauses.is_empty() {
            return f.write_str("true");
        }
        let clauses: Vec<String> = self
            .clauses
            .iter()
            .map(|c| {
                let lits: Vec<String> =
                    c.iter().map(|&l| if l > 0 { format!("x{l}") } else { format!("!x{}", -l) }).collect();
                format!("({})", lits.join(" | "))
            })
            .collect();
        f.write_str(&clauses.join(" & "))
    }
}

/// Satisfiability by trying all `2^n` bitmasks.
pub fn brute_force_sat(cnf: &Cnf) -> bool {
    (0u64..1 << cnf.n).any(|mask| {
        cnf.clauses.iter().all(|c| {
            c.iter().any(|&lit| {
                let bit = mask >> (lit.unsigned_abs() - 1) & 1 == 1;
                bit == (lit > 0)
            })
        })
    })
}

#[derive(Debug, Clone)]
pub struct Prop2Gadget {
    pub phi: Cnf,
    pub problem: Problem,
    /// Solutions of `S` in lexicographic order.
    pub solutions: Vec<Assignment>,
    pub group: SymmetryGroup,
    pub ordering: SimpleOrdering,
}

/// `S = models(φ) ∪ {0…0}` as a single table, with one cyclic symmetry
/// through all of `S` so that every solution is in the same class.
pub fn build_prop2_gadget(phi: &Cnf) -> Result<Prop2Gadget> {
    phi.validate()?;
    let n = phi.n;
    if n == 0 || n > PROP2_MAX_VARS {
        return Err(Error::SizeBound(format!("SAT gadget takes 1..={PROP2_MAX_VARS} variables, got {n}")));
    }
    let domains = vec![vec![0, 1]; n];
    let solutions: Vec<Assignment> =
        AssignmentSpace::new(&domains).filter(|a| a.is_all_zero() || phi.satisfied_by(a.values())).collect();
    let table = Constraint::table((0..n).collect(), solutions.iter().map(|a| a.values().to_vec()).collect());
    let problem = Problem::new(domains.clone(), vec![table], None)?;
    let generators = if solutions.len() > 1 {
        vec![Symmetry::Assignment(AssignmentSymmetry::cycle(&solutions)?)]
    } else {
        Vec::new()
    };
    let group = SymmetryGroup::new(domains, generators)?;
    let ordering = SimpleOrdering::binary(OrderingKind::RevLex, n, None)?;
    Ok(Prop2Gadget { phi: phi.clone(), problem, solutions, group, ordering })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Prop2Case {
    /// The survivor is all-zero and falsifies `φ`.
    ZeroNotModel,
    /// The survivor is all-zero and satisfies `φ`.
    ZeroModel,
    /// The survivor is a non-zero model.
    NonZero,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prop2Outcome {
    pub verdict: Verdict,
    pub case: Prop2Case,
    pub survivors: Vec<Assignment>,
    pub oracle: Verdict,
}

/// Filters `S` by the full-group reverse-lex leader constraints and decides
/// `φ` from the surviving solution.
pub fn solve_prop2(g: &Prop2Gadget) -> Result<Prop2Outcome> {
    let solutions = enumerate_solutions(&g.problem, None)?;
    let breaking = leader_constraints(&g.group, &g.ordering, LeaderMode::Full)?;
    let survivors = filter_solutions(&solutions, &breaking)?;
    let Some(first) = survivors.first() else {
        return Err(Error::InvariantViolation("no solution survived the leader constraints".into()));
    };
    let case = if !first.is_all_zero() {
        Prop2Case::NonZero
    } else if g.phi.satisfied_by(first.values()) {
        Prop2Case::ZeroModel
    } else {
        Prop2Case::ZeroNotModel
    };
    Ok(Prop2Outcome {
        verdict: Verdict::from_bool(case != Prop2Case::ZeroNotModel),
        case,
        survivors,
        oracle: Verdict::from_bool(brute_force_sat(&g.phi)),
    })
}
