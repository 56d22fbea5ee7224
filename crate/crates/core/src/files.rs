//! JSON instance formats and CSV survivor lists.
//!
//! All JSON readers reject unknown fields. The layouts are documented in
//! `docs/FORMATS.md`.

use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Assignment, Constraint, DomainStore, Literal, Problem, Shape, Value};
use crate::symmetry::{row_col_generators, LiteralSymmetry, Symmetry, SymmetryGroup};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShapeSpec {
    pub rows: usize,
    pub cols: usize,
}

impl From<ShapeSpec> for Shape {
    fn from(s: ShapeSpec) -> Self {
        Shape::new(s.rows, s.cols)
    }
}

impl From<Shape> for ShapeSpec {
    fn from(s: Shape) -> Self {
        ShapeSpec { rows: s.rows, cols: s.cols }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LiteralSpec {
    pub var: usize,
    pub value: Value,
    #[serde(default = "yes")]
    pub positive: bool,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ConstraintSpec {
    Table { scope: Vec<usize>, tuples: Vec<Vec<Value>> },
    Clause { literals: Vec<LiteralSpec> },
    Fix { var: usize, value: Value },
}

impl From<ConstraintSpec> for Constraint {
    fn from(c: ConstraintSpec) -> Self {
        match c {
            ConstraintSpec::Table { scope, tuples } => Constraint::table(scope, tuples),
            ConstraintSpec::Clause { literals } => Constraint::clause(
                literals
                    .into_iter()
                    .map(|l| Literal { var: l.var, value: l.value, positive: l.positive })
                    .collect(),
            ),
            ConstraintSpec::Fix { var, value } => Constraint::fix(var, value),
        }
    }
}

/// Problem file. `domains` defaults to `{0, 1}` for every variable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub n: usize,
    #[serde(default)]
    pub domains: Option<Vec<Vec<Value>>>,
    #[serde(default)]
    pub constraints: Vec<ConstraintSpec>,
    #[serde(default)]
    pub shape: Option<ShapeSpec>,
}

impl ProblemSpec {
    pub fn into_problem(self) -> Result<Problem> {
        let domains = self.domains.unwrap_or_else(|| vec![vec![0, 1]; self.n]);
        if domains.len() != self.n {
            return Err(Error::ArityMismatch { expected: self.n, actual: domains.len() });
        }
        Problem::new(
            domains,
            self.constraints.into_iter().map(Constraint::from).collect(),
            self.shape.map(Shape::from),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct GeneratorSpec {
    pub var_perm: Vec<usize>,
    /// One list of `[from, to]` pairs per variable. An empty outer list
    /// means no value changes.
    #[serde(default)]
    pub val_maps: Vec<Vec<(Value, Value)>>,
}

/// Symmetry file: explicit literal generators plus an optional matrix
/// shorthand expanding to adjacent row and column swaps.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct SymmetrySpec {
    #[serde(default)]
    pub generators: Vec<GeneratorSpec>,
    #[serde(default)]
    pub row_col_generators: Option<ShapeSpec>,
}

impl SymmetrySpec {
    pub fn into_group(self, domains: &[Vec<Value>]) -> Result<SymmetryGroup> {
        let mut gens = Vec::new();
        for g in self.generators {
            let n = g.var_perm.len();
            let maps = if g.val_maps.is_empty() { vec![Vec::new(); n] } else { g.val_maps };
            gens.push(Symmetry::Literal(LiteralSymmetry::new(g.var_perm, maps)?));
        }
        if let Some(s) = self.row_col_generators {
            let shape = Shape::from(s);
            if shape.cells() != domains.len() {
                return Err(Error::ArityMismatch { expected: domains.len(), actual: shape.cells() });
            }
            gens.extend(row_col_generators(shape).into_iter().map(Symmetry::Literal));
        }
        SymmetryGroup::new(domains.to_vec(), gens)
    }
}

/// Candidate lists for a Gray propagation run. Missing `q` means full
/// `{-1, 0, 1}` domains.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GrayStoreSpec {
    pub n: usize,
    #[serde(default = "yes")]
    pub strict: bool,
    pub x: Vec<Vec<Value>>,
    pub y: Vec<Vec<Value>>,
    #[serde(default)]
    pub q: Option<Vec<Vec<Value>>>,
}

impl GrayStoreSpec {
    pub fn into_store(self, domains: &[Vec<Value>]) -> Result<DomainStore> {
        let n = self.n;
        if self.x.len() != n || self.y.len() != n {
            return Err(Error::InvalidStore(format!("x and y need {n} candidate lists each")));
        }
        let q = self.q.unwrap_or_else(|| vec![vec![-1, 0, 1]; n + 1]);
        if q.len() != n + 1 {
            return Err(Error::InvalidStore(format!("q needs {} candidate lists", n + 1)));
        }
        let candidates = self.x.into_iter().chain(self.y).chain(q).collect();
        DomainStore::restricted(domains, candidates)
    }
}

pub fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn read_to_string(path: &std::path::Path) -> Result<String> {
    let mut s = String::new();
    std::fs::File::open(path)
        .and_then(|mut f| f.read_to_string(&mut s))
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    Ok(s)
}

/// Survivor list plus per-orbit counts, as written by `break --format csv`.
///
/// ```text
/// assignment,orbit
/// 0000,0
/// ...
///
/// orbit,size,survivors
/// 0,1,1
/// ```
pub fn write_survivor_csv(
    survivors: &[(Assignment, usize)],
    orbit_rows: &[(usize, usize, usize)],
) -> Result<String> {
    let mut out = Vec::new();
    {
        let mut w = csv::Writer::from_writer(&mut out);
        w.write_record(["assignment", "orbit"]).map_err(csv_err)?;
        for (a, b) in survivors {
            w.write_record([a.to_string(), b.to_string()]).map_err(csv_err)?;
        }
        w.flush().map_err(|e| Error::Parse(e.to_string()))?;
    }
    out.push(b'\n');
    {
        let mut w = csv::Writer::from_writer(&mut out);
        w.write_record(["orbit", "size", "survivors"]).map_err(csv_err)?;
        for (o, size, count) in orbit_rows {
            w.write_record([o.to_string(), size.to_string(), count.to_string()]).map_err(csv_err)?;
        }
        w.flush().map_err(|e| Error::Parse(e.to_string()))?;
    }
    String::from_utf8(out).map_err(|e| Error::Parse(e.to_string()))
}

fn csv_err(e: csv::Error) -> Error {
    Error::Parse(e.to_string())
}

/// Reads the `assignment` column of a survivor list. Lines starting with
/// `#` are comments; reading stops at the per-orbit block if present.
pub fn read_survivor_csv(text: &str) -> Result<Vec<Assignment>> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut out = Vec::new();
    let mut header_seen = false;
    for rec in r.records() {
        let rec = rec.map_err(csv_err)?;
        let first = rec.get(0).unwrap_or("").trim();
        if !header_seen {
            if first != "assignment" {
                return Err(Error::Parse("survivor list must start with an `assignment` header".into()));
            }
            header_seen = true;
            continue;
        }
        if first == "orbit" {
            break;
        }
        out.push(first.parse()?);
    }
    if !header_seen {
        return Err(Error::Parse("empty survivor list".into()));
    }
    Ok(out)
}
