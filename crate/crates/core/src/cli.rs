//! The `symbreak` command line.
//!
//! Exit codes: 0 success, 1 negative verdict (infeasible, unsound, FAIL,
//! UNSAT), 2 usage or input error, 3 size cap exceeded. Results go to the
//! output stream and diagnostics to the error stream.

use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::breaker::{breaking_set, count_survivors, filter_solutions, Method, SurvivorReport};
use crate::error::Error;
use crate::files::{
    parse_json, read_survivor_csv, read_to_string, write_survivor_csv, GrayStoreSpec, ProblemSpec,
    SymmetrySpec,
};
use crate::gray::{
    agrees_with_oracle, gac_oracle, random_store, Granularity, GrayDecomposition, ORACLE_MAX_N,
};
use crate::model::{enumerate_solutions, Assignment, DomainStore, Problem, Shape, Value};
use crate::ordering::{OrderingKind, SimpleOrdering};
use crate::propagate::Fixpoint;
use crate::reductions::{
    build_prop1_gadget, build_prop2_gadget, solve_prop1, solve_prop2, Cnf, OneInThreeInstance,
};
use crate::symmetry::{orbits, OrbitPartition, SymmetryGroup, DEFAULT_CLOSURE_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GranularityArg {
    PerPosition,
    PerLine,
}

/// Parsed command line.
#[derive(Debug, Clone, Parser)]
#[command(name = "symbreak", version, about = "Symmetry breaking under simple orderings")]
pub struct RunConfig {
    /// Seed for randomized checks; echoed in every report.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Largest symmetry group closure to build.
    #[arg(long, global = true, default_value_t = DEFAULT_CLOSURE_CAP,
          value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(1..))]
    pub closure_cap: usize,
    /// Largest number of solutions to enumerate. Without it, spaces over
    /// 2^24 assignments are refused.
    #[arg(long, global = true, value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(1..))]
    pub enum_cap: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct InstanceArgs {
    /// Problem file (JSON).
    #[arg(long, conflicts_with = "shape")]
    pub problem: Option<PathBuf>,
    /// Full binary matrix space of this shape (e.g. `2x3`) with row and
    /// column symmetry.
    #[arg(long)]
    pub shape: Option<Shape>,
    /// Symmetry file (JSON). Defaults to row/column symmetry for matrix
    /// problems and the trivial group otherwise.
    #[arg(long)]
    pub symmetry: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SpaceArgs {
    #[arg(long)]
    pub ordering: OrderingKind,
    /// Number of variables.
    #[arg(long, required_unless_present = "shape")]
    pub n: Option<usize>,
    /// Matrix shape; sets `n` to rows*cols.
    #[arg(long)]
    pub shape: Option<Shape>,
    /// Values per variable, `0..d`.
    #[arg(long, default_value_t = 2)]
    pub domain_size: usize,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Enumerate solutions.
    Solve(InstanceArgs),
    /// Partition solutions into symmetry classes.
    Orbits(InstanceArgs),
    /// Post a breaking set and report survivors per class.
    Break {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, default_value = "lex")]
        ordering: OrderingKind,
        #[arg(long, default_value = "leader-full")]
        method: Method,
    },
    /// Soundness and completeness of a breaking set or survivor list.
    Check {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, default_value = "lex")]
        ordering: OrderingKind,
        #[arg(long, default_value = "leader-full")]
        method: Method,
        /// Check this survivor list (CSV from `break`) instead.
        #[arg(long)]
        survivors: Option<PathBuf>,
    },
    /// Position of an assignment in an ordering.
    Rank {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        assignment: Assignment,
    },
    /// Assignment at a position; lists the whole ordering without `--k`.
    Unrank {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        k: Option<u128>,
    },
    /// Propagate the Gray ordering decomposition.
    GrayCheck {
        /// Domain store file (JSON).
        #[arg(long, required_unless_present = "random")]
        store: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = GranularityArg::PerPosition)]
        granularity: GranularityArg,
        /// Also compare with the enumeration oracle.
        #[arg(long)]
        verify: bool,
        /// Check this many seeded random stores against the oracle.
        #[arg(long, conflicts_with = "store")]
        random: Option<usize>,
        /// Largest `n` for random stores.
        #[arg(long, default_value_t = 8)]
        max_n: usize,
        /// Random stores use the non-strict constraint.
        #[arg(long)]
        non_strict: bool,
    },
    /// Decide a positive 1-in-3-SAT instance through a leader constraint.
    DemoProp1 {
        #[arg(long)]
        instance: PathBuf,
    },
    /// Decide a CNF through reverse-lex leader constraints.
    DemoProp2 {
        #[arg(long)]
        instance: PathBuf,
    },
    /// Survivor counts for every ordering and method, as CSV.
    Compare(InstanceArgs),
}

#[derive(Debug)]
enum Failure {
    Core(Error),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

type Outcome = std::result::Result<i32, Failure>;

/// Parses `args` and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match RunConfig::try_parse_from(args) {
        Ok(config) => execute(&config, out, err),
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                2
            } else {
                let _ = write!(out, "{e}");
                0
            }
        }
    }
}

/// Runs an already parsed configuration.
pub fn execute(config: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match dispatch(config, out, err) {
        Ok(code) => code,
        Err(Failure::Core(e)) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_overflow() {
                3
            } else {
                2
            }
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

/// Entry point for the binary.
pub fn main() -> i32 {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    run(std::env::args_os(), &mut out, &mut io::stderr())
}

fn dispatch(c: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    match &c.command {
        Command::Solve(i) => solve(c, i, out),
        Command::Orbits(i) => report_orbits(c, i, out),
        Command::Break { instance, ordering, method } => report_break(c, instance, *ordering, *method, out),
        Command::Check { instance, ordering, method, survivors } => {
            check(c, instance, *ordering, *method, survivors.as_deref(), out)
        }
        Command::Rank { space, assignment } => {
            let o = space_ordering(space)?;
            writeln!(out, "{}", o.rank(assignment)?)?;
            Ok(0)
        }
        Command::Unrank { space, k } => {
            let o = space_ordering(space)?;
            match k {
                Some(k) => writeln!(out, "{}", o.unrank(*k)?)?,
                None => {
                    if o.size() > 1 << 20 {
                        return Err(Error::SizeBound("listing more than 2^20 assignments".into()).into());
                    }
                    for k in 0..o.size() {
                        writeln!(out, "{}", o.unrank(k)?)?;
                    }
                }
            }
            Ok(0)
        }
        Command::GrayCheck { store, granularity, verify, random, max_n, non_strict } => {
            let g = match granularity {
                GranularityArg::PerPosition => Granularity::PerPosition,
                GranularityArg::PerLine => Granularity::PerLine,
            };
            match (store, random) {
                (Some(path), _) => gray_check_file(c, path, g, *verify, out),
                (None, Some(count)) => gray_check_random(c, *count, *max_n, !*non_strict, out, err),
                (None, None) => Err(Error::Parse("give --store or --random".into()).into()),
            }
        }
        Command::DemoProp1 { instance } => demo_prop1(c, instance, out),
        Command::DemoProp2 { instance } => demo_prop2(c, instance, out),
        Command::Compare(i) => compare(c, i, out, err),
    }
}

fn space_ordering(s: &SpaceArgs) -> Result<SimpleOrdering, Error> {
    let n = match (s.n, s.shape) {
        (Some(n), Some(shape)) if n != shape.cells() => {
            return Err(Error::ArityMismatch { expected: shape.cells(), actual: n })
        }
        (_, Some(shape)) => shape.cells(),
        (Some(n), None) => n,
        (None, None) => return Err(Error::Parse("give --n or --shape".into())),
    };
    if s.domain_size == 0 {
        return Err(Error::Parse("--domain-size must be positive".into()));
    }
    let domain: Vec<Value> = (0..s.domain_size as Value).collect();
    SimpleOrdering::new(s.ordering, vec![domain; n], s.shape)
}

struct Instance {
    problem: Problem,
    group: SymmetryGroup,
}

fn load_instance(c: &RunConfig, i: &InstanceArgs) -> Result<Instance, Error> {
    let problem = match (&i.problem, i.shape) {
        (Some(path), _) => parse_json::<ProblemSpec>(&read_to_string(path)?)?.into_problem()?,
        (None, Some(shape)) => Problem::binary_matrix(shape),
        (None, None) => return Err(Error::Parse("give --problem or --shape".into())),
    };
    let group = match (&i.symmetry, problem.shape()) {
        (Some(path), _) => {
            parse_json::<SymmetrySpec>(&read_to_string(path)?)?.into_group(problem.domains())?
        }
        (None, Some(shape)) => SymmetryGroup::row_col(shape, problem.domains().to_vec())?,
        (None, None) => SymmetryGroup::trivial(problem.domains().to_vec()),
    };
    Ok(Instance { problem, group: group.with_cap(c.closure_cap) })
}

fn solutions(c: &RunConfig, p: &Problem) -> Result<Vec<Assignment>, Error> {
    enumerate_solutions(p, c.enum_cap)
}

fn header(c: &RunConfig, out: &mut dyn Write, fields: &[(&str, String)]) -> io::Result<()> {
    let mut line = format!("# seed={}", c.seed);
    for (k, v) in fields {
        line.push_str(&format!(" {k}={v}"));
    }
    writeln!(out, "{line}")
}

fn solve(c: &RunConfig, i: &InstanceArgs, out: &mut dyn Write) -> Outcome {
    let inst = load_instance(c, i)?;
    let sols = solutions(c, &inst.problem)?;
    header(c, out, &[("solutions", sols.len().to_string())])?;
    if c.format == Format::Csv {
        writeln!(out, "assignment")?;
    }
    for a in &sols {
        writeln!(out, "{a}")?;
    }
    Ok(if sols.is_empty() { 1 } else { 0 })
}

fn report_orbits(c: &RunConfig, i: &InstanceArgs, out: &mut dyn Write) -> Outcome {
    let inst = load_instance(c, i)?;
    let sols = solutions(c, &inst.problem)?;
    let part = orbits(&sols, &inst.group)?;
    header(c, out, &[("solutions", sols.len().to_string()), ("orbits", part.len().to_string())])?;
    match c.format {
        Format::Csv => {
            writeln!(out, "orbit,size,members")?;
            for (b, block) in part.blocks().iter().enumerate() {
                let members: Vec<String> = block.iter().map(ToString::to_string).collect();
                writeln!(out, "{b},{},{}", block.len(), members.join(" "))?;
            }
        }
        Format::Table => {
            for (b, block) in part.blocks().iter().enumerate() {
                let members: Vec<String> = block.iter().map(ToString::to_string).collect();
                writeln!(out, "orbit {b} size {}: {}", block.len(), members.join(" "))?;
            }
        }
    }
    Ok(if sols.is_empty() { 1 } else { 0 })
}

fn survivors_for(
    inst: &Instance,
    sols: &[Assignment],
    kind: OrderingKind,
    method: Method,
) -> Result<SurvivorReport, Error> {
    let p = &inst.problem;
    let o = SimpleOrdering::new(kind, p.domains().to_vec(), p.shape())?;
    let b = breaking_set(method, &inst.group, &o, p.shape())?;
    let kept = filter_solutions(sols, &b)?;
    Ok(count_survivors(orbits(sols, &inst.group)?, kept))
}

fn write_report(c: &RunConfig, r: &SurvivorReport, out: &mut dyn Write) -> io::Result<()> {
    let tagged: Vec<(Assignment, usize)> = r
        .survivors
        .iter()
        .map(|a| (a.clone(), r.partition.block_of(a).expect("survivor is a solution")))
        .collect();
    let rows = orbit_rows(&r.partition, &r.per_orbit);
    match c.format {
        Format::Csv => {
            let text = write_survivor_csv(&tagged, &rows).map_err(io::Error::other)?;
            out.write_all(text.as_bytes())
        }
        Format::Table => {
            writeln!(out, "survivor  orbit")?;
            for (a, b) in &tagged {
                writeln!(out, "{a}  {b}")?;
            }
            writeln!(out)?;
            writeln!(out, "orbit  size  survivors")?;
            for (o, size, count) in rows {
                writeln!(out, "{o}  {size}  {count}")?;
            }
            Ok(())
        }
    }
}

fn orbit_rows(part: &OrbitPartition, per_orbit: &[usize]) -> Vec<(usize, usize, usize)> {
    part.blocks().iter().zip(per_orbit).enumerate().map(|(i, (b, &k))| (i, b.len(), k)).collect()
}

fn report_break(
    c: &RunConfig,
    i: &InstanceArgs,
    kind: OrderingKind,
    method: Method,
    out: &mut dyn Write,
) -> Outcome {
    let inst = load_instance(c, i)?;
    let sols = solutions(c, &inst.problem)?;
    let r = survivors_for(&inst, &sols, kind, method)?;
    header(
        c,
        out,
        &[
            ("ordering", kind.to_string()),
            ("method", method.to_string()),
            ("solutions", sols.len().to_string()),
            ("orbits", r.partition.len().to_string()),
            ("survivors", r.survivors.len().to_string()),
        ],
    )?;
    write_report(c, &r, out)?;
    Ok(if sols.is_empty() { 1 } else { 0 })
}

fn check(
    c: &RunConfig,
    i: &InstanceArgs,
    kind: OrderingKind,
    method: Method,
    survivors: Option<&Path>,
    out: &mut dyn Write,
) -> Outcome {
    let inst = load_instance(c, i)?;
    let sols = solutions(c, &inst.problem)?;
    let (source, r) = match survivors {
        Some(path) => {
            let listed = read_survivor_csv(&read_to_string(path)?)?;
            let part = orbits(&sols, &inst.group)?;
            (path.display().to_string(), count_survivors(part, listed))
        }
        None => (format!("{kind}/{method}"), survivors_for(&inst, &sols, kind, method)?),
    };
    let ignored = r.survivors.iter().filter(|a| r.partition.block_of(a).is_none()).count();
    header(c, out, &[("source", source)])?;
    let fmt_list = |v: Vec<usize>| {
        if v.is_empty() {
            "-".to_string()
        } else {
            v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
        }
    };
    match c.format {
        Format::Csv => {
            writeln!(out, "orbits,survivors,ignored,sound,complete")?;
            writeln!(
                out,
                "{},{},{ignored},{},{}",
                r.partition.len(),
                r.survivors.len() - ignored,
                r.is_sound(),
                r.is_complete()
            )?;
        }
        Format::Table => {
            writeln!(out, "orbits={}", r.partition.len())?;
            writeln!(out, "survivors={}", r.survivors.len() - ignored)?;
            if ignored > 0 {
                writeln!(out, "ignored={ignored}")?;
            }
            writeln!(out, "sound={}", r.is_sound())?;
            writeln!(out, "complete={}", r.is_complete())?;
            writeln!(out, "empty_orbits={}", fmt_list(r.empty_orbits()))?;
            writeln!(out, "crowded_orbits={}", fmt_list(r.crowded_orbits()))?;
        }
    }
    Ok(if r.is_sound() { 0 } else { 1 })
}

fn render_store(d: &GrayDecomposition, s: &DomainStore) -> Vec<(String, String)> {
    let n = d.n();
    let name = |v: usize| match v {
        v if v < n => format!("X{v}"),
        v if v < 2 * n => format!("Y{}", v - n),
        v => format!("Q{}", v - 2 * n),
    };
    (0..s.len())
        .map(|v| {
            let vals: Vec<String> = s.candidates(v).iter().map(ToString::to_string).collect();
            (name(v), vals.join(" "))
        })
        .collect()
}

fn gray_check_file(c: &RunConfig, path: &Path, g: Granularity, verify: bool, out: &mut dyn Write) -> Outcome {
    let spec: GrayStoreSpec = parse_json(&read_to_string(path)?)?;
    let d = GrayDecomposition::new(spec.n, spec.strict)?;
    let store = spec.into_store(d.domains())?;
    let p = d.propagate_with(store.clone(), g)?;
    header(
        c,
        out,
        &[
            ("n", d.n().to_string()),
            ("strict", d.is_strict().to_string()),
            ("events", p.trace.events.to_string()),
            ("revisions", p.trace.revisions().to_string()),
        ],
    )?;
    match &p.fixpoint {
        Fixpoint::Fail => writeln!(out, "FAIL")?,
        Fixpoint::Consistent(s) => {
            if c.format == Format::Csv {
                writeln!(out, "variable,candidates")?;
            }
            let sep = if c.format == Format::Csv { "," } else { " = " };
            for (var, vals) in render_store(&d, s) {
                writeln!(out, "{var}{sep}{vals}")?;
            }
        }
    }
    if verify {
        let want = gac_oracle(d.n(), &store, d.is_strict())?;
        let ok = match (&p.fixpoint, want) {
            (Fixpoint::Fail, None) => true,
            (Fixpoint::Consistent(a), Some(b)) => *a == b,
            _ => false,
        };
        writeln!(out, "oracle={}", if ok { "agree" } else { "disagree" })?;
        if !ok {
            return Ok(1);
        }
    }
    Ok(if p.fixpoint.is_fail() { 1 } else { 0 })
}

fn gray_check_random(
    c: &RunConfig,
    count: usize,
    max_n: usize,
    strict: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Outcome {
    if max_n == 0 || max_n > ORACLE_MAX_N {
        return Err(Error::SizeBound(format!("--max-n must be in 1..={ORACLE_MAX_N}")).into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let decomps = (1..=max_n).map(|n| GrayDecomposition::new(n, strict)).collect::<Result<Vec<_>, _>>()?;
    let mut disagreements = 0;
    for case in 0..count {
        let d = &decomps[rand::Rng::gen_range(&mut rng, 0..max_n)];
        let store = random_store(d, &mut rng);
        if !agrees_with_oracle(d, &store)? {
            disagreements += 1;
            writeln!(err, "disagreement in case {case} (n={})", d.n())?;
        }
    }
    header(
        c,
        out,
        &[("cases", count.to_string()), ("max_n", max_n.to_string()), ("strict", strict.to_string())],
    )?;
    writeln!(out, "disagreements={disagreements}")?;
    Ok(if disagreements == 0 { 0 } else { 1 })
}

fn demo_prop1(c: &RunConfig, path: &Path, out: &mut dyn Write) -> Outcome {
    let inst: OneInThreeInstance = parse_json(&read_to_string(path)?)?;
    let g = build_prop1_gadget(&inst)?;
    let outcome = solve_prop1(&g)?;
    header(c, out, &[("clauses", inst.m().to_string())])?;
    writeln!(out, "variables={}", g.problem.n())?;
    for (p, clause) in inst.clauses.iter().enumerate() {
        writeln!(
            out,
            "fix X{}={} X{}={} X{}={}",
            3 * p,
            clause[0],
            3 * p + 1,
            clause[1],
            3 * p + 2,
            clause[2]
        )?;
    }
    writeln!(out, "symmetry=swap 0/1 on X{}", g.problem.n() - 1)?;
    writeln!(out, "survivor={}", outcome.survivor)?;
    writeln!(out, "verdict={}", outcome.verdict)?;
    writeln!(out, "oracle={}", outcome.oracle)?;
    verdict_code(outcome.verdict == outcome.oracle, outcome.verdict.is_sat())
}

fn demo_prop2(c: &RunConfig, path: &Path, out: &mut dyn Write) -> Outcome {
    let phi: Cnf = parse_json(&read_to_string(path)?)?;
    let g = build_prop2_gadget(&phi)?;
    let outcome = solve_prop2(&g)?;
    header(c, out, &[("variables", phi.n.to_string()), ("clauses", phi.clauses.len().to_string())])?;
    writeln!(out, "phi={phi}")?;
    let sols: Vec<String> = g.solutions.iter().map(ToString::to_string).collect();
    writeln!(out, "solutions={}", sols.join(" "))?;
    let surv: Vec<String> = outcome.survivors.iter().map(ToString::to_string).collect();
    writeln!(out, "survivors={}", surv.join(" "))?;
    writeln!(out, "case={:?}", outcome.case)?;
    writeln!(out, "verdict={}", outcome.verdict)?;
    writeln!(out, "oracle={}", outcome.oracle)?;
    verdict_code(outcome.verdict == outcome.oracle, outcome.verdict.is_sat())
}

fn verdict_code(agrees: bool, sat: bool) -> Outcome {
    if !agrees {
        return Err(Error::InvariantViolation("verdict disagrees with the oracle".into()).into());
    }
    Ok(if sat { 0 } else { 1 })
}

fn compare(c: &RunConfig, i: &InstanceArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let inst = load_instance(c, i)?;
    let sols = solutions(c, &inst.problem)?;
    header(c, out, &[])?;
    writeln!(out, "ordering,method,solutions,orbits,survivors,sound,complete")?;
    for kind in OrderingKind::ALL {
        for method in Method::ALL {
            match survivors_for(&inst, &sols, kind, method) {
                Ok(r) => writeln!(
                    out,
                    "{kind},{method},{},{},{},{},{}",
                    sols.len(),
                    r.partition.len(),
                    r.survivors.len(),
                    r.is_sound(),
                    r.is_complete()
                )?,
                Err(e) if e.is_overflow() => return Err(e.into()),
                Err(e) => writeln!(err, "skipping {kind}/{method}: {e}")?,
            }
        }
    }
    Ok(0)
}
