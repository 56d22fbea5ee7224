//! C interface to `symbreak-core`.
//!
//! Handles are opaque and owned by the caller, who releases them with the
//! matching `*_free` function. Every function returns an [`SbStatus`]; on
//! anything other than `SB_STATUS_OK` a message is available from
//! [`sb_last_error_message`] on the same thread. Bit vectors are arrays of
//! `uint8_t` holding 0 or 1, element 0 first.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use symbreak_core::breaker::{breaking_set, count_survivors, filter_solutions, Method};
use symbreak_core::files::{parse_json, ProblemSpec, SymmetrySpec};
use symbreak_core::gray::GrayDecomposition;
use symbreak_core::model::{enumerate_solutions, Assignment, Problem, Shape, Value};
use symbreak_core::ordering::{OrderingKind, SimpleOrdering};
use symbreak_core::propagate::Fixpoint;
use symbreak_core::symmetry::{orbits, SymmetryGroup};
use symbreak_core::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SbStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    OutOfRange = 3,
    /// A size limit was hit, or a result does not fit in 64 bits.
    Overflow = 4,
    Parse = 5,
    Internal = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SbOrderingKind {
    Lex = 0,
    RevLex = 1,
    Gray = 2,
    SnakeLex = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SbMethod {
    LeaderFull = 0,
    LeaderGenerators = 1,
    DoubleLex = 2,
}

impl From<SbOrderingKind> for OrderingKind {
    fn from(k: SbOrderingKind) -> Self {
        match k {
            SbOrderingKind::Lex => OrderingKind::Lex,
            SbOrderingKind::RevLex => OrderingKind::RevLex,
            SbOrderingKind::Gray => OrderingKind::Gray,
            SbOrderingKind::SnakeLex => OrderingKind::SnakeLex,
        }
    }
}

impl From<SbMethod> for Method {
    fn from(m: SbMethod) -> Self {
        match m {
            SbMethod::LeaderFull => Method::LeaderFull,
            SbMethod::LeaderGenerators => Method::LeaderGenerators,
            SbMethod::DoubleLex => Method::DoubleLex,
        }
    }
}

/// A simple ordering over binary vectors.
pub struct SbOrdering {
    inner: SimpleOrdering,
}

/// A constraint problem with its symmetry group.
pub struct SbProblem {
    problem: Problem,
    group: SymmetryGroup,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Fail(SbStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = match &e {
            e if e.is_overflow() => SbStatus::Overflow,
            Error::RankOutOfRange { .. } => SbStatus::OutOfRange,
            Error::Parse(_) => SbStatus::Parse,
            Error::InvariantViolation(_) => SbStatus::Internal,
            _ => SbStatus::InvalidArgument,
        };
        Fail(status, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> SbStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SbStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            SbStatus::Internal
        }
    }
}

fn null(what: &str) -> Fail {
    Fail(SbStatus::NullPointer, format!("{what} is null"))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn bits(p: *const u8, len: usize, what: &str) -> Result<Assignment, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    let s = std::slice::from_raw_parts(p, len);
    if s.iter().any(|&b| b > 1) {
        return Err(Fail(SbStatus::InvalidArgument, format!("{what} holds a value other than 0 or 1")));
    }
    Ok(Assignment::new(s.iter().map(|&b| Value::from(b)).collect()))
}

fn to_u64(v: u128) -> Result<u64, Fail> {
    u64::try_from(v).map_err(|_| Fail(SbStatus::Overflow, format!("{v} does not fit in 64 bits")))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail(SbStatus::Parse, format!("{what} is not UTF-8")))
}

/// Message for the last failed call on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn sb_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Creates an ordering over `n` binary variables. Snake-lex needs
/// `rows * cols == n`; other orderings ignore a zero shape.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sb_ordering_new(
    kind: SbOrderingKind,
    n: usize,
    rows: usize,
    cols: usize,
    out: *mut *mut SbOrdering,
) -> SbStatus {
    guard(|| {
        let shape = (rows > 0 || cols > 0).then(|| Shape::new(rows, cols));
        if let Some(s) = shape {
            if s.cells() != n {
                return Err(Error::ArityMismatch { expected: n, actual: s.cells() }.into());
            }
        }
        let inner = SimpleOrdering::binary(kind.into(), n, shape)?;
        write(out, Box::into_raw(Box::new(SbOrdering { inner })), "out")
    })
}

/// # Safety
/// `o` must come from [`sb_ordering_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sb_ordering_free(o: *mut SbOrdering) {
    if !o.is_null() {
        drop(Box::from_raw(o));
    }
}

/// Number of assignments in the ordering's space.
///
/// # Safety
/// `o` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sb_ordering_size(o: *const SbOrdering, out: *mut u64) -> SbStatus {
    guard(|| {
        let o = deref(o, "ordering")?;
        write(out, to_u64(o.inner.size())?, "out")
    })
}

/// # Safety
/// `o` must be a live handle, `bits_in` must point to `len` bytes and
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sb_ordering_rank(
    o: *const SbOrdering,
    bits_in: *const u8,
    len: usize,
    out: *mut u64,
) -> SbStatus {
    guard(|| {
        let o = deref(o, "ordering")?;
        let a = bits(bits_in, len, "bits")?;
        write(out, to_u64(o.inner.rank(&a)?)?, "out")
    })
}

/// Writes the assignment at position `k` into `bits_out[0..len]`; `len`
/// must equal the number of variables.
///
/// # Safety
/// `o` must be a live handle and `bits_out` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn sb_ordering_unrank(
    o: *const SbOrdering,
    k: u64,
    bits_out: *mut u8,
    len: usize,
) -> SbStatus {
    guard(|| {
        let o = deref(o, "ordering")?;
        if bits_out.is_null() {
            return Err(null("bits_out"));
        }
        if len != o.inner.n() {
            return Err(Error::ArityMismatch { expected: o.inner.n(), actual: len }.into());
        }
        let a = o.inner.unrank(u128::from(k))?;
        let dst = std::slice::from_raw_parts_mut(bits_out, len);
        for (d, &v) in dst.iter_mut().zip(a.values()) {
            *d = v as u8;
        }
        Ok(())
    })
}

/// Writes -1, 0 or 1 as `a` precedes, equals or follows `b`.
///
/// # Safety
/// `a` and `b` must point to `len` bytes each; `out` must be valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn sb_ordering_compare(
    o: *const SbOrdering,
    a: *const u8,
    b: *const u8,
    len: usize,
    out: *mut i32,
) -> SbStatus {
    guard(|| {
        let o = deref(o, "ordering")?;
        let ord = o.inner.compare(&bits(a, len, "a")?, &bits(b, len, "b")?)?;
        write(out, ord as i32, "out")
    })
}

/// Parses a problem file. The group defaults to row and column swaps when
/// the problem has a shape, and to the trivial group otherwise.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sb_problem_from_json(json: *const c_char, out: *mut *mut SbProblem) -> SbStatus {
    guard(|| {
        let problem = parse_json::<ProblemSpec>(str_arg(json, "json")?)?.into_problem()?;
        let group = match problem.shape() {
            Some(s) => SymmetryGroup::row_col(s, problem.domains().to_vec())?,
            None => SymmetryGroup::trivial(problem.domains().to_vec()),
        };
        write(out, Box::into_raw(Box::new(SbProblem { problem, group })), "out")
    })
}

/// Replaces the problem's symmetry group with one read from a symmetry file.
///
/// # Safety
/// `p` must be a live handle and `json` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn sb_problem_set_symmetry_json(p: *mut SbProblem, json: *const c_char) -> SbStatus {
    guard(|| {
        let p = p.as_mut().ok_or_else(|| null("problem"))?;
        let spec: SymmetrySpec = parse_json(str_arg(json, "json")?)?;
        p.group = spec.into_group(p.problem.domains())?;
        Ok(())
    })
}

/// # Safety
/// `p` must come from [`sb_problem_from_json`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sb_problem_free(p: *mut SbProblem) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// # Safety
/// `p` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sb_problem_num_vars(p: *const SbProblem, out: *mut usize) -> SbStatus {
    guard(|| write(out, deref(p, "problem")?.problem.n(), "out"))
}

/// # Safety
/// `p` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sb_problem_count_solutions(p: *const SbProblem, out: *mut u64) -> SbStatus {
    guard(|| {
        let p = deref(p, "problem")?;
        write(out, enumerate_solutions(&p.problem, None)?.len() as u64, "out")
    })
}

/// Posts a breaking set and reports the number of symmetry classes and of
/// surviving solutions, and whether every class keeps exactly one.
///
/// # Safety
/// `p` must be a live handle; the out pointers must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sb_break_count(
    p: *const SbProblem,
    kind: SbOrderingKind,
    method: SbMethod,
    out_orbits: *mut u64,
    out_survivors: *mut u64,
    out_exact: *mut bool,
) -> SbStatus {
    guard(|| {
        let p = deref(p, "problem")?;
        let domains = p.problem.domains().to_vec();
        let o = SimpleOrdering::new(kind.into(), domains, p.problem.shape())?;
        let sols = enumerate_solutions(&p.problem, None)?;
        let b = breaking_set(method.into(), &p.group, &o, p.problem.shape())?;
        let r = count_survivors(orbits(&sols, &p.group)?, filter_solutions(&sols, &b)?);
        write(out_orbits, r.partition.len() as u64, "out_orbits")?;
        write(out_survivors, r.survivors.len() as u64, "out_survivors")?;
        write(out_exact, r.is_sound() && r.is_complete(), "out_exact")
    })
}

/// Propagates `Gray(X, Y)` over `n` positions. Each mask byte lists the
/// allowed values of one variable: bit 0 for value 0, bit 1 for value 1.
/// On return the masks hold the fixpoint domains, or `*out_failed` is set.
///
/// # Safety
/// `x_mask` and `y_mask` must each point to `n` writable bytes; the other
/// out pointers must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sb_gray_propagate(
    n: usize,
    strict: bool,
    x_mask: *mut u8,
    y_mask: *mut u8,
    out_failed: *mut bool,
    out_events: *mut u64,
) -> SbStatus {
    guard(|| {
        if x_mask.is_null() || y_mask.is_null() {
            return Err(null("mask"));
        }
        let xs = std::slice::from_raw_parts_mut(x_mask, n);
        let ys = std::slice::from_raw_parts_mut(y_mask, n);
        let decode = |m: u8| -> Result<Vec<Value>, Fail> {
            if m > 3 {
                return Err(Fail(SbStatus::InvalidArgument, format!("mask {m} has bits above 1")));
            }
            Ok((0..2).filter(|&v| m >> v & 1 == 1).collect())
        };
        let d = GrayDecomposition::new(n, strict)?;
        let x = xs.iter().map(|&m| decode(m)).collect::<Result<Vec<_>, _>>()?;
        let y = ys.iter().map(|&m| decode(m)).collect::<Result<Vec<_>, _>>()?;
        let p = d.propagate(d.store_from_xy(&x, &y)?)?;
        write(out_events, p.trace.events as u64, "out_events")?;
        match p.fixpoint {
            Fixpoint::Fail => write(out_failed, true, "out_failed"),
            Fixpoint::Consistent(s) => {
                let encode = |var| s.candidates(var).iter().fold(0u8, |m, &v| m | 1 << v);
                for i in 0..n {
                    xs[i] = encode(d.x(i));
                    ys[i] = encode(d.y(i));
                }
                write(out_failed, false, "out_failed")
            }
        }
    })
}
