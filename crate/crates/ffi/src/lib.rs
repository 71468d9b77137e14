//! C ABI over the `hj-sweep` solvers.
//!
//! A solve returns an opaque [`HjSolution`] handle; every accessor copies out
//! of it and the caller releases it with [`hj_solution_free`]. Functions
//! report failure through [`HjStatus`] and leave a message retrievable with
//! [`hj_last_error`] on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};

use hj_sweep::{make_problem, solve, Approach, HjError, ProblemId, SolutionField, SweepReport};

/// Result codes returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HjStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    UnknownProblem = 3,
    Diverged = 4,
    SolverError = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

/// Which nodal array to copy out of a solution.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HjField {
    Phi = 0,
    U = 1,
    V = 2,
}

/// Solver settings. Fill with [`hj_options_default`] and override fields;
/// `NAN` (or `0` for `max_iterations`) keeps the catalogued value for the
/// problem and mesh.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct HjOptions {
    /// 1 or 2.
    pub approach: u32,
    pub hybrid: bool,
    pub omega: f64,
    pub epsilon: f64,
    pub delta_tol: f64,
    pub max_iterations: u32,
    /// Weight freezing threshold; `NAN` disables freezing.
    pub freeze_tol: f64,
}

/// Scalar summary of a solve. Error norms are `NAN` for problems without a
/// closed form.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct HjSolveInfo {
    /// Domain nodes per axis.
    pub n: usize,
    pub h: f64,
    pub xmin: f64,
    pub ymin: f64,
    pub iterations: usize,
    pub converged: bool,
    pub l1_error: f64,
    pub linf_error: f64,
    pub wall_time: f64,
    pub epsilon: f64,
}

/// Opaque result of [`hj_solve`].
pub struct HjSolution {
    field: SolutionField,
    report: SweepReport,
    epsilon: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

fn fail(status: HjStatus, msg: impl Into<String>) -> HjStatus {
    set_error(msg);
    status
}

fn status_of(err: &HjError) -> HjStatus {
    match err {
        HjError::Config(_) => HjStatus::InvalidArgument,
        HjError::UnknownProblem(_) => HjStatus::UnknownProblem,
        HjError::Divergence { .. } => HjStatus::Diverged,
        _ => HjStatus::SolverError,
    }
}

/// Runs `f`, turning a panic into [`HjStatus::Panic`].
fn guarded(f: impl FnOnce() -> HjStatus) -> HjStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(HjStatus::Panic, format!("internal panic: {msg}"))
        }
    }
}

fn nan_or(v: f64) -> Option<f64> {
    (!v.is_nan()).then_some(v)
}

/// Writes the catalogue-default options into `out`.
///
/// # Safety
/// `out` must be null or point to writable memory for one `HjOptions`.
#[no_mangle]
pub unsafe extern "C" fn hj_options_default(out: *mut HjOptions) -> HjStatus {
    if out.is_null() {
        return fail(HjStatus::NullPointer, "out is null");
    }
    out.write(HjOptions {
        approach: 1,
        hybrid: false,
        omega: f64::NAN,
        epsilon: f64::NAN,
        delta_tol: f64::NAN,
        max_iterations: 0,
        freeze_tol: f64::NAN,
    });
    HjStatus::Ok
}

/// Solves benchmark `problem` (`"ex1"` .. `"ex7sv"`) on an `n x n` mesh.
/// On success `*out` owns a new solution; on failure it is set to null.
///
/// # Safety
/// `problem` must be a NUL-terminated string, `options` null (catalogue
/// defaults) or valid, and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hj_solve(
    problem: *const c_char,
    n: usize,
    options: *const HjOptions,
    out: *mut *mut HjSolution,
) -> HjStatus {
    if out.is_null() {
        return fail(HjStatus::NullPointer, "out is null");
    }
    out.write(std::ptr::null_mut());
    if problem.is_null() {
        return fail(HjStatus::NullPointer, "problem is null");
    }
    let name = CStr::from_ptr(problem).to_string_lossy().into_owned();
    let opts = if options.is_null() {
        let mut d = std::mem::MaybeUninit::uninit();
        hj_options_default(d.as_mut_ptr());
        d.assume_init()
    } else {
        *options
    };
    guarded(|| match run(&name, n, &opts) {
        Ok(sol) => {
            out.write(Box::into_raw(Box::new(sol)));
            HjStatus::Ok
        }
        Err((status, msg)) => fail(status, msg),
    })
}

fn run(name: &str, n: usize, opts: &HjOptions) -> Result<HjSolution, (HjStatus, String)> {
    let err = |e: HjError| (status_of(&e), e.to_string());
    let id: ProblemId = name.parse().map_err(err)?;
    let approach = match opts.approach {
        1 => Approach::One,
        2 => Approach::Two,
        a => return Err((HjStatus::InvalidArgument, format!("approach must be 1 or 2, got {a}"))),
    };
    let (spec, grid) = make_problem(id, n).map_err(err)?;
    let mut cfg = spec.default_config(approach);
    cfg.hybrid = opts.hybrid;
    if let Some(w) = nan_or(opts.omega) {
        cfg.omega = w;
    }
    if let Some(e) = nan_or(opts.epsilon) {
        cfg.weights.epsilon = e;
    }
    if let Some(t) = nan_or(opts.delta_tol) {
        cfg.delta_tol = t;
    }
    if opts.max_iterations > 0 {
        cfg.max_iterations = opts.max_iterations as usize;
    }
    cfg.freeze_tol = nan_or(opts.freeze_tol);
    let epsilon = cfg.weights.epsilon;
    let (field, report) = solve(&spec, &grid, &cfg).map_err(err)?;
    Ok(HjSolution { field, report, epsilon })
}

/// Releases a solution. Null is ignored.
///
/// # Safety
/// `solution` must be null or a pointer from [`hj_solve`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hj_solution_free(solution: *mut HjSolution) {
    if !solution.is_null() {
        drop(Box::from_raw(solution));
    }
}

/// Fills `out` with the scalar summary of `solution`.
///
/// # Safety
/// `solution` must come from [`hj_solve`]; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hj_solution_info(solution: *const HjSolution, out: *mut HjSolveInfo) -> HjStatus {
    let (Some(sol), false) = (solution.as_ref(), out.is_null()) else {
        return fail(HjStatus::NullPointer, "null argument");
    };
    let g = &sol.field.grid;
    let r = &sol.report;
    out.write(HjSolveInfo {
        n: g.n,
        h: g.h,
        xmin: g.xmin,
        ymin: g.ymin,
        iterations: r.iterations,
        converged: r.converged,
        l1_error: r.l1_error.unwrap_or(f64::NAN),
        linf_error: r.linf_error.unwrap_or(f64::NAN),
        wall_time: r.wall_time,
        epsilon: sol.epsilon,
    });
    HjStatus::Ok
}

/// Copies one nodal array (`n * n` values, `y` outer, `x` inner) into `buf`.
///
/// # Safety
/// `solution` must come from [`hj_solve`]; `buf` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn hj_solution_copy_field(
    solution: *const HjSolution,
    which: HjField,
    buf: *mut f64,
    len: usize,
) -> HjStatus {
    let (Some(sol), false) = (solution.as_ref(), buf.is_null()) else {
        return fail(HjStatus::NullPointer, "null argument");
    };
    let f = &sol.field;
    let g = &f.grid;
    if len < g.n * g.n {
        return fail(HjStatus::BufferTooSmall, format!("need {} values, got {len}", g.n * g.n));
    }
    let src = match which {
        HjField::Phi => &f.phi,
        HjField::U => &f.u,
        HjField::V => &f.v,
    };
    let dst = std::slice::from_raw_parts_mut(buf, len);
    for (d, (i, j)) in dst.iter_mut().zip(g.interior()) {
        *d = src[g.idx(i, j)];
    }
    HjStatus::Ok
}

/// Copies the per-iteration mean `|Δφ|` history. `*written` receives the
/// full history length even when `buf` is too small.
///
/// # Safety
/// `solution` must come from [`hj_solve`]; `buf` must hold `len` doubles
/// (it may be null when `len` is 0); `written` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hj_solution_delta_history(
    solution: *const HjSolution,
    buf: *mut f64,
    len: usize,
    written: *mut usize,
) -> HjStatus {
    let (Some(sol), false) = (solution.as_ref(), written.is_null()) else {
        return fail(HjStatus::NullPointer, "null argument");
    };
    let hist = &sol.report.delta_history;
    written.write(hist.len());
    if len < hist.len() {
        return fail(HjStatus::BufferTooSmall, format!("need {} values, got {len}", hist.len()));
    }
    if !hist.is_empty() {
        if buf.is_null() {
            return fail(HjStatus::NullPointer, "buf is null");
        }
        std::slice::from_raw_parts_mut(buf, hist.len()).copy_from_slice(hist);
    }
    HjStatus::Ok
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn hj_status_message(status: HjStatus) -> *const c_char {
    let s: &'static CStr = match status {
        HjStatus::Ok => c"ok",
        HjStatus::NullPointer => c"null pointer argument",
        HjStatus::InvalidArgument => c"invalid argument",
        HjStatus::UnknownProblem => c"unknown problem id",
        HjStatus::Diverged => c"solver diverged",
        HjStatus::SolverError => c"solver error",
        HjStatus::BufferTooSmall => c"buffer too small",
        HjStatus::Panic => c"internal panic",
    };
    s.as_ptr()
}

/// Copies the calling thread's last error message into `buf` (truncated,
/// always NUL-terminated) and returns its full length in bytes.
///
/// # Safety
/// `buf` must be null or hold `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn hj_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let k = msg.len().min(len - 1);
            std::ptr::copy_nonoverlapping(msg.as_ptr().cast::<c_char>(), buf, k);
            buf.add(k).write(0);
        }
        msg.len()
    })
}
