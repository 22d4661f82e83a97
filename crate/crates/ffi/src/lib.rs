//! C ABI over `schro-core`.
//!
//! Objects cross the boundary as opaque pointers created by `*_new` or a
//! computation and released with the matching `*_free`. Every fallible call
//! returns a [`SchroStatus`]; the message of the most recent failure on the
//! calling thread is available from [`schro_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use num_complex::Complex64;
use schro_core::schrodingerization::{propagate, DriftShift, Grid};
use schro_core::solvers::{
    quantum_jacobi_solve, quantum_power_method, GridSpec, LinearSolveReport, PowerOptions, PowerReport, SolveOptions,
};
use schro_core::{ComplexMatrix, ComplexVector, SchroError};

/// Result codes. Zero is success; the rest mirror the library error kinds.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchroStatus {
    Ok = 0,
    DimensionMismatch = 10,
    NotSquare = 11,
    NotHermitian = 12,
    NonFinite = 13,
    DegenerateState = 14,
    InvalidGrid = 15,
    InvalidArgument = 16,
    Numerical = 17,
    ZeroDiagonal = 20,
    ConvergenceUnsafe = 21,
    NoGap = 22,
    UnreachableSteadyState = 23,
    UnreachableEigenvector = 24,
    DegenerateRecovery = 25,
    SizeOverflow = 26,
    Singular = 27,
    Parse = 30,
    Io = 31,
    NullPointer = 40,
    OutOfBounds = 41,
    Panic = 50,
}

impl From<&SchroError> for SchroStatus {
    fn from(err: &SchroError) -> Self {
        match err {
            SchroError::DimensionMismatch(_) => SchroStatus::DimensionMismatch,
            SchroError::NotSquare { .. } => SchroStatus::NotSquare,
            SchroError::NotHermitian { .. } => SchroStatus::NotHermitian,
            SchroError::NonFinite(_) => SchroStatus::NonFinite,
            SchroError::DegenerateState(_) => SchroStatus::DegenerateState,
            SchroError::InvalidGrid(_) => SchroStatus::InvalidGrid,
            SchroError::InvalidArgument(_) => SchroStatus::InvalidArgument,
            SchroError::Numerical(_) => SchroStatus::Numerical,
            SchroError::ZeroDiagonal { .. } => SchroStatus::ZeroDiagonal,
            SchroError::ConvergenceUnsafe(_) => SchroStatus::ConvergenceUnsafe,
            SchroError::NoGap(_) => SchroStatus::NoGap,
            SchroError::UnreachableSteadyState => SchroStatus::UnreachableSteadyState,
            SchroError::UnreachableEigenvector => SchroStatus::UnreachableEigenvector,
            SchroError::DegenerateRecovery { .. } => SchroStatus::DegenerateRecovery,
            SchroError::SizeOverflow { .. } => SchroStatus::SizeOverflow,
            SchroError::Singular => SchroStatus::Singular,
            SchroError::Parse { .. } => SchroStatus::Parse,
            SchroError::Io(_) => SchroStatus::Io,
        }
    }
}

/// Dense complex matrix.
pub struct SchroMatrix(ComplexMatrix);

/// Dense complex vector.
pub struct SchroVector(ComplexVector);

/// Outcome of a linear solve.
pub struct SchroSolveReport(LinearSolveReport);

/// Outcome of a dominant-eigenvalue estimate.
pub struct SchroPowerReport(PowerReport);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = text);
}

enum Failure {
    Lib(SchroError),
    Null(&'static str),
    Bounds(String),
}

impl From<SchroError> for Failure {
    fn from(err: SchroError) -> Self {
        Failure::Lib(err)
    }
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> SchroStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_last_error("");
            SchroStatus::Ok
        }
        Ok(Err(Failure::Lib(err))) => {
            set_last_error(&err.to_string());
            SchroStatus::from(&err)
        }
        Ok(Err(Failure::Null(what))) => {
            set_last_error(&format!("null pointer passed for {what}"));
            SchroStatus::NullPointer
        }
        Ok(Err(Failure::Bounds(message))) => {
            set_last_error(&message);
            SchroStatus::OutOfBounds
        }
        Err(_) => {
            set_last_error("internal panic");
            SchroStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(what))
}

unsafe fn write<T>(out: *mut T, value: T, what: &'static str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null(what));
    }
    out.write(value);
    Ok(())
}

/// Reads `len` values from `re` and, when non-null, `im`.
unsafe fn complex_slice(len: usize, re: *const f64, im: *const f64) -> Result<Vec<Complex64>, Failure> {
    if len == 0 {
        return Ok(Vec::new());
    }
    if re.is_null() {
        return Err(Failure::Null("re"));
    }
    let re = std::slice::from_raw_parts(re, len);
    Ok(if im.is_null() {
        re.iter().map(|&r| Complex64::new(r, 0.0)).collect()
    } else {
        let im = std::slice::from_raw_parts(im, len);
        re.iter().zip(im).map(|(&r, &i)| Complex64::new(r, i)).collect()
    })
}

/// Message of the last failed call on this thread, empty after a success.
/// The pointer stays valid until the next call into the library.
#[no_mangle]
pub extern "C" fn schro_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn schro_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a `rows` x `cols` matrix from row-major arrays; `im` may be null.
///
/// # Safety
/// `re` (and `im` when non-null) must point to `rows * cols` doubles.
#[no_mangle]
pub unsafe extern "C" fn schro_matrix_new(
    rows: usize,
    cols: usize,
    re: *const f64,
    im: *const f64,
    out: *mut *mut SchroMatrix,
) -> SchroStatus {
    guard(|| {
        let len = rows.checked_mul(cols).ok_or_else(|| Failure::Bounds("matrix size overflows".into()))?;
        let data = complex_slice(len, re, im)?;
        let m = ComplexMatrix::from_row_slice(rows, cols, &data);
        write(out, Box::into_raw(Box::new(SchroMatrix(m))), "out")
    })
}

/// Reads a coordinate Matrix Market file.
///
/// # Safety
/// `path` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn schro_matrix_from_matrix_market(
    path: *const c_char,
    out: *mut *mut SchroMatrix,
) -> SchroStatus {
    guard(|| {
        if path.is_null() {
            return Err(Failure::Null("path"));
        }
        let path =
            CStr::from_ptr(path).to_str().map_err(|_| SchroError::InvalidArgument("path is not valid UTF-8".into()))?;
        let m = schro_core::cli::read_matrix_market(path)?;
        write(out, Box::into_raw(Box::new(SchroMatrix(m))), "out")
    })
}

/// # Safety
/// `m` must be null or a live matrix handle.
#[no_mangle]
pub unsafe extern "C" fn schro_matrix_rows(m: *const SchroMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.0.nrows())
}

/// # Safety
/// `m` must be null or a live matrix handle.
#[no_mangle]
pub unsafe extern "C" fn schro_matrix_cols(m: *const SchroMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.0.ncols())
}

/// # Safety
/// `m` must be a live matrix handle; `re` and `im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn schro_matrix_get(
    m: *const SchroMatrix,
    row: usize,
    col: usize,
    re: *mut f64,
    im: *mut f64,
) -> SchroStatus {
    guard(|| {
        let m = &deref(m, "matrix")?.0;
        let z = m
            .get((row, col))
            .ok_or_else(|| Failure::Bounds(format!("({row}, {col}) outside {}x{}", m.nrows(), m.ncols())))?;
        write(re, z.re, "re")?;
        write(im, z.im, "im")
    })
}

/// # Safety
/// `m` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn schro_matrix_free(m: *mut SchroMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Builds a vector of length `len`; `im` may be null.
///
/// # Safety
/// `re` (and `im` when non-null) must point to `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn schro_vector_new(
    len: usize,
    re: *const f64,
    im: *const f64,
    out: *mut *mut SchroVector,
) -> SchroStatus {
    guard(|| {
        let data = complex_slice(len, re, im)?;
        write(out, Box::into_raw(Box::new(SchroVector(ComplexVector::from_vec(data)))), "out")
    })
}

/// # Safety
/// `v` must be null or a live vector handle.
#[no_mangle]
pub unsafe extern "C" fn schro_vector_len(v: *const SchroVector) -> usize {
    v.as_ref().map_or(0, |v| v.0.len())
}

/// # Safety
/// `v` must be a live vector handle; `re` and `im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn schro_vector_get(
    v: *const SchroVector,
    index: usize,
    re: *mut f64,
    im: *mut f64,
) -> SchroStatus {
    guard(|| {
        let v = &deref(v, "vector")?.0;
        let z = v.get(index).ok_or_else(|| Failure::Bounds(format!("index {index} outside length {}", v.len())))?;
        write(re, z.re, "re")?;
        write(im, z.im, "im")
    })
}

/// # Safety
/// `v` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn schro_vector_free(v: *mut SchroVector) {
    if !v.is_null() {
        drop(Box::from_raw(v));
    }
}

fn grid_spec(n: usize, half_width: f64) -> GridSpec {
    GridSpec { n, half_width: (half_width > 0.0).then_some(half_width) }
}

/// Evolves dx/dt = (C − I)x to time `t` on an `n`-point grid and returns the
/// unit recovered state. A non-positive `half_width` selects it from `t`.
/// `success_probability` may be null.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn schro_propagate(
    c: *const SchroMatrix,
    x0: *const SchroVector,
    t: f64,
    n: usize,
    half_width: f64,
    out: *mut *mut SchroVector,
    success_probability: *mut f64,
) -> SchroStatus {
    guard(|| {
        let c = &deref(c, "matrix")?.0;
        let x0 = &deref(x0, "x0")?.0;
        let grid: Grid = grid_spec(n, half_width).resolve(c, t, DriftShift::default())?;
        let r = propagate(c, x0, t, &grid)?;
        if !success_probability.is_null() {
            success_probability.write(r.success_probability);
        }
        write(out, Box::into_raw(Box::new(SchroVector(r.state))), "out")
    })
}

/// Jacobi solve of A y = b with fidelity tolerance `delta`. `y0` may be null
/// for a zero initial guess.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn schro_jacobi_solve(
    a: *const SchroMatrix,
    b: *const SchroVector,
    y0: *const SchroVector,
    delta: f64,
    n: usize,
    out: *mut *mut SchroSolveReport,
) -> SchroStatus {
    guard(|| {
        let a = &deref(a, "matrix")?.0;
        let b = &deref(b, "rhs")?.0;
        let y0 = match y0.as_ref() {
            Some(v) => v.0.clone(),
            None => ComplexVector::zeros(b.len()),
        };
        let options = SolveOptions { delta, grid: grid_spec(n, 0.0), ..SolveOptions::default() };
        let report = quantum_jacobi_solve(a, b, &y0, &options)?;
        write(out, Box::into_raw(Box::new(SchroSolveReport(report))), "out")
    })
}

/// Copies the recovered solution y into a new vector handle.
///
/// # Safety
/// `r` must be a live report; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn schro_solve_report_solution(
    r: *const SchroSolveReport,
    out: *mut *mut SchroVector,
) -> SchroStatus {
    guard(|| {
        let r = &deref(r, "report")?.0;
        write(out, Box::into_raw(Box::new(SchroVector(r.y_classical.clone()))), "out")
    })
}

/// Fidelity of the solution direction against the direct solve; NaN for null.
///
/// # Safety
/// `r` must be null or a live report.
#[no_mangle]
pub unsafe extern "C" fn schro_solve_report_fidelity(r: *const SchroSolveReport) -> f64 {
    r.as_ref().map_or(f64::NAN, |r| r.0.fidelity)
}

/// ‖A y − b‖ / ‖b‖; NaN for null.
///
/// # Safety
/// `r` must be null or a live report.
#[no_mangle]
pub unsafe extern "C" fn schro_solve_report_residual(r: *const SchroSolveReport) -> f64 {
    r.as_ref().map_or(f64::NAN, |r| r.0.residual)
}

/// Evolution time used; NaN for null.
///
/// # Safety
/// `r` must be null or a live report.
#[no_mangle]
pub unsafe extern "C" fn schro_solve_report_time(r: *const SchroSolveReport) -> f64 {
    r.as_ref().map_or(f64::NAN, |r| r.0.t_f_used)
}

/// # Safety
/// `r` must be null or a live report.
#[no_mangle]
pub unsafe extern "C" fn schro_solve_report_success_probability(r: *const SchroSolveReport) -> f64 {
    r.as_ref().map_or(f64::NAN, |r| r.0.success_probability)
}

/// # Safety
/// `r` must be null or a report not yet freed.
#[no_mangle]
pub unsafe extern "C" fn schro_solve_report_free(r: *mut SchroSolveReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Dominant eigenvalue of C to accuracy `epsilon` from the start vector `x0`.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn schro_power_method(
    c: *const SchroMatrix,
    x0: *const SchroVector,
    epsilon: f64,
    n: usize,
    out: *mut *mut SchroPowerReport,
) -> SchroStatus {
    guard(|| {
        let c = &deref(c, "matrix")?.0;
        let x0 = &deref(x0, "x0")?.0;
        let options = PowerOptions { epsilon, grid: grid_spec(n, 0.0), ..PowerOptions::default() };
        let report = quantum_power_method(c, x0, &options)?;
        write(out, Box::into_raw(Box::new(SchroPowerReport(report))), "out")
    })
}

/// # Safety
/// `r` must be a live report; `re` and `im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn schro_power_report_eigenvalue(
    r: *const SchroPowerReport,
    re: *mut f64,
    im: *mut f64,
) -> SchroStatus {
    guard(|| {
        let z = deref(r, "report")?.0.eigenvalue_estimate;
        write(re, z.re, "re")?;
        write(im, z.im, "im")
    })
}

/// √Tr(C†C)·√(2 − F); NaN for null.
///
/// # Safety
/// `r` must be null or a live report.
#[no_mangle]
pub unsafe extern "C" fn schro_power_report_error_bound(r: *const SchroPowerReport) -> f64 {
    r.as_ref().map_or(f64::NAN, |r| r.0.eigenvalue_error_bound)
}

/// # Safety
/// `r` must be null or a live report.
#[no_mangle]
pub unsafe extern "C" fn schro_power_report_time(r: *const SchroPowerReport) -> f64 {
    r.as_ref().map_or(f64::NAN, |r| r.0.t_max_used)
}

/// # Safety
/// `r` must be null or a report not yet freed.
#[no_mangle]
pub unsafe extern "C" fn schro_power_report_free(r: *mut SchroPowerReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}
