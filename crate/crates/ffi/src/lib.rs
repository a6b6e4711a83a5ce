//! C interface to `ginv`.
//!
//! Matrices cross the boundary as opaque [`GinvMatrix`] handles created by
//! the `ginv_matrix_*` constructors and released with [`ginv_matrix_free`].
//! Every fallible call returns a [`GinvStatus`]; on failure the message is
//! available from [`ginv_last_error`] on the same thread. Strings returned
//! by the library must be released with [`ginv_string_free`].
//!
//! Operations run on the exact backend when every operand is exact and on
//! the floating-point backend otherwise.

use std::cell::{Cell, RefCell};
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use ginv::certify::{certify, CertContext};
use ginv::cli::exit_code;
use ginv::geninv::{self, Existence, InverseKind};
use ginv::io::{self, AnyMatrix, MatrixFormat};
use ginv::linalg::{nullspace_basis, range_basis, Kernel};
use ginv::spectral::{spectral_projection_schur, SpectralSet};
use ginv::{Backend, Complex64, Field, GinvError, Matrix, Rational, TolerancePolicy};

/// Result of a call. The nonzero values match the exit codes of the
/// `ginv` command.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GinvStatus {
    Ok = 0,
    /// A panic or other internal fault.
    Internal = 1,
    /// The requested inverse does not exist.
    NotExists = 2,
    /// Invalid argument, null pointer or unparseable input.
    InvalidArgument = 3,
    /// Numerical failure: singular system, eigenvalue on a contour,
    /// unseparated spectrum, failed certification.
    Numerical = 4,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GinvBackend {
    Exact = 0,
    Float = 1,
}

/// Opaque matrix handle.
pub struct GinvMatrix {
    inner: AnyMatrix,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
    static TAU: Cell<f64> = const { Cell::new(TolerancePolicy::DEFAULT_TAU) };
}

struct Fail(GinvStatus, String);

impl From<GinvError> for Fail {
    fn from(e: GinvError) -> Self {
        let status = match exit_code(&e) {
            4 => GinvStatus::Numerical,
            _ => GinvStatus::InvalidArgument,
        };
        Fail(status, e.to_string())
    }
}

fn invalid(msg: impl Into<String>) -> Fail {
    Fail(GinvStatus::InvalidArgument, msg.into())
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

/// Runs `f`, recording its error message and converting panics.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> GinvStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GinvStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            set_error(&format!("internal error: {msg}"));
            GinvStatus::Internal
        }
    }
}

fn policy() -> TolerancePolicy {
    let tau = TAU.with(Cell::get);
    TolerancePolicy::new(tau, TolerancePolicy::DEFAULT_EPS).unwrap_or_default()
}

unsafe fn handle<'a>(m: *const GinvMatrix, name: &str) -> Result<&'a AnyMatrix, Fail> {
    // SAFETY: the caller passes null or a live handle from this library.
    unsafe { m.as_ref() }
        .map(|m| &m.inner)
        .ok_or_else(|| invalid(format!("{name} is null")))
}

unsafe fn out_ptr<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, Fail> {
    // SAFETY: the caller passes null or a writable pointer.
    unsafe { p.as_mut() }.ok_or_else(|| invalid(format!("{name} is null")))
}

unsafe fn c_str<'a>(s: *const c_char, name: &str) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(invalid(format!("{name} is null")));
    }
    // SAFETY: non-null and NUL-terminated by contract.
    unsafe { CStr::from_ptr(s) }
        .to_str()
        .map_err(|_| invalid(format!("{name} is not valid UTF-8")))
}

fn boxed(m: AnyMatrix) -> *mut GinvMatrix {
    Box::into_raw(Box::new(GinvMatrix { inner: m }))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).unwrap_or_default().into_raw()
}

/// Operands converted to a common backend.
enum Operands {
    Exact(Vec<Matrix<Rational>>),
    Float(Vec<Matrix<Complex64>>),
}

fn operands(ms: &[&AnyMatrix]) -> Result<Operands, Fail> {
    if ms.iter().all(|m| m.backend() == Backend::Exact) {
        Ok(Operands::Exact(ms.iter().map(|m| m.to_exact()).collect::<Result<_, _>>()?))
    } else {
        Ok(Operands::Float(ms.iter().map(|m| m.to_float()).collect()))
    }
}

/// Applies a generic operation returning `Existence<Matrix<F>>` to the
/// operands and stores the result in `out`.
macro_rules! run_op {
    ($ms:expr, $out:expr, |$v:ident| $body:expr) => {{
        let out = unsafe { out_ptr($out, "out")? };
        let result = match operands($ms)? {
            Operands::Exact($v) => finish($body?).map(AnyMatrix::Exact),
            Operands::Float($v) => finish($body?).map(AnyMatrix::Float),
        }?;
        *out = boxed(result);
        Ok(())
    }};
}

fn finish<F: Kernel>(e: Existence<Matrix<F>>) -> Result<Matrix<F>, Fail> {
    match e {
        Existence::Exists(m) => Ok(m),
        Existence::NotExists(o) => Err(Fail(GinvStatus::NotExists, format!("inverse does not exist: {o}"))),
    }
}

// ---------------------------------------------------------------------------
// errors and configuration

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn ginv_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Sets the rank tolerance used by subsequent calls on this thread.
#[no_mangle]
pub extern "C" fn ginv_set_tolerance(tau: f64) -> GinvStatus {
    guard(|| {
        TolerancePolicy::new(tau, TolerancePolicy::DEFAULT_EPS)?;
        TAU.with(|t| t.set(tau));
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ginv_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: allocated by `CString::into_raw` in this crate.
        drop(unsafe { CString::from_raw(s) });
    }
}

// ---------------------------------------------------------------------------
// matrices

/// Real matrix from `rows*cols` row-major doubles, on the float backend.
///
/// # Safety
/// `data` must point to `rows*cols` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ginv_matrix_from_f64(
    rows: usize,
    cols: usize,
    data: *const f64,
    out: *mut *mut GinvMatrix,
) -> GinvStatus {
    guard(|| {
        let out = unsafe { out_ptr(out, "out")? };
        let len = rows.checked_mul(cols).ok_or_else(|| invalid("matrix too large"))?;
        if data.is_null() && len > 0 {
            return Err(invalid("data is null"));
        }
        let values = if len == 0 { &[][..] } else { unsafe { std::slice::from_raw_parts(data, len) } };
        if let Some(bad) = values.iter().find(|x| !x.is_finite()) {
            return Err(invalid(format!("non-finite entry {bad}")));
        }
        let m = Matrix::from_vec(rows, cols, values.iter().map(|&x| Complex64::new(x, 0.0)).collect())?;
        *out = boxed(AnyMatrix::Float(m));
        Ok(())
    })
}

/// Complex matrix from `rows*cols` row-major `(re, im)` pairs.
///
/// # Safety
/// `data` must point to `2*rows*cols` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ginv_matrix_from_complex(
    rows: usize,
    cols: usize,
    data: *const f64,
    out: *mut *mut GinvMatrix,
) -> GinvStatus {
    guard(|| {
        let out = unsafe { out_ptr(out, "out")? };
        let len = rows.checked_mul(cols).and_then(|n| n.checked_mul(2)).ok_or_else(|| invalid("matrix too large"))?;
        if data.is_null() && len > 0 {
            return Err(invalid("data is null"));
        }
        let values = if len == 0 { &[][..] } else { unsafe { std::slice::from_raw_parts(data, len) } };
        if values.iter().any(|x| !x.is_finite()) {
            return Err(invalid("non-finite entry"));
        }
        let m = Matrix::from_vec(rows, cols, values.chunks(2).map(|p| Complex64::new(p[0], p[1])).collect())?;
        *out = boxed(AnyMatrix::Float(m));
        Ok(())
    })
}

/// Rational matrix from row-major numerators and denominators, on the
/// exact backend.
///
/// # Safety
/// `num` and `den` must each point to `rows*cols` values; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn ginv_matrix_from_rational(
    rows: usize,
    cols: usize,
    num: *const i64,
    den: *const i64,
    out: *mut *mut GinvMatrix,
) -> GinvStatus {
    guard(|| {
        let out = unsafe { out_ptr(out, "out")? };
        let len = rows.checked_mul(cols).ok_or_else(|| invalid("matrix too large"))?;
        if (num.is_null() || den.is_null()) && len > 0 {
            return Err(invalid("num or den is null"));
        }
        let (n, d) = if len == 0 {
            (&[][..], &[][..])
        } else {
            unsafe { (std::slice::from_raw_parts(num, len), std::slice::from_raw_parts(den, len)) }
        };
        if d.contains(&0) {
            return Err(invalid("zero denominator"));
        }
        let m = Matrix::from_vec(rows, cols, n.iter().zip(d).map(|(&p, &q)| Rational::from_ratio(p, q)).collect())?;
        *out = boxed(AnyMatrix::Exact(m));
        Ok(())
    })
}

/// Reads a Matrix Market or JSON file. JSON rational files always load on
/// the exact backend.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ginv_matrix_read(path: *const c_char, backend: GinvBackend, out: *mut *mut GinvMatrix) -> GinvStatus {
    guard(|| {
        let out = unsafe { out_ptr(out, "out")? };
        let path = unsafe { c_str(path, "path")? };
        let backend = match backend {
            GinvBackend::Exact => Backend::Exact,
            GinvBackend::Float => Backend::Float,
        };
        let m = io::parse_matrix(Path::new(path), backend)?;
        *out = boxed(m);
        Ok(())
    })
}

/// Writes the matrix; the format follows the extension (`.json` or Matrix
/// Market).
///
/// # Safety
/// `m` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn ginv_matrix_write(m: *const GinvMatrix, path: *const c_char) -> GinvStatus {
    guard(|| {
        let m = unsafe { handle(m, "m")? };
        let path = Path::new(unsafe { c_str(path, "path")? });
        let format = MatrixFormat::from_path(path);
        match m {
            AnyMatrix::Exact(x) => io::write_matrix(x, path, format)?,
            AnyMatrix::Float(x) => io::write_matrix(x, path, format)?,
        }
        Ok(())
    })
}

/// # Safety
/// `m` must be null or a live handle; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn ginv_matrix_free(m: *mut GinvMatrix) {
    if !m.is_null() {
        // SAFETY: allocated by `boxed`.
        drop(unsafe { Box::from_raw(m) });
    }
}

/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ginv_matrix_rows(m: *const GinvMatrix) -> usize {
    unsafe { m.as_ref() }.map_or(0, |m| m.inner.shape().0)
}

/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ginv_matrix_cols(m: *const GinvMatrix) -> usize {
    unsafe { m.as_ref() }.map_or(0, |m| m.inner.shape().1)
}

/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ginv_matrix_backend(m: *const GinvMatrix, out: *mut GinvBackend) -> GinvStatus {
    guard(|| {
        let m = unsafe { handle(m, "m")? };
        let out = unsafe { out_ptr(out, "out")? };
        *out = match m.backend() {
            Backend::Exact => GinvBackend::Exact,
            Backend::Float => GinvBackend::Float,
        };
        Ok(())
    })
}

/// Entry `(i, j)` as a complex double; exact entries are rounded.
///
/// # Safety
/// `m` must be a live handle; `re` and `im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ginv_matrix_get(m: *const GinvMatrix, i: usize, j: usize, re: *mut f64, im: *mut f64) -> GinvStatus {
    guard(|| {
        let m = unsafe { handle(m, "m")? };
        let re = unsafe { out_ptr(re, "re")? };
        let im = unsafe { out_ptr(im, "im")? };
        let (rows, cols) = m.shape();
        if i >= rows || j >= cols {
            return Err(invalid(format!("index ({i}, {j}) out of range for {rows}x{cols}")));
        }
        let z = match m {
            AnyMatrix::Exact(x) => x[(i, j)].to_c64(),
            AnyMatrix::Float(x) => x[(i, j)],
        };
        *re = z.re;
        *im = z.im;
        Ok(())
    })
}

/// Compact text form, e.g. `[[2,0],[1/3,0]]`. Free with
/// [`ginv_string_free`].
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ginv_matrix_to_string(m: *const GinvMatrix, out: *mut *mut c_char) -> GinvStatus {
    guard(|| {
        let m = unsafe { handle(m, "m")? };
        let out = unsafe { out_ptr(out, "out")? };
        *out = into_c_string(m.to_string());
        Ok(())
    })
}

/// JSON form (`rows`, `cols`, `field`, `data`). Free with
/// [`ginv_string_free`].
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ginv_matrix_to_json(m: *const GinvMatrix, out: *mut *mut c_char) -> GinvStatus {
    guard(|| {
        let m = unsafe { handle(m, "m")? };
        let out = unsafe { out_ptr(out, "out")? };
        *out = into_c_string(m.to_json().to_string());
        Ok(())
    })
}

// ---------------------------------------------------------------------------
// inverses

/// # Safety
/// `a` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ginv_moore_penrose(a: *const GinvMatrix, out: *mut *mut GinvMatrix) -> GinvStatus {
    guard(|| {
        let a = unsafe { handle(a, "a")? };
        run_op!(&[a], out, |v| Ok::<_, Fail>(Existence::Exists(geninv::moore_penrose(&v[0], &policy()))))
    })
}

/// # Safety
/// `a` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ginv_group(a: *const GinvMatrix, out: *mut *mut GinvMatrix) -> GinvStatus {
    guard(|| {
        let a = unsafe { handle(a, "a")? };
        run_op!(&[a], out, |v| geninv::group_inverse(&v[0], &policy()))
    })
}

/// Drazin inverse; `index` (may be null) receives the Drazin index.
///
/// # Safety
/// `a` must be a live handle; `out` must be writable; `index` null or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn ginv_drazin(a: *const GinvMatrix, out: *mut *mut GinvMatrix, index: *mut usize) -> GinvStatus {
    guard(|| {
        let a = unsafe { handle(a, "a")? };
        let mut k = 0;
        run_op!(&[a], out, |v| geninv::drazin(&v[0], &policy()).map(|d| {
            k = d.index;
            Existence::Exists(d.inverse)
        }))
        .inspect(|_| {
            if let Some(ix) = unsafe { index.as_mut() } {
                *ix = k;
            }
        })
    })
}

/// Inverse of `a` along `d`.
///
/// # Safety
/// `a`, `d` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ginv_mary(a: *const GinvMatrix, d: *const GinvMatrix, out: *mut *mut GinvMatrix) -> GinvStatus {
    guard(|| {
        let a = unsafe { handle(a, "a")? };
        let d = unsafe { handle(d, "d")? };
        run_op!(&[a, d], out, |v| geninv::mary_inverse(&v[0], &v[1], &policy()))
    })
}

/// Outer inverse whose range is spanned by the columns of `range` and whose
/// nullspace is spanned by the columns of `nullspace`.
///
/// # Safety
/// `a`, `range`, `nullspace` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ginv_outer(
    a: *const GinvMatrix,
    range: *const GinvMatrix,
    nullspace: *const GinvMatrix,
    out: *mut *mut GinvMatrix,
) -> GinvStatus {
    guard(|| {
        let a = unsafe { handle(a, "a")? };
        let r = unsafe { handle(range, "range")? };
        let n = unsafe { handle(nullspace, "nullspace")? };
        run_op!(&[a, r, n], out, |v| {
            let pol = policy();
            geninv::outer_prescribed(&v[0], &range_basis(&v[1], &pol), &range_basis(&v[2], &pol), &pol)
        })
    })
}

/// `(p, q)`-inverse: the outer inverse `b` with `ba = p`, `1 − ab = q`.
///
/// # Safety
/// `a`, `p`, `q` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ginv_pq(
    a: *const GinvMatrix,
    p: *const GinvMatrix,
    q: *const GinvMatrix,
    out: *mut *mut GinvMatrix,
) -> GinvStatus {
    guard(|| {
        let a = unsafe { handle(a, "a")? };
        let p = unsafe { handle(p, "p")? };
        let q = unsafe { handle(q, "q")? };
        run_op!(&[a, p, q], out, |v| geninv::pq_inverse(&v[0], &v[1], &v[2], &policy()))
    })
}

/// Spectral projection onto the eigenvalues inside the disk
/// `|λ − (cx + i·cy)| < r`. Always computed in floating point.
///
/// # Safety
/// `a` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ginv_spectral_projection(
    a: *const GinvMatrix,
    cx: f64,
    cy: f64,
    r: f64,
    out: *mut *mut GinvMatrix,
) -> GinvStatus {
    guard(|| {
        let a = unsafe { handle(a, "a")? }.to_float();
        let out = unsafe { out_ptr(out, "out")? };
        let set = SpectralSet::disk(&a, Complex64::new(cx, cy), r)?;
        let p = spectral_projection_schur(&a, &set, &policy())?;
        *out = boxed(AnyMatrix::Float(p.matrix));
        Ok(())
    })
}

/// Certifies `b` as an inverse of `a` of the given kind (`"inner"`,
/// `"outer"`, `"reflexive"`, `"mp"`, `"group"`, `"drazin"`, `"mary"`).
/// `along` is required for `"mary"` and ignored otherwise. Writes the
/// certificate JSON to `json` (may be null) and the verdict to `passed`
/// (may be null). A failed certificate is not an error.
///
/// # Safety
/// `a`, `b` must be live handles, `along` null or a live handle, `kind` a
/// NUL-terminated string; `json` and `passed` null or writable.
#[no_mangle]
pub unsafe extern "C" fn ginv_certify(
    a: *const GinvMatrix,
    b: *const GinvMatrix,
    kind: *const c_char,
    along: *const GinvMatrix,
    json: *mut *mut c_char,
    passed: *mut bool,
) -> GinvStatus {
    guard(|| {
        let a = unsafe { handle(a, "a")? };
        let b = unsafe { handle(b, "b")? };
        let kind: InverseKind = unsafe { c_str(kind, "kind")? }.parse().map_err(|e: GinvError| Fail::from(e))?;
        let along = unsafe { along.as_ref() }.map(|m| &m.inner);
        if kind == InverseKind::Mary && along.is_none() {
            return Err(invalid("kind mary needs a direction matrix"));
        }
        if kind == InverseKind::Pq {
            return Err(invalid("kind pq is not supported here; use ginv_pq and certify the idempotents"));
        }
        let mut ms = vec![a, b];
        ms.extend(along);
        let (text, ok) = match operands(&ms)? {
            Operands::Exact(v) => cert_json(&v, kind)?,
            Operands::Float(v) => cert_json(&v, kind)?,
        };
        if let Some(p) = unsafe { passed.as_mut() } {
            *p = ok;
        }
        if let Some(j) = unsafe { json.as_mut() } {
            *j = into_c_string(text);
        }
        Ok(())
    })
}

fn cert_json<F: Kernel>(v: &[Matrix<F>], kind: InverseKind) -> Result<(String, bool), Fail> {
    let ctx = match v.get(2) {
        Some(d) if kind == InverseKind::Mary => CertContext::along(d.clone()),
        _ => CertContext::empty(),
    };
    let cert = certify(&v[0], &v[1], kind, &ctx, &policy())?;
    Ok((cert.to_json().to_string(), cert.passed()))
}

/// Column basis of the nullspace of `a`.
///
/// # Safety
/// `a` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ginv_nullspace(a: *const GinvMatrix, out: *mut *mut GinvMatrix) -> GinvStatus {
    guard(|| {
        let a = unsafe { handle(a, "a")? };
        run_op!(&[a], out, |v| Ok::<_, Fail>(Existence::Exists(
            nullspace_basis(&v[0], &policy()).basis().clone()
        )))
    })
}
