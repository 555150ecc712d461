//! C ABI over `minsurf`.
//!
//! Every function returns an [`MsStatus`]; on failure a message is kept per
//! thread and can be read with [`ms_last_error`]. Objects are opaque handles
//! released with their `*_free` function. Strings are NUL-terminated UTF-8.
//!
//! Functions that produce text write into a caller buffer `buf` of `len`
//! bytes and store the required size (including the NUL) in `*needed`; a
//! short buffer yields `MS_STATUS_BUFFER_TOO_SMALL` and leaves `buf` untouched.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use minsurf::catalog::{self, Catalog, CatalogEntry, CatalogError};
use minsurf::domain::{DomainSpec, Rect};
use minsurf::enneper::{self, CausalCharacter, EnneperData, EnneperError, Immersion};
use minsurf::expr::{self, Expr};
use minsurf::kalgebra::{Algebra, KScalar};
use minsurf::mesh::{self, Grid};
use minsurf::verify::VerifyError;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    UnknownSurface = 4,
    ParseError = 5,
    ValidationFailed = 6,
    EvalError = 7,
    BufferTooSmall = 8,
    Panic = 9,
}

/// `MS_ALGEBRA_*` values accepted by [`ms_expr_parse`].
pub const MS_ALGEBRA_COMPLEX: u32 = 0;
pub const MS_ALGEBRA_LORENTZ: u32 = 1;

/// A surface: Enneper data with a domain and an evaluable immersion.
pub struct MsSurface {
    entry: CatalogEntry,
    psi: Immersion,
}

/// A parsed expression in `z`.
pub struct MsExpr {
    expr: Expr,
    algebra: Algebra,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

struct Failure(MsStatus, String);

type FfiResult<T> = Result<T, Failure>;

impl From<CatalogError> for Failure {
    fn from(e: CatalogError) -> Failure {
        let status = match &e {
            CatalogError::UnknownSurface(_) => MsStatus::UnknownSurface,
            CatalogError::Record { .. } => MsStatus::ParseError,
            _ => MsStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

impl From<EnneperError> for Failure {
    fn from(e: EnneperError) -> Failure {
        let status = match &e {
            EnneperError::Parse(_) | EnneperError::WrongAlgebra { .. } | EnneperError::BadHarmonic(_) => {
                MsStatus::ParseError
            }
            EnneperError::EvalAt { .. }
            | EnneperError::PathLeavesDomain { .. }
            | EnneperError::QuadratureNonConvergence(_) => MsStatus::EvalError,
            EnneperError::ConditionViolation(_) | EnneperError::ScalarDegenerate { .. } => MsStatus::ValidationFailed,
            _ => MsStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

impl From<VerifyError> for Failure {
    fn from(e: VerifyError) -> Failure {
        match e {
            VerifyError::Enneper(inner) => inner.into(),
            other => Failure(MsStatus::EvalError, other.to_string()),
        }
    }
}

fn set_error(msg: &str) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.to_string());
}

fn guard(f: impl FnOnce() -> FfiResult<()>) -> MsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            MsStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            set_error(&format!("internal panic: {msg}"));
            MsStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> FfiResult<&'a str> {
    if p.is_null() {
        return Err(Failure(MsStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure(MsStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

fn non_null<T>(p: *const T, what: &str) -> FfiResult<()> {
    if p.is_null() {
        Err(Failure(MsStatus::NullPointer, format!("{what} is null")))
    } else {
        Ok(())
    }
}

/// Copies `text` plus a NUL into `buf` when it fits.
unsafe fn write_text(text: &str, buf: *mut c_char, len: usize, needed: *mut usize) -> FfiResult<()> {
    let size = text.len() + 1;
    if !needed.is_null() {
        *needed = size;
    }
    if buf.is_null() || len < size {
        return Err(Failure(MsStatus::BufferTooSmall, format!("buffer needs {size} bytes")));
    }
    ptr::copy_nonoverlapping(text.as_ptr(), buf.cast::<u8>(), text.len());
    *buf.add(text.len()) = 0;
    Ok(())
}

fn builtin() -> &'static Catalog {
    static CATALOG: std::sync::OnceLock<Catalog> = std::sync::OnceLock::new();
    CATALOG.get_or_init(Catalog::builtin)
}

/// Copies the last error message of this thread into `buf` (truncating to
/// fit) and returns the length of the full message including its NUL.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn ms_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            ptr::copy_nonoverlapping(msg.as_ptr(), buf.cast::<u8>(), n);
            *buf.add(n) = 0;
        }
        msg.len() + 1
    })
}

/// Number of built-in catalog entries.
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn ms_catalog_count(out: *mut usize) -> MsStatus {
    guard(|| {
        non_null(out, "out")?;
        *out = builtin().entries().len();
        Ok(())
    })
}

/// Name of built-in entry `index`.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes; `needed` null or writable.
#[no_mangle]
pub unsafe extern "C" fn ms_catalog_name(index: usize, buf: *mut c_char, len: usize, needed: *mut usize) -> MsStatus {
    guard(|| {
        let entry = builtin()
            .entries()
            .get(index)
            .ok_or_else(|| Failure(MsStatus::InvalidArgument, format!("index {index} out of range")))?;
        write_text(entry.name(), buf, len, needed)
    })
}

/// Looks up a built-in entry by name.
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ms_surface_from_catalog(name: *const c_char, out: *mut *mut MsSurface) -> MsStatus {
    guard(|| {
        non_null(out, "out")?;
        *out = ptr::null_mut();
        let name = str_arg(name, "name")?;
        let entry = builtin().get(name)?.clone();
        let psi = entry.immersion();
        *out = Box::into_raw(Box::new(MsSurface { entry, psi }));
        Ok(())
    })
}

/// Builds a surface from Enneper data over the rect
/// `[u_min, u_max] x [v_min, v_max]` (Cartesian chart, basepoint at the
/// center). `character` is `"spacelike"` or `"timelike"`. The data must pass
/// validation; the immersion is the path integral of the Weierstrass data.
///
/// # Safety
/// String arguments must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ms_surface_from_data(
    character: *const c_char,
    lz: *const c_char,
    pz: *const c_char,
    hz: *const c_char,
    u_min: f64,
    u_max: f64,
    v_min: f64,
    v_max: f64,
    out: *mut *mut MsSurface,
) -> MsStatus {
    guard(|| {
        non_null(out, "out")?;
        *out = ptr::null_mut();
        let character: CausalCharacter = str_arg(character, "character")?.parse()?;
        let rect = Rect::new(u_min, u_max, v_min, v_max);
        if !(rect.u_min < rect.u_max && rect.v_min < rect.v_max) {
            return Err(Failure(MsStatus::InvalidArgument, "empty or non-finite rect".into()));
        }
        let data = EnneperData::parse(
            "custom",
            character,
            str_arg(lz, "lz")?,
            str_arg(pz, "pz")?,
            str_arg(hz, "hz")?,
            DomainSpec::rect(rect),
        )?;
        let report = enneper::validate(&data)?;
        if !report.pass {
            return Err(Failure(MsStatus::ValidationFailed, report.failures().join("; ")));
        }
        let psi = Immersion::integral(&data);
        let entry = CatalogEntry {
            data,
            implicit: None,
            surface: None,
            pregeodesic: None,
            provenance: String::new(),
            notes: String::new(),
        };
        *out = Box::into_raw(Box::new(MsSurface { entry, psi }));
        Ok(())
    })
}

/// Evaluates the immersion at chart point `(s, t)` into `out[0..3]`.
///
/// # Safety
/// `surface` must come from this library; `out` must be valid for 3 doubles.
#[no_mangle]
pub unsafe extern "C" fn ms_surface_eval(surface: *const MsSurface, s: f64, t: f64, out: *mut f64) -> MsStatus {
    guard(|| {
        non_null(surface, "surface")?;
        non_null(out, "out")?;
        let x = (*surface).psi.eval(s, t)?;
        ptr::copy_nonoverlapping(x.as_ptr(), out, 3);
        Ok(())
    })
}

/// Runs the verification suite. `*pass` receives 1 or 0; the text report is
/// written to `buf` as described in the module docs. The status is `MS_STATUS_OK`
/// whether or not the surface passes.
///
/// # Safety
/// `surface` must come from this library; `pass` writable; `buf`/`needed` as for text output.
#[no_mangle]
pub unsafe extern "C" fn ms_surface_verify(
    surface: *const MsSurface,
    pass: *mut c_int,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> MsStatus {
    guard(|| {
        non_null(surface, "surface")?;
        non_null(pass, "pass")?;
        let report = catalog::verify_entry(&(*surface).entry)?;
        *pass = c_int::from(report.pass());
        write_text(&report.to_text(), buf, len, needed)
    })
}

/// Samples an `nu x nv` grid over the surface's rect as OBJ text.
///
/// # Safety
/// `surface` must come from this library; `buf`/`needed` as for text output.
#[no_mangle]
pub unsafe extern "C" fn ms_surface_sample_obj(
    surface: *const MsSurface,
    nu: usize,
    nv: usize,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> MsStatus {
    guard(|| {
        non_null(surface, "surface")?;
        if nu < 2 || nv < 2 {
            return Err(Failure(MsStatus::InvalidArgument, "grid must be at least 2x2".into()));
        }
        let psi = &(*surface).psi;
        let mesh = mesh::sample(psi, psi.domain.rect, Grid { nu, nv })?;
        write_text(&mesh.to_obj(), buf, len, needed)
    })
}

/// Releases a surface. Null is ignored.
///
/// # Safety
/// `surface` must be null or come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ms_surface_free(surface: *mut MsSurface) {
    if !surface.is_null() {
        drop(Box::from_raw(surface));
    }
}

/// Parses an expression in `z` over `MS_ALGEBRA_COMPLEX` or `MS_ALGEBRA_LORENTZ`.
///
/// # Safety
/// `src` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ms_expr_parse(src: *const c_char, algebra: u32, out: *mut *mut MsExpr) -> MsStatus {
    guard(|| {
        non_null(out, "out")?;
        *out = ptr::null_mut();
        let algebra = match algebra {
            MS_ALGEBRA_COMPLEX => Algebra::Complex,
            MS_ALGEBRA_LORENTZ => Algebra::Lorentz,
            other => return Err(Failure(MsStatus::InvalidArgument, format!("unknown algebra {other}"))),
        };
        let expr =
            expr::parse(str_arg(src, "src")?, algebra).map_err(|e| Failure(MsStatus::ParseError, e.to_string()))?;
        *out = Box::into_raw(Box::new(MsExpr { expr, algebra }));
        Ok(())
    })
}

/// Evaluates at `z = re + e*im`; `value` and, when not null, `deriv` receive
/// `(re, im)` pairs of the value and of `d/dz`.
///
/// # Safety
/// `expr` must come from this library; `value` valid for 2 doubles; `deriv` null or valid for 2.
#[no_mangle]
pub unsafe extern "C" fn ms_expr_eval(
    expr: *const MsExpr,
    re: f64,
    im: f64,
    value: *mut f64,
    deriv: *mut f64,
) -> MsStatus {
    guard(|| {
        non_null(expr, "expr")?;
        non_null(value, "value")?;
        let e = &*expr;
        let z = KScalar::new(e.algebra, re, im);
        let (v, d) = expr::eval_with_deriv(&e.expr, z).map_err(|err| Failure(MsStatus::EvalError, err.to_string()))?;
        *value = v.re;
        *value.add(1) = v.im;
        if !deriv.is_null() {
            *deriv = d.re;
            *deriv.add(1) = d.im;
        }
        Ok(())
    })
}

/// Releases an expression. Null is ignored.
///
/// # Safety
/// `expr` must be null or come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ms_expr_free(expr: *mut MsExpr) {
    if !expr.is_null() {
        drop(Box::from_raw(expr));
    }
}
