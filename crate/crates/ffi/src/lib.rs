//! C ABI for `markov-curves`.
//!
//! Every fallible function returns an [`McStatus`] and writes results through
//! out-pointers; on failure the message is available from
//! [`mc_last_error_message`] on the same thread until the next call. Germs are
//! opaque [`McGerm`] handles released with [`mc_germ_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use markov_curves::curve::{
    builtin_germ, chebyshev_interval_points, geodesic_distance, parse_germ, read_germ_file, CurveError, CurveGerm,
    SampleSet,
};
use markov_curves::green::{green_interval, green_segment, SiciakProblem};
use markov_curves::markov::{markov_factor, scaling_study, MarkovProblem};
use num_complex::Complex64;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum McStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    UnknownGerm = 3,
    Io = 4,
    Parse = 5,
    Numeric = 6,
    BufferTooSmall = 7,
    Panic = 8,
}

/// Opaque curve germ.
pub struct McGerm {
    germ: CurveGerm,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).expect("interior nul removed"));
}

struct Failure(McStatus, String);

impl From<CurveError> for Failure {
    fn from(e: CurveError) -> Self {
        let status = match &e {
            CurveError::UnknownGerm { .. } => McStatus::UnknownGerm,
            CurveError::Io(_) => McStatus::Io,
            CurveError::Parse(_) => McStatus::Parse,
            CurveError::InvalidParameter(_) | CurveError::OutsideDisk(_) => McStatus::InvalidArgument,
            _ => McStatus::Numeric,
        };
        Failure(status, e.to_string())
    }
}

fn numeric(e: impl std::fmt::Display) -> Failure {
    Failure(McStatus::Numeric, e.to_string())
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure(McStatus::InvalidArgument, message.into())
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> McStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => McStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            McStatus::Panic
        }
    }
}

fn non_null<T>(ptr: *const T, what: &str) -> Result<(), Failure> {
    if ptr.is_null() {
        Err(Failure(McStatus::NullPointer, format!("{what} is null")))
    } else {
        Ok(())
    }
}

unsafe fn str_arg<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, Failure> {
    non_null(ptr, what)?;
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| invalid(format!("{what} is not UTF-8")))
}

unsafe fn germ_ref<'a>(germ: *const McGerm) -> Result<&'a CurveGerm, Failure> {
    non_null(germ, "germ")?;
    Ok(&(*germ).germ)
}

unsafe fn slice_arg<'a, T>(ptr: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    non_null(ptr, what)?;
    Ok(std::slice::from_raw_parts(ptr, len))
}

unsafe fn store_germ(germ: CurveGerm, out: *mut *mut McGerm) {
    *out = Box::into_raw(Box::new(McGerm { germ }));
}

/// Library version, a static nul-terminated string.
#[no_mangle]
pub extern "C" fn mc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failure on this thread, empty after a success. Valid
/// until the next call into the library from this thread.
#[no_mangle]
pub extern "C" fn mc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `id` must be a nul-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn mc_germ_builtin(id: *const c_char, out: *mut *mut McGerm) -> McStatus {
    guard(|| {
        non_null(out, "out")?;
        let germ = builtin_germ(str_arg(id, "id")?)?;
        store_germ(germ, out);
        Ok(())
    })
}

/// # Safety
/// `path` must be a nul-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn mc_germ_from_file(path: *const c_char, out: *mut *mut McGerm) -> McStatus {
    guard(|| {
        non_null(out, "out")?;
        let germ = read_germ_file(Path::new(str_arg(path, "path")?))?;
        store_germ(germ, out);
        Ok(())
    })
}

/// Parses germ file text; `name` may be null.
///
/// # Safety
/// `text` and a non-null `name` must be nul-terminated strings; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mc_germ_from_text(
    text: *const c_char,
    name: *const c_char,
    out: *mut *mut McGerm,
) -> McStatus {
    guard(|| {
        non_null(out, "out")?;
        let name = if name.is_null() { "germ" } else { str_arg(name, "name")? };
        let germ = parse_germ(str_arg(text, "text")?, name)?;
        store_germ(germ, out);
        Ok(())
    })
}

/// Releases a germ; null is ignored.
///
/// # Safety
/// `germ` must come from a constructor of this library and not be used again.
#[no_mangle]
pub unsafe extern "C" fn mc_germ_free(germ: *mut McGerm) {
    if !germ.is_null() {
        drop(Box::from_raw(germ));
    }
}

/// # Safety
/// `germ` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mc_germ_multiplicity(germ: *const McGerm, out: *mut u32) -> McStatus {
    guard(|| {
        non_null(out, "out")?;
        *out = germ_ref(germ)?.branch().multiplicity()?;
        Ok(())
    })
}

/// # Safety
/// `germ` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mc_germ_ambient_dim(germ: *const McGerm, out: *mut usize) -> McStatus {
    guard(|| {
        non_null(out, "out")?;
        *out = germ_ref(germ)?.ambient_dim();
        Ok(())
    })
}

/// Writes `x₀ + φ(z)` as `dim` real and `dim` imaginary parts; `len` is the
/// capacity of each buffer.
///
/// # Safety
/// `germ` must be a live handle; `out_re` and `out_im` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn mc_germ_eval(
    germ: *const McGerm,
    z_re: f64,
    z_im: f64,
    out_re: *mut f64,
    out_im: *mut f64,
    len: usize,
) -> McStatus {
    guard(|| {
        let germ = germ_ref(germ)?;
        non_null(out_re, "out_re")?;
        non_null(out_im, "out_im")?;
        if len < germ.ambient_dim() {
            return Err(Failure(
                McStatus::BufferTooSmall,
                format!("need {} entries, got {len}", germ.ambient_dim()),
            ));
        }
        let point = germ.point_at(Complex64::new(z_re, z_im))?;
        for (i, x) in point.iter().enumerate() {
            *out_re.add(i) = x.re;
            *out_im.add(i) = x.im;
        }
        Ok(())
    })
}

/// Unit tangent vector at the basepoint.
///
/// # Safety
/// `germ` must be a live handle; `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn mc_germ_tangent(germ: *const McGerm, out: *mut f64, len: usize) -> McStatus {
    guard(|| {
        let germ = germ_ref(germ)?;
        non_null(out, "out")?;
        let v = germ.tangent_vector();
        if len < v.len() {
            return Err(Failure(
                McStatus::BufferTooSmall,
                format!("need {} entries, got {len}", v.len()),
            ));
        }
        std::ptr::copy_nonoverlapping(v.as_ptr(), out, v.len());
        Ok(())
    })
}

/// Straight-path geodesic distance between `φ(z₁)` and `φ(z₂)`.
///
/// # Safety
/// `germ` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mc_geodesic_distance(
    germ: *const McGerm,
    z1_re: f64,
    z1_im: f64,
    z2_re: f64,
    z2_im: f64,
    out: *mut f64,
) -> McStatus {
    guard(|| {
        non_null(out, "out")?;
        let branch = germ_ref(germ)?.branch();
        *out = geodesic_distance(branch, Complex64::new(z1_re, z1_im), Complex64::new(z2_re, z2_im))?;
        Ok(())
    })
}

/// Markov factor on the real trace of `germ` at scale `eps`, along its tangent.
///
/// # Safety
/// `germ` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mc_markov_factor_germ(
    germ: *const McGerm,
    eps: f64,
    density: usize,
    degree: u32,
    out: *mut f64,
) -> McStatus {
    guard(|| {
        non_null(out, "out")?;
        let problem = MarkovProblem::for_germ(germ_ref(germ)?, eps, density, degree).map_err(numeric)?;
        *out = markov_factor(&problem).map_err(numeric)?.factor;
        Ok(())
    })
}

/// Markov factor at `x0` of the one-dimensional sample set `samples`.
///
/// # Safety
/// `samples` must hold `count` doubles and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn mc_markov_factor_samples(
    samples: *const f64,
    count: usize,
    x0: f64,
    degree: u32,
    out: *mut f64,
) -> McStatus {
    guard(|| {
        non_null(out, "out")?;
        let points: Vec<Vec<Complex64>> = slice_arg(samples, count, "samples")?
            .iter()
            .map(|&x| vec![Complex64::new(x, 0.0)])
            .collect();
        if points.iter().any(|p| !p[0].re.is_finite()) {
            return Err(invalid("samples must be finite"));
        }
        let set = SampleSet::from_points(points, "samples");
        let problem = MarkovProblem::new(set, vec![x0], vec![1.0], degree, 1.0).map_err(numeric)?;
        *out = markov_factor(&problem).map_err(numeric)?.factor;
        Ok(())
    })
}

/// Fitted degree and radius exponents of a scaling study.
///
/// # Safety
/// `germ` must be a live handle; `degrees` and `epsilons` must hold the given
/// counts; the outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn mc_scaling_fit(
    germ: *const McGerm,
    degrees: *const u32,
    degree_count: usize,
    epsilons: *const f64,
    epsilon_count: usize,
    density: usize,
    alpha_deg: *mut f64,
    alpha_eps: *mut f64,
) -> McStatus {
    guard(|| {
        non_null(alpha_deg, "alpha_deg")?;
        non_null(alpha_eps, "alpha_eps")?;
        let study = scaling_study(
            germ_ref(germ)?,
            slice_arg(degrees, degree_count, "degrees")?,
            slice_arg(epsilons, epsilon_count, "epsilons")?,
            density,
        )
        .map_err(numeric)?;
        *alpha_deg = study.fit.alpha_deg;
        *alpha_eps = study.fit.alpha_eps;
        Ok(())
    })
}

/// Green function of `[−1, 1]` with pole at infinity; NaN for non-finite input.
#[no_mangle]
pub extern "C" fn mc_green_interval(z_re: f64, z_im: f64) -> f64 {
    if !(z_re.is_finite() && z_im.is_finite()) {
        return f64::NAN;
    }
    green_interval(Complex64::new(z_re, z_im))
}

/// Green function of the real segment `[a, b]`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mc_green_segment(z_re: f64, z_im: f64, a: f64, b: f64, out: *mut f64) -> McStatus {
    guard(|| {
        non_null(out, "out")?;
        let value = green_segment(
            Complex64::new(z_re, z_im),
            Complex64::new(a, 0.0),
            Complex64::new(b, 0.0),
        )
        .map_err(|e| invalid(e.to_string()))?;
        *out = value;
        Ok(())
    })
}

/// Siciak LP value at `z` for `count` Chebyshev samples of `[a, b]`, with
/// the relaxation slack bounding its error from the polygon relaxation.
///
/// # Safety
/// `value` and `slack` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mc_siciak_interval(
    a: f64,
    b: f64,
    count: usize,
    degree: u32,
    facets: usize,
    z_re: f64,
    z_im: f64,
    value: *mut f64,
    slack: *mut f64,
) -> McStatus {
    guard(|| {
        non_null(value, "value")?;
        non_null(slack, "slack")?;
        if !(a.is_finite() && b.is_finite() && a < b) || count < 2 {
            return Err(invalid("need finite a < b and at least 2 samples"));
        }
        let problem = SiciakProblem::new(chebyshev_interval_points(a, b, count), degree, facets).map_err(numeric)?;
        let evaluation = problem.evaluate(&[Complex64::new(z_re, z_im)]).map_err(numeric)?;
        *value = evaluation.value;
        *slack = evaluation.relaxation_slack;
        Ok(())
    })
}
