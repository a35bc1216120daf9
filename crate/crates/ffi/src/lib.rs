//! C interface to `amenity`.
//!
//! Presentations live behind an opaque [`AmenityAlgebra`] handle. Every
//! computation returns an [`AmenityStatus`] and writes its result through an
//! out-pointer as a JSON string owned by the library; release those with
//! [`amenity_string_free`]. On failure, [`amenity_last_error`] describes what
//! went wrong on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use amenity::algebra::{enumerate_basis, AlgebraPresentation, CoordinateWindow, Element};
use amenity::exhaustion::ExhaustionSpec;
use amenity::modrank::ModulePresentation;
use amenity::rational::parse_ratio;
use amenity::{folner, growth, modrank, paradox, Error};
use serde::Serialize;

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AmenityStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    InvalidInput = 3,
    TruncationOverflow = 4,
    Internal = 5,
}

/// Opaque handle to a parsed, confluent presentation.
pub struct AmenityAlgebra {
    pres: AlgebraPresentation,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes were replaced");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Fail(AmenityStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = if e.is_truncation() {
            AmenityStatus::TruncationOverflow
        } else {
            AmenityStatus::InvalidInput
        };
        Fail(status, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> AmenityStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => AmenityStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal error".into());
            AmenityStatus::Internal
        }
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(AmenityStatus::NullArgument, "null string argument".into()));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(AmenityStatus::InvalidUtf8, "argument is not valid UTF-8".into()))
}

unsafe fn optional_text<'a>(p: *const c_char) -> Result<Option<&'a str>, Fail> {
    if p.is_null() {
        Ok(None)
    } else {
        text(p).map(Some)
    }
}

unsafe fn algebra<'a>(p: *const AmenityAlgebra) -> Result<&'a AlgebraPresentation, Fail> {
    p.as_ref()
        .map(|a| &a.pres)
        .ok_or_else(|| Fail(AmenityStatus::NullArgument, "null algebra handle".into()))
}

unsafe fn emit(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(AmenityStatus::NullArgument, "null output pointer".into()));
    }
    let c = CString::new(s).map_err(|_| Fail(AmenityStatus::Internal, "result contains a nul byte".into()))?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn emit_json<T: Serialize>(out: *mut *mut c_char, value: &T) -> Result<(), Fail> {
    let s = serde_json::to_string(value).map_err(|e| Fail(AmenityStatus::Internal, e.to_string()))?;
    emit(out, s)
}

fn elements(pres: &AlgebraPresentation, list: Option<&str>) -> Result<Vec<Element>, Fail> {
    Ok(match list {
        Some(s) => pres.parse_list(s)?,
        None => pres.generator_elements(),
    })
}

fn max_degree(es: &[Element]) -> usize {
    es.iter().map(Element::degree).max().unwrap_or(0)
}

fn window(pres: &AlgebraPresentation, requested: usize, derived: usize) -> Result<CoordinateWindow, Fail> {
    let d = if requested == 0 { derived.max(1) } else { requested };
    Ok(enumerate_basis(pres, d)?)
}

/// Parses a presentation from JSON and checks it for confluence.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer. The
/// handle written to `out` must be released with [`amenity_algebra_free`].
#[no_mangle]
pub unsafe extern "C" fn amenity_algebra_from_json(json: *const c_char, out: *mut *mut AmenityAlgebra) -> AmenityStatus {
    guard(|| {
        if out.is_null() {
            return Err(Fail(AmenityStatus::NullArgument, "null output pointer".into()));
        }
        let pres = AlgebraPresentation::from_json(text(json)?)?;
        *out = Box::into_raw(Box::new(AmenityAlgebra { pres }));
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `algebra` must come from [`amenity_algebra_from_json`] and not be used again.
#[no_mangle]
pub unsafe extern "C" fn amenity_algebra_free(algebra: *mut AmenityAlgebra) {
    if !algebra.is_null() {
        drop(Box::from_raw(algebra));
    }
}

/// Content hash of the presentation as a hex string.
///
/// # Safety
/// `algebra` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn amenity_algebra_hash(algebra: *const AmenityAlgebra, out: *mut *mut c_char) -> AmenityStatus {
    guard(|| emit(out, self::algebra(algebra)?.content_hash()))
}

/// Normal form of `element`, written as a plain string.
///
/// # Safety
/// Pointers must be valid; `element` must be nul-terminated.
#[no_mangle]
pub unsafe extern "C" fn amenity_normal_form(
    algebra: *const AmenityAlgebra,
    element: *const c_char,
    out: *mut *mut c_char,
) -> AmenityStatus {
    guard(|| {
        let pres = self::algebra(algebra)?;
        let e = pres.parse_element(text(element)?)?;
        emit(out, pres.format_element(&e))
    })
}

/// Ball dimensions `d_0..=d_m_max` as JSON. `generators` may be null for the
/// generators of the presentation; `degree_bound` 0 derives the window.
///
/// # Safety
/// Pointers must be valid; strings must be nul-terminated.
#[no_mangle]
pub unsafe extern "C" fn amenity_growth(
    algebra: *const AmenityAlgebra,
    generators: *const c_char,
    m_max: usize,
    degree_bound: usize,
    out: *mut *mut c_char,
) -> AmenityStatus {
    guard(|| {
        let pres = self::algebra(algebra)?;
        let s = elements(pres, optional_text(generators)?)?;
        let win = window(pres, degree_bound, m_max * max_degree(&s))?;
        emit_json(out, &growth::growth_sequence(pres, &s, m_max, &win)?)
    })
}

/// Følner search over balls of the generators. Writes the search outcome
/// as JSON, with `"status"` either `"found"` or `"inconclusive"`.
///
/// # Safety
/// Pointers must be valid; `test_set` may be null.
#[no_mangle]
pub unsafe extern "C" fn amenity_folner_search(
    algebra: *const AmenityAlgebra,
    test_set: *const c_char,
    epsilon: *const c_char,
    n_max: usize,
    degree_bound: usize,
    out: *mut *mut c_char,
) -> AmenityStatus {
    guard(|| {
        let pres = self::algebra(algebra)?;
        let s = elements(pres, optional_text(test_set)?)?;
        let eps = parse_ratio(text(epsilon)?)?;
        let ex = ExhaustionSpec::generator_balls(pres);
        let win = window(pres, degree_bound, ex.degree_at(n_max) + max_degree(&s))?;
        let outcome = folner::folner_search(pres, &s, eps, &ex, n_max, &win)?;
        if let Some(cert) = outcome.certificate() {
            if !folner::verify_certificate(pres, cert)? {
                return Err(Fail(AmenityStatus::Internal, "certificate failed re-verification".into()));
            }
        }
        emit_json(out, &outcome)
    })
}

/// Truncated paradoxical decomposition at `degree`, or a deficiency witness.
///
/// # Safety
/// Pointers must be valid; strings must be nul-terminated.
#[no_mangle]
pub unsafe extern "C" fn amenity_paradox_find(
    algebra: *const AmenityAlgebra,
    translators: *const c_char,
    degree: usize,
    degree_bound: usize,
    out: *mut *mut c_char,
) -> AmenityStatus {
    guard(|| {
        let pres = self::algebra(algebra)?;
        let s = pres.parse_list(text(translators)?)?;
        let win = window(pres, degree_bound, degree + max_degree(&s))?;
        let outcome = paradox::build_paradox(pres, &s, degree, &win)?;
        if let paradox::ParadoxOutcome::Certificate(c) = &outcome {
            if !paradox::verify_paradox(pres, c)? {
                return Err(Fail(AmenityStatus::Internal, "certificate failed re-verification".into()));
            }
        }
        emit_json(out, &outcome)
    })
}

/// Rank entries `1..=n_max` of a module given as JSON
/// (`{"ambient_rank", "generators", "sub_generators"?}`) over balls of the generators.
///
/// # Safety
/// Pointers must be valid; strings must be nul-terminated.
#[no_mangle]
pub unsafe extern "C" fn amenity_rank(
    algebra: *const AmenityAlgebra,
    module_json: *const c_char,
    n_max: usize,
    degree_bound: usize,
    out: *mut *mut c_char,
) -> AmenityStatus {
    guard(|| {
        let pres = self::algebra(algebra)?;
        let module = ModulePresentation::from_json(pres, text(module_json)?)?;
        let deg = module
            .generators
            .iter()
            .chain(module.sub_generators.iter().flatten())
            .flatten()
            .map(Element::degree)
            .max()
            .unwrap_or(0);
        let ex = ExhaustionSpec::generator_balls(pres);
        let win = window(pres, degree_bound, ex.degree_at(n_max) + deg)?;
        emit_json(out, &modrank::rank(pres, &module, &ex, 1..=n_max, &win)?)
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used again.
#[no_mangle]
pub unsafe extern "C" fn amenity_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the most recent failure on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn amenity_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn amenity_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr().cast()
}
