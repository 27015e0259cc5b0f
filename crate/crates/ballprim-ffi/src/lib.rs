//! C ABI for the ballprim certification library.
//!
//! Every object crosses the boundary as an opaque handle created and
//! destroyed by `bp_*` functions, every fallible call returns a
//! [`BpStatus`], and the most recent error message is retrievable per
//! thread via [`bp_last_error`]. Panics never unwind across the boundary;
//! they are caught and reported as [`BpStatus::Panic`].
//!
//! The matching C header is generated into `include/ballprim.h` at build
//! time.

use ballprim::certify::{primitivity_index, PrimitivityCertificate, Verdict};
use ballprim::cone::{AffineBallMap, Tolerances};
use ballprim::error::Error;
use ballprim::jsonio;
use ballprim::qubit::{
    bloch_to_qubit_map, channel_index, channel_to_bloch, choi_cp_check, wielandt_channel,
    KrausChannel,
};
use ballprim::synthesis::{synthesize, ExtremalWitness};
use libc::{c_char, c_double, c_int};
use nalgebra::{DMatrix, DVector};
use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Status code returned by every fallible `bp_*` function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BpStatus {
    /// Success.
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    Utf8 = 2,
    /// Malformed input (dimensions, JSON shape, parameter ranges).
    InvalidInput = 3,
    /// The map does not send the ball into itself.
    NotPositive = 4,
    /// The map is positive but not primitive.
    NotPrimitive = 5,
    /// A sphere maximum sits too close to 1 to classify.
    AmbiguousMargin = 6,
    /// An internal numeric procedure failed to converge or validate.
    NumericFailure = 7,
    /// A constructive routine could not produce its object.
    ConstructionFailure = 8,
    /// An I/O error.
    Io = 9,
    /// A panic was caught at the boundary.
    Panic = 10,
}

/// Opaque affine self-map of the unit ball.
pub struct BpMap(AffineBallMap);
/// Opaque primitivity certificate (index, verdict and contact chain).
pub struct BpCertificate(PrimitivityCertificate);
/// Opaque extremal witness (map, orbit and parameters).
pub struct BpWitness(ExtremalWitness);
/// Opaque qubit channel in Kraus form.
pub struct BpChannel(KrausChannel);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(msg: &str) {
    let sanitized = msg.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn status_for(e: &Error) -> BpStatus {
    match e {
        Error::InvalidInput(_) | Error::Json(_) => BpStatus::InvalidInput,
        Error::NotPositive { .. } => BpStatus::NotPositive,
        Error::NotPrimitive => BpStatus::NotPrimitive,
        Error::AmbiguousMargin { .. } => BpStatus::AmbiguousMargin,
        Error::WitnessViolation(_)
        | Error::SearchExhausted { .. }
        | Error::EqualAngles
        | Error::DegenerateOverlap { .. }
        | Error::BadAngles { .. } => BpStatus::ConstructionFailure,
        Error::Io(_) => BpStatus::Io,
        _ => BpStatus::NumericFailure,
    }
}

fn report(e: &Error) -> BpStatus {
    set_error(&e.to_string());
    status_for(e)
}

fn guard<F: FnOnce() -> BpStatus>(f: F) -> BpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic caught at the FFI boundary");
            BpStatus::Panic
        }
    }
}

unsafe fn parse_utf8<'a>(ptr: *const c_char) -> Result<&'a str, BpStatus> {
    if ptr.is_null() {
        set_error("null string pointer");
        return Err(BpStatus::NullPointer);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("string is not valid UTF-8");
        BpStatus::Utf8
    })
}

fn emit_string(s: String, out: *mut *mut c_char) -> BpStatus {
    if out.is_null() {
        set_error("null output pointer");
        return BpStatus::NullPointer;
    }
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            BpStatus::Ok
        }
        Err(_) => {
            set_error("output contained an interior NUL byte");
            BpStatus::NumericFailure
        }
    }
}

/// Most recent error message on this thread; owned by the library and
/// valid until the next failing call on the same thread. Never null.
///
/// # Safety
/// The returned pointer must not be freed or retained across calls.
#[no_mangle]
pub unsafe extern "C" fn bp_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Frees a string returned by a `bp_*_to_json` function. Null is a no-op.
///
/// # Safety
/// `s` must have been returned by this library and not freed before.
#[no_mangle]
pub unsafe extern "C" fn bp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds an affine ball map from a row-major `n x n` matrix and a length
/// `n` translation.
///
/// # Safety
/// `a` must point to `n * n` doubles, `b` to `n` doubles, and `out` must
/// be a valid pointer; the handle must be released with `bp_map_free`.
#[no_mangle]
pub unsafe extern "C" fn bp_map_new(
    n: usize,
    a: *const c_double,
    b: *const c_double,
    out: *mut *mut BpMap,
) -> BpStatus {
    guard(|| {
        if a.is_null() || b.is_null() || out.is_null() {
            set_error("null pointer argument");
            return BpStatus::NullPointer;
        }
        if n == 0 || n > 1_000_000 {
            set_error("dimension must be between 1 and 1000000");
            return BpStatus::InvalidInput;
        }
        let a_slice = std::slice::from_raw_parts(a, n * n);
        let b_slice = std::slice::from_raw_parts(b, n);
        let mat = DMatrix::from_row_slice(n, n, a_slice);
        let vec = DVector::from_column_slice(b_slice);
        match AffineBallMap::new(mat, vec) {
            Ok(map) => {
                *out = Box::into_raw(Box::new(BpMap(map)));
                BpStatus::Ok
            }
            Err(e) => report(&e),
        }
    })
}

/// Parses a map from its JSON form `{"n":..,"A":[[..]],"b":[..]}` (a full
/// witness JSON is also accepted; its map is extracted).
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bp_map_from_json(
    json: *const c_char,
    out: *mut *mut BpMap,
) -> BpStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer");
            return BpStatus::NullPointer;
        }
        let text = match parse_utf8(json) {
            Ok(t) => t,
            Err(status) => return status,
        };
        match jsonio::map_input_from_json(text) {
            Ok(jsonio::MapInput::Bare(map)) => {
                *out = Box::into_raw(Box::new(BpMap(map)));
                BpStatus::Ok
            }
            Ok(jsonio::MapInput::Witness(w)) => {
                *out = Box::into_raw(Box::new(BpMap(w.map)));
                BpStatus::Ok
            }
            Err(e) => report(&e),
        }
    })
}

/// Serializes a map to JSON; free the string with `bp_string_free`.
///
/// # Safety
/// `map` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bp_map_to_json(
    map: *const BpMap,
    out: *mut *mut c_char,
) -> BpStatus {
    guard(|| {
        let Some(map) = map.as_ref() else {
            set_error("null map handle");
            return BpStatus::NullPointer;
        };
        emit_string(jsonio::ball_map_to_json(&map.0), out)
    })
}

/// Ball dimension of a map handle; 0 for a null handle.
///
/// # Safety
/// `map` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bp_map_dim(map: *const BpMap) -> usize {
    map.as_ref().map_or(0, |m| m.0.dim())
}

/// Releases a map handle. Null is a no-op.
///
/// # Safety
/// `map` must have come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn bp_map_free(map: *mut BpMap) {
    if !map.is_null() {
        drop(Box::from_raw(map));
    }
}

/// Exact maximum of `||phi(x)||` over the unit sphere.
///
/// # Safety
/// `map` must be a live handle and `value` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bp_sphere_max(map: *const BpMap, value: *mut c_double) -> BpStatus {
    guard(|| {
        let Some(map) = map.as_ref() else {
            set_error("null map handle");
            return BpStatus::NullPointer;
        };
        if value.is_null() {
            set_error("null output pointer");
            return BpStatus::NullPointer;
        }
        *value = ballprim::certify::sphere_max(&map.0, &Tolerances::default()).value;
        BpStatus::Ok
    })
}

/// Certifies the primitivity index of a map, producing a certificate
/// handle even for non-primitive verdicts (inspect with the accessors).
///
/// # Safety
/// `map` must be a live handle and `out` a valid pointer; release the
/// certificate with `bp_certificate_free`.
#[no_mangle]
pub unsafe extern "C" fn bp_primitivity_index(
    map: *const BpMap,
    out: *mut *mut BpCertificate,
) -> BpStatus {
    guard(|| {
        let Some(map) = map.as_ref() else {
            set_error("null map handle");
            return BpStatus::NullPointer;
        };
        if out.is_null() {
            set_error("null output pointer");
            return BpStatus::NullPointer;
        }
        match primitivity_index(&map.0, &Tolerances::default()) {
            Ok(cert) => {
                *out = Box::into_raw(Box::new(BpCertificate(cert)));
                BpStatus::Ok
            }
            Err(e) => report(&e),
        }
    })
}

/// Certified index, or -1 when the verdict carries none (or the handle is
/// null).
///
/// # Safety
/// `cert` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bp_certificate_index(cert: *const BpCertificate) -> i64 {
    cert.as_ref()
        .and_then(|c| c.0.index)
        .map_or(-1, |k| k as i64)
}

/// Verdict code: 0 primitive, 1 not positive, 2 not primitive; -1 for a
/// null handle.
///
/// # Safety
/// `cert` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bp_certificate_verdict(cert: *const BpCertificate) -> c_int {
    match cert.as_ref() {
        None => -1,
        Some(c) => match c.0.verdict {
            Verdict::Primitive => 0,
            Verdict::NotPositive => 1,
            Verdict::NotPrimitive => 2,
        },
    }
}

/// Number of chain steps in the certificate (step 0 is the full sphere).
///
/// # Safety
/// `cert` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bp_certificate_chain_len(cert: *const BpCertificate) -> usize {
    cert.as_ref().map_or(0, |c| c.0.chain.len())
}

/// Affine dimension of the contact set at chain step `i` (-1 for an empty
/// contact, -2 for a null handle or out-of-range index).
///
/// # Safety
/// `cert` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bp_certificate_chain_dim(
    cert: *const BpCertificate,
    i: usize,
) -> i64 {
    cert.as_ref()
        .and_then(|c| c.0.chain.get(i))
        .map_or(-2, |s| s.aff_dim())
}

/// Serializes a certificate to JSON; free with `bp_string_free`.
///
/// # Safety
/// `cert` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bp_certificate_to_json(
    cert: *const BpCertificate,
    out: *mut *mut c_char,
) -> BpStatus {
    guard(|| {
        let Some(cert) = cert.as_ref() else {
            set_error("null certificate handle");
            return BpStatus::NullPointer;
        };
        emit_string(jsonio::certificate_to_json(&cert.0), out)
    })
}

/// Releases a certificate handle. Null is a no-op.
///
/// # Safety
/// `cert` must have come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn bp_certificate_free(cert: *mut BpCertificate) {
    if !cert.is_null() {
        drop(Box::from_raw(cert));
    }
}

/// Synthesizes an extremal witness of index `n + 1` in dimension `n`.
/// Pass a contraction parameter in (0, 1), or any value outside it (for
/// example 0 or NaN) to let the library choose.
///
/// # Safety
/// `out` must be a valid pointer; release with `bp_witness_free`.
#[no_mangle]
pub unsafe extern "C" fn bp_synthesize(
    n: usize,
    c: c_double,
    out: *mut *mut BpWitness,
) -> BpStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer");
            return BpStatus::NullPointer;
        }
        let c = if c.is_finite() && c > 0.0 && c < 1.0 {
            Some(c)
        } else {
            None
        };
        match synthesize(n, c) {
            Ok(w) => {
                *out = Box::into_raw(Box::new(BpWitness(w)));
                BpStatus::Ok
            }
            Err(e) => report(&e),
        }
    })
}

/// Certified index of a witness; -1 for a null handle.
///
/// # Safety
/// `w` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bp_witness_index(w: *const BpWitness) -> i64 {
    w.as_ref().map_or(-1, |w| w.0.index as i64)
}

/// Clones the witness's map into a fresh map handle.
///
/// # Safety
/// `w` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bp_witness_map(
    w: *const BpWitness,
    out: *mut *mut BpMap,
) -> BpStatus {
    guard(|| {
        let Some(w) = w.as_ref() else {
            set_error("null witness handle");
            return BpStatus::NullPointer;
        };
        if out.is_null() {
            set_error("null output pointer");
            return BpStatus::NullPointer;
        }
        *out = Box::into_raw(Box::new(BpMap(w.0.map.clone())));
        BpStatus::Ok
    })
}

/// Serializes a witness to JSON; free with `bp_string_free`.
///
/// # Safety
/// `w` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bp_witness_to_json(
    w: *const BpWitness,
    out: *mut *mut c_char,
) -> BpStatus {
    guard(|| {
        let Some(w) = w.as_ref() else {
            set_error("null witness handle");
            return BpStatus::NullPointer;
        };
        emit_string(jsonio::witness_to_json(&w.0), out)
    })
}

/// Releases a witness handle. Null is a no-op.
///
/// # Safety
/// `w` must have come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn bp_witness_free(w: *mut BpWitness) {
    if !w.is_null() {
        drop(Box::from_raw(w));
    }
}

/// Builds the two-Kraus qubit channel of primitivity index 3 for angles
/// `0 < alpha, beta < pi/2`, `alpha != beta`.
///
/// # Safety
/// `out` must be a valid pointer; release with `bp_channel_free`.
#[no_mangle]
pub unsafe extern "C" fn bp_wielandt_channel(
    alpha: c_double,
    beta: c_double,
    out: *mut *mut BpChannel,
) -> BpStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer");
            return BpStatus::NullPointer;
        }
        match wielandt_channel(alpha, beta) {
            Ok(ch) => {
                *out = Box::into_raw(Box::new(BpChannel(ch)));
                BpStatus::Ok
            }
            Err(e) => report(&e),
        }
    })
}

/// Parses a channel from its JSON form `{"kraus":[...]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bp_channel_from_json(
    json: *const c_char,
    out: *mut *mut BpChannel,
) -> BpStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer");
            return BpStatus::NullPointer;
        }
        let text = match parse_utf8(json) {
            Ok(t) => t,
            Err(status) => return status,
        };
        match jsonio::channel_from_json(text) {
            Ok(ch) => {
                *out = Box::into_raw(Box::new(BpChannel(ch)));
                BpStatus::Ok
            }
            Err(e) => report(&e),
        }
    })
}

/// Serializes a channel to JSON; free with `bp_string_free`.
///
/// # Safety
/// `ch` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bp_channel_to_json(
    ch: *const BpChannel,
    out: *mut *mut c_char,
) -> BpStatus {
    guard(|| {
        let Some(ch) = ch.as_ref() else {
            set_error("null channel handle");
            return BpStatus::NullPointer;
        };
        emit_string(jsonio::channel_to_json(&ch.0), out)
    })
}

/// Certifies a channel's primitivity index through its Bloch-ball action.
///
/// # Safety
/// `ch` must be a live handle and `out` a valid pointer; release the
/// certificate with `bp_certificate_free`.
#[no_mangle]
pub unsafe extern "C" fn bp_channel_index(
    ch: *const BpChannel,
    out: *mut *mut BpCertificate,
) -> BpStatus {
    guard(|| {
        let Some(ch) = ch.as_ref() else {
            set_error("null channel handle");
            return BpStatus::NullPointer;
        };
        if out.is_null() {
            set_error("null output pointer");
            return BpStatus::NullPointer;
        }
        match channel_index(&ch.0) {
            Ok(cert) => {
                *out = Box::into_raw(Box::new(BpCertificate(cert)));
                BpStatus::Ok
            }
            Err(e) => report(&e),
        }
    })
}

/// Complete positivity via the minimal Choi eigenvalue: `*is_cp` is 1 when
/// the eigenvalue clears -1e-9, else 0.
///
/// # Safety
/// `ch` must be a live handle; `is_cp` and `min_eig` must be valid
/// pointers.
#[no_mangle]
pub unsafe extern "C" fn bp_channel_choi(
    ch: *const BpChannel,
    is_cp: *mut c_int,
    min_eig: *mut c_double,
) -> BpStatus {
    guard(|| {
        let Some(ch) = ch.as_ref() else {
            set_error("null channel handle");
            return BpStatus::NullPointer;
        };
        if is_cp.is_null() || min_eig.is_null() {
            set_error("null output pointer");
            return BpStatus::NullPointer;
        }
        let qmap = match channel_to_bloch(&ch.0).and_then(|b| bloch_to_qubit_map(&b)) {
            Ok(q) => q,
            Err(e) => return report(&e),
        };
        let (cp, eig) = choi_cp_check(&qmap);
        *is_cp = cp as c_int;
        *min_eig = eig;
        BpStatus::Ok
    })
}

/// Releases a channel handle. Null is a no-op.
///
/// # Safety
/// `ch` must have come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn bp_channel_free(ch: *mut BpChannel) {
    if !ch.is_null() {
        drop(Box::from_raw(ch));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    #[test]
    fn map_lifecycle_and_certification() {
        unsafe {
            let a = [0.5, 0.0, 0.0, 0.5];
            let b = [0.0, 0.0];
            let mut map: *mut BpMap = ptr::null_mut();
            assert_eq!(bp_map_new(2, a.as_ptr(), b.as_ptr(), &mut map), BpStatus::Ok);
            assert_eq!(bp_map_dim(map), 2);

            let mut value = 0.0;
            assert_eq!(bp_sphere_max(map, &mut value), BpStatus::Ok);
            assert!((value - 0.5).abs() < 1e-12);

            let mut cert: *mut BpCertificate = ptr::null_mut();
            assert_eq!(bp_primitivity_index(map, &mut cert), BpStatus::Ok);
            assert_eq!(bp_certificate_index(cert), 1);
            assert_eq!(bp_certificate_verdict(cert), 0);
            assert_eq!(bp_certificate_chain_len(cert), 2);
            assert_eq!(bp_certificate_chain_dim(cert, 0), 2);
            assert_eq!(bp_certificate_chain_dim(cert, 1), -1);
            assert_eq!(bp_certificate_chain_dim(cert, 9), -2);

            let mut json: *mut c_char = ptr::null_mut();
            assert_eq!(bp_certificate_to_json(cert, &mut json), BpStatus::Ok);
            let text = CStr::from_ptr(json).to_str().unwrap();
            assert!(text.contains("\"index\":1"));
            bp_string_free(json);

            bp_certificate_free(cert);
            bp_map_free(map);
        }
    }

    #[test]
    fn rotation_is_not_primitive() {
        unsafe {
            let a = [0.0, -1.0, 1.0, 0.0];
            let b = [0.0, 0.0];
            let mut map: *mut BpMap = ptr::null_mut();
            assert_eq!(bp_map_new(2, a.as_ptr(), b.as_ptr(), &mut map), BpStatus::Ok);
            let mut cert: *mut BpCertificate = ptr::null_mut();
            assert_eq!(bp_primitivity_index(map, &mut cert), BpStatus::Ok);
            assert_eq!(bp_certificate_verdict(cert), 2);
            assert_eq!(bp_certificate_index(cert), -1);
            bp_certificate_free(cert);
            bp_map_free(map);
        }
    }

    #[test]
    fn witness_roundtrip_through_json() {
        unsafe {
            let mut w: *mut BpWitness = ptr::null_mut();
            assert_eq!(bp_synthesize(3, f64::NAN, &mut w), BpStatus::Ok);
            assert_eq!(bp_witness_index(w), 4);

            let mut json: *mut c_char = ptr::null_mut();
            assert_eq!(bp_witness_to_json(w, &mut json), BpStatus::Ok);

            // The witness JSON is accepted by the map parser.
            let mut map: *mut BpMap = ptr::null_mut();
            assert_eq!(bp_map_from_json(json, &mut map), BpStatus::Ok);
            assert_eq!(bp_map_dim(map), 3);
            bp_string_free(json);

            let mut cert: *mut BpCertificate = ptr::null_mut();
            assert_eq!(bp_primitivity_index(map, &mut cert), BpStatus::Ok);
            assert_eq!(bp_certificate_index(cert), 4);
            let len = bp_certificate_chain_len(cert);
            assert_eq!(len, 5);
            let dims: Vec<i64> = (0..len).map(|i| bp_certificate_chain_dim(cert, i)).collect();
            assert_eq!(dims, vec![3, 2, 1, 0, -1]);

            bp_certificate_free(cert);
            bp_map_free(map);
            bp_witness_free(w);
        }
    }

    #[test]
    fn wielandt_channel_has_index_three_and_is_cp() {
        unsafe {
            let mut ch: *mut BpChannel = ptr::null_mut();
            let status = bp_wielandt_channel(
                std::f64::consts::FRAC_PI_6,
                std::f64::consts::FRAC_PI_3,
                &mut ch,
            );
            assert_eq!(status, BpStatus::Ok);

            let mut cert: *mut BpCertificate = ptr::null_mut();
            assert_eq!(bp_channel_index(ch, &mut cert), BpStatus::Ok);
            assert_eq!(bp_certificate_index(cert), 3);
            bp_certificate_free(cert);

            let (mut cp, mut eig) = (0, 0.0);
            assert_eq!(bp_channel_choi(ch, &mut cp, &mut eig), BpStatus::Ok);
            assert_eq!(cp, 1);
            assert!(eig >= -1e-9);

            let mut json: *mut c_char = ptr::null_mut();
            assert_eq!(bp_channel_to_json(ch, &mut json), BpStatus::Ok);
            let mut back: *mut BpChannel = ptr::null_mut();
            assert_eq!(bp_channel_from_json(json, &mut back), BpStatus::Ok);
            bp_string_free(json);
            bp_channel_free(back);
            bp_channel_free(ch);
        }
    }

    #[test]
    fn equal_angles_is_a_construction_failure() {
        unsafe {
            let mut ch: *mut BpChannel = ptr::null_mut();
            let status = bp_wielandt_channel(0.7, 0.7, &mut ch);
            assert_eq!(status, BpStatus::ConstructionFailure);
            assert!(ch.is_null());
            let msg = CStr::from_ptr(bp_last_error()).to_str().unwrap();
            assert!(!msg.is_empty());
        }
    }

    #[test]
    fn null_and_malformed_inputs_are_reported() {
        unsafe {
            let mut map: *mut BpMap = ptr::null_mut();
            assert_eq!(
                bp_map_new(2, ptr::null(), ptr::null(), &mut map),
                BpStatus::NullPointer
            );
            let bad = CString::new("not json").unwrap();
            assert_eq!(
                bp_map_from_json(bad.as_ptr(), &mut map),
                BpStatus::InvalidInput
            );
            assert_eq!(bp_map_dim(ptr::null()), 0);
            assert_eq!(bp_certificate_index(ptr::null()), -1);
            assert_eq!(bp_certificate_verdict(ptr::null()), -1);
            bp_map_free(ptr::null_mut());
            bp_string_free(ptr::null_mut());
        }
    }
}
