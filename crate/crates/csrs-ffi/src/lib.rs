//! C ABI for the csrs toolkit.
//!
//! Conventions:
//! - Handles are opaque pointers created by `*_new`-style constructors and
//!   released with the matching `*_free`. Null handles are rejected.
//! - Functions returning pointers yield null on failure; functions returning
//!   `CsrsStatus` report it directly. `csrs_last_error_message` retrieves a
//!   thread-local description of the most recent failure.
//! - Strings returned by the library are NUL-terminated and must be released
//!   with `csrs_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use csrs::csintegrator::{cs_absolute, orientation_flip, plan_path_candidates, CSValue};
use csrs::numerics::PrecisionPolicy;
use csrs::presentations::{builtin_5_2, parse_presentation, twist_knot, two_bridge_presentation, KnotPresentation};
use csrs::repfinder::{
    builtin_apoly_5_2, casson_count_check, eliminate_apoly, find_representations, CassonVerdict,
    RepPoint, SurgerySpec,
};
use csrs::riley::{
    alexander_specialization, longitude_eigenvalue_poly, riley_polynomial,
    second_derivative_at_one, RileyData,
};
use csrs::rscalc::parse::{load_facts, run_query};
use csrs::rscalc::FactStore;

/// Status codes returned by fallible operations.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum CsrsStatus {
    Ok = 0,
    ComputationError = 1,
    InputError = 2,
    NullPointer = 3,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

/// Most recent error message on this thread. The pointer stays valid until
/// the next failing call on the same thread; do not free it.
#[no_mangle]
pub extern "C" fn csrs_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Opaque precision policy handle.
pub struct CsrsPolicy(PrecisionPolicy);

/// Opaque knot presentation handle.
pub struct CsrsKnot(KnotPresentation);

/// Opaque result of a representation enumeration.
pub struct CsrsReps {
    pres: KnotPresentation,
    rd: RileyData,
    spec: SurgerySpec,
    reps: Vec<RepPoint>,
    casson: CassonVerdict,
}

/// Opaque Chern–Simons spectrum.
pub struct CsrsSpectrum {
    values: Vec<Result<CSValue, String>>,
}

/// Plain-old-data view of one representation class.
#[repr(C)]
pub struct CsrsRepData {
    pub class_id: usize,
    pub t_re: f64,
    pub t_im: f64,
    pub u_re: f64,
    pub u_im: f64,
    pub epsilon: i32,
    pub is_su2: bool,
    pub is_nondegenerate: bool,
    pub residual_phi: f64,
    pub residual_surgery: f64,
}

unsafe fn cstr<'a>(ptr: *const c_char) -> Result<&'a str, CsrsStatus> {
    if ptr.is_null() {
        set_error("null string pointer");
        return Err(CsrsStatus::NullPointer);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("string is not valid UTF-8");
        CsrsStatus::InputError
    })
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).map(CString::into_raw).unwrap_or(std::ptr::null_mut())
}

/// Release a string returned by this library.
///
/// # Safety
/// `ptr` must have been returned by a csrs function and not freed before.
#[no_mangle]
pub unsafe extern "C" fn csrs_string_free(ptr: *mut c_char) {
    if !ptr.is_null() {
        drop(CString::from_raw(ptr));
    }
}

/// Create a precision policy. `target_error` is a decimal string such as
/// "1e-30"; `precision_bits` of 0 lets the library choose from the target.
///
/// # Safety
/// `target_error` must be a valid NUL-terminated string or null.
#[no_mangle]
pub unsafe extern "C" fn csrs_policy_new(
    target_error: *const c_char,
    precision_bits: u32,
) -> *mut CsrsPolicy {
    let target = match cstr(target_error) {
        Ok(s) => s,
        Err(_) => return std::ptr::null_mut(),
    };
    let bits = if precision_bits == 0 { None } else { Some(precision_bits) };
    match PrecisionPolicy::from_target_str(target, bits, 3) {
        Ok(p) => Box::into_raw(Box::new(CsrsPolicy(p))),
        Err(e) => {
            set_error(&e.to_string());
            std::ptr::null_mut()
        }
    }
}

/// # Safety
/// `p` must be a policy handle from `csrs_policy_new` (or null).
#[no_mangle]
pub unsafe extern "C" fn csrs_policy_free(p: *mut CsrsPolicy) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// The built-in 5₂ presentation.
#[no_mangle]
pub extern "C" fn csrs_knot_builtin_5_2() -> *mut CsrsKnot {
    Box::into_raw(Box::new(CsrsKnot(builtin_5_2())))
}

/// The twist knot K_k (K₁ = left trefoil, K₂ = 5₂).
#[no_mangle]
pub extern "C" fn csrs_knot_twist(k: u64) -> *mut CsrsKnot {
    match twist_knot(k) {
        Ok(p) => Box::into_raw(Box::new(CsrsKnot(p))),
        Err(e) => {
            set_error(&e.to_string());
            std::ptr::null_mut()
        }
    }
}

/// The two-bridge presentation of fraction q/p.
#[no_mangle]
pub extern "C" fn csrs_knot_two_bridge(p: u64, q: u64) -> *mut CsrsKnot {
    match two_bridge_presentation(p, q) {
        Ok(pres) => Box::into_raw(Box::new(CsrsKnot(pres))),
        Err(e) => {
            set_error(&e.to_string());
            std::ptr::null_mut()
        }
    }
}

/// Parse a knot presentation from its JSON document.
///
/// # Safety
/// `doc` must be a valid NUL-terminated string or null.
#[no_mangle]
pub unsafe extern "C" fn csrs_knot_from_json(doc: *const c_char) -> *mut CsrsKnot {
    let doc = match cstr(doc) {
        Ok(s) => s,
        Err(_) => return std::ptr::null_mut(),
    };
    match parse_presentation(doc) {
        Ok(p) => Box::into_raw(Box::new(CsrsKnot(p))),
        Err(e) => {
            set_error(&e.to_string());
            std::ptr::null_mut()
        }
    }
}

/// # Safety
/// `k` must be a knot handle (or null).
#[no_mangle]
pub unsafe extern "C" fn csrs_knot_free(k: *mut CsrsKnot) {
    if !k.is_null() {
        drop(Box::from_raw(k));
    }
}

/// Pretty-print the Riley polynomial φ(t,u), the Alexander polynomial, and
/// Δ″(1), as a JSON string. Free with `csrs_string_free`.
///
/// # Safety
/// Handles must be valid; see the module docs.
#[no_mangle]
pub unsafe extern "C" fn csrs_riley_json(
    knot: *const CsrsKnot,
    policy: *const CsrsPolicy,
) -> *mut c_char {
    if knot.is_null() || policy.is_null() {
        set_error("null handle");
        return std::ptr::null_mut();
    }
    let knot = &(*knot).0;
    let policy = &(*policy).0;
    let result = catch_unwind(AssertUnwindSafe(|| -> Result<String, String> {
        let rd = riley_polynomial(knot, policy).map_err(|e| e.to_string())?;
        let alex = alexander_specialization(&rd).map_err(|e| e.to_string())?;
        let dd1 = second_derivative_at_one(&alex);
        Ok(format!(
            "{{\"phi\":\"{}\",\"deg_u\":{},\"alexander\":\"{}\",\"delta2_at_1\":\"{}\"}}",
            rd.phi.display("s", "u"),
            rd.deg_u,
            csrs::riley::display_in_t(&alex),
            dd1
        ))
    }));
    match result {
        Ok(Ok(s)) => to_c_string(s),
        Ok(Err(e)) => {
            set_error(&e);
            std::ptr::null_mut()
        }
        Err(_) => {
            set_error("internal panic");
            std::ptr::null_mut()
        }
    }
}

/// Enumerate the SU(2) representation classes of S³_{1/n}(K).
///
/// # Safety
/// Handles must be valid; see the module docs.
#[no_mangle]
pub unsafe extern "C" fn csrs_find_representations(
    knot: *const CsrsKnot,
    n: i64,
    policy: *const CsrsPolicy,
) -> *mut CsrsReps {
    if knot.is_null() || policy.is_null() {
        set_error("null handle");
        return std::ptr::null_mut();
    }
    let pres = (*knot).0.clone();
    let policy = &(*policy).0;
    let result = catch_unwind(AssertUnwindSafe(|| -> Result<CsrsReps, String> {
        let spec = SurgerySpec::new(n).map_err(|e| e.to_string())?;
        let rd = riley_polynomial(&pres, policy).map_err(|e| e.to_string())?;
        let apoly = if pres.name == "5_2" || pres.name == "K_2" {
            builtin_apoly_5_2()
        } else {
            eliminate_apoly(&rd, &pres).map_err(|e| e.to_string())?
        };
        let reps = find_representations(&pres, &rd, &apoly, spec, policy)
            .map_err(|e| e.to_string())?;
        let alex = alexander_specialization(&rd).map_err(|e| e.to_string())?;
        let dd1 = second_derivative_at_one(&alex);
        let casson = casson_count_check(&dd1, spec, reps.len() as u64);
        Ok(CsrsReps { pres, rd, spec, reps, casson })
    }));
    match result {
        Ok(Ok(r)) => Box::into_raw(Box::new(r)),
        Ok(Err(e)) => {
            set_error(&e);
            std::ptr::null_mut()
        }
        Err(_) => {
            set_error("internal panic");
            std::ptr::null_mut()
        }
    }
}

/// # Safety
/// `r` must be a representation handle (or null).
#[no_mangle]
pub unsafe extern "C" fn csrs_reps_free(r: *mut CsrsReps) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Number of representation classes.
///
/// # Safety
/// `r` must be a valid representation handle.
#[no_mangle]
pub unsafe extern "C" fn csrs_reps_count(r: *const CsrsReps) -> usize {
    if r.is_null() {
        return 0;
    }
    (*r).reps.len()
}

/// Whether the Casson class-count gate passed.
///
/// # Safety
/// `r` must be a valid representation handle.
#[no_mangle]
pub unsafe extern "C" fn csrs_reps_casson_pass(r: *const CsrsReps) -> bool {
    if r.is_null() {
        return false;
    }
    (*r).casson.pass
}

/// Copy class `index` into `out`. Returns `Ok` or an error status.
///
/// # Safety
/// `r` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn csrs_reps_get(
    r: *const CsrsReps,
    index: usize,
    out: *mut CsrsRepData,
) -> CsrsStatus {
    if r.is_null() || out.is_null() {
        set_error("null handle");
        return CsrsStatus::NullPointer;
    }
    let reps = &(*r).reps;
    if index >= reps.len() {
        set_error("index out of range");
        return CsrsStatus::InputError;
    }
    let rep = &reps[index];
    let (t_re, t_im) = rep.t.to_f64s();
    let (u_re, u_im) = rep.u.to_f64s();
    *out = CsrsRepData {
        class_id: rep.class_id,
        t_re,
        t_im,
        u_re,
        u_im,
        epsilon: rep.epsilon,
        is_su2: rep.is_su2,
        is_nondegenerate: rep.is_nondegenerate,
        residual_phi: rep.residual_phi.to_f64(),
        residual_surgery: rep.residual_surgery.to_f64(),
    };
    CsrsStatus::Ok
}

/// Compute the Chern–Simons spectrum for previously enumerated classes.
/// `mirror` true reports the orientation-reversed (−cs) values.
///
/// # Safety
/// Handles must be valid; see the module docs.
#[no_mangle]
pub unsafe extern "C" fn csrs_cs_spectrum(
    r: *const CsrsReps,
    mirror: bool,
    policy: *const CsrsPolicy,
) -> *mut CsrsSpectrum {
    if r.is_null() || policy.is_null() {
        set_error("null handle");
        return std::ptr::null_mut();
    }
    let reps = &*r;
    let policy = &(*policy).0;
    let result = catch_unwind(AssertUnwindSafe(|| -> Result<CsrsSpectrum, String> {
        let lambda11 = longitude_eigenvalue_poly(&reps.pres);
        let candidates = plan_path_candidates(&reps.rd, &reps.reps, &[], policy, 8)
            .map_err(|e| e.to_string())?;
        let mut values = Vec::with_capacity(candidates.len());
        for cands in &candidates {
            let mut outcome: Result<CSValue, String> = Err("no candidate plan".into());
            for plan in cands {
                match cs_absolute(&reps.rd, &lambda11, plan, reps.spec.n, policy) {
                    Ok((v, _)) => {
                        outcome = Ok(if mirror { orientation_flip(&v) } else { v });
                        break;
                    }
                    Err(e) => outcome = Err(e.to_string()),
                }
            }
            values.push(outcome);
        }
        Ok(CsrsSpectrum { values })
    }));
    match result {
        Ok(Ok(s)) => Box::into_raw(Box::new(s)),
        Ok(Err(e)) => {
            set_error(&e);
            std::ptr::null_mut()
        }
        Err(_) => {
            set_error("internal panic");
            std::ptr::null_mut()
        }
    }
}

/// # Safety
/// `s` must be a spectrum handle (or null).
#[no_mangle]
pub unsafe extern "C" fn csrs_spectrum_free(s: *mut CsrsSpectrum) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Number of entries in the spectrum.
///
/// # Safety
/// `s` must be a valid spectrum handle.
#[no_mangle]
pub unsafe extern "C" fn csrs_spectrum_count(s: *const CsrsSpectrum) -> usize {
    if s.is_null() {
        return 0;
    }
    (*s).values.len()
}

/// Value of entry `index` in [0,1) as a decimal string with `digits`
/// significant digits, or null if that class failed (see last error).
/// Free with `csrs_string_free`.
///
/// # Safety
/// `s` must be a valid spectrum handle.
#[no_mangle]
pub unsafe extern "C" fn csrs_spectrum_value(
    s: *const CsrsSpectrum,
    index: usize,
    digits: usize,
) -> *mut c_char {
    if s.is_null() {
        set_error("null handle");
        return std::ptr::null_mut();
    }
    let vals = &(*s).values;
    if index >= vals.len() {
        set_error("index out of range");
        return std::ptr::null_mut();
    }
    match &vals[index] {
        Ok(v) => to_c_string(v.value_mod_1.to_string_radix(10, Some(digits.clamp(6, 60)))),
        Err(e) => {
            set_error(e);
            std::ptr::null_mut()
        }
    }
}

/// Certified absolute error bound of entry `index`, as f64.
///
/// # Safety
/// `s` must be a valid spectrum handle.
#[no_mangle]
pub unsafe extern "C" fn csrs_spectrum_error_bound(s: *const CsrsSpectrum, index: usize) -> f64 {
    if s.is_null() {
        return f64::NAN;
    }
    let values = &(*s).values;
    match values.get(index) {
        Some(Ok(v)) => v.error_bound.to_f64(),
        _ => f64::NAN,
    }
}

/// Evaluate a ledger query (optionally with a facts JSON document) and
/// return the JSON outcome. Free with `csrs_string_free`.
///
/// # Safety
/// `facts_json` may be null; `query` must be a valid NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn csrs_ledger_eval(
    facts_json: *const c_char,
    query: *const c_char,
) -> *mut c_char {
    let query = match cstr(query) {
        Ok(s) => s,
        Err(_) => return std::ptr::null_mut(),
    };
    let facts = if facts_json.is_null() {
        None
    } else {
        match cstr(facts_json) {
            Ok(s) => Some(s),
            Err(_) => return std::ptr::null_mut(),
        }
    };
    let result = catch_unwind(AssertUnwindSafe(|| -> Result<String, String> {
        let mut store = FactStore::new();
        if let Some(f) = facts {
            load_facts(&mut store, f).map_err(|e| e.to_string())?;
        }
        let outcome = run_query(&mut store, query).map_err(|e| e.to_string())?;
        Ok(format!("{outcome:?}"))
    }));
    match result {
        Ok(Ok(s)) => to_c_string(s),
        Ok(Err(e)) => {
            set_error(&e);
            std::ptr::null_mut()
        }
        Err(_) => {
            set_error("internal panic");
            std::ptr::null_mut()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CString;

    #[test]
    fn policy_and_knot_lifecycle() {
        unsafe {
            let target = CString::new("1e-20").unwrap();
            let policy = csrs_policy_new(target.as_ptr(), 0);
            assert!(!policy.is_null());
            let knot = csrs_knot_builtin_5_2();
            assert!(!knot.is_null());
            let json = csrs_riley_json(knot, policy);
            assert!(!json.is_null());
            let s = CStr::from_ptr(json).to_str().unwrap().to_string();
            assert!(s.contains("\"deg_u\":3"));
            csrs_string_free(json);
            csrs_knot_free(knot);
            csrs_policy_free(policy);
        }
    }

    #[test]
    fn bad_inputs_set_errors() {
        unsafe {
            let bad = CString::new("not-a-number").unwrap();
            let p = csrs_policy_new(bad.as_ptr(), 0);
            assert!(p.is_null());
            let msg = CStr::from_ptr(csrs_last_error_message()).to_str().unwrap();
            assert!(!msg.is_empty());
            assert!(csrs_knot_twist(0).is_null());
            assert!(csrs_knot_two_bridge(6, 2).is_null());
        }
    }

    #[test]
    fn reps_round_trip_5_2() {
        unsafe {
            let target = CString::new("1e-25").unwrap();
            let policy = csrs_policy_new(target.as_ptr(), 0);
            let knot = csrs_knot_builtin_5_2();
            let reps = csrs_find_representations(knot, -2, policy);
            assert!(!reps.is_null());
            assert_eq!(csrs_reps_count(reps), 8);
            assert!(csrs_reps_casson_pass(reps));
            let mut data = std::mem::MaybeUninit::<CsrsRepData>::uninit();
            let st = csrs_reps_get(reps, 0, data.as_mut_ptr());
            assert!(matches!(st, CsrsStatus::Ok));
            let data = data.assume_init();
            assert!((data.t_re - 0.716932).abs() < 1e-5);
            assert!(data.is_su2 && data.is_nondegenerate);
            csrs_reps_free(reps);
            csrs_knot_free(knot);
            csrs_policy_free(policy);
        }
    }

    #[test]
    fn ledger_eval_round_trip() {
        unsafe {
            let q = CString::new("r0( 2*S(2,3,5) + (-1)*S(2,3,11) )").unwrap();
            let out = csrs_ledger_eval(std::ptr::null(), q.as_ptr());
            assert!(!out.is_null());
            let s = CStr::from_ptr(out).to_str().unwrap();
            assert!(s.contains("1/264"), "{s}");
            csrs_string_free(out);
        }
    }
}
