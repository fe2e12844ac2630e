//! C ABI over the workbench.
//!
//! Every function returns a status code. Results are passed through out-pointers. Strings
//! returned to the caller are owned by the caller and released with `cyl_string_free`.
//! After a nonzero code, `cyl_last_error_message` describes the failure on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use cylbench::games::{solve_game, Budget, GameVariant};
use cylbench::kernel::{check_axioms, load_structure, structure_to_string, AtomStructure, AxiomMode};
use cylbench::rainbow::{build_signature, enumerate_rainbow, EnumOptions, Preset};
use cylbench::scenario::{run_scenario_file, RunOptions};
use cylbench::Error;

pub const CYL_OK: i32 = 0;
pub const CYL_ERR_NULL: i32 = 1;
pub const CYL_ERR_USAGE: i32 = 2;
pub const CYL_ERR_STRUCTURAL: i32 = 3;
pub const CYL_ERR_RESOURCE: i32 = 4;
pub const CYL_ERR_FORMAT: i32 = 5;
pub const CYL_ERR_UTF8: i32 = 6;
pub const CYL_ERR_PANIC: i32 = 7;

/// An atom structure, CA or RA.
pub struct CylStructure {
    inner: AtomStructure,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Usage(_) => CYL_ERR_USAGE,
            Error::Structural(_) => CYL_ERR_STRUCTURAL,
            Error::Resource { .. } => CYL_ERR_RESOURCE,
            Error::Format { .. } => CYL_ERR_FORMAT,
            Error::Io(_) => CYL_ERR_USAGE,
        };
        Failure { code, message: e.to_string() }
    }
}

fn null(what: &str) -> Failure {
    Failure { code: CYL_ERR_NULL, message: format!("{what} is null") }
}

fn set_last_error(message: Option<String>) {
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = message.map(|m| CString::new(m.replace('\0', " ")).expect("nul bytes replaced"));
    });
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> i32 {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error(None);
            CYL_OK
        }
        Ok(Err(fail)) => {
            set_last_error(Some(fail.message));
            fail.code
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".to_string());
            set_last_error(Some(format!("panic: {msg}")));
            CYL_ERR_PANIC
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure { code: CYL_ERR_UTF8, message: format!("{what} is not UTF-8") })
}

unsafe fn out_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|_| Failure { code: CYL_ERR_FORMAT, message: "output contains a nul byte".into() })?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn structure<'a>(p: *const CylStructure) -> Result<&'a CylStructure, Failure> {
    p.as_ref().ok_or_else(|| null("structure"))
}

/// Parse a structure from its JSON interchange text.
///
/// # Safety
/// `json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cyl_structure_load(json: *const c_char, out: *mut *mut CylStructure) -> i32 {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let inner = load_structure(str_arg(json, "json")?)?;
        *out = Box::into_raw(Box::new(CylStructure { inner }));
        Ok(())
    })
}

/// Enumerate a rainbow preset such as `finiteRainbow(3,4,3)`.
///
/// # Safety
/// `preset` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cyl_structure_rainbow(preset: *const c_char, out: *mut *mut CylStructure) -> i32 {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let preset: Preset = str_arg(preset, "preset")?.parse()?;
        let rs = enumerate_rainbow(&build_signature(preset)?, EnumOptions::default())?;
        *out = Box::into_raw(Box::new(CylStructure { inner: AtomStructure::Ca(rs.ca) }));
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn cyl_structure_free(s: *mut CylStructure) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cyl_structure_atom_count(s: *const CylStructure, out: *mut usize) -> i32 {
    guard(|| {
        let s = structure(s)?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = s.inner.atom_count();
        Ok(())
    })
}

/// Serialize to the interchange format.
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cyl_structure_to_json(s: *const CylStructure, out: *mut *mut c_char) -> i32 {
    guard(|| {
        let s = structure(s)?;
        if out.is_null() {
            return Err(null("out"));
        }
        out_string(out, structure_to_string(&s.inner))
    })
}

/// Check the axioms; `passed` receives 1 or 0, `report` (if non-null) the JSON report.
///
/// # Safety
/// `s` must be a live handle; `passed` must be writable; `report` may be null.
#[no_mangle]
pub unsafe extern "C" fn cyl_check_axioms(
    s: *const CylStructure,
    sample: u64,
    passed: *mut i32,
    report: *mut *mut c_char,
) -> i32 {
    guard(|| {
        let s = structure(s)?;
        if passed.is_null() {
            return Err(null("passed"));
        }
        let mode = if matches!(s.inner, AtomStructure::Ca(_)) { AxiomMode::Ca } else { AxiomMode::Ra };
        let r = check_axioms(&s.inner, mode, sample);
        *passed = r.passed() as i32;
        if !report.is_null() {
            out_string(report, serde_json::to_string(&r).expect("report serializes"))?;
        }
        Ok(())
    })
}

/// Solve a game such as `Gmk(5,3)` or a JSON game spec. `s` may be null for pebble games.
/// A zero budget field keeps the default.
///
/// # Safety
/// `s` is null or a live handle; `game` is a nul-terminated string; `report` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cyl_solve(
    s: *const CylStructure,
    game: *const c_char,
    budget_states: u64,
    budget_depth: u32,
    report: *mut *mut c_char,
) -> i32 {
    guard(|| {
        if report.is_null() {
            return Err(null("report"));
        }
        let variant: GameVariant = str_arg(game, "game")?.parse()?;
        let carrier = match s.as_ref() {
            Some(s) => Some(s.inner.as_ca()?),
            None => None,
        };
        let d = Budget::default();
        let budget = Budget {
            states: if budget_states == 0 { d.states } else { budget_states },
            depth: if budget_depth == 0 { d.depth } else { budget_depth },
        };
        let r = solve_game(carrier, &variant, budget)?;
        out_string(report, serde_json::to_string(&r).expect("report serializes"))
    })
}

/// Run a scenario file. `exit_code` receives the runner's code (0, 1 or 2).
///
/// # Safety
/// `path` is a nul-terminated string; `exit_code` and `report` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cyl_run_scenario(path: *const c_char, exit_code: *mut i32, report: *mut *mut c_char) -> i32 {
    guard(|| {
        if exit_code.is_null() || report.is_null() {
            return Err(null("out"));
        }
        let r = run_scenario_file(Path::new(str_arg(path, "path")?), &RunOptions::default())?;
        *exit_code = r.exit_code;
        out_string(report, r.to_json())
    })
}

/// Copy of the calling thread's last error message, or null if the last call succeeded.
#[no_mangle]
pub extern "C" fn cyl_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null_mut(), |m| m.clone().into_raw()))
}

/// # Safety
/// `s` must come from this library and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn cyl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
