//! C ABI over the metaplectic-packets engine.
//!
//! A workspace is loaded from JSON into an opaque handle. Every call returns
//! an [`MppStatus`]; on failure the message is available from
//! [`mpp_last_error`] on the same thread. Strings handed out by the library
//! must be released with [`mpp_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use metaplectic_packets::adams::{shift_alpha, RootNumberTable};
use metaplectic_packets::discrete::DiscreteParam;
use metaplectic_packets::format::{character_record, xms_record, Workspace};
use metaplectic_packets::nonvanish::{nonvanishing, row_exchange};
use metaplectic_packets::packets::{enumerate, enumerate_all};
use metaplectic_packets::{Error, ErrorKind, Inventory};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MppStatus {
    Ok = 0,
    /// Malformed or invalid input.
    Input = 1,
    /// A valid input outside the domain of the operation.
    Precondition = 2,
    NullPointer = 3,
    Utf8 = 4,
    /// An internal panic was caught at the boundary.
    Panic = 5,
}

/// Opaque handle to a loaded workspace.
pub struct MppWorkspace {
    inner: Workspace,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Fail(MppStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = match e.kind() {
            ErrorKind::Input => MppStatus::Input,
            ErrorKind::Precondition => MppStatus::Precondition,
        };
        Fail(status, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> MppStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MppStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            MppStatus::Panic
        }
    }
}

fn null(what: &str) -> Fail {
    Fail(MppStatus::NullPointer, format!("`{}` is null", what))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Fail(MppStatus::Utf8, format!("`{}`: {}", what, e)))
}

unsafe fn ws_arg<'a>(ws: *const MppWorkspace) -> Result<&'a Workspace, Fail> {
    ws.as_ref().map(|w| &w.inner).ok_or_else(|| null("ws"))
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    let c = CString::new(s).map_err(|e| Fail(MppStatus::Utf8, e.to_string()))?;
    *out = c.into_raw();
    Ok(())
}

fn missing(what: &str) -> Fail {
    Fail(MppStatus::Input, format!("{}: missing", what))
}

/// Parses a workspace document. When it has no inventory the built-in
/// three-label inventory is used. On success `*out` owns a new handle.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mpp_workspace_from_json(
    json: *const c_char,
    out: *mut *mut MppWorkspace,
) -> MppStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let text = str_arg(json, "json")?;
        let inner = Workspace::parse(text, Some(Arc::new(Inventory::standard())))?;
        *out = Box::into_raw(Box::new(MppWorkspace { inner }));
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `ws` must come from [`mpp_workspace_from_json`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn mpp_workspace_free(ws: *mut MppWorkspace) {
    if !ws.is_null() {
        drop(Box::from_raw(ws));
    }
}

/// Emits the workspace back as JSON.
///
/// # Safety
/// `ws` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mpp_workspace_to_json(
    ws: *const MppWorkspace,
    out: *mut *mut c_char,
) -> MppStatus {
    guard(|| {
        let w = ws_arg(ws)?;
        if out.is_null() {
            return Err(null("out"));
        }
        put_string(out, w.emit())
    })
}

/// Non-vanishing verdict for the workspace XMS.
///
/// # Safety
/// `ws` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mpp_nonvanishing(ws: *const MppWorkspace, out: *mut bool) -> MppStatus {
    guard(|| {
        let w = ws_arg(ws)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let e = w.xms.as_ref().ok_or_else(|| missing("xms"))?;
        *out = nonvanishing(e)?;
        Ok(())
    })
}

/// Cuspidality of the workspace parameter and character, read as a
/// discrete L-parameter.
///
/// # Safety
/// `ws` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mpp_is_cuspidal(ws: *const MppWorkspace, out: *mut bool) -> MppStatus {
    guard(|| {
        let w = ws_arg(ws)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let phi = w.parameter.clone().ok_or_else(|| missing("parameter"))?;
        let eps = w.character.clone().ok_or_else(|| missing("character"))?;
        *out = DiscreteParam::new(phi, eps)?.is_cuspidal();
        Ok(())
    })
}

/// Exchanges positions k−1 and k of the row of `rho`. `*out` receives the
/// workspace with the exchanged XMS.
///
/// # Safety
/// `ws` must be a live handle, `rho` a NUL-terminated string and `out` a
/// valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mpp_row_exchange(
    ws: *const MppWorkspace,
    rho: *const c_char,
    k: usize,
    out: *mut *mut c_char,
) -> MppStatus {
    guard(|| {
        let w = ws_arg(ws)?;
        let id = str_arg(rho, "rho")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let e = w.xms.as_ref().ok_or_else(|| missing("xms"))?;
        let r = row_exchange(e, w.inventory.lookup(id)?, k)?;
        let mut next = w.clone();
        next.xms = Some(r);
        put_string(out, next.emit())
    })
}

/// Enumerates the packet of the workspace parameter, restricted to the
/// workspace character when there is one. `*out` receives the workspace with
/// the members under `result.packets`.
///
/// # Safety
/// `ws` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mpp_packet(ws: *const MppWorkspace, out: *mut *mut c_char) -> MppStatus {
    guard(|| {
        let w = ws_arg(ws)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let psi = w.parameter.as_ref().ok_or_else(|| missing("parameter"))?;
        let groups = match &w.character {
            Some(eps) => vec![(eps.clone(), enumerate(psi, eps)?)],
            None => enumerate_all(psi)?.members.into_iter().collect(),
        };
        let packets: Vec<_> = groups
            .iter()
            .map(|(eps, members)| {
                serde_json::json!({
                    "character": character_record(&w.inventory, eps),
                    "members": members.iter().map(xms_record).collect::<Vec<_>>(),
                })
            })
            .collect();
        let mut next = w.clone();
        next.result = Some(serde_json::json!({ "packets": packets }));
        put_string(out, next.emit())
    })
}

/// The Adams shift of the workspace XMS at `alpha`, using the inventory's
/// root numbers. `*out` receives the workspace with the shifted XMS and
/// `*central_sign` the sign of the added block.
///
/// # Safety
/// `ws` must be a live handle; `out` and `central_sign` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn mpp_adams(
    ws: *const MppWorkspace,
    alpha: i64,
    out: *mut *mut c_char,
    central_sign: *mut i32,
) -> MppStatus {
    guard(|| {
        let w = ws_arg(ws)?;
        if out.is_null() || central_sign.is_null() {
            return Err(null("out"));
        }
        let e = w.xms.as_ref().ok_or_else(|| missing("xms"))?;
        let s = shift_alpha(e, alpha, &RootNumberTable::from_inventory(&w.inventory))?;
        let mut next = w.clone();
        next.xms = Some(s.xms);
        put_string(out, next.emit())?;
        *central_sign = s.central_sign.to_i8() as i32;
        Ok(())
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn mpp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// The message of the last failed call on this thread, or null. The pointer
/// stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn mpp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}
