use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, UnwindSafe};

use groupconv::Error;

/// Status returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Panic = 3,
    InvalidOrder = 10,
    InvalidInput = 11,
    GroupAxiom = 12,
    IndexOutOfRange = 13,
    IrrepsUnavailable = 14,
    Shape = 15,
    IncompatibleSignal = 16,
    DegenerateFilter = 17,
    Precondition = 18,
    ZeroOutput = 19,
    SingularOperation = 20,
    Domain = 21,
    Normalization = 22,
    IllConditioned = 23,
    Parse = 24,
    Io = 25,
}

impl From<&Error> for GcStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::InvalidOrder(_) => GcStatus::InvalidOrder,
            Error::InvalidInput(_) => GcStatus::InvalidInput,
            Error::GroupAxiom { .. } => GcStatus::GroupAxiom,
            Error::IndexOutOfRange { .. } => GcStatus::IndexOutOfRange,
            Error::IrrepsUnavailable(_) => GcStatus::IrrepsUnavailable,
            Error::Shape { .. } => GcStatus::Shape,
            Error::IncompatibleSignal { .. } => GcStatus::IncompatibleSignal,
            Error::DegenerateFilter => GcStatus::DegenerateFilter,
            Error::Precondition(_) => GcStatus::Precondition,
            Error::ZeroOutput => GcStatus::ZeroOutput,
            Error::SingularOperation { .. } => GcStatus::SingularOperation,
            Error::Domain(_) => GcStatus::Domain,
            Error::Normalization { .. } => GcStatus::Normalization,
            Error::IllConditioned { .. } => GcStatus::IllConditioned,
            Error::Parse(_) => GcStatus::Parse,
            Error::Io(_) => GcStatus::Io,
        }
    }
}

/// Failure inside the wrapper, carrying the message for `gc_last_error`.
pub(crate) struct Failure(pub GcStatus, pub String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(GcStatus::from(&e), format!("error[{}]: {e}", e.name()))
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

/// Runs `f`, converting errors and panics into a status code.
pub(crate) fn guard<F>(f: F) -> GcStatus
where
    F: FnOnce() -> Result<(), Failure> + UnwindSafe,
{
    match catch_unwind(f) {
        Ok(Ok(())) => GcStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("panic: {msg}"));
            GcStatus::Panic
        }
    }
}

/// Message of the most recent failure on this thread, or NULL.
///
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn gc_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(std::ptr::null(), |c| c.as_ptr()))
}

#[no_mangle]
pub extern "C" fn gc_clear_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}
