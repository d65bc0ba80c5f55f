//! C ABI over the `bitpath` crate.
//!
//! Indexes are opaque heap handles created by the `bitpath_index_*`
//! constructors and released with [`bitpath_index_free`]. Every fallible
//! function returns a [`BitpathStatus`]; on failure the message is available
//! from [`bitpath_last_error_message`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::fs::File;
use std::io::BufReader;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::time::Duration;

use bitpath::baselines::{run_query, Method};
use bitpath::{BitPathIndex, Deadline, Error, LocrQuery};

/// Opaque index handle.
pub struct BitpathIndex {
    inner: BitPathIndex,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BitpathStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Io = 3,
    Parse = 4,
    CorruptIndex = 5,
    UnknownNode = 6,
    Timeout = 7,
    InvalidArgument = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BitpathMethod {
    Bitpath = 0,
    Dfs = 1,
    Fdfs = 2,
    Bbfs = 3,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BitpathQueryResult {
    /// 1 for YES, 0 for NO.
    pub answer: u8,
    pub elapsed_ns: u64,
    pub dnc_calls: u64,
    pub intersections: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', "\\0")).expect("interior NULs replaced");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

struct Failure(BitpathStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Io(_) => BitpathStatus::Io,
            Error::Parse { .. } => BitpathStatus::Parse,
            Error::BadMagic { .. }
            | Error::UnsupportedVersion(_)
            | Error::Truncated(_)
            | Error::Checksum { .. }
            | Error::Corrupt(_) => BitpathStatus::CorruptIndex,
            Error::UnknownNode(_) | Error::InvalidNodeId(_) => BitpathStatus::UnknownNode,
            Error::Timeout => BitpathStatus::Timeout,
            _ => BitpathStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn guard<F: FnOnce() -> Result<(), Failure>>(f: F) -> BitpathStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => BitpathStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_last_error(message);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            BitpathStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(BitpathStatus::NullArgument, format!("{what} is NULL")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(BitpathStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn handle<'a>(idx: *const BitpathIndex) -> Result<&'a BitPathIndex, Failure> {
    idx.as_ref()
        .map(|h| &h.inner)
        .ok_or_else(|| Failure(BitpathStatus::NullArgument, "index handle is NULL".into()))
}

unsafe fn emit(out: *mut *mut BitpathIndex, inner: BitPathIndex) {
    *out = Box::into_raw(Box::new(BitpathIndex { inner }));
}

fn null_out() -> Failure {
    Failure(BitpathStatus::NullArgument, "output pointer is NULL".into())
}

/// Builds an index from a tab-separated edge list file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bitpath_index_build_from_tsv(
    path: *const c_char,
    out: *mut *mut BitpathIndex,
) -> BitpathStatus {
    guard(|| {
        let path = text(path, "path")?;
        if out.is_null() {
            return Err(null_out());
        }
        let g = bitpath::parse_edge_list(BufReader::new(File::open(path).map_err(Error::from)?))?;
        emit(out, BitPathIndex::from_graph(&g)?);
        Ok(())
    })
}

/// Builds an index from edge-list text held in memory.
///
/// # Safety
/// `tsv` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bitpath_index_build_from_tsv_text(
    tsv: *const c_char,
    out: *mut *mut BitpathIndex,
) -> BitpathStatus {
    guard(|| {
        let tsv = text(tsv, "tsv")?;
        if out.is_null() {
            return Err(null_out());
        }
        emit(out, BitPathIndex::from_graph(&bitpath::parse_edge_str(tsv)?)?);
        Ok(())
    })
}

/// Loads a serialized index file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bitpath_index_load(path: *const c_char, out: *mut *mut BitpathIndex) -> BitpathStatus {
    guard(|| {
        let path = text(path, "path")?;
        if out.is_null() {
            return Err(null_out());
        }
        emit(out, bitpath::load_index(path)?);
        Ok(())
    })
}

/// Writes `idx` to `path`.
///
/// # Safety
/// `idx` must come from this library and `path` be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn bitpath_index_save(idx: *const BitpathIndex, path: *const c_char) -> BitpathStatus {
    guard(|| {
        let idx = handle(idx)?;
        bitpath::save_index(idx, text(path, "path")?)?;
        Ok(())
    })
}

/// Releases a handle. NULL is ignored.
///
/// # Safety
/// `idx` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn bitpath_index_free(idx: *mut BitpathIndex) {
    if !idx.is_null() {
        drop(Box::from_raw(idx));
    }
}

/// Nodes of the collapsed graph; 0 for NULL.
///
/// # Safety
/// `idx` must be NULL or come from this library.
#[no_mangle]
pub unsafe extern "C" fn bitpath_index_node_count(idx: *const BitpathIndex) -> usize {
    idx.as_ref().map_or(0, |h| h.inner.node_count())
}

/// Edges of the collapsed graph; 0 for NULL.
///
/// # Safety
/// `idx` must be NULL or come from this library.
#[no_mangle]
pub unsafe extern "C" fn bitpath_index_edge_count(idx: *const BitpathIndex) -> usize {
    idx.as_ref().map_or(0, |h| h.inner.edge_count())
}

/// Distinct labels; 0 for NULL.
///
/// # Safety
/// `idx` must be NULL or come from this library.
#[no_mangle]
pub unsafe extern "C" fn bitpath_index_label_count(idx: *const BitpathIndex) -> usize {
    idx.as_ref().map_or(0, |h| h.inner.label_count())
}

/// Answers one query. `method` is a [`BitpathMethod`] value. `labels` may be
/// NULL when `label_count` is 0. A `timeout_ms` of 0 means no deadline.
///
/// # Safety
/// `idx` must come from this library, the strings must be NUL-terminated,
/// `labels` must point to `label_count` strings and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bitpath_query(
    idx: *const BitpathIndex,
    source: *const c_char,
    destination: *const c_char,
    labels: *const *const c_char,
    label_count: usize,
    method: u32,
    timeout_ms: u64,
    out: *mut BitpathQueryResult,
) -> BitpathStatus {
    guard(|| {
        let idx = handle(idx)?;
        if out.is_null() {
            return Err(Failure(BitpathStatus::NullArgument, "result pointer is NULL".into()));
        }
        if labels.is_null() && label_count > 0 {
            return Err(Failure(BitpathStatus::NullArgument, "labels is NULL".into()));
        }
        let names = if label_count == 0 {
            Vec::new()
        } else {
            std::slice::from_raw_parts(labels, label_count)
                .iter()
                .map(|&l| text(l, "label").map(str::to_owned))
                .collect::<Result<Vec<_>, _>>()?
        };
        let q = LocrQuery {
            source: text(source, "source")?.to_owned(),
            destination: text(destination, "destination")?.to_owned(),
            labels: names,
        };
        let method = match method {
            m if m == BitpathMethod::Bitpath as u32 => Method::BitPath,
            m if m == BitpathMethod::Dfs as u32 => Method::Dfs,
            m if m == BitpathMethod::Fdfs as u32 => Method::Fdfs,
            m if m == BitpathMethod::Bbfs as u32 => Method::Bbfs,
            m => return Err(Failure(BitpathStatus::InvalidArgument, format!("unknown method {m}"))),
        };
        let deadline = match timeout_ms {
            0 => Deadline::none(),
            ms => Deadline::after(Duration::from_millis(ms)),
        };
        let r = run_query(method, idx, &q, deadline)?;
        *out = BitpathQueryResult {
            answer: r.answer.is_yes() as u8,
            elapsed_ns: u64::try_from(r.elapsed.as_nanos()).unwrap_or(u64::MAX),
            dnc_calls: r.dnc_calls,
            intersections: r.intersections,
        };
        Ok(())
    })
}

/// Message of the last failed call on this thread, or NULL. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn bitpath_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn bitpath_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> CString {
        CString::new(s).unwrap()
    }

    #[test]
    fn null_arguments_are_reported() {
        let mut out = ptr::null_mut();
        let status = unsafe { bitpath_index_build_from_tsv_text(ptr::null(), &mut out) };
        assert_eq!(status, BitpathStatus::NullArgument);
        assert!(out.is_null());
        let msg = unsafe { CStr::from_ptr(bitpath_last_error_message()) };
        assert_eq!(msg.to_str().unwrap(), "tsv is NULL");
        assert_eq!(unsafe { bitpath_index_node_count(ptr::null()) }, 0);
    }

    #[test]
    fn invalid_utf8_is_reported() {
        let bad = [0xffu8, 0xfe, 0];
        let mut out = ptr::null_mut();
        let status = unsafe { bitpath_index_build_from_tsv_text(bad.as_ptr().cast(), &mut out) };
        assert_eq!(status, BitpathStatus::InvalidUtf8);
    }

    #[test]
    fn parse_errors_map_to_parse_status() {
        let mut out = ptr::null_mut();
        let status = unsafe { bitpath_index_build_from_tsv_text(c("a\tb\n").as_ptr(), &mut out) };
        assert_eq!(status, BitpathStatus::Parse);
    }

    #[test]
    fn version_matches_crate() {
        let v = unsafe { CStr::from_ptr(bitpath_version()) };
        assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
    }
}
