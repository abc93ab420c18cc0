//! C ABI for the clustering library.
//!
//! The surface follows the usual opaque-handle pattern: constructors return
//! a status code and write the handle through an out-pointer, every handle
//! has a matching `_free`, and strings returned to the caller must be
//! released with [`asymclust_string_free`]. The companion header lives in
//! `include/asymclust.h` and is maintained by hand; keep the two in sync.
//!
//! All functions are safe to call from any thread as long as each handle is
//! not freed while another call is using it; the underlying objects are
//! immutable.

use std::ffi::{c_char, c_double, c_int, CStr, CString};
use std::ptr;

use asymclust::dendrogram::{ultrametric_to_dendrogram, Dendrogram};
use asymclust::io::{export, Exportable, Format};
use asymclust::methods::UltrametricMatrix;
use asymclust::{Error, Network};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AsymclustStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    InvalidNetwork = 3,
    AsymmetricInput = 4,
    UnknownMethod = 5,
    IndexOutOfBounds = 6,
    Internal = 7,
}

fn status_of(err: &Error) -> AsymclustStatus {
    match err {
        Error::AsymmetricInput { .. } => AsymclustStatus::AsymmetricInput,
        Error::UnknownMethod(_) => AsymclustStatus::UnknownMethod,
        Error::EmptyNetwork
        | Error::NonSquare { .. }
        | Error::DuplicateLabel(_)
        | Error::NegativeEntry { .. }
        | Error::NonFiniteEntry { .. }
        | Error::NonZeroDiagonal { .. }
        | Error::ZeroOffDiagonal { .. }
        | Error::NotUltrametric { .. } => AsymclustStatus::InvalidNetwork,
        _ => AsymclustStatus::Internal,
    }
}

/// Short static description of a status code.
#[no_mangle]
pub extern "C" fn asymclust_status_message(status: AsymclustStatus) -> *const c_char {
    let message: &'static CStr = match status {
        AsymclustStatus::Ok => c"ok",
        AsymclustStatus::NullArgument => c"a required pointer argument was null",
        AsymclustStatus::InvalidUtf8 => c"a string argument was not valid UTF-8",
        AsymclustStatus::InvalidNetwork => c"the dissimilarity data violates the network invariants",
        AsymclustStatus::AsymmetricInput => c"single linkage requires symmetric input",
        AsymclustStatus::UnknownMethod => c"unknown clustering method",
        AsymclustStatus::IndexOutOfBounds => c"index out of bounds",
        AsymclustStatus::Internal => c"internal error",
    };
    message.as_ptr()
}

pub struct AsymclustNetwork(Network);
pub struct AsymclustUltrametric(UltrametricMatrix);
pub struct AsymclustDendrogram(Dendrogram);

unsafe fn str_arg<'a>(ptr: *const c_char) -> Result<&'a str, AsymclustStatus> {
    if ptr.is_null() {
        return Err(AsymclustStatus::NullArgument);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| AsymclustStatus::InvalidUtf8)
}

fn string_out(text: String, out: *mut *mut c_char) -> AsymclustStatus {
    match CString::new(text) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            AsymclustStatus::Ok
        }
        Err(_) => AsymclustStatus::Internal,
    }
}

/// Build a network from `n` labels and a row-major `n * n` dissimilarity
/// matrix. On success writes a handle to `out`; free it with
/// [`asymclust_network_free`].
///
/// # Safety
/// `labels` must point to `n` valid NUL-terminated strings, `dissim` to
/// `n * n` doubles, and `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn asymclust_network_new(
    n: usize,
    labels: *const *const c_char,
    dissim: *const c_double,
    out: *mut *mut AsymclustNetwork,
) -> AsymclustStatus {
    if labels.is_null() || dissim.is_null() || out.is_null() {
        return AsymclustStatus::NullArgument;
    }
    *out = ptr::null_mut();
    let mut owned_labels = Vec::with_capacity(n);
    for i in 0..n {
        let label = *labels.add(i);
        match str_arg(label) {
            Ok(text) => owned_labels.push(text.to_string()),
            Err(status) => return status,
        }
    }
    let values = std::slice::from_raw_parts(dissim, n * n);
    let rows: Vec<Vec<f64>> = (0..n).map(|i| values[i * n..(i + 1) * n].to_vec()).collect();
    match Network::new(owned_labels, rows) {
        Ok(net) => {
            *out = Box::into_raw(Box::new(AsymclustNetwork(net)));
            AsymclustStatus::Ok
        }
        Err(err) => status_of(&err),
    }
}

/// # Safety
/// `net` must be a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn asymclust_network_free(net: *mut AsymclustNetwork) {
    if !net.is_null() {
        drop(Box::from_raw(net));
    }
}

/// Number of nodes; 0 for a null handle.
///
/// # Safety
/// `net` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn asymclust_network_len(net: *const AsymclustNetwork) -> usize {
    net.as_ref().map_or(0, |n| n.0.len())
}

/// Max-symmetrization; writes a new network handle.
///
/// # Safety
/// `net` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn asymclust_network_symmetrize_max(
    net: *const AsymclustNetwork,
    out: *mut *mut AsymclustNetwork,
) -> AsymclustStatus {
    let (Some(net), false) = (net.as_ref(), out.is_null()) else {
        return AsymclustStatus::NullArgument;
    };
    *out = Box::into_raw(Box::new(AsymclustNetwork(net.0.symmetrize_max())));
    AsymclustStatus::Ok
}

/// Writes 1 to `out` if the network is exactly symmetric, 0 otherwise.
///
/// # Safety
/// `net` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn asymclust_network_is_symmetric(
    net: *const AsymclustNetwork,
    out: *mut c_int,
) -> AsymclustStatus {
    let (Some(net), false) = (net.as_ref(), out.is_null()) else {
        return AsymclustStatus::NullArgument;
    };
    *out = c_int::from(net.0.is_symmetric());
    AsymclustStatus::Ok
}

/// Run a clustering method ("reciprocal", "nonreciprocal", or
/// "single-linkage") and write an ultrametric handle.
///
/// # Safety
/// `net` must be a live handle, `method` a valid NUL-terminated string, and
/// `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn asymclust_cluster(
    net: *const AsymclustNetwork,
    method: *const c_char,
    out: *mut *mut AsymclustUltrametric,
) -> AsymclustStatus {
    let (Some(net), false) = (net.as_ref(), out.is_null()) else {
        return AsymclustStatus::NullArgument;
    };
    *out = ptr::null_mut();
    let method = match str_arg(method) {
        Ok(name) => name,
        Err(status) => return status,
    };
    match asymclust::run_method(method, &net.0) {
        Ok(u) => {
            *out = Box::into_raw(Box::new(AsymclustUltrametric(u)));
            AsymclustStatus::Ok
        }
        Err(err) => status_of(&err),
    }
}

/// # Safety
/// `u` must be a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn asymclust_ultrametric_free(u: *mut AsymclustUltrametric) {
    if !u.is_null() {
        drop(Box::from_raw(u));
    }
}

/// Number of nodes; 0 for a null handle.
///
/// # Safety
/// `u` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn asymclust_ultrametric_len(u: *const AsymclustUltrametric) -> usize {
    u.as_ref().map_or(0, |u| u.0.len())
}

/// Ultrametric distance between nodes `i` and `j`.
///
/// # Safety
/// `u` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn asymclust_ultrametric_value(
    u: *const AsymclustUltrametric,
    i: usize,
    j: usize,
    out: *mut c_double,
) -> AsymclustStatus {
    let (Some(u), false) = (u.as_ref(), out.is_null()) else {
        return AsymclustStatus::NullArgument;
    };
    if i >= u.0.len() || j >= u.0.len() {
        return AsymclustStatus::IndexOutOfBounds;
    }
    *out = u.0.get(i, j);
    AsymclustStatus::Ok
}

/// Label of node `i` as a newly allocated string; release with
/// [`asymclust_string_free`].
///
/// # Safety
/// `u` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn asymclust_ultrametric_label(
    u: *const AsymclustUltrametric,
    i: usize,
    out: *mut *mut c_char,
) -> AsymclustStatus {
    let (Some(u), false) = (u.as_ref(), out.is_null()) else {
        return AsymclustStatus::NullArgument;
    };
    if i >= u.0.len() {
        return AsymclustStatus::IndexOutOfBounds;
    }
    string_out(u.0.labels()[i].clone(), out)
}

/// Serialize the ultrametric as `{"labels": ..., "matrix": ...}` JSON.
///
/// # Safety
/// `u` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn asymclust_ultrametric_to_json(
    u: *const AsymclustUltrametric,
    out: *mut *mut c_char,
) -> AsymclustStatus {
    let (Some(u), false) = (u.as_ref(), out.is_null()) else {
        return AsymclustStatus::NullArgument;
    };
    match export(Exportable::Ultrametric(&u.0), Format::Json) {
        Ok(text) => string_out(text, out),
        Err(_) => AsymclustStatus::Internal,
    }
}

/// Build the merge tree of an ultrametric; free with
/// [`asymclust_dendrogram_free`].
///
/// # Safety
/// `u` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn asymclust_dendrogram_new(
    u: *const AsymclustUltrametric,
    out: *mut *mut AsymclustDendrogram,
) -> AsymclustStatus {
    let (Some(u), false) = (u.as_ref(), out.is_null()) else {
        return AsymclustStatus::NullArgument;
    };
    let tree = ultrametric_to_dendrogram(&u.0);
    *out = Box::into_raw(Box::new(AsymclustDendrogram(tree)));
    AsymclustStatus::Ok
}

/// # Safety
/// `d` must be a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn asymclust_dendrogram_free(d: *mut AsymclustDendrogram) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Number of merge events; 0 for a null handle.
///
/// # Safety
/// `d` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn asymclust_dendrogram_event_count(
    d: *const AsymclustDendrogram,
) -> usize {
    d.as_ref().map_or(0, |d| d.0.events().len())
}

/// Serialize the tree as Newick; release with [`asymclust_string_free`].
///
/// # Safety
/// `d` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn asymclust_dendrogram_to_newick(
    d: *const AsymclustDendrogram,
    out: *mut *mut c_char,
) -> AsymclustStatus {
    let (Some(d), false) = (d.as_ref(), out.is_null()) else {
        return AsymclustStatus::NullArgument;
    };
    string_out(asymclust::to_newick(&d.0), out)
}

/// Serialize the tree as `{"events": ..., "labels": ...}` JSON.
///
/// # Safety
/// `d` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn asymclust_dendrogram_to_json(
    d: *const AsymclustDendrogram,
    out: *mut *mut c_char,
) -> AsymclustStatus {
    let (Some(d), false) = (d.as_ref(), out.is_null()) else {
        return AsymclustStatus::NullArgument;
    };
    match export(Exportable::Dendrogram(&d.0), Format::Json) {
        Ok(text) => string_out(text, out),
        Err(_) => AsymclustStatus::Internal,
    }
}

/// Release a string returned by this library.
///
/// # Safety
/// `s` must be a string returned by this library, not yet freed, or null.
#[no_mangle]
pub unsafe extern "C" fn asymclust_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
