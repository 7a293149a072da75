//! C interface to the `indseq` library.
//!
//! Graphs and sequences cross the boundary as opaque heap handles that the
//! caller releases with the matching `_free` function. Every fallible call
//! returns an [`IndseqStatus`] and writes its result through an out-pointer;
//! on failure the out-pointer is untouched and
//! [`indseq_last_error_message`] describes the error. Strings returned by
//! the library are released with [`indseq_string_free`]. Panics never cross
//! the boundary.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use indseq::analysis::{analyze_shape, is_log_concave};
use indseq::constants;
use indseq::count::{self, IndepSequence};
use indseq::estimators::counting_lemma_check;
use indseq::generators::{sample_model, ModelSpec};
use indseq::{Error, Graph, Seed};
use num_traits::ToPrimitive;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndseqStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    SizeGuard = 3,
    NotIndependent = 4,
    NoIndependentSet = 5,
    RejectionCapExceeded = 6,
    Parse = 7,
    Overflow = 8,
    Internal = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndseqFamily {
    Tree = 0,
    /// G(n, p) with the parameter read as `p`.
    GnpP = 1,
    /// G(n, d/n) with the parameter read as `d`.
    GnpD = 2,
    /// Random `d`-regular graph; the parameter must be integral.
    Regular = 3,
}

/// Opaque labelled simple graph.
pub struct IndseqGraph(Graph);

/// Opaque independence sequence.
pub struct IndseqSequence(IndepSequence);

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct IndseqPittel {
    pub rho: f64,
    pub mean_correction: f64,
    pub variance_rate: f64,
    pub variance_rate_squared: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct IndseqKarp {
    pub d: f64,
    pub a: f64,
    pub b: f64,
    pub matching_fraction: f64,
    pub independent_fraction: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nuls removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> IndseqStatus {
    match e {
        Error::SizeGuard { .. } => IndseqStatus::SizeGuard,
        Error::NotIndependent => IndseqStatus::NotIndependent,
        Error::NoIndependentSet(_) => IndseqStatus::NoIndependentSet,
        Error::RejectionCapExceeded(_) => IndseqStatus::RejectionCapExceeded,
        Error::Parse(_) | Error::Json(_) => IndseqStatus::Parse,
        Error::Io(_) => IndseqStatus::Internal,
        _ => IndseqStatus::InvalidArgument,
    }
}

/// Runs `f`, mapping errors and panics to status codes.
fn guard(f: impl FnOnce() -> Result<(), (IndseqStatus, String)>) -> IndseqStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => IndseqStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            IndseqStatus::Internal
        }
    }
}

fn lib<T>(r: indseq::Result<T>) -> Result<T, (IndseqStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (IndseqStatus, String) {
    (IndseqStatus::NullPointer, format!("{what} is null"))
}

/// # Safety
/// `p` is null or valid for reads of `T`.
unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, (IndseqStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

/// # Safety
/// `out` is null or valid for writes of `T`.
unsafe fn write<T>(out: *mut T, value: T) -> Result<(), (IndseqStatus, String)> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

fn into_c_string(s: String) -> Result<*mut libc::c_char, (IndseqStatus, String)> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| (IndseqStatus::Internal, "string contains a nul byte".into()))
}

/// Description of the last error on the calling thread. The pointer stays
/// valid until the next failing call on the same thread; never free it.
#[no_mangle]
pub extern "C" fn indseq_last_error_message() -> *const libc::c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn indseq_version() -> *const libc::c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr().cast()
}

/// # Safety
/// `s` is null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn indseq_string_free(s: *mut libc::c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a graph on `n` vertices from `m` edges `(us[i], vs[i])`.
/// Duplicate and reversed pairs collapse; self-loops and out-of-range
/// endpoints are errors.
///
/// # Safety
/// `us` and `vs` are valid for `m` reads (or `m == 0`); `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn indseq_graph_from_edges(
    n: usize,
    us: *const usize,
    vs: *const usize,
    m: usize,
    out: *mut *mut IndseqGraph,
) -> IndseqStatus {
    guard(|| {
        let pairs: Vec<(usize, usize)> = if m == 0 {
            Vec::new()
        } else {
            if us.is_null() || vs.is_null() {
                return Err(null("edge array"));
            }
            let us = std::slice::from_raw_parts(us, m);
            let vs = std::slice::from_raw_parts(vs, m);
            us.iter().copied().zip(vs.iter().copied()).collect()
        };
        let g = lib(Graph::from_edges(n, pairs))?;
        write(out, Box::into_raw(Box::new(IndseqGraph(g))))
    })
}

/// Parses the edge-list text format (`n m` header, then `u v` lines).
///
/// # Safety
/// `text` is a valid nul-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn indseq_graph_parse_edge_list(
    text: *const libc::c_char,
    out: *mut *mut IndseqGraph,
) -> IndseqStatus {
    guard(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        let s = CStr::from_ptr(text)
            .to_str()
            .map_err(|_| (IndseqStatus::Parse, "text is not UTF-8".to_string()))?;
        let (g, _) = lib(Graph::parse_edge_list(s))?;
        write(out, Box::into_raw(Box::new(IndseqGraph(g))))
    })
}

/// Samples one graph of the family with parameter `param` (ignored for
/// trees) from the stream `(seed, trial)`.
///
/// # Safety
/// `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn indseq_graph_sample(
    family: IndseqFamily,
    n: usize,
    param: f64,
    seed: u64,
    trial: u64,
    out: *mut *mut IndseqGraph,
) -> IndseqStatus {
    guard(|| {
        let spec = match family {
            IndseqFamily::Tree => ModelSpec::tree(n),
            IndseqFamily::GnpP => ModelSpec::gnp_p(n, param),
            IndseqFamily::GnpD => ModelSpec::gnp_d(n, param),
            IndseqFamily::Regular => {
                if !(param >= 1.0 && param.fract() == 0.0) {
                    return Err((IndseqStatus::InvalidArgument, format!("regular degree {param} is not a positive integer")));
                }
                ModelSpec::regular(n, param as usize)
            }
        };
        let g = lib(sample_model(&spec, &mut Seed::new(seed, trial).rng()))?;
        write(out, Box::into_raw(Box::new(IndseqGraph(g))))
    })
}

/// # Safety
/// `g` is null or a graph handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn indseq_graph_free(g: *mut IndseqGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Vertex count, or 0 for a null handle.
///
/// # Safety
/// `g` is null or a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn indseq_graph_vertex_count(g: *const IndseqGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.n())
}

/// Edge count, or 0 for a null handle.
///
/// # Safety
/// `g` is null or a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn indseq_graph_edge_count(g: *const IndseqGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.edge_count())
}

/// Edge-list text of the graph; free with [`indseq_string_free`].
///
/// # Safety
/// `g` is a live graph handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn indseq_graph_to_edge_list(g: *const IndseqGraph, out: *mut *mut libc::c_char) -> IndseqStatus {
    guard(|| {
        let g = deref(g, "graph")?;
        write(out, into_c_string(g.0.to_edge_list(None))?)
    })
}

/// Independence number.
///
/// # Safety
/// `g` is a live graph handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn indseq_max_independent_set_size(g: *const IndseqGraph, out: *mut usize) -> IndseqStatus {
    guard(|| {
        let g = deref(g, "graph")?;
        write(out, lib(count::max_independent_set_size(&g.0))?)
    })
}

/// Whether `Σ_{|S|=k} N_S = (k+1) x_{k+1}` holds at every `k`.
///
/// # Safety
/// `g` is a live graph handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn indseq_counting_identity_holds(g: *const IndseqGraph, out: *mut bool) -> IndseqStatus {
    guard(|| {
        let g = deref(g, "graph")?;
        write(out, lib(counting_lemma_check(&g.0))?.holds)
    })
}

/// Exact independence sequence of `g`.
///
/// # Safety
/// `g` is a live graph handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn indseq_sequence_compute(g: *const IndseqGraph, out: *mut *mut IndseqSequence) -> IndseqStatus {
    guard(|| {
        let g = deref(g, "graph")?;
        let s = lib(count::independence_sequence(&g.0))?;
        write(out, Box::into_raw(Box::new(IndseqSequence(s))))
    })
}

/// # Safety
/// `s` is null or a sequence handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn indseq_sequence_free(s: *mut IndseqSequence) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Number of stored coefficients, `α + 1`; 0 for a null handle.
///
/// # Safety
/// `s` is null or a live sequence handle.
#[no_mangle]
pub unsafe extern "C" fn indseq_sequence_len(s: *const IndseqSequence) -> usize {
    s.as_ref().map_or(0, |s| s.0.coeffs.len())
}

/// Coefficient `x_k` as a decimal string; free with [`indseq_string_free`].
/// Indices beyond `α` give `"0"`.
///
/// # Safety
/// `s` is a live sequence handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn indseq_sequence_coefficient_string(
    s: *const IndseqSequence,
    k: usize,
    out: *mut *mut libc::c_char,
) -> IndseqStatus {
    guard(|| {
        let s = deref(s, "sequence")?;
        write(out, into_c_string(s.0.get(k).to_string())?)
    })
}

/// Coefficient `x_k` as a 64-bit integer; `INDSEQ_STATUS_OVERFLOW` if it
/// does not fit.
///
/// # Safety
/// `s` is a live sequence handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn indseq_sequence_coefficient_u64(s: *const IndseqSequence, k: usize, out: *mut u64) -> IndseqStatus {
    guard(|| {
        let s = deref(s, "sequence")?;
        let v = s.0.get(k).to_u64().ok_or_else(|| (IndseqStatus::Overflow, format!("x_{k} exceeds 64 bits")))?;
        write(out, v)
    })
}

/// The sequence as count JSON; free with [`indseq_string_free`].
///
/// # Safety
/// `s` is a live sequence handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn indseq_sequence_to_json(s: *const IndseqSequence, out: *mut *mut libc::c_char) -> IndseqStatus {
    guard(|| {
        let s = deref(s, "sequence")?;
        let text = lib(serde_json::to_string(&s.0.to_json()).map_err(Error::from))?;
        write(out, into_c_string(text)?)
    })
}

/// Weak unimodality of the sequence.
///
/// # Safety
/// `s` is a live sequence handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn indseq_sequence_is_unimodal(s: *const IndseqSequence, out: *mut bool) -> IndseqStatus {
    guard(|| {
        let s = deref(s, "sequence")?;
        write(out, analyze_shape(&s.0.coeffs).unimodal)
    })
}

/// Log-concavity of the sequence.
///
/// # Safety
/// `s` is a live sequence handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn indseq_sequence_is_log_concave(s: *const IndseqSequence, out: *mut bool) -> IndseqStatus {
    guard(|| {
        let s = deref(s, "sequence")?;
        write(out, is_log_concave(&s.0.coeffs))
    })
}

/// # Safety
/// `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn indseq_pittel_constants(out: *mut IndseqPittel) -> IndseqStatus {
    guard(|| {
        let c = constants::solve_rho();
        write(
            out,
            IndseqPittel {
                rho: c.rho,
                mean_correction: c.mean_correction,
                variance_rate: c.variance_rate,
                variance_rate_squared: c.variance_rate_squared,
            },
        )
    })
}

/// # Safety
/// `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn indseq_karp_constants(d: f64, out: *mut IndseqKarp) -> IndseqStatus {
    guard(|| {
        let k = lib(constants::karp_constants(d))?;
        write(
            out,
            IndseqKarp {
                d: k.d,
                a: k.a,
                b: k.b,
                matching_fraction: k.matching_fraction,
                independent_fraction: k.independent_fraction,
            },
        )
    })
}

/// # Safety
/// `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn indseq_frieze_beta(d: f64, out: *mut f64) -> IndseqStatus {
    guard(|| write(out, lib(constants::frieze_beta(d))?))
}

/// # Safety
/// `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn indseq_dani_degree_bound(alpha: f64, out: *mut f64) -> IndseqStatus {
    guard(|| write(out, lib(constants::dani_degree_bound(alpha))?.value))
}

/// # Safety
/// `increasing` and `decreasing` are writable.
#[no_mangle]
pub unsafe extern "C" fn indseq_tree_thresholds(increasing: *mut f64, decreasing: *mut f64) -> IndseqStatus {
    guard(|| {
        if increasing.is_null() || decreasing.is_null() {
            return Err(null("output pointer"));
        }
        let t = constants::tree_unimodality_thresholds();
        write(increasing, t.alpha_increasing)?;
        write(decreasing, t.alpha_decreasing)
    })
}

/// Labelled trees on `n` vertices in which `{0, ..., k-1}` is independent,
/// as a decimal string; free with [`indseq_string_free`].
///
/// # Safety
/// `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn indseq_trees_with_independent_prefix(n: usize, k: usize, out: *mut *mut libc::c_char) -> IndseqStatus {
    guard(|| {
        let c = lib(count::count_trees_with_independent_prefix(n, k))?;
        write(out, into_c_string(c.to_string())?)
    })
}
