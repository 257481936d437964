//! C ABI over `groupconv`.
//!
//! Groups are opaque handles created with `gc_group_new` and released with
//! `gc_group_free`. Signals are caller-owned arrays of `GcComplex` whose
//! length equals the group order. Every fallible function returns a
//! `GcStatus`; on failure `gc_last_error` describes the cause.

use std::ffi::{c_char, CStr};
use std::slice;

use groupconv::convolution::{condition_data, convolve_direct, OperationVariant};
use groupconv::deconvolution::{deconvolve_exact, deconvolve_svt, EncodingMethod};
use groupconv::group::{parse_group_spec, FiniteGroup};
use groupconv::integral::convergence_study;
use groupconv::signal::GroupSignal;
use num_complex::Complex64;

mod error;

pub use error::{gc_clear_error, gc_last_error, GcStatus};
use error::{guard, Failure};

static VERSION: &[u8] = concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes();

/// Opaque finite group.
pub struct GcGroup {
    inner: FiniteGroup,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GcComplex {
    pub re: f64,
    pub im: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GcVariant {
    Convolution = 0,
    RightConvolution = 1,
    CrossCorrelation = 2,
    RightCrossCorrelation = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GcEncoding {
    Lcu = 0,
    Fourier = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct GcCondition {
    pub kappa: f64,
    pub norm: f64,
    pub sigma_min: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct GcSvtReport {
    pub alpha: f64,
    pub kappa: f64,
    pub degree: usize,
    pub success_probability: f64,
    pub worst_case_probability: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct GcStudyRow {
    pub n: usize,
    pub error: f64,
    pub kappa_measured: f64,
    pub kappa_bound: f64,
}

impl From<GcVariant> for OperationVariant {
    fn from(v: GcVariant) -> Self {
        match v {
            GcVariant::Convolution => OperationVariant::Convolution,
            GcVariant::RightConvolution => OperationVariant::RightConvolution,
            GcVariant::CrossCorrelation => OperationVariant::CrossCorrelation,
            GcVariant::RightCrossCorrelation => OperationVariant::RightCrossCorrelation,
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(GcStatus::NullPointer, format!("null pointer: {what}"))
}

unsafe fn group_ref<'a>(g: *const GcGroup) -> Result<&'a FiniteGroup, Failure> {
    g.as_ref().map(|h| &h.inner).ok_or_else(|| null("group"))
}

unsafe fn read_signal(ptr: *const GcComplex, len: usize, what: &str) -> Result<GroupSignal, Failure> {
    if ptr.is_null() {
        return Err(null(what));
    }
    let s = slice::from_raw_parts(ptr, len);
    Ok(GroupSignal::new(s.iter().map(|z| Complex64::new(z.re, z.im)).collect()))
}

unsafe fn write_signal(out: *mut GcComplex, len: usize, s: &GroupSignal) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    if s.len() != len {
        return Err(Failure(GcStatus::Shape, format!("output has {} entries, buffer {len}", s.len())));
    }
    let dst = slice::from_raw_parts_mut(out, len);
    for (d, v) in dst.iter_mut().zip(s.values()) {
        *d = GcComplex { re: v.re, im: v.im };
    }
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn gc_version() -> *const c_char {
    VERSION.as_ptr().cast()
}

/// Builds a group from a spec such as `cyclic:8`, `dihedral:4` or
/// `product:cyclic:2,cyclic:3`.
///
/// # Safety
/// `spec` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn gc_group_new(spec: *const c_char, out: *mut *mut GcGroup) -> GcStatus {
    guard(|| {
        if spec.is_null() {
            return Err(null("spec"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let text = CStr::from_ptr(spec)
            .to_str()
            .map_err(|e| Failure(GcStatus::InvalidUtf8, e.to_string()))?;
        let inner = parse_group_spec(text)?;
        *out = Box::into_raw(Box::new(GcGroup { inner }));
        Ok(())
    })
}

/// # Safety
/// `group` must come from `gc_group_new` and not be freed twice. NULL is a no-op.
#[no_mangle]
pub unsafe extern "C" fn gc_group_free(group: *mut GcGroup) {
    if !group.is_null() {
        drop(Box::from_raw(group));
    }
}

/// Order of the group, or 0 for NULL.
///
/// # Safety
/// `group` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gc_group_order(group: *const GcGroup) -> usize {
    group.as_ref().map_or(0, |g| g.inner.order())
}

/// # Safety
/// `group` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gc_group_multiply(group: *const GcGroup, a: usize, b: usize, out: *mut usize) -> GcStatus {
    guard(|| {
        let g = group_ref(group)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let order = g.order();
        for i in [a, b] {
            if i >= order {
                return Err(groupconv::Error::IndexOutOfRange { index: i, order }.into());
            }
        }
        *out = g.mul(a, b);
        Ok(())
    })
}

/// # Safety
/// `group` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gc_group_inverse(group: *const GcGroup, a: usize, out: *mut usize) -> GcStatus {
    guard(|| {
        let g = group_ref(group)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        if a >= g.order() {
            return Err(groupconv::Error::IndexOutOfRange { index: a, order: g.order() }.into());
        }
        *out = g.inv(a);
        Ok(())
    })
}

/// Writes `m ⊛ x` (or the chosen variant) to `out`. All arrays have `len`
/// entries, which must equal the group order.
///
/// # Safety
/// Pointers must reference `len` valid elements.
#[no_mangle]
pub unsafe extern "C" fn gc_convolve(
    group: *const GcGroup,
    variant: GcVariant,
    filter: *const GcComplex,
    input: *const GcComplex,
    len: usize,
    out: *mut GcComplex,
) -> GcStatus {
    guard(|| {
        let g = group_ref(group)?;
        let m = read_signal(filter, len, "filter")?;
        let x = read_signal(input, len, "input")?;
        let y = convolve_direct(g, &m, &x, variant.into())?;
        write_signal(out, len, &y)
    })
}

/// Condition data of the operation matrix, computed per irrep.
///
/// # Safety
/// `filter` must reference `len` elements and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn gc_condition(
    group: *const GcGroup,
    variant: GcVariant,
    filter: *const GcComplex,
    len: usize,
    out: *mut GcCondition,
) -> GcStatus {
    guard(|| {
        let g = group_ref(group)?;
        let m = read_signal(filter, len, "filter")?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let c = condition_data(g, &m, variant.into())?;
        *out = GcCondition { kappa: c.kappa, norm: c.norm, sigma_min: c.sigma_min };
        Ok(())
    })
}

/// Solves `M x = y` exactly, writing the unnormalized solution.
///
/// # Safety
/// Pointers must reference `len` valid elements.
#[no_mangle]
pub unsafe extern "C" fn gc_deconvolve_exact(
    group: *const GcGroup,
    variant: GcVariant,
    filter: *const GcComplex,
    output: *const GcComplex,
    len: usize,
    out: *mut GcComplex,
) -> GcStatus {
    guard(|| {
        let g = group_ref(group)?;
        let m = read_signal(filter, len, "filter")?;
        let y = read_signal(output, len, "output")?;
        let r = deconvolve_exact(g, &m, &y, variant.into())?;
        write_signal(out, len, &r.solution())
    })
}

/// Singular-value-transformation deconvolution. Writes the unit state
/// proportional to `M⁻¹ y` and, if `report` is non-NULL, its bookkeeping.
///
/// # Safety
/// Pointers must reference `len` valid elements; `report` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn gc_deconvolve_svt(
    group: *const GcGroup,
    variant: GcVariant,
    filter: *const GcComplex,
    output: *const GcComplex,
    len: usize,
    epsilon: f64,
    encoding: GcEncoding,
    out: *mut GcComplex,
    report: *mut GcSvtReport,
) -> GcStatus {
    guard(|| {
        let g = group_ref(group)?;
        let m = read_signal(filter, len, "filter")?;
        let y = read_signal(output, len, "output")?;
        let method = match encoding {
            GcEncoding::Lcu => EncodingMethod::Lcu,
            GcEncoding::Fourier => EncodingMethod::Fourier,
        };
        let r = deconvolve_svt(g, &m, &y, variant.into(), epsilon, method)?;
        write_signal(out, len, &r.state)?;
        if let Some(rep) = report.as_mut() {
            *rep = GcSvtReport {
                alpha: r.alpha,
                kappa: r.kappa,
                degree: r.degree,
                success_probability: r.success_probability,
                worst_case_probability: r.worst_case_probability,
            };
        }
        Ok(())
    })
}

/// Runs the periodic integral-equation convergence study on `[0,1]^dim`.
/// `rows` must hold `count` entries; `slope` receives the log-log slope.
///
/// # Safety
/// `n_list` and `rows` must reference `count` elements; `slope` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn gc_integral_study(
    n_list: *const usize,
    count: usize,
    dim: usize,
    lambda: f64,
    rows: *mut GcStudyRow,
    slope: *mut f64,
) -> GcStatus {
    guard(|| {
        if n_list.is_null() {
            return Err(null("n_list"));
        }
        if rows.is_null() {
            return Err(null("rows"));
        }
        let ns = slice::from_raw_parts(n_list, count);
        let study = convergence_study(ns, dim, lambda)?;
        let dst = slice::from_raw_parts_mut(rows, count);
        for (d, r) in dst.iter_mut().zip(&study.rows) {
            *d = GcStudyRow { n: r.n, error: r.error, kappa_measured: r.kappa_measured, kappa_bound: r.kappa_bound };
        }
        if let Some(s) = slope.as_mut() {
            *s = study.slope;
        }
        Ok(())
    })
}
