//! C ABI over `wqed-core`.
//!
//! Objects are opaque handles created by `*_new` and released by `*_free`.
//! Every fallible call returns a [`WqedStatus`]; on failure the message is
//! available from [`wqed_last_error`] on the same thread. Panics never
//! cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use wqed_core::analytic2le::{g2_transmitted, one_photon_amplitudes};
use wqed_core::lattice::{analytic_transmission, transmission_from_run, PacketSpec};
use wqed_core::params::{CoherentInput, EmitterParams, ThreeLevelParams};
use wqed_core::router3le::{ats_splitting, router_amplitude};
use wqed_core::rydberg::{
    blockade_probability, bound_states, default_field, evolve_psi, g2_and_phase, RydbergMedium, SolverOptions,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WqedStatus {
    Ok = 0,
    NullPointer = 1,
    /// Parameters rejected by the model.
    InvalidArgument = 2,
    /// A valid run aborted (boundary hit, norm drift, no doublet, ...).
    Runtime = 3,
    Panic = 4,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WqedComplex {
    pub re: f64,
    pub im: f64,
}

/// Two-level emitter parameters.
pub struct WqedEmitter {
    inner: EmitterParams,
}

/// Three-level router parameters.
pub struct WqedRouter {
    inner: ThreeLevelParams,
}

/// Rydberg medium.
pub struct WqedMedium {
    inner: RydbergMedium,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

enum Failure {
    Null(&'static str),
    Model(wqed_core::Error),
}

impl From<wqed_core::Error> for Failure {
    fn from(e: wqed_core::Error) -> Self {
        Failure::Model(e)
    }
}

fn guard<F: FnOnce() -> Result<(), Failure>>(f: F) -> WqedStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => WqedStatus::Ok,
        Ok(Err(Failure::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            WqedStatus::NullPointer
        }
        Ok(Err(Failure::Model(e))) => {
            let status = if e.is_validation() {
                WqedStatus::InvalidArgument
            } else {
                WqedStatus::Runtime
            };
            set_error(e.to_string());
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            WqedStatus::Panic
        }
    }
}

unsafe fn get<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Failure> {
    // SAFETY: the caller passes either null or a live handle.
    unsafe { p.as_ref() }.ok_or(Failure::Null(what))
}

unsafe fn out<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, Failure> {
    // SAFETY: the caller passes either null or a valid, writable location.
    unsafe { p.as_mut() }.ok_or(Failure::Null(what))
}

unsafe fn input<'a>(p: *const f64, n: usize, what: &'static str) -> Result<&'a [f64], Failure> {
    if n == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    // SAFETY: non-null and the caller guarantees `n` readable elements.
    Ok(unsafe { slice::from_raw_parts(p, n) })
}

unsafe fn output<'a>(p: *mut f64, n: usize, what: &'static str) -> Result<&'a mut [f64], Failure> {
    if n == 0 {
        return Ok(&mut []);
    }
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    // SAFETY: non-null and the caller guarantees `n` writable elements.
    Ok(unsafe { slice::from_raw_parts_mut(p, n) })
}

fn boxed<T>(slot: &mut *mut T, value: T) {
    *slot = Box::into_raw(Box::new(value));
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn wqed_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => c"",
    };
    VERSION.as_ptr()
}

/// Message of the last failure on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn wqed_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `out_handle` must be a valid location for a handle pointer.
#[no_mangle]
pub unsafe extern "C" fn wqed_emitter_new(
    omega_e: f64,
    loss_rate: f64,
    guided_rate: f64,
    group_velocity: f64,
    out_handle: *mut *mut WqedEmitter,
) -> WqedStatus {
    guard(|| {
        let slot = unsafe { out(out_handle, "out_handle") }?;
        *slot = ptr::null_mut();
        let inner = EmitterParams::new(omega_e, loss_rate, guided_rate, group_velocity)?;
        boxed(slot, WqedEmitter { inner });
        Ok(())
    })
}

/// # Safety
/// `handle` must be null or come from [`wqed_emitter_new`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn wqed_emitter_free(handle: *mut WqedEmitter) {
    if !handle.is_null() {
        // SAFETY: allocated by `Box::into_raw` in `wqed_emitter_new`.
        drop(unsafe { Box::from_raw(handle) });
    }
}

/// One-photon amplitudes at detuning `delta`.
///
/// # Safety
/// `handle` must be a live emitter; `t` and `r` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wqed_emitter_amplitudes(
    handle: *const WqedEmitter,
    delta: f64,
    t: *mut WqedComplex,
    r: *mut WqedComplex,
) -> WqedStatus {
    guard(|| {
        let e = unsafe { get(handle, "handle") }?;
        let (t, r) = (unsafe { out(t, "t") }?, unsafe { out(r, "r") }?);
        let a = one_photon_amplitudes(&e.inner, delta);
        *t = WqedComplex { re: a.t.re, im: a.t.im };
        *r = WqedComplex { re: a.r.re, im: a.r.im };
        Ok(())
    })
}

/// `T` and `R` at `n` detunings.
///
/// # Safety
/// `deltas`, `trans` and `refl` must each hold `n` elements.
#[no_mangle]
pub unsafe extern "C" fn wqed_emitter_spectrum(
    handle: *const WqedEmitter,
    deltas: *const f64,
    n: usize,
    trans: *mut f64,
    refl: *mut f64,
) -> WqedStatus {
    guard(|| {
        let e = unsafe { get(handle, "handle") }?;
        let d = unsafe { input(deltas, n, "deltas") }?;
        let t = unsafe { output(trans, n, "trans") }?;
        let r = unsafe { output(refl, n, "refl") }?;
        for i in 0..n {
            let a = one_photon_amplitudes(&e.inner, d[i]);
            t[i] = a.transmission();
            r[i] = a.reflection();
        }
        Ok(())
    })
}

/// Transmitted `g2(tau)` for a Gaussian coherent packet `(k0, delta_k, n_bar)`.
///
/// # Safety
/// `taus` and `g2` must each hold `n` elements.
#[no_mangle]
pub unsafe extern "C" fn wqed_emitter_g2_coherent(
    handle: *const WqedEmitter,
    k0: f64,
    delta_k: f64,
    n_bar: f64,
    taus: *const f64,
    n: usize,
    g2: *mut f64,
) -> WqedStatus {
    guard(|| {
        let e = unsafe { get(handle, "handle") }?;
        let taus = unsafe { input(taus, n, "taus") }?;
        let g2 = unsafe { output(g2, n, "g2") }?;
        let input = CoherentInput::new(k0, delta_k, n_bar)?;
        g2.copy_from_slice(&g2_transmitted(&e.inner, &input, taus)?);
        Ok(())
    })
}

/// # Safety
/// `base` must be a live emitter; `out_handle` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wqed_router_new(
    base: *const WqedEmitter,
    metastable_loss: f64,
    control_rabi: f64,
    control_detuning: f64,
    out_handle: *mut *mut WqedRouter,
) -> WqedStatus {
    guard(|| {
        let slot = unsafe { out(out_handle, "out_handle") }?;
        *slot = ptr::null_mut();
        let b = unsafe { get(base, "base") }?;
        let inner = ThreeLevelParams::new(b.inner, metastable_loss, control_rabi, control_detuning)?;
        boxed(slot, WqedRouter { inner });
        Ok(())
    })
}

/// # Safety
/// `handle` must be null or come from [`wqed_router_new`].
#[no_mangle]
pub unsafe extern "C" fn wqed_router_free(handle: *mut WqedRouter) {
    if !handle.is_null() {
        // SAFETY: allocated by `Box::into_raw` in `wqed_router_new`.
        drop(unsafe { Box::from_raw(handle) });
    }
}

/// # Safety
/// `handle` must be a live router; `t` and `r` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wqed_router_amplitudes(
    handle: *const WqedRouter,
    delta: f64,
    t: *mut WqedComplex,
    r: *mut WqedComplex,
) -> WqedStatus {
    guard(|| {
        let p = unsafe { get(handle, "handle") }?;
        let (t, r) = (unsafe { out(t, "t") }?, unsafe { out(r, "r") }?);
        let a = router_amplitude(&p.inner, delta);
        *t = WqedComplex { re: a.t.re, im: a.t.im };
        *r = WqedComplex { re: a.r.re, im: a.r.im };
        Ok(())
    })
}

/// Autler-Townes doublet separation; `WQED_STATUS_RUNTIME` when no doublet exists.
///
/// # Safety
/// `handle` must be a live router; `splitting` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wqed_router_ats_splitting(handle: *const WqedRouter, splitting: *mut f64) -> WqedStatus {
    guard(|| {
        let p = unsafe { get(handle, "handle") }?;
        let s = unsafe { out(splitting, "splitting") }?;
        *s = ats_splitting(&p.inner)?.splitting;
        Ok(())
    })
}

/// Lattice wave-packet transmission for a resonant-band carrier `k0`, with
/// `guided_rate` and `delta` in units of the hopping.
///
/// # Safety
/// `trans` and `refl` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wqed_lattice_transmission(
    n_sites: usize,
    hopping: f64,
    k0: f64,
    guided_rate: f64,
    delta: f64,
    sigma: f64,
    trans: *mut f64,
    refl: *mut f64,
    analytic: *mut f64,
) -> WqedStatus {
    guard(|| {
        let t = unsafe { out(trans, "trans") }?;
        let r = unsafe { out(refl, "refl") }?;
        let a = unsafe { out(analytic, "analytic") }?;
        let model = wqed_core::cli::detuned_model(n_sites, hopping, k0, guided_rate, delta)?;
        let packet = PacketSpec::new(k0, sigma)?;
        let run = transmission_from_run(&model, &packet)?;
        *t = run.transmission;
        *r = run.reflection;
        *a = analytic_transmission(&model, &packet)?.packet_average;
        Ok(())
    })
}

/// # Safety
/// `out_handle` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wqed_medium_new(
    od: f64,
    od_b: f64,
    r_b: f64,
    gamma: f64,
    delta: f64,
    omega_c: f64,
    out_handle: *mut *mut WqedMedium,
) -> WqedStatus {
    guard(|| {
        let slot = unsafe { out(out_handle, "out_handle") }?;
        *slot = ptr::null_mut();
        let inner = RydbergMedium::from_optical_depths(od, od_b, r_b, gamma, delta, omega_c)?;
        boxed(slot, WqedMedium { inner });
        Ok(())
    })
}

/// # Safety
/// `handle` must be null or come from [`wqed_medium_new`].
#[no_mangle]
pub unsafe extern "C" fn wqed_medium_free(handle: *mut WqedMedium) {
    if !handle.is_null() {
        // SAFETY: allocated by `Box::into_raw` in `wqed_medium_new`.
        drop(unsafe { Box::from_raw(handle) });
    }
}

/// Ground bound state of the effective well: eigenvalue and decay constant.
///
/// # Safety
/// `handle` must be a live medium; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn wqed_medium_ground_state(
    handle: *const WqedMedium,
    eigenvalue: *mut f64,
    kappa: *mut f64,
) -> WqedStatus {
    guard(|| {
        let m = unsafe { get(handle, "handle") }?;
        let (e, k) = (unsafe { out(eigenvalue, "eigenvalue") }?, unsafe {
            out(kappa, "kappa")
        }?);
        let states = bound_states(&m.inner)?;
        *e = states[0].eigenvalue;
        *k = states[0].kappa;
        Ok(())
    })
}

/// Propagates the pair wavefunction through the medium on the default grid
/// and samples `g2` and the conditional phase at `n` delays.
///
/// # Safety
/// `taus`, `g2` and `phase` must each hold `n` elements.
#[no_mangle]
pub unsafe extern "C" fn wqed_medium_correlations(
    handle: *const WqedMedium,
    taus: *const f64,
    n: usize,
    g2: *mut f64,
    phase: *mut f64,
) -> WqedStatus {
    guard(|| {
        let m = unsafe { get(handle, "handle") }?;
        let taus = unsafe { input(taus, n, "taus") }?;
        let g2 = unsafe { output(g2, n, "g2") }?;
        let phase = unsafe { output(phase, n, "phase") }?;
        let run = evolve_psi(&m.inner, &default_field(&m.inner)?, SolverOptions::default())?;
        let c = g2_and_phase(&m.inner, &run.psi, taus)?;
        g2.copy_from_slice(&c.g2);
        phase.copy_from_slice(&c.phase);
        Ok(())
    })
}

/// `1 - OD^{-1/2} exp(-OD_B)`.
///
/// # Safety
/// `p` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wqed_blockade_probability(od: f64, od_b: f64, p: *mut f64) -> WqedStatus {
    guard(|| {
        let p = unsafe { out(p, "p") }?;
        *p = blockade_probability(od, od_b)?;
        Ok(())
    })
}
