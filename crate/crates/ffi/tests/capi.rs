use std::ffi::CStr;
use std::ptr;

use wqed_ffi::*;

fn last_error() -> String {
    let p = wqed_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn emitter_round_trip() {
    let mut e: *mut WqedEmitter = ptr::null_mut();
    assert_eq!(unsafe { wqed_emitter_new(0.0, 0.0, 1.0, 1.0, &mut e) }, WqedStatus::Ok);
    let mut t = WqedComplex { re: 9.0, im: 9.0 };
    let mut r = t;
    assert_eq!(
        unsafe { wqed_emitter_amplitudes(e, 0.0, &mut t, &mut r) },
        WqedStatus::Ok
    );
    assert_eq!((t.re, t.im), (0.0, 0.0));
    assert_eq!((r.re, r.im), (-1.0, 0.0));

    let deltas = [-1.0, 0.0, 1.0];
    let (mut tt, mut rr) = ([0.0; 3], [0.0; 3]);
    let s = unsafe { wqed_emitter_spectrum(e, deltas.as_ptr(), 3, tt.as_mut_ptr(), rr.as_mut_ptr()) };
    assert_eq!(s, WqedStatus::Ok);
    assert_eq!(rr, [0.5, 1.0, 0.5]);
    unsafe { wqed_emitter_free(e) };
    unsafe { wqed_emitter_free(ptr::null_mut()) };
}

#[test]
fn validation_and_null_errors() {
    let mut e: *mut WqedEmitter = ptr::null_mut();
    assert_eq!(
        unsafe { wqed_emitter_new(0.0, -1.0, 1.0, 1.0, &mut e) },
        WqedStatus::InvalidArgument
    );
    assert!(e.is_null());
    assert!(last_error().starts_with("invalid parameter"), "{}", last_error());
    assert_eq!(
        unsafe { wqed_emitter_new(0.0, 0.0, 1.0, 1.0, ptr::null_mut()) },
        WqedStatus::NullPointer
    );
    let mut t = WqedComplex { re: 0.0, im: 0.0 };
    let mut r = t;
    assert_eq!(
        unsafe { wqed_emitter_amplitudes(ptr::null(), 0.0, &mut t, &mut r) },
        WqedStatus::NullPointer
    );
    assert!(last_error().contains("handle"));
}

#[test]
fn router_doublet_and_runtime_status() {
    let mut e: *mut WqedEmitter = ptr::null_mut();
    assert_eq!(unsafe { wqed_emitter_new(0.0, 0.25, 1.0, 1.0, &mut e) }, WqedStatus::Ok);
    let mut router: *mut WqedRouter = ptr::null_mut();
    assert_eq!(
        unsafe { wqed_router_new(e, 0.025, 8.0, -0.5, &mut router) },
        WqedStatus::Ok
    );
    let mut split = 0.0;
    assert_eq!(unsafe { wqed_router_ats_splitting(router, &mut split) }, WqedStatus::Ok);
    assert!((split / 8.0 - 1.0).abs() < 0.1);
    unsafe { wqed_router_free(router) };

    let mut bare: *mut WqedRouter = ptr::null_mut();
    assert_eq!(
        unsafe { wqed_router_new(e, 0.025, 0.0, -0.5, &mut bare) },
        WqedStatus::Ok
    );
    assert_eq!(
        unsafe { wqed_router_ats_splitting(bare, &mut split) },
        WqedStatus::Runtime
    );
    assert!(last_error().contains("doublet"));
    unsafe { wqed_router_free(bare) };
    unsafe { wqed_emitter_free(e) };
}

#[test]
fn g2_through_the_abi() {
    let mut e: *mut WqedEmitter = ptr::null_mut();
    assert_eq!(unsafe { wqed_emitter_new(10.0, 1.0, 3.0, 1.0, &mut e) }, WqedStatus::Ok);
    let taus = [0.0, 40.0];
    let mut g2 = [0.0; 2];
    let s = unsafe { wqed_emitter_g2_coherent(e, 10.0, 1.0, 0.5, taus.as_ptr(), 2, g2.as_mut_ptr()) };
    assert_eq!(s, WqedStatus::Ok);
    assert!(g2[0] > 1.0);
    assert!((g2[1] - 1.0).abs() < 1e-12);
    let s = unsafe { wqed_emitter_g2_coherent(e, 10.0, 1.0, 2.0, taus.as_ptr(), 2, g2.as_mut_ptr()) };
    assert_eq!(s, WqedStatus::InvalidArgument);
    unsafe { wqed_emitter_free(e) };
}

#[test]
fn medium_and_blockade() {
    let mut m: *mut WqedMedium = ptr::null_mut();
    assert_eq!(
        unsafe { wqed_medium_new(40.0, 10.0, 1.0, 1.0, 4.6, 1.0, &mut m) },
        WqedStatus::Ok
    );
    let (mut ev, mut kappa) = (0.0, 0.0);
    assert_eq!(
        unsafe { wqed_medium_ground_state(m, &mut ev, &mut kappa) },
        WqedStatus::Ok
    );
    assert!(ev < 0.0 && kappa > 0.0);
    unsafe { wqed_medium_free(m) };

    let mut p = 0.0;
    assert_eq!(unsafe { wqed_blockade_probability(10.0, 10.0, &mut p) }, WqedStatus::Ok);
    assert!((p - (1.0 - (-10.0f64).exp() / 10f64.sqrt())).abs() < 1e-15);
    assert_eq!(
        unsafe { wqed_blockade_probability(0.0, 1.0, &mut p) },
        WqedStatus::InvalidArgument
    );
}

#[test]
fn version_is_package_version() {
    let v = unsafe { CStr::from_ptr(wqed_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
