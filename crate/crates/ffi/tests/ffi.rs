use std::ffi::CStr;
use std::f64::consts::PI;
use std::ptr;

use conevol_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(conevol_last_error_message()) }
        .to_string_lossy()
        .into_owned()
}

#[test]
fn kernel_values() {
    let mut k = 0.0;
    let mut e = 0.0;
    unsafe {
        assert_eq!(conevol_complete_k(0.0, &mut k), ConevolStatus::Ok);
        assert_eq!(conevol_complete_e(0.0, &mut e), ConevolStatus::Ok);
    }
    assert!((k - PI / 2.0).abs() < 1e-15 && (e - PI / 2.0).abs() < 1e-15);
    unsafe {
        assert_eq!(conevol_complete_k(1.0, &mut k), ConevolStatus::DomainError);
        assert!(!last_error().is_empty());
        assert_eq!(conevol_e2(0.5, ptr::null_mut()), ConevolStatus::NullPointer);
    }
}

#[test]
fn volume_round_trip() {
    let opts = conevol_default_options();
    let mut out = ConevolVolume {
        volume: f64::NAN,
        error_estimate: 0.0,
        evaluations: 0,
        method: ConevolMethod::ClosedForm,
    };
    let status = unsafe {
        conevol_volume(ConevolProblem::ConeSphere, ConevolMethod::SemiAnalytic, 0.0, PI / 2.0, &opts, &mut out)
    };
    assert_eq!(status, ConevolStatus::Ok);
    assert!((out.volume - 2.0 * PI / 3.0).abs() < 1e-10);
    assert_eq!(out.method, ConevolMethod::SemiAnalytic);

    // NULL options select the defaults
    let status = unsafe {
        conevol_volume(ConevolProblem::ConeCylinder, ConevolMethod::ClosedForm, 0.0, PI / 4.0, ptr::null(), &mut out)
    };
    assert_eq!(status, ConevolStatus::Ok);
    assert!((out.volume - 2.0 * PI / 3.0).abs() < 1e-12);
}

#[test]
fn invalid_inputs_report_status() {
    let mut out = ConevolVolume {
        volume: 0.0,
        error_estimate: 0.0,
        evaluations: 0,
        method: ConevolMethod::ClosedForm,
    };
    unsafe {
        let s = conevol_volume(ConevolProblem::ConeSphere, ConevolMethod::Series, 1.5, 0.5, ptr::null(), &mut out);
        assert_eq!(s, ConevolStatus::DomainError);
        assert!(!last_error().is_empty());
        let s = conevol_volume(ConevolProblem::ConeCylinder, ConevolMethod::Series, 0.5, 0.5, ptr::null(), &mut out);
        assert_eq!(s, ConevolStatus::DomainError);
        let s = conevol_volume(ConevolProblem::ConeCylinder, ConevolMethod::ClosedForm, 0.5, 0.5, ptr::null(), ptr::null_mut());
        assert_eq!(s, ConevolStatus::NullPointer);
    }
}

#[test]
fn series_handle_lifecycle() {
    let mut handle = ptr::null_mut();
    unsafe {
        assert_eq!(conevol_series_new(0.5, 1.0, 1e-12, 64, &mut handle), ConevolStatus::Ok);
        assert!(!handle.is_null());
        let n = conevol_series_len(handle);
        assert!(n > 1 && !conevol_series_truncated(handle));

        let mut sum = 0.0;
        for i in 0..n {
            let mut t = 0.0;
            assert_eq!(conevol_series_term(handle, i, &mut t), ConevolStatus::Ok);
            sum += t;
        }
        let mut last = 0.0;
        assert_eq!(conevol_series_partial_sum(handle, n - 1, &mut last), ConevolStatus::Ok);
        assert!((sum - last).abs() < 1e-14);

        let mut v = ConevolVolume {
            volume: 0.0,
            error_estimate: 0.0,
            evaluations: 0,
            method: ConevolMethod::ClosedForm,
        };
        assert_eq!(conevol_series_volume(handle, &mut v), ConevolStatus::Ok);
        assert_eq!(v.method, ConevolMethod::Series);
        assert!((v.volume - last).abs() < 1e-14);

        let mut t = 0.0;
        assert_eq!(conevol_series_term(handle, n, &mut t), ConevolStatus::IndexOutOfRange);
        assert_eq!(conevol_series_term(ptr::null(), 0, &mut t), ConevolStatus::NullPointer);
        assert_eq!(conevol_series_len(ptr::null()), 0);

        conevol_series_free(handle);
        conevol_series_free(ptr::null_mut());
    }
}

#[test]
fn truncated_series_still_returns_handle() {
    let mut handle = ptr::null_mut();
    unsafe {
        let s = conevol_series_new(0.99, 1.4, 1e-10, 3, &mut handle);
        assert_eq!(s, ConevolStatus::TruncationWarning);
        assert!(!handle.is_null());
        assert!(conevol_series_truncated(handle));
        assert_eq!(conevol_series_len(handle), 3);
        conevol_series_free(handle);

        assert_eq!(conevol_series_new(2.0, 1.0, 1e-12, 8, &mut handle), ConevolStatus::DomainError);
        assert!(handle.is_null());
    }
}

#[test]
fn monte_carlo_is_seeded() {
    let mut a = ConevolMcEstimate { mean: 0.0, std_error: 0.0, samples: 0, seed: 0, bounding_volume: 0.0 };
    let mut b = a;
    unsafe {
        assert_eq!(conevol_mc_volume(ConevolProblem::ConeSphere, 0.3, 0.8, 100_000, 9, &mut a), ConevolStatus::Ok);
        assert_eq!(conevol_mc_volume(ConevolProblem::ConeSphere, 0.3, 0.8, 100_000, 9, &mut b), ConevolStatus::Ok);
    }
    assert_eq!(a.mean.to_bits(), b.mean.to_bits());
    assert_eq!((a.samples, a.seed), (100_000, 9));
}

#[test]
fn messages_are_static_strings() {
    let v = unsafe { CStr::from_ptr(conevol_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
    let m = unsafe { CStr::from_ptr(conevol_status_message(ConevolStatus::IndexOutOfRange)) };
    assert!(!m.to_bytes().is_empty());
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/conevol.h")).unwrap();
    for name in [
        "conevol_version",
        "conevol_volume",
        "conevol_mc_volume",
        "conevol_series_new",
        "conevol_series_free",
        "conevol_series_partial_sum",
        "CONEVOL_STATUS_TRUNCATION_WARNING",
        "typedef struct ConevolSeries ConevolSeries",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
}
