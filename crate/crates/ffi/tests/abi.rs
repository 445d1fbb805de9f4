use std::ffi::{CStr, CString};
use std::ptr;

use markov_curves_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(mc_last_error_message()) }
        .to_string_lossy()
        .into_owned()
}

fn builtin(id: &str) -> *mut McGerm {
    let id = CString::new(id).unwrap();
    let mut germ = ptr::null_mut();
    assert_eq!(unsafe { mc_germ_builtin(id.as_ptr(), &mut germ) }, McStatus::Ok);
    assert!(!germ.is_null());
    germ
}

#[test]
fn version_is_package_version() {
    let v = unsafe { CStr::from_ptr(mc_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn germ_queries() {
    let germ = builtin("cusp_2_3");
    unsafe {
        let mut k = 0;
        assert_eq!(mc_germ_multiplicity(germ, &mut k), McStatus::Ok);
        assert_eq!(k, 2);
        let mut dim = 0;
        assert_eq!(mc_germ_ambient_dim(germ, &mut dim), McStatus::Ok);
        assert_eq!(dim, 2);
        let (mut re, mut im) = ([0.0; 2], [0.0; 2]);
        assert_eq!(
            mc_germ_eval(germ, 0.5, 0.0, re.as_mut_ptr(), im.as_mut_ptr(), 2),
            McStatus::Ok
        );
        assert_eq!((re, im), ([0.25, 0.125], [0.0, 0.0]));
        assert_eq!(
            mc_germ_eval(germ, 0.5, 0.0, re.as_mut_ptr(), im.as_mut_ptr(), 1),
            McStatus::BufferTooSmall
        );
        let mut tangent = [0.0; 2];
        assert_eq!(mc_germ_tangent(germ, tangent.as_mut_ptr(), 2), McStatus::Ok);
        assert_eq!(tangent, [1.0, 0.0]);
        let mut d = -1.0;
        assert_eq!(mc_geodesic_distance(germ, 0.0, 0.0, 0.0, 0.0, &mut d), McStatus::Ok);
        assert_eq!(d, 0.0);
        let mut m = 0.0;
        assert_eq!(mc_markov_factor_germ(germ, 0.5, 40, 1, &mut m), McStatus::Ok);
        // Degree 1: the trace spans x ∈ [0, ε²], extremal p = 2x/ε² − 1.
        assert!((m - 8.0).abs() < 1e-6, "{m}");
        mc_germ_free(germ);
    }
}

#[test]
fn errors_set_status_and_message() {
    let id = CString::new("cusp_9_9").unwrap();
    let mut germ = ptr::null_mut();
    assert_eq!(
        unsafe { mc_germ_builtin(id.as_ptr(), &mut germ) },
        McStatus::UnknownGerm
    );
    assert!(germ.is_null());
    assert!(last_error().contains("cusp_2_3"), "{}", last_error());
    assert_eq!(
        unsafe { mc_germ_builtin(ptr::null(), &mut germ) },
        McStatus::NullPointer
    );
    let mut k = 0;
    assert_eq!(
        unsafe { mc_germ_multiplicity(ptr::null(), &mut k) },
        McStatus::NullPointer
    );
    let text = CString::new("k = 2\n").unwrap();
    assert_eq!(
        unsafe { mc_germ_from_text(text.as_ptr(), ptr::null(), &mut germ) },
        McStatus::Parse
    );
    let path = CString::new("/nonexistent/germ.txt").unwrap();
    assert_eq!(unsafe { mc_germ_from_file(path.as_ptr(), &mut germ) }, McStatus::Io);
    let g = builtin("interval_interior");
    unsafe {
        let (mut re, mut im) = ([0.0; 2], [0.0; 2]);
        assert_eq!(
            mc_germ_eval(g, 2.0, 0.0, re.as_mut_ptr(), im.as_mut_ptr(), 2),
            McStatus::InvalidArgument
        );
        mc_germ_free(g);
        mc_germ_free(ptr::null_mut());
    }
    let mut k = 0;
    let g = builtin("cusp_3_4");
    assert_eq!(unsafe { mc_germ_multiplicity(g, &mut k) }, McStatus::Ok);
    assert_eq!(last_error(), "");
    unsafe { mc_germ_free(g) };
}

#[test]
fn germ_from_text() {
    let text = CString::new(
        "ambient_dim = 2\nk = 3\nc_re = 1\nterm.2.4 = 1, 0\nstar_plus = 0\nstar_minus = 0\npoint_class = singular\n",
    )
    .unwrap();
    let name = CString::new("t3t4").unwrap();
    let mut germ = ptr::null_mut();
    assert_eq!(
        unsafe { mc_germ_from_text(text.as_ptr(), name.as_ptr(), &mut germ) },
        McStatus::Ok,
        "{}",
        last_error()
    );
    let mut k = 0;
    assert_eq!(unsafe { mc_germ_multiplicity(germ, &mut k) }, McStatus::Ok);
    assert_eq!(k, 3);
    unsafe { mc_germ_free(germ) };
}

#[test]
fn green_functions() {
    let expected = (2.0f64 + 3f64.sqrt()).ln();
    assert!((mc_green_interval(2.0, 0.0) - expected).abs() < 1e-14);
    assert_eq!(mc_green_interval(0.3, 0.0), 0.0);
    assert!(mc_green_interval(f64::NAN, 0.0).is_nan());
    let mut v = 0.0;
    assert_eq!(unsafe { mc_green_segment(-1.0, 0.0, 0.0, 1.0, &mut v) }, McStatus::Ok);
    assert!((v - (3.0f64 + 8f64.sqrt()).ln()).abs() < 1e-14);
    assert_eq!(
        unsafe { mc_green_segment(0.0, 0.0, 1.0, 1.0, &mut v) },
        McStatus::InvalidArgument
    );
    let (mut value, mut slack) = (0.0, 0.0);
    assert_eq!(
        unsafe { mc_siciak_interval(-1.0, 1.0, 401, 8, 16, 2.0, 0.0, &mut value, &mut slack) },
        McStatus::Ok
    );
    // (1/8)·log|T_8(2)| is the degree-8 extremal value at 2.
    let w = 2.0 + 3f64.sqrt();
    let t8 = 0.5 * (w.powi(8) + w.powi(-8));
    assert!((value - t8.ln() / 8.0).abs() <= slack + 1e-9, "{value}");
}

#[test]
fn markov_factor_from_samples_and_scaling_fit() {
    let samples: Vec<f64> = (0..=400)
        .map(|i| -(std::f64::consts::PI * f64::from(i) / 400.0).cos())
        .collect();
    let mut m = 0.0;
    assert_eq!(
        unsafe { mc_markov_factor_samples(samples.as_ptr(), samples.len(), 1.0, 4, &mut m) },
        McStatus::Ok
    );
    assert!((m - 16.0).abs() < 0.16, "{m}");
    assert_eq!(
        unsafe { mc_markov_factor_samples(ptr::null(), 3, 1.0, 4, &mut m) },
        McStatus::NullPointer
    );
    let germ = builtin("interval_boundary");
    let degrees = [2u32, 4, 8];
    let eps = [1.0, 0.5, 0.25, 0.125];
    let (mut a, mut b) = (0.0, 0.0);
    let status = unsafe {
        mc_scaling_fit(
            germ,
            degrees.as_ptr(),
            degrees.len(),
            eps.as_ptr(),
            eps.len(),
            100,
            &mut a,
            &mut b,
        )
    };
    assert_eq!(status, McStatus::Ok, "{}", last_error());
    assert!((a - 2.0).abs() < 0.1 && (b - 1.0).abs() < 0.05, "{a} {b}");
    let status = unsafe { mc_scaling_fit(germ, degrees.as_ptr(), 0, eps.as_ptr(), eps.len(), 100, &mut a, &mut b) };
    assert_eq!(status, McStatus::Numeric);
    unsafe { mc_germ_free(germ) };
}
