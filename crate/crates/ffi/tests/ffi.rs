use std::ffi::{c_void, CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use dyson_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(dyson_last_error()) }.to_string_lossy().into_owned()
}

fn c(m: &DysonMatrix2, k: usize) -> (f64, f64) {
    (m.m[k].re, m.m[k].im)
}

fn close(a: &DysonMatrix2, b: &DysonMatrix2, tol: f64) -> bool {
    a.m.iter()
        .zip(&b.m)
        .all(|(x, y)| (x.re - y.re).abs() < tol && (x.im - y.im).abs() < tol)
}

struct Model(*mut DysonYangLee);

impl Model {
    fn new(gamma: f64, omega: f64) -> Self {
        let mut h = ptr::null_mut();
        assert_eq!(unsafe { dyson_yang_lee_new(gamma, omega, &mut h) }, DysonStatus::Ok);
        assert!(!h.is_null());
        Model(h)
    }
}

impl Drop for Model {
    fn drop(&mut self) {
        unsafe { dyson_yang_lee_free(self.0) }
    }
}

#[test]
fn yang_lee_handle_reproduces_closed_forms() {
    let m = Model::new(0.5, 1.0);
    let (mut w, mut t0, mut ep, mut em) = (0.0, 0.0, 0.0, 0.0);
    let s = unsafe { dyson_yang_lee_constants(m.0, &mut w, &mut t0, &mut ep, &mut em) };
    assert_eq!(s, DysonStatus::Ok);
    let root = 0.75f64.sqrt();
    assert!((w - root).abs() < 1e-15);
    assert!((t0 + std::f64::consts::FRAC_PI_2 / root).abs() < 1e-14);
    assert!((ep - 0.5 * (root - 1.0)).abs() < 1e-15);
    assert!((em + 0.5 * (root + 1.0)).abs() < 1e-15);

    // det ρ is Ω⁴/γ² at every t
    let mut rho = DysonMatrix2::default();
    for t in [-2.0, 0.0, 0.7, 5.0] {
        assert_eq!(unsafe { dyson_yang_lee_rho(m.0, t, &mut rho) }, DysonStatus::Ok);
        let (a, _) = c(&rho, 0);
        let (d, _) = c(&rho, 3);
        let (br, bi) = c(&rho, 1);
        let det = a * d - (br * br + bi * bi);
        assert!((det - 0.5625 / 0.25).abs() < 1e-12, "{det}");
    }

    // ρ = η² with η Hermitian
    let (mut eta, mut eta_dot, mut sq) = Default::default();
    unsafe {
        assert_eq!(dyson_yang_lee_rho(m.0, 0.3, &mut rho), DysonStatus::Ok);
        assert_eq!(dyson_yang_lee_eta(m.0, 0.3, &mut eta, &mut eta_dot), DysonStatus::Ok);
        assert_eq!(dyson_hermitian_sqrt(&rho, &mut sq), DysonStatus::Ok);
    }
    assert!(close(&eta, &sq, 1e-12));

    let mut u = DysonMatrix2::default();
    assert_eq!(unsafe { dyson_yang_lee_propagator(m.0, t0, &mut u) }, DysonStatus::Ok);
    let identity = DysonMatrix2 {
        m: [
            DysonComplex { re: 1.0, im: 0.0 },
            DysonComplex::default(),
            DysonComplex::default(),
            DysonComplex { re: 1.0, im: 0.0 },
        ],
    };
    assert!(close(&u, &identity, 1e-12));

    let mut e = 0.0;
    assert_eq!(unsafe { dyson_yang_lee_energy(m.0, t0, 1, &mut e) }, DysonStatus::Ok);
    assert!((e - ep).abs() < 1e-12);

    let mut psi = DysonVector2::default();
    let mut phi = DysonVector2::default();
    unsafe {
        assert_eq!(dyson_yang_lee_psi(m.0, 1.0, -1, &mut psi), DysonStatus::Ok);
        assert_eq!(dyson_yang_lee_phi(m.0, 1.0, -1, &mut phi), DysonStatus::Ok);
    }
    let mut theta = 0.0;
    assert_eq!(unsafe { dyson_yang_lee_theta(m.0, 1.0, &mut theta) }, DysonStatus::Ok);
    assert!(theta.is_finite());
}

#[test]
fn invalid_arguments_report_status_and_message() {
    let mut h = ptr::null_mut();
    assert_eq!(
        unsafe { dyson_yang_lee_new(1.5, 1.0, &mut h) },
        DysonStatus::InvalidParameter
    );
    assert!(h.is_null());
    assert!(!last_error().is_empty());

    assert_eq!(
        unsafe { dyson_yang_lee_new(0.5, 1.0, ptr::null_mut()) },
        DysonStatus::NullPointer
    );
    let mut out = 0.0;
    assert_eq!(
        unsafe { dyson_yang_lee_theta(ptr::null(), 0.0, &mut out) },
        DysonStatus::NullPointer
    );
    let m = Model::new(0.5, 1.0);
    assert_eq!(
        unsafe { dyson_yang_lee_energy(m.0, 0.0, 0, &mut out) },
        DysonStatus::InvalidParameter
    );
    assert!(last_error().contains("branch"));

    // indefinite matrix has no Hermitian square root
    let mut bad = DysonMatrix2::default();
    bad.m[0].re = 1.0;
    bad.m[3].re = -1.0;
    let mut sq = DysonMatrix2::default();
    assert_eq!(
        unsafe { dyson_hermitian_sqrt(&bad, &mut sq) },
        DysonStatus::NotPositiveDefinite
    );
    bad.m[0].re = f64::NAN;
    assert_eq!(unsafe { dyson_hermitian_sqrt(&bad, &mut sq) }, DysonStatus::NonFinite);

    unsafe { dyson_yang_lee_free(ptr::null_mut()) };
    unsafe { dyson_metric_flow_free(ptr::null_mut()) };
}

#[test]
fn algebra_helpers() {
    // σz + ½iσx has eigenvalues ±√(1 − ¼)
    let mut m = DysonMatrix2::default();
    m.m[0].re = 1.0;
    m.m[3].re = -1.0;
    m.m[1].im = 0.5;
    m.m[2].im = 0.5;
    let mut coeffs = [DysonComplex::default(); 4];
    assert_eq!(unsafe { dyson_pauli_decompose(&m, &mut coeffs) }, DysonStatus::Ok);
    assert!((coeffs[3].re - 1.0).abs() < 1e-15);
    assert!((coeffs[1].im - 0.5).abs() < 1e-15);

    let mut values = [DysonComplex::default(); 2];
    let mut vectors = DysonMatrix2::default();
    assert_eq!(
        unsafe { dyson_eigensystem(&m, &mut values, &mut vectors) },
        DysonStatus::Ok
    );
    let root = 0.75f64.sqrt();
    assert!((values[0].re + root).abs() < 1e-14);
    assert!((values[1].re - root).abs() < 1e-14);

    let mut exceptional = DysonMatrix2::default();
    exceptional.m[1].re = 1.0;
    assert_eq!(
        unsafe { dyson_eigensystem(&exceptional, &mut values, &mut vectors) },
        DysonStatus::NonDiagonalizable
    );
}

fn yang_lee_su2(gamma: f64) -> DysonSu2 {
    // H₁ = −½[ω𝕀 + σz + iγσx]
    DysonSu2 {
        kappa0: -1.0,
        lambda0: 0.0,
        kappa: [0.0, 0.0, -1.0],
        lambda: [-gamma, 0.0, 0.0],
    }
}

#[test]
fn metric_flow_matches_closed_form() {
    let su2 = yang_lee_su2(0.5);
    let m = Model::new(0.5, 1.0);
    let (mut w, mut t0) = (0.0, 0.0);
    unsafe { dyson_yang_lee_constants(m.0, &mut w, &mut t0, ptr::null_mut(), ptr::null_mut()) };
    let mut rho0 = DysonMatrix2::default();
    unsafe { dyson_yang_lee_rho(m.0, t0, &mut rho0) };

    let mut flow = ptr::null_mut();
    let s = unsafe { dyson_metric_flow_new(&su2, &rho0, t0, t0 + 6.0, 1e-2, &mut flow) };
    assert_eq!(s, DysonStatus::Ok, "{}", last_error());
    let mut n = 0usize;
    assert_eq!(unsafe { dyson_metric_flow_len(flow, &mut n) }, DysonStatus::Ok);
    assert_eq!(n, 601);
    let (mut t, mut rho, mut exact) = (0.0, DysonMatrix2::default(), DysonMatrix2::default());
    for k in [0, 137, n - 1] {
        unsafe {
            assert_eq!(dyson_metric_flow_sample(flow, k, &mut t, &mut rho), DysonStatus::Ok);
            dyson_yang_lee_rho(m.0, t, &mut exact);
        }
        assert!(close(&rho, &exact, 1e-9));
    }
    assert_eq!(
        unsafe { dyson_metric_flow_sample(flow, n, &mut t, &mut rho) },
        DysonStatus::OutOfRange
    );
    let (mut det, mut det_t, mut breakdown) = (0.0, 0.0, 0.0);
    unsafe { dyson_metric_flow_positivity(flow, &mut det, &mut det_t, &mut breakdown) };
    assert!((det - 2.25).abs() < 1e-9);
    assert!(breakdown.is_nan());
    unsafe { dyson_metric_flow_free(flow) };

    // the ζ family with the Yang–Lee constants is the same metric
    let zeta = [0.0, -w / 0.5, -1.0 / 0.5, 0.0];
    let mut z = DysonMatrix2::default();
    for t in [t0, 0.4, 3.0] {
        unsafe {
            assert_eq!(dyson_zeta_metric(&su2, &zeta, t, &mut z), DysonStatus::Ok);
            dyson_yang_lee_rho(m.0, t, &mut exact);
        }
        assert!(close(&z, &exact, 1e-12));
    }

    let mut stat = DysonMatrix2::default();
    assert_eq!(
        unsafe { dyson_static_metric(&su2, 1.0, 0.0, &mut stat) },
        DysonStatus::Ok
    );
    let tilted = DysonSu2 {
        lambda: [-0.5, 0.0, 0.3],
        ..su2
    };
    assert_eq!(
        unsafe { dyson_static_metric(&tilted, 1.0, 0.0, &mut stat) },
        DysonStatus::UnsupportedHamiltonian
    );
}

unsafe extern "C" fn rabi(t: f64, user: *mut c_void, out: *mut DysonMatrix2) -> i32 {
    dyson_yang_lee_hermitian_h(user as *const DysonYangLee, t, out) as i32
}

unsafe extern "C" fn failing(t: f64, _user: *mut c_void, out: *mut DysonMatrix2) -> i32 {
    *out = DysonMatrix2::default();
    i32::from(t > 0.5)
}

#[test]
fn callback_propagator_matches_closed_form() {
    let m = Model::new(0.5, 1.0);
    let mut t0 = 0.0;
    unsafe {
        dyson_yang_lee_constants(m.0, ptr::null_mut(), &mut t0, ptr::null_mut(), ptr::null_mut())
    };
    let t1 = t0 + 2.3;
    let (mut u, mut exact) = (DysonMatrix2::default(), DysonMatrix2::default());
    let s = unsafe { dyson_time_ordered_u(Some(rabi), m.0.cast(), t0, t1, 1e-3, &mut u) };
    assert_eq!(s, DysonStatus::Ok, "{}", last_error());
    unsafe { dyson_yang_lee_propagator(m.0, t1, &mut exact) };
    assert!(close(&u, &exact, 1e-10));

    let s = unsafe { dyson_time_ordered_u(Some(failing), ptr::null_mut(), 0.0, 1.0, 1e-2, &mut u) };
    assert_eq!(s, DysonStatus::CallbackFailed);
    assert!(last_error().contains("callback"));
    let s = unsafe { dyson_time_ordered_u(None, ptr::null_mut(), 0.0, 1.0, 1e-2, &mut u) };
    assert_eq!(s, DysonStatus::NullPointer);
}

#[test]
fn verify_config_runs_a_scenario() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.toml");
    std::fs::write(&good, "scenario = \"yang-lee-closed\"\ndt = 0.01\n").unwrap();
    let path = CString::new(good.to_str().unwrap()).unwrap();
    let mut passed = false;
    assert_eq!(
        unsafe { dyson_verify_config(path.as_ptr(), &mut passed) },
        DysonStatus::Ok
    );
    assert!(passed);

    let missing = CString::new(dir.path().join("nope.toml").to_str().unwrap()).unwrap();
    let s = unsafe { dyson_verify_config(missing.as_ptr(), &mut passed) };
    assert_eq!(s, DysonStatus::ConfigInvalid);
}

#[test]
fn header_is_valid_c() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = root.join("include/dyson.h");
    assert!(header.exists());
    let text = std::fs::read_to_string(&header).unwrap();
    for name in ["dyson_yang_lee_new", "dyson_time_ordered_u", "DYSON_STATUS_CALLBACK_FAILED"] {
        assert!(text.contains(name), "{name} missing from header");
    }
    let Ok(_) = Command::new("cc").arg("--version").output() else {
        eprintln!("no C compiler; skipping syntax check");
        return;
    };
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    std::fs::write(
        &src,
        "#include \"dyson.h\"\n\
         int main(void) {\n\
           DysonYangLee *m = 0;\n\
           DysonMatrix2 rho;\n\
           if (dyson_yang_lee_new(0.5, 1.0, &m) != DYSON_STATUS_OK) return 1;\n\
           dyson_yang_lee_rho(m, 0.0, &rho);\n\
           dyson_yang_lee_free(m);\n\
           return rho.m[0].re > 0.0 ? 0 : 1;\n\
         }\n",
    )
    .unwrap();
    let out = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(root.join("include"))
        .arg(&src)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
