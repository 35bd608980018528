use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use legendre_index_ffi::*;

fn last_error() -> String {
    let n = unsafe { li_last_error_message(ptr::null_mut(), 0) };
    let mut buf = vec![0 as c_char; n + 1];
    unsafe { li_last_error_message(buf.as_mut_ptr(), buf.len()) };
    unsafe { CStr::from_ptr(buf.as_ptr()) }
        .to_string_lossy()
        .into_owned()
}

fn params(mu: f64) -> *mut LiParams {
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { li_params_new(mu, &mut p) }, LiStatus::Ok);
    p
}

fn function(spec: &str) -> *mut LiFunction {
    let spec = CString::new(spec).unwrap();
    let mut f = ptr::null_mut();
    assert_eq!(
        unsafe { li_function_parse(spec.as_ptr(), &mut f) },
        LiStatus::Ok,
        "{}",
        last_error()
    );
    f
}

#[test]
fn kernel_routes_agree() {
    let p = params(-0.5);
    let mut vals = [0.0; 3];
    for (v, m) in vals.iter_mut().zip([
        LiKernelMethod::Direct,
        LiKernelMethod::MellinBarnes,
        LiKernelMethod::FourierCosine,
    ]) {
        let mut err = f64::NAN;
        assert_eq!(
            unsafe { li_kernel(p, m, 2.0, 1.0, v, &mut err) },
            LiStatus::Ok
        );
        assert!(err.is_finite());
    }
    for v in &vals[1..] {
        assert!((v - vals[0]).abs() < 1e-10 * vals[0]);
    }
    assert!(last_error().is_empty());
    unsafe { li_params_free(p) };
}

#[test]
fn status_and_messages() {
    let mut p = ptr::null_mut();
    assert_eq!(
        unsafe { li_params_new(0.5, &mut p) },
        LiStatus::InvalidParameter
    );
    assert!(p.is_null());
    assert!(!last_error().is_empty());

    assert_eq!(
        unsafe { li_params_new(-0.5, ptr::null_mut()) },
        LiStatus::NullPointer
    );
    let p = params(-0.5);
    let mut v = 0.0;
    assert_eq!(
        unsafe {
            li_kernel(
                p,
                LiKernelMethod::Direct,
                -1.0,
                1.0,
                &mut v,
                ptr::null_mut(),
            )
        },
        LiStatus::Domain
    );
    assert_eq!(
        unsafe {
            li_kernel(
                ptr::null(),
                LiKernelMethod::Direct,
                1.0,
                1.0,
                &mut v,
                ptr::null_mut(),
            )
        },
        LiStatus::NullPointer
    );
    let bad = CString::new("bessel(a=1)").unwrap();
    let mut f = ptr::null_mut();
    assert_eq!(
        unsafe { li_function_parse(bad.as_ptr(), &mut f) },
        LiStatus::InvalidParameter
    );
    let msg = unsafe { CStr::from_ptr(li_status_message(LiStatus::Capability)) };
    assert_eq!(msg.to_str().unwrap(), "outside the supported range");
    let version = unsafe { CStr::from_ptr(li_version()) };
    assert_eq!(version.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
    unsafe { li_params_free(p) };
    // Freeing null is a no-op.
    unsafe {
        li_params_free(ptr::null_mut());
        li_function_free(ptr::null_mut());
        li_wedge_free(ptr::null_mut());
    }
}

#[test]
fn last_error_truncates() {
    let mut p = ptr::null_mut();
    unsafe { li_params_new(2.0, &mut p) };
    let full = last_error();
    let mut buf = [1 as c_char; 8];
    let n = unsafe { li_last_error_message(buf.as_mut_ptr(), buf.len()) };
    assert_eq!(n, full.len());
    assert_eq!(buf[7], 0);
    let head = unsafe { CStr::from_ptr(buf.as_ptr()) }.to_bytes();
    assert_eq!(head, &full.as_bytes()[..7]);
}

#[test]
fn tabulated_matches_builtin() {
    let xs: Vec<f64> = (0..=2000).map(|i| i as f64 * 0.01).collect();
    let ys: Vec<f64> = xs.iter().map(|x| (-x).exp()).collect();
    let mut tab = ptr::null_mut();
    assert_eq!(
        unsafe {
            li_function_from_table(
                xs.as_ptr(),
                ys.as_ptr(),
                xs.len(),
                LiInterpolation::Cubic,
                &mut tab,
            )
        },
        LiStatus::Ok
    );
    let mut v = 0.0;
    assert_eq!(
        unsafe { li_function_eval(tab, 0.505, &mut v) },
        LiStatus::Ok
    );
    assert!((v - (-0.505f64).exp()).abs() < 1e-8);

    let builtin = function("exp_decay(a=1)");
    let p = params(-0.5);
    let taus = [0.5, 1.0];
    let (mut a, mut b) = ([0.0; 2], [0.0; 2]);
    assert_eq!(
        unsafe { li_forward_f(tab, p, taus.as_ptr(), 2, a.as_mut_ptr(), ptr::null_mut()) },
        LiStatus::Ok
    );
    assert_eq!(
        unsafe {
            li_forward_f(
                builtin,
                p,
                taus.as_ptr(),
                2,
                b.as_mut_ptr(),
                ptr::null_mut(),
            )
        },
        LiStatus::Ok
    );
    for i in 0..2 {
        assert!((a[i] - b[i]).abs() < 1e-6 * b[i].abs(), "{a:?} vs {b:?}");
    }

    let unsorted = [0.0, 2.0, 1.0, 3.0];
    let mut t = ptr::null_mut();
    assert_eq!(
        unsafe {
            li_function_from_table(
                unsorted.as_ptr(),
                unsorted.as_ptr(),
                4,
                LiInterpolation::Linear,
                &mut t,
            )
        },
        LiStatus::InvalidParameter
    );
    unsafe {
        li_function_free(tab);
        li_function_free(builtin);
        li_params_free(p);
    }
}

#[test]
fn g_round_trip_and_wedge() {
    let g = function("gauss_even_tau(a=1)");
    let p = params(0.25);
    let taus = [0.5, 1.0];
    let mut rec = [0.0; 2];
    let mut errs = [0.0; 2];
    assert_eq!(
        unsafe {
            li_reconstruct_g(
                g,
                p,
                0.0,
                taus.as_ptr(),
                2,
                rec.as_mut_ptr(),
                errs.as_mut_ptr(),
            )
        },
        LiStatus::Ok,
        "{}",
        last_error()
    );
    for (t, r) in taus.iter().zip(&rec) {
        let want = t * t * (-t * t).exp();
        assert!((r - want).abs() < 5e-2 * want, "τ={t}: {r} vs {want}");
    }

    let mut w = ptr::null_mut();
    assert_eq!(
        unsafe { li_wedge_new(std::f64::consts::PI, p, g, &mut w) },
        LiStatus::Ok
    );
    let (mut zero, mut top, mut gx) = (1.0, 0.0, 0.0);
    unsafe {
        assert_eq!(li_wedge_solution(w, 1.0, 0.0, &mut zero), LiStatus::Ok);
        assert_eq!(
            li_wedge_solution(w, 1.0, std::f64::consts::PI, &mut top),
            LiStatus::Ok
        );
        let x = 1.0;
        assert_eq!(
            li_forward_g(g, p, &x, 1, &mut gx, ptr::null_mut()),
            LiStatus::Ok
        );
    }
    assert_eq!(zero, 0.0);
    assert!((top - gx).abs() <= 1e-8 * gx.abs());

    let mut bad = ptr::null_mut();
    assert_eq!(
        unsafe { li_wedge_new(7.0, p, g, &mut bad) },
        LiStatus::InvalidParameter
    );
    unsafe {
        li_wedge_free(w);
        li_function_free(g);
        li_params_free(p);
    }
}

/// Builds the static library in the profile and target directory of this
/// test binary and returns its path. Compiling integration tests alone does
/// not emit the `staticlib` artifact.
fn static_library() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().unwrap().parent().unwrap();
    let target_dir = profile_dir.parent().unwrap();
    let profile = match profile_dir.file_name().unwrap().to_str().unwrap() {
        "debug" => "dev",
        other => other,
    };
    let status = Command::new(env!("CARGO"))
        .args([
            "build",
            "--lib",
            "-p",
            env!("CARGO_PKG_NAME"),
            "--profile",
            profile,
        ])
        .arg("--target-dir")
        .arg(target_dir)
        .status()
        .expect("cargo runs");
    assert!(status.success(), "building the static library failed");
    profile_dir.join("liblegendre_index_ffi.a")
}

#[test]
fn c_program_links_against_header() {
    let crate_dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let lib = static_library();
    assert!(lib.exists(), "static library missing at {}", lib.display());
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("smoke");
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(crate_dir.join("include"))
        .arg(crate_dir.join("tests").join("smoke.c"))
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl"])
        .arg("-o")
        .arg(&out)
        .status()
        .expect("C compiler runs");
    assert!(status.success());
    let run = Command::new(&out).output().unwrap();
    assert!(
        run.status.success(),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );
    let stdout = String::from_utf8(run.stdout).unwrap();
    assert!(stdout.starts_with(env!("CARGO_PKG_VERSION")));
}
