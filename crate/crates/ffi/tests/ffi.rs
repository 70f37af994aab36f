use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, SQRT_2};
use std::ffi::CStr;
use std::ptr;

use phasebit_ffi::*;

fn last_error() -> String {
    let p = pb_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn scalar_functions() {
    let mut v = 0.0;
    unsafe {
        assert_eq!(pb_wrap_angle(3.0 * PI, &mut v), PbStatus::Ok);
        assert_eq!(v, PI);
        assert_eq!(pb_wrap_angle(f64::NAN, &mut v), PbStatus::DomainError);
        assert!(last_error().contains("finite"));
        assert_eq!(pb_wrap_angle(1.0, ptr::null_mut()), PbStatus::NullPointer);
        assert!(last_error().contains("out_radians"));

        assert_eq!(pb_analytic_correlation(PI, &mut v), PbStatus::Ok);
        assert_eq!(v, -1.0);
        assert_eq!(
            pb_conditional_same_color_probability(FRAC_PI_4, &mut v),
            PbStatus::Ok
        );
        assert!((v - 0.75).abs() < 1e-15);
        assert_eq!(pb_singlet_correlation(0.3, 0.3, &mut v), PbStatus::Ok);
        assert!((v + 1.0).abs() < 1e-12);
    }
    assert_eq!(pb_dichotomic(0.0, 0.0), 1);
    assert_eq!(pb_dichotomic(PI, 0.0), -1);
}

#[test]
fn cnot_table() {
    let mut out = 0u8;
    for (c, t, want) in [(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0)] {
        assert_eq!(unsafe { pb_cnot(c, t, &mut out) }, PbStatus::Ok);
        assert_eq!(out, want);
    }
    assert_eq!(unsafe { pb_cnot(3, 0, &mut out) }, PbStatus::DomainError);
}

#[test]
fn chsh_gap() {
    let angles = [0.0, FRAC_PI_2, FRAC_PI_4, 3.0 * FRAC_PI_4];
    let (mut c, mut q) = (0.0, 0.0);
    unsafe {
        assert_eq!(pb_analytic_chsh(angles.as_ptr(), &mut c), PbStatus::Ok);
        assert_eq!(pb_chsh_quantum(angles.as_ptr(), &mut q), PbStatus::Ok);
        assert_eq!(pb_analytic_chsh(ptr::null(), &mut c), PbStatus::NullPointer);
    }
    assert!((c - 2.0).abs() < 1e-12);
    assert!((q.abs() - 2.0 * SQRT_2).abs() < 1e-12);

    let model = pb_phase_model_iid(42);
    let mut shared = PbChshResult::default();
    let mut split = PbChshResult::default();
    unsafe {
        assert_eq!(
            pb_chsh_classical(
                &model,
                angles.as_ptr(),
                20_000,
                PbChshSampling::SharedTrials,
                1,
                &mut shared
            ),
            PbStatus::Ok
        );
        assert_eq!(
            pb_chsh_classical(
                &model,
                angles.as_ptr(),
                20_000,
                PbChshSampling::SharedTrials,
                4,
                &mut split
            ),
            PbStatus::Ok
        );
        assert_eq!(
            pb_chsh_classical(
                &model,
                angles.as_ptr(),
                0,
                PbChshSampling::SharedTrials,
                1,
                &mut split
            ),
            PbStatus::UsageError
        );
    }
    assert_eq!(shared.s_value, 2.0);
    assert_eq!(shared.terms[1].n, 20_000);
    let mut again = PbChshResult::default();
    unsafe {
        pb_chsh_classical(
            &model,
            angles.as_ptr(),
            20_000,
            PbChshSampling::SharedTrials,
            4,
            &mut again,
        );
    }
    assert_eq!(again, split);
}

#[test]
fn stream_handles() {
    let model = pb_phase_model_iid(9);
    let mut stream = ptr::null_mut();
    unsafe {
        assert_eq!(pb_phase_stream_new(&model, &mut stream), PbStatus::Ok);
        let (mut t, mut phi) = (0u64, 0.0);
        let mut serial = Vec::new();
        for _ in 0..100 {
            assert_eq!(pb_phase_stream_next(stream, &mut t, &mut phi), PbStatus::Ok);
            serial.push((t, phi));
        }
        assert_eq!(pb_phase_stream_position(stream), 100);

        // chunks of a fresh stream reproduce the serial sequence
        let mut fresh = ptr::null_mut();
        pb_phase_stream_new(&model, &mut fresh);
        let mut joined = Vec::new();
        for i in 0..4 {
            let mut sub = ptr::null_mut();
            assert_eq!(
                pb_phase_stream_substream(fresh, 100, 4, i, &mut sub),
                PbStatus::Ok
            );
            while pb_phase_stream_next(sub, &mut t, &mut phi) == PbStatus::Ok {
                joined.push((t, phi));
            }
            assert!(last_error().contains("exhausted"));
            pb_phase_stream_free(sub);
        }
        assert_eq!(joined, serial);
        let mut sub = ptr::null_mut();
        assert_eq!(
            pb_phase_stream_substream(fresh, 100, 4, 4, &mut sub),
            PbStatus::UsageError
        );

        let mut est = PbCorrelationEstimate::default();
        assert_eq!(
            pb_estimate_correlation(fresh, 0.0, 0.0, 500, 2, &mut est),
            PbStatus::Ok
        );
        assert_eq!((est.mean, est.std_error, est.n), (1.0, 0.0, 500));
        assert_eq!(
            pb_estimate_correlation(fresh, 0.0, 0.0, 0, 1, &mut est),
            PbStatus::UsageError
        );

        pb_phase_stream_free(fresh);
        pb_phase_stream_free(stream);
        pb_phase_stream_free(ptr::null_mut());
    }

    let bad = PbPhaseModel {
        kind: PbPhaseKind::OscillatorEnsemble,
        ensemble_size: 0,
        ..pb_phase_model_iid(1)
    };
    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { pb_phase_stream_new(&bad, &mut s) },
        PbStatus::ConfigError
    );
    assert!(s.is_null());
}

#[test]
fn register_handles() {
    let model = pb_phase_model_iid(5);
    let angles = [0.0, FRAC_PI_4, PI];
    let mut reg = ptr::null_mut();
    unsafe {
        assert_eq!(
            pb_register_new(&model, angles.as_ptr(), 3, 0, &mut reg),
            PbStatus::Ok
        );
        assert_eq!(pb_register_len(reg), 3);

        let mut bits = [9u8; 3];
        let mut accepted = false;
        assert_eq!(
            pb_register_measure_trial(reg, bits.as_mut_ptr(), &mut accepted),
            PbStatus::Ok
        );
        assert_eq!(accepted, bits[0] == 0);

        let cap = 64;
        let mut matrix = vec![9u8; cap * 3];
        let mut ts = vec![0u64; cap];
        let mut total = 0usize;
        assert_eq!(
            pb_register_initialize(
                reg,
                1000,
                3,
                matrix.as_mut_ptr(),
                ts.as_mut_ptr(),
                cap,
                &mut total
            ),
            PbStatus::Ok
        );
        assert!(total > cap);
        for row in matrix.chunks(3) {
            assert_eq!(row[0], 0);
            assert_eq!(row[2], 1);
        }
        assert!(ts.windows(2).all(|w| w[0] < w[1]));
        assert!(ts[0] >= 1);

        // count only
        assert_eq!(
            pb_register_initialize(reg, 10, 1, ptr::null_mut(), ptr::null_mut(), 0, &mut total),
            PbStatus::Ok
        );
        assert_eq!(
            pb_register_initialize(reg, 10, 1, ptr::null_mut(), ptr::null_mut(), 4, &mut total),
            PbStatus::NullPointer
        );

        // red signal: nothing is output
        assert_eq!(pb_register_set_definite(reg, 0, 1), PbStatus::Ok);
        assert_eq!(
            pb_register_initialize(reg, 100, 1, ptr::null_mut(), ptr::null_mut(), 0, &mut total),
            PbStatus::Ok
        );
        assert_eq!(total, 0);
        assert_eq!(pb_register_set_definite(reg, 0, 2), PbStatus::DomainError);
        assert_eq!(pb_register_set_definite(reg, 5, 0), PbStatus::UsageError);

        // Hadamard on a balanced qubit makes it definite 0
        assert_eq!(pb_register_set_balanced(reg, 0, 0.0), PbStatus::Ok);
        assert_eq!(pb_register_hadamard(reg, 1, 0.0), PbStatus::Ok);
        let mut m = vec![9u8; 3 * 16];
        pb_register_initialize(reg, 100, 1, m.as_mut_ptr(), ptr::null_mut(), 16, &mut total);
        assert!(m.chunks(3).take(total.min(16)).all(|r| r[1] == 0));

        pb_register_free(reg);
        pb_register_free(ptr::null_mut());

        let mut r2 = ptr::null_mut();
        assert_eq!(
            pb_register_new(&model, angles.as_ptr(), 3, 3, &mut r2),
            PbStatus::UsageError
        );
        assert_eq!(
            pb_register_new(&model, ptr::null(), 3, 0, &mut r2),
            PbStatus::NullPointer
        );
    }
}

#[test]
fn ks_through_ffi() {
    let n = 1000;
    let grid: Vec<f64> = (0..n).map(|i| i as f64 / n as f64 * 2.0 * PI).collect();
    let (mut stat, mut crit) = (0.0, 0.0);
    unsafe {
        assert_eq!(
            pb_ks_uniformity(grid.as_ptr(), n, &mut stat, &mut crit),
            PbStatus::Ok
        );
        assert!(stat <= 1.0 / n as f64 + 1e-15);
        assert_eq!(
            pb_ks_uniformity(grid.as_ptr(), 10, &mut stat, &mut crit),
            PbStatus::UsageError
        );
    }
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(pb_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
