use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use stairdec_ffi::*;

fn last_error() -> String {
    let p = stairdec_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn bch_roundtrip() {
    unsafe {
        let mut code = ptr::null_mut();
        assert_eq!(stairdec_bch_new(256, 239, 2, &mut code), StairdecStatus::Ok);
        let (mut n, mut k, mut t, mut d0) = (0, 0, 0, 0);
        assert_eq!(stairdec_bch_params(code, &mut n, &mut k, &mut t, &mut d0), StairdecStatus::Ok);
        assert_eq!((n, k, t, d0), (256, 239, 2, 6));

        let info: Vec<u8> = (0..239).map(|i| ((i * 7 + 3) % 5 == 0) as u8).collect();
        let mut cw = vec![0u8; 256];
        assert_eq!(stairdec_bch_encode(code, info.as_ptr(), info.len(), cw.as_mut_ptr(), cw.len()), StairdecStatus::Ok);
        assert_eq!(&cw[..239], &info[..]);

        let mut rx = cw.clone();
        rx[5] ^= 1;
        rx[250] ^= 1;
        let mut out = vec![0u8; 256];
        let mut corrected = 0;
        assert_eq!(
            stairdec_bch_decode(code, rx.as_ptr(), rx.len(), out.as_mut_ptr(), &mut corrected),
            StairdecStatus::Ok
        );
        assert_eq!(out, cw);
        assert_eq!(corrected, 2);

        assert_eq!(
            stairdec_bch_encode(code, info.as_ptr(), 10, cw.as_mut_ptr(), cw.len()),
            StairdecStatus::LengthMismatch
        );
        assert!(last_error().contains("length"));
        stairdec_bch_free(code);
    }
}

#[test]
fn invalid_arguments_report_errors() {
    unsafe {
        let mut code = ptr::null_mut();
        assert_eq!(stairdec_bch_new(256, 200, 2, &mut code), StairdecStatus::InvalidArgument);
        assert!(code.is_null());
        assert!(!last_error().is_empty());
        assert_eq!(stairdec_bch_new(256, 239, 2, ptr::null_mut()), StairdecStatus::NullPointer);
        assert_eq!(
            stairdec_bch_params(ptr::null(), ptr::null_mut(), ptr::null_mut(), ptr::null_mut(), ptr::null_mut()),
            StairdecStatus::NullPointer
        );
        stairdec_bch_free(ptr::null_mut());
        stairdec_string_free(ptr::null_mut());
    }
}

#[test]
fn llr_and_quantizer() {
    unsafe {
        let ys = [0.5f64, -1.0];
        let mut llr = [0.0f64; 2];
        assert_eq!(stairdec_compute_llr(2, 0.0, 1.0, 0.5, ys.as_ptr(), 2, llr.as_mut_ptr(), 2), StairdecStatus::Ok);
        assert!((llr[0] - 2.0).abs() < 1e-12);
        assert!((llr[1] + 4.0).abs() < 1e-12);
        let mut short = [0.0f64; 1];
        assert_eq!(
            stairdec_compute_llr(4, 0.0, 1.0, 0.5, ys.as_ptr(), 2, short.as_mut_ptr(), 1),
            StairdecStatus::LengthMismatch
        );

        let (mut sat, mut step) = (0.0, 0.0);
        assert_eq!(stairdec_quantizer_params(10.0, 2, &mut sat, &mut step), StairdecStatus::Ok);
        assert_eq!((sat, step), (40.0 / 3.0, 10.0 / 3.0));
        let r = [1.0, 4.0, 12.0];
        let mut q = [0.0; 3];
        assert_eq!(stairdec_quantize(10.0, 2, r.as_ptr(), 3, q.as_mut_ptr()), StairdecStatus::Ok);
        assert_eq!(q, [0.0, 10.0 / 3.0, 10.0]);
        assert_eq!(stairdec_quantize(10.0, 0, r.as_ptr(), 3, q.as_mut_ptr()), StairdecStatus::InvalidArgument);
    }
}

#[test]
fn decoder_passes_clean_blocks() {
    unsafe {
        let mut code = ptr::null_mut();
        assert_eq!(stairdec_bch_new(256, 239, 2, &mut code), StairdecStatus::Ok);
        let mut cfg = stairdec_decoder_config_default();
        cfg.window = 3;
        cfg.iterations = 2;
        cfg.k = 1;
        let mut dec = ptr::null_mut();
        assert_eq!(stairdec_decoder_new(code, cfg, &mut dec), StairdecStatus::Ok);
        let mut w = 0;
        assert_eq!(stairdec_decoder_block_side(dec, &mut w), StairdecStatus::Ok);
        assert_eq!(w, 128);
        // The all-zero stream is a valid staircase code sequence.
        let zeros = vec![0u8; w * w];
        let rel = vec![20.0f64; w * w];
        let mut out = vec![1u8; w * w];
        let mut emitted = -1;
        let mut count = 0;
        for _ in 0..5 {
            assert_eq!(
                stairdec_decoder_push(dec, zeros.as_ptr(), rel.as_ptr(), zeros.len(), out.as_mut_ptr(), &mut emitted),
                StairdecStatus::Ok
            );
            if emitted == 1 {
                assert!(out.iter().all(|&b| b == 0));
                count += 1;
            }
        }
        assert_eq!(count, 3);
        assert_eq!(
            stairdec_decoder_push(dec, zeros.as_ptr(), ptr::null(), 7, out.as_mut_ptr(), &mut emitted),
            StairdecStatus::LengthMismatch
        );
        cfg.k = 3;
        let mut bad = ptr::null_mut();
        assert_eq!(stairdec_decoder_new(code, cfg, &mut bad), StairdecStatus::InvalidArgument);
        stairdec_decoder_free(dec);
        stairdec_bch_free(code);
    }
}

#[test]
fn simulation_from_json() {
    unsafe {
        let cfg = CString::new(
            r#"{"snr_db": 30.0, "window": 3, "iters": 1, "k": 1, "max_bits": 1, "counted_blocks": 2, "seed": 4}"#,
        )
        .unwrap();
        let mut sim = ptr::null_mut();
        assert_eq!(stairdec_simulation_new(cfg.as_ptr(), &mut sim), StairdecStatus::Ok);
        let mut csv = ptr::null_mut();
        let mut json = ptr::null_mut();
        assert_eq!(stairdec_simulation_run(sim, &mut csv, &mut json), StairdecStatus::Ok);
        let table = CStr::from_ptr(csv).to_str().unwrap().to_owned();
        let side = CStr::from_ptr(json).to_str().unwrap().to_owned();
        let mut lines = table.lines();
        assert_eq!(
            lines.next().unwrap(),
            "snr_db,pre_fec_ber,post_fec_ber,bits,bit_errors,blocks,block_errors,n_bar,eta1"
        );
        assert!(lines.next().unwrap().starts_with("30,0.000000e0,0.000000e0,"));
        let v: serde_json::Value = serde_json::from_str(&side).unwrap();
        assert_eq!(v["seed"], 4);
        assert_eq!(v["points"][0]["censored"], true);
        stairdec_string_free(csv);
        stairdec_string_free(json);
        stairdec_simulation_free(sim);

        let bad = CString::new(r#"{"nope": 1}"#).unwrap();
        let mut sim = ptr::null_mut();
        assert_eq!(stairdec_simulation_new(bad.as_ptr(), &mut sim), StairdecStatus::InvalidArgument);
        assert!(last_error().contains("nope"));
    }
}

#[test]
fn header_is_valid_c() {
    let header = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/stairdec.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for sym in ["stairdec_bch_new", "stairdec_decoder_push", "stairdec_simulation_run", "stairdec_last_error"] {
        assert!(text.contains(sym), "{sym} missing from header");
    }
    let Ok(status) = Command::new("cc").args(["-fsyntax-only", "-x", "c"]).arg(&header).status() else {
        eprintln!("no C compiler; syntax check skipped");
        return;
    };
    assert!(status.success());
}
