//! End-to-end acceptance checks. Each test prints one `criterion N: PASS|FAIL`
//! line to stdout, outside the libtest capture, and then asserts.

use std::io::Write;
use std::sync::{Arc, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stairdec::bch::{BchCode, BddOutcome, CodeSpec};
use stairdec::channel::{ChannelParams, Constellation};
use stairdec::decoder::Variant;
use stairdec::marking::{Quantizer, Thresholds};
use stairdec::sim::{write_csv, PointResult, SimConfig, Simulator, StopRule};
use stairdec::staircase::{component_word, scc_encode, ComponentWordRef, SccBlock, SccParams};

const OPERATING_SNR: f64 = 6.57;
const FRAME_INFO_BITS: u64 = 40 * 128 * 111;
const OPERATING_FRAMES: u64 = 250;

fn report(n: u32, pass: bool, detail: &str) {
    let line = format!("criterion {n}: {} ({detail})\n", if pass { "PASS" } else { "FAIL" });
    let mut out = std::io::stdout().lock();
    out.write_all(line.as_bytes()).unwrap();
    out.flush().unwrap();
}

fn setup(variant: Variant, snr: f64, quant_bits: u32, stop: StopRule) -> SimConfig {
    let mut c = SimConfig { snr_db: vec![snr], stop, seed: 2024, ..SimConfig::default() };
    c.decoder.variant = variant;
    c.decoder.quant_bits = quant_bits;
    c
}

fn fixed_frames(frames: u64) -> StopRule {
    StopRule { min_block_errors: u64::MAX, min_bits: 0, max_bits: frames * FRAME_INFO_BITS }
}

fn until_errors(block_errors: u64, max_frames: u64) -> StopRule {
    StopRule { min_block_errors: block_errors, min_bits: 0, max_bits: max_frames * FRAME_INFO_BITS }
}

fn point(cfg: SimConfig) -> PointResult {
    Simulator::new(cfg).unwrap().run_point(0).unwrap()
}

/// iSABM at the operating point over a fixed number of frames (10^4 windows).
fn operating_run() -> &'static PointResult {
    static RUN: OnceLock<PointResult> = OnceLock::new();
    RUN.get_or_init(|| point(setup(Variant::Isabm, OPERATING_SNR, 0, fixed_frames(OPERATING_FRAMES))))
}

/// SNR where the BER curve crosses `target`, by log-linear interpolation
/// between the two grid points that bracket it.
fn crossing(target: f64, start: f64, mut ber_at: impl FnMut(f64) -> f64) -> Option<(f64, Vec<(f64, f64)>)> {
    const STEP: f64 = 0.05;
    let snr = |i: i32| ((start + i as f64 * STEP) * 100.0).round() / 100.0;
    let mut seen = Vec::new();
    let mut i = 0;
    let mut prev = (snr(0), ber_at(snr(0)));
    seen.push(prev);
    let dir = if prev.1 > target { 1 } else { -1 };
    for _ in 0..16 {
        i += dir;
        let cur = (snr(i), ber_at(snr(i)));
        seen.push(cur);
        if (cur.1 > target) != (prev.1 > target) {
            let (lo, hi) = if dir > 0 { (prev, cur) } else { (cur, prev) };
            if lo.1 <= 0.0 || hi.1 <= 0.0 {
                return None;
            }
            let (l1, l2) = (lo.1.log10(), hi.1.log10());
            let s = lo.0 + (target.log10() - l1) * (hi.0 - lo.0) / (l2 - l1);
            return Some((s, seen));
        }
        prev = cur;
    }
    None
}

fn codebook(code: &BchCode) -> Vec<Vec<u8>> {
    (0..1u32 << code.k())
        .map(|m| code.encode(&(0..code.k()).map(|i| ((m >> i) & 1) as u8).collect::<Vec<_>>()).unwrap())
        .collect()
}

fn agrees(code: &BchCode, book: &[Vec<u8>], word: &[u8]) -> bool {
    let oracle = book.iter().find(|c| c.iter().zip(word).filter(|(a, b)| a != b).count() <= code.t());
    match (code.bdd_decode(word).unwrap(), oracle) {
        (BddOutcome::Success { codeword, .. }, Some(c)) => &codeword == c,
        (BddOutcome::Failure, None) => true,
        _ => false,
    }
}

#[test]
fn criterion_1_bdd_matches_exhaustive_search() {
    let code = CodeSpec::parse("15,7,2").unwrap().build().unwrap();
    let book = codebook(&code);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut checked = 0u64;
    let mut disagreements = 0u64;
    for _ in 0..100_000 {
        let word: Vec<u8> = (0..15).map(|_| rng.random_range(0..2)).collect();
        disagreements += !agrees(&code, &book, &word) as u64;
        checked += 1;
    }
    for _ in 0..20 {
        let cw = &book[rng.random_range(0..book.len())];
        for mask in 0u32..1 << 15 {
            if mask.count_ones() > 3 {
                continue;
            }
            let word: Vec<u8> = cw.iter().enumerate().map(|(i, &b)| b ^ ((mask >> i) & 1) as u8).collect();
            disagreements += !agrees(&code, &book, &word) as u64;
            checked += 1;
        }
    }
    let pass = disagreements == 0;
    report(1, pass, &format!("{checked} words, {disagreements} disagreements"));
    assert!(pass);
}

#[test]
fn criterion_2_encoded_blocks_have_zero_syndromes() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut bad = 0usize;
    let mut words = 0usize;
    for spec in ["256,239,2", "256,231,3", "256,223,4", "254,230,3"] {
        let code = Arc::new(CodeSpec::parse(spec).unwrap().build().unwrap());
        let p = SccParams::new(Arc::clone(&code), false, 0).unwrap();
        let info: Vec<u8> = (0..1000 * p.info_bits_per_block()).map(|_| rng.random_range(0..2)).collect();
        let mut blocks = vec![SccBlock::zeros(p.w(), 0)];
        blocks.extend(scc_encode(&p, &info).unwrap());
        for pair in 1..blocks.len() {
            for row in 0..p.w() {
                let word = component_word(&blocks, ComponentWordRef::new(pair, row)).unwrap();
                bad += !code.syndrome(&word).is_zero() as usize;
                words += 1;
            }
        }
    }
    let pass = bad == 0;
    report(2, pass, &format!("{words} component words, {bad} with nonzero syndrome"));
    assert!(pass);
}

#[test]
fn criterion_3_quantizer_is_bit_exact() {
    let delta1 = Thresholds::default().delta1;
    let q1 = Quantizer::from_threshold(delta1, 1).unwrap();
    let q2 = Quantizer::from_threshold(delta1, 2).unwrap();
    let mut pass = (q1.saturation, q1.step) == (20.0, 10.0) && (q2.saturation, q2.step) == (40.0 / 3.0, 10.0 / 3.0);
    let mut violations = 0u64;
    for q in [q1, q2] {
        let top = q.saturation - q.step;
        let mut check = |x: f64| violations += ((x >= delta1) != (q.quantize(x) == top)) as u64;
        for i in 0..1_000_000u32 {
            check(i as f64 * 40.0 / 1_000_000.0);
        }
        check(delta1);
        check(delta1.next_down());
        check(delta1.next_up());
    }
    pass &= violations == 0;
    report(
        3,
        pass,
        &format!(
            "q=1 T={} D={}, q=2 T={} D={}, {violations} HRB mismatches",
            q1.saturation, q1.step, q2.saturation, q2.step
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_4_operating_point_ber() {
    let r = operating_run();
    let ber = r.record.post_fec_ber;
    let pass = (5e-4..=2e-3).contains(&ber) && r.record.block_errors >= 100;
    report(
        4,
        pass,
        &format!(
            "iSABM K=2 at {OPERATING_SNR} dB: BER {ber:.3e}, {} block errors, {} bits",
            r.record.block_errors, r.record.bits_simulated
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_5_gains_at_1e_4() {
    let find = |variant: Variant, start: f64| {
        crossing(1e-4, start, |snr| point(setup(variant, snr, 0, until_errors(100, 400))).record.post_fec_ber)
    };
    let std = find(Variant::Standard, 7.25);
    let sabm = find(Variant::Sabm, 7.0);
    let isabm = find(Variant::Isabm, 6.6);
    let (pass, detail) = match (&std, &sabm, &isabm) {
        (Some(s), Some(a), Some(i)) => {
            let (g_i, g_a) = (s.0 - i.0, s.0 - a.0);
            (
                g_i >= 0.35 && g_a >= 0.15,
                format!(
                    "crossings standard {:.3}, SABM {:.3}, iSABM {:.3} dB; gaps iSABM {g_i:.3}, SABM {g_a:.3} dB",
                    s.0, a.0, i.0
                ),
            )
        }
        _ => (false, format!("no bracket found: {std:?} {sabm:?} {isabm:?}")),
    };
    report(5, pass, &detail);
    assert!(pass);
}

#[test]
fn criterion_6_quantization_penalty() {
    let base = operating_run();
    let target = base.record.post_fec_ber;
    let q2 = point(setup(Variant::Isabm, OPERATING_SNR, 2, fixed_frames(OPERATING_FRAMES)));
    let ratio = q2.record.post_fec_ber / target;
    let q1 = crossing(target, OPERATING_SNR, |snr| {
        point(setup(Variant::Isabm, snr, 1, until_errors(300, OPERATING_FRAMES))).record.post_fec_ber
    });
    let gap = q1.as_ref().map(|(s, _)| s - OPERATING_SNR);
    let pass = ratio <= 1.5 && matches!(gap, Some(g) if g > 0.0 && g <= 0.35);
    report(
        6,
        pass,
        &format!(
            "q=2 BER ratio {ratio:.3} on the same frames; q=1 penalty {} dB at BER {target:.3e}",
            gap.map_or("unresolved".to_string(), |g| format!("{g:.3}"))
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_7_marking_proportions() {
    let c = Constellation::pam(2).unwrap();
    let p = ChannelParams::from_snr_db(OPERATING_SNR).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let bounds = [2.5, 10.0 / 3.0, 10.0];
    let mut below = [0u64; 3];
    let n = 10_000_000u64;
    let mut llr = [0.0];
    for _ in 0..n {
        let bit = rng.random_range(0..2u8);
        c.compute_llr_into(&p, p.transmit(c.modulate(&[bit]).unwrap(), &mut rng), &mut llr);
        for (b, cnt) in bounds.iter().zip(below.iter_mut()) {
            *cnt += (llr[0].abs() < *b) as u64;
        }
    }
    let pct: Vec<f64> = below.iter().map(|&k| 100.0 * k as f64 / n as f64).collect();
    let pass = pct.iter().zip([2.54, 3.52, 16.87]).all(|(got, want)| (got - want).abs() <= 1.5);
    report(7, pass, &format!("fractions below 2.5, 10/3, 10: {:.2}%, {:.2}%, {:.2}%", pct[0], pct[1], pct[2]));
    assert!(pass);
}

#[test]
fn criterion_8_complexity_counters() {
    let r = operating_run();
    let standard = point(setup(Variant::Standard, OPERATING_SNR, 0, fixed_frames(5)));
    let c = &standard.counters;
    let pass = r.counters.windows_observed >= 10_000
        && (r.eta1 - 0.2235).abs() <= 0.05
        && standard.eta1 == 0.0
        && standard.n_bar == 7168.0
        && c.bdd_calls == 7168 * c.windows_observed;
    report(
        8,
        pass,
        &format!(
            "iSABM eta1 {:.2}% over {} windows; standard eta1 {}, N {} over {} windows",
            100.0 * r.eta1,
            r.counters.windows_observed,
            standard.eta1,
            standard.n_bar,
            c.windows_observed
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_9_worker_count_invariance() {
    let csv = |workers: usize| {
        let mut cfg = setup(Variant::Isabm, OPERATING_SNR, 0, until_errors(20, 4));
        cfg.snr_db = vec![6.5, 6.6];
        cfg.workers = workers;
        let mut out = Vec::new();
        write_csv(&Simulator::new(cfg).unwrap().run().unwrap(), &mut out).unwrap();
        out
    };
    let (a, b) = (csv(1), csv(2));
    let pass = a == b;
    report(9, pass, &format!("{} CSV bytes, identical: {pass}", a.len()));
    assert!(pass);
}
