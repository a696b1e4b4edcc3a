use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use super::config::SimConfig;
use super::sweep::PointResult;
use crate::error::Result;

pub const CSV_HEADER: [&str; 9] =
    ["snr_db", "pre_fec_ber", "post_fec_ber", "bits", "bit_errors", "blocks", "block_errors", "n_bar", "eta1"];

/// Writes the BER table. Floats use fixed formats so identical runs produce
/// identical bytes.
pub fn write_csv<W: Write>(results: &[PointResult], out: W) -> Result<()> {
    let mut wr = csv::Writer::from_writer(out);
    wr.write_record(CSV_HEADER)?;
    for r in results {
        let rec = &r.record;
        wr.write_record([
            format!("{}", rec.snr_db),
            format!("{:.6e}", rec.pre_fec_ber),
            format!("{:.6e}", rec.post_fec_ber),
            rec.bits_simulated.to_string(),
            rec.bit_errors.to_string(),
            rec.blocks_emitted.to_string(),
            rec.block_errors.to_string(),
            format!("{:.4}", r.n_bar),
            format!("{:.6}", r.eta1),
        ])?;
    }
    wr.flush()?;
    Ok(())
}

pub fn write_csv_file(results: &[PointResult], path: &Path) -> Result<()> {
    write_csv(results, BufWriter::new(File::create(path)?))
}

#[derive(Serialize)]
struct PointJson<'a> {
    snr_db: f64,
    frames: u64,
    censored: bool,
    record: &'a super::sweep::BerRecord,
    n_bar: f64,
    eta1: f64,
    eta2: Option<f64>,
    windows_observed: u64,
    /// Average syndrome computations, rows = iterations, columns = pairs.
    d_bar: Vec<Vec<f64>>,
    /// Average error-pattern estimations, same layout.
    p_bar: Vec<Vec<f64>>,
    standard_d_bar: Option<Vec<Vec<f64>>>,
    standard_p_bar: Option<Vec<Vec<f64>>>,
}

#[derive(Serialize)]
struct Sidecar<'a> {
    config: &'a SimConfig,
    seed: u64,
    points: Vec<PointJson<'a>>,
}

pub fn sidecar_json(cfg: &SimConfig, results: &[PointResult]) -> serde_json::Value {
    let points = results
        .iter()
        .map(|r| {
            let (d_bar, p_bar) = r.counters.matrices();
            let base = r.baseline.as_ref().map(|b| b.matrices());
            PointJson {
                snr_db: r.record.snr_db,
                frames: r.frames,
                censored: r.censored,
                record: &r.record,
                n_bar: r.n_bar,
                eta1: r.eta1,
                eta2: r.eta2,
                windows_observed: r.counters.windows_observed,
                d_bar,
                p_bar,
                standard_d_bar: base.as_ref().map(|b| b.0.clone()),
                standard_p_bar: base.map(|b| b.1),
            }
        })
        .collect();
    serde_json::to_value(Sidecar { config: cfg, seed: cfg.seed, points }).expect("sidecar is serializable")
}

pub fn write_json_file(cfg: &SimConfig, results: &[PointResult], path: &Path) -> Result<()> {
    let mut f = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut f, &sidecar_json(cfg, results))?;
    f.write_all(b"\n")?;
    f.flush()?;
    Ok(())
}
