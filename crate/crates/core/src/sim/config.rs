use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::bch::CodeSpec;
use crate::channel::{DEFAULT_LLR_VARIANCE, DEFAULT_NOISE_VARIANCE};
use crate::decoder::{DecoderConfig, Variant};
use crate::error::{Error, Result};
use crate::marking::Thresholds;

/// Blocks per frame that enter the statistics, after the warm-up.
pub const COUNTED_BLOCKS: usize = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StopRule {
    pub min_block_errors: u64,
    pub min_bits: u64,
    pub max_bits: u64,
}

impl Default for StopRule {
    fn default() -> Self {
        Self { min_block_errors: 100, min_bits: 0, max_bits: 1_000_000_000 }
    }
}

/// Per-call cost constants for the time-weighted complexity measure.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub v_sc: f64,
    pub v_ep: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub code: CodeSpec,
    /// PAM order M.
    pub modulation: usize,
    pub snr_db: Vec<f64>,
    pub decoder: DecoderConfig,
    pub interleave: bool,
    pub stop: StopRule,
    pub workers: usize,
    pub out: Option<PathBuf>,
    pub json: Option<PathBuf>,
    pub seed: u64,
    pub noise_variance: f64,
    pub llr_variance: f64,
    pub counted_blocks: usize,
    /// When set, every frame is also decoded by the standard decoder to
    /// obtain the time-weighted complexity ratio.
    pub timing: Option<Timing>,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            code: CodeSpec::new(255, 239, 2, true, 0),
            modulation: 2,
            snr_db: vec![6.57],
            decoder: DecoderConfig::default(),
            interleave: true,
            stop: StopRule::default(),
            workers: 1,
            out: None,
            json: None,
            seed: 1,
            noise_variance: DEFAULT_NOISE_VARIANCE,
            llr_variance: DEFAULT_LLR_VARIANCE,
            counted_blocks: COUNTED_BLOCKS,
            timing: None,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        let code = self.code.build()?;
        if code.n() % 2 != 0 {
            return Err(Error::Config(format!("component length {} must be even", code.n())));
        }
        if code.k() <= code.n() / 2 {
            return Err(Error::Config(format!("code ({}) leaves no information columns", self.code)));
        }
        if !matches!(self.modulation, 2 | 4 | 8 | 16) {
            return Err(Error::Config(format!("modulation must be 2, 4, 8 or 16-PAM, got {}", self.modulation)));
        }
        if self.snr_db.is_empty() {
            return Err(Error::Config("SNR grid is empty".into()));
        }
        if let Some(s) = self.snr_db.iter().find(|s| !s.is_finite()) {
            return Err(Error::Config(format!("SNR {s} is not finite")));
        }
        self.decoder.validate()?;
        let st = &self.stop;
        if st.min_block_errors == 0 || st.max_bits == 0 {
            return Err(Error::Config("stop rule bounds must be positive".into()));
        }
        if st.min_bits > st.max_bits {
            return Err(Error::Config(format!("min_bits {} exceeds max_bits {}", st.min_bits, st.max_bits)));
        }
        if self.workers == 0 {
            return Err(Error::Config("worker count must be at least 1".into()));
        }
        if self.counted_blocks == 0 {
            return Err(Error::Config("counted_blocks must be at least 1".into()));
        }
        if !(self.noise_variance >= 0.0 && self.llr_variance > 0.0) {
            return Err(Error::Config("noise variance must be >= 0 and LLR variance > 0".into()));
        }
        if let Some(t) = self.timing {
            if !(t.v_sc >= 0.0 && t.v_ep >= 0.0 && t.v_sc + t.v_ep > 0.0) {
                return Err(Error::Config("timing constants must be nonnegative and not both zero".into()));
            }
        }
        Ok(())
    }
}

/// Parses `start:step:stop` (inclusive), a comma-separated list, or one value.
pub fn parse_snr_grid(s: &str) -> Result<Vec<f64>> {
    let num = |v: &str| v.trim().parse::<f64>().map_err(|_| Error::Config(format!("bad SNR value '{v}' in '{s}'")));
    let parts: Vec<&str> = s.split(':').collect();
    let grid = match parts.len() {
        1 => s.split(',').filter(|v| !v.trim().is_empty()).map(num).collect::<Result<Vec<_>>>()?,
        3 => {
            let (start, step, stop) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
            if step.is_nan() || step <= 0.0 || stop < start {
                return Err(Error::Config(format!("SNR range '{s}' needs step > 0 and stop >= start")));
            }
            let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
            // Rounding keeps 6.1 + 3 * 0.1 printing as 6.4.
            (0..n).map(|i| ((start + i as f64 * step) * 1e9).round() / 1e9).collect()
        }
        _ => return Err(Error::Config(format!("SNR grid must be 'start:step:stop' or a list, got '{s}'"))),
    };
    if grid.is_empty() {
        return Err(Error::Config("SNR grid is empty".into()));
    }
    Ok(grid)
}

/// Accepts `2`, `4-pam`, `16PAM` and similar.
pub fn parse_modulation(s: &str) -> Result<usize> {
    let t = s.trim().to_ascii_lowercase();
    let digits = t.trim_end_matches("pam").trim_end_matches('-');
    match digits.parse::<usize>() {
        Ok(m @ (2 | 4 | 8 | 16)) => Ok(m),
        _ => Err(Error::Config(format!("unsupported modulation '{s}' (expected 2, 4, 8 or 16-PAM)"))),
    }
}

/// TOML configuration; any key present overrides the command line.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub code: Option<String>,
    #[serde(rename = "mod")]
    pub modulation: Option<String>,
    pub snr_db: Option<SnrSpec>,
    pub decoder: Option<String>,
    pub window: Option<usize>,
    pub iters: Option<usize>,
    pub k: Option<usize>,
    pub delta1: Option<f64>,
    pub delta2: Option<f64>,
    pub quant_bits: Option<u32>,
    pub interleave: Option<bool>,
    pub seed: Option<u64>,
    pub min_block_errors: Option<u64>,
    pub min_bits: Option<u64>,
    pub max_bits: Option<u64>,
    pub workers: Option<usize>,
    pub out: Option<PathBuf>,
    pub json: Option<PathBuf>,
    pub noise_variance: Option<f64>,
    pub llr_variance: Option<f64>,
    pub counted_blocks: Option<usize>,
    pub vsc: Option<f64>,
    pub vep: Option<f64>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum SnrSpec {
    Text(String),
    Value(f64),
    List(Vec<f64>),
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(format!("config file: {e}")))
    }

    pub fn apply(&self, cfg: &mut SimConfig) -> Result<()> {
        if let Some(c) = &self.code {
            cfg.code = CodeSpec::parse(c)?;
        }
        if let Some(m) = &self.modulation {
            cfg.modulation = parse_modulation(m)?;
        }
        match &self.snr_db {
            Some(SnrSpec::Text(s)) => cfg.snr_db = parse_snr_grid(s)?,
            Some(SnrSpec::Value(v)) => cfg.snr_db = vec![*v],
            Some(SnrSpec::List(v)) => cfg.snr_db = v.clone(),
            None => {}
        }
        if let Some(d) = &self.decoder {
            cfg.decoder.variant = d.parse::<Variant>()?;
        }
        let dec = &mut cfg.decoder;
        set(&mut dec.window, self.window);
        set(&mut dec.iterations, self.iters);
        set(&mut dec.k, self.k);
        set(&mut dec.quant_bits, self.quant_bits);
        let th = Thresholds {
            delta1: self.delta1.unwrap_or(dec.thresholds.delta1),
            delta2: self.delta2.unwrap_or(dec.thresholds.delta2),
        };
        dec.thresholds = th;
        set(&mut cfg.interleave, self.interleave);
        set(&mut cfg.seed, self.seed);
        set(&mut cfg.stop.min_block_errors, self.min_block_errors);
        set(&mut cfg.stop.min_bits, self.min_bits);
        set(&mut cfg.stop.max_bits, self.max_bits);
        set(&mut cfg.workers, self.workers);
        set(&mut cfg.noise_variance, self.noise_variance);
        set(&mut cfg.llr_variance, self.llr_variance);
        set(&mut cfg.counted_blocks, self.counted_blocks);
        if self.out.is_some() {
            cfg.out = self.out.clone();
        }
        if self.json.is_some() {
            cfg.json = self.json.clone();
        }
        match (self.vsc, self.vep) {
            (Some(v_sc), Some(v_ep)) => cfg.timing = Some(Timing { v_sc, v_ep }),
            (None, None) => {}
            _ => return Err(Error::Config("vsc and vep must be given together".into())),
        }
        Ok(())
    }
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}
