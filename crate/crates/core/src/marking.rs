//! Reliability marking: HRB / UB / HUB classes from |LLR|, the uniform
//! reliability quantizer aligned to the HRB threshold, and sorting-based HUB
//! selection.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_DELTA1: f64 = 10.0;
pub const DEFAULT_DELTA2: f64 = 2.5;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    /// HRB threshold.
    pub delta1: f64,
    /// HUB threshold.
    pub delta2: f64,
}

impl Thresholds {
    pub fn new(delta1: f64, delta2: f64) -> Result<Self> {
        if !(delta2 > 0.0 && delta2 < delta1 && delta1.is_finite()) {
            return Err(Error::Config(format!(
                "thresholds must satisfy 0 < delta2 < delta1, got delta1 = {delta1}, delta2 = {delta2}"
            )));
        }
        Ok(Self { delta1, delta2 })
    }
}

impl Default for Thresholds {
    fn default() -> Self {
        Self { delta1: DEFAULT_DELTA1, delta2: DEFAULT_DELTA2 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[repr(u8)]
pub enum MarkClass {
    /// Highly reliable bit.
    Hrb = 0,
    /// Uncertain bit.
    Ub = 1,
    /// Highly unreliable bit.
    Hub = 2,
}

/// Storage width of a mark table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MarkWidth {
    /// HRB / UB / HUB.
    TwoBit,
    /// HRB / HUB only; anything that is not an HRB is stored as a HUB.
    OneBit,
}

impl MarkClass {
    pub fn encode(self, width: MarkWidth) -> u8 {
        match (width, self) {
            (MarkWidth::TwoBit, c) => c as u8,
            (MarkWidth::OneBit, MarkClass::Hrb) => 0,
            (MarkWidth::OneBit, _) => 1,
        }
    }

    pub fn decode(code: u8, width: MarkWidth) -> Option<Self> {
        match (width, code) {
            (MarkWidth::TwoBit, 0) | (MarkWidth::OneBit, 0) => Some(MarkClass::Hrb),
            (MarkWidth::TwoBit, 1) => Some(MarkClass::Ub),
            (MarkWidth::TwoBit, 2) | (MarkWidth::OneBit, 1) => Some(MarkClass::Hub),
            _ => None,
        }
    }
}

/// Three-level classification of an unquantized reliability.
#[inline]
pub fn mark_bit(th: &Thresholds, reliability: f64) -> MarkClass {
    if reliability >= th.delta1 {
        MarkClass::Hrb
    } else if reliability >= th.delta2 {
        MarkClass::Ub
    } else {
        MarkClass::Hub
    }
}

/// Uniform unsigned `q`-bit quantizer with saturation `T` and step `T / 2^q`.
///
/// Built so that the HRB threshold is the top decision boundary, `delta1 = T - step`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Quantizer {
    pub bits: u32,
    pub saturation: f64,
    pub step: f64,
    delta1: f64,
}

impl Quantizer {
    pub fn from_threshold(delta1: f64, bits: u32) -> Result<Self> {
        if bits == 0 || bits > 30 {
            return Err(Error::Config(format!("quantizer bits must be in 1..=30, got {bits}")));
        }
        if !(delta1 > 0.0 && delta1.is_finite()) {
            return Err(Error::Config(format!("delta1 must be positive, got {delta1}")));
        }
        let levels = (1u64 << bits) as f64;
        let saturation = delta1 * levels / (levels - 1.0);
        let step = saturation / levels;
        Ok(Self { bits, saturation, step, delta1 })
    }

    /// Index of the top (saturated) level, 2^q - 1.
    #[inline]
    pub fn max_level(&self) -> u32 {
        ((1u64 << self.bits) - 1) as u32
    }

    /// Quantization level of a reliability.
    #[inline]
    pub fn level(&self, reliability: f64) -> u32 {
        // Comparing against delta1 directly keeps the HRB boundary exact.
        if reliability >= self.delta1 {
            return self.max_level();
        }
        let l = (reliability * self.max_level() as f64 / self.delta1).floor();
        (l.max(0.0) as u32).min(self.max_level() - 1)
    }

    /// Value of a level; the top level is `T - step`, represented exactly as `delta1`.
    #[inline]
    pub fn level_value(&self, level: u32) -> f64 {
        if level >= self.max_level() {
            self.delta1
        } else {
            level as f64 * self.step
        }
    }

    #[inline]
    pub fn quantize(&self, reliability: f64) -> f64 {
        self.level_value(self.level(reliability))
    }

    /// Number of levels below the effective HUB threshold: the smallest `L`
    /// with `L * step >= delta2`.
    pub fn hub_levels(&self, delta2: f64) -> u32 {
        let ratio = delta2 * self.max_level() as f64 / self.delta1;
        let nearest = ratio.round();
        let l = if (ratio - nearest).abs() < 1e-9 { nearest } else { ratio.ceil() };
        (l.max(0.0) as u32).min(self.max_level())
    }

    /// Effective HUB threshold under quantization (a decision boundary >= delta2).
    pub fn effective_hub_threshold(&self, delta2: f64) -> f64 {
        self.level_value(self.hub_levels(delta2))
    }
}

/// Classification after quantizing the reliability.
#[inline]
pub fn mark_quantized(th: &Thresholds, quantizer: &Quantizer, reliability: f64) -> MarkClass {
    let level = quantizer.level(reliability);
    if level == quantizer.max_level() {
        MarkClass::Hrb
    } else if level < quantizer.hub_levels(th.delta2) {
        MarkClass::Hub
    } else {
        MarkClass::Ub
    }
}

/// Positions of the `count` smallest reliabilities, ties by ascending index.
/// The result is ordered from least to most reliable.
pub fn sabm_hub_select(reliabilities: &[f64], count: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..reliabilities.len()).collect();
    idx.sort_by(|&a, &b| reliabilities[a].total_cmp(&reliabilities[b]).then(a.cmp(&b)));
    idx.truncate(count);
    idx
}
