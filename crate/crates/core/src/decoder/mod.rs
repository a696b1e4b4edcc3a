//! Sliding-window staircase decoding: plain BDD, SABM and iSABM.

mod soft;
mod window;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::marking::{Quantizer, Thresholds};

pub use soft::{
    bit_flip_retry, miscorrection_check, soft_decode_word, CheckResult, FirstAttempt, LazyRng, SoftClass,
    SoftDecodeOutcome, WordContext,
};
pub use window::{ComponentWord, Emission, ReceivedBlock, SccWindow, WindowDecoder};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Standard,
    Sabm,
    Isabm,
}

impl Variant {
    pub fn is_soft(self) -> bool {
        !matches!(self, Variant::Standard)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Standard => "standard",
            Variant::Sabm => "sabm",
            Variant::Isabm => "isabm",
        })
    }
}

impl FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "standard" | "std" | "bdd" => Ok(Variant::Standard),
            "sabm" => Ok(Variant::Sabm),
            "isabm" => Ok(Variant::Isabm),
            other => Err(Error::Config(format!("unknown decoder variant '{other}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecoderConfig {
    pub variant: Variant,
    /// Window size L in blocks.
    pub window: usize,
    /// Iterations per window position.
    pub iterations: usize,
    /// Number of leading block pairs decoded with plain BDD (iSABM only).
    pub k: usize,
    pub thresholds: Thresholds,
    /// Reliability quantizer width; 0 keeps floating-point reliabilities.
    pub quant_bits: u32,
    pub rng_seed: u64,
}

impl Default for DecoderConfig {
    fn default() -> Self {
        Self {
            variant: Variant::Isabm,
            window: 9,
            iterations: 7,
            k: 2,
            thresholds: Thresholds::default(),
            quant_bits: 0,
            rng_seed: 0,
        }
    }
}

impl DecoderConfig {
    pub fn validate(&self) -> Result<()> {
        if self.window < 2 {
            return Err(Error::Config(format!("window must hold at least 2 blocks, got {}", self.window)));
        }
        if self.k >= self.window {
            return Err(Error::Config(format!("k = {} must be below the window size {}", self.k, self.window)));
        }
        Thresholds::new(self.thresholds.delta1, self.thresholds.delta2)?;
        self.quantizer()?;
        Ok(())
    }

    pub fn quantizer(&self) -> Result<Option<Quantizer>> {
        match self.quant_bits {
            0 => Ok(None),
            q => Quantizer::from_threshold(self.thresholds.delta1, q).map(Some),
        }
    }

    /// First window block whose bits carry marks (`window` when none do).
    pub fn first_marked_block(&self) -> usize {
        match self.variant {
            Variant::Standard => self.window,
            Variant::Sabm => self.window - 1,
            Variant::Isabm => self.k,
        }
    }

    /// First block pair decoded with the soft-aided rule (`window` when none).
    ///
    /// With `k = L - 1` iSABM still soft-decodes the last pair, using the
    /// marks of the newest block only.
    pub fn first_soft_pair(&self) -> usize {
        match self.variant {
            Variant::Standard => self.window,
            Variant::Sabm => self.window - 1,
            Variant::Isabm => (self.k + 1).min(self.window - 1),
        }
    }

    /// BDD calls per window position of the standard decoder, w (L - 1) l.
    pub fn standard_bdd_calls(&self, w: usize) -> usize {
        w * (self.window - 1) * self.iterations
    }
}
