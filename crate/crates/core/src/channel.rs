//! Gray-labelled PAM over a real AWGN channel, with exact per-bit LLRs.
//!
//! The received sample is `y = sqrt(rho) * x + z` with `z ~ N(0, noise_variance)`
//! and `x` drawn from a unit-energy PAM constellation. LLRs are evaluated with
//! a separately configurable variance `llr_variance`; the defaults (noise 1,
//! LLR 1/2) reproduce the reliability scale on which the marking thresholds
//! `delta1 = 10`, `delta2 = 2.5` were tuned.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

pub const DEFAULT_NOISE_VARIANCE: f64 = 1.0;
pub const DEFAULT_LLR_VARIANCE: f64 = 0.5;

/// Equally spaced, unit average energy M-PAM with binary reflected Gray labels.
///
/// Bit index 0 is the most significant label bit, which for the BRGC is the
/// sign of the amplitude.
#[derive(Clone, Debug)]
pub struct Constellation {
    bits_per_symbol: usize,
    levels: Vec<f64>,
    labels: Vec<u32>,
    // label -> point index
    by_label: Vec<usize>,
    midpoints: Vec<f64>,
}

impl Constellation {
    pub fn pam(order: usize) -> Result<Self> {
        if order < 2 || !order.is_power_of_two() || order > 1 << 16 {
            return Err(Error::Config(format!("PAM order {order} must be a power of two >= 2")));
        }
        let m = order.trailing_zeros() as usize;
        let scale = (((order * order - 1) as f64) / 3.0).sqrt();
        let levels: Vec<f64> = (0..order).map(|i| (2.0 * i as f64 - (order as f64 - 1.0)) / scale).collect();
        let labels: Vec<u32> = (0..order as u32).map(|i| i ^ (i >> 1)).collect();
        let mut by_label = vec![0; order];
        for (i, &l) in labels.iter().enumerate() {
            by_label[l as usize] = i;
        }
        let midpoints = levels.windows(2).map(|p| 0.5 * (p[0] + p[1])).collect();
        Ok(Self { bits_per_symbol: m, levels, labels, by_label, midpoints })
    }

    /// Number of points M.
    pub fn order(&self) -> usize {
        self.levels.len()
    }

    pub fn bits_per_symbol(&self) -> usize {
        self.bits_per_symbol
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn label(&self, point: usize) -> u32 {
        self.labels[point]
    }

    /// Bit `k` (0 = most significant) of the label of `point`.
    #[inline]
    pub fn label_bit(&self, point: usize, k: usize) -> u8 {
        ((self.labels[point] >> (self.bits_per_symbol - 1 - k)) & 1) as u8
    }

    /// Points whose `k`-th label bit equals `b`.
    pub fn index_set(&self, k: usize, b: u8) -> Vec<usize> {
        (0..self.order()).filter(|&i| self.label_bit(i, k) == b).collect()
    }

    /// Level carrying the label `bits` (MSB first).
    pub fn modulate(&self, bits: &[u8]) -> Result<f64> {
        if bits.len() != self.bits_per_symbol {
            return Err(Error::LengthMismatch { expected: self.bits_per_symbol, actual: bits.len() });
        }
        let label = bits.iter().fold(0usize, |acc, &b| (acc << 1) | (b & 1) as usize);
        Ok(self.levels[self.by_label[label]])
    }

    /// Index of the point nearest to `y / sqrt(rho)`; ties go to the lower index.
    pub fn nearest_point(&self, sqrt_rho: f64, y: f64) -> usize {
        self.midpoints.iter().take_while(|&&mid| y > sqrt_rho * mid).count()
    }

    /// Bits of the nearest point's label.
    pub fn hard_demap(&self, params: &ChannelParams, y: f64) -> Vec<u8> {
        let point = self.nearest_point(params.sqrt_rho(), y);
        (0..self.bits_per_symbol).map(|k| self.label_bit(point, k)).collect()
    }

    /// Exact per-bit LLRs; positive values favour bit 1.
    pub fn compute_llr(&self, params: &ChannelParams, y: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.bits_per_symbol];
        self.compute_llr_into(params, y, &mut out);
        out
    }

    pub fn compute_llr_into(&self, params: &ChannelParams, y: f64, out: &mut [f64]) {
        let sr = params.sqrt_rho();
        if self.bits_per_symbol == 1 {
            out[0] = 2.0 * sr * y / params.llr_variance;
            return;
        }
        let inv = 1.0 / (2.0 * params.llr_variance);
        // Log-metric of each point; shifting by the max keeps exp() in range.
        let mut buf = [0.0f64; 16];
        let mut heap = Vec::new();
        let metrics: &mut [f64] = if self.order() <= buf.len() {
            &mut buf[..self.order()]
        } else {
            heap.resize(self.order(), 0.0);
            &mut heap
        };
        for (m, &s) in metrics.iter_mut().zip(&self.levels) {
            *m = -(y - sr * s).powi(2) * inv;
        }
        let max = metrics.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        for (k, slot) in out.iter_mut().enumerate() {
            let mut sums = [0.0f64; 2];
            let mut best = [f64::NEG_INFINITY; 2];
            for (i, &mtr) in metrics.iter().enumerate() {
                let b = self.label_bit(i, k) as usize;
                sums[b] += (mtr - max).exp();
                best[b] = best[b].max(mtr);
            }
            // If a whole subset underflows, fall back to its dominant term.
            let ln = |b: usize| if sums[b] > 0.0 { sums[b].ln() + max } else { best[b] };
            *slot = ln(1) - ln(0);
        }
    }
}

/// Channel gain and noise conventions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelParams {
    /// Linear SNR (squared channel gain).
    pub rho: f64,
    /// Variance of the real Gaussian noise sample.
    pub noise_variance: f64,
    /// Variance assumed inside the LLR metric.
    pub llr_variance: f64,
}

impl ChannelParams {
    pub fn new(rho: f64) -> Result<Self> {
        Self::with_variances(rho, DEFAULT_NOISE_VARIANCE, DEFAULT_LLR_VARIANCE)
    }

    pub fn with_variances(rho: f64, noise_variance: f64, llr_variance: f64) -> Result<Self> {
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(Error::Config(format!("rho must be positive, got {rho}")));
        }
        if !(noise_variance >= 0.0 && llr_variance > 0.0) {
            return Err(Error::Config("noise and LLR variances must be positive".into()));
        }
        Ok(Self { rho, noise_variance, llr_variance })
    }

    pub fn from_snr_db(snr_db: f64) -> Result<Self> {
        Self::new(db_to_linear(snr_db))
    }

    #[inline]
    pub fn sqrt_rho(&self) -> f64 {
        self.rho.sqrt()
    }

    /// `sqrt(rho) * x + z`.
    #[inline]
    pub fn transmit<R: Rng + ?Sized>(&self, x: f64, rng: &mut R) -> f64 {
        let z: f64 = rng.sample(StandardNormal);
        self.sqrt_rho() * x + self.noise_variance.sqrt() * z
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_pam_levels() {
        let c = Constellation::pam(2).unwrap();
        assert_eq!(c.modulate(&[0]).unwrap(), -1.0);
        assert_eq!(c.modulate(&[1]).unwrap(), 1.0);
    }

    #[test]
    fn eight_pam_levels_and_gray() {
        let c = Constellation::pam(8).unwrap();
        let s21 = 21f64.sqrt();
        for (i, &l) in c.levels().iter().enumerate() {
            assert!((l - (2.0 * i as f64 - 7.0) / s21).abs() < 1e-15);
        }
        let energy: f64 = c.levels().iter().map(|s| s * s).sum::<f64>() / 8.0;
        assert!((energy - 1.0).abs() < 1e-12);
        for i in 0..7 {
            assert_eq!((c.label(i) ^ c.label(i + 1)).count_ones(), 1);
        }
    }

    #[test]
    fn index_sets_partition() {
        let c = Constellation::pam(16).unwrap();
        for k in 0..4 {
            let mut all = c.index_set(k, 0);
            all.extend(c.index_set(k, 1));
            all.sort();
            assert_eq!(all, (0..16).collect::<Vec<_>>());
            assert_eq!(c.index_set(k, 0).len(), 8);
        }
    }

    #[test]
    fn sign_bit_llr_zero_at_origin() {
        let p = ChannelParams::new(3.0).unwrap();
        for order in [2, 4, 8, 16] {
            let c = Constellation::pam(order).unwrap();
            assert!(c.compute_llr(&p, 0.0)[0].abs() < 1e-12);
        }
    }

    #[test]
    fn two_pam_closed_form() {
        let c = Constellation::pam(2).unwrap();
        let p = ChannelParams::with_variances(2.5, 1.0, 0.7).unwrap();
        for &y in &[-3.0, -0.4, 0.1, 1.7, 5.0] {
            let expect = 2.0 * p.sqrt_rho() / p.llr_variance * y;
            assert!((c.compute_llr(&p, y)[0] - expect).abs() < 1e-9);
        }
    }

    #[test]
    fn extreme_outputs_stay_finite() {
        let c = Constellation::pam(4).unwrap();
        let p = ChannelParams::new(1e4).unwrap();
        let l = c.compute_llr(&p, 1e3);
        assert!(l.iter().all(|v| v.is_finite()));
    }

    #[test]
    fn hard_demap_rules() {
        let c = Constellation::pam(2).unwrap();
        let p = ChannelParams::new(4.0).unwrap();
        assert_eq!(c.hard_demap(&p, 0.9 * 2.0), vec![1]);
        assert_eq!(c.hard_demap(&p, 0.0), vec![0]);
        let c8 = Constellation::pam(8).unwrap();
        let mid = p.sqrt_rho() * 0.5 * (c8.levels()[2] + c8.levels()[3]);
        assert_eq!(c8.nearest_point(p.sqrt_rho(), mid), 2);
    }

    #[test]
    fn rejects_bad_params() {
        assert!(ChannelParams::new(0.0).is_err());
        assert!(Constellation::pam(3).is_err());
        assert!(Constellation::pam(4).unwrap().modulate(&[1]).is_err());
    }
}
