//! BDD-invocation accounting and the relative complexity measures built on it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Counts for a single window position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowStats {
    pub iterations: usize,
    pub pairs: usize,
    /// All BDD invocations, including partial ones on zero syndromes.
    pub bdd_calls: u64,
    /// Syndrome computations per (iteration, pair), row-major.
    pub syndrome_computations: Vec<u32>,
    /// Error-pattern estimations per (iteration, pair), row-major.
    pub pattern_estimations: Vec<u32>,
}

impl WindowStats {
    pub fn new(iterations: usize, pairs: usize) -> Self {
        Self {
            iterations,
            pairs,
            bdd_calls: 0,
            syndrome_computations: vec![0; iterations * pairs],
            pattern_estimations: vec![0; iterations * pairs],
        }
    }

    /// Records `calls` syndrome computations, `estimations` of which needed an
    /// error-pattern estimate, for iteration `h` (0-based) and pair `p` (1-based).
    #[inline]
    pub fn record(&mut self, h: usize, p: usize, calls: u32, estimations: u32) {
        let i = h * self.pairs + (p - 1);
        self.bdd_calls += calls as u64;
        self.syndrome_computations[i] += calls;
        self.pattern_estimations[i] += estimations;
    }
}

/// Aggregated counters over many window positions.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ComplexityCounters {
    pub iterations: usize,
    pub pairs: usize,
    pub windows_observed: u64,
    pub bdd_calls: u64,
    /// Sum over windows of D[h][p], row-major (iteration, pair).
    pub syndrome_computations: Vec<u64>,
    /// Sum over windows of P[h][p], row-major (iteration, pair).
    pub pattern_estimations: Vec<u64>,
}

impl ComplexityCounters {
    pub fn new(iterations: usize, pairs: usize) -> Self {
        Self {
            iterations,
            pairs,
            windows_observed: 0,
            bdd_calls: 0,
            syndrome_computations: vec![0; iterations * pairs],
            pattern_estimations: vec![0; iterations * pairs],
        }
    }

    pub fn add_window(&mut self, w: &WindowStats) {
        if self.windows_observed == 0 && self.syndrome_computations.is_empty() {
            *self = Self::new(w.iterations, w.pairs);
        }
        assert_eq!((self.iterations, self.pairs), (w.iterations, w.pairs), "counter shape mismatch");
        self.windows_observed += 1;
        self.bdd_calls += w.bdd_calls;
        for (a, &b) in self.syndrome_computations.iter_mut().zip(&w.syndrome_computations) {
            *a += b as u64;
        }
        for (a, &b) in self.pattern_estimations.iter_mut().zip(&w.pattern_estimations) {
            *a += b as u64;
        }
    }

    pub fn merge(&mut self, other: &ComplexityCounters) {
        if other.windows_observed == 0 {
            return;
        }
        if self.windows_observed == 0 {
            *self = other.clone();
            return;
        }
        assert_eq!((self.iterations, self.pairs), (other.iterations, other.pairs), "counter shape mismatch");
        self.windows_observed += other.windows_observed;
        self.bdd_calls += other.bdd_calls;
        for (a, b) in self.syndrome_computations.iter_mut().zip(&other.syndrome_computations) {
            *a += b;
        }
        for (a, b) in self.pattern_estimations.iter_mut().zip(&other.pattern_estimations) {
            *a += b;
        }
    }

    /// Average BDD invocations per window.
    pub fn n_bar(&self) -> f64 {
        if self.windows_observed == 0 {
            return f64::NAN;
        }
        self.bdd_calls as f64 / self.windows_observed as f64
    }

    /// Average syndrome computations at iteration `h` (0-based), pair `p` (1-based).
    pub fn d_bar(&self, h: usize, p: usize) -> f64 {
        self.syndrome_computations[h * self.pairs + p - 1] as f64 / self.windows_observed as f64
    }

    pub fn p_bar(&self, h: usize, p: usize) -> f64 {
        self.pattern_estimations[h * self.pairs + p - 1] as f64 / self.windows_observed as f64
    }

    /// Per-(iteration, pair) averages as nested rows, for reporting.
    pub fn matrices(&self) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
        let rows = |data: &[u64]| -> Vec<Vec<f64>> {
            data.chunks(self.pairs.max(1))
                .map(|r| r.iter().map(|&v| v as f64 / self.windows_observed.max(1) as f64).collect())
                .collect()
        };
        (rows(&self.syndrome_computations), rows(&self.pattern_estimations))
    }

    fn weighted_cost(&self, v_sc: f64, v_ep: f64) -> f64 {
        let d: u64 = self.syndrome_computations.iter().sum();
        let p: u64 = self.pattern_estimations.iter().sum();
        (d as f64 * v_sc + p as f64 * v_ep) / self.windows_observed as f64
    }
}

/// Relative increase in BDD invocations over the standard decoder,
/// (N - w (L - 1) l) / (w (L - 1) l).
pub fn eta1(counters: &ComplexityCounters, w: usize, window: usize, iterations: usize) -> f64 {
    let n_sd = (w * (window - 1) * iterations) as f64;
    (counters.n_bar() - n_sd) / n_sd
}

/// Time-weighted relative increase of a soft-aided decoder over the standard
/// decoder, given per-call costs of syndrome computation and error-pattern
/// estimation. Both counter sets must come from the same channel realizations.
pub fn eta2(soft: &ComplexityCounters, standard: &ComplexityCounters, v_sc: f64, v_ep: f64) -> Result<f64> {
    if !(v_sc >= 0.0 && v_ep >= 0.0 && v_sc + v_ep > 0.0) {
        return Err(Error::Config(format!("timing constants must be nonnegative, got {v_sc}, {v_ep}")));
    }
    if soft.windows_observed == 0 || standard.windows_observed == 0 {
        return Err(Error::Config("eta2 needs counters from at least one window".into()));
    }
    let base = standard.weighted_cost(v_sc, v_ep);
    if base == 0.0 {
        return Err(Error::Config("standard decoder cost is zero".into()));
    }
    Ok(soft.weighted_cost(v_sc, v_ep) / base - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counters(d: u32, p: u32, extra: u32) -> ComplexityCounters {
        let mut w = WindowStats::new(2, 3);
        for h in 0..2 {
            for pair in 1..=3 {
                w.record(h, pair, d, p);
            }
        }
        w.record(1, 3, extra, extra);
        let mut c = ComplexityCounters::default();
        c.add_window(&w);
        c
    }

    #[test]
    fn eta1_zero_for_standard_count() {
        let c = counters(128, 5, 0);
        assert_eq!(c.n_bar(), 768.0);
        assert_eq!(eta1(&c, 128, 4, 2), 0.0);
    }

    #[test]
    fn eta1_default_window() {
        let mut c = ComplexityCounters::new(7, 8);
        c.windows_observed = 1;
        c.bdd_calls = 7168;
        assert_eq!(eta1(&c, 128, 9, 7), 0.0);
    }

    #[test]
    fn eta2_degenerate_cases() {
        let a = counters(128, 5, 0);
        assert_eq!(eta2(&a, &a, 1.0, 3.0).unwrap(), 0.0);
        let b = counters(128, 9, 0);
        // v_ep = 0 with equal D counts -> ratio of syndrome counts minus one.
        assert_eq!(eta2(&b, &a, 1.0, 0.0).unwrap(), 0.0);
        let soft = counters(128, 5, 40);
        let expect = (768.0 + 40.0) / 768.0 - 1.0;
        assert!((eta2(&soft, &a, 1.0, 0.0).unwrap() - expect).abs() < 1e-12);
        assert!(eta2(&soft, &a, -1.0, 0.0).is_err());
    }

    #[test]
    fn merge_adds() {
        let mut a = counters(10, 2, 0);
        let b = counters(10, 2, 4);
        a.merge(&b);
        assert_eq!(a.windows_observed, 2);
        assert_eq!(a.bdd_calls, 2 * 60 + 4);
        assert_eq!(a.d_bar(1, 3), 12.0);
    }
}
