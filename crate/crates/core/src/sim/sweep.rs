use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::config::SimConfig;
use crate::bch::BchCode;
use crate::channel::{db_to_linear, ChannelParams, Constellation};
use crate::complexity::{eta1, eta2, ComplexityCounters, WindowStats};
use crate::decoder::{DecoderConfig, ReceivedBlock, Variant, WindowDecoder};
use crate::error::{Error, Result};
use crate::rng::{substream, substream_seed};
use crate::staircase::{block_info_bits, permute, unpermute, SccBlock, SccParams, StaircaseEncoder};

const INTERLEAVER_TAG: u64 = 0x11;
const DECODER_TAG: u64 = 0xdec;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BerRecord {
    pub snr_db: f64,
    pub bits_simulated: u64,
    pub bit_errors: u64,
    pub post_fec_ber: f64,
    pub pre_fec_ber: f64,
    pub blocks_emitted: u64,
    pub block_errors: u64,
}

/// Raw counts of one frame, or of a run of frames.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FrameTally {
    pub bits: u64,
    pub bit_errors: u64,
    pub blocks: u64,
    pub block_errors: u64,
    pub channel_bits: u64,
    pub channel_errors: u64,
    pub counters: ComplexityCounters,
    pub baseline: Option<ComplexityCounters>,
}

impl FrameTally {
    pub fn add(&mut self, o: &FrameTally) {
        self.bits += o.bits;
        self.bit_errors += o.bit_errors;
        self.blocks += o.blocks;
        self.block_errors += o.block_errors;
        self.channel_bits += o.channel_bits;
        self.channel_errors += o.channel_errors;
        self.counters.merge(&o.counters);
        if let Some(b) = &o.baseline {
            self.baseline.get_or_insert_with(ComplexityCounters::default).merge(b);
        }
    }
}

#[derive(Clone, Debug)]
pub struct PointResult {
    pub record: BerRecord,
    pub frames: u64,
    /// The point stopped on the bit budget before reaching the block-error target.
    pub censored: bool,
    pub counters: ComplexityCounters,
    pub n_bar: f64,
    pub eta1: f64,
    pub baseline: Option<ComplexityCounters>,
    pub eta2: Option<f64>,
}

/// Frame-level simulator for one configuration.
pub struct Simulator {
    cfg: SimConfig,
    code: Arc<BchCode>,
    constellation: Constellation,
}

impl Simulator {
    pub fn new(cfg: SimConfig) -> Result<Self> {
        cfg.validate()?;
        let code = Arc::new(cfg.code.build()?);
        let constellation = Constellation::pam(cfg.modulation)?;
        Ok(Self { cfg, code, constellation })
    }

    pub fn config(&self) -> &SimConfig {
        &self.cfg
    }

    pub fn code(&self) -> &Arc<BchCode> {
        &self.code
    }

    /// Number of blocks B1, B2, ... fed to the decoder per frame. The last
    /// counted block is read from the final window instead of being emitted.
    pub fn blocks_per_frame(&self) -> usize {
        2 * self.cfg.decoder.window + self.cfg.counted_blocks - 2
    }

    fn decoder_config(&self, snr_idx: usize, frame: u64, variant: Variant) -> DecoderConfig {
        let mut d = self.cfg.decoder;
        d.variant = variant;
        d.rng_seed = substream_seed(self.cfg.seed, &[snr_idx as u64, frame, DECODER_TAG]);
        d
    }

    /// Transmits one frame and returns hard decisions and reliabilities in
    /// block order, together with the transmitted blocks.
    pub fn transmit_frame(&self, snr_idx: usize, frame: u64) -> Result<(Vec<SccBlock>, Vec<ReceivedBlock>)> {
        let snr = *self.cfg.snr_db.get(snr_idx).ok_or_else(|| Error::OutOfRange(format!("SNR index {snr_idx}")))?;
        let channel = ChannelParams::with_variances(db_to_linear(snr), self.cfg.noise_variance, self.cfg.llr_variance)?;
        let mut rng = substream(self.cfg.seed, &[snr_idx as u64, frame]);
        let scc = SccParams::new(
            Arc::clone(&self.code),
            self.cfg.interleave,
            substream_seed(self.cfg.seed, &[snr_idx as u64, frame, INTERLEAVER_TAG]),
        )?;
        let w = scc.w();
        let n_blocks = self.blocks_per_frame();

        let mut enc = StaircaseEncoder::new(scc.clone());
        let mut info = vec![0u8; scc.info_bits_per_block()];
        let mut tx = Vec::with_capacity(n_blocks);
        for _ in 0..n_blocks {
            fill_bits(&mut rng, &mut info);
            tx.push(enc.encode_block(&info)?);
        }

        // Serialize the interleaved blocks onto one symbol stream.
        let perms: Vec<Vec<u32>> = tx.iter().map(|b| scc.permutation(b.index)).collect();
        let mut stream: Vec<u8> = Vec::with_capacity(n_blocks * w * w);
        for (b, perm) in tx.iter().zip(&perms) {
            stream.extend(permute(&b.bits, perm));
        }
        let m = self.constellation.bits_per_symbol();
        let n_sym = stream.len().div_ceil(m);
        stream.resize(n_sym * m, 0);
        let mut hard = vec![0u8; stream.len()];
        let mut llr = vec![0.0f64; stream.len()];
        let sr = channel.sqrt_rho();
        for s in 0..n_sym {
            let bits = &stream[s * m..(s + 1) * m];
            let x = self.constellation.modulate(bits)?;
            let y = channel.transmit(x, &mut rng);
            let point = self.constellation.nearest_point(sr, y);
            for k in 0..m {
                hard[s * m + k] = self.constellation.label_bit(point, k);
            }
            self.constellation.compute_llr_into(&channel, y, &mut llr[s * m..(s + 1) * m]);
        }

        let rx = tx
            .iter()
            .zip(&perms)
            .enumerate()
            .map(|(i, (b, perm))| {
                let span = i * w * w..(i + 1) * w * w;
                let rel: Vec<f64> = llr[span.clone()].iter().map(|l| l.abs()).collect();
                ReceivedBlock::new(
                    SccBlock { bits: unpermute(&hard[span], perm), w, index: b.index },
                    unpermute(&rel, perm),
                )
            })
            .collect();
        Ok((tx, rx))
    }

    /// Simulates and decodes one frame.
    pub fn simulate_frame(&self, snr_idx: usize, frame: u64) -> Result<FrameTally> {
        let (tx, rx) = self.transmit_frame(snr_idx, frame)?;
        let first_counted = self.cfg.decoder.window as u64;
        let last_counted = first_counted + self.cfg.counted_blocks as u64 - 1;
        let is_counted = |idx: u64| (first_counted..=last_counted).contains(&idx);
        let scc = SccParams::new(Arc::clone(&self.code), false, 0)?;

        let mut tally = FrameTally::default();
        for b in rx.iter().filter(|b| is_counted(b.hard.index)) {
            let sent = &tx[b.hard.index as usize - 1];
            tally.channel_bits += sent.bits.len() as u64;
            tally.channel_errors += count_diff(&sent.bits, &b.hard.bits);
        }

        let variant = self.cfg.decoder.variant;
        let (decoded, counters) = self.decode(snr_idx, frame, variant, rx.clone(), &is_counted)?;
        tally.counters = counters;
        for d in &decoded {
            let sent = &tx[d.index as usize - 1];
            let errs = count_diff(&block_info_bits(&scc, sent), &block_info_bits(&scc, d));
            tally.bits += scc.info_bits_per_block() as u64;
            tally.bit_errors += errs;
            tally.blocks += 1;
            tally.block_errors += (errs > 0) as u64;
        }
        if self.cfg.timing.is_some() {
            let (_, base) = self.decode(snr_idx, frame, Variant::Standard, rx, &is_counted)?;
            tally.baseline = Some(base);
        }
        Ok(tally)
    }

    fn decode(
        &self,
        snr_idx: usize,
        frame: u64,
        variant: Variant,
        rx: Vec<ReceivedBlock>,
        is_counted: &dyn Fn(u64) -> bool,
    ) -> Result<(Vec<SccBlock>, ComplexityCounters)> {
        let dc = self.decoder_config(snr_idx, frame, variant);
        let mut dec = WindowDecoder::new(Arc::clone(&self.code), dc)?;
        let mut counters = ComplexityCounters::new(dc.iterations, dc.window - 1);
        let mut decoded = Vec::with_capacity(self.cfg.counted_blocks);
        for b in rx {
            if let Some(e) = dec.push(b)? {
                if is_counted(e.block.index) {
                    counters.add_window(&e.stats);
                    decoded.push(e.block);
                }
            }
        }
        let tail_stats: Option<WindowStats> = dec.current_stats().cloned();
        let oldest = dec.finish().into_iter().next();
        if let (Some(block), Some(stats)) = (oldest, tail_stats) {
            if is_counted(block.index) {
                counters.add_window(&stats);
                decoded.push(block);
            }
        }
        Ok((decoded, counters))
    }

    fn stop_reached(&self, t: &FrameTally) -> bool {
        let st = &self.cfg.stop;
        (t.block_errors >= st.min_block_errors && t.bits >= st.min_bits) || t.bits >= st.max_bits
    }

    /// Runs one SNR point. Frames are decoded in parallel batches but folded in
    /// frame order, and the run ends at the first frame prefix that meets the
    /// stop rule, so the result does not depend on the worker count.
    pub fn run_point(&self, snr_idx: usize) -> Result<PointResult> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.cfg.workers)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
        let batch = (2 * self.cfg.workers) as u64;
        let mut total = FrameTally::default();
        let mut frames = 0u64;
        'outer: loop {
            let results: Vec<Result<FrameTally>> = pool.install(|| {
                (frames..frames + batch).into_par_iter().map(|f| self.simulate_frame(snr_idx, f)).collect()
            });
            for r in results {
                total.add(&r?);
                frames += 1;
                if self.stop_reached(&total) {
                    break 'outer;
                }
            }
        }
        Ok(self.summarize(snr_idx, frames, total))
    }

    fn summarize(&self, snr_idx: usize, frames: u64, t: FrameTally) -> PointResult {
        let dc = &self.cfg.decoder;
        let w = self.code.n() / 2;
        let ratio = |a: u64, b: u64| if b == 0 { 0.0 } else { a as f64 / b as f64 };
        let record = BerRecord {
            snr_db: self.cfg.snr_db[snr_idx],
            bits_simulated: t.bits,
            bit_errors: t.bit_errors,
            post_fec_ber: ratio(t.bit_errors, t.bits),
            pre_fec_ber: ratio(t.channel_errors, t.channel_bits),
            blocks_emitted: t.blocks,
            block_errors: t.block_errors,
        };
        let eta2 = match (self.cfg.timing, &t.baseline) {
            (Some(tm), Some(base)) => eta2(&t.counters, base, tm.v_sc, tm.v_ep).ok(),
            _ => None,
        };
        PointResult {
            record,
            frames,
            censored: t.block_errors < self.cfg.stop.min_block_errors,
            n_bar: t.counters.n_bar(),
            eta1: eta1(&t.counters, w, dc.window, dc.iterations),
            counters: t.counters,
            baseline: t.baseline,
            eta2,
        }
    }

    pub fn run(&self) -> Result<Vec<PointResult>> {
        (0..self.cfg.snr_db.len()).map(|i| self.run_point(i)).collect()
    }
}

/// Runs every SNR point of `cfg`.
pub fn run_ber_sweep(cfg: &SimConfig) -> Result<Vec<PointResult>> {
    Simulator::new(cfg.clone())?.run()
}

fn fill_bits<R: Rng>(rng: &mut R, out: &mut [u8]) {
    for chunk in out.chunks_mut(64) {
        let r: u64 = rng.random();
        for (i, b) in chunk.iter_mut().enumerate() {
            *b = ((r >> i) & 1) as u8;
        }
    }
}

fn count_diff(a: &[u8], b: &[u8]) -> u64 {
    a.iter().zip(b).filter(|(x, y)| x != y).count() as u64
}
