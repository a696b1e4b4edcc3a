use std::collections::VecDeque;
use std::sync::Arc;

use super::soft::{soft_decode_word, LazyRng, WordContext};
use super::{DecoderConfig, Variant};
use crate::bch::{BchCode, Syndrome};
use crate::complexity::WindowStats;
use crate::error::{Error, Result};
use crate::marking::{mark_bit, mark_quantized, sabm_hub_select, MarkClass, Quantizer};
use crate::rng::substream_seed;
use crate::staircase::{ComponentWordRef, SccBlock};

/// Hard decisions of one received block plus the per-bit reliabilities |LLR|
/// (row-major). `None` means the block is known exactly.
#[derive(Clone, Debug)]
pub struct ReceivedBlock {
    pub hard: SccBlock,
    pub reliabilities: Option<Vec<f64>>,
}

impl ReceivedBlock {
    pub fn new(hard: SccBlock, reliabilities: Vec<f64>) -> Self {
        Self { hard, reliabilities: Some(reliabilities) }
    }

    pub fn known(block: SccBlock) -> Self {
        Self { hard: block, reliabilities: None }
    }
}

#[derive(Clone, Debug)]
struct Slot {
    block: SccBlock,
    /// Row-major marks; empty for the standard decoder.
    marks: Vec<MarkClass>,
    /// SABM: HUB columns of each row, least reliable first.
    row_hubs: Vec<Vec<u16>>,
}

/// A component word with its per-position side information.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentWord {
    pub bits: Vec<u8>,
    pub marks: Vec<Option<MarkClass>>,
    pub crossing_zero: Vec<bool>,
    pub syndrome_zero: bool,
}

/// The `L` blocks currently being decoded, oldest first, with their marks
/// and the syndrome state of every component word of the `L - 1` pairs.
#[derive(Clone, Debug)]
pub struct SccWindow {
    code: Arc<BchCode>,
    config: DecoderConfig,
    quantizer: Option<Quantizer>,
    w: usize,
    slots: VecDeque<Slot>,
    // Pair p (blocks p-1, p) lives at index p - 1.
    syndromes: VecDeque<Vec<Syndrome>>,
    position: u64,
}

impl SccWindow {
    pub fn new(code: Arc<BchCode>, config: DecoderConfig, blocks: Vec<ReceivedBlock>) -> Result<Self> {
        config.validate()?;
        if blocks.len() != config.window {
            return Err(Error::LengthMismatch { expected: config.window, actual: blocks.len() });
        }
        let w = code.n() / 2;
        let quantizer = config.quantizer()?;
        let mut win = Self {
            code,
            config,
            quantizer,
            w,
            slots: VecDeque::with_capacity(config.window),
            syndromes: VecDeque::with_capacity(config.window - 1),
            position: 0,
        };
        for b in blocks {
            let slot = win.ingest(b)?;
            win.slots.push_back(slot);
        }
        for p in 1..config.window {
            let syn = win.pair_syndromes(p);
            win.syndromes.push_back(syn);
        }
        Ok(win)
    }

    pub fn config(&self) -> &DecoderConfig {
        &self.config
    }

    pub fn w(&self) -> usize {
        self.w
    }

    /// Number of slides performed so far.
    pub fn position(&self) -> u64 {
        self.position
    }

    pub fn blocks(&self) -> impl Iterator<Item = &SccBlock> {
        self.slots.iter().map(|s| &s.block)
    }

    pub fn block(&self, i: usize) -> &SccBlock {
        &self.slots[i].block
    }

    /// Mark of a bit, or `None` when its block is outside the marked region.
    pub fn mark(&self, block: usize, row: usize, col: usize) -> Option<MarkClass> {
        if block < self.config.first_marked_block() {
            return None;
        }
        self.slots[block].marks.get(row * self.w + col).copied()
    }

    pub fn syndrome(&self, r: ComponentWordRef) -> Syndrome {
        self.syndromes[r.pair - 1][r.row]
    }

    fn ingest(&self, rb: ReceivedBlock) -> Result<Slot> {
        let w = self.w;
        if rb.hard.w != w {
            return Err(Error::LengthMismatch { expected: w, actual: rb.hard.w });
        }
        if let Some(r) = &rb.reliabilities {
            if r.len() != w * w {
                return Err(Error::LengthMismatch { expected: w * w, actual: r.len() });
            }
        }
        let th = self.config.thresholds;
        let rel = |i: usize| rb.reliabilities.as_ref().map_or(f64::INFINITY, |r| r[i]);
        let (marks, row_hubs) = match self.config.variant {
            Variant::Standard => (Vec::new(), Vec::new()),
            Variant::Isabm => {
                let marks = (0..w * w)
                    .map(|i| match &self.quantizer {
                        Some(q) => mark_quantized(&th, q, rel(i)),
                        None => mark_bit(&th, rel(i)),
                    })
                    .collect();
                (marks, Vec::new())
            }
            Variant::Sabm => {
                let count = self.code.d0() - self.code.t() - 1;
                let mut marks = Vec::with_capacity(w * w);
                let mut row_hubs = Vec::with_capacity(w);
                for row in 0..w {
                    let values: Vec<f64> = (0..w)
                        .map(|c| {
                            let v = rel(row * w + c);
                            self.quantizer.as_ref().map_or(v, |q| q.quantize(v))
                        })
                        .collect();
                    let start = marks.len();
                    marks.extend(values.iter().map(|&v| if v >= th.delta1 { MarkClass::Hrb } else { MarkClass::Ub }));
                    // HRBs never become flip candidates.
                    let order = sabm_hub_select(&values, w);
                    let hubs: Vec<u16> = order
                        .into_iter()
                        .filter(|&c| marks[start + c] != MarkClass::Hrb)
                        .take(count)
                        .map(|c| c as u16)
                        .collect();
                    for &c in &hubs {
                        marks[start + c as usize] = MarkClass::Hub;
                    }
                    row_hubs.push(hubs);
                }
                (marks, row_hubs)
            }
        };
        Ok(Slot { block: rb.hard, marks, row_hubs })
    }

    fn pair_syndromes(&self, p: usize) -> Vec<Syndrome> {
        let w = self.w;
        let older = &self.slots[p - 1].block;
        let newer = &self.slots[p].block;
        (0..w)
            .map(|j| {
                let mut s = Syndrome::default();
                for r in 0..w {
                    if older.get(r, j) != 0 {
                        s ^= self.code.position_syndrome(r);
                    }
                }
                for (c, &b) in newer.row(j).iter().enumerate() {
                    if b != 0 {
                        s ^= self.code.position_syndrome(w + c);
                    }
                }
                s
            })
            .collect()
    }

    /// True when every stored syndrome matches a recomputation from the bits.
    pub fn syndromes_consistent(&self) -> bool {
        (1..self.config.window).all(|p| self.pair_syndromes(p) == self.syndromes[p - 1])
    }

    pub fn component_word(&self, r: ComponentWordRef) -> Result<ComponentWord> {
        if r.pair == 0 || r.pair >= self.config.window || r.row >= self.w {
            return Err(Error::OutOfRange(format!("{r:?} in a window of {} blocks", self.config.window)));
        }
        let view = WordView { win: self, r };
        let bits = (0..2 * self.w)
            .map(|pos| {
                let loc = r.locate(self.w, pos);
                self.slots[loc.block].block.get(loc.row, loc.col)
            })
            .collect();
        Ok(ComponentWord {
            bits,
            marks: (0..2 * self.w).map(|pos| view.mark(pos)).collect(),
            crossing_zero: (0..2 * self.w).map(|pos| view.crossing_zero(pos)).collect(),
            syndrome_zero: self.syndrome(r).is_zero(),
        })
    }

    /// Flips word positions and keeps every affected syndrome current.
    fn apply(&mut self, r: ComponentWordRef, positions: &[usize]) {
        let w = self.w;
        let pairs = self.config.window - 1;
        for &pos in positions {
            let loc = r.locate(w, pos);
            let bit = &mut self.slots[loc.block].block.bits[loc.row * w + loc.col];
            *bit ^= 1;
            for (wr, wpos) in loc.protecting_words(w) {
                if wr.pair >= 1 && wr.pair <= pairs {
                    self.syndromes[wr.pair - 1][wr.row] ^= self.code.position_syndrome(wpos);
                }
            }
        }
    }

    /// Flips one bit of a window block (test and fault-injection helper).
    pub fn flip_bit(&mut self, block: usize, row: usize, col: usize) {
        let w = self.w;
        let (r, pos) = if block >= 1 {
            (ComponentWordRef::new(block, row), w + col)
        } else {
            (ComponentWordRef::new(1, col), row)
        };
        self.apply(r, &[pos]);
    }

    /// Runs the configured number of decoding iterations at the current
    /// position. Pairs are visited newest to oldest, words in row order.
    pub fn iterate(&mut self) -> WindowStats {
        let window = self.config.window;
        let first_soft = self.config.first_soft_pair();
        let mut stats = WindowStats::new(self.config.iterations, window - 1);
        let code = Arc::clone(&self.code);
        for h in 0..self.config.iterations {
            for p in (1..window).rev() {
                for j in 0..self.w {
                    let r = ComponentWordRef::new(p, j);
                    let syn = self.syndromes[p - 1][j];
                    if syn.is_zero() {
                        stats.record(h, p, 1, 0);
                        continue;
                    }
                    if p < first_soft {
                        stats.record(h, p, 1, 1);
                        if let Some(errors) = code.decode_syndrome(&syn) {
                            self.apply(r, &errors);
                        }
                        continue;
                    }
                    let seed = substream_seed(self.config.rng_seed, &[self.position, h as u64, p as u64, j as u64]);
                    let out = soft_decode_word(
                        &code,
                        self.config.variant,
                        &WordView { win: self, r },
                        &mut LazyRng::new(seed),
                    );
                    stats.record(h, p, out.bdd_calls as u32, out.pattern_estimations as u32);
                    if !out.flips.is_empty() {
                        self.apply(r, &out.flips);
                    }
                }
            }
        }
        stats
    }

    /// Emits the oldest block and ingests `incoming` as the newest, with
    /// freshly computed marks. Surviving blocks keep their marks.
    pub fn slide(&mut self, incoming: ReceivedBlock) -> Result<SccBlock> {
        let slot = self.ingest(incoming)?;
        let oldest = self.slots.pop_front().expect("window is never empty");
        self.syndromes.pop_front();
        self.slots.push_back(slot);
        let newest_pair = self.config.window - 1;
        let syn = self.pair_syndromes(newest_pair);
        self.syndromes.push_back(syn);
        self.position += 1;
        Ok(oldest.block)
    }

    pub fn into_blocks(self) -> Vec<SccBlock> {
        self.slots.into_iter().map(|s| s.block).collect()
    }
}

struct WordView<'a> {
    win: &'a SccWindow,
    r: ComponentWordRef,
}

impl WordContext for WordView<'_> {
    fn syndrome(&self) -> Syndrome {
        self.win.syndrome(self.r)
    }

    fn mark(&self, pos: usize) -> Option<MarkClass> {
        let loc = self.r.locate(self.win.w, pos);
        self.win.mark(loc.block, loc.row, loc.col)
    }

    fn crossing_zero(&self, pos: usize) -> bool {
        let w = self.win.w;
        let p = self.r.pair;
        if pos < w {
            // Older block: crossing word is row `pos` of pair p - 1.
            p >= 2 && self.win.syndromes[p - 2][pos].is_zero()
        } else {
            // Newer block: crossing word is row `pos - w` of pair p + 1.
            p + 1 < self.win.config.window && self.win.syndromes[p][pos - w].is_zero()
        }
    }

    fn hub_candidates(&self) -> Vec<usize> {
        let w = self.win.w;
        match self.win.config.variant {
            Variant::Sabm => self.win.slots[self.r.pair].row_hubs[self.r.row].iter().map(|&c| w + c as usize).collect(),
            _ => (0..2 * w).filter(|&pos| self.mark(pos) == Some(MarkClass::Hub)).collect(),
        }
    }
}

/// A block leaving the window, with the counts of the window position that
/// decoded it last.
#[derive(Clone, Debug)]
pub struct Emission {
    pub block: SccBlock,
    pub stats: WindowStats,
}

/// Streaming front end: starts from the known all-zero block B0, fills the
/// window, then emits one block per ingested block.
#[derive(Debug)]
pub struct WindowDecoder {
    code: Arc<BchCode>,
    config: DecoderConfig,
    pending: Vec<ReceivedBlock>,
    window: Option<SccWindow>,
    last_stats: Option<WindowStats>,
}

impl WindowDecoder {
    pub fn new(code: Arc<BchCode>, config: DecoderConfig) -> Result<Self> {
        config.validate()?;
        let w = code.n() / 2;
        Ok(Self {
            code,
            config,
            pending: vec![ReceivedBlock::known(SccBlock::zeros(w, 0))],
            window: None,
            last_stats: None,
        })
    }

    pub fn window(&self) -> Option<&SccWindow> {
        self.window.as_ref()
    }

    /// Counts of the most recent window position, if the window is full.
    pub fn current_stats(&self) -> Option<&WindowStats> {
        self.last_stats.as_ref()
    }

    pub fn push(&mut self, block: ReceivedBlock) -> Result<Option<Emission>> {
        match &mut self.window {
            None => {
                self.pending.push(block);
                if self.pending.len() == self.config.window {
                    let blocks = std::mem::take(&mut self.pending);
                    let mut win = SccWindow::new(Arc::clone(&self.code), self.config, blocks)?;
                    self.last_stats = Some(win.iterate());
                    self.window = Some(win);
                }
                Ok(None)
            }
            Some(win) => {
                let stats = self.last_stats.take().expect("stats recorded at every position");
                let emitted = win.slide(block)?;
                self.last_stats = Some(win.iterate());
                Ok(Some(Emission { block: emitted, stats }))
            }
        }
    }

    /// Blocks still held (already decoded at the final position), oldest first.
    pub fn finish(self) -> Vec<SccBlock> {
        match self.window {
            Some(w) => w.into_blocks(),
            None => self.pending.into_iter().map(|b| b.hard).collect(),
        }
    }

    /// Decodes a complete stream of received blocks B1, B2, ... and returns the
    /// decoded blocks in order (B0 excluded).
    pub fn decode_stream(
        code: Arc<BchCode>,
        config: DecoderConfig,
        blocks: impl IntoIterator<Item = ReceivedBlock>,
    ) -> Result<Vec<SccBlock>> {
        let mut dec = Self::new(code, config)?;
        let mut out = Vec::new();
        for b in blocks {
            if let Some(e) = dec.push(b)? {
                out.push(e.block);
            }
        }
        out.extend(dec.finish());
        out.retain(|b| b.index != 0);
        Ok(out)
    }
}
