//! Staircase block geometry, stream encoding and per-block interleaving.
//!
//! Blocks are `w x w` bit matrices with `w = n/2`. Within the pair of blocks
//! `(B[i-1], B[i])`, component word `j` is column `j` of the older block
//! followed by row `j` of the newer block, so every row of `[B[i-1]^T B[i]]`
//! is a component codeword. Each new block carries `k - w` information
//! columns followed by `n - k` parity columns.

use std::fmt;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bch::BchCode;
use crate::error::{Error, Result};
use crate::rng::substream_seed;

/// Stream tag for interleaver permutations.
const INTERLEAVER_STREAM: u64 = 0x1e7e_a7e5;

#[derive(Clone, Debug)]
pub struct SccParams {
    code: Arc<BchCode>,
    w: usize,
    pub interleave: bool,
    pub interleaver_seed: u64,
}

impl SccParams {
    pub fn new(code: Arc<BchCode>, interleave: bool, interleaver_seed: u64) -> Result<Self> {
        let n = code.n();
        if !n.is_multiple_of(2) {
            return Err(Error::InvalidCode(format!("component length {n} is odd")));
        }
        let w = n / 2;
        if code.k() <= w {
            return Err(Error::InvalidCode(format!(
                "information length {} leaves no information columns for w = {w}",
                code.k()
            )));
        }
        Ok(Self { code, w, interleave, interleaver_seed })
    }

    pub fn code(&self) -> &BchCode {
        &self.code
    }

    pub fn code_arc(&self) -> &Arc<BchCode> {
        &self.code
    }

    /// Block side length.
    pub fn w(&self) -> usize {
        self.w
    }

    /// Information columns per block row.
    pub fn info_cols(&self) -> usize {
        self.code.k() - self.w
    }

    pub fn info_bits_per_block(&self) -> usize {
        self.w * self.info_cols()
    }

    pub fn rate(&self) -> f64 {
        self.info_bits_per_block() as f64 / (self.w * self.w) as f64
    }

    /// Permutation of the `w^2` positions used for block `index`.
    ///
    /// Transmitted position `k` carries block position `perm[k]`.
    pub fn permutation(&self, index: u64) -> Vec<u32> {
        let mut perm: Vec<u32> = (0..(self.w * self.w) as u32).collect();
        if self.interleave {
            let mut rng =
                ChaCha8Rng::seed_from_u64(substream_seed(self.interleaver_seed, &[INTERLEAVER_STREAM, index]));
            perm.shuffle(&mut rng);
        }
        perm
    }

    pub fn interleave(&self, block: &SccBlock) -> SccBlock {
        let perm = self.permutation(block.index);
        SccBlock { bits: permute(&block.bits, &perm), w: block.w, index: block.index }
    }

    pub fn deinterleave(&self, block: &SccBlock) -> SccBlock {
        let perm = self.permutation(block.index);
        SccBlock { bits: unpermute(&block.bits, &perm), w: block.w, index: block.index }
    }
}

/// `out[k] = data[perm[k]]`.
pub fn permute<T: Copy>(data: &[T], perm: &[u32]) -> Vec<T> {
    perm.iter().map(|&p| data[p as usize]).collect()
}

/// Inverse of [`permute`].
pub fn unpermute<T: Copy + Default>(data: &[T], perm: &[u32]) -> Vec<T> {
    let mut out = vec![T::default(); data.len()];
    for (k, &p) in perm.iter().enumerate() {
        out[p as usize] = data[k];
    }
    out
}

/// One `w x w` staircase block, row-major, one bit per byte.
#[derive(Clone, PartialEq, Eq)]
pub struct SccBlock {
    pub bits: Vec<u8>,
    pub w: usize,
    pub index: u64,
}

impl SccBlock {
    pub fn zeros(w: usize, index: u64) -> Self {
        Self { bits: vec![0; w * w], w, index }
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.bits[row * self.w + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, bit: u8) {
        self.bits[row * self.w + col] = bit;
    }

    pub fn row(&self, row: usize) -> &[u8] {
        &self.bits[row * self.w..(row + 1) * self.w]
    }

    pub fn column(&self, col: usize) -> impl Iterator<Item = u8> + '_ {
        (0..self.w).map(move |r| self.get(r, col))
    }

    /// Debug dump: one line per row of '0'/'1' characters.
    pub fn dump(&self) -> String {
        let mut s = String::with_capacity(self.w * (self.w + 1));
        for r in 0..self.w {
            s.extend(self.row(r).iter().map(|&b| if b != 0 { '1' } else { '0' }));
            s.push('\n');
        }
        s
    }

    pub fn parse_dump(text: &str, index: u64) -> Result<Self> {
        let rows: Vec<&str> = text.lines().filter(|l| !l.is_empty()).collect();
        let w = rows.len();
        let mut bits = Vec::with_capacity(w * w);
        for line in rows {
            if line.len() != w {
                return Err(Error::LengthMismatch { expected: w, actual: line.len() });
            }
            for ch in line.chars() {
                bits.push(match ch {
                    '0' => 0,
                    '1' => 1,
                    other => return Err(Error::Config(format!("bad block character '{other}'"))),
                });
            }
        }
        Ok(Self { bits, w, index })
    }
}

impl fmt::Debug for SccBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ones = self.bits.iter().filter(|&&b| b != 0).count();
        write!(f, "SccBlock {{ index: {}, w: {}, ones: {} }}", self.index, self.w, ones)
    }
}

/// Component word `row` of the block pair `(pair - 1, pair)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ComponentWordRef {
    pub pair: usize,
    pub row: usize,
}

/// Location of one bit of a component word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BitLocation {
    pub block: usize,
    pub row: usize,
    pub col: usize,
}

impl ComponentWordRef {
    pub fn new(pair: usize, row: usize) -> Self {
        Self { pair, row }
    }

    /// Where word position `pos` lives. Positions `0..w` are the older block's
    /// column `row`, positions `w..2w` the newer block's row `row`.
    #[inline]
    pub fn locate(&self, w: usize, pos: usize) -> BitLocation {
        if pos < w {
            BitLocation { block: self.pair - 1, row: pos, col: self.row }
        } else {
            BitLocation { block: self.pair, row: self.row, col: pos - w }
        }
    }
}

impl BitLocation {
    /// The two component words protecting this bit, as `(ref, position)`.
    /// The first entry is the word of pair `block` (bit in its newer half),
    /// the second that of pair `block + 1` (bit in its older half).
    #[inline]
    pub fn protecting_words(&self, w: usize) -> [(ComponentWordRef, usize); 2] {
        [
            (ComponentWordRef::new(self.block, self.row), w + self.col),
            (ComponentWordRef::new(self.block + 1, self.col), self.row),
        ]
    }
}

/// Assembles the bits of a component word from a run of consecutive blocks
/// (index 0 = oldest).
pub fn component_word(blocks: &[SccBlock], r: ComponentWordRef) -> Result<Vec<u8>> {
    if r.pair == 0 || r.pair >= blocks.len() {
        return Err(Error::OutOfRange(format!("pair {} with {} blocks", r.pair, blocks.len())));
    }
    let w = blocks[0].w;
    if r.row >= w {
        return Err(Error::OutOfRange(format!("row {} with w = {w}", r.row)));
    }
    Ok((0..2 * w)
        .map(|pos| {
            let loc = r.locate(w, pos);
            blocks[loc.block].get(loc.row, loc.col)
        })
        .collect())
}

/// Sequential staircase encoder starting from the all-zero block B0.
#[derive(Clone, Debug)]
pub struct StaircaseEncoder {
    params: SccParams,
    prev: SccBlock,
}

impl StaircaseEncoder {
    pub fn new(params: SccParams) -> Self {
        let prev = SccBlock::zeros(params.w(), 0);
        Self { params, prev }
    }

    pub fn params(&self) -> &SccParams {
        &self.params
    }

    /// Most recently emitted block (B0 before the first call).
    pub fn previous(&self) -> &SccBlock {
        &self.prev
    }

    /// Encodes the next block from `w * (k - w)` information bits, row-major
    /// over the information columns.
    pub fn encode_block(&mut self, info: &[u8]) -> Result<SccBlock> {
        let w = self.params.w();
        let cols = self.params.info_cols();
        if info.len() != w * cols {
            return Err(Error::LengthMismatch { expected: w * cols, actual: info.len() });
        }
        let code = self.params.code();
        let mut block = SccBlock::zeros(w, self.prev.index + 1);
        let mut msg = vec![0u8; code.k()];
        let mut cw = vec![0u8; code.n()];
        for j in 0..w {
            for (r, slot) in msg[..w].iter_mut().enumerate() {
                *slot = self.prev.get(r, j);
            }
            msg[w..].copy_from_slice(&info[j * cols..(j + 1) * cols]);
            code.encode_into(&msg, &mut cw);
            block.bits[j * w..(j + 1) * w].copy_from_slice(&cw[w..]);
        }
        self.prev = block.clone();
        Ok(block)
    }
}

/// Encodes a whole information stream, one block per `w * (k - w)` bits.
pub fn scc_encode(params: &SccParams, info_stream: &[u8]) -> Result<Vec<SccBlock>> {
    let chunk = params.info_bits_per_block();
    if !info_stream.len().is_multiple_of(chunk) {
        return Err(Error::LengthMismatch {
            expected: (info_stream.len() / chunk + 1) * chunk,
            actual: info_stream.len(),
        });
    }
    let mut enc = StaircaseEncoder::new(params.clone());
    info_stream.chunks(chunk).map(|c| enc.encode_block(c)).collect()
}

/// Information bits of a block in encoder order.
pub fn block_info_bits(params: &SccParams, block: &SccBlock) -> Vec<u8> {
    let cols = params.info_cols();
    (0..params.w()).flat_map(|r| block.row(r)[..cols].iter().copied()).collect()
}
