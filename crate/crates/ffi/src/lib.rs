//! C interface to `stairdec`.
//!
//! Every function returns a [`StairdecStatus`]. On failure a description is
//! available from [`stairdec_last_error`] on the same thread until the next
//! call. Objects are opaque and must be released with their `_free` function.
//! Strings returned by the library are released with [`stairdec_string_free`].

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;
use std::sync::Arc;

use stairdec::bch::{BchCode, BddOutcome, CodeSpec};
use stairdec::channel::{ChannelParams, Constellation};
use stairdec::decoder::{DecoderConfig, ReceivedBlock, Variant, WindowDecoder};
use stairdec::marking::{Quantizer, Thresholds};
use stairdec::sim::{sidecar_json, write_csv, ConfigFile, SimConfig, Simulator};
use stairdec::staircase::SccBlock;
use stairdec::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StairdecStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    LengthMismatch = 3,
    Io = 4,
    Panic = 5,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(e: &Error) -> StairdecStatus {
    match e {
        Error::LengthMismatch { .. } => StairdecStatus::LengthMismatch,
        Error::Io(_) | Error::Csv(_) => StairdecStatus::Io,
        _ => StairdecStatus::InvalidArgument,
    }
}

/// Runs `f`, mapping errors and panics to status codes.
fn guard(f: impl FnOnce() -> Result<(), (StairdecStatus, String)>) -> StairdecStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => StairdecStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            StairdecStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (StairdecStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (StairdecStatus, String) {
    (StairdecStatus::NullPointer, format!("{what} is null"))
}

fn invalid(msg: impl Into<String>) -> (StairdecStatus, String) {
    (StairdecStatus::InvalidArgument, msg.into())
}

unsafe fn slice_in<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], (StairdecStatus, String)> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(slice::from_raw_parts(p, len))
}

unsafe fn slice_out<'a, T>(p: *mut T, len: usize, what: &str) -> Result<&'a mut [T], (StairdecStatus, String)> {
    if len == 0 {
        return Ok(&mut []);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(slice::from_raw_parts_mut(p, len))
}

unsafe fn c_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (StairdecStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| invalid(format!("{what} is not valid UTF-8")))
}

fn into_c_string(s: String) -> Result<*mut c_char, (StairdecStatus, String)> {
    CString::new(s).map(CString::into_raw).map_err(|_| invalid("output contains a NUL byte"))
}

/// Message for the last failed call on this thread, or NULL. Valid until the
/// next call into the library from this thread.
#[no_mangle]
pub extern "C" fn stairdec_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by the library.
#[no_mangle]
pub unsafe extern "C" fn stairdec_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

// ---------------------------------------------------------------- BCH codes

/// A component code.
pub struct StairdecBch {
    code: BchCode,
}

/// Creates the code with transmitted parameters `(n, k, t)`, e.g. 256, 239, 2.
#[no_mangle]
pub unsafe extern "C" fn stairdec_bch_new(n: usize, k: usize, t: usize, out: *mut *mut StairdecBch) -> StairdecStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let code = CodeSpec::parse(&format!("{n},{k},{t}")).and_then(|s| s.build()).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(StairdecBch { code }));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn stairdec_bch_free(code: *mut StairdecBch) {
    if !code.is_null() {
        drop(Box::from_raw(code));
    }
}

/// Reports `n`, `k`, `t` and the minimum distance. Any output may be NULL.
#[no_mangle]
pub unsafe extern "C" fn stairdec_bch_params(
    code: *const StairdecBch,
    n: *mut usize,
    k: *mut usize,
    t: *mut usize,
    d0: *mut usize,
) -> StairdecStatus {
    guard(|| {
        let c = &code.as_ref().ok_or_else(|| null("code"))?.code;
        for (p, v) in [(n, c.n()), (k, c.k()), (t, c.t()), (d0, c.d0())] {
            if !p.is_null() {
                *p = v;
            }
        }
        Ok(())
    })
}

/// Systematic encoding of `k` information bits (one per byte) into `n` bits.
#[no_mangle]
pub unsafe extern "C" fn stairdec_bch_encode(
    code: *const StairdecBch,
    info: *const u8,
    info_len: usize,
    codeword: *mut u8,
    codeword_len: usize,
) -> StairdecStatus {
    guard(|| {
        let c = &code.as_ref().ok_or_else(|| null("code"))?.code;
        let info = slice_in(info, info_len, "info")?;
        let out = slice_out(codeword, codeword_len, "codeword")?;
        if out.len() != c.n() {
            return Err(lib_err(Error::LengthMismatch { expected: c.n(), actual: out.len() }));
        }
        out.copy_from_slice(&c.encode(info).map_err(lib_err)?);
        Ok(())
    })
}

/// Bounded-distance decoding of `n` received bits. On success `decoded`
/// holds the codeword and `corrected` the number of flipped bits; on a
/// decoding failure `decoded` is a copy of the input and `corrected` is -1.
#[no_mangle]
pub unsafe extern "C" fn stairdec_bch_decode(
    code: *const StairdecBch,
    word: *const u8,
    len: usize,
    decoded: *mut u8,
    corrected: *mut i32,
) -> StairdecStatus {
    guard(|| {
        let c = &code.as_ref().ok_or_else(|| null("code"))?.code;
        let word = slice_in(word, len, "word")?;
        let out = slice_out(decoded, len, "decoded")?;
        if corrected.is_null() {
            return Err(null("corrected"));
        }
        match c.bdd_decode(word).map_err(lib_err)? {
            BddOutcome::Success { codeword, error_positions } => {
                out.copy_from_slice(&codeword);
                *corrected = error_positions.len() as i32;
            }
            BddOutcome::Failure => {
                out.copy_from_slice(word);
                *corrected = -1;
            }
        }
        Ok(())
    })
}

// ------------------------------------------------------ channel and marking

/// Per-bit LLRs of `count` received M-PAM samples. `llrs` receives
/// `count * log2(order)` values, symbol by symbol, most significant bit first.
/// Positive values favour bit 1.
#[no_mangle]
pub unsafe extern "C" fn stairdec_compute_llr(
    order: usize,
    snr_db: f64,
    noise_variance: f64,
    llr_variance: f64,
    samples: *const f64,
    count: usize,
    llrs: *mut f64,
    llrs_len: usize,
) -> StairdecStatus {
    guard(|| {
        let c = Constellation::pam(order).map_err(lib_err)?;
        let params =
            ChannelParams::with_variances(stairdec::channel::db_to_linear(snr_db), noise_variance, llr_variance)
                .map_err(lib_err)?;
        let m = c.bits_per_symbol();
        let ys = slice_in(samples, count, "samples")?;
        let out = slice_out(llrs, llrs_len, "llrs")?;
        if out.len() != count * m {
            return Err(lib_err(Error::LengthMismatch { expected: count * m, actual: out.len() }));
        }
        for (y, chunk) in ys.iter().zip(out.chunks_mut(m)) {
            c.compute_llr_into(&params, *y, chunk);
        }
        Ok(())
    })
}

/// Quantizes reliabilities with the `bits`-bit quantizer aligned to `delta1`.
#[no_mangle]
pub unsafe extern "C" fn stairdec_quantize(
    delta1: f64,
    bits: u32,
    reliabilities: *const f64,
    count: usize,
    out: *mut f64,
) -> StairdecStatus {
    guard(|| {
        let q = Quantizer::from_threshold(delta1, bits).map_err(lib_err)?;
        let input = slice_in(reliabilities, count, "reliabilities")?;
        let output = slice_out(out, count, "out")?;
        for (o, &r) in output.iter_mut().zip(input) {
            *o = q.quantize(r);
        }
        Ok(())
    })
}

/// Saturation `T` and step of the quantizer aligned to `delta1`.
#[no_mangle]
pub unsafe extern "C" fn stairdec_quantizer_params(
    delta1: f64,
    bits: u32,
    saturation: *mut f64,
    step: *mut f64,
) -> StairdecStatus {
    guard(|| {
        let q = Quantizer::from_threshold(delta1, bits).map_err(lib_err)?;
        if saturation.is_null() || step.is_null() {
            return Err(null("output"));
        }
        *saturation = q.saturation;
        *step = q.step;
        Ok(())
    })
}

// ------------------------------------------------------------ window decoder

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StairdecVariant {
    Standard = 0,
    Sabm = 1,
    Isabm = 2,
}

/// Decoder settings. Obtain defaults from [`stairdec_decoder_config_default`].
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct StairdecDecoderConfig {
    pub variant: StairdecVariant,
    pub window: usize,
    pub iterations: usize,
    pub k: usize,
    pub delta1: f64,
    pub delta2: f64,
    pub quant_bits: u32,
    pub seed: u64,
}

impl From<StairdecDecoderConfig> for DecoderConfig {
    fn from(c: StairdecDecoderConfig) -> Self {
        DecoderConfig {
            variant: match c.variant {
                StairdecVariant::Standard => Variant::Standard,
                StairdecVariant::Sabm => Variant::Sabm,
                StairdecVariant::Isabm => Variant::Isabm,
            },
            window: c.window,
            iterations: c.iterations,
            k: c.k,
            thresholds: Thresholds { delta1: c.delta1, delta2: c.delta2 },
            quant_bits: c.quant_bits,
            rng_seed: c.seed,
        }
    }
}

#[no_mangle]
pub extern "C" fn stairdec_decoder_config_default() -> StairdecDecoderConfig {
    let d = DecoderConfig::default();
    StairdecDecoderConfig {
        variant: StairdecVariant::Isabm,
        window: d.window,
        iterations: d.iterations,
        k: d.k,
        delta1: d.thresholds.delta1,
        delta2: d.thresholds.delta2,
        quant_bits: d.quant_bits,
        seed: d.rng_seed,
    }
}

/// Streaming window decoder.
pub struct StairdecDecoder {
    decoder: WindowDecoder,
    w: usize,
    next_index: u64,
}

#[no_mangle]
pub unsafe extern "C" fn stairdec_decoder_new(
    code: *const StairdecBch,
    config: StairdecDecoderConfig,
    out: *mut *mut StairdecDecoder,
) -> StairdecStatus {
    guard(|| {
        let c = &code.as_ref().ok_or_else(|| null("code"))?.code;
        if out.is_null() {
            return Err(null("out"));
        }
        let w = c.n() / 2;
        let decoder = WindowDecoder::new(Arc::new(c.clone()), config.into()).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(StairdecDecoder { decoder, w, next_index: 1 }));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn stairdec_decoder_free(dec: *mut StairdecDecoder) {
    if !dec.is_null() {
        drop(Box::from_raw(dec));
    }
}

/// Side length `w` of the blocks the decoder expects.
#[no_mangle]
pub unsafe extern "C" fn stairdec_decoder_block_side(dec: *const StairdecDecoder, w: *mut usize) -> StairdecStatus {
    guard(|| {
        let d = dec.as_ref().ok_or_else(|| null("decoder"))?;
        if w.is_null() {
            return Err(null("w"));
        }
        *w = d.w;
        Ok(())
    })
}

/// Feeds the next received block: `w * w` hard bits row-major and, for soft
/// variants, the matching reliabilities |LLR| (NULL treats the block as
/// known exactly). When the window is full the oldest decoded block is
/// written to `emitted` and `*has_emitted` is set to 1, otherwise to 0.
#[no_mangle]
pub unsafe extern "C" fn stairdec_decoder_push(
    dec: *mut StairdecDecoder,
    hard: *const u8,
    reliabilities: *const f64,
    len: usize,
    emitted: *mut u8,
    has_emitted: *mut i32,
) -> StairdecStatus {
    guard(|| {
        let d = dec.as_mut().ok_or_else(|| null("decoder"))?;
        let n = d.w * d.w;
        if len != n {
            return Err(lib_err(Error::LengthMismatch { expected: n, actual: len }));
        }
        if has_emitted.is_null() {
            return Err(null("has_emitted"));
        }
        let out = slice_out(emitted, n, "emitted")?;
        let bits = slice_in(hard, n, "hard")?.iter().map(|&b| b & 1).collect();
        let block = SccBlock { bits, w: d.w, index: d.next_index };
        let rb = if reliabilities.is_null() {
            ReceivedBlock::known(block)
        } else {
            ReceivedBlock::new(block, slice_in(reliabilities, n, "reliabilities")?.to_vec())
        };
        let emission = d.decoder.push(rb).map_err(lib_err)?;
        d.next_index += 1;
        match emission {
            Some(e) => {
                out.copy_from_slice(&e.block.bits);
                *has_emitted = 1;
            }
            None => *has_emitted = 0,
        }
        Ok(())
    })
}

// ---------------------------------------------------------------- simulation

/// A configured BER sweep.
pub struct StairdecSimulation {
    config: SimConfig,
}

/// Builds a sweep from a JSON object using the command-line option names
/// (`code`, `mod`, `snr_db`, `decoder`, `window`, `iters`, `k`, ...). Missing
/// keys keep their defaults. `config_json` may be NULL for all defaults.
#[no_mangle]
pub unsafe extern "C" fn stairdec_simulation_new(
    config_json: *const c_char,
    out: *mut *mut StairdecSimulation,
) -> StairdecStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let mut config = SimConfig::default();
        if !config_json.is_null() {
            let text = c_str(config_json, "config_json")?;
            let file: ConfigFile = serde_json::from_str(text).map_err(|e| invalid(format!("config: {e}")))?;
            file.apply(&mut config).map_err(lib_err)?;
        }
        config.validate().map_err(lib_err)?;
        *out = Box::into_raw(Box::new(StairdecSimulation { config }));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn stairdec_simulation_free(sim: *mut StairdecSimulation) {
    if !sim.is_null() {
        drop(Box::from_raw(sim));
    }
}

/// Runs the sweep. `csv` receives the result table and `json` (if not NULL)
/// the sidecar document; release both with [`stairdec_string_free`].
#[no_mangle]
pub unsafe extern "C" fn stairdec_simulation_run(
    sim: *const StairdecSimulation,
    csv: *mut *mut c_char,
    json: *mut *mut c_char,
) -> StairdecStatus {
    guard(|| {
        let s = sim.as_ref().ok_or_else(|| null("simulation"))?;
        if csv.is_null() {
            return Err(null("csv"));
        }
        let results = Simulator::new(s.config.clone()).and_then(|m| m.run()).map_err(lib_err)?;
        let mut buf = Vec::new();
        write_csv(&results, &mut buf).map_err(lib_err)?;
        let table = String::from_utf8(buf).map_err(|_| invalid("non UTF-8 CSV"))?;
        let side = if json.is_null() { None } else { Some(sidecar_json(&s.config, &results).to_string()) };
        *csv = into_c_string(table)?;
        if let Some(side) = side {
            *json = into_c_string(side)?;
        }
        Ok(())
    })
}
