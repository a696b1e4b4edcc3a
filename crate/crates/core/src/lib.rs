//! Staircase codes with extended/shortened BCH component codes and
//! sliding-window decoders: plain BDD, soft-aided bit marking (SABM) and its
//! improved variant (iSABM), plus a Monte Carlo BER harness.

pub mod bch;
pub mod channel;
pub mod complexity;
pub mod decoder;
pub mod error;
pub mod gf;
pub mod marking;
pub mod rng;
pub mod sim;
pub mod staircase;

pub use bch::{BchCode, BddOutcome, CodeSpec, Syndrome, SyndromeVector};
pub use channel::{ChannelParams, Constellation};
pub use complexity::{eta1, eta2, ComplexityCounters, WindowStats};
pub use decoder::{DecoderConfig, ReceivedBlock, SccWindow, Variant, WindowDecoder};
pub use error::{Error, Result};
pub use gf::GaloisField;
pub use marking::{MarkClass, Quantizer, Thresholds};
pub use sim::{run_ber_sweep, BerRecord, SimConfig};
pub use staircase::{SccBlock, SccParams, StaircaseEncoder};
