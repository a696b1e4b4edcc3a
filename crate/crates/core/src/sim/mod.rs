//! Monte Carlo BER sweeps over the AWGN channel.

mod config;
mod output;
mod sweep;

pub use config::{parse_modulation, parse_snr_grid, ConfigFile, SimConfig, SnrSpec, StopRule, Timing, COUNTED_BLOCKS};
pub use output::{sidecar_json, write_csv, write_csv_file, write_json_file, CSV_HEADER};
pub use sweep::{run_ber_sweep, BerRecord, FrameTally, PointResult, Simulator};
