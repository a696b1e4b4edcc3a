use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use stairdec::bch::CodeSpec;
use stairdec::decoder::Variant;
use stairdec::marking::Thresholds;
use stairdec::sim::{
    parse_modulation, parse_snr_grid, write_csv, write_csv_file, write_json_file, ConfigFile, SimConfig, Simulator,
    Timing,
};

/// Monte Carlo BER sweep for staircase codes with window decoding.
#[derive(Parser, Debug)]
#[command(name = "stairdec", version)]
struct Cli {
    /// Component code as n,k,t (e.g. 256,239,2 or 250,233,2).
    #[arg(long, env = "STAIRDEC_CODE", default_value = "256,239,2")]
    code: String,
    /// PAM order: 2, 4, 8 or 16.
    #[arg(long = "mod", env = "STAIRDEC_MOD", default_value = "2")]
    modulation: String,
    /// SNR grid in dB: start:step:stop, a comma list, or one value.
    #[arg(long, env = "STAIRDEC_SNR_DB", default_value = "6.57", allow_hyphen_values = true)]
    snr_db: String,
    /// standard, sabm or isabm.
    #[arg(long, env = "STAIRDEC_DECODER", default_value = "isabm")]
    decoder: String,
    #[arg(long, env = "STAIRDEC_WINDOW", default_value_t = 9)]
    window: usize,
    #[arg(long, env = "STAIRDEC_ITERS", default_value_t = 7)]
    iters: usize,
    /// Leading block pairs decoded with plain BDD (iSABM).
    #[arg(long, env = "STAIRDEC_K", default_value_t = 2)]
    k: usize,
    #[arg(long, env = "STAIRDEC_DELTA1", default_value_t = 10.0)]
    delta1: f64,
    #[arg(long, env = "STAIRDEC_DELTA2", default_value_t = 2.5)]
    delta2: f64,
    /// Reliability quantizer bits, 0 for unquantized.
    #[arg(long, env = "STAIRDEC_QUANT_BITS", default_value_t = 0)]
    quant_bits: u32,
    #[arg(long, env = "STAIRDEC_INTERLEAVE", default_value_t = true, action = clap::ArgAction::Set)]
    interleave: bool,
    #[arg(long, env = "STAIRDEC_SEED", default_value_t = 1)]
    seed: u64,
    #[arg(long, env = "STAIRDEC_MIN_BLOCK_ERRORS", default_value_t = 100)]
    min_block_errors: u64,
    #[arg(long, env = "STAIRDEC_MIN_BITS", default_value_t = 0)]
    min_bits: u64,
    #[arg(long, env = "STAIRDEC_MAX_BITS", default_value_t = 1_000_000_000)]
    max_bits: u64,
    #[arg(long, env = "STAIRDEC_WORKERS", default_value_t = 1)]
    workers: usize,
    /// CSV output path; stdout when omitted.
    #[arg(long, env = "STAIRDEC_OUT")]
    out: Option<PathBuf>,
    /// JSON sidecar path.
    #[arg(long, env = "STAIRDEC_JSON")]
    json: Option<PathBuf>,
    /// TOML file whose keys override the options above.
    #[arg(long, env = "STAIRDEC_CONFIG")]
    config: Option<PathBuf>,
    /// Noise variance per real dimension.
    #[arg(long, env = "STAIRDEC_NOISE_VARIANCE", default_value_t = stairdec::channel::DEFAULT_NOISE_VARIANCE)]
    noise_variance: f64,
    /// Variance assumed by the LLR computation.
    #[arg(long, env = "STAIRDEC_LLR_VARIANCE", default_value_t = stairdec::channel::DEFAULT_LLR_VARIANCE)]
    llr_variance: f64,
    /// Syndrome-computation cost; with --vep also decodes every frame with the standard decoder.
    #[arg(long, env = "STAIRDEC_VSC", requires = "vep")]
    vsc: Option<f64>,
    /// Error-pattern-estimation cost.
    #[arg(long, env = "STAIRDEC_VEP", requires = "vsc")]
    vep: Option<f64>,
    /// Blocks per frame that are counted after the warm-up.
    #[arg(long, env = "STAIRDEC_COUNTED_BLOCKS", default_value_t = stairdec::sim::COUNTED_BLOCKS)]
    counted_blocks: usize,
    /// Suppress per-point progress on stderr.
    #[arg(long, short)]
    quiet: bool,
}

fn build_config(cli: &Cli) -> stairdec::Result<SimConfig> {
    let mut cfg = SimConfig {
        code: CodeSpec::parse(&cli.code)?,
        modulation: parse_modulation(&cli.modulation)?,
        snr_db: parse_snr_grid(&cli.snr_db)?,
        interleave: cli.interleave,
        workers: cli.workers,
        out: cli.out.clone(),
        json: cli.json.clone(),
        seed: cli.seed,
        noise_variance: cli.noise_variance,
        llr_variance: cli.llr_variance,
        counted_blocks: cli.counted_blocks,
        timing: cli.vsc.zip(cli.vep).map(|(v_sc, v_ep)| Timing { v_sc, v_ep }),
        ..SimConfig::default()
    };
    cfg.decoder.variant = cli.decoder.parse::<Variant>()?;
    cfg.decoder.window = cli.window;
    cfg.decoder.iterations = cli.iters;
    cfg.decoder.k = cli.k;
    cfg.decoder.thresholds = Thresholds { delta1: cli.delta1, delta2: cli.delta2 };
    cfg.decoder.quant_bits = cli.quant_bits;
    cfg.stop.min_block_errors = cli.min_block_errors;
    cfg.stop.min_bits = cli.min_bits;
    cfg.stop.max_bits = cli.max_bits;
    if let Some(path) = &cli.config {
        ConfigFile::load(path)?.apply(&mut cfg)?;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: Cli) -> stairdec::Result<()> {
    let cfg = build_config(&cli)?;
    let sim = Simulator::new(cfg.clone())?;
    let mut results = Vec::with_capacity(cfg.snr_db.len());
    for i in 0..cfg.snr_db.len() {
        let r = sim.run_point(i)?;
        if !cli.quiet {
            eprintln!(
                "snr {:>6} dB  pre {:.3e}  post {:.3e}  block errors {:>5}/{:<6} eta1 {:.4}{}",
                r.record.snr_db,
                r.record.pre_fec_ber,
                r.record.post_fec_ber,
                r.record.block_errors,
                r.record.blocks_emitted,
                r.eta1,
                if r.censored { "  (censored)" } else { "" }
            );
        }
        results.push(r);
    }
    match &cfg.out {
        Some(path) => write_csv_file(&results, path)?,
        None => write_csv(&results, std::io::stdout().lock())?,
    }
    if let Some(path) = &cfg.json {
        write_json_file(&cfg, &results, path)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("stairdec: {e}");
            ExitCode::FAILURE
        }
    }
}
