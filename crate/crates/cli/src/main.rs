//! `gvm-spdc`: reproduce phase-matching, GVM, joint-spectrum and HOM numerics
//! for the bundled crystal registry as CSV/JSON files with run manifests.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "gvm-spdc", version, about = "Group-velocity-matched SPDC sources")]
struct Cli {
    /// Crystal registry file (TOML); defaults to the bundled registry.
    #[arg(long, global = true)]
    registry: Option<PathBuf>,
    /// Output directory for CSV/JSON files and manifests.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Grid points per axis for JSA and map grids.
    #[arg(long, global = true, default_value_t = 200,
          value_parser = clap::value_parser!(u32).range(16..))]
    grid: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Condition {
    Gvm1,
    Gvm2,
    Gvm3,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ConditionSet {
    Gvm1,
    Gvm2,
    Gvm3,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Fold {
    Two,
    Four,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Side {
    Signals,
    Idlers,
}

/// `lo:hi` in micrometers.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval(pub f64, pub f64);

fn parse_interval(s: &str) -> Result<Interval, String> {
    let (a, b) = s.split_once(':').ok_or("expected lo:hi")?;
    let lo: f64 = a.trim().parse().map_err(|e| format!("{a}: {e}"))?;
    let hi: f64 = b.trim().parse().map_err(|e| format!("{b}: {e}"))?;
    if !(lo > 0.0 && hi > lo) {
        return Err(format!("need 0 < lo < hi, got {lo}:{hi}"));
    }
    Ok(Interval(lo, hi))
}

/// `signal,idler` full spans in nanometers.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Spans(pub f64, pub f64);

fn parse_spans(s: &str) -> Result<Spans, String> {
    let (a, b) = s.split_once(',').unwrap_or((s, s));
    let sa: f64 = a.trim().parse().map_err(|e| format!("{a}: {e}"))?;
    let sb: f64 = b.trim().parse().map_err(|e| format!("{b}: {e}"))?;
    if !(sa > 0.0 && sb > 0.0) {
        return Err("spans must be positive".into());
    }
    Ok(Spans(sa, sb))
}

#[derive(Subcommand)]
enum Command {
    /// Show one crystal's registry record.
    Info { id: String },
    /// Phase-matching angle (BPM) or poling period (QPM) at given wavelengths.
    Pm {
        id: String,
        #[arg(long)]
        pump_um: f64,
        /// Defaults to the degenerate 2 x pump.
        #[arg(long)]
        signal_um: Option<f64>,
        #[arg(long, default_value_t = 1)]
        order: u32,
    },
    /// Degenerate GVM solutions with the crystal's preset interaction.
    Gvm {
        id: String,
        #[arg(long, value_enum, default_value_t = ConditionSet::All)]
        condition: ConditionSet,
        /// Pump search window, lo:hi um.
        #[arg(long, value_parser = parse_interval)]
        pump_range_um: Option<Interval>,
        #[arg(long, default_value_t = 1)]
        order: u32,
    },
    /// Poling period and ridge-angle maps over (pump, signal) for a QPM crystal.
    Map {
        id: String,
        #[arg(long, value_parser = parse_interval)]
        pump_um: Interval,
        #[arg(long, value_parser = parse_interval)]
        signal_um: Interval,
    },
    /// Every crystal and condition; BPM and QPM summaries.
    Survey,
    /// Joint spectral intensity, marginals and Schmidt purity.
    Jsa(JsaArgs),
    /// Two-fold or heralded four-fold HOM trace.
    Hom {
        #[command(flatten)]
        jsa: JsaArgs,
        #[arg(long, value_enum, default_value_t = Fold::Four)]
        fold: Fold,
        /// Which photons meet at the beamsplitter (four-fold).
        #[arg(long, value_enum, default_value_t = Side::Signals)]
        interfere: Side,
        #[arg(long, default_value_t = 201)]
        delays: usize,
        /// Half range of the delay sweep; defaults to five estimated dip widths,
        /// capped below the revival delay of the sampled spectrum.
        #[arg(long)]
        delay_half_range_fs: Option<f64>,
    },
}

#[derive(Args, Clone, Debug)]
pub struct JsaArgs {
    pub id: String,
    #[arg(long, value_enum)]
    pub condition: Condition,
    /// Pump wavelength; defaults to the condition's GVM solution.
    #[arg(long)]
    pub pump_um: Option<f64>,
    /// Defaults to 100, 200, 100 mm for GVM1, GVM2, GVM3.
    #[arg(long)]
    pub length_mm: Option<f64>,
    /// Pump bandwidth parameter; defaults to 4, 8, 11 nm for GVM1, GVM2, GVM3.
    #[arg(long)]
    pub pump_bw_nm: Option<f64>,
    /// Explicit full spans `signal,idler` in nm (one value for both).
    #[arg(long, value_parser = parse_spans)]
    pub span_nm: Option<Spans>,
    #[arg(long, default_value_t = 1)]
    pub order: u32,
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    let ctx = match commands::Context::new(cli.registry.as_deref(), cli.out, cli.grid as usize, cli.format, argv) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let result = match cli.command {
        Command::Info { id } => commands::info(&ctx, &id),
        Command::Pm {
            id,
            pump_um,
            signal_um,
            order,
        } => commands::pm(&ctx, &id, pump_um, signal_um, order),
        Command::Gvm {
            id,
            condition,
            pump_range_um,
            order,
        } => commands::gvm(&ctx, &id, condition, pump_range_um, order),
        Command::Map {
            id,
            pump_um,
            signal_um,
        } => commands::map(&ctx, &id, pump_um, signal_um),
        Command::Survey => commands::survey(&ctx),
        Command::Jsa(args) => commands::jsa(&ctx, &args),
        Command::Hom {
            jsa,
            fold,
            interfere,
            delays,
            delay_half_range_fs,
        } => commands::hom(&ctx, &jsa, fold, interfere, delays, delay_half_range_fs),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
