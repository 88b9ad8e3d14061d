use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use gdof::cli::{self, parse_exponents, parse_grid, parse_point, parse_template, Command, Exponents, Format, JobSpec};
use gdof::finite_snr::SnrLadder;
use gdof::{AntennaProfile, Error, Result};

#[derive(Parser)]
#[command(name = "gdof", version, about = "GDoF region calculator for the two-user MIMO interference channel")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Bounds and vertices of the GDoF region.
    Region(Common),
    /// Symmetric GDoF and the bound that attains it.
    Sym(Common),
    /// Symmetric GDoF over a grid of `a` for an exponent template.
    Sweep(Common),
    /// Compare a channel with its reciprocal.
    Reciprocity(Common),
    /// Common/private split achieving `--point`.
    Split(Common),
    /// Monte Carlo TIN slopes next to the exact symmetric GDoF.
    Simulate(Common),
    /// Interference regime of an (M,N,M,N) channel.
    Classify(Common),
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
    Svg,
}

#[derive(clap::Args)]
struct Common {
    /// Antenna counts M1 N1 M2 N2.
    #[arg(num_args = 4, value_names = ["M1", "N1", "M2", "N2"], required = true)]
    antennas: Vec<u32>,
    /// Exponents `a11,a12,a21,a22`, a single `a` for `[1,a,a,1]`, or a
    /// template in `a` such as `1,a,a,1` (sweep).
    #[arg(long, allow_hyphen_values = true)]
    alpha: String,
    /// Sweep grid: `lo:hi:step` or a comma list.
    #[arg(long)]
    grid: Option<String>,
    /// Target point `d1,d2` for split.
    #[arg(long)]
    point: Option<String>,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    /// Output file; defaults to $GDOF_OUTPUT_DIR/<command>.<ext> or stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Channel draws per SNR step (simulate).
    #[arg(long, default_value_t = 5)]
    draws: usize,
    /// SNR ladder as comma-separated values (simulate).
    #[arg(long)]
    snr: Option<String>,
}

fn build(command: Command, args: Common) -> Result<JobSpec> {
    let [m1, n1, m2, n2]: [u32; 4] = args
        .antennas
        .try_into()
        .map_err(|_| Error::Parse("expected four antenna counts".into()))?;
    let antennas = AntennaProfile::new(m1, n1, m2, n2)?;
    let exponents = if args.alpha.contains('a') {
        Exponents::Template(parse_template(&args.alpha)?)
    } else {
        Exponents::Fixed(parse_exponents(&args.alpha)?)
    };
    let mut spec = JobSpec::new(command, antennas, exponents);
    if let Some(g) = &args.grid {
        spec.grid = parse_grid(g)?;
    }
    if let Some(p) = &args.point {
        spec.point = Some(parse_point(p)?);
    }
    spec.format = match args.format {
        FormatArg::Json => Format::Json,
        FormatArg::Csv => Format::Csv,
        FormatArg::Svg => Format::Svg,
    };
    spec.output = args.output;
    spec.seed = args.seed;
    if args.draws == 0 {
        return Err(Error::Domain("--draws must be positive".into()));
    }
    spec.simulation.draws = args.draws;
    if let Some(snr) = &args.snr {
        let values = snr
            .split(',')
            .map(|v| v.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad SNR value {v:?}"))))
            .collect::<Result<Vec<_>>>()?;
        spec.simulation.ladder = SnrLadder::new(values)?;
    }
    Ok(spec)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = match cli.command {
        Cmd::Region(a) => (Command::Region, a),
        Cmd::Sym(a) => (Command::Sym, a),
        Cmd::Sweep(a) => (Command::Sweep, a),
        Cmd::Reciprocity(a) => (Command::Reciprocity, a),
        Cmd::Split(a) => (Command::Split, a),
        Cmd::Simulate(a) => (Command::Simulate, a),
        Cmd::Classify(a) => (Command::Classify, a),
    };
    match build(command, args).and_then(|spec| cli::run(&spec)) {
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", cli::error_json(&e));
            ExitCode::from(2)
        }
    }
}
