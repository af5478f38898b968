use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use shaped_pc::analysis::{crossing_point, rate_curve, write_rate_curve_csv};
use shaped_pc::pipeline::{enumerate_feasible, PasParams};
use shaped_pc::sim::{find_operating_point, run_montecarlo, SimConfig};
use shaped_pc::AnalysisError;

/// PAS with product codes under hard-decision decoding.
#[derive(Parser)]
#[command(name = "shaped-pc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Frame feasibility.
    #[command(subcommand)]
    Params(ParamsCmd),
    /// Hard-decision achievable rates.
    #[command(subcommand)]
    Rates(RatesCmd),
    /// Monte Carlo simulation. Worker count comes from SHAPED_PC_WORKERS.
    #[command(subcommand)]
    Sim(SimCmd),
}

#[derive(Subcommand)]
enum ParamsCmd {
    /// List every feasible shortening for a BCH component and 2^m-ASK.
    Enumerate {
        #[arg(long)]
        v: u32,
        #[arg(long)]
        t: u32,
        #[arg(long)]
        m: u32,
        #[arg(long, conflicts_with = "csv")]
        json: bool,
        #[arg(long)]
        csv: bool,
    },
}

#[derive(Subcommand)]
enum RatesCmd {
    /// Shaped and uniform rate curves, QAM units.
    Sweep {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        snr_start: f64,
        #[arg(long)]
        snr_stop: f64,
        #[arg(long)]
        step: f64,
        /// Frame gamma used for the SE column.
        #[arg(long, default_value_t = 0.0)]
        gamma: f64,
        /// CSV output (the default prints an aligned table).
        #[arg(long)]
        csv: bool,
    },
    /// SNR where the frame SE meets the shaped rate curve.
    Crossing {
        #[arg(long)]
        v: u32,
        #[arg(long)]
        t: u32,
        #[arg(long)]
        s: u32,
        #[arg(long)]
        m: u32,
    },
}

#[derive(Args)]
struct SimArgs {
    #[arg(long)]
    config: PathBuf,
    /// Overrides the master seed of the config.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum SimCmd {
    /// Block error rates at every configured SNR.
    Run(SimArgs),
    /// Smallest SNR meeting the target block error probability.
    OperatingPoint(SimArgs),
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Params(ParamsCmd::Enumerate { v, t, m, json, csv }) => {
            let rows = enumerate_feasible(v, t, m)?;
            if json {
                writeln!(out, "{}", serde_json::to_string_pretty(&rows)?)?;
            } else if csv {
                writeln!(out, "gamma,s,n_c,k_c,n,gamma_n,rate")?;
                for p in &rows {
                    writeln!(out, "{},{},{},{},{},{},{}", p.gamma, p.s, p.n_c, p.k_c, p.n, p.gamma_n, p.rate)?;
                }
            } else {
                print_table(&mut out, &rows)?;
                writeln!(out, "{} feasible values of s", rows.len())?;
            }
        }
        Command::Rates(RatesCmd::Sweep {
            m,
            snr_start,
            snr_stop,
            step,
            gamma,
            csv,
        }) => {
            if !(step > 0.0 && snr_stop >= snr_start) {
                bail!("need --step > 0 and --snr-stop >= --snr-start");
            }
            let count = ((snr_stop - snr_start) / step + 1e-9).floor() as usize + 1;
            let snrs: Vec<f64> = (0..count).map(|i| snr_start + step * i as f64).collect();
            let points = rate_curve(m, &snrs, gamma)?;
            if csv {
                write_rate_curve_csv(&points, &mut out)?;
            } else {
                writeln!(out, "{:>8} {:>10} {:>12} {:>13} {:>9}", "snr_db", "lambda*", "r_hdd_shaped", "r_hdd_uniform", "se_frame")?;
                for p in &points {
                    writeln!(
                        out,
                        "{:>8.2} {:>10.5} {:>12.5} {:>13.5} {:>9.5}",
                        p.snr_db,
                        p.lambda_star,
                        p.r_hdd_shaped,
                        p.r_hdd_uniform,
                        p.se_frame()
                    )?;
                }
            }
        }
        Command::Rates(RatesCmd::Crossing { v, t, s, m }) => {
            let params = PasParams::derive(v, t, s, m, 0)?;
            match crossing_point(&params) {
                Ok(db) => writeln!(out, "{db:.4}")?,
                Err(AnalysisError::NoCrossing { .. }) => writeln!(out, "none")?,
                Err(e) => return Err(e.into()),
            }
        }
        Command::Sim(SimCmd::Run(args)) => {
            let cfg = load_config(&args)?;
            let result = run_montecarlo(&cfg)?;
            let json = result.to_json();
            if let Some(path) = &cfg.output.json {
                fs::write(path, &json).with_context(|| format!("writing {}", path.display()))?;
            }
            if let Some(path) = &cfg.output.csv {
                let f = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
                result.write_csv(f)?;
            }
            writeln!(out, "{json}")?;
            result.write_csv(&mut out)?;
        }
        Command::Sim(SimCmd::OperatingPoint(args)) => {
            let cfg = load_config(&args)?;
            let op = find_operating_point(&cfg)?;
            let json = serde_json::to_string_pretty(&op)?;
            if let Some(path) = &cfg.output.json {
                fs::write(path, &json).with_context(|| format!("writing {}", path.display()))?;
            }
            writeln!(out, "{json}")?;
        }
    }
    Ok(())
}

fn load_config(args: &SimArgs) -> Result<SimConfig> {
    let text = fs::read_to_string(&args.config)
        .with_context(|| format!("reading {}", args.config.display()))?;
    let mut cfg = SimConfig::from_json(&text).with_context(|| format!("parsing {}", args.config.display()))?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

fn print_table(out: &mut impl Write, rows: &[PasParams]) -> io::Result<()> {
    writeln!(out, "{:>8} {:>5} {:>6} {:>6} {:>8} {:>8} {:>7}", "gamma", "s", "n_c", "k_c", "n", "gamma_n", "R")?;
    for p in rows {
        writeln!(
            out,
            "{:>8.4} {:>5} {:>6} {:>6} {:>8} {:>8} {:>7.4}",
            p.gamma, p.s, p.n_c, p.k_c, p.n, p.gamma_n, p.rate
        )?;
    }
    Ok(())
}
