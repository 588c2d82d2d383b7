use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use newton_renorm::experiment::{
    compare_solutions, simulate, summary_path, sweep, write_comparison_csv, write_comparison_json,
    write_summary_json, write_sweep, write_trajectory, ExperimentConfig, OutputFormat, SweepParam,
};
use newton_renorm::{Error, Result};

#[derive(Parser)]
#[command(
    name = "renorm",
    version,
    about = "Renormalized difference schemes for weakly nonlinear oscillators"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Iterate the scheme and write (n, t, z).
    Simulate(Common),
    /// Oracle vs naive vs renormalized solutions, with a summary.
    Compare(Common),
    /// Comparison summaries over a list of parameter values.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// dt, eps or a0_re
        #[arg(long)]
        param: String,
        /// Comma-separated values
        #[arg(long)]
        values: String,
    },
}

#[derive(Args)]
struct Common {
    /// key=value config file; flags override it
    #[arg(long)]
    config: Option<PathBuf>,
    /// cubic or vdp
    #[arg(long)]
    kind: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    dt: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    eps: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    a0_re: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    a0_im: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    t_max: Option<String>,
    /// paper or exact
    #[arg(long)]
    root_convention: Option<String>,
    /// one_plus_c or one_plus_c_squared
    #[arg(long)]
    kappa_convention: Option<String>,
    /// true or false
    #[arg(long)]
    vdp_halving: Option<String>,
    /// paper or mickens
    #[arg(long)]
    scheme: Option<String>,
    /// Output file; stdout when absent
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// csv or json
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    stride: Option<String>,
}

impl Common {
    fn config(&self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::from_file(path)?,
            None => ExperimentConfig::default(),
        };
        let overrides = [
            ("kind", &self.kind),
            ("dt", &self.dt),
            ("eps", &self.eps),
            ("a0_re", &self.a0_re),
            ("a0_im", &self.a0_im),
            ("t_max", &self.t_max),
            ("root_convention", &self.root_convention),
            ("kappa_convention", &self.kappa_convention),
            ("vdp_halving", &self.vdp_halving),
            ("scheme", &self.scheme),
            ("output_format", &self.format),
            ("stride", &self.stride),
        ];
        for (key, value) in overrides {
            if let Some(v) = value {
                cfg.apply(key, v)?;
            }
        }
        if let Some(path) = &self.output {
            cfg.output_path = Some(path.clone());
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn open_output(cfg: &ExperimentConfig) -> Result<Box<dyn Write>> {
    Ok(match &cfg.output_path {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn parse_values(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse()
                .map_err(|_| Error::Config(format!("values: '{s}' is not a number")))
        })
        .collect()
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate(common) => {
            let cfg = common.config()?;
            let traj = simulate(&cfg)?;
            let mut out = open_output(&cfg)?;
            write_trajectory(&mut out, &traj, cfg.output_format)?;
            out.flush()?;
        }
        Command::Compare(common) => {
            let cfg = common.config()?;
            let cmp = compare_solutions(&cfg)?;
            let mut out = open_output(&cfg)?;
            match cfg.output_format {
                OutputFormat::Json => write_comparison_json(&mut out, &cmp)?,
                OutputFormat::Csv => {
                    write_comparison_csv(&mut out, &cmp)?;
                    match &cfg.output_path {
                        Some(path) => {
                            let mut side = BufWriter::new(File::create(summary_path(path))?);
                            write_summary_json(&mut side, &cmp.summary)?;
                            side.flush()?;
                            write_summary_json(&mut io::stdout().lock(), &cmp.summary)?;
                        }
                        None => write_summary_json(&mut io::stderr().lock(), &cmp.summary)?,
                    }
                }
            }
            out.flush()?;
        }
        Command::Sweep {
            common,
            param,
            values,
        } => {
            let cfg = common.config()?;
            let param = SweepParam::parse(&param)?;
            let values = parse_values(&values)?;
            let rows = sweep(&cfg, param, &values)?;
            let mut out = open_output(&cfg)?;
            write_sweep(&mut out, param, &rows, cfg.output_format)?;
            out.flush()?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
