//! Experiment configuration and the simulate / compare / sweep pipelines
//! behind the `renorm` binary.
//!
//! Configuration files hold one `key = value` per line; `#` starts a comment.
//! Keys are the field names of [`ExperimentConfig`]. Command-line overrides
//! are applied afterwards through the same [`ExperimentConfig::apply`].

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::{envelope, profile_from_errors, zero_crossing_period};
use crate::asymptotic::GlobalSolution;
use crate::error::{Error, Result};
use crate::linear::{RootConvention, SchemeParams};
use crate::oracle::{init_from_amplitude, iterate_mickens_strided, iterate_strided, Trajectory};
use crate::perturbation::{AmplitudePair, NaiveSolution, NonlinearityKind};
use crate::renormalization::KappaConvention;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KindChoice {
    Cubic,
    Vdp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeVariant {
    /// `dt^2` weighting.
    Paper,
    /// `4 sin^2(dt/2)` weighting.
    Mickens,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub kind: KindChoice,
    pub dt: f64,
    pub eps: f64,
    pub a0_re: f64,
    pub a0_im: f64,
    pub t_max: f64,
    pub root_convention: RootConvention,
    pub kappa_convention: KappaConvention,
    pub vdp_halving: bool,
    pub scheme: SchemeVariant,
    pub output_path: Option<PathBuf>,
    pub output_format: OutputFormat,
    pub stride: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            kind: KindChoice::Cubic,
            dt: 0.01,
            eps: 0.01,
            a0_re: 0.5,
            a0_im: 0.0,
            t_max: 200.0,
            root_convention: RootConvention::ExactUnitModulus,
            kappa_convention: KappaConvention::OnePlusCSquared,
            vdp_halving: false,
            scheme: SchemeVariant::Paper,
            output_path: None,
            output_format: OutputFormat::Csv,
            stride: 1,
        }
    }
}

fn config_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

fn parse_f64(key: &str, value: &str) -> Result<f64> {
    value
        .parse()
        .map_err(|_| config_err(format!("{key}: expected a number, got '{value}'")))
}

impl ExperimentConfig {
    /// Parses `key = value` lines on top of the defaults.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| config_err(format!("line {}: expected key=value", lineno + 1)))?;
            cfg.apply(key.trim(), value.trim())?;
        }
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| config_err(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Sets one field from its textual form. Dashes in keys are accepted.
    pub fn apply(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.replace('-', "_");
        match key.as_str() {
            "kind" => {
                self.kind = match value {
                    "cubic" => KindChoice::Cubic,
                    "vdp" | "van_der_pol" => KindChoice::Vdp,
                    _ => return Err(config_err(format!("kind: unknown value '{value}'"))),
                }
            }
            "dt" => self.dt = parse_f64(&key, value)?,
            "eps" => self.eps = parse_f64(&key, value)?,
            "a0_re" => self.a0_re = parse_f64(&key, value)?,
            "a0_im" => self.a0_im = parse_f64(&key, value)?,
            "t_max" => self.t_max = parse_f64(&key, value)?,
            "root_convention" => {
                self.root_convention = match value {
                    "paper" | "paper_first_order" => RootConvention::PaperFirstOrder,
                    "exact" | "exact_unit_modulus" => RootConvention::ExactUnitModulus,
                    _ => {
                        return Err(config_err(format!(
                            "root_convention: unknown value '{value}'"
                        )))
                    }
                }
            }
            "kappa_convention" => {
                self.kappa_convention = match value {
                    "one_plus_c" | "paper" => KappaConvention::PaperOnePlusC,
                    "one_plus_c_squared" => KappaConvention::OnePlusCSquared,
                    _ => {
                        return Err(config_err(format!(
                            "kappa_convention: unknown value '{value}'"
                        )))
                    }
                }
            }
            "vdp_halving" => {
                self.vdp_halving = value.parse().map_err(|_| {
                    config_err(format!(
                        "vdp_halving: expected true or false, got '{value}'"
                    ))
                })?
            }
            "scheme" => {
                self.scheme = match value {
                    "paper" => SchemeVariant::Paper,
                    "mickens" => SchemeVariant::Mickens,
                    _ => return Err(config_err(format!("scheme: unknown value '{value}'"))),
                }
            }
            "output_path" => self.output_path = Some(PathBuf::from(value)),
            "output_format" => {
                self.output_format = match value {
                    "csv" => OutputFormat::Csv,
                    "json" => OutputFormat::Json,
                    _ => {
                        return Err(config_err(format!(
                            "output_format: unknown value '{value}'"
                        )))
                    }
                }
            }
            "stride" => {
                self.stride = value.parse().map_err(|_| {
                    config_err(format!(
                        "stride: expected a positive integer, got '{value}'"
                    ))
                })?
            }
            _ => return Err(config_err(format!("unknown key '{key}'"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) {
            return Err(config_err("dt must be positive"));
        }
        if !(self.dt < 2.0) {
            return Err(config_err("dt must be below 2"));
        }
        if self.scheme == SchemeVariant::Mickens && !(self.dt < std::f64::consts::PI) {
            return Err(config_err("dt must be below pi for the mickens scheme"));
        }
        if !(self.eps >= 0.0) || !self.eps.is_finite() {
            return Err(config_err("eps must be non-negative"));
        }
        if !(self.t_max > 0.0) || !self.t_max.is_finite() {
            return Err(config_err("t_max must be positive"));
        }
        if !(self.a0_re.is_finite() && self.a0_im.is_finite()) {
            return Err(config_err("a0 must be finite"));
        }
        if self.stride < 1 {
            return Err(config_err("stride must be at least 1"));
        }
        if self.kind == KindChoice::Cubic && self.vdp_halving {
            log::warn!("vdp_halving has no effect for the cubic nonlinearity");
        }
        if self.kind == KindChoice::Vdp
            && self.kappa_convention == KappaConvention::PaperOnePlusC
            && self.a0_re == 0.0
            && self.a0_im != 0.0
        {
            return Err(config_err("kappa_convention one_plus_c needs a0_re != 0"));
        }
        if self.steps() < 2 {
            return Err(config_err("t_max / dt must allow at least 2 steps"));
        }
        Ok(())
    }

    pub fn nonlinearity(&self) -> NonlinearityKind {
        match self.kind {
            KindChoice::Cubic => NonlinearityKind::Cubic,
            KindChoice::Vdp => NonlinearityKind::VanDerPol {
                halving: self.vdp_halving,
            },
        }
    }

    pub fn params(&self) -> Result<SchemeParams> {
        SchemeParams::new(self.dt, self.eps, self.root_convention)
    }

    pub fn a0(&self) -> Complex64 {
        Complex64::new(self.a0_re, self.a0_im)
    }

    pub fn steps(&self) -> usize {
        (self.t_max / self.dt).round() as usize
    }

    pub fn global_solution(&self) -> Result<GlobalSolution> {
        GlobalSolution::new(
            self.nonlinearity(),
            self.params()?,
            self.a0(),
            self.kappa_convention,
        )
    }
}

impl fmt::Display for KindChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KindChoice::Cubic => "cubic",
            KindChoice::Vdp => "vdp",
        })
    }
}

/// The brute-force trajectory for a configuration.
pub fn simulate(cfg: &ExperimentConfig) -> Result<Trajectory> {
    cfg.validate()?;
    let params = cfg.params()?;
    let (z0, z1) = init_from_amplitude(cfg.a0(), &params);
    let steps = cfg.steps();
    match cfg.scheme {
        SchemeVariant::Paper => {
            iterate_strided(cfg.nonlinearity(), &params, z0, z1, steps, cfg.stride)
        }
        SchemeVariant::Mickens => iterate_mickens_strided(
            cfg.nonlinearity(),
            cfg.dt,
            cfg.eps,
            z0,
            z1,
            steps,
            cfg.stride,
        ),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CompareRow {
    pub n: usize,
    pub t: f64,
    pub z_oracle: f64,
    pub z_naive: f64,
    pub z_renorm_discrete: f64,
    pub z_renorm_continuum: f64,
    pub err_naive: f64,
    pub err_renorm: f64,
}

impl CompareRow {
    pub const HEADER: [&'static str; 8] = [
        "n",
        "t",
        "z_oracle",
        "z_naive",
        "z_renorm_discrete",
        "z_renorm_continuum",
        "err_naive",
        "err_renorm",
    ];
}

/// Summary statistics of a comparison; every field is a function of the rows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CompareSummary {
    pub steps: usize,
    pub max_err_naive: f64,
    pub max_err_renorm: f64,
    pub slope_err_naive: f64,
    pub slope_err_renorm: f64,
    /// `max_err_naive / steps`.
    pub drift_per_step: f64,
    /// Mean upward zero-crossing gap of `z_oracle`.
    pub period: Option<f64>,
    /// Mean of the last (up to five) peaks of `|z_oracle|`.
    pub limit_amplitude: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub rows: Vec<CompareRow>,
    pub summary: CompareSummary,
}

/// Oracle, naive and renormalized solutions side by side.
///
/// `err_renorm` measures the discrete global solution with continuum
/// amplitudes (`z_renorm_continuum`) against the oracle.
pub fn compare_solutions(cfg: &ExperimentConfig) -> Result<Comparison> {
    let oracle = simulate(cfg)?;
    let params = cfg.params()?;
    let kind = cfg.nonlinearity();
    let naive = NaiveSolution::new(kind, &AmplitudePair::real(cfg.a0()), &params)?;
    let global = cfg.global_solution()?;
    let last_index = oracle.index(oracle.len() - 1);
    let discrete = global.discrete_flow_values(last_index)?;

    let rows: Vec<CompareRow> = oracle
        .values
        .iter()
        .enumerate()
        .map(|(i, &z_oracle)| {
            let n = oracle.index(i);
            let z_naive = naive.eval(n as i64);
            let z_renorm_continuum = global.eval_discrete(n as i64);
            CompareRow {
                n,
                t: n as f64 * cfg.dt,
                z_oracle,
                z_naive,
                z_renorm_discrete: discrete[n],
                z_renorm_continuum,
                err_naive: (z_naive - z_oracle).abs(),
                err_renorm: (z_renorm_continuum - z_oracle).abs(),
            }
        })
        .collect();
    let summary = summarize(&rows);
    Ok(Comparison { rows, summary })
}

/// Recomputes the summary from rows alone.
pub fn summarize(rows: &[CompareRow]) -> CompareSummary {
    let spacing = if rows.len() > 1 {
        rows[1].t - rows[0].t
    } else {
        1.0
    };
    let naive = profile_from_errors(rows.iter().map(|r| r.err_naive).collect(), spacing);
    let renorm = profile_from_errors(rows.iter().map(|r| r.err_renorm).collect(), spacing);
    let steps = rows.last().map(|r| r.n).unwrap_or(0);
    let oracle = Trajectory::new(spacing, rows.iter().map(|r| r.z_oracle).collect());
    let period = zero_crossing_period(&oracle).ok().map(|p| p.mean);
    let limit_amplitude = envelope(&oracle).ok().map(|peaks| {
        let tail = &peaks[peaks.len().saturating_sub(5)..];
        tail.iter().map(|p| p.1).sum::<f64>() / tail.len() as f64
    });
    CompareSummary {
        steps,
        max_err_naive: naive.max,
        max_err_renorm: renorm.max,
        slope_err_naive: naive.slope,
        slope_err_renorm: renorm.slope,
        drift_per_step: if steps > 0 {
            naive.max / steps as f64
        } else {
            0.0
        },
        period,
        limit_amplitude,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    Dt,
    Eps,
    A0Re,
}

impl SweepParam {
    pub fn parse(name: &str) -> Result<Self> {
        match name.replace('-', "_").as_str() {
            "dt" => Ok(SweepParam::Dt),
            "eps" => Ok(SweepParam::Eps),
            "a0_re" => Ok(SweepParam::A0Re),
            _ => Err(config_err(format!(
                "unknown sweep parameter '{name}' (expected dt, eps or a0_re)"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SweepParam::Dt => "dt",
            SweepParam::Eps => "eps",
            SweepParam::A0Re => "a0_re",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub value: f64,
    #[serde(flatten)]
    pub summary: CompareSummary,
}

/// One comparison summary per value, in input order.
pub fn sweep(cfg: &ExperimentConfig, param: SweepParam, values: &[f64]) -> Result<Vec<SweepRow>> {
    if values.is_empty() {
        return Err(config_err("sweep values list is empty"));
    }
    let configs: Vec<ExperimentConfig> = values
        .iter()
        .map(|&v| {
            let mut c = cfg.clone();
            match param {
                SweepParam::Dt => c.dt = v,
                SweepParam::Eps => c.eps = v,
                SweepParam::A0Re => c.a0_re = v,
            }
            c.validate().map(|_| c)
        })
        .collect::<Result<_>>()?;
    configs
        .par_iter()
        .zip(values.par_iter())
        .map(|(c, &value)| {
            compare_solutions(c).map(|cmp| SweepRow {
                value,
                summary: cmp.summary,
            })
        })
        .collect()
}

/// 17 significant digits.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_float).unwrap_or_default()
}

pub fn write_trajectory<W: Write>(
    out: &mut W,
    traj: &Trajectory,
    format: OutputFormat,
) -> Result<()> {
    #[derive(Serialize)]
    struct Row {
        n: usize,
        t: f64,
        z: f64,
    }
    match format {
        OutputFormat::Csv => {
            writeln!(out, "n,t,z")?;
            for (i, &z) in traj.values.iter().enumerate() {
                writeln!(
                    out,
                    "{},{},{}",
                    traj.index(i),
                    fmt_float(traj.time(i)),
                    fmt_float(z)
                )?;
            }
        }
        OutputFormat::Json => {
            let rows: Vec<Row> = traj
                .values
                .iter()
                .enumerate()
                .map(|(i, &z)| Row {
                    n: traj.index(i),
                    t: traj.time(i),
                    z,
                })
                .collect();
            serde_json::to_writer_pretty(&mut *out, &serde_json::json!({ "rows": rows }))?;
            writeln!(out)?;
        }
    }
    Ok(())
}

pub fn write_comparison_csv<W: Write>(out: &mut W, cmp: &Comparison) -> Result<()> {
    writeln!(out, "{}", CompareRow::HEADER.join(","))?;
    for r in &cmp.rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.n,
            fmt_float(r.t),
            fmt_float(r.z_oracle),
            fmt_float(r.z_naive),
            fmt_float(r.z_renorm_discrete),
            fmt_float(r.z_renorm_continuum),
            fmt_float(r.err_naive),
            fmt_float(r.err_renorm),
        )?;
    }
    Ok(())
}

pub fn write_comparison_json<W: Write>(out: &mut W, cmp: &Comparison) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, cmp)?;
    writeln!(out)?;
    Ok(())
}

pub fn write_summary_json<W: Write>(out: &mut W, summary: &CompareSummary) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, summary)?;
    writeln!(out)?;
    Ok(())
}

const SWEEP_HEADER: [&str; 10] = [
    "param",
    "value",
    "steps",
    "max_err_naive",
    "max_err_renorm",
    "slope_err_naive",
    "slope_err_renorm",
    "drift_per_step",
    "period",
    "limit_amplitude",
];

pub fn write_sweep<W: Write>(
    out: &mut W,
    param: SweepParam,
    rows: &[SweepRow],
    format: OutputFormat,
) -> Result<()> {
    match format {
        OutputFormat::Csv => {
            writeln!(out, "{}", SWEEP_HEADER.join(","))?;
            for r in rows {
                let s = &r.summary;
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{}",
                    param.name(),
                    fmt_float(r.value),
                    s.steps,
                    fmt_float(s.max_err_naive),
                    fmt_float(s.max_err_renorm),
                    fmt_float(s.slope_err_naive),
                    fmt_float(s.slope_err_renorm),
                    fmt_float(s.drift_per_step),
                    fmt_opt(s.period),
                    fmt_opt(s.limit_amplitude),
                )?;
            }
        }
        OutputFormat::Json => {
            serde_json::to_writer_pretty(
                &mut *out,
                &serde_json::json!({ "param": param.name(), "rows": rows }),
            )?;
            writeln!(out)?;
        }
    }
    Ok(())
}

/// Sidecar path for the summary of a CSV comparison: `<output>.summary.json`.
pub fn summary_path(output: &Path) -> PathBuf {
    let mut s = output.as_os_str().to_owned();
    s.push(".summary.json");
    PathBuf::from(s)
}
