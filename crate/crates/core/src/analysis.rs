//! Measurements on trajectories: pointwise error profiles, zero-crossing
//! periods and peak envelopes.

use crate::error::{Error, Result};
use crate::oracle::Trajectory;

/// Pointwise `|a - b|` with summary statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorProfile {
    pub errors: Vec<f64>,
    pub max: f64,
    pub argmax: usize,
    /// Least-squares slope of the running maximum against time.
    pub slope: f64,
}

pub fn compare(a: &Trajectory, b: &Trajectory) -> Result<ErrorProfile> {
    if a.len() != b.len() {
        return Err(Error::TrajectoryMismatch(format!(
            "lengths differ: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    if a.sample_spacing() != b.sample_spacing() {
        return Err(Error::TrajectoryMismatch(format!(
            "sample spacing differs: {} vs {}",
            a.sample_spacing(),
            b.sample_spacing()
        )));
    }
    let errors: Vec<f64> = a
        .values
        .iter()
        .zip(&b.values)
        .map(|(x, y)| (x - y).abs())
        .collect();
    Ok(profile_from_errors(errors, a.sample_spacing()))
}

/// Builds a profile from precomputed absolute errors sampled every `spacing`.
pub fn profile_from_errors(errors: Vec<f64>, spacing: f64) -> ErrorProfile {
    let (argmax, max) =
        errors.iter().copied().enumerate().fold(
            (0, 0.0),
            |best, (i, e)| if e > best.1 { (i, e) } else { best },
        );
    let running = running_max(&errors);
    let times: Vec<f64> = (0..errors.len()).map(|i| i as f64 * spacing).collect();
    let slope = fit_line(&times, &running).map(|(s, _)| s).unwrap_or(0.0);
    ErrorProfile {
        errors,
        max,
        argmax,
        slope,
    }
}

pub fn running_max(values: &[f64]) -> Vec<f64> {
    values
        .iter()
        .scan(0.0f64, |m, &v| {
            *m = m.max(v);
            Some(*m)
        })
        .collect()
}

/// Least-squares `(slope, intercept)`; `None` for fewer than two points or
/// degenerate abscissae.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> Option<(f64, f64)> {
    let n = xs.len().min(ys.len());
    if n < 2 {
        return None;
    }
    let nf = n as f64;
    let mx = xs[..n].iter().sum::<f64>() / nf;
    let my = ys[..n].iter().sum::<f64>() / nf;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (x, y) in xs[..n].iter().zip(&ys[..n]) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodEstimate {
    pub mean: f64,
    pub std_dev: f64,
    /// Number of sign changes found (both directions).
    pub crossings: usize,
}

impl PeriodEstimate {
    pub fn frequency(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.mean
    }
}

/// Upward zero-crossing times, linearly interpolated between samples.
pub fn upward_crossings(traj: &Trajectory) -> Vec<f64> {
    let h = traj.sample_spacing();
    traj.values
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[0] < 0.0 && w[1] >= 0.0)
        .map(|(i, w)| (i as f64 + w[0] / (w[0] - w[1])) * h)
        .collect()
}

fn sign_changes(values: &[f64]) -> usize {
    values
        .windows(2)
        .filter(|w| (w[0] < 0.0) != (w[1] < 0.0))
        .count()
}

/// Mean gap between consecutive upward zero crossings.
///
/// The first and last gaps are dropped when at least three are available.
pub fn zero_crossing_period(traj: &Trajectory) -> Result<PeriodEstimate> {
    let crossings = sign_changes(&traj.values);
    let ups = upward_crossings(traj);
    if crossings < 4 || ups.len() < 2 {
        return Err(Error::TooFewCrossings { found: crossings });
    }
    let mut gaps: Vec<f64> = ups.windows(2).map(|w| w[1] - w[0]).collect();
    if gaps.len() >= 3 {
        gaps = gaps[1..gaps.len() - 1].to_vec();
    }
    let n = gaps.len() as f64;
    let mean = gaps.iter().sum::<f64>() / n;
    let var = gaps.iter().map(|g| (g - mean) * (g - mean)).sum::<f64>() / n;
    Ok(PeriodEstimate {
        mean,
        std_dev: var.sqrt(),
        crossings,
    })
}

/// Local maxima of `|z|` as `(time, amplitude)`, refined by a parabola
/// through the three samples around each peak.
pub fn envelope(traj: &Trajectory) -> Result<Vec<(f64, f64)>> {
    let h = traj.sample_spacing();
    let mag: Vec<f64> = traj.values.iter().map(|z| z.abs()).collect();
    let peaks: Vec<(f64, f64)> = mag
        .windows(3)
        .enumerate()
        .filter(|(_, w)| w[1] >= w[0] && w[1] > w[2])
        .map(|(i, w)| {
            let curvature = w[0] - 2.0 * w[1] + w[2];
            let offset = if curvature != 0.0 {
                0.5 * (w[0] - w[2]) / curvature
            } else {
                0.0
            };
            let peak = w[1] - 0.25 * (w[0] - w[2]) * offset;
            ((i as f64 + 1.0 + offset) * h, peak)
        })
        .collect();
    if peaks.len() < 2 {
        return Err(Error::TooFewPeaks { found: peaks.len() });
    }
    Ok(peaks)
}

/// Linear interpolation of an envelope at time `t`, clamped to its ends.
pub fn envelope_at(peaks: &[(f64, f64)], t: f64) -> f64 {
    match peaks.iter().position(|&(pt, _)| pt >= t) {
        None => peaks.last().map(|p| p.1).unwrap_or(0.0),
        Some(0) => peaks[0].1,
        Some(i) => {
            let ((t0, a0), (t1, a1)) = (peaks[i - 1], peaks[i]);
            a0 + (a1 - a0) * (t - t0) / (t1 - t0)
        }
    }
}
