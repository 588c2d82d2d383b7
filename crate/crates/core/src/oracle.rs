//! Brute-force iteration of the nonlinear schemes: the ground truth every
//! asymptotic result is measured against.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linear::{characteristic_roots, SchemeParams};
use crate::perturbation::NonlinearityKind;

const DIVERGENCE_LIMIT: f64 = 1e8;
const SINGULAR_LIMIT: f64 = 1e-12;

/// Output is decimated above this many samples unless a stride is given.
pub const MAX_STORED_SAMPLES: usize = 1_000_000;

/// Uniformly spaced samples `z(0), z(stride), z(2 stride), ...`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub dt: f64,
    pub stride: usize,
    pub values: Vec<f64>,
}

impl Trajectory {
    pub fn new(dt: f64, values: Vec<f64>) -> Self {
        Self {
            dt,
            stride: 1,
            values,
        }
    }

    pub fn from_fn(dt: f64, last: usize, f: impl Fn(usize) -> f64) -> Self {
        Self::new(dt, (0..=last).map(f).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Spacing between stored samples in time units.
    pub fn sample_spacing(&self) -> f64 {
        self.dt * self.stride as f64
    }

    /// Scheme index of stored sample `i`.
    pub fn index(&self, i: usize) -> usize {
        i * self.stride
    }

    pub fn time(&self, i: usize) -> f64 {
        i as f64 * self.sample_spacing()
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.values.len()).map(|i| self.time(i))
    }
}

/// `z(n+1) = (2 - w) z(n) - z(n-1) + w eps f` with `f` possibly linear in `z(n+1)`.
struct Stepper {
    kind: NonlinearityKind,
    weight: f64,
    eps: f64,
    dt: f64,
}

impl Stepper {
    fn advance(&self, minus: f64, center: f64, step: usize) -> Result<f64> {
        let diag = 2.0 - self.weight;
        match self.kind {
            NonlinearityKind::Cubic => {
                Ok(diag * center - minus - self.weight * self.eps * center * center * center)
            }
            NonlinearityKind::VanDerPol { .. } => {
                // g (z+ - z-) on the right; solve the linear equation for z+
                let g = self.weight
                    * self.eps
                    * self.kind.difference_factor()
                    * (1.0 - center * center)
                    / self.dt;
                let lead = 1.0 - g;
                if lead.abs() < SINGULAR_LIMIT {
                    return Err(Error::SingularStep { step });
                }
                Ok((diag * center - minus - g * minus) / lead)
            }
        }
    }

    fn run(&self, z0: f64, z1: f64, steps: usize, stride: usize) -> Result<Trajectory> {
        if steps < 2 {
            return Err(Error::InvalidParams(format!(
                "need at least 2 steps, got {steps}"
            )));
        }
        let stride = stride.max(1);
        let mut values = Vec::with_capacity(steps / stride + 1);
        let (mut prev, mut curr) = (z0, z1);
        values.push(z0);
        if stride == 1 {
            values.push(z1);
        }
        for n in 1..steps {
            let next = self.advance(prev, curr, n)?;
            if !(next.abs() <= DIVERGENCE_LIMIT) {
                return Err(Error::Divergence {
                    step: n + 1,
                    value: next.abs(),
                });
            }
            prev = curr;
            curr = next;
            if (n + 1) % stride == 0 {
                values.push(next);
            }
        }
        Ok(Trajectory {
            dt: self.dt,
            stride,
            values,
        })
    }
}

fn default_stride(steps: usize) -> usize {
    steps / MAX_STORED_SAMPLES + 1
}

/// Iterates the scheme with step `dt` for `steps` steps from `(z(0), z(1))`.
pub fn iterate(
    kind: NonlinearityKind,
    params: &SchemeParams,
    z0: f64,
    z1: f64,
    steps: usize,
) -> Result<Trajectory> {
    iterate_strided(kind, params, z0, z1, steps, default_stride(steps))
}

/// As [`iterate`], storing every `stride`-th sample. Computation is not decimated.
pub fn iterate_strided(
    kind: NonlinearityKind,
    params: &SchemeParams,
    z0: f64,
    z1: f64,
    steps: usize,
    stride: usize,
) -> Result<Trajectory> {
    params.validate()?;
    Stepper {
        kind,
        weight: params.dt * params.dt,
        eps: params.eps,
        dt: params.dt,
    }
    .run(z0, z1, steps, stride)
}

/// `z(0) = 2 Re(A0)`, `z(1) = 2 Re(A0 lambda_+)`.
pub fn init_from_amplitude(a0: Complex64, params: &SchemeParams) -> (f64, f64) {
    let (plus, _) = characteristic_roots(params);
    (2.0 * a0.re, 2.0 * (a0 * plus).re)
}

/// Scheme with `dt^2` replaced by `4 sin^2(h/2)`; for `eps = 0` it carries
/// `cos(n h)` exactly.
pub fn iterate_mickens(
    kind: NonlinearityKind,
    h: f64,
    eps: f64,
    z0: f64,
    z1: f64,
    steps: usize,
) -> Result<Trajectory> {
    iterate_mickens_strided(kind, h, eps, z0, z1, steps, default_stride(steps))
}

pub fn iterate_mickens_strided(
    kind: NonlinearityKind,
    h: f64,
    eps: f64,
    z0: f64,
    z1: f64,
    steps: usize,
    stride: usize,
) -> Result<Trajectory> {
    if !(h > 0.0 && h < std::f64::consts::PI) {
        return Err(Error::InvalidParams(format!(
            "step h must lie in (0, pi), got {h}"
        )));
    }
    if !(eps >= 0.0) {
        return Err(Error::InvalidParams(format!(
            "eps must be non-negative, got {eps}"
        )));
    }
    let s = (0.5 * h).sin();
    Stepper {
        kind,
        weight: 4.0 * s * s,
        eps,
        dt: h,
    }
    .run(z0, z1, steps, stride)
}
