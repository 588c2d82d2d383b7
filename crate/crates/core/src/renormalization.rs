//! Renormalization (amplitude) equations and their solutions.
//!
//! Promoting the integration constants `A`, `B` to functions of the base
//! point `m` and requiring the two-scale expansion to be independent of `m`
//! gives the discrete flow
//!
//! ```text
//! A(m+1) - A(m) = eps * sigma_+(A, B),   B(m+1) - B(m) = eps * sigma_-(A, B)
//! ```
//!
//! where `sigma_+/-` are the secular coefficients of the first-order solution.
//! With `t = m dt` and `dt -> 0` the flow becomes an ODE with elementary
//! closed-form solutions for both example nonlinearities.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linear::SchemeParams;
use crate::perturbation::{secular_report, AmplitudePair, NonlinearityKind};

const OVERFLOW_LIMIT: f64 = 1e12;

type SecularFn = dyn Fn(Complex64, Complex64) -> (Complex64, Complex64) + Send + Sync;

/// The map `(A, B) -> (A + eps sigma_+, B + eps sigma_-)`.
#[derive(Clone)]
pub struct DiscreteAmplitudeFlow {
    eps: f64,
    sigma: Arc<SecularFn>,
}

impl fmt::Debug for DiscreteAmplitudeFlow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DiscreteAmplitudeFlow")
            .field("eps", &self.eps)
            .finish_non_exhaustive()
    }
}

impl DiscreteAmplitudeFlow {
    pub fn new(
        eps: f64,
        sigma: impl Fn(Complex64, Complex64) -> (Complex64, Complex64) + Send + Sync + 'static,
    ) -> Self {
        Self {
            eps,
            sigma: Arc::new(sigma),
        }
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// `(Delta A, Delta B)` at the given amplitudes.
    pub fn increment(&self, a: Complex64, b: Complex64) -> (Complex64, Complex64) {
        let (sp, sm) = (self.sigma)(a, b);
        (sp * self.eps, sm * self.eps)
    }

    pub fn step(&self, a: Complex64, b: Complex64) -> (Complex64, Complex64) {
        let (da, db) = self.increment(a, b);
        (a + da, b + db)
    }
}

/// Flow with the leading-order secular coefficients:
/// cubic `sigma_+ = (3/2) i dt A^2 B`, Van der Pol `sigma_+ = dt (A - A^2 B)`.
pub fn build_flow(kind: NonlinearityKind, params: &SchemeParams) -> DiscreteAmplitudeFlow {
    let dt = params.dt;
    match kind {
        NonlinearityKind::Cubic => DiscreteAmplitudeFlow::new(params.eps, move |a, b| {
            let k = Complex64::new(0.0, 1.5 * dt);
            (k * a * a * b, -k * b * b * a)
        }),
        NonlinearityKind::VanDerPol { .. } => {
            let scale = kind.difference_factor() * dt;
            DiscreteAmplitudeFlow::new(params.eps, move |a, b| {
                (scale * (a - a * a * b), scale * (b - b * b * a))
            })
        }
    }
}

/// Flow whose secular coefficients come from the full first-order solution
/// (exact `dt`-dependent denominators) at every step.
pub fn build_exact_flow(kind: NonlinearityKind, params: &SchemeParams) -> DiscreteAmplitudeFlow {
    let params = *params;
    DiscreteAmplitudeFlow::new(params.eps, move |a, b| {
        // the forcing has only n_power = 0 terms, so extraction cannot fail
        let r = secular_report(kind, &AmplitudePair::new(a, b), &params)
            .expect("first-order secular report");
        (r.sigma_plus, r.sigma_minus)
    })
}

/// `m`-fold application of the flow.
pub fn iterate_flow(
    flow: &DiscreteAmplitudeFlow,
    a0: Complex64,
    b0: Complex64,
    m: usize,
) -> Result<(Complex64, Complex64)> {
    let mut state = (a0, b0);
    for step in 0..m {
        state = flow.step(state.0, state.1);
        check_overflow(state.0, step + 1)?;
    }
    Ok(state)
}

/// All states `(A(0), B(0)), ..., (A(m), B(m))`.
pub fn iterate_flow_path(
    flow: &DiscreteAmplitudeFlow,
    a0: Complex64,
    b0: Complex64,
    m: usize,
) -> Result<Vec<(Complex64, Complex64)>> {
    let mut path = Vec::with_capacity(m + 1);
    let mut state = (a0, b0);
    path.push(state);
    for step in 0..m {
        state = flow.step(state.0, state.1);
        check_overflow(state.0, step + 1)?;
        path.push(state);
    }
    Ok(path)
}

fn check_overflow(a: Complex64, step: usize) -> Result<()> {
    let modulus = a.norm();
    if !(modulus <= OVERFLOW_LIMIT) {
        return Err(Error::AmplitudeOverflow { step, modulus });
    }
    Ok(())
}

/// Conserved quantity of an amplitude flow: `A B` (cubic) or `A2 / A1` (Van der Pol).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConservedConstant(pub Complex64);

impl ConservedConstant {
    pub fn cubic(a: Complex64, b: Complex64) -> Self {
        Self(a * b)
    }

    pub fn vdp(a: Complex64) -> Result<Self> {
        if a.re == 0.0 {
            return Err(Error::Domain("A2/A1 undefined for A1 = 0".into()));
        }
        Ok(Self(Complex64::new(a.im / a.re, 0.0)))
    }

    pub fn value(&self) -> Complex64 {
        self.0
    }
}

/// Cubic flow with `c = A0 B0` frozen:
/// `A(m) = A0 (1 + (3/2) eps i c dt)^m`, `B(m) = B0 (1 - (3/2) eps i c dt)^m`.
pub fn solve_cubic_discrete_closed(
    a0: Complex64,
    b0: Complex64,
    params: &SchemeParams,
    m: u32,
) -> (Complex64, Complex64) {
    let k = Complex64::new(0.0, 1.5 * params.eps * params.dt) * a0 * b0;
    let grow = |z: Complex64| {
        let m = m as f64;
        Complex64::from_polar(z.norm().powf(m), z.arg() * m)
    };
    (a0 * grow(1.0 + k), b0 * grow(1.0 - k))
}

/// Continuum cubic flow `A' = (3/2) eps i A^2 B`: `A(t) = A0 exp((3/2) eps c i t)`.
pub fn solve_cubic_continuum(
    a0: Complex64,
    b0: Complex64,
    eps: f64,
    t: f64,
) -> (Complex64, Complex64) {
    let phase = Complex64::new(0.0, 1.5 * eps * t) * a0 * b0;
    (a0 * phase.exp(), b0 * (-phase).exp())
}

/// How the Van der Pol envelope equation `A1' = eps A1 (1 - kappa A1^2)` picks kappa.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KappaConvention {
    /// `kappa = 1 + c`, as printed in the original derivation.
    PaperOnePlusC,
    /// `kappa = 1 + c^2`, which follows from `1 - A1^2 - A2^2` with `A2 = c A1`.
    #[default]
    OnePlusCSquared,
}

impl KappaConvention {
    pub fn kappa(&self, c: f64) -> f64 {
        match self {
            KappaConvention::PaperOnePlusC => 1.0 + c,
            KappaConvention::OnePlusCSquared => 1.0 + c * c,
        }
    }
}

impl fmt::Display for KappaConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KappaConvention::PaperOnePlusC => "one_plus_c",
            KappaConvention::OnePlusCSquared => "one_plus_c_squared",
        })
    }
}

/// `A = A1 + i A2` split into real components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VdpRealAmplitudes {
    pub a1: f64,
    pub a2: f64,
}

impl VdpRealAmplitudes {
    pub fn ratio(&self) -> f64 {
        self.a2 / self.a1
    }

    pub fn as_complex(&self) -> Complex64 {
        Complex64::new(self.a1, self.a2)
    }

    /// Amplitude `2 |A|` of the zeroth-order waveform.
    pub fn waveform_amplitude(&self) -> f64 {
        2.0 * self.a1.hypot(self.a2)
    }
}

/// `A1(t) = a0 e^(eps t) / sqrt(1 + kappa a0^2 e^(2 eps t))`, `A2 = c A1`.
pub fn solve_vdp_continuum(
    a0: f64,
    c: f64,
    eps: f64,
    t: f64,
    kappa: KappaConvention,
) -> Result<VdpRealAmplitudes> {
    if a0 == 0.0 {
        return Err(Error::Domain(
            "envelope constant a0 must be non-zero".into(),
        ));
    }
    let growth = (eps * t).exp();
    let denom = 1.0 + kappa.kappa(c) * a0 * a0 * growth * growth;
    if !(denom > 0.0) {
        return Err(Error::Domain(format!(
            "1 + kappa a0^2 e^(2 eps t) = {denom} is not positive"
        )));
    }
    let a1 = a0 * growth / denom.sqrt();
    Ok(VdpRealAmplitudes { a1, a2: c * a1 })
}

/// The same envelope parametrized by its initial value `A1(0)`:
/// `A1(t) = A1(0) e^(eps t) / sqrt(1 + kappa A1(0)^2 (e^(2 eps t) - 1))`.
///
/// Unlike the `a0` form this also covers starts outside the limit cycle
/// (`kappa A1(0)^2 > 1`).
pub fn vdp_envelope_from_initial(
    a1_initial: f64,
    c: f64,
    eps: f64,
    t: f64,
    kappa: KappaConvention,
) -> Result<VdpRealAmplitudes> {
    let scale = vdp_scale(kappa.kappa(c) * a1_initial * a1_initial, eps, t)?;
    let a1 = a1_initial * scale;
    Ok(VdpRealAmplitudes { a1, a2: c * a1 })
}

/// Scalar factor `A(t) / A(0)` of the Van der Pol envelope, where
/// `weight = kappa A1(0)^2` (equal to `|A(0)|^2` for `kappa = 1 + c^2`).
pub(crate) fn vdp_scale(weight: f64, eps: f64, t: f64) -> Result<f64> {
    let growth = (eps * t).exp();
    let denom = 1.0 + weight * (growth * growth - 1.0);
    if !(denom > 0.0) {
        return Err(Error::Domain(format!(
            "envelope denominator {denom} is not positive"
        )));
    }
    Ok(growth / denom.sqrt())
}

/// Maximum of `|A_discrete(m) - A_ode(m dt)|` for `m dt <= t_max`.
pub fn continuum_limit_check(
    flow: &DiscreteAmplitudeFlow,
    a0: Complex64,
    b0: Complex64,
    ode: impl Fn(f64) -> Complex64,
    dt: f64,
    t_max: f64,
) -> Result<f64> {
    let steps = (t_max / dt).round() as usize;
    let path = iterate_flow_path(flow, a0, b0, steps)?;
    Ok(path
        .iter()
        .enumerate()
        .map(|(m, &(a, _))| (a - ode(m as f64 * dt)).norm())
        .fold(0.0, f64::max))
}
