//! Secular-free global solutions.
//!
//! The renormalized amplitude `A(t)` replaces the constant `A` in the
//! zeroth-order modes and in the third-harmonic part of the first-order
//! solution. Third-harmonic coefficients come from the exact denominators
//! ([`third_harmonic_factor`]) for the discrete form and from their `dt -> 0`
//! limits ([`third_harmonic_limit`]) for the continuum waveform.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linear::{characteristic_roots, SchemeParams};
use crate::perturbation::{third_harmonic_factor, third_harmonic_limit, NonlinearityKind};
use crate::renormalization::{build_flow, iterate_flow_path, vdp_scale, KappaConvention};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlobalSolution {
    pub kind: NonlinearityKind,
    pub params: SchemeParams,
    /// Initial amplitude `A0`; `B0 = conj(A0)`.
    pub a0: Complex64,
    /// Only used by the Van der Pol envelope.
    pub kappa: KappaConvention,
}

impl GlobalSolution {
    pub fn new(
        kind: NonlinearityKind,
        params: SchemeParams,
        a0: Complex64,
        kappa: KappaConvention,
    ) -> Result<Self> {
        params.validate()?;
        if matches!(kind, NonlinearityKind::VanDerPol { .. })
            && kappa == KappaConvention::PaperOnePlusC
            && a0.re == 0.0
            && a0.im != 0.0
        {
            return Err(Error::Domain(
                "c = A2/A1 is undefined for a purely imaginary A0".into(),
            ));
        }
        Ok(Self {
            kind,
            params,
            a0,
            kappa,
        })
    }

    /// Conserved constant: `|A0|^2` for the cubic flow, `A2/A1` for Van der Pol.
    pub fn conserved(&self) -> f64 {
        match self.kind {
            NonlinearityKind::Cubic => self.a0.norm_sqr(),
            NonlinearityKind::VanDerPol { .. } if self.a0.re == 0.0 => 0.0,
            NonlinearityKind::VanDerPol { .. } => self.a0.im / self.a0.re,
        }
    }

    /// Renormalized amplitude `A(t)` from the continuum flow.
    pub fn amplitude_at(&self, t: f64) -> Complex64 {
        let eps = self.params.eps;
        match self.kind {
            NonlinearityKind::Cubic => {
                self.a0 * Complex64::new(0.0, 1.5 * eps * self.conserved() * t).exp()
            }
            NonlinearityKind::VanDerPol { .. } => {
                if self.a0 == Complex64::new(0.0, 0.0) {
                    return self.a0;
                }
                let weight = match self.kappa {
                    KappaConvention::OnePlusCSquared => self.a0.norm_sqr(),
                    KappaConvention::PaperOnePlusC => {
                        self.kappa.kappa(self.conserved()) * self.a0.re * self.a0.re
                    }
                };
                let eps = eps * self.kind.difference_factor();
                // a non-positive denominator only arises for kappa = 1 + c with c < -1;
                // the envelope has blown up there
                self.a0 * vdp_scale(weight, eps, t).unwrap_or(f64::INFINITY)
            }
        }
    }

    /// The discrete expansion evaluated with a given amplitude at index `n`.
    pub fn eval_with_amplitude(&self, n: i64, amplitude: Complex64) -> f64 {
        let (plus, _) = characteristic_roots(&self.params);
        let k3 = third_harmonic_factor(self.kind, &self.params);
        let nf = n as f64;
        let carrier = Complex64::from_polar(plus.norm().powf(nf), plus.arg() * nf);
        let third = Complex64::from_polar(plus.norm().powf(3.0 * nf), 3.0 * plus.arg() * nf);
        2.0 * (amplitude * carrier).re + 2.0 * self.params.eps * (k3 * amplitude.powu(3) * third).re
    }

    /// Discrete global solution at index `n`, amplitudes from the continuum flow at `t = n dt`.
    pub fn eval_discrete(&self, n: i64) -> f64 {
        self.eval_with_amplitude(n, self.amplitude_at(n as f64 * self.params.dt))
    }

    /// Continuum waveform `2 Re(A(t) e^(it)) + 2 eps Re(k3 A(t)^3 e^(3it))`.
    pub fn eval_continuum_waveform(&self, t: f64) -> f64 {
        let a = self.amplitude_at(t);
        let k3 = third_harmonic_limit(self.kind);
        let carrier = Complex64::new(0.0, t).exp();
        2.0 * (a * carrier).re + 2.0 * self.params.eps * (k3 * a.powu(3) * carrier.powu(3)).re
    }

    /// Fundamental frequency `1 + (3/2) eps |A0|^2` of the cubic solution.
    pub fn frequency_shift(&self) -> Result<f64> {
        match self.kind {
            NonlinearityKind::Cubic => Ok(1.0 + 1.5 * self.params.eps * self.a0.norm_sqr()),
            NonlinearityKind::VanDerPol { .. } => Err(Error::WrongKind(
                "frequency shift is only defined for the cubic nonlinearity".into(),
            )),
        }
    }

    /// Expansion driven by the discrete amplitude flow instead of its
    /// continuum limit, for `n = 0..=n_max`.
    pub fn discrete_flow_values(&self, n_max: usize) -> Result<Vec<f64>> {
        let flow = build_flow(self.kind, &self.params);
        let path = iterate_flow_path(&flow, self.a0, self.a0.conj(), n_max)?;
        Ok(path
            .iter()
            .enumerate()
            .map(|(n, &(a, _))| self.eval_with_amplitude(n as i64, a))
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linear::RootConvention;
    use crate::perturbation::{zeroth_order, AmplitudePair};
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn cubic(dt: f64, eps: f64, a0: Complex64, roots: RootConvention) -> GlobalSolution {
        let params = SchemeParams::new(dt, eps, roots).unwrap();
        GlobalSolution::new(
            NonlinearityKind::Cubic,
            params,
            a0,
            KappaConvention::default(),
        )
        .unwrap()
    }

    #[test]
    fn discrete_value_at_origin() {
        let sol = cubic(0.01, 0.05, c(0.5, 0.0), RootConvention::PaperFirstOrder);
        let k3 = third_harmonic_factor(NonlinearityKind::Cubic, &sol.params);
        let want = 1.0 + 2.0 * 0.05 * (k3 * 0.125).re;
        assert!((sol.eval_discrete(0) - want).abs() < 1e-15);
    }

    #[test]
    fn eps_zero_reduces_to_zeroth_order() {
        for kind in [NonlinearityKind::Cubic, NonlinearityKind::VAN_DER_POL] {
            let params = SchemeParams::new(0.05, 0.0, RootConvention::PaperFirstOrder).unwrap();
            let a0 = c(0.3, -0.2);
            let sol = GlobalSolution::new(kind, params, a0, KappaConvention::default()).unwrap();
            let z0 = zeroth_order(&AmplitudePair::real(a0), &params);
            for n in [0, 1, 10, 1000] {
                assert!((sol.eval_discrete(n) - z0.evaluate(n).re).abs() < 1e-12);
            }
        }
        let sol = cubic(0.05, 0.0, c(0.5, 0.0), RootConvention::ExactUnitModulus);
        for t in [0.0, 1.0, 7.5] {
            assert!((sol.eval_continuum_waveform(t) - t.cos()).abs() < 1e-15);
        }
    }

    #[test]
    fn cubic_waveform_is_periodic() {
        let sol = cubic(0.01, 0.05, c(0.4, 0.3), RootConvention::ExactUnitModulus);
        let period = 2.0 * PI / sol.frequency_shift().unwrap();
        for t in [0.0, 0.3, 5.0, 40.0] {
            let gap = sol.eval_continuum_waveform(t) - sol.eval_continuum_waveform(t + period);
            assert!(gap.abs() < 1e-10);
        }
    }

    #[test]
    fn frequency_shift_values() {
        assert_eq!(
            cubic(0.01, 0.0, c(0.5, 0.0), RootConvention::default())
                .frequency_shift()
                .unwrap(),
            1.0
        );
        let shift = cubic(0.01, 0.05, c(0.5, 0.0), RootConvention::default())
            .frequency_shift()
            .unwrap();
        assert!((shift - 1.01875).abs() < 1e-15);
        assert_eq!(
            cubic(0.01, 0.05, c(0.0, 0.0), RootConvention::default())
                .frequency_shift()
                .unwrap(),
            1.0
        );
        let params = SchemeParams::new(0.01, 0.05, RootConvention::default()).unwrap();
        let vdp = GlobalSolution::new(
            NonlinearityKind::VAN_DER_POL,
            params,
            c(0.5, 0.0),
            KappaConvention::default(),
        )
        .unwrap();
        assert!(matches!(vdp.frequency_shift(), Err(Error::WrongKind(_))));
    }

    #[test]
    fn vdp_waveform_approaches_limit_cycle() {
        let eps = 0.05;
        let params = SchemeParams::new(0.01, eps, RootConvention::ExactUnitModulus).unwrap();
        for a0 in [c(0.1, 0.0), c(0.1, 0.2), c(1.5, 0.0)] {
            let sol = GlobalSolution::new(
                NonlinearityKind::VAN_DER_POL,
                params,
                a0,
                KappaConvention::OnePlusCSquared,
            )
            .unwrap();
            let t_end = 10.0 / eps;
            let peak = (0..700)
                .map(|i| sol.eval_continuum_waveform(t_end + i as f64 * 0.01).abs())
                .fold(0.0, f64::max);
            assert!((peak - 2.0).abs() < 0.02 * 2.0, "a0 = {a0}: peak {peak}");
        }
    }

    #[test]
    fn vdp_linear_kappa_needs_real_part() {
        let params = SchemeParams::new(0.01, 0.05, RootConvention::default()).unwrap();
        assert!(GlobalSolution::new(
            NonlinearityKind::VAN_DER_POL,
            params,
            c(0.0, 0.3),
            KappaConvention::PaperOnePlusC
        )
        .is_err());
        assert!(GlobalSolution::new(
            NonlinearityKind::VAN_DER_POL,
            params,
            c(0.0, 0.3),
            KappaConvention::OnePlusCSquared
        )
        .is_ok());
    }

    #[test]
    fn discrete_and_continuum_forms_converge() {
        let gap = |dt: f64| {
            let sol = cubic(dt, 0.05, c(0.5, 0.0), RootConvention::PaperFirstOrder);
            let n_max = (20.0 / dt).round() as i64;
            (0..=n_max)
                .map(|n| (sol.eval_discrete(n) - sol.eval_continuum_waveform(n as f64 * dt)).abs())
                .fold(0.0, f64::max)
        };
        let (coarse, fine) = (gap(0.02), gap(0.01));
        let order = (coarse / fine).log2();
        assert!(order >= 1.0, "order {order}");
    }

    #[test]
    fn discrete_flow_values_start_at_initial_data() {
        let sol = cubic(0.01, 0.05, c(0.5, 0.0), RootConvention::ExactUnitModulus);
        let values = sol.discrete_flow_values(100).unwrap();
        assert_eq!(values.len(), 101);
        assert!((values[0] - sol.eval_discrete(0)).abs() < 1e-15);
        assert!((values[100] - sol.eval_discrete(100)).abs() < 1e-6);
    }
}
