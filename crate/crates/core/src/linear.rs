//! The linear scheme `z(n+1) - (2 - dt^2) z(n) + z(n-1) = g(n)` for forcings
//! built from harmonic terms `c * n^p * lambda^n`.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative base distance below which two harmonic terms are merged.
pub const MERGE_TOLERANCE: f64 = 1e-12;

/// Which pair of characteristic roots the zeroth-order modes are built on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RootConvention {
    /// `1 +/- i dt`, accurate to O(dt^2). Products of the two roots equal
    /// `1 + dt^2`, not 1.
    #[default]
    PaperFirstOrder,
    /// `exp(+/- i theta)` with `cos theta = 1 - dt^2 / 2`: the exact roots.
    ExactUnitModulus,
}

impl fmt::Display for RootConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RootConvention::PaperFirstOrder => "paper",
            RootConvention::ExactUnitModulus => "exact",
        })
    }
}

/// Step size, small parameter and root convention of one experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeParams {
    pub dt: f64,
    pub eps: f64,
    pub roots: RootConvention,
}

impl SchemeParams {
    /// Above this the expansion in `eps` is not expected to mean much.
    pub const EPS_WARN_THRESHOLD: f64 = 0.5;

    pub fn new(dt: f64, eps: f64, roots: RootConvention) -> Result<Self> {
        let params = Self { dt, eps, roots };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt < 2.0) {
            return Err(Error::InvalidParams(format!(
                "dt must lie in (0, 2), got {}",
                self.dt
            )));
        }
        if !(self.eps >= 0.0) || !self.eps.is_finite() {
            return Err(Error::InvalidParams(format!(
                "eps must be finite and non-negative, got {}",
                self.eps
            )));
        }
        if self.eps > Self::EPS_WARN_THRESHOLD {
            log::warn!(
                "eps = {} is not small; first-order asymptotics may be poor",
                self.eps
            );
        }
        Ok(())
    }

    pub fn with_eps(self, eps: f64) -> Self {
        Self { eps, ..self }
    }

    pub fn with_roots(self, roots: RootConvention) -> Self {
        Self { roots, ..self }
    }

    /// The diagonal coefficient `2 - dt^2`.
    pub fn diagonal(&self) -> f64 {
        2.0 - self.dt * self.dt
    }
}

/// Phase `theta` of the exact roots, `cos theta = 1 - dt^2 / 2`.
pub fn exact_phase(dt: f64) -> f64 {
    // sin theta = dt sqrt(1 - dt^2/4); atan2 avoids the ill-conditioned acos near 1
    (dt * (1.0 - 0.25 * dt * dt).sqrt()).atan2(1.0 - 0.5 * dt * dt)
}

/// `(lambda_plus, lambda_minus)` under the active convention.
pub fn characteristic_roots(params: &SchemeParams) -> (Complex64, Complex64) {
    match params.roots {
        RootConvention::PaperFirstOrder => (
            Complex64::new(1.0, params.dt),
            Complex64::new(1.0, -params.dt),
        ),
        RootConvention::ExactUnitModulus => {
            let theta = exact_phase(params.dt);
            (
                Complex64::from_polar(1.0, theta),
                Complex64::from_polar(1.0, -theta),
            )
        }
    }
}

/// `coeff * n^n_power * base^n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicTerm {
    pub coeff: Complex64,
    pub base: Complex64,
    pub n_power: u8,
}

impl HarmonicTerm {
    pub fn new(coeff: Complex64, base: Complex64, n_power: u8) -> Self {
        assert!(
            base != Complex64::new(0.0, 0.0),
            "harmonic base must be non-zero"
        );
        Self {
            coeff,
            base,
            n_power,
        }
    }

    pub fn geometric(coeff: Complex64, base: Complex64) -> Self {
        Self::new(coeff, base, 0)
    }

    pub fn secular(coeff: Complex64, base: Complex64) -> Self {
        Self::new(coeff, base, 1)
    }

    /// `base^n` through polar form, so large `n` never multiplies out.
    pub fn power(&self, n: i64) -> Complex64 {
        let n = n as f64;
        Complex64::from_polar(self.base.norm().powf(n), self.base.arg() * n)
    }

    pub fn evaluate(&self, n: i64) -> Complex64 {
        let poly = (n as f64).powi(self.n_power as i32);
        self.coeff * poly * self.power(n)
    }

    fn same_mode(&self, other: &HarmonicTerm) -> bool {
        self.n_power == other.n_power && bases_match(self.base, other.base, MERGE_TOLERANCE)
    }
}

pub(crate) fn bases_match(a: Complex64, b: Complex64, rel: f64) -> bool {
    (a - b).norm() <= rel * a.norm().max(b.norm())
}

/// A finite sum of harmonic terms, kept normalized: no two terms share a
/// `(base, n_power)` mode.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct HarmonicSum {
    terms: Vec<HarmonicTerm>,
}

impl HarmonicSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = HarmonicTerm>) -> Self {
        let mut sum = Self::new();
        for t in terms {
            sum.push(t);
        }
        sum
    }

    /// Adds a term, merging it into an existing term of the same mode.
    pub fn push(&mut self, term: HarmonicTerm) {
        match self.terms.iter_mut().find(|t| t.same_mode(&term)) {
            Some(existing) => existing.coeff += term.coeff,
            None => self.terms.push(term),
        }
    }

    pub fn terms(&self) -> &[HarmonicTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|t| HarmonicTerm {
                    coeff: t.coeff * factor,
                    ..*t
                })
                .collect(),
        }
    }

    pub fn add(&self, other: &HarmonicSum) -> Self {
        let mut out = self.clone();
        for &t in &other.terms {
            out.push(t);
        }
        out
    }

    /// Coefficient on the given mode, zero if absent.
    pub fn coefficient(&self, base: Complex64, n_power: u8) -> Complex64 {
        self.terms
            .iter()
            .find(|t| t.n_power == n_power && bases_match(t.base, base, MERGE_TOLERANCE))
            .map(|t| t.coeff)
            .unwrap_or_default()
    }

    pub fn evaluate(&self, n: i64) -> Complex64 {
        self.terms.iter().map(|t| t.evaluate(n)).sum()
    }

    /// Whether the sequence is real: every term has its conjugate partner.
    pub fn is_real(&self, tol: f64) -> bool {
        self.terms.iter().all(|t| {
            let (cb, cc) = (t.base.conj(), t.coeff.conj());
            self.terms.iter().any(|u| {
                u.n_power == t.n_power
                    && bases_match(u.base, cb, tol)
                    && (u.coeff - cc).norm() <= tol * t.coeff.norm().max(1.0)
            })
        })
    }
}

/// `z+ - (2 - dt^2) z0 + z- - g`, the residual of the linear scheme with forcing `g`.
pub fn linear_residual(z: [Complex64; 3], dt: f64, forcing: Complex64) -> Complex64 {
    let [minus, center, plus] = z;
    plus - (2.0 - dt * dt) * center + minus - forcing
}

/// Residual of the perturbed scheme at one index, where the right-hand side
/// is `dt^2 * eps * forcing_value`. The triple is `(z(n-1), z(n), z(n+1))`.
pub fn scheme_residual(
    z: [Complex64; 3],
    params: &SchemeParams,
    forcing_value: Complex64,
) -> Complex64 {
    linear_residual(
        z,
        params.dt,
        params.dt * params.dt * params.eps * forcing_value,
    )
}

pub fn default_resonance_tol(lambda: Complex64) -> f64 {
    1e-9 * (1.0 + lambda.norm())
}

/// Whether `lambda` is a characteristic root under the active convention.
///
/// With exact roots this is `|lambda + 1/lambda - (2 - dt^2)| <= tol`. The
/// first-order roots do not satisfy that polynomial (the defect is
/// `i dt^3 + dt^4` over `1 + dt^2`), so there the test is the distance to the
/// nearest root.
pub fn is_resonant(lambda: Complex64, params: &SchemeParams, tol: f64) -> bool {
    match params.roots {
        RootConvention::ExactUnitModulus => {
            (lambda + lambda.inv() - params.diagonal()).norm() <= tol
        }
        RootConvention::PaperFirstOrder => {
            let (plus, minus) = characteristic_roots(params);
            (lambda - plus).norm().min((lambda - minus).norm()) <= tol
        }
    }
}

/// `lambda + 1/lambda - 2 + dt^2`, the non-resonant denominator.
pub fn geometric_denominator(lambda: Complex64, dt: f64) -> Complex64 {
    lambda + lambda.inv() - 2.0 + dt * dt
}

/// `lambda - 1/lambda`, the resonant denominator.
pub fn resonant_denominator(lambda: Complex64) -> Complex64 {
    lambda - lambda.inv()
}

/// Particular solution for a forcing made of `n_power = 0` terms.
///
/// A non-resonant `c lambda^n` maps to `c / (lambda + 1/lambda - 2 + dt^2) lambda^n`;
/// a resonant one to the secular `c / (lambda - 1/lambda) n lambda^n`.
pub fn particular_solution(forcing: &HarmonicSum, params: &SchemeParams) -> Result<HarmonicSum> {
    let mut out = HarmonicSum::new();
    for term in forcing.terms() {
        if term.n_power != 0 {
            return Err(Error::UnsupportedForcing {
                n_power: term.n_power,
            });
        }
        let lambda = term.base;
        let tol = default_resonance_tol(lambda);
        let geometric = geometric_denominator(lambda, params.dt);
        let resonant = resonant_denominator(lambda);
        if geometric.norm() <= tol && resonant.norm() <= tol {
            return Err(Error::DegenerateDenominator { base: lambda });
        }
        if is_resonant(lambda, params, tol) {
            out.push(HarmonicTerm::secular(term.coeff / resonant, lambda));
        } else {
            out.push(HarmonicTerm::geometric(term.coeff / geometric, lambda));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn params(dt: f64, roots: RootConvention) -> SchemeParams {
        SchemeParams::new(dt, 0.0, roots).unwrap()
    }

    fn triple(sum: &HarmonicSum, n: i64) -> [Complex64; 3] {
        [sum.evaluate(n - 1), sum.evaluate(n), sum.evaluate(n + 1)]
    }

    #[test]
    fn params_validation() {
        assert!(SchemeParams::new(0.0, 0.1, RootConvention::default()).is_err());
        assert!(SchemeParams::new(2.0, 0.1, RootConvention::default()).is_err());
        assert!(SchemeParams::new(0.1, -0.1, RootConvention::default()).is_err());
        assert!(SchemeParams::new(0.1, 0.9, RootConvention::default()).is_ok());
    }

    #[test]
    fn first_order_roots() {
        let (p, m) = characteristic_roots(&params(0.1, RootConvention::PaperFirstOrder));
        assert_eq!(p, c(1.0, 0.1));
        assert_eq!(m, c(1.0, -0.1));
        // documented deviation: product is 1 + dt^2
        assert!(((p * m).re - 1.01).abs() < 1e-15);
    }

    #[test]
    fn exact_roots_unit_modulus() {
        let (p, m) = characteristic_roots(&params(0.1, RootConvention::ExactUnitModulus));
        assert!((p.norm() - 1.0).abs() < 1e-14);
        assert!((m.norm() - 1.0).abs() < 1e-14);
        assert!((p * m - 1.0).norm() < 1e-14);
        assert!((p.arg() - 0.995f64.acos()).abs() < 1e-12);
        // root of lambda^2 - (2 - dt^2) lambda + 1
        assert!((p * p - 1.99 * p + 1.0).norm() < 1e-14);
    }

    #[test]
    fn conventions_converge_quadratically() {
        let gap = |dt: f64| {
            let a = characteristic_roots(&params(dt, RootConvention::PaperFirstOrder)).0;
            let b = characteristic_roots(&params(dt, RootConvention::ExactUnitModulus)).0;
            (a - b).norm()
        };
        let gaps = [gap(0.1), gap(0.05), gap(0.025)];
        for w in gaps.windows(2) {
            let ratio = w[0] / w[1];
            assert!((3.8..4.2).contains(&ratio), "ratio {ratio}");
        }
    }

    #[test]
    fn residuals_of_homogeneous_solutions() {
        let exact = params(0.1, RootConvention::ExactUnitModulus);
        let (root, _) = characteristic_roots(&exact);
        let mode = HarmonicSum::from_terms([HarmonicTerm::geometric(c(1.0, 0.0), root)]);
        for n in [1, 7, 500] {
            assert!(scheme_residual(triple(&mode, n), &exact, c(0.0, 0.0)).norm() < 1e-12);
        }

        // the first-order root leaves i dt^3 lambda^(n-1) per step
        let paper = params(0.1, RootConvention::PaperFirstOrder);
        let (root, _) = characteristic_roots(&paper);
        let mode = HarmonicSum::from_terms([HarmonicTerm::geometric(c(1.0, 0.0), root)]);
        let r = scheme_residual(triple(&mode, 1), &paper, c(0.0, 0.0));
        assert!((r - c(0.0, 1e-3)).norm() < 1e-15);

        assert_eq!(
            scheme_residual([c(0.0, 0.0); 3], &paper, c(0.0, 0.0)),
            c(0.0, 0.0)
        );
    }

    #[test]
    fn resonance_detection() {
        for roots in [
            RootConvention::PaperFirstOrder,
            RootConvention::ExactUnitModulus,
        ] {
            let p = params(0.1, roots);
            let (plus, minus) = characteristic_roots(&p);
            assert!(is_resonant(plus, &p, default_resonance_tol(plus)));
            assert!(is_resonant(minus, &p, default_resonance_tol(minus)));
            assert!(!is_resonant(plus.powu(3), &p, 1e-6));
            assert!(!is_resonant(c(1.0, 0.0), &p, 1e-6));
        }
        // lambda^3 + lambda^-3 - 2 + dt^2 ~ -8 dt^2
        let p = params(0.1, RootConvention::ExactUnitModulus);
        let (plus, _) = characteristic_roots(&p);
        let d = geometric_denominator(plus.powu(3), 0.1);
        assert!((d.re / -0.08 - 1.0).abs() < 0.02);
    }

    #[test]
    fn third_harmonic_coefficient_matches_closed_form() {
        let a = c(0.3, -0.2);
        let p = params(0.1, RootConvention::PaperFirstOrder);
        let (plus, _) = characteristic_roots(&p);
        let coeff = -0.01 * a.powu(3);
        let forcing = HarmonicSum::from_terms([HarmonicTerm::geometric(coeff, plus.powu(3))]);
        let sol = particular_solution(&forcing, &p).unwrap();
        let denom = plus.powu(3) + plus.powu(3).inv() - 2.0 + 0.01;
        assert_eq!(sol.len(), 1);
        assert_eq!(sol.terms()[0].n_power, 0);
        assert!((sol.terms()[0].coeff - coeff / denom).norm() < 1e-15);
    }

    #[test]
    fn third_harmonic_limit_is_one_eighth() {
        let a = c(0.5, 0.0);
        for dt in [1e-2, 1e-3, 1e-4] {
            let p = params(dt, RootConvention::PaperFirstOrder);
            let (plus, _) = characteristic_roots(&p);
            let forcing = HarmonicSum::from_terms([HarmonicTerm::geometric(
                -dt * dt * a.powu(3),
                plus.powu(3),
            )]);
            let sol = particular_solution(&forcing, &p).unwrap();
            let got = sol.terms()[0].coeff;
            assert!(
                (got - a.powu(3) / 8.0).norm() < 10.0 * dt * a.powu(3).norm(),
                "dt = {dt}: {got}"
            );
        }
    }

    #[test]
    fn resonant_forcing_gives_secular_term() {
        let (a, b) = (c(0.5, 0.0), c(0.5, 0.0));
        let p = params(0.1, RootConvention::PaperFirstOrder);
        let (plus, _) = characteristic_roots(&p);
        let coeff = -3.0 * 0.01 * a * a * b;
        let forcing = HarmonicSum::from_terms([HarmonicTerm::geometric(coeff, plus)]);
        let sol = particular_solution(&forcing, &p).unwrap();
        let t = sol.terms()[0];
        assert_eq!(t.n_power, 1);
        assert!((t.coeff - coeff / (plus - plus.inv())).norm() < 1e-15);
    }

    #[test]
    fn secular_forcing_rejected() {
        let p = params(0.1, RootConvention::ExactUnitModulus);
        let forcing = HarmonicSum::from_terms([HarmonicTerm::secular(c(1.0, 0.0), c(2.0, 0.0))]);
        assert!(matches!(
            particular_solution(&forcing, &p),
            Err(Error::UnsupportedForcing { n_power: 1 })
        ));
    }

    #[test]
    fn evaluation_basics() {
        assert_eq!(HarmonicSum::new().evaluate(17), c(0.0, 0.0));
        let one = HarmonicSum::from_terms([HarmonicTerm::geometric(c(1.0, 0.0), c(0.3, 0.9))]);
        assert_eq!(one.evaluate(0), c(1.0, 0.0));
        let (plus, minus) = characteristic_roots(&params(0.1, RootConvention::PaperFirstOrder));
        let a = c(0.2, 0.7);
        let pair = HarmonicSum::from_terms([
            HarmonicTerm::geometric(a, plus),
            HarmonicTerm::geometric(a.conj(), minus),
        ]);
        assert!(pair.is_real(1e-12));
        for n in [0, 3, 100, 1000] {
            let v = pair.evaluate(n);
            assert!(v.im.abs() <= 1e-12 * v.norm().max(1.0));
        }
    }

    #[test]
    fn merging_normalizes() {
        let base = c(0.6, 0.8);
        let sum = HarmonicSum::from_terms([
            HarmonicTerm::geometric(c(1.0, 0.0), base),
            HarmonicTerm::geometric(c(2.0, 0.0), base * (1.0 + 1e-14)),
            HarmonicTerm::secular(c(5.0, 0.0), base),
        ]);
        assert_eq!(sum.len(), 2);
        assert_eq!(sum.coefficient(base, 0), c(3.0, 0.0));
        assert_eq!(sum.coefficient(base, 1), c(5.0, 0.0));
        assert!(!sum.is_real(1e-12));
    }

    fn arb_complex() -> impl Strategy<Value = Complex64> {
        (-2.0f64..2.0, -2.0f64..2.0).prop_map(|(re, im)| c(re, im))
    }

    proptest! {
        #[test]
        fn particular_solutions_satisfy_the_scheme(
            dt in 0.01f64..0.5,
            c1 in arb_complex(),
            c2 in arb_complex(),
            c3 in arb_complex(),
            ns in prop::collection::vec(1i64..1000, 20),
        ) {
            let p = params(dt, RootConvention::ExactUnitModulus);
            let (plus, minus) = characteristic_roots(&p);
            let forcing = HarmonicSum::from_terms([
                HarmonicTerm::geometric(c1, plus.powu(3)),
                HarmonicTerm::geometric(c2, plus),
                HarmonicTerm::geometric(c3, minus),
            ]);
            let sol = particular_solution(&forcing, &p).unwrap();
            for n in ns {
                let r = linear_residual(triple(&sol, n), dt, forcing.evaluate(n));
                let scale: f64 = sol.terms().iter().map(|t| t.evaluate(n).norm()).sum();
                prop_assert!(r.norm() <= 1e-9 * scale.max(1.0), "n = {}, r = {}", n, r);
            }
        }

        #[test]
        fn particular_solution_is_linear(
            dt in 0.01f64..0.5,
            f in arb_complex(),
            g in arb_complex(),
            k in 2u32..5,
        ) {
            let p = params(dt, RootConvention::PaperFirstOrder);
            let (plus, _) = characteristic_roots(&p);
            let fs = HarmonicSum::from_terms([HarmonicTerm::geometric(f, plus), HarmonicTerm::geometric(g, plus.powu(k))]);
            let gs = HarmonicSum::from_terms([HarmonicTerm::geometric(g, plus), HarmonicTerm::geometric(f, plus.powu(k))]);
            let whole = particular_solution(&fs.add(&gs), &p).unwrap();
            let parts = particular_solution(&fs, &p).unwrap().add(&particular_solution(&gs, &p).unwrap());
            for t in whole.terms() {
                let other = parts.coefficient(t.base, t.n_power);
                prop_assert!((t.coeff - other).norm() <= 1e-9 * t.coeff.norm().max(1.0));
            }
            prop_assert_eq!(whole.len(), parts.len());
        }
    }
}
