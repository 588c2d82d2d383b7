//! Zeroth- and first-order solutions for the two example nonlinearities.
//!
//! The zeroth-order solution is `A lambda_+^n + B lambda_-^n`. Products of the
//! modes are reduced with `lambda_+^n lambda_-^n -> 1`; under exact roots this
//! is an identity, under the first-order roots it drops a `(1 + dt^2)^n`
//! factor.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linear::{
    bases_match, characteristic_roots, geometric_denominator, particular_solution, HarmonicSum,
    HarmonicTerm, SchemeParams,
};

/// Which nonlinearity the scheme carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NonlinearityKind {
    /// `f = -z(n)^3`.
    Cubic,
    /// Right-hand side `eps dt (1 - z(n)^2)(z(n+1) - z(n-1))`; with `halving`
    /// the difference is divided by two, equivalent to `eps -> eps / 2`.
    VanDerPol { halving: bool },
}

impl NonlinearityKind {
    pub const VAN_DER_POL: Self = NonlinearityKind::VanDerPol { halving: false };

    /// Multiplier applied to the Van der Pol difference factor (1 or 1/2).
    pub fn difference_factor(&self) -> f64 {
        match self {
            NonlinearityKind::VanDerPol { halving: true } => 0.5,
            _ => 1.0,
        }
    }

    /// `f(z-, z0, z+)` normalized so the scheme reads `... = dt^2 eps f`.
    pub fn f_value(&self, minus: f64, center: f64, plus: f64, dt: f64) -> f64 {
        match self {
            NonlinearityKind::Cubic => -center * center * center,
            NonlinearityKind::VanDerPol { .. } => {
                self.difference_factor() * (1.0 - center * center) * (plus - minus) / dt
            }
        }
    }

    pub fn is_cubic(&self) -> bool {
        matches!(self, NonlinearityKind::Cubic)
    }
}

impl fmt::Display for NonlinearityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NonlinearityKind::Cubic => "cubic",
            NonlinearityKind::VanDerPol { .. } => "vdp",
        })
    }
}

/// Amplitudes `(A, B)` of the two fundamental modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudePair {
    pub a: Complex64,
    pub b: Complex64,
}

impl AmplitudePair {
    pub fn new(a: Complex64, b: Complex64) -> Self {
        Self { a, b }
    }

    /// `B = conj(A)`: the amplitudes of a real solution.
    pub fn real(a: Complex64) -> Self {
        Self { a, b: a.conj() }
    }

    pub fn is_real(&self) -> bool {
        (self.b - self.a.conj()).norm() <= 1e-14 * self.a.norm().max(1.0)
    }
}

/// Coefficients of `n lambda_+^n` and `n lambda_-^n` in the first-order solution.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SecularReport {
    pub sigma_plus: Complex64,
    pub sigma_minus: Complex64,
}

/// Polynomial in the two modes, keyed by `(p, q)` for `lambda_+^(pn) lambda_-^(qn)`.
#[derive(Debug, Clone, Default)]
struct ModePoly(BTreeMap<(u32, u32), Complex64>);

impl ModePoly {
    fn monomial(p: u32, q: u32, coeff: Complex64) -> Self {
        let mut m = BTreeMap::new();
        m.insert((p, q), coeff);
        Self(m)
    }

    fn constant(c: f64) -> Self {
        Self::monomial(0, 0, Complex64::new(c, 0.0))
    }

    fn add(&self, other: &ModePoly, sign: f64) -> Self {
        let mut out = self.0.clone();
        for (&k, &v) in &other.0 {
            *out.entry(k).or_default() += v * sign;
        }
        Self(out)
    }

    /// Product, with the cross-mode reduction `(p, q) -> (p - min, q - min)`.
    fn mul(&self, other: &ModePoly) -> Self {
        let mut out: BTreeMap<(u32, u32), Complex64> = BTreeMap::new();
        for (&(p1, q1), &c1) in &self.0 {
            for (&(p2, q2), &c2) in &other.0 {
                let (p, q) = (p1 + p2, q1 + q2);
                let k = p.min(q);
                *out.entry((p - k, q - k)).or_default() += c1 * c2;
            }
        }
        Self(out)
    }

    fn to_harmonic(&self, plus: Complex64, minus: Complex64, scale: f64) -> HarmonicSum {
        HarmonicSum::from_terms(self.0.iter().filter(|(_, c)| c.norm() != 0.0).map(
            |(&(p, q), &c)| {
                let base = plus.powu(p) * minus.powu(q);
                HarmonicTerm::geometric(c * scale, base)
            },
        ))
    }
}

fn zeroth_modes(amps: &AmplitudePair) -> ModePoly {
    ModePoly::monomial(1, 0, amps.a).add(&ModePoly::monomial(0, 1, amps.b), 1.0)
}

/// `A lambda_+^n + B lambda_-^n`.
pub fn zeroth_order(amps: &AmplitudePair, params: &SchemeParams) -> HarmonicSum {
    let (plus, minus) = characteristic_roots(params);
    HarmonicSum::from_terms([
        HarmonicTerm::geometric(amps.a, plus),
        HarmonicTerm::geometric(amps.b, minus),
    ])
}

/// Right-hand side of the first-order equation, prefactors included:
/// `dt^2 * (-z0^3)` for the cubic case and `dt (1 - z0^2)(z0(n+1) - z0(n-1))`
/// for Van der Pol.
pub fn first_order_forcing(
    kind: NonlinearityKind,
    amps: &AmplitudePair,
    params: &SchemeParams,
) -> HarmonicSum {
    let (plus, minus) = characteristic_roots(params);
    let z0 = zeroth_modes(amps);
    let (poly, scale) = match kind {
        NonlinearityKind::Cubic => {
            let cube = z0.mul(&z0).mul(&z0);
            (cube, -params.dt * params.dt)
        }
        NonlinearityKind::VanDerPol { .. } => {
            let shift = ModePoly::monomial(1, 0, amps.a * (plus - plus.inv())).add(
                &ModePoly::monomial(0, 1, amps.b * (minus - minus.inv())),
                1.0,
            );
            let damping = ModePoly::constant(1.0).add(&z0.mul(&z0), -1.0);
            (damping.mul(&shift), kind.difference_factor() * params.dt)
        }
    };
    poly.to_harmonic(plus, minus, scale)
}

/// Particular solution of the first-order equation.
pub fn first_order_solution(
    kind: NonlinearityKind,
    amps: &AmplitudePair,
    params: &SchemeParams,
) -> Result<HarmonicSum> {
    particular_solution(&first_order_forcing(kind, amps, params), params)
}

/// Pulls the secular coefficients out of a first-order solution.
pub fn extract_secular(z1: &HarmonicSum, params: &SchemeParams) -> Result<SecularReport> {
    let (plus, minus) = characteristic_roots(params);
    let mut report = SecularReport::default();
    for term in z1.terms().iter().filter(|t| t.n_power == 1) {
        if bases_match(term.base, plus, 1e-9) {
            report.sigma_plus += term.coeff;
        } else if bases_match(term.base, minus, 1e-9) {
            report.sigma_minus += term.coeff;
        } else {
            return Err(Error::UnexpectedSecularBase { base: term.base });
        }
    }
    Ok(report)
}

/// Secular coefficients of the first-order solution for given amplitudes.
pub fn secular_report(
    kind: NonlinearityKind,
    amps: &AmplitudePair,
    params: &SchemeParams,
) -> Result<SecularReport> {
    extract_secular(&first_order_solution(kind, amps, params)?, params)
}

/// Coefficient `k3` such that the first-order solution carries
/// `k3 * A^3 * lambda_+^(3n)`, from the exact denominators.
pub fn third_harmonic_factor(kind: NonlinearityKind, params: &SchemeParams) -> Complex64 {
    let (plus, _) = characteristic_roots(params);
    let denom = geometric_denominator(plus.powu(3), params.dt);
    let dt = params.dt;
    match kind {
        NonlinearityKind::Cubic => -dt * dt / denom,
        NonlinearityKind::VanDerPol { .. } => {
            -kind.difference_factor() * dt * (plus - plus.inv()) / denom
        }
    }
}

/// Limit of [`third_harmonic_factor`] as `dt -> 0`: `1/8` for the cubic case
/// and `i/4` (times the difference factor) for Van der Pol.
pub fn third_harmonic_limit(kind: NonlinearityKind) -> Complex64 {
    match kind {
        NonlinearityKind::Cubic => Complex64::new(0.125, 0.0),
        NonlinearityKind::VanDerPol { .. } => Complex64::new(0.0, 0.25 * kind.difference_factor()),
    }
}

/// The unrenormalized expansion `z0 + eps z1`, secular terms included.
#[derive(Debug, Clone)]
pub struct NaiveSolution {
    z0: HarmonicSum,
    z1: HarmonicSum,
    eps: f64,
}

impl NaiveSolution {
    pub fn new(
        kind: NonlinearityKind,
        amps: &AmplitudePair,
        params: &SchemeParams,
    ) -> Result<Self> {
        if !amps.is_real() {
            return Err(Error::Domain("naive solution needs B = conj(A)".into()));
        }
        Ok(Self {
            z0: zeroth_order(amps, params),
            z1: first_order_solution(kind, amps, params)?,
            eps: params.eps,
        })
    }

    pub fn zeroth(&self) -> &HarmonicSum {
        &self.z0
    }

    pub fn first(&self) -> &HarmonicSum {
        &self.z1
    }

    pub fn eval_complex(&self, n: i64) -> Complex64 {
        self.z0.evaluate(n) + self.z1.evaluate(n) * self.eps
    }

    pub fn eval(&self, n: i64) -> f64 {
        self.eval_complex(n).re
    }
}

/// Real part of `z0(n) + eps z1(n)`.
pub fn naive_solution(
    kind: NonlinearityKind,
    amps: &AmplitudePair,
    params: &SchemeParams,
    n: i64,
) -> Result<f64> {
    Ok(NaiveSolution::new(kind, amps, params)?.eval(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linear::{scheme_residual, RootConvention};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn paper(dt: f64) -> SchemeParams {
        SchemeParams::new(dt, 0.0, RootConvention::PaperFirstOrder).unwrap()
    }

    fn exact(dt: f64) -> SchemeParams {
        SchemeParams::new(dt, 0.0, RootConvention::ExactUnitModulus).unwrap()
    }

    const HALF: AmplitudePair = AmplitudePair {
        a: Complex64::new(0.5, 0.0),
        b: Complex64::new(0.5, 0.0),
    };

    #[test]
    fn zeroth_order_values() {
        let p = paper(0.1);
        let z0 = zeroth_order(&HALF, &p);
        assert_eq!(z0.evaluate(0), c(1.0, 0.0));
        assert!(z0.is_real(1e-12));

        let single = zeroth_order(&AmplitudePair::new(c(1.0, 0.0), c(0.0, 0.0)), &p);
        assert!((single.evaluate(3) - c(1.0, 0.1).powu(3)).norm() < 1e-14);

        let e = exact(0.1);
        let theta = 0.995f64.acos();
        let z0 = zeroth_order(&AmplitudePair::real(c(0.5, -0.5)), &e);
        for n in [0, 1, 17, 400] {
            let want = (n as f64 * theta).cos() + (n as f64 * theta).sin();
            assert!((z0.evaluate(n) - want).norm() < 1e-10);
        }
    }

    #[test]
    fn cubic_forcing_terms() {
        let p = paper(0.1);
        let (plus, minus) = characteristic_roots(&p);
        let single = first_order_forcing(
            NonlinearityKind::Cubic,
            &AmplitudePair::new(c(1.0, 0.0), c(0.0, 0.0)),
            &p,
        );
        assert_eq!(single.len(), 1);
        assert!((single.coefficient(plus.powu(3), 0) - c(-0.01, 0.0)).norm() < 1e-16);

        let none = first_order_forcing(
            NonlinearityKind::Cubic,
            &AmplitudePair::new(c(0.0, 0.0), c(0.0, 0.0)),
            &p,
        );
        assert!(none.is_empty());

        let (a, b) = (c(0.3, 0.2), c(0.3, -0.2));
        let f = first_order_forcing(NonlinearityKind::Cubic, &AmplitudePair::new(a, b), &p);
        let dt2 = 0.01;
        assert!((f.coefficient(plus.powu(3), 0) + dt2 * a.powu(3)).norm() < 1e-16);
        assert!((f.coefficient(minus.powu(3), 0) + dt2 * b.powu(3)).norm() < 1e-16);
        assert!((f.coefficient(plus, 0) + dt2 * 3.0 * a * a * b).norm() < 1e-16);
        assert!((f.coefficient(minus, 0) + dt2 * 3.0 * a * b * b).norm() < 1e-16);
    }

    #[test]
    fn vdp_forcing_matches_pointwise_evaluation() {
        // B = 0 makes the cross-mode reduction irrelevant, so the expansion
        // must agree with the raw nonlinearity at every n.
        for params in [paper(0.1), exact(0.1)] {
            let amps = AmplitudePair::new(c(1.0, 0.0), c(0.0, 0.0));
            let (plus, _) = characteristic_roots(&params);
            let f = first_order_forcing(NonlinearityKind::VAN_DER_POL, &amps, &params);
            let want = 0.1 * (plus - plus.inv()) * -1.0;
            assert!((f.coefficient(plus.powu(3), 0) - want).norm() < 1e-15);
            let z0 = zeroth_order(&amps, &params);
            for n in [0, 3, 11, 40, 77, 123, 250, 301, 512, 999] {
                let (zm, zc, zp) = (z0.evaluate(n - 1), z0.evaluate(n), z0.evaluate(n + 1));
                let direct = 0.1 * (1.0 - zc * zc) * (zp - zm);
                assert!(
                    (f.evaluate(n) - direct).norm() < 1e-12 * direct.norm().max(1.0),
                    "n = {n}"
                );
            }
        }

        // with exact roots the reduction is exact for real data too
        let params = exact(0.1);
        let amps = AmplitudePair::real(c(0.4, 0.3));
        let f = first_order_forcing(NonlinearityKind::VAN_DER_POL, &amps, &params);
        let z0 = zeroth_order(&amps, &params);
        for n in [1, 10, 100, 1000] {
            let (zm, zc, zp) = (
                z0.evaluate(n - 1).re,
                z0.evaluate(n).re,
                z0.evaluate(n + 1).re,
            );
            let direct = 0.01 * NonlinearityKind::VAN_DER_POL.f_value(zm, zc, zp, 0.1);
            assert!((f.evaluate(n).re - direct).abs() < 1e-13);
            assert!(f.evaluate(n).im.abs() < 1e-13);
        }
    }

    #[test]
    fn cubic_secular_coefficient() {
        let p = paper(0.1);
        let (plus, minus) = characteristic_roots(&p);
        let z1 = first_order_solution(NonlinearityKind::Cubic, &HALF, &p).unwrap();
        let report = extract_secular(&z1, &p).unwrap();
        let want = -3.0 * 0.01 * 0.125 / (plus - plus.inv());
        assert!((report.sigma_plus - want).norm() < 1e-15);
        assert!((report.sigma_minus - report.sigma_plus.conj()).norm() < 1e-15);
        assert_eq!(z1.terms().iter().filter(|t| t.n_power == 1).count(), 2);
        assert!(z1.coefficient(minus, 1).norm() > 0.0);

        let no_b = AmplitudePair::new(c(0.5, 0.0), c(0.0, 0.0));
        let report = secular_report(NonlinearityKind::Cubic, &no_b, &p).unwrap();
        assert_eq!(report, SecularReport::default());
    }

    #[test]
    fn cubic_secular_limit() {
        let amps = AmplitudePair::real(c(0.3, 0.4));
        for dt in [1e-2, 1e-3, 1e-4] {
            let r = secular_report(NonlinearityKind::Cubic, &amps, &paper(dt)).unwrap();
            let leading = c(0.0, 1.5 * dt) * amps.a * amps.a * amps.b;
            assert!(
                (r.sigma_plus / leading - 1.0).norm() < 2.0 * dt,
                "dt = {dt}"
            );
        }
    }

    #[test]
    fn vdp_secular_limit() {
        for dt in [1e-2, 1e-3] {
            let r = secular_report(NonlinearityKind::VAN_DER_POL, &HALF, &paper(dt)).unwrap();
            let want = HALF.a - HALF.a * HALF.a * HALF.b;
            assert!((r.sigma_plus / dt - want).norm() < 2.0 * dt, "dt = {dt}");
            let halved = secular_report(
                NonlinearityKind::VanDerPol { halving: true },
                &HALF,
                &paper(dt),
            )
            .unwrap();
            assert!((halved.sigma_plus * 2.0 - r.sigma_plus).norm() < 1e-15);
        }
    }

    #[test]
    fn secular_extraction() {
        let p = paper(0.1);
        let (plus, _) = characteristic_roots(&p);
        assert_eq!(
            extract_secular(&HarmonicSum::new(), &p).unwrap(),
            SecularReport::default()
        );
        let hand = HarmonicSum::from_terms([HarmonicTerm::secular(c(2.0, 0.0), plus)]);
        let r = extract_secular(&hand, &p).unwrap();
        assert_eq!(r.sigma_plus, c(2.0, 0.0));
        assert_eq!(r.sigma_minus, c(0.0, 0.0));
        let bad = HarmonicSum::from_terms([HarmonicTerm::secular(c(1.0, 0.0), plus.powu(3))]);
        assert!(matches!(
            extract_secular(&bad, &p),
            Err(Error::UnexpectedSecularBase { .. })
        ));
    }

    #[test]
    fn third_harmonic_factors() {
        let p = paper(0.1);
        let (plus, _) = characteristic_roots(&p);
        for kind in [NonlinearityKind::Cubic, NonlinearityKind::VAN_DER_POL] {
            let amps = AmplitudePair::new(c(0.7, 0.1), c(0.0, 0.0));
            let z1 = first_order_solution(kind, &amps, &p).unwrap();
            let got = z1.coefficient(plus.powu(3), 0);
            assert!((got - third_harmonic_factor(kind, &p) * amps.a.powu(3)).norm() < 1e-15);
        }
        for kind in [NonlinearityKind::Cubic, NonlinearityKind::VAN_DER_POL] {
            let k = third_harmonic_factor(kind, &exact(1e-4));
            assert!((k - third_harmonic_limit(kind)).norm() < 1e-3);
        }
    }

    #[test]
    fn naive_solution_basics() {
        let p = paper(0.1).with_eps(0.0);
        let z0 = zeroth_order(&HALF, &p);
        for n in [0, 5, 50] {
            assert_eq!(
                naive_solution(NonlinearityKind::Cubic, &HALF, &p, n).unwrap(),
                z0.evaluate(n).re
            );
        }
        let p = p.with_eps(0.05);
        let z1 = first_order_solution(NonlinearityKind::Cubic, &HALF, &p).unwrap();
        let at0 = naive_solution(NonlinearityKind::Cubic, &HALF, &p, 0).unwrap();
        assert!((at0 - (1.0 + 0.05 * z1.evaluate(0).re)).abs() < 1e-15);
        assert!(NaiveSolution::new(
            NonlinearityKind::Cubic,
            &AmplitudePair::new(c(1.0, 0.0), c(0.0, 0.0)),
            &p
        )
        .is_err());
    }

    #[test]
    fn naive_solution_is_real() {
        for params in [paper(0.05).with_eps(0.1), exact(0.05).with_eps(0.1)] {
            for kind in [NonlinearityKind::Cubic, NonlinearityKind::VAN_DER_POL] {
                let naive =
                    NaiveSolution::new(kind, &AmplitudePair::real(c(0.3, -0.6)), &params).unwrap();
                assert!(naive.zeroth().is_real(1e-12));
                assert!(naive.first().is_real(1e-12));
                for n in [0, 10, 1000, 5000] {
                    let v = naive.eval_complex(n);
                    assert!(
                        v.im.abs() <= 1e-10 * v.norm().max(1.0),
                        "{kind} n = {n}: {v}"
                    );
                }
            }
        }
    }

    #[test]
    fn first_order_residual_is_second_order() {
        let dt = 0.01;
        let amps = AmplitudePair::real(c(0.25, 0.0));
        let max_residual = |eps: f64| {
            let params = exact(dt).with_eps(eps);
            let naive = NaiveSolution::new(NonlinearityKind::Cubic, &amps, &params).unwrap();
            (1..5000)
                .map(|n| {
                    let z = [naive.eval(n - 1), naive.eval(n), naive.eval(n + 1)];
                    let f = NonlinearityKind::Cubic.f_value(z[0], z[1], z[2], dt);
                    scheme_residual(z.map(|x| c(x, 0.0)), &params, c(f, 0.0)).norm()
                })
                .fold(0.0, f64::max)
        };
        let r = [max_residual(0.02), max_residual(0.01), max_residual(0.005)];
        for w in r.windows(2) {
            let ratio = w[0] / w[1];
            assert!((3.5..=4.5).contains(&ratio), "ratio {ratio}");
        }
    }
}
