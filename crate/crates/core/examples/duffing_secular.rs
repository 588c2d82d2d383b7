//! Naive first-order expansion of the cubic scheme against brute force:
//! the secular term makes the error grow linearly, the renormalized
//! solution stays bounded.

use newton_renorm::analysis::profile_from_errors;
use newton_renorm::perturbation::secular_report;
use newton_renorm::{
    init_from_amplitude, iterate, AmplitudePair, Complex64, GlobalSolution, KappaConvention,
    NaiveSolution, NonlinearityKind, RootConvention, SchemeParams,
};

fn main() -> newton_renorm::Result<()> {
    let (dt, eps) = (0.01, 0.01);
    let params = SchemeParams::new(dt, eps, RootConvention::ExactUnitModulus)?;
    let a0 = Complex64::new(0.5, 0.0);
    let amps = AmplitudePair::real(a0);
    let kind = NonlinearityKind::Cubic;

    let sigma = secular_report(kind, &amps, &params)?;
    println!(
        "secular coefficients: sigma+ = {:.3e}, expected (3/2) i dt A^2 B = {:.3e}",
        sigma.sigma_plus,
        Complex64::new(0.0, 1.5 * dt) * a0 * a0 * a0.conj()
    );

    let steps = (2.0 / eps / dt) as usize;
    let (z0, z1) = init_from_amplitude(a0, &params);
    let oracle = iterate(kind, &params, z0, z1, steps)?;
    let naive = NaiveSolution::new(kind, &amps, &params)?;
    let global = GlobalSolution::new(kind, params, a0, KappaConvention::default())?;

    let err = |f: &dyn Fn(i64) -> f64| -> Vec<f64> {
        oracle
            .values
            .iter()
            .enumerate()
            .map(|(n, z)| (f(n as i64) - z).abs())
            .collect()
    };
    let naive_err = profile_from_errors(err(&|n| naive.eval(n)), dt);
    let renorm_err = profile_from_errors(err(&|n| global.eval_discrete(n)), dt);
    println!("{:>8} {:>12} {:>12}", "t", "naive", "renormalized");
    for t in [10.0, 50.0, 100.0, 150.0, 200.0] {
        let i = ((t / dt) as usize).min(steps);
        println!(
            "{t:>8.1} {:>12.3e} {:>12.3e}",
            naive_err.errors[i], renorm_err.errors[i]
        );
    }
    println!(
        "error growth slopes: naive {:.3e}, renormalized {:.3e}",
        naive_err.slope, renorm_err.slope
    );
    Ok(())
}
