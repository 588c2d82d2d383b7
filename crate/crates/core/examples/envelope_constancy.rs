//! Base-point independence of the two-scale expansion when the amplitudes
//! follow the secular flow, versus frozen amplitudes.

use newton_renorm::newton::{check_envelope_constancy, TwoScaleExpansion};
use newton_renorm::perturbation::{secular_report, third_harmonic_factor};
use newton_renorm::renormalization::{build_exact_flow, iterate_flow_path};
use newton_renorm::{
    characteristic_roots, AmplitudePair, Complex64, NonlinearityKind, RootConvention, SchemeParams,
};

fn main() -> newton_renorm::Result<()> {
    let kind = NonlinearityKind::Cubic;
    let a0 = Complex64::new(0.5, 0.0);
    println!("{:>6} {:>14} {:>14}", "eps", "renormalized", "frozen");
    for eps in [0.04, 0.02, 0.01] {
        let params = SchemeParams::new(0.1, eps, RootConvention::ExactUnitModulus)?;
        let (plus, minus) = characteristic_roots(&params);
        let k3 = third_harmonic_factor(kind, &params);
        let path = iterate_flow_path(&build_exact_flow(kind, &params), a0, a0.conj(), 1001)?;
        let residual = |follow: bool| {
            let path = path.clone();
            let local = move |n: i64, m: i64| {
                let (a, b) = if follow { path[m as usize] } else { path[0] };
                let s = secular_report(kind, &AmplitudePair::new(a, b), &params)
                    .expect("secular report");
                let d = (n - m) as f64;
                a * plus.powi(n as i32)
                    + b * minus.powi(n as i32)
                    + eps
                        * (k3 * a.powu(3) * plus.powi(3 * n as i32)
                            + k3.conj() * b.powu(3) * minus.powi(3 * n as i32)
                            + s.sigma_plus * d * plus.powi(n as i32)
                            + s.sigma_minus * d * minus.powi(n as i32))
            };
            let exp = TwoScaleExpansion::from_local_solution(2, local);
            (0..1000)
                .map(|m| check_envelope_constancy(&exp, m + 2, m))
                .fold(0.0, f64::max)
        };
        println!(
            "{eps:>6.2} {:>14.3e} {:>14.3e}",
            residual(true),
            residual(false)
        );
    }
    Ok(())
}
