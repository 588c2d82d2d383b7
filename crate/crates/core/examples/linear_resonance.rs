//! Particular solutions of the forced linear scheme, including the
//! resonant case that produces secular `n lambda^n` growth.

use newton_renorm::linear::{
    default_resonance_tol, is_resonant, particular_solution, scheme_residual,
};
use newton_renorm::{
    characteristic_roots, Complex64, HarmonicSum, HarmonicTerm, RootConvention, SchemeParams,
};

fn main() -> newton_renorm::Result<()> {
    let params = SchemeParams::new(0.1, 0.0, RootConvention::ExactUnitModulus)?;
    let (plus, minus) = characteristic_roots(&params);
    println!(
        "roots {plus:.6} and {minus:.6}, |lambda| = {:.15}",
        plus.norm()
    );

    let third = plus.powu(3);
    let forcing = HarmonicSum::from_terms([
        HarmonicTerm::geometric(Complex64::new(1.0, 0.0), third),
        HarmonicTerm::geometric(Complex64::new(0.5, 0.0), plus),
    ]);
    for term in forcing.terms() {
        let resonant = is_resonant(term.base, &params, default_resonance_tol(term.base));
        println!("forcing base {:.4}: resonant = {resonant}", term.base);
    }

    let z = particular_solution(&forcing, &params)?;
    for term in z.terms() {
        println!(
            "  solution term {:.5} * n^{} * {:.4}^n",
            term.coeff, term.n_power, term.base
        );
    }
    let worst = (1..200)
        .map(|n| {
            let window = [z.evaluate(n - 1), z.evaluate(n), z.evaluate(n + 1)];
            // forcing g appears as dt^2 g on the right-hand side
            let g = forcing.evaluate(n) / (params.dt * params.dt);
            scheme_residual(window, &params.with_eps(1.0), g).norm()
        })
        .fold(0.0, f64::max);
    println!("max residual over n < 200: {worst:.2e}");
    Ok(())
}
