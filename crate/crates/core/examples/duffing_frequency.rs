//! Amplitude-dependent frequency of the cubic oscillator measured from
//! zero crossings of the brute-force trajectory.

use std::f64::consts::PI;

use newton_renorm::{
    init_from_amplitude, iterate, zero_crossing_period, Complex64, GlobalSolution, KappaConvention,
    NonlinearityKind, RootConvention, SchemeParams,
};

fn main() -> newton_renorm::Result<()> {
    let (dt, eps) = (0.005, 0.05);
    println!(
        "{:>6} {:>12} {:>12} {:>10}",
        "|A0|", "measured", "predicted", "rel. gap"
    );
    for amp in [0.1, 0.25, 0.5, 0.75] {
        let params = SchemeParams::new(dt, eps, RootConvention::ExactUnitModulus)?;
        let a0 = Complex64::new(amp, 0.0);
        let (z0, z1) = init_from_amplitude(a0, &params);
        let traj = iterate(
            NonlinearityKind::Cubic,
            &params,
            z0,
            z1,
            (300.0 / dt) as usize,
        )?;
        let measured = zero_crossing_period(&traj)?.frequency();
        let predicted = GlobalSolution::new(
            NonlinearityKind::Cubic,
            params,
            a0,
            KappaConvention::default(),
        )?
        .frequency_shift()?;
        println!(
            "{amp:>6.2} {measured:>12.6} {predicted:>12.6} {:>10.2e}",
            (measured / predicted - 1.0).abs()
        );
    }
    println!(
        "period at |A0| = 0.5: 2 pi / 1.01875 = {:.6}",
        2.0 * PI / 1.01875
    );
    Ok(())
}
