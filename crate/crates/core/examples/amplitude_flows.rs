//! Discrete amplitude maps, their invariants, and first-order convergence
//! to the continuum amplitude equations.

use newton_renorm::renormalization::{
    build_flow, continuum_limit_check, iterate_flow_path, solve_cubic_continuum,
    solve_cubic_discrete_closed, vdp_envelope_from_initial, ConservedConstant,
};
use newton_renorm::{Complex64, KappaConvention, NonlinearityKind, RootConvention, SchemeParams};

fn main() -> newton_renorm::Result<()> {
    let eps = 0.1;
    let a0 = Complex64::new(0.4, 0.3);

    let params = SchemeParams::new(0.05, eps, RootConvention::PaperFirstOrder)?;
    let path = iterate_flow_path(
        &build_flow(NonlinearityKind::Cubic, &params),
        a0,
        a0.conj(),
        2000,
    )?;
    let (a, b) = path[2000];
    let (ac, _) = solve_cubic_discrete_closed(a0, a0.conj(), &params, 2000);
    println!(
        "cubic: |AB| {:.6} -> {:.6}, closed form gap {:.2e}",
        ConservedConstant::cubic(a0, a0.conj()).value().norm(),
        (a * b).norm(),
        (a - ac).norm()
    );

    let path = iterate_flow_path(
        &build_flow(NonlinearityKind::VAN_DER_POL, &params),
        a0,
        a0.conj(),
        2000,
    )?;
    let (a, _) = path[2000];
    println!(
        "vdp: A2/A1 {:.15} -> {:.15}, |A| -> {:.4}",
        ConservedConstant::vdp(a0)?.value().re,
        a.im / a.re,
        a.norm()
    );

    println!("{:>7} {:>12} {:>12}", "dt", "cubic dev", "vdp dev");
    for dt in [0.04, 0.02, 0.01, 0.005] {
        let params = SchemeParams::new(dt, eps, RootConvention::PaperFirstOrder)?;
        let cubic = continuum_limit_check(
            &build_flow(NonlinearityKind::Cubic, &params),
            a0,
            a0.conj(),
            |t| solve_cubic_continuum(a0, a0.conj(), eps, t).0,
            dt,
            10.0,
        )?;
        let vdp = continuum_limit_check(
            &build_flow(NonlinearityKind::VAN_DER_POL, &params),
            a0,
            a0.conj(),
            |t| {
                vdp_envelope_from_initial(
                    a0.re,
                    a0.im / a0.re,
                    eps,
                    t,
                    KappaConvention::OnePlusCSquared,
                )
                .map(|v| v.as_complex())
                .unwrap_or_default()
            },
            dt,
            10.0,
        )?;
        println!("{dt:>7.3} {cubic:>12.4e} {vdp:>12.4e}");
    }
    Ok(())
}
