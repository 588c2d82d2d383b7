//! The nonstandard scheme with `4 sin^2(h/2)` weighting: exact harmonic
//! motion at eps = 0, and an O(h^2) gap to the standard scheme otherwise.

use newton_renorm::{iterate, iterate_mickens, NonlinearityKind, RootConvention, SchemeParams};

fn main() -> newton_renorm::Result<()> {
    let h = 0.1;
    let traj = iterate_mickens(NonlinearityKind::Cubic, h, 0.0, 1.0, h.cos(), 10_000)?;
    let anchor = traj
        .values
        .iter()
        .enumerate()
        .map(|(n, z)| (z - (n as f64 * h).cos()).abs())
        .fold(0.0, f64::max);
    println!("eps = 0: max |z(n) - cos(nh)| over 10^4 steps = {anchor:.2e}");

    let eps = 0.05;
    println!("{:>7} {:>12}", "h", "gap (t <= 50)");
    let mut prev: Option<f64> = None;
    for h in [0.2, 0.1, 0.05, 0.025] {
        let steps = (50.0 / h) as usize;
        let params = SchemeParams::new(h, eps, RootConvention::ExactUnitModulus)?;
        let m = iterate_mickens(NonlinearityKind::Cubic, h, eps, 1.0, h.cos(), steps)?;
        let p = iterate(NonlinearityKind::Cubic, &params, 1.0, h.cos(), steps)?;
        let gap = m
            .values
            .iter()
            .zip(&p.values)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        match prev {
            Some(g) => println!("{h:>7.3} {gap:>12.4e}  ratio {:.3}", g / gap),
            None => println!("{h:>7.3} {gap:>12.4e}"),
        }
        prev = Some(gap);
    }
    Ok(())
}
