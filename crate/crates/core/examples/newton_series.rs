//! Newton forward-difference series: reconstruct a sampled sequence from
//! differences at a base point, and watch a two-scale expansion stay
//! constant in its base point.

use newton_renorm::newton::{
    binomial_coefficient, check_envelope_constancy, difference_table, newton_partial_sum,
    SampledSequence, TwoScaleExpansion,
};
use newton_renorm::Complex64;

fn main() -> newton_renorm::Result<()> {
    let cubic = SampledSequence::from_fn(12, |n| {
        let n = n as f64;
        n * n * n - 4.0 * n + 1.0
    });
    println!(
        "differences at m = 2: {:?}",
        difference_table(&cubic, 2, 4)?
    );
    println!(
        "binom(7, 3) = {}, binom(-2, 3) = {}",
        binomial_coefficient(7, 3),
        binomial_coefficient(-2, 3)
    );

    println!("{:>3} {:>10} {:>10} {:>10}", "n", "value", "K = 2", "K = 3");
    for n in [0i64, 3, 7, 12] {
        println!(
            "{n:>3} {:>10.3} {:>10.3} {:>10.3}",
            cubic.values()[n as usize],
            newton_partial_sum(&cubic, 2, n, 2)?,
            newton_partial_sum(&cubic, 2, n, 3)?
        );
    }

    let lambda = Complex64::from_polar(1.0, 0.2);
    let expansion = TwoScaleExpansion::from_local_solution(3, move |n, _| lambda.powi(n as i32));
    let worst = (0..50)
        .map(|m| check_envelope_constancy(&expansion, m + 3, m))
        .fold(0.0, f64::max);
    println!("envelope constancy residual of an exact mode: {worst:.2e}");
    Ok(())
}
