//! Blow-up time of y' = y prod(1 - y/k_i) from the closed form, the
//! defining integral and a direct integration, next to the upper bound.
use blowuplab::ode::{blowup_report, quadrature_blowup_time, CauchyProblem, IntegratorOptions};
use blowuplab::partial_fractions::KVector;

fn main() -> blowuplab::Result<()> {
    let cases = [(vec![1.0], -1.0), (vec![1.0, 2.0], -1.0), (vec![1.0, 2.0], 4.0), (vec![0.5, 1.0, 3.0], -0.2)];
    println!("{:>18} {:>6} {:>8} {:>14} {:>14} {:>14} {:>10}", "k", "y0", "dir", "closed form", "integral", "bound", "residual");
    for (k, y0) in cases {
        let p = CauchyProblem::new(KVector::new(k.clone())?, y0)?;
        let r = blowup_report(&p, IntegratorOptions::default())?;
        println!(
            "{:>18} {:>6} {:>8} {:>14.10} {:>14.10} {:>14.10} {:>10.2e}",
            format!("{k:?}"),
            y0,
            format!("{:?}", r.direction),
            r.analytic_time,
            quadrature_blowup_time(&p)?,
            r.bound,
            r.residual.unwrap_or(f64::NAN),
        );
    }
    Ok(())
}
