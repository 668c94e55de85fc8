//! The plain logistic equation integrated forward and compared with its
//! closed-form solution.
use blowuplab::ode::{integrate, CauchyProblem, Direction, IntegratorOptions};
use blowuplab::partial_fractions::KVector;

fn main() -> blowuplab::Result<()> {
    let p = CauchyProblem::new(KVector::new(vec![1.0])?, 0.5)?;
    let traj = integrate(&p, Direction::Forward, 10.0, IntegratorOptions::default())?;
    let mut worst: f64 = 0.0;
    for &(t, y) in &traj.samples {
        worst = worst.max((y - 1.0 / (1.0 + (-t).exp())).abs());
    }
    let (t, y) = traj.last();
    println!("{} samples, status {:?}", traj.samples.len(), traj.terminal_status);
    println!("y({t}) = {y:.12}, worst error against 1/(1+e^-t): {worst:.2e}");
    Ok(())
}
