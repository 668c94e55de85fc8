//! A small seeded run of the randomized suites.
use blowuplab::verify::{cross_route_suite, run_blowup_suite, run_inequality_suite, SuiteConfig};

fn main() -> blowuplab::Result<()> {
    let cfg = SuiteConfig { n_range: (1, 5), samples: 400, seed: 11, include_equality_cases: true, ..Default::default() };
    let gen = run_inequality_suite(&cfg)?;
    println!(
        "inequality: {} cases, {} hold, {} equalities, {} failures, min gap {:?}",
        gen.total, gen.holds, gen.equalities, gen.failures.len(), gen.min_gap
    );
    let cross = cross_route_suite(&cfg)?;
    println!("cross-route: {} cases, worst residual {:.2e}, max n*sum {:.6}", cross.total, cross.worst_residual, cross.max_normalized);
    let blow = run_blowup_suite(&SuiteConfig { n_range: (1, 4), samples: 40, ..cfg })?;
    println!(
        "blow-up: {} cases, worst residual {:.2e} (quadrature {:.2e})",
        blow.total, blow.worst_numeric_residual, blow.worst_quadrature_residual
    );
    Ok(())
}
