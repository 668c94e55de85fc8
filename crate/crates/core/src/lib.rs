//! Numerical laboratory for the multivariate analogue of `1 + x <= e^x`,
//!
//! ```text
//!   prod_i (1 + x_i)^{a_i}  <=  exp( (1/n) prod_i x_i ),
//!   a_i = prod_{j != i} x_j / prod_{j != i} (x_j - x_i),
//! ```
//!
//! checked along three independent routes:
//!
//! * [`ode`]: finite-time blow-up of the generalized logistic equation
//!   `y' = (-1)^{n+1} y prod (1 - y/k_i)`, whose closed-form blow-up times
//!   come from the [`partial_fractions`] decompositions;
//! * [`divdiff`]: divided differences of the completely monotone function
//!   `ln(1 + x)/x`;
//! * [`weights`]: direct evaluation of both sides in log space, including
//!   the variant with repeated nodes.
//!
//! [`verify`] runs randomized, seeded suites over all of them and [`cli`]
//! backs the `blowuplab` binary.

pub mod cli;
pub mod divdiff;
pub mod error;
pub mod logspace;
pub mod ode;
pub mod partial_fractions;
pub mod quadrature;
pub mod rational;
pub mod verify;
pub mod weights;

pub use error::{Error, Result};

/// Relative node separation below which nodes count as coincident.
pub const DELTA_SEP: f64 = 1e-9;
/// Tolerance for algebraic identities (partition of unity, route agreement).
pub const TAU_ID: f64 = 1e-10;
/// Tolerance for classifying a point as an equality case.
pub const TAU_EQ: f64 = 1e-12;
/// Highest derivative order served by [`divdiff::cm_derivative`].
pub const N_MAX: usize = 12;
/// Version tag written into every JSON/CSV document.
pub const SCHEMA_VERSION: u32 = 1;

/// Checks that `values` are pairwise separated by at least
/// `DELTA_SEP * max(1, max |v|)`.
pub fn check_separation(values: &[f64]) -> Result<()> {
    let scale = values.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
    let required = DELTA_SEP * scale;
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    for w in order.windows(2) {
        let gap = (values[w[1]] - values[w[0]]).abs();
        if gap < required || gap.is_nan() {
            let (i, j) = (w[0].min(w[1]), w[0].max(w[1]));
            return Err(Error::SeparationViolation { i, j, gap, required });
        }
    }
    Ok(())
}

pub(crate) fn check_finite(values: &[f64], what: &str) -> Result<()> {
    if values.is_empty() {
        return Err(Error::InvalidInput(format!("{what} must not be empty")));
    }
    if let Some(v) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::InvalidInput(format!("{what} contains non-finite value {v}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn separation_is_relative_to_magnitude() {
        assert!(check_separation(&[1.0, 2.0, 3.0]).is_ok());
        assert!(check_separation(&[1e12, 1e12 + 100.0]).is_err());
        assert!(check_separation(&[0.0, 2e-9]).is_ok());
        assert!(check_separation(&[0.0, 5e-10]).is_err());
        match check_separation(&[3.0, 1.0, 3.0]) {
            Err(Error::SeparationViolation { i, j, .. }) => assert_eq!((i, j), (0, 2)),
            other => panic!("unexpected {other:?}"),
        }
    }
}
