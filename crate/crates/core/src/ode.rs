//! The generalized logistic Cauchy problem
//!
//! ```text
//!   y' = (-1)^{n+1} y prod_i (1 - y/k_i),   y(0) = y0,
//! ```
//!
//! its phase-line fate, closed-form blow-up times, a-priori bounds, a
//! quadrature oracle for the blow-up integrals, and an adaptive
//! Dormand–Prince 5(4) integrator that detects escape.

use serde::Serialize;

use crate::logspace::ScaledProduct;
use crate::partial_fractions::{decompose_negative_side, decompose_positive_side, KVector};
use crate::quadrature::{integrate as quad, QuadOptions};
use crate::weights::lagrange_log_sum;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CauchyProblem {
    pub k: KVector,
    pub y0: f64,
}

impl CauchyProblem {
    pub fn new(k: KVector, y0: f64) -> Result<Self> {
        if !y0.is_finite() {
            return Err(Error::InvalidInput(format!("y0 must be finite, got {y0}")));
        }
        Ok(Self { k, y0 })
    }

    pub fn n(&self) -> usize {
        self.k.len()
    }

    fn equilibria(&self) -> impl Iterator<Item = f64> + '_ {
        std::iter::once(0.0).chain(self.k.as_slice().iter().copied())
    }
}

fn parity_sign(n: usize) -> f64 {
    if n % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `(-1)^{n+1} y prod (1 - y/k_i)`.
pub fn rhs(y: f64, k: &KVector) -> f64 {
    let n = k.len();
    -parity_sign(n) * k.as_slice().iter().fold(y, |acc, &ki| acc * (1.0 - y / ki))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FateTag {
    EquilibriumExact,
    GlobalBothDirections,
    #[serde(rename = "PositivelyGlobal_PastBlowup")]
    PositivelyGlobalPastBlowup,
    #[serde(rename = "NegativelyGlobal_FutureBlowup")]
    NegativelyGlobalFutureBlowup,
    #[serde(rename = "PositivelyGlobal_PastBlowup_NegativeBranch")]
    PositivelyGlobalPastBlowupNegativeBranch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BlowupDirection {
    None,
    Past,
    Future,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QualitativeFate {
    pub tag: FateTag,
    pub blowup_direction: BlowupDirection,
}

pub fn classify_initial(p: &CauchyProblem) -> QualitativeFate {
    let y0 = p.y0;
    let (tag, blowup_direction) = if p.equilibria().any(|e| e == y0) {
        (FateTag::EquilibriumExact, BlowupDirection::None)
    } else if y0 < 0.0 && p.n() % 2 == 1 {
        (FateTag::NegativelyGlobalFutureBlowup, BlowupDirection::Future)
    } else if y0 < 0.0 {
        (FateTag::PositivelyGlobalPastBlowupNegativeBranch, BlowupDirection::Past)
    } else if y0 > p.k.largest() {
        (FateTag::PositivelyGlobalPastBlowup, BlowupDirection::Past)
    } else {
        (FateTag::GlobalBothDirections, BlowupDirection::None)
    };
    QualitativeFate { tag, blowup_direction }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlowupReport {
    pub direction: BlowupDirection,
    pub analytic_time: f64,
    pub bound: f64,
    pub numeric_time: Option<f64>,
    /// `|numeric - analytic| / analytic`.
    pub residual: Option<f64>,
}

fn require_blowup(p: &CauchyProblem) -> Result<()> {
    if p.y0 >= 0.0 && p.y0 <= p.k.largest() {
        return Err(Error::DomainViolation(format!(
            "no blow-up: y0 in [0, k_n] (y0 = {}, k_n = {})",
            p.y0,
            p.k.largest()
        )));
    }
    Ok(())
}

/// Closed-form blow-up time from the partial-fraction coefficients:
/// `ln prod (1 + k_i/(-y0))^{-A_i}` for `y0 < 0` and
/// `ln prod (1 - k_i/y0)^{-B_i}` for `y0 > k_n`.
pub fn analytic_blowup_time(p: &CauchyProblem) -> Result<BlowupReport> {
    require_blowup(p)?;
    let n = p.n();
    let k = p.k.as_slice();
    let time = if p.y0 < 0.0 {
        let d = decompose_negative_side(&p.k);
        let nodes: Vec<f64> = k.iter().map(|&ki| ki / -p.y0).collect();
        let weights: Vec<f64> = d.residues.iter().map(|a| -a).collect();
        lagrange_log_sum(&nodes, &weights)?
    } else {
        // -sum B_i ln(1 + w_i) with w_i = -k_i/y0; (-1)^{n+1} B_i are the
        // Lagrange weights of w at zero
        let d = decompose_positive_side(&p.k);
        let nodes: Vec<f64> = k.iter().map(|&ki| -ki / p.y0).collect();
        let weights: Vec<f64> = d.residues.iter().map(|b| -parity_sign(n) * b).collect();
        parity_sign(n) * lagrange_log_sum(&nodes, &weights)?
    };
    let direction = classify_initial(p).blowup_direction;
    Ok(BlowupReport {
        direction,
        analytic_time: time,
        bound: blowup_time_bound(p)?,
        numeric_time: None,
        residual: None,
    })
}

/// `prod k_i / (n (-y0)^n)` for `y0 < 0`,
/// `prod k_i / (n y0^n prod (1 - k_i/y0))` for `y0 > k_n`.
pub fn blowup_time_bound(p: &CauchyProblem) -> Result<f64> {
    require_blowup(p)?;
    let n = p.n() as f64;
    let k = p.k.as_slice();
    let ratio = if p.y0 < 0.0 {
        ScaledProduct::from_factors(k.iter().map(|&ki| ki / -p.y0))
    } else {
        ScaledProduct::from_factors(k.iter().map(|&ki| ki / (p.y0 - ki)))
    };
    Ok(ratio.to_f64() / n)
}

/// `prod k / (|x| prod |k_i - x|)`, the blow-up integrand on either side.
fn blowup_integrand(k: &KVector, x: f64) -> f64 {
    let den = ScaledProduct::from_factors(k.as_slice().iter().map(|&ki| (ki - x).abs())).mul(x.abs());
    k.product().ratio(&den)
}

/// Blow-up time by adaptive quadrature of the improper integral over
/// `(-inf, y0]` or `[y0, inf)`, mapped to `u in (0, 1]` by `x = y0/u`.
pub fn quadrature_blowup_time(p: &CauchyProblem) -> Result<f64> {
    require_blowup(p)?;
    let y0 = p.y0;
    let est = quad(
        |u| {
            if u <= 0.0 {
                return 0.0;
            }
            blowup_integrand(&p.k, y0 / u) * y0.abs() / (u * u)
        },
        0.0,
        1.0,
        QuadOptions { abs_tol: 0.0, rel_tol: 1e-13, max_panels: 2000 },
    )?;
    Ok(est.value)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Direction {
    Forward,
    Backward,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    /// Largest step; defaults to `horizon / 100`.
    pub max_step: Option<f64>,
    /// Outside `[0, k_n]` a step may change `y` by at most this fraction.
    pub growth_cap: f64,
    /// Escape threshold; defaults to `1e9 max(1, k_n, |y0|)`.
    pub escape: Option<f64>,
}

impl Default for IntegratorOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-12,
            max_steps: 1_000_000,
            max_step: None,
            growth_cap: 0.1,
            escape: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TerminalStatus {
    ReachedHorizon,
    Escaped,
    StiffFailure,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    /// `(t, y)`; `t` increases for forward runs and decreases for backward ones.
    pub samples: Vec<(f64, f64)>,
    pub terminal_status: TerminalStatus,
}

impl Trajectory {
    pub fn last(&self) -> (f64, f64) {
        *self.samples.last().expect("a trajectory holds at least the initial sample")
    }
}

// Dormand–Prince 5(4); the system is autonomous so the nodes c_i are unused.
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// One Dormand–Prince step: `(y5, |y5 - y4|)`.
fn dp_step<F: Fn(f64) -> f64>(g: &F, y: f64, h: f64) -> (f64, f64) {
    let mut stages = [0.0; 7];
    stages[0] = g(y);
    for s in 1..7 {
        let incr: f64 = (0..s).map(|j| A[s - 1][j] * stages[j]).sum();
        stages[s] = g(y + h * incr);
    }
    let y5 = y + h * (0..7).map(|j| B5[j] * stages[j]).sum::<f64>();
    let err = h * (0..7).map(|j| (B5[j] - B4[j]) * stages[j]).sum::<f64>();
    (y5, err.abs())
}

/// Remaining time to blow-up once `|y|` dwarfs every `k_i`.
fn tail_time(k: &KVector, y: f64) -> f64 {
    let n = k.len();
    ScaledProduct::from_factors(k.as_slice().iter().map(|&ki| ki / y.abs())).to_f64() / n as f64
}

/// Integrates over `[0, horizon]` in the requested time direction. Backward
/// runs integrate the reversed field forward and report `t <= 0`.
pub fn integrate(
    p: &CauchyProblem,
    direction: Direction,
    horizon: f64,
    opts: IntegratorOptions,
) -> Result<Trajectory> {
    if !(horizon > 0.0) || !horizon.is_finite() {
        return Err(Error::InvalidInput(format!("horizon must be positive, got {horizon}")));
    }
    let sign = match direction {
        Direction::Forward => 1.0,
        Direction::Backward => -1.0,
    };
    let k = &p.k;
    let g = |y: f64| sign * rhs(y, k);
    let k_n = k.largest();
    let escape = opts.escape.unwrap_or(1e9 * 1f64.max(k_n).max(p.y0.abs()));
    let max_step = opts.max_step.unwrap_or(horizon / 100.0);
    let large = 10.0 * 1f64.max(k_n);
    let equilibria: Vec<f64> = p.equilibria().collect();

    let mut samples = vec![(0.0, p.y0)];
    let mut y = p.y0;
    let mut tau = 0.0_f64;
    let slope = g(y);
    if slope == 0.0 {
        let steps = 100;
        samples.extend((1..=steps).map(|i| (sign * horizon * i as f64 / steps as f64, y)));
        return Ok(Trajectory {
            samples,
            terminal_status: TerminalStatus::ReachedHorizon,
        });
    }
    let mut h = max_step.min(0.01 * (y.abs().max(opts.atol)) / slope.abs()).max(1e-12 * horizon);
    let mut steps = 0usize;
    let status = loop {
        if tau >= horizon {
            break TerminalStatus::ReachedHorizon;
        }
        if steps >= opts.max_steps {
            break TerminalStatus::StiffFailure;
        }
        steps += 1;
        h = h.min(max_step).min(horizon - tau);
        let (y_new, err) = dp_step(&g, y, h);
        let scale = opts.atol + opts.rtol * y.abs().max(y_new.abs());
        let err_norm = err / scale;
        let crosses = equilibria.iter().any(|&e| {
            let before = y - e;
            let after = y_new - e;
            after == 0.0 || before.signum() != after.signum()
        });
        let outside = y < 0.0 || y > k_n;
        let too_fast = outside && (y_new - y).abs() > opts.growth_cap * y.abs();
        if err_norm <= 1.0 && !crosses && !too_fast && y_new.is_finite() {
            tau += h;
            y = y_new;
            samples.push((sign * tau, y));
            let resolved = y.abs() >= large && tail_time(k, y) <= 64.0 * f64::EPSILON * tau;
            if y.abs() >= escape || resolved {
                break TerminalStatus::Escaped;
            }
            let factor = if err_norm == 0.0 { 5.0 } else { (0.9 * err_norm.powf(-0.2)).clamp(0.2, 5.0) };
            h *= factor;
        } else if crosses || too_fast || !y_new.is_finite() {
            h *= 0.5;
        } else {
            h *= (0.9 * err_norm.powf(-0.2)).clamp(0.1, 0.9);
        }
        if h <= f64::EPSILON * tau.max(f64::MIN_POSITIVE) || h < f64::MIN_POSITIVE {
            break TerminalStatus::StiffFailure;
        }
    };
    Ok(Trajectory {
        samples,
        terminal_status: status,
    })
}

/// Integrates towards the blow-up and adds the asymptotic tail
/// `prod k_i / (n |y_escape|^n)`.
pub fn numeric_blowup_time(p: &CauchyProblem, opts: IntegratorOptions) -> Result<f64> {
    let direction = match classify_initial(p).blowup_direction {
        BlowupDirection::Future => Direction::Forward,
        BlowupDirection::Past => Direction::Backward,
        BlowupDirection::None => {
            return Err(Error::DomainViolation(format!(
                "no blow-up: y0 in [0, k_n] (y0 = {})",
                p.y0
            )))
        }
    };
    let bound = blowup_time_bound(p)?;
    let traj = integrate(p, direction, 2.0 * bound, opts)?;
    let (t, y) = traj.last();
    match traj.terminal_status {
        TerminalStatus::Escaped => Ok(t.abs() + tail_time(&p.k, y)),
        _ => Err(Error::StiffFailure { t, y, step: 0.0 }),
    }
}

/// Analytic time, bound, numeric estimate and their relative residual.
pub fn blowup_report(p: &CauchyProblem, opts: IntegratorOptions) -> Result<BlowupReport> {
    let mut report = analytic_blowup_time(p)?;
    let numeric = numeric_blowup_time(p, opts)?;
    report.numeric_time = Some(numeric);
    report.residual = Some((numeric - report.analytic_time).abs() / report.analytic_time);
    Ok(report)
}
