//! Divided differences of the completely monotone function
//! `f(x) = ln(1 + x)/x`, its signed derivatives
//! `(-1)^n f^(n)(x) = n! int_0^1 t^n/(1 + t x)^{n+1} dt`, and the strict
//! mean-value bound `sum_i f(x_i)/prod_{j!=i}(x_j - x_i) < 1/n`.

use serde::Serialize;

use crate::quadrature::{integrate, QuadOptions};
use crate::{check_finite, check_separation, Error, Result, N_MAX};

/// Pairwise separated, strictly positive nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeSet(Vec<f64>);

impl NodeSet {
    pub fn new(x: Vec<f64>) -> Result<Self> {
        check_finite(&x, "nodes")?;
        if x.iter().any(|&v| v <= 0.0) {
            return Err(Error::DomainViolation("nodes must be strictly positive".into()));
        }
        check_separation(&x)?;
        Ok(Self(x))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.0.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.0.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Below this `|x|` the alternating series replaces `ln(1 + x)/x`.
const SERIES_SWITCH: f64 = 1e-4;

fn log1p_over_x_unchecked(x: f64) -> f64 {
    if x.abs() < SERIES_SWITCH {
        // 1 - x/2 + x^2/3 - ... through degree 8
        (0..=8).rev().fold(0.0, |acc, k| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            acc * x + sign / (k as f64 + 1.0)
        })
    } else {
        x.ln_1p() / x
    }
}

/// `ln(1 + x)/x` on `[0, inf)`, extended continuously by `1` at zero.
pub fn f_log1p_over_x(x: f64) -> Result<f64> {
    if !(x >= 0.0) || x.is_infinite() {
        return Err(Error::DomainViolation(format!("f is evaluated on [0, inf), got {x}")));
    }
    Ok(log1p_over_x_unchecked(x))
}

/// Same function on `(-1, inf)`. Outside the completely monotone range; only
/// the extended-domain explorer should need it.
pub fn f_log1p_over_x_extended(x: f64) -> Result<f64> {
    if !(x > -1.0) || x.is_infinite() {
        return Err(Error::DomainViolation(format!("f is undefined at {x}")));
    }
    Ok(log1p_over_x_unchecked(x))
}

/// `[x_1, ..., x_n; f]` by the Newton recurrence on ascending nodes.
pub fn newton_divided_difference<F: Fn(f64) -> f64>(nodes: &[f64], f: F) -> f64 {
    let mut x = nodes.to_vec();
    x.sort_by(f64::total_cmp);
    let mut d: Vec<f64> = x.iter().map(|&v| f(v)).collect();
    let n = x.len();
    for level in 1..n {
        for i in (level..n).rev() {
            d[i] = (d[i] - d[i - 1]) / (x[i] - x[i - level]);
        }
    }
    d[n - 1]
}

pub fn divided_difference<F: Fn(f64) -> f64>(nodes: &NodeSet, f: F) -> f64 {
    newton_divided_difference(nodes.as_slice(), f)
}

/// The explicit symmetric form `sum_i f(x_i) / prod_{j!=i} (x_i - x_j)`.
pub fn symmetric_sum<F: Fn(f64) -> f64>(nodes: &[f64], f: F) -> f64 {
    nodes
        .iter()
        .enumerate()
        .map(|(i, &xi)| {
            let den: f64 = nodes
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &xj)| xi - xj)
                .product();
            f(xi) / den
        })
        .sum()
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// `(-1)^n f^(n)(x)` for `f(x) = ln(1 + x)/x`.
///
/// The integral `int_0^1 t^n/(1 + t x)^{n+1} dt` lies in `(0, 1/(n+1)]` and
/// is resolved to relative accuracy `1e-12` (hence absolute `1e-12`); the
/// factorial is applied afterwards. `x = 0` returns the limit value.
pub fn cm_derivative(order: usize, x: f64) -> Result<f64> {
    if order > N_MAX {
        return Err(Error::InvalidInput(format!("order {order} exceeds N_MAX = {N_MAX}")));
    }
    if !(x >= 0.0) || x.is_infinite() {
        return Err(Error::DomainViolation(format!("derivatives are taken on [0, inf), got {x}")));
    }
    if x == 0.0 {
        return Ok(cm_limit_at_zero(order));
    }
    let p = order as i32;
    let est = integrate(
        |t| t.powi(p) / (1.0 + t * x).powi(p + 1),
        0.0,
        1.0,
        QuadOptions { abs_tol: 0.0, rel_tol: 1e-12, max_panels: 2000 },
    )?;
    if est.error > 1e-12 {
        return Err(Error::QuadratureFailure {
            estimate: est.value,
            error: est.error,
            panels: est.panels,
        });
    }
    Ok(factorial(order) * est.value)
}

/// `lim_{x -> 0+} (-1)^n f^(n)(x) = n!/(n+1)`.
pub fn cm_limit_at_zero(order: usize) -> f64 {
    factorial(order) / (order as f64 + 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanValueBound {
    /// `sum f(x_i)/prod_{j!=i}(x_j - x_i) = (-1)^{n-1} [x; f]`.
    pub value: f64,
    /// `1/n`.
    pub bound: f64,
    /// `bound - value`, computed from its own positive integrand.
    pub margin: f64,
}

impl MeanValueBound {
    /// `0 < value < bound`.
    pub fn holds(&self) -> bool {
        self.value > 0.0 && self.margin > 0.0
    }
}

/// Evaluates `(-1)^{n-1} [x; f]` through
///
/// ```text
///   (-1)^{n-1} [x; f] = int_0^1 s^{n-1} / prod (1 + s x_i) ds
/// ```
///
/// (the divided difference of `1/(1 + s x)` in `x` is
/// `(-s)^{n-1}/prod(1 + s x_i)`). Both the value and the distance to `1/n`
/// come from integrands of fixed sign, so neither suffers the cancellation of
/// the difference table when nodes cluster.
pub fn mean_value_bound_check(nodes: &NodeSet) -> Result<MeanValueBound> {
    let x = nodes.as_slice();
    let p = x.len() as i32 - 1;
    let opts = QuadOptions { abs_tol: 0.0, rel_tol: 1e-13, max_panels: 2000 };
    let value = integrate(|s| s.powi(p) / x.iter().map(|&xi| 1.0 + s * xi).product::<f64>(), 0.0, 1.0, opts)?;
    let margin = integrate(
        |s| {
            // 1 - 1/prod(1 + s x_i) = expm1(sum ln_1p(s x_i)) / prod(1 + s x_i)
            let log: f64 = x.iter().map(|&xi| (s * xi).ln_1p()).sum();
            s.powi(p) * -(-log).exp_m1()
        },
        0.0,
        1.0,
        opts,
    )?;
    Ok(MeanValueBound {
        value: value.value,
        bound: 1.0 / x.len() as f64,
        margin: margin.value,
    })
}

/// Diagnostic: a point `x0` in `(min, max)` with
/// `(-1)^{n-1} f^{(n-1)}(x0)/(n-1)! = value`, located by bisection (the
/// left side is strictly decreasing in `x0`). `None` for a single node or
/// when the target is not bracketed numerically.
pub fn locate_mean_value_point(nodes: &NodeSet) -> Result<Option<f64>> {
    let n = nodes.len();
    if n < 2 || n - 1 > N_MAX {
        return Ok(None);
    }
    let target = mean_value_bound_check(nodes)?.value;
    let scaled = |x0: f64| -> Result<f64> {
        Ok(cm_derivative(n - 1, x0)? / factorial(n - 1) - target)
    };
    let (mut lo, mut hi) = (nodes.min(), nodes.max());
    let (g_lo, g_hi) = (scaled(lo)?, scaled(hi)?);
    if !(g_lo >= 0.0 && g_hi <= 0.0) {
        return Ok(None);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if scaled(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(0.5 * (lo + hi)))
}
