//! Lagrange weights `a_i`, both sides of the generalized inequality in log
//! space, classification of points outside the valid domain, and the
//! repeated-node variant with weights `a_ij`.

use serde::{Deserialize, Serialize};

use crate::logspace::{compensated_sum, log1p_remainder, weighted_log1p_sum, ScaledProduct, SERIES_RADIUS};
use crate::quadrature::{integrate, QuadOptions};
use crate::rational::{exact_weights, facts};
use crate::{check_finite, check_separation, Error, Result, TAU_EQ, TAU_ID};

/// Evaluation point `(x_1, ..., x_n)` with pairwise separated coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct XVector(Vec<f64>);

impl XVector {
    pub fn new(x: Vec<f64>) -> Result<Self> {
        check_finite(&x, "x")?;
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

    /// All coordinates are `>= 0`, the domain on which the inequality holds.
    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&v| v >= 0.0)
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl TryFrom<Vec<f64>> for XVector {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<XVector> for Vec<f64> {
    fn from(x: XVector) -> Self {
        x.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightVector(pub Vec<f64>);

impl WeightVector {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn sum(&self) -> f64 {
        compensated_sum(self.0.iter().copied()).0
    }
}

/// Outcome of evaluating the inequality at one point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PointClass {
    Holds,
    Equality,
    Fails,
    UndefinedBase,
    IllDefinedZeroPow,
    DivisionByZeroWeight,
}

/// `a_i = prod_{j != i} x_j / prod_{j != i} (x_j - x_i)` for distinct nodes.
pub(crate) fn lagrange_weights_raw(x: &[f64]) -> Vec<f64> {
    (0..x.len())
        .map(|i| {
            let mut num = ScaledProduct::one();
            let mut den = ScaledProduct::one();
            for (j, &xj) in x.iter().enumerate() {
                if j != i {
                    num = num.mul(xj);
                    den = den.mul(xj - x[i]);
                }
            }
            num.ratio(&den)
        })
        .collect()
}

pub fn lagrange_weights(x: &XVector) -> WeightVector {
    WeightVector(lagrange_weights_raw(x.as_slice()))
}

/// `(1/n) prod x_i`, the exponent on the right-hand side.
fn rhs_exponent(x: &[f64]) -> f64 {
    ScaledProduct::from_factors(x.iter().copied()).to_f64() / x.len() as f64
}

/// Relative rounding error below which a direct sum is trusted.
const RESOLVED: f64 = 1e-12;

/// `rhs - sum w_i ln(1 + x_i)` for nodes in `(-1, inf)` whose Lagrange
/// weights at zero are `w`.
///
/// The direct difference is used when its rounding error is negligible. Otherwise the gap is recomputed from the cancellation-free
/// representation
///
/// ```text
///   gap = prod x_i * int_0^1 s^{n-1} (1 - 1/prod(1 + s x_i)) ds
/// ```
///
/// which follows from `ln(1+x)/x = int_0^1 ds/(1 + s x)` and the closed-form
/// divided difference of `1/(1 + s t)` in `t`.
pub(crate) fn log_gap(nodes: &[f64], weights: &[f64], rhs_exp: f64) -> Result<f64> {
    let n = nodes.len();
    let eps = f64::EPSILON;
    let (gap, err) = if nodes.iter().all(|x| x.abs() <= SERIES_RADIUS) {
        // the degree-n Taylor term reproduces rhs exactly, leaving -sum w R_{n+1}
        let (s, abs) = compensated_sum(
            nodes
                .iter()
                .zip(weights)
                .map(|(&x, &w)| w * log1p_remainder(x, n + 1)),
        );
        (-s, 4.0 * (n as f64 + 2.0) * eps * abs)
    } else {
        let (lhs, lhs_err) = weighted_log1p_sum(nodes, weights);
        (rhs_exp - lhs, lhs_err + 2.0 * n as f64 * eps * rhs_exp.abs())
    };
    if err <= RESOLVED * gap.abs() || (gap == 0.0 && err == 0.0) {
        return Ok(gap);
    }
    integral_gap(nodes)
}

fn integral_gap(nodes: &[f64]) -> Result<f64> {
    let product = ScaledProduct::from_factors(nodes.iter().copied());
    if product.is_zero() {
        return Ok(0.0);
    }
    if nodes.iter().any(|&x| x <= -1.0) {
        return Err(Error::DomainViolation(
            "integral form of the gap needs every 1 + x_i > 0".into(),
        ));
    }
    let n = nodes.len() as i32;
    let integrand = |s: f64| {
        let log_prod: f64 = nodes.iter().map(|&x| (s * x).ln_1p()).sum();
        -s.powi(n - 1) * (-log_prod).exp_m1()
    };
    let est = integrate(
        integrand,
        0.0,
        1.0,
        QuadOptions { abs_tol: 0.0, rel_tol: 1e-13, max_panels: 2000 },
    )?;
    Ok(product.to_f64() * est.value)
}

/// `sum w_i ln(1 + x_i)` for nodes in `(-1, inf)` with Lagrange weights `w`.
/// Falls back to `prod x_i * int_0^1 s^{n-1}/prod(1 + s x_i) ds` when the
/// weighted sum leaves a non-negligible rounding error.
pub(crate) fn lagrange_log_sum(nodes: &[f64], weights: &[f64]) -> Result<f64> {
    let (value, err) = weighted_log1p_sum(nodes, weights);
    if err <= RESOLVED * value.abs() {
        return Ok(value);
    }
    if nodes.iter().any(|&x| x <= -1.0) {
        return Err(Error::DomainViolation("integral form needs every 1 + x_i > 0".into()));
    }
    let product = ScaledProduct::from_factors(nodes.iter().copied());
    let p = nodes.len() as i32 - 1;
    let est = integrate(
        |s: f64| {
            let log_prod: f64 = nodes.iter().map(|&x| (s * x).ln_1p()).sum();
            s.powi(p) * (-log_prod).exp()
        },
        0.0,
        1.0,
        QuadOptions { abs_tol: 0.0, rel_tol: 1e-13, max_panels: 2000 },
    )?;
    Ok(product.to_f64() * est.value)
}

/// `g(x) = (1/n) prod x_i - sum a_i ln(1 + x_i)` on the nonnegative domain.
pub fn inequality_gap(x: &XVector) -> Result<f64> {
    if !x.is_nonnegative() {
        return Err(Error::DomainViolation("inequality_gap needs every x_i >= 0".into()));
    }
    let a = lagrange_weights_raw(x.as_slice());
    log_gap(x.as_slice(), &a, rhs_exponent(x.as_slice()))
}

/// Everything known about one (possibly extended-domain) point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointReport {
    pub class: PointClass,
    pub weights: Vec<f64>,
    /// `ln(lhs)` when the left-hand side is a positive real.
    pub lhs_exponent: Option<f64>,
    /// `(1/n) prod x_i`.
    pub rhs_exponent: Option<f64>,
    /// `rhs_exponent - lhs_exponent`.
    pub gap: Option<f64>,
    /// The left-hand side as a real number, when defined.
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
}

impl PointReport {
    fn undefined(class: PointClass, weights: Vec<f64>) -> Self {
        Self {
            class,
            weights,
            lhs_exponent: None,
            rhs_exponent: None,
            gap: None,
            lhs: None,
            rhs: None,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct WeightInfo {
    value: f64,
    integer: bool,
    zero: bool,
    negative: bool,
    odd: bool,
}

fn weight_info(x: &[f64], a: &[f64]) -> Vec<WeightInfo> {
    if let Some(exact) = exact_weights(x) {
        exact
            .iter()
            .zip(a)
            .map(|(e, &value)| {
                let f = facts(e);
                WeightInfo {
                    value,
                    integer: f.is_integer,
                    zero: f.is_zero,
                    negative: f.is_negative,
                    odd: f.is_odd,
                }
            })
            .collect()
    } else {
        // heuristic: within TAU_ID of an integer counts as an integer
        a.iter()
            .map(|&value| {
                let rounded = value.round();
                let integer = (value - rounded).abs() <= TAU_ID;
                WeightInfo {
                    value,
                    integer,
                    zero: value.abs() <= TAU_ID,
                    negative: value < 0.0,
                    odd: integer && rounded.rem_euclid(2.0) == 1.0,
                }
            })
            .collect()
    }
}

pub(crate) fn classify_by_gap(gap: f64, lhs_exp: f64, rhs_exp: f64) -> PointClass {
    let scale = lhs_exp.abs().max(rhs_exp.abs());
    if gap.abs() <= TAU_EQ * scale {
        PointClass::Equality
    } else if gap > 0.0 {
        PointClass::Holds
    } else {
        PointClass::Fails
    }
}

/// Evaluates and classifies an arbitrary real point.
///
/// Order of precedence: coinciding coordinates, then a negative base with a
/// non-integer weight (or a zero base with a negative weight), then a zero
/// base with a zero weight, then the sign of the gap.
pub fn analyze_point(x: &[f64]) -> PointReport {
    if x.is_empty() || check_separation(x).is_err() {
        return PointReport::undefined(PointClass::DivisionByZeroWeight, Vec::new());
    }
    if x.iter().any(|v| !v.is_finite()) {
        return PointReport::undefined(PointClass::UndefinedBase, Vec::new());
    }
    let a = lagrange_weights_raw(x);
    let info = weight_info(x, &a);
    for (&xi, w) in x.iter().zip(&info) {
        if (xi < -1.0 && !w.integer) || (xi == -1.0 && w.negative && !w.zero) {
            return PointReport::undefined(PointClass::UndefinedBase, a);
        }
    }
    for (&xi, w) in x.iter().zip(&info) {
        if xi == -1.0 && w.zero {
            return PointReport::undefined(PointClass::IllDefinedZeroPow, a);
        }
    }

    let rhs_exp = rhs_exponent(x);
    let rhs = rhs_exp.exp();
    let all_positive_bases = x.iter().all(|&v| v > -1.0);
    if all_positive_bases {
        let (lhs_exp, _) = weighted_log1p_sum(x, &a);
        let gap = match log_gap(x, &a, rhs_exp) {
            Ok(g) => g,
            Err(_) => rhs_exp - lhs_exp,
        };
        return PointReport {
            class: classify_by_gap(gap, lhs_exp, rhs_exp),
            weights: a,
            lhs_exponent: Some(lhs_exp),
            rhs_exponent: Some(rhs_exp),
            gap: Some(gap),
            lhs: Some(lhs_exp.exp()),
            rhs: Some(rhs),
        };
    }

    // some base is <= 0 with an admissible (integer or positive) weight
    let mut negative = false;
    let mut zero = false;
    let mut log_terms = Vec::with_capacity(x.len());
    for (&xi, w) in x.iter().zip(&info) {
        let base = 1.0 + xi;
        if xi == -1.0 {
            zero = true;
            continue;
        }
        let exponent = if xi < -1.0 { w.value.round() } else { w.value };
        if xi < -1.0 && w.odd {
            negative = !negative;
        }
        log_terms.push(exponent * base.abs().ln());
    }
    if zero {
        return PointReport {
            class: PointClass::Holds,
            weights: a,
            lhs_exponent: None,
            rhs_exponent: Some(rhs_exp),
            gap: None,
            lhs: Some(0.0),
            rhs: Some(rhs),
        };
    }
    let (lhs_exp, _) = compensated_sum(log_terms);
    if negative {
        return PointReport {
            class: PointClass::Holds,
            weights: a,
            lhs_exponent: None,
            rhs_exponent: Some(rhs_exp),
            gap: None,
            lhs: Some(-lhs_exp.exp()),
            rhs: Some(rhs),
        };
    }
    let gap = rhs_exp - lhs_exp;
    PointReport {
        class: classify_by_gap(gap, lhs_exp, rhs_exp),
        weights: a,
        lhs_exponent: Some(lhs_exp),
        rhs_exponent: Some(rhs_exp),
        gap: Some(gap),
        lhs: Some(lhs_exp.exp()),
        rhs: Some(rhs),
    }
}

pub fn classify_extended_point(x: &[f64]) -> PointClass {
    analyze_point(x).class
}

/// Both sides `(lhs, rhs)` as real numbers.
pub fn evaluate_sides(x: &XVector) -> Result<(f64, f64)> {
    let report = analyze_point(x.as_slice());
    match report.class {
        PointClass::UndefinedBase => {
            let index = x.as_slice().iter().position(|&v| v <= -1.0).unwrap_or(0);
            Err(Error::UndefinedBase { index })
        }
        PointClass::IllDefinedZeroPow => {
            let index = x.as_slice().iter().position(|&v| v == -1.0).unwrap_or(0);
            Err(Error::IllDefinedZeroPow { index })
        }
        PointClass::DivisionByZeroWeight => {
            // XVector construction already rejects this
            Err(Error::InvalidInput("coinciding coordinates".into()))
        }
        _ => Ok((
            report.lhs.expect("defined classes carry lhs"),
            report.rhs.expect("defined classes carry rhs"),
        )),
    }
}

/// Nodes `x_i` with multiplicities `r_i`, realised as `{ j x_i : 1 <= j <= r_i }`.
#[derive(Debug, Clone, PartialEq)]
pub struct RepetitionSpec {
    x: XVector,
    r: Vec<u32>,
}

impl RepetitionSpec {
    pub fn new(x: Vec<f64>, r: Vec<u32>) -> Result<Self> {
        let x = XVector::new(x)?;
        if !x.is_nonnegative() {
            return Err(Error::DomainViolation("repetitions need every x_i >= 0".into()));
        }
        if r.len() != x.len() {
            return Err(Error::InvalidInput(format!(
                "r has {} entries but x has {}",
                r.len(),
                x.len()
            )));
        }
        if r.iter().any(|&ri| ri == 0) {
            return Err(Error::InvalidInput("every r_i must be a positive integer".into()));
        }
        let spec = Self { x, r };
        check_separation(&spec.expanded_nodes())?;
        Ok(spec)
    }

    pub fn x(&self) -> &XVector {
        &self.x
    }

    pub fn r(&self) -> &[u32] {
        &self.r
    }

    /// `m = sum r_i`.
    pub fn m(&self) -> u32 {
        self.r.iter().sum()
    }

    /// `j x_i` for `i = 1..n`, `j = 1..r_i`, row by row.
    pub fn expanded_nodes(&self) -> Vec<f64> {
        self.x
            .as_slice()
            .iter()
            .zip(&self.r)
            .flat_map(|(&xi, &ri)| (1..=ri).map(move |j| j as f64 * xi))
            .collect()
    }
}

fn factorial(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

/// The weights `a_ij`, one row per `x_i` with `r_i` entries.
pub fn repetition_weights(spec: &RepetitionSpec) -> Vec<Vec<f64>> {
    let x = spec.x.as_slice();
    let r = &spec.r;
    let n = x.len();
    (0..n)
        .map(|i| {
            (1..=r[i])
                .map(|j| {
                    let mut num = ScaledProduct::one();
                    let mut den = ScaledProduct::one();
                    for l in (1..=r[i]).filter(|&l| l != j) {
                        num = num.mul(f64::from(l));
                        den = den.mul(f64::from(l) - f64::from(j));
                    }
                    for k in (0..n).filter(|&k| k != i) {
                        num = num.mul(factorial(r[k])).mul(x[k].powi(r[k] as i32));
                        for l in 1..=r[k] {
                            den = den.mul(f64::from(l) * x[k] - f64::from(j) * x[i]);
                        }
                    }
                    num.ratio(&den)
                })
                .collect()
        })
        .collect()
}

/// `(1/m) prod r_i! x_i^{r_i} - sum_{i,j} a_ij ln(1 + j x_i)`.
pub fn repetition_gap(spec: &RepetitionSpec) -> Result<f64> {
    let x = spec.x.as_slice();
    let rhs = ScaledProduct::from_factors(
        x.iter()
            .zip(&spec.r)
            .flat_map(|(&xi, &ri)| [factorial(ri), xi.powi(ri as i32)]),
    )
    .to_f64()
        / f64::from(spec.m());
    let weights: Vec<f64> = repetition_weights(spec).into_iter().flatten().collect();
    log_gap(&spec.expanded_nodes(), &weights, rhs)
}
