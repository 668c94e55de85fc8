//! Randomized verification suites.
//!
//! Every sample draws from its own ChaCha8 stream seeded by a hash of
//! `(seed, suite tag, n, index)`, and results are merged in index order, so a
//! report depends only on its config and never on the worker count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::divdiff::{f_log1p_over_x, mean_value_bound_check, symmetric_sum, NodeSet};
use crate::logspace::compensated_sum;
use crate::ode::{analytic_blowup_time, numeric_blowup_time, quadrature_blowup_time, CauchyProblem, IntegratorOptions};
use crate::partial_fractions::KVector;
use crate::weights::{
    analyze_point, inequality_gap, lagrange_weights, repetition_gap, repetition_weights, PointClass, RepetitionSpec,
    XVector,
};
use crate::{check_separation, Error, Result, SCHEMA_VERSION, TAU_EQ, TAU_ID};

/// Consecutive rejections tolerated before sampling gives up.
pub const MAX_REJECTIONS: usize = 1000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    /// Inclusive range of dimensions.
    pub n_range: (usize, usize),
    /// Samples per dimension for the inequality suite; total random cases,
    /// dealt round-robin over the dimensions, for the other suites.
    pub samples: usize,
    pub seed: u64,
    pub x_max: f64,
    pub include_equality_cases: bool,
    pub include_extended_domain: bool,
    /// Thread count; 0 lets the pool decide.
    pub workers: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            n_range: (1, 6),
            samples: 1000,
            seed: 0,
            x_max: 10.0,
            include_equality_cases: false,
            include_extended_domain: false,
            workers: 0,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.n_range;
        if lo == 0 || lo > hi || hi > crate::N_MAX {
            return Err(Error::InvalidInput(format!(
                "n range must satisfy 1 <= lo <= hi <= {}, got {lo}..{hi}",
                crate::N_MAX
            )));
        }
        if self.samples == 0 {
            return Err(Error::InvalidInput("samples must be at least 1".into()));
        }
        if !(self.x_max > 0.0) || !self.x_max.is_finite() {
            return Err(Error::InvalidInput(format!("x_max must be positive, got {}", self.x_max)));
        }
        Ok(())
    }

    fn dims(&self) -> std::ops::RangeInclusive<usize> {
        self.n_range.0..=self.n_range.1
    }

    /// `(n, index)` for `samples` cases dealt round-robin over the dimensions.
    fn cases(&self) -> Vec<(usize, usize)> {
        let (lo, hi) = self.n_range;
        (0..self.samples).map(|i| (lo + i % (hi - lo + 1), i)).collect()
    }

    /// Runs `job` on a pool sized by `workers`.
    fn in_pool<T: Send>(&self, job: impl FnOnce() -> T + Send) -> Result<T> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()
            .map_err(|e| Error::InvalidInput(format!("cannot start worker pool: {e}")))?;
        Ok(pool.install(job))
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy)]
enum Stream {
    Valid = 1,
    Equality = 2,
    Extended = 3,
    Blowup = 4,
    CrossRoute = 5,
    Repetition = 6,
}

fn substream(seed: u64, stream: Stream, n: usize, index: usize) -> ChaCha8Rng {
    let mut h = splitmix64(seed);
    for word in [stream as u64, n as u64, index as u64] {
        h = splitmix64(h ^ word);
    }
    ChaCha8Rng::seed_from_u64(h)
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    let (a, b) = (lo.ln(), hi.ln());
    (a + rng.gen::<f64>() * (b - a)).exp().clamp(lo, hi)
}

/// Draws until `draw` yields a well-separated vector.
fn draw_separated(rng: &mut ChaCha8Rng, mut draw: impl FnMut(&mut ChaCha8Rng) -> Vec<f64>) -> Result<Vec<f64>> {
    for _ in 0..MAX_REJECTIONS {
        let v = draw(rng);
        if check_separation(&v).is_ok() {
            return Ok(v);
        }
    }
    Err(Error::SamplingExhausted { rejections: MAX_REJECTIONS })
}

fn positive_sample(seed: u64, stream: Stream, n: usize, index: usize, x_max: f64) -> Result<Vec<f64>> {
    let mut rng = substream(seed, stream, n, index);
    draw_separated(&mut rng, |rng| (0..n).map(|_| log_uniform(rng, 1e-6 * x_max, x_max)).collect())
}

/// `count` vectors with coordinates log-uniform on `[1e-6 x_max, x_max]`.
pub fn sample_positive_distinct(n: usize, count: usize, seed: u64, x_max: f64) -> Result<Vec<XVector>> {
    if n == 0 || count == 0 || !(x_max > 0.0) {
        return Err(Error::InvalidInput("need n >= 1, count >= 1 and x_max > 0".into()));
    }
    (0..count)
        .map(|i| positive_sample(seed, Stream::Valid, n, i, x_max).and_then(XVector::new))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailureRecord {
    pub x: Vec<f64>,
    pub gap: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub total: u64,
    pub holds: u64,
    pub equalities: u64,
    pub failures: Vec<FailureRecord>,
    /// Undefined bases plus coinciding coordinates.
    pub undefined: u64,
    pub ill_defined: u64,
    /// Smallest gap over strictly positive samples.
    pub min_gap: Option<f64>,
    pub seed: u64,
    pub schema_version: u32,
}

impl VerificationReport {
    fn empty(seed: u64) -> Self {
        Self {
            total: 0,
            holds: 0,
            equalities: 0,
            failures: Vec::new(),
            undefined: 0,
            ill_defined: 0,
            min_gap: None,
            seed,
            schema_version: SCHEMA_VERSION,
        }
    }

    /// Failures at points with every coordinate `>= 0`.
    pub fn valid_domain_failures(&self) -> impl Iterator<Item = &FailureRecord> {
        self.failures.iter().filter(|f| f.x.iter().all(|&v| v >= 0.0))
    }

    pub fn passed(&self) -> bool {
        self.valid_domain_failures().next().is_none()
    }

    fn absorb(&mut self, o: Outcome) {
        self.total += 1;
        match o.class {
            PointClass::Holds => self.holds += 1,
            PointClass::Equality => self.equalities += 1,
            PointClass::Fails => self.failures.push(FailureRecord { x: o.x.clone(), gap: o.gap }),
            PointClass::UndefinedBase | PointClass::DivisionByZeroWeight => self.undefined += 1,
            PointClass::IllDefinedZeroPow => self.ill_defined += 1,
        }
        if o.broken_equality {
            self.failures.push(FailureRecord { x: o.x, gap: o.gap });
        }
        if o.tracks_min {
            if let Some(g) = o.gap {
                self.min_gap = Some(self.min_gap.map_or(g, |m| m.min(g)));
            }
        }
    }
}

#[derive(Debug)]
struct Outcome {
    x: Vec<f64>,
    class: PointClass,
    gap: Option<f64>,
    tracks_min: bool,
    /// A constructed zero-coordinate point whose gap is not within `TAU_EQ`.
    broken_equality: bool,
}

fn outcome(x: Vec<f64>, tracks_min: bool) -> Outcome {
    let r = analyze_point(&x);
    Outcome {
        x,
        class: r.class,
        gap: r.gap,
        tracks_min,
        broken_equality: false,
    }
}

fn equality_pair(cfg: &SuiteConfig, n: usize, index: usize) -> Result<[Outcome; 2]> {
    let mut x = positive_sample(cfg.seed, Stream::Equality, n, index, cfg.x_max)?;
    let slot = index % n;
    // nudges shrink from 1e-7 x_max down to 1e-12 x_max
    let nudge = cfg.x_max * 10f64.powi(-7 - (index % 6) as i32);
    x[slot] = 0.0;
    let mut exact = outcome(x.clone(), false);
    exact.broken_equality = exact.class != PointClass::Equality || exact.gap.map_or(true, |g| g.abs() > TAU_EQ);
    x[slot] = nudge;
    let adjacent = if check_separation(&x).is_ok() {
        outcome(x, true)
    } else {
        outcome(vec![nudge], true)
    };
    Ok([exact, adjacent])
}

/// The four extended-domain points whose classification is known by hand.
pub const EXTENDED_PROBES: [[f64; 2]; 4] = [[2.0, -2.0], [0.0, -1.0], [1.0, -0.5], [-0.25, -0.5]];

/// Classifies random points on the valid domain and, optionally, constructed
/// equality points and mixed-sign explorer points.
pub fn run_inequality_suite(cfg: &SuiteConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    let per_dim: Result<Vec<Vec<Outcome>>> = cfg.in_pool(|| {
        cfg.dims()
            .map(|n| {
                let mut out: Vec<Outcome> = (0..cfg.samples)
                    .into_par_iter()
                    .map(|i| positive_sample(cfg.seed, Stream::Valid, n, i, cfg.x_max).map(|x| outcome(x, true)))
                    .collect::<Result<_>>()?;
                if cfg.include_equality_cases {
                    let count = (cfg.samples / 10).max(1);
                    let pairs: Vec<[Outcome; 2]> =
                        (0..count).into_par_iter().map(|i| equality_pair(cfg, n, i)).collect::<Result<_>>()?;
                    out.extend(pairs.into_iter().flatten());
                }
                if cfg.include_extended_domain {
                    let extra: Vec<Outcome> = (0..cfg.samples)
                        .into_par_iter()
                        .map(|i| {
                            let mut rng = substream(cfg.seed, Stream::Extended, n, i);
                            draw_separated(&mut rng, |rng| (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect())
                                .map(|x| outcome(x, false))
                        })
                        .collect::<Result<_>>()?;
                    out.extend(extra);
                }
                Ok(out)
            })
            .collect()
    })?;
    let mut report = VerificationReport::empty(cfg.seed);
    for o in per_dim?.into_iter().flatten() {
        report.absorb(o);
    }
    if cfg.include_extended_domain {
        for p in EXTENDED_PROBES {
            report.absorb(outcome(p.to_vec(), false));
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlowupCase {
    pub k: Vec<f64>,
    pub y0: f64,
    pub analytic: f64,
    pub bound: f64,
    pub quadrature: Option<f64>,
    pub numeric: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlowupSuiteReport {
    pub total: u64,
    pub bound_violations: u64,
    pub quadrature_violations: u64,
    pub numeric_violations: u64,
    pub numerical_failures: u64,
    pub worst_quadrature_residual: f64,
    pub worst_numeric_residual: f64,
    pub failures: Vec<BlowupCase>,
    pub seed: u64,
    pub schema_version: u32,
}

impl BlowupSuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub const BLOWUP_NUMERIC_TOL: f64 = 1e-3;
pub const BLOWUP_QUADRATURE_TOL: f64 = 1e-8;

/// Fixed problems with known closed-form answers, checked ahead of the
/// random ones.
pub fn fixed_blowup_cases() -> Vec<(Vec<f64>, f64)> {
    vec![(vec![1.0], -1.0), (vec![1.0, 2.0], -1.0), (vec![1.0, 2.0], 4.0), (vec![1.0], 2.0)]
}

/// A random problem with a blow-up: `k` log-uniform on `[0.1, 10]`, and `y0`
/// on the negative side within a decade of the carrying capacities or just
/// above `k_n`.
pub fn random_blowup_problem(seed: u64, n: usize, index: usize) -> Result<CauchyProblem> {
    let mut rng = substream(seed, Stream::Blowup, n, index);
    let mut k = draw_separated(&mut rng, |rng| (0..n).map(|_| log_uniform(rng, 0.1, 10.0)).collect())?;
    k.sort_by(f64::total_cmp);
    let k = KVector::new(k)?;
    let y0 = if rng.gen_bool(0.5) {
        -log_uniform(&mut rng, k.as_slice()[0] / 10.0, 10.0 * k.largest())
    } else {
        k.largest() * (1.0 + log_uniform(&mut rng, 1e-2, 10.0))
    };
    CauchyProblem::new(k, y0)
}

fn check_blowup(p: &CauchyProblem, opts: IntegratorOptions) -> Result<(BlowupCase, f64, f64, bool)> {
    let report = analytic_blowup_time(p)?;
    let mut case = BlowupCase {
        k: p.k.as_slice().to_vec(),
        y0: p.y0,
        analytic: report.analytic_time,
        bound: report.bound,
        quadrature: None,
        numeric: None,
    };
    let rel = |v: f64| (v - case.analytic).abs() / case.analytic;
    let mut numerical_failure = false;
    let (mut q_res, mut n_res) = (0.0, 0.0);
    match quadrature_blowup_time(p) {
        Ok(q) => {
            q_res = rel(q);
            case.quadrature = Some(q);
        }
        Err(e) if e.is_numerical() => numerical_failure = true,
        Err(e) => return Err(e),
    }
    match numeric_blowup_time(p, opts) {
        Ok(t) => {
            n_res = rel(t);
            case.numeric = Some(t);
        }
        Err(e) if e.is_numerical() => numerical_failure = true,
        Err(e) => return Err(e),
    }
    Ok((case, q_res, n_res, numerical_failure))
}

/// Closed form against the bound, the quadrature oracle and the integrator.
/// `samples` random problems are drawn per dimension.
pub fn run_blowup_suite(cfg: &SuiteConfig) -> Result<BlowupSuiteReport> {
    cfg.validate()?;
    let opts = IntegratorOptions::default();
    let mut problems: Vec<CauchyProblem> = fixed_blowup_cases()
        .into_iter()
        .map(|(k, y0)| CauchyProblem::new(KVector::new(k)?, y0))
        .collect::<Result<_>>()?;
    for (n, i) in cfg.cases() {
        problems.push(random_blowup_problem(cfg.seed, n, i)?);
    }
    let checked: Vec<_> = cfg.in_pool(|| problems.par_iter().map(|p| check_blowup(p, opts)).collect::<Result<Vec<_>>>())??;
    let mut report = BlowupSuiteReport {
        total: 0,
        bound_violations: 0,
        quadrature_violations: 0,
        numeric_violations: 0,
        numerical_failures: 0,
        worst_quadrature_residual: 0.0,
        worst_numeric_residual: 0.0,
        failures: Vec::new(),
        seed: cfg.seed,
        schema_version: SCHEMA_VERSION,
    };
    for (case, q_res, n_res, numerical_failure) in checked {
        report.total += 1;
        report.worst_quadrature_residual = report.worst_quadrature_residual.max(q_res);
        report.worst_numeric_residual = report.worst_numeric_residual.max(n_res);
        let bound_bad = !(case.analytic < case.bound);
        let q_bad = q_res > BLOWUP_QUADRATURE_TOL;
        let n_bad = n_res > BLOWUP_NUMERIC_TOL;
        report.bound_violations += bound_bad as u64;
        report.quadrature_violations += q_bad as u64;
        report.numeric_violations += n_bad as u64;
        report.numerical_failures += numerical_failure as u64;
        if bound_bad || q_bad || n_bad || numerical_failure {
            report.failures.push(case);
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossRoute {
    /// `sum a_i ln(1 + x_i)`.
    pub log_sum: f64,
    /// `prod x_i * sum f(x_i) / prod_{j != i} (x_j - x_i)` with `f = ln(1+x)/x`.
    pub divided_sum: f64,
    pub residual: f64,
    /// `n (-1)^{n-1} [x; f]`, which lies in `(0, 1)`.
    pub normalized: f64,
    /// `1 - normalized`, resolved independently of `normalized`.
    pub margin: f64,
}

impl CrossRoute {
    pub fn passed(&self) -> bool {
        self.residual <= TAU_ID && self.normalized > 0.0 && self.margin > 0.0
    }
}

/// The same quantity computed through the Lagrange weights and through the
/// divided difference of `ln(1+x)/x`.
pub fn cross_route_check(x: &XVector) -> Result<CrossRoute> {
    if !x.as_slice().iter().all(|&v| v > 0.0) {
        return Err(Error::DomainViolation("cross-route check needs positive coordinates".into()));
    }
    let xs = x.as_slice();
    let n = xs.len();
    let a = lagrange_weights(x);
    let log_sum = compensated_sum(a.as_slice().iter().zip(xs).map(|(ai, xi)| ai * xi.ln_1p())).0;
    let parity = if n % 2 == 1 { 1.0 } else { -1.0 };
    let sum = parity * symmetric_sum(xs, |t| f_log1p_over_x(t).unwrap_or(f64::NAN));
    let product: f64 = xs.iter().product();
    let divided_sum = product * sum;
    // the explicit sum cancels badly for clustered nodes, so the strict bound
    // is judged on the integral form of the same divided difference
    let bound = mean_value_bound_check(&NodeSet::new(xs.to_vec())?)?;
    let nf = n as f64;
    Ok(CrossRoute {
        log_sum,
        divided_sum,
        residual: (log_sum - divided_sum).abs(),
        normalized: nf * bound.value,
        margin: nf * bound.margin,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossRouteFailure {
    pub x: Vec<f64>,
    pub residual: f64,
    pub normalized: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossRouteReport {
    pub total: u64,
    pub worst_residual: f64,
    pub max_normalized: f64,
    pub failures: Vec<CrossRouteFailure>,
    pub seed: u64,
    pub schema_version: u32,
}

impl CrossRouteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn cross_route_suite(cfg: &SuiteConfig) -> Result<CrossRouteReport> {
    cfg.validate()?;
    let checks: Vec<(Vec<f64>, CrossRoute)> = cfg.in_pool(|| {
        cfg.cases()
            .into_par_iter()
            .map(|(n, i)| {
                let x = XVector::new(positive_sample(cfg.seed, Stream::CrossRoute, n, i, cfg.x_max)?)?;
                let c = cross_route_check(&x)?;
                Ok((x.into_inner(), c))
            })
            .collect::<Result<_>>()
    })??;
    let mut report = CrossRouteReport {
        total: 0,
        worst_residual: 0.0,
        max_normalized: 0.0,
        failures: Vec::new(),
        seed: cfg.seed,
        schema_version: SCHEMA_VERSION,
    };
    for (x, c) in checks {
        report.total += 1;
        report.worst_residual = report.worst_residual.max(c.residual);
        report.max_normalized = report.max_normalized.max(c.normalized);
        if !c.passed() {
            report.failures.push(CrossRouteFailure {
                x,
                residual: c.residual,
                normalized: c.normalized,
            });
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RepetitionFailure {
    pub x: Vec<f64>,
    pub r: Vec<u32>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RepetitionReport {
    pub total: u64,
    /// Largest `|a_i1 - a_i|` over all-ones multiplicities.
    pub reduction_max_error: f64,
    /// Largest `|repetition_gap - inequality_gap(expanded)| / max(1, |gap|)`.
    pub consistency_max_error: f64,
    pub min_gap: Option<f64>,
    pub failures: Vec<RepetitionFailure>,
    pub seed: u64,
    pub schema_version: u32,
}

impl RepetitionReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Largest total multiplicity drawn by the repetition suite.
pub const MAX_TOTAL_MULTIPLICITY: u32 = 10;

/// Random multiplicities with `sum r_i <= 10`; a quarter of the cases use all
/// ones so the reduction to plain Lagrange weights is exercised.
pub fn random_repetition_spec(seed: u64, n: usize, index: usize, x_max: f64) -> Result<RepetitionSpec> {
    let n = n.min(MAX_TOTAL_MULTIPLICITY as usize);
    let mut rng = substream(seed, Stream::Repetition, n, index);
    let r: Vec<u32> = if rng.gen_bool(0.25) {
        vec![1; n]
    } else {
        let mut r = vec![1u32; n];
        let spare = MAX_TOTAL_MULTIPLICITY - n as u32;
        for _ in 0..rng.gen_range(0..=spare) {
            let slot = rng.gen_range(0..n);
            r[slot] += 1;
        }
        r
    };
    for _ in 0..MAX_REJECTIONS {
        let x: Vec<f64> = (0..n).map(|_| log_uniform(&mut rng, 1e-6 * x_max, x_max)).collect();
        if let Ok(spec) = RepetitionSpec::new(x, r.clone()) {
            return Ok(spec);
        }
    }
    Err(Error::SamplingExhausted { rejections: MAX_REJECTIONS })
}

pub const REPETITION_REDUCTION_TOL: f64 = 1e-12;
pub const REPETITION_CONSISTENCY_TOL: f64 = 1e-10;

#[derive(Debug)]
struct RepetitionCheck {
    spec: RepetitionSpec,
    reduction: Option<f64>,
    consistency: f64,
    gap: f64,
}

fn check_repetition(spec: RepetitionSpec) -> Result<RepetitionCheck> {
    let reduction = spec.r().iter().all(|&r| r == 1).then(|| {
        let a = lagrange_weights(spec.x());
        repetition_weights(&spec)
            .iter()
            .zip(a.as_slice())
            .map(|(row, &ai)| (row[0] - ai).abs())
            .fold(0.0, f64::max)
    });
    let gap = repetition_gap(&spec)?;
    let expanded = XVector::new(spec.expanded_nodes())?;
    let consistency = (gap - inequality_gap(&expanded)?).abs() / gap.abs().max(1.0);
    Ok(RepetitionCheck {
        spec,
        reduction,
        consistency,
        gap,
    })
}

pub fn repetition_consistency_suite(cfg: &SuiteConfig) -> Result<RepetitionReport> {
    cfg.validate()?;
    let checks: Vec<RepetitionCheck> = cfg.in_pool(|| {
        cfg.cases()
            .into_par_iter()
            .map(|(n, i)| random_repetition_spec(cfg.seed, n, i, cfg.x_max).and_then(check_repetition))
            .collect::<Result<_>>()
    })??;
    let mut report = RepetitionReport {
        total: 0,
        reduction_max_error: 0.0,
        consistency_max_error: 0.0,
        min_gap: None,
        failures: Vec::new(),
        seed: cfg.seed,
        schema_version: SCHEMA_VERSION,
    };
    for c in checks {
        report.total += 1;
        report.consistency_max_error = report.consistency_max_error.max(c.consistency);
        report.min_gap = Some(report.min_gap.map_or(c.gap, |m: f64| m.min(c.gap)));
        let mut reasons = Vec::new();
        if let Some(e) = c.reduction {
            report.reduction_max_error = report.reduction_max_error.max(e);
            if e > REPETITION_REDUCTION_TOL {
                reasons.push(format!("reduction error {e:e}"));
            }
        }
        if c.consistency > REPETITION_CONSISTENCY_TOL {
            reasons.push(format!("gap mismatch {:e}", c.consistency));
        }
        if !(c.gap > 0.0) {
            reasons.push(format!("non-positive gap {:e}", c.gap));
        }
        if !reasons.is_empty() {
            report.failures.push(RepetitionFailure {
                x: c.spec.x().as_slice().to_vec(),
                r: c.spec.r().to_vec(),
                reason: reasons.join("; "),
            });
        }
    }
    Ok(report)
}
