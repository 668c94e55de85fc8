//! Acceptance suite. Prints one `criterion N: PASS|FAIL` line per criterion
//! and exits non-zero when any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode, Stdio};
use std::time::{Duration, Instant};

use blowuplab::divdiff::{cm_derivative, cm_limit_at_zero, mean_value_bound_check, NodeSet};
use blowuplab::ode::{
    analytic_blowup_time, integrate, quadrature_blowup_time, CauchyProblem, Direction, IntegratorOptions,
    TerminalStatus,
};
use blowuplab::partial_fractions::{
    decompose, decomposition_condition, evaluate_decomposition, evaluate_rational, KVector, Side,
};
use blowuplab::verify::{
    cross_route_suite, repetition_consistency_suite, run_blowup_suite, run_inequality_suite, SuiteConfig,
};
use blowuplab::weights::{analyze_point, PointClass};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Verdict {
    pass: bool,
    detail: String,
    notes: Vec<String>,
}

impl Verdict {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self {
            pass,
            detail: detail.into(),
            notes: Vec::new(),
        }
    }
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (lo.ln() + rng.gen::<f64>() * (hi.ln() - lo.ln())).exp()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn criterion_1() -> Verdict {
    let expected = [
        ([2.0, -2.0], PointClass::UndefinedBase),
        ([0.0, -1.0], PointClass::IllDefinedZeroPow),
        ([1.0, -0.5], PointClass::Fails),
        ([-0.25, -0.5], PointClass::Fails),
    ];
    let mut wrong = Vec::new();
    for (x, class) in expected {
        let got = analyze_point(&x).class;
        if got != class {
            wrong.push(format!("{x:?} -> {got:?}"));
        }
    }
    let r = analyze_point(&[-0.25, -0.5]);
    let lhs = r.lhs.unwrap_or(f64::NAN);
    let rhs_err = rel(r.rhs.unwrap_or(f64::NAN), (1.0f64 / 16.0).exp());
    let pass = wrong.is_empty() && lhs == 1.125 && rhs_err <= 1e-12;
    Verdict::new(
        pass,
        format!("misclassified {wrong:?}; lhs(-1/4,-1/2) = {lhs}; rhs rel err {rhs_err:.1e}"),
    )
}

fn criterion_2() -> Verdict {
    let cfg = SuiteConfig {
        n_range: (1, 6),
        samples: 100_000,
        seed: 20_251_015,
        include_equality_cases: true,
        ..SuiteConfig::default()
    };
    let start = Instant::now();
    let report = match run_inequality_suite(&cfg) {
        Ok(r) => r,
        Err(e) => return Verdict::new(false, format!("suite error: {e}")),
    };
    let elapsed = start.elapsed();
    let constructed = 6 * (cfg.samples / 10) as u64;
    let min_gap = report.min_gap.unwrap_or(f64::NAN);
    let pass = report.passed() && report.equalities == constructed && min_gap > 0.0 && elapsed < Duration::from_secs(10);
    Verdict::new(
        pass,
        format!(
            "{} points, valid-domain failures {}, equalities {}/{constructed}, min positive-sample gap {min_gap:.3e}, {:.2?}",
            report.total,
            report.valid_domain_failures().count(),
            report.equalities,
            elapsed
        ),
    )
}

/// `k_1` log-uniform on `[0.1, 1]` and consecutive ratios log-uniform on
/// `[1.5, 3]`: the residues stay bounded, so the identities are checkable at
/// an absolute tolerance.
fn geometric_k(rng: &mut ChaCha8Rng, n: usize) -> KVector {
    let mut k = vec![log_uniform(rng, 0.1, 1.0)];
    for _ in 1..n {
        let next = k[k.len() - 1] * log_uniform(rng, 1.5, 3.0);
        k.push(next);
    }
    KVector::new(k).expect("geometric k is ascending and separated")
}

fn spread_k(rng: &mut ChaCha8Rng, n: usize) -> KVector {
    loop {
        let mut k: Vec<f64> = (0..n).map(|_| log_uniform(rng, 0.1, 10.0)).collect();
        k.sort_by(f64::total_cmp);
        if let Ok(k) = KVector::new(k) {
            return k;
        }
    }
}

/// Evaluation error of the decomposition measured against the rounding
/// budget `16 (n + 2) eps (sum |terms| + |value|)`.
fn backward_ratio(k: &KVector, side: Side, x: f64) -> f64 {
    let d = decompose(k, side);
    let got = evaluate_decomposition(&d, k, x).unwrap();
    let want = evaluate_rational(k, x, side).unwrap();
    let cond = decomposition_condition(&d, k, x).unwrap();
    let budget = 16.0 * (k.len() as f64 + 2.0) * f64::EPSILON * (cond * got.abs() + want.abs());
    (got - want).abs() / budget
}

fn criterion_3() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut lead_bad, mut sum_err, mut b_err, mut eval_err) = (0usize, 0f64, 0f64, 0f64);
    let (mut evaluated, mut skipped) = (0usize, 0usize);
    for t in 0..10_000 {
        let n = 1 + t % 8;
        let k = geometric_k(&mut rng, n);
        let a = decompose(&k, Side::Negative);
        let b = decompose(&k, Side::Positive);
        let parity = if n % 2 == 0 { 1.0 } else { -1.0 };
        lead_bad += (a.leading != 1.0 || b.leading != parity) as usize;
        sum_err = sum_err.max((a.residues.iter().sum::<f64>() + 1.0).abs());
        for (ai, bi) in a.residues.iter().zip(&b.residues) {
            b_err = b_err.max((bi - parity * ai).abs());
        }
        // off-pole points; rejected while the sum would cancel by more than 1e4
        for (side, d) in [(Side::Negative, &a), (Side::Positive, &b)] {
            let mut done = false;
            for _ in 0..64 {
                let u = log_uniform(&mut rng, 1e-12, 1.0);
                let x = match side {
                    Side::Negative => -k.as_slice()[0] * u.max(1e-3),
                    Side::Positive => k.largest() * (1.0 + u),
                };
                if decomposition_condition(d, &k, x).unwrap() > 1e4 {
                    continue;
                }
                let got = evaluate_decomposition(d, &k, x).unwrap();
                eval_err = eval_err.max(rel(got, evaluate_rational(&k, x, side).unwrap()));
                evaluated += 1;
                done = true;
                break;
            }
            skipped += !done as usize;
        }
    }
    let pass = lead_bad == 0 && sum_err <= 1e-10 && b_err <= 1e-10 && eval_err <= 1e-10 && skipped == 0;
    let mut v = Verdict::new(
        pass,
        format!(
            "leading mismatches {lead_bad}; max |sum A_i + 1| {sum_err:.1e}; max |B_i - (-1)^n A_i| {b_err:.1e}; max eval rel err {eval_err:.1e} over {evaluated} points ({skipped} without a well-conditioned point)"
        ),
    );
    // k log-uniform on [0.1, 10]: residues reach 1e6 and the sums cancel, so
    // the check is against the rounding budget instead
    let mut worst = 0f64;
    for t in 0..10_000 {
        let n = 1 + t % 8;
        let k = spread_k(&mut rng, n);
        let u = log_uniform(&mut rng, 1e-3, 1.0);
        worst = worst.max(backward_ratio(&k, Side::Negative, -k.largest() * u));
        worst = worst.max(backward_ratio(&k, Side::Positive, k.largest() * (1.0 + u)));
    }
    v.pass &= worst <= 1.0;
    v.notes.push(format!(
        "spread k in [0.1, 10]: worst evaluation error is {worst:.2} of the rounding budget"
    ));
    v
}

fn fixed_problems() -> Vec<(CauchyProblem, f64, f64)> {
    [
        (vec![1.0], -1.0, std::f64::consts::LN_2, 1.0),
        (vec![1.0, 2.0], -1.0, (4.0f64 / 3.0).ln(), 1.0),
        (vec![1.0, 2.0], 4.0, (9.0f64 / 8.0).ln(), 1.0 / 6.0),
    ]
    .into_iter()
    .map(|(k, y0, t, b)| (CauchyProblem::new(KVector::new(k).unwrap(), y0).unwrap(), t, b))
    .collect()
}

fn blowup_suite() -> SuiteConfig {
    SuiteConfig {
        n_range: (1, 4),
        samples: 100,
        seed: 7,
        ..SuiteConfig::default()
    }
}

fn criterion_4() -> Verdict {
    let mut worst_fixed = 0f64;
    let mut worst_oracle = 0f64;
    for (p, want, _) in fixed_problems() {
        let analytic = analytic_blowup_time(&p).unwrap().analytic_time;
        worst_fixed = worst_fixed.max(rel(analytic, want));
        worst_oracle = worst_oracle.max(rel(quadrature_blowup_time(&p).unwrap(), analytic));
        if p.n() == 1 {
            // logistic solution y0 e^t / (1 - y0 + y0 e^t) blows up at e^t = (y0 - 1)/y0
            let logistic = ((p.y0 - 1.0) / p.y0).ln().abs();
            worst_oracle = worst_oracle.max(rel(logistic, analytic));
        }
    }
    let report = match run_blowup_suite(&blowup_suite()) {
        Ok(r) => r,
        Err(e) => return Verdict::new(false, format!("suite error: {e}")),
    };
    let pass = worst_fixed <= 1e-12
        && worst_oracle <= 1e-12
        && report.worst_quadrature_residual <= 1e-8
        && report.worst_numeric_residual <= 1e-3
        && report.numerical_failures == 0;
    Verdict::new(
        pass,
        format!(
            "fixed cases rel err {worst_fixed:.1e} (oracles {worst_oracle:.1e}); {} cases: quadrature {:.1e}, integration {:.1e}, numerical failures {}",
            report.total, report.worst_quadrature_residual, report.worst_numeric_residual, report.numerical_failures
        ),
    )
}

fn criterion_5() -> Verdict {
    let mut worst_bound = 0f64;
    let mut strict = true;
    for (p, _, bound) in fixed_problems() {
        let r = analytic_blowup_time(&p).unwrap();
        worst_bound = worst_bound.max(rel(r.bound, bound));
        strict &= r.analytic_time < r.bound;
    }
    let report = match run_blowup_suite(&blowup_suite()) {
        Ok(r) => r,
        Err(e) => return Verdict::new(false, format!("suite error: {e}")),
    };
    let pass = strict && worst_bound <= 1e-12 && report.bound_violations == 0;
    Verdict::new(
        pass,
        format!(
            "fixed bounds rel err {worst_bound:.1e}; bound violations {}/{}",
            report.bound_violations, report.total
        ),
    )
}

fn criterion_6() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut crossings, mut inside_escapes, mut inside, mut errors) = (0usize, 0usize, 0usize, 0usize);
    for t in 0..500 {
        let n = 1 + t % 4;
        let k = spread_k(&mut rng, n);
        let ks = k.as_slice().to_vec();
        let y0 = match t % 5 {
            0 => -log_uniform(&mut rng, 1e-3, 10.0),
            1 => k.largest() * (1.0 + log_uniform(&mut rng, 1e-3, 10.0)),
            2 if t % 25 == 2 => [0.0].iter().chain(&ks).copied().nth(t % (n + 1)).unwrap(),
            _ => {
                let slot = rng.gen_range(0..n);
                let lo = if slot == 0 { 0.0 } else { ks[slot - 1] };
                lo + (ks[slot] - lo) * rng.gen_range(0.001..0.999)
            }
        };
        let direction = if rng.gen_bool(0.5) { Direction::Forward } else { Direction::Backward };
        let p = CauchyProblem::new(k, y0).unwrap();
        let traj = match integrate(&p, direction, 10.0, IntegratorOptions::default()) {
            Ok(traj) => traj,
            Err(_) => {
                errors += 1;
                continue;
            }
        };
        let equilibria: Vec<f64> = std::iter::once(0.0).chain(ks.iter().copied()).collect();
        let crossed = traj.samples.iter().any(|&(_, y)| {
            equilibria
                .iter()
                .any(|&e| (y0 - e).partial_cmp(&0.0) != (y - e).partial_cmp(&0.0))
        });
        crossings += crossed as usize;
        if (0.0..=p.k.largest()).contains(&y0) {
            inside += 1;
            inside_escapes += (traj.terminal_status != TerminalStatus::ReachedHorizon) as usize;
        }
    }
    let pass = crossings == 0 && inside_escapes == 0 && errors == 0;
    Verdict::new(
        pass,
        format!(
            "500 trajectories: crossings {crossings}; started in [0, k_n] {inside}, not reaching the horizon {inside_escapes}; errors {errors}"
        ),
    )
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

fn criterion_7() -> Verdict {
    let grid: Vec<f64> = (0..=44).map(|j| 10f64.powf(-8.0 + 0.25 * j as f64)).collect();
    let mut shape_bad = Vec::new();
    for order in 0..=8 {
        let values: Vec<f64> = grid.iter().map(|&x| cm_derivative(order, x).unwrap()).collect();
        let ok = values.iter().all(|&v| v > 0.0) && values.windows(2).all(|w| w[1] < w[0]);
        if !ok {
            shape_bad.push(order);
        }
    }
    let deviations: Vec<f64> = (0..=8)
        .map(|order| (cm_derivative(order, 1e-8).unwrap() - cm_limit_at_zero(order)).abs())
        .collect();
    let limit_bad: Vec<usize> = (0..=8).filter(|&o| deviations[o] > 1e-6).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut literal_bad, mut plain_bad) = (0usize, 0usize);
    for t in 0..1000 {
        let n = 1 + t % 6;
        let nodes = loop {
            let x: Vec<f64> = (0..n).map(|_| log_uniform(&mut rng, 1e-5, 10.0)).collect();
            if let Ok(nodes) = NodeSet::new(x) {
                break nodes;
            }
        };
        let b = mean_value_bound_check(&nodes).unwrap();
        let scaled = factorial(n - 1) * b.value;
        let literal = if n <= 2 { b.holds() } else { scaled > 0.0 && scaled < b.bound };
        literal_bad += !literal as usize;
        plain_bad += !b.holds() as usize;
    }
    let pass = shape_bad.is_empty() && limit_bad.is_empty() && literal_bad == 0;
    let mut v = Verdict::new(
        pass,
        format!(
            "(a) positive and decreasing, failing orders {shape_bad:?}; (b) |f_n(1e-8) - n!/(n+1)| > 1e-6 at orders {limit_bad:?} (max {:.1e}); (c) (n-1)! scaled bound violated by {literal_bad}/1000 node sets",
            deviations.iter().copied().fold(0.0, f64::max)
        ),
    );
    v.notes.push(format!(
        "(b) deviation per order: {}; it equals 1e-8 (n+1)!/(n+2) to first order",
        deviations.iter().map(|d| format!("{d:.1e}")).collect::<Vec<_>>().join(", ")
    ));
    v.notes.push(format!(
        "(c) without the (n-1)! factor, 0 < (-1)^(n-1) [x; f] < 1/n is violated by {plain_bad}/1000 node sets"
    ));
    v
}

fn criterion_8() -> Verdict {
    let cfg = SuiteConfig {
        n_range: (1, 6),
        samples: 1000,
        seed: 8,
        ..SuiteConfig::default()
    };
    match cross_route_suite(&cfg) {
        Ok(r) => Verdict::new(
            r.passed() && r.worst_residual <= 1e-10,
            format!(
                "{} vectors, worst residual {:.1e}, largest n (-1)^(n-1) [x; f] {:.6}, failures {}",
                r.total,
                r.worst_residual,
                r.max_normalized,
                r.failures.len()
            ),
        ),
        Err(e) => Verdict::new(false, format!("suite error: {e}")),
    }
}

fn criterion_9() -> Verdict {
    let cfg = SuiteConfig {
        n_range: (1, 6),
        samples: 10_000,
        seed: 9,
        ..SuiteConfig::default()
    };
    match repetition_consistency_suite(&cfg) {
        Ok(r) => Verdict::new(
            r.passed() && r.reduction_max_error <= 1e-12 && r.consistency_max_error <= 1e-10,
            format!(
                "{} specs, reduction err {:.1e}, gap mismatch {:.1e} (relative to max(1, gap)), min gap {:.3e}, failures {}",
                r.total,
                r.reduction_max_error,
                r.consistency_max_error,
                r.min_gap.unwrap_or(f64::NAN),
                r.failures.len()
            ),
        ),
        Err(e) => Verdict::new(false, format!("suite error: {e}")),
    }
}

fn criterion_10() -> Verdict {
    let dir = tempfile::tempdir().expect("temporary directory");
    let mut outputs = Vec::new();
    for workers in [1, 8] {
        let path = dir.path().join(format!("report_{workers}.json"));
        let status = Command::new(env!("CARGO_BIN_EXE_blowuplab"))
            .args(["verify", "gen", "--n", "1..6", "--samples", "5000", "--seed", "1010"])
            .args(["--equality", "--extended", "--workers", &workers.to_string()])
            .arg("--out")
            .arg(&path)
            .stderr(Stdio::null())
            .status()
            .expect("run blowuplab");
        outputs.push((status.code(), std::fs::read(&path).unwrap_or_default()));
    }
    let same = outputs[0].1 == outputs[1].1 && !outputs[0].1.is_empty();
    let codes_ok = outputs.iter().all(|(c, _)| *c == Some(0));
    Verdict::new(
        same && codes_ok,
        format!(
            "report sizes {} and {} bytes, identical: {same}; exit codes {:?}",
            outputs[0].1.len(),
            outputs[1].1.len(),
            outputs.iter().map(|o| o.0).collect::<Vec<_>>()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [fn() -> Verdict; 10] = [
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
        criterion_9,
        criterion_10,
    ];
    let mut failed = 0;
    for (i, check) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|_| Verdict::new(false, "panicked"));
        let label = if verdict.pass { "PASS" } else { "FAIL" };
        println!("criterion {}: {label} [{:.2?}] {}", i + 1, start.elapsed(), verdict.detail);
        for note in &verdict.notes {
            println!("    note: {note}");
        }
        failed += !verdict.pass as usize;
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
