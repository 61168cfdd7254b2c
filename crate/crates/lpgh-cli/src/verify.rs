//! The one-shot verification suites behind `lpgh verify`.
//!
//! Five suites, one per family of claims the library rests on. Each suite
//! draws its own deterministic RNG stream from the run seed, counts every
//! individual check, and keeps the first failing input verbatim so a red
//! run is reproducible from the report alone. The hidden `--inject-fault`
//! hook negates the convexity slack before checking it, proving the
//! harness can actually fail.

use lpgh::balance::{balance_certificate_check, balance_signs};
use lpgh::bounds::simulated_embedding_experiment;
use lpgh::gh::{
    brute_force_gh, gh_upper_from_correspondence, metric_from_points, Correspondence,
    FiniteMetricSpace,
};
use lpgh::lp::{
    clarkson_slack, power_gap, power_split_slacks, scalar_gap_within_bound, LpSpace,
};
use lpgh::sample::{sample_ball, SampleConfig, SampleMode};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::VerifyArgs;
use crate::output::{Cell, CliError, Report};

/// Outcome of one suite: how many checks ran, how many failed, and the
/// first failing input.
#[derive(Debug)]
pub struct SuiteRun {
    pub name: &'static str,
    pub checks: u64,
    pub failures: u64,
    pub counterexample: Option<String>,
}

impl SuiteRun {
    fn new(name: &'static str) -> Self {
        SuiteRun {
            name,
            checks: 0,
            failures: 0,
            counterexample: None,
        }
    }

    fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
            if self.counterexample.is_none() {
                self.counterexample = Some(detail());
            }
        }
    }
}

fn stream(seed: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ salt)
}

/// Scalar estimates: the gap function peaks at the right endpoint, and
/// both halves of the split power estimate hold, as does the two-sided
/// scalar gap bound they combine into.
fn scalar_estimates(seed: u64) -> SuiteRun {
    let mut suite = SuiteRun::new("scalar_estimates");
    let mut exponents = vec![1.01];
    exponents.extend((1..=10).map(|k| 1.0 + f64::from(k) / 10.0));
    for p in exponents {
        let mut best = (f64::MIN, 0usize);
        for k in 0..=2000 {
            let x = f64::from(k as u32) * 1e-3;
            let v = power_gap(x, p).expect("grid point inside [0,2]");
            if v > best.0 {
                best = (v, k);
            }
        }
        suite.check(best.1 == 2000, || {
            format!("power_gap argmax at grid index {} for p={p}, expected 2000", best.1)
        });
        let endpoint = 2f64.powf(p) - 2.0;
        suite.check((best.0 - endpoint).abs() <= 1e-9, || {
            format!("power_gap max {} differs from 2^p-2 = {endpoint} at p={p}", best.0)
        });
    }
    let mut rng = stream(seed, 0x5ca1a);
    for _ in 0..20_000 {
        let t = rng.random_range(0.0..4.0);
        let s = t * rng.random_range(0.0..=1.0);
        let p = rng.random_range(1.0..=2.0);
        let (low, high) = power_split_slacks(t, s, p).expect("t >= s >= 0 by construction");
        suite.check(low >= -1e-12, || {
            format!("lower split half failed: power_split_slacks({t:?}, {s:?}, {p:?}).0 = {low:?}")
        });
        suite.check(high >= -1e-12, || {
            format!("upper split half failed: power_split_slacks({t:?}, {s:?}, {p:?}).1 = {high:?}")
        });
    }
    for _ in 0..20_000 {
        let a = rng.random_range(-2.0..2.0);
        let b = rng.random_range(-2.0..2.0);
        let p = rng.random_range(1.0..=2.0);
        let ok = scalar_gap_within_bound(a, b, p).expect("finite inputs");
        suite.check(ok, || {
            format!("scalar gap bound failed at a={a:?}, b={b:?}, p={p:?}")
        });
    }
    suite
}

/// Uniform convexity: the Clarkson slack is nonnegative away from p = 2
/// and vanishes at the parallelogram boundary.
fn clarkson(seed: u64, inject_fault: bool) -> SuiteRun {
    let mut suite = SuiteRun::new("clarkson");
    let mut rng = stream(seed, 0xc1a);
    for p in [1.1, 1.5, 1.9] {
        for _ in 0..20_000 {
            let dim = rng.random_range(1..=32);
            let x: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
            let y: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
            let mut slack = clarkson_slack(&x, &y, p).expect("valid pair");
            if inject_fault {
                slack = -slack;
            }
            suite.check(slack >= -1e-10, || {
                format!("clarkson_slack(x={x:?}, y={y:?}, p={p:?}) = {slack:?}")
            });
        }
    }
    for _ in 0..2_000 {
        let dim = rng.random_range(1..=32);
        let x: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
        let y: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
        let slack = clarkson_slack(&x, &y, 2.0).expect("valid pair");
        suite.check(slack.abs() <= 1e-10, || {
            format!("parallelogram defect clarkson_slack(x={x:?}, y={y:?}, p=2.0) = {slack:?}")
        });
    }
    suite
}

/// Sign balancing: the greedy balancer succeeds, respects the stepwise
/// bound, and its certificate re-verifies from scratch.
fn balancing(seed: u64) -> SuiteRun {
    let mut suite = SuiteRun::new("balancing");
    let mut rng = stream(seed, 0xba1a);
    for i in 0..150u64 {
        let p = [1.1, 1.5, 1.9][(i % 3) as usize];
        let dim = rng.random_range(1..=32);
        let count = rng.random_range(1..=64);
        let space = LpSpace::new(dim, p).expect("valid space");
        let cfg = SampleConfig::new(space, count, rng.random(), SampleMode::UniformBall)
            .expect("valid sample config");
        let points = sample_ball(&cfg).expect("sampling is total on valid configs");
        let balanced = balance_signs(&points, p);
        suite.check(balanced.is_ok(), || {
            format!(
                "balance_signs failed for p={p}, dim={dim}, count={count}, seed={}: {:?}",
                cfg.seed(),
                balanced.as_ref().err()
            )
        });
        let Ok(result) = balanced else { continue };
        let stepwise = result
            .prefix_norms()
            .iter()
            .enumerate()
            .all(|(k, &norm)| norm <= ((k + 1) as f64).powf(p.recip()) + 1e-9);
        suite.check(stepwise, || {
            format!(
                "stepwise balancing bound failed for p={p}, dim={dim}, count={count}, seed={}",
                cfg.seed()
            )
        });
        let certified = balance_certificate_check(&points, result.signs(), p)
            .expect("points and signs are consistent");
        suite.check(certified, || {
            format!(
                "certificate rejected for p={p}, dim={dim}, count={count}, seed={}",
                cfg.seed()
            )
        });
    }
    suite
}

/// Metric axioms: sampled point families pass the audit, and the bridged
/// embedding experiment both passes it and reruns bit-identically.
fn metric_audits(seed: u64) -> SuiteRun {
    let mut suite = SuiteRun::new("metric_audits");
    let mut rng = stream(seed, 0x3e7);
    for p in [1.3, 1.7, 2.0] {
        let dim = rng.random_range(1..=4);
        let space = LpSpace::new(dim, p).expect("valid space");
        let cfg = SampleConfig::new(space, 6, rng.random(), SampleMode::UniformBall)
            .expect("valid sample config");
        let points = sample_ball(&cfg).expect("sampling is total on valid configs");
        let audited = metric_from_points(&points, space);
        suite.check(audited.is_ok(), || {
            format!(
                "metric audit failed for p={p}, dim={dim}, seed={}: {:?}",
                cfg.seed(),
                audited.as_ref().err()
            )
        });
    }
    let first = simulated_embedding_experiment(1.05, 2, 10, seed);
    suite.check(first.is_ok(), || {
        format!("embedding experiment failed at p=1.05, dim=2, resolution=10: {:?}", first.as_ref().err())
    });
    let second = simulated_embedding_experiment(1.05, 2, 10, seed);
    suite.check(
        matches!((&first, &second), (Ok(a), Ok(b)) if a.to_bits() == b.to_bits()),
        || format!("embedding experiment is not deterministic: {first:?} vs {second:?}"),
    );
    suite
}

fn random_euclidean_space(rng: &mut ChaCha8Rng, size: usize) -> FiniteMetricSpace {
    let points: Vec<[f64; 3]> = (0..size)
        .map(|_| [rng.random(), rng.random(), rng.random()])
        .collect();
    let rows: Vec<Vec<f64>> = points
        .iter()
        .map(|a| {
            points
                .iter()
                .map(|b| {
                    a.iter()
                        .zip(b)
                        .map(|(s, t)| (s - t) * (s - t))
                        .sum::<f64>()
                        .sqrt()
                })
                .collect()
        })
        .collect();
    FiniteMetricSpace::from_matrix(rows).expect("euclidean distances form a metric")
}

fn random_correspondence(
    rng: &mut ChaCha8Rng,
    left: usize,
    right: usize,
) -> Correspondence {
    let mut pairs = Vec::new();
    let mut covered = vec![false; right];
    for i in 0..left {
        let j = rng.random_range(0..right);
        covered[j] = true;
        pairs.push((i, j));
    }
    for (j, was_covered) in covered.iter().enumerate() {
        if !was_covered {
            pairs.push((rng.random_range(0..left), j));
        }
    }
    Correspondence::new(pairs, left, right).expect("surjective onto both sides by construction")
}

/// Oracle dominance: the exact search never exceeds any correspondence's
/// upper bound, and matches the two-point closed form exactly.
fn gh_dominance(seed: u64) -> SuiteRun {
    let mut suite = SuiteRun::new("gh_dominance");
    let mut rng = stream(seed, 0x6d0);
    for _ in 0..30 {
        let size_a = rng.random_range(2..=5);
        let size_b = rng.random_range(2..=5);
        let a = random_euclidean_space(&mut rng, size_a);
        let b = random_euclidean_space(&mut rng, size_b);
        let exact = brute_force_gh(&a, &b).expect("sizes under the oracle cap");
        for _ in 0..30 {
            let r = random_correspondence(&mut rng, a.size(), b.size());
            let upper = gh_upper_from_correspondence(&r, &a, &b).expect("matching sizes");
            suite.check(exact <= upper + 1e-12, || {
                format!(
                    "oracle exceeded a correspondence bound: exact={exact:?} upper={upper:?} pairs={:?}",
                    r.pairs()
                )
            });
        }
    }
    for _ in 0..50 {
        let a: f64 = rng.random_range(0.1..2.0);
        let b: f64 = rng.random_range(0.1..2.0);
        let expected = (a - b).abs() / 2.0;
        let space_a = FiniteMetricSpace::from_matrix(vec![vec![0.0, a], vec![a, 0.0]])
            .expect("two-point metric");
        let space_b = FiniteMetricSpace::from_matrix(vec![vec![0.0, b], vec![b, 0.0]])
            .expect("two-point metric");
        let exact = brute_force_gh(&space_a, &space_b).expect("two points");
        suite.check(exact == expected, || {
            format!("two-point distance: got {exact:?}, closed form {expected:?} for a={a:?}, b={b:?}")
        });
    }
    suite
}

/// Runs every suite at this seed; the fault flag sabotages the convexity
/// check to prove failures surface.
pub fn suite_runs(seed: u64, inject_fault: bool) -> Vec<SuiteRun> {
    vec![
        scalar_estimates(seed),
        clarkson(seed, inject_fault),
        balancing(seed),
        metric_audits(seed),
        gh_dominance(seed),
    ]
}

pub fn run_verify(args: &VerifyArgs) -> Result<(), CliError> {
    let suites = suite_runs(args.common.seed, args.inject_fault);
    let mut report = Report::new("verify");
    report.config = vec![("fault_injection", Cell::B(args.inject_fault))];
    report.config.push(("seed", Cell::U(args.common.seed)));
    report
        .config
        .push(("format", Cell::S(args.common.format.label().into())));
    let out = args
        .common
        .out
        .as_ref()
        .map_or_else(|| "-".to_string(), |p| p.display().to_string());
    report.config.push(("out", Cell::S(out)));
    report.columns = vec!["suite".into(), "checks".into(), "failures".into()];
    let mut total_checks = 0;
    let mut total_failures = 0;
    for suite in &suites {
        total_checks += suite.checks;
        total_failures += suite.failures;
        report.rows.push(vec![
            Cell::S(suite.name.into()),
            Cell::U(suite.checks),
            Cell::U(suite.failures),
        ]);
        if let Some(example) = &suite.counterexample {
            report.notes.push(format!("[{}] {example}", suite.name));
        }
    }
    report.summary = vec![
        (
            "result",
            Cell::S(if total_failures == 0 { "pass" } else { "fail" }.into()),
        ),
        ("total_checks", Cell::U(total_checks)),
        ("total_failures", Cell::U(total_failures)),
    ];
    report.emit(args.common.format, args.common.out.as_deref())?;
    if total_failures > 0 {
        return Err(CliError::Invariant(format!(
            "{total_failures} of {total_checks} checks failed"
        )));
    }
    Ok(())
}
