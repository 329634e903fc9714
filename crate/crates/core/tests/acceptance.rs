//! End-to-end acceptance checks. Prints one `PASS`/`FAIL` line per criterion
//! and exits nonzero if any fails.

mod common;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use minimax_bandit::bandit::Policy;
use minimax_bandit::experiment::{run_experiment, write_all, ConfigEntries, ExperimentConfig, ExperimentResult};
use minimax_bandit::gaussian::{expected_max_exact, expected_max_mc, EdgeBelief, GaussianVec};
use minimax_bandit::graph::Graph;
use minimax_bandit::metrics::{gap_bound_check, RegretTrace};
use minimax_bandit::oracle::{brute_force_minimax, minimax_dijkstra, minimax_mst, OracleError, DEFAULT_PATH_CAP};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn recipe(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("recipes").join(name)
}

fn load_recipe(name: &str, overrides: &[(&str, &str)]) -> ExperimentConfig {
    let mut entries = ConfigEntries::from_file(&recipe(name)).expect("recipe parses");
    for (k, v) in overrides {
        entries.set(k, *v).expect("known key");
    }
    ExperimentConfig::from_entries(&entries).expect("recipe is valid")
}

fn same_bottleneck(a: &Result<f64, OracleError>, b: &Result<f64, OracleError>) -> bool {
    match (a, b) {
        (Ok(x), Ok(y)) => x == y,
        (Err(OracleError::Unreachable { .. }), Err(OracleError::Unreachable { .. })) => true,
        _ => false,
    }
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut mismatches = 0;
    let mut reachable = 0;
    for _ in 0..1000 {
        let n = rng.random_range(2..=10);
        let p = rng.random_range(0.15..0.6);
        let g = common::random_directed(&mut rng, n, p);
        let w = common::random_weights(&mut rng, g.edge_count());
        let s = rng.random_range(0..n);
        let t = (s + rng.random_range(1..n)) % n;
        let dij = minimax_dijkstra(&g, &w, s, t).map(|r| r.bottleneck_value);
        let brute = brute_force_minimax(&g, &w, s, t, DEFAULT_PATH_CAP).map(|r| r.bottleneck_value);
        reachable += dij.is_ok() as usize;
        mismatches += !same_bottleneck(&dij, &brute) as usize;
    }
    for _ in 0..1000 {
        let n = rng.random_range(2..=10);
        let p = rng.random_range(0.0..0.5);
        let g = common::random_connected_undirected(&mut rng, n, p);
        let w = common::random_weights(&mut rng, g.edge_count());
        let s = rng.random_range(0..n);
        let t = (s + rng.random_range(1..n)) % n;
        let mst = minimax_mst(&g, &w, s, t).map(|r| r.bottleneck_value);
        let dij = minimax_dijkstra(&g, &w, s, t).map(|r| r.bottleneck_value);
        let brute = brute_force_minimax(&g, &w, s, t, DEFAULT_PATH_CAP).map(|r| r.bottleneck_value);
        mismatches += !(same_bottleneck(&mst, &brute) && same_bottleneck(&dij, &brute)) as usize;
    }
    outcome(
        mismatches == 0,
        format!("{mismatches} mismatches on 2000 graphs ({reachable}/1000 directed queries reachable)"),
    )
}

fn posterior_correctness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let prior_mean = rng.random_range(-20.0..20.0);
        let prior_sd = rng.random_range(0.05..10.0);
        let noise_sd = rng.random_range(0.05..5.0);
        let len = rng.random_range(1..=200);
        let obs: Vec<f64> = (0..len).map(|_| prior_mean + rng.random_range(-30.0..30.0)).collect();
        let mut belief = EdgeBelief::new(prior_mean, prior_sd, noise_sd).unwrap();
        for &x in &obs {
            belief.observe(x).unwrap();
        }
        let (mean, var) = common::batch_posterior(prior_mean, prior_sd * prior_sd, noise_sd * noise_sd, &obs);
        worst = worst.max((belief.mu - mean).abs() / mean.abs()).max((belief.var - var).abs() / var);
    }
    outcome(worst < 1e-9, format!("worst relative error {worst:.2e} over 1000 sequences"))
}

fn expected_max_correctness() -> Outcome {
    const SAMPLES: usize = 10_000_000;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let sets: Vec<GaussianVec> = (0..100)
        .map(|i| {
            let n = 2 + i % 2;
            let means = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
            let vars = (0..n).map(|_| rng.random_range(0.01..4.0)).collect();
            GaussianVec::new(means, vars).unwrap()
        })
        .collect();
    let failures: Vec<String> = sets
        .par_iter()
        .enumerate()
        .filter_map(|(i, set)| {
            let exact = expected_max_exact(set).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(1000 + i as u64);
            let mc = expected_max_mc(set, SAMPLES, &mut rng).unwrap();
            let tol = f64::max(1e-3, 3.0 * mc.std_error);
            ((exact - mc.mean).abs() > tol)
                .then(|| format!("set {i}: exact {exact} vs mc {} ± {}", mc.mean, mc.std_error))
        })
        .collect();
    let iid = expected_max_exact(&GaussianVec::new(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap()).unwrap();
    let iid_ok = (iid - 0.564190).abs() < 1e-3;
    let pass = failures.is_empty() && iid_ok;
    let mut detail = format!("{} of 100 sets outside tolerance; iid pair gives {iid:.6}", failures.len());
    if let Some(first) = failures.first() {
        detail.push_str(&format!("; {first}"));
    }
    outcome(pass, detail)
}

fn gap_bound() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut checked = 0;
    let mut violations = 0;
    let mut tightest = f64::INFINITY;
    while checked < 200 {
        let n = rng.random_range(3..=6);
        let g: Graph = if rng.random_bool(0.5) {
            common::random_directed(&mut rng, n, 0.5)
        } else {
            common::random_connected_undirected(&mut rng, n, 0.5)
        };
        let (s, t) = (0, n - 1);
        if !g.reachable_from(s)[t] {
            continue;
        }
        let theta: Vec<f64> = (0..g.edge_count()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let noise: Vec<f64> = (0..g.edge_count()).map(|_| rng.random_range(0.05..1.0)).collect();
        let check = gap_bound_check(&theta, &noise, &g, s, t, DEFAULT_PATH_CAP, 200_000, &mut rng).unwrap();
        assert!(!check.advisory);
        violations += !check.holds as usize;
        if check.usable_edges > 1 {
            tightest = tightest.min(check.bound - check.gap);
        }
        checked += 1;
    }
    outcome(violations == 0, format!("{violations} of 200 instances exceed the bound; smallest slack {tightest:.3}"))
}

fn decile_means(traces: &[&RegretTrace]) -> (f64, f64) {
    let horizon = traces[0].horizon();
    let width = horizon / 10;
    let mean_over = |range: std::ops::Range<usize>| {
        let total: f64 = traces.iter().map(|tr| tr.steps[range.clone()].iter().map(|s| s.instant).sum::<f64>()).sum();
        total / (traces.len() * range.len()) as f64
    };
    (mean_over(0..width), mean_over(horizon - width..horizon))
}

fn final_mean(result: &ExperimentResult, policy: Policy) -> f64 {
    result.summary(policy).expect("agent ran").final_mean()
}

fn toy_reproduction(result: &ExperimentResult) -> Outcome {
    let exact_ts = final_mean(result, Policy::TsExact);
    let approx_ts = final_mean(result, Policy::TsApprox);
    let greedy = final_mean(result, Policy::GreedyExact);
    let traces: Vec<_> = result.traces_of(Policy::TsExact).collect();
    let (first, last) = decile_means(&traces);
    let ratio = last / first;
    let pass = exact_ts < approx_ts && approx_ts < greedy && ratio < 0.10;
    outcome(
        pass,
        format!(
            "exact TS {exact_ts:.1} < approx TS {approx_ts:.1} < exact greedy {greedy:.1}; exact TS last/first decile {ratio:.3}"
        ),
    )
}

fn road_ordering(result: &ExperimentResult) -> Outcome {
    let ts = final_mean(result, Policy::TsApprox);
    let ucb = final_mean(result, Policy::BayesUcb);
    let greedy = final_mean(result, Policy::Greedy);
    outcome(ts < ucb && ucb < greedy, format!("TS {ts:.1} < B-UCB {ucb:.1} < GR {greedy:.1}"))
}

fn sublinearity(road: &ExperimentResult, doubled: &ExperimentResult) -> Outcome {
    let horizon = road.config.horizon as usize;
    let traces: Vec<_> = road.traces_of(Policy::TsApprox).collect();
    let (first, last) = decile_means(&traces);
    let ratio = last / first;

    let long: Vec<_> = doubled.traces_of(Policy::TsApprox).collect();
    let consistent = long.iter().zip(&traces).all(|(l, s)| l.prefix(horizon) == **s);
    let at = |t: usize| long.iter().map(|tr| tr.cumulative_at(t)).sum::<f64>() / long.len() as f64;
    let growth = at(2 * horizon) / at(horizon);
    outcome(
        ratio <= 0.20 && growth < 1.9 && consistent,
        format!("last/first decile {ratio:.3}; R(2T)/R(T) {growth:.3}; prefix matches criterion-6 run: {consistent}"),
    )
}

fn output_files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "csv"))
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap()))
        .collect();
    files.sort();
    files
}

fn determinism(runs: &[(&str, &ExperimentResult)]) -> Outcome {
    let scratch = tempfile::tempdir().unwrap();
    let mut differing = Vec::new();
    for (name, reference) in runs {
        let base = scratch.path().join(name);
        write_all(reference, &base.join("reference")).unwrap();
        let expected = output_files(&base.join("reference"));
        for workers in ["1", "4"] {
            let rerun = run_experiment(&load_recipe(name, &[("workers", workers)])).unwrap();
            let dir = base.join(format!("workers{workers}"));
            write_all(&rerun, &dir).unwrap();
            if output_files(&dir) != expected {
                differing.push(format!("{name} with {workers} workers"));
            }
        }
    }
    let detail = if differing.is_empty() {
        "toy and road CSVs byte-identical across reruns with 1 and 4 workers".to_string()
    } else {
        format!("outputs differ: {}", differing.join(", "))
    };
    outcome(differing.is_empty(), detail)
}

fn report(number: usize, name: &str, limit: Duration, run: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = run();
    let elapsed = start.elapsed();
    let in_time = elapsed <= limit;
    let pass = out.pass && in_time;
    let timing = if in_time { String::new() } else { format!(" [over the {}s limit]", limit.as_secs()) };
    println!(
        "criterion {number} {name}: {} ({:.1}s) {}{timing}",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        out.detail
    );
    pass
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let mut all = true;
    all &= report(1, "oracle equivalence", secs(30), oracle_equivalence);
    all &= report(2, "posterior correctness", secs(5), posterior_correctness);
    all &= report(3, "expected-max correctness", secs(120), expected_max_correctness);
    all &= report(4, "gap bound", secs(60), gap_bound);

    let mut toy = None;
    all &= report(5, "toy reproduction", secs(300), || {
        let result = run_experiment(&load_recipe("toy.conf", &[])).unwrap();
        let out = toy_reproduction(&result);
        toy = Some(result);
        out
    });
    let mut road = None;
    all &= report(6, "road agent ordering", secs(600), || {
        let result = run_experiment(&load_recipe("road300.conf", &[])).unwrap();
        let out = road_ordering(&result);
        road = Some(result);
        out
    });
    let (toy, road) = (toy.unwrap(), road.unwrap());
    all &= report(7, "sublinearity", secs(600), || {
        let horizon = (2 * road.config.horizon).to_string();
        let doubled =
            run_experiment(&load_recipe("road300.conf", &[("agents", "ts_approx"), ("horizon", &horizon)])).unwrap();
        sublinearity(&road, &doubled)
    });
    all &= report(8, "determinism", secs(1200), || determinism(&[("toy.conf", &toy), ("road300.conf", &road)]));

    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
