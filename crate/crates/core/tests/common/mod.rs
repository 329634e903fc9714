//! Slow, independent reference implementations used as test oracles.
#![allow(dead_code)]

use std::f64::consts::PI;

use minimax_bandit::graph::Graph;
use rand::Rng;

/// Standard normal cdf from the everywhere-convergent series
/// `Φ(x) = 1/2 + φ(x) Σ x^(2n+1) / (2n+1)!!`, with a continued fraction beyond five standard deviations.
pub fn phi_series(x: f64) -> f64 {
    let density = (-0.5 * x * x).exp() / (2.0 * PI).sqrt();
    if x < -5.0 {
        return density * mills_ratio(-x);
    }
    if x > 5.0 {
        return 1.0 - density * mills_ratio(x);
    }
    let (mut term, mut sum, mut k) = (x, x, 1.0);
    while term.abs() > 1e-17 * sum.abs().max(1e-300) {
        k += 2.0;
        term *= x * x / k;
        sum += term;
    }
    0.5 + density * sum
}

/// `(1 - Φ(x)) / φ(x)` for large positive `x`, evaluated as a continued fraction from the bottom.
fn mills_ratio(x: f64) -> f64 {
    let mut frac = x;
    for k in (1..200).rev() {
        frac = x + k as f64 / frac;
    }
    1.0 / frac
}

pub fn quantile_bisect(p: f64) -> f64 {
    let (mut lo, mut hi) = (-40.0f64, 40.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if phi_series(mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `E[max_i X_i]` for independent normals via `lo + ∫_lo^hi (1 - Π F_i)` with composite Simpson.
pub fn expected_max_quadrature(means: &[f64], sds: &[f64]) -> f64 {
    let lo = means.iter().zip(sds).map(|(m, s)| m - 12.0 * s).fold(f64::INFINITY, f64::min);
    let hi = means.iter().zip(sds).map(|(m, s)| m + 12.0 * s).fold(f64::NEG_INFINITY, f64::max);
    let tail = |x: f64| {
        let joint: f64 = means
            .iter()
            .zip(sds)
            .map(|(&m, &s)| {
                if s == 0.0 {
                    if x >= m {
                        1.0
                    } else {
                        0.0
                    }
                } else {
                    phi_series((x - m) / s)
                }
            })
            .product();
        1.0 - joint
    };
    let n = 20_000;
    let h = (hi - lo) / n as f64;
    let mut acc = tail(lo) + tail(hi);
    for i in 1..n {
        acc += tail(lo + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    lo + acc * h / 3.0
}

/// Closed-form posterior `(mean, variance)` after all observations at once.
pub fn batch_posterior(prior_mean: f64, prior_var: f64, noise_var: f64, observations: &[f64]) -> (f64, f64) {
    let precision = 1.0 / prior_var + observations.len() as f64 / noise_var;
    let sum: f64 = observations.iter().sum();
    let var = 1.0 / precision;
    (var * (prior_mean / prior_var + sum / noise_var), var)
}

/// Every simple source→target path as an edge list, by plain recursion.
pub fn all_simple_paths(graph: &Graph, source: usize, target: usize) -> Vec<Vec<usize>> {
    fn walk(
        g: &Graph,
        v: usize,
        target: usize,
        seen: &mut Vec<bool>,
        stack: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if v == target {
            out.push(stack.clone());
            return;
        }
        for (e, edge) in g.edges().iter().enumerate() {
            let next = if edge.tail == v {
                edge.head
            } else if !g.is_directed() && edge.head == v {
                edge.tail
            } else {
                continue;
            };
            if seen[next] {
                continue;
            }
            seen[next] = true;
            stack.push(e);
            walk(g, next, target, seen, stack, out);
            stack.pop();
            seen[next] = false;
        }
    }
    let mut seen = vec![false; graph.vertex_count()];
    seen[source] = true;
    let mut out = Vec::new();
    walk(graph, source, target, &mut seen, &mut Vec::new(), &mut out);
    out
}

pub fn path_max(path: &[usize], weights: &[f64]) -> f64 {
    path.iter().map(|&e| weights[e]).fold(f64::NEG_INFINITY, f64::max)
}

/// Smallest bottleneck over all simple paths, `None` when the target is unreachable.
pub fn reference_minimax(graph: &Graph, weights: &[f64], source: usize, target: usize) -> Option<f64> {
    all_simple_paths(graph, source, target).iter().map(|p| path_max(p, weights)).min_by(|a, b| a.total_cmp(b))
}

/// Directed graph with `n` vertices and each ordered pair present with probability `p`.
pub fn random_directed<R: Rng>(rng: &mut R, n: usize, p: f64) -> Graph {
    let mut g = Graph::new(true, n);
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.random_bool(p) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

/// Connected undirected graph: a random spanning tree plus extra edges with probability `p`.
pub fn random_connected_undirected<R: Rng>(rng: &mut R, n: usize, p: f64) -> Graph {
    let mut g = Graph::new(false, n);
    for v in 1..n {
        let u = rng.random_range(0..v);
        g.add_edge(u, v).unwrap();
    }
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

pub fn random_weights<R: Rng>(rng: &mut R, m: usize) -> Vec<f64> {
    (0..m).map(|_| rng.random_range(-10.0..10.0)).collect()
}
