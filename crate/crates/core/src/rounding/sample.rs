//! Halving a family into one fractional assignment, and sampling the
//! generalized binomial subgraph it defines.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::fpm::{FpmFamily, PairLoads, SUM_TOL};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::optimize::FractionalAssignment;

/// `f = ½ Σ f_i`. Every vertex sum is `t / 2`, and every weight lies in
/// `[0, 1]` because each member's weights do.
pub fn mix_and_halve(family: &FpmFamily) -> Result<FractionalAssignment<f64>> {
    if family.members.is_empty() {
        return Err(Error::InvalidParameter("cannot mix an empty family".into()));
    }
    let h = &family.graph;
    let mut weights = vec![0.0; h.edge_count()];
    for f in &family.members {
        for (w, x) in weights.iter_mut().zip(&f.weights) {
            *w += x;
        }
    }
    weights.iter_mut().for_each(|w| *w /= 2.0);
    if let Some(w) = weights.iter().find(|&&w| !(-SUM_TOL..=1.0 + SUM_TOL).contains(&w)) {
        return Err(Error::InvalidCertificate(format!("mixed weight {w} outside [0, 1]")));
    }
    let mixed = FractionalAssignment::matching(weights);
    let half = family.t() as f64 / 2.0;
    let tol = SUM_TOL * family.t() as f64;
    for (v, s) in mixed.vertex_loads(h).iter().enumerate() {
        if (s - half).abs() > tol {
            return Err(Error::InvalidCertificate(format!("vertex {} has mixed sum {s}, expected {half}", v + 1)));
        }
    }
    Ok(mixed)
}

/// Concentration windows for a sample.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Windows {
    /// Relative degree window: a vertex violates when `|d - 𝔼d| ≥ α 𝔼d`.
    /// `None` means `α = μ^(-1/4)` with `μ` the largest expected degree.
    pub alpha: Option<f64>,
    /// A pair violates when its degree reaches `x`. `None` means
    /// `x = max(7 · largest expected pair degree, √μ)`.
    pub pair_x: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SampleReport {
    #[serde(skip)]
    pub sampled: Option<Hypergraph>,
    pub seed: u64,
    pub sampled_edges: usize,
    /// `𝔼 d(v)` per vertex.
    pub expected_degree: Vec<f64>,
    /// `d(v) - 𝔼 d(v)` per vertex.
    pub deviations: Vec<f64>,
    pub alpha: f64,
    pub degree_violations: usize,
    /// Chernoff bound `2 e^{-α² 𝔼d / 3}` on one vertex's violation
    /// probability, taken at the smallest expected degree.
    pub degree_bound: f64,
    pub max_pair_degree: usize,
    pub max_expected_pair_degree: f64,
    pub pair_x: f64,
    pub pair_violations: usize,
    /// `e^{-x}`, the bound on one pair reaching `x`.
    pub pair_bound: f64,
    /// No more violations than the bounds predict on average.
    pub degree_pass: bool,
    pub pair_pass: bool,
}

impl SampleReport {
    pub fn graph(&self) -> &Hypergraph {
        self.sampled.as_ref().expect("sample is attached")
    }
}

/// Keeps each edge independently with probability `f(e)`, drawing one
/// uniform per edge in edge order from a ChaCha8 stream seeded by `seed`.
pub fn sample_binomial_subgraph(
    h: &Hypergraph,
    f: &FractionalAssignment<f64>,
    seed: u64,
    windows: &Windows,
) -> Result<SampleReport> {
    if f.weights.len() != h.edge_count() {
        return Err(Error::Mismatch(format!("{} weights for {} edges", f.weights.len(), h.edge_count())));
    }
    if let Some(w) = f.weights.iter().find(|&&w| !(0.0..=1.0 + SUM_TOL).contains(&w)) {
        return Err(Error::InvalidParameter(format!("edge probability {w} outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let keep: Vec<bool> = f.weights.iter().map(|&w| rng.gen::<f64>() < w).collect();
    let sampled = Hypergraph::from_canonical(h.n(), h.k(), h.edges().iter().zip(&keep).filter(|p| *p.1).map(|p| p.0.clone()).collect());

    let n = h.n();
    let expected = f.vertex_loads(h);
    let degrees = sampled.degrees();
    let deviations: Vec<f64> = (0..n).map(|v| degrees[v] as f64 - expected[v]).collect();
    let mu = expected.iter().copied().fold(0.0, f64::max);
    let mu_min = expected.iter().copied().fold(f64::INFINITY, f64::min);
    let alpha = windows.alpha.unwrap_or(if mu > 0.0 { mu.powf(-0.25) } else { 1.0 });
    let degree_violations =
        (0..n).filter(|&v| expected[v] > 0.0 && deviations[v].abs() >= alpha * expected[v]).count();
    let degree_bound = if n == 0 || mu_min <= 0.0 { 1.0 } else { (2.0 * (-alpha * alpha * mu_min / 3.0).exp()).min(1.0) };

    let mut pair_expected = PairLoads::new(n);
    pair_expected.accumulate(h, &f.weights);
    let ones: Vec<f64> = vec![1.0; sampled.edge_count()];
    let mut pair_real = PairLoads::new(n);
    pair_real.accumulate(&sampled, &ones);
    let max_expected_pair_degree = pair_expected.max();
    let max_pair_degree = pair_real.max().round() as usize;
    let pair_x = windows.pair_x.unwrap_or((7.0 * max_expected_pair_degree).max(mu.sqrt()));
    let pair_violations = pair_real.pairs().filter(|p| p.2 >= pair_x).count();
    let pair_bound = (-pair_x).exp();
    let pairs = n * n.saturating_sub(1) / 2;

    Ok(SampleReport {
        seed,
        sampled_edges: sampled.edge_count(),
        expected_degree: expected,
        deviations,
        alpha,
        degree_violations,
        degree_bound,
        max_pair_degree,
        max_expected_pair_degree,
        pair_x,
        pair_violations,
        pair_bound,
        degree_pass: degree_violations as f64 <= degree_bound * n as f64,
        pair_pass: pair_violations as f64 <= pair_bound * pairs as f64,
        sampled: Some(sampled),
    })
}
