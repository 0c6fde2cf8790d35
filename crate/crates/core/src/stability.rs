//! Closeness to the cover and clique families, θ-goodness of vertices, and
//! the crossover between the clique-type and HM-type bounds for k = 3.

use itertools::Itertools;
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constructions::{binomial, bound_report};
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, VertexSet};
use crate::report::{decimal, Tabular};

/// Largest `n` for the exhaustive partition search.
pub const EXHAUSTIVE_MAX_N: usize = 16;

/// `|E(target) \ E(h)|`.
pub fn distance_to(h: &Hypergraph, target: &Hypergraph) -> Result<usize> {
    same_shape(h, target)?;
    Ok(target.edges().iter().filter(|e| !h.contains(e.vertices())).count())
}

fn same_shape(h: &Hypergraph, target: &Hypergraph) -> Result<()> {
    if h.n() != target.n() || h.k() != target.k() {
        return Err(Error::Mismatch(format!(
            "graph is ({}, {}) but target is ({}, {})",
            h.n(),
            h.k(),
            target.n(),
            target.k()
        )));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Cover,
    Clique,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Search {
    #[default]
    Heuristic,
    Exhaustive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosenessReport {
    pub target: Target,
    pub n: usize,
    pub k: usize,
    pub s: usize,
    /// `W` for the cover family, `U` for the clique family.
    pub part: VertexSet,
    pub missing_edges: u64,
    /// `missing_edges / n^k`.
    pub epsilon_effective: f64,
    pub exhaustive: bool,
}

impl ClosenessReport {
    pub fn is_close(&self, epsilon: f64) -> bool {
        self.epsilon_effective <= epsilon
    }
}

fn to_u64(v: BigUint) -> Result<u64> {
    v.to_u64().ok_or_else(|| Error::TooLarge(format!("count {v} does not fit in 64 bits")))
}

/// Distance to the cover family `H^k_{n,s}(U, W)`.
pub fn closeness_to_cover(h: &Hypergraph, s: usize, search: Search) -> Result<ClosenessReport> {
    if s == 0 || s > h.n() {
        return Err(Error::InvalidParameter(format!("closeness to cover needs 1 <= s <= n, got s = {s}")));
    }
    let full = to_u64(binomial(h.n(), h.k()) - binomial(h.n() - s, h.k()))?;
    let hit = |w: &[usize]| h.edges().iter().filter(|e| e.vertices().iter().any(|v| w.contains(v))).count() as u64;
    closeness(h, Target::Cover, s, s, search, |w| full - hit(w))
}

/// Distance to the clique family `D^k_{n,s}(U)`.
pub fn closeness_to_clique(h: &Hypergraph, s: usize, search: Search) -> Result<ClosenessReport> {
    let u = h.k() * (s + 1) - 1;
    if s == 0 || u > h.n() {
        return Err(Error::InvalidParameter(format!("closeness to clique needs 1 <= s and k(s+1)-1 <= n, got s = {s}")));
    }
    let full = to_u64(binomial(u, h.k()))?;
    let inside = |set: &[usize]| h.edges().iter().filter(|e| e.vertices().iter().all(|v| set.contains(v))).count() as u64;
    closeness(h, Target::Clique, s, u, search, |set| full - inside(set))
}

fn closeness(
    h: &Hypergraph,
    target: Target,
    s: usize,
    size: usize,
    search: Search,
    missing: impl Fn(&[usize]) -> u64 + Sync,
) -> Result<ClosenessReport> {
    let (part, missing_edges) = match search {
        Search::Heuristic => {
            let degrees = h.degrees();
            let mut order: Vec<usize> = (1..=h.n()).collect();
            order.sort_by_key(|&v| (std::cmp::Reverse(degrees[v - 1]), v));
            let mut part = order[..size].to_vec();
            part.sort_unstable();
            let m = missing(&part);
            (part, m)
        }
        Search::Exhaustive => {
            if h.n() > EXHAUSTIVE_MAX_N {
                return Err(Error::TooLarge(format!(
                    "exhaustive partition search is limited to n <= {EXHAUSTIVE_MAX_N}, got n = {}",
                    h.n()
                )));
            }
            let candidates: Vec<Vec<usize>> = (1..=h.n()).combinations(size).collect();
            candidates
                .into_par_iter()
                .map(|c| {
                    let m = missing(&c);
                    (m, c)
                })
                .min()
                .map(|(m, c)| (c, m))
                .expect("at least one candidate part")
        }
    };
    Ok(ClosenessReport {
        target,
        n: h.n(),
        k: h.k(),
        s,
        part: VertexSet::new(part),
        missing_edges,
        epsilon_effective: missing_edges as f64 / (h.n() as f64).powi(h.k() as i32),
        exhaustive: search == Search::Exhaustive,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GoodnessReport {
    pub theta: f64,
    /// `θ·n^{k-1}`.
    pub threshold: f64,
    pub good: VertexSet,
    pub bad: VertexSet,
    /// `|N_target(v) \ N_h(v)|`, index `v - 1`.
    pub deficiency: Vec<u64>,
}

/// Splits `[n]` into θ-good and θ-bad vertices with respect to `target`.
pub fn theta_classify(h: &Hypergraph, target: &Hypergraph, theta: f64) -> Result<GoodnessReport> {
    same_shape(h, target)?;
    if !(theta >= 0.0) {
        return Err(Error::InvalidParameter(format!("theta must be non-negative, got {theta}")));
    }
    // A (k-1)-set in N_target(v) \ N_h(v) is exactly a missing edge through v.
    let mut deficiency = vec![0u64; h.n()];
    for e in target.edges().iter().filter(|e| !h.contains(e.vertices())) {
        for &v in e.vertices() {
            deficiency[v - 1] += 1;
        }
    }
    let threshold = theta * (h.n() as f64).powi(h.k() as i32 - 1);
    let (good, bad): (Vec<usize>, Vec<usize>) = (1..=h.n()).partition(|&v| deficiency[v - 1] as f64 <= threshold);
    Ok(GoodnessReport { theta, threshold, good: VertexSet::new(good), bad: VertexSet::new(bad), deficiency })
}

fn check_unit_third(x: f64) -> Result<()> {
    if !(0.0..=1.0 / 3.0).contains(&x) {
        return Err(Error::InvalidParameter(format!("x = {x} is outside [0, 1/3]")));
    }
    Ok(())
}

/// `f(x) = (1 - (1-x)^3)/6 - 9x^3/2`: the leading-order difference between
/// the cover-type and clique-type bounds at `s = xn`, divided by `n^3`.
pub fn crossover_f(x: f64) -> Result<f64> {
    check_unit_third(x)?;
    Ok((1.0 - (1.0 - x).powi(3)) / 6.0 - 4.5 * x.powi(3))
}

/// `f'(x) = (1 - 2x - 26x^2)/2`.
pub fn crossover_fprime(x: f64) -> Result<f64> {
    check_unit_third(x)?;
    Ok((1.0 - 2.0 * x - 26.0 * x * x) / 2.0)
}

/// The positive root of `f` by bisection, to within 1e-12.
pub fn crossover_root() -> f64 {
    let f = |x: f64| crossover_f(x).expect("bracket lies in the domain");
    // f > 0 on (0, root) and f(1/3) < 0.
    let (mut lo, mut hi) = (0.2, 1.0 / 3.0);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `(-3 + √321)/52`, the positive root of `26x² + 3x - 3`.
pub fn crossover_root_closed_form() -> f64 {
    (-3.0 + 321f64.sqrt()) / 52.0
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Leader {
    Hm,
    Clique,
    Tie,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundRow {
    pub s: usize,
    #[serde(with = "decimal")]
    pub cover: BigUint,
    #[serde(with = "decimal")]
    pub clique: BigUint,
    #[serde(with = "decimal")]
    pub hm: BigUint,
    /// Which of hm and clique is larger.
    pub leader: Leader,
    /// Whether the clique bound also beats the cover bound.
    pub clique_beats_cover: bool,
    /// `f(s/n)`.
    pub f: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundTable {
    pub n: usize,
    pub rows: Vec<BoundRow>,
    /// First `s` in the table with clique > hm.
    pub clique_overtakes_hm: Option<usize>,
    /// First `s` in the table with clique > cover.
    pub clique_overtakes_cover: Option<usize>,
}

/// Cover, clique and HM bounds for k = 3 across `s_range`.
pub fn bound_table(n: usize, s_range: impl IntoIterator<Item = usize>) -> Result<BoundTable> {
    let mut rows = Vec::new();
    for s in s_range {
        let b = bound_report(n, 3, s)?;
        let leader = match b.hm_bound.cmp(&b.clique_bound) {
            std::cmp::Ordering::Greater => Leader::Hm,
            std::cmp::Ordering::Less => Leader::Clique,
            std::cmp::Ordering::Equal => Leader::Tie,
        };
        rows.push(BoundRow {
            s,
            clique_beats_cover: b.clique_bound > b.cover_bound,
            f: crossover_f(s as f64 / n as f64)?,
            cover: b.cover_bound,
            clique: b.clique_bound,
            hm: b.hm_bound,
            leader,
        });
    }
    let clique_overtakes_hm = rows.iter().find(|r| r.leader == Leader::Clique).map(|r| r.s);
    let clique_overtakes_cover = rows.iter().find(|r| r.clique_beats_cover).map(|r| r.s);
    Ok(BoundTable { n, rows, clique_overtakes_hm, clique_overtakes_cover })
}

/// Every valid `s` for k = 3: `1 <= s` and `3s + 2 <= n`.
pub fn full_s_range(n: usize) -> std::ops::RangeInclusive<usize> {
    1..=n.saturating_sub(2) / 3
}

impl Tabular for BoundTable {
    fn header() -> Vec<&'static str> {
        vec!["n", "s", "x", "cover", "clique", "hm", "leader", "clique_beats_cover", "f"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| {
                vec![
                    self.n.to_string(),
                    r.s.to_string(),
                    format!("{:.6}", r.s as f64 / self.n as f64),
                    r.cover.to_string(),
                    r.clique.to_string(),
                    r.hm.to_string(),
                    format!("{:?}", r.leader).to_lowercase(),
                    r.clique_beats_cover.to_string(),
                    format!("{:.9}", r.f),
                ]
            })
            .collect()
    }
}

impl Tabular for ClosenessReport {
    fn header() -> Vec<&'static str> {
        vec!["target", "n", "k", "s", "part", "missing_edges", "epsilon_effective", "exhaustive"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        vec![vec![
            format!("{:?}", self.target).to_lowercase(),
            self.n.to_string(),
            self.k.to_string(),
            self.s.to_string(),
            self.part.iter().join(","),
            self.missing_edges.to_string(),
            format!("{:e}", self.epsilon_effective),
            self.exhaustive.to_string(),
        ]]
    }
}
