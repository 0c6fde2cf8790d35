//! Large matchings in sparse hypergraphs: a min-kill greedy and a seeded
//! nibble with a greedy cleanup.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::hypergraph::Hypergraph;
use crate::optimize::Matching;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NpmStrategy {
    #[default]
    Greedy,
    Nibble,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NpmOptions {
    pub strategy: NpmStrategy,
    /// Nibble stops once at most `leave_fraction · n` vertices are uncovered.
    pub leave_fraction: f64,
    /// Expected fraction of live vertices one nibble round tries to cover.
    pub bite: f64,
    /// Nibble rounds are capped at `ceil(round_factor · ln n)`.
    pub round_factor: f64,
}

impl Default for NpmOptions {
    fn default() -> Self {
        NpmOptions { strategy: NpmStrategy::Greedy, leave_fraction: 0.0, bite: 0.1, round_factor: 10.0 }
    }
}

/// Live edges of `h`, with incidence lists, for repeated deletion.
struct Live<'a> {
    h: &'a Hypergraph,
    alive: Vec<bool>,
    covered: Vec<bool>,
    incident: Vec<Vec<usize>>,
}

impl<'a> Live<'a> {
    fn new(h: &'a Hypergraph) -> Self {
        let mut incident = vec![Vec::new(); h.n() + 1];
        for (j, e) in h.edges().iter().enumerate() {
            for &v in e.vertices() {
                incident[v].push(j);
            }
        }
        Live { h, alive: vec![true; h.edge_count()], covered: vec![false; h.n() + 1], incident }
    }

    fn take(&mut self, j: usize) {
        for &v in self.h.edges()[j].vertices() {
            self.covered[v] = true;
            for &i in &self.incident[v] {
                self.alive[i] = false;
            }
        }
    }

    /// Live edges meeting edge `j`, itself included.
    fn kills(&self, j: usize, mark: &mut [usize], stamp: usize) -> usize {
        let mut count = 0;
        for &v in self.h.edges()[j].vertices() {
            for &i in &self.incident[v] {
                if self.alive[i] && mark[i] != stamp {
                    mark[i] = stamp;
                    count += 1;
                }
            }
        }
        count
    }

    fn live(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.alive.len()).filter(|&j| self.alive[j])
    }

    fn uncovered(&self) -> usize {
        (1..=self.h.n()).filter(|&v| !self.covered[v]).count()
    }
}

/// Repeatedly takes the live edge that kills the fewest live edges, ties to
/// the lexicographically first.
fn greedy(live: &mut Live, out: &mut Vec<usize>) {
    let mut mark = vec![usize::MAX; live.alive.len()];
    let mut stamp = 0;
    loop {
        let mut best: Option<(usize, usize)> = None;
        for j in live.live().collect::<Vec<_>>() {
            let k = live.kills(j, &mut mark, stamp);
            stamp += 1;
            if best.map_or(true, |(bk, _)| k < bk) {
                best = Some((k, j));
            }
        }
        let Some((_, j)) = best else { break };
        live.take(j);
        out.push(j);
    }
}

/// Each round keeps every live edge with probability `bite / D`, `D` the
/// average live degree, then resolves conflicts among the kept edges in a
/// uniformly random order.
fn nibble(live: &mut Live, opts: &NpmOptions, rng: &mut ChaCha8Rng, out: &mut Vec<usize>) {
    let n = live.h.n();
    let rounds = (opts.round_factor * (n.max(2) as f64).ln()).ceil() as usize;
    let stop = opts.leave_fraction * n as f64;
    for _ in 0..rounds {
        let edges: Vec<usize> = live.live().collect();
        if edges.is_empty() || live.uncovered() as f64 <= stop {
            break;
        }
        let touched = (1..=n).filter(|&v| live.incident[v].iter().any(|&j| live.alive[j])).count();
        let avg_degree = (edges.len() * live.h.k()) as f64 / touched as f64;
        let p = (opts.bite / avg_degree).min(1.0);
        let mut picked: Vec<usize> = edges.into_iter().filter(|_| rng.gen::<f64>() < p).collect();
        picked.shuffle(rng);
        for j in picked {
            if live.alive[j] {
                live.take(j);
                out.push(j);
            }
        }
    }
}

/// A large matching of `h`. Greedy is deterministic; nibble is
/// deterministic per seed and always finishes with a greedy pass over what
/// is left. Neither promises any particular coverage.
pub fn near_perfect_matching(h: &Hypergraph, opts: &NpmOptions, seed: u64) -> Matching {
    let mut live = Live::new(h);
    let mut chosen = Vec::new();
    if opts.strategy == NpmStrategy::Nibble {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        nibble(&mut live, opts, &mut rng, &mut chosen);
    }
    greedy(&mut live, &mut chosen);
    Matching::new(chosen.into_iter().map(|j| h.edges()[j].clone()).collect())
}
