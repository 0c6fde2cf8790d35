//! Families of fractional perfect matchings with bounded pair loads.
//!
//! Round `t + 1` solves for a fractional perfect matching on the edges that
//! contain no heavy pair (accumulated load at least `cap / 2`). Pairs that are
//! light before a round gain at most 1 during it, so every load stays below 2.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::optimize::{nu_exact, Budget, ExactOptions, FractionalAssignment};

/// Loads within this of the heavy threshold count as heavy.
pub const HEAVY_TOL: f64 = 1e-9;
/// Per-vertex sums of every member must be 1 within this.
pub const SUM_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FpmStrategy {
    /// Minimize the load placed on already loaded pairs.
    Spread,
    /// Pile load onto pairs that are already warm, while cold pairs are kept
    /// below the heavy threshold, so pairs tend to die close to the cap.
    Concentrate,
    /// Alternate two kinds of round. A seed round puts as much uniform
    /// weight as possible on a maximum matching of the remaining edges; the
    /// following round concentrates on the pairs that matching warmed up.
    Paired,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FpmOptions {
    pub cap: f64,
    pub strategy: FpmStrategy,
    /// Pairs below this load are cold.
    pub warm: f64,
    /// Cold pairs must end a round at most `cap / 2 - margin`.
    pub margin: f64,
    /// Paired strategy only: how many runs to make before giving up. The
    /// first run anchors on exact maximum matchings; later runs anchor on
    /// random maximal matchings drawn from `seed`.
    pub attempts: usize,
    pub seed: u64,
}

impl Default for FpmOptions {
    fn default() -> Self {
        FpmOptions { cap: 2.0, strategy: FpmStrategy::Paired, warm: 0.5, margin: 0.05, attempts: 256, seed: 0 }
    }
}

/// Symmetric pair-indexed table of accumulated loads.
#[derive(Clone, Debug, PartialEq)]
pub struct PairLoads {
    n: usize,
    load: Vec<f64>,
}

impl PairLoads {
    pub fn new(n: usize) -> Self {
        PairLoads { n, load: vec![0.0; n * n] }
    }

    fn idx(&self, x: usize, y: usize) -> usize {
        let (a, b) = if x < y { (x, y) } else { (y, x) };
        (a - 1) * self.n + (b - 1)
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.load[self.idx(x, y)]
    }

    fn add(&mut self, x: usize, y: usize, w: f64) {
        let i = self.idx(x, y);
        self.load[i] += w;
    }

    /// Adds `Σ_{e ⊇ {x,y}} f(e)` for every pair.
    pub fn accumulate(&mut self, h: &Hypergraph, f: &[f64]) {
        for (e, &w) in h.edges().iter().zip(f) {
            if w == 0.0 {
                continue;
            }
            let vs = e.vertices();
            for a in 0..vs.len() {
                for b in a + 1..vs.len() {
                    self.add(vs[a], vs[b], w);
                }
            }
        }
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (1..=self.n).flat_map(move |x| (x + 1..=self.n).map(move |y| (x, y, self.get(x, y))))
    }

    pub fn max(&self) -> f64 {
        self.pairs().map(|p| p.2).fold(0.0, f64::max)
    }

    /// Pairs with load at least `threshold` (less [`HEAVY_TOL`]).
    pub fn heavy(&self, threshold: f64) -> Vec<(usize, usize)> {
        self.pairs().filter(|p| p.2 >= threshold - HEAVY_TOL).map(|p| (p.0, p.1)).collect()
    }

    /// Largest number of heavy pairs through one vertex.
    pub fn max_heavy_per_vertex(&self, threshold: f64) -> usize {
        let mut count = vec![0usize; self.n + 1];
        for (x, y) in self.heavy(threshold) {
            count[x] += 1;
            count[y] += 1;
        }
        count.into_iter().max().unwrap_or(0)
    }

    fn edge_is_light(&self, vs: &[usize], threshold: f64) -> bool {
        (0..vs.len()).all(|a| (a + 1..vs.len()).all(|b| self.get(vs[a], vs[b]) < threshold - HEAVY_TOL))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum FamilyStatus {
    Complete,
    /// No fractional perfect matching avoids the heavy pairs at this round.
    Infeasible { round: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundInfo {
    pub round: usize,
    /// Edges available to this round (none contains a heavy pair).
    pub available_edges: usize,
    pub solved: bool,
    /// Whether the cold-pair caps had to be dropped.
    pub relaxed: bool,
    pub pivots: usize,
    pub residual: f64,
    /// `|S_t|` after this round.
    pub heavy_pairs: usize,
    /// `|E_t|` after this round.
    pub removed_edges: usize,
    pub max_pair_load: f64,
    pub max_heavy_per_vertex: usize,
}

#[derive(Clone, Debug)]
pub struct FpmFamily {
    pub graph: Hypergraph,
    pub cap: f64,
    pub requested: usize,
    /// Each member is indexed like `graph.edges()`.
    pub members: Vec<FractionalAssignment<f64>>,
    pub loads: PairLoads,
    pub rounds: Vec<RoundInfo>,
    pub status: FamilyStatus,
    /// Runs made; the family is the longest one.
    pub attempts: usize,
}

impl FpmFamily {
    pub fn t(&self) -> usize {
        self.members.len()
    }

    pub fn is_complete(&self) -> bool {
        self.status == FamilyStatus::Complete
    }

    pub fn pair_load(&self, x: usize, y: usize) -> f64 {
        self.loads.get(x, y)
    }

    pub fn heavy_threshold(&self) -> f64 {
        self.cap / 2.0
    }

    /// Replays the family from scratch: members are perfect, members skip
    /// edges through pairs that were heavy before them, loads stay below the
    /// cap, and the heavy-pair counts respect their counting bounds.
    pub fn verify(&self) -> Result<()> {
        let h = &self.graph;
        let mut loads = PairLoads::new(h.n());
        for (i, f) in self.members.iter().enumerate() {
            let fail = |msg: String| Err(Error::InvalidCertificate(format!("member {}: {msg}", i + 1)));
            if f.weights.len() != h.edge_count() {
                return fail("wrong number of weights".into());
            }
            if let Some(w) = f.weights.iter().find(|&&w| !(-SUM_TOL..=1.0 + SUM_TOL).contains(&w)) {
                return fail(format!("weight {w} outside [0, 1]"));
            }
            for (v, s) in f.vertex_loads(h).iter().enumerate() {
                if (s - 1.0).abs() > SUM_TOL {
                    return fail(format!("vertex {} has sum {s}", v + 1));
                }
            }
            for (e, &w) in h.edges().iter().zip(&f.weights) {
                if w > SUM_TOL && !loads.edge_is_light(e.vertices(), self.heavy_threshold()) {
                    return fail(format!("edge {e} has weight {w} but contains a heavy pair"));
                }
            }
            loads.accumulate(h, &f.weights);
            if let Some((x, y, l)) = loads.pairs().find(|p| p.2 >= self.cap) {
                return fail(format!("pair {{{x},{y}}} reaches load {l}"));
            }
            let threshold = self.heavy_threshold();
            let heavy = loads.heavy(threshold).len();
            let removed = h.edges().iter().filter(|e| !loads.edge_is_light(e.vertices(), threshold)).count();
            if removed > heavy * h.n().saturating_sub(2) {
                return fail(format!("{removed} removed edges from only {heavy} heavy pairs"));
            }
            // loads through x sum to (k - 1)(i + 1), so few pairs can be heavy
            let per_vertex = loads.max_heavy_per_vertex(threshold) as f64;
            if per_vertex > (h.k() - 1) as f64 * (i + 1) as f64 / threshold {
                return fail(format!("{per_vertex} heavy pairs through one vertex"));
            }
        }
        Ok(())
    }
}

/// Builds up to `t` fractional perfect matchings of `h` with every pair load
/// below `opts.cap`. Stops early, with status `Infeasible`, when a round has
/// no fractional perfect matching on the remaining edges.
pub fn extract_fpm_family(h: &Hypergraph, t: usize, opts: &FpmOptions) -> Result<FpmFamily> {
    if !(opts.cap > 0.0) || !(0.0..1.0).contains(&opts.margin) {
        return Err(Error::InvalidParameter(format!("bad cap {} or margin {}", opts.cap, opts.margin)));
    }
    let attempts = if opts.strategy == FpmStrategy::Paired { opts.attempts.max(1) } else { 1 };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut best = run(h, t, opts, None)?;
    let mut made = 1;
    while !best.is_complete() && made < attempts {
        made += 1;
        let next = run(h, t, opts, Some(&mut rng))?;
        if next.t() > best.t() {
            best = next;
        }
    }
    best.attempts = made;
    Ok(best)
}

fn run(h: &Hypergraph, t: usize, opts: &FpmOptions, mut rng: Option<&mut ChaCha8Rng>) -> Result<FpmFamily> {
    let mut family = FpmFamily {
        graph: h.clone(),
        cap: opts.cap,
        requested: t,
        members: Vec::new(),
        loads: PairLoads::new(h.n()),
        rounds: Vec::new(),
        status: FamilyStatus::Complete,
        attempts: 1,
    };
    let threshold = opts.cap / 2.0;
    for round in 1..=t {
        let available: Vec<usize> =
            (0..h.edge_count()).filter(|&j| family.loads.edge_is_light(h.edges()[j].vertices(), threshold)).collect();
        let mut info = RoundInfo {
            round,
            available_edges: available.len(),
            solved: false,
            relaxed: false,
            pivots: 0,
            residual: 0.0,
            heavy_pairs: 0,
            removed_edges: 0,
            max_pair_load: family.loads.max(),
            max_heavy_per_vertex: 0,
        };
        let kind = match opts.strategy {
            FpmStrategy::Spread => RoundKind::Spread,
            FpmStrategy::Concentrate => RoundKind::Concentrate,
            FpmStrategy::Paired if round % 2 == 1 => {
                let anchor = match rng.as_deref_mut() {
                    None => exact_anchor(h, &available),
                    Some(rng) => random_anchor(h, &available, rng),
                };
                RoundKind::Seed(anchor)
            }
            FpmStrategy::Paired => RoundKind::Concentrate,
        };

        let solution = match solve_round(h, &available, &family.loads, opts, &kind, true)? {
            Some(s) => Some(s),
            None if kind != RoundKind::Spread => {
                info.relaxed = true;
                solve_round(h, &available, &family.loads, opts, &kind, false)?
            }
            None => None,
        };
        let Some((weights, pivots, residual)) = solution else {
            family.rounds.push(info);
            family.status = FamilyStatus::Infeasible { round };
            return Ok(family);
        };
        family.loads.accumulate(h, &weights);
        let heavy = family.loads.heavy(threshold);
        info.solved = true;
        info.pivots = pivots;
        info.residual = residual;
        info.heavy_pairs = heavy.len();
        info.removed_edges =
            h.edges().iter().filter(|e| !family.loads.edge_is_light(e.vertices(), threshold)).count();
        info.max_pair_load = family.loads.max();
        info.max_heavy_per_vertex = family.loads.max_heavy_per_vertex(threshold);
        family.members.push(FractionalAssignment::matching(weights));
        family.rounds.push(info);
    }
    Ok(family)
}

type RoundSolution = (Vec<f64>, usize, f64);

#[derive(Clone, Debug, PartialEq, Eq)]
enum RoundKind {
    Spread,
    Concentrate,
    /// Columns of the anchor matching.
    Seed(Vec<usize>),
}

/// A maximum matching of the available edges, as column indices. The exact
/// search runs under a node budget; a greedy matching is the fallback.
fn exact_anchor(h: &Hypergraph, available: &[usize]) -> Vec<usize> {
    let sub = Hypergraph::from_canonical(h.n(), h.k(), available.iter().map(|&j| h.edges()[j].clone()).collect());
    let opts = ExactOptions { limit: Some(h.n() / h.k()), budget: Budget::nodes(200_000), oracle: false };
    match nu_exact(&sub, &opts) {
        Ok(m) => m.edges().iter().filter_map(|e| sub.index_of(e.vertices())).collect(),
        Err(_) => greedy_columns(h, available, 0..available.len()),
    }
}

/// The largest of a few greedy matchings over shuffled edge orders.
fn random_anchor(h: &Hypergraph, available: &[usize], rng: &mut ChaCha8Rng) -> Vec<usize> {
    let want = h.n() / h.k();
    let mut order: Vec<usize> = (0..available.len()).collect();
    let mut best = Vec::new();
    for _ in 0..32 {
        order.shuffle(rng);
        let m = greedy_columns(h, available, order.iter().copied());
        if m.len() > best.len() {
            best = m;
        }
        if best.len() >= want {
            break;
        }
    }
    best
}

fn greedy_columns(h: &Hypergraph, available: &[usize], order: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut used = vec![false; h.n() + 1];
    let mut out = Vec::new();
    for col in order {
        let vs = h.edges()[available[col]].vertices();
        if vs.iter().all(|&v| !used[v]) {
            vs.iter().for_each(|&v| used[v] = true);
            out.push(col);
        }
    }
    out
}

fn solve_round(
    h: &Hypergraph,
    available: &[usize],
    loads: &PairLoads,
    opts: &FpmOptions,
    kind: &RoundKind,
    cold_caps: bool,
) -> Result<Option<RoundSolution>> {
    let n = h.n();
    let mut incident: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for (col, &j) in available.iter().enumerate() {
        for &v in h.edges()[j].vertices() {
            incident[v - 1].push((col, 1.0));
        }
    }
    if incident.iter().any(|r| r.is_empty()) {
        return Ok(None);
    }
    let pair_sum = |j: usize| {
        let vs = h.edges()[j].vertices();
        let mut s = 0.0;
        for a in 0..vs.len() {
            for b in a + 1..vs.len() {
                s += loads.get(vs[a], vs[b]);
            }
        }
        s
    };
    let mut objective: Vec<f64> = available
        .iter()
        .map(|&j| match kind {
            RoundKind::Spread => -pair_sum(j),
            RoundKind::Concentrate => pair_sum(j),
            // spreading only breaks ties between seeds of equal strength
            RoundKind::Seed(_) => -1e-3 * pair_sum(j),
        })
        .collect();
    let lambda = available.len();
    if let RoundKind::Seed(_) = kind {
        objective.push(1.0);
    }
    let mut lp = LinearProgram::maximize(objective);
    for row in incident {
        lp.add(row, Relation::Eq, 1.0);
    }
    if let RoundKind::Seed(anchor) = kind {
        for &col in anchor {
            lp.add(vec![(col, 1.0), (lambda, -1.0)], Relation::Ge, 0.0);
        }
    }
    let threshold = opts.cap / 2.0;
    let mut pair_rows: std::collections::BTreeMap<(usize, usize), Vec<(usize, f64)>> = Default::default();
    for (col, &j) in available.iter().enumerate() {
        let vs = h.edges()[j].vertices();
        for a in 0..vs.len() {
            for b in a + 1..vs.len() {
                pair_rows.entry((vs[a], vs[b])).or_default().push((col, 1.0));
            }
        }
    }
    for ((x, y), row) in pair_rows {
        let l = loads.get(x, y);
        // With cap < 2 a light pair could otherwise overshoot in one round.
        let room = opts.cap - l - HEAVY_TOL;
        let limit = if cold_caps && *kind != RoundKind::Spread && l < opts.warm {
            Some((threshold - opts.margin - l).min(room))
        } else if room < 1.0 {
            Some(room)
        } else {
            None
        };
        if let Some(limit) = limit {
            lp.add(row, Relation::Le, limit.max(0.0));
        }
    }
    match lp.solve()? {
        LpOutcome::Optimal(sol) => {
            let mut weights = vec![0.0; h.edge_count()];
            for (col, &j) in available.iter().enumerate() {
                weights[j] = sol.x[col].max(0.0);
            }
            Ok(Some((weights, sol.pivots, sol.residual)))
        }
        LpOutcome::Infeasible => Ok(None),
        LpOutcome::Unbounded => Err(Error::Lp("fractional perfect matching program reported unbounded".into())),
    }
}
