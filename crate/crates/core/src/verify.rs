//! Exhaustive search for the largest k-graphs on `[n]` under a matching
//! constraint, compared against the extremal constructions.

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constructions::{binomial, bound_report};
use crate::error::{Error, Result};
use crate::hypergraph::{k_subsets, Edge, Hypergraph};
use crate::optimize::{nu_exact, tau_exact, Budget, ExactOptions, Meter};
use crate::report::Tabular;

/// Largest `C(n,k)` the full `2^C(n,k)` enumeration accepts.
pub const EXHAUSTIVE_MAX_EDGES: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Constraint {
    NuLeS,
    NuLeSAndTauGtS,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Exhaustive when `C(n,k)` is small enough, pruned otherwise.
    #[default]
    Auto,
    Exhaustive,
    Pruned,
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub method: Method,
    pub budget: Budget,
    pub witness_cap: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { method: Method::Auto, budget: Budget::unlimited(), witness_cap: 8 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyResult {
    pub n: usize,
    pub k: usize,
    pub s: usize,
    pub constraint: Constraint,
    pub method: Method,
    pub max_edges_found: usize,
    /// The construction bound, when `n ≥ ks + k - 1`: `max{hm, clique}` for
    /// `k = 3` under both constraints, all nontrivial families for other k,
    /// `max{cover, clique}` under `ν ≤ s` alone.
    pub bound: Option<u64>,
    pub matches_bound: bool,
    pub extremal_witnesses: Vec<Hypergraph>,
    /// Graphs enumerated, or search nodes for the pruned method.
    pub searched: u64,
}

/// True iff some `need` edges from `masks[start..]` avoid `used` and each other.
fn has_matching(masks: &[u128], start: usize, used: u128, need: usize) -> bool {
    if need == 0 {
        return true;
    }
    (start..masks.len()).any(|i| masks[i] & used == 0 && has_matching(masks, i + 1, used | masks[i], need - 1))
}

/// True iff at most `budget` vertices meet every edge: branch on the
/// vertices of the first edge missed so far.
fn has_cover(masks: &[u128], hit: u128, budget: usize) -> bool {
    match masks.iter().find(|&&m| m & hit == 0) {
        None => true,
        Some(_) if budget == 0 => false,
        Some(&m) => (0..128).filter(|b| m >> b & 1 == 1).any(|b| has_cover(masks, hit | 1 << b, budget - 1)),
    }
}

fn satisfies(masks: &[u128], s: usize, c: Constraint) -> bool {
    !has_matching(masks, 0, 0, s + 1) && (c == Constraint::NuLeS || !has_cover(masks, 0, s))
}

struct Best {
    size: usize,
    witnesses: Vec<u64>,
}

impl Best {
    fn offer(&mut self, size: usize, pick: u64, cap: usize) {
        if size > self.size {
            self.size = size;
            self.witnesses.clear();
        }
        if size == self.size && self.witnesses.len() < cap {
            self.witnesses.push(pick);
        }
    }

    fn merge(mut self, other: Best, cap: usize) -> Best {
        if other.size > self.size {
            return other;
        }
        if other.size == self.size {
            self.witnesses.extend(other.witnesses);
            self.witnesses.sort_unstable();
            self.witnesses.truncate(cap);
        }
        self
    }
}

/// Every subset of the `C(n,k)` k-sets, split across threads on the high
/// bits of the inclusion mask.
fn exhaustive(all: &[u128], s: usize, c: Constraint, cap: usize) -> Best {
    let m = all.len();
    let high = m.min(10);
    let low = m - high;
    (0u64..1 << high)
        .into_par_iter()
        .map(|prefix| {
            let mut best = Best { size: 0, witnesses: Vec::new() };
            let mut masks = Vec::with_capacity(m);
            for rest in 0u64..1 << low {
                let pick = prefix << low | rest;
                let size = pick.count_ones() as usize;
                if size < best.size {
                    continue;
                }
                masks.clear();
                masks.extend((0..m).filter(|i| pick >> i & 1 == 1).map(|i| all[i]));
                if satisfies(&masks, s, c) {
                    best.offer(size, pick, cap);
                }
            }
            best
        })
        .reduce(|| Best { size: 0, witnesses: Vec::new() }, |a, b| a.merge(b, cap))
}

/// Include/exclude search over the k-sets in order. Including is only
/// tried while `ν ≤ s` still holds; the cover condition is checked at the
/// leaves. Branches that cannot beat the best count are cut. Any nonempty
/// graph has an isomorphic copy containing `{1..k}`, so that edge is forced.
fn pruned(all: &[u128], s: usize, c: Constraint, budget: Budget) -> Result<(Best, u64)> {
    struct Search<'a> {
        all: &'a [u128],
        s: usize,
        c: Constraint,
        meter: Meter,
        nodes: u64,
        chosen: Vec<u128>,
        pick: u64,
        best: Best,
    }
    impl Search<'_> {
        fn go(&mut self, i: usize) -> Result<()> {
            self.meter.tick()?;
            self.nodes += 1;
            if self.chosen.len() + (self.all.len() - i) <= self.best.size {
                return Ok(());
            }
            if i == self.all.len() {
                if self.c == Constraint::NuLeS || !has_cover(&self.chosen, 0, self.s) {
                    self.best.offer(self.chosen.len(), self.pick, 1);
                }
                return Ok(());
            }
            self.chosen.push(self.all[i]);
            if !has_matching(&self.chosen, 0, 0, self.s + 1) {
                self.pick |= 1 << i;
                self.go(i + 1)?;
                self.pick &= !(1 << i);
            }
            self.chosen.pop();
            if i > 0 {
                self.go(i + 1)?;
            }
            Ok(())
        }
    }
    if all.len() > 64 {
        return Err(Error::TooLarge(format!("{} k-sets exceed the 64-bit search", all.len())));
    }
    let mut search = Search {
        all,
        s,
        c,
        meter: Meter::new(budget),
        nodes: 0,
        chosen: Vec::new(),
        pick: 0,
        best: Best { size: 0, witnesses: Vec::new() },
    };
    if let Err(Error::BudgetExceeded { nodes }) = search.go(0) {
        return Err(Error::TooLarge(format!(
            "search budget ran out after {nodes} nodes; best so far {} edges",
            search.best.size
        )));
    }
    if search.best.witnesses.is_empty() && c == Constraint::NuLeS {
        // the empty graph always has ν = 0
        search.best.offer(0, 0, 1);
    }
    Ok((search.best, search.nodes))
}

fn expected_bound(n: usize, k: usize, s: usize, c: Constraint) -> Option<u64> {
    let b = bound_report(n, k, s).ok()?;
    let v = match c {
        Constraint::NuLeS => b.matching_bound.clone(),
        Constraint::NuLeSAndTauGtS if k == 3 => b.hm_clique_max().clone(),
        Constraint::NuLeSAndTauGtS => b.max_nontrivial.clone(),
    };
    v.to_u64()
}

/// Maximizes `e(H)` over k-graphs on `[n]` under the constraint. Witnesses
/// are re-checked with the unpruned exact solvers before returning.
pub fn verify_extremal(n: usize, k: usize, s: usize, c: Constraint, opts: &VerifyOptions) -> Result<VerifyResult> {
    if k == 0 || k > n || n > 128 {
        return Err(Error::InvalidParameter(format!("need 1 <= k <= n <= 128, got n={n}, k={k}")));
    }
    let m = binomial(n, k).to_usize().unwrap_or(usize::MAX);
    let method = match opts.method {
        Method::Auto if m <= EXHAUSTIVE_MAX_EDGES => Method::Exhaustive,
        Method::Auto => Method::Pruned,
        other => other,
    };
    if method == Method::Exhaustive && m > EXHAUSTIVE_MAX_EDGES {
        return Err(Error::TooLarge(format!(
            "C({n},{k}) = {m} k-sets; exhaustive enumeration stops at {EXHAUSTIVE_MAX_EDGES}"
        )));
    }
    if m > 64 {
        return Err(Error::TooLarge(format!("C({n},{k}) = {m} k-sets exceed the 64-bit search")));
    }
    let edges: Vec<Edge> = k_subsets(n, k).map(Edge::from_sorted).collect();
    let all: Vec<u128> = edges.iter().map(|e| e.mask().expect("n <= 128")).collect();
    let (best, searched) = match method {
        Method::Pruned => pruned(&all, s, c, opts.budget)?,
        _ => (exhaustive(&all, s, c, opts.witness_cap.max(1)), 1u64 << m),
    };
    let mut witnesses = Vec::new();
    for pick in best.witnesses {
        let chosen = (0..m).filter(|i| pick >> i & 1 == 1).map(|i| edges[i].clone()).collect();
        let h = Hypergraph::from_canonical(n, k, chosen);
        let nu = nu_exact(&h, &ExactOptions::oracle())?.len();
        let tau = tau_exact(&h, &ExactOptions::oracle())?.len();
        if nu > s || (c == Constraint::NuLeSAndTauGtS && tau <= s) {
            return Err(Error::InvalidCertificate(format!("witness with ν = {nu}, τ = {tau} breaks the constraint")));
        }
        witnesses.push(h);
    }
    let bound = expected_bound(n, k, s, c);
    Ok(VerifyResult {
        n,
        k,
        s,
        constraint: c,
        method,
        max_edges_found: best.size,
        bound,
        matches_bound: bound == Some(best.size as u64),
        extremal_witnesses: witnesses,
        searched,
    })
}

impl Tabular for VerifyResult {
    fn header() -> Vec<&'static str> {
        vec!["n", "k", "s", "constraint", "method", "max_edges_found", "bound", "matches_bound", "witnesses", "searched"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        let constraint = match self.constraint {
            Constraint::NuLeS => "nu_le_s",
            Constraint::NuLeSAndTauGtS => "nu_le_s_and_tau_gt_s",
        };
        vec![vec![
            self.n.to_string(),
            self.k.to_string(),
            self.s.to_string(),
            constraint.into(),
            format!("{:?}", self.method).to_lowercase(),
            self.max_edges_found.to_string(),
            self.bound.map_or("-".into(), |b| b.to_string()),
            self.matches_bound.to_string(),
            self.extremal_witnesses.len().to_string(),
            self.searched.to_string(),
        ]]
    }
}
