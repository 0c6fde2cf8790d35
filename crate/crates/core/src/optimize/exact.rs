//! Exact ν, τ and α on vertex bitmasks.
//!
//! Branch and bound for production use; every solver also has an unpruned
//! enumerator (`ExactOptions::oracle`) that serves as ground truth in tests.

use itertools::Itertools;

use super::{fractional, ExactOptions, Matching, Meter, VertexCover};
use crate::error::Result;
use crate::hypergraph::{mask_vertices, Edge, Hypergraph, VertexSet};
use crate::optimize::Budget;

/// Maximum matching (or one of size `opts.limit` if that is smaller).
pub fn nu_exact(h: &Hypergraph, opts: &ExactOptions) -> Result<Matching> {
    let masks = h.require_masks()?;
    let limit = opts.limit.unwrap_or(usize::MAX);
    let mut meter = Meter::new(opts.budget);
    let mut best = if opts.oracle {
        let mut best = Vec::new();
        enumerate_matchings(&masks, 0, &mut Vec::new(), &mut best, &mut meter)?;
        best
    } else {
        nu_search(h, &masks, limit, &mut meter)?
    };
    best.truncate(limit);
    Ok(Matching::new(best.into_iter().map(Edge::from_mask).collect()))
}

pub(crate) fn greedy_matching(masks: &[u128]) -> Vec<u128> {
    let mut used = 0u128;
    let mut out = Vec::new();
    for &e in masks {
        if e & used == 0 {
            used |= e;
            out.push(e);
        }
    }
    out
}

fn nu_search(h: &Hypergraph, masks: &[u128], limit: usize, meter: &mut Meter) -> Result<Vec<u128>> {
    let k = h.k() as u32;
    let mut best = greedy_matching(masks);
    let union = masks.iter().fold(0u128, |a, &e| a | e);
    let mut target = limit.min((union.count_ones() / k) as usize);
    // LP bound at the root: ν ≤ ⌊ν*⌋.
    if best.len() < target && masks.len() >= 24 {
        if let Ok(frac) = fractional::nu_frac::<f64>(h) {
            target = target.min((frac.value + 1e-7).floor() as usize);
        }
    }
    if best.len() >= target {
        return Ok(best);
    }
    let mut state = NuSearch { k, target, best: std::mem::take(&mut best), cur: Vec::new(), meter };
    state.rec(masks.to_vec())?;
    Ok(state.best)
}

struct NuSearch<'a> {
    k: u32,
    target: usize,
    best: Vec<u128>,
    cur: Vec<u128>,
    meter: &'a mut Meter,
}

impl NuSearch<'_> {
    /// Returns `Ok(true)` once the target is reached.
    fn rec(&mut self, edges: Vec<u128>) -> Result<bool> {
        self.meter.tick()?;
        if self.cur.len() > self.best.len() {
            self.best = self.cur.clone();
            if self.best.len() >= self.target {
                return Ok(true);
            }
        }
        if edges.is_empty() {
            return Ok(false);
        }
        let union = edges.iter().fold(0u128, |a, &e| a | e);
        let room = ((union.count_ones() / self.k) as usize).min(edges.len());
        if self.cur.len() + room <= self.best.len() {
            return Ok(false);
        }
        // Branch on the lowest vertex still in play: matched by one of its
        // edges, or left unmatched.
        let v = union & union.wrapping_neg();
        for &e in edges.iter().filter(|&&e| e & v != 0) {
            let rest = edges.iter().copied().filter(|&f| f & e == 0).collect();
            self.cur.push(e);
            let done = self.rec(rest)?;
            self.cur.pop();
            if done {
                return Ok(true);
            }
        }
        let rest = edges.into_iter().filter(|&f| f & v == 0).collect();
        self.rec(rest)
    }
}

fn enumerate_matchings(
    masks: &[u128],
    from: usize,
    cur: &mut Vec<u128>,
    best: &mut Vec<u128>,
    meter: &mut Meter,
) -> Result<()> {
    meter.tick()?;
    if cur.len() > best.len() {
        *best = cur.clone();
    }
    let used = cur.iter().fold(0u128, |a, &e| a | e);
    for j in from..masks.len() {
        if masks[j] & used == 0 {
            cur.push(masks[j]);
            enumerate_matchings(masks, j + 1, cur, best, meter)?;
            cur.pop();
        }
    }
    Ok(())
}

/// Minimum vertex cover.
pub fn tau_exact(h: &Hypergraph, opts: &ExactOptions) -> Result<VertexCover> {
    let masks = h.require_masks()?;
    let mut meter = Meter::new(opts.budget);
    let cover = if opts.oracle {
        tau_oracle(h.n(), &masks, &mut meter)?
    } else {
        let upper = greedy_cover(&masks);
        let bound = upper.count_ones() as usize;
        tau_search(&masks, bound, &mut meter)?.unwrap_or(upper)
    };
    Ok(VertexCover { vertices: VertexSet::new(mask_vertices(cover)) })
}

/// A cover of size at most `size`, if one exists. Decides `τ ≤ size`
/// without computing τ.
pub fn cover_within(h: &Hypergraph, size: usize, budget: Budget) -> Result<Option<VertexCover>> {
    let masks = h.require_masks()?;
    let mut meter = Meter::new(budget);
    let upper = greedy_cover(&masks);
    let found = if upper.count_ones() as usize <= size {
        Some(upper)
    } else {
        tau_search(&masks, size + 1, &mut meter)?
    };
    Ok(found.map(|c| VertexCover { vertices: VertexSet::new(mask_vertices(c)) }))
}

fn greedy_cover(masks: &[u128]) -> u128 {
    let mut cover = 0u128;
    loop {
        let open: Vec<u128> = masks.iter().copied().filter(|&e| e & cover == 0).collect();
        if open.is_empty() {
            return cover;
        }
        let mut deg = [0u32; 128];
        for e in &open {
            for v in BitIter(*e) {
                deg[v] += 1;
            }
        }
        let v = (0..128).max_by_key(|&v| (deg[v], std::cmp::Reverse(v))).unwrap();
        cover |= 1u128 << v;
    }
}

/// Smallest cover of size strictly below `bound`, if any.
fn tau_search(masks: &[u128], bound: usize, meter: &mut Meter) -> Result<Option<u128>> {
    struct Search<'a, 'm> {
        masks: &'a [u128],
        best: Option<u128>,
        bound: usize,
        meter: &'m mut Meter,
    }
    impl Search<'_, '_> {
        fn rec(&mut self, cover: u128, excluded: u128) -> Result<()> {
            self.meter.tick()?;
            let size = cover.count_ones() as usize;
            let mut open = self.masks.iter().copied().filter(|&e| e & cover == 0);
            let Some(first) = open.next() else {
                self.best = Some(cover);
                self.bound = size;
                return Ok(());
            };
            // disjoint open edges each need their own cover vertex
            let mut used = first;
            let mut lower = 1;
            for e in open {
                if e & used == 0 {
                    used |= e;
                    lower += 1;
                }
            }
            if size + lower >= self.bound {
                return Ok(());
            }
            let mut excluded = excluded;
            for v in BitIter(first & !excluded) {
                let bit = 1u128 << v;
                self.rec(cover | bit, excluded)?;
                excluded |= bit;
            }
            Ok(())
        }
    }
    let mut s = Search { masks, best: None, bound, meter };
    s.rec(0, 0)?;
    Ok(s.best)
}

fn tau_oracle(n: usize, masks: &[u128], meter: &mut Meter) -> Result<u128> {
    for size in 0..=n {
        for subset in (0..n).combinations(size) {
            meter.tick()?;
            let c = subset.iter().fold(0u128, |a, &v| a | 1u128 << v);
            if masks.iter().all(|&e| e & c != 0) {
                return Ok(c);
            }
        }
    }
    unreachable!("[n] covers every edge")
}

/// Maximum independent set: the complement of a minimum cover.
pub fn alpha_exact(h: &Hypergraph, opts: &ExactOptions) -> Result<VertexSet> {
    if opts.oracle {
        let masks = h.require_masks()?;
        let mut meter = Meter::new(opts.budget);
        let n = h.n();
        for size in (0..=n).rev() {
            for subset in (0..n).combinations(size) {
                meter.tick()?;
                let set = subset.iter().fold(0u128, |a, &v| a | 1u128 << v);
                if masks.iter().all(|&e| e & !set != 0) {
                    return Ok(VertexSet::new(mask_vertices(set)));
                }
            }
        }
        unreachable!("the empty set is independent")
    }
    let cover = tau_exact(h, opts)?;
    Ok(cover.vertices.complement(h.n()))
}

struct BitIter(u128);

impl Iterator for BitIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let b = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(b)
    }
}
