//! Rainbow matchings (every edge meets `S` exactly once) and the threshold
//! graph of a fractional cover.

use super::fractional::{FractionalAssignment, FEASIBILITY_TOL};
use super::{nu_exact, AssignmentKind, ExactOptions, Matching};
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, Relabel, VertexSet};
use crate::lp::Scalar;

/// A matching whose edges each meet `s` in exactly one vertex. `exact`
/// searches for a maximum one; otherwise vertices of `s` are processed in
/// ascending order, each taking the lexicographically first edge that meets
/// `s` only in it and avoids the vertices already used.
pub fn greedy_rainbow_matching(h: &Hypergraph, s: &VertexSet, exact: bool) -> Result<Matching> {
    s.check_within(h.n())?;
    let single = |e: &[usize]| e.iter().filter(|&&v| s.contains(v)).count() == 1;
    if exact {
        let sub = h.filter_edges(|e| single(e.vertices()));
        return nu_exact(&sub, &ExactOptions::default());
    }
    let mut used = vec![false; h.n() + 1];
    let mut out = Vec::new();
    for x in s.iter() {
        if used[x] {
            continue;
        }
        let pick = h.edges().iter().find(|e| {
            e.contains(x) && single(e.vertices()) && e.vertices().iter().all(|&v| !used[v])
        });
        if let Some(e) = pick {
            for &v in e.vertices() {
                used[v] = true;
            }
            out.push(e.clone());
        }
    }
    Ok(Matching::new(out))
}

/// Output of [`threshold_cover_graph`]: `graph` lives on the relabeled
/// vertices, where new vertex `i` is old vertex `relabel.to_old(i)`.
#[derive(Clone, Debug)]
pub struct ThresholdGraph {
    pub graph: Hypergraph,
    pub relabel: Relabel,
    /// ω in the new labelling, nonincreasing.
    pub weights: Vec<f64>,
}

/// Relabels by nonincreasing ω (ties by ascending id) and returns the graph
/// of all k-sets whose ω-weight is at least 1.
pub fn threshold_cover_graph<T: Scalar>(h: &Hypergraph, omega: &FractionalAssignment<T>) -> Result<ThresholdGraph> {
    if omega.kind != AssignmentKind::Cover {
        return Err(Error::InvalidParameter("threshold graph needs a cover assignment".into()));
    }
    omega.validate(h)?;
    let mut order: Vec<usize> = (1..=h.n()).collect();
    order.sort_by(|&a, &b| omega.weights[b - 1].cmp_tol(&omega.weights[a - 1]).then(a.cmp(&b)));
    let relabel = Relabel::from_old_ids(order.clone());
    let w: Vec<T> = order.iter().map(|&v| omega.weights[v - 1].clone()).collect();
    let heavy = |e: &[usize]| {
        let total = e.iter().fold(T::zero(), |a, &v| a.add(&w[v - 1]));
        let gap = total.sub(&T::one());
        if T::EXACT {
            !gap.is_neg()
        } else {
            gap.to_f64() >= -FEASIBILITY_TOL
        }
    };
    let graph = Hypergraph::from_predicate(h.n(), h.k(), heavy)?;
    Ok(ThresholdGraph { graph, relabel, weights: w.iter().map(Scalar::to_f64).collect() })
}
