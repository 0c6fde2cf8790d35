//! Matching, cover and independence numbers, exact and fractional, plus the
//! greedy rainbow-matching and threshold-cover-graph procedures.

mod exact;
mod fractional;
mod procedures;

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{Edge, Hypergraph, VertexSet};

pub use exact::{alpha_exact, cover_within, nu_exact, tau_exact};
pub use fractional::{
    check_duality, nu_frac, tau_frac, AssignmentKind, DualityReport, FractionalAssignment, FractionalReport, LpMode,
};
pub use procedures::{greedy_rainbow_matching, threshold_cover_graph, ThresholdGraph};

/// Resource cap for the exponential searches.
#[derive(Clone, Copy, Debug, Default)]
pub struct Budget {
    pub max_nodes: Option<u64>,
    pub deadline: Option<Instant>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget::default()
    }

    pub fn nodes(max_nodes: u64) -> Self {
        Budget { max_nodes: Some(max_nodes), deadline: None }
    }

    pub fn millis(ms: u64) -> Self {
        Budget { max_nodes: None, deadline: Some(Instant::now() + Duration::from_millis(ms)) }
    }
}

pub(crate) struct Meter {
    budget: Budget,
    nodes: u64,
}

impl Meter {
    pub(crate) fn new(budget: Budget) -> Self {
        Meter { budget, nodes: 0 }
    }

    pub(crate) fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.budget.max_nodes.is_some_and(|m| self.nodes > m) {
            return Err(Error::BudgetExceeded { nodes: self.nodes });
        }
        if self.nodes % 4096 == 0 && self.budget.deadline.is_some_and(|d| Instant::now() > d) {
            return Err(Error::BudgetExceeded { nodes: self.nodes });
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ExactOptions {
    /// Stop as soon as a matching of this size is found.
    pub limit: Option<usize>,
    pub budget: Budget,
    /// Use the unpruned exhaustive enumerator instead of branch and bound.
    pub oracle: bool,
}

impl ExactOptions {
    pub fn oracle() -> Self {
        ExactOptions { oracle: true, ..Default::default() }
    }

    pub fn with_limit(limit: usize) -> Self {
        ExactOptions { limit: Some(limit), ..Default::default() }
    }
}

/// Pairwise disjoint edges, kept in canonical order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matching {
    edges: Vec<Edge>,
}

impl Matching {
    pub fn new(mut edges: Vec<Edge>) -> Self {
        edges.sort();
        Matching { edges }
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn covered(&self) -> VertexSet {
        self.edges.iter().flat_map(|e| e.vertices().iter().copied()).collect()
    }

    /// Checks disjointness and membership in `h`.
    pub fn validate(&self, h: &Hypergraph) -> Result<()> {
        for (i, e) in self.edges.iter().enumerate() {
            if !h.contains(e.vertices()) {
                return Err(Error::InvalidCertificate(format!("matching edge {e} is not an edge of the graph")));
            }
            if let Some(f) = self.edges[i + 1..].iter().find(|f| !f.is_disjoint(e)) {
                return Err(Error::InvalidCertificate(format!("matching edges {e} and {f} intersect")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexCover {
    pub vertices: VertexSet,
}

impl VertexCover {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn validate(&self, h: &Hypergraph) -> Result<()> {
        self.vertices.check_within(h.n())?;
        match h.edges().iter().find(|e| e.vertices().iter().all(|&v| !self.vertices.contains(v))) {
            Some(e) => Err(Error::InvalidCertificate(format!("edge {e} is not covered"))),
            None => Ok(()),
        }
    }
}

/// Checks that no edge of `h` lies inside `set`.
pub fn validate_independent(h: &Hypergraph, set: &VertexSet) -> Result<()> {
    match h.edges().iter().find(|e| e.vertices().iter().all(|&v| set.contains(v))) {
        Some(e) => Err(Error::InvalidCertificate(format!("edge {e} lies inside the set"))),
        None => Ok(()),
    }
}
