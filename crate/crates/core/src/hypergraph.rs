//! k-uniform hypergraphs on the vertex set `[n] = {1, ..., n}`.
//!
//! A [`Hypergraph`] is immutable once built. Edges are strictly ascending
//! vertex tuples kept in lexicographic order, so iteration, file output and
//! every derived computation are deterministic.

use std::collections::{BTreeSet, HashMap};

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest `n` for which every edge fits in a single `u128` vertex mask.
pub const MASK_LIMIT: usize = 128;

/// A single edge: a strictly ascending tuple of 1-based vertex ids.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Edge(Vec<usize>);

impl Edge {
    /// Sorts the given vertices. Does not check for duplicates; use
    /// [`Hypergraph::build`] for validated input.
    pub fn new(mut vertices: Vec<usize>) -> Self {
        vertices.sort_unstable();
        Edge(vertices)
    }

    pub(crate) fn from_sorted(vertices: Vec<usize>) -> Self {
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        Edge(vertices)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn intersection_size(&self, other: &Edge) -> usize {
        let (mut i, mut j, mut c) = (0, 0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    c += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        c
    }

    pub fn is_disjoint(&self, other: &Edge) -> bool {
        self.intersection_size(other) == 0
    }

    pub fn contains_all(&self, vs: &[usize]) -> bool {
        vs.iter().all(|&v| self.contains(v))
    }

    /// Vertex bitmask (bit `v - 1` for vertex `v`); `None` past [`MASK_LIMIT`].
    pub fn mask(&self) -> Option<u128> {
        let mut m = 0u128;
        for &v in &self.0 {
            if v == 0 || v > MASK_LIMIT {
                return None;
            }
            m |= 1u128 << (v - 1);
        }
        Some(m)
    }

    pub fn from_mask(mask: u128) -> Self {
        Edge(mask_vertices(mask))
    }
}

impl std::fmt::Display for Edge {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{{}}}", self.0.iter().join(","))
    }
}

pub(crate) fn mask_vertices(mut mask: u128) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    while mask != 0 {
        let b = mask.trailing_zeros() as usize;
        out.push(b + 1);
        mask &= mask - 1;
    }
    out
}

/// A subset of `[n]`, kept sorted and duplicate-free.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new(vertices: impl IntoIterator<Item = usize>) -> Self {
        let mut v: Vec<usize> = vertices.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        VertexSet(v)
    }

    /// `{lo, lo + 1, ..., hi}`; empty when `hi < lo`.
    pub fn range(lo: usize, hi: usize) -> Self {
        VertexSet((lo..=hi).collect())
    }

    pub fn empty() -> Self {
        VertexSet(Vec::new())
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    /// `[n] \ self`.
    pub fn complement(&self, n: usize) -> Self {
        VertexSet((1..=n).filter(|v| !self.contains(*v)).collect())
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.0.iter().all(|v| !other.contains(*v))
    }

    pub fn mask(&self) -> Option<u128> {
        Edge(self.0.clone()).mask()
    }

    pub(crate) fn check_within(&self, n: usize) -> Result<()> {
        match self.0.iter().find(|&&v| v == 0 || v > n) {
            Some(&vertex) => Err(Error::VertexOutOfRange { vertex, n }),
            None => Ok(()),
        }
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        VertexSet::new(iter)
    }
}

/// A set of edge-shaped vertex sets, not tied to any particular hypergraph.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeSet(BTreeSet<Edge>);

impl EdgeSet {
    pub fn new(edges: impl IntoIterator<Item = Edge>) -> Self {
        EdgeSet(edges.into_iter().collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, e: &Edge) -> bool {
        self.0.contains(e)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Edge> {
        self.0.iter()
    }
}

impl FromIterator<Edge> for EdgeSet {
    fn from_iter<I: IntoIterator<Item = Edge>>(iter: I) -> Self {
        EdgeSet::new(iter)
    }
}

/// Map between the vertices of a derived graph (`[m]`) and the graph it was
/// derived from. New vertex `i` is old vertex `old[i - 1]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relabel {
    old: Vec<usize>,
}

impl Relabel {
    pub fn identity(n: usize) -> Self {
        Relabel { old: (1..=n).collect() }
    }

    pub fn from_old_ids(old: Vec<usize>) -> Self {
        Relabel { old }
    }

    pub fn len(&self) -> usize {
        self.old.len()
    }

    pub fn is_empty(&self) -> bool {
        self.old.is_empty()
    }

    pub fn to_old(&self, new: usize) -> usize {
        self.old[new - 1]
    }

    pub fn to_new(&self, old: usize) -> Option<usize> {
        self.old.iter().position(|&o| o == old).map(|i| i + 1)
    }

    pub fn old_ids(&self) -> &[usize] {
        &self.old
    }

    /// Maps an edge of the derived graph back to original ids.
    pub fn pull_back(&self, e: &Edge) -> Edge {
        Edge::new(e.vertices().iter().map(|&v| self.to_old(v)).collect())
    }

    /// `self` maps derived → intermediate, `inner` maps intermediate → original.
    pub fn then(&self, inner: &Relabel) -> Relabel {
        Relabel { old: self.old.iter().map(|&v| inner.to_old(v)).collect() }
    }
}

/// Immutable k-uniform hypergraph on `[n]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Hypergraph {
    n: usize,
    k: usize,
    edges: Vec<Edge>,
}

impl Hypergraph {
    /// Validates, deduplicates and canonically orders `edges`.
    pub fn build<I, E>(n: usize, k: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = E>,
        E: Into<Vec<usize>>,
    {
        check_shape(n, k)?;
        let mut out = Vec::new();
        for raw in edges {
            let raw: Vec<usize> = raw.into();
            out.push(validate_edge(n, k, raw)?);
        }
        out.sort_unstable();
        out.dedup();
        Ok(Hypergraph { n, k, edges: out })
    }

    pub fn empty(n: usize, k: usize) -> Result<Self> {
        check_shape(n, k)?;
        Ok(Hypergraph { n, k, edges: Vec::new() })
    }

    pub fn complete(n: usize, k: usize) -> Result<Self> {
        Self::from_predicate(n, k, |_| true)
    }

    /// All k-subsets of `[n]` accepted by `keep`.
    pub fn from_predicate(n: usize, k: usize, mut keep: impl FnMut(&[usize]) -> bool) -> Result<Self> {
        check_shape(n, k)?;
        let edges = k_subsets(n, k).filter(|e| keep(e)).map(Edge::from_sorted).collect();
        Ok(Hypergraph { n, k, edges })
    }

    /// Caller guarantees `edges` are valid, sorted and unique.
    pub(crate) fn from_canonical(n: usize, k: usize, edges: Vec<Edge>) -> Self {
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(edges.iter().all(|e| e.len() == k && e.vertices().iter().all(|&v| v >= 1 && v <= n)));
        Hypergraph { n, k, edges }
    }

    pub(crate) fn from_unsorted(n: usize, k: usize, mut edges: Vec<Edge>) -> Self {
        edges.sort_unstable();
        edges.dedup();
        Self::from_canonical(n, k, edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, vertices: &[usize]) -> bool {
        self.index_of(vertices).is_some()
    }

    /// Position of the edge with these (ascending) vertices.
    pub fn index_of(&self, vertices: &[usize]) -> Option<usize> {
        self.edges.binary_search_by(|e| e.vertices().cmp(vertices)).ok()
    }

    pub fn degree(&self, v: usize) -> Result<usize> {
        self.check_vertex(v)?;
        Ok(self.edges.iter().filter(|e| e.contains(v)).count())
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n + 1];
        for e in &self.edges {
            for &v in e.vertices() {
                d[v] += 1;
            }
        }
        d.remove(0);
        d
    }

    /// Number of edges containing every vertex of `t`.
    pub fn set_degree(&self, t: &[usize]) -> Result<usize> {
        if t.len() > self.k {
            return Err(Error::InvalidParameter(format!("|T| = {} exceeds k = {}", t.len(), self.k)));
        }
        for &v in t {
            self.check_vertex(v)?;
        }
        Ok(self.edges.iter().filter(|e| e.contains_all(t)).count())
    }

    /// Maximum `set_degree` over all `l`-subsets of `[n]`.
    pub fn max_l_degree(&self, l: usize) -> Result<usize> {
        if l == 0 || l > self.k {
            return Err(Error::InvalidParameter(format!("l = {l} outside 1..={}", self.k)));
        }
        let mut counts: HashMap<Vec<usize>, usize> = HashMap::new();
        for e in &self.edges {
            for sub in e.vertices().iter().copied().combinations(l) {
                *counts.entry(sub).or_default() += 1;
            }
        }
        Ok(counts.values().copied().max().unwrap_or(0))
    }

    /// `N_H(v)`: the (k-1)-sets completing `v` to an edge.
    pub fn neighborhood(&self, v: usize) -> Result<Vec<Vec<usize>>> {
        self.check_vertex(v)?;
        Ok(self
            .edges
            .iter()
            .filter(|e| e.contains(v))
            .map(|e| e.vertices().iter().copied().filter(|&u| u != v).collect())
            .collect())
    }

    /// `H[S]`, relabelled onto `[|S|]` in ascending order of `S`.
    pub fn induced(&self, s: &VertexSet) -> Result<(Hypergraph, Relabel)> {
        s.check_within(self.n)?;
        if s.len() < self.k {
            return Err(Error::InvalidParameter(format!(
                "induced subgraph on {} vertices cannot hold {}-edges",
                s.len(),
                self.k
            )));
        }
        let relabel = Relabel::from_old_ids(s.as_slice().to_vec());
        Ok((self.restrict(&relabel, |e| e.vertices().iter().all(|&v| s.contains(v))), relabel))
    }

    /// `H - S`: drop `S` and every edge meeting it, relabel the rest.
    pub fn delete_vertices(&self, s: &VertexSet) -> Result<(Hypergraph, Relabel)> {
        s.check_within(self.n)?;
        let keep = s.complement(self.n);
        if keep.len() < self.k {
            return Err(Error::InvalidParameter(format!(
                "deleting {} vertices leaves fewer than k = {}",
                s.len(),
                self.k
            )));
        }
        let relabel = Relabel::from_old_ids(keep.as_slice().to_vec());
        Ok((self.restrict(&relabel, |e| e.vertices().iter().all(|&v| !s.contains(v))), relabel))
    }

    fn restrict(&self, relabel: &Relabel, keep: impl Fn(&Edge) -> bool) -> Hypergraph {
        let mut new_of_old = vec![0usize; self.n + 1];
        for (i, &old) in relabel.old_ids().iter().enumerate() {
            new_of_old[old] = i + 1;
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| keep(e))
            .map(|e| Edge::from_sorted(e.vertices().iter().map(|&v| new_of_old[v]).collect()))
            .collect();
        // Order-preserving relabel keeps the edge list canonical.
        Hypergraph::from_canonical(relabel.len(), self.k, edges)
    }

    /// `H - F`. Returns the graph and how many listed edges were not present.
    pub fn delete_edges(&self, f: &EdgeSet) -> (Hypergraph, usize) {
        let ignored = f.iter().filter(|e| !self.contains(e.vertices())).count();
        let edges = self.edges.iter().filter(|e| !f.contains(e)).cloned().collect();
        (Hypergraph::from_canonical(self.n, self.k, edges), ignored)
    }

    /// Applies the permutation `perm` (vertex `v` becomes `perm[v - 1]`).
    pub fn permuted(&self, perm: &[usize]) -> Result<Hypergraph> {
        let mut seen = vec![false; self.n + 1];
        if perm.len() != self.n {
            return Err(Error::InvalidParameter("permutation has wrong length".into()));
        }
        for &p in perm {
            if p == 0 || p > self.n || seen[p] {
                return Err(Error::InvalidParameter(format!("{perm:?} is not a permutation of [n]")));
            }
            seen[p] = true;
        }
        let edges = self.edges.iter().map(|e| Edge::new(e.vertices().iter().map(|&v| perm[v - 1]).collect())).collect();
        Ok(Hypergraph::from_unsorted(self.n, self.k, edges))
    }

    /// Same vertex set, edges restricted to `keep`.
    pub fn filter_edges(&self, keep: impl Fn(&Edge) -> bool) -> Hypergraph {
        Hypergraph::from_canonical(self.n, self.k, self.edges.iter().filter(|e| keep(e)).cloned().collect())
    }

    pub fn is_subgraph_of(&self, other: &Hypergraph) -> bool {
        self.n == other.n && self.k == other.k && self.edges.iter().all(|e| other.contains(e.vertices()))
    }

    /// Edge masks, when `n` fits in a `u128`.
    pub fn masks(&self) -> Option<Vec<u128>> {
        self.edges.iter().map(Edge::mask).collect()
    }

    pub(crate) fn require_masks(&self) -> Result<Vec<u128>> {
        self.masks()
            .ok_or_else(|| Error::TooLarge(format!("n = {} exceeds the bitmask limit {MASK_LIMIT}", self.n)))
    }

    pub(crate) fn check_vertex(&self, v: usize) -> Result<()> {
        if v == 0 || v > self.n {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        } else {
            Ok(())
        }
    }

    /// Each k-subset of `[n]` included independently with probability `p`,
    /// visited in lexicographic order. Deterministic for a given seed.
    pub fn random(n: usize, k: usize, p: f64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!("probability {p} outside [0, 1]")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::from_predicate(n, k, |_| rng.gen::<f64>() < p)
    }
}

fn check_shape(n: usize, k: usize) -> Result<()> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!("uniformity k = {k} must be at least 2")));
    }
    if k > n {
        return Err(Error::InvalidParameter(format!("k = {k} exceeds n = {n}")));
    }
    Ok(())
}

fn validate_edge(n: usize, k: usize, mut raw: Vec<usize>) -> Result<Edge> {
    if raw.len() != k {
        return Err(Error::InvalidEdge { edge: raw, reason: format!("expected {k} vertices") });
    }
    if let Some(&v) = raw.iter().find(|&&v| v == 0 || v > n) {
        return Err(Error::VertexOutOfRange { vertex: v, n });
    }
    raw.sort_unstable();
    if raw.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidEdge { edge: raw, reason: "repeated vertex".into() });
    }
    Ok(Edge(raw))
}

/// All k-subsets of `[n]` as ascending vectors, in lexicographic order.
pub fn k_subsets(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    (1..=n).combinations(k)
}
