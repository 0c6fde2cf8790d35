//! Extremal families and their closed-form edge counts.
//!
//! Canonical labelings: the cover family uses `W = [s]`, the clique family
//! `U = [k(s+1) - 1]`, the HM family `[s-1]`, the vertex `s` and
//! `S = {s+1, ..., s+k}`. Use [`Hypergraph::permuted`] for other labelings.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{Edge, Hypergraph, VertexSet};
use crate::report::decimal;

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `C(n,k) - C(n-s,k)`: edges meeting an `s`-set.
pub fn cover_count(n: usize, k: usize, s: usize) -> BigUint {
    binomial(n, k) - binomial(n.saturating_sub(s), k)
}

/// `C(k(s+1)-1, k)`.
pub fn clique_count(k: usize, s: usize) -> BigUint {
    binomial(k * (s + 1) - 1, k)
}

/// `C(n,k) - C(n-s,k) - C(n-s-k,k-1) + 1`, for `n >= s + k`.
pub fn hm_count(n: usize, k: usize, s: usize) -> BigUint {
    let v: BigInt = BigInt::from(binomial(n, k)) - BigInt::from(binomial(n - s, k)) - BigInt::from(binomial(n - s - k, k - 1))
        + BigInt::from(1u8);
    v.to_biguint().expect("HM count is non-negative for n >= s + k")
}

/// `|A^k_i(n,s)| = sum_{j=i..k} C(u,j) C(n-u,k-j)` with `u = (s+1)i - 1`.
pub fn a_count(n: usize, k: usize, s: usize, i: usize) -> BigUint {
    let u = (s + 1) * i - 1;
    (i..=k).map(|j| binomial(u, j) * binomial(n - u, k - j)).sum()
}

/// Every k-set meeting `w`.
pub fn gen_cover_family(n: usize, k: usize, s: usize, w: &VertexSet) -> Result<Hypergraph> {
    w.check_within(n)?;
    if w.len() != s {
        return Err(Error::InvalidParameter(format!("|W| = {} but s = {s}", w.len())));
    }
    Hypergraph::from_predicate(n, k, |e| e.iter().any(|&v| w.contains(v)))
}

/// Complete k-graph on `u`, with `|u| = k(s+1) - 1`.
pub fn gen_clique_family(n: usize, k: usize, s: usize, u: &VertexSet) -> Result<Hypergraph> {
    u.check_within(n)?;
    let want = k * (s + 1) - 1;
    if u.len() != want {
        return Err(Error::InvalidParameter(format!("|U| = {} but k(s+1)-1 = {want}", u.len())));
    }
    Hypergraph::from_predicate(n, k, |e| e.iter().all(|&v| u.contains(v)))
}

pub fn gen_hm_family(n: usize, k: usize, s: usize) -> Result<Hypergraph> {
    if s == 0 || n < s + k {
        return Err(Error::InvalidParameter(format!("HM family needs s >= 1 and n >= s + k (n={n}, k={k}, s={s})")));
    }
    let big_s = s + 1..=s + k;
    Hypergraph::from_predicate(n, k, |e| {
        let meets_small = e[0] < s;
        let is_s = e.iter().copied().eq(big_s.clone());
        let star = e.contains(&s) && e.iter().any(|v| big_s.contains(v));
        meets_small || is_s || star
    })
}

/// Edges meeting `[(s+1)i - 1]` in at least `i` vertices.
pub fn gen_a_family(n: usize, k: usize, s: usize, i: usize) -> Result<Hypergraph> {
    if i < 2 || i > k {
        return Err(Error::InvalidParameter(format!("i = {i} outside 2..={k}")));
    }
    let u = (s + 1) * i - 1;
    if u > n {
        return Err(Error::InvalidParameter(format!("(s+1)i-1 = {u} exceeds n = {n}")));
    }
    Hypergraph::from_predicate(n, k, |e| e.iter().filter(|&&v| v <= u).count() >= i)
}

/// `H_r^k`: adds `r` universal vertices `n+1..=n+r` and every k-set meeting them.
pub fn augment_universal(h: &Hypergraph, r: usize) -> Hypergraph {
    let (n, k) = (h.n(), h.k());
    let mut edges: Vec<Edge> = h.edges().to_vec();
    edges.extend(crate::hypergraph::k_subsets(n + r, k).filter(|e| e[k - 1] > n).map(Edge::from_sorted));
    // new edges interleave lexicographically with the old ones
    Hypergraph::from_unsorted(n + r, k, edges)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Cover,
    Clique,
    Hm,
    A(usize),
}

/// The canonical member of `family`.
pub fn generate(family: Family, n: usize, k: usize, s: usize) -> Result<Hypergraph> {
    match family {
        Family::Cover => gen_cover_family(n, k, s, &VertexSet::range(1, s)),
        Family::Clique => gen_clique_family(n, k, s, &VertexSet::range(1, k * (s + 1) - 1)),
        Family::Hm => gen_hm_family(n, k, s),
        Family::A(i) => gen_a_family(n, k, s, i),
    }
}

/// Closed-form count for the canonical member of `family`.
pub fn family_count(family: Family, n: usize, k: usize, s: usize) -> BigUint {
    match family {
        Family::Cover => cover_count(n, k, s),
        Family::Clique => clique_count(k, s),
        Family::Hm => hm_count(n, k, s),
        Family::A(i) => a_count(n, k, s, i),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub n: usize,
    pub k: usize,
    pub s: usize,
    #[serde(with = "decimal")]
    pub cover_bound: BigUint,
    #[serde(with = "decimal")]
    pub clique_bound: BigUint,
    #[serde(with = "decimal")]
    pub hm_bound: BigUint,
    /// `|A^k_i(n,s)|` for `i = 2..=k-1`.
    #[serde(with = "decimal::vec")]
    pub a_bounds: Vec<BigUint>,
    /// Max over `hm_bound`, `clique_bound` and `a_bounds`.
    #[serde(with = "decimal")]
    pub max_nontrivial: BigUint,
    /// `max{cover_bound, clique_bound}`, the bound for `nu <= s` alone.
    #[serde(with = "decimal")]
    pub matching_bound: BigUint,
}

impl BoundReport {
    /// `max{hm_bound, clique_bound}`: the k = 3 bound under `nu <= s < tau`.
    pub fn hm_clique_max(&self) -> &BigUint {
        (&self.hm_bound).max(&self.clique_bound)
    }
}

pub fn bound_report(n: usize, k: usize, s: usize) -> Result<BoundReport> {
    if k < 2 || s == 0 || n < k * s + k - 1 {
        return Err(Error::InvalidParameter(format!("bounds need k >= 2, s >= 1, n >= ks+k-1 (n={n}, k={k}, s={s})")));
    }
    let cover_bound = cover_count(n, k, s);
    let clique_bound = clique_count(k, s);
    let hm_bound = hm_count(n, k, s);
    let a_bounds: Vec<BigUint> = (2..k).map(|i| a_count(n, k, s, i)).collect();
    let max_nontrivial = a_bounds.iter().chain([&hm_bound, &clique_bound]).max().cloned().unwrap_or_default();
    let matching_bound = (&cover_bound).max(&clique_bound).clone();
    Ok(BoundReport { n, k, s, cover_bound, clique_bound, hm_bound, a_bounds, max_nontrivial, matching_bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::k_subsets;

    fn n(v: u64) -> BigUint {
        BigUint::from(v)
    }

    /// Counting oracle: enumerate k-subsets and count by predicate.
    fn count(nv: usize, k: usize, pred: impl Fn(&[usize]) -> bool) -> usize {
        k_subsets(nv, k).filter(|e| pred(e)).count()
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(10, 3), n(120));
        assert_eq!(binomial(3, 5), n(0));
        assert_eq!(binomial(0, 0), n(1));
        assert_eq!(binomial(2000, 3), n(1_331_334_000));
        assert_eq!(binomial(100, 50).to_string(), "100891344545564193334812497256");
    }

    #[test]
    fn cover_family_examples() {
        let h = gen_cover_family(9, 3, 2, &VertexSet::new([1, 2])).unwrap();
        assert_eq!(h.edge_count(), count(9, 3, |e| e.contains(&1) || e.contains(&2)));
        assert_eq!(h.edge_count(), 49);
        assert!(gen_cover_family(9, 3, 0, &VertexSet::empty()).unwrap().is_empty());
        assert_eq!(gen_cover_family(6, 3, 6, &VertexSet::range(1, 6)).unwrap().edge_count(), 20);
        assert!(gen_cover_family(9, 3, 3, &VertexSet::new([1, 2])).is_err());
    }

    #[test]
    fn clique_family_examples() {
        let h = gen_clique_family(10, 3, 2, &VertexSet::range(1, 8)).unwrap();
        assert_eq!(h.edge_count(), 56);
        assert_eq!(gen_clique_family(10, 3, 0, &VertexSet::range(1, 2)).unwrap().edge_count(), 0);
        assert_eq!(gen_clique_family(10, 2, 1, &VertexSet::range(1, 3)).unwrap().edge_count(), 3);
        assert!(gen_clique_family(10, 3, 2, &VertexSet::range(1, 7)).is_err());
    }

    #[test]
    fn hm_family_examples() {
        let h = gen_hm_family(10, 3, 2).unwrap();
        // [1] ∪ {3,4,5} ∪ star at 2 through S, counted by brute force
        let oracle = count(10, 3, |e| {
            e.contains(&1) || e == [3, 4, 5] || (e.contains(&2) && e.iter().any(|v| (3..=5).contains(v)))
        });
        assert_eq!(oracle, 55);
        assert_eq!(h.edge_count(), 55);
        assert_eq!(hm_count(10, 3, 2), n(55));
        // s = 1: Hilton–Milner
        let hm = gen_hm_family(7, 3, 1).unwrap();
        let oracle = count(7, 3, |e| e == [2, 3, 4] || (e.contains(&1) && e.iter().any(|v| (2..=4).contains(v))));
        assert_eq!(oracle, 13);
        assert_eq!(hm.edge_count(), 13);
        assert_eq!(binomial(6, 2) - binomial(3, 2) + 1u32, n(13));
        assert!(gen_hm_family(4, 3, 2).is_err());
    }

    #[test]
    fn a_family_examples() {
        let h = gen_a_family(10, 3, 2, 2).unwrap();
        assert_eq!(h.edge_count(), count(10, 3, |e| e.iter().filter(|&&v| v <= 5).count() >= 2));
        assert_eq!(h.edge_count(), 60);
        let top = gen_a_family(10, 3, 2, 3).unwrap();
        assert_eq!(top, gen_clique_family(10, 3, 2, &VertexSet::range(1, 8)).unwrap());
        assert!(gen_a_family(10, 3, 2, 1).is_err());
        assert!(gen_a_family(7, 3, 2, 3).is_err());
    }

    #[test]
    fn augmentation_examples() {
        let h = gen_hm_family(10, 3, 2).unwrap();
        assert_eq!(augment_universal(&h, 0), h);
        let g = augment_universal(&Hypergraph::empty(3, 3).unwrap(), 1);
        assert_eq!(g.n(), 4);
        assert_eq!(g.edge_count(), 3);
        let g = augment_universal(&h, 3);
        assert_eq!(BigUint::from(g.edge_count()), BigUint::from(h.edge_count()) + binomial(13, 3) - binomial(10, 3));
        let cover = gen_cover_family(13, 3, 3, &VertexSet::range(11, 13)).unwrap();
        assert!(cover.is_subgraph_of(&g));
        assert!(g.edges().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn hm_minus_small_side() {
        let h = gen_hm_family(10, 3, 2).unwrap();
        let (g, _) = h.delete_vertices(&VertexSet::new([1, 2])).unwrap();
        let oracle = h.edges().iter().filter(|e| !e.contains(1) && !e.contains(2)).count();
        assert_eq!(g.edge_count(), oracle);
        assert_eq!(oracle, 1);
    }

    #[test]
    fn bound_report_examples() {
        let r = bound_report(10, 3, 2).unwrap();
        assert_eq!((r.cover_bound.clone(), r.clique_bound.clone(), r.hm_bound.clone()), (n(64), n(56), n(55)));
        assert_eq!(r.a_bounds, vec![n(60)]);
        assert_eq!(r.max_nontrivial, n(60));
        assert_eq!(r.hm_clique_max(), &n(56));

        let r = bound_report(6, 3, 1).unwrap();
        assert_eq!((r.hm_bound.clone(), r.clique_bound.clone()), (n(10), n(10)));

        let r = bound_report(9, 2, 3).unwrap();
        assert_eq!(r.cover_bound, binomial(9, 2) - binomial(6, 2));
        assert_eq!(r.clique_bound, binomial(7, 2));
        assert!(r.a_bounds.is_empty());

        assert!(bound_report(7, 3, 2).is_err());
        assert!(bound_report(7, 3, 0).is_err());
    }

    #[test]
    fn hm_is_cover_minus_star_plus_s() {
        for (nv, k, s) in [(10, 3, 2), (9, 3, 1), (12, 4, 2), (8, 2, 3)] {
            let cover = generate(Family::Cover, nv, k, s).unwrap();
            let hm = generate(Family::Hm, nv, k, s).unwrap();
            let lost = cover.edges().iter().filter(|e| !hm.contains(e.vertices())).count();
            let gained = hm.edges().iter().filter(|e| !cover.contains(e.vertices())).count();
            assert_eq!(gained, 1);
            assert_eq!(BigUint::from(lost), binomial(nv - s - k, k - 1));
            assert_eq!(cover.edge_count() - hm.edge_count() + 1, lost);
        }
    }
}
