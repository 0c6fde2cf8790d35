//! Fractional matchings and covers via the simplex in [`crate::lp`].
//!
//! ν* and τ* are solved as two separate programs (a packing LP and a
//! covering LP), so [`check_duality`] compares two independent computations.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::lp::{LinearProgram, LpOutcome, Relation, Scalar};

/// Float results must satisfy constraints to within this.
pub const FEASIBILITY_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AssignmentKind {
    Matching,
    Cover,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LpMode {
    #[default]
    Float,
    Rational,
}

/// Edge weights (kind `Matching`, indexed like `h.edges()`) or vertex
/// weights (kind `Cover`, index `v - 1`).
#[derive(Clone, Debug, PartialEq)]
pub struct FractionalAssignment<T> {
    pub kind: AssignmentKind,
    pub weights: Vec<T>,
    pub value: T,
}

impl<T: Scalar> FractionalAssignment<T> {
    pub fn matching(weights: Vec<T>) -> Self {
        let value = sum(&weights);
        FractionalAssignment { kind: AssignmentKind::Matching, weights, value }
    }

    pub fn cover(weights: Vec<T>) -> Self {
        let value = sum(&weights);
        FractionalAssignment { kind: AssignmentKind::Cover, weights, value }
    }

    /// `Σ_{e ∋ v} f(e)` for every vertex (matching kind).
    pub fn vertex_loads(&self, h: &Hypergraph) -> Vec<T> {
        let mut loads = vec![T::zero(); h.n()];
        for (e, w) in h.edges().iter().zip(&self.weights) {
            if w.is_exact_zero() {
                continue;
            }
            for &v in e.vertices() {
                loads[v - 1] = loads[v - 1].add(w);
            }
        }
        loads
    }

    /// `Σ_{v ∈ e} w(v)` for every edge of `h` (cover kind).
    pub fn edge_sums(&self, h: &Hypergraph) -> Vec<T> {
        h.edges().iter().map(|e| sum_over(e.vertices(), &self.weights)).collect()
    }

    pub fn validate(&self, h: &Hypergraph) -> Result<()> {
        let tol = if T::EXACT { 0.0 } else { FEASIBILITY_TOL };
        let expected = match self.kind {
            AssignmentKind::Matching => h.edge_count(),
            AssignmentKind::Cover => h.n(),
        };
        if self.weights.len() != expected {
            return Err(Error::InvalidCertificate(format!(
                "{} weights for {expected} {:?} slots",
                self.weights.len(),
                self.kind
            )));
        }
        if let Some(w) = self.weights.iter().find(|w| w.to_f64() < -tol || (T::EXACT && w.is_neg())) {
            return Err(Error::InvalidCertificate(format!("negative weight {w}")));
        }
        match self.kind {
            AssignmentKind::Matching => {
                for (v, load) in self.vertex_loads(h).iter().enumerate() {
                    let over = load.sub(&T::one());
                    if over.to_f64() > tol || (T::EXACT && over.is_pos()) {
                        return Err(Error::InvalidCertificate(format!("vertex {} carries load {load}", v + 1)));
                    }
                }
            }
            AssignmentKind::Cover => {
                for (e, s) in h.edges().iter().zip(self.edge_sums(h)) {
                    let short = T::one().sub(&s);
                    if short.to_f64() > tol || (T::EXACT && short.is_pos()) {
                        return Err(Error::InvalidCertificate(format!("edge {e} only receives {s}")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn to_f64(&self) -> FractionalAssignment<f64> {
        FractionalAssignment {
            kind: self.kind,
            weights: self.weights.iter().map(Scalar::to_f64).collect(),
            value: self.value.to_f64(),
        }
    }

    /// Serializable view with each weight as text plus a float approximation.
    pub fn report(&self, h: &Hypergraph) -> FractionalReport {
        let entries = self
            .weights
            .iter()
            .enumerate()
            .filter(|(_, w)| !w.is_zero())
            .map(|(i, w)| WeightEntry {
                key: match self.kind {
                    AssignmentKind::Matching => h.edges()[i].vertices().to_vec(),
                    AssignmentKind::Cover => vec![i + 1],
                },
                weight: w.to_string(),
                approx: w.to_f64(),
            })
            .collect();
        FractionalReport { kind: self.kind, value: self.value.to_string(), approx: self.value.to_f64(), entries }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FractionalReport {
    pub kind: AssignmentKind,
    pub value: String,
    pub approx: f64,
    pub entries: Vec<WeightEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightEntry {
    pub key: Vec<usize>,
    pub weight: String,
    pub approx: f64,
}

fn sum<T: Scalar>(ws: &[T]) -> T {
    ws.iter().fold(T::zero(), |a, w| a.add(w))
}

fn sum_over<T: Scalar>(vs: &[usize], ws: &[T]) -> T {
    vs.iter().fold(T::zero(), |a, &v| a.add(&ws[v - 1]))
}

/// Maximum fractional matching: `max Σ f(e)` with `Σ_{e∋v} f(e) ≤ 1`.
pub fn nu_frac<T: Scalar>(h: &Hypergraph) -> Result<FractionalAssignment<T>> {
    if h.is_empty() {
        return Ok(FractionalAssignment::matching(Vec::new()));
    }
    let mut lp = LinearProgram::maximize(vec![T::one(); h.edge_count()]);
    let mut incident: Vec<Vec<(usize, T)>> = vec![Vec::new(); h.n()];
    for (j, e) in h.edges().iter().enumerate() {
        for &v in e.vertices() {
            incident[v - 1].push((j, T::one()));
        }
    }
    for row in incident.into_iter().filter(|r| !r.is_empty()) {
        lp.add(row, Relation::Le, T::one());
    }
    let sol = solved(lp.solve()?, "fractional matching")?;
    Ok(FractionalAssignment::matching(sol.x))
}

/// Minimum fractional vertex cover: `min Σ w(v)` with `Σ_{v∈e} w(v) ≥ 1`.
pub fn tau_frac<T: Scalar>(h: &Hypergraph) -> Result<FractionalAssignment<T>> {
    if h.is_empty() {
        return Ok(FractionalAssignment::cover(vec![T::zero(); h.n()]));
    }
    let mut lp = LinearProgram::maximize(vec![T::from_int(-1); h.n()]);
    for e in h.edges() {
        lp.add(e.vertices().iter().map(|&v| (v - 1, T::one())).collect(), Relation::Ge, T::one());
    }
    let sol = solved(lp.solve()?, "fractional cover")?;
    Ok(FractionalAssignment::cover(sol.x))
}

fn solved<T>(outcome: LpOutcome<T>, what: &str) -> Result<crate::lp::LpSolution<T>> {
    match outcome {
        LpOutcome::Optimal(s) => Ok(s),
        LpOutcome::Infeasible => Err(Error::Lp(format!("{what} program reported infeasible"))),
        LpOutcome::Unbounded => Err(Error::Lp(format!("{what} program reported unbounded"))),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualityReport {
    pub exact: bool,
    pub nu_star: String,
    pub tau_star: String,
    pub nu_star_approx: f64,
    pub tau_star_approx: f64,
    pub gap: f64,
}

/// Solves both programs and insists on `ν* = τ*` (exactly in rational mode,
/// within [`FEASIBILITY_TOL`] in float mode).
pub fn check_duality(h: &Hypergraph, mode: LpMode) -> Result<DualityReport> {
    fn run<T: Scalar>(h: &Hypergraph) -> Result<DualityReport> {
        let nu = nu_frac::<T>(h)?;
        let tau = tau_frac::<T>(h)?;
        nu.validate(h)?;
        tau.validate(h)?;
        let diff = nu.value.sub(&tau.value);
        let gap = diff.to_f64().abs();
        let equal = if T::EXACT { diff.is_exact_zero() } else { gap <= FEASIBILITY_TOL };
        if !equal {
            return Err(Error::Lp(format!("duality gap: nu* = {}, tau* = {}", nu.value, tau.value)));
        }
        Ok(DualityReport {
            exact: T::EXACT,
            nu_star: nu.value.to_string(),
            tau_star: tau.value.to_string(),
            nu_star_approx: nu.value.to_f64(),
            tau_star_approx: tau.value.to_f64(),
            gap,
        })
    }
    match mode {
        LpMode::Float => run::<f64>(h),
        LpMode::Rational => run::<BigRational>(h),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::from_ratio(n, d)
    }

    #[test]
    fn complete_four_vertices() {
        let k4 = Hypergraph::complete(4, 3).unwrap();
        let nu = nu_frac::<BigRational>(&k4).unwrap();
        nu.validate(&k4).unwrap();
        assert_eq!(nu.value, q(4, 3));
        let tau = tau_frac::<BigRational>(&k4).unwrap();
        tau.validate(&k4).unwrap();
        assert_eq!(tau.value, q(4, 3));
        assert!(tau.weights.iter().all(|w| *w == q(1, 3)));
        let r = check_duality(&k4, LpMode::Rational).unwrap();
        assert_eq!((r.nu_star.as_str(), r.tau_star.as_str()), ("4/3", "4/3"));
    }

    #[test]
    fn trivial_graphs() {
        let one = Hypergraph::build(5, 3, [vec![1, 2, 3]]).unwrap();
        assert_eq!(nu_frac::<BigRational>(&one).unwrap().value, q(1, 1));
        assert_eq!(tau_frac::<BigRational>(&one).unwrap().value, q(1, 1));
        let empty = Hypergraph::empty(5, 3).unwrap();
        assert_eq!(nu_frac::<f64>(&empty).unwrap().value, 0.0);
        assert_eq!(tau_frac::<f64>(&empty).unwrap().value, 0.0);
        let r = check_duality(&empty, LpMode::Rational).unwrap();
        assert_eq!(r.nu_star, "0");
    }

    #[test]
    fn float_duality_on_random_graphs() {
        for seed in 0..10 {
            let h = Hypergraph::random(10, 3, 0.3, seed).unwrap();
            let r = check_duality(&h, LpMode::Float).unwrap();
            assert!(r.gap <= 1e-9);
        }
    }

    #[test]
    fn validation_rejects_overloads() {
        let k4 = Hypergraph::complete(4, 3).unwrap();
        let f = FractionalAssignment::matching(vec![q(1, 2); 4]);
        assert!(f.validate(&k4).is_err());
        let w = FractionalAssignment::cover(vec![q(1, 4); 4]);
        assert!(w.validate(&k4).is_err());
        let short = FractionalAssignment::matching(vec![q(1, 3); 3]);
        assert!(short.validate(&k4).is_err());
    }

    #[test]
    fn report_lists_nonzero_weights() {
        let k4 = Hypergraph::complete(4, 3).unwrap();
        let r = tau_frac::<BigRational>(&k4).unwrap().report(&k4);
        assert_eq!(r.entries.len(), 4);
        assert_eq!(r.entries[0].weight, "1/3");
        assert_eq!(r.value, "4/3");
    }
}
