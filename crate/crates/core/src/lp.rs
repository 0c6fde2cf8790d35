//! Dense two-phase simplex over a generic scalar.
//!
//! `f64` runs with fixed tolerances; [`BigRational`] runs exactly. Pricing is
//! Dantzig's rule, switching to Bland's rule after a run of degenerate pivots
//! so the method terminates on the heavily degenerate matching polytopes.

use std::cmp::Ordering;
use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arithmetic the simplex needs. Sign tests are tolerant for floats.
pub trait Scalar: Clone + Debug + Display + Send + Sync {
    const EXACT: bool;

    fn zero() -> Self;
    fn from_int(v: i64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Exactly zero (used to skip work, never for decisions).
    fn is_exact_zero(&self) -> bool;
    fn is_zero(&self) -> bool;
    fn is_pos(&self) -> bool;
    fn is_neg(&self) -> bool;
    fn cmp_tol(&self, o: &Self) -> Ordering;
    fn to_f64(&self) -> f64;
    /// Snap round-off noise to zero.
    fn clean(self) -> Self {
        self
    }

    fn one() -> Self {
        Self::from_int(1)
    }
}

pub const F64_EPS: f64 = 1e-10;

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn from_int(v: i64) -> Self {
        v as f64
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_exact_zero(&self) -> bool {
        *self == 0.0
    }
    fn is_zero(&self) -> bool {
        self.abs() <= F64_EPS
    }
    fn is_pos(&self) -> bool {
        *self > F64_EPS
    }
    fn is_neg(&self) -> bool {
        *self < -F64_EPS
    }
    fn cmp_tol(&self, o: &Self) -> Ordering {
        let scale = 1.0f64.max(self.abs()).max(o.abs());
        if (self - o).abs() <= 1e-12 * scale {
            Ordering::Equal
        } else {
            self.partial_cmp(o).unwrap_or(Ordering::Equal)
        }
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn clean(self) -> Self {
        if self.abs() < 1e-13 {
            0.0
        } else {
            self
        }
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn zero() -> Self {
        Zero::zero()
    }
    fn from_int(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_exact_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_pos(&self) -> bool {
        self.is_positive()
    }
    fn is_neg(&self) -> bool {
        self.is_negative()
    }
    fn cmp_tol(&self, o: &Self) -> Ordering {
        self.cmp(o)
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

impl Relation {
    fn flipped(self) -> Self {
        match self {
            Relation::Le => Relation::Ge,
            Relation::Ge => Relation::Le,
            Relation::Eq => Relation::Eq,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Constraint<T> {
    pub coeffs: Vec<(usize, T)>,
    pub relation: Relation,
    pub rhs: T,
}

/// `maximize objective · x` subject to the constraints and `x >= 0`.
#[derive(Clone, Debug)]
pub struct LinearProgram<T> {
    pub num_vars: usize,
    pub objective: Vec<T>,
    pub constraints: Vec<Constraint<T>>,
}

#[derive(Clone, Debug)]
pub struct LpSolution<T> {
    pub x: Vec<T>,
    pub value: T,
    pub pivots: usize,
    /// Largest violation of any constraint or sign bound, in `f64`.
    pub residual: f64,
}

#[derive(Clone, Debug)]
pub enum LpOutcome<T> {
    Optimal(LpSolution<T>),
    Infeasible,
    Unbounded,
}

impl<T> LpOutcome<T> {
    pub fn optimal(self) -> Option<LpSolution<T>> {
        match self {
            LpOutcome::Optimal(s) => Some(s),
            _ => None,
        }
    }
}

impl<T: Scalar> LinearProgram<T> {
    pub fn maximize(objective: Vec<T>) -> Self {
        LinearProgram { num_vars: objective.len(), objective, constraints: Vec::new() }
    }

    pub fn add(&mut self, coeffs: Vec<(usize, T)>, relation: Relation, rhs: T) {
        self.constraints.push(Constraint { coeffs, relation, rhs });
    }

    pub fn solve(&self) -> Result<LpOutcome<T>> {
        for c in &self.constraints {
            if let Some(&(j, _)) = c.coeffs.iter().find(|(j, _)| *j >= self.num_vars) {
                return Err(Error::Lp(format!("variable index {j} out of range")));
            }
        }
        let mut tab = Tableau::build(self);
        if tab.has_artificials() {
            tab.phase_one()?;
            let value = tab.obj[tab.ncol].clone();
            let infeasible = if T::EXACT {
                value.is_neg()
            } else {
                value.to_f64() < -1e-9 * (tab.m.max(1) as f64)
            };
            if infeasible {
                return Ok(LpOutcome::Infeasible);
            }
            tab.expel_artificials();
        }
        tab.load_objective(&self.objective);
        if !tab.run()? {
            return Ok(LpOutcome::Unbounded);
        }
        let mut x = vec![T::zero(); self.num_vars];
        for (i, &b) in tab.basis.iter().enumerate() {
            if b < self.num_vars {
                x[b] = tab.a[i * tab.stride + tab.ncol].clone().clean();
            }
        }
        let value = self.objective.iter().zip(&x).fold(T::zero(), |acc, (c, v)| acc.add(&c.mul(v)));
        let residual = self.residual(&x);
        Ok(LpOutcome::Optimal(LpSolution { x, value, pivots: tab.pivots, residual }))
    }

    fn residual(&self, x: &[T]) -> f64 {
        let mut worst = x.iter().map(|v| (-v.to_f64()).max(0.0)).fold(0.0, f64::max);
        for c in &self.constraints {
            let lhs: f64 = c.coeffs.iter().map(|(j, a)| a.to_f64() * x[*j].to_f64()).sum();
            let rhs = c.rhs.to_f64();
            let v = match c.relation {
                Relation::Le => lhs - rhs,
                Relation::Ge => rhs - lhs,
                Relation::Eq => (lhs - rhs).abs(),
            };
            worst = worst.max(v);
        }
        worst
    }
}

struct Tableau<T> {
    m: usize,
    ncol: usize,
    stride: usize,
    /// Row-major `m x (ncol + 1)`; last column is the right-hand side.
    a: Vec<T>,
    /// Reduced costs; last entry is the current objective value.
    obj: Vec<T>,
    basis: Vec<usize>,
    artificial: Vec<bool>,
    allowed: Vec<bool>,
    pivots: usize,
}

impl<T: Scalar> Tableau<T> {
    fn build(lp: &LinearProgram<T>) -> Self {
        let m = lp.constraints.len();
        let rows: Vec<(Vec<(usize, T)>, Relation, T)> = lp
            .constraints
            .iter()
            .map(|c| {
                if c.rhs.is_neg() {
                    (c.coeffs.iter().map(|(j, v)| (*j, v.neg())).collect(), c.relation.flipped(), c.rhs.neg())
                } else {
                    (c.coeffs.clone(), c.relation, c.rhs.clone())
                }
            })
            .collect();
        let extra: usize = rows
            .iter()
            .map(|(_, r, _)| match r {
                Relation::Le | Relation::Eq => 1,
                Relation::Ge => 2,
            })
            .sum();
        let ncol = lp.num_vars + extra;
        let stride = ncol + 1;
        let mut a = vec![T::zero(); m * stride];
        let mut basis = vec![0; m];
        let mut artificial = vec![false; ncol];
        let mut next = lp.num_vars;
        for (i, (coeffs, rel, rhs)) in rows.into_iter().enumerate() {
            let row = &mut a[i * stride..(i + 1) * stride];
            for (j, v) in coeffs {
                row[j] = row[j].add(&v);
            }
            row[ncol] = rhs;
            match rel {
                Relation::Le => {
                    row[next] = T::one();
                    basis[i] = next;
                    next += 1;
                }
                Relation::Ge => {
                    row[next] = T::from_int(-1);
                    row[next + 1] = T::one();
                    artificial[next + 1] = true;
                    basis[i] = next + 1;
                    next += 2;
                }
                Relation::Eq => {
                    row[next] = T::one();
                    artificial[next] = true;
                    basis[i] = next;
                    next += 1;
                }
            }
        }
        Tableau {
            m,
            ncol,
            stride,
            a,
            obj: vec![T::zero(); stride],
            basis,
            artificial,
            allowed: vec![true; ncol],
            pivots: 0,
        }
    }

    fn has_artificials(&self) -> bool {
        self.basis.iter().any(|&b| self.artificial[b])
    }

    fn row(&self, i: usize) -> &[T] {
        &self.a[i * self.stride..(i + 1) * self.stride]
    }

    fn phase_one(&mut self) -> Result<()> {
        let mut obj = vec![T::zero(); self.stride];
        for j in 0..self.ncol {
            if self.artificial[j] {
                obj[j] = T::one();
            }
        }
        for i in 0..self.m {
            if self.artificial[self.basis[i]] {
                let row = self.row(i);
                for (o, v) in obj.iter_mut().zip(row) {
                    *o = o.sub(v);
                }
            }
        }
        self.obj = obj;
        // phase one is bounded below by zero
        self.run().map(|_| ())
    }

    fn expel_artificials(&mut self) {
        let mut i = 0;
        while i < self.m {
            if self.artificial[self.basis[i]] {
                let col = (0..self.ncol).find(|&j| !self.artificial[j] && !self.row(i)[j].is_zero());
                match col {
                    Some(j) => self.pivot(i, j),
                    None => {
                        // redundant constraint
                        self.a.drain(i * self.stride..(i + 1) * self.stride);
                        self.basis.remove(i);
                        self.m -= 1;
                        continue;
                    }
                }
            }
            i += 1;
        }
        for j in 0..self.ncol {
            if self.artificial[j] {
                self.allowed[j] = false;
            }
        }
    }

    fn load_objective(&mut self, c: &[T]) {
        let mut obj = vec![T::zero(); self.stride];
        for (j, cj) in c.iter().enumerate() {
            obj[j] = cj.neg();
        }
        for i in 0..self.m {
            let b = self.basis[i];
            if b < c.len() && !c[b].is_exact_zero() {
                let cb = c[b].clone();
                let row = self.row(i);
                for (o, v) in obj.iter_mut().zip(row) {
                    if !v.is_exact_zero() {
                        *o = o.add(&cb.mul(v));
                    }
                }
            }
        }
        self.obj = obj;
    }

    /// Primal simplex on the current objective row. `Ok(false)` = unbounded.
    fn run(&mut self) -> Result<bool> {
        let limit = 200_000 + 50 * (self.m + self.ncol);
        let mut degenerate = 0usize;
        for _ in 0..limit {
            let bland = degenerate > 50;
            let Some(col) = self.entering(bland) else {
                return Ok(true);
            };
            let Some(row) = self.leaving(col, bland) else {
                return Ok(false);
            };
            if self.row(row)[self.ncol].is_zero() {
                degenerate += 1;
            } else {
                degenerate = 0;
            }
            self.pivot(row, col);
        }
        Err(Error::Lp(format!("no convergence after {limit} pivots")))
    }

    fn entering(&self, bland: bool) -> Option<usize> {
        let mut best: Option<usize> = None;
        for j in 0..self.ncol {
            if !self.allowed[j] || !self.obj[j].is_neg() {
                continue;
            }
            if bland {
                return Some(j);
            }
            if best.is_none_or(|b| self.obj[j].cmp_tol(&self.obj[b]) == Ordering::Less) {
                best = Some(j);
            }
        }
        best
    }

    fn leaving(&self, col: usize, bland: bool) -> Option<usize> {
        let mut best: Option<(usize, T)> = None;
        for i in 0..self.m {
            let row = self.row(i);
            let piv = &row[col];
            if !piv.is_pos() {
                continue;
            }
            let ratio = row[self.ncol].div(piv);
            let take = match &best {
                None => true,
                Some((bi, br)) => match ratio.cmp_tol(br) {
                    Ordering::Less => true,
                    Ordering::Greater => false,
                    Ordering::Equal => {
                        if bland {
                            self.basis[i] < self.basis[*bi]
                        } else {
                            // prefer the larger pivot element
                            piv.to_f64().abs() > self.row(*bi)[col].to_f64().abs()
                        }
                    }
                },
            };
            if take {
                best = Some((i, ratio));
            }
        }
        best.map(|(i, _)| i)
    }

    fn pivot(&mut self, r: usize, c: usize) {
        self.pivots += 1;
        let stride = self.stride;
        let p = self.a[r * stride + c].clone();
        for j in 0..stride {
            let v = &self.a[r * stride + j];
            if !v.is_exact_zero() {
                self.a[r * stride + j] = v.div(&p).clean();
            }
        }
        self.a[r * stride + c] = T::one();
        let pivot_row: Vec<T> = self.a[r * stride..(r + 1) * stride].to_vec();
        let nz: Vec<usize> = (0..stride).filter(|&j| !pivot_row[j].is_exact_zero()).collect();
        for i in 0..self.m {
            if i == r {
                continue;
            }
            let f = self.a[i * stride + c].clone();
            if f.is_exact_zero() {
                continue;
            }
            let row = &mut self.a[i * stride..(i + 1) * stride];
            for &j in &nz {
                row[j] = row[j].sub(&f.mul(&pivot_row[j])).clean();
            }
            row[c] = T::zero();
        }
        let f = self.obj[c].clone();
        if !f.is_exact_zero() {
            for &j in &nz {
                self.obj[j] = self.obj[j].sub(&f.mul(&pivot_row[j])).clean();
            }
            self.obj[c] = T::zero();
        }
        self.basis[r] = c;
    }
}
