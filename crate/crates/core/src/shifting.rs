//! The (i,j)-shift, stabilization by repeated sweeps, and stability tests.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{Edge, Hypergraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftStep {
    pub i: usize,
    pub j: usize,
    pub moved: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftTrace {
    pub steps: Vec<ShiftStep>,
    /// Full sweeps, including the final one that moves nothing.
    pub rounds: usize,
    pub potential_start: u64,
    pub potential_end: u64,
}

/// Σ over edges of the sum of their vertex labels.
pub fn potential(h: &Hypergraph) -> u64 {
    h.edges().iter().map(|e| e.vertices().iter().map(|&v| v as u64).sum::<u64>()).sum()
}

fn check_pair(h: &Hypergraph, i: usize, j: usize) -> Result<()> {
    if i == 0 || i >= j || j > h.n() {
        return Err(Error::InvalidParameter(format!("shift needs 1 <= i < j <= n, got i={i}, j={j}")));
    }
    Ok(())
}

fn replaced(e: &Edge, i: usize, j: usize) -> Edge {
    let mut vs: Vec<usize> = e.vertices().iter().map(|&v| if v == j { i } else { v }).collect();
    vs.sort_unstable();
    Edge::new(vs)
}

/// The image of `e` under the (i,j)-shift of `h`.
pub fn shift_edge(h: &Hypergraph, i: usize, j: usize, e: &Edge) -> Result<Edge> {
    check_pair(h, i, j)?;
    if !h.contains(e.vertices()) {
        return Err(Error::InvalidEdge { edge: e.vertices().to_vec(), reason: "not an edge of the graph".into() });
    }
    Ok(image(h, i, j, e))
}

fn image(h: &Hypergraph, i: usize, j: usize, e: &Edge) -> Edge {
    if !e.contains(j) || e.contains(i) {
        return e.clone();
    }
    let r = replaced(e, i, j);
    if h.contains(r.vertices()) {
        e.clone()
    } else {
        r
    }
}

/// The simultaneous image of every edge, plus how many edges moved.
pub fn shift_graph(h: &Hypergraph, i: usize, j: usize) -> Result<(Hypergraph, usize)> {
    check_pair(h, i, j)?;
    // Blocking is decided against the original edge set, so compute every
    // image before building the result.
    let images: Vec<Edge> = h.edges().iter().map(|e| image(h, i, j, e)).collect();
    let moved = images.iter().zip(h.edges()).filter(|(a, b)| a != b).count();
    if moved == 0 {
        return Ok((h.clone(), 0));
    }
    Ok((Hypergraph::from_unsorted(h.n(), h.k(), images), moved))
}

/// Sweeps all pairs (i,j) in lexicographic order until a sweep moves nothing.
pub fn stabilize(h: &Hypergraph) -> (Hypergraph, ShiftTrace) {
    let mut cur = h.clone();
    let mut trace = ShiftTrace { potential_start: potential(h), ..Default::default() };
    loop {
        trace.rounds += 1;
        let mut any = false;
        for i in 1..h.n() {
            for j in i + 1..=h.n() {
                let (next, moved) = shift_graph(&cur, i, j).expect("pair is in range");
                debug_assert_eq!(potential(&cur) - potential(&next), (moved * (j - i)) as u64);
                trace.steps.push(ShiftStep { i, j, moved });
                any |= moved > 0;
                cur = next;
            }
        }
        if !any {
            break;
        }
    }
    trace.potential_end = potential(&cur);
    (cur, trace)
}

/// True iff every (i,j)-shift fixes `h`.
pub fn is_stable(h: &Hypergraph) -> bool {
    (1..h.n()).all(|i| {
        (i + 1..=h.n()).all(|j| {
            h.edges().iter().all(|e| !e.contains(j) || e.contains(i) || h.contains(replaced(e, i, j).vertices()))
        })
    })
}

/// Down-set test: lowering any one vertex of an edge to a free smaller label
/// stays inside `h`. Closure under these single steps is closure under
/// componentwise domination.
pub fn downset_check(h: &Hypergraph) -> bool {
    h.edges().iter().all(|e| {
        e.vertices().iter().all(|&v| v == 1 || e.contains(v - 1) || h.contains(replaced(e, v - 1, v).vertices()))
    })
}
