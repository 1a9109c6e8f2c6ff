//! Greedy cut improvement: a single-flip pass followed by an
//! edge-pair-flip pass, optionally iterated to a local optimum.

use crate::error::Error;
use crate::graph::{Cut, Graph};
use crate::Result;

fn flip_gain(g: &Graph, x: &[bool], v: u32, skip: Option<u32>) -> i64 {
    let mut gain = 0i64;
    for &w in g.neighbors(v) {
        if Some(w) == skip {
            continue;
        }
        // an uncut edge becomes cut (+1), a cut edge opens (−1)
        gain += if x[w as usize] == x[v as usize] { 1 } else { -1 };
    }
    gain
}

/// One pass of single-vertex flips in index order, then one pass of
/// edge-pair flips in edge order; each flip requires strict improvement.
pub fn local_search(g: &Graph, x: &[bool]) -> Result<Cut> {
    if x.len() != g.n() {
        return Err(Error::LengthMismatch { expected: g.n(), got: x.len() });
    }
    let mut x = x.to_vec();
    let mut value = g.cut_value(&x)? as i64;
    for v in 0..g.n() as u32 {
        let gain = flip_gain(g, &x, v, None);
        if gain > 0 {
            x[v as usize] = !x[v as usize];
            value += gain;
        }
    }
    for &(u, v) in g.edges() {
        // the (u, v) edge itself is unchanged when both endpoints flip
        let gain = flip_gain(g, &x, u, Some(v)) + flip_gain(g, &x, v, Some(u));
        if gain > 0 {
            x[u as usize] = !x[u as usize];
            x[v as usize] = !x[v as usize];
            value += gain;
        }
    }
    debug_assert_eq!(value as u64, g.cut_value(&x)?);
    Ok(Cut { assignment: x, value: value as u64 })
}

/// Repeats [`local_search`] passes until one changes nothing.
pub fn local_search_to_convergence(g: &Graph, x: &[bool]) -> Result<Cut> {
    let mut cut = local_search(g, x)?;
    loop {
        let next = local_search(g, &cut.assignment)?;
        if next.assignment == cut.assignment {
            return Ok(next);
        }
        cut = next;
    }
}
