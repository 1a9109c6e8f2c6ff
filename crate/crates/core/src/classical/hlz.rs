//! Degree-3 local improvement using three move types on the graph of
//! unsatisfied (uncut) edges: single flips of fully-unsatisfied
//! vertices, and alternating flips along paths and cycles of vertices
//! with exactly two same-side neighbors.

use crate::error::Error;
use crate::graph::{Cut, Graph};
use crate::Result;

/// Neighbors of `v` on the same side, i.e. its unsatisfied edges.
fn u_neighbors(g: &Graph, x: &[bool], v: u32) -> Vec<u32> {
    g.neighbors(v).iter().copied().filter(|&w| x[w as usize] == x[v as usize]).collect()
}

/// Exact cut change from flipping `set` simultaneously.
fn flip_delta(g: &Graph, x: &[bool], set: &[u32]) -> i64 {
    let mut in_set = vec![false; g.n()];
    for &v in set {
        in_set[v as usize] = true;
    }
    let mut delta = 0i64;
    for &v in set {
        for &w in g.neighbors(v) {
            if in_set[w as usize] {
                continue; // both endpoints flip, edge unchanged; visited twice
            }
            delta += if x[w as usize] == x[v as usize] { 1 } else { -1 };
        }
    }
    delta
}

fn apply_flips(x: &mut [bool], set: &[u32]) {
    for &v in set {
        x[v as usize] = !x[v as usize];
    }
}

/// All three neighbors exist and sit on v's side.
fn is_v3(g: &Graph, x: &[bool], v: u32) -> bool {
    let nb = g.neighbors(v);
    nb.len() == 3 && nb.iter().all(|&w| x[w as usize] == x[v as usize])
}

/// Exactly two neighbors on v's side.
fn is_v2(g: &Graph, x: &[bool], v: u32) -> bool {
    u_neighbors(g, x, v).len() == 2
}

/// Move (a): flip the fully-unsatisfied vertex with the fewest
/// fully-unsatisfied neighbors, ties to the lowest index.
fn try_move_a(g: &Graph, x: &mut [bool], value: &mut u64) -> bool {
    let v3: Vec<u32> = (0..g.n() as u32).filter(|&v| is_v3(g, x, v)).collect();
    let Some(&pick) = v3.iter().min_by_key(|&&v| {
        g.neighbors(v).iter().filter(|&&w| is_v3(g, x, w)).count()
    }) else {
        return false;
    };
    debug_assert_eq!(flip_delta(g, x, &[pick]), 3);
    x[pick as usize] = !x[pick as usize];
    *value += 3;
    true
}

/// Walks the chain of degree-2 unsatisfied vertices starting from
/// `first` with predecessor `prev`; returns the internals and the far
/// endpoint (which is not V₂), or None if the walk closes on `prev`.
fn walk_chain(g: &Graph, x: &[bool], prev: u32, first: u32) -> Option<(Vec<u32>, u32)> {
    let start = prev;
    let mut prev = prev;
    let mut cur = first;
    let mut internals = Vec::new();
    for _ in 0..=g.n() {
        if !is_v2(g, x, cur) {
            return Some((internals, cur));
        }
        internals.push(cur);
        let nb = u_neighbors(g, x, cur);
        let next = if nb[0] == prev { nb[1] } else { nb[0] };
        if next == start {
            return None; // closed back on the starting endpoint
        }
        prev = cur;
        cur = next;
    }
    None
}

/// Move (b): along a path u → v₁ → … → v_k → w of unsatisfied edges with
/// all internals V₂ and neither endpoint V₂, flip v₁, v₃, …
fn try_move_b(g: &Graph, x: &mut [bool], value: &mut u64) -> bool {
    for &(a, b) in g.edges() {
        if x[a as usize] != x[b as usize] {
            continue;
        }
        for (u, v) in [(a, b), (b, a)] {
            if is_v2(g, x, u) || !is_v2(g, x, v) {
                continue;
            }
            let Some((internals, w)) = walk_chain(g, x, u, v) else {
                continue;
            };
            if is_v2(g, x, w) || internals.is_empty() {
                continue;
            }
            let flips: Vec<u32> = internals.iter().step_by(2).copied().collect();
            let delta = flip_delta(g, x, &flips);
            if delta > 0 {
                apply_flips(x, &flips);
                *value = (*value as i64 + delta) as u64;
                return true;
            }
        }
    }
    false
}

/// Move (c): around a cycle v₁ → … → v_k → v₁ of unsatisfied edges with
/// every vertex V₂, flip v₂, v₄, …
fn try_move_c(g: &Graph, x: &mut [bool], value: &mut u64) -> bool {
    let mut seen = vec![false; g.n()];
    for s in 0..g.n() as u32 {
        if seen[s as usize] || !is_v2(g, x, s) {
            continue;
        }
        let nb = u_neighbors(g, x, s);
        let mut cycle = vec![s];
        let mut prev = s;
        let mut cur = nb[0].min(nb[1]);
        let mut closed = false;
        for _ in 0..=g.n() {
            if cur == s {
                closed = true;
                break;
            }
            if !is_v2(g, x, cur) {
                break;
            }
            cycle.push(cur);
            let cnb = u_neighbors(g, x, cur);
            let next = if cnb[0] == prev { cnb[1] } else { cnb[0] };
            prev = cur;
            cur = next;
        }
        for &v in &cycle {
            seen[v as usize] = true;
        }
        if !closed || cycle.len() < 3 {
            continue;
        }
        let flips: Vec<u32> = cycle.iter().skip(1).step_by(2).copied().collect();
        let delta = flip_delta(g, x, &flips);
        if delta > 0 {
            apply_flips(x, &flips);
            *value = (*value as i64 + delta) as u64;
            return true;
        }
    }
    false
}

/// Applies the three moves until none increases the cut. Requires
/// maximum degree ≤ 3.
pub fn hlz_local_improve(g: &Graph, x: &[bool]) -> Result<Cut> {
    if x.len() != g.n() {
        return Err(Error::LengthMismatch { expected: g.n(), got: x.len() });
    }
    if g.max_degree() > 3 {
        return Err(Error::InvalidGraph(format!(
            "local moves need maximum degree 3, graph has {}",
            g.max_degree()
        )));
    }
    let mut x = x.to_vec();
    let mut value = g.cut_value(&x)?;
    loop {
        if try_move_a(g, &mut x, &mut value) {
            continue;
        }
        if try_move_b(g, &mut x, &mut value) {
            continue;
        }
        if try_move_c(g, &mut x, &mut value) {
            continue;
        }
        break;
    }
    debug_assert_eq!(value, g.cut_value(&x)?);
    Ok(Cut { assignment: x, value })
}
