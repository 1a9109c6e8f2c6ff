//! Graph instances, Max-Cut metrics, brute force, and lightcones.
//!
//! Graphs are simple, undirected, unweighted, with dense 0-based vertex
//! indices, and immutable after construction so they can be shared freely
//! across worker threads.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand_chacha::rand_core::SeedableRng;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::rng::Rng;
use crate::Result;

/// Default cap for [`brute_force_maxcut`]; 2^27 incremental updates keep
/// the oracle under a minute.
pub const BRUTE_FORCE_CAP: usize = 28;

/// An undirected simple graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(u32, u32)>,
    adj: Vec<Vec<u32>>,
}

/// On-disk form: one JSON object per instance.
#[derive(Serialize, Deserialize)]
struct GraphFile {
    n: usize,
    edges: Vec<(u32, u32)>,
}

impl Graph {
    /// Builds a graph from an edge list, validating simplicity.
    ///
    /// Edges are canonicalized to `(min, max)` and sorted, so the edge
    /// order (and everything derived from it, like lightcone summation
    /// order) does not depend on input order.
    pub fn new(n: usize, edges: Vec<(u32, u32)>) -> Result<Graph> {
        let mut canon: Vec<(u32, u32)> = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {a}")));
            }
            if a as usize >= n || b as usize >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({a}, {b}) out of range for n = {n}"
                )));
            }
            canon.push((a.min(b), a.max(b)));
        }
        canon.sort_unstable();
        if let Some(w) = canon.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph(format!(
                "duplicate edge ({}, {})",
                w[0].0, w[0].1
            )));
        }
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &canon {
            adj[a as usize].push(b);
            adj[b as usize].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph { n, edges: canon, adj })
    }

    /// Complete graph on `n` vertices.
    pub fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for i in 0..n as u32 {
            for j in (i + 1)..n as u32 {
                edges.push((i, j));
            }
        }
        Graph::new(n, edges).expect("complete graph is simple")
    }

    /// Cycle graph `0-1-...-(n-1)-0`; requires `n >= 3`.
    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        let edges = (0..n as u32).map(|i| (i, (i + 1) % n as u32)).collect();
        Graph::new(n, edges).expect("cycle is simple")
    }

    /// Path graph `0-1-...-(n-1)`.
    pub fn path(n: usize) -> Graph {
        let edges = (0..n.saturating_sub(1) as u32).map(|i| (i, i + 1)).collect();
        Graph::new(n, edges).expect("path is simple")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Edges in canonical `(min, max)` sorted order.
    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.adj[v as usize]
    }

    pub fn degree(&self, v: u32) -> usize {
        self.adj[v as usize].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, a: u32, b: u32) -> bool {
        self.adj[a as usize].binary_search(&b).is_ok()
    }

    /// Uniform degree if the graph is regular.
    pub fn regular_degree(&self) -> Option<usize> {
        if self.n == 0 {
            return None;
        }
        let d = self.degree(0);
        (1..self.n as u32).all(|v| self.degree(v) == d).then_some(d)
    }

    /// Number of edges whose endpoints get different bits.
    pub fn cut_value(&self, x: &[bool]) -> Result<u64> {
        if x.len() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, got: x.len() });
        }
        Ok(self
            .edges
            .iter()
            .filter(|&&(a, b)| x[a as usize] != x[b as usize])
            .count() as u64)
    }

    /// Cut value for an assignment packed into a mask (bit `i` = vertex `i`).
    /// Only meaningful for `n <= 64`.
    pub fn cut_value_mask(&self, mask: u64) -> u64 {
        self.edges
            .iter()
            .filter(|&&(a, b)| (mask >> a ^ mask >> b) & 1 == 1)
            .count() as u64
    }

    /// Cut value divided by the number of edges.
    pub fn cut_fraction(&self, x: &[bool]) -> Result<f64> {
        if self.edges.is_empty() {
            return Err(Error::EmptyEdgeSet);
        }
        Ok(self.cut_value(x)? as f64 / self.edges.len() as f64)
    }

    /// Cut value divided by the known maximum `f_max`.
    pub fn approximation_ratio(&self, x: &[bool], f_max: u64) -> Result<f64> {
        if f_max == 0 {
            return Err(Error::ZeroOptimum);
        }
        Ok(self.cut_value(x)? as f64 / f_max as f64)
    }

    /// Serializes to the instance file format.
    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&GraphFile { n: self.n, edges: self.edges.clone() })
            .expect("graph serialization cannot fail")
    }

    /// Parses and validates the instance file format.
    pub fn from_json_str(s: &str) -> Result<Graph> {
        let file: GraphFile = serde_json::from_str(s)?;
        Graph::new(file.n, file.edges)
    }

    /// Parses the edge-list text format: one `i j` pair per line, blank
    /// lines ignored. The vertex count is one past the largest index.
    pub fn parse_edge_list(text: &str) -> Result<Graph> {
        let mut edges = Vec::new();
        let mut max = 0u32;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut it = line.split_whitespace();
            let parse = |tok: Option<&str>| -> Result<u32> {
                tok.ok_or_else(|| Error::Parse(format!("line {}: expected 'i j'", lineno + 1)))?
                    .parse::<u32>()
                    .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))
            };
            let a = parse(it.next())?;
            let b = parse(it.next())?;
            if it.next().is_some() {
                return Err(Error::Parse(format!("line {}: trailing tokens", lineno + 1)));
            }
            max = max.max(a).max(b);
            edges.push((a, b));
        }
        if edges.is_empty() {
            return Err(Error::Parse("edge list is empty".into()));
        }
        Graph::new(max as usize + 1, edges)
    }
}

/// A cut: bit assignment together with its verified value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cut {
    pub assignment: Vec<bool>,
    pub value: u64,
}

impl Cut {
    /// Computes the value for `assignment`, so the pair is consistent by
    /// construction.
    pub fn new(g: &Graph, assignment: Vec<bool>) -> Result<Cut> {
        let value = g.cut_value(&assignment)?;
        Ok(Cut { assignment, value })
    }

    pub fn from_mask(g: &Graph, mask: u64) -> Cut {
        let assignment = (0..g.n()).map(|i| mask >> i & 1 == 1).collect();
        Cut { assignment, value: g.cut_value_mask(mask) }
    }
}

/// The QUBO matrix Q = -L of a graph: `diag[i] = -degree(i)` and `+1`
/// for every edge, stored sparsely (each unordered pair once).
#[derive(Debug, Clone)]
pub struct Qubo {
    pub n: usize,
    pub diag: Vec<f64>,
    pub pairs: Vec<(u32, u32, f64)>,
}

impl Qubo {
    pub fn dense(&self) -> Vec<Vec<f64>> {
        let mut m = vec![vec![0.0; self.n]; self.n];
        for i in 0..self.n {
            m[i][i] = self.diag[i];
        }
        for &(a, b, q) in &self.pairs {
            m[a as usize][b as usize] = q;
            m[b as usize][a as usize] = q;
        }
        m
    }
}

/// Negated-Laplacian QUBO form of the Max-Cut instance.
pub fn laplacian_qubo(g: &Graph) -> Qubo {
    let diag = (0..g.n() as u32).map(|v| -(g.degree(v) as f64)).collect();
    let pairs = g.edges().iter().map(|&(a, b)| (a, b, 1.0)).collect();
    Qubo { n: g.n(), diag, pairs }
}

/// Result of exhaustive Max-Cut enumeration.
#[derive(Debug, Clone)]
pub struct BruteForce {
    pub f_max: u64,
    /// Optimal assignments as masks (bit `i` = vertex `i`), sorted,
    /// closed under complementation.
    pub optima: Vec<u64>,
}

impl BruteForce {
    pub fn is_optimal(&self, mask: u64) -> bool {
        self.optima.binary_search(&mask).is_ok()
    }
}

/// Exact maximum cut by enumeration, default cap [`BRUTE_FORCE_CAP`].
pub fn brute_force_maxcut(g: &Graph) -> Result<BruteForce> {
    brute_force_maxcut_capped(g, BRUTE_FORCE_CAP)
}

/// Exact maximum cut with an explicit vertex cap.
///
/// Walks assignments in Gray-code order so each step flips one vertex and
/// updates the cut in O(degree); the last vertex is pinned to 0 and optima
/// are completed through the complement symmetry.
pub fn brute_force_maxcut_capped(g: &Graph, cap: usize) -> Result<BruteForce> {
    let n = g.n();
    if n > cap {
        return Err(Error::TooLarge { what: "brute_force_maxcut", cap, got: n, unit: "vertices" });
    }
    if n == 0 {
        return Ok(BruteForce { f_max: 0, optima: vec![0] });
    }
    let full = (1u64 << n) - 1;
    let mut mask = 0u64;
    let mut value = 0u64;
    let mut f_max = 0u64;
    let mut optima = vec![0u64];
    let steps = 1u64 << (n - 1);
    for k in 1..steps {
        let v = k.trailing_zeros();
        let side = mask >> v & 1;
        let mut same = 0u64;
        for &u in g.neighbors(v) {
            same += (mask >> u & 1) ^ side ^ 1;
        }
        // flipping v cuts its `same` same-side edges and uncuts the rest
        value = value + 2 * same - g.degree(v) as u64;
        mask ^= 1 << v;
        if value > f_max {
            f_max = value;
            optima.clear();
            optima.push(mask);
        } else if value == f_max {
            optima.push(mask);
        }
    }
    let mut all: Vec<u64> = optima.iter().flat_map(|&m| [m, m ^ full]).collect();
    all.sort_unstable();
    Ok(BruteForce { f_max, optima: all })
}

/// The depth-`p` neighborhood of an edge, as its own graph.
#[derive(Debug, Clone)]
pub struct Lightcone {
    pub subgraph: Graph,
    /// Local indices of the original edge's endpoints.
    pub center: (u32, u32),
    /// Local index -> global index, ascending.
    pub vertex_map: Vec<u32>,
}

/// Induced subgraph on all vertices within distance `p` of either
/// endpoint of `e`. Depth-p QAOA expectations of the edge observable
/// depend only on this subgraph.
pub fn edge_lightcone(g: &Graph, e: (u32, u32), p: usize) -> Result<Lightcone> {
    let (u, v) = (e.0.min(e.1), e.0.max(e.1));
    if u as usize >= g.n() || v as usize >= g.n() || !g.has_edge(u, v) {
        return Err(Error::EdgeNotInGraph(e.0, e.1));
    }
    let mut dist = vec![usize::MAX; g.n()];
    let mut queue = std::collections::VecDeque::new();
    dist[u as usize] = 0;
    dist[v as usize] = 0;
    queue.push_back(u);
    queue.push_back(v);
    while let Some(w) = queue.pop_front() {
        let dw = dist[w as usize];
        if dw == p {
            continue;
        }
        for &x in g.neighbors(w) {
            if dist[x as usize] == usize::MAX {
                dist[x as usize] = dw + 1;
                queue.push_back(x);
            }
        }
    }
    let vertex_map: Vec<u32> =
        (0..g.n() as u32).filter(|&w| dist[w as usize] != usize::MAX).collect();
    let mut local = vec![u32::MAX; g.n()];
    for (i, &w) in vertex_map.iter().enumerate() {
        local[w as usize] = i as u32;
    }
    let edges: Vec<(u32, u32)> = g
        .edges()
        .iter()
        .filter(|&&(a, b)| local[a as usize] != u32::MAX && local[b as usize] != u32::MAX)
        .map(|&(a, b)| (local[a as usize], local[b as usize]))
        .collect();
    let subgraph = Graph::new(vertex_map.len(), edges)?;
    Ok(Lightcone { subgraph, center: (local[u as usize], local[v as usize]), vertex_map })
}

/// Maximum attempts before the pairing-model sampler gives up. The
/// rejection rate grows roughly like e^{(d^2-1)/4}, so this covers the
/// degrees used in practice (3..=7) with a wide margin.
const MAX_PAIRING_ATTEMPTS: usize = 200_000;

/// Samples a simple d-regular graph via the configuration model:
/// shuffle d stubs per vertex, pair them up, and reject any pairing with
/// self-loops or duplicate edges. Deterministic given `seed`.
pub fn generate_random_regular(n: usize, d: usize, seed: u64) -> Result<Graph> {
    if n == 0 || d >= n || n * d % 2 != 0 {
        return Err(Error::InfeasibleDegree { n, degree: d });
    }
    if d == 0 {
        return Graph::new(n, Vec::new());
    }
    let mut rng = Rng::seed_from_u64(seed);
    let mut stubs: Vec<u32> = Vec::with_capacity(n * d);
    for v in 0..n as u32 {
        stubs.extend(std::iter::repeat(v).take(d));
    }
    let mut seen: HashSet<(u32, u32)> = HashSet::with_capacity(n * d / 2);
    'attempt: for _ in 0..MAX_PAIRING_ATTEMPTS {
        stubs.shuffle(&mut rng);
        seen.clear();
        for pair in stubs.chunks_exact(2) {
            let (a, b) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if a == b || !seen.insert((a, b)) {
                continue 'attempt;
            }
        }
        return Graph::new(n, seen.drain().collect());
    }
    Err(Error::SamplingExhausted { attempts: MAX_PAIRING_ATTEMPTS })
}
