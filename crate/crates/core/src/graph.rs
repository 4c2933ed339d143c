//! Multigraphs for the Tseitin-based families: random (near-)regular
//! generation through the configuration model, edge expansion and odd
//! labellings.

use std::fmt::Write as _;

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Above this many vertices `edge_expansion` samples instead of enumerating.
pub const EXACT_EXPANSION_LIMIT: usize = 24;

const PAIRING_ATTEMPTS: usize = 2000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("degree sum {0} is odd")]
    OddDegreeSum(usize),
    #[error("regular graphs need degree >= 3 (got {0})")]
    DegreeTooSmall(usize),
    #[error("need more vertices than the degree ({vertices} <= {degree})")]
    TooFewVertices { vertices: usize, degree: usize },
    #[error("no loopless connected pairing found in {0} attempts")]
    RetryBudgetExhausted(usize),
    #[error("degree sequence is not realisable without self-loops")]
    NotRealisable,
    #[error("no graph reached expansion {wanted} in {attempts} attempts (best {best})")]
    ExpansionTooLow {
        wanted: f64,
        best: f64,
        attempts: usize,
    },
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

/// An undirected multigraph without self-loops. Edge indices are stable: edge
/// `e` becomes Tseitin variable `base + e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    num_vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(num_vertices: usize, edges: Vec<(usize, usize)>) -> Graph {
        for &(u, w) in &edges {
            assert!(u < num_vertices && w < num_vertices, "endpoint out of range");
            assert_ne!(u, w, "self-loops are not allowed");
        }
        Graph {
            num_vertices,
            edges,
        }
    }

    pub fn cycle(n: usize) -> Graph {
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n)).collect())
    }

    pub fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n {
            for w in u + 1..n {
                edges.push((u, w));
            }
        }
        Graph::new(n, edges)
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.num_vertices];
        for &(u, w) in &self.edges {
            deg[u] += 1;
            deg[w] += 1;
        }
        deg
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    /// Indices of the edges touching `v`, in edge order.
    pub fn incident_edges(&self, v: usize) -> Vec<usize> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, &(a, b))| a == v || b == v)
            .map(|(e, _)| e)
            .collect()
    }

    pub fn is_simple(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.edges
            .iter()
            .all(|&(u, w)| seen.insert((u.min(w), u.max(w))))
    }

    pub fn is_connected(&self) -> bool {
        if self.num_vertices == 0 {
            return true;
        }
        let mut parent: Vec<usize> = (0..self.num_vertices).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut components = self.num_vertices;
        for &(u, w) in &self.edges {
            let (a, b) = (find(&mut parent, u), find(&mut parent, w));
            if a != b {
                parent[a] = b;
                components -= 1;
            }
        }
        components == 1
    }

    /// Neighbour lists with multiplicity.
    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.num_vertices];
        for &(u, w) in &self.edges {
            adj[u].push(w);
            adj[w].push(u);
        }
        adj
    }

    /// Line format: `v <count>` followed by `e <u> <w>` per edge, in index order.
    pub fn to_text(&self) -> String {
        let mut out = format!("v {}\n", self.num_vertices);
        for &(u, w) in &self.edges {
            let _ = writeln!(out, "e {u} {w}");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Graph, GraphError> {
        let mut vertices: Option<usize> = None;
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            let err = |reason: &str| GraphError::Parse {
                line: idx + 1,
                reason: reason.to_string(),
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields.as_slice() {
                ["v", n] => vertices = Some(n.parse().map_err(|_| err("bad vertex count"))?),
                ["e", u, w] => {
                    let n = vertices.ok_or_else(|| err("edge before vertex count"))?;
                    let u: usize = u.parse().map_err(|_| err("bad endpoint"))?;
                    let w: usize = w.parse().map_err(|_| err("bad endpoint"))?;
                    if u >= n || w >= n {
                        return Err(err("endpoint out of range"));
                    }
                    if u == w {
                        return Err(err("self-loop"));
                    }
                    edges.push((u, w));
                }
                _ => return Err(err("expected `v <n>` or `e <u> <w>`")),
            }
        }
        let n = vertices.ok_or(GraphError::Parse {
            line: 0,
            reason: "missing `v` line".into(),
        })?;
        Ok(Graph::new(n, edges))
    }
}

/// A vertex labelling `f : V → {0,1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Labelling {
    values: Vec<bool>,
}

impl Labelling {
    pub fn new(values: Vec<bool>) -> Labelling {
        Labelling { values }
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }

    pub fn get(&self, v: usize) -> bool {
        self.values[v]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_odd(&self) -> bool {
        self.values.iter().filter(|&&b| b).count() % 2 == 1
    }
}

/// Random labelling with odd support, deterministic per seed.
pub fn odd_labelling(graph: &Graph, seed: u64) -> Labelling {
    let n = graph.num_vertices();
    assert!(n >= 1, "labelling needs at least one vertex");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
    if values.iter().filter(|&&b| b).count() % 2 == 0 {
        let v = rng.gen_range(0..n);
        values[v] = !values[v];
    }
    Labelling { values }
}

/// Uniform random `degree`-regular graph on `num_vertices` vertices through the
/// pairing model. Simple connected samples are preferred; if none appears
/// within the retry budget, multi-edges are accepted but self-loops and
/// disconnected samples never are.
pub fn random_regular_graph(num_vertices: usize, degree: usize, seed: u64) -> Result<Graph, GraphError> {
    if degree < 3 {
        return Err(GraphError::DegreeTooSmall(degree));
    }
    if num_vertices * degree % 2 == 1 {
        return Err(GraphError::OddDegreeSum(num_vertices * degree));
    }
    if num_vertices <= degree {
        return Err(GraphError::TooFewVertices {
            vertices: num_vertices,
            degree,
        });
    }
    random_graph_with_degrees(&vec![degree; num_vertices], seed)
}

/// Connected loopless multigraph with exactly `num_edges` edges whose degrees
/// are as even as possible and never exceed `max_degree`.
///
/// Ladder formulas need a Tseitin graph with `n - 1` edges, which is odd for
/// every power of two, so an exactly regular graph is impossible there.
pub fn random_near_regular_graph(num_edges: usize, max_degree: usize, seed: u64) -> Result<Graph, GraphError> {
    let stubs = 2 * num_edges;
    let mut vertices = stubs.div_ceil(max_degree.max(1)).max(2);
    loop {
        let base = stubs / vertices;
        let extra = stubs % vertices;
        let degrees: Vec<usize> = (0..vertices).map(|v| base + (v < extra) as usize).collect();
        // Loopless multigraphs exist iff the largest degree is at most the rest.
        if degrees[0] <= stubs - degrees[0] && degrees.iter().all(|&d| d >= 1) {
            return random_graph_with_degrees(&degrees, seed);
        }
        if vertices >= stubs {
            return Err(GraphError::NotRealisable);
        }
        vertices += 1;
    }
}

/// Configuration-model sample for an arbitrary degree sequence.
pub fn random_graph_with_degrees(degrees: &[usize], seed: u64) -> Result<Graph, GraphError> {
    let sum: usize = degrees.iter().sum();
    if sum % 2 == 1 {
        return Err(GraphError::OddDegreeSum(sum));
    }
    let max = degrees.iter().copied().max().unwrap_or(0);
    if max > sum - max {
        return Err(GraphError::NotRealisable);
    }
    let n = degrees.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stubs: Vec<usize> = degrees
        .iter()
        .enumerate()
        .flat_map(|(v, &d)| std::iter::repeat_n(v, d))
        .collect();

    let mut fallback: Option<Graph> = None;
    for _ in 0..PAIRING_ATTEMPTS {
        stubs.shuffle(&mut rng);
        let pairs: Vec<(usize, usize)> = stubs
            .chunks_exact(2)
            .map(|p| (p[0].min(p[1]), p[0].max(p[1])))
            .collect();
        if pairs.iter().any(|&(u, w)| u == w) {
            continue;
        }
        let g = Graph { num_vertices: n, edges: pairs };
        if !g.is_connected() {
            continue;
        }
        if g.is_simple() {
            return Ok(g);
        }
        if fallback.is_none() {
            fallback = Some(g);
        }
    }
    fallback.ok_or(GraphError::RetryBudgetExhausted(PAIRING_ATTEMPTS))
}

/// Draws graphs from `sample(seed')` until one reaches `min_expansion`.
pub fn with_min_expansion(
    min_expansion: f64,
    attempts: usize,
    seed: u64,
    mut sample: impl FnMut(u64) -> Result<Graph, GraphError>,
) -> Result<Graph, GraphError> {
    let mut best = f64::NEG_INFINITY;
    for i in 0..attempts as u64 {
        let g = sample(seed.wrapping_add(i.wrapping_mul(0x9E37_79B9_7F4A_7C15)))?;
        let e = edge_expansion(&g).map(|x| x.as_f64()).unwrap_or(f64::INFINITY);
        if e >= min_expansion {
            return Ok(g);
        }
        best = best.max(e);
    }
    Err(GraphError::ExpansionTooLow {
        wanted: min_expansion,
        best,
        attempts,
    })
}

/// `min |E[V', V∖V']| / |V'|` over nonempty `V'` with `|V'| ≤ |V|/2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Expansion {
    pub value: Ratio<usize>,
    /// False when the value comes from sampling; it is then an upper bound
    /// on the true minimum.
    pub exact: bool,
}

impl Expansion {
    pub fn as_f64(&self) -> f64 {
        *self.value.numer() as f64 / *self.value.denom() as f64
    }
}

/// Edge expansion, exhaustive up to [`EXACT_EXPANSION_LIMIT`] vertices.
/// Returns `None` for graphs with fewer than two vertices.
pub fn edge_expansion(graph: &Graph) -> Option<Expansion> {
    let n = graph.num_vertices();
    if n < 2 {
        return None;
    }
    if n <= EXACT_EXPANSION_LIMIT {
        Some(Expansion {
            value: exact_expansion(graph),
            exact: true,
        })
    } else {
        Some(Expansion {
            value: sampled_expansion(graph, 0x5EED),
            exact: false,
        })
    }
}

fn better(cut: usize, size: usize, best: &mut (usize, usize)) {
    // cut/size < best.0/best.1
    if cut * best.1 < best.0 * size {
        *best = (cut, size);
    }
}

fn exact_expansion(graph: &Graph) -> Ratio<usize> {
    let n = graph.num_vertices();
    let adj = graph.adjacency();
    let deg: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut in_set = vec![false; n];
    let (mut cut, mut size) = (0usize, 0usize);
    let mut best = (usize::MAX / 2, 1usize);
    // Gray code walk: step i flips the vertex at the lowest set bit of i.
    for i in 1u64..(1u64 << n) {
        let v = i.trailing_zeros() as usize;
        let inside = adj[v].iter().filter(|&&w| in_set[w]).count();
        if in_set[v] {
            in_set[v] = false;
            size -= 1;
            cut = cut + 2 * inside - deg[v];
        } else {
            in_set[v] = true;
            size += 1;
            cut = cut + deg[v] - 2 * inside;
        }
        if size <= n / 2 && size > 0 {
            better(cut, size, &mut best);
        }
    }
    Ratio::new(best.0, best.1)
}

fn sampled_expansion(graph: &Graph, seed: u64) -> Ratio<usize> {
    let n = graph.num_vertices();
    let adj = graph.adjacency();
    let cut_of = |set: &[bool]| -> usize {
        graph
            .edges()
            .iter()
            .filter(|&&(u, w)| set[u] != set[w])
            .count()
    };
    let mut best = (usize::MAX / 2, 1usize);
    // Balls grown breadth-first from every vertex.
    for start in 0..n {
        let mut set = vec![false; n];
        let mut order = vec![start];
        set[start] = true;
        let mut head = 0;
        while head < order.len() && order.len() <= n / 2 {
            better(cut_of(&set), order.len(), &mut best);
            let v = order[head];
            head += 1;
            for &w in &adj[v] {
                if !set[w] && order.len() < n / 2 {
                    set[w] = true;
                    order.push(w);
                    better(cut_of(&set), order.len(), &mut best);
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut verts: Vec<usize> = (0..n).collect();
    for _ in 0..20_000 {
        let size = rng.gen_range(1..=n / 2);
        verts.shuffle(&mut rng);
        let mut set = vec![false; n];
        for &v in &verts[..size] {
            set[v] = true;
        }
        better(cut_of(&set), size, &mut best);
    }
    Ratio::new(best.0, best.1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_vertex_cubic_graph_has_six_edges() {
        let g = random_regular_graph(4, 3, 1).unwrap();
        assert_eq!(g.num_edges(), 6);
        assert!(g.degrees().iter().all(|&d| d == 3));
    }

    #[test]
    fn odd_degree_sum_is_rejected() {
        assert_eq!(random_regular_graph(5, 3, 0), Err(GraphError::OddDegreeSum(15)));
        assert_eq!(random_regular_graph(6, 2, 0), Err(GraphError::DegreeTooSmall(2)));
        assert!(matches!(
            random_regular_graph(4, 4, 0),
            Err(GraphError::TooFewVertices { .. })
        ));
    }

    #[test]
    fn seeded_generation_is_deterministic() {
        let a = random_regular_graph(10, 4, 7).unwrap();
        let b = random_regular_graph(10, 4, 7).unwrap();
        assert_eq!(a, b);
        assert!(a.is_connected());
    }

    #[test]
    fn near_regular_graphs_have_requested_edge_count() {
        for (edges, cap) in [(3, 4), (7, 4), (15, 4), (31, 4), (63, 6)] {
            let g = random_near_regular_graph(edges, cap, 3).unwrap();
            assert_eq!(g.num_edges(), edges);
            assert!(g.max_degree() <= cap);
            assert!(g.is_connected());
            let degs = g.degrees();
            assert!(degs.iter().max().unwrap() - degs.iter().min().unwrap() <= 1);
        }
    }

    #[test]
    fn expansion_of_small_graphs() {
        let edge = Graph::new(2, vec![(0, 1)]);
        assert_eq!(edge_expansion(&edge).unwrap().value, Ratio::new(1, 1));
        assert_eq!(edge_expansion(&Graph::cycle(4)).unwrap().value, Ratio::new(1, 1));
        assert_eq!(edge_expansion(&Graph::complete(4)).unwrap().value, Ratio::new(2, 1));
        assert!(edge_expansion(&Graph::new(1, vec![])).is_none());
    }

    #[test]
    fn labellings_are_odd() {
        let one = Graph::new(1, vec![]);
        assert_eq!(odd_labelling(&one, 5).values(), &[true]);
        let two = Graph::new(2, vec![(0, 1)]);
        for seed in 0..20 {
            let f = odd_labelling(&two, seed);
            assert!(f.get(0) ^ f.get(1));
        }
    }

    #[test]
    fn text_round_trip() {
        let g = random_regular_graph(8, 3, 2).unwrap();
        assert_eq!(Graph::from_text(&g.to_text()).unwrap(), g);
        assert!(Graph::from_text("v 2\ne 0 0\n").is_err());
        assert!(Graph::from_text("e 0 1\n").is_err());
    }
}
