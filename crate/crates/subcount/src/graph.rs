//! Graph storage, the degree-based vertex order, and the counted query
//! oracle.
//!
//! A [`Graph`] is immutable after construction and can be shared freely.
//! All estimator access goes through a [`QuerySession`], which exposes only
//! the four oracle queries (degree, neighbor, pair, edge-sample) and counts
//! every call.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

pub type VertexId = u32;
pub type Color = u32;

/// Simple undirected graph with optional per-edge colors.
///
/// Neighbor lists are stored sorted by vertex id, so `neighbor_query(v, i)`
/// is deterministic across runs and platforms. Uncolored graphs behave as if
/// every edge had color 0.
#[derive(Clone, Debug)]
pub struct Graph {
    n: usize,
    adjacency: Vec<Vec<VertexId>>,
    edges: Vec<(VertexId, VertexId)>,
    colors: Option<Vec<Color>>,
    edge_index: HashMap<(VertexId, VertexId), u32>,
}

fn norm(u: VertexId, v: VertexId) -> (VertexId, VertexId) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

impl Graph {
    pub fn from_edges(n: usize, edges: Vec<(VertexId, VertexId)>) -> Result<Self> {
        Self::build(n, edges, None)
    }

    pub fn from_colored_edges(n: usize, edges: Vec<(VertexId, VertexId, Color)>) -> Result<Self> {
        let colors = edges.iter().map(|&(_, _, c)| c).collect();
        let plain = edges.into_iter().map(|(u, v, _)| (u, v)).collect();
        Self::build(n, plain, Some(colors))
    }

    fn build(
        n: usize,
        raw_edges: Vec<(VertexId, VertexId)>,
        colors: Option<Vec<Color>>,
    ) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); n];
        let mut edges = Vec::with_capacity(raw_edges.len());
        let mut edge_index = HashMap::with_capacity(raw_edges.len());
        for (u, v) in raw_edges {
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            for w in [u, v] {
                if w as usize >= n {
                    return Err(Error::VertexOutOfRange(w, n));
                }
            }
            let key = norm(u, v);
            if edge_index.insert(key, edges.len() as u32).is_some() {
                return Err(Error::DuplicateEdge(key.0, key.1));
            }
            adjacency[u as usize].push(v);
            adjacency[v as usize].push(u);
            edges.push(key);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Graph {
            n,
            adjacency,
            edges,
            colors,
            edge_index,
        })
    }

    /// Parses the shared graph/pattern text format.
    ///
    /// Header `n m` or `n m colored`, then exactly `m` lines `u v` (or
    /// `u v c` in colored mode); `#`-prefixed lines are comments.
    pub fn parse<R: BufRead>(reader: R) -> Result<Self> {
        let mut header: Option<(usize, usize, bool)> = None;
        let mut plain = Vec::new();
        let mut colors = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let line_no = idx + 1;
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let parse_num = |s: &str| -> Result<u64> {
                s.parse().map_err(|_| Error::Parse {
                    line: line_no,
                    msg: format!("expected an integer, got {s:?}"),
                })
            };
            match header {
                None => {
                    let colored = match fields.as_slice() {
                        [_, _] => false,
                        [_, _, "colored"] => true,
                        _ => {
                            return Err(Error::Parse {
                                line: line_no,
                                msg: "header must be `n m` or `n m colored`".into(),
                            })
                        }
                    };
                    let n = parse_num(fields[0])? as usize;
                    let m = parse_num(fields[1])? as usize;
                    header = Some((n, m, colored));
                }
                Some((_, m, colored)) => {
                    if plain.len() == m {
                        return Err(Error::Parse {
                            line: line_no,
                            msg: format!("more than the declared {m} edge lines"),
                        });
                    }
                    let expected = if colored { 3 } else { 2 };
                    if fields.len() != expected {
                        return Err(Error::Parse {
                            line: line_no,
                            msg: format!(
                                "expected {expected} fields on an edge line, got {}",
                                fields.len()
                            ),
                        });
                    }
                    let u = parse_num(fields[0])? as VertexId;
                    let v = parse_num(fields[1])? as VertexId;
                    plain.push((u, v));
                    if colored {
                        colors.push(parse_num(fields[2])? as Color);
                    }
                }
            }
        }
        let (n, m, colored) = header.ok_or(Error::Parse {
            line: 0,
            msg: "missing header line".into(),
        })?;
        if plain.len() != m {
            return Err(Error::Parse {
                line: 0,
                msg: format!("declared {m} edges but found {}", plain.len()),
            });
        }
        Self::build(n, plain, colored.then_some(colors))
    }

    pub fn parse_str(text: &str) -> Result<Self> {
        Self::parse(text.as_bytes())
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        if let Some(colors) = &self.colors {
            writeln!(w, "{} {} colored", self.n, self.edges.len())?;
            for (&(u, v), &c) in self.edges.iter().zip(colors) {
                writeln!(w, "{u} {v} {c}")?;
            }
        } else {
            writeln!(w, "{} {}", self.n, self.edges.len())?;
            for &(u, v) in &self.edges {
                writeln!(w, "{u} {v}")?;
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn is_colored(&self) -> bool {
        self.colors.is_some()
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adjacency[v as usize].len()
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adjacency[v as usize]
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn edge(&self, index: usize) -> (VertexId, VertexId) {
        self.edges[index]
    }

    /// Color of the edge at `index`; 0 for uncolored graphs.
    pub fn edge_color(&self, index: usize) -> Color {
        self.colors.as_ref().map_or(0, |c| c[index])
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.edge_index.contains_key(&norm(u, v))
    }

    /// Presence plus color; `Some(0)` for any edge of an uncolored graph.
    pub fn edge_color_between(&self, u: VertexId, v: VertexId) -> Option<Color> {
        self.edge_index
            .get(&norm(u, v))
            .map(|&i| self.edge_color(i as usize))
    }

    pub fn order(&self) -> VertexOrder<'_> {
        VertexOrder { graph: self }
    }

    /// Sum over undirected edges of the smaller endpoint degree.
    pub fn min_degree_sum(&self) -> u128 {
        self.edges
            .iter()
            .map(|&(u, v)| self.degree(u).min(self.degree(v)) as u128)
            .sum()
    }

    /// Checks `min_degree_sum <= 5 m sqrt(m)` exactly (squared integer form).
    pub fn satisfies_min_degree_bound(&self) -> bool {
        let s = self.min_degree_sum();
        let m = self.m() as u128;
        s * s <= 25 * m * m * m
    }

    pub fn is_bipartite(&self) -> bool {
        let mut side = vec![None::<bool>; self.n];
        let mut stack = Vec::new();
        for start in 0..self.n as VertexId {
            if side[start as usize].is_some() {
                continue;
            }
            side[start as usize] = Some(false);
            stack.push(start);
            while let Some(v) = stack.pop() {
                let s = side[v as usize].unwrap();
                for &w in self.neighbors(v) {
                    match side[w as usize] {
                        None => {
                            side[w as usize] = Some(!s);
                            stack.push(w);
                        }
                        Some(t) if t == s => return false,
                        _ => {}
                    }
                }
            }
        }
        true
    }
}

/// The total order on vertices: `u` precedes `v` iff `d_u < d_v`, with ties
/// broken by vertex id.
#[derive(Clone, Copy)]
pub struct VertexOrder<'g> {
    graph: &'g Graph,
}

impl VertexOrder<'_> {
    pub fn precedes(&self, u: VertexId, v: VertexId) -> bool {
        let (du, dv) = (self.graph.degree(u), self.graph.degree(v));
        du < dv || (du == dv && u < v)
    }
}

/// Compares two vertices given their degrees, without graph access.
pub fn precedes_by_degree(u: VertexId, du: usize, v: VertexId, dv: usize) -> bool {
    du < dv || (du == dv && u < v)
}

/// Source of the estimator's own randomness (index draws and coin flips).
///
/// Sessions created with [`QuerySession::new`] use a seeded ChaCha stream;
/// tests can substitute a source that enumerates every outcome.
pub trait RandomSource {
    /// Uniform draw from `0..n` (`n >= 1`).
    fn index(&mut self, n: usize) -> usize;

    fn bit(&mut self) -> bool {
        self.index(2) == 1
    }
}

pub struct SeededSource(ChaCha8Rng);

impl SeededSource {
    pub fn new(seed: u64) -> Self {
        SeededSource(ChaCha8Rng::seed_from_u64(seed))
    }
}

impl RandomSource for SeededSource {
    fn index(&mut self, n: usize) -> usize {
        self.0.random_range(0..n)
    }
}

/// A [`RandomSource`] that systematically enumerates every outcome of a
/// randomized procedure, as a lazily discovered mixed-radix counter.
///
/// Driver loop: `begin`, run the procedure once, read `probability`, then
/// `advance`; stop when `advance` returns false. Clones share state, so a
/// session can own one handle while the test drives another.
#[derive(Clone, Default)]
pub struct EnumerationSource {
    inner: std::rc::Rc<std::cell::RefCell<EnumInner>>,
}

#[derive(Default)]
struct EnumInner {
    /// (choice, radix) per consumed draw of the current run.
    path: Vec<(usize, usize)>,
    depth: usize,
}

impl EnumerationSource {
    pub fn new() -> Self {
        Self::default()
    }

    /// Starts replaying (and then extending) the current choice path.
    pub fn begin(&self) {
        self.inner.borrow_mut().depth = 0;
    }

    /// Probability of the run just completed: the product of `1/radix` over
    /// its consumed draws.
    pub fn probability(&self) -> f64 {
        let inner = self.inner.borrow();
        inner.path[..inner.depth]
            .iter()
            .map(|&(_, r)| 1.0 / r as f64)
            .product()
    }

    /// The (choice, radix) prefix consumed by the run just completed.
    pub fn consumed(&self) -> Vec<(usize, usize)> {
        let inner = self.inner.borrow();
        inner.path[..inner.depth].to_vec()
    }

    /// Steps to the next outcome; false when the space is exhausted.
    pub fn advance(&self) -> bool {
        let mut inner = self.inner.borrow_mut();
        let depth = inner.depth;
        inner.path.truncate(depth);
        while let Some((c, r)) = inner.path.pop() {
            if c + 1 < r {
                inner.path.push((c + 1, r));
                return true;
            }
        }
        false
    }
}

impl RandomSource for EnumerationSource {
    fn index(&mut self, n: usize) -> usize {
        let mut inner = self.inner.borrow_mut();
        let depth = inner.depth;
        if depth < inner.path.len() {
            let (c, r) = inner.path[depth];
            assert_eq!(r, n, "divergent replay of an enumeration path");
            inner.depth += 1;
            c
        } else {
            inner.path.push((0, n));
            inner.depth += 1;
            0
        }
    }
}

/// Per-query-type call counters.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct QueryCounts {
    pub degree: u64,
    pub neighbor: u64,
    pub pair: u64,
    pub edge_sample: u64,
}

impl QueryCounts {
    pub fn total(&self) -> u64 {
        self.degree + self.neighbor + self.pair + self.edge_sample
    }

    pub fn add(&mut self, other: &QueryCounts) {
        self.degree += other.degree;
        self.neighbor += other.neighbor;
        self.pair += other.pair;
        self.edge_sample += other.edge_sample;
    }

    pub fn minus(&self, earlier: &QueryCounts) -> QueryCounts {
        QueryCounts {
            degree: self.degree - earlier.degree,
            neighbor: self.neighbor - earlier.neighbor,
            pair: self.pair - earlier.pair,
            edge_sample: self.edge_sample - earlier.edge_sample,
        }
    }
}

/// The sole access path estimators have to a graph.
///
/// Every oracle call increments exactly one counter by one. Two sessions
/// with the same seed and the same call sequence give identical answers.
/// A session is single-owner; parallel estimation uses one session per
/// worker and merges counts afterwards.
pub struct QuerySession<'g> {
    graph: &'g Graph,
    counts: QueryCounts,
    source: Box<dyn RandomSource>,
}

impl<'g> QuerySession<'g> {
    pub fn new(graph: &'g Graph, seed: u64) -> Self {
        Self::with_source(graph, Box::new(SeededSource::new(seed)))
    }

    pub fn with_source(graph: &'g Graph, source: Box<dyn RandomSource>) -> Self {
        QuerySession {
            graph,
            counts: QueryCounts::default(),
            source,
        }
    }

    /// Vertex count; part of the model's public knowledge (graph header).
    pub fn n(&self) -> usize {
        self.graph.n()
    }

    /// Edge count; part of the model's public knowledge (graph header).
    pub fn m(&self) -> usize {
        self.graph.m()
    }

    pub fn counts(&self) -> QueryCounts {
        self.counts
    }

    pub fn degree_query(&mut self, v: VertexId) -> Result<usize> {
        if v as usize >= self.graph.n() {
            return Err(Error::VertexOutOfRange(v, self.graph.n()));
        }
        self.counts.degree += 1;
        Ok(self.graph.degree(v))
    }

    /// Returns the `i`-th neighbor of `v` and the color of the connecting
    /// edge (0 when uncolored).
    pub fn neighbor_query(&mut self, v: VertexId, i: usize) -> Result<(VertexId, Color)> {
        if v as usize >= self.graph.n() {
            return Err(Error::VertexOutOfRange(v, self.graph.n()));
        }
        let list = self.graph.neighbors(v);
        if i >= list.len() {
            return Err(Error::NeighborIndexOutOfRange {
                vertex: v,
                index: i,
                degree: list.len(),
            });
        }
        self.counts.neighbor += 1;
        let w = list[i];
        Ok((w, self.graph.edge_color_between(v, w).unwrap_or(0)))
    }

    /// Edge presence between `u` and `v`; `Some(color)` when present.
    pub fn pair_query(&mut self, u: VertexId, v: VertexId) -> Result<Option<Color>> {
        if u == v {
            return Err(Error::PairQuerySameVertex(u));
        }
        for w in [u, v] {
            if w as usize >= self.graph.n() {
                return Err(Error::VertexOutOfRange(w, self.graph.n()));
            }
        }
        self.counts.pair += 1;
        Ok(self.graph.edge_color_between(u, v))
    }

    /// Uniformly random edge, with its color.
    pub fn edge_sample_query(&mut self) -> Result<(VertexId, VertexId, Color)> {
        if self.graph.m() == 0 {
            return Err(Error::EmptyGraph);
        }
        self.counts.edge_sample += 1;
        let idx = self.source.index(self.graph.m());
        let (u, v) = self.graph.edge(idx);
        Ok((u, v, self.graph.edge_color(idx)))
    }

    /// Estimator-side randomness: uniform index in `0..n`. Not a query.
    pub fn random_index(&mut self, n: usize) -> usize {
        self.source.index(n)
    }

    /// Estimator-side randomness: fair coin. Not a query.
    pub fn random_bit(&mut self) -> bool {
        self.source.bit()
    }

    /// Charges `k` pair-query equivalents, used when the fallback path reads
    /// the whole edge list offline.
    pub fn charge_pair_equivalents(&mut self, k: u64) {
        self.counts.pair += k;
    }
}

/// Edge/degree lookups shared by the copy predicates, implemented both by
/// counting sessions and by direct (oracle-side) graph access.
pub trait GraphAccess {
    fn fetch_degree(&mut self, v: VertexId) -> usize;

    /// `Some(color)` iff the edge is present (0 when uncolored).
    fn fetch_edge(&mut self, u: VertexId, v: VertexId) -> Option<Color>;
}

impl GraphAccess for QuerySession<'_> {
    fn fetch_degree(&mut self, v: VertexId) -> usize {
        self.degree_query(v).expect("vertex id out of range")
    }

    fn fetch_edge(&mut self, u: VertexId, v: VertexId) -> Option<Color> {
        self.pair_query(u, v).expect("bad pair query arguments")
    }
}

/// Uncounted access for exact enumeration.
pub struct DirectAccess<'g>(pub &'g Graph);

impl GraphAccess for DirectAccess<'_> {
    fn fetch_degree(&mut self, v: VertexId) -> usize {
        self.0.degree(v)
    }

    fn fetch_edge(&mut self, u: VertexId, v: VertexId) -> Option<Color> {
        self.0.edge_color_between(u, v)
    }
}
