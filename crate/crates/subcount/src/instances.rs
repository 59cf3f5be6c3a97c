//! Hard-instance constructions and planted/random benchmark generators.
//!
//! The layered construction hides the presence of odd cycles behind a
//! single pair-gadget bit while keeping every vertex degree fixed; the join
//! construction realizes a pattern's dual vertex weights as block sizes so
//! that one recolored edge switches the colorful copy count between zero
//! and `m^(rho-1)`.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Graph, VertexId};
use crate::pattern::{decompose, Pattern, Rational};
use crate::{Error, Result};

/// A layered set-disjointness instance targeting `C_{2k+1}`.
#[derive(Clone, Debug)]
pub struct DisjInstance {
    /// Layer size `K`.
    pub layer_size: usize,
    /// Cycle parameter `k`; the target cycle has `2k + 1` edges.
    pub cycle_param: usize,
    /// Row-major `K x K` bit arrays; the diagonal is unused.
    pub x: Vec<bool>,
    pub y: Vec<bool>,
    pub graph: Graph,
}

impl DisjInstance {
    pub fn vertex(&self, layer: usize, index: usize) -> VertexId {
        (layer * self.layer_size + index) as VertexId
    }
}

/// Builds the layered instance: `k + 1` layers of `K` vertices, complete
/// bipartite between consecutive layers beyond the first, and one gadget
/// per unordered index pair `{i, j}` wiring four fixed endpoints either
/// within the first two layers (intersecting) or across them.
///
/// With no intersecting pair the graph is bipartite; with one, it contains
/// many copies of `C_{2k+1}`. Degrees do not depend on the bits.
pub fn gen_disjointness(
    layer_size: usize,
    cycle_param: usize,
    hit: Option<(usize, usize)>,
) -> Result<DisjInstance> {
    let (kk, k) = (layer_size, cycle_param);
    if kk < 4 || k < 1 {
        return Err(Error::InfeasibleInstance(
            "layered instances need K >= 4 and k >= 1".into(),
        ));
    }
    if let Some((i, j)) = hit {
        if i == j || i >= kk || j >= kk {
            return Err(Error::InfeasibleInstance(format!(
                "intersecting index ({i}, {j}) must be off-diagonal and within {kk}"
            )));
        }
    }
    let hit = hit.map(|(i, j)| (i.min(j), i.max(j)));

    let mut x = vec![true; kk * kk];
    let mut y = vec![false; kk * kk];
    for i in 0..kk {
        x[i * kk + i] = false;
    }
    if let Some((i, j)) = hit {
        y[i * kk + j] = true;
        y[j * kk + i] = true;
    }

    let n = (k + 1) * kk;
    let at = |layer: usize, idx: usize| (layer * kk + idx) as VertexId;
    let mut edges = Vec::new();
    for layer in 1..k {
        for a in 0..kk {
            for b in 0..kk {
                edges.push((at(layer, a), at(layer + 1, b)));
            }
        }
    }
    for i in 0..kk {
        for j in i + 1..kk {
            if x[i * kk + j] && y[i * kk + j] {
                edges.push((at(0, i), at(0, j)));
                edges.push((at(1, i), at(1, j)));
            } else {
                edges.push((at(0, i), at(1, j)));
                edges.push((at(0, j), at(1, i)));
            }
        }
    }
    Ok(DisjInstance {
        layer_size: kk,
        cycle_param: k,
        x,
        y,
        graph: Graph::from_edges(n, edges)?,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JoinSide {
    G0,
    G1,
}

/// A join-size instance: block product graph from the pattern's dual
/// weights, with the copy count carried by a single recolored edge.
#[derive(Clone, Debug)]
pub struct JoinInstance {
    pub base_m: u64,
    /// Optimal dual vertex weights, summing to rho.
    pub dual: Vec<Rational>,
    /// The tight pattern edge carrying color 1.
    pub tight_edge: (VertexId, VertexId),
    /// Vertex id range per pattern vertex.
    pub blocks: Vec<std::ops::Range<u32>>,
    /// The recolored edge; present in the G1 side only.
    pub special_edge: Option<(VertexId, VertexId)>,
    /// The colored host graph.
    pub graph: Graph,
    /// The pattern recolored so the tight edge is 1 and the rest 0.
    pub pattern: Pattern,
    /// Exact colorful copy count: 0 or `m^(rho - 1)`.
    pub truth_colorful: u128,
}

/// Maximizes the sum of vertex weights subject to `y_a + y_b <= 1` per
/// pattern edge, over half-integral assignments; exact by the cover LP's
/// half-integral duality.
pub fn solve_vertex_dual(h: &Pattern) -> Vec<Rational> {
    let g = h.graph();
    let n = g.n();
    let choices = [
        Rational::new(1, 1),
        Rational::new(1, 2),
        Rational::zero(),
    ];
    let mut best: Option<(Rational, Vec<Rational>)> = None;
    let mut current = vec![Rational::zero(); n];

    fn rec(
        v: usize,
        g: &Graph,
        choices: &[Rational; 3],
        current: &mut Vec<Rational>,
        sum: Rational,
        best: &mut Option<(Rational, Vec<Rational>)>,
    ) {
        let n = g.n();
        if let Some((b, _)) = best {
            // even all-ones on the rest cannot beat the incumbent
            if sum + Rational::new((n - v) as i64, 1) <= *b {
                return;
            }
        }
        if v == n {
            match best {
                Some((b, _)) if *b >= sum => {}
                _ => *best = Some((sum, current.clone())),
            }
            return;
        }
        'choice: for &c in choices {
            for &w in g.neighbors(v as VertexId) {
                if (w as usize) < v && current[w as usize] + c > Rational::new(1, 1) {
                    continue 'choice;
                }
            }
            current[v] = c;
            rec(v + 1, g, choices, current, sum + c, best);
        }
        current[v] = Rational::zero();
    }

    rec(0, g, &choices, &mut current, Rational::zero(), &mut best);
    best.expect("the all-zero assignment is feasible").1
}

/// Generates the block-product lower-bound instance for `h` at scale `m`.
///
/// Block sizes are `m^{y_a}` and must be integers, so `m` must be a perfect
/// square whenever any dual weight is 1/2.
pub fn gen_join_lowerbound(
    h: &Pattern,
    m: u64,
    which: JoinSide,
    seed: u64,
) -> Result<JoinInstance> {
    let d = decompose(h)?;
    let dual = solve_vertex_dual(h);
    let dual_value: Rational = dual.iter().sum();
    assert_eq!(dual_value, d.rho, "dual optimum equals the cover optimum");

    let hg = h.graph();
    let root = (m as f64).sqrt().round() as u64;
    let needs_root = dual.iter().any(|&y| y == Rational::new(1, 2));
    if needs_root && root * root != m {
        return Err(Error::InfeasibleInstance(format!(
            "m = {m} must be a perfect square to realize half-weight blocks"
        )));
    }
    let size_of = |y: Rational| -> u64 {
        if y.is_zero() {
            1
        } else if y == Rational::new(1, 2) {
            root
        } else {
            m
        }
    };

    // tight pattern edge, smallest by (min id, max id)
    let tight_edge = *hg
        .edges()
        .iter()
        .find(|&&(a, b)| dual[a as usize] + dual[b as usize] == Rational::new(1, 1))
        .expect("an optimal dual has a tight edge");

    let mut blocks = Vec::with_capacity(hg.n());
    let mut next = 0u32;
    for &weight in &dual {
        let size = size_of(weight) as u32;
        blocks.push(next..next + size);
        next += size;
    }
    let n = next as usize;

    let mut edges: Vec<(VertexId, VertexId, u32)> = Vec::new();
    for &(a, b) in hg.edges() {
        for u in blocks[a as usize].clone() {
            for v in blocks[b as usize].clone() {
                edges.push((u, v, 0));
            }
        }
    }

    let special_edge = match which {
        JoinSide::G0 => None,
        JoinSide::G1 => {
            let (a, b) = tight_edge;
            let (ba, bb) = (blocks[a as usize].clone(), blocks[b as usize].clone());
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let u = ba.start + rng.random_range(0..ba.len()) as u32;
            let v = bb.start + rng.random_range(0..bb.len()) as u32;
            let special = (u.min(v), u.max(v));
            for e in &mut edges {
                if (e.0.min(e.1), e.0.max(e.1)) == special {
                    e.2 = 1;
                }
            }
            Some(special)
        }
    };

    // recolor the pattern: 1 on the tight edge, 0 elsewhere
    let colored_pattern = Pattern::new(Graph::from_colored_edges(
        hg.n(),
        hg.edges()
            .iter()
            .map(|&(a, b)| ((a, b) == tight_edge) as u32)
            .zip(hg.edges().iter())
            .map(|(c, &(a, b))| (a, b, c))
            .collect(),
    )?)?;

    let truth_colorful = match which {
        JoinSide::G0 => 0u128,
        JoinSide::G1 => {
            let (a, b) = tight_edge;
            blocks
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != a as usize && i != b as usize)
                .map(|(_, r)| r.len() as u128)
                .product()
        }
    };

    Ok(JoinInstance {
        base_m: m,
        dual,
        tight_edge,
        blocks,
        special_edge,
        graph: Graph::from_colored_edges(n, edges)?,
        pattern: colored_pattern,
        truth_colorful,
    })
}

/// Uniform simple graph with exactly `m` edges.
pub fn gen_random(n: usize, m: usize, seed: u64) -> Result<Graph> {
    let max = n.saturating_mul(n.saturating_sub(1)) / 2;
    if m > max {
        return Err(Error::InfeasibleInstance(format!(
            "{m} edges do not fit in a simple graph on {n} vertices"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if m * 2 <= max {
        let mut chosen = std::collections::HashSet::with_capacity(m);
        let mut edges = Vec::with_capacity(m);
        while edges.len() < m {
            let u = rng.random_range(0..n as u32);
            let v = rng.random_range(0..n as u32);
            if u == v {
                continue;
            }
            let key = (u.min(v), u.max(v));
            if chosen.insert(key) {
                edges.push(key);
            }
        }
        Graph::from_edges(n, edges)
    } else {
        // dense request: partial shuffle of the full pair list
        let mut pairs: Vec<(u32, u32)> = (0..n as u32)
            .flat_map(|u| (u + 1..n as u32).map(move |v| (u, v)))
            .collect();
        for i in 0..m {
            let j = i + rng.random_range(0..pairs.len() - i);
            pairs.swap(i, j);
        }
        pairs.truncate(m);
        Graph::from_edges(n, pairs)
    }
}

/// Appends `copies` vertex-disjoint copies of the pattern on fresh vertices
/// after the base graph. Background edges never touch the planted blocks,
/// but the base may still contain copies of its own; ground truth should be
/// re-derived by exact counting.
pub fn gen_planted(base: &Graph, h: &Pattern, copies: usize) -> Result<Graph> {
    let hg = h.graph();
    if base.is_colored() != hg.is_colored() {
        return Err(Error::ColorModeMismatch);
    }
    let nh = hg.n();
    let n = base.n() + copies * nh;
    if base.is_colored() {
        let mut edges: Vec<(u32, u32, u32)> = base
            .edges()
            .iter()
            .enumerate()
            .map(|(i, &(u, v))| (u, v, base.edge_color(i)))
            .collect();
        for c in 0..copies {
            let off = (base.n() + c * nh) as u32;
            for (i, &(a, b)) in hg.edges().iter().enumerate() {
                edges.push((a + off, b + off, hg.edge_color(i)));
            }
        }
        Graph::from_colored_edges(n, edges)
    } else {
        let mut edges = base.edges().to_vec();
        for c in 0..copies {
            let off = (base.n() + c * nh) as u32;
            for &(a, b) in hg.edges() {
                edges.push((a + off, b + off));
            }
        }
        Graph::from_edges(n, edges)
    }
}

/// Disjoint union, relabeling the second graph's vertices after the first.
pub fn disjoint_union(a: &Graph, b: &Graph) -> Graph {
    assert_eq!(a.is_colored(), b.is_colored());
    let off = a.n() as u32;
    if a.is_colored() {
        let mut edges: Vec<(u32, u32, u32)> = a
            .edges()
            .iter()
            .enumerate()
            .map(|(i, &(u, v))| (u, v, a.edge_color(i)))
            .collect();
        edges.extend(
            b.edges()
                .iter()
                .enumerate()
                .map(|(i, &(u, v))| (u + off, v + off, b.edge_color(i))),
        );
        Graph::from_colored_edges(a.n() + b.n(), edges).expect("relabeled union stays simple")
    } else {
        let mut edges = a.edges().to_vec();
        edges.extend(b.edges().iter().map(|&(u, v)| (u + off, v + off)));
        Graph::from_edges(a.n() + b.n(), edges).expect("relabeled union stays simple")
    }
}

/// Many `C_{2k+1}` copies sharing one spine path: `sheets` apex vertices
/// each close the spine into one odd cycle, so the count is exactly
/// `sheets` while the edge count stays `2k - 1 + 2 sheets`.
pub fn gen_shared_path_cycles(k: usize, sheets: usize) -> Result<Graph> {
    if k < 1 || sheets == 0 {
        return Err(Error::InfeasibleInstance(
            "cycle books need k >= 1 and at least one sheet".into(),
        ));
    }
    let spine = 2 * k; // vertices 0 .. 2k-1 form a path with 2k - 1 edges
    let n = spine + sheets;
    let mut edges = Vec::with_capacity(2 * k - 1 + 2 * sheets);
    for i in 0..spine - 1 {
        edges.push((i as u32, (i + 1) as u32));
    }
    for s in 0..sheets {
        let apex = (spine + s) as u32;
        edges.push((0, apex));
        edges.push(((spine - 1) as u32, apex));
    }
    Graph::from_edges(n, edges)
}
