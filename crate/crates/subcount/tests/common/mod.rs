//! Shared fixtures: corpus patterns and hosts, a brute-force edge-cover
//! oracle, and small-graph enumeration helpers.

#![allow(dead_code)]

use subcount::graph::{Graph, VertexId};
use subcount::pattern::{Pattern, Rational};

pub fn pattern(n: usize, edges: &[(u32, u32)]) -> Pattern {
    Pattern::from_edges(n, edges.to_vec()).unwrap()
}

pub fn single_edge() -> Pattern {
    pattern(2, &[(0, 1)])
}

pub fn two_petal_star() -> Pattern {
    pattern(3, &[(0, 1), (0, 2)])
}

pub fn three_petal_star() -> Pattern {
    pattern(4, &[(0, 1), (0, 2), (0, 3)])
}

pub fn triangle() -> Pattern {
    pattern(3, &[(0, 1), (1, 2), (0, 2)])
}

pub fn five_cycle_pattern() -> Pattern {
    pattern(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)])
}

pub fn k4_pattern() -> Pattern {
    pattern(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
}

/// Triangle, a one-petal star, and a two-petal star joined by two cross
/// edges; decomposes with rho = 9/2.
pub fn mixed_pattern() -> Pattern {
    pattern(
        8,
        &[
            (0, 1),
            (1, 2),
            (0, 2),
            (3, 4),
            (5, 6),
            (5, 7),
            (2, 3),
            (4, 5),
        ],
    )
}

pub fn complete_graph(n: usize) -> Graph {
    let edges: Vec<(u32, u32)> = (0..n as u32)
        .flat_map(|a| (a + 1..n as u32).map(move |b| (a, b)))
        .collect();
    Graph::from_edges(n, edges).unwrap()
}

pub fn cycle_graph(n: usize) -> Graph {
    let edges: Vec<(u32, u32)> = (0..n as u32).map(|i| (i, (i + 1) % n as u32)).collect();
    Graph::from_edges(n, edges).unwrap()
}

/// Minimum total weight over all feasible covers with edge values in
/// {0, 1/2, 1}, by branch and bound; the independent oracle for the
/// decomposition objective. Returns the minimum in half-units.
pub fn brute_force_cover_halves(g: &Graph) -> u32 {
    let n = g.n();
    let m = g.m();
    // incident edge lists
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (t, &(a, b)) in g.edges().iter().enumerate() {
        incident[a as usize].push(t);
        incident[b as usize].push(t);
    }
    let mut best = 2 * m as u32; // all edges at value 1 is feasible

    // coverage[v] in half-units; need >= 2 everywhere
    fn rec(
        t: usize,
        g: &Graph,
        incident: &[Vec<usize>],
        coverage: &mut Vec<u32>,
        sum_halves: u32,
        best: &mut u32,
    ) {
        if sum_halves >= *best {
            return;
        }
        let m = g.m();
        if t == m {
            if coverage.iter().all(|&c| c >= 2) {
                *best = sum_halves;
            }
            return;
        }
        // lower bound: every deficit half-unit needs half an edge unit,
        // and one edge unit serves at most two vertices
        let deficit: u32 = coverage.iter().map(|&c| 2u32.saturating_sub(c)).sum();
        if sum_halves + deficit.div_ceil(2) >= *best {
            return;
        }
        // feasibility: a vertex whose remaining incident edges all lie
        // before t can no longer be covered
        let (a, b) = g.edge(t);
        for x in [0u32, 1, 2] {
            coverage[a as usize] += x;
            coverage[b as usize] += x;
            // cheap forward check: a and b are the only vertices whose last
            // chance may pass with this edge
            let mut ok = true;
            for &v in [a, b].iter() {
                if coverage[v as usize] < 2
                    && incident[v as usize].iter().all(|&e| e <= t)
                {
                    ok = false;
                }
            }
            if ok {
                rec(t + 1, g, incident, coverage, sum_halves + x, best);
            }
            coverage[a as usize] -= x;
            coverage[b as usize] -= x;
        }
    }

    let mut coverage = vec![0u32; n];
    rec(0, g, &incident, &mut coverage, 0, &mut best);
    best
}

pub fn halves_to_rational(h: u32) -> Rational {
    Rational::new(h as i64, 2)
}

/// All connected graphs on exactly `n` labeled vertices, one representative
/// per isomorphism class (canonical form: minimum edge bitmask over all
/// vertex permutations).
pub fn connected_graph_classes(n: usize) -> Vec<Graph> {
    let pairs: Vec<(u32, u32)> = (0..n as u32)
        .flat_map(|a| (a + 1..n as u32).map(move |b| (a, b)))
        .collect();
    let bits = pairs.len();
    let pair_index = |a: u32, b: u32| -> usize {
        pairs
            .iter()
            .position(|&p| p == (a.min(b), a.max(b)))
            .unwrap()
    };
    // permutations of the vertex set as edge-bit remappings
    let mut perms: Vec<Vec<usize>> = Vec::new();
    let mut order: Vec<u32> = (0..n as u32).collect();
    permute(&mut order, 0, &mut |perm| {
        perms.push(
            pairs
                .iter()
                .map(|&(a, b)| pair_index(perm[a as usize], perm[b as usize]))
                .collect(),
        );
    });

    let mut reps = std::collections::HashSet::new();
    let mut out = Vec::new();
    for mask in 0u32..(1 << bits) {
        if !mask_connected(mask, &pairs, n) {
            continue;
        }
        let canon = perms
            .iter()
            .map(|p| {
                let mut remapped = 0u32;
                for (i, &j) in p.iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        remapped |= 1 << j;
                    }
                }
                remapped
            })
            .min()
            .unwrap();
        if reps.insert(canon) {
            let edges: Vec<(u32, u32)> = pairs
                .iter()
                .enumerate()
                .filter(|&(i, _)| canon & (1 << i) != 0)
                .map(|(_, &e)| e)
                .collect();
            out.push(Graph::from_edges(n, edges).unwrap());
        }
    }
    out
}

fn permute(order: &mut Vec<u32>, k: usize, f: &mut impl FnMut(&[u32])) {
    if k == order.len() {
        f(order);
        return;
    }
    for i in k..order.len() {
        order.swap(k, i);
        permute(order, k + 1, f);
        order.swap(k, i);
    }
}

fn mask_connected(mask: u32, pairs: &[(u32, u32)], n: usize) -> bool {
    let mut reach = 1u32; // vertex bitset, start from vertex 0
    loop {
        let mut grew = false;
        for (i, &(a, b)) in pairs.iter().enumerate() {
            if mask & (1 << i) == 0 {
                continue;
            }
            let (ba, bb) = (1u32 << a, 1u32 << b);
            if reach & ba != 0 && reach & bb == 0 {
                reach |= bb;
                grew = true;
            } else if reach & bb != 0 && reach & ba == 0 {
                reach |= ba;
                grew = true;
            }
        }
        if !grew {
            break;
        }
    }
    reach.count_ones() as usize == n
}

/// Random connected pattern on `nv` vertices: a random spanning tree plus
/// extra random edges.
pub fn random_connected_pattern(nv: usize, extra: usize, seed: u64) -> Pattern {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(u32, u32)> = Vec::new();
    for v in 1..nv as u32 {
        let parent = rng.random_range(0..v);
        edges.push((parent, v));
    }
    let mut tries = 0;
    let mut added = 0;
    while added < extra && tries < 50 {
        tries += 1;
        let a = rng.random_range(0..nv as u32);
        let b = rng.random_range(0..nv as u32);
        if a == b {
            continue;
        }
        let key = (a.min(b), a.max(b));
        if !edges.contains(&key) {
            edges.push(key);
            added += 1;
        }
    }
    Pattern::from_edges(nv, edges).unwrap()
}

/// Least-squares slope of y on x.
pub fn fit_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let cov: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let var: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    cov / var
}

pub type VId = VertexId;
