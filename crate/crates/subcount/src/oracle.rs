//! Exact ground truth on desk-scale inputs: brute-force subgraph counts,
//! profile counts, colorful counts, and the copy-count upper bounds.
//!
//! Copies are counted once per image (vertex set plus edge set): the
//! backtracking search counts injective edge-preserving maps and divides by
//! the pattern's automorphism count, which is the number of such maps from
//! the pattern to itself.

use crate::graph::{DirectAccess, Color, Graph, VertexId};
use crate::pattern::{decompose, Decomposition, Pattern};
use crate::samplers::{copy_multiplicity, forms_cycle, forms_star, CycleProfile, OrientedEdge, StarProfile, SubgraphProfile};
use crate::{Error, Result};

pub const DEFAULT_NODE_BUDGET: u64 = 2_000_000_000;
const MAX_EXACT_PATTERN_VERTICES: usize = 10;
const MAX_PROFILE_ENUM_EDGES: usize = 60;

#[derive(Clone, Copy, Debug)]
pub struct ExactCount {
    /// Number of subgraphs of the host isomorphic to the pattern.
    pub subgraph_count: u64,
    /// Number of profiles forming a copy; `subgraph_count / f`.
    pub profile_count: u64,
    /// Copies with matching edge colors, when requested.
    pub colorful_count: Option<u64>,
}

pub struct Budget {
    left: u64,
    size: u64,
}

impl Budget {
    pub fn new(size: u64) -> Self {
        Budget { left: size, size }
    }

    pub fn spend(&mut self, amount: u64) -> Result<()> {
        if self.left < amount {
            return Err(Error::EnumerationBudget(self.size));
        }
        self.left -= amount;
        Ok(())
    }
}

/// Injective edge-preserving maps from `hg` into `g` (color-preserving when
/// `colored`).
fn count_embeddings(g: &Graph, hg: &Graph, colored: bool, budget: &mut Budget) -> Result<u64> {
    let nh = hg.n();
    // order pattern vertices to keep candidate sets adjacency-constrained:
    // highest degree first, then greedily by number of placed neighbors
    let mut order: Vec<VertexId> = Vec::with_capacity(nh);
    let mut placed = vec![false; nh];
    for _ in 0..nh {
        let next = (0..nh as VertexId)
            .filter(|&a| !placed[a as usize])
            .max_by_key(|&a| {
                let anchored = hg
                    .neighbors(a)
                    .iter()
                    .filter(|&&b| placed[b as usize])
                    .count();
                (anchored, hg.degree(a), std::cmp::Reverse(a))
            })
            .unwrap();
        placed[next as usize] = true;
        order.push(next);
    }
    let pos_of = {
        let mut p = vec![0usize; nh];
        for (i, &a) in order.iter().enumerate() {
            p[a as usize] = i;
        }
        p
    };
    // earlier-placed pattern neighbors of each position, with edge colors
    let prev_nbrs: Vec<Vec<(usize, Color)>> = order
        .iter()
        .map(|&a| {
            let mut list: Vec<(usize, Color)> = hg
                .neighbors(a)
                .iter()
                .filter(|&&b| pos_of[b as usize] < pos_of[a as usize])
                .map(|&b| {
                    (
                        pos_of[b as usize],
                        hg.edge_color_between(a, b).unwrap_or(0),
                    )
                })
                .collect();
            list.sort_unstable();
            list
        })
        .collect();
    let h_degrees: Vec<usize> = order.iter().map(|&a| hg.degree(a)).collect();

    #[allow(clippy::too_many_arguments)]
    fn rec(
        pos: usize,
        g: &Graph,
        order_len: usize,
        prev_nbrs: &[Vec<(usize, Color)>],
        h_degrees: &[usize],
        colored: bool,
        sigma: &mut Vec<VertexId>,
        used: &mut Vec<bool>,
        budget: &mut Budget,
    ) -> Result<u64> {
        if pos == order_len {
            return Ok(1);
        }
        let mut total = 0u64;
        let consider = |v: VertexId,
                        sigma: &mut Vec<VertexId>,
                        used: &mut Vec<bool>,
                        budget: &mut Budget|
         -> Result<u64> {
            budget.spend(1)?;
            if used[v as usize] || g.degree(v) < h_degrees[pos] {
                return Ok(0);
            }
            for &(p, want) in &prev_nbrs[pos] {
                match g.edge_color_between(sigma[p], v) {
                    None => return Ok(0),
                    Some(c) => {
                        if colored && c != want {
                            return Ok(0);
                        }
                    }
                }
            }
            sigma.push(v);
            used[v as usize] = true;
            let below = rec(
                pos + 1,
                g,
                order_len,
                prev_nbrs,
                h_degrees,
                colored,
                sigma,
                used,
                budget,
            )?;
            used[v as usize] = false;
            sigma.pop();
            Ok(below)
        };
        if let Some(&(anchor, _)) = prev_nbrs[pos].first() {
            let around = sigma[anchor];
            for i in 0..g.degree(around) {
                let v = g.neighbors(around)[i];
                total += consider(v, sigma, used, budget)?;
            }
        } else {
            for v in 0..g.n() as VertexId {
                total += consider(v, sigma, used, budget)?;
            }
        }
        Ok(total)
    }

    let mut sigma = Vec::with_capacity(nh);
    let mut used = vec![false; g.n()];
    rec(
        0,
        g,
        nh,
        &prev_nbrs,
        &h_degrees,
        colored,
        &mut sigma,
        &mut used,
        budget,
    )
}

/// Exact subgraph, profile, and (optionally) colorful counts.
pub fn exact_count(g: &Graph, h: &Pattern, colored: bool) -> Result<ExactCount> {
    exact_count_budgeted(g, h, colored, DEFAULT_NODE_BUDGET)
}

pub fn exact_count_budgeted(
    g: &Graph,
    h: &Pattern,
    colored: bool,
    budget_size: u64,
) -> Result<ExactCount> {
    if h.vertex_count() > MAX_EXACT_PATTERN_VERTICES {
        return Err(Error::InfeasibleInstance(format!(
            "exact counting caps patterns at {MAX_EXACT_PATTERN_VERTICES} vertices, got {}",
            h.vertex_count()
        )));
    }
    let mut budget = Budget::new(budget_size);
    let subgraph_count = count_copies(g, h.graph(), false, &mut budget)?;
    let d = decompose(h)?;
    let profile_count = if g.m() <= MAX_PROFILE_ENUM_EDGES {
        profile_count_components(g, h, &d, false, &mut budget)?
    } else {
        subgraph_count * d.profile_multiplicity()
    };
    let colorful_count = if colored {
        Some(count_copies(g, h.graph(), true, &mut budget)?)
    } else {
        None
    };
    Ok(ExactCount {
        subgraph_count,
        profile_count,
        colorful_count,
    })
}

/// Copies of `hg` in `g`, deduplicated by image: embeddings divided by the
/// pattern's (color-respecting, when `colored`) automorphism count.
fn count_copies(g: &Graph, hg: &Graph, colored: bool, budget: &mut Budget) -> Result<u64> {
    let aut = count_embeddings(hg, hg, colored, budget)?;
    debug_assert!(aut >= 1);
    let emb = count_embeddings(g, hg, colored, budget)?;
    assert_eq!(emb % aut, 0, "embeddings come in automorphism orbits");
    Ok(emb / aut)
}

/// Checks the copy-count bound `#H <= m^rho` and the same bound for every
/// nonempty sub-pattern induced by a subset of decomposition components.
pub fn agm_check(g: &Graph, h: &Pattern) -> Result<bool> {
    let d = decompose(h)?;
    let mut budget = Budget::new(DEFAULT_NODE_BUDGET);
    let o = d.cycles.len();
    let s = d.stars.len();
    for mask in 1u32..(1 << (o + s)) {
        let cycle_subset: Vec<usize> = (0..o).filter(|i| mask & (1 << i) != 0).collect();
        let star_subset: Vec<usize> = (0..s).filter(|j| mask & (1 << (o + j)) != 0).collect();
        let verts = d.component_vertices(&cycle_subset, &star_subset);
        let sub = induced_pattern(h.graph(), &verts)?;
        let count = count_copies(g, sub.graph(), false, &mut budget)?;
        let rho = d.sub_pattern_rho(&cycle_subset, &star_subset)?;
        if !count_within_power(count, g.m() as u64, rho) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `count <= m^rho`, compared exactly via squaring (`2 rho` is an integer).
pub fn count_within_power(count: u64, m: u64, rho: crate::pattern::Rational) -> bool {
    let two_rho = (rho * crate::pattern::Rational::new(2, 1)).to_integer() as u32;
    match (m as u128).checked_pow(two_rho) {
        None => true, // bound exceeds u128, count^2 < 2^128 always
        Some(bound) => (count as u128) * (count as u128) <= bound,
    }
}

/// The subgraph of `hg` induced on `verts`, renumbered to a fresh pattern.
pub fn induced_pattern(hg: &Graph, verts: &[VertexId]) -> Result<Pattern> {
    let index_of = |v: VertexId| verts.binary_search(&v).expect("vertex in selection") as VertexId;
    let mut edges = Vec::new();
    for &(a, b) in hg.edges() {
        if verts.binary_search(&a).is_ok() && verts.binary_search(&b).is_ok() {
            match hg.edge_color_between(a, b) {
                Some(c) if hg.is_colored() => edges.push((index_of(a), index_of(b), c)),
                _ => edges.push((index_of(a), index_of(b), 0)),
            }
        }
    }
    let g = if hg.is_colored() {
        Graph::from_colored_edges(verts.len(), edges)?
    } else {
        Graph::from_edges(
            verts.len(),
            edges.into_iter().map(|(a, b, _)| (a, b)).collect(),
        )?
    };
    Pattern::new(g)
}

/// Candidate profiles for one cycle slot, one per cycle subgraph of the
/// host: anchored at the order-minimal cycle vertex, directed toward the
/// order-smaller neighbor.
fn cycle_slot_candidates(
    g: &Graph,
    length: usize,
    budget: &mut Budget,
) -> Result<Vec<CycleProfile>> {
    let order = g.order();
    let mut found = Vec::new();
    // enumerate cycles once each: smallest id first, second < last neighbor
    fn dfs(
        g: &Graph,
        start: VertexId,
        length: usize,
        path: &mut Vec<VertexId>,
        on_path: &mut Vec<bool>,
        found: &mut Vec<Vec<VertexId>>,
        budget: &mut Budget,
    ) -> Result<()> {
        let last = *path.last().unwrap();
        if path.len() == length {
            budget.spend(1)?;
            if last > path[1] && g.has_edge(last, start) {
                found.push(path.clone());
            }
            return Ok(());
        }
        for &w in g.neighbors(last) {
            budget.spend(1)?;
            if w <= start || on_path[w as usize] {
                continue;
            }
            path.push(w);
            on_path[w as usize] = true;
            dfs(g, start, length, path, on_path, found, budget)?;
            on_path[w as usize] = false;
            path.pop();
        }
        Ok(())
    }

    let mut raw_cycles = Vec::new();
    for start in 0..g.n() as VertexId {
        let mut path = vec![start];
        let mut on_path = vec![false; g.n()];
        on_path[start as usize] = true;
        dfs(
            g,
            start,
            length,
            &mut path,
            &mut on_path,
            &mut raw_cycles,
            budget,
        )?;
    }

    for cyc in raw_cycles {
        // canonical profile: anchor at the order-minimal vertex, walk toward
        // the order-smaller neighbor
        let len = cyc.len();
        let apos = (0..len)
            .min_by(|&i, &j| {
                if order.precedes(cyc[i], cyc[j]) {
                    std::cmp::Ordering::Less
                } else {
                    std::cmp::Ordering::Greater
                }
            })
            .unwrap();
        let before = cyc[(apos + len - 1) % len];
        let after = cyc[(apos + 1) % len];
        let forward = order.precedes(after, before);
        let seq: Vec<VertexId> = (0..len)
            .map(|i| {
                if forward {
                    cyc[(apos + i) % len]
                } else {
                    cyc[(apos + len - i) % len]
                }
            })
            .collect();
        let k = (len - 1) / 2;
        let edges: Vec<OrientedEdge> = (0..k)
            .map(|i| OrientedEdge {
                from: seq[2 * i],
                to: seq[2 * i + 1],
                color: g.edge_color_between(seq[2 * i], seq[2 * i + 1]).unwrap(),
            })
            .collect();
        let closing = seq[len - 1];
        let profile = CycleProfile {
            closing,
            closing_color: g.edge_color_between(seq[0], closing).unwrap(),
            edges,
        };
        debug_assert!(forms_cycle(&mut DirectAccess(g), &profile));
        found.push(profile);
    }
    Ok(found)
}

/// Candidate profiles for one star slot: every center with every petal
/// subset; single-petal stars are anchored at the order-smaller endpoint.
fn star_slot_candidates(
    g: &Graph,
    petals: usize,
    budget: &mut Budget,
) -> Result<Vec<StarProfile>> {
    let order = g.order();
    let mut found = Vec::new();
    if petals == 1 {
        for &(a, b) in g.edges() {
            budget.spend(1)?;
            let (v, w) = if order.precedes(a, b) { (a, b) } else { (b, a) };
            found.push(StarProfile {
                center: v,
                center_degree: g.degree(v),
                petals: vec![(w, g.edge_color_between(v, w).unwrap())],
            });
        }
        return Ok(found);
    }
    for v in 0..g.n() as VertexId {
        let nbrs = g.neighbors(v);
        if nbrs.len() < petals {
            continue;
        }
        // lexicographic combinations of neighbor indices
        let deg = nbrs.len();
        let mut combo: Vec<usize> = (0..petals).collect();
        loop {
            budget.spend(1)?;
            found.push(StarProfile {
                center: v,
                center_degree: deg,
                petals: combo
                    .iter()
                    .map(|&i| (nbrs[i], g.edge_color_between(v, nbrs[i]).unwrap()))
                    .collect(),
            });
            // advance: bump the rightmost index that still has headroom
            let Some(i) = (0..petals).rev().find(|&i| combo[i] < i + deg - petals) else {
                break;
            };
            combo[i] += 1;
            for j in i + 1..petals {
                combo[j] = combo[j - 1] + 1;
            }
        }
    }
    Ok(found)
}

/// Profile count computed from per-component candidates: enumerate valid
/// component profiles per slot, then all injective slot combinations, and
/// count those forming a copy.
pub fn profile_count_components(
    g: &Graph,
    h: &Pattern,
    d: &Decomposition,
    colored: bool,
    budget: &mut Budget,
) -> Result<u64> {
    let mut slots: Vec<Vec<SlotCandidate>> = Vec::new();
    for cyc in &d.cycles {
        let cands = cycle_slot_candidates(g, cyc.len(), budget)?;
        slots.push(
            cands
                .into_iter()
                .map(|p| {
                    let verts = p.walk();
                    SlotCandidate::Cycle(p, verts)
                })
                .collect(),
        );
    }
    for (_, petals) in &d.stars {
        let cands = star_slot_candidates(g, petals.len(), budget)?;
        slots.push(
            cands
                .into_iter()
                .map(|p| {
                    let mut verts: Vec<VertexId> =
                        p.petals.iter().map(|&(w, _)| w).collect();
                    verts.push(p.center);
                    SlotCandidate::Star(p, verts)
                })
                .collect(),
        );
    }

    enum SlotCandidate {
        Cycle(CycleProfile, Vec<VertexId>),
        Star(StarProfile, Vec<VertexId>),
    }

    #[allow(clippy::too_many_arguments)]
    fn rec(
        g: &Graph,
        h: &Pattern,
        d: &Decomposition,
        colored: bool,
        slots: &[Vec<SlotCandidate>],
        slot: usize,
        used: &mut Vec<bool>,
        profile: &mut SubgraphProfile,
        budget: &mut Budget,
    ) -> Result<u64> {
        if slot == slots.len() {
            return Ok(copy_multiplicity(&mut DirectAccess(g), h, d, profile, colored));
        }
        let mut total = 0u64;
        'cands: for cand in &slots[slot] {
            budget.spend(1)?;
            let verts = match cand {
                SlotCandidate::Cycle(_, v) | SlotCandidate::Star(_, v) => v,
            };
            for &v in verts {
                if used[v as usize] {
                    continue 'cands;
                }
            }
            for &v in verts {
                used[v as usize] = true;
            }
            match cand {
                SlotCandidate::Cycle(p, _) => profile.cycles.push(p.clone()),
                SlotCandidate::Star(p, _) => profile.stars.push(p.clone()),
            }
            total += rec(g, h, d, colored, slots, slot + 1, used, profile, budget)?;
            match cand {
                SlotCandidate::Cycle(_, _) => {
                    profile.cycles.pop();
                }
                SlotCandidate::Star(_, _) => {
                    profile.stars.pop();
                }
            }
            for &v in verts {
                used[v as usize] = false;
            }
        }
        Ok(total)
    }

    let mut used = vec![false; g.n()];
    let mut profile = SubgraphProfile::default();
    rec(
        g, h, d, colored, &slots, 0, &mut used, &mut profile, budget,
    )
}

/// Number of distinct pattern profiles that form a copy when the host graph
/// is the pattern itself; `1/f`.
pub fn self_profile_count(h: &Pattern, d: &Decomposition) -> Result<u64> {
    let mut budget = Budget::new(DEFAULT_NODE_BUDGET);
    profile_count_components(h.graph(), h, d, false, &mut budget)
}

/// As [`self_profile_count`] but requiring matching colors; `1/f` for
/// colorful counting.
pub fn self_profile_count_colored(h: &Pattern, d: &Decomposition) -> Result<u64> {
    let mut budget = Budget::new(DEFAULT_NODE_BUDGET);
    profile_count_components(h.graph(), h, d, true, &mut budget)
}

/// Exhaustive profile enumeration: every oriented edge tuple, closing
/// vertex, center, and petal subset, counting the profiles that pass the
/// copy check. Hosts are capped at 60 edges.
pub fn exact_profile_enumeration(g: &Graph, h: &Pattern, d: &Decomposition) -> Result<u64> {
    if g.m() > MAX_PROFILE_ENUM_EDGES {
        return Err(Error::InfeasibleInstance(format!(
            "profile enumeration caps hosts at {MAX_PROFILE_ENUM_EDGES} edges, got {}",
            g.m()
        )));
    }
    let mut budget = Budget::new(DEFAULT_NODE_BUDGET);
    let order = g.order();

    // raw per-slot enumeration, prefiltered by the component predicates
    let mut cycle_slots: Vec<Vec<CycleProfile>> = Vec::new();
    for cyc in &d.cycles {
        let k = (cyc.len() - 1) / 2;
        let mut valid = Vec::new();
        // directed copies of every edge
        let mut directed: Vec<(VertexId, VertexId)> = Vec::with_capacity(2 * g.m());
        for &(a, b) in g.edges() {
            directed.push((a, b));
            directed.push((b, a));
        }
        let mut tuple: Vec<(VertexId, VertexId)> = Vec::with_capacity(k);
        fn extend(
            g: &Graph,
            order: &crate::graph::VertexOrder<'_>,
            directed: &[(VertexId, VertexId)],
            k: usize,
            tuple: &mut Vec<(VertexId, VertexId)>,
            valid: &mut Vec<CycleProfile>,
            budget: &mut Budget,
        ) -> Result<()> {
            if tuple.len() == k {
                let u1 = tuple[0].0;
                for &w in g.neighbors(u1) {
                    budget.spend(1)?;
                    let profile = CycleProfile {
                        edges: tuple
                            .iter()
                            .map(|&(x, y)| OrientedEdge {
                                from: x,
                                to: y,
                                color: g.edge_color_between(x, y).unwrap(),
                            })
                            .collect(),
                        closing: w,
                        closing_color: g.edge_color_between(u1, w).unwrap(),
                    };
                    if forms_cycle(&mut DirectAccess(g), &profile) {
                        valid.push(profile);
                    }
                }
                return Ok(());
            }
            for &(x, y) in directed {
                budget.spend(1)?;
                if tuple.is_empty() && !order.precedes(x, y) {
                    continue; // first edge is oriented by the vertex order
                }
                tuple.push((x, y));
                extend(g, order, directed, k, tuple, valid, budget)?;
                tuple.pop();
            }
            Ok(())
        }
        extend(g, &order, &directed, k, &mut tuple, &mut valid, &mut budget)?;
        cycle_slots.push(valid);
    }

    let mut star_slots: Vec<Vec<StarProfile>> = Vec::new();
    for (_, petals) in &d.stars {
        let mut valid = star_slot_candidates(g, petals.len(), &mut budget)?;
        valid.retain(|p| forms_star(&mut DirectAccess(g), p));
        star_slots.push(valid);
    }

    // cartesian product over slots
    #[allow(clippy::too_many_arguments)]
    fn combine(
        g: &Graph,
        h: &Pattern,
        d: &Decomposition,
        cycle_slots: &[Vec<CycleProfile>],
        star_slots: &[Vec<StarProfile>],
        slot: usize,
        profile: &mut SubgraphProfile,
        budget: &mut Budget,
    ) -> Result<u64> {
        let o = cycle_slots.len();
        if slot == o + star_slots.len() {
            return Ok(copy_multiplicity(&mut DirectAccess(g), h, d, profile, false));
        }
        let mut total = 0;
        if slot < o {
            for p in &cycle_slots[slot] {
                budget.spend(1)?;
                profile.cycles.push(p.clone());
                total += combine(g, h, d, cycle_slots, star_slots, slot + 1, profile, budget)?;
                profile.cycles.pop();
            }
        } else {
            for p in &star_slots[slot - o] {
                budget.spend(1)?;
                profile.stars.push(p.clone());
                total += combine(g, h, d, cycle_slots, star_slots, slot + 1, profile, budget)?;
                profile.stars.pop();
            }
        }
        Ok(total)
    }

    let mut profile = SubgraphProfile::default();
    combine(
        g,
        h,
        d,
        &cycle_slots,
        &star_slots,
        0,
        &mut profile,
        &mut budget,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::Rational;

    fn graph(text: &str) -> Graph {
        Graph::parse_str(text).unwrap()
    }

    fn pattern(n: usize, edges: &[(u32, u32)]) -> Pattern {
        Pattern::from_edges(n, edges.to_vec()).unwrap()
    }

    fn k4() -> Graph {
        graph("4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3")
    }

    fn triangle() -> Pattern {
        pattern(3, &[(0, 1), (1, 2), (0, 2)])
    }

    #[test]
    fn triangles_in_k4() {
        let c = exact_count(&k4(), &triangle(), false).unwrap();
        assert_eq!(c.subgraph_count, 4);
        assert_eq!(c.profile_count, 4);
    }

    #[test]
    fn five_cycle_in_itself() {
        let g = graph("5 5\n0 1\n1 2\n2 3\n3 4\n4 0");
        let h = pattern(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        let c = exact_count(&g, &h, false).unwrap();
        assert_eq!(c.subgraph_count, 1);
        assert_eq!(c.profile_count, 1);
    }

    #[test]
    fn two_petal_stars_in_k3() {
        let g = graph("3 3\n0 1\n1 2\n0 2");
        let h = pattern(3, &[(0, 1), (0, 2)]);
        let c = exact_count(&g, &h, false).unwrap();
        assert_eq!(c.subgraph_count, 3);
    }

    #[test]
    fn profile_count_of_disjoint_triangle_pair() {
        let g = graph("6 6\n0 1\n1 2\n0 2\n3 4\n4 5\n3 5");
        let h = pattern(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]);
        let d = decompose(&h).unwrap();
        assert_eq!(exact_profile_enumeration(&g, &h, &d).unwrap(), 2);
        assert_eq!(d.f, Rational::new(1, 2));
        let c = exact_count(&g, &h, false).unwrap();
        assert_eq!(c.subgraph_count, 1);
        assert_eq!(c.profile_count, 2);
    }

    #[test]
    fn k4_profile_enumeration_matches_f_of_one_sixth() {
        let h = pattern(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        let d = decompose(&h).unwrap();
        // two single-petal slots over three perfect matchings, ordered
        assert_eq!(d.f, Rational::new(1, 6));
        let c = exact_count(&k4(), &h, false).unwrap();
        assert_eq!(c.subgraph_count, 1);
        assert_eq!(c.profile_count, 6);
    }

    #[test]
    fn raw_enumeration_matches_component_enumeration() {
        let g = graph("7 9\n0 1\n1 2\n0 2\n2 3\n3 4\n4 5\n5 6\n4 6\n1 4");
        for h in [
            triangle(),
            pattern(3, &[(0, 1), (0, 2)]),
            pattern(2, &[(0, 1)]),
            pattern(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]),
        ] {
            let d = decompose(&h).unwrap();
            let raw = exact_profile_enumeration(&g, &h, &d).unwrap();
            let mut budget = Budget::new(DEFAULT_NODE_BUDGET);
            let smart = profile_count_components(&g, &h, &d, false, &mut budget).unwrap();
            assert_eq!(raw, smart);
        }
    }

    #[test]
    fn every_pattern_counts_once_in_itself() {
        for h in [
            triangle(),
            pattern(2, &[(0, 1)]),
            pattern(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]),
            pattern(4, &[(0, 1), (1, 2), (2, 3)]),
        ] {
            let c = exact_count(h.graph(), &h, false).unwrap();
            assert_eq!(c.subgraph_count, 1);
        }
    }

    #[test]
    fn colorful_count_restricts_plain_count() {
        // one triangle colored 0-0-1, pattern asks for 0-0-1 in some rotation
        let g = graph("3 3 colored\n0 1 0\n1 2 0\n0 2 1");
        let h = Pattern::new(graph("3 3 colored\n0 1 0\n1 2 1\n0 2 0")).unwrap();
        let c = exact_count(&g, &h, true).unwrap();
        assert_eq!(c.subgraph_count, 1);
        assert_eq!(c.colorful_count, Some(1));

        // mismatched colors: plain copy exists, colorful does not
        let h2 = Pattern::new(graph("3 3 colored\n0 1 1\n1 2 1\n0 2 1")).unwrap();
        let c2 = exact_count(&g, &h2, true).unwrap();
        assert_eq!(c2.subgraph_count, 1);
        assert_eq!(c2.colorful_count, Some(0));
    }

    #[test]
    fn agm_bound_holds_on_k4() {
        assert!(agm_check(&k4(), &triangle()).unwrap());
        // 4 <= 6^1.5 directly
        assert!(count_within_power(4, 6, Rational::new(3, 2)));
        assert!(!count_within_power(15, 6, Rational::new(3, 2)));
    }
}
