//! Component samplers, profile validity predicates, and the recursive
//! subgraph-sampler estimator.
//!
//! A draw samples one potential copy of each decomposition component:
//! odd cycles from directed edge tuples plus a closing neighbor, stars from
//! a degree-proportional center plus a petal subset. Each outcome is
//! weighted by the inverse of its sampling probability. Averaging over the
//! closing-vertex extensions of each cycle block keeps the variance within
//! the `O(m^rho)` envelope.

use std::collections::HashMap;

use crate::graph::{precedes_by_degree, Color, GraphAccess, QuerySession, VertexId};
use crate::pattern::{Decomposition, Pattern};
use crate::Result;

/// A directed copy of a sampled edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrientedEdge {
    pub from: VertexId,
    pub to: VertexId,
    pub color: Color,
}

/// A potential odd-cycle copy: `k` oriented edges plus a closing vertex
/// drawn from the first edge's anchor neighborhood.
///
/// Invariants: `edges[0].from` precedes `edges[0].to` in the vertex order,
/// and `closing` is a neighbor of `edges[0].from` (so the wrap-around edge
/// exists by construction; `closing_color` is its color).
#[derive(Clone, Debug)]
pub struct CycleProfile {
    pub edges: Vec<OrientedEdge>,
    pub closing: VertexId,
    pub closing_color: Color,
}

impl CycleProfile {
    pub fn anchor(&self) -> VertexId {
        self.edges[0].from
    }

    /// The would-be cycle walk `u_1, v_1, u_2, v_2, ..., u_k, v_k, w`.
    pub fn walk(&self) -> Vec<VertexId> {
        let mut seq = Vec::with_capacity(2 * self.edges.len() + 1);
        for e in &self.edges {
            seq.push(e.from);
            seq.push(e.to);
        }
        seq.push(self.closing);
        seq
    }
}

/// A potential star copy: a center and an unordered petal subset of its
/// neighborhood, with the petal edge colors observed at sampling time.
#[derive(Clone, Debug)]
pub struct StarProfile {
    pub center: VertexId,
    pub center_degree: usize,
    /// Distinct petals with petal-edge colors, sorted by vertex id.
    pub petals: Vec<(VertexId, Color)>,
}

/// One potential copy of the whole pattern, component by component in
/// decomposition order.
#[derive(Clone, Debug, Default)]
pub struct SubgraphProfile {
    pub cycles: Vec<CycleProfile>,
    pub stars: Vec<StarProfile>,
}

/// Output of one odd-cycle sampler call: the sampled edge tuple and the
/// closing-vertex extensions, with the inverse-probability node values.
#[derive(Clone, Debug)]
pub struct CycleBlock {
    pub edges: Vec<OrientedEdge>,
    pub anchor: VertexId,
    pub anchor_degree: usize,
    /// `ceil(d* / sqrt(m))` closing vertices, each uniform in the anchor
    /// neighborhood.
    pub witnesses: Vec<(VertexId, Color)>,
    /// `(2m)^k / 2`.
    pub root_value: f64,
    /// `d*`.
    pub leaf_value: f64,
}

/// Output of one star sampler call. `petals` is `None` when the center
/// degree is below the petal count (a dead block contributing zero).
#[derive(Clone, Debug)]
pub struct StarBlock {
    pub center: VertexId,
    pub center_degree: usize,
    pub petals: Option<Vec<(VertexId, Color)>>,
    /// `2m / d_v`.
    pub root_value: f64,
    /// `C(d_v, l)`.
    pub leaf_value: f64,
}

/// Smallest integer `t >= 1` with `t^2 m >= d^2`, i.e. `ceil(d / sqrt(m))`
/// in exact arithmetic.
pub fn ceil_div_by_sqrt(d: u64, m: u64) -> u64 {
    debug_assert!(m >= 1);
    let target = (d as u128) * (d as u128);
    let mut t = ((d as f64) / (m as f64).sqrt()).ceil() as u64;
    t = t.max(1);
    while t > 1 && ((t - 1) as u128).pow(2) * (m as u128) >= target {
        t -= 1;
    }
    while (t as u128).pow(2) * (m as u128) < target {
        t += 1;
    }
    t
}

pub fn binomial_f64(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let mut r = 1.0;
    for i in 0..k {
        r = r * (n - i) as f64 / (i + 1) as f64;
    }
    r
}

/// Samples a two-level cycle block for `C_{2k+1}`: `k` edge-sample queries,
/// two degree queries, and one neighbor query per closing vertex.
///
/// The first edge is oriented so its source precedes its target; the
/// remaining edges take a uniformly random direction.
pub fn sample_odd_cycle(s: &mut QuerySession, k: usize) -> Result<CycleBlock> {
    assert!(k >= 1, "odd cycles have length at least 3");
    let m = s.m() as u64;
    let (a, b, c0) = s.edge_sample_query()?;
    let da = s.degree_query(a)?;
    let db = s.degree_query(b)?;
    let (u1, v1, d_star) = if precedes_by_degree(a, da, b, db) {
        (a, b, da)
    } else {
        (b, a, db)
    };
    let mut edges = Vec::with_capacity(k);
    edges.push(OrientedEdge {
        from: u1,
        to: v1,
        color: c0,
    });
    for _ in 1..k {
        let (x, y, c) = s.edge_sample_query()?;
        let (from, to) = if s.random_bit() { (x, y) } else { (y, x) };
        edges.push(OrientedEdge { from, to, color: c });
    }
    let t = ceil_div_by_sqrt(d_star as u64, m);
    let mut witnesses = Vec::with_capacity(t as usize);
    for _ in 0..t {
        let i = s.random_index(d_star);
        witnesses.push(s.neighbor_query(u1, i)?);
    }
    Ok(CycleBlock {
        edges,
        anchor: u1,
        anchor_degree: d_star,
        witnesses,
        root_value: (2.0 * m as f64).powi(k as i32) / 2.0,
        leaf_value: d_star as f64,
    })
}

/// Samples a star block for `S_l`: one edge-sample query, one degree query,
/// and `l` neighbor queries (none when the block is dead).
///
/// The center is drawn with probability `d_v / 2m`; petals are a uniform
/// `l`-subset of its neighborhood, without replacement.
pub fn sample_star(s: &mut QuerySession, ell: usize) -> Result<StarBlock> {
    let m = s.m() as u64;
    let (a, b, _) = s.edge_sample_query()?;
    let v = if s.random_bit() { a } else { b };
    let dv = s.degree_query(v)?;
    if dv < ell {
        return Ok(StarBlock {
            center: v,
            center_degree: dv,
            petals: None,
            root_value: 2.0 * m as f64 / dv as f64,
            leaf_value: 0.0,
        });
    }
    // partial Fisher-Yates over neighbor indices, materialized sparsely
    let mut swapped: HashMap<usize, usize> = HashMap::new();
    let mut petals = Vec::with_capacity(ell);
    for j in 0..ell {
        let r = j + s.random_index(dv - j);
        let pick = *swapped.get(&r).unwrap_or(&r);
        let at_j = *swapped.get(&j).unwrap_or(&j);
        swapped.insert(r, at_j);
        petals.push(s.neighbor_query(v, pick)?);
    }
    petals.sort_unstable();
    Ok(StarBlock {
        center: v,
        center_degree: dv,
        petals: Some(petals),
        root_value: 2.0 * m as f64 / dv as f64,
        leaf_value: binomial_f64(dv, ell),
    })
}

/// Degree lookups deduplicated per copy check, so the order comparisons
/// cost one degree query per distinct vertex.
struct DegreeMemo {
    map: HashMap<VertexId, usize>,
}

impl DegreeMemo {
    fn new() -> Self {
        DegreeMemo {
            map: HashMap::new(),
        }
    }

    fn get(&mut self, acc: &mut impl GraphAccess, v: VertexId) -> usize {
        *self
            .map
            .entry(v)
            .or_insert_with(|| acc.fetch_degree(v))
    }

    fn precedes(&mut self, acc: &mut impl GraphAccess, u: VertexId, v: VertexId) -> bool {
        let du = self.get(acc, u);
        let dv = self.get(acc, v);
        precedes_by_degree(u, du, v, dv)
    }
}

/// Pair lookups deduplicated per copy check. Edges already observed while
/// sampling (with their colors) are seeded, so re-examining them is free.
struct EdgeMemo {
    map: HashMap<(VertexId, VertexId), Option<Color>>,
}

impl EdgeMemo {
    fn new() -> Self {
        EdgeMemo {
            map: HashMap::new(),
        }
    }

    fn seed(&mut self, u: VertexId, v: VertexId, color: Color) {
        self.map.insert((u.min(v), u.max(v)), Some(color));
    }

    fn get(&mut self, acc: &mut impl GraphAccess, u: VertexId, v: VertexId) -> Option<Color> {
        let key = (u.min(v), u.max(v));
        *self
            .map
            .entry(key)
            .or_insert_with(|| acc.fetch_edge(key.0, key.1))
    }
}

fn check_cycle(
    acc: &mut impl GraphAccess,
    degrees: &mut DegreeMemo,
    edges_seen: &mut EdgeMemo,
    p: &CycleProfile,
) -> bool {
    let seq = p.walk();
    let len = seq.len();
    // all vertices distinct
    let mut sorted = seq.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != len {
        return false;
    }
    // the anchor is order-minimal on the cycle, and the first target
    // precedes the closing vertex
    let u1 = seq[0];
    for &v in &seq[1..] {
        if !degrees.precedes(acc, u1, v) {
            return false;
        }
    }
    if !degrees.precedes(acc, seq[1], p.closing) {
        return false;
    }
    // connecting edges (v_i, u_{i+1}) and (v_k, w); sampled edges and the
    // wrap-around edge to the anchor are present by construction
    let k = p.edges.len();
    for i in 1..=k {
        let from = seq[2 * i - 1];
        let to = seq[(2 * i) % len];
        if edges_seen.get(acc, from, to).is_none() {
            return false;
        }
    }
    true
}

/// Whether a cycle profile forms a copy of `C_{2k+1}`: distinct vertices,
/// canonical anchoring, and all connecting edges present.
pub fn forms_cycle(acc: &mut impl GraphAccess, p: &CycleProfile) -> bool {
    let mut degrees = DegreeMemo::new();
    let mut edges = EdgeMemo::new();
    for e in &p.edges {
        edges.seed(e.from, e.to, e.color);
    }
    edges.seed(p.anchor(), p.closing, p.closing_color);
    check_cycle(acc, &mut degrees, &mut edges, p)
}

fn check_star(
    acc: &mut impl GraphAccess,
    degrees: &mut DegreeMemo,
    p: &StarProfile,
) -> bool {
    let mut prev: Option<VertexId> = None;
    for &(w, _) in &p.petals {
        if w == p.center || prev == Some(w) {
            return false;
        }
        prev = Some(w);
    }
    if p.petals.len() == 1 {
        // a single edge is a star copy only anchored at its smaller endpoint
        return degrees.precedes(acc, p.center, p.petals[0].0);
    }
    true
}

/// Whether a star profile forms a copy of `S_l`: distinct petals outside
/// the center, with single-petal stars anchored at the order-smaller
/// endpoint.
pub fn forms_star(acc: &mut impl GraphAccess, p: &StarProfile) -> bool {
    let mut degrees = DegreeMemo::new();
    check_star(acc, &mut degrees, p)
}

/// Number of distinct pattern copies a profile witnesses.
///
/// A witness is a decomposition-compatible correspondence (cycle slots may
/// rotate or reflect onto their image cycles, single-petal stars may swap
/// center and petal, larger stars may permute petals) under which every
/// pattern edge maps to a present host edge of the right color. Distinct
/// witnesses naming the same image subgraph count once. For patterns whose
/// decomposition has no cross edges the result is the plain 0/1 copy
/// indicator; in general this weighting is what makes the profile total a
/// fixed multiple of the copy count.
pub fn copy_multiplicity(
    acc: &mut impl GraphAccess,
    h: &Pattern,
    d: &Decomposition,
    r: &SubgraphProfile,
    colored: bool,
) -> u64 {
    witnessed_copies(acc, h, d, r, colored, false)
}

/// Whether a profile witnesses at least one copy of the pattern: every
/// component profile valid, the image vertex set of full size, and some
/// compatible correspondence mapping every cross edge onto a present (and
/// color-matching) host edge.
pub fn forms_copy(
    acc: &mut impl GraphAccess,
    h: &Pattern,
    d: &Decomposition,
    r: &SubgraphProfile,
    colored: bool,
) -> bool {
    witnessed_copies(acc, h, d, r, colored, true) > 0
}

fn witnessed_copies(
    acc: &mut impl GraphAccess,
    h: &Pattern,
    d: &Decomposition,
    r: &SubgraphProfile,
    colored: bool,
    stop_at_first: bool,
) -> u64 {
    debug_assert_eq!(r.cycles.len(), d.cycles.len());
    debug_assert_eq!(r.stars.len(), d.stars.len());

    // injectivity of the image across all components
    let nh = h.vertex_count();
    let mut images: Vec<VertexId> = Vec::with_capacity(nh);
    for p in &r.cycles {
        images.extend(p.walk());
    }
    for p in &r.stars {
        images.push(p.center);
        images.extend(p.petals.iter().map(|&(w, _)| w));
    }
    if images.len() != nh {
        return 0;
    }
    images.sort_unstable();
    images.dedup();
    if images.len() != nh {
        return 0;
    }

    let mut degrees = DegreeMemo::new();
    let mut edges = EdgeMemo::new();
    for p in &r.cycles {
        for e in &p.edges {
            edges.seed(e.from, e.to, e.color);
        }
        edges.seed(p.anchor(), p.closing, p.closing_color);
    }
    for p in &r.stars {
        for &(w, c) in &p.petals {
            edges.seed(p.center, w, c);
        }
    }

    for (i, p) in r.cycles.iter().enumerate() {
        debug_assert_eq!(p.walk().len(), d.cycles[i].len());
        if !check_cycle(acc, &mut degrees, &mut edges, p) {
            return 0;
        }
    }
    for (j, p) in r.stars.iter().enumerate() {
        debug_assert_eq!(p.petals.len(), d.stars[j].1.len());
        if !check_star(acc, &mut degrees, p) {
            return 0;
        }
    }

    // candidate correspondences per component; a component stays fixed
    // unless a cross edge or colors can distinguish its vertices (fixed
    // components never change the image, so enumerating them would only
    // revisit the same witness)
    let mut touches_cross = vec![false; nh];
    for &(a, b) in &d.cross_edges {
        touches_cross[a as usize] = true;
        touches_cross[b as usize] = true;
    }
    let mut candidates: Vec<Vec<Vec<(VertexId, VertexId)>>> = Vec::new();

    for (i, p) in r.cycles.iter().enumerate() {
        let stored = &d.cycles[i];
        let image = p.walk();
        let len = stored.len();
        let movable = stored.iter().any(|&a| touches_cross[a as usize]) || colored;
        if !movable {
            candidates.push(vec![stored.iter().copied().zip(image).collect()]);
            continue;
        }
        let mut maps = Vec::with_capacity(2 * len);
        for start in 0..len as isize {
            for dir in [1isize, -1] {
                maps.push(
                    (0..len as isize)
                        .map(|t| {
                            let src = stored[t as usize];
                            let dst = image[(start + dir * t).rem_euclid(len as isize) as usize];
                            (src, dst)
                        })
                        .collect(),
                );
            }
        }
        candidates.push(maps);
    }
    for (j, p) in r.stars.iter().enumerate() {
        let (center, stored) = &d.stars[j];
        if stored.len() == 1 {
            let flip = touches_cross[*center as usize] || touches_cross[stored[0] as usize];
            let mut maps = vec![vec![(*center, p.center), (stored[0], p.petals[0].0)]];
            if flip {
                maps.push(vec![(*center, p.petals[0].0), (stored[0], p.center)]);
            }
            candidates.push(maps);
            continue;
        }
        let petal_colors_differ = colored && {
            let mut cs = stored
                .iter()
                .map(|&a| h.graph().edge_color_between(*center, a).unwrap());
            let first = cs.next().unwrap();
            cs.any(|c| c != first)
        };
        let permute = stored.iter().any(|&a| touches_cross[a as usize]) || petal_colors_differ;
        if !permute {
            let mut map = vec![(*center, p.center)];
            map.extend(stored.iter().copied().zip(p.petals.iter().map(|&(w, _)| w)));
            candidates.push(vec![map]);
            continue;
        }
        let mut maps = Vec::new();
        let mut perm: Vec<usize> = (0..stored.len()).collect();
        loop {
            let mut map = vec![(*center, p.center)];
            map.extend(
                stored
                    .iter()
                    .enumerate()
                    .map(|(pos, &a)| (a, p.petals[perm[pos]].0)),
            );
            maps.push(map);
            if !next_permutation(&mut perm) {
                break;
            }
        }
        candidates.push(maps);
    }

    let mut sigma: Vec<VertexId> = vec![VertexId::MAX; nh];
    let mut seen_images: Vec<Vec<(VertexId, VertexId)>> = Vec::new();
    search_correspondences(
        acc,
        h,
        d,
        colored,
        &candidates,
        0,
        &mut sigma,
        &mut edges,
        &mut seen_images,
        stop_at_first,
    );
    seen_images.len() as u64
}

#[allow(clippy::too_many_arguments)]
fn search_correspondences(
    acc: &mut impl GraphAccess,
    h: &Pattern,
    d: &Decomposition,
    colored: bool,
    candidates: &[Vec<Vec<(VertexId, VertexId)>>],
    next: usize,
    sigma: &mut Vec<VertexId>,
    edges: &mut EdgeMemo,
    seen_images: &mut Vec<Vec<(VertexId, VertexId)>>,
    stop_at_first: bool,
) -> bool {
    if next == candidates.len() {
        if let Some(image) = mapped_image(acc, h, d, colored, sigma, edges) {
            if !seen_images.contains(&image) {
                seen_images.push(image);
            }
            return stop_at_first;
        }
        return false;
    }
    for map in &candidates[next] {
        for &(a, v) in map {
            sigma[a as usize] = v;
        }
        if search_correspondences(
            acc,
            h,
            d,
            colored,
            candidates,
            next + 1,
            sigma,
            edges,
            seen_images,
            stop_at_first,
        ) {
            return true;
        }
    }
    false
}

fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Image edge list of the pattern under the correspondence, if every cross
/// edge is present and (in colored mode) every pattern edge maps to an edge
/// of its own color.
fn mapped_image(
    acc: &mut impl GraphAccess,
    h: &Pattern,
    d: &Decomposition,
    colored: bool,
    sigma: &[VertexId],
    edges: &mut EdgeMemo,
) -> Option<Vec<(VertexId, VertexId)>> {
    for &(a, b) in &d.cross_edges {
        let got = edges.get(acc, sigma[a as usize], sigma[b as usize])?;
        if colored && got != h.graph().edge_color_between(a, b).unwrap() {
            return None;
        }
    }
    if colored {
        // component edges were seeded from the samples; only their colors
        // remain to be compared
        for (t, &(a, b)) in h.graph().edges().iter().enumerate() {
            let want = h.graph().edge_color(t);
            match edges.get(acc, sigma[a as usize], sigma[b as usize]) {
                Some(c) if c == want => {}
                _ => return None,
            }
        }
    }
    let mut image: Vec<(VertexId, VertexId)> = h
        .graph()
        .edges()
        .iter()
        .map(|&(a, b)| {
            let (u, v) = (sigma[a as usize], sigma[b as usize]);
            (u.min(v), u.max(v))
        })
        .collect();
    image.sort_unstable();
    Some(image)
}

/// One leaf of a traced draw: the assembled profile, the product of node
/// values along its root-to-leaf path, and the number of copies witnessed.
#[derive(Clone, Debug)]
pub struct LeafRecord {
    pub profile: SubgraphProfile,
    pub path_value: f64,
    pub witnessed: u64,
}

impl LeafRecord {
    /// One-line rendering for debugging and trace dumps:
    /// `cycle=(0>1,2>3;w4) star=(5;6,7) value=... witnessed=...`.
    pub fn trace_line(&self) -> String {
        let mut parts = Vec::new();
        for c in &self.profile.cycles {
            let edges: Vec<String> = c
                .edges
                .iter()
                .map(|e| format!("{}>{}", e.from, e.to))
                .collect();
            parts.push(format!("cycle=({};w{})", edges.join(","), c.closing));
        }
        for s in &self.profile.stars {
            let petals: Vec<String> = s.petals.iter().map(|&(w, _)| w.to_string()).collect();
            parts.push(format!("star=({};{})", s.center, petals.join(",")));
        }
        parts.push(format!("value={}", self.path_value));
        parts.push(format!("witnessed={}", self.witnessed));
        parts.join(" ")
    }
}

/// One unbiased estimator draw over the implicit sampler tree.
///
/// Cycle components branch over their closing-vertex extensions and average
/// the child estimates; star components have a single child. A leaf
/// evaluates the assembled profile and contributes the path value product
/// or zero. Expected query cost per draw is a constant for a fixed pattern.
pub fn subgraph_sampler_estimate(
    s: &mut QuerySession,
    h: &Pattern,
    d: &Decomposition,
    colored: bool,
) -> Result<f64> {
    let mut profile = SubgraphProfile::default();
    estimate_rec(s, h, d, colored, 0, &mut profile, 1.0, &mut None)
}

/// As [`subgraph_sampler_estimate`], recording one [`LeafRecord`] per leaf.
pub fn subgraph_sampler_estimate_traced(
    s: &mut QuerySession,
    h: &Pattern,
    d: &Decomposition,
    colored: bool,
) -> Result<(f64, Vec<LeafRecord>)> {
    let mut profile = SubgraphProfile::default();
    let mut trace = Some(Vec::new());
    let y = estimate_rec(s, h, d, colored, 0, &mut profile, 1.0, &mut trace)?;
    Ok((y, trace.unwrap()))
}

#[allow(clippy::too_many_arguments)]
fn estimate_rec(
    s: &mut QuerySession,
    h: &Pattern,
    d: &Decomposition,
    colored: bool,
    slot: usize,
    profile: &mut SubgraphProfile,
    path_value: f64,
    trace: &mut Option<Vec<LeafRecord>>,
) -> Result<f64> {
    let o = d.cycles.len();
    if slot == o + d.stars.len() {
        let witnessed = copy_multiplicity(s, h, d, profile, colored);
        if let Some(records) = trace {
            records.push(LeafRecord {
                profile: profile.clone(),
                path_value,
                witnessed,
            });
        }
        return Ok(witnessed as f64);
    }
    if slot < o {
        let block = sample_odd_cycle(s, d.cycle_half_length(slot))?;
        let mut sum = 0.0;
        let t = block.witnesses.len();
        for &(w, wc) in &block.witnesses {
            profile.cycles.push(CycleProfile {
                edges: block.edges.clone(),
                closing: w,
                closing_color: wc,
            });
            let below = estimate_rec(
                s,
                h,
                d,
                colored,
                slot + 1,
                profile,
                path_value * block.root_value * block.leaf_value,
                trace,
            )?;
            profile.cycles.pop();
            sum += block.leaf_value * below;
        }
        Ok(block.root_value * sum / t as f64)
    } else {
        let ell = d.petal_count(slot - o);
        let block = sample_star(s, ell)?;
        let Some(petals) = block.petals else {
            return Ok(0.0);
        };
        profile.stars.push(StarProfile {
            center: block.center,
            center_degree: block.center_degree,
            petals,
        });
        let below = estimate_rec(
            s,
            h,
            d,
            colored,
            slot + 1,
            profile,
            path_value * block.root_value * block.leaf_value,
            trace,
        )?;
        profile.stars.pop();
        Ok(block.root_value * block.leaf_value * below)
    }
}
