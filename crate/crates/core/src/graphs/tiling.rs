use std::collections::{BTreeMap, HashMap, VecDeque};

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::lightcone::{EdgeOrbit, LocalSubgraph, VertexLabel};

/// The two vertex-transitive planar grids, each with two edge types.
///
/// * `PentagonHexagon`: every vertex meets one pentagon and two hexagons. Type 0 edges
///   separate a pentagon from a hexagon, type 1 edges separate two hexagons.
/// * `TriSquareHex`: every vertex meets a triangle, two squares and a hexagon. Type 0
///   edges separate a hexagon from a square, type 1 edges a triangle from a square.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TilingFamily {
    PentagonHexagon,
    TriSquareHex,
}

impl TilingFamily {
    pub fn name(self) -> &'static str {
        match self {
            TilingFamily::PentagonHexagon => "tiling-5-6",
            TilingFamily::TriSquareHex => "tiling-3-4-6",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "tiling-5-6" => Some(TilingFamily::PentagonHexagon),
            "tiling-3-4-6" => Some(TilingFamily::TriSquareHex),
            _ => None,
        }
    }

    pub fn degree(self) -> usize {
        match self {
            TilingFamily::PentagonHexagon => 3,
            TilingFamily::TriSquareHex => 4,
        }
    }

    pub const NUM_TYPES: usize = 2;
}

/// A finite piece of a tiling. `full` marks vertices whose whole neighborhood is present.
#[derive(Clone, Debug)]
pub struct Patch {
    pub edges: Vec<(usize, usize, usize)>,
    pub adj: Vec<Vec<(usize, usize)>>,
    pub full: Vec<bool>,
    pub faces: BTreeMap<usize, usize>,
}

impl Patch {
    fn from_edges(n: usize, edges: Vec<(usize, usize, usize)>, degree: usize, faces: BTreeMap<usize, usize>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for &(u, v, t) in &edges {
            adj[u].push((v, t));
            adj[v].push((u, t));
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        let full = adj.iter().map(|a| a.len() == degree).collect();
        Self {
            edges,
            adj,
            full,
            faces,
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.adj.len()
    }
}

const ICO_NEIGHBORS: [[usize; 5]; 12] = [
    [1, 2, 3, 4, 5],
    [0, 2, 5, 6, 7],
    [0, 1, 3, 7, 8],
    [0, 2, 4, 8, 9],
    [0, 3, 5, 9, 10],
    [0, 1, 4, 10, 6],
    [1, 5, 7, 10, 11],
    [1, 2, 6, 8, 11],
    [2, 3, 7, 9, 11],
    [3, 4, 8, 10, 11],
    [4, 5, 9, 6, 11],
    [6, 7, 8, 9, 10],
];

/// Truncating the icosahedron: one vertex per dart `u -> v`. The dart pair `u -> v`,
/// `v -> u` gives a hexagon-hexagon edge; darts `u -> v`, `u -> w` with `v ~ w` lie on
/// the pentagon around `u`.
pub fn pentagon_hexagon_patch() -> Patch {
    let adjacent = |u: usize, v: usize| ICO_NEIGHBORS[u].contains(&v);
    let mut dart = HashMap::new();
    for u in 0..12 {
        for &v in &ICO_NEIGHBORS[u] {
            let id = dart.len();
            dart.insert((u, v), id);
        }
    }
    let mut edges = Vec::new();
    for (&(u, v), &i) in &dart {
        let j = dart[&(v, u)];
        if i < j {
            edges.push((i, j, 1));
        }
        for &w in &ICO_NEIGHBORS[u] {
            let k = dart[&(u, w)];
            if i < k && adjacent(v, w) {
                edges.push((i, k, 0));
            }
        }
    }
    edges.sort_unstable();
    let mut triangles = 0;
    for u in 0..12 {
        for v in u + 1..12 {
            for w in v + 1..12 {
                if adjacent(u, v) && adjacent(v, w) && adjacent(u, w) {
                    triangles += 1;
                }
            }
        }
    }
    let faces = BTreeMap::from([(5, 12), (6, triangles)]);
    Patch::from_edges(dart.len(), edges, 3, faces)
}

type Point = (i64, i64);

fn triangle_points(t: (i64, i64, bool)) -> [Point; 3] {
    let (i, j, up) = t;
    if up {
        [(i, j), (i + 1, j), (i, j + 1)]
    } else {
        [(i + 1, j), (i, j + 1), (i + 1, j + 1)]
    }
}

/// Expansion of the hexagonal tiling built from the triangular lattice within hexagonal
/// radius `r`. Vertices are corners (lattice point, lattice triangle); corners of one
/// triangle form a small triangle, and corners around one lattice point form a hexagon.
pub fn tri_square_hex_patch(r: i64) -> Patch {
    let inside = |(i, j): Point| i.abs() <= r && j.abs() <= r && (i + j).abs() <= r;
    let mut triangles = Vec::new();
    for i in -r..=r {
        for j in -r..=r {
            for up in [true, false] {
                let t = (i, j, up);
                if triangle_points(t).iter().all(|&p| inside(p)) {
                    triangles.push(t);
                }
            }
        }
    }
    let mut corner: HashMap<(Point, (i64, i64, bool)), usize> = HashMap::new();
    for &t in &triangles {
        for p in triangle_points(t) {
            let id = corner.len();
            corner.insert((p, t), id);
        }
    }
    let mut edges = Vec::new();
    let mut hexagon_edges = 0usize;
    for &t in &triangles {
        let pts = triangle_points(t);
        for a in 0..3 {
            for b in a + 1..3 {
                let (x, y) = (corner[&(pts[a], t)], corner[&(pts[b], t)]);
                edges.push((x.min(y), x.max(y), 1));
            }
        }
        if !t.2 {
            continue;
        }
        // down triangles sharing a lattice edge with this up triangle
        let (i, j, _) = t;
        for s in [(i, j, false), (i - 1, j, false), (i, j - 1, false)] {
            let sp = triangle_points(s);
            if !sp.iter().all(|&p| inside(p)) {
                continue;
            }
            for p in pts.iter().filter(|p| sp.contains(p)) {
                let (x, y) = (corner[&(*p, t)], corner[&(*p, s)]);
                edges.push((x.min(y), x.max(y), 0));
                hexagon_edges += 1;
            }
        }
    }
    edges.sort_unstable();
    let faces = BTreeMap::from([(3, triangles.len()), (4, hexagon_edges / 2)]);
    Patch::from_edges(corner.len(), edges, 4, faces)
}

/// Edge-type shares from type counts at fully surrounded vertices.
fn type_weights(patch: &Patch) -> [Ratio<u64>; 2] {
    let mut counts = [0u64; 2];
    for (v, a) in patch.adj.iter().enumerate() {
        if patch.full[v] {
            for &(_, t) in a {
                counts[t] += 1;
            }
        }
    }
    let total = counts[0] + counts[1];
    [Ratio::new(counts[0], total), Ratio::new(counts[1], total)]
}

fn patch_ball(patch: &Patch, root: (usize, usize), category: usize, p: usize) -> Option<LocalSubgraph> {
    let n = patch.num_vertices();
    let mut dist = vec![usize::MAX; n];
    let mut order = Vec::new();
    let mut q = VecDeque::new();
    for v in [root.0, root.1] {
        dist[v] = 0;
        order.push(v);
        q.push_back(v);
    }
    while let Some(u) = q.pop_front() {
        if !patch.full[u] {
            return None;
        }
        if dist[u] == p {
            continue;
        }
        for &(w, _) in &patch.adj[u] {
            if dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                order.push(w);
                q.push_back(w);
            }
        }
    }
    let mut index = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        index[v] = i;
    }
    let mut edges: Vec<_> = patch
        .edges
        .iter()
        .filter(|&&(u, v, _)| index[u] != usize::MAX && index[v] != usize::MAX)
        .map(|&(u, v, t)| {
            let (a, b) = (index[u], index[v]);
            (a.min(b), a.max(b), t)
        })
        .collect();
    edges.sort_unstable();
    Some(LocalSubgraph {
        vertices: order.iter().map(|&v| VertexLabel::Patch(v)).collect(),
        dist: order.iter().map(|&v| dist[v]).collect(),
        edges,
        root_edge: (0, 1),
        root_category: category,
        radius: p,
    })
}

const MAX_RADIUS: i64 = 64;

/// One orbit per edge type, each paired with its boundary-free radius-`p` ball.
pub fn tiling_orbits_and_lightcones(family: TilingFamily, p: usize) -> Result<Vec<(EdgeOrbit, LocalSubgraph)>> {
    let mut r = p as i64 + 2;
    loop {
        let (patch, center) = match family {
            TilingFamily::PentagonHexagon => (pentagon_hexagon_patch(), 0),
            TilingFamily::TriSquareHex => {
                let patch = tri_square_hex_patch(r);
                let center = central_vertex(&patch);
                (patch, center)
            }
        };
        let weights = type_weights(&patch);
        let mut out = Vec::new();
        for t in 0..TilingFamily::NUM_TYPES {
            let Some(&(other, _)) = patch.adj[center].iter().find(|&&(_, ty)| ty == t) else {
                break;
            };
            let Some(ball) = patch_ball(&patch, (center, other), t, p) else {
                break;
            };
            let edge = (center.min(other), center.max(other));
            out.push((
                EdgeOrbit {
                    category: t,
                    edge,
                    weight: weights[t],
                },
                ball,
            ));
        }
        if out.len() == TilingFamily::NUM_TYPES {
            return Ok(out);
        }
        if family == TilingFamily::PentagonHexagon || r >= MAX_RADIUS {
            return Err(Error::PatchTooSmall(p));
        }
        r += 2;
    }
}

/// The vertex farthest from the patch boundary.
fn central_vertex(patch: &Patch) -> usize {
    let n = patch.num_vertices();
    let mut dist = vec![usize::MAX; n];
    let mut q = VecDeque::new();
    for v in 0..n {
        if !patch.full[v] {
            dist[v] = 0;
            q.push_back(v);
        }
    }
    while let Some(u) = q.pop_front() {
        for &(w, _) in &patch.adj[u] {
            if dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                q.push_back(w);
            }
        }
    }
    (0..n).max_by_key(|&v| (dist[v], std::cmp::Reverse(v))).unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truncated_icosahedron_counts() {
        let p = pentagon_hexagon_patch();
        assert_eq!(p.num_vertices(), 60);
        assert_eq!(p.edges.len(), 90);
        assert!(p.full.iter().all(|&f| f));
        assert_eq!(5 * p.faces[&5], 3 * p.faces[&6]);
        for a in &p.adj {
            assert_eq!(a.iter().filter(|e| e.1 == 0).count(), 2);
            assert_eq!(a.iter().filter(|e| e.1 == 1).count(), 1);
        }
    }

    #[test]
    fn tri_square_hex_local_structure() {
        let p = tri_square_hex_patch(4);
        for (v, a) in p.adj.iter().enumerate() {
            if p.full[v] {
                assert_eq!(a.iter().filter(|e| e.1 == 0).count(), 2);
                assert_eq!(a.iter().filter(|e| e.1 == 1).count(), 2);
            }
        }
    }

    #[test]
    fn weights() {
        let five_six = tiling_orbits_and_lightcones(TilingFamily::PentagonHexagon, 1).unwrap();
        assert_eq!(five_six[0].0.weight, Ratio::new(2, 3));
        assert_eq!(five_six[1].0.weight, Ratio::new(1, 3));
        let tsh = tiling_orbits_and_lightcones(TilingFamily::TriSquareHex, 2).unwrap();
        assert_eq!(tsh[0].0.weight, Ratio::new(1, 2));
        assert_eq!(tsh[1].0.weight, Ratio::new(1, 2));
    }

    #[test]
    fn balls_are_boundary_free() {
        for p in 0..4 {
            for (_, g) in tiling_orbits_and_lightcones(TilingFamily::TriSquareHex, p).unwrap() {
                assert!(g.dist.iter().all(|&d| d <= p));
                assert_eq!(g.edges.iter().filter(|e| (e.0, e.1) == (0, 1)).count(), 1);
            }
        }
    }
}
