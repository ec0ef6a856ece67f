use std::collections::hash_map::DefaultHasher;
use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::graphs::address::{neighbors_unchecked, VertexAddress};
use crate::graphs::spec::AdditiveProductSpec;

/// Vertex identity inside a lightcone.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum VertexLabel {
    Address(VertexAddress),
    Patch(usize),
}

impl fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexLabel::Address(a) => write!(f, "{a}"),
            VertexLabel::Patch(i) => write!(f, "#{i}"),
        }
    }
}

/// One class of equivalent edges with its share of the total edge count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeOrbit {
    pub category: usize,
    pub edge: (usize, usize),
    pub weight: Ratio<u64>,
}

impl EdgeOrbit {
    pub fn weight_f64(&self) -> f64 {
        *self.weight.numer() as f64 / *self.weight.denom() as f64
    }
}

/// One orbit per edge of every underlined atom, all with weight `1 / total`.
pub fn enumerate_edge_orbits(spec: &AdditiveProductSpec) -> Vec<EdgeOrbit> {
    let total = spec.total_atom_edges() as u64;
    (0..spec.num_categories())
        .flat_map(|c| {
            spec.atom_edges(c).iter().map(move |&edge| EdgeOrbit {
                category: c,
                edge,
                weight: Ratio::new(1, total),
            })
        })
        .collect()
}

/// Induced ball of some radius around a root edge. The root edge is always `(0, 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalSubgraph {
    pub vertices: Vec<VertexLabel>,
    /// `(u, v, category)` with `u < v`, sorted.
    pub edges: Vec<(usize, usize, usize)>,
    pub root_edge: (usize, usize),
    pub root_category: usize,
    pub radius: usize,
    /// Distance of each vertex to the nearer root endpoint.
    pub dist: Vec<usize>,
}

impl LocalSubgraph {
    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for &(u, v, c) in &self.edges {
            adj[u].push((v, c));
            adj[v].push((u, c));
        }
        adj
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b, _)| a == v || b == v).count()
    }

    /// BFS distances from `s` inside the subgraph.
    pub fn distances_from(&self, s: usize) -> Vec<usize> {
        let adj = self.adjacency();
        let mut d = vec![usize::MAX; adj.len()];
        d[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            for &(w, _) in &adj[u] {
                if d[w] == usize::MAX {
                    d[w] = d[u] + 1;
                    q.push_back(w);
                }
            }
        }
        d
    }

    pub fn categories(&self) -> Vec<usize> {
        let mut cs: Vec<usize> = self.edges.iter().map(|e| e.2).collect();
        cs.sort_unstable();
        cs.dedup();
        cs
    }

    /// Same ball without edges joining two boundary vertices. Such edges cannot influence
    /// a depth-`radius` observable on the root edge.
    pub fn trimmed(&self) -> Self {
        let mut out = self.clone();
        let r = self.radius;
        out.edges.retain(|&(u, v, _)| self.dist[u] < r || self.dist[v] < r);
        out
    }

    /// Restriction to vertices within distance `radius` of the root edge.
    pub fn restrict(&self, radius: usize) -> Self {
        let keep: Vec<usize> = (0..self.vertices.len()).filter(|&v| self.dist[v] <= radius).collect();
        let mut index = vec![usize::MAX; self.vertices.len()];
        for (i, &v) in keep.iter().enumerate() {
            index[v] = i;
        }
        let mut edges: Vec<_> = self
            .edges
            .iter()
            .filter(|&&(u, v, _)| index[u] != usize::MAX && index[v] != usize::MAX)
            .map(|&(u, v, c)| (index[u], index[v], c))
            .collect();
        edges.sort_unstable();
        LocalSubgraph {
            vertices: keep.iter().map(|&v| self.vertices[v].clone()).collect(),
            edges,
            root_edge: self.root_edge,
            root_category: self.root_category,
            radius,
            dist: keep.iter().map(|&v| self.dist[v]).collect(),
        }
    }

    /// Isomorphism-invariant fingerprint of the rooted, category-labeled graph. Colors are
    /// refined Weisfeiler-Leman style from (root membership, distance); `relabel` maps
    /// categories before hashing so renamed systems can be compared.
    pub fn canonical_hash(&self, relabel: &dyn Fn(usize) -> usize) -> u64 {
        let n = self.vertices.len();
        let adj = self.adjacency();
        let h = |x: &dyn Fn(&mut DefaultHasher)| {
            let mut s = DefaultHasher::new();
            x(&mut s);
            s.finish()
        };
        let mut color: Vec<u64> = (0..n)
            .map(|v| {
                let is_root = v == self.root_edge.0 || v == self.root_edge.1;
                h(&|s| (is_root, self.dist[v]).hash(s))
            })
            .collect();
        let mut classes = distinct(&color);
        for _ in 0..n {
            let next: Vec<u64> = (0..n)
                .map(|v| {
                    let mut around: Vec<(usize, u64)> = adj[v].iter().map(|&(w, c)| (relabel(c), color[w])).collect();
                    around.sort_unstable();
                    h(&|s| (color[v], &around).hash(s))
                })
                .collect();
            let k = distinct(&next);
            color = next;
            if k == classes {
                break;
            }
            classes = k;
        }
        let mut vs = color.clone();
        vs.sort_unstable();
        let mut es: Vec<(u64, u64, usize)> = self
            .edges
            .iter()
            .map(|&(u, v, c)| (color[u].min(color[v]), color[u].max(color[v]), relabel(c)))
            .collect();
        es.sort_unstable();
        h(&|s| (&vs, &es, relabel(self.root_category)).hash(s))
    }
}

fn distinct(xs: &[u64]) -> usize {
    let mut v = xs.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len()
}

/// Ball of radius `p` around the orbit's representative edge `(a, b)` with addresses
/// rooted at `a`: `L = a`, `R = a C b`.
pub fn build_lightcone(spec: &AdditiveProductSpec, orbit: &EdgeOrbit, p: usize) -> LocalSubgraph {
    let (a, b) = orbit.edge;
    let left = VertexAddress::root(a);
    let right = left.child(orbit.category, b);
    ball(spec, left, right, orbit.category, p)
}

/// Same ball, but with addresses generated from root letter `v1`. The representative
/// edge is located as the first copy of `(a, b)` found in BFS order from `v1`.
pub fn build_lightcone_rooted(
    spec: &AdditiveProductSpec,
    orbit: &EdgeOrbit,
    p: usize,
    v1: usize,
) -> Result<LocalSubgraph> {
    let root = VertexAddress::root(v1);
    root.validate(spec)?;
    let (a, b) = orbit.edge;
    let c = orbit.category;
    let mut seen = std::collections::HashSet::from([root.clone()]);
    let mut q = VecDeque::from([root]);
    while let Some(x) = q.pop_front() {
        if x.last() == a && x.last_category() != Some(c) {
            let right = x.child(c, b);
            return Ok(ball(spec, x, right, c, p));
        }
        if x.depth() > 2 * spec.n() + 2 {
            break;
        }
        for (y, _) in neighbors_unchecked(spec, &x) {
            if seen.insert(y.clone()) {
                q.push_back(y);
            }
        }
    }
    Err(Error::InvalidAddress(format!(
        "no copy of edge ({a}, {b}) in atom {c} reachable from {v1}"
    )))
}

fn ball(
    spec: &AdditiveProductSpec,
    left: VertexAddress,
    right: VertexAddress,
    category: usize,
    p: usize,
) -> LocalSubgraph {
    let mut index: HashMap<VertexAddress, usize> = HashMap::new();
    let mut vertices = Vec::new();
    let mut dist = Vec::new();
    let mut q = VecDeque::new();
    for v in [left, right] {
        index.insert(v.clone(), vertices.len());
        vertices.push(v.clone());
        dist.push(0);
        q.push_back(v);
    }
    while let Some(x) = q.pop_front() {
        let d = dist[index[&x]];
        if d == p {
            continue;
        }
        for (y, _) in neighbors_unchecked(spec, &x) {
            if !index.contains_key(&y) {
                index.insert(y.clone(), vertices.len());
                vertices.push(y.clone());
                dist.push(d + 1);
                q.push_back(y);
            }
        }
    }
    let mut edges = Vec::new();
    for (i, x) in vertices.iter().enumerate() {
        for (y, c) in neighbors_unchecked(spec, x) {
            if let Some(&j) = index.get(&y) {
                if i < j {
                    edges.push((i, j, c));
                }
            }
        }
    }
    edges.sort_unstable();
    LocalSubgraph {
        vertices: vertices.into_iter().map(VertexLabel::Address).collect(),
        edges,
        root_edge: (0, 1),
        root_category: category,
        radius: p,
        dist,
    }
}
