use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sentinel distance for vertex pairs that are not connected inside an atom.
pub const UNREACHABLE: usize = usize::MAX;

/// One generator graph `A_C` over the shared vertex set `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtomGraph {
    pub id: usize,
    pub edges: Vec<(usize, usize)>,
}

impl AtomGraph {
    pub fn new(id: usize, edges: Vec<(usize, usize)>) -> Self {
        Self { id, edges }
    }

    /// Vertices of the underlined atom (isolated vertices dropped), ascending.
    pub fn vertices(&self) -> Vec<usize> {
        let mut vs: Vec<usize> = self.edges.iter().flat_map(|&(u, v)| [u, v]).collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    fn edge_set(&self) -> Vec<(usize, usize)> {
        let mut es: Vec<_> = self.edges.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
        es.sort_unstable();
        es
    }
}

/// JSON form of an additive product specification.
///
/// ```json
/// {"n": 3, "atoms": [[[0,1],[1,2],[0,2]], [[0,1]], [[1,2]], [[0,2]]], "classes": [[0],[1,2,3]]}
/// ```
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecFile {
    pub n: usize,
    pub atoms: Vec<Vec<[usize; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classes: Option<Vec<Vec<usize>>>,
}

#[derive(Clone, Debug)]
pub(crate) struct AtomData {
    pub vertices: Vec<usize>,
    /// Neighbors inside the atom, indexed by global vertex.
    pub adj: Vec<Vec<usize>>,
    /// All-pairs distances inside the atom, `UNREACHABLE` when either end is absent.
    pub dist: Vec<Vec<usize>>,
    pub edges: Vec<(usize, usize)>,
}

impl AtomData {
    fn build(n: usize, atom: &AtomGraph) -> Self {
        let vertices = atom.vertices();
        let edges = atom.edge_set();
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        let mut dist = vec![vec![UNREACHABLE; n]; n];
        for &s in &vertices {
            dist[s] = bfs(&adj, s);
        }
        Self {
            vertices,
            adj,
            dist,
            edges,
        }
    }

    pub fn contains(&self, v: usize) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }
}

fn bfs(adj: &[Vec<usize>], s: usize) -> Vec<usize> {
    let mut d = vec![UNREACHABLE; adj.len()];
    d[s] = 0;
    let mut q = VecDeque::from([s]);
    while let Some(u) = q.pop_front() {
        for &w in &adj[u] {
            if d[w] == UNREACHABLE {
                d[w] = d[u] + 1;
                q.push_back(w);
            }
        }
    }
    d
}

/// A validated list of atoms generating an (infinite) additive product graph,
/// together with the partition of atom categories into parameter-sharing classes.
#[derive(Clone, Debug)]
pub struct AdditiveProductSpec {
    n: usize,
    atoms: Vec<AtomGraph>,
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
    pub(crate) data: Vec<AtomData>,
}

/// Checks every structural requirement and returns the validated spec.
///
/// Atoms are checked first (self-loops, range, duplicates, emptiness, connectivity),
/// then connectivity of the sum graph, then the class partition. When `classes` is
/// `None` every category gets its own class.
pub fn validate_spec(n: usize, atoms: Vec<AtomGraph>, classes: Option<Vec<Vec<usize>>>) -> Result<AdditiveProductSpec> {
    if atoms.is_empty() {
        return Err(Error::BadAtom {
            atom: 0,
            reason: "no atoms given".into(),
        });
    }
    for (c, atom) in atoms.iter().enumerate() {
        if atom.edges.is_empty() {
            return Err(Error::BadAtom {
                atom: c,
                reason: "underlined atom is empty".into(),
            });
        }
        let mut seen = std::collections::BTreeSet::new();
        for &(u, v) in &atom.edges {
            if u >= n || v >= n {
                return Err(Error::BadAtom {
                    atom: c,
                    reason: format!("edge {{{u}, {v}}} leaves the vertex set 0..{n}"),
                });
            }
            if u == v {
                return Err(Error::BadAtom {
                    atom: c,
                    reason: format!("self-loop at {u}"),
                });
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::DuplicateEdge { atom: c, u, v });
            }
        }
        let data = AtomData::build(n, atom);
        let s = data.vertices[0];
        if data.vertices.iter().any(|&v| data.dist[s][v] == UNREACHABLE) {
            return Err(Error::BadAtom {
                atom: c,
                reason: "underlined atom is disconnected".into(),
            });
        }
    }

    let mut sum_adj = vec![Vec::new(); n];
    for atom in &atoms {
        for &(u, v) in &atom.edges {
            sum_adj[u].push(v);
            sum_adj[v].push(u);
        }
    }
    if n == 0 || bfs(&sum_adj, 0).contains(&UNREACHABLE) {
        return Err(Error::DisconnectedSum);
    }

    let c = atoms.len();
    let classes = classes.unwrap_or_else(|| (0..c).map(|i| vec![i]).collect());
    let mut class_of = vec![usize::MAX; c];
    for (k, class) in classes.iter().enumerate() {
        if class.is_empty() {
            return Err(Error::BadClasses(format!("class {k} is empty")));
        }
        for &cat in class {
            if cat >= c {
                return Err(Error::BadClasses(format!("category {cat} does not exist")));
            }
            if class_of[cat] != usize::MAX {
                return Err(Error::BadClasses(format!("category {cat} appears twice")));
            }
            class_of[cat] = k;
        }
    }
    if let Some(missing) = class_of.iter().position(|&k| k == usize::MAX) {
        return Err(Error::BadClasses(format!("category {missing} has no class")));
    }

    let atoms: Vec<AtomGraph> = atoms
        .into_iter()
        .enumerate()
        .map(|(i, a)| AtomGraph::new(i, a.edges))
        .collect();
    let data = atoms.iter().map(|a| AtomData::build(n, a)).collect();
    Ok(AdditiveProductSpec {
        n,
        atoms,
        classes,
        class_of,
        data,
    })
}

impl AdditiveProductSpec {
    pub fn from_file(file: &SpecFile) -> Result<Self> {
        let atoms = file
            .atoms
            .iter()
            .enumerate()
            .map(|(i, es)| AtomGraph::new(i, es.iter().map(|e| (e[0], e[1])).collect()))
            .collect();
        validate_spec(file.n, atoms, file.classes.clone())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: SpecFile = serde_json::from_str(text)?;
        Self::from_file(&file)
    }

    pub fn to_file(&self) -> SpecFile {
        SpecFile {
            n: self.n,
            atoms: self
                .atoms
                .iter()
                .map(|a| a.edges.iter().map(|&(u, v)| [u, v]).collect())
                .collect(),
            classes: Some(self.classes.clone()),
        }
    }

    /// Same atoms, different parameter-sharing classes.
    pub fn with_classes(&self, classes: Vec<Vec<usize>>) -> Result<Self> {
        validate_spec(self.n, self.atoms.clone(), Some(classes))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_categories(&self) -> usize {
        self.atoms.len()
    }

    pub fn atoms(&self) -> &[AtomGraph] {
        &self.atoms
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn class_of(&self, category: usize) -> usize {
        self.class_of[category]
    }

    /// Category → class lookup table.
    pub fn sharing(&self) -> &[usize] {
        &self.class_of
    }

    pub fn atom_vertices(&self, category: usize) -> &[usize] {
        &self.data[category].vertices
    }

    pub fn atom_contains(&self, category: usize, v: usize) -> bool {
        self.data[category].contains(v)
    }

    pub fn atom_neighbors(&self, category: usize, v: usize) -> &[usize] {
        &self.data[category].adj[v]
    }

    /// Distance between `u` and `v` inside the underlined atom.
    pub fn atom_distance(&self, category: usize, u: usize, v: usize) -> usize {
        self.data[category].dist[u][v]
    }

    /// Normalized (`u < v`), sorted edge list of the underlined atom.
    pub fn atom_edges(&self, category: usize) -> &[(usize, usize)] {
        &self.data[category].edges
    }

    /// Categories whose underlined atom contains `v`.
    pub fn categories_at(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.atoms.len()).filter(move |&c| self.data[c].contains(v))
    }

    /// Degree of every vertex of the product graph whose last letter is `v`.
    pub fn degree(&self, v: usize) -> usize {
        self.data.iter().map(|d| d.adj[v].len()).sum()
    }

    pub fn total_atom_edges(&self) -> usize {
        self.data.iter().map(|d| d.edges.len()).sum()
    }

    /// All atom-permuting automorphisms `(sigma, pi)` of the atom system: `sigma` permutes
    /// the vertex set and maps atom `C` onto atom `pi[C]`. Atoms with identical edge sets
    /// are matched in index order, so they are never swapped with each other.
    pub fn automorphisms(&self) -> Vec<(Vec<usize>, Vec<usize>)> {
        const CAP: usize = 20_000;
        let n = self.n;
        let mut mult = vec![vec![0usize; n]; n];
        for d in &self.data {
            for &(u, v) in &d.edges {
                mult[u][v] += 1;
                mult[v][u] += 1;
            }
        }
        // atoms grouped by identical edge set
        let mut groups: BTreeMap<Vec<(usize, usize)>, Vec<usize>> = BTreeMap::new();
        for (c, d) in self.data.iter().enumerate() {
            groups.entry(d.edges.clone()).or_default().push(c);
        }
        let signature: Vec<Vec<usize>> = (0..n)
            .map(|v| {
                let mut s: Vec<usize> = self.data.iter().map(|d| d.adj[v].len()).collect();
                s.sort_unstable();
                s
            })
            .collect();

        let mut out = Vec::new();
        let mut sigma = vec![usize::MAX; n];
        let mut used = vec![false; n];
        self.extend_automorphism(0, &mult, &signature, &groups, &mut sigma, &mut used, &mut out, CAP);
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn extend_automorphism(
        &self,
        v: usize,
        mult: &[Vec<usize>],
        signature: &[Vec<usize>],
        groups: &BTreeMap<Vec<(usize, usize)>, Vec<usize>>,
        sigma: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<(Vec<usize>, Vec<usize>)>,
        cap: usize,
    ) {
        if out.len() >= cap {
            return;
        }
        let n = self.n;
        if v == n {
            if let Some(pi) = self.induced_category_map(sigma, groups) {
                out.push((sigma.clone(), pi));
            }
            return;
        }
        for image in 0..n {
            if used[image] || signature[image] != signature[v] {
                continue;
            }
            if (0..v).any(|u| mult[u][v] != mult[sigma[u]][image]) {
                continue;
            }
            sigma[v] = image;
            used[image] = true;
            self.extend_automorphism(v + 1, mult, signature, groups, sigma, used, out, cap);
            used[image] = false;
            sigma[v] = usize::MAX;
        }
    }

    fn induced_category_map(
        &self,
        sigma: &[usize],
        groups: &BTreeMap<Vec<(usize, usize)>, Vec<usize>>,
    ) -> Option<Vec<usize>> {
        let mut pi = vec![usize::MAX; self.atoms.len()];
        for (edges, members) in groups {
            let mut image: Vec<(usize, usize)> = edges
                .iter()
                .map(|&(u, v)| {
                    let (a, b) = (sigma[u], sigma[v]);
                    (a.min(b), a.max(b))
                })
                .collect();
            image.sort_unstable();
            let targets = groups.get(&image)?;
            if targets.len() != members.len() {
                return None;
            }
            for (&c, &t) in members.iter().zip(targets) {
                pi[c] = t;
            }
        }
        Some(pi)
    }

    /// Automorphisms whose category map respects the configured sharing classes.
    pub fn class_preserving_automorphisms(&self) -> Vec<(Vec<usize>, Vec<usize>)> {
        self.automorphisms()
            .into_iter()
            .filter(|(_, pi)| {
                pi.iter()
                    .enumerate()
                    .all(|(c, &t)| self.class_of[c] == self.class_of[t])
            })
            .collect()
    }
}

/// Groups categories that are exchanged by some atom-permuting automorphism. Tied
/// categories see isomorphic neighborhoods (after renaming), so sharing a γ vector
/// between them loses nothing by symmetry.
pub fn symmetry_classes(spec: &AdditiveProductSpec) -> Vec<Vec<usize>> {
    let c = spec.num_categories();
    let mut parent: Vec<usize> = (0..c).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut y = x;
        while parent[y] != r {
            let next = parent[y];
            parent[y] = r;
            y = next;
        }
        r
    }
    for (_, pi) in spec.automorphisms() {
        for (cat, &img) in pi.iter().enumerate() {
            let (a, b) = (find(&mut parent, cat), find(&mut parent, img));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for cat in 0..c {
        let r = find(&mut parent, cat);
        classes.entry(r).or_default().push(cat);
    }
    classes.into_values().collect()
}

/// Names accepted by [`builtin_spec`].
pub const BUILTIN_SPECS: [&str; 4] = ["fig-a", "fig-b", "fig-c", "k34-tree"];

/// Built-in atom systems.
///
/// * `fig-a`: triangle plus one single-edge atom per triangle edge (4-regular).
/// * `fig-b`: two 4-cycles on the same four vertices (4-regular tree of squares).
/// * `fig-c`: two disjoint triangles joined by three single-edge atoms (3-regular).
/// * `k34-tree`: the twelve single edges of `K_{3,4}`; the product is the (3,4)-biregular tree.
pub fn builtin_spec(name: &str) -> Result<AdditiveProductSpec> {
    let e = |es: &[(usize, usize)]| es.to_vec();
    let (n, atoms, classes): (usize, Vec<Vec<(usize, usize)>>, Option<Vec<Vec<usize>>>) = match name {
        "fig-a" => (
            3,
            vec![e(&[(0, 1), (1, 2), (0, 2)]), e(&[(0, 1)]), e(&[(1, 2)]), e(&[(0, 2)])],
            Some(vec![vec![0], vec![1, 2, 3]]),
        ),
        "fig-b" => {
            let c4 = e(&[(0, 1), (1, 2), (2, 3), (0, 3)]);
            (4, vec![c4.clone(), c4], Some(vec![vec![0], vec![1]]))
        }
        "fig-c" => (
            6,
            vec![
                e(&[(0, 1), (1, 2), (0, 2)]),
                e(&[(3, 4), (4, 5), (3, 5)]),
                e(&[(0, 3)]),
                e(&[(1, 4)]),
                e(&[(2, 5)]),
            ],
            Some(vec![vec![0, 1], vec![2, 3, 4]]),
        ),
        "k34-tree" => {
            let mut atoms = Vec::new();
            for l in 0..3 {
                for r in 3..7 {
                    atoms.push(vec![(l, r)]);
                }
            }
            (7, atoms, None)
        }
        other => return Err(Error::UnknownGraph(other.to_string())),
    };
    let atoms = atoms
        .into_iter()
        .enumerate()
        .map(|(i, es)| AtomGraph::new(i, es))
        .collect();
    validate_spec(n, atoms, classes)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atoms(list: &[&[(usize, usize)]]) -> Vec<AtomGraph> {
        list.iter()
            .enumerate()
            .map(|(i, es)| AtomGraph::new(i, es.to_vec()))
            .collect()
    }

    #[test]
    fn triangle_with_single_edges_is_valid() {
        let spec = validate_spec(
            3,
            atoms(&[&[(0, 1), (1, 2), (0, 2)], &[(0, 1)], &[(1, 2)], &[(0, 2)]]),
            None,
        )
        .unwrap();
        assert_eq!(spec.num_categories(), 4);
        assert_eq!(spec.num_classes(), 4);
        assert_eq!(spec.degree(0), 4);
    }

    #[test]
    fn single_edge_is_valid() {
        let spec = validate_spec(2, atoms(&[&[(0, 1)]]), None).unwrap();
        assert_eq!(spec.degree(0), 1);
    }

    #[test]
    fn disjoint_supports_are_rejected() {
        let err = validate_spec(4, atoms(&[&[(0, 1)], &[(2, 3)]]), None).unwrap_err();
        assert!(matches!(err, Error::DisconnectedSum));
    }

    #[test]
    fn atom_errors() {
        let err = validate_spec(3, atoms(&[&[(0, 1), (1, 0)]]), None).unwrap_err();
        assert!(matches!(err, Error::DuplicateEdge { atom: 0, .. }));
        let err = validate_spec(4, atoms(&[&[(0, 1), (2, 3)], &[(1, 2)]]), None).unwrap_err();
        assert!(matches!(err, Error::BadAtom { atom: 0, .. }));
        let err = validate_spec(2, atoms(&[&[(0, 1)], &[]]), None).unwrap_err();
        assert!(matches!(err, Error::BadAtom { atom: 1, .. }));
        let err = validate_spec(2, atoms(&[&[(1, 1)]]), None).unwrap_err();
        assert!(matches!(err, Error::BadAtom { .. }));
    }

    #[test]
    fn class_partition_is_checked() {
        let a = atoms(&[&[(0, 1)], &[(0, 1)]]);
        assert!(matches!(
            validate_spec(2, a.clone(), Some(vec![vec![0]])),
            Err(Error::BadClasses(_))
        ));
        assert!(matches!(
            validate_spec(2, a.clone(), Some(vec![vec![0, 1], vec![1]])),
            Err(Error::BadClasses(_))
        ));
        assert!(validate_spec(2, a, Some(vec![vec![1, 0]])).is_ok());
    }

    #[test]
    fn json_round_trip() {
        let spec = builtin_spec("fig-c").unwrap();
        let text = serde_json::to_string(&spec.to_file()).unwrap();
        let back = AdditiveProductSpec::from_json(&text).unwrap();
        assert_eq!(back.to_file(), spec.to_file());
        let minimal = AdditiveProductSpec::from_json(r#"{"n": 2, "atoms": [[[0, 1]]]}"#).unwrap();
        assert_eq!(minimal.classes(), &[vec![0]]);
    }

    #[test]
    fn builtin_symmetry_classes() {
        let classes = |name| symmetry_classes(&builtin_spec(name).unwrap());
        assert_eq!(classes("fig-a"), vec![vec![0], vec![1, 2, 3]]);
        assert_eq!(classes("fig-c"), vec![vec![0, 1], vec![2, 3, 4]]);
        // identical atoms are never merged, so the two squares stay apart
        assert_eq!(classes("fig-b"), vec![vec![0], vec![1]]);
        assert_eq!(classes("k34-tree").len(), 1);
    }

    #[test]
    fn automorphism_counts() {
        // S3 acting on the triangle; every element permutes the single-edge atoms
        assert_eq!(builtin_spec("fig-a").unwrap().automorphisms().len(), 6);
        // dihedral group of the square
        assert_eq!(builtin_spec("fig-b").unwrap().automorphisms().len(), 8);
        // prism symmetries
        assert_eq!(builtin_spec("fig-c").unwrap().automorphisms().len(), 12);
        assert_eq!(builtin_spec("k34-tree").unwrap().automorphisms().len(), 144);
    }

    #[test]
    fn atom_distances() {
        let spec = builtin_spec("fig-b").unwrap();
        assert_eq!(spec.atom_distance(0, 0, 2), 2);
        assert_eq!(spec.atom_distance(0, 0, 3), 1);
        let spec = builtin_spec("fig-c").unwrap();
        assert_eq!(spec.atom_distance(0, 0, 3), UNREACHABLE);
        assert_eq!(spec.categories_at(0).collect::<Vec<_>>(), vec![0, 2]);
    }
}
