use std::fmt;

use crate::error::{Error, Result};
use crate::graphs::spec::AdditiveProductSpec;

/// A vertex of the additive product graph: the string `v1 C1 v2 C2 ... vk Ck v(k+1)`.
///
/// `steps[i] = (C_{i+1}, v_{i+2})`, so the root letter is `v1` and the last letter is
/// the underlying atom vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexAddress {
    pub root: usize,
    pub steps: Vec<(usize, usize)>,
}

impl VertexAddress {
    pub fn root(v: usize) -> Self {
        Self {
            root: v,
            steps: Vec::new(),
        }
    }

    /// The atom vertex this address projects to.
    pub fn last(&self) -> usize {
        self.steps.last().map_or(self.root, |&(_, v)| v)
    }

    pub fn last_category(&self) -> Option<usize> {
        self.steps.last().map(|&(c, _)| c)
    }

    pub fn depth(&self) -> usize {
        self.steps.len()
    }

    pub fn child(&self, category: usize, v: usize) -> Self {
        let mut steps = self.steps.clone();
        steps.push((category, v));
        Self { root: self.root, steps }
    }

    pub fn parent(&self) -> Option<Self> {
        if self.steps.is_empty() {
            return None;
        }
        let mut p = self.clone();
        p.steps.pop();
        Some(p)
    }

    /// Checks the string against the construction rules of `spec`.
    pub fn validate(&self, spec: &AdditiveProductSpec) -> Result<()> {
        let bad = |why: String| Err(Error::InvalidAddress(format!("{self}: {why}")));
        if self.root >= spec.n() {
            return bad(format!("vertex {} out of range", self.root));
        }
        let mut prev_v = self.root;
        let mut prev_c = None;
        for &(c, v) in &self.steps {
            if c >= spec.num_categories() {
                return bad(format!("category {c} out of range"));
            }
            if v >= spec.n() {
                return bad(format!("vertex {v} out of range"));
            }
            if prev_c == Some(c) {
                return bad(format!("category {c} repeats"));
            }
            if v == prev_v {
                return bad(format!("vertex {v} repeats"));
            }
            if !spec.atom_contains(c, prev_v) || !spec.atom_contains(c, v) {
                return bad(format!("{prev_v} and {v} are not both in atom {c}"));
            }
            prev_v = v;
            prev_c = Some(c);
        }
        Ok(())
    }
}

impl fmt::Display for VertexAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.root)?;
        for (c, v) in &self.steps {
            write!(f, "-C{c}-{v}")?;
        }
        Ok(())
    }
}

/// All neighbors of `v`, each tagged with the category of the connecting edge.
///
/// Same-layer neighbors `sCx` for `x ~_C u` (with `x` equal to the parent's last letter
/// meaning the parent itself) come first, then successors `sCuC'x` for `C' != C`.
pub fn neighbors(spec: &AdditiveProductSpec, v: &VertexAddress) -> Result<Vec<(VertexAddress, usize)>> {
    v.validate(spec)?;
    Ok(neighbors_unchecked(spec, v))
}

pub(crate) fn neighbors_unchecked(spec: &AdditiveProductSpec, v: &VertexAddress) -> Vec<(VertexAddress, usize)> {
    let u = v.last();
    let mut out = Vec::with_capacity(spec.degree(u));
    let own = v.last_category();
    if let (Some(c), Some(parent)) = (own, v.parent()) {
        let w = parent.last();
        for &x in spec.atom_neighbors(c, u) {
            if x == w {
                out.push((parent.clone(), c));
            } else {
                out.push((parent.child(c, x), c));
            }
        }
    }
    for c in 0..spec.num_categories() {
        if Some(c) == own {
            continue;
        }
        for &x in spec.atom_neighbors(c, u) {
            out.push((v.child(c, x), c));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::spec::builtin_spec;

    #[test]
    fn validation_rules() {
        let spec = builtin_spec("fig-a").unwrap();
        assert!(VertexAddress {
            root: 0,
            steps: vec![(0, 1), (1, 0)]
        }
        .validate(&spec)
        .is_ok());
        // repeated category
        assert!(VertexAddress {
            root: 0,
            steps: vec![(0, 1), (0, 2)]
        }
        .validate(&spec)
        .is_err());
        // 0 and 2 are not in atom 1 = {0,1}
        assert!(VertexAddress {
            root: 0,
            steps: vec![(1, 2)]
        }
        .validate(&spec)
        .is_err());
        assert!(VertexAddress {
            root: 0,
            steps: vec![(0, 0)]
        }
        .validate(&spec)
        .is_err());
        assert!(VertexAddress::root(3).validate(&spec).is_err());
        assert!(neighbors(&spec, &VertexAddress::root(5)).is_err());
    }

    #[test]
    fn neighbor_relation_is_symmetric() {
        for name in ["fig-a", "fig-b", "fig-c", "k34-tree"] {
            let spec = builtin_spec(name).unwrap();
            let mut frontier = vec![VertexAddress::root(0)];
            for _ in 0..3 {
                let mut next = Vec::new();
                for a in &frontier {
                    let ns = neighbors(&spec, a).unwrap();
                    assert_eq!(ns.len(), spec.degree(a.last()));
                    for (b, c) in ns {
                        let back = neighbors(&spec, &b).unwrap();
                        assert!(back.contains(&(a.clone(), c)), "{name}: {a} -> {b}");
                        next.push(b);
                    }
                }
                frontier = next;
            }
        }
    }

    #[test]
    fn biregular_tree_degrees_alternate() {
        let spec = builtin_spec("k34-tree").unwrap();
        let root = VertexAddress::root(0);
        let ns = neighbors(&spec, &root).unwrap();
        assert_eq!(ns.len(), 4);
        for (b, _) in ns {
            assert_eq!(neighbors(&spec, &b).unwrap().len(), 3);
        }
    }

    #[test]
    fn squares_have_degree_four() {
        let spec = builtin_spec("fig-b").unwrap();
        let a = VertexAddress {
            root: 0,
            steps: vec![(0, 1), (1, 2)],
        };
        let ns = neighbors(&spec, &a).unwrap();
        assert_eq!(ns.len(), 4);
        assert_eq!(ns.iter().filter(|(_, c)| *c == 0).count(), 2);
        assert_eq!(ns.iter().filter(|(_, c)| *c == 1).count(), 2);
    }

    #[test]
    fn path_spec() {
        let spec = crate::graphs::spec::AdditiveProductSpec::from_json(r#"{"n":2,"atoms":[[[0,1]]]}"#).unwrap();
        let ns = neighbors(&spec, &VertexAddress::root(0)).unwrap();
        assert_eq!(
            ns,
            vec![(
                VertexAddress {
                    root: 0,
                    steps: vec![(0, 1)]
                },
                0
            )]
        );
    }
}
