use std::fmt;

use super::{Dendrite, DendriteError, VertexId};

pub const DEFAULT_AUTOMORPHISM_BOUND: usize = 10;

/// An edge-preserving bijection of the vertices of a tree.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Automorphism {
    perm: Vec<VertexId>,
}

impl fmt::Debug for Automorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Aut{:?}", self.perm)
    }
}

impl Automorphism {
    pub fn identity(n: usize) -> Automorphism {
        Automorphism {
            perm: (0..n).collect(),
        }
    }

    pub fn new(tree: &Dendrite, perm: Vec<VertexId>) -> Result<Automorphism, DendriteError> {
        if perm.len() != tree.len() {
            return Err(DendriteError::MismatchedTree {
                expected: tree.len(),
                actual: perm.len(),
            });
        }
        let mut hit = vec![false; perm.len()];
        for &v in &perm {
            if v >= perm.len() || std::mem::replace(&mut hit[v], true) {
                return Err(DendriteError::NotAnAutomorphism("not a bijection".into()));
            }
        }
        for (u, v) in tree.edges() {
            if !tree.has_edge(perm[u], perm[v]) {
                return Err(DendriteError::NotAnAutomorphism(format!(
                    "edge {}-{} is not preserved",
                    tree.name(u),
                    tree.name(v)
                )));
            }
        }
        Ok(Automorphism { perm })
    }

    /// From identifier pairs `x -> g(x)`; unlisted vertices are fixed.
    pub fn from_names(tree: &Dendrite, pairs: &[(&str, &str)]) -> Result<Automorphism, DendriteError> {
        let mut perm: Vec<VertexId> = tree.vertices().collect();
        for (from, to) in pairs {
            perm[tree.vertex(from)?] = tree.vertex(to)?;
        }
        Automorphism::new(tree, perm)
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn apply(&self, v: VertexId) -> VertexId {
        self.perm[v]
    }

    pub fn as_slice(&self) -> &[VertexId] {
        &self.perm
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        assert_eq!(self.len(), other.len(), "automorphisms of different trees");
        Automorphism {
            perm: other.perm.iter().map(|&v| self.perm[v]).collect(),
        }
    }

    pub fn inverse(&self) -> Automorphism {
        let mut perm = vec![0; self.perm.len()];
        for (i, &v) in self.perm.iter().enumerate() {
            perm[v] = i;
        }
        Automorphism { perm }
    }

    pub fn check_tree(&self, tree: &Dendrite) -> Result<(), DendriteError> {
        if self.len() == tree.len() {
            Ok(())
        } else {
            Err(DendriteError::MismatchedTree {
                expected: tree.len(),
                actual: self.len(),
            })
        }
    }

    /// Image of a vertex set, sorted.
    pub fn apply_set(&self, set: &[VertexId]) -> Vec<VertexId> {
        let mut out: Vec<VertexId> = set.iter().map(|&v| self.perm[v]).collect();
        out.sort_unstable();
        out
    }
}

impl Dendrite {
    /// Every automorphism, in lexicographic order of the permutation vector
    /// (so the identity comes first).
    pub fn automorphisms(&self) -> Result<Vec<Automorphism>, DendriteError> {
        self.automorphisms_bounded(DEFAULT_AUTOMORPHISM_BOUND)
    }

    pub fn automorphisms_bounded(&self, bound: usize) -> Result<Vec<Automorphism>, DendriteError> {
        if self.len() > bound {
            return Err(DendriteError::TooLarge {
                size: self.len(),
                bound,
            });
        }
        let n = self.len();
        let mut out = Vec::new();
        let mut perm = vec![usize::MAX; n];
        let mut used = vec![false; n];
        self.extend_partial(0, &mut perm, &mut used, &mut out);
        Ok(out)
    }

    // Assign images in vertex order; prune on degree and adjacency to already
    // assigned vertices.
    fn extend_partial(
        &self,
        v: usize,
        perm: &mut Vec<VertexId>,
        used: &mut Vec<bool>,
        out: &mut Vec<Automorphism>,
    ) {
        if v == self.len() {
            out.push(Automorphism { perm: perm.clone() });
            return;
        }
        for image in 0..self.len() {
            if used[image] || self.degree(image) != self.degree(v) {
                continue;
            }
            let consistent = (0..v).all(|u| self.has_edge(u, v) == self.has_edge(perm[u], image));
            if !consistent {
                continue;
            }
            perm[v] = image;
            used[image] = true;
            self.extend_partial(v + 1, perm, used, out);
            used[image] = false;
        }
        perm[v] = usize::MAX;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force(tree: &Dendrite) -> Vec<Vec<usize>> {
        fn permutations(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in permutations(n - 1) {
                for pos in 0..=p.len() {
                    let mut q = p.clone();
                    q.insert(pos, n - 1);
                    out.push(q);
                }
            }
            out
        }
        let mut autos: Vec<Vec<usize>> = permutations(tree.len())
            .into_iter()
            .filter(|p| tree.edges().iter().all(|&(u, v)| tree.has_edge(p[u], p[v])))
            .collect();
        autos.sort();
        autos
    }

    fn enumerate(tree: &Dendrite) -> Vec<Vec<usize>> {
        tree.automorphisms()
            .unwrap()
            .into_iter()
            .map(|g| g.as_slice().to_vec())
            .collect()
    }

    #[test]
    fn path_has_reflection_only() {
        let t = Dendrite::from_edges(&["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap();
        assert_eq!(enumerate(&t), vec![vec![0, 1, 2], vec![2, 1, 0]]);
        assert_eq!(enumerate(&t), brute_force(&t));
    }

    #[test]
    fn star_has_all_leaf_permutations() {
        let t = Dendrite::from_edges(
            &["c", "l1", "l2", "l3"],
            &[("c", "l1"), ("c", "l2"), ("c", "l3")],
        )
        .unwrap();
        let autos = enumerate(&t);
        assert_eq!(autos.len(), 6);
        assert_eq!(autos, brute_force(&t));
    }

    #[test]
    fn caterpillars_match_brute_force() {
        let t = Dendrite::from_edges(
            &["s1", "s2", "s3", "s4", "x", "y1", "y2"],
            &[
                ("s1", "s2"),
                ("s2", "s3"),
                ("s3", "s4"),
                ("s2", "x"),
                ("s3", "y1"),
                ("s3", "y2"),
            ],
        )
        .unwrap();
        let autos = enumerate(&t);
        assert_eq!(autos, brute_force(&t));
        assert_eq!(autos.len(), 12);

        // arms of lengths 1, 2, 3 at the branch point
        let rigid = Dendrite::from_edges(
            &["a", "b", "c", "d", "e", "f", "g"],
            &[("a", "b"), ("b", "c"), ("c", "d"), ("d", "e"), ("e", "f"), ("c", "g")],
        )
        .unwrap();
        assert_eq!(enumerate(&rigid), vec![(0..7).collect::<Vec<_>>()]);
        assert_eq!(brute_force(&rigid).len(), 1);
    }

    #[test]
    fn group_closure_and_errors() {
        let t = Dendrite::from_edges(
            &["c", "l1", "l2", "l3"],
            &[("c", "l1"), ("c", "l2"), ("c", "l3")],
        )
        .unwrap();
        let autos = t.automorphisms().unwrap();
        for g in &autos {
            assert!(autos.contains(&g.inverse()));
            for h in &autos {
                assert!(autos.contains(&g.compose(h)));
            }
        }
        assert!(autos[0].is_identity());
        assert!(matches!(
            Automorphism::new(&t, vec![1, 0, 2, 3]),
            Err(DendriteError::NotAnAutomorphism(_))
        ));
        assert!(matches!(
            Automorphism::new(&t, vec![0, 1]),
            Err(DendriteError::MismatchedTree { .. })
        ));
        let names: Vec<String> = (0..11).map(|i| format!("v{i:02}")).collect();
        let edges: Vec<[String; 2]> = names
            .windows(2)
            .map(|w| [w[0].clone(), w[1].clone()])
            .collect();
        let big = Dendrite::validate(&super::super::RawTree {
            vertices: names,
            edges,
        })
        .unwrap();
        assert_eq!(
            big.automorphisms(),
            Err(DendriteError::TooLarge { size: 11, bound: 10 })
        );
    }
}
