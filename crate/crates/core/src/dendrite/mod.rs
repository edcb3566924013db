//! Finite trees standing in for dendrites.
//!
//! Vertices are opaque string identifiers. Internally they are indexed in
//! lexicographic order of their identifiers, so every "lexicographic"
//! tie-break in the crate is an index comparison.

mod automorphism;
mod generate;

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use automorphism::{Automorphism, DEFAULT_AUTOMORPHISM_BOUND};
pub use generate::{generate, TreeKind};

pub type VertexId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DendriteError {
    #[error("graph is disconnected ({components} components)")]
    DisconnectedGraph { components: usize },
    #[error("edge {0}-{1} closes a cycle")]
    CycleDetected(String, String),
    #[error("duplicate vertex identifier {0:?}")]
    DuplicateVertex(String),
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("tree has no vertices")]
    EmptyTree,
    #[error("empty vertex set")]
    EmptySet,
    #[error("operation needs at least two vertices")]
    SingletonTree,
    #[error("vertex set is not a nonempty connected subtree")]
    InvalidSubdendrite,
    #[error("tree has {size} vertices, bound is {bound}")]
    TooLarge { size: usize, bound: usize },
    #[error("bad generator parameters: {0}")]
    BadParams(String),
    #[error("map is not an automorphism: {0}")]
    NotAnAutomorphism(String),
    #[error("automorphism belongs to a tree with {expected} vertices, got {actual}")]
    MismatchedTree { expected: usize, actual: usize },
}

/// On-disk tree document: `{"vertices": [...], "edges": [[u, v], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawTree {
    pub vertices: Vec<String>,
    pub edges: Vec<[String; 2]>,
}

/// Menger-Urysohn class of a vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PointClass {
    End,
    Regular,
    Branch,
}

impl PointClass {
    pub fn from_order(order: usize) -> PointClass {
        match order {
            0 | 1 => PointClass::End,
            2 => PointClass::Regular,
            _ => PointClass::Branch,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CenterResult {
    Vertex(VertexId),
    Edge(VertexId, VertexId),
}

impl CenterResult {
    pub fn vertices(&self) -> Vec<VertexId> {
        match *self {
            CenterResult::Vertex(v) => vec![v],
            CenterResult::Edge(u, v) => vec![u, v],
        }
    }
}

/// A finite tree. Immutable once validated.
#[derive(Debug, Clone)]
pub struct Dendrite {
    names: Vec<String>,
    index: HashMap<String, VertexId>,
    adjacency: Vec<Vec<VertexId>>,
    // next_hop[a][v]: neighbor of `a` on the arc towards `v` (`a` itself when v == a)
    next_hop: Vec<Vec<VertexId>>,
    dist: Vec<Vec<u32>>,
}

impl PartialEq for Dendrite {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.adjacency == other.adjacency
    }
}

impl Eq for Dendrite {}

impl Dendrite {
    pub fn validate(raw: &RawTree) -> Result<Dendrite, DendriteError> {
        if raw.vertices.is_empty() {
            return Err(DendriteError::EmptyTree);
        }
        let mut names = raw.vertices.clone();
        names.sort();
        for pair in names.windows(2) {
            if pair[0] == pair[1] {
                return Err(DendriteError::DuplicateVertex(pair[0].clone()));
            }
        }
        let index: HashMap<String, VertexId> = names
            .iter()
            .enumerate()
            .map(|(i, name)| (name.clone(), i))
            .collect();
        let n = names.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut adjacency = vec![Vec::new(); n];
        for [u, v] in &raw.edges {
            let a = *index
                .get(u)
                .ok_or_else(|| DendriteError::UnknownVertex(u.clone()))?;
            let b = *index
                .get(v)
                .ok_or_else(|| DendriteError::UnknownVertex(v.clone()))?;
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra == rb {
                return Err(DendriteError::CycleDetected(u.clone(), v.clone()));
            }
            parent[ra] = rb;
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        let components = (0..n).filter(|&x| find(&mut parent, x) == x).count();
        if components != 1 {
            return Err(DendriteError::DisconnectedGraph { components });
        }
        for nbrs in &mut adjacency {
            nbrs.sort_unstable();
        }
        Ok(Self::from_parts(names, index, adjacency))
    }

    /// Builds from identifiers and edges given as identifier pairs.
    pub fn from_edges(vertices: &[&str], edges: &[(&str, &str)]) -> Result<Dendrite, DendriteError> {
        Self::validate(&RawTree {
            vertices: vertices.iter().map(|s| s.to_string()).collect(),
            edges: edges
                .iter()
                .map(|(u, v)| [u.to_string(), v.to_string()])
                .collect(),
        })
    }

    fn from_parts(
        names: Vec<String>,
        index: HashMap<String, VertexId>,
        adjacency: Vec<Vec<VertexId>>,
    ) -> Dendrite {
        let n = names.len();
        let mut next_hop = vec![vec![0; n]; n];
        let mut dist = vec![vec![0u32; n]; n];
        let mut queue = VecDeque::new();
        for a in 0..n {
            let mut seen = vec![false; n];
            seen[a] = true;
            next_hop[a][a] = a;
            for &b in &adjacency[a] {
                seen[b] = true;
                next_hop[a][b] = b;
                dist[a][b] = 1;
                queue.push_back(b);
            }
            while let Some(v) = queue.pop_front() {
                for &w in &adjacency[v] {
                    if !seen[w] {
                        seen[w] = true;
                        next_hop[a][w] = next_hop[a][v];
                        dist[a][w] = dist[a][v] + 1;
                        queue.push_back(w);
                    }
                }
            }
        }
        Dendrite {
            names,
            index,
            adjacency,
            next_hop,
            dist,
        }
    }

    /// Canonical document: sorted vertices, edges with `u < v`, rows sorted.
    pub fn to_raw(&self) -> RawTree {
        RawTree {
            vertices: self.names.clone(),
            edges: self
                .edges()
                .into_iter()
                .map(|(u, v)| [self.names[u].clone(), self.names[v].clone()])
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn vertices(&self) -> std::ops::Range<VertexId> {
        0..self.names.len()
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn vertex(&self, name: &str) -> Result<VertexId, DendriteError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| DendriteError::UnknownVertex(name.to_string()))
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::with_capacity(self.len().saturating_sub(1));
        for u in self.vertices() {
            for &v in &self.adjacency[u] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn distance(&self, u: VertexId, v: VertexId) -> usize {
        self.dist[u][v] as usize
    }

    /// Neighbor of `from` on the arc to `to`; `None` when they coincide.
    pub fn step_towards(&self, from: VertexId, to: VertexId) -> Option<VertexId> {
        (from != to).then(|| self.next_hop[from][to])
    }

    pub fn contains(&self, v: VertexId) -> bool {
        v < self.len()
    }

    fn check(&self, v: VertexId) -> Result<VertexId, DendriteError> {
        if self.contains(v) {
            Ok(v)
        } else {
            Err(DendriteError::UnknownVertex(format!("#{v}")))
        }
    }

    /// The arc `[x, y]`, endpoints included.
    pub fn arc(&self, x: VertexId, y: VertexId) -> Result<Vec<VertexId>, DendriteError> {
        self.check(x)?;
        self.check(y)?;
        let mut path = Vec::with_capacity(self.distance(x, y) + 1);
        let mut cur = x;
        path.push(cur);
        while cur != y {
            cur = self.next_hop[cur][y];
            path.push(cur);
        }
        Ok(path)
    }

    /// Whether `v` lies on the arc `[x, y]`.
    pub fn on_arc(&self, v: VertexId, x: VertexId, y: VertexId) -> bool {
        self.distance(x, v) + self.distance(v, y) == self.distance(x, y)
    }

    /// Smallest subtree containing `set`.
    pub fn dendro_hull(&self, set: &[VertexId]) -> Result<Subdendrite, DendriteError> {
        let (&first, rest) = set.split_first().ok_or(DendriteError::EmptySet)?;
        self.check(first)?;
        let mut members = BTreeSet::from([first]);
        for &a in rest {
            members.extend(self.arc(first, a)?);
        }
        Ok(Subdendrite {
            members: members.into_iter().collect(),
        })
    }

    /// Order (degree) and class of a vertex.
    pub fn classify(&self, x: VertexId) -> Result<(usize, PointClass), DendriteError> {
        self.check(x)?;
        if self.len() < 2 {
            return Err(DendriteError::SingletonTree);
        }
        let order = self.degree(x);
        Ok((order, PointClass::from_order(order)))
    }

    pub fn ends(&self) -> Vec<VertexId> {
        self.vertices().filter(|&v| self.degree(v) == 1).collect()
    }

    pub fn branch_points(&self) -> Vec<VertexId> {
        self.vertices().filter(|&v| self.degree(v) >= 3).collect()
    }

    pub fn is_branch(&self, v: VertexId) -> bool {
        self.degree(v) >= 3
    }

    /// First-point retraction onto a subtree.
    pub fn retraction(&self, sub: &Subdendrite, x: VertexId) -> Result<VertexId, DendriteError> {
        self.check(x)?;
        if !sub.is_valid_in(self) {
            return Err(DendriteError::InvalidSubdendrite);
        }
        let target = sub.members[0];
        let mut cur = x;
        while !sub.contains(cur) {
            cur = self.next_hop[cur][target];
        }
        Ok(cur)
    }

    /// The unique vertex common to the three arcs between `p`, `q`, `r`.
    pub fn median(&self, p: VertexId, q: VertexId, r: VertexId) -> Result<VertexId, DendriteError> {
        self.check(r)?;
        let arc = self.arc(p, q)?;
        Ok(*arc
            .iter()
            .min_by_key(|&&v| self.distance(v, r))
            .expect("arcs are nonempty"))
    }

    /// Center by simultaneous leaf deletion.
    pub fn jordan_center(&self) -> Result<CenterResult, DendriteError> {
        let all: Vec<VertexId> = self.vertices().collect();
        self.center_of_set(&all)
    }

    /// Center of the subtree induced on `sub`.
    pub fn center_of(&self, sub: &Subdendrite) -> Result<CenterResult, DendriteError> {
        if !sub.is_valid_in(self) {
            return Err(DendriteError::InvalidSubdendrite);
        }
        self.center_of_set(&sub.members)
    }

    fn center_of_set(&self, members: &[VertexId]) -> Result<CenterResult, DendriteError> {
        let rounds = self.peeling_rounds(members)?;
        let last = rounds.last().expect("at least one round");
        Ok(match last.as_slice() {
            [v] => CenterResult::Vertex(*v),
            [u, v] => CenterResult::Edge(*u.min(v), *u.max(v)),
            _ => unreachable!("leaf peeling ends with one vertex or one edge"),
        })
    }

    /// Leaf-peeling rounds on the subtree induced by `members`: each entry
    /// lists the vertices deleted in that round; the last entry is the center.
    pub fn peeling_rounds(&self, members: &[VertexId]) -> Result<Vec<Vec<VertexId>>, DendriteError> {
        if members.is_empty() {
            return Err(DendriteError::EmptyTree);
        }
        let mut alive = vec![false; self.len()];
        for &v in members {
            alive[self.check(v)?] = true;
        }
        let mut degree: Vec<usize> = self
            .vertices()
            .map(|v| {
                if alive[v] {
                    self.adjacency[v].iter().filter(|&&w| alive[w]).count()
                } else {
                    0
                }
            })
            .collect();
        let mut remaining = members.len();
        let mut layer: Vec<VertexId> = members
            .iter()
            .copied()
            .filter(|&v| degree[v] <= 1)
            .collect();
        layer.sort_unstable();
        let mut rounds = Vec::new();
        while remaining > 2 {
            let mut next = Vec::new();
            for &v in &layer {
                alive[v] = false;
            }
            remaining -= layer.len();
            for &v in &layer {
                for &w in &self.adjacency[v] {
                    if alive[w] {
                        degree[w] -= 1;
                        if degree[w] == 1 {
                            next.push(w);
                        }
                    }
                }
            }
            rounds.push(std::mem::take(&mut layer));
            next.sort_unstable();
            layer = next;
        }
        let mut center: Vec<VertexId> = members.iter().copied().filter(|&v| alive[v]).collect();
        center.sort_unstable();
        rounds.push(center);
        Ok(rounds)
    }

    /// Smooths every degree-2 vertex. Returns the reduced tree and, for each
    /// original vertex, its index in the reduced tree (`None` if smoothed).
    pub fn suppress_regular(&self) -> Result<(Dendrite, Vec<Option<VertexId>>), DendriteError> {
        if self.len() < 2 {
            return Err(DendriteError::SingletonTree);
        }
        let kept: Vec<VertexId> = self.vertices().filter(|&v| self.degree(v) != 2).collect();
        let mut raw = RawTree {
            vertices: kept.iter().map(|&v| self.names[v].clone()).collect(),
            edges: Vec::new(),
        };
        for &u in &kept {
            for &first in &self.adjacency[u] {
                let (mut prev, mut cur) = (u, first);
                while self.degree(cur) == 2 {
                    let next = self.adjacency[cur]
                        .iter()
                        .copied()
                        .find(|&w| w != prev)
                        .expect("degree-2 vertex has another neighbor");
                    prev = cur;
                    cur = next;
                }
                if u < cur {
                    raw.edges.push([self.names[u].clone(), self.names[cur].clone()]);
                }
            }
        }
        let core = Dendrite::validate(&raw)?;
        let map = self
            .vertices()
            .map(|v| core.index.get(&self.names[v]).copied())
            .collect();
        Ok((core, map))
    }

    /// The subtree on `sub` as a standalone tree (same identifiers).
    pub fn induced(&self, sub: &Subdendrite) -> Result<Dendrite, DendriteError> {
        if !sub.is_valid_in(self) {
            return Err(DendriteError::InvalidSubdendrite);
        }
        let raw = RawTree {
            vertices: sub.members.iter().map(|&v| self.names[v].clone()).collect(),
            edges: self
                .edges()
                .into_iter()
                .filter(|&(u, v)| sub.contains(u) && sub.contains(v))
                .map(|(u, v)| [self.names[u].clone(), self.names[v].clone()])
                .collect(),
        };
        Dendrite::validate(&raw)
    }

    /// `Σ (deg − 2)`; equals −2 on every tree with at least two vertices.
    pub fn degree_excess(&self) -> i64 {
        self.vertices().map(|v| self.degree(v) as i64 - 2).sum()
    }
}

/// A nonempty connected vertex subset of some tree, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subdendrite {
    members: Vec<VertexId>,
}

impl Subdendrite {
    pub fn new(tree: &Dendrite, vertices: &[VertexId]) -> Result<Subdendrite, DendriteError> {
        let mut members = vertices.to_vec();
        members.sort_unstable();
        members.dedup();
        let sub = Subdendrite { members };
        if sub.is_valid_in(tree) {
            Ok(sub)
        } else {
            Err(DendriteError::InvalidSubdendrite)
        }
    }

    pub fn members(&self) -> &[VertexId] {
        &self.members
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Ends of the induced subtree (a lone vertex counts as an end).
    pub fn ends(&self, tree: &Dendrite) -> Vec<VertexId> {
        self.members
            .iter()
            .copied()
            .filter(|&v| {
                tree.neighbors(v)
                    .iter()
                    .filter(|&&w| self.contains(w))
                    .count()
                    <= 1
            })
            .collect()
    }

    fn is_valid_in(&self, tree: &Dendrite) -> bool {
        let Some(&start) = self.members.first() else {
            return false;
        };
        if self.members.iter().any(|&v| !tree.contains(v)) {
            return false;
        }
        let mut seen = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &w in tree.neighbors(v) {
                if self.contains(w) && seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen.len() == self.members.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn path(names: &[&str]) -> Dendrite {
        let edges: Vec<(&str, &str)> = names.windows(2).map(|w| (w[0], w[1])).collect();
        Dendrite::from_edges(names, &edges).unwrap()
    }

    fn star() -> Dendrite {
        Dendrite::from_edges(
            &["c", "l1", "l2", "l3"],
            &[("c", "l1"), ("c", "l2"), ("c", "l3")],
        )
        .unwrap()
    }

    fn ids(t: &Dendrite, names: &[&str]) -> Vec<VertexId> {
        names.iter().map(|n| t.vertex(n).unwrap()).collect()
    }

    fn named(t: &Dendrite, vs: &[VertexId]) -> Vec<String> {
        vs.iter().map(|&v| t.name(v).to_string()).collect()
    }

    #[test]
    fn validate_examples() {
        assert!(Dendrite::from_edges(&["a", "b", "c"], &[("a", "b"), ("b", "c")]).is_ok());
        assert!(matches!(
            Dendrite::from_edges(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("c", "a")]),
            Err(DendriteError::CycleDetected(..))
        ));
        assert_eq!(
            Dendrite::from_edges(&["a", "b"], &[]),
            Err(DendriteError::DisconnectedGraph { components: 2 })
        );
        assert_eq!(
            Dendrite::from_edges(&["a", "a"], &[]),
            Err(DendriteError::DuplicateVertex("a".into()))
        );
        assert_eq!(
            Dendrite::from_edges(&["a"], &[("a", "z")]),
            Err(DendriteError::UnknownVertex("z".into()))
        );
        assert!(matches!(
            Dendrite::from_edges(&["a"], &[("a", "a")]),
            Err(DendriteError::CycleDetected(..))
        ));
        assert_eq!(Dendrite::from_edges(&[], &[]), Err(DendriteError::EmptyTree));
    }

    #[test]
    fn canonical_document_sorts_rows() {
        let t = Dendrite::from_edges(&["z", "b", "a"], &[("z", "a"), ("b", "a")]).unwrap();
        let raw = t.to_raw();
        assert_eq!(raw.vertices, vec!["a", "b", "z"]);
        assert_eq!(
            raw.edges,
            vec![["a".to_string(), "b".to_string()], ["a".to_string(), "z".to_string()]]
        );
    }

    #[test]
    fn arc_examples() {
        let p = path(&["a", "b", "c"]);
        let (a, c) = (p.vertex("a").unwrap(), p.vertex("c").unwrap());
        assert_eq!(named(&p, &p.arc(a, c).unwrap()), ["a", "b", "c"]);
        assert_eq!(p.arc(a, a).unwrap(), vec![a]);
        let s = star();
        let v = ids(&s, &["l1", "l2"]);
        assert_eq!(named(&s, &s.arc(v[0], v[1]).unwrap()), ["l1", "c", "l2"]);
        assert!(matches!(p.arc(a, 17), Err(DendriteError::UnknownVertex(_))));
    }

    #[test]
    fn hull_examples() {
        let s = star();
        let x = s.vertex("l2").unwrap();
        assert_eq!(s.dendro_hull(&[x]).unwrap().members(), &[x]);
        let hull = s.dendro_hull(&ids(&s, &["l1", "l2"])).unwrap();
        assert_eq!(named(&s, hull.members()), ["c", "l1", "l2"]);
        let p = path(&["v1", "v2", "v3", "v4", "v5"]);
        let hull = p.dendro_hull(&ids(&p, &["v1", "v5"])).unwrap();
        assert_eq!(hull.len(), 5);
        assert_eq!(p.dendro_hull(&[]), Err(DendriteError::EmptySet));
    }

    #[test]
    fn classify_examples() {
        let p = path(&["a", "b", "c"]);
        assert_eq!(p.classify(1).unwrap(), (2, PointClass::Regular));
        assert_eq!(p.classify(0).unwrap(), (1, PointClass::End));
        let s = star();
        assert_eq!(
            s.classify(s.vertex("c").unwrap()).unwrap(),
            (3, PointClass::Branch)
        );
        let single = Dendrite::from_edges(&["x"], &[]).unwrap();
        assert_eq!(single.classify(0), Err(DendriteError::SingletonTree));
    }

    #[test]
    fn retraction_examples() {
        let s = star();
        let m = Subdendrite::new(&s, &ids(&s, &["l1", "c"])).unwrap();
        let l1 = s.vertex("l1").unwrap();
        assert_eq!(s.retraction(&m, l1).unwrap(), l1);
        let l2 = s.vertex("l2").unwrap();
        assert_eq!(s.name(s.retraction(&m, l2).unwrap()), "c");
        let p = path(&["v1", "v2", "v3", "v4", "v5"]);
        let m = Subdendrite::new(&p, &ids(&p, &["v1", "v2"])).unwrap();
        assert_eq!(p.name(p.retraction(&m, 4).unwrap()), "v2");
        assert_eq!(
            Subdendrite::new(&p, &ids(&p, &["v1", "v3"])),
            Err(DendriteError::InvalidSubdendrite)
        );
    }

    #[test]
    fn median_examples() {
        let p = path(&["a", "b", "c"]);
        assert_eq!(p.median(0, 1, 2).unwrap(), 1);
        assert_eq!(p.median(0, 0, 2).unwrap(), 0);
        let s = star();
        let l = ids(&s, &["l1", "l2", "l3"]);
        assert_eq!(s.name(s.median(l[0], l[1], l[2]).unwrap()), "c");
    }

    #[test]
    fn jordan_center_examples() {
        let p5 = path(&["v1", "v2", "v3", "v4", "v5"]);
        assert_eq!(p5.jordan_center().unwrap(), CenterResult::Vertex(2));
        let p4 = path(&["v1", "v2", "v3", "v4"]);
        assert_eq!(p4.jordan_center().unwrap(), CenterResult::Edge(1, 2));
        let s = star();
        assert_eq!(
            s.jordan_center().unwrap(),
            CenterResult::Vertex(s.vertex("c").unwrap())
        );
        let single = Dendrite::from_edges(&["x"], &[]).unwrap();
        assert_eq!(single.jordan_center().unwrap(), CenterResult::Vertex(0));
        assert_eq!(s.peeling_rounds(&[]), Err(DendriteError::EmptyTree));
    }

    #[test]
    fn suppress_regular_examples() {
        let p = path(&["v1", "v2", "v3", "v4", "v5"]);
        let (core, map) = p.suppress_regular().unwrap();
        assert_eq!(core.names(), ["v1", "v5"]);
        assert_eq!(core.edges(), vec![(0, 1)]);
        assert_eq!(map, vec![Some(0), None, None, None, Some(1)]);

        let s = star();
        let (core, _) = s.suppress_regular().unwrap();
        assert_eq!(core, s);

        let h = Dendrite::from_edges(
            &["a1", "a2", "u", "m", "w", "b1", "b2"],
            &[("a1", "u"), ("a2", "u"), ("u", "m"), ("m", "w"), ("w", "b1"), ("w", "b2")],
        )
        .unwrap();
        let (core, map) = h.suppress_regular().unwrap();
        assert_eq!(core.len(), 6);
        assert!(core.has_edge(core.vertex("u").unwrap(), core.vertex("w").unwrap()));
        assert_eq!(map[h.vertex("m").unwrap()], None);
        assert_eq!(core.branch_points().len(), h.branch_points().len());
        assert_eq!(core.ends().len(), h.ends().len());

        let single = Dendrite::from_edges(&["x"], &[]).unwrap();
        assert!(matches!(
            single.suppress_regular(),
            Err(DendriteError::SingletonTree)
        ));
    }

    #[test]
    fn degree_identity() {
        assert_eq!(star().degree_excess(), -2);
        assert_eq!(path(&["a", "b", "c", "d"]).degree_excess(), -2);
    }

    #[test]
    fn subdendrite_ends() {
        let s = star();
        let m = s.dendro_hull(&ids(&s, &["l1", "l3"])).unwrap();
        assert_eq!(named(&s, &m.ends(&s)), ["l1", "l3"]);
        let lone = Subdendrite::new(&s, &[0]).unwrap();
        assert_eq!(lone.ends(&s), vec![0]);
    }
}
