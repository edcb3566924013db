//! The fundamental bundle `Bund(X)`, its fibered square, and the branch-point
//! part `Λ(X)`, with the automorphism action.
//!
//! A component of `X ∖ {x}` is labelled by the neighbor of `x` it contains.

use std::collections::HashMap;

use crate::dendrite::{Automorphism, Dendrite, DendriteError, VertexId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub base: VertexId,
    pub label: VertexId,
    pub members: Vec<VertexId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BundlePoint {
    pub base: VertexId,
    pub component: VertexId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DoubleBundlePoint {
    pub base: VertexId,
    pub first: VertexId,
    pub second: VertexId,
}

/// `(b, C, C')` with `b` a branch point and `C ≠ C'`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LambdaIndex {
    pub base: VertexId,
    pub first: VertexId,
    pub second: VertexId,
}

impl LambdaIndex {
    pub fn new(
        tree: &Dendrite,
        base: VertexId,
        first: VertexId,
        second: VertexId,
    ) -> Option<LambdaIndex> {
        let ok = tree.contains(base)
            && tree.is_branch(base)
            && first != second
            && tree.has_edge(base, first)
            && tree.has_edge(base, second);
        ok.then_some(LambdaIndex {
            base,
            first,
            second,
        })
    }

    pub fn swapped(self) -> LambdaIndex {
        LambdaIndex {
            first: self.second,
            second: self.first,
            ..self
        }
    }

    pub fn to_names(self, tree: &Dendrite) -> [String; 3] {
        [
            tree.name(self.base).to_string(),
            tree.name(self.first).to_string(),
            tree.name(self.second).to_string(),
        ]
    }
}

impl From<LambdaIndex> for DoubleBundlePoint {
    fn from(l: LambdaIndex) -> Self {
        DoubleBundlePoint {
            base: l.base,
            first: l.first,
            second: l.second,
        }
    }
}

/// Points of the bundles, acted on by tree automorphisms.
pub trait BundleElement: Sized {
    fn base(&self) -> VertexId;
    fn act(&self, g: &Automorphism) -> Self;
}

impl BundleElement for BundlePoint {
    fn base(&self) -> VertexId {
        self.base
    }
    fn act(&self, g: &Automorphism) -> Self {
        BundlePoint {
            base: g.apply(self.base),
            component: g.apply(self.component),
        }
    }
}

impl BundleElement for DoubleBundlePoint {
    fn base(&self) -> VertexId {
        self.base
    }
    fn act(&self, g: &Automorphism) -> Self {
        DoubleBundlePoint {
            base: g.apply(self.base),
            first: g.apply(self.first),
            second: g.apply(self.second),
        }
    }
}

impl BundleElement for LambdaIndex {
    fn base(&self) -> VertexId {
        self.base
    }
    fn act(&self, g: &Automorphism) -> Self {
        LambdaIndex {
            base: g.apply(self.base),
            first: g.apply(self.first),
            second: g.apply(self.second),
        }
    }
}

/// Checked action: `g` must be an automorphism of `tree`.
pub fn act_bundle<T: BundleElement>(
    tree: &Dendrite,
    g: &Automorphism,
    point: &T,
) -> Result<T, DendriteError> {
    g.check_tree(tree)?;
    Ok(point.act(g))
}

/// Label of the component of `X ∖ {base}` containing `v`; `None` if `v == base`.
pub fn component_label(tree: &Dendrite, base: VertexId, v: VertexId) -> Option<VertexId> {
    tree.step_towards(base, v)
}

pub fn components_at(tree: &Dendrite, x: VertexId) -> Result<Vec<Component>, DendriteError> {
    if !tree.contains(x) {
        return Err(DendriteError::UnknownVertex(format!("#{x}")));
    }
    let mut out: Vec<Component> = tree
        .neighbors(x)
        .iter()
        .map(|&label| Component {
            base: x,
            label,
            members: Vec::new(),
        })
        .collect();
    for v in tree.vertices() {
        if let Some(label) = component_label(tree, x, v) {
            let slot = tree
                .neighbors(x)
                .binary_search(&label)
                .expect("label is a neighbor");
            out[slot].members.push(v);
        }
    }
    Ok(out)
}

pub fn bundle(tree: &Dendrite) -> Vec<BundlePoint> {
    tree.vertices()
        .flat_map(|base| {
            tree.neighbors(base)
                .iter()
                .map(move |&component| BundlePoint { base, component })
        })
        .collect()
}

/// `Bund²(X)`, including pairs with equal components.
pub fn double_bundle(tree: &Dendrite) -> Vec<DoubleBundlePoint> {
    let mut out = Vec::new();
    for base in tree.vertices() {
        for &first in tree.neighbors(base) {
            for &second in tree.neighbors(base) {
                out.push(DoubleBundlePoint {
                    base,
                    first,
                    second,
                });
            }
        }
    }
    out
}

/// `Λ(X)`, sorted.
pub fn lambda_index(tree: &Dendrite) -> Vec<LambdaIndex> {
    let mut out = Vec::new();
    for base in tree.branch_points() {
        for &first in tree.neighbors(base) {
            for &second in tree.neighbors(base) {
                if first != second {
                    out.push(LambdaIndex {
                        base,
                        first,
                        second,
                    });
                }
            }
        }
    }
    out
}

/// `Λ(X)` with positions, for dense arrays indexed by it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LambdaSet {
    entries: Vec<LambdaIndex>,
    position: HashMap<LambdaIndex, usize>,
}

impl LambdaSet {
    pub fn new(tree: &Dendrite) -> LambdaSet {
        let entries = lambda_index(tree);
        let position = entries.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        LambdaSet { entries, position }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[LambdaIndex] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> LambdaIndex {
        self.entries[i]
    }

    pub fn position(&self, l: &LambdaIndex) -> Option<usize> {
        self.position.get(l).copied()
    }

    /// Position permutation induced by `g`: `i ↦ pos(g · entries[i])`.
    pub fn permutation(&self, g: &Automorphism) -> Vec<usize> {
        self.entries
            .iter()
            .map(|l| self.position[&l.act(g)])
            .collect()
    }
}
