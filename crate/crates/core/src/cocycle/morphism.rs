use std::collections::BTreeMap;

use super::group::{FiniteGroup, GroupElement};
use super::space::{Atom, ProbSpace};
use super::CocycleError;
use crate::dendrite::{Automorphism, Dendrite, VertexId};

/// Default cap on `|Aut(X)|^|Ω|` for [`VirtualDendroMorphism::are_cohomologous`].
pub const DEFAULT_COHOMOLOGY_BOUND: u128 = 1_000_000;

/// A cocycle `σ : Γ × Ω → Aut(X)` with
/// `σ(γ₁γ₂, s) = σ(γ₁, γ₂.s) ∘ σ(γ₂, s)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VirtualDendroMorphism {
    group: FiniteGroup,
    space: ProbSpace,
    tree: Dendrite,
    // table[g][s] = σ(g, s)
    table: Vec<Vec<Automorphism>>,
}

/// First `(γ₁, γ₂, s)` where the cocycle identity fails, scanning in order.
pub fn first_identity_violation(
    group: &FiniteGroup,
    space: &ProbSpace,
    table: &[Vec<Automorphism>],
) -> Option<(GroupElement, GroupElement, Atom)> {
    for g1 in group.elements() {
        for g2 in group.elements() {
            let g12 = group.mul(g1, g2);
            for s in space.atoms() {
                let rhs = table[g1][space.act(g2, s)].compose(&table[g2][s]);
                if table[g12][s] != rhs {
                    return Some((g1, g2, s));
                }
            }
        }
    }
    None
}

/// First `(γ₁, γ₂, s, a)` where `(γ₁γ₂).(s,a) ≠ γ₁.(γ₂.(s,a))` for the skew
/// action `γ.(s, a) = (γ.s, σ(γ,s)a)`.
pub fn first_skew_action_violation(
    group: &FiniteGroup,
    space: &ProbSpace,
    table: &[Vec<Automorphism>],
) -> Option<(GroupElement, GroupElement, Atom, VertexId)> {
    let skew = |g: GroupElement, (s, a): (Atom, VertexId)| (space.act(g, s), table[g][s].apply(a));
    let n = table.first().and_then(|row| row.first()).map_or(0, Automorphism::len);
    for g1 in group.elements() {
        for g2 in group.elements() {
            let g12 = group.mul(g1, g2);
            for s in space.atoms() {
                for a in 0..n {
                    if skew(g12, (s, a)) != skew(g1, skew(g2, (s, a))) {
                        return Some((g1, g2, s, a));
                    }
                }
            }
        }
    }
    None
}

impl VirtualDendroMorphism {
    /// Completes `partial` (a table for some generating subset of elements)
    /// through the cocycle identity and checks the identity on every pair.
    pub fn verify(
        group: FiniteGroup,
        space: ProbSpace,
        tree: Dendrite,
        partial: BTreeMap<GroupElement, Vec<Automorphism>>,
    ) -> Result<Self, CocycleError> {
        if space.action_table().len() != group.order() {
            return Err(CocycleError::Mismatched);
        }
        for (&g, row) in &partial {
            if g >= group.order() || row.len() != space.len() {
                return Err(CocycleError::IncompleteTable(format!(
                    "row for element #{g} must cover all {} atoms",
                    space.len()
                )));
            }
            for sigma in row {
                sigma.check_tree(&tree)?;
            }
        }
        let mut table: Vec<Option<Vec<Automorphism>>> = vec![None; group.order()];
        table[group.identity()] = Some(vec![Automorphism::identity(tree.len()); space.len()]);
        let gens: Vec<GroupElement> = partial.keys().copied().collect();
        for (x, g, h) in group.spanning_steps(&gens)? {
            let row_h = table[h].as_ref().expect("reached earlier");
            let row_x = space
                .atoms()
                .map(|s| partial[&g][space.act(h, s)].compose(&row_h[s]))
                .collect();
            table[x] = Some(row_x);
        }
        let mut table: Vec<Vec<Automorphism>> =
            table.into_iter().map(|row| row.expect("spanned")).collect();
        // given entries take precedence, so inconsistent input surfaces below
        for (&g, row) in &partial {
            table[g] = row.clone();
        }
        Self::from_table(group, space, tree, table)
    }

    /// Full table `table[g][s] = σ(g, s)`.
    pub fn from_table(
        group: FiniteGroup,
        space: ProbSpace,
        tree: Dendrite,
        table: Vec<Vec<Automorphism>>,
    ) -> Result<Self, CocycleError> {
        if table.len() != group.order() || table.iter().any(|row| row.len() != space.len()) {
            return Err(CocycleError::IncompleteTable("table must be |Γ| x |Ω|".into()));
        }
        for sigma in table.iter().flatten() {
            sigma.check_tree(&tree)?;
        }
        if let Some((g1, g2, s)) = first_identity_violation(&group, &space, &table) {
            return Err(CocycleError::CocycleIdentityViolated {
                g1: group.name(g1).to_string(),
                g2: group.name(g2).to_string(),
                atom: space.name(s).to_string(),
            });
        }
        Ok(VirtualDendroMorphism {
            group,
            space,
            tree,
            table,
        })
    }

    /// `σ(γ, s) = ρ(γ)` for a homomorphism `ρ` given on every element.
    pub fn constant(
        group: FiniteGroup,
        space: ProbSpace,
        tree: Dendrite,
        rho: Vec<Automorphism>,
    ) -> Result<Self, CocycleError> {
        let table = rho.into_iter().map(|g| vec![g; space.len()]).collect();
        Self::from_table(group, space, tree, table)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn space(&self) -> &ProbSpace {
        &self.space
    }

    pub fn tree(&self) -> &Dendrite {
        &self.tree
    }

    pub fn sigma(&self, g: GroupElement, s: Atom) -> &Automorphism {
        &self.table[g][s]
    }

    pub fn table(&self) -> &[Vec<Automorphism>] {
        &self.table
    }

    /// `γ.(s, a) = (γ.s, σ(γ, s) a)`.
    pub fn skew_action(&self, g: GroupElement, (s, a): (Atom, VertexId)) -> (Atom, VertexId) {
        (self.space.act(g, s), self.table[g][s].apply(a))
    }

    /// The cohomologous cocycle `f(γ.s)⁻¹ σ(γ, s) f(s)`.
    pub fn twist(&self, f: &[Automorphism]) -> Result<Self, CocycleError> {
        if f.len() != self.space.len() {
            return Err(CocycleError::IncompleteTable("twist needs one automorphism per atom".into()));
        }
        for fs in f {
            fs.check_tree(&self.tree)?;
        }
        let table = self
            .group
            .elements()
            .map(|g| {
                self.space
                    .atoms()
                    .map(|s| {
                        f[self.space.act(g, s)]
                            .inverse()
                            .compose(&self.table[g][s])
                            .compose(&f[s])
                    })
                    .collect()
            })
            .collect();
        Self::from_table(self.group.clone(), self.space.clone(), self.tree.clone(), table)
    }

    /// A twist `f` with `other = twist(self, f)`, if one exists. The first
    /// witness is returned, scanning automorphisms in lexicographic order at
    /// each orbit representative.
    pub fn are_cohomologous(
        &self,
        other: &VirtualDendroMorphism,
        bound: u128,
    ) -> Result<Option<Vec<Automorphism>>, CocycleError> {
        if self.group != other.group || self.space != other.space || self.tree != other.tree {
            return Err(CocycleError::Mismatched);
        }
        let autos = self.tree.automorphisms()?;
        let size = (autos.len() as u128)
            .checked_pow(self.space.len() as u32)
            .unwrap_or(u128::MAX);
        if size > bound {
            return Err(CocycleError::SearchSpaceTooLarge { size, bound });
        }
        let mut f: Vec<Option<Automorphism>> = vec![None; self.space.len()];
        for rep in self.space.atoms() {
            if f[rep].is_some() {
                continue;
            }
            let mut found = None;
            'candidates: for candidate in &autos {
                let mut local: BTreeMap<Atom, Automorphism> = BTreeMap::new();
                for g in self.group.elements() {
                    let t = self.space.act(g, rep);
                    let value = self.table[g][rep]
                        .compose(candidate)
                        .compose(&other.table[g][rep].inverse());
                    match local.get(&t) {
                        Some(existing) if *existing != value => continue 'candidates,
                        _ => {
                            local.insert(t, value);
                        }
                    }
                }
                found = Some(local);
                break;
            }
            let Some(local) = found else {
                return Ok(None);
            };
            for (t, value) in local {
                f[t] = Some(value);
            }
        }
        let f: Vec<Automorphism> = f.into_iter().map(|x| x.expect("every atom lies in an orbit")).collect();
        debug_assert_eq!(self.twist(&f).as_ref().ok(), Some(other));
        Ok(Some(f))
    }

    /// Restriction to the subgroup with the given elements.
    pub fn restrict(&self, subset: &[GroupElement]) -> Result<Self, CocycleError> {
        let mut elements = subset.to_vec();
        elements.sort_unstable();
        elements.dedup();
        if !self.group.is_subgroup(&elements) {
            return Err(CocycleError::NotASubgroup);
        }
        let pos: BTreeMap<GroupElement, usize> =
            elements.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        let names = elements.iter().map(|&g| self.group.name(g).to_string()).collect();
        let table = elements
            .iter()
            .map(|&a| elements.iter().map(|&b| pos[&self.group.mul(a, b)]).collect())
            .collect();
        let sub = FiniteGroup::from_table(names, table)?;
        let space = self.space.restricted(&elements);
        let sigma = elements.iter().map(|&g| self.table[g].clone()).collect();
        Self::from_table(sub, space, self.tree.clone(), sigma)
    }
}
