use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::group::GroupElement;
use super::morphism::VirtualDendroMorphism;
use super::space::Atom;
use super::CocycleError;
use crate::dendrite::{Subdendrite, VertexId};
use crate::lp::feasible_point;
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    /// One vertex per atom.
    Point,
    /// One or two vertices per atom, at least one fiber of size two.
    Pair,
    /// Any nonempty vertex set per atom.
    Closed,
    /// A connected vertex set per atom.
    Subdendrite,
}

/// An assignment `s ↦ K_s ⊆ X` over the atoms of positive measure.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EquivariantFamily {
    kind: FamilyKind,
    fibers: BTreeMap<Atom, Vec<VertexId>>,
}

impl EquivariantFamily {
    /// Checks the shape constraints of `kind`, that the fibers cover exactly
    /// the support, and `K_{γ.s} = σ(γ,s) K_s`.
    pub fn new(
        sigma: &VirtualDendroMorphism,
        kind: FamilyKind,
        fibers: BTreeMap<Atom, Vec<VertexId>>,
    ) -> Result<Self, CocycleError> {
        let family = Self::unchecked(kind, fibers);
        family.validate_shape(sigma)?;
        if let Some((g, s)) = family.equivariance_violation(sigma) {
            return Err(CocycleError::NotEquivariantInput(format!(
                "K({}.{}) != σ({0}, {1}) K({1})",
                sigma.group().name(g),
                sigma.space().name(s)
            )));
        }
        Ok(family)
    }

    pub(crate) fn unchecked(kind: FamilyKind, mut fibers: BTreeMap<Atom, Vec<VertexId>>) -> Self {
        for fiber in fibers.values_mut() {
            fiber.sort_unstable();
            fiber.dedup();
        }
        EquivariantFamily { kind, fibers }
    }

    fn validate_shape(&self, sigma: &VirtualDendroMorphism) -> Result<(), CocycleError> {
        let support: Vec<Atom> = sigma.space().support();
        if self.fibers.keys().copied().collect::<Vec<_>>() != support {
            return Err(CocycleError::MalformedFamily(
                "fibers must be given exactly on the atoms of positive measure".into(),
            ));
        }
        let tree = sigma.tree();
        for (&s, fiber) in &self.fibers {
            let bad = |why: &str| {
                CocycleError::MalformedFamily(format!("fiber at {}: {why}", sigma.space().name(s)))
            };
            if fiber.is_empty() {
                return Err(bad("empty"));
            }
            if fiber.iter().any(|&v| !tree.contains(v)) {
                return Err(bad("unknown vertex"));
            }
            match self.kind {
                FamilyKind::Point if fiber.len() != 1 => return Err(bad("expected one point")),
                FamilyKind::Pair if fiber.len() > 2 => return Err(bad("expected at most two points")),
                FamilyKind::Subdendrite if Subdendrite::new(tree, fiber).is_err() => {
                    return Err(bad("not connected"))
                }
                _ => {}
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn fiber(&self, s: Atom) -> Option<&[VertexId]> {
        self.fibers.get(&s).map(Vec::as_slice)
    }

    pub fn fibers(&self) -> &BTreeMap<Atom, Vec<VertexId>> {
        &self.fibers
    }

    /// First `(γ, s)` with `K_{γ.s} ≠ σ(γ, s) K_s`.
    pub fn equivariance_violation(&self, sigma: &VirtualDendroMorphism) -> Option<(GroupElement, Atom)> {
        let space = sigma.space();
        for (&s, fiber) in &self.fibers {
            for g in sigma.group().elements() {
                let image = sigma.sigma(g, s).apply_set(fiber);
                if self.fibers.get(&space.act(g, s)) != Some(&image) {
                    return Some((g, s));
                }
            }
        }
        None
    }

    pub fn is_equivariant(&self, sigma: &VirtualDendroMorphism) -> bool {
        self.equivariance_violation(sigma).is_none()
    }

    /// `K_s ⊆ other_s` for every atom.
    pub fn is_contained_in(&self, other: &EquivariantFamily) -> bool {
        self.fibers.iter().all(|(s, fiber)| {
            other
                .fibers
                .get(s)
                .is_some_and(|big| fiber.iter().all(|v| big.binary_search(v).is_ok()))
        })
    }

    /// Fiberwise names, for reports.
    pub fn named(&self, sigma: &VirtualDendroMorphism) -> BTreeMap<String, Vec<String>> {
        self.fibers
            .iter()
            .map(|(&s, fiber)| {
                (
                    sigma.space().name(s).to_string(),
                    fiber.iter().map(|&v| sigma.tree().name(v).to_string()).collect(),
                )
            })
            .collect()
    }
}

// Propagate the seed `fiber` at `rep` along its orbit; `None` if two group
// elements send it to different sets over the same atom.
fn propagate(
    sigma: &VirtualDendroMorphism,
    rep: Atom,
    fiber: &[VertexId],
) -> Option<BTreeMap<Atom, Vec<VertexId>>> {
    let mut out: BTreeMap<Atom, Vec<VertexId>> = BTreeMap::new();
    for g in sigma.group().elements() {
        let t = sigma.space().act(g, rep);
        let image = sigma.sigma(g, rep).apply_set(fiber);
        match out.get(&t) {
            Some(existing) if *existing != image => return None,
            Some(_) => {}
            None => {
                out.insert(t, image);
            }
        }
    }
    Some(out)
}

/// Exhaustive search for an equivariant map into 1- or 2-point subsets.
///
/// Each orbit of the support is seeded at its smallest atom, trying single
/// vertices first and then pairs, in identifier order. The result is of
/// kind `Point` when every orbit admits a fixed point.
pub fn is_elementary_search(sigma: &VirtualDendroMorphism) -> Option<EquivariantFamily> {
    let n = sigma.tree().len();
    let candidates = (0..n)
        .map(|x| vec![x])
        .chain((0..n).flat_map(|x| (x + 1..n).map(move |y| vec![x, y])));
    let candidates: Vec<Vec<VertexId>> = candidates.collect();
    let mut fibers = BTreeMap::new();
    for orbit in sigma.space().support_orbits() {
        let rep = orbit[0];
        let local = candidates.iter().find_map(|seed| propagate(sigma, rep, seed))?;
        fibers.extend(local);
    }
    let kind = if fibers.values().all(|f: &Vec<VertexId>| f.len() == 1) {
        FamilyKind::Point
    } else {
        FamilyKind::Pair
    };
    let family = EquivariantFamily::unchecked(kind, fibers);
    debug_assert!(family.is_equivariant(sigma));
    Some(family)
}

/// Probability vectors `μ_s` on the vertices, one per atom of positive measure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasureFamily {
    fibers: BTreeMap<Atom, Vec<Rational>>,
}

impl MeasureFamily {
    pub fn new(fibers: BTreeMap<Atom, Vec<Rational>>) -> Self {
        MeasureFamily { fibers }
    }

    pub fn fibers(&self) -> &BTreeMap<Atom, Vec<Rational>> {
        &self.fibers
    }

    /// Every fiber is a probability vector over the tree's vertices.
    pub fn is_probability(&self, sigma: &VirtualDendroMorphism) -> bool {
        let support = sigma.space().support();
        self.fibers.keys().copied().collect::<Vec<_>>() == support
            && self.fibers.values().all(|mu| {
                mu.len() == sigma.tree().len()
                    && mu.iter().all(|m| !m.is_negative())
                    && mu.iter().sum::<Rational>() == Rational::one()
            })
    }

    /// First `(γ, s)` with `μ_{γ.s} ≠ σ(γ, s)_* μ_s`.
    pub fn equivariance_violation(&self, sigma: &VirtualDendroMorphism) -> Option<(GroupElement, Atom)> {
        for (&s, mu) in &self.fibers {
            for g in sigma.group().elements() {
                let Some(target) = self.fibers.get(&sigma.space().act(g, s)) else {
                    return Some((g, s));
                };
                let h = sigma.sigma(g, s);
                if (0..mu.len()).any(|x| target[h.apply(x)] != mu[x]) {
                    return Some((g, s));
                }
            }
        }
        None
    }
}

/// Exact linear feasibility for an equivariant measure-valued map:
/// `μ_s ≥ 0`, `Σ_x μ_s(x) = 1`, `μ_{γ.s}(σ(γ,s)x) = μ_s(x)` for a generating
/// set of `γ`.
pub fn invariant_measure_lp(sigma: &VirtualDendroMorphism) -> Option<MeasureFamily> {
    let support = sigma.space().support();
    let n = sigma.tree().len();
    let slot: BTreeMap<Atom, usize> = support.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let vars = support.len() * n;
    let var = |s: Atom, x: VertexId| slot[&s] * n + x;

    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let mut rhs = Vec::new();
    for &s in &support {
        let mut row = vec![Rational::zero(); vars];
        for x in 0..n {
            row[var(s, x)] = Rational::one();
        }
        rows.push(row);
        rhs.push(Rational::one());
    }
    let mut links = BTreeSet::new();
    for g in sigma.group().generating_set() {
        for &s in &support {
            let t = sigma.space().act(g, s);
            for x in 0..n {
                let (u, v) = (var(t, sigma.sigma(g, s).apply(x)), var(s, x));
                if u != v {
                    links.insert((u.min(v), u.max(v)));
                }
            }
        }
    }
    for (u, v) in links {
        let mut row = vec![Rational::zero(); vars];
        row[u] = Rational::one();
        row[v] = -Rational::one();
        rows.push(row);
        rhs.push(Rational::zero());
    }
    let x = feasible_point(&rows, &rhs)?;
    let fibers = support
        .iter()
        .map(|&s| (s, x[var(s, 0)..var(s, 0) + n].to_vec()))
        .collect();
    Some(MeasureFamily { fibers })
}

/// `μ_s = (1/|Γ|) Σ_γ δ_{σ(γ, γ⁻¹s) x₀}`: the orbit average of a Dirac mass.
pub fn orbit_average_measure(sigma: &VirtualDendroMorphism, base: VertexId) -> MeasureFamily {
    let group = sigma.group();
    let weight = Rational::new(1.into(), (group.order() as i64).into());
    let n = sigma.tree().len();
    let fibers = sigma
        .space()
        .support()
        .into_iter()
        .map(|s| {
            let mut mu = vec![Rational::zero(); n];
            for g in group.elements() {
                let from = sigma.space().act(group.inv(g), s);
                mu[sigma.sigma(g, from).apply(base)] += &weight;
            }
            (s, mu)
        })
        .collect();
    MeasureFamily { fibers }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalFamilies {
    /// Pointwise-minimal equivariant closed families, sorted.
    pub closed: Vec<EquivariantFamily>,
    /// Their dendro-hull families `M_s = [K_s]`, in the same order.
    pub hulls: Vec<EquivariantFamily>,
}

impl MinimalFamilies {
    /// A single minimal family (the uniqueness statement) holds here.
    pub fn is_unique(&self) -> bool {
        self.closed.len() == 1
    }
}

/// Minimal equivariant closed families, built from skew orbits.
///
/// For every seed `(s₀, a₀)` in the support times the tree, the smallest
/// equivariant family through it is the skew orbit of the seed, read fiber
/// by fiber over the orbit of `s₀`. Orbit families of different Γ-orbits
/// of atoms are combined independently.
pub fn minimal_families(sigma: &VirtualDendroMorphism) -> MinimalFamilies {
    let n = sigma.tree().len();
    let mut per_orbit: Vec<Vec<BTreeMap<Atom, Vec<VertexId>>>> = Vec::new();
    for orbit in sigma.space().support_orbits() {
        let mut found = BTreeSet::new();
        for &seed_atom in &orbit {
            for seed in 0..n {
                let mut fibers: BTreeMap<Atom, Vec<VertexId>> = BTreeMap::new();
                for g in sigma.group().elements() {
                    let (t, a) = sigma.skew_action(g, (seed_atom, seed));
                    fibers.entry(t).or_default().push(a);
                }
                for fiber in fibers.values_mut() {
                    fiber.sort_unstable();
                    fiber.dedup();
                }
                found.insert(fibers);
            }
        }
        per_orbit.push(found.into_iter().collect());
    }
    let mut combined: Vec<BTreeMap<Atom, Vec<VertexId>>> = vec![BTreeMap::new()];
    for choices in &per_orbit {
        combined = combined
            .iter()
            .flat_map(|partial| {
                choices.iter().map(move |choice| {
                    let mut next = partial.clone();
                    next.extend(choice.iter().map(|(k, v)| (*k, v.clone())));
                    next
                })
            })
            .collect();
    }
    let candidates: Vec<EquivariantFamily> = combined
        .into_iter()
        .map(|fibers| EquivariantFamily::unchecked(FamilyKind::Closed, fibers))
        .collect();
    let mut closed: Vec<EquivariantFamily> = candidates
        .iter()
        .filter(|f| {
            !candidates
                .iter()
                .any(|g| g != *f && g.is_contained_in(f))
        })
        .cloned()
        .collect();
    closed.sort();
    closed.dedup();
    let tree = sigma.tree();
    let hulls = closed
        .iter()
        .map(|k| {
            let fibers = k
                .fibers
                .iter()
                .map(|(&s, fiber)| {
                    let hull = tree.dendro_hull(fiber).expect("fibers are nonempty");
                    (s, hull.members().to_vec())
                })
                .collect();
            EquivariantFamily::unchecked(FamilyKind::Subdendrite, fibers)
        })
        .collect();
    MinimalFamilies { closed, hulls }
}

/// `a_s = r^{M_s}(N_s)`: the retraction point of `N_s` onto `M_s`, for
/// fiberwise disjoint equivariant families.
pub fn retraction_point_family(
    sigma: &VirtualDendroMorphism,
    m: &EquivariantFamily,
    n: &EquivariantFamily,
) -> Result<EquivariantFamily, CocycleError> {
    let tree = sigma.tree();
    for (name, family) in [("M", m), ("N", n)] {
        family.validate_shape(sigma)?;
        if let Some((g, s)) = family.equivariance_violation(sigma) {
            return Err(CocycleError::NotEquivariantInput(format!(
                "{name} at ({}, {})",
                sigma.group().name(g),
                sigma.space().name(s)
            )));
        }
    }
    let mut fibers = BTreeMap::new();
    for (&s, m_fiber) in &m.fibers {
        let sub = Subdendrite::new(tree, m_fiber).map_err(|_| {
            CocycleError::MalformedFamily(format!(
                "M at {} is not a subdendrite",
                sigma.space().name(s)
            ))
        })?;
        let n_fiber = &n.fibers[&s];
        if n_fiber.iter().any(|&v| sub.contains(v)) {
            return Err(CocycleError::NotDisjoint(sigma.space().name(s).to_string()));
        }
        let mut points: Vec<VertexId> = n_fiber
            .iter()
            .map(|&v| tree.retraction(&sub, v))
            .collect::<Result<_, _>>()?;
        points.sort_unstable();
        points.dedup();
        if points.len() != 1 {
            return Err(CocycleError::AmbiguousRetraction(sigma.space().name(s).to_string()));
        }
        fibers.insert(s, points);
    }
    let family = EquivariantFamily::unchecked(FamilyKind::Point, fibers);
    if let Some((g, s)) = family.equivariance_violation(sigma) {
        // equivariant disjoint inputs always give an equivariant output
        unreachable!(
            "retraction family not equivariant at ({}, {})",
            sigma.group().name(g),
            sigma.space().name(s)
        );
    }
    Ok(family)
}
