use std::collections::BTreeMap;

use serde::Serialize;

use super::{witness, BochnerElement, BochnerError, BochnerRow, BochnerSpace, Check, Witness};
use crate::cocycle::{Atom, EquivariantFamily, ProbSpace, VirtualDendroMorphism};
use crate::dendrite::{Automorphism, Subdendrite, VertexId};
use crate::median_cocycle::{CheckStatus, OmegaTable};
use crate::rational::Rational;

/// A finite measured Γ-space standing in for a boundary.
pub type BoundaryModel = ProbSpace;

/// `φ(b, s)` for every boundary point `b` and atom `s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateFurstenbergMap {
    table: Vec<Vec<VertexId>>,
}

impl CandidateFurstenbergMap {
    pub fn new(
        sigma: &VirtualDendroMorphism,
        boundary: &BoundaryModel,
        table: Vec<Vec<VertexId>>,
    ) -> Result<Self, BochnerError> {
        if boundary.action_table().len() != sigma.group().order() {
            return Err(BochnerError::ShapeMismatch("boundary is acted on by another group".into()));
        }
        let ok = table.len() == boundary.len()
            && table
                .iter()
                .all(|row| row.len() == sigma.space().len() && row.iter().all(|&v| sigma.tree().contains(v)));
        if !ok {
            return Err(BochnerError::ShapeMismatch("φ needs one vertex per (boundary point, atom)".into()));
        }
        Ok(CandidateFurstenbergMap { table })
    }

    pub fn get(&self, b: Atom, s: Atom) -> VertexId {
        self.table[b][s]
    }

    pub fn table(&self) -> &[Vec<VertexId>] {
        &self.table
    }

    /// `φ'(b, s) = f(s)⁻¹ φ(b, s)`, equivariant for the twisted cocycle
    /// `f(γ.s)⁻¹ σ(γ,s) f(s)` whenever `φ` is equivariant for `σ`.
    pub fn twisted(&self, f: &[Automorphism]) -> CandidateFurstenbergMap {
        let inverses: Vec<Automorphism> = f.iter().map(Automorphism::inverse).collect();
        let table = self
            .table
            .iter()
            .map(|row| row.iter().enumerate().map(|(s, &v)| inverses[s].apply(v)).collect())
            .collect();
        CandidateFurstenbergMap { table }
    }

    /// Every `(γ, b, s)` over positive-measure points with
    /// `φ(γ.b, γ.s) ≠ σ(γ,s) φ(b,s)`.
    pub fn equivariance_violations(&self, sigma: &VirtualDendroMorphism, boundary: &BoundaryModel) -> Vec<Witness> {
        let (group, space, tree) = (sigma.group(), sigma.space(), sigma.tree());
        let mut out = Vec::new();
        for g in group.elements() {
            for b in boundary.support() {
                for s in space.support() {
                    let expected = sigma.sigma(g, s).apply(self.get(b, s));
                    let actual = self.get(boundary.act(g, b), space.act(g, s));
                    if expected != actual {
                        out.push(witness([
                            ("gamma", group.name(g).to_string()),
                            ("b", boundary.name(b).to_string()),
                            ("s", space.name(s).to_string()),
                            ("expected", tree.name(expected).to_string()),
                            ("actual", tree.name(actual).to_string()),
                        ]));
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FurstenbergReport {
    pub status: CheckStatus,
    pub checks: Vec<Check>,
}

/// Checks equivariance of `φ` and that every slice lands in the ends of the
/// subdendrite family `m`.
pub fn verify_furstenberg_candidate(
    sigma: &VirtualDendroMorphism,
    boundary: &BoundaryModel,
    phi: &CandidateFurstenbergMap,
    m: &EquivariantFamily,
) -> FurstenbergReport {
    let (space, tree) = (sigma.space(), sigma.tree());
    let mut checks = vec![Check::from_witnesses(
        "phi-equivariant",
        phi.equivariance_violations(sigma, boundary),
    )];
    let mut shape = Vec::new();
    let mut ends = Vec::new();
    for s in space.support() {
        let fiber = m.fiber(s).unwrap_or(&[]);
        let Ok(sub) = Subdendrite::new(tree, fiber) else {
            shape.push(witness([("s", space.name(s).to_string())]));
            continue;
        };
        let sub_ends = sub.ends(tree);
        for b in boundary.support() {
            let v = phi.get(b, s);
            if !sub_ends.contains(&v) {
                ends.push(witness([
                    ("b", boundary.name(b).to_string()),
                    ("s", space.name(s).to_string()),
                    ("vertex", tree.name(v).to_string()),
                ]));
            }
        }
    }
    checks.push(Check::from_witnesses("family-is-subdendrite", shape));
    checks.push(Check::from_witnesses("slices-in-ends", ends));
    let status = if checks.iter().all(Check::passed) {
        CheckStatus::Pass
    } else {
        CheckStatus::Fail
    };
    FurstenbergReport { status, checks }
}

/// `(b₀, b₁, b₂) ↦ [s ↦ ω(φ_s(b₀), φ_s(b₁), φ_s(b₂))]` over positive-measure
/// boundary points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PullbackCochain {
    points: Vec<Atom>,
    table: BTreeMap<[Atom; 3], BochnerElement>,
}

impl PullbackCochain {
    pub fn points(&self) -> &[Atom] {
        &self.points
    }

    pub fn get(&self, triple: [Atom; 3]) -> Option<&BochnerElement> {
        self.table.get(&triple)
    }

    pub fn is_zero(&self) -> bool {
        self.table.values().all(BochnerElement::is_zero)
    }

    /// Nonzero values, keyed by boundary point names.
    pub fn rows(&self, space: &BochnerSpace, boundary: &BoundaryModel) -> Vec<([String; 3], Vec<BochnerRow>)> {
        self.table
            .iter()
            .filter(|(_, u)| !u.is_zero())
            .map(|(t, u)| (t.map(|b| boundary.name(b).to_string()), space.rows(u)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SliceImage {
    pub atom: String,
    /// Essential image `E_s = {φ(b, s)}` over positive-measure `b`.
    pub image: Vec<String>,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PullbackReport {
    pub status: CheckStatus,
    pub checks: Vec<Check>,
    pub vanishes: bool,
    pub nonzero_triples: usize,
    pub slices: Vec<SliceImage>,
}

pub fn pullback_class(
    sigma: &VirtualDendroMorphism,
    boundary: &BoundaryModel,
    phi: &CandidateFurstenbergMap,
) -> Result<(PullbackCochain, PullbackReport), BochnerError> {
    if let Some(w) = phi.equivariance_violations(sigma, boundary).first() {
        let text = w.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(", ");
        return Err(BochnerError::NotEquivariant(text));
    }
    let space = BochnerSpace::new(sigma);
    let tree = sigma.tree();
    let mut omega = OmegaTable::new(tree);
    let points = boundary.support();
    let mut table = BTreeMap::new();
    for &b0 in &points {
        for &b1 in &points {
            for &b2 in &points {
                let u = space.from_fn(|s, l| {
                    let f = omega.get(phi.get(b0, s), phi.get(b1, s), phi.get(b2, s));
                    Rational::from_integer(f.at_lambda(&l).into())
                });
                table.insert([b0, b1, b2], u);
            }
        }
    }
    let cochain = PullbackCochain { points, table };
    let names = |t: &[Atom]| t.iter().map(|&b| boundary.name(b)).collect::<Vec<_>>().join(",");
    let minus_one = -Rational::from_integer(1.into());
    let one = Rational::from_integer(1.into());

    let mut alternating = Vec::new();
    for (&[b0, b1, b2], u) in &cochain.table {
        let negated = u.combine(&minus_one, u, &Rational::from_integer(0.into()))?;
        for swapped in [[b1, b0, b2], [b0, b2, b1]] {
            if cochain.table[&swapped] != negated {
                alternating.push(witness([
                    ("triple", names(&[b0, b1, b2])),
                    ("swapped", names(&swapped)),
                ]));
            }
        }
    }

    let mut invariance = Vec::new();
    for g in sigma.group().elements() {
        for (&t, u) in &cochain.table {
            let moved = t.map(|b| boundary.act(g, b));
            if cochain.table[&moved] != space.act(g, u)? {
                invariance.push(witness([
                    ("gamma", sigma.group().name(g).to_string()),
                    ("triple", names(&t)),
                ]));
            }
        }
    }

    let mut coboundary = Vec::new();
    let pts = &cochain.points;
    for &a in pts {
        for &b in pts {
            for &c in pts {
                for &d in pts {
                    let faces = [[b, c, d], [a, c, d], [a, b, d], [a, b, c]];
                    let mut acc = space.zero();
                    for (i, face) in faces.iter().enumerate() {
                        let sign = if i % 2 == 0 { &one } else { &minus_one };
                        acc = acc.combine(&one, &cochain.table[face], sign)?;
                    }
                    if !acc.is_zero() {
                        coboundary.push(witness([("tuple", names(&[a, b, c, d]))]));
                    }
                }
            }
        }
    }

    let slices: Vec<SliceImage> = sigma
        .space()
        .support()
        .into_iter()
        .map(|s| {
            let mut image: Vec<VertexId> = pts.iter().map(|&b| phi.get(b, s)).collect();
            image.sort_unstable();
            image.dedup();
            SliceImage {
                atom: sigma.space().name(s).to_string(),
                size: image.len(),
                image: image.into_iter().map(|v| tree.name(v).to_string()).collect(),
            }
        })
        .collect();
    let vanishes = cochain.is_zero();
    let small_images = slices.iter().all(|sl| sl.size <= 2);
    let mut dichotomy = Vec::new();
    if vanishes != small_images {
        let widest = slices.iter().max_by_key(|sl| sl.size).expect("support is nonempty");
        dichotomy.push(witness([
            ("vanishes", vanishes.to_string()),
            ("atom", widest.atom.clone()),
            ("image", widest.image.join(",")),
        ]));
    }

    let checks = vec![
        Check::from_witnesses("alternating", alternating),
        Check::from_witnesses("gamma-invariant", invariance),
        Check::from_witnesses("coboundary-zero", coboundary),
        Check::from_witnesses("vanishing-iff-small-images", dichotomy),
    ];
    let status = if checks.iter().all(Check::passed) {
        CheckStatus::Pass
    } else {
        CheckStatus::Fail
    };
    let nonzero_triples = cochain.table.values().filter(|u| !u.is_zero()).count();
    Ok((
        cochain,
        PullbackReport {
            status,
            checks,
            vanishes,
            nonzero_triples,
            slices,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::{minimal_families, FiniteGroup};
    use crate::dendrite::{Automorphism, Dendrite};
    use crate::rational::ratio;

    fn star() -> Dendrite {
        Dendrite::from_edges(&["c", "l1", "l2", "l3"], &[("c", "l1"), ("c", "l2"), ("c", "l3")]).unwrap()
    }

    fn trivial_on(tree: Dendrite) -> VirtualDendroMorphism {
        let g = FiniteGroup::trivial();
        let n = tree.len();
        VirtualDendroMorphism::constant(g.clone(), ProbSpace::point(&g), tree, vec![Automorphism::identity(n)]).unwrap()
    }

    fn uniform_boundary(group: &FiniteGroup, k: usize, action: Vec<Vec<Atom>>) -> BoundaryModel {
        ProbSpace::new(
            group,
            (0..k).map(|i| format!("b{i}")).collect(),
            vec![ratio(1, k as i64); k],
            action,
        )
        .unwrap()
    }

    #[test]
    fn leaves_of_star_give_six_entries_per_triple() {
        let sigma = trivial_on(star());
        let boundary = uniform_boundary(sigma.group(), 3, vec![vec![0, 1, 2]]);
        let phi = CandidateFurstenbergMap::new(&sigma, &boundary, vec![vec![1], vec![2], vec![3]]).unwrap();
        let (cochain, report) = pullback_class(&sigma, &boundary, &phi).unwrap();
        assert_eq!(report.status, CheckStatus::Pass, "{report:?}");
        assert!(!report.vanishes);
        assert_eq!(report.nonzero_triples, 6);
        let space = BochnerSpace::new(&sigma);
        for (_, rows) in cochain.rows(&space, &boundary) {
            assert_eq!(rows.len(), 6);
        }
        assert!(cochain.get([0, 0, 1]).unwrap().is_zero());
    }

    #[test]
    fn constant_phi_vanishes() {
        let sigma = trivial_on(star());
        let boundary = uniform_boundary(sigma.group(), 2, vec![vec![0, 1]]);
        let phi = CandidateFurstenbergMap::new(&sigma, &boundary, vec![vec![1], vec![1]]).unwrap();
        let (cochain, report) = pullback_class(&sigma, &boundary, &phi).unwrap();
        assert!(cochain.is_zero());
        assert!(report.vanishes);
        assert_eq!(report.status, CheckStatus::Pass);
    }

    #[test]
    fn interior_images_break_the_dichotomy() {
        // three distinct points on a path: every median lies on the path, so
        // ω vanishes although the image has three points
        let path = Dendrite::from_edges(&["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap();
        let sigma = trivial_on(path);
        let boundary = uniform_boundary(sigma.group(), 3, vec![vec![0, 1, 2]]);
        let phi = CandidateFurstenbergMap::new(&sigma, &boundary, vec![vec![0], vec![1], vec![2]]).unwrap();
        let (_, report) = pullback_class(&sigma, &boundary, &phi).unwrap();
        assert!(report.vanishes);
        assert_eq!(report.slices[0].size, 3);
        let dichotomy = report.checks.iter().find(|c| c.name == "vanishing-iff-small-images").unwrap();
        assert!(!dichotomy.passed());
        assert!(report.checks.iter().filter(|c| c.name != dichotomy.name).all(Check::passed));
    }

    #[test]
    fn equivariant_boundary_on_rotated_star() {
        let z3 = FiniteGroup::cyclic(3);
        let t = star();
        let r = Automorphism::from_names(&t, &[("l1", "l2"), ("l2", "l3"), ("l3", "l1")]).unwrap();
        let sigma = VirtualDendroMorphism::constant(
            z3.clone(),
            ProbSpace::point(&z3),
            t,
            vec![Automorphism::identity(4), r.clone(), r.compose(&r)],
        )
        .unwrap();
        let action: Vec<Vec<Atom>> = z3.elements().map(|g| (0..3).map(|b| z3.mul(g, b)).collect()).collect();
        let boundary = uniform_boundary(&z3, 3, action);
        // b ↦ the leaf σ(b) l1
        let table = (0..3).map(|b| vec![sigma.sigma(b, 0).apply(1)]).collect();
        let phi = CandidateFurstenbergMap::new(&sigma, &boundary, table).unwrap();
        let (_, report) = pullback_class(&sigma, &boundary, &phi).unwrap();
        assert_eq!(report.status, CheckStatus::Pass, "{report:?}");
        assert!(!report.vanishes);

        let families = minimal_families(&sigma);
        let leaves = families.hulls.iter().find(|h| h.fiber(0).unwrap().len() == 4).unwrap();
        let ok = verify_furstenberg_candidate(&sigma, &boundary, &phi, leaves);
        assert_eq!(ok.status, CheckStatus::Pass);

        let center = families.hulls.iter().find(|h| h.fiber(0).unwrap().len() == 1).unwrap();
        let centered = CandidateFurstenbergMap::new(&sigma, &boundary, vec![vec![0]; 3]).unwrap();
        assert_eq!(verify_furstenberg_candidate(&sigma, &boundary, &centered, center).status, CheckStatus::Pass);
        let interior = verify_furstenberg_candidate(&sigma, &boundary, &centered, leaves);
        assert_eq!(interior.checks[2].status, CheckStatus::Fail);

        let broken = CandidateFurstenbergMap::new(&sigma, &boundary, vec![vec![1]; 3]).unwrap();
        let report = verify_furstenberg_candidate(&sigma, &boundary, &broken, leaves);
        assert_eq!(report.checks[0].status, CheckStatus::Fail);
        assert_eq!(report.checks[0].witnesses[0]["gamma"], "r");
        assert!(matches!(
            pullback_class(&sigma, &boundary, &broken),
            Err(BochnerError::NotEquivariant(_))
        ));
    }
}
