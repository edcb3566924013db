//! Finite models of `L^q(Ω, ℓ^p(Λ(X)))` with the twisted action of `Γ`.
//!
//! Vectors live on `supp(μ) × Λ(X)`. The action is
//! `(γ.u)(s)(a) = u(γ⁻¹.s)(σ(γ⁻¹, s) a)`, equivalently
//! `δ_(s,λ) ↦ δ_(γ.s, σ(γ,s)λ)` on basis vectors.

mod boundary;
mod norm;

use std::collections::BTreeMap;

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

pub use boundary::{
    pullback_class, verify_furstenberg_candidate, BoundaryModel, CandidateFurstenbergMap, FurstenbergReport,
    PullbackCochain, PullbackReport, SliceImage,
};
pub use norm::{split_power, RadicalSum};

use crate::bundle::{LambdaIndex, LambdaSet};
use crate::cocycle::{Atom, CocycleError, EquivariantFamily, FamilyKind, GroupElement, VirtualDendroMorphism};
use crate::dendrite::{CenterResult, DendriteError, VertexId};
use crate::median_cocycle::{CheckStatus, OmegaError, PNorm};
use crate::rational::{format_rational, rational_to_f64, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BochnerError {
    #[error(transparent)]
    Cocycle(#[from] CocycleError),
    #[error(transparent)]
    Dendrite(#[from] DendriteError),
    #[error(transparent)]
    Omega(#[from] OmegaError),
    #[error("norm exponent must be >= 1")]
    BadExponent,
    #[error("vector does not match the space: {0}")]
    ShapeMismatch(String),
    #[error("vector is not fixed by {0}")]
    NotInvariant(String),
    #[error("vector is zero")]
    ZeroVector,
    #[error("max-abs level is not constant on supp(μ): {first} at {first_atom}, {second} at {second_atom}")]
    NonConstantLevel {
        first_atom: String,
        first: String,
        second_atom: String,
        second: String,
    },
    #[error("map is not equivariant: {0}")]
    NotEquivariant(String),
}

/// Named fields of a failed check.
pub type Witness = BTreeMap<String, String>;

/// Witnesses kept per check.
pub const MAX_WITNESSES: usize = 5;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: CheckStatus,
    pub witnesses: Vec<Witness>,
}

impl Check {
    pub(crate) fn from_witnesses(name: &str, witnesses: Vec<Witness>) -> Check {
        Check {
            name: name.to_string(),
            status: if witnesses.is_empty() {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            },
            witnesses: witnesses.into_iter().take(MAX_WITNESSES).collect(),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }
}

pub(crate) fn witness<const N: usize>(fields: [(&str, String); N]) -> Witness {
    fields.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

/// Outer exponent `q` of `L^q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QNorm {
    Finite(Rational),
    Infinity,
}

impl QNorm {
    pub fn finite(q: Rational) -> Result<QNorm, BochnerError> {
        if q >= Rational::one() {
            Ok(QNorm::Finite(q))
        } else {
            Err(BochnerError::BadExponent)
        }
    }

    pub fn integer(q: u32) -> Result<QNorm, BochnerError> {
        QNorm::finite(Rational::from_integer(q.into()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormValue {
    /// `‖u‖^power` in radical normal form, when both exponents are integers.
    pub exact: Option<RadicalSum>,
    /// The exponent `exact` is raised to: `q`, or `1` for `q = ∞`.
    pub power: u32,
    pub value: f64,
}

/// A vector of the Bochner space: one rational per `(atom, λ)` with the atom
/// of positive measure.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BochnerElement {
    width: usize,
    support: Vec<Atom>,
    values: Vec<Rational>,
}

impl BochnerElement {
    pub fn support(&self) -> &[Atom] {
        &self.support
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// Fiber `u(s)` over `Λ(X)`; `None` for null atoms.
    pub fn fiber(&self, s: Atom) -> Option<&[Rational]> {
        let i = self.support.binary_search(&s).ok()?;
        Some(&self.values[i * self.width..(i + 1) * self.width])
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    fn same_shape(&self, other: &BochnerElement) -> bool {
        self.width == other.width && self.support == other.support
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: &Rational, other: &BochnerElement, b: &Rational) -> Result<BochnerElement, BochnerError> {
        if !self.same_shape(other) {
            return Err(BochnerError::ShapeMismatch("different index sets".into()));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(x, y)| a * x + b * y)
            .collect();
        Ok(BochnerElement {
            values,
            ..self.clone()
        })
    }
}

/// One serialized row: `[atom, base, first, second, "p/q"]`.
pub type BochnerRow = [String; 5];

/// The index set `supp(μ) × Λ(X)` of a cocycle, with its permutation action.
#[derive(Debug, Clone)]
pub struct BochnerSpace<'a> {
    sigma: &'a VirtualDendroMorphism,
    lambda: LambdaSet,
    support: Vec<Atom>,
    slot: BTreeMap<Atom, usize>,
}

impl<'a> BochnerSpace<'a> {
    pub fn new(sigma: &'a VirtualDendroMorphism) -> Self {
        let support = sigma.space().support();
        let slot = support.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        BochnerSpace {
            sigma,
            lambda: LambdaSet::new(sigma.tree()),
            support,
            slot,
        }
    }

    pub fn sigma(&self) -> &VirtualDendroMorphism {
        self.sigma
    }

    pub fn lambda(&self) -> &LambdaSet {
        &self.lambda
    }

    pub fn support(&self) -> &[Atom] {
        &self.support
    }

    /// `|supp(μ)| · |Λ(X)|`.
    pub fn dimension(&self) -> usize {
        self.support.len() * self.lambda.len()
    }

    pub fn index(&self, s: Atom, l: &LambdaIndex) -> Option<usize> {
        Some(self.slot.get(&s)? * self.lambda.len() + self.lambda.position(l)?)
    }

    pub fn unindex(&self, i: usize) -> (Atom, LambdaIndex) {
        let w = self.lambda.len();
        (self.support[i / w], self.lambda.get(i % w))
    }

    pub fn zero(&self) -> BochnerElement {
        self.from_values(vec![Rational::zero(); self.dimension()])
    }

    pub fn from_fn(&self, mut f: impl FnMut(Atom, LambdaIndex) -> Rational) -> BochnerElement {
        let values = (0..self.dimension())
            .map(|i| {
                let (s, l) = self.unindex(i);
                f(s, l)
            })
            .collect();
        self.from_values(values)
    }

    pub fn from_values(&self, values: Vec<Rational>) -> BochnerElement {
        assert_eq!(values.len(), self.dimension(), "one value per index");
        BochnerElement {
            width: self.lambda.len(),
            support: self.support.clone(),
            values,
        }
    }

    /// Builds a vector from named rows; unlisted entries are zero.
    pub fn from_rows(&self, rows: &[BochnerRow]) -> Result<BochnerElement, BochnerError> {
        let tree = self.sigma.tree();
        let space = self.sigma.space();
        let mut u = self.zero();
        for [atom, base, first, second, value] in rows {
            let s = space.atom(atom)?;
            let (b, f, c) = (tree.vertex(base)?, tree.vertex(first)?, tree.vertex(second)?);
            let l = LambdaIndex::new(tree, b, f, c)
                .ok_or_else(|| BochnerError::ShapeMismatch(format!("({base}, {first}, {second}) is not in Λ(X)")))?;
            let i = self
                .index(s, &l)
                .ok_or_else(|| BochnerError::ShapeMismatch(format!("atom {atom} has measure zero")))?;
            u.values[i] = crate::rational::parse_rational(value)
                .map_err(|e| BochnerError::ShapeMismatch(format!("{value:?}: {e}")))?;
        }
        Ok(u)
    }

    /// Nonzero entries as sorted rows.
    pub fn rows(&self, u: &BochnerElement) -> Vec<BochnerRow> {
        let tree = self.sigma.tree();
        let space = self.sigma.space();
        let mut rows: Vec<BochnerRow> = u
            .values
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, v)| {
                let (s, l) = self.unindex(i);
                let [b, f, c] = l.to_names(tree);
                [space.name(s).to_string(), b, f, c, format_rational(v)]
            })
            .collect();
        rows.sort();
        rows
    }

    fn check_shape(&self, u: &BochnerElement) -> Result<(), BochnerError> {
        if u.width != self.lambda.len() || u.support != self.support {
            return Err(BochnerError::ShapeMismatch("vector belongs to another space".into()));
        }
        Ok(())
    }

    /// `perm[i]` is the index of `γ` applied to basis vector `i`.
    pub fn index_permutation(&self, g: GroupElement) -> Vec<usize> {
        let w = self.lambda.len();
        let mut perm = vec![0; self.dimension()];
        for (k, &s) in self.support.iter().enumerate() {
            let t = self.slot[&self.sigma.space().act(g, s)];
            let inner = self.lambda.permutation(self.sigma.sigma(g, s));
            for (j, &image) in inner.iter().enumerate() {
                perm[k * w + j] = t * w + image;
            }
        }
        perm
    }

    pub fn act(&self, g: GroupElement, u: &BochnerElement) -> Result<BochnerElement, BochnerError> {
        self.check_shape(u)?;
        let perm = self.index_permutation(g);
        let mut values = vec![Rational::zero(); self.dimension()];
        for (i, v) in u.values.iter().enumerate() {
            values[perm[i]] = v.clone();
        }
        Ok(self.from_values(values))
    }

    /// `‖u‖_{L^q(ℓ^p)}` with the measure weights of `Ω`.
    pub fn norm(&self, u: &BochnerElement, q: &QNorm, p: &PNorm) -> Result<NormValue, BochnerError> {
        self.check_shape(u)?;
        let p = p.value();
        let fiber_sums: Vec<(Atom, Option<Rational>, f64)> = self
            .support
            .iter()
            .map(|&s| {
                let fiber = u.fiber(s).expect("support atom");
                let exact = p.is_integer().then(|| {
                    let e = p.to_integer().to_u32().unwrap_or(u32::MAX);
                    fiber.iter().map(|v| num_traits::Pow::pow(v.abs(), e)).sum::<Rational>()
                });
                let approx = match &exact {
                    Some(r) => rational_to_f64(r),
                    None => fiber.iter().map(|v| rational_to_f64(&v.abs()).powf(rational_to_f64(p))).sum(),
                };
                (s, exact, approx)
            })
            .collect();
        let pf = rational_to_f64(p);
        let p_int = p.is_integer().then(|| p.to_integer().to_u32()).flatten();
        match q {
            QNorm::Infinity => {
                let value = fiber_sums.iter().map(|(_, _, a)| a.powf(1.0 / pf)).fold(0.0, f64::max);
                let exact = p_int.and_then(|pi| {
                    let max = fiber_sums.iter().filter_map(|(_, e, _)| e.clone()).max()?;
                    let mut r = RadicalSum::zero(pi);
                    r.add_power(&Rational::one(), &max, 1);
                    Some(r)
                });
                Ok(NormValue { exact, power: 1, value })
            }
            QNorm::Finite(q) => {
                let qf = rational_to_f64(q);
                let measure = |s: Atom| self.sigma.space().measure(s).clone();
                let value = fiber_sums
                    .iter()
                    .map(|(s, _, a)| rational_to_f64(&measure(*s)) * a.powf(qf / pf))
                    .sum::<f64>()
                    .powf(1.0 / qf);
                let q_int = q.is_integer().then(|| q.to_integer().to_u32()).flatten();
                let exact = match (p_int, q_int) {
                    (Some(pi), Some(qi)) => {
                        // S^{q/p} with the fraction reduced
                        let g = num_integer::gcd(pi, qi);
                        let mut r = RadicalSum::zero(pi / g);
                        for (s, e, _) in &fiber_sums {
                            r.add_power(&measure(*s), e.as_ref().expect("integral p"), qi / g);
                        }
                        Some(r)
                    }
                    _ => None,
                };
                Ok(NormValue {
                    exact,
                    power: q_int.unwrap_or(0),
                    value,
                })
            }
        }
    }

    /// Orbit indicators of the index permutation action, ordered by smallest
    /// index: a basis of the fixed subspace.
    pub fn invariant_vectors(&self) -> Vec<BochnerElement> {
        let perms: Vec<Vec<usize>> = self
            .sigma
            .group()
            .generating_set()
            .into_iter()
            .map(|g| self.index_permutation(g))
            .collect();
        let n = self.dimension();
        let mut orbit_of = vec![usize::MAX; n];
        let mut basis = Vec::new();
        for start in 0..n {
            if orbit_of[start] != usize::MAX {
                continue;
            }
            let id = basis.len();
            let mut values = vec![Rational::zero(); n];
            let mut stack = vec![start];
            orbit_of[start] = id;
            while let Some(i) = stack.pop() {
                values[i] = Rational::one();
                for perm in &perms {
                    let j = perm[i];
                    if orbit_of[j] == usize::MAX {
                        orbit_of[j] = id;
                        stack.push(j);
                    }
                }
            }
            basis.push(self.from_values(values));
        }
        basis
    }

    /// First generator not fixing `u`.
    pub fn invariance_violation(&self, u: &BochnerElement) -> Result<Option<GroupElement>, BochnerError> {
        for g in self.sigma.group().generating_set() {
            if self.act(g, u)? != *u {
                return Ok(Some(g));
            }
        }
        Ok(None)
    }

    /// The point-or-pair family extracted from an invariant vector: maximal
    /// level sets, their branch points, the hull of those, and its center.
    pub fn elementarity_certificate(&self, u: &BochnerElement) -> Result<Certificate, BochnerError> {
        self.check_shape(u)?;
        if let Some(g) = self.invariance_violation(u)? {
            return Err(BochnerError::NotInvariant(self.sigma.group().name(g).to_string()));
        }
        if u.is_zero() {
            return Err(BochnerError::ZeroVector);
        }
        let tree = self.sigma.tree();
        let space = self.sigma.space();
        let levels: Vec<Rational> = self
            .support
            .iter()
            .map(|&s| u.fiber(s).expect("support atom").iter().map(Signed::abs).max().expect("Λ is nonempty"))
            .collect();
        if let Some(k) = levels.iter().position(|l| *l != levels[0]) {
            return Err(BochnerError::NonConstantLevel {
                first_atom: space.name(self.support[0]).to_string(),
                first: format_rational(&levels[0]),
                second_atom: space.name(self.support[k]).to_string(),
                second: format_rational(&levels[k]),
            });
        }
        let level = levels[0].clone();
        let mut fibers = BTreeMap::new();
        let mut steps = Vec::new();
        for &s in &self.support {
            let fiber = u.fiber(s).expect("support atom");
            let mut bases: Vec<VertexId> = fiber
                .iter()
                .enumerate()
                .filter(|(_, v)| v.abs() == level)
                .map(|(j, _)| self.lambda.get(j).base)
                .collect();
            bases.sort_unstable();
            bases.dedup();
            let hull = tree.dendro_hull(&bases)?;
            let center = tree.center_of(&hull)?;
            fibers.insert(s, center.vertices());
            steps.push(CertificateStep {
                atom: s,
                branch_points: bases,
                hull: hull.members().to_vec(),
                center,
            });
        }
        let kind = if fibers.values().all(|f: &Vec<VertexId>| f.len() == 1) {
            FamilyKind::Point
        } else {
            FamilyKind::Pair
        };
        let family = EquivariantFamily::new(self.sigma, kind, fibers)?;
        Ok(Certificate { level, steps, family })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateStep {
    pub atom: Atom,
    /// `L_s`: bases of the maximal level set.
    pub branch_points: Vec<VertexId>,
    /// `T_s = [L_s]`.
    pub hull: Vec<VertexId>,
    pub center: CenterResult,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub level: Rational,
    pub steps: Vec<CertificateStep>,
    pub family: EquivariantFamily,
}
