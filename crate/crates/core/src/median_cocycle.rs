//! The cocycles `α` and `ω_X` on the double bundle, with exact checks of the
//! cocycle identity and of equivariance.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Pow, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::bundle::{component_label, lambda_index, BundleElement, DoubleBundlePoint, LambdaIndex};
use crate::dendrite::{Automorphism, Dendrite, DendriteError, VertexId};
use crate::rational::{rational_to_f64, Rational};

/// Largest tree accepted by exhaustive checks.
pub const EXHAUSTIVE_BOUND: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OmegaError {
    #[error(transparent)]
    Dendrite(#[from] DendriteError),
    #[error("function is not defined on Λ(X)")]
    BadDomain,
    #[error("norm exponent must be >= 1")]
    BadExponent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FunctionDomain {
    /// All of `Bund²(X)`.
    Bund2,
    /// Only `Λ(X)`.
    Lambda,
}

/// Finitely supported integer function on `Bund²(X)` or `Λ(X)`. Zeros are
/// never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseBundleFunction {
    domain: FunctionDomain,
    entries: BTreeMap<DoubleBundlePoint, i64>,
}

impl SparseBundleFunction {
    pub fn zero(domain: FunctionDomain) -> Self {
        SparseBundleFunction {
            domain,
            entries: BTreeMap::new(),
        }
    }

    pub fn domain(&self) -> FunctionDomain {
        self.domain
    }

    pub fn add_at(&mut self, point: DoubleBundlePoint, value: i64) {
        if value == 0 {
            return;
        }
        let slot = self.entries.entry(point).or_insert(0);
        *slot += value;
        if *slot == 0 {
            self.entries.remove(&point);
        }
    }

    pub fn get(&self, point: &DoubleBundlePoint) -> i64 {
        self.entries.get(point).copied().unwrap_or(0)
    }

    pub fn at_lambda(&self, l: &LambdaIndex) -> i64 {
        self.get(&(*l).into())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&DoubleBundlePoint, &i64)> {
        self.entries.iter()
    }

    /// `self + sign * other`.
    pub fn axpy(&mut self, sign: i64, other: &SparseBundleFunction) {
        for (&p, &v) in &other.entries {
            self.add_at(p, sign * v);
        }
    }

    pub fn sum(terms: &[(i64, &SparseBundleFunction)], domain: FunctionDomain) -> Self {
        let mut out = SparseBundleFunction::zero(domain);
        for (sign, f) in terms {
            out.axpy(*sign, f);
        }
        out
    }

    /// Drops every entry whose base is not a branch point.
    pub fn restrict_to_lambda(&self, tree: &Dendrite) -> SparseBundleFunction {
        SparseBundleFunction {
            domain: FunctionDomain::Lambda,
            entries: self
                .entries
                .iter()
                .filter(|(p, _)| tree.is_branch(p.base) && p.first != p.second)
                .map(|(&p, &v)| (p, v))
                .collect(),
        }
    }

    /// `(g · f)(g·λ) = f(λ)`.
    pub fn pushforward(&self, g: &Automorphism) -> SparseBundleFunction {
        SparseBundleFunction {
            domain: self.domain,
            entries: self.entries.iter().map(|(p, &v)| (p.act(g), v)).collect(),
        }
    }

    /// Bases carrying a nonzero value, sorted.
    pub fn support_bases(&self) -> Vec<VertexId> {
        let mut bases: Vec<VertexId> = self.entries.keys().map(|p| p.base).collect();
        bases.dedup();
        bases
    }

    /// Rows `[base, first, second, value]`, sorted by identifier.
    pub fn rows(&self, tree: &Dendrite) -> Vec<SparseRow> {
        let mut rows: Vec<SparseRow> = self
            .entries
            .iter()
            .map(|(p, &v)| {
                (
                    tree.name(p.base).to_string(),
                    tree.name(p.first).to_string(),
                    tree.name(p.second).to_string(),
                    v,
                )
            })
            .collect();
        rows.sort();
        rows
    }
}

pub type SparseRow = (String, String, String, i64);

/// `α(p, q)` on `Bund²(X)`.
pub fn alpha(tree: &Dendrite, p: VertexId, q: VertexId) -> Result<SparseBundleFunction, OmegaError> {
    for v in [p, q] {
        if !tree.contains(v) {
            return Err(DendriteError::UnknownVertex(format!("#{v}")).into());
        }
    }
    let mut out = SparseBundleFunction::zero(FunctionDomain::Bund2);
    for base in tree.vertices() {
        let (Some(cp), Some(cq)) = (component_label(tree, base, p), component_label(tree, base, q))
        else {
            continue;
        };
        if cp != cq {
            out.add_at(
                DoubleBundlePoint {
                    base,
                    first: cp,
                    second: cq,
                },
                1,
            );
            out.add_at(
                DoubleBundlePoint {
                    base,
                    first: cq,
                    second: cp,
                },
                -1,
            );
        }
    }
    Ok(out)
}

/// `α(p,q) + α(q,r) + α(r,p)` on all of `Bund²(X)`.
pub fn omega_unrestricted(
    tree: &Dendrite,
    p: VertexId,
    q: VertexId,
    r: VertexId,
) -> Result<SparseBundleFunction, OmegaError> {
    let mut out = alpha(tree, p, q)?;
    out.axpy(1, &alpha(tree, q, r)?);
    out.axpy(1, &alpha(tree, r, p)?);
    Ok(out)
}

/// `ω_X(p, q, r)` restricted to `Λ(X)`.
pub fn omega(
    tree: &Dendrite,
    p: VertexId,
    q: VertexId,
    r: VertexId,
) -> Result<SparseBundleFunction, OmegaError> {
    Ok(omega_unrestricted(tree, p, q, r)?.restrict_to_lambda(tree))
}

/// Exponent `p ≥ 1` of `ℓ^p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PNorm(Rational);

impl PNorm {
    pub fn new(p: Rational) -> Result<PNorm, OmegaError> {
        if p >= Rational::one() {
            Ok(PNorm(p))
        } else {
            Err(OmegaError::BadExponent)
        }
    }

    pub fn integer(p: u32) -> Result<PNorm, OmegaError> {
        PNorm::new(Rational::from_integer(BigInt::from(p)))
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LpNorm {
    /// `Σ |f|^p`, when it is an integer: `p` integral, or every value is ±1.
    #[serde(serialize_with = "serialize_opt_bigint")]
    pub power_sum: Option<BigInt>,
    pub value: f64,
}

fn serialize_opt_bigint<S: serde::Serializer>(v: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
    match v.as_ref().and_then(|b| b.to_i64()) {
        Some(i) => s.serialize_i64(i),
        None => match v {
            Some(b) => s.serialize_str(&b.to_string()),
            None => s.serialize_none(),
        },
    }
}

pub fn lp_norm(f: &SparseBundleFunction, p: &PNorm) -> Result<LpNorm, OmegaError> {
    if f.domain != FunctionDomain::Lambda {
        return Err(OmegaError::BadDomain);
    }
    let exponent = p.value();
    let pf = rational_to_f64(exponent);
    let unit = f.entries.values().all(|v| v.abs() == 1);
    let power_sum = if exponent.is_integer() {
        let e = exponent.to_integer().to_u32();
        e.map(|e| {
            f.entries
                .values()
                .map(|v| Pow::pow(BigInt::from(v.abs()), e))
                .sum::<BigInt>()
        })
    } else if unit {
        Some(BigInt::from(f.len()))
    } else {
        None
    };
    let sum: f64 = match &power_sum {
        Some(s) => s.to_f64().unwrap_or(f64::INFINITY),
        None => f.entries.values().map(|v| (v.abs() as f64).powf(pf)).sum(),
    };
    Ok(LpNorm {
        power_sum,
        value: sum.powf(1.0 / pf),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckMode {
    Exhaustive,
    Sampled { seed: u64, samples: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub points: Vec<String>,
    /// Residual (or offending) entries.
    pub entries: Vec<SparseRow>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct CheckCounts {
    pub tuples: u64,
    pub entries: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub status: CheckStatus,
    pub violations: Vec<Violation>,
    pub counts: CheckCounts,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }
}

/// Memo of `ω` over all triples of a small tree.
pub struct OmegaTable<'a> {
    tree: &'a Dendrite,
    cells: Vec<Option<SparseBundleFunction>>,
}

impl<'a> OmegaTable<'a> {
    pub fn new(tree: &'a Dendrite) -> Self {
        let n = tree.len();
        OmegaTable {
            tree,
            cells: vec![None; n * n * n],
        }
    }

    pub fn get(&mut self, p: VertexId, q: VertexId, r: VertexId) -> &SparseBundleFunction {
        let n = self.tree.len();
        let tree = self.tree;
        self.cells[(p * n + q) * n + r]
            .get_or_insert_with(|| omega(tree, p, q, r).expect("indices are in range"))
    }
}

fn tuples<const K: usize>(n: usize, mode: CheckMode) -> Result<Vec<[VertexId; K]>, OmegaError> {
    match mode {
        CheckMode::Exhaustive => {
            if n > EXHAUSTIVE_BOUND {
                return Err(DendriteError::TooLarge {
                    size: n,
                    bound: EXHAUSTIVE_BOUND,
                }
                .into());
            }
            let total = n.pow(K as u32);
            Ok((0..total)
                .map(|mut code| {
                    let mut t = [0; K];
                    for slot in t.iter_mut().rev() {
                        *slot = code % n;
                        code /= n;
                    }
                    t
                })
                .collect())
        }
        CheckMode::Sampled { seed, samples } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Ok((0..samples)
                .map(|_| std::array::from_fn(|_| rng.gen_range(0..n)))
                .collect())
        }
    }
}

/// `δω(p,q,r,w) = ω(q,r,w) − ω(p,r,w) + ω(p,q,w) − ω(p,q,r)` must vanish.
pub fn check_coboundary(tree: &Dendrite, mode: CheckMode) -> Result<CheckReport, OmegaError> {
    let mut table = OmegaTable::new(tree);
    let cached = matches!(mode, CheckMode::Exhaustive);
    check_coboundary_with(tree, mode, |p, q, r| {
        if cached {
            table.get(p, q, r).clone()
        } else {
            omega(tree, p, q, r).expect("indices are in range")
        }
    })
}

/// Same check against an arbitrary 2-cochain `cochain(p, q, r)`.
pub fn check_coboundary_with<F>(
    tree: &Dendrite,
    mode: CheckMode,
    mut cochain: F,
) -> Result<CheckReport, OmegaError>
where
    F: FnMut(VertexId, VertexId, VertexId) -> SparseBundleFunction,
{
    let mut counts = CheckCounts::default();
    for [p, q, r, w] in tuples::<4>(tree.len(), mode)? {
        counts.tuples += 1;
        let mut residual = cochain(q, r, w);
        residual.axpy(-1, &cochain(p, r, w));
        residual.axpy(1, &cochain(p, q, w));
        residual.axpy(-1, &cochain(p, q, r));
        counts.entries += residual.len() as u64;
        if !residual.is_zero() {
            return Ok(CheckReport {
                status: CheckStatus::Fail,
                violations: vec![Violation {
                    points: [p, q, r, w].iter().map(|&v| tree.name(v).to_string()).collect(),
                    entries: residual.rows(tree),
                }],
                counts,
            });
        }
    }
    Ok(CheckReport {
        status: CheckStatus::Pass,
        violations: Vec::new(),
        counts,
    })
}

/// `ω(gp, gq, gr)(g·λ) = ω(p, q, r)(λ)` for every triple and `λ ∈ Λ(X)`.
pub fn check_equivariance(
    tree: &Dendrite,
    g: &Automorphism,
    mode: CheckMode,
) -> Result<CheckReport, OmegaError> {
    g.check_tree(tree)?;
    let lambda = lambda_index(tree);
    let mut counts = CheckCounts::default();
    let mut violations = Vec::new();
    let mut table = OmegaTable::new(tree);
    for [p, q, r] in tuples::<3>(tree.len(), mode)? {
        counts.tuples += 1;
        let before = table.get(p, q, r).clone();
        let after = table.get(g.apply(p), g.apply(q), g.apply(r));
        let mut bad = Vec::new();
        for l in &lambda {
            counts.entries += 1;
            let (x, y) = (after.at_lambda(&l.act(g)), before.at_lambda(l));
            if x != y {
                let [b, c1, c2] = l.to_names(tree);
                bad.push((b, c1, c2, x - y));
            }
        }
        if !bad.is_empty() {
            violations.push(Violation {
                points: [p, q, r].iter().map(|&v| tree.name(v).to_string()).collect(),
                entries: bad,
            });
            break;
        }
    }
    Ok(CheckReport {
        status: if violations.is_empty() {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        },
        violations,
        counts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn star() -> Dendrite {
        Dendrite::from_edges(
            &["c", "l1", "l2", "l3"],
            &[("c", "l1"), ("c", "l2"), ("c", "l3")],
        )
        .unwrap()
    }

    fn pt(t: &Dendrite, b: &str, c1: &str, c2: &str) -> DoubleBundlePoint {
        DoubleBundlePoint {
            base: t.vertex(b).unwrap(),
            first: t.vertex(c1).unwrap(),
            second: t.vertex(c2).unwrap(),
        }
    }

    #[test]
    fn alpha_star_cases() {
        let s = star();
        let v = |n| s.vertex(n).unwrap();
        let a = alpha(&s, v("l1"), v("l2")).unwrap();
        assert_eq!(a.get(&pt(&s, "c", "l1", "l2")), 1);
        assert_eq!(a.get(&pt(&s, "c", "l2", "l1")), -1);
        assert!(alpha(&s, v("l1"), v("l1")).unwrap().is_zero());
        assert!(alpha(&s, 0, 99).is_err());
    }

    #[test]
    fn omega_star_six_entries() {
        let s = star();
        let v = |n| s.vertex(n).unwrap();
        let w = omega(&s, v("l1"), v("l2"), v("l3")).unwrap();
        assert_eq!(w.len(), 6);
        for (a, b) in [("l1", "l2"), ("l2", "l3"), ("l3", "l1")] {
            assert_eq!(w.get(&pt(&s, "c", a, b)), 1);
            assert_eq!(w.get(&pt(&s, "c", b, a)), -1);
        }
        let p1 = lp_norm(&w, &PNorm::integer(1).unwrap()).unwrap();
        assert_eq!(p1.power_sum, Some(BigInt::from(6)));
        assert_eq!(p1.value, 6.0);
        let p2 = lp_norm(&w, &PNorm::integer(2).unwrap()).unwrap();
        assert_eq!(p2.power_sum, Some(BigInt::from(6)));
        assert!((p2.value - 6f64.sqrt()).abs() < 1e-12);
        let p32 = lp_norm(&w, &PNorm::new(ratio(3, 2)).unwrap()).unwrap();
        assert_eq!(p32.power_sum, Some(BigInt::from(6)));
    }

    #[test]
    fn omega_degenerate_cases() {
        let p = Dendrite::from_edges(&["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap();
        let w = omega(&p, 0, 1, 2).unwrap();
        assert!(w.is_zero());
        assert_eq!(lp_norm(&w, &PNorm::integer(1).unwrap()).unwrap().value, 0.0);
        let s = star();
        assert!(omega(&s, 1, 1, 2).unwrap().is_zero());
    }

    #[test]
    fn norm_domain_and_exponent_errors() {
        let s = star();
        let a = alpha(&s, 1, 2).unwrap();
        assert_eq!(
            lp_norm(&a, &PNorm::integer(1).unwrap()),
            Err(OmegaError::BadDomain)
        );
        assert_eq!(PNorm::new(ratio(1, 2)), Err(OmegaError::BadExponent));
    }

    #[test]
    fn non_unit_values_with_fractional_exponent() {
        let mut f = SparseBundleFunction::zero(FunctionDomain::Lambda);
        let s = star();
        f.add_at(pt(&s, "c", "l1", "l2"), 2);
        let n = lp_norm(&f, &PNorm::new(ratio(3, 2)).unwrap()).unwrap();
        assert_eq!(n.power_sum, None);
        assert!((n.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn coboundary_star_and_path() {
        let s = star();
        let r = check_coboundary(&s, CheckMode::Exhaustive).unwrap();
        assert!(r.passed());
        assert_eq!(r.counts.tuples, 256);
        let p = Dendrite::from_edges(&["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap();
        assert!(check_coboundary(&p, CheckMode::Exhaustive).unwrap().passed());
    }

    #[test]
    fn corrupted_cochain_is_caught() {
        let s = star();
        let bad = pt(&s, "c", "l1", "l2");
        let report = check_coboundary_with(&s, CheckMode::Exhaustive, |p, q, r| {
            let mut w = omega(&s, p, q, r).unwrap();
            if (p, q, r) == (1, 2, 3) {
                w.add_at(bad, 1);
            }
            w
        })
        .unwrap();
        assert_eq!(report.status, CheckStatus::Fail);
        assert_eq!(report.violations.len(), 1);
        assert!(!report.violations[0].entries.is_empty());
    }

    #[test]
    fn exhaustive_bound() {
        let names: Vec<String> = (0..11).map(|i| format!("v{i:02}")).collect();
        let raw = crate::dendrite::RawTree {
            edges: names.windows(2).map(|w| [w[0].clone(), w[1].clone()]).collect(),
            vertices: names,
        };
        let t = Dendrite::validate(&raw).unwrap();
        assert!(matches!(
            check_coboundary(&t, CheckMode::Exhaustive),
            Err(OmegaError::Dendrite(DendriteError::TooLarge { .. }))
        ));
        let sampled = check_coboundary(
            &t,
            CheckMode::Sampled {
                seed: 3,
                samples: 200,
            },
        )
        .unwrap();
        assert!(sampled.passed());
        assert_eq!(sampled.counts.tuples, 200);
    }

    #[test]
    fn equivariance_on_star() {
        let s = star();
        let e = Automorphism::identity(4);
        assert!(check_equivariance(&s, &e, CheckMode::Exhaustive).unwrap().passed());
        let rot = Automorphism::from_names(&s, &[("l1", "l2"), ("l2", "l3"), ("l3", "l1")]).unwrap();
        assert!(check_equivariance(&s, &rot, CheckMode::Exhaustive).unwrap().passed());
        for p in s.vertices() {
            for q in s.vertices() {
                for r in s.vertices() {
                    let mut sum = omega(&s, q, p, r).unwrap();
                    sum.axpy(1, &omega(&s, p, q, r).unwrap());
                    assert!(sum.is_zero());
                }
            }
        }
    }

    #[test]
    fn rows_are_sorted_by_name() {
        let s = star();
        let w = omega(&s, 1, 2, 3).unwrap();
        let rows = w.rows(&s);
        assert_eq!(rows[0], ("c".into(), "l1".into(), "l2".into(), 1));
        assert_eq!(rows.len(), 6);
    }
}
