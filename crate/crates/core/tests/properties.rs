use std::collections::BTreeSet;

use dendro_core::bochner::{BochnerSpace, QNorm};
use dendro_core::bundle::{bundle, component_label, BundleElement, LambdaSet};
use dendro_core::cocycle::{
    first_identity_violation, first_skew_action_violation, invariant_measure_lp, is_elementary_search,
    minimal_families, retraction_point_family, CocycleError, VirtualDendroMorphism,
};
use dendro_core::corpus::{random_instance, random_table, random_twist, CorpusParams};
use dendro_core::dendrite::{generate, Automorphism, Dendrite, TreeKind, VertexId};
use dendro_core::median_cocycle::{check_coboundary, omega, CheckMode, PNorm};
use dendro_core::rational::int;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn tree(max: usize) -> impl Strategy<Value = Dendrite> {
    (2..=max, any::<u64>()).prop_map(|(n, seed)| generate(TreeKind::Random { n }, seed).unwrap())
}

fn subset(tree: &Dendrite, mask: u32) -> Vec<VertexId> {
    tree.vertices().filter(|&v| mask >> v & 1 == 1).collect()
}

fn some_automorphisms(tree: &Dendrite, pick: usize) -> Vec<Automorphism> {
    let all = tree.automorphisms().unwrap();
    if all.len() <= 24 {
        return all;
    }
    (0..24).map(|i| all[(pick + i * 7919) % all.len()].clone()).collect()
}

fn instance() -> impl Strategy<Value = VirtualDendroMorphism> {
    any::<u64>().prop_map(|seed| random_instance(seed, CorpusParams::default()).sigma)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn arcs_reverse(t in tree(10), x in 0usize..10, y in 0usize..10) {
        let (x, y) = (x % t.len(), y % t.len());
        let mut back = t.arc(y, x).unwrap();
        back.reverse();
        prop_assert_eq!(t.arc(x, y).unwrap(), back);
    }

    #[test]
    fn hull_is_union_of_arcs(t in tree(10), mask in 1u32..1024) {
        let set = subset(&t, mask);
        prop_assume!(!set.is_empty());
        let mut union = BTreeSet::new();
        for &a in &set {
            for &b in &set {
                union.extend(t.arc(a, b).unwrap());
            }
        }
        let hull = t.dendro_hull(&set).unwrap();
        prop_assert_eq!(hull.members().to_vec(), union.into_iter().collect::<Vec<_>>());
    }

    #[test]
    fn retraction_is_idempotent_and_on_arcs(t in tree(10), mask in 1u32..1024) {
        let set = subset(&t, mask);
        prop_assume!(!set.is_empty());
        let sub = t.dendro_hull(&set).unwrap();
        for x in t.vertices() {
            let r = t.retraction(&sub, x).unwrap();
            prop_assert_eq!(t.retraction(&sub, r).unwrap(), r);
            for &m in sub.members() {
                prop_assert!(t.on_arc(r, x, m));
            }
        }
    }

    #[test]
    fn median_is_symmetric_arc_intersection(t in tree(10), p in 0usize..10, q in 0usize..10, r in 0usize..10) {
        let (p, q, r) = (p % t.len(), q % t.len(), r % t.len());
        let m = t.median(p, q, r).unwrap();
        for [a, b, c] in [[p, r, q], [q, p, r], [q, r, p], [r, p, q], [r, q, p]] {
            prop_assert_eq!(t.median(a, b, c).unwrap(), m);
        }
        let meet: Vec<VertexId> = t
            .vertices()
            .filter(|&v| t.on_arc(v, p, q) && t.on_arc(v, q, r) && t.on_arc(v, r, p))
            .collect();
        prop_assert_eq!(meet, vec![m]);
    }

    #[test]
    fn automorphisms_respect_median_and_classes(t in tree(8), pick in any::<usize>()) {
        let (ends, branch) = (t.ends(), t.branch_points());
        for g in some_automorphisms(&t, pick) {
            prop_assert_eq!(g.apply_set(&ends), ends.clone());
            prop_assert_eq!(g.apply_set(&branch), branch.clone());
            for p in t.vertices() {
                for q in t.vertices() {
                    let r = (p + q) % t.len();
                    let m = t.median(p, q, r).unwrap();
                    prop_assert_eq!(g.apply(m), t.median(g.apply(p), g.apply(q), g.apply(r)).unwrap());
                }
            }
        }
    }

    #[test]
    fn degree_identity(t in tree(16)) {
        prop_assert_eq!(t.degree_excess(), -2);
    }

    #[test]
    fn bundle_counts_and_lambda_action(t in tree(8), pick in any::<usize>()) {
        prop_assert_eq!(bundle(&t).len(), 2 * t.edges().len());
        let lambda = LambdaSet::new(&t);
        for g in some_automorphisms(&t, pick) {
            let perm = lambda.permutation(&g);
            let image: BTreeSet<usize> = perm.iter().copied().collect();
            prop_assert_eq!(image.len(), lambda.len());
            for (i, &j) in perm.iter().enumerate() {
                let l = lambda.get(i);
                prop_assert_eq!(lambda.get(j), l.act(&g));
                prop_assert_eq!(l.act(&g).base(), g.apply(l.base()));
            }
        }
    }

    #[test]
    fn omega_alternates_and_sits_on_the_median(t in tree(8), p in 0usize..8, q in 0usize..8, r in 0usize..8) {
        let (p, q, r) = (p % t.len(), q % t.len(), r % t.len());
        let w = omega(&t, p, q, r).unwrap();
        for [a, b, c] in [[q, p, r], [p, r, q], [r, q, p]] {
            let mut sum = omega(&t, a, b, c).unwrap();
            sum.axpy(1, &w);
            prop_assert!(sum.is_zero());
        }
        let m = t.median(p, q, r).unwrap();
        let lambda = LambdaSet::new(&t);
        for &l in lambda.entries() {
            prop_assert_eq!(w.at_lambda(&l.swapped()), -w.at_lambda(&l));
            if w.at_lambda(&l) != 0 {
                prop_assert_eq!(l.base(), m);
            }
        }
        let labels: BTreeSet<_> = [p, q, r].iter().map(|&v| component_label(&t, m, v)).collect();
        if t.is_branch(m) && labels.len() == 3 && !labels.contains(&None) {
            prop_assert!(!w.is_zero());
        }
    }

    #[test]
    fn omega_is_a_cocycle(t in tree(7)) {
        prop_assert!(check_coboundary(&t, CheckMode::Exhaustive).unwrap().passed());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn oracles_agree_and_twists_preserve_elementarity(sigma in instance(), seed in any::<u64>()) {
        let search = is_elementary_search(&sigma);
        prop_assert_eq!(search.is_some(), invariant_measure_lp(&sigma).is_some());
        if let Some(family) = &search {
            prop_assert!(family.is_equivariant(&sigma));
        }
        let f = random_twist(&sigma, &mut ChaCha8Rng::seed_from_u64(seed));
        let twisted = sigma.twist(&f).unwrap();
        prop_assert_eq!(is_elementary_search(&twisted).is_some(), search.is_some());
    }

    #[test]
    fn minimal_families_are_equivariant_antichains(sigma in instance()) {
        let minimal = minimal_families(&sigma);
        prop_assert!(!minimal.closed.is_empty());
        for (i, a) in minimal.closed.iter().enumerate() {
            prop_assert!(a.is_equivariant(&sigma));
            prop_assert!(minimal.hulls[i].is_equivariant(&sigma));
            for (j, b) in minimal.closed.iter().enumerate() {
                if i != j {
                    prop_assert!(!a.is_contained_in(b));
                }
            }
        }
    }

    #[test]
    fn retraction_families_are_equivariant(sigma in instance()) {
        let minimal = minimal_families(&sigma);
        for m in &minimal.hulls {
            for n in &minimal.closed {
                match retraction_point_family(&sigma, m, n) {
                    Ok(a) => prop_assert!(a.is_equivariant(&sigma)),
                    Err(CocycleError::NotDisjoint(_) | CocycleError::AmbiguousRetraction(_)) => {}
                    Err(e) => prop_assert!(false, "unexpected error {e}"),
                }
            }
        }
    }

    #[test]
    fn cocycle_identity_iff_skew_action(sigma in instance(), seed in any::<u64>(), corrupt in any::<bool>()) {
        let table = if corrupt {
            random_table(seed, sigma.group(), sigma.space(), sigma.tree())
        } else {
            sigma.table().to_vec()
        };
        prop_assert_eq!(
            first_identity_violation(sigma.group(), sigma.space(), &table).is_none(),
            first_skew_action_violation(sigma.group(), sigma.space(), &table).is_none()
        );
    }

    #[test]
    fn bochner_action_is_linear_isometric_and_certified(sigma in instance(), seed in any::<u64>()) {
        let space = BochnerSpace::new(&sigma);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut random = || space.from_fn(|_, _| int(rand::Rng::gen_range(&mut rng, -3..=3)));
        let (u, v) = (random(), random());
        let (q, p) = (QNorm::integer(2).unwrap(), PNorm::integer(1).unwrap());
        for g in sigma.group().elements() {
            let gu = space.act(g, &u).unwrap();
            prop_assert_eq!(space.norm(&gu, &q, &p).unwrap().exact, space.norm(&u, &q, &p).unwrap().exact);
            let lhs = space.act(g, &u.combine(&int(2), &v, &int(-5)).unwrap()).unwrap();
            let rhs = gu.combine(&int(2), &space.act(g, &v).unwrap(), &int(-5)).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
        for w in space.invariant_vectors() {
            prop_assert_eq!(space.invariance_violation(&w).unwrap(), None);
            let certificate = space.elementarity_certificate(&w).unwrap();
            prop_assert!(certificate.family.is_equivariant(&sigma));
        }
    }
}
