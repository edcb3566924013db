//! Deterministic instance generators.
//!
//! All randomness comes from `ChaCha8Rng::seed_from_u64(seed)`. Cocycles are
//! induced from homomorphisms `H → Aut(X)` of a subgroup onto the coset
//! space `Γ/H` (constant cocycles when `H = Γ`), then twisted by a random
//! `f: Ω → Aut(X)`, so the cocycle identity holds by construction.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bochner::{BoundaryModel, CandidateFurstenbergMap};
use crate::cocycle::{Atom, FiniteGroup, GroupElement, ProbSpace, VirtualDendroMorphism};
use crate::dendrite::{generate, Automorphism, Dendrite, TreeKind, VertexId};
use crate::rational::Rational;

/// Permutation generators, named.
pub type Generators = Vec<(String, Vec<usize>)>;

fn cycle(n: usize) -> Vec<usize> {
    (0..n).map(|i| (i + 1) % n).collect()
}

/// Left-regular generators `i`, `j` of the quaternion group, on the eight
/// elements `±1, ±i, ±j, ±k` indexed as `sign · 4 + unit`.
fn quaternion() -> Generators {
    // unit products: table[a][b] = (sign, unit) of a·b for 1, i, j, k
    const UNIT: [[(usize, usize); 4]; 4] = [
        [(0, 0), (0, 1), (0, 2), (0, 3)],
        [(0, 1), (1, 0), (0, 3), (1, 2)],
        [(0, 2), (1, 3), (1, 0), (0, 1)],
        [(0, 3), (0, 2), (1, 1), (1, 0)],
    ];
    let left = |unit: usize| -> Vec<usize> {
        (0..8)
            .map(|x| {
                let (sx, ux) = (x / 4, x % 4);
                let (s, u) = UNIT[unit][ux];
                ((s + sx) % 2) * 4 + u
            })
            .collect()
    };
    vec![("i".into(), left(1)), ("j".into(), left(2))]
}

/// Groups of order at most 12, as permutation generators.
pub fn group_zoo() -> Vec<(String, Generators)> {
    let mut zoo: Vec<(String, Generators)> = vec![("trivial".into(), vec![])];
    for n in 2..=6 {
        zoo.push((format!("Z{n}"), vec![("r".into(), cycle(n))]));
    }
    zoo.push((
        "V4".into(),
        vec![("a".into(), vec![1, 0, 3, 2]), ("b".into(), vec![2, 3, 0, 1])],
    ));
    for n in 3..=6 {
        let f: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
        zoo.push((format!("D{n}"), vec![("r".into(), cycle(n)), ("f".into(), f)]));
    }
    zoo.push((
        "A4".into(),
        vec![("a".into(), vec![1, 2, 0, 3]), ("b".into(), vec![1, 0, 3, 2])],
    ));
    zoo.push(("Q8".into(), quaternion()));
    zoo
}

pub fn group_of(generators: &Generators) -> FiniteGroup {
    if generators.is_empty() {
        FiniteGroup::trivial()
    } else {
        FiniteGroup::from_permutations(generators).expect("zoo generators are permutations")
    }
}

/// Extends images of `gens` to a homomorphism on the subgroup they generate,
/// if the images respect every relation.
pub fn extend_homomorphism(
    group: &FiniteGroup,
    gens: &[GroupElement],
    images: &[Automorphism],
    n: usize,
) -> Option<BTreeMap<GroupElement, Automorphism>> {
    let image_of: BTreeMap<GroupElement, &Automorphism> = gens.iter().copied().zip(images).collect();
    let mut rho = BTreeMap::from([(group.identity(), Automorphism::identity(n))]);
    let mut frontier = vec![group.identity()];
    while let Some(h) = frontier.pop() {
        for (&g, &img) in &image_of {
            let x = group.mul(g, h);
            let candidate = img.compose(&rho[&h]);
            match rho.get(&x) {
                Some(existing) if *existing != candidate => return None,
                Some(_) => {}
                None => {
                    rho.insert(x, candidate);
                    frontier.push(x);
                }
            }
        }
    }
    for (&a, ra) in &rho {
        for (&b, rb) in &rho {
            if rho.get(&group.mul(a, b)) != Some(&ra.compose(rb)) {
                return None;
            }
        }
    }
    Some(rho)
}

/// A random homomorphism from the subgroup `sub` into `autos`; random
/// generator images are tried first, the trivial map is the fallback.
pub fn random_homomorphism(
    group: &FiniteGroup,
    sub: &[GroupElement],
    autos: &[Automorphism],
    n: usize,
    rng: &mut ChaCha8Rng,
) -> BTreeMap<GroupElement, Automorphism> {
    let gens = minimal_generators(group, sub);
    for _ in 0..64 {
        let images: Vec<Automorphism> = gens.iter().map(|_| autos.choose(rng).expect("identity").clone()).collect();
        if let Some(rho) = extend_homomorphism(group, &gens, &images, n) {
            return rho;
        }
    }
    sub.iter().map(|&h| (h, Automorphism::identity(n))).collect()
}

fn minimal_generators(group: &FiniteGroup, sub: &[GroupElement]) -> Vec<GroupElement> {
    let mut gens = Vec::new();
    let mut span = group.generated(&gens);
    for &h in sub {
        if span.binary_search(&h).is_err() {
            gens.push(h);
            span = group.generated(&gens);
        }
    }
    gens
}

/// `Γ/H` with atoms `s0, s1, ...`, optionally followed by a null orbit
/// `Γ/K` with atoms `z0, z1, ...`.
pub fn coset_space(group: &FiniteGroup, h: &[GroupElement], null: Option<&[GroupElement]>) -> ProbSpace {
    let main = group.left_cosets(h);
    let extra = null.map(|k| group.left_cosets(k)).unwrap_or_default();
    let mut names: Vec<String> = (0..main.len()).map(|i| format!("s{i}")).collect();
    names.extend((0..extra.len()).map(|i| format!("z{i}")));
    let weight = Rational::new(1.into(), (main.len() as i64).into());
    let mut measure = vec![weight; main.len()];
    measure.extend(std::iter::repeat(Rational::from_integer(0.into())).take(extra.len()));
    let locate = |cosets: &[Vec<GroupElement>], x: GroupElement| {
        cosets.iter().position(|c| c.binary_search(&x).is_ok()).expect("cosets partition")
    };
    let action = group
        .elements()
        .map(|g| {
            let mut row: Vec<Atom> = main.iter().map(|c| locate(&main, group.mul(g, c[0]))).collect();
            row.extend(extra.iter().map(|c| main.len() + locate(&extra, group.mul(g, c[0]))));
            row
        })
        .collect();
    ProbSpace::new(group, names, measure, action).expect("coset spaces are measure preserving")
}

/// Cocycle induced from `rho: H → Aut(X)` on the first `|Γ/H|` atoms:
/// `σ(γ, gH) = rho(r⁻¹ γ g)` with `g`, `r` the smallest coset members.
/// On the null orbit `Γ/K` the cocycle is trivial.
pub fn induced_cocycle(
    group: &FiniteGroup,
    space: ProbSpace,
    tree: Dendrite,
    h: &[GroupElement],
    rho: &BTreeMap<GroupElement, Automorphism>,
) -> VirtualDendroMorphism {
    let cosets = group.left_cosets(h);
    let n = tree.len();
    let table = group
        .elements()
        .map(|g| {
            space
                .atoms()
                .map(|s| {
                    if s >= cosets.len() {
                        return Automorphism::identity(n);
                    }
                    let rep = cosets[s][0];
                    let target = cosets[space.act(g, s)][0];
                    let inner = group.mul(group.inv(target), group.mul(g, rep));
                    rho[&inner].clone()
                })
                .collect()
        })
        .collect();
    VirtualDendroMorphism::from_table(group.clone(), space, tree, table).expect("induced cocycles are cocycles")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorpusParams {
    pub max_tree: usize,
    pub max_atoms: usize,
    pub null_orbit: bool,
}

impl Default for CorpusParams {
    fn default() -> Self {
        CorpusParams {
            max_tree: 7,
            max_atoms: 4,
            null_orbit: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CorpusInstance {
    pub label: String,
    pub generators: Generators,
    pub sigma: VirtualDendroMorphism,
}

fn random_tree(rng: &mut ChaCha8Rng, max_tree: usize) -> Dendrite {
    let n = rng.gen_range(3..=max_tree.max(3));
    let kind = match rng.gen_range(0..6) {
        0 => TreeKind::Path { n },
        1 => TreeKind::Star { leaves: n - 1 },
        _ => TreeKind::Random { n },
    };
    generate(kind, rng.gen()).expect("valid tree parameters")
}

/// Random subgroup of index at most `max_index`.
fn random_subgroup(group: &FiniteGroup, max_index: usize, rng: &mut ChaCha8Rng) -> Vec<GroupElement> {
    let subs: Vec<Vec<GroupElement>> = group
        .small_subgroups()
        .into_iter()
        .filter(|h| group.order() / h.len() <= max_index)
        .collect();
    subs.choose(rng).expect("the whole group qualifies").clone()
}

pub fn random_twist(sigma: &VirtualDendroMorphism, rng: &mut ChaCha8Rng) -> Vec<Automorphism> {
    let autos = sigma.tree().automorphisms().expect("small corpus trees");
    sigma.space().atoms().map(|_| autos.choose(rng).expect("identity").clone()).collect()
}

/// One random valid cocycle; the same seed always yields the same instance.
pub fn random_instance(seed: u64, params: CorpusParams) -> CorpusInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let zoo = group_zoo();
    let (name, generators) = zoo.choose(&mut rng).expect("zoo is nonempty").clone();
    let group = group_of(&generators);
    let tree = random_tree(&mut rng, params.max_tree);
    let autos = tree.automorphisms().expect("small corpus trees");
    let h = random_subgroup(&group, params.max_atoms, &mut rng);
    let room = params.max_atoms.saturating_sub(group.order() / h.len());
    let null = if params.null_orbit && room > 0 && rng.gen_bool(0.25) {
        Some(random_subgroup(&group, room, &mut rng))
    } else {
        None
    };
    let space = coset_space(&group, &h, null.as_deref());
    let rho = random_homomorphism(&group, &h, &autos, tree.len(), &mut rng);
    let base = induced_cocycle(&group, space, tree, &h, &rho);
    let f = random_twist(&base, &mut rng);
    let sigma = base.twist(&f).expect("twists of cocycles are cocycles");
    let label = format!(
        "{name}/|Ω|={}/n={}/seed={seed}",
        sigma.space().len(),
        sigma.tree().len()
    );
    CorpusInstance {
        label,
        generators,
        sigma,
    }
}

/// A boundary model `Γ/K` with `|Γ/K| ≤ 4` and an equivariant `φ` with values
/// in the ends of the tree, if one exists for some `K`. Each diagonal orbit
/// of `B × Ω` receives a random end fixed by its stabilizer.
pub fn end_valued_boundary(
    sigma: &VirtualDendroMorphism,
    rng: &mut ChaCha8Rng,
) -> Option<(BoundaryModel, CandidateFurstenbergMap)> {
    let group = sigma.group();
    let space = sigma.space();
    let ends = sigma.tree().ends();
    let mut subs: Vec<Vec<GroupElement>> = group
        .small_subgroups()
        .into_iter()
        .filter(|k| group.order() / k.len() <= 4)
        .collect();
    subs.shuffle(rng);
    // larger quotients first
    subs.sort_by_key(|k| k.len());
    'subgroups: for k in subs {
        let boundary = coset_space(group, &k, None);
        let mut table = vec![vec![usize::MAX; space.len()]; boundary.len()];
        for b in boundary.atoms() {
            for s in space.atoms() {
                if table[b][s] != usize::MAX {
                    continue;
                }
                let fixed: Vec<VertexId> = ends
                    .iter()
                    .copied()
                    .filter(|&v| {
                        group
                            .elements()
                            .filter(|&g| boundary.act(g, b) == b && space.act(g, s) == s)
                            .all(|g| sigma.sigma(g, s).apply(v) == v)
                    })
                    .collect();
                let Some(&v) = fixed.choose(rng) else {
                    continue 'subgroups;
                };
                for g in group.elements() {
                    table[boundary.act(g, b)][space.act(g, s)] = sigma.sigma(g, s).apply(v);
                }
            }
        }
        let phi = CandidateFurstenbergMap::new(sigma, &boundary, table).expect("complete table");
        debug_assert!(phi.equivariance_violations(sigma, &boundary).is_empty());
        return Some((boundary, phi));
    }
    None
}

/// `random_instance(seed)` together with an end-valued boundary drawn from
/// the same seed.
pub fn boundary_instance(
    seed: u64,
    params: CorpusParams,
) -> Option<(CorpusInstance, BoundaryModel, CandidateFurstenbergMap)> {
    let instance = random_instance(seed, params);
    let mut rng = ChaCha8Rng::seed_from_u64(seed.rotate_left(32) ^ 0x9e37_79b9_7f4a_7c15);
    let (boundary, phi) = end_valued_boundary(&instance.sigma, &mut rng)?;
    Some((instance, boundary, phi))
}

/// `Z/2` swapping two leaves of the star `K_{1,3}` on a one-point space.
pub fn star_z2() -> (Generators, VirtualDendroMorphism) {
    let generators: Generators = vec![("r".into(), vec![1, 0])];
    let group = group_of(&generators);
    let tree = Dendrite::from_edges(&["c", "l1", "l2", "l3"], &[("c", "l1"), ("c", "l2"), ("c", "l3")])
        .expect("star");
    let swap = Automorphism::from_names(&tree, &[("l1", "l3"), ("l3", "l1")]).expect("leaf swap");
    let space = ProbSpace::point(&group);
    let sigma = VirtualDendroMorphism::constant(group, space, tree, vec![Automorphism::identity(4), swap])
        .expect("homomorphism");
    (generators, sigma)
}

/// `Z/2` reversing the path `a - b - c` on a one-point space.
pub fn path_z2() -> (Generators, VirtualDendroMorphism) {
    let generators: Generators = vec![("r".into(), vec![1, 0])];
    let group = group_of(&generators);
    let tree = Dendrite::from_edges(&["a", "b", "c"], &[("a", "b"), ("b", "c")]).expect("path");
    let swap = Automorphism::from_names(&tree, &[("a", "c"), ("c", "a")]).expect("reversal");
    let space = ProbSpace::point(&group);
    let sigma = VirtualDendroMorphism::constant(group, space, tree, vec![Automorphism::identity(3), swap])
        .expect("homomorphism");
    (generators, sigma)
}

/// A raw table that is almost surely not a cocycle: random automorphisms for
/// every `(γ, s)` with `γ ≠ e`, for negative fixtures.
pub fn random_table(
    seed: u64,
    group: &FiniteGroup,
    space: &ProbSpace,
    tree: &Dendrite,
) -> Vec<Vec<Automorphism>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let autos = tree.automorphisms().expect("small tree");
    group
        .elements()
        .map(|g| {
            space
                .atoms()
                .map(|_| {
                    if g == group.identity() {
                        Automorphism::identity(tree.len())
                    } else {
                        autos.choose(&mut rng).expect("identity").clone()
                    }
                })
                .collect()
        })
        .collect()
}
