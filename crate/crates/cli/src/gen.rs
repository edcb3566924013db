use std::collections::BTreeMap;

use dendro_core::cocycle::{CocycleError, GroupElement, VirtualDendroMorphism};
use dendro_core::corpus::{boundary_instance, path_z2, random_instance, star_z2, CorpusParams};
use dendro_core::dendrite::{generate, Automorphism, TreeKind};
use dendro_core::io::{raw_instance, to_pretty, write_tree, RawInstance};

use crate::Kind;

/// Seeds tried after the requested one before giving up.
const SEED_WINDOW: u64 = 1000;

fn moves(sigma: &VirtualDendroMorphism, a: &Automorphism) -> BTreeMap<String, String> {
    let tree = sigma.tree();
    tree.vertices()
        .filter(|&v| a.apply(v) != v)
        .map(|v| (tree.name(v).to_string(), tree.name(a.apply(v)).to_string()))
        .collect()
}

/// A valid random instance with one generator value replaced so that the
/// cocycle identity breaks.
fn bad_cocycle(seed: u64) -> Option<RawInstance> {
    for offset in 0..SEED_WINDOW {
        let instance = random_instance(seed.wrapping_add(offset), CorpusParams::default());
        let sigma = &instance.sigma;
        let (group, space, tree) = (sigma.group(), sigma.space(), sigma.tree());
        let gens: Vec<GroupElement> = instance
            .generators
            .iter()
            .map(|(name, _)| group.element(name).expect("generator"))
            .collect();
        let autos = tree.automorphisms().expect("small corpus trees");
        for &g in &gens {
            for s in space.atoms() {
                for a in autos.iter().filter(|a| *a != sigma.sigma(g, s)) {
                    let mut partial: BTreeMap<GroupElement, Vec<Automorphism>> =
                        gens.iter().map(|&h| (h, sigma.table()[h].clone())).collect();
                    partial.get_mut(&g).expect("generator row")[s] = a.clone();
                    let verdict = VirtualDendroMorphism::verify(group.clone(), space.clone(), tree.clone(), partial);
                    if matches!(verdict, Err(CocycleError::CocycleIdentityViolated { .. })) {
                        let mut raw = raw_instance(&instance.generators, sigma, None);
                        raw.sigma
                            .get_mut(group.name(g))
                            .expect("generator entry")
                            .insert(space.name(s).to_string(), moves(sigma, a));
                        return Some(raw);
                    }
                }
            }
        }
    }
    None
}

/// The document for `kind`, deterministic in `seed`.
pub fn document(kind: Kind, seed: u64, size: usize, depth: usize) -> Result<String, String> {
    let tree = |k: TreeKind| generate(k, seed).map(|t| write_tree(&t)).map_err(|e| e.to_string());
    match kind {
        Kind::StarZ2 => {
            let (gens, sigma) = star_z2();
            Ok(to_pretty(&raw_instance(&gens, &sigma, None)))
        }
        Kind::PathZ2 => {
            let (gens, sigma) = path_z2();
            Ok(to_pretty(&raw_instance(&gens, &sigma, None)))
        }
        Kind::RandomCocycle => {
            let instance = random_instance(seed, CorpusParams::default());
            Ok(to_pretty(&raw_instance(&instance.generators, &instance.sigma, None)))
        }
        Kind::RandomBoundary => (0..SEED_WINDOW)
            .find_map(|offset| boundary_instance(seed.wrapping_add(offset), CorpusParams::default()))
            .map(|(instance, b, phi)| to_pretty(&raw_instance(&instance.generators, &instance.sigma, Some((&b, &phi)))))
            .ok_or_else(|| format!("no boundary model near seed {seed}")),
        Kind::BadCocycle => bad_cocycle(seed)
            .map(|raw| to_pretty(&raw))
            .ok_or_else(|| format!("no corruptible instance near seed {seed}")),
        Kind::TreePath => tree(TreeKind::Path { n: size }),
        Kind::TreeStar => tree(TreeKind::Star { leaves: size }),
        Kind::TreeRandom => tree(TreeKind::Random { n: size }),
        Kind::TreeWazewski => tree(TreeKind::WazewskiApprox { degree: size, depth }),
    }
}
