use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Dendrite, DendriteError, RawTree};

/// Tree families produced by [`generate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeKind {
    /// `n` vertices in a line, named `a, b, c, ...` (or `v00, v01, ...` past 26).
    Path { n: usize },
    /// Center `c` with leaves `l1..lk`.
    Star { leaves: usize },
    /// Uniform labelled tree on `n` vertices from a Prüfer sequence.
    Random { n: usize },
    /// Star of the given degree, refined `depth` times by inserting a
    /// midpoint on every edge and sprouting `degree - 2` leaves from it.
    WazewskiApprox { degree: usize, depth: usize },
}

fn padded_names(prefix: &str, n: usize) -> Vec<String> {
    let width = (n.max(2) - 1).to_string().len();
    (0..n).map(|i| format!("{prefix}{i:0width$}")).collect()
}

/// Deterministic for a fixed `(kind, seed)`; `seed` only matters for
/// [`TreeKind::Random`]. The generator is ChaCha8 seeded from the 64-bit seed.
pub fn generate(kind: TreeKind, seed: u64) -> Result<Dendrite, DendriteError> {
    let raw = match kind {
        TreeKind::Path { n } => {
            if n == 0 {
                return Err(DendriteError::BadParams("path needs n >= 1".into()));
            }
            let names: Vec<String> = if n <= 26 {
                (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
            } else {
                padded_names("v", n)
            };
            let edges = names.windows(2).map(|w| [w[0].clone(), w[1].clone()]).collect();
            RawTree {
                vertices: names,
                edges,
            }
        }
        TreeKind::Star { leaves } => {
            if leaves == 0 {
                return Err(DendriteError::BadParams("star needs at least one leaf".into()));
            }
            let mut vertices = vec!["c".to_string()];
            let mut edges = Vec::new();
            for k in 1..=leaves {
                vertices.push(format!("l{k}"));
                edges.push(["c".to_string(), format!("l{k}")]);
            }
            RawTree { vertices, edges }
        }
        TreeKind::Random { n } => {
            if n == 0 {
                return Err(DendriteError::BadParams("random tree needs n >= 1".into()));
            }
            let names = padded_names("v", n);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let edges = random_edges(n, &mut rng)
                .into_iter()
                .map(|(u, v)| [names[u].clone(), names[v].clone()])
                .collect();
            RawTree {
                vertices: names,
                edges,
            }
        }
        TreeKind::WazewskiApprox { degree, depth } => {
            if degree < 2 {
                return Err(DendriteError::BadParams("wazewski_approx needs degree >= 2".into()));
            }
            wazewski(degree, depth)
        }
    };
    Dendrite::validate(&raw)
}

fn random_edges(n: usize, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    match n {
        1 => return Vec::new(),
        2 => return vec![(0, 1)],
        _ => {}
    }
    let prufer: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &v in &prufer {
        degree[v] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &v in &prufer {
        let leaf = (0..n).find(|&u| degree[u] == 1).expect("a leaf always exists");
        edges.push((leaf, v));
        degree[leaf] -= 1;
        degree[v] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&u| degree[u] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges.shuffle(rng);
    edges
}

// Edges are kept oriented parent -> child and every new vertex is named
// `u.k`, the next unused child index `k` of its parent `u`. A midpoint on
// (u, w) becomes a child of `u` and the new parent of `w`.
fn wazewski(degree: usize, depth: usize) -> RawTree {
    let mut children: HashMap<String, usize> = HashMap::new();
    let mut fresh = |parent: &str| {
        let k = children.entry(parent.to_string()).or_insert(0);
        *k += 1;
        format!("{parent}.{k}")
    };
    let mut vertices = vec!["r".to_string()];
    let mut edges: Vec<(String, String)> = Vec::new();
    for _ in 0..degree {
        let leaf = fresh("r");
        vertices.push(leaf.clone());
        edges.push(("r".to_string(), leaf));
    }
    for _ in 0..depth {
        let mut next = Vec::with_capacity(edges.len() * (degree + 1));
        for (u, w) in edges {
            let mid = fresh(&u);
            vertices.push(mid.clone());
            for _ in 0..degree - 2 {
                let sprout = fresh(&mid);
                vertices.push(sprout.clone());
                next.push((mid.clone(), sprout));
            }
            next.push((u, mid.clone()));
            next.push((mid, w));
        }
        edges = next;
    }
    RawTree {
        vertices,
        edges: edges.into_iter().map(|(u, v)| [u, v]).collect(),
    }
}
