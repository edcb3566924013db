use std::collections::BTreeMap;
use std::f64::consts::TAU;

use dendro_core::dendrite::{generate, Dendrite, TreeKind, VertexId};
use dendro_core::io::parse_tree;
use dendro_core::median_cocycle::{lp_norm, omega, PNorm};
use dendro_core::rational::parse_rational;
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct TreeView {
    pub vertices: Vec<String>,
    pub edges: Vec<(String, String)>,
    /// Radial layout in `[-1, 1]²`, rooted at the center.
    pub layout: BTreeMap<String, (f64, f64)>,
    pub ends: Vec<String>,
    pub branch_points: Vec<String>,
    pub center: Vec<String>,
    /// The canonical tree document, for the other operations.
    pub document: String,
}

#[derive(Debug, Serialize)]
pub struct OmegaView {
    pub median: String,
    pub rows: Vec<(String, String, String, i64)>,
    pub power_sum: Option<String>,
    pub norm: f64,
}

#[derive(Debug, Serialize)]
pub struct PeelingView {
    pub rounds: Vec<Vec<String>>,
    pub center: Vec<String>,
}

fn names(tree: &Dendrite, vs: &[VertexId]) -> Vec<String> {
    vs.iter().map(|&v| tree.name(v).to_string()).collect()
}

fn tree_kind(kind: &str, size: usize) -> Result<TreeKind, String> {
    Ok(match kind {
        "path" => TreeKind::Path { n: size },
        "star" => TreeKind::Star { leaves: size },
        "random" => TreeKind::Random { n: size },
        "wazewski" => TreeKind::WazewskiApprox { degree: size, depth: 1 },
        other => return Err(format!("unknown tree kind {other:?}")),
    })
}

/// Leaves get equal angular slots; inner vertices sit at the mean angle of
/// their subtree, at radius proportional to depth.
pub fn radial_layout(tree: &Dendrite, root: VertexId) -> Vec<(f64, f64)> {
    let n = tree.len();
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![0usize; n];
    let mut order = vec![root];
    parent[root] = root;
    let mut i = 0;
    while i < order.len() {
        let v = order[i];
        for &w in tree.neighbors(v) {
            if parent[w] == usize::MAX {
                parent[w] = v;
                depth[w] = depth[v] + 1;
                order.push(w);
            }
        }
        i += 1;
    }
    // leaves in depth-first order keep subtrees contiguous
    let mut leaves = Vec::new();
    let mut stack = vec![root];
    while let Some(v) = stack.pop() {
        let children: Vec<VertexId> = tree.neighbors(v).iter().copied().filter(|&w| parent[w] == v && w != v).collect();
        if children.is_empty() {
            leaves.push(v);
        }
        stack.extend(children.into_iter().rev());
    }
    let mut angle_sum = vec![0.0; n];
    let mut leaf_count = vec![0usize; n];
    for (k, &leaf) in leaves.iter().enumerate() {
        angle_sum[leaf] = TAU * k as f64 / leaves.len() as f64;
        leaf_count[leaf] = 1;
    }
    for &v in order.iter().rev() {
        if v != root {
            let p = parent[v];
            angle_sum[p] += angle_sum[v];
            leaf_count[p] += leaf_count[v];
        }
    }
    let max_depth = depth.iter().copied().max().unwrap_or(0).max(1) as f64;
    (0..n)
        .map(|v| {
            if v == root {
                return (0.0, 0.0);
            }
            let angle = angle_sum[v] / leaf_count[v] as f64;
            let r = depth[v] as f64 / max_depth;
            (r * angle.cos(), r * angle.sin())
        })
        .collect()
}

pub fn tree_view(tree: &Dendrite) -> TreeView {
    let center = tree.jordan_center().expect("nonempty tree").vertices();
    let layout = radial_layout(tree, center[0]);
    TreeView {
        vertices: tree.names().to_vec(),
        edges: tree
            .edges()
            .into_iter()
            .map(|(u, v)| (tree.name(u).to_string(), tree.name(v).to_string()))
            .collect(),
        layout: tree.vertices().map(|v| (tree.name(v).to_string(), layout[v])).collect(),
        ends: names(tree, &tree.ends()),
        branch_points: names(tree, &tree.branch_points()),
        center: names(tree, &center),
        document: dendro_core::io::write_tree(tree),
    }
}

pub fn generate_tree(kind: &str, size: usize, seed: u64) -> Result<TreeView, String> {
    let tree = generate(tree_kind(kind, size)?, seed).map_err(|e| e.to_string())?;
    Ok(tree_view(&tree))
}

pub fn omega_at(document: &str, points: [&str; 3], p: &str) -> Result<OmegaView, String> {
    let tree = parse_tree(document).map_err(|e| e.to_string())?;
    let ids = points
        .iter()
        .map(|name| tree.vertex(name).map_err(|e| e.to_string()))
        .collect::<Result<Vec<_>, _>>()?;
    let p = parse_rational(p)
        .map_err(|e| e.to_string())
        .and_then(|p| PNorm::new(p).map_err(|e| e.to_string()))?;
    let f = omega(&tree, ids[0], ids[1], ids[2]).map_err(|e| e.to_string())?;
    let norm = lp_norm(&f, &p).map_err(|e| e.to_string())?;
    Ok(OmegaView {
        median: tree.name(tree.median(ids[0], ids[1], ids[2]).map_err(|e| e.to_string())?).to_string(),
        rows: f.rows(&tree),
        power_sum: norm.power_sum.map(|b| b.to_string()),
        norm: norm.value,
    })
}

pub fn peel(document: &str) -> Result<PeelingView, String> {
    let tree = parse_tree(document).map_err(|e| e.to_string())?;
    let all: Vec<VertexId> = tree.vertices().collect();
    let rounds = tree.peeling_rounds(&all).map_err(|e| e.to_string())?;
    let center = tree.jordan_center().map_err(|e| e.to_string())?;
    Ok(PeelingView {
        rounds: rounds.iter().map(|r| names(&tree, r)).collect(),
        center: names(&tree, &center.vertices()),
    })
}
