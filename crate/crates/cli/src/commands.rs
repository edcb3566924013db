use std::collections::BTreeMap;
use std::fs;

use dendro_core::bochner::{pullback_class, verify_furstenberg_candidate, BochnerSpace, QNorm};
use dendro_core::bundle::{bundle, LambdaSet};
use dendro_core::cocycle::{
    invariant_measure_lp, is_elementary_search, is_ergodic, minimal_families, Atom, EquivariantFamily, FamilyKind,
    MeasureFamily, VirtualDendroMorphism,
};
use dendro_core::dendrite::{CenterResult, Dendrite, PointClass, VertexId};
use dendro_core::io::{parse_instance, parse_tree, Instance, LoadError};
use dendro_core::median_cocycle::{check_coboundary, check_equivariance, lp_norm, omega, CheckMode, PNorm};
use dendro_core::rational::{format_rational, is_zero, parse_rational};
use serde_json::{json, Value};

use crate::report::{InputDigest, Report, Status};

/// Exhaustive ω checks up to this many vertices; sampled beyond.
const EXHAUSTIVE_CHECK: usize = 8;
const SAMPLES: usize = 10_000;

/// Why a command stopped before producing its own report.
pub enum Stop {
    /// Unreadable input: exit 2, message on stderr.
    Input(String),
    /// The input loaded but broke a type invariant.
    Report(Report),
}

pub enum Method {
    Search,
    Lp,
    Both,
}

fn read(path: &str) -> Result<(String, InputDigest), Stop> {
    let bytes = fs::read(path).map_err(|e| Stop::Input(format!("{path}: {e}")))?;
    let digest = InputDigest::of(path, &bytes);
    let text = String::from_utf8(bytes).map_err(|e| Stop::Input(format!("{path}: {e}")))?;
    Ok((text, digest))
}

fn is_instance(text: &str) -> bool {
    serde_json::from_str::<Value>(text)
        .map(|v| v.get("group").is_some())
        .unwrap_or(false)
}

fn invariant_report(command: &str, digest: InputDigest, error: LoadError) -> Stop {
    match error {
        LoadError::Parse(message) => Stop::Input(format!("{}: {message}", digest.path)),
        LoadError::Invariant { what, message, witness } => {
            let w = if witness.is_empty() {
                json!({ "invariant": what, "message": message })
            } else {
                json!(witness)
            };
            Stop::Report(Report::fail(
                command,
                vec![digest],
                json!({ "invariant": what, "message": message }),
                vec![w],
            ))
        }
    }
}

/// A tree, read from a tree document or from the `tree` of an instance.
fn load_tree(command: &str, path: &str) -> Result<(Dendrite, InputDigest), Stop> {
    let (text, digest) = read(path)?;
    let loaded = if is_instance(&text) {
        parse_instance(&text).map(|i| i.sigma.tree().clone())
    } else {
        parse_tree(&text)
    };
    match loaded {
        Ok(tree) => Ok((tree, digest)),
        Err(e) => Err(invariant_report(command, digest, e)),
    }
}

fn load_instance(command: &str, path: &str) -> Result<(Instance, InputDigest), Stop> {
    let (text, digest) = read(path)?;
    match parse_instance(&text) {
        Ok(instance) => Ok((instance, digest)),
        Err(e) => Err(invariant_report(command, digest, e)),
    }
}

fn names(tree: &Dendrite, vs: &[VertexId]) -> Vec<String> {
    vs.iter().map(|&v| tree.name(v).to_string()).collect()
}

fn center_names(tree: &Dendrite, c: CenterResult) -> Vec<String> {
    names(tree, &c.vertices())
}

fn family_json(sigma: &VirtualDendroMorphism, family: &EquivariantFamily) -> Value {
    json!({ "kind": family.kind(), "fibers": family.named(sigma) })
}

fn measure_json(sigma: &VirtualDendroMorphism, measure: &MeasureFamily) -> Value {
    let (space, tree) = (sigma.space(), sigma.tree());
    let fibers: BTreeMap<&str, BTreeMap<&str, String>> = measure
        .fibers()
        .iter()
        .map(|(&s, weights)| {
            let row = weights
                .iter()
                .enumerate()
                .filter(|(_, w)| !is_zero(w))
                .map(|(v, w)| (tree.name(v), format_rational(w)))
                .collect();
            (space.name(s), row)
        })
        .collect();
    json!(fibers)
}

fn class_name(class: PointClass) -> &'static str {
    match class {
        PointClass::End => "end",
        PointClass::Regular => "regular",
        PointClass::Branch => "branch",
    }
}

fn tree_summary(tree: &Dendrite) -> Value {
    json!({
        "vertices": tree.len(),
        "edges": tree.edges().len(),
        "ends": names(tree, &tree.ends()),
        "branch_points": names(tree, &tree.branch_points()),
    })
}

fn instance_summary(instance: &Instance) -> Value {
    let sigma = &instance.sigma;
    let space = sigma.space();
    json!({
        "group_order": sigma.group().order(),
        "atoms": space.names(),
        "support": space.support().iter().map(|&s| space.name(s)).collect::<Vec<_>>(),
        "ergodic": is_ergodic(space),
        "tree": tree_summary(sigma.tree()),
        "lambda": LambdaSet::new(sigma.tree()).len(),
        "boundary_points": instance.boundary.as_ref().map(|b| b.len()),
        "bochner_vectors": instance.bochner.len(),
    })
}

pub fn validate(paths: &[String]) -> Result<Report, Stop> {
    let mut inputs = Vec::new();
    let mut files = Vec::new();
    let mut witnesses = Vec::new();
    let mut unreadable = false;
    for path in paths {
        let (text, digest) = match read(path) {
            Ok(x) => x,
            Err(Stop::Input(message)) => {
                unreadable = true;
                witnesses.push(json!({ "path": path, "error": "parse", "message": message }));
                files.push(json!({ "path": path, "status": "fail" }));
                continue;
            }
            Err(Stop::Report(r)) => return Ok(r),
        };
        inputs.push(digest);
        let instance = is_instance(&text);
        let kind = if instance { "instance" } else { "tree" };
        let loaded = if instance {
            parse_instance(&text).map(|i| {
                let mut summary = instance_summary(&i);
                if let (Some(b), Some(phi)) = (&i.boundary, &i.phi) {
                    let broken = phi.equivariance_violations(&i.sigma, b);
                    summary["phi_equivariant"] = json!(broken.is_empty());
                    for w in broken {
                        witnesses.push(json!({ "path": path, "error": "phi equivariance", "witness": w }));
                    }
                }
                summary
            })
        } else {
            parse_tree(&text).map(|t| tree_summary(&t))
        };
        match loaded {
            Ok(summary) => {
                let ok = summary.get("phi_equivariant") != Some(&json!(false));
                files.push(json!({
                    "path": path,
                    "kind": kind,
                    "status": if ok { "pass" } else { "fail" },
                    "summary": summary,
                }));
            }
            Err(LoadError::Parse(message)) => {
                unreadable = true;
                witnesses.push(json!({ "path": path, "error": "parse", "message": message }));
                files.push(json!({ "path": path, "kind": kind, "status": "fail" }));
            }
            Err(LoadError::Invariant { what, message, witness }) => {
                witnesses.push(json!({ "path": path, "error": what, "message": message, "witness": witness }));
                files.push(json!({ "path": path, "kind": kind, "status": "fail" }));
            }
        }
    }
    let findings = json!({ "files": files });
    if witnesses.is_empty() {
        return Ok(Report::new("validate", inputs, Status::Pass, findings));
    }
    let mut report = Report::fail("validate", inputs, findings, witnesses);
    if unreadable {
        report.exit = Some(2);
    }
    Ok(report)
}

pub fn analyze(path: &str, max_search: usize) -> Result<Report, Stop> {
    let (tree, digest) = load_tree("analyze", path)?;
    let vertices: Vec<Value> = tree
        .vertices()
        .map(|v| {
            let (order, class) = tree.classify(v).expect("vertex of the tree");
            json!({ "name": tree.name(v), "order": order, "class": class_name(class) })
        })
        .collect();
    let center = tree.jordan_center().expect("nonempty tree");
    let (suppressed, _) = tree.suppress_regular().expect("valid tree");
    let automorphisms = match tree.automorphisms_bounded(max_search) {
        Ok(all) => json!(all.len()),
        Err(e) => json!(format!("skipped: {e}")),
    };
    let findings = json!({
        "vertices": vertices,
        "ends": names(&tree, &tree.ends()),
        "branch_points": names(&tree, &tree.branch_points()),
        "center": center_names(&tree, center),
        "bundle": bundle(&tree).len(),
        "lambda": LambdaSet::new(&tree).len(),
        "degree_excess": tree.degree_excess(),
        "suppressed_vertices": suppressed.len(),
        "automorphisms": automorphisms,
    });
    Ok(Report::new("analyze", vec![digest], Status::Pass, findings))
}

pub fn omega_cmd(path: &str, points: &[String], p: &str) -> Result<Report, Stop> {
    let (tree, digest) = load_tree("omega", path)?;
    let ids = points
        .iter()
        .map(|name| tree.vertex(name).map_err(|e| Stop::Input(e.to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    let exponent = parse_rational(p).map_err(|e| Stop::Input(format!("--p-norm: {e}")))?;
    let p_norm = PNorm::new(exponent).map_err(|e| Stop::Input(format!("--p-norm: {e}")))?;
    let f = omega(&tree, ids[0], ids[1], ids[2]).expect("resolved vertices");
    let norm = lp_norm(&f, &p_norm).expect("ω lives on Λ");
    let median = tree.median(ids[0], ids[1], ids[2]).expect("resolved vertices");
    let findings = json!({
        "points": points,
        "median": tree.name(median),
        "support_bases": names(&tree, &f.support_bases()),
        "entries": f.len(),
        "rows": f.rows(&tree),
        "norm": norm,
        "p": format_rational(p_norm.value()),
    });
    Ok(Report::new("omega", vec![digest], Status::Pass, findings))
}

pub fn cocycle_check(path: &str, seed: u64, max_search: usize) -> Result<Report, Stop> {
    let (tree, digest) = load_tree("cocycle-check", path)?;
    let mode = if tree.len() <= EXHAUSTIVE_CHECK {
        CheckMode::Exhaustive
    } else {
        CheckMode::Sampled { seed, samples: SAMPLES }
    };
    let mode_json = match mode {
        CheckMode::Exhaustive => json!("exhaustive"),
        CheckMode::Sampled { seed, samples } => json!({ "sampled": samples, "seed": seed }),
    };
    let mut witnesses = Vec::new();
    let coboundary = check_coboundary(&tree, mode).map_err(|e| Stop::Input(e.to_string()))?;
    for v in &coboundary.violations {
        witnesses.push(json!({ "check": "coboundary", "violation": v }));
    }
    let equivariance = match tree.automorphisms_bounded(max_search) {
        Ok(autos) => {
            let mut tuples = 0;
            let mut failed = 0;
            for g in &autos {
                let r = check_equivariance(&tree, g, mode).expect("automorphism of the tree");
                tuples += r.counts.tuples;
                if !r.passed() {
                    failed += 1;
                    let moved: BTreeMap<&str, &str> = tree
                        .vertices()
                        .filter(|&v| g.apply(v) != v)
                        .map(|v| (tree.name(v), tree.name(g.apply(v))))
                        .collect();
                    for v in r.violations.iter().take(1) {
                        witnesses.push(json!({ "check": "equivariance", "automorphism": moved, "violation": v }));
                    }
                }
            }
            json!({ "automorphisms": autos.len(), "tuples": tuples, "failed": failed })
        }
        Err(e) => json!(format!("skipped: {e}")),
    };
    let findings = json!({
        "mode": mode_json,
        "coboundary": { "status": coboundary.status, "counts": coboundary.counts },
        "equivariance": equivariance,
    });
    if witnesses.is_empty() {
        Ok(Report::new("cocycle-check", vec![digest], Status::Pass, findings))
    } else {
        Ok(Report::fail("cocycle-check", vec![digest], findings, witnesses))
    }
}

pub fn elementarity(path: &str, method: Method) -> Result<Report, Stop> {
    let (instance, digest) = load_instance("elementarity", path)?;
    let sigma = &instance.sigma;
    let (run_search, run_lp) = match method {
        Method::Search => (true, false),
        Method::Lp => (false, true),
        Method::Both => (true, true),
    };
    let search = run_search.then(|| is_elementary_search(sigma));
    let lp = run_lp.then(|| invariant_measure_lp(sigma));
    let mut witnesses = Vec::new();
    if let Some(Some(family)) = &search {
        if let Some((g, s)) = family.equivariance_violation(sigma) {
            witnesses.push(json!({ "oracle": "search", "gamma": sigma.group().name(g), "atom": sigma.space().name(s) }));
        }
    }
    if let Some(Some(measure)) = &lp {
        if let Some((g, s)) = measure.equivariance_violation(sigma) {
            witnesses.push(json!({ "oracle": "lp", "gamma": sigma.group().name(g), "atom": sigma.space().name(s) }));
        }
    }
    let found = |x: bool| if x { "found" } else { "not-found" };
    if let (Some(a), Some(b)) = (&search, &lp) {
        if a.is_some() != b.is_some() {
            witnesses.push(json!({ "search": found(a.is_some()), "lp": found(b.is_some()) }));
        }
    }
    let findings = json!({
        "search": search.as_ref().map(|r| r.as_ref().map(|f| family_json(sigma, f))),
        "lp": lp.as_ref().map(|r| r.as_ref().map(|m| measure_json(sigma, m))),
    });
    if !witnesses.is_empty() {
        let mut report = Report::fail("elementarity", vec![digest], findings, witnesses);
        report.exit = Some(3);
        return Ok(report);
    }
    let elementary = search.map(|r| r.is_some()).or(lp.map(|r| r.is_some())).unwrap_or(false);
    let status = if elementary { Status::Found } else { Status::NotFound };
    Ok(Report::new("elementarity", vec![digest], status, findings))
}

pub fn minimal(path: &str) -> Result<Report, Stop> {
    let (instance, digest) = load_instance("minimal-families", path)?;
    let sigma = &instance.sigma;
    let minimal = minimal_families(sigma);
    let families: Vec<Value> = minimal
        .closed
        .iter()
        .zip(&minimal.hulls)
        .map(|(k, m)| json!({ "closed": family_json(sigma, k), "hull": family_json(sigma, m) }))
        .collect();
    let status = if families.is_empty() { Status::NotFound } else { Status::Found };
    let findings = json!({
        "count": families.len(),
        "unique": minimal.is_unique(),
        "families": families,
    });
    Ok(Report::new("minimal-families", vec![digest], status, findings))
}

fn parse_q(text: &str) -> Result<QNorm, Stop> {
    if matches!(text, "inf" | "infinity") {
        return Ok(QNorm::Infinity);
    }
    let q = parse_rational(text).map_err(|e| Stop::Input(format!("--q-norm: {e}")))?;
    QNorm::finite(q).map_err(|e| Stop::Input(format!("--q-norm: {e}")))
}

pub fn invariant_vectors(path: &str, p: &str, q: &str) -> Result<Report, Stop> {
    let (instance, digest) = load_instance("invariant-vectors", path)?;
    let p_norm = parse_rational(p)
        .map_err(|e| e.to_string())
        .and_then(|p| PNorm::new(p).map_err(|e| e.to_string()))
        .map_err(|e| Stop::Input(format!("--p-norm: {e}")))?;
    let q_norm = parse_q(q)?;
    let sigma = &instance.sigma;
    let space = BochnerSpace::new(sigma);
    let basis = space.invariant_vectors();
    let mut witnesses = Vec::new();
    let mut vectors = Vec::new();
    for (i, u) in basis.iter().enumerate() {
        if let Some(g) = space.invariance_violation(u).expect("basis vectors have the right shape") {
            witnesses.push(json!({ "vector": i, "gamma": sigma.group().name(g) }));
        }
        let norm = space.norm(u, &q_norm, &p_norm).expect("shape");
        vectors.push(json!({
            "rows": space.rows(u),
            "norm": { "exact": norm.exact, "power": norm.power, "value": norm.value },
        }));
    }
    let findings = json!({
        "lambda": space.lambda().len(),
        "dimension": space.dimension(),
        "fixed_dimension": basis.len(),
        "vectors": vectors,
    });
    if witnesses.is_empty() {
        Ok(Report::new("invariant-vectors", vec![digest], Status::Pass, findings))
    } else {
        Ok(Report::fail("invariant-vectors", vec![digest], findings, witnesses))
    }
}

pub fn pipeline(path: &str) -> Result<Report, Stop> {
    let (instance, digest) = load_instance("pipeline", path)?;
    let sigma = &instance.sigma;
    let tree = sigma.tree();
    let space = BochnerSpace::new(sigma);
    let (source, vectors) = if instance.bochner.is_empty() {
        ("invariant-basis", space.invariant_vectors())
    } else {
        ("instance", instance.bochner.clone())
    };
    let search = is_elementary_search(sigma);
    if vectors.is_empty() {
        let findings = json!({
            "note": "no invariant vector",
            "search": search.as_ref().map(|f| family_json(sigma, f)),
        });
        return Ok(Report::new("pipeline", vec![digest], Status::Pass, findings));
    }
    let mut witnesses = Vec::new();
    let mut certificates = Vec::new();
    for (i, u) in vectors.iter().enumerate() {
        match space.elementarity_certificate(u) {
            Ok(c) => {
                if let Some((g, s)) = c.family.equivariance_violation(sigma) {
                    witnesses.push(json!({
                        "vector": i,
                        "gamma": sigma.group().name(g),
                        "atom": sigma.space().name(s),
                    }));
                }
                let steps: Vec<Value> = c
                    .steps
                    .iter()
                    .map(|step| {
                        json!({
                            "atom": sigma.space().name(step.atom),
                            "branch_points": names(tree, &step.branch_points),
                            "hull": names(tree, &step.hull),
                            "center": center_names(tree, step.center),
                        })
                    })
                    .collect();
                certificates.push(json!({
                    "vector": i,
                    "level": format_rational(&c.level),
                    "steps": steps,
                    "family": family_json(sigma, &c.family),
                }));
            }
            Err(e) => witnesses.push(json!({ "vector": i, "error": e.to_string() })),
        }
    }
    let findings = json!({
        "source": source,
        "vectors": vectors.len(),
        "certificates": certificates,
        "search": search.as_ref().map(|f| family_json(sigma, f)),
        "agrees_with_search": search.is_some(),
    });
    if search.is_none() && !certificates.is_empty() {
        let mut report = Report::fail(
            "pipeline",
            vec![digest],
            findings,
            vec![json!({ "certificate": "found", "search": "not-found" })],
        );
        report.exit = Some(3);
        return Ok(report);
    }
    if witnesses.is_empty() {
        Ok(Report::new("pipeline", vec![digest], Status::Pass, findings))
    } else {
        Ok(Report::fail("pipeline", vec![digest], findings, witnesses))
    }
}

pub fn pullback(path: &str) -> Result<Report, Stop> {
    let (instance, digest) = load_instance("pullback", path)?;
    let sigma = &instance.sigma;
    let (Some(boundary), Some(phi)) = (&instance.boundary, &instance.phi) else {
        return Err(Stop::Input(format!("{path}: pullback needs `boundary` and `phi`")));
    };
    // minimal hulls first, then the hull of the slice images
    let mut candidates: Vec<(&str, EquivariantFamily)> =
        minimal_families(sigma).hulls.into_iter().map(|m| ("minimal", m)).collect();
    let tree = sigma.tree();
    let image_hull: BTreeMap<Atom, Vec<VertexId>> = sigma
        .space()
        .support()
        .into_iter()
        .map(|s| {
            let image: Vec<VertexId> = boundary.support().iter().map(|&b| phi.get(b, s)).collect();
            (s, tree.dendro_hull(&image).expect("vertices of the tree").members().to_vec())
        })
        .collect();
    if let Ok(m) = EquivariantFamily::new(sigma, FamilyKind::Subdendrite, image_hull) {
        candidates.push(("image-hull", m));
    }
    let reports: Vec<_> = candidates
        .iter()
        .map(|(_, m)| verify_furstenberg_candidate(sigma, boundary, phi, m))
        .collect();
    let chosen = reports
        .iter()
        .position(|r| r.checks.iter().all(|c| c.passed()))
        .unwrap_or(0);
    let furstenberg = &reports[chosen];
    let mut witnesses: Vec<Value> = furstenberg
        .checks
        .iter()
        .filter(|c| !c.passed())
        .flat_map(|c| c.witnesses.iter().map(move |w| json!({ "check": c.name, "witness": w })))
        .collect();
    let (cochain, report) = match pullback_class(sigma, boundary, phi) {
        Ok(x) => x,
        Err(e) => {
            witnesses.push(json!({ "check": "phi-equivariant", "error": e.to_string() }));
            let findings = json!({ "furstenberg": furstenberg });
            return Ok(Report::fail("pullback", vec![digest], findings, witnesses));
        }
    };
    for c in report.checks.iter().filter(|c| !c.passed()) {
        for w in &c.witnesses {
            witnesses.push(json!({ "check": c.name, "witness": w }));
        }
    }
    let space = BochnerSpace::new(sigma);
    let table: Vec<Value> = cochain
        .rows(&space, boundary)
        .into_iter()
        .filter(|(_, rows)| !rows.is_empty())
        .map(|(triple, rows)| json!({ "triple": triple, "rows": rows }))
        .collect();
    let findings = json!({
        "furstenberg": {
            "source": candidates[chosen].0,
            "family": family_json(sigma, &candidates[chosen].1),
            "report": furstenberg,
        },
        "pullback": report,
        "cochain": table,
    });
    if witnesses.is_empty() {
        Ok(Report::new("pullback", vec![digest], Status::Pass, findings))
    } else {
        Ok(Report::fail("pullback", vec![digest], findings, witnesses))
    }
}
