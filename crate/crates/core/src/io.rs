//! Instance documents.
//!
//! ```json
//! {
//!   "tree":  {"vertices": ["a", "b", "c"], "edges": [["a", "b"], ["b", "c"]]},
//!   "group": {"generators": [["r", [1, 0]]]},
//!   "space": {"atoms": ["s"], "measure": {"s": "1/1"}, "action": {"r": {"s": "s"}}},
//!   "sigma": {"r": {"s": {"a": "c", "c": "a"}}}
//! }
//! ```
//!
//! The group is either `{"generators": [[name, permutation], ...]}` (elements
//! are then named by shortlex words such as `r*f`) or
//! `{"elements": [...], "table": [[product names]]}`. Actions and `sigma` may
//! be given on any generating subset of elements; each `sigma` entry lists the
//! moved vertices only. Optional keys: `boundary` (shaped like `space`), `phi`
//! (`point → atom → vertex`) and `bochner` (vectors as lists of rows
//! `[atom, base, first, second, "p/q"]`).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bochner::{BochnerElement, BochnerError, BochnerRow, BochnerSpace, BoundaryModel, CandidateFurstenbergMap};
use crate::cocycle::{CocycleError, FiniteGroup, GroupElement, ProbSpace, VirtualDendroMorphism};
use crate::dendrite::{Automorphism, Dendrite, DendriteError, RawTree};
use crate::rational::{format_rational, parse_rational, Rational};

/// Failure to load a document: unreadable input, or a violated invariant.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LoadError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{what}: {message}")]
    Invariant {
        what: &'static str,
        message: String,
        witness: BTreeMap<String, String>,
    },
}

impl LoadError {
    fn invariant(what: &'static str, message: impl ToString) -> LoadError {
        LoadError::Invariant {
            what,
            message: message.to_string(),
            witness: BTreeMap::new(),
        }
    }
}

fn from_dendrite(e: DendriteError) -> LoadError {
    match e {
        DendriteError::UnknownVertex(_) => LoadError::Parse(e.to_string()),
        other => LoadError::invariant("tree", other),
    }
}

fn from_cocycle(what: &'static str, e: CocycleError) -> LoadError {
    match e {
        CocycleError::CocycleIdentityViolated { g1, g2, atom } => LoadError::Invariant {
            what: "cocycle identity",
            message: format!("σ({g1}·{g2}, {atom}) ≠ σ({g1}, {g2}.{atom}) ∘ σ({g2}, {atom})"),
            witness: BTreeMap::from([
                ("gamma1".to_string(), g1),
                ("gamma2".to_string(), g2),
                ("atom".to_string(), atom),
            ]),
        },
        CocycleError::UnknownElement(_) | CocycleError::UnknownAtom(_) | CocycleError::IncompleteTable(_) => {
            LoadError::Parse(e.to_string())
        }
        CocycleError::Dendrite(d) => from_dendrite(d),
        other => LoadError::invariant(what, other),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RawGroup {
    Generators { generators: Vec<(String, Vec<usize>)> },
    Table { elements: Vec<String>, table: Vec<Vec<String>> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSpace {
    pub atoms: Vec<String>,
    pub measure: BTreeMap<String, String>,
    pub action: BTreeMap<String, BTreeMap<String, String>>,
}

/// `element → atom → {vertex: image}`, moved vertices only.
pub type RawSigma = BTreeMap<String, BTreeMap<String, BTreeMap<String, String>>>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawInstance {
    pub tree: RawTree,
    pub group: RawGroup,
    pub space: RawSpace,
    pub sigma: RawSigma,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary: Option<RawSpace>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<BTreeMap<String, BTreeMap<String, String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bochner: Option<Vec<Vec<BochnerRow>>>,
}

/// A fully validated instance.
#[derive(Debug, Clone)]
pub struct Instance {
    pub sigma: VirtualDendroMorphism,
    pub boundary: Option<BoundaryModel>,
    pub phi: Option<CandidateFurstenbergMap>,
    pub bochner: Vec<BochnerElement>,
}

pub fn parse_tree(text: &str) -> Result<Dendrite, LoadError> {
    let raw: RawTree = serde_json::from_str(text).map_err(|e| LoadError::Parse(e.to_string()))?;
    Dendrite::validate(&raw).map_err(from_dendrite)
}

pub fn write_tree(tree: &Dendrite) -> String {
    to_pretty(&tree.to_raw())
}

pub fn parse_instance(text: &str) -> Result<Instance, LoadError> {
    let raw: RawInstance = serde_json::from_str(text).map_err(|e| LoadError::Parse(e.to_string()))?;
    load(&raw)
}

pub fn load(raw: &RawInstance) -> Result<Instance, LoadError> {
    let tree = Dendrite::validate(&raw.tree).map_err(from_dendrite)?;
    let group = load_group(&raw.group)?;
    let space = load_space(&group, &raw.space, "space")?;
    let mut partial = BTreeMap::new();
    for (g_name, row) in &raw.sigma {
        let g = group.element(g_name).map_err(|e| from_cocycle("sigma", e))?;
        let mut autos = Vec::with_capacity(space.len());
        for atom in space.names() {
            let moves = row
                .get(atom)
                .ok_or_else(|| LoadError::Parse(format!("sigma[{g_name}] has no entry for atom {atom:?}")))?;
            let pairs: Vec<(&str, &str)> = moves.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
            autos.push(Automorphism::from_names(&tree, &pairs).map_err(from_dendrite)?);
        }
        for atom in row.keys() {
            space.atom(atom).map_err(|e| from_cocycle("sigma", e))?;
        }
        partial.insert(g, autos);
    }
    let sigma = VirtualDendroMorphism::verify(group.clone(), space.clone(), tree.clone(), partial)
        .map_err(|e| from_cocycle("sigma", e))?;

    let boundary = raw
        .boundary
        .as_ref()
        .map(|b| load_space(&group, b, "boundary"))
        .transpose()?;
    let phi = match (&raw.phi, &boundary) {
        (None, _) => None,
        (Some(_), None) => return Err(LoadError::Parse("phi needs a boundary".into())),
        (Some(map), Some(b)) => {
            let mut table = vec![vec![usize::MAX; space.len()]; b.len()];
            for (point, row) in map {
                let bi = b.atom(point).map_err(|e| from_cocycle("phi", e))?;
                for (atom, vertex) in row {
                    let s = space.atom(atom).map_err(|e| from_cocycle("phi", e))?;
                    table[bi][s] = tree.vertex(vertex).map_err(from_dendrite)?;
                }
            }
            if table.iter().flatten().any(|&v| v == usize::MAX) {
                return Err(LoadError::Parse("phi must give a vertex for every (point, atom)".into()));
            }
            Some(CandidateFurstenbergMap::new(&sigma, b, table).map_err(|e| LoadError::Parse(e.to_string()))?)
        }
    };
    let bspace = BochnerSpace::new(&sigma);
    let bochner = raw
        .bochner
        .iter()
        .flatten()
        .map(|rows| {
            bspace.from_rows(rows).map_err(|e| match e {
                BochnerError::Cocycle(c) => from_cocycle("bochner", c),
                BochnerError::Dendrite(d) => from_dendrite(d),
                other => LoadError::Parse(other.to_string()),
            })
        })
        .collect::<Result<_, _>>()?;
    Ok(Instance {
        sigma,
        boundary,
        phi,
        bochner,
    })
}

fn load_group(raw: &RawGroup) -> Result<FiniteGroup, LoadError> {
    match raw {
        RawGroup::Generators { generators } => {
            FiniteGroup::from_permutations(generators).map_err(|e| from_cocycle("group", e))
        }
        RawGroup::Table { elements, table } => {
            let index: BTreeMap<&str, usize> = elements.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
            let table = table
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|n| {
                            index
                                .get(n.as_str())
                                .copied()
                                .ok_or_else(|| LoadError::Parse(format!("unknown group element {n:?}")))
                        })
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()?;
            FiniteGroup::from_table(elements.clone(), table).map_err(|e| from_cocycle("group", e))
        }
    }
}

fn load_space(group: &FiniteGroup, raw: &RawSpace, what: &'static str) -> Result<ProbSpace, LoadError> {
    let index: BTreeMap<&str, usize> = raw.atoms.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
    let atom = |n: &str| {
        index
            .get(n)
            .copied()
            .ok_or_else(|| LoadError::Parse(format!("{what}: unknown atom {n:?}")))
    };
    let mut measure = vec![None; raw.atoms.len()];
    for (name, value) in &raw.measure {
        let v = parse_rational(value).map_err(|e| LoadError::Parse(format!("{what} measure of {name}: {e}")))?;
        measure[atom(name)?] = Some(v);
    }
    let measure: Vec<Rational> = measure
        .into_iter()
        .zip(&raw.atoms)
        .map(|(m, n)| m.ok_or_else(|| LoadError::Parse(format!("{what}: no measure for {n:?}"))))
        .collect::<Result<_, _>>()?;
    let mut partial = BTreeMap::new();
    for (g_name, row) in &raw.action {
        let g = group.element(g_name).map_err(|e| from_cocycle(what, e))?;
        let mut images = vec![usize::MAX; raw.atoms.len()];
        for (from, to) in row {
            images[atom(from)?] = atom(to)?;
        }
        if images.contains(&usize::MAX) {
            return Err(LoadError::Parse(format!("{what}: action of {g_name} must cover every atom")));
        }
        partial.insert(g, images);
    }
    ProbSpace::from_partial(group, raw.atoms.clone(), measure, partial).map_err(|e| from_cocycle(what, e))
}

/// Serializes `space` with its action on the elements named `on`.
pub fn raw_space(group: &FiniteGroup, space: &ProbSpace, on: &[GroupElement]) -> RawSpace {
    RawSpace {
        atoms: space.names().to_vec(),
        measure: space
            .atoms()
            .map(|s| (space.name(s).to_string(), format_rational(space.measure(s))))
            .collect(),
        action: on
            .iter()
            .map(|&g| {
                let row = space
                    .atoms()
                    .map(|s| (space.name(s).to_string(), space.name(space.act(g, s)).to_string()))
                    .collect();
                (group.name(g).to_string(), row)
            })
            .collect(),
    }
}

/// A document for `sigma` over a permutation group; actions and `sigma`
/// are written on the generators only.
pub fn raw_instance(
    generators: &[(String, Vec<usize>)],
    sigma: &VirtualDendroMorphism,
    boundary: Option<(&BoundaryModel, &CandidateFurstenbergMap)>,
) -> RawInstance {
    let (group, space, tree) = (sigma.group(), sigma.space(), sigma.tree());
    let on: Vec<GroupElement> = generators
        .iter()
        .map(|(name, _)| group.element(name).expect("generator names are elements"))
        .collect();
    let raw_sigma = on
        .iter()
        .map(|&g| {
            let row = space
                .atoms()
                .map(|s| {
                    let moves = tree
                        .vertices()
                        .filter(|&v| sigma.sigma(g, s).apply(v) != v)
                        .map(|v| (tree.name(v).to_string(), tree.name(sigma.sigma(g, s).apply(v)).to_string()))
                        .collect();
                    (space.name(s).to_string(), moves)
                })
                .collect();
            (group.name(g).to_string(), row)
        })
        .collect();
    let (raw_boundary, phi) = match boundary {
        None => (None, None),
        Some((b, phi)) => {
            let map = b
                .atoms()
                .map(|p| {
                    let row = space
                        .atoms()
                        .map(|s| (space.name(s).to_string(), tree.name(phi.get(p, s)).to_string()))
                        .collect();
                    (b.name(p).to_string(), row)
                })
                .collect();
            (Some(raw_space(group, b, &on)), Some(map))
        }
    };
    RawInstance {
        tree: tree.to_raw(),
        group: RawGroup::Generators {
            generators: generators.to_vec(),
        },
        space: raw_space(group, space, &on),
        sigma: raw_sigma,
        boundary: raw_boundary,
        phi,
        bochner: None,
    }
}

/// Two-space indented JSON with a trailing newline.
pub fn to_pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const PATH_Z2: &str = r#"{
      "tree": {"vertices": ["a", "b", "c"], "edges": [["a", "b"], ["b", "c"]]},
      "group": {"generators": [["r", [1, 0]]]},
      "space": {"atoms": ["s"], "measure": {"s": "1/1"}, "action": {"r": {"s": "s"}}},
      "sigma": {"r": {"s": {"a": "c", "c": "a"}}}
    }"#;

    #[test]
    fn loads_the_documented_example() {
        let inst = parse_instance(PATH_Z2).unwrap();
        assert_eq!(inst.sigma.group().order(), 2);
        assert_eq!(inst.sigma.sigma(1, 0).as_slice(), &[2, 1, 0]);
        let back = raw_instance(&[("r".into(), vec![1, 0])], &inst.sigma, None);
        let again = load(&back).unwrap();
        assert_eq!(again.sigma, inst.sigma);
    }

    #[test]
    fn table_groups_and_partial_actions() {
        let text = r#"{
          "tree": {"vertices": ["u", "v"], "edges": [["u", "v"]]},
          "group": {"elements": ["e", "g"], "table": [["e", "g"], ["g", "e"]]},
          "space": {"atoms": ["s", "t"], "measure": {"s": "1/2", "t": "1/2"}, "action": {"g": {"s": "t", "t": "s"}}},
          "sigma": {"g": {"s": {"u": "v", "v": "u"}, "t": {"u": "v", "v": "u"}}}
        }"#;
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.sigma.space().act(1, 0), 1);
    }

    #[test]
    fn errors_are_classified() {
        let bad_rational = PATH_Z2.replace("\"1/1\"", "\"1/0\"");
        assert!(matches!(parse_instance(&bad_rational), Err(LoadError::Parse(_))));
        let unknown = PATH_Z2.replace("\"c\": \"a\"}", "\"c\": \"z\"}");
        assert!(matches!(parse_instance(&unknown), Err(LoadError::Parse(_))));
        // a on c, c on b is not an automorphism of the path
        let not_auto = PATH_Z2.replace("{\"a\": \"c\", \"c\": \"a\"}", "{\"a\": \"b\", \"b\": \"a\"}");
        assert!(matches!(parse_instance(&not_auto), Err(LoadError::Invariant { what: "tree", .. })));
        let cycle = PATH_Z2.replace("[[\"a\", \"b\"], [\"b\", \"c\"]]", "[[\"a\", \"b\"], [\"b\", \"c\"], [\"c\", \"a\"]]");
        assert!(matches!(parse_instance(&cycle), Err(LoadError::Invariant { what: "tree", .. })));
        assert!(matches!(parse_instance("{"), Err(LoadError::Parse(_))));
    }

    #[test]
    fn identity_violation_carries_witness() {
        // r of order 3 acting by a transposition breaks the identity
        let text = r#"{
          "tree": {"vertices": ["c", "l1", "l2", "l3"], "edges": [["c", "l1"], ["c", "l2"], ["c", "l3"]]},
          "group": {"generators": [["r", [1, 2, 0]]]},
          "space": {"atoms": ["s"], "measure": {"s": "1"}, "action": {"r": {"s": "s"}}},
          "sigma": {"r": {"s": {"l1": "l2", "l2": "l1"}}}
        }"#;
        match parse_instance(text) {
            Err(LoadError::Invariant { what, witness, .. }) => {
                assert_eq!(what, "cocycle identity");
                assert!(witness.contains_key("gamma1"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn tree_documents_round_trip() {
        let t = parse_tree(r#"{"vertices": ["b", "a"], "edges": [["b", "a"]]}"#).unwrap();
        assert_eq!(parse_tree(&write_tree(&t)).unwrap(), t);
    }
}
