use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use super::group::{FiniteGroup, GroupElement};
use super::CocycleError;
use crate::rational::{is_probability, Rational};

pub type Atom = usize;

/// A finite probability space with a measure-preserving action of a finite
/// group; also used for boundary models.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbSpace {
    names: Vec<String>,
    index: HashMap<String, Atom>,
    measure: Vec<Rational>,
    // action[g][s] = g.s
    action: Vec<Vec<Atom>>,
}

impl ProbSpace {
    /// `action[g][s]` must be given for every group element.
    pub fn new(
        group: &FiniteGroup,
        names: Vec<String>,
        measure: Vec<Rational>,
        action: Vec<Vec<Atom>>,
    ) -> Result<Self, CocycleError> {
        let full: BTreeMap<GroupElement, Vec<Atom>> = action.into_iter().enumerate().collect();
        Self::from_partial(group, names, measure, full)
    }

    /// Completes the action from the elements present in `partial` (which
    /// must generate the group), then checks every law.
    pub fn from_partial(
        group: &FiniteGroup,
        names: Vec<String>,
        measure: Vec<Rational>,
        partial: BTreeMap<GroupElement, Vec<Atom>>,
    ) -> Result<Self, CocycleError> {
        let n = names.len();
        if n == 0 {
            return Err(CocycleError::InvalidSpace("no atoms".into()));
        }
        let mut index = HashMap::new();
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(CocycleError::InvalidSpace(format!("duplicate atom {name:?}")));
            }
        }
        if measure.len() != n || !measure.iter().all(is_probability) {
            return Err(CocycleError::InvalidSpace("measure must assign [0,1] to every atom".into()));
        }
        if measure.iter().sum::<Rational>() != Rational::one() {
            return Err(CocycleError::InvalidSpace("measure does not sum to 1".into()));
        }
        for (&g, row) in &partial {
            if g >= group.order() || row.len() != n || row.iter().any(|&t| t >= n) {
                return Err(CocycleError::IncompleteTable(format!(
                    "action row for element #{g} is malformed"
                )));
            }
        }
        let mut action: Vec<Option<Vec<Atom>>> = vec![None; group.order()];
        action[group.identity()] = Some((0..n).collect());
        let gens: Vec<GroupElement> = partial.keys().copied().collect();
        for (x, g, h) in group.spanning_steps(&gens)? {
            let (ag, ah) = (&partial[&g], action[h].as_ref().expect("reached earlier"));
            action[x] = Some(ah.iter().map(|&s| ag[s]).collect());
        }
        let action: Vec<Vec<Atom>> = action.into_iter().map(|row| row.expect("spanned")).collect();
        for (&g, row) in &partial {
            if action[g] != *row {
                return Err(CocycleError::InvalidSpace(format!(
                    "action of {} contradicts the group relations",
                    group.name(g)
                )));
            }
        }
        for a in group.elements() {
            for b in group.elements() {
                let ab = group.mul(a, b);
                if (0..n).any(|s| action[ab][s] != action[a][action[b][s]]) {
                    return Err(CocycleError::InvalidSpace(format!(
                        "not an action at ({}, {})",
                        group.name(a),
                        group.name(b)
                    )));
                }
            }
        }
        for row in &action {
            let mut hit = vec![false; n];
            for &t in row {
                hit[t] = true;
            }
            if hit.iter().any(|h| !h) {
                return Err(CocycleError::InvalidSpace("action is not a bijection".into()));
            }
            if (0..n).any(|s| measure[row[s]] != measure[s]) {
                return Err(CocycleError::InvalidSpace("action does not preserve the measure".into()));
            }
        }
        Ok(ProbSpace {
            names,
            index,
            measure,
            action,
        })
    }

    /// Single atom, trivial action.
    pub fn point(group: &FiniteGroup) -> Self {
        ProbSpace::new(
            group,
            vec!["s".into()],
            vec![Rational::one()],
            vec![vec![0]; group.order()],
        )
        .expect("one-point space")
    }

    /// Uniform measure on the left cosets of `subgroup`, atoms named `s0, s1, ...`.
    pub fn cosets(group: &FiniteGroup, subgroup: &[GroupElement]) -> Result<Self, CocycleError> {
        if !group.is_subgroup(subgroup) {
            return Err(CocycleError::NotASubgroup);
        }
        let cosets = group.left_cosets(subgroup);
        let k = cosets.len();
        let mut of = vec![0; group.order()];
        for (i, c) in cosets.iter().enumerate() {
            for &x in c {
                of[x] = i;
            }
        }
        let action = group
            .elements()
            .map(|g| cosets.iter().map(|c| of[group.mul(g, c[0])]).collect())
            .collect();
        let weight = Rational::new(1.into(), (k as i64).into());
        ProbSpace::new(
            group,
            (0..k).map(|i| format!("s{i}")).collect(),
            vec![weight; k],
            action,
        )
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn atoms(&self) -> std::ops::Range<Atom> {
        0..self.names.len()
    }

    pub fn name(&self, s: Atom) -> &str {
        &self.names[s]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn atom(&self, name: &str) -> Result<Atom, CocycleError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| CocycleError::UnknownAtom(name.to_string()))
    }

    pub fn measure(&self, s: Atom) -> &Rational {
        &self.measure[s]
    }

    pub fn measures(&self) -> &[Rational] {
        &self.measure
    }

    /// `g.s`
    pub fn act(&self, g: GroupElement, s: Atom) -> Atom {
        self.action[g][s]
    }

    pub fn action_table(&self) -> &[Vec<Atom>] {
        &self.action
    }

    /// Atoms of positive measure, in order.
    pub fn support(&self) -> Vec<Atom> {
        self.atoms().filter(|&s| !self.measure[s].is_zero()).collect()
    }

    pub fn in_support(&self, s: Atom) -> bool {
        !self.measure[s].is_zero()
    }

    /// Orbit of `s`, sorted.
    pub fn orbit(&self, s: Atom) -> Vec<Atom> {
        let mut out: Vec<Atom> = self.action.iter().map(|row| row[s]).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Orbits of the support, each sorted, ordered by smallest atom.
    pub fn support_orbits(&self) -> Vec<Vec<Atom>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for s in self.support() {
            if !seen[s] {
                let orbit = self.orbit(s);
                for &t in &orbit {
                    seen[t] = true;
                }
                out.push(orbit);
            }
        }
        out
    }

    /// Restriction of the action to a subgroup (given as the sub-table's
    /// element list in the subgroup's own order).
    pub(crate) fn restricted(&self, elements: &[GroupElement]) -> ProbSpace {
        ProbSpace {
            names: self.names.clone(),
            index: self.index.clone(),
            measure: self.measure.clone(),
            action: elements.iter().map(|&g| self.action[g].clone()).collect(),
        }
    }
}

/// Positive-measure atoms form a single orbit.
pub fn is_ergodic(space: &ProbSpace) -> bool {
    space.support_orbits().len() == 1
}
