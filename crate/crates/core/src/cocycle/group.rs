use std::collections::{BTreeSet, HashMap, VecDeque};

use super::CocycleError;

pub type GroupElement = usize;

/// A finite group given by its full multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    names: Vec<String>,
    index: HashMap<String, GroupElement>,
    table: Vec<Vec<GroupElement>>,
    identity: GroupElement,
    inverse: Vec<GroupElement>,
}

impl FiniteGroup {
    /// `table[a][b]` is the product `a · b`. All group laws are checked.
    pub fn from_table(names: Vec<String>, table: Vec<Vec<GroupElement>>) -> Result<Self, CocycleError> {
        let n = names.len();
        if n == 0 {
            return Err(CocycleError::InvalidGroup("no elements".into()));
        }
        let mut index = HashMap::new();
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(CocycleError::InvalidGroup(format!("duplicate element {name:?}")));
            }
        }
        if table.len() != n || table.iter().any(|row| row.len() != n || row.iter().any(|&c| c >= n)) {
            return Err(CocycleError::InvalidGroup("table is not n x n over the elements".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a))
            .ok_or_else(|| CocycleError::InvalidGroup("no identity element".into()))?;
        let mut inverse = Vec::with_capacity(n);
        for a in 0..n {
            let inv = (0..n)
                .find(|&b| table[a][b] == identity && table[b][a] == identity)
                .ok_or_else(|| CocycleError::InvalidGroup(format!("{} has no inverse", names[a])))?;
            inverse.push(inv);
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(CocycleError::InvalidGroup(format!(
                            "associativity fails at ({}, {}, {})",
                            names[a], names[b], names[c]
                        )));
                    }
                }
            }
        }
        Ok(FiniteGroup {
            names,
            index,
            table,
            identity,
            inverse,
        })
    }

    /// The permutation group generated by `generators` (each a permutation
    /// of `0..degree`). Elements are named by shortlex words in the
    /// generator names joined with `*`; the identity is `e`.
    pub fn from_permutations(generators: &[(String, Vec<usize>)]) -> Result<Self, CocycleError> {
        let degree = generators.first().map_or(0, |(_, p)| p.len());
        for (name, p) in generators {
            let mut seen = vec![false; degree];
            let ok = p.len() == degree
                && p.iter().all(|&v| v < degree && !std::mem::replace(&mut seen[v], true));
            if !ok {
                return Err(CocycleError::InvalidGroup(format!(
                    "generator {name:?} is not a permutation of 0..{degree}"
                )));
            }
        }
        let identity: Vec<usize> = (0..degree).collect();
        let mut perms = vec![identity.clone()];
        let mut names = vec!["e".to_string()];
        let mut lookup: HashMap<Vec<usize>, usize> = HashMap::from([(identity, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(h) = queue.pop_front() {
            for (gname, g) in generators {
                let product: Vec<usize> = perms[h].iter().map(|&v| g[v]).collect();
                if lookup.contains_key(&product) {
                    continue;
                }
                let name = if h == 0 {
                    gname.clone()
                } else {
                    format!("{gname}*{}", names[h])
                };
                lookup.insert(product.clone(), perms.len());
                queue.push_back(perms.len());
                perms.push(product);
                names.push(name);
                if perms.len() > 100_000 {
                    return Err(CocycleError::InvalidGroup("generated group is too large".into()));
                }
            }
        }
        let table = perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    .map(|b| lookup[&b.iter().map(|&v| a[v]).collect::<Vec<_>>()])
                    .collect()
            })
            .collect();
        FiniteGroup::from_table(names, table)
    }

    pub fn trivial() -> Self {
        FiniteGroup::from_table(vec!["e".into()], vec![vec![0]]).expect("trivial group")
    }

    pub fn cyclic(n: usize) -> Self {
        if n == 1 {
            return Self::trivial();
        }
        let r: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        FiniteGroup::from_permutations(&[("r".into(), r)]).expect("cyclic group")
    }

    /// Symmetries of the regular `n`-gon (order `2n`).
    pub fn dihedral(n: usize) -> Self {
        let r: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        let f: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
        FiniteGroup::from_permutations(&[("r".into(), r), ("f".into(), f)]).expect("dihedral group")
    }

    pub fn name(&self, g: GroupElement) -> &str {
        &self.names[g]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn element(&self, name: &str) -> Result<GroupElement, CocycleError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| CocycleError::UnknownElement(name.to_string()))
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn elements(&self) -> std::ops::Range<GroupElement> {
        0..self.names.len()
    }

    pub fn identity(&self) -> GroupElement {
        self.identity
    }

    pub fn mul(&self, a: GroupElement, b: GroupElement) -> GroupElement {
        self.table[a][b]
    }

    pub fn inv(&self, a: GroupElement) -> GroupElement {
        self.inverse[a]
    }

    pub fn table(&self) -> &[Vec<GroupElement>] {
        &self.table
    }

    /// Subgroup generated by `gens`, sorted.
    pub fn generated(&self, gens: &[GroupElement]) -> Vec<GroupElement> {
        let mut seen = BTreeSet::from([self.identity]);
        let mut stack = vec![self.identity];
        while let Some(h) = stack.pop() {
            for &g in gens {
                let p = self.mul(g, h);
                if seen.insert(p) {
                    stack.push(p);
                }
            }
        }
        seen.into_iter().collect()
    }

    /// Greedy generating set: repeatedly add the first element outside the
    /// subgroup generated so far.
    pub fn generating_set(&self) -> Vec<GroupElement> {
        let mut gens = Vec::new();
        let mut span = self.generated(&gens);
        while span.len() < self.order() {
            let next = self
                .elements()
                .find(|g| span.binary_search(g).is_err())
                .expect("span is proper");
            gens.push(next);
            span = self.generated(&gens);
        }
        gens
    }

    pub fn is_subgroup(&self, subset: &[GroupElement]) -> bool {
        let set: BTreeSet<GroupElement> = subset.iter().copied().collect();
        !set.is_empty()
            && set.iter().all(|&a| {
                a < self.order()
                    && set.contains(&self.inv(a))
                    && set.iter().all(|&b| set.contains(&self.mul(a, b)))
            })
    }

    /// Breadth-first spanning steps from the identity: each `(x, g, h)` means
    /// `x = g · h` with `g ∈ gens` and `h` reached earlier. Errors if `gens`
    /// does not generate the group.
    pub fn spanning_steps(
        &self,
        gens: &[GroupElement],
    ) -> Result<Vec<(GroupElement, GroupElement, GroupElement)>, CocycleError> {
        let mut reached = vec![false; self.order()];
        reached[self.identity] = true;
        let mut queue = VecDeque::from([self.identity]);
        let mut steps = Vec::new();
        while let Some(h) = queue.pop_front() {
            for &g in gens {
                let x = self.mul(g, h);
                if !reached[x] {
                    reached[x] = true;
                    steps.push((x, g, h));
                    queue.push_back(x);
                }
            }
        }
        if steps.len() + 1 < self.order() {
            return Err(CocycleError::IncompleteTable(
                "the given elements do not generate the group".into(),
            ));
        }
        Ok(steps)
    }

    /// All subgroups generated by at most two elements, deduplicated, sorted.
    pub fn small_subgroups(&self) -> Vec<Vec<GroupElement>> {
        let mut out = BTreeSet::new();
        for a in self.elements() {
            for b in a..self.order() {
                out.insert(self.generated(&[a, b]));
            }
        }
        out.insert(vec![self.identity]);
        out.into_iter().collect()
    }

    /// Left cosets `gH`, each sorted, ordered by smallest member.
    pub fn left_cosets(&self, subgroup: &[GroupElement]) -> Vec<Vec<GroupElement>> {
        let mut seen = vec![false; self.order()];
        let mut cosets = Vec::new();
        for g in self.elements() {
            if seen[g] {
                continue;
            }
            let mut coset: Vec<GroupElement> = subgroup.iter().map(|&h| self.mul(g, h)).collect();
            coset.sort_unstable();
            for &x in &coset {
                seen[x] = true;
            }
            cosets.push(coset);
        }
        cosets
    }
}
