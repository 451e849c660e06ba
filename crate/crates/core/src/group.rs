//! Finite subgroups of SO(4) given by generators.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::{Arc, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cyclo::{lcm, CycloField, CycloNumber};
use crate::error::{Error, Result};
use crate::linalg::Subspace;
use crate::quat::RotationElement;

pub const DEFAULT_CAP: usize = 100_000;

/// Product tables are kept up to this order; larger groups multiply by words.
const TABLE_LIMIT: usize = 1024;

/// On-disk group spec: `{"N": 24, "generators": [{"l": [..4], "r": [..4]}, ..], "cap": 1000}`.
/// Generators are embedded into `Q(zeta_N)`; `cap` defaults to [`DEFAULT_CAP`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorFile {
    #[serde(rename = "N")]
    pub order: u32,
    pub generators: Vec<RotationElement>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap: Option<usize>,
}

impl GeneratorFile {
    pub fn build(&self) -> Result<FiniteRotationGroup> {
        CycloField::get(self.order)?;
        let gens = self.generators.iter().map(|g| g.embed(self.order)).collect::<Result<Vec<_>>>()?;
        FiniteRotationGroup::closure(&gens, self.cap.unwrap_or(DEFAULT_CAP))
    }
}

/// A subgroup of a parent group as a sorted list of element indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup {
    members: Vec<usize>,
}

impl Subgroup {
    fn from_unsorted(mut members: Vec<usize>) -> Subgroup {
        members.sort_unstable();
        members.dedup();
        Subgroup { members }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }

    pub fn is_trivial(&self) -> bool {
        self.members == [0]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SubgroupTests {
    pub is_subgroup: bool,
    pub index: Option<usize>,
    pub is_normal: bool,
}

/// A finite group of rotations, closed under composition. Element 0 is the
/// identity; indices follow breadth-first discovery under the generator order.
pub struct FiniteRotationGroup {
    field: Arc<CycloField>,
    elements: Vec<RotationElement>,
    index: HashMap<RotationElement, usize>,
    generators: Vec<RotationElement>,
    gen_index: Vec<usize>,
    /// `right_mul[s][i]` is the index of `elements[i] * generators[s]`.
    right_mul: Vec<Vec<usize>>,
    /// Generator word of each element, read left to right from the identity.
    words: Vec<Vec<u16>>,
    table: Option<Vec<u32>>,
    inverse: Vec<usize>,
    characters: OnceLock<Vec<CycloNumber>>,
    orders: OnceLock<Vec<usize>>,
    classes: OnceLock<Vec<Vec<usize>>>,
    fixed: OnceLock<Vec<Subspace>>,
}

impl std::fmt::Debug for FiniteRotationGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FiniteRotationGroup(order {}, N = {})", self.order(), self.field.order())
    }
}

impl FiniteRotationGroup {
    /// Breadth-first closure of the generated group. Generators from different
    /// fields are embedded into the smallest common one.
    pub fn closure(generators: &[RotationElement], cap: usize) -> Result<FiniteRotationGroup> {
        if generators.is_empty() {
            return Err(Error::NoGenerators);
        }
        let n = generators.iter().fold(4, |acc, g| lcm(acc, g.order_n()));
        let gens = generators.iter().map(|g| g.embed(n)).collect::<Result<Vec<_>>>()?;
        let field = CycloField::get(n)?;

        let id = RotationElement::identity(&field);
        let mut elements = vec![id.clone()];
        let mut index = HashMap::from([(id, 0usize)]);
        let mut words: Vec<Vec<u16>> = vec![vec![]];
        let mut right_mul = vec![Vec::new(); gens.len()];
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for (s, g) in gens.iter().enumerate() {
                let h = elements[i].compose(g);
                let k = match index.get(&h) {
                    Some(&k) => k,
                    None => {
                        let k = elements.len();
                        if k >= cap {
                            return Err(Error::ClosureCap(cap));
                        }
                        let mut w = words[i].clone();
                        w.push(s as u16);
                        words.push(w);
                        index.insert(h.clone(), k);
                        elements.push(h);
                        queue.push_back(k);
                        k
                    }
                };
                debug_assert_eq!(right_mul[s].len(), i);
                right_mul[s].push(k);
            }
        }

        let gen_index = gens.iter().map(|g| index[g]).collect();
        let inverse = elements.par_iter().map(|g| index[&g.inverse()]).collect();
        let mut group = FiniteRotationGroup {
            field,
            elements,
            index,
            generators: gens,
            gen_index,
            right_mul,
            words,
            table: None,
            inverse,
            characters: OnceLock::new(),
            orders: OnceLock::new(),
            classes: OnceLock::new(),
            fixed: OnceLock::new(),
        };
        if group.order() <= TABLE_LIMIT {
            group.table = Some(group.build_table());
        }
        Ok(group)
    }

    pub fn trivial(field: &Arc<CycloField>) -> FiniteRotationGroup {
        Self::closure(&[RotationElement::identity(field)], 1).expect("trivial group")
    }

    fn build_table(&self) -> Vec<u32> {
        let n = self.order();
        let mut t = vec![0u32; n * n];
        // column j from its parent column (BFS order guarantees the parent is done)
        for i in 0..n {
            t[i * n] = i as u32;
        }
        for j in 1..n {
            let w = &self.words[j];
            let s = *w.last().unwrap() as usize;
            let parent = self.parent(j);
            for i in 0..n {
                t[i * n + j] = self.right_mul[s][t[i * n + parent] as usize] as u32;
            }
        }
        t
    }

    fn parent(&self, j: usize) -> usize {
        let w = &self.words[j];
        let mut x = 0;
        for &s in &w[..w.len() - 1] {
            x = self.right_mul[s as usize][x];
        }
        x
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[RotationElement] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &RotationElement {
        &self.elements[i]
    }

    pub fn generators(&self) -> &[RotationElement] {
        &self.generators
    }

    pub fn generator_indices(&self) -> &[usize] {
        &self.gen_index
    }

    pub fn index_of(&self, g: &RotationElement) -> Option<usize> {
        if g.order_n() == self.field.order() {
            self.index.get(g).copied()
        } else {
            g.embed(self.field.order()).ok().and_then(|h| self.index.get(&h).copied())
        }
    }

    pub fn contains(&self, g: &RotationElement) -> bool {
        self.index_of(g).is_some()
    }

    /// Index of `elements[a] * elements[b]`.
    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.table {
            Some(t) => t[a * self.order() + b] as usize,
            None => self.words[b].iter().fold(a, |x, &s| self.right_mul[s as usize][x]),
        }
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    /// `h g h^-1`.
    pub fn conjugate(&self, g: usize, h: usize) -> usize {
        self.mul(self.mul(h, g), self.inverse[h])
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup { members: vec![0] }
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup {
            members: (0..self.order()).collect(),
        }
    }

    /// The subgroup generated by the given elements.
    pub fn generate(&self, gens: &[usize]) -> Subgroup {
        let mut seen = HashSet::from([0usize]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        Subgroup::from_unsorted(seen.into_iter().collect())
    }

    pub fn is_subgroup(&self, set: &[usize]) -> bool {
        let s: HashSet<usize> = set.iter().copied().collect();
        s.contains(&0) && set.iter().all(|&a| set.iter().all(|&b| s.contains(&self.mul(a, b))))
    }

    /// Checks the index set and wraps it as a subgroup.
    pub fn subgroup(&self, set: &[usize]) -> Result<Subgroup> {
        if set.iter().any(|&i| i >= self.order()) || !self.is_subgroup(set) {
            return Err(Error::NotSubgroup);
        }
        Ok(Subgroup::from_unsorted(set.to_vec()))
    }

    /// A subgroup as a standalone group, generated by its own members.
    pub fn restrict(&self, h: &Subgroup) -> Result<FiniteRotationGroup> {
        let mut idx: Vec<usize> = Vec::new();
        let mut span = self.trivial_subgroup();
        for &i in h.members() {
            if !span.contains(i) {
                idx.push(i);
                span = self.generate(&idx);
            }
        }
        let gens: Vec<RotationElement> = idx.iter().map(|&i| self.elements[i].clone()).collect();
        if gens.is_empty() {
            return Ok(FiniteRotationGroup::trivial(self.field()));
        }
        FiniteRotationGroup::closure(&gens, h.order())
    }

    /// Indices of the elements of another group, or `NotInGroup`.
    pub fn locate(&self, other: &FiniteRotationGroup) -> Result<Subgroup> {
        let idx = other
            .elements
            .iter()
            .map(|g| self.index_of(g).ok_or(Error::NotInGroup))
            .collect::<Result<Vec<_>>>()?;
        Ok(Subgroup::from_unsorted(idx))
    }

    /// Element orders, cached.
    pub fn element_orders(&self) -> &[usize] {
        self.orders.get_or_init(|| {
            (0..self.order())
                .into_par_iter()
                .map(|i| {
                    let mut x = i;
                    let mut n = 1;
                    while x != 0 {
                        x = self.mul(x, i);
                        n += 1;
                    }
                    n
                })
                .collect()
        })
    }

    /// Characters `trace_char` of all elements, cached.
    pub fn characters(&self) -> &[CycloNumber] {
        self.characters
            .get_or_init(|| self.elements.par_iter().map(RotationElement::trace_char).collect())
    }

    /// Fixed spaces of all elements, cached.
    pub fn fixed_spaces(&self) -> &[Subspace] {
        self.fixed
            .get_or_init(|| self.elements.par_iter().map(RotationElement::fixed_space).collect())
    }

    /// Conjugacy classes ordered by smallest member; members sorted.
    pub fn conjugacy_classes(&self) -> &[Vec<usize>] {
        self.classes.get_or_init(|| {
            let mut class_of = vec![usize::MAX; self.order()];
            let mut classes = Vec::new();
            for start in 0..self.order() {
                if class_of[start] != usize::MAX {
                    continue;
                }
                let c = classes.len();
                let mut members = vec![start];
                class_of[start] = c;
                let mut k = 0;
                while k < members.len() {
                    let x = members[k];
                    for &s in &self.gen_index {
                        let y = self.conjugate(x, s);
                        if class_of[y] == usize::MAX {
                            class_of[y] = c;
                            members.push(y);
                        }
                    }
                    k += 1;
                }
                members.sort_unstable();
                classes.push(members);
            }
            classes
        })
    }

    /// `{g : g H g^-1 = H}`.
    pub fn normalizer(&self, h: &Subgroup) -> Result<Subgroup> {
        if !self.is_subgroup(h.members()) {
            return Err(Error::NotSubgroup);
        }
        let members = (0..self.order())
            .into_par_iter()
            .filter(|&g| h.members().iter().all(|&x| h.contains(self.conjugate(x, g))))
            .collect();
        Ok(Subgroup::from_unsorted(members))
    }

    pub fn centralizer(&self, set: &[usize]) -> Subgroup {
        let members = (0..self.order())
            .into_par_iter()
            .filter(|&g| set.iter().all(|&x| self.mul(g, x) == self.mul(x, g)))
            .collect();
        Subgroup::from_unsorted(members)
    }

    pub fn center(&self) -> Subgroup {
        self.centralizer(&self.gen_index)
    }

    /// Elements fixing `w` pointwise.
    pub fn pointwise_stabilizer(&self, w: &Subspace) -> Subgroup {
        let fixed = self.fixed_spaces();
        let members = (0..self.order())
            .into_par_iter()
            .filter(|&g| w.is_zero() || fixed[g].contains_subspace(w))
            .collect();
        Subgroup::from_unsorted(members)
    }

    /// `{g H g^-1}` for a subgroup `H`, as sorted subgroups in first-seen order.
    pub fn conjugates_of(&self, h: &Subgroup) -> Vec<Subgroup> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for g in 0..self.order() {
            let c = Subgroup::from_unsorted(h.members().iter().map(|&x| self.conjugate(x, g)).collect());
            if seen.insert(c.clone()) {
                out.push(c);
            }
        }
        out
    }

    /// Containment, index and normality of `h` inside `self`.
    pub fn subgroup_tests(&self, h: &FiniteRotationGroup) -> SubgroupTests {
        let Ok(sub) = self.locate(h) else {
            return SubgroupTests {
                is_subgroup: false,
                index: None,
                is_normal: false,
            };
        };
        let is_normal = self
            .gen_index
            .iter()
            .all(|&g| sub.members().iter().all(|&x| sub.contains(self.conjugate(x, g))));
        SubgroupTests {
            is_subgroup: true,
            index: Some(self.order() / sub.order()),
            is_normal,
        }
    }
}
