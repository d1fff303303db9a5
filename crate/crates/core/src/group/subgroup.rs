use std::collections::HashMap;

use crate::error::{Error, Result};

use super::{FiniteGroup, Involution, DENSE_TABLE_MAX};

/// A subgroup of a fixed parent group, as a sorted list of parent indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    elements: Vec<usize>,
    members: Vec<bool>,
}

impl Subgroup {
    fn from_members(members: Vec<bool>) -> Self {
        let elements = members
            .iter()
            .enumerate()
            .filter_map(|(i, &m)| m.then_some(i))
            .collect();
        Subgroup { elements, members }
    }

    /// Wraps a membership mask known to describe a subgroup.
    pub(crate) fn from_members_unchecked(members: Vec<bool>) -> Self {
        Self::from_members(members)
    }

    pub fn trivial(g: &FiniteGroup) -> Self {
        let mut members = vec![false; g.order()];
        members[0] = true;
        Self::from_members(members)
    }

    pub fn whole(g: &FiniteGroup) -> Self {
        Self::from_members(vec![true; g.order()])
    }

    /// The subgroup generated by `gens`.
    pub fn generate(g: &FiniteGroup, gens: &[usize]) -> Self {
        let mut members = vec![false; g.order()];
        members[0] = true;
        let mut queue = vec![0usize];
        let mut i = 0;
        while i < queue.len() {
            let x = queue[i];
            for &s in gens {
                let y = g.mul(x, s);
                if !members[y] {
                    members[y] = true;
                    queue.push(y);
                }
            }
            i += 1;
        }
        Self::from_members(members)
    }

    /// Accepts an explicit element set after checking closure.
    pub fn from_elements(g: &FiniteGroup, elems: &[usize]) -> Result<Self> {
        let mut members = vec![false; g.order()];
        for &x in elems {
            if x >= g.order() {
                return Err(Error::input("element index out of range"));
            }
            members[x] = true;
        }
        let s = Self::from_members(members);
        if !s.contains(0) {
            return Err(Error::input("subset does not contain the identity"));
        }
        for &a in &s.elements {
            if !s.contains(g.inv(a)) || s.elements.iter().any(|&b| !s.contains(g.mul(a, b))) {
                return Err(Error::input("subset is not closed"));
            }
        }
        Ok(s)
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        self.members[x]
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&x| other.contains(x))
    }

    pub fn is_whole(&self) -> bool {
        self.elements.len() == self.members.len()
    }

    pub fn join(&self, g: &FiniteGroup, other: &Subgroup) -> Subgroup {
        let gens: Vec<usize> = self.elements.iter().chain(&other.elements).copied().collect();
        Self::generate(g, &gens)
    }

    pub fn intersect(&self, other: &Subgroup) -> Subgroup {
        Self::from_members(
            self.members
                .iter()
                .zip(&other.members)
                .map(|(&a, &b)| a && b)
                .collect(),
        )
    }

    pub fn is_normal(&self, g: &FiniteGroup) -> bool {
        self.elements
            .iter()
            .all(|&x| g.generators().iter().all(|&s| self.contains(g.conjugate(x, s))))
    }

    pub fn is_c_stable(&self, c: &Involution) -> bool {
        self.elements.iter().all(|&x| self.contains(c.apply(x)))
    }

    /// Smallest normal subgroup containing `seeds`.
    pub fn normal_closure(g: &FiniteGroup, seeds: &[usize]) -> Subgroup {
        let mut gens = seeds.to_vec();
        loop {
            let h = Self::generate(g, &gens);
            let extra: Vec<usize> = gens
                .iter()
                .flat_map(|&x| g.generators().iter().map(move |&s| (x, s)))
                .map(|(x, s)| g.conjugate(x, s))
                .filter(|&y| !h.contains(y))
                .collect();
            if extra.is_empty() {
                return h;
            }
            gens.extend(extra);
        }
    }

    pub fn center(g: &FiniteGroup) -> Subgroup {
        Self::from_members(
            (0..g.order())
                .map(|x| g.generators().iter().all(|&s| g.mul(x, s) == g.mul(s, x)))
                .collect(),
        )
    }

    /// `[G, G]`: normal closure of commutators of generators.
    pub fn commutator_subgroup(g: &FiniteGroup) -> Subgroup {
        let gens = g.generators();
        let comms: Vec<usize> = gens
            .iter()
            .flat_map(|&a| gens.iter().map(move |&b| (a, b)))
            .map(|(a, b)| g.commutator(a, b))
            .collect();
        Self::normal_closure(g, &comms)
    }

    /// Frattini subgroup of a `p`-group: `G^p [G, G]`.
    pub fn frattini(g: &FiniteGroup) -> Result<Subgroup> {
        let p = g
            .prime()
            .ok_or_else(|| Error::pre("Frattini subgroup is computed only for p-groups"))?;
        let mut gens: Vec<usize> = (0..g.order()).map(|x| g.pow(x, p)).collect();
        gens.sort_unstable();
        gens.dedup();
        gens.extend_from_slice(Self::commutator_subgroup(g).elements());
        Ok(Self::generate(g, &gens))
    }

    /// `G⁺ = {g : g^c = g}`.
    pub fn fixed(g: &FiniteGroup, c: &Involution) -> Subgroup {
        Self::from_members((0..g.order()).map(|x| c.apply(x) == x).collect())
    }

    /// A greedy generating set, scanning elements in index order.
    pub fn generating_set(&self, g: &FiniteGroup) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = Self::trivial(g);
        for &x in &self.elements {
            if !span.contains(x) {
                gens.push(x);
                span = Self::generate(g, &gens);
                if span.order() == self.order() {
                    break;
                }
            }
        }
        gens
    }

    /// The subgroup as a group in its own right.
    pub fn embed(&self, g: &FiniteGroup) -> Result<EmbeddedSubgroup> {
        EmbeddedSubgroup::new(g, self)
    }
}

/// `G⁻ = {g : g^c = g^{-1}}`, sorted.
pub fn antifixed_set(g: &FiniteGroup, c: &Involution) -> Vec<usize> {
    (0..g.order()).filter(|&x| c.apply(x) == g.inv(x)).collect()
}

/// Coset decomposition `G → G/N`, cosets numbered by their least element.
pub fn coset_projection(g: &FiniteGroup, n: &Subgroup) -> (Vec<usize>, Vec<usize>) {
    let mut proj = vec![usize::MAX; g.order()];
    let mut reps = Vec::new();
    for x in 0..g.order() {
        if proj[x] != usize::MAX {
            continue;
        }
        let id = reps.len();
        reps.push(x);
        for &m in n.elements() {
            proj[g.mul(x, m)] = id;
        }
    }
    (proj, reps)
}

/// `G/N` with the induced involution and the projection map.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub group: FiniteGroup,
    pub involution: Involution,
    pub projection: Vec<usize>,
}

/// Quotient by a normal `c`-stable subgroup.
pub fn quotient_group(g: &FiniteGroup, n: &Subgroup, c: &Involution) -> Result<Quotient> {
    if !n.is_normal(g) {
        return Err(Error::input("quotient by a subgroup that is not normal"));
    }
    if !n.is_c_stable(c) {
        return Err(Error::input("quotient by a subgroup that is not stable under c"));
    }
    let (proj, reps) = coset_projection(g, n);
    let m = reps.len();
    if m > DENSE_TABLE_MAX {
        return Err(Error::SizeCap { cap: DENSE_TABLE_MAX });
    }
    let mut table = vec![0u32; m * m];
    for (i, &a) in reps.iter().enumerate() {
        for (j, &b) in reps.iter().enumerate() {
            table[i * m + j] = proj[g.mul(a, b)] as u32;
        }
    }
    let labels = reps.iter().map(|&r| vec![r as u64]).collect();
    let mut gens: Vec<usize> = g.generators().iter().map(|&s| proj[s]).collect();
    gens.dedup();
    let group = FiniteGroup::from_table(labels, table, gens)?;
    let map = reps.iter().map(|&r| proj[c.apply(r)]).collect();
    let involution = Involution::from_map(&group, map)?;
    Ok(Quotient {
        group,
        involution,
        projection: proj,
    })
}

/// A subgroup re-indexed as a standalone [`FiniteGroup`], keeping the
/// parent's element order and labels.
#[derive(Clone, Debug)]
pub struct EmbeddedSubgroup {
    pub group: FiniteGroup,
    /// Subgroup index to parent index.
    pub embedding: Vec<usize>,
    locate: HashMap<usize, usize>,
}

impl EmbeddedSubgroup {
    fn new(g: &FiniteGroup, h: &Subgroup) -> Result<Self> {
        let embedding = h.elements().to_vec();
        let locate: HashMap<usize, usize> = embedding.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let gens: Vec<usize> = h.generating_set(g).iter().map(|x| locate[x]).collect();
        let n = embedding.len();
        let table = if n <= DENSE_TABLE_MAX || matches!(g.ambient(), super::Ambient::Abstract) {
            let mut t = vec![0u32; n * n];
            for (i, &a) in embedding.iter().enumerate() {
                for (j, &b) in embedding.iter().enumerate() {
                    t[i * n + j] = locate[&g.mul(a, b)] as u32;
                }
            }
            Some(t)
        } else {
            None
        };
        let labels = embedding.iter().map(|&x| g.label(x).to_vec()).collect();
        let group = FiniteGroup::from_closed_elements(g.ambient().clone(), labels, gens, table)?;
        Ok(EmbeddedSubgroup {
            group,
            embedding,
            locate,
        })
    }

    /// Subgroup index of a parent element, if it lies in the subgroup.
    pub fn locate(&self, parent: usize) -> Option<usize> {
        self.locate.get(&parent).copied()
    }

    /// Parent class of each subgroup class.
    pub fn class_fusion(&self, parent: &FiniteGroup) -> Vec<usize> {
        let cl = self.group.classes();
        let pcl = parent.classes();
        (0..cl.len())
            .map(|i| pcl.class_of[self.embedding[cl.representative(i)]])
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{Ambient, DEFAULT_SIZE_CAP};

    fn gl2_f3() -> FiniteGroup {
        FiniteGroup::generate(
            Ambient::Matrix { dim: 2, modulus: 3 },
            &[vec![1, 1, 0, 1], vec![1, 0, 1, 1], vec![2, 0, 0, 1]],
            DEFAULT_SIZE_CAP,
        )
        .unwrap()
    }

    #[test]
    fn derived_subgroup_of_gl2_f3_is_sl2() {
        let g = gl2_f3();
        let d = Subgroup::commutator_subgroup(&g);
        // Oracle: SL_2(F_3) is the determinant-one subset.
        let sl: Vec<usize> = (0..g.order())
            .filter(|&x| {
                let m = g.label(x);
                (m[0] * m[3] + 9 - m[1] * m[2]) % 3 == 1
            })
            .collect();
        assert_eq!(d.elements(), sl.as_slice());
        assert_eq!(d.order(), 24);
        assert!(d.is_normal(&g));
        assert_eq!(Subgroup::center(&g).order(), 2);
    }

    #[test]
    fn quotient_of_cyclic_nine() {
        let g = FiniteGroup::generate(Ambient::Matrix { dim: 2, modulus: 9 }, &[vec![1, 1, 0, 1]], 100).unwrap();
        let c = Involution::inversion(&g).unwrap();
        let n = Subgroup::generate(&g, &[g.pow(g.generators()[0], 3)]);
        assert_eq!(n.order(), 3);
        let q = quotient_group(&g, &n, &c).unwrap();
        assert_eq!(q.group.order(), 3);
        assert_eq!(Subgroup::fixed(&q.group, &q.involution).order(), 1);
        let whole = quotient_group(&g, &Subgroup::whole(&g), &c).unwrap();
        assert_eq!(whole.group.order(), 1);
    }

    #[test]
    fn embedded_subgroup_tables_agree() {
        let g = gl2_f3();
        let d = Subgroup::commutator_subgroup(&g);
        let e = d.embed(&g).unwrap();
        assert_eq!(e.group.order(), 24);
        e.group.check_axioms().unwrap();
        for a in 0..24 {
            for b in 0..24 {
                assert_eq!(e.embedding[e.group.mul(a, b)], g.mul(e.embedding[a], e.embedding[b]));
            }
        }
    }

    #[test]
    fn from_elements_rejects_non_subgroups() {
        let g = gl2_f3();
        assert!(Subgroup::from_elements(&g, &[0, 1]).is_err());
        assert!(Subgroup::from_elements(&g, &[0]).is_ok());
    }
}
