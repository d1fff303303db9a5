//! Finite groups with explicit element lists, and the subgroup and
//! involution machinery built on top of them.

pub mod ambient;
pub mod involution;
pub mod lemmas;
pub mod spec;
pub mod subgroup;

use std::collections::HashMap;
use std::sync::OnceLock;

pub use ambient::Ambient;
pub use involution::Involution;
pub use subgroup::{EmbeddedSubgroup, Subgroup};

use crate::error::{Error, Result};
use crate::modarith::lcm;

/// Default closure cap for [`FiniteGroup::generate`].
pub const DEFAULT_SIZE_CAP: usize = 20_000;

/// Groups up to this order get a dense multiplication table; larger ones
/// multiply through their ambient.
pub const DENSE_TABLE_MAX: usize = 4096;

/// A finite group with elements indexed `0..n`, index 0 the identity.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    ambient: Ambient,
    labels: Vec<Vec<u64>>,
    lookup: HashMap<Vec<u64>, usize>,
    generators: Vec<usize>,
    table: Option<Vec<u32>>,
    inverses: Vec<usize>,
    classes: OnceLock<ConjugacyClasses>,
    orders: OnceLock<Vec<u64>>,
}

/// Partition of a group into conjugacy classes, ordered by minimal element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugacyClasses {
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
}

impl ConjugacyClasses {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn size(&self, i: usize) -> usize {
        self.classes[i].len()
    }

    pub fn representative(&self, i: usize) -> usize {
        self.classes[i][0]
    }
}

impl FiniteGroup {
    /// Closes `generators` under multiplication inside `ambient`.
    ///
    /// Elements are numbered breadth-first from the identity; each new layer
    /// is sorted by label, so the numbering depends only on the inputs.
    pub fn generate(ambient: Ambient, generators: &[Vec<u64>], cap: usize) -> Result<Self> {
        let gens: Vec<Vec<u64>> = generators
            .iter()
            .map(|g| ambient.canonicalize(g))
            .collect::<Result<_>>()?;
        let id = ambient.identity();
        let mut labels = vec![id.clone()];
        let mut lookup = HashMap::from([(id, 0usize)]);
        let mut layer = vec![0usize];
        while !layer.is_empty() {
            let mut fresh: Vec<Vec<u64>> = Vec::new();
            for &x in &layer {
                for g in &gens {
                    let y = ambient.multiply(&labels[x], g);
                    if !lookup.contains_key(&y) {
                        fresh.push(y);
                    }
                }
            }
            fresh.sort();
            fresh.dedup();
            layer.clear();
            for y in fresh {
                if lookup.contains_key(&y) {
                    continue;
                }
                if labels.len() >= cap {
                    return Err(Error::SizeCap { cap });
                }
                lookup.insert(y.clone(), labels.len());
                layer.push(labels.len());
                labels.push(y);
            }
        }
        let gen_idx = gens.iter().map(|g| lookup[g]).collect();
        Self::assemble(ambient, labels, lookup, gen_idx, None)
    }

    /// Builds a group from an explicit multiplication table.
    pub fn from_table(
        labels: Vec<Vec<u64>>,
        table: Vec<u32>,
        generators: Vec<usize>,
    ) -> Result<Self> {
        let n = labels.len();
        if table.len() != n * n {
            return Err(Error::input("table size does not match element count"));
        }
        let lookup: HashMap<_, _> = labels.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect();
        if lookup.len() != n {
            return Err(Error::input("element labels are not distinct"));
        }
        Self::assemble(Ambient::Abstract, labels, lookup, generators, Some(table))
    }

    /// Builds a group from elements already known to be closed in `ambient`.
    pub(crate) fn from_closed_elements(
        ambient: Ambient,
        labels: Vec<Vec<u64>>,
        generators: Vec<usize>,
        table: Option<Vec<u32>>,
    ) -> Result<Self> {
        let lookup: HashMap<_, _> = labels.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect();
        Self::assemble(ambient, labels, lookup, generators, table)
    }

    fn assemble(
        ambient: Ambient,
        labels: Vec<Vec<u64>>,
        lookup: HashMap<Vec<u64>, usize>,
        generators: Vec<usize>,
        table: Option<Vec<u32>>,
    ) -> Result<Self> {
        let n = labels.len();
        let mut group = FiniteGroup {
            ambient,
            labels,
            lookup,
            generators,
            table,
            inverses: Vec::new(),
            classes: OnceLock::new(),
            orders: OnceLock::new(),
        };
        if group.table.is_none() && n <= DENSE_TABLE_MAX {
            let mut t = vec![0u32; n * n];
            for a in 0..n {
                for b in 0..n {
                    t[a * n + b] = group.mul_ambient(a, b)? as u32;
                }
            }
            group.table = Some(t);
        }
        group.inverses = group.compute_inverses()?;
        Ok(group)
    }

    fn mul_ambient(&self, a: usize, b: usize) -> Result<usize> {
        let prod = self.ambient.multiply(&self.labels[a], &self.labels[b]);
        self.lookup
            .get(&prod)
            .copied()
            .ok_or_else(|| Error::consistency("element set is not closed under multiplication"))
    }

    fn compute_inverses(&self) -> Result<Vec<usize>> {
        let n = self.order();
        match &self.table {
            Some(t) => {
                let mut inv = vec![usize::MAX; n];
                for a in 0..n {
                    if let Some(b) = (0..n).find(|&b| t[a * n + b] == 0) {
                        inv[a] = b;
                    }
                }
                if inv.iter().any(|&i| i == usize::MAX) || t[0..n].iter().enumerate().any(|(i, &x)| x as usize != i) {
                    return Err(Error::input("table does not define a group (identity/inverse)"));
                }
                Ok(inv)
            }
            None => (0..n)
                .map(|a| {
                    let inv = self.ambient.inverse(&self.labels[a]);
                    self.lookup
                        .get(&inv)
                        .copied()
                        .ok_or_else(|| Error::consistency("inverse missing from element set"))
                })
                .collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn label(&self, a: usize) -> &[u64] {
        &self.labels[a]
    }

    pub fn labels(&self) -> &[Vec<u64>] {
        &self.labels
    }

    pub fn render(&self, a: usize) -> String {
        self.ambient.render(&self.labels[a])
    }

    pub fn index_of(&self, label: &[u64]) -> Option<usize> {
        self.lookup.get(label).copied()
    }

    /// The dense multiplication table, when the group has one.
    pub fn table(&self) -> Option<&[u32]> {
        self.table.as_deref()
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.table {
            Some(t) => t[a * self.labels.len() + b] as usize,
            None => self.mul_ambient(a, b).expect("closed element set"),
        }
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    /// `x^{-1} a x`.
    pub fn conjugate(&self, a: usize, x: usize) -> usize {
        self.mul(self.mul(self.inv(x), a), x)
    }

    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    pub fn pow(&self, a: usize, k: u64) -> usize {
        let mut acc = 0;
        for _ in 0..k {
            acc = self.mul(acc, a);
        }
        acc
    }

    pub fn element_orders(&self) -> &[u64] {
        self.orders.get_or_init(|| {
            (0..self.order())
                .map(|a| {
                    let mut k = 1u64;
                    let mut x = a;
                    while x != 0 {
                        x = self.mul(x, a);
                        k += 1;
                    }
                    k
                })
                .collect()
        })
    }

    pub fn element_order(&self, a: usize) -> u64 {
        self.element_orders()[a]
    }

    pub fn exponent(&self) -> u64 {
        self.element_orders().iter().fold(1, |acc, &o| lcm(acc, o))
    }

    pub fn is_abelian(&self) -> bool {
        let g = &self.generators;
        g.iter().all(|&a| g.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    /// If the order is a power of a prime `p`, returns `p`.
    pub fn prime(&self) -> Option<u64> {
        crate::modarith::prime_power(self.order() as u64).map(|(p, _)| p)
    }

    /// Spot-checks the group axioms: identity, inverses, and associativity
    /// on every triple drawn from generators and a sample of elements.
    pub fn check_axioms(&self) -> Result<()> {
        let n = self.order();
        for a in 0..n {
            if self.mul(0, a) != a || self.mul(a, 0) != a {
                return Err(Error::consistency("index 0 is not the identity"));
            }
            if self.mul(a, self.inv(a)) != 0 {
                return Err(Error::consistency("inverse table is wrong"));
            }
        }
        let stride = (n / 64).max(1);
        let sample: Vec<usize> = (0..n).step_by(stride).chain(self.generators.iter().copied()).collect();
        for &a in &sample {
            for &b in &sample {
                for &c in &self.generators {
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        return Err(Error::consistency("multiplication is not associative"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Conjugacy classes, computed on first use.
    pub fn classes(&self) -> &ConjugacyClasses {
        self.classes.get_or_init(|| self.compute_classes())
    }

    fn compute_classes(&self) -> ConjugacyClasses {
        let n = self.order();
        let mut class_of = vec![usize::MAX; n];
        let mut classes = Vec::new();
        for x in 0..n {
            if class_of[x] != usize::MAX {
                continue;
            }
            let id = classes.len();
            class_of[x] = id;
            let mut orbit = vec![x];
            let mut i = 0;
            while i < orbit.len() {
                let y = orbit[i];
                for &s in &self.generators {
                    let z = self.conjugate(y, s);
                    if class_of[z] == usize::MAX {
                        class_of[z] = id;
                        orbit.push(z);
                    }
                }
                i += 1;
            }
            orbit.sort_unstable();
            classes.push(orbit);
        }
        ConjugacyClasses { classes, class_of }
    }

    /// Index of the class containing `g^{-1}` for each class.
    pub fn inverse_classes(&self) -> Vec<usize> {
        let cl = self.classes();
        (0..cl.len())
            .map(|i| cl.class_of[self.inv(cl.representative(i))])
            .collect()
    }

    /// Order of the centralizer of the class representative.
    pub fn centralizer_order(&self, class: usize) -> usize {
        self.order() / self.classes().size(class)
    }

    /// Builds `G ⋊ ⟨c⟩`, elements `(g, ε)` indexed `g + ε·|G|`, with
    /// `(g, ε)(h, δ) = (g·c^ε(h), ε + δ)`.
    pub fn semidirect_with(&self, c: &Involution) -> Result<FiniteGroup> {
        let n = self.order();
        if n > DENSE_TABLE_MAX {
            return Err(Error::SizeCap { cap: DENSE_TABLE_MAX });
        }
        let m = 2 * n;
        let mut table = vec![0u32; m * m];
        for a in 0..m {
            let (g, eps) = (a % n, a / n);
            for b in 0..m {
                let (h, del) = (b % n, b / n);
                let h2 = if eps == 1 { c.apply(h) } else { h };
                table[a * m + b] = (self.mul(g, h2) + ((eps + del) % 2) * n) as u32;
            }
        }
        let labels = (0..m)
            .map(|a| {
                let mut l = self.labels[a % n].clone();
                l.push((a / n) as u64);
                l
            })
            .collect();
        let mut gens = self.generators.clone();
        gens.push(n);
        FiniteGroup::from_table(labels, table, gens)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gl2_f3() -> FiniteGroup {
        FiniteGroup::generate(
            Ambient::Matrix { dim: 2, modulus: 3 },
            &[vec![1, 1, 0, 1], vec![1, 0, 1, 1], vec![2, 0, 0, 1]],
            DEFAULT_SIZE_CAP,
        )
        .unwrap()
    }

    #[test]
    fn transvections_alone_generate_sl2_f3() {
        let g = FiniteGroup::generate(
            Ambient::Matrix { dim: 2, modulus: 3 },
            &[vec![1, 1, 0, 1], vec![1, 0, 1, 1]],
            DEFAULT_SIZE_CAP,
        )
        .unwrap();
        assert_eq!(g.order(), 24);
        assert_eq!(g.classes().len(), 7);
    }

    #[test]
    fn three_cycle_generates_cyclic_group() {
        let g = FiniteGroup::generate(Ambient::Permutation { degree: 3 }, &[vec![1, 2, 0]], 100).unwrap();
        assert_eq!(g.order(), 3);
        assert!(g.is_abelian());
        assert_eq!(g.exponent(), 3);
    }

    #[test]
    fn transvections_and_diagonal_generate_gl2_f3() {
        // Oracle: brute-force count of invertible 2x2 matrices over F_3.
        let mut invertible = 0;
        for e in 0..81u64 {
            let (a, b, c, d) = (e % 3, e / 3 % 3, e / 9 % 3, e / 27);
            if (a * d + 9 - b * c) % 3 != 0 {
                invertible += 1;
            }
        }
        let g = gl2_f3();
        assert_eq!(g.order(), invertible);
        assert_eq!(g.order(), 48);
        g.check_axioms().unwrap();
        assert_eq!(g.classes().len(), 8);
    }

    #[test]
    fn congruence_kernel_mod_9() {
        let gens: Vec<Vec<u64>> = vec![vec![4, 0, 0, 1], vec![1, 3, 0, 1], vec![1, 0, 3, 1], vec![1, 0, 0, 4]];
        let g = FiniteGroup::generate(Ambient::Matrix { dim: 2, modulus: 9 }, &gens, DEFAULT_SIZE_CAP).unwrap();
        assert_eq!(g.order(), 81);
        assert!(g.is_abelian());
    }

    #[test]
    fn generation_is_deterministic() {
        let a = gl2_f3();
        let b = gl2_f3();
        assert_eq!(a.labels(), b.labels());
        assert_eq!(a.table(), b.table());
    }

    #[test]
    fn cap_and_bad_generators() {
        let err = FiniteGroup::generate(
            Ambient::Matrix { dim: 2, modulus: 3 },
            &[vec![1, 1, 0, 1], vec![1, 0, 1, 1]],
            10,
        )
        .unwrap_err();
        assert_eq!(err, Error::SizeCap { cap: 10 });
        let err = FiniteGroup::generate(Ambient::Matrix { dim: 2, modulus: 9 }, &[vec![3, 0, 0, 1]], 100);
        assert!(matches!(err, Err(Error::Input(_))));
    }
}
