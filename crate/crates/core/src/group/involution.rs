use crate::error::{Error, Result};

use super::{EmbeddedSubgroup, FiniteGroup};

/// An automorphism `g ↦ g^c` of order dividing 2, stored as a permutation
/// of element indices. The identity map is allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Involution {
    map: Vec<usize>,
}

impl Involution {
    pub fn identity(g: &FiniteGroup) -> Self {
        Involution {
            map: (0..g.order()).collect(),
        }
    }

    /// Validates an explicit element map.
    pub fn from_map(g: &FiniteGroup, map: Vec<usize>) -> Result<Self> {
        let c = Involution { map };
        c.validate(g)?;
        Ok(c)
    }

    /// `g ↦ g^{-1}`; an automorphism exactly when `G` is abelian.
    pub fn inversion(g: &FiniteGroup) -> Result<Self> {
        if !g.is_abelian() {
            return Err(Error::input("inversion is an automorphism only of abelian groups"));
        }
        Self::from_map(g, (0..g.order()).map(|a| g.inv(a)).collect())
    }

    /// Extends prescribed images of the group's generators multiplicatively.
    pub fn from_generator_images(g: &FiniteGroup, images: &[usize]) -> Result<Self> {
        let gens = g.generators();
        if images.len() != gens.len() {
            return Err(Error::input(format!(
                "expected {} generator images, got {}",
                gens.len(),
                images.len()
            )));
        }
        let n = g.order();
        let mut map = vec![usize::MAX; n];
        map[0] = 0;
        let mut queue = vec![0usize];
        let mut i = 0;
        while i < queue.len() {
            let x = queue[i];
            for (k, &s) in gens.iter().enumerate() {
                let y = g.mul(x, s);
                if map[y] == usize::MAX {
                    map[y] = g.mul(map[x], images[k]);
                    queue.push(y);
                }
            }
            i += 1;
        }
        Self::from_map(g, map)
    }

    /// Conjugation `g ↦ m·g·m^{-1}` by an ambient element `m` normalising `G`.
    pub fn conjugation(g: &FiniteGroup, conjugator: &[u64]) -> Result<Self> {
        let amb = g.ambient();
        let m = amb.canonicalize(conjugator)?;
        let minv = amb.inverse(&m);
        let map = (0..g.order())
            .map(|a| {
                let img = amb.multiply(&amb.multiply(&m, g.label(a)), &minv);
                g.index_of(&img)
                    .ok_or_else(|| Error::input("conjugator does not normalise the group"))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_map(g, map)
    }

    /// Checks bijectivity, the homomorphism property on generators (which
    /// suffices for a bijection of a finite group), and `c∘c = id`.
    pub fn validate(&self, g: &FiniteGroup) -> Result<()> {
        let n = g.order();
        if self.map.len() != n || self.map.iter().any(|&x| x >= n) {
            return Err(Error::input("map is not defined on every element"));
        }
        let mut seen = vec![false; n];
        for &x in &self.map {
            if std::mem::replace(&mut seen[x], true) {
                return Err(Error::input("map is not a bijection"));
            }
        }
        for x in 0..n {
            for &s in g.generators() {
                if self.map[g.mul(x, s)] != g.mul(self.map[x], self.map[s]) {
                    return Err(Error::input("map is not multiplicative"));
                }
            }
        }
        if (0..n).any(|x| self.map[self.map[x]] != x) {
            return Err(Error::input("map has order greater than 2"));
        }
        Ok(())
    }

    #[inline]
    pub fn apply(&self, a: usize) -> usize {
        self.map[a]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// Action on conjugacy classes.
    pub fn class_permutation(&self, g: &FiniteGroup) -> Vec<usize> {
        let cl = g.classes();
        (0..cl.len())
            .map(|i| cl.class_of[self.map[cl.representative(i)]])
            .collect()
    }

    /// Restriction to a `c`-stable subgroup, in the subgroup's own indexing.
    pub fn restrict(&self, sub: &EmbeddedSubgroup) -> Result<Involution> {
        let map = (0..sub.group.order())
            .map(|h| {
                sub.locate(self.map[sub.embedding[h]])
                    .ok_or_else(|| Error::pre("subgroup is not stable under the involution"))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Involution { map })
    }
}
