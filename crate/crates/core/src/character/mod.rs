//! Class functions, character tables and the standard operations on them.

pub mod dixon;
mod ops;

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::cyclotomic::{Cyclotomic, CyclotomicJson, Rational};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;

pub use ops::{c_twist, induce, inner_product, mackey_irreducible, restrict};

pub const TABLE_SCHEMA_VERSION: u32 = 1;

/// A function on the conjugacy classes of a group, one value per class in
/// the group's class order. Characters are class functions; irreducibility
/// is a property checked against a table, never a stored flag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassFunction {
    values: Vec<Cyclotomic>,
}

impl ClassFunction {
    pub fn new(values: Vec<Cyclotomic>) -> Self {
        ClassFunction { values }
    }

    pub fn trivial(g: &FiniteGroup) -> Self {
        let e = g.exponent() as u32;
        Self::new(vec![Cyclotomic::from_int(e, 1); g.classes().len()])
    }

    /// The regular character: `|G|` at the identity, 0 elsewhere.
    pub fn regular(g: &FiniteGroup) -> Self {
        let e = g.exponent() as u32;
        let mut v = vec![Cyclotomic::zero(e); g.classes().len()];
        v[0] = Cyclotomic::from_int(e, g.order() as i64);
        Self::new(v)
    }

    pub fn values(&self) -> &[Cyclotomic] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Value at the identity class, when it is an integer.
    pub fn degree(&self) -> Option<i64> {
        self.values.first().and_then(Cyclotomic::to_integer)
    }

    pub fn conj(&self) -> Self {
        Self::new(self.values.iter().map(Cyclotomic::conj).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, r: Rational) -> Self {
        Self::new(self.values.iter().map(|a| a.scale(r)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect())
    }

    /// Integer values per class, if every value is a rational integer.
    pub fn integer_values(&self) -> Option<Vec<i64>> {
        self.values.iter().map(Cyclotomic::to_integer).collect()
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(Cyclotomic::is_real)
    }

    fn canonical_key(&self) -> Vec<Vec<Rational>> {
        self.values.iter().map(Cyclotomic::canonical).collect()
    }

    pub fn to_json(&self) -> Vec<CyclotomicJson> {
        self.values.iter().map(Cyclotomic::to_json).collect()
    }

    pub fn from_json(values: &[CyclotomicJson]) -> Result<Self> {
        Ok(Self::new(values.iter().map(Cyclotomic::from_json).collect::<Result<_>>()?))
    }
}

/// All irreducible characters of a group, exact and verified.
///
/// Irreducibles are ordered by degree, then with the trivial character
/// first, then by descending canonical value vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterTable {
    pub group_order: usize,
    pub conductor: u32,
    /// The prime used for the modular computation.
    pub prime: u64,
    pub class_sizes: Vec<usize>,
    pub irreducibles: Vec<ClassFunction>,
}

fn table_order(a: &ClassFunction, b: &ClassFunction) -> Ordering {
    let is_trivial = |x: &ClassFunction| x.values.iter().all(|v| v.to_integer() == Some(1));
    a.degree()
        .cmp(&b.degree())
        .then_with(|| is_trivial(b).cmp(&is_trivial(a)))
        .then_with(|| b.canonical_key().cmp(&a.canonical_key()))
}

impl CharacterTable {
    /// Computes the table and verifies it exactly.
    pub fn compute(g: &FiniteGroup) -> Result<Self> {
        let (prime, rows) = dixon::dixon(g)?;
        let mut irreducibles: Vec<ClassFunction> = rows.into_iter().map(ClassFunction::new).collect();
        irreducibles.sort_by(table_order);
        let table = CharacterTable {
            group_order: g.order(),
            conductor: g.exponent() as u32,
            prime,
            class_sizes: (0..g.classes().len()).map(|i| g.classes().size(i)).collect(),
            irreducibles,
        };
        table.verify(g)?;
        Ok(table)
    }

    pub fn len(&self) -> usize {
        self.irreducibles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.irreducibles.is_empty()
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.irreducibles.iter().map(|c| c.degree().unwrap_or(0)).collect()
    }

    /// Index of an irreducible equal to `chi`.
    pub fn position(&self, chi: &ClassFunction) -> Option<usize> {
        self.irreducibles.iter().position(|x| x == chi)
    }

    /// Multiplicities `⟨f, χ⟩` over all irreducibles.
    pub fn decompose(&self, g: &FiniteGroup, f: &ClassFunction) -> Result<Vec<Rational>> {
        self.irreducibles.iter().map(|chi| inner_product(g, f, chi)).collect()
    }

    /// Exact checks: class count, degree sum of squares, and both
    /// orthogonality relations.
    pub fn verify(&self, g: &FiniteGroup) -> Result<()> {
        let cl = g.classes();
        let k = cl.len();
        if self.irreducibles.len() != k || self.class_sizes.len() != k {
            return Err(Error::consistency("number of irreducibles differs from number of classes"));
        }
        let degrees = self.degrees();
        if degrees.iter().any(|&d| d <= 0) || degrees.iter().map(|d| d * d).sum::<i64>() != g.order() as i64 {
            return Err(Error::consistency("sum of squared degrees differs from the group order"));
        }
        let e = self.conductor;
        let rows: Vec<Vec<Vec<i64>>> = self
            .irreducibles
            .iter()
            .map(|chi| {
                chi.values
                    .iter()
                    .map(|v| v.lift_to(e).and_then(|x| x.integer_coeffs()))
                    .collect::<Option<Vec<_>>>()
            })
            .collect::<Option<_>>()
            .ok_or_else(|| Error::consistency("table values are not integral combinations of roots"))?;
        let conj = |v: &[i64]| -> Vec<i64> {
            let n = v.len();
            (0..n).map(|t| v[(n - t) % n]).collect()
        };
        let rows_conj: Vec<Vec<Vec<i64>>> = rows.iter().map(|r| r.iter().map(|v| conj(v)).collect()).collect();
        let mul_acc = |acc: &mut [i64], a: &[i64], b: &[i64], w: i64| {
            let n = acc.len();
            for (i, &x) in a.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                for (j, &y) in b.iter().enumerate() {
                    if y != 0 {
                        acc[(i + j) % n] += w * x * y;
                    }
                }
            }
        };
        let is_scalar = |acc: &[i64], target: i64| {
            let c = Cyclotomic::canonical_of_integers(e, acc);
            c[0] == target && c[1..].iter().all(|&x| x == 0)
        };
        let n = g.order() as i64;
        for a in 0..k {
            for b in a..k {
                let mut acc = vec![0i64; e as usize];
                for i in 0..k {
                    mul_acc(&mut acc, &rows[a][i], &rows_conj[b][i], cl.size(i) as i64);
                }
                if !is_scalar(&acc, if a == b { n } else { 0 }) {
                    return Err(Error::consistency(format!("rows {a} and {b} are not orthonormal")));
                }
            }
        }
        for i in 0..k {
            for j in i..k {
                let mut acc = vec![0i64; e as usize];
                for r in 0..k {
                    mul_acc(&mut acc, &rows[r][i], &rows_conj[r][j], 1);
                }
                let target = if i == j { g.centralizer_order(i) as i64 } else { 0 };
                if !is_scalar(&acc, target) {
                    return Err(Error::consistency(format!("columns {i} and {j} are not orthogonal")));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self, g: &FiniteGroup) -> TableJson {
        let cl = g.classes();
        TableJson {
            schema_version: TABLE_SCHEMA_VERSION,
            group_order: self.group_order,
            conductor: self.conductor,
            prime: self.prime,
            classes: (0..cl.len())
                .map(|i| ClassJson {
                    representative: g.render(cl.representative(i)),
                    size: cl.size(i),
                    element_order: g.element_order(cl.representative(i)),
                })
                .collect(),
            irreducibles: self.irreducibles.iter().map(ClassFunction::to_json).collect(),
        }
    }

    /// Rebuilds a table from JSON for the given group, re-verifying it.
    pub fn from_json(g: &FiniteGroup, j: &TableJson) -> Result<Self> {
        if j.schema_version != TABLE_SCHEMA_VERSION {
            return Err(Error::Data(format!("unsupported table schema version {}", j.schema_version)));
        }
        let cl = g.classes();
        let matches = j.group_order == g.order()
            && j.classes.len() == cl.len()
            && j.classes.iter().enumerate().all(|(i, c)| {
                c.size == cl.size(i) && c.representative == g.render(cl.representative(i))
            });
        if !matches {
            return Err(Error::Data("table does not describe this group".into()));
        }
        let table = CharacterTable {
            group_order: j.group_order,
            conductor: j.conductor,
            prime: j.prime,
            class_sizes: j.classes.iter().map(|c| c.size).collect(),
            irreducibles: j
                .irreducibles
                .iter()
                .map(|r| ClassFunction::from_json(r))
                .collect::<Result<_>>()?,
        };
        table.verify(g)?;
        Ok(table)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassJson {
    pub representative: String,
    pub size: usize,
    pub element_order: u64,
}

/// Serialized character table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableJson {
    pub schema_version: u32,
    pub group_order: usize,
    pub conductor: u32,
    pub prime: u64,
    pub classes: Vec<ClassJson>,
    pub irreducibles: Vec<Vec<CyclotomicJson>>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::spec::parse_group_spec;
    use crate::group::{Ambient, DEFAULT_SIZE_CAP};

    fn table(s: &str) -> (FiniteGroup, CharacterTable) {
        let (g, _) = parse_group_spec(s).unwrap().build().unwrap();
        let t = CharacterTable::compute(&g).unwrap();
        (g, t)
    }

    #[test]
    fn cyclic_three() {
        let (_, t) = table("cyclic:p=3,k=1");
        assert_eq!(t.degrees(), vec![1, 1, 1]);
        assert_eq!(t.irreducibles[0].values()[1], Cyclotomic::from_int(3, 1));
    }

    #[test]
    fn heisenberg_degree_profile() {
        let (_, t) = table("extraspecial:p=3,exp=p");
        let mut d = t.degrees();
        d.sort();
        assert_eq!(d, [vec![1; 9], vec![3; 2]].concat());
    }

    #[test]
    fn symmetric_group_s3() {
        let (_, t) = table("perm:gens=[(0 1 2),(0 1)]");
        assert_eq!(t.degrees(), vec![1, 1, 2]);
        for chi in &t.irreducibles {
            assert!(chi.integer_values().is_some());
        }
    }

    #[test]
    fn gl2_f3_table() {
        let g = FiniteGroup::generate(
            Ambient::Matrix { dim: 2, modulus: 3 },
            &[vec![1, 1, 0, 1], vec![1, 0, 1, 1], vec![2, 0, 0, 1]],
            DEFAULT_SIZE_CAP,
        )
        .unwrap();
        let t = CharacterTable::compute(&g).unwrap();
        assert_eq!(t.degrees(), vec![1, 1, 2, 2, 2, 3, 3, 4]);
    }

    #[test]
    fn json_round_trip() {
        let (g, t) = table("extraspecial:p=3,exp=p2");
        let j = t.to_json(&g);
        let text = serde_json::to_string(&j).unwrap();
        let back: TableJson = serde_json::from_str(&text).unwrap();
        assert_eq!(CharacterTable::from_json(&g, &back).unwrap(), t);
    }
}
