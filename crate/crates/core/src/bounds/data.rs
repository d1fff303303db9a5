//! Curve and quadratic-field records. Everything here is consumed as input;
//! only the internal consistency of each record is checked on load.

use std::collections::BTreeMap;
use std::io::Read;

use serde::{Deserialize, Serialize};

use super::symbols::{is_fundamental_discriminant, kronecker};
use crate::error::{Error, Result};
use crate::modarith::{factorize, is_prime};

const CURVES_CSV: &str = include_str!("../../data/curves.csv");
const FIELDS_CSV: &str = include_str!("../../data/fields.csv");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Reduction {
    Ordinary,
    Supersingular,
    Bad,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurveData {
    pub label: String,
    pub ainvariants: Option<[i64; 5]>,
    pub conductor: u64,
    pub bad_primes: Vec<u64>,
    pub reduction: BTreeMap<u64, Reduction>,
    pub torsion: Option<u64>,
    pub torsion_point: Option<(i64, i64)>,
    pub cm: bool,
    /// `p -> [Q(A[p]) : Q(μ_p)]`
    pub division_degree: BTreeMap<u64, u64>,
}

impl CurveData {
    /// Reduction type at `p`; bad primes are known from the conductor
    /// even without an explicit entry.
    pub fn reduction_at(&self, p: u64) -> Option<Reduction> {
        if self.bad_primes.contains(&p) {
            return Some(Reduction::Bad);
        }
        self.reduction.get(&p).copied()
    }

    pub fn has_p_torsion(&self, p: u64) -> Option<bool> {
        self.torsion.map(|t| t % p == 0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuadFieldData {
    pub label: String,
    pub discriminant: i64,
    /// Cyclic factors of the class group, when known.
    pub class_group: Option<Vec<u64>>,
    /// Set when the row stands for `Q(μ_p)`; the discriminant is then
    /// that of its quadratic subfield.
    pub cyclotomic_p: Option<u64>,
    pub p_regular: Option<bool>,
    pub tower_infinite: Option<bool>,
}

impl QuadFieldData {
    pub fn is_imaginary(&self) -> bool {
        self.discriminant < 0
    }

    /// The quadratic character `m ↦ (D|m)`.
    pub fn chi(&self, m: i64) -> i8 {
        kronecker(self.discriminant, m).expect("discriminant is nonzero")
    }

    pub fn class_number(&self) -> Option<u64> {
        self.class_group.as_ref().map(|c| c.iter().product())
    }

    /// Order of the `p`-part of the class group.
    pub fn class_group_p_part(&self, p: u64) -> Option<u64> {
        self.class_group.as_ref().map(|c| {
            c.iter()
                .map(|&m| {
                    let mut q = 1;
                    let mut m = m;
                    while m % p == 0 {
                        m /= p;
                        q *= p;
                    }
                    q
                })
                .product()
        })
    }
}

#[derive(Deserialize)]
struct CurveRow {
    label: String,
    #[serde(default)]
    ainvariants: String,
    conductor: u64,
    #[serde(default)]
    bad_primes: String,
    #[serde(default)]
    reduction: String,
    #[serde(default)]
    torsion: Option<u64>,
    #[serde(default)]
    torsion_point: String,
    #[serde(default)]
    cm: Option<bool>,
    #[serde(default)]
    division_degree: String,
}

#[derive(Deserialize)]
struct FieldRow {
    label: String,
    discriminant: i64,
    #[serde(default)]
    class_group: String,
    #[serde(default)]
    cyclotomic_p: Option<u64>,
    #[serde(default)]
    p_regular: Option<bool>,
    #[serde(default)]
    tower_infinite: Option<bool>,
}

fn ints<T: std::str::FromStr>(s: &str, what: &str, label: &str) -> Result<Vec<T>> {
    s.split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::Data(format!("{label}: bad {what} entry `{t}`"))))
        .collect()
}

fn prime_map<T>(s: &str, label: &str, parse: impl Fn(&str) -> Option<T>) -> Result<BTreeMap<u64, T>> {
    s.split_whitespace()
        .map(|kv| {
            let (k, v) = kv.split_once(':').ok_or_else(|| Error::Data(format!("{label}: expected p:value, got `{kv}`")))?;
            let p: u64 = k.parse().map_err(|_| Error::Data(format!("{label}: bad prime `{k}`")))?;
            let v = parse(v).ok_or_else(|| Error::Data(format!("{label}: bad value `{v}`")))?;
            Ok((p, v))
        })
        .collect()
}

impl CurveRow {
    fn into_data(self) -> Result<CurveData> {
        let label = self.label;
        let ainvariants = match ints::<i64>(&self.ainvariants, "a-invariant", &label)?.as_slice() {
            [] => None,
            &[a1, a2, a3, a4, a6] => Some([a1, a2, a3, a4, a6]),
            _ => return Err(Error::Data(format!("{label}: expected five a-invariants"))),
        };
        let mut bad_primes = ints::<u64>(&self.bad_primes, "bad prime", &label)?;
        bad_primes.sort_unstable();
        let expected: Vec<u64> = factorize(self.conductor).into_iter().map(|(q, _)| q).collect();
        if self.conductor == 0 || bad_primes != expected {
            return Err(Error::Data(format!(
                "{label}: bad primes {bad_primes:?} are not the prime divisors of {}",
                self.conductor
            )));
        }
        let reduction = prime_map(&self.reduction, &label, |v| match v {
            "ordinary" => Some(Reduction::Ordinary),
            "supersingular" => Some(Reduction::Supersingular),
            "bad" => Some(Reduction::Bad),
            _ => None,
        })?;
        for (&p, &r) in &reduction {
            if (r == Reduction::Bad) != bad_primes.contains(&p) {
                return Err(Error::Data(format!("{label}: reduction at {p} disagrees with the conductor")));
            }
        }
        let torsion_point = match ints::<i64>(&self.torsion_point, "coordinate", &label)?.as_slice() {
            [] => None,
            &[x, y] => Some((x, y)),
            _ => return Err(Error::Data(format!("{label}: torsion point needs two coordinates"))),
        };
        let division_degree = prime_map(&self.division_degree, &label, |v| v.parse().ok())?;
        Ok(CurveData {
            label,
            ainvariants,
            conductor: self.conductor,
            bad_primes,
            reduction,
            torsion: self.torsion,
            torsion_point,
            cm: self.cm.unwrap_or(false),
            division_degree,
        })
    }
}

impl FieldRow {
    fn into_data(self) -> Result<QuadFieldData> {
        let label = self.label;
        if !is_fundamental_discriminant(self.discriminant) {
            return Err(Error::Data(format!("{label}: {} is not a fundamental discriminant", self.discriminant)));
        }
        let class_group = match self.class_group.trim() {
            "" => None,
            s => Some(ints::<u64>(s, "class group", &label)?),
        };
        if class_group.as_ref().is_some_and(|c| c.contains(&0)) {
            return Err(Error::Data(format!("{label}: zero class group factor")));
        }
        if let Some(p) = self.cyclotomic_p {
            if !is_prime(p) || p == 2 {
                return Err(Error::Data(format!("{label}: cyclotomic prime {p} must be odd")));
            }
            let sub = if p % 4 == 1 { p as i64 } else { -(p as i64) };
            if self.discriminant != sub {
                return Err(Error::Data(format!(
                    "{label}: the quadratic subfield of Q(mu_{p}) has discriminant {sub}"
                )));
            }
        }
        Ok(QuadFieldData {
            label,
            discriminant: self.discriminant,
            class_group,
            cyclotomic_p: self.cyclotomic_p,
            p_regular: self.p_regular,
            tower_infinite: self.tower_infinite,
        })
    }
}

/// Reads curve records from CSV with a header row; unknown columns are ignored.
pub fn read_curves<R: Read>(reader: R) -> Result<Vec<CurveData>> {
    csv::Reader::from_reader(reader)
        .deserialize::<CurveRow>()
        .map(|row| row.map_err(|e| Error::Data(e.to_string()))?.into_data())
        .collect()
}

/// Reads quadratic-field records from CSV with a header row.
pub fn read_fields<R: Read>(reader: R) -> Result<Vec<QuadFieldData>> {
    csv::Reader::from_reader(reader)
        .deserialize::<FieldRow>()
        .map(|row| row.map_err(|e| Error::Data(e.to_string()))?.into_data())
        .collect()
}

/// The bundled curve table.
pub fn bundled_curves() -> Vec<CurveData> {
    read_curves(CURVES_CSV.as_bytes()).expect("bundled curves.csv is valid")
}

/// The bundled field table.
pub fn bundled_fields() -> Vec<QuadFieldData> {
    read_fields(FIELDS_CSV.as_bytes()).expect("bundled fields.csv is valid")
}

/// Case-insensitive lookup by label.
pub fn find_curve(label: &str) -> Result<CurveData> {
    bundled_curves()
        .into_iter()
        .find(|c| c.label.eq_ignore_ascii_case(label))
        .ok_or_else(|| Error::input(format!("unknown curve label `{label}`")))
}

pub fn find_field(label: &str) -> Result<QuadFieldData> {
    bundled_fields()
        .into_iter()
        .find(|f| f.label.eq_ignore_ascii_case(label))
        .ok_or_else(|| Error::input(format!("unknown field label `{label}`")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_tables_load() {
        let curves = bundled_curves();
        assert!(curves.len() >= 5);
        let a = find_curve("91B2").unwrap();
        assert_eq!(a.bad_primes, vec![7, 13]);
        assert_eq!(a.division_degree.get(&3), Some(&1));
        assert_eq!(a.reduction_at(7), Some(Reduction::Bad));
        let big = find_curve("499547134a").unwrap();
        assert_eq!(big.bad_primes, vec![2, 127, 743, 2647]);
        let k = find_field("d-4019207").unwrap();
        assert_eq!(k.class_group_p_part(3), Some(81));
        assert_eq!(k.class_number(), Some(1863));
        assert!(find_curve("nope").is_err());
    }

    #[test]
    fn bad_rows_are_rejected() {
        let csv = "label,conductor,bad_primes\nx,91,7\n";
        assert!(matches!(read_curves(csv.as_bytes()), Err(Error::Data(_))));
        let csv = "label,discriminant,extra\ny,-12,whatever\n";
        assert!(matches!(read_fields(csv.as_bytes()), Err(Error::Data(_))));
        let csv = "label,discriminant,color\ny,-8,blue\n";
        assert_eq!(read_fields(csv.as_bytes()).unwrap()[0].discriminant, -8);
    }
}
