//! Quadratic characters, parity predictions and Selmer-rank lower bounds.

pub mod data;
pub mod symbols;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::cyclotomic::{format_rational, Rational};
use crate::error::{Error, Result};
use crate::modarith::{is_prime, prime_power};

pub use data::{
    bundled_curves, bundled_fields, find_curve, find_field, read_curves, read_fields, CurveData, QuadFieldData,
    Reduction,
};
pub use symbols::{is_fundamental_discriminant, kronecker, mult_order};

pub const BOUND_SCHEMA_VERSION: u32 = 1;

/// Exact values with more digits than this are shown only as `p^e`.
const MAX_DECIMAL_EXPONENT: u64 = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Proved,
    Conjectural,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParityVerdict {
    /// `None` when the hypothesis `χ_K(N_E) ≠ 0` fails.
    pub parity: Option<Parity>,
    pub status: Status,
    /// The symbol the verdict was read from.
    pub symbol: i8,
    pub evidence: String,
}

/// Parity of the `p`-Selmer rank of `E` over `K` from `χ_K(-N_E)`.
pub fn parity_nekim(e: &CurveData, k: &QuadFieldData) -> ParityVerdict {
    let n = e.conductor as i64;
    if k.chi(n) == 0 {
        return ParityVerdict {
            parity: None,
            status: Status::Proved,
            symbol: 0,
            evidence: format!("conductor {n} is not prime to disc {}", k.discriminant),
        };
    }
    let s = k.chi(-n);
    ParityVerdict {
        parity: Some(if s == -1 { Parity::Odd } else { Parity::Even }),
        status: Status::Proved,
        symbol: s,
        evidence: format!("chi_K(-{n}) = {s}"),
    }
}

/// Base field for the root-number parity formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SelparBase {
    /// `k = Q`; the ramified archimedean count is 1 for imaginary `K`, else 0.
    Rationals,
    /// Any other base, with the count of ramified archimedean places given.
    Other { h: u32 },
}

/// Parity predicted by `χ_{K/k}(n_E) = (-1)^{h+1}` ⇔ odd.
pub fn parity_selpar(e: &CurveData, k: &QuadFieldData, base: SelparBase) -> ParityVerdict {
    let n = e.conductor as i64;
    let s = k.chi(n);
    let (h, status) = match base {
        SelparBase::Rationals => (u32::from(k.is_imaginary()), Status::Proved),
        SelparBase::Other { h } => (h, Status::Conjectural),
    };
    let odd_sign = if h % 2 == 1 { 1 } else { -1 };
    ParityVerdict {
        parity: (s != 0).then(|| if s == odd_sign { Parity::Odd } else { Parity::Even }),
        status,
        symbol: s,
        evidence: if s == 0 {
            format!("conductor {n} is not prime to disc {}", k.discriminant)
        } else {
            format!("chi(N) = {s}, h = {h}")
        },
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub evidence: String,
}

impl Check {
    fn new(name: &str, passed: bool, evidence: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            evidence: evidence.into(),
        }
    }
}

/// `base^exponent`, shown in decimal when small enough.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimePower {
    pub base: u64,
    pub exponent: BigUint,
}

impl PrimePower {
    pub fn new(base: u64, exponent: impl Into<BigUint>) -> Self {
        PrimePower {
            base,
            exponent: exponent.into(),
        }
    }

    /// The exact value, if the exponent is below the display limit.
    pub fn value(&self) -> Option<BigUint> {
        let e = self.exponent.to_u64().filter(|&e| e <= MAX_DECIMAL_EXPONENT)?;
        Some(BigUint::from(self.base).pow(e as u32))
    }
}

impl Serialize for PrimePower {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("PrimePower", 3)?;
        st.serialize_field("base", &self.base)?;
        st.serialize_field("exponent", &self.exponent.to_string())?;
        st.serialize_field("value", &self.value().map(|v| v.to_string()))?;
        st.end()
    }
}

impl std::fmt::Display for PrimePower {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.value() {
            Some(v) if self.exponent <= BigUint::from(64u32) => write!(f, "{v}"),
            _ => write!(f, "{}^{}", self.base, self.exponent),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Eccor,
    Divfields,
    Prational,
    Hilbert,
}

/// Dimensions read off the bound exponent: total, fixed, and their difference.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Dimensions {
    pub total: u64,
    pub fixed: u64,
    pub exponent: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundRow {
    pub n: u32,
    /// Exact decimal (or rational) value, or an expression in a symbolic `B`.
    pub bound: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group_order: Option<PrimePower>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fixed_order: Option<PrimePower>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index: Option<PrimePower>,
}

impl BoundRow {
    fn plain(n: u32, bound: String) -> Self {
        BoundRow {
            n,
            bound,
            group_order: None,
            fixed_order: None,
            index: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub schema_version: u32,
    pub kind: BoundKind,
    pub p: u64,
    pub checklist: Vec<Check>,
    pub passed: bool,
    /// Exact constant, or `"B > 0"` when only existence is known.
    pub constant: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dimensions: Option<Dimensions>,
    /// Empty unless every checklist item passed.
    pub rows: Vec<BoundRow>,
}

impl BoundReport {
    fn new(kind: BoundKind, p: u64, checklist: Vec<Check>, constant: String) -> Self {
        let passed = checklist.iter().all(|c| c.passed);
        BoundReport {
            schema_version: BOUND_SCHEMA_VERSION,
            kind,
            p,
            checklist,
            passed,
            constant,
            dimensions: None,
            rows: Vec::new(),
        }
    }
}

fn require_odd_prime(p: u64) -> Result<()> {
    if p == 2 || !is_prime(p) {
        return Err(Error::input(format!("p = {p} must be an odd prime")));
    }
    Ok(())
}

fn require_levels(ns: &[u32]) -> Result<()> {
    if ns.is_empty() {
        return Err(Error::input("the list of levels n is empty"));
    }
    if ns.contains(&0) {
        return Err(Error::input("levels start at n = 1"));
    }
    Ok(())
}

/// `c · p^k` as an exact string.
fn scaled_power(c: Rational, p: u64, k: u64) -> String {
    let pk = BigUint::from(p).pow(k as u32);
    let num = BigUint::from(c.numer().unsigned_abs()) * pk;
    let den = BigUint::from(c.denom().unsigned_abs());
    let g = num_integer::Integer::gcd(&num, &den);
    let (num, den) = (num / &g, den / g);
    if den.is_one() {
        num.to_string()
    } else {
        format!("{num}/{den}")
    }
}

/// Hypotheses and bound for the division-field tower of `A` at `p` with
/// coefficients in `E`.
pub fn eccor_check(a: &CurveData, e: &CurveData, p: u64, ns: &[u32]) -> Result<BoundReport> {
    require_odd_prime(p)?;
    require_levels(ns)?;
    let mut checklist = Vec::new();
    checklist.push(match a.has_p_torsion(p) {
        Some(t) => Check::new(
            "A has a rational point of order p",
            t,
            format!("torsion order {}", a.torsion.unwrap_or(0)),
        ),
        None => Check::new("A has a rational point of order p", false, "torsion not recorded"),
    });
    checklist.push(Check::new("A is not CM", !a.cm, if a.cm { "CM flag set" } else { "non-CM" }));
    let red = e.reduction_at(p);
    checklist.push(Check::new(
        "E has good ordinary reduction at p",
        red == Some(Reduction::Ordinary),
        match red {
            Some(r) => format!("{r:?} at {p}").to_lowercase(),
            None => format!("no reduction data at {p}"),
        },
    ));
    let common: Vec<u64> = e.bad_primes.iter().copied().filter(|l| a.bad_primes.contains(l)).collect();
    let mut orders = Vec::new();
    let mut odd = true;
    for &l in &common {
        match mult_order(l as i64, p) {
            Ok(o) => {
                odd &= o % 2 == 1;
                orders.push(format!("ord({l}) = {o}"));
            }
            Err(_) => {
                odd = false;
                orders.push(format!("{l} = p"));
            }
        }
    }
    checklist.push(Check::new(
        "common bad primes have odd order mod p",
        odd,
        if common.is_empty() {
            "no common bad primes".to_string()
        } else {
            orders.join(", ")
        },
    ));
    let s = kronecker(-(e.conductor as i64), p as i64)?;
    checklist.push(Check::new(
        "-N_E is not a square mod p",
        s == -1,
        format!("(-{} | {p}) = {s}", e.conductor),
    ));

    let degree = a.division_degree.get(&p).copied();
    let constant = match degree {
        Some(d) => format_rational(&Rational::new(d as i64, (p * p) as i64)),
        None => "B > 0".to_string(),
    };
    let mut report = BoundReport::new(BoundKind::Eccor, p, checklist, constant);
    report.dimensions = Some(Dimensions {
        total: 3,
        fixed: 1,
        exponent: 2,
    });
    if report.passed {
        report.rows = ns
            .iter()
            .map(|&n| {
                let bound = match degree {
                    Some(d) => scaled_power(Rational::from_integer(d as i64), p, 2 * n as u64 - 2),
                    None => format!("B*{p}^{}", 2 * n),
                };
                BoundRow::plain(n, bound)
            })
            .collect();
    }
    Ok(report)
}

/// `B · p^{(d²+d)n}` for the symplectic division-field tower of dimension `2d`.
pub fn divfields_bound(d: u64, p: u64, ns: &[u32], b: Option<Rational>) -> Result<BoundReport> {
    if d == 0 || !(d % 2 == 1 || d == 2 || d == 6) {
        return Err(Error::input(format!("d = {d} must be odd, 2 or 6")));
    }
    require_odd_prime(p)?;
    require_levels(ns)?;
    if b.is_some_and(|b| b <= Rational::zero()) {
        return Err(Error::input("B must be positive"));
    }
    let dims = Dimensions {
        total: 2 * d * d + d,
        fixed: d * d,
        exponent: d * d + d,
    };
    let checklist = vec![Check::new("d is odd, 2 or 6", true, format!("d = {d}"))];
    let mut report = BoundReport::new(
        BoundKind::Divfields,
        p,
        checklist,
        b.map_or_else(|| "B > 0".to_string(), |b| format_rational(&b)),
    );
    report.dimensions = Some(dims);
    report.rows = ns
        .iter()
        .map(|&n| {
            let k = dims.exponent * n as u64;
            let bound = match b {
                Some(b) => scaled_power(b, p, k),
                None => format!("B*{p}^{k}"),
            };
            BoundRow::plain(n, bound)
        })
        .collect();
    Ok(report)
}

/// One level of the free pro-`p` tower, in exponent form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TowerRow {
    pub n: u32,
    pub group_order: PrimePower,
    pub fixed_order: PrimePower,
    pub index: PrimePower,
    /// `[G_n : G_n⁺] ≥ sqrt|G_n|`
    pub sqrt_bound: bool,
    /// `[G_n : G_n⁺] ≥ |G_n⁺|`
    pub index_dominates: bool,
}

/// Largest level accepted; the exponents grow like towers of `p`.
pub const MAX_TOWER_LEVEL: u32 = 3;

/// Iterates `|G_{n+1}| = p^{|G_n|+1}|G_n|`, `|G_{n+1}⁺| = p^{(|G_n|-|G_n⁺|)/2+1}|G_n⁺|`
/// from `|G_0| = |G_0⁺| = 1`. Rows `1..=n_max`, kept as exponents of `p`.
pub fn prational_tower(p: u64, n_max: u32) -> Result<Vec<TowerRow>> {
    if p < 5 || !is_prime(p) {
        return Err(Error::input(format!("p = {p} must be a prime >= 5")));
    }
    if n_max > MAX_TOWER_LEVEL {
        return Err(Error::input(format!("n_max is limited to {MAX_TOWER_LEVEL}")));
    }
    let pow = |e: &BigUint| -> Result<BigUint> {
        let e = e
            .to_u32()
            .ok_or_else(|| Error::input("level too deep to evaluate |G_n| exactly"))?;
        Ok(BigUint::from(p).pow(e))
    };
    let (mut a, mut b, mut c) = (BigUint::zero(), BigUint::zero(), BigUint::zero());
    let mut rows = Vec::new();
    for n in 1..=n_max {
        // Only the exponents are stored; p^a must exist to take the next step.
        let (ga, gb) = (pow(&a)?, pow(&b)?);
        let (na, nb, nc) = (
            &ga + 1u32 + &a,
            (&ga - &gb) / 2u32 + 1u32 + &b,
            (&ga + &gb) / 2u32 + &c,
        );
        a = na;
        b = nb;
        c = nc;
        if &b + &c != a {
            return Err(Error::consistency("|G_n| != |G_n+| [G_n : G_n+]"));
        }
        rows.push(TowerRow {
            n,
            sqrt_bound: BigUint::from(2u32) * &c >= a,
            index_dominates: c >= b,
            group_order: PrimePower::new(p, a.clone()),
            fixed_order: PrimePower::new(p, b.clone()),
            index: PrimePower::new(p, c.clone()),
        });
    }
    Ok(rows)
}

/// Bound report for the free pro-`p` tower. When a field is given, its
/// `p`-rationality criterion is added to the checklist.
pub fn prational_report(p: u64, ns: &[u32], field: Option<&QuadFieldData>) -> Result<BoundReport> {
    require_levels(ns)?;
    let n_max = *ns.iter().max().unwrap();
    let table = prational_tower(p, n_max)?;
    let mut checklist = vec![Check::new("p >= 5", true, format!("p = {p}"))];
    if let Some(k) = field {
        let crit = prational_criteria(k, p);
        checklist.push(Check::new(
            "K is p-rational",
            crit.verdict == Verdict::True,
            format!("{:?}: {}", crit.verdict, crit.reason).to_lowercase(),
        ));
    }
    let all_rows = table.iter().all(|r| r.sqrt_bound && r.index_dominates);
    checklist.push(Check::new(
        "index >= sqrt|G_n| at every level",
        all_rows,
        format!("levels 1..={n_max}"),
    ));
    let mut report = BoundReport::new(BoundKind::Prational, p, checklist, "1".into());
    if report.passed {
        report.rows = ns
            .iter()
            .map(|&n| {
                let r = &table[n as usize - 1];
                BoundRow {
                    n,
                    bound: r.index.to_string(),
                    group_order: Some(r.group_order.clone()),
                    fixed_order: Some(r.fixed_order.clone()),
                    index: Some(r.index.clone()),
                }
            })
            .collect();
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertRow {
    pub n: usize,
    pub degree: u64,
    pub group_order: BigUint,
    pub fixed_order: BigUint,
    pub index: BigUint,
}

/// `|G_n⁺|` and `[G_n : G_n⁺]` from the step degrees `[H_i : H_{i-1}]`:
/// even positions (1-based) multiply into `|G_n⁺|`, odd positions into the index.
pub fn hilbert_tower_indices(degrees: &[u64]) -> Result<Vec<HilbertRow>> {
    let mut prime: Option<u64> = None;
    for &d in degrees {
        if d == 0 {
            return Err(Error::input("degree 0"));
        }
        if d == 1 {
            continue;
        }
        let (q, _) = prime_power(d).ok_or_else(|| Error::input(format!("{d} is not a prime power")))?;
        if q == 2 {
            return Err(Error::input("degrees must be powers of an odd prime"));
        }
        if prime.is_some_and(|p| p != q) {
            return Err(Error::input("degrees are powers of different primes"));
        }
        prime = Some(q);
    }
    let (mut fixed, mut index) = (BigUint::one(), BigUint::one());
    Ok(degrees
        .iter()
        .enumerate()
        .map(|(i, &d)| {
            if (i + 1) % 2 == 0 {
                fixed *= d;
            } else {
                index *= d;
            }
            HilbertRow {
                n: i + 1,
                degree: d,
                group_order: &fixed * &index,
                fixed_order: fixed.clone(),
                index: index.clone(),
            }
        })
        .collect())
}

/// Totals after the last step; `(1, 1)` for an empty list.
pub fn hilbert_totals(degrees: &[u64]) -> Result<(BigUint, BigUint)> {
    let rows = hilbert_tower_indices(degrees)?;
    Ok(rows
        .last()
        .map_or((BigUint::one(), BigUint::one()), |r| (r.fixed_order.clone(), r.index.clone())))
}

/// Bound report for the Hilbert class field tower of `k` at `p`. Without
/// explicit degrees, the first step is the `p`-part of the class group.
pub fn hilbert_report(k: &QuadFieldData, p: u64, degrees: Option<&[u64]>) -> Result<BoundReport> {
    require_odd_prime(p)?;
    let first = k.class_group_p_part(p);
    let degrees: Vec<u64> = match degrees {
        Some(d) => d.to_vec(),
        None => vec![first.ok_or_else(|| Error::input("class group unknown; pass the degrees explicitly"))?],
    };
    if degrees.is_empty() {
        return Err(Error::input("no step degrees"));
    }
    let rows = hilbert_tower_indices(&degrees)?;
    let mut checklist = vec![Check::new(
        "K is imaginary quadratic",
        k.is_imaginary(),
        format!("D = {}", k.discriminant),
    )];
    let s = k.chi(p as i64);
    checklist.push(Check::new("p splits in K", s == 1, format!("(D | {p}) = {s}")));
    checklist.push(Check::new(
        "class field tower is infinite",
        k.tower_infinite == Some(true),
        match k.tower_infinite {
            Some(t) => format!("recorded {t}"),
            None => "not recorded".into(),
        },
    ));
    let powers = degrees.iter().all(|&d| d == 1 || prime_power(d).is_some_and(|(q, _)| q == p));
    checklist.push(Check::new(
        "step degrees are powers of p",
        powers,
        format!("{degrees:?}"),
    ));
    if let Some(h) = first {
        checklist.push(Check::new(
            "first step matches the class group",
            degrees[0] == h,
            format!("p-part of the class group = {h}"),
        ));
    }
    let mut report = BoundReport::new(BoundKind::Hilbert, p, checklist, "1".into());
    if report.passed {
        report.rows = rows
            .iter()
            .map(|r| BoundRow {
                n: r.n as u32,
                bound: r.index.to_string(),
                group_order: None,
                fixed_order: None,
                index: None,
            })
            .collect();
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    True,
    False,
    Indeterminate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Criterion {
    pub verdict: Verdict,
    pub reason: String,
}

/// Sufficient conditions for `p`-rationality: an imaginary quadratic field
/// with class number prime to `p ≥ 5`, or `Q(μ_p)` with `p` regular.
pub fn prational_criteria(k: &QuadFieldData, p: u64) -> Criterion {
    let c = |verdict, reason: String| Criterion { verdict, reason };
    if k.cyclotomic_p == Some(p) {
        return match k.p_regular {
            Some(true) => c(Verdict::True, format!("Q(mu_{p}) with {p} regular")),
            Some(false) => c(Verdict::False, format!("{p} is irregular")),
            None => c(Verdict::Indeterminate, "regularity not recorded".into()),
        };
    }
    if p < 5 {
        return c(Verdict::False, format!("p = {p} < 5"));
    }
    if !k.is_imaginary() {
        return c(Verdict::False, "K is real".into());
    }
    match k.class_number() {
        None => c(Verdict::Indeterminate, "class group not recorded".into()),
        Some(h) if h % p == 0 => c(Verdict::False, format!("class number {h} divisible by {p}")),
        Some(h) => c(Verdict::True, format!("class number {h} prime to {p}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omit_table_at_five() {
        let rows = prational_tower(5, 2).unwrap();
        let exps = |r: &TowerRow| {
            (
                r.group_order.exponent.to_u64().unwrap(),
                r.fixed_order.exponent.to_u64().unwrap(),
                r.index.exponent.to_u64().unwrap(),
            )
        };
        assert_eq!(exps(&rows[0]), (2, 1, 1));
        assert_eq!(exps(&rows[1]), (28, 12, 16));
        assert!(rows.iter().all(|r| r.sqrt_bound && r.index_dominates));
        assert_eq!(rows[0].group_order.value().unwrap(), BigUint::from(25u32));
        assert!(prational_tower(3, 1).is_err());
    }

    #[test]
    fn kvlem_positions() {
        assert_eq!(hilbert_totals(&[]).unwrap(), (BigUint::one(), BigUint::one()));
        let (f, i) = hilbert_totals(&[81, 3, 3]).unwrap();
        assert_eq!((f, i), (BigUint::from(3u32), BigUint::from(243u32)));
        assert!(hilbert_tower_indices(&[3, 5]).is_err());
        assert!(hilbert_tower_indices(&[6]).is_err());
    }

    #[test]
    fn divfields_dimensions() {
        let r = divfields_bound(1, 3, &[1, 2], Some(Rational::from_integer(1))).unwrap();
        assert_eq!(r.dimensions.unwrap(), Dimensions { total: 3, fixed: 1, exponent: 2 });
        assert_eq!(r.rows[1].bound, "81");
        let r = divfields_bound(2, 5, &[1], None).unwrap();
        assert_eq!(r.rows[0].bound, "B*5^6");
        assert!(divfields_bound(4, 5, &[1], None).is_err());
    }

    #[test]
    fn criteria() {
        let k = find_field("d-51213139").unwrap();
        assert_eq!(prational_criteria(&k, 5).verdict, Verdict::False);
        let k = find_field("d-23").unwrap();
        assert_eq!(prational_criteria(&k, 7).verdict, Verdict::True);
        let mut k = k.clone();
        k.class_group = None;
        assert_eq!(prational_criteria(&k, 7).verdict, Verdict::Indeterminate);
        assert_eq!(prational_criteria(&find_field("mu37").unwrap(), 37).verdict, Verdict::False);
    }
}
