//! Exact arithmetic in cyclotomic fields `Q(ζ_e)`.
//!
//! A [`Cyclotomic`] carries a conductor `e` and rational coefficients of
//! `1, ζ, ζ², …, ζ^{e-1}` (so arithmetic is arithmetic in `Q[x]/(x^e - 1)`).
//! That representation is not unique; the canonical form is the remainder
//! modulo the cyclotomic polynomial `Φ_e`, i.e. coordinates in the power basis
//! `1, ζ, …, ζ^{φ(e)-1}`. Equality, hashing of displayed values and
//! serialization all go through the canonical form.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modarith::{gcd, lcm};

pub type Rational = Rational64;

/// `Φ_e = x^φ + Σ low`, with `low` the nonzero `(degree, coeff)` terms below `φ`.
#[derive(Debug)]
struct CycloPoly {
    phi: usize,
    low: Vec<(usize, i64)>,
}

fn cyclo_cache() -> &'static Mutex<HashMap<u32, Arc<CycloPoly>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<CycloPoly>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn dense_cyclotomic_poly(e: u32) -> Vec<i64> {
    // x^e - 1 divided by Φ_d for every proper divisor d.
    let mut num = vec![0i64; e as usize + 1];
    num[0] = -1;
    num[e as usize] = 1;
    for d in 1..e {
        if e % d != 0 {
            continue;
        }
        let div = dense_cyclotomic_poly(d);
        num = divide_monic(&num, &div);
    }
    num
}

fn divide_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let n = num.len() - 1;
    let m = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![0i64; n - m + 1];
    for k in (0..=n - m).rev() {
        let c = rem[k + m];
        quot[k] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[k + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

fn cyclo_poly(e: u32) -> Arc<CycloPoly> {
    if let Some(p) = cyclo_cache().lock().unwrap().get(&e) {
        return p.clone();
    }
    let dense = dense_cyclotomic_poly(e);
    let phi = dense.len() - 1;
    let low = dense[..phi]
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(j, &c)| (j, c))
        .collect();
    let poly = Arc::new(CycloPoly { phi, low });
    cyclo_cache().lock().unwrap().insert(e, poly.clone());
    poly
}

/// Euler's totient, via the degree of `Φ_e`.
pub fn totient(e: u32) -> usize {
    cyclo_poly(e).phi
}

/// An element of `Q(ζ_e)` for a fixed conductor `e`.
#[derive(Clone, Debug)]
pub struct Cyclotomic {
    conductor: u32,
    coeffs: Vec<Rational>,
}

impl Cyclotomic {
    pub fn zero(conductor: u32) -> Self {
        assert!(conductor >= 1, "conductor must be positive");
        Cyclotomic {
            conductor,
            coeffs: vec![Rational::zero(); conductor as usize],
        }
    }

    pub fn from_rational(conductor: u32, r: Rational) -> Self {
        let mut z = Self::zero(conductor);
        z.coeffs[0] = r;
        z
    }

    pub fn from_int(conductor: u32, n: i64) -> Self {
        Self::from_rational(conductor, Rational::from_integer(n))
    }

    /// `ζ_e^t`.
    pub fn root_of_unity(conductor: u32, t: i64) -> Self {
        let mut z = Self::zero(conductor);
        let idx = t.rem_euclid(conductor as i64) as usize;
        z.coeffs[idx] = Rational::one();
        z
    }

    /// Builds `Σ m_t ζ_e^t` from a multiplicity vector of length `e`.
    pub fn from_root_multiplicities(conductor: u32, mult: &[i64]) -> Self {
        assert_eq!(mult.len(), conductor as usize);
        Cyclotomic {
            conductor,
            coeffs: mult.iter().map(|&m| Rational::from_integer(m)).collect(),
        }
    }

    /// Builds from canonical-basis coordinates (length `φ(e)`).
    pub fn from_canonical(conductor: u32, coords: &[Rational]) -> Result<Self> {
        if coords.len() != totient(conductor) {
            return Err(Error::input(format!(
                "expected {} coordinates for conductor {}, got {}",
                totient(conductor),
                conductor,
                coords.len()
            )));
        }
        let mut z = Self::zero(conductor);
        z.coeffs[..coords.len()].clone_from_slice(coords);
        Ok(z)
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    /// Raw coefficients of `ζ^0, …, ζ^{e-1}` as integers, if they all are.
    pub(crate) fn integer_coeffs(&self) -> Option<Vec<i64>> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }

    /// Canonical coordinates of `Σ v_t ζ^t` for an integer vector `v`.
    pub(crate) fn canonical_of_integers(conductor: u32, v: &[i64]) -> Vec<i64> {
        let poly = cyclo_poly(conductor);
        let mut v = v.to_vec();
        let phi = poly.phi;
        for t in (phi..v.len()).rev() {
            let c = v[t];
            if c == 0 {
                continue;
            }
            v[t] = 0;
            let shift = t - phi;
            for &(j, a) in &poly.low {
                v[shift + j] -= c * a;
            }
        }
        v.truncate(phi);
        v
    }

    /// Coordinates in the power basis `1, ζ, …, ζ^{φ(e)-1}`.
    pub fn canonical(&self) -> Vec<Rational> {
        let poly = cyclo_poly(self.conductor);
        let mut v = self.coeffs.clone();
        let phi = poly.phi;
        for t in (phi..v.len()).rev() {
            let c = v[t];
            if c.is_zero() {
                continue;
            }
            v[t] = Rational::zero();
            let shift = t - phi;
            for &(j, a) in &poly.low {
                v[shift + j] -= c * Rational::from_integer(a);
            }
        }
        v.truncate(phi);
        v
    }

    /// Re-expresses the number with conductor `target`, a multiple of the
    /// current conductor.
    pub fn lift(&self, target: u32) -> Self {
        assert!(
            target % self.conductor == 0,
            "conductor {} does not divide {}",
            self.conductor,
            target
        );
        if target == self.conductor {
            return self.clone();
        }
        let step = (target / self.conductor) as usize;
        let mut z = Self::zero(target);
        for (t, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                z.coeffs[t * step] = *c;
            }
        }
        z
    }

    /// [`Cyclotomic::lift`] when `target` is a multiple of the conductor.
    pub fn lift_to(&self, target: u32) -> Option<Self> {
        (target % self.conductor == 0).then(|| self.lift(target))
    }

    fn aligned(a: &Self, b: &Self) -> (Self, Self) {
        if a.conductor == b.conductor {
            (a.clone(), b.clone())
        } else {
            let e = lcm(a.conductor as u64, b.conductor as u64) as u32;
            (a.lift(e), b.lift(e))
        }
    }

    /// Complex conjugation, `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    /// The Galois automorphism `ζ ↦ ζ^k`, `gcd(k, e) = 1`.
    pub fn galois(&self, k: i64) -> Self {
        let e = self.conductor as i64;
        assert_eq!(
            gcd(k.rem_euclid(e) as u64, e as u64),
            1,
            "galois exponent must be a unit"
        );
        let mut z = Self::zero(self.conductor);
        for (t, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                z.coeffs[(t as i64 * k).rem_euclid(e) as usize] = *c;
            }
        }
        z
    }

    pub fn scale(&self, r: Rational) -> Self {
        Cyclotomic {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.canonical().iter().all(Zero::is_zero)
    }

    /// The rational value, if the number lies in `Q`.
    pub fn to_rational(&self) -> Option<Rational> {
        let c = self.canonical();
        if c[1..].iter().all(Zero::is_zero) {
            Some(c[0])
        } else {
            None
        }
    }

    /// The integer value, if the number lies in `Z`.
    pub fn to_integer(&self) -> Option<i64> {
        self.to_rational()
            .filter(|r| r.is_integer())
            .map(|r| r.to_integer())
    }

    pub fn is_real(&self) -> bool {
        *self == self.conj()
    }

    /// Adds `other * r` in place; conductors must agree.
    pub(crate) fn add_scaled(&mut self, other: &Self, r: Rational) {
        assert_eq!(self.conductor, other.conductor);
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            if !b.is_zero() {
                *a += b * r;
            }
        }
    }

    /// Accumulates `a * b * r` into `self`, touching only nonzero terms.
    pub(crate) fn add_product(&mut self, a: &Self, b: &Self, r: Rational) {
        assert!(self.conductor == a.conductor && a.conductor == b.conductor);
        let e = self.conductor as usize;
        let nb: Vec<(usize, Rational)> = b
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i, *c))
            .collect();
        for (i, ca) in a.coeffs.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            let s = ca * r;
            for &(j, cb) in &nb {
                self.coeffs[(i + j) % e] += s * cb;
            }
        }
    }

    pub fn to_json(&self) -> CyclotomicJson {
        CyclotomicJson {
            conductor: self.conductor,
            coefficients: self.canonical().iter().map(format_rational).collect(),
        }
    }

    pub fn from_json(j: &CyclotomicJson) -> Result<Self> {
        let coords = j
            .coefficients
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()?;
        Self::from_canonical(j.conductor, &coords)
    }
}

/// Serialized form: conductor plus canonical coordinates written as
/// `"n"` or `"n/d"` strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclotomicJson {
    pub conductor: u32,
    pub coefficients: Vec<String>,
}

pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::input(format!("malformed rational `{s}`"));
    match s.split_once('/') {
        None => s.trim().parse::<i64>().map(Rational::from_integer).map_err(|_| bad()),
        Some((n, d)) => {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = Self::aligned(self, other);
        a.canonical() == b.canonical()
    }
}

impl Eq for Cyclotomic {}

impl Add for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        let (mut a, b) = Cyclotomic::aligned(self, rhs);
        a.add_scaled(&b, Rational::one());
        a
    }
}

impl Sub for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        let (mut a, b) = Cyclotomic::aligned(self, rhs);
        a.add_scaled(&b, -Rational::one());
        a
    }
}

impl Mul for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        let (a, b) = Cyclotomic::aligned(self, rhs);
        let mut out = Cyclotomic::zero(a.conductor);
        out.add_product(&a, &b, Rational::one());
        out
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        self.scale(-Rational::one())
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.canonical();
        let mut first = true;
        for (t, r) in c.iter().enumerate() {
            if r.is_zero() {
                continue;
            }
            let mag = r.abs();
            let sign = if r.is_negative() { "-" } else { "+" };
            if first {
                if r.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let body = match t {
                0 => format_rational(&mag),
                _ => {
                    let root = if t == 1 {
                        format!("z{}", self.conductor)
                    } else {
                        format!("z{}^{}", self.conductor, t)
                    };
                    if mag.is_one() {
                        root
                    } else {
                        format!("{}*{}", format_rational(&mag), root)
                    }
                }
            };
            write!(f, "{body}")?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
