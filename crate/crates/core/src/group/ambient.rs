//! Concrete ambients in which generators live: permutations, invertible
//! matrices over `Z/m`, and projective matrices over `Z/m`.
//!
//! Elements are stored as flat `u64` vectors: a permutation is its image
//! array, a matrix its entries in row-major order. Projective matrices are
//! normalised so that the first unit entry (row-major) equals 1, which makes
//! the label a canonical representative of the scalar class.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::modarith::{gcd, inv_mod, mul_mod};

pub const MAX_PERM_DEGREE: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Ambient {
    Permutation { degree: usize },
    Matrix { dim: usize, modulus: u64 },
    Projective { dim: usize, modulus: u64 },
    /// Groups known only through their multiplication table (quotients,
    /// semidirect extensions).
    Abstract,
}

impl Ambient {
    pub fn identity(&self) -> Vec<u64> {
        match *self {
            Ambient::Permutation { degree } => (0..degree as u64).collect(),
            Ambient::Matrix { dim, .. } | Ambient::Projective { dim, .. } => {
                identity_matrix(dim)
            }
            Ambient::Abstract => vec![0],
        }
    }

    /// Validates an element and brings it to canonical form.
    pub fn canonicalize(&self, x: &[u64]) -> Result<Vec<u64>> {
        match *self {
            Ambient::Permutation { degree } => {
                if degree > MAX_PERM_DEGREE {
                    return Err(Error::input(format!(
                        "permutation degree {degree} exceeds {MAX_PERM_DEGREE}"
                    )));
                }
                if x.len() != degree {
                    return Err(Error::input("permutation has wrong degree"));
                }
                let mut seen = vec![false; degree];
                for &i in x {
                    let i = i as usize;
                    if i >= degree || seen[i] {
                        return Err(Error::input("not a permutation"));
                    }
                    seen[i] = true;
                }
                Ok(x.to_vec())
            }
            Ambient::Matrix { dim, modulus } | Ambient::Projective { dim, modulus } => {
                if x.len() != dim * dim {
                    return Err(Error::input("matrix has wrong number of entries"));
                }
                let m: Vec<u64> = x.iter().map(|&a| a % modulus).collect();
                let det = determinant(&m, dim, modulus);
                if gcd(det, modulus) != 1 {
                    return Err(Error::input(format!(
                        "matrix is not invertible over Z/{modulus}"
                    )));
                }
                if matches!(self, Ambient::Projective { .. }) {
                    Ok(projective_normalize(&m, modulus))
                } else {
                    Ok(m)
                }
            }
            Ambient::Abstract => Err(Error::input("abstract groups have no ambient elements")),
        }
    }

    /// Product `a·b` of canonical elements. Permutations compose left to
    /// right: `(a·b)(i) = b(a(i))`.
    pub fn multiply(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        match *self {
            Ambient::Permutation { .. } => a.iter().map(|&i| b[i as usize]).collect(),
            Ambient::Matrix { dim, modulus } => mat_mul(a, b, dim, modulus),
            Ambient::Projective { dim, modulus } => {
                projective_normalize(&mat_mul(a, b, dim, modulus), modulus)
            }
            Ambient::Abstract => unreachable!("abstract groups multiply through their table"),
        }
    }

    pub fn inverse(&self, a: &[u64]) -> Vec<u64> {
        match *self {
            Ambient::Permutation { .. } => {
                let mut inv = vec![0u64; a.len()];
                for (i, &j) in a.iter().enumerate() {
                    inv[j as usize] = i as u64;
                }
                inv
            }
            Ambient::Matrix { dim, modulus } => mat_inverse(a, dim, modulus),
            Ambient::Projective { dim, modulus } => {
                projective_normalize(&mat_inverse(a, dim, modulus), modulus)
            }
            Ambient::Abstract => unreachable!("abstract groups invert through their table"),
        }
    }

    pub fn describe(&self) -> String {
        match *self {
            Ambient::Permutation { degree } => format!("S_{degree}"),
            Ambient::Matrix { dim, modulus } => format!("GL_{dim}(Z/{modulus})"),
            Ambient::Projective { dim, modulus } => format!("PGL_{dim}(Z/{modulus})"),
            Ambient::Abstract => "abstract".to_string(),
        }
    }

    /// Human-readable rendering of an element label.
    pub fn render(&self, label: &[u64]) -> String {
        match *self {
            Ambient::Permutation { .. } => render_cycles(label),
            Ambient::Matrix { dim, .. } | Ambient::Projective { dim, .. } => {
                let rows: Vec<String> = label
                    .chunks(dim)
                    .map(|r| {
                        let v: Vec<String> = r.iter().map(u64::to_string).collect();
                        format!("[{}]", v.join(","))
                    })
                    .collect();
                format!("[{}]", rows.join(","))
            }
            Ambient::Abstract => {
                let v: Vec<String> = label.iter().map(u64::to_string).collect();
                format!("<{}>", v.join(","))
            }
        }
    }
}

fn render_cycles(perm: &[u64]) -> String {
    let mut seen = vec![false; perm.len()];
    let mut out = String::new();
    for start in 0..perm.len() {
        if seen[start] || perm[start] as usize == start {
            continue;
        }
        let mut cyc = vec![start];
        seen[start] = true;
        let mut j = perm[start] as usize;
        while j != start {
            seen[j] = true;
            cyc.push(j);
            j = perm[j] as usize;
        }
        let v: Vec<String> = cyc.iter().map(usize::to_string).collect();
        out.push_str(&format!("({})", v.join(" ")));
    }
    if out.is_empty() {
        "()".to_string()
    } else {
        out
    }
}

pub fn identity_matrix(dim: usize) -> Vec<u64> {
    let mut m = vec![0u64; dim * dim];
    for i in 0..dim {
        m[i * dim + i] = 1;
    }
    m
}

pub fn mat_mul(a: &[u64], b: &[u64], dim: usize, modulus: u64) -> Vec<u64> {
    let mut c = vec![0u64; dim * dim];
    for i in 0..dim {
        for k in 0..dim {
            let aik = a[i * dim + k];
            if aik == 0 {
                continue;
            }
            for j in 0..dim {
                c[i * dim + j] = (c[i * dim + j] + mul_mod(aik, b[k * dim + j], modulus)) % modulus;
            }
        }
    }
    c
}

/// Determinant over `Z/m` by cofactor expansion (dimensions here are tiny).
pub fn determinant(a: &[u64], dim: usize, modulus: u64) -> u64 {
    match dim {
        0 => 1 % modulus,
        1 => a[0] % modulus,
        _ => {
            let mut acc = 0u64;
            for j in 0..dim {
                if a[j] == 0 {
                    continue;
                }
                let minor = minor(a, dim, 0, j);
                let term = mul_mod(a[j], determinant(&minor, dim - 1, modulus), modulus);
                acc = if j % 2 == 0 {
                    (acc + term) % modulus
                } else {
                    (acc + modulus - term) % modulus
                };
            }
            acc
        }
    }
}

fn minor(a: &[u64], dim: usize, row: usize, col: usize) -> Vec<u64> {
    let mut m = Vec::with_capacity((dim - 1) * (dim - 1));
    for i in 0..dim {
        if i == row {
            continue;
        }
        for j in 0..dim {
            if j != col {
                m.push(a[i * dim + j]);
            }
        }
    }
    m
}

/// Inverse through the adjugate; valid over any `Z/m` when `det` is a unit.
pub fn mat_inverse(a: &[u64], dim: usize, modulus: u64) -> Vec<u64> {
    let det = determinant(a, dim, modulus);
    let dinv = inv_mod(det, modulus).expect("matrix must be invertible");
    if dim == 1 {
        return vec![dinv];
    }
    let mut inv = vec![0u64; dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            let cof = determinant(&minor(a, dim, i, j), dim - 1, modulus);
            let signed = if (i + j) % 2 == 0 { cof } else { (modulus - cof) % modulus };
            inv[j * dim + i] = mul_mod(signed, dinv, modulus);
        }
    }
    inv
}

/// Scales so that the first unit entry (row-major) is 1.
pub fn projective_normalize(a: &[u64], modulus: u64) -> Vec<u64> {
    let unit = a
        .iter()
        .copied()
        .find(|&x| gcd(x, modulus) == 1)
        .expect("invertible matrix has a unit entry");
    let s = inv_mod(unit, modulus).unwrap();
    a.iter().map(|&x| mul_mod(x, s, modulus)).collect()
}

/// True if `a` is congruent to a scalar matrix modulo `q`.
pub fn is_scalar_mod(a: &[u64], dim: usize, q: u64) -> bool {
    let d0 = a[0] % q;
    (0..dim).all(|i| {
        (0..dim).all(|j| {
            let x = a[i * dim + j] % q;
            if i == j {
                x == d0
            } else {
                x == 0
            }
        })
    })
}

/// Parses cycle notation such as `(0 1 2)(3 4)` into an image array.
pub fn parse_cycles(s: &str, degree: usize) -> Result<Vec<u64>> {
    let mut perm: Vec<u64> = (0..degree as u64).collect();
    let mut rest = s.trim();
    if rest == "()" || rest.is_empty() {
        return Ok(perm);
    }
    while !rest.is_empty() {
        let open = rest
            .strip_prefix('(')
            .ok_or_else(|| Error::input(format!("expected `(` in cycle `{s}`")))?;
        let close = open
            .find(')')
            .ok_or_else(|| Error::input(format!("unclosed cycle in `{s}`")))?;
        let points: Vec<usize> = open[..close]
            .split(|c: char| c == ' ' || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<usize>().map_err(|_| Error::input(format!("bad point `{t}`"))))
            .collect::<Result<_>>()?;
        for w in 0..points.len() {
            let (a, b) = (points[w], points[(w + 1) % points.len()]);
            if a >= degree || b >= degree {
                return Err(Error::input(format!("point out of range in `{s}`")));
            }
            perm[a] = b as u64;
        }
        rest = open[close + 1..].trim_start();
    }
    Ambient::Permutation { degree }.canonicalize(&perm)
}
