//! Character tables by simultaneous diagonalisation of the class matrices
//! over a prime field `F_l` with `l ≡ 1 (mod exp G)`, followed by an exact
//! lift of each value from its eigenvalue multiplicities.

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::modarith::{inv_mod, is_prime, mul_mod, pow_mod, primitive_root};

/// Smallest prime `l ≡ 1 (mod e)` with `l² > 4n`.
pub fn dixon_prime(e: u64, n: u64) -> u64 {
    let mut l = e + 1;
    while !(is_prime(l) && l * l > 4 * n) {
        l += e;
    }
    l
}

/// A subspace of `F_l^k` held as an RREF basis.
#[derive(Clone, Debug)]
struct Space {
    basis: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

fn rref(mut rows: Vec<Vec<u64>>, l: u64) -> Space {
    let width = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..width {
        let Some(pr) = (r..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = inv_mod(rows[r][col], l).unwrap();
        for x in rows[r].iter_mut() {
            *x = mul_mod(*x, inv, l);
        }
        for i in 0..rows.len() {
            if i != r && rows[i][col] != 0 {
                let f = rows[i][col];
                for j in 0..width {
                    let sub = mul_mod(f, rows[r][j], l);
                    rows[i][j] = (rows[i][j] + l - sub) % l;
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    Space { basis: rows, pivots }
}

/// Null space basis of a square matrix over `F_l`.
fn kernel(a: &[Vec<u64>], l: u64) -> Vec<Vec<u64>> {
    let m = a.len();
    let red = rref(a.to_vec(), l);
    let free: Vec<usize> = (0..m).filter(|c| !red.pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u64; m];
            v[f] = 1;
            for (row, &pc) in red.basis.iter().zip(&red.pivots) {
                v[pc] = (l - row[f]) % l;
            }
            v
        })
        .collect()
}

/// Characteristic polynomial (low degree first, monic) via Hessenberg form.
fn charpoly(mut h: Vec<Vec<u64>>, l: u64) -> Vec<u64> {
    let n = h.len();
    for m in 1..n.saturating_sub(1) {
        let Some(i) = (m..n).find(|&i| h[i][m - 1] != 0) else {
            continue;
        };
        if i != m {
            h.swap(i, m);
            for row in h.iter_mut() {
                row.swap(i, m);
            }
        }
        let pinv = inv_mod(h[m][m - 1], l).unwrap();
        for i in m + 1..n {
            let u = mul_mod(h[i][m - 1], pinv, l);
            if u == 0 {
                continue;
            }
            for j in 0..n {
                let sub = mul_mod(u, h[m][j], l);
                h[i][j] = (h[i][j] + l - sub) % l;
            }
            for row in h.iter_mut() {
                row[m] = (row[m] + mul_mod(u, row[i], l)) % l;
            }
        }
    }
    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for m in 1..=n {
        // (x - h[m-1][m-1]) * p[m-1]
        let prev = &polys[m - 1];
        let mut p = vec![0u64; m + 1];
        for (d, &c) in prev.iter().enumerate() {
            p[d + 1] = (p[d + 1] + c) % l;
            p[d] = (p[d] + l - mul_mod(h[m - 1][m - 1], c, l)) % l;
        }
        let mut prod = 1u64;
        for i in (1..m).rev() {
            prod = mul_mod(prod, h[i][i - 1], l);
            let coef = mul_mod(h[i - 1][m - 1], prod, l);
            if coef == 0 {
                continue;
            }
            for (d, &c) in polys[i - 1].iter().enumerate() {
                p[d] = (p[d] + l - mul_mod(coef, c, l)) % l;
            }
        }
        polys.push(p);
    }
    polys.pop().unwrap()
}

fn eval(poly: &[u64], x: u64, l: u64) -> u64 {
    poly.iter().rev().fold(0, |acc, &c| (mul_mod(acc, x, l) + c) % l)
}

/// `M_j[a][i] = #{x ∈ C_j : x^{-1} z_i ∈ C_a}` for class representatives `z_i`.
fn class_matrix(g: &FiniteGroup, j: usize) -> Vec<Vec<u64>> {
    let cl = g.classes();
    let k = cl.len();
    let mut m = vec![vec![0u64; k]; k];
    for &x in &cl.classes[j] {
        let xi = g.inv(x);
        for i in 0..k {
            let a = cl.class_of[g.mul(xi, cl.representative(i))];
            m[a][i] += 1;
        }
    }
    m
}

/// Splits each space into eigenspaces of `M`; returns `None` if some
/// restricted operator fails to diagonalise.
fn split(spaces: Vec<Space>, m: &[Vec<u64>], l: u64) -> Option<Vec<Space>> {
    let k = m.len();
    let mut out = Vec::new();
    for sp in spaces {
        let d = sp.basis.len();
        if d == 1 {
            out.push(sp);
            continue;
        }
        let images: Vec<Vec<u64>> = sp
            .basis
            .iter()
            .map(|b| {
                (0..k)
                    .map(|a| m[a].iter().zip(b).fold(0, |acc, (&x, &y)| (acc + mul_mod(x % l, y, l)) % l))
                    .collect()
            })
            .collect();
        // t[s][r] = coordinate s of M b_r.
        let t: Vec<Vec<u64>> = (0..d)
            .map(|s| (0..d).map(|r| images[r][sp.pivots[s]]).collect())
            .collect();
        let cp = charpoly(t.clone(), l);
        let mut total = 0;
        for lambda in (0..l).filter(|&x| eval(&cp, x, l) == 0) {
            let shifted: Vec<Vec<u64>> = t
                .iter()
                .enumerate()
                .map(|(s, row)| {
                    let mut row = row.clone();
                    row[s] = (row[s] + l - lambda) % l;
                    row
                })
                .collect();
            let ker = kernel(&shifted, l);
            total += ker.len();
            let vecs: Vec<Vec<u64>> = ker
                .iter()
                .map(|c| {
                    (0..k)
                        .map(|col| {
                            c.iter()
                                .zip(&sp.basis)
                                .fold(0, |acc, (&cr, b)| (acc + mul_mod(cr, b[col], l)) % l)
                        })
                        .collect()
                })
                .collect();
            out.push(rref(vecs, l));
        }
        if total != d {
            return None;
        }
    }
    Some(out)
}

/// Irreducible characters as exact cyclotomic value rows, unsorted, plus
/// the prime used.
pub(crate) fn dixon(g: &FiniteGroup) -> Result<(u64, Vec<Vec<Cyclotomic>>)> {
    let cl = g.classes();
    let k = cl.len();
    let n = g.order() as u64;
    let e = g.exponent();
    let l = dixon_prime(e, n);
    let ident: Vec<Vec<u64>> = (0..k)
        .map(|i| {
            let mut v = vec![0u64; k];
            v[i] = 1;
            v
        })
        .collect();
    let mut spaces = vec![rref(ident, l)];
    for j in 1..k {
        if spaces.iter().all(|s| s.basis.len() == 1) {
            break;
        }
        spaces = split(spaces, &class_matrix(g, j), l)
            .ok_or_else(|| Error::consistency("class matrix is not diagonalisable mod l"))?;
    }
    if spaces.len() != k || spaces.iter().any(|s| s.basis.len() != 1) {
        return Err(Error::consistency("class matrices did not separate the characters"));
    }

    let inv_cl = g.inverse_classes();
    let sizes: Vec<u64> = (0..k).map(|i| cl.size(i) as u64).collect();
    let size_inv: Vec<u64> = sizes.iter().map(|&h| inv_mod(h % l, l).unwrap()).collect();
    let isqrt = (n as f64).sqrt() as u64 + 1;

    // Power maps: class of g_i^s for s in 0..o_i.
    let powers: Vec<Vec<usize>> = (0..k)
        .map(|i| {
            let r = cl.representative(i);
            let o = g.element_order(r) as usize;
            let mut x = 0;
            (0..o)
                .map(|_| {
                    let c = cl.class_of[x];
                    x = g.mul(x, r);
                    c
                })
                .collect()
        })
        .collect();
    let z = pow_mod(primitive_root(l), (l - 1) / e, l);

    let mut rows = Vec::with_capacity(k);
    for sp in &spaces {
        let v = &sp.basis[0];
        if v[0] != 1 {
            return Err(Error::consistency("eigenvector vanishes at the identity class"));
        }
        let s = (0..k).fold(0u64, |acc, i| {
            (acc + mul_mod(mul_mod(v[i], v[inv_cl[i]], l), size_inv[i], l)) % l
        });
        let target = mul_mod(n % l, inv_mod(s, l).ok_or_else(|| Error::consistency("degenerate norm"))?, l);
        let d = (1..=isqrt)
            .find(|&d| mul_mod(d, d, l) == target)
            .ok_or_else(|| Error::consistency("no admissible degree"))?;
        let modval: Vec<u64> = (0..k)
            .map(|i| mul_mod(mul_mod(d, v[i], l), size_inv[i], l))
            .collect();
        let mut row = Vec::with_capacity(k);
        for i in 0..k {
            let o = powers[i].len() as u64;
            let step = e / o;
            let zo = pow_mod(z, step, l);
            let oinv = inv_mod(o % l, l).unwrap();
            let mut mult = vec![0i64; e as usize];
            for t in 0..o {
                // m_t = o^{-1} Σ_s χ(g^s) ζ_o^{-ts}
                let zinv = pow_mod(zo, (o - t) % o, l);
                let mut acc = 0u64;
                let mut w = 1u64;
                for s in 0..o as usize {
                    acc = (acc + mul_mod(modval[powers[i][s]], w, l)) % l;
                    w = mul_mod(w, zinv, l);
                }
                let m = mul_mod(acc, oinv, l);
                if m > d {
                    return Err(Error::consistency("eigenvalue multiplicity exceeds the degree"));
                }
                mult[(t * step) as usize] = m as i64;
            }
            row.push(Cyclotomic::from_root_multiplicities(e as u32, &mult));
        }
        rows.push(row);
    }
    Ok((l, rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_choice() {
        assert_eq!(dixon_prime(3, 27), 13);
        assert_eq!(dixon_prime(1, 1), 3);
        assert_eq!(dixon_prime(5, 125), 31);
    }

    #[test]
    fn charpoly_of_small_matrices() {
        let l = 13;
        // [[2,1],[0,3]] has characteristic polynomial x² - 5x + 6.
        assert_eq!(charpoly(vec![vec![2, 1], vec![0, 3]], l), vec![6, 8, 1]);
        // Companion-type 3x3 with roots 1, 2, 3: x³ - 6x² + 11x - 6.
        let a = vec![vec![0, 0, 6], vec![1, 0, 13 - 11], vec![0, 1, 6]];
        assert_eq!(charpoly(a, l), vec![7, 11, 7, 1]);
        let perm = vec![vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, 0]];
        assert_eq!(charpoly(perm, l), vec![12, 0, 0, 1]);
    }

    #[test]
    fn kernel_dimension() {
        let a = vec![vec![1, 2], vec![2, 4]];
        let ker = kernel(&a, 7);
        assert_eq!(ker, vec![vec![5, 1]]);
    }
}
