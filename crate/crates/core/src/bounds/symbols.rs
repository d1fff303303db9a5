use crate::error::{Error, Result};
use crate::modarith::{factorize, is_prime, pow_mod};

// (2|n) indexed by n mod 8, for odd n.
const TWO: [i8; 8] = [0, 1, 0, -1, 0, -1, 0, 1];

/// The Kronecker symbol `(a|n)`, including `n ≤ 0` and even `n`.
pub fn kronecker(a: i64, n: i64) -> Result<i8> {
    if a == 0 && n == 0 {
        return Err(Error::input("kronecker symbol (0|0) is undefined"));
    }
    let (mut a, mut b) = (a as i128, n as i128);
    if b == 0 {
        return Ok(if a.abs() == 1 { 1 } else { 0 });
    }
    if a % 2 == 0 && b % 2 == 0 {
        return Ok(0);
    }
    let v = b.trailing_zeros();
    b >>= v;
    let mut k: i8 = if v % 2 == 0 { 1 } else { TWO[(a & 7) as usize] };
    if b < 0 {
        b = -b;
        if a < 0 {
            k = -k;
        }
    }
    loop {
        if a == 0 {
            return Ok(if b == 1 { k } else { 0 });
        }
        let v = a.trailing_zeros();
        a >>= v;
        if v % 2 == 1 {
            k *= TWO[(b & 7) as usize];
        }
        if a & b & 2 != 0 {
            k = -k;
        }
        let r = a.abs();
        a = b % r;
        b = r;
    }
}

/// Multiplicative order of `a` modulo the prime `p`.
pub fn mult_order(a: i64, p: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::input(format!("{p} is not prime")));
    }
    let x = a.rem_euclid(p as i64) as u64;
    if x == 0 {
        return Err(Error::input(format!("{a} is not a unit mod {p}")));
    }
    let mut order = p - 1;
    for (q, _) in factorize(p - 1) {
        while order % q == 0 && pow_mod(x, order / q, p) == 1 {
            order /= q;
        }
    }
    Ok(order)
}

/// True for fundamental discriminants: `D ≡ 1 (mod 4)` squarefree, or
/// `D = 4m` with `m ≡ 2, 3 (mod 4)` squarefree.
pub fn is_fundamental_discriminant(d: i64) -> bool {
    let squarefree = |m: i64| m != 0 && factorize(m.unsigned_abs()).iter().all(|&(_, e)| e == 1);
    if d == 1 {
        return false;
    }
    match d.rem_euclid(4) {
        1 => squarefree(d),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && squarefree(m)
        }
        _ => false,
    }
}
