use num_bigint::{BigInt, BigUint};
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};
use proptest::prelude::*;

use xichar::bounds::{
    bundled_curves, bundled_fields, divfields_bound, eccor_check, find_curve, find_field, hilbert_report,
    hilbert_tower_indices, is_fundamental_discriminant, kronecker, mult_order, parity_nekim, parity_selpar,
    prational_criteria, prational_tower, CurveData, Parity, Reduction, SelparBase, Status, Verdict,
};

const SMALL_PRIMES: &[i64] = &[3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97];

fn legendre_by_squares(a: i64, p: i64) -> i8 {
    let r = a.rem_euclid(p);
    if r == 0 {
        0
    } else if (1..p).any(|x| x * x % p == r) {
        1
    } else {
        -1
    }
}

#[test]
fn kronecker_matches_residue_scan() {
    for &p in SMALL_PRIMES.iter().chain(&[101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191, 193, 197, 199]) {
        for a in -199..200 {
            assert_eq!(kronecker(a, p).unwrap(), legendre_by_squares(a, p), "({a} | {p})");
        }
    }
}

#[test]
fn mult_order_matches_brute_force() {
    for &p in SMALL_PRIMES {
        for a in 1..p {
            let mut x = a;
            let mut k = 1;
            while x != 1 {
                x = x * a % p;
                k += 1;
            }
            assert_eq!(mult_order(a, p as u64).unwrap(), k);
        }
        assert!(mult_order(p, p as u64).is_err());
    }
}

#[test]
fn fundamental_discriminants() {
    let fundamental = [-3, -4, -7, -8, -11, -15, -19, -20, -23, -24, 5, 8, 12, 13, 17, 21, 24, 28, 29];
    let not = [-1, -12, -16, -27, 0, 1, 4, 9, 16, 20, 45];
    assert!(fundamental.iter().all(|&d| is_fundamental_discriminant(d)));
    assert!(not.iter().all(|&d| !is_fundamental_discriminant(d)));
}

proptest! {
    #[test]
    fn kronecker_is_multiplicative_on_top(a in -500i64..500, b in -500i64..500, n in 1i64..400) {
        let n = 2 * n + 1;
        prop_assert_eq!(kronecker(a * b, n).unwrap(), kronecker(a, n).unwrap() * kronecker(b, n).unwrap());
    }

    #[test]
    fn kronecker_is_multiplicative_on_bottom(a in -500i64..500, m in 1i64..200, n in 1i64..200) {
        prop_assume!(a != 0);
        prop_assert_eq!(kronecker(a, m * n).unwrap(), kronecker(a, m).unwrap() * kronecker(a, n).unwrap());
    }

    #[test]
    fn hilbert_levels_multiply_out(exps in prop::collection::vec(0u32..4, 1..8)) {
        let degrees: Vec<u64> = exps.iter().map(|&e| 3u64.pow(e)).collect();
        let rows = hilbert_tower_indices(&degrees).unwrap();
        let mut product = BigUint::one();
        for (r, &d) in rows.iter().zip(&degrees) {
            product *= d;
            prop_assert_eq!(&r.fixed_order * &r.index, product.clone());
            prop_assert_eq!(r.group_order.clone(), product.clone());
        }
        let odd: u64 = degrees.iter().step_by(2).product();
        prop_assert_eq!(rows.last().unwrap().index.to_u64(), Some(odd));
    }
}

/// `a_p` by counting affine points of the Weierstrass equation over `F_p`.
fn trace_of_frobenius(ai: [i64; 5], p: i64) -> i64 {
    let [a1, a2, a3, a4, a6] = ai.map(|a| a.rem_euclid(p));
    let mut points = 1;
    for x in 0..p {
        for y in 0..p {
            let lhs = (y * y + a1 * x * y + a3 * y) % p;
            let rhs = ((x * x % p) * x + a2 * x * x + a4 * x + a6) % p;
            if lhs == rhs {
                points += 1;
            }
        }
    }
    p + 1 - points
}

#[test]
fn reduction_types_match_point_counts() {
    for e in bundled_curves() {
        let ai = e.ainvariants.unwrap();
        for (&p, &red) in &e.reduction {
            if red == Reduction::Bad {
                continue;
            }
            let ap = trace_of_frobenius(ai, p as i64);
            let expected = if ap % p as i64 == 0 { Reduction::Supersingular } else { Reduction::Ordinary };
            assert_eq!(red, expected, "{} at {p}: a_p = {ap}", e.label);
        }
    }
}

fn b_invariants(ai: [i64; 5]) -> [BigInt; 4] {
    let [a1, a2, a3, a4, a6] = ai.map(BigInt::from);
    let b2 = &a1 * &a1 + 4 * &a2;
    let b4 = &a1 * &a3 + 2 * &a4;
    let b6 = &a3 * &a3 + 4 * &a6;
    let b8 = &a1 * &a1 * &a6 + 4 * &a2 * &a6 - &a1 * &a3 * &a4 + &a2 * &a3 * &a3 - &a4 * &a4;
    [b2, b4, b6, b8]
}

fn discriminant(ai: [i64; 5]) -> BigInt {
    let [b2, b4, b6, b8] = b_invariants(ai);
    -(&b2 * &b2 * &b8) - 8 * &b4 * &b4 * &b4 - 27 * &b6 * &b6 + 9 * &b2 * &b4 * &b6
}

#[test]
fn discriminant_is_supported_on_the_bad_primes() {
    for e in bundled_curves() {
        let mut d = discriminant(e.ainvariants.unwrap()).abs();
        assert!(!d.is_zero(), "{}", e.label);
        for &l in &e.bad_primes {
            let l = BigInt::from(l);
            assert!((&d % &l).is_zero(), "{}: {l} does not divide the discriminant", e.label);
            while (&d % &l).is_zero() {
                d /= &l;
            }
        }
        assert!(d.is_one(), "{}: discriminant has further prime factors", e.label);
    }
}

#[test]
fn non_cm_curves_have_non_cm_j_invariants() {
    const CM_J: [i64; 13] = [
        0,
        1728,
        -3375,
        8000,
        -32768,
        54000,
        287496,
        -884736,
        -12288000,
        16581375,
        -884736000,
        -147197952000,
        -262537412640768000,
    ];
    for e in bundled_curves() {
        let ai = e.ainvariants.unwrap();
        let [b2, b4, ..] = b_invariants(ai);
        let c4 = &b2 * &b2 - 24 * &b4;
        let j = BigRational::new(&c4 * &c4 * &c4, discriminant(ai));
        let cm = CM_J.iter().any(|&k| j == BigRational::from_integer(k.into()));
        assert_eq!(cm, e.cm, "{}", e.label);
    }
}

type Point = Option<(BigRational, BigRational)>;

fn add(ai: [i64; 5], p: &Point, q: &Point) -> Point {
    let [a1, a2, a3, _, _] = ai.map(|a| BigRational::from_integer(a.into()));
    let a4 = BigRational::from_integer(ai[3].into());
    let (Some((x1, y1)), Some((x2, y2))) = (p, q) else {
        return p.clone().or_else(|| q.clone());
    };
    let neg_y2 = -y2 - &a1 * x2 - &a3;
    if x1 == x2 && *y1 == neg_y2 {
        return None;
    }
    let lambda = if x1 == x2 {
        (BigRational::from_integer(3.into()) * x1 * x1 + BigRational::from_integer(2.into()) * &a2 * x1 + &a4 - &a1 * y1)
            / (BigRational::from_integer(2.into()) * y1 + &a1 * x1 + &a3)
    } else {
        (y2 - y1) / (x2 - x1)
    };
    let nu = y1 - &lambda * x1;
    let x3 = &lambda * &lambda + &a1 * &lambda - &a2 - x1 - x2;
    let y3 = -(&lambda + &a1) * &x3 - &nu - &a3;
    Some((x3, y3))
}

fn point_order(e: &CurveData) -> u64 {
    let ai = e.ainvariants.unwrap();
    let (x, y) = e.torsion_point.unwrap();
    let (x, y) = (BigRational::from_integer(x.into()), BigRational::from_integer(y.into()));
    // The point lies on the curve.
    let a = ai.map(|a| BigRational::from_integer(a.into()));
    assert_eq!(
        &y * &y + &a[0] * &x * &y + &a[2] * &y,
        &x * &x * &x + &a[1] * &x * &x + &a[3] * &x + &a[4],
        "{}",
        e.label
    );
    let p = Some((x, y));
    let mut q = p.clone();
    let mut n = 1;
    while q.is_some() {
        q = add(ai, &q, &p);
        n += 1;
        assert!(n <= 16, "{}: no torsion", e.label);
    }
    n
}

#[test]
fn torsion_points_have_the_recorded_order() {
    let mut checked = 0;
    for e in bundled_curves().iter().filter(|e| e.torsion_point.is_some()) {
        assert_eq!(Some(point_order(e)), e.torsion, "{}", e.label);
        checked += 1;
    }
    assert_eq!(checked, 3);
}

/// Class number of the imaginary quadratic order of discriminant `d` by
/// counting reduced primitive forms.
fn class_number(d: i64) -> u64 {
    let mut h = 0;
    let mut a = 1;
    while 3 * a * a <= -d {
        for b in -a + 1..=a {
            if (b - d).rem_euclid(2) != 0 {
                continue;
            }
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (c == a && b < 0) {
                continue;
            }
            if num_integer::gcd(num_integer::gcd(a, b.abs()), c) == 1 {
                h += 1;
            }
        }
        a += 1;
    }
    h
}

#[test]
fn class_numbers_match_form_counts() {
    assert_eq!(class_number(-23), 3);
    for k in bundled_fields().iter().filter(|k| k.is_imaginary() && k.class_group.is_some()) {
        assert_eq!(Some(class_number(k.discriminant)), k.class_number(), "{}", k.label);
    }
    assert_eq!(find_field("d-4019207").unwrap().class_number(), Some(1863));
    assert_eq!(find_field("d-51213139").unwrap().class_number(), Some(1875));
}

#[test]
fn tower_exponents_are_consistent() {
    for p in [5, 7, 11] {
        let rows = prational_tower(p, 3).unwrap();
        assert_eq!(rows.len(), 3);
        for r in &rows {
            assert_eq!(&r.fixed_order.exponent + &r.index.exponent, r.group_order.exponent);
            assert!(r.index.exponent >= r.fixed_order.exponent);
            assert!(r.sqrt_bound && r.index_dominates);
        }
        for w in rows.windows(2) {
            assert!(w[1].group_order.exponent > w[0].group_order.exponent);
        }
    }
    assert!(prational_tower(5, 4).is_err());
}

#[test]
fn eccor_rows_grow_by_p_squared() {
    let a = find_curve("91b2").unwrap();
    let r = eccor_check(&a, &find_curve("43a1").unwrap(), 3, &[1, 2, 3, 4, 5, 6]).unwrap();
    assert!(r.passed);
    assert_eq!(r.constant, "1/9");
    let values: Vec<u64> = r.rows.iter().map(|row| row.bound.parse().unwrap()).collect();
    assert_eq!(values[0], 1);
    for w in values.windows(2) {
        assert_eq!(w[1], 9 * w[0]);
    }
}

#[test]
fn eccor_checklist_failures() {
    let a = find_curve("91b2").unwrap();
    // 37a1 is supersingular at 3.
    let r = eccor_check(&a, &find_curve("37a1").unwrap(), 3, &[1]).unwrap();
    assert!(!r.passed && r.rows.is_empty());
    let failed: Vec<&str> = r.checklist.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    assert!(failed.contains(&"E has good ordinary reduction at p"));
    // 19a1 has no 5-torsion.
    let r = eccor_check(&find_curve("19a1").unwrap(), &find_curve("43a1").unwrap(), 5, &[1]).unwrap();
    assert!(!r.checklist[0].passed);
    assert!(eccor_check(&a, &a, 3, &[0]).is_err());
    assert!(eccor_check(&a, &a, 9, &[1]).is_err());
    let big = eccor_check(&find_curve("499547134a").unwrap(), &find_curve("37a1").unwrap(), 7, &[2]).unwrap();
    assert_eq!(big.rows[0].bound, "B*7^4");
}

#[test]
fn parity_formulas_agree_over_q() {
    let mut compared = 0;
    for e in bundled_curves() {
        for k in bundled_fields() {
            let a = parity_nekim(&e, &k);
            let b = parity_selpar(&e, &k, SelparBase::Rationals);
            assert_eq!(a.parity, b.parity, "{} over {}", e.label, k.label);
            assert_eq!(b.status, Status::Proved);
            compared += usize::from(a.parity.is_some());
        }
    }
    assert!(compared > 20);
}

#[test]
fn parity_examples() {
    let e = find_curve("43a1").unwrap();
    let k = find_field("d-3").unwrap();
    // (-3 | -43) = (-43 mod 3 | 3) = (2 | 3) = -1.
    let v = parity_nekim(&e, &k);
    assert_eq!((v.parity, v.symbol), (Some(Parity::Odd), -1));
    let e = find_curve("11a1").unwrap();
    let k = find_field("d-23").unwrap();
    let v = parity_nekim(&e, &k);
    assert_eq!(v.symbol, kronecker(-23, 11).unwrap() * kronecker(-23, -1).unwrap());
    let v = parity_selpar(&e, &k, SelparBase::Other { h: 2 });
    assert_eq!(v.status, Status::Conjectural);
    assert_eq!(v.parity, Some(if v.symbol == -1 { Parity::Odd } else { Parity::Even }));
    // 91 = 7 * 13 shares the prime 7 with Q(mu_7).
    let v = parity_nekim(&find_curve("91b2").unwrap(), &find_field("mu7").unwrap());
    assert_eq!(v.parity, None);
}

#[test]
fn divfields_examples() {
    let r = divfields_bound(1, 3, &[1, 2], Some(Rational64::one())).unwrap();
    let dims = r.dimensions.unwrap();
    assert_eq!((dims.total, dims.fixed, dims.exponent), (3, 1, 2));
    assert_eq!(r.rows.iter().map(|x| x.bound.as_str()).collect::<Vec<_>>(), ["9", "81"]);
    let r = divfields_bound(2, 5, &[1], Some(Rational64::new(1, 5))).unwrap();
    assert_eq!(r.dimensions.unwrap().exponent, 6);
    assert_eq!(r.rows[0].bound, "3125");
    let r = divfields_bound(6, 3, &[1], None).unwrap();
    assert_eq!(r.dimensions.unwrap().total, 78);
    assert_eq!(r.rows[0].bound, "B*3^42");
    assert!(divfields_bound(4, 3, &[1], None).is_err());
    assert!(divfields_bound(1, 3, &[1], Some(Rational64::zero())).is_err());
}

#[test]
fn prational_criteria_examples() {
    let v = |label: &str, p| prational_criteria(&find_field(label).unwrap(), p).verdict;
    assert_eq!(v("mu5", 5), Verdict::True);
    assert_eq!(v("mu37", 37), Verdict::False);
    assert_eq!(v("d-23", 5), Verdict::True);
    assert_eq!(v("d-23", 3), Verdict::False);
    assert_eq!(v("d5", 7), Verdict::False);
    assert_eq!(v("d-4019207", 23), Verdict::False);
    assert_eq!(v("d-4019207", 7), Verdict::True);
}

#[test]
fn hilbert_examples() {
    let k = find_field("d-4019207").unwrap();
    assert_eq!(k.class_group_p_part(3), Some(81));
    assert_eq!(kronecker(-4019207, 3).unwrap(), 1);
    let r = hilbert_report(&k, 3, None).unwrap();
    assert!(r.passed);
    assert_eq!(r.rows[0].bound, "81");
    let r = hilbert_report(&k, 3, Some(&[81, 3, 3])).unwrap();
    assert_eq!(r.rows.last().unwrap().bound, "243");
    // A first step other than the class group p-part fails the checklist.
    assert!(!hilbert_report(&k, 3, Some(&[27])).unwrap().passed);
    assert!(hilbert_report(&k, 3, Some(&[81, 5])).is_err());
}
