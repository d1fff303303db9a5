use num_traits::{One, Zero};
use proptest::prelude::*;

use xichar::character::{c_twist, induce, inner_product, mackey_irreducible, restrict, CharacterTable, ClassFunction};
use xichar::cyclotomic::{Cyclotomic, Rational};
use xichar::group::lemmas::index_p_oversubgroup;
use xichar::group::spec::parse_group_spec;
use xichar::group::{FiniteGroup, Involution, Subgroup};
use xichar::xi::{decompose_induced_trivial, xi_set};

const SPECS: &[&str] = &[
    "cyclic:p=3,k=2;c=inv",
    "elemab:p=3,r=2;c=a:fix,b:inv",
    "extraspecial:p=3,exp=p;c=a:inv,b:fix",
    "extraspecial:p=3,exp=p2;c=a:inv,b:fix",
    "extraspecial:p=3,exp=p2;c=a:inv,b:b*a^3",
    "pglkernel:p=3,n=2;c=diag(1,-1)",
    "unitri:p=3,d=3;c=diag(1,-1,1)",
    "extraspecial:p=5,exp=p;c=a:inv,b:fix",
];

fn setup(spec: &str) -> (FiniteGroup, Involution, CharacterTable) {
    let (g, c) = parse_group_spec(spec).unwrap().build().unwrap();
    let t = CharacterTable::compute(&g).unwrap();
    (g, c, t)
}

fn degrees_sorted(t: &CharacterTable) -> Vec<i64> {
    let mut d = t.degrees();
    d.sort_unstable();
    d
}

#[test]
fn cyclic_table_matches_roots_of_unity() {
    let (g, _, t) = setup("cyclic:p=3,k=2");
    let cl = g.classes();
    // The element with label [[1, s], [0, 1]] is the s-th power of the generator.
    let exps: Vec<i64> = (0..cl.len()).map(|i| g.label(cl.representative(i))[1] as i64).collect();
    let mut unmatched: Vec<&ClassFunction> = t.irreducibles.iter().collect();
    for j in 0..9 {
        let row: Vec<Cyclotomic> = exps.iter().map(|&s| Cyclotomic::root_of_unity(9, j * s)).collect();
        let pos = unmatched
            .iter()
            .position(|chi| chi.values() == row.as_slice())
            .unwrap_or_else(|| panic!("no character matches zeta^{j}"));
        unmatched.remove(pos);
    }
    assert!(unmatched.is_empty());
}

#[test]
fn extraspecial_degrees_and_vanishing() {
    for (spec, p) in [("extraspecial:p=3,exp=p", 3i64), ("extraspecial:p=3,exp=p2", 3), ("extraspecial:p=5,exp=p", 5)] {
        let (g, _, t) = setup(spec);
        let mut want = vec![1; (p * p) as usize];
        want.extend(vec![p; (p - 1) as usize]);
        assert_eq!(degrees_sorted(&t), want, "{spec}");
        let center = Subgroup::center(&g);
        let cl = g.classes();
        for chi in t.irreducibles.iter().filter(|c| c.degree() == Some(p)) {
            for i in 0..cl.len() {
                let inside = center.contains(cl.representative(i));
                assert_eq!(chi.values()[i].is_zero(), !inside, "{spec}");
            }
        }
    }
}

#[test]
fn non_p_groups() {
    let (_, _, t) = setup("gl:p=3,n=1");
    assert_eq!(degrees_sorted(&t), vec![1, 1, 2, 2, 2, 3, 3, 4]);
    let (_, _, t) = setup("perm:gens=[(0 1 2),(0 1)]");
    assert_eq!(degrees_sorted(&t), vec![1, 1, 2]);
    let (g, _, t) = setup("pgl:p=3,n=2");
    assert_eq!(t.degrees().iter().map(|d| d * d).sum::<i64>(), g.order() as i64);
}

#[test]
fn column_orthogonality_by_hand() {
    let (g, _, t) = setup("extraspecial:p=3,exp=p2");
    let cl = g.classes();
    let k = cl.len();
    for a in 0..k {
        for b in 0..k {
            let mut s = Cyclotomic::zero(t.conductor);
            for chi in &t.irreducibles {
                s = &s + &(&chi.values()[a] * &chi.values()[b].conj());
            }
            let want = if a == b { g.centralizer_order(a) as i64 } else { 0 };
            assert_eq!(s, Cyclotomic::from_int(t.conductor, want));
        }
    }
}

#[test]
fn json_round_trip_reverifies() {
    let (g, _, t) = setup("unitri:p=3,d=3");
    let j = t.to_json(&g);
    let text = serde_json::to_string(&j).unwrap();
    let back = CharacterTable::from_json(&g, &serde_json::from_str(&text).unwrap()).unwrap();
    assert_eq!(back.irreducibles, t.irreducibles);
    let mut broken = j.clone();
    broken.irreducibles.swap(0, 1);
    broken.irreducibles[0] = broken.irreducibles[1].clone();
    assert!(CharacterTable::from_json(&g, &broken).is_err());
}

#[test]
fn xi_count_matches_brauer_permutation_count() {
    // The twist permutes irreducibles the way C -> (C^c)^{-1} permutes classes,
    // so both have the same number of fixed points.
    for spec in SPECS {
        let (g, c, t) = setup(spec);
        let perm = c.class_permutation(&g);
        let inv = g.inverse_classes();
        let fixed_classes = (0..perm.len()).filter(|&i| inv[perm[i]] == i).count();
        assert_eq!(xi_set(&g, &c, &t).len(), fixed_classes, "{spec}");
    }
}

#[test]
fn identity_involution_leaves_only_the_trivial_character() {
    let (g, c, t) = setup("extraspecial:p=3,exp=p;c=id");
    assert_eq!(xi_set(&g, &c, &t), vec![0]);
    let r = decompose_induced_trivial(&g, &c, &t).unwrap();
    assert_eq!((r.index, r.degree_sum), (1, 1));
}

fn random_class_function(t: &CharacterTable, coeffs: &[i64]) -> ClassFunction {
    let mut f = t.irreducibles[0].scale(Rational::zero());
    for (chi, &k) in t.irreducibles.iter().zip(coeffs.iter().cycle()) {
        f = f.add(&chi.scale(Rational::from_integer(k)));
    }
    f
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn frobenius_reciprocity(i in 0..SPECS.len(), seed in 0usize..1000, j in 0usize..100, coeffs in prop::collection::vec(-2i64..3, 1..6)) {
        let (g, _, t) = setup(SPECS[i]);
        let x = seed % g.order();
        let h = Subgroup::generate(&g, &[x]).embed(&g).unwrap();
        let th = CharacterTable::compute(&h.group).unwrap();
        let psi = random_class_function(&th, &coeffs);
        let chi = &t.irreducibles[j % t.len()];
        let lhs = inner_product(&g, &induce(&g, &h, &psi), chi).unwrap();
        let rhs = inner_product(&h.group, &psi, &restrict(&g, &h, chi)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn twist_is_an_involution_on_irreducibles(i in 0..SPECS.len(), j in 0usize..100) {
        let (g, c, t) = setup(SPECS[i]);
        let chi = &t.irreducibles[j % t.len()];
        let tw = c_twist(&g, &c, chi);
        prop_assert!(t.position(&tw).is_some());
        prop_assert_eq!(&c_twist(&g, &c, &tw), chi);
        prop_assert!(inner_product(&g, &tw, &tw).unwrap().is_one());
    }

    #[test]
    fn mackey_agrees_with_the_norm_of_the_induced_character(i in 0..SPECS.len(), j in 0usize..100) {
        let (g, c, _) = setup(SPECS[i]);
        let h = index_p_oversubgroup(&g, &c, &Subgroup::trivial(&g)).unwrap().embed(&g).unwrap();
        let th = CharacterTable::compute(&h.group).unwrap();
        let psi = &th.irreducibles[j % th.len()];
        let ind = induce(&g, &h, psi);
        let norm_one = inner_product(&g, &ind, &ind).unwrap().is_one();
        prop_assert_eq!(mackey_irreducible(&g, &h, psi).unwrap(), norm_one);
    }
}
