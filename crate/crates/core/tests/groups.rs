use proptest::prelude::*;

use xichar::corpus::{build_pgl_level, corpus, corpus_specs, kernel_filtration, standard_involution_fixed};
use xichar::group::lemmas::{
    check_plus_minus_factorization, check_quotient_fixed, index_p_kernels, index_p_oversubgroup,
};
use xichar::group::spec::parse_group_spec;
use xichar::group::subgroup::{antifixed_set, quotient_group};
use xichar::group::{Ambient, FiniteGroup, Involution, Subgroup};
use xichar::Error;

const SPECS: &[&str] = &[
    "cyclic:p=3,k=2;c=inv",
    "cyclic:p=5,k=1;c=id",
    "elemab:p=3,r=2;c=a:fix,b:inv",
    "elemab:p=3,r=3;c=a:inv,b:fix,c:inv",
    "extraspecial:p=3,exp=p;c=a:inv,b:fix",
    "extraspecial:p=3,exp=p2;c=a:inv,b:fix",
    "pglkernel:p=3,n=2;c=diag(1,-1)",
    "unitri:p=3,d=3;c=diag(1,-1,1)",
    "extraspecial:p=5,exp=p;c=a:inv,b:fix",
];

fn build(spec: &str) -> (FiniteGroup, Involution) {
    parse_group_spec(spec).unwrap().build().unwrap()
}

fn brute_fixed_count(g: &FiniteGroup, c: &Involution) -> usize {
    (0..g.order()).filter(|&x| c.apply(x) == x).count()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn involution_is_an_automorphism_of_order_dividing_two(i in 0..SPECS.len(), a in 0usize..10_000, b in 0usize..10_000) {
        let (g, c) = build(SPECS[i]);
        let (a, b) = (a % g.order(), b % g.order());
        prop_assert_eq!(c.apply(g.mul(a, b)), g.mul(c.apply(a), c.apply(b)));
        prop_assert_eq!(c.apply(c.apply(a)), a);
    }

    #[test]
    fn plus_minus_factorisation(i in 0..SPECS.len()) {
        let (g, c) = build(SPECS[i]);
        let r = check_plus_minus_factorization(&g, &c).unwrap();
        prop_assert_eq!(r.plus, brute_fixed_count(&g, &c));
        let minus = (0..g.order()).filter(|&x| c.apply(x) == g.inv(x)).count();
        prop_assert_eq!(r.minus, minus);
        prop_assert_eq!(r.plus * r.minus, g.order());
    }

    #[test]
    fn spec_display_round_trips(i in 0..SPECS.len()) {
        let spec = parse_group_spec(SPECS[i]).unwrap();
        let again = parse_group_spec(&spec.to_string()).unwrap();
        prop_assert_eq!(spec, again);
    }

    #[test]
    fn stable_index_p_witness_contains_k(i in 0..SPECS.len(), seed in 0usize..10_000) {
        let (g, c) = build(SPECS[i]);
        // K generated by a random element and its image under c.
        let x = seed % g.order();
        let k = Subgroup::generate(&g, &[x, c.apply(x)]);
        prop_assume!(!k.is_whole());
        let h = index_p_oversubgroup(&g, &c, &k).unwrap();
        let p = g.prime().unwrap() as usize;
        prop_assert_eq!(h.order() * p, g.order());
        prop_assert!(k.is_subgroup_of(&h));
        prop_assert!(h.is_c_stable(&c));
        prop_assert!(h.is_normal(&g));
    }

    #[test]
    fn quotient_fixed_counts(i in 0..SPECS.len(), which in 0usize..3) {
        let (g, c) = build(SPECS[i]);
        let n = match which {
            0 => Subgroup::center(&g),
            1 => Subgroup::commutator_subgroup(&g),
            _ => Subgroup::frattini(&g).unwrap(),
        };
        let r = check_quotient_fixed(&g, &c, &n).unwrap();
        // Recount directly in an independently built quotient.
        let q = quotient_group(&g, &n, &c).unwrap();
        prop_assert_eq!(r.quotient_plus, brute_fixed_count(&q.group, &q.involution));
        prop_assert_eq!(r.plus, r.normal_plus * r.quotient_plus);
    }
}

#[test]
fn minus_set_is_closed_under_inverse() {
    for spec in SPECS {
        let (g, c) = build(spec);
        let minus = antifixed_set(&g, &c);
        assert!(minus.iter().all(|&x| minus.contains(&g.inv(x))), "{spec}");
        assert!(minus.contains(&0));
    }
}

#[test]
fn even_order_is_rejected() {
    let (g, c) = parse_group_spec("perm:gens=[(0 1 2),(0 1)]").unwrap().build().unwrap();
    assert_eq!(g.order(), 6);
    assert!(matches!(check_plus_minus_factorization(&g, &c), Err(Error::Precondition(_))));
}

#[test]
fn non_automorphism_is_rejected() {
    let (g, _) = build("extraspecial:p=3,exp=p");
    // Swapping an element with its square on the generators only is not an automorphism of order 2.
    let a = g.generators()[0];
    let bad: Vec<usize> = (0..g.order()).map(|x| if x == a { g.mul(a, a) } else { x }).collect();
    assert!(Involution::from_map(&g, bad).is_err());
}

#[test]
fn index_p_kernels_count_maximal_subgroups() {
    // (Z/3)^3 has (27 - 1) / 2 = 13 maximal subgroups.
    let (g, _) = build("elemab:p=3,r=3");
    let phi = Subgroup::frattini(&g).unwrap();
    assert_eq!(phi.order(), 1);
    assert_eq!(index_p_kernels(&g, &phi).unwrap().count(), 13);
    let (h, _) = build("extraspecial:p=5,exp=p");
    let phi = Subgroup::frattini(&h).unwrap();
    assert_eq!(index_p_kernels(&h, &phi).unwrap().count(), 6);
}

#[test]
fn pgl_orders_and_filtration() {
    let orders: Vec<usize> = (1..=3).map(|n| build_pgl_level(2, 3, n, 20_000).unwrap().order()).collect();
    assert_eq!(orders, vec![24, 648, 17_496]);
    let g = build_pgl_level(2, 3, 3, 20_000).unwrap();
    let (c, fixed) = standard_involution_fixed(&g, 1, 1).unwrap();
    assert_eq!(fixed.order(), 36);
    let f = kernel_filtration(&g, &c).unwrap();
    assert_eq!(f.kernel_orders, vec![17_496, 729, 27, 1]);
    assert_eq!(f.fixed_orders, vec![36, 9, 3, 1]);
    for w in f.kernel_orders.windows(2) {
        assert_eq!(w[0] % w[1], 0);
    }
    assert!(build_pgl_level(2, 3, 3, 1000).is_err());
}

#[test]
fn kernel_of_pgl2_mod_9_has_fixed_subgroup_of_order_3() {
    let (g, _) = build("pglkernel:p=3,n=2");
    assert_eq!(g.order(), 27);
    let (_, fixed) = standard_involution_fixed(&g, 1, 1).unwrap();
    assert_eq!(fixed.order(), 3);
    let t = FiniteGroup::generate(Ambient::Projective { dim: 2, modulus: 9 }, &[], 10).unwrap();
    assert_eq!(t.order(), 1);
    let (_, fixed) = standard_involution_fixed(&t, 1, 1).unwrap();
    assert_eq!(fixed.order(), 1);
}

#[test]
fn kernel_of_pgl2_mod_27_filtration() {
    let (g, c) = build("pglkernel:p=3,n=3;c=diag(1,-1)");
    let f = kernel_filtration(&g, &c).unwrap();
    assert_eq!(f.kernel_orders, vec![729, 729, 27, 1]);
    assert_eq!(f.kernel_fit.delta, Some(3));
    assert!(f.kernel_fit.consistent);
    assert_eq!(f.fixed_fit.delta, Some(1));
}

#[test]
fn corpus_is_deterministic_and_valid() {
    let a: Vec<String> = corpus(5, 200).unwrap().into_iter().map(|e| e.name).collect();
    let b: Vec<String> = corpus(5, 200).unwrap().into_iter().map(|e| e.name).collect();
    assert_eq!(a, b);
    for e in corpus(5, 1000).unwrap() {
        assert_eq!(e.group.order() % 2, 1, "{}", e.name);
        e.involution.validate(&e.group).unwrap();
        check_plus_minus_factorization(&e.group, &e.involution).unwrap();
    }
    assert!(corpus_specs(5).len() > corpus_specs(3).len());
}
