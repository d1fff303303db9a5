//! Checks for the structural statements about `(G, c)`: the `G⁺G⁻`
//! factorisation, stability of over-groups of `G⁺`, index-`p` stable
//! subgroups, and the fixed-point count in quotients.

use serde::Serialize;

use crate::error::{Error, Result};

use super::subgroup::{antifixed_set, coset_projection, quotient_group};
use super::{FiniteGroup, Involution, Subgroup};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorizationReport {
    pub order: usize,
    pub plus: usize,
    pub minus: usize,
    pub plus_minus_covers: bool,
    pub minus_plus_covers: bool,
}

/// Verifies `|G| = |G⁺||G⁻|` and `G = G⁺G⁻ = G⁻G⁺` for odd `|G|`.
pub fn check_plus_minus_factorization(g: &FiniteGroup, c: &Involution) -> Result<FactorizationReport> {
    if g.order() % 2 == 0 {
        return Err(Error::pre("the factorisation is stated for groups of odd order"));
    }
    let plus = Subgroup::fixed(g, c);
    let minus = antifixed_set(g, c);
    let covers = |left: &[usize], right: &[usize]| {
        let mut hit = vec![false; g.order()];
        for &a in left {
            for &b in right {
                hit[g.mul(a, b)] = true;
            }
        }
        hit.into_iter().all(|h| h)
    };
    let report = FactorizationReport {
        order: g.order(),
        plus: plus.order(),
        minus: minus.len(),
        plus_minus_covers: covers(plus.elements(), &minus),
        minus_plus_covers: covers(&minus, plus.elements()),
    };
    if report.order != report.plus * report.minus {
        return Err(Error::consistency(format!(
            "|G| = {} but |G+|·|G-| = {}·{}",
            report.order, report.plus, report.minus
        )));
    }
    if !report.plus_minus_covers || !report.minus_plus_covers {
        return Err(Error::consistency("G+ and G- do not factor G"));
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilityReport {
    pub subgroup_order: usize,
    pub normal: bool,
    /// For normal `H`: `G/H` abelian with `c` acting by inversion.
    pub quotient_inverted: Option<bool>,
}

/// For `G⁺ ≤ H`: asserts `H^c = H`, and when `H` is normal that `G/H` is
/// abelian with `c` inducing inversion.
pub fn check_stable_overgroup(g: &FiniteGroup, c: &Involution, h: &Subgroup) -> Result<StabilityReport> {
    let plus = Subgroup::fixed(g, c);
    if !plus.is_subgroup_of(h) {
        return Err(Error::pre("subgroup does not contain G+"));
    }
    if !h.is_c_stable(c) {
        return Err(Error::consistency("over-group of G+ is not stable under c"));
    }
    let normal = h.is_normal(g);
    let quotient_inverted = if normal {
        let q = quotient_group(g, h, c)?;
        let inverted = q.group.is_abelian()
            && (0..q.group.order()).all(|x| q.involution.apply(x) == q.group.inv(x));
        if !inverted {
            return Err(Error::consistency("G/H is not abelian with c acting by inversion"));
        }
        Some(true)
    } else {
        None
    };
    Ok(StabilityReport {
        subgroup_order: h.order(),
        normal,
        quotient_inverted,
    })
}

/// Index-`p` subgroups containing a normal `N ⊇ Φ(G)`, as kernels of
/// functionals on `G/N ≅ F_p^s`, in lexicographic order of the functional
/// (leading nonzero coordinate 1). Produced lazily.
pub fn index_p_kernels<'a>(
    g: &'a FiniteGroup,
    n: &Subgroup,
) -> Result<impl Iterator<Item = Subgroup> + 'a> {
    let p = g.prime().ok_or_else(|| Error::pre("not a p-group"))? as usize;
    // Basis of G/N picked greedily from the generators.
    let mut basis = Vec::new();
    let mut span = n.clone();
    for &s in g.generators() {
        if !span.contains(s) {
            basis.push(s);
            span = span.join(g, &Subgroup::generate(g, &[s]));
        }
    }
    if !span.is_whole() {
        return Err(Error::consistency("generators do not span the quotient"));
    }
    let dim = basis.len();
    let (proj, reps) = coset_projection(g, n);
    if reps.len() != p.pow(dim as u32) {
        return Err(Error::pre("quotient is not elementary abelian"));
    }
    let digits = move |code: usize| {
        let mut a = vec![0usize; dim];
        let mut rest = code;
        for slot in a.iter_mut().rev() {
            *slot = rest % p;
            rest /= p;
        }
        a
    };
    let mut coords = vec![Vec::new(); reps.len()];
    for code in 0..reps.len() {
        let a = digits(code);
        let mut x = 0;
        for (i, &ai) in a.iter().enumerate() {
            x = g.mul(x, g.pow(basis[i], ai as u64));
        }
        coords[proj[x]] = a;
    }
    let elem_coords: Vec<Vec<usize>> = proj.iter().map(|&q| coords[q].clone()).collect();
    Ok((1..reps.len())
        .map(digits)
        .filter(|f| f.iter().find(|&&x| x != 0) == Some(&1))
        .map(move |f| {
            Subgroup::from_members_unchecked(
                elem_coords
                    .iter()
                    .map(|v| v.iter().zip(&f).map(|(a, b)| a * b).sum::<usize>() % p == 0)
                    .collect(),
            )
        }))
}

/// A `c`-stable normal subgroup of index `p` containing `K`.
///
/// `K` must be `c`-stable and proper. Candidates containing `K·G⁺` are
/// preferred when that product is proper; all of those are automatically
/// stable. The first stable kernel in canonical order is returned and its
/// postconditions are re-checked.
pub fn index_p_oversubgroup(g: &FiniteGroup, c: &Involution, k: &Subgroup) -> Result<Subgroup> {
    if g.order() % 2 == 0 || g.prime().is_none() {
        return Err(Error::pre("expected a p-group of odd order"));
    }
    if k.is_whole() {
        return Err(Error::pre("K must be a proper subgroup"));
    }
    if !k.is_c_stable(c) {
        return Err(Error::pre("K must be stable under c"));
    }
    let p = g.prime().unwrap() as usize;
    let phi = Subgroup::frattini(g)?;
    let plus = Subgroup::fixed(g, c);
    let with_plus = Subgroup::normal_closure(g, &[k.elements(), plus.elements(), phi.elements()].concat());
    let base = if with_plus.is_whole() {
        Subgroup::normal_closure(g, &[k.elements(), phi.elements()].concat())
    } else {
        with_plus
    };
    let h = index_p_kernels(g, &base)?
        .find(|h| h.is_c_stable(c))
        .ok_or_else(|| Error::consistency("no c-stable subgroup of index p contains K"))?;
    let ok = h.order() * p == g.order() && k.is_subgroup_of(&h) && h.is_normal(g) && h.is_c_stable(c);
    if !ok {
        return Err(Error::consistency("index-p witness fails its postconditions"));
    }
    Ok(h)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientFixedReport {
    pub normal_order: usize,
    pub plus: usize,
    pub normal_plus: usize,
    pub quotient_plus: usize,
}

/// Asserts `|G⁺| / |N⁺| = |(G/N)⁺|` for normal `c`-stable `N`.
pub fn check_quotient_fixed(g: &FiniteGroup, c: &Involution, n: &Subgroup) -> Result<QuotientFixedReport> {
    let q = quotient_group(g, n, c)?;
    let plus = Subgroup::fixed(g, c);
    let report = QuotientFixedReport {
        normal_order: n.order(),
        plus: plus.order(),
        normal_plus: plus.intersect(n).order(),
        quotient_plus: Subgroup::fixed(&q.group, &q.involution).order(),
    };
    if report.plus != report.normal_plus * report.quotient_plus {
        return Err(Error::consistency(format!(
            "|G+|/|N+| = {}/{} but |(G/N)+| = {}",
            report.plus, report.normal_plus, report.quotient_plus
        )));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::spec::parse_group_spec;

    fn build(s: &str) -> (FiniteGroup, Involution) {
        parse_group_spec(s).unwrap().build().unwrap()
    }

    #[test]
    fn factorization_on_heisenberg() {
        let (g, c) = build("extraspecial:p=3,exp=p;c=a:inv,b:fix");
        let r = check_plus_minus_factorization(&g, &c).unwrap();
        assert_eq!((r.order, r.plus, r.minus), (27, 3, 9));
    }

    #[test]
    fn even_order_rejected() {
        let (g, c) = build("perm:gens=[(0 1)];c=id");
        assert!(matches!(check_plus_minus_factorization(&g, &c), Err(Error::Precondition(_))));
    }

    #[test]
    fn index_p_in_cyclic_nine() {
        let (g, c) = build("cyclic:p=3,k=2;c=inv");
        let h = index_p_oversubgroup(&g, &c, &Subgroup::trivial(&g)).unwrap();
        assert_eq!(h.order(), 3);
        assert!(index_p_oversubgroup(&g, &c, &Subgroup::whole(&g)).is_err());
    }

    #[test]
    fn index_p_in_mixed_square_is_the_fixed_factor() {
        let (g, c) = build("elemab:p=3,r=2;c=a:fix,b:inv");
        let h = index_p_oversubgroup(&g, &c, &Subgroup::trivial(&g)).unwrap();
        assert_eq!(h, Subgroup::fixed(&g, &c));
    }

    #[test]
    fn heisenberg_over_center() {
        let (g, c) = build("extraspecial:p=3,exp=p;c=a:inv,b:fix");
        let z = Subgroup::center(&g);
        assert_eq!(z.order(), 3);
        assert_eq!(index_p_kernels(&g, &Subgroup::frattini(&g).unwrap()).unwrap().count(), 4);
        let h = index_p_oversubgroup(&g, &c, &z).unwrap();
        assert_eq!(h.order(), 9);
        let r = check_quotient_fixed(&g, &c, &z).unwrap();
        assert_eq!((r.plus, r.normal_plus, r.quotient_plus), (3, 1, 3));
    }
}
