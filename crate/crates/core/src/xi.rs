//! The set `Ξ_G` of irreducible characters with `χ̂ = χ`, the decomposition
//! of the permutation character on `G/G⁺`, monomial realisations inside
//! `c`-stable subgroups, and the parity checks built on them.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::character::{c_twist, induce, inner_product, restrict, CharacterTable, ClassFunction};
use crate::cyclotomic::{CyclotomicJson, Rational};
use crate::error::{Error, Result};
use crate::group::lemmas::index_p_oversubgroup;
use crate::group::{EmbeddedSubgroup, FiniteGroup, Involution, Subgroup, DENSE_TABLE_MAX};

fn require_odd(g: &FiniteGroup) -> Result<()> {
    if g.order() % 2 == 0 {
        return Err(Error::pre("expected a group of odd order"));
    }
    Ok(())
}

fn as_count(r: Rational, what: &str) -> Result<i64> {
    if r.is_integer() && r >= Rational::zero() {
        Ok(r.to_integer())
    } else {
        Err(Error::consistency(format!("{what} is not a non-negative integer: {r}")))
    }
}

/// Table indices of the irreducibles fixed by the `c`-twist.
pub fn xi_set(g: &FiniteGroup, c: &Involution, table: &CharacterTable) -> Vec<usize> {
    table
        .irreducibles
        .iter()
        .enumerate()
        .filter(|(_, chi)| c_twist(g, c, chi) == **chi)
        .map(|(i, _)| i)
        .collect()
}

pub fn is_in_xi(g: &FiniteGroup, c: &Involution, chi: &ClassFunction) -> bool {
    c_twist(g, c, chi) == *chi
}

/// `Ind_{G⁺}^G 1`.
pub fn induced_trivial(g: &FiniteGroup, c: &Involution) -> Result<ClassFunction> {
    let plus = Subgroup::fixed(g, c).embed(g)?;
    Ok(induce(g, &plus, &ClassFunction::trivial(&plus.group)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InducedTrivialReport {
    /// `[G:G⁺]`.
    pub index: usize,
    /// Multiplicity of each irreducible, in table order.
    pub multiplicities: Vec<i64>,
    pub xi: Vec<usize>,
    pub degree_sum: i64,
}

/// Decomposes `Ind_{G⁺}^G 1` and asserts that it is the multiplicity-free
/// sum of `Ξ_G`.
pub fn decompose_induced_trivial(
    g: &FiniteGroup,
    c: &Involution,
    table: &CharacterTable,
) -> Result<InducedTrivialReport> {
    require_odd(g)?;
    let ind = induced_trivial(g, c)?;
    let multiplicities = table
        .decompose(g, &ind)?
        .into_iter()
        .map(|m| as_count(m, "multiplicity"))
        .collect::<Result<Vec<_>>>()?;
    let xi = xi_set(g, c, table);
    let support: Vec<usize> = (0..multiplicities.len()).filter(|&i| multiplicities[i] != 0).collect();
    if support != xi || xi.iter().any(|&i| multiplicities[i] != 1) {
        return Err(Error::consistency("Ind 1 from G+ is not the multiplicity-free sum of Xi"));
    }
    let degrees = table.degrees();
    let degree_sum = xi.iter().map(|&i| degrees[i]).sum();
    let index = g.order() / Subgroup::fixed(g, c).order();
    if degree_sum != index as i64 {
        return Err(Error::consistency("degrees over Xi do not sum to [G:G+]"));
    }
    Ok(InducedTrivialReport {
        index,
        multiplicities,
        xi,
        degree_sum,
    })
}

/// `⟨χ|_H, 1⟩_H`.
pub fn trivial_multiplicity(g: &FiniteGroup, h: &EmbeddedSubgroup, chi: &ClassFunction) -> Result<i64> {
    let res = restrict(g, h, chi);
    as_count(
        inner_product(&h.group, &res, &ClassFunction::trivial(&h.group))?,
        "trivial multiplicity",
    )
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct XiEquivalenceRow {
    pub character: usize,
    pub twist_fixed: bool,
    pub trivial_multiplicity: i64,
}

/// For each irreducible: `χ ∈ Ξ_G` iff `χ|_{G⁺}` contains `1` iff it
/// contains it exactly once.
pub fn check_xi_equivalences(
    g: &FiniteGroup,
    c: &Involution,
    table: &CharacterTable,
) -> Result<Vec<XiEquivalenceRow>> {
    require_odd(g)?;
    let plus = Subgroup::fixed(g, c).embed(g)?;
    table
        .irreducibles
        .iter()
        .enumerate()
        .map(|(i, chi)| {
            let row = XiEquivalenceRow {
                character: i,
                twist_fixed: is_in_xi(g, c, chi),
                trivial_multiplicity: trivial_multiplicity(g, &plus, chi)?,
            };
            let b = row.trivial_multiplicity >= 1;
            let exact = row.trivial_multiplicity == 1;
            if row.twist_fixed != b || b != exact {
                return Err(Error::consistency(format!(
                    "character {i}: twist-fixed = {}, trivial multiplicity = {}",
                    row.twist_fixed, row.trivial_multiplicity
                )));
            }
            Ok(row)
        })
        .collect()
}

/// For `G⁺ ≤ H ≤ G`: every `χ ∈ Ξ_H` has `⟨χ|_{G⁺}, 1⟩ ≥ 1`. Returns the
/// number of characters checked.
pub fn check_fixed_restriction(g: &FiniteGroup, c: &Involution, h: &Subgroup) -> Result<usize> {
    let plus = Subgroup::fixed(g, c);
    if !plus.is_subgroup_of(h) {
        return Err(Error::pre("subgroup does not contain G+"));
    }
    let he = h.embed(g)?;
    let ch = c.restrict(&he)?;
    let table = CharacterTable::compute(&he.group)?;
    let plus_in_h: Vec<usize> = plus.elements().iter().map(|&x| he.locate(x).unwrap()).collect();
    let plus_h = Subgroup::from_elements(&he.group, &plus_in_h)?.embed(&he.group)?;
    let xi = xi_set(&he.group, &ch, &table);
    for &i in &xi {
        if trivial_multiplicity(&he.group, &plus_h, &table.irreducibles[i])? < 1 {
            return Err(Error::consistency("a character of Xi_H misses the trivial character of G+"));
        }
    }
    Ok(xi.len())
}

/// One descent step of a monomial realisation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DescentStep {
    pub group_order: usize,
    /// Order of the subgroup generated by the support of the character.
    pub support_order: usize,
    pub subgroup_order: usize,
    pub subgroup_c_stable: bool,
    /// Table indices (in the subgroup's table) of the constituents of the
    /// restriction; there are exactly `p` of them.
    pub constituents: Vec<usize>,
    pub chosen: usize,
    pub induces_back: bool,
}

/// Witness that `χ = Ind_H^G ψ` with `ψ` linear, `ψ ∈ Ξ_H`, and `H` reached
/// from `G` through `c`-stable subgroups of index `p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct XiCertificate {
    pub character: usize,
    pub degree: i64,
    /// Element lists (indices in `G`) of `G = H_0 > H_1 > … > H_r = H`.
    pub chain: Vec<Vec<usize>>,
    pub steps: Vec<DescentStep>,
    /// `ψ` on the conjugacy classes of `H`.
    pub psi: Vec<CyclotomicJson>,
    pub psi_linear: bool,
    pub psi_in_xi: bool,
    /// Independent recomputation of `Ind_H^G ψ` compared against `χ`.
    pub induction_verified: bool,
}

impl XiCertificate {
    pub fn is_valid(&self) -> bool {
        self.psi_linear
            && self.psi_in_xi
            && self.induction_verified
            && self.steps.iter().all(|s| s.subgroup_c_stable && s.induces_back)
    }
}

/// Builds a certificate for `table.irreducibles[index] ∈ Ξ_G`.
pub fn monomial_realization(
    g: &FiniteGroup,
    c: &Involution,
    table: &CharacterTable,
    index: usize,
) -> Result<XiCertificate> {
    require_odd(g)?;
    let p = g.prime().ok_or_else(|| Error::pre("expected a p-group"))? as usize;
    let chi = table
        .irreducibles
        .get(index)
        .ok_or_else(|| Error::input("character index out of range"))?;
    if !is_in_xi(g, c, chi) {
        return Err(Error::input("character is not in Xi_G"));
    }
    let mut cur = g.clone();
    let mut cur_c = c.clone();
    let mut cur_chi = chi.clone();
    let mut to_top: Vec<usize> = (0..g.order()).collect();
    let mut chain = vec![to_top.clone()];
    let mut steps = Vec::new();
    while cur_chi.degree() != Some(1) {
        let cl = cur.classes();
        let support: Vec<usize> = (0..cur.order())
            .filter(|&x| !cur_chi.values()[cl.class_of[x]].is_zero())
            .collect();
        let k = Subgroup::generate(&cur, &support);
        let h = index_p_oversubgroup(&cur, &cur_c, &k)?;
        let he = h.embed(&cur)?;
        let hc = cur_c.restrict(&he)?;
        let htable = CharacterTable::compute(&he.group)?;
        let res = restrict(&cur, &he, &cur_chi);
        let mults = htable.decompose(&he.group, &res)?;
        let constituents: Vec<usize> = (0..mults.len()).filter(|&i| !mults[i].is_zero()).collect();
        if constituents.len() != p || constituents.iter().any(|&i| !mults[i].is_one()) {
            return Err(Error::consistency("restriction does not split into p distinct constituents"));
        }
        let chosen = *constituents
            .iter()
            .find(|&&i| is_in_xi(&he.group, &hc, &htable.irreducibles[i]))
            .ok_or_else(|| Error::consistency("no twist-fixed constituent"))?;
        let psi = htable.irreducibles[chosen].clone();
        let induces_back = induce(&cur, &he, &psi) == cur_chi;
        steps.push(DescentStep {
            group_order: cur.order(),
            support_order: k.order(),
            subgroup_order: h.order(),
            subgroup_c_stable: h.is_c_stable(&cur_c),
            constituents,
            chosen,
            induces_back,
        });
        to_top = he.embedding.iter().map(|&x| to_top[x]).collect();
        chain.push(to_top.clone());
        cur = he.group;
        cur_c = hc;
        cur_chi = psi;
    }
    // Re-embed the final subgroup directly in G and induce in one shot.
    let top_h = Subgroup::from_elements(g, &to_top)?.embed(g)?;
    let top_c = c.restrict(&top_h)?;
    let induction_verified = induce(g, &top_h, &cur_chi) == *chi;
    Ok(XiCertificate {
        character: index,
        degree: chi.degree().unwrap_or(0),
        chain,
        steps,
        psi: cur_chi.to_json(),
        psi_linear: cur_chi.degree() == Some(1),
        psi_in_xi: is_in_xi(&top_h.group, &top_c, &cur_chi),
        induction_verified,
    })
}

/// `(⟨ρ|_H, 1⟩ mod 2, ⟨ρ, 1⟩ mod 2)` for an integer-valued character `ρ` of
/// an odd `p`-group; the two parities must agree.
pub fn fixed_dim_parity(g: &FiniteGroup, rho: &ClassFunction, h: &Subgroup) -> Result<(u8, u8)> {
    require_odd(g)?;
    if g.prime().is_none() {
        return Err(Error::pre("expected a p-group"));
    }
    if rho.integer_values().is_none() {
        return Err(Error::input("character must take rational integer values"));
    }
    let he = h.embed(g)?;
    let dim_h = trivial_multiplicity(g, &he, rho).map_err(|_| Error::input("not a character"))?;
    let dim_g = as_count(
        inner_product(g, rho, &ClassFunction::trivial(g))?,
        "fixed dimension",
    )
    .map_err(|_| Error::input("not a character"))?;
    let pair = ((dim_h % 2) as u8, (dim_g % 2) as u8);
    if pair.0 != pair.1 {
        return Err(Error::consistency(format!(
            "fixed dimensions {dim_h} (subgroup) and {dim_g} (group) differ in parity"
        )));
    }
    Ok(pair)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParityReport {
    pub parity: u8,
    /// `(table index, ⟨χ, ρ⟩)` for each `χ ∈ Ξ_G`.
    pub multiplicities: Vec<(usize, i64)>,
    pub consistent: bool,
    pub contains_induced_trivial: bool,
}

/// Checks a candidate character `ρ` against an asserted parity `r`: every
/// `χ ∈ Ξ_G` should occur in `ρ` with multiplicity `≡ r (mod 2)`.
pub fn parity_consistency(
    g: &FiniteGroup,
    c: &Involution,
    table: &CharacterTable,
    rho: &ClassFunction,
    r: u8,
) -> Result<ParityReport> {
    if r > 1 {
        return Err(Error::input("parity must be 0 or 1"));
    }
    let xi = xi_set(g, c, table);
    let multiplicities = xi
        .iter()
        .map(|&i| {
            let m = inner_product(g, &table.irreducibles[i], rho)?;
            if !m.is_integer() {
                return Err(Error::input("rho is not a virtual character"));
            }
            Ok((i, m.to_integer()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ParityReport {
        parity: r,
        consistent: multiplicities.iter().all(|&(_, m)| m.rem_euclid(2) == r as i64),
        contains_induced_trivial: multiplicities.iter().all(|&(_, m)| m >= 1),
        multiplicities,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InducedRealReport {
    pub character: usize,
    pub induced_degree: i64,
    pub irreducible: bool,
    pub real_valued: bool,
    /// Whether `G ⋊ ⟨c⟩` was built explicitly (otherwise the values come
    /// from the closed formula on `G` alone).
    pub explicit_extension: bool,
}

/// Induces `χ ∈ Ξ_G` (nontrivial) to `G ⋊ ⟨c⟩` and reports whether the
/// result is irreducible and real-valued.
pub fn induced_real_check(
    g: &FiniteGroup,
    c: &Involution,
    table: &CharacterTable,
    index: usize,
) -> Result<InducedRealReport> {
    require_odd(g)?;
    let chi = table
        .irreducibles
        .get(index)
        .ok_or_else(|| Error::input("character index out of range"))?;
    if !is_in_xi(g, c, chi) {
        return Err(Error::input("character is not in Xi_G"));
    }
    if index == 0 {
        return Err(Error::input("character must be nontrivial"));
    }
    // On G the induced character is χ + χ∘c and it vanishes off G, so its
    // norm in the extension is 1 + ⟨χ, χ∘c⟩_G.
    let perm = c.class_permutation(g);
    let chi_c = ClassFunction::new(perm.iter().map(|&j| chi.values()[j].clone()).collect());
    let on_g = chi.add(&chi_c);
    let formula_norm = Rational::one() + inner_product(g, chi, &chi_c)?;
    let formula_real = on_g.is_real();
    let degree = on_g.degree().unwrap_or(0);
    if 2 * g.order() > DENSE_TABLE_MAX {
        return Ok(InducedRealReport {
            character: index,
            induced_degree: degree,
            irreducible: formula_norm.is_one(),
            real_valued: formula_real,
            explicit_extension: false,
        });
    }
    let ext = g.semidirect_with(c)?;
    let base: Vec<usize> = (0..g.order()).collect();
    let sub = Subgroup::from_elements(&ext, &base)?.embed(&ext)?;
    let ind = induce(&ext, &sub, chi);
    let norm = inner_product(&ext, &ind, &ind)?;
    let report = InducedRealReport {
        character: index,
        induced_degree: ind.degree().unwrap_or(0),
        irreducible: norm.is_one(),
        real_valued: ind.is_real(),
        explicit_extension: true,
    };
    if report.irreducible != formula_norm.is_one() || report.real_valued != formula_real {
        return Err(Error::consistency("explicit extension disagrees with the closed formula"));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::spec::parse_group_spec;

    fn setup(s: &str) -> (FiniteGroup, Involution, CharacterTable) {
        let (g, c) = parse_group_spec(s).unwrap().build().unwrap();
        let t = CharacterTable::compute(&g).unwrap();
        (g, c, t)
    }

    #[test]
    fn xi_of_small_cases() {
        let (g, c, t) = setup("cyclic:p=5,k=1;c=inv");
        assert_eq!(xi_set(&g, &c, &t).len(), 5);
        let (g, c, t) = setup("cyclic:p=3,k=1;c=id");
        assert_eq!(xi_set(&g, &c, &t), vec![0]);
        let (g, c, t) = setup("extraspecial:p=3,exp=p;c=a:inv,b:fix");
        let xi = xi_set(&g, &c, &t);
        let degs: Vec<i64> = xi.iter().map(|&i| t.degrees()[i]).collect();
        assert_eq!(degs, vec![1, 1, 1, 3, 3]);
        let r = decompose_induced_trivial(&g, &c, &t).unwrap();
        assert_eq!((r.index, r.degree_sum), (9, 9));
    }

    #[test]
    fn heisenberg_certificates() {
        let (g, c, t) = setup("extraspecial:p=3,exp=p;c=a:inv,b:fix");
        for i in xi_set(&g, &c, &t) {
            let cert = monomial_realization(&g, &c, &t, i).unwrap();
            assert!(cert.is_valid());
            if cert.degree == 3 {
                assert_eq!(cert.chain.len(), 2);
                assert_eq!(cert.chain[1].len(), 9);
            } else {
                assert_eq!(cert.chain.len(), 1);
            }
            let real = induced_real_check(&g, &c, &t, i);
            if i != 0 {
                let r = real.unwrap();
                assert!(r.irreducible && r.real_valued && r.explicit_extension);
                assert_eq!(r.induced_degree, 2 * cert.degree);
            }
        }
    }

    #[test]
    fn parity_of_induced_trivial() {
        let (g, c, t) = setup("extraspecial:p=3,exp=p;c=a:inv,b:fix");
        let ind = induced_trivial(&g, &c).unwrap();
        let rep = parity_consistency(&g, &c, &t, &ind, 1).unwrap();
        assert!(rep.consistent && rep.contains_induced_trivial);
        let twice = ind.add(&ind);
        assert!(!parity_consistency(&g, &c, &t, &twice, 1).unwrap().consistent);
        let plus = Subgroup::fixed(&g, &c);
        let (a, b) = fixed_dim_parity(&g, &ind, &plus).unwrap();
        assert_eq!(a, b);
    }
}
