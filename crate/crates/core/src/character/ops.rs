use num_traits::One;

use crate::cyclotomic::{Cyclotomic, Rational};
use crate::error::{Error, Result};
use crate::group::{EmbeddedSubgroup, FiniteGroup, Involution};
use crate::modarith::{is_prime, lcm};

use super::ClassFunction;

fn common_conductor<'a>(values: impl Iterator<Item = &'a Cyclotomic>) -> u32 {
    values.fold(1u64, |acc, v| lcm(acc, v.conductor() as u64)) as u32
}

/// `⟨α, β⟩ = |G|^{-1} Σ_g α(g) conj(β(g))`, required to be rational.
pub fn inner_product(g: &FiniteGroup, a: &ClassFunction, b: &ClassFunction) -> Result<Rational> {
    let cl = g.classes();
    if a.len() != cl.len() || b.len() != cl.len() {
        return Err(Error::input("class function length differs from the class count"));
    }
    let e = common_conductor(a.values().iter().chain(b.values()));
    let n = g.order() as i64;
    let mut acc = Cyclotomic::zero(e);
    for i in 0..cl.len() {
        let x = a.values()[i].lift(e);
        let y = b.values()[i].conj().lift(e);
        acc.add_product(&x, &y, Rational::new(cl.size(i) as i64, n));
    }
    acc.to_rational()
        .ok_or_else(|| Error::consistency("inner product is not rational"))
}

/// `χ|_H` as a class function on the subgroup's own classes.
pub fn restrict(g: &FiniteGroup, h: &EmbeddedSubgroup, chi: &ClassFunction) -> ClassFunction {
    let fusion = h.class_fusion(g);
    ClassFunction::new(fusion.iter().map(|&i| chi.values()[i].clone()).collect())
}

/// `Ind_H^G ψ`, by summing `ψ` over the `H`-classes fusing into each
/// `G`-class: `Ind ψ(g_i) = |G| / (|H| h_i) · Σ_{D ⊆ C_i} |D| ψ(D)`.
pub fn induce(g: &FiniteGroup, h: &EmbeddedSubgroup, psi: &ClassFunction) -> ClassFunction {
    let fusion = h.class_fusion(g);
    let hcl = h.group.classes();
    let gcl = g.classes();
    let e = lcm(g.exponent(), common_conductor(psi.values().iter()) as u64) as u32;
    let mut values = vec![Cyclotomic::zero(e); gcl.len()];
    for (d, &i) in fusion.iter().enumerate() {
        values[i].add_scaled(&psi.values()[d].lift(e), Rational::from_integer(hcl.size(d) as i64));
    }
    let ratio = (g.order() / h.group.order()) as i64;
    for (i, v) in values.iter_mut().enumerate() {
        *v = v.scale(Rational::new(ratio, gcl.size(i) as i64));
    }
    ClassFunction::new(values)
}

/// `χ̂(g) = conj(χ(g^c))`.
pub fn c_twist(g: &FiniteGroup, c: &Involution, chi: &ClassFunction) -> ClassFunction {
    let perm = c.class_permutation(g);
    ClassFunction::new(perm.iter().map(|&j| chi.values()[j].conj()).collect())
}

/// For `H` normal of prime index and `ψ` irreducible on `H`: whether the
/// `p` conjugates `ψ^s` are pairwise distinct, i.e. whether `Ind ψ` is
/// irreducible.
pub fn mackey_irreducible(g: &FiniteGroup, h: &EmbeddedSubgroup, psi: &ClassFunction) -> Result<bool> {
    let idx = g.order() / h.group.order();
    if g.order() % h.group.order() != 0 || !is_prime(idx as u64) {
        return Err(Error::pre("subgroup must have prime index"));
    }
    let normal = h
        .embedding
        .iter()
        .all(|&x| g.generators().iter().all(|&s| h.locate(g.conjugate(x, s)).is_some()));
    if !normal {
        return Err(Error::pre("subgroup must be normal"));
    }
    if inner_product(&h.group, psi, psi)? != Rational::one() {
        return Err(Error::pre("character must be irreducible"));
    }
    let s = (0..g.order())
        .find(|&x| h.locate(x).is_none())
        .expect("proper subgroup");
    let hcl = h.group.classes();
    let mut conjugates: Vec<ClassFunction> = Vec::with_capacity(idx);
    let mut st = 0;
    for _ in 0..idx {
        // ψ^{s^t}(x) = ψ(s^t x s^{-t})
        let values = (0..hcl.len())
            .map(|j| {
                let x = h.embedding[hcl.representative(j)];
                let y = g.conjugate(x, g.inv(st));
                psi.values()[hcl.class_of[h.locate(y).unwrap()]].clone()
            })
            .collect();
        conjugates.push(ClassFunction::new(values));
        st = g.mul(st, s);
    }
    Ok((0..idx).all(|a| (a + 1..idx).all(|b| conjugates[a] != conjugates[b])))
}
