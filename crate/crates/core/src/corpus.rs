//! Builders for the test corpus and for the projective congruence groups
//! `PGL_2(Z/p^n)` with their reduction filtration.

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::cyclotomic::{format_rational, Rational};
use crate::error::{Error, Result};
use crate::group::ambient::is_scalar_mod;
use crate::group::spec::{parse_group_spec, Family, GroupSpec, InvolutionSpec};
use crate::group::{Ambient, FiniteGroup, Involution, Subgroup};
use crate::modarith::{is_prime, prime_power};

/// `PGL_d(Z/p^n)`; only `d = 2` is supported.
pub fn build_pgl_level(d: usize, p: u64, n: u32, cap: usize) -> Result<FiniteGroup> {
    if d != 2 {
        return Err(Error::input("only PGL_2 is supported"));
    }
    if !is_prime(p) || p == 2 || n == 0 {
        return Err(Error::input("expected an odd prime p and n >= 1"));
    }
    let spec = GroupSpec {
        family: Family::Pgl { p, n },
        involution: InvolutionSpec::Identity,
    };
    Ok(spec.build_with_cap(cap)?.0)
}

/// Fit of `[𝒢_b : 𝒢_i] = b · p^{(i - base)·δ}` over the available levels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndexFit {
    /// First level whose subgroup has `p`-power order.
    pub base_level: usize,
    pub delta: Option<u32>,
    /// The constant, as `"n"` or `"n/d"`.
    pub b: Option<String>,
    /// Whether one `(b, δ)` fits every level after the base.
    pub consistent: bool,
}

fn exact_log(x: usize, p: u64) -> Option<u32> {
    if x == 1 {
        return Some(0);
    }
    match prime_power(x as u64) {
        Some((q, k)) if q == p => Some(k),
        _ => None,
    }
}

fn fit_index_law(orders: &[usize], p: u64) -> IndexFit {
    let n = orders.len() - 1;
    let base = (0..=n).find(|&i| exact_log(orders[i], p).is_some()).unwrap_or(n);
    if base == n {
        return IndexFit {
            base_level: base,
            delta: Some(0),
            b: Some("1".into()),
            consistent: true,
        };
    }
    let last = orders[n - 1] / orders[n];
    let Some(delta) = exact_log(last, p).filter(|_| orders[n - 1] % orders[n] == 0) else {
        return IndexFit {
            base_level: base,
            delta: None,
            b: None,
            consistent: false,
        };
    };
    let bs: Vec<Rational> = (base + 1..=n)
        .map(|i| {
            let idx = (orders[base] / orders[i]) as i64;
            Rational::new(idx, (p as i64).pow(delta * (i - base) as u32))
        })
        .collect();
    let consistent = bs.windows(2).all(|w| w[0] == w[1]);
    IndexFit {
        base_level: base,
        delta: Some(delta),
        b: consistent.then(|| format_rational(&bs[0])),
        consistent,
    }
}

/// Orders along the reduction filtration, with the exponent fits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiltrationLevel {
    pub p: u64,
    pub level: u32,
    pub ambient: Ambient,
    pub group_order: usize,
    /// `|𝒢_i|` for `i = 0..=n`, where `𝒢_i` is the part scalar mod `p^i`.
    pub kernel_orders: Vec<usize>,
    /// `|𝒢_i ∩ G⁺|` for the same levels.
    pub fixed_orders: Vec<usize>,
    pub kernel_fit: IndexFit,
    pub fixed_fit: IndexFit,
}

/// Computes the reduction filtration of a subgroup of `PGL_d(Z/p^n)` or
/// `GL_d(Z/p^n)`, and the fixed parts under `c`.
pub fn kernel_filtration(g: &FiniteGroup, c: &Involution) -> Result<FiltrationLevel> {
    let (dim, modulus) = match *g.ambient() {
        Ambient::Matrix { dim, modulus } | Ambient::Projective { dim, modulus } => (dim, modulus),
        _ => return Err(Error::input("filtration needs a matrix group")),
    };
    let (p, n) = prime_power(modulus).ok_or_else(|| Error::input("modulus must be a prime power"))?;
    let plus = Subgroup::fixed(g, c);
    let mut kernel_orders = Vec::new();
    let mut fixed_orders = Vec::new();
    for i in 0..=n {
        let q = p.pow(i);
        let level: Vec<usize> = (0..g.order()).filter(|&x| is_scalar_mod(g.label(x), dim, q)).collect();
        fixed_orders.push(level.iter().filter(|&&x| plus.contains(x)).count());
        kernel_orders.push(level.len());
    }
    Ok(FiltrationLevel {
        p,
        level: n,
        ambient: g.ambient().clone(),
        group_order: g.order(),
        kernel_fit: fit_index_law(&kernel_orders, p),
        fixed_fit: fit_index_law(&fixed_orders, p),
        kernel_orders,
        fixed_orders,
    })
}

/// Conjugation by `diag(I_a, -I_b)` and its fixed subgroup. For `2×2`
/// matrices the fixed subgroup is checked to be the diagonal and
/// antidiagonal elements.
pub fn standard_involution_fixed(g: &FiniteGroup, a: usize, b: usize) -> Result<(Involution, Subgroup)> {
    let (dim, modulus) = match *g.ambient() {
        Ambient::Matrix { dim, modulus } | Ambient::Projective { dim, modulus } => (dim, modulus),
        _ => return Err(Error::input("needs a matrix group")),
    };
    if a + b != dim {
        return Err(Error::input("block sizes must add up to the dimension"));
    }
    let mut diag = vec![0u64; dim * dim];
    for i in 0..dim {
        diag[i * dim + i] = if i < a { 1 } else { modulus - 1 };
    }
    let c = Involution::conjugation(g, &diag)?;
    let fixed = Subgroup::fixed(g, &c);
    if dim == 2 && a == 1 {
        let expected: Vec<usize> = (0..g.order())
            .filter(|&x| {
                let m = g.label(x);
                (m[1] == 0 && m[2] == 0) || (m[0] == 0 && m[3] == 0)
            })
            .collect();
        let projective = matches!(g.ambient(), Ambient::Projective { .. });
        let diagonal_only: Vec<usize> = expected
            .iter()
            .copied()
            .filter(|&x| g.label(x)[1] == 0)
            .collect();
        let want = if projective { expected } else { diagonal_only };
        if fixed.elements() != want.as_slice() {
            return Err(Error::consistency("fixed subgroup differs from the diagonal/antidiagonal set"));
        }
    }
    Ok((c, fixed))
}

/// A named `(G, c)` pair.
#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub group: FiniteGroup,
    pub involution: Involution,
}

/// Spec strings of the corpus for odd primes up to `pmax`, in order.
pub fn corpus_specs(pmax: u64) -> Vec<String> {
    let mut out = Vec::new();
    for p in (3..=pmax).filter(|&p| is_prime(p)) {
        for k in 1..=3 {
            out.push(format!("cyclic:p={p},k={k};c=inv"));
        }
        for k in 1..=2 {
            out.push(format!("cyclic:p={p},k={k};c=id"));
        }
        out.push(format!("elemab:p={p},r=2;c=a:fix,b:inv"));
        out.push(format!("elemab:p={p},r=2;c=inv"));
        out.push(format!("extraspecial:p={p},exp=p;c=a:inv,b:fix"));
        out.push(format!("extraspecial:p={p},exp=p2;c=a:inv,b:fix"));
        out.push(format!("extraspecial:p={p},exp=p2;c=a:inv,b:b*a^{p}"));
        out.push(format!("pglkernel:p={p},n=2;c=diag(1,-1)"));
        if p == 3 {
            out.push("glkernel:p=3,n=2;c=diag(1,-1)".into());
            out.push("unitri:p=3,d=3;c=diag(1,-1,1)".into());
            out.push("unitri:p=3,d=4;c=diag(1,-1,1,-1)".into());
            out.push("pglkernel:p=3,n=3;c=diag(1,-1)".into());
        }
    }
    out
}

/// The corpus: every spec whose group fits under `size_cap`, built in
/// parallel and returned in spec order.
pub fn corpus(pmax: u64, size_cap: usize) -> Result<Vec<CorpusEntry>> {
    let built: Vec<Result<Option<CorpusEntry>>> = corpus_specs(pmax)
        .into_par_iter()
        .map(|name| {
            let spec = parse_group_spec(&name)?;
            match spec.build_with_cap(size_cap) {
                Ok((group, involution)) => Ok(Some(CorpusEntry {
                    name,
                    group,
                    involution,
                })),
                Err(Error::SizeCap { .. }) => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect();
    built.into_iter().filter_map(Result::transpose).collect()
}

pub const MANIFEST_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ManifestEntry {
    pub name: String,
    pub order: usize,
    pub plus_order: usize,
    pub ambient: String,
    pub abelian: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorpusManifest {
    pub schema_version: u32,
    pub pmax: u64,
    pub size_cap: usize,
    pub entries: Vec<ManifestEntry>,
}

pub fn corpus_manifest(pmax: u64, size_cap: usize, entries: &[CorpusEntry]) -> CorpusManifest {
    CorpusManifest {
        schema_version: MANIFEST_SCHEMA_VERSION,
        pmax,
        size_cap,
        entries: entries
            .iter()
            .map(|e| ManifestEntry {
                name: e.name.clone(),
                order: e.group.order(),
                plus_order: Subgroup::fixed(&e.group, &e.involution).order(),
                ambient: e.group.ambient().describe(),
                abelian: e.group.is_abelian(),
            })
            .collect(),
    }
}

/// `b` as a rational, for callers that want to compare numerically.
pub fn parse_fit_constant(b: &str) -> Result<Rational> {
    let r = crate::cyclotomic::parse_rational(b)?;
    if r <= Rational::zero() {
        return Err(Error::input("constant must be positive"));
    }
    Ok(r)
}

impl IndexFit {
    pub fn is_exact(&self) -> bool {
        self.consistent && self.b.as_deref().and_then(|b| parse_fit_constant(b).ok()) == Some(Rational::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pgl_orders() {
        assert_eq!(build_pgl_level(2, 3, 1, 100).unwrap().order(), 24);
        assert!(build_pgl_level(3, 3, 1, 100).is_err());
    }

    #[test]
    fn filtration_of_pgl2_mod_9() {
        let g = build_pgl_level(2, 3, 2, 1000).unwrap();
        assert_eq!(g.order(), 648);
        let (c, fixed) = standard_involution_fixed(&g, 1, 1).unwrap();
        assert!(fixed.order() > 0);
        let f = kernel_filtration(&g, &c).unwrap();
        assert_eq!(f.kernel_orders, vec![648, 27, 1]);
        assert_eq!(f.kernel_fit.base_level, 1);
        assert_eq!(f.kernel_fit.delta, Some(3));
        assert_eq!(f.kernel_fit.b.as_deref(), Some("1"));
        assert_eq!(f.fixed_fit.delta, Some(1));
    }

    #[test]
    fn trivial_group_fit() {
        let fit = fit_index_law(&[1, 1, 1], 3);
        assert_eq!((fit.delta, fit.b.as_deref()), (Some(0), Some("1")));
    }

    #[test]
    fn corpus_contents() {
        let small = corpus(3, 100).unwrap();
        let names: Vec<&str> = small.iter().map(|e| e.name.as_str()).collect();
        for want in [
            "cyclic:p=3,k=1;c=inv",
            "cyclic:p=3,k=2;c=inv",
            "cyclic:p=3,k=3;c=inv",
            "elemab:p=3,r=2;c=a:fix,b:inv",
            "extraspecial:p=3,exp=p;c=a:inv,b:fix",
            "extraspecial:p=3,exp=p2;c=a:inv,b:fix",
        ] {
            assert!(names.contains(&want), "{want}");
        }
        assert!(small.len() >= 8);
        assert!(corpus(3, 1).unwrap().is_empty());
        let five = corpus(5, 200).unwrap();
        assert!(five.iter().any(|e| e.name.starts_with("extraspecial:p=5,exp=p;")));
        assert!(five.iter().all(|e| e.group.order() <= 200 && e.group.order() % 2 == 1));
    }
}
