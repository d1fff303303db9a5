//! The group-spec mini-language.
//!
//! ```text
//! spec      := family ":" params [";" "c=" involution]
//! params    := param ("," param)*
//! param     := key "=" value
//! involution:= "id" | "inv" | "diag(" int ("," int)* ")" | "conj(" cycles ")"
//!            | image ("," image)*
//! image     := gen ":" ("fix" | "inv" | word)
//! word      := gen ["^" int] ("*" gen ["^" int])*
//! ```
//!
//! Families: `cyclic:p,k`, `elemab:p,r`, `extraspecial:p,exp=p|p2`,
//! `unitri:p,d`, `glkernel:p,n`, `pglkernel:p,n`, `gl:p,n`, `pgl:d=2,p,n`,
//! `perm:gens=[(..),(..)],degree`. Generators are named `a, b, c, ...` in
//! the order the family lists them; generators missing from an image list
//! are fixed. An omitted involution means `c=id`.

use std::fmt;

use crate::error::{Error, Result};
use crate::modarith::{gcd, is_prime, pow_mod};

use super::ambient::{identity_matrix, parse_cycles};
use super::{Ambient, FiniteGroup, Involution, DEFAULT_SIZE_CAP};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    Cyclic { p: u64, k: u32 },
    ElemAb { p: u64, r: usize },
    Extraspecial { p: u64, exp_p2: bool },
    Unitri { p: u64, d: usize },
    GlKernel { p: u64, n: u32 },
    PglKernel { p: u64, n: u32 },
    Gl { p: u64, n: u32 },
    Pgl { p: u64, n: u32 },
    Perm { degree: usize, gens: Vec<Vec<u64>> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Image {
    Fix,
    Inv,
    Word(Vec<(usize, i64)>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InvolutionSpec {
    Identity,
    Inversion,
    Diag(Vec<i64>),
    Conj(Vec<u64>),
    Images(Vec<(usize, Image)>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpec {
    pub family: Family,
    pub involution: InvolutionSpec,
}

fn perr(pos: usize, token: &str, message: impl Into<String>) -> Error {
    Error::Parse {
        pos,
        token: token.to_string(),
        message: message.into(),
    }
}

/// Splits at `sep` outside brackets, returning `(offset, piece)` pairs.
fn split_top(s: &str, base: usize, sep: char) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ if ch == sep && depth == 0 => {
                out.push((base + start, &s[start..i]));
                start = i + ch.len_utf8();
            }
            _ => {}
        }
    }
    out.push((base + start, &s[start..]));
    out
}

fn gen_index(name: &str, pos: usize) -> Result<usize> {
    let mut chars = name.chars();
    match (chars.next(), chars.next()) {
        (Some(ch @ 'a'..='z'), None) => Ok(ch as usize - 'a' as usize),
        _ => Err(perr(pos, name, "generator names are single letters a, b, c, ...")),
    }
}

fn parse_int<T: std::str::FromStr>(s: &str, pos: usize) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| perr(pos, s, "expected an integer"))
}

struct Params<'a> {
    items: Vec<(usize, &'a str, &'a str)>,
    used: Vec<bool>,
    colon: usize,
    family: &'a str,
}

impl<'a> Params<'a> {
    fn get(&mut self, key: &str) -> Option<(usize, &'a str)> {
        let i = self.items.iter().position(|&(_, k, _)| k == key)?;
        self.used[i] = true;
        Some((self.items[i].0, self.items[i].2))
    }

    fn prime(&mut self) -> Result<u64> {
        let (pos, v) = self
            .get("p")
            .ok_or_else(|| perr(self.colon, self.family, "missing parameter `p`"))?;
        let p: u64 = parse_int(v, pos)?;
        if !is_prime(p) {
            return Err(perr(pos, v, "p must be prime"));
        }
        Ok(p)
    }

    fn int_or(&mut self, key: &str, default: u32) -> Result<u32> {
        match self.get(key) {
            Some((pos, v)) => {
                let x: u32 = parse_int(v, pos)?;
                if x == 0 {
                    return Err(perr(pos, v, format!("`{key}` must be positive")));
                }
                Ok(x)
            }
            None => Ok(default),
        }
    }
}

pub fn parse_group_spec(src: &str) -> Result<GroupSpec> {
    let (head, inv_part) = match src.find(';') {
        Some(i) => (&src[..i], Some((i + 1, &src[i + 1..]))),
        None => (src, None),
    };
    let colon = head
        .find(':')
        .ok_or_else(|| perr(head.len(), head, "expected `family:params`"))?;
    let family_name = head[..colon].trim();
    let mut params: Vec<(usize, &str, &str)> = Vec::new();
    if !head[colon + 1..].trim().is_empty() {
        for (pos, piece) in split_top(&head[colon + 1..], colon + 1, ',') {
            let eq = piece
                .find('=')
                .ok_or_else(|| perr(pos, piece, "expected `key=value`"))?;
            params.push((pos, piece[..eq].trim(), piece[eq + 1..].trim()));
        }
    }
    let mut ps = Params {
        items: params,
        used: Vec::new(),
        colon,
        family: family_name,
    };
    ps.used = vec![false; ps.items.len()];
    let odd = |p: u64| -> Result<u64> {
        if p == 2 {
            Err(perr(colon, family_name, "this family needs an odd prime"))
        } else {
            Ok(p)
        }
    };
    let family = match family_name {
        "cyclic" => Family::Cyclic {
            p: ps.prime()?,
            k: ps.int_or("k", 1)?,
        },
        "elemab" => Family::ElemAb {
            p: ps.prime()?,
            r: ps.int_or("r", 2)? as usize,
        },
        "extraspecial" => {
            let p = odd(ps.prime()?)?;
            let exp_p2 = match ps.get("exp") {
                None | Some((_, "p")) => false,
                Some((_, "p2")) => true,
                Some((pos, v)) => return Err(perr(pos, v, "exp must be `p` or `p2`")),
            };
            Family::Extraspecial { p, exp_p2 }
        }
        "unitri" => Family::Unitri {
            p: ps.prime()?,
            d: ps.int_or("d", 3)? as usize,
        },
        "glkernel" | "pglkernel" | "gl" | "pgl" => {
            if let Some((pos, v)) = ps.get("d") {
                if v != "2" {
                    return Err(perr(pos, v, "only d=2 is supported"));
                }
            }
            let p = odd(ps.prime()?)?;
            let n = ps.int_or("n", 1)?;
            match family_name {
                "glkernel" | "pglkernel" if n < 2 => {
                    return Err(perr(colon, family_name, "kernel families need n >= 2"))
                }
                "glkernel" => Family::GlKernel { p, n },
                "pglkernel" => Family::PglKernel { p, n },
                "gl" => Family::Gl { p, n },
                _ => Family::Pgl { p, n },
            }
        }
        "perm" => {
            let (pos, v) = ps.get("gens").ok_or_else(|| perr(colon, family_name, "missing `gens=[...]`"))?;
            let inner = v
                .strip_prefix('[')
                .and_then(|x| x.strip_suffix(']'))
                .ok_or_else(|| perr(pos, v, "expected `[cycles, ...]`"))?;
            let pieces = split_top(inner, pos, ',');
            let max_point = inner
                .split(|ch: char| !ch.is_ascii_digit())
                .filter_map(|t| t.parse::<usize>().ok())
                .max()
                .unwrap_or(0);
            let degree = match ps.get("degree") {
                Some((dpos, dv)) => parse_int(dv, dpos)?,
                None => max_point + 1,
            };
            let gens = pieces
                .into_iter()
                .filter(|(_, t)| !t.trim().is_empty())
                .map(|(ppos, t)| parse_cycles(t, degree).map_err(|e| perr(ppos, t, e.to_string())))
                .collect::<Result<Vec<_>>>()?;
            Family::Perm { degree, gens }
        }
        other => return Err(perr(0, other, "unknown group family")),
    };
    if let Some(i) = ps.used.iter().position(|u| !u) {
        let (pos, key, _) = ps.items[i];
        return Err(perr(pos, key, "unknown parameter"));
    }
    let involution = match inv_part {
        None => InvolutionSpec::Identity,
        Some((pos, text)) => parse_involution(text, pos)?,
    };
    Ok(GroupSpec { family, involution })
}

fn parse_involution(text: &str, base: usize) -> Result<InvolutionSpec> {
    let t = text.trim();
    let body = t
        .strip_prefix("c=")
        .ok_or_else(|| perr(base, t, "expected `c=...`"))?;
    let base = base + (text.len() - text.trim_start().len()) + 2;
    let call = |name: &str| {
        body.strip_prefix(name)
            .and_then(|x| x.strip_prefix('('))
            .and_then(|x| x.strip_suffix(')'))
    };
    if body == "id" {
        return Ok(InvolutionSpec::Identity);
    }
    if body == "inv" {
        return Ok(InvolutionSpec::Inversion);
    }
    if let Some(args) = call("diag") {
        let entries = split_top(args, base + 5, ',')
            .into_iter()
            .map(|(pos, s)| {
                let v: i64 = parse_int(s, pos)?;
                if v != 1 && v != -1 {
                    return Err(perr(pos, s, "diagonal entries must be 1 or -1"));
                }
                Ok(v)
            })
            .collect::<Result<Vec<_>>>()?;
        return Ok(InvolutionSpec::Diag(entries));
    }
    if let Some(args) = call("conj") {
        let max_point = args
            .split(|ch: char| !ch.is_ascii_digit())
            .filter_map(|t| t.parse::<usize>().ok())
            .max()
            .unwrap_or(0);
        let perm = parse_cycles(args, max_point + 1).map_err(|e| perr(base + 5, args, e.to_string()))?;
        return Ok(InvolutionSpec::Conj(perm));
    }
    let mut images = Vec::new();
    for (pos, piece) in split_top(body, base, ',') {
        let colon = piece
            .find(':')
            .ok_or_else(|| perr(pos, piece, "expected `gen:image`, `id`, `inv`, `diag(..)` or `conj(..)`"))?;
        let g = gen_index(piece[..colon].trim(), pos)?;
        let rhs = piece[colon + 1..].trim();
        let rpos = pos + colon + 1;
        let image = match rhs {
            "fix" => Image::Fix,
            "inv" => Image::Inv,
            _ => Image::Word(parse_word(rhs, rpos)?),
        };
        if images.iter().any(|(h, _)| *h == g) {
            return Err(perr(pos, piece, "generator image given twice"));
        }
        images.push((g, image));
    }
    Ok(InvolutionSpec::Images(images))
}

fn parse_word(s: &str, base: usize) -> Result<Vec<(usize, i64)>> {
    split_top(s, base, '*')
        .into_iter()
        .map(|(pos, factor)| {
            let factor = factor.trim();
            match factor.split_once('^') {
                Some((name, e)) => Ok((gen_index(name.trim(), pos)?, parse_int(e, pos)?)),
                None => Ok((gen_index(factor, pos)?, 1)),
            }
        })
        .collect()
}

fn unit_matrix(dim: usize, entries: &[(usize, usize, u64)]) -> Vec<u64> {
    let mut m = identity_matrix(dim);
    for &(i, j, v) in entries {
        m[i * dim + j] = v;
    }
    m
}

/// Smallest generator of `(Z/p^n)^×` for odd `p`.
fn primitive_root_pn(p: u64, n: u32) -> u64 {
    let q = p.pow(n);
    let phi = q / p * (p - 1);
    let factors = crate::modarith::factorize(phi);
    (2..q)
        .find(|&g| gcd(g, q) == 1 && factors.iter().all(|&(r, _)| pow_mod(g, phi / r, q) != 1))
        .expect("odd prime powers have primitive roots")
}

impl Family {
    pub fn ambient_and_generators(&self) -> (Ambient, Vec<Vec<u64>>) {
        match self {
            Family::Cyclic { p, k } => (
                Ambient::Matrix { dim: 2, modulus: p.pow(*k) },
                vec![vec![1, 1, 0, 1]],
            ),
            Family::ElemAb { p, r } => (
                Ambient::Matrix { dim: r + 1, modulus: *p },
                (1..=*r).map(|j| unit_matrix(r + 1, &[(0, j, 1)])).collect(),
            ),
            Family::Extraspecial { p, exp_p2: false } => (
                Ambient::Matrix { dim: 3, modulus: *p },
                vec![unit_matrix(3, &[(0, 1, 1)]), unit_matrix(3, &[(1, 2, 1)])],
            ),
            Family::Extraspecial { p, exp_p2: true } => (
                Ambient::Matrix { dim: 2, modulus: p * p },
                vec![vec![1, 1, 0, 1], vec![1 + p, 0, 0, 1]],
            ),
            Family::Unitri { p, d } => (
                Ambient::Matrix { dim: *d, modulus: *p },
                (0..d.saturating_sub(1)).map(|i| unit_matrix(*d, &[(i, i + 1, 1)])).collect(),
            ),
            Family::GlKernel { p, n } | Family::PglKernel { p, n } => {
                let q = p.pow(*n);
                let gens = (0..4)
                    .map(|e| {
                        let (i, j) = (e / 2, e % 2);
                        let v = if i == j { 1 + p } else { *p };
                        unit_matrix(2, &[(i, j, v)])
                    })
                    .collect();
                let amb = if matches!(self, Family::GlKernel { .. }) {
                    Ambient::Matrix { dim: 2, modulus: q }
                } else {
                    Ambient::Projective { dim: 2, modulus: q }
                };
                (amb, gens)
            }
            Family::Gl { p, n } | Family::Pgl { p, n } => {
                let q = p.pow(*n);
                let r = primitive_root_pn(*p, *n);
                let gens = vec![vec![1, 1, 0, 1], vec![1, 0, 1, 1], vec![r, 0, 0, 1]];
                let amb = if matches!(self, Family::Gl { .. }) {
                    Ambient::Matrix { dim: 2, modulus: q }
                } else {
                    Ambient::Projective { dim: 2, modulus: q }
                };
                (amb, gens)
            }
            Family::Perm { degree, gens } => (Ambient::Permutation { degree: *degree }, gens.clone()),
        }
    }
}

impl GroupSpec {
    pub fn build(&self) -> Result<(FiniteGroup, Involution)> {
        self.build_with_cap(DEFAULT_SIZE_CAP)
    }

    pub fn build_with_cap(&self, cap: usize) -> Result<(FiniteGroup, Involution)> {
        let (ambient, gens) = self.family.ambient_and_generators();
        let g = FiniteGroup::generate(ambient, &gens, cap)?;
        let c = self.involution.realize(&g)?;
        Ok((g, c))
    }
}

impl InvolutionSpec {
    pub fn realize(&self, g: &FiniteGroup) -> Result<Involution> {
        match self {
            InvolutionSpec::Identity => Ok(Involution::identity(g)),
            InvolutionSpec::Inversion => Involution::inversion(g),
            InvolutionSpec::Diag(entries) => match *g.ambient() {
                Ambient::Matrix { dim, modulus } | Ambient::Projective { dim, modulus } => {
                    if entries.len() != dim {
                        return Err(Error::input(format!("diag needs {dim} entries")));
                    }
                    let diag: Vec<(usize, usize, u64)> = entries
                        .iter()
                        .enumerate()
                        .map(|(i, &e)| (i, i, if e == 1 { 1 } else { modulus - 1 }))
                        .collect();
                    Involution::conjugation(g, &unit_matrix(dim, &diag))
                }
                _ => Err(Error::input("diag(..) needs a matrix group")),
            },
            InvolutionSpec::Conj(perm) => match *g.ambient() {
                Ambient::Permutation { degree } => {
                    let mut full = perm.clone();
                    full.extend(perm.len() as u64..degree as u64);
                    if full.len() != degree {
                        return Err(Error::input("conjugator moves points outside the degree"));
                    }
                    Involution::conjugation(g, &full)
                }
                _ => Err(Error::input("conj(..) needs a permutation group")),
            },
            InvolutionSpec::Images(images) => {
                let gens = g.generators();
                let mut targets = gens.to_vec();
                for (k, image) in images {
                    if *k >= gens.len() {
                        return Err(Error::input(format!(
                            "generator `{}` does not exist",
                            (b'a' + *k as u8) as char
                        )));
                    }
                    targets[*k] = match image {
                        Image::Fix => gens[*k],
                        Image::Inv => g.inv(gens[*k]),
                        Image::Word(w) => {
                            let mut x = 0;
                            for &(h, e) in w {
                                let s = *gens
                                    .get(h)
                                    .ok_or_else(|| Error::input("word uses an unknown generator"))?;
                                let base = if e < 0 { g.inv(s) } else { s };
                                x = g.mul(x, g.pow(base, e.unsigned_abs()));
                            }
                            x
                        }
                    };
                }
                Involution::from_generator_images(g, &targets)
            }
        }
    }
}

fn gen_name(k: usize) -> char {
    (b'a' + k as u8) as char
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Cyclic { p, k } => write!(f, "cyclic:p={p},k={k}"),
            Family::ElemAb { p, r } => write!(f, "elemab:p={p},r={r}"),
            Family::Extraspecial { p, exp_p2 } => {
                write!(f, "extraspecial:p={p},exp={}", if *exp_p2 { "p2" } else { "p" })
            }
            Family::Unitri { p, d } => write!(f, "unitri:p={p},d={d}"),
            Family::GlKernel { p, n } => write!(f, "glkernel:p={p},n={n}"),
            Family::PglKernel { p, n } => write!(f, "pglkernel:p={p},n={n}"),
            Family::Gl { p, n } => write!(f, "gl:p={p},n={n}"),
            Family::Pgl { p, n } => write!(f, "pgl:d=2,p={p},n={n}"),
            Family::Perm { degree, gens } => {
                let amb = Ambient::Permutation { degree: *degree };
                let g: Vec<String> = gens.iter().map(|x| amb.render(x)).collect();
                write!(f, "perm:gens=[{}],degree={degree}", g.join(","))
            }
        }
    }
}

impl fmt::Display for InvolutionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InvolutionSpec::Identity => write!(f, "c=id"),
            InvolutionSpec::Inversion => write!(f, "c=inv"),
            InvolutionSpec::Diag(d) => {
                let v: Vec<String> = d.iter().map(i64::to_string).collect();
                write!(f, "c=diag({})", v.join(","))
            }
            InvolutionSpec::Conj(perm) => {
                write!(f, "c=conj({})", Ambient::Permutation { degree: perm.len() }.render(perm))
            }
            InvolutionSpec::Images(images) => {
                let parts: Vec<String> = images
                    .iter()
                    .map(|(k, img)| {
                        let rhs = match img {
                            Image::Fix => "fix".to_string(),
                            Image::Inv => "inv".to_string(),
                            Image::Word(w) => w
                                .iter()
                                .map(|&(h, e)| {
                                    if e == 1 {
                                        gen_name(h).to_string()
                                    } else {
                                        format!("{}^{e}", gen_name(h))
                                    }
                                })
                                .collect::<Vec<_>>()
                                .join("*"),
                        };
                        format!("{}:{rhs}", gen_name(*k))
                    })
                    .collect();
                write!(f, "c={}", parts.join(","))
            }
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};{}", self.family, self.involution)
    }
}

impl std::str::FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_group_spec(s)
    }
}
