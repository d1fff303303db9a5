//! The lemma suite: runs the structural and character-theoretic checks over
//! a list of `(G, c)` pairs and collects an ordered, deterministic report.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::character::{induce, CharacterTable, ClassFunction};
use crate::corpus::CorpusEntry;
use crate::error::{Error, Result};
use crate::group::lemmas::{
    check_plus_minus_factorization, check_quotient_fixed, check_stable_overgroup, index_p_kernels,
    index_p_oversubgroup,
};
use crate::group::{FiniteGroup, Involution, Subgroup};
use crate::xi::{
    check_fixed_restriction, check_xi_equivalences, decompose_induced_trivial, fixed_dim_parity, induced_real_check,
    induced_trivial, monomial_realization, parity_consistency, xi_set,
};

pub const SUITE_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Lemma {
    Table,
    Reps,
    Stable,
    Gh,
    Quots,
    Replem,
    Xi,
    Ind,
    Real,
}

impl Lemma {
    pub const ALL: [Lemma; 9] = [
        Lemma::Table,
        Lemma::Reps,
        Lemma::Stable,
        Lemma::Gh,
        Lemma::Quots,
        Lemma::Replem,
        Lemma::Xi,
        Lemma::Ind,
        Lemma::Real,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Lemma::Table => "table",
            Lemma::Reps => "reps",
            Lemma::Stable => "stable",
            Lemma::Gh => "gh",
            Lemma::Quots => "quots",
            Lemma::Replem => "replem",
            Lemma::Xi => "xi",
            Lemma::Ind => "ind",
            Lemma::Real => "real",
        }
    }

    fn needs_table(self) -> bool {
        matches!(self, Lemma::Table | Lemma::Replem | Lemma::Xi | Lemma::Ind | Lemma::Real)
    }
}

impl fmt::Display for Lemma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Lemma {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Lemma::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| Error::input(format!("unknown lemma `{s}`")))
    }
}

/// Parses `all` or a comma-separated list; the result is sorted and deduplicated.
pub fn parse_lemmas(s: &str) -> Result<Vec<Lemma>> {
    if s.trim() == "all" {
        return Ok(Lemma::ALL.to_vec());
    }
    let mut out = s
        .split(',')
        .map(|t| t.trim().parse())
        .collect::<Result<Vec<Lemma>>>()?;
    out.sort();
    out.dedup();
    if out.is_empty() {
        return Err(Error::input("no lemmas selected"));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LemmaResult {
    pub lemma: Lemma,
    pub outcome: Outcome,
    pub detail: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GroupReport {
    pub name: String,
    pub order: usize,
    pub plus_order: usize,
    pub results: Vec<LemmaResult>,
}

impl GroupReport {
    pub fn result(&self, lemma: Lemma) -> Option<&LemmaResult> {
        self.results.iter().find(|r| r.lemma == lemma)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub schema_version: u32,
    pub lemmas: Vec<Lemma>,
    pub groups: Vec<GroupReport>,
    pub failures: usize,
    pub passed: bool,
}

impl SuiteReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}

/// Subgroups every check draws on, computed once per group.
struct Context<'a> {
    g: &'a FiniteGroup,
    c: &'a Involution,
    table: Option<CharacterTable>,
    plus: Subgroup,
    center: Subgroup,
    derived: Subgroup,
    frattini: Option<Subgroup>,
}

impl<'a> Context<'a> {
    fn named_subgroups(&self) -> Vec<(&'static str, Subgroup)> {
        let mut out = vec![
            ("trivial", Subgroup::trivial(self.g)),
            ("plus", self.plus.clone()),
            ("center", self.center.clone()),
            ("derived", self.derived.clone()),
        ];
        if let Some(f) = &self.frattini {
            out.push(("frattini", f.clone()));
        }
        out
    }

    fn table(&self) -> Result<&CharacterTable> {
        self.table.as_ref().ok_or_else(|| Error::pre("no character table"))
    }
}

fn check_table(cx: &Context) -> Result<Value> {
    let t = cx.table()?;
    t.verify(cx.g)?;
    let mut profile: BTreeMap<i64, usize> = BTreeMap::new();
    for d in t.degrees() {
        *profile.entry(d).or_default() += 1;
    }
    let square_sum: i64 = t.degrees().iter().map(|d| d * d).sum();
    if square_sum != cx.g.order() as i64 {
        return Err(Error::consistency("sum of squared degrees differs from |G|"));
    }
    Ok(json!({
        "classes": t.len(),
        "degrees": profile.iter().map(|(d, m)| json!([d, m])).collect::<Vec<_>>(),
        "prime": t.prime,
        "conductor": t.conductor,
    }))
}

fn check_reps(cx: &Context) -> Result<Value> {
    Ok(serde_json::to_value(check_plus_minus_factorization(cx.g, cx.c)?).unwrap())
}

fn check_stable(cx: &Context) -> Result<Value> {
    let g = cx.g;
    let mut candidates: Vec<Subgroup> = cx
        .named_subgroups()
        .into_iter()
        .map(|(_, s)| cx.plus.join(g, &s))
        .collect();
    candidates.push(Subgroup::whole(g));
    if let Some(phi) = &cx.frattini {
        let base = Subgroup::normal_closure(g, &[cx.plus.elements(), phi.elements()].concat());
        if !base.is_whole() {
            candidates.extend(index_p_kernels(g, &base)?);
        }
    }
    candidates.sort_by(|a, b| (a.order(), a.elements()).cmp(&(b.order(), b.elements())));
    candidates.dedup();
    let mut normal = 0;
    for h in &candidates {
        if check_stable_overgroup(g, cx.c, h)?.normal {
            normal += 1;
        }
    }
    Ok(json!({ "checked": candidates.len(), "normal": normal }))
}

fn check_gh(cx: &Context) -> Result<Value> {
    let mut rows = Vec::new();
    for (name, k) in cx.named_subgroups() {
        if k.is_whole() {
            continue;
        }
        let h = index_p_oversubgroup(cx.g, cx.c, &k)?;
        rows.push(json!({ "k": name, "k_order": k.order(), "h_order": h.order() }));
    }
    Ok(json!({ "witnesses": rows }))
}

fn check_quots(cx: &Context) -> Result<Value> {
    let g = cx.g;
    let mut normals: Vec<(&str, Subgroup)> = cx
        .named_subgroups()
        .into_iter()
        .filter(|(name, _)| *name != "plus")
        .collect();
    normals.push(("whole", Subgroup::whole(g)));
    if !cx.derived.is_whole() {
        normals.push(("witness", index_p_oversubgroup(g, cx.c, &cx.derived)?));
    }
    let rows = normals
        .iter()
        .map(|(name, n)| {
            let r = check_quotient_fixed(g, cx.c, n)?;
            Ok(json!({ "n": name, "report": r }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(json!({ "quotients": rows }))
}

fn check_replem(cx: &Context) -> Result<Value> {
    let g = cx.g;
    let mut reps: Vec<(String, ClassFunction)> = vec![
        ("trivial".into(), ClassFunction::trivial(g)),
        ("regular".into(), ClassFunction::regular(g)),
        ("ind_plus".into(), induced_trivial(g, cx.c)?),
    ];
    for (name, k) in cx.named_subgroups() {
        if k.is_whole() {
            continue;
        }
        let h = index_p_oversubgroup(g, cx.c, &k)?.embed(g)?;
        reps.push((format!("ind_{name}_witness"), induce(g, &h, &ClassFunction::trivial(&h.group))));
    }
    let subgroups = cx.named_subgroups();
    let mut checked = 0;
    for (_, rho) in &reps {
        for (_, h) in &subgroups {
            fixed_dim_parity(g, rho, h)?;
            checked += 1;
        }
    }
    let ind = &reps[2].1;
    let report = parity_consistency(g, cx.c, cx.table()?, ind, 1)?;
    if !report.consistent || !report.contains_induced_trivial {
        return Err(Error::consistency("Xi multiplicities in Ind 1 are not all odd"));
    }
    Ok(json!({ "pairs": checked, "representations": reps.len() }))
}

fn check_xi(cx: &Context) -> Result<Value> {
    let g = cx.g;
    let t = cx.table()?;
    let report = decompose_induced_trivial(g, cx.c, t)?;
    let rows = check_xi_equivalences(g, cx.c, t)?;
    let mut over = vec![Subgroup::whole(g)];
    if !cx.plus.is_whole() {
        over.push(index_p_oversubgroup(g, cx.c, &cx.plus)?);
    }
    let restricted = over
        .iter()
        .map(|h| check_fixed_restriction(g, cx.c, h))
        .collect::<Result<Vec<_>>>()?;
    Ok(json!({
        "index": report.index,
        "xi": report.xi,
        "degree_sum": report.degree_sum,
        "equivalences": rows.len(),
        "restriction_xi_sizes": restricted,
    }))
}

fn check_ind(cx: &Context) -> Result<Value> {
    let t = cx.table()?;
    let mut rows = Vec::new();
    for i in xi_set(cx.g, cx.c, t) {
        let cert = monomial_realization(cx.g, cx.c, t, i)?;
        if !cert.is_valid() {
            return Err(Error::consistency(format!("certificate for character {i} does not verify")));
        }
        rows.push(json!({ "character": i, "degree": cert.degree, "depth": cert.steps.len() }));
    }
    Ok(json!({ "certificates": rows }))
}

fn check_real(cx: &Context) -> Result<Value> {
    let t = cx.table()?;
    let mut checked = 0;
    let mut counterexamples = Vec::new();
    let mut explicit = 0;
    for i in xi_set(cx.g, cx.c, t).into_iter().filter(|&i| i != 0) {
        let r = induced_real_check(cx.g, cx.c, t, i)?;
        checked += 1;
        explicit += usize::from(r.explicit_extension);
        if !(r.irreducible && r.real_valued) {
            counterexamples.push(i);
        }
    }
    if !counterexamples.is_empty() {
        return Err(Error::consistency(format!("induced characters not irreducible and real: {counterexamples:?}")));
    }
    Ok(json!({ "checked": checked, "explicit": explicit, "counterexamples": 0 }))
}

/// Runs the selected checks on one pair. Failures are recorded, not raised.
pub fn run_group(name: &str, g: &FiniteGroup, c: &Involution, lemmas: &[Lemma]) -> GroupReport {
    run_group_with(name, g, c, lemmas, CharacterTable::compute)
}

/// As [`run_group`], taking the character table from `tables` (e.g. a cache).
pub fn run_group_with(
    name: &str,
    g: &FiniteGroup,
    c: &Involution,
    lemmas: &[Lemma],
    tables: impl Fn(&FiniteGroup) -> Result<CharacterTable>,
) -> GroupReport {
    let table = if lemmas.iter().any(|l| l.needs_table()) {
        tables(g)
    } else {
        Err(Error::pre("no character table"))
    };
    let (table, table_error) = match table {
        Ok(t) => (Some(t), None),
        Err(e) => (None, Some(e)),
    };
    let cx = Context {
        g,
        c,
        table,
        plus: Subgroup::fixed(g, c),
        center: Subgroup::center(g),
        derived: Subgroup::commutator_subgroup(g),
        frattini: Subgroup::frattini(g).ok(),
    };
    let results = lemmas
        .iter()
        .map(|&lemma| {
            let run = match lemma {
                _ if lemma.needs_table() && cx.table.is_none() => Err(table_error.clone().unwrap()),
                Lemma::Table => check_table(&cx),
                Lemma::Reps => check_reps(&cx),
                Lemma::Stable => check_stable(&cx),
                Lemma::Gh => check_gh(&cx),
                Lemma::Quots => check_quots(&cx),
                Lemma::Replem => check_replem(&cx),
                Lemma::Xi => check_xi(&cx),
                Lemma::Ind => check_ind(&cx),
                Lemma::Real => check_real(&cx),
            };
            match run {
                Ok(detail) => LemmaResult {
                    lemma,
                    outcome: Outcome::Pass,
                    detail,
                    message: None,
                },
                Err(e) => LemmaResult {
                    lemma,
                    outcome: if matches!(e, Error::Precondition(_)) {
                        Outcome::Skip
                    } else {
                        Outcome::Fail
                    },
                    detail: Value::Null,
                    message: Some(e.to_string()),
                },
            }
        })
        .collect();
    GroupReport {
        name: name.to_string(),
        order: g.order(),
        plus_order: cx.plus.order(),
        results,
    }
}

/// Runs the suite over `entries` in parallel; the report keeps input order.
pub fn run_suite(entries: &[CorpusEntry], lemmas: &[Lemma]) -> SuiteReport {
    run_suite_with(entries, lemmas, CharacterTable::compute)
}

pub fn run_suite_with(
    entries: &[CorpusEntry],
    lemmas: &[Lemma],
    tables: impl Fn(&FiniteGroup) -> Result<CharacterTable> + Sync,
) -> SuiteReport {
    let groups: Vec<GroupReport> = entries
        .par_iter()
        .map(|e| run_group_with(&e.name, &e.group, &e.involution, lemmas, &tables))
        .collect();
    let failures = groups
        .iter()
        .flat_map(|g| &g.results)
        .filter(|r| r.outcome == Outcome::Fail)
        .count();
    SuiteReport {
        schema_version: SUITE_SCHEMA_VERSION,
        lemmas: lemmas.to_vec(),
        groups,
        failures,
        passed: failures == 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::corpus;
    use crate::group::spec::parse_group_spec;

    #[test]
    fn lemma_lists() {
        assert_eq!(parse_lemmas("all").unwrap().len(), 9);
        assert_eq!(parse_lemmas("xi,reps,xi").unwrap(), vec![Lemma::Reps, Lemma::Xi]);
        assert!(parse_lemmas("nope").is_err());
    }

    #[test]
    fn single_group_suite() {
        let (g, c) = parse_group_spec("extraspecial:p=3,exp=p;c=a:inv,b:fix").unwrap().build().unwrap();
        let r = run_group("x", &g, &c, &Lemma::ALL);
        for res in &r.results {
            assert_eq!(res.outcome, Outcome::Pass, "{}: {:?}", res.lemma, res.message);
        }
    }

    #[test]
    fn small_corpus_passes() {
        let entries = corpus(3, 100).unwrap();
        let r = run_suite(&entries, &Lemma::ALL);
        assert!(r.passed, "{}", r.to_json());
    }
}
