//! Plain-text renderings for `--format table`.

use std::fmt::Write;

use xichar::bounds::{BoundReport, ParityVerdict};
use xichar::character::TableJson;
use xichar::corpus::{CorpusManifest, FiltrationLevel};
use xichar::cyclotomic::Cyclotomic;
use xichar::verify::{Outcome, SuiteReport};
use xichar::xi::XiCertificate;

pub fn suite(r: &SuiteReport) -> String {
    let mut out = String::new();
    let width = r.groups.iter().map(|g| g.name.len()).max().unwrap_or(5).max(5);
    writeln!(out, "{:width$}  {:>6}  {:<7} result", "group", "order", "check").unwrap();
    for g in &r.groups {
        for res in &g.results {
            let tag = match res.outcome {
                Outcome::Pass => "PASS",
                Outcome::Fail => "FAIL",
                Outcome::Skip => "skip",
            };
            write!(out, "{:width$}  {:>6}  {:<7} {tag}", g.name, g.order, res.lemma.name()).unwrap();
            if let Some(m) = &res.message {
                write!(out, "  ({m})").unwrap();
            }
            out.push('\n');
        }
    }
    writeln!(out, "{} failure(s)", r.failures).unwrap();
    out
}

pub fn xi(group: &str, certs: &[XiCertificate]) -> String {
    let mut out = format!("{group}\n");
    writeln!(out, "{:>5} {:>6} {:>6}  verified", "chi", "degree", "depth").unwrap();
    for c in certs {
        writeln!(out, "{:>5} {:>6} {:>6}  {}", c.character, c.degree, c.steps.len(), c.is_valid()).unwrap();
    }
    out
}

pub fn table(t: &TableJson) -> String {
    let mut out = String::new();
    writeln!(out, "order {}, {} classes, conductor {}", t.group_order, t.classes.len(), t.conductor).unwrap();
    let header: Vec<String> = t
        .classes
        .iter()
        .map(|c| format!("{}^{}", c.element_order, c.size))
        .collect();
    writeln!(out, "       {}", header.join("  ")).unwrap();
    for (i, row) in t.irreducibles.iter().enumerate() {
        let cells: Vec<String> = row
            .iter()
            .map(|v| Cyclotomic::from_json(v).map_or_else(|_| "?".into(), |c| c.to_string()))
            .collect();
        writeln!(out, "chi{i:<3} {}", cells.join("  ")).unwrap();
    }
    out
}

pub fn manifest(m: &CorpusManifest) -> String {
    let mut out = String::new();
    for e in &m.entries {
        writeln!(out, "{:>6} {:>5}  {:<16} {}", e.order, e.plus_order, e.ambient, e.name).unwrap();
    }
    writeln!(out, "{} entries", m.entries.len()).unwrap();
    out
}

pub fn filtration(f: &FiltrationLevel) -> String {
    let mut out = format!("{} (order {})\n", f.ambient.describe(), f.group_order);
    writeln!(out, "{:>3} {:>8} {:>8}", "i", "|G_i|", "|G_i+|").unwrap();
    for (i, (k, x)) in f.kernel_orders.iter().zip(&f.fixed_orders).enumerate() {
        writeln!(out, "{i:>3} {k:>8} {x:>8}").unwrap();
    }
    let fit = |name: &str, fit: &xichar::corpus::IndexFit| {
        format!(
            "{name}: delta = {}, b = {}, consistent through level {}: {}\n",
            fit.delta.map_or("-".into(), |d| d.to_string()),
            fit.b.as_deref().unwrap_or("-"),
            f.level,
            fit.consistent
        )
    };
    out += &fit("kernel", &f.kernel_fit);
    out += &fit("fixed", &f.fixed_fit);
    out
}

pub fn bound(r: &BoundReport) -> String {
    let mut out = format!("{:?} bound, p = {}\n", r.kind, r.p).to_lowercase();
    for c in &r.checklist {
        writeln!(out, "  [{}] {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.evidence).unwrap();
    }
    writeln!(out, "constant: {}", r.constant).unwrap();
    for row in &r.rows {
        writeln!(out, "  n = {:<3} {}", row.n, row.bound).unwrap();
        if let (Some(g), Some(f), Some(i)) = (&row.group_order, &row.fixed_order, &row.index) {
            writeln!(out, "          |G| = {g}, |G+| = {f}, index = {i}").unwrap();
        }
    }
    writeln!(out, "{}", if r.passed { "PASS" } else { "FAIL" }).unwrap();
    out
}

pub fn parity(nekim: &Option<ParityVerdict>, selpar: &ParityVerdict) -> String {
    let line = |name: &str, v: &ParityVerdict| {
        format!(
            "{name}: {} [{:?}] {}\n",
            v.parity.map_or("undetermined".into(), |p| format!("{p:?}").to_lowercase()),
            v.status,
            v.evidence
        )
    };
    let mut out = String::new();
    if let Some(v) = nekim {
        out += &line("quadratic twist", v);
    }
    out += &line("root number", selpar);
    out
}
