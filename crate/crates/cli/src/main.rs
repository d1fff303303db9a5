mod cache;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use xichar::bounds::{
    divfields_bound, eccor_check, find_curve, find_field, hilbert_report, parity_nekim, parity_selpar,
    prational_report, ParityVerdict, SelparBase,
};
use xichar::character::ClassFunction;
use xichar::corpus::{build_pgl_level, corpus, corpus_manifest, kernel_filtration, standard_involution_fixed};
use xichar::cyclotomic::{parse_rational, CyclotomicJson};
use xichar::group::spec::parse_group_spec;
use xichar::group::{Subgroup, DEFAULT_SIZE_CAP};
use xichar::verify::{parse_lemmas, run_group_with, run_suite_with, SuiteReport, SUITE_SCHEMA_VERSION};
use xichar::xi::{monomial_realization, xi_set, XiCertificate};

use cache::TableCache;

const XI_SCHEMA_VERSION: u32 = 1;
const PARITY_SCHEMA_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "xichar", version, about = "Character-theoretic lemma suites and Selmer-rank bound calculators")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    /// Directory for cached character tables.
    #[arg(long, env = "XICHAR_CACHE_DIR", global = true)]
    cache_dir: Option<PathBuf>,

    /// Progress notes on stderr.
    #[arg(short, long, global = true)]
    verbose: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the lemma suite on one group or on the corpus.
    Verify {
        #[command(flatten)]
        target: Target,
        /// `all` or a comma-separated list of checks.
        #[arg(long, default_value = "all")]
        lemmas: String,
    },
    /// Twist-fixed characters and their monomial certificates.
    Xi {
        #[arg(long)]
        group: String,
    },
    /// Exact character table.
    Table {
        #[arg(long)]
        group: String,
    },
    /// Manifest of the corpus.
    Corpus {
        #[arg(long, default_value_t = 5)]
        pmax: u64,
        #[arg(long, default_value_t = DEFAULT_SIZE_CAP)]
        cap: usize,
    },
    /// Reduction filtration of PGL_2(Z/p^n) under diag(1,-1).
    Filtration {
        #[arg(short, long)]
        p: u64,
        #[arg(short, long)]
        n: u32,
    },
    /// Lower bounds for Selmer ranks.
    #[command(subcommand)]
    Bound(BoundCommand),
    /// Parity of the Selmer rank over a quadratic field.
    Parity {
        #[arg(long)]
        curve: String,
        #[arg(long)]
        field: String,
        /// Ramified archimedean places of the base; omit for base Q.
        #[arg(long)]
        h: Option<u32>,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct Target {
    /// Group spec, e.g. `extraspecial:p=3,exp=p;c=a:inv,b:fix`.
    #[arg(long)]
    group: Option<String>,
    /// Corpus selector `pmax=N[,cap=M]`.
    #[arg(long)]
    corpus: Option<String>,
}

#[derive(Subcommand, Debug)]
enum BoundCommand {
    /// Division-field tower of a curve A with a rational p-torsion point.
    Eccor {
        #[arg(long = "A")]
        a: String,
        #[arg(long = "E")]
        e: String,
        #[arg(short, long)]
        p: u64,
        #[arg(short, long, value_delimiter = ',', required = true)]
        n: Vec<u32>,
    },
    /// Symplectic division-field bound B p^{(d²+d)n}.
    Divfields {
        #[arg(short, long)]
        d: u64,
        #[arg(short, long)]
        p: u64,
        #[arg(short, long, value_delimiter = ',', required = true)]
        n: Vec<u32>,
        /// Exact constant; symbolic when omitted.
        #[arg(long)]
        b: Option<String>,
    },
    /// Free pro-p tower over a p-rational field.
    Prational {
        #[arg(short, long)]
        p: u64,
        #[arg(short, long, value_delimiter = ',', required = true)]
        n: Vec<u32>,
        #[arg(long)]
        field: Option<String>,
    },
    /// Hilbert p-class field tower.
    Hilbert {
        #[arg(long)]
        field: String,
        #[arg(short, long)]
        p: u64,
        /// Step degrees [H_i : H_{i-1}]; defaults to the class group p-part.
        #[arg(long, value_delimiter = ',')]
        degrees: Option<Vec<u64>>,
    },
}

#[derive(Debug, Error)]
enum Failure {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Math(String),
    #[error("hypothesis checklist failed")]
    Checklist,
}

impl From<xichar::Error> for Failure {
    fn from(e: xichar::Error) -> Self {
        if e.is_math_failure() {
            Failure::Math(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Math(_) => 2,
            Failure::Checklist => 3,
        }
    }
}

fn emit<T: Serialize>(format: Format, value: &T, table: impl FnOnce() -> String) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(value).expect("serialisable output")),
        Format::Table => print!("{}", table()),
    }
}

fn parse_corpus_selector(s: &str) -> Result<(u64, usize), Failure> {
    let mut pmax = None;
    let mut cap = DEFAULT_SIZE_CAP;
    for part in s.split(',') {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Failure::Usage(format!("expected key=value in `{part}`")))?;
        let bad = || Failure::Usage(format!("bad value `{v}` for `{k}`"));
        match k.trim() {
            "pmax" => pmax = Some(v.trim().parse().map_err(|_| bad())?),
            "cap" => cap = v.trim().parse().map_err(|_| bad())?,
            other => return Err(Failure::Usage(format!("unknown corpus key `{other}`"))),
        }
    }
    Ok((pmax.ok_or_else(|| Failure::Usage("corpus selector needs pmax".into()))?, cap))
}

#[derive(Serialize)]
struct XiCharacter {
    index: usize,
    degree: i64,
    values: Vec<CyclotomicJson>,
}

#[derive(Serialize)]
struct XiReport {
    schema_version: u32,
    group: String,
    order: usize,
    plus_order: usize,
    characters: Vec<XiCharacter>,
    certificates: Vec<XiCertificate>,
    all_valid: bool,
}

#[derive(Serialize)]
struct ParityReport {
    schema_version: u32,
    curve: String,
    field: String,
    nekim: Option<ParityVerdict>,
    selpar: ParityVerdict,
}

fn run(cli: Cli) -> Result<(), Failure> {
    let cache = TableCache::new(cli.cache_dir.clone());
    let format = cli.format;
    let verbose = cli.verbose;
    let tables = |g: &xichar::group::FiniteGroup| {
        let (t, status) = cache.get(g)?;
        if verbose {
            eprintln!("table of order {}: cache {status:?}", g.order());
        }
        Ok(t)
    };
    match cli.command {
        Command::Verify { target, lemmas } => {
            let lemmas = parse_lemmas(&lemmas)?;
            let report = if let Some(spec) = target.group {
                let (g, c) = parse_group_spec(&spec)?.build()?;
                let group = run_group_with(&spec, &g, &c, &lemmas, tables);
                let failures = group
                    .results
                    .iter()
                    .filter(|r| r.outcome == xichar::verify::Outcome::Fail)
                    .count();
                SuiteReport {
                    schema_version: SUITE_SCHEMA_VERSION,
                    lemmas,
                    groups: vec![group],
                    failures,
                    passed: failures == 0,
                }
            } else {
                let (pmax, cap) = parse_corpus_selector(target.corpus.as_deref().unwrap())?;
                let entries = corpus(pmax, cap)?;
                if verbose {
                    eprintln!("corpus: {} entries", entries.len());
                }
                run_suite_with(&entries, &lemmas, tables)
            };
            emit(format, &report, || render::suite(&report));
            if !report.passed {
                return Err(Failure::Math(format!("{} check(s) failed", report.failures)));
            }
        }
        Command::Xi { group } => {
            let (g, c) = parse_group_spec(&group)?.build()?;
            let table = tables(&g)?;
            let xi = xi_set(&g, &c, &table);
            let certificates = xi
                .iter()
                .map(|&i| monomial_realization(&g, &c, &table, i))
                .collect::<xichar::Result<Vec<_>>>()?;
            let all_valid = certificates.iter().all(XiCertificate::is_valid);
            let report = XiReport {
                schema_version: XI_SCHEMA_VERSION,
                group,
                order: g.order(),
                plus_order: Subgroup::fixed(&g, &c).order(),
                characters: xi
                    .iter()
                    .map(|&i| {
                        let chi: &ClassFunction = &table.irreducibles[i];
                        XiCharacter {
                            index: i,
                            degree: chi.degree().unwrap_or(0),
                            values: chi.to_json(),
                        }
                    })
                    .collect(),
                certificates,
                all_valid,
            };
            emit(format, &report, || render::xi(&report.group, &report.certificates));
            if !all_valid {
                return Err(Failure::Math("a certificate failed to verify".into()));
            }
        }
        Command::Table { group } => {
            let (g, _) = parse_group_spec(&group)?.build()?;
            let table = tables(&g)?;
            let json = table.to_json(&g);
            emit(format, &json, || render::table(&json));
        }
        Command::Corpus { pmax, cap } => {
            let entries = corpus(pmax, cap)?;
            let manifest = corpus_manifest(pmax, cap, &entries);
            emit(format, &manifest, || render::manifest(&manifest));
        }
        Command::Filtration { p, n } => {
            let g = build_pgl_level(2, p, n, DEFAULT_SIZE_CAP)?;
            let (c, _) = standard_involution_fixed(&g, 1, 1)?;
            let f = kernel_filtration(&g, &c)?;
            emit(format, &f, || render::filtration(&f));
        }
        Command::Bound(b) => {
            let report = match b {
                BoundCommand::Eccor { a, e, p, n } => eccor_check(&find_curve(&a)?, &find_curve(&e)?, p, &n)?,
                BoundCommand::Divfields { d, p, n, b } => {
                    let b = b.map(|s| parse_rational(&s)).transpose()?;
                    divfields_bound(d, p, &n, b)?
                }
                BoundCommand::Prational { p, n, field } => {
                    let field = field.map(|f| find_field(&f)).transpose()?;
                    prational_report(p, &n, field.as_ref())?
                }
                BoundCommand::Hilbert { field, p, degrees } => {
                    hilbert_report(&find_field(&field)?, p, degrees.as_deref())?
                }
            };
            emit(format, &report, || render::bound(&report));
            if !report.passed {
                return Err(Failure::Checklist);
            }
        }
        Command::Parity { curve, field, h } => {
            let e = find_curve(&curve)?;
            let k = find_field(&field)?;
            let base = h.map_or(SelparBase::Rationals, |h| SelparBase::Other { h });
            let report = ParityReport {
                schema_version: PARITY_SCHEMA_VERSION,
                nekim: h.is_none().then(|| parity_nekim(&e, &k)),
                selpar: parity_selpar(&e, &k, base),
                curve: e.label,
                field: k.label,
            };
            emit(format, &report, || render::parity(&report.nekim, &report.selpar));
            if report.selpar.parity.is_none() {
                return Err(Failure::Checklist);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("xichar: {f}");
            ExitCode::from(f.code())
        }
    }
}
