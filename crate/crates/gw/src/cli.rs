//! Command line: argument parsing, resource limits, cache handling and the
//! four commands.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use cp1_core::checks::{self, CheckOutcome};
use cp1_core::degree_zero::{hodge_integral, mp_f0_qp, HodgeKey};
use cp1_core::rational::{format_ratio, to_parts};
use cp1_core::toda::{Engine, InvariantKey};
use cp1_core::TruncationSpec;
use serde_json::json;

use crate::cache;
use crate::error::{exit, GwError, Result};
use crate::json::SeriesJson;
use crate::output::{CheckRecord, Explain, Kind, OutputRecord, PrincipalTerm};
use crate::shared::SharedEngine;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    All,
    Hurwitz,
    Degree0,
    Toda,
    Hodge,
}

#[derive(Debug, Parser)]
#[command(name = "cp1-gw", version, about = "Exact descendent Gromov-Witten invariants of the projective line")]
pub struct Cli {
    /// Cache file; overrides GW_CP1_CACHE.
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Largest degree accepted.
    #[arg(long, global = true, default_value_t = 6)]
    pub limit_degree: u32,

    /// Largest genus accepted.
    #[arg(long, global = true, default_value_t = 6)]
    pub limit_genus: u32,

    /// Largest number of insertions (point-class plus identity) accepted.
    #[arg(long, global = true, default_value_t = 6)]
    pub limit_points: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// One bracket <tau_{k,Q}.. tau_{l,P}..>_{g,d}.
    Invariant {
        #[arg(long)]
        genus: u32,
        #[arg(long)]
        degree: u32,
        /// Point-class descendant indices, comma separated.
        #[arg(long, default_value = "")]
        q: String,
        /// Identity-class descendant indices, comma separated.
        #[arg(long, default_value = "")]
        p: String,
        /// Report the dimension constraint.
        #[arg(long)]
        explain: bool,
    },
    /// All coefficients of a multipoint series.
    Series {
        #[arg(long)]
        degree: u32,
        #[arg(long)]
        q_vars: usize,
        #[arg(long)]
        p_vars: usize,
        #[arg(long)]
        eps_order: u32,
        #[arg(long)]
        var_order: u32,
    },
    /// A Hodge integral against lambda_g or lambda_{g-1}.
    Hodge {
        #[arg(long)]
        genus: u32,
        /// `lambda_g` or `lambda_{g-1}`.
        #[arg(long)]
        class: String,
        /// Psi exponents, comma separated.
        #[arg(long)]
        psi: String,
    },
    /// Runs identity suites; exits with 4 if any check fails.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = 4)]
        max_n: usize,
        #[arg(long, default_value_t = 2)]
        max_genus: u32,
        #[arg(long, default_value_t = 3)]
        max_degree: u32,
    },
    /// Inspects or deletes the cache file.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Debug, Subcommand)]
pub enum CacheAction {
    Info,
    Clear,
}

/// What a run prints and how it exits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

pub fn parse_list(text: &str) -> Result<Vec<u32>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<u32>()
                .map_err(|_| GwError::InvalidArgument(format!("`{s}` is not a nonnegative integer")))
        })
        .collect()
}

fn parse_class(text: &str) -> Result<u32> {
    match text.trim() {
        "lambda_g" => Ok(0),
        "lambda_{g-1}" | "lambda_g-1" => Ok(1),
        other => Err(GwError::InvalidArgument(format!(
            "class `{other}`: expected lambda_g or lambda_{{g-1}}"
        ))),
    }
}

struct Limits {
    degree: u32,
    genus: u32,
    points: usize,
}

impl Limits {
    fn check(&self, what: &str, value: u64, limit: u64) -> Result<()> {
        if value > limit {
            return Err(GwError::ResourceLimit(format!("{what} {value} exceeds the limit {limit}")));
        }
        Ok(())
    }

    fn degree(&self, d: u32) -> Result<()> {
        self.check("degree", d as u64, self.degree as u64)
    }

    fn genus(&self, g: u32) -> Result<()> {
        self.check("genus", g as u64, self.genus as u64)
    }

    fn points(&self, n: usize) -> Result<()> {
        self.check("number of insertions", n as u64, self.points as u64)
    }

    /// Highest exponent any variable can reach within the limits.
    fn var_order(&self) -> u32 {
        2 * self.genus + 2 * self.degree + self.points as u32
    }
}

/// Parses `args` and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { exit::OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { stdout: String::new(), stderr: text, code }
            } else {
                Outcome { stdout: text, stderr: String::new(), code }
            };
        }
    };
    match execute(&cli) {
        Ok((record, code)) => {
            let rendered = match cli.format {
                Format::Json => Ok(record.to_json()),
                Format::Csv => record.to_csv(),
            };
            match rendered {
                Ok(stdout) => Outcome { stdout, stderr: String::new(), code },
                Err(e) => Outcome { stdout: String::new(), stderr: format!("error: {e}\n"), code: e.exit_code() },
            }
        }
        Err(e) => Outcome {
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
            code: e.exit_code(),
        },
    }
}

fn execute(cli: &Cli) -> Result<(OutputRecord, i32)> {
    let limits = Limits {
        degree: cli.limit_degree,
        genus: cli.limit_genus,
        points: cli.limit_points,
    };
    let cache_path = cache::resolve_path(cli.cache.as_deref());
    if let Command::Cache { action } = &cli.command {
        return cache_command(action, cache_path);
    }

    let mut engine = Engine::new();
    if let Some(path) = &cache_path {
        cache::load(&mut engine, path)?;
    }
    let before = engine.memo_len();
    let shared = SharedEngine::new(engine);

    let result = match &cli.command {
        Command::Invariant { genus, degree, q, p, explain } => {
            invariant(&shared, &limits, *genus, *degree, q, p, *explain).map(|r| (r, exit::OK))
        }
        Command::Series { degree, q_vars, p_vars, eps_order, var_order } => {
            series(&shared, &limits, *degree, *q_vars, *p_vars, *eps_order, *var_order).map(|r| (r, exit::OK))
        }
        Command::Hodge { genus, class, psi } => hodge(&limits, *genus, class, psi).map(|r| (r, exit::OK)),
        Command::Verify { suite, max_n, max_genus, max_degree } => {
            verify(&shared, &limits, *suite, *max_n, *max_genus, *max_degree)
        }
        Command::Cache { .. } => unreachable!("handled above"),
    }?;

    if let Some(path) = &cache_path {
        let engine = shared.lock();
        if engine.memo_len() != before {
            cache::store(&engine, path)?;
        }
    }
    Ok(result)
}

fn invariant(
    engine: &SharedEngine,
    limits: &Limits,
    genus: u32,
    degree: u32,
    q: &str,
    p: &str,
    explain: bool,
) -> Result<OutputRecord> {
    let q = parse_list(q)?;
    let p = parse_list(p)?;
    limits.genus(genus)?;
    limits.degree(degree)?;
    limits.points(q.len() + p.len())?;
    let key = InvariantKey::new(genus, degree, &q, &p);
    let value = engine.gw_invariant(&key)?;
    let provenance = if !key.dimension_matches() {
        "dimension-constraint"
    } else if degree == 0 {
        "degree-zero-closed-form"
    } else {
        "toda-recursion"
    };
    let inputs = json!({ "genus": genus, "degree": degree, "q": key.q, "p": key.p });
    let mut record = OutputRecord::new(Kind::Invariant, inputs, provenance);
    record.value = Some(format_ratio(&value));
    if explain {
        let matches = key.dimension_matches();
        record.explain = Some(Explain {
            insertion_degree: key.insertion_degree(),
            virtual_dimension: key.virtual_dimension(),
            dimension_matches: matches,
            note: if matches {
                "dimension constraint satisfied".into()
            } else {
                "dimension mismatch".into()
            },
        });
    }
    Ok(record)
}

fn series(
    engine: &SharedEngine,
    limits: &Limits,
    degree: u32,
    m: usize,
    n: usize,
    eps_order: u32,
    var_order: u32,
) -> Result<OutputRecord> {
    limits.degree(degree)?;
    limits.points(m + n)?;
    limits.check("eps order", eps_order as u64, 2 * limits.genus as u64)?;
    limits.check("variable order", var_order as u64, limits.var_order() as u64)?;
    if m + n == 0 && degree == 0 {
        return Err(GwError::InvalidArgument("degree zero needs at least one insertion".into()));
    }
    let ys: Vec<String> = (1..=m).map(|i| format!("y{i}")).collect();
    let zs: Vec<String> = (1..=n).map(|i| format!("z{i}")).collect();
    let mut spec = TruncationSpec::eps(eps_order);
    for v in ys.iter().chain(&zs) {
        spec = spec.with_cap(v, var_order);
    }
    let y_refs: Vec<&str> = ys.iter().map(String::as_str).collect();
    let z_refs: Vec<&str> = zs.iter().map(String::as_str).collect();
    let s = engine.multipoint(degree, &y_refs, &z_refs, &spec)?;

    let provenance = match (degree, m) {
        (0, 0) => "degree-zero-closed-form",
        (0, 1) => "degree-zero-closed-form-one-point-class",
        (0, _) => "degree-zero-vanishing",
        _ => "toda-recursion",
    };
    let inputs = json!({
        "degree": degree, "q_vars": m, "p_vars": n, "eps_order": eps_order, "var_order": var_order
    });
    let mut record = OutputRecord::new(Kind::Series, inputs, provenance);
    let body = SeriesJson::from(&s);
    record.variables = Some(body.variables);
    record.terms = Some(body.terms);
    if degree == 0 && m == 1 && n <= 1 {
        let full = mp_f0_qp(&ys[0], &z_refs, &spec)?;
        record.principal = Some(
            full.principal
                .terms
                .iter()
                .map(|(&w_exp, c)| {
                    let (num, den) = to_parts(c);
                    PrincipalTerm { w_exp, num, den }
                })
                .collect(),
        );
    }
    Ok(record)
}

fn hodge(limits: &Limits, genus: u32, class: &str, psi: &str) -> Result<OutputRecord> {
    let h = parse_class(class)?;
    let psi = parse_list(psi)?;
    limits.genus(genus)?;
    limits.points(psi.len())?;
    let key = HodgeKey::new(genus, h, &psi);
    let value = hodge_integral(&key)?;
    let class = if h == 0 { "lambda_g" } else { "lambda_{g-1}" };
    let provenance = if key.dimension_matches() { "hodge-series" } else { "dimension-constraint" };
    let inputs = json!({ "genus": genus, "class": class, "psi": psi });
    let mut record = OutputRecord::new(Kind::Hodge, inputs, provenance);
    record.value = Some(format_ratio(&value));
    Ok(record)
}

fn verify(
    engine: &SharedEngine,
    limits: &Limits,
    suite: Suite,
    max_n: usize,
    max_genus: u32,
    max_degree: u32,
) -> Result<(OutputRecord, i32)> {
    limits.points(max_n)?;
    limits.genus(max_genus)?;
    limits.degree(max_degree)?;
    let wants = |s: Suite| suite == Suite::All || suite == s;
    let mut outcomes: Vec<CheckOutcome> = Vec::new();
    if wants(Suite::Hurwitz) {
        outcomes.extend(checks::suite_hurwitz(max_n));
    }
    if wants(Suite::Degree0) {
        outcomes.extend(checks::suite_degree0(max_n, max_genus));
    }
    if wants(Suite::Hodge) {
        outcomes.extend(checks::suite_hodge(max_n, max_genus));
    }
    if wants(Suite::Toda) {
        outcomes.extend(checks::suite_toda(&mut engine.lock(), max_genus, max_degree));
    }
    let all_passed = outcomes.iter().all(CheckOutcome::passed);
    let suite_name = format!("{suite:?}").to_lowercase();
    let inputs = json!({
        "suite": suite_name, "max_n": max_n, "max_genus": max_genus, "max_degree": max_degree
    });
    let mut record = OutputRecord::new(Kind::Verify, inputs, "identity-suites");
    record.value = Some(if all_passed { "pass" } else { "fail" }.into());
    record.checks = Some(
        outcomes
            .into_iter()
            .map(|o| CheckRecord {
                suite: o.suite.to_string(),
                status: if o.failure.is_none() { "pass" } else { "fail" },
                name: o.name,
                detail: o.failure,
            })
            .collect(),
    );
    let code = if all_passed { exit::OK } else { exit::VERIFY_FAILED };
    Ok((record, code))
}

fn cache_command(action: &CacheAction, path: Option<PathBuf>) -> Result<(OutputRecord, i32)> {
    let path = path.ok_or_else(|| {
        GwError::InvalidArgument(format!("no cache file: pass --cache or set {}", cache::CACHE_ENV))
    })?;
    let inputs = json!({ "path": path.display().to_string() });
    let mut record = OutputRecord::new(Kind::Cache, inputs, "cache");
    match action {
        CacheAction::Info => {
            let mut engine = Engine::new();
            let count = cache::load(&mut engine, &path)?;
            record.value = Some(format!("{count} entries, format version {}", cache::FORMAT_VERSION));
        }
        CacheAction::Clear => {
            match std::fs::remove_file(&path) {
                Ok(()) => {}
                Err(e) if e.kind() == std::io::ErrorKind::NotFound => {}
                Err(source) => return Err(GwError::Io { path, source }),
            }
            record.value = Some("cleared".into());
        }
    }
    Ok((record, exit::OK))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists() {
        assert_eq!(parse_list("").unwrap(), Vec::<u32>::new());
        assert_eq!(parse_list("2, 0,1").unwrap(), vec![2, 0, 1]);
        assert!(parse_list("1,-1").is_err());
        assert_eq!(parse_class("lambda_{g-1}").unwrap(), 1);
        assert!(parse_class("lambda_2").is_err());
    }

    #[test]
    fn usage_errors_exit_with_one() {
        let out = run(["cp1-gw", "invariant", "--genus", "x", "--degree", "0"]);
        assert_eq!(out.code, exit::USAGE);
        let out = run(["cp1-gw", "invariant", "--genus", "0", "--degree", "1", "--q", "a"]);
        assert_eq!(out.code, exit::USAGE);
    }
}
