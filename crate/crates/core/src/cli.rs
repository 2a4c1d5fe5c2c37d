//! Batch interface: `classify`, `verify` and `export`.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::abelian::{self, AbelianError, Group};
use crate::analysis::{self, AnalysisError, Verdict};
use crate::field::FieldElem;
use crate::pbw::Uea;
use crate::rep::{self, GenKind, ModuleRep, RepError};
use crate::verma::{self, zero_chi};
use crate::weights::{ChiForm, ChiKind, Setting, Weight, WeightError};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_VIOLATION: u8 = 2;
pub const EXIT_GUARD: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "hyperverma", version, about = "Verma modules and irreducibles of higher reduced enveloping algebras of SL2")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Isomorphism classes of irreducible modules.
    Classify(RunArgs),
    /// Runs every invariant suite and writes a certificate.
    Verify(RunArgs),
    /// Writes module matrices or algebra tables.
    Export(RunArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Object {
    /// The baby Verma module.
    Verma,
    /// Its irreducible quotient.
    Quotient,
    /// The teenage Verma module built from the restricted weight.
    Teenage,
    /// The additive-group algebra table.
    Ga,
    /// The multiplicative-group algebra table.
    Gm,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub p: u32,
    #[arg(long, default_value_t = 0)]
    pub r: usize,
    /// Character shape; `verify` runs all three when omitted.
    #[arg(long, value_enum)]
    pub chi: Option<ChiKind>,
    /// Parameter of a semisimple character, and the scalar of the abelian examples.
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    pub c: i64,
    /// `λ_0,…,λ_r`; for a semisimple character the last entry `j` means `θ + j`.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 81)]
    pub max_dim: usize,
    /// Corrupts one matrix entry before verification.
    #[arg(long)]
    pub inject_fault: bool,
    #[arg(long, value_enum, default_value_t = Object::Verma)]
    pub object: Object,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("theorem violation: {0}")]
    Violation(String),
    #[error("resource guard: {0}")]
    Guard(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Violation(_) => EXIT_VIOLATION,
            CliError::Guard(_) => EXIT_GUARD,
        }
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::TheoremViolation(m) => CliError::Violation(m),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<AbelianError> for CliError {
    fn from(e: AbelianError) -> Self {
        match e {
            AbelianError::TheoremViolation(m) => CliError::Violation(m),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<WeightError> for CliError {
    fn from(e: WeightError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<RepError> for CliError {
    fn from(e: RepError) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn guard(args: &RunArgs) -> Result<usize, CliError> {
    crate::modp::check_odd_prime(args.p as u64).map_err(|e| CliError::Usage(e.to_string()))?;
    let n = crate::modp::checked_pow(args.p, args.r + 1).unwrap_or(u64::MAX);
    if n > args.max_dim as u64 {
        return Err(CliError::Guard(format!("p^(r+1) = {n} exceeds --max-dim {}", args.max_dim)));
    }
    Ok(n as usize)
}

fn setting(args: &RunArgs, kind: ChiKind) -> Result<Setting, CliError> {
    Ok(Setting::new(args.p, args.r, ChiForm::standard(kind, args.p, Some(args.c))?)?)
}

fn required_chi(args: &RunArgs) -> Result<ChiKind, CliError> {
    args.chi.ok_or_else(|| CliError::Usage("--chi is required".into()))
}

fn weight(args: &RunArgs, s: &Setting) -> Result<Weight, CliError> {
    let text = args.lambda.as_deref().ok_or_else(|| CliError::Usage("--lambda is required".into()))?;
    Ok(Weight::parse(s, text)?)
}

fn emit(args: &RunArgs, text: &str) -> Result<(), CliError> {
    match &args.out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).and_then(|_| out.flush()).map_err(|e| CliError::Usage(e.to_string()))
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

pub fn cmd_classify(args: &RunArgs) -> Result<(), CliError> {
    guard(args)?;
    let s = setting(args, required_chi(args)?)?;
    let c = analysis::classify(&s)?;
    let text = match args.format {
        Format::Json => pretty(&c.to_json()),
        Format::Csv => c.to_csv(),
    };
    emit(args, &text)
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub chi: Option<Value>,
    pub passed: bool,
    pub checked: usize,
    pub diagnostic: Option<String>,
}

struct Battery {
    results: Vec<SuiteResult>,
}

impl Battery {
    fn run(&mut self, name: &str, chi: Option<&ChiForm>, suite: impl FnOnce() -> Result<usize, String>) {
        let (passed, checked, diagnostic) = match suite() {
            Ok(n) => (true, n, None),
            Err(d) => (false, 0, Some(d)),
        };
        self.results.push(SuiteResult { name: name.into(), chi: chi.map(ChiForm::to_json), passed, checked, diagnostic });
    }
}

fn fail(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// Every invariant suite for one character at the configured level.
fn verify_character(b: &mut Battery, s: &Setting, seed: u64, inject_fault: bool) -> Result<(), CliError> {
    let chi = s.chi;
    let weights = s.weights()?;
    b.run("relations", Some(&chi), || {
        let mut checked = 0;
        for (idx, w) in weights.iter().enumerate() {
            let mut z = verma::baby_verma(s, w).map_err(fail)?;
            if inject_fault && idx == 0 {
                let m = z.gen_mut(GenKind::E, 0);
                let x = m.get(0, 1);
                m.set(0, 1, s.field.add(x, FieldElem::ONE));
            }
            let rel = rep::verify_relations(&z);
            let cen = rep::verify_centrality(&z);
            checked += rel.checked;
            if let Some(v) = rel.violations.first().or(cen.violations.first()) {
                return Err(format!("Z{}: {v}", w.label()));
            }
        }
        Ok(checked)
    });
    b.run("maximal_submodule", Some(&chi), || {
        for w in &weights {
            analysis::maximal_submodule(s, w).map_err(fail)?;
        }
        Ok(weights.len())
    });
    b.run("irreducible_dimension", Some(&chi), || {
        for w in &weights {
            let l = analysis::irreducible_quotient(s, w).map_err(fail)?;
            let cert = analysis::is_irreducible(&l, seed);
            if cert.verdict != Verdict::Irreducible {
                return Err(format!("L{} irreducibility verdict {:?}", w.label(), cert.verdict));
            }
        }
        Ok(weights.len())
    });
    b.run("classification", Some(&chi), || Ok(analysis::classify(s).map_err(fail)?.classes.len()));
    b.run("restriction", Some(&chi), || {
        for w in &weights {
            let l = analysis::irreducible_quotient(s, w).map_err(fail)?;
            analysis::restrict_and_decompose(s, w, &l).map_err(fail)?;
        }
        Ok(weights.len())
    });
    b.run("cross_validation", Some(&chi), || {
        let uea = Uea::new(s);
        for w in &weights {
            if verma::induced_verma(&uea, w).map_err(fail)? != verma::baby_verma(s, w).map_err(fail)? {
                return Err(format!("induced and closed-form Z{} differ", w.label()));
            }
        }
        Ok(weights.len())
    });
    b.run("lift", Some(&chi), || {
        let mut checked = 0;
        for levels in 1..=s.r {
            let lower = Setting::with_field(s.p, levels - 1, chi, s.field.clone()).map_err(fail)?;
            for w in lower.weights().map_err(fail)? {
                let l = analysis::irreducible_quotient(&lower, &w).map_err(fail)?;
                let lifted = rep::lift_module(&l, s.r + 1).map_err(fail)?;
                let shift = s.r + 1 - levels;
                if (0..shift).any(|j| GenKind::ALL.iter().any(|&k| !lifted.gen(k, j).is_zero())) {
                    return Err(format!("lift of L{} is nonzero on the killed levels", w.label()));
                }
                checked += 1;
            }
        }
        Ok(checked)
    });
    if !chi.is_zero() {
        b.run("divisibility", Some(&chi), || Ok(analysis::hom_divisibility(s).map_err(fail)?.entries.len()));
        b.run("teenage", Some(&chi), || teenage_suite(s, seed).map_err(fail));
    }
    Ok(())
}

/// Each teenage Verma module is irreducible and isomorphic to the quotient
/// with the same weight.
pub fn teenage_suite(s: &Setting, seed: u64) -> Result<usize, CliError> {
    let mut checked = 0;
    for w in s.weights()? {
        let t = teenage_for(s, &w)?;
        let l = analysis::irreducible_quotient(s, &w)?;
        if analysis::is_irreducible(&t, seed).verdict != Verdict::Irreducible {
            return Err(CliError::Violation(format!("teenage module for {} is not irreducible", w.label())));
        }
        if !analysis::irreducibles_isomorphic(&t, &l)? {
            return Err(CliError::Violation(format!("teenage module for {} is not L{}", w.label(), w.label())));
        }
        checked += 1;
    }
    Ok(checked)
}

/// The teenage Verma module induced from the zero-character irreducible at
/// the restricted weight, with top coordinate `λ_r`.
pub fn teenage_for(s: &Setting, w: &Weight) -> Result<ModuleRep, CliError> {
    let n = match w.restricted() {
        None => rep::trivial_module(&s.field, zero_chi(s.p), 0),
        Some((below, last)) => {
            let lower = Setting::with_field(s.p, s.r - 1, zero_chi(s.p), s.field.clone())?;
            let lw = Weight::new(&lower, below, s.field.from_int(last as i64))?;
            analysis::irreducible_quotient(&lower, &lw)?.restrict_levels(s.r)
        }
    };
    Ok(verma::teenage_verma(s, &n, w.top())?)
}

fn verify_abelian(b: &mut Battery, args: &RunArgs) {
    for group in [Group::Additive, Group::Multiplicative] {
        b.run(&format!("abelian_{}", group.name()), None, || {
            let fl = abelian::splitting_field(group, args.p, args.c).map_err(fail)?;
            let chi = fl.from_int(args.c);
            let sc = match group {
                Group::Additive => abelian::build_additive(&fl, args.r, chi),
                Group::Multiplicative => abelian::build_multiplicative(&fl, args.r, chi),
            }
            .map_err(fail)?;
            let pres = abelian::build_presentation(group, &fl, args.r, chi).map_err(fail)?;
            abelian::check_isomorphism(&pres, &sc).map_err(fail)?;
            if !sc.is_commutative() || !sc.is_associative_sampled(256, args.seed) {
                return Err("structure constants are not commutative and associative".into());
            }
            let report = abelian::analyze_ring(&sc).map_err(fail)?;
            let expected = match group {
                Group::Additive => 1,
                Group::Multiplicative => sc.dim(),
            };
            if report.idempotents != expected {
                return Err(format!("{} primitive idempotents, expected {expected}", report.idempotents));
            }
            Ok(sc.dim())
        });
    }
}

pub fn verify_certificate(args: &RunArgs) -> Result<Value, CliError> {
    guard(args)?;
    let kinds = match args.chi {
        Some(k) => vec![k],
        None => vec![ChiKind::Zero, ChiKind::Nilpotent, ChiKind::Semisimple],
    };
    let mut b = Battery { results: Vec::new() };
    for kind in kinds {
        let s = setting(args, kind)?;
        verify_character(&mut b, &s, args.seed, args.inject_fault)?;
    }
    verify_abelian(&mut b, args);
    let passed = b.results.iter().all(|r| r.passed);
    Ok(json!({
        "p": args.p,
        "r": args.r,
        "seed": args.seed,
        "passed": passed,
        "suites": b.results,
    }))
}

pub fn cmd_verify(args: &RunArgs) -> Result<(), CliError> {
    let cert = verify_certificate(args)?;
    emit(args, &pretty(&cert))?;
    if cert["passed"] == json!(true) {
        return Ok(());
    }
    let failures: Vec<String> = cert["suites"]
        .as_array()
        .expect("array")
        .iter()
        .filter(|s| s["passed"] == json!(false))
        .map(|s| format!("{}: {}", s["name"].as_str().unwrap_or("?"), s["diagnostic"].as_str().unwrap_or("")))
        .collect();
    Err(CliError::Violation(failures.join("; ")))
}

pub fn cmd_export(args: &RunArgs) -> Result<(), CliError> {
    guard(args)?;
    if args.format != Format::Json {
        return Err(CliError::Usage("export writes JSON only".into()));
    }
    let value = match args.object {
        Object::Ga | Object::Gm => {
            let group = if args.object == Object::Ga { Group::Additive } else { Group::Multiplicative };
            let fl = abelian::splitting_field(group, args.p, args.c).map_err(|e| CliError::Usage(e.to_string()))?;
            let chi = fl.from_int(args.c);
            let a = match group {
                Group::Additive => abelian::build_additive(&fl, args.r, chi)?,
                Group::Multiplicative => abelian::build_multiplicative(&fl, args.r, chi)?,
            };
            let mut v = a.to_json();
            v["report"] = serde_json::to_value(abelian::analyze_ring(&a)?).expect("plain struct");
            v
        }
        object => {
            let s = setting(args, required_chi(args)?)?;
            let w = weight(args, &s)?;
            let m = match object {
                Object::Verma => verma::baby_verma(&s, &w)?,
                Object::Quotient => analysis::irreducible_quotient(&s, &w)?,
                _ => teenage_for(&s, &w)?,
            };
            let mut v = m.to_json();
            v["lambda"] = w.lambda_json();
            v
        }
    };
    emit(args, &pretty(&value))
}

pub fn run_cli(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Classify(a) => cmd_classify(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Export(a) => cmd_export(a),
    }
}

/// Parses arguments, runs the command and maps the outcome to an exit code.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run_cli(&cli) {
        Ok(()) => ExitCode::from(EXIT_OK),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
