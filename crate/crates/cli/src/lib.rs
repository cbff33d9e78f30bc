//! Job specification, command dispatch and JSON output for `qgauss`.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use qgauss_core::cartan::FundamentalRep;
use qgauss_core::jimbo::{build_dual_sl2, build_glpq2, Bindings, SlAlgebra};
use qgauss_core::matrixrep::{
    calibrate_reference_table, classical_limit, evaluate_in_rep, evaluate_matrix, limit_commutators, KronOrder,
    RepImages,
};
use qgauss_core::verify::{CheckKind, Group, Perturbation, Subject, VerificationReport};
use qgauss_core::{AlgebraElement, LaurentPoly, NcEntry, OpMatrix, Signature};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_VIOLATED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] qgauss_core::Error),
    #[error("config: {0}")]
    Config(String),
    #[error("{0}")]
    Usage(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CommandKind {
    Build,
    Verify,
    Rep,
    Limit,
}

/// Everything a run depends on. Parsed from flags, a JSON config file, or
/// both (flags win).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct JobSpec {
    pub command: Option<CommandKind>,
    pub group: Option<Group>,
    pub n: Option<usize>,
    pub f: Option<String>,
    pub g: Option<String>,
    pub lambda: Option<String>,
    pub c_plus: Option<String>,
    pub c_minus: Option<String>,
    /// Extra `name -> expression` bindings, e.g. `f2 -> q`.
    pub bind: BTreeMap<String, String>,
    pub checks: Option<String>,
    pub perturb: Option<String>,
    pub calibrate: bool,
    pub order: Option<KronOrder>,
    pub element: Option<String>,
    pub output: Option<PathBuf>,
    pub timings: bool,
}

impl JobSpec {
    pub fn group(&self) -> Group {
        self.group.unwrap_or(Group::SlQ)
    }

    pub fn n(&self) -> usize {
        self.n.unwrap_or(2)
    }

    /// Name-to-expression map handed to the core; `formal` leaves a symbol free.
    pub fn raw_bindings(&self) -> BTreeMap<String, String> {
        let mut raw = self.bind.clone();
        for (name, value) in [
            ("f", &self.f),
            ("g", &self.g),
            ("lambda", &self.lambda),
            ("c_plus", &self.c_plus),
            ("c_minus", &self.c_minus),
        ] {
            if let Some(v) = value {
                raw.insert(name.to_string(), v.clone());
            }
        }
        raw.retain(|_, v| v.trim() != "formal");
        raw
    }

    /// Overlays the fields set in `other`.
    fn overlay(mut self, other: JobSpec) -> Self {
        macro_rules! take {
            ($($f:ident),*) => { $( if other.$f.is_some() { self.$f = other.$f; } )* };
        }
        take!(command, group, n, f, g, lambda, c_plus, c_minus, checks, perturb, order, element, output);
        self.bind.extend(other.bind);
        self.calibrate |= other.calibrate;
        self.timings |= other.timings;
        self
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "qgauss",
    version,
    about = "Exact Gauss decompositions and RTT checks for quantum groups"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Build T^-, T^+ and the assembled T in normal form.
    Build(JobArgs),
    /// Run relation checks; exit 1 if any fails.
    Verify(JobArgs),
    /// Evaluate T (or one element) in the fundamental representation.
    Rep(JobArgs),
    /// Classical limit M = dT/dh at h = 0.
    Limit(JobArgs),
}

#[derive(Debug, Args, Default)]
pub struct JobArgs {
    /// sl_q, gl_pq_2 or dual_sl2.
    #[arg(long)]
    pub group: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Value for every f_i, or `formal`.
    #[arg(long, allow_hyphen_values = true)]
    pub f: Option<String>,
    /// Value for every g_i, or `formal`.
    #[arg(long, allow_hyphen_values = true)]
    pub g: Option<String>,
    /// Ladder parameter; defaults to q - q^-1.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub c_plus: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub c_minus: Option<String>,
    /// Extra binding `name=expr`; repeatable.
    #[arg(long, value_name = "NAME=EXPR", allow_hyphen_values = true)]
    pub bind: Vec<String>,
    /// Comma-separated subset of rtt,gauss,serre,qdet,inverse or `all`.
    #[arg(long)]
    pub checks: Option<String>,
    /// Single-entry edit such as t11, t12+:shift, t21-:bump.
    #[arg(long)]
    pub perturb: Option<String>,
    /// Fit conventions to the published 2x2 representation table.
    #[arg(long, alias = "calibrate-section5")]
    pub calibrate: bool,
    /// Kronecker order for representation matrices: natural or reversed.
    #[arg(long)]
    pub order: Option<String>,
    /// Element to evaluate instead of T (`one` is the unit).
    #[arg(long)]
    pub element: Option<String>,
    /// JSON job file; flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Write the document here (atomically) instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Include wall-clock times in verification reports.
    #[arg(long)]
    pub timings: bool,
}

fn parse_enum<T: for<'de> Deserialize<'de>>(what: &str, s: &str) -> CliResult<T> {
    serde_json::from_value(Value::String(s.to_string())).map_err(|_| CliError::Usage(format!("unknown {what} `{s}`")))
}

impl Cli {
    /// Merges the config file (if any) with the flags.
    pub fn into_spec(self) -> CliResult<JobSpec> {
        let (kind, args) = match self.command {
            CliCommand::Build(a) => (CommandKind::Build, a),
            CliCommand::Verify(a) => (CommandKind::Verify, a),
            CliCommand::Rep(a) => (CommandKind::Rep, a),
            CliCommand::Limit(a) => (CommandKind::Limit, a),
        };
        let base = match &args.config {
            Some(path) => load_config(path)?,
            None => JobSpec::default(),
        };
        if base.command.is_some_and(|c| c != kind) {
            return Err(CliError::Config(format!(
                "config is for a different command than `{kind:?}`"
            )));
        }
        let mut bind = BTreeMap::new();
        for b in &args.bind {
            let (k, v) = b
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("--bind expects NAME=EXPR, got `{b}`")))?;
            bind.insert(k.trim().to_string(), v.trim().to_string());
        }
        let flags = JobSpec {
            command: Some(kind),
            group: args.group.as_deref().map(|s| parse_enum("group", s)).transpose()?,
            n: args.n,
            f: args.f,
            g: args.g,
            lambda: args.lambda,
            c_plus: args.c_plus,
            c_minus: args.c_minus,
            bind,
            checks: args.checks,
            perturb: args.perturb,
            calibrate: args.calibrate,
            order: args.order.as_deref().map(|s| parse_enum("order", s)).transpose()?,
            element: args.element,
            output: args.output,
            timings: args.timings,
        };
        Ok(base.overlay(flags))
    }
}

pub fn load_config(path: &Path) -> CliResult<JobSpec> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

/// Result of a command: the JSON document and the exit code it implies.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub document: Value,
    pub exit_code: i32,
}

pub fn run(spec: &JobSpec) -> CliResult<Outcome> {
    match spec.command.unwrap_or(CommandKind::Build) {
        CommandKind::Build => cmd_build(spec),
        CommandKind::Verify => cmd_verify(spec),
        CommandKind::Rep => cmd_rep(spec),
        CommandKind::Limit => cmd_limit(spec),
    }
}

fn display_grid<E: NcEntry>(m: &OpMatrix<E>) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.get(i, j).to_string()).collect())
        .collect()
}

fn matrix_doc(m: &OpMatrix) -> Value {
    json!({ "display": display_grid(m), "normal_form": m })
}

/// `K_m = q^{sum_k c_mk H_k}` for every torus generator with a known logarithm.
fn torus_legend(sig: &Signature) -> Vec<String> {
    let Some(log) = sig.torus_log() else {
        return Vec::new();
    };
    sig.torus()
        .iter()
        .zip(log)
        .map(|(name, row)| {
            let parts: Vec<String> = row
                .iter()
                .enumerate()
                .filter(|(_, c)| **c != 0.into())
                .map(|(k, c)| {
                    if *c == 1.into() {
                        format!("H{}", k + 1)
                    } else {
                        format!("({c})H{}", k + 1)
                    }
                })
                .collect();
            format!("{name} = q^{{{}}}", parts.join(" + "))
        })
        .collect()
}

fn subject(spec: &JobSpec) -> CliResult<Subject> {
    let s = Subject::build(spec.group(), spec.n(), &spec.raw_bindings())?;
    match &spec.perturb {
        Some(p) => Ok(s.perturbed(&p.parse::<Perturbation>()?)?),
        None => Ok(s),
    }
}

pub fn cmd_build(spec: &JobSpec) -> CliResult<Outcome> {
    let s = subject(spec)?;
    let sig = s.t.get(0, 0).signature().clone();
    let mut doc = json!({
        "command": "build",
        "group": s.group,
        "n": s.n,
        "bindings": s.bindings.to_strings(),
        "signature": sig,
        "torus_legend": torus_legend(&sig),
    });
    let factors: Vec<(String, OpMatrix)> = match (s.group, &s.triple) {
        (_, Some(triple)) => vec![
            ("t_minus".into(), triple.t_minus.clone()),
            ("t_plus".into(), triple.t_plus.clone()),
        ],
        (Group::GlPq2, None) => build_glpq2()?.factors,
        (_, None) => build_dual_sl2()?.factors,
    };
    let mut fdoc = serde_json::Map::new();
    for (name, m) in &factors {
        let m = s.bindings.apply_matrix(m)?;
        fdoc.insert(name.clone(), matrix_doc(&m));
    }
    doc["factors"] = Value::Object(fdoc);
    doc["t"] = matrix_doc(&s.t);
    Ok(Outcome {
        document: doc,
        exit_code: EXIT_PASS,
    })
}

pub fn cmd_verify(spec: &JobSpec) -> CliResult<Outcome> {
    let checks = match &spec.checks {
        Some(c) => CheckKind::parse_list(c)?,
        None => qgauss_core::verify::applicable_checks(spec.group()).to_vec(),
    };
    let s = subject(spec)?;
    let mut reports: Vec<VerificationReport> = qgauss_core::verify::run_suite(&s, &checks)?;
    if !spec.timings {
        for r in &mut reports {
            r.wall_time_us = None;
        }
    }
    let pass = reports.iter().all(|r| r.pass);
    Ok(Outcome {
        document: serde_json::to_value(&reports).map_err(|e| CliError::Usage(e.to_string()))?,
        exit_code: if pass { EXIT_PASS } else { EXIT_VIOLATED },
    })
}

fn sl_only(spec: &JobSpec, what: &str) -> CliResult<()> {
    if spec.group() != Group::SlQ {
        return Err(CliError::Usage(format!("`{what}` is available for sl_q only")));
    }
    Ok(())
}

fn grid(m: &qgauss_core::ScalarMatrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.get(i, j).to_string()).collect())
        .collect()
}

pub fn cmd_rep(spec: &JobSpec) -> CliResult<Outcome> {
    sl_only(spec, "rep")?;
    if spec.calibrate {
        if spec.n() != 2 {
            return Err(CliError::Usage("--calibrate needs --n 2".into()));
        }
        let cal = calibrate_reference_table()?;
        let names = ["t11", "t12", "t21", "t22"];
        let matrices: Vec<Value> = cal
            .matrices
            .iter()
            .zip(names)
            .zip(&cal.matches)
            .map(|((m, name), ok)| json!({ "entry": name, "matches_table": ok, "matrix": grid(&m.matrix) }))
            .collect();
        return Ok(Outcome {
            document: json!({
                "command": "rep",
                "group": Group::SlQ,
                "n": 2,
                "calibration": {
                    "order": cal.order,
                    "f": cal.f.to_string(),
                    "g": cal.g.to_string(),
                    "q": cal.q_root,
                    "confirmed": cal.confirmed,
                },
                "matrices": matrices,
            }),
            exit_code: if cal.confirmed && cal.matches.iter().all(|&b| b) {
                EXIT_PASS
            } else {
                EXIT_VIOLATED
            },
        });
    }
    let s = subject(spec)?;
    let sl = s.sl.as_ref().expect("sl_q subject");
    let rep = FundamentalRep::new(sl.n())?;
    let images = RepImages::fundamental(sl, &rep)?;
    let order = spec.order.unwrap_or(KronOrder::Natural);
    let matrices: Vec<Value> = match spec.element.as_deref() {
        None => {
            let m = evaluate_matrix(&s.t, &images, order)?;
            (0..m.rows())
                .flat_map(|i| (0..m.cols()).map(move |j| (i, j)))
                .map(|(i, j)| json!({ "entry": format!("t{}{}", i + 1, j + 1), "matrix": grid(&m.get(i, j).matrix) }))
                .collect()
        }
        Some("one") => {
            let one = AlgebraElement::one(sl.signature());
            vec![json!({ "entry": "one", "matrix": grid(&evaluate_in_rep(&one, &images, order)?.matrix) })]
        }
        Some(other) => return Err(CliError::Usage(format!("unknown element `{other}` (expected `one`)"))),
    };
    Ok(Outcome {
        document: json!({
            "command": "rep",
            "group": Group::SlQ,
            "n": sl.n(),
            "order": order,
            "q": format!("q = v^{}", rep.root()),
            "bindings": s.bindings.to_strings(),
            "matrices": matrices,
        }),
        exit_code: EXIT_PASS,
    })
}

pub fn cmd_limit(spec: &JobSpec) -> CliResult<Outcome> {
    sl_only(spec, "limit")?;
    let s = subject(spec)?;
    let root = FundamentalRep::new(s.n)?.root() as i32;
    let m = classical_limit(&s.t, &Bindings::new(), root)?;
    let commutators: Vec<Value> = if s.n == 2 {
        limit_commutators(&m)?
            .into_iter()
            .map(|(rel, holds)| json!({ "relation": rel, "holds": holds }))
            .collect()
    } else {
        Vec::new()
    };
    let pass = commutators.iter().all(|c| c["holds"] == Value::Bool(true));
    Ok(Outcome {
        document: json!({
            "command": "limit",
            "group": s.group,
            "n": s.n,
            "bindings": s.bindings.to_strings(),
            "q": format!("q = e^h = v^{root}"),
            "m": display_grid(&m),
            "commutators": commutators,
        }),
        exit_code: if pass { EXIT_PASS } else { EXIT_VIOLATED },
    })
}

/// Serializes `doc` canonically (pretty JSON, trailing newline).
pub fn render(doc: &Value) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("JSON values always serialize");
    s.push('\n');
    s
}

/// Writes `text` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, text: &str) -> CliResult<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(text.as_bytes())?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| CliError::Io(e.error))?;
    Ok(())
}

/// Full run from parsed flags to bytes on disk or stdout; returns the exit code.
pub fn execute(cli: Cli) -> i32 {
    let result = cli.into_spec().and_then(|spec| {
        let out = run(&spec)?;
        let text = render(&out.document);
        match &spec.output {
            Some(path) => write_atomic(path, &text)?,
            None => std::io::stdout().write_all(text.as_bytes())?,
        }
        Ok(out.exit_code)
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("qgauss: {e}");
            EXIT_USAGE
        }
    }
}

/// Parses a polynomial in the variables of `group` at rank `n`; handy for tests.
pub fn parse_poly(group: Group, n: usize, text: &str) -> CliResult<LaurentPoly> {
    let vars = match group {
        Group::SlQ => SlAlgebra::new(n)?.vars().clone(),
        Group::GlPq2 => build_glpq2()?.signature.vars().clone(),
        Group::DualSl2 => build_dual_sl2()?.signature.vars().clone(),
    };
    Ok(LaurentPoly::parse(&vars, text)?)
}
