//! Command-line front end.
//!
//! Exit codes: 0 success, 2 search exhausted, 3 invalid parameters,
//! 4 unreadable or invalid input, 5 a test whose hypothesis does not hold.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use thiserror::Error;

use crate::bricard::{normalize, MeshCoeffs, MeshIoError, QuadSubstitution};
use crate::construct::{
    adjacent_singular, constant, deltoidal_irreducible_special, deltoidal_reducible, isogonal, opposite_singular,
    AdjacentSystem, ConstructError, Constructed, DeltoidalOption, Seed, Sign,
};
use crate::geometry::{algebraic_sweep, embed_mesh, sweep, write_obj, Branch, CentralFace, Choice, GeometryError, TraceRecord};
use crate::verify::{alpha_grid, classify_mesh, resultant_gcd_check, scalar_check, trace_oracle, MeshClass, TraceConfig, VerifyError};
use crate::TOOL_VERSION;

#[derive(Debug, Parser)]
#[command(name = "kokotsakis", version, about = "Construct, classify, verify and realize flexible 3x3 quad meshes")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone, Serialize)]
pub struct Global {
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Closure tolerance of the trace test.
    #[arg(long, global = true, default_value_t = 1e-7)]
    pub tol: f64,
    /// Sample count of the trace test.
    #[arg(long, global = true, default_value_t = 1000)]
    pub samples: usize,
    /// Report format; `text` for humans, `json` for machines.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Output file (directory for `embed`); stdout when omitted.
    #[arg(short, long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
    Jsonl,
    Obj,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Trace,
    Gcd,
    Scalar,
    All,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a verified flexible mesh of the given class.
    Construct(ConstructArgs),
    /// Print the class of a mesh and the shape of each quad.
    Classify { file: PathBuf },
    /// Run one or all flexibility tests.
    Verify {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::All)]
        method: Method,
    },
    /// Write closing configurations over a sweep of alpha_1 as JSON lines.
    Trace {
        file: PathBuf,
        #[arg(long, default_value_t = 200)]
        frames: usize,
    },
    /// Write one OBJ per frame of a flexion, plus a JSON-lines trace.
    Embed(EmbedArgs),
    /// Rewrite antiisograms and antideltoids as isograms and deltoids.
    Normalize { file: PathBuf },
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[arg(long)]
    pub class: MeshClass,
    /// Option of the reducible deltoidal construction (1 or 2).
    #[arg(long)]
    pub option: Option<usize>,
    /// Quad index carrying the frozen coordinate of a constant mesh (2..4).
    #[arg(long)]
    pub j: Option<usize>,
    /// Adjacent system (1..4) for adjacent and reducible deltoidal meshes.
    #[arg(long)]
    pub system: Option<usize>,
    /// Forced parameter values, `name=value`.
    #[arg(long, num_args = 1.., value_parser = parse_kv::<f64>)]
    pub param: Vec<(String, f64)>,
    /// Forced sign choices, `name=+` or `name=-`.
    #[arg(long, num_args = 1.., value_parser = parse_kv::<Sign>)]
    pub sign: Vec<(String, Sign)>,
    /// Maximum number of random draws.
    #[arg(long, default_value_t = crate::construct::DEFAULT_BUDGET)]
    pub budget: usize,
}

#[derive(Debug, Args)]
pub struct EmbedArgs {
    pub file: PathBuf,
    /// Turn of the central polygon at its first vertex; searched when omitted.
    #[arg(long, allow_hyphen_values = true)]
    pub tau1: Option<f64>,
    #[arg(long, default_value_t = 60)]
    pub frames: usize,
    /// Length of the outer edges.
    #[arg(long, default_value_t = 0.5)]
    pub outer: f64,
    /// Which closing configuration to start the sweep from.
    #[arg(long, default_value_t = 0)]
    pub branch: usize,
}

fn parse_kv<T: std::str::FromStr>(s: &str) -> Result<(String, T), String>
where
    T::Err: std::fmt::Display,
{
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected name=value, got '{s}'"))?;
    let v = v.parse::<T>().map_err(|e| format!("{k}: {e}"))?;
    Ok((k.to_string(), v))
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Search(ConstructError),
    #[error("{0}")]
    Params(String),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Hypothesis(String),
    #[error("{0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Search(_) => 2,
            CliError::Params(_) => 3,
            CliError::Input(_) => 4,
            CliError::Hypothesis(_) => 5,
            CliError::Io(_) => 1,
        }
    }
}

impl From<ConstructError> for CliError {
    fn from(e: ConstructError) -> Self {
        match e {
            ConstructError::SearchExhausted { .. } => CliError::Search(e),
            other => CliError::Params(other.to_string()),
        }
    }
}

impl From<MeshIoError> for CliError {
    fn from(e: MeshIoError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<GeometryError> for CliError {
    fn from(e: GeometryError) -> Self {
        match e {
            GeometryError::Io(e) => CliError::Io(e),
            other => CliError::Input(other.to_string()),
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind::*;
            let code = match e.kind() {
                DisplayHelp | DisplayVersion | DisplayHelpOnMissingArgumentOrSubcommand => 0,
                _ => 3,
            };
            let _ = if code == 0 { write!(out, "{}", e.render()) } else { write!(err, "{}", e.render()) };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.code()
        }
    }
}

pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let g = &cli.global;
    match &cli.command {
        Command::Construct(a) => cmd_construct(g, a, out),
        Command::Classify { file } => cmd_classify(g, file, out),
        Command::Verify { file, method } => cmd_verify(g, file, *method, out),
        Command::Trace { file, frames } => cmd_trace(g, file, *frames, out),
        Command::Embed(a) => cmd_embed(g, a, out),
        Command::Normalize { file } => cmd_normalize(g, file, out),
    }
}

/// Metadata block attached to every report.
#[derive(Serialize)]
struct RunMeta<'a> {
    tool: &'static str,
    command: &'static str,
    input: Option<String>,
    seed: u64,
    tol: f64,
    samples: usize,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    options: BTreeMap<&'a str, String>,
}

impl<'a> RunMeta<'a> {
    fn new(g: &Global, command: &'static str, input: Option<&Path>) -> Self {
        RunMeta {
            tool: TOOL_VERSION,
            command,
            input: input.map(|p| p.display().to_string()),
            seed: g.seed,
            tol: g.tol,
            samples: g.samples,
            options: BTreeMap::new(),
        }
    }

    fn with(mut self, k: &'a str, v: impl ToString) -> Self {
        self.options.insert(k, v.to_string());
        self
    }

    fn comment(&self) -> String {
        let mut s = format!("{} {}", self.tool, self.command);
        if let Some(i) = &self.input {
            s += &format!(" {i}");
        }
        s += &format!(" seed={} tol={:e} samples={}", self.seed, self.tol, self.samples);
        for (k, v) in &self.options {
            s += &format!(" {k}={v}");
        }
        s
    }
}

fn trace_config(g: &Global) -> TraceConfig {
    TraceConfig { samples: g.samples, tol: g.tol, allow_complex: true }
}

fn load(path: &Path) -> Result<MeshCoeffs, CliError> {
    Ok(MeshCoeffs::load(path)?)
}

/// Writes to `--out` if given, else to `out`.
fn emit(g: &Global, out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    match &g.out {
        Some(p) => fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn json_mode(g: &Global) -> bool {
    g.format == Some(Format::Json)
}

fn cmd_construct(g: &Global, a: &ConstructArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let mut seed = Seed::new(g.seed);
    seed.budget = a.budget;
    seed.params = a.param.iter().cloned().collect();
    seed.signs = a.sign.iter().cloned().collect();
    let system = match a.system {
        None => AdjacentSystem::One,
        Some(n) => AdjacentSystem::from_index(n).ok_or_else(|| CliError::Params(format!("--system {n}: expected 1..4")))?,
    };
    let option = match a.option {
        None => DeltoidalOption::One,
        Some(n) => DeltoidalOption::from_index(n).ok_or_else(|| CliError::Params(format!("--option {n}: expected 1 or 2")))?,
    };
    let built: Constructed = match a.class {
        MeshClass::Isogonal => isogonal(&seed)?,
        MeshClass::Constant => constant(&seed, a.j.unwrap_or(2))?,
        MeshClass::Adjacent => adjacent_singular(&seed, system)?,
        MeshClass::Opposite => opposite_singular(&seed)?,
        MeshClass::DeltoidalReducible => deltoidal_reducible(&seed, option, system)?,
        MeshClass::DeltoidalIrreducible => deltoidal_irreducible_special(&seed)?,
        MeshClass::OutsideScope => return Err(CliError::Params("outside-scope meshes have no constructor".into())),
    };
    log::info!("{} accepted after {} draws", a.class, built.attempts);
    emit(g, out, &built.mesh.to_json())
}

#[derive(Serialize)]
struct ClassifyReport<'a> {
    meta: RunMeta<'a>,
    class: &'static str,
    label: &'static str,
    quads: Vec<&'static str>,
    transform: Vec<&'static str>,
}

fn sub_name(s: QuadSubstitution) -> &'static str {
    match s {
        QuadSubstitution::None => "none",
        QuadSubstitution::FlipY => "flip-y",
        QuadSubstitution::FlipX => "flip-x",
    }
}

fn cmd_classify(g: &Global, file: &Path, out: &mut dyn Write) -> Result<(), CliError> {
    let m = load(file)?;
    let c = classify_mesh(&m, &trace_config(g));
    let rep = ClassifyReport {
        meta: RunMeta::new(g, "classify", Some(file)),
        class: c.class.name(),
        label: c.class.label(),
        quads: c.shapes.iter().map(|s| s.name()).collect(),
        transform: c.transform.subs.iter().map(|s| sub_name(*s)).collect(),
    };
    let text = if json_mode(g) {
        crate::json::to_string_pretty(&rep).expect("serializable")
    } else {
        let mut s = format!("# {}\n{}\n", rep.meta.comment(), rep.label);
        for (i, q) in rep.quads.iter().enumerate() {
            s += &format!("quad {}: {q} ({})\n", i + 1, rep.transform[i]);
        }
        s
    };
    emit(g, out, &text)
}

#[derive(Serialize, Default)]
struct Verdict {
    verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    detail: Option<String>,
}

#[derive(Serialize)]
struct TraceSummary {
    verdict: &'static str,
    closure_fraction: f64,
    nonconstant_fraction: f64,
    usable: usize,
    samples: usize,
    driver: usize,
    residual_max: f64,
    residual_median: f64,
    frozen: Vec<usize>,
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    meta: RunMeta<'a>,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<TraceSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    gcd: Option<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    scalar: Option<Verdict>,
}

fn flex(b: bool) -> &'static str {
    if b {
        "flexible"
    } else {
        "rigid"
    }
}

fn cmd_verify(g: &Global, file: &Path, method: Method, out: &mut dyn Write) -> Result<(), CliError> {
    let m = load(file)?;
    let want = |x: Method| method == Method::All || method == x;
    let cfg = trace_config(g);
    let tr = trace_oracle(&m, &cfg);
    let mut rep = VerifyReport {
        meta: RunMeta::new(g, "verify", Some(file)).with("method", format!("{method:?}").to_lowercase()),
        trace: None,
        gcd: None,
        scalar: None,
    };
    if want(Method::Trace) {
        rep.trace = Some(TraceSummary {
            verdict: tr.verdict(),
            closure_fraction: tr.closure_fraction,
            nonconstant_fraction: tr.nonconstant_fraction,
            usable: tr.usable,
            samples: tr.samples,
            driver: tr.driver,
            residual_max: tr.residual_max,
            residual_median: tr.residual_median,
            frozen: tr.frozen.iter().map(|c| c.index + 1).collect(),
        });
    }
    if want(Method::Gcd) {
        rep.gcd = Some(match resultant_gcd_check(&m, &tr) {
            Ok(c) => Verdict { verdict: flex(c.shared), detail: Some(format!("shared fraction {:.3}", c.fraction)) },
            Err(VerifyError::HypothesisViolated) if method == Method::Gcd => {
                return Err(CliError::Hypothesis(
                    "a constant branch exists, so the resultant test does not apply; use --method trace".into(),
                ))
            }
            Err(e) => Verdict { verdict: "n/a", detail: Some(e.to_string()) },
        });
    }
    if want(Method::Scalar) {
        rep.scalar = Some(match scalar_check(&m) {
            Ok(c) => Verdict { verdict: flex(c.scalar), detail: Some(format!("defect {:.3e}", c.defect)) },
            Err(e) if method == Method::Scalar => return Err(CliError::Hypothesis(e.to_string())),
            Err(e) => Verdict { verdict: "n/a", detail: Some(e.to_string()) },
        });
    }
    let text = if json_mode(g) {
        crate::json::to_string_pretty(&rep).expect("serializable")
    } else {
        let mut s = format!("# {}\n", rep.meta.comment());
        if let Some(t) = &rep.trace {
            s += &format!(
                "trace: {} (closure_fraction {:.4}, usable {}/{}, driver x{}, residual median {:.2e})\n",
                t.verdict,
                t.closure_fraction,
                t.usable,
                t.samples,
                t.driver + 1,
                t.residual_median
            );
            if !t.frozen.is_empty() {
                s += &format!("trace: constant branch freezes x{:?}\n", t.frozen);
            }
        }
        for (name, v) in [("gcd", &rep.gcd), ("scalar", &rep.scalar)] {
            if let Some(v) = v {
                s += &format!("{name}: {}", v.verdict);
                if let Some(d) = &v.detail {
                    s += &format!(" ({d})");
                }
                s += "\n";
            }
        }
        s
    };
    emit(g, out, &text)
}

fn cmd_trace(g: &Global, file: &Path, frames: usize, out: &mut dyn Write) -> Result<(), CliError> {
    if frames == 0 {
        return Err(CliError::Params("--frames must be positive".into()));
    }
    let m = load(file)?;
    let meta = RunMeta::new(g, "trace", Some(file)).with("frames", frames);
    let alphas = alpha_grid(frames);
    let mut text = crate::json::to_string_line(&serde_json::json!({ "meta": meta })).expect("serializable");
    text.push('\n');
    for (i, (a, xs)) in alphas.iter().zip(algebraic_sweep(&m, &alphas, 0, g.tol)).enumerate() {
        let rec = match xs {
            Some(xs) => TraceRecord::from_config(i, *a, &m, &xs),
            None => TraceRecord::open(i, *a),
        };
        text += &rec.to_line();
        text.push('\n');
    }
    emit(g, out, &text)
}

fn cmd_embed(g: &Global, a: &EmbedArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let dir = g.out.as_ref().ok_or_else(|| CliError::Params("embed needs --out DIR".into()))?;
    if a.frames == 0 || !(a.outer > 0.0) {
        return Err(CliError::Params("--frames and --outer must be positive".into()));
    }
    let m = load(&a.file)?;
    let (tau1, branch, face) = match a.tau1 {
        Some(t) => {
            let face = CentralFace::for_mesh(&m, t, Branch::Plus).or_else(|_| CentralFace::for_mesh(&m, t, Branch::Minus))?;
            (t, Branch::Plus, face)
        }
        None => CentralFace::search(&m, 360)
            .ok_or_else(|| CliError::Input("no turn tau1 gives a central face with positive edge lengths".into()))?,
    };
    let meta = RunMeta::new(g, "embed", Some(&a.file))
        .with("tau1", format!("{tau1:.17e}"))
        .with("central_branch", format!("{branch:?}").to_lowercase())
        .with("frames", a.frames)
        .with("outer", a.outer)
        .with("branch", a.branch);
    fs::create_dir_all(dir)?;
    let alphas = alpha_grid(a.frames);
    let mut lines = crate::json::to_string_line(&serde_json::json!({ "meta": meta })).expect("serializable");
    lines.push('\n');
    let mut written = 0;
    for (i, (al, fr)) in alphas.iter().zip(sweep(&m, &face, &alphas, &Choice::Index(a.branch))).enumerate() {
        let rec = match fr.and_then(|f| embed_mesh(&face, &f, a.outer).map(|mesh| (f, mesh))) {
            Ok((f, mesh)) => {
                let mut obj = Vec::new();
                write_obj(&mesh, &[meta.comment(), format!("frame {i} alpha1 {al:.17e}")], &mut obj)?;
                fs::write(dir.join(format!("frame_{i:04}.obj")), obj)?;
                written += 1;
                TraceRecord::from_frame(i, &f, Some(&mesh))
            }
            Err(e) => {
                log::debug!("frame {i}: {e}");
                TraceRecord::open(i, *al)
            }
        };
        lines += &rec.to_line();
        lines.push('\n');
    }
    fs::write(dir.join("trace.jsonl"), lines)?;
    writeln!(out, "wrote {written} of {} frames to {}", a.frames, dir.display())?;
    if written == 0 {
        return Err(CliError::Input("no frame of the sweep has a real closing configuration".into()));
    }
    Ok(())
}

fn cmd_normalize(g: &Global, file: &Path, out: &mut dyn Write) -> Result<(), CliError> {
    let m = load(file)?;
    let (mut n, t) = normalize(&m);
    let meta = n.meta.get_or_insert_with(Default::default);
    meta.tool = TOOL_VERSION.to_string();
    let subs: Vec<&str> = t.subs.iter().map(|s| sub_name(*s)).collect();
    meta.config.insert("normalized_from".into(), file.display().to_string());
    meta.config.insert("transform".into(), subs.join(","));
    emit(g, out, &n.to_json())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        let code = run_with(std::iter::once("kokotsakis").chain(args.iter().copied()), &mut o, &mut e);
        (code, String::from_utf8(o).unwrap(), String::from_utf8(e).unwrap())
    }

    #[test]
    fn zero_parameter_is_a_parameter_error() {
        let (code, _, err) = run_str(&["construct", "--class", "isogonal", "--param", "a1=0"]);
        assert_eq!(code, 3, "{err}");
    }

    #[test]
    fn unknown_flag_is_a_parameter_error() {
        assert_eq!(run_str(&["construct", "--colour", "red"]).0, 3);
        assert_eq!(run_str(&["--help"]).0, 0);
    }

    #[test]
    fn exhausted_budget_exits_2() {
        let (code, _, err) = run_str(&["construct", "--class", "isogonal", "--param", "a4=-1.2", "--budget", "3"]);
        assert_eq!(code, 2, "{err}");
    }

    #[test]
    fn kv_parsing() {
        assert_eq!(parse_kv::<f64>("a1=-0.5").unwrap(), ("a1".into(), -0.5));
        assert_eq!(parse_kv::<Sign>("k1=-").unwrap(), ("k1".into(), Sign::Minus));
        assert!(parse_kv::<f64>("a1").is_err());
    }
}
