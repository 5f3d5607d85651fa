//! Argument parsing and the report writer behind the `wpline` binary.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use wpline::algebra::{AlgebraSpec, Generator, LambdaSpec};
use wpline::grading::{HeightWindow, WeightSequence};
use wpline::linalg::Field;
use wpline::module::{free_module, monomial_quotient, simple_module, ModuleDocument};
use wpline::verify::{run_suite, run_sweep, sweep_configs, SampleMode, Suite, SuiteConfig};

/// Directory used for reports when `--out` is absent.
pub const OUT_DIR_VAR: &str = "WPLINE_OUT_DIR";

#[derive(Parser, Debug)]
#[command(
    name = "wpline",
    version,
    about = "Certificates for the weighted projective line recollement"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Option<Command>,
    #[command(flatten)]
    pub opts: RunArgs,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run the configured suites (the default).
    Run,
    /// Run every weight triple up to a bound with every reduced weight.
    Sweep {
        /// Largest entry of the weight triples.
        #[arg(long, default_value_t = 4)]
        max: u32,
        /// Extra weight triples, e.g. `2,3,5`.
        #[arg(long = "extra", value_name = "P,Q,R")]
        extra: Vec<String>,
    },
    /// Write a module as a JSON document.
    Module {
        #[arg(long, value_enum, default_value_t = ModuleKind::Free)]
        kind: ModuleKind,
        /// Degree `(l_1,…,l_n;l)`, zero when absent.
        #[arg(long)]
        degree: Option<String>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModuleKind {
    Free,
    Simple,
    /// `S(l)/(x_1, …, x_n)`
    Regular,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
}

#[derive(Args, Debug, Default, Clone)]
pub struct RunArgs {
    /// TOML file with any of the options below; flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Weight sequence, default `2,3,5`
    #[arg(long, global = true, value_name = "P,Q,R")]
    pub weights: Option<String>,
    /// Reduced last weight, default 2
    #[arg(long, global = true, value_name = "RPRIME")]
    pub reduce: Option<u32>,
    /// `auto` or `[a:b],[a:b],…`
    #[arg(long, global = true)]
    pub lambda: Option<String>,
    /// `rational` or `gf:P`
    #[arg(long, global = true)]
    pub field: Option<String>,
    /// Lowest height of the window, default -3
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub hmin: Option<i64>,
    /// Highest height of the window, default 6
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub hmax: Option<i64>,
    /// `lemmas`, `adjunction`, `theorem` or `all`
    #[arg(long, global = true)]
    pub suite: Option<String>,
    /// `full` or `sweep`
    #[arg(long, global = true)]
    pub samples: Option<String>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Output file; without it reports go to stdout or to `$WPLINE_OUT_DIR`
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for sampled degrees and isomorphism search, default 0
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

/// Options read from `--config`.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub weights: Option<Vec<u32>>,
    pub reduce: Option<u32>,
    pub lambda: Option<String>,
    pub field: Option<String>,
    pub hmin: Option<i64>,
    pub hmax: Option<i64>,
    pub suite: Option<String>,
    pub samples: Option<String>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
}

/// A validated configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub suite: SuiteConfig,
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    /// `p″ = (p_1, …, p_{n−1}, p_n − p′_n + 1)`
    pub fn double_weights(&self) -> WeightSequence {
        self.suite.double_weights()
    }
}

fn parse_weights(s: &str) -> Result<WeightSequence, String> {
    let raw: Result<Vec<u32>, _> = s
        .trim()
        .trim_start_matches('(')
        .trim_end_matches(')')
        .split(',')
        .map(|p| p.trim().parse::<u32>())
        .collect();
    let raw = raw.map_err(|_| {
        format!("weights: `{s}` is not a comma-separated list of positive integers")
    })?;
    WeightSequence::new(raw).map_err(|e| format!("weights: {e}"))
}

/// Merges the config file and flags, then checks every constraint.
///
/// All problems are collected into one list of diagnostics.
pub fn parse_config(args: &RunArgs) -> Result<RunConfig, Vec<String>> {
    let mut errs = Vec::new();
    let file = match &args.config {
        Some(p) => match fs::read_to_string(p) {
            Ok(text) => match toml::from_str::<FileConfig>(&text) {
                Ok(f) => f,
                Err(e) => return Err(vec![format!("config {}: {e}", p.display())]),
            },
            Err(e) => return Err(vec![format!("config {}: {e}", p.display())]),
        },
        None => FileConfig::default(),
    };
    let defaults = SuiteConfig::default();

    let weights = match (&args.weights, &file.weights) {
        (Some(s), _) => parse_weights(s),
        (None, Some(v)) => WeightSequence::new(v.clone()).map_err(|e| format!("weights: {e}")),
        (None, None) => Ok(defaults.weights.clone()),
    };
    let weights = weights.map_err(|e| errs.push(e)).ok();
    let reduced = args.reduce.or(file.reduce).unwrap_or(defaults.reduced);
    let lambda = args
        .lambda
        .clone()
        .or(file.lambda.clone())
        .map(|s| s.parse::<LambdaSpec>().map_err(|e| format!("lambda: {e}")))
        .unwrap_or(Ok(LambdaSpec::Auto))
        .map_err(|e| errs.push(e))
        .ok();
    let field = args
        .field
        .clone()
        .or(file.field.clone())
        .map(|s| s.parse::<Field>().map_err(|e| format!("field: {e}")))
        .unwrap_or(Ok(Field::Rational))
        .map_err(|e| errs.push(e))
        .ok();
    let window = HeightWindow {
        h_min: args.hmin.or(file.hmin).unwrap_or(defaults.window.h_min),
        h_max: args.hmax.or(file.hmax).unwrap_or(defaults.window.h_max),
    };
    let suite = args
        .suite
        .clone()
        .or(file.suite.clone())
        .map(|s| s.parse::<Suite>().map_err(|e| e.to_string()))
        .unwrap_or(Ok(Suite::All))
        .map_err(|e| errs.push(e))
        .ok();
    let samples = args
        .samples
        .clone()
        .or(file.samples.clone())
        .map(|s| {
            s.parse::<SampleMode>()
                .map_err(|_| format!("samples: unknown mode `{s}`"))
        })
        .unwrap_or(Ok(SampleMode::Full))
        .map_err(|e| errs.push(e))
        .ok();
    let format = args.format.or(file.format).unwrap_or(Format::Text);
    let out = args.out.clone().or(file.out.clone());
    let seed = args.seed.or(file.seed).unwrap_or(defaults.seed);

    let (Some(weights), Some(lambda), Some(field), Some(suite), Some(samples)) =
        (weights, lambda, field, suite, samples)
    else {
        return Err(errs);
    };
    let cfg = SuiteConfig {
        weights,
        reduced,
        lambda,
        field,
        window,
        suite,
        seed,
        samples,
    };
    if let Err(v) = cfg.validate() {
        errs.extend(v.into_iter().map(|e| e.to_string()));
    }
    if errs.is_empty() {
        Ok(RunConfig {
            suite: cfg,
            format,
            out,
        })
    } else {
        Err(errs)
    }
}

fn destination(out: &Option<PathBuf>, format: Format, stem: &str) -> Option<PathBuf> {
    if let Some(p) = out {
        return Some(p.clone());
    }
    let dir = std::env::var_os(OUT_DIR_VAR)?;
    let ext = match format {
        Format::Text => "txt",
        Format::Json => "json",
    };
    Some(Path::new(&dir).join(format!("{stem}.{ext}")))
}

fn emit(text: &str, dest: Option<PathBuf>) -> Result<(), String> {
    match dest {
        Some(p) => {
            if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(parent).map_err(|e| format!("{}: {e}", parent.display()))?;
            }
            fs::write(&p, text).map_err(|e| format!("{}: {e}", p.display()))?;
            eprintln!("wrote {}", p.display());
            Ok(())
        }
        None => {
            let mut out = io::stdout().lock();
            match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
                Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(format!("stdout: {e}")),
                _ => Ok(()),
            }
        }
    }
}

fn module_document(
    cfg: &RunConfig,
    kind: ModuleKind,
    degree: &Option<String>,
) -> Result<String, String> {
    let s = &cfg.suite;
    let alg = Arc::new(
        AlgebraSpec::new(s.weights.clone(), &s.lambda, s.field).map_err(|e| e.to_string())?,
    );
    let w = alg.weights().clone();
    let l = match degree {
        None => w.zero(),
        Some(d) => w.parse_element(d).map_err(|e| format!("degree: {e}"))?,
    };
    let m = match kind {
        ModuleKind::Free => free_module(alg.clone(), std::slice::from_ref(&l), s.window),
        ModuleKind::Simple => simple_module(alg.clone(), &l, s.window),
        ModuleKind::Regular => {
            let gens: Vec<(Generator, u32)> = (0..w.len()).map(|i| (Generator::X(i), 1)).collect();
            let q =
                monomial_quotient(alg.clone(), &l, &gens, s.window).map_err(|e| e.to_string())?;
            (*q.module).clone()
        }
    };
    Ok(ModuleDocument::from_module(&m).to_json())
}

/// Runs the command line; the return value is the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let cfg = match parse_config(&cli.opts) {
        Ok(c) => c,
        Err(errs) => {
            eprintln!("invalid configuration:");
            for e in errs {
                eprintln!("  {e}");
            }
            return 2;
        }
    };
    let result = match cli.command.unwrap_or(Command::Run) {
        Command::Run => {
            let report = run_suite(&cfg.suite).expect("validated");
            let text = match cfg.format {
                Format::Text => report.to_text(),
                Format::Json => report.to_json(),
            };
            emit(&text, destination(&cfg.out, cfg.format, "report")).map(|_| report.passed())
        }
        Command::Sweep { max, extra } => {
            let mut triples = Vec::new();
            for e in &extra {
                match parse_weights(e) {
                    Ok(w) => triples.push(w.weights().to_vec()),
                    Err(msg) => {
                        eprintln!("{msg}");
                        return 2;
                    }
                }
            }
            let mut base = cfg.suite.clone();
            base.samples = SampleMode::Sweep;
            let configs = sweep_configs(&base, max, &triples);
            match run_sweep(&configs) {
                Ok(report) => {
                    let text = match cfg.format {
                        Format::Text => report.to_text(),
                        Format::Json => report.to_json(),
                    };
                    emit(&text, destination(&cfg.out, cfg.format, "sweep")).map(|_| report.passed())
                }
                Err(errs) => {
                    for e in errs {
                        eprintln!("{e}");
                    }
                    return 2;
                }
            }
        }
        Command::Module { kind, degree } => match module_document(&cfg, kind, &degree) {
            Ok(doc) => emit(&doc, destination(&cfg.out, Format::Json, "module")).map(|_| true),
            Err(e) => {
                eprintln!("invalid module request: {e}");
                return 2;
            }
        },
    };
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            3
        }
    }
}
