//! The `hspec` command line.
//!
//! Exit codes: 0 on success, 1 when a verification fails, 2 on usage or
//! input errors. Counts are printed as decimal strings and rationals as
//! `"num/den"`; output depends only on the arguments and the seed.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::catalog::{build_catalog_bounded, catalog_json, verify_catalog, xi_descriptor};
use crate::counting::{hspec_count, poly_bernoulli_neg, vesztergombi_count};
use crate::dd::{dd_run_traced, mp_leq, RationalMatrix, StepIndex};
use crate::perm::check_shape;
use crate::poset::{
    enumerate_restricted_bounded, enumerate_stratum_bounded, export_dot, export_json,
    hasse_bounded, DEFAULT_SIZE_BOUND,
};
use crate::qalgebra::{verify_delta_central, verify_relations};
use crate::{Error, Permutation};

/// Environment variable overriding the default size bound.
pub const SIZE_BOUND_ENV: &str = "HSPEC_SIZE_BOUND";

/// Zero-pivot resampling gives up after this many matrices.
pub const MAX_SAMPLES: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Dot,
    Text,
}

/// Validated settings shared by the subcommands that take a shape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub m: usize,
    pub p: usize,
    pub seed: u64,
    pub size_bound: usize,
    pub output: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    pub fn new(m: usize, p: usize, size_bound: usize) -> crate::Result<Self> {
        check_shape(m, p)?;
        if m + p > size_bound {
            return Err(Error::SizeBoundExceeded {
                n: m + p,
                bound: size_bound,
            });
        }
        Ok(RunConfig {
            m,
            p,
            seed: 0,
            size_bound,
            output: None,
            format: Format::default(),
        })
    }

    pub fn n(&self) -> usize {
        self.m + self.p
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "hspec",
    about = "Restricted permutations, H-prime counts and quantum matrix checks",
    arg_required_else_help = true
)]
struct Cli {
    /// Largest n = m + p accepted (default 10, or $HSPEC_SIZE_BOUND)
    #[arg(long, global = true)]
    size_bound: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Shape {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    p: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Count S by enumeration and by the three closed forms
    Count(Shape),
    /// List S (or the stratum S_t when m = p), one permutation per line
    Enumerate {
        #[command(flatten)]
        shape: Shape,
        #[arg(long)]
        t: Option<usize>,
    },
    /// Hasse diagram of S under the reverse Bruhat order
    Hasse {
        #[command(flatten)]
        shape: Shape,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generator descriptors for every σ in S, or for one
    Xi {
        #[command(flatten)]
        shape: Shape,
        /// One-line notation, as "a,b,c,..."
        #[arg(long, value_parser = parse_permutation)]
        sigma: Option<Permutation>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the defining relations of the n x n quantum matrix algebra
    VerifyRelations {
        #[arg(long)]
        n: usize,
    },
    /// Check that the n x n quantum determinant is central
    VerifyDeltaCentral {
        #[arg(long)]
        n: usize,
    },
    /// Run the deleting-derivations recursion at q = 1 on a seeded random matrix
    DdRun {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Last step, as "j,beta" (default "m,m")
        #[arg(long, value_parser = parse_step)]
        target: Option<StepIndex>,
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Run the criterion, lemma, nesting and stratification checks on the catalog
    VerifyCatalog(Shape),
}

fn parse_list(s: &str) -> Result<Vec<usize>, String> {
    s.split(',')
        .map(|x| x.trim().parse::<usize>().map_err(|e| format!("{x:?}: {e}")))
        .collect()
}

fn parse_permutation(s: &str) -> Result<Permutation, String> {
    Permutation::new(parse_list(s)?).map_err(|e| e.to_string())
}

fn parse_step(s: &str) -> Result<StepIndex, String> {
    match parse_list(s)?.as_slice() {
        &[row, col] => Ok(StepIndex::new(row, col)),
        _ => Err(format!("expected \"j,beta\", got {s:?}")),
    }
}

/// A failed run: `Usage` maps to exit code 2, `Verification` to 1.
enum Failure {
    Usage(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::CountInconsistency { .. } => Failure::Verification(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

/// Runs the command line against the process's stdout and stderr.
pub fn dispatch<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    dispatch_to(args, &mut stdout.lock(), &mut stderr.lock())
}

/// Like [`dispatch`] with explicit output streams. `args` includes the
/// program name.
pub fn dispatch_to<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{rendered}");
                    0
                }
                _ => {
                    let _ = write!(err, "{rendered}");
                    2
                }
            };
        }
    };
    let result = size_bound(cli.size_bound).and_then(|bound| run(cli.command, bound, out));
    match result {
        Ok(()) => 0,
        Err(Failure::Verification(msg)) => {
            let _ = writeln!(err, "verification failed: {msg}");
            1
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

fn size_bound(flag: Option<usize>) -> Result<usize, Failure> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match std::env::var(SIZE_BOUND_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("{SIZE_BOUND_ENV}={v:?} is not a size"))),
        Err(_) => Ok(DEFAULT_SIZE_BOUND),
    }
}

fn check_n(n: usize, bound: usize) -> Outcome {
    if n == 0 {
        return Err(Failure::Usage("n must be at least 1".into()));
    }
    if n > bound {
        return Err(Error::SizeBoundExceeded { n, bound }.into());
    }
    Ok(())
}

fn emit(out: &mut dyn Write, path: Option<&Path>, body: &str) -> Outcome {
    match path {
        Some(p) => std::fs::write(p, body)?,
        None => writeln!(out, "{body}")?,
    }
    Ok(())
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("output serializes")
}

fn run(command: Command, bound: usize, out: &mut dyn Write) -> Outcome {
    match command {
        Command::Count(s) => count(RunConfig::new(s.m, s.p, bound)?, out),
        Command::Enumerate { shape, t } => {
            enumerate(RunConfig::new(shape.m, shape.p, bound)?, t, out)
        }
        Command::Hasse {
            shape,
            format,
            out: path,
        } => {
            let cfg = RunConfig {
                format,
                output: path,
                ..RunConfig::new(shape.m, shape.p, bound)?
            };
            hasse_cmd(&cfg, out)
        }
        Command::Xi {
            shape,
            sigma,
            out: path,
        } => {
            let cfg = RunConfig {
                output: path,
                ..RunConfig::new(shape.m, shape.p, bound)?
            };
            xi(&cfg, sigma, out)
        }
        Command::VerifyRelations { n } => {
            check_n(n, bound)?;
            match verify_relations(n)? {
                Ok(checked) => {
                    #[derive(Serialize)]
                    struct R {
                        n: usize,
                        checked: usize,
                        passed: bool,
                    }
                    emit(
                        out,
                        None,
                        &json(&R {
                            n,
                            checked,
                            passed: true,
                        }),
                    )
                }
                Err(f) => Err(Failure::Verification(format!(
                    "{}: residual {}",
                    f.identity, f.residual
                ))),
            }
        }
        Command::VerifyDeltaCentral { n } => {
            check_n(n, bound)?;
            match verify_delta_central(n)? {
                Ok(()) => emit(out, None, &format!("{{\"n\":{n},\"central\":true}}")),
                Err(f) => Err(Failure::Verification(format!(
                    "{}: residual {}",
                    f.identity, f.residual
                ))),
            }
        }
        Command::DdRun {
            n,
            m,
            seed,
            target,
            trace,
        } => {
            check_n(n, bound)?;
            if n < m {
                return Err(Error::InvalidMatrix { n, m }.into());
            }
            let cfg = RunConfig {
                seed,
                output: trace,
                ..RunConfig::new(m, n - m, bound)?
            };
            dd_cmd(&cfg, target.unwrap_or(StepIndex::new(m, m)), out)
        }
        Command::VerifyCatalog(s) => {
            let cfg = RunConfig::new(s.m, s.p, bound)?;
            let report = verify_catalog(cfg.m, cfg.p, cfg.size_bound)?;
            emit(out, None, &json(&report))?;
            match report.checks.iter().find(|c| !c.passed) {
                None => Ok(()),
                Some(c) => Err(Failure::Verification(format!(
                    "{}: {}",
                    c.name,
                    c.detail.as_deref().unwrap_or("failed")
                ))),
            }
        }
    }
}

fn count(cfg: RunConfig, out: &mut dyn Write) -> Outcome {
    #[derive(Serialize)]
    #[serde(rename_all = "camelCase")]
    struct Counts {
        m: usize,
        p: usize,
        enumerated: String,
        vesztergombi: String,
        poly_bernoulli: String,
        hspec: String,
        agree: bool,
    }
    let enumerated = enumerate_restricted_bounded(cfg.m, cfg.p, cfg.size_bound)?
        .len()
        .to_string();
    let vesztergombi = vesztergombi_count(cfg.m, cfg.p)?.to_string();
    let poly_bernoulli = poly_bernoulli_neg(cfg.p, cfg.m).to_string();
    let hspec = hspec_count(cfg.m, cfg.p)?.to_string();
    let agree =
        enumerated == vesztergombi && vesztergombi == poly_bernoulli && poly_bernoulli == hspec;
    emit(
        out,
        None,
        &json(&Counts {
            m: cfg.m,
            p: cfg.p,
            enumerated,
            vesztergombi,
            poly_bernoulli,
            hspec,
            agree,
        }),
    )?;
    if agree {
        Ok(())
    } else {
        Err(Failure::Verification(format!(
            "counts disagree for (m, p) = ({}, {})",
            cfg.m, cfg.p
        )))
    }
}

fn enumerate(cfg: RunConfig, t: Option<usize>, out: &mut dyn Write) -> Outcome {
    let list = match t {
        Some(_) if cfg.m != cfg.p => {
            return Err(Failure::Usage("--t needs a square shape (m = p)".into()));
        }
        Some(t) => enumerate_stratum_bounded(cfg.m, t, cfg.size_bound)?,
        None => enumerate_restricted_bounded(cfg.m, cfg.p, cfg.size_bound)?,
    };
    for s in &list {
        writeln!(out, "{}", json(s))?;
    }
    Ok(())
}

fn hasse_cmd(cfg: &RunConfig, out: &mut dyn Write) -> Outcome {
    let g = hasse_bounded(cfg.m, cfg.p, cfg.size_bound)?;
    let body = match cfg.format {
        Format::Json => export_json(&g),
        Format::Dot => export_dot(&g).trim_end().to_string(),
        Format::Text => g
            .edges()
            .iter()
            .map(|&(a, b)| format!("{} < {}", g.nodes()[a], g.nodes()[b]))
            .collect::<Vec<_>>()
            .join("\n"),
    };
    emit(out, cfg.output.as_deref(), &body)
}

fn xi(cfg: &RunConfig, sigma: Option<Permutation>, out: &mut dyn Write) -> Outcome {
    let entries = match sigma {
        Some(s) => vec![xi_descriptor(&s, cfg.m, cfg.p)?],
        None => build_catalog_bounded(cfg.m, cfg.p, cfg.size_bound)?,
    };
    emit(
        out,
        cfg.output.as_deref(),
        &catalog_json(cfg.m, cfg.p, &entries),
    )
}

fn rational(v: &num_rational::BigRational) -> String {
    format!("{}/{}", v.numer(), v.denom())
}

fn dd_cmd(cfg: &RunConfig, target: StepIndex, out: &mut dyn Write) -> Outcome {
    #[derive(Serialize)]
    #[serde(rename_all = "camelCase")]
    struct Summary {
        seed: u64,
        n: usize,
        m: usize,
        target: StepIndex,
        samples: usize,
        input: Vec<Vec<String>>,
        output: Vec<Vec<String>>,
        determinant: String,
        #[serde(skip_serializing_if = "Option::is_none")]
        diagonal_product: Option<String>,
        #[serde(skip_serializing_if = "Option::is_none")]
        determinant_identity: Option<bool>,
    }
    #[derive(Serialize)]
    struct TraceJson {
        step: StepIndex,
        matrix: Vec<Vec<String>>,
    }

    let (n, m) = (cfg.n(), cfg.m);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut samples = 0;
    let (input, trace) = loop {
        samples += 1;
        let y = RationalMatrix::random_integer(n, -9, 9, &mut rng);
        match dd_run_traced(&y, m, target) {
            Ok(trace) => break (y, trace),
            Err(Error::ZeroPivot(_)) if samples < MAX_SAMPLES => continue,
            Err(e) => return Err(e.into()),
        }
    };
    let result = &trace.last().expect("trace starts with the input").matrix;
    let det = input.determinant();
    // the diagonal is final once the run has reached (m,m)
    let identity_applies = mp_leq(target, StepIndex::new(m, m), m);
    let diag = identity_applies.then(|| result.diagonal_product());
    let holds = diag.as_ref().map(|d| *d == det);
    let summary = Summary {
        seed: cfg.seed,
        n,
        m,
        target,
        samples,
        input: input.to_strings(),
        output: result.to_strings(),
        determinant: rational(&det),
        diagonal_product: diag.as_ref().map(rational),
        determinant_identity: holds,
    };
    emit(out, None, &json(&summary))?;
    if let Some(path) = &cfg.output {
        let entries: Vec<TraceJson> = trace
            .iter()
            .map(|e| TraceJson {
                step: e.step,
                matrix: e.matrix.to_strings(),
            })
            .collect();
        std::fs::write(path, json(&entries))?;
    }
    match holds {
        Some(false) => Err(Failure::Verification(format!(
            "det = {} but the diagonal product after {target} is {}",
            rational(&det),
            rational(diag.as_ref().expect("checked"))
        ))),
        _ => Ok(()),
    }
}
