use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use qph::algebra::{self, PartialProblem, Probe, ProblemFile};
use qph::codec::{Fragment, Generator, GeneratorFile};
use qph::lab::{self, ExperimentConfig, Format};
use qph::quantifier::{self, DecisionThresholds, HierarchyInstance, InstanceFile, Method};
use qph::state::{QTuple, Qustring};
use qph::{Error, Result};

#[derive(Parser)]
#[command(name = "qph", version, about = "Quantum quantifier desk lab")]
struct Cli {
    /// Experiment config (JSON): seed, budgets, sweeps, output.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgebraOp {
    Complement,
    Union,
    Intersect,
    Includes,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Accept,
    Reject,
}

#[derive(Subcommand)]
enum Command {
    /// Qustring JSON to generator JSON.
    Decompose {
        #[arg(long)]
        state: PathBuf,
    },
    /// Generator (or state) to a QGF1 fragment; bytes go to --out.
    Quantize {
        #[arg(long, conflicts_with = "state", required_unless_present = "state")]
        generator: Option<PathBuf>,
        #[arg(long)]
        state: Option<PathBuf>,
        #[arg(long)]
        eps: f64,
    },
    /// QGF1 fragment to the reconstructed qustring.
    Reconstruct {
        #[arg(long)]
        fragment: PathBuf,
        /// Original state, to report the trace distance.
        #[arg(long)]
        state: Option<PathBuf>,
    },
    /// Quantified value of an instance.
    Eval {
        #[arg(long)]
        instance: PathBuf,
        /// exact | grid:R | alt:ITERS,RESTARTS[,SEED]
        #[arg(long, default_value = "exact")]
        method: String,
    },
    /// Promise decision against thresholds (a, b).
    Decide {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value = "exact")]
        method: String,
        #[arg(long, default_value_t = 0.75)]
        a: f64,
        #[arg(long, default_value_t = 0.25)]
        b: f64,
    },
    /// t-fold majority-vote amplification; writes the amplified instance.
    Amplify {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        t: usize,
    },
    /// Partial-problem algebra on problem files.
    Algebra {
        #[arg(long, value_enum)]
        op: AlgebraOp,
        #[arg(long)]
        problem: PathBuf,
        #[arg(long)]
        other: Option<PathBuf>,
    },
    /// Separability of a problem's accept (or reject) set on probe tuples.
    Separability {
        #[arg(long)]
        problem: PathBuf,
        /// JSON list of probes, each a qustring or a list of qustrings.
        #[arg(long)]
        probes: PathBuf,
        #[arg(long, value_enum, default_value = "accept")]
        side: SideArg,
    },
    /// Runs a lemma-check suite.
    Check { suite: String },
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::IoFailure(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn read_instance(path: &Path) -> Result<HierarchyInstance> {
    read_json::<InstanceFile>(path)?.try_into()
}

struct Ctx {
    cfg: ExperimentConfig,
    out: Option<PathBuf>,
    format: Format,
}

impl Ctx {
    fn write<T: Serialize>(&self, value: &T) -> Result<()> {
        let text = lab::render_value(value, self.format)?;
        match &self.out {
            Some(p) => std::fs::write(p, text).map_err(|e| Error::IoFailure(format!("{}: {e}", p.display()))),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

#[derive(serde::Deserialize)]
#[serde(untagged)]
enum ProbeEntry {
    Single(Qustring),
    Tuple(Vec<Qustring>),
}

/// Runs the command; `Ok(false)` means a check failed.
fn run(cli: Cli) -> Result<bool> {
    let mut cfg = match &cli.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg = cfg.with_seed(seed);
    }
    let format = match cli.format {
        Some(FormatArg::Json) => Format::Json,
        Some(FormatArg::Csv) => Format::Csv,
        None => cfg.output.format,
    };
    let out = cli.out.or_else(|| cfg.output.path.clone());
    let budgets = cfg.budgets;
    let ctx = Ctx { cfg, out, format };

    match cli.command {
        Command::Decompose { state } => {
            let phi: Qustring = read_json(&state)?;
            ctx.write(&GeneratorFile::from(&Generator::decompose(&phi)?))?;
        }
        Command::Quantize { generator, state, eps } => {
            let g = match (generator, state) {
                (Some(p), _) => read_json::<GeneratorFile>(&p)?.try_into()?,
                (None, Some(p)) => Generator::decompose(&read_json(&p)?)?,
                (None, None) => unreachable!("clap requires one source"),
            };
            let bytes = Fragment::quantize(&g, eps)?.encode();
            let summary = json!({"n": g.n(), "t": qph::codec::precision_bits(eps)?, "bytes": bytes.len()});
            match &ctx.out {
                Some(p) => std::fs::write(p, &bytes).map_err(|e| Error::IoFailure(format!("{}: {e}", p.display())))?,
                None => {
                    let hex: String = bytes.iter().map(|b| format!("{b:02x}")).collect();
                    return ctx.write(&json!({"summary": summary, "hex": hex})).map(|_| true);
                }
            }
            eprintln!("{summary}");
        }
        Command::Reconstruct { fragment, state } => {
            let bytes = std::fs::read(&fragment).map_err(|e| Error::IoFailure(format!("{}: {e}", fragment.display())))?;
            let psi = Fragment::decode(&bytes)?.reconstruct_state()?;
            let distance = match state {
                Some(p) => Some(read_json::<Qustring>(&p)?.projector().trace_distance(&psi.projector())?),
                None => None,
            };
            ctx.write(&json!({"state": psi, "trace_distance": distance}))?;
        }
        Command::Eval { instance, method } => {
            let inst = read_instance(&instance)?;
            ctx.write(&quantifier::qopt_value(&inst, method.parse()?, &budgets)?)?;
        }
        Command::Decide { instance, method, a, b } => {
            let inst = read_instance(&instance)?;
            let th = DecisionThresholds::new(a, b)?;
            let method: Method = method.parse()?;
            let value = quantifier::qopt_value(&inst, method, &budgets)?.value;
            ctx.write(&json!({"verdict": th.classify(value), "value": value, "a": a, "b": b, "method": method.to_string()}))?;
        }
        Command::Amplify { instance, t } => {
            let inst = read_instance(&instance)?;
            ctx.write(&InstanceFile::from(&quantifier::amplify(&inst, t, &budgets)?))?;
        }
        Command::Algebra { op, problem, other } => {
            let file: ProblemFile = read_json(&problem)?;
            if let (AlgebraOp::Complement, ProblemFile::Threshold { instance, a, b, method }) = (op, &file) {
                // (A, B)‾ is the complemented instance under the same thresholds.
                let inst: HierarchyInstance = instance.clone().try_into()?;
                let flipped = InstanceFile::from(&quantifier::complement_instance(&inst));
                return ctx
                    .write(&ProblemFile::Threshold { instance: flipped, a: *a, b: *b, method: method.clone() })
                    .map(|_| true);
            }
            let p = file.into_problem(&budgets)?;
            let q = match (op, other) {
                (AlgebraOp::Complement, _) => None,
                (_, Some(path)) => Some(read_json::<ProblemFile>(&path)?.into_problem(&budgets)?),
                (_, None) => return Err(Error::ConfigInvalid("this operation needs --other".into())),
            };
            let explicit = |r: PartialProblem| match r {
                PartialProblem::Explicit(e) => Ok(ProblemFile::from_explicit(&e)),
                PartialProblem::Threshold(_) => Err(Error::NotSupported("threshold result".into())),
            };
            match (op, q) {
                (AlgebraOp::Complement, _) => ctx.write(&explicit(algebra::complement(&p))?)?,
                (AlgebraOp::Union, Some(q)) => ctx.write(&explicit(algebra::union(&p, &q)?)?)?,
                (AlgebraOp::Intersect, Some(q)) => ctx.write(&explicit(algebra::intersect(&p, &q)?)?)?,
                (AlgebraOp::Includes, Some(q)) => ctx.write(&json!({"includes": algebra::includes(&p, &q)?}))?,
                _ => unreachable!("checked above"),
            }
        }
        Command::Separability { problem, probes, side } => {
            let p = read_json::<ProblemFile>(&problem)?.into_problem(&budgets)?;
            let tuples: Vec<Vec<Qustring>> = read_json::<Vec<ProbeEntry>>(&probes)?
                .into_iter()
                .map(|e| match e {
                    ProbeEntry::Single(q) => vec![q],
                    ProbeEntry::Tuple(v) => v,
                })
                .collect();
            let first = tuples.first().ok_or_else(|| Error::ConfigInvalid("no probes given".into()))?;
            let (m, n) = (first.len(), first.first().map_or(0, Qustring::size));
            let probes: Vec<Probe> = tuples.into_iter().map(|t| Probe::new(t, Vec::new())).collect();
            let wanted = match side {
                SideArg::Accept => algebra::Membership::Accept,
                SideArg::Reject => algebra::Membership::Reject,
            };
            let report = algebra::is_classically_separable(|t: &QTuple| Ok(p.membership(t)? == wanted), n, m, &probes, &budgets)?;
            ctx.write(&report)?;
            return Ok(report.verified);
        }
        Command::Check { suite } => {
            let report = lab::run_lemma_suite(&suite, &ctx.cfg)?;
            lab::emit(&report, ctx.format, ctx.out.as_deref())?;
            eprintln!("{}: {} cases, {} failed", report.suite, report.cases.len(), report.failures());
            return Ok(report.passed());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
