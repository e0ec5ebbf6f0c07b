//! `twistor`: classify curvature operators on the product twistor space,
//! verify the classification theorems and run the consistency self-tests.
//!
//! Exit status: 0 success, 1 a verified statement or self-test failed,
//! 2 unreadable or malformed input, 3 input that violates a mathematical
//! contract (asymmetric operator, non-positive `t1`, ...).

mod document;
mod error;
mod report;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use twistor_core::consistency::{selftest, SelftestOptions};
use twistor_core::curvature::ModelName;
use twistor_core::gh::{classify, W1W3Reading, W2W3Reading};
use twistor_core::linalg::Mat3;
use twistor_core::theorems::{verify_theorem, TheoremId};
use twistor_core::{Component, CurvatureOperator, ModelParams, Params, SamplingConfig};

use crate::document::CurvatureDoc;
use crate::error::{CliError, CliResult};
use crate::report::{
    classification_csv, json_bytes, models_csv, CheckDoc, ClassificationDoc, ModelDoc, SelftestDoc,
    SuiteDoc,
};

#[derive(Parser, Debug)]
#[command(name = "twistor", version, about, long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Detect the Gray-Hervella class of (H_t, J^n) for a curvature operator.
    Classify(ClassifyArgs),
    /// Verify classification theorems in both directions.
    Verify(VerifyArgs),
    /// Run the internal-consistency checks of the closed-form tensors.
    Selftest(SelftestArgs),
    /// List the built-in curvature models.
    Models(OutputArgs),
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("source").required(true).args(["model", "input"])))]
struct ClassifyArgs {
    /// Built-in curvature model (see `twistor models`).
    #[arg(long, value_parser = parse_via::<ModelName>)]
    model: Option<ModelName>,
    /// Curvature-operator JSON document; repeat for a batch.
    #[arg(long)]
    input: Vec<PathBuf>,
    /// Scalar curvature for models that take one.
    #[arg(long, allow_negative_numbers = true)]
    s: Option<f64>,
    /// Traceless-Ricci block B as 9 comma-separated numbers, row-major.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_mat3)]
    b: Option<Mat3>,
    /// W- block as 9 comma-separated numbers, row-major.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_mat3)]
    wminus: Option<Mat3>,
    /// Component of the product twistor space: ++, +-, -+ or --.
    #[arg(long, default_value = "++", allow_hyphen_values = true, value_parser = parse_via::<Component>)]
    component: Component,
    /// Which almost complex structure J^n.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=4))]
    n: u8,
    /// Weight of the first fibre in the metric H_t; must be positive.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    t1: f64,
    /// Weight of the second fibre; must be positive.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    t2: f64,
    #[command(flatten)]
    sampling: SamplingArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("which").required(true).args(["all", "id"])))]
struct VerifyArgs {
    /// Every theorem direction.
    #[arg(long)]
    all: bool,
    /// A single theorem direction such as 4.6b; may be repeated.
    #[arg(long, value_parser = parse_via::<TheoremId>)]
    id: Vec<TheoremId>,
    #[command(flatten)]
    sampling: SamplingArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct SelftestArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random configurations per check.
    #[arg(long, default_value_t = 500)]
    trials: usize,
    /// Configurations per dimension for the fibre check.
    #[arg(long, default_value_t = 20)]
    fibre_trials: usize,
    /// Negative control: run with a corrupted sign table.
    #[arg(long, hide = true)]
    corrupt_sign_table: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct SamplingArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Sampled points (J1, J2).
    #[arg(long, default_value_t = 64)]
    samples: usize,
    /// Random argument triples per point.
    #[arg(long, default_value_t = 32)]
    triples: usize,
    /// A condition holds when its normalized residual is at most this.
    #[arg(long, default_value = "1e-9")]
    tol: f64,
    /// Sign between the two terms of the W1+W3 condition.
    #[arg(long, value_enum, default_value_t = W1W3Arg::Minus)]
    w1w3: W1W3Arg,
    /// Arguments of the cyclic sum in the W2+W3 condition.
    #[arg(long, value_enum, default_value_t = W2W3Arg::ThreeArgument)]
    w2w3: W2W3Arg,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum W1W3Arg {
    Minus,
    Plus,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum W2W3Arg {
    ThreeArgument,
    Repeated,
}

impl SamplingArgs {
    fn config(&self) -> CliResult<SamplingConfig> {
        let cfg = SamplingConfig {
            seed: self.seed,
            num_points: self.samples,
            num_arg_triples: self.triples,
            tol: self.tol,
            w1w3: match self.w1w3 {
                W1W3Arg::Minus => W1W3Reading::Minus,
                W1W3Arg::Plus => W1W3Reading::Plus,
            },
            w2w3: match self.w2w3 {
                W2W3Arg::ThreeArgument => W2W3Reading::ThreeArgument,
                W2W3Arg::Repeated => W2W3Reading::Repeated,
            },
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

impl OutputArgs {
    fn emit(&self, bytes: &[u8]) -> CliResult<()> {
        match &self.output {
            Some(path) => fs::write(path, bytes)
                .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display()))),
            None => std::io::stdout()
                .write_all(bytes)
                .map_err(|e| CliError::Input(format!("cannot write to stdout: {e}"))),
        }
    }
}

fn parse_via<T: FromStr<Err = twistor_core::Error>>(s: &str) -> Result<T, String> {
    s.parse().map_err(|e: twistor_core::Error| e.to_string())
}

fn parse_mat3(s: &str) -> Result<Mat3, String> {
    let values: Vec<f64> = s
        .split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|e| format!("`{v}`: {e}")))
        .collect::<Result<_, _>>()?;
    if values.len() != 9 {
        return Err(format!("expected 9 numbers, got {}", values.len()));
    }
    Ok(core::array::from_fn(|i| {
        core::array::from_fn(|j| values[3 * i + j])
    }))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Classify(args) => cmd_classify(&args),
        Command::Verify(args) => cmd_verify(&args),
        Command::Selftest(args) => cmd_selftest(&args),
        Command::Models(out) => cmd_models(&out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn cmd_classify(args: &ClassifyArgs) -> CliResult<()> {
    let cfg = args.sampling.config()?;
    let params = Params::new(args.t1, args.t2, args.n)?;
    let mut sources: Vec<(String, CurvatureOperator)> = Vec::new();
    if let Some(model) = args.model {
        let (uses_s, _, _) = model.uses();
        if uses_s && args.s.is_none() {
            return Err(CliError::Input(format!(
                "--s is required for model {model}"
            )));
        }
        let mp = ModelParams {
            s: args.s.unwrap_or(0.0),
            b: args.b.unwrap_or_default(),
            w_minus: args.wminus.unwrap_or_default(),
        };
        let source = match args.s {
            Some(s) => format!("model {model} (s={s})"),
            None => format!("model {model}"),
        };
        sources.push((source, model.build(&mp)?));
    } else {
        if args.s.is_some() || args.b.is_some() || args.wminus.is_some() {
            return Err(CliError::Input(
                "--s, --b and --wminus apply only to --model".into(),
            ));
        }
        for path in &args.input {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
            let r = document::parse(&text).map_err(|e| match e {
                CliError::Input(m) => CliError::Input(format!("{}: {m}", path.display())),
                CliError::Validation(m) => CliError::Validation(format!("{}: {m}", path.display())),
                other => other,
            })?;
            sources.push((path.display().to_string(), r));
        }
    }

    let mut docs = Vec::with_capacity(sources.len());
    for (source, r) in sources {
        let report = classify(&r, args.component, params, &cfg)?;
        for flag in &report.flags {
            eprintln!("warning: {source}: {flag}");
        }
        docs.push(ClassificationDoc::new(
            source,
            CurvatureDoc::new(&r),
            &report,
        ));
    }
    let bytes = match args.output.format {
        Format::Csv => classification_csv(&docs),
        Format::Json if docs.len() == 1 => json_bytes(&docs[0]),
        Format::Json => json_bytes(&docs),
    };
    args.output.emit(&bytes)
}

fn cmd_verify(args: &VerifyArgs) -> CliResult<()> {
    let cfg = args.sampling.config()?;
    let ids: Vec<TheoremId> = if args.all {
        TheoremId::ALL.to_vec()
    } else {
        args.id.clone()
    };
    let outcomes = ids
        .iter()
        .map(|&id| verify_theorem(id, &cfg))
        .collect::<Result<Vec<_>, _>>()?;
    let suite = SuiteDoc::new(&cfg, &outcomes);
    let bytes = match args.output.format {
        Format::Json => json_bytes(&suite),
        Format::Csv => suite.csv(),
    };
    args.output.emit(&bytes)?;
    for o in &outcomes {
        let worst = o.failures().next();
        match worst {
            None => eprintln!("{}  pass", o.id),
            Some(e) => eprintln!("{}  FAIL  {} = {:.3e}", o.id, e.label, e.value),
        }
    }
    eprintln!(
        "{}/{} theorem directions verified",
        suite.passed, suite.total
    );
    if suite.failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Assertion(format!(
            "failed: {}",
            suite.failed.join(", ")
        )))
    }
}

fn cmd_selftest(args: &SelftestArgs) -> CliResult<()> {
    if args.trials == 0 || args.fibre_trials == 0 {
        return Err(CliError::Validation(
            "--trials and --fibre-trials must be positive".into(),
        ));
    }
    let opts = SelftestOptions {
        seed: args.seed,
        trials: args.trials,
        fibre_trials: args.fibre_trials,
        corrupt_sign_table: args.corrupt_sign_table,
    };
    let checks = selftest(&opts);
    let doc = SelftestDoc {
        seed: args.seed,
        trials: args.trials,
        fibre_trials: args.fibre_trials,
        passed: checks.iter().all(|c| c.passed()),
        checks: checks.iter().map(CheckDoc::from).collect(),
    };
    let bytes = match args.output.format {
        Format::Json => json_bytes(&doc),
        Format::Csv => doc.csv(),
    };
    args.output.emit(&bytes)?;
    let failed: Vec<String> = checks
        .iter()
        .filter(|c| !c.passed())
        .map(|c| {
            format!(
                "{} (max residual {:e} > {:e} at {})",
                c.name, c.max_residual, c.tol, c.witness
            )
        })
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Assertion(format!(
            "self-test failed: {}",
            failed.join("; ")
        )))
    }
}

fn cmd_models(out: &OutputArgs) -> CliResult<()> {
    let models: Vec<ModelDoc> = ModelName::ALL.into_iter().map(ModelDoc::from).collect();
    let bytes = match out.format {
        Format::Json => json_bytes(&models),
        Format::Csv => models_csv(&models),
    };
    out.emit(&bytes)
}
