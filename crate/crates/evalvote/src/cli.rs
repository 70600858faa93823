//! Command-line interface.

use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use evalvote_core::analysis::{
    empirical_correlation, fit_beta_moments, fit_gaussian_copula, histogram, pairwise_scatter, DEFAULT_BINS,
};
use evalvote_core::rules::{DepthSpec, Rule, DEFAULT_APPROVAL_THRESHOLD};
use evalvote_core::{quantize, EvaluationProfile, SeededRandomSource};
use serde_json::{json, Value};

use crate::config::{ModelSpec, RunSpec};
use crate::dataio::{
    read_ballots_csv, read_profile_csv, write_histogram_csv, write_profile_csv, write_scatter_csv, write_scene_csv,
    BallotFileSpec, DataError, MissingPolicy,
};
use crate::error::CliError;
use crate::json::{float, to_canonical_string, write_value, ToJson};
use crate::parallel::run_experiment_parallel;
use crate::svg::{histogram_svg, scatter_svg};

#[derive(Debug, Parser)]
#[command(name = "evalvote", version, about = "Simulate, elect and analyse evaluation-based voting profiles")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic profile CSV (plus a scene CSV for the spatial model and a config sidecar).
    Generate(GenerateArgs),
    /// Elect a winner from a profile or ballot file.
    Elect(ElectArgs),
    /// Run a Monte Carlo experiment and write its report.
    Experiment(ExperimentArgs),
    /// Write histograms, pairwise scatter data and correlations of a profile.
    Analyze(AnalyzeArgs),
    /// Fit Gaussian-copula and/or Beta margins to a profile.
    Fit(FitArgs),
    /// Snap a continuous profile onto a k-level grade scale.
    Quantize(QuantizeArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// TOML config (JSON when the extension is .json); flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub voters: Option<usize>,
    #[arg(long)]
    pub candidates: Option<usize>,
    /// Master seed; required.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// uniform | dirichlet | copula | normal | beta | spatial
    #[arg(long)]
    pub model: Option<String>,
    /// Copula: one correlation for every pair.
    #[arg(long, allow_negative_numbers = true)]
    pub rho: Option<f64>,
    /// Copula: headerless CSV correlation matrix.
    #[arg(long)]
    pub corr_file: Option<PathBuf>,
    /// Copula: draw a random correlation matrix (the default).
    #[arg(long)]
    pub random_corr: bool,
    /// Normal: standard deviation (default 0.25).
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Normal: candidate means, comma separated (one value is used for all).
    #[arg(long, value_delimiter = ',')]
    pub means: Option<Vec<f64>>,
    /// Beta: alpha parameters, comma separated (one value is used for all).
    #[arg(long, value_delimiter = ',')]
    pub alpha: Option<Vec<f64>>,
    /// Beta: beta parameters, comma separated (one value is used for all).
    #[arg(long, value_delimiter = ',')]
    pub beta: Option<Vec<f64>>,
    /// Normal/Beta: sample the parameters per profile (the default).
    #[arg(long)]
    pub sample_params: bool,
    /// Spatial: dimension (default 2 below 5 candidates, 3 otherwise).
    #[arg(long)]
    pub dim: Option<usize>,
    /// Spatial: linear | sigmoid (default sigmoid).
    #[arg(long)]
    pub mapping: Option<String>,
    /// Spatial sigmoid: lambda (default 5).
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Spatial sigmoid: beta (default 2).
    #[arg(long)]
    pub map_beta: Option<f64>,
}

impl ModelArgs {
    fn spec(&self) -> ModelSpec {
        ModelSpec {
            name: self.model.clone(),
            rho: self.rho,
            corr: None,
            corr_file: self.corr_file.clone(),
            random_corr: self.random_corr.then_some(true),
            sigma: self.sigma,
            means: self.means.clone(),
            alpha: self.alpha.clone(),
            beta: self.beta.clone(),
            sample_params: self.sample_params.then_some(true),
            dim: self.dim,
            mapping: self.mapping.clone(),
            lambda: self.lambda,
            map_beta: self.map_beta,
        }
    }
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub run: RunArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    /// Profile CSV to write.
    #[arg(long, short)]
    pub output: PathBuf,
    /// Scene CSV for the spatial model [default: <output stem>.scene.csv].
    #[arg(long)]
    pub scene: Option<PathBuf>,
    /// Resolved-config sidecar [default: <output stem>.config.json].
    #[arg(long)]
    pub sidecar: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Profile CSV, or a ballot CSV when --scale-max is given.
    #[arg(long, short)]
    pub input: PathBuf,
    /// Read integer ballots on a 0..=MAX scale.
    #[arg(long)]
    pub scale_max: Option<u32>,
    /// Drop ballots with blank cells instead of rejecting the file.
    #[arg(long, requires = "scale_max")]
    pub drop_missing: bool,
    /// Keep only these candidates: 1-based column numbers or header names, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub columns: Option<Vec<String>>,
}

#[derive(Debug, Args)]
pub struct ElectArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// approval | range | mj | deepest
    #[arg(long)]
    pub rule: String,
    /// Approval threshold (default 0.5).
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Deepest voting exponent (default 2).
    #[arg(long)]
    pub p: Option<f64>,
    /// JSON result file [default: standard output].
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    #[command(flatten)]
    pub run: RunArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub replicates: Option<usize>,
    /// Rules, comma separated, e.g. `range,mj,deepest:1,approval:0.6`.
    #[arg(long, alias = "rule", value_delimiter = ',')]
    pub rules: Option<Vec<String>>,
    /// Worker threads [default: available parallelism]. The report does not depend on it.
    #[arg(long)]
    pub workers: Option<usize>,
    /// JSON report file [default: standard output].
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Directory for the output files (created if missing).
    #[arg(long)]
    pub out_dir: PathBuf,
    #[arg(long, default_value_t = DEFAULT_BINS)]
    pub bins: usize,
    /// Candidate pair `i,j` (column numbers) for scatter output; repeatable.
    #[arg(long)]
    pub pair: Vec<String>,
    /// Scatter output for every pair of candidates.
    #[arg(long)]
    pub all_pairs: bool,
    /// Also render SVG plots.
    #[arg(long)]
    pub svg: bool,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Fit a Gaussian copula.
    #[arg(long)]
    pub copula: bool,
    /// Fit Beta margins by moments.
    #[arg(long)]
    pub beta: bool,
    /// JSON output [default: standard output].
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct QuantizeArgs {
    #[arg(long, short)]
    pub input: PathBuf,
    /// Number of grade levels (11 for a 0-10 scale).
    #[arg(long)]
    pub k: u32,
    #[arg(long, short)]
    pub output: PathBuf,
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Generate(args) => cmd_generate(&args),
        Command::Elect(args) => cmd_elect(&args),
        Command::Experiment(args) => cmd_experiment(&args),
        Command::Analyze(args) => cmd_analyze(&args),
        Command::Fit(args) => cmd_fit(&args),
        Command::Quantize(args) => cmd_quantize(&args),
    }
}

fn run_spec(run: &RunArgs, model: &ModelArgs, extra: RunSpec) -> Result<RunSpec, CliError> {
    let mut spec = match &run.config {
        Some(path) => RunSpec::load(path)?,
        None => RunSpec::default(),
    };
    let flags =
        RunSpec { voters: run.voters, candidates: run.candidates, seed: run.seed, model: model.spec(), ..extra };
    spec.overlay(&flags);
    spec.resolved = None;
    Ok(spec)
}

/// `dir/stem<suffix>` next to `path`.
fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "profile".into());
    path.with_file_name(format!("{stem}{suffix}"))
}

fn emit(value: &Value, output: Option<&Path>) -> Result<(), CliError> {
    match output {
        Some(path) => Ok(write_value(value, path)?),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(to_canonical_string(value).as_bytes())
                .map_err(|source| DataError::Io { path: "<stdout>".into(), source })?;
            Ok(())
        }
    }
}

pub fn cmd_generate(args: &GenerateArgs) -> Result<(), CliError> {
    let spec = run_spec(&args.run, &args.model, RunSpec::default())?;
    let seed = spec.require_seed()?;
    let (n, d) = (spec.voters()?, spec.candidates()?);
    let model = spec.model.to_generator(d)?;
    model.validate(n, d).map_err(|e| CliError::usage(e.to_string()))?;
    let mut rng = SeededRandomSource::new(seed, 0);
    let generated = model.generate(n, d, &mut rng)?;
    write_profile_csv(&generated.profile, &args.output)?;
    if let Some(scene) = &generated.scene {
        let path = args.scene.clone().unwrap_or_else(|| sibling(&args.output, ".scene.csv"));
        write_scene_csv(scene, &path)?;
    }
    let sidecar = args.sidecar.clone().unwrap_or_else(|| sibling(&args.output, ".config.json"));
    write_value(&spec.sidecar(generated.resolved.to_json()), &sidecar)?;
    Ok(())
}

pub fn cmd_experiment(args: &ExperimentArgs) -> Result<(), CliError> {
    let extra =
        RunSpec { replicates: args.replicates, rules: args.rules.clone(), workers: args.workers, ..RunSpec::default() };
    let spec = run_spec(&args.run, &args.model, extra)?;
    spec.require_seed()?;
    let config = spec.experiment()?;
    let workers = spec.workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    if workers == 0 {
        return Err(CliError::usage("--workers must be at least 1"));
    }
    let report = run_experiment_parallel(&config, workers)?;
    emit(&report.to_json(), args.output.as_deref())
}

/// A profile read from disk, restricted to the selected columns.
struct Loaded {
    profile: EvaluationProfile,
    names: Vec<String>,
    /// 1-based column number in the file for each kept candidate.
    columns: Vec<usize>,
    /// Every candidate name in the file.
    file_names: Vec<String>,
    dropped_voters: usize,
}

fn load(input: &InputArgs) -> Result<Loaded, CliError> {
    let (profile, names, dropped_voters) = match input.scale_max {
        Some(scale_max) => {
            if scale_max == 0 {
                return Err(CliError::usage("--scale-max must be at least 1"));
            }
            let read = read_ballots_csv(&BallotFileSpec {
                path: input.input.clone(),
                scale_max,
                missing_policy: if input.drop_missing { MissingPolicy::DropVoter } else { MissingPolicy::RejectFile },
            })?;
            if read.dropped_voters > 0 {
                eprintln!("warning: dropped {} ballot(s) with missing evaluations", read.dropped_voters);
            }
            (read.profile, read.candidate_names, read.dropped_voters)
        }
        None => {
            let (profile, names) = read_profile_csv(&input.input)?;
            (profile, names, 0)
        }
    };
    let all: Vec<usize> = (1..=names.len()).collect();
    let columns = match &input.columns {
        None => all,
        Some(tokens) => tokens.iter().map(|t| resolve_column(t, &names)).collect::<Result<Vec<_>, _>>()?,
    };
    let zero_based: Vec<usize> = columns.iter().map(|c| c - 1).collect();
    let profile = profile.select_candidates(&zero_based)?;
    let kept = zero_based.iter().map(|&c| names[c].clone()).collect();
    Ok(Loaded { profile, names: kept, columns, file_names: names, dropped_voters })
}

fn resolve_column(token: &str, names: &[String]) -> Result<usize, CliError> {
    let token = token.trim();
    if let Ok(k) = token.parse::<usize>() {
        if (1..=names.len()).contains(&k) {
            return Ok(k);
        }
        return Err(CliError::usage(format!("column {k} is out of range 1..={}", names.len())));
    }
    names
        .iter()
        .position(|n| n == token)
        .map(|k| k + 1)
        .ok_or_else(|| CliError::usage(format!("no candidate column named `{token}`")))
}

fn parse_rule(args: &ElectArgs) -> Result<Rule, CliError> {
    let name = args.rule.trim();
    let has_arg = name.contains(':');
    let rule = match name.split(':').next().unwrap_or_default() {
        "approval" => {
            if args.p.is_some() {
                return Err(CliError::usage("--p applies to the deepest rule only"));
            }
            match (args.threshold, has_arg) {
                (Some(_), true) => return Err(CliError::usage("threshold given twice")),
                (Some(t), false) => Rule::Approval { threshold: t },
                (None, false) => Rule::Approval { threshold: DEFAULT_APPROVAL_THRESHOLD },
                (None, true) => name.parse().map_err(|e: evalvote_core::Error| CliError::usage(e.to_string()))?,
            }
        }
        "deepest" => {
            if args.threshold.is_some() {
                return Err(CliError::usage("--threshold applies to the approval rule only"));
            }
            match (args.p, has_arg) {
                (Some(_), true) => return Err(CliError::usage("exponent given twice")),
                (Some(p), false) => Rule::Deepest(DepthSpec::new(p).map_err(|e| CliError::usage(e.to_string()))?),
                _ => name.parse().map_err(|e: evalvote_core::Error| CliError::usage(e.to_string()))?,
            }
        }
        _ => {
            if args.threshold.is_some() || args.p.is_some() {
                return Err(CliError::usage(format!("--threshold/--p do not apply to rule `{name}`")));
            }
            name.parse().map_err(|e: evalvote_core::Error| CliError::usage(e.to_string()))?
        }
    };
    rule.validate().map_err(|e| CliError::usage(e.to_string()))?;
    Ok(rule)
}

pub fn cmd_elect(args: &ElectArgs) -> Result<(), CliError> {
    let rule = parse_rule(args)?;
    let loaded = load(&args.input)?;
    let result = rule.elect(&loaded.profile)?;
    let mut value = result.to_json();
    value["candidates"] = json!(loaded.names);
    value["winner_name"] = json!(loaded.names[result.winner]);
    value["voters"] = json!(loaded.profile.voters());
    value["dropped_voters"] = json!(loaded.dropped_voters);
    emit(&value, args.output.as_deref())
}

fn parse_pair(token: &str, loaded: &Loaded) -> Result<(usize, usize), CliError> {
    let (a, b) =
        token.split_once(',').ok_or_else(|| CliError::usage(format!("--pair expects `i,j`, got `{token}`")))?;
    let position = |t: &str| -> Result<usize, CliError> {
        let col = resolve_column(t, &loaded.file_names)?;
        loaded
            .columns
            .iter()
            .position(|&c| c == col)
            .ok_or_else(|| CliError::usage(format!("column {col} is not among the selected columns")))
    };
    let (i, j) = (position(a)?, position(b)?);
    if i == j {
        return Err(CliError::usage(format!("--pair {token} names the same candidate twice")));
    }
    Ok((i, j))
}

pub fn cmd_analyze(args: &AnalyzeArgs) -> Result<(), CliError> {
    if args.bins == 0 {
        return Err(CliError::usage("--bins must be at least 1"));
    }
    let loaded = load(&args.input)?;
    let mut pairs = Vec::new();
    for token in &args.pair {
        pairs.push(parse_pair(token, &loaded)?);
    }
    if args.all_pairs {
        let d = loaded.profile.candidates();
        pairs.extend((0..d).flat_map(|i| (i + 1..d).map(move |j| (i, j))));
    }
    std::fs::create_dir_all(&args.out_dir).map_err(|source| DataError::Io { path: args.out_dir.clone(), source })?;
    let out = |name: String| args.out_dir.join(name);
    let mut summary = Vec::new();
    for (k, &col) in loaded.columns.iter().enumerate() {
        let h = histogram(&loaded.profile, k, args.bins)?;
        write_histogram_csv(&h, &out(format!("hist_c{col}.csv")))?;
        if args.svg {
            let svg = histogram_svg(&h, &loaded.names[k]);
            write_text(&out(format!("hist_c{col}.svg")), &svg)?;
        }
        let mut entry = h.to_json();
        entry["candidate"] = json!(col);
        entry["name"] = json!(loaded.names[k]);
        summary.push(entry);
    }
    for &(i, j) in &pairs {
        let (ci, cj) = (loaded.columns[i], loaded.columns[j]);
        let points = pairwise_scatter(&loaded.profile, i, j)?;
        write_scatter_csv(&points, &out(format!("scatter_c{ci}_c{cj}.csv")))?;
        if args.svg {
            write_text(
                &out(format!("scatter_c{ci}_c{cj}.svg")),
                &scatter_svg(&points, &loaded.names[i], &loaded.names[j]),
            )?;
        }
    }
    let mut correlation = empirical_correlation(&loaded.profile)?.to_json();
    correlation["candidates"] = json!(loaded.names);
    correlation["columns"] = json!(loaded.columns);
    correlation["undefined"] = json!(correlation["undefined"].as_array().map(|u| u
        .iter()
        .filter_map(|v| v.as_u64())
        .map(|k| loaded.columns[k as usize - 1])
        .collect::<Vec<_>>()));
    correlation["voters"] = json!(loaded.profile.voters());
    correlation["dropped_voters"] = json!(loaded.dropped_voters);
    write_value(&correlation, &out("correlation.json".into()))?;
    write_value(&json!({ "histograms": summary }), &out("histograms.json".into()))?;
    Ok(())
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| DataError::Io { path: path.to_owned(), source })?;
    Ok(())
}

pub fn cmd_fit(args: &FitArgs) -> Result<(), CliError> {
    let loaded = load(&args.input)?;
    let (copula, beta) = if args.copula || args.beta { (args.copula, args.beta) } else { (true, true) };
    let mut value = json!({
        "candidates": loaded.names,
        "columns": loaded.columns,
        "voters": loaded.profile.voters(),
        "dropped_voters": loaded.dropped_voters,
    });
    // each fitted section is a valid `[model]` config section
    if copula {
        let matrix = fit_gaussian_copula(&loaded.profile)?;
        value["copula"] = json!({ "name": "copula", "corr": matrix.to_json() });
    }
    if beta {
        let mut alphas = Vec::new();
        let mut betas = Vec::new();
        for k in 0..loaded.profile.candidates() {
            let (a, b) = fit_beta_moments(&loaded.profile.column(k))
                .map_err(|e| evalvote_core::Error::Fit(format!("{}: {e}", loaded.names[k])))?;
            alphas.push(float(a));
            betas.push(float(b));
        }
        value["beta"] = json!({ "name": "beta", "alpha": alphas, "beta": betas });
    }
    emit(&value, args.output.as_deref())
}

pub fn cmd_quantize(args: &QuantizeArgs) -> Result<(), CliError> {
    let (profile, _) = read_profile_csv(&args.input)?;
    let snapped = quantize(&profile, args.k).map_err(|e| CliError::usage(e.to_string()))?;
    write_profile_csv(&snapped, &args.output)?;
    Ok(())
}
