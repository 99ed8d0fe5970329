//! Command-line front end.
//!
//! Exit codes: 0 success, 1 runtime failure (for example a singular
//! regression), 2 bad input (unreadable or malformed files, bad arguments),
//! 3 estimand not identified or not supported by the estimator, 4 unknown
//! estimator or refuter name.
//!
//! Flags override values from the optional `--config` JSON file. Relative
//! paths inside a config file are resolved against the file's directory.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::data::{DataError, Dataset, RandomSeed};
use crate::estimate::{estimator_by_name, EffectEstimate, EstimateError, ESTIMATOR_NAMES};
use crate::graph::{parse_graph, CausalGraph, GraphError};
use crate::identify::{
    classify_all, identify_effect, Estimand, EstimandKind, IdentifyError, VariableRole,
};
use crate::pipeline::{EstimandChoice, Pipeline, PipelineError};
use crate::refute::{RefuteError, RefuteSettings, RefuterOutcome, RefuterSpec, REFUTER_NAMES};
use crate::simulate::{
    dgp_example1, dgp_example2, generate_linear_dgp, replicate_figure1, summarize_figure,
    write_figure_csv, FigureSummary, LinearDgpConfig, SimulateError,
};

pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_UNSUPPORTED: i32 = 3;
pub const EXIT_UNKNOWN_METHOD: i32 = 4;

#[derive(Debug, Error)]
#[error("{message}")]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn new(code: i32, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
        }
    }

    fn input(message: impl Into<String>) -> Self {
        CliError::new(EXIT_INPUT, message)
    }
}

impl From<DataError> for CliError {
    fn from(e: DataError) -> Self {
        CliError::input(e.to_string())
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        CliError::input(format!("graph: {e}"))
    }
}

impl From<IdentifyError> for CliError {
    fn from(e: IdentifyError) -> Self {
        CliError::input(e.to_string())
    }
}

fn estimate_code(e: &EstimateError) -> i32 {
    match e {
        EstimateError::Data(_) => EXIT_INPUT,
        EstimateError::Incompatible { .. } | EstimateError::UnsupportedSetSize { .. } => {
            EXIT_UNSUPPORTED
        }
        _ => EXIT_RUNTIME,
    }
}

fn pipeline_code(e: &PipelineError) -> i32 {
    match e {
        PipelineError::Identify(_) => EXIT_INPUT,
        PipelineError::NotIdentified { .. } | PipelineError::Incompatible { .. } => {
            EXIT_UNSUPPORTED
        }
        PipelineError::Estimate(e) => estimate_code(e),
    }
}

impl From<PipelineError> for CliError {
    fn from(e: PipelineError) -> Self {
        CliError::new(pipeline_code(&e), e.to_string())
    }
}

impl From<RefuteError> for CliError {
    fn from(e: RefuteError) -> Self {
        let code = match &e {
            RefuteError::InvalidArgument(_) | RefuteError::Data { .. } => EXIT_INPUT,
            RefuteError::Pipeline { source, .. } => pipeline_code(source),
            RefuteError::Unsupported { .. } => EXIT_UNSUPPORTED,
            RefuteError::Fit { .. } => EXIT_RUNTIME,
        };
        CliError::new(code, e.to_string())
    }
}

impl From<SimulateError> for CliError {
    fn from(e: SimulateError) -> Self {
        let code = match &e {
            SimulateError::Estimate(e) => estimate_code(e),
            _ => EXIT_INPUT,
        };
        CliError::new(code, e.to_string())
    }
}

/// Analysis settings, from a JSON file and/or flags.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisConfig {
    pub data_path: Option<PathBuf>,
    pub graph_path: Option<PathBuf>,
    pub treatment: Option<String>,
    pub outcome: Option<String>,
    pub estimand: Option<EstimandChoice>,
    pub estimator: Option<String>,
    /// Refuter names or objects such as `{"name": "data_subset_refuter", "fraction": 0.5}`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub refuters: Vec<Value>,
    pub replications: Option<usize>,
    pub significance_level: Option<f64>,
    pub seed: Option<u64>,
    pub output_path: Option<PathBuf>,
}

impl AnalysisConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        let mut cfg: AnalysisConfig = serde_json::from_str(&text)
            .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new(""));
        for p in [
            &mut cfg.data_path,
            &mut cfg.graph_path,
            &mut cfg.output_path,
        ]
        .into_iter()
        .flatten()
        {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(cfg)
    }

    /// Values set in `flags` win.
    pub fn overlay(self, flags: AnalysisConfig) -> AnalysisConfig {
        AnalysisConfig {
            data_path: flags.data_path.or(self.data_path),
            graph_path: flags.graph_path.or(self.graph_path),
            treatment: flags.treatment.or(self.treatment),
            outcome: flags.outcome.or(self.outcome),
            estimand: flags.estimand.or(self.estimand),
            estimator: flags.estimator.or(self.estimator),
            refuters: if flags.refuters.is_empty() {
                self.refuters
            } else {
                flags.refuters
            },
            replications: flags.replications.or(self.replications),
            significance_level: flags.significance_level.or(self.significance_level),
            seed: flags.seed.or(self.seed),
            output_path: flags.output_path.or(self.output_path),
        }
    }

    fn require<'a, T>(field: &'a Option<T>, name: &str) -> Result<&'a T, CliError> {
        field
            .as_ref()
            .ok_or_else(|| CliError::input(format!("missing required setting `{name}`")))
    }

    pub fn seed(&self) -> RandomSeed {
        RandomSeed(self.seed.unwrap_or(0))
    }

    pub fn refute_settings(&self) -> RefuteSettings {
        let d = RefuteSettings::default();
        RefuteSettings {
            replications: self.replications.unwrap_or(d.replications),
            significance_level: self.significance_level.unwrap_or(d.significance_level),
        }
    }

    /// Parses the refuter list; unknown names fail with exit code 4.
    pub fn refuter_specs(&self) -> Result<Vec<RefuterSpec>, CliError> {
        self.refuters.iter().map(parse_refuter).collect()
    }
}

fn unknown_refuter(name: &str) -> CliError {
    CliError::new(
        EXIT_UNKNOWN_METHOD,
        format!(
            "unknown refuter `{name}`; valid refuters: {}",
            REFUTER_NAMES.join(", ")
        ),
    )
}

fn parse_refuter(v: &Value) -> Result<RefuterSpec, CliError> {
    let name = match v {
        Value::String(s) => s.as_str(),
        Value::Object(o) => o
            .get("name")
            .and_then(Value::as_str)
            .ok_or_else(|| CliError::input("refuter object needs a string `name`"))?,
        _ => return Err(CliError::input(format!("bad refuter entry {v}"))),
    };
    if !REFUTER_NAMES.contains(&name) {
        return Err(unknown_refuter(name));
    }
    match v {
        Value::String(_) => Ok(RefuterSpec::from_name(name).expect("known name")),
        _ => serde_json::from_value(v.clone())
            .map_err(|e| CliError::input(format!("refuter `{name}`: {e}"))),
    }
}

fn load_graph(path: &Path) -> Result<CausalGraph, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    parse_graph(&text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

/// Loaded inputs for estimate and refute.
struct Analysis {
    pipeline: Pipeline,
    data: Dataset,
}

fn default_estimator(kind: EstimandKind) -> &'static str {
    match kind {
        EstimandKind::Backdoor => "linear_regression",
        EstimandKind::Frontdoor => "frontdoor_two_stage",
        EstimandKind::Iv => "iv_wald",
    }
}

fn prepare(cfg: &AnalysisConfig) -> Result<Analysis, CliError> {
    let graph = load_graph(AnalysisConfig::require(&cfg.graph_path, "graph_path")?)?;
    let t = AnalysisConfig::require(&cfg.treatment, "treatment")?;
    let y = AnalysisConfig::require(&cfg.outcome, "outcome")?;
    let choice = cfg.estimand;
    let name = match (cfg.estimator.as_deref(), choice) {
        (Some(n), _) => n,
        (None, Some(c)) => default_estimator(c.kind),
        (None, None) => "linear_regression",
    };
    let estimator = estimator_by_name(name).ok_or_else(|| {
        CliError::new(
            EXIT_UNKNOWN_METHOD,
            format!(
                "unknown estimator `{name}`; valid estimators: {}",
                ESTIMATOR_NAMES.join(", ")
            ),
        )
    })?;
    let choice = choice.ok_or_else(|| {
        CliError::input(
            "no estimand chosen; pass --estimand-kind (backdoor, frontdoor or iv) \
             or set `estimand` in the config file; `identify` lists the options",
        )
    })?;
    for v in [t, y] {
        if !graph.contains(v) {
            return Err(CliError::input(format!("`{v}` is not a node of the graph")));
        }
    }
    let required = graph.observed_nodes();
    let data = Dataset::load_csv(
        AnalysisConfig::require(&cfg.data_path, "data_path")?,
        &required,
    )?;
    let pipeline = Pipeline::new(graph, t, y, choice, estimator)?;
    Ok(Analysis { pipeline, data })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentifyOutput {
    pub treatment: String,
    pub outcome: String,
    pub estimands: Vec<Estimand>,
    pub roles: BTreeMap<String, VariableRole>,
}

pub fn cmd_identify(
    graph_path: &Path,
    treatment: &str,
    outcome: &str,
) -> Result<IdentifyOutput, CliError> {
    let g = load_graph(graph_path)?;
    let estimands = identify_effect(&g, treatment, outcome)?;
    let roles = classify_all(&g, treatment, outcome)?;
    Ok(IdentifyOutput {
        treatment: treatment.to_string(),
        outcome: outcome.to_string(),
        estimands,
        roles,
    })
}

pub fn cmd_estimate(cfg: &AnalysisConfig) -> Result<EffectEstimate, CliError> {
    let a = prepare(cfg)?;
    Ok(a.pipeline.run(&a.data, cfg.seed())?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefuteOutput {
    pub estimate: EffectEstimate,
    pub refutations: Vec<RefuterOutcome>,
}

/// Estimates once, then runs every configured refuter. Refuter `i` uses
/// `seed.derive(i)`.
pub fn cmd_refute(cfg: &AnalysisConfig) -> Result<RefuteOutput, CliError> {
    let specs = cfg.refuter_specs()?;
    if specs.is_empty() {
        return Err(CliError::input("select at least one refuter"));
    }
    let a = prepare(cfg)?;
    let seed = cfg.seed();
    let settings = cfg.refute_settings();
    let estimate = a.pipeline.run(&a.data, seed)?;
    let refutations = specs
        .iter()
        .enumerate()
        .map(|(i, spec)| spec.run(&a.pipeline, &a.data, &settings, seed.derive(i as u64)))
        .collect::<Result<_, _>>()?;
    Ok(RefuteOutput {
        estimate,
        refutations,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum DgpName {
    Example1,
    Example2,
    Linear,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulateOutput {
    pub dgp: DgpName,
    pub rows: usize,
    pub columns: Vec<String>,
    pub true_ate: f64,
    pub data_path: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph_path: Option<PathBuf>,
}

/// Writes a simulated dataset as CSV and optionally its graph as DOT.
/// `linear` supplies the size and seed for every DGP.
pub fn cmd_simulate(
    dgp: DgpName,
    linear: &LinearDgpConfig,
    data_path: &Path,
    graph_path: Option<&Path>,
) -> Result<SimulateOutput, CliError> {
    let sim = match dgp {
        DgpName::Example1 => dgp_example1(linear.n, linear.seed)?,
        DgpName::Example2 => dgp_example2(linear.n, linear.seed)?,
        DgpName::Linear => generate_linear_dgp(linear)?,
    };
    sim.data.save_csv(data_path)?;
    if let Some(p) = graph_path {
        write_file(p, sim.graph.to_dot().as_bytes())?;
    }
    Ok(SimulateOutput {
        dgp,
        rows: sim.data.row_count(),
        columns: sim.data.column_names().to_vec(),
        true_ate: sim.true_ate,
        data_path: data_path.to_path_buf(),
        graph_path: graph_path.map(Path::to_path_buf),
    })
}

/// Writes `figure{variant}_estimates.csv` and `figure{variant}_summary.json`
/// into `out_dir`.
pub fn cmd_reproduce_figure(
    variant: u8,
    out_dir: &Path,
    n_datasets: usize,
    n: usize,
    seed: RandomSeed,
) -> Result<FigureSummary, CliError> {
    let rows = replicate_figure1(variant, n_datasets, n, seed)?;
    let summary = summarize_figure(variant, &rows)?;
    fs::create_dir_all(out_dir)
        .map_err(|e| CliError::input(format!("{}: {e}", out_dir.display())))?;
    let mut csv_buf = Vec::new();
    write_figure_csv(&rows, &mut csv_buf)?;
    write_file(
        &out_dir.join(format!("figure{variant}_estimates.csv")),
        &csv_buf,
    )?;
    write_file(
        &out_dir.join(format!("figure{variant}_summary.json")),
        to_json(&summary).as_bytes(),
    )?;
    Ok(summary)
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

/// JSON to `output` when given (human summary on stdout), else JSON to stdout.
fn emit<T: Serialize>(value: &T, output: Option<&Path>, summary: &str) -> Result<(), CliError> {
    let json = to_json(value);
    let mut out = std::io::stdout().lock();
    match output {
        Some(p) => {
            write_file(p, json.as_bytes())?;
            let _ = out.write_all(summary.as_bytes());
        }
        None => {
            let _ = out.write_all(json.as_bytes());
        }
    }
    Ok(())
}

fn histogram_path(output: &Path, refuter: &str) -> PathBuf {
    let stem = output
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "refute".into());
    output.with_file_name(format!("{stem}.{refuter}.csv"))
}

fn write_histograms(output: &Path, res: &RefuteOutput) -> Result<(), CliError> {
    for r in &res.refutations {
        let mut text = String::new();
        match r {
            RefuterOutcome::Report(rep) => {
                text.push_str("replication,ate\n");
                for (i, a) in rep.refuted_ates.iter().enumerate() {
                    text.push_str(&format!("{i},{a}\n"));
                }
            }
            RefuterOutcome::Sensitivity(s) => {
                text.push_str("kappa_t,kappa_y,adjusted_ate,std_error\n");
                for c in &s.grid {
                    text.push_str(&format!(
                        "{},{},{},{}\n",
                        c.kappa_t, c.kappa_y, c.adjusted_ate, c.std_error
                    ));
                }
            }
        }
        write_file(&histogram_path(output, r.refuter()), text.as_bytes())?;
    }
    Ok(())
}

fn refute_summary(res: &RefuteOutput) -> String {
    let mut s = format!("{}\n", res.estimate);
    for r in &res.refutations {
        match r {
            RefuterOutcome::Report(rep) => s.push_str(&format!(
                "{}: {} (p = {:.4}, mean {:.4} vs target {:.4}, {} replications)\n",
                rep.refuter,
                if rep.passed { "PASS" } else { "FAIL" },
                rep.p_value,
                rep.refuted_mean,
                rep.target,
                rep.replications
            )),
            RefuterOutcome::Sensitivity(sv) => {
                s.push_str(&format!("{}: surface, no verdict\n", sv.refuter));
                for c in &sv.grid {
                    s.push_str(&format!(
                        "  kappa_t {:>5} kappa_y {:>5}: {:.4} (se {:.4})\n",
                        c.kappa_t, c.kappa_y, c.adjusted_ate, c.std_error
                    ));
                }
            }
        }
    }
    s
}

#[derive(Debug, Parser)]
#[command(
    name = "causal",
    version,
    about = "Graph-based causal effect estimation and refutation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List identified estimands and variable roles.
    Identify {
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long)]
        treatment: Option<String>,
        #[arg(long)]
        outcome: Option<String>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Identify, select an estimand and estimate the ATE.
    Estimate(AnalysisArgs),
    /// Estimate, then run refuters.
    Refute {
        #[command(flatten)]
        analysis: AnalysisArgs,
        /// Refuter name; repeat for several.
        #[arg(long = "refuter")]
        refuters: Vec<String>,
        #[arg(long)]
        replications: Option<usize>,
        #[arg(long)]
        significance_level: Option<f64>,
    },
    /// Write a simulated dataset.
    Simulate {
        #[arg(long, value_enum)]
        dgp: DgpName,
        #[arg(long, default_value_t = 10_000)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: PathBuf,
        #[arg(long)]
        graph_output: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        confounders: usize,
        #[arg(long, default_value_t = 1)]
        instruments: usize,
        #[arg(long)]
        mediator: bool,
        #[arg(long, default_value_t = 10.0)]
        effect: f64,
        #[arg(long, default_value_t = 1.0)]
        noise_variance: f64,
    },
    /// Compare correct and faulty adjustment over many simulated datasets.
    ReproduceFigure {
        #[arg(long)]
        variant: u8,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, default_value_t = 100)]
        datasets: usize,
        #[arg(long, default_value_t = 10_000)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Args)]
pub struct AnalysisArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    data: Option<PathBuf>,
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long)]
    treatment: Option<String>,
    #[arg(long)]
    outcome: Option<String>,
    /// backdoor, frontdoor or iv.
    #[arg(long)]
    estimand_kind: Option<String>,
    #[arg(long)]
    estimand_index: Option<usize>,
    #[arg(long)]
    estimator: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    output: Option<PathBuf>,
}

impl AnalysisArgs {
    fn resolve(self, extra: AnalysisConfig) -> Result<AnalysisConfig, CliError> {
        let base = match &self.config {
            Some(p) => AnalysisConfig::load(p)?,
            None => AnalysisConfig::default(),
        };
        let kind = self
            .estimand_kind
            .as_deref()
            .map(|k| {
                k.parse::<EstimandKind>()
                    .map_err(|_| CliError::input(format!("unknown estimand kind `{k}`")))
            })
            .transpose()?;
        let estimand = match (kind, self.estimand_index) {
            (None, None) => None,
            (k, i) => {
                let from_file = base.estimand;
                Some(EstimandChoice::new(
                    k.or(from_file.map(|c| c.kind))
                        .unwrap_or(EstimandKind::Backdoor),
                    i.unwrap_or(0),
                ))
            }
        };
        let flags = AnalysisConfig {
            data_path: self.data,
            graph_path: self.graph,
            treatment: self.treatment,
            outcome: self.outcome,
            estimand,
            estimator: self.estimator,
            seed: self.seed,
            output_path: self.output,
            ..extra
        };
        Ok(base.overlay(flags))
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Identify {
            graph,
            treatment,
            outcome,
            config,
            output,
        } => {
            let base = match &config {
                Some(p) => AnalysisConfig::load(p)?,
                None => AnalysisConfig::default(),
            };
            let cfg = base.overlay(AnalysisConfig {
                graph_path: graph,
                treatment,
                outcome,
                output_path: output,
                ..Default::default()
            });
            let res = cmd_identify(
                AnalysisConfig::require(&cfg.graph_path, "graph_path")?,
                AnalysisConfig::require(&cfg.treatment, "treatment")?,
                AnalysisConfig::require(&cfg.outcome, "outcome")?,
            )?;
            let mut summary = String::new();
            for e in &res.estimands {
                summary.push_str(&format!("{e}\n"));
            }
            if res.estimands.is_empty() {
                summary.push_str("no estimand identified\n");
            }
            for (v, r) in &res.roles {
                summary.push_str(&format!("  {v}: {r}\n"));
            }
            emit(&res, cfg.output_path.as_deref(), &summary)
        }
        Command::Estimate(args) => {
            let cfg = args.resolve(AnalysisConfig::default())?;
            let est = cmd_estimate(&cfg)?;
            emit(&est, cfg.output_path.as_deref(), &format!("{est}\n"))
        }
        Command::Refute {
            analysis,
            refuters,
            replications,
            significance_level,
        } => {
            let cfg = analysis.resolve(AnalysisConfig {
                refuters: refuters.into_iter().map(Value::String).collect(),
                replications,
                significance_level,
                ..Default::default()
            })?;
            let res = cmd_refute(&cfg)?;
            if let Some(p) = &cfg.output_path {
                write_histograms(p, &res)?;
            }
            emit(&res, cfg.output_path.as_deref(), &refute_summary(&res))
        }
        Command::Simulate {
            dgp,
            n,
            seed,
            output,
            graph_output,
            confounders,
            instruments,
            mediator,
            effect,
            noise_variance,
        } => {
            let linear = LinearDgpConfig {
                n,
                num_confounders: confounders,
                num_instruments: instruments,
                include_mediator: mediator,
                effect,
                noise_variance,
                seed: RandomSeed(seed),
            };
            let res = cmd_simulate(dgp, &linear, &output, graph_output.as_deref())?;
            println!("{}", to_json(&res).trim_end());
            Ok(())
        }
        Command::ReproduceFigure {
            variant,
            out_dir,
            datasets,
            n,
            seed,
        } => {
            let s = cmd_reproduce_figure(variant, &out_dir, datasets, n, RandomSeed(seed))?;
            println!(
                "correct {:?}: mean {:.4} std {:.4}\nfaulty  {:?}: mean {:.4} std {:.4}\nstd ratio {:.3}",
                s.correct_adjustment,
                s.correct_mean,
                s.correct_std,
                s.faulty_adjustment,
                s.faulty_mean,
                s.faulty_std,
                s.std_ratio
            );
            Ok(())
        }
    }
}

/// Parses `args` and runs; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}
