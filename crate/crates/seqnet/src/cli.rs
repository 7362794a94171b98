//! Command-line interface. Every subcommand reads files named by flags,
//! writes only to `--out` paths and the standard streams, and draws all
//! randomness from `--seed` (default 42, never the clock), so identical
//! invocations produce identical bytes.

use std::collections::BTreeSet;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use seqnet_core::assoc::{
    gene_association_network, relevance_network, shrinkage_partial_correlations,
};
use seqnet_core::ci::{run_test, TestKind};
use seqnet_core::data::{
    rank_coded, recode_snps, Column, Dataset, GenotypeTable, Kind, Recoding,
    VariableMeta,
};
use seqnet_core::genomics::{
    design_from_dataset, fit_additive, fit_additive_cv, gwas_feature_select,
    predict_additive,
};
use seqnet_core::learn::{
    learn_markov_blanket, pc_learn, symmetric_mb_correction, LearnConfig, SymmetryRule,
};
use seqnet_core::linalg::Matrix;
use seqnet_core::sim::{
    simulate_dag, simulate_discrete, simulate_gaussian, simulate_snp_trait,
    RecoveryConfig,
};

use crate::formats::{
    parse_dot, parse_scenarios, power_rows, recovery_rows, rows_to_csv, to_dot,
    to_graphml, to_json, BlanketDto, FitDto, GraphDto, ShrunkNetworkDto, TestResultDto,
};
use crate::io::{
    load_dataset, load_genotypes, load_genotypes_with_trait, load_kinship,
    write_dataset, write_genotypes_with_trait, write_schema, AlleleLabelling,
    GenotypeFormat, MissingPolicy,
};
use crate::{parallel, CliError, Result};

/// Seed used when none is given; fixed so runs are reproducible by default.
pub const DEFAULT_SEED: u64 = 42;

#[derive(Parser, Debug)]
#[command(
    name = "seqnet",
    version,
    about = "Graphical-model learning for genomic data: conditional-independence \
             tests, structure learning, Markov-blanket selection, association \
             networks, additive trait models, and simulation benchmarks"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one conditional-independence test and print the result as JSON
    Test(TestArgs),
    /// Learn a graph skeleton and orientations with the stable PC search
    Learn(LearnArgs),
    /// Learn the Markov blanket of one variable
    Mb(MbArgs),
    /// Correlation relevance network from marginal correlations
    Relnet(RelnetArgs),
    /// Shrinkage partial-correlation network with significance testing
    Ggm(GgmArgs),
    /// Fit the additive trait model, optionally with a kinship matrix
    Fit(FitArgs),
    /// Predict traits from a saved fit
    Predict(PredictArgs),
    /// Recode a genotype file to a numeric dataset
    Recode(RecodeArgs),
    /// Generate synthetic graphs and data with known ground truth
    Simulate(SimulateArgs),
    /// Estimate test power over simulated scenario replicates
    Power(PowerArgs),
    /// Score structure recovery on simulated graphs
    Recover(RecoverArgs),
    /// Convert a saved graph between JSON, DOT, and GraphML
    Export(ExportArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum TestArg {
    Jt,
    G2,
    #[value(name = "fisher_z")]
    FisherZ,
}

impl TestArg {
    fn kind(self) -> TestKind {
        match self {
            TestArg::Jt => TestKind::Jt,
            TestArg::G2 => TestKind::G2,
            TestArg::FisherZ => TestKind::FisherZ,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum MissingArg {
    Reject,
    DropRow,
}

impl MissingArg {
    fn policy(self) -> MissingPolicy {
        match self {
            MissingArg::Reject => MissingPolicy::Reject,
            MissingArg::DropRow => MissingPolicy::DropRow,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum FormatArg {
    Json,
    Dot,
    Graphml,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum TableFormatArg {
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum SchemeArg {
    Centered,
    #[value(name = "allele_count")]
    AlleleCount,
}

impl SchemeArg {
    fn recoding(self) -> Recoding {
        match self {
            SchemeArg::Centered => Recoding::Centered,
            SchemeArg::AlleleCount => Recoding::AlleleCount,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum LabelsArg {
    Alphabetical,
    Major,
}

impl LabelsArg {
    fn labelling(self) -> AlleleLabelling {
        match self {
            LabelsArg::Alphabetical => AlleleLabelling::Alphabetical,
            LabelsArg::Major => AlleleLabelling::SampleMajor,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum SymmetryArg {
    And,
    Or,
}

#[derive(Args, Debug)]
struct DataOpts {
    /// Dataset CSV; the first row names the columns
    #[arg(long)]
    data: PathBuf,
    /// Schema sidecar, one `name,kind,level1<level2<...` line per column;
    /// kinds are inferred when absent (numeric columns continuous, others
    /// discrete)
    #[arg(long)]
    schema: Option<PathBuf>,
    /// What to do with missing cells (empty or NA)
    #[arg(long, value_enum, default_value = "reject")]
    missing: MissingArg,
}

impl DataOpts {
    fn load(&self) -> Result<Dataset> {
        load_dataset(&self.data, self.schema.as_deref(), self.missing.policy())
    }
}

#[derive(Args, Debug)]
struct TestArgs {
    #[command(flatten)]
    data: DataOpts,
    /// Which conditional-independence test to run
    #[arg(long, value_enum)]
    test: TestArg,
    /// First variable
    #[arg(long)]
    x: String,
    /// Second variable
    #[arg(long)]
    y: String,
    /// Conditioning variables, comma separated
    #[arg(long, value_delimiter = ',')]
    cond: Vec<String>,
    /// Write here instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct LearnArgs {
    #[command(flatten)]
    data: DataOpts,
    #[arg(long, value_enum)]
    test: TestArg,
    /// Per-test significance level
    #[arg(long)]
    alpha: f64,
    /// Cap on conditioning-set size
    #[arg(long)]
    max_cond: Option<usize>,
    /// Graph output path; format follows the extension unless --format is given
    #[arg(long)]
    out: Option<PathBuf>,
    /// Graph output format
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Write the JSON-lines test log here; with --out the log goes to
    /// standard output when this is absent
    #[arg(long)]
    log: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct MbArgs {
    /// Dataset CSV; the first row names the columns
    #[arg(long, conflicts_with = "genotypes")]
    data: Option<PathBuf>,
    #[arg(long)]
    schema: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "reject")]
    missing: MissingArg,
    /// Genotype-token CSV holding the target as a numeric column; columns
    /// are recoded before learning
    #[arg(long, required_unless_present = "data")]
    genotypes: Option<PathBuf>,
    /// Recoding scheme for --genotypes
    #[arg(long, value_enum, default_value = "allele_count")]
    scheme: SchemeArg,
    /// Allele labelling for --genotypes
    #[arg(long, value_enum, default_value = "alphabetical")]
    labels: LabelsArg,
    /// Variable whose blanket is learned
    #[arg(long)]
    target: String,
    #[arg(long, value_enum)]
    test: TestArg,
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    max_cond: Option<usize>,
    /// Cross-check the blankets of all variables and resolve asymmetries
    #[arg(long, value_enum)]
    symmetry: Option<SymmetryArg>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RelnetArgs {
    #[command(flatten)]
    data: DataOpts,
    /// Keep pairs with absolute correlation at or above this
    #[arg(long)]
    threshold: f64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
}

#[derive(Args, Debug)]
struct GgmArgs {
    #[command(flatten)]
    data: DataOpts,
    /// Significance level for the partial-correlation tests
    #[arg(long)]
    alpha: f64,
    /// Divide alpha by the number of tested pairs
    #[arg(long)]
    bonferroni: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
}

#[derive(Args, Debug)]
struct FitArgs {
    /// Numeric dataset CSV (continuous or recoded ordinal columns)
    #[arg(long, conflicts_with = "genotypes")]
    data: Option<PathBuf>,
    #[arg(long)]
    schema: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "reject")]
    missing: MissingArg,
    /// Genotype-token CSV holding the trait as a numeric column
    #[arg(long, required_unless_present = "data")]
    genotypes: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "centered")]
    scheme: SchemeArg,
    #[arg(long, value_enum, default_value = "alphabetical")]
    labels: LabelsArg,
    /// Trait column name
    #[arg(long = "trait")]
    trait_name: String,
    /// Kinship matrix CSV (square, optional labels)
    #[arg(long)]
    kinship: Option<PathBuf>,
    /// Ridge penalty; ignored when --cv is given
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    /// Candidate penalties for seeded cross-validation, comma separated
    #[arg(long, value_delimiter = ',')]
    cv: Vec<f64>,
    /// Cross-validation fold count
    #[arg(long, default_value_t = 5)]
    folds: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PredictArgs {
    /// Saved fit JSON
    #[arg(long)]
    fit: PathBuf,
    #[command(flatten)]
    data: DataOpts,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RecodeArgs {
    /// Genotype file
    #[arg(long)]
    genotypes: PathBuf,
    /// On-disk genotype representation: AA/Aa/aa token CSV or a
    /// whitespace-separated 0/1/2 count matrix
    #[arg(long = "genotype-format", value_enum, default_value = "tokens")]
    genotype_format: GenotypeFormatArg,
    #[arg(long, value_enum, default_value = "alphabetical")]
    labels: LabelsArg,
    #[arg(long, value_enum)]
    scheme: SchemeArg,
    /// Recoded dataset CSV
    #[arg(long)]
    out: PathBuf,
    /// Schema sidecar for the recoded dataset
    #[arg(long)]
    schema_out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum GenotypeFormatArg {
    Tokens,
    Counts,
}

impl GenotypeFormatArg {
    fn format(self) -> GenotypeFormat {
        match self {
            GenotypeFormatArg::Tokens => GenotypeFormat::Tokens,
            GenotypeFormatArg::Counts => GenotypeFormat::Counts,
        }
    }
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[command(subcommand)]
    what: SimulateCommand,
}

#[derive(Subcommand, Debug)]
enum SimulateCommand {
    /// Random DAG with a target expected degree
    Dag {
        /// Node count
        #[arg(long)]
        p: usize,
        /// Expected adjacent-node count per node
        #[arg(long)]
        degree: f64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
    },
    /// Linear Gaussian data from a DAG file
    Gaussian {
        /// DAG as canonical JSON or DOT
        #[arg(long)]
        dag: PathBuf,
        #[arg(long, default_value_t = 0.5)]
        coef_lo: f64,
        #[arg(long, default_value_t = 1.5)]
        coef_hi: f64,
        #[arg(long, default_value_t = 1.0)]
        noise: f64,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Dataset CSV output
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        schema_out: Option<PathBuf>,
    },
    /// Categorical data from a DAG file with Dirichlet-drawn tables
    Discrete {
        #[arg(long)]
        dag: PathBuf,
        /// States per variable
        #[arg(long, default_value_t = 3)]
        levels: usize,
        /// Dirichlet concentration for the probability tables
        #[arg(long, default_value_t = 1.0)]
        dirichlet: f64,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        schema_out: Option<PathBuf>,
    },
    /// Genotypes and a trait from a scenario file
    Snp {
        /// Scenario JSON (a single object; the scenario carries its seed)
        #[arg(long)]
        scenario: PathBuf,
        /// CSV of genotype tokens plus a final trait column
        #[arg(long)]
        out: PathBuf,
        /// Ground truth JSON (effect size and noiseless component)
        #[arg(long)]
        truth_out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct PowerArgs {
    /// Scenario JSON file: one object or an array
    #[arg(long)]
    scenarios: PathBuf,
    /// Tests to compare, comma separated
    #[arg(long, value_enum, value_delimiter = ',')]
    tests: Vec<TestArg>,
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    replicates: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Worker cap; SEQNET_THREADS is the fallback, 0 leaves the default
    #[arg(long)]
    threads: Option<usize>,
    /// Table format
    #[arg(long, value_enum, default_value = "csv")]
    format: TableFormatArg,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Human-readable progress on the error stream
    #[arg(long)]
    progress: bool,
}

#[derive(Args, Debug)]
struct RecoverArgs {
    /// Node count of the generating DAGs
    #[arg(long)]
    p: usize,
    #[arg(long)]
    degree: f64,
    #[arg(long, default_value_t = 0.5)]
    coef_lo: f64,
    #[arg(long, default_value_t = 1.5)]
    coef_hi: f64,
    #[arg(long, default_value_t = 1.0)]
    noise: f64,
    /// Samples per replicate
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value = "fisher_z")]
    test: TestArg,
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    max_cond: Option<usize>,
    #[arg(long)]
    replicates: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, value_enum, default_value = "csv")]
    format: TableFormatArg,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    progress: bool,
}

#[derive(Args, Debug)]
struct ExportArgs {
    /// Graph file, canonical JSON or the emitted DOT subset
    #[arg(long)]
    input: PathBuf,
    /// Target format
    #[arg(long, value_enum)]
    format: FormatArg,
    /// Render every edge undirected (presentation only)
    #[arg(long)]
    undirected: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Parse and run, mapping every outcome to the documented exit codes:
/// 0 success, 1 usage error, 2 data/model error.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            // help goes to standard output, usage errors to the error stream
            if code == 0 {
                print!("{e}");
            } else {
                eprint!("{e}");
            }
            return code;
        }
    };
    match run(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn emit(out: Option<&Path>, content: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, content).map_err(|e| CliError::file(path, e)),
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(content.as_bytes())
                .and_then(|()| lock.flush())
                .map_err(|e| CliError::Format(format!("standard output: {e}")))
        }
    }
}

/// Print each distinct warning once, in first appearance order.
fn emit_warnings(warnings: &[String]) {
    let mut seen = BTreeSet::new();
    for w in warnings {
        if seen.insert(w.clone()) {
            eprintln!("warning: {w}");
        }
    }
}

fn json_line<T: Serialize>(value: &T) -> Result<String> {
    Ok(format!("{}\n", to_json(value)?))
}

fn resolve_format(format: Option<FormatArg>, out: Option<&Path>) -> FormatArg {
    if let Some(f) = format {
        return f;
    }
    match out.and_then(|p| p.extension()).and_then(|e| e.to_str()) {
        Some("dot") => FormatArg::Dot,
        Some("graphml") => FormatArg::Graphml,
        _ => FormatArg::Json,
    }
}

fn render_graph(dto: &GraphDto, format: FormatArg) -> Result<String> {
    Ok(match format {
        FormatArg::Json => json_line(dto)?,
        FormatArg::Dot => to_dot(dto),
        FormatArg::Graphml => to_graphml(dto),
    })
}

fn resolve_threads(flag: Option<usize>) -> usize {
    flag.or_else(|| {
        std::env::var("SEQNET_THREADS").ok().and_then(|v| v.parse().ok())
    })
    .unwrap_or(0)
}

fn learn_config(test: TestArg, alpha: f64, max_cond: Option<usize>) -> Result<LearnConfig> {
    let mut cfg = LearnConfig::new(test.kind(), alpha)?;
    if let Some(m) = max_cond {
        cfg = cfg.with_max_cond_size(m);
    }
    Ok(cfg)
}

/// Build a learning dataset straight from genotypes plus a numeric trait,
/// coded to fit the chosen test's regime: continuous effect codes for the
/// correlation test, ordinal groups with a rank-coded trait for the trend
/// test, the same levels unordered for the contingency test. Marked
/// genotype-coded so the relatedness caveat fires.
fn genotype_learning_dataset(
    genotypes: &GenotypeTable,
    trait_name: &str,
    trait_values: Vec<f64>,
    test: TestKind,
    scheme: Recoding,
) -> Result<Dataset> {
    let coded = recode_snps(genotypes, scheme);
    let mut d = match test {
        TestKind::FisherZ => {
            let mut vars = Vec::with_capacity(coded.p() + 1);
            let mut cols = Vec::with_capacity(coded.p() + 1);
            for j in 0..coded.p() {
                vars.push(VariableMeta::continuous(&coded.var(j).name));
                cols.push(Column::Continuous(coded.numeric_column(j)?));
            }
            vars.push(VariableMeta::continuous(trait_name));
            cols.push(Column::Continuous(trait_values));
            Dataset::new(vars, cols)?
        }
        TestKind::Jt | TestKind::G2 => {
            let (mut trait_meta, trait_col) = rank_coded(trait_name, &trait_values);
            let mut vars: Vec<VariableMeta> = coded.variables().to_vec();
            let mut cols: Vec<Column> =
                (0..coded.p()).map(|j| coded.column(j).clone()).collect();
            if test == TestKind::G2 {
                for v in &mut vars {
                    v.kind = Kind::Discrete;
                }
                trait_meta.kind = Kind::Discrete;
            }
            vars.push(trait_meta);
            cols.push(trait_col);
            Dataset::new(vars, cols)?
        }
    };
    d.mark_genotype_coded();
    Ok(d)
}

fn load_graph_file(path: &Path) -> Result<GraphDto> {
    let text = fs::read_to_string(path).map_err(|e| CliError::file(path, e))?;
    match path.extension().and_then(|e| e.to_str()) {
        Some("dot") => parse_dot(&text),
        _ => serde_json::from_str(&text)
            .map_err(|e| CliError::Format(format!("{}: {e}", path.display()))),
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Test(args) => {
            let d = args.data.load()?;
            let cond: Vec<&str> = args.cond.iter().map(String::as_str).collect();
            let result = run_test(args.test.kind(), &d, &args.x, &args.y, &cond)?;
            emit(args.out.as_deref(), &json_line(&TestResultDto::from(&result))?)
        }
        Command::Learn(args) => {
            let d = args.data.load()?;
            let cfg = learn_config(args.test, args.alpha, args.max_cond)?;
            let result = pc_learn(&d, &cfg)?;
            emit_warnings(&result.warnings);

            let dto = GraphDto::from_graph(result.pdag.as_graph());
            let format = resolve_format(args.format, args.out.as_deref());
            emit(args.out.as_deref(), &render_graph(&dto, format)?)?;

            let mut log_text = String::new();
            for entry in &result.log {
                log_text.push_str(&json_line(&TestResultDto::from(entry))?);
            }
            match (&args.log, &args.out) {
                (Some(path), _) => emit(Some(path), &log_text)?,
                (None, Some(_)) => emit(None, &log_text)?,
                (None, None) => {}
            }
            Ok(())
        }
        Command::Mb(args) => {
            let d = match (&args.data, &args.genotypes) {
                (Some(data), None) => {
                    load_dataset(data, args.schema.as_deref(), args.missing.policy())?
                }
                (None, Some(path)) => {
                    let (genotypes, trait_values) = load_genotypes_with_trait(
                        path,
                        &args.target,
                        args.labels.labelling(),
                    )?;
                    genotype_learning_dataset(
                        &genotypes,
                        &args.target,
                        trait_values,
                        args.test.kind(),
                        args.scheme.recoding(),
                    )?
                }
                _ => {
                    return Err(CliError::Usage(
                        "pass exactly one of --data or --genotypes".into(),
                    ))
                }
            };
            let cfg = learn_config(args.test, args.alpha, args.max_cond)?;

            let members = match args.symmetry {
                None => {
                    let result = gwas_feature_select(&d, &args.target, &cfg)?;
                    emit_warnings(&result.warnings);
                    result.members
                }
                Some(rule) => {
                    let rule = match rule {
                        SymmetryArg::And => SymmetryRule::And,
                        SymmetryArg::Or => SymmetryRule::Or,
                    };
                    let mut blankets = std::collections::BTreeMap::new();
                    let mut warnings = Vec::new();
                    for meta in d.variables() {
                        let result = if meta.name == args.target {
                            gwas_feature_select(&d, &meta.name, &cfg)?
                        } else {
                            learn_markov_blanket(&d, &meta.name, &cfg)?
                        };
                        warnings.extend(result.warnings);
                        blankets.insert(
                            meta.name.clone(),
                            result.members.into_iter().collect::<BTreeSet<_>>(),
                        );
                    }
                    emit_warnings(&warnings);
                    let corrected = symmetric_mb_correction(&blankets, rule);
                    corrected[&args.target].iter().cloned().collect()
                }
            };
            let dto = BlanketDto { target: args.target.clone(), members };
            emit(args.out.as_deref(), &json_line(&dto)?)
        }
        Command::Relnet(args) => {
            let d = args.data.load()?;
            let net = relevance_network(&d, args.threshold)?;
            let dto = GraphDto::from_weighted(&net);
            let format = resolve_format(args.format, args.out.as_deref());
            emit(args.out.as_deref(), &render_graph(&dto, format)?)
        }
        Command::Ggm(args) => {
            let d = args.data.load()?;
            let net = gene_association_network(&d, args.alpha, args.bonferroni)?;
            let estimate = shrinkage_partial_correlations(&d)?;
            let dto = GraphDto::from_weighted(&net);
            let format = resolve_format(args.format, args.out.as_deref());
            let text = match format {
                FormatArg::Json => json_line(&ShrunkNetworkDto {
                    lambda: estimate.lambda(),
                    graph: dto,
                })?,
                other => render_graph(&dto, other)?,
            };
            emit(args.out.as_deref(), &text)
        }
        Command::Fit(args) => {
            let d = match (&args.data, &args.genotypes) {
                (Some(data), None) => {
                    load_dataset(data, args.schema.as_deref(), args.missing.policy())?
                }
                (None, Some(path)) => {
                    let (genotypes, trait_values) = load_genotypes_with_trait(
                        path,
                        &args.trait_name,
                        args.labels.labelling(),
                    )?;
                    let mut d = recode_snps(&genotypes, args.scheme.recoding());
                    d.push_column(
                        VariableMeta::continuous(&args.trait_name),
                        Column::Continuous(trait_values),
                    )?;
                    d
                }
                _ => {
                    return Err(CliError::Usage(
                        "pass exactly one of --data or --genotypes".into(),
                    ))
                }
            };
            let (x, names, y) = design_from_dataset(&d, &args.trait_name)?;
            let kinship = match &args.kinship {
                Some(path) => Some(load_kinship(path)?),
                None => None,
            };

            let text = if args.cv.is_empty() {
                let fit =
                    fit_additive(&x, &names, &y, kinship.as_ref(), args.lambda)?;
                json_line(&FitDto::from_fit(&fit))?
            } else {
                let cv = fit_additive_cv(
                    &x,
                    &names,
                    &y,
                    kinship.as_ref(),
                    &args.cv,
                    args.folds,
                    args.seed,
                )?;
                #[derive(Serialize)]
                struct CvDto {
                    chosen_lambda: f64,
                    mse: Vec<MseDto>,
                    fit: FitDto,
                }
                #[derive(Serialize)]
                struct MseDto {
                    lambda: f64,
                    mse: f64,
                }
                json_line(&CvDto {
                    chosen_lambda: cv.chosen_lambda,
                    mse: cv
                        .mse
                        .iter()
                        .map(|&(lambda, mse)| MseDto { lambda, mse })
                        .collect(),
                    fit: FitDto::from_fit(&cv.fit),
                })?
            };
            emit(args.out.as_deref(), &text)
        }
        Command::Predict(args) => {
            let text =
                fs::read_to_string(&args.fit).map_err(|e| CliError::file(&args.fit, e))?;
            // accept a plain fit or a cross-validation report wrapping one
            #[derive(Deserialize)]
            struct CvWrapper {
                fit: FitDto,
            }
            let dto: FitDto = serde_json::from_str(&text)
                .or_else(|e| {
                    serde_json::from_str::<CvWrapper>(&text).map(|w| w.fit).map_err(|_| e)
                })
                .map_err(|e| CliError::Format(format!("{}: {e}", args.fit.display())))?;
            let fit = dto.to_fit();
            let d = args.data.load()?;
            let cols: Vec<Vec<f64>> = fit
                .snp_names
                .iter()
                .map(|name| d.numeric_column(d.index_of(name)?))
                .collect::<seqnet_core::Result<_>>()?;
            let x = Matrix::from_columns(&cols)?;
            let preds = predict_additive(&fit, &x)?;
            let mut out = String::from("prediction\n");
            for v in preds {
                out.push_str(&format!("{v}\n"));
            }
            emit(args.out.as_deref(), &out)
        }
        Command::Recode(args) => {
            let genotypes = load_genotypes(
                &args.genotypes,
                args.genotype_format.format(),
                args.labels.labelling(),
            )?;
            let d = recode_snps(&genotypes, args.scheme.recoding());
            write_dataset(&d, &args.out)?;
            if let Some(schema_path) = &args.schema_out {
                write_schema(&d, schema_path)?;
            }
            Ok(())
        }
        Command::Simulate(args) => run_simulate(args.what),
        Command::Power(args) => {
            let text = fs::read_to_string(&args.scenarios)
                .map_err(|e| CliError::file(&args.scenarios, e))?;
            let scenarios = parse_scenarios(&text)?;
            let tests: Vec<TestKind> = args.tests.iter().map(|t| t.kind()).collect();
            if tests.is_empty() {
                return Err(CliError::Usage("pass at least one --tests entry".into()));
            }
            let progress_on = args.progress;
            let table = parallel::power_benchmark(
                &scenarios,
                &tests,
                args.alpha,
                args.replicates,
                args.seed,
                resolve_threads(args.threads),
                |msg| {
                    if progress_on {
                        eprintln!("{msg}");
                    }
                },
            )?;
            emit_warnings(&table.warnings);
            let rows = power_rows(&table);
            let text = match args.format {
                TableFormatArg::Csv => rows_to_csv(&rows)?,
                TableFormatArg::Json => json_line(&rows)?,
            };
            emit(args.out.as_deref(), &text)
        }
        Command::Recover(args) => {
            let config = RecoveryConfig {
                p: args.p,
                expected_degree: args.degree,
                coef_range: (args.coef_lo, args.coef_hi),
                noise_sd: args.noise,
                n: args.n,
            };
            let cfg = learn_config(args.test, args.alpha, args.max_cond)?;
            if args.progress {
                eprintln!(
                    "recovering {} replicates of {}-node structures",
                    args.replicates, args.p
                );
            }
            let table = parallel::recovery(
                &config,
                &cfg,
                args.replicates,
                args.seed,
                resolve_threads(args.threads),
            )?;
            emit_warnings(&table.warnings);
            let rows = recovery_rows(&table);
            let text = match args.format {
                TableFormatArg::Csv => rows_to_csv(&rows)?,
                TableFormatArg::Json => json_line(&rows)?,
            };
            emit(args.out.as_deref(), &text)
        }
        Command::Export(args) => {
            let mut dto = load_graph_file(&args.input)?;
            // validate node/edge consistency by materializing the graph
            dto.to_graph()?;
            if args.undirected {
                dto = dto.undirected_view();
            }
            emit(args.out.as_deref(), &render_graph(&dto, args.format)?)
        }
    }
}

fn run_simulate(command: SimulateCommand) -> Result<()> {
    match command {
        SimulateCommand::Dag { p, degree, seed, out, format } => {
            let dag = simulate_dag(p, degree, seed)?;
            let dto = GraphDto::from_graph(dag.as_graph());
            let format = resolve_format(format, out.as_deref());
            emit(out.as_deref(), &render_graph(&dto, format)?)
        }
        SimulateCommand::Gaussian {
            dag,
            coef_lo,
            coef_hi,
            noise,
            n,
            seed,
            out,
            schema_out,
        } => {
            let dag = load_graph_file(&dag)?.to_dag()?;
            let d = simulate_gaussian(&dag, (coef_lo, coef_hi), noise, n, seed)?;
            write_dataset(&d, &out)?;
            if let Some(path) = schema_out {
                write_schema(&d, &path)?;
            }
            Ok(())
        }
        SimulateCommand::Discrete {
            dag,
            levels,
            dirichlet,
            n,
            seed,
            out,
            schema_out,
        } => {
            let dag = load_graph_file(&dag)?.to_dag()?;
            let d = simulate_discrete(&dag, levels, dirichlet, n, seed)?;
            write_dataset(&d, &out)?;
            if let Some(path) = schema_out {
                write_schema(&d, &path)?;
            }
            Ok(())
        }
        SimulateCommand::Snp { scenario, out, truth_out } => {
            let text =
                fs::read_to_string(&scenario).map_err(|e| CliError::file(&scenario, e))?;
            let scenarios = parse_scenarios(&text)?;
            if scenarios.len() != 1 {
                return Err(CliError::Usage(format!(
                    "simulate snp needs exactly one scenario, the file holds {}",
                    scenarios.len()
                )));
            }
            let (genotypes, trait_values, truth) = simulate_snp_trait(&scenarios[0])?;
            write_genotypes_with_trait(&genotypes, "trait", &trait_values, &out)?;
            if let Some(path) = truth_out {
                #[derive(Serialize)]
                struct TruthDto {
                    beta: f64,
                    genetic: Vec<f64>,
                }
                emit(
                    Some(&path),
                    &json_line(&TruthDto {
                        beta: truth.beta,
                        genetic: truth.genetic,
                    })?,
                )?;
            }
            Ok(())
        }
    }
}
