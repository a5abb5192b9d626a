use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "ranksvm",
    version,
    about = "Linear RankSVM training and evaluation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Train a model on an svmlight file.
    Train(TrainArgs),
    /// Write one score per example.
    Predict(PredictArgs),
    /// Report the pairwise ranking error of a model.
    Eval(EvalArgs),
    /// Write a synthetic dataset in svmlight format.
    Generate(GenerateArgs),
    /// Time the loss/subgradient backends across dataset sizes.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Tree,
    Brute,
}

impl From<BackendArg> for ranksvm_core::Backend {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::Tree => ranksvm_core::Backend::Tree,
            BackendArg::Brute => ranksvm_core::Backend::Brute,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BenchBackend {
    Tree,
    Brute,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    DenseRegression,
    SparseSimilarity,
}

impl From<KindArg> for ranksvm_core::data::SyntheticKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::DenseRegression => ranksvm_core::data::SyntheticKind::DenseRegression,
            KindArg::SparseSimilarity => ranksvm_core::data::SyntheticKind::SparseSimilarity,
        }
    }
}

#[derive(Debug, Args)]
pub struct DataArgs {
    /// svmlight input file.
    #[arg(long)]
    pub data: PathBuf,
    /// Feature dimension; defaults to the largest index in the file.
    #[arg(long)]
    pub dims: Option<usize>,
    /// Keep only the column view of the data (less memory, slower).
    #[arg(long)]
    pub column_only: bool,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub input: DataArgs,
    /// Regularization weight λ [default: 0.1].
    #[arg(long, conflicts_with = "c")]
    pub lambda: Option<f64>,
    /// SVM-style C, converted with C = 1/(λN), N the number of preference pairs.
    #[arg(long = "C", id = "c")]
    pub c: Option<f64>,
    /// Stop once the gap J(w_b) − J_t(w_t) drops below this.
    #[arg(long, default_value_t = 1e-3)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 1000)]
    pub max_iters: usize,
    #[arg(long, value_enum, default_value_t = BackendArg::Tree)]
    pub backend: BackendArg,
    #[arg(long)]
    pub model_out: Option<PathBuf>,
    /// Per-iteration CSV trace.
    #[arg(long)]
    pub trace_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[command(flatten)]
    pub input: DataArgs,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[command(flatten)]
    pub input: DataArgs,
    /// Also write the report as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum, default_value_t = KindArg::DenseRegression)]
    pub kind: KindArg,
    /// Number of examples.
    #[arg(long, default_value_t = 1000)]
    pub m: usize,
    /// Number of features.
    #[arg(long, default_value_t = 10)]
    pub n: usize,
    /// Expected fraction of nonzero features [default: 1 for
    /// dense-regression, 0.02 for sparse-similarity].
    #[arg(long)]
    pub sparsity: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Standard deviation of target noise (dense-regression only).
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Comma-separated example counts, e.g. 1024,2048,4096.
    #[arg(long, value_delimiter = ',', required = true)]
    pub sizes: Vec<usize>,
    #[arg(long, value_enum, default_value_t = BenchBackend::Both)]
    pub backend: BenchBackend,
    #[arg(long, default_value_t = 5)]
    pub repeats: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = KindArg::SparseSimilarity)]
    pub kind: KindArg,
    /// Number of features.
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    #[arg(long, default_value_t = 0.02)]
    pub sparsity: f64,
    /// CSV output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
