use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use xling_core::retrieval::GroupBy;
use xling_core::textprep::ReducerKind;

use crate::config::KList;

#[derive(Debug, Parser)]
#[command(name = "xling", version, about = "Cross-lingual document similarity, retrieval and alignment")]
pub struct Cli {
    /// `key = value` file supplying defaults; flags take precedence
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Convert a raw corpus into aligned jsonl plus statistics
    Ingest(IngestArgs),
    /// Split a corpus and train an LSI model
    Train(TrainArgs),
    /// Rank candidate documents for every query document
    Retrieve(RetrieveArgs),
    /// Align two document collections, optionally per group
    Align(AlignArgs),
    /// Recall at k, or the self-retrieval check with --oracle
    Eval(EvalArgs),
    /// Dictionary measures over the couples of a corpus
    Score(ScoreArgs),
}

macro_rules! value_enum_from_str {
    ($($t:ty),*) => {$(
        impl FromStr for $t {
            type Err = String;
            fn from_str(s: &str) -> Result<Self, Self::Err> {
                <$t as ValueEnum>::from_str(s, false)
            }
        }
    )*};
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InputFormat {
    Pairdirs,
    Jsonl,
    Wikidump,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KindArg {
    Cross,
    Mono,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SideArg {
    Source,
    Target,
}

impl From<SideArg> for xling_core::bidict::Side {
    fn from(s: SideArg) -> Self {
        match s {
            SideArg::Source => Self::Source,
            SideArg::Target => Self::Target,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Cross-lingual LSI
    ClLsi,
    /// Translate queries, then monolingual target-language LSI
    ArLsi,
    /// Symmetrized binary dictionary measure
    Bin,
    /// Translated tokens of both documents over their summed length
    BinPooled,
    /// Cosine over translation-pair attributes
    Cosine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Measure {
    Bin,
    BinPooled,
    #[value(alias = "cosine")]
    Bincos,
    Oov,
    Match,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProviderArg {
    Dictionary,
    Cache,
    Identity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroupArg {
    #[value(alias = "group", alias = "group-key")]
    Month,
    Category,
}

impl From<GroupArg> for GroupBy {
    fn from(g: GroupArg) -> Self {
        match g {
            GroupArg::Month => GroupBy::GroupKey,
            GroupArg::Category => GroupBy::Category,
        }
    }
}

value_enum_from_str!(InputFormat, KindArg, SideArg, Method, Measure, ProviderArg, GroupArg);

/// Text processing settings.
#[derive(Debug, Clone, Default, Args)]
pub struct PipelineArgs {
    /// Keep letter case
    #[arg(long)]
    pub keep_case: bool,
    /// Drop terms occurring fewer times in the corpus [default: 3]
    #[arg(long, value_name = "N")]
    pub min_frequency: Option<usize>,
    /// identity, suffix-stemmer, lemma-table, light-stemmer, rooter or morphar
    #[arg(long, value_name = "KIND")]
    pub reducer_source: Option<ReducerKind>,
    #[arg(long, value_name = "KIND")]
    pub reducer_target: Option<ReducerKind>,
    /// Stopword list, one word per line
    #[arg(long, value_name = "FILE")]
    pub stopwords: Option<PathBuf>,
    /// Light-stemmer prefixes, one per line, in priority order
    #[arg(long, value_name = "FILE")]
    pub prefixes: Option<PathBuf>,
    /// Light-stemmer suffixes, one per line, in priority order
    #[arg(long, value_name = "FILE")]
    pub suffixes: Option<PathBuf>,
    /// Extra lemma table, `word<TAB>lemma` per line
    #[arg(long, value_name = "FILE")]
    pub lemmas: Option<PathBuf>,
}

impl PipelineArgs {
    pub fn any_given(&self) -> bool {
        self.keep_case
            || self.min_frequency.is_some()
            || self.reducer_source.is_some()
            || self.reducer_target.is_some()
            || self.stopwords.is_some()
            || self.prefixes.is_some()
            || self.suffixes.is_some()
            || self.lemmas.is_some()
    }
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    #[arg(long)]
    pub format: InputFormat,
    /// Corpus root, jsonl file or XML dump
    #[arg(long, value_name = "PATH")]
    pub input: PathBuf,
    /// Aligned jsonl corpus to write
    #[arg(long, value_name = "FILE")]
    pub output: PathBuf,
    /// Statistics file [default: <output>.stats.json]
    #[arg(long, value_name = "FILE")]
    pub stats: Option<PathBuf>,
    /// Source language; the pivot language of a dump [default: en]
    #[arg(long)]
    pub source_lang: Option<String>,
    /// Target language [default: ar]
    #[arg(long)]
    pub target_lang: Option<String>,
    /// Further languages a pivot article must link to (dumps only)
    #[arg(long = "require", value_name = "LANG")]
    pub require: Vec<String>,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// Aligned jsonl corpus
    #[arg(long, value_name = "FILE")]
    pub corpus: PathBuf,
    /// Model file to write; the manifest goes to <model>.manifest.json
    #[arg(long, value_name = "FILE")]
    pub model: PathBuf,
    /// [default: cross]
    #[arg(long)]
    pub kind: Option<KindArg>,
    /// Side a monolingual model is trained on [default: target]
    #[arg(long)]
    pub side: Option<SideArg>,
    /// Number of latent dimensions [default: 300]
    #[arg(long)]
    pub k: Option<usize>,
    /// Fraction of couples used for training [default: 0.9]
    #[arg(long, value_name = "F")]
    pub train_fraction: Option<f64>,
    /// Seed for the split and the SVD [default: 42]
    #[arg(long)]
    pub seed: Option<u64>,
    /// Train on every couple
    #[arg(long)]
    pub no_split: bool,
    /// Held-out couples [default: <model>.test.jsonl]
    #[arg(long, value_name = "FILE")]
    pub test_output: Option<PathBuf>,
    /// Randomized SVD oversampling [default: 10]
    #[arg(long)]
    pub oversampling: Option<usize>,
    /// Randomized SVD power iterations [default: 2]
    #[arg(long)]
    pub power_iterations: Option<usize>,
    /// Dictionary consulted by the morphar reducer
    #[arg(long, value_name = "FILE")]
    pub dictionary: Option<PathBuf>,
    #[command(flatten)]
    pub pipeline: PipelineArgs,
}

/// Query and candidate documents.
#[derive(Debug, Clone, Default, Args)]
pub struct InputArgs {
    /// Aligned jsonl corpus: sources are queries, targets are candidates and
    /// each couple is a gold pair
    #[arg(long, value_name = "FILE")]
    pub corpus: Option<PathBuf>,
    /// Query documents, one JSON document per line
    #[arg(long, value_name = "FILE", conflicts_with = "corpus")]
    pub queries: Option<PathBuf>,
    /// Candidate documents, one JSON document per line
    #[arg(long, value_name = "FILE", conflicts_with = "corpus")]
    pub candidates: Option<PathBuf>,
    /// Gold pairs `query_id<TAB>target_id`
    #[arg(long, value_name = "FILE")]
    pub gold: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct MethodArgs {
    /// LSI model (not needed for dictionary methods)
    #[arg(long, value_name = "FILE")]
    pub model: Option<PathBuf>,
    /// [default: cl-lsi for cross models, ar-lsi for mono models]
    #[arg(long)]
    pub method: Option<Method>,
    /// Bilingual dictionary, `src1|src2<TAB>tgt1|tgt2` per line
    #[arg(long, value_name = "FILE")]
    pub dictionary: Option<PathBuf>,
    /// Query translation for ar-lsi [default: dictionary]
    #[arg(long)]
    pub provider: Option<ProviderArg>,
    /// Cached translations `id<TAB>text` for --provider cache
    #[arg(long, value_name = "FILE")]
    pub translations: Option<PathBuf>,
    /// Candidate vectors written by an earlier --save-store
    #[arg(long, value_name = "FILE")]
    pub store: Option<PathBuf>,
    /// Write the candidate vectors for reuse
    #[arg(long, value_name = "FILE", conflicts_with = "store")]
    pub save_store: Option<PathBuf>,
    #[command(flatten)]
    pub pipeline: PipelineArgs,
}

#[derive(Debug, Args)]
pub struct RetrieveArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub method: MethodArgs,
    /// Ranked list length [default: 10]
    #[arg(long)]
    pub n: Option<usize>,
    /// `query<TAB>rank<TAB>candidate<TAB>similarity` lines
    #[arg(long, value_name = "FILE")]
    pub output: PathBuf,
    /// Ranked lists as JSON [default: <output>.json]
    #[arg(long, value_name = "FILE")]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AlignArgs {
    /// Cross-lingual model
    #[arg(long, value_name = "FILE")]
    pub model: PathBuf,
    /// Aligned jsonl corpus whose couples are the gold pairs
    #[arg(long, value_name = "FILE")]
    pub corpus: Option<PathBuf>,
    /// Source documents, one JSON document per line
    #[arg(long, value_name = "FILE", conflicts_with = "corpus")]
    pub source: Option<PathBuf>,
    /// Target documents, one JSON document per line
    #[arg(long, value_name = "FILE", conflicts_with = "corpus")]
    pub target: Option<PathBuf>,
    /// Gold pairs `source_id<TAB>target_id` for accuracy
    #[arg(long, value_name = "FILE")]
    pub gold: Option<PathBuf>,
    /// Pairs kept per group [default: 15]
    #[arg(long)]
    pub top_n: Option<usize>,
    /// Align within groups: month (group key) or category
    #[arg(long)]
    pub group_by: Option<GroupArg>,
    /// Keep only pairs that are each other's best match
    #[arg(long)]
    pub mutual_best: bool,
    /// `src_id<TAB>tgt_id<TAB>sim<TAB>group` lines
    #[arg(long, value_name = "FILE")]
    pub output: PathBuf,
    /// JSON report [default: <output>.report.json]
    #[arg(long, value_name = "FILE")]
    pub report: Option<PathBuf>,
    /// Histogram CSV [default: <output>.histogram.csv]
    #[arg(long, value_name = "FILE")]
    pub histogram: Option<PathBuf>,
    /// Per-group similarity ranges CSV [default: <output>.ranges.csv]
    #[arg(long, value_name = "FILE")]
    pub ranges: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub method: MethodArgs,
    /// Retrieve every document with itself as the query
    #[arg(long)]
    pub oracle: bool,
    /// Side used by --oracle [default: source]
    #[arg(long)]
    pub side: Option<SideArg>,
    /// Cutoffs for recall [default: 1,5]
    #[arg(long, value_name = "LIST")]
    pub k_values: Option<KList>,
    /// Ranked list length used for recall [default: largest k]
    #[arg(long)]
    pub n: Option<usize>,
    /// JSON report
    #[arg(long, value_name = "FILE")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    #[arg(long)]
    pub measure: Option<Measure>,
    /// Aligned jsonl corpus
    #[arg(long, value_name = "FILE")]
    pub corpus: PathBuf,
    #[arg(long, value_name = "FILE")]
    pub dictionary: Option<PathBuf>,
    /// `src_id<TAB>tgt_id<TAB>score` lines [default: standard output]
    #[arg(long, value_name = "FILE")]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub pipeline: PipelineArgs,
}
