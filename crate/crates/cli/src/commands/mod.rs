//! Subcommand implementations.

mod align;
mod ingest;
mod retrieve;
mod score;
mod train;

use std::path::{Path, PathBuf};

use xling_core::corpus::{load_aligned_corpus, AlignedCorpus, CorpusFormat};
use xling_core::lsi::{load_model, LsiModel};
use xling_core::textprep::TextPipeline;
use xling_core::{Error, Result};

use crate::args::{Command, PipelineArgs};
use crate::config::{data_path, ConfigFile};
use crate::manifest::{manifest_path, Manifest};
use crate::pipeline::PipelineSpec;

pub fn run(command: &Command, config: &ConfigFile) -> Result<()> {
    match command {
        Command::Ingest(a) => ingest::run(a, config),
        Command::Train(a) => train::run(a, config),
        Command::Retrieve(a) => retrieve::run_retrieve(a, config),
        Command::Eval(a) => retrieve::run_eval(a, config),
        Command::Align(a) => align::run(a, config),
        Command::Score(a) => score::run(a, config),
    }
}

pub(crate) fn load_corpus(path: &Path) -> Result<AlignedCorpus> {
    load_aligned_corpus(&data_path(path), &CorpusFormat::Jsonl)
}

/// A trained model with the manifest written next to it, if any.
pub(crate) struct LoadedModel {
    pub model: LsiModel,
    pub manifest: Option<Manifest>,
}

impl LoadedModel {
    pub fn load(path: &Path) -> Result<Self> {
        let path = data_path(path);
        let model = load_model(&path)?;
        let mpath = manifest_path(&path);
        let manifest = if mpath.is_file() {
            Some(Manifest::read(&mpath)?)
        } else {
            log::warn!("{} not found; pipeline taken from flags and config", mpath.display());
            None
        };
        Ok(Self { model, manifest })
    }

    pub fn pipeline_spec(&self) -> Result<Option<PipelineSpec>> {
        let Some(m) = &self.manifest else {
            return Ok(None);
        };
        match m.config.get("pipeline") {
            Some(v) => serde_json::from_value(v.clone())
                .map(Some)
                .map_err(|e| Error::CorruptModel(format!("manifest pipeline: {e}"))),
            None => Ok(None),
        }
    }

    pub fn target_language(&self) -> Option<String> {
        let m = self.manifest.as_ref()?;
        m.config.get("target_lang")?.as_str().map(str::to_string)
    }
}

/// Flags win; otherwise the pipeline the model was trained with; otherwise
/// config file and defaults.
pub(crate) fn resolve_pipeline(
    args: &PipelineArgs,
    config: &ConfigFile,
    dictionary: Option<PathBuf>,
    model: Option<&LoadedModel>,
) -> Result<(PipelineSpec, TextPipeline)> {
    let stored = match model {
        Some(m) if !args.any_given() => m.pipeline_spec()?,
        _ => None,
    };
    let spec = match stored {
        Some(s) => s,
        None => PipelineSpec::resolve(args, config, dictionary)?,
    };
    let pipeline = spec.build()?;
    Ok((spec, pipeline))
}

pub(crate) fn dictionary_path(flag: Option<&Path>, config: &ConfigFile) -> Result<Option<PathBuf>> {
    config.pick_path(flag, "dictionary")
}
