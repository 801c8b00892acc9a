//! Text pipeline settings as resolved from flags and config, and as stored in
//! model manifests.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use xling_core::bidict::BilingualDictionary;
use xling_core::textprep::{load_word_list, AffixRules, PipelineConfig, ReducerKind, Reducers, TextPipeline};
use xling_core::{Error, Result};

use crate::args::PipelineArgs;
use crate::config::ConfigFile;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineSpec {
    pub config: PipelineConfig,
    pub prefixes: Option<Vec<String>>,
    pub suffixes: Option<Vec<String>>,
    pub lemmas: Vec<(String, String)>,
    /// Consulted by the morphar reducer.
    pub dictionary: Option<PathBuf>,
}

impl PipelineSpec {
    pub fn resolve(args: &PipelineArgs, file: &ConfigFile, dictionary: Option<PathBuf>) -> Result<Self> {
        let defaults = PipelineConfig::default();
        let lowercase = if args.keep_case {
            false
        } else {
            file.get::<bool>("lowercase")?.unwrap_or(defaults.lowercase)
        };
        let stopwords = match file.pick_path(args.stopwords.as_deref(), "stopwords")? {
            Some(p) => load_word_list(&p)?.into_iter().collect(),
            None => BTreeSet::new(),
        };
        let config = PipelineConfig {
            lowercase,
            stopwords,
            min_corpus_frequency: file.pick(args.min_frequency, "min_frequency", defaults.min_corpus_frequency)?,
            reducer_source: file.pick(args.reducer_source, "reducer_source", defaults.reducer_source)?,
            reducer_target: file.pick(args.reducer_target, "reducer_target", defaults.reducer_target)?,
        };
        config.validate()?;
        let list = |flag: Option<&Path>, key: &str| -> Result<Option<Vec<String>>> {
            file.pick_path(flag, key)?.map(|p| load_word_list(&p)).transpose()
        };
        let lemmas = match file.pick_path(args.lemmas.as_deref(), "lemmas")? {
            Some(p) => read_lemmas(&p)?,
            None => Vec::new(),
        };
        let uses_morphar = [config.reducer_source, config.reducer_target].contains(&ReducerKind::Morphar);
        Ok(Self {
            prefixes: list(args.prefixes.as_deref(), "prefixes")?,
            suffixes: list(args.suffixes.as_deref(), "suffixes")?,
            lemmas,
            dictionary: if uses_morphar { dictionary } else { None },
            config,
        })
    }

    pub fn build(&self) -> Result<TextPipeline> {
        let defaults = AffixRules::arabic_light();
        let rules = match (&self.prefixes, &self.suffixes) {
            (None, None) => defaults,
            (p, s) => AffixRules::new(
                p.clone().unwrap_or_else(|| defaults.prefixes().to_vec()),
                s.clone().unwrap_or_else(|| defaults.suffixes().to_vec()),
            ),
        };
        let reducers = Reducers::default()
            .with_light_rules(rules)
            .with_lemmas(self.lemmas.iter().cloned());
        let mut pipeline = TextPipeline::new(self.config.clone())?.with_reducers(reducers);
        if let Some(path) = &self.dictionary {
            pipeline = pipeline.with_dictionary(BilingualDictionary::load(path)?);
        } else if [self.config.reducer_source, self.config.reducer_target].contains(&ReducerKind::Morphar) {
            log::warn!("morphar without a dictionary reduces to the light stem");
        }
        Ok(pipeline)
    }
}

fn read_lemmas(path: &Path) -> Result<Vec<(String, String)>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let (word, lemma) = line.split_once('\t').ok_or_else(|| Error::MalformedRecord {
            line: i + 1,
            reason: format!("{}: expected word<TAB>lemma", path.display()),
        })?;
        out.push((word.trim().to_string(), lemma.trim().to_string()));
    }
    Ok(out)
}
