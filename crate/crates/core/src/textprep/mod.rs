//! Tokenization, stopword and frequency filtering, and word reduction.

mod reducers;

use std::collections::{BTreeSet, HashMap};
use std::io::BufRead;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bidict::{BilingualDictionary, Side};
use crate::error::{Error, Result};

pub use reducers::{morphar_lookup, suffix_stem, AffixRules, ReducerKind, Reducers};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Token {
    pub surface: String,
    pub reduced: String,
}

impl Token {
    pub fn new(surface: impl Into<String>) -> Self {
        let surface = surface.into();
        Self {
            reduced: surface.clone(),
            surface,
        }
    }
}

/// Arabic harakat and tatweel are dropped without splitting the word.
fn is_ignorable(c: char) -> bool {
    matches!(c, '\u{064B}'..='\u{065F}' | '\u{0670}' | '\u{0640}')
}

/// Lowercased alphanumeric runs. Everything else separates tokens.
pub fn tokenize(text: &str) -> Vec<Token> {
    tokenize_with(text, true)
}

pub fn tokenize_with(text: &str, lowercase: bool) -> Vec<Token> {
    let mut out = Vec::new();
    let mut current = String::new();
    for c in text.chars() {
        if is_ignorable(c) {
            continue;
        }
        if c.is_alphanumeric() {
            if lowercase {
                current.extend(c.to_lowercase());
            } else {
                current.push(c);
            }
        } else if !current.is_empty() {
            out.push(Token::new(std::mem::take(&mut current)));
        }
    }
    if !current.is_empty() {
        out.push(Token::new(current));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct PipelineConfig {
    pub lowercase: bool,
    pub stopwords: BTreeSet<String>,
    pub min_corpus_frequency: usize,
    pub reducer_source: ReducerKind,
    pub reducer_target: ReducerKind,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            lowercase: true,
            stopwords: BTreeSet::new(),
            min_corpus_frequency: 3,
            reducer_source: ReducerKind::Identity,
            reducer_target: ReducerKind::Identity,
        }
    }
}

impl PipelineConfig {
    /// No stopwords, no frequency cut, identity reducers.
    pub fn passthrough() -> Self {
        Self {
            min_corpus_frequency: 1,
            ..Self::default()
        }
    }

    pub fn reducer(&self, side: Side) -> ReducerKind {
        match side {
            Side::Source => self.reducer_source,
            Side::Target => self.reducer_target,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.min_corpus_frequency == 0 {
            return Err(Error::Precondition(
                "min_corpus_frequency must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Occurrences of each reduced form across all documents.
pub fn corpus_term_counts(docs: &[Vec<Token>]) -> HashMap<String, usize> {
    let mut counts = HashMap::new();
    for token in docs.iter().flatten() {
        *counts.entry(token.reduced.clone()).or_insert(0) += 1;
    }
    counts
}

/// Drops tokens whose surface or reduced form is a stopword, and tokens whose
/// reduced form occurs fewer than `min_corpus_frequency` times in `counts`.
pub fn apply_filters(
    docs: Vec<Vec<Token>>,
    config: &PipelineConfig,
    counts: &HashMap<String, usize>,
) -> Vec<Vec<Token>> {
    let keep = |t: &Token| {
        !config.stopwords.contains(&t.surface)
            && !config.stopwords.contains(&t.reduced)
            && counts.get(&t.reduced).copied().unwrap_or(0) >= config.min_corpus_frequency
    };
    docs.into_iter()
        .map(|doc| doc.into_iter().filter(|t| keep(t)).collect())
        .collect()
}

/// One word per line; `#` starts a comment line, blank lines are skipped.
pub fn read_word_list<R: BufRead>(reader: R) -> std::io::Result<Vec<String>> {
    let mut out = Vec::new();
    for line in reader.lines() {
        let line = line?;
        let word = line.trim();
        if word.is_empty() || word.starts_with('#') {
            continue;
        }
        out.push(word.to_string());
    }
    Ok(out)
}

pub fn load_word_list(path: &Path) -> Result<Vec<String>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_word_list(std::io::BufReader::new(file)).map_err(|e| Error::io(path, e))
}

/// Tokenize, reduce, count, filter.
#[derive(Debug, Clone, Default)]
pub struct TextPipeline {
    config: PipelineConfig,
    reducers: Reducers,
    dictionary: Option<BilingualDictionary>,
}

impl TextPipeline {
    pub fn new(config: PipelineConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            config,
            reducers: Reducers::default(),
            dictionary: None,
        })
    }

    pub fn with_reducers(mut self, reducers: Reducers) -> Self {
        self.reducers = reducers;
        self
    }

    /// Dictionary consulted by the morphAr reducer.
    pub fn with_dictionary(mut self, dict: BilingualDictionary) -> Self {
        self.dictionary = Some(dict);
        self
    }

    pub fn config(&self) -> &PipelineConfig {
        &self.config
    }

    pub fn reducers(&self) -> &Reducers {
        &self.reducers
    }

    /// Tokens of one document with reduced forms filled in; no filtering.
    pub fn tokens(&self, text: &str, side: Side) -> Vec<Token> {
        let kind = self.config.reducer(side);
        let dict = self.dictionary.as_ref().map(|d| (d, side));
        let mut tokens = tokenize_with(text, self.config.lowercase);
        for t in &mut tokens {
            t.reduced = self.reducers.reduce_with_dict(&t.surface, kind, dict);
        }
        tokens
    }

    /// Reduced terms of a single document, stopwords removed. The frequency
    /// cut needs corpus counts and is not applied here.
    pub fn terms(&self, text: &str, side: Side) -> Vec<String> {
        self.tokens(text, side)
            .into_iter()
            .filter(|t| !self.config.stopwords.contains(&t.surface) && !self.config.stopwords.contains(&t.reduced))
            .map(|t| t.reduced)
            .collect()
    }

    /// Reduced terms of every document with all filters applied.
    pub fn process_corpus<S: AsRef<str>>(&self, texts: &[S], side: Side) -> Vec<Vec<String>> {
        let docs: Vec<Vec<Token>> = texts.iter().map(|t| self.tokens(t.as_ref(), side)).collect();
        let counts = corpus_term_counts(&docs);
        apply_filters(docs, &self.config, &counts)
            .into_iter()
            .map(|doc| doc.into_iter().map(|t| t.reduced).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn surfaces(tokens: &[Token]) -> Vec<&str> {
        tokens.iter().map(|t| t.surface.as_str()).collect()
    }

    #[test]
    fn tokenize_examples() {
        assert_eq!(surfaces(&tokenize("He writes, well.")), ["he", "writes", "well"]);
        assert!(tokenize("").is_empty());
        assert_eq!(surfaces(&tokenize("v2.0 beta")), ["v2", "0", "beta"]);
    }

    #[test]
    fn tokenize_drops_harakat_inside_words() {
        assert_eq!(surfaces(&tokenize("كَتَبَ الكتـاب")), ["كتب", "الكتاب"]);
    }

    #[test]
    fn frequency_cut_at_three() {
        let docs = vec![
            vec![Token::new("rare"), Token::new("common")],
            vec![Token::new("rare"), Token::new("common"), Token::new("common")],
        ];
        let counts = corpus_term_counts(&docs);
        let out = apply_filters(docs, &PipelineConfig::default(), &counts);
        assert_eq!(out, vec![vec![Token::new("common")], vec![Token::new("common"); 2]]);
    }

    #[test]
    fn stopwords_removed() {
        let mut config = PipelineConfig::passthrough();
        config.stopwords.insert("the".into());
        let docs = vec![tokenize("the cat and the hat")];
        let counts = corpus_term_counts(&docs);
        let out = apply_filters(docs, &config, &counts);
        assert_eq!(surfaces(&out[0]), ["cat", "and", "hat"]);
    }

    #[test]
    fn word_list_skips_comments() {
        let words = read_word_list("# stop\nthe\n\n  a \n".as_bytes()).unwrap();
        assert_eq!(words, ["the", "a"]);
    }

    #[test]
    fn pipeline_uses_side_reducer() {
        let config = PipelineConfig {
            reducer_source: ReducerKind::SuffixStemmer,
            reducer_target: ReducerKind::LightStemmer,
            ..PipelineConfig::passthrough()
        };
        let pipeline = TextPipeline::new(config).unwrap();
        assert_eq!(pipeline.terms("Writes books", Side::Source), ["write", "book"]);
        assert_eq!(pipeline.terms("المكتبة", Side::Target), ["مكتب"]);
    }

    #[test]
    fn zero_min_frequency_rejected() {
        let config = PipelineConfig {
            min_corpus_frequency: 0,
            ..PipelineConfig::default()
        };
        assert!(TextPipeline::new(config).is_err());
    }
}
