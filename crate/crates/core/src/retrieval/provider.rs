//! Translation providers for the AR-LSI pipeline.

use std::collections::HashMap;
use std::io::BufRead;
use std::path::Path;

use crate::bidict::{BilingualDictionary, Side};
use crate::corpus::Document;
use crate::error::{Error, Result};
use crate::textprep::TextPipeline;

/// Turns a document into one written in `target_language`. Implementations
/// must be deterministic.
pub trait TranslationProvider: Sync {
    fn translate(&self, doc: &Document, target_language: &str) -> Result<Document>;
}

fn relabel(doc: &Document, text: String, target_language: &str) -> Document {
    Document {
        language: target_language.to_string(),
        text,
        ..doc.clone()
    }
}

/// Returns the text unchanged under the new language tag.
#[derive(Debug, Clone, Copy, Default)]
pub struct IdentityTranslator;

impl TranslationProvider for IdentityTranslator {
    fn translate(&self, doc: &Document, target_language: &str) -> Result<Document> {
        Ok(relabel(doc, doc.text.clone(), target_language))
    }
}

/// Word-for-word replacement: every source term is replaced by all of its
/// dictionary translations in sorted order; untranslatable terms are dropped.
#[derive(Debug, Clone)]
pub struct DictionaryTranslator {
    dict: BilingualDictionary,
    pipeline: TextPipeline,
}

impl DictionaryTranslator {
    /// `pipeline` reduces source words before lookup.
    pub fn new(dict: BilingualDictionary, pipeline: TextPipeline) -> Self {
        Self { dict, pipeline }
    }
}

impl TranslationProvider for DictionaryTranslator {
    fn translate(&self, doc: &Document, target_language: &str) -> Result<Document> {
        let mut words: Vec<&str> = Vec::new();
        let terms = self.pipeline.terms(&doc.text, Side::Source);
        for term in &terms {
            words.extend(self.dict.translations(Side::Source, term).iter().map(String::as_str));
        }
        Ok(relabel(doc, words.join(" "), target_language))
    }
}

/// Precomputed translations keyed by document id, read from a TSV of
/// `id<TAB>translated text` lines.
#[derive(Debug, Clone, Default)]
pub struct CachedTranslations {
    texts: HashMap<String, String>,
}

impl CachedTranslations {
    pub fn new(texts: HashMap<String, String>) -> Self {
        Self { texts }
    }

    pub fn read<R: BufRead>(reader: R) -> Result<Self> {
        let mut texts = HashMap::new();
        for (n, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| Error::io("<translation cache>", e))?;
            if line.trim().is_empty() {
                continue;
            }
            let (id, text) = line.split_once('\t').ok_or_else(|| Error::MalformedRecord {
                line: n + 1,
                reason: "expected id<TAB>text".into(),
            })?;
            texts.insert(id.to_string(), text.to_string());
        }
        Ok(Self { texts })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read(std::io::BufReader::new(file))
    }

    pub fn len(&self) -> usize {
        self.texts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.texts.is_empty()
    }
}

impl TranslationProvider for CachedTranslations {
    fn translate(&self, doc: &Document, target_language: &str) -> Result<Document> {
        let text = self.texts.get(&doc.id).ok_or_else(|| Error::Translation {
            doc: doc.id.clone(),
            reason: "no cached translation".into(),
        })?;
        Ok(relabel(doc, text.clone(), target_language))
    }
}
