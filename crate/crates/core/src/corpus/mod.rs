//! Corpus ingestion: aligned document pairs on disk, Wikipedia dumps and
//! train/test splitting.

mod markup;
mod wiki;

use std::collections::HashSet;
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use markup::strip_wiki_markup;
pub use wiki::{
    extract_comparable_articles, parse_interlanguage_links, ComparableTuple, ExtractionStats,
    WikiArticle,
};

/// Language tag used when a record does not name its language.
pub const UNDETERMINED_LANGUAGE: &str = "und";

/// A single document of one side of a corpus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    pub language: String,
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group_key: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub category: Option<String>,
}

impl Document {
    pub fn new(id: impl Into<String>, language: impl Into<String>, text: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            language: language.into(),
            text: text.into(),
            group_key: None,
            category: None,
        }
    }

    pub fn with_group(mut self, group_key: impl Into<String>) -> Self {
        self.group_key = Some(group_key.into());
        self
    }

    /// A document with no visible text.
    pub fn is_degenerate(&self) -> bool {
        self.text.trim().is_empty()
    }
}

/// Source and target documents sharing indices: `source_docs[i]` aligns with `target_docs[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlignedCorpus {
    source_language: String,
    target_language: String,
    source_docs: Vec<Document>,
    target_docs: Vec<Document>,
}

impl AlignedCorpus {
    /// Builds a corpus, checking equal lengths, id uniqueness and homogeneous languages.
    pub fn new(source_docs: Vec<Document>, target_docs: Vec<Document>) -> Result<Self> {
        if source_docs.len() != target_docs.len() {
            return Err(Error::Precondition(format!(
                "source side has {} documents, target side has {}",
                source_docs.len(),
                target_docs.len()
            )));
        }
        let source_language = side_language(&source_docs, "source")?;
        let target_language = side_language(&target_docs, "target")?;
        for (docs, side) in [(&source_docs, "source"), (&target_docs, "target")] {
            let mut seen = HashSet::with_capacity(docs.len());
            for doc in docs {
                if doc.id.is_empty() {
                    return Err(Error::Precondition(format!("empty document id on {side} side")));
                }
                if !seen.insert(doc.id.as_str()) {
                    return Err(Error::Precondition(format!(
                        "duplicate {side} document id {:?}",
                        doc.id
                    )));
                }
            }
        }
        Ok(Self {
            source_language,
            target_language,
            source_docs,
            target_docs,
        })
    }

    pub fn len(&self) -> usize {
        self.source_docs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.source_docs.is_empty()
    }

    pub fn source_docs(&self) -> &[Document] {
        &self.source_docs
    }

    pub fn target_docs(&self) -> &[Document] {
        &self.target_docs
    }

    pub fn source_language(&self) -> &str {
        &self.source_language
    }

    pub fn target_language(&self) -> &str {
        &self.target_language
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&Document, &Document)> {
        self.source_docs.iter().zip(self.target_docs.iter())
    }

    /// Keeps only the pairs at `indices`, in the given order.
    pub fn select(&self, indices: &[usize]) -> AlignedCorpus {
        AlignedCorpus {
            source_language: self.source_language.clone(),
            target_language: self.target_language.clone(),
            source_docs: indices.iter().map(|&i| self.source_docs[i].clone()).collect(),
            target_docs: indices.iter().map(|&i| self.target_docs[i].clone()).collect(),
        }
    }

    pub fn into_parts(self) -> (Vec<Document>, Vec<Document>) {
        (self.source_docs, self.target_docs)
    }
}

fn side_language(docs: &[Document], side: &str) -> Result<String> {
    let Some(first) = docs.first() else {
        return Ok(UNDETERMINED_LANGUAGE.to_string());
    };
    if let Some(other) = docs.iter().find(|d| d.language != first.language) {
        return Err(Error::Precondition(format!(
            "{side} side mixes languages {:?} and {:?}",
            first.language, other.language
        )));
    }
    Ok(first.language.clone())
}

/// On-disk layout of an aligned corpus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CorpusFormat {
    /// `<root>/<source_lang>/<id>.txt` paired with `<root>/<target_lang>/<id>.txt`.
    PairDirs {
        source_lang: String,
        target_lang: String,
    },
    /// One JSON object per pair, see [`PairRecord`].
    Jsonl,
}

/// One line of a jsonl corpus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairRecord {
    pub src_id: String,
    pub tgt_id: String,
    pub src_text: String,
    pub tgt_text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub src_lang: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tgt_lang: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group_key: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub category: Option<String>,
}

pub fn load_aligned_corpus(path: &Path, format: &CorpusFormat) -> Result<AlignedCorpus> {
    match format {
        CorpusFormat::PairDirs {
            source_lang,
            target_lang,
        } => load_pairdirs(path, source_lang, target_lang),
        CorpusFormat::Jsonl => {
            let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
            read_jsonl(BufReader::new(file)).map_err(|e| match e {
                Error::Io { source, .. } => Error::io(path, source),
                other => other,
            })
        }
    }
}

fn load_pairdirs(root: &Path, source_lang: &str, target_lang: &str) -> Result<AlignedCorpus> {
    let src_dir = root.join(source_lang);
    let tgt_dir = root.join(target_lang);
    let mut ids = Vec::new();
    for entry in fs::read_dir(&src_dir).map_err(|e| Error::io(&src_dir, e))? {
        let entry = entry.map_err(|e| Error::io(&src_dir, e))?;
        let path = entry.path();
        if path.extension().and_then(|e| e.to_str()) != Some("txt") {
            continue;
        }
        if let Some(stem) = path.file_stem().and_then(|s| s.to_str()) {
            ids.push(stem.to_string());
        }
    }
    // directory iteration order is platform dependent
    ids.sort();

    let mut source_docs = Vec::with_capacity(ids.len());
    let mut target_docs = Vec::with_capacity(ids.len());
    for id in ids {
        let tgt_path = tgt_dir.join(format!("{id}.txt"));
        if !tgt_path.is_file() {
            return Err(Error::MissingCounterpart { id });
        }
        let src_path = src_dir.join(format!("{id}.txt"));
        let src_text = fs::read_to_string(&src_path).map_err(|e| Error::io(&src_path, e))?;
        let tgt_text = fs::read_to_string(&tgt_path).map_err(|e| Error::io(&tgt_path, e))?;
        source_docs.push(Document::new(id.clone(), source_lang, src_text));
        target_docs.push(Document::new(id, target_lang, tgt_text));
    }
    AlignedCorpus::new(source_docs, target_docs)
}

/// Reads a jsonl corpus; blank lines are skipped, line numbers are 1-based.
pub fn read_jsonl<R: BufRead>(reader: R) -> Result<AlignedCorpus> {
    let mut source_docs = Vec::new();
    let mut target_docs = Vec::new();
    let mut src_ids = HashSet::new();
    let mut tgt_ids = HashSet::new();
    for (index, line) in reader.lines().enumerate() {
        let line_no = index + 1;
        let line = line.map_err(|e| Error::io("<jsonl>", e))?;
        if line.trim().is_empty() {
            continue;
        }
        let record: PairRecord =
            serde_json::from_str(&line).map_err(|e| Error::MalformedRecord {
                line: line_no,
                reason: e.to_string(),
            })?;
        if record.src_id.is_empty() || record.tgt_id.is_empty() {
            return Err(Error::MalformedRecord {
                line: line_no,
                reason: "empty document id".into(),
            });
        }
        if !src_ids.insert(record.src_id.clone()) || !tgt_ids.insert(record.tgt_id.clone()) {
            return Err(Error::MalformedRecord {
                line: line_no,
                reason: "duplicate document id".into(),
            });
        }
        let src_lang = record
            .src_lang
            .unwrap_or_else(|| UNDETERMINED_LANGUAGE.to_string());
        let tgt_lang = record
            .tgt_lang
            .unwrap_or_else(|| UNDETERMINED_LANGUAGE.to_string());
        for (docs, lang) in [(&source_docs, &src_lang), (&target_docs, &tgt_lang)] {
            if let Some(first) = docs.first() {
                let first: &Document = first;
                if &first.language != lang {
                    return Err(Error::MalformedRecord {
                        line: line_no,
                        reason: format!("language {lang:?} differs from {:?}", first.language),
                    });
                }
            }
        }
        source_docs.push(Document {
            id: record.src_id,
            language: src_lang,
            text: record.src_text,
            group_key: record.group_key.clone(),
            category: record.category.clone(),
        });
        target_docs.push(Document {
            id: record.tgt_id,
            language: tgt_lang,
            text: record.tgt_text,
            group_key: record.group_key,
            category: record.category,
        });
    }
    AlignedCorpus::new(source_docs, target_docs)
}

pub fn write_jsonl<W: Write>(corpus: &AlignedCorpus, writer: W) -> std::io::Result<()> {
    let mut writer = BufWriter::new(writer);
    for (src, tgt) in corpus.pairs() {
        let record = PairRecord {
            src_id: src.id.clone(),
            tgt_id: tgt.id.clone(),
            src_text: src.text.clone(),
            tgt_text: tgt.text.clone(),
            src_lang: Some(src.language.clone()),
            tgt_lang: Some(tgt.language.clone()),
            group_key: src.group_key.clone().or_else(|| tgt.group_key.clone()),
            category: src.category.clone().or_else(|| tgt.category.clone()),
        };
        serde_json::to_writer(&mut writer, &record)?;
        writer.write_all(b"\n")?;
    }
    writer.flush()
}

pub fn save_jsonl(corpus: &AlignedCorpus, path: &Path) -> Result<()> {
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_jsonl(corpus, file).map_err(|e| Error::io(path, e))
}

/// Splits pairs into train and test parts, `|train| = round(train_fraction * d)`.
///
/// The partition is a seeded shuffle; each part keeps the original corpus order.
pub fn split_corpus(
    corpus: &AlignedCorpus,
    train_fraction: f64,
    seed: u64,
) -> Result<(AlignedCorpus, AlignedCorpus)> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::Precondition(format!(
            "train fraction must lie in (0, 1), got {train_fraction}"
        )));
    }
    let d = corpus.len();
    let n_train = (train_fraction * d as f64).round() as usize;
    if d < 2 || n_train == 0 || n_train >= d {
        return Err(Error::DegenerateCorpus(format!(
            "splitting {d} pairs at {train_fraction} leaves an empty part"
        )));
    }
    let mut order: Vec<usize> = (0..d).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut train: Vec<usize> = order[..n_train].to_vec();
    let mut test: Vec<usize> = order[n_train..].to_vec();
    train.sort_unstable();
    test.sort_unstable();
    Ok((corpus.select(&train), corpus.select(&test)))
}

/// Word-level corpus statistics: documents, tokens and distinct tokens.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SideStats {
    pub documents: usize,
    pub words: usize,
    pub vocabulary: usize,
}

impl SideStats {
    pub fn from_token_lists<'a, I, T>(docs: I) -> Self
    where
        I: IntoIterator<Item = &'a [T]>,
        T: AsRef<str> + 'a,
    {
        let mut documents = 0;
        let mut words = 0;
        let mut vocab = HashSet::new();
        for tokens in docs {
            documents += 1;
            words += tokens.len();
            for t in tokens {
                vocab.insert(t.as_ref().to_string());
            }
        }
        SideStats {
            documents,
            words,
            vocabulary: vocab.len(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy(d: usize) -> AlignedCorpus {
        let src = (0..d)
            .map(|i| Document::new(format!("e{i:03}"), "en", format!("english {i}")))
            .collect();
        let tgt = (0..d)
            .map(|i| Document::new(format!("a{i:03}"), "ar", format!("عربي {i}")))
            .collect();
        AlignedCorpus::new(src, tgt).unwrap()
    }

    #[test]
    fn pairdirs_single_pair() {
        let dir = tempfile::tempdir().unwrap();
        fs::create_dir_all(dir.path().join("en")).unwrap();
        fs::create_dir_all(dir.path().join("ar")).unwrap();
        fs::write(dir.path().join("en/001.txt"), "the book").unwrap();
        fs::write(dir.path().join("ar/001.txt"), "الكتاب").unwrap();
        let format = CorpusFormat::PairDirs {
            source_lang: "en".into(),
            target_lang: "ar".into(),
        };
        let corpus = load_aligned_corpus(dir.path(), &format).unwrap();
        assert_eq!(corpus.len(), 1);
        assert_eq!(corpus.source_docs()[0].text, "the book");
        assert_eq!(corpus.target_docs()[0].language, "ar");
    }

    #[test]
    fn pairdirs_missing_counterpart() {
        let dir = tempfile::tempdir().unwrap();
        fs::create_dir_all(dir.path().join("en")).unwrap();
        fs::create_dir_all(dir.path().join("ar")).unwrap();
        fs::write(dir.path().join("en/001.txt"), "a").unwrap();
        fs::write(dir.path().join("en/002.txt"), "b").unwrap();
        fs::write(dir.path().join("ar/001.txt"), "c").unwrap();
        let format = CorpusFormat::PairDirs {
            source_lang: "en".into(),
            target_lang: "ar".into(),
        };
        match load_aligned_corpus(dir.path(), &format) {
            Err(Error::MissingCounterpart { id }) => assert_eq!(id, "002"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn jsonl_preserves_order() {
        let text = concat!(
            r#"{"src_id":"3","tgt_id":"c","src_text":"x","tgt_text":"y"}"#,
            "\n",
            r#"{"src_id":"1","tgt_id":"a","src_text":"x","tgt_text":"y"}"#,
            "\n",
            r#"{"src_id":"2","tgt_id":"b","src_text":"x","tgt_text":"y","group_key":"2012-03"}"#,
            "\n"
        );
        let corpus = read_jsonl(text.as_bytes()).unwrap();
        assert_eq!(corpus.len(), 3);
        let ids: Vec<_> = corpus.source_docs().iter().map(|d| d.id.as_str()).collect();
        assert_eq!(ids, ["3", "1", "2"]);
        assert_eq!(corpus.target_docs()[2].group_key.as_deref(), Some("2012-03"));
    }

    #[test]
    fn jsonl_missing_field_reports_line() {
        let text = concat!(
            r#"{"src_id":"1","tgt_id":"a","src_text":"x","tgt_text":"y"}"#,
            "\n",
            r#"{"src_id":"2","tgt_id":"b","src_text":"x"}"#,
            "\n",
        );
        match read_jsonl(text.as_bytes()) {
            Err(Error::MalformedRecord { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn jsonl_round_trip() {
        let mut corpus = toy(4);
        corpus.source_docs[1].text = "line\nbreak \"quoted\" \u{0}".into();
        let mut buf = Vec::new();
        write_jsonl(&corpus, &mut buf).unwrap();
        assert_eq!(read_jsonl(buf.as_slice()).unwrap(), corpus);
    }

    #[test]
    fn split_ninety_ten() {
        let (train, test) = split_corpus(&toy(10), 0.9, 42).unwrap();
        assert_eq!((train.len(), test.len()), (9, 1));
    }

    #[test]
    fn split_smallest() {
        let (train, test) = split_corpus(&toy(2), 0.5, 7).unwrap();
        assert_eq!((train.len(), test.len()), (1, 1));
    }

    #[test]
    fn split_is_deterministic_and_partitions() {
        let corpus = toy(37);
        let a = split_corpus(&corpus, 0.7, 9).unwrap();
        let b = split_corpus(&corpus, 0.7, 9).unwrap();
        assert_eq!(a, b);
        let mut ids: Vec<_> = a
            .0
            .source_docs()
            .iter()
            .chain(a.1.source_docs())
            .map(|d| d.id.clone())
            .collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), 37);
        // couples stay intact
        for (s, t) in a.0.pairs().chain(a.1.pairs()) {
            assert_eq!(s.id[1..], t.id[1..]);
        }
    }

    #[test]
    fn split_rejects_degenerate() {
        assert!(matches!(
            split_corpus(&toy(1), 0.5, 1),
            Err(Error::DegenerateCorpus(_))
        ));
        assert!(matches!(
            split_corpus(&toy(10), 0.99, 1),
            Err(Error::DegenerateCorpus(_))
        ));
        assert!(matches!(
            split_corpus(&toy(10), 1.0, 1),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn rejects_mixed_languages() {
        let src = vec![Document::new("1", "en", "a"), Document::new("2", "fr", "b")];
        let tgt = vec![Document::new("1", "ar", "a"), Document::new("2", "ar", "b")];
        assert!(AlignedCorpus::new(src, tgt).is_err());
    }
}
