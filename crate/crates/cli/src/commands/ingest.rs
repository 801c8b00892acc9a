use std::collections::BTreeSet;
use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use serde::Serialize;
use xling_core::corpus::{
    extract_comparable_articles, load_aligned_corpus, write_jsonl, AlignedCorpus, CorpusFormat, Document,
    ExtractionStats, SideStats,
};
use xling_core::textprep::tokenize;
use xling_core::Result;

use crate::args::{IngestArgs, InputFormat};
use crate::config::{data_path, ConfigFile};
use crate::io::{sibling, write_atomic};
use crate::manifest::{manifest_path, Manifest};

#[derive(Debug, Serialize)]
struct SideSummary {
    language: String,
    documents: usize,
    sentences: usize,
    words: usize,
    vocabulary: usize,
}

#[derive(Debug, Serialize)]
struct IngestStats {
    pairs: usize,
    source: SideSummary,
    target: SideSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    extraction: Option<ExtractionSummary>,
}

#[derive(Debug, Serialize)]
struct ExtractionSummary {
    pivot_pages: usize,
    indexed_pages: usize,
    emitted: usize,
    skipped_unresolved: usize,
}

impl From<ExtractionStats> for ExtractionSummary {
    fn from(s: ExtractionStats) -> Self {
        Self {
            pivot_pages: s.pivot_pages,
            indexed_pages: s.indexed_pages,
            emitted: s.emitted,
            skipped_unresolved: s.skipped_unresolved,
        }
    }
}

/// Runs of text closed by `.`, `!`, `?`, the Arabic question mark or a line end.
fn count_sentences(text: &str) -> usize {
    text.split(['.', '!', '?', '؟', '\n'])
        .filter(|s| s.chars().any(char::is_alphanumeric))
        .count()
}

fn summarize(docs: &[Document], language: &str) -> SideSummary {
    let tokens: Vec<Vec<String>> = docs
        .iter()
        .map(|d| tokenize(&d.text).into_iter().map(|t| t.surface).collect())
        .collect();
    let stats = SideStats::from_token_lists(tokens.iter().map(Vec::as_slice));
    SideSummary {
        language: language.to_string(),
        documents: stats.documents,
        sentences: docs.iter().map(|d| count_sentences(&d.text)).sum(),
        words: stats.words,
        vocabulary: stats.vocabulary,
    }
}

fn from_dump(path: &Path, pivot: &str, target: &str, require: &[String]) -> Result<(AlignedCorpus, ExtractionStats)> {
    let mut required: BTreeSet<String> = require.iter().cloned().collect();
    required.insert(target.to_string());
    let others: Vec<&String> = required.iter().filter(|l| *l != pivot).collect();
    let target_index = others.iter().position(|l| *l == target).unwrap_or(0);
    let mut sources = Vec::new();
    let mut targets = Vec::new();
    let stats = extract_comparable_articles(
        || File::open(path).map(BufReader::new),
        pivot,
        &required,
        |tuple| {
            let linked = &tuple.linked[target_index];
            sources.push(Document::new(&tuple.pivot.title, pivot, tuple.pivot.plain_text()));
            targets.push(Document::new(&linked.title, target, linked.plain_text()));
            Ok(())
        },
    )?;
    log::info!(
        "{} pivot pages, {} tuples, {} with unresolved links",
        stats.pivot_pages,
        stats.emitted,
        stats.skipped_unresolved
    );
    Ok((AlignedCorpus::new(sources, targets)?, stats))
}

pub fn run(args: &IngestArgs, config: &ConfigFile) -> Result<()> {
    let source_lang = config.pick(args.source_lang.clone(), "source_lang", "en".to_string())?;
    let target_lang = config.pick(args.target_lang.clone(), "target_lang", "ar".to_string())?;
    let input = data_path(&args.input);
    let (corpus, extraction) = match args.format {
        InputFormat::Pairdirs => {
            let format = CorpusFormat::PairDirs {
                source_lang: source_lang.clone(),
                target_lang: target_lang.clone(),
            };
            (load_aligned_corpus(&input, &format)?, None)
        }
        InputFormat::Jsonl => (load_aligned_corpus(&input, &CorpusFormat::Jsonl)?, None),
        InputFormat::Wikidump => {
            let (c, s) = from_dump(&input, &source_lang, &target_lang, &args.require)?;
            (c, Some(s))
        }
    };
    write_atomic(&args.output, |w| write_jsonl(&corpus, w))?;

    let stats = IngestStats {
        pairs: corpus.len(),
        source: summarize(corpus.source_docs(), corpus.source_language()),
        target: summarize(corpus.target_docs(), corpus.target_language()),
        extraction: extraction.map(Into::into),
    };
    let stats_path = args.stats.clone().unwrap_or_else(|| sibling(&args.output, ".stats.json"));
    write_atomic(&stats_path, |w| {
        serde_json::to_writer_pretty(&mut *w, &stats).map_err(std::io::Error::other)
    })?;

    let settings = serde_json::json!({
        "format": args.format,
        "source_lang": source_lang,
        "target_lang": target_lang,
        "require": args.require,
    });
    let mut manifest = Manifest::new("ingest", &settings, None)?;
    if input.is_file() {
        manifest = manifest.input(&input)?;
    }
    manifest
        .output(&args.output)?
        .output(&stats_path)?
        .write(&manifest_path(&args.output))?;
    println!(
        "{} pairs; {} words {} / {} words {}",
        stats.pairs, stats.source.language, stats.source.words, stats.target.language, stats.target.words
    );
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sentences() {
        assert_eq!(count_sentences("One. Two! Three?"), 3);
        assert_eq!(count_sentences("هل هذا؟ نعم."), 2);
        assert_eq!(count_sentences("...\n\n"), 0);
    }
}
