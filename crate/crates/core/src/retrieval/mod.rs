//! Top-n cosine retrieval, the AR-LSI and CL-LSI pipelines, dictionary-measure
//! ranking, corpus alignment and evaluation.

mod align;
mod eval;
mod output;
mod provider;

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::bidict::{bin_pooled, bin_symmetric, dict_cosine, BilingualDictionary, Side};
use crate::corpus::Document;
use crate::error::{Error, Result};
use crate::lsi::{LsiModel, ModelKind};
use crate::textprep::TextPipeline;
use crate::vsm::Vocabulary;

pub use align::{align_corpora, align_embedded, AlignOptions, Alignment, AlignmentPair, GroupBy};
pub use eval::{
    alignment_report, evaluate, gold_from_pairs, oracle_experiment, recall_at_k, Accuracy,
    AlignmentReport, EvalReport, GroupRange, HistogramBin, QueryHit, HISTOGRAM_EDGES,
};
pub use output::{
    write_alignment_tsv, write_histogram_csv, write_ranges_csv, write_ranked_tsv, write_json,
};
pub use provider::{
    CachedTranslations, DictionaryTranslator, IdentityTranslator, TranslationProvider,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedEntry {
    pub candidate: String,
    pub similarity: f64,
}

/// Candidates in descending similarity, ties by ascending id.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedList {
    pub query: String,
    pub entries: Vec<RankedEntry>,
}

impl RankedList {
    /// 1-based rank of `candidate`, if listed.
    pub fn rank_of(&self, candidate: &str) -> Option<usize> {
        self.entries
            .iter()
            .position(|e| e.candidate == candidate)
            .map(|p| p + 1)
    }
}

/// Dense vectors with their ids and cached norms.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CandidateSet {
    ids: Vec<String>,
    vectors: Vec<Vec<f64>>,
    norms: Vec<f64>,
}

impl CandidateSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, id: impl Into<String>, vector: Vec<f64>) {
        self.norms.push(vector.iter().map(|x| x * x).sum::<f64>().sqrt());
        self.ids.push(id.into());
        self.vectors.push(vector);
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn id(&self, i: usize) -> &str {
        &self.ids[i]
    }

    pub fn vector(&self, i: usize) -> &[f64] {
        &self.vectors[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[f64])> {
        self.ids.iter().map(String::as_str).zip(self.vectors.iter().map(Vec::as_slice))
    }

    /// Cosine of `query` against every candidate, in insertion order.
    pub fn similarities(&self, query: &[f64]) -> Result<Vec<f64>> {
        let q_norm = query.iter().map(|x| x * x).sum::<f64>().sqrt();
        self.vectors
            .iter()
            .zip(&self.norms)
            .map(|(v, &norm)| {
                if v.len() != query.len() {
                    return Err(Error::DimensionMismatch {
                        expected: v.len(),
                        found: query.len(),
                    });
                }
                let denom = norm * q_norm;
                Ok(if denom == 0.0 {
                    0.0
                } else {
                    v.iter().zip(query).map(|(a, b)| a * b).sum::<f64>() / denom
                })
            })
            .collect()
    }
}

impl FromIterator<(String, Vec<f64>)> for CandidateSet {
    fn from_iter<I: IntoIterator<Item = (String, Vec<f64>)>>(iter: I) -> Self {
        let mut set = CandidateSet::new();
        for (id, v) in iter {
            set.push(id, v);
        }
        set
    }
}

/// Top `n` of `(id, score)` pairs, descending, ties by ascending id.
pub fn rank_scores(query: &str, ids: &[&str], scores: &[f64], n: usize) -> Result<RankedList> {
    if n == 0 {
        return Err(Error::Precondition("n must be at least 1".into()));
    }
    if ids.is_empty() {
        return Err(Error::EmptyCandidates);
    }
    let cmp = |&a: &usize, &b: &usize| -> Ordering {
        scores[b].total_cmp(&scores[a]).then_with(|| ids[a].cmp(ids[b]))
    };
    let mut order: Vec<usize> = (0..ids.len()).collect();
    if n < order.len() {
        order.select_nth_unstable_by(n - 1, cmp);
        order.truncate(n);
    }
    order.sort_unstable_by(cmp);
    Ok(RankedList {
        query: query.to_string(),
        entries: order
            .into_iter()
            .map(|i| RankedEntry {
                candidate: ids[i].to_string(),
                similarity: scores[i],
            })
            .collect(),
    })
}

/// Top `n` candidates by cosine to `query`.
pub fn retrieve(query_id: &str, query: &[f64], candidates: &CandidateSet, n: usize) -> Result<RankedList> {
    if candidates.is_empty() {
        return Err(Error::EmptyCandidates);
    }
    let scores = candidates.similarities(query)?;
    let ids: Vec<&str> = candidates.ids.iter().map(String::as_str).collect();
    rank_scores(query_id, &ids, &scores, n)
}

/// Applies `f` to every item on scoped worker threads; output keeps input order.
pub fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    if workers <= 1 || items.len() < 2 {
        return items.iter().map(f).collect();
    }
    let chunk = items.len().div_ceil(workers);
    std::thread::scope(|scope| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|part| {
                let f = &f;
                scope.spawn(move || part.iter().map(f).collect::<Vec<R>>())
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("worker panicked"))
            .collect()
    })
}

/// A query that could not be processed; the rest of the run continues.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkippedQuery {
    pub query: String,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RetrievalRun {
    pub lists: Vec<RankedList>,
    pub skipped: Vec<SkippedQuery>,
}

/// Embeds `docs` with the `side` pipeline into `model`'s space.
pub fn embed_documents(
    docs: &[Document],
    model: &LsiModel,
    pipeline: &TextPipeline,
    side: Side,
) -> Result<CandidateSet> {
    let vectors = par_map(docs, |d| {
        let terms = pipeline.terms(&d.text, side);
        match model.kind() {
            ModelKind::Crosslingual => model.embed_crosslingual(&terms, side),
            ModelKind::Monolingual => model.embed(&terms),
        }
    });
    docs.iter()
        .zip(vectors)
        .map(|(d, v)| Ok((d.id.clone(), v?)))
        .collect::<Result<Vec<_>>>()
        .map(CandidateSet::from_iter)
}

fn run_queries(queries: &CandidateSet, candidates: &CandidateSet, n: usize) -> Result<Vec<RankedList>> {
    let idx: Vec<usize> = (0..queries.len()).collect();
    par_map(&idx, |&i| retrieve(queries.id(i), queries.vector(i), candidates, n))
        .into_iter()
        .collect()
}

/// CL-LSI: both sides are mapped into the cross-lingual space directly.
pub fn retrieve_cl_lsi(
    queries: &[Document],
    candidates: &[Document],
    model: &LsiModel,
    pipeline: &TextPipeline,
    n: usize,
) -> Result<RetrievalRun> {
    if model.kind() != ModelKind::Crosslingual {
        return Err(Error::WrongModelKind {
            expected: ModelKind::Crosslingual.name(),
            found: model.kind().name(),
        });
    }
    if queries.is_empty() {
        return Ok(RetrievalRun::default());
    }
    let cand = embed_documents(candidates, model, pipeline, Side::Target)?;
    let q = embed_documents(queries, model, pipeline, Side::Source)?;
    Ok(RetrievalRun {
        lists: run_queries(&q, &cand, n)?,
        skipped: Vec::new(),
    })
}

/// AR-LSI: queries are translated into the target language and projected into
/// a monolingual target-language space. Failed translations skip the query.
pub fn retrieve_ar_lsi(
    queries: &[Document],
    candidates: &[Document],
    model: &LsiModel,
    provider: &dyn TranslationProvider,
    pipeline: &TextPipeline,
    n: usize,
) -> Result<RetrievalRun> {
    if model.kind() != ModelKind::Monolingual {
        return Err(Error::WrongModelKind {
            expected: ModelKind::Monolingual.name(),
            found: model.kind().name(),
        });
    }
    if queries.is_empty() {
        return Ok(RetrievalRun::default());
    }
    let cand = embed_documents(candidates, model, pipeline, Side::Target)?;
    if cand.is_empty() {
        return Err(Error::EmptyCandidates);
    }
    let target_language = candidates[0].language.as_str();
    let mut run = RetrievalRun::default();
    let translated = par_map(queries, |d| provider.translate(d, target_language));
    for (doc, result) in queries.iter().zip(translated) {
        match result {
            Ok(t) => {
                let v = model.embed(&pipeline.terms(&t.text, Side::Target))?;
                run.lists.push(retrieve(&doc.id, &v, &cand, n)?);
            }
            Err(e) => {
                log::warn!("query {} skipped: {e}", doc.id);
                run.skipped.push(SkippedQuery {
                    query: doc.id.clone(),
                    reason: e.to_string(),
                });
            }
        }
    }
    Ok(run)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DictMeasure {
    /// Mean of the two directed binary measures.
    Bin,
    /// Translated tokens of both documents over their summed lengths.
    BinPooled,
    /// Cosine over translation-pair attributes.
    Cosine,
}

impl DictMeasure {
    pub fn score(
        self,
        d_s: &[String],
        d_t: &[String],
        dict: &BilingualDictionary,
        stats: (&Vocabulary, &Vocabulary),
    ) -> f64 {
        match self {
            DictMeasure::Bin => bin_symmetric(d_s, d_t, dict),
            DictMeasure::BinPooled => bin_pooled(d_s, d_t, dict),
            DictMeasure::Cosine => dict_cosine(d_s, d_t, dict, stats.0, stats.1),
        }
    }
}

/// Ranks candidates by a dictionary measure over preprocessed documents.
/// Cosine weights use the document frequencies of the two collections given.
pub fn retrieve_by_measure(
    queries: &[(String, Vec<String>)],
    candidates: &[(String, Vec<String>)],
    dict: &BilingualDictionary,
    measure: DictMeasure,
    n: usize,
) -> Result<RetrievalRun> {
    if queries.is_empty() {
        return Ok(RetrievalRun::default());
    }
    if candidates.is_empty() {
        return Err(Error::EmptyCandidates);
    }
    let q_docs: Vec<Vec<String>> = queries.iter().map(|(_, d)| d.clone()).collect();
    let c_docs: Vec<Vec<String>> = candidates.iter().map(|(_, d)| d.clone()).collect();
    let q_stats = Vocabulary::build(&q_docs)?;
    let c_stats = Vocabulary::build(&c_docs)?;
    let ids: Vec<&str> = candidates.iter().map(|(id, _)| id.as_str()).collect();
    let lists = par_map(queries, |(qid, q)| {
        let scores: Vec<f64> = candidates
            .iter()
            .map(|(_, c)| measure.score(q, c, dict, (&q_stats, &c_stats)))
            .collect();
        rank_scores(qid, &ids, &scores, n)
    });
    Ok(RetrievalRun {
        lists: lists.into_iter().collect::<Result<_>>()?,
        skipped: Vec::new(),
    })
}
