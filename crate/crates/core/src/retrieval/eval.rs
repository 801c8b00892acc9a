//! Recall at k, alignment reports and the self-retrieval check.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::{embed_documents, retrieve, AlignmentPair, RankedList};
use crate::bidict::Side;
use crate::corpus::{AlignedCorpus, Document};
use crate::error::{Error, Result};
use crate::lsi::LsiModel;
use crate::textprep::TextPipeline;

/// Inner edges of the similarity histogram; bins are half-open `[lo, hi)`
/// with an underflow bin below the first edge and an overflow bin above the last.
pub const HISTOGRAM_EDGES: [f64; 7] = [0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];

/// Source id to target id for every couple.
pub fn gold_from_pairs(corpus: &AlignedCorpus) -> HashMap<String, String> {
    corpus
        .pairs()
        .map(|(s, t)| (s.id.clone(), t.id.clone()))
        .collect()
}

fn gold_for<'g>(gold: &'g HashMap<String, String>, query: &str) -> Result<&'g str> {
    gold.get(query)
        .map(String::as_str)
        .ok_or_else(|| Error::MissingGold {
            query: query.to_string(),
        })
}

/// Fraction of queries whose gold target is within the first `k` entries.
pub fn recall_at_k(lists: &[RankedList], gold: &HashMap<String, String>, k: usize) -> Result<f64> {
    if lists.is_empty() {
        return Err(Error::Precondition("recall of an empty query set".into()));
    }
    let mut hits = 0usize;
    for list in lists {
        let target = gold_for(gold, &list.query)?;
        if list.rank_of(target).is_some_and(|r| r <= k) {
            hits += 1;
        }
    }
    Ok(hits as f64 / lists.len() as f64)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryHit {
    pub query: String,
    pub gold: String,
    /// 1-based, `None` when the gold target is not in the list.
    pub rank: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub queries: usize,
    pub skipped: usize,
    pub recall: BTreeMap<usize, f64>,
    pub hits: Vec<QueryHit>,
}

impl EvalReport {
    pub fn recall_at(&self, k: usize) -> Option<f64> {
        self.recall.get(&k).copied()
    }
}

pub fn evaluate(
    lists: &[RankedList],
    gold: &HashMap<String, String>,
    ks: &[usize],
    skipped: usize,
) -> Result<EvalReport> {
    let mut recall = BTreeMap::new();
    for &k in ks {
        recall.insert(k, recall_at_k(lists, gold, k)?);
    }
    let hits = lists
        .iter()
        .map(|l| {
            let target = gold_for(gold, &l.query)?;
            Ok(QueryHit {
                query: l.query.clone(),
                gold: target.to_string(),
                rank: l.rank_of(target),
            })
        })
        .collect::<Result<_>>()?;
    Ok(EvalReport {
        queries: lists.len(),
        skipped,
        recall,
        hits,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupRange {
    pub group: String,
    pub pairs: usize,
    pub min: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub count: usize,
}

impl HistogramBin {
    pub fn label(&self) -> String {
        match (self.lower, self.upper) {
            (None, Some(hi)) => format!("<{hi:.1}"),
            (Some(lo), Some(hi)) => format!("[{lo:.1},{hi:.1})"),
            (Some(lo), None) => format!(">={lo:.1}"),
            (None, None) => "all".to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Accuracy {
    pub correct: usize,
    pub total: usize,
    pub rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlignmentReport {
    pub pairs: usize,
    pub groups: Vec<GroupRange>,
    pub histogram: Vec<HistogramBin>,
    pub accuracy: Option<Accuracy>,
}

fn histogram_index(similarity: f64) -> usize {
    HISTOGRAM_EDGES.iter().take_while(|&&edge| similarity >= edge).count()
}

/// Per-group similarity range, histogram and, given gold source-to-target
/// labels, the fraction of pairs that are correct. Ungrouped pairs fall in
/// group `"all"`.
pub fn alignment_report(
    pairs: &[AlignmentPair],
    labels: Option<&HashMap<String, String>>,
) -> Result<AlignmentReport> {
    if pairs.is_empty() {
        return Err(Error::Precondition("alignment report of no pairs".into()));
    }
    let mut ranges: BTreeMap<&str, GroupRange> = BTreeMap::new();
    let mut counts = vec![0usize; HISTOGRAM_EDGES.len() + 1];
    for p in pairs {
        let key = p.group.as_deref().unwrap_or("all");
        let range = ranges.entry(key).or_insert_with(|| GroupRange {
            group: key.to_string(),
            pairs: 0,
            min: p.similarity,
            max: p.similarity,
        });
        range.pairs += 1;
        range.min = range.min.min(p.similarity);
        range.max = range.max.max(p.similarity);
        counts[histogram_index(p.similarity)] += 1;
    }
    let histogram = counts
        .into_iter()
        .enumerate()
        .map(|(i, count)| HistogramBin {
            lower: i.checked_sub(1).map(|j| HISTOGRAM_EDGES[j]),
            upper: HISTOGRAM_EDGES.get(i).copied(),
            count,
        })
        .collect();
    let accuracy = labels.map(|gold| {
        let correct = pairs
            .iter()
            .filter(|p| gold.get(&p.source) == Some(&p.target))
            .count();
        Accuracy {
            correct,
            total: pairs.len(),
            rate: correct as f64 / pairs.len() as f64,
        }
    });
    Ok(AlignmentReport {
        pairs: pairs.len(),
        groups: ranges.into_values().collect(),
        histogram,
        accuracy,
    })
}

/// Retrieves every document of `docs` with itself as the query. Returns 1.0,
/// or a self-test failure naming the documents that did not rank first.
pub fn oracle_experiment(docs: &[Document], model: &LsiModel, pipeline: &TextPipeline, side: Side) -> Result<f64> {
    if docs.is_empty() {
        return Err(Error::Precondition("oracle experiment needs documents".into()));
    }
    let set = embed_documents(docs, model, pipeline, side)?;
    let mut offenders = Vec::new();
    for (id, v) in set.iter() {
        let top = retrieve(id, v, &set, 1)?;
        if top.entries[0].candidate != id || v.iter().all(|x| *x == 0.0) {
            offenders.push(id.to_string());
        }
    }
    if offenders.is_empty() {
        Ok(1.0)
    } else {
        Err(Error::SelfTestFailure { offenders })
    }
}
