//! Best-target alignment of two document collections, per group.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{embed_documents, retrieve, CandidateSet};
use crate::bidict::Side;
use crate::corpus::Document;
use crate::error::{Error, Result};
use crate::lsi::{LsiModel, ModelKind};
use crate::textprep::TextPipeline;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlignmentPair {
    pub source: String,
    pub target: String,
    pub similarity: f64,
    pub group: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupBy {
    /// The document's `group_key`, e.g. a publication month.
    GroupKey,
    Category,
}

impl GroupBy {
    fn key(self, doc: &Document) -> Option<&str> {
        match self {
            GroupBy::GroupKey => doc.group_key.as_deref(),
            GroupBy::Category => doc.category.as_deref(),
        }
    }
}

impl std::str::FromStr for GroupBy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "group" | "group_key" | "month" => Ok(GroupBy::GroupKey),
            "category" => Ok(GroupBy::Category),
            _ => Err(format!("unknown grouping {s:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlignOptions {
    pub top_n: usize,
    pub group_by: Option<GroupBy>,
    /// Keep a pair only when the source is also the target's best source.
    /// Not part of the one-directional procedure; off by default.
    pub mutual_best: bool,
}

impl Default for AlignOptions {
    fn default() -> Self {
        Self {
            top_n: 15,
            group_by: None,
            mutual_best: false,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Alignment {
    /// Groups in ascending key order, each sorted by descending similarity.
    pub pairs: Vec<AlignmentPair>,
    /// Groups present on only one side.
    pub skipped_groups: Vec<String>,
}

/// Aligns already embedded collections: each source gets its single best
/// target, then the `top_n` most similar pairs are kept. A target may be
/// chosen by several sources.
pub fn align_embedded(
    sources: &CandidateSet,
    targets: &CandidateSet,
    top_n: usize,
    mutual_best: bool,
    group: Option<&str>,
) -> Result<Vec<AlignmentPair>> {
    if top_n == 0 {
        return Err(Error::Precondition("top_n must be at least 1".into()));
    }
    let mut pairs = Vec::with_capacity(sources.len());
    for (id, v) in sources.iter() {
        let best = retrieve(id, v, targets, 1)?;
        let entry = &best.entries[0];
        if mutual_best {
            let target_index = (0..targets.len())
                .find(|&j| targets.id(j) == entry.candidate)
                .expect("candidate comes from targets");
            let back = retrieve(&entry.candidate, targets.vector(target_index), sources, 1)?;
            if back.entries[0].candidate != id {
                continue;
            }
        }
        pairs.push(AlignmentPair {
            source: id.to_string(),
            target: entry.candidate.clone(),
            similarity: entry.similarity,
            group: group.map(str::to_string),
        });
    }
    pairs.sort_by(|a, b| {
        b.similarity
            .total_cmp(&a.similarity)
            .then_with(|| a.source.cmp(&b.source))
            .then_with(|| a.target.cmp(&b.target))
    });
    pairs.truncate(top_n);
    Ok(pairs)
}

fn group_documents(docs: &[Document], by: GroupBy) -> Result<BTreeMap<&str, Vec<Document>>> {
    let mut groups: BTreeMap<&str, Vec<Document>> = BTreeMap::new();
    for d in docs {
        let key = by.key(d).ok_or_else(|| {
            Error::Precondition(format!("document {} has no group key", d.id))
        })?;
        groups.entry(key).or_default().push(d.clone());
    }
    Ok(groups)
}

/// Cross-lingual alignment of `sources` against `targets`, optionally within
/// groups. Groups lacking documents on either side are skipped with a warning.
pub fn align_corpora(
    sources: &[Document],
    targets: &[Document],
    model: &LsiModel,
    pipeline: &TextPipeline,
    options: &AlignOptions,
) -> Result<Alignment> {
    if model.kind() != ModelKind::Crosslingual {
        return Err(Error::WrongModelKind {
            expected: ModelKind::Crosslingual.name(),
            found: model.kind().name(),
        });
    }
    let Some(by) = options.group_by else {
        let s = embed_documents(sources, model, pipeline, Side::Source)?;
        let t = embed_documents(targets, model, pipeline, Side::Target)?;
        if s.is_empty() || t.is_empty() {
            return Ok(Alignment::default());
        }
        return Ok(Alignment {
            pairs: align_embedded(&s, &t, options.top_n, options.mutual_best, None)?,
            skipped_groups: Vec::new(),
        });
    };
    let source_groups = group_documents(sources, by)?;
    let mut target_groups = group_documents(targets, by)?;
    let mut out = Alignment::default();
    for (key, docs) in &source_groups {
        let Some(group_targets) = target_groups.remove(key) else {
            log::warn!("group {key} has no target documents; skipped");
            out.skipped_groups.push(key.to_string());
            continue;
        };
        let s = embed_documents(docs, model, pipeline, Side::Source)?;
        let t = embed_documents(&group_targets, model, pipeline, Side::Target)?;
        out.pairs
            .extend(align_embedded(&s, &t, options.top_n, options.mutual_best, Some(key))?);
    }
    for key in target_groups.keys() {
        log::warn!("group {key} has no source documents; skipped");
        out.skipped_groups.push(key.to_string());
    }
    out.skipped_groups.sort();
    Ok(out)
}
