//! Bilingual dictionary and the dictionary-based comparability measures.
//!
//! Documents are token lists that have already been through the text pipeline
//! configured for the dictionary. The binary measure works on distinct terms
//! (documents as bags); OOV and matching rates divide by raw token counts.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::io::BufRead;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::vsm::{term_frequencies, Vocabulary};

/// Which side of the dictionary a term or document belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Source,
    Target,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Source => Side::Target,
            Side::Target => Side::Source,
        }
    }
}

/// A translation unit: synonymous source terms and their target translations.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Synset {
    pub source: Vec<String>,
    pub target: Vec<String>,
}

impl Synset {
    pub fn new<S: Into<String>>(
        source: impl IntoIterator<Item = S>,
        target: impl IntoIterator<Item = S>,
    ) -> Self {
        let norm = |it: Vec<String>| -> Vec<String> {
            let set: BTreeSet<String> = it.into_iter().collect();
            set.into_iter().collect()
        };
        Self {
            source: norm(source.into_iter().map(Into::into).collect()),
            target: norm(target.into_iter().map(Into::into).collect()),
        }
    }

    fn side(&self, side: Side) -> &[String] {
        match side {
            Side::Source => &self.source,
            Side::Target => &self.target,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BilingualDictionary {
    synsets: Vec<Synset>,
    source_index: HashMap<String, Vec<usize>>,
    target_index: HashMap<String, Vec<usize>>,
    /// term -> distinct translations on the opposite side, sorted
    source_translations: HashMap<String, Vec<String>>,
    target_translations: HashMap<String, Vec<String>>,
}

impl BilingualDictionary {
    /// Builds the indices; identical synsets are merged.
    pub fn from_synsets(synsets: impl IntoIterator<Item = Synset>) -> Self {
        let mut seen = HashSet::new();
        let mut dict = BilingualDictionary::default();
        for synset in synsets {
            if synset.source.is_empty() || synset.target.is_empty() || !seen.insert(synset.clone()) {
                continue;
            }
            let id = dict.synsets.len();
            for term in &synset.source {
                dict.source_index.entry(term.clone()).or_default().push(id);
            }
            for term in &synset.target {
                dict.target_index.entry(term.clone()).or_default().push(id);
            }
            dict.synsets.push(synset);
        }
        dict.source_translations = dict.translation_table(Side::Source);
        dict.target_translations = dict.translation_table(Side::Target);
        dict
    }

    fn translation_table(&self, side: Side) -> HashMap<String, Vec<String>> {
        self.index(side)
            .iter()
            .map(|(term, ids)| {
                let set: BTreeSet<&String> = ids
                    .iter()
                    .flat_map(|&id| self.synsets[id].side(side.opposite()))
                    .collect();
                (term.clone(), set.into_iter().cloned().collect())
            })
            .collect()
    }

    /// Reads the `src1|src2<TAB>tgt1|tgt2` format; blank lines and `#` comments are skipped.
    pub fn read<R: BufRead>(reader: R) -> Result<Self> {
        let mut synsets = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let line_no = idx + 1;
            let line = line.map_err(|e| Error::io("<dictionary>", e))?;
            let trimmed = line.trim_end_matches(['\r', '\n']);
            if trimmed.trim().is_empty() || trimmed.trim_start().starts_with('#') {
                continue;
            }
            let malformed = |reason: &str| Error::MalformedRecord {
                line: line_no,
                reason: reason.to_string(),
            };
            let (src, tgt) = trimmed
                .split_once('\t')
                .ok_or_else(|| malformed("expected one tab between source and target terms"))?;
            if tgt.contains('\t') {
                return Err(malformed("more than one tab"));
            }
            let split = |s: &str| -> Option<Vec<String>> {
                let terms: Vec<String> = s.split('|').map(|t| t.trim().to_string()).collect();
                (!terms.iter().any(String::is_empty)).then_some(terms)
            };
            let source = split(src).ok_or_else(|| malformed("empty source term"))?;
            let target = split(tgt).ok_or_else(|| malformed("empty target term"))?;
            synsets.push(Synset::new(source, target));
        }
        Ok(Self::from_synsets(synsets))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read(std::io::BufReader::new(file)).map_err(|e| match e {
            Error::Io { source, .. } => Error::io(path, source),
            other => other,
        })
    }

    pub fn synsets(&self) -> &[Synset] {
        &self.synsets
    }

    pub fn len(&self) -> usize {
        self.synsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.synsets.is_empty()
    }

    fn index(&self, side: Side) -> &HashMap<String, Vec<usize>> {
        match side {
            Side::Source => &self.source_index,
            Side::Target => &self.target_index,
        }
    }

    pub fn contains(&self, side: Side, term: &str) -> bool {
        self.index(side).contains_key(term)
    }

    pub fn synset_ids(&self, side: Side, term: &str) -> &[usize] {
        self.index(side).get(term).map_or(&[], Vec::as_slice)
    }

    /// Distinct opposite-side terms sharing a synset with `term`, sorted.
    pub fn translations(&self, side: Side, term: &str) -> &[String] {
        let table = match side {
            Side::Source => &self.source_translations,
            Side::Target => &self.target_translations,
        };
        table.get(term).map_or(&[], Vec::as_slice)
    }

    /// Terms of one side (`V_s` or `V_t`), sorted.
    pub fn vocabulary(&self, side: Side) -> Vec<&str> {
        let mut terms: Vec<&str> = self.index(side).keys().map(String::as_str).collect();
        terms.sort_unstable();
        terms
    }

    /// Number of distinct `(source term, target term)` translation pairs.
    pub fn pair_count(&self) -> usize {
        self.source_translations.values().map(Vec::len).sum()
    }
}

fn bag<S: AsRef<str>>(doc: &[S]) -> HashSet<&str> {
    doc.iter().map(AsRef::as_ref).collect()
}

/// 1 when some translation of `word` (a `side` term) occurs in `other_doc`.
pub fn trans(word: &str, side: Side, other_doc: &HashSet<&str>, dict: &BilingualDictionary) -> bool {
    dict.translations(side, word)
        .iter()
        .any(|t| other_doc.contains(t.as_str()))
}

/// Fraction of the distinct dictionary terms of `from` (a `from_side` document)
/// having a translation in `to`; 0 when `from` has no dictionary term.
pub fn bin_directed<S: AsRef<str>, T: AsRef<str>>(
    from: &[S],
    from_side: Side,
    to: &[T],
    dict: &BilingualDictionary,
) -> f64 {
    let to_bag = bag(to);
    let mut in_vocab = 0usize;
    let mut translated = 0usize;
    for word in bag(from) {
        if dict.contains(from_side, word) {
            in_vocab += 1;
            if trans(word, from_side, &to_bag, dict) {
                translated += 1;
            }
        }
    }
    if in_vocab == 0 {
        0.0
    } else {
        translated as f64 / in_vocab as f64
    }
}

/// `bin(d_s, d_t)`.
pub fn bin_measure<S: AsRef<str>, T: AsRef<str>>(d_s: &[S], d_t: &[T], dict: &BilingualDictionary) -> f64 {
    bin_directed(d_s, Side::Source, d_t, dict)
}

/// Mean of the two directed binary measures.
pub fn bin_symmetric<S: AsRef<str>, T: AsRef<str>>(d_s: &[S], d_t: &[T], dict: &BilingualDictionary) -> f64 {
    let forward = bin_directed(d_s, Side::Source, d_t, dict);
    let backward = bin_directed(d_t, Side::Target, d_s, dict);
    (forward + backward) / 2.0
}

/// Pooled binary overlap: tokens of either document with a translation in the
/// other, over the summed token counts. 0 for two empty documents.
pub fn bin_pooled<S: AsRef<str>, T: AsRef<str>>(d_s: &[S], d_t: &[T], dict: &BilingualDictionary) -> f64 {
    let total = d_s.len() + d_t.len();
    if total == 0 {
        return 0.0;
    }
    let s_bag = bag(d_s);
    let t_bag = bag(d_t);
    let forward = d_s
        .iter()
        .filter(|w| trans(w.as_ref(), Side::Source, &t_bag, dict))
        .count();
    let backward = d_t
        .iter()
        .filter(|w| trans(w.as_ref(), Side::Target, &s_bag, dict))
        .count();
    (forward + backward) as f64 / total as f64
}

/// Cosine over one attribute per translation pair `(w_s, w_t)`: the source
/// attribute is the tfidf of `w_s` in `d_s`, the target attribute the tfidf of
/// `w_t` in `d_t`. Weights come from per-side collection statistics.
pub fn dict_cosine<S: AsRef<str>, T: AsRef<str>>(
    d_s: &[S],
    d_t: &[T],
    dict: &BilingualDictionary,
    source_stats: &Vocabulary,
    target_stats: &Vocabulary,
) -> f64 {
    let s_weights: HashMap<&str, f64> = term_frequencies(d_s)
        .into_iter()
        .map(|(w, tf)| (w, source_stats.weight_of(w, tf)))
        .filter(|(_, x)| *x != 0.0)
        .collect();
    let t_weights: HashMap<&str, f64> = term_frequencies(d_t)
        .into_iter()
        .map(|(w, tf)| (w, target_stats.weight_of(w, tf)))
        .filter(|(_, x)| *x != 0.0)
        .collect();

    let mut dot = 0.0;
    let mut s_norm2 = 0.0;
    for (&w, &x) in &s_weights {
        let translations = dict.translations(Side::Source, w);
        s_norm2 += x * x * translations.len() as f64;
        for t in translations {
            if let Some(y) = t_weights.get(t.as_str()) {
                dot += x * y;
            }
        }
    }
    let t_norm2: f64 = t_weights
        .iter()
        .map(|(&w, &y)| y * y * dict.translations(Side::Target, w).len() as f64)
        .sum();
    let denom = s_norm2.sqrt() * t_norm2.sqrt();
    if denom == 0.0 {
        0.0
    } else {
        dot / denom
    }
}

/// Counts behind the OOV and matching rates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MatchReport {
    /// Size of a maximum one-to-one matching between distinct source and target
    /// terms that translate each other.
    pub matched_pairs: usize,
    pub source_oov: usize,
    pub target_oov: usize,
    pub source_len: usize,
    pub target_len: usize,
}

pub fn match_report<S: AsRef<str>, T: AsRef<str>>(
    d_s: &[S],
    d_t: &[T],
    dict: &BilingualDictionary,
) -> MatchReport {
    let source_oov = d_s
        .iter()
        .filter(|w| !dict.contains(Side::Source, w.as_ref()))
        .count();
    let target_oov = d_t
        .iter()
        .filter(|w| !dict.contains(Side::Target, w.as_ref()))
        .count();
    MatchReport {
        matched_pairs: max_translation_matching(d_s, d_t, dict),
        source_oov,
        target_oov,
        source_len: d_s.len(),
        target_len: d_t.len(),
    }
}

/// `½ (|oov_s| / |d_s| + |oov_t| / |d_t|)`.
pub fn oov_rate<S: AsRef<str>, T: AsRef<str>>(d_s: &[S], d_t: &[T], dict: &BilingualDictionary) -> Result<f64> {
    if d_s.is_empty() || d_t.is_empty() {
        return Err(Error::UndefinedRate("oov rate of an empty document".into()));
    }
    let r = match_report(d_s, d_t, dict);
    Ok(0.5 * (r.source_oov as f64 / r.source_len as f64 + r.target_oov as f64 / r.target_len as f64))
}

/// `|w_s <-> w_t| / (|d_s| + |d_t|)`.
pub fn matching_rate<S: AsRef<str>, T: AsRef<str>>(
    d_s: &[S],
    d_t: &[T],
    dict: &BilingualDictionary,
) -> Result<f64> {
    if d_s.is_empty() && d_t.is_empty() {
        return Err(Error::UndefinedRate("matching rate of two empty documents".into()));
    }
    let r = match_report(d_s, d_t, dict);
    Ok(r.matched_pairs as f64 / (r.source_len + r.target_len) as f64)
}

/// Maximum bipartite matching between distinct source and target terms, with an
/// edge wherever the two terms share a synset (augmenting paths).
fn max_translation_matching<S: AsRef<str>, T: AsRef<str>>(
    d_s: &[S],
    d_t: &[T],
    dict: &BilingualDictionary,
) -> usize {
    let mut sources: Vec<&str> = bag(d_s).into_iter().collect();
    sources.sort_unstable();
    let mut targets: Vec<&str> = bag(d_t).into_iter().collect();
    targets.sort_unstable();
    let target_pos: HashMap<&str, usize> = targets.iter().enumerate().map(|(i, t)| (*t, i)).collect();
    let adjacency: Vec<Vec<usize>> = sources
        .iter()
        .map(|s| {
            dict.translations(Side::Source, s)
                .iter()
                .filter_map(|t| target_pos.get(t.as_str()).copied())
                .collect()
        })
        .collect();

    fn augment(u: usize, adj: &[Vec<usize>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for &v in &adj[u] {
            if seen[v] {
                continue;
            }
            seen[v] = true;
            if owner[v].is_none_or(|w| augment(w, adj, seen, owner)) {
                owner[v] = Some(u);
                return true;
            }
        }
        false
    }

    let mut owner = vec![None; targets.len()];
    let mut matched = 0;
    for u in 0..sources.len() {
        let mut seen = vec![false; targets.len()];
        if augment(u, &adjacency, &mut seen, &mut owner) {
            matched += 1;
        }
    }
    matched
}
