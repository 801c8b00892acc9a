//! Seeded synthetic bilingual corpora.
//!
//! Source documents are drawn from a mixture of topics over an invented Latin
//! lexicon plus a shared background vocabulary. Targets are word-by-word
//! substitutions into an invented Arabic-script lexicon; each source word has
//! one or more target synonyms and every occurrence picks one of them.
//! Documents also mention a few named entities, which carry story identity
//! across topics.

use std::collections::{BTreeMap, HashMap, HashSet};

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bidict::{BilingualDictionary, Synset};
use crate::corpus::{AlignedCorpus, Document};
use crate::error::Result;

const SOURCE_ONSETS: &[&str] = &["b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z"];
const SOURCE_VOWELS: &[&str] = &["a", "e", "i", "o", "u"];
const TARGET_LETTERS: &[char] = &[
    'ب', 'ت', 'ث', 'ج', 'ح', 'خ', 'د', 'ذ', 'ر', 'ز', 'س', 'ش', 'ص', 'ض', 'ط', 'ظ', 'ع', 'غ', 'ف', 'ق',
    'ك', 'ل', 'م', 'ن', 'ه',
];

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticConfig {
    pub n_topics: usize,
    pub words_per_topic: usize,
    pub background_words: usize,
    /// Share of tokens drawn from the background vocabulary.
    pub background_rate: f64,
    pub min_doc_len: usize,
    pub max_doc_len: usize,
    pub max_topics_per_doc: usize,
    pub max_synonyms: usize,
    pub entities: usize,
    pub max_entities_per_doc: usize,
    /// Share of tokens that are entity mentions.
    pub entity_rate: f64,
    pub source_language: String,
    pub target_language: String,
    pub seed: u64,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        Self {
            n_topics: 20,
            words_per_topic: 60,
            background_words: 80,
            background_rate: 0.35,
            min_doc_len: 30,
            max_doc_len: 60,
            max_topics_per_doc: 3,
            max_synonyms: 2,
            entities: 300,
            max_entities_per_doc: 2,
            entity_rate: 0.1,
            source_language: "en".into(),
            target_language: "ar".into(),
            seed: 42,
        }
    }
}

/// Topic weights and entities of one document.
#[derive(Debug, Clone, PartialEq)]
pub struct Mixture {
    pub topics: Vec<usize>,
    pub weights: Vec<f64>,
    pub entities: Vec<usize>,
}

impl Mixture {
    pub fn primary(&self) -> usize {
        self.topics[0]
    }
}

/// Invented vocabularies and the substitution table between them.
#[derive(Debug, Clone)]
pub struct Lexicon {
    topics: Vec<Vec<String>>,
    background: Vec<String>,
    entities: Vec<String>,
    cipher: HashMap<String, Vec<String>>,
}

impl Lexicon {
    fn generate(config: &SyntheticConfig, rng: &mut ChaCha8Rng) -> Self {
        let mut seen = HashSet::new();
        let mut source_word = |rng: &mut ChaCha8Rng| loop {
            let syllables = rng.random_range(2..=3);
            let w: String = (0..syllables)
                .map(|_| {
                    format!(
                        "{}{}",
                        SOURCE_ONSETS.choose(rng).unwrap(),
                        SOURCE_VOWELS.choose(rng).unwrap()
                    )
                })
                .collect();
            if seen.insert(w.clone()) {
                return w;
            }
        };
        let topics: Vec<Vec<String>> = (0..config.n_topics)
            .map(|_| (0..config.words_per_topic).map(|_| source_word(rng)).collect())
            .collect();
        let background: Vec<String> = (0..config.background_words).map(|_| source_word(rng)).collect();
        let entities: Vec<String> = (0..config.entities).map(|_| source_word(rng)).collect();

        let mut target_seen = HashSet::new();
        let mut cipher = HashMap::new();
        for w in topics.iter().flatten().chain(&background).chain(&entities) {
            let n = if entities.contains(w) {
                1
            } else {
                rng.random_range(1..=config.max_synonyms.max(1))
            };
            let synonyms: Vec<String> = (0..n)
                .map(|_| loop {
                    let len = rng.random_range(3..=5);
                    let t: String = (0..len).map(|_| *TARGET_LETTERS.choose(rng).unwrap()).collect();
                    if target_seen.insert(t.clone()) {
                        break t;
                    }
                })
                .collect();
            cipher.insert(w.clone(), synonyms);
        }
        Self {
            topics,
            background,
            entities,
            cipher,
        }
    }

    pub fn topic_words(&self, topic: usize) -> &[String] {
        &self.topics[topic]
    }

    pub fn background(&self) -> &[String] {
        &self.background
    }

    pub fn entities(&self) -> &[String] {
        &self.entities
    }

    pub fn synonyms(&self, word: &str) -> &[String] {
        self.cipher.get(word).map_or(&[], Vec::as_slice)
    }

    /// Every `(source word, target synonym)` pair, sorted.
    pub fn translation_pairs(&self) -> Vec<(&str, &str)> {
        let mut pairs: Vec<(&str, &str)> = self
            .cipher
            .iter()
            .flat_map(|(s, ts)| ts.iter().map(move |t| (s.as_str(), t.as_str())))
            .collect();
        pairs.sort_unstable();
        pairs
    }
}

/// Deterministic generator; every draw advances one seeded stream.
#[derive(Debug, Clone)]
pub struct Generator {
    config: SyntheticConfig,
    lexicon: Lexicon,
    rank_weights: WeightedIndex<f64>,
    background_weights: WeightedIndex<f64>,
    rng: ChaCha8Rng,
}

fn zipf_weights(n: usize) -> WeightedIndex<f64> {
    WeightedIndex::new((0..n).map(|r| 1.0 / (r as f64 + 1.0))).expect("non-empty vocabulary")
}

impl Generator {
    pub fn new(config: SyntheticConfig) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let lexicon = Lexicon::generate(&config, &mut rng);
        Self {
            rank_weights: zipf_weights(config.words_per_topic),
            background_weights: zipf_weights(config.background_words),
            lexicon,
            config,
            rng,
        }
    }

    pub fn config(&self) -> &SyntheticConfig {
        &self.config
    }

    pub fn lexicon(&self) -> &Lexicon {
        &self.lexicon
    }

    /// One to `max_topics_per_doc` distinct topics, the first one dominant.
    pub fn mixture(&mut self) -> Mixture {
        let n = self.rng.random_range(1..=self.config.max_topics_per_doc.max(1));
        let mut all: Vec<usize> = (0..self.config.n_topics).collect();
        all.shuffle(&mut self.rng);
        let topics = all[..n].to_vec();
        let mut weights: Vec<f64> = (0..n).map(|_| self.rng.random_range(0.2..1.0)).collect();
        weights.sort_by(|a, b| b.total_cmp(a));
        weights[0] += 1.0;
        let entities = self.entities();
        Mixture {
            topics,
            weights,
            entities,
        }
    }

    fn entities(&mut self) -> Vec<usize> {
        if self.config.entities == 0 || self.config.max_entities_per_doc == 0 {
            return Vec::new();
        }
        let n = self.rng.random_range(1..=self.config.max_entities_per_doc);
        (0..n).map(|_| self.rng.random_range(0..self.config.entities)).collect()
    }

    /// Mixture sharing the dominant topic of `base`.
    pub fn related_mixture(&mut self, base: &Mixture) -> Mixture {
        let mut m = self.mixture();
        if let Some(p) = m.topics.iter().position(|&t| t == base.primary()) {
            m.topics.swap(0, p);
        } else {
            m.topics[0] = base.primary();
        }
        m
    }

    fn topic_word(&mut self, topic: usize) -> String {
        let r = self.rank_weights.sample(&mut self.rng);
        self.lexicon.topics[topic][r].clone()
    }

    fn word(&mut self, mixture: &Mixture) -> String {
        if !mixture.entities.is_empty() && self.rng.random_bool(self.config.entity_rate) {
            let e = *mixture.entities.choose(&mut self.rng).unwrap();
            return self.lexicon.entities[e].clone();
        }
        if self.rng.random_bool(self.config.background_rate) {
            let r = self.background_weights.sample(&mut self.rng);
            return self.lexicon.background[r].clone();
        }
        let t = WeightedIndex::new(&mixture.weights)
            .expect("positive weights")
            .sample(&mut self.rng);
        self.topic_word(mixture.topics[t])
    }

    pub fn doc_len(&mut self) -> usize {
        self.rng.random_range(self.config.min_doc_len..=self.config.max_doc_len)
    }

    pub fn source_tokens(&mut self, mixture: &Mixture, len: usize) -> Vec<String> {
        (0..len).map(|_| self.word(mixture)).collect()
    }

    /// Substitutes each word by one of its target synonyms.
    pub fn translate(&mut self, tokens: &[String]) -> Vec<String> {
        tokens
            .iter()
            .map(|w| {
                self.lexicon
                    .synonyms(w)
                    .choose(&mut self.rng)
                    .cloned()
                    .unwrap_or_else(|| w.clone())
            })
            .collect()
    }

    /// Replaces a `fraction` of positions, chosen at random, with words from
    /// topics outside `mixture`.
    pub fn inject_noise(&mut self, tokens: &[String], mixture: &Mixture, fraction: f64) -> Vec<String> {
        let mut out = tokens.to_vec();
        let n = (fraction * out.len() as f64).round() as usize;
        let mut positions: Vec<usize> = (0..out.len()).collect();
        positions.shuffle(&mut self.rng);
        let off_topics: Vec<usize> = (0..self.config.n_topics)
            .filter(|t| !mixture.topics.contains(t))
            .collect();
        for &p in &positions[..n.min(out.len())] {
            let topic = *off_topics.choose(&mut self.rng).unwrap_or(&0);
            out[p] = self.topic_word(topic);
        }
        out
    }

    /// Parallel corpus with ids `{prefix}{i}` on both sides.
    pub fn parallel_corpus(&mut self, n: usize, prefix: &str) -> Result<(AlignedCorpus, Vec<Mixture>)> {
        self.corpus_with_noise(n, prefix, 0.0)
    }

    /// Parallel corpus whose target documents have a `noise` fraction of
    /// their words replaced by off-topic words before substitution.
    pub fn corpus_with_noise(&mut self, n: usize, prefix: &str, noise: f64) -> Result<(AlignedCorpus, Vec<Mixture>)> {
        let mut sources = Vec::with_capacity(n);
        let mut targets = Vec::with_capacity(n);
        let mut mixtures = Vec::with_capacity(n);
        for i in 0..n {
            let mixture = self.mixture();
            let len = self.doc_len();
            let src = self.source_tokens(&mixture, len);
            let noisy = if noise > 0.0 {
                self.inject_noise(&src, &mixture, noise)
            } else {
                src.clone()
            };
            let tgt = self.translate(&noisy);
            sources.push(Document::new(format!("{prefix}{i:04}"), &self.config.source_language, src.join(" ")));
            targets.push(Document::new(format!("{prefix}{i:04}"), &self.config.target_language, tgt.join(" ")));
            mixtures.push(mixture);
        }
        Ok((AlignedCorpus::new(sources, targets)?, mixtures))
    }

    /// Dictionary holding each translation pair with probability `coverage`.
    /// With probability `ambiguity` an entry also lists the translations of
    /// another random word, as polysemous entries do.
    pub fn dictionary(&mut self, coverage: f64, ambiguity: f64) -> BilingualDictionary {
        let mut by_source: BTreeMap<String, Vec<String>> = BTreeMap::new();
        let pairs: Vec<(String, String)> = self
            .lexicon
            .translation_pairs()
            .into_iter()
            .map(|(s, t)| (s.to_string(), t.to_string()))
            .collect();
        for (s, t) in &pairs {
            if self.rng.random_bool(coverage) {
                by_source.entry(s.clone()).or_default().push(t.clone());
            }
        }
        let sources: Vec<String> = by_source.keys().cloned().collect();
        for s in &sources {
            if self.rng.random_bool(ambiguity) {
                let (_, other) = pairs.choose(&mut self.rng).expect("non-empty lexicon");
                by_source.get_mut(s).expect("listed").push(other.clone());
            }
        }
        BilingualDictionary::from_synsets(by_source.into_iter().map(|(s, ts)| Synset::new([s], ts)))
    }

    /// Comparable collections split into groups. In each group, `planted`
    /// source documents have a counterpart made from the same story with a
    /// `rewrite` fraction of words redrawn; the remaining documents on each
    /// side are independent stories sharing a planted story's main topic.
    /// Returns sources, targets and the planted source-to-target ids.
    pub fn planted_groups(
        &mut self,
        groups: usize,
        docs_per_side: usize,
        planted: usize,
        rewrite: f64,
    ) -> (Vec<Document>, Vec<Document>, HashMap<String, String>) {
        let mut sources = Vec::new();
        let mut targets = Vec::new();
        let mut gold = HashMap::new();
        for g in 0..groups {
            let key = format!("2012-{:02}", g + 1);
            let mut group_sources = Vec::new();
            let mut group_targets = Vec::new();
            let mut stories = Vec::new();
            for p in 0..planted {
                let mixture = self.mixture();
                let len = self.doc_len();
                let src = self.source_tokens(&mixture, len);
                let rewritten: Vec<String> = src
                    .iter()
                    .map(|w| {
                        if self.rng.random_bool(rewrite) {
                            self.word(&mixture)
                        } else {
                            w.clone()
                        }
                    })
                    .collect();
                let tgt = self.translate(&rewritten);
                let (sid, tid) = (format!("g{g:02}e{p:03}"), format!("g{g:02}a{p:03}"));
                gold.insert(sid.clone(), tid.clone());
                group_sources.push((sid, src));
                group_targets.push((tid, tgt));
                stories.push(mixture);
            }
            for p in planted..docs_per_side {
                let base = stories[p % stories.len().max(1)].clone();
                let m = self.related_mixture(&base);
                let len = self.doc_len();
                let src = self.source_tokens(&m, len);
                group_sources.push((format!("g{g:02}e{p:03}"), src));
                let m = self.related_mixture(&base);
                let len = self.doc_len();
                let tgt_src = self.source_tokens(&m, len);
                let tgt = self.translate(&tgt_src);
                group_targets.push((format!("g{g:02}a{p:03}"), tgt));
            }
            group_sources.shuffle(&mut self.rng);
            group_targets.shuffle(&mut self.rng);
            for (id, toks) in group_sources {
                sources.push(Document::new(id, &self.config.source_language, toks.join(" ")).with_group(&key));
            }
            for (id, toks) in group_targets {
                targets.push(Document::new(id, &self.config.target_language, toks.join(" ")).with_group(&key));
            }
        }
        (sources, targets, gold)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_corpus() {
        let a = Generator::new(SyntheticConfig::default()).parallel_corpus(20, "d").unwrap().0;
        let b = Generator::new(SyntheticConfig::default()).parallel_corpus(20, "d").unwrap().0;
        assert_eq!(a.source_docs(), b.source_docs());
        assert_eq!(a.target_docs(), b.target_docs());
    }

    #[test]
    fn targets_are_substitutions() {
        let mut g = Generator::new(SyntheticConfig::default());
        let (corpus, _) = g.parallel_corpus(5, "d").unwrap();
        for (s, t) in corpus.pairs() {
            let sw: Vec<&str> = s.text.split(' ').collect();
            let tw: Vec<&str> = t.text.split(' ').collect();
            assert_eq!(sw.len(), tw.len());
            for (a, b) in sw.iter().zip(&tw) {
                assert!(g.lexicon().synonyms(a).iter().any(|x| x == b));
            }
        }
    }

    #[test]
    fn planted_group_shape() {
        let mut g = Generator::new(SyntheticConfig::default());
        let (s, t, gold) = g.planted_groups(2, 10, 4, 0.2);
        assert_eq!((s.len(), t.len(), gold.len()), (20, 20, 8));
        assert!(s.iter().all(|d| d.group_key.is_some()));
    }
}
