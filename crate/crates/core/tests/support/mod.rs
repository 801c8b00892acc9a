//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fs;
use std::path::{Path, PathBuf};

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use xling_core::bidict::{
    bin_measure, bin_symmetric, dict_cosine, matching_rate, oov_rate, BilingualDictionary, Side, Synset,
};
use xling_core::corpus::{parse_interlanguage_links, strip_wiki_markup};
use xling_core::lsi::{truncated_svd, LsiModel, ModelVocabulary, SvdOptions, DEFAULT_RANK};
use xling_core::sparse::CscMatrix;
use xling_core::synthetic::{Generator, SyntheticConfig};
use xling_core::textprep::{PipelineConfig, TextPipeline};
use xling_core::vsm::Vocabulary;

/// Fixtures of the core crate, also when included from another crate's tests.
pub fn fixture_dir() -> PathBuf {
    let here = Path::new(env!("CARGO_MANIFEST_DIR"));
    let own = here.join("tests/fixtures");
    if own.join("wikitext").is_dir() {
        own
    } else {
        here.join("../core/tests/fixtures")
    }
}

pub struct WikitextCase {
    pub name: String,
    pub wikitext: String,
    pub plain: String,
    pub links: Vec<(String, String)>,
}

/// Every `<name>.wiki` under `dir` with its `.txt` and `.links` golden files.
pub fn wikitext_cases(dir: &Path) -> Vec<WikitextCase> {
    let mut names: Vec<String> = fs::read_dir(dir)
        .unwrap()
        .filter_map(|e| {
            let path = e.unwrap().path();
            (path.extension()? == "wiki").then(|| path.file_stem().unwrap().to_string_lossy().into_owned())
        })
        .collect();
    names.sort();
    names
        .into_iter()
        .map(|name| {
            let read = |ext: &str| fs::read_to_string(dir.join(format!("{name}.{ext}"))).unwrap();
            let links = read("links")
                .lines()
                .map(|l| {
                    let (code, title) = l.split_once('\t').unwrap();
                    (code.to_string(), title.to_string())
                })
                .collect();
            WikitextCase {
                wikitext: read("wiki"),
                plain: read("txt").trim_end_matches('\n').to_string(),
                links,
                name,
            }
        })
        .collect()
}

/// Random sparse matrix with entries in (0, 1] at the given density; every
/// column gets at least one entry.
pub fn random_sparse(rng: &mut ChaCha8Rng, m: usize, n: usize, density: f64) -> DMatrix<f64> {
    let mut a = DMatrix::zeros(m, n);
    for j in 0..n {
        for i in 0..m {
            if rng.random_bool(density) {
                a[(i, j)] = rng.random_range(0.01..=1.0);
            }
        }
        let i = rng.random_range(0..m);
        a[(i, j)] = rng.random_range(0.01..=1.0);
    }
    a
}

pub fn to_csc(a: &DMatrix<f64>) -> CscMatrix {
    CscMatrix::from_dense(a)
}

/// Full SVD of a dense matrix with singular values in descending order.
pub fn dense_svd(a: &DMatrix<f64>) -> (DMatrix<f64>, Vec<f64>, DMatrix<f64>) {
    let svd = a.clone().svd(true, true);
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let u = svd.u.unwrap().select_columns(&order);
    let v = svd.v_t.unwrap().transpose().select_columns(&order);
    let s = order.iter().map(|&i| svd.singular_values[i]).collect();
    (u, s, v)
}

/// Largest principal angle between the column spans of two matrices with
/// orthonormal columns.
pub fn max_principal_angle(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    let cosines = (a.transpose() * b).singular_values();
    let smallest = cosines.iter().copied().fold(f64::INFINITY, f64::min);
    smallest.clamp(-1.0, 1.0).acos()
}

pub struct ToyDictionary {
    pub synsets: Vec<(Vec<String>, Vec<String>)>,
}

impl ToyDictionary {
    pub fn random(rng: &mut ChaCha8Rng, vocab: usize, n_synsets: usize) -> Self {
        let pick = |rng: &mut ChaCha8Rng, prefix: &str| -> Vec<String> {
            let n = rng.random_range(1..=2);
            (0..n).map(|_| format!("{prefix}{}", rng.random_range(0..vocab))).collect()
        };
        let synsets = (0..n_synsets).map(|_| (pick(rng, "s"), pick(rng, "t"))).collect();
        Self { synsets }
    }

    pub fn build(&self) -> BilingualDictionary {
        BilingualDictionary::from_synsets(self.synsets.iter().map(|(s, t)| Synset::new(s.clone(), t.clone())))
    }

    /// Every `(w_s, w_t, synset)` triple.
    pub fn triples(&self) -> Vec<(&str, &str, usize)> {
        let mut out = Vec::new();
        for (k, (s, t)) in self.synsets.iter().enumerate() {
            for ws in s {
                for wt in t {
                    out.push((ws.as_str(), wt.as_str(), k));
                }
            }
        }
        out
    }

    pub fn source_terms(&self) -> HashSet<&str> {
        self.synsets.iter().flat_map(|(s, _)| s.iter().map(String::as_str)).collect()
    }

    pub fn target_terms(&self) -> HashSet<&str> {
        self.synsets.iter().flat_map(|(_, t)| t.iter().map(String::as_str)).collect()
    }

    /// Distinct translation pairs in a fixed order.
    pub fn pairs(&self) -> Vec<(&str, &str)> {
        let set: BTreeSet<(&str, &str)> = self.triples().into_iter().map(|(s, t, _)| (s, t)).collect();
        set.into_iter().collect()
    }
}

pub fn random_doc(rng: &mut ChaCha8Rng, prefix: &str, vocab: usize, max_len: usize) -> Vec<String> {
    let n = rng.random_range(0..=max_len);
    (0..n).map(|_| format!("{prefix}{}", rng.random_range(0..vocab))).collect()
}

/// Directed binary measure by enumeration of dictionary triples.
pub fn brute_bin(from: &[String], to: &[String], triples: &[(&str, &str, usize)], from_source: bool) -> f64 {
    let from_bag: BTreeSet<&str> = from.iter().map(String::as_str).collect();
    let to_bag: BTreeSet<&str> = to.iter().map(String::as_str).collect();
    let (mut in_vocab, mut translated) = (0usize, 0usize);
    for w in from_bag {
        let mine: Vec<&(&str, &str, usize)> = triples
            .iter()
            .filter(|(s, t, _)| if from_source { *s == w } else { *t == w })
            .collect();
        if mine.is_empty() {
            continue;
        }
        in_vocab += 1;
        let hit = mine
            .iter()
            .any(|(s, t, _)| to_bag.contains(if from_source { t } else { s }));
        if hit {
            translated += 1;
        }
    }
    if in_vocab == 0 {
        0.0
    } else {
        translated as f64 / in_vocab as f64
    }
}

pub fn brute_oov(d_s: &[String], d_t: &[String], toy: &ToyDictionary) -> Option<f64> {
    if d_s.is_empty() || d_t.is_empty() {
        return None;
    }
    let (vs, vt) = (toy.source_terms(), toy.target_terms());
    let os = d_s.iter().filter(|w| !vs.contains(w.as_str())).count();
    let ot = d_t.iter().filter(|w| !vt.contains(w.as_str())).count();
    Some(0.5 * (os as f64 / d_s.len() as f64 + ot as f64 / d_t.len() as f64))
}

/// Largest set of translation pairs using each distinct term at most once,
/// found by exhaustive search.
pub fn brute_matching(d_s: &[String], d_t: &[String], triples: &[(&str, &str, usize)]) -> usize {
    let sources: Vec<&str> = d_s.iter().map(String::as_str).collect::<BTreeSet<_>>().into_iter().collect();
    let targets: BTreeSet<&str> = d_t.iter().map(String::as_str).collect();
    let edges: Vec<Vec<&str>> = sources
        .iter()
        .map(|s| {
            triples
                .iter()
                .filter(|(ws, wt, _)| ws == s && targets.contains(wt))
                .map(|(_, wt, _)| *wt)
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect()
        })
        .collect();
    fn search<'a>(i: usize, edges: &[Vec<&'a str>], used: &mut Vec<&'a str>) -> usize {
        if i == edges.len() {
            return 0;
        }
        let mut best = search(i + 1, edges, used);
        for t in &edges[i] {
            if !used.contains(t) {
                used.push(t);
                best = best.max(1 + search(i + 1, edges, used));
                used.pop();
            }
        }
        best
    }
    search(0, &edges, &mut Vec::new())
}

pub fn brute_matching_rate(d_s: &[String], d_t: &[String], triples: &[(&str, &str, usize)]) -> Option<f64> {
    if d_s.is_empty() && d_t.is_empty() {
        return None;
    }
    Some(brute_matching(d_s, d_t, triples) as f64 / (d_s.len() + d_t.len()) as f64)
}

/// Document frequencies over a collection, counting each document once.
pub fn document_frequencies(collection: &[Vec<String>]) -> HashMap<String, usize> {
    let mut df = HashMap::new();
    for doc in collection {
        let bag: BTreeSet<&String> = doc.iter().collect();
        for w in bag {
            *df.entry(w.clone()).or_insert(0) += 1;
        }
    }
    df
}

/// `tf * ln(N / df)`, zero for unseen terms.
pub fn hand_tfidf(term: &str, doc: &[String], df: &HashMap<String, usize>, n_docs: usize) -> f64 {
    let tf = doc.iter().filter(|w| *w == term).count();
    match df.get(term) {
        Some(&d) if tf > 0 => tf as f64 * (n_docs as f64 / d as f64).ln(),
        _ => 0.0,
    }
}

/// Cosine of the dense per-pair attribute vectors.
#[allow(clippy::too_many_arguments)]
pub fn dense_dict_cosine(
    d_s: &[String],
    d_t: &[String],
    pairs: &[(&str, &str)],
    df_s: &HashMap<String, usize>,
    n_s: usize,
    df_t: &HashMap<String, usize>,
    n_t: usize,
) -> f64 {
    let x: Vec<f64> = pairs.iter().map(|(s, _)| hand_tfidf(s, d_s, df_s, n_s)).collect();
    let y: Vec<f64> = pairs.iter().map(|(_, t)| hand_tfidf(t, d_t, df_t, n_t)).collect();
    let dot: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
    let nx = x.iter().map(|a| a * a).sum::<f64>().sqrt();
    let ny = y.iter().map(|a| a * a).sum::<f64>().sqrt();
    if nx == 0.0 || ny == 0.0 {
        0.0
    } else {
        dot / (nx * ny)
    }
}

/// Full sort by descending score then ascending id, truncated to `n`.
pub fn brute_ranking(ids: &[String], scores: &[f64], n: usize) -> Vec<String> {
    let mut order: Vec<usize> = (0..ids.len()).collect();
    order.sort_by(|&i, &j| scores[j].total_cmp(&scores[i]).then_with(|| ids[i].cmp(&ids[j])));
    order.into_iter().take(n).map(|i| ids[i].clone()).collect()
}

/// Relative gap below which the leading subspace is not considered well
/// determined.
pub const SEPARATION: f64 = 1e-3;

#[derive(Debug, Default)]
pub struct SvdSuite {
    pub worst_sigma: f64,
    pub worst_angle: f64,
    pub angle_checks: usize,
    pub rank_errors: Vec<usize>,
}

/// 30 random sparse matrices up to 200 x 150 against the dense SVD.
pub fn svd_suite(seed: u64) -> SvdSuite {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = SvdSuite::default();
    for case in 0..30 {
        let m = rng.random_range(10..=200);
        let n = rng.random_range(10..=150);
        let density = rng.random_range(0.02..0.3);
        let dense = random_sparse(&mut rng, m, n, density);
        let k = rng.random_range(1..=m.min(n) / 2);
        let ours = truncated_svd(&to_csc(&dense), k, &SvdOptions::default()).unwrap();
        let (u, s, v) = dense_svd(&dense);
        if ours.rank() != k {
            out.rank_errors.push(case);
            continue;
        }
        for (got, want) in ours.s.iter().zip(&s) {
            out.worst_sigma = out.worst_sigma.max((got - want).abs() / want);
        }
        let gap = if k < s.len() { (s[k - 1] - s[k]) / s[0] } else { 1.0 };
        if gap > SEPARATION {
            out.angle_checks += 1;
            let a_u = max_principal_angle(&ours.u, &u.columns(0, k).into_owned());
            let a_v = max_principal_angle(&ours.v, &v.columns(0, k).into_owned());
            out.worst_angle = out.worst_angle.max(a_u).max(a_v);
        }
    }
    out
}

/// Trains a cross-lingual model on `n` synthetic couples and returns its rank
/// and the largest deviation of a projected training column from its row of V.
pub fn fold_in_error(n: usize) -> (usize, f64) {
    let pipeline = TextPipeline::new(PipelineConfig::passthrough()).unwrap();
    let (corpus, _) = Generator::new(SyntheticConfig::default()).parallel_corpus(n, "d").unwrap();
    let src: Vec<Vec<String>> = corpus.source_docs().iter().map(|d| pipeline.terms(&d.text, Side::Source)).collect();
    let tgt: Vec<Vec<String>> = corpus.target_docs().iter().map(|d| pipeline.terms(&d.text, Side::Target)).collect();
    let model = LsiModel::train_crosslingual(&src, &tgt, DEFAULT_RANK, &SvdOptions::default()).unwrap();
    let ModelVocabulary::Cross(vocab) = model.vocabulary() else {
        panic!("cross-lingual model expected")
    };
    let mut worst = 0.0f64;
    for j in 0..corpus.len() {
        let projected = model.project(&vocab.vectorize_couple(&src[j], &tgt[j])).unwrap();
        for (c, x) in projected.iter().enumerate() {
            worst = worst.max((x - model.v()[(j, c)]).abs());
        }
    }
    (model.k(), worst)
}

/// Disagreements between the measures and the enumerators on `cases` random
/// toy pairs of at most 10 tokens per side.
pub fn measure_mismatches(seed: u64, cases: usize) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mismatches = Vec::new();
    for case in 0..cases {
        let vocab = rng.random_range(3..12);
        let n_synsets = rng.random_range(0..8);
        let toy = ToyDictionary::random(&mut rng, vocab, n_synsets);
        let dict = toy.build();
        let triples = toy.triples();
        let d_s = random_doc(&mut rng, "s", vocab, 10);
        let d_t = random_doc(&mut rng, "t", vocab, 10);

        let fwd = brute_bin(&d_s, &d_t, &triples, true);
        let bwd = brute_bin(&d_t, &d_s, &triples, false);
        if bin_measure(&d_s, &d_t, &dict) != fwd {
            mismatches.push(format!("{case}: bin"));
        }
        if bin_symmetric(&d_s, &d_t, &dict) != (fwd + bwd) / 2.0 {
            mismatches.push(format!("{case}: bin_symmetric"));
        }
        if oov_rate(&d_s, &d_t, &dict).ok() != brute_oov(&d_s, &d_t, &toy) {
            mismatches.push(format!("{case}: oov"));
        }
        if matching_rate(&d_s, &d_t, &dict).ok() != brute_matching_rate(&d_s, &d_t, &triples) {
            mismatches.push(format!("{case}: matching"));
        }
    }
    mismatches
}

/// Largest gap between `dict_cosine` and the dense evaluation.
pub fn dict_cosine_error(seed: u64, trials: usize) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let vocab = rng.random_range(3..10);
        let n_synsets = rng.random_range(1..8);
        let toy = ToyDictionary::random(&mut rng, vocab, n_synsets);
        let dict = toy.build();
        let coll_s: Vec<Vec<String>> = (0..8).map(|_| random_doc(&mut rng, "s", vocab, 10)).collect();
        let coll_t: Vec<Vec<String>> = (0..8).map(|_| random_doc(&mut rng, "t", vocab, 10)).collect();
        let (Ok(vs), Ok(vt)) = (Vocabulary::build(&coll_s), Vocabulary::build(&coll_t)) else {
            continue;
        };
        let (df_s, df_t) = (document_frequencies(&coll_s), document_frequencies(&coll_t));
        let i = rng.random_range(0..8);
        let j = rng.random_range(0..8);
        let ours = dict_cosine(&coll_s[i], &coll_t[j], &dict, &vs, &vt);
        let oracle = dense_dict_cosine(&coll_s[i], &coll_t[j], &toy.pairs(), &df_s, 8, &df_t, 8);
        worst = worst.max((ours - oracle).abs());
    }
    worst
}

/// Golden cases whose plain text or link list differs, with the case count.
pub fn golden_failures() -> (usize, Vec<String>) {
    let cases = wikitext_cases(&fixture_dir().join("wikitext"));
    let mut failures = Vec::new();
    for case in &cases {
        let plain = strip_wiki_markup(&case.wikitext);
        if plain != case.plain {
            failures.push(format!("{}: plain {plain:?} != {:?}", case.name, case.plain));
        }
        let links = parse_interlanguage_links(&case.wikitext);
        if links != case.links {
            failures.push(format!("{}: links {links:?} != {:?}", case.name, case.links));
        }
    }
    (cases.len(), failures)
}
