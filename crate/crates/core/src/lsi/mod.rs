//! Latent semantic indexing over monolingual and concatenated bilingual
//! term-document matrices.

mod io;
mod svd;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::bidict::Side;
use crate::error::{Error, Result};
use crate::sparse::SparseVector;
use crate::vsm::{term_frequencies, vectorize, TermDocMatrix, Vocabulary};

pub use io::{load_model, read_model, save_model, write_model, MODEL_VERSION};
pub use svd::{truncated_svd, SvdOptions, TruncatedSvd, RANK_CUTOFF};

/// Rank used when none is configured.
pub const DEFAULT_RANK: usize = 300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Monolingual,
    Crosslingual,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Monolingual => "monolingual",
            ModelKind::Crosslingual => "crosslingual",
        }
    }
}

/// Row space of a cross-lingual matrix: source terms first, then target terms.
/// Document frequencies count concatenated couples, which for a term of one
/// language equals its document frequency on that side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossVocabulary {
    source: Vocabulary,
    target: Vocabulary,
}

impl CrossVocabulary {
    pub fn build<S: AsRef<str>, T: AsRef<str>>(source_docs: &[Vec<S>], target_docs: &[Vec<T>]) -> Result<Self> {
        if source_docs.len() != target_docs.len() {
            return Err(Error::DimensionMismatch {
                expected: source_docs.len(),
                found: target_docs.len(),
            });
        }
        Self::from_parts(Vocabulary::build(source_docs)?, Vocabulary::build(target_docs)?)
    }

    pub fn from_parts(source: Vocabulary, target: Vocabulary) -> Result<Self> {
        if source.n_docs() != target.n_docs() {
            return Err(Error::DimensionMismatch {
                expected: source.n_docs(),
                found: target.n_docs(),
            });
        }
        Ok(Self { source, target })
    }

    pub fn len(&self) -> usize {
        self.source.len() + self.target.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn n_docs(&self) -> usize {
        self.source.n_docs()
    }

    pub fn side(&self, side: Side) -> &Vocabulary {
        match side {
            Side::Source => &self.source,
            Side::Target => &self.target,
        }
    }

    /// First row of `side` in the combined index.
    pub fn offset(&self, side: Side) -> usize {
        match side {
            Side::Source => 0,
            Side::Target => self.source.len(),
        }
    }

    pub fn index_of(&self, side: Side, term: &str) -> Option<usize> {
        self.side(side).index_of(term).map(|i| i + self.offset(side))
    }

    /// Language side and term of a combined row index.
    pub fn term(&self, index: usize) -> (Side, &str) {
        if index < self.source.len() {
            (Side::Source, self.source.term(index))
        } else {
            (Side::Target, self.target.term(index - self.source.len()))
        }
    }

    /// tfidf vector of a one-language document with the other language's
    /// coordinates left at zero.
    pub fn vectorize<S: AsRef<str>>(&self, tokens: &[S], side: Side) -> SparseVector {
        let vocab = self.side(side);
        let offset = self.offset(side);
        let pairs = term_frequencies(tokens)
            .into_iter()
            .filter_map(|(term, tf)| vocab.index_of(term).map(|i| (i + offset, vocab.weight(i, tf))))
            .collect();
        SparseVector::from_pairs(self.len(), pairs).expect("indices come from the vocabulary")
    }

    /// tfidf vector of the concatenated couple.
    pub fn vectorize_couple<S: AsRef<str>, T: AsRef<str>>(&self, source: &[S], target: &[T]) -> SparseVector {
        let a = self.vectorize(source, Side::Source);
        let b = self.vectorize(target, Side::Target);
        let pairs = a.iter().chain(b.iter()).collect();
        SparseVector::from_pairs(self.len(), pairs).expect("same dimension")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelVocabulary {
    Mono(Vocabulary),
    Cross(CrossVocabulary),
}

impl ModelVocabulary {
    pub fn len(&self) -> usize {
        match self {
            ModelVocabulary::Mono(v) => v.len(),
            ModelVocabulary::Cross(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn n_docs(&self) -> usize {
        match self {
            ModelVocabulary::Mono(v) => v.n_docs(),
            ModelVocabulary::Cross(v) => v.n_docs(),
        }
    }
}

pub fn build_mono_matrix<S: AsRef<str>>(docs: &[Vec<S>]) -> Result<(Vocabulary, TermDocMatrix)> {
    let vocab = Vocabulary::build(docs)?;
    let matrix = TermDocMatrix::build(docs, &vocab)?;
    Ok((vocab, matrix))
}

/// Column `j` holds the tfidf vector of couple `j` concatenated.
pub fn build_cross_matrix<S: AsRef<str>, T: AsRef<str>>(
    source_docs: &[Vec<S>],
    target_docs: &[Vec<T>],
) -> Result<(CrossVocabulary, TermDocMatrix)> {
    let vocab = CrossVocabulary::build(source_docs, target_docs)?;
    let columns: Vec<SparseVector> = source_docs
        .iter()
        .zip(target_docs)
        .map(|(s, t)| vocab.vectorize_couple(s, t))
        .collect();
    let matrix = TermDocMatrix::from_columns(vocab.len(), &columns, vocab.n_docs())?;
    Ok((vocab, matrix))
}

/// Rank actually requested from the factorization: `k` capped at `d - 1`
/// and `|V| - 1`, and at least 1.
pub fn clamp_rank(k: usize, n_terms: usize, n_docs: usize) -> usize {
    let cap = n_docs.saturating_sub(1).min(n_terms.saturating_sub(1)).max(1);
    if k > cap {
        log::warn!("rank {k} exceeds {cap} for a {n_terms}x{n_docs} matrix; clamped");
    }
    k.min(cap).max(1)
}

/// Trained LSI space: `U` is terms by k, `V` is training documents by k.
#[derive(Debug, Clone, PartialEq)]
pub struct LsiModel {
    kind: ModelKind,
    vocabulary: ModelVocabulary,
    u: DMatrix<f64>,
    s: Vec<f64>,
    v: DMatrix<f64>,
}

impl LsiModel {
    pub fn from_parts(
        vocabulary: ModelVocabulary,
        u: DMatrix<f64>,
        s: Vec<f64>,
        v: DMatrix<f64>,
    ) -> Result<Self> {
        let k = s.len();
        if u.nrows() != vocabulary.len() {
            return Err(Error::DimensionMismatch {
                expected: vocabulary.len(),
                found: u.nrows(),
            });
        }
        if u.ncols() != k || v.ncols() != k {
            return Err(Error::DimensionMismatch {
                expected: k,
                found: if u.ncols() != k { u.ncols() } else { v.ncols() },
            });
        }
        if s.iter().any(|x| !x.is_finite() || *x <= 0.0) {
            return Err(Error::CorruptModel("singular values must be positive".into()));
        }
        let kind = match vocabulary {
            ModelVocabulary::Mono(_) => ModelKind::Monolingual,
            ModelVocabulary::Cross(_) => ModelKind::Crosslingual,
        };
        Ok(Self {
            kind,
            vocabulary,
            u,
            s,
            v,
        })
    }

    pub fn train_monolingual<S: AsRef<str>>(docs: &[Vec<S>], k: usize, options: &SvdOptions) -> Result<Self> {
        let (vocab, matrix) = build_mono_matrix(docs)?;
        Self::train_matrix(ModelVocabulary::Mono(vocab), &matrix, k, options)
    }

    pub fn train_crosslingual<S: AsRef<str>, T: AsRef<str>>(
        source_docs: &[Vec<S>],
        target_docs: &[Vec<T>],
        k: usize,
        options: &SvdOptions,
    ) -> Result<Self> {
        let (vocab, matrix) = build_cross_matrix(source_docs, target_docs)?;
        Self::train_matrix(ModelVocabulary::Cross(vocab), &matrix, k, options)
    }

    fn train_matrix(
        vocabulary: ModelVocabulary,
        matrix: &TermDocMatrix,
        k: usize,
        options: &SvdOptions,
    ) -> Result<Self> {
        let k = clamp_rank(k, matrix.n_terms(), matrix.n_docs());
        let svd = truncated_svd(matrix.matrix(), k, options)?;
        if svd.rank() < k {
            log::warn!("numerical rank {} below requested {k}", svd.rank());
        }
        log::info!(
            "trained {}x{} matrix to rank {} after {} iterations (residual {:.2e})",
            matrix.n_terms(),
            matrix.n_docs(),
            svd.rank(),
            svd.iterations,
            svd.residual
        );
        Self::from_parts(vocabulary, svd.u, svd.s, svd.v)
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn k(&self) -> usize {
        self.s.len()
    }

    pub fn vocabulary(&self) -> &ModelVocabulary {
        &self.vocabulary
    }

    pub fn u(&self) -> &DMatrix<f64> {
        &self.u
    }

    pub fn singular_values(&self) -> &[f64] {
        &self.s
    }

    pub fn v(&self) -> &DMatrix<f64> {
        &self.v
    }

    pub fn n_terms(&self) -> usize {
        self.u.nrows()
    }

    pub fn n_training_docs(&self) -> usize {
        self.v.nrows()
    }

    /// Fold-in `vᵗ U S⁻¹`.
    pub fn project(&self, vector: &SparseVector) -> Result<Vec<f64>> {
        if vector.dim() != self.n_terms() {
            return Err(Error::DimensionMismatch {
                expected: self.n_terms(),
                found: vector.dim(),
            });
        }
        let mut out = vec![0.0; self.k()];
        for (i, w) in vector.iter() {
            for (j, o) in out.iter_mut().enumerate() {
                *o += w * self.u[(i, j)];
            }
        }
        for (o, s) in out.iter_mut().zip(&self.s) {
            *o /= s;
        }
        Ok(out)
    }

    /// Vector of a document in the model's term space. On a monolingual model
    /// `side` is ignored.
    pub fn vectorize<S: AsRef<str>>(&self, tokens: &[S], side: Side) -> SparseVector {
        match &self.vocabulary {
            ModelVocabulary::Mono(v) => vectorize(tokens, v),
            ModelVocabulary::Cross(v) => v.vectorize(tokens, side),
        }
    }

    /// Projection of a monolingual document.
    pub fn embed<S: AsRef<str>>(&self, tokens: &[S]) -> Result<Vec<f64>> {
        self.require(ModelKind::Monolingual)?;
        self.project(&self.vectorize(tokens, Side::Source))
    }

    /// Projection of a one-language document into the cross-lingual space.
    pub fn embed_crosslingual<S: AsRef<str>>(&self, tokens: &[S], side: Side) -> Result<Vec<f64>> {
        self.require(ModelKind::Crosslingual)?;
        self.project(&self.vectorize(tokens, side))
    }

    fn require(&self, kind: ModelKind) -> Result<()> {
        if self.kind == kind {
            Ok(())
        } else {
            Err(Error::WrongModelKind {
                expected: kind.name(),
                found: self.kind.name(),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn docs(raw: &[&str]) -> Vec<Vec<String>> {
        raw.iter()
            .map(|d| d.split_whitespace().map(String::from).collect())
            .collect()
    }

    #[test]
    fn mono_matrix_hand_tfidf() {
        let (vocab, m) = build_mono_matrix(&docs(&["a a b", "b c"])).unwrap();
        assert_eq!(vocab.terms(), ["a", "b", "c"]);
        let dense = m.matrix().to_dense();
        let ln2 = 2f64.ln();
        assert!((dense[(0, 0)] - 2.0 * ln2).abs() < 1e-15);
        assert_eq!(dense[(1, 0)], 0.0);
        assert_eq!(dense[(1, 1)], 0.0);
        assert!((dense[(2, 1)] - ln2).abs() < 1e-15);
    }

    #[test]
    fn single_couple_gives_zero_matrix() {
        let (_, m) = build_cross_matrix(&docs(&["x y"]), &docs(&["p q"])).unwrap();
        assert!(m.is_zero());
        assert!(LsiModel::train_crosslingual(&docs(&["x y"]), &docs(&["p q"]), 5, &SvdOptions::default()).is_err());
    }

    #[test]
    fn cross_vocabulary_puts_source_first() {
        let (vocab, m) = build_cross_matrix(&docs(&["b a", "c"]), &docs(&["z", "y z"])).unwrap();
        assert_eq!(vocab.len(), 5);
        assert_eq!(vocab.index_of(Side::Source, "c"), Some(2));
        assert_eq!(vocab.index_of(Side::Target, "y"), Some(3));
        assert_eq!(vocab.term(4), (Side::Target, "z"));
        assert_eq!(m.column(0).indices(), &[0, 1]);
        assert_eq!(m.column(1).indices(), &[2, 3]);
    }

    #[test]
    fn cross_model_rejects_mono_embedding() {
        let model = LsiModel::train_crosslingual(
            &docs(&["a b", "c d", "e f"]),
            &docs(&["x y", "z w", "u v"]),
            2,
            &SvdOptions::default(),
        )
        .unwrap();
        assert!(matches!(model.embed(&["a"]), Err(Error::WrongModelKind { .. })));
        let zero = model.embed_crosslingual(&["x"], Side::Source).unwrap();
        assert!(zero.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn clamp_rank_caps_at_docs_minus_one() {
        assert_eq!(clamp_rank(300, 1000, 100), 99);
        assert_eq!(clamp_rank(300, 50, 100), 49);
        assert_eq!(clamp_rank(10, 1000, 100), 10);
    }
}
