//! Vocabulary, tfidf weighting, term-document matrices and cosine similarity.
//!
//! Weighting is raw term count times `ln(N / df)` with no smoothing, so a term
//! present in every document carries no weight. [`tfidf_weight`] is the single
//! place where the variant is defined.

use std::collections::HashMap;
use std::io::{BufRead, Read, Write};

use crate::binio::{LeReader, LeWriter};
use crate::error::{Error, Result};
use crate::sparse::{CscMatrix, SparseVector};

/// Term to dense index bijection with per-term document frequencies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    terms: Vec<String>,
    index: HashMap<String, usize>,
    df: Vec<usize>,
    n_docs: usize,
}

impl Vocabulary {
    /// Indexes the terms of `documents` in lexicographic order.
    pub fn build<S: AsRef<str>>(documents: &[Vec<S>]) -> Result<Self> {
        if documents.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        let mut df: HashMap<&str, usize> = HashMap::new();
        for doc in documents {
            let mut seen: Vec<&str> = doc.iter().map(AsRef::as_ref).collect();
            seen.sort_unstable();
            seen.dedup();
            for term in seen {
                *df.entry(term).or_default() += 1;
            }
        }
        let mut entries: Vec<(&str, usize)> = df.into_iter().collect();
        entries.sort_unstable();
        Self::from_parts(
            entries.iter().map(|(t, _)| t.to_string()).collect(),
            entries.iter().map(|&(_, d)| d).collect(),
            documents.len(),
        )
    }

    /// Rebuilds a vocabulary from stored terms and document frequencies.
    pub fn from_parts(terms: Vec<String>, df: Vec<usize>, n_docs: usize) -> Result<Self> {
        if terms.len() != df.len() {
            return Err(Error::DimensionMismatch {
                expected: terms.len(),
                found: df.len(),
            });
        }
        let mut index = HashMap::with_capacity(terms.len());
        for (i, (term, &d)) in terms.iter().zip(&df).enumerate() {
            if d == 0 || d > n_docs {
                return Err(Error::Domain(format!(
                    "document frequency {d} of {term:?} outside [1, {n_docs}]"
                )));
            }
            if index.insert(term.clone(), i).is_some() {
                return Err(Error::Domain(format!("duplicate vocabulary term {term:?}")));
            }
        }
        Ok(Self {
            terms,
            index,
            df,
            n_docs,
        })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn n_docs(&self) -> usize {
        self.n_docs
    }

    pub fn index_of(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }

    pub fn term(&self, index: usize) -> &str {
        &self.terms[index]
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn df(&self, index: usize) -> usize {
        self.df[index]
    }

    pub fn dfs(&self) -> &[usize] {
        &self.df
    }

    /// tfidf of `tf` occurrences of the term at `index`.
    pub fn weight(&self, index: usize, tf: usize) -> f64 {
        tfidf_weight(tf, self.df[index], self.n_docs).expect("vocabulary df within bounds")
    }

    /// tfidf of `tf` occurrences of `term`, 0 for unknown terms.
    pub fn weight_of(&self, term: &str, tf: usize) -> f64 {
        self.index_of(term).map_or(0.0, |i| self.weight(i, tf))
    }
}

/// `tf * ln(N / df)`.
pub fn tfidf_weight(tf: usize, df: usize, n_docs: usize) -> Result<f64> {
    if tf == 0 {
        return Ok(0.0);
    }
    if df == 0 || df > n_docs {
        return Err(Error::Domain(format!(
            "document frequency {df} outside [1, {n_docs}]"
        )));
    }
    Ok(tf as f64 * (n_docs as f64 / df as f64).ln())
}

/// Raw in-document counts of `tokens`.
pub fn term_frequencies<S: AsRef<str>>(tokens: &[S]) -> HashMap<&str, usize> {
    let mut tf: HashMap<&str, usize> = HashMap::new();
    for t in tokens {
        *tf.entry(t.as_ref()).or_default() += 1;
    }
    tf
}

/// tfidf vector of a document; terms outside the vocabulary are dropped.
pub fn vectorize<S: AsRef<str>>(tokens: &[S], vocabulary: &Vocabulary) -> SparseVector {
    let pairs = term_frequencies(tokens)
        .into_iter()
        .filter_map(|(term, tf)| {
            vocabulary
                .index_of(term)
                .map(|i| (i, vocabulary.weight(i, tf)))
        })
        .collect();
    SparseVector::from_pairs(vocabulary.len(), pairs).expect("indices come from the vocabulary")
}

/// Cosine of two sparse vectors; 0 when either has zero norm.
pub fn cosine(u: &SparseVector, v: &SparseVector) -> f64 {
    let denom = u.norm() * v.norm();
    if denom == 0.0 {
        0.0
    } else {
        u.dot(v) / denom
    }
}

/// Cosine of two dense vectors; 0 when either has zero norm.
pub fn cosine_dense(u: &[f64], v: &[f64]) -> f64 {
    debug_assert_eq!(u.len(), v.len());
    let mut dot = 0.0;
    let mut nu = 0.0;
    let mut nv = 0.0;
    for (a, b) in u.iter().zip(v) {
        dot += a * b;
        nu += a * a;
        nv += b * b;
    }
    let denom = nu.sqrt() * nv.sqrt();
    if denom == 0.0 {
        0.0
    } else {
        dot / denom
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum Weighting {
    /// Raw count times natural-log idf.
    TfIdfLn = 1,
}

impl Weighting {
    fn from_tag(tag: u8) -> Result<Self> {
        match tag {
            1 => Ok(Weighting::TfIdfLn),
            other => Err(Error::CorruptModel(format!("unknown weighting tag {other}"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Weighting::TfIdfLn => "tfidf-ln",
        }
    }
}

/// Terms-by-documents matrix of nonnegative weights.
#[derive(Debug, Clone, PartialEq)]
pub struct TermDocMatrix {
    matrix: CscMatrix,
    n_docs_for_idf: usize,
    weighting: Weighting,
}

const MATRIX_MAGIC: &[u8; 4] = b"XTDM";
const MATRIX_VERSION: u32 = 1;

impl TermDocMatrix {
    /// Column `j` is the tfidf vector of `documents[j]`.
    pub fn build<S: AsRef<str>>(documents: &[Vec<S>], vocabulary: &Vocabulary) -> Result<Self> {
        if documents.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        let columns: Vec<SparseVector> = documents
            .iter()
            .map(|doc| vectorize(doc, vocabulary))
            .collect();
        Self::from_columns(vocabulary.len(), &columns, vocabulary.n_docs())
    }

    pub fn from_columns(n_terms: usize, columns: &[SparseVector], n_docs_for_idf: usize) -> Result<Self> {
        if let Some((j, w)) = columns
            .iter()
            .enumerate()
            .find_map(|(j, c)| c.values().iter().find(|w| **w < 0.0).map(|w| (j, *w)))
        {
            return Err(Error::Domain(format!("negative weight {w} in column {j}")));
        }
        Ok(Self {
            matrix: CscMatrix::from_columns(n_terms, columns)?,
            n_docs_for_idf,
            weighting: Weighting::TfIdfLn,
        })
    }

    pub fn matrix(&self) -> &CscMatrix {
        &self.matrix
    }

    pub fn n_terms(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn n_docs(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn n_docs_for_idf(&self) -> usize {
        self.n_docs_for_idf
    }

    pub fn weighting(&self) -> Weighting {
        self.weighting
    }

    pub fn column(&self, j: usize) -> SparseVector {
        self.matrix.column(j)
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.nnz() == 0
    }

    /// Binary form: header then `(row, col, value)` triples, little endian.
    pub fn write_binary<W: Write>(&self, writer: W) -> std::io::Result<()> {
        let mut w = LeWriter::new(writer);
        w.bytes(MATRIX_MAGIC)?;
        w.u32(MATRIX_VERSION)?;
        w.u8(self.weighting as u8)?;
        w.u64(self.n_docs_for_idf as u64)?;
        w.u64(self.n_terms() as u64)?;
        w.u64(self.n_docs() as u64)?;
        w.u64(self.matrix.nnz() as u64)?;
        for (i, j, v) in self.matrix.triplets() {
            w.u64(i as u64)?;
            w.u64(j as u64)?;
            w.f64(v)?;
        }
        w.into_inner().flush()
    }

    pub fn read_binary<R: Read>(reader: R) -> Result<Self> {
        let mut r = LeReader::new(reader, "matrix file");
        if &r.bytes::<4>("magic")? != MATRIX_MAGIC {
            return Err(Error::CorruptModel("not a term-document matrix file".into()));
        }
        let version = r.u32("version")?;
        if version != MATRIX_VERSION {
            return Err(Error::VersionMismatch {
                found: version,
                expected: MATRIX_VERSION,
            });
        }
        let weighting = Weighting::from_tag(r.u8("weighting")?)?;
        let n_docs_for_idf = r.usize("N", u32::MAX as u64)?;
        let nrows = r.usize("|V|", u32::MAX as u64)?;
        let ncols = r.usize("d", u32::MAX as u64)?;
        let nnz = r.usize("nnz", (nrows as u64).saturating_mul(ncols as u64))?;
        let mut triplets = Vec::with_capacity(nnz.min(1 << 24));
        for _ in 0..nnz {
            let i = r.usize("row", nrows.saturating_sub(1) as u64)?;
            let j = r.usize("col", ncols.saturating_sub(1) as u64)?;
            triplets.push((i, j, r.f64("value")?));
        }
        r.expect_eof()?;
        let matrix = CscMatrix::from_triplets(nrows, ncols, &triplets)?;
        Ok(Self {
            matrix,
            n_docs_for_idf,
            weighting,
        })
    }

    /// Human-readable dump: header line then one `row col value` line per entry.
    pub fn write_text<W: Write>(&self, mut writer: W) -> std::io::Result<()> {
        writeln!(
            writer,
            "# N={} V={} d={} weighting={}",
            self.n_docs_for_idf,
            self.n_terms(),
            self.n_docs(),
            self.weighting.name()
        )?;
        for (i, j, v) in self.matrix.triplets() {
            writeln!(writer, "{i} {j} {v:?}")?;
        }
        writer.flush()
    }

    pub fn read_text<R: BufRead>(reader: R) -> Result<Self> {
        let mut lines = reader.lines().enumerate();
        let malformed = |line: usize, reason: &str| Error::MalformedRecord {
            line,
            reason: reason.to_string(),
        };
        let (_, header) = lines.next().ok_or_else(|| malformed(1, "missing header"))?;
        let header = header.map_err(|e| Error::io("<matrix>", e))?;
        let mut fields = HashMap::new();
        for part in header.trim_start_matches('#').split_whitespace() {
            if let Some((k, v)) = part.split_once('=') {
                fields.insert(k.to_string(), v.to_string());
            }
        }
        let num = |k: &str| -> Result<usize> {
            fields
                .get(k)
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| malformed(1, &format!("header field {k} missing")))
        };
        let (n_docs_for_idf, nrows, ncols) = (num("N")?, num("V")?, num("d")?);
        let mut triplets = Vec::new();
        for (idx, line) in lines {
            let line = line.map_err(|e| Error::io("<matrix>", e))?;
            if line.trim().is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let parsed = match parts.as_slice() {
                [i, j, v] => i
                    .parse::<usize>()
                    .ok()
                    .zip(j.parse::<usize>().ok())
                    .zip(v.parse::<f64>().ok()),
                _ => None,
            };
            let ((i, j), v) = parsed.ok_or_else(|| malformed(idx + 1, "expected `row col value`"))?;
            if i >= nrows {
                return Err(malformed(idx + 1, "row out of range"));
            }
            triplets.push((i, j, v));
        }
        Ok(Self {
            matrix: CscMatrix::from_triplets(nrows, ncols, &triplets)?,
            n_docs_for_idf,
            weighting: Weighting::TfIdfLn,
        })
    }
}
