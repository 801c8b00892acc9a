//! Model file: magic, version, kind, k, |V|, d, vocabulary block, then U, S
//! and V as little-endian f64 (factors column-major).

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use nalgebra::DMatrix;

use super::{CrossVocabulary, LsiModel, ModelKind, ModelVocabulary};
use crate::bidict::Side;
use crate::binio::{LeReader, LeWriter};
use crate::error::{Error, Result};
use crate::vsm::Vocabulary;

const MAGIC: &[u8; 4] = b"XLSI";
pub const MODEL_VERSION: u32 = 1;
const SIZE_LIMIT: u64 = 1 << 32;

pub fn write_model<W: Write>(model: &LsiModel, writer: W) -> std::io::Result<()> {
    let mut w = LeWriter::new(writer);
    w.bytes(MAGIC)?;
    w.u32(MODEL_VERSION)?;
    w.u8(match model.kind() {
        ModelKind::Monolingual => 0,
        ModelKind::Crosslingual => 1,
    })?;
    w.u64(model.k() as u64)?;
    w.u64(model.n_terms() as u64)?;
    w.u64(model.n_training_docs() as u64)?;
    match model.vocabulary() {
        ModelVocabulary::Mono(v) => write_vocabulary(&mut w, v)?,
        ModelVocabulary::Cross(v) => {
            write_vocabulary(&mut w, v.side(Side::Source))?;
            write_vocabulary(&mut w, v.side(Side::Target))?;
        }
    }
    for x in model.u().iter() {
        w.f64(*x)?;
    }
    for x in model.singular_values() {
        w.f64(*x)?;
    }
    for x in model.v().iter() {
        w.f64(*x)?;
    }
    w.into_inner().flush()
}

fn write_vocabulary<W: Write>(w: &mut LeWriter<W>, vocab: &Vocabulary) -> std::io::Result<()> {
    w.u64(vocab.n_docs() as u64)?;
    w.u64(vocab.len() as u64)?;
    for (term, df) in vocab.terms().iter().zip(vocab.dfs()) {
        w.str(term)?;
        w.u64(*df as u64)?;
    }
    Ok(())
}

pub fn read_model<R: Read>(reader: R) -> Result<LsiModel> {
    let mut r = LeReader::new(reader, "model file");
    if &r.bytes::<4>("magic")? != MAGIC {
        return Err(Error::CorruptModel("not an LSI model file".into()));
    }
    let version = r.u32("version")?;
    if version != MODEL_VERSION {
        return Err(Error::VersionMismatch {
            found: version,
            expected: MODEL_VERSION,
        });
    }
    let kind = match r.u8("kind")? {
        0 => ModelKind::Monolingual,
        1 => ModelKind::Crosslingual,
        other => return Err(Error::CorruptModel(format!("unknown model kind {other}"))),
    };
    let k = r.usize("k", SIZE_LIMIT)?;
    let n_terms = r.usize("|V|", SIZE_LIMIT)?;
    let n_docs = r.usize("d", SIZE_LIMIT)?;
    let vocabulary = match kind {
        ModelKind::Monolingual => ModelVocabulary::Mono(read_vocabulary(&mut r)?),
        ModelKind::Crosslingual => {
            let source = read_vocabulary(&mut r)?;
            let target = read_vocabulary(&mut r)?;
            ModelVocabulary::Cross(CrossVocabulary::from_parts(source, target)?)
        }
    };
    if vocabulary.len() != n_terms {
        return Err(Error::CorruptModel(format!(
            "header declares {n_terms} terms, vocabulary holds {}",
            vocabulary.len()
        )));
    }
    let u = read_matrix(&mut r, n_terms, k, "U")?;
    let s = (0..k).map(|_| r.f64("S")).collect::<Result<Vec<_>>>()?;
    let v = read_matrix(&mut r, n_docs, k, "V")?;
    r.expect_eof()?;
    LsiModel::from_parts(vocabulary, u, s, v)
}

fn read_vocabulary<R: Read>(r: &mut LeReader<R>) -> Result<Vocabulary> {
    let n_docs = r.usize("vocabulary document count", SIZE_LIMIT)?;
    let len = r.usize("vocabulary size", SIZE_LIMIT)?;
    let mut terms = Vec::with_capacity(len.min(1 << 20));
    let mut df = Vec::with_capacity(len.min(1 << 20));
    for _ in 0..len {
        terms.push(r.str("term")?);
        df.push(r.usize("document frequency", SIZE_LIMIT)?);
    }
    Vocabulary::from_parts(terms, df, n_docs).map_err(|e| Error::CorruptModel(e.to_string()))
}

fn read_matrix<R: Read>(r: &mut LeReader<R>, nrows: usize, ncols: usize, name: &str) -> Result<DMatrix<f64>> {
    let len = nrows
        .checked_mul(ncols)
        .ok_or_else(|| Error::CorruptModel(format!("{name} dimensions overflow")))?;
    let mut data = Vec::with_capacity(len.min(1 << 24));
    for _ in 0..len {
        data.push(r.f64(name)?);
    }
    Ok(DMatrix::from_vec(nrows, ncols, data))
}

pub fn save_model(model: &LsiModel, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_model(model, BufWriter::new(file)).map_err(|e| Error::io(path, e))
}

pub fn load_model(path: &Path) -> Result<LsiModel> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_model(BufReader::new(file))
}
