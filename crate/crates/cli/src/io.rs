//! Document files, vector stores, gold pairs and atomic output files.

use std::collections::HashMap;
use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use xling_core::corpus::Document;
use xling_core::retrieval::CandidateSet;
use xling_core::{Error, Result};

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> Error + '_ {
    move |e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    }
}

/// Writes through `<path>.partial` and renames on success; the partial file is
/// removed on failure.
pub fn write_atomic<F>(path: &Path, f: F) -> Result<()>
where
    F: FnOnce(&mut BufWriter<File>) -> std::io::Result<()>,
{
    let mut partial = path.as_os_str().to_owned();
    partial.push(".partial");
    let partial = PathBuf::from(partial);
    let result = File::create(&partial).and_then(|file| {
        let mut w = BufWriter::new(file);
        f(&mut w)?;
        w.flush()?;
        w.into_inner().map_err(|e| e.into_error())?.sync_all()
    });
    match result.and_then(|_| fs::rename(&partial, path)) {
        Ok(()) => Ok(()),
        Err(e) => {
            let _ = fs::remove_file(&partial);
            Err(io_err(path)(e))
        }
    }
}

fn lines(path: &Path) -> Result<impl Iterator<Item = (usize, std::io::Result<String>)>> {
    let file = File::open(path).map_err(io_err(path))?;
    Ok(BufReader::new(file).lines().enumerate().map(|(i, l)| (i + 1, l)))
}

/// One JSON document per line; blank lines are skipped.
pub fn read_documents(path: &Path) -> Result<Vec<Document>> {
    let mut docs = Vec::new();
    for (line_no, line) in lines(path)? {
        let line = line.map_err(io_err(path))?;
        if line.trim().is_empty() {
            continue;
        }
        let doc: Document = serde_json::from_str(&line).map_err(|e| Error::MalformedRecord {
            line: line_no,
            reason: format!("{}: {e}", path.display()),
        })?;
        docs.push(doc);
    }
    Ok(docs)
}

/// `query_id<TAB>target_id` per line.
pub fn read_gold(path: &Path) -> Result<HashMap<String, String>> {
    let mut gold = HashMap::new();
    for (line_no, line) in lines(path)? {
        let line = line.map_err(io_err(path))?;
        if line.trim().is_empty() {
            continue;
        }
        let (q, t) = line.split_once('\t').ok_or_else(|| Error::MalformedRecord {
            line: line_no,
            reason: format!("{}: expected query<TAB>target", path.display()),
        })?;
        gold.insert(q.to_string(), t.trim_end().to_string());
    }
    Ok(gold)
}

#[derive(Serialize, Deserialize)]
struct StoredVector {
    id: String,
    vector: Vec<f64>,
}

pub fn write_store(set: &CandidateSet, path: &Path) -> Result<()> {
    write_atomic(path, |w| {
        for (id, v) in set.iter() {
            let record = StoredVector {
                id: id.to_string(),
                vector: v.to_vec(),
            };
            serde_json::to_writer(&mut *w, &record).map_err(std::io::Error::other)?;
            writeln!(w)?;
        }
        Ok(())
    })
}

pub fn read_store(path: &Path) -> Result<CandidateSet> {
    let mut set = CandidateSet::new();
    for (line_no, line) in lines(path)? {
        let line = line.map_err(io_err(path))?;
        if line.trim().is_empty() {
            continue;
        }
        let r: StoredVector = serde_json::from_str(&line).map_err(|e| Error::MalformedRecord {
            line: line_no,
            reason: format!("{}: {e}", path.display()),
        })?;
        set.push(r.id, r.vector);
    }
    Ok(set)
}

/// `path` with `suffix` appended to its file name.
pub fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(suffix);
    PathBuf::from(name)
}
