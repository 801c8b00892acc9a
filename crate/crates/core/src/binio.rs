//! Little-endian helpers for the model and matrix file formats.

use std::io::{self, Read, Write};

use crate::error::{Error, Result};

pub(crate) struct LeWriter<W: Write> {
    inner: W,
}

impl<W: Write> LeWriter<W> {
    pub fn new(inner: W) -> Self {
        Self { inner }
    }

    pub fn bytes(&mut self, b: &[u8]) -> io::Result<()> {
        self.inner.write_all(b)
    }

    pub fn u8(&mut self, v: u8) -> io::Result<()> {
        self.inner.write_all(&[v])
    }

    pub fn u32(&mut self, v: u32) -> io::Result<()> {
        self.inner.write_all(&v.to_le_bytes())
    }

    pub fn u64(&mut self, v: u64) -> io::Result<()> {
        self.inner.write_all(&v.to_le_bytes())
    }

    pub fn f64(&mut self, v: f64) -> io::Result<()> {
        self.inner.write_all(&v.to_le_bytes())
    }

    pub fn str(&mut self, s: &str) -> io::Result<()> {
        self.u32(s.len() as u32)?;
        self.inner.write_all(s.as_bytes())
    }

    pub fn into_inner(self) -> W {
        self.inner
    }
}

/// Reader that turns short reads into [`Error::CorruptModel`].
pub(crate) struct LeReader<R: Read> {
    inner: R,
    what: &'static str,
}

impl<R: Read> LeReader<R> {
    pub fn new(inner: R, what: &'static str) -> Self {
        Self { inner, what }
    }

    fn fill(&mut self, buf: &mut [u8], field: &str) -> Result<()> {
        self.inner.read_exact(buf).map_err(|e| {
            if e.kind() == io::ErrorKind::UnexpectedEof {
                Error::CorruptModel(format!("{} truncated while reading {field}", self.what))
            } else {
                Error::CorruptModel(format!("{}: {e}", self.what))
            }
        })
    }

    pub fn bytes<const N: usize>(&mut self, field: &str) -> Result<[u8; N]> {
        let mut buf = [0u8; N];
        self.fill(&mut buf, field)?;
        Ok(buf)
    }

    pub fn u8(&mut self, field: &str) -> Result<u8> {
        Ok(self.bytes::<1>(field)?[0])
    }

    pub fn u32(&mut self, field: &str) -> Result<u32> {
        Ok(u32::from_le_bytes(self.bytes(field)?))
    }

    pub fn u64(&mut self, field: &str) -> Result<u64> {
        Ok(u64::from_le_bytes(self.bytes(field)?))
    }

    pub fn usize(&mut self, field: &str, limit: u64) -> Result<usize> {
        let v = self.u64(field)?;
        if v > limit {
            return Err(Error::CorruptModel(format!(
                "{}: {field} = {v} exceeds limit {limit}",
                self.what
            )));
        }
        Ok(v as usize)
    }

    pub fn f64(&mut self, field: &str) -> Result<f64> {
        Ok(f64::from_le_bytes(self.bytes(field)?))
    }

    pub fn str(&mut self, field: &str) -> Result<String> {
        let len = self.u32(field)? as usize;
        if len > 1 << 20 {
            return Err(Error::CorruptModel(format!("{}: {field} length {len} too large", self.what)));
        }
        let mut buf = vec![0u8; len];
        self.fill(&mut buf, field)?;
        String::from_utf8(buf)
            .map_err(|_| Error::CorruptModel(format!("{}: {field} is not utf-8", self.what)))
    }

    pub fn expect_eof(&mut self) -> Result<()> {
        let mut probe = [0u8; 1];
        match self.inner.read(&mut probe) {
            Ok(0) => Ok(()),
            Ok(_) => Err(Error::CorruptModel(format!("{}: trailing bytes", self.what))),
            Err(e) => Err(Error::CorruptModel(format!("{}: {e}", self.what))),
        }
    }
}
