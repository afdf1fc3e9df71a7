//! `.specf` series files: one JSON header line, then little-endian `f64`
//! pairs `(re, im)` for every coefficient, row-major, series after series.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::{Basis, CoeffSeries};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpecfHeader {
    pub basis: Vec<Basis>,
    pub shape: Vec<usize>,
    pub real_signal: bool,
    pub dtype: String,
    pub count: usize,
}

/// Writes series that share bases, shape and packing.
pub fn write_series<W: Write>(mut w: W, series: &[CoeffSeries]) -> Result<()> {
    let first = series
        .first()
        .ok_or_else(|| Error::Format("no series to write".into()))?;
    for s in series {
        if s.bases() != first.bases()
            || s.shape() != first.shape()
            || s.real_signal() != first.real_signal()
        {
            return Err(Error::Format("series in one file must share a layout".into()));
        }
    }
    let header = SpecfHeader {
        basis: first.bases().to_vec(),
        shape: first.shape().to_vec(),
        real_signal: first.real_signal(),
        dtype: "f64".into(),
        count: series.len(),
    };
    serde_json::to_writer(&mut w, &header)?;
    w.write_all(b"\n")?;
    for s in series {
        for c in s.coeffs() {
            w.write_all(&c.re.to_le_bytes())?;
            w.write_all(&c.im.to_le_bytes())?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn read_series<R: Read>(r: R) -> Result<(SpecfHeader, Vec<CoeffSeries>)> {
    let mut r = BufReader::new(r);
    let mut line = String::new();
    r.read_line(&mut line)?;
    let header: SpecfHeader = serde_json::from_str(line.trim_end())?;
    if header.dtype != "f64" {
        return Err(Error::Format(format!("unsupported dtype {}", header.dtype)));
    }
    let len: usize = header.shape.iter().product();
    let mut buf = vec![0u8; 16 * len];
    let mut out = Vec::with_capacity(header.count);
    for _ in 0..header.count {
        r.read_exact(&mut buf)
            .map_err(|e| Error::Format(format!("truncated coefficient blob: {e}")))?;
        let coeffs = buf
            .chunks_exact(16)
            .map(|ch| {
                let re = f64::from_le_bytes(ch[..8].try_into().expect("8 bytes"));
                let im = f64::from_le_bytes(ch[8..].try_into().expect("8 bytes"));
                C64::new(re, im)
            })
            .collect();
        out.push(CoeffSeries::new(
            header.basis.clone(),
            header.shape.clone(),
            coeffs,
            header.real_signal,
        )?);
    }
    Ok((header, out))
}

pub fn save(path: impl AsRef<Path>, series: &[CoeffSeries]) -> Result<()> {
    write_series(BufWriter::new(File::create(path)?), series)
}

pub fn load(path: impl AsRef<Path>) -> Result<Vec<CoeffSeries>> {
    Ok(read_series(File::open(path)?)?.1)
}
