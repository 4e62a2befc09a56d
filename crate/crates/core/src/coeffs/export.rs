//! File exports: 16-bit PGM images, CSV tables, JSON sidecars.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Range and scale used to quantize an image.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PgmScale {
    pub min: f64,
    pub max: f64,
    /// Sample = round(value · scale); zero when the image is constant zero.
    pub scale: f64,
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

/// Writes non-negative `values` (row-major, `n × n`, row 0 at the bottom) as
/// a binary 16-bit PGM with the maximum mapped to 65535.
pub fn write_pgm16(path: &Path, values: &[f64], n: usize) -> Result<PgmScale> {
    if values.len() != n * n {
        return Err(Error::invalid(format!(
            "image has {} samples, expected {n}x{n}",
            values.len()
        )));
    }
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(0.0, f64::max);
    let scale = if max > 0.0 { 65535.0 / max } else { 0.0 };
    let mut bytes = Vec::with_capacity(2 * n * n + 32);
    bytes.extend_from_slice(format!("P5\n{n} {n}\n65535\n").as_bytes());
    for r in 0..n {
        let row = n - 1 - r;
        for v in &values[row * n..(row + 1) * n] {
            let q = (v.max(0.0) * scale).round().min(65535.0) as u16;
            bytes.extend_from_slice(&q.to_be_bytes());
        }
    }
    let mut w = create(path)?;
    w.write_all(&bytes)
        .and_then(|_| w.flush())
        .map_err(|e| Error::io(path, e))?;
    Ok(PgmScale {
        min: if values.is_empty() { 0.0 } else { min },
        max,
        scale,
    })
}

/// Rows `m1,m2,re,im`.
pub fn write_map_csv(path: &Path, values: &[Complex64], n: usize) -> Result<()> {
    let mut w = csv::Writer::from_writer(create(path)?);
    let wrap = |e: csv::Error| Error::Format {
        path: path.to_path_buf(),
        message: e.to_string(),
    };
    w.write_record(["m1", "m2", "re", "im"]).map_err(wrap)?;
    for (i, v) in values.iter().enumerate() {
        w.serialize((i % n, i / n, v.re, v.im)).map_err(wrap)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Rows `m1,m2,value`.
pub fn write_edge_csv(path: &Path, values: &[f64], n: usize) -> Result<()> {
    let mut w = csv::Writer::from_writer(create(path)?);
    let wrap = |e: csv::Error| Error::Format {
        path: path.to_path_buf(),
        message: e.to_string(),
    };
    w.write_record(["m1", "m2", "value"]).map_err(wrap)?;
    for (i, v) in values.iter().enumerate() {
        w.serialize((i % n, i / n, *v)).map_err(wrap)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Sidecar `{index, s, min, max, scale}` next to an image.
pub fn write_sidecar(path: &Path, index: &str, s: u32, scale: &PgmScale) -> Result<()> {
    let doc = serde_json::json!({
        "index": index,
        "s": s,
        "min": scale.min,
        "max": scale.max,
        "scale": scale.scale,
    });
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, &doc).map_err(|e| Error::Format {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    w.write_all(b"\n")
        .and_then(|_| w.flush())
        .map_err(|e| Error::io(path, e))
}
