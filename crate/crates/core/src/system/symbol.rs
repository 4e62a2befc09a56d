use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use rayon::prelude::*;

use super::{symbol_value, Orientation, ShearletIndex};
use crate::error::{Error, Result};
use crate::window::Window;

/// Default cap on the memory a single sampled symbol or coefficient buffer may take.
pub const DEFAULT_MEMORY_BUDGET: u64 = 4 << 30;

// Values below this are treated as zero (denormal guard).
const VALUE_FLOOR: f64 = 1e-300;

/// A contiguous run of nonzero samples along the inner lattice axis.
///
/// For horizontal symbols the outer axis is `k₁` and the run covers
/// consecutive `k₂`; vertical symbols swap the roles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SymbolRun {
    pub outer: i32,
    pub start: i32,
    offset: usize,
    len: usize,
}

impl SymbolRun {
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }
}

/// Nonzero integer samples `{(k, Ψ_{j,ℓ}(k))}` of a shearlet symbol.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseSymbol {
    index: ShearletIndex,
    runs: Vec<SymbolRun>,
    values: Vec<f64>,
}

impl SparseSymbol {
    pub fn index(&self) -> &ShearletIndex {
        &self.index
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn runs(&self) -> &[SymbolRun] {
        &self.runs
    }

    /// An empty symbol; its shearlet is identically zero.
    pub fn empty(index: ShearletIndex) -> Self {
        Self {
            index,
            runs: Vec::new(),
            values: Vec::new(),
        }
    }

    /// `(k, Ψ(k))` pairs, outer axis ascending then inner axis ascending.
    pub fn entries(&self) -> impl Iterator<Item = ([i32; 2], f64)> + '_ {
        let horizontal = self.index.orientation() == Orientation::Horizontal;
        self.runs.iter().flat_map(move |run| {
            self.values[run.offset..run.offset + run.len]
                .iter()
                .enumerate()
                .map(move |(t, &v)| {
                    let inner = run.start + t as i32;
                    let k = if horizontal {
                        [run.outer, inner]
                    } else {
                        [inner, run.outer]
                    };
                    (k, v)
                })
        })
    }

    /// Sum of all stored values, which is `ψ` at its own center.
    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    fn from_entries(index: ShearletIndex, entries: &[([i32; 2], f64)]) -> Result<Self> {
        let horizontal = index.orientation() == Orientation::Horizontal;
        let mut sym = SparseSymbol::empty(index);
        for &(k, v) in entries {
            if !(v >= VALUE_FLOOR) {
                return Err(Error::invalid(format!(
                    "symbol value {v} at {k:?} is not positive"
                )));
            }
            let (outer, inner) = if horizontal {
                (k[0], k[1])
            } else {
                (k[1], k[0])
            };
            sym.push(outer, inner, v)?;
        }
        Ok(sym)
    }

    fn push(&mut self, outer: i32, inner: i32, v: f64) -> Result<()> {
        match self.runs.last_mut() {
            Some(run) if run.outer == outer && run.start + run.len as i32 == inner => {
                run.len += 1;
            }
            Some(run) if (run.outer, run.start + run.len as i32 - 1) >= (outer, inner) => {
                return Err(Error::invalid("symbol entries are not in lattice order"));
            }
            _ => self.runs.push(SymbolRun {
                outer,
                start: inner,
                offset: self.values.len(),
                len: 1,
            }),
        }
        self.values.push(v);
        Ok(())
    }
}

fn estimated_bytes(scale: u32) -> u64 {
    // (8/3) 2^{3j/2} entries plus O(2^j) boundary rows, 8 bytes each.
    let big = 1u64 << scale;
    let area = (8 * (1u64 << (3 * scale / 2))).div_ceil(3);
    (area + 8 * big) * 8
}

/// Samples `Ψ^{(i)}_{j,ℓ}` on every lattice point where it is nonzero.
pub fn sample_symbol(g: &Window, idx: &ShearletIndex) -> Result<SparseSymbol> {
    sample_symbol_with_budget(g, idx, DEFAULT_MEMORY_BUDGET)
}

pub fn sample_symbol_with_budget(
    g: &Window,
    idx: &ShearletIndex,
    budget: u64,
) -> Result<SparseSymbol> {
    let j = idx.scale();
    if j < 2 {
        return Err(Error::InvalidIndex(format!(
            "sampling needs j ≥ 2, got {j}"
        )));
    }
    let required = estimated_bytes(j);
    if required > budget {
        return Err(Error::Resource {
            what: format!("symbol {idx}"),
            required,
            budget,
        });
    }

    let big = (f64::from(j)).exp2();
    let half = (f64::from(j) / 2.0).exp2();
    let slope = idx.shear() as f64 / half;
    let width = 2.0 / 3.0 * half;
    // g̃(2^{-j} k) > 0 requires 2^j/3 < |k| < 2^{j+2}/3; pad by one and let
    // the evaluation decide.
    let lo = (big / 3.0).floor() as i32;
    let hi = (4.0 * big / 3.0).ceil() as i32;
    let outers: Vec<i32> = (-hi..=-lo).chain(lo..=hi).collect();

    let rows: Vec<(i32, i32, Vec<f64>)> = outers
        .par_iter()
        .flat_map_iter(|&outer| {
            let center = slope * f64::from(outer);
            let first = (center - width).floor() as i32 - 1;
            let last = (center + width).ceil() as i32 + 1;
            let mut rows = Vec::new();
            let mut current: Option<(i32, Vec<f64>)> = None;
            for inner in first..=last {
                let k = match idx.orientation() {
                    Orientation::Horizontal => [f64::from(outer), f64::from(inner)],
                    Orientation::Vertical => [f64::from(inner), f64::from(outer)],
                };
                let v = symbol_value(g, idx, k);
                if v >= VALUE_FLOOR {
                    current.get_or_insert_with(|| (inner, Vec::new())).1.push(v);
                } else if let Some((start, vals)) = current.take() {
                    rows.push((outer, start, vals));
                }
            }
            if let Some((start, vals)) = current {
                rows.push((outer, start, vals));
            }
            rows
        })
        .collect();

    let total: usize = rows.iter().map(|r| r.2.len()).sum();
    let mut sym = SparseSymbol {
        index: *idx,
        runs: Vec::with_capacity(rows.len()),
        values: Vec::with_capacity(total),
    };
    for (outer, start, vals) in rows {
        sym.runs.push(SymbolRun {
            outer,
            start,
            offset: sym.values.len(),
            len: vals.len(),
        });
        sym.values.extend_from_slice(&vals);
    }
    Ok(sym)
}

/// Writes the little-endian cache layout: header `{i: u32, j: u32, ℓ: i32,
/// count: u64}` followed by `count` records `{k₁: i32, k₂: i32, value: f64}`.
pub fn write_symbol(symbol: &SparseSymbol, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    let io = |e| Error::io(path, e);
    let idx = symbol.index();
    w.write_all(&idx.orientation().code().to_le_bytes())
        .map_err(io)?;
    w.write_all(&idx.scale().to_le_bytes()).map_err(io)?;
    w.write_all(&(idx.shear() as i32).to_le_bytes())
        .map_err(io)?;
    w.write_all(&(symbol.len() as u64).to_le_bytes())
        .map_err(io)?;
    for (k, v) in symbol.entries() {
        w.write_all(&k[0].to_le_bytes()).map_err(io)?;
        w.write_all(&k[1].to_le_bytes()).map_err(io)?;
        w.write_all(&v.to_le_bytes()).map_err(io)?;
    }
    w.flush().map_err(io)
}

pub fn read_symbol(path: &Path) -> Result<SparseSymbol> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut r = BufReader::new(file);
    let io = |e| Error::io(path, e);
    let mut b4 = [0u8; 4];
    let mut b8 = [0u8; 8];
    r.read_exact(&mut b4).map_err(io)?;
    let code = u32::from_le_bytes(b4);
    r.read_exact(&mut b4).map_err(io)?;
    let scale = u32::from_le_bytes(b4);
    r.read_exact(&mut b4).map_err(io)?;
    let shear = i32::from_le_bytes(b4);
    r.read_exact(&mut b8).map_err(io)?;
    let count = u64::from_le_bytes(b8);

    let format = |message: String| Error::Format {
        path: path.to_path_buf(),
        message,
    };
    let orientation =
        Orientation::from_code(code).ok_or_else(|| format(format!("orientation code {code}")))?;
    let index = ShearletIndex::new(orientation, scale, i64::from(shear))
        .map_err(|e| format(e.to_string()))?;
    if count > estimated_bytes(scale) / 8 {
        return Err(format(format!(
            "entry count {count} too large for j={scale}"
        )));
    }
    let mut entries = Vec::with_capacity(count as usize);
    for _ in 0..count {
        r.read_exact(&mut b4).map_err(io)?;
        let k1 = i32::from_le_bytes(b4);
        r.read_exact(&mut b4).map_err(io)?;
        let k2 = i32::from_le_bytes(b4);
        r.read_exact(&mut b8).map_err(io)?;
        entries.push(([k1, k2], f64::from_le_bytes(b8)));
    }
    if r.read(&mut b4).map_err(io)? != 0 {
        return Err(format("trailing bytes after last record".into()));
    }
    SparseSymbol::from_entries(index, &entries).map_err(|e| format(e.to_string()))
}
