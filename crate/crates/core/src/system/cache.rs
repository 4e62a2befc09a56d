//! On-disk cache of sampled symbols.

use std::fs;
use std::path::{Path, PathBuf};

use super::symbol::{read_symbol, sample_symbol, write_symbol, SparseSymbol};
use super::ShearletIndex;
use crate::error::{Error, Result};
use crate::window::Window;

/// Directory of symbol dumps, one file per `(b, i, j, ℓ)`.
#[derive(Clone, Debug)]
pub struct SymbolCache {
    dir: PathBuf,
}

impl SymbolCache {
    /// Opens `dir`, creating it if needed.
    pub fn new(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        Ok(Self { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// File for `(b, i, j, ℓ)`; `b` enters by its bit pattern so distinct
    /// rates never collide.
    pub fn path_for(&self, g: &Window, idx: &ShearletIndex) -> PathBuf {
        let tag = match idx.orientation() {
            super::Orientation::Horizontal => 'h',
            super::Orientation::Vertical => 'v',
        };
        self.dir.join(format!(
            "psi-b{:016x}-{tag}-j{}-l{}.bin",
            g.rate().to_bits(),
            idx.scale(),
            idx.shear()
        ))
    }

    /// Reads the cached symbol or samples and stores it. Unreadable or
    /// mismatched files are replaced.
    pub fn load_or_sample(&self, g: &Window, idx: &ShearletIndex) -> Result<SparseSymbol> {
        let path = self.path_for(g, idx);
        if path.exists() {
            match read_symbol(&path) {
                Ok(s) if s.index() == idx => return Ok(s),
                Ok(_) | Err(Error::Format { .. }) | Err(Error::Io { .. }) => {}
                Err(e) => return Err(e),
            }
        }
        let symbol = sample_symbol(g, idx)?;
        // write then rename, so concurrent readers never see a partial file
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        write_symbol(&symbol, &tmp)?;
        fs::rename(&tmp, &path).map_err(|e| Error::io(&path, e))?;
        Ok(symbol)
    }
}
