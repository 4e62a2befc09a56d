//! Sources of Fourier coefficients `c_k` of 2π-periodic test functions.

use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex64;

use super::ellipse::EllipseRegion;
use crate::error::{Error, Result};

/// Finite Fourier table `k ↦ c_k`; missing keys are zero.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FourierTable {
    entries: BTreeMap<[i32; 2], Complex64>,
    source: Option<String>,
}

impl FourierTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a table, rejecting duplicate or non-finite entries.
    pub fn from_entries(entries: impl IntoIterator<Item = ([i32; 2], Complex64)>) -> Result<Self> {
        let mut table = Self::new();
        for (k, c) in entries {
            table.insert(k, c)?;
        }
        Ok(table)
    }

    fn insert(&mut self, k: [i32; 2], c: Complex64) -> Result<()> {
        if !(c.re.is_finite() && c.im.is_finite()) {
            return Err(Error::invalid(format!("non-finite coefficient at {k:?}")));
        }
        if self.entries.insert(k, c).is_some() {
            return Err(Error::invalid(format!("duplicate frequency {k:?}")));
        }
        Ok(())
    }

    /// Reads CSV rows `k1,k2,re,im`. A leading header row is skipped.
    pub fn from_csv(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_reader(file);
        let bad = |line: u64, message: String| Error::Format {
            path: path.to_path_buf(),
            message: format!("line {line}: {message}"),
        };
        let mut table = Self::new();
        for (row, record) in reader.records().enumerate() {
            let record = record.map_err(|e| bad(row as u64 + 1, e.to_string()))?;
            let line = record.position().map_or(row as u64 + 1, |p| p.line());
            if record.len() != 4 {
                return Err(bad(
                    line,
                    format!("expected 4 fields, found {}", record.len()),
                ));
            }
            let k = (record[0].parse::<i32>(), record[1].parse::<i32>());
            let c = (record[2].parse::<f64>(), record[3].parse::<f64>());
            match (k, c) {
                ((Ok(k1), Ok(k2)), (Ok(re), Ok(im))) => table
                    .insert([k1, k2], Complex64::new(re, im))
                    .map_err(|e| bad(line, e.to_string()))?,
                _ if row == 0 => continue,
                _ => return Err(bad(line, "unparsable row".into())),
            }
        }
        table.source = Some(path.display().to_string());
        Ok(table)
    }

    pub fn get(&self, k: [i32; 2]) -> Complex64 {
        self.entries.get(&k).copied().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = ([i32; 2], Complex64)> + '_ {
        self.entries.iter().map(|(k, c)| (*k, *c))
    }
}

/// Fourier data of a test function.
#[derive(Clone, Debug, PartialEq)]
pub enum FourierProvider {
    /// Indicator function of an ellipse.
    RotatedEllipse(EllipseRegion),
    Table(FourierTable),
    /// `Σ w_i f_i`.
    Combination(Vec<(f64, FourierProvider)>),
}

impl FourierProvider {
    /// The zero function.
    pub fn zero() -> Self {
        FourierProvider::Table(FourierTable::new())
    }

    pub fn coefficient(&self, k: [i32; 2]) -> Complex64 {
        match self {
            FourierProvider::RotatedEllipse(e) => e.fourier([f64::from(k[0]), f64::from(k[1])]),
            FourierProvider::Table(t) => t.get(k),
            FourierProvider::Combination(parts) => {
                parts.iter().map(|(w, p)| p.coefficient(k) * *w).sum()
            }
        }
    }

    /// Short human-readable description for metadata.
    pub fn describe(&self) -> String {
        match self {
            FourierProvider::RotatedEllipse(e) => {
                let c = e.center();
                if c == [0.0, 0.0] {
                    format!("ellipse(a={}, b={}, gamma={})", e.a(), e.b(), e.gamma())
                } else {
                    format!(
                        "ellipse(a={}, b={}, gamma={}, center=({}, {}))",
                        e.a(),
                        e.b(),
                        e.gamma(),
                        c[0],
                        c[1]
                    )
                }
            }
            FourierProvider::Table(t) => match &t.source {
                Some(src) => format!("table({src}, {} entries)", t.len()),
                None => format!("table({} entries)", t.len()),
            },
            FourierProvider::Combination(parts) => {
                let items: Vec<String> = parts
                    .iter()
                    .map(|(w, p)| format!("{w}*{}", p.describe()))
                    .collect();
                items.join(" + ")
            }
        }
    }
}

/// `c_k` of the periodized function described by `p`.
pub fn fourier_coefficient(p: &FourierProvider, k: [i32; 2]) -> Complex64 {
    p.coefficient(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::ellipse_ft;
    use std::f64::consts::PI;
    use std::io::Write;

    fn sample() -> EllipseRegion {
        EllipseRegion::new(1.0, 3.0, PI / 6.0).unwrap()
    }

    #[test]
    fn provider_examples() {
        let e = FourierProvider::RotatedEllipse(sample());
        let c0 = fourier_coefficient(&e, [0, 0]);
        assert!((c0.re - 3.0 / (4.0 * PI)).abs() < 1e-15 && c0.im == 0.0);

        let t = FourierTable::from_entries([([2, -1], Complex64::new(1.0, 0.0))]).unwrap();
        let tp = FourierProvider::Table(t);
        assert_eq!(fourier_coefficient(&tp, [2, -1]), Complex64::new(1.0, 0.0));
        assert_eq!(fourier_coefficient(&tp, [1, -1]), Complex64::new(0.0, 0.0));

        let combo = FourierProvider::Combination(vec![(2.0, e.clone()), (1.0, tp.clone())]);
        for k in [[0, 0], [2, -1], [5, 9]] {
            let expect = fourier_coefficient(&e, k) * 2.0 + fourier_coefficient(&tp, k);
            assert_eq!(fourier_coefficient(&combo, k), expect);
        }
        assert_eq!(
            fourier_coefficient(&FourierProvider::zero(), [3, 3]).norm(),
            0.0
        );
    }

    #[test]
    fn ellipse_coefficients_are_real_and_even() {
        let e = FourierProvider::RotatedEllipse(sample());
        for k1 in -20..=20 {
            for k2 in -20..=20 {
                let c = fourier_coefficient(&e, [k1, k2]);
                assert_eq!(c.im, 0.0);
                assert_eq!(c, fourier_coefficient(&e, [-k1, -k2]).conj());
                assert_eq!(c.re, ellipse_ft(&sample(), [f64::from(k1), f64::from(k2)]));
            }
        }
    }

    #[test]
    fn centred_offset_is_a_phase() {
        let c = [0.4, -0.25];
        let moved = FourierProvider::RotatedEllipse(sample().with_center(c).unwrap());
        let k = [3, 7];
        let v = fourier_coefficient(&moved, k);
        let base = ellipse_ft(&sample(), [3.0, 7.0]);
        assert!((v.norm() - base.abs()).abs() < 1e-15);
        let expect = Complex64::from_polar(base, -(3.0 * c[0] + 7.0 * c[1]));
        assert!((v - expect).norm() < 1e-15);
        assert_eq!(fourier_coefficient(&moved, [-3, -7]), v.conj());
    }

    #[test]
    fn csv_round_trip_and_errors() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        let mut f = std::fs::File::create(&path).unwrap();
        writeln!(f, "k1,k2,re,im\n1,2,0.5,-0.25\n-3, 0, 1e-3, 0").unwrap();
        drop(f);
        let t = FourierTable::from_csv(&path).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.get([1, 2]), Complex64::new(0.5, -0.25));
        assert_eq!(t.get([-3, 0]), Complex64::new(1e-3, 0.0));
        assert!(FourierProvider::Table(t).describe().contains("2 entries"));

        std::fs::write(&path, "1,2,0.5,0\n1,2,0.1,0\n").unwrap();
        assert!(matches!(
            FourierTable::from_csv(&path),
            Err(Error::Format { .. })
        ));
        std::fs::write(&path, "1,2,0.5,0\nx,2,0.1,0\n").unwrap();
        assert!(matches!(
            FourierTable::from_csv(&path),
            Err(Error::Format { .. })
        ));
        std::fs::write(&path, "1,2,0.5\n").unwrap();
        assert!(FourierTable::from_csv(&path).is_err());
        assert!(matches!(
            FourierTable::from_csv(&dir.path().join("missing.csv")),
            Err(Error::Io { .. })
        ));
    }
}
