//! CSV + JSON-sidecar serialization of sampled functions.
//!
//! `name.csv` holds columns `index,coordinate,re,im`; `name.json` holds
//! `{"grid": {"min", "max", "n"}, "kind"}`.

use std::fs::File;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::grid::{Grid1D, SampledFunction1D};
use crate::error::{Error, Result};

#[derive(Debug, Serialize, Deserialize)]
struct Row {
    index: usize,
    coordinate: f64,
    re: f64,
    im: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    pub grid: Grid1D,
    pub kind: String,
}

pub fn sidecar_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("json")
}

pub fn write_sampled(csv_path: &Path, f: &SampledFunction1D, kind: &str) -> Result<()> {
    let mut w = csv::Writer::from_path(csv_path)?;
    for (k, (x, v)) in f.grid.points().zip(&f.values).enumerate() {
        w.serialize(Row { index: k, coordinate: x, re: v.re, im: v.im })?;
    }
    w.flush()?;
    let side = Sidecar { grid: f.grid, kind: kind.to_string() };
    serde_json::to_writer_pretty(File::create(sidecar_path(csv_path))?, &side)?;
    Ok(())
}

pub fn read_sampled(csv_path: &Path) -> Result<(SampledFunction1D, String)> {
    let side: Sidecar = serde_json::from_reader(File::open(sidecar_path(csv_path))?)?;
    let grid = Grid1D::new(side.grid.min, side.grid.max, side.grid.n)?;
    let mut r = csv::Reader::from_path(csv_path)?;
    let mut values = vec![Complex64::new(0.0, 0.0); grid.n];
    let mut seen = vec![false; grid.n];
    for row in r.deserialize() {
        let row: Row = row?;
        if row.index >= grid.n {
            return Err(Error::Parse(format!("row index {} outside grid of {}", row.index, grid.n)));
        }
        let expected = grid.point(row.index);
        if (row.coordinate - expected).abs() > 1e-9 * grid.dx().max(1.0) {
            return Err(Error::GridMismatch(format!(
                "row {} has coordinate {} but the sidecar grid puts it at {}",
                row.index, row.coordinate, expected
            )));
        }
        values[row.index] = Complex64::new(row.re, row.im);
        seen[row.index] = true;
    }
    if let Some(k) = seen.iter().position(|s| !s) {
        return Err(Error::Parse(format!("missing row {k}")));
    }
    Ok((SampledFunction1D::new(grid, values)?, side.kind))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_through_disk() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("psi.csv");
        let g = Grid1D::centered(8.0, 64).unwrap();
        let f = SampledFunction1D::from_fn(g, |x| Complex64::new((-x * x).exp(), 0.25 * x));
        write_sampled(&path, &f, "wavefunction").unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("index,coordinate,re,im"));
        let (back, kind) = read_sampled(&path).unwrap();
        assert_eq!(kind, "wavefunction");
        assert_eq!(back, f);
    }

    #[test]
    fn detects_inconsistent_coordinates() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        let g = Grid1D::centered(1.0, 4).unwrap();
        write_sampled(&path, &SampledFunction1D::zeros(g), "x").unwrap();
        let side = Sidecar { grid: Grid1D::centered(2.0, 4).unwrap(), kind: "x".into() };
        serde_json::to_writer(File::create(sidecar_path(&path)).unwrap(), &side).unwrap();
        assert!(matches!(read_sampled(&path), Err(Error::GridMismatch(_))));
    }
}
