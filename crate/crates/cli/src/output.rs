use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use phasespace::{Marginal, QuasiDistribution};
use serde::Serialize;

pub struct Sink {
    dir: Option<PathBuf>,
}

impl Sink {
    pub fn new(dir: Option<PathBuf>) -> Result<Self> {
        if let Some(d) = &dir {
            fs::create_dir_all(d).with_context(|| format!("creating {}", d.display()))?;
        }
        Ok(Self { dir })
    }

    pub fn path(&self, name: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(name))
    }

    /// Writes `report` to stdout and, with an output directory, to `name`.
    pub fn report<T: Serialize>(&self, name: &str, report: &T) -> Result<()> {
        let text = serde_json::to_string_pretty(report)?;
        let mut out = std::io::stdout().lock();
        match writeln!(out, "{text}") {
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
            r => r?,
        }
        if let Some(p) = self.path(name) {
            fs::write(&p, text + "\n").with_context(|| format!("writing {}", p.display()))?;
        }
        Ok(())
    }

    pub fn with_file(&self, name: &str, write: impl FnOnce(&Path) -> Result<()>) -> Result<Option<String>> {
        match self.path(name) {
            None => Ok(None),
            Some(p) => {
                write(&p).with_context(|| format!("writing {}", p.display()))?;
                Ok(Some(p.display().to_string()))
            }
        }
    }
}

pub fn write_quasi_csv(path: &Path, f: &QuasiDistribution) -> Result<()> {
    let mut w = std::io::BufWriter::new(fs::File::create(path)?);
    writeln!(w, "x,p,f")?;
    for (i, x) in f.grid.gx.points().enumerate() {
        for (j, p) in f.grid.gp.points().enumerate() {
            writeln!(w, "{x},{p},{}", f.values[[i, j]])?;
        }
    }
    Ok(w.flush()?)
}

/// Whitespace matrix, one row per x, one column per p.
pub fn write_heatmap(path: &Path, f: &QuasiDistribution) -> Result<()> {
    let mut w = std::io::BufWriter::new(fs::File::create(path)?);
    let (gx, gp) = (f.grid.gx, f.grid.gp);
    writeln!(
        w,
        "# rows: x from {} step {} ({}); columns: p from {} step {} ({})",
        gx.min,
        gx.dx(),
        gx.n,
        gp.min,
        gp.dx(),
        gp.n
    )?;
    for row in f.values.rows() {
        let line: Vec<String> = row.iter().map(|v| format!("{v:.12e}")).collect();
        writeln!(w, "{}", line.join(" "))?;
    }
    Ok(w.flush()?)
}

pub fn write_marginal_csv(path: &Path, m: &Marginal) -> Result<()> {
    let mut w = std::io::BufWriter::new(fs::File::create(path)?);
    writeln!(w, "z,g")?;
    for (z, g) in m.grid.points().zip(&m.values) {
        writeln!(w, "{z},{g}")?;
    }
    Ok(w.flush()?)
}
