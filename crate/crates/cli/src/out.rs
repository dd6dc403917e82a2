//! Deterministic CSV output: 17 significant digits, fixed row order,
//! provenance comments as `# source:` lines.

use std::io::Write;
use std::path::Path;

pub fn fmt(x: f64) -> String {
    format!("{:.16e}", x)
}

pub struct Csv {
    pub source: Vec<String>,
    pub header: String,
    pub lines: Vec<String>,
}

impl Csv {
    pub fn wide(source: &[String], header: &str, rows: &[Vec<f64>]) -> Csv {
        Csv {
            source: source.to_vec(),
            header: header.to_string(),
            lines: rows
                .iter()
                .map(|r| r.iter().map(|&v| fmt(v)).collect::<Vec<_>>().join(","))
                .collect(),
        }
    }

    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir)?;
        }
        let mut buf = String::new();
        for s in &self.source {
            buf.push_str("# source: ");
            buf.push_str(s);
            buf.push('\n');
        }
        buf.push_str(&self.header);
        buf.push('\n');
        for l in &self.lines {
            buf.push_str(l);
            buf.push('\n');
        }
        let mut f = std::fs::File::create(path)?;
        f.write_all(buf.as_bytes())
    }

    /// Numeric column extraction for plotting (non-numeric cells skipped).
    pub fn column(&self, idx: usize) -> Vec<f64> {
        self.lines
            .iter()
            .filter_map(|l| l.split(',').nth(idx).and_then(|v| v.parse().ok()))
            .collect()
    }
}
