use std::fmt::Write as _;
use std::path::Path;

use crate::error::Result;

/// Numeric field with 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Comma-separated table with a header row and LF line endings.
pub struct Csv {
    header: Vec<&'static str>,
    rows: Vec<Vec<f64>>,
}

impl Csv {
    pub fn new(header: &[&'static str]) -> Self {
        Self { header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.header.len(), "row width must match header");
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.iter().map(|&x| num(x)).collect::<Vec<_>>().join(","));
            s.push('\n');
        }
        s
    }
}

/// Ordered key-value report, rendered both as `key=value` lines and as text.
#[derive(Default)]
pub struct Report {
    entries: Vec<(String, String)>,
    notes: Vec<String>,
}

impl Report {
    pub fn num(&mut self, key: impl Into<String>, x: f64) {
        self.entries.push((key.into(), num(x)));
    }

    pub fn text(&mut self, key: impl Into<String>, v: impl Into<String>) {
        self.entries.push((key.into(), v.into()));
    }

    pub fn flag(&mut self, key: impl Into<String>, v: bool) {
        self.text(key, if v { "PASS" } else { "FAIL" });
    }

    /// Free-text line shown only in the human-readable report.
    pub fn note(&mut self, line: impl Into<String>) {
        self.notes.push(line.into());
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn render_kv(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.entries {
            let _ = writeln!(s, "{k}={v}");
        }
        s
    }

    pub fn render_text(&self, title: &str) -> String {
        let mut s = format!("{title}\n{}\n", "=".repeat(title.len()));
        let width = self.entries.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        for (k, v) in &self.entries {
            let _ = writeln!(s, "{k:<width$}  {v}");
        }
        if !self.notes.is_empty() {
            s.push('\n');
            for n in &self.notes {
                let _ = writeln!(s, "{n}");
            }
        }
        s
    }
}

/// Files produced by one command, plus its pass/fail checks.
pub struct Outcome {
    pub command: &'static str,
    pub files: Vec<(String, String)>,
    pub report: Report,
    pub verdicts: Vec<(String, bool)>,
}

impl Outcome {
    pub fn file(&self, name: &str) -> Option<&str> {
        self.files.iter().find(|(n, _)| n == name).map(|(_, c)| c.as_str())
    }

    pub fn verdict(&self, name: &str) -> Option<bool> {
        self.verdicts.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }

    /// Write every file, the two report renderings and the run manifest into `dir`.
    pub fn write(&self, dir: &Path, scenario: &str, hash: &str, wall_clock: f64) -> Result<Vec<String>> {
        std::fs::create_dir_all(dir)?;
        let mut names = Vec::new();
        let title = format!("decolab {} {scenario}", self.command);
        let mut all = self.files.clone();
        all.push(("report.txt".into(), self.report.render_text(&title)));
        all.push(("report.kv".into(), self.report.render_kv()));
        for (name, content) in &all {
            std::fs::write(dir.join(name), content)?;
            names.push(name.clone());
        }
        let mut m = String::new();
        let _ = writeln!(m, "tool=decolab");
        let _ = writeln!(m, "version={}", env!("CARGO_PKG_VERSION"));
        let _ = writeln!(m, "command={}", self.command);
        let _ = writeln!(m, "scenario={scenario}");
        let _ = writeln!(m, "scenario_hash={hash}");
        let _ = writeln!(m, "wall_clock_seconds={wall_clock:.6}");
        let _ = writeln!(m, "files={}", names.join(","));
        for (k, v) in &self.verdicts {
            let _ = writeln!(m, "verdict.{k}={}", if *v { "PASS" } else { "FAIL" });
        }
        std::fs::write(dir.join("manifest.kv"), m)?;
        names.push("manifest.kv".into());
        Ok(names)
    }
}
