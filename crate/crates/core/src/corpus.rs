//! Batch analysis of a directory of `.curve` files, and the bundled corpus.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::analysis::{analyze, AnalyzeOptions};
use crate::dsl::parse_curve;
use crate::error::Result;
use crate::report::{analysis_json, error_json, render};
use crate::Settings;

/// The six reference curves, as `(name, text)`.
pub const BUNDLED: [(&str, &str); 6] = [
    ("E1", include_str!("../corpus/E1.curve")),
    ("E2", include_str!("../corpus/E2.curve")),
    ("E3", include_str!("../corpus/E3.curve")),
    ("E4", include_str!("../corpus/E4.curve")),
    ("E5", include_str!("../corpus/E5.curve")),
    ("E6", include_str!("../corpus/E6.curve")),
];

pub fn bundled(name: &str) -> Option<&'static str> {
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorpusEntry {
    pub name: String,
    pub passed: bool,
    /// Exit code the file would produce on its own.
    pub exit_code: i32,
    pub message: String,
    pub report: Value,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorpusSummary {
    pub entries: Vec<CorpusEntry>,
}

impl CorpusSummary {
    pub fn passed(&self) -> usize {
        self.entries.iter().filter(|e| e.passed).count()
    }

    pub fn all_passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }

    pub fn table(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(&format!("{:<24} {:<4} {}\n", e.name, if e.passed { "PASS" } else { "FAIL" }, e.message));
        }
        out.push_str(&format!("{} of {} passed\n", self.passed(), self.entries.len()));
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "total": self.entries.len(),
            "passed": self.passed(),
            "entries": self.entries.iter().map(|e| json!({
                "name": e.name, "passed": e.passed, "exit_code": e.exit_code, "message": e.message,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Analyzes one `.curve` text; violations of the verdicts count as failures.
pub fn run_text(name: &str, text: &str, settings: &Settings, options: &AnalyzeOptions) -> CorpusEntry {
    let result = parse_curve(text).and_then(|c| {
        let a = analyze(&c, settings, options)?;
        let report = analysis_json(name, &c, &a, settings);
        Ok((a.enforce(), report))
    });
    match result {
        Ok((Ok(()), report)) => {
            CorpusEntry { name: name.into(), passed: true, exit_code: 0, message: "ok".into(), report }
        }
        Ok((Err(e), report)) => CorpusEntry {
            name: name.into(),
            passed: false,
            exit_code: e.class().exit_code(),
            message: e.to_string(),
            report,
        },
        Err(e) => CorpusEntry {
            name: name.into(),
            passed: false,
            exit_code: e.class().exit_code(),
            message: e.to_string(),
            report: error_json(name, &e),
        },
    }
}

fn curve_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let read = fs::read_dir(dir).map_err(|e| crate::Error::InvalidData(format!("{}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> = read
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().map_or(false, |x| x == "curve"))
        .collect();
    files.sort();
    Ok(files)
}

/// Analyzes every `.curve` file of a directory; with `out`, writes one
/// report per curve and `summary.json` there.
pub fn corpus_run(dir: &Path, out: Option<&Path>, settings: &Settings, options: &AnalyzeOptions) -> Result<CorpusSummary> {
    let files = curve_files(dir)?;
    let entries: Vec<CorpusEntry> = files
        .par_iter()
        .map(|path| {
            let name = path.file_stem().unwrap().to_string_lossy().into_owned();
            match fs::read_to_string(path) {
                Ok(text) => run_text(&name, &text, settings, options),
                Err(e) => {
                    let err = crate::Error::InvalidData(format!("{}: {e}", path.display()));
                    CorpusEntry {
                        name: name.clone(),
                        passed: false,
                        exit_code: err.class().exit_code(),
                        message: err.to_string(),
                        report: error_json(&name, &err),
                    }
                }
            }
        })
        .collect();
    let summary = CorpusSummary { entries };
    if let Some(out) = out {
        let io = |e: std::io::Error| crate::Error::InvalidData(format!("{}: {e}", out.display()));
        fs::create_dir_all(out).map_err(io)?;
        for e in &summary.entries {
            fs::write(out.join(format!("{}.json", e.name)), render(&e.report)).map_err(io)?;
        }
        fs::write(out.join("summary.json"), render(&summary.to_json())).map_err(io)?;
    }
    Ok(summary)
}
