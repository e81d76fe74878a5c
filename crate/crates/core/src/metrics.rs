//! Line counts, savings and duplication over rule sources and generated
//! rule families.
//!
//! Lines are trimmed; blank lines and lines holding only a `//` comment are
//! not counted. A line occurring `n` times across a file set contributes
//! `n - 1` duplicates.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::diagnostic::Diagnostic;
use crate::emit::rendered_files;
use crate::model::{BuildConfig, Span};
use crate::preprocess::build;
use crate::source::{FileSource, Language};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct LineStats {
    pub files: usize,
    pub total_lines: usize,
    pub duplicate_lines: usize,
    pub unique_duplicated: usize,
}

impl LineStats {
    pub fn duplicate_ratio(&self) -> f64 {
        if self.total_lines == 0 {
            0.0
        } else {
            self.duplicate_lines as f64 / self.total_lines as f64
        }
    }
}

/// The counted form of a line, or `None` if it does not count.
pub fn normalize_line(line: &str) -> Option<&str> {
    let t = line.trim();
    if t.is_empty() || t.starts_with("//") {
        None
    } else {
        Some(t)
    }
}

/// Counts a set of in-memory texts, one per file.
pub fn count_texts<'a>(texts: impl IntoIterator<Item = &'a str>) -> LineStats {
    let mut occurrences: HashMap<&str, usize> = HashMap::new();
    let mut stats = LineStats::default();
    for text in texts {
        stats.files += 1;
        for line in text.lines().filter_map(normalize_line) {
            stats.total_lines += 1;
            *occurrences.entry(line).or_default() += 1;
        }
    }
    for &n in occurrences.values() {
        if n >= 2 {
            stats.duplicate_lines += n - 1;
            stats.unique_duplicated += 1;
        }
    }
    stats
}

/// Counts files on disk. Unreadable files are reported and left out.
pub fn count_lines(paths: &[PathBuf]) -> (LineStats, Vec<Diagnostic>) {
    let mut texts = Vec::new();
    let mut diags = Vec::new();
    for p in paths {
        match std::fs::read_to_string(p) {
            Ok(t) => texts.push(t),
            Err(e) => diags.push(Diagnostic::error(p.display().to_string(), Span::default(), format!("cannot read: {e}"))),
        }
    }
    (count_texts(texts.iter().map(String::as_str)), diags)
}

/// Every rule, refinement and configuration file under `dir`, recursively,
/// sorted, skipping anything under `exclude`.
pub fn meta_files(dir: &Path, exclude: &[PathBuf]) -> std::io::Result<Vec<PathBuf>> {
    fn walk(dir: &Path, exclude: &[PathBuf], out: &mut Vec<PathBuf>) -> std::io::Result<()> {
        for entry in std::fs::read_dir(dir)? {
            let path = entry?.path();
            if exclude.iter().any(|x| path.starts_with(x)) {
                continue;
            }
            if path.is_dir() {
                walk(&path, exclude, out)?;
            } else if Language::from_path(&path).is_some() {
                out.push(path);
            }
        }
        Ok(())
    }
    let mut out = Vec::new();
    walk(dir, exclude, &mut out)?;
    out.sort();
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesPoint {
    pub config: String,
    pub generated_lines: usize,
    pub cumulative_lines: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SavingsReport {
    pub meta: LineStats,
    pub generated: LineStats,
    /// `1 - meta / generated`; negative infinity when nothing is generated.
    pub savings_ratio: f64,
    pub series: Vec<SeriesPoint>,
    /// 1-based index of the first configuration whose cumulative output
    /// exceeds the meta line count.
    pub breakeven: Option<usize>,
}

#[derive(Serialize)]
struct SavingsJson<'a> {
    meta: LineStats,
    generated: LineStats,
    savings_ratio: Option<f64>,
    breakeven: Option<usize>,
    series: &'a [SeriesPoint],
}

impl SavingsReport {
    pub fn from_parts(meta: LineStats, generated: LineStats, per_config: Vec<(String, usize)>) -> Self {
        let mut cumulative = 0;
        let mut breakeven = None;
        let mut series = Vec::with_capacity(per_config.len());
        for (i, (config, lines)) in per_config.into_iter().enumerate() {
            cumulative += lines;
            if breakeven.is_none() && cumulative > meta.total_lines {
                breakeven = Some(i + 1);
            }
            series.push(SeriesPoint { config, generated_lines: lines, cumulative_lines: cumulative });
        }
        let savings_ratio = if generated.total_lines == 0 {
            f64::NEG_INFINITY
        } else {
            1.0 - meta.total_lines as f64 / generated.total_lines as f64
        };
        SavingsReport { meta, generated, savings_ratio, series, breakeven }
    }

    /// Ratio rounded to two decimals, `None` when undefined.
    pub fn rounded_ratio(&self) -> Option<f64> {
        self.savings_ratio.is_finite().then(|| (self.savings_ratio * 100.0).round() / 100.0)
    }

    pub fn to_json(&self) -> String {
        let j = SavingsJson {
            meta: self.meta,
            generated: self.generated,
            savings_ratio: self.rounded_ratio(),
            breakeven: self.breakeven,
            series: &self.series,
        };
        let mut out = serde_json::to_string(&j).expect("report serializes");
        out.push('\n');
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("config,generated_lines,cumulative_lines,meta_lines\n");
        for p in &self.series {
            let _ = writeln!(out, "{},{},{},{}", p.config, p.generated_lines, p.cumulative_lines, self.meta.total_lines);
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let row = |name: &str, s: &LineStats| {
            format!(
                "{name:<10} files {:>4}  lines {:>6}  duplicates {:>6}  distinct duplicated {:>5}\n",
                s.files, s.total_lines, s.duplicate_lines, s.unique_duplicated
            )
        };
        out.push_str(&row("meta", &self.meta));
        out.push_str(&row("generated", &self.generated));
        match self.rounded_ratio() {
            Some(r) => {
                let _ = writeln!(out, "savings    {:.0}%", r * 100.0);
            }
            None => out.push_str("savings    n/a (nothing generated)\n"),
        }
        match self.breakeven {
            Some(b) => {
                let _ = writeln!(out, "breakeven  after configuration {b} ({})", self.series[b - 1].config);
            }
            None => out.push_str("breakeven  not reached\n"),
        }
        for p in &self.series {
            let _ = writeln!(out, "  {:<24} {:>6} {:>7}", p.config, p.generated_lines, p.cumulative_lines);
        }
        out
    }
}

/// Builds each configuration in order, without writing any files, and
/// compares the generated rules with the meta sources.
pub fn savings(meta_paths: &[PathBuf], configs: &[(BuildConfig, &dyn FileSource)]) -> Result<SavingsReport, Vec<Diagnostic>> {
    let (meta, mut diags) = count_lines(meta_paths);
    if !diags.is_empty() {
        return Err(diags);
    }
    let mut generated_texts: Vec<String> = Vec::new();
    let mut per_config = Vec::new();
    for (config, fs) in configs {
        let result = match build(config, *fs) {
            Ok(r) => r,
            Err(errs) => {
                diags.extend(errs);
                continue;
            }
        };
        if result.has_errors() {
            diags.extend(result.diagnostics.into_iter().filter(Diagnostic::is_error));
            continue;
        }
        let files = match rendered_files(&result) {
            Ok(f) => f,
            Err(e) => {
                diags.push(Diagnostic::error(&config.origin.0, config.span, e.to_string()));
                continue;
            }
        };
        let texts: Vec<&str> = files.iter().map(|(_, t)| t.as_str()).collect();
        per_config.push((config.name.clone(), count_texts(texts.iter().copied()).total_lines));
        generated_texts.extend(files.into_iter().map(|(_, t)| t));
    }
    if !diags.is_empty() {
        return Err(diags);
    }
    let generated = count_texts(generated_texts.iter().map(String::as_str));
    Ok(SavingsReport::from_parts(meta, generated, per_config))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_identical_lines() {
        let s = count_texts(["a\na\na\n"]);
        assert_eq!(s, LineStats { files: 1, total_lines: 3, duplicate_lines: 2, unique_duplicated: 1 });
    }

    #[test]
    fn empty_and_comment_lines() {
        assert_eq!(count_texts([""]), LineStats { files: 1, ..Default::default() });
        let s = count_texts(["  // note\n\n   x  \n\tx\n"]);
        assert_eq!((s.total_lines, s.duplicate_lines), (2, 1));
    }

    #[test]
    fn duplicates_span_files() {
        let s = count_texts(["ORDER\n c\n", "ORDER\n d\n"]);
        assert_eq!((s.files, s.total_lines, s.duplicate_lines, s.unique_duplicated), (2, 4, 1, 1));
    }

    #[test]
    fn breakeven_and_ratio() {
        let meta = LineStats { total_lines: 100, ..Default::default() };
        let generated = LineStats { total_lines: 180, ..Default::default() };
        let r = SavingsReport::from_parts(meta, generated, vec![("a".into(), 60), ("b".into(), 60), ("c".into(), 60)]);
        assert_eq!(r.breakeven, Some(2));
        assert_eq!(r.rounded_ratio(), Some(0.44));
        assert_eq!(r.series[2].cumulative_lines, 180);
        assert!(r.to_csv().starts_with("config,generated_lines,cumulative_lines,meta_lines\na,60,60,100\n"));
    }

    #[test]
    fn no_breakeven_yet() {
        let meta = LineStats { total_lines: 100, ..Default::default() };
        let generated = LineStats { total_lines: 40, ..Default::default() };
        let r = SavingsReport::from_parts(meta, generated, vec![("a".into(), 40)]);
        assert_eq!(r.breakeven, None);
        assert!(r.savings_ratio < 0.0);
        assert!(r.to_json().contains("\"breakeven\":null"));
    }

    #[test]
    fn nothing_generated() {
        let r = SavingsReport::from_parts(LineStats::default(), LineStats::default(), vec![]);
        assert_eq!(r.savings_ratio, f64::NEG_INFINITY);
        assert!(r.to_json().contains("\"savings_ratio\":null"));
    }
}
