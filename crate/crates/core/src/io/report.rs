//! Evaluation reports: one row per (frame, scheme) plus mean and 95%
//! half-width per (scheme, metric).
//!
//! CSV output has two blocks separated by a blank line, each with its own
//! header. JSON output is an object with `per_frame` and `summary` arrays
//! using the same field names. Floating-point values carry six decimals.

use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::eval::{compute_metrics, summarize, Counts, Metrics};

pub const FRAME_HEADER: &str = "frame,scheme,tp,fn,fp,precision,recall,fscore,pwc";
pub const SUMMARY_HEADER: &str = "scheme,metric,mean,ci95_halfwidth,n";

fn six_decimals<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64((v * 1e6).round() / 1e6)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrameRow {
    pub frame: usize,
    pub scheme: String,
    pub tp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub fp: usize,
    #[serde(serialize_with = "six_decimals")]
    pub precision: f64,
    #[serde(serialize_with = "six_decimals")]
    pub recall: f64,
    #[serde(serialize_with = "six_decimals")]
    pub fscore: f64,
    #[serde(serialize_with = "six_decimals")]
    pub pwc: f64,
}

impl FrameRow {
    pub fn new(frame: usize, scheme: impl Into<String>, counts: Counts) -> Self {
        let m = compute_metrics(counts);
        Self {
            frame,
            scheme: scheme.into(),
            tp: counts.tp,
            fn_: counts.fn_,
            fp: counts.fp,
            precision: m.precision,
            recall: m.recall,
            fscore: m.fscore,
            pwc: m.pwc,
        }
    }

    pub fn counts(&self) -> Counts {
        Counts::new(self.tp, self.fn_, self.fp)
    }

    pub fn metrics(&self) -> Metrics {
        Metrics {
            precision: self.precision,
            recall: self.recall,
            fscore: self.fscore,
            pwc: self.pwc,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub scheme: String,
    pub metric: String,
    #[serde(serialize_with = "six_decimals")]
    pub mean: f64,
    #[serde(serialize_with = "six_decimals")]
    pub ci95_halfwidth: f64,
    pub n: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub per_frame: Vec<FrameRow>,
    pub summary: Vec<SummaryRow>,
}

impl EvalReport {
    /// Sorts rows by frame (stable within a frame) and derives the summary.
    /// Schemes are summarized in order of first appearance.
    pub fn from_rows(mut per_frame: Vec<FrameRow>) -> Result<Self> {
        per_frame.sort_by_key(|r| r.frame);
        let summary = summarize_rows(&per_frame)?;
        Ok(Self { per_frame, summary })
    }

    pub fn schemes(&self) -> Vec<&str> {
        let mut seen: Vec<&str> = Vec::new();
        for r in &self.per_frame {
            if !seen.contains(&r.scheme.as_str()) {
                seen.push(&r.scheme);
            }
        }
        seen
    }

    /// Summed counts for one scheme over all its frames.
    pub fn total_counts(&self, scheme: &str) -> Counts {
        self.per_frame.iter().filter(|r| r.scheme == scheme).map(FrameRow::counts).sum()
    }

    pub fn summary_for(&self, scheme: &str, metric: &str) -> Option<&SummaryRow> {
        self.summary.iter().find(|s| s.scheme == scheme && s.metric == metric)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(FRAME_HEADER);
        out.push('\n');
        for r in &self.per_frame {
            out.push_str(&format!(
                "{},{},{},{},{},{:.6},{:.6},{:.6},{:.6}\n",
                r.frame, r.scheme, r.tp, r.fn_, r.fp, r.precision, r.recall, r.fscore, r.pwc
            ));
        }
        out.push('\n');
        out.push_str(SUMMARY_HEADER);
        out.push('\n');
        for s in &self.summary {
            out.push_str(&format!(
                "{},{},{:.6},{:.6},{}\n",
                s.scheme, s.metric, s.mean, s.ci95_halfwidth, s.n
            ));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn parse_csv(text: &str) -> Result<Self> {
        let mut blocks = text.split("\n\n");
        let frames = blocks.next().unwrap_or_default();
        let summary = blocks.next().unwrap_or_default();
        Ok(Self {
            per_frame: parse_block(frames, FRAME_HEADER)?,
            summary: parse_block(summary, SUMMARY_HEADER)?,
        })
    }

    pub fn parse_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::format(e.column(), format!("line {}: {e}", e.line())))
    }
}

fn parse_block<T: for<'de> Deserialize<'de>>(block: &str, header: &str) -> Result<Vec<T>> {
    let block = block.trim_start_matches('\n');
    if !block.starts_with(header) {
        return Err(Error::format(0, format!("report block must start with {header:?}")));
    }
    let mut reader = csv::Reader::from_reader(block.as_bytes());
    reader
        .deserialize()
        .map(|r| {
            r.map_err(|e: csv::Error| {
                let offset = e.position().map_or(0, |p| p.byte() as usize);
                Error::format(offset, e.to_string())
            })
        })
        .collect()
}

/// Mean and CI per (scheme, metric), from per-frame rows in the given order.
pub fn summarize_rows(rows: &[FrameRow]) -> Result<Vec<SummaryRow>> {
    let mut schemes: Vec<&str> = Vec::new();
    for r in rows {
        if !schemes.contains(&r.scheme.as_str()) {
            schemes.push(&r.scheme);
        }
    }
    let mut out = Vec::new();
    for scheme in schemes {
        let metrics: Vec<Metrics> = rows.iter().filter(|r| r.scheme == scheme).map(FrameRow::metrics).collect();
        for name in Metrics::NAMES {
            let values: Vec<f64> = metrics.iter().map(|m| m.get(name).unwrap()).collect();
            let s = summarize(&values)?;
            out.push(SummaryRow {
                scheme: scheme.to_string(),
                metric: name.to_string(),
                mean: s.mean,
                ci95_halfwidth: s.ci95_halfwidth,
                n: s.n,
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ReportFormat {
    #[default]
    Csv,
    Json,
}

impl ReportFormat {
    /// `json` for `.json` paths, CSV otherwise.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => ReportFormat::Json,
            _ => ReportFormat::Csv,
        }
    }
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(Error::Param(format!("unknown report format {other:?}"))),
        }
    }
}

pub fn write_report(report: &EvalReport, path: impl AsRef<Path>, format: ReportFormat) -> Result<()> {
    let path = path.as_ref();
    let text = match format {
        ReportFormat::Csv => report.to_csv(),
        ReportFormat::Json => report.to_json(),
    };
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> EvalReport {
        EvalReport::from_rows(vec![
            FrameRow::new(1, "noop", Counts::new(38, 2, 61)),
            FrameRow::new(0, "noop", Counts::new(40, 0, 0)),
            FrameRow::new(0, "proposed", Counts::new(39, 1, 1)),
            FrameRow::new(1, "proposed", Counts::new(37, 3, 0)),
        ])
        .unwrap()
    }

    #[test]
    fn perfect_frame_row() {
        let r = EvalReport::from_rows(vec![FrameRow::new(0, "noop", Counts::new(40, 0, 0))]).unwrap();
        let csv = r.to_csv();
        assert!(csv.contains("\n0,noop,40,0,0,1.000000,1.000000,1.000000,0.000000\n"), "{csv}");
        assert!(csv.contains("noop,pwc,0.000000,0.000000,1\n"), "{csv}");
    }

    #[test]
    fn rows_sorted_and_summarized() {
        let r = sample();
        assert_eq!(r.per_frame.iter().map(|f| f.frame).collect::<Vec<_>>(), vec![0, 0, 1, 1]);
        assert_eq!(r.schemes(), vec!["noop", "proposed"]);
        assert_eq!(r.summary.len(), 8);
        assert_eq!(r.total_counts("noop"), Counts::new(78, 2, 61));
        let recall = r.summary_for("proposed", "recall").unwrap();
        assert!((recall.mean - (39.0 / 40.0 + 37.0 / 40.0) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn text_round_trips() {
        let r = sample();
        let csv = r.to_csv();
        assert_eq!(EvalReport::parse_csv(&csv).unwrap().to_csv(), csv);
        let json = r.to_json();
        let back = EvalReport::parse_json(&json).unwrap();
        assert_eq!(back.to_json(), json);
        assert_eq!(back.to_csv(), csv);
        assert!(json.contains("\"fn\": 2"));
    }

    #[test]
    fn bad_blocks_are_rejected() {
        assert!(EvalReport::parse_csv("nope\n").is_err());
        assert!(EvalReport::parse_json("{").is_err());
        assert_eq!("json".parse::<ReportFormat>().unwrap(), ReportFormat::Json);
        assert_eq!(ReportFormat::from_path(Path::new("a/b.JSON")), ReportFormat::Json);
    }
}
