//! Frequency / support / confidence rows for mined patterns.
//!
//! A pattern `A > B > C` is read as the rule `(A > B) => C`: its
//! confidence is the support of the whole pattern over the support of the
//! pattern without its last element. Frequency counts minimal
//! occurrences, so one sequence may contribute more than once.

use std::cmp::Ordering;
use std::io::Write;
use std::str::FromStr;

use serde::Serialize;

use crate::error::RuleError;
use crate::pattern::PatternSet;
use crate::sequence::{contains_subsequence, Dictionary, Element, Sequence, SequenceDatabase};

pub const REPORT_HEADER: [&str; 4] = ["activity_sequence", "frequency", "support", "confidence"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RuleRow {
    #[serde(skip)]
    pub pattern: Sequence,
    pub activity_sequence: String,
    pub frequency: usize,
    pub support_count: usize,
    pub support: f64,
    pub confidence: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SortKey {
    Frequency,
    Support,
    Confidence,
}

impl FromStr for SortKey {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "frequency" => Ok(SortKey::Frequency),
            "support" => Ok(SortKey::Support),
            "confidence" => Ok(SortKey::Confidence),
            other => Err(format!(
                "unknown sort key {other:?}; expected frequency, support or confidence"
            )),
        }
    }
}

/// Which patterns become report rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportShape {
    /// Exactly `n` single-item elements, e.g. `Dining > Hiking > Shopping`.
    Activities(usize),
    /// Any pattern with at least two elements.
    AnyRule,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReportOptions {
    pub shape: ReportShape,
    pub sort: SortKey,
    pub top_k: Option<usize>,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            shape: ReportShape::Activities(3),
            sort: SortKey::Frequency,
            top_k: None,
        }
    }
}

/// Number of sequences containing `p`, and that count over the database size.
pub fn pattern_support(db: &SequenceDatabase, p: &Sequence) -> (usize, f64) {
    let count = db
        .sequences()
        .iter()
        .filter(|s| contains_subsequence(s, p))
        .count();
    let rel = if db.is_empty() {
        0.0
    } else {
        count as f64 / db.len() as f64
    };
    (count, rel)
}

/// `support(p) / support(p without its last element)`.
pub fn rule_confidence(db: &SequenceDatabase, p: &Sequence) -> Result<f64, RuleError> {
    if p.len() < 2 {
        return Err(RuleError::UndefinedConfidence(format!(
            "{}: a rule needs at least two elements",
            db.render(p)
        )));
    }
    let (antecedent, _) = pattern_support(db, &p.antecedent());
    if antecedent == 0 {
        return Err(RuleError::UndefinedConfidence(format!(
            "{}: antecedent never occurs",
            db.render(p)
        )));
    }
    let (full, _) = pattern_support(db, p);
    Ok(full as f64 / antecedent as f64)
}

/// Minimal occurrences of `p` in one sequence: windows `[start, end]`
/// containing `p` that hold no smaller such window.
pub fn minimal_occurrences(s: &Sequence, p: &Sequence) -> usize {
    let (Some(first), elements) = (p.elements().first(), s.elements()) else {
        return 0;
    };
    let ends: Vec<usize> = (0..elements.len())
        .filter(|&st| elements[st].is_superset_of(first.items()))
        .filter_map(|st| match_end_from(elements, p.elements(), st))
        .collect();
    // ends are non-decreasing in start; a window is minimal iff the next
    // start that matches ends strictly later
    ends.iter()
        .enumerate()
        .filter(|&(k, e)| ends.get(k + 1).is_none_or(|next| next > e))
        .count()
}

fn match_end_from(elements: &[Element], pattern: &[Element], start: usize) -> Option<usize> {
    let mut pos = start;
    let mut end = start;
    for (k, pel) in pattern.iter().enumerate() {
        let from = if k == 0 { start } else { pos };
        let j = (from..elements.len()).find(|&j| elements[j].is_superset_of(pel.items()))?;
        if k == 0 && j != start {
            return None;
        }
        end = j;
        pos = j + 1;
    }
    Some(end)
}

/// Total minimal occurrences of `p` across the database.
pub fn pattern_frequency(db: &SequenceDatabase, p: &Sequence) -> usize {
    db.sequences()
        .iter()
        .map(|s| minimal_occurrences(s, p))
        .sum()
}

/// Elements joined by `" > "`; items inside a multi-item element by `" + "`.
pub fn render_activities(p: &Sequence, dict: &Dictionary) -> String {
    p.elements()
        .iter()
        .map(|el| {
            el.items()
                .iter()
                .map(|&i| dict.label(i).unwrap_or("?"))
                .collect::<Vec<_>>()
                .join(" + ")
        })
        .collect::<Vec<_>>()
        .join(" > ")
}

fn matches_shape(p: &Sequence, shape: ReportShape) -> bool {
    match shape {
        ReportShape::Activities(n) => p.len() == n && p.item_count() == n && n >= 2,
        ReportShape::AnyRule => p.len() >= 2,
    }
}

fn compare(a: &RuleRow, b: &RuleRow, key: SortKey) -> Ordering {
    let primary = match key {
        SortKey::Frequency => b.frequency.cmp(&a.frequency),
        SortKey::Support => b.support.total_cmp(&a.support),
        SortKey::Confidence => b.confidence.total_cmp(&a.confidence),
    };
    primary.then_with(|| a.pattern.cmp(&b.pattern))
}

/// Report rows for the mined patterns that fit `opts.shape`, sorted
/// descending by `opts.sort` with canonical pattern order breaking ties.
pub fn build_report(
    patterns: &PatternSet,
    db: &SequenceDatabase,
    opts: &ReportOptions,
) -> Vec<RuleRow> {
    let dict = db.dictionary();
    let n = db.len().max(1) as f64;
    let mut rows: Vec<RuleRow> = patterns
        .iter()
        .filter(|p| matches_shape(&p.sequence, opts.shape))
        .filter_map(|p| {
            let antecedent = p.sequence.antecedent();
            let ante_count = patterns
                .support_of(&antecedent)
                .unwrap_or_else(|| pattern_support(db, &antecedent).0);
            if ante_count == 0 {
                return None;
            }
            Some(RuleRow {
                activity_sequence: render_activities(&p.sequence, dict),
                frequency: pattern_frequency(db, &p.sequence),
                support_count: p.support_count,
                support: p.support_count as f64 / n,
                confidence: p.support_count as f64 / ante_count as f64,
                pattern: p.sequence.clone(),
            })
        })
        .collect();
    rows.sort_by(|a, b| compare(a, b, opts.sort));
    if let Some(k) = opts.top_k {
        rows.truncate(k);
    }
    rows
}

/// CSV with header `activity_sequence,frequency,support,confidence`;
/// ratios fixed at six decimals.
pub fn write_report_csv<W: Write>(rows: &[RuleRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(REPORT_HEADER)?;
    for r in rows {
        w.write_record([
            r.activity_sequence.clone(),
            r.frequency.to_string(),
            format!("{:.6}", r.support),
            format!("{:.6}", r.confidence),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_report_jsonl<W: Write>(rows: &[RuleRow], mut out: W) -> std::io::Result<()> {
    for r in rows {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}
