//! Miner configuration and the pattern set both miners produce.

use std::io::Write;

use serde::Serialize;

use crate::error::MineError;
use crate::sequence::{Dictionary, Sequence};

/// Minimum support as an absolute sequence count or a fraction of the
/// database size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MinSupport {
    Count(usize),
    Fraction(f64),
}

impl MinSupport {
    /// Converts to an absolute count for a database of `db_size` sequences.
    /// Fractions become `ceil(fraction * db_size)`.
    pub fn resolve(self, db_size: usize) -> Result<usize, MineError> {
        let count = match self {
            MinSupport::Count(c) => c,
            MinSupport::Fraction(f) => {
                if !(f > 0.0 && f <= 1.0) {
                    return Err(MineError::InvalidConfig(format!(
                        "min-support fraction must be in (0,1], got {f}"
                    )));
                }
                // absorb float noise such as 0.1 * 30 = 3.0000000000000004
                (f * db_size as f64 - 1e-9).ceil().max(0.0) as usize
            }
        };
        if count < 1 {
            return Err(MineError::InvalidConfig(format!(
                "min-support resolves to {count} sequences; must be at least 1"
            )));
        }
        Ok(count)
    }
}

/// Integers are counts; anything with a decimal point or exponent is a
/// fraction, so `1` means one sequence and `1.0` means all of them.
impl std::str::FromStr for MinSupport {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if let Ok(c) = s.parse::<usize>() {
            return if c == 0 {
                Err("min-support count must be at least 1".into())
            } else {
                Ok(MinSupport::Count(c))
            };
        }
        match s.parse::<f64>() {
            Ok(f) if f > 0.0 && f <= 1.0 => Ok(MinSupport::Fraction(f)),
            Ok(f) => Err(format!("min-support fraction must be in (0,1], got {f}")),
            Err(_) => Err(format!(
                "min-support must be a count or a fraction, got {s:?}"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinerConfig {
    pub min_support: MinSupport,
    /// Cap on the total item count of a pattern.
    pub max_length: Option<usize>,
    /// Patterns with fewer items are mined through but not reported.
    pub min_pattern_length: Option<usize>,
    /// Fan out over first-level items on the rayon pool.
    pub parallel: bool,
}

impl MinerConfig {
    pub fn new(min_support: MinSupport) -> Self {
        MinerConfig {
            min_support,
            max_length: None,
            min_pattern_length: None,
            parallel: true,
        }
    }

    pub fn with_max_length(mut self, max_length: usize) -> Self {
        self.max_length = Some(max_length);
        self
    }

    pub fn with_min_pattern_length(mut self, len: usize) -> Self {
        self.min_pattern_length = Some(len);
        self
    }

    pub fn serial(mut self) -> Self {
        self.parallel = false;
        self
    }

    pub(crate) fn validate(&self) -> Result<(), MineError> {
        if self.max_length == Some(0) {
            return Err(MineError::InvalidConfig(
                "max-length must be at least 1".into(),
            ));
        }
        Ok(())
    }

    pub(crate) fn max_items(&self) -> usize {
        self.max_length.unwrap_or(usize::MAX)
    }

    pub(crate) fn reports(&self, item_count: usize) -> bool {
        item_count >= self.min_pattern_length.unwrap_or(1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pattern {
    pub sequence: Sequence,
    pub support_count: usize,
}

/// Patterns of one mining run in canonical order, with the size of the
/// database they were mined from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternSet {
    patterns: Vec<Pattern>,
    db_size: usize,
}

#[derive(Serialize)]
struct PatternRecord<'a> {
    pattern: &'a str,
    support_count: usize,
    relative_support: f64,
}

impl PatternSet {
    /// Sorts into canonical order.
    pub fn new(mut patterns: Vec<Pattern>, db_size: usize) -> Self {
        patterns.sort_unstable();
        PatternSet { patterns, db_size }
    }

    pub fn patterns(&self) -> &[Pattern] {
        &self.patterns
    }

    pub fn iter(&self) -> impl Iterator<Item = &Pattern> {
        self.patterns.iter()
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn db_size(&self) -> usize {
        self.db_size
    }

    /// Support count of `seq`, if it was reported.
    pub fn support_of(&self, seq: &Sequence) -> Option<usize> {
        self.patterns
            .binary_search_by(|p| p.sequence.cmp(seq))
            .ok()
            .map(|i| self.patterns[i].support_count)
    }

    pub fn relative_support(&self, p: &Pattern) -> f64 {
        if self.db_size == 0 {
            0.0
        } else {
            p.support_count as f64 / self.db_size as f64
        }
    }

    /// Patterns whose first item is `item`.
    pub fn starting_with(&self, item: u32) -> impl Iterator<Item = &Pattern> {
        self.patterns
            .iter()
            .filter(move |p| p.sequence.elements().first().map(|e| e.items()[0]) == Some(item))
    }

    /// CSV with header `pattern,support_count,relative_support`.
    pub fn write_csv<W: Write>(&self, dict: &Dictionary, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["pattern", "support_count", "relative_support"])?;
        for p in &self.patterns {
            w.write_record([
                p.sequence.render(dict),
                p.support_count.to_string(),
                format!("{:.6}", self.relative_support(p)),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// One JSON object per line.
    pub fn write_jsonl<W: Write>(&self, dict: &Dictionary, mut out: W) -> std::io::Result<()> {
        for p in &self.patterns {
            let pattern = p.sequence.render(dict);
            let rec = PatternRecord {
                pattern: &pattern,
                support_count: p.support_count,
                relative_support: self.relative_support(p),
            };
            serde_json::to_writer(&mut out, &rec)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }
}
