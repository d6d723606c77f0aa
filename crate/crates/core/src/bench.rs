//! Runtime comparison of the two miners over a list of support levels.
//! Pattern counts must agree; wall times are only recorded.

use std::fmt::Write as _;
use std::io::Write;
use std::time::Instant;

use serde::Serialize;

use crate::error::MineError;
use crate::pattern::{MinSupport, MinerConfig};
use crate::prefixspan::{mine_with_stats, MineStats};
use crate::sequence::SequenceDatabase;
use crate::spam::mine_spam_with_stats;
use crate::PatternSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MinerKind {
    PrefixSpan,
    Spam,
}

impl MinerKind {
    pub const ALL: [MinerKind; 2] = [MinerKind::PrefixSpan, MinerKind::Spam];

    pub fn name(self) -> &'static str {
        match self {
            MinerKind::PrefixSpan => "prefixspan",
            MinerKind::Spam => "spam",
        }
    }

    pub fn run(
        self,
        db: &SequenceDatabase,
        cfg: &MinerConfig,
    ) -> Result<(PatternSet, MineStats), MineError> {
        match self {
            MinerKind::PrefixSpan => mine_with_stats(db, cfg),
            MinerKind::Spam => mine_spam_with_stats(db, cfg),
        }
    }
}

impl std::str::FromStr for MinerKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "prefixspan" => Ok(MinerKind::PrefixSpan),
            "spam" => Ok(MinerKind::Spam),
            other => Err(format!(
                "unknown miner {other:?}; expected prefixspan or spam"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DatasetDescriptor {
    pub n_sequences: usize,
    pub mean_elements: f64,
    pub alphabet: usize,
}

impl DatasetDescriptor {
    pub fn of(db: &SequenceDatabase) -> Self {
        DatasetDescriptor {
            n_sequences: db.len(),
            mean_elements: db.mean_elements(),
            alphabet: db.dictionary().len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchResult {
    pub miner: &'static str,
    #[serde(flatten)]
    pub dataset: DatasetDescriptor,
    pub min_support: String,
    pub min_count: usize,
    /// Median over repeats, seconds.
    pub wall_secs: f64,
    pub peak_bytes: usize,
    pub pattern_count: usize,
    /// 1 for the faster miner at this support level.
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CountMismatch {
    pub min_support: String,
    pub prefixspan: usize,
    pub spam: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct BenchReport {
    pub rows: Vec<BenchResult>,
    pub mismatches: Vec<CountMismatch>,
}

pub fn describe_support(s: MinSupport) -> String {
    match s {
        MinSupport::Count(c) => c.to_string(),
        // keep a decimal point so the value parses back as a fraction
        MinSupport::Fraction(f) if f.fract() == 0.0 => format!("{f:.1}"),
        MinSupport::Fraction(f) => f.to_string(),
    }
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n == 0 {
        0.0
    } else if n % 2 == 1 {
        xs[n / 2]
    } else {
        (xs[n / 2 - 1] + xs[n / 2]) / 2.0
    }
}

/// Runs each miner `repeats` times per support level, one after the
/// other. `parallel` lets the miners use the thread pool.
pub fn run_bench(
    db: &SequenceDatabase,
    supports: &[MinSupport],
    repeats: usize,
    parallel: bool,
) -> Result<BenchReport, MineError> {
    let dataset = DatasetDescriptor::of(db);
    let mut report = BenchReport::default();
    for &support in supports {
        let mut cfg = MinerConfig::new(support);
        cfg.parallel = parallel;
        let min_count = support.resolve(db.len())?;
        let mut level = Vec::new();
        for miner in MinerKind::ALL {
            let mut times = Vec::with_capacity(repeats.max(1));
            let mut last = None;
            for _ in 0..repeats.max(1) {
                let t = Instant::now();
                let out = miner.run(db, &cfg)?;
                times.push(t.elapsed().as_secs_f64());
                last = Some(out);
            }
            let (patterns, stats) = last.expect("at least one repeat");
            level.push(BenchResult {
                miner: miner.name(),
                dataset,
                min_support: describe_support(support),
                min_count,
                wall_secs: median(times),
                peak_bytes: stats.peak_bytes,
                pattern_count: patterns.len(),
                rank: 0,
            });
        }
        let mut order: Vec<usize> = (0..level.len()).collect();
        order.sort_by(|&a, &b| level[a].wall_secs.total_cmp(&level[b].wall_secs));
        for (r, &i) in order.iter().enumerate() {
            level[i].rank = r + 1;
        }
        if level[0].pattern_count != level[1].pattern_count {
            report.mismatches.push(CountMismatch {
                min_support: describe_support(support),
                prefixspan: level[0].pattern_count,
                spam: level[1].pattern_count,
            });
        }
        report.rows.extend(level);
    }
    Ok(report)
}

pub const BENCH_COLUMNS: [&str; 10] = [
    "miner",
    "n_sequences",
    "mean_elements",
    "alphabet",
    "min_support",
    "min_count",
    "wall_secs",
    "peak_bytes",
    "pattern_count",
    "rank",
];

pub fn write_bench_csv<W: Write>(rows: &[BenchResult], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(BENCH_COLUMNS)?;
    for r in rows {
        w.write_record([
            r.miner.to_owned(),
            r.dataset.n_sequences.to_string(),
            format!("{:.4}", r.dataset.mean_elements),
            r.dataset.alphabet.to_string(),
            r.min_support.clone(),
            r.min_count.to_string(),
            format!("{:.6}", r.wall_secs),
            r.peak_bytes.to_string(),
            r.pattern_count.to_string(),
            r.rank.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Fixed-width table for terminals.
pub fn render_table(rows: &[BenchResult]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<11} {:>11} {:>9} {:>10} {:>12} {:>14} {:>9} {:>4}",
        "miner", "min_support", "min_count", "wall_ms", "peak_kib", "patterns", "seqs", "rank"
    );
    for r in rows {
        let _ = writeln!(
            s,
            "{:<11} {:>11} {:>9} {:>10.2} {:>12} {:>14} {:>9} {:>4}",
            r.miner,
            r.min_support,
            r.min_count,
            r.wall_secs * 1e3,
            r.peak_bytes / 1024,
            r.pattern_count,
            r.dataset.n_sequences,
            r.rank
        );
    }
    s
}
