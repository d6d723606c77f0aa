//! From raw check-ins to a sequence database of tourist activities.

mod activity;
mod build;
mod record;
mod synth;
mod window;

use std::time::Duration;

use chrono::FixedOffset;
use thiserror::Error;

pub use activity::{
    apply_activity_map, ActivityMap, CategoryPattern, TaggedBatch, TaggedCheckIn, OTHER_ACTIVITY,
};
pub use build::{build_sequences, tourist_sequences, ActivityElement, TouristSequence};
pub use record::{
    format_timestamp, parse_checkins, parse_timestamp, write_checkins, CheckIn, InputFormat,
    ParseOutcome, Reject, CHECKIN_COLUMNS,
};
pub use synth::{generate_synthetic, CategoryWeight, GeneratorConfig};
pub use window::{
    default_offset, group_by_trip, parse_utc_offset, segment_windows, GroupKey, Groups, WindowKey,
    WindowSpec,
};

use crate::sequence::SequenceDatabase;

#[derive(Debug, Error, PartialEq)]
pub enum PipelineError {
    #[error("format error: {0}")]
    Format(String),
    #[error("config line {line}: {msg}")]
    Config { line: usize, msg: String },
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for PipelineError {
    fn from(e: std::io::Error) -> Self {
        PipelineError::Io(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Grouping {
    /// One sequence per (user, window).
    Window,
    /// One sequence per user over the whole trip.
    Trip,
}

impl std::str::FromStr for Grouping {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "window" => Ok(Grouping::Window),
            "trip" => Ok(Grouping::Trip),
            other => Err(format!(
                "unknown grouping {other:?}; expected window or trip"
            )),
        }
    }
}

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub activity_map: ActivityMap,
    pub windows: Vec<WindowSpec>,
    pub tz: FixedOffset,
    pub grouping: Grouping,
    pub merge_resolution: Duration,
    /// Keep only check-ins with this gender, when set.
    pub gender: Option<String>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            activity_map: ActivityMap::default(),
            windows: WindowSpec::defaults(),
            tz: default_offset(),
            grouping: Grouping::Window,
            merge_resolution: Duration::ZERO,
            gender: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PipelineOutput {
    pub db: SequenceDatabase,
    pub blocked: usize,
    pub unmatched: usize,
    pub unwindowed: usize,
}

/// Filter, tag, group and sequence a batch of check-ins.
pub fn run_pipeline(checkins: Vec<CheckIn>, cfg: &PipelineConfig) -> PipelineOutput {
    let checkins = match &cfg.gender {
        Some(g) => checkins
            .into_iter()
            .filter(|c| {
                c.gender
                    .as_deref()
                    .is_some_and(|x| x.eq_ignore_ascii_case(g))
            })
            .collect(),
        None => checkins,
    };
    let batch = apply_activity_map(checkins, &cfg.activity_map);
    let groups = match cfg.grouping {
        Grouping::Window => segment_windows(&batch.tagged, &cfg.windows, &cfg.tz),
        Grouping::Trip => group_by_trip(&batch.tagged),
    };
    PipelineOutput {
        db: build_sequences(&groups, cfg.merge_resolution),
        blocked: batch.blocked,
        unmatched: batch.unmatched,
        unwindowed: groups.unwindowed_count(),
    }
}
