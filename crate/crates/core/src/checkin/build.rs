use std::collections::BTreeSet;
use std::time::Duration;

use chrono::{DateTime, Utc};

use super::window::{Groups, WindowKey};
use crate::sequence::SequenceDatabase;

/// Activities that happened together, stamped with the earliest check-in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActivityElement {
    pub timestamp: DateTime<Utc>,
    pub activities: Vec<String>,
}

/// Time-ordered activity stream of one user, optionally within one window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TouristSequence {
    pub user_id: String,
    pub window: Option<String>,
    pub activities: Vec<ActivityElement>,
}

impl TouristSequence {
    /// `user` for whole-trip sequences, `user@window` otherwise.
    pub fn sequence_id(&self) -> String {
        match &self.window {
            Some(w) => format!("{}@{}", self.user_id, w),
            None => self.user_id.clone(),
        }
    }
}

/// Orders every group by time and merges check-ins that fall within
/// `merge_resolution` of the first check-in of the current element.
/// The unwindowed group is skipped.
pub fn tourist_sequences(groups: &Groups, merge_resolution: Duration) -> Vec<TouristSequence> {
    let res = chrono::Duration::from_std(merge_resolution).unwrap_or(chrono::Duration::MAX);
    let mut out = Vec::with_capacity(groups.len());
    for (key, members) in groups.iter() {
        if key.window == WindowKey::Unwindowed || members.is_empty() {
            continue;
        }
        let mut ordered: Vec<_> = members.iter().collect();
        ordered.sort_by(|a, b| {
            (a.checkin.timestamp, &a.checkin.checkin_id)
                .cmp(&(b.checkin.timestamp, &b.checkin.checkin_id))
        });
        let mut elements: Vec<ActivityElement> = Vec::new();
        let mut current: BTreeSet<&str> = BTreeSet::new();
        let mut anchor = ordered[0].checkin.timestamp;
        for c in ordered {
            let ts = c.checkin.timestamp;
            if !current.is_empty() && ts - anchor > res {
                elements.push(ActivityElement {
                    timestamp: anchor,
                    activities: current.iter().map(|s| s.to_string()).collect(),
                });
                current.clear();
            }
            if current.is_empty() {
                anchor = ts;
            }
            current.insert(&c.activity);
        }
        elements.push(ActivityElement {
            timestamp: anchor,
            activities: current.iter().map(|s| s.to_string()).collect(),
        });
        out.push(TouristSequence {
            user_id: key.user_id.clone(),
            window: key.window.name().map(str::to_owned),
            activities: elements,
        });
    }
    out
}

/// One database sequence per (user, window) group.
pub fn build_sequences(groups: &Groups, merge_resolution: Duration) -> SequenceDatabase {
    let rows = tourist_sequences(groups, merge_resolution)
        .into_iter()
        .map(|t| {
            let id = t.sequence_id();
            (
                id,
                t.activities
                    .into_iter()
                    .map(|e| e.activities)
                    .collect::<Vec<_>>(),
            )
        })
        .collect();
    SequenceDatabase::from_labeled(rows).expect("activity elements are non-empty")
}
