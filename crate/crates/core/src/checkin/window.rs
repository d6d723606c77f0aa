use std::collections::BTreeMap;
use std::fmt;

use chrono::{FixedOffset, Timelike};

use super::{PipelineError, TaggedCheckIn};

const MINUTES_PER_DAY: u16 = 24 * 60;

const DEFAULT_WINDOWS: &str = "window morning 07:00 14:00\nwindow afternoon 14:00 24:00\n";

/// Half-open local time-of-day window `[start, end)`, in minutes after
/// midnight. `end` may be 24:00.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowSpec {
    pub name: String,
    pub start: u16,
    pub end: u16,
}

fn parse_hhmm(s: &str) -> Option<u16> {
    let (h, m) = s.split_once(':')?;
    let (h, m): (u16, u16) = (h.parse().ok()?, m.parse().ok()?);
    if m >= 60 || h > 24 || (h == 24 && m != 0) {
        return None;
    }
    Some(h * 60 + m)
}

fn fmt_hhmm(min: u16) -> String {
    format!("{:02}:{:02}", min / 60, min % 60)
}

impl WindowSpec {
    pub fn new(name: &str, start: &str, end: &str) -> Result<Self, String> {
        let start_m = parse_hhmm(start).ok_or_else(|| format!("bad start time {start:?}"))?;
        let end_m = parse_hhmm(end).ok_or_else(|| format!("bad end time {end:?}"))?;
        if start_m >= end_m || start_m >= MINUTES_PER_DAY {
            return Err(format!("window {name} is empty: {start}..{end}"));
        }
        if name.is_empty() || name.contains(char::is_whitespace) || name.contains('@') {
            return Err(format!("bad window name {name:?}"));
        }
        Ok(WindowSpec {
            name: name.to_owned(),
            start: start_m,
            end: end_m,
        })
    }

    pub fn contains(&self, minute_of_day: u16) -> bool {
        self.start <= minute_of_day && minute_of_day < self.end
    }

    /// Parses `window NAME HH:MM HH:MM` lines; `#` starts a comment.
    pub fn parse_config(text: &str) -> Result<Vec<WindowSpec>, PipelineError> {
        let mut out: Vec<WindowSpec> = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |msg: String| PipelineError::Config { line: i + 1, msg };
            let fields: Vec<&str> = line.split_whitespace().collect();
            let [kw, name, start, end] = fields[..] else {
                return Err(bad("expected `window NAME HH:MM HH:MM`".into()));
            };
            if kw != "window" {
                return Err(bad(format!("unknown directive {kw:?}")));
            }
            let w = WindowSpec::new(name, start, end).map_err(bad)?;
            if out.iter().any(|o| o.name == w.name) {
                return Err(bad(format!("duplicate window {name}")));
            }
            out.push(w);
        }
        Ok(out)
    }

    /// Morning `[07:00,14:00)` and afternoon `[14:00,24:00)`.
    pub fn defaults() -> Vec<WindowSpec> {
        WindowSpec::parse_config(DEFAULT_WINDOWS).expect("default windows parse")
    }
}

impl fmt::Display for WindowSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "window {} {} {}",
            self.name,
            fmt_hhmm(self.start),
            fmt_hhmm(self.end)
        )
    }
}

/// `+08:00`, `-05:30`, `UTC` or `Z`.
pub fn parse_utc_offset(s: &str) -> Result<FixedOffset, String> {
    let s = s.trim();
    if s.eq_ignore_ascii_case("utc") || s == "Z" {
        return Ok(FixedOffset::east_opt(0).expect("zero offset"));
    }
    let bad = || format!("bad UTC offset {s:?}; expected +HH:MM");
    let (sign, rest) = match s.as_bytes().first() {
        Some(b'+') => (1, &s[1..]),
        Some(b'-') => (-1, &s[1..]),
        _ => return Err(bad()),
    };
    let (h, m) = rest.split_once(':').ok_or_else(bad)?;
    let (h, m): (i32, i32) = (h.parse().map_err(|_| bad())?, m.parse().map_err(|_| bad())?);
    if m >= 60 {
        return Err(bad());
    }
    FixedOffset::east_opt(sign * (h * 3600 + m * 60)).ok_or_else(bad)
}

/// Singapore local time.
pub fn default_offset() -> FixedOffset {
    FixedOffset::east_opt(8 * 3600).expect("valid offset")
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum WindowKey {
    /// A configured window, ordered by its position in the window list.
    Named { index: usize, name: String },
    /// Check-ins outside every window.
    Unwindowed,
    /// Whole-trip grouping, no windowing.
    Trip,
}

impl WindowKey {
    pub fn name(&self) -> Option<&str> {
        match self {
            WindowKey::Named { name, .. } => Some(name),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupKey {
    pub user_id: String,
    pub window: WindowKey,
}

/// Check-ins grouped by (user, window), each group in input order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Groups {
    pub map: BTreeMap<GroupKey, Vec<TaggedCheckIn>>,
}

impl Groups {
    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GroupKey, &Vec<TaggedCheckIn>)> {
        self.map.iter()
    }

    pub fn unwindowed_count(&self) -> usize {
        self.map
            .iter()
            .filter(|(k, _)| k.window == WindowKey::Unwindowed)
            .map(|(_, v)| v.len())
            .sum()
    }
}

fn local_minute(c: &TaggedCheckIn, tz: &FixedOffset) -> u16 {
    let t = c.checkin.timestamp.with_timezone(tz);
    (t.hour() * 60 + t.minute()) as u16
}

/// Assigns each check-in to every window containing its local time of day;
/// the rest go to the [`WindowKey::Unwindowed`] group of their user.
pub fn segment_windows(
    tagged: &[TaggedCheckIn],
    windows: &[WindowSpec],
    tz: &FixedOffset,
) -> Groups {
    let mut groups = Groups::default();
    for c in tagged {
        let minute = local_minute(c, tz);
        let mut placed = false;
        for (index, w) in windows.iter().enumerate() {
            if w.contains(minute) {
                placed = true;
                let key = GroupKey {
                    user_id: c.checkin.user_id.clone(),
                    window: WindowKey::Named {
                        index,
                        name: w.name.clone(),
                    },
                };
                groups.map.entry(key).or_default().push(c.clone());
            }
        }
        if !placed {
            let key = GroupKey {
                user_id: c.checkin.user_id.clone(),
                window: WindowKey::Unwindowed,
            };
            groups.map.entry(key).or_default().push(c.clone());
        }
    }
    groups
}

/// One group per user covering the whole trip.
pub fn group_by_trip(tagged: &[TaggedCheckIn]) -> Groups {
    let mut groups = Groups::default();
    for c in tagged {
        let key = GroupKey {
            user_id: c.checkin.user_id.clone(),
            window: WindowKey::Trip,
        };
        groups.map.entry(key).or_default().push(c.clone());
    }
    groups
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checkin::CheckIn;
    use chrono::{TimeZone, Utc};

    fn at_local(user: &str, h: u32, m: u32) -> TaggedCheckIn {
        // local = UTC+8
        let ts = Utc.with_ymd_and_hms(2019, 5, 1, 0, 0, 0).unwrap()
            + chrono::Duration::minutes((h as i64 * 60 + m as i64) - 8 * 60);
        TaggedCheckIn {
            checkin: CheckIn {
                checkin_id: format!("{user}-{h}-{m}"),
                user_id: user.into(),
                timestamp: ts,
                lat: 1.3,
                lon: 103.8,
                category: "Park".into(),
                subcategory: String::new(),
                gender: None,
                origin: None,
            },
            activity: "Nature".into(),
        }
    }

    fn window_of(groups: &Groups) -> Vec<Option<String>> {
        groups
            .iter()
            .map(|(k, _)| k.window.name().map(str::to_owned))
            .collect()
    }

    #[test]
    fn boundaries_are_half_open() {
        let w = WindowSpec::defaults();
        let tz = default_offset();
        let g = segment_windows(&[at_local("u", 13, 59)], &w, &tz);
        assert_eq!(window_of(&g), vec![Some("morning".to_owned())]);
        let g = segment_windows(&[at_local("u", 14, 0)], &w, &tz);
        assert_eq!(window_of(&g), vec![Some("afternoon".to_owned())]);
        let g = segment_windows(&[at_local("u", 3, 0)], &w, &tz);
        assert_eq!(g.map.keys().next().unwrap().window, WindowKey::Unwindowed);
        assert_eq!(g.unwindowed_count(), 1);
        let g = segment_windows(&[at_local("u", 23, 59)], &w, &tz);
        assert_eq!(window_of(&g), vec![Some("afternoon".to_owned())]);
    }

    #[test]
    fn overlapping_windows_share_checkins() {
        let w =
            WindowSpec::parse_config("window day 07:00 23:00\nwindow lunch 11:00 14:00\n").unwrap();
        let g = segment_windows(
            &[at_local("u", 12, 0), at_local("u", 8, 0)],
            &w,
            &default_offset(),
        );
        assert_eq!(g.len(), 2);
        let sizes: Vec<usize> = g.iter().map(|(_, v)| v.len()).collect();
        assert_eq!(sizes, vec![2, 1]);
    }

    #[test]
    fn config_parsing() {
        let w = WindowSpec::defaults();
        assert_eq!(w[1].to_string(), "window afternoon 14:00 24:00");
        assert!(WindowSpec::parse_config("window a 10:00 09:00").is_err());
        assert!(WindowSpec::parse_config("window a 10:00").is_err());
        assert!(WindowSpec::parse_config("slot a 10:00 11:00").is_err());
        assert!(WindowSpec::parse_config("window a 10:00 24:30").is_err());
        assert!(WindowSpec::parse_config("window a 1:00 2:00\nwindow a 3:00 4:00").is_err());
    }

    #[test]
    fn offsets() {
        assert_eq!(parse_utc_offset("+08:00").unwrap(), default_offset());
        assert_eq!(parse_utc_offset("UTC").unwrap().local_minus_utc(), 0);
        assert_eq!(
            parse_utc_offset("-05:30").unwrap().local_minus_utc(),
            -(5 * 3600 + 1800)
        );
        assert!(parse_utc_offset("8").is_err());
    }

    #[test]
    fn trip_grouping() {
        let g = group_by_trip(&[
            at_local("a", 3, 0),
            at_local("b", 9, 0),
            at_local("a", 15, 0),
        ]);
        assert_eq!(g.len(), 2);
        assert!(g.iter().all(|(k, _)| k.window == WindowKey::Trip));
    }
}
