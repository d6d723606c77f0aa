use super::{CheckIn, PipelineError};

pub const OTHER_ACTIVITY: &str = "Other";

const DEFAULT_MAP: &str = include_str!("../../data/activity_map.txt");

/// Case-insensitive glob over venue categories; `*` matches any run of
/// characters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CategoryPattern {
    raw: String,
    parts: Vec<String>,
}

impl CategoryPattern {
    pub fn new(raw: &str) -> Self {
        let raw = raw.trim().to_owned();
        let parts = raw.to_lowercase().split('*').map(str::to_owned).collect();
        CategoryPattern { raw, parts }
    }

    pub fn as_str(&self) -> &str {
        &self.raw
    }

    pub fn matches(&self, category: &str) -> bool {
        let text = category.trim().to_lowercase();
        let (first, rest) = self
            .parts
            .split_first()
            .expect("split yields at least one part");
        let Some(mut tail) = text.strip_prefix(first.as_str()) else {
            return false;
        };
        let Some((last, middle)) = rest.split_last() else {
            return tail.is_empty();
        };
        for part in middle {
            match tail.find(part.as_str()) {
                Some(i) => tail = &tail[i + part.len()..],
                None => return false,
            }
        }
        tail.ends_with(last.as_str())
    }
}

/// Ordered category rules plus a blocklist. The first matching rule wins.
///
/// Text form, one entry per line:
///
/// ```text
/// # comment
/// !Airport*            drop matching check-ins entirely
/// *Restaurant = Dining
/// ```
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActivityMap {
    pub rules: Vec<(CategoryPattern, String)>,
    pub blocklist: Vec<CategoryPattern>,
}

impl Default for ActivityMap {
    fn default() -> Self {
        ActivityMap::parse(DEFAULT_MAP).expect("bundled activity map parses")
    }
}

impl ActivityMap {
    pub fn parse(text: &str) -> Result<Self, PipelineError> {
        let mut rules = Vec::new();
        let mut blocklist = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |msg: &str| PipelineError::Config {
                line: i + 1,
                msg: msg.to_owned(),
            };
            if let Some(pat) = line.strip_prefix('!') {
                if pat.trim().is_empty() {
                    return Err(bad("empty blocklist pattern"));
                }
                blocklist.push(CategoryPattern::new(pat));
                continue;
            }
            let (pat, activity) = line
                .split_once('=')
                .ok_or_else(|| bad("expected `pattern = activity`"))?;
            let activity = activity.trim();
            if pat.trim().is_empty() || activity.is_empty() {
                return Err(bad("expected `pattern = activity`"));
            }
            if activity.contains('>') || activity.contains(',') {
                return Err(bad("activity labels may not contain '>' or ','"));
            }
            rules.push((CategoryPattern::new(pat), activity.to_owned()));
        }
        Ok(ActivityMap { rules, blocklist })
    }

    pub fn is_blocked(&self, c: &CheckIn) -> bool {
        self.blocklist
            .iter()
            .any(|p| p.matches(&c.category) || p.matches(&c.subcategory))
    }

    /// Activity for a check-in, or `None` when no rule matches. Rules are
    /// tried in order against the category, then the subcategory.
    pub fn activity_for(&self, c: &CheckIn) -> Option<&str> {
        self.rules
            .iter()
            .find(|(p, _)| p.matches(&c.category) || p.matches(&c.subcategory))
            .map(|(_, a)| a.as_str())
    }

    /// All activity labels the rules can produce, in rule order, deduplicated.
    pub fn activities(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for (_, a) in &self.rules {
            if !out.contains(&a.as_str()) {
                out.push(a);
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TaggedCheckIn {
    pub checkin: CheckIn,
    pub activity: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TaggedBatch {
    pub tagged: Vec<TaggedCheckIn>,
    pub blocked: usize,
    pub unmatched: usize,
}

/// Drops blocklisted check-ins and tags the rest with their activity;
/// unmatched categories become [`OTHER_ACTIVITY`].
pub fn apply_activity_map(checkins: Vec<CheckIn>, map: &ActivityMap) -> TaggedBatch {
    let mut batch = TaggedBatch::default();
    for c in checkins {
        if map.is_blocked(&c) {
            batch.blocked += 1;
            continue;
        }
        let activity = match map.activity_for(&c) {
            Some(a) => a.to_owned(),
            None => {
                batch.unmatched += 1;
                OTHER_ACTIVITY.to_owned()
            }
        };
        batch.tagged.push(TaggedCheckIn {
            checkin: c,
            activity,
        });
    }
    batch
}
