use chrono::{Duration, FixedOffset, NaiveDate, TimeZone, Utc};
use rand::distributions::WeightedIndex;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use super::{CheckIn, PipelineError};

#[derive(Debug, Clone, PartialEq)]
pub struct CategoryWeight {
    pub category: String,
    pub subcategory: String,
    pub weight: f64,
}

impl CategoryWeight {
    fn new(category: &str, subcategory: &str, weight: f64) -> Self {
        CategoryWeight {
            category: category.into(),
            subcategory: subcategory.into(),
            weight,
        }
    }
}

/// Shape of a synthetic tourist check-in corpus. Defaults give 1057
/// tourists in Singapore with 8 to 10 check-ins each.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorConfig {
    pub n_users: usize,
    pub checkins_min: usize,
    pub checkins_max: usize,
    pub categories: Vec<CategoryWeight>,
    pub start_date: NaiveDate,
    /// Trips start on a uniformly chosen day in this many days.
    pub period_days: u32,
    /// Longest trip, in days.
    pub max_trip_days: u32,
    /// Share of check-ins placed between `day_start_hour` and `day_end_hour` local.
    pub daytime_share: f64,
    pub day_start_hour: u32,
    pub day_end_hour: u32,
    pub tz: FixedOffset,
    pub female_share: f64,
    pub origins: Vec<String>,
    /// Bounding box `(lat_min, lat_max, lon_min, lon_max)`.
    pub bbox: (f64, f64, f64, f64),
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            n_users: 1057,
            checkins_min: 8,
            checkins_max: 10,
            categories: default_categories(),
            start_date: NaiveDate::from_ymd_opt(2019, 1, 1).expect("valid date"),
            period_days: 180,
            max_trip_days: 4,
            daytime_share: 0.9,
            day_start_hour: 7,
            day_end_hour: 23,
            tz: super::default_offset(),
            female_share: 3830.0 / (3830.0 + 3577.0),
            origins: [
                "Australia",
                "China",
                "India",
                "Indonesia",
                "Japan",
                "Malaysia",
                "Philippines",
                "United Kingdom",
                "United States",
            ]
            .iter()
            .map(|s| s.to_string())
            .collect(),
            bbox: (1.22, 1.47, 103.6, 104.05),
        }
    }
}

fn default_categories() -> Vec<CategoryWeight> {
    [
        ("Asian Restaurant", "Chinese Restaurant", 9.0),
        ("Food Court", "Hawker Stall", 8.0),
        ("Coffee Shop", "Café", 5.0),
        ("Shopping Mall", "Mall", 9.0),
        ("Night Market", "Market", 3.0),
        ("Park", "Urban Park", 6.0),
        ("Botanical Garden", "Garden", 4.0),
        ("Hiking Trail", "Trail", 3.0),
        ("Nature Preserve", "Reserve", 2.0),
        ("Hindu Temple", "Temple", 2.5),
        ("Mosque", "Mosque", 1.5),
        ("Movie Theater", "Cinema", 3.0),
        ("Theme Park", "Amusement", 3.0),
        ("Metro Station", "MRT", 8.0),
        ("Ferry Terminal", "Ferry", 1.0),
        ("Border Crossing", "Checkpoint", 1.0),
        ("History Museum", "Museum", 3.0),
        ("Art Gallery", "Gallery", 2.0),
        ("Historic Site", "Heritage", 2.0),
        ("Casino", "Casino", 1.5),
        ("Scenic Lookout", "Lookout", 3.0),
        ("Promenade", "Waterfront", 3.0),
        ("Beach", "Beach", 2.0),
        ("Stadium", "Stadium", 1.0),
        ("Soccer Field", "Field", 1.0),
        ("Zoo", "Zoo", 2.0),
        ("Spa", "Spa", 1.0),
        ("Hotel", "Hotel", 6.0),
        ("Airport", "Airport Terminal", 3.0),
        ("Airport-Gate", "Gate", 1.5),
    ]
    .iter()
    .map(|&(c, s, w)| CategoryWeight::new(c, s, w))
    .collect()
}

impl GeneratorConfig {
    pub fn validate(&self) -> Result<(), PipelineError> {
        let bad = |m: &str| Err(PipelineError::InvalidConfig(m.to_owned()));
        if self.checkins_min == 0 || self.checkins_min > self.checkins_max {
            return bad("check-ins per user must satisfy 1 <= min <= max");
        }
        if self.categories.is_empty()
            || self
                .categories
                .iter()
                .any(|c| !(c.weight > 0.0 && c.weight.is_finite()))
        {
            return bad("category weights must be positive and finite");
        }
        if self.period_days == 0 || self.max_trip_days == 0 {
            return bad("period and trip length must be at least one day");
        }
        if !(0.0..=1.0).contains(&self.daytime_share) || !(0.0..=1.0).contains(&self.female_share) {
            return bad("shares must be in [0,1]");
        }
        if self.day_start_hour >= self.day_end_hour || self.day_end_hour > 24 {
            return bad("day hours must satisfy start < end <= 24");
        }
        let (a, b, c, d) = self.bbox;
        if !(-90.0..=90.0).contains(&a)
            || !(-90.0..=90.0).contains(&b)
            || a > b
            || !(-180.0..=180.0).contains(&c)
            || !(-180.0..=180.0).contains(&d)
            || c > d
        {
            return bad("bounding box out of range");
        }
        Ok(())
    }
}

fn round6(x: f64) -> f64 {
    (x * 1e6).round() / 1e6
}

/// Deterministic synthetic corpus: same config and seed, same check-ins.
pub fn generate_synthetic(cfg: &GeneratorConfig, seed: u64) -> Result<Vec<CheckIn>, PipelineError> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let categories = WeightedIndex::new(cfg.categories.iter().map(|c| c.weight))
        .map_err(|e| PipelineError::InvalidConfig(e.to_string()))?;
    let day_minutes = (cfg.day_end_hour - cfg.day_start_hour) * 60;
    let mut out = Vec::with_capacity(cfg.n_users * cfg.checkins_max);
    let mut next_id = 0usize;
    for u in 0..cfg.n_users {
        let user_id = format!("u{:05}", u + 1);
        let gender = if rng.gen_bool(cfg.female_share) {
            "F"
        } else {
            "M"
        };
        let origin = cfg.origins.choose(&mut rng).cloned();
        let first_day = cfg.start_date + Duration::days(rng.gen_range(0..cfg.period_days) as i64);
        let trip_days = rng.gen_range(1..=cfg.max_trip_days);
        let n = rng.gen_range(cfg.checkins_min..=cfg.checkins_max);
        let mut stamps: Vec<(chrono::DateTime<Utc>, usize)> = Vec::with_capacity(n);
        for _ in 0..n {
            let day = first_day + Duration::days(rng.gen_range(0..trip_days) as i64);
            let minute = if rng.gen_bool(cfg.daytime_share) {
                cfg.day_start_hour * 60 + rng.gen_range(0..day_minutes)
            } else {
                // outside the active span, wrapping past midnight
                let night = 24 * 60 - day_minutes;
                (cfg.day_end_hour * 60 + rng.gen_range(0..night)) % (24 * 60)
            };
            let second = rng.gen_range(0..60);
            let local = day
                .and_hms_opt(minute / 60, minute % 60, second)
                .expect("valid time");
            let ts = cfg
                .tz
                .from_local_datetime(&local)
                .single()
                .expect("fixed offsets are unambiguous")
                .with_timezone(&Utc);
            stamps.push((ts, categories.sample(&mut rng)));
        }
        stamps.sort_by_key(|s| s.0);
        for (ts, cat) in stamps {
            next_id += 1;
            let (lat0, lat1, lon0, lon1) = cfg.bbox;
            let c = &cfg.categories[cat];
            out.push(CheckIn {
                checkin_id: format!("c{next_id:07}"),
                user_id: user_id.clone(),
                timestamp: ts,
                lat: round6(rng.gen_range(lat0..=lat1)),
                lon: round6(rng.gen_range(lon0..=lon1)),
                category: c.category.clone(),
                subcategory: c.subcategory.clone(),
                gender: Some(gender.to_owned()),
                origin: origin.clone(),
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    #[test]
    fn deterministic_for_seed() {
        let cfg = GeneratorConfig {
            n_users: 20,
            ..Default::default()
        };
        assert_eq!(
            generate_synthetic(&cfg, 3).unwrap(),
            generate_synthetic(&cfg, 3).unwrap()
        );
        assert_ne!(
            generate_synthetic(&cfg, 3).unwrap(),
            generate_synthetic(&cfg, 4).unwrap()
        );
    }

    #[test]
    fn zero_users() {
        let cfg = GeneratorConfig {
            n_users: 0,
            ..Default::default()
        };
        assert!(generate_synthetic(&cfg, 1).unwrap().is_empty());
    }

    #[test]
    fn default_counts() {
        let out = generate_synthetic(&GeneratorConfig::default(), 11).unwrap();
        assert!((8 * 1057..=10 * 1057).contains(&out.len()));
        let mut per_user: HashMap<&str, usize> = HashMap::new();
        for c in &out {
            *per_user.entry(&c.user_id).or_default() += 1;
            assert!((-90.0..=90.0).contains(&c.lat) && (-180.0..=180.0).contains(&c.lon));
        }
        assert_eq!(per_user.len(), 1057);
        assert!(per_user.values().all(|&n| (8..=10).contains(&n)));
    }

    #[test]
    fn category_marginals_follow_weights() {
        let cfg = GeneratorConfig {
            n_users: 2000,
            ..Default::default()
        };
        let out = generate_synthetic(&cfg, 5).unwrap();
        assert!(out.len() >= 10_000);
        let total_w: f64 = cfg.categories.iter().map(|c| c.weight).sum();
        let mut counts: HashMap<&str, usize> = HashMap::new();
        for c in &out {
            *counts.entry(&c.category).or_default() += 1;
        }
        for c in &cfg.categories {
            let got = *counts.get(c.category.as_str()).unwrap_or(&0) as f64 / out.len() as f64;
            let want = c.weight / total_w;
            assert!(
                (got - want).abs() <= 0.02,
                "{}: {got} vs {want}",
                c.category
            );
        }
    }

    #[test]
    fn invalid_configs() {
        let bad = GeneratorConfig {
            checkins_min: 10,
            checkins_max: 8,
            ..Default::default()
        };
        assert!(matches!(
            generate_synthetic(&bad, 1),
            Err(PipelineError::InvalidConfig(_))
        ));
        let bad = GeneratorConfig {
            categories: vec![],
            ..Default::default()
        };
        assert!(generate_synthetic(&bad, 1).is_err());
        let bad = GeneratorConfig {
            day_start_hour: 23,
            day_end_hour: 7,
            ..Default::default()
        };
        assert!(generate_synthetic(&bad, 1).is_err());
    }
}
