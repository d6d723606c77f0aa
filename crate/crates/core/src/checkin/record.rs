use std::collections::HashSet;
use std::io::{BufRead, Read, Write};
use std::str::FromStr;

use chrono::{DateTime, NaiveDateTime, SecondsFormat, Utc};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::PipelineError;

/// Exact CSV header for check-in files.
pub const CHECKIN_COLUMNS: [&str; 9] = [
    "checkin_id",
    "user_id",
    "timestamp",
    "lat",
    "lon",
    "category",
    "subcategory",
    "gender",
    "origin",
];

/// A timestamped, geolocated venue visit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckIn {
    pub checkin_id: String,
    pub user_id: String,
    #[serde(with = "timestamp_format")]
    pub timestamp: DateTime<Utc>,
    pub lat: f64,
    pub lon: f64,
    pub category: String,
    pub subcategory: String,
    pub gender: Option<String>,
    pub origin: Option<String>,
}

mod timestamp_format {
    use chrono::{DateTime, Utc};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(ts: &DateTime<Utc>, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::format_timestamp(ts))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<DateTime<Utc>, D::Error> {
        let raw = String::deserialize(d)?;
        super::parse_timestamp(&raw).map_err(serde::de::Error::custom)
    }
}

pub fn format_timestamp(ts: &DateTime<Utc>) -> String {
    ts.to_rfc3339_opts(SecondsFormat::AutoSi, true)
}

/// RFC 3339, or a naive `YYYY-MM-DD HH:MM:SS` / `YYYY-MM-DDTHH:MM:SS` read as UTC.
pub fn parse_timestamp(raw: &str) -> Result<DateTime<Utc>, String> {
    let raw = raw.trim();
    if let Ok(ts) = DateTime::parse_from_rfc3339(raw) {
        return Ok(ts.with_timezone(&Utc));
    }
    for fmt in ["%Y-%m-%d %H:%M:%S", "%Y-%m-%dT%H:%M:%S"] {
        if let Ok(naive) = NaiveDateTime::parse_from_str(raw, fmt) {
            return Ok(naive.and_utc());
        }
    }
    Err(format!("bad timestamp {raw:?}"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    Csv,
    Jsonl,
}

impl FromStr for InputFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(InputFormat::Csv),
            "jsonl" => Ok(InputFormat::Jsonl),
            other => Err(format!(
                "unknown check-in format {other:?}; expected csv or jsonl"
            )),
        }
    }
}

/// A row that failed validation, with its 1-based line number.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Reject {
    pub line: u64,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ParseOutcome {
    pub checkins: Vec<CheckIn>,
    pub rejects: Vec<Reject>,
}

struct RawRow<'a> {
    checkin_id: &'a str,
    user_id: &'a str,
    timestamp: &'a str,
    lat: Result<f64, String>,
    lon: Result<f64, String>,
    category: &'a str,
    subcategory: &'a str,
    gender: &'a str,
    origin: &'a str,
}

fn opt(s: &str) -> Option<String> {
    let s = s.trim();
    (!s.is_empty()).then(|| s.to_owned())
}

fn validate(raw: RawRow<'_>, seen: &mut HashSet<String>) -> Result<CheckIn, String> {
    let checkin_id = raw.checkin_id.trim();
    if checkin_id.is_empty() {
        return Err("missing checkin_id".into());
    }
    let user_id = raw.user_id.trim();
    if user_id.is_empty() {
        return Err("missing user_id".into());
    }
    let timestamp = parse_timestamp(raw.timestamp)?;
    let lat = raw.lat.map_err(|e| format!("lat {e}"))?;
    if !(-90.0..=90.0).contains(&lat) {
        return Err(format!("lat out of range: {lat}"));
    }
    let lon = raw.lon.map_err(|e| format!("lon {e}"))?;
    if !(-180.0..=180.0).contains(&lon) {
        return Err(format!("lon out of range: {lon}"));
    }
    if seen.contains(checkin_id) {
        return Err(format!("duplicate checkin_id {checkin_id:?}"));
    }
    seen.insert(checkin_id.to_owned());
    Ok(CheckIn {
        checkin_id: checkin_id.to_owned(),
        user_id: user_id.to_owned(),
        timestamp,
        lat,
        lon,
        category: raw.category.trim().to_owned(),
        subcategory: raw.subcategory.trim().to_owned(),
        gender: opt(raw.gender),
        origin: opt(raw.origin),
    })
}

fn parse_coord(s: &str) -> Result<f64, String> {
    s.trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| format!("is not a number: {s:?}"))
}

/// Reads check-ins in file order. Invalid rows land in `rejects` with
/// their line numbers; only an unreadable header or I/O failure is an error.
pub fn parse_checkins<R: Read>(
    source: R,
    format: InputFormat,
) -> Result<ParseOutcome, PipelineError> {
    match format {
        InputFormat::Csv => parse_csv(source),
        InputFormat::Jsonl => parse_jsonl(std::io::BufReader::new(source)),
    }
}

fn parse_csv<R: Read>(source: R) -> Result<ParseOutcome, PipelineError> {
    let mut rdr = csv::ReaderBuilder::new().flexible(true).from_reader(source);
    let headers = rdr
        .headers()
        .map_err(|e| PipelineError::Format(format!("unreadable header: {e}")))?;
    let got: Vec<&str> = headers.iter().map(str::trim).collect();
    if got != CHECKIN_COLUMNS {
        return Err(PipelineError::Format(format!(
            "expected header {:?}, found {:?}",
            CHECKIN_COLUMNS.join(","),
            got.join(",")
        )));
    }
    let mut out = ParseOutcome::default();
    let mut seen = HashSet::new();
    let mut record = csv::StringRecord::new();
    loop {
        let line = rdr.position().line();
        match rdr.read_record(&mut record) {
            Ok(false) => break,
            Ok(true) => {}
            Err(e) => {
                if let csv::ErrorKind::Io(_) = e.kind() {
                    return Err(PipelineError::Format(e.to_string()));
                }
                out.rejects.push(Reject {
                    line: line + 1,
                    reason: e.to_string(),
                });
                continue;
            }
        }
        let line = record.position().map_or(line, |p| p.line());
        if record.len() != CHECKIN_COLUMNS.len() {
            out.rejects.push(Reject {
                line,
                reason: format!(
                    "expected {} fields, found {}",
                    CHECKIN_COLUMNS.len(),
                    record.len()
                ),
            });
            continue;
        }
        let raw = RawRow {
            checkin_id: &record[0],
            user_id: &record[1],
            timestamp: &record[2],
            lat: parse_coord(&record[3]),
            lon: parse_coord(&record[4]),
            category: &record[5],
            subcategory: &record[6],
            gender: &record[7],
            origin: &record[8],
        };
        match validate(raw, &mut seen) {
            Ok(c) => out.checkins.push(c),
            Err(reason) => out.rejects.push(Reject { line, reason }),
        }
    }
    Ok(out)
}

fn json_str<'a>(obj: &'a serde_json::Map<String, Value>, key: &str) -> &'a str {
    obj.get(key).and_then(Value::as_str).unwrap_or("")
}

fn json_coord(obj: &serde_json::Map<String, Value>, key: &str) -> Result<f64, String> {
    match obj.get(key) {
        Some(Value::Number(n)) => n.as_f64().ok_or_else(|| "is not a number".to_owned()),
        Some(Value::String(s)) => parse_coord(s),
        _ => Err("is missing".into()),
    }
}

fn parse_jsonl<R: BufRead>(source: R) -> Result<ParseOutcome, PipelineError> {
    let mut out = ParseOutcome::default();
    let mut seen = HashSet::new();
    for (i, line) in source.lines().enumerate() {
        let line = line?;
        let lineno = i as u64 + 1;
        if line.trim().is_empty() {
            continue;
        }
        let obj = match serde_json::from_str::<Value>(&line) {
            Ok(Value::Object(o)) => o,
            Ok(_) => {
                out.rejects.push(Reject {
                    line: lineno,
                    reason: "not a JSON object".into(),
                });
                continue;
            }
            Err(e) => {
                out.rejects.push(Reject {
                    line: lineno,
                    reason: format!("invalid JSON: {e}"),
                });
                continue;
            }
        };
        let raw = RawRow {
            checkin_id: json_str(&obj, "checkin_id"),
            user_id: json_str(&obj, "user_id"),
            timestamp: json_str(&obj, "timestamp"),
            lat: json_coord(&obj, "lat"),
            lon: json_coord(&obj, "lon"),
            category: json_str(&obj, "category"),
            subcategory: json_str(&obj, "subcategory"),
            gender: json_str(&obj, "gender"),
            origin: json_str(&obj, "origin"),
        };
        match validate(raw, &mut seen) {
            Ok(c) => out.checkins.push(c),
            Err(reason) => out.rejects.push(Reject {
                line: lineno,
                reason,
            }),
        }
    }
    Ok(out)
}

pub fn write_checkins<W: Write>(
    checkins: &[CheckIn],
    format: InputFormat,
    out: W,
) -> Result<(), PipelineError> {
    match format {
        InputFormat::Csv => {
            // explicit header so an empty batch still gets one
            let mut w = csv::WriterBuilder::new()
                .has_headers(false)
                .from_writer(out);
            w.write_record(CHECKIN_COLUMNS).map_err(csv_err)?;
            for c in checkins {
                w.serialize(c).map_err(csv_err)?;
            }
            w.flush()?;
        }
        InputFormat::Jsonl => {
            let mut out = out;
            for c in checkins {
                serde_json::to_writer(&mut out, c).map_err(std::io::Error::from)?;
                out.write_all(b"\n")?;
            }
        }
    }
    Ok(())
}

fn csv_err(e: csv::Error) -> PipelineError {
    PipelineError::Format(e.to_string())
}
