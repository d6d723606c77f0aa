//! Sequence database files and the BMS-shaped synthetic generator.
//!
//! SPMF text format: one sequence per line, items separated by spaces,
//! `-1` closes an element and `-2` closes the sequence.

use std::io::{BufRead, Write};

use rand::distributions::WeightedIndex;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::error::SequenceError;
use crate::sequence::{Notation, SequenceDatabase};

pub fn read_spmf<R: BufRead>(source: R) -> Result<SequenceDatabase, SequenceError> {
    let mut rows = Vec::new();
    for (i, line) in source.lines().enumerate() {
        let line = line.map_err(|e| SequenceError::Syntax {
            pos: 0,
            msg: e.to_string(),
        })?;
        let line = line.trim();
        if line.is_empty()
            || line.starts_with('#')
            || line.starts_with('%')
            || line.starts_with('@')
        {
            continue;
        }
        let mut seq: Vec<Vec<String>> = Vec::new();
        let mut current: Vec<String> = Vec::new();
        let mut closed = false;
        for tok in line.split_whitespace() {
            match tok {
                "-1" => {
                    if current.is_empty() {
                        return Err(SequenceError::EmptyElement);
                    }
                    seq.push(std::mem::take(&mut current));
                }
                "-2" => {
                    closed = true;
                    break;
                }
                item => current.push(item.to_owned()),
            }
        }
        if !current.is_empty() {
            seq.push(current);
        }
        if !closed && seq.is_empty() {
            return Err(SequenceError::Syntax {
                pos: i,
                msg: format!("line {}: no items", i + 1),
            });
        }
        rows.push((format!("S{}", rows.len() + 1), seq));
    }
    SequenceDatabase::from_labeled(rows)
}

pub fn write_spmf<W: Write>(db: &SequenceDatabase, mut out: W) -> std::io::Result<()> {
    let dict = db.dictionary();
    for s in db.sequences() {
        let mut line = String::new();
        for el in s.elements() {
            for &i in el.items() {
                line.push_str(dict.label(i).unwrap_or("?"));
                line.push(' ');
            }
            line.push_str("-1 ");
        }
        line.push_str("-2\n");
        out.write_all(line.as_bytes())?;
    }
    Ok(())
}

/// Text form with sequence ids: `ID: (a b)(c)` per line.
pub fn write_text<W: Write>(db: &SequenceDatabase, mut out: W) -> std::io::Result<()> {
    let dict = db.dictionary();
    for (id, s) in db.seq_ids().iter().zip(db.sequences()) {
        writeln!(out, "{}: {}", id, s.display(dict, Notation::Spaced))?;
    }
    Ok(())
}

/// A clickstream-like corpus: elements per sequence are 1 plus a
/// geometric count with the requested mean, items are Zipf-distributed.
#[derive(Debug, Clone, PartialEq)]
pub struct BmsConfig {
    pub n_sequences: usize,
    pub mean_elements: f64,
    pub n_items: usize,
    pub zipf_exponent: f64,
    /// Probability that an element holds a second item.
    pub pair_probability: f64,
    pub max_elements: usize,
}

impl Default for BmsConfig {
    fn default() -> Self {
        BmsConfig {
            n_sequences: 30_000,
            mean_elements: 2.3,
            n_items: 497,
            zipf_exponent: 1.1,
            pair_probability: 0.1,
            max_elements: 256,
        }
    }
}

pub fn generate_bms(cfg: &BmsConfig, seed: u64) -> Result<SequenceDatabase, String> {
    if !(1.0..f64::INFINITY).contains(&cfg.mean_elements) || cfg.n_items < 2 || cfg.max_elements < 1
    {
        return Err("bms shape needs mean_elements >= 1, n_items >= 2, max_elements >= 1".into());
    }
    if !(0.0..=1.0).contains(&cfg.pair_probability)
        || !(0.0..f64::INFINITY).contains(&cfg.zipf_exponent)
    {
        return Err("bms pair probability must be in [0,1] and zipf exponent >= 0".into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights: Vec<f64> = (1..=cfg.n_items)
        .map(|k| (k as f64).powf(-cfg.zipf_exponent))
        .collect();
    let items = WeightedIndex::new(&weights).map_err(|e| e.to_string())?;
    let stop = 1.0 / cfg.mean_elements;
    let mut rows = Vec::with_capacity(cfg.n_sequences);
    for s in 0..cfg.n_sequences {
        let mut n = 1;
        while n < cfg.max_elements && !rng.gen_bool(stop) {
            n += 1;
        }
        let seq: Vec<Vec<String>> = (0..n)
            .map(|_| {
                let mut el = vec![(items.sample(&mut rng) + 1).to_string()];
                if rng.gen_bool(cfg.pair_probability) {
                    el.push((items.sample(&mut rng) + 1).to_string());
                }
                el
            })
            .collect();
        rows.push((format!("S{}", s + 1), seq));
    }
    SequenceDatabase::from_labeled(rows).map_err(|e| e.to_string())
}
