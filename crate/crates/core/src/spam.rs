//! Depth-first sequential pattern mining over vertical bitmaps.
//!
//! Every sequence owns a lane of bits, one bit per element position.
//! Lanes are tiered by sequence length: a sequence with `n` elements gets
//! the smallest power-of-two width >= max(n, 8). Lanes of up to 64 bits
//! are packed several to a word and never straddle a word boundary;
//! wider lanes span whole words.

use std::mem::size_of;

use rayon::prelude::*;

use crate::error::MineError;
use crate::pattern::{MinerConfig, Pattern, PatternSet};
use crate::prefixspan::MineStats;
use crate::sequence::{ItemId, Sequence, SequenceDatabase};

pub const MIN_LANE_BITS: usize = 8;
pub const DEFAULT_LANE_CAPACITY: usize = 4096;

#[derive(Debug, Clone)]
struct Tier {
    width: usize,
    word_start: usize,
    words: usize,
}

#[derive(Debug, Clone, Copy)]
struct Slot {
    tier: u16,
    lane: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bitmap {
    words: Vec<u64>,
}

impl Bitmap {
    fn zeros(n: usize) -> Self {
        Bitmap { words: vec![0; n] }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    fn and(&self, other: &Bitmap) -> Bitmap {
        Bitmap {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    fn heap_bytes(&self) -> usize {
        self.words.len() * size_of::<u64>()
    }
}

/// One bitmap per item over (sequence, element position) slots.
#[derive(Debug, Clone)]
pub struct VerticalBitmapIndex {
    tiers: Vec<Tier>,
    slots: Vec<Slot>,
    items: Vec<Bitmap>,
    total_words: usize,
}

fn lane_width(len: usize) -> usize {
    len.max(MIN_LANE_BITS).next_power_of_two()
}

/// Mask with bit `k * width` set for every lane in a word.
fn lane_low_bits(width: usize) -> u64 {
    let mut m = 0u64;
    let mut k = 0;
    while k < 64 {
        m |= 1 << k;
        k += width;
    }
    m
}

fn lane_mask(width: usize) -> u64 {
    if width >= 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

/// Builds the index with the default lane capacity.
pub fn build_bitmaps(db: &SequenceDatabase) -> Result<VerticalBitmapIndex, MineError> {
    build_bitmaps_with_capacity(db, DEFAULT_LANE_CAPACITY)
}

pub fn build_bitmaps_with_capacity(
    db: &SequenceDatabase,
    capacity: usize,
) -> Result<VerticalBitmapIndex, MineError> {
    let capacity = lane_width(capacity);
    let mut widths: Vec<usize> = Vec::new();
    let mut slots = Vec::with_capacity(db.len());
    let mut lanes_per_tier: Vec<u32> = Vec::new();
    for (i, s) in db.sequences().iter().enumerate() {
        let w = lane_width(s.len());
        if w > capacity {
            return Err(MineError::CapacityExceeded {
                seq: i,
                len: s.len(),
                capacity,
            });
        }
        let t = match widths.iter().position(|&x| x == w) {
            Some(t) => t,
            None => {
                widths.push(w);
                lanes_per_tier.push(0);
                widths.len() - 1
            }
        };
        slots.push(Slot {
            tier: t as u16,
            lane: lanes_per_tier[t],
        });
        lanes_per_tier[t] += 1;
    }
    let mut tiers = Vec::with_capacity(widths.len());
    let mut word_start = 0;
    for (&width, &lanes) in widths.iter().zip(&lanes_per_tier) {
        let words = (lanes as usize * width).div_ceil(64);
        tiers.push(Tier {
            width,
            word_start,
            words,
        });
        word_start += words;
    }
    let total_words = word_start;
    let mut index = VerticalBitmapIndex {
        tiers,
        slots,
        items: vec![Bitmap::zeros(total_words); db.dictionary().len()],
        total_words,
    };
    for (i, s) in db.sequences().iter().enumerate() {
        let base = index.lane_bit(i);
        for (j, el) in s.elements().iter().enumerate() {
            let bit = base + j;
            for &x in el.items() {
                index.items[x as usize].words[bit / 64] |= 1 << (bit % 64);
            }
        }
    }
    Ok(index)
}

impl VerticalBitmapIndex {
    fn lane_bit(&self, seq: usize) -> usize {
        let slot = self.slots[seq];
        let tier = &self.tiers[slot.tier as usize];
        tier.word_start * 64 + slot.lane as usize * tier.width
    }

    pub fn n_sequences(&self) -> usize {
        self.slots.len()
    }

    pub fn item_bitmap(&self, item: ItemId) -> &Bitmap {
        &self.items[item as usize]
    }

    /// Distinct lane widths in use.
    pub fn lane_widths(&self) -> Vec<usize> {
        self.tiers.iter().map(|t| t.width).collect()
    }

    pub fn heap_bytes(&self) -> usize {
        self.items.len() * self.total_words * size_of::<u64>()
    }

    pub fn bit(&self, bitmap: &Bitmap, seq: usize, pos: usize) -> bool {
        let width = self.tiers[self.slots[seq].tier as usize].width;
        if pos >= width {
            return false;
        }
        let b = self.lane_bit(seq) + pos;
        bitmap.words[b / 64] >> (b % 64) & 1 == 1
    }

    /// Set positions of `seq` in `bitmap`.
    pub fn positions(&self, bitmap: &Bitmap, seq: usize) -> Vec<usize> {
        let width = self.tiers[self.slots[seq].tier as usize].width;
        (0..width).filter(|&p| self.bit(bitmap, seq, p)).collect()
    }

    /// Number of sequences with at least one set bit.
    pub fn support(&self, bitmap: &Bitmap) -> usize {
        let mut count = 0;
        for t in &self.tiers {
            let words = &bitmap.words[t.word_start..t.word_start + t.words];
            if t.width <= 64 {
                let low = lane_low_bits(t.width);
                for &w in words {
                    if w == 0 {
                        continue;
                    }
                    let mut y = w;
                    let mut s = t.width / 2;
                    while s > 0 {
                        y |= y >> s;
                        s /= 2;
                    }
                    count += (y & low).count_ones() as usize;
                }
            } else {
                let per_lane = t.width / 64;
                count += words
                    .chunks(per_lane)
                    .filter(|c| c.iter().any(|&w| w != 0))
                    .count();
            }
        }
        count
    }

    /// Per lane, clears the first set bit and everything before it, and
    /// sets every later bit.
    fn s_transform(&self, bitmap: &Bitmap) -> Bitmap {
        let mut out = Bitmap::zeros(self.total_words);
        for t in &self.tiers {
            let range = t.word_start..t.word_start + t.words;
            let src = &bitmap.words[range.clone()];
            let dst = &mut out.words[range];
            if t.width <= 64 {
                let mask = lane_mask(t.width);
                for (d, &w) in dst.iter_mut().zip(src) {
                    if w == 0 {
                        continue;
                    }
                    let mut r = 0u64;
                    let mut shift = 0;
                    while shift < 64 {
                        let lane = (w >> shift) & mask;
                        if lane != 0 {
                            let lowest = lane & lane.wrapping_neg();
                            let above = mask & !(lowest | (lowest - 1));
                            r |= above << shift;
                        }
                        shift += t.width;
                    }
                    *d = r;
                }
            } else {
                let per_lane = t.width / 64;
                for (d, s) in dst.chunks_mut(per_lane).zip(src.chunks(per_lane)) {
                    if let Some(first) = s.iter().position(|&w| w != 0) {
                        let w = s[first];
                        let lowest = w & w.wrapping_neg();
                        d[first] = !(lowest | (lowest - 1));
                        for x in &mut d[first + 1..] {
                            *x = u64::MAX;
                        }
                    }
                }
            }
        }
        out
    }
}

/// Appends `item` as a new element: positions strictly after the first
/// occurrence of the pattern, intersected with the item's bitmap.
pub fn s_step(index: &VerticalBitmapIndex, pattern: &Bitmap, item: ItemId) -> (Bitmap, usize) {
    let bm = index.s_transform(pattern).and(index.item_bitmap(item));
    let c = index.support(&bm);
    (bm, c)
}

/// Adds `item` to the pattern's last element: same positions, intersected.
pub fn i_step(index: &VerticalBitmapIndex, pattern: &Bitmap, item: ItemId) -> (Bitmap, usize) {
    let bm = pattern.and(index.item_bitmap(item));
    let c = index.support(&bm);
    (bm, c)
}

struct Dfs<'a> {
    index: &'a VerticalBitmapIndex,
    cfg: &'a MinerConfig,
    min_count: usize,
    out: Vec<Pattern>,
    peak: usize,
}

impl Dfs<'_> {
    fn visit(
        &mut self,
        pattern: Sequence,
        bitmap: &Bitmap,
        support: usize,
        s_cands: &[ItemId],
        i_cands: &[ItemId],
        live: usize,
    ) {
        let items = pattern.item_count();
        if self.cfg.reports(items) {
            self.out.push(Pattern {
                sequence: pattern.clone(),
                support_count: support,
            });
        }
        if items >= self.cfg.max_items() {
            return;
        }
        let transformed = self.index.s_transform(bitmap);
        let mut s_hits = Vec::new();
        for &i in s_cands {
            let bm = transformed.and(self.index.item_bitmap(i));
            let c = self.index.support(&bm);
            if c >= self.min_count {
                s_hits.push((i, bm, c));
            }
        }
        let mut i_hits = Vec::new();
        for &i in i_cands {
            let bm = bitmap.and(self.index.item_bitmap(i));
            let c = self.index.support(&bm);
            if c >= self.min_count {
                i_hits.push((i, bm, c));
            }
        }
        let held: usize = s_hits
            .iter()
            .chain(&i_hits)
            .map(|(_, b, _)| b.heap_bytes())
            .sum();
        let live = live + held + transformed.heap_bytes();
        self.peak = self.peak.max(live);
        drop(transformed);

        let s_items: Vec<ItemId> = s_hits.iter().map(|h| h.0).collect();
        let i_items: Vec<ItemId> = i_hits.iter().map(|h| h.0).collect();
        for (i, bm, c) in &s_hits {
            let after = &s_items[s_items.partition_point(|&x| x <= *i)..];
            self.visit(pattern.s_extended(*i), bm, *c, &s_items, after, live);
        }
        for (i, bm, c) in &i_hits {
            let after = &i_items[i_items.partition_point(|&x| x <= *i)..];
            self.visit(pattern.i_extended(*i), bm, *c, &s_items, after, live);
        }
    }
}

/// Same contract as [`crate::prefixspan::mine`]: the complete pattern set
/// in canonical order.
pub fn mine_spam(db: &SequenceDatabase, cfg: &MinerConfig) -> Result<PatternSet, MineError> {
    mine_spam_with_stats(db, cfg).map(|(p, _)| p)
}

pub fn mine_spam_with_stats(
    db: &SequenceDatabase,
    cfg: &MinerConfig,
) -> Result<(PatternSet, MineStats), MineError> {
    cfg.validate()?;
    let min_count = cfg.min_support.resolve(db.len())?;
    let index = build_bitmaps(db)?;
    let frequent: Vec<(ItemId, usize)> = (0..db.dictionary().len() as ItemId)
        .map(|i| (i, index.support(index.item_bitmap(i))))
        .filter(|&(_, c)| c >= min_count)
        .collect();
    let items: Vec<ItemId> = frequent.iter().map(|f| f.0).collect();

    let branch = |&(item, count): &(ItemId, usize)| {
        let mut dfs = Dfs {
            index: &index,
            cfg,
            min_count,
            out: Vec::new(),
            peak: 0,
        };
        let after = &items[items.partition_point(|&x| x <= item)..];
        dfs.visit(
            Sequence::empty().s_extended(item),
            index.item_bitmap(item),
            count,
            &items,
            after,
            0,
        );
        (dfs.out, dfs.peak)
    };
    let results: Vec<(Vec<Pattern>, usize)> = if cfg.parallel {
        frequent.par_iter().map(branch).collect()
    } else {
        frequent.iter().map(branch).collect()
    };
    let mut peak = 0;
    let mut patterns = Vec::new();
    for (p, b) in results {
        peak = peak.max(b);
        patterns.extend(p);
    }
    let stats = MineStats {
        peak_bytes: index.heap_bytes() + peak,
    };
    Ok((PatternSet::new(patterns, db.len()), stats))
}
