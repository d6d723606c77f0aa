//! Pattern-growth mining over pseudo-projected databases.
//!
//! A projected database never copies suffixes. Each entry points into the
//! base database: the element where the suffix starts and, when the
//! prefix's last element was matched inside a larger element, the first
//! unconsumed item of that element (the open `(_...)` case).

use std::mem::size_of;

use rayon::prelude::*;

use crate::error::MineError;
use crate::pattern::{MinerConfig, Pattern, PatternSet};
use crate::sequence::{Element, Item, ItemId, Notation, Sequence, SequenceDatabase, Suffix};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProjectionEntry {
    pub seq_index: u32,
    /// Element where the suffix begins. For an open entry this is the
    /// element the prefix's last element was matched in.
    pub elem_offset: u32,
    /// First unconsumed item of the open element; 0 when not open.
    pub item_offset: u32,
    pub open_element: bool,
}

#[derive(Debug, Clone)]
pub struct ProjectedDatabase<'a> {
    prefix: Sequence,
    entries: Vec<ProjectionEntry>,
    base: &'a SequenceDatabase,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtensionKind {
    /// Item appended as a new element.
    Sequence,
    /// Item added to the prefix's last element.
    Itemset,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Extension {
    pub kind: ExtensionKind,
    pub item: ItemId,
    pub count: usize,
}

impl<'a> ProjectedDatabase<'a> {
    /// The projection on the empty prefix: every non-empty sequence, whole.
    pub fn initial(base: &'a SequenceDatabase) -> Self {
        let entries = base
            .sequences()
            .iter()
            .enumerate()
            .filter(|(_, s)| !s.is_empty())
            .map(|(i, _)| ProjectionEntry {
                seq_index: i as u32,
                elem_offset: 0,
                item_offset: 0,
                open_element: false,
            })
            .collect();
        ProjectedDatabase {
            prefix: Sequence::empty(),
            entries,
            base,
        }
    }

    pub fn prefix(&self) -> &Sequence {
        &self.prefix
    }

    pub fn entries(&self) -> &[ProjectionEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn suffix_of(&self, e: &ProjectionEntry) -> Suffix {
        let seq = self.base.sequences()[e.seq_index as usize].elements();
        let mut start = e.elem_offset as usize;
        let leading_partial = if e.open_element {
            start += 1;
            Some(seq[e.elem_offset as usize].items()[e.item_offset as usize..].to_vec())
        } else {
            None
        };
        Suffix {
            leading_partial,
            rest: seq[start..].to_vec(),
        }
    }

    pub fn suffixes(&self) -> Vec<Suffix> {
        self.entries.iter().map(|e| self.suffix_of(e)).collect()
    }

    /// Each suffix wrapped in parentheses, comma separated:
    /// `((abc)(ac)d(cf)), ((_d)c(bc)(ae))`.
    pub fn render(&self, notation: Notation) -> String {
        let dict = self.base.dictionary();
        self.entries
            .iter()
            .map(|e| format!("({})", self.suffix_of(e).render(dict, notation)))
            .collect::<Vec<_>>()
            .join(", ")
    }

    /// Like [`render`](Self::render), keeping only items for which `keep`
    /// holds. Elements and suffixes left empty are omitted.
    pub fn render_filtered(&self, notation: Notation, keep: impl Fn(ItemId) -> bool) -> String {
        let dict = self.base.dictionary();
        self.entries
            .iter()
            .filter_map(|e| {
                let s = self.suffix_of(e);
                let leading_partial = s
                    .leading_partial
                    .map(|p| p.into_iter().filter(|&i| keep(i)).collect::<Vec<_>>())
                    .filter(|p| !p.is_empty());
                let rest = s
                    .rest
                    .iter()
                    .filter_map(|el| {
                        Element::new(el.items().iter().copied().filter(|&i| keep(i)).collect()).ok()
                    })
                    .collect();
                let s = Suffix {
                    leading_partial,
                    rest,
                };
                (!s.is_empty()).then(|| format!("({})", s.render(dict, notation)))
            })
            .collect::<Vec<_>>()
            .join(", ")
    }

    fn heap_bytes(&self) -> usize {
        self.entries.capacity() * size_of::<ProjectionEntry>()
    }
}

/// Per-item counters reused across calls; `touched` lists the items whose
/// counters must be cleared.
struct Counter {
    count: Vec<u32>,
    stamp: Vec<u32>,
    touched: Vec<ItemId>,
}

impl Counter {
    fn new(n_items: usize) -> Self {
        Counter {
            count: vec![0; n_items],
            stamp: vec![u32::MAX; n_items],
            touched: Vec::new(),
        }
    }

    #[inline]
    fn bump(&mut self, item: ItemId, stamp: u32) {
        let i = item as usize;
        if self.stamp[i] != stamp {
            self.stamp[i] = stamp;
            if self.count[i] == 0 {
                self.touched.push(item);
            }
            self.count[i] += 1;
        }
    }

    fn drain(&mut self, min_count: usize, kind: ExtensionKind, out: &mut Vec<Extension>) {
        self.touched.sort_unstable();
        for &item in &self.touched {
            let c = self.count[item as usize] as usize;
            if c >= min_count {
                out.push(Extension {
                    kind,
                    item,
                    count: c,
                });
            }
            self.count[item as usize] = 0;
            self.stamp[item as usize] = u32::MAX;
        }
        self.touched.clear();
    }
}

struct Scratch {
    s: Counter,
    i: Counter,
}

impl Scratch {
    fn new(n_items: usize) -> Self {
        Scratch {
            s: Counter::new(n_items),
            i: Counter::new(n_items),
        }
    }
}

/// Items contained in at least `min_count` sequences, with exact counts,
/// sorted by item id.
pub fn frequent_items(db: &SequenceDatabase, min_count: usize) -> Vec<(Item, usize)> {
    let dict = db.dictionary();
    let mut counter = Counter::new(dict.len());
    for (k, s) in db.sequences().iter().enumerate() {
        for el in s.elements() {
            for &x in el.items() {
                counter.bump(x, k as u32);
            }
        }
    }
    let mut exts = Vec::new();
    counter.drain(min_count.max(1), ExtensionKind::Sequence, &mut exts);
    exts.into_iter()
        .map(|e| {
            (
                dict.item(e.item).expect("item from this dictionary"),
                e.count,
            )
        })
        .collect()
}

/// All S- and I-extensions of the projected database's prefix with
/// projected support of at least `min_count`. S-extensions come first,
/// each group sorted by item.
pub fn frequent_extensions(pdb: &ProjectedDatabase<'_>, min_count: usize) -> Vec<Extension> {
    let mut scratch = Scratch::new(pdb.base.dictionary().len());
    frequent_extensions_with(pdb, min_count.max(1), &mut scratch)
}

fn frequent_extensions_with(
    pdb: &ProjectedDatabase<'_>,
    min_count: usize,
    scratch: &mut Scratch,
) -> Vec<Extension> {
    let mut out = Vec::new();
    if pdb.entries.len() < min_count {
        return out;
    }
    let last = pdb.prefix.last_element();
    let seqs = pdb.base.sequences();
    for (k, e) in pdb.entries.iter().enumerate() {
        let stamp = k as u32;
        let elements = seqs[e.seq_index as usize].elements();
        let mut first_full = e.elem_offset as usize;
        if e.open_element {
            for &x in &elements[first_full].items()[e.item_offset as usize..] {
                scratch.i.bump(x, stamp);
            }
            first_full += 1;
        }
        for el in &elements[first_full..] {
            for &x in el.items() {
                scratch.s.bump(x, stamp);
            }
            if let Some(last) = last {
                if el.is_superset_of(last.items()) {
                    for &x in el.items_after(last.last()) {
                        scratch.i.bump(x, stamp);
                    }
                }
            }
        }
    }
    scratch
        .s
        .drain(min_count, ExtensionKind::Sequence, &mut out);
    scratch.i.drain(min_count, ExtensionKind::Itemset, &mut out);
    out
}

/// Entry for a match of the (extended) last element at `elements[j]`,
/// where `after` is the position of the first unconsumed item. `None`
/// when nothing remains.
fn entry_at(
    seq_index: u32,
    elements: &[Element],
    j: usize,
    after: usize,
) -> Option<ProjectionEntry> {
    if after < elements[j].len() {
        Some(ProjectionEntry {
            seq_index,
            elem_offset: j as u32,
            item_offset: after as u32,
            open_element: true,
        })
    } else if j + 1 < elements.len() {
        Some(ProjectionEntry {
            seq_index,
            elem_offset: j as u32 + 1,
            item_offset: 0,
            open_element: false,
        })
    } else {
        None
    }
}

/// Projects on `pdb.prefix` extended by `ext`. Entries move to the
/// earliest occurrence of the extended prefix; sequences without one, or
/// with nothing left after it, are dropped.
pub fn project<'a>(pdb: &ProjectedDatabase<'a>, ext: &Extension) -> ProjectedDatabase<'a> {
    let seqs = pdb.base.sequences();
    let x = ext.item;
    let mut entries = Vec::with_capacity(ext.count);
    let prefix = match ext.kind {
        ExtensionKind::Sequence => {
            for e in &pdb.entries {
                let elements = seqs[e.seq_index as usize].elements();
                let from = e.elem_offset as usize + usize::from(e.open_element);
                let hit = (from..elements.len())
                    .find_map(|j| elements[j].items().binary_search(&x).ok().map(|p| (j, p)));
                if let Some((j, p)) = hit {
                    entries.extend(entry_at(e.seq_index, elements, j, p + 1));
                }
            }
            pdb.prefix.s_extended(x)
        }
        ExtensionKind::Itemset => {
            let prefix = pdb.prefix.i_extended(x);
            let last = prefix.last_element().expect("i-extension needs a prefix");
            for e in &pdb.entries {
                let elements = seqs[e.seq_index as usize].elements();
                let mut from = e.elem_offset as usize;
                let mut hit = None;
                if e.open_element {
                    let open = &elements[from].items()[e.item_offset as usize..];
                    if let Ok(p) = open.binary_search(&x) {
                        hit = Some((from, e.item_offset as usize + p));
                    }
                    from += 1;
                }
                if hit.is_none() {
                    hit = (from..elements.len()).find_map(|j| {
                        if elements[j].is_superset_of(last.items()) {
                            elements[j].items().binary_search(&x).ok().map(|p| (j, p))
                        } else {
                            None
                        }
                    });
                }
                if let Some((j, p)) = hit {
                    entries.extend(entry_at(e.seq_index, elements, j, p + 1));
                }
            }
            prefix
        }
    };
    ProjectedDatabase {
        prefix,
        entries,
        base: pdb.base,
    }
}

/// Working-set figures collected while mining.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MineStats {
    /// Largest heap footprint of live projected databases along one
    /// recursion path, plus the base database.
    pub peak_bytes: usize,
}

/// Mines the complete set of sequential patterns meeting `cfg`.
pub fn mine(db: &SequenceDatabase, cfg: &MinerConfig) -> Result<PatternSet, MineError> {
    mine_with_stats(db, cfg).map(|(p, _)| p)
}

pub fn mine_with_stats(
    db: &SequenceDatabase,
    cfg: &MinerConfig,
) -> Result<(PatternSet, MineStats), MineError> {
    cfg.validate()?;
    let min_count = cfg.min_support.resolve(db.len())?;
    let root = ProjectedDatabase::initial(db);
    let n_items = db.dictionary().len();
    let first = frequent_extensions_with(&root, min_count, &mut Scratch::new(n_items));
    let base_bytes = db.total_items() * size_of::<ItemId>() + root.heap_bytes();

    let branch = |ext: &Extension| {
        let mut scratch = Scratch::new(n_items);
        let mut out = Vec::new();
        let mut peak = 0;
        let child = project(&root, ext);
        grow(
            &child,
            ext.count,
            cfg,
            min_count,
            &mut scratch,
            &mut out,
            0,
            &mut peak,
        );
        (out, peak)
    };
    let results: Vec<(Vec<Pattern>, usize)> = if cfg.parallel {
        first.par_iter().map(branch).collect()
    } else {
        first.iter().map(branch).collect()
    };
    let mut peak = 0;
    let mut patterns = Vec::new();
    for (p, b) in results {
        peak = peak.max(b);
        patterns.extend(p);
    }
    Ok((
        PatternSet::new(patterns, db.len()),
        MineStats {
            peak_bytes: base_bytes + peak,
        },
    ))
}

#[allow(clippy::too_many_arguments)]
fn grow(
    pdb: &ProjectedDatabase<'_>,
    support: usize,
    cfg: &MinerConfig,
    min_count: usize,
    scratch: &mut Scratch,
    out: &mut Vec<Pattern>,
    live_bytes: usize,
    peak: &mut usize,
) {
    let live = live_bytes + pdb.heap_bytes();
    *peak = (*peak).max(live);
    let items = pdb.prefix.item_count();
    if cfg.reports(items) {
        out.push(Pattern {
            sequence: pdb.prefix.clone(),
            support_count: support,
        });
    }
    if items >= cfg.max_items() {
        return;
    }
    for ext in frequent_extensions_with(pdb, min_count, scratch) {
        let child = project(pdb, &ext);
        grow(&child, ext.count, cfg, min_count, scratch, out, live, peak);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::MinSupport;
    use crate::sequence::suffix;

    fn classic() -> SequenceDatabase {
        SequenceDatabase::parse_text(
            "10: a(abc)(ac)d(cf)\n20: (ad)c(bc)(ae)\n30: (ef)(ab)(df)cb\n40: eg(af)cbc\n",
            Notation::Compact,
        )
        .unwrap()
    }

    fn numeric() -> SequenceDatabase {
        SequenceDatabase::parse_text(
            "(1)(2)(1 2)(3)(1 3)(4 5)(6)\n(3 4)(3)(2 3)(1 4)\n(4 5)(2)(2 3 4)(3)(1)\n(4)(5)(1 6)(3)(2)(7)(1)\n",
            Notation::Spaced,
        )
        .unwrap()
    }

    fn s_ext(db: &SequenceDatabase, label: &str) -> Extension {
        Extension {
            kind: ExtensionKind::Sequence,
            item: db.dictionary().id(label).unwrap(),
            count: 1,
        }
    }

    #[test]
    fn frequent_items_numeric() {
        let db = numeric();
        let got: Vec<(String, usize)> = frequent_items(&db, 2)
            .into_iter()
            .map(|(i, c)| (i.label, c))
            .collect();
        let want: Vec<(String, usize)> =
            [("1", 4), ("2", 4), ("3", 4), ("4", 4), ("5", 3), ("6", 2)]
                .iter()
                .map(|(l, c)| (l.to_string(), *c))
                .collect();
        assert_eq!(got, want);
        let all = frequent_items(&db, 1);
        assert_eq!(
            all.last().map(|(i, c)| (i.label.as_str(), *c)),
            Some(("7", 1))
        );
    }

    #[test]
    fn frequent_items_empty_db() {
        let db = SequenceDatabase::parse_text("", Notation::Spaced).unwrap();
        assert!(frequent_items(&db, 1).is_empty());
    }

    #[test]
    fn project_row_a_and_f() {
        let db = classic();
        let root = ProjectedDatabase::initial(&db);
        let a = project(&root, &s_ext(&db, "a"));
        assert_eq!(
            a.render(Notation::Compact),
            "((abc)(ac)d(cf)), ((_d)c(bc)(ae)), ((_b)(df)cb), ((_f)cbc)"
        );
        let f = project(&root, &s_ext(&db, "f"));
        assert_eq!(f.render(Notation::Compact), "((ab)(df)cb), (cbc)");
        let g = project(&root, &s_ext(&db, "g"));
        assert_eq!(g.len(), 1);
        let gg = project(&g, &s_ext(&db, "g"));
        assert!(gg.is_empty());
    }

    #[test]
    fn projection_matches_suffix_function() {
        let db = classic();
        let root = ProjectedDatabase::initial(&db);
        let mut pdb = project(&root, &s_ext(&db, "a"));
        pdb = project(
            &pdb,
            &Extension {
                kind: ExtensionKind::Itemset,
                item: db.dictionary().id("b").unwrap(),
                count: 2,
            },
        );
        assert_eq!(db.render(pdb.prefix()), "(ab)");
        for e in pdb.entries() {
            let s = &db.sequences()[e.seq_index as usize];
            assert_eq!(pdb.suffix_of(e), suffix(s, pdb.prefix()));
        }
        assert_eq!(pdb.render(Notation::Compact), "((_c)(ac)d(cf)), ((df)cb)");
    }

    #[test]
    fn extensions_of_a() {
        let db = classic();
        let d = db.dictionary();
        let root = ProjectedDatabase::initial(&db);
        let a = project(&root, &s_ext(&db, "a"));
        let exts = frequent_extensions(&a, 2);
        let has = |kind, l: &str| {
            exts.iter()
                .any(|e| e.kind == kind && e.item == d.id(l).unwrap())
        };
        assert!(has(ExtensionKind::Sequence, "b"));
        assert!(has(ExtensionKind::Sequence, "c"));
        assert!(has(ExtensionKind::Itemset, "b"));
        assert!(!has(ExtensionKind::Itemset, "a"));
        let ib = exts
            .iter()
            .find(|e| e.kind == ExtensionKind::Itemset && e.item == d.id("b").unwrap())
            .unwrap();
        assert_eq!(ib.count, 2);
    }

    #[test]
    fn single_entry_cannot_reach_two() {
        let db = classic();
        let root = ProjectedDatabase::initial(&db);
        let g = project(&root, &s_ext(&db, "g"));
        assert!(frequent_extensions(&g, 2).is_empty());
    }

    #[test]
    fn mine_rejects_bad_config() {
        let db = classic();
        assert!(mine(&db, &MinerConfig::new(MinSupport::Count(0))).is_err());
        assert!(mine(&db, &MinerConfig::new(MinSupport::Fraction(1.5))).is_err());
        assert!(mine(
            &db,
            &MinerConfig::new(MinSupport::Count(1)).with_max_length(0)
        )
        .is_err());
    }

    #[test]
    fn mine_respects_length_bounds() {
        let db = classic();
        let cfg = MinerConfig::new(MinSupport::Count(2))
            .with_max_length(2)
            .with_min_pattern_length(2);
        let set = mine(&db, &cfg).unwrap();
        assert!(!set.is_empty());
        assert!(set.iter().all(|p| p.sequence.item_count() == 2));
    }

    #[test]
    fn serial_and_parallel_agree() {
        let db = classic();
        let cfg = MinerConfig::new(MinSupport::Count(2));
        assert_eq!(
            mine(&db, &cfg).unwrap(),
            mine(&db, &cfg.clone().serial()).unwrap()
        );
    }

    #[test]
    fn min_support_above_db_size_is_empty() {
        let db = numeric();
        assert!(mine(&db, &MinerConfig::new(MinSupport::Count(5)))
            .unwrap()
            .is_empty());
    }
}
