#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use seqmine::prefixspan::{
    frequent_extensions, frequent_items, project, ExtensionKind, ProjectedDatabase,
};
use seqmine::{contains_subsequence, Dictionary, Notation, Sequence, SequenceDatabase};

pub const CLASSIC: &str =
    "10: a(abc)(ac)d(cf)\n20: (ad)c(bc)(ae)\n30: (ef)(ab)(df)cb\n40: eg(af)cbc\n";

pub const NUMERIC: &str = "S1: (1)(2)(1 2)(3)(1 3)(4 5)(6)\n\
                          S2: (3 4)(3)(2 3)(1 4)\n\
                          S3: (4 5)(2)(2 3 4)(3)(1)\n\
                          S4: (4)(5)(1 6)(3)(2)(7)(1)\n";

/// Projected database of each single-item prefix of the classic database
/// at min_count 2, rendered over the frequent-item alphabet.
pub const PROJECTIONS: [(&str, &str); 6] = [
    (
        "a",
        "((abc)(ac)d(cf)), ((_d)c(bc)(ae)), ((_b)(df)cb), ((_f)cbc)",
    ),
    ("b", "((_c)(ac)d(cf)), ((_c)(ae)), ((df)cb), (c)"),
    ("c", "((ac)d(cf)), ((bc)(ae)), (b), (bc)"),
    ("d", "((cf)), (c(bc)(ae)), ((_f)cb)"),
    ("e", "((_f)(ab)(df)cb), ((af)cbc)"),
    ("f", "((ab)(df)cb), (cbc)"),
];

/// Frequent patterns of the classic database at min_count 2, by first item.
pub const PATTERNS_BY_FIRST_ITEM: [(&str, &[&str]); 6] = [
    (
        "a",
        &[
            "a", "aa", "ab", "a(bc)", "a(bc)a", "aba", "abc", "(ab)", "(ab)c", "(ab)d", "(ab)f",
            "(ab)dc", "ac", "aca", "acb", "acc", "ad", "adc", "af",
        ],
    ),
    ("b", &["b", "ba", "bc", "(bc)", "(bc)a", "bd", "bdc", "bf"]),
    ("c", &["c", "ca", "cb", "cc"]),
    ("d", &["d", "db", "dc", "dcb"]),
    (
        "e",
        &[
            "e", "ea", "eab", "eac", "eacb", "eb", "ebc", "ec", "ecb", "ef", "efb", "efc", "efcb",
        ],
    ),
    ("f", &["f", "fb", "fbc", "fc", "fcb"]),
];

/// Projection of `db` on the single-item prefix `item`, restricted to
/// items frequent at `min_count`.
pub fn single_item_projection(db: &SequenceDatabase, item: &str, min_count: usize) -> String {
    let root = ProjectedDatabase::initial(db);
    let id = db.dictionary().id(item).unwrap();
    let ext = frequent_extensions(&root, 1)
        .into_iter()
        .find(|e| e.kind == ExtensionKind::Sequence && e.item == id)
        .unwrap();
    let frequent: Vec<u32> = frequent_items(db, min_count)
        .into_iter()
        .map(|(i, _)| i.id)
        .collect();
    project(&root, &ext).render_filtered(Notation::Compact, |i| frequent.contains(&i))
}

/// Mined patterns starting with `item`, each wrapped in parentheses.
pub fn patterns_from(
    set: &seqmine::PatternSet,
    db: &SequenceDatabase,
    item: &str,
) -> BTreeSet<String> {
    let id = db.dictionary().id(item).unwrap();
    set.starting_with(id)
        .map(|p| format!("({})", db.render(&p.sequence)))
        .collect()
}

pub fn listed_patterns(entries: &[&str]) -> BTreeSet<String> {
    entries.iter().map(|e| format!("({e})")).collect()
}

/// Patterns whose proper prefixes are missing or less supported.
pub fn monotonicity_violations(set: &seqmine::PatternSet) -> Vec<String> {
    let mut bad = Vec::new();
    for p in set.iter() {
        for q in p.sequence.proper_prefixes() {
            match set.support_of(&q) {
                Some(c) if c >= p.support_count => {}
                other => bad.push(format!(
                    "{:?} (support {}) has prefix {:?} at {:?}",
                    p.sequence, p.support_count, q, other
                )),
            }
        }
    }
    bad
}

pub fn classic() -> SequenceDatabase {
    SequenceDatabase::parse_text(CLASSIC, Notation::Compact).unwrap()
}

pub fn numeric() -> SequenceDatabase {
    SequenceDatabase::parse_text(NUMERIC, Notation::Spaced).unwrap()
}

/// Random database over a fixed dictionary `0..alphabet`. Elements hold
/// one item 60% of the time, two 30%, three 10%.
pub fn random_db(
    rng: &mut impl Rng,
    max_seqs: usize,
    max_elems: usize,
    alphabet: usize,
) -> SequenceDatabase {
    let dict = Arc::new(Dictionary::from_labels(
        (0..alphabet).map(|i| ((b'a' + i as u8) as char).to_string()),
    ));
    let n = rng.gen_range(1..=max_seqs);
    let mut seqs = Vec::with_capacity(n);
    for _ in 0..n {
        let len = rng.gen_range(1..=max_elems);
        let raw: Vec<Vec<u32>> = (0..len)
            .map(|_| {
                let k = match rng.gen_range(0..10) {
                    0..=5 => 1,
                    6..=8 => 2,
                    _ => 3,
                };
                (0..k).map(|_| rng.gen_range(0..alphabet as u32)).collect()
            })
            .collect();
        seqs.push(Sequence::from_ids(raw).unwrap());
    }
    let ids = (0..n).map(|i| format!("S{}", i + 1)).collect();
    SequenceDatabase::new(seqs, ids, dict).unwrap()
}

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Every distinct subsequence of `s`: pick an increasing set of element
/// positions and a non-empty subset of each picked element.
pub fn all_subsequences(s: &Sequence) -> BTreeSet<Vec<Vec<u32>>> {
    fn rec(els: &[Vec<u32>], i: usize, cur: &mut Vec<Vec<u32>>, out: &mut BTreeSet<Vec<Vec<u32>>>) {
        if i == els.len() {
            if !cur.is_empty() {
                out.insert(cur.clone());
            }
            return;
        }
        rec(els, i + 1, cur, out);
        let el = &els[i];
        for mask in 1u32..(1 << el.len()) {
            let sub: Vec<u32> = el
                .iter()
                .enumerate()
                .filter(|(b, _)| mask >> b & 1 == 1)
                .map(|(_, &x)| x)
                .collect();
            cur.push(sub);
            rec(els, i + 1, cur, out);
            cur.pop();
        }
    }
    let els: Vec<Vec<u32>> = s.elements().iter().map(|e| e.items().to_vec()).collect();
    let mut out = BTreeSet::new();
    rec(&els, 0, &mut Vec::new(), &mut out);
    out
}

/// Exhaustive oracle: every subsequence of every database sequence,
/// with support counted by `contains_subsequence` over the whole database.
pub fn brute_force_supports(db: &SequenceDatabase) -> BTreeMap<Sequence, usize> {
    let mut candidates = BTreeSet::new();
    for s in db.sequences() {
        candidates.extend(all_subsequences(s));
    }
    candidates
        .into_iter()
        .map(|raw| {
            let p = Sequence::from_ids(raw).unwrap();
            let c = db
                .sequences()
                .iter()
                .filter(|s| contains_subsequence(s, &p))
                .count();
            (p, c)
        })
        .collect()
}

pub fn oracle_patterns(
    all: &BTreeMap<Sequence, usize>,
    min_count: usize,
    max_length: Option<usize>,
) -> BTreeMap<Sequence, usize> {
    all.iter()
        .filter(|(p, &c)| c >= min_count && max_length.is_none_or(|m| p.item_count() <= m))
        .map(|(p, &c)| (p.clone(), c))
        .collect()
}

pub fn as_map(set: &seqmine::PatternSet) -> BTreeMap<Sequence, usize> {
    set.iter()
        .map(|p| (p.sequence.clone(), p.support_count))
        .collect()
}

/// Backtracking containment test that tries every placement.
pub fn contains_exhaustive(s: &Sequence, p: &Sequence) -> bool {
    fn rec(s: &[seqmine::Element], p: &[seqmine::Element], from: usize) -> bool {
        let Some((first, rest)) = p.split_first() else {
            return true;
        };
        (from..s.len())
            .any(|j| first.items().iter().all(|i| s[j].contains(*i)) && rec(s, rest, j + 1))
    }
    rec(s.elements(), p.elements(), 0)
}
