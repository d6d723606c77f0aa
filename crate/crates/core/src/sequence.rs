//! Sequences of itemsets over a dictionary-encoded alphabet, plus the
//! prefix / suffix / containment algebra the miners are built on.
//!
//! Item ids are assigned in lexicographic label order when a [`Dictionary`]
//! is built, so "alphabetically after" is a plain integer comparison.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::SequenceError;

pub type ItemId = u32;

/// An item together with its symbolic name.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Item {
    pub id: ItemId,
    pub label: String,
}

/// Bijection between item labels and dense ids, ordered by label.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Dictionary {
    labels: Vec<String>,
    ids: HashMap<String, ItemId>,
}

impl Dictionary {
    /// Builds a dictionary over the distinct labels, sorted lexicographically.
    pub fn from_labels<I, S>(labels: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let sorted: BTreeSet<String> = labels.into_iter().map(|s| s.as_ref().to_owned()).collect();
        let labels: Vec<String> = sorted.into_iter().collect();
        let ids = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i as ItemId))
            .collect();
        Dictionary { labels, ids }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn id(&self, label: &str) -> Option<ItemId> {
        self.ids.get(label).copied()
    }

    pub fn label(&self, id: ItemId) -> Option<&str> {
        self.labels.get(id as usize).map(String::as_str)
    }

    pub fn item(&self, id: ItemId) -> Option<Item> {
        self.label(id).map(|l| Item {
            id,
            label: l.to_owned(),
        })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Compact notation when every label is a single ASCII letter.
    pub fn notation(&self) -> Notation {
        let compact = !self.labels.is_empty()
            && self
                .labels
                .iter()
                .all(|l| l.len() == 1 && l.as_bytes()[0].is_ascii_alphabetic());
        if compact {
            Notation::Compact
        } else {
            Notation::Spaced
        }
    }

    fn resolve(&self, id: ItemId) -> &str {
        self.label(id).unwrap_or("?")
    }
}

/// Text notation for sequences.
///
/// `Compact` writes single-character items back to back and only
/// parenthesizes multi-item elements: `a(abc)(ac)d(cf)`.
/// `Spaced` parenthesizes every element and separates items by a space:
/// `(1)(2)(1 2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Notation {
    Compact,
    Spaced,
}

/// A non-empty set of items, stored as strictly increasing ids.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Element(Vec<ItemId>);

impl Element {
    pub fn new(mut items: Vec<ItemId>) -> Result<Self, SequenceError> {
        if items.is_empty() {
            return Err(SequenceError::EmptyElement);
        }
        items.sort_unstable();
        items.dedup();
        Ok(Element(items))
    }

    pub fn single(item: ItemId) -> Self {
        Element(vec![item])
    }

    pub fn items(&self) -> &[ItemId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn last(&self) -> ItemId {
        *self.0.last().expect("elements are non-empty")
    }

    pub fn contains(&self, item: ItemId) -> bool {
        self.0.binary_search(&item).is_ok()
    }

    /// True if every item of `other` is in `self`.
    pub fn is_superset_of(&self, other: &[ItemId]) -> bool {
        is_sorted_subset(other, &self.0)
    }

    /// Items strictly greater than `bound`.
    pub fn items_after(&self, bound: ItemId) -> &[ItemId] {
        let start = self.0.partition_point(|&i| i <= bound);
        &self.0[start..]
    }

    pub(crate) fn push_larger(&mut self, item: ItemId) {
        debug_assert!(item > self.last());
        self.0.push(item);
    }
}

/// Merge-style subset test over two strictly increasing slices.
pub(crate) fn is_sorted_subset(small: &[ItemId], big: &[ItemId]) -> bool {
    if small.len() > big.len() {
        return false;
    }
    let mut j = 0;
    for &x in small {
        while j < big.len() && big[j] < x {
            j += 1;
        }
        if j == big.len() || big[j] != x {
            return false;
        }
        j += 1;
    }
    true
}

/// An ordered list of elements. Derived ordering is lexicographic over
/// elements, then over item ids, and is the canonical output order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct Sequence {
    elements: Vec<Element>,
}

impl Sequence {
    pub fn empty() -> Self {
        Sequence::default()
    }

    pub fn new(elements: Vec<Element>) -> Self {
        Sequence { elements }
    }

    pub fn from_ids(raw: Vec<Vec<ItemId>>) -> Result<Self, SequenceError> {
        let elements = raw
            .into_iter()
            .map(Element::new)
            .collect::<Result<_, _>>()?;
        Ok(Sequence { elements })
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Total number of items over all elements.
    pub fn item_count(&self) -> usize {
        self.elements.iter().map(Element::len).sum()
    }

    pub fn last_element(&self) -> Option<&Element> {
        self.elements.last()
    }

    /// Appends `item` as a new element.
    pub fn s_extended(&self, item: ItemId) -> Sequence {
        let mut elements = self.elements.clone();
        elements.push(Element::single(item));
        Sequence { elements }
    }

    /// Adds `item` to the last element. `item` must be larger than every
    /// item already there.
    pub fn i_extended(&self, item: ItemId) -> Sequence {
        let mut elements = self.elements.clone();
        elements
            .last_mut()
            .expect("i-extension of an empty sequence")
            .push_larger(item);
        Sequence { elements }
    }

    /// The sequence without its last element.
    pub fn antecedent(&self) -> Sequence {
        let n = self.elements.len().saturating_sub(1);
        Sequence {
            elements: self.elements[..n].to_vec(),
        }
    }

    /// All proper non-empty prefixes, shortest first. A prefix keeps
    /// whole leading elements and a leading run of the next element's items.
    pub fn proper_prefixes(&self) -> Vec<Sequence> {
        let mut out = Vec::new();
        let mut done: Vec<Element> = Vec::new();
        for (idx, el) in self.elements.iter().enumerate() {
            for k in 1..=el.len() {
                let is_self = idx + 1 == self.elements.len() && k == el.len();
                if is_self {
                    break;
                }
                let mut elements = done.clone();
                elements.push(Element(el.items()[..k].to_vec()));
                out.push(Sequence { elements });
            }
            done.push(el.clone());
        }
        out
    }

    pub fn display<'a>(&'a self, dict: &'a Dictionary, notation: Notation) -> SequenceDisplay<'a> {
        SequenceDisplay {
            seq: self,
            dict,
            notation,
        }
    }

    pub fn render(&self, dict: &Dictionary) -> String {
        self.display(dict, dict.notation()).to_string()
    }
}

pub struct SequenceDisplay<'a> {
    seq: &'a Sequence,
    dict: &'a Dictionary,
    notation: Notation,
}

impl fmt::Display for SequenceDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for el in &self.seq.elements {
            write_element(f, self.dict, self.notation, el.items(), false)?;
        }
        Ok(())
    }
}

fn write_element(
    f: &mut impl fmt::Write,
    dict: &Dictionary,
    notation: Notation,
    items: &[ItemId],
    open: bool,
) -> fmt::Result {
    match notation {
        Notation::Compact => {
            let bare = items.len() == 1 && !open;
            if !bare {
                f.write_char('(')?;
            }
            if open {
                f.write_char('_')?;
            }
            for &i in items {
                f.write_str(dict.resolve(i))?;
            }
            if !bare {
                f.write_char(')')?;
            }
        }
        Notation::Spaced => {
            f.write_char('(')?;
            if open {
                f.write_str("_ ")?;
            }
            for (k, &i) in items.iter().enumerate() {
                if k > 0 {
                    f.write_char(' ')?;
                }
                f.write_str(dict.resolve(i))?;
            }
            f.write_char(')')?;
        }
    }
    Ok(())
}

/// What is left of a sequence after a prefix occurrence. A partially
/// consumed element is kept apart in `leading_partial` and rendered as
/// `(_x)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Suffix {
    pub leading_partial: Option<Vec<ItemId>>,
    pub rest: Vec<Element>,
}

impl Suffix {
    pub fn is_empty(&self) -> bool {
        self.leading_partial.is_none() && self.rest.is_empty()
    }

    pub fn render(&self, dict: &Dictionary, notation: Notation) -> String {
        let mut s = String::new();
        if let Some(p) = &self.leading_partial {
            write_element(&mut s, dict, notation, p, true).expect("string write");
        }
        for el in &self.rest {
            write_element(&mut s, dict, notation, el.items(), false).expect("string write");
        }
        s
    }
}

/// Builds a canonical sequence from item labels: items inside an element
/// are sorted by id and deduplicated.
pub fn canonicalize<S: AsRef<str>>(
    raw: &[Vec<S>],
    dict: &Dictionary,
) -> Result<Sequence, SequenceError> {
    let mut elements = Vec::with_capacity(raw.len());
    for el in raw {
        let ids = el
            .iter()
            .map(|l| {
                let l = l.as_ref();
                dict.id(l)
                    .ok_or_else(|| SequenceError::UnknownLabel(l.to_owned()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        elements.push(Element::new(ids)?);
    }
    Ok(Sequence { elements })
}

/// Earliest end position of `pattern` in `elements` via greedy matching.
/// Greedy is exact here: taking the first element that can host each
/// pattern element never rules out a later match.
pub(crate) fn earliest_match_end(elements: &[Element], pattern: &[Element]) -> Option<usize> {
    let mut pos = 0;
    let mut end = None;
    for pel in pattern {
        let j = (pos..elements.len()).find(|&j| elements[j].is_superset_of(pel.items()))?;
        end = Some(j);
        pos = j + 1;
    }
    end
}

/// True iff `p` occurs in `s` as an order-preserving sequence of subsets.
pub fn contains_subsequence(s: &Sequence, p: &Sequence) -> bool {
    p.is_empty() || earliest_match_end(&s.elements, &p.elements).is_some()
}

/// Prefix test: leading elements equal, final element a subset whose
/// leftover items all sort after it.
pub fn is_prefix(b: &Sequence, a: &Sequence) -> bool {
    let m = b.len();
    if m == 0 {
        return true;
    }
    if m > a.len() {
        return false;
    }
    if b.elements[..m - 1] != a.elements[..m - 1] {
        return false;
    }
    let last_b = &b.elements[m - 1];
    let last_a = &a.elements[m - 1];
    if !last_a.is_superset_of(last_b.items()) {
        return false;
    }
    let max_b = last_b.last();
    last_a
        .items()
        .iter()
        .filter(|i| !last_b.contains(**i))
        .all(|&i| i > max_b)
}

/// Suffix of `a` after the earliest occurrence of `b`. The items of the
/// matched element that sort after `b`'s last item become the leading
/// partial element. Returns the empty suffix when `b` does not occur.
pub fn suffix(a: &Sequence, b: &Sequence) -> Suffix {
    let Some(last_b) = b.last_element() else {
        return Suffix {
            leading_partial: None,
            rest: a.elements.clone(),
        };
    };
    let Some(end) = earliest_match_end(&a.elements, &b.elements) else {
        return Suffix::default();
    };
    let partial = a.elements[end].items_after(last_b.last());
    Suffix {
        leading_partial: (!partial.is_empty()).then(|| partial.to_vec()),
        rest: a.elements[end + 1..].to_vec(),
    }
}

/// Splits sequence text into per-element label lists.
///
/// Accepts an optional `<...>` wrapper. Commas and whitespace between
/// elements are ignored.
pub fn parse_labels(text: &str, notation: Notation) -> Result<Vec<Vec<String>>, SequenceError> {
    let mut body = text.trim();
    if let Some(inner) = body.strip_prefix('<') {
        body = inner.strip_suffix('>').ok_or(SequenceError::Syntax {
            pos: text.len(),
            msg: "missing closing '>'".into(),
        })?;
    }
    let is_sep = |c: char| c.is_whitespace() || c == ',';
    let mut out = Vec::new();
    let mut chars = body.char_indices().peekable();
    while let Some((pos, c)) = chars.next() {
        if is_sep(c) {
            continue;
        }
        match c {
            '(' => {
                let mut inner = String::new();
                let mut closed = false;
                for (_, c) in chars.by_ref() {
                    match c {
                        ')' => {
                            closed = true;
                            break;
                        }
                        '(' => {
                            return Err(SequenceError::Syntax {
                                pos,
                                msg: "nested '('".into(),
                            })
                        }
                        c => inner.push(c),
                    }
                }
                if !closed {
                    return Err(SequenceError::Syntax {
                        pos,
                        msg: "unclosed '('".into(),
                    });
                }
                let labels: Vec<String> = match notation {
                    Notation::Compact => inner
                        .chars()
                        .filter(|c| !is_sep(*c))
                        .map(String::from)
                        .collect(),
                    Notation::Spaced => inner
                        .split(is_sep)
                        .filter(|t| !t.is_empty())
                        .map(String::from)
                        .collect(),
                };
                if labels.is_empty() {
                    return Err(SequenceError::EmptyElement);
                }
                out.push(labels);
            }
            ')' => {
                return Err(SequenceError::Syntax {
                    pos,
                    msg: "unmatched ')'".into(),
                })
            }
            c => match notation {
                Notation::Compact => out.push(vec![c.to_string()]),
                Notation::Spaced => {
                    let mut tok = c.to_string();
                    while let Some(&(_, n)) = chars.peek() {
                        if is_sep(n) || n == '(' || n == ')' {
                            break;
                        }
                        tok.push(n);
                        chars.next();
                    }
                    out.push(vec![tok]);
                }
            },
        }
    }
    Ok(out)
}

/// Immutable collection of sequences sharing one dictionary.
#[derive(Debug, Clone)]
pub struct SequenceDatabase {
    sequences: Vec<Sequence>,
    seq_ids: Vec<String>,
    dictionary: Arc<Dictionary>,
}

impl SequenceDatabase {
    pub fn new(
        sequences: Vec<Sequence>,
        seq_ids: Vec<String>,
        dictionary: Arc<Dictionary>,
    ) -> Result<Self, SequenceError> {
        if sequences.len() != seq_ids.len() {
            return Err(SequenceError::IdCountMismatch {
                sequences: sequences.len(),
                ids: seq_ids.len(),
            });
        }
        let n = dictionary.len() as ItemId;
        for s in &sequences {
            for el in s.elements() {
                if let Some(&bad) = el.items().iter().find(|&&i| i >= n) {
                    return Err(SequenceError::UnknownItem(bad));
                }
            }
        }
        Ok(SequenceDatabase {
            sequences,
            seq_ids,
            dictionary,
        })
    }

    /// Builds the dictionary from every label used, then canonicalizes.
    pub fn from_labeled<S: AsRef<str>>(
        rows: Vec<(String, Vec<Vec<S>>)>,
    ) -> Result<Self, SequenceError> {
        let dict = Dictionary::from_labels(
            rows.iter()
                .flat_map(|(_, r)| r.iter().flatten().map(|s| s.as_ref().to_owned())),
        );
        let mut ids = Vec::with_capacity(rows.len());
        let mut seqs = Vec::with_capacity(rows.len());
        for (id, raw) in &rows {
            seqs.push(canonicalize(raw, &dict)?);
            ids.push(id.clone());
        }
        SequenceDatabase::new(seqs, ids, Arc::new(dict))
    }

    /// Parses one sequence per text line. A line may carry an id as
    /// `ID: sequence`; otherwise ids are `S1`, `S2`, ... Blank lines and
    /// `#` comments are skipped.
    pub fn parse_text(text: &str, notation: Notation) -> Result<Self, SequenceError> {
        let mut rows = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (id, body) = match line.split_once(':') {
                Some((id, body)) => (id.trim().to_owned(), body),
                None => (format!("S{}", rows.len() + 1), line),
            };
            rows.push((id, parse_labels(body, notation)?));
        }
        SequenceDatabase::from_labeled(rows)
    }

    pub fn sequences(&self) -> &[Sequence] {
        &self.sequences
    }

    pub fn seq_ids(&self) -> &[String] {
        &self.seq_ids
    }

    pub fn dictionary(&self) -> &Dictionary {
        &self.dictionary
    }

    pub fn shared_dictionary(&self) -> Arc<Dictionary> {
        Arc::clone(&self.dictionary)
    }

    pub fn len(&self) -> usize {
        self.sequences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequences.is_empty()
    }

    /// Average number of elements per sequence.
    pub fn mean_elements(&self) -> f64 {
        if self.sequences.is_empty() {
            return 0.0;
        }
        self.sequences.iter().map(Sequence::len).sum::<usize>() as f64 / self.sequences.len() as f64
    }

    pub fn total_items(&self) -> usize {
        self.sequences.iter().map(Sequence::item_count).sum()
    }

    /// Parses a sequence against this database's dictionary.
    pub fn parse_pattern(&self, text: &str) -> Result<Sequence, SequenceError> {
        canonicalize(
            &parse_labels(text, self.dictionary.notation())?,
            &self.dictionary,
        )
    }

    pub fn render(&self, seq: &Sequence) -> String {
        seq.render(&self.dictionary)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn numeric() -> SequenceDatabase {
        SequenceDatabase::parse_text(
            "S1: (1)(2)(1 2)(3)(1 3)(4 5)(6)\n\
             S2: (3 4)(3)(2 3)(1 4)\n\
             S3: (4 5)(2)(2 3 4)(3)(1)\n\
             S4: (4)(5)(1 6)(3)(2)(7)(1)\n",
            Notation::Spaced,
        )
        .unwrap()
    }

    fn letters() -> Dictionary {
        Dictionary::from_labels("abcdefg".chars().map(String::from))
    }

    fn seq(text: &str, dict: &Dictionary) -> Sequence {
        canonicalize(&parse_labels(text, dict.notation()).unwrap(), dict).unwrap()
    }

    #[test]
    fn canonicalize_sorts_and_dedups() {
        let d = letters();
        let s = canonicalize(&[vec!["b", "a"], vec!["c"]], &d).unwrap();
        assert_eq!(s.render(&d), "(ab)c");
        let s = canonicalize(&[vec!["a", "a", "b"]], &d).unwrap();
        assert_eq!(s.render(&d), "(ab)");
        let empty: Vec<Vec<&str>> = vec![];
        assert!(canonicalize(&empty, &d).unwrap().is_empty());
    }

    #[test]
    fn canonicalize_errors() {
        let d = letters();
        assert_eq!(
            canonicalize(&[vec!["z"]], &d),
            Err(SequenceError::UnknownLabel("z".into()))
        );
        let no_items: Vec<Vec<&str>> = vec![vec![]];
        assert_eq!(
            canonicalize(&no_items, &d),
            Err(SequenceError::EmptyElement)
        );
    }

    #[test]
    fn dictionary_orders_labels() {
        let d = Dictionary::from_labels(["Shopping", "Dining", "Nature", "Dining"]);
        assert_eq!(d.len(), 3);
        assert_eq!(d.id("Dining"), Some(0));
        assert_eq!(d.id("Nature"), Some(1));
        assert_eq!(d.label(2), Some("Shopping"));
        assert_eq!(d.notation(), Notation::Spaced);
        assert_eq!(letters().notation(), Notation::Compact);
    }

    #[test]
    fn containment_examples() {
        let db = numeric();
        let s1 = &db.sequences()[0];
        assert!(contains_subsequence(
            s1,
            &db.parse_pattern("(1 2)(4 5)").unwrap()
        ));
        assert!(contains_subsequence(s1, &Sequence::empty()));
        let s = db.parse_pattern("(1)(2)").unwrap();
        assert!(!contains_subsequence(
            &s,
            &db.parse_pattern("(2)(1)").unwrap()
        ));
    }

    #[test]
    fn prefix_examples() {
        let d = letters();
        assert!(is_prefix(&seq("(ab)", &d), &seq("(abc)d", &d)));
        assert!(!is_prefix(&seq("(ac)", &d), &seq("(abc)", &d)));
        assert!(is_prefix(&seq("a", &d), &seq("a(abc)(ac)d(cf)", &d)));
        assert!(!is_prefix(&seq("abc", &d), &seq("ab", &d)));
        assert!(!is_prefix(&seq("b", &d), &seq("ab", &d)));
    }

    #[test]
    fn suffix_examples() {
        let d = letters();
        let n = Notation::Compact;
        let s = suffix(&seq("a(abc)(ac)d(cf)", &d), &seq("a", &d));
        assert_eq!(s.leading_partial, None);
        assert_eq!(s.render(&d, n), "(abc)(ac)d(cf)");
        let s = suffix(&seq("(ad)c(bc)(ae)", &d), &seq("a", &d));
        assert_eq!(s.leading_partial, Some(vec![d.id("d").unwrap()]));
        assert_eq!(s.render(&d, n), "(_d)c(bc)(ae)");
        let db = numeric();
        let s = suffix(
            &db.parse_pattern("(1)(2)").unwrap(),
            &db.parse_pattern("(7)").unwrap(),
        );
        assert!(s.is_empty());
    }

    #[test]
    fn spaced_suffix_rendering() {
        let db = numeric();
        let s = suffix(&db.sequences()[2], &db.parse_pattern("(2)(2)").unwrap());
        assert_eq!(s.render(db.dictionary(), Notation::Spaced), "(_ 3 4)(3)(1)");
    }

    #[test]
    fn parse_round_trip_both_notations() {
        let db = numeric();
        assert_eq!(db.render(&db.sequences()[1]), "(3 4)(3)(2 3)(1 4)");
        let d = letters();
        let s = seq("<a(abc)(ac)d(cf)>", &d);
        assert_eq!(s.render(&d), "a(abc)(ac)d(cf)");
        assert_eq!(s.len(), 5);
        assert_eq!(s.item_count(), 9);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            parse_labels("(ab", Notation::Compact),
            Err(SequenceError::Syntax { .. })
        ));
        assert!(matches!(
            parse_labels("a)b", Notation::Compact),
            Err(SequenceError::Syntax { .. })
        ));
        assert_eq!(
            parse_labels("()", Notation::Spaced),
            Err(SequenceError::EmptyElement)
        );
        assert!(matches!(
            parse_labels("<ab", Notation::Compact),
            Err(SequenceError::Syntax { .. })
        ));
    }

    #[test]
    fn spaced_bare_tokens_are_singletons() {
        let raw = parse_labels("Dining (Hiking Shopping), Nature", Notation::Spaced).unwrap();
        assert_eq!(
            raw,
            vec![vec!["Dining"], vec!["Hiking", "Shopping"], vec!["Nature"]]
        );
    }

    #[test]
    fn proper_prefixes_enumerates_item_prefixes() {
        let d = letters();
        let p = seq("(ab)c", &d);
        let got: Vec<String> = p.proper_prefixes().iter().map(|s| s.render(&d)).collect();
        assert_eq!(got, vec!["a", "(ab)"]);
        assert!(seq("a", &d).proper_prefixes().is_empty());
    }

    #[test]
    fn database_validates_ids() {
        let d = Arc::new(letters());
        let bad = Sequence::from_ids(vec![vec![99]]).unwrap();
        assert_eq!(
            SequenceDatabase::new(vec![bad], vec!["x".into()], d.clone()).unwrap_err(),
            SequenceError::UnknownItem(99)
        );
        assert!(SequenceDatabase::new(vec![], vec!["x".into()], d).is_err());
    }
}
