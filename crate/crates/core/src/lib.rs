//! Sequential pattern mining over itemset sequences.
//!
//! Two miners produce the same complete pattern set: [`prefixspan::mine`]
//! grows prefixes over pseudo-projected databases, [`spam::mine_spam`]
//! walks vertical bitmaps. [`rules`] turns patterns into frequency /
//! support / confidence rows, and [`checkin`] builds sequence databases
//! from location check-ins.

pub mod bench;
pub mod checkin;
pub mod dataset;
pub mod error;
pub mod pattern;
pub mod prefixspan;
pub mod rules;
pub mod sequence;
pub mod spam;

pub use error::{MineError, RuleError, SequenceError};
pub use pattern::{MinSupport, MinerConfig, Pattern, PatternSet};
pub use prefixspan::mine;
pub use sequence::{
    canonicalize, contains_subsequence, is_prefix, suffix, Dictionary, Element, Item, ItemId,
    Notation, Sequence, SequenceDatabase, Suffix,
};
pub use spam::mine_spam;
