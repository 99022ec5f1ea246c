//! Single Golomb rulers: representation, validation, elementary
//! transformations, and lexicographic enumeration.
//!
//! Marks are 1-based positive integers throughout. Classical treatments often
//! use 0-based marks; a 0-based ruler is the same object shifted by one, and
//! all properties used here are translation-invariant.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::bitset::BitSet;
use crate::known;

/// Errors about a raw mark multiset, before any Golomb consideration.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum MarkError {
    #[error("mark set is empty")]
    Empty,
    #[error("mark {0} is not a positive integer")]
    NonPositive(i64),
    #[error("mark {0} appears more than once")]
    Duplicate(i64),
}

/// Errors constructing a [`Ruler`].
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum RulerError {
    #[error(transparent)]
    Marks(#[from] MarkError),
    #[error("difference {0} occurs between more than one pair of marks")]
    RepeatedDifference(u32),
}

/// Error from [`Ruler::shifted`] / shifting a DGR.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ShiftError {
    #[error("shifting mark {mark} by {shift} leaves the positive range")]
    OutOfRange { mark: u32, shift: i64 },
}

/// Error from [`Ruler::mirrored`].
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum MirrorError {
    #[error("mark {max} exceeds the mirror bound {bound}")]
    BoundBelowMax { max: u32, bound: u32 },
}

/// Tests whether the given marks form a Golomb ruler: distinct positive
/// integers whose positive pairwise differences are all distinct.
///
/// Marks may be given in any order. Empty input, non-positive marks and
/// duplicate marks are input errors, distinct from a `false` answer.
/// Rulers with fewer than three marks are Golomb vacuously.
pub fn is_golomb<T: Into<i64> + Copy>(marks: &[T]) -> Result<bool, MarkError> {
    let mut sorted: Vec<i64> = marks.iter().map(|&m| m.into()).collect();
    if sorted.is_empty() {
        return Err(MarkError::Empty);
    }
    if let Some(&bad) = sorted.iter().find(|&&m| m < 1) {
        return Err(MarkError::NonPositive(bad));
    }
    sorted.sort_unstable();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(MarkError::Duplicate(w[0]));
    }
    let mut seen = std::collections::HashSet::new();
    for i in 0..sorted.len() {
        for j in i + 1..sorted.len() {
            if !seen.insert(sorted[j] - sorted[i]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A Golomb ruler: strictly increasing positive marks with all pairwise
/// differences distinct. Immutable after construction.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ruler {
    marks: Vec<u32>,
}

impl Ruler {
    /// Builds a ruler from marks in any order, validating all invariants.
    pub fn new(marks: impl Into<Vec<u32>>) -> Result<Self, RulerError> {
        let mut marks = marks.into();
        if marks.is_empty() {
            return Err(MarkError::Empty.into());
        }
        if let Some(&bad) = marks.iter().find(|&&m| m < 1) {
            return Err(MarkError::NonPositive(bad as i64).into());
        }
        marks.sort_unstable();
        if let Some(w) = marks.windows(2).find(|w| w[0] == w[1]) {
            return Err(MarkError::Duplicate(w[0] as i64).into());
        }
        let mut seen = std::collections::HashSet::new();
        for i in 0..marks.len() {
            for j in i + 1..marks.len() {
                let d = marks[j] - marks[i];
                if !seen.insert(d) {
                    return Err(RulerError::RepeatedDifference(d));
                }
            }
        }
        Ok(Ruler { marks })
    }

    /// Wraps marks already known to be sorted, positive and Golomb.
    /// Hot-path constructor for enumeration and search.
    pub(crate) fn from_sorted_unchecked(marks: Vec<u32>) -> Self {
        debug_assert!(Ruler::new(marks.clone()).is_ok());
        Ruler { marks }
    }

    pub fn marks(&self) -> &[u32] {
        &self.marks
    }

    /// Number of marks (the arity J).
    pub fn arity(&self) -> usize {
        self.marks.len()
    }

    pub fn min_mark(&self) -> u32 {
        self.marks[0]
    }

    pub fn max_mark(&self) -> u32 {
        *self.marks.last().unwrap()
    }

    /// max(marks) - min(marks).
    pub fn length(&self) -> u32 {
        self.max_mark() - self.min_mark()
    }

    /// The set of positive pairwise differences, ascending. Has exactly
    /// J(J-1)/2 elements (differences are distinct by the type invariant).
    pub fn differences(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.marks.len() * (self.marks.len() - 1) / 2);
        for i in 0..self.marks.len() {
            for j in i + 1..self.marks.len() {
                out.push(self.marks[j] - self.marks[i]);
            }
        }
        out.sort_unstable();
        out
    }

    /// Every mark moved by `b`. The Golomb property is translation-invariant;
    /// the result must stay within positive u32 range.
    pub fn shifted(&self, b: i64) -> Result<Ruler, ShiftError> {
        let marks = self
            .marks
            .iter()
            .map(|&m| {
                let v = m as i64 + b;
                if v < 1 || v > u32::MAX as i64 {
                    Err(ShiftError::OutOfRange { mark: m, shift: b })
                } else {
                    Ok(v as u32)
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Ruler::from_sorted_unchecked(marks))
    }

    /// Reflection a -> n+1-a within {1..n}; preserves the Golomb property.
    pub fn mirrored(&self, n: u32) -> Result<Ruler, MirrorError> {
        if self.max_mark() > n {
            return Err(MirrorError::BoundBelowMax {
                max: self.max_mark(),
                bound: n,
            });
        }
        let mut marks: Vec<u32> = self.marks.iter().rev().map(|&m| n + 1 - m).collect();
        debug_assert!(marks.windows(2).all(|w| w[0] < w[1]));
        marks.shrink_to_fit();
        Ok(Ruler::from_sorted_unchecked(marks))
    }

    /// True if the two rulers share any mark. Linear merge over sorted marks.
    pub fn intersects(&self, other: &Ruler) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.marks.len() && j < other.marks.len() {
            match self.marks[i].cmp(&other.marks[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    }
}

impl fmt::Display for Ruler {
    /// Comma-separated ascending marks, e.g. `1,2,5`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for m in &self.marks {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{m}")?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for Ruler {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ruler({self})")
    }
}

impl FromStr for Ruler {
    type Err = String;

    /// Parses comma- and/or whitespace-separated marks.
    fn from_str(s: &str) -> Result<Self, String> {
        let marks = s
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<u32>().map_err(|e| format!("bad mark {t:?}: {e}")))
            .collect::<Result<Vec<_>, _>>()?;
        Ruler::new(marks).map_err(|e| e.to_string())
    }
}

/// The ambient set of allowed marks: either {1..n} or an arbitrary sorted set
/// of distinct positive integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkUniverse {
    elems: Vec<u32>,
}

impl MarkUniverse {
    /// The contiguous universe {1..n}. `n = 0` gives the empty universe.
    pub fn range(n: u32) -> Self {
        MarkUniverse {
            elems: (1..=n).collect(),
        }
    }

    /// An arbitrary universe; marks may be given in any order but must be
    /// distinct and positive.
    pub fn new(elems: impl Into<Vec<u32>>) -> Result<Self, MarkError> {
        let mut elems = elems.into();
        if let Some(&bad) = elems.iter().find(|&&m| m < 1) {
            return Err(MarkError::NonPositive(bad as i64));
        }
        elems.sort_unstable();
        if let Some(w) = elems.windows(2).find(|w| w[0] == w[1]) {
            return Err(MarkError::Duplicate(w[0] as i64));
        }
        Ok(MarkUniverse { elems })
    }

    pub fn elements(&self) -> &[u32] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn max(&self) -> Option<u32> {
        self.elems.last().copied()
    }

    pub fn contains(&self, mark: u32) -> bool {
        self.elems.binary_search(&mark).is_ok()
    }

    /// Set difference: this universe minus the given marks (any order).
    pub fn without(&self, excluded: &[u32]) -> MarkUniverse {
        if excluded.is_empty() {
            return self.clone();
        }
        let mut ex: Vec<u32> = excluded.to_vec();
        ex.sort_unstable();
        MarkUniverse {
            elems: self
                .elems
                .iter()
                .copied()
                .filter(|m| ex.binary_search(m).is_err())
                .collect(),
        }
    }

    /// `Some(n)` iff the universe is exactly {1..n} (empty gives `Some(0)`).
    pub fn as_range(&self) -> Option<u32> {
        let n = self.elems.len() as u32;
        if n == 0 {
            return Some(0);
        }
        // Sorted and distinct, so endpoints pin the whole range.
        if self.elems[0] == 1 && self.elems[n as usize - 1] == n {
            Some(n)
        } else {
            None
        }
    }
}

/// Streams every `arity`-mark Golomb ruler with marks in `universe` minus
/// `excluded`, each exactly once, in lexicographic order of the ascending
/// mark vector. Deterministic; prunes on the first repeated difference and
/// on spans that cannot reach the minimum possible ruler length.
pub fn enumerate_rulers(arity: usize, universe: &MarkUniverse, excluded: &[u32]) -> RulerStream {
    RulerStream::new(arity, universe.without(excluded).elems)
}

/// Iterator produced by [`enumerate_rulers`]. Single-consumer; independent
/// streams may run in parallel.
pub struct RulerStream {
    elems: Vec<u32>,
    arity: usize,
    /// DFS stack of chosen indices into `elems`.
    stack: Vec<usize>,
    /// Differences among chosen marks; dense for O(1) repeat detection.
    diffs: BitSet,
    cursor: usize,
    done: bool,
}

enum Fit {
    Ok,
    Conflict,
    /// Candidate (and every later one at this depth) cannot reach a full
    /// ruler within the universe; triggers backtracking.
    SpanDead,
}

impl RulerStream {
    fn new(arity: usize, elems: Vec<u32>) -> Self {
        let max = elems.last().copied().unwrap_or(0) as usize;
        let done = arity == 0 || elems.len() < arity;
        RulerStream {
            elems,
            arity,
            stack: Vec::with_capacity(arity),
            diffs: BitSet::new(max + 1),
            cursor: 0,
            done,
        }
    }

    fn fit(&self, idx: usize) -> Fit {
        let c = self.elems[idx];
        // Marks from c onward form an (arity - depth)-mark Golomb ruler, so
        // some mark >= c + G(arity - depth) must exist in the universe.
        let tail = self.arity - self.stack.len();
        if c + known::min_length(tail) > *self.elems.last().unwrap() {
            return Fit::SpanDead;
        }
        for &j in &self.stack {
            if self.diffs.contains((c - self.elems[j]) as usize) {
                return Fit::Conflict;
            }
        }
        Fit::Ok
    }

    fn record(&mut self, idx: usize) {
        let c = self.elems[idx];
        for &j in &self.stack {
            self.diffs.insert((c - self.elems[j]) as usize);
        }
        self.stack.push(idx);
    }

    fn unrecord(&mut self) -> usize {
        let idx = self.stack.pop().unwrap();
        let c = self.elems[idx];
        for &j in &self.stack {
            self.diffs.remove((c - self.elems[j]) as usize);
        }
        idx
    }
}

impl Iterator for RulerStream {
    type Item = Ruler;

    fn next(&mut self) -> Option<Ruler> {
        if self.done {
            return None;
        }
        loop {
            let exhausted_here = self.cursor >= self.elems.len()
                || self.elems.len() - self.cursor < self.arity - self.stack.len();
            if exhausted_here {
                if self.stack.is_empty() {
                    self.done = true;
                    return None;
                }
                let idx = self.unrecord();
                self.cursor = idx + 1;
                continue;
            }
            match self.fit(self.cursor) {
                Fit::SpanDead => {
                    // All later candidates at this depth are larger; force
                    // the backtracking branch above.
                    self.cursor = self.elems.len();
                }
                Fit::Conflict => {
                    self.cursor += 1;
                }
                Fit::Ok => {
                    self.record(self.cursor);
                    self.cursor += 1;
                    if self.stack.len() == self.arity {
                        let marks: Vec<u32> =
                            self.stack.iter().map(|&i| self.elems[i]).collect();
                        let ruler = Ruler::from_sorted_unchecked(marks);
                        let idx = self.unrecord();
                        self.cursor = idx + 1;
                        return Some(ruler);
                    }
                }
            }
        }
    }
}
