//! Collections of pairwise-disjoint Golomb rulers and their shift
//! transformations.
//!
//! A `DgrSet` is the witness object for an (I,J,n)-DGR: I disjoint J-mark
//! Golomb rulers with all marks in {1..n}. Shifting every mark by b (legal
//! while marks stay in range) preserves both the Golomb property and
//! disjointness; the families of all legal shifts are the raw material of the
//! seeded upper-bound search.

use std::collections::HashSet;

use itertools::Itertools;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::bitset::BitSet;
use crate::ruler::{Ruler, ShiftError};

/// Violation detected when validating a prospective DGR.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum DgrViolation {
    #[error("collection has no rulers")]
    Empty,
    #[error("ruler {index} has {found} marks, expected {expected}")]
    MixedArity {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("mark {mark} appears in rulers {first} and {second}")]
    SharedMark {
        mark: u32,
        first: usize,
        second: usize,
    },
    #[error("mark {mark} in ruler {index} exceeds the bound {bound}")]
    MarkAboveBound { mark: u32, index: usize, bound: u32 },
}

/// Checks the DGR invariants for `rulers` within {1..bound}: non-empty,
/// uniform arity, pairwise disjoint, all marks <= bound. Rulers are Golomb by
/// construction of [`Ruler`]. Reports the first violation found.
pub fn validate_dgr(rulers: &[Ruler], bound: u32) -> Result<(), DgrViolation> {
    if rulers.is_empty() {
        return Err(DgrViolation::Empty);
    }
    let arity = rulers[0].arity();
    for (index, r) in rulers.iter().enumerate() {
        if r.arity() != arity {
            return Err(DgrViolation::MixedArity {
                index,
                expected: arity,
                found: r.arity(),
            });
        }
        if r.max_mark() > bound {
            return Err(DgrViolation::MarkAboveBound {
                mark: r.max_mark(),
                index,
                bound,
            });
        }
    }
    let mut owner: Vec<Option<usize>> = vec![None; bound as usize + 1];
    for (index, r) in rulers.iter().enumerate() {
        for &m in r.marks() {
            if let Some(first) = owner[m as usize] {
                return Err(DgrViolation::SharedMark {
                    mark: m,
                    first,
                    second: index,
                });
            }
            owner[m as usize] = Some(index);
        }
    }
    Ok(())
}

/// An (I,J,n)-DGR: I pairwise-disjoint J-mark Golomb rulers within {1..n}.
/// Immutable after construction; ruler order is preserved as given (see
/// [`DgrSet::canonical`] for the normalized layout).
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct DgrSet {
    rulers: Vec<Ruler>,
    bound: u32,
}

impl DgrSet {
    pub fn new(rulers: Vec<Ruler>, bound: u32) -> Result<Self, DgrViolation> {
        validate_dgr(&rulers, bound)?;
        Ok(DgrSet { rulers, bound })
    }

    /// Re-checks the invariants of an existing set (defense for data that
    /// crossed a serialization boundary).
    pub fn validate(&self) -> Result<(), DgrViolation> {
        validate_dgr(&self.rulers, self.bound)
    }

    pub fn rulers(&self) -> &[Ruler] {
        &self.rulers
    }

    /// Number of rulers (the I parameter).
    pub fn group_count(&self) -> usize {
        self.rulers.len()
    }

    /// Marks per ruler (the J parameter).
    pub fn arity(&self) -> usize {
        self.rulers[0].arity()
    }

    /// The declared n: all marks lie in {1..bound}.
    pub fn bound(&self) -> u32 {
        self.bound
    }

    /// Least mark over all rulers.
    pub fn sigma(&self) -> u32 {
        self.rulers.iter().map(Ruler::min_mark).min().unwrap()
    }

    /// Greatest mark over all rulers.
    pub fn lambda_max(&self) -> u32 {
        self.rulers.iter().map(Ruler::max_mark).max().unwrap()
    }

    /// True when the set tiles {1..I*J} exactly (n = I*J). Validity plus
    /// bound = I*J forces full coverage by counting.
    pub fn is_regular(&self) -> bool {
        self.bound as usize == self.group_count() * self.arity()
    }

    /// Every mark of every ruler moved by `b`; the bound moves with them.
    /// Legal while sigma + b >= 1.
    pub fn shifted(&self, b: i64) -> Result<DgrSet, ShiftError> {
        let rulers = self
            .rulers
            .iter()
            .map(|r| r.shifted(b))
            .collect::<Result<Vec<_>, _>>()?;
        let bound = (self.bound as i64 + b) as u32;
        Ok(DgrSet { rulers, bound })
    }

    /// Same marks under a different declared bound `m` (must cover them).
    pub fn with_bound(&self, m: u32) -> Result<DgrSet, DgrViolation> {
        if m < self.lambda_max() {
            return Err(DgrViolation::MarkAboveBound {
                mark: self.lambda_max(),
                index: 0,
                bound: m,
            });
        }
        Ok(DgrSet {
            rulers: self.rulers.clone(),
            bound: m,
        })
    }

    /// The sub-collection at the given ruler indices (still a valid DGR).
    pub fn subset(&self, indices: &[usize]) -> Result<DgrSet, DgrViolation> {
        if indices.is_empty() {
            return Err(DgrViolation::Empty);
        }
        let rulers: Vec<Ruler> = indices.iter().map(|&i| self.rulers[i].clone()).collect();
        Ok(DgrSet {
            rulers,
            bound: self.bound,
        })
    }

    /// Disjoint union of two collections of equal arity; the bound is the
    /// larger of the two.
    pub fn merged(a: &DgrSet, b: &DgrSet) -> Result<DgrSet, DgrViolation> {
        let mut rulers = a.rulers.clone();
        rulers.extend(b.rulers.iter().cloned());
        DgrSet::new(rulers, a.bound.max(b.bound))
    }

    /// Canonical layout: rulers sorted descending by minimum mark (the
    /// prevailing convention of the shipped fixtures). Stable for file
    /// output.
    pub fn canonical(&self) -> DgrSet {
        let mut rulers = self.rulers.clone();
        rulers.sort_by(|a, b| b.min_mark().cmp(&a.min_mark()));
        DgrSet {
            rulers,
            bound: self.bound,
        }
    }

    /// Order-insensitive identity: the sorted list of ascending mark vectors.
    /// Two `DgrSet`s describe the same family of mark sets iff their keys are
    /// equal.
    pub fn canonical_key(&self) -> Vec<Vec<u32>> {
        let mut key: Vec<Vec<u32>> = self.rulers.iter().map(|r| r.marks().to_vec()).collect();
        key.sort();
        key
    }

    /// All marks of all rulers, ascending.
    pub fn all_marks(&self) -> Vec<u32> {
        let mut marks: Vec<u32> = self
            .rulers
            .iter()
            .flat_map(|r| r.marks().iter().copied())
            .collect();
        marks.sort_unstable();
        marks
    }

    pub(crate) fn mark_bitset(&self) -> BitSet {
        let mut set = BitSet::new(self.lambda_max() as usize + 1);
        for r in &self.rulers {
            for &m in r.marks() {
                set.insert(m as usize);
            }
        }
        set
    }
}

impl Serialize for Ruler {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.marks().len()))?;
        for m in self.marks() {
            seq.serialize_element(m)?;
        }
        seq.end()
    }
}

impl std::fmt::Debug for DgrSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "DgrSet(I={} J={} n={}",
            self.group_count(),
            self.arity(),
            self.bound
        )?;
        for r in &self.rulers {
            write!(f, "; {r}")?;
        }
        write!(f, ")")
    }
}

/// Error constructing a [`TransformFamily`].
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum TransformError {
    #[error("bound {bound} is below the collection's maximum mark {lambda}")]
    BoundBelowMax { bound: u32, lambda: u32 },
}

/// The family of all legal shifts of a base DGR within {1..m}: offsets range
/// over 1-sigma ..= m-lambda, giving exactly m - lambda + sigma members.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransformFamily {
    base: DgrSet,
    bound: u32,
    lo: i64,
    hi: i64,
}

/// Builds the transformation family of `d` within {1..m}. Requires
/// m >= lambda(d) so the identity shift is included.
pub fn transformation_set(d: &DgrSet, m: u32) -> Result<TransformFamily, TransformError> {
    let lambda = d.lambda_max();
    if m < lambda {
        return Err(TransformError::BoundBelowMax { bound: m, lambda });
    }
    Ok(TransformFamily {
        base: d.clone(),
        bound: m,
        lo: 1 - d.sigma() as i64,
        hi: (m - lambda) as i64,
    })
}

impl TransformFamily {
    pub fn base(&self) -> &DgrSet {
        &self.base
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn offsets(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi
    }

    /// Family size m - lambda + sigma; always at least 1.
    pub fn len(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Materializes members in offset order (ascending).
    pub fn iter(&self) -> impl Iterator<Item = DgrSet> + '_ {
        (self.lo..=self.hi).map(move |b| {
            self.base
                .shifted(b)
                .expect("offset range keeps marks positive")
                .with_bound(self.bound)
                .expect("offset range keeps marks within bound")
        })
    }
}

/// Error from [`k_sub_transformation_set`].
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum KSubError {
    #[error("k = {k} is out of range 1..={max} for this pool")]
    KOutOfRange { k: usize, max: usize },
}

/// One streamed member of a k-sub transformation set: which pool member it
/// came from, which ruler indices were kept, and the shift applied.
#[derive(Clone, Debug)]
pub struct ShiftedSubset {
    pub pool_index: usize,
    pub ruler_indices: Vec<usize>,
    pub offset: i64,
    pub dgr: DgrSet,
}

/// Streams every legal shift of every k-subset of every DGR in `pool`,
/// within {1..m}, deduplicated so that identical mark-set collections are
/// yielded once. Deterministic order: pool order, then subsets in index-lex
/// order, then offsets by ascending magnitude (ties: negative first), so
/// near-original placements come first.
///
/// `k = 0` is rejected even though the empty set is formally a subset; only
/// 1 <= k <= I is meaningful here.
pub fn k_sub_transformation_set(
    pool: &[DgrSet],
    k: usize,
    m: u32,
) -> Result<KSubStream, KSubError> {
    KSubStream::new(pool, k, m, true)
}

/// [`k_sub_transformation_set`] without deduplication: yields one member per
/// (pool element, subset, offset) triple. The raw count is the sum over
/// subsets A of (m - lambda(A) + sigma(A)) clipped to legal offsets.
pub fn k_sub_transformation_set_raw(
    pool: &[DgrSet],
    k: usize,
    m: u32,
) -> Result<KSubStream, KSubError> {
    KSubStream::new(pool, k, m, false)
}

/// Iterator over [`ShiftedSubset`]s; see [`k_sub_transformation_set`].
pub struct KSubStream {
    pool: Vec<DgrSet>,
    k: usize,
    bound: u32,
    pool_index: usize,
    subsets: Box<dyn Iterator<Item = Vec<usize>> + Send>,
    current: Option<(Vec<usize>, DgrSet, Vec<i64>, usize)>,
    dedup: Option<HashSet<Vec<Vec<u32>>>>,
}

impl KSubStream {
    fn new(pool: &[DgrSet], k: usize, m: u32, dedup: bool) -> Result<Self, KSubError> {
        let max = pool.iter().map(DgrSet::group_count).min().unwrap_or(0);
        if k == 0 || k > max {
            return Err(KSubError::KOutOfRange { k, max });
        }
        Ok(KSubStream {
            pool: pool.to_vec(),
            k,
            bound: m,
            pool_index: 0,
            subsets: Box::new((0..pool[0].group_count()).combinations(k)),
            current: None,
            dedup: dedup.then(HashSet::new),
        })
    }
}

impl Iterator for KSubStream {
    type Item = ShiftedSubset;

    fn next(&mut self) -> Option<ShiftedSubset> {
        loop {
            if let Some((indices, base, offsets, pos)) = &mut self.current {
                if *pos < offsets.len() {
                    let b = offsets[*pos];
                    *pos += 1;
                    let dgr = base
                        .shifted(b)
                        .expect("offset range keeps marks positive")
                        .with_bound(self.bound)
                        .expect("offset range keeps marks within bound");
                    if let Some(seen) = &mut self.dedup {
                        if !seen.insert(dgr.canonical_key()) {
                            continue;
                        }
                    }
                    return Some(ShiftedSubset {
                        pool_index: self.pool_index,
                        ruler_indices: indices.clone(),
                        offset: b,
                        dgr,
                    });
                }
                self.current = None;
            }
            // Advance to the next subset, or the next pool member.
            match self.subsets.next() {
                Some(indices) => {
                    let base = self.pool[self.pool_index]
                        .subset(&indices)
                        .expect("combination indices are in range");
                    let lo = 1 - base.sigma() as i64;
                    let hi = self.bound as i64 - base.lambda_max() as i64;
                    let mut offsets: Vec<i64> = (lo..=hi).collect();
                    offsets.sort_by_key(|&b| (b.abs(), b));
                    self.current = Some((indices, base, offsets, 0));
                }
                None => {
                    self.pool_index += 1;
                    if self.pool_index >= self.pool.len() {
                        return None;
                    }
                    let count = self.pool[self.pool_index].group_count();
                    self.subsets = Box::new((0..count).combinations(self.k));
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ruler(marks: &[u32]) -> Ruler {
        Ruler::new(marks.to_vec()).unwrap()
    }

    /// The 6-ruler block heading the shipped trace data, bound 70.
    fn six_ten_seventy() -> DgrSet {
        let rows: [&[u32]; 6] = [
            &[12, 13, 18, 22, 35, 38, 46, 53, 65, 67],
            &[7, 9, 24, 31, 34, 50, 54, 62, 63, 68],
            &[5, 8, 19, 21, 41, 42, 47, 51, 59, 66],
            &[4, 6, 14, 20, 23, 43, 44, 48, 55, 70],
            &[3, 10, 15, 25, 28, 29, 52, 58, 60, 69],
            &[1, 2, 11, 16, 37, 39, 45, 57, 61, 64],
        ];
        DgrSet::new(rows.iter().map(|r| ruler(r)).collect(), 70).unwrap()
    }

    fn tiny_three_three() -> DgrSet {
        DgrSet::new(
            vec![ruler(&[1, 2, 4]), ruler(&[3, 7, 8]), ruler(&[5, 6, 9])],
            11,
        )
        .unwrap()
    }

    #[test]
    fn six_ruler_block_validates() {
        let d = six_ten_seventy();
        assert_eq!(d.group_count(), 6);
        assert_eq!(d.arity(), 10);
        assert_eq!(d.sigma(), 1);
        assert_eq!(d.lambda_max(), 70);
        assert!(!d.is_regular()); // 60 marks under bound 70
    }

    #[test]
    fn shared_mark_names_the_pair() {
        let err = validate_dgr(&[ruler(&[1, 2, 5]), ruler(&[5, 7, 8])], 10).unwrap_err();
        assert_eq!(
            err,
            DgrViolation::SharedMark {
                mark: 5,
                first: 0,
                second: 1
            }
        );
    }

    #[test]
    fn mixed_arity_rejected() {
        let err = validate_dgr(&[ruler(&[1, 2, 5]), ruler(&[3, 4])], 10).unwrap_err();
        assert_eq!(
            err,
            DgrViolation::MixedArity {
                index: 1,
                expected: 3,
                found: 2
            }
        );
    }

    #[test]
    fn mark_above_bound_rejected() {
        let err = validate_dgr(&[ruler(&[1, 2, 5])], 4).unwrap_err();
        assert_eq!(
            err,
            DgrViolation::MarkAboveBound {
                mark: 5,
                index: 0,
                bound: 4
            }
        );
        assert!(validate_dgr(&[], 4).is_err());
    }

    #[test]
    fn sigma_lambda_single_ruler() {
        let d = DgrSet::new(vec![ruler(&[5, 7, 12])], 12).unwrap();
        assert_eq!(d.sigma(), 5);
        assert_eq!(d.lambda_max(), 12);
    }

    #[test]
    fn shift_singleton_family_left_by_two() {
        let d = DgrSet::new(vec![ruler(&[12, 13, 18, 22, 35, 38, 46, 53, 65, 67])], 70).unwrap();
        let s = d.shifted(-2).unwrap();
        assert_eq!(
            s.rulers()[0].marks(),
            &[10, 11, 16, 20, 33, 36, 44, 51, 63, 65]
        );
        assert!(s.validate().is_ok());
    }

    #[test]
    fn shift_identity_and_sigma_lambda_translation() {
        let d = six_ten_seventy();
        assert_eq!(d.shifted(0).unwrap(), d);
        for b in [-0i64, 1, 3] {
            let s = d.shifted(b).unwrap();
            assert_eq!(s.sigma() as i64, d.sigma() as i64 + b);
            assert_eq!(s.lambda_max() as i64, d.lambda_max() as i64 + b);
            assert!(s.validate().is_ok());
        }
    }

    #[test]
    fn shifted_sub_collection_stays_valid_within_larger_bound() {
        // Shifting a valid sub-collection (here the last four rulers) keeps
        // validity within an enlarged bound.
        let d = six_ten_seventy();
        let sub = d.subset(&[2, 3, 4, 5]).unwrap();
        let moved = sub.shifted(11).unwrap().with_bound(110).unwrap();
        assert!(moved.validate().is_ok());
        assert_eq!(moved.bound(), 110);
    }

    #[test]
    fn transformation_set_count() {
        let d = six_ten_seventy(); // sigma 1, lambda 70
        let fam = transformation_set(&d, 74).unwrap();
        assert_eq!(fam.len(), 5);
        assert_eq!(fam.offsets(), 0..=4);
        assert_eq!(fam.iter().count(), 5);
        for member in fam.iter() {
            assert!(member.validate().is_ok());
            assert_eq!(member.bound(), 74);
        }
    }

    #[test]
    fn transformation_set_degenerate_and_error() {
        let d = six_ten_seventy();
        let fam = transformation_set(&d, 70).unwrap();
        assert_eq!(fam.len(), 1);
        assert_eq!(transformation_set(&d, 70).unwrap().offsets(), 0..=0);
        assert_eq!(
            transformation_set(&d, 69),
            Err(TransformError::BoundBelowMax {
                bound: 69,
                lambda: 70
            })
        );
    }

    #[test]
    fn transformation_set_cardinality_law_small_cases() {
        let d = tiny_three_three(); // sigma 1, lambda 9
        for m in 9..=20u32 {
            let fam = transformation_set(&d, m).unwrap();
            assert_eq!(fam.len() as u32, m - d.lambda_max() + d.sigma());
            assert_eq!(fam.iter().count(), fam.len());
        }
    }

    /// Direct summation oracle for the raw stream size: for each k-subset A,
    /// the number of legal offsets is (m - lambda(A)) - (1 - sigma(A)) + 1.
    fn raw_count_oracle(pool: &[DgrSet], k: usize, m: u32) -> usize {
        use itertools::Itertools;
        let mut total = 0usize;
        for d in pool {
            for indices in (0..d.group_count()).combinations(k) {
                let a = d.subset(&indices).unwrap();
                let lo = 1i64 - a.sigma() as i64;
                let hi = m as i64 - a.lambda_max() as i64;
                if hi >= lo {
                    total += (hi - lo + 1) as usize;
                }
            }
        }
        total
    }

    #[test]
    fn k_sub_raw_count_matches_summation_oracle() {
        let pool = [tiny_three_three()];
        for k in 1..=3usize {
            for m in [9u32, 11, 14] {
                let got = k_sub_transformation_set_raw(&pool, k, m).unwrap().count();
                assert_eq!(got, raw_count_oracle(&pool, k, m), "k={k} m={m}");
            }
        }
        // Hand-checked instance: k=2, m=11 gives 4 + 3 + 5 = 12.
        assert_eq!(
            k_sub_transformation_set_raw(&pool, 2, 11).unwrap().count(),
            12
        );
    }

    #[test]
    fn k_sub_members_validate_at_bound() {
        let pool = [tiny_three_three()];
        for item in k_sub_transformation_set(&pool, 2, 12).unwrap() {
            assert!(item.dgr.validate().is_ok());
            assert_eq!(item.dgr.bound(), 12);
            assert_eq!(item.dgr.group_count(), 2);
        }
    }

    #[test]
    fn k_sub_whole_set_equals_transformation_set() {
        let d = tiny_three_three();
        let via_ksub: std::collections::HashSet<Vec<Vec<u32>>> =
            k_sub_transformation_set(&[d.clone()], 3, 13)
                .unwrap()
                .map(|s| s.dgr.canonical_key())
                .collect();
        let via_family: std::collections::HashSet<Vec<Vec<u32>>> = transformation_set(&d, 13)
            .unwrap()
            .iter()
            .map(|s| s.canonical_key())
            .collect();
        assert_eq!(via_ksub, via_family);
    }

    #[test]
    fn k_sub_deduplicates_identical_pool_members() {
        let d = tiny_three_three();
        let once = k_sub_transformation_set(&[d.clone()], 2, 11).unwrap().count();
        let twice = k_sub_transformation_set(&[d.clone(), d.clone()], 2, 11)
            .unwrap()
            .count();
        assert_eq!(once, twice);
        let raw_twice = k_sub_transformation_set_raw(&[d.clone(), d], 2, 11)
            .unwrap()
            .count();
        assert_eq!(raw_twice, 2 * once);
    }

    #[test]
    fn k_sub_rejects_out_of_range_k() {
        let pool = [tiny_three_three()];
        assert!(matches!(
            k_sub_transformation_set(&pool, 0, 11),
            Err(KSubError::KOutOfRange { k: 0, max: 3 })
        ));
        assert!(matches!(
            k_sub_transformation_set(&pool, 4, 11),
            Err(KSubError::KOutOfRange { k: 4, max: 3 })
        ));
    }

    #[test]
    fn k_sub_orders_offsets_by_magnitude() {
        let d = DgrSet::new(vec![ruler(&[3, 4, 6])], 9).unwrap();
        let offsets: Vec<i64> = k_sub_transformation_set(&[d], 1, 9)
            .unwrap()
            .map(|s| s.offset)
            .collect();
        assert_eq!(offsets, vec![0, -1, 1, -2, 2, 3]);
    }

    #[test]
    fn k_sub_is_deterministic() {
        let pool = [six_ten_seventy()];
        let a: Vec<(usize, Vec<usize>, i64)> = k_sub_transformation_set(&pool, 2, 74)
            .unwrap()
            .map(|s| (s.pool_index, s.ruler_indices, s.offset))
            .collect();
        let b: Vec<(usize, Vec<usize>, i64)> = k_sub_transformation_set(&pool, 2, 74)
            .unwrap()
            .map(|s| (s.pool_index, s.ruler_indices, s.offset))
            .collect();
        assert_eq!(a, b);
    }

    #[test]
    fn canonical_sorts_descending_by_min_mark() {
        let d = tiny_three_three().canonical();
        let mins: Vec<u32> = d.rulers().iter().map(Ruler::min_mark).collect();
        assert_eq!(mins, vec![5, 3, 1]);
        assert_eq!(d.canonical_key(), tiny_three_three().canonical_key());
    }

    #[test]
    fn merged_union_and_overlap() {
        let a = DgrSet::new(vec![ruler(&[1, 2, 4])], 4).unwrap();
        let b = DgrSet::new(vec![ruler(&[5, 6, 8])], 8).unwrap();
        let u = DgrSet::merged(&a, &b).unwrap();
        assert_eq!(u.group_count(), 2);
        assert_eq!(u.bound(), 8);
        assert!(matches!(
            DgrSet::merged(&u, &a),
            Err(DgrViolation::SharedMark { mark: 1, .. })
        ));
    }

    #[test]
    fn regular_detection() {
        let d = DgrSet::new(vec![ruler(&[1, 2]), ruler(&[3, 4])], 4).unwrap();
        assert!(d.is_regular());
        assert!(!d.with_bound(5).unwrap().is_regular());
    }

    #[test]
    fn with_bound_must_cover_marks() {
        let d = tiny_three_three();
        assert!(d.with_bound(9).is_ok());
        assert!(d.with_bound(8).is_err());
    }

    #[test]
    fn all_marks_sorted() {
        assert_eq!(
            tiny_three_three().all_marks(),
            vec![1, 2, 3, 4, 5, 6, 7, 8, 9]
        );
    }
}
