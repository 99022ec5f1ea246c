//! Seed-driven upper-bound search.
//!
//! Direct exhaustive search for (I,J,n) packings stops scaling long before
//! the interesting shapes run out. This module implements the alternative:
//! take a pool of known (I,J,n) packings, carry k of their rulers (as a
//! shifted sub-packing) into a larger universe {1..m}, and complete the
//! remaining I+1−k rulers by exact search over the leftover marks. A hit is
//! an (I+1,J,m) packing, i.e. a certified upper bound H(I+1,J) ≤ m.
//!
//! [`bound_descent`] wraps this in the bisection-flavored loop that turns
//! one seed pool into the best reachable bound: start at the midpoint of the
//! candidate interval, walk down while extensions keep appearing, walk up
//! when the midpoint fails. The exactness flag on the result is deliberately
//! conservative: an upper bound m is promoted to "exact" only when m equals
//! an independently certified lower bound — the pigeonhole floor (I+1)·J, a
//! registry lower bound, or one more than a registry-exact H(I,J) (strict
//! growth in I holds because dropping the ruler that carries the largest
//! used mark leaves I rulers strictly below it). A failed search never
//! proves absence here: candidates are only extensions of the given pool.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::dgr::{k_sub_transformation_set, DgrSet, ShiftedSubset};
use crate::exact::{enumerate_dgrs, search_disjoint, SearchConfig, SearchOutcome};
use crate::registry::{BoundsRegistry, HStatus};
use crate::ruler::MarkUniverse;

/// A pool of same-shape packings used as extension seeds.
#[derive(Clone, Debug)]
pub struct SeedPool {
    dgrs: Vec<DgrSet>,
    groups: u32,
    arity: u32,
    bound: u32,
    note: String,
}

/// Errors constructing a [`SeedPool`].
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum SeedPoolError {
    #[error("seed pool is empty")]
    Empty,
    #[error(
        "seed {index} has shape ({groups},{arity},{bound}); \
         the pool is ({expected_groups},{expected_arity},{expected_bound})"
    )]
    ShapeMismatch {
        index: usize,
        groups: u32,
        arity: u32,
        bound: u32,
        expected_groups: u32,
        expected_arity: u32,
        expected_bound: u32,
    },
}

impl SeedPool {
    /// Wraps already-validated packings, enforcing a uniform (I,J,n) shape.
    pub fn new(dgrs: Vec<DgrSet>, note: impl Into<String>) -> Result<SeedPool, SeedPoolError> {
        let first = dgrs.first().ok_or(SeedPoolError::Empty)?;
        let (groups, arity, bound) = (
            first.group_count() as u32,
            first.arity() as u32,
            first.bound(),
        );
        for (index, d) in dgrs.iter().enumerate() {
            if (d.group_count() as u32, d.arity() as u32, d.bound()) != (groups, arity, bound) {
                return Err(SeedPoolError::ShapeMismatch {
                    index,
                    groups: d.group_count() as u32,
                    arity: d.arity() as u32,
                    bound: d.bound(),
                    expected_groups: groups,
                    expected_arity: arity,
                    expected_bound: bound,
                });
            }
        }
        Ok(SeedPool {
            dgrs,
            groups,
            arity,
            bound,
            note: note.into(),
        })
    }

    /// Builds a pool by enumerating packings of the given shape directly —
    /// the usual way to seed the method from a freshly computed exact value.
    /// `cap` bounds the pool size; the enumeration is deterministic, so the
    /// pool is too.
    pub fn from_exact_search(
        groups: u32,
        arity: u32,
        bound: u32,
        cap: usize,
        config: &SearchConfig,
        note: impl Into<String>,
    ) -> Result<SeedPool, SeedPoolError> {
        let universe = MarkUniverse::range(bound);
        let (witnesses, _complete) = enumerate_dgrs(&universe, groups, arity, cap, config)
            .expect("fresh enumeration carries no frontier to mismatch");
        SeedPool::new(witnesses, note)
    }

    pub fn members(&self) -> &[DgrSet] {
        &self.dgrs
    }

    pub fn len(&self) -> usize {
        self.dgrs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dgrs.is_empty()
    }

    /// I of the pool's (I,J,n) shape.
    pub fn groups(&self) -> u32 {
        self.groups
    }

    /// J of the pool's (I,J,n) shape.
    pub fn arity(&self) -> u32 {
        self.arity
    }

    /// n of the pool's (I,J,n) shape.
    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn note(&self) -> &str {
        &self.note
    }
}

/// Budgets for one extension attempt.
#[derive(Clone, Debug)]
pub struct SeededConfig {
    /// Node budget for each candidate's completion search. Searches that hit
    /// it count as undecided, which downgrades a miss to budget-exhausted.
    pub nodes_per_candidate: u64,
    /// Cap on candidates drawn from the stream; `None` drains it.
    pub candidate_cap: Option<u64>,
    /// Wall-clock ceiling for the whole attempt, checked between chunks.
    pub time_budget: Option<Duration>,
    /// Candidates completed in parallel per chunk. Chunks are resolved in
    /// stream order, so the first witness is deterministic regardless of
    /// thread count.
    pub chunk_size: usize,
}

impl Default for SeededConfig {
    fn default() -> Self {
        SeededConfig {
            nodes_per_candidate: 2_000_000,
            candidate_cap: None,
            time_budget: None,
            chunk_size: 128,
        }
    }
}

/// Which carried sub-packing produced a witness: pool member, ruler indices
/// within it, and the shift applied — enough to replay the construction.
#[derive(Clone, Debug, Serialize)]
pub struct CarriedSubset {
    pub pool_index: usize,
    pub ruler_indices: Vec<usize>,
    pub offset: i64,
}

/// Accounting for one (k, m) attempt.
#[derive(Clone, Debug, Serialize)]
pub struct ExtendTrace {
    pub k: u32,
    pub m: u32,
    /// Candidates whose completion search ran.
    pub candidates: u64,
    /// Completions that hit their node budget (undecided).
    pub undecided: u64,
    /// Set when the attempt produced a witness.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub carried: Option<CarriedSubset>,
}

/// Result of [`seeded_extend`].
#[derive(Clone, Debug)]
pub enum ExtendOutcome {
    /// An (I+1,J,m) packing, plus how it was assembled.
    Witness { dgr: DgrSet, trace: ExtendTrace },
    /// The candidate stream was drained and every completion search ran to
    /// proven absence: this pool cannot be extended this way at this m.
    /// Says nothing about packings unreachable from the pool.
    NotFound { trace: ExtendTrace },
    /// A budget tripped (nodes, candidate cap, or wall clock) before the
    /// stream was exhausted — undecided.
    BudgetExhausted { trace: ExtendTrace },
}

impl ExtendOutcome {
    pub fn trace(&self) -> &ExtendTrace {
        match self {
            ExtendOutcome::Witness { trace, .. }
            | ExtendOutcome::NotFound { trace }
            | ExtendOutcome::BudgetExhausted { trace } => trace,
        }
    }

    pub fn witness(&self) -> Option<&DgrSet> {
        match self {
            ExtendOutcome::Witness { dgr, .. } => Some(dgr),
            _ => None,
        }
    }

    fn label(&self) -> &'static str {
        match self {
            ExtendOutcome::Witness { .. } => "witness",
            ExtendOutcome::NotFound { .. } => "not-found",
            ExtendOutcome::BudgetExhausted { .. } => "budget-exhausted",
        }
    }
}

/// Precondition violations for [`seeded_extend`] and [`bound_descent`].
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ExtendError {
    /// k must satisfy 1 ≤ k ≤ I−1: at least one ruler is carried and at
    /// least one is searched for.
    #[error("k = {k} must lie in 1..={max} for a pool of {groups} groups")]
    KOutOfRange { k: u32, max: u32, groups: u32 },
    /// The target universe cannot hold (I+1)·J distinct marks.
    #[error("m = {m} is below the pigeonhole floor {floor} for {groups} groups of {arity} marks")]
    BoundTooSmall {
        m: u32,
        floor: u32,
        groups: u32,
        arity: u32,
    },
}

enum Completion {
    Extended(DgrSet),
    Absent,
    Undecided,
}

fn complete_candidate(
    subset: &ShiftedSubset,
    m: u32,
    residual_groups: u32,
    arity: u32,
    nodes: u64,
) -> Completion {
    let carried_marks = subset.dgr.all_marks();
    let residual = MarkUniverse::range(m).without(&carried_marks);
    if residual.len() < (residual_groups * arity) as usize {
        return Completion::Absent;
    }
    let config = SearchConfig::with_node_budget(nodes);
    match search_disjoint(&residual, residual_groups, arity, &config) {
        Ok(SearchOutcome::Witness(rest)) => {
            let merged = DgrSet::merged(&subset.dgr, &rest)
                .expect("carried and residual marks are disjoint by construction");
            Completion::Extended(merged)
        }
        Ok(SearchOutcome::ProvenAbsent) => Completion::Absent,
        Ok(SearchOutcome::BudgetExhausted(_)) => Completion::Undecided,
        Err(_) => Completion::Undecided,
    }
}

/// Tries to extend the pool's (I,J,n) packings to an (I+1,J,m) packing by
/// carrying every legal shifted k-subset in turn and completing the other
/// I+1−k rulers by exact search over {1..m} minus the carried marks.
///
/// Candidates stream in a fixed order (pool order, subset index order, then
/// shifts by ascending magnitude, near-original placements first) and are
/// resolved chunk by chunk, so with a fixed configuration the first witness
/// — and therefore the returned packing — is the same on every run and any
/// thread count. A wall-clock budget can only truncate how far the stream
/// gets, never reorder it.
pub fn seeded_extend(
    pool: &SeedPool,
    k: u32,
    m: u32,
    config: &SeededConfig,
) -> Result<ExtendOutcome, ExtendError> {
    let target_groups = pool.groups() + 1;
    let floor = target_groups * pool.arity();
    if m < floor {
        return Err(ExtendError::BoundTooSmall {
            m,
            floor,
            groups: target_groups,
            arity: pool.arity(),
        });
    }
    if k == 0 || k + 1 > pool.groups() {
        return Err(ExtendError::KOutOfRange {
            k,
            max: pool.groups().saturating_sub(1),
            groups: pool.groups(),
        });
    }
    let residual_groups = target_groups - k;
    let mut stream = k_sub_transformation_set(pool.members(), k as usize, m)
        .expect("k range validated above");

    let deadline = config.time_budget.map(|d| Instant::now() + d);
    let mut candidates = 0u64;
    let mut undecided = 0u64;
    let mut truncated = false;

    loop {
        let mut budget_left = config
            .candidate_cap
            .map_or(usize::MAX, |cap| (cap - candidates) as usize);
        if budget_left == 0 {
            truncated = true;
            break;
        }
        if let Some(deadline) = deadline {
            if Instant::now() >= deadline {
                truncated = true;
                break;
            }
        }
        budget_left = budget_left.min(config.chunk_size.max(1));
        let chunk: Vec<ShiftedSubset> = stream.by_ref().take(budget_left).collect();
        if chunk.is_empty() {
            break;
        }
        candidates += chunk.len() as u64;
        let results: Vec<Completion> = chunk
            .par_iter()
            .map(|subset| {
                complete_candidate(
                    subset,
                    m,
                    residual_groups,
                    pool.arity(),
                    config.nodes_per_candidate,
                )
            })
            .collect();
        for (subset, result) in chunk.iter().zip(&results) {
            match result {
                Completion::Extended(dgr) => {
                    let dgr = dgr.with_bound(m).expect("witness fits inside {1..m}");
                    return Ok(ExtendOutcome::Witness {
                        dgr,
                        trace: ExtendTrace {
                            k,
                            m,
                            candidates,
                            undecided,
                            carried: Some(CarriedSubset {
                                pool_index: subset.pool_index,
                                ruler_indices: subset.ruler_indices.clone(),
                                offset: subset.offset,
                            }),
                        },
                    });
                }
                Completion::Absent => {}
                Completion::Undecided => undecided += 1,
            }
        }
    }

    let trace = ExtendTrace {
        k,
        m,
        candidates,
        undecided,
        carried: None,
    };
    if truncated || undecided > 0 {
        Ok(ExtendOutcome::BudgetExhausted { trace })
    } else {
        Ok(ExtendOutcome::NotFound { trace })
    }
}

/// One k level inside [`fallback_k_descent`] or [`bound_descent`].
#[derive(Clone, Debug, Serialize)]
pub struct KAttempt {
    pub k: u32,
    pub outcome: &'static str,
    pub candidates: u64,
    pub undecided: u64,
}

/// Tries `k = k_start, k_start−1, …, 1` until a witness appears, logging
/// every level. The overall outcome is the first witness, or not-found only
/// when every level ran to completion, or budget-exhausted when any level
/// was cut short.
pub fn fallback_k_descent(
    pool: &SeedPool,
    k_start: u32,
    m: u32,
    config: &SeededConfig,
) -> Result<(ExtendOutcome, Vec<KAttempt>), ExtendError> {
    if k_start == 0 || k_start + 1 > pool.groups() {
        return Err(ExtendError::KOutOfRange {
            k: k_start,
            max: pool.groups().saturating_sub(1),
            groups: pool.groups(),
        });
    }
    let mut attempts = Vec::new();
    let mut any_truncated = false;
    let mut last: Option<ExtendOutcome> = None;
    for k in (1..=k_start).rev() {
        let outcome = seeded_extend(pool, k, m, config)?;
        attempts.push(KAttempt {
            k,
            outcome: outcome.label(),
            candidates: outcome.trace().candidates,
            undecided: outcome.trace().undecided,
        });
        match &outcome {
            ExtendOutcome::Witness { .. } => return Ok((outcome, attempts)),
            ExtendOutcome::BudgetExhausted { .. } => any_truncated = true,
            ExtendOutcome::NotFound { .. } => {}
        }
        last = Some(outcome);
    }
    let mut outcome = last.expect("k_start >= 1 guarantees at least one attempt");
    if any_truncated {
        outcome = ExtendOutcome::BudgetExhausted {
            trace: outcome.trace().clone(),
        };
    }
    Ok((outcome, attempts))
}

/// How the starting k for each m level is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum KPolicy {
    /// Start at I−2 (clamped into 1..=I−1) and fall back toward 1. The
    /// default: high k carries most of a seed and completes fastest when it
    /// works; the fallback ladder covers the cases where it does not.
    Auto,
    /// A fixed k, no fallback ladder.
    Fixed(u32),
    /// Start at the given k and fall back toward 1.
    DescendingFrom(u32),
}

impl Default for KPolicy {
    fn default() -> Self {
        KPolicy::Auto
    }
}

impl KPolicy {
    fn start(&self, pool_groups: u32) -> u32 {
        let max = pool_groups.saturating_sub(1).max(1);
        match *self {
            KPolicy::Auto => pool_groups.saturating_sub(2).clamp(1, max),
            KPolicy::Fixed(k) | KPolicy::DescendingFrom(k) => k,
        }
    }

    fn ladder(&self) -> bool {
        !matches!(self, KPolicy::Fixed(_))
    }
}

/// Configuration for [`bound_descent`].
#[derive(Clone, Debug, Default)]
pub struct DescentConfig {
    /// Budgets applied to every (k, m) attempt.
    pub per_attempt: SeededConfig,
    /// Starting-k rule per m level.
    pub k_policy: KPolicy,
    /// Override for the first m tried; defaults to the floor midpoint of the
    /// candidate interval {a..n+J}, a = max(n+1, (I+1)·J).
    pub m0: Option<u32>,
}

/// Exactness of the bound a descent produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DescentStatus {
    /// The witness bound meets an independently certified lower bound.
    Exact,
    /// A witness exists; the true value may be lower.
    UpperBound,
    /// No extension was found at any m in the interval.
    NotFound,
}

/// One m level of a descent, in the order tried.
#[derive(Clone, Debug, Serialize)]
pub struct MAttempt {
    pub m: u32,
    pub outcome: &'static str,
    pub k_attempts: Vec<KAttempt>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub carried: Option<CarriedSubset>,
}

/// Result of [`bound_descent`]: the best reachable bound with its witness,
/// an exactness flag justified by `certified_lower`, and the full attempt
/// log (m tried, k used, carried shift — enough to reconstruct each find).
#[derive(Clone, Debug, Serialize)]
pub struct DescentReport {
    pub target_groups: u32,
    pub arity: u32,
    /// Descent floor a = max(n+1, (I+1)·J).
    pub floor: u32,
    /// First m attempted.
    pub m0: u32,
    /// Largest independently certified lower bound on H(target, arity).
    pub certified_lower: u32,
    /// Lowest m a witness was found for.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub best_m: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<DgrSet>,
    pub status: DescentStatus,
    pub attempts: Vec<MAttempt>,
    /// Observations worth surfacing (consistency flags, truncation).
    pub notes: Vec<String>,
}

/// Largest lower bound on H(groups, arity) that the registry certifies:
/// the pigeonhole floor, an explicit lower bound or upper-bound floor, or
/// strict growth above a registry-exact value one group down.
fn certified_lower_bound(registry: &BoundsRegistry, groups: u32, arity: u32) -> u32 {
    let mut lower = groups * arity;
    if let Some(entry) = registry.get(groups, arity) {
        match entry.status {
            HStatus::Exact | HStatus::LowerBound => lower = lower.max(entry.value),
            HStatus::UpperBound => {
                if let Some(floor) = entry.floor {
                    lower = lower.max(floor);
                }
            }
        }
    }
    if let Some(entry) = registry.get(groups - 1, arity) {
        if entry.status == HStatus::Exact {
            // H grows strictly with the group count: drop the ruler holding
            // the largest used mark and the rest fit strictly below it.
            lower = lower.max(entry.value + 1);
        }
    }
    lower
}

/// Drives seeded extension to the best reachable upper bound on H(I+1,J).
///
/// Starts at the floor midpoint of {a..n+J} (or `config.m0`), descends while
/// witnesses keep appearing, or ascends from the first failure: a witness at
/// m is also a witness at every larger m, so a miss never invalidates the
/// levels above it. The returned status is `Exact` only when the best m
/// equals [`certified_lower_bound`]'s answer — a heuristic miss below the
/// best m is never treated as an absence proof.
pub fn bound_descent(
    pool: &SeedPool,
    registry: &BoundsRegistry,
    config: &DescentConfig,
) -> Result<DescentReport, ExtendError> {
    let target_groups = pool.groups() + 1;
    let arity = pool.arity();
    let n = pool.bound();
    let floor = (n + 1).max(target_groups * arity);
    let top = n + arity;
    let m0 = config.m0.unwrap_or((floor + top) / 2).clamp(floor, top);
    let certified_lower = certified_lower_bound(registry, target_groups, arity);

    let mut attempts: Vec<MAttempt> = Vec::new();
    let mut notes: Vec<String> = Vec::new();
    let mut best: Option<(u32, DgrSet)> = None;

    let try_level = |m: u32, attempts: &mut Vec<MAttempt>| -> Result<Option<DgrSet>, ExtendError> {
        let start = config.k_policy.start(pool.groups());
        let (outcome, k_attempts) = if config.k_policy.ladder() {
            fallback_k_descent(pool, start, m, &config.per_attempt)?
        } else {
            let outcome = seeded_extend(pool, start, m, &config.per_attempt)?;
            let log = vec![KAttempt {
                k: start,
                outcome: outcome.label(),
                candidates: outcome.trace().candidates,
                undecided: outcome.trace().undecided,
            }];
            (outcome, log)
        };
        attempts.push(MAttempt {
            m,
            outcome: outcome.label(),
            k_attempts,
            carried: outcome.trace().carried.clone(),
        });
        Ok(match outcome {
            ExtendOutcome::Witness { dgr, .. } => Some(dgr),
            _ => None,
        })
    };

    // Phase 1: the first level decides the direction.
    let first = try_level(m0, &mut attempts)?;
    match first {
        Some(witness) => {
            best = Some((m0, witness));
            let stop = floor.max(certified_lower);
            let mut m = m0;
            while m > stop {
                m -= 1;
                match try_level(m, &mut attempts)? {
                    Some(witness) => best = Some((m, witness)),
                    None => break,
                }
            }
        }
        None => {
            // A witness at m also witnesses every m' > m, so the failed
            // midpoint says nothing about higher levels: ascend to the first
            // success and stop there.
            let mut m = m0;
            while m < top {
                m += 1;
                if let Some(witness) = try_level(m, &mut attempts)? {
                    best = Some((m, witness));
                    break;
                }
            }
        }
    }

    if attempts
        .iter()
        .any(|a| a.outcome == "budget-exhausted")
    {
        notes.push(
            "some levels were cut short by budget; failures there are not pool-exhaustive"
                .to_string(),
        );
    }

    let (best_m, witness) = match &best {
        Some((m, w)) => (Some(*m), Some(w.clone())),
        None => (None, None),
    };
    let status = match best_m {
        Some(m) if m == certified_lower => DescentStatus::Exact,
        Some(_) => DescentStatus::UpperBound,
        None => DescentStatus::NotFound,
    };

    // Consistency observation: computed bounds should stay within one ruler's
    // worth of the previous column. A violation is reportable evidence, not
    // an error.
    if let (Some(m), Some(prev)) = (best_m, registry.get(pool.groups(), arity)) {
        if matches!(prev.status, HStatus::Exact | HStatus::UpperBound) && m > prev.value + arity {
            notes.push(format!(
                "H({target_groups},{arity}) ≤ {m} exceeds H({},{arity}) + {arity} = {} — \
                 unexpected for a sound pool",
                pool.groups(),
                prev.value + arity
            ));
        }
    }

    Ok(DescentReport {
        target_groups,
        arity,
        floor,
        m0,
        certified_lower,
        best_m,
        witness,
        status,
        attempts,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::find_dgr_exact;
    use crate::ruler::Ruler;

    fn dgr(rulers: &[&[u32]], bound: u32) -> DgrSet {
        let rulers: Vec<Ruler> = rulers
            .iter()
            .map(|m| Ruler::new(m.to_vec()).expect("valid ruler"))
            .collect();
        DgrSet::new(rulers, bound).expect("valid packing")
    }

    fn exact_witness(groups: u32, arity: u32, n: u32) -> DgrSet {
        match find_dgr_exact(groups, arity, n, &SearchConfig::default()) {
            Ok(SearchOutcome::Witness(w)) => w,
            other => panic!("expected witness for ({groups},{arity},{n}), got {other:?}"),
        }
    }

    #[test]
    fn pool_requires_uniform_shape() {
        assert_eq!(
            SeedPool::new(vec![], "x").expect_err("empty pool"),
            SeedPoolError::Empty
        );
        let a = dgr(&[&[1, 2], &[3, 4]], 4);
        let b = dgr(&[&[1, 2], &[3, 4]], 5);
        let err = SeedPool::new(vec![a.clone(), b], "x").expect_err("bounds differ");
        assert!(matches!(err, SeedPoolError::ShapeMismatch { index: 1, .. }));
        let pool = SeedPool::new(vec![a], "pairs").expect("uniform");
        assert_eq!(
            (pool.groups(), pool.arity(), pool.bound(), pool.len()),
            (2, 2, 4, 1)
        );
    }

    #[test]
    fn pool_from_enumeration_is_deterministic() {
        let a = SeedPool::from_exact_search(2, 2, 4, 10, &SearchConfig::default(), "x")
            .expect("packings exist");
        let b = SeedPool::from_exact_search(2, 2, 4, 10, &SearchConfig::default(), "x")
            .expect("packings exist");
        assert_eq!(a.len(), 3, "three pair-partitions of {{1..4}}");
        for (x, y) in a.members().iter().zip(b.members()) {
            assert_eq!(x.canonical_key(), y.canonical_key());
        }
    }

    #[test]
    fn extends_a_pair_packing_by_one_group() {
        let pool = SeedPool::new(vec![dgr(&[&[1, 2], &[3, 4]], 4)], "pairs").expect("valid");
        let outcome =
            seeded_extend(&pool, 1, 6, &SeededConfig::default()).expect("preconditions hold");
        let ExtendOutcome::Witness { dgr: w, trace } = outcome else {
            panic!("expected witness, got {:?}", outcome.trace());
        };
        assert_eq!(w.group_count(), 3);
        assert_eq!(w.arity(), 2);
        assert_eq!(w.bound(), 6);
        w.validate().expect("witness validates");
        assert_eq!(trace.k, 1);
        assert!(trace.carried.is_some());
    }

    #[test]
    fn preconditions_are_enforced() {
        let pool = SeedPool::new(vec![dgr(&[&[1, 2], &[3, 4]], 4)], "pairs").expect("valid");
        // m below the pigeonhole floor for 3 groups of 2.
        assert_eq!(
            seeded_extend(&pool, 1, 5, &SeededConfig::default())
                .expect_err("floor violation"),
            ExtendError::BoundTooSmall {
                m: 5,
                floor: 6,
                groups: 3,
                arity: 2
            }
        );
        // k = I carries everything and searches for one more — outside the
        // supported 1..=I−1 window, as is k = 0.
        assert!(matches!(
            seeded_extend(&pool, 2, 6, &SeededConfig::default()),
            Err(ExtendError::KOutOfRange { k: 2, max: 1, .. })
        ));
        assert!(matches!(
            seeded_extend(&pool, 0, 6, &SeededConfig::default()),
            Err(ExtendError::KOutOfRange { k: 0, .. })
        ));
        assert!(matches!(
            fallback_k_descent(&pool, 0, 6, &SeededConfig::default()),
            Err(ExtendError::KOutOfRange { .. })
        ));
    }

    #[test]
    fn zero_candidate_budget_is_exhaustion_not_absence() {
        let pool = SeedPool::new(vec![dgr(&[&[1, 2], &[3, 4]], 4)], "pairs").expect("valid");
        let config = SeededConfig {
            candidate_cap: Some(0),
            ..SeededConfig::default()
        };
        let outcome = seeded_extend(&pool, 1, 6, &config).expect("preconditions hold");
        assert!(matches!(outcome, ExtendOutcome::BudgetExhausted { .. }));
        assert_eq!(outcome.trace().candidates, 0);
    }

    #[test]
    fn starved_completion_searches_degrade_to_budget_exhausted() {
        // One node per completion search cannot even place a mark, so every
        // candidate is undecided and the attempt must not claim not-found.
        let pool = SeedPool::new(vec![exact_witness(3, 3, 9)], "triples").expect("valid");
        let config = SeededConfig {
            nodes_per_candidate: 1,
            candidate_cap: Some(8),
            ..SeededConfig::default()
        };
        let outcome = seeded_extend(&pool, 1, 12, &config).expect("preconditions hold");
        let ExtendOutcome::BudgetExhausted { trace } = outcome else {
            panic!("expected budget exhaustion");
        };
        assert_eq!(trace.undecided, trace.candidates);
        assert!(trace.candidates > 0);
    }

    #[test]
    fn extension_is_deterministic_across_runs() {
        let pool = SeedPool::new(vec![exact_witness(3, 3, 9)], "triples").expect("valid");
        let config = SeededConfig::default();
        let a = seeded_extend(&pool, 2, 12, &config).expect("ok");
        let b = seeded_extend(&pool, 2, 12, &config).expect("ok");
        match (&a, &b) {
            (
                ExtendOutcome::Witness { dgr: wa, trace: ta },
                ExtendOutcome::Witness { dgr: wb, trace: tb },
            ) => {
                assert_eq!(wa.canonical_key(), wb.canonical_key());
                assert_eq!(ta.candidates, tb.candidates);
            }
            other => panic!("expected two witnesses, got {other:?}"),
        }
    }

    #[test]
    fn k_ladder_logs_every_level_until_the_hit() {
        let pool = SeedPool::new(vec![exact_witness(3, 3, 9)], "triples").expect("valid");
        let (outcome, attempts) =
            fallback_k_descent(&pool, 2, 12, &SeededConfig::default()).expect("ok");
        assert!(outcome.witness().is_some());
        assert_eq!(attempts[0].k, 2, "starts at the requested k");
        for pair in attempts.windows(2) {
            assert_eq!(pair[1].k, pair[0].k - 1, "descends one level at a time");
        }
        assert_eq!(
            attempts.last().expect("nonempty").outcome,
            "witness",
            "the ladder stops at the first hit"
        );
    }

    /// Growing (4,5,20) packings into five groups must land exactly on the
    /// regular bound 25: the interval {21..25} collapses to m₀ = 23, which is
    /// below the pigeonhole floor, so the clamp starts the walk at 25 — and a
    /// witness there meets the certified lower bound.
    #[test]
    fn descent_reaches_the_regular_bound_and_flags_it_exact() {
        let pool = SeedPool::new(vec![exact_witness(4, 5, 20)], "quintuples").expect("valid");
        let report = bound_descent(&pool, BoundsRegistry::shipped(), &DescentConfig::default())
            .expect("pool is extendable");
        assert_eq!(report.target_groups, 5);
        assert_eq!(report.floor, 25);
        assert_eq!(report.m0, 25);
        assert_eq!(report.certified_lower, 25);
        assert_eq!(report.best_m, Some(25));
        assert_eq!(report.status, DescentStatus::Exact);
        let witness = report.witness.expect("witness accompanies the bound");
        assert!(witness.is_regular());
        witness.validate().expect("valid");
    }

    #[test]
    fn descent_on_triples_finds_the_next_exact_value() {
        // (2,3,6) → three groups: floor = max(7, 9) = 9, top = 9, so the
        // whole interval is the single regular level m = 9.
        let pool = SeedPool::new(vec![exact_witness(2, 3, 6)], "triples").expect("valid");
        let report = bound_descent(&pool, BoundsRegistry::shipped(), &DescentConfig::default())
            .expect("extendable");
        assert_eq!(report.best_m, Some(9));
        assert_eq!(report.status, DescentStatus::Exact);
        assert_eq!(report.attempts.len(), 1);
    }

    #[test]
    fn fixed_k_policy_skips_the_ladder() {
        let pool = SeedPool::new(vec![exact_witness(3, 3, 9)], "triples").expect("valid");
        let config = DescentConfig {
            k_policy: KPolicy::Fixed(1),
            ..DescentConfig::default()
        };
        let report = bound_descent(&pool, BoundsRegistry::shipped(), &config).expect("ok");
        for attempt in &report.attempts {
            assert_eq!(attempt.k_attempts.len(), 1);
            assert_eq!(attempt.k_attempts[0].k, 1);
        }
        assert_eq!(report.best_m, Some(12), "H(4,3) = 12 is the regular floor");
        assert_eq!(report.status, DescentStatus::Exact);
    }
}
