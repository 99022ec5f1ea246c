//! Ruler-level cover search for packing completions.
//!
//! Where the exact solver builds rulers mark by mark and the local search in
//! [`crate::stochastic`] trades marks between groups, this module works at a
//! coarser granularity: it enumerates every valid ruler of the target arity
//! inside a bounded universe once, then searches for a pairwise-disjoint
//! selection that covers all but a small slack of the available marks. The
//! search is a randomized depth-first dive over whole rulers with three force
//! multipliers: live-ruler counts per mark maintained incrementally on a
//! trail, unit propagation (a mark no live ruler can cover must be abandoned
//! on the spot or the branch dies), and always-on branching on the most
//! constrained mark. Restarts reshuffle the branch order under a seeded
//! generator, so runs are deterministic for a fixed seed.
//!
//! Soundness is asymmetric, as everywhere in this crate: witnesses are
//! rebuilt through the validating [`DgrSet`] constructor, while "proven
//! absent" is claimed only when a search exhausted its whole tree over a
//! complete (untruncated) pool with no budget interruptions.

use crate::bitset::BitSet;
use crate::dgr::DgrSet;
use crate::known;
use crate::ruler::{enumerate_rulers, MarkUniverse, Ruler};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::{Duration, Instant};
use thiserror::Error;

/// Position bitmask over the pool's universe (capped at 128 marks).
type Mask = u128;

/// The maximum universe size a [`RulerPool`] can index.
pub const MAX_POOL_MARKS: usize = 128;

/// Every ruler of one arity inside a universe, indexed for cover search.
#[derive(Debug)]
pub struct RulerPool {
    /// Sorted universe marks; position `i` in every mask is `marks[i]`.
    marks: Vec<u32>,
    /// All enumerated rulers as position masks, in enumeration order.
    masks: Vec<Mask>,
    /// Indices into `masks` of the rulers containing each mark position.
    by_mark: Vec<Vec<u32>>,
    arity: u32,
    /// True when enumeration stopped at the cap; absence claims are then off
    /// the table, witnesses remain sound.
    truncated: bool,
}

#[derive(Debug, Error, PartialEq)]
pub enum PoolError {
    #[error("universe has {marks} marks; cover search indexes at most {MAX_POOL_MARKS}")]
    UniverseTooLarge { marks: usize },
    #[error("arity must be at least 1")]
    ZeroArity,
}

impl RulerPool {
    /// Enumerates every `arity`-mark ruler inside `universe`, keeping at most
    /// `cap` of them (`truncated` records whether the cap cut the stream).
    pub fn enumerate(universe: &MarkUniverse, arity: u32, cap: usize) -> Result<Self, PoolError> {
        if arity == 0 {
            return Err(PoolError::ZeroArity);
        }
        let marks = universe.elements().to_vec();
        if marks.len() > MAX_POOL_MARKS {
            return Err(PoolError::UniverseTooLarge { marks: marks.len() });
        }
        let pos_of = |m: u32| marks.binary_search(&m).expect("mark in own universe");
        let mut masks: Vec<Mask> = Vec::new();
        let mut truncated = false;
        for ruler in enumerate_rulers(arity as usize, universe, &[]) {
            if masks.len() == cap {
                truncated = true;
                break;
            }
            let mut mask: Mask = 0;
            for &m in ruler.marks() {
                mask |= 1 << pos_of(m);
            }
            masks.push(mask);
        }
        let mut by_mark = vec![Vec::new(); marks.len()];
        for (ri, &mask) in masks.iter().enumerate() {
            let mut w = mask;
            while w != 0 {
                let p = w.trailing_zeros() as usize;
                by_mark[p].push(ri as u32);
                w &= w - 1;
            }
        }
        Ok(RulerPool {
            marks,
            masks,
            by_mark,
            arity,
            truncated,
        })
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    pub fn arity(&self) -> u32 {
        self.arity
    }

    pub fn truncated(&self) -> bool {
        self.truncated
    }

    /// The universe marks this pool indexes, ascending.
    pub fn universe(&self) -> &[u32] {
        &self.marks
    }

    /// Position mask of `marks` within this pool's universe; `None` if some
    /// mark is not in the universe.
    fn mask_of(&self, marks: &[u32]) -> Option<Mask> {
        let mut mask: Mask = 0;
        for &m in marks {
            let p = self.marks.binary_search(&m).ok()?;
            mask |= 1 << p;
        }
        Some(mask)
    }

    /// A compact sub-pool over this universe minus `excluded`: only rulers
    /// avoiding every excluded mark survive, re-indexed against the smaller
    /// universe. Searching the restriction is equivalent to searching the
    /// parent with the same exclusions, but with proportionally cheaper
    /// bookkeeping — worth it when one exclusion set gets a long budget.
    pub fn restricted(&self, excluded: &[u32]) -> RulerPool {
        let marks: Vec<u32> = self
            .marks
            .iter()
            .copied()
            .filter(|m| !excluded.contains(m))
            .collect();
        let excluded_mask = {
            let mut mask: Mask = 0;
            for &m in excluded {
                if let Ok(p) = self.marks.binary_search(&m) {
                    mask |= 1 << p;
                }
            }
            mask
        };
        // Old position -> new position, for re-encoding surviving masks.
        let mut new_pos = vec![0u32; self.marks.len()];
        for (np, &m) in marks.iter().enumerate() {
            let op = self.marks.binary_search(&m).expect("subset of parent");
            new_pos[op] = np as u32;
        }
        let mut masks: Vec<Mask> = Vec::new();
        for &mask in &self.masks {
            if mask & excluded_mask != 0 {
                continue;
            }
            let mut re: Mask = 0;
            let mut w = mask;
            while w != 0 {
                let p = w.trailing_zeros() as usize;
                re |= 1 << new_pos[p];
                w &= w - 1;
            }
            masks.push(re);
        }
        let mut by_mark = vec![Vec::new(); marks.len()];
        for (ri, &mask) in masks.iter().enumerate() {
            let mut w = mask;
            while w != 0 {
                let p = w.trailing_zeros() as usize;
                by_mark[p].push(ri as u32);
                w &= w - 1;
            }
        }
        RulerPool {
            marks,
            masks,
            by_mark,
            arity: self.arity,
            truncated: self.truncated,
        }
    }
}

/// Budgets for one cover search.
#[derive(Debug, Clone)]
pub struct CoverConfig {
    /// Base seed for branch shuffling; restart `r` reseeds from it.
    pub seed: u64,
    /// Decision-node budget per restart.
    pub nodes_per_restart: u64,
    /// Number of reshuffled restarts.
    pub restarts: u32,
    /// Optional wall-clock cap across all restarts.
    pub time_budget: Option<Duration>,
    /// Probability that "leave this mark uncovered" is tried before any
    /// ruler at a branch mark (when slack remains). Depth-first order means
    /// a last-placed abandon branch at a shallow node is effectively never
    /// reached inside one restart, so restarts must sometimes lead with it
    /// to explore packings that skip well-covered marks. Exhaustive
    /// (absence) results are order-independent.
    pub abandon_first: f64,
    /// Cap on ruler branches tried per node. Unlimited depth-first search
    /// spends its whole budget under the first shallow branches; a small
    /// cap turns each restart into a thin slice sampling every depth, and
    /// many restarts then cover the space far more evenly. Capping forfeits
    /// absence claims (the clipped branches were never looked at).
    pub branch_width: Option<usize>,
    /// Greedy lookahead per tried branch: sample this many live candidates
    /// and take the one covering the rarest marks (smallest sum of live
    /// counts over its marks). 0 or 1 keeps branch choice uniform. Only
    /// sampled (width-capped) searches use it; exhaustive ones visit every
    /// branch anyway, so ordering is cosmetic there.
    pub branch_sample: usize,
}

impl Default for CoverConfig {
    fn default() -> Self {
        CoverConfig {
            seed: 1,
            nodes_per_restart: 100_000,
            restarts: 4,
            time_budget: None,
            abandon_first: 0.2,
            branch_width: None,
            branch_sample: 1,
        }
    }
}

impl CoverConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_nodes(mut self, nodes: u64) -> Self {
        self.nodes_per_restart = nodes;
        self
    }

    pub fn with_restarts(mut self, restarts: u32) -> Self {
        self.restarts = restarts;
        self
    }

    pub fn with_branch_width(mut self, width: usize) -> Self {
        self.branch_width = Some(width.max(1));
        self
    }

    pub fn with_time_budget(mut self, budget: Duration) -> Self {
        self.time_budget = Some(budget);
        self
    }
}

/// Outcome of a cover search.
#[derive(Debug, Clone)]
pub enum CoverOutcome {
    /// A validated packing of `groups` disjoint rulers avoiding the excluded
    /// marks. Bound = the largest universe mark.
    Found(DgrSet),
    /// The whole tree was exhausted over a complete pool: no such packing.
    Absent,
    /// Budgets ran out first; nothing is known.
    Undecided,
}

impl CoverOutcome {
    pub fn witness(&self) -> Option<&DgrSet> {
        match self {
            CoverOutcome::Found(dgr) => Some(dgr),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            CoverOutcome::Found(_) => "found",
            CoverOutcome::Absent => "absent",
            CoverOutcome::Undecided => "undecided",
        }
    }
}

/// Statistics from one cover search.
#[derive(Debug, Clone)]
pub struct CoverReport {
    pub outcome: CoverOutcome,
    pub restarts_tried: u32,
    pub nodes: u64,
}

/// Searches `pool` for `groups` pairwise-disjoint rulers within the pool's
/// universe minus `excluded` (marks already taken, e.g. by carried rulers).
/// Every free mark is either covered or uses up slack; the slack is whatever
/// the counts leave over.
pub fn complete(
    pool: &RulerPool,
    excluded: &[u32],
    groups: u32,
    config: &CoverConfig,
) -> CoverReport {
    let mut report = CoverReport {
        outcome: CoverOutcome::Undecided,
        restarts_tried: 0,
        nodes: 0,
    };
    let Some(excluded_mask) = pool.mask_of(excluded) else {
        // Excluded marks outside the universe cannot sit inside it either;
        // treat the surplus ones as irrelevant.
        return complete(
            pool,
            &excluded
                .iter()
                .copied()
                .filter(|&m| pool.marks.binary_search(&m).is_ok())
                .collect::<Vec<_>>(),
            groups,
            config,
        );
    };

    let n = pool.marks.len();
    let free = n - excluded_mask.count_ones() as usize;
    let needed = groups as usize * pool.arity as usize;
    if free < needed {
        // Pigeonhole: not enough marks at all — absence needs no search.
        report.outcome = CoverOutcome::Absent;
        return report;
    }
    let slack = free - needed;

    // Initial liveness: rulers disjoint from the excluded marks.
    let mut alive0 = vec![false; pool.len()];
    let mut count0 = vec![0u32; n];
    for (ri, &mask) in pool.masks.iter().enumerate() {
        if mask & excluded_mask == 0 {
            alive0[ri] = true;
            let mut w = mask;
            while w != 0 {
                let p = w.trailing_zeros() as usize;
                count0[p] += 1;
                w &= w - 1;
            }
        }
    }

    let clock = Instant::now();
    let mut exhausted_cleanly = false;
    for restart in 0..config.restarts {
        if out_of_time(config, &clock) {
            break;
        }
        report.restarts_tried += 1;
        let mut rng = ChaCha8Rng::seed_from_u64(
            config.seed ^ u64::from(restart).wrapping_mul(0x9E37_79B9_7F4A_7C15),
        );
        let mut search = Search {
            pool,
            alive: alive0.clone(),
            count: count0.clone(),
            trail: Vec::new(),
            covered: excluded_mask,
            abandoned: 0,
            slack_left: slack,
            chosen: Vec::with_capacity(groups as usize),
            groups: groups as usize,
            nodes_left: config.nodes_per_restart,
            config,
            clock: &clock,
            interrupted: false,
            clipped: false,
        };
        let found = search.dive(&mut rng);
        report.nodes += config.nodes_per_restart - search.nodes_left;
        if let Some(chosen) = found {
            report.outcome = CoverOutcome::Found(materialize(pool, &chosen));
            return report;
        }
        if !search.interrupted && !search.clipped {
            // Full tree exhausted under this restart: the instance has no
            // packing, and more restarts would only re-prove it.
            exhausted_cleanly = true;
            break;
        }
    }
    if exhausted_cleanly && !pool.truncated {
        report.outcome = CoverOutcome::Absent;
    }
    report
}

fn out_of_time(config: &CoverConfig, clock: &Instant) -> bool {
    config
        .time_budget
        .map(|b| clock.elapsed() >= b)
        .unwrap_or(false)
}

/// Rebuilds chosen pool rulers as a validated packing.
fn materialize(pool: &RulerPool, chosen: &[u32]) -> DgrSet {
    let rulers: Vec<Ruler> = chosen
        .iter()
        .map(|&ri| {
            let mask = pool.masks[ri as usize];
            let mut marks = Vec::with_capacity(pool.arity as usize);
            let mut w = mask;
            while w != 0 {
                let p = w.trailing_zeros() as usize;
                marks.push(pool.marks[p]);
                w &= w - 1;
            }
            Ruler::new(marks).expect("pool ruler failed validation")
        })
        .collect();
    let bound = pool.marks.last().copied().unwrap_or(0);
    DgrSet::new(rulers, bound).expect("disjoint cover failed packing validation")
}

/// Budgets for the randomized mark-level dive.
#[derive(Debug, Clone)]
pub struct DiveConfig {
    /// Base seed; restart `r` reseeds from it.
    pub seed: u64,
    /// Decision-node budget per restart.
    pub nodes_per_restart: u64,
    /// Number of independently shuffled restarts.
    pub restarts: u32,
    /// Optional wall-clock cap across all restarts.
    pub time_budget: Option<Duration>,
    /// Probability of trying "skip this mark" before "head a ruler here" at
    /// a ruler boundary (when skips remain). Packings that leave sparsely
    /// covered marks uncovered are unreachable in useful time without
    /// sometimes leading with the skip.
    pub skip_bias: f64,
}

impl Default for DiveConfig {
    fn default() -> Self {
        DiveConfig {
            seed: 1,
            nodes_per_restart: 2_000_000,
            restarts: 16,
            time_budget: None,
            skip_bias: 0.25,
        }
    }
}

impl DiveConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_nodes(mut self, nodes: u64) -> Self {
        self.nodes_per_restart = nodes;
        self
    }

    pub fn with_restarts(mut self, restarts: u32) -> Self {
        self.restarts = restarts;
        self
    }

    pub fn with_time_budget(mut self, budget: Duration) -> Self {
        self.time_budget = Some(budget);
        self
    }
}

/// Statistics from one dive run.
#[derive(Debug, Clone)]
pub struct DiveReport {
    /// A validated packing, when one was reached.
    pub witness: Option<DgrSet>,
    pub restarts_tried: u32,
    pub nodes: u64,
}

/// Randomized depth-first hunt for `groups` disjoint `arity`-mark rulers
/// inside `universe`, building rulers mark by mark in increasing order of
/// their minimums (every packing corresponds to exactly one leaf). The tree
/// is the exact solver's; what differs is the visit order — branch order is
/// reshuffled per restart — and the contract: budgets cut restarts short, so
/// a miss means "not found within budget", never "absent". Works on any
/// universe size (no ruler pool is materialized).
pub fn dive(universe: &MarkUniverse, groups: u32, arity: u32, config: &DiveConfig) -> DiveReport {
    let mut report = DiveReport {
        witness: None,
        restarts_tried: 0,
        nodes: 0,
    };
    let elems = universe.elements();
    let needed = groups as usize * arity as usize;
    if groups == 0 || arity == 0 || elems.len() < needed {
        return report;
    }
    let max_elem = *elems.last().unwrap();
    let clock = Instant::now();

    for restart in 0..config.restarts {
        if config
            .time_budget
            .map(|b| clock.elapsed() >= b)
            .unwrap_or(false)
        {
            break;
        }
        report.restarts_tried += 1;
        let mut diver = Diver {
            elems,
            groups: groups as usize,
            arity: arity as usize,
            max_elem,
            used: vec![false; elems.len()],
            group_marks: Vec::with_capacity(groups as usize),
            diffs: (0..groups)
                .map(|_| BitSet::new(max_elem as usize + 1))
                .collect(),
            free_count: elems.len(),
            slack: elems.len() - needed,
            scratch: vec![Vec::new(); elems.len() + 1],
            nodes_left: config.nodes_per_restart,
            deadline: config.time_budget.map(|b| (clock, b)),
            skip_bias: config.skip_bias.clamp(0.0, 1.0),
            rng: Mix(config.seed ^ u64::from(restart).wrapping_mul(0x9E37_79B9_7F4A_7C15)),
        };
        let flow = diver.search(0);
        report.nodes += config.nodes_per_restart - diver.nodes_left;
        if flow == Dig::Found {
            let rulers: Vec<Ruler> = diver
                .group_marks
                .iter()
                .map(|g| {
                    Ruler::new(g.iter().map(|&i| elems[i]).collect::<Vec<_>>())
                        .expect("dive state is difference-clean")
                })
                .collect();
            let dgr =
                DgrSet::new(rulers, max_elem).expect("dive state is pairwise disjoint");
            report.witness = Some(dgr);
            return report;
        }
    }
    report
}

/// splitmix64: stable, dependency-light branch-order shuffling. Statistical
/// quality beyond "well mixed" is irrelevant here, reproducibility is not.
struct Mix(u64);

impl Mix {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    fn below(&mut self, n: usize) -> usize {
        (self.next() % n as u64) as usize
    }

    fn chance(&mut self, p: f64) -> bool {
        ((self.next() >> 11) as f64) < p * ((1u64 << 53) as f64)
    }
}

#[derive(PartialEq, Clone, Copy)]
enum Dig {
    Found,
    Dead,
    Cut,
}

struct Diver<'a> {
    elems: &'a [u32],
    groups: usize,
    arity: usize,
    max_elem: u32,
    used: Vec<bool>,
    /// Indices into `elems`, one list per started ruler.
    group_marks: Vec<Vec<usize>>,
    /// Differences present in each ruler, by value.
    diffs: Vec<BitSet>,
    free_count: usize,
    /// Marks that may still be skipped outright.
    slack: usize,
    /// Per-depth candidate buffers, reused across the whole restart.
    scratch: Vec<Vec<usize>>,
    nodes_left: u64,
    deadline: Option<(Instant, Duration)>,
    skip_bias: f64,
    rng: Mix,
}

impl Diver<'_> {
    fn search(&mut self, depth: usize) -> Dig {
        if self.nodes_left == 0 {
            return Dig::Cut;
        }
        self.nodes_left -= 1;
        if self.nodes_left % 8192 == 0 {
            if let Some((clock, budget)) = self.deadline {
                if clock.elapsed() >= budget {
                    return Dig::Cut;
                }
            }
        }
        let building = self
            .group_marks
            .last()
            .is_some_and(|g| g.len() < self.arity);
        if building {
            self.extend_group(depth)
        } else {
            self.next_group(depth)
        }
    }

    /// Ruler boundary: the smallest free mark heads the next ruler or is
    /// skipped for good, in an order set by the skip bias.
    fn next_group(&mut self, depth: usize) -> Dig {
        if self.group_marks.len() == self.groups {
            return Dig::Found;
        }
        let remaining = self.groups - self.group_marks.len();
        if self.free_count < remaining * self.arity {
            return Dig::Dead;
        }
        let Some(s) = (0..self.elems.len()).find(|&i| !self.used[i]) else {
            return Dig::Dead;
        };
        if self.elems[s] + known::min_length(self.arity) > self.max_elem {
            return Dig::Dead;
        }
        let skip_first = self.slack > 0 && self.rng.chance(self.skip_bias);
        for case in 0..2 {
            let head_case = (case == 0) != skip_first;
            let flow = if head_case {
                self.head_branch(s, depth)
            } else if self.slack > 0 {
                self.skip_branch(s, depth)
            } else {
                Dig::Dead
            };
            if flow != Dig::Dead {
                return flow;
            }
        }
        Dig::Dead
    }

    fn head_branch(&mut self, s: usize, depth: usize) -> Dig {
        self.used[s] = true;
        self.free_count -= 1;
        self.group_marks.push(vec![s]);
        let flow = self.search(depth + 1);
        self.group_marks.pop();
        self.free_count += 1;
        self.used[s] = false;
        flow
    }

    fn skip_branch(&mut self, s: usize, depth: usize) -> Dig {
        self.slack -= 1;
        self.used[s] = true;
        self.free_count -= 1;
        let flow = self.search(depth + 1);
        self.free_count += 1;
        self.used[s] = false;
        self.slack += 1;
        flow
    }

    /// Inside a ruler: place its next (larger) mark, candidates shuffled.
    fn extend_group(&mut self, depth: usize) -> Dig {
        let g = self.group_marks.len() - 1;
        let placed = self.group_marks[g].len();
        let tail_len = known::min_length(self.arity - placed);
        let start = self.group_marks[g].last().unwrap() + 1;

        let mut candidates = std::mem::take(&mut self.scratch[depth]);
        candidates.clear();
        for i in start..self.elems.len() {
            if self.elems.len() - i < self.arity - placed {
                break;
            }
            if self.used[i] {
                continue;
            }
            let c = self.elems[i];
            if c + tail_len > self.max_elem {
                // Candidates ascend: every later one is dead too.
                break;
            }
            let conflict = self.group_marks[g]
                .iter()
                .any(|&j| self.diffs[g].contains((c - self.elems[j]) as usize));
            if !conflict {
                candidates.push(i);
            }
        }

        let mut flow = Dig::Dead;
        for pos in 0..candidates.len() {
            let j = pos + self.rng.below(candidates.len() - pos);
            candidates.swap(pos, j);
            let i = candidates[pos];
            let c = self.elems[i];
            for idx in 0..self.group_marks[g].len() {
                let j = self.group_marks[g][idx];
                self.diffs[g].insert((c - self.elems[j]) as usize);
            }
            self.group_marks[g].push(i);
            self.used[i] = true;
            self.free_count -= 1;

            let inner = self.search(depth + 1);

            self.free_count += 1;
            self.used[i] = false;
            self.group_marks[g].pop();
            for idx in 0..self.group_marks[g].len() {
                let j = self.group_marks[g][idx];
                self.diffs[g].remove((c - self.elems[j]) as usize);
            }
            if inner != Dig::Dead {
                flow = inner;
                break;
            }
        }
        self.scratch[depth] = candidates;
        flow
    }
}

/// Budgets and mixing knobs for the squeeze local search.
#[derive(Debug, Clone)]
pub struct SqueezeConfig {
    /// Base seed; restart `r` reseeds from it.
    pub seed: u64,
    /// Move budget per restart.
    pub moves_per_restart: u64,
    /// Number of restarts from a fresh greedy state.
    pub restarts: u32,
    /// Optional wall-clock cap across all restarts.
    pub time_budget: Option<Duration>,
    /// Candidates sampled from the chosen mark's ruler list per move.
    pub sample: usize,
    /// Consecutive fruitless near-complete states tolerated before a random
    /// member is evicted to force the walk elsewhere.
    pub stall_limit: u32,
    /// State-changing steps for which an evicted ruler may not return.
    pub tenure: u64,
}

impl Default for SqueezeConfig {
    fn default() -> Self {
        SqueezeConfig {
            seed: 1,
            moves_per_restart: 200_000,
            restarts: 16,
            time_budget: None,
            sample: 48,
            stall_limit: 64,
            tenure: 40,
        }
    }
}

impl SqueezeConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_moves(mut self, moves: u64) -> Self {
        self.moves_per_restart = moves;
        self
    }

    pub fn with_restarts(mut self, restarts: u32) -> Self {
        self.restarts = restarts;
        self
    }

    pub fn with_time_budget(mut self, budget: Duration) -> Self {
        self.time_budget = Some(budget);
        self
    }
}

/// Statistics from one squeeze run.
#[derive(Debug, Clone)]
pub struct SqueezeReport {
    /// A validated packing, when one was reached.
    pub witness: Option<DgrSet>,
    pub restarts_tried: u32,
    pub moves: u64,
    /// Largest disjoint set ever held, for gauging near-misses.
    pub best_members: u32,
}

/// Local search for `groups` pairwise-disjoint pool rulers: the state is
/// always a disjoint set, grown by inserting a ruler through some uncovered
/// mark and evicting whatever it collides with. Plateau walks (one-for-one
/// swaps) are the engine; tabu stamps keep them from cycling, and a little
/// noise keeps them from freezing. A miss means "not found within budget" —
/// this search can never prove absence.
pub fn squeeze(pool: &RulerPool, groups: u32, config: &SqueezeConfig) -> SqueezeReport {
    let mut report = SqueezeReport {
        witness: None,
        restarts_tried: 0,
        moves: 0,
        best_members: 0,
    };
    let n = pool.marks.len();
    if pool.is_empty() || groups == 0 || n < groups as usize * pool.arity as usize {
        return report;
    }
    let clock = Instant::now();
    let universe_mask: Mask = if n == 128 { !0 } else { ((1 as Mask) << n) - 1 };
    // Last eviction move per ruler, for the tabu test.
    let mut evicted_at = vec![u64::MAX; pool.len()];

    for restart in 0..config.restarts {
        if out_of_time_sq(config, &clock) {
            break;
        }
        report.restarts_tried += 1;
        let mut rng = ChaCha8Rng::seed_from_u64(
            config.seed ^ u64::from(restart).wrapping_mul(0x9E37_79B9_7F4A_7C15),
        );
        evicted_at.iter_mut().for_each(|t| *t = u64::MAX);
        let mut members: Vec<u32> = Vec::with_capacity(groups as usize);
        let mut covered: Mask = 0;

        // Greedy start: random rulers kept when they fit cleanly.
        for _ in 0..4 * groups {
            if members.len() == groups as usize {
                break;
            }
            let ri = rng.gen_range(0..pool.len()) as u32;
            if pool.masks[ri as usize] & covered == 0 {
                members.push(ri);
                covered |= pool.masks[ri as usize];
            }
        }

        report.best_members = report.best_members.max(members.len() as u32);
        // `covered` value whose clean-fit scan already came up empty.
        let mut scanned: Option<Mask> = None;
        // State-changing steps; tabu stamps count these, not no-op probes.
        let mut steps = 0u64;
        // Fruitless near-complete scans since the last forced eviction.
        let mut stall = 0u32;
        let mut mv = 0u64;
        while mv < config.moves_per_restart && members.len() < groups as usize {
            if mv % 1024 == 0 && out_of_time_sq(config, &clock) {
                break;
            }
            mv += 1;

            // Near-complete states: a full sweep for a clean fit is worth
            // its linear cost — the handful of rulers (often none) confined
            // to the leftover marks is invisible to sampled probes. The
            // pick among fits is randomized; a deterministic first-fit
            // would re-insert whatever a forced eviction just removed.
            if members.len() + 2 >= groups as usize && scanned != Some(covered) {
                let finishing = members.len() + 1 == groups as usize;
                let mut fit: Option<u32> = None;
                let mut seen = 0u32;
                for (ri, &mask) in pool.masks.iter().enumerate() {
                    if mask & covered != 0 {
                        continue;
                    }
                    // A finishing fit wins outright — tabu never blocks it.
                    let tabu = evicted_at[ri] != u64::MAX
                        && steps.saturating_sub(evicted_at[ri]) < config.tenure;
                    if tabu && !finishing {
                        continue;
                    }
                    seen += 1;
                    if rng.gen_range(0..seen) == 0 {
                        fit = Some(ri as u32);
                    }
                    if finishing {
                        break;
                    }
                }
                if let Some(ri) = fit {
                    members.push(ri);
                    covered |= pool.masks[ri as usize];
                    steps += 1;
                    report.best_members = report.best_members.max(members.len() as u32);
                    continue;
                }
                scanned = Some(covered);
                if finishing {
                    stall += 1;
                    if stall > config.stall_limit {
                        // The neighborhood is exhausted of easy swaps;
                        // knock out a random member and wander elsewhere.
                        let slot = rng.gen_range(0..members.len());
                        let out = members.swap_remove(slot);
                        evicted_at[out as usize] = steps;
                        covered &= !pool.masks[out as usize];
                        steps += 1;
                        stall = 0;
                        continue;
                    }
                }
            }

            // A random uncovered mark; rejection sampling is cheap because
            // at least (groups - |members|) * arity marks are uncovered.
            let uncovered = universe_mask & !covered;
            debug_assert_ne!(uncovered, 0);
            let p = loop {
                let p = rng.gen_range(0..n);
                if uncovered >> p & 1 == 1 {
                    break p;
                }
            };

            let list = &pool.by_mark[p];
            if list.is_empty() {
                continue;
            }
            // Least-conflicting sampled candidate, and only ever a clean
            // fit or a one-for-one swap: multi-evictions tear down more
            // structure than they pay back (the stall eviction above is the
            // sanctioned wrecking ball). Tabu admits a candidate only when
            // it collides with nothing. Qualifying swaps get scarce near
            // the top, so the sample grows with the state.
            let sample = if members.len() + 1 >= groups as usize {
                4 * config.sample.max(1)
            } else {
                config.sample.max(1)
            };
            let mut chosen: Option<(u32, u32)> = None;
            for _ in 0..sample {
                let ri = list[rng.gen_range(0..list.len())];
                let mask = pool.masks[ri as usize];
                let conflicts = members
                    .iter()
                    .filter(|&&mj| pool.masks[mj as usize] & mask != 0)
                    .count() as u32;
                if conflicts > 1 {
                    continue;
                }
                let tabu = evicted_at[ri as usize] != u64::MAX
                    && steps.saturating_sub(evicted_at[ri as usize]) < config.tenure;
                if tabu && conflicts > 0 {
                    continue;
                }
                if chosen.map(|(c, _)| conflicts < c).unwrap_or(true) {
                    chosen = Some((conflicts, ri));
                    if conflicts == 0 {
                        break;
                    }
                }
            }
            let Some((_, ri)) = chosen else {
                continue;
            };
            let mask = pool.masks[ri as usize];
            members.retain(|&mj| {
                if pool.masks[mj as usize] & mask != 0 {
                    evicted_at[mj as usize] = steps;
                    covered &= !pool.masks[mj as usize];
                    false
                } else {
                    true
                }
            });
            members.push(ri);
            covered |= mask;
            steps += 1;
            report.best_members = report.best_members.max(members.len() as u32);
        }
        report.moves += mv;
        if members.len() == groups as usize {
            report.best_members = groups;
            report.witness = Some(materialize(pool, &members));
            return report;
        }
    }
    report
}

fn out_of_time_sq(config: &SqueezeConfig, clock: &Instant) -> bool {
    config
        .time_budget
        .map(|b| clock.elapsed() >= b)
        .unwrap_or(false)
}

struct Search<'a> {
    pool: &'a RulerPool,
    alive: Vec<bool>,
    count: Vec<u32>,
    /// Killed ruler indices; undo pops back to a saved length.
    trail: Vec<u32>,
    covered: Mask,
    abandoned: Mask,
    slack_left: usize,
    chosen: Vec<u32>,
    groups: usize,
    nodes_left: u64,
    config: &'a CoverConfig,
    clock: &'a Instant,
    interrupted: bool,
    /// Some branch was skipped by the width cap; exhaustion is then partial.
    clipped: bool,
}

impl Search<'_> {
    /// Depth-first search below the current state. Returns the chosen ruler
    /// indices on success. Sets `interrupted` when a budget cut the tree.
    fn dive(&mut self, rng: &mut ChaCha8Rng) -> Option<Vec<u32>> {
        if self.chosen.len() == self.groups {
            return Some(self.chosen.clone());
        }
        if self.nodes_left == 0 {
            self.interrupted = true;
            return None;
        }
        self.nodes_left -= 1;
        if self.nodes_left % 1024 == 0 && out_of_time(self.config, self.clock) {
            self.interrupted = true;
            return None;
        }

        // Feasibility: enough free, unabandoned marks must remain.
        let n = self.pool.marks.len();
        let dead = self.covered | self.abandoned;
        let free = n - dead.count_ones() as usize;
        let needed = (self.groups - self.chosen.len()) * self.pool.arity as usize;
        if free < needed {
            return None;
        }

        // Most constrained mark: fewest live rulers, ties broken at random
        // so restarts do not all funnel through one branch mark.
        let mut pick = usize::MAX;
        let mut pick_count = u32::MAX;
        let mut ties = 0u32;
        for p in 0..n {
            if dead >> p & 1 == 1 {
                continue;
            }
            match self.count[p].cmp(&pick_count) {
                std::cmp::Ordering::Less => {
                    pick_count = self.count[p];
                    pick = p;
                    ties = 1;
                }
                std::cmp::Ordering::Equal => {
                    ties += 1;
                    if rng.gen_range(0..ties) == 0 {
                        pick = p;
                    }
                }
                std::cmp::Ordering::Greater => {}
            }
        }
        debug_assert_ne!(pick, usize::MAX, "free ≥ needed > 0 marks remain");

        if pick_count == 0 {
            // Unit propagation: nothing can ever cover this mark.
            if self.slack_left == 0 {
                return None;
            }
            return self.abandon(pick, rng);
        }

        // Branch over every live ruler through the mark, shuffling on
        // demand (one restart rarely consumes more than a few branches at
        // a shallow node, so a full shuffle up front is wasted work), plus
        // one abandon branch when slack remains — led with at probability
        // `abandon_first`, trailing otherwise.
        let abandon_possible = self.slack_left > 0;
        let abandon_leads =
            abandon_possible && rng.gen_bool(self.config.abandon_first.clamp(0.0, 1.0));
        if abandon_leads {
            let found = self.abandon(pick, rng);
            if found.is_some() || self.interrupted {
                return found;
            }
        }
        let mut branches: Vec<u32> = self.pool.by_mark[pick]
            .iter()
            .copied()
            .filter(|&ri| self.alive[ri as usize])
            .collect();
        let tried = match self.config.branch_width {
            Some(w) if w < branches.len() => {
                self.clipped = true;
                w
            }
            _ => branches.len(),
        };
        for i in 0..tried {
            let j = self.sample_branch(&branches, i, rng);
            branches.swap(i, j);
            let ri = branches[i];
            let saved_trail = self.trail.len();
            let saved_covered = self.covered;
            self.choose(ri);
            self.chosen.push(ri);
            let found = self.dive(rng);
            self.chosen.pop();
            self.undo(saved_trail);
            self.covered = saved_covered;
            if found.is_some() {
                return found;
            }
            if self.interrupted {
                return None;
            }
        }
        if abandon_possible && !abandon_leads {
            let found = self.abandon(pick, rng);
            if found.is_some() {
                return found;
            }
        }
        None
    }

    /// Picks the next branch index from `branches[i..]`: uniform when the
    /// sample size is 1, otherwise the sampled candidate covering the
    /// rarest marks (ties to the earlier draw).
    fn sample_branch(&self, branches: &[u32], i: usize, rng: &mut ChaCha8Rng) -> usize {
        let mut best = rng.gen_range(i..branches.len());
        let picks = self.config.branch_sample.max(1).min(branches.len() - i);
        if picks > 1 {
            let mut best_score = self.count_sum(branches[best]);
            for _ in 1..picks {
                let j = rng.gen_range(i..branches.len());
                let score = self.count_sum(branches[j]);
                if score < best_score {
                    best_score = score;
                    best = j;
                }
            }
        }
        best
    }

    /// How contested a ruler's marks are: the sum of live counts over them.
    fn count_sum(&self, ri: u32) -> u64 {
        let mut sum = 0u64;
        let mut w = self.pool.masks[ri as usize];
        while w != 0 {
            let p = w.trailing_zeros() as usize;
            sum += u64::from(self.count[p]);
            w &= w - 1;
        }
        sum
    }

    /// Spends one unit of slack to leave mark `pick` uncovered.
    fn abandon(&mut self, pick: usize, rng: &mut ChaCha8Rng) -> Option<Vec<u32>> {
        self.slack_left -= 1;
        self.abandoned |= 1 << pick;
        let found = self.dive(rng);
        self.abandoned &= !(1 << pick);
        self.slack_left += 1;
        found
    }

    /// Commits ruler `ri`: covers its marks and kills every live ruler that
    /// intersects it, maintaining the per-mark live counts.
    fn choose(&mut self, ri: u32) {
        let mask = self.pool.masks[ri as usize];
        self.covered |= mask;
        let mut w = mask;
        while w != 0 {
            let p = w.trailing_zeros() as usize;
            w &= w - 1;
            for &other in &self.pool.by_mark[p] {
                if !self.alive[other as usize] {
                    continue;
                }
                self.alive[other as usize] = false;
                self.trail.push(other);
                let mut om = self.pool.masks[other as usize];
                while om != 0 {
                    let q = om.trailing_zeros() as usize;
                    self.count[q] -= 1;
                    om &= om - 1;
                }
            }
        }
    }

    /// Rolls the trail back to `mark`, reviving killed rulers.
    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let ri = self.trail.pop().unwrap();
            self.alive[ri as usize] = true;
            let mut om = self.pool.masks[ri as usize];
            while om != 0 {
                let q = om.trailing_zeros() as usize;
                self.count[q] += 1;
                om &= om - 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pool(n: u32, arity: u32) -> RulerPool {
        RulerPool::enumerate(&MarkUniverse::range(n), arity, usize::MAX).expect("pool")
    }

    #[test]
    fn enumerates_and_indexes_the_universe() {
        // 3-mark rulers inside {1..4}: {1,2,4} and {1,3,4}.
        let p = pool(4, 3);
        assert_eq!(p.len(), 2);
        assert!(!p.truncated());
        assert_eq!(p.universe(), &[1, 2, 3, 4]);
        // Mark 1 and mark 4 belong to both rulers, 2 and 3 to one each.
        assert_eq!(p.by_mark[0].len(), 2);
        assert_eq!(p.by_mark[1].len(), 1);
        assert_eq!(p.by_mark[2].len(), 1);
        assert_eq!(p.by_mark[3].len(), 2);
    }

    #[test]
    fn caps_the_enumeration_when_asked() {
        let p = RulerPool::enumerate(&MarkUniverse::range(10), 3, 5).expect("pool");
        assert_eq!(p.len(), 5);
        assert!(p.truncated());
    }

    #[test]
    fn rejects_oversized_universes() {
        let err = RulerPool::enumerate(&MarkUniverse::range(129), 3, usize::MAX).unwrap_err();
        assert_eq!(err, PoolError::UniverseTooLarge { marks: 129 });
    }

    #[test]
    fn finds_a_tight_triple_packing() {
        // (3,3,9): three disjoint 3-mark rulers filling {1..9}.
        let p = pool(9, 3);
        let report = complete(&p, &[], 3, &CoverConfig::default());
        let dgr = report.outcome.witness().expect("witness").clone();
        assert_eq!(dgr.rulers().len(), 3);
        assert_eq!(dgr.bound(), 9);
    }

    #[test]
    fn completes_around_carried_marks() {
        // Fix {1,2,4} as carried; two more disjoint 3-mark rulers must fit
        // inside {1..10} minus those marks.
        let p = pool(10, 3);
        let report = complete(&p, &[1, 2, 4], 2, &CoverConfig::default());
        let dgr = report.outcome.witness().expect("witness");
        for ruler in dgr.rulers() {
            for &m in ruler.marks() {
                assert!(m != 1 && m != 2 && m != 4);
            }
        }
    }

    #[test]
    fn proves_absence_by_exhaustion() {
        // {1..8} has no partition into two disjoint 4-mark rulers: every
        // 4-subset with distinct differences leaves a complement with a
        // repeated one. Slack is zero, so exhaustion settles it.
        let p = pool(8, 4);
        let report = complete(&p, &[], 2, &CoverConfig::default());
        assert!(matches!(report.outcome, CoverOutcome::Absent));
        assert_eq!(report.restarts_tried, 1, "one full pass settles it");
    }

    #[test]
    fn interleaved_rulers_are_in_scope() {
        // Two disjoint 4-mark rulers fit inside {1..10} only by interleaving
        // (each alone already spans length ≥ 6).
        let p = pool(10, 4);
        let report = complete(&p, &[], 2, &CoverConfig::default());
        assert!(report.outcome.witness().is_some());
    }

    #[test]
    fn pigeonhole_absence_needs_no_nodes() {
        let p = pool(5, 3);
        let report = complete(&p, &[], 2, &CoverConfig::default());
        assert!(matches!(report.outcome, CoverOutcome::Absent));
        assert_eq!(report.nodes, 0);
    }

    #[test]
    fn truncated_pools_never_claim_absence() {
        // A cap of 1 ruler cannot host two disjoint ones; with the pool
        // truncated the honest answer is "undecided", not "absent".
        let p = RulerPool::enumerate(&MarkUniverse::range(9), 3, 1).expect("pool");
        let report = complete(&p, &[], 3, &CoverConfig::default());
        assert!(matches!(report.outcome, CoverOutcome::Undecided));
    }

    #[test]
    fn zero_node_budget_is_undecided() {
        let p = pool(9, 3);
        let config = CoverConfig::default().with_nodes(0);
        let report = complete(&p, &[], 3, &config);
        assert!(matches!(report.outcome, CoverOutcome::Undecided));
    }

    #[test]
    fn is_deterministic_for_a_fixed_seed() {
        let p = pool(12, 3);
        let config = CoverConfig::default().with_seed(77);
        let a = complete(&p, &[], 3, &config);
        let b = complete(&p, &[], 3, &config);
        match (&a.outcome, &b.outcome) {
            (CoverOutcome::Found(x), CoverOutcome::Found(y)) => assert_eq!(x, y),
            other => panic!("expected two witnesses, got {other:?}"),
        }
        assert_eq!(a.nodes, b.nodes);
    }

    #[test]
    fn width_caps_forfeit_absence_claims() {
        // The absent instance from `proves_absence_by_exhaustion`, but with
        // clipped branching: the honest outcome degrades to undecided.
        let p = pool(8, 4);
        let config = CoverConfig::default().with_branch_width(1).with_restarts(2);
        let report = complete(&p, &[], 2, &config);
        assert!(matches!(report.outcome, CoverOutcome::Undecided));
        assert_eq!(report.restarts_tried, 2, "clipped restarts keep going");
    }

    #[test]
    fn width_capped_restarts_still_find_witnesses() {
        let p = pool(9, 3);
        let config = CoverConfig::default().with_branch_width(2).with_restarts(32);
        let report = complete(&p, &[], 3, &config);
        assert!(report.outcome.witness().is_some());
    }

    #[test]
    fn restriction_matches_exclusion() {
        // Restricting the pool and excluding in place must agree.
        let p = pool(10, 3);
        let r = p.restricted(&[1, 2, 4]);
        assert_eq!(r.universe(), &[3, 5, 6, 7, 8, 9, 10]);
        assert!(r.len() < p.len());
        let via_excluded = complete(&p, &[1, 2, 4], 2, &CoverConfig::default());
        let via_restricted = complete(&r, &[], 2, &CoverConfig::default());
        assert!(via_excluded.outcome.witness().is_some());
        assert!(via_restricted.outcome.witness().is_some());
        // Every restricted ruler avoids the excluded marks by construction.
        for ruler in via_restricted.outcome.witness().unwrap().rulers() {
            for &m in ruler.marks() {
                assert!(m != 1 && m != 2 && m != 4);
            }
        }
    }

    #[test]
    fn witnesses_avoid_excluded_marks_outside_universe() {
        // Excluded marks not in the universe are ignored rather than fatal.
        let p = pool(9, 3);
        let report = complete(&p, &[42], 3, &CoverConfig::default());
        assert!(report.outcome.witness().is_some());
    }
}
