//! Randomized witness hunting for disjoint-ruler packings.
//!
//! The exact solver in [`crate::exact`] visits candidate packings in a fixed
//! lexicographic order, which makes it the right tool for absence proofs but a
//! poor one for *finding* witnesses whose early groups sit deep in that order.
//! This module provides the complement: a seeded local search over full
//! partitions of the universe. It moves marks between groups to eliminate
//! repeated in-group differences, escaping local minima by raising penalty
//! weights on the differences that keep recurring (the breakout strategy),
//! and restarts from a fresh greedy randomized partition when a descent
//! exhausts its step budget.
//!
//! The search is deterministic for a fixed [`SlsConfig::seed`]: every restart
//! derives its generator from the base seed, and all tie-breaking goes through
//! that generator. Soundness never depends on the search itself — any packing
//! it returns is rebuilt through the validating [`Ruler`] and [`DgrSet`]
//! constructors, so a returned witness is correct by construction and a miss
//! means "not found within budget", never "absent".

use crate::dgr::DgrSet;
use crate::ruler::{MarkUniverse, Ruler};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::{Duration, Instant};

/// Sentinel for "this mark has never been moved".
const NEVER: u64 = u64::MAX;
/// Sentinel for "this difference is not in the violated list".
const NO_POS: u32 = u32::MAX;

/// Tuning knobs for the weighted min-conflicts hunt.
///
/// The defaults are calibrated for groups of around ten marks in universes of
/// up to a few hundred; larger instances mainly want more
/// [`steps_per_restart`](Self::steps_per_restart) or more restarts.
#[derive(Debug, Clone)]
pub struct SlsConfig {
    /// Base seed. Restart `r` runs on a generator seeded from `seed` and `r`,
    /// so changing the seed reshuffles every restart at once.
    pub seed: u64,
    /// Move limit per restart before reshuffling from scratch.
    pub steps_per_restart: u64,
    /// Number of independently seeded restarts.
    pub restarts: u32,
    /// How many steps a swapped mark stays tabu as a swap-in candidate.
    pub tabu_tenure: u64,
    /// Probability of taking a uniformly random swap instead of the best one.
    pub noise: f64,
    /// Probability that a local minimum smooths all weights one step back
    /// toward one instead of raising the violated ones.
    pub smooth: f64,
    /// Optional wall-clock cap across all restarts.
    pub time_budget: Option<Duration>,
}

impl Default for SlsConfig {
    fn default() -> Self {
        SlsConfig {
            seed: 1,
            steps_per_restart: 200_000,
            restarts: 64,
            tabu_tenure: 12,
            noise: 0.03,
            smooth: 0.05,
            time_budget: None,
        }
    }
}

impl SlsConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_steps(mut self, steps: u64) -> Self {
        self.steps_per_restart = steps;
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

/// What a hunt did, whether or not it succeeded.
#[derive(Debug, Clone)]
pub struct HuntReport {
    /// A validated packing, if one was reached. Its bound is the largest
    /// universe element; callers wanting a looser bound re-normalize.
    pub witness: Option<DgrSet>,
    /// Restarts actually begun (≤ `config.restarts`).
    pub restarts_tried: u32,
    /// Total moves applied across all restarts.
    pub steps: u64,
    /// Fewest repeated-difference instances reached across all restarts;
    /// zero exactly when a witness was found.
    pub best_excess: u32,
}

/// Hunts for `groups` pairwise-disjoint rulers of `arity` marks each inside
/// `universe`, using seeded weighted min-conflicts search.
///
/// Returns a report whose `witness` is `Some` on success. Failure says nothing
/// about absence — use the exact solver for that.
pub fn hunt(universe: &MarkUniverse, groups: u32, arity: u32, config: &SlsConfig) -> HuntReport {
    let marks = universe.elements();
    let needed = groups as usize * arity as usize;
    let mut report = HuntReport {
        witness: None,
        restarts_tried: 0,
        steps: 0,
        best_excess: u32::MAX,
    };
    if groups == 0 || arity == 0 || marks.len() < needed {
        return report;
    }

    let clock = Instant::now();
    let mut state = State::new(marks, groups as usize, arity as usize);
    for restart in 0..config.restarts {
        if out_of_time(config, &clock) {
            break;
        }
        report.restarts_tried += 1;
        // Distinct, reproducible stream per restart. The multiplier spreads
        // consecutive restart indices across the seed space.
        let mut rng = ChaCha8Rng::seed_from_u64(
            config.seed ^ u64::from(restart).wrapping_mul(0x9E37_79B9_7F4A_7C15),
        );
        state.reset(&mut rng);
        let outcome = run_restart(&mut state, &mut rng, config, &clock, &mut report.steps);
        report.best_excess = report.best_excess.min(outcome.best_excess);
        if let Some(witness) = outcome.witness {
            report.witness = Some(witness);
            return report;
        }
    }
    report
}

fn out_of_time(config: &SlsConfig, clock: &Instant) -> bool {
    config
        .time_budget
        .map(|b| clock.elapsed() >= b)
        .unwrap_or(false)
}

struct RestartOutcome {
    witness: Option<DgrSet>,
    best_excess: u32,
}

/// Result of scanning all counterparts for one conflicted mark.
struct CounterpartScan {
    /// Best admissible counterpart, if any survived the tabu filter.
    choice: Option<usize>,
    /// Best weighted delta over every candidate, tabu included.
    floor: i64,
}

/// One weighted tabu descent from the current state of `state`.
fn run_restart(
    state: &mut State<'_>,
    rng: &mut ChaCha8Rng,
    config: &SlsConfig,
    clock: &Instant,
    steps_out: &mut u64,
) -> RestartOutcome {
    let mut best_excess = state.excess;
    for step in 0..config.steps_per_restart {
        if state.excess == 0 {
            return RestartOutcome {
                witness: Some(state.witness()),
                best_excess: 0,
            };
        }
        if step % 4096 == 0 && out_of_time(config, clock) {
            return RestartOutcome {
                witness: None,
                best_excess,
            };
        }

        let (bin, x) = state.pick_conflicted(rng);
        let mut stuck = false;
        let y = if rng.gen::<f64>() < config.noise {
            state.random_counterpart(bin, rng)
        } else {
            let scan = state.best_counterpart(bin, x, step, config.tabu_tenure, best_excess, rng);
            // A strict local minimum: even with tabu ignored, no move
            // improves the weighted cost. Plateaus are walked instead.
            stuck = scan.floor > 0;
            match scan.choice {
                Some(y) => y,
                // Everything admissible was tabu with no aspiration; walk.
                None => state.random_counterpart(bin, rng),
            }
        };
        state.swap(x, y, step);
        *steps_out += 1;
        if stuck {
            if rng.gen::<f64>() < config.smooth {
                // Forget a little of the penalty history so old grudges do
                // not drown the live gradient.
                state.smooth_weights();
            } else {
                // Breakout: make whatever is still violated after the move
                // more expensive to keep, reshaping the local landscape.
                state.bump_violated_weights();
            }
        }
        best_excess = best_excess.min(state.excess);
        if std::env::var_os("SLS_TRACE").is_some() && step % 50_000 == 0 {
            eprintln!(
                "  step={step} excess={} best={best_excess} cost={} maxw={}",
                state.excess,
                state.cost,
                state.weight.iter().max().unwrap()
            );
        }
    }
    let witness = (state.excess == 0).then(|| state.witness());
    RestartOutcome {
        witness,
        best_excess,
    }
}

/// A full partition of the universe into `groups` bins of exactly `arity`
/// marks plus one spill bin for the slack, with incremental conflict counts.
///
/// Progress is measured two ways. The *excess* of a bin counts repeated
/// difference instances — a difference occurring `c ≥ 1` times contributes
/// `c - 1` — and zero total excess is exactly "every bin is a Golomb ruler",
/// which makes the partition a witness since bins are disjoint by
/// construction. Moves, however, are ranked by a *weighted* cost in which
/// each difference carries a penalty weight that starts at one and grows
/// whenever a local minimum leaves it in violation; this is what pushes
/// descents off plateaus that a plain conflict count cannot escape.
struct State<'a> {
    marks: &'a [u32],
    groups: usize,
    arity: usize,
    /// One past the largest representable difference.
    table: usize,
    /// Bin index per mark; `groups` is the spill bin.
    bin_of: Vec<usize>,
    /// Unordered member lists, one per bin plus the spill bin.
    members: Vec<Vec<usize>>,
    /// Position of each mark inside its bin's member list.
    pos: Vec<usize>,
    /// Difference multiplicities per real bin, flattened `[bin][d]`.
    cnt: Vec<u16>,
    /// Penalty weight per difference per real bin, flattened `[bin][d]`.
    weight: Vec<u32>,
    /// Repeated-difference instances per real bin (unweighted).
    bin_excess: Vec<u32>,
    /// Total unweighted violations; zero exactly at a witness.
    excess: u32,
    /// Total weighted violations; the move-ranking objective.
    cost: u64,
    /// Flattened `bin * table + d` keys of currently repeated differences.
    violated: Vec<u32>,
    /// Key → index in `violated`, `NO_POS` when absent.
    viol_pos: Vec<u32>,
    /// Step at which each mark last changed bins (`NEVER` if it hasn't).
    last_moved: Vec<u64>,
    // ---- reusable scratch, kept here so the hot loop never allocates
    rm_x_ds: Vec<u32>,
    rm_y_ds: Vec<u32>,
    add_ds: Vec<u32>,
    live_bins: Vec<usize>,
    conflicted: Vec<usize>,
    ties: Vec<usize>,
}

#[inline]
fn count_of(ds: &[u32], d: u32) -> i32 {
    ds.iter().filter(|&&e| e == d).count() as i32
}

impl<'a> State<'a> {
    fn new(marks: &'a [u32], groups: usize, arity: usize) -> State<'a> {
        let n = marks.len();
        let table = marks.last().map(|&m| m as usize + 1).unwrap_or(1);
        State {
            marks,
            groups,
            arity,
            table,
            bin_of: vec![groups; n],
            members: vec![Vec::with_capacity(n); groups + 1],
            pos: vec![0; n],
            cnt: vec![0; groups * table],
            weight: vec![1; groups * table],
            bin_excess: vec![0; groups],
            excess: 0,
            cost: 0,
            violated: Vec::with_capacity(64),
            viol_pos: vec![NO_POS; groups * table],
            last_moved: vec![NEVER; n],
            rm_x_ds: Vec::with_capacity(arity),
            rm_y_ds: Vec::with_capacity(arity),
            add_ds: Vec::with_capacity(arity),
            live_bins: Vec::with_capacity(groups),
            conflicted: Vec::with_capacity(arity),
            ties: Vec::with_capacity(n),
        }
    }

    /// Rebuilds a fresh greedy randomized partition: marks are visited in a
    /// shuffled order and each bin grabs, in turn, marks that keep it
    /// conflict-free for as long as any remain, then fills up arbitrarily.
    /// Starts far below the excess of a uniform shuffle while staying varied.
    fn reset(&mut self, rng: &mut ChaCha8Rng) {
        let n = self.marks.len();
        for list in &mut self.members {
            list.clear();
        }
        self.cnt.fill(0);
        self.weight.fill(1);
        self.bin_excess.fill(0);
        self.excess = 0;
        self.cost = 0;
        self.violated.clear();
        self.viol_pos.fill(NO_POS);
        self.last_moved.fill(NEVER);

        let mut order: Vec<usize> = (0..n).collect();
        // Fisher–Yates on the visiting order.
        for i in (1..n).rev() {
            let j = rng.gen_range(0..=i);
            order.swap(i, j);
        }
        let mut used = vec![false; n];
        for bin in 0..self.groups {
            while self.members[bin].len() < self.arity {
                let mut picked = None;
                for &idx in order.iter() {
                    if used[idx] {
                        continue;
                    }
                    if picked.is_none() {
                        // Fallback if nothing conflict-free turns up.
                        picked = Some(idx);
                    }
                    if self.fits_cleanly(bin, idx) {
                        picked = Some(idx);
                        break;
                    }
                }
                let idx = picked.expect("universe large enough for all bins");
                used[idx] = true;
                self.insert(bin, idx);
            }
        }
        for &idx in order.iter() {
            if !used[idx] {
                self.insert(self.groups, idx);
            }
        }
    }

    /// Would adding `idx` to `bin` introduce no repeated difference?
    fn fits_cleanly(&self, bin: usize, idx: usize) -> bool {
        let mark = self.marks[idx];
        let base = bin * self.table;
        for i in 0..self.members[bin].len() {
            let d = mark.abs_diff(self.marks[self.members[bin][i]]);
            if self.cnt[base + d as usize] > 0 {
                return false;
            }
            // A twin among the new pairs themselves: some earlier member at
            // the same distance on the other side.
            for j in 0..i {
                if mark.abs_diff(self.marks[self.members[bin][j]]) == d {
                    return false;
                }
            }
        }
        true
    }

    fn spill(&self) -> usize {
        self.groups
    }

    fn insert(&mut self, bin: usize, idx: usize) {
        if bin < self.groups {
            let mark = self.marks[idx];
            let base = bin * self.table;
            for i in 0..self.members[bin].len() {
                let d = mark.abs_diff(self.marks[self.members[bin][i]]) as usize;
                let c = self.cnt[base + d];
                self.cnt[base + d] = c + 1;
                if c >= 1 {
                    self.bin_excess[bin] += 1;
                    self.excess += 1;
                    self.cost += u64::from(self.weight[base + d]);
                    if c == 1 {
                        self.mark_violated(base + d);
                    }
                }
            }
        }
        self.bin_of[idx] = bin;
        self.pos[idx] = self.members[bin].len();
        self.members[bin].push(idx);
    }

    fn remove(&mut self, idx: usize) {
        let bin = self.bin_of[idx];
        let at = self.pos[idx];
        self.members[bin].swap_remove(at);
        if let Some(&moved) = self.members[bin].get(at) {
            self.pos[moved] = at;
        }
        if bin < self.groups {
            let mark = self.marks[idx];
            let base = bin * self.table;
            for i in 0..self.members[bin].len() {
                let d = mark.abs_diff(self.marks[self.members[bin][i]]) as usize;
                let c = self.cnt[base + d];
                self.cnt[base + d] = c - 1;
                if c >= 2 {
                    self.bin_excess[bin] -= 1;
                    self.excess -= 1;
                    self.cost -= u64::from(self.weight[base + d]);
                    if c == 2 {
                        self.mark_resolved(base + d);
                    }
                }
            }
        }
    }

    fn mark_violated(&mut self, key: usize) {
        debug_assert_eq!(self.viol_pos[key], NO_POS);
        self.viol_pos[key] = self.violated.len() as u32;
        self.violated.push(key as u32);
    }

    fn mark_resolved(&mut self, key: usize) {
        let at = self.viol_pos[key] as usize;
        debug_assert_ne!(self.viol_pos[key], NO_POS);
        self.violated.swap_remove(at);
        if let Some(&moved) = self.violated.get(at) {
            self.viol_pos[moved as usize] = at as u32;
        }
        self.viol_pos[key] = NO_POS;
    }

    /// Swaps marks `x` and `y` between their bins and stamps both as moved.
    fn swap(&mut self, x: usize, y: usize, step: u64) {
        let (bx, by) = (self.bin_of[x], self.bin_of[y]);
        debug_assert_ne!(bx, by, "swap within one bin is a no-op");
        self.remove(x);
        self.remove(y);
        self.insert(by, x);
        self.insert(bx, y);
        self.last_moved[x] = step;
        self.last_moved[y] = step;
    }

    /// Raises by one the weight of every currently repeated difference,
    /// making violations that survive a local minimum more expensive to keep
    /// than to break.
    fn bump_violated_weights(&mut self) {
        for i in 0..self.violated.len() {
            let key = self.violated[i] as usize;
            self.weight[key] += 1;
            // Each repeat instance at this difference now costs one more.
            self.cost += u64::from(self.cnt[key]) - 1;
        }
    }

    /// Picks a uniformly random conflicted mark: first a bin uniform among
    /// bins with violations, then a uniform conflicted member.
    fn pick_conflicted(&mut self, rng: &mut ChaCha8Rng) -> (usize, usize) {
        debug_assert!(self.excess > 0);
        self.live_bins.clear();
        for b in 0..self.groups {
            if self.bin_excess[b] > 0 {
                self.live_bins.push(b);
            }
        }
        let bin = self.live_bins[rng.gen_range(0..self.live_bins.len())];
        self.conflicted.clear();
        let base = bin * self.table;
        for i in 0..self.members[bin].len() {
            let x = self.members[bin][i];
            let mark = self.marks[x];
            for j in 0..self.members[bin].len() {
                if i == j {
                    continue;
                }
                let d = mark.abs_diff(self.marks[self.members[bin][j]]) as usize;
                if self.cnt[base + d] >= 2 {
                    self.conflicted.push(x);
                    break;
                }
            }
        }
        debug_assert!(!self.conflicted.is_empty());
        (bin, self.conflicted[rng.gen_range(0..self.conflicted.len())])
    }

    /// A uniformly random mark outside `bin` (spill included).
    fn random_counterpart(&self, bin: usize, rng: &mut ChaCha8Rng) -> usize {
        loop {
            let y = rng.gen_range(0..self.marks.len());
            if self.bin_of[y] != bin {
                return y;
            }
        }
    }

    /// Weighted and unweighted cost deltas of removing `idx` from its bin.
    /// Leaves the removed differences in `ds` for a follow-up addition.
    fn removal_delta(&self, idx: usize, ds: &mut Vec<u32>) -> (i64, i64) {
        ds.clear();
        let bin = self.bin_of[idx];
        let mark = self.marks[idx];
        let base = bin * self.table;
        let mut weighted = 0i64;
        let mut plain = 0i64;
        for i in 0..self.members[bin].len() {
            let z = self.members[bin][i];
            if z == idx {
                continue;
            }
            let d = mark.abs_diff(self.marks[z]);
            let eff = i32::from(self.cnt[base + d as usize]) - count_of(ds, d);
            if eff >= 2 {
                weighted -= i64::from(self.weight[base + d as usize]);
                plain -= 1;
            }
            ds.push(d);
        }
        (weighted, plain)
    }

    /// Weighted and unweighted deltas of adding mark `y_idx` to `bin`,
    /// pretending `exclude` has already left and `removed` already applied.
    fn addition_delta(
        &self,
        bin: usize,
        y_idx: usize,
        exclude: usize,
        removed: &[u32],
        added: &mut Vec<u32>,
    ) -> (i64, i64) {
        added.clear();
        let mark = self.marks[y_idx];
        let base = bin * self.table;
        let mut weighted = 0i64;
        let mut plain = 0i64;
        for i in 0..self.members[bin].len() {
            let z = self.members[bin][i];
            if z == exclude {
                continue;
            }
            let d = mark.abs_diff(self.marks[z]);
            let eff =
                i32::from(self.cnt[base + d as usize]) - count_of(removed, d) + count_of(added, d);
            if eff >= 1 {
                weighted += i64::from(self.weight[base + d as usize]);
                plain += 1;
            }
            added.push(d);
        }
        (weighted, plain)
    }

    /// Evaluates every swap counterpart for `x` by weighted delta. `choice`
    /// is the best non-tabu candidate (ties broken uniformly at random);
    /// tabu moves are admitted only if they would improve on the restart's
    /// best excess, and `choice` is `None` when every candidate is tabu
    /// without aspiring. `floor` is the best delta over *all* candidates,
    /// tabu included — the true depth of the current position.
    fn best_counterpart(
        &mut self,
        bin: usize,
        x: usize,
        step: u64,
        tenure: u64,
        best_excess: u32,
        rng: &mut ChaCha8Rng,
    ) -> CounterpartScan {
        let mut rm_x_ds = std::mem::take(&mut self.rm_x_ds);
        let mut rm_y_ds = std::mem::take(&mut self.rm_y_ds);
        let mut add_ds = std::mem::take(&mut self.add_ds);
        let mut ties = std::mem::take(&mut self.ties);
        let (rm_x_weighted, rm_x_plain) = self.removal_delta(x, &mut rm_x_ds);

        let mut best_delta = i64::MAX;
        let mut floor = i64::MAX;
        ties.clear();
        for other in 0..=self.spill() {
            if other == bin {
                continue;
            }
            for i in 0..self.members[other].len() {
                let y = self.members[other][i];
                let (aw, ap) = self.addition_delta(bin, y, x, &rm_x_ds, &mut add_ds);
                let mut weighted = rm_x_weighted + aw;
                let mut plain = rm_x_plain + ap;
                if other != self.spill() {
                    let (rw, rp) = self.removal_delta(y, &mut rm_y_ds);
                    let (aw2, ap2) = self.addition_delta(other, x, y, &rm_y_ds, &mut add_ds);
                    weighted += rw + aw2;
                    plain += rp + ap2;
                }
                floor = floor.min(weighted);
                let tabu = self.last_moved[y] != NEVER
                    && step.saturating_sub(self.last_moved[y]) < tenure;
                let aspires = i64::from(self.excess) + plain < i64::from(best_excess);
                if tabu && !aspires {
                    continue;
                }
                if weighted < best_delta {
                    best_delta = weighted;
                    ties.clear();
                    ties.push(y);
                } else if weighted == best_delta {
                    ties.push(y);
                }
            }
        }
        let choice = if ties.is_empty() {
            None
        } else {
            Some(ties[rng.gen_range(0..ties.len())])
        };
        self.rm_x_ds = rm_x_ds;
        self.rm_y_ds = rm_y_ds;
        self.add_ds = add_ds;
        self.ties = ties;
        CounterpartScan { choice, floor }
    }

    /// Pulls every penalty weight one step back toward one.
    fn smooth_weights(&mut self) {
        for key in 0..self.weight.len() {
            if self.weight[key] > 1 {
                self.weight[key] -= 1;
                let c = self.cnt[key];
                if c >= 2 {
                    self.cost -= u64::from(c) - 1;
                }
            }
        }
    }

    /// Rebuilds the zero-excess state as a validated packing.
    fn witness(&self) -> DgrSet {
        debug_assert_eq!(self.excess, 0);
        let rulers: Vec<Ruler> = (0..self.groups)
            .map(|bin| {
                let marks: Vec<u32> = self.members[bin].iter().map(|&i| self.marks[i]).collect();
                Ruler::new(marks).expect("zero-conflict bin failed ruler validation")
            })
            .collect();
        let bound = self.marks.last().copied().unwrap_or(0);
        DgrSet::new(rulers, bound).expect("zero-conflict partition failed packing validation")
    }
}
