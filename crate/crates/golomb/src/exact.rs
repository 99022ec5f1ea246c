//! Complete backtracking search for disjoint Golomb rulers.
//!
//! The solver places rulers in increasing order of their minimum marks: at
//! each decision point the smallest still-free mark either becomes the
//! minimum of the next ruler or is skipped for good (the skip budget is the
//! universe size minus I*J). Every (I,J)-packing of the universe corresponds
//! to exactly one leaf, so the same engine yields first-witness search,
//! exhaustive non-existence proofs, and witness enumeration.
//!
//! `proven-absent` is only reported when the tree was exhausted with no
//! budget interruption anywhere. Interrupted searches return a resumable
//! frontier describing the current decision path.

use std::collections::VecDeque;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::bitset::BitSet;
use crate::dgr::DgrSet;
use crate::known;
use crate::registry::{HStatus, HValue, Provenance};
use crate::ruler::{enumerate_rulers, MarkUniverse, Ruler};

/// Budgets and policies for one search run.
#[derive(Clone, Debug)]
pub struct SearchConfig {
    /// Deterministic node budget (a node is one decision-point entry).
    pub max_nodes: Option<u64>,
    /// Wall-clock budget, checked every few thousand nodes. Non-deterministic
    /// by nature; prefer `max_nodes` where reproducibility matters.
    pub time_budget: Option<Duration>,
    /// Prune mirror-symmetric duplicates (contiguous universes only): keeps
    /// the half of the space with sigma - 1 <= n - lambda. Sound for both
    /// witness search and absence proofs.
    pub mirror_reduction: bool,
    /// Write the current frontier here every `checkpoint_every` nodes
    /// (best effort) and on budget exhaustion.
    pub checkpoint_path: Option<PathBuf>,
    pub checkpoint_every: u64,
    /// Continue a previous run from its recorded frontier.
    pub resume_from: Option<Frontier>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_nodes: None,
            time_budget: None,
            mirror_reduction: true,
            checkpoint_path: None,
            checkpoint_every: 1 << 26,
            resume_from: None,
        }
    }
}

impl SearchConfig {
    /// Convenience: a config with only a node budget set.
    pub fn with_node_budget(max_nodes: u64) -> Self {
        SearchConfig {
            max_nodes: Some(max_nodes),
            ..SearchConfig::default()
        }
    }
}

/// One decision on the search path: a mark placed into the ruler under
/// construction (rulers are read off left to right), or a mark skipped at a
/// ruler boundary.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FrontierStep {
    Mark(u32),
    Skip(u32),
}

/// A resumable description of where an interrupted search stopped: the
/// ordered decision path from the root to the current node. Restarting with
/// the same parameters re-derives the full solver state and continues;
/// subtrees left of the path are not revisited.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frontier {
    pub groups: u32,
    pub arity: u32,
    pub universe_len: u32,
    pub universe_hash: u64,
    /// Whether mirror reduction shaped the recorded tree. A frontier only
    /// resumes under the same setting; the decision path is meaningless in
    /// the other tree.
    pub mirror: bool,
    /// Cumulative node entries across all segments, replay included.
    pub nodes: u64,
    pub steps: Vec<FrontierStep>,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum FrontierParseError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("missing or unsupported header (expected `# dgr-search frontier v1`)")]
    BadHeader,
}

impl Frontier {
    /// Versioned plain-text form, one step per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str("# dgr-search frontier v1\n");
        let _ = writeln!(out, "groups {}", self.groups);
        let _ = writeln!(out, "arity {}", self.arity);
        let _ = writeln!(out, "universe_len {}", self.universe_len);
        let _ = writeln!(out, "universe_hash {:016x}", self.universe_hash);
        let _ = writeln!(out, "mirror {}", u8::from(self.mirror));
        let _ = writeln!(out, "nodes {}", self.nodes);
        for step in &self.steps {
            match step {
                FrontierStep::Mark(v) => {
                    let _ = writeln!(out, "mark {v}");
                }
                FrontierStep::Skip(v) => {
                    let _ = writeln!(out, "skip {v}");
                }
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Frontier, FrontierParseError> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, h)) if h.trim() == "# dgr-search frontier v1" => {}
            _ => return Err(FrontierParseError::BadHeader),
        }
        let mut frontier = Frontier {
            groups: 0,
            arity: 0,
            universe_len: 0,
            universe_hash: 0,
            mirror: false,
            nodes: 0,
            steps: Vec::new(),
        };
        for (i, raw) in lines {
            let line = i + 1;
            let mut parts = raw.split_whitespace();
            let (Some(keyword), Some(value)) = (parts.next(), parts.next()) else {
                if raw.trim().is_empty() {
                    continue;
                }
                return Err(FrontierParseError::Malformed {
                    line,
                    message: format!("expected `keyword value`, got {raw:?}"),
                });
            };
            let malformed = |message: String| FrontierParseError::Malformed { line, message };
            match keyword {
                "groups" => {
                    frontier.groups = value.parse().map_err(|e| malformed(format!("{e}")))?
                }
                "arity" => frontier.arity = value.parse().map_err(|e| malformed(format!("{e}")))?,
                "universe_len" => {
                    frontier.universe_len = value.parse().map_err(|e| malformed(format!("{e}")))?
                }
                "universe_hash" => {
                    frontier.universe_hash = u64::from_str_radix(value, 16)
                        .map_err(|e| malformed(format!("{e}")))?
                }
                "mirror" => {
                    frontier.mirror = match value {
                        "0" => false,
                        "1" => true,
                        other => return Err(malformed(format!("mirror must be 0 or 1, got {other:?}"))),
                    }
                }
                "nodes" => frontier.nodes = value.parse().map_err(|e| malformed(format!("{e}")))?,
                "mark" => frontier.steps.push(FrontierStep::Mark(
                    value.parse().map_err(|e| malformed(format!("{e}")))?,
                )),
                "skip" => frontier.steps.push(FrontierStep::Skip(
                    value.parse().map_err(|e| malformed(format!("{e}")))?,
                )),
                other => {
                    return Err(malformed(format!("unknown keyword {other:?}")));
                }
            }
        }
        Ok(frontier)
    }
}

/// Result of a complete or interrupted search.
#[derive(Clone, Debug)]
pub enum SearchOutcome {
    Witness(DgrSet),
    /// The whole space was exhausted: no such DGR exists.
    ProvenAbsent,
    /// Node or time budget ran out; the frontier resumes the run.
    BudgetExhausted(Frontier),
}

/// A supplied frontier did not match the search it was replayed into.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ResumeError {
    #[error("frontier parameters mismatch: {0}")]
    ParameterMismatch(String),
    #[error("frontier step {index} is inconsistent with the search state: {message}")]
    InvalidStep { index: usize, message: String },
}

fn fnv1a(elems: &[u32]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for &e in elems {
        for b in e.to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
    }
    h
}

/// Searches for `groups` disjoint `arity`-mark Golomb rulers with marks drawn
/// from `universe` ({1..n} or arbitrary). The witness bound is the universe
/// maximum. Exhaustive unless a budget interrupts.
pub fn search_disjoint(
    universe: &MarkUniverse,
    groups: u32,
    arity: u32,
    config: &SearchConfig,
) -> Result<SearchOutcome, ResumeError> {
    assert!(groups >= 1 && arity >= 1, "groups and arity must be >= 1");
    if (universe.len() as u64) < groups as u64 * arity as u64 {
        // Pigeonhole: not enough marks.
        return Ok(SearchOutcome::ProvenAbsent);
    }
    let mut solver = Solver::new(universe, groups, arity, config, Sink::First)?;
    solver.run()
}

/// Searches {1..n}. Returns a witness, a proof of absence, or a resumable
/// frontier when the budget ran out.
pub fn find_dgr_exact(
    groups: u32,
    arity: u32,
    n: u32,
    config: &SearchConfig,
) -> Result<SearchOutcome, ResumeError> {
    search_disjoint(&MarkUniverse::range(n), groups, arity, config)
}

/// Collects up to `cap` distinct witnesses (every witness exactly once).
/// Mirror reduction is disabled so the enumeration is complete. The boolean
/// is true when the space was exhausted (all witnesses found).
pub fn enumerate_dgrs(
    universe: &MarkUniverse,
    groups: u32,
    arity: u32,
    cap: usize,
    config: &SearchConfig,
) -> Result<(Vec<DgrSet>, bool), ResumeError> {
    assert!(groups >= 1 && arity >= 1, "groups and arity must be >= 1");
    if (universe.len() as u64) < groups as u64 * arity as u64 || cap == 0 {
        return Ok((Vec::new(), cap > 0));
    }
    let mut config = config.clone();
    config.mirror_reduction = false;
    let mut solver = Solver::new(universe, groups, arity, &config, Sink::collect(cap))?;
    let outcome = solver.run()?;
    let witnesses = solver.take_collected();
    Ok(match outcome {
        SearchOutcome::ProvenAbsent => (witnesses, true),
        _ => (witnesses, false),
    })
}

enum Sink {
    First,
    Collect { out: Vec<DgrSet>, cap: usize },
}

impl Sink {
    fn collect(cap: usize) -> Sink {
        Sink::Collect {
            out: Vec::new(),
            cap,
        }
    }
}

#[derive(PartialEq, Eq, Clone, Copy, Debug)]
enum Flow {
    Found,
    Exhausted,
    Stopped,
}

struct Solver<'a> {
    elems: &'a [u32],
    groups: usize,
    arity: usize,
    witness_bound: u32,
    used: Vec<bool>,
    free_count: usize,
    slack: usize,
    /// Per-group difference sets; index g tracks the g-th ruler being built.
    diffs: Vec<BitSet>,
    group_marks: Vec<Vec<usize>>,
    trail: Vec<FrontierStep>,
    sigma: Option<u32>,
    max_used: u32,
    mirror: bool,
    bound_n: u32,
    nodes: u64,
    max_nodes: u64,
    deadline: Option<Instant>,
    checkpoint_path: Option<PathBuf>,
    checkpoint_every: u64,
    next_checkpoint: u64,
    replay: VecDeque<FrontierStep>,
    replay_base_nodes: u64,
    replay_error: Option<ResumeError>,
    /// Snapshot of the decision path taken at the moment a budget tripped;
    /// ancestors unwind (and pop the live trail) while Stopped propagates.
    stop_frontier: Option<Frontier>,
    found: Option<DgrSet>,
    sink: Sink,
}

impl<'a> Solver<'a> {
    fn new(
        universe: &'a MarkUniverse,
        groups: u32,
        arity: u32,
        config: &SearchConfig,
        sink: Sink,
    ) -> Result<Self, ResumeError> {
        let elems = universe.elements();
        let max_val = *elems.last().unwrap() as usize;
        let contiguous = universe.as_range();
        let mirror = config.mirror_reduction && contiguous.is_some();
        let mut replay = VecDeque::new();
        let mut replay_base_nodes = 0;
        if let Some(frontier) = &config.resume_from {
            if frontier.groups != groups
                || frontier.arity != arity
                || frontier.universe_len != elems.len() as u32
                || frontier.universe_hash != fnv1a(elems)
            {
                return Err(ResumeError::ParameterMismatch(format!(
                    "frontier is for groups={} arity={} universe_len={}, search is groups={groups} arity={arity} universe_len={}",
                    frontier.groups,
                    frontier.arity,
                    frontier.universe_len,
                    elems.len()
                )));
            }
            if frontier.mirror != mirror {
                return Err(ResumeError::ParameterMismatch(format!(
                    "frontier was recorded with mirror reduction {}, this search has it {}",
                    if frontier.mirror { "on" } else { "off" },
                    if mirror { "on" } else { "off" }
                )));
            }
            replay = frontier.steps.iter().copied().collect();
            replay_base_nodes = frontier.nodes;
        }
        Ok(Solver {
            elems,
            groups: groups as usize,
            arity: arity as usize,
            witness_bound: *elems.last().unwrap(),
            used: vec![false; elems.len()],
            free_count: elems.len(),
            slack: elems.len() - groups as usize * arity as usize,
            diffs: (0..groups).map(|_| BitSet::new(max_val + 1)).collect(),
            group_marks: Vec::with_capacity(groups as usize),
            trail: Vec::new(),
            sigma: None,
            max_used: 0,
            mirror,
            bound_n: contiguous.unwrap_or(0),
            nodes: 0,
            max_nodes: config.max_nodes.unwrap_or(u64::MAX),
            deadline: config.time_budget.map(|b| Instant::now() + b),
            checkpoint_path: config.checkpoint_path.clone(),
            checkpoint_every: config.checkpoint_every.max(1),
            next_checkpoint: config.checkpoint_every.max(1),
            replay,
            replay_base_nodes,
            replay_error: None,
            stop_frontier: None,
            found: None,
            sink,
        })
    }

    fn run(&mut self) -> Result<SearchOutcome, ResumeError> {
        let flow = self.search();
        if let Some(err) = self.replay_error.take() {
            return Err(err);
        }
        Ok(match flow {
            Flow::Found => SearchOutcome::Witness(self.found.take().expect("witness recorded")),
            Flow::Exhausted => SearchOutcome::ProvenAbsent,
            Flow::Stopped => {
                let frontier = self
                    .stop_frontier
                    .take()
                    .expect("every budget stop snapshots the frontier");
                self.write_checkpoint(&frontier);
                SearchOutcome::BudgetExhausted(frontier)
            }
        })
    }

    fn take_collected(&mut self) -> Vec<DgrSet> {
        match &mut self.sink {
            Sink::First => Vec::new(),
            Sink::Collect { out, .. } => std::mem::take(out),
        }
    }

    fn frontier(&self) -> Frontier {
        Frontier {
            groups: self.groups as u32,
            arity: self.arity as u32,
            universe_len: self.elems.len() as u32,
            universe_hash: fnv1a(self.elems),
            mirror: self.mirror,
            nodes: self.replay_base_nodes + self.nodes,
            steps: self.trail.clone(),
        }
    }

    fn write_checkpoint(&self, frontier: &Frontier) {
        // Best effort: a failed periodic checkpoint must not kill the search.
        if let Some(path) = &self.checkpoint_path {
            let tmp = path.with_extension("tmp");
            if std::fs::write(&tmp, frontier.to_text()).is_ok() {
                let _ = std::fs::rename(&tmp, path);
            }
        }
    }

    fn search(&mut self) -> Flow {
        self.nodes += 1;
        if self.nodes >= self.max_nodes {
            self.stop_frontier = Some(self.frontier());
            return Flow::Stopped;
        }
        if self.nodes >= self.next_checkpoint {
            self.next_checkpoint += self.checkpoint_every;
            if self.checkpoint_path.is_some() {
                let frontier = self.frontier();
                self.write_checkpoint(&frontier);
            }
        }
        if let Some(deadline) = self.deadline {
            if self.nodes & 8191 == 0 && Instant::now() >= deadline {
                self.stop_frontier = Some(self.frontier());
                return Flow::Stopped;
            }
        }
        let building = self
            .group_marks
            .last()
            .is_some_and(|g| g.len() < self.arity);
        if building {
            self.extend_group()
        } else {
            self.next_group()
        }
    }

    /// Decision point at a ruler boundary: the smallest free mark heads the
    /// next ruler, or is skipped permanently.
    fn next_group(&mut self) -> Flow {
        if self.group_marks.len() == self.groups {
            return self.emit_witness();
        }
        let remaining = self.groups - self.group_marks.len();
        if self.free_count < remaining * self.arity {
            return Flow::Exhausted;
        }
        let Some(s) = (0..self.elems.len()).find(|&i| !self.used[i]) else {
            return Flow::Exhausted;
        };
        let max_elem = *self.elems.last().unwrap();
        // Every remaining ruler starts at or above elems[s] and must span at
        // least the optimal length for `arity` marks.
        if self.elems[s] + known::min_length(self.arity) > max_elem {
            return Flow::Exhausted;
        }

        let mut skip_head_branch = match self.replay.pop_front() {
            None => false,
            Some(FrontierStep::Mark(v)) if v == self.elems[s] => false,
            Some(FrontierStep::Skip(v)) if v == self.elems[s] => true,
            Some(step) => {
                self.replay_error = Some(ResumeError::InvalidStep {
                    index: self.trail.len(),
                    message: format!(
                        "recorded {step:?} but the smallest free mark is {}",
                        self.elems[s]
                    ),
                });
                return Flow::Stopped;
            }
        };
        if self.mirror && !skip_head_branch {
            // Same mirror reduction as inside a ruler: a head raising the
            // maximum while sigma - 1 > n - head only completes into the
            // reflected half.
            let head = self.elems[s];
            let sigma = self.sigma.unwrap_or(head);
            if head > self.max_used && sigma - 1 > self.bound_n - head {
                skip_head_branch = true;
            }
        }

        if !skip_head_branch {
            // Branch A: elems[s] is the minimum of the next ruler.
            let saved_sigma = self.sigma;
            let saved_max = self.max_used;
            if self.sigma.is_none() {
                self.sigma = Some(self.elems[s]);
            }
            self.max_used = self.max_used.max(self.elems[s]);
            self.used[s] = true;
            self.free_count -= 1;
            self.group_marks.push(vec![s]);
            self.trail.push(FrontierStep::Mark(self.elems[s]));
            let flow = self.search();
            self.trail.pop();
            self.group_marks.pop();
            self.free_count += 1;
            self.used[s] = false;
            self.max_used = saved_max;
            self.sigma = saved_sigma;
            if flow != Flow::Exhausted {
                return flow;
            }
        }

        // Branch B: skip elems[s]; it will belong to no ruler.
        if self.slack > 0 {
            self.slack -= 1;
            self.used[s] = true;
            self.free_count -= 1;
            self.trail.push(FrontierStep::Skip(self.elems[s]));
            let flow = self.search();
            self.trail.pop();
            self.free_count += 1;
            self.used[s] = false;
            self.slack += 1;
            if flow != Flow::Exhausted {
                return flow;
            }
        }
        Flow::Exhausted
    }

    /// Decision point inside a ruler: choose its next (larger) mark.
    fn extend_group(&mut self) -> Flow {
        let g = self.group_marks.len() - 1;
        let placed = self.group_marks[g].len();
        // Marks from the candidate onward form a (arity - placed)-mark
        // Golomb ruler, bounding the candidate from above.
        let tail_len = known::min_length(self.arity - placed);
        let max_elem = *self.elems.last().unwrap();
        let start = self.group_marks[g].last().unwrap() + 1;

        let forced = match self.replay.pop_front() {
            None => None,
            Some(FrontierStep::Mark(v)) => match self.elems[start..]
                .binary_search(&v)
                .ok()
                .map(|off| start + off)
            {
                Some(idx) if !self.used[idx] => Some(idx),
                _ => {
                    self.replay_error = Some(ResumeError::InvalidStep {
                        index: self.trail.len(),
                        message: format!("recorded mark {v} is not placeable here"),
                    });
                    return Flow::Stopped;
                }
            },
            Some(step @ FrontierStep::Skip(_)) => {
                self.replay_error = Some(ResumeError::InvalidStep {
                    index: self.trail.len(),
                    message: format!("recorded {step:?} inside a ruler"),
                });
                return Flow::Stopped;
            }
        };

        let mut i = forced.unwrap_or(start);
        while i < self.elems.len() {
            // Not enough marks left for the rest of this ruler.
            if self.elems.len() - i < self.arity - placed {
                break;
            }
            if self.used[i] {
                i += 1;
                continue;
            }
            let c = self.elems[i];
            if c + tail_len > max_elem {
                // Candidates are ascending: all later ones are dead too.
                break;
            }
            if self.mirror && c > self.max_used {
                if let Some(sigma) = self.sigma {
                    // Mirror reduction: search only placements with
                    // sigma - 1 <= n - lambda; the reflected twin covers the
                    // rest. Larger candidates only increase lambda.
                    if sigma - 1 > self.bound_n - c {
                        break;
                    }
                }
            }
            let conflict = self.group_marks[g]
                .iter()
                .any(|&j| self.diffs[g].contains((c - self.elems[j]) as usize));
            if conflict {
                i += 1;
                continue;
            }

            // Place c into the current ruler.
            for idx in 0..self.group_marks[g].len() {
                let j = self.group_marks[g][idx];
                self.diffs[g].insert((c - self.elems[j]) as usize);
            }
            self.group_marks[g].push(i);
            self.used[i] = true;
            self.free_count -= 1;
            let saved_max = self.max_used;
            self.max_used = self.max_used.max(c);
            self.trail.push(FrontierStep::Mark(c));

            let flow = self.search();

            self.trail.pop();
            self.max_used = saved_max;
            self.free_count += 1;
            self.used[i] = false;
            self.group_marks[g].pop();
            for idx in 0..self.group_marks[g].len() {
                let j = self.group_marks[g][idx];
                self.diffs[g].remove((c - self.elems[j]) as usize);
            }

            if flow != Flow::Exhausted {
                return flow;
            }
            i += 1;
        }
        Flow::Exhausted
    }

    fn emit_witness(&mut self) -> Flow {
        let rulers: Vec<Ruler> = self
            .group_marks
            .iter()
            .map(|g| {
                Ruler::from_sorted_unchecked(g.iter().map(|&i| self.elems[i]).collect())
            })
            .collect();
        let dgr = DgrSet::new(rulers, self.witness_bound)
            .expect("search state always forms a valid DGR");
        match &mut self.sink {
            Sink::First => {
                self.found = Some(dgr);
                Flow::Found
            }
            Sink::Collect { out, cap } => {
                out.push(dgr);
                if out.len() >= *cap {
                    self.stop_frontier = Some(self.frontier());
                    Flow::Stopped
                } else {
                    // Keep searching siblings for more witnesses.
                    Flow::Exhausted
                }
            }
        }
    }
}

/// Configuration for the ascending H(I,J) scan.
#[derive(Clone, Debug, Default)]
pub struct HScanConfig {
    /// Budget applied independently at each candidate n.
    pub per_step: SearchConfig,
    /// Stop scanning above this n even without a witness. With the default
    /// (`None`) the scan stops at the first budget-exhausted level instead.
    pub max_value: Option<u32>,
}

/// Ascending scan n = I*J, I*J+1, ... for the least n admitting an
/// (I,J,n)-DGR.
///
/// Status is `Exact` when every level below the witness was exhausted,
/// `UpperBound` when some level was only partially searched, and
/// `LowerBound` (value = first unresolved level) when no witness was found
/// in range.
pub fn compute_h(groups: u32, arity: u32, config: &HScanConfig) -> HValue {
    assert!(groups >= 1 && arity >= 1, "groups and arity must be >= 1");
    let start = groups * arity;
    let mut unresolved: Vec<u32> = Vec::new();
    let mut n = start;
    loop {
        if let Some(cap) = config.max_value {
            if n > cap {
                return h_lower_bound(groups, arity, n, &unresolved);
            }
        }
        let mut per_step = config.per_step.clone();
        per_step.resume_from = None;
        let outcome = find_dgr_exact(groups, arity, n, &per_step)
            .expect("no frontier is supplied on scan steps");
        match outcome {
            SearchOutcome::Witness(witness) => {
                let exact = unresolved.is_empty();
                return HValue {
                    groups,
                    arity,
                    value: n,
                    status: if exact {
                        HStatus::Exact
                    } else {
                        HStatus::UpperBound
                    },
                    provenance: if exact {
                        Provenance::ComputedExact
                    } else {
                        Provenance::ComputedUb
                    },
                    floor: None,
                    witness: Some(witness),
                    note: if exact {
                        Some(format!("absence proven for all n < {n}"))
                    } else {
                        Some(format!("unresolved levels: {unresolved:?}"))
                    },
                };
            }
            SearchOutcome::ProvenAbsent => {
                n += 1;
            }
            SearchOutcome::BudgetExhausted(_) => {
                unresolved.push(n);
                match config.max_value {
                    // Without a cap, a budget wall means the scan cannot
                    // promise anything further: report the proven floor.
                    None => return h_lower_bound(groups, arity, n, &unresolved),
                    Some(_) => n += 1,
                }
            }
        }
    }
}

fn h_lower_bound(groups: u32, arity: u32, n: u32, unresolved: &[u32]) -> HValue {
    // The least level not proven absent bounds H from below.
    let floor = unresolved.first().copied().unwrap_or(n);
    HValue {
        groups,
        arity,
        value: floor,
        status: HStatus::LowerBound,
        provenance: Provenance::ComputedUb,
        floor: None,
        witness: None,
        note: Some(if unresolved.is_empty() {
            format!("absence proven for all n < {floor}; scan stopped")
        } else {
            format!("absence proven for all n < {floor}; unresolved levels: {unresolved:?}")
        }),
    }
}

/// How [`build_conflict_graph`] stores adjacency.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum GraphMode {
    /// Materialize adjacency rows if they fit the memory cap, otherwise
    /// fall back to streaming.
    #[default]
    Auto,
    /// Require materialized adjacency; error if over the cap.
    Materialized,
    /// Never materialize; adjacency is recomputed from marks on the fly.
    Streaming,
}

#[derive(Clone, Debug)]
pub struct GraphConfig {
    pub memory_cap_bytes: u64,
    pub mode: GraphMode,
}

impl Default for GraphConfig {
    fn default() -> Self {
        GraphConfig {
            memory_cap_bytes: 2 << 30,
            mode: GraphMode::Auto,
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("{what} needs about {need} bytes, over the cap of {cap}")]
    MemoryCap { what: String, need: u64, cap: u64 },
}

/// The conflict graph on J-mark Golomb rulers within {1..n}: vertices in
/// lexicographic order, an edge where two rulers share a mark. Size-I
/// independent sets are exactly the (I,J,n)-DGR.
pub struct ConflictGraph {
    arity: u32,
    bound: u32,
    rulers: Vec<Ruler>,
    adjacency: Option<Vec<BitSet>>,
}

pub fn build_conflict_graph(
    arity: u32,
    bound: u32,
    config: &GraphConfig,
) -> Result<ConflictGraph, GraphError> {
    let rulers: Vec<Ruler> =
        enumerate_rulers(arity as usize, &MarkUniverse::range(bound), &[]).collect();
    let v = rulers.len() as u64;
    let row_bytes = v.div_ceil(64) * 8 + 48;
    let adjacency_bytes = v.saturating_mul(row_bytes);
    let materialize = match config.mode {
        GraphMode::Streaming => false,
        GraphMode::Materialized => {
            if adjacency_bytes > config.memory_cap_bytes {
                return Err(GraphError::MemoryCap {
                    what: format!("materialized adjacency for {v} vertices"),
                    need: adjacency_bytes,
                    cap: config.memory_cap_bytes,
                });
            }
            true
        }
        GraphMode::Auto => adjacency_bytes <= config.memory_cap_bytes,
    };
    let adjacency = materialize.then(|| {
        let mut rows: Vec<BitSet> = (0..rulers.len())
            .map(|_| BitSet::new(rulers.len()))
            .collect();
        for i in 0..rulers.len() {
            for j in i + 1..rulers.len() {
                if rulers[i].intersects(&rulers[j]) {
                    rows[i].insert(j);
                    rows[j].insert(i);
                }
            }
        }
        rows
    });
    Ok(ConflictGraph {
        arity,
        bound,
        rulers,
        adjacency,
    })
}

impl ConflictGraph {
    pub fn vertex_count(&self) -> usize {
        self.rulers.len()
    }

    pub fn arity(&self) -> u32 {
        self.arity
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn is_materialized(&self) -> bool {
        self.adjacency.is_some()
    }

    pub fn vertex(&self, v: usize) -> &Ruler {
        &self.rulers[v]
    }

    /// Vertex id of the given ruler, if it is one (right arity, in range;
    /// every such Golomb ruler is a vertex).
    pub fn vertex_id(&self, r: &Ruler) -> Option<usize> {
        self.rulers.binary_search(r).ok()
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        match &self.adjacency {
            Some(rows) => rows[u].contains(v),
            None => self.rulers[u].intersects(&self.rulers[v]),
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum IsError {
    #[error("seed ruler {0} is not a vertex of this graph")]
    SeedNotInGraph(String),
    #[error("seed rulers {first} and {second} intersect")]
    AdjacentSeed { first: usize, second: usize },
    #[error("target size {target} is below the seed size {seed}")]
    TargetBelowSeed { target: u32, seed: usize },
}

/// Outcome of an independent-set search (not resumable).
#[derive(Clone, Debug)]
pub enum IsOutcome {
    Witness(DgrSet),
    ProvenAbsent,
    BudgetExhausted,
}

#[derive(Clone, Debug, Default)]
pub struct IsConfig {
    pub max_nodes: Option<u64>,
    pub time_budget: Option<Duration>,
}

/// Extends `seed` to an independent set of `target` vertices inside the
/// common non-neighborhood of the seed; exhaustive within that subspace.
/// Vertices are tried in ascending (lexicographic) order.
pub fn find_independent_set(
    graph: &ConflictGraph,
    target: u32,
    seed: &[Ruler],
    config: &IsConfig,
) -> Result<IsOutcome, IsError> {
    let mut seed_ids = Vec::with_capacity(seed.len());
    for r in seed {
        let id = graph
            .vertex_id(r)
            .ok_or_else(|| IsError::SeedNotInGraph(r.to_string()))?;
        seed_ids.push(id);
    }
    for a in 0..seed_ids.len() {
        for b in a + 1..seed_ids.len() {
            if graph.adjacent(seed_ids[a], seed_ids[b]) {
                return Err(IsError::AdjacentSeed { first: a, second: b });
            }
        }
    }
    if (target as usize) < seed_ids.len() {
        return Err(IsError::TargetBelowSeed {
            target,
            seed: seed_ids.len(),
        });
    }

    let need = target as usize - seed_ids.len();
    // Candidates: common non-neighborhood of the seed, ascending.
    let candidates: Vec<usize> = (0..graph.vertex_count())
        .filter(|&v| !seed_ids.contains(&v) && seed_ids.iter().all(|&s| !graph.adjacent(s, v)))
        .collect();

    struct IsSolver<'g> {
        graph: &'g ConflictGraph,
        candidates: Vec<usize>,
        chosen: Vec<usize>,
        need: usize,
        nodes: u64,
        max_nodes: u64,
        deadline: Option<Instant>,
    }
    enum IsFlow {
        Found,
        Exhausted,
        Stopped,
    }
    impl IsSolver<'_> {
        fn extend(&mut self, start: usize) -> IsFlow {
            if self.chosen.len() == self.need {
                return IsFlow::Found;
            }
            for pos in start..self.candidates.len() {
                self.nodes += 1;
                if self.nodes >= self.max_nodes {
                    return IsFlow::Stopped;
                }
                if let Some(deadline) = self.deadline {
                    if self.nodes & 8191 == 0 && Instant::now() >= deadline {
                        return IsFlow::Stopped;
                    }
                }
                if self.candidates.len() - pos < self.need - self.chosen.len() {
                    return IsFlow::Exhausted;
                }
                let v = self.candidates[pos];
                if self
                    .chosen
                    .iter()
                    .any(|&u| self.graph.adjacent(u, v))
                {
                    continue;
                }
                self.chosen.push(v);
                match self.extend(pos + 1) {
                    IsFlow::Exhausted => {
                        self.chosen.pop();
                    }
                    other => return other,
                }
            }
            IsFlow::Exhausted
        }
    }

    let mut solver = IsSolver {
        graph,
        candidates,
        chosen: Vec::with_capacity(need),
        need,
        nodes: 0,
        max_nodes: config.max_nodes.unwrap_or(u64::MAX),
        deadline: config.time_budget.map(|b| Instant::now() + b),
    };
    if need == 0 {
        let rulers: Vec<Ruler> = seed.to_vec();
        let dgr = DgrSet::new(rulers, graph.bound).expect("non-adjacent seed is a valid DGR");
        return Ok(IsOutcome::Witness(dgr));
    }
    match solver.extend(0) {
        IsFlow::Found => {
            let mut rulers: Vec<Ruler> = seed.to_vec();
            rulers.extend(solver.chosen.iter().map(|&v| graph.vertex(v).clone()));
            let dgr = DgrSet::new(rulers, graph.bound)
                .expect("independent set is a valid DGR");
            Ok(IsOutcome::Witness(dgr))
        }
        IsFlow::Exhausted => Ok(IsOutcome::ProvenAbsent),
        IsFlow::Stopped => Ok(IsOutcome::BudgetExhausted),
    }
}
