//! Depth-first branch and bound.
//!
//! Branching follows two phases. Phase one picks among the assignment and
//! score variables with dom/wdeg (domain size over the summed failure weights
//! of attached constraints, ties to the smaller variable index), overridden by
//! last-conflict reasoning: a variable whose branch just failed is picked
//! again until it gets assigned. Phase two assigns the remaining auxiliary
//! variables (`occ0`, `obj`, and the diversity variable when present) in
//! order. Every decision is binary: `x = v` on the left, `x != v` on the
//! right, with `v` the smallest value (the largest for a maximized variable).

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::engine::{Network, VarId};
use crate::instance::Instance;
use crate::model::{build_network, Mapping, Model, ModelError, ModelOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Minimize,
    /// Every solution with exactly this cost.
    EnumerateAtCost(i64),
    /// Stop at the first solution.
    Satisfy,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    pub mode: Mode,
    pub time_limit: Option<Duration>,
    pub backtrack_limit: Option<u64>,
    pub strong_alldiff: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            mode: Mode::Minimize,
            time_limit: None,
            backtrack_limit: None,
            strong_alldiff: false,
        }
    }
}

impl SearchConfig {
    pub fn model_options(&self) -> ModelOptions {
        ModelOptions {
            strong_alldiff: self.strong_alldiff,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SearchStats {
    /// Retreats from failed nodes.
    pub backtracks: u64,
    pub nodes: u64,
    /// Wall-clock milliseconds.
    pub time_ms: f64,
    /// The search space was exhausted (or, when satisfying, a solution found)
    /// without hitting a limit.
    pub proven: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolutionRecord {
    pub mapping: Mapping,
    pub cost: i64,
    pub stats: SearchStats,
}

impl SolutionRecord {
    pub fn nlink(&self) -> usize {
        self.mapping.iter().filter(|t| t.is_some()).count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Optimal,
    Infeasible,
    Limit,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Optimal => "optimal",
            Status::Infeasible => "infeasible",
            Status::Limit => "limit",
        })
    }
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    /// Solutions in the order found. When minimizing, each one improves on
    /// the previous and the last is the best.
    pub solutions: Vec<SolutionRecord>,
    pub stats: SearchStats,
}

impl SearchOutcome {
    pub fn best(&self) -> Option<&SolutionRecord> {
        self.solutions.last()
    }

    pub fn status(&self) -> Status {
        match (self.stats.proven, self.solutions.is_empty()) {
            (false, _) => Status::Limit,
            (true, true) => Status::Infeasible,
            (true, false) => Status::Optimal,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Objective {
    None,
    Minimize(VarId),
    Maximize(VarId),
}

/// The branching scheme: which variables, in which phase.
pub(crate) struct Brancher {
    pub phase1: Vec<VarId>,
    pub phase2: Vec<VarId>,
}

impl Brancher {
    pub fn for_model(model: &Model) -> Self {
        let v = &model.vars;
        let mut phase1 = v.xq.clone();
        phase1.extend_from_slice(&v.xs);
        Self {
            phase1,
            phase2: vec![v.occ0, v.obj],
        }
    }
}

struct Dfs<'a> {
    net: &'a mut Network,
    brancher: &'a Brancher,
    objective: Objective,
    bound: Option<i64>,
    last_conflict: Option<VarId>,
    stats: SearchStats,
    start: Instant,
    time_limit: Option<Duration>,
    backtrack_limit: Option<u64>,
}

impl Dfs<'_> {
    fn value_for(&self, x: VarId) -> i64 {
        let d = self.net.domains();
        match self.objective {
            Objective::Maximize(y) if y == x => d.max(x),
            _ => d.min(x),
        }
    }

    fn select(&mut self) -> Option<(VarId, i64)> {
        if let Some(x) = self.last_conflict {
            if !self.net.domains().is_fixed(x) {
                return Some((x, self.value_for(x)));
            }
            self.last_conflict = None;
        }
        let d = self.net.domains();
        let mut best: Option<(VarId, u64, u64)> = None;
        for &x in &self.brancher.phase1 {
            let size = d.size(x);
            if size <= 1 {
                continue;
            }
            let w = self.net.wdeg(x).max(1);
            // size/w < best_size/best_w, compared without division
            let better = match best {
                None => true,
                Some((bx, bs, bw)) => {
                    let lhs = (size as u128) * (bw as u128);
                    let rhs = (bs as u128) * (w as u128);
                    lhs < rhs || (lhs == rhs && x < bx)
                }
            };
            if better {
                best = Some((x, size, w));
            }
        }
        if let Some((x, _, _)) = best {
            return Some((x, self.value_for(x)));
        }
        let x = self
            .brancher
            .phase2
            .iter()
            .copied()
            .find(|&x| !d.is_fixed(x))?;
        Some((x, self.value_for(x)))
    }

    /// Applies the incumbent bound and propagates.
    fn consistent(&mut self) -> bool {
        let ok = match (self.objective, self.bound) {
            (Objective::Minimize(obj), Some(b)) => {
                self.net.domains_mut().set_max(obj, b - 1).is_ok()
            }
            (Objective::Maximize(obj), Some(b)) => {
                self.net.domains_mut().set_min(obj, b + 1).is_ok()
            }
            _ => true,
        };
        if !ok {
            self.net.clear_queue();
            return false;
        }
        self.net.propagate().is_ok()
    }

    fn limit_hit(&self) -> bool {
        if let Some(max) = self.backtrack_limit {
            if self.stats.backtracks >= max {
                return true;
            }
        }
        if let Some(limit) = self.time_limit {
            if self.start.elapsed() >= limit {
                return true;
            }
        }
        false
    }

    /// Returns true when the search ended without hitting a limit.
    fn run(&mut self, on_solution: &mut dyn FnMut(&Network) -> bool) -> bool {
        let mut decisions: Vec<(VarId, i64)> = Vec::new();
        let mut ok = self.consistent();
        loop {
            if ok {
                if self.limit_hit() {
                    return false;
                }
                match self.select() {
                    None => {
                        if !on_solution(self.net) {
                            return true;
                        }
                        if let Objective::Minimize(obj) | Objective::Maximize(obj) = self.objective
                        {
                            self.bound = self.net.domains().value(obj);
                        }
                    }
                    Some((x, v)) => {
                        self.stats.nodes += 1;
                        self.net.push_depth();
                        decisions.push((x, v));
                        ok = match self.net.domains_mut().assign(x, v) {
                            Ok(_) => self.consistent(),
                            Err(_) => {
                                self.net.clear_queue();
                                false
                            }
                        };
                        if !ok {
                            self.stats.backtracks += 1;
                            self.last_conflict = Some(x);
                        }
                        continue;
                    }
                }
            }
            // retreat to the closest open right branch
            loop {
                if self.limit_hit() {
                    return false;
                }
                let Some((x, v)) = decisions.pop() else {
                    return true;
                };
                self.net.pop_depth().expect("one level per decision");
                self.stats.nodes += 1;
                ok = match self.net.domains_mut().remove(x, v) {
                    Ok(_) => self.consistent(),
                    Err(_) => {
                        self.net.clear_queue();
                        false
                    }
                };
                if ok {
                    break;
                }
                self.stats.backtracks += 1;
                self.last_conflict = Some(x);
            }
        }
    }
}

/// Runs a search over `net`, calling `on_solution` on every fully assigned
/// state it reaches. The callback returns false to stop.
pub(crate) fn run_search(
    net: &mut Network,
    brancher: &Brancher,
    objective: Objective,
    cfg: &SearchConfig,
    on_solution: &mut dyn FnMut(&Network) -> bool,
) -> SearchStats {
    let start = Instant::now();
    let mut dfs = Dfs {
        net,
        brancher,
        objective,
        bound: None,
        last_conflict: None,
        stats: SearchStats::default(),
        start,
        time_limit: cfg.time_limit,
        backtrack_limit: cfg.backtrack_limit,
    };
    let base_depth = dfs.net.depth();
    dfs.net.push_depth();
    let completed = dfs.run(on_solution);
    while dfs.net.depth() > base_depth {
        dfs.net.pop_depth().expect("balanced trail");
    }
    let mut stats = dfs.stats;
    stats.proven = completed;
    stats.time_ms = start.elapsed().as_secs_f64() * 1e3;
    stats
}

/// Search according to `cfg.mode` on an already built model.
pub fn search_model(model: &mut Model, cfg: &SearchConfig) -> SearchOutcome {
    if !model.root_consistent() {
        return SearchOutcome {
            solutions: Vec::new(),
            stats: SearchStats {
                proven: true,
                ..Default::default()
            },
        };
    }
    let brancher = Brancher::for_model(model);
    let obj = model.vars.obj;
    let objective = match cfg.mode {
        Mode::Minimize => Objective::Minimize(obj),
        Mode::EnumerateAtCost(_) | Mode::Satisfy => Objective::None,
    };
    if let Mode::EnumerateAtCost(c) = cfg.mode {
        let fixed = model.net.domains_mut().assign(obj, c).is_ok() && model.net.propagate().is_ok();
        if !fixed {
            model.mark_inconsistent();
            return SearchOutcome {
                solutions: Vec::new(),
                stats: SearchStats {
                    proven: true,
                    ..Default::default()
                },
            };
        }
    }
    let stop_at_first = cfg.mode == Mode::Satisfy;
    let mut found: Vec<(Mapping, i64)> = Vec::new();
    let mut net = std::mem::take(&mut model.net);
    let stats = run_search(&mut net, &brancher, objective, cfg, &mut |n: &Network| {
        found.push(model.decode(n.domains()));
        !stop_at_first
    });
    model.net = net;
    let mut solutions: Vec<SolutionRecord> = found
        .into_iter()
        .map(|(mapping, cost)| SolutionRecord {
            mapping,
            cost,
            stats: stats.clone(),
        })
        .collect();
    if matches!(cfg.mode, Mode::EnumerateAtCost(_)) {
        solutions.sort_by(|a, b| a.mapping.cmp(&b.mapping));
        solutions.dedup_by(|a, b| a.mapping == b.mapping);
    }
    SearchOutcome { solutions, stats }
}

/// Builds the network for `nlink` and minimizes.
///
/// The reported time covers model construction and search.
pub fn minimize(
    inst: &Instance,
    nlink: usize,
    cfg: &SearchConfig,
) -> Result<SearchOutcome, ModelError> {
    let start = Instant::now();
    let mut model = build_network(inst, nlink, cfg.model_options())?;
    let cfg = SearchConfig {
        mode: Mode::Minimize,
        ..cfg.clone()
    };
    Ok(with_total_time(search_model(&mut model, &cfg), start))
}

fn with_total_time(mut out: SearchOutcome, start: Instant) -> SearchOutcome {
    out.stats.time_ms = start.elapsed().as_secs_f64() * 1e3;
    for s in &mut out.solutions {
        s.stats.time_ms = out.stats.time_ms;
    }
    out
}

/// Every distinct mapping with cost exactly `c_opt`, from a fresh network.
pub fn enumerate_optimal(
    inst: &Instance,
    nlink: usize,
    cfg: &SearchConfig,
    c_opt: i64,
) -> Result<SearchOutcome, ModelError> {
    let start = Instant::now();
    let mut model = build_network(inst, nlink, cfg.model_options())?;
    let cfg = SearchConfig {
        mode: Mode::EnumerateAtCost(c_opt),
        ..cfg.clone()
    };
    Ok(with_total_time(search_model(&mut model, &cfg), start))
}

/// Minimize, then enumerate all optima when the optimum was proven.
pub fn all_optimal(
    inst: &Instance,
    nlink: usize,
    cfg: &SearchConfig,
) -> Result<SearchOutcome, ModelError> {
    let first = minimize(inst, nlink, cfg)?;
    match (first.status(), first.best()) {
        (Status::Optimal, Some(best)) => {
            let mut all = enumerate_optimal(inst, nlink, cfg, best.cost)?;
            all.stats.backtracks += first.stats.backtracks;
            all.stats.nodes += first.stats.nodes;
            all.stats.time_ms += first.stats.time_ms;
            Ok(all)
        }
        _ => Ok(first),
    }
}

#[derive(Debug, Clone)]
pub struct NlinkResult {
    pub nlink: usize,
    pub outcome: SearchOutcome,
}

impl NlinkResult {
    /// Cost per mapped fragment of the best solution.
    pub fn ratio(&self) -> Option<f64> {
        self.outcome
            .best()
            .map(|b| b.cost as f64 / self.nlink as f64)
    }
}

/// One independent minimization per `nlink` in `1..=n_query`.
pub fn sweep_nlink(inst: &Instance, cfg: &SearchConfig) -> Result<Vec<NlinkResult>, ModelError> {
    (1..=inst.n_query())
        .map(|nlink| {
            let outcome = if cfg.mode == Mode::Minimize {
                minimize(inst, nlink, cfg)?
            } else {
                all_optimal(inst, nlink, cfg)?
            };
            Ok(NlinkResult { nlink, outcome })
        })
        .collect()
}

/// Orders sweep results by increasing cost per mapped fragment; infeasible
/// entries go last, in nlink order.
pub fn sort_by_ratio(results: &mut [NlinkResult]) {
    results.sort_by(|a, b| match (a.ratio(), b.ratio()) {
        (Some(x), Some(y)) => x.total_cmp(&y).then(a.nlink.cmp(&b.nlink)),
        (Some(_), None) => std::cmp::Ordering::Less,
        (None, Some(_)) => std::cmp::Ordering::Greater,
        (None, None) => a.nlink.cmp(&b.nlink),
    });
}
