//! Maximally diverse near-optimal solutions.
//!
//! After the optimum, each further solution maximizes a variable `yd` bounded
//! by its accumulated Hamming distance to every archived solution plus a
//! running constant `c`, subject to the cost staying within `gap` of the
//! optimum. After each iteration `c` grows by the achieved `yd`.

use serde::Serialize;

use crate::engine::{Domains, Network, PropResult, Propagator, VarId};
use crate::instance::Instance;
use crate::model::{build_network, Mapping, ModelError};
use crate::search::{
    minimize, run_search, Brancher, Objective, SearchConfig, SearchStats, SolutionRecord,
};

/// `yd <= c + Σ_j Σ_i [x_i != archive[j][i]]`.
///
/// Each coordinate contributes independently, so per coordinate the largest
/// reachable contribution is computed from the current domain; `yd` is
/// capped by the total, and values whose choice would lose more than the
/// remaining slack over `min(yd)` are removed.
pub struct Diversity {
    xs: Vec<VarId>,
    yd: VarId,
    archive: Vec<Vec<i64>>,
    c: i64,
}

impl Diversity {
    pub fn new(xs: Vec<VarId>, yd: VarId, archive: Vec<Vec<i64>>, c: i64) -> Self {
        assert!(
            !archive.is_empty(),
            "diversity needs at least one archived assignment"
        );
        assert!(archive.iter().all(|a| a.len() == xs.len()));
        Self { xs, yd, archive, c }
    }

    /// Archived values at coordinate `i` with their multiplicities.
    fn column(&self, i: usize) -> Vec<(i64, i64)> {
        let mut vals: Vec<i64> = self.archive.iter().map(|a| a[i]).collect();
        vals.sort_unstable();
        let mut out: Vec<(i64, i64)> = Vec::new();
        for v in vals {
            match out.last_mut() {
                Some((w, n)) if *w == v => *n += 1,
                _ => out.push((v, 1)),
            }
        }
        out
    }
}

impl Propagator for Diversity {
    fn scope(&self) -> Vec<VarId> {
        let mut s = self.xs.clone();
        s.push(self.yd);
        s
    }

    fn propagate(&mut self, doms: &mut Domains) -> PropResult {
        let m = self.archive.len() as i64;
        let mut columns = Vec::with_capacity(self.xs.len());
        let mut best = Vec::with_capacity(self.xs.len());
        let mut total = self.c;
        for (i, &x) in self.xs.iter().enumerate() {
            let col = self.column(i);
            let archived_present = col.iter().filter(|(v, _)| doms.contains(x, *v)).count() as u64;
            let max_i = if doms.size(x) > archived_present {
                m
            } else {
                col.iter()
                    .filter(|(v, _)| doms.contains(x, *v))
                    .map(|(_, n)| m - n)
                    .max()
                    .unwrap_or(0)
            };
            total += max_i;
            best.push(max_i);
            columns.push(col);
        }
        doms.set_max(self.yd, total)?;
        let slack = total - doms.min(self.yd);
        for (i, &x) in self.xs.iter().enumerate() {
            for &(v, n) in &columns[i] {
                if best[i] - (m - n) > slack {
                    doms.remove(x, v)?;
                }
            }
        }
        Ok(())
    }

    fn idempotent(&self) -> bool {
        true
    }

    fn name(&self) -> &'static str {
        "diversity"
    }
}

pub fn post_diversity(net: &mut Network, xs: &[VarId], yd: VarId, archive: Vec<Vec<i64>>, c: i64) {
    net.post(Box::new(Diversity::new(xs.to_vec(), yd, archive, c)));
}

/// Coordinates where two mappings differ.
pub fn hamming(a: &[Option<usize>], b: &[Option<usize>]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// Upper bound used for the domain of `yd` at each iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum YdBound {
    /// `[0, n_Q + c]`.
    #[default]
    Published,
    /// `[0, |archive| * n_Q + c]`, the largest value the sum can reach.
    Widened,
}

impl YdBound {
    pub fn upper(self, n_query: usize, archive_len: usize, c: i64) -> i64 {
        match self {
            YdBound::Published => n_query as i64 + c,
            YdBound::Widened => (archive_len * n_query) as i64 + c,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DiverseSolution {
    pub mapping: Mapping,
    pub cost: i64,
    /// Achieved `yd`; absent for the first (optimal) solution.
    pub yd: Option<i64>,
    pub hamming_to_first: usize,
    /// Index of an earlier solution with the same mapping.
    pub duplicate_of: Option<usize>,
    pub stats: SearchStats,
}

/// Allowed cost increase over the optimum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Gap {
    Absolute(i64),
    /// Percent of the optimum, rounded down.
    Percent(u32),
}

impl Gap {
    pub fn resolve(self, optimum: i64) -> i64 {
        match self {
            Gap::Absolute(g) => g,
            Gap::Percent(p) => optimum * i64::from(p) / 100,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DiverseOutcome {
    pub solutions: Vec<DiverseSolution>,
    /// Statistics of the initial minimization.
    pub optimum_stats: SearchStats,
    pub bound: YdBound,
    /// The cost ceiling `O[0] + gap`, once the optimum is known.
    pub max_cost: Option<i64>,
    /// Every search ran to completion.
    pub proven: bool,
}

fn to_internal(mapping: &[Option<usize>]) -> Vec<i64> {
    mapping
        .iter()
        .map(|t| t.map_or(0, |t| t as i64 + 1))
        .collect()
}

fn push_solution(out: &mut Vec<DiverseSolution>, rec: SolutionRecord, yd: Option<i64>) {
    let hamming_to_first = out.first().map_or(0, |f| hamming(&f.mapping, &rec.mapping));
    let duplicate_of = out.iter().position(|s| s.mapping == rec.mapping);
    out.push(DiverseSolution {
        mapping: rec.mapping,
        cost: rec.cost,
        yd,
        hamming_to_first,
        duplicate_of,
        stats: rec.stats,
    });
}

/// Up to `k` solutions: the optimum, then `k - 1` diversity-maximizing
/// solutions with cost at most `optimum + gap`.
pub fn diverse_solutions(
    inst: &Instance,
    nlink: usize,
    k: usize,
    gap: Gap,
    cfg: &SearchConfig,
    bound: YdBound,
) -> Result<DiverseOutcome, ModelError> {
    assert!(k >= 1);
    let first = minimize(inst, nlink, cfg)?;
    let mut proven = first.stats.proven;
    let mut out = DiverseOutcome {
        solutions: Vec::new(),
        optimum_stats: first.stats.clone(),
        bound,
        max_cost: None,
        proven,
    };
    let Some(best) = first.best().cloned() else {
        return Ok(out);
    };
    let gap = gap.resolve(best.cost);
    assert!(gap >= 0, "the cost gap must be non-negative");
    let max_cost = best.cost + gap;
    out.max_cost = Some(max_cost);
    let mut archive = vec![to_internal(&best.mapping)];
    let mut solutions = Vec::new();
    push_solution(
        &mut solutions,
        SolutionRecord {
            stats: first.stats.clone(),
            ..best
        },
        None,
    );
    let mut c = 0i64;
    let n_q = inst.n_query();

    while solutions.len() < k {
        let mut model = build_network(inst, nlink, cfg.model_options())?;
        if !model.root_consistent() {
            break;
        }
        let obj = model.vars.obj;
        let yd = model
            .net
            .new_interval_var(0, bound.upper(n_q, archive.len(), c));
        let xq = model.vars.xq.clone();
        post_diversity(&mut model.net, &xq, yd, archive.clone(), c);
        if model.net.domains_mut().set_max(obj, max_cost).is_err() || model.net.propagate().is_err()
        {
            break;
        }
        let mut brancher = Brancher::for_model(&model);
        brancher.phase2.push(yd);
        let mut found: Vec<(Mapping, i64, i64)> = Vec::new();
        let mut net = std::mem::take(&mut model.net);
        let stats = run_search(
            &mut net,
            &brancher,
            Objective::Maximize(yd),
            cfg,
            &mut |n: &Network| {
                let (mapping, cost) = model.decode(n.domains());
                found.push((mapping, cost, n.domains().value(yd).unwrap()));
                true
            },
        );
        proven &= stats.proven;
        let Some((mapping, cost, y)) = found.pop() else {
            break;
        };
        archive.push(to_internal(&mapping));
        c += y;
        push_solution(
            &mut solutions,
            SolutionRecord {
                mapping,
                cost,
                stats,
            },
            Some(y),
        );
    }
    out.solutions = solutions;
    out.proven = proven;
    Ok(out)
}
