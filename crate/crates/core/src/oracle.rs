//! Brute-force reference solver.
//!
//! Works straight from the definition of a feasible mapping and shares
//! nothing with the constraint model except the [`Instance`] type: it
//! enumerates connected query subsets, then every injective edge-preserving
//! assignment of each subset onto real target fragments. Exponential; meant
//! for tests and debugging on small instances.

use std::collections::VecDeque;

use crate::instance::Instance;

/// Largest query the oracle agrees to enumerate.
pub const ORACLE_MAX_QUERY: usize = 12;

pub type Mapping = Vec<Option<usize>>;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("query has {0} fragments; the oracle refuses more than {ORACLE_MAX_QUERY}")]
    TooLarge(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Length {
        expected: usize,
        got: usize,
    },
    MappedCount {
        expected: usize,
        got: usize,
    },
    TargetOutOfRange(usize),
    TargetReused(usize),
    ScoreNotBelowThreshold {
        query: usize,
        target: usize,
        score: i64,
    },
    Disconnected,
    EdgeNotPreserved {
        q: (usize, usize),
        t: (usize, usize),
    },
    FixedIgnored(usize),
}

fn adjacency(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    adj
}

/// Checks every feasibility condition on a mapping and returns its cost.
pub fn check_feasible(
    inst: &Instance,
    nlink: usize,
    mapping: &[Option<usize>],
) -> Result<i64, Violation> {
    let n_q = inst.n_query();
    let n_t = inst.n_target();
    if mapping.len() != n_q {
        return Err(Violation::Length {
            expected: n_q,
            got: mapping.len(),
        });
    }
    let mapped = mapping.iter().filter(|t| t.is_some()).count();
    if mapped != nlink {
        return Err(Violation::MappedCount {
            expected: nlink,
            got: mapped,
        });
    }
    let mut used = vec![false; n_t];
    let mut cost = 0;
    for (q, t) in mapping.iter().enumerate() {
        let Some(t) = *t else { continue };
        if t >= n_t {
            return Err(Violation::TargetOutOfRange(t));
        }
        if std::mem::replace(&mut used[t], true) {
            return Err(Violation::TargetReused(t));
        }
        let score = inst.scores().get(q, t + 1);
        if score >= inst.delta() {
            return Err(Violation::ScoreNotBelowThreshold {
                query: q,
                target: t,
                score,
            });
        }
        cost += score;
    }
    for &(q, t) in inst.fixed() {
        if mapping[q] != t {
            return Err(Violation::FixedIgnored(q));
        }
    }
    // connectivity of the selected query nodes
    let q_adj = adjacency(n_q, inst.query().edges());
    if let Some(start) = mapping.iter().position(|t| t.is_some()) {
        let mut seen = vec![false; n_q];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        let mut count = 0;
        while let Some(u) = queue.pop_front() {
            count += 1;
            for &w in &q_adj[u] {
                if mapping[w].is_some() && !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        if count != mapped {
            return Err(Violation::Disconnected);
        }
    }
    let t_edges = inst.target().edges();
    for &(a, b) in inst.query().edges() {
        if let (Some(ta), Some(tb)) = (mapping[a], mapping[b]) {
            let present = t_edges
                .iter()
                .any(|&(x, y)| (x, y) == (ta, tb) || (y, x) == (ta, tb));
            if !present {
                return Err(Violation::EdgeNotPreserved {
                    q: (a, b),
                    t: (ta, tb),
                });
            }
        }
    }
    Ok(cost)
}

/// Every connected node subset of the given size, each once, as sorted
/// node lists in lexicographic order. Uses ESU-style rooted expansion: a
/// subset is grown only from its smallest node, through nodes not adjacent
/// to the current subset.
pub fn enumerate_connected_subsets(
    n: usize,
    edges: &[(usize, usize)],
    size: usize,
) -> Vec<Vec<usize>> {
    assert!(size >= 1 && size <= n);
    let adj = adjacency(n, edges);
    let mut out = Vec::new();

    fn extend(
        adj: &[Vec<usize>],
        root: usize,
        size: usize,
        sub: &mut Vec<usize>,
        ext: Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if sub.len() == size {
            let mut s = sub.clone();
            s.sort_unstable();
            out.push(s);
            return;
        }
        let mut ext = ext;
        while let Some(w) = ext.pop() {
            let mut next = ext.clone();
            for &u in &adj[w] {
                let excluded = u <= root
                    || sub.contains(&u)
                    || next.contains(&u)
                    || sub.iter().any(|&s| adj[s].contains(&u));
                if !excluded {
                    next.push(u);
                }
            }
            sub.push(w);
            extend(adj, root, size, sub, next, out);
            sub.pop();
        }
    }

    for v in 0..n {
        let ext: Vec<usize> = adj[v].iter().copied().filter(|&u| u > v).collect();
        extend(&adj, v, size, &mut vec![v], ext, &mut out);
    }
    out.sort();
    out
}

/// All feasible mappings with their costs, sorted by mapping.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FeasibleSet {
    pub entries: Vec<(Mapping, i64)>,
}

impl FeasibleSet {
    pub fn min_cost(&self) -> Option<i64> {
        self.entries.iter().map(|(_, c)| *c).min()
    }

    /// Mappings achieving the minimum cost, sorted.
    pub fn optimal(&self) -> Vec<Mapping> {
        match self.min_cost() {
            Some(c) => self
                .entries
                .iter()
                .filter(|(_, k)| *k == c)
                .map(|(m, _)| m.clone())
                .collect(),
            None => Vec::new(),
        }
    }
}

pub fn oracle_solve(inst: &Instance, nlink: usize) -> Result<FeasibleSet, OracleError> {
    let n_q = inst.n_query();
    if n_q > ORACLE_MAX_QUERY {
        return Err(OracleError::TooLarge(n_q));
    }
    let n_t = inst.n_target();
    if nlink == 0 || nlink > n_q {
        return Ok(FeasibleSet::default());
    }
    let q_adj = adjacency(n_q, inst.query().edges());
    let t_adj = adjacency(n_t, inst.target().edges());
    let mut entries = Vec::new();

    for subset in enumerate_connected_subsets(n_q, inst.query().edges(), nlink) {
        let respects_fixed = inst
            .fixed()
            .iter()
            .all(|&(q, t)| subset.contains(&q) == t.is_some());
        if !respects_fixed {
            continue;
        }
        // assign in BFS order so each node after the first has an assigned
        // neighbour
        let mut order = vec![subset[0]];
        let mut k = 0;
        while k < order.len() {
            for &w in &q_adj[order[k]] {
                if subset.contains(&w) && !order.contains(&w) {
                    order.push(w);
                }
            }
            k += 1;
        }
        let mut mapping: Mapping = vec![None; n_q];
        let mut used = vec![false; n_t];
        assign(
            inst,
            &q_adj,
            &t_adj,
            &order,
            0,
            &mut mapping,
            &mut used,
            0,
            &mut entries,
        );
    }
    entries.sort();
    Ok(FeasibleSet { entries })
}

#[allow(clippy::too_many_arguments)]
fn assign(
    inst: &Instance,
    q_adj: &[Vec<usize>],
    t_adj: &[Vec<usize>],
    order: &[usize],
    pos: usize,
    mapping: &mut Mapping,
    used: &mut [bool],
    cost: i64,
    out: &mut Vec<(Mapping, i64)>,
) {
    if pos == order.len() {
        out.push((mapping.clone(), cost));
        return;
    }
    let q = order[pos];
    let pinned = inst
        .fixed()
        .iter()
        .find(|&&(fq, _)| fq == q)
        .and_then(|&(_, t)| t);
    for t in 0..used.len() {
        if used[t] || pinned.is_some_and(|p| p != t) {
            continue;
        }
        let score = inst.scores().get(q, t + 1);
        if score >= inst.delta() {
            continue;
        }
        let edges_ok = q_adj[q]
            .iter()
            .all(|&w| mapping[w].is_none_or(|tw| t_adj[t].contains(&tw)));
        if !edges_ok {
            continue;
        }
        used[t] = true;
        mapping[q] = Some(t);
        assign(
            inst,
            q_adj,
            t_adj,
            order,
            pos + 1,
            mapping,
            used,
            cost + score,
            out,
        );
        mapping[q] = None;
        used[t] = false;
    }
}

fn distance(a: &[Option<usize>], b: &[Option<usize>]) -> i64 {
    a.iter().zip(b).filter(|(x, y)| x != y).count() as i64
}

/// Best next diverse solution given an archive: among feasible mappings with
/// cost at most `max_cost`, the one maximizing
/// `min(yd_cap, c + Σ_j distance(X, archive[j]))`, ties to the
/// lexicographically smallest mapping. Returns the mapping and that value.
pub fn oracle_diverse_step(
    feasible: &FeasibleSet,
    archive: &[Mapping],
    c: i64,
    max_cost: i64,
    yd_cap: i64,
) -> Option<(Mapping, i64)> {
    let mut best: Option<(Mapping, i64)> = None;
    for (m, cost) in &feasible.entries {
        if *cost > max_cost {
            continue;
        }
        let raw = c + archive.iter().map(|a| distance(m, a)).sum::<i64>();
        let value = raw.min(yd_cap);
        // entries are sorted, so the first maximum is the smallest mapping
        if best.as_ref().is_none_or(|(_, v)| value > *v) {
            best = Some((m.clone(), value));
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleDiverseEntry {
    pub mapping: Mapping,
    pub cost: i64,
    pub yd: Option<i64>,
}

/// Replays the greedy diversity loop by enumeration. `widened` selects the
/// `|archive| * n_Q + c` cap instead of `n_Q + c`.
pub fn oracle_diverse(
    inst: &Instance,
    nlink: usize,
    k: usize,
    gap: i64,
    widened: bool,
) -> Result<Vec<OracleDiverseEntry>, OracleError> {
    let feasible = oracle_solve(inst, nlink)?;
    let Some(opt) = feasible.min_cost() else {
        return Ok(Vec::new());
    };
    let first = feasible.optimal().into_iter().next().unwrap();
    let mut out = vec![OracleDiverseEntry {
        mapping: first.clone(),
        cost: opt,
        yd: None,
    }];
    let mut archive = vec![first];
    let mut c = 0;
    let n_q = inst.n_query() as i64;
    while out.len() < k {
        let cap = if widened {
            archive.len() as i64 * n_q + c
        } else {
            n_q + c
        };
        let Some((m, y)) = oracle_diverse_step(&feasible, &archive, c, opt + gap, cap) else {
            break;
        };
        let cost = feasible.entries.iter().find(|(e, _)| *e == m).unwrap().1;
        out.push(OracleDiverseEntry {
            mapping: m.clone(),
            cost,
            yd: Some(y),
        });
        archive.push(m);
        c += y;
    }
    Ok(out)
}
