//! Translation of an [`Instance`] into a constraint network.
//!
//! Variables: one assignment variable per query fragment (`xq`, internal
//! target index, 0 = unmapped), one score variable per query fragment (`xs`),
//! the number of unmapped fragments `occ0` and the objective `obj`.
//!
//! Constraints:
//! - a score table linking each `xq[i]` to `xs[i]`;
//! - all-different-except-0 over `xq`;
//! - count of zeros in `xq` equal to `occ0`;
//! - `obj = Σ xs`;
//! - for each query edge, a table keeping mapped endpoints on a target edge;
//! - for each pair of query nodes at distance ≥ 2, a path constraint: if both
//!   are mapped, every node strictly between them is mapped.

use crate::engine::{Domains, Network, VarId};
use crate::instance::{FragmentTree, Instance, ScoreMatrix};

/// Per query fragment, the file index of its target, `None` when unmapped.
pub type Mapping = Vec<Option<usize>>;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("nlink = {nlink} is outside [1, {n_query}]")]
    Nlink { nlink: usize, n_query: usize },
    #[error("fixed association {query} -> {target} has score {score}, not below the threshold delta = {delta}")]
    FixedAboveThreshold {
        query: usize,
        target: usize,
        score: i64,
        delta: i64,
    },
}

#[derive(Debug, Clone)]
pub struct ModelVariables {
    pub xq: Vec<VarId>,
    pub xs: Vec<VarId>,
    pub occ0: VarId,
    pub obj: VarId,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ModelOptions {
    /// Matching-based filtering for all-different-except-0.
    pub strong_alldiff: bool,
}

pub struct Model {
    pub net: Network,
    pub vars: ModelVariables,
    nlink: usize,
    scores: ScoreMatrix,
    root_consistent: bool,
}

/// Interior nodes of the unique path from `from` to `to`, in walking order.
pub fn tree_path(tree: &FragmentTree, from: usize, to: usize) -> Vec<usize> {
    assert_ne!(from, to, "tree_path needs two distinct nodes");
    let parent = parents_from(tree, from);
    let mut rev = Vec::new();
    let mut cur = parent[to];
    while cur != from {
        rev.push(cur);
        cur = parent[cur];
    }
    rev.reverse();
    rev
}

/// Parent of every node in the tree rooted at `root` (`root` maps to itself).
fn parents_from(tree: &FragmentTree, root: usize) -> Vec<usize> {
    let adj = tree.adjacency();
    let mut parent = vec![usize::MAX; tree.n()];
    parent[root] = root;
    let mut stack = vec![root];
    while let Some(u) = stack.pop() {
        for &w in &adj[u] {
            if parent[w] == usize::MAX {
                parent[w] = u;
                stack.push(w);
            }
        }
    }
    parent
}

/// Interior paths for every unordered node pair `(i1 < i2)` whose interior
/// is non-empty.
pub fn path_table(tree: &FragmentTree) -> Vec<(usize, usize, Vec<usize>)> {
    let n = tree.n();
    let mut out = Vec::new();
    for i1 in 0..n {
        let parent = parents_from(tree, i1);
        for i2 in i1 + 1..n {
            let mut rev = Vec::new();
            let mut cur = parent[i2];
            while cur != i1 {
                rev.push(cur);
                cur = parent[cur];
            }
            if !rev.is_empty() {
                rev.reverse();
                out.push((i1, i2, rev));
            }
        }
    }
    out
}

/// Builds the network for `inst` with exactly `nlink` mapped fragments, then
/// runs root propagation.
pub fn build_network(
    inst: &Instance,
    nlink: usize,
    opts: ModelOptions,
) -> Result<Model, ModelError> {
    let n_q = inst.n_query();
    if nlink == 0 || nlink > n_q {
        return Err(ModelError::Nlink {
            nlink,
            n_query: n_q,
        });
    }
    let scores = inst.scores();
    let delta = inst.delta();

    let mut xq_domains: Vec<Vec<i64>> = (0..n_q)
        .map(|i| {
            (0..scores.cols())
                .filter(|&j| scores.get(i, j) < delta)
                .map(|j| j as i64)
                .collect()
        })
        .collect();
    for &(q, t) in inst.fixed() {
        let internal = t.map_or(0, |t| t + 1);
        let score = scores.get(q, internal);
        if score >= delta {
            return Err(ModelError::FixedAboveThreshold {
                query: q,
                target: t.unwrap_or(0),
                score,
                delta,
            });
        }
        xq_domains[q] = vec![internal as i64];
    }

    let mut net = Network::new();
    let xq: Vec<VarId> = xq_domains.iter().map(|d| net.new_var(d)).collect();
    let xs: Vec<VarId> = xq_domains
        .iter()
        .enumerate()
        .map(|(i, d)| {
            let vals: Vec<i64> = d.iter().map(|&j| scores.get(i, j as usize)).collect();
            net.new_var(&vals)
        })
        .collect();
    let occ0 = net.new_var(&[(n_q - nlink) as i64]);
    let obj = net.new_interval_var(0, nlink as i64 * (delta - 1));

    for i in 0..n_q {
        let pairs: Vec<(i64, i64)> = xq_domains[i]
            .iter()
            .map(|&j| (j, scores.get(i, j as usize)))
            .collect();
        net.post_binary_table(xq[i], xs[i], &pairs);
    }
    net.post_all_different_except_0(&xq, opts.strong_alldiff);
    net.post_count_value(0, &xq, occ0);
    net.post_linear_sum_eq(&xs, obj);

    let target = inst.target();
    for &(i1, i2) in inst.query().edges() {
        let mut pairs = Vec::new();
        for &j1 in &xq_domains[i1] {
            for &j2 in &xq_domains[i2] {
                let ok = j1 == 0 || j2 == 0 || target.has_edge(j1 as usize - 1, j2 as usize - 1);
                if ok {
                    pairs.push((j1, j2));
                }
            }
        }
        net.post_binary_table(xq[i1], xq[i2], &pairs);
    }
    for (i1, i2, interior) in path_table(inst.query()) {
        let path: Vec<VarId> = interior.iter().map(|&k| xq[k]).collect();
        net.post_path_zero_link(xq[i1], xq[i2], &path);
    }

    let root_consistent = net.propagate().is_ok();
    net.reset_weights();
    Ok(Model {
        net,
        vars: ModelVariables { xq, xs, occ0, obj },
        nlink,
        scores: scores.clone(),
        root_consistent,
    })
}

impl Model {
    pub fn nlink(&self) -> usize {
        self.nlink
    }

    /// False when root propagation already proved the instance infeasible.
    pub fn root_consistent(&self) -> bool {
        self.root_consistent
    }

    pub(crate) fn mark_inconsistent(&mut self) {
        self.root_consistent = false;
    }

    /// Reads the mapping and cost from a fully assigned state.
    ///
    /// Panics if the objective disagrees with the score sum, which would mean
    /// the engine accepted an inconsistent assignment.
    pub fn decode(&self, doms: &Domains) -> (Mapping, i64) {
        let mapping: Mapping = self
            .vars
            .xq
            .iter()
            .map(|&x| {
                let j = doms.value(x).expect("decode needs an assigned xq") as usize;
                (j > 0).then(|| j - 1)
            })
            .collect();
        let cost = doms
            .value(self.vars.obj)
            .expect("decode needs an assigned obj");
        let direct = mapping_cost(&self.scores, &mapping);
        assert_eq!(
            cost, direct,
            "objective {cost} differs from score sum {direct}"
        );
        (mapping, cost)
    }
}

/// Sum of the scores of the mapped pairs; no feasibility checks.
pub fn mapping_cost(scores: &ScoreMatrix, mapping: &[Option<usize>]) -> i64 {
    mapping
        .iter()
        .enumerate()
        .map(|(i, t)| scores.get(i, t.map_or(0, |t| t + 1)))
        .sum()
}
