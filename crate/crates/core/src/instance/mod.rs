//! Problem data: fragment trees, score matrices and full instances.
//!
//! Target indices come in two flavours. Files and user-facing output use the
//! *file* index `0..n_target` of a real target fragment. Internally the score
//! matrix carries an extra leading column for the dummy target, so the
//! *internal* index of file index `t` is `t + 1` and internal index 0 means
//! "unmapped".

mod generate;
mod histogram;
mod io;

use std::collections::VecDeque;

pub use generate::{decode_prufer, generate_instance, random_tree, GeneratorConfig};
pub use histogram::{
    build_score_matrix, load_histograms, manhattan_score, Histogram, HISTOGRAM_BINS,
};
pub use io::{load_instance, parse_instance, save_instance, to_canonical_string};

#[derive(Debug, thiserror::Error)]
pub enum InstanceError {
    #[error("{which} graph is not a tree: {reason}")]
    NotATree { which: &'static str, reason: String },
    #[error("invalid score matrix: {0}")]
    Scores(String),
    #[error(
        "target has {n_target} real fragments, query has {n_query}: need n_target + 1 >= n_query"
    )]
    TargetTooSmall { n_query: usize, n_target: usize },
    #[error("nlink = {nlink} is outside [1, {n_query}]")]
    Nlink { nlink: usize, n_query: usize },
    #[error("delta must be a positive integer, got {0}")]
    Delta(i64),
    #[error("invalid fixed association: {0}")]
    Fixed(String),
    #[error("invalid histogram: {0}")]
    Histogram(String),
    #[error("unsupported instance format version {0}")]
    Version(i64),
    #[error("invalid generator configuration: {0}")]
    Config(String),
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

/// An undirected tree over nodes `0..n`. Edges are stored as `(min, max)`
/// pairs in sorted order, so equal trees compare equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FragmentTree {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl FragmentTree {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self, InstanceError> {
        Self::validated(n, edges, "fragment")
    }

    fn validated(
        n: usize,
        edges: &[(usize, usize)],
        which: &'static str,
    ) -> Result<Self, InstanceError> {
        let err = |reason: String| InstanceError::NotATree { which, reason };
        if n == 0 {
            return Err(err("a tree needs at least one node".into()));
        }
        if edges.len() != n - 1 {
            return Err(err(format!(
                "{} edges for {} nodes, expected {}",
                edges.len(),
                n,
                n - 1
            )));
        }
        let mut norm = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(err(format!(
                    "edge ({a}, {b}) references a node outside 0..{n}"
                )));
            }
            if a == b {
                return Err(err(format!("self-loop on node {a}")));
            }
            norm.push((a.min(b), a.max(b)));
        }
        norm.sort_unstable();
        if let Some(w) = norm.windows(2).find(|w| w[0] == w[1]) {
            return Err(err(format!("duplicate edge ({}, {})", w[0].0, w[0].1)));
        }
        let tree = Self { n, edges: norm };
        let reached = tree.bfs_order(0).len();
        if reached != n {
            return Err(err(format!(
                "graph is disconnected ({reached} of {n} nodes reachable)"
            )));
        }
        Ok(tree)
    }

    /// A single node with no edges.
    pub fn singleton() -> Self {
        Self {
            n: 1,
            edges: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.binary_search(&(a.min(b), a.max(b))).is_ok()
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    fn bfs_order(&self, root: usize) -> Vec<usize> {
        let adj = self.adjacency();
        let mut seen = vec![false; self.n];
        let mut order = Vec::new();
        let mut queue = VecDeque::from([root]);
        seen[root] = true;
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        order
    }
}

/// Query-by-target dissimilarity scores with the dummy column prepended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScoreMatrix {
    rows: usize,
    cols: usize,
    cells: Vec<i64>,
    max_score: i64,
}

impl ScoreMatrix {
    /// Builds a matrix from real-target rows (no dummy column). Every cell
    /// must be at least 1.
    pub fn from_real_rows(rows: &[Vec<i64>]) -> Result<Self, InstanceError> {
        let n_rows = rows.len();
        if n_rows == 0 {
            return Err(InstanceError::Scores("matrix has no rows".into()));
        }
        let n_real = rows[0].len();
        if n_real == 0 {
            return Err(InstanceError::Scores("matrix has no columns".into()));
        }
        let mut cells = Vec::with_capacity(n_rows * (n_real + 1));
        let mut max_score = 1;
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n_real {
                return Err(InstanceError::Scores(format!(
                    "row {i} has {} cells, expected {n_real}",
                    row.len()
                )));
            }
            cells.push(0);
            for (j, &s) in row.iter().enumerate() {
                if s < 1 {
                    return Err(InstanceError::Scores(format!(
                        "score S[{i}][{j}] = {s} is outside [1, max_score]"
                    )));
                }
                max_score = max_score.max(s);
                cells.push(s);
            }
        }
        Ok(Self {
            rows: n_rows,
            cols: n_real + 1,
            cells,
            max_score,
        })
    }

    /// Number of query fragments.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of columns including the dummy column.
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn max_score(&self) -> i64 {
        self.max_score
    }

    /// Score of query fragment `i` against internal target index `j`
    /// (0 = dummy).
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.cells[i * self.cols + j]
    }

    /// Row `i` including the dummy cell.
    pub fn row(&self, i: usize) -> &[i64] {
        &self.cells[i * self.cols..(i + 1) * self.cols]
    }

    /// Rows without the dummy column, as stored in files.
    pub fn real_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i)[1..].to_vec()).collect()
    }
}

/// A full problem: query, target, scores, threshold and optional settings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    query: FragmentTree,
    target: FragmentTree,
    scores: ScoreMatrix,
    delta: i64,
    nlink: Option<usize>,
    fixed: Vec<(usize, Option<usize>)>,
}

impl Instance {
    /// `fixed` pairs use file indices; `None` pins a query fragment to the
    /// dummy target.
    pub fn new(
        query: FragmentTree,
        target: FragmentTree,
        scores: ScoreMatrix,
        delta: i64,
        nlink: Option<usize>,
        fixed: Vec<(usize, Option<usize>)>,
    ) -> Result<Self, InstanceError> {
        let n_q = query.n();
        let n_t = target.n();
        if n_t + 1 < n_q {
            return Err(InstanceError::TargetTooSmall {
                n_query: n_q,
                n_target: n_t,
            });
        }
        if scores.rows() != n_q || scores.cols() != n_t + 1 {
            return Err(InstanceError::Scores(format!(
                "matrix is {}x{} but query has {n_q} and target {n_t} fragments",
                scores.rows(),
                scores.cols() - 1
            )));
        }
        if delta < 1 {
            return Err(InstanceError::Delta(delta));
        }
        if let Some(k) = nlink {
            if k == 0 || k > n_q {
                return Err(InstanceError::Nlink {
                    nlink: k,
                    n_query: n_q,
                });
            }
        }
        let mut seen_q = vec![false; n_q];
        let mut seen_t = vec![false; n_t];
        for &(q, t) in &fixed {
            if q >= n_q {
                return Err(InstanceError::Fixed(format!(
                    "query index {q} outside 0..{n_q}"
                )));
            }
            if std::mem::replace(&mut seen_q[q], true) {
                return Err(InstanceError::Fixed(format!("query index {q} fixed twice")));
            }
            if let Some(t) = t {
                if t >= n_t {
                    return Err(InstanceError::Fixed(format!(
                        "target index {t} outside 0..{n_t}"
                    )));
                }
                if std::mem::replace(&mut seen_t[t], true) {
                    return Err(InstanceError::Fixed(format!("target index {t} used twice")));
                }
            }
        }
        Ok(Self {
            query,
            target,
            scores,
            delta,
            nlink,
            fixed,
        })
    }

    pub fn query(&self) -> &FragmentTree {
        &self.query
    }

    /// Target tree over the real fragments (file indices).
    pub fn target(&self) -> &FragmentTree {
        &self.target
    }

    pub fn scores(&self) -> &ScoreMatrix {
        &self.scores
    }

    pub fn delta(&self) -> i64 {
        self.delta
    }

    pub fn nlink(&self) -> Option<usize> {
        self.nlink
    }

    pub fn fixed(&self) -> &[(usize, Option<usize>)] {
        &self.fixed
    }

    pub fn n_query(&self) -> usize {
        self.query.n()
    }

    /// Real target fragment count.
    pub fn n_target(&self) -> usize {
        self.target.n()
    }

    pub fn with_nlink(&self, nlink: Option<usize>) -> Result<Self, InstanceError> {
        Self::new(
            self.query.clone(),
            self.target.clone(),
            self.scores.clone(),
            self.delta,
            nlink,
            self.fixed.clone(),
        )
    }

    pub fn with_fixed(&self, fixed: Vec<(usize, Option<usize>)>) -> Result<Self, InstanceError> {
        Self::new(
            self.query.clone(),
            self.target.clone(),
            self.scores.clone(),
            self.delta,
            self.nlink,
            fixed,
        )
    }

    pub fn with_delta(&self, delta: i64) -> Result<Self, InstanceError> {
        Self::new(
            self.query.clone(),
            self.target.clone(),
            self.scores.clone(),
            delta,
            self.nlink,
            self.fixed.clone(),
        )
    }

    /// Score of query fragment `q` against a file-indexed target, 0 for the
    /// dummy.
    pub fn score(&self, q: usize, t: Option<usize>) -> i64 {
        self.scores.get(q, t.map_or(0, |t| t + 1))
    }

    pub(crate) fn validate_trees(
        n_q: usize,
        q_edges: &[(usize, usize)],
        n_t: usize,
        t_edges: &[(usize, usize)],
    ) -> Result<(FragmentTree, FragmentTree), InstanceError> {
        Ok((
            FragmentTree::validated(n_q, q_edges, "query")?,
            FragmentTree::validated(n_t, t_edges, "target")?,
        ))
    }
}
