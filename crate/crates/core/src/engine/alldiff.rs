use super::{Domains, PropResult, Propagator, VarId};

/// Pairwise distinct values among the variables that take a nonzero value.
///
/// The default filtering removes an assigned nonzero value from every other
/// domain. With `strong` set, a matching-based pass (Régin's algorithm) then
/// enforces GAC: every variable whose domain contains 0 is given a private
/// "joker" value standing for 0, which turns the constraint into a plain
/// all-different over nonzero values and jokers.
pub struct AllDifferentExcept0 {
    xs: Vec<VarId>,
    strong: bool,
}

impl AllDifferentExcept0 {
    pub fn new(xs: Vec<VarId>, strong: bool) -> Self {
        Self { xs, strong }
    }

    fn forward_check(&self, doms: &mut Domains) -> PropResult {
        let mut done = vec![false; self.xs.len()];
        loop {
            let mut progress = false;
            for (i, &x) in self.xs.iter().enumerate() {
                if done[i] {
                    continue;
                }
                let Some(v) = doms.value(x) else { continue };
                done[i] = true;
                if v == 0 {
                    continue;
                }
                for (k, &y) in self.xs.iter().enumerate() {
                    if k != i {
                        doms.remove(y, v)?;
                    }
                }
                progress = true;
            }
            if !progress {
                return Ok(());
            }
        }
    }

    fn matching_filter(&self, doms: &mut Domains) -> PropResult {
        let n = self.xs.len();
        let mut values: Vec<i64> = self
            .xs
            .iter()
            .flat_map(|&x| doms.values(x))
            .filter(|&v| v != 0)
            .collect();
        values.sort_unstable();
        values.dedup();
        let m = values.len();
        // value nodes: 0..m real values, m..m+n jokers (joker of var i is m+i)
        let mut adj: Vec<Vec<usize>> = Vec::with_capacity(n);
        for (i, &x) in self.xs.iter().enumerate() {
            let mut list = Vec::new();
            for v in doms.values(x) {
                if v == 0 {
                    list.push(m + i);
                } else {
                    list.push(values.binary_search(&v).unwrap());
                }
            }
            adj.push(list);
        }
        let nv = m + n;
        let mut var_match = vec![usize::MAX; n];
        let mut val_match = vec![usize::MAX; nv];
        for i in 0..n {
            let mut seen = vec![false; nv];
            if !augment(i, &adj, &mut var_match, &mut val_match, &mut seen) {
                return Err(super::Inconsistency);
            }
        }

        // Residual graph: vars 0..n, values n..n+nv, sink n+nv.
        let sink = n + nv;
        let mut graph: Vec<Vec<usize>> = vec![Vec::new(); sink + 1];
        for i in 0..n {
            for &val in &adj[i] {
                if var_match[i] != val {
                    graph[i].push(n + val);
                }
            }
        }
        for val in 0..nv {
            if val_match[val] != usize::MAX {
                graph[n + val].push(val_match[val]);
                graph[sink].push(n + val);
            } else {
                graph[n + val].push(sink);
            }
        }
        let comp = tarjan_scc(&graph);

        for (i, &x) in self.xs.iter().enumerate() {
            for &val in &adj[i] {
                if var_match[i] == val || comp[i] == comp[n + val] {
                    continue;
                }
                let v = if val >= m { 0 } else { values[val] };
                doms.remove(x, v)?;
            }
        }
        Ok(())
    }
}

fn augment(
    i: usize,
    adj: &[Vec<usize>],
    var_match: &mut [usize],
    val_match: &mut [usize],
    seen: &mut [bool],
) -> bool {
    for &val in &adj[i] {
        if seen[val] {
            continue;
        }
        seen[val] = true;
        if val_match[val] == usize::MAX || augment(val_match[val], adj, var_match, val_match, seen)
        {
            var_match[i] = val;
            val_match[val] = i;
            return true;
        }
    }
    false
}

/// Strongly connected component id of every node.
fn tarjan_scc(graph: &[Vec<usize>]) -> Vec<usize> {
    struct State<'a> {
        graph: &'a [Vec<usize>],
        index: Vec<usize>,
        low: Vec<usize>,
        on_stack: Vec<bool>,
        stack: Vec<usize>,
        comp: Vec<usize>,
        next_index: usize,
        next_comp: usize,
    }
    fn visit(s: &mut State, v: usize) {
        s.index[v] = s.next_index;
        s.low[v] = s.next_index;
        s.next_index += 1;
        s.stack.push(v);
        s.on_stack[v] = true;
        for k in 0..s.graph[v].len() {
            let w = s.graph[v][k];
            if s.index[w] == usize::MAX {
                visit(s, w);
                s.low[v] = s.low[v].min(s.low[w]);
            } else if s.on_stack[w] {
                s.low[v] = s.low[v].min(s.index[w]);
            }
        }
        if s.low[v] == s.index[v] {
            loop {
                let w = s.stack.pop().unwrap();
                s.on_stack[w] = false;
                s.comp[w] = s.next_comp;
                if w == v {
                    break;
                }
            }
            s.next_comp += 1;
        }
    }
    let n = graph.len();
    let mut s = State {
        graph,
        index: vec![usize::MAX; n],
        low: vec![0; n],
        on_stack: vec![false; n],
        stack: Vec::new(),
        comp: vec![usize::MAX; n],
        next_index: 0,
        next_comp: 0,
    };
    for v in 0..n {
        if s.index[v] == usize::MAX {
            visit(&mut s, v);
        }
    }
    s.comp
}

impl Propagator for AllDifferentExcept0 {
    fn scope(&self) -> Vec<VarId> {
        self.xs.clone()
    }

    fn propagate(&mut self, doms: &mut Domains) -> PropResult {
        self.forward_check(doms)?;
        if self.strong {
            self.matching_filter(doms)?;
            self.forward_check(doms)?;
        }
        Ok(())
    }

    fn idempotent(&self) -> bool {
        // the matching pass is a fixpoint on its own; forward checking
        // loops internally
        true
    }

    fn name(&self) -> &'static str {
        "all_different_except_0"
    }
}

#[cfg(test)]
mod tests {
    use crate::engine::Network;

    #[test]
    fn assigned_value_removed_from_others() {
        let mut net = Network::new();
        let a = net.new_var(&[1]);
        let b = net.new_var(&[1, 2]);
        net.post_all_different_except_0(&[a, b], false);
        net.propagate().unwrap();
        assert_eq!(net.domains().values(b), vec![2]);
    }

    #[test]
    fn zeros_may_repeat() {
        let mut net = Network::new();
        let a = net.new_var(&[0]);
        let b = net.new_var(&[0]);
        net.post_all_different_except_0(&[a, b], true);
        assert!(net.propagate().is_ok());
    }

    #[test]
    fn strong_mode_detects_pigeonhole() {
        let mut net = Network::new();
        let a = net.new_var(&[1, 2]);
        let b = net.new_var(&[1, 2]);
        let c = net.new_var(&[1, 2]);
        net.post_all_different_except_0(&[a, b, c], true);
        assert!(net.propagate().is_err());

        // with a zero available the same domains are satisfiable
        let mut net = Network::new();
        let a = net.new_var(&[1, 2]);
        let b = net.new_var(&[1, 2]);
        let c = net.new_var(&[0, 1, 2, 3]);
        net.post_all_different_except_0(&[a, b, c], true);
        net.propagate().unwrap();
        assert_eq!(net.domains().values(c), vec![0, 3]);
    }
}
