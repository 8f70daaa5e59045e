use std::collections::VecDeque;
use std::path::PathBuf;

use fragmap_core::engine::Network;
use fragmap_core::instance::{load_instance, random_tree};
use fragmap_core::model::{build_network, mapping_cost, tree_path, Model, ModelOptions};
use fragmap_core::oracle::{check_feasible, oracle_solve};
use fragmap_core::{FragmentTree, Instance, Mapping, ScoreMatrix};
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

#[path = "support/small.rs"]
mod small;

fn bfs_distances(tree: &FragmentTree, from: usize) -> Vec<usize> {
    let adj = tree.adjacency();
    let mut dist = vec![usize::MAX; tree.n()];
    dist[from] = 0;
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        for &w in &adj[u] {
            if dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

#[test]
fn tree_paths_are_shortest_edge_walks() {
    let mut rng = SplitMix64::seed_from_u64(17);
    for _ in 0..200 {
        let n = 2 + (rng.next_u64() % 12) as usize;
        let tree = random_tree(n, &mut rng);
        for a in 0..n {
            let dist = bfs_distances(&tree, a);
            #[allow(clippy::needless_range_loop)]
            for b in 0..n {
                if a == b {
                    continue;
                }
                let interior = tree_path(&tree, a, b);
                let mut walk = vec![a];
                walk.extend(&interior);
                walk.push(b);
                assert!(
                    walk.windows(2).all(|w| tree.has_edge(w[0], w[1])),
                    "{walk:?} is not a walk"
                );
                assert_eq!(walk.len() - 1, dist[b], "path {a}->{b} is not the shortest");
                let mut rev = tree_path(&tree, b, a);
                rev.reverse();
                assert_eq!(rev, interior);
            }
        }
    }
}

/// Every full `xq` assignment the network accepts, found by branching on
/// every value of every assignment variable with propagation at each node.
fn accepted_mappings(model: &mut Model) -> Vec<(Mapping, i64)> {
    fn go(net: &mut Network, model: &Model, k: usize, out: &mut Vec<(Mapping, i64)>) {
        let xq = &model.vars.xq;
        if k == xq.len() {
            out.push(model.decode(net.domains()));
            return;
        }
        for v in net.domains().values(xq[k]) {
            net.push_depth();
            if net.domains_mut().assign(xq[k], v).is_ok() && net.propagate().is_ok() {
                go(net, model, k + 1, out);
            } else {
                net.clear_queue();
            }
            net.pop_depth().unwrap();
        }
    }
    let mut out = Vec::new();
    if model.root_consistent() {
        let mut net = std::mem::take(&mut model.net);
        go(&mut net, model, 0, &mut out);
        model.net = net;
    }
    out.sort();
    out
}

#[test]
fn network_accepts_exactly_the_feasible_mappings() {
    for seed in 0..60 {
        let inst = small::small_instance(seed);
        for nlink in 1..=inst.n_query() {
            let expected = oracle_solve(&inst, nlink).unwrap().entries;
            for strong in [false, true] {
                let mut model = build_network(
                    &inst,
                    nlink,
                    ModelOptions {
                        strong_alldiff: strong,
                    },
                )
                .unwrap();
                let got = accepted_mappings(&mut model);
                assert_eq!(got, expected, "seed {seed} nlink {nlink} strong {strong}");
            }
        }
    }
}

#[test]
fn three_node_star() {
    let star = FragmentTree::new(3, &[(0, 1), (0, 2)]).unwrap();
    let target = FragmentTree::new(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
    let scores =
        ScoreMatrix::from_real_rows(&[vec![1, 9, 9, 9], vec![9, 2, 3, 4], vec![9, 3, 2, 4]])
            .unwrap();
    let inst = Instance::new(star, target, scores, 10, Some(3), vec![]).unwrap();
    let expected = oracle_solve(&inst, 3).unwrap().entries;
    // center on the target hub, leaves on any two of its three neighbours
    assert_eq!(expected.len(), 6);
    let mut model = build_network(&inst, 3, ModelOptions::default()).unwrap();
    assert_eq!(accepted_mappings(&mut model), expected);
}

#[test]
fn decoded_cost_matches_matrix_sum() {
    for seed in 100..140 {
        let inst = small::small_instance(seed);
        let nlink = 1 + seed as usize % inst.n_query();
        let mut model = build_network(&inst, nlink, ModelOptions::default()).unwrap();
        for (mapping, cost) in accepted_mappings(&mut model) {
            assert_eq!(cost, mapping_cost(inst.scores(), &mapping));
            assert_eq!(check_feasible(&inst, nlink, &mapping), Ok(cost));
        }
    }
}

#[test]
fn fixed_associations_restrict_the_domains() {
    let inst = small::with_query_size(4, 4, 6, 101);
    let fixed = inst.with_fixed(vec![(0, Some(2)), (1, None)]).unwrap();
    for nlink in 1..=4 {
        let mut model = build_network(&fixed, nlink, ModelOptions::default()).unwrap();
        let got = accepted_mappings(&mut model);
        assert_eq!(
            got,
            oracle_solve(&fixed, nlink).unwrap().entries,
            "nlink {nlink}"
        );
        assert!(got.iter().all(|(m, _)| m[0] == Some(2) && m[1].is_none()));
    }
}

#[test]
fn figure1_row_zero_domain_under_threshold_ten() {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/figure1.json");
    let inst = load_instance(&path).unwrap().with_delta(10).unwrap();
    let model = build_network(&inst, 1, ModelOptions::default()).unwrap();
    // before propagation-driven pruning the row only admits the dummy and 12
    let row: Vec<usize> = (0..inst.scores().cols())
        .filter(|&j| inst.scores().get(0, j) < 10)
        .collect();
    assert_eq!(row, vec![0, 12]);
    let d = model.net.domains().values(model.vars.xq[0]);
    assert!(d.iter().all(|v| [0, 12].contains(v)), "{d:?}");
}

#[test]
fn model_variable_domains() {
    let inst = small::with_query_size(9, 5, 8, 50);
    let model = build_network(&inst, 3, ModelOptions::default()).unwrap();
    let d = model.net.domains();
    assert_eq!(d.values(model.vars.occ0), vec![2]);
    assert!(d.min(model.vars.obj) >= 0 && d.max(model.vars.obj) <= 3 * 49);
    for (i, &x) in model.vars.xq.iter().enumerate() {
        for v in d.values(x) {
            assert!(inst.scores().get(i, v as usize) < 50);
        }
    }
}
