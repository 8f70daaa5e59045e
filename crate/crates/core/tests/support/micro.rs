//! Exhaustive micro-instances for every propagator: on ground tuples a
//! propagator must accept exactly the tuples satisfying the relation, on
//! partial domains it must never remove a supported value, and the
//! propagators that claim domain consistency must remove every unsupported
//! one. Each check panics on the first discrepancy.
//!
//! Shared by the core test suite and the acceptance target.

use fragmap_core::diversity::post_diversity;
use fragmap_core::engine::{Network, VarId};
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

#[derive(Clone, Debug)]
enum Dom {
    Enum(Vec<i64>),
    Interval(i64, i64),
}

impl Dom {
    fn values(&self) -> Vec<i64> {
        match self {
            Dom::Enum(v) => v.clone(),
            Dom::Interval(lo, hi) => (*lo..=*hi).collect(),
        }
    }
}

fn make(net: &mut Network, d: &Dom) -> VarId {
    match d {
        Dom::Enum(v) => net.new_var(v),
        Dom::Interval(lo, hi) => net.new_interval_var(*lo, *hi),
    }
}

fn product(doms: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for d in doms {
        out = out
            .into_iter()
            .flat_map(|t| {
                d.iter().map(move |&v| {
                    let mut t = t.clone();
                    t.push(v);
                    t
                })
            })
            .collect();
    }
    out
}

struct Suite<'a> {
    post: &'a dyn Fn(&mut Network, &[VarId]),
    holds: &'a dyn Fn(&[i64]) -> bool,
    /// Every value left after propagation has a support.
    domain_consistent: bool,
}

impl Suite<'_> {
    /// Ground tuples: accepted exactly when the relation holds.
    fn check_ground(&self, doms: &[Dom]) -> usize {
        let vals: Vec<Vec<i64>> = doms.iter().map(Dom::values).collect();
        let mut accepted = 0;
        for t in product(&vals) {
            let mut net = Network::new();
            let xs: Vec<VarId> = t.iter().map(|&v| net.new_var(&[v])).collect();
            (self.post)(&mut net, &xs);
            let ok = net.propagate().is_ok();
            assert_eq!(ok, (self.holds)(&t), "ground tuple {t:?}");
            accepted += ok as usize;
        }
        accepted
    }

    /// Propagation on `doms` keeps every supported value, and with domain
    /// consistency keeps nothing else.
    fn check_filtering(&self, doms: &[Dom]) {
        let vals: Vec<Vec<i64>> = doms.iter().map(Dom::values).collect();
        let sols: Vec<Vec<i64>> = product(&vals)
            .into_iter()
            .filter(|t| (self.holds)(t))
            .collect();
        let mut net = Network::new();
        let xs: Vec<VarId> = doms.iter().map(|d| make(&mut net, d)).collect();
        (self.post)(&mut net, &xs);
        let res = net.propagate();
        if sols.is_empty() {
            if self.domain_consistent {
                assert!(
                    res.is_err(),
                    "no solution but propagation succeeded on {doms:?}"
                );
            }
            return;
        }
        assert!(
            res.is_ok(),
            "solutions {sols:?} exist but propagation failed on {doms:?}"
        );
        let d = net.domains();
        for (i, &x) in xs.iter().enumerate() {
            let mut supported: Vec<i64> = sols.iter().map(|t| t[i]).collect();
            supported.sort_unstable();
            supported.dedup();
            for &v in &supported {
                assert!(
                    d.contains(x, v),
                    "supported value {v} of var {i} removed on {doms:?}"
                );
            }
            if self.domain_consistent && d.is_enumerated(x) {
                assert_eq!(
                    d.values(x),
                    supported,
                    "var {i} keeps unsupported values on {doms:?}"
                );
            }
        }
    }
}

fn random_subset(rng: &mut SplitMix64, universe: &[i64]) -> Vec<i64> {
    loop {
        let s: Vec<i64> = universe
            .iter()
            .copied()
            .filter(|_| !rng.next_u64().is_multiple_of(3))
            .collect();
        if !s.is_empty() {
            return s;
        }
    }
}

pub fn binary_table_matches_brute_force_supports() {
    let mut rng = SplitMix64::seed_from_u64(11);
    for _ in 0..200 {
        let n = 1 + (rng.next_u64() % 10) as i64;
        let allowed: Vec<(i64, i64)> = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .filter(|_| rng.next_u64() % 4 == 0)
            .collect();
        let allowed_ref = allowed.clone();
        let suite = Suite {
            post: &move |net: &mut Network, xs: &[VarId]| {
                net.post_binary_table(xs[0], xs[1], &allowed);
            },
            holds: &move |t: &[i64]| allowed_ref.contains(&(t[0], t[1])),
            domain_consistent: true,
        };
        let universe: Vec<i64> = (0..n).collect();
        let doms = [
            Dom::Enum(random_subset(&mut rng, &universe)),
            Dom::Enum(random_subset(&mut rng, &universe)),
        ];
        suite.check_filtering(&doms);
        if n <= 5 {
            suite.check_ground(&doms);
        }
    }
}

fn alldiff_holds(t: &[i64]) -> bool {
    let nonzero: Vec<i64> = t.iter().copied().filter(|&v| v != 0).collect();
    let mut sorted = nonzero.clone();
    sorted.sort_unstable();
    sorted.dedup();
    sorted.len() == nonzero.len()
}

pub fn all_different_except_0_exhaustive_five_to_the_six() {
    for strong in [false, true] {
        let suite = Suite {
            post: &move |net: &mut Network, xs: &[VarId]| {
                net.post_all_different_except_0(xs, strong);
            },
            holds: &alldiff_holds,
            domain_consistent: false,
        };
        let doms = vec![Dom::Enum(vec![0, 1, 2, 3, 4]); 6];
        let accepted = suite.check_ground(&doms);
        // tuples whose nonzero entries are distinct: Σ_k C(6,k) · 4!/(4-k)!
        assert_eq!(accepted, 1 + 6 * 4 + 15 * 12 + 20 * 24 + 15 * 24);
    }
}

pub fn all_different_except_0_filtering() {
    let mut rng = SplitMix64::seed_from_u64(5);
    let universe: Vec<i64> = (0..6).collect();
    for strong in [false, true] {
        let suite = Suite {
            post: &move |net: &mut Network, xs: &[VarId]| {
                net.post_all_different_except_0(xs, strong);
            },
            holds: &alldiff_holds,
            // the matching-based version is domain consistent
            domain_consistent: strong,
        };
        for _ in 0..300 {
            let n = 2 + (rng.next_u64() % 5) as usize;
            let doms: Vec<Dom> = (0..n)
                .map(|_| Dom::Enum(random_subset(&mut rng, &universe)))
                .collect();
            suite.check_filtering(&doms);
        }
    }
}

pub fn count_value_exhaustive() {
    let mut rng = SplitMix64::seed_from_u64(6);
    let suite = Suite {
        post: &|net: &mut Network, xs: &[VarId]| {
            let (occ, rest) = xs.split_last().unwrap();
            net.post_count_value(0, rest, *occ);
        },
        holds: &|t: &[i64]| {
            let (occ, rest) = t.split_last().unwrap();
            rest.iter().filter(|&&v| v == 0).count() as i64 == *occ
        },
        domain_consistent: false,
    };
    let mut doms = vec![Dom::Enum(vec![0, 1, 2]); 4];
    doms.push(Dom::Interval(0, 5));
    suite.check_ground(&doms);
    for _ in 0..300 {
        let n = 1 + (rng.next_u64() % 5) as usize;
        let mut doms: Vec<Dom> = (0..n)
            .map(|_| Dom::Enum(random_subset(&mut rng, &[0, 1, 2, 3])))
            .collect();
        let lo = (rng.next_u64() % 4) as i64;
        doms.push(Dom::Interval(lo, lo + (rng.next_u64() % 3) as i64));
        suite.check_filtering(&doms);
    }
}

pub fn linear_sum_exhaustive() {
    let mut rng = SplitMix64::seed_from_u64(7);
    let suite = Suite {
        post: &|net: &mut Network, xs: &[VarId]| {
            let (total, rest) = xs.split_last().unwrap();
            net.post_linear_sum_eq(rest, *total);
        },
        holds: &|t: &[i64]| {
            let (total, rest) = t.split_last().unwrap();
            rest.iter().sum::<i64>() == *total
        },
        domain_consistent: false,
    };
    let mut doms = vec![Dom::Enum(vec![0, 2, 5]); 4];
    doms.push(Dom::Interval(0, 20));
    suite.check_ground(&doms);
    for _ in 0..300 {
        let n = 1 + (rng.next_u64() % 5) as usize;
        let mut doms: Vec<Dom> = (0..n)
            .map(|_| Dom::Enum(random_subset(&mut rng, &[0, 1, 3, 4, 7, 9])))
            .collect();
        let lo = (rng.next_u64() % 15) as i64;
        doms.push(Dom::Interval(lo, lo + (rng.next_u64() % 10) as i64));
        suite.check_filtering(&doms);
    }
}

pub fn linear_sum_bounds_are_tight_on_intervals() {
    let mut net = Network::new();
    let a = net.new_interval_var(0, 5);
    let b = net.new_interval_var(2, 4);
    let total = net.new_interval_var(0, 100);
    net.post_linear_sum_eq(&[a, b], total);
    net.propagate().unwrap();
    assert_eq!((net.domains().min(total), net.domains().max(total)), (2, 9));
    net.domains_mut().set_max(total, 3).unwrap();
    net.propagate().unwrap();
    assert_eq!(net.domains().max(a), 1);
    assert_eq!(net.domains().max(b), 3);
}

fn path_holds(t: &[i64]) -> bool {
    let (a, b, path) = (t[0], t[1], &t[2..]);
    !(a > 0 && b > 0) || path.iter().all(|&p| p > 0)
}

pub fn path_zero_link_exhaustive() {
    let mut rng = SplitMix64::seed_from_u64(8);
    let suite = Suite {
        post: &|net: &mut Network, xs: &[VarId]| {
            net.post_path_zero_link(xs[0], xs[1], &xs[2..]);
        },
        holds: &path_holds,
        domain_consistent: true,
    };
    for len in 1..=4 {
        suite.check_ground(&vec![Dom::Enum(vec![0, 1, 2]); 2 + len]);
    }
    for _ in 0..500 {
        let n = 3 + (rng.next_u64() % 4) as usize;
        let doms: Vec<Dom> = (0..n)
            .map(|_| Dom::Enum(random_subset(&mut rng, &[0, 1, 2, 3])))
            .collect();
        suite.check_filtering(&doms);
    }
}

pub fn diversity_exhaustive() {
    let mut rng = SplitMix64::seed_from_u64(9);
    for _ in 0..60 {
        let n = 1 + (rng.next_u64() % 4) as usize;
        let m = 1 + (rng.next_u64() % 3) as usize;
        let c = (rng.next_u64() % 3) as i64;
        let archive: Vec<Vec<i64>> = (0..m)
            .map(|_| (0..n).map(|_| (rng.next_u64() % 3) as i64).collect())
            .collect();
        let arch = archive.clone();
        let suite = Suite {
            post: &move |net: &mut Network, xs: &[VarId]| {
                let (yd, rest) = xs.split_last().unwrap();
                post_diversity(net, rest, *yd, archive.clone(), c);
            },
            holds: &move |t: &[i64]| {
                let (yd, rest) = t.split_last().unwrap();
                let dist: i64 = arch
                    .iter()
                    .map(|a| a.iter().zip(rest).filter(|(x, y)| x != y).count() as i64)
                    .sum();
                *yd <= c + dist
            },
            domain_consistent: false,
        };
        let mut doms: Vec<Dom> = (0..n).map(|_| Dom::Enum(vec![0, 1, 2])).collect();
        doms.push(Dom::Interval(0, (n * m) as i64 + 3));
        suite.check_ground(&doms);
        let mut doms: Vec<Dom> = (0..n)
            .map(|_| Dom::Enum(random_subset(&mut rng, &[0, 1, 2, 3])))
            .collect();
        let lo = (rng.next_u64() % (n * m + 3) as u64) as i64;
        doms.push(Dom::Interval(lo, lo + (rng.next_u64() % 4) as i64));
        suite.check_filtering(&doms);
    }
}

/// Reference domain store: plain value sets copied on every push.
struct Shadow {
    stack: Vec<Vec<Vec<i64>>>,
    cur: Vec<Vec<i64>>,
}

pub fn trail_fuzzing_matches_shadow_model() {
    let mut rng = SplitMix64::seed_from_u64(2024);
    let mut net = Network::new();
    let mut shadow = Shadow {
        stack: Vec::new(),
        cur: Vec::new(),
    };
    for k in 0..6 {
        let vals: Vec<i64> = (0..8).map(|v| v * 3 - k).collect();
        net.new_var(&vals);
        shadow.cur.push(vals);
    }
    for _ in 0..2 {
        net.new_interval_var(-5, 12);
        shadow.cur.push((-5..=12).collect());
    }
    let n_vars = shadow.cur.len();
    let enumerated = |i: usize| i < 6;
    assert!(
        net.pop_depth().is_err(),
        "pop without a matching push must be rejected"
    );
    // a base level that is never popped, so a failed operation can always
    // be undone the way the search does it
    net.push_depth();
    shadow.stack.push(shadow.cur.clone());

    for step in 0..100_000u32 {
        let op = rng.next_u64() % 10;
        let i = (rng.next_u64() % n_vars as u64) as usize;
        let x = VarId(i);
        let pick = |rng: &mut SplitMix64| -> i64 { (rng.next_u64() % 30) as i64 - 8 };
        match op {
            0 | 1 => {
                net.push_depth();
                shadow.stack.push(shadow.cur.clone());
            }
            2 | 3 => {
                if shadow.stack.len() > 1 {
                    net.pop_depth().unwrap();
                    shadow.cur = shadow.stack.pop().unwrap();
                }
            }
            _ => {
                let d = &shadow.cur[i];
                if d.len() <= 1 {
                    continue;
                }
                let v = pick(&mut rng);
                let (res, next): (_, Vec<i64>) = match op {
                    4 | 5 => {
                        let next = if enumerated(i) || v == d[0] || v == *d.last().unwrap() {
                            d.iter().copied().filter(|&w| w != v).collect()
                        } else {
                            d.clone()
                        };
                        (net.domains_mut().remove(x, v), next)
                    }
                    6 => (
                        net.domains_mut().set_min(x, v),
                        d.iter().copied().filter(|&w| w >= v).collect(),
                    ),
                    7 => (
                        net.domains_mut().set_max(x, v),
                        d.iter().copied().filter(|&w| w <= v).collect(),
                    ),
                    _ => (
                        net.domains_mut().assign(x, v),
                        d.iter().copied().filter(|&w| w == v).collect(),
                    ),
                };
                if next.is_empty() {
                    assert!(res.is_err(), "step {step}: emptying var {i} must fail");
                    net.pop_depth().unwrap();
                    shadow.cur = shadow.stack.pop().unwrap();
                    if shadow.stack.is_empty() {
                        net.push_depth();
                        shadow.stack.push(shadow.cur.clone());
                    }
                } else {
                    assert_eq!(
                        res.unwrap(),
                        next != *d,
                        "step {step}: change flag on var {i}"
                    );
                    shadow.cur[i] = next;
                }
            }
        }
        let d = net.domains();
        for (j, vals) in shadow.cur.iter().enumerate() {
            let y = VarId(j);
            assert_eq!(d.size(y), vals.len() as u64, "step {step} var {j}");
            assert_eq!(d.min(y), vals[0], "step {step} var {j}");
            assert_eq!(d.max(y), *vals.last().unwrap(), "step {step} var {j}");
            if step % 97 == 0 {
                assert_eq!(d.values(y), *vals, "step {step} var {j}");
            }
        }
    }
}

/// Every micro-suite, in order; used where a single entry point is needed.
#[allow(dead_code)]
pub fn run_all() {
    binary_table_matches_brute_force_supports();
    all_different_except_0_exhaustive_five_to_the_six();
    all_different_except_0_filtering();
    count_value_exhaustive();
    linear_sum_exhaustive();
    linear_sum_bounds_are_tight_on_intervals();
    path_zero_link_exhaustive();
    diversity_exhaustive();
    trail_fuzzing_matches_shadow_model();
}
