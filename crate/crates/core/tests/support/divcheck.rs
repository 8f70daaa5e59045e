//! Replays a diversity run step by step against the brute-force oracle.

#![allow(dead_code)]

use fragmap_core::diversity::{hamming, DiverseOutcome};
use fragmap_core::oracle::{check_feasible, oracle_diverse_step, FeasibleSet};
use fragmap_core::{Instance, Mapping};

/// Checks every solution of `run` for feasibility and the cost ceiling, and
/// when `feasible` is given, checks that each achieved `yd` is the best
/// value over all feasible mappings given the run's own archive so far.
/// Returns a description of the first mismatch.
pub fn check_run(
    inst: &Instance,
    nlink: usize,
    run: &DiverseOutcome,
    feasible: Option<&FeasibleSet>,
) -> Result<(), String> {
    let Some(max_cost) = run.max_cost else {
        return if run.solutions.is_empty() {
            Ok(())
        } else {
            Err("solutions without a cost ceiling".into())
        };
    };
    let mut archive: Vec<Mapping> = Vec::new();
    let mut c = 0;
    for (k, sol) in run.solutions.iter().enumerate() {
        let cost = check_feasible(inst, nlink, &sol.mapping)
            .map_err(|v| format!("solution {k}: {v:?}"))?;
        if cost != sol.cost || cost > max_cost {
            return Err(format!(
                "solution {k}: cost {} (recomputed {cost}, ceiling {max_cost})",
                sol.cost
            ));
        }
        if k > 0 {
            let y = sol.yd.ok_or_else(|| format!("solution {k}: missing yd"))?;
            let cap = run.bound.upper(inst.n_query(), archive.len(), c);
            let raw = c + archive
                .iter()
                .map(|a| hamming(&sol.mapping, a) as i64)
                .sum::<i64>();
            if y != raw.min(cap) {
                return Err(format!(
                    "solution {k}: yd {y} but the mapping achieves {}",
                    raw.min(cap)
                ));
            }
            if let Some(f) = feasible {
                let (_, best) = oracle_diverse_step(f, &archive, c, max_cost, cap)
                    .ok_or_else(|| format!("solution {k}: oracle finds no candidate"))?;
                if best != y {
                    return Err(format!("solution {k}: yd {y}, oracle optimum {best}"));
                }
            }
            c += y;
        }
        archive.push(sol.mapping.clone());
    }
    Ok(())
}
