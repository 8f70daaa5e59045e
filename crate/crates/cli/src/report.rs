//! Text and JSON renderings of solver results.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::Result;
use fragmap_core::diversity::{DiverseOutcome, Gap, YdBound};
use fragmap_core::search::{NlinkResult, SearchStats};
use fragmap_core::{Mapping, Status};
use serde::Serialize;

/// `0->13 1->- 2->7 ...` with file indices; `-` marks an unmapped fragment.
pub fn mapping_text(m: &[Option<usize>]) -> String {
    m.iter()
        .enumerate()
        .map(|(q, t)| match t {
            Some(t) => format!("{q}->{t}"),
            None => format!("{q}->-"),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn opt<T: std::fmt::Display>(v: Option<T>) -> String {
    v.map_or_else(|| "-".to_string(), |v| v.to_string())
}

/// Header line of one search: status, best cost, cost per link and stats.
fn header(nlink: usize, status: Status, cost: Option<i64>, stats: &SearchStats) -> String {
    let ratio = cost.map(|c| format!("{:.3}", c as f64 / nlink as f64));
    format!(
        "nlink={nlink} status={status} cost={} ratio={} backtracks={} nodes={} time_ms={:.3}\n",
        opt(cost),
        opt(ratio),
        stats.backtracks,
        stats.nodes,
        stats.time_ms
    )
}

fn result_block(out: &mut String, r: &NlinkResult, all_optimal: bool) {
    let o = &r.outcome;
    out.push_str(&header(
        r.nlink,
        o.status(),
        o.best().map(|b| b.cost),
        &o.stats,
    ));
    if all_optimal && o.status() == Status::Optimal {
        let _ = writeln!(out, "  optimal mappings: {}", o.solutions.len());
        for s in &o.solutions {
            let _ = writeln!(out, "  mapping: {}", mapping_text(&s.mapping));
        }
    } else if let Some(b) = o.best() {
        let _ = writeln!(out, "  mapping: {}", mapping_text(&b.mapping));
    }
}

pub fn solve_table(results: &[NlinkResult], sweep: bool, all_optimal: bool) -> String {
    let mut out = String::new();
    if sweep {
        let _ = writeln!(
            out,
            "sweep over nlink = 1..{}, sorted by increasing cost per link",
            results.len()
        );
    }
    for r in results {
        result_block(&mut out, r, all_optimal);
    }
    out
}

#[derive(Serialize)]
struct SolutionJson<'a> {
    mapping: &'a Mapping,
    cost: i64,
}

#[derive(Serialize)]
struct NlinkJson<'a> {
    nlink: usize,
    status: Status,
    cost: Option<i64>,
    ratio: Option<f64>,
    /// The best mapping, or every optimal one with `--all-optimal`.
    solutions: Vec<SolutionJson<'a>>,
    stats: &'a SearchStats,
}

#[derive(Serialize)]
struct SolveJson<'a> {
    instance: String,
    results: Vec<NlinkJson<'a>>,
}

pub fn solve_json(instance: &Path, results: &[NlinkResult], all_optimal: bool) -> Result<String> {
    let results = results
        .iter()
        .map(|r| {
            let o = &r.outcome;
            let picked: Vec<_> = if all_optimal && o.status() == Status::Optimal {
                o.solutions.iter().collect()
            } else {
                o.best().into_iter().collect()
            };
            NlinkJson {
                nlink: r.nlink,
                status: o.status(),
                cost: o.best().map(|b| b.cost),
                ratio: r.ratio(),
                solutions: picked
                    .into_iter()
                    .map(|s| SolutionJson {
                        mapping: &s.mapping,
                        cost: s.cost,
                    })
                    .collect(),
                stats: &o.stats,
            }
        })
        .collect();
    let doc = SolveJson {
        instance: instance.display().to_string(),
        results,
    };
    Ok(serde_json::to_string_pretty(&doc)? + "\n")
}

fn bound_name(b: YdBound) -> &'static str {
    match b {
        YdBound::Published => "published",
        YdBound::Widened => "widened",
    }
}

fn first_status(run: &DiverseOutcome) -> Status {
    match (run.optimum_stats.proven, run.solutions.is_empty()) {
        (false, _) => Status::Limit,
        (true, true) => Status::Infeasible,
        (true, false) => Status::Optimal,
    }
}

/// The first block matches `solve` for the same nlink; further solutions
/// follow with their diversity value and distance to the first.
pub fn diverse_table(nlink: usize, run: &DiverseOutcome) -> String {
    let mut out = header(
        nlink,
        first_status(run),
        run.solutions.first().map(|s| s.cost),
        &run.optimum_stats,
    );
    if let Some(first) = run.solutions.first() {
        let _ = writeln!(out, "  mapping: {}", mapping_text(&first.mapping));
    }
    if run.solutions.len() > 1 {
        let _ = writeln!(
            out,
            "diverse solutions: {} max_cost={} bound={} proven={}",
            run.solutions.len(),
            opt(run.max_cost),
            bound_name(run.bound),
            run.proven
        );
        for (k, s) in run.solutions.iter().enumerate().skip(1) {
            let _ = writeln!(
                out,
                "#{} cost={} yd={} hamming_to_1={} duplicate_of={} backtracks={} nodes={} time_ms={:.3}",
                k + 1,
                s.cost,
                opt(s.yd),
                s.hamming_to_first,
                opt(s.duplicate_of.map(|d| d + 1)),
                s.stats.backtracks,
                s.stats.nodes,
                s.stats.time_ms
            );
            let _ = writeln!(out, "  mapping: {}", mapping_text(&s.mapping));
        }
    }
    out
}

#[derive(Serialize)]
struct DiverseJson<'a> {
    instance: String,
    nlink: usize,
    k: usize,
    gap: Gap,
    status: Status,
    #[serde(flatten)]
    run: &'a DiverseOutcome,
}

pub fn diverse_json(
    instance: &Path,
    nlink: usize,
    k: usize,
    gap: Gap,
    run: &DiverseOutcome,
) -> Result<String> {
    let doc = DiverseJson {
        instance: instance.display().to_string(),
        nlink,
        k,
        gap,
        status: first_status(run),
        run,
    };
    Ok(serde_json::to_string_pretty(&doc)? + "\n")
}
