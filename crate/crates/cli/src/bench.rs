//! Benchmark protocol: instance sets of increasing query size on a fixed
//! target size, every nlink minimized on every instance.
//!
//! Instance seeds are drawn in order (set by set, query size by query size)
//! from one SplitMix64 stream, so an instance does not depend on how the
//! work is spread over threads.

use std::fmt::Write as _;

use anyhow::{bail, Context, Result};
use fragmap_core::instance::{generate_instance, GeneratorConfig};
use fragmap_core::search::minimize;
use fragmap_core::{SearchConfig, Status};
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use rayon::prelude::*;
use statrs::statistics::{Data, Distribution, Max, Median, Min};

use crate::args::BenchArgs;
use crate::{effective_seed, search_config, EXIT_LIMIT, EXIT_OK};

#[derive(Debug, Clone, PartialEq)]
pub struct BenchSpec {
    pub sets: usize,
    pub nq_min: usize,
    pub nq_max: usize,
    pub nq_step: usize,
    pub nt: usize,
    pub smax: i64,
    pub delta: i64,
    pub seed: u64,
    pub jobs: usize,
    pub search: SearchConfig,
}

impl BenchSpec {
    pub fn validate(&self) -> Result<()> {
        if self.sets == 0 {
            bail!("--sets must be at least 1");
        }
        if self.nq_min == 0 || self.nq_min > self.nq_max {
            bail!("need 1 <= --nq-min <= --nq-max");
        }
        if self.nq_step == 0 {
            bail!("--nq-step must be at least 1");
        }
        if self.nt < self.nq_max {
            bail!(
                "--nt ({}) must be at least --nq-max ({})",
                self.nt,
                self.nq_max
            );
        }
        if self.jobs == 0 {
            bail!("--jobs must be at least 1");
        }
        Ok(())
    }

    pub fn query_sizes(&self) -> Vec<usize> {
        (self.nq_min..=self.nq_max).step_by(self.nq_step).collect()
    }

    /// `(instance id, generator configuration)` for every instance, in order.
    pub fn instances(&self) -> Vec<(usize, GeneratorConfig)> {
        let mut rng = SplitMix64::seed_from_u64(self.seed);
        let sizes = self.query_sizes();
        let mut out = Vec::with_capacity(self.sets * sizes.len());
        for _ in 0..self.sets {
            for &nq in &sizes {
                let cfg = GeneratorConfig {
                    n_query: nq,
                    n_target: self.nt,
                    score_max: self.smax,
                    delta: self.delta,
                    seed: rng.next_u64(),
                };
                out.push((out.len(), cfg));
            }
        }
        out
    }
}

/// One minimization.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub instance_id: usize,
    pub n_q: usize,
    pub n_t: usize,
    pub nlink: usize,
    pub status: Status,
    pub cost: Option<i64>,
    pub backtracks: u64,
    pub time_ms: f64,
}

pub const CSV_HEADER: &str = "instance_id,n_q,n_t,nlink,status,cost,backtracks,time_ms";

impl Row {
    pub fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{:.3}",
            self.instance_id,
            self.n_q,
            self.n_t,
            self.nlink,
            self.status,
            self.cost.map_or_else(String::new, |c| c.to_string()),
            self.backtracks,
            self.time_ms
        )
    }
}

fn run_instance(id: usize, cfg: &GeneratorConfig, search: &SearchConfig) -> Result<Vec<Row>> {
    let inst = generate_instance(cfg)?;
    (1..=cfg.n_query)
        .map(|nlink| {
            let out = minimize(&inst, nlink, search)?;
            Ok(Row {
                instance_id: id,
                n_q: cfg.n_query,
                n_t: cfg.n_target,
                nlink,
                status: out.status(),
                cost: out.best().map(|b| b.cost),
                backtracks: out.stats.backtracks,
                time_ms: out.stats.time_ms,
            })
        })
        .collect()
}

/// Every row, ordered by instance id then nlink, whatever `jobs` is.
pub fn run_bench(spec: &BenchSpec) -> Result<Vec<Row>> {
    spec.validate()?;
    let instances = spec.instances();
    let per_instance: Vec<Result<Vec<Row>>> = if spec.jobs == 1 {
        instances
            .iter()
            .map(|(id, cfg)| run_instance(*id, cfg, &spec.search))
            .collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(spec.jobs)
            .build()
            .context("cannot start worker threads")?;
        pool.install(|| {
            instances
                .par_iter()
                .map(|(id, cfg)| run_instance(*id, cfg, &spec.search))
                .collect()
        })
    };
    let mut rows = Vec::new();
    for r in per_instance {
        rows.extend(r?);
    }
    Ok(rows)
}

/// Mean, sample standard deviation, min, median and max.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aggregate {
    pub mean: f64,
    pub std_dev: f64,
    pub min: f64,
    pub median: f64,
    pub max: f64,
}

pub fn aggregate(values: &[f64]) -> Option<Aggregate> {
    if values.is_empty() {
        return None;
    }
    let data = Data::new(values.to_vec());
    Some(Aggregate {
        mean: data.mean()?,
        std_dev: data.std_dev().unwrap_or(0.0),
        min: data.min(),
        median: data.median(),
        max: data.max(),
    })
}

pub fn summary(spec: &BenchSpec, rows: &[Row]) -> String {
    let count = |s: Status| rows.iter().filter(|r| r.status == s).count();
    let (optimal, infeasible, limit) = (
        count(Status::Optimal),
        count(Status::Infeasible),
        count(Status::Limit),
    );
    let with_solution = rows.iter().filter(|r| r.cost.is_some()).count();
    let mut out = String::new();
    let sizes: Vec<String> = spec.query_sizes().iter().map(|n| n.to_string()).collect();
    let _ = writeln!(
        out,
        "problems: {} ({} sets x n_q {{{}}}, n_t={}, scores [1,{}], delta={}, seed={})",
        rows.len(),
        spec.sets,
        sizes.join(","),
        spec.nt,
        spec.smax,
        spec.delta,
        spec.seed
    );
    let _ = writeln!(
        out,
        "proven: {}  optimal: {optimal}  infeasible: {infeasible}  limit: {limit}",
        optimal + infeasible
    );
    let _ = writeln!(out, "problems with a solution: {with_solution}");
    let _ = writeln!(
        out,
        "{:<12}{:>14}{:>14}{:>14}{:>14}{:>14}",
        "", "mean", "std_dev", "min", "median", "max"
    );
    let backtracks: Vec<f64> = rows.iter().map(|r| r.backtracks as f64).collect();
    let times: Vec<f64> = rows.iter().map(|r| r.time_ms).collect();
    for (name, values) in [("backtracks", &backtracks), ("time_ms", &times)] {
        if let Some(a) = aggregate(values) {
            let _ = writeln!(
                out,
                "{name:<12}{:>14.3}{:>14.3}{:>14.3}{:>14.3}{:>14.3}",
                a.mean, a.std_dev, a.min, a.median, a.max
            );
        }
    }
    out
}

pub fn csv(rows: &[Row]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.csv());
        out.push('\n');
    }
    out
}

pub fn cmd_bench(a: &BenchArgs) -> Result<i32> {
    let spec = BenchSpec {
        sets: a.sets,
        nq_min: a.nq_min,
        nq_max: a.nq_max,
        nq_step: a.nq_step,
        nt: a.nt,
        smax: a.smax,
        delta: a.delta,
        seed: effective_seed(a.seed)?,
        jobs: a.jobs,
        search: search_config(&a.limits),
    };
    let rows = run_bench(&spec)?;
    let mut text = summary(&spec, &rows);
    match &a.csv {
        Some(p) => std::fs::write(p, csv(&rows))
            .with_context(|| format!("cannot write {}", p.display()))?,
        None => {
            text.push('\n');
            text.push_str(&csv(&rows));
        }
    }
    print!("{text}");
    Ok(if rows.iter().any(|r| r.status == Status::Limit) {
        EXIT_LIMIT
    } else {
        EXIT_OK
    })
}
