//! Command-line front end: solving, diverse solutions, instance generation,
//! histogram scoring and benchmark runs.
//!
//! Exit codes: 0 when every search finished (optimal or proven
//! infeasible), 1 on usage or data errors, 2 when a search limit was hit.

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::Parser;
use fragmap_core::diversity::{diverse_solutions, Gap, YdBound};
use fragmap_core::instance::{
    build_score_matrix, generate_instance, load_histograms, load_instance, save_instance,
    GeneratorConfig,
};
use fragmap_core::oracle::oracle_solve;
use fragmap_core::search::{all_optimal, minimize, sort_by_ratio, NlinkResult};
use fragmap_core::{FragmentTree, Instance, SearchConfig, Status};

pub mod args;
pub mod bench;
pub mod report;

use args::{
    Cli, Command, DiverseArgs, Format, GenArgs, LimitArgs, OracleArgs, ScoreArgs, SolveArgs,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_LIMIT: i32 = 2;

/// Environment variable that, when set, replaces every `--seed`.
pub const SEED_ENV: &str = "FRAGMAP_SEED";

/// Parses `args` (program name first), runs the command and returns the
/// exit code. Errors are reported on standard error.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_ERROR
        }
    }
}

fn dispatch(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Solve(a) => cmd_solve(&a),
        Command::Diverse(a) => cmd_diverse(&a),
        Command::Gen(a) => cmd_gen(&a),
        Command::Score(a) => cmd_score(&a),
        Command::Bench(a) => bench::cmd_bench(&a),
        Command::Oracle(a) => cmd_oracle(&a),
    }
}

/// The seed to use: `FRAGMAP_SEED` when set, otherwise the flag.
pub fn effective_seed(flag: u64) -> Result<u64> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .with_context(|| format!("{SEED_ENV}={v:?} is not an unsigned integer")),
        Err(_) => Ok(flag),
    }
}

pub fn search_config(limits: &LimitArgs) -> SearchConfig {
    SearchConfig {
        time_limit: limits.time_limit.map(Duration::from_millis),
        backtrack_limit: limits.backtracks,
        strong_alldiff: limits.strong_alldiff,
        ..SearchConfig::default()
    }
}

/// Parses `q=t` pairs; `t` may be `-` or `-1` for the dummy target.
pub fn parse_fixes(items: &[String]) -> Result<Vec<(usize, Option<usize>)>> {
    let mut out = Vec::new();
    for item in items.iter().map(|s| s.trim()).filter(|s| !s.is_empty()) {
        let (q, t) = item
            .split_once('=')
            .with_context(|| format!("--fix entry {item:?} is not of the form q=t"))?;
        let q: usize = q
            .trim()
            .parse()
            .with_context(|| format!("--fix entry {item:?}: bad query index"))?;
        let t = match t.trim() {
            "-" | "-1" => None,
            t => Some(
                t.parse()
                    .with_context(|| format!("--fix entry {item:?}: bad target index"))?,
            ),
        };
        out.push((q, t));
    }
    Ok(out)
}

fn load_with_fixes(path: &Path, fixes: &[String]) -> Result<Instance> {
    let inst =
        load_instance(path).with_context(|| format!("cannot load instance {}", path.display()))?;
    let extra = parse_fixes(fixes)?;
    if extra.is_empty() {
        return Ok(inst);
    }
    let mut fixed = inst.fixed().to_vec();
    fixed.extend(extra);
    Ok(inst.with_fixed(fixed)?)
}

fn resolve_nlink(flag: Option<usize>, inst: &Instance) -> Result<usize> {
    match flag.or(inst.nlink()) {
        Some(k) => Ok(k),
        None => bail!("give --nlink (the instance does not set one) or --sweep"),
    }
}

fn emit(text: &str, output: Option<&Path>) -> Result<()> {
    match output {
        Some(p) => std::fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(stdout.flush()?)
        }
    }
}

fn exit_for(statuses: impl IntoIterator<Item = Status>) -> i32 {
    if statuses.into_iter().any(|s| s == Status::Limit) {
        EXIT_LIMIT
    } else {
        EXIT_OK
    }
}

fn cmd_solve(a: &SolveArgs) -> Result<i32> {
    let inst = load_with_fixes(&a.instance, &a.fix)?;
    let cfg = search_config(&a.limits);
    let solve_one = |nlink: usize| -> Result<NlinkResult> {
        let outcome = if a.all_optimal {
            all_optimal(&inst, nlink, &cfg)?
        } else {
            minimize(&inst, nlink, &cfg)?
        };
        Ok(NlinkResult { nlink, outcome })
    };
    let mut results = if a.sweep {
        (1..=inst.n_query())
            .map(solve_one)
            .collect::<Result<Vec<_>>>()?
    } else {
        vec![solve_one(resolve_nlink(a.nlink, &inst)?)?]
    };
    if a.sweep {
        sort_by_ratio(&mut results);
    }
    let text = match a.out.format {
        Format::Table => report::solve_table(&results, a.sweep, a.all_optimal),
        Format::Json => report::solve_json(&a.instance, &results, a.all_optimal)?,
    };
    emit(&text, a.out.output.as_deref())?;
    Ok(exit_for(results.iter().map(|r| r.outcome.status())))
}

fn cmd_diverse(a: &DiverseArgs) -> Result<i32> {
    let inst = load_with_fixes(&a.instance, &a.fix)?;
    let nlink = resolve_nlink(a.nlink, &inst)?;
    if a.k == 0 {
        bail!("--k must be at least 1");
    }
    let gap = match (a.gap, a.gap_pct) {
        (Some(g), None) if g >= 0 => Gap::Absolute(g),
        (Some(g), None) => bail!("--gap must be non-negative, got {g}"),
        (None, Some(p)) => Gap::Percent(p),
        _ => bail!("give exactly one of --gap and --gap-pct"),
    };
    let bound = if a.widen_yd {
        YdBound::Widened
    } else {
        YdBound::Published
    };
    let cfg = search_config(&a.limits);
    let run = diverse_solutions(&inst, nlink, a.k, gap, &cfg, bound)?;
    let text = match a.out.format {
        Format::Table => report::diverse_table(nlink, &run),
        Format::Json => report::diverse_json(&a.instance, nlink, a.k, gap, &run)?,
    };
    emit(&text, a.out.output.as_deref())?;
    Ok(if run.proven { EXIT_OK } else { EXIT_LIMIT })
}

fn cmd_gen(a: &GenArgs) -> Result<i32> {
    let seed = effective_seed(a.seed)?;
    let cfg = GeneratorConfig {
        n_query: a.nq,
        n_target: a.nt,
        score_max: a.smax,
        delta: a.delta,
        seed,
    };
    let inst = generate_instance(&cfg)?.with_nlink(a.nlink)?;
    save_instance(&inst, &a.out).with_context(|| format!("cannot write {}", a.out.display()))?;
    println!(
        "wrote {}: n_q={} n_t={} smax={} delta={} seed={}",
        a.out.display(),
        a.nq,
        a.nt,
        a.smax,
        a.delta,
        seed
    );
    Ok(EXIT_OK)
}

/// Parses `a-b,c-d,...` into an edge list.
pub fn parse_edges(text: &str) -> Result<Vec<(usize, usize)>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|e| {
            let (a, b) = e
                .split_once('-')
                .with_context(|| format!("edge {e:?} is not of the form a-b"))?;
            Ok((
                a.trim().parse().with_context(|| format!("edge {e:?}"))?,
                b.trim().parse().with_context(|| format!("edge {e:?}"))?,
            ))
        })
        .collect()
}

fn cmd_score(a: &ScoreArgs) -> Result<i32> {
    let load = |p: &Path| {
        load_histograms(p).with_context(|| format!("cannot read histograms {}", p.display()))
    };
    let qh = load(&a.query_hist)?;
    let th = load(&a.target_hist)?;
    let query = FragmentTree::new(qh.len(), &parse_edges(&a.query_edges)?)
        .context("query edges do not form a tree over the query fragments")?;
    let target = FragmentTree::new(th.len(), &parse_edges(&a.target_edges)?)
        .context("target edges do not form a tree over the target fragments")?;
    let scores = build_score_matrix(&qh, &th)?;
    let inst = Instance::new(query, target, scores, a.delta, a.nlink, Vec::new())?;
    save_instance(&inst, &a.out).with_context(|| format!("cannot write {}", a.out.display()))?;
    println!(
        "wrote {}: {}x{} score matrix, max score {}, delta={}",
        a.out.display(),
        qh.len(),
        th.len(),
        inst.scores().max_score(),
        a.delta
    );
    Ok(EXIT_OK)
}

fn cmd_oracle(a: &OracleArgs) -> Result<i32> {
    let inst = load_instance(&a.instance)?;
    let nlink = resolve_nlink(a.nlink, &inst)?;
    let feasible = oracle_solve(&inst, nlink)?;
    let mut out = format!("nlink={nlink} feasible={}", feasible.entries.len());
    match feasible.min_cost() {
        Some(c) => out.push_str(&format!(" cost={c}\n")),
        None => out.push_str(" cost=-\n"),
    }
    for m in feasible.optimal() {
        out.push_str(&format!("  mapping: {}\n", report::mapping_text(&m)));
    }
    emit(&out, None)?;
    Ok(EXIT_OK)
}
