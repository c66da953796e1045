//! Strategy × seed experiments and their on-disk artifacts.
//!
//! Layout under the output directory:
//! `logs/<strategy>-seed<k>.tsv`, `automata/<strategy>.dot`,
//! `reports/<strategy>/seed<k>/`, and `tables/*.csv`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::automaton::{build_automaton, InteractionAutomaton};
use super::classify::ActionClass;
use super::stats::{mean, summarize, wilcoxon_paired_one_tail, Summary};
use crate::app::AppSpec;
use crate::catalog::Catalog;
use crate::explorer::{run_strategy, ExplorerConfig, ExplorerError, RunLog, Strategy};
use crate::report::{generate_report, render_files, ReportError};
use crate::testplan::{coverage::percent, triage, verify_oracles, CoverageResult, TestPlan, TriageSummary};

#[derive(Debug, thiserror::Error)]
pub enum ExperimentError {
    #[error("{strategy} with seed {seed}: {source}")]
    Run {
        strategy: Strategy,
        seed: u64,
        #[source]
        source: ExplorerError,
    },
    #[error("{strategy} with seed {seed}: {source}")]
    Report {
        strategy: Strategy,
        seed: u64,
        #[source]
        source: ReportError,
    },
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("invalid experiment: {0}")]
    Config(String),
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub app_name: String,
    pub spec: AppSpec,
    pub catalog: Catalog,
    pub plan: Option<TestPlan>,
    /// Parameters shared by every run; strategy and seed are overridden.
    pub explorer: ExplorerConfig,
    pub strategies: Vec<Strategy>,
    pub seeds: Vec<u64>,
}

impl ExperimentConfig {
    pub fn new(app_name: &str, spec: AppSpec, catalog: Catalog) -> Self {
        ExperimentConfig {
            app_name: app_name.to_string(),
            spec,
            catalog,
            plan: None,
            explorer: ExplorerConfig::default(),
            strategies: Strategy::ALL.to_vec(),
            seeds: (0..5).collect(),
        }
    }
}

/// Everything kept from one strategy × seed run.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub strategy: Strategy,
    pub seed: u64,
    /// Selected (non-prefix) actions per class, `Other` included.
    pub counts: [u64; 6],
    /// All executed actions, prefixes included.
    pub executed: u64,
    pub automaton: InteractionAutomaton,
    pub coverage: Option<CoverageResult>,
    pub triage: Option<TriageSummary>,
    pub divergences: u64,
    pub log: RunLog,
    /// Rendered report sheets and index, by file name.
    pub report_files: Vec<(String, Vec<u8>)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StrategyStats {
    pub strategy: Strategy,
    /// Per table class; `None` when there are fewer than two repetitions.
    pub summary: Option<Vec<Summary>>,
    pub means: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub runs: Vec<RunSummary>,
    pub stats: Vec<StrategyStats>,
    /// p-values per table class for each non-RLS strategy against RLS.
    pub wilcoxon: Vec<(Strategy, Vec<f64>)>,
    pub automata: BTreeMap<Strategy, InteractionAutomaton>,
}

impl ExperimentResult {
    pub fn runs_of(&self, s: Strategy) -> impl Iterator<Item = &RunSummary> {
        self.runs.iter().filter(move |r| r.strategy == s)
    }

    /// Per-seed counts of `class` under strategy `s`.
    pub fn counts(&self, s: Strategy, class: ActionClass) -> Vec<f64> {
        self.runs_of(s).map(|r| r.counts[class.index()] as f64).collect()
    }

    pub fn mean(&self, s: Strategy, class: ActionClass) -> f64 {
        mean(&self.counts(s, class))
    }

    /// Mean satisfied objectives per area over the seeds of `s`.
    pub fn mean_satisfied(&self, s: Strategy) -> Vec<(String, f64)> {
        let covs: Vec<&CoverageResult> = self.runs_of(s).filter_map(|r| r.coverage.as_ref()).collect();
        let Some(first) = covs.first() else { return Vec::new() };
        first
            .areas
            .iter()
            .enumerate()
            .map(|(i, a)| (a.area.clone(), mean(&covs.iter().map(|c| c.areas[i].satisfied as f64).collect::<Vec<_>>())))
            .collect()
    }
}

fn one_run(cfg: &ExperimentConfig, strategy: Strategy, seed: u64) -> Result<RunSummary, ExperimentError> {
    let ecfg = cfg.explorer.clone().with_strategy(strategy).with_seed(seed);
    let run = run_strategy(&cfg.app_name, &cfg.spec, &cfg.catalog, &ecfg)
        .map_err(|source| ExperimentError::Run { strategy, seed, source })?;
    let mut counts = [0u64; 6];
    let mut executed = 0;
    for t in &run.tests {
        for s in &t.steps {
            executed += 1;
            if !s.prefix {
                counts[s.class.index()] += 1;
            }
        }
    }
    let (report, index) =
        generate_report(&run.tests).map_err(|e| ExperimentError::Report { strategy, seed, source: e.into() })?;
    let coverage = cfg.plan.as_ref().map(|p| verify_oracles(p, &run.tests, &report));
    let report_files =
        render_files(&report, &index).map_err(|source| ExperimentError::Report { strategy, seed, source })?;
    Ok(RunSummary {
        strategy,
        seed,
        counts,
        executed,
        automaton: build_automaton(&run.log),
        triage: coverage.as_ref().map(triage),
        coverage,
        divergences: run.divergences,
        log: run.log,
        report_files,
    })
}

/// Runs every strategy on every seed, aggregates, and writes artifacts to `out` if given.
pub fn run_experiment(cfg: &ExperimentConfig, out: Option<&Path>) -> Result<ExperimentResult, ExperimentError> {
    if cfg.strategies.is_empty() || cfg.seeds.is_empty() {
        return Err(ExperimentError::Config("need at least one strategy and one seed".into()));
    }
    cfg.explorer.validate().map_err(|e| ExperimentError::Config(e.to_string()))?;
    if cfg.seeds.len() < 2 {
        log::warn!("a single repetition: standard deviations and Wilcoxon tests are omitted");
    }
    let jobs: Vec<(Strategy, u64)> =
        cfg.strategies.iter().flat_map(|s| cfg.seeds.iter().map(move |seed| (*s, *seed))).collect();
    #[cfg(feature = "parallel")]
    let results: Vec<_> = jobs.par_iter().map(|(s, seed)| one_run(cfg, *s, *seed)).collect();
    #[cfg(not(feature = "parallel"))]
    let results: Vec<_> = jobs.iter().map(|(s, seed)| one_run(cfg, *s, *seed)).collect();
    let runs = results.into_iter().collect::<Result<Vec<_>, _>>()?;

    let mut result = ExperimentResult { runs, stats: Vec::new(), wilcoxon: Vec::new(), automata: BTreeMap::new() };
    for &s in &cfg.strategies {
        let per_class: Vec<Vec<f64>> = ActionClass::TABLE.iter().map(|c| result.counts(s, *c)).collect();
        let summary = per_class.iter().map(|xs| summarize(xs)).collect::<Result<Vec<_>, _>>().ok();
        result.stats.push(StrategyStats { strategy: s, summary, means: per_class.iter().map(|xs| mean(xs)).collect() });
        let mut a = InteractionAutomaton::default();
        for r in result.runs_of(s) {
            a.merge(&r.automaton);
        }
        result.automata.insert(s, a);
    }
    if cfg.seeds.len() >= 2 && cfg.strategies.contains(&Strategy::Rls) {
        for &s in cfg.strategies.iter().filter(|s| **s != Strategy::Rls) {
            let ps = ActionClass::TABLE
                .iter()
                .map(|c| wilcoxon_paired_one_tail(&result.counts(Strategy::Rls, *c), &result.counts(s, *c)).unwrap_or(1.0))
                .collect();
            result.wilcoxon.push((s, ps));
        }
    }
    if let Some(out) = out {
        write_artifacts(cfg, &result, out)?;
    }
    Ok(result)
}

fn put(path: &Path, bytes: &[u8]) -> Result<(), ExperimentError> {
    let io = |e: std::io::Error| ExperimentError::Io { path: path.to_path_buf(), message: e.to_string() };
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(io)?;
    }
    fs::write(path, bytes).map_err(io)
}

fn scaled_dot(a: &InteractionAutomaton, name: &str, runs: usize) -> String {
    let k = runs.max(1) as f64;
    let mut s = String::new();
    let _ = writeln!(s, "digraph \"{name}\" {{");
    let _ = writeln!(s, "  rankdir=LR;\n  label=\"{name}: mean weights over {runs} runs\";");
    for c in ActionClass::TABLE {
        let _ = writeln!(s, "  \"{c}\" [label=\"{c}\\n{:.1}\"];", a.node(c) as f64 / k);
    }
    for x in ActionClass::TABLE {
        for y in ActionClass::TABLE {
            let w = a.edge(x, y);
            if w > 0 {
                let _ = writeln!(s, "  \"{x}\" -> \"{y}\" [label=\"{:.1}\"];", w as f64 / k);
            }
        }
    }
    s.push_str("}\n");
    s
}

fn write_artifacts(cfg: &ExperimentConfig, r: &ExperimentResult, out: &Path) -> Result<(), ExperimentError> {
    for run in &r.runs {
        let tag = format!("{}-seed{}", run.strategy, run.seed);
        put(&out.join("logs").join(format!("{tag}.tsv")), run.log.to_tsv().as_bytes())?;
        let dir = out.join("reports").join(run.strategy.name()).join(format!("seed{}", run.seed));
        for (name, bytes) in &run.report_files {
            put(&dir.join(name), bytes)?;
        }
    }
    for (s, a) in &r.automata {
        put(&out.join("automata").join(format!("{s}.dot")), scaled_dot(a, s.name(), cfg.seeds.len()).as_bytes())?;
    }
    let tables = out.join("tables");
    put(&tables.join("action_counts.csv"), action_counts(r).as_bytes())?;
    put(&tables.join("action_classes.csv"), class_table(r).as_bytes())?;
    if !r.wilcoxon.is_empty() {
        put(&tables.join("wilcoxon.csv"), wilcoxon_table(r).as_bytes())?;
    }
    if cfg.plan.is_some() {
        put(&tables.join("coverage.csv"), coverage_table(cfg, r).as_bytes())?;
        put(&tables.join("oracles.csv"), oracle_table(cfg, r).as_bytes())?;
        put(&tables.join("triage.csv"), triage_table(r).as_bytes())?;
    }
    Ok(())
}

fn action_counts(r: &ExperimentResult) -> String {
    let mut s = String::from("strategy,seed");
    for c in ActionClass::ALL {
        let _ = write!(s, ",{c}");
    }
    s.push_str(",executed,divergences\n");
    for run in &r.runs {
        let _ = write!(s, "{},{}", run.strategy, run.seed);
        for c in ActionClass::ALL {
            let _ = write!(s, ",{}", run.counts[c.index()]);
        }
        let _ = writeln!(s, ",{},{}", run.executed, run.divergences);
    }
    s
}

fn class_table(r: &ExperimentResult) -> String {
    let mut s = String::from("class");
    for st in &r.stats {
        let _ = write!(s, ",{} m", st.strategy);
        if st.summary.is_some() {
            let _ = write!(s, ",{} s", st.strategy);
        }
    }
    s.push('\n');
    for (i, c) in ActionClass::TABLE.iter().enumerate() {
        let _ = write!(s, "{c}");
        for st in &r.stats {
            match &st.summary {
                Some(sum) => {
                    let _ = write!(s, ",{:.1},{:.1}", sum[i].mean, sum[i].sd);
                }
                None => {
                    let _ = write!(s, ",{:.1}", st.means[i]);
                }
            }
        }
        s.push('\n');
    }
    s
}

fn wilcoxon_table(r: &ExperimentResult) -> String {
    let mut s = String::from("alternative");
    for c in ActionClass::TABLE {
        let _ = write!(s, ",{c}");
    }
    s.push('\n');
    for (st, ps) in &r.wilcoxon {
        let _ = write!(s, "RLS < {st}");
        for p in ps {
            let _ = write!(s, ",{p:.5}");
        }
        s.push('\n');
    }
    s
}

fn strategies(r: &ExperimentResult) -> Vec<Strategy> {
    r.stats.iter().map(|s| s.strategy).collect()
}

fn coverage_table(cfg: &ExperimentConfig, r: &ExperimentResult) -> String {
    let plan = cfg.plan.as_ref().expect("plan present");
    let counts = plan.counts();
    let mut s = String::from("Functional area,Test objectives");
    for st in strategies(r) {
        let _ = write!(s, ",Satisfied w/ {st} (mean),%");
    }
    s.push('\n');
    let per: Vec<Vec<(String, f64)>> = strategies(r).into_iter().map(|st| r.mean_satisfied(st)).collect();
    let mut total_obj = 0;
    let mut totals = vec![0.0; per.len()];
    for area in plan.areas() {
        let n = counts[area].0;
        total_obj += n;
        let _ = write!(s, "{area},{n}");
        for (k, p) in per.iter().enumerate() {
            let v = p.iter().find(|(a, _)| a == area).map(|x| x.1).unwrap_or(0.0);
            totals[k] += v;
            let _ = write!(s, ",{v:.1},{}", percent_f(v, n));
        }
        s.push('\n');
    }
    let _ = write!(s, "Total,{total_obj}");
    for t in totals {
        let _ = write!(s, ",{t:.1},{}", percent_f(t, total_obj));
    }
    s.push('\n');
    s
}

fn percent_f(v: f64, n: usize) -> usize {
    if n == 0 { 0 } else { (100.0 * v / n as f64).round() as usize }
}

fn oracle_table(cfg: &ExperimentConfig, r: &ExperimentResult) -> String {
    let plan = cfg.plan.as_ref().expect("plan present");
    let mut s = String::from("strategy,Functional area,Reached oracles (mean),Verifiable (mean),Verified (mean),%\n");
    for st in strategies(r) {
        let covs: Vec<&CoverageResult> = r.runs_of(st).filter_map(|x| x.coverage.as_ref()).collect();
        let k = covs.len().max(1) as f64;
        let mut rows: Vec<String> = plan.areas().iter().map(|a| a.to_string()).collect();
        rows.push("Total".into());
        for area in rows {
            let pick = |c: &CoverageResult| if area == "Total" { c.total() } else { c.area(&area).cloned().unwrap_or_default() };
            let (mut re, mut ve, mut vd) = (0, 0, 0);
            for c in &covs {
                let a = pick(c);
                re += a.reached;
                ve += a.verifiable;
                vd += a.verified;
            }
            let _ = writeln!(
                s,
                "{st},{area},{:.1},{:.1},{:.1},{}",
                re as f64 / k,
                ve as f64 / k,
                vd as f64 / k,
                percent(vd, re)
            );
        }
    }
    s
}

fn triage_table(r: &ExperimentResult) -> String {
    let mut s = String::from("strategy,seed,manual test design (objectives),manual replay (oracles),report browsing (oracles)\n");
    for run in &r.runs {
        if let Some(t) = run.triage {
            let _ = writeln!(s, "{},{},{},{},{}", run.strategy, run.seed, t.manual_design, t.manual_replay, t.browse);
        }
    }
    s
}
