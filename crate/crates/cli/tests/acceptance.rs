//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
//! and exits non-zero if any fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use menuwalk::app::presets::Preset;
use menuwalk::app::{Action, ExecutedStep, WorldState};
use menuwalk::explorer::{
    epsilon_greedy_select, run_strategy, AbstractStateId, ExplorerConfig, QModel, Strategy,
};
use menuwalk::app::{Affordance, Verb, WidgetId};
use menuwalk::harness::{run_experiment, wilcoxon_paired_one_tail, ActionClass, ExperimentConfig, ExperimentResult};
use menuwalk::report::{format_output_entry, group_input_actions, Channel, OutputEntry};
use menuwalk::testplan::{triage, CoverageResult, DataClass};
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    id: &'static str,
    title: &'static str,
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Outcome {
    fn new(id: &'static str, title: &'static str) -> Self {
        Outcome { id, title, failures: Vec::new(), notes: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        let what = what.into();
        if ok {
            self.notes.push(what);
        } else {
            self.failures.push(what);
        }
    }

    fn print(&self) -> bool {
        let pass = self.failures.is_empty();
        let detail = if pass { self.notes.join("; ") } else { self.failures.join("; ") };
        println!("{} {:<3} {} — {}", if pass { "PASS" } else { "FAIL" }, self.id, self.title, detail);
        pass
    }
}

fn is_menu(template: &WorldState, a: &Action) -> bool {
    template.role(a.target()).is_some_and(|r| r.is_menu())
}

fn partitioned(template: &WorldState, actions: &[&Action]) -> bool {
    let menus: Vec<usize> =
        actions.iter().enumerate().filter(|(_, a)| is_menu(template, a)).map(|(i, _)| i).collect();
    menus.is_empty() || menus == [0]
}

fn criterion_1() -> Outcome {
    let mut o = Outcome::new("1", "partitioning invariant, SSRLS on erp-like, 5 seeds x 50 episodes");
    let started = Instant::now();
    let spec = Preset::ErpLike.spec();
    let catalog = Preset::ErpLike.catalog();
    let template = WorldState::build(&spec).unwrap();
    let (mut episodes, mut bad_episodes, mut witnesses, mut bad_witnesses) = (0, 0, 0, 0);
    for seed in 0..5 {
        let cfg = ExplorerConfig::default().with_strategy(Strategy::Ssrls).with_seed(seed);
        let run = run_strategy("erp-like", &spec, &catalog, &cfg).unwrap();
        for t in &run.tests {
            episodes += 1;
            let actions: Vec<&Action> = t.executed().map(|s| &s.action).collect();
            if !partitioned(&template, &actions) {
                bad_episodes += 1;
            }
        }
        for &s in run.model.states() {
            witnesses += 1;
            let w: Vec<&Action> = run.model.witness(s).unwrap().iter().map(|(a, _)| a).collect();
            if !partitioned(&template, &w) {
                bad_witnesses += 1;
            }
        }
    }
    let secs = started.elapsed().as_secs_f64();
    o.check(episodes == 250 && bad_episodes == 0, format!("{}/{episodes} episodes ok", episodes - bad_episodes));
    o.check(bad_witnesses == 0, format!("{}/{witnesses} witness paths ok", witnesses - bad_witnesses));
    o.check(secs < 120.0, format!("{secs:.1}s"));
    o
}

fn criterion_2(r: &ExperimentResult) -> Outcome {
    use ActionClass::*;
    use Strategy::*;
    let mut o = Outcome::new("2", "strategy patterns over 5 seeds on erp-like");
    let m = |s, c| r.mean(s, c);
    o.check(m(Rls, SaveOk) == 0.0, format!("(a) RLS SaveOK {:.1} = 0", m(Rls, SaveOk)));
    o.check(m(Ssrls, SaveOk) > 0.0, format!("(b) SSRLS SaveOK {:.1} > 0", m(Ssrls, SaveOk)));
    o.check(
        m(Ssrls, SaveKo) > m(Ssrls, SaveOk),
        format!("(c) SSRLS SaveKO {:.1} > SaveOK {:.1}", m(Ssrls, SaveKo), m(Ssrls, SaveOk)),
    );
    o.check(
        m(Rls, Menu) >= 3.0 * m(Ssrls, Menu),
        format!("(d) Menu RLS {:.1} >= 3 x SSRLS {:.1}", m(Rls, Menu), m(Ssrls, Menu)),
    );
    o.check(
        m(SsrlsPartitioning, Input) > m(Rls, Input),
        format!("(e) Input SSRLS_partitioning {:.1} > RLS {:.1}", m(SsrlsPartitioning, Input), m(Rls, Input)),
    );
    o
}

fn extra_properties(r: &ExperimentResult) -> Outcome {
    use ActionClass::*;
    use Strategy::*;
    let mut o = Outcome::new("2+", "further class-count properties on the same runs");
    let m = |s, c| r.mean(s, c);
    o.check(
        m(Ssrls, SaveOk) > m(SsrlsFillForms, SaveOk),
        format!("SaveOK SSRLS {:.1} > SSRLS_fillForms {:.1}", m(Ssrls, SaveOk), m(SsrlsFillForms, SaveOk)),
    );
    o.check(
        m(Ssrls, SaveKo) > m(Rls, SaveKo),
        format!("SaveKO SSRLS {:.1} > RLS {:.1}", m(Ssrls, SaveKo), m(Rls, SaveKo)),
    );
    let total: f64 = ActionClass::TABLE.iter().map(|c| m(Ssrls, *c)).sum();
    o.check((520.0..=1560.0).contains(&total), format!("SSRLS classified total {total:.0} within 1040 ± 50%"));
    for run in &r.runs {
        let selected: u64 = run.counts.iter().sum();
        let prefix = run.log.entries.iter().filter(|e| e.prefix).count() as u64;
        if selected + prefix != run.executed || !run.automaton.is_flow_conserving() {
            o.check(false, format!("{} seed {}: counts or automaton flow inconsistent", run.strategy, run.seed));
        }
    }
    o.check(true, format!("{} runs conserve counts and flow", r.runs.len()));
    o
}

fn criterion_3() -> Outcome {
    let mut o = Outcome::new("3", "Wilcoxon exact p vs brute-force sign enumeration");
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    for case in 0..1000 {
        let n = rng.random_range(1..=8);
        let spread = [3, 10, 1000][case % 3];
        let x: Vec<f64> = (0..n).map(|_| rng.random_range(0..spread) as f64).collect();
        let y: Vec<f64> = (0..n).map(|_| rng.random_range(0..spread) as f64).collect();
        let got = wilcoxon_paired_one_tail(&x, &y).unwrap();
        worst = worst.max((got - common::brute_force_wilcoxon(&x, &y)).abs());
    }
    o.check(worst <= 1e-12, format!("1000 cases n<=8, max |diff| {worst:e}"));
    let p = wilcoxon_paired_one_tail(&[1.0, 2.0, 3.0, 4.0, 5.0], &[3.0, 5.0, 7.0, 9.0, 11.0]).unwrap();
    o.check(p == 0.03125, format!("n=5 all positive: p = {p}"));
    o
}

fn criterion_4() -> Outcome {
    let mut o = Outcome::new("4", "report templates: sample invoice report and parse/format round trip");
    let steps = common::invoice_scenario();
    let refs: Vec<&ExecutedStep> = steps.iter().collect();
    let rows = group_input_actions("T3", &refs).unwrap();
    let lines = |es: &[OutputEntry]| es.iter().map(ToString::to_string).collect::<Vec<_>>();
    o.check(rows.len() == 3, format!("{} rows", rows.len()));
    if rows.len() == 3 {
        o.check(rows[0].actions == ["Select menu \"Invoices\""] && lines(&rows[0].outputs) == common::T3_1, "T3.1 exact");
        o.check(
            rows[1].actions == ["Click button \"New Invoice\""] && lines(&rows[1].outputs) == common::T3_2,
            "T3.2 exact",
        );
        let db: Vec<String> =
            rows[2].outputs.iter().filter(|e| e.channel() == Channel::Db).map(ToString::to_string).collect();
        o.check(rows[2].actions == common::T3_3_ACTIONS && db == [common::T3_3_DB], "T3.3 exact incl. DB insert line");
    }
    let mut runner = TestRunner::new_with_rng(
        Config { cases: 10_000, failure_persistence: None, ..Config::default() },
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    );
    let kinds = std::cell::RefCell::new(BTreeSet::new());
    let res = runner.run(&common::event(), |e| {
        let entry = format_output_entry(&e).map_err(|err| TestCaseError::fail(err.to_string()))?;
        let text = entry.to_string();
        let back: OutputEntry = text.parse().map_err(|err: menuwalk::report::EntryError| TestCaseError::fail(err.to_string()))?;
        if back != entry {
            return Err(TestCaseError::fail(format!("{text:?} reparsed differently")));
        }
        kinds.borrow_mut().insert(format!("{:?}", entry.kind()));
        Ok(())
    });
    o.check(res.is_ok(), format!("10000 random events round-trip{}", res.err().map(|e| format!(": {e}")).unwrap_or_default()));
    let kinds = kinds.into_inner();
    o.check(kinds.len() == 10, format!("{} of 10 templates exercised", kinds.len()));
    o
}

fn criterion_5(r: &ExperimentResult) -> Outcome {
    let mut o = Outcome::new("5", "row grouping partitions steps; fill run + click is one row");
    let mut runner = TestRunner::new_with_rng(
        Config { cases: 1_000, failure_persistence: None, ..Config::default() },
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    );
    let res = runner.run(&common::verbs(), |vs| common::grouping_holds_for_verbs(&vs).map_err(TestCaseError::fail));
    o.check(res.is_ok(), format!("1000 random sequences{}", res.err().map(|e| format!(": {e}")).unwrap_or_default()));

    // the explorer's own test cases, replayed from their logs
    let spec = Preset::ErpLike.spec();
    let mut checked = 0;
    let mut failures = Vec::new();
    for run in &r.runs {
        let tests = run.log.replay(&spec).unwrap();
        for t in &tests {
            let steps: Vec<&ExecutedStep> = t.executed().collect();
            let rows = group_input_actions(&t.id, &steps).unwrap();
            if let Err(e) = common::grouping_holds(&t.id, &steps, &rows) {
                failures.push(e);
            }
            checked += 1;
        }
    }
    o.check(failures.is_empty(), format!("{checked} generated test cases{}", failures.first().map(|e| format!(": {e}")).unwrap_or_default()));
    o
}

fn criterion_6(r: &ExperimentResult) -> Outcome {
    let mut o = Outcome::new("6", "coverage and oracle bookkeeping");
    let plan = Preset::ErpLike.plan().unwrap();
    let checks: Vec<_> = plan.checks().collect();
    let mut split: BTreeMap<&str, usize> = BTreeMap::new();
    for (_, c) in &checks {
        *split.entry(if c.data_class.verifiable() { "tracked" } else { c.data_class.name() }).or_default() += 1;
    }
    let want_split: BTreeMap<&str, usize> = [
        ("tracked", 310),
        (DataClass::GridContent.name(), 35),
        (DataClass::GraphicalAttribute.name(), 6),
        (DataClass::DbUntracked.name(), 12),
        (DataClass::External.name(), 45),
    ]
    .into_iter()
    .collect();
    o.check(
        plan.objectives.len() == 350 && checks.len() == 408 && split == want_split,
        format!("plan {} objectives, {} oracles, split {:?}", plan.objectives.len(), checks.len(), split),
    );
    let satisfied: BTreeSet<String> =
        plan.objectives.iter().filter(|ob| !ob.checks.is_empty()).map(|ob| ob.id.clone()).collect();
    let verified: BTreeSet<String> =
        checks.iter().filter(|(_, c)| c.data_class.verifiable()).map(|(_, c)| c.id.clone()).collect();
    let t = triage(&CoverageResult::from_flags(&plan, &satisfied, &verified));
    o.check(
        (t.manual_design, t.manual_replay, t.browse) == (99, 98, 310),
        format!("triage {}/{}/{}", t.manual_design, t.manual_replay, t.browse),
    );

    let rls = r.mean_satisfied(Strategy::Rls);
    let ssrls = r.mean_satisfied(Strategy::Ssrls);
    let cells: Vec<String> = rls
        .iter()
        .zip(&ssrls)
        .map(|((area, a), (_, b))| format!("{area} {b:.1}>={a:.1}"))
        .collect();
    let ok = rls.len() == 6 && rls.iter().zip(&ssrls).all(|((_, a), (_, b))| b >= a);
    o.check(ok, format!("mean satisfied objectives SSRLS vs RLS: {}", cells.join(", ")));
    o
}

fn tree(root: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for e in fs::read_dir(&dir).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.insert(p.strip_prefix(root).unwrap().to_path_buf(), fs::read(&p).unwrap());
            }
        }
    }
    out
}

fn cli(args: &[&str], out: &Path) -> bool {
    Command::new(env!("CARGO_BIN_EXE_menuwalk"))
        .env_remove("MENUWALK_OUT")
        .env("RUST_LOG", "error")
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .map(|o| o.status.success())
        .unwrap_or(false)
}

fn criterion_7() -> Outcome {
    let mut o = Outcome::new("7", "identical CLI invocations give byte-identical output directories");
    let invocations: [&[&str]; 3] = [
        &["run", "--episodes", "8", "--actions-per-episode", "15", "--repetitions", "3"],
        &["run", "--app-preset", "invoice-demo", "--episodes", "8", "--repetitions", "2", "--seed", "40"],
        &["explore", "--app-preset", "erp-like", "--strategy", "ssrls", "--episodes", "10", "--seed", "9"],
    ];
    for args in invocations {
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        let ok = cli(args, a.path()) && cli(args, b.path());
        let (ta, tb) = (tree(a.path()), tree(b.path()));
        o.check(ok && !ta.is_empty() && ta == tb, format!("`{}` ({} files)", args.join(" "), ta.len()));
    }
    o
}

fn criterion_8() -> Outcome {
    let mut o = Outcome::new("8", "Q-learning sanity");
    let (s0, s1, s2) = (AbstractStateId(0), AbstractStateId(1), AbstractStateId(2));
    let (alpha, gamma) = (0.9, 0.9);
    let mut m = QModel::new();
    m.set_initial(s0);
    let mut updates = 0;
    while (m.q(s0, "go") - gamma).abs() > 1e-6 && updates < 200 {
        m.q_update(s0, "go", 0.0, s1, alpha, gamma, &[]).unwrap();
        m.q_update(s1, "go", 1.0, s2, alpha, gamma, &[]).unwrap();
        updates += 2;
    }
    let err = (m.q(s0, "go") - gamma).abs();
    o.check(err <= 1e-6, format!("chain Q = {:.9} vs γ = {gamma} after {updates} updates", m.q(s0, "go")));

    let cands: Vec<Affordance> = (1..=6).map(|i| Affordance { target: WidgetId(i), verb: Verb::Click }).collect();
    let qs = [0.1, 0.9, 0.3, 0.3, 0.0, 0.5];
    let mut known = QModel::new();
    known.set_initial(s0);
    for (c, q) in cands.iter().zip(qs) {
        known.q_update(s0, &c.signature(), q, s1, 1.0, 0.0, &[]).unwrap();
    }
    for eps in [0.0, 1.0, 0.7] {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut counts = vec![0u64; cands.len()];
        for _ in 0..10_000 {
            let a = epsilon_greedy_select(&known, s0, &cands, eps, &mut rng).unwrap();
            counts[cands.iter().position(|c| *c == a).unwrap()] += 1;
        }
        let k = cands.len() as f64;
        let probs: Vec<f64> = (0..cands.len()).map(|i| eps / k + if i == 1 { 1.0 - eps } else { 0.0 }).collect();
        let p = common::chi_square_p(&counts, &probs);
        o.check(p > 0.01, format!("ε={eps}: χ² p = {p:.3}"));
    }
    o
}

fn main() {
    let started = Instant::now();
    let p = Preset::ErpLike;
    let mut cfg = ExperimentConfig::new(p.name(), p.spec(), p.catalog());
    cfg.plan = p.plan();
    let experiment = run_experiment(&cfg, None).expect("erp-like experiment");

    let outcomes = [
        criterion_1(),
        criterion_2(&experiment),
        extra_properties(&experiment),
        criterion_3(),
        criterion_4(),
        criterion_5(&experiment),
        criterion_6(&experiment),
        criterion_7(),
        criterion_8(),
    ];
    let failed = outcomes.iter().map(Outcome::print).filter(|ok| !ok).count();
    println!("acceptance: {} passed, {failed} failed in {:.1}s", outcomes.len() - failed, started.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
