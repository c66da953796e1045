mod common;

use std::fs;
use std::path::Path;

use menuwalk::app::presets::Preset;
use menuwalk::app::{Action, WidgetKind, WorldState};
use menuwalk::explorer::{AbstractStateId, ExplorerConfig, LogEntry, RunLog, Strategy};
use menuwalk::harness::{
    build_automaton, classify_action, run_experiment, summarize, wilcoxon_paired_one_tail, ActionClass,
    ExperimentConfig, InteractionAutomaton, StatsError,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn wilcoxon_matches_brute_force_for_small_samples() {
    let mut rng = ChaCha8Rng::seed_from_u64(2019);
    for case in 0..1000 {
        let n = rng.random_range(1..=8);
        let spread = if case % 2 == 0 { 4 } else { 40 };
        let x: Vec<f64> = (0..n).map(|_| rng.random_range(0..spread) as f64).collect();
        let y: Vec<f64> = (0..n).map(|_| rng.random_range(0..spread) as f64).collect();
        let got = wilcoxon_paired_one_tail(&x, &y).unwrap();
        let want = common::brute_force_wilcoxon(&x, &y);
        assert!((got - want).abs() <= 1e-12, "x={x:?} y={y:?}: {got} vs {want}");
    }
}

#[test]
fn wilcoxon_fixed_cases() {
    let x = [10.0, 20.0, 30.0, 40.0, 50.0];
    let up = [11.0, 22.0, 33.0, 44.0, 55.0];
    assert_eq!(wilcoxon_paired_one_tail(&x, &up).unwrap(), 0.03125);
    assert_eq!(wilcoxon_paired_one_tail(&up, &x).unwrap(), 1.0);
    assert_eq!(wilcoxon_paired_one_tail(&x, &x).unwrap(), 1.0);
    assert_eq!(wilcoxon_paired_one_tail(&x, &x[..3]), Err(StatsError::LengthMismatch(5, 3)));
    assert_eq!(wilcoxon_paired_one_tail(&[], &[]), Err(StatsError::Empty));
}

#[test]
fn summaries() {
    let s = summarize(&[610.0; 5]).unwrap();
    assert_eq!((s.mean, s.sd), (610.0, 0.0));
    let s = summarize(&[1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
    assert_eq!(s.mean, 3.0);
    assert!((s.sd - 1.5811388300841898).abs() < 1e-12);
    assert_eq!(summarize(&[0.0; 5]).map(|s| (s.mean, s.sd)), Ok((0.0, 0.0)));
    assert!(summarize(&[3.0]).is_err());
}

fn entry(episode: usize, step: usize, class: ActionClass, prefix: bool) -> LogEntry {
    LogEntry {
        episode,
        step,
        signature: format!("click:w{step:04}"),
        class,
        reward: if prefix { None } else { Some(0.5) },
        from: AbstractStateId(0),
        to: AbstractStateId(1),
        prefix,
        value: None,
    }
}

fn log_of(episodes: &[Vec<ActionClass>]) -> RunLog {
    let entries = episodes
        .iter()
        .enumerate()
        .flat_map(|(e, cs)| cs.iter().enumerate().map(move |(i, c)| entry(e + 1, i + 1, *c, false)))
        .collect();
    RunLog { app: "t".into(), strategy: Strategy::Rls, seed: 0, episodes: episodes.len(), entries }
}

#[test]
fn automaton_small_cases() {
    use ActionClass::*;
    let a = build_automaton(&log_of(&[vec![Menu, Crud]]));
    assert_eq!((a.node(Menu), a.node(Crud), a.edge(Menu, Crud)), (1, 1, 1));
    assert_eq!(build_automaton(&log_of(&[])), InteractionAutomaton::default());

    // pairs never cross episodes
    let a = build_automaton(&log_of(&[vec![Menu], vec![Crud]]));
    assert_eq!(a.edge(Menu, Crud), 0);

    // prefix steps are not part of the selected test
    let mut log = log_of(&[vec![Crud, Input]]);
    log.entries.insert(0, entry(1, 0, Menu, true));
    let a = build_automaton(&log);
    assert_eq!((a.node(Menu), a.edge(Menu, Crud), a.edge(Crud, Input)), (0, 0, 1));
}

#[test]
fn automaton_reproduces_given_weights() {
    use ActionClass::*;
    // 227 episodes go Menu → CRUD, 383 stay on menus: 610 Menu visits
    let mut episodes = vec![vec![Menu, Crud, Input]; 227];
    episodes.extend(vec![vec![Menu, Other]; 383]);
    let a = build_automaton(&log_of(&episodes));
    assert_eq!(a.node(Menu), 610);
    assert_eq!(a.edge(Menu, Crud), 227);
    assert_eq!(a.node(Other), 0);
    assert!(a.is_flow_conserving());
}

#[test]
fn automata_of_real_runs_conserve_flow() {
    let cfg = small_config(Preset::Desk);
    let r = run_experiment(&cfg, None).unwrap();
    for run in &r.runs {
        assert!(run.automaton.is_flow_conserving(), "{} seed {}", run.strategy, run.seed);
        let selected: u64 = run.counts.iter().sum();
        let prefix = run.log.entries.iter().filter(|e| e.prefix).count() as u64;
        assert_eq!(selected + prefix, run.executed);
        let table: u64 = ActionClass::TABLE.iter().map(|c| run.automaton.node(*c)).sum();
        assert_eq!(table, selected - run.counts[ActionClass::Other.index()]);
    }
    for a in r.automata.values() {
        assert!(a.is_flow_conserving());
    }
}

#[test]
fn classify_examples() {
    let mut w = WorldState::build(&Preset::InvoiceDemo.spec()).unwrap();
    let id = |w: &WorldState, kind, label: &str| {
        w.gui().widgets.values().find(|x| x.kind == kind && x.title_label == label).unwrap().id
    };
    let s = w.step(&Action::select(id(&w, WidgetKind::GraphicalMenu, "Invoices"))).unwrap();
    assert_eq!(classify_action(&s), ActionClass::Menu);
    let s = w.step(&Action::click(id(&w, WidgetKind::Button, "New Invoice"))).unwrap();
    assert_eq!(classify_action(&s), ActionClass::Crud);
    let s = w.step(&Action::fill(id(&w, WidgetKind::TextField, "Invoice Name"), "x")).unwrap();
    assert_eq!(classify_action(&s), ActionClass::Input);
    let s = w.step(&Action::click(id(&w, WidgetKind::Button, "Close"))).unwrap();
    assert_eq!(classify_action(&s), ActionClass::SaveKo);
    w.step(&Action::click(id(&w, WidgetKind::Button, "New Invoice"))).unwrap();
    let s = w.step(&Action::click(id(&w, WidgetKind::Button, "Save"))).unwrap();
    assert_eq!(classify_action(&s), ActionClass::SaveKo);
    w.step(&Action::click(id(&w, WidgetKind::Button, "New Invoice"))).unwrap();
    for (label, v) in [
        ("Invoice Number", "1"),
        ("Invoice Name", "a"),
        ("Client Data - Name", "b"),
        ("Client Data - Surname", "c"),
        ("Client Data - Email", "d@e.it"),
    ] {
        w.step(&Action::fill(id(&w, WidgetKind::TextField, label), v)).unwrap();
    }
    let s = w.step(&Action::click(id(&w, WidgetKind::Button, "Save"))).unwrap();
    assert_eq!(classify_action(&s), ActionClass::SaveOk);
    let s = w.step(&Action::click(id(&w, WidgetKind::Button, "View"))).unwrap();
    assert_eq!(classify_action(&s), ActionClass::Crud);
    let s = w.step(&Action::click(id(&w, WidgetKind::Button, "Close"))).unwrap();
    assert_eq!(classify_action(&s), ActionClass::Other);
}

fn small_config(p: Preset) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(p.name(), p.spec(), p.catalog());
    cfg.plan = p.plan();
    cfg.explorer = ExplorerConfig { episodes: 15, actions_per_episode: 20, ..ExplorerConfig::default() };
    cfg.seeds = vec![0, 1, 2];
    cfg
}

fn tree(root: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for e in fs::read_dir(&dir).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.push((p.strip_prefix(root).unwrap().display().to_string(), fs::read(&p).unwrap()));
            }
        }
    }
    out.sort();
    out
}

#[test]
fn experiment_shape_and_byte_determinism() {
    let cfg = small_config(Preset::InvoiceDemo);
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let r = run_experiment(&cfg, Some(a.path())).unwrap();
    run_experiment(&cfg, Some(b.path())).unwrap();
    assert_eq!(r.runs.len(), 12);
    assert_eq!(r.automata.len(), 4);
    assert_eq!(r.stats.len(), 4);
    assert_eq!(r.wilcoxon.len(), 3);
    assert!(r.stats.iter().all(|s| s.summary.is_some()));
    let (ta, tb) = (tree(a.path()), tree(b.path()));
    assert_eq!(ta, tb);
    let names: Vec<&str> = ta.iter().map(|(n, _)| n.as_str()).collect();
    for f in [
        "tables/action_counts.csv",
        "tables/action_classes.csv",
        "tables/wilcoxon.csv",
        "tables/coverage.csv",
        "tables/oracles.csv",
        "tables/triage.csv",
        "automata/RLS.dot",
        "automata/SSRLS.dot",
        "logs/SSRLS-seed2.tsv",
        "reports/SSRLS/seed0/index.html",
    ] {
        assert!(names.contains(&f), "missing {f}");
    }
}

#[test]
fn single_repetition_drops_deviation_and_wilcoxon() {
    let mut cfg = small_config(Preset::Desk);
    cfg.seeds = vec![7];
    let out = tempfile::tempdir().unwrap();
    let r = run_experiment(&cfg, Some(out.path())).unwrap();
    assert!(r.stats.iter().all(|s| s.summary.is_none() && s.means.len() == 5));
    assert!(r.wilcoxon.is_empty());
    assert!(!out.path().join("tables/wilcoxon.csv").exists());
    let classes = fs::read_to_string(out.path().join("tables/action_classes.csv")).unwrap();
    assert!(!classes.contains(" s"), "{classes}");
}

#[test]
fn bad_experiment_configs_are_rejected() {
    let mut cfg = small_config(Preset::Desk);
    cfg.seeds.clear();
    assert!(run_experiment(&cfg, None).is_err());
    let mut cfg = small_config(Preset::Desk);
    cfg.explorer.epsilon = 2.0;
    assert!(run_experiment(&cfg, None).is_err());
}
