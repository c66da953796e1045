//! Episodes: RLS and the semi-systematic variants.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::abstraction::{abstract_state, reward, AbstractStateId};
use super::complex::{FillScope, FormFiller};
use super::config::{ExplorerConfig, Strategy};
use super::model::{QModel, WitnessStep};
use super::policy::{epsilon_greedy_select, maybe_complex_action};
use super::runlog::{LogEntry, RunLog};
use super::ExplorerError;
use crate::app::{Action, Affordance, AppSpec, ExecutedStep, Verb, WorldState};
use crate::catalog::Catalog;
use crate::harness::classify::{classify_action, ActionClass};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestStep {
    pub step: ExecutedStep,
    /// Replayed to reach the episode's start state; not learned from.
    pub prefix: bool,
    pub class: ActionClass,
    pub reward: Option<f64>,
    pub from: AbstractStateId,
    pub to: AbstractStateId,
}

/// One episode, replayable from a freshly built application.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestCase {
    /// `T1`, `T2`, ... in generation order.
    pub id: String,
    pub strategy: Strategy,
    pub seed: u64,
    pub steps: Vec<TestStep>,
}

impl TestCase {
    pub fn executed(&self) -> impl Iterator<Item = &ExecutedStep> {
        self.steps.iter().map(|s| &s.step)
    }

    /// Steps after the start-state prefix.
    pub fn selected(&self) -> impl Iterator<Item = &TestStep> {
        self.steps.iter().filter(|s| !s.prefix)
    }
}

/// Everything one strategy run produces.
#[derive(Debug, Clone)]
pub struct ExplorationRun {
    pub tests: Vec<TestCase>,
    pub model: QModel,
    pub log: RunLog,
    /// Witness replays that did not reach their recorded state.
    pub divergences: u64,
}

pub struct Explorer {
    cfg: ExplorerConfig,
    template: WorldState,
    catalog: Catalog,
    model: QModel,
    rng: ChaCha8Rng,
    divergences: u64,
    tests: Vec<TestCase>,
}

/// A world being driven through an episode, with its path from reset.
struct Cursor {
    world: WorldState,
    path: Vec<WitnessStep>,
    steps: Vec<TestStep>,
}

impl Explorer {
    pub fn new(spec: &AppSpec, catalog: Catalog, cfg: ExplorerConfig) -> Result<Self, ExplorerError> {
        cfg.validate()?;
        let template = WorldState::build(spec)?;
        let mut model = QModel::new();
        model.set_initial(abstract_state(template.gui()));
        let rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        Ok(Explorer { cfg, template, catalog, model, rng, divergences: 0, tests: Vec::new() })
    }

    pub fn model(&self) -> &QModel {
        &self.model
    }

    pub fn model_mut(&mut self) -> &mut QModel {
        &mut self.model
    }

    pub fn divergences(&self) -> u64 {
        self.divergences
    }

    pub fn config(&self) -> &ExplorerConfig {
        &self.cfg
    }

    pub fn fresh_world(&self) -> WorldState {
        self.template.clone()
    }

    /// Resets the application and replays the witness of a uniformly chosen
    /// model state. If the replay does not reproduce the recorded states the
    /// application is reset again and the episode starts from home.
    pub fn go_to_random_state(&mut self) -> (WorldState, Vec<ExecutedStep>, Vec<WitnessStep>) {
        let states = self.model.states();
        if states.is_empty() {
            return (self.fresh_world(), Vec::new(), Vec::new());
        }
        let target = if self.cfg.strategy.partitioning() {
            self.pick_partitioned_state()
        } else {
            states[self.rng.random_range(0..states.len())]
        };
        let witness = self.model.witness(target).unwrap_or_default().to_vec();
        let mut world = self.fresh_world();
        let mut steps = Vec::with_capacity(witness.len());
        for (action, expected) in &witness {
            match world.step(action) {
                Ok(step) if abstract_state(world.gui()) == *expected => steps.push(step),
                _ => {
                    self.divergences += 1;
                    log::debug!("witness replay diverged towards {target}; restarting from home");
                    return (self.fresh_world(), Vec::new(), Vec::new());
                }
            }
        }
        (world, steps, witness)
    }

    /// Two-stage draw used under menu partitioning: a partition (keyed by the
    /// menu that opens every witness in it, or none for the home page) first,
    /// then a state inside it. Drawing states directly lets whichever menu was
    /// explored first absorb nearly every later episode.
    fn pick_partitioned_state(&mut self) -> AbstractStateId {
        let mut partitions: BTreeMap<Option<String>, Vec<AbstractStateId>> = BTreeMap::new();
        for &s in self.model.states() {
            let key = self.model.witness(s).and_then(|w| w.first()).map(|(a, _)| a.signature());
            partitions.entry(key).or_default().push(s);
        }
        let groups: Vec<&Vec<AbstractStateId>> = partitions.values().collect();
        let group = groups[self.rng.random_range(0..groups.len())];
        group[self.rng.random_range(0..group.len())]
    }

    fn execute(&mut self, cur: &mut Cursor, action: &Action) -> Result<(), ExplorerError> {
        let prev_gui = cur.world.gui().clone();
        let from = abstract_state(&prev_gui);
        let step = cur.world.step(action)?;
        let to = abstract_state(cur.world.gui());
        let r = reward(&prev_gui, cur.world.gui(), &self.model);
        cur.path.push((action.clone(), to));
        self.model
            .q_update(from, &action.signature(), r, to, self.cfg.alpha, self.cfg.gamma, &cur.path)?;
        let class = classify_action(&step);
        cur.steps.push(TestStep { step, prefix: false, class, reward: Some(r), from, to });
        Ok(())
    }

    /// Binds an affordance to a concrete action, drawing input values from the
    /// catalog (fills) or the widget's options (picks).
    fn bind(&mut self, world: &WorldState, a: Affordance) -> Result<Action, ExplorerError> {
        let widget = world.gui().widget(a.target).ok_or(ExplorerError::NoCandidates)?;
        Ok(match a.verb {
            Verb::Fill => a.with_input(self.catalog.lookup(&widget.title_label, &mut self.rng))?,
            Verb::Pick => {
                let opts = &widget.possible_values;
                a.with_input(opts[self.rng.random_range(0..opts.len())].clone())?
            }
            Verb::Click | Verb::Select => a.bind()?,
        })
    }

    fn candidates(&self, world: &WorldState, menus: MenuFilter) -> Vec<Affordance> {
        world
            .affordances()
            .into_iter()
            .filter(|a| {
                let is_menu = world.role(a.target).is_some_and(|r| r.is_menu());
                match menus {
                    MenuFilter::Any => true,
                    MenuFilter::Partitions => {
                        matches!(world.role(a.target), Some(crate::app::WidgetRole::EntityMenu(_)))
                    }
                    MenuFilter::Exclude => !is_menu,
                }
            })
            // picks need something to pick
            .filter(|a| {
                a.verb != Verb::Pick
                    || world.gui().widget(a.target).is_some_and(|w| !w.possible_values.is_empty())
            })
            .collect()
    }

    fn greedy_step(&mut self, cur: &mut Cursor, menus: MenuFilter) -> Result<bool, ExplorerError> {
        let candidates = self.candidates(&cur.world, menus);
        if candidates.is_empty() {
            return Ok(false);
        }
        let s = abstract_state(cur.world.gui());
        let chosen = epsilon_greedy_select(&self.model, s, &candidates, self.cfg.epsilon, &mut self.rng)?;
        let action = self.bind(&cur.world, chosen)?;
        self.execute(cur, &action)?;
        Ok(true)
    }

    /// Runs a complex action to completion; returns the number of GUI actions.
    fn complex_block(&mut self, cur: &mut Cursor, scope: FillScope) -> Result<usize, ExplorerError> {
        let mut filler = FormFiller::start(&cur.world, scope)?;
        let mut n = 0;
        loop {
            let catalog = &self.catalog;
            let Some(action) = filler.next_action(&cur.world, catalog, &mut self.rng) else { break };
            self.execute(cur, &action)?;
            n += 1;
        }
        Ok(n)
    }

    /// Generates one test case and learns from it.
    pub fn run_episode(&mut self) -> Result<&TestCase, ExplorerError> {
        let strategy = self.cfg.strategy;
        let (world, prefix, path) = self.go_to_random_state();
        let mut cur = Cursor { world: self.fresh_world(), path: Vec::new(), steps: Vec::new() };
        let mut menu_done = false;
        let initial = abstract_state(self.template.gui());
        for (i, step) in prefix.into_iter().enumerate() {
            let from = if i == 0 { initial } else { path[i - 1].1 };
            menu_done |= step.role.is_menu();
            let class = classify_action(&step);
            cur.steps.push(TestStep { step, prefix: true, class, reward: None, from, to: path[i].1 });
        }
        cur.world = world;
        cur.path = path;

        let budget = self.cfg.actions_per_episode;
        let mut used = 0;
        let menus = if strategy.partitioning() {
            if !menu_done && used < budget
                && self.greedy_step(&mut cur, MenuFilter::Partitions)? {
                    used += 1;
                }
            MenuFilter::Exclude
        } else {
            MenuFilter::Any
        };
        while used < budget {
            if strategy.fill_forms() && maybe_complex_action(cur.world.gui(), self.cfg.pi, &mut self.rng) {
                used += self.complex_block(&mut cur, FillScope::AllTabs)?;
                continue;
            }
            if maybe_complex_action(cur.world.gui(), self.cfg.p_complex, &mut self.rng) {
                used += self.complex_block(&mut cur, FillScope::VisibleTab)?;
                continue;
            }
            if !self.greedy_step(&mut cur, menus)? {
                // nothing left to do without leaving the partition
                break;
            }
            used += 1;
        }
        let id = format!("T{}", self.tests.len() + 1);
        self.tests.push(TestCase { id, strategy, seed: self.cfg.seed, steps: cur.steps });
        Ok(self.tests.last().expect("just pushed"))
    }

    pub fn run(mut self, app_name: &str) -> Result<ExplorationRun, ExplorerError> {
        for _ in 0..self.cfg.episodes {
            self.run_episode()?;
        }
        let log = RunLog::from_tests(app_name, self.cfg.strategy, self.cfg.seed, &self.tests);
        Ok(ExplorationRun { tests: self.tests, model: self.model, log, divergences: self.divergences })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum MenuFilter {
    Any,
    Partitions,
    Exclude,
}

/// Runs `cfg.episodes` episodes of `cfg.strategy` against a fresh application.
pub fn run_strategy(
    app_name: &str,
    spec: &AppSpec,
    catalog: &Catalog,
    cfg: &ExplorerConfig,
) -> Result<ExplorationRun, ExplorerError> {
    Explorer::new(spec, catalog.clone(), cfg.clone())?.run(app_name)
}

impl LogEntry {
    pub(super) fn from_step(episode: usize, index: usize, s: &TestStep) -> Self {
        LogEntry {
            episode,
            step: index,
            signature: s.step.action.signature(),
            class: s.class,
            reward: s.reward,
            from: s.from,
            to: s.to,
            prefix: s.prefix,
            value: s.step.action.input().map(str::to_string),
        }
    }
}
