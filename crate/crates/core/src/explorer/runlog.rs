//! Line-oriented record of a run, sufficient to replay every test case.
//!
//! ```text
//! # app=erp-like
//! # strategy=SSRLS
//! # seed=3
//! episode<TAB>step<TAB>signature<TAB>class<TAB>reward<TAB>from<TAB>to<TAB>prefix<TAB>value
//! ```
//!
//! `value` is `-` for clicks and `=` followed by the escaped input otherwise.

use std::fmt::Write as _;

use super::abstraction::{abstract_state, AbstractStateId};
use super::config::Strategy;
use super::episode::{TestCase, TestStep};
use super::ExplorerError;
use crate::app::{Action, AppSpec, WorldState};
use crate::harness::classify::ActionClass;
use crate::util::{escape_cell, unescape_cell};

const HEADER: &str = "episode\tstep\tsignature\tclass\treward\tfrom\tto\tprefix\tvalue";

#[derive(Debug, Clone, PartialEq)]
pub struct LogEntry {
    /// 1-based episode (test case) number.
    pub episode: usize,
    /// 1-based step within the episode, prefix included.
    pub step: usize,
    pub signature: String,
    pub class: ActionClass,
    pub reward: Option<f64>,
    pub from: AbstractStateId,
    pub to: AbstractStateId,
    pub prefix: bool,
    pub value: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunLog {
    pub app: String,
    pub strategy: Strategy,
    pub seed: u64,
    pub episodes: usize,
    pub entries: Vec<LogEntry>,
}

impl RunLog {
    pub fn from_tests(app: &str, strategy: Strategy, seed: u64, tests: &[TestCase]) -> Self {
        let entries = tests
            .iter()
            .enumerate()
            .flat_map(|(e, t)| {
                t.steps.iter().enumerate().map(move |(i, s)| LogEntry::from_step(e + 1, i + 1, s))
            })
            .collect();
        RunLog { app: app.to_string(), strategy, seed, episodes: tests.len(), entries }
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# app={}", self.app);
        let _ = writeln!(out, "# strategy={}", self.strategy);
        let _ = writeln!(out, "# seed={}", self.seed);
        let _ = writeln!(out, "# episodes={}", self.episodes);
        out.push_str(HEADER);
        out.push('\n');
        for e in &self.entries {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                e.episode,
                e.step,
                e.signature,
                e.class,
                e.reward.map_or_else(|| "-".to_string(), |r| r.to_string()),
                e.from,
                e.to,
                u8::from(e.prefix),
                e.value.as_deref().map_or_else(|| "-".to_string(), |v| format!("={}", escape_cell(v))),
            );
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, ExplorerError> {
        let bad = |line: usize, msg: String| ExplorerError::Log { line, message: msg };
        let mut app = None;
        let mut strategy = None;
        let mut seed = None;
        let mut episodes = None;
        let mut entries = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let n = i + 1;
            if let Some(meta) = line.strip_prefix("# ") {
                let (k, v) = meta.split_once('=').ok_or_else(|| bad(n, "bad header".into()))?;
                match k {
                    "app" => app = Some(v.to_string()),
                    "strategy" => strategy = Some(v.parse::<Strategy>().map_err(|e| bad(n, e))?),
                    "seed" => seed = Some(v.parse::<u64>().map_err(|e| bad(n, e.to_string()))?),
                    "episodes" => episodes = Some(v.parse::<usize>().map_err(|e| bad(n, e.to_string()))?),
                    _ => {}
                }
                continue;
            }
            if line == HEADER || line.is_empty() {
                continue;
            }
            let f: Vec<&str> = line.split('\t').collect();
            if f.len() != 9 {
                return Err(bad(n, format!("expected 9 fields, found {}", f.len())));
            }
            let num = |s: &str| s.parse::<usize>().map_err(|e| bad(n, e.to_string()));
            entries.push(LogEntry {
                episode: num(f[0])?,
                step: num(f[1])?,
                signature: f[2].to_string(),
                class: f[3].parse().map_err(|e| bad(n, e))?,
                reward: match f[4] {
                    "-" => None,
                    r => Some(r.parse().map_err(|e: std::num::ParseFloatError| bad(n, e.to_string()))?),
                },
                from: f[5].parse().map_err(|e| bad(n, e))?,
                to: f[6].parse().map_err(|e| bad(n, e))?,
                prefix: f[7] == "1",
                value: match f[8] {
                    "-" => None,
                    v => Some(unescape_cell(
                        v.strip_prefix('=').ok_or_else(|| bad(n, format!("bad value field {v:?}")))?,
                    )),
                },
            });
        }
        let missing = |what: &str| bad(0, format!("missing `# {what}=` header"));
        let episodes = episodes.unwrap_or_else(|| entries.last().map_or(0, |e| e.episode));
        Ok(RunLog {
            app: app.ok_or_else(|| missing("app"))?,
            strategy: strategy.ok_or_else(|| missing("strategy"))?,
            seed: seed.ok_or_else(|| missing("seed"))?,
            episodes,
            entries,
        })
    }

    /// Re-executes every episode from a fresh application, rebuilding the
    /// test cases with their output events. Fails if a logged state id is not
    /// reproduced.
    pub fn replay(&self, spec: &AppSpec) -> Result<Vec<TestCase>, ExplorerError> {
        let template = WorldState::build(spec)?;
        let mut tests: Vec<TestCase> = (1..=self.episodes)
            .map(|e| TestCase { id: format!("T{e}"), strategy: self.strategy, seed: self.seed, steps: Vec::new() })
            .collect();
        let mut world = template.clone();
        let mut current = 0;
        for entry in &self.entries {
            if entry.episode != current {
                current = entry.episode;
                world = template.clone();
            }
            let action = Action::from_signature(&entry.signature, entry.value.clone())?;
            let from = abstract_state(world.gui());
            let step = world.step(&action)?;
            let to = abstract_state(world.gui());
            if from != entry.from || to != entry.to {
                return Err(ExplorerError::ReplayMismatch { episode: entry.episode, step: entry.step });
            }
            let test = tests
                .get_mut(entry.episode - 1)
                .ok_or(ExplorerError::ReplayMismatch { episode: entry.episode, step: entry.step })?;
            test.steps.push(TestStep {
                step,
                prefix: entry.prefix,
                class: entry.class,
                reward: entry.reward,
                from,
                to,
            });
        }
        Ok(tests)
    }
}
