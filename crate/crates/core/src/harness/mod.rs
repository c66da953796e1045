//! Experiment driver: action classes, automata, statistics and artifacts.

pub mod automaton;
pub mod classify;
pub mod experiment;
pub mod stats;

pub use automaton::{build_automaton, InteractionAutomaton};
pub use classify::{classify_action, ActionClass};
pub use experiment::{run_experiment, ExperimentConfig, ExperimentError, ExperimentResult, RunSummary};
pub use stats::{summarize, wilcoxon_paired_one_tail, StatsError, Summary};
