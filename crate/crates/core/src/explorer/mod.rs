//! Q-learning test generation: RLS and its semi-systematic refinements.

pub mod abstraction;
pub mod complex;
pub mod config;
pub mod episode;
pub mod model;
pub mod policy;
pub mod runlog;

pub use abstraction::{abstract_state, diff_fraction, reward, AbstractStateId};
pub use complex::{fill_and_submit, FillScope, FormFiller};
pub use config::{ExplorerConfig, Strategy};
pub use episode::{run_strategy, ExplorationRun, Explorer, TestCase, TestStep};
pub use model::{QModel, Transition, WitnessStep};
pub use policy::{epsilon_greedy_select, greedy, maybe_complex_action};
pub use runlog::{LogEntry, RunLog};

use crate::app::SimError;

#[derive(Debug, thiserror::Error)]
pub enum ExplorerError {
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error("no candidate actions to choose from")]
    NoCandidates,
    #[error("the foreground window is not an input form")]
    NotAnInputForm,
    #[error("state {0} is not part of the model")]
    UnknownState(String),
    #[error("run log line {line}: {message}")]
    Log { line: usize, message: String },
    #[error("replay of episode {episode} diverged at step {step}")]
    ReplayMismatch { episode: usize, step: usize },
}
