//! Q-learning driven GUI test generation against a simulated ERP-style
//! application, plus the reporting, test-plan and experiment machinery
//! around it.

pub mod app;
pub mod catalog;
pub mod explorer;
pub mod harness;
pub mod report;
pub mod testplan;
pub mod util;

pub use app::{Action, AppSpec, SimError, WorldState};
pub use catalog::Catalog;
