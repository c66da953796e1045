//! Seeded simulator of a menu-driven business application.

pub mod action;
pub mod event;
pub mod gui;
pub mod presets;
pub mod spec;
pub mod world;

pub use action::{Action, Affordance, Verb};
pub use event::{DbChangeEvent, DbChangeKind, GuiChangeKind, GuiEvent, OutputEvent, Record};
pub use gui::{GuiState, Widget, WidgetId, WidgetKind, WidgetState, WidgetValue};
pub use spec::{AppSpec, EntityTypeSpec, FieldSpec, ValueKind};
pub use world::{CrudOp, ExecutedStep, Row, WidgetRole, WorldState};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum SimError {
    #[error("invalid app spec: {0}")]
    InvalidSpec(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("malformed action: {0}")]
    MalformedAction(String),
    #[error("action not enabled in the current state: {0}")]
    NotEnabled(String),
}
