//! Test reports: template-formatted outputs, grouped rows and the operation index.

pub mod entry;
pub mod render;
pub mod rows;

use std::path::PathBuf;

pub use entry::{entry_matches, format_output_entry, wildcard_record, Channel, EntryError, EntryKind, OutputEntry};
pub use render::{render, render_files, sheet_file_name};
pub use rows::{
    describe_action, generate_report, group_input_actions, group_spans, MenuOperations, ReportRow, TestReport,
    UniqueOperationIndex, HOME_MENU,
};

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error(transparent)]
    Entry(#[from] EntryError),
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
}
