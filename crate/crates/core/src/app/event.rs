use serde::{Deserialize, Serialize};

use super::gui::Widget;

/// Ordered column/value pairs of one database row.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Record(pub Vec<(String, String)>);

impl Record {
    pub fn get(&self, column: &str) -> Option<&str> {
        self.0.iter().find(|(c, _)| c == column).map(|(_, v)| v.as_str())
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl<K: Into<String>, V: Into<String>> FromIterator<(K, V)> for Record {
    fn from_iter<T: IntoIterator<Item = (K, V)>>(iter: T) -> Self {
        Record(iter.into_iter().map(|(k, v)| (k.into(), v.into())).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DbChangeKind {
    Insert,
    Delete,
    Update,
}

/// One row-level change captured by the simulated change-tracking tables.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DbChangeEvent {
    pub kind: DbChangeKind,
    pub table_name: String,
    pub record: Record,
    /// Row before the change; present exactly for updates.
    pub prior_record: Option<Record>,
}

impl DbChangeEvent {
    pub fn insert(table: impl Into<String>, record: Record) -> Self {
        DbChangeEvent { kind: DbChangeKind::Insert, table_name: table.into(), record, prior_record: None }
    }

    pub fn delete(table: impl Into<String>, record: Record) -> Self {
        DbChangeEvent { kind: DbChangeKind::Delete, table_name: table.into(), record, prior_record: None }
    }

    pub fn update(table: impl Into<String>, prior: Record, record: Record) -> Self {
        DbChangeEvent {
            kind: DbChangeKind::Update,
            table_name: table.into(),
            record,
            prior_record: Some(prior),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GuiChangeKind {
    Appeared,
    Changed,
    Disappeared,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GuiEvent {
    pub change: GuiChangeKind,
    /// Widget as it is after the change (before it, for disappearances).
    pub widget: Widget,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OutputEvent {
    Gui(GuiEvent),
    Db(DbChangeEvent),
}

impl OutputEvent {
    pub fn as_db(&self) -> Option<&DbChangeEvent> {
        match self {
            OutputEvent::Db(e) => Some(e),
            OutputEvent::Gui(_) => None,
        }
    }
}
