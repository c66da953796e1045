//! Observable GUI snapshots.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct WidgetId(pub u32);

impl fmt::Display for WidgetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "w{:04}", self.0)
    }
}

impl std::str::FromStr for WidgetId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.strip_prefix('w')
            .and_then(|n| n.parse().ok())
            .map(WidgetId)
            .ok_or_else(|| format!("bad widget id {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum WidgetKind {
    GraphicalMenu,
    Button,
    TextField,
    ListField,
    ComboBoxField,
    DataGrid,
    Window,
}

impl WidgetKind {
    pub const ALL: [WidgetKind; 7] = [
        WidgetKind::GraphicalMenu,
        WidgetKind::Button,
        WidgetKind::TextField,
        WidgetKind::ListField,
        WidgetKind::ComboBoxField,
        WidgetKind::DataGrid,
        WidgetKind::Window,
    ];

    /// State vocabulary of each kind, as used by the report templates.
    pub fn allowed_states(self) -> &'static [WidgetState] {
        use WidgetState::*;
        match self {
            WidgetKind::GraphicalMenu | WidgetKind::Button => &[Enabled, Disabled],
            WidgetKind::TextField => &[Editable, Blocked],
            WidgetKind::ListField | WidgetKind::ComboBoxField => &[Selectable, Blocked],
            // grids carry no state of their own
            WidgetKind::DataGrid => &[Enabled],
            WidgetKind::Window => &[Foreground, Background],
        }
    }

    pub fn is_input(self) -> bool {
        matches!(
            self,
            WidgetKind::TextField | WidgetKind::ListField | WidgetKind::ComboBoxField
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum WidgetState {
    Enabled,
    Disabled,
    Editable,
    Blocked,
    Selectable,
    Foreground,
    Background,
}

impl WidgetState {
    pub fn as_str(self) -> &'static str {
        match self {
            WidgetState::Enabled => "enabled",
            WidgetState::Disabled => "disabled",
            WidgetState::Editable => "editable",
            WidgetState::Blocked => "blocked",
            WidgetState::Selectable => "selectable",
            WidgetState::Foreground => "foreground",
            WidgetState::Background => "background",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WidgetValue {
    /// Text or single-choice value; may be empty.
    Text(String),
    /// Marked entries of a combo box.
    Marked(Vec<String>),
    /// Number of rows shown by a data grid.
    Items(usize),
}

impl WidgetValue {
    pub fn is_empty(&self) -> bool {
        match self {
            WidgetValue::Text(s) => s.is_empty(),
            WidgetValue::Marked(v) => v.is_empty(),
            WidgetValue::Items(n) => *n == 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Widget {
    pub id: WidgetId,
    pub kind: WidgetKind,
    pub title_label: String,
    pub state: WidgetState,
    pub value: Option<WidgetValue>,
    pub possible_values: Vec<String>,
    pub column_labels: Vec<String>,
    /// Owning window; `None` for windows themselves and the top bar.
    pub window: Option<WidgetId>,
}

impl Widget {
    pub fn new(id: WidgetId, kind: WidgetKind, label: impl Into<String>, state: WidgetState) -> Self {
        debug_assert!(kind.allowed_states().contains(&state), "{kind:?} in {state:?}");
        Widget {
            id,
            kind,
            title_label: label.into(),
            state,
            value: None,
            possible_values: Vec::new(),
            column_labels: Vec::new(),
            window: None,
        }
    }

    pub fn in_window(mut self, window: WidgetId) -> Self {
        self.window = Some(window);
        self
    }

    pub fn with_value(mut self, value: WidgetValue) -> Self {
        self.value = Some(value);
        self
    }

    pub fn with_options(mut self, options: Vec<String>) -> Self {
        self.possible_values = options;
        self
    }

    pub fn with_columns(mut self, columns: Vec<String>) -> Self {
        self.column_labels = columns;
        self
    }

    pub fn is_empty_input(&self) -> bool {
        self.kind.is_input() && self.value.as_ref().is_none_or(WidgetValue::is_empty)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct GuiState {
    /// Window stack, foreground first.
    pub windows: Vec<WidgetId>,
    pub widgets: BTreeMap<WidgetId, Widget>,
    pub is_input_form: bool,
}

impl GuiState {
    pub fn foreground(&self) -> Option<&Widget> {
        self.windows.first().and_then(|id| self.widgets.get(id))
    }

    pub fn foreground_title(&self) -> &str {
        self.foreground().map(|w| w.title_label.as_str()).unwrap_or("")
    }

    pub fn widget(&self, id: WidgetId) -> Option<&Widget> {
        self.widgets.get(&id)
    }

    /// Widgets owned by `window`, by id.
    pub fn widgets_in(&self, window: WidgetId) -> impl Iterator<Item = &Widget> {
        self.widgets.values().filter(move |w| w.window == Some(window))
    }

    /// Top-bar widgets: not a window and not owned by one.
    pub fn top_bar(&self) -> impl Iterator<Item = &Widget> {
        self.widgets
            .values()
            .filter(|w| w.window.is_none() && w.kind != WidgetKind::Window)
    }

    pub fn window_position(&self, window: WidgetId) -> Option<usize> {
        self.windows.iter().position(|w| *w == window)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn widget_id_roundtrip() {
        let id = WidgetId(42);
        assert_eq!(id.to_string(), "w0042");
        assert_eq!("w0042".parse::<WidgetId>().unwrap(), id);
        assert!("x1".parse::<WidgetId>().is_err());
    }

    #[test]
    fn state_vocabulary_is_disjoint_for_inputs() {
        assert!(WidgetKind::TextField.allowed_states().contains(&WidgetState::Editable));
        assert!(!WidgetKind::TextField.allowed_states().contains(&WidgetState::Enabled));
        assert!(!WidgetKind::ListField.allowed_states().contains(&WidgetState::Editable));
    }
}
