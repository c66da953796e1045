use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::app::{ExecutedStep, WidgetRole};

/// Exploration-depth taxonomy of executed actions. `Other` (tab switches,
/// closing views and info windows) is tracked but left out of the tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ActionClass {
    Menu,
    Crud,
    Input,
    SaveKo,
    SaveOk,
    Other,
}

impl ActionClass {
    /// The five classes that appear in reports and tables.
    pub const TABLE: [ActionClass; 5] =
        [ActionClass::Menu, ActionClass::Crud, ActionClass::Input, ActionClass::SaveKo, ActionClass::SaveOk];
    pub const ALL: [ActionClass; 6] = [
        ActionClass::Menu,
        ActionClass::Crud,
        ActionClass::Input,
        ActionClass::SaveKo,
        ActionClass::SaveOk,
        ActionClass::Other,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ActionClass::Menu => "Menu",
            ActionClass::Crud => "CRUD",
            ActionClass::Input => "Input",
            ActionClass::SaveKo => "SaveKO",
            ActionClass::SaveOk => "SaveOK",
            ActionClass::Other => "Other",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for ActionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ActionClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ActionClass::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown action class {s:?}"))
    }
}

pub fn classify_action(step: &ExecutedStep) -> ActionClass {
    match step.role {
        WidgetRole::EntityMenu(_) | WidgetRole::DecoyMenu(_) => ActionClass::Menu,
        WidgetRole::Crud { .. } => ActionClass::Crud,
        WidgetRole::Field { .. } => ActionClass::Input,
        WidgetRole::Submit { .. } if step.db_events().next().is_some() => ActionClass::SaveOk,
        WidgetRole::Submit { .. } | WidgetRole::CloseForm { .. } => ActionClass::SaveKo,
        WidgetRole::CloseView { .. }
        | WidgetRole::CloseInfo(_)
        | WidgetRole::Tab { .. }
        | WidgetRole::Grid { .. }
        | WidgetRole::Window => ActionClass::Other,
    }
}
