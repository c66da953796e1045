//! Declarative description of a simulated menu-driven business application.

use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::SimError;

/// Kind of data an input field accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ValueKind {
    Text,
    List,
    Combo,
    Date,
    Email,
    NumericId,
}

impl ValueKind {
    /// Whether a non-empty value is consistent with this kind.
    ///
    /// Email needs an `@`, numeric ids must parse as an integer and dates
    /// must be `DD-MM-YYYY`. Everything else accepts any text.
    pub fn accepts(self, value: &str) -> bool {
        match self {
            ValueKind::Email => value.contains('@'),
            ValueKind::NumericId => value.trim().parse::<i64>().is_ok(),
            ValueKind::Date => is_date(value),
            ValueKind::Text | ValueKind::List | ValueKind::Combo => true,
        }
    }

    pub fn is_choice(self) -> bool {
        matches!(self, ValueKind::List | ValueKind::Combo)
    }
}

fn is_date(value: &str) -> bool {
    let parts: Vec<&str> = value.split('-').collect();
    if parts.len() != 3 {
        return false;
    }
    let digits = |s: &str, n: usize| s.len() == n && s.bytes().all(|b| b.is_ascii_digit());
    if !(digits(parts[0], 2) && digits(parts[1], 2) && digits(parts[2], 4)) {
        return false;
    }
    let day: u32 = parts[0].parse().unwrap_or(0);
    let month: u32 = parts[1].parse().unwrap_or(0);
    (1..=31).contains(&day) && (1..=12).contains(&month)
}

fn yes() -> bool {
    true
}

fn one() -> usize {
    1
}

fn default_grid_columns() -> Vec<String> {
    ["ID", "Name", "Data", "Action"].iter().map(|s| s.to_string()).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub label: String,
    pub kind: ValueKind,
    #[serde(default)]
    pub required: bool,
    /// Zero-based tab the field lives on.
    #[serde(default)]
    pub tab: usize,
    /// Database column; defaults to the upper-cased label.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub column: Option<String>,
    /// Fields with `persist = false` are shown on forms but never stored.
    #[serde(default = "yes")]
    pub persist: bool,
    /// Value a New form starts with.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub options: Vec<String>,
}

impl FieldSpec {
    pub fn column_name(&self) -> String {
        match &self.column {
            Some(c) => c.clone(),
            None => self
                .label
                .trim()
                .to_uppercase()
                .split_whitespace()
                .collect::<Vec<_>>()
                .join("_"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntityTypeSpec {
    /// Plural entity name, also the menu label (e.g. `Invoices`).
    pub name: String,
    /// Singular name used for form titles; defaults to `name` minus a trailing `s`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub singular: Option<String>,
    /// Backing table; defaults to the upper-cased name.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<String>,
    #[serde(default = "one")]
    pub tabs: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tab_names: Vec<String>,
    #[serde(default = "yes")]
    pub has_view: bool,
    #[serde(default = "yes")]
    pub has_edit: bool,
    #[serde(default = "yes")]
    pub has_delete: bool,
    #[serde(default = "yes")]
    pub has_new: bool,
    #[serde(default)]
    pub initial_records: usize,
    #[serde(default = "default_grid_columns")]
    pub grid_columns: Vec<String>,
    #[serde(default)]
    pub fields: Vec<FieldSpec>,
}

impl EntityTypeSpec {
    pub fn singular_name(&self) -> String {
        match &self.singular {
            Some(s) => s.clone(),
            None => self.name.strip_suffix('s').unwrap_or(&self.name).to_string(),
        }
    }

    pub fn table_name(&self) -> String {
        self.table.clone().unwrap_or_else(|| self.name.to_uppercase())
    }

    pub fn tab_name(&self, tab: usize) -> String {
        self.tab_names
            .get(tab)
            .cloned()
            .unwrap_or_else(|| format!("Tab {}", tab + 1))
    }

    /// Required fields that a fresh form leaves empty.
    pub fn required_empty_fields(&self) -> usize {
        self.fields
            .iter()
            .filter(|f| f.required && f.initial.is_none())
            .count()
    }

    /// Length of the shortest action sequence that ends in a successful Save
    /// of a new record: menu, New, one fill per empty required field, one
    /// click per extra tab holding such a field, Save.
    pub fn min_save_sequence_len(&self) -> usize {
        // forms open on the first tab
        let switches: HashSet<usize> = self
            .fields
            .iter()
            .filter(|f| f.required && f.initial.is_none() && f.tab != 0)
            .map(|f| f.tab)
            .collect();
        3 + self.required_empty_fields() + switches.len()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AppSpec {
    #[serde(default)]
    pub seed: u64,
    /// Always-enabled top-bar actions. The first `entity_types.len()` are the
    /// entity menus; the rest are decoys opening informational windows.
    pub global_menu_actions: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub decoy_labels: Vec<String>,
    pub entity_types: Vec<EntityTypeSpec>,
}

impl AppSpec {
    pub fn from_toml_str(text: &str) -> Result<Self, SimError> {
        let spec: AppSpec =
            toml::from_str(text).map_err(|e| SimError::Config(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn load(path: &Path) -> Result<Self, SimError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| SimError::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("app spec is always representable as TOML")
    }

    pub fn decoy_count(&self) -> usize {
        self.global_menu_actions - self.entity_types.len()
    }

    pub fn decoy_label(&self, index: usize) -> String {
        self.decoy_labels
            .get(index)
            .cloned()
            .unwrap_or_else(|| format!("Tool {:02}", index + 1))
    }

    /// Checks every structural invariant, naming the first one violated.
    pub fn validate(&self) -> Result<(), SimError> {
        let invalid = |msg: String| Err(SimError::InvalidSpec(msg));
        if self.entity_types.is_empty() {
            return invalid("at least one entity type is required".into());
        }
        if self.global_menu_actions < self.entity_types.len() {
            return invalid(format!(
                "global_menu_actions ({}) must be >= number of entity types ({})",
                self.global_menu_actions,
                self.entity_types.len()
            ));
        }
        let mut names = HashSet::new();
        let mut top_labels = HashSet::new();
        for entity in &self.entity_types {
            if entity.name.trim().is_empty() {
                return invalid("entity type name must not be empty".into());
            }
            if !names.insert(entity.name.clone()) {
                return invalid(format!("duplicate entity type name {:?}", entity.name));
            }
            top_labels.insert(entity.name.clone());
            if entity.tabs == 0 {
                return invalid(format!("entity {:?}: tabs must be >= 1", entity.name));
            }
            let mut labels = HashSet::new();
            for field in &entity.fields {
                if !labels.insert(field.label.clone()) {
                    return invalid(format!(
                        "entity {:?}: duplicate field label {:?}",
                        entity.name, field.label
                    ));
                }
                if field.tab >= entity.tabs {
                    return invalid(format!(
                        "entity {:?}: field {:?} is on tab {} but only {} tabs exist",
                        entity.name, field.label, field.tab, entity.tabs
                    ));
                }
                if field.kind.is_choice() && field.options.is_empty() {
                    return invalid(format!(
                        "entity {:?}: choice field {:?} has no options",
                        entity.name, field.label
                    ));
                }
                if let Some(initial) = &field.initial {
                    if field.kind.is_choice() && !field.options.contains(initial) {
                        return invalid(format!(
                            "entity {:?}: initial value {:?} of {:?} is not an option",
                            entity.name, initial, field.label
                        ));
                    }
                }
            }
        }
        for d in 0..self.decoy_count() {
            if !top_labels.insert(self.decoy_label(d)) {
                return invalid(format!("duplicate top-bar label {:?}", self.decoy_label(d)));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal() -> AppSpec {
        AppSpec {
            seed: 1,
            global_menu_actions: 1,
            decoy_labels: vec![],
            entity_types: vec![EntityTypeSpec {
                name: "Notes".into(),
                singular: None,
                table: None,
                tabs: 1,
                tab_names: vec![],
                has_view: true,
                has_edit: true,
                has_delete: true,
                has_new: true,
                initial_records: 0,
                grid_columns: default_grid_columns(),
                fields: vec![],
            }],
        }
    }

    #[test]
    fn validity_rules() {
        assert!(ValueKind::Email.accepts("a@b"));
        assert!(!ValueKind::Email.accepts("ab"));
        assert!(ValueKind::NumericId.accepts("1042"));
        assert!(!ValueKind::NumericId.accepts("2015.2"));
        assert!(ValueKind::Date.accepts("20-04-2019"));
        assert!(!ValueKind::Date.accepts("2019-04-20"));
        assert!(!ValueKind::Date.accepts("32-01-2019"));
        assert!(ValueKind::Text.accepts("anything"));
    }

    #[test]
    fn rejects_too_few_global_actions() {
        let mut spec = minimal();
        spec.global_menu_actions = 0;
        let err = spec.validate().unwrap_err().to_string();
        assert!(err.contains("global_menu_actions"), "{err}");
    }

    #[test]
    fn rejects_duplicate_entities_and_empty_list() {
        let mut spec = minimal();
        spec.entity_types.push(spec.entity_types[0].clone());
        spec.global_menu_actions = 2;
        assert!(spec.validate().unwrap_err().to_string().contains("duplicate"));
        spec.entity_types.clear();
        assert!(spec.validate().unwrap_err().to_string().contains("at least one"));
    }

    #[test]
    fn rejects_field_on_missing_tab() {
        let mut spec = minimal();
        spec.entity_types[0].fields.push(FieldSpec {
            label: "Title".into(),
            kind: ValueKind::Text,
            required: true,
            tab: 3,
            column: None,
            persist: true,
            initial: None,
            options: vec![],
        });
        assert!(spec.validate().unwrap_err().to_string().contains("tab 3"));
    }

    #[test]
    fn derived_names() {
        let spec = minimal();
        let e = &spec.entity_types[0];
        assert_eq!(e.singular_name(), "Note");
        assert_eq!(e.table_name(), "NOTES");
        assert_eq!(e.tab_name(1), "Tab 2");
        assert_eq!(spec.decoy_label(0), "Tool 01");
    }

    #[test]
    fn toml_roundtrip() {
        let spec = minimal();
        let text = spec.to_toml_string();
        assert_eq!(AppSpec::from_toml_str(&text).unwrap(), spec);
    }
}
