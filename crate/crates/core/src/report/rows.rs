use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::app::{ExecutedStep, GuiChangeKind, OutputEvent, Verb, WidgetKind};
use crate::explorer::TestCase;

use super::entry::{format_output_entry, EntryError, OutputEntry};

/// Sheet name for steps taken before any menu was opened.
pub const HOME_MENU: &str = "Home";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    /// `<test>.<k>`, dense from 1.
    pub id: String,
    pub test_id: String,
    /// 1-based inclusive step indices covered by the row.
    pub first_step: usize,
    pub last_step: usize,
    pub actions: Vec<String>,
    pub outputs: Vec<OutputEntry>,
    /// Most recent menu at the end of the row.
    pub menu: String,
    /// `Menu.Label`; `None` for rows that only open a menu.
    pub operation: Option<String>,
}

/// Human-readable action line.
pub fn describe_action(step: &ExecutedStep) -> String {
    let label = &step.label;
    let value = step.action.input().unwrap_or("");
    match step.action.verb() {
        Verb::Select => format!("Select menu \"{label}\""),
        Verb::Click if step.kind == WidgetKind::GraphicalMenu => format!("Select menu \"{label}\""),
        Verb::Click => format!("Click button \"{label}\""),
        Verb::Fill => format!("Fill field \"{label}\" as \"{value}\""),
        Verb::Pick => format!("Pick \"{value}\" in field \"{label}\""),
    }
}

fn row_outputs(steps: &[&ExecutedStep]) -> Result<Vec<OutputEntry>, EntryError> {
    let mut out = Vec::new();
    for s in steps {
        for e in &s.events {
            if let OutputEvent::Gui(g) = e {
                if g.change == GuiChangeKind::Disappeared {
                    continue;
                }
            }
            out.push(format_output_entry(e)?);
        }
    }
    Ok(out)
}

/// Splits a step sequence into row spans (0-based, inclusive): each maximal
/// run of fill/pick actions absorbs the click right after it.
pub fn group_spans(verbs: &[Verb]) -> Vec<(usize, usize)> {
    let mut spans = Vec::new();
    let mut i = 0;
    while i < verbs.len() {
        let start = i;
        while i < verbs.len() && verbs[i].takes_input() {
            i += 1;
        }
        if i == start {
            spans.push((i, i));
            i += 1;
        } else if i < verbs.len() && verbs[i] == Verb::Click {
            spans.push((start, i));
            i += 1;
        } else {
            spans.push((start, i - 1));
        }
    }
    spans
}

/// Groups one test's executed steps into report rows.
pub fn group_input_actions(test_id: &str, steps: &[&ExecutedStep]) -> Result<Vec<ReportRow>, EntryError> {
    let verbs: Vec<Verb> = steps.iter().map(|s| s.action.verb()).collect();
    let mut menu: Option<String> = None;
    let mut rows = Vec::new();
    for (k, (a, b)) in group_spans(&verbs).into_iter().enumerate() {
        let span = &steps[a..=b];
        let mut operation = None;
        for s in span {
            if s.role.is_menu() {
                menu = Some(s.label.clone());
            }
        }
        let last = span[span.len() - 1];
        let menu_name = menu.clone().unwrap_or_else(|| HOME_MENU.to_string());
        if !last.role.is_menu() {
            operation = Some(format!("{menu_name}.{}", last.label));
        }
        rows.push(ReportRow {
            id: format!("{test_id}.{}", k + 1),
            test_id: test_id.to_string(),
            first_step: a + 1,
            last_step: b + 1,
            actions: span.iter().map(|s| describe_action(s)).collect(),
            outputs: row_outputs(span)?,
            menu: menu_name,
            operation,
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MenuOperations {
    /// Tests whose first menu is this one.
    pub tests: usize,
    /// Operation → row ids, in generation order.
    pub operations: BTreeMap<String, Vec<String>>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniqueOperationIndex {
    pub menus: BTreeMap<String, MenuOperations>,
}

impl UniqueOperationIndex {
    pub fn occurrences(&self, operation: &str) -> usize {
        self.rows_of(operation).len()
    }

    pub fn rows_of(&self, operation: &str) -> &[String] {
        self.menus
            .values()
            .find_map(|m| m.operations.get(operation))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    /// Rows per test, in generation order.
    pub tests: Vec<(String, Vec<ReportRow>)>,
}

impl TestReport {
    pub fn rows(&self) -> impl Iterator<Item = &ReportRow> {
        self.tests.iter().flat_map(|(_, r)| r)
    }

    pub fn rows_of(&self, test_id: &str) -> &[ReportRow] {
        self.tests
            .iter()
            .find(|(t, _)| t == test_id)
            .map(|(_, r)| r.as_slice())
            .unwrap_or(&[])
    }
}

/// Builds rows for every test and the per-menu operation index.
pub fn generate_report(tests: &[TestCase]) -> Result<(TestReport, UniqueOperationIndex), EntryError> {
    let mut report = TestReport::default();
    let mut index = UniqueOperationIndex::default();
    for t in tests {
        let steps: Vec<&ExecutedStep> = t.executed().collect();
        let rows = group_input_actions(&t.id, &steps)?;
        let first_menu = steps
            .iter()
            .find(|s| s.role.is_menu())
            .map(|s| s.label.clone())
            .unwrap_or_else(|| HOME_MENU.to_string());
        index.menus.entry(first_menu).or_default().tests += 1;
        for r in &rows {
            if let Some(op) = &r.operation {
                index
                    .menus
                    .entry(r.menu.clone())
                    .or_default()
                    .operations
                    .entry(op.clone())
                    .or_default()
                    .push(r.id.clone());
            }
        }
        report.tests.push((t.id.clone(), rows));
    }
    Ok((report, index))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spans() {
        use Verb::*;
        assert_eq!(group_spans(&[Select, Click, Fill, Fill, Click]), vec![(0, 0), (1, 1), (2, 4)]);
        assert_eq!(group_spans(&[Fill, Pick]), vec![(0, 1)]);
        assert_eq!(group_spans(&[Fill, Select, Click]), vec![(0, 0), (1, 1), (2, 2)]);
        assert!(group_spans(&[]).is_empty());
    }
}
