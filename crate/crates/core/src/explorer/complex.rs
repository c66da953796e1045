//! The fill-and-submit complex action.

use rand::Rng;

use super::ExplorerError;
use crate::app::{Action, ExecutedStep, WidgetKind, WidgetState, WorldState};
use crate::catalog::Catalog;

/// How much of a tabbed form the filler covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FillScope {
    /// Visit every tab, filling each, then submit.
    AllTabs,
    /// Fill only the tab currently shown, then submit.
    VisibleTab,
}

/// Incremental driver: yields one primitive action at a time so the caller
/// can observe and learn from every intermediate GUI state.
#[derive(Debug, Clone)]
pub struct FormFiller {
    scope: FillScope,
    visited_tabs: Vec<usize>,
    done: bool,
}

impl FormFiller {
    pub fn start(world: &WorldState, scope: FillScope) -> Result<Self, ExplorerError> {
        if !world.gui().is_input_form {
            return Err(ExplorerError::NotAnInputForm);
        }
        Ok(FormFiller { scope, visited_tabs: Vec::new(), done: false })
    }

    pub fn is_done(&self) -> bool {
        self.done
    }

    /// Next primitive action, or `None` once Save was issued.
    pub fn next_action<R: Rng + ?Sized>(
        &mut self,
        world: &WorldState,
        catalog: &Catalog,
        rng: &mut R,
    ) -> Option<Action> {
        if self.done {
            return None;
        }
        let gui = world.gui();
        let Some(&form) = gui.windows.first() else {
            self.done = true;
            return None;
        };
        if !gui.is_input_form {
            // the form went away underneath us
            self.done = true;
            return None;
        }
        for w in gui.widgets_in(form) {
            if !w.is_empty_input() {
                continue;
            }
            match (w.kind, w.state) {
                (WidgetKind::TextField, WidgetState::Editable) => {
                    return Some(Action::fill(w.id, catalog.lookup(&w.title_label, rng)));
                }
                (WidgetKind::ListField | WidgetKind::ComboBoxField, WidgetState::Selectable)
                    if !w.possible_values.is_empty() =>
                {
                    let v = &w.possible_values[rng.random_range(0..w.possible_values.len())];
                    return Some(Action::pick(w.id, v.clone()));
                }
                _ => {}
            }
        }
        if self.scope == FillScope::AllTabs {
            if let Some((active, tabs)) = world.form_tabs() {
                if !self.visited_tabs.contains(&active) {
                    self.visited_tabs.push(active);
                }
                if let Some(t) = (0..tabs.len()).find(|t| !self.visited_tabs.contains(t)) {
                    return Some(Action::click(tabs[t]));
                }
            }
        }
        self.done = true;
        world.form_submit().map(Action::click)
    }
}

/// Fills every empty input on every tab of the foreground form from the
/// catalog, then clicks its submit button.
pub fn fill_and_submit<R: Rng + ?Sized>(
    world: &mut WorldState,
    catalog: &Catalog,
    rng: &mut R,
) -> Result<Vec<ExecutedStep>, ExplorerError> {
    let mut filler = FormFiller::start(world, FillScope::AllTabs)?;
    let mut steps = Vec::new();
    while let Some(action) = filler.next_action(world, catalog, rng) {
        steps.push(world.step(&action)?);
    }
    Ok(steps)
}
