//! State abstraction and the GUI-impact reward.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::model::QModel;
use crate::app::{GuiState, WidgetKind};
use crate::util::Fnv64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AbstractStateId(pub u64);

impl fmt::Display for AbstractStateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s{:016x}", self.0)
    }
}

impl std::str::FromStr for AbstractStateId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.strip_prefix('s')
            .and_then(|h| u64::from_str_radix(h, 16).ok())
            .map(AbstractStateId)
            .ok_or_else(|| format!("bad state id {s:?}"))
    }
}

/// Hash of the foreground title and the sorted (kind, label, state,
/// empty/non-empty) tuples of every widget. Concrete field text is ignored.
pub fn abstract_state(gui: &GuiState) -> AbstractStateId {
    let mut tuples: Vec<(WidgetKind, &str, &str, bool)> = gui
        .widgets
        .values()
        .map(|w| {
            let empty = w.value.as_ref().is_none_or(|v| v.is_empty());
            (w.kind, w.title_label.as_str(), w.state.as_str(), empty)
        })
        .collect();
    tuples.sort();
    let mut h = Fnv64::default();
    h.write_str(gui.foreground_title());
    for (kind, label, state, empty) in tuples {
        h.write(&[kind as u8, empty as u8]);
        h.write_str(label);
        h.write_str(state);
    }
    AbstractStateId(h.finish())
}

/// Share of widgets added, removed or changed between two snapshots.
pub fn diff_fraction(prev: &GuiState, next: &GuiState) -> f64 {
    let ids: BTreeSet<_> = prev.widgets.keys().chain(next.widgets.keys()).collect();
    if ids.is_empty() {
        return 0.0;
    }
    let differing = ids
        .iter()
        .filter(|id| prev.widgets.get(id) != next.widgets.get(id))
        .count();
    differing as f64 / ids.len() as f64
}

/// GUI impact of a transition: the diff fraction, halved when the target
/// state is already part of the model.
pub fn reward(prev: &GuiState, next: &GuiState, model: &QModel) -> f64 {
    let novelty = if model.contains(abstract_state(next)) { 0.5 } else { 1.0 };
    novelty * diff_fraction(prev, next)
}
