//! The learned state graph.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::abstraction::AbstractStateId;
use super::ExplorerError;
use crate::app::Action;

/// One step of a concrete path from reset: the action and the state it reached.
pub type WitnessStep = (Action, AbstractStateId);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Transition {
    pub next: AbstractStateId,
    pub q: f64,
    pub visits: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct QModel {
    initial: Option<AbstractStateId>,
    /// Discovery order; sampling a random state indexes into this.
    order: Vec<AbstractStateId>,
    witness: BTreeMap<AbstractStateId, Vec<WitnessStep>>,
    transitions: BTreeMap<AbstractStateId, BTreeMap<String, Transition>>,
}

impl QModel {
    pub fn new() -> Self {
        QModel::default()
    }

    /// Registers the reset state, reachable by the empty path.
    pub fn set_initial(&mut self, s: AbstractStateId) {
        self.initial = Some(s);
        self.add_state(s, Vec::new());
    }

    pub fn initial(&self) -> Option<AbstractStateId> {
        self.initial
    }

    pub fn add_state(&mut self, s: AbstractStateId, witness: Vec<WitnessStep>) -> bool {
        if self.witness.contains_key(&s) {
            return false;
        }
        self.order.push(s);
        self.witness.insert(s, witness);
        true
    }

    pub fn contains(&self, s: AbstractStateId) -> bool {
        self.witness.contains_key(&s)
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// States in discovery order.
    pub fn states(&self) -> &[AbstractStateId] {
        &self.order
    }

    pub fn witness(&self, s: AbstractStateId) -> Option<&[WitnessStep]> {
        self.witness.get(&s).map(Vec::as_slice)
    }

    /// Test hook: replaces a witness path, e.g. to simulate a stale one.
    pub fn set_witness(&mut self, s: AbstractStateId, path: Vec<WitnessStep>) {
        if let Some(w) = self.witness.get_mut(&s) {
            *w = path;
        }
    }

    pub fn transitions(&self, s: AbstractStateId) -> impl Iterator<Item = (&str, &Transition)> {
        self.transitions
            .get(&s)
            .into_iter()
            .flat_map(|m| m.iter().map(|(k, v)| (k.as_str(), v)))
    }

    /// A state counts as known to the policy once some action was learned in it.
    pub fn is_known(&self, s: AbstractStateId) -> bool {
        self.transitions.get(&s).is_some_and(|m| !m.is_empty())
    }

    pub fn q(&self, s: AbstractStateId, signature: &str) -> f64 {
        self.transitions
            .get(&s)
            .and_then(|m| m.get(signature))
            .map_or(0.0, |t| t.q)
    }

    /// Largest learned Q-value leaving `s`, 0 when nothing was learned there.
    pub fn max_q(&self, s: AbstractStateId) -> f64 {
        self.transitions
            .get(&s)
            .and_then(|m| m.values().map(|t| t.q).reduce(f64::max))
            .unwrap_or(0.0)
    }

    /// Standard one-step Q-learning update. Adds `s_next` (with `witness` as
    /// its path from reset) and the transition if they are new. Returns the
    /// updated Q-value.
    #[allow(clippy::too_many_arguments)]
    pub fn q_update(
        &mut self,
        s: AbstractStateId,
        signature: &str,
        reward: f64,
        s_next: AbstractStateId,
        alpha: f64,
        gamma: f64,
        witness: &[WitnessStep],
    ) -> Result<f64, ExplorerError> {
        if !self.contains(s) {
            return Err(ExplorerError::UnknownState(s.to_string()));
        }
        let future = self.max_q(s_next);
        let entry = self
            .transitions
            .entry(s)
            .or_default()
            .entry(signature.to_string())
            .or_insert(Transition { next: s_next, q: 0.0, visits: 0 });
        entry.q += alpha * (reward + gamma * future - entry.q);
        entry.next = s_next;
        entry.visits += 1;
        let q = entry.q;
        if !self.contains(s_next) {
            self.add_state(s_next, witness.to_vec());
        }
        Ok(q)
    }
}
