//! Epsilon-greedy selection and the complex-action coin.

use rand::Rng;

use super::abstraction::AbstractStateId;
use super::model::QModel;
use super::ExplorerError;
use crate::app::{Affordance, GuiState};

/// Picks one of `candidates`.
///
/// In a state with nothing learned yet the choice is uniform. Otherwise it is
/// uniform with probability `epsilon` and the highest-Q candidate otherwise,
/// ties going to the lexicographically smallest signature.
pub fn epsilon_greedy_select<R: Rng + ?Sized>(
    model: &QModel,
    state: AbstractStateId,
    candidates: &[Affordance],
    epsilon: f64,
    rng: &mut R,
) -> Result<Affordance, ExplorerError> {
    if candidates.is_empty() {
        return Err(ExplorerError::NoCandidates);
    }
    if !model.is_known(state) || rng.random_bool(epsilon) {
        return Ok(candidates[rng.random_range(0..candidates.len())]);
    }
    Ok(greedy(model, state, candidates))
}

/// Argmax over Q with deterministic tie-breaking.
pub fn greedy(model: &QModel, state: AbstractStateId, candidates: &[Affordance]) -> Affordance {
    let mut best: Option<(f64, String, Affordance)> = None;
    for c in candidates {
        let sig = c.signature();
        let q = model.q(state, &sig);
        let better = match &best {
            None => true,
            Some((bq, bsig, _)) => q > *bq || (q == *bq && sig < *bsig),
        };
        if better {
            best = Some((q, sig, *c));
        }
    }
    best.expect("candidates non-empty").2
}

/// Whether to run the form-filling complex action now: only on input forms,
/// and then with probability `p`.
pub fn maybe_complex_action<R: Rng + ?Sized>(gui: &GuiState, p: f64, rng: &mut R) -> bool {
    gui.is_input_form && rng.random_bool(p)
}
