use std::fmt;

use serde::{Deserialize, Serialize};

use super::gui::WidgetId;
use super::SimError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Verb {
    Click,
    Select,
    Fill,
    Pick,
}

impl Verb {
    pub fn as_str(self) -> &'static str {
        match self {
            Verb::Click => "click",
            Verb::Select => "select",
            Verb::Fill => "fill",
            Verb::Pick => "pick",
        }
    }

    pub fn takes_input(self) -> bool {
        matches!(self, Verb::Fill | Verb::Pick)
    }
}

impl std::str::FromStr for Verb {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "click" => Ok(Verb::Click),
            "select" => Ok(Verb::Select),
            "fill" => Ok(Verb::Fill),
            "pick" => Ok(Verb::Pick),
            other => Err(format!("unknown verb {other:?}")),
        }
    }
}

/// An interaction the current GUI offers, before any input value is bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Affordance {
    pub target: WidgetId,
    pub verb: Verb,
}

impl Affordance {
    /// Value-independent key used by the learned model, e.g. `fill:w0042`.
    pub fn signature(&self) -> String {
        format!("{}:{}", self.verb.as_str(), self.target)
    }

    /// Binds a click or select; input verbs need [`Affordance::with_input`].
    pub fn bind(&self) -> Result<Action, SimError> {
        Action::new(self.target, self.verb, None)
    }

    pub fn with_input(&self, value: impl Into<String>) -> Result<Action, SimError> {
        Action::new(self.target, self.verb, Some(value.into()))
    }
}

/// An executable interaction. Fill and pick carry a value; click and select never do.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Action {
    target: WidgetId,
    verb: Verb,
    input: Option<String>,
}

impl Action {
    pub fn new(target: WidgetId, verb: Verb, input: Option<String>) -> Result<Self, SimError> {
        if verb.takes_input() != input.is_some() {
            return Err(SimError::MalformedAction(format!(
                "{} on {target} {} an input value",
                verb.as_str(),
                if verb.takes_input() { "requires" } else { "forbids" }
            )));
        }
        Ok(Action { target, verb, input })
    }

    pub fn click(target: WidgetId) -> Self {
        Action { target, verb: Verb::Click, input: None }
    }

    pub fn select(target: WidgetId) -> Self {
        Action { target, verb: Verb::Select, input: None }
    }

    pub fn fill(target: WidgetId, value: impl Into<String>) -> Self {
        Action { target, verb: Verb::Fill, input: Some(value.into()) }
    }

    pub fn pick(target: WidgetId, value: impl Into<String>) -> Self {
        Action { target, verb: Verb::Pick, input: Some(value.into()) }
    }

    pub fn target(&self) -> WidgetId {
        self.target
    }

    pub fn verb(&self) -> Verb {
        self.verb
    }

    pub fn input(&self) -> Option<&str> {
        self.input.as_deref()
    }

    pub fn affordance(&self) -> Affordance {
        Affordance { target: self.target, verb: self.verb }
    }

    pub fn signature(&self) -> String {
        self.affordance().signature()
    }

    /// Parses a signature such as `click:w0007` plus an optional value.
    pub fn from_signature(signature: &str, input: Option<String>) -> Result<Self, SimError> {
        let (verb, target) = signature
            .split_once(':')
            .ok_or_else(|| SimError::MalformedAction(format!("bad signature {signature:?}")))?;
        let verb: Verb = verb.parse().map_err(SimError::MalformedAction)?;
        let target: WidgetId = target.parse().map_err(SimError::MalformedAction)?;
        Action::new(target, verb, input)
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.input {
            Some(v) => write!(f, "{}={:?}", self.signature(), v),
            None => f.write_str(&self.signature()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn input_invariant() {
        assert!(Action::new(WidgetId(1), Verb::Fill, None).is_err());
        assert!(Action::new(WidgetId(1), Verb::Click, Some("x".into())).is_err());
        assert!(Action::new(WidgetId(1), Verb::Pick, Some("x".into())).is_ok());
    }

    #[test]
    fn signature_parse() {
        let a = Action::fill(WidgetId(12), "Paul");
        assert_eq!(a.signature(), "fill:w0012");
        let b = Action::from_signature("fill:w0012", Some("Paul".into())).unwrap();
        assert_eq!(a, b);
        assert!(Action::from_signature("poke:w0001", None).is_err());
    }
}
