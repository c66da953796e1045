use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::app::SimError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Strategy {
    #[serde(rename = "RLS")]
    Rls,
    #[serde(rename = "SSRLS_partitioning")]
    SsrlsPartitioning,
    #[serde(rename = "SSRLS_fillForms")]
    SsrlsFillForms,
    #[serde(rename = "SSRLS")]
    Ssrls,
}

impl Strategy {
    pub const ALL: [Strategy; 4] =
        [Strategy::Rls, Strategy::SsrlsPartitioning, Strategy::SsrlsFillForms, Strategy::Ssrls];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Rls => "RLS",
            Strategy::SsrlsPartitioning => "SSRLS_partitioning",
            Strategy::SsrlsFillForms => "SSRLS_fillForms",
            Strategy::Ssrls => "SSRLS",
        }
    }

    /// One menu action per episode, first, then menus are off limits.
    pub fn partitioning(self) -> bool {
        matches!(self, Strategy::SsrlsPartitioning | Strategy::Ssrls)
    }

    /// Input forms are filled completely and submitted with probability pi.
    pub fn fill_forms(self) -> bool {
        matches!(self, Strategy::SsrlsFillForms | Strategy::Ssrls)
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.to_ascii_lowercase().replace('-', "_");
        Strategy::ALL
            .into_iter()
            .find(|st| st.name().to_ascii_lowercase() == key)
            .ok_or_else(|| {
                format!("unknown strategy {s:?} (expected RLS, SSRLS_partitioning, SSRLS_fillForms or SSRLS)")
            })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExplorerConfig {
    pub epsilon: f64,
    pub p_complex: f64,
    pub pi: f64,
    pub episodes: usize,
    pub actions_per_episode: usize,
    /// Learning rate; not given by the original tool description, 0.9 assumed.
    pub alpha: f64,
    /// Discount factor; likewise assumed.
    pub gamma: f64,
    pub strategy: Strategy,
    pub seed: u64,
}

impl Default for ExplorerConfig {
    fn default() -> Self {
        ExplorerConfig {
            epsilon: 0.7,
            p_complex: 0.5,
            pi: 0.5,
            episodes: 50,
            actions_per_episode: 30,
            alpha: 0.9,
            gamma: 0.9,
            strategy: Strategy::Rls,
            seed: 0,
        }
    }
}

impl ExplorerConfig {
    pub fn with_strategy(mut self, strategy: Strategy) -> Self {
        self.strategy = strategy;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<(), SimError> {
        let unit = |name: &str, v: f64| {
            if (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(SimError::Config(format!("{name} must be in [0, 1], got {v}")))
            }
        };
        unit("epsilon", self.epsilon)?;
        unit("p_complex", self.p_complex)?;
        unit("pi", self.pi)?;
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(SimError::Config(format!("alpha must be in (0, 1], got {}", self.alpha)));
        }
        if !(0.0..1.0).contains(&self.gamma) {
            return Err(SimError::Config(format!("gamma must be in [0, 1), got {}", self.gamma)));
        }
        Ok(())
    }

    pub fn from_toml_str(text: &str) -> Result<Self, SimError> {
        let cfg: ExplorerConfig = toml::from_str(text).map_err(|e| SimError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }
}
