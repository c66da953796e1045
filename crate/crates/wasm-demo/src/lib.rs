//! Browser bindings. Each export has a plain-Rust twin in [`api`] so the
//! logic is testable without a JS host.

use wasm_bindgen::prelude::*;

pub mod api {
    use menuwalk::app::presets::Preset;
    use menuwalk::explorer::{run_strategy, ExplorerConfig, Strategy};
    use menuwalk::harness::{build_automaton, wilcoxon_paired_one_tail, ActionClass};
    use menuwalk::report::{generate_report, render_files};
    use serde::Serialize;

    /// Browsers run these on the main thread; keep runs small.
    pub const MAX_EPISODES: usize = 200;
    pub const MAX_ACTIONS: usize = 100;

    #[derive(Debug, Serialize)]
    pub struct Exploration {
        pub app: String,
        pub strategy: String,
        pub seed: u64,
        /// Non-replay actions per class, in `ActionClass::ALL` order.
        pub classes: Vec<(String, u64)>,
        pub executed: usize,
        pub tests: usize,
        pub automaton_nodes: Vec<(String, u64)>,
        pub automaton_edges: Vec<(String, String, u64)>,
        pub dot: String,
    }

    fn config(strategy: &str, seed: u64, episodes: usize, actions: usize) -> Result<(Strategy, ExplorerConfig), String> {
        let strategy = strategy.parse::<Strategy>().map_err(|e| e.to_string())?;
        if episodes == 0 || episodes > MAX_EPISODES {
            return Err(format!("episodes must be in 1..={MAX_EPISODES}"));
        }
        if actions == 0 || actions > MAX_ACTIONS {
            return Err(format!("actions per episode must be in 1..={MAX_ACTIONS}"));
        }
        let mut cfg = ExplorerConfig::default().with_strategy(strategy).with_seed(seed);
        cfg.episodes = episodes;
        cfg.actions_per_episode = actions;
        cfg.validate().map_err(|e| e.to_string())?;
        Ok((strategy, cfg))
    }

    fn preset(name: &str) -> Result<Preset, String> {
        name.parse::<Preset>().map_err(|e| e.to_string())
    }

    pub fn explore(app: &str, strategy: &str, seed: u64, episodes: usize, actions: usize) -> Result<Exploration, String> {
        let p = preset(app)?;
        let (strategy, cfg) = config(strategy, seed, episodes, actions)?;
        let run = run_strategy(p.name(), &p.spec(), &p.catalog(), &cfg).map_err(|e| e.to_string())?;
        let mut counts = [0u64; 6];
        let mut executed = 0;
        for t in &run.tests {
            executed += t.steps.len();
            for s in t.selected() {
                counts[s.class.index()] += 1;
            }
        }
        let automaton = build_automaton(&run.log);
        let mut edges = Vec::new();
        for a in ActionClass::TABLE {
            for b in ActionClass::TABLE {
                let w = automaton.edge(a, b);
                if w > 0 {
                    edges.push((a.name().to_string(), b.name().to_string(), w));
                }
            }
        }
        Ok(Exploration {
            app: p.name().to_string(),
            strategy: strategy.name().to_string(),
            seed,
            classes: ActionClass::ALL.iter().map(|c| (c.name().to_string(), counts[c.index()])).collect(),
            executed,
            tests: run.tests.len(),
            automaton_nodes: ActionClass::TABLE.iter().map(|&c| (c.name().to_string(), automaton.node(c))).collect(),
            automaton_edges: edges,
            dot: automaton.to_dot(strategy.name()),
        })
    }

    /// The unique-operations index page for one short run.
    pub fn sample_report(app: &str, strategy: &str, seed: u64, episodes: usize, actions: usize) -> Result<String, String> {
        let p = preset(app)?;
        let (_, cfg) = config(strategy, seed, episodes, actions)?;
        let run = run_strategy(p.name(), &p.spec(), &p.catalog(), &cfg).map_err(|e| e.to_string())?;
        let (report, index) = generate_report(&run.tests).map_err(|e| e.to_string())?;
        let files = render_files(&report, &index).map_err(|e| e.to_string())?;
        let (_, html) = files.into_iter().find(|(n, _)| n == "index.html").ok_or("no index page rendered")?;
        String::from_utf8(html).map_err(|e| e.to_string())
    }

    fn numbers(s: &str) -> Result<Vec<f64>, String> {
        s.split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<f64>().map_err(|_| format!("not a number: {t:?}")))
            .collect()
    }

    /// One-tailed paired p-value for "second sample is larger", from two
    /// comma- or space-separated lists.
    pub fn wilcoxon(x: &str, y: &str) -> Result<f64, String> {
        wilcoxon_paired_one_tail(&numbers(x)?, &numbers(y)?).map_err(|e| e.to_string())
    }
}

fn js_err(e: String) -> JsError {
    JsError::new(&e)
}

/// JSON summary of one exploration run.
#[wasm_bindgen]
pub fn explore(app: &str, strategy: &str, seed: u32, episodes: u32, actions: u32) -> Result<String, JsError> {
    let r = api::explore(app, strategy, seed.into(), episodes as usize, actions as usize).map_err(js_err)?;
    serde_json::to_string(&r).map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen]
pub fn sample_report(app: &str, strategy: &str, seed: u32, episodes: u32, actions: u32) -> Result<String, JsError> {
    api::sample_report(app, strategy, seed.into(), episodes as usize, actions as usize).map_err(js_err)
}

#[wasm_bindgen]
pub fn wilcoxon(x: &str, y: &str) -> Result<f64, JsError> {
    api::wilcoxon(x, y).map_err(js_err)
}
