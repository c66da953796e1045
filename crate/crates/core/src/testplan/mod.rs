//! Spreadsheet-style test plans: objectives, oracle checks, coverage and triage.

pub mod coverage;
pub mod matching;
pub mod synthetic;

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::harness::ActionClass;
use crate::report::OutputEntry;
use crate::util::{escape_cell, unescape_cell};

pub use coverage::{render_coverage_table, render_oracle_table, triage, verify_oracles, AreaCoverage, CoverageResult, TriageSummary};
pub use matching::{glob_match, objective_satisfied, step_tokens, StepToken, Witness};
pub use synthetic::{invoice_demo_plan, synthetic_erp_plan};

#[derive(Debug, thiserror::Error)]
pub enum PlanError {
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("row {row}: {message}")]
    Row { row: usize, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum DataClass {
    GuiTracked,
    DbTracked,
    GridContent,
    GraphicalAttribute,
    DbUntracked,
    External,
}

impl DataClass {
    pub const ALL: [DataClass; 6] = [
        DataClass::GuiTracked,
        DataClass::DbTracked,
        DataClass::GridContent,
        DataClass::GraphicalAttribute,
        DataClass::DbUntracked,
        DataClass::External,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DataClass::GuiTracked => "gui_tracked",
            DataClass::DbTracked => "db_tracked",
            DataClass::GridContent => "grid_content",
            DataClass::GraphicalAttribute => "graphical_attribute",
            DataClass::DbUntracked => "db_untracked",
            DataClass::External => "external",
        }
    }

    /// Whether reports carry the data this class of check looks at.
    pub fn verifiable(self) -> bool {
        matches!(self, DataClass::GuiTracked | DataClass::DbTracked)
    }
}

impl fmt::Display for DataClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DataClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        DataClass::ALL
            .into_iter()
            .find(|c| c.name() == s.trim())
            .ok_or_else(|| format!("unknown data class {s:?}"))
    }
}

/// One oracle. Verifiable checks carry a parsed output pattern; the others
/// keep their text for humans only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleCheck {
    pub id: String,
    pub data_class: DataClass,
    pub text: String,
    pub pattern: Option<OutputEntry>,
}

impl OracleCheck {
    pub fn new(id: impl Into<String>, data_class: DataClass, text: impl Into<String>) -> Result<Self, String> {
        let text = text.into();
        let pattern = if data_class.verifiable() {
            Some(text.parse::<OutputEntry>().map_err(|e| e.to_string())?)
        } else {
            None
        };
        Ok(OracleCheck { id: id.into(), data_class, text, pattern })
    }

    fn spec_line(&self) -> String {
        format!("{}: {}", self.data_class, self.text)
    }
}

/// One element of an interaction pattern: a glob over step tokens,
/// optionally pinned to an action class (`Invoices.Save#SaveOK`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternToken {
    pub glob: String,
    pub class: Option<ActionClass>,
}

impl fmt::Display for PatternToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.class {
            Some(c) => write!(f, "{}#{c}", self.glob),
            None => f.write_str(&self.glob),
        }
    }
}

impl FromStr for PatternToken {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Some((glob, class)) = s.rsplit_once('#') {
            if let Ok(c) = class.parse::<ActionClass>() {
                return Ok(PatternToken { glob: glob.to_string(), class: Some(c) });
            }
        }
        if s.is_empty() {
            return Err("empty pattern token".into());
        }
        Ok(PatternToken { glob: s.to_string(), class: None })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestObjective {
    pub id: String,
    pub area: String,
    pub description: String,
    pub interaction: Vec<PatternToken>,
    pub checks: Vec<OracleCheck>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TestPlan {
    pub objectives: Vec<TestObjective>,
}

pub fn parse_pattern(s: &str) -> Result<Vec<PatternToken>, String> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(" > ").map(str::parse).collect()
}

fn parse_checks(objective: &str, cell: &str) -> Result<Vec<OracleCheck>, String> {
    unescape_cell(cell)
        .lines()
        .filter(|l| !l.trim().is_empty())
        .enumerate()
        .map(|(k, line)| {
            let (class, text) = line.split_once(": ").ok_or_else(|| format!("check {line:?} lacks 'class: '"))?;
            OracleCheck::new(format!("{objective}.c{}", k + 1), class.parse()?, text.trim())
        })
        .collect()
}

impl TestPlan {
    /// Areas in first-appearance order.
    pub fn areas(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for o in &self.objectives {
            if !out.contains(&o.area.as_str()) {
                out.push(&o.area);
            }
        }
        out
    }

    pub fn checks(&self) -> impl Iterator<Item = (&TestObjective, &OracleCheck)> {
        self.objectives.iter().flat_map(|o| o.checks.iter().map(move |c| (o, c)))
    }

    /// Objective and check counts per area.
    pub fn counts(&self) -> BTreeMap<&str, (usize, usize)> {
        let mut m: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
        for o in &self.objectives {
            let e = m.entry(o.area.as_str()).or_default();
            e.0 += 1;
            e.1 += o.checks.len();
        }
        m
    }

    /// Parses CSV text. With an `area` column each row names its area;
    /// otherwise every row belongs to `default_area`.
    pub fn parse_csv(text: &str, default_area: Option<&str>) -> Result<TestPlan, PlanError> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
        let headers = rdr.headers().map_err(|e| PlanError::Row { row: 1, message: e.to_string() })?.clone();
        let col = |name: &str| headers.iter().position(|h| h.trim().eq_ignore_ascii_case(name));
        let (id_c, inter_c, checks_c) = match (col("id"), col("interactions"), col("checks")) {
            (Some(a), Some(b), Some(c)) => (a, b, c),
            _ => {
                return Err(PlanError::Row { row: 1, message: "header needs id, interactions and checks".into() })
            }
        };
        let area_c = col("area");
        let desc_c = col("description");
        let mut plan = TestPlan::default();
        for (i, rec) in rdr.records().enumerate() {
            let row = i + 2;
            let err = |message: String| PlanError::Row { row, message };
            let rec = rec.map_err(|e| err(e.to_string()))?;
            let get = |c: usize| rec.get(c).unwrap_or("").to_string();
            let area = match (area_c, default_area) {
                (Some(c), _) if !get(c).trim().is_empty() => get(c).trim().to_string(),
                (_, Some(a)) => a.to_string(),
                _ => return Err(err("no functional area".into())),
            };
            let id = get(id_c).trim().to_string();
            if id.is_empty() {
                return Err(err("empty objective id".into()));
            }
            plan.objectives.push(TestObjective {
                checks: parse_checks(&id, &get(checks_c)).map_err(err)?,
                interaction: parse_pattern(&get(inter_c)).map_err(err)?,
                description: desc_c.map(get).unwrap_or_default(),
                area,
                id,
            });
        }
        Ok(plan)
    }

    /// Loads one CSV file, or every `*.csv` in a directory with the file
    /// stem as the default area.
    pub fn load(path: &Path) -> Result<TestPlan, PlanError> {
        let io = |e: std::io::Error| PlanError::Io { path: path.to_path_buf(), message: e.to_string() };
        if path.is_dir() {
            let mut files: Vec<PathBuf> = fs::read_dir(path)
                .map_err(io)?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "csv"))
                .collect();
            files.sort();
            let mut plan = TestPlan::default();
            for f in files {
                let stem = f.file_stem().and_then(|s| s.to_str()).unwrap_or("").to_string();
                let text = fs::read_to_string(&f).map_err(|e| PlanError::Io { path: f.clone(), message: e.to_string() })?;
                plan.objectives.extend(Self::parse_csv(&text, Some(&stem))?.objectives);
            }
            Ok(plan)
        } else {
            Self::parse_csv(&fs::read_to_string(path).map_err(io)?, None)
        }
    }

    /// Single-file CSV with an area column.
    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        let _ = w.write_record(["area", "id", "description", "interactions", "checks"]);
        for o in &self.objectives {
            let pattern = o.interaction.iter().map(ToString::to_string).collect::<Vec<_>>().join(" > ");
            let checks = o.checks.iter().map(OracleCheck::spec_line).collect::<Vec<_>>().join("\n");
            let _ = w.write_record([o.area.as_str(), &o.id, &o.description, &pattern, &escape_cell(&checks)]);
        }
        String::from_utf8(w.into_inner().unwrap_or_default()).unwrap_or_default()
    }
}
