use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::explorer::TestCase;
use crate::report::{entry_matches, TestReport};

use super::matching::{objective_satisfied, Witness};
use super::TestPlan;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AreaCoverage {
    pub area: String,
    pub objectives: usize,
    pub satisfied: usize,
    /// Checks of satisfied objectives.
    pub reached: usize,
    /// Reached checks whose data class the reports track.
    pub verifiable: usize,
    pub verified: usize,
}

impl AreaCoverage {
    fn add(&mut self, o: &AreaCoverage) {
        self.objectives += o.objectives;
        self.satisfied += o.satisfied;
        self.reached += o.reached;
        self.verifiable += o.verifiable;
        self.verified += o.verified;
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverageResult {
    /// Per area, in plan order.
    pub areas: Vec<AreaCoverage>,
    pub witnesses: BTreeMap<String, Witness>,
    pub verified_checks: BTreeSet<String>,
}

/// Integer percentage, rounded half up; 0 when the denominator is 0.
pub fn percent(part: usize, whole: usize) -> usize {
    if whole == 0 { 0 } else { (200 * part + whole) / (2 * whole) }
}

impl CoverageResult {
    pub fn total(&self) -> AreaCoverage {
        let mut t = AreaCoverage { area: "Total".into(), ..Default::default() };
        for a in &self.areas {
            t.add(a);
        }
        t
    }

    pub fn area(&self, name: &str) -> Option<&AreaCoverage> {
        self.areas.iter().find(|a| a.area == name)
    }

    /// Bookkeeping from externally supplied flags, without running anything.
    pub fn from_flags(plan: &TestPlan, satisfied: &BTreeSet<String>, verified: &BTreeSet<String>) -> CoverageResult {
        let mut areas: Vec<AreaCoverage> =
            plan.areas().into_iter().map(|a| AreaCoverage { area: a.to_string(), ..Default::default() }).collect();
        let mut verified_checks = BTreeSet::new();
        for o in &plan.objectives {
            let a = areas.iter_mut().find(|a| a.area == o.area).expect("area listed");
            a.objectives += 1;
            if !satisfied.contains(&o.id) {
                continue;
            }
            a.satisfied += 1;
            for c in &o.checks {
                a.reached += 1;
                if c.data_class.verifiable() {
                    a.verifiable += 1;
                    if verified.contains(&c.id) {
                        a.verified += 1;
                        verified_checks.insert(c.id.clone());
                    }
                }
            }
        }
        CoverageResult { areas, witnesses: BTreeMap::new(), verified_checks }
    }
}

/// Satisfaction of every objective plus evaluation of its verifiable checks
/// against the report rows spanning the witness steps.
pub fn verify_oracles(plan: &TestPlan, tests: &[TestCase], report: &TestReport) -> CoverageResult {
    let mut witnesses = BTreeMap::new();
    let mut verified = BTreeSet::new();
    for o in &plan.objectives {
        let Some(w) = objective_satisfied(o, tests) else { continue };
        let outputs: Vec<_> = report
            .rows_of(&w.test_id)
            .iter()
            .filter(|r| r.last_step >= w.first_step && r.first_step <= w.last_step)
            .flat_map(|r| r.outputs.iter())
            .collect();
        for c in &o.checks {
            if let Some(p) = &c.pattern {
                if outputs.iter().any(|e| entry_matches(p, e)) {
                    verified.insert(c.id.clone());
                }
            }
        }
        witnesses.insert(o.id.clone(), w);
    }
    let satisfied: BTreeSet<String> = witnesses.keys().cloned().collect();
    let mut cov = CoverageResult::from_flags(plan, &satisfied, &verified);
    cov.witnesses = witnesses;
    cov
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriageSummary {
    /// Objectives no generated test exercised.
    pub manual_design: usize,
    /// Reached oracles the reports could not confirm.
    pub manual_replay: usize,
    /// Oracles confirmed by browsing the reports.
    pub browse: usize,
}

pub fn triage(coverage: &CoverageResult) -> TriageSummary {
    let t = coverage.total();
    TriageSummary { manual_design: t.objectives - t.satisfied, manual_replay: t.reached - t.verified, browse: t.verified }
}

/// Objective coverage, one satisfied column per labelled result.
pub fn render_coverage_table(columns: &[(&str, &CoverageResult)]) -> String {
    let mut out = String::from("Functional area,Test objectives");
    for (name, _) in columns {
        let _ = write!(out, ",Satisfied w/ {name},%");
    }
    out.push('\n');
    let Some((_, first)) = columns.first() else { return out };
    let mut rows: Vec<AreaCoverage> = first.areas.clone();
    rows.push(first.total());
    for (i, a) in rows.iter().enumerate() {
        let _ = write!(out, "{},{}", a.area, a.objectives);
        for (_, c) in columns {
            let s = if i < first.areas.len() {
                c.area(&a.area).map(|x| x.satisfied).unwrap_or(0)
            } else {
                c.total().satisfied
            };
            let _ = write!(out, ",{s},{}", percent(s, a.objectives));
        }
        out.push('\n');
    }
    out
}

pub fn render_oracle_table(cov: &CoverageResult) -> String {
    let mut out = String::from("Functional area,Reached oracles,Verifiable oracles,Verified oracles,%\n");
    for a in cov.areas.iter().cloned().chain(std::iter::once(cov.total())) {
        let _ = writeln!(out, "{},{},{},{},{}", a.area, a.reached, a.verifiable, a.verified, percent(a.verified, a.reached));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn percentages_round_half_up() {
        assert_eq!(percent(65, 81), 80);
        assert_eq!(percent(9, 16), 56);
        assert_eq!(percent(1, 2), 50);
        assert_eq!(percent(1, 8), 13);
        assert_eq!(percent(3, 0), 0);
    }
}
