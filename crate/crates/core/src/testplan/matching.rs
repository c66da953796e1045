use serde::{Deserialize, Serialize};

use crate::explorer::TestCase;
use crate::harness::ActionClass;
use crate::report::HOME_MENU;

use super::{PatternToken, TestObjective};

/// A step as the plan sees it: `Invoices` for a menu, `Invoices.Save` otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepToken {
    pub name: String,
    pub class: ActionClass,
    pub is_menu: bool,
}

pub fn step_tokens(test: &TestCase) -> Vec<StepToken> {
    let mut menu = HOME_MENU.to_string();
    test.steps
        .iter()
        .map(|s| {
            let is_menu = s.step.role.is_menu();
            let name = if is_menu {
                menu = s.step.label.clone();
                menu.clone()
            } else {
                format!("{menu}.{}", s.step.label)
            };
            StepToken { name, class: s.class, is_menu }
        })
        .collect()
}

/// `*` matches any (possibly empty) run of characters.
pub fn glob_match(pattern: &str, text: &str) -> bool {
    let p: Vec<char> = pattern.chars().collect();
    let t: Vec<char> = text.chars().collect();
    let (mut pi, mut ti) = (0, 0);
    let mut star: Option<(usize, usize)> = None;
    while ti < t.len() {
        if pi < p.len() && p[pi] == '*' {
            star = Some((pi, ti));
            pi += 1;
        } else if pi < p.len() && p[pi] == t[ti] {
            pi += 1;
            ti += 1;
        } else if let Some((sp, st)) = star {
            pi = sp + 1;
            ti = st + 1;
            star = Some((sp, st + 1));
        } else {
            return false;
        }
    }
    p[pi..].iter().all(|&c| c == '*')
}

fn token_matches(p: &PatternToken, t: &StepToken) -> bool {
    glob_match(&p.glob, &t.name) && p.class.is_none_or(|c| c == t.class)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub test_id: String,
    /// 1-based inclusive step range of the match.
    pub first_step: usize,
    pub last_step: usize,
}

/// Earliest subsequence match inside one menu partition (a menu step opens a
/// new partition), as `(first, last)` 0-based indices.
pub fn match_in_partitions(pattern: &[PatternToken], tokens: &[StepToken]) -> Option<(usize, usize)> {
    if tokens.is_empty() {
        return None;
    }
    if pattern.is_empty() {
        return Some((0, 0));
    }
    let mut start = 0;
    while start < tokens.len() {
        let mut end = start + 1;
        while end < tokens.len() && !tokens[end].is_menu {
            end += 1;
        }
        // Greedy left-to-right is exact for subsequence existence; restarting
        // at each candidate first element keeps the reported range tight.
        for first in start..end {
            if !token_matches(&pattern[0], &tokens[first]) {
                continue;
            }
            let mut k = 1;
            let mut last = first;
            for (i, t) in tokens.iter().enumerate().take(end).skip(first + 1) {
                if k == pattern.len() {
                    break;
                }
                if token_matches(&pattern[k], t) {
                    k += 1;
                    last = i;
                }
            }
            if k == pattern.len() {
                return Some((first, last));
            }
        }
        start = end;
    }
    None
}

/// First test, in generation order, that exercises the objective.
pub fn objective_satisfied(obj: &TestObjective, tests: &[TestCase]) -> Option<Witness> {
    tests.iter().find_map(|t| {
        match_in_partitions(&obj.interaction, &step_tokens(t)).map(|(a, b)| Witness {
            test_id: t.id.clone(),
            first_step: a + 1,
            last_step: b + 1,
        })
    })
}
