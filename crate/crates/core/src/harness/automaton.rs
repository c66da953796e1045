//! Interaction automata: how often each action class runs and which class follows which.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::classify::ActionClass;
use crate::explorer::RunLog;

const N: usize = ActionClass::TABLE.len();

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct InteractionAutomaton {
    /// Indexed by `ActionClass::index()` over the five table classes.
    pub nodes: [u64; N],
    pub edges: [[u64; N]; N],
    /// Episodes whose last classified action is of each class.
    pub ends: [u64; N],
}

impl InteractionAutomaton {
    /// Adds one episode's class sequence; `Other` entries are skipped, so
    /// pairs bridge over them.
    pub fn add_episode(&mut self, classes: impl IntoIterator<Item = ActionClass>) {
        let mut prev: Option<usize> = None;
        for c in classes {
            if c == ActionClass::Other {
                continue;
            }
            let i = c.index();
            self.nodes[i] += 1;
            if let Some(p) = prev {
                self.edges[p][i] += 1;
            }
            prev = Some(i);
        }
        if let Some(p) = prev {
            self.ends[p] += 1;
        }
    }

    pub fn node(&self, c: ActionClass) -> u64 {
        if c == ActionClass::Other { 0 } else { self.nodes[c.index()] }
    }

    pub fn edge(&self, from: ActionClass, to: ActionClass) -> u64 {
        if from == ActionClass::Other || to == ActionClass::Other {
            0
        } else {
            self.edges[from.index()][to.index()]
        }
    }

    pub fn merge(&mut self, other: &InteractionAutomaton) {
        for i in 0..N {
            self.nodes[i] += other.nodes[i];
            self.ends[i] += other.ends[i];
            for j in 0..N {
                self.edges[i][j] += other.edges[i][j];
            }
        }
    }

    /// Node weight equals outgoing weight plus episodes ending there.
    pub fn is_flow_conserving(&self) -> bool {
        (0..N).all(|i| self.nodes[i] == self.edges[i].iter().sum::<u64>() + self.ends[i])
    }

    /// Graphviz description with weights as labels.
    pub fn to_dot(&self, name: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "digraph \"{}\" {{", name.replace('"', "'"));
        s.push_str("  rankdir=LR;\n");
        for c in ActionClass::TABLE {
            let _ = writeln!(s, "  \"{c}\" [label=\"{c}\\n{}\"];", self.node(c));
        }
        for a in ActionClass::TABLE {
            for b in ActionClass::TABLE {
                let w = self.edge(a, b);
                if w > 0 {
                    let _ = writeln!(s, "  \"{a}\" -> \"{b}\" [label=\"{w}\"];");
                }
            }
        }
        s.push_str("}\n");
        s
    }
}

/// Automaton of the selected (non-prefix) steps of a run.
pub fn build_automaton(log: &RunLog) -> InteractionAutomaton {
    let mut a = InteractionAutomaton::default();
    let mut i = 0;
    let entries = &log.entries;
    while i < entries.len() {
        let ep = entries[i].episode;
        let start = i;
        while i < entries.len() && entries[i].episode == ep {
            i += 1;
        }
        a.add_episode(entries[start..i].iter().filter(|e| !e.prefix).map(|e| e.class));
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use ActionClass::*;

    #[test]
    fn two_step_episode() {
        let mut a = InteractionAutomaton::default();
        a.add_episode([Menu, Crud]);
        assert_eq!((a.node(Menu), a.node(Crud), a.edge(Menu, Crud)), (1, 1, 1));
        assert!(a.is_flow_conserving());
    }

    #[test]
    fn other_is_bridged() {
        let mut a = InteractionAutomaton::default();
        a.add_episode([Menu, Other, Crud, Other]);
        assert_eq!(a.edge(Menu, Crud), 1);
        assert_eq!(a.ends[Crud.index()], 1);
        assert!(a.to_dot("x").contains("\"Menu\" -> \"CRUD\" [label=\"1\"]"));
    }
}
