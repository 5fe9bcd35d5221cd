use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::{Letter, SyncAutomaton};
use crate::error::{Error, Result};

/// On-disk automaton format. Field order is part of the format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutomatonJson {
    pub arity: usize,
    pub states: usize,
    pub initial: usize,
    pub finals: Vec<usize>,
    pub transitions: Vec<TransitionJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionJson {
    pub from: usize,
    pub letter: Vec<u8>,
    pub to: usize,
}

impl From<&SyncAutomaton> for AutomatonJson {
    fn from(a: &SyncAutomaton) -> Self {
        AutomatonJson {
            arity: a.arity,
            states: a.num_states(),
            initial: a.initial,
            finals: a.finals().collect(),
            transitions: a
                .transitions()
                .map(|(from, l, to)| TransitionJson {
                    from,
                    letter: l.bits(a.arity),
                    to,
                })
                .collect(),
        }
    }
}

impl TryFrom<&AutomatonJson> for SyncAutomaton {
    type Error = Error;

    fn try_from(j: &AutomatonJson) -> Result<Self> {
        let mut transitions = Vec::with_capacity(j.transitions.len());
        for t in &j.transitions {
            if t.letter.len() != j.arity {
                return Err(Error::InvalidAutomaton(format!(
                    "letter {:?} has length {}, expected {}",
                    t.letter,
                    t.letter.len(),
                    j.arity
                )));
            }
            transitions.push((t.from, Letter::from_bits(&t.letter)?, t.to));
        }
        SyncAutomaton::new(j.arity, j.states, j.initial, &j.finals, &transitions)
    }
}

impl SyncAutomaton {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let j: AutomatonJson = serde_json::from_str(s)
            .map_err(|e| Error::InvalidAutomaton(format!("malformed automaton JSON: {e}")))?;
        SyncAutomaton::try_from(&j)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("automaton JSON serialization")
    }
}

pub(crate) fn to_dot(a: &SyncAutomaton) -> String {
    let mut out = String::from("digraph automaton {\n  rankdir=LR;\n  init [shape=point];\n");
    for q in 0..a.num_states() {
        let shape = if a.is_final(q) {
            "doublecircle"
        } else {
            "circle"
        };
        let _ = writeln!(out, "  q{q} [shape={shape}];");
    }
    let _ = writeln!(out, "  init -> q{};", a.initial());
    for (from, l, to) in a.transitions() {
        let label: Vec<String> = l.bits(a.arity).iter().map(u8::to_string).collect();
        let _ = writeln!(out, "  q{from} -> q{to} [label=\"({})\"];", label.join(","));
    }
    out.push_str("}\n");
    out
}
