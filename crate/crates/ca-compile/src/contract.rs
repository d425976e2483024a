// Copyright (c) 2026 ram-workbench contributors
// SPDX-License-Identifier: Apache-2.0

//! The linear-time output contract.
//!
//! A conforming automaton, run on a length-n input word, must at step c·n
//! be exactly ♯ (q♯)^k v ♯ with every active cell in an output state, must
//! never let the active window exceed c·n cells, and must treat output
//! states as final: once a cell enters Q_out it never changes again. The
//! finality rule is the stabilized reading of the exact-time condition —
//! outputs may appear before c·n only if they are already the answer — which
//! is what the table compiler needs to read the configuration at exactly
//! c·n. The strict reading (no output state anywhere before c·n) is
//! equivalent to firing-squad synchronization and is deliberately out of
//! scope; `strict` mode is still available for automata that do synchronize.

use serde::{Deserialize, Serialize};

use crate::{automaton::ca_step, CellularAutomaton, State, WordConfig};

/// Outcome of checking a sample set against the contract.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum ContractVerdict {
    /// All samples conform. `first_output` is the earliest step at which any
    /// sample showed an output state (c·n exactly, under strict mode).
    Compliant { samples: usize, first_output: u64 },
    /// The first violation found.
    Violation {
        sample: usize,
        time: u64,
        reason: String,
    },
}

impl ContractVerdict {
    pub fn is_compliant(&self) -> bool {
        matches!(self, ContractVerdict::Compliant { .. })
    }
}

/// Checks the stabilized contract on every sample word.
pub fn check_linear_contract(ca: &CellularAutomaton, samples: &[Vec<State>]) -> ContractVerdict {
    check_contract(ca, samples, false)
}

/// Checks the contract, optionally in strict mode (no output state at any
/// step before c·n).
pub fn check_contract(
    ca: &CellularAutomaton,
    samples: &[Vec<State>],
    strict: bool,
) -> ContractVerdict {
    let mut first_output = u64::MAX;
    for (idx, word) in samples.iter().enumerate() {
        let fail = |time: u64, reason: String| ContractVerdict::Violation {
            sample: idx,
            time,
            reason,
        };
        if word.is_empty() {
            return fail(0, "empty sample word".into());
        }
        if let Some(&bad) = word.iter().find(|&&q| q >= ca.gamma) {
            return fail(0, format!("sample contains non-input state {bad}"));
        }
        let horizon = ca.c as u64 * word.len() as u64;
        let width_cap = horizon as usize;
        let mut cfg = WordConfig::from_word(word);
        for t in 1..=horizon {
            let next = ca_step(ca, &cfg);
            if next.active_width(ca.sharp) > width_cap {
                return fail(t, format!("active width exceeded c·n = {width_cap}"));
            }
            // Finality: an output state never changes once entered.
            for (i, &q) in cfg.cells.iter().enumerate() {
                if ca.is_out(q) && next.cells.get(i) != Some(&q) {
                    return fail(t, format!("output state {q} at cell {i} mutated"));
                }
            }
            if t < horizon {
                if let Some(q) = next.cells.iter().find(|&&q| ca.is_out(q)) {
                    first_output = first_output.min(t);
                    if strict {
                        return fail(t, format!("output state {q} appeared before c·n"));
                    }
                }
            }
            cfg = next;
        }
        // At c·n the configuration must be ♯ (q♯)^k v ♯ over Q_out.
        for (i, &q) in cfg.cells.iter().enumerate() {
            if !ca.is_out(q) {
                return fail(
                    horizon,
                    format!("cell {i} holds non-output state {q} at c·n"),
                );
            }
        }
        first_output = first_output.min(horizon);
    }
    ContractVerdict::Compliant {
        samples: samples.len(),
        first_output,
    }
}
