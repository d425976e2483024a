// Copyright (c) 2026 ram-workbench contributors
// SPDX-License-Identifier: Apache-2.0

//! Shipped demonstration automata, all of arity 1 (γ = 4, ♯ = 4).
//!
//! Each consumes a length-n encoded word whose digit at cell j carries the
//! j-th bit of N on track 0 and the j-th bit of the operand X₁ on track 1,
//! and reaches its frozen output configuration no later than step c·n = n:
//!
//! * identity: every cell freezes to the output state of its X₁ bit;
//! * complement: every cell freezes to the negated X₁ bit;
//! * parity: a frontier sweeps left to right accumulating the X₁ bit
//!   parity, leaving q♯ behind, and deposits the total at cell 0 at
//!   exactly step n.
//!
//! Output states never change once entered, so the configuration read at
//! step c·n equals the stabilized output.

use crate::{CellularAutomaton, State};

const GAMMA: State = 4;
const SHARP: State = 4;
const Q_SHARP: State = 5;
const OUT0: State = 6;
const OUT1: State = 7;
const PAR0: State = 8;
const PAR1: State = 9;

/// Bit of the X₁ operand track inside an input digit.
fn track1(u: State) -> State {
    (u >> 1) & 1
}

fn build(s: State, rule: impl Fn(State, State, State) -> State, q_out: Vec<State>) -> CellularAutomaton {
    let su = s as usize;
    let mut delta = vec![0 as State; su * su * su];
    for l in 0..s {
        for c in 0..s {
            for r in 0..s {
                delta[(l as usize * su + c as usize) * su + r as usize] = rule(l, c, r);
            }
        }
    }
    let mut pi = vec![0u8; su];
    pi[OUT1 as usize] = 1;
    CellularAutomaton::new(s, delta, q_out, pi, 1, 1).expect("demo automaton is well-formed")
}

/// Persisting behavior shared by every demo: ♯ and frozen states are inert.
fn common(c: State) -> Option<State> {
    match c {
        SHARP => Some(SHARP),
        Q_SHARP | OUT0 | OUT1 => Some(c),
        _ => None,
    }
}

/// Echoes X₁: cell j outputs bit j of X₁.
pub fn identity_ca() -> CellularAutomaton {
    build(
        8,
        |_, c, _| common(c).unwrap_or_else(|| if c < GAMMA { OUT0 + track1(c) } else { c }),
        vec![Q_SHARP, OUT0, OUT1],
    )
}

/// Bitwise complement of X₁ within the word length.
pub fn complement_ca() -> CellularAutomaton {
    build(
        8,
        |_, c, _| common(c).unwrap_or_else(|| if c < GAMMA { OUT0 + 1 - track1(c) } else { c }),
        vec![Q_SHARP, OUT0, OUT1],
    )
}

/// Parity of the X₁ bits, deposited at cell 0; all other cells end in q♯.
pub fn parity_ca() -> CellularAutomaton {
    build(
        10,
        |l, c, r| {
            if let Some(q) = common(c) {
                return q;
            }
            if c < GAMMA {
                let b = track1(c);
                return match (l, r) {
                    (SHARP, SHARP) => OUT0 + b,
                    (SHARP, _) => PAR0 + b,
                    (PAR0 | PAR1, SHARP) => OUT0 + ((l - PAR0) ^ b),
                    (PAR0 | PAR1, _) => PAR0 + ((l - PAR0) ^ b),
                    _ => c,
                };
            }
            // c is the frontier: it has just handed the running parity to its
            // right neighbor and retires.
            debug_assert!(c == PAR0 || c == PAR1);
            if r == SHARP {
                OUT0 + (c - PAR0)
            } else {
                Q_SHARP
            }
        },
        vec![Q_SHARP, OUT0, OUT1],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::ca_run;

    fn proj(ca: &CellularAutomaton, cells: &[State]) -> u64 {
        cells
            .iter()
            .enumerate()
            .map(|(j, &q)| (ca.pi[q as usize] as u64) << j)
            .sum()
    }

    /// Encodes (N, X₁) into the cell word: bit j of N on track 0, bit j of
    /// X₁ on track 1, one digit per cell, length = bit length of N^d.
    pub fn encode(n: u64, x1: u64, d: u32) -> Vec<State> {
        let limit = (n as u128).pow(d);
        let len = 128 - limit.leading_zeros() as usize;
        (0..len)
            .map(|j| (((n >> j) & 1) + 2 * ((x1 as u128 >> j) & 1) as u64) as State)
            .collect()
    }

    #[test]
    fn identity_reads_back_x1() {
        let ca = identity_ca();
        for (n, x1) in [(13u64, 7u64), (100, 99), (1 << 10, 777)] {
            let w = encode(n, x1, 1);
            let out = ca_run(&ca, &w, ca.c as u64 * w.len() as u64);
            assert_eq!(proj(&ca, &out.cells), x1);
        }
    }

    #[test]
    fn complement_negates_within_length() {
        let ca = complement_ca();
        for (n, x1) in [(13u64, 7u64), (255, 0), (1 << 12, 4095)] {
            let w = encode(n, x1, 1);
            let len = w.len() as u32;
            let out = ca_run(&ca, &w, ca.c as u64 * w.len() as u64);
            assert_eq!(proj(&ca, &out.cells), ((1u64 << len) - 1) ^ x1);
        }
    }

    #[test]
    fn parity_accumulates_exactly_at_cn() {
        let ca = parity_ca();
        for (n, x1) in [(13u64, 7u64), (13, 9), (1000, 987), (7, 0)] {
            let w = encode(n, x1, 1);
            let t = ca.c as u64 * w.len() as u64;
            // One step earlier cell 0 has not produced its output yet.
            if t > 1 {
                let before = ca_run(&ca, &w, t - 1);
                assert!(!ca.is_out(before.cells[0]));
            }
            let out = ca_run(&ca, &w, t);
            assert_eq!(proj(&ca, &out.cells), (x1.count_ones() % 2) as u64);
            assert!(out.cells.iter().all(|&q| ca.is_out(q)));
        }
    }
}
