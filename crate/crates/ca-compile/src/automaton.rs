// Copyright (c) 2026 ram-workbench contributors
// SPDX-License-Identifier: Apache-2.0

//! The automaton type, synchronous evolution, and sequential composition.

use serde::{Deserialize, Serialize};

use crate::{CaError, CaResult, State};

/// A one-dimensional cellular automaton (Q, δ) with a boundary state ♯ that
/// is permanent on the right, an input alphabet Γ = {0..γ−1}, a distinguished
/// output-state subset, and a bit projection π.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CellularAutomaton {
    /// Number of states; Q = 0..s−1.
    pub s: State,
    /// Rule table, flat, indexed by (left·s + center)·s + right where "left"
    /// is the higher-numbered neighbor.
    pub delta: Vec<State>,
    /// The boundary state ♯; always equal to γ.
    pub sharp: State,
    /// Output states Q_out (disjoint from Γ ∪ {♯}).
    pub q_out: Vec<State>,
    /// Projection Q → {0,1}; zero outside Q_out.
    pub pi: Vec<u8>,
    /// Exact-time multiplier: a length-n input is read at step c·n.
    pub c: u32,
    /// Operand arity of the encoded inputs this automaton consumes.
    pub r: u32,
    /// Input-alphabet size γ = 2^{r+1}.
    pub gamma: State,
}

impl CellularAutomaton {
    /// Validates every structural invariant and returns the automaton.
    pub fn new(
        s: State,
        delta: Vec<State>,
        q_out: Vec<State>,
        pi: Vec<u8>,
        c: u32,
        r: u32,
    ) -> CaResult<Self> {
        let gamma = 1u32
            .checked_shl(r + 1)
            .filter(|g| *g < State::MAX as u32)
            .ok_or_else(|| CaError::InvalidAutomaton(format!("arity {r} is too large")))?
            as State;
        let ca = CellularAutomaton {
            s,
            delta,
            sharp: gamma,
            q_out,
            pi,
            c,
            r,
            gamma,
        };
        ca.validate()?;
        Ok(ca)
    }

    /// Checks all invariants; used by [`Self::new`] and after deserialization.
    pub fn validate(&self) -> CaResult<()> {
        let s = self.s as usize;
        let fail = |msg: String| Err(CaError::InvalidAutomaton(msg));
        if self.gamma != (1 << (self.r + 1)) as State {
            return fail(format!("γ = {} is not 2^{}", self.gamma, self.r + 1));
        }
        if self.sharp != self.gamma {
            return fail(format!("♯ = {} must equal γ = {}", self.sharp, self.gamma));
        }
        if (self.gamma as usize) >= s {
            return fail(format!("need γ = {} < s = {s}", self.gamma));
        }
        if self.delta.len() != s * s * s {
            return fail(format!("δ has {} entries, want s³ = {}", self.delta.len(), s * s * s));
        }
        if self.delta.iter().any(|&q| q as usize >= s) {
            return fail("δ maps outside Q".into());
        }
        if self.pi.len() != s {
            return fail(format!("π has {} entries, want s = {s}", self.pi.len()));
        }
        if self.pi.iter().any(|&b| b > 1) {
            return fail("π must map into {0,1}".into());
        }
        if self.c == 0 {
            return fail("time multiplier c must be positive".into());
        }
        for &q in &self.q_out {
            if q as usize >= s {
                return fail(format!("output state {q} outside Q"));
            }
            if q == self.sharp {
                return fail("♯ cannot be an output state".into());
            }
            if q < self.gamma {
                return fail(format!("input state {q} cannot be an output state"));
            }
        }
        for q in 0..s as State {
            if self.pi[q as usize] == 1 && !self.q_out.contains(&q) {
                return fail(format!("π({q}) = 1 but {q} is not an output state"));
            }
        }
        // Permanence on the right: a ♯ cell whose right neighbor is ♯ stays ♯
        // whatever sits on its left, and no active cell ever becomes ♯.
        for l in 0..s as State {
            if self.rule(l, self.sharp, self.sharp) != self.sharp {
                return fail(format!("δ({l},♯,♯) must be ♯"));
            }
            for c in 0..s as State {
                for rr in 0..s as State {
                    if c != self.sharp && self.rule(l, c, rr) == self.sharp {
                        return fail(format!("δ({l},{c},{rr}) creates ♯ from active state {c}"));
                    }
                }
            }
        }
        Ok(())
    }

    /// δ(left, center, right) with "left" the higher-numbered neighbor.
    #[inline]
    pub fn rule(&self, left: State, center: State, right: State) -> State {
        let s = self.s as usize;
        self.delta[(left as usize * s + center as usize) * s + right as usize]
    }

    pub fn is_out(&self, q: State) -> bool {
        self.q_out.contains(&q)
    }

    /// Serializes the automaton as the JSON interchange form.
    pub fn to_json(&self) -> CaResult<String> {
        serde_json::to_string_pretty(self).map_err(|e| CaError::Serialization(e.to_string()))
    }

    /// Parses and validates an automaton from its JSON interchange form.
    pub fn from_json(text: &str) -> CaResult<Self> {
        let ca: CellularAutomaton =
            serde_json::from_str(text).map_err(|e| CaError::Serialization(e.to_string()))?;
        ca.validate()?;
        Ok(ca)
    }
}

/// A configuration ··· ♯ ♯ w ♯ ♯ ···, stored as the finite active window.
/// `cells[0]` is cell 0, the rightmost cell; the window only grows leftward.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordConfig {
    pub cells: Vec<State>,
}

impl WordConfig {
    /// Wraps an input word given in cell order (least-significant cell first).
    pub fn from_word(word: &[State]) -> Self {
        WordConfig {
            cells: word.to_vec(),
        }
    }

    /// State of cell `i`, with ♯ outside the stored window.
    #[inline]
    pub fn get(&self, i: isize, sharp: State) -> State {
        if i < 0 || i as usize >= self.cells.len() {
            sharp
        } else {
            self.cells[i as usize]
        }
    }

    /// Number of cells from the highest active cell down to cell 0.
    pub fn active_width(&self, sharp: State) -> usize {
        match self.cells.iter().rposition(|&q| q != sharp) {
            Some(top) => top + 1,
            None => 0,
        }
    }
}

/// One synchronous step; the window grows by at most one cell on the left and
/// never on the right (♯ is permanent there).
pub fn ca_step(ca: &CellularAutomaton, cfg: &WordConfig) -> WordConfig {
    let sharp = ca.sharp;
    let len = cfg.cells.len() as isize;
    let mut next = Vec::with_capacity(cfg.cells.len() + 1);
    for i in 0..=len {
        next.push(ca.rule(
            cfg.get(i + 1, sharp),
            cfg.get(i, sharp),
            cfg.get(i - 1, sharp),
        ));
    }
    while next.last() == Some(&sharp) {
        next.pop();
    }
    WordConfig { cells: next }
}

/// Runs `t` synchronous steps from ♯w♯.
pub fn ca_run(ca: &CellularAutomaton, word: &[State], t: u64) -> WordConfig {
    let mut cfg = WordConfig::from_word(word);
    for _ in 0..t {
        cfg = ca_step(ca, &cfg);
    }
    cfg
}

/// Sequential composition: a new automaton computing f₂ ∘ f₁.
///
/// `pi1` maps each output state of `ca1` to an input state of `ca2` (below
/// γ₂); the two state sets are kept disjoint except for the shared ♯ by
/// shifting `ca2`'s states past `ca1`'s. The rule table is filled by the
/// three cases — inherit δ₁ on Q₁-triples, inherit δ₂ on Q₂-triples, and
/// rewrite an output state of `ca1` to its `pi1` image — with ♯-permanence
/// enforced on the remaining mixed neighborhoods.
pub fn compose(
    ca1: &CellularAutomaton,
    pi1: &[State],
    ca2: &CellularAutomaton,
) -> CaResult<CellularAutomaton> {
    let s1 = ca1.s;
    let s2 = ca2.s;
    if pi1.len() != s1 as usize {
        return Err(CaError::Composition(format!(
            "interface map has {} entries, want s₁ = {s1}",
            pi1.len()
        )));
    }
    for &q in &ca1.q_out {
        let target = pi1[q as usize];
        if target >= ca2.gamma {
            return Err(CaError::Composition(format!(
                "output state {q} maps to {target}, which is not an input state of \
                 the second automaton (its states would overlap the working set)"
            )));
        }
    }
    // ca2's non-♯ states are shifted to s1..s1+s2−2; ♯ is shared.
    let map2 = |q: State| -> State {
        if q == ca2.sharp {
            ca1.sharp
        } else if q < ca2.sharp {
            s1 + q
        } else {
            s1 + q - 1
        }
    };
    let inv2 = |q: State| -> Option<State> {
        if q == ca1.sharp {
            Some(ca2.sharp)
        } else if q >= s1 {
            let v = q - s1;
            Some(if v < ca2.sharp { v } else { v + 1 })
        } else {
            None
        }
    };
    let s = s1 + s2 - 1;
    let su = s as usize;
    let in_q1 = |q: State| q < s1;
    let mut delta = vec![0 as State; su * su * su];
    for l in 0..s {
        for c in 0..s {
            for rr in 0..s {
                let idx = (l as usize * su + c as usize) * su + rr as usize;
                let v = if c == ca1.sharp && rr == ca1.sharp {
                    ca1.sharp
                } else if ca1.is_out(c) {
                    map2(pi1[c as usize])
                } else if in_q1(l) && in_q1(c) && in_q1(rr) {
                    ca1.rule(l, c, rr)
                } else if let (Some(l2), Some(c2), Some(r2)) = (inv2(l), inv2(c), inv2(rr)) {
                    map2(ca2.rule(l2, c2, r2))
                } else {
                    c // unreachable in well-formed runs; keep the cell inert
                };
                delta[idx] = v;
            }
        }
    }
    let q_out: Vec<State> = ca2.q_out.iter().map(|&q| map2(q)).collect();
    let mut pi = vec![0u8; su];
    for (q2, &b) in ca2.pi.iter().enumerate() {
        if b == 1 {
            pi[map2(q2 as State) as usize] = 1;
        }
    }
    CellularAutomaton::new(s, delta, q_out, pi, ca1.c + ca1.c * ca2.c + 1, ca1.r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::demos;

    #[test]
    fn all_sharp_stays_all_sharp() {
        let ca = demos::identity_ca();
        let cfg = WordConfig { cells: vec![] };
        let next = ca_step(&ca, &cfg);
        assert!(next.cells.is_empty());
    }

    #[test]
    fn run_zero_steps_is_input() {
        let ca = demos::identity_ca();
        let w = vec![1, 3, 0, 2];
        assert_eq!(ca_run(&ca, &w, 0).cells, w);
    }

    #[test]
    fn run_composes_over_step_counts() {
        let ca = demos::parity_ca();
        let w = vec![2, 1, 3, 0, 2, 3];
        let direct = ca_run(&ca, &w, 5);
        let split = {
            let mid = ca_run(&ca, &w, 2);
            let mut cfg = mid;
            for _ in 0..3 {
                cfg = ca_step(&ca, &cfg);
            }
            cfg
        };
        assert_eq!(direct, split);
    }

    #[test]
    fn identity_one_step_matches_hand_tabulation() {
        let ca = demos::identity_ca();
        // Each input digit freezes to the output state of its X₁ bit.
        let got = ca_run(&ca, &[0, 1, 2, 3], 1);
        assert_eq!(got.cells, vec![6, 6, 7, 7]);
    }

    #[test]
    fn rejects_rule_creating_sharp() {
        let s = 6;
        let mut delta = vec![0 as State; s * s * s];
        // Center-♯ rows must stay ♯ where the right neighbor is ♯.
        for l in 0..s {
            for rr in 0..s {
                delta[(l * s + 4) * s + rr] = 4;
            }
        }
        delta[(0 * s + 1) * s + 2] = 4; // active cell becomes ♯
        let err = CellularAutomaton::new(6, delta, vec![5], vec![0, 0, 0, 0, 0, 1], 1, 1);
        assert!(matches!(err, Err(CaError::InvalidAutomaton(_))));
    }

    #[test]
    fn json_roundtrip_preserves_rules() {
        let ca = demos::complement_ca();
        let text = ca.to_json().unwrap();
        let back = CellularAutomaton::from_json(&text).unwrap();
        assert_eq!(back.delta, ca.delta);
        assert_eq!(back.q_out, ca.q_out);
        assert_eq!(back.c, ca.c);
    }

    #[test]
    fn compose_of_identities_is_identity_on_samples() {
        let id = demos::identity_ca();
        // Output bit b re-enters the second automaton as the input digit 2b,
        // which carries b on the operand track.
        let mut pi1 = vec![0 as State; id.s as usize];
        pi1[6] = 0;
        pi1[7] = 2;
        let comp = compose(&id, &pi1, &id).unwrap();
        for w in [vec![0, 1, 2, 3], vec![3], vec![2, 2, 0, 1, 3, 0]] {
            let direct = ca_run(&id, &w, id.c as u64 * w.len() as u64);
            let composed = ca_run(&comp, &w, comp.c as u64 * w.len() as u64);
            let bits_direct: Vec<u8> = direct.cells.iter().map(|&q| id.pi[q as usize]).collect();
            let bits_composed: Vec<u8> = composed
                .cells
                .iter()
                .map(|&q| comp.pi[q as usize])
                .collect();
            assert_eq!(bits_direct, bits_composed);
        }
    }

    #[test]
    fn compose_of_complements_matches_sequential_runs() {
        let not = demos::complement_ca();
        let mut pi1 = vec![0 as State; not.s as usize];
        pi1[6] = 0;
        pi1[7] = 2;
        let comp = compose(&not, &pi1, &not).unwrap();
        for w in [vec![0, 1, 2, 3], vec![2, 3, 2], vec![1, 0, 0, 3, 1]] {
            // Sequential: run, project to a fresh input word, run again.
            let t1 = not.c as u64 * w.len() as u64;
            let first = ca_run(&not, &w, t1);
            let reinput: Vec<State> = first
                .cells
                .iter()
                .map(|&q| 2 * not.pi[q as usize] as State)
                .collect();
            let second = ca_run(&not, &reinput, not.c as u64 * reinput.len() as u64);
            let seq: Vec<u8> = second.cells.iter().map(|&q| not.pi[q as usize]).collect();
            let composed = ca_run(&comp, &w, comp.c as u64 * w.len() as u64);
            let got: Vec<u8> = composed
                .cells
                .iter()
                .map(|&q| comp.pi[q as usize])
                .collect();
            assert_eq!(got, seq);
        }
    }

    #[test]
    fn compose_rejects_interface_outside_input_alphabet() {
        let id = demos::identity_ca();
        let mut pi1 = vec![0 as State; id.s as usize];
        pi1[6] = 4; // ♯ is not an input state
        assert!(matches!(
            compose(&id, &pi1, &id),
            Err(CaError::Composition(_))
        ));
    }
}
