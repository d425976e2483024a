// Copyright (c) 2026 ram-workbench contributors
// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

/// How source registers correspond to target registers for a lowering pass.
///
/// The correspondence is a function, not a finite list, because array cells
/// map to unboundedly many registers; each variant carries the layout
/// constants needed to evaluate it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegMapSpec {
    /// Same machine, same registers.
    Identity,
    /// Array set to register set: k scratch registers, then v variable slots
    /// (C_i at R[k+i]), then arrays interleaved (T_j[i] at R[k+v+t*i+j]).
    /// Only the first `live_v` variables belong to the source program; slots
    /// `live_v..v` are scratch temporaries introduced by expression
    /// flattening and carry no source counterpart.
    ArrayToR {
        k: usize,
        v: usize,
        t: usize,
        live_v: usize,
    },
    /// Register set to accumulator/buffer set: R[i] lives at memory address i
    /// of the AB machine; A and B are scratch.
    RToAb,
    /// Accumulator/buffer set to array set: A is C_0, B is C_1, memory is T_0.
    AbToArray,
}

/// The instruction and register maps of an emulation, plus its expansion
/// constant k: every source instruction maps to at most k target instructions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmulationMap {
    /// `instr_map[i] = (start, len)`: source instruction i is emulated by the
    /// target instructions `start..start+len`.
    pub instr_map: Vec<(usize, usize)>,
    pub reg_map: RegMapSpec,
    pub k: usize,
}

impl EmulationMap {
    /// Target index corresponding to a source jump target (source r maps to
    /// target r, the halting label).
    pub fn target_of(&self, source_label: usize, target_len: usize) -> usize {
        if source_label >= self.instr_map.len() {
            target_len
        } else {
            self.instr_map[source_label].0
        }
    }

    /// The largest per-instruction expansion actually present in the map.
    pub fn max_expansion(&self) -> usize {
        self.instr_map.iter().map(|&(_, len)| len).max().unwrap_or(0)
    }
}
