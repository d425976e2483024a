// Copyright (c) 2026 ram-workbench contributors
// SPDX-License-Identifier: Apache-2.0

//! Lockstep verification that a lowered program faithfully simulates its
//! source: identical outputs, bounded step expansion, and register
//! correspondence at every source-instruction boundary.
//!
//! Comparisons happen only at source-instruction boundaries because
//! intermediate target states inside an emulation block have no source
//! counterpart.

use crate::emap::{EmulationMap, RegMapSpec};
use ram_core::{
    step_ab, step_array, step_r, ConfigAB, ConfigArray, ConfigR, Limits, ProgramAB, ProgramArray,
    ProgramR, RamInput, StepMeter, Word,
};
use serde::{Deserialize, Serialize};

/// A program in any of the three instruction sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum AnyProgram {
    Ab(ProgramAB),
    R(ProgramR),
    Array(ProgramArray),
}

impl AnyProgram {
    pub fn len(&self) -> usize {
        match self {
            AnyProgram::Ab(p) => p.instructions.len(),
            AnyProgram::R(p) => p.instructions.len(),
            AnyProgram::Array(p) => p.instructions.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A configuration for any of the three instruction sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyConfig {
    Ab(ConfigAB),
    R(ConfigR),
    Array(ConfigArray),
}

impl AnyConfig {
    fn fresh(program: &AnyProgram) -> Self {
        match program {
            AnyProgram::Ab(_) => AnyConfig::Ab(ConfigAB::default()),
            AnyProgram::R(_) => AnyConfig::R(ConfigR::default()),
            AnyProgram::Array(_) => AnyConfig::Array(ConfigArray::default()),
        }
    }

    pub fn pc(&self) -> usize {
        match self {
            AnyConfig::Ab(c) => c.pc,
            AnyConfig::R(c) => c.pc,
            AnyConfig::Array(c) => c.pc,
        }
    }
}

fn step_any(
    config: &mut AnyConfig,
    program: &AnyProgram,
    input: &RamInput,
    meter: &mut StepMeter,
    limits: Limits,
) -> Result<Option<Word>, String> {
    let result = match (config, program) {
        (AnyConfig::Ab(c), AnyProgram::Ab(p)) => step_ab(c, p, input, meter, limits),
        (AnyConfig::R(c), AnyProgram::R(p)) => step_r(c, p, input, meter, limits),
        (AnyConfig::Array(c), AnyProgram::Array(p)) => step_array(c, p, input, meter, limits),
        _ => return Err("configuration does not match program kind".into()),
    };
    result.map_err(|e| e.to_string())
}

/// Checks the register correspondence demanded by `spec` between a source and
/// a target configuration; returns a description of the first mismatch.
fn regs_correspond(src: &AnyConfig, dst: &AnyConfig, spec: RegMapSpec) -> Result<(), String> {
    match (spec, src, dst) {
        (RegMapSpec::Identity, a, b) => {
            if a == b {
                Ok(())
            } else {
                Err("identity map: configurations differ".into())
            }
        }
        (RegMapSpec::ArrayToR { k, v, t, live_v }, AnyConfig::Array(s), AnyConfig::R(d)) => {
            for i in 0..live_v {
                let want = s.var(i);
                let got = d.reg((k + i) as Word);
                if want != got {
                    return Err(format!("variable C_{i}: source {want}, target {got}"));
                }
            }
            for (&(arr, idx), &want) in &s.arrays {
                let addr = (k + v) as Word + t as Word * idx + arr as Word;
                let got = d.reg(addr);
                if want != got {
                    return Err(format!("cell T_{arr}[{idx}]: source {want}, target {got}"));
                }
            }
            for (&addr, &got) in &d.memory {
                if addr >= (k + v) as Word && got != 0 {
                    let off = addr - (k + v) as Word;
                    let idx = off / t as Word;
                    let arr = (off % t as Word) as usize;
                    let want = s.cell(arr, idx);
                    if want != got {
                        return Err(format!(
                            "target R[{addr}] = {got} but source T_{arr}[{idx}] = {want}"
                        ));
                    }
                }
            }
            Ok(())
        }
        (RegMapSpec::RToAb, AnyConfig::R(s), AnyConfig::Ab(d)) => {
            for (&i, &want) in &s.memory {
                let got = d.memory.get(&i).copied().unwrap_or(0);
                if want != got {
                    return Err(format!("register R[{i}]: source {want}, target {got}"));
                }
            }
            for (&i, &got) in &d.memory {
                let want = s.reg(i);
                if want != got {
                    return Err(format!("target memory[{i}] = {got} but source R[{i}] = {want}"));
                }
            }
            Ok(())
        }
        (RegMapSpec::AbToArray, AnyConfig::Ab(s), AnyConfig::Array(d)) => {
            if s.a != d.var(0) {
                return Err(format!("A: source {}, target C_0 = {}", s.a, d.var(0)));
            }
            if s.b != d.var(1) {
                return Err(format!("B: source {}, target C_1 = {}", s.b, d.var(1)));
            }
            for (&addr, &want) in &s.memory {
                let got = d.cell(0, addr);
                if want != got {
                    return Err(format!("memory[{addr}]: source {want}, target {got}"));
                }
            }
            for (&(arr, idx), &got) in &d.arrays {
                if arr != 0 {
                    return Err(format!("unexpected target array T_{arr}"));
                }
                let want = s.memory.get(&idx).copied().unwrap_or(0);
                if want != got {
                    return Err(format!("target T_0[{idx}] = {got} but source memory = {want}"));
                }
            }
            Ok(())
        }
        _ => Err("register map does not fit the given machine kinds".into()),
    }
}

/// Result of a faithfulness check over a sample set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Verdict {
    Ok {
        checked_inputs: usize,
        max_expansion_observed: usize,
    },
    Counterexample {
        input_index: usize,
        source_step: u64,
        detail: String,
    },
}

impl Verdict {
    pub fn is_ok(&self) -> bool {
        matches!(self, Verdict::Ok { .. })
    }
}

/// Builds the identity emulation map for a program (used for reflexivity
/// checks and as a baseline in tests).
pub fn identity_emap(program_len: usize) -> EmulationMap {
    EmulationMap {
        instr_map: (0..program_len).map(|i| (i, 1)).collect(),
        reg_map: RegMapSpec::Identity,
        k: 1,
    }
}

/// Runs source and target in lockstep on every sample input and verifies the
/// three faithfulness conditions: output equality, steps(target) ≤ k ·
/// steps(source), and register correspondence at source boundaries.
pub fn check_faithful(
    src: &AnyProgram,
    dst: &AnyProgram,
    emap: &EmulationMap,
    inputs: &[RamInput],
    src_limits: Limits,
    dst_limits: Limits,
) -> Verdict {
    let mut max_expansion = 0usize;
    for (input_index, input) in inputs.iter().enumerate() {
        let mut src_cfg = AnyConfig::fresh(src);
        let mut dst_cfg = AnyConfig::fresh(dst);
        let mut src_meter = StepMeter::new();
        let mut dst_meter = StepMeter::new();
        let mut src_out: Vec<Word> = Vec::new();
        let mut dst_out: Vec<Word> = Vec::new();
        let fail = |step: u64, detail: String| Verdict::Counterexample {
            input_index,
            source_step: step,
            detail,
        };
        let resync_bound = emap.k.max(emap.max_expansion()).max(1);
        loop {
            // Checkpoint: target must sit at the start of the block emulating
            // the source's next instruction (or at the halt label).
            let expected = emap.target_of(src_cfg.pc(), dst.len());
            if dst_cfg.pc() != expected {
                return fail(
                    src_meter.steps,
                    format!(
                        "target pc {} but block for source pc {} starts at {expected}",
                        dst_cfg.pc(),
                        src_cfg.pc()
                    ),
                );
            }
            if let Err(detail) = regs_correspond(&src_cfg, &dst_cfg, emap.reg_map) {
                return fail(src_meter.steps, detail);
            }
            if src_out != dst_out {
                return fail(
                    src_meter.steps,
                    format!("outputs diverge: source {src_out:?}, target {dst_out:?}"),
                );
            }
            if src_cfg.pc() >= src.len() {
                break;
            }
            match step_any(&mut src_cfg, src, input, &mut src_meter, src_limits) {
                Ok(Some(v)) => src_out.push(v),
                Ok(None) => {}
                Err(e) => return fail(src_meter.steps, format!("source error: {e}")),
            }
            let target = emap.target_of(src_cfg.pc(), dst.len());
            let mut advanced = 0usize;
            loop {
                match step_any(&mut dst_cfg, dst, input, &mut dst_meter, dst_limits) {
                    Ok(Some(v)) => dst_out.push(v),
                    Ok(None) => {}
                    Err(e) => return fail(src_meter.steps, format!("target error: {e}")),
                }
                advanced += 1;
                if dst_cfg.pc() == target {
                    break;
                }
                if advanced >= resync_bound {
                    return fail(
                        src_meter.steps,
                        format!(
                            "target failed to reach pc {target} within {resync_bound} steps"
                        ),
                    );
                }
            }
            max_expansion = max_expansion.max(advanced);
            if src_meter.steps > src_limits.max_steps {
                return fail(src_meter.steps, "source step budget exceeded".into());
            }
        }
        if dst_meter.steps > emap.k as u64 * src_meter.steps {
            return fail(
                src_meter.steps,
                format!(
                    "step bound violated: target {} > k {} * source {}",
                    dst_meter.steps, emap.k, src_meter.steps
                ),
            );
        }
    }
    Verdict::Ok {
        checked_inputs: inputs.len(),
        max_expansion_observed: max_expansion,
    }
}
