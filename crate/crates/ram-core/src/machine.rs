// Copyright (c) 2026 ram-workbench contributors
// SPDX-License-Identifier: Apache-2.0

//! Interpreters for the three instruction sets under the unit-cost measure.
//!
//! Every executed instruction advances the step meter by exactly one, so a
//! run's step count equals the number of configurations traversed minus one.
//! All registers start at zero and every write is checked against the value
//! bound c·N.

use crate::error::{RamError, RamResult};
use crate::input::RamInput;
use crate::program::{Expr, InstrAB, InstrArray, InstrR, ProgramAB, ProgramArray, ProgramR};
use crate::Word;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// Unit-cost step counter: one increment per executed instruction.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepMeter {
    pub steps: u64,
}

impl StepMeter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn tick(&mut self) {
        self.steps += 1;
    }
}

/// Per-run execution limits: the value bound constant c and a step budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    pub c: Word,
    pub max_steps: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            c: 8,
            max_steps: 1_000_000_000,
        }
    }
}

/// Accumulator/buffer configuration (A, B, pc, memory).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigAB {
    pub a: Word,
    pub b: Word,
    pub pc: usize,
    pub memory: HashMap<Word, Word>,
}

/// Register-addressed configuration (pc, registers).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigR {
    pub pc: usize,
    pub memory: HashMap<Word, Word>,
}

impl ConfigR {
    pub fn reg(&self, i: Word) -> Word {
        self.memory.get(&i).copied().unwrap_or(0)
    }
}

/// Array-addressed configuration (pc, integer variables, arrays).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConfigArray {
    pub pc: usize,
    pub vars: HashMap<usize, Word>,
    pub arrays: HashMap<(usize, Word), Word>,
}

impl ConfigArray {
    pub fn var(&self, j: usize) -> Word {
        self.vars.get(&j).copied().unwrap_or(0)
    }

    pub fn cell(&self, arr: usize, index: Word) -> Word {
        self.arrays.get(&(arr, index)).copied().unwrap_or(0)
    }
}

/// Outcome of a complete run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunResult<C> {
    pub outputs: Vec<Word>,
    pub steps: u64,
    pub halted: bool,
    pub final_config: C,
}

/// The JSON-facing view of a run (outputs, steps, halted).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunSummary {
    pub outputs: Vec<Word>,
    pub steps: u64,
    pub halted: bool,
}

impl<C> RunResult<C> {
    pub fn summary(&self) -> RunSummary {
        RunSummary {
            outputs: self.outputs.clone(),
            steps: self.steps,
            halted: self.halted,
        }
    }
}

fn check_bound(value: Word, bound: Word, pc: usize) -> RamResult<Word> {
    if value > bound {
        Err(RamError::ValueBoundExceeded { value, bound, pc })
    } else {
        Ok(value)
    }
}

/// Executes one accumulator/buffer instruction, returning any emitted output.
pub fn step_ab(
    config: &mut ConfigAB,
    program: &ProgramAB,
    input: &RamInput,
    meter: &mut StepMeter,
    limits: Limits,
) -> RamResult<Option<Word>> {
    let r = program.instructions.len();
    if config.pc >= r {
        return Err(RamError::HaltReached);
    }
    let bound = limits.c * input.n;
    let pc = config.pc;
    let mut out = None;
    let mut next = pc + 1;
    match program.instructions[pc] {
        InstrAB::Cst(j) => config.a = check_bound(j, bound, pc)?,
        InstrAB::Buffer => config.b = config.a,
        InstrAB::Store => {
            config.memory.insert(config.a, config.b);
        }
        InstrAB::Load => config.a = config.memory.get(&config.a).copied().unwrap_or(0),
        InstrAB::Jzero(l0, l1) => next = if config.a == 0 { l0 } else { l1 },
        InstrAB::Op(op) => config.a = check_bound(op.apply(&[config.a, config.b]), bound, pc)?,
        InstrAB::GetN => config.a = input.n,
        InstrAB::Input => config.a = input.read(config.a, pc)?,
        InstrAB::Output => out = Some(config.a),
    }
    config.pc = next;
    meter.tick();
    Ok(out)
}

/// Executes one register-addressed instruction, returning any emitted output.
pub fn step_r(
    config: &mut ConfigR,
    program: &ProgramR,
    input: &RamInput,
    meter: &mut StepMeter,
    limits: Limits,
) -> RamResult<Option<Word>> {
    let r = program.instructions.len();
    if config.pc >= r {
        return Err(RamError::HaltReached);
    }
    let bound = limits.c * input.n;
    let pc = config.pc;
    let mut out = None;
    let mut next = pc + 1;
    match program.instructions[pc] {
        InstrR::Cst(i, j) => {
            let v = check_bound(j, bound, pc)?;
            config.memory.insert(i as Word, v);
        }
        InstrR::Move(i, j) => {
            let v = config.reg(j as Word);
            config.memory.insert(i as Word, v);
        }
        InstrR::Store(i, j) => {
            let addr = config.reg(i as Word);
            let v = config.reg(j as Word);
            config.memory.insert(addr, v);
        }
        InstrR::Load(i, j) => {
            let addr = config.reg(j as Word);
            let v = config.memory.get(&addr).copied().unwrap_or(0);
            config.memory.insert(i as Word, v);
        }
        InstrR::Jzero(i, l0, l1) => next = if config.reg(i as Word) == 0 { l0 } else { l1 },
        InstrR::Op(op) => {
            let args: Vec<Word> = (0..op.arity()).map(|i| config.reg(i as Word)).collect();
            let v = check_bound(op.apply(&args), bound, pc)?;
            config.memory.insert(0, v);
        }
        InstrR::GetN(i) => {
            config.memory.insert(i as Word, input.n);
        }
        InstrR::Input(i, j) => {
            let idx = config.reg(j as Word);
            let v = input.read(idx, pc)?;
            config.memory.insert(i as Word, v);
        }
        InstrR::Output(i) => out = Some(config.reg(i as Word)),
    }
    config.pc = next;
    meter.tick();
    Ok(out)
}

fn eval_expr(
    expr: &Expr,
    config: &ConfigArray,
    input: &RamInput,
    bound: Word,
    pc: usize,
) -> RamResult<Word> {
    Ok(match expr {
        Expr::Lit(v) => check_bound(*v, bound, pc)?,
        Expr::N => input.n,
        Expr::Var(j) => config.var(*j),
        Expr::Cell(arr, idx) => {
            let i = eval_expr(idx, config, input, bound, pc)?;
            config.cell(*arr, i)
        }
        Expr::Input(idx) => {
            let i = eval_expr(idx, config, input, bound, pc)?;
            input.read(i, pc)?
        }
        Expr::Op(op, args) => {
            let vals: Vec<Word> = args
                .iter()
                .map(|a| eval_expr(a, config, input, bound, pc))
                .collect::<RamResult<_>>()?;
            check_bound(op.apply(&vals), bound, pc)?
        }
    })
}

/// Executes one array-addressed instruction, returning any emitted output.
pub fn step_array(
    config: &mut ConfigArray,
    program: &ProgramArray,
    input: &RamInput,
    meter: &mut StepMeter,
    limits: Limits,
) -> RamResult<Option<Word>> {
    let r = program.instructions.len();
    if config.pc >= r {
        return Err(RamError::HaltReached);
    }
    let bound = limits.c * input.n;
    let pc = config.pc;
    let mut out = None;
    let mut next = pc + 1;
    match &program.instructions[pc] {
        InstrArray::SetCell { arr, index, value } => {
            let i = eval_expr(index, config, input, bound, pc)?;
            let v = eval_expr(value, config, input, bound, pc)?;
            config.arrays.insert((*arr, i), v);
        }
        InstrArray::SetVar { var, value } => {
            let v = eval_expr(value, config, input, bound, pc)?;
            config.vars.insert(*var, v);
        }
        InstrArray::Jzero { cond, l0, l1 } => {
            let v = eval_expr(cond, config, input, bound, pc)?;
            next = if v == 0 { *l0 } else { *l1 };
        }
        InstrArray::Output(e) => out = Some(eval_expr(e, config, input, bound, pc)?),
    }
    config.pc = next;
    meter.tick();
    Ok(out)
}

macro_rules! run_loop {
    ($program:expr, $input:expr, $limits:expr, $config_ty:ty, $stepper:ident) => {{
        let mut config = <$config_ty>::default();
        let mut meter = StepMeter::new();
        let mut outputs = Vec::new();
        let r = $program.instructions.len();
        while config.pc < r {
            if meter.steps >= $limits.max_steps {
                return Err(RamError::StepBudgetExceeded {
                    max_steps: $limits.max_steps,
                });
            }
            if let Some(v) = $stepper(&mut config, $program, $input, &mut meter, $limits)? {
                outputs.push(v);
            }
        }
        Ok(RunResult {
            outputs,
            steps: meter.steps,
            halted: true,
            final_config: config,
        })
    }};
}

/// Runs an accumulator/buffer program from the all-zero configuration.
pub fn run_ab(
    program: &ProgramAB,
    input: &RamInput,
    limits: Limits,
) -> RamResult<RunResult<ConfigAB>> {
    program.validate()?;
    run_loop!(program, input, limits, ConfigAB, step_ab)
}

/// Runs a register-addressed program from the all-zero configuration.
pub fn run_r(program: &ProgramR, input: &RamInput, limits: Limits) -> RamResult<RunResult<ConfigR>> {
    program.validate()?;
    run_loop!(program, input, limits, ConfigR, step_r)
}

/// Runs an array-addressed program from the all-zero configuration.
pub fn run_array(
    program: &ProgramArray,
    input: &RamInput,
    limits: Limits,
) -> RamResult<RunResult<ConfigArray>> {
    program.validate()?;
    run_loop!(program, input, limits, ConfigArray, step_array)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_ab, parse_array, parse_r};
    use crate::samples;

    fn input(cells: Vec<Word>) -> RamInput {
        RamInput::new(cells, 8).expect("valid input")
    }

    #[test]
    fn empty_program_halts_immediately() {
        let p = parse_ab("").expect("parse");
        let r = run_ab(&p, &input(vec![0]), Limits::default()).expect("run");
        assert_eq!(r.steps, 0);
        assert!(r.outputs.is_empty());
        assert!(r.halted);
    }

    #[test]
    fn sample_ab_program_outputs_second_input_cell() {
        let p = parse_ab(samples::OUTPUT_I1_AB).expect("parse");
        assert_eq!(p.instructions.len(), 28);
        let r = run_ab(&p, &input(vec![2, 1, 0]), Limits::default()).expect("run");
        assert_eq!(r.outputs, vec![1]);
    }

    #[test]
    fn infinite_loop_exhausts_budget() {
        let p = parse_ab("Jzero 0 0\n").expect("parse");
        let limits = Limits {
            max_steps: 1000,
            ..Limits::default()
        };
        assert_eq!(
            run_ab(&p, &input(vec![0]), limits),
            Err(RamError::StepBudgetExceeded { max_steps: 1000 })
        );
    }

    #[test]
    fn value_bound_is_enforced_on_add() {
        // c = 1, N = 1: A = B = 1, add gives 2 > c*N.
        let p = parse_ab("getN\nBuffer\nadd\n").expect("parse");
        let limits = Limits {
            c: 1,
            ..Limits::default()
        };
        let err = run_ab(&p, &input(vec![0]), limits).unwrap_err();
        assert_eq!(
            err,
            RamError::ValueBoundExceeded {
                value: 2,
                bound: 1,
                pc: 2
            }
        );
    }

    #[test]
    fn r_program_computes_a_sum() {
        // R[0] <- I[0]; R[1] <- I[1]; R[0] <- R[0] + R[1]; output.
        let text = "CST 2 0\nInput 0 2\nCST 2 1\nInput 1 2\nadd\nOutput 0\n";
        let p = parse_r(text).expect("parse");
        let r = run_r(&p, &input(vec![3, 4]), Limits::default()).expect("run");
        assert_eq!(r.outputs, vec![7]);
        assert_eq!(r.steps, 6);
    }

    #[test]
    fn array_program_reads_input_and_cells() {
        // C1 <- I[0]; T0[C1] <- (N + 1); output T0[C1].
        let text = "\
C1 <- I[C0]
T0[C1] <- (N + 1)
Output T0[C1]
";
        let p = parse_array(text).expect("parse");
        let r = run_array(&p, &input(vec![5, 9]), Limits::default()).expect("run");
        assert_eq!(r.outputs, vec![3]);
        assert_eq!(r.steps, 3);
        assert_eq!(r.final_config.cell(0, 5), 3);
    }

    #[test]
    fn step_on_halted_configuration_errors() {
        let p = parse_ab("Output\n").expect("parse");
        let inp = input(vec![0]);
        let mut config = ConfigAB::default();
        let mut meter = StepMeter::new();
        step_ab(&mut config, &p, &inp, &mut meter, Limits::default()).expect("first step");
        assert_eq!(
            step_ab(&mut config, &p, &inp, &mut meter, Limits::default()),
            Err(RamError::HaltReached)
        );
    }

    #[test]
    fn determinism_two_runs_identical() {
        let p = parse_ab(samples::OUTPUT_I1_AB).expect("parse");
        let inp = input(vec![7, 3, 5]);
        let r1 = run_ab(&p, &inp, Limits::default()).expect("run 1");
        let r2 = run_ab(&p, &inp, Limits::default()).expect("run 2");
        assert_eq!(r1, r2);
    }
}
