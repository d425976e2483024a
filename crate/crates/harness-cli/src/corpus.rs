// Copyright (c) 2026 ram-workbench contributors
// SPDX-License-Identifier: Apache-2.0

//! Randomized structured-program corpus for exercising the lowering
//! pipeline end to end.
//!
//! Generated programs always terminate (loops are literal-bounded `for`s,
//! no `while`), read input cells only at indices below 8 (inputs are
//! generated with at least 8 cells), and keep values small so runs fit any
//! generous value bound.

use lowering::{
    lower_array_to_r, lower_r_to_ab, lower_structured, Cond, EmulationMap, SExpr, Stmt,
    StructuredProgram,
};
use ram_core::{ProgramAB, ProgramArray, ProgramR, RamInput, Word};
use rand::Rng;

use crate::{HarnessError, HarnessResult};

const VARS: [&str; 3] = ["x", "y", "z"];
/// Loop counters, one per nesting depth. They are never assignment targets,
/// so every `for` loop provably runs exactly its literal trip count.
const LOOP_VARS: [&str; 3] = ["i0", "i1", "i2"];
const ARRAY: &str = "T";
/// Input cells are read at indices below this; inputs must be at least
/// this long.
pub const MIN_INPUT_CELLS: usize = 8;

fn lit(rng: &mut impl Rng) -> SExpr {
    SExpr::Lit(rng.gen_range(0..4))
}

fn var(rng: &mut impl Rng) -> SExpr {
    SExpr::Var(VARS[rng.gen_range(0..VARS.len())].to_string())
}

fn expr(rng: &mut impl Rng, depth: u32) -> SExpr {
    match rng.gen_range(0..if depth == 0 { 5 } else { 7 }) {
        0 => lit(rng),
        1 | 2 => var(rng),
        3 => SExpr::Input(Box::new(SExpr::Lit(rng.gen_range(0..MIN_INPUT_CELLS as Word)))),
        4 => SExpr::Cell(ARRAY.into(), Box::new(lit(rng))),
        _ => SExpr::Add(
            Box::new(expr(rng, depth - 1)),
            Box::new(expr(rng, depth - 1)),
        ),
    }
}

fn cond(rng: &mut impl Rng) -> Cond {
    let a = expr(rng, 1);
    let b = expr(rng, 1);
    if rng.gen_bool(0.5) {
        Cond::Equal(a, b)
    } else {
        Cond::NotEqual(a, b)
    }
}

fn stmts(rng: &mut impl Rng, depth: u32, len: usize) -> Vec<Stmt> {
    (0..len)
        .map(|_| match rng.gen_range(0..if depth == 0 { 4 } else { 6 }) {
            0 | 1 => Stmt::AssignVar(
                VARS[rng.gen_range(0..VARS.len())].to_string(),
                expr(rng, 2),
            ),
            2 => Stmt::AssignCell(ARRAY.into(), lit(rng), expr(rng, 2)),
            3 => Stmt::Output(expr(rng, 2)),
            4 => {
                let (then_len, else_len) = (rng.gen_range(1..3), rng.gen_range(0..2));
                Stmt::If(
                    cond(rng),
                    stmts(rng, depth - 1, then_len),
                    stmts(rng, depth - 1, else_len),
                )
            }
            _ => {
                let body_len = rng.gen_range(1..3);
                Stmt::ForUp {
                    var: LOOP_VARS[depth as usize].to_string(),
                    from: SExpr::Lit(0),
                    to: SExpr::Lit(rng.gen_range(1..5)),
                    body: stmts(rng, depth - 1, body_len),
                }
            }
        })
        .collect()
}

/// One random structured program: bounded loops, conditionals, array
/// writes, and at least one output.
pub fn random_program(rng: &mut impl Rng) -> StructuredProgram {
    let len = rng.gen_range(3..8);
    let mut body = stmts(rng, 2, len);
    body.push(Stmt::Output(expr(rng, 2)));
    StructuredProgram {
        vars: VARS
            .iter()
            .chain(LOOP_VARS.iter())
            .map(|s| s.to_string())
            .collect(),
        arrays: vec![ARRAY.into()],
        funcs: vec![],
        body,
    }
}

/// A random input word list of `n` ≥ [`MIN_INPUT_CELLS`] small cells.
pub fn random_input(rng: &mut impl Rng, n: usize) -> RamInput {
    let n = n.max(MIN_INPUT_CELLS);
    let cells: Vec<Word> = (0..n).map(|_| rng.gen_range(0..8)).collect();
    RamInput::new(cells, 8).expect("small cells are in bound")
}

/// The fully lowered pipeline of one structured program.
pub struct Pipeline {
    pub array: ProgramArray,
    pub r: ProgramR,
    pub ab: ProgramAB,
    pub emap_array_to_r: EmulationMap,
    pub emap_r_to_ab: EmulationMap,
}

/// Compiles the structured program and lowers it through every instruction
/// set.
pub fn pipeline(sp: &StructuredProgram) -> HarnessResult<Pipeline> {
    let compiled = lower_structured(sp)
        .map_err(|e| HarnessError::Input(format!("structured lowering failed: {e}")))?;
    let (r, emap_array_to_r) = lower_array_to_r(&compiled.program);
    let (ab, emap_r_to_ab) = lower_r_to_ab(&r);
    Ok(Pipeline {
        array: compiled.program,
        r,
        ab,
        emap_array_to_r,
        emap_r_to_ab,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ram_core::{run_ab, run_array, run_r, Limits};
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    fn wide() -> Limits {
        Limits {
            c: 1 << 30,
            max_steps: 50_000_000,
        }
    }

    #[test]
    fn corpus_programs_terminate_and_agree_across_sets() {
        let mut rng = StdRng::seed_from_u64(0xc0de);
        for _ in 0..10 {
            let sp = random_program(&mut rng);
            let p = pipeline(&sp).unwrap();
            for _ in 0..3 {
                let input = random_input(&mut rng, 8);
                let a = run_array(&p.array, &input, wide()).unwrap();
                let r = run_r(&p.r, &input, wide()).unwrap();
                let ab = run_ab(&p.ab, &input, wide()).unwrap();
                assert!(a.halted && r.halted && ab.halted);
                assert_eq!(a.outputs, r.outputs);
                assert_eq!(a.outputs, ab.outputs);
                assert!(!a.outputs.is_empty());
            }
        }
    }
}
