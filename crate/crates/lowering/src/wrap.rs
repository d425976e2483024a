// Copyright (c) 2026 ram-workbench contributors
// SPDX-License-Identifier: Apache-2.0

//! Log-and-undo wrapper turning a constant-time procedure into one that can
//! be called repeatedly: every assignment is journaled (old value,
//! destination, index), the return value is parked in a dedicated variable,
//! and a final replay walks the journal backwards restoring memory exactly.
//!
//! Destinations are numbered so variables get codes at most k and arrays get
//! codes above k, where k+1 is the number of declared variables.

use crate::ir::{Cond, LoweringError, LoweringResult, SExpr, Stmt, StructuredProgram};
use ram_core::Word;

pub const NB_WRITE: &str = "__NbWrite";
pub const RETURN_VALUE: &str = "__ReturnValue";
const Y: &str = "__y";
const I: &str = "__i";
pub const OLD_VAL: &str = "__OldVal";
pub const DEST: &str = "__Dest";
pub const INDEX: &str = "__Index";
const PRED: &str = "__Pred";

fn var(n: &str) -> SExpr {
    SExpr::Var(n.into())
}

fn lit(v: Word) -> SExpr {
    SExpr::Lit(v)
}

fn plus(a: SExpr, b: SExpr) -> SExpr {
    SExpr::Add(Box::new(a), Box::new(b))
}

fn cell(arr: &str, idx: SExpr) -> SExpr {
    SExpr::Cell(arr.into(), Box::new(idx))
}

struct Codes<'a> {
    proc_vars: &'a [String],
    proc_arrays: &'a [String],
}

impl<'a> Codes<'a> {
    fn var_code(&self, name: &str) -> Option<Word> {
        self.proc_vars
            .iter()
            .position(|v| v == name)
            .map(|p| p as Word)
    }

    fn arr_code(&self, name: &str) -> Option<Word> {
        self.proc_arrays
            .iter()
            .position(|a| a == name)
            .map(|p| (self.proc_vars.len() + 1 + p) as Word)
    }
}

fn log_var_save(name: &str, code: Word) -> Vec<Stmt> {
    vec![
        Stmt::AssignCell(OLD_VAL.into(), var(NB_WRITE), var(name)),
        Stmt::AssignCell(DEST.into(), var(NB_WRITE), lit(code)),
    ]
}

fn bump() -> Stmt {
    Stmt::AssignVar(NB_WRITE.into(), plus(var(NB_WRITE), lit(1)))
}

fn transform(body: &[Stmt], codes: &Codes, top_level: bool) -> LoweringResult<Vec<Stmt>> {
    let mut out = Vec::new();
    for (pos, s) in body.iter().enumerate() {
        match s {
            Stmt::AssignVar(name, value) => {
                let code = codes.var_code(name).ok_or_else(|| {
                    LoweringError::UnsupportedConstruct(format!("undeclared variable {name}"))
                })?;
                out.extend(log_var_save(name, code));
                out.push(Stmt::AssignVar(name.clone(), value.clone()));
                out.push(bump());
            }
            Stmt::AssignCell(arr, idx, value) => {
                let code = codes.arr_code(arr).ok_or_else(|| {
                    LoweringError::UnsupportedConstruct(format!("undeclared array {arr}"))
                })?;
                out.push(Stmt::AssignCell(
                    OLD_VAL.into(),
                    var(NB_WRITE),
                    cell(arr, idx.clone()),
                ));
                out.push(Stmt::AssignCell(DEST.into(), var(NB_WRITE), lit(code)));
                out.push(Stmt::AssignCell(INDEX.into(), var(NB_WRITE), idx.clone()));
                out.push(Stmt::AssignCell(arr.clone(), idx.clone(), value.clone()));
                out.push(bump());
            }
            Stmt::If(c, a, b) => out.push(Stmt::If(
                c.clone(),
                transform(a, codes, false)?,
                transform(b, codes, false)?,
            )),
            Stmt::While(c, b) => out.push(Stmt::While(c.clone(), transform(b, codes, false)?)),
            Stmt::ForUp {
                var: v,
                from,
                to,
                body,
            } => {
                // A single journal entry taken before the loop suffices: the
                // reverse replay restores the loop variable last.
                let code = codes.var_code(v).ok_or_else(|| {
                    LoweringError::UnsupportedConstruct(format!("undeclared variable {v}"))
                })?;
                out.extend(log_var_save(v, code));
                out.push(bump());
                out.push(Stmt::ForUp {
                    var: v.clone(),
                    from: from.clone(),
                    to: to.clone(),
                    body: transform(body, codes, false)?,
                });
            }
            Stmt::ForDown {
                var: v,
                from,
                downto,
                body,
            } => {
                let code = codes.var_code(v).ok_or_else(|| {
                    LoweringError::UnsupportedConstruct(format!("undeclared variable {v}"))
                })?;
                out.extend(log_var_save(v, code));
                out.push(bump());
                out.push(Stmt::ForDown {
                    var: v.clone(),
                    from: from.clone(),
                    downto: downto.clone(),
                    body: transform(body, codes, false)?,
                });
            }
            Stmt::Return(e) => {
                if !(top_level && pos == body.len() - 1) {
                    return Err(LoweringError::UnsupportedConstruct(
                        "return must be the final statement of a wrapped procedure".into(),
                    ));
                }
                out.push(Stmt::AssignVar(RETURN_VALUE.into(), e.clone()));
            }
            other => {
                return Err(LoweringError::UnsupportedConstruct(format!(
                    "statement not allowed in a wrapped procedure: {other:?}"
                )))
            }
        }
    }
    Ok(out)
}

/// Wraps a procedure so that a call leaves every declared variable and array
/// exactly as it found them, exposing only the return value (emitted as the
/// program's output).
pub fn wrap_restorable(proc: &StructuredProgram) -> LoweringResult<StructuredProgram> {
    if !proc.funcs.is_empty() {
        return Err(LoweringError::UnsupportedConstruct(
            "wrapped procedures may not define functions".into(),
        ));
    }
    let codes = Codes {
        proc_vars: &proc.vars,
        proc_arrays: &proc.arrays,
    };
    let mut body = Vec::new();
    // Prologue: reset the journal and build the predecessor table up to 8N,
    // the largest value any counter can reach under the default bound.
    let n8 = plus(
        plus(plus(SExpr::N, SExpr::N), plus(SExpr::N, SExpr::N)),
        plus(plus(SExpr::N, SExpr::N), plus(SExpr::N, SExpr::N)),
    );
    body.push(Stmt::AssignVar(NB_WRITE.into(), lit(0)));
    body.push(Stmt::AssignVar(RETURN_VALUE.into(), lit(0)));
    body.push(Stmt::AssignVar(Y.into(), lit(0)));
    body.push(Stmt::While(
        Cond::NotEqual(var(Y), n8),
        vec![
            Stmt::AssignCell(PRED.into(), plus(var(Y), lit(1)), var(Y)),
            Stmt::AssignVar(Y.into(), plus(var(Y), lit(1))),
        ],
    ));
    body.extend(transform(&proc.body, &codes, true)?);
    // Epilogue: replay the journal backwards, dispatching each entry to the
    // destination its code names.
    let mut restore = vec![
        Stmt::AssignVar(NB_WRITE.into(), cell(PRED, var(NB_WRITE))),
        Stmt::AssignVar(I.into(), cell(DEST, var(NB_WRITE))),
    ];
    for name in &proc.vars {
        let code = codes.var_code(name).expect("declared variable");
        restore.push(Stmt::If(
            Cond::Equal(var(I), lit(code)),
            vec![Stmt::AssignVar(name.clone(), cell(OLD_VAL, var(NB_WRITE)))],
            vec![],
        ));
    }
    for name in &proc.arrays {
        let code = codes.arr_code(name).expect("declared array");
        restore.push(Stmt::If(
            Cond::Equal(var(I), lit(code)),
            vec![Stmt::AssignCell(
                name.clone(),
                cell(INDEX, var(NB_WRITE)),
                cell(OLD_VAL, var(NB_WRITE)),
            )],
            vec![],
        ));
    }
    body.push(Stmt::While(Cond::NotEqual(var(NB_WRITE), lit(0)), restore));
    body.push(Stmt::Output(var(RETURN_VALUE)));

    let mut vars = proc.vars.clone();
    vars.extend([NB_WRITE, RETURN_VALUE, Y, I].map(String::from));
    let mut arrays = proc.arrays.clone();
    arrays.extend([OLD_VAL, DEST, INDEX, PRED].map(String::from));
    Ok(StructuredProgram {
        vars,
        arrays,
        funcs: vec![],
        body,
    })
}

/// A program running the wrapped procedure `times` times in sequence.
pub fn repeat_wrapped(wrapped: &StructuredProgram, times: usize) -> StructuredProgram {
    let mut body = Vec::new();
    for _ in 0..times {
        body.extend(wrapped.body.iter().cloned());
    }
    StructuredProgram {
        vars: wrapped.vars.clone(),
        arrays: wrapped.arrays.clone(),
        funcs: vec![],
        body,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::lower_structured;
    use ram_core::{run_array, Limits, RamInput};

    fn run_wrapped(
        sp: &StructuredProgram,
        times: usize,
        cells: Vec<u64>,
    ) -> (Vec<u64>, ram_core::ConfigArray, crate::ir::Layout) {
        let wrapped = wrap_restorable(sp).expect("wrap");
        let repeated = repeat_wrapped(&wrapped, times);
        let lowered = lower_structured(&repeated).expect("lower");
        let input = RamInput::new(cells, 8).expect("input");
        let limits = Limits {
            c: 64,
            ..Limits::default()
        };
        let r = run_array(&lowered.program, &input, limits).expect("run");
        (r.outputs, r.final_config, lowered.layout)
    }

    fn single_write_proc() -> StructuredProgram {
        StructuredProgram {
            vars: vec![],
            arrays: vec!["T".into()],
            funcs: vec![],
            body: vec![
                Stmt::AssignCell("T".into(), SExpr::Lit(5), SExpr::Lit(9)),
                Stmt::Return(SExpr::Cell("T".into(), Box::new(SExpr::Lit(5)))),
            ],
        }
    }

    #[test]
    fn single_write_is_restored_and_returned() {
        let (outputs, cfg, layout) = run_wrapped(&single_write_proc(), 1, vec![0, 0, 0]);
        assert_eq!(outputs, vec![9]);
        let t = layout.arr_indices["T"];
        assert_eq!(cfg.cell(t, 5), 0, "T[5] must be restored to 0");
    }

    #[test]
    fn successive_calls_return_identical_results() {
        let (outputs, _, _) = run_wrapped(&single_write_proc(), 3, vec![0, 0, 0]);
        assert_eq!(outputs, vec![9, 9, 9]);
    }

    #[test]
    fn three_writes_fill_three_log_slots() {
        let proc = StructuredProgram {
            vars: vec!["x".into()],
            arrays: vec!["T".into()],
            funcs: vec![],
            body: vec![
                Stmt::AssignVar("x".into(), SExpr::Lit(4)),
                Stmt::AssignCell("T".into(), SExpr::Lit(1), SExpr::Var("x".into())),
                Stmt::AssignCell("T".into(), SExpr::Lit(2), SExpr::Lit(6)),
                Stmt::Return(SExpr::Var("x".into())),
            ],
        };
        let (outputs, cfg, layout) = run_wrapped(&proc, 1, vec![0, 0, 0]);
        assert_eq!(outputs, vec![4]);
        let x = layout.var_indices["x"];
        let t = layout.arr_indices["T"];
        let dest = layout.arr_indices[DEST];
        assert_eq!(cfg.var(x), 0);
        assert_eq!(cfg.cell(t, 1), 0);
        assert_eq!(cfg.cell(t, 2), 0);
        // Journal slots 0..2 were used; slot 3 was never touched.
        assert!(cfg.arrays.contains_key(&(dest, 2)));
        assert!(!cfg.arrays.contains_key(&(dest, 3)));
    }
}
