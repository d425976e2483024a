// Copyright (c) 2026 ram-workbench contributors
// SPDX-License-Identifier: Apache-2.0

//! Lowering passes between the three instruction sets.
//!
//! Each pass emits the canonical emulation sequences unchanged — they serve
//! as reference output for the faithful-simulation checker, so no peephole
//! cleanup is applied.

use crate::emap::{EmulationMap, RegMapSpec};
use ram_core::{Expr, InstrAB, InstrArray, InstrR, PrimOp, ProgramAB, ProgramArray, ProgramR};

/// Largest per-instruction expansion of the register-to-AB pass (binary op).
pub const K_R_TO_AB: usize = 9;
/// Per-instruction expansion of the AB-to-array pass.
pub const K_AB_TO_ARRAY: usize = 1;

fn max_var_of_expr(e: &Expr) -> usize {
    match e {
        Expr::Lit(_) | Expr::N => 0,
        Expr::Var(j) => *j + 1,
        Expr::Cell(_, a) | Expr::Input(a) => max_var_of_expr(a),
        Expr::Op(_, args) => args.iter().map(max_var_of_expr).max().unwrap_or(0),
    }
}

fn max_arr_of_expr(e: &Expr) -> usize {
    match e {
        Expr::Lit(_) | Expr::N | Expr::Var(_) => 0,
        Expr::Cell(j, a) => (*j + 1).max(max_arr_of_expr(a)),
        Expr::Input(a) => max_arr_of_expr(a),
        Expr::Op(_, args) => args.iter().map(max_arr_of_expr).max().unwrap_or(0),
    }
}

fn var_and_arr_counts(p: &ProgramArray) -> (usize, usize) {
    let mut v = 0;
    let mut t = 0;
    for instr in &p.instructions {
        match instr {
            InstrArray::SetCell { arr, index, value } => {
                t = t.max(*arr + 1);
                v = v.max(max_var_of_expr(index)).max(max_var_of_expr(value));
                t = t.max(max_arr_of_expr(index)).max(max_arr_of_expr(value));
            }
            InstrArray::SetVar { var, value } => {
                v = v.max(*var + 1).max(max_var_of_expr(value));
                t = t.max(max_arr_of_expr(value));
            }
            InstrArray::Jzero { cond, .. } => {
                v = v.max(max_var_of_expr(cond));
                t = t.max(max_arr_of_expr(cond));
            }
            InstrArray::Output(e) => {
                v = v.max(max_var_of_expr(e));
                t = t.max(max_arr_of_expr(e));
            }
        }
    }
    (v, t)
}

/// Flattens nested expressions into fresh variables so that every instruction
/// takes one of the elementary forms (operands are variables or literals).
///
/// Returns the flattened program together with the block map
/// `map[i] = (start, len)` into the flattened instruction list.
pub fn flatten_to_elementary(p: &ProgramArray) -> (ProgramArray, Vec<(usize, usize)>) {
    let (v0, _) = var_and_arr_counts(p);
    // Variable v0 is a dedicated always-zero variable used to express plain
    // variable copies as additions; temporaries start above it and are reused
    // across instructions.
    let zero = v0;
    let mut out: Vec<InstrArray> = Vec::new();
    let mut map = Vec::with_capacity(p.instructions.len());

    struct Flattener {
        next_tmp: usize,
        zero: usize,
    }

    impl Flattener {
        /// Emits instructions computing `e` and returns the variable holding it.
        fn operand(&mut self, e: &Expr, out: &mut Vec<InstrArray>) -> usize {
            if let Expr::Var(j) = e {
                return *j;
            }
            let t = self.next_tmp;
            self.next_tmp += 1;
            self.into_var(t, e, out);
            t
        }

        /// Emits instructions storing the value of `e` into variable `dst`.
        fn into_var(&mut self, dst: usize, e: &Expr, out: &mut Vec<InstrArray>) {
            match e {
                Expr::Lit(j) => out.push(InstrArray::SetVar {
                    var: dst,
                    value: Expr::Lit(*j),
                }),
                Expr::N => out.push(InstrArray::SetVar {
                    var: dst,
                    value: Expr::N,
                }),
                Expr::Var(j) => out.push(InstrArray::SetVar {
                    var: dst,
                    value: Expr::Op(PrimOp::Add, vec![Expr::Var(*j), Expr::Var(self.zero)]),
                }),
                Expr::Cell(arr, idx) => {
                    let vi = self.operand(idx, out);
                    out.push(InstrArray::SetVar {
                        var: dst,
                        value: Expr::Cell(*arr, Box::new(Expr::Var(vi))),
                    });
                }
                Expr::Input(idx) => {
                    let vi = self.operand(idx, out);
                    out.push(InstrArray::SetVar {
                        var: dst,
                        value: Expr::Input(Box::new(Expr::Var(vi))),
                    });
                }
                Expr::Op(op, args) => {
                    let vs: Vec<usize> = args.iter().map(|a| self.operand(a, out)).collect();
                    out.push(InstrArray::SetVar {
                        var: dst,
                        value: Expr::Op(*op, vs.into_iter().map(Expr::Var).collect()),
                    });
                }
            }
        }
    }

    for instr in &p.instructions {
        let start = out.len();
        let mut fl = Flattener {
            next_tmp: v0 + 1,
            zero,
        };
        match instr {
            InstrArray::SetVar { var, value } => fl.into_var(*var, value, &mut out),
            InstrArray::SetCell { arr, index, value } => {
                let vi = fl.operand(index, &mut out);
                let vv = fl.operand(value, &mut out);
                out.push(InstrArray::SetCell {
                    arr: *arr,
                    index: Expr::Var(vi),
                    value: Expr::Var(vv),
                });
            }
            InstrArray::Jzero { cond, l0, l1 } => {
                let vc = fl.operand(cond, &mut out);
                out.push(InstrArray::Jzero {
                    cond: Expr::Var(vc),
                    l0: *l0,
                    l1: *l1,
                });
            }
            InstrArray::Output(e) => {
                let v = fl.operand(e, &mut out);
                out.push(InstrArray::Output(Expr::Var(v)));
            }
        }
        map.push((start, out.len() - start));
    }

    // Remap jump targets from source labels to flattened labels.
    let total = out.len();
    let remap = |l: usize| -> usize {
        if l >= map.len() {
            total
        } else {
            map[l].0
        }
    };
    for instr in &mut out {
        if let InstrArray::Jzero { l0, l1, .. } = instr {
            *l0 = remap(*l0);
            *l1 = remap(*l1);
        }
    }
    (ProgramArray { instructions: out }, map)
}

fn expr_var(e: &Expr) -> usize {
    match e {
        Expr::Var(j) => *j,
        other => panic!("non-elementary operand {other:?}"),
    }
}

/// Lowers a program in elementary form to the register set.
///
/// Layout: registers 0..k are scratch (k = max operator arity + 1), register
/// k+i holds variable C_i, and array cell T_j[i] lives at register k+v+t*i+j.
pub fn lower_elementary_to_r(
    p: &ProgramArray,
    v: usize,
    t: usize,
) -> (ProgramR, Vec<(usize, usize)>) {
    let k = 3; // max arity (2, addition) + 1
    let t = t.max(1);
    let mut out: Vec<InstrR> = Vec::new();
    let mut map = Vec::with_capacity(p.instructions.len());
    for instr in &p.instructions {
        let start = out.len();
        match instr {
            InstrArray::SetVar { var, value } => match value {
                Expr::Lit(j) => out.push(InstrR::Cst(k + var, *j)),
                Expr::N => out.push(InstrR::GetN(k + var)),
                Expr::Input(idx) => out.push(InstrR::Input(k + var, k + expr_var(idx))),
                Expr::Op(op, args) => {
                    for (l, a) in args.iter().enumerate() {
                        out.push(InstrR::Move(l, k + expr_var(a)));
                    }
                    out.push(InstrR::Op(*op));
                    out.push(InstrR::Move(k + var, 0));
                }
                Expr::Cell(arr, idx) => {
                    // R[k+var] <- R[k+v+t*R[k+i]+arr] via t additions.
                    out.push(InstrR::Move(1, k + expr_var(idx)));
                    out.push(InstrR::Cst(0, (k + v + arr) as u64));
                    for _ in 0..t {
                        out.push(InstrR::Op(PrimOp::Add));
                    }
                    out.push(InstrR::Load(k + var, 0));
                }
                Expr::Var(_) => panic!("non-elementary variable copy"),
            },
            InstrArray::SetCell { arr, index, value } => {
                out.push(InstrR::Move(1, k + expr_var(index)));
                out.push(InstrR::Cst(0, (k + v + arr) as u64));
                for _ in 0..t {
                    out.push(InstrR::Op(PrimOp::Add));
                }
                out.push(InstrR::Store(0, k + expr_var(value)));
            }
            InstrArray::Jzero { cond, l0, l1 } => {
                out.push(InstrR::Jzero(k + expr_var(cond), *l0, *l1));
            }
            InstrArray::Output(e) => out.push(InstrR::Output(k + expr_var(e))),
        }
        map.push((start, out.len() - start));
    }
    let total = out.len();
    let remap = |l: usize| -> usize {
        if l >= map.len() {
            total
        } else {
            map[l].0
        }
    };
    for instr in &mut out {
        if let InstrR::Jzero(_, l0, l1) = instr {
            *l0 = remap(*l0);
            *l1 = remap(*l1);
        }
    }
    (ProgramR { instructions: out }, map)
}

/// Lowers an array program to the register set in two passes (flatten to
/// elementary form, then translate per the fixed register layout).
pub fn lower_array_to_r(p: &ProgramArray) -> (ProgramR, EmulationMap) {
    let (live_v, _) = var_and_arr_counts(p);
    let (elem, map1) = flatten_to_elementary(p);
    let (v, t) = var_and_arr_counts(&elem);
    let (r_prog, map2) = lower_elementary_to_r(&elem, v, t.max(1));
    let total = r_prog.instructions.len();
    // Compose the two block maps: source block i covers elementary
    // instructions [s, s+l), which cover R-instructions [map2[s].0, end).
    let instr_map: Vec<(usize, usize)> = map1
        .iter()
        .map(|&(s, l)| {
            let start = if s < map2.len() { map2[s].0 } else { total };
            let end = if s + l < map2.len() {
                map2[s + l].0
            } else {
                total
            };
            (start, end - start)
        })
        .collect();
    let k = instr_map.iter().map(|&(_, l)| l).max().unwrap_or(1);
    (
        r_prog,
        EmulationMap {
            instr_map,
            reg_map: RegMapSpec::ArrayToR {
                k: 3,
                v,
                t: t.max(1),
                live_v,
            },
            k,
        },
    )
}

/// Lowers a register program to the accumulator/buffer set using the
/// canonical per-instruction emulation sequences.
pub fn lower_r_to_ab(p: &ProgramR) -> (ProgramAB, EmulationMap) {
    let mut out: Vec<InstrAB> = Vec::new();
    let mut map = Vec::with_capacity(p.instructions.len());
    for instr in &p.instructions {
        let start = out.len();
        match *instr {
            InstrR::Cst(i, j) => out.extend([
                InstrAB::Cst(j),
                InstrAB::Buffer,
                InstrAB::Cst(i as u64),
                InstrAB::Store,
            ]),
            InstrR::Move(i, j) => out.extend([
                InstrAB::Cst(j as u64),
                InstrAB::Load,
                InstrAB::Buffer,
                InstrAB::Cst(i as u64),
                InstrAB::Store,
            ]),
            InstrR::Store(i, j) => out.extend([
                InstrAB::Cst(j as u64),
                InstrAB::Load,
                InstrAB::Buffer,
                InstrAB::Cst(i as u64),
                InstrAB::Load,
                InstrAB::Store,
            ]),
            InstrR::Load(i, j) => out.extend([
                InstrAB::Cst(j as u64),
                InstrAB::Load,
                InstrAB::Load,
                InstrAB::Buffer,
                InstrAB::Cst(i as u64),
                InstrAB::Store,
            ]),
            InstrR::Jzero(i, l0, l1) => out.extend([
                InstrAB::Cst(i as u64),
                InstrAB::Load,
                InstrAB::Jzero(l0, l1),
            ]),
            InstrR::Op(op) => out.extend([
                InstrAB::Cst(1),
                InstrAB::Load,
                InstrAB::Buffer,
                InstrAB::Cst(0),
                InstrAB::Load,
                InstrAB::Op(op),
                InstrAB::Buffer,
                InstrAB::Cst(0),
                InstrAB::Store,
            ]),
            InstrR::GetN(i) => out.extend([
                InstrAB::GetN,
                InstrAB::Buffer,
                InstrAB::Cst(i as u64),
                InstrAB::Store,
            ]),
            InstrR::Input(i, j) => out.extend([
                InstrAB::Cst(j as u64),
                InstrAB::Load,
                InstrAB::Input,
                InstrAB::Buffer,
                InstrAB::Cst(i as u64),
                InstrAB::Store,
            ]),
            InstrR::Output(i) => {
                out.extend([InstrAB::Cst(i as u64), InstrAB::Load, InstrAB::Output])
            }
        }
        map.push((start, out.len() - start));
    }
    let total = out.len();
    let remap = |l: usize| -> usize {
        if l >= map.len() {
            total
        } else {
            map[l].0
        }
    };
    for instr in &mut out {
        if let InstrAB::Jzero(l0, l1) = instr {
            *l0 = remap(*l0);
            *l1 = remap(*l1);
        }
    }
    (
        ProgramAB { instructions: out },
        EmulationMap {
            instr_map: map,
            reg_map: RegMapSpec::RToAb,
            k: K_R_TO_AB,
        },
    )
}

/// Lowers an accumulator/buffer program to the array set: A and B become the
/// variables C_0 and C_1 and the memory becomes the array T_0,
/// instruction for instruction.
pub fn lower_ab_to_array(p: &ProgramAB) -> (ProgramArray, EmulationMap) {
    let a = 0usize;
    let b = 1usize;
    let out: Vec<InstrArray> = p
        .instructions
        .iter()
        .map(|instr| match *instr {
            InstrAB::Cst(j) => InstrArray::SetVar {
                var: a,
                value: Expr::Lit(j),
            },
            InstrAB::Buffer => InstrArray::SetVar {
                var: b,
                value: Expr::Var(a),
            },
            InstrAB::Store => InstrArray::SetCell {
                arr: 0,
                index: Expr::Var(a),
                value: Expr::Var(b),
            },
            InstrAB::Load => InstrArray::SetVar {
                var: a,
                value: Expr::Cell(0, Box::new(Expr::Var(a))),
            },
            InstrAB::Jzero(l0, l1) => InstrArray::Jzero {
                cond: Expr::Var(a),
                l0,
                l1,
            },
            InstrAB::Op(op) => InstrArray::SetVar {
                var: a,
                value: Expr::Op(op, vec![Expr::Var(a), Expr::Var(b)]),
            },
            InstrAB::GetN => InstrArray::SetVar {
                var: a,
                value: Expr::N,
            },
            InstrAB::Input => InstrArray::SetVar {
                var: a,
                value: Expr::Input(Box::new(Expr::Var(a))),
            },
            InstrAB::Output => InstrArray::Output(Expr::Var(a)),
        })
        .collect();
    let instr_map = (0..out.len()).map(|i| (i, 1)).collect();
    (
        ProgramArray { instructions: out },
        EmulationMap {
            instr_map,
            reg_map: RegMapSpec::AbToArray,
            k: K_AB_TO_ARRAY,
        },
    )
}
