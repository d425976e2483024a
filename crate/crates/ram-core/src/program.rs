// Copyright (c) 2026 ram-workbench contributors
// SPDX-License-Identifier: Apache-2.0

use crate::error::{RamError, RamResult};
use crate::Word;
use serde::{Deserialize, Serialize};

/// A primitive operation drawn from the machine's operation set.
///
/// Addition is the only primitive every machine must provide; all richer
/// arithmetic is built on top of it elsewhere in the workspace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PrimOp {
    Add,
}

impl PrimOp {
    pub fn arity(self) -> usize {
        match self {
            PrimOp::Add => 2,
        }
    }

    pub fn mnemonic(self) -> &'static str {
        match self {
            PrimOp::Add => "add",
        }
    }

    pub fn from_mnemonic(s: &str) -> Option<Self> {
        match s {
            "add" => Some(PrimOp::Add),
            _ => None,
        }
    }

    /// Applies the operation to its arguments (arity-checked by the caller).
    pub fn apply(self, args: &[Word]) -> Word {
        match self {
            PrimOp::Add => args[0] + args[1],
        }
    }
}

/// Accumulator/buffer instruction set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InstrAB {
    /// A <- j
    Cst(Word),
    /// B <- A
    Buffer,
    /// R[A] <- B
    Store,
    /// A <- R[A]
    Load,
    /// pc <- l0 if A = 0 else l1
    Jzero(usize, usize),
    /// A <- op(A, B)
    Op(PrimOp),
    /// A <- N
    GetN,
    /// A <- I[A]
    Input,
    /// emit A
    Output,
}

/// Register-addressed instruction set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InstrR {
    /// R[i] <- j
    Cst(usize, Word),
    /// R[i] <- R[j]
    Move(usize, usize),
    /// R[R[i]] <- R[j]
    Store(usize, usize),
    /// R[i] <- R[R[j]]
    Load(usize, usize),
    /// pc <- l0 if R[i] = 0 else l1
    Jzero(usize, usize, usize),
    /// R[0] <- op(R[0], ..., R[k-1])
    Op(PrimOp),
    /// R[i] <- N
    GetN(usize),
    /// R[i] <- I[R[j]]
    Input(usize, usize),
    /// emit R[i]
    Output(usize),
}

/// A fully parenthesized operation expression over variables, arrays and input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Expr {
    Lit(Word),
    N,
    /// C_j
    Var(usize),
    /// T_j[alpha]
    Cell(usize, Box<Expr>),
    /// I[alpha]
    Input(Box<Expr>),
    Op(PrimOp, Vec<Expr>),
}

impl Expr {
    /// Number of nodes in the expression tree.
    pub fn size(&self) -> usize {
        match self {
            Expr::Lit(_) | Expr::N | Expr::Var(_) => 1,
            Expr::Cell(_, a) | Expr::Input(a) => 1 + a.size(),
            Expr::Op(_, args) => 1 + args.iter().map(Expr::size).sum::<usize>(),
        }
    }
}

/// Array-addressed instruction set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum InstrArray {
    /// T_j[alpha] <- beta
    SetCell { arr: usize, index: Expr, value: Expr },
    /// C_j <- alpha
    SetVar { var: usize, value: Expr },
    /// pc <- l0 if alpha = 0 else l1
    Jzero { cond: Expr, l0: usize, l1: usize },
    /// emit alpha
    Output(Expr),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProgramAB {
    pub instructions: Vec<InstrAB>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProgramR {
    pub instructions: Vec<InstrR>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProgramArray {
    pub instructions: Vec<InstrArray>,
}

fn check_target(target: usize, r: usize, line: usize) -> RamResult<()> {
    if target > r {
        return Err(RamError::Parse {
            line,
            msg: format!("jump target {target} exceeds program length {r}"),
        });
    }
    Ok(())
}

impl ProgramAB {
    /// Validates that every jump target lies in 0..=r (r halts).
    pub fn validate(&self) -> RamResult<()> {
        let r = self.instructions.len();
        for (i, instr) in self.instructions.iter().enumerate() {
            if let InstrAB::Jzero(l0, l1) = instr {
                check_target(*l0, r, i + 1)?;
                check_target(*l1, r, i + 1)?;
            }
        }
        Ok(())
    }
}

impl ProgramR {
    pub fn validate(&self) -> RamResult<()> {
        let r = self.instructions.len();
        for (i, instr) in self.instructions.iter().enumerate() {
            if let InstrR::Jzero(_, l0, l1) = instr {
                check_target(*l0, r, i + 1)?;
                check_target(*l1, r, i + 1)?;
            }
        }
        Ok(())
    }
}

impl ProgramArray {
    pub fn validate(&self) -> RamResult<()> {
        let r = self.instructions.len();
        for (i, instr) in self.instructions.iter().enumerate() {
            if let InstrArray::Jzero { l0, l1, .. } = instr {
                check_target(*l0, r, i + 1)?;
                check_target(*l1, r, i + 1)?;
            }
        }
        Ok(())
    }
}
