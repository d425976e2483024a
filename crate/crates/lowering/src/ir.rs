// Copyright (c) 2026 ram-workbench contributors
// SPDX-License-Identifier: Apache-2.0

//! A small structured language compiled to the array instruction set.
//!
//! The language offers assignments, equality-based conditionals (compiled
//! through the Eq-array trick), while/for loops, dynamic array allocation
//! over a DATA arena, and functions de-functionalized through an explicit
//! stack array S with a frame pointer F. Everything reduces to labels plus
//! conditional jumps and ultimately to plain array instructions.

use ram_core::{Expr, InstrArray, PrimOp, ProgramArray, Word};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LoweringError {
    #[error("unsupported construct: {0}")]
    UnsupportedConstruct(String),
}

pub type LoweringResult<T> = Result<T, LoweringError>;

/// Expressions of the structured language.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum SExpr {
    Lit(Word),
    N,
    Var(String),
    /// Named static array cell.
    Cell(String, Box<SExpr>),
    /// Cell of a dynamically allocated array: DATA[pointer + index].
    DynCell(Box<SExpr>, Box<SExpr>),
    Input(Box<SExpr>),
    Add(Box<SExpr>, Box<SExpr>),
}

/// Boolean conditions over equality, closed under negation and connectives.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Cond {
    Equal(SExpr, SExpr),
    NotEqual(SExpr, SExpr),
    Not(Box<Cond>),
    And(Box<Cond>, Box<Cond>),
    Or(Box<Cond>, Box<Cond>),
}

/// Statements of the structured language.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Stmt {
    AssignVar(String, SExpr),
    AssignCell(String, SExpr, SExpr),
    /// DATA[pointer + index] <- value.
    AssignDynCell(SExpr, SExpr, SExpr),
    If(Cond, Vec<Stmt>, Vec<Stmt>),
    While(Cond, Vec<Stmt>),
    /// Iterates var from `from` up to `to` inclusive; empty when from > to.
    ForUp {
        var: String,
        from: SExpr,
        to: SExpr,
        body: Vec<Stmt>,
    },
    /// Iterates var from `from` down to `downto` inclusive; empty when
    /// from < downto.
    ForDown {
        var: String,
        from: SExpr,
        downto: SExpr,
        body: Vec<Stmt>,
    },
    /// Allocates `size` cells in the DATA arena; `var` receives the pointer.
    Alloc { var: String, size: SExpr },
    Call {
        func: String,
        args: Vec<SExpr>,
        result: Option<String>,
    },
    Return(SExpr),
    Output(SExpr),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuncDef {
    pub name: String,
    pub params: Vec<String>,
    pub locals: Vec<String>,
    pub body: Vec<Stmt>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructuredProgram {
    pub vars: Vec<String>,
    pub arrays: Vec<String>,
    pub funcs: Vec<FuncDef>,
    pub body: Vec<Stmt>,
}

/// Where each declared variable and array landed in the compiled program.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layout {
    pub var_indices: HashMap<String, usize>,
    pub arr_indices: HashMap<String, usize>,
}

/// A compiled structured program plus its memory layout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoweredStructured {
    pub program: ProgramArray,
    pub layout: Layout,
}

// Frame layout on the stack array S: S[F] holds the call-site id, S[F+1] the
// caller's frame pointer, S[F+2] the frame size, S[F+3] the return value,
// and S[F+4..] the parameters followed by the locals.
const FRAME_HEADER: usize = 4;

struct FuncMeta {
    entry: usize,
    epilogue: usize,
    params: Vec<String>,
    frame_size: usize,
}

struct FuncScope {
    slots: HashMap<String, usize>,
}

struct Emitter {
    code: Vec<InstrArray>,
    labels: Vec<Option<usize>>,
    jump_positions: Vec<usize>,
}

impl Emitter {
    fn new() -> Self {
        Self {
            code: Vec::new(),
            labels: Vec::new(),
            jump_positions: Vec::new(),
        }
    }

    fn fresh_label(&mut self) -> usize {
        self.labels.push(None);
        self.labels.len() - 1
    }

    fn bind(&mut self, label: usize) {
        debug_assert!(self.labels[label].is_none(), "label bound twice");
        self.labels[label] = Some(self.code.len());
    }

    fn push(&mut self, instr: InstrArray) {
        self.code.push(instr);
    }

    /// Emits a conditional jump whose targets are label ids, fixed up later.
    fn jzero(&mut self, cond: Expr, l0: usize, l1: usize) {
        self.jump_positions.push(self.code.len());
        self.code.push(InstrArray::Jzero { cond, l0, l1 });
    }

    fn goto(&mut self, label: usize) {
        self.jzero(Expr::Lit(0), label, label);
    }

    fn finish(mut self) -> ProgramArray {
        let end = self.code.len();
        for &pos in &self.jump_positions {
            if let InstrArray::Jzero { l0, l1, .. } = &mut self.code[pos] {
                *l0 = self.labels[*l0].unwrap_or(end);
                *l1 = self.labels[*l1].unwrap_or(end);
            }
        }
        ProgramArray {
            instructions: self.code,
        }
    }
}

struct Compiler<'a> {
    sp: &'a StructuredProgram,
    em: Emitter,
    vars: HashMap<String, usize>,
    arrays: HashMap<String, usize>,
    next_var: usize,
    eq_arr: usize,
    data_arr: usize,
    stack_arr: usize,
    pred_arr: usize,
    f_var: usize,
    nb_var: usize,
    retsite_var: usize,
    funcs: HashMap<String, FuncMeta>,
    /// Per callee: list of (site id, continuation label).
    sites: HashMap<String, Vec<(u64, usize)>>,
    next_site: u64,
    end_label: usize,
}

fn add(a: Expr, b: Expr) -> Expr {
    Expr::Op(PrimOp::Add, vec![a, b])
}

impl<'a> Compiler<'a> {
    fn new(sp: &'a StructuredProgram) -> LoweringResult<Self> {
        let mut vars = HashMap::new();
        for (i, name) in sp.vars.iter().enumerate() {
            if vars.insert(name.clone(), i).is_some() {
                return Err(LoweringError::UnsupportedConstruct(format!(
                    "duplicate variable {name}"
                )));
            }
        }
        let mut arrays = HashMap::new();
        for (i, name) in sp.arrays.iter().enumerate() {
            if arrays.insert(name.clone(), i).is_some() {
                return Err(LoweringError::UnsupportedConstruct(format!(
                    "duplicate array {name}"
                )));
            }
        }
        let base_arr = sp.arrays.len();
        let base_var = sp.vars.len();
        let mut em = Emitter::new();
        let end_label = em.fresh_label();
        let mut compiler = Self {
            sp,
            em,
            vars,
            arrays,
            next_var: base_var + 3,
            eq_arr: base_arr,
            data_arr: base_arr + 1,
            stack_arr: base_arr + 2,
            pred_arr: base_arr + 3,
            f_var: base_var,
            nb_var: base_var + 1,
            retsite_var: base_var + 2,
            funcs: HashMap::new(),
            sites: HashMap::new(),
            next_site: 1,
            end_label,
        };
        for f in &sp.funcs {
            let entry = compiler.em.fresh_label();
            let epilogue = compiler.em.fresh_label();
            let meta = FuncMeta {
                entry,
                epilogue,
                params: f.params.clone(),
                frame_size: FRAME_HEADER + f.params.len() + f.locals.len(),
            };
            if compiler.funcs.insert(f.name.clone(), meta).is_some() {
                return Err(LoweringError::UnsupportedConstruct(format!(
                    "duplicate function {}",
                    f.name
                )));
            }
            compiler.sites.insert(f.name.clone(), Vec::new());
        }
        Ok(compiler)
    }

    fn fresh_var(&mut self) -> usize {
        let v = self.next_var;
        self.next_var += 1;
        v
    }

    /// Compiles an expression to an array-set operation expression.
    fn expr(&mut self, e: &SExpr, scope: Option<&FuncScope>) -> LoweringResult<Expr> {
        Ok(match e {
            SExpr::Lit(v) => Expr::Lit(*v),
            SExpr::N => Expr::N,
            SExpr::Var(name) => self.read_var(name, scope)?,
            SExpr::Cell(arr, idx) => {
                let a = self.arr_index(arr)?;
                let i = self.expr(idx, scope)?;
                Expr::Cell(a, Box::new(i))
            }
            SExpr::DynCell(ptr, idx) => {
                let p = self.expr(ptr, scope)?;
                let i = self.expr(idx, scope)?;
                Expr::Cell(self.data_arr, Box::new(add(p, i)))
            }
            SExpr::Input(idx) => {
                let i = self.expr(idx, scope)?;
                Expr::Input(Box::new(i))
            }
            SExpr::Add(a, b) => {
                let a = self.expr(a, scope)?;
                let b = self.expr(b, scope)?;
                add(a, b)
            }
        })
    }

    fn arr_index(&self, name: &str) -> LoweringResult<usize> {
        self.arrays.get(name).copied().ok_or_else(|| {
            LoweringError::UnsupportedConstruct(format!("unknown array {name}"))
        })
    }

    /// Expression for the stack slot of a frame-resident name.
    fn slot_expr(&self, offset: usize) -> Expr {
        add(Expr::Var(self.f_var), Expr::Lit(offset as Word))
    }

    fn read_var(&mut self, name: &str, scope: Option<&FuncScope>) -> LoweringResult<Expr> {
        if let Some(sc) = scope {
            if let Some(&off) = sc.slots.get(name) {
                return Ok(Expr::Cell(self.stack_arr, Box::new(self.slot_expr(off))));
            }
        }
        match self.vars.get(name) {
            Some(&i) => Ok(Expr::Var(i)),
            None => Err(LoweringError::UnsupportedConstruct(format!(
                "unknown variable {name}"
            ))),
        }
    }

    fn write_var(
        &mut self,
        name: &str,
        value: Expr,
        scope: Option<&FuncScope>,
    ) -> LoweringResult<()> {
        if let Some(sc) = scope {
            if let Some(&off) = sc.slots.get(name) {
                self.em.push(InstrArray::SetCell {
                    arr: self.stack_arr,
                    index: self.slot_expr(off),
                    value,
                });
                return Ok(());
            }
        }
        match self.vars.get(name) {
            Some(&i) => {
                self.em.push(InstrArray::SetVar { var: i, value });
                Ok(())
            }
            None => Err(LoweringError::UnsupportedConstruct(format!(
                "unknown variable {name}"
            ))),
        }
    }

    /// Compiles a condition into jumps to `l_true` / `l_false`.
    ///
    /// Equality uses the Eq-array sequence: Eq[a] <- 1; Eq[b] <- 0;
    /// Jzero Eq[a], relying on the equivalence a = b iff Eq[a] = 0.
    fn cond(
        &mut self,
        c: &Cond,
        scope: Option<&FuncScope>,
        l_true: usize,
        l_false: usize,
    ) -> LoweringResult<()> {
        match c {
            Cond::Equal(a, b) => {
                let ea = self.expr(a, scope)?;
                let eb = self.expr(b, scope)?;
                self.em.push(InstrArray::SetCell {
                    arr: self.eq_arr,
                    index: ea.clone(),
                    value: Expr::Lit(1),
                });
                self.em.push(InstrArray::SetCell {
                    arr: self.eq_arr,
                    index: eb,
                    value: Expr::Lit(0),
                });
                self.em.jzero(
                    Expr::Cell(self.eq_arr, Box::new(ea)),
                    l_true,
                    l_false,
                );
                Ok(())
            }
            Cond::NotEqual(a, b) => self.cond(
                &Cond::Equal(a.clone(), b.clone()),
                scope,
                l_false,
                l_true,
            ),
            Cond::Not(inner) => self.cond(inner, scope, l_false, l_true),
            Cond::And(c1, c2) => {
                let l_mid = self.em.fresh_label();
                self.cond(c1, scope, l_mid, l_false)?;
                self.em.bind(l_mid);
                self.cond(c2, scope, l_true, l_false)
            }
            Cond::Or(c1, c2) => {
                let l_mid = self.em.fresh_label();
                self.cond(c1, scope, l_true, l_mid)?;
                self.em.bind(l_mid);
                self.cond(c2, scope, l_true, l_false)
            }
        }
    }

    /// Emits the equality-walk guard deciding whether `lo <= hi`: two walkers
    /// start at `lo` and `hi` and step upward together; whichever endpoint is
    /// met first decides. Jumps to `l_yes` when lo <= hi, else `l_no`.
    fn range_guard(&mut self, lo: usize, hi: usize, l_yes: usize, l_no: usize) {
        let t = self.fresh_var();
        let s = self.fresh_var();
        self.em.push(InstrArray::SetVar {
            var: t,
            value: Expr::Var(lo),
        });
        self.em.push(InstrArray::SetVar {
            var: s,
            value: Expr::Var(hi),
        });
        let l_test = self.em.fresh_label();
        let l_t2 = self.em.fresh_label();
        let l_step = self.em.fresh_label();
        self.em.bind(l_test);
        // t reached hi (covers lo = hi): the range is non-empty.
        self.em.push(InstrArray::SetCell {
            arr: self.eq_arr,
            index: Expr::Var(t),
            value: Expr::Lit(1),
        });
        self.em.push(InstrArray::SetCell {
            arr: self.eq_arr,
            index: Expr::Var(hi),
            value: Expr::Lit(0),
        });
        self.em
            .jzero(Expr::Cell(self.eq_arr, Box::new(Expr::Var(t))), l_yes, l_t2);
        self.em.bind(l_t2);
        // s reached lo without t reaching hi: hi < lo, the range is empty.
        self.em.push(InstrArray::SetCell {
            arr: self.eq_arr,
            index: Expr::Var(s),
            value: Expr::Lit(1),
        });
        self.em.push(InstrArray::SetCell {
            arr: self.eq_arr,
            index: Expr::Var(lo),
            value: Expr::Lit(0),
        });
        self.em
            .jzero(Expr::Cell(self.eq_arr, Box::new(Expr::Var(s))), l_no, l_step);
        self.em.bind(l_step);
        self.em.push(InstrArray::SetVar {
            var: t,
            value: add(Expr::Var(t), Expr::Lit(1)),
        });
        self.em.push(InstrArray::SetVar {
            var: s,
            value: add(Expr::Var(s), Expr::Lit(1)),
        });
        self.em.goto(l_test);
    }

    fn stmts(
        &mut self,
        body: &[Stmt],
        scope: Option<&FuncScope>,
        epilogue: Option<usize>,
    ) -> LoweringResult<()> {
        for s in body {
            self.stmt(s, scope, epilogue)?;
        }
        Ok(())
    }

    fn stmt(
        &mut self,
        s: &Stmt,
        scope: Option<&FuncScope>,
        epilogue: Option<usize>,
    ) -> LoweringResult<()> {
        match s {
            Stmt::AssignVar(name, e) => {
                let v = self.expr(e, scope)?;
                self.write_var(name, v, scope)
            }
            Stmt::AssignCell(arr, idx, val) => {
                let a = self.arr_index(arr)?;
                let index = self.expr(idx, scope)?;
                let value = self.expr(val, scope)?;
                self.em.push(InstrArray::SetCell { arr: a, index, value });
                Ok(())
            }
            Stmt::AssignDynCell(ptr, idx, val) => {
                let p = self.expr(ptr, scope)?;
                let i = self.expr(idx, scope)?;
                let value = self.expr(val, scope)?;
                self.em.push(InstrArray::SetCell {
                    arr: self.data_arr,
                    index: add(p, i),
                    value,
                });
                Ok(())
            }
            Stmt::If(c, then_body, else_body) => {
                let l_then = self.em.fresh_label();
                let l_else = self.em.fresh_label();
                let l_end = self.em.fresh_label();
                self.cond(c, scope, l_then, l_else)?;
                self.em.bind(l_then);
                self.stmts(then_body, scope, epilogue)?;
                self.em.goto(l_end);
                self.em.bind(l_else);
                self.stmts(else_body, scope, epilogue)?;
                self.em.bind(l_end);
                Ok(())
            }
            Stmt::While(c, body) => {
                let l_test = self.em.fresh_label();
                let l_body = self.em.fresh_label();
                let l_end = self.em.fresh_label();
                self.em.bind(l_test);
                self.cond(c, scope, l_body, l_end)?;
                self.em.bind(l_body);
                self.stmts(body, scope, epilogue)?;
                self.em.goto(l_test);
                self.em.bind(l_end);
                Ok(())
            }
            Stmt::ForUp {
                var,
                from,
                to,
                body,
            } => {
                let lo = self.fresh_var();
                let hi = self.fresh_var();
                let efrom = self.expr(from, scope)?;
                let eto = self.expr(to, scope)?;
                self.em.push(InstrArray::SetVar {
                    var: lo,
                    value: efrom,
                });
                self.em.push(InstrArray::SetVar { var: hi, value: eto });
                let l_enter = self.em.fresh_label();
                let l_end = self.em.fresh_label();
                self.range_guard(lo, hi, l_enter, l_end);
                self.em.bind(l_enter);
                self.write_var(var, Expr::Var(lo), scope)?;
                let l_body = self.em.fresh_label();
                let l_inc = self.em.fresh_label();
                self.em.bind(l_body);
                self.stmts(body, scope, epilogue)?;
                // Stop after the iteration where var = hi; else increment.
                let cur = self.read_var(var, scope)?;
                self.em.push(InstrArray::SetCell {
                    arr: self.eq_arr,
                    index: cur.clone(),
                    value: Expr::Lit(1),
                });
                self.em.push(InstrArray::SetCell {
                    arr: self.eq_arr,
                    index: Expr::Var(hi),
                    value: Expr::Lit(0),
                });
                self.em
                    .jzero(Expr::Cell(self.eq_arr, Box::new(cur.clone())), l_end, l_inc);
                self.em.bind(l_inc);
                self.write_var(var, add(cur, Expr::Lit(1)), scope)?;
                self.em.goto(l_body);
                self.em.bind(l_end);
                Ok(())
            }
            Stmt::ForDown {
                var,
                from,
                downto,
                body,
            } => {
                let hi = self.fresh_var();
                let lo = self.fresh_var();
                let efrom = self.expr(from, scope)?;
                let edown = self.expr(downto, scope)?;
                self.em.push(InstrArray::SetVar {
                    var: hi,
                    value: efrom,
                });
                self.em.push(InstrArray::SetVar {
                    var: lo,
                    value: edown,
                });
                let l_enter = self.em.fresh_label();
                let l_end = self.em.fresh_label();
                self.range_guard(lo, hi, l_enter, l_end);
                self.em.bind(l_enter);
                // Build a predecessor table for [lo, hi] with one ascending
                // pass, then walk it downward.
                let p = self.fresh_var();
                self.em.push(InstrArray::SetVar {
                    var: p,
                    value: Expr::Var(lo),
                });
                let l_build = self.em.fresh_label();
                let l_built = self.em.fresh_label();
                let l_bstep = self.em.fresh_label();
                self.em.bind(l_build);
                self.em.push(InstrArray::SetCell {
                    arr: self.eq_arr,
                    index: Expr::Var(p),
                    value: Expr::Lit(1),
                });
                self.em.push(InstrArray::SetCell {
                    arr: self.eq_arr,
                    index: Expr::Var(hi),
                    value: Expr::Lit(0),
                });
                self.em.jzero(
                    Expr::Cell(self.eq_arr, Box::new(Expr::Var(p))),
                    l_built,
                    l_bstep,
                );
                self.em.bind(l_bstep);
                self.em.push(InstrArray::SetCell {
                    arr: self.pred_arr,
                    index: add(Expr::Var(p), Expr::Lit(1)),
                    value: Expr::Var(p),
                });
                self.em.push(InstrArray::SetVar {
                    var: p,
                    value: add(Expr::Var(p), Expr::Lit(1)),
                });
                self.em.goto(l_build);
                self.em.bind(l_built);
                self.write_var(var, Expr::Var(hi), scope)?;
                let l_body = self.em.fresh_label();
                let l_dec = self.em.fresh_label();
                self.em.bind(l_body);
                self.stmts(body, scope, epilogue)?;
                let cur = self.read_var(var, scope)?;
                self.em.push(InstrArray::SetCell {
                    arr: self.eq_arr,
                    index: cur.clone(),
                    value: Expr::Lit(1),
                });
                self.em.push(InstrArray::SetCell {
                    arr: self.eq_arr,
                    index: Expr::Var(lo),
                    value: Expr::Lit(0),
                });
                self.em
                    .jzero(Expr::Cell(self.eq_arr, Box::new(cur.clone())), l_end, l_dec);
                self.em.bind(l_dec);
                let pred = Expr::Cell(self.pred_arr, Box::new(cur));
                self.write_var(var, pred, scope)?;
                self.em.goto(l_body);
                self.em.bind(l_end);
                Ok(())
            }
            Stmt::Alloc { var, size } => {
                let sz = self.expr(size, scope)?;
                // The pointer is the arena watermark before the bump.
                let nb = Expr::Var(self.nb_var);
                self.write_var(var, nb.clone(), scope)?;
                self.em.push(InstrArray::SetVar {
                    var: self.nb_var,
                    value: add(nb, sz),
                });
                Ok(())
            }
            Stmt::Call { func, args, result } => {
                let meta_frame;
                let meta_entry;
                let nparams;
                match self.funcs.get(func) {
                    Some(m) => {
                        meta_frame = m.frame_size;
                        meta_entry = m.entry;
                        nparams = m.params.len();
                    }
                    None => {
                        return Err(LoweringError::UnsupportedConstruct(format!(
                            "unknown function {func}"
                        )))
                    }
                }
                if args.len() != nparams {
                    return Err(LoweringError::UnsupportedConstruct(format!(
                        "function {func} expects {nparams} argument(s), got {}",
                        args.len()
                    )));
                }
                let site = self.next_site;
                self.next_site += 1;
                let l_cont = self.em.fresh_label();
                self.sites.get_mut(func).expect("site list").push((site, l_cont));
                // New frame starts at F + S[F+2]; fill it before moving F.
                let f_var = self.f_var;
                let stack_arr = self.stack_arr;
                let new_f = move || {
                    add(
                        Expr::Var(f_var),
                        Expr::Cell(
                            stack_arr,
                            Box::new(add(Expr::Var(f_var), Expr::Lit(2))),
                        ),
                    )
                };
                for (i, arg) in args.iter().enumerate() {
                    let value = self.expr(arg, scope)?;
                    self.em.push(InstrArray::SetCell {
                        arr: self.stack_arr,
                        index: add(new_f(), Expr::Lit((FRAME_HEADER + i) as Word)),
                        value,
                    });
                }
                self.em.push(InstrArray::SetCell {
                    arr: self.stack_arr,
                    index: new_f(),
                    value: Expr::Lit(site),
                });
                self.em.push(InstrArray::SetCell {
                    arr: self.stack_arr,
                    index: add(new_f(), Expr::Lit(1)),
                    value: Expr::Var(self.f_var),
                });
                self.em.push(InstrArray::SetCell {
                    arr: self.stack_arr,
                    index: add(new_f(), Expr::Lit(2)),
                    value: Expr::Lit(meta_frame as Word),
                });
                self.em.push(InstrArray::SetVar {
                    var: self.f_var,
                    value: new_f(),
                });
                self.em.goto(meta_entry);
                self.em.bind(l_cont);
                if let Some(res) = result {
                    // The callee frame is intact above ours; read its return
                    // slot at F + S[F+2] + 3.
                    let ret = Expr::Cell(
                        self.stack_arr,
                        Box::new(add(new_f(), Expr::Lit(3))),
                    );
                    self.write_var(res, ret, scope)?;
                }
                Ok(())
            }
            Stmt::Return(e) => match epilogue {
                Some(l_epi) => {
                    let value = self.expr(e, scope)?;
                    self.em.push(InstrArray::SetCell {
                        arr: self.stack_arr,
                        index: self.slot_expr(3),
                        value,
                    });
                    self.em.goto(l_epi);
                    Ok(())
                }
                None => Err(LoweringError::UnsupportedConstruct(
                    "return outside of a function".into(),
                )),
            },
            Stmt::Output(e) => {
                let v = self.expr(e, scope)?;
                self.em.push(InstrArray::Output(v));
                Ok(())
            }
        }
    }

    fn compile(mut self) -> LoweringResult<LoweredStructured> {
        // Main prologue: declare the main frame's size so the first call
        // allocates its frame just above the (header-only) main frame.
        self.em.push(InstrArray::SetCell {
            arr: self.stack_arr,
            index: Expr::Lit(2),
            value: Expr::Lit(FRAME_HEADER as Word),
        });
        self.stmts(&self.sp.body.clone(), None, None)?;
        self.em.goto(self.end_label);
        for f in &self.sp.funcs.clone() {
            let (entry, epilogue) = {
                let m = &self.funcs[&f.name];
                (m.entry, m.epilogue)
            };
            self.em.bind(entry);
            // Zero the locals and the return slot: frames reuse arena cells
            // left over from earlier calls.
            for off in [3usize]
                .into_iter()
                .chain((0..f.locals.len()).map(|i| FRAME_HEADER + f.params.len() + i))
            {
                self.em.push(InstrArray::SetCell {
                    arr: self.stack_arr,
                    index: self.slot_expr(off),
                    value: Expr::Lit(0),
                });
            }
            let mut slots = HashMap::new();
            for (i, p) in f.params.iter().enumerate() {
                slots.insert(p.clone(), FRAME_HEADER + i);
            }
            for (i, l) in f.locals.iter().enumerate() {
                slots.insert(l.clone(), FRAME_HEADER + f.params.len() + i);
            }
            let scope = FuncScope { slots };
            self.stmts(&f.body, Some(&scope), Some(epilogue))?;
            // Falling off the end returns with the zero-initialized slot.
            self.em.goto(epilogue);
            self.em.bind(epilogue);
            // Pop the frame, then dispatch on the recorded call site.
            self.em.push(InstrArray::SetVar {
                var: self.retsite_var,
                value: Expr::Cell(self.stack_arr, Box::new(Expr::Var(self.f_var))),
            });
            self.em.push(InstrArray::SetVar {
                var: self.f_var,
                value: Expr::Cell(self.stack_arr, Box::new(self.slot_expr(1))),
            });
            let site_list = self.sites[&f.name].clone();
            for (site, l_cont) in site_list {
                let l_next = self.em.fresh_label();
                self.em.push(InstrArray::SetCell {
                    arr: self.eq_arr,
                    index: Expr::Var(self.retsite_var),
                    value: Expr::Lit(1),
                });
                self.em.push(InstrArray::SetCell {
                    arr: self.eq_arr,
                    index: Expr::Lit(site),
                    value: Expr::Lit(0),
                });
                self.em.jzero(
                    Expr::Cell(self.eq_arr, Box::new(Expr::Var(self.retsite_var))),
                    l_cont,
                    l_next,
                );
                self.em.bind(l_next);
            }
            // No site matched: the function was never called from here.
            self.em.goto(self.end_label);
        }
        self.em.bind(self.end_label);
        let program = self.em.finish();
        let layout = Layout {
            var_indices: self.vars.clone(),
            arr_indices: self.arrays.clone(),
        };
        Ok(LoweredStructured { program, layout })
    }
}

/// Compiles a structured program to the array instruction set.
pub fn lower_structured(sp: &StructuredProgram) -> LoweringResult<LoweredStructured> {
    Compiler::new(sp)?.compile()
}

#[cfg(test)]
mod tests {
    use super::*;
    use ram_core::{run_array, Limits, RamInput};

    fn run(sp: &StructuredProgram, cells: Vec<u64>) -> Vec<u64> {
        let lowered = lower_structured(sp).expect("lowering");
        let input = RamInput::new(cells, 8).expect("input");
        let limits = Limits {
            c: 64,
            ..Limits::default()
        };
        run_array(&lowered.program, &input, limits)
            .expect("run")
            .outputs
    }

    fn var(n: &str) -> SExpr {
        SExpr::Var(n.into())
    }

    fn lit(v: u64) -> SExpr {
        SExpr::Lit(v)
    }

    fn plus(a: SExpr, b: SExpr) -> SExpr {
        SExpr::Add(Box::new(a), Box::new(b))
    }

    #[test]
    fn while_loop_terminates() {
        let sp = StructuredProgram {
            vars: vec!["x".into()],
            arrays: vec![],
            funcs: vec![],
            body: vec![
                Stmt::While(
                    Cond::Equal(var("x"), lit(0)),
                    vec![Stmt::AssignVar("x".into(), lit(1))],
                ),
                Stmt::Output(var("x")),
            ],
        };
        assert_eq!(run(&sp, vec![0]), vec![1]);
    }

    #[test]
    fn if_equal_takes_then_branch() {
        let sp = StructuredProgram {
            vars: vec!["a".into(), "b".into()],
            arrays: vec![],
            funcs: vec![],
            body: vec![
                Stmt::AssignVar("a".into(), lit(3)),
                Stmt::AssignVar("b".into(), lit(3)),
                Stmt::If(
                    Cond::Equal(var("a"), var("b")),
                    vec![Stmt::Output(lit(1))],
                    vec![Stmt::Output(lit(0))],
                ),
            ],
        };
        assert_eq!(run(&sp, vec![0]), vec![1]);
    }

    #[test]
    fn boolean_connectives() {
        let sp = StructuredProgram {
            vars: vec!["a".into()],
            arrays: vec![],
            funcs: vec![],
            body: vec![
                Stmt::AssignVar("a".into(), lit(2)),
                Stmt::If(
                    Cond::And(
                        Box::new(Cond::NotEqual(var("a"), lit(0))),
                        Box::new(Cond::Or(
                            Box::new(Cond::Equal(var("a"), lit(9))),
                            Box::new(Cond::Equal(var("a"), lit(2))),
                        )),
                    ),
                    vec![Stmt::Output(lit(1))],
                    vec![Stmt::Output(lit(0))],
                ),
            ],
        };
        assert_eq!(run(&sp, vec![0]), vec![1]);
    }

    #[test]
    fn for_up_sums_range() {
        let sp = StructuredProgram {
            vars: vec!["i".into(), "acc".into()],
            arrays: vec![],
            funcs: vec![],
            body: vec![
                Stmt::ForUp {
                    var: "i".into(),
                    from: lit(1),
                    to: lit(5),
                    body: vec![Stmt::AssignVar("acc".into(), plus(var("acc"), var("i")))],
                },
                Stmt::Output(var("acc")),
            ],
        };
        assert_eq!(run(&sp, vec![0, 0]), vec![15]);
    }

    #[test]
    fn for_up_empty_range_is_noop() {
        let sp = StructuredProgram {
            vars: vec!["i".into(), "acc".into()],
            arrays: vec![],
            funcs: vec![],
            body: vec![
                Stmt::ForUp {
                    var: "i".into(),
                    from: lit(3),
                    to: lit(2),
                    body: vec![Stmt::AssignVar("acc".into(), lit(99))],
                },
                Stmt::Output(var("acc")),
            ],
        };
        assert_eq!(run(&sp, vec![0, 0]), vec![0]);
    }

    #[test]
    fn for_down_iterates_descending() {
        let sp = StructuredProgram {
            vars: vec!["i".into()],
            arrays: vec![],
            funcs: vec![],
            body: vec![Stmt::ForDown {
                var: "i".into(),
                from: lit(3),
                downto: lit(1),
                body: vec![Stmt::Output(var("i"))],
            }],
        };
        assert_eq!(run(&sp, vec![0]), vec![3, 2, 1]);
    }

    #[test]
    fn dynamic_arrays_allocate_disjoint_regions() {
        let sp = StructuredProgram {
            vars: vec!["p".into(), "q".into()],
            arrays: vec![],
            funcs: vec![],
            body: vec![
                Stmt::Alloc {
                    var: "p".into(),
                    size: lit(4),
                },
                Stmt::Alloc {
                    var: "q".into(),
                    size: lit(4),
                },
                Stmt::AssignDynCell(var("p"), lit(2), lit(7)),
                Stmt::AssignDynCell(var("q"), lit(2), lit(9)),
                Stmt::Output(SExpr::DynCell(Box::new(var("p")), Box::new(lit(2)))),
                Stmt::Output(SExpr::DynCell(Box::new(var("q")), Box::new(lit(2)))),
            ],
        };
        assert_eq!(run(&sp, vec![0, 0]), vec![7, 9]);
    }

    #[test]
    fn recursive_function_computes_triangular_number() {
        // g(i) = 0 when i = 5, else i + g(i+1); g(1) = 1+2+3+4 = T(4) = 10.
        let sp = StructuredProgram {
            vars: vec!["r".into()],
            arrays: vec![],
            funcs: vec![FuncDef {
                name: "g".into(),
                params: vec!["i".into()],
                locals: vec!["sub".into()],
                body: vec![Stmt::If(
                    Cond::Equal(var("i"), lit(5)),
                    vec![Stmt::Return(lit(0))],
                    vec![
                        Stmt::Call {
                            func: "g".into(),
                            args: vec![plus(var("i"), lit(1))],
                            result: Some("sub".into()),
                        },
                        Stmt::Return(plus(var("i"), var("sub"))),
                    ],
                )],
            }],
            body: vec![
                Stmt::Call {
                    func: "g".into(),
                    args: vec![lit(1)],
                    result: Some("r".into()),
                },
                Stmt::Output(var("r")),
            ],
        };
        assert_eq!(run(&sp, vec![0]), vec![10]);
    }

    #[test]
    fn return_outside_function_is_rejected() {
        let sp = StructuredProgram {
            vars: vec![],
            arrays: vec![],
            funcs: vec![],
            body: vec![Stmt::Return(lit(0))],
        };
        assert!(matches!(
            lower_structured(&sp),
            Err(LoweringError::UnsupportedConstruct(_))
        ));
    }

    #[test]
    fn unknown_variable_is_rejected() {
        let sp = StructuredProgram {
            vars: vec![],
            arrays: vec![],
            funcs: vec![],
            body: vec![Stmt::Output(var("ghost"))],
        };
        assert!(matches!(
            lower_structured(&sp),
            Err(LoweringError::UnsupportedConstruct(_))
        ));
    }
}
