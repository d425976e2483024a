// Copyright (c) 2026 ram-workbench contributors
// SPDX-License-Identifier: Apache-2.0

//! Line-oriented text parsers for the three instruction sets.
//!
//! One instruction per line; `#` starts a comment; blank lines are skipped.
//! Jump targets are instruction indices (not source lines) and may equal the
//! instruction count, which is the halting label.

use crate::error::{RamError, RamResult};
use crate::program::{Expr, InstrAB, InstrArray, InstrR, PrimOp, ProgramAB, ProgramArray, ProgramR};
use crate::Word;

/// Which of the three instruction sets a program text is written in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InstrSet {
    Ab,
    R,
    Array,
}

impl std::str::FromStr for InstrSet {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "ab" => Ok(InstrSet::Ab),
            "r" => Ok(InstrSet::R),
            "array" => Ok(InstrSet::Array),
            other => Err(format!("unknown instruction set {other:?}")),
        }
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> RamError {
    RamError::Parse {
        line,
        msg: msg.into(),
    }
}

fn strip(line: &str) -> &str {
    match line.find('#') {
        Some(i) => line[..i].trim(),
        None => line.trim(),
    }
}

fn parse_num<T: std::str::FromStr>(tok: &str, line: usize) -> RamResult<T> {
    tok.parse()
        .map_err(|_| parse_err(line, format!("expected a number, found {tok:?}")))
}

/// Non-empty source lines with their 1-based line numbers.
fn meaningful_lines(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, strip(l)))
        .filter(|(_, l)| !l.is_empty())
        .collect()
}

fn check_targets(targets: &[(usize, usize)], r: usize) -> RamResult<()> {
    for &(line, t) in targets {
        if t > r {
            return Err(parse_err(
                line,
                format!("jump target {t} exceeds program length {r}"),
            ));
        }
    }
    Ok(())
}

/// Parses an accumulator/buffer program.
pub fn parse_ab(text: &str) -> RamResult<ProgramAB> {
    let mut instructions = Vec::new();
    let mut targets = Vec::new();
    for (line, src) in meaningful_lines(text) {
        let toks: Vec<&str> = src.split_whitespace().collect();
        let argc = toks.len() - 1;
        let need = |n: usize| -> RamResult<()> {
            if argc != n {
                Err(parse_err(
                    line,
                    format!("{} takes {n} argument(s), found {argc}", toks[0]),
                ))
            } else {
                Ok(())
            }
        };
        let instr = match toks[0] {
            "CST" => {
                need(1)?;
                InstrAB::Cst(parse_num(toks[1], line)?)
            }
            "Buffer" => {
                need(0)?;
                InstrAB::Buffer
            }
            "Store" => {
                need(0)?;
                InstrAB::Store
            }
            "Load" => {
                need(0)?;
                InstrAB::Load
            }
            "Jzero" => {
                need(2)?;
                let l0 = parse_num(toks[1], line)?;
                let l1 = parse_num(toks[2], line)?;
                targets.push((line, l0));
                targets.push((line, l1));
                InstrAB::Jzero(l0, l1)
            }
            "getN" => {
                need(0)?;
                InstrAB::GetN
            }
            "Input" => {
                need(0)?;
                InstrAB::Input
            }
            "Output" => {
                need(0)?;
                InstrAB::Output
            }
            op => match PrimOp::from_mnemonic(op) {
                Some(op) => {
                    need(0)?;
                    InstrAB::Op(op)
                }
                None => return Err(parse_err(line, format!("unknown mnemonic {op:?}"))),
            },
        };
        instructions.push(instr);
    }
    check_targets(&targets, instructions.len())?;
    Ok(ProgramAB { instructions })
}

/// Parses a register-addressed program.
pub fn parse_r(text: &str) -> RamResult<ProgramR> {
    let mut instructions = Vec::new();
    let mut targets = Vec::new();
    for (line, src) in meaningful_lines(text) {
        let toks: Vec<&str> = src.split_whitespace().collect();
        let argc = toks.len() - 1;
        let need = |n: usize| -> RamResult<()> {
            if argc != n {
                Err(parse_err(
                    line,
                    format!("{} takes {n} argument(s), found {argc}", toks[0]),
                ))
            } else {
                Ok(())
            }
        };
        let instr = match toks[0] {
            "CST" => {
                need(2)?;
                InstrR::Cst(parse_num(toks[1], line)?, parse_num::<Word>(toks[2], line)?)
            }
            "Move" => {
                need(2)?;
                InstrR::Move(parse_num(toks[1], line)?, parse_num(toks[2], line)?)
            }
            "Store" => {
                need(2)?;
                InstrR::Store(parse_num(toks[1], line)?, parse_num(toks[2], line)?)
            }
            "Load" => {
                need(2)?;
                InstrR::Load(parse_num(toks[1], line)?, parse_num(toks[2], line)?)
            }
            "Jzero" => {
                need(3)?;
                let i = parse_num(toks[1], line)?;
                let l0 = parse_num(toks[2], line)?;
                let l1 = parse_num(toks[3], line)?;
                targets.push((line, l0));
                targets.push((line, l1));
                InstrR::Jzero(i, l0, l1)
            }
            "getN" => {
                need(1)?;
                InstrR::GetN(parse_num(toks[1], line)?)
            }
            "Input" => {
                need(2)?;
                InstrR::Input(parse_num(toks[1], line)?, parse_num(toks[2], line)?)
            }
            "Output" => {
                need(1)?;
                InstrR::Output(parse_num(toks[1], line)?)
            }
            op => match PrimOp::from_mnemonic(op) {
                Some(op) => {
                    need(0)?;
                    InstrR::Op(op)
                }
                None => return Err(parse_err(line, format!("unknown mnemonic {op:?}"))),
            },
        };
        instructions.push(instr);
    }
    check_targets(&targets, instructions.len())?;
    Ok(ProgramR { instructions })
}

/// Character-level cursor for the array-set expression grammar.
struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    _src: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str, line: usize) -> Self {
        Self {
            chars: src.chars().collect(),
            pos: 0,
            line,
            _src: src,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        self.skip_ws();
        let c = self.chars.get(self.pos).copied();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn expect(&mut self, c: char) -> RamResult<()> {
        match self.bump() {
            Some(got) if got == c => Ok(()),
            got => Err(parse_err(
                self.line,
                format!("expected {c:?}, found {got:?}"),
            )),
        }
    }

    fn number(&mut self) -> RamResult<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(parse_err(self.line, "expected a number"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse()
            .map_err(|_| parse_err(self.line, format!("bad number {s:?}")))
    }

    /// Parses one fully parenthesized operation expression.
    fn expr(&mut self) -> RamResult<Expr> {
        match self.peek() {
            Some('(') => {
                self.bump();
                let lhs = self.expr()?;
                match self.bump() {
                    Some('+') => {}
                    got => {
                        return Err(parse_err(
                            self.line,
                            format!("expected an operator, found {got:?}"),
                        ))
                    }
                }
                let rhs = self.expr()?;
                self.expect(')')?;
                Ok(Expr::Op(PrimOp::Add, vec![lhs, rhs]))
            }
            Some('N') => {
                self.bump();
                Ok(Expr::N)
            }
            Some('C') => {
                self.bump();
                Ok(Expr::Var(self.number()? as usize))
            }
            Some('T') => {
                self.bump();
                let arr = self.number()? as usize;
                self.expect('[')?;
                let idx = self.expr()?;
                self.expect(']')?;
                Ok(Expr::Cell(arr, Box::new(idx)))
            }
            Some('I') => {
                self.bump();
                self.expect('[')?;
                let idx = self.expr()?;
                self.expect(']')?;
                Ok(Expr::Input(Box::new(idx)))
            }
            Some(c) if c.is_ascii_digit() => Ok(Expr::Lit(self.number()?)),
            got => Err(parse_err(
                self.line,
                format!("expected an expression, found {got:?}"),
            )),
        }
    }

    fn arrow(&mut self) -> RamResult<()> {
        self.expect('<')?;
        match self.chars.get(self.pos) {
            Some('-') => {
                self.pos += 1;
                Ok(())
            }
            got => Err(parse_err(
                self.line,
                format!("expected \"<-\", found {got:?}"),
            )),
        }
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }
}

/// Parses an array-addressed program.
pub fn parse_array(text: &str) -> RamResult<ProgramArray> {
    let mut instructions = Vec::new();
    let mut targets = Vec::new();
    for (line, src) in meaningful_lines(text) {
        let mut cur = Cursor::new(src, line);
        let instr = if src.starts_with("Jzero") {
            cur.pos += "Jzero".len();
            let cond = cur.expr()?;
            let l0 = cur.number()? as usize;
            let l1 = cur.number()? as usize;
            targets.push((line, l0));
            targets.push((line, l1));
            InstrArray::Jzero { cond, l0, l1 }
        } else if src.starts_with("Output") {
            cur.pos += "Output".len();
            InstrArray::Output(cur.expr()?)
        } else {
            match cur.bump() {
                Some('C') => {
                    let var = cur.number()? as usize;
                    cur.arrow()?;
                    InstrArray::SetVar {
                        var,
                        value: cur.expr()?,
                    }
                }
                Some('T') => {
                    let arr = cur.number()? as usize;
                    cur.expect('[')?;
                    let index = cur.expr()?;
                    cur.expect(']')?;
                    cur.arrow()?;
                    InstrArray::SetCell {
                        arr,
                        index,
                        value: cur.expr()?,
                    }
                }
                got => return Err(parse_err(line, format!("unknown instruction {got:?}"))),
            }
        };
        if !cur.at_end() {
            return Err(parse_err(line, "trailing characters after instruction"));
        }
        instructions.push(instr);
    }
    check_targets(&targets, instructions.len())?;
    Ok(ProgramArray { instructions })
}
