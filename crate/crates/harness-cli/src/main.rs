// Copyright (c) 2026 ram-workbench contributors
// SPDX-License-Identifier: Apache-2.0

//! `ramharness`: batch CLI over the interpreters, lowerings, operation
//! queries, and metering sweeps. Every subcommand prints JSON (or CSV for
//! `report --csv`) on standard output.
//!
//! Exit codes: 0 ok, 2 failed verdict, 3 oracle mismatch, 4 input error.

use clap::{Parser, Subcommand, ValueEnum};
use harness_cli::ops::{build_op_context, OpName};
use harness_cli::oracle::{oracle_check, OracleMode};
use harness_cli::sweep::{parse_n_set, sweep, SweepConfig};
use harness_cli::{write_csv, HarnessError, HarnessResult, EXIT_INPUT, EXIT_OK, EXIT_ORACLE, EXIT_VERDICT};
use ca_compile::{check_contract, CellularAutomaton, ContractVerdict, State};
use lowering::{lower_ab_to_array, lower_array_to_r, lower_r_to_ab};
use ram_core::{parse_ab, parse_array, parse_r, run_ab, run_array, run_r, Limits, RamInput};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "ramharness", version, about = "RAM workbench batch harness")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum SetName {
    Ab,
    R,
    Array,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exhaustive,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum DemoName {
    Identity,
    Complement,
    Parity,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a program on an input file and print the run summary.
    Run {
        prog: PathBuf,
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        set: SetName,
        #[arg(long, default_value_t = 8)]
        c: u64,
        #[arg(long, default_value_t = 1_000_000_000)]
        max_steps: u64,
    },
    /// Lower a program one instruction set down and print it with its
    /// emulation map.
    Lower {
        prog: PathBuf,
        #[arg(long, value_enum)]
        from: SetName,
    },
    /// Compare an operation against the exact-integer oracle.
    Check {
        op: String,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 8)]
        c: u64,
        #[arg(long, default_value_t = 2)]
        d: u32,
        #[arg(long, value_enum, default_value_t = Mode::Random)]
        mode: Mode,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Run one metered query.
    Op {
        op: String,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 8)]
        c: u64,
        #[arg(long, default_value_t = 2)]
        d: u32,
        /// Operands, in the operation's argument order.
        args: Vec<u128>,
    },
    /// Sweep an operation across problem sizes and print the verdicts.
    Sweep {
        op: String,
        /// Doubling range "lo..hi" or explicit list "a,b,c".
        #[arg(long, default_value = "128..65536")]
        n: String,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        c: u64,
        #[arg(long, default_value_t = 2)]
        d: u32,
    },
    /// Validate a cellular automaton and check its output contract on
    /// random words.
    Ca {
        /// Built-in demo automaton.
        #[arg(long, value_enum, conflicts_with = "file")]
        demo: Option<DemoName>,
        /// JSON automaton file.
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Forbid output states strictly before time c·n.
        #[arg(long)]
        strict: bool,
    },
    /// Sweep several operations and print one combined report.
    Report {
        /// Comma-separated operation names.
        #[arg(long)]
        ops: String,
        #[arg(long, default_value = "128..65536")]
        n: String,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        c: u64,
        #[arg(long, default_value_t = 2)]
        d: u32,
        /// Emit CSV instead of JSON.
        #[arg(long)]
        csv: bool,
    },
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("serialize"));
}

fn read(path: &PathBuf) -> HarnessResult<String> {
    std::fs::read_to_string(path)
        .map_err(|e| HarnessError::Input(format!("cannot read {}: {e}", path.display())))
}

#[derive(Serialize)]
struct CaReport {
    s: u16,
    c: u32,
    r: u32,
    verdict: ContractVerdict,
}

fn execute(cmd: Cmd) -> HarnessResult<i32> {
    match cmd {
        Cmd::Run {
            prog,
            input,
            set,
            c,
            max_steps,
        } => {
            let limits = Limits { c, max_steps };
            let input = RamInput::parse(&read(&input)?, c)?;
            let text = read(&prog)?;
            let summary = match set {
                SetName::Ab => run_ab(&parse_ab(&text)?, &input, limits)?.summary(),
                SetName::R => run_r(&parse_r(&text)?, &input, limits)?.summary(),
                SetName::Array => run_array(&parse_array(&text)?, &input, limits)?.summary(),
            };
            print_json(&summary);
            Ok(EXIT_OK)
        }
        Cmd::Lower { prog, from } => {
            let text = read(&prog)?;
            match from {
                SetName::R => {
                    let (p, emap) = lower_r_to_ab(&parse_r(&text)?);
                    print_json(&serde_json::json!({ "to": "ab", "program": p, "emap": emap }));
                }
                SetName::Array => {
                    let (p, emap) = lower_array_to_r(&parse_array(&text)?);
                    print_json(&serde_json::json!({ "to": "r", "program": p, "emap": emap }));
                }
                SetName::Ab => {
                    let (p, emap) = lower_ab_to_array(&parse_ab(&text)?);
                    print_json(&serde_json::json!({ "to": "array", "program": p, "emap": emap }));
                }
            }
            Ok(EXIT_OK)
        }
        Cmd::Check {
            op,
            n,
            c,
            d,
            mode,
            samples,
            seed,
        } => {
            let op = OpName::parse(&op)?;
            let mode = match mode {
                Mode::Exhaustive => OracleMode::Exhaustive,
                Mode::Random => OracleMode::Random { samples, seed },
            };
            let report = oracle_check(op, n, c, d, mode)?;
            print_json(&report);
            Ok(if report.is_ok() { EXIT_OK } else { EXIT_ORACLE })
        }
        Cmd::Op { op, n, c, d, args } => {
            let op = OpName::parse(&op)?;
            let ctx = build_op_context(op, n, c, d)?;
            let m = op.run(&ctx, &args)?;
            print_json(&serde_json::json!({
                "op": op.name(), "n": n, "args": args.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
                "value": m.value.to_string(), "steps": m.steps,
            }));
            Ok(EXIT_OK)
        }
        Cmd::Sweep {
            op,
            n,
            samples,
            seed,
            c,
            d,
        } => {
            let op = OpName::parse(&op)?;
            let cfg = SweepConfig {
                c,
                d,
                samples,
                seed,
            };
            let r = sweep(op, &parse_n_set(&n)?, &cfg)?;
            print_json(&r);
            Ok(if r.verdict_constant_query && r.verdict_linear_preproc {
                EXIT_OK
            } else {
                EXIT_VERDICT
            })
        }
        Cmd::Ca {
            demo,
            file,
            samples,
            seed,
            strict,
        } => {
            let ca = match (demo, file) {
                (Some(DemoName::Identity), _) => ca_compile::demos::identity_ca(),
                (Some(DemoName::Complement), _) => ca_compile::demos::complement_ca(),
                (Some(DemoName::Parity), _) => ca_compile::demos::parity_ca(),
                (None, Some(path)) => CellularAutomaton::from_json(&read(&path)?)?,
                (None, None) => {
                    return Err(HarnessError::Input("need --demo or --file".into()));
                }
            };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let words: Vec<Vec<State>> = (0..samples)
                .map(|_| {
                    let len = rng.gen_range(1..=12);
                    (0..len).map(|_| rng.gen_range(0..ca.gamma)).collect()
                })
                .collect();
            let verdict = check_contract(&ca, &words, strict);
            let ok = matches!(verdict, ContractVerdict::Compliant { .. });
            print_json(&CaReport {
                s: ca.s,
                c: ca.c,
                r: ca.r,
                verdict,
            });
            Ok(if ok { EXIT_OK } else { EXIT_VERDICT })
        }
        Cmd::Report {
            ops,
            n,
            samples,
            seed,
            c,
            d,
            csv,
        } => {
            let n_set = parse_n_set(&n)?;
            let cfg = SweepConfig {
                c,
                d,
                samples,
                seed,
            };
            let mut results = Vec::new();
            for name in ops.split(',') {
                results.push(sweep(OpName::parse(name.trim())?, &n_set, &cfg)?);
            }
            if csv {
                write_csv(&results, std::io::stdout().lock())?;
            } else {
                print_json(&results);
            }
            let ok = results
                .iter()
                .all(|r| r.verdict_constant_query && r.verdict_linear_preproc);
            Ok(if ok { EXIT_OK } else { EXIT_VERDICT })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.cmd) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e @ HarnessError::Query { .. }) => {
            eprintln!("{e}");
            ExitCode::from(EXIT_ORACLE as u8)
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(EXIT_INPUT as u8)
        }
    }
}
