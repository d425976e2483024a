// Copyright (c) 2026 ram-workbench contributors
// SPDX-License-Identifier: Apache-2.0

//! The acceptance gate: one test per criterion, each printing a single
//! PASS/FAIL line (run with `--nocapture` to see them on success).

use std::collections::HashMap;
use std::time::Instant;

use arith_lib::build::build_context;
use arith_lib::{query_cap, CapFamily, Val};
use ca_compile::automaton::ca_run;
use ca_compile::tables::{code_word, project_config};
use ca_compile::{build_ca_tables, demos, CellularAutomaton, State};
use harness_cli::corpus::{self, MIN_INPUT_CELLS};
use harness_cli::{oracle_check, sweep, OpName, OracleMode, SweepConfig};
use lowering::{
    check_faithful, lower_structured, repeat_wrapped, wrap_restorable, AnyProgram, Cond, SExpr,
    Stmt, StructuredProgram, Verdict, K_R_TO_AB,
};
use mem_ext::{LazyArray, TrieArray};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use ram_core::{parse_ab, run_ab, run_array, samples, InstrR, Limits, RamInput};

fn report(num: u32, name: &str, r: Result<String, String>) {
    match r {
        Ok(detail) => println!("[acceptance] criterion {num} ({name}): PASS — {detail}"),
        Err(e) => {
            println!("[acceptance] criterion {num} ({name}): FAIL — {e}");
            panic!("criterion {num} ({name}) failed: {e}");
        }
    }
}

// ---------------------------------------------------------------------------
// 1. Exhaustive oracle equivalence at N = 64, c = 8, d = 2.

const EXHAUSTIVE_OPS: [OpName; 15] = [
    OpName::Sum,
    OpName::Difference,
    OpName::Multiply,
    OpName::Divide,
    OpName::Mod,
    OpName::Division2,
    OpName::Logarithm,
    OpName::CthRoot2,
    OpName::CthRoot3,
    OpName::Xor,
    OpName::And,
    OpName::Or,
    OpName::Conc,
    OpName::Bit,
    OpName::Substring,
];

#[test]
fn criterion_1_exhaustive_oracle() {
    report(1, "exhaustive oracle at N=64", (|| {
        let start = Instant::now();
        let mut total = 0u64;
        for op in EXHAUSTIVE_OPS {
            let r = oracle_check(op, 64, 8, 2, OracleMode::Exhaustive)
                .map_err(|e| format!("{op}: {e}"))?;
            if !r.is_ok() {
                return Err(format!(
                    "{op}: {} mismatches, first: {:?}",
                    r.mismatches, r.first_mismatch
                ));
            }
            total += r.checked;
        }
        let secs = start.elapsed().as_secs_f64();
        if secs >= 300.0 {
            return Err(format!("took {secs:.0}s, budget is 300s"));
        }
        Ok(format!("{total} checks, 0 mismatches, {secs:.0}s"))
    })());
}

// ---------------------------------------------------------------------------
// 2. Constant-query verdict over N ∈ {2^7 .. 2^16}, 10^3 samples per N.

#[test]
fn criterion_2_constant_query() {
    report(2, "constant-query sweep", (|| {
        let n_set: Vec<u64> = (7..=16).map(|e| 1u64 << e).collect();
        let cfg = SweepConfig::default(); // c = 8, d = 2, 1000 samples
        let mut ops: Vec<OpName> = EXHAUSTIVE_OPS.to_vec();
        ops.extend([OpName::Exponential, OpName::GenRoot, OpName::CaComplement]);
        for op in ops {
            let r = sweep(op, &n_set, &cfg).map_err(|e| format!("{op}: {e}"))?;
            if !r.verdict_constant_query {
                return Err(format!("{op}: query steps grew: {:?}", r.query_steps_max));
            }
        }
        Ok("18 operations flat from N=2^7 to N=2^16".into())
    })());
}

// ---------------------------------------------------------------------------
// 3. Linear-preprocessing verdict per table family.

#[test]
fn criterion_3_linear_preprocessing() {
    report(3, "linear preprocessing per family", (|| {
        let n_set: Vec<u64> = (10..=16).map(|e| 1u64 << e).collect();
        let mut families = 0usize;

        let arith: Vec<_> = n_set
            .iter()
            .map(|&n| build_context(n, 8, 2).map_err(|e| format!("build {n}: {e}")))
            .collect::<Result<_, _>>()?;
        for (name, _) in &arith[0].build_steps {
            let steps: Vec<u64> = arith
                .iter()
                .map(|c| *c.build_steps.get(name).unwrap_or(&0))
                .collect();
            check_ratios(&format!("arith/{name}"), &n_set, &steps)?;
            families += 1;
        }
        let totals: Vec<u64> = arith.iter().map(|c| c.total_build_steps).collect();
        check_ratios("arith/total", &n_set, &totals)?;

        let ca: Vec<_> = n_set
            .iter()
            .map(|&n| {
                build_ca_tables(&demos::complement_ca(), n, 2).map_err(|e| format!("ca {n}: {e}"))
            })
            .collect::<Result<_, _>>()?;
        for (name, _) in &ca[0].build_steps {
            let steps: Vec<u64> = ca
                .iter()
                .map(|t| {
                    t.build_steps
                        .iter()
                        .find(|(k, _)| k == name)
                        .map_or(0, |(_, v)| *v)
                })
                .collect();
            check_ratios(&format!("ca/{name}"), &n_set, &steps)?;
            families += 1;
        }
        Ok(format!(
            "{families} table families stay within ratio {} per doubling",
            harness_cli::sweep::LINEAR_RATIO
        ))
    })());
}

fn check_ratios(family: &str, n_set: &[u64], steps: &[u64]) -> Result<(), String> {
    for w in 0..steps.len() - 1 {
        if n_set[w] < harness_cli::sweep::LINEAR_MIN_N {
            continue;
        }
        let (a, b) = (steps[w] as f64, steps[w + 1] as f64);
        if b > harness_cli::sweep::LINEAR_RATIO * a {
            return Err(format!(
                "{family}: steps({}) = {b} > {} × steps({}) = {a}",
                n_set[w + 1],
                harness_cli::sweep::LINEAR_RATIO,
                n_set[w]
            ));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// 4. Division budget is a fixed function of d alone.

#[test]
fn criterion_4_division_budget() {
    report(4, "division budget depends on d only", (|| {
        let mut recorded = Vec::new();
        for d in 2..=4u32 {
            // The 128-bit operand bound admits d = 4 only up to N = 2^14.
            let top = if d == 4 { 14 } else { 16 };
            let n_set: Vec<u64> = (10..=top).step_by(2).map(|e| 1u64 << e).collect();
            let cfg = SweepConfig {
                d,
                samples: 200,
                ..SweepConfig::default()
            };
            let r = sweep(OpName::Divide, &n_set, &cfg).map_err(|e| format!("d={d}: {e}"))?;
            let budget = query_cap(d, CapFamily::Divide);
            for (i, &mx) in r.query_steps_max.iter().enumerate() {
                if mx != budget {
                    return Err(format!(
                        "d={d}, N={}: max steps {mx} differs from the budget {budget}",
                        n_set[i]
                    ));
                }
            }
            recorded.push(format!("d={d}: {budget}"));
        }
        Ok(format!("recorded budgets {}", recorded.join(", ")))
    })());
}

// ---------------------------------------------------------------------------
// 5. Goldens: the encoding digit string, root constants, and the sample
//    accumulator/buffer program.

#[test]
fn criterion_5_goldens() {
    report(5, "published-value goldens", (|| {
        // (a) The γ-ary encoding of (N=13, X₁=7, X₂=9) reads (5,3,2,7)
        //     from most to least significant digit.
        let s = 10 as State;
        let mut delta = vec![0 as State; 1000];
        for l in 0..s {
            for c in 0..s {
                for r in 0..s {
                    delta[(l as usize * 10 + c as usize) * 10 + r as usize] =
                        if c == 8 { 8 } else { c };
                }
            }
        }
        let mut pi = vec![0u8; 10];
        pi[9] = 1;
        let ca = CellularAutomaton::new(s, delta, vec![9], pi, 1, 2)
            .map_err(|e| format!("golden automaton: {e}"))?;
        let w = code_word(&ca, 13, 1, &[7, 9]).map_err(|e| format!("code word: {e}"))?;
        if w != vec![7, 2, 3, 5] {
            return Err(format!("digit string (LSB first) is {w:?}, wanted [7, 2, 3, 5]"));
        }

        // (b) Root threshold constants: c₀ = 2 with c₀^{2c}+c₀^c = 72 at
        //     c = 3, and c₀ = 0 at c = 2.
        let ctx = build_context(1 << 10, 8, 2).map_err(|e| format!("build: {e}"))?;
        let t3 = ctx.cth_root_tables(3).map_err(|e| e.to_string())?;
        let thr = (t3.c0 as Val).pow(6) + (t3.c0 as Val).pow(3);
        if t3.c0 != 2 || thr != 72 {
            return Err(format!("c=3: c0 = {}, c0^6 + c0^3 = {thr}, wanted 2 and 72", t3.c0));
        }
        let t2 = ctx.cth_root_tables(2).map_err(|e| e.to_string())?;
        if t2.c0 != 0 {
            return Err(format!("c=2: c0 = {}, wanted 0", t2.c0));
        }

        // (c) The sample accumulator/buffer program outputs I[1] on
        //     N = 3, I = [2, 1, 0].
        let p = parse_ab(samples::OUTPUT_I1_AB).map_err(|e| format!("parse: {e}"))?;
        let input = RamInput::new(vec![2, 1, 0], 8).map_err(|e| format!("input: {e}"))?;
        let r = run_ab(&p, &input, Limits::default()).map_err(|e| format!("run: {e}"))?;
        if !r.halted || r.outputs != vec![1] {
            return Err(format!("outputs {:?}, wanted [1]", r.outputs));
        }
        Ok("encoding digits, root constants, and sample program all match".into())
    })());
}

// ---------------------------------------------------------------------------
// 6. Lowering faithfulness on a 50-program corpus, plus fault detection.

fn wide() -> Limits {
    Limits {
        c: 1 << 30,
        max_steps: 200_000_000,
    }
}

#[test]
fn criterion_6_lowering_faithfulness() {
    report(6, "lowering faithfulness on the corpus", (|| {
        let mut rng = StdRng::seed_from_u64(0xacce_97ed);
        let mut fault_detected = false;
        for prog_idx in 0..50 {
            let sp = corpus::random_program(&mut rng);
            let p = corpus::pipeline(&sp).map_err(|e| format!("program {prog_idx}: {e}"))?;
            let inputs: Vec<RamInput> = (0..20)
                .map(|_| corpus::random_input(&mut rng, MIN_INPUT_CELLS))
                .collect();

            let v1 = check_faithful(
                &AnyProgram::Array(p.array.clone()),
                &AnyProgram::R(p.r.clone()),
                &p.emap_array_to_r,
                &inputs,
                wide(),
                wide(),
            );
            let v2 = check_faithful(
                &AnyProgram::R(p.r.clone()),
                &AnyProgram::Ab(p.ab.clone()),
                &p.emap_r_to_ab,
                &inputs,
                wide(),
                wide(),
            );
            for (pass, v, k) in [
                ("array→R", &v1, p.emap_array_to_r.k),
                ("R→AB", &v2, p.emap_r_to_ab.k),
            ] {
                match v {
                    Verdict::Ok {
                        max_expansion_observed,
                        ..
                    } => {
                        if *max_expansion_observed > k {
                            return Err(format!(
                                "program {prog_idx} {pass}: expansion {max_expansion_observed} > k = {k}"
                            ));
                        }
                    }
                    Verdict::Counterexample { detail, .. } => {
                        return Err(format!("program {prog_idx} {pass}: {detail}"))
                    }
                }
            }
            // Step expansion across the whole pipeline stays within the
            // product of the per-pass bounds.
            let bound = (p.emap_array_to_r.k * p.emap_r_to_ab.k) as u64;
            for input in &inputs {
                let a = run_array(&p.array, input, wide()).map_err(|e| e.to_string())?;
                let ab = run_ab(&p.ab, input, wide()).map_err(|e| e.to_string())?;
                if ab.steps > bound * a.steps {
                    return Err(format!(
                        "program {prog_idx}: {} AB steps > {bound} × {} array steps",
                        ab.steps, a.steps
                    ));
                }
            }
            if p.emap_r_to_ab.k != K_R_TO_AB {
                return Err(format!("R→AB k = {}, wanted {K_R_TO_AB}", p.emap_r_to_ab.k));
            }

            // Inject a register swap into the R target and require detection.
            if !fault_detected {
                for (idx, instr) in p.r.instructions.iter().enumerate() {
                    let InstrR::Move(i, j) = instr else { continue };
                    if i == j {
                        continue;
                    }
                    let mut faulty = p.r.clone();
                    faulty.instructions[idx] = InstrR::Move(*j, *i);
                    let v = check_faithful(
                        &AnyProgram::Array(p.array.clone()),
                        &AnyProgram::R(faulty),
                        &p.emap_array_to_r,
                        &inputs,
                        wide(),
                        wide(),
                    );
                    if !v.is_ok() {
                        fault_detected = true;
                        break;
                    }
                }
            }
        }
        if !fault_detected {
            return Err("no injected register swap was detected".into());
        }
        Ok("50 programs × 20 inputs faithful; injected register swap detected".into())
    })());
}

// ---------------------------------------------------------------------------
// 7. Restore discipline: wrapped procedures leave memory bit-identical.

fn wrap_candidates() -> Vec<StructuredProgram> {
    let var = |n: &str| SExpr::Var(n.into());
    let lit = |v: u64| SExpr::Lit(v);
    let add = |a: SExpr, b: SExpr| SExpr::Add(Box::new(a), Box::new(b));
    let cell = |a: &str, i: SExpr| SExpr::Cell(a.into(), Box::new(i));
    let input = |i: SExpr| SExpr::Input(Box::new(i));
    vec![
        // Array writes driven by a bounded loop over input values.
        StructuredProgram {
            vars: vec!["x".into(), "y".into()],
            arrays: vec!["T".into()],
            funcs: vec![],
            body: vec![
                Stmt::AssignVar("x".into(), add(input(lit(0)), input(lit(1)))),
                Stmt::AssignCell("T".into(), lit(3), var("x")),
                Stmt::ForUp {
                    var: "y".into(),
                    from: lit(0),
                    to: lit(3),
                    body: vec![Stmt::AssignCell(
                        "T".into(),
                        var("y"),
                        add(cell("T", var("y")), input(var("y"))),
                    )],
                },
                Stmt::Return(add(cell("T", lit(3)), var("y"))),
            ],
        },
        // While loop scanning an input-bounded prefix.
        StructuredProgram {
            vars: vec!["x".into(), "y".into()],
            arrays: vec!["T".into()],
            funcs: vec![],
            body: vec![
                Stmt::AssignVar("x".into(), input(lit(2))),
                Stmt::AssignVar("y".into(), lit(0)),
                Stmt::While(
                    Cond::NotEqual(var("y"), var("x")),
                    vec![
                        Stmt::AssignCell("T".into(), var("y"), input(var("y"))),
                        Stmt::AssignVar("y".into(), add(var("y"), lit(1))),
                    ],
                ),
                Stmt::Return(cell("T", lit(0))),
            ],
        },
        // Conditional writes over two arrays.
        StructuredProgram {
            vars: vec!["x".into()],
            arrays: vec!["T".into(), "U".into()],
            funcs: vec![],
            body: vec![
                Stmt::AssignVar("x".into(), input(lit(0))),
                Stmt::If(
                    Cond::Equal(var("x"), lit(0)),
                    vec![Stmt::AssignCell("T".into(), lit(1), lit(7))],
                    vec![Stmt::AssignCell("U".into(), var("x"), var("x"))],
                ),
                Stmt::AssignCell("T".into(), lit(2), add(var("x"), lit(5))),
                Stmt::Return(cell("T", lit(2))),
            ],
        },
    ]
}

#[test]
fn criterion_7_restore_discipline() {
    report(7, "restore discipline over 100 calls", (|| {
        let mut rng = StdRng::seed_from_u64(0x7e57);
        for (pi, proc) in wrap_candidates().iter().enumerate() {
            let wrapped = wrap_restorable(proc).map_err(|e| format!("proc {pi}: {e}"))?;
            let repeated = repeat_wrapped(&wrapped, 100);
            let lowered = lower_structured(&repeated).map_err(|e| format!("proc {pi}: {e}"))?;
            for _ in 0..5 {
                let cells: Vec<u64> = (0..8).map(|_| rng.gen_range(0..8)).collect();
                let input = RamInput::new(cells, 8).map_err(|e| e.to_string())?;
                let limits = Limits {
                    c: 1 << 20,
                    max_steps: 100_000_000,
                };
                let r = run_array(&lowered.program, &input, limits)
                    .map_err(|e| format!("proc {pi}: {e}"))?;
                if !r.halted || r.outputs.len() != 100 {
                    return Err(format!("proc {pi}: {} outputs of 100", r.outputs.len()));
                }
                if r.outputs.iter().any(|&o| o != r.outputs[0]) {
                    return Err(format!("proc {pi}: call results diverged: {:?}", r.outputs));
                }
                // Declared state must be restored to its initial (zero)
                // image, bit for bit.
                for name in &proc.vars {
                    let v = r.final_config.var(lowered.layout.var_indices[name]);
                    if v != 0 {
                        return Err(format!("proc {pi}: variable {name} left at {v}"));
                    }
                }
                for name in &proc.arrays {
                    let t = lowered.layout.arr_indices[name];
                    for ((arr, idx), &v) in &r.final_config.arrays {
                        if *arr == t && v != 0 {
                            return Err(format!("proc {pi}: {name}[{idx}] left at {v}"));
                        }
                    }
                }
            }
        }
        Ok("3 wrapped procedures × 5 inputs × 100 calls, memory restored".into())
    })());
}

// ---------------------------------------------------------------------------
// 8. CA end-to-end: block tables equal the direct simulation.

#[test]
fn criterion_8_ca_end_to_end() {
    report(8, "block tables equal direct simulation", (|| {
        let demos = [
            ("identity", demos::identity_ca()),
            ("complement", demos::complement_ca()),
            ("parity", demos::parity_ca()),
        ];
        let mut cells = 0usize;
        let mut rng = StdRng::seed_from_u64(0xca5e);
        for (name, ca) in &demos {
            for e in 7..=16 {
                let n = 1u64 << e;
                let t = match build_ca_tables(ca, n, 2) {
                    Ok(t) => t,
                    Err(_) => continue, // build budget does not admit this N
                };
                for _ in 0..100 {
                    let x: u128 = rng.gen_range(0..t.limit);
                    let got = t
                        .ca_op(&[x])
                        .map_err(|e| format!("{name} N={n} x={x}: {e}"))?
                        .value;
                    let word =
                        code_word(ca, n, 2, &[x]).map_err(|e| format!("{name} N={n}: {e}"))?;
                    let cfg = ca_run(ca, &word, ca.c as u64 * t.big_l as u64);
                    let want = project_config(ca, &cfg);
                    if got != want {
                        return Err(format!("{name} N={n} x={x}: table {got} ≠ direct {want}"));
                    }
                }
                cells += 1;
            }
        }
        Ok(format!("{cells} (demo, N) cells × 100 tuples agree"))
    })());
}

// ---------------------------------------------------------------------------
// 9. Memory extensions: lazy arrays over garbage, trie flatness.

#[test]
fn criterion_9_memory_extensions() {
    report(9, "lazy and trie memory extensions", (|| {
        // LazyArray over garbage storage versus a zero-initialized map.
        let (rows, cols) = (512u64, 512u64);
        let mut rng = StdRng::seed_from_u64(0x1a2b);
        let cells = (rows * cols) as usize;
        let garbage: Vec<u64> = (0..cells).map(|_| rng.gen()).collect();
        let g_rank: Vec<u64> = (0..cells).map(|_| rng.gen()).collect();
        let g_inv: Vec<(u64, u64)> = (0..=cells).map(|_| (rng.gen(), rng.gen())).collect();
        let mut lazy = LazyArray::from_garbage(rows, cols, garbage, g_rank, g_inv)
            .map_err(|e| e.to_string())?;
        let mut map: HashMap<(u64, u64), u64> = HashMap::new();
        for op in 0..100_000 {
            let (i, j) = (rng.gen_range(0..rows), rng.gen_range(0..cols));
            if rng.gen_bool(0.5) {
                let x = rng.gen_range(0..1_000_000u64);
                lazy.store(i, j, x).map_err(|e| e.to_string())?;
                map.insert((i, j), x);
            } else {
                let got = lazy.fetch(i, j).map_err(|e| e.to_string())?;
                let want = map.get(&(i, j)).copied().unwrap_or(0);
                if got != want {
                    return Err(format!("lazy op {op}: [{i}][{j}] = {got}, wanted {want}"));
                }
            }
        }

        // TrieArray versus a map oracle at k = 3, d = 2, N = 2^12.
        let n = 1u64 << 12;
        let mut trie = TrieArray::new(n, 32, 3, 2).map_err(|e| e.to_string())?;
        let mut oracle: HashMap<[u64; 3], u64> = HashMap::new();
        for op in 0..10_000 {
            let key = [
                rng.gen_range(0..n),
                rng.gen_range(0..n),
                rng.gen_range(0..n),
            ];
            if rng.gen_bool(0.5) {
                let x = rng.gen_range(0..n);
                trie.set(&key, x).map_err(|e| e.to_string())?;
                oracle.insert(key, x);
            } else {
                let got = trie.get(&key).map_err(|e| e.to_string())?.value;
                let want = oracle.get(&key).copied().unwrap_or(0);
                if got != want {
                    return Err(format!("trie op {op}: {key:?} = {got}, wanted {want}"));
                }
            }
        }

        // Access step counts stay flat across N ∈ {2^10, 2^12, 2^14}.
        let mut maxima = Vec::new();
        for e in [10u32, 12, 14] {
            let mut t = TrieArray::new(1 << e, 32, 3, 2).map_err(|e| e.to_string())?;
            let mut mx = 0u64;
            for i in 0..100u64 {
                let key = [i * 13 % 1000, i * 7 % 900, i * 29 % 997];
                mx = mx.max(t.set(&key, i).map_err(|e| e.to_string())?.steps);
                mx = mx.max(t.get(&key).map_err(|e| e.to_string())?.steps);
            }
            maxima.push(mx);
        }
        if maxima[1] > maxima[0] || maxima[2] > maxima[0] {
            return Err(format!("trie access steps grew with N: {maxima:?}"));
        }
        Ok(format!(
            "10^5 lazy ops and 10^4 trie ops match; trie step maxima {maxima:?}"
        ))
    })());
}
