// Copyright (c) 2026 ram-workbench contributors
// SPDX-License-Identifier: Apache-2.0

//! Block-simulation tables: compile a contract-conforming automaton into
//! constant-time evaluation of its operation.
//!
//! With L the bit length of N^d and D = 1+⌊3d·log₂ s⌋, the configuration is
//! cut into blocks of ℓ = ⌈L/D⌉ cells. A block triple has s^{3ℓ} = O(N^σ)
//! encodings with σ < 1, so a lookup table LT mapping a triple to the middle
//! block t steps later fits the linear preprocessing budget, and a query
//! replays the whole c·L-step run as c0 = ⌈cL/ℓ⌉ rounds of at most c·D
//! table lookups.

use arith_lib::{Meter, Metered};

use crate::{CaError, CaResult, CellularAutomaton, State, WordConfig};

/// Linear budget: building the tables must take at most this many steps
/// per unit of N.
pub const BUILD_BUDGET_FACTOR: u64 = 1 << 14;

/// Hard cap on lookup-table entries, to keep host allocations sane.
const MAX_LT_ENTRIES: u128 = 1 << 26;

/// All lookup tables for one (automaton, N, d) instance.
#[derive(Debug, Clone)]
pub struct CaTables {
    pub ca: CellularAutomaton,
    pub n: u64,
    pub d: u32,
    /// N^d; operands must stay below it.
    pub limit: u128,
    /// L: bit length of N^d — the encoded word length.
    pub big_l: u32,
    /// D = 1 + ⌊3d·log₂ s⌋.
    pub big_d: u32,
    /// Block width ℓ = ⌈L/D⌉.
    pub ell: u32,
    /// Global rounds c0 = ⌈cL/ℓ⌉.
    pub c0: u32,
    /// Input blocks c1 = ⌈L/ℓ⌉.
    pub c1: u32,
    /// Residual final round ρ = cL − (c0−1)ℓ.
    pub rho: u32,
    /// Residual input block width λ = L − (c1−1)ℓ.
    pub lambda: u32,
    /// Steps spent building, per table and in total.
    pub build_steps: Vec<(String, u64)>,
    pub total_build_steps: u64,

    /// LT[t][B] for t ∈ 1..=ℓ: middle block of triple B after t steps.
    lt: Vec<u64>,
    lt_stride: usize,
    /// CODE[λ][X₀]..[X_r]: γ-ary block digits of λ-bit operand chunks.
    code: Vec<u64>,
    code_off: Vec<usize>,
    /// CONVERT[λ][B]: the base-γ digit string of B reread in base s.
    convert: Vec<u64>,
    convert_off: Vec<usize>,
    /// PROJECT[B]: π applied digit-wise to a base-s block, read as bits.
    project: Vec<u64>,
    /// PI[q]: the projection table itself.
    pub pi: Vec<u8>,
    s_pow: Vec<u64>,
}

fn bit_len(x: u128) -> u32 {
    128 - x.leading_zeros()
}

/// ⌊x^{1/e}⌋ by binary search.
fn nth_root_floor(x: u128, e: u32) -> u128 {
    if e == 1 || x <= 1 {
        return x;
    }
    let mut lo: u128 = 0;
    let mut hi: u128 = 1 << (bit_len(x) / e + 1);
    while lo + 1 < hi {
        let mid = lo + (hi - lo) / 2;
        match mid.checked_pow(e) {
            Some(p) if p <= x => lo = mid,
            _ => hi = mid,
        }
    }
    lo
}

/// Derived block parameters for an automaton at size N and degree d.
struct Params {
    limit: u128,
    big_l: u32,
    big_d: u32,
    ell: u32,
    c0: u32,
    c1: u32,
    rho: u32,
    lambda: u32,
}

fn derive_params(ca: &CellularAutomaton, n: u64, d: u32) -> CaResult<Params> {
    if n < 2 {
        return Err(CaError::Domain(format!("N = {n} must be at least 2")));
    }
    if d < 1 {
        return Err(CaError::Domain("degree d must be at least 1".into()));
    }
    let limit = (n as u128)
        .checked_pow(d)
        .ok_or_else(|| CaError::Domain(format!("N^d does not fit 128 bits (N={n}, d={d})")))?;
    let big_l = bit_len(limit);
    let big_d = match (ca.s as u128).checked_pow(3 * d) {
        Some(p) => 1 + p.ilog2(),
        None => 1 + (3.0 * d as f64 * (ca.s as f64).log2()).floor() as u32,
    };
    let ell = big_l.div_ceil(big_d);
    let cl = ca.c * big_l;
    let c0 = cl.div_ceil(ell);
    let c1 = big_l.div_ceil(ell);
    let rho = cl - (c0 - 1) * ell;
    let lambda = big_l - (c1 - 1) * ell;
    debug_assert!(rho >= 1 && rho <= ell && lambda >= 1 && lambda <= ell);
    debug_assert!(c1 <= big_d && c0 <= ca.c * big_d);
    if cl + ell > 120 {
        return Err(CaError::Domain(format!(
            "output of c·L + ℓ = {} bits exceeds the 128-bit word",
            cl + ell
        )));
    }
    Ok(Params {
        limit,
        big_l,
        big_d,
        ell,
        c0,
        c1,
        rho,
        lambda,
    })
}

/// Upper estimate of the build cost for block width ℓ (dominant LT term
/// plus the small encoder tables); used for the budget gate.
fn estimate_steps(ca: &CellularAutomaton, ell: u32) -> Option<u128> {
    let s = ca.s as u128;
    let lt_entries = s.checked_pow(3 * ell)?;
    if lt_entries > MAX_LT_ENTRIES {
        return None;
    }
    let l128 = ell as u128;
    let mut total = lt_entries.checked_mul(3 * l128 + 4 * l128 * l128)?;
    for lam in 1..=ell {
        let w = 1u128.checked_shl(lam * (ca.r + 1))?;
        total = total.checked_add(w * lam as u128 * (ca.r as u128 + 2))?;
        total = total.checked_add((ca.gamma as u128).pow(lam) * lam as u128)?;
    }
    total = total.checked_add(s.pow(ell) * l128)?;
    total = total.checked_add(s * s * s + s)?;
    Some(total)
}

/// Smallest N′ ≥ the requested N whose budget C·N′ covers the build cost.
fn minimum_admissible(ca: &CellularAutomaton, n: u64, d: u32) -> u64 {
    let start_l = match derive_params(ca, n, d) {
        Ok(p) => p.big_l,
        Err(_) => return u64::MAX,
    };
    for big_l in start_l..start_l + 256 {
        if big_l as u64 >= 120 {
            break;
        }
        let big_d = match (ca.s as u128).checked_pow(3 * d) {
            Some(p) => 1 + p.ilog2(),
            None => 1 + (3.0 * d as f64 * (ca.s as f64).log2()).floor() as u32,
        };
        let ell = big_l.div_ceil(big_d);
        let Some(est) = estimate_steps(ca, ell) else {
            continue;
        };
        // N range producing this L, intersected with the budget demand.
        let n_hi = nth_root_floor((1u128 << big_l) - 1, d);
        let n_lo = if big_l == 1 {
            1
        } else {
            nth_root_floor((1u128 << (big_l - 1)) - 1, d) + 1
        };
        let need = est.div_ceil(BUILD_BUDGET_FACTOR as u128);
        let candidate = need.max(n_lo).max(n as u128);
        if candidate <= n_hi {
            return candidate as u64;
        }
    }
    u64::MAX
}

/// Builds every lookup table for `ca` at size N and degree d.
///
/// Precondition: `ca` passed [`crate::check_linear_contract`] on a sample
/// set covering word length L.
pub fn build_ca_tables(ca: &CellularAutomaton, n: u64, d: u32) -> CaResult<CaTables> {
    let p = derive_params(ca, n, d)?;
    let est = estimate_steps(ca, p.ell);
    let fits = est.is_some_and(|e| e <= BUILD_BUDGET_FACTOR as u128 * n as u128);
    if !fits {
        return Err(CaError::BuildTooSmall {
            requested: n,
            minimum: minimum_admissible(ca, n, d),
        });
    }

    let s = ca.s as u64;
    let su = ca.s as usize;
    let ell = p.ell as usize;
    let m3 = 3 * ell;
    let mut s_pow = vec![1u64; m3 + 1];
    for i in 1..=m3 {
        s_pow[i] = s_pow[i - 1] * s;
    }
    let mut build_steps: Vec<(String, u64)> = Vec::new();
    let mut total = 0u64;
    let mut record = |name: &str, m: Meter| {
        let steps = m.done(()).steps;
        total += steps;
        build_steps.push((name.to_string(), steps));
    };

    // DELTA: the rule table itself, charged as one copy (kept inside the
    // automaton, which the tables carry whole).
    let mut m = Meter::new();
    m.tick_n((su * su * su) as u64);
    record("DELTA", m);

    // LT: simulate every isolated block triple for ℓ steps, recording the
    // middle block after each step. At time t only cells t..3ℓ−1−t are
    // determined by the triple, which always covers the middle block.
    let mut m = Meter::new();
    let stride = s_pow[m3] as usize;
    let mut lt = vec![0u64; stride * ell];
    let mut cells = vec![0 as State; m3];
    let mut next = vec![0 as State; m3];
    for b in 0..stride {
        let mut v = b as u64;
        for x in 0..m3 {
            cells[x] = (v % s) as State;
            v /= s;
        }
        m.tick_n(m3 as u64);
        for t in 1..=ell {
            for x in t..m3 - t {
                next[x] = ca.rule(cells[x + 1], cells[x], cells[x - 1]);
            }
            m.tick_n((m3 - 2 * t) as u64);
            let mut enc = 0u64;
            for x in (ell..2 * ell).rev() {
                enc = enc * s + next[x] as u64;
            }
            m.tick_n(ell as u64);
            lt[(t - 1) * stride + b] = enc;
            std::mem::swap(&mut cells, &mut next);
        }
    }
    record("LT", m);

    // CODE: λ-bit operand chunks → the γ-ary digit string interleaving one
    // bit per operand track, for every chunk width λ ≤ ℓ.
    let mut m = Meter::new();
    let tracks = ca.r as usize + 1;
    let mut code = Vec::new();
    let mut code_off = vec![0usize; ell + 1];
    for lam in 1..=ell {
        code_off[lam] = code.len();
        let w = 1usize << lam;
        let entries = w.pow(tracks as u32);
        for idx in 0..entries {
            let mut chunks = [0usize; 16];
            let mut rest = idx;
            for i in (0..tracks).rev() {
                chunks[i] = rest % w;
                rest /= w;
            }
            let mut val = 0u64;
            for j in (0..lam).rev() {
                let mut digit = 0u64;
                for (i, &ch) in chunks[..tracks].iter().enumerate() {
                    digit += (((ch >> j) & 1) as u64) << i;
                }
                val = val * ca.gamma as u64 + digit;
            }
            m.tick_n((lam * (tracks + 1)) as u64);
            code.push(val);
        }
    }
    record("CODE", m);

    // CONVERT: reread a base-γ digit string as the same digits in base s.
    let mut m = Meter::new();
    let mut convert = Vec::new();
    let mut convert_off = vec![0usize; ell + 1];
    for lam in 1..=ell {
        convert_off[lam] = convert.len();
        let entries = (ca.gamma as usize).pow(lam as u32);
        for b in 0..entries {
            let mut v = b;
            let mut val = 0u64;
            let mut place = 1u64;
            for _ in 0..lam {
                val += (v % ca.gamma as usize) as u64 * place;
                v /= ca.gamma as usize;
                place *= s;
            }
            m.tick_n(lam as u64);
            convert.push(val);
        }
    }
    record("CONVERT", m);

    // PROJECT: π applied to each base-s digit of a block, read as bits.
    let mut m = Meter::new();
    let mut project = vec![0u64; s_pow[ell] as usize];
    for (b, slot) in project.iter_mut().enumerate() {
        let mut v = b as u64;
        let mut val = 0u64;
        for j in 0..ell {
            val |= (ca.pi[(v % s) as usize] as u64) << j;
            v /= s;
        }
        m.tick_n(ell as u64);
        *slot = val;
    }
    record("PROJECT", m);

    let mut m = Meter::new();
    let pi = ca.pi.clone();
    m.tick_n(su as u64);
    record("PI", m);

    Ok(CaTables {
        ca: ca.clone(),
        n,
        d,
        limit: p.limit,
        big_l: p.big_l,
        big_d: p.big_d,
        ell: p.ell,
        c0: p.c0,
        c1: p.c1,
        rho: p.rho,
        lambda: p.lambda,
        build_steps,
        total_build_steps: total,
        lt,
        lt_stride: stride,
        code,
        code_off,
        convert,
        convert_off,
        project,
        pi,
        s_pow,
    })
}

impl CaTables {
    fn code_at(&self, lam: u32, chunks: &[u64]) -> u64 {
        let w = 1u64 << lam;
        let mut idx = 0u64;
        for &ch in chunks {
            idx = idx * w + ch;
        }
        self.code[self.code_off[lam as usize] + idx as usize]
    }

    fn convert_at(&self, lam: u32, b: u64) -> u64 {
        self.convert[self.convert_off[lam as usize] + b as usize]
    }

    fn lt_at(&self, t: u32, b: u64) -> u64 {
        self.lt[(t as usize - 1) * self.lt_stride + b as usize]
    }

    /// The all-♯ block encoding: every base-s digit equals ♯.
    fn sharp_block(&self) -> u64 {
        let mut v = 0u64;
        for j in 0..self.ell as usize {
            v += self.ca.sharp as u64 * self.s_pow[j];
        }
        v
    }

    /// Runs the blocked simulation, returning every BK row: row t holds the
    /// block encodings at time tℓ (time cL for the last row). Steps are
    /// metered against the N-independent caps D and c·D, so the charge for a
    /// query depends only on (automaton, d, r).
    fn run_blocks(&self, m: &mut Meter, xs: &[u128]) -> CaResult<Vec<Vec<u64>>> {
        if xs.len() != self.ca.r as usize {
            return Err(CaError::Domain(format!(
                "expected {} operands, got {}",
                self.ca.r,
                xs.len()
            )));
        }
        for (i, &x) in xs.iter().enumerate() {
            if x >= self.limit {
                return Err(CaError::OperandOutOfRange {
                    index: i + 1,
                    value: x,
                    limit: self.limit,
                });
            }
        }
        let c0 = self.c0 as usize;
        let c1 = self.c1 as usize;
        let c0cap = (self.ca.c * self.big_d) as u64;
        let c1cap = self.big_d as u64;
        let ell = self.ell;
        let mask = (1u128 << ell) - 1;

        // Cut every operand (with X₀ = N) into c1 chunks of ℓ bits, the last
        // one λ bits wide.
        let tracks = self.ca.r as usize + 1;
        let mut chunk = vec![vec![0u64; c1 + 1]; tracks];
        for (j, row) in chunk.iter_mut().enumerate() {
            let mut v = if j == 0 { self.n as u128 } else { xs[j - 1] };
            for x in 1..=c1 {
                row[x] = (v & mask) as u64;
                v >>= ell;
                m.tick_n(2);
            }
            m.tick_n(2 * (c1cap - c1 as u64));
        }

        // Encode each chunk column through CODE, then CONVERT, and pad the
        // word out to c0+2 blocks of ♯. The ♯-block encodings are built-in
        // constants of the tables, charged as single loads.
        let sh = self.sharp_block();
        m.tick();
        let mut row0 = vec![sh; c0 + 2];
        for x in 1..=c1 {
            let lam = if x == c1 { self.lambda } else { ell };
            let cols: Vec<u64> = (0..tracks).map(|j| chunk[j][x]).collect();
            let u = self.code_at(lam, &cols);
            let mut b = self.convert_at(lam, u);
            if x == c1 {
                // Top digits of the last input block are already ♯; the
                // filler is another built-in constant.
                for j in self.lambda..ell {
                    b += self.ca.sharp as u64 * self.s_pow[j as usize];
                }
            }
            row0[x] = b;
            m.tick_n(tracks as u64 + 4);
        }
        m.tick_n((tracks as u64 + 4) * (c1cap - c1 as u64));

        // c0−1 rounds of ℓ steps and one final round of ρ steps, each a
        // single LT lookup per block.
        let mut rows = vec![row0];
        for t in 1..=c0 {
            let prev = rows.last().unwrap();
            let mut row = vec![sh; c0 + 2];
            let depth = if t == c0 { self.rho } else { ell };
            for x in 1..=c0 {
                let b = prev[x + 1] * self.s_pow[2 * ell as usize]
                    + prev[x] * self.s_pow[ell as usize]
                    + prev[x - 1];
                row[x] = self.lt_at(depth, b);
                m.tick_n(4);
            }
            m.tick_n(4 * (c0cap - c0 as u64));
            rows.push(row);
        }
        m.tick_n(4 * c0cap * (c0cap - c0 as u64));
        Ok(rows)
    }

    /// Evaluates the automaton's operation on X₁..X_r in constant time:
    /// replays the c·L-step run through the LT table and projects the final
    /// configuration to the output integer.
    pub fn ca_op(&self, xs: &[u128]) -> CaResult<Metered<u128>> {
        let mut m = Meter::new();
        let rows = self.run_blocks(&mut m, xs)?;
        let last = rows.last().unwrap();
        let mut out: u128 = 0;
        for x in (1..=self.c0 as usize).rev() {
            out = (out << self.ell) + self.project[last[x] as usize] as u128;
            m.tick_n(2);
        }
        m.tick_n(2 * ((self.ca.c * self.big_d) as u64 - self.c0 as u64));
        Ok(m.done(out))
    }

    /// Test/diagnostic access to every BK row (unmetered).
    pub fn block_rows(&self, xs: &[u128]) -> CaResult<Vec<Vec<u64>>> {
        let mut m = Meter::new();
        self.run_blocks(&mut m, xs)
    }

    /// Encodes the configuration of `cfg` restricted to block x (cells
    /// (x−1)ℓ..xℓ−1) as a base-s number, for cross-checking BK rows.
    pub fn encode_block(&self, cfg: &WordConfig, x: usize) -> u64 {
        let ell = self.ell as usize;
        let lo = (x - 1) * ell;
        let mut enc = 0u64;
        for j in (0..ell).rev() {
            enc = enc * self.ca.s as u64 + cfg.get((lo + j) as isize, self.ca.sharp) as u64;
        }
        enc
    }
}

/// The encoded input word code(N, X₁..X_r): cell j carries bit j of every
/// operand, one track per operand, with N on track 0; length L.
pub fn code_word(ca: &CellularAutomaton, n: u64, d: u32, xs: &[u128]) -> CaResult<Vec<State>> {
    if xs.len() != ca.r as usize {
        return Err(CaError::Domain(format!(
            "expected {} operands, got {}",
            ca.r,
            xs.len()
        )));
    }
    let limit = (n as u128)
        .checked_pow(d)
        .ok_or_else(|| CaError::Domain("N^d does not fit 128 bits".into()))?;
    for (i, &x) in xs.iter().enumerate() {
        if x >= limit {
            return Err(CaError::OperandOutOfRange {
                index: i + 1,
                value: x,
                limit,
            });
        }
    }
    let len = bit_len(limit) as usize;
    Ok((0..len)
        .map(|j| {
            let mut digit = ((n >> j) & 1) as State;
            for (i, &x) in xs.iter().enumerate() {
                digit += (((x >> j) & 1) as State) << (i + 1);
            }
            digit
        })
        .collect())
}

/// π-projection of a configuration to its output integer.
pub fn project_config(ca: &CellularAutomaton, cfg: &WordConfig) -> u128 {
    cfg.cells
        .iter()
        .enumerate()
        .map(|(j, &q)| (ca.pi[q as usize] as u128) << j)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::ca_run;
    use crate::demos;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn code_word_matches_published_encoding() {
        // code(N=13, X₁=7, X₂=9) has γ-digit string (u₃,u₂,u₁,u₀) = (5,3,2,7).
        let ca = CellularAutomaton::new(
            10,
            {
                let s = 10usize;
                let mut delta = vec![0 as State; s * s * s];
                for l in 0..s as State {
                    for c in 0..s as State {
                        for r in 0..s as State {
                            let v = if c == 8 { 8 } else { c };
                            delta[(l as usize * s + c as usize) * s + r as usize] = v;
                        }
                    }
                }
                delta
            },
            vec![9],
            vec![0, 0, 0, 0, 0, 0, 0, 0, 0, 1],
            1,
            2,
        )
        .unwrap();
        let w = code_word(&ca, 13, 1, &[7, 9]).unwrap();
        assert_eq!(w, vec![7, 2, 3, 5]);
    }

    #[test]
    fn lt_matches_direct_simulation_on_random_triples() {
        let ca = demos::parity_ca();
        let t = build_ca_tables(&ca, 4096, 2).unwrap();
        let ell = t.ell as usize;
        let mut rng = StdRng::seed_from_u64(0x5eed_0001);
        for _ in 0..100 {
            let b: u64 = rng.gen_range(0..t.lt_stride as u64);
            // Decompose into 3ℓ cells and simulate directly.
            let mut cells = Vec::with_capacity(3 * ell);
            let mut v = b;
            for _ in 0..3 * ell {
                cells.push((v % ca.s as u64) as State);
                v /= ca.s as u64;
            }
            for depth in 1..=t.ell {
                let cfg = ca_run(&ca, &cells, depth as u64);
                let mut enc = 0u64;
                for x in (ell..2 * ell).rev() {
                    enc = enc * ca.s as u64 + cfg.get(x as isize, ca.sharp) as u64;
                }
                assert_eq!(t.lt_at(depth, b), enc, "triple {b} depth {depth}");
            }
        }
    }

    #[test]
    fn project_of_all_sharp_block_is_zero() {
        let ca = demos::identity_ca();
        let t = build_ca_tables(&ca, 5000, 1).unwrap();
        assert_eq!(t.project[t.sharp_block() as usize], 0);
    }

    #[test]
    fn convert_keeps_digits() {
        let ca = demos::identity_ca();
        let t = build_ca_tables(&ca, 5000, 1).unwrap();
        // Digit string (3,1) base γ=4 is 13; base s=8 it is 25.
        assert_eq!(t.convert_at(2, 13), 25);
    }

    #[test]
    fn ca_op_matches_projection_of_direct_run() {
        for (ca, n, d) in [
            (demos::identity_ca(), 5000u64, 1u32),
            (demos::complement_ca(), 200, 1),
            (demos::parity_ca(), 4096, 2),
        ] {
            let t = build_ca_tables(&ca, n, d).unwrap();
            let mut rng = StdRng::seed_from_u64(0x5eed_0002);
            for _ in 0..100 {
                let x1 = rng.gen_range(0..t.limit);
                let w = code_word(&ca, n, d, &[x1]).unwrap();
                let direct = ca_run(&ca, &w, (ca.c * t.big_l) as u64);
                let want = project_config(&ca, &direct);
                assert_eq!(t.ca_op(&[x1]).unwrap().value, want, "N={n} X1={x1}");
            }
        }
    }

    #[test]
    fn ca_op_matches_oracles() {
        let n = 5000u64;
        let t_id = build_ca_tables(&demos::identity_ca(), n, 1).unwrap();
        let t_not = build_ca_tables(&demos::complement_ca(), n, 1).unwrap();
        let t_par = build_ca_tables(&demos::parity_ca(), n, 1).unwrap();
        let full = (1u128 << t_not.big_l) - 1;
        let mut rng = StdRng::seed_from_u64(0x5eed_0003);
        for _ in 0..200 {
            let x1 = rng.gen_range(0..t_id.limit);
            assert_eq!(t_id.ca_op(&[x1]).unwrap().value, x1);
            assert_eq!(t_not.ca_op(&[x1]).unwrap().value, full ^ x1);
            assert_eq!(
                t_par.ca_op(&[x1]).unwrap().value,
                (x1.count_ones() % 2) as u128
            );
        }
    }

    #[test]
    fn zero_operand_matches_zero_codeword_run() {
        let ca = demos::parity_ca();
        let t = build_ca_tables(&ca, 4096, 2).unwrap();
        let w = code_word(&ca, 4096, 2, &[0]).unwrap();
        let direct = ca_run(&ca, &w, (ca.c * t.big_l) as u64);
        assert_eq!(t.ca_op(&[0]).unwrap().value, project_config(&ca, &direct));
    }

    #[test]
    fn block_rows_match_block_decomposition_of_direct_run() {
        let ca = demos::parity_ca();
        let t = build_ca_tables(&ca, 4096, 2).unwrap();
        for x1 in [0u128, 1, 77, 4095, 9_999_999] {
            let rows = t.block_rows(&[x1]).unwrap();
            let w = code_word(&ca, 4096, 2, &[x1]).unwrap();
            for (ti, row) in rows.iter().enumerate() {
                let time = if ti == rows.len() - 1 {
                    (ca.c * t.big_l) as u64
                } else {
                    ti as u64 * t.ell as u64
                };
                let cfg = ca_run(&ca, &w, time);
                for x in 1..=t.c0 as usize {
                    assert_eq!(
                        row[x],
                        t.encode_block(&cfg, x),
                        "x1={x1} row={ti} block={x}"
                    );
                }
            }
        }
    }

    #[test]
    fn rejects_out_of_range_operand() {
        let ca = demos::identity_ca();
        let t = build_ca_tables(&ca, 200, 1).unwrap();
        assert!(matches!(
            t.ca_op(&[t.limit]),
            Err(CaError::OperandOutOfRange { index: 1, .. })
        ));
    }

    #[test]
    fn build_too_small_reports_minimum() {
        let ca = demos::parity_ca();
        let err = build_ca_tables(&ca, 1024, 2).unwrap_err();
        match err {
            CaError::BuildTooSmall { requested, minimum } => {
                assert_eq!(requested, 1024);
                assert!(minimum > 1024);
                assert!(build_ca_tables(&ca, minimum, 2).is_ok());
            }
            other => panic!("expected BuildTooSmall, got {other}"),
        }
    }

    #[test]
    fn query_steps_do_not_grow_with_n() {
        let ca = demos::identity_ca();
        let small = build_ca_tables(&ca, 1 << 7, 2).unwrap();
        let large = build_ca_tables(&ca, 1 << 16, 2).unwrap();
        let qs = small.ca_op(&[123]).unwrap().steps;
        let ql = large.ca_op(&[123]).unwrap().steps;
        assert!(ql <= qs, "query steps grew with N: {ql} > {qs}");
    }

    #[test]
    fn build_steps_stay_linear() {
        let ca = demos::identity_ca();
        let a = build_ca_tables(&ca, 1 << 14, 2).unwrap();
        let b = build_ca_tables(&ca, 1 << 15, 2).unwrap();
        assert!(a.total_build_steps <= BUILD_BUDGET_FACTOR * a.n);
        assert!(b.total_build_steps <= BUILD_BUDGET_FACTOR * b.n);
        assert!(
            (b.total_build_steps as f64) <= 2.5 * a.total_build_steps as f64,
            "doubling N more than 2.5×'d the build: {} vs {}",
            b.total_build_steps,
            a.total_build_steps
        );
    }
}
