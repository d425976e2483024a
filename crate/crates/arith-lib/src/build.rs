// Copyright (c) 2026 ram-workbench contributors
// SPDX-License-Identifier: Apache-2.0

//! Linear-time construction of every lookup table in a [`PreprocContext`].
//!
//! Each table family is built by its own metered pass; the per-family step
//! counts are recorded so the harness can check that each family grows
//! linearly in N. The total is checked against a hard budget — blowing it
//! signals an implementation bug, not a user error.

use crate::{oracle, ArithError, ArithResult, CthRootTables, Meter, PreprocContext, Val};
use std::collections::BTreeMap;

/// Exponents for which c-th root tables are always built.
pub const CTH_ROOT_EXPONENTS: [u32; 2] = [2, 3];

/// Builds the full context for problem size `n`, input bound factor `c`
/// and fixed degree `d`.
pub fn build_context(n: u64, c: u64, d: u32) -> ArithResult<PreprocContext> {
    if n < 2 || c < 1 || d < 1 {
        return Err(ArithError::Domain {
            op: "build_context",
            msg: format!("need N ≥ 2, c ≥ 1, d ≥ 1 (got N={n}, c={c}, d={d})"),
        });
    }
    // Queries compose exponent/logarithm helpers on values below N^{2d},
    // which must fit the host word.
    if 2 * d as u64 * (64 - n.leading_zeros() as u64) >= 128 {
        return Err(ArithError::Domain {
            op: "build_context",
            msg: format!("N^2d overflows 128 bits for N={n}, d={d}"),
        });
    }
    let limit = oracle::pow_checked(n as Val, d).expect("N^d fits");
    let limit2 = oracle::pow_checked(n as Val, 2 * d).expect("N^2d fits");
    let cn = c * n;
    let b = oracle::sqrt_ceil(n as Val) as u64;
    let k6 = iroot_ceil(n, 6);
    let beta = k6 * k6 * k6;
    let k7 = iroot_ceil(n, 7);
    let l_cap = n.ilog2();
    let lambda = if l_cap < 2 {
        0
    } else {
        l_cap / (12 * ceil_log2(l_cap))
    };
    let l_d = (2 * d as u64) * (l_cap as u64 + 1); // ≥ ⌈2d log₂ N⌉
    let b_root = {
        let a = oracle::iroot(n as Val, 4) as u64;
        let a = if (a as Val).pow(4) < n as Val { a + 1 } else { a };
        let e = iroot_ceil(n, d + 1);
        (a * a * a).max(oracle::pow_checked(e as Val, d).expect("fits") as u64 + 1)
    };
    let digits = (2 * d as usize).max(3);

    let mut families: BTreeMap<String, u64> = BTreeMap::new();
    let record = |name: &str, m: Meter, map: &mut BTreeMap<String, u64>| {
        *map.entry(name.to_string()).or_insert(0) += m.steps();
    };

    // pred
    let mut m = Meter::new();
    let pred = build_pred(&mut m, cn);
    record("pred", m, &mut families);

    // sqrt
    let mut m = Meter::new();
    let ceil_sqrt = build_ceil_sqrt(&mut m, n);
    record("sqrt", m, &mut families);

    // digits: base-B div/mod/mult tables plus the digit-comparison and
    // digit-arithmetic tables.
    let mut m = Meter::new();
    let (divb, modb, multb) = build_divmod(&mut m, b, cn);
    let lower_eq = build_lower_eq(&mut m, b);
    let diff = build_diff(&mut m, b);
    let mult = build_mult(&mut m, b);
    record("digits", m, &mut families);

    // division: div/mod tables for the K6 and K7 bases, the four
    // small-divisor tables, and the direct-division quotient table.
    let mut m = Meter::new();
    let (div_k6, mod_k6, _) = build_divmod(&mut m, k6, cn);
    let (div_k7, mod_k7, _) = build_divmod(&mut m, k7, cn);
    let (dsm_d, dsm_r, dsm_dm, dsm_rm) = build_div_by_small(&mut m, beta);
    let div2 = build_div2(&mut m, k7);
    record("division", m, &mut families);

    // explog
    let mut m = Meter::new();
    let (exp, exp_bound) = build_exp(&mut m, b, limit2);
    let log_l = build_log_l(&mut m, b);
    let logar = build_logar(&mut m, b);
    record("explog", m, &mut families);

    // roots
    let mut m = Meter::new();
    let mut cth = Vec::new();
    for &ce in &CTH_ROOT_EXPONENTS {
        cth.push(build_cth(&mut m, ce, n, c, limit));
    }
    let rootn = build_rootn(&mut m, n, l_cap);
    let root = build_root(&mut m, b_root, l_cap);
    let factor = build_factor(&mut m, d, lambda, l_cap);
    record("roots", m, &mut families);

    // bitwise
    let mut m = Meter::new();
    let xor_ar = build_bitwise(&mut m, b, |i, j| (i + j) % 2);
    let and_ar = build_bitwise(&mut m, b, |i, j| i * j);
    let or_ar = build_bitwise(&mut m, b, |i, j| i.max(j));
    record("bitwise", m, &mut families);

    let total: u64 = families.values().sum();
    let budget = 64 * d as u64 * c * n * (l_cap as u64 + 1);
    if total > budget {
        return Err(ArithError::BudgetExceeded {
            steps: total,
            budget,
        });
    }

    Ok(PreprocContext {
        n,
        c,
        d,
        limit,
        b,
        digits,
        k6,
        beta,
        k7,
        l_cap,
        lambda,
        l_d,
        b_root,
        build_steps: families,
        total_build_steps: total,
        build_budget: budget,
        pred,
        ceil_sqrt,
        divb,
        modb,
        multb,
        div_k6,
        mod_k6,
        div_k7,
        mod_k7,
        lower_eq,
        diff,
        mult,
        dsm_d,
        dsm_r,
        dsm_dm,
        dsm_rm,
        div2,
        exp,
        exp_bound,
        log_l,
        logar,
        cth,
        rootn,
        root,
        factor,
        xor_ar,
        and_ar,
        or_ar,
    })
}

/// ⌈n^{1/e}⌉ (at least 2 whenever n ≥ 2).
fn iroot_ceil(n: u64, e: u32) -> u64 {
    let r = oracle::iroot(n as Val, e) as u64;
    if oracle::pow_checked(r as Val, e).expect("fits") < n as Val {
        r + 1
    } else {
        r
    }
}

/// ⌈log₂ x⌉ for x ≥ 1.
fn ceil_log2(x: u32) -> u32 {
    if x <= 1 {
        0
    } else {
        (x - 1).ilog2() + 1
    }
}

/// PRED[x] = x−1 for x in [1, cN]; PRED[0] = 0.
fn build_pred(m: &mut Meter, cn: u64) -> Vec<u64> {
    let mut t = vec![0u64; cn as usize + 1];
    let mut y = 0u64;
    while y != cn {
        t[y as usize + 1] = y;
        y += 1;
        m.tick_n(3); // test, store, increment
    }
    t
}

/// CEIL_SQRT[y] = ⌈√y⌉ for y in [1, N], by walking the squares.
fn build_ceil_sqrt(m: &mut Meter, n: u64) -> Vec<u64> {
    let mut t = vec![0u64; n as usize + 1];
    let mut x = 1u64;
    let mut x_sq = 1u64;
    for y in 1..=n {
        t[y as usize] = x;
        m.tick_n(2); // store, test
        if y == x_sq {
            x_sq += x + x + 1;
            x += 1;
            m.tick_n(2);
        }
    }
    t
}

/// Incremental div/mod tables for `base` over [0, cn], plus the multiples
/// table MULT[q] = q·base.
fn build_divmod(m: &mut Meter, base: u64, cn: u64) -> (Vec<u64>, Vec<u64>, Vec<u64>) {
    assert!(base >= 2);
    let len = cn as usize + 1;
    let mut div = vec![0u64; len];
    let mut md = vec![0u64; len];
    let mut mult = vec![0u64; cn as usize / base as usize + 2];
    for x in 1..=cn as usize {
        m.tick_n(3); // test, two stores
        if md[x - 1] != base - 1 {
            md[x] = md[x - 1] + 1;
            div[x] = div[x - 1];
        } else {
            md[x] = 0;
            div[x] = div[x - 1] + 1;
            mult[div[x] as usize] = x as u64;
            m.tick();
        }
    }
    (div, md, mult)
}

/// LowerEQ[x·B+y] = 1 iff x ≤ y, for x, y < B.
fn build_lower_eq(m: &mut Meter, b: u64) -> Vec<u8> {
    let b = b as usize;
    let mut t = vec![0u8; b * b];
    for x in 0..b {
        for y in x..b {
            t[x * b + y] = 1;
            m.tick();
        }
        m.tick();
    }
    t
}

/// DIFF[x·2B+y] = x−y for y ≤ x < 2B (0 elsewhere).
fn build_diff(m: &mut Meter, b: u64) -> Vec<u64> {
    let w = 2 * b as usize;
    let mut t = vec![0u64; w * w];
    for y in 0..w {
        // walk x upward so each entry is the previous plus one
        for x in y..w {
            t[x * w + y] = (x - y) as u64;
            m.tick();
        }
        m.tick();
    }
    t
}

/// MULT[x·B+y] = x·y for x, y < B, built by repeated addition.
fn build_mult(m: &mut Meter, b: u64) -> Vec<u64> {
    let b = b as usize;
    let mut t = vec![0u64; b * b];
    for x in 0..b {
        for y in 1..b {
            t[x * b + y] = t[x * b + y - 1] + x as u64;
            m.tick_n(2);
        }
    }
    t
}

/// The four small-divisor tables over [0, β]×[1, β]:
/// D[a][b]=⌊a/b⌋, R[a][b]=a mod b, DM[a][b]=⌊aβ/b⌋, RM[a][b]=(aβ) mod b.
fn build_div_by_small(m: &mut Meter, beta: u64) -> (Vec<u64>, Vec<u64>, Vec<u64>, Vec<u64>) {
    let w = beta as usize + 1;
    let mut d = vec![0u64; w * w];
    let mut r = vec![0u64; w * w];
    let mut dm = vec![0u64; w * w];
    let mut rm = vec![0u64; w * w];
    for b in 1..=beta as usize {
        for a in 1..=beta as usize {
            m.tick_n(3);
            d[a * w + b] = d[(a - 1) * w + b];
            r[a * w + b] = r[(a - 1) * w + b] + 1;
            if r[a * w + b] == b as u64 {
                d[a * w + b] += 1;
                r[a * w + b] = 0;
                m.tick_n(2);
            }
        }
        let dq = d[beta as usize * w + b];
        let rq = r[beta as usize * w + b];
        for a in 1..=beta as usize {
            m.tick_n(3);
            dm[a * w + b] = dm[(a - 1) * w + b] + dq;
            rm[a * w + b] = rm[(a - 1) * w + b] + rq;
            if rm[a * w + b] >= b as u64 {
                dm[a * w + b] += 1;
                rm[a * w + b] -= b as u64;
                m.tick_n(2);
            }
        }
    }
    (d, r, dm, rm)
}

/// DIV[x·(K³+1)+y] = ⌊x/y⌋ for the quotients the direct division consults:
/// x = q·y+r with 1 ≤ q < K, 0 ≤ r < y, 2 ≤ y ≤ K³.
fn build_div2(m: &mut Meter, k7: u64) -> Vec<u64> {
    let k3 = (k7 * k7 * k7) as usize;
    let k4 = k3 * k7 as usize;
    let mut t = vec![0u64; k4 * (k3 + 1)];
    for y in 2..=k3 {
        for q in 1..k7 as usize {
            for r in 0..y {
                let x = q * y + r;
                t[x * (k3 + 1) + y] = q as u64;
                m.tick_n(2);
            }
        }
    }
    t
}

/// EXP[x][y−1] = x^y for 2 ≤ x < B while x^y < N^{2d}; BOUND[x] is the
/// largest such y.
fn build_exp(m: &mut Meter, b: u64, limit2: Val) -> (Vec<Vec<Val>>, Vec<u64>) {
    let mut exp = vec![Vec::new(); b as usize];
    let mut bound = vec![0u64; b as usize];
    for x in 2..b {
        let mut z = x as Val;
        let mut y = 0u64;
        while z < limit2 {
            y += 1;
            exp[x as usize].push(z);
            z *= x as Val;
            m.tick_n(3);
        }
        bound[x as usize] = y;
        m.tick();
    }
    (exp, bound)
}

/// L[x] = ⌈log_x B⌉ for 2 ≤ x ≤ B.
fn build_log_l(m: &mut Meter, b: u64) -> Vec<u64> {
    let mut t = vec![0u64; b as usize + 1];
    for x in 2..=b {
        let mut y = x;
        let mut z = 1u64;
        while y < b {
            y *= x;
            z += 1;
            m.tick_n(2);
        }
        t[x as usize] = z;
        m.tick();
    }
    t
}

/// LOGAR[x·2B+y] = ⌊log_x y⌋ for 2 ≤ x ≤ y < 2B.
fn build_logar(m: &mut Meter, b: u64) -> Vec<u64> {
    let w = 2 * b as usize;
    let mut t = vec![0u64; w * w];
    for x in 2..w as u64 {
        let mut y = x;
        let mut z = 1u64;
        let mut pow_next = (x as Val) * (x as Val); // x^{z+1}
        while y < w as u64 {
            while (y as Val) < pow_next && y < w as u64 {
                t[x as usize * w + y as usize] = z;
                y += 1;
                m.tick_n(2);
            }
            z += 1;
            pow_next *= x as Val;
            m.tick_n(2);
        }
    }
    t
}

/// Dense c-th root table for a fixed exponent, with the build-time guard
/// K ≥ 1+2√c₂ checked exactly as 2c⁴(K−1)² ≥ (c−1)⁷(c+1)⁴.
fn build_cth(m: &mut Meter, ce: u32, n: u64, c: u64, limit: Val) -> CthRootTables {
    let k = iroot_ceil(n, 2 * ce);
    let m_cap = oracle::pow_checked(k as Val, 2 * ce).expect("K^2c fits");
    let c0 = {
        let s = 6 * ce as u64 - 12;
        let sq = oracle::sqrt_ceil(s as Val).max(0) as u64;
        // ⌈sq·(c²−1)/(6c)⌉
        let num = sq * (ce as u64 * ce as u64 - 1);
        let den = 6 * ce as u64;
        num.div_ceil(den)
    };
    let threshold = oracle::pow_checked(c0 as Val, 2 * ce).unwrap_or(Val::MAX / 2)
        + oracle::pow_checked(c0 as Val, ce).unwrap_or(0);
    let m_prime = m_cap.max(threshold);
    let guard_ok = {
        let lhs = 2 * oracle::pow_checked(ce as Val, 4).expect("fits") * ((k - 1) as Val).pow(2);
        let rhs = oracle::pow_checked(ce as Val - 1, 7).expect("fits")
            * oracle::pow_checked(ce as Val + 1, 4).expect("fits");
        lhs >= rhs
    };
    // Too-small contexts get an enlarged (still linear-size) table; queries
    // beyond it use the bracket-clamped correction.
    let table_len = if guard_ok {
        m_prime
    } else {
        m_prime.max(limit.min((c * n) as Val))
    };
    let mut table = vec![0u64; table_len as usize];
    let mut next_pow: Val = 1; // (s+1)^c for current root s=0
    for x in 1..table_len as usize {
        let s = table[x - 1];
        m.tick_n(2);
        if (x as Val) < next_pow {
            table[x] = s;
        } else {
            table[x] = s + 1;
            next_pow = oracle::pow_checked(s as Val + 2, ce).expect("fits");
            m.tick_n(ce as u64);
        }
    }
    CthRootTables {
        c: ce,
        k,
        c0,
        m_prime,
        guard_fallback: !guard_ok,
        table,
    }
}

/// RootN[y] = ⌈N^{1/(3y)}⌉ for 1 ≤ y ≤ L.
fn build_rootn(m: &mut Meter, n: u64, l_cap: u32) -> Vec<u64> {
    let mut t = vec![0u64; l_cap as usize + 1];
    for y in 1..=l_cap {
        let mut r = 1u64;
        while oracle::pow_checked(r as Val, 3 * y).map_or(true, |p| p < n as Val) {
            r += 1;
            m.tick_n(3 * y as u64);
        }
        t[y as usize] = r;
        m.tick();
    }
    t
}

/// root[y][x] = ⌊x^{1/y}⌋ for x < B_root, 1 ≤ y ≤ L.
fn build_root(m: &mut Meter, b_root: u64, l_cap: u32) -> Vec<Vec<u64>> {
    let mut t = vec![Vec::new(); l_cap as usize + 1];
    for y in 1..=l_cap {
        let mut row = vec![0u64; b_root as usize];
        let mut next_pow: Val = 1; // (s+1)^y for current root s=0
        for x in 1..b_root as usize {
            let s = row[x - 1];
            m.tick_n(2);
            if (x as Val) < next_pow {
                row[x] = s;
            } else {
                row[x] = s + 1;
                next_pow = oracle::pow_checked(s as Val + 2, y).unwrap_or(Val::MAX);
                m.tick_n(y as u64);
            }
        }
        t[y as usize] = row;
    }
    t
}

/// factor[y−λ] = least divisor of y in [d+1, λ−1], or 0 for the forbidden
/// form, for y in [λ, L]. Empty when λ < 2.
fn build_factor(m: &mut Meter, d: u32, lambda: u32, l_cap: u32) -> Vec<u64> {
    if lambda < 2 {
        return Vec::new();
    }
    let mut t = Vec::new();
    for y in lambda..=l_cap {
        let mut found = 0u64;
        for y1 in (d + 1)..lambda {
            m.tick();
            if y1 > 0 && y % y1 == 0 {
                found = y1 as u64;
                break;
            }
        }
        t.push(found);
        m.tick();
    }
    t
}

/// A bitwise table over [0, K)² (K = ⌈√N⌉) seeded on {0,1}² and extended
/// by the halving identity t[i][j] = 2·t[i/2][j/2] + t[i mod 2][j mod 2].
fn build_bitwise(m: &mut Meter, k: u64, seed: impl Fn(u64, u64) -> u64) -> Vec<u64> {
    let k = k as usize;
    let mut t = vec![0u64; k * k];
    for i in 0..2.min(k) {
        for j in 0..2.min(k) {
            t[i * k + j] = seed(i as u64, j as u64);
            m.tick();
        }
    }
    for i in 0..k {
        for j in 0..k {
            if i > 1 || j > 1 {
                t[i * k + j] = 2 * t[(i / 2) * k + j / 2] + t[(i % 2) * k + j % 2];
                m.tick_n(3);
            }
        }
    }
    t
}

impl PreprocContext {
    #[inline]
    pub(crate) fn lower_eq_at(&self, x: u64, y: u64) -> u8 {
        self.lower_eq[x as usize * self.b as usize + y as usize]
    }

    #[inline]
    pub(crate) fn diff_at(&self, x: u64, y: u64) -> u64 {
        self.diff[x as usize * 2 * self.b as usize + y as usize]
    }

    #[inline]
    pub(crate) fn mult_at(&self, x: u64, y: u64) -> u64 {
        self.mult[x as usize * self.b as usize + y as usize]
    }

    #[inline]
    pub(crate) fn dsm_idx(&self, a: u64, b: u64) -> usize {
        a as usize * (self.beta as usize + 1) + b as usize
    }

    #[inline]
    pub(crate) fn logar_at(&self, x: Val, y: Val) -> u64 {
        self.logar[x as usize * 2 * self.b as usize + y as usize]
    }

    #[inline]
    pub(crate) fn div2_at(&self, x: Val, y: Val) -> u64 {
        let k3 = (self.k7 * self.k7 * self.k7) as usize;
        self.div2[x as usize * (k3 + 1) + y as usize]
    }

    #[inline]
    pub(crate) fn bitwise_at(&self, table: &[u64], x: Val, y: Val) -> u64 {
        table[x as usize * self.b as usize + y as usize]
    }

    pub(crate) fn cth_tables(&self, ce: u32) -> ArithResult<&CthRootTables> {
        self.cth
            .iter()
            .find(|t| t.c == ce)
            .ok_or(ArithError::UnsupportedExponent(ce as u64))
    }

    /// The root tables for a fixed exponent, exposing the build constants.
    pub fn cth_root_tables(&self, ce: u32) -> ArithResult<&CthRootTables> {
        self.cth_tables(ce)
    }
}
