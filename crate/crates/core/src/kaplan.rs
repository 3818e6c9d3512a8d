//! Ternary coefficients `a_pqr(k)` via Kaplan's lemma.
//!
//! With `b_i = a_pq(i)` when `r*i <= k` and `0` otherwise,
//!
//! ```text
//! a_pqr(k) = Σ_{m=0}^{p-1} ( b_{f(m)} - b_{f(m+q)} ),   f(m) ≡ r⁻¹(k - m)  (mod pq)
//! ```
//!
//! so a single coefficient costs `O(p)` and needs no stored polynomial.
//! Full coefficient sets are scanned over disjoint blocks of indices
//! (in parallel) and merged in index order, so results do not depend on
//! the partitioning or the worker count.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::binary::{BinaryContext, BinaryError};
use crate::numtheory::{is_prime, mod_inverse, next_prime_in_ap, NumTheoryError, Residue};

/// Default cap on the number of indices a scan may visit.
pub const DEFAULT_SCAN_BUDGET: u128 = 100_000_000;

const DEFAULT_BLOCK_LEN: u64 = 1 << 18;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KaplanError {
    #[error("({p}, {q}, {r}) must be primes with 2 < p < q < r")]
    InvalidPrimes { p: u64, q: u64, r: u64 },
    #[error(transparent)]
    Binary(#[from] BinaryError),
    #[error(transparent)]
    NumTheory(#[from] NumTheoryError),
    #[error("scan of {len} indices exceeds the budget of {budget}")]
    ScanTooLarge { len: u128, budget: u128 },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("coefficient set invariant violated: {0}")]
    InvariantViolated(String),
    #[error("could not start scan workers: {0}")]
    Workers(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KaplanContext {
    p: u64,
    q: u64,
    r: u64,
    binary: BinaryContext,
    r_inv: Residue,
}

impl KaplanContext {
    pub fn new(p: u64, q: u64, r: u64) -> Result<Self, KaplanError> {
        if p < 3 || !(p < q && q < r) || !is_prime(p) || !is_prime(q) || !is_prime(r) {
            return Err(KaplanError::InvalidPrimes { p, q, r });
        }
        let binary = BinaryContext::new(p, q)?;
        let r_inv = mod_inverse(r as i128, binary.pq())?;
        Ok(KaplanContext { p, q, r, binary, r_inv })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    pub fn pq(&self) -> u64 {
        self.binary.pq()
    }

    pub fn binary(&self) -> &BinaryContext {
        &self.binary
    }

    /// r⁻¹ mod pq.
    pub fn r_inv(&self) -> Residue {
        self.r_inv
    }

    /// φ(pqr), the degree of Φ_pqr.
    pub fn degree(&self) -> u128 {
        (self.p as u128 - 1) * (self.q as u128 - 1) * (self.r as u128 - 1)
    }

    /// The representative of `r⁻¹(k - m)` in `[0, pq)`.
    pub fn f_map(&self, k: u128, m: u64) -> u64 {
        let pq = self.pq();
        let k_red = (k % pq as u128) as u64;
        let diff = (k_red + pq - m % pq) % pq;
        diff * self.r_inv.value() % pq
    }

    /// `a_pq(i)` if `r*i <= k`, else 0.
    pub fn b_value(&self, k: u128, i: u64) -> i8 {
        if (self.r as u128) * (i as u128) <= k {
            self.binary.a_pq(i)
        } else {
            0
        }
    }

    /// Coefficient of `x^k` in Φ_pqr.
    pub fn a_pqr(&self, k: u128) -> i64 {
        (0..self.p)
            .map(|m| {
                self.b_value(k, self.f_map(k, m)) as i64
                    - self.b_value(k, self.f_map(k, m + self.q)) as i64
            })
            .sum()
    }

    /// Coefficients for `k` in `start..end`, computed by the incremental cursor.
    pub fn coeffs_in_range(&self, start: u128, end: u128) -> Vec<i64> {
        let mut cursor = Cursor::new(self, start);
        (start..end).map(|_| cursor.next_coeff()).collect()
    }

    pub fn flip_partner(&self, opts: &ScanOptions) -> Result<FlipPartner, KaplanError> {
        flip_partner(self, opts)
    }
}

/// Walks consecutive `k`, keeping `f(m)` and its p- and q-parts up to date
/// with additions only. Same values as [`KaplanContext::a_pqr`], cheaper.
struct Cursor {
    p: u64,
    q: u64,
    pq: u64,
    r: u64,
    rho: u64,
    sigma: u64,
    // current index k = k_div_r * r + k_mod_r
    k_div_r: u128,
    k_mod_r: u64,
    // f(0) at the current k, and its parts
    f0: u64,
    f0_p: u64,
    f0_q: u64,
    // f(q) - f(0) and its q-part; its p-part is 0
    shift: u64,
    shift_q: u64,
    // -r⁻¹ mod pq (the step m -> m + 1) and its parts
    step: u64,
    step_p: u64,
    step_q: u64,
}

#[inline]
fn add_wrap(a: u64, b: u64, m: u64) -> u64 {
    let s = a + b;
    if s >= m {
        s - m
    } else {
        s
    }
}

impl Cursor {
    fn new(ctx: &KaplanContext, k: u128) -> Self {
        let b = &ctx.binary;
        let pq = b.pq();
        let f0 = ctx.f_map(k, 0);
        let step = (pq - ctx.r_inv.value()) % pq;
        let shift = (pq - mul_small(ctx.q, ctx.r_inv.value(), pq)) % pq;
        debug_assert_eq!(b.p_part(shift), 0);
        Cursor {
            p: ctx.p,
            q: ctx.q,
            pq,
            r: ctx.r,
            rho: b.rho(),
            sigma: b.sigma(),
            k_div_r: k / ctx.r as u128,
            k_mod_r: (k % ctx.r as u128) as u64,
            f0,
            f0_p: b.p_part(f0),
            f0_q: b.q_part(f0),
            shift,
            shift_q: b.q_part(shift),
            step,
            step_p: b.p_part(step),
            step_q: b.q_part(step),
        }
    }

    #[inline]
    fn sign(&self, p_part: u64, q_part: u64) -> i64 {
        match (p_part <= self.rho, q_part <= self.sigma) {
            (true, true) => 1,
            (false, false) => -1,
            _ => 0,
        }
    }

    /// Coefficient at the current index, then advance to the next one.
    #[inline]
    fn next_coeff(&mut self) -> i64 {
        // b_i is live iff i <= floor(k / r)
        let limit = self.k_div_r.min(self.pq as u128) as u64;
        let (mut f, mut fp, mut fq) = (self.f0, self.f0_p, self.f0_q);
        let mut g = add_wrap(f, self.shift, self.pq);
        let mut gq = add_wrap(fq, self.shift_q, self.p);
        let mut sum = 0i64;
        for _ in 0..self.p {
            if f <= limit {
                sum += self.sign(fp, fq);
            }
            if g <= limit {
                sum -= self.sign(fp, gq);
            }
            f = add_wrap(f, self.step, self.pq);
            g = add_wrap(g, self.step, self.pq);
            fp = add_wrap(fp, self.step_p, self.q);
            fq = add_wrap(fq, self.step_q, self.p);
            gq = add_wrap(gq, self.step_q, self.p);
        }
        // k -> k + 1 moves f(0) by +r⁻¹, i.e. by -step
        self.f0 = add_wrap(self.f0, self.pq - self.step, self.pq);
        self.f0_p = add_wrap(self.f0_p, (self.q - self.step_p) % self.q, self.q);
        self.f0_q = add_wrap(self.f0_q, (self.p - self.step_q) % self.p, self.p);
        self.k_mod_r += 1;
        if self.k_mod_r == self.r {
            self.k_mod_r = 0;
            self.k_div_r += 1;
        }
        sum
    }
}

fn mul_small(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

/// The set `A{n}` of distinct coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientSet {
    pub values: BTreeSet<i64>,
    pub min: i64,
    pub max: i64,
    pub height: u64,
}

impl CoefficientSet {
    /// Returns `None` for an empty iterator.
    pub fn from_values<I: IntoIterator<Item = i64>>(values: I) -> Option<Self> {
        let values: BTreeSet<i64> = values.into_iter().collect();
        let min = *values.first()?;
        let max = *values.last()?;
        let height = min.unsigned_abs().max(max.unsigned_abs());
        Some(CoefficientSet { values, min, max, height })
    }

    pub fn cardinality(&self) -> usize {
        self.values.len()
    }

    pub fn is_interval(&self) -> bool {
        self.values.len() as i64 == self.max - self.min + 1
    }

    /// Whether the set is exactly the integers in `[lo, hi]`.
    pub fn is_exactly(&self, lo: i64, hi: i64) -> bool {
        self.min == lo && self.max == hi && self.is_interval()
    }

    pub fn negated(&self) -> Self {
        CoefficientSet::from_values(self.values.iter().map(|v| -v)).expect("nonempty")
    }

    /// Range, interval and height constraints every ternary set satisfies.
    pub fn check_ternary(&self, p: u64) -> Result<(), KaplanError> {
        if (self.max - self.min) as u64 > p {
            return Err(KaplanError::InvariantViolated(format!(
                "max - min = {} exceeds p = {p}",
                self.max - self.min
            )));
        }
        if !self.is_interval() {
            return Err(KaplanError::InvariantViolated(format!(
                "{:?} is not an interval",
                self.values
            )));
        }
        if self.height > p - 1 {
            return Err(KaplanError::InvariantViolated(format!(
                "height {} exceeds p - 1 = {}",
                self.height,
                p - 1
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScanOptions {
    /// Largest number of indices the scan may visit.
    pub budget: u128,
    /// Worker threads; `None` uses the global pool.
    pub workers: Option<usize>,
    /// Stop once every integer in `[lo, hi]` has been seen.
    pub early_exit: Option<(i64, i64)>,
    pub block_len: u64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            budget: DEFAULT_SCAN_BUDGET,
            workers: None,
            early_exit: None,
            block_len: DEFAULT_BLOCK_LEN,
        }
    }
}

impl ScanOptions {
    pub fn with_budget(mut self, budget: u128) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = Some(workers);
        self
    }

    pub fn with_early_exit(mut self, lo: i64, hi: i64) -> Self {
        self.early_exit = Some((lo, hi));
        self
    }

    pub fn with_block_len(mut self, block_len: u64) -> Self {
        self.block_len = block_len.max(1);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanOutcome {
    pub set: CoefficientSet,
    /// Number of indices visited.
    pub scanned: u128,
    /// False when an early exit stopped short of φ(pqr).
    pub complete: bool,
    /// Largest `|a(k+1) - a(k)|` over the visited indices.
    pub max_jump: u64,
    /// Smallest visited index attaining the minimum.
    pub min_at: u128,
    /// Smallest visited index attaining the maximum.
    pub max_at: u128,
}

impl ScanOutcome {
    pub fn jump_one_holds(&self) -> bool {
        self.max_jump <= 1
    }
}

#[derive(Debug, Clone)]
struct BlockSummary {
    first: i64,
    last: i64,
    min: (i64, u128),
    max: (i64, u128),
    max_jump: u64,
    seen: Vec<bool>,
}

impl BlockSummary {
    fn scan(ctx: &KaplanContext, start: u128, end: u128) -> Self {
        let offset = 2 * ctx.p as i64;
        let mut seen = vec![false; 4 * ctx.p as usize + 1];
        let mut cursor = Cursor::new(ctx, start);
        let first = cursor.next_coeff();
        let mut summary = BlockSummary {
            first,
            last: first,
            min: (first, start),
            max: (first, start),
            max_jump: 0,
            seen: Vec::new(),
        };
        seen[(first + offset) as usize] = true;
        for k in start + 1..end {
            let a = cursor.next_coeff();
            seen[(a + offset) as usize] = true;
            summary.max_jump = summary.max_jump.max(a.abs_diff(summary.last));
            if a < summary.min.0 {
                summary.min = (a, k);
            }
            if a > summary.max.0 {
                summary.max = (a, k);
            }
            summary.last = a;
        }
        summary.seen = seen;
        summary
    }

    /// Appends the block that directly follows `self`.
    fn absorb(&mut self, next: &BlockSummary) {
        self.max_jump = self
            .max_jump
            .max(next.max_jump)
            .max(next.first.abs_diff(self.last));
        self.last = next.last;
        if next.min.0 < self.min.0 {
            self.min = next.min;
        }
        if next.max.0 > self.max.0 {
            self.max = next.max;
        }
        for (s, &n) in self.seen.iter_mut().zip(&next.seen) {
            *s |= n;
        }
    }

    fn values(&self, p: u64) -> impl Iterator<Item = i64> + '_ {
        let offset = 2 * p as i64;
        self.seen
            .iter()
            .enumerate()
            .filter(|(_, &s)| s)
            .map(move |(i, _)| i as i64 - offset)
    }

    fn covers(&self, p: u64, lo: i64, hi: i64) -> bool {
        let offset = 2 * p as i64;
        (lo..=hi).all(|v| {
            let idx = v + offset;
            idx >= 0 && (idx as usize) < self.seen.len() && self.seen[idx as usize]
        })
    }
}

/// Scans `a_pqr(k)` over `0..=φ(pqr)` (or until the early-exit interval is
/// covered) and reports the coefficient set.
pub fn scan(ctx: &KaplanContext, opts: &ScanOptions) -> Result<ScanOutcome, KaplanError> {
    let len = ctx.degree() + 1;
    if len > opts.budget {
        return Err(KaplanError::ScanTooLarge { len, budget: opts.budget });
    }
    match opts.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .map_err(|e| KaplanError::Workers(e.to_string()))?
            .install(|| scan_in_pool(ctx, opts, len)),
        None => scan_in_pool(ctx, opts, len),
    }
}

fn scan_in_pool(ctx: &KaplanContext, opts: &ScanOptions, len: u128) -> Result<ScanOutcome, KaplanError> {
    let block = opts.block_len.max(1) as u128;
    let n_blocks = len.div_ceil(block);
    // Early exit checks after each batch; a full scan is one batch.
    let batch = match opts.early_exit {
        Some(_) => (rayon::current_num_threads() as u128 * 2).max(1),
        None => n_blocks,
    };
    let mut merged: Option<BlockSummary> = None;
    let mut next_block = 0u128;
    while next_block < n_blocks {
        let end_block = (next_block + batch).min(n_blocks);
        let summaries: Vec<BlockSummary> = (next_block..end_block)
            .into_par_iter()
            .map(|b| {
                let start = b * block;
                let end = (start + block).min(len);
                BlockSummary::scan(ctx, start, end)
            })
            .collect();
        for s in &summaries {
            match merged.as_mut() {
                Some(m) => m.absorb(s),
                None => merged = Some(s.clone()),
            }
        }
        next_block = end_block;
        if let (Some((lo, hi)), Some(m)) = (opts.early_exit, merged.as_ref()) {
            if m.covers(ctx.p, lo, hi) {
                break;
            }
        }
    }
    let merged = merged.expect("at least one block");
    let scanned = (next_block * block).min(len);
    let set = CoefficientSet::from_values(merged.values(ctx.p)).expect("nonempty scan");
    Ok(ScanOutcome {
        set,
        scanned,
        complete: scanned == len,
        max_jump: merged.max_jump,
        min_at: merged.min.1,
        max_at: merged.max.1,
    })
}

/// The exact coefficient set of Φ_pqr, checked against the ternary invariants.
pub fn coefficient_set(ctx: &KaplanContext) -> Result<CoefficientSet, KaplanError> {
    coefficient_set_with(ctx, &ScanOptions::default())
}

pub fn coefficient_set_with(ctx: &KaplanContext, opts: &ScanOptions) -> Result<CoefficientSet, KaplanError> {
    let opts = ScanOptions { early_exit: None, ..*opts };
    let outcome = scan(ctx, &opts)?;
    if !outcome.jump_one_holds() {
        return Err(KaplanError::InvariantViolated(format!(
            "consecutive coefficients differ by {}",
            outcome.max_jump
        )));
    }
    outcome.set.check_ternary(ctx.p)?;
    Ok(outcome.set)
}

/// First index `k <= φ/2` with `a(k) != a(φ - k)`, or `None` when the
/// polynomial is palindromic. Each block of the lower half is compared with
/// its mirror image.
pub fn first_asymmetry(ctx: &KaplanContext, opts: &ScanOptions) -> Result<Option<u128>, KaplanError> {
    let degree = ctx.degree();
    if degree + 1 > opts.budget {
        return Err(KaplanError::ScanTooLarge { len: degree + 1, budget: opts.budget });
    }
    let half = degree / 2 + 1;
    let block = opts.block_len.max(1) as u128;
    let run = || {
        (0..half.div_ceil(block))
            .into_par_iter()
            .filter_map(|b| {
                let start = b * block;
                let end = (start + block).min(half);
                let low = ctx.coeffs_in_range(start, end);
                let high = ctx.coeffs_in_range(degree + 1 - end, degree + 1 - start);
                low.iter()
                    .zip(high.iter().rev())
                    .position(|(a, b)| a != b)
                    .map(|i| start + i as u128)
            })
            .min()
    };
    match opts.workers {
        Some(w) => Ok(rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .map_err(|e| KaplanError::Workers(e.to_string()))?
            .install(run)),
        None => Ok(run()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FlipPartner {
    /// Smallest prime `s > pq` with `s ≡ -r (mod pq)`.
    pub s: u64,
    /// `Some(A{pqs} == -A{pqr})` when both scans fit the budget.
    pub verified: Option<bool>,
}

/// Smallest prime `s > pq` with `s ≡ -r (mod pq)`; requires `r > pq`.
pub fn flip_prime(ctx: &KaplanContext) -> Result<u64, KaplanError> {
    let pq = ctx.pq();
    if ctx.r <= pq {
        return Err(KaplanError::PreconditionViolated(format!(
            "r = {} must exceed pq = {pq}",
            ctx.r
        )));
    }
    let class = Residue::new(ctx.r % pq, pq)?.neg();
    Ok(next_prime_in_ap(class, pq + 1)?)
}

/// The partner prime `s ≡ -r (mod pq)` whose coefficient set is `-A{pqr}`.
pub fn flip_partner(ctx: &KaplanContext, opts: &ScanOptions) -> Result<FlipPartner, KaplanError> {
    let s = flip_prime(ctx)?;
    let partner = KaplanContext::new(ctx.p, ctx.q, s)?;
    let fits = |c: &KaplanContext| c.degree() + 1 <= opts.budget;
    let verified = if fits(ctx) && fits(&partner) {
        let original = coefficient_set_with(ctx, opts)?;
        let flipped = coefficient_set_with(&partner, opts)?;
        Some(flipped == original.negated())
    } else {
        None
    };
    Ok(FlipPartner { s, verified })
}
