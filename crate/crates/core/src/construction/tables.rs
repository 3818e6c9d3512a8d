//! Row-by-row check of the p-parts, q-parts and `b`-values behind the two
//! target coefficients.
//!
//! Rows are indexed by `idx`, which is `m` in branch one and `p - 1 - m` in
//! branch two (the second branch walks the first branch's table backwards).
//! `ω` is the q-part of the shift `f(m+q) - f(m)`: `w`, or `p - w`.

use super::{Branch, ConstructionCertificate, ConstructionError, ConstructionParams};
use crate::kaplan::{KaplanContext, KaplanError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableCheck {
    pub check: String,
    /// Row index `idx` in the table, or 0 for whole-table checks.
    pub row: u64,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableReport {
    pub checks: Vec<TableCheck>,
    /// Rows with `b_{f(m)} = 1` at `k⁺`.
    pub positive_b: u64,
    /// Rows with `b_{f(m)} = -1` at `k⁻`.
    pub negative_b: u64,
}

impl TableReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &TableCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

struct Recorder {
    checks: Vec<TableCheck>,
}

impl Recorder {
    fn expect<T: PartialEq + std::fmt::Display>(&mut self, check: &str, row: u64, got: T, want: T) {
        let passed = got == want;
        let detail = if passed {
            format!("{got}")
        } else {
            format!("got {got}, expected {want}")
        };
        self.checks.push(TableCheck { check: check.to_string(), row, passed, detail });
    }
}

fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    (a + m - b % m) % m
}

/// Which extreme an index is supposed to realise.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Plus,
    Minus,
}

/// Collects every check for the given target indices (normally the ones
/// from the certificate, but any pair can be tested).
pub fn table_report(
    params: &ConstructionParams,
    k_plus: u128,
    k_minus: u128,
) -> Result<TableReport, KaplanError> {
    let ctx = params.kaplan()?;
    let mut rec = Recorder { checks: Vec::new() };
    let plus = check_side(params, &ctx, Side::Plus, k_plus, &mut rec);
    let minus = check_side(params, &ctx, Side::Minus, k_minus, &mut rec);
    Ok(TableReport { checks: rec.checks, positive_b: plus, negative_b: minus })
}

/// [`table_report`] on a certificate's own indices, failing on the first
/// mismatching row.
pub fn verify_tables(cert: &ConstructionCertificate) -> Result<TableReport, ConstructionError> {
    let report = table_report(&cert.params, cert.k_plus.k, cert.k_minus.k)?;
    if let Some(bad) = report.failures().next() {
        return Err(ConstructionError::TableMismatch {
            check: bad.check.clone(),
            row: bad.row,
            detail: bad.detail.clone(),
        });
    }
    Ok(report)
}

fn check_side(params: &ConstructionParams, ctx: &KaplanContext, side: Side, k: u128, rec: &mut Recorder) -> u64 {
    let (p, q, l) = (params.p, params.q, params.l);
    let (rho, s, tau) = (params.rho, params.s, params.tau);
    let pq = p * q;
    let b = ctx.binary();
    let omega = params.effective_w();
    let tag = match side {
        Side::Plus => "plus",
        Side::Minus => "minus",
    };
    let name = |what: &str| format!("{tag}.{what}");

    let (plus, minus) = super::target_indices(params)
        .map(|(a, b)| (a.u.rem_euclid(pq as i128) as u64, b.u.rem_euclid(pq as i128) as u64))
        .unwrap_or((u64::MAX, u64::MAX));
    let want_u = if side == Side::Plus { plus } else { minus };
    rec.expect(&name("f0"), 0, ctx.f_map(k, 0), want_u);

    let base = q - s * p;
    let step = match params.branch {
        Branch::One => base,
        Branch::Two => pq - base,
    };
    for m in 0..p - 1 {
        rec.expect(&name("step"), m, sub_mod(ctx.f_map(k, m + 1), ctx.f_map(k, m), pq), step);
    }
    for m in 0..p {
        rec.expect(&name("shift"), m, sub_mod(ctx.f_map(k, m + q), ctx.f_map(k, m), pq), omega * q % pq);
    }

    let half_up = (p + l + 2) / 2;
    let mut sum = 0i64;
    let mut nonzero = 0u64;
    for m in 0..p {
        let row = match params.branch {
            Branch::One => m,
            Branch::Two => p - 1 - m,
        };
        let f = ctx.f_map(k, m);
        let g = ctx.f_map(k, m + q);
        let (want_p, want_q) = match side {
            Side::Plus => (sub_mod(rho - tau, row * s, q), row),
            Side::Minus => (sub_mod(rho + (p - l - 2) / 2 * s, row * s, q), (half_up + row) % p),
        };
        rec.expect(&name("p_part"), row, b.p_part(f), want_p);
        rec.expect(&name("q_part"), row, b.q_part(f), want_q);
        rec.expect(&name("shift_q_part"), row, b.q_part(g), (want_q + omega) % p);

        let bf = ctx.b_value(k, f);
        let want_b = match side {
            Side::Plus => (row <= (p + l) / 2) as i8,
            Side::Minus => -((2 * row + 4 <= p - l) as i8),
        };
        rec.expect(&name("b"), row, bf, want_b);
        rec.expect(&name("shift_b"), row, ctx.b_value(k, g), 0);
        if bf != 0 {
            nonzero += 1;
        }
        sum += bf as i64 - ctx.b_value(k, g) as i64;
    }
    let want_sum = match side {
        Side::Plus => params.predicted_max(),
        Side::Minus => params.predicted_min(),
    };
    rec.expect(&name("kaplan_sum"), 0, sum, want_sum);
    rec.expect(&name("a_pqr"), 0, ctx.a_pqr(k), want_sum);
    nonzero
}
