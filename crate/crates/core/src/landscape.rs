//! Inverse-pair sets and the lower bounds on `M(p)` they produce.
//!
//! For `1 <= β <= (p-3)/2` let `β*` be the inverse of `β` modulo `p`. Then
//!
//! * `B₁ = {β : β + β* >= p, β* <= 2β}`
//! * `B₂ = {β : p <= β + 2β* + 1, β > β*}`
//! * `B₃ = {β : p <= 2β + β*, β >= β*}`
//!
//! with `B_GM = B₁ ∪ B₂`, `B_R = B₁ ∪ B₃`, `M_GM = p - min B_GM` and
//! `M_R = p - min B_R`.

use std::collections::BTreeSet;
use std::fmt;
use std::io::{self, Write};

use rayon::prelude::*;
use thiserror::Error;

use crate::numtheory::{is_prime, mul_mod, primes_up_to};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LandscapeError {
    #[error("p = {0} must be an odd prime >= 5")]
    InvalidPrime(u64),
    #[error("S1 ∩ S2 = {found:?} for p = {p}, but the x0 rule predicts {expected:?}")]
    PropositionMismatch {
        p: u64,
        found: BTreeSet<u64>,
        expected: BTreeSet<u64>,
    },
}

fn check_prime(p: u64) -> Result<(), LandscapeError> {
    if p < 5 || !is_prime(p) {
        return Err(LandscapeError::InvalidPrime(p));
    }
    Ok(())
}

/// Inverses of `1..=n` modulo the prime `p` (index 0 unused), via
/// `i⁻¹ = -(p / i) · (p mod i)⁻¹`.
fn inverse_table(p: u64, n: u64) -> Vec<u64> {
    let mut inv = vec![0u64; n as usize + 1];
    if n >= 1 {
        inv[1] = 1;
    }
    for i in 2..=n {
        let prev = inv[(p % i) as usize];
        inv[i as usize] = (p - (p / i) * prev % p) % p;
    }
    inv
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BetaProfile {
    pub p: u64,
    pub b1: BTreeSet<u64>,
    pub b2: BTreeSet<u64>,
    pub b3: BTreeSet<u64>,
    pub b_gm: BTreeSet<u64>,
    pub b_r: BTreeSet<u64>,
    /// `None` when `B_GM` is empty.
    pub m_gm: Option<u64>,
    /// `None` when `B_R` is empty.
    pub m_r: Option<u64>,
    pub x0: Option<u64>,
    pub in_p1: bool,
}

/// Formats an optional bound, `undefined` for an empty source set.
pub struct Bound(pub Option<u64>);

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Some(v) => write!(f, "{v}"),
            None => f.write_str("undefined"),
        }
    }
}

impl BetaProfile {
    /// Checks the containments every profile must satisfy.
    pub fn check_invariants(&self) -> Result<(), String> {
        if !self.b2.is_subset(&self.b3) {
            return Err(format!("p = {}: B2 is not inside B3", self.p));
        }
        if !self.b1.is_disjoint(&self.b3) {
            return Err(format!("p = {}: B1 meets B3", self.p));
        }
        if !self.b_gm.is_subset(&self.b_r) {
            return Err(format!("p = {}: B_GM is not inside B_R", self.p));
        }
        if let (Some(gm), Some(r)) = (self.m_gm, self.m_r) {
            if r < gm {
                return Err(format!("p = {}: M_R = {r} < M_GM = {gm}", self.p));
            }
        }
        Ok(())
    }

    /// `p,card_B1,card_B2,card_B3,M_GM,M_R,x0,in_P1`
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.p,
            self.b1.len(),
            self.b2.len(),
            self.b3.len(),
            Bound(self.m_gm),
            Bound(self.m_r),
            self.x0.map_or_else(|| "none".to_string(), |x| x.to_string()),
            self.in_p1
        )
    }
}

pub const CSV_HEADER: &str = "p,card_B1,card_B2,card_B3,M_GM,M_R,x0,in_P1";

pub fn write_profiles_csv<W: Write>(mut out: W, profiles: &[BetaProfile]) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for profile in profiles {
        writeln!(out, "{}", profile.csv_row())?;
    }
    Ok(())
}

pub fn beta_profile(p: u64) -> Result<BetaProfile, LandscapeError> {
    check_prime(p)?;
    let top = (p - 3) / 2;
    let inv = inverse_table(p, top);
    let (mut b1, mut b2, mut b3) = (BTreeSet::new(), BTreeSet::new(), BTreeSet::new());
    for beta in 1..=top {
        let star = inv[beta as usize];
        if beta + star >= p && star <= 2 * beta {
            b1.insert(beta);
        }
        if p <= beta + 2 * star + 1 && beta > star {
            b2.insert(beta);
        }
        if p <= 2 * beta + star && beta >= star {
            b3.insert(beta);
        }
    }
    let b_gm: BTreeSet<u64> = b1.union(&b2).copied().collect();
    let b_r: BTreeSet<u64> = b1.union(&b3).copied().collect();
    let m_gm = b_gm.first().map(|b| p - b);
    let m_r = b_r.first().map(|b| p - b);
    let (x0, in_p1) = x0_classify(p);
    Ok(BetaProfile { p, b1, b2, b3, b_gm, b_r, m_gm, m_r, x0, in_p1 })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClaimKind {
    Exact,
    LowerBound,
}

impl ClaimKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ClaimKind::Exact => "exact",
            ClaimKind::LowerBound => "lower_bound",
        }
    }
}

/// Which family the claim comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClaimSource {
    /// `β ∈ B_GM` gives `m_p(β) >= p - β`.
    Gm,
    /// `β ∈ B_R` gives `m_p(p - β*) = p - β`.
    Rosu,
}

impl ClaimSource {
    pub fn as_str(self) -> &'static str {
        match self {
            ClaimSource::Gm => "gm",
            ClaimSource::Rosu => "rosu",
        }
    }
}

/// A statement about `m_p(residue)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MpClaim {
    pub residue: u64,
    pub kind: ClaimKind,
    pub value: u64,
    pub source: ClaimSource,
    pub beta: u64,
}

/// All claims for `p`: `B_GM` claims first, then `B_R` claims, each in
/// increasing `β`. A residue covered by both families appears twice.
pub fn m_p_claims(p: u64) -> Result<Vec<MpClaim>, LandscapeError> {
    let profile = beta_profile(p)?;
    let inv = inverse_table(p, (p - 3) / 2);
    let mut out = Vec::new();
    for &beta in &profile.b_gm {
        let exact = profile.b1.contains(&beta) && beta + inv[beta as usize] == p;
        out.push(MpClaim {
            residue: beta,
            kind: if exact { ClaimKind::Exact } else { ClaimKind::LowerBound },
            value: p - beta,
            source: ClaimSource::Gm,
            beta,
        });
    }
    for &beta in &profile.b_r {
        out.push(MpClaim {
            residue: p - inv[beta as usize],
            kind: ClaimKind::Exact,
            value: p - beta,
            source: ClaimSource::Rosu,
            beta,
        });
    }
    Ok(out)
}

/// Smallest positive root of `x² + 1 ≡ 0 (mod p)` (only for `p ≡ 1 mod 4`)
/// and whether `p/3 <= x0 <= (p-3)/2`.
pub fn x0_classify(p: u64) -> (Option<u64>, bool) {
    if p % 4 != 1 {
        return (None, false);
    }
    let x0 = (1..p).find(|&x| mul_mod(x, x, p) == p - 1);
    let in_p1 = matches!(x0, Some(x) if 3 * x >= p && 2 * x + 3 <= p);
    (x0, in_p1)
}

/// `S₁ ∩ S₂` with `S₁ = B_GM` and `S₂ = {p - β* : β ∈ B_R}`, checked
/// against the `x0` rule.
pub fn s1_s2_intersection(p: u64) -> Result<BTreeSet<u64>, LandscapeError> {
    let profile = beta_profile(p)?;
    let inv = inverse_table(p, (p - 3) / 2);
    let s2: BTreeSet<u64> = profile.b_r.iter().map(|&b| p - inv[b as usize]).collect();
    let found: BTreeSet<u64> = profile.b_gm.intersection(&s2).copied().collect();
    let expected: BTreeSet<u64> = match (profile.in_p1, profile.x0) {
        (true, Some(x0)) => [x0].into(),
        _ => BTreeSet::new(),
    };
    if found != expected {
        return Err(LandscapeError::PropositionMismatch { p, found, expected });
    }
    Ok(found)
}

/// Both cardinality bounds `|#B - p/c| <= 8√p(ln p + 2)³` and their slack.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CobeliReport {
    pub p: u64,
    pub card_gm: usize,
    pub card_r: usize,
    pub bound: f64,
    pub holds_gm: bool,
    pub holds_r: bool,
    /// `bound - |#B_GM - p/16|`
    pub slack_gm: f64,
    /// `bound - |#B_R - p/12|`
    pub slack_r: f64,
}

pub fn cobeli_check(p: u64) -> Result<CobeliReport, LandscapeError> {
    let profile = beta_profile(p)?;
    let pf = p as f64;
    let bound = 8.0 * pf.sqrt() * (pf.ln() + 2.0).powi(3);
    let slack_gm = bound - (profile.b_gm.len() as f64 - pf / 16.0).abs();
    let slack_r = bound - (profile.b_r.len() as f64 - pf / 12.0).abs();
    Ok(CobeliReport {
        p,
        card_gm: profile.b_gm.len(),
        card_r: profile.b_r.len(),
        bound,
        holds_gm: slack_gm >= 0.0,
        holds_r: slack_r >= 0.0,
        slack_gm,
        slack_r,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Exceedance {
    /// Primes `5 <= p <= x` with `M_R(p) > M_GM(p)`, ascending.
    pub primes: Vec<u64>,
    /// Largest `M_R - M_GM` seen and the first prime attaining it.
    pub max_gap: Option<(u64, u64)>,
}

/// Profiles for every prime in `[5, x]`, computed in parallel, in order.
pub fn profiles_up_to(x: u64) -> Vec<BetaProfile> {
    let primes: Vec<u64> = primes_up_to(x).into_iter().filter(|&p| p >= 5).collect();
    primes
        .par_iter()
        .map(|&p| beta_profile(p).expect("sieved primes are valid"))
        .collect()
}

pub fn scan_exceeding(x: u64) -> Exceedance {
    let mut primes = Vec::new();
    let mut max_gap: Option<(u64, u64)> = None;
    for profile in profiles_up_to(x) {
        // undefined bounds are skipped, not treated as zero
        let (Some(gm), Some(r)) = (profile.m_gm, profile.m_r) else { continue };
        if r > gm {
            primes.push(profile.p);
            let gap = r - gm;
            if max_gap.map_or(true, |(_, g)| gap > g) {
                max_gap = Some((profile.p, gap));
            }
        }
    }
    Exceedance { primes, max_gap }
}
