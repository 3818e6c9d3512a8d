//! Explicit ternary cyclotomic polynomials whose coefficient set is the
//! full interval `[-(p-l-2)/2, (p+l+2)/2]` for odd `l` and primes
//! `p >= l² + 3l + 5`.
//!
//! The pipeline is
//!
//! 1. [`residue_w`]: `w ≡ 2/(l+2) (mod p)` and which of the two admissible
//!    intervals it falls in (the *branch*);
//! 2. [`find_q`]: a prime `q >= (p+l)p/2` with `q ≡ w (mod p)`;
//! 3. [`structure_constants`]: `ρ, σ` of `(p, q)` and `ρ = (p+l)s/2 + τ`;
//! 4. [`find_r`]: a prime `r > pq` with `-r⁻¹ ≡ ±(q - sp) (mod pq)`;
//! 5. [`target_indices`]: indices `k⁺, k⁻` placed just above `α⁺, α⁻`;
//! 6. [`construct`]: evaluate `a_pqr(k±)` (and optionally scan everything)
//!    and record the outcome in a [`ConstructionCertificate`].
//!
//! Nothing is assumed: every claimed value is evaluated and compared.

mod certificate;
mod tables;

pub use certificate::CertificateJson;
pub use tables::{table_report, verify_tables, TableCheck, TableReport};

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::binary::BinaryContext;
use crate::kaplan::{self, KaplanContext, KaplanError, ScanOptions};
use crate::numtheory::{gcd, is_prime, mod_inverse, nth_prime_in_ap, NumTheoryError, Residue};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("w = {w} lies in neither admissible interval for l = {l}, p = {p}")]
    IntervalMiss { l: u64, p: u64, w: u64 },
    #[error("structure constant division is inexact: {0}")]
    InexactDivision(String),
    #[error("structure constant check failed: {0}")]
    StructureViolation(String),
    #[error("target index out of range: {0}")]
    RangeViolation(String),
    #[error("certification failed{}: {}", if *.boundary_w { " (boundary w)" } else { "" }, .failures.join("; "))]
    CertificationFailed {
        boundary_w: bool,
        failures: Vec<String>,
        certificate: Box<ConstructionCertificate>,
    },
    #[error("table mismatch in {check} at row {row}: {detail}")]
    TableMismatch { check: String, row: u64, detail: String },
    #[error("malformed certificate: {0}")]
    Malformed(String),
    #[error(transparent)]
    NumTheory(#[from] NumTheoryError),
    #[error(transparent)]
    Kaplan(#[from] KaplanError),
}

/// Which of the two residue intervals `w` falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// `l+2 <= w <= (p-l-2)/2`
    One,
    /// `(p+l+2)/2 <= w <= p-l-2`
    Two,
}

impl Branch {
    pub fn number(self) -> u8 {
        match self {
            Branch::One => 1,
            Branch::Two => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VerifyMode {
    /// Evaluate only the two target coefficients.
    #[default]
    Extremes,
    /// Additionally scan the whole coefficient set.
    Full,
}

impl VerifyMode {
    /// Full scans for `p <= 11`, extremes otherwise.
    pub fn default_for(p: u64) -> Self {
        if p < 13 {
            VerifyMode::Full
        } else {
            VerifyMode::Extremes
        }
    }
}

impl FromStr for VerifyMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "extremes" => Ok(VerifyMode::Extremes),
            "full" => Ok(VerifyMode::Full),
            other => Err(format!("unknown verify mode `{other}` (expected extremes|full)")),
        }
    }
}

impl fmt::Display for VerifyMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VerifyMode::Extremes => "extremes",
            VerifyMode::Full => "full",
        })
    }
}

/// Whether the coefficient set is shifted up (`δ₊`) or down (`δ₋`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    DeltaPlus,
    DeltaMinus,
}

impl Variant {
    pub fn flipped(self) -> Self {
        match self {
            Variant::DeltaPlus => Variant::DeltaMinus,
            Variant::DeltaMinus => Variant::DeltaPlus,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::DeltaPlus => "delta_plus",
            Variant::DeltaMinus => "delta_minus",
        }
    }
}

/// How the target indices of a certificate were obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Source {
    /// Placed by the construction's index table.
    Construction,
    /// Witnessed by a scan after replacing `r` with its flip partner.
    Flip,
}

impl Source {
    pub fn as_str(self) -> &'static str {
        match self {
            Source::Construction => "construction",
            Source::Flip => "flip",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConstructionParams {
    pub l: u64,
    pub p: u64,
    pub w: Residue,
    pub branch: Branch,
    pub boundary_w: bool,
    pub q: u64,
    pub rho: u64,
    pub sigma: u64,
    pub s: u64,
    pub tau: u64,
    pub r: u64,
}

impl ConstructionParams {
    pub fn pq(&self) -> u64 {
        self.p * self.q
    }

    /// (p+l+2)/2, the predicted largest coefficient.
    pub fn predicted_max(&self) -> i64 {
        ((self.p + self.l + 2) / 2) as i64
    }

    /// -(p-l-2)/2, the predicted smallest coefficient.
    pub fn predicted_min(&self) -> i64 {
        -(((self.p - self.l - 2) / 2) as i64)
    }

    pub fn delta(&self) -> u64 {
        (self.l + 1) / 2
    }

    /// The residue `w` reflected into branch one: `w` or `p - w`.
    pub fn effective_w(&self) -> u64 {
        match self.branch {
            Branch::One => self.w.value(),
            Branch::Two => self.p - self.w.value(),
        }
    }

    pub fn kaplan(&self) -> Result<KaplanContext, KaplanError> {
        KaplanContext::new(self.p, self.q, self.r)
    }

    /// Re-derives every quantity from `(l, p, q, r)` and compares.
    pub fn validate(&self) -> Result<(), ConstructionError> {
        self.validate_structure()?;
        if !self.r_class_ok()? {
            return Err(ConstructionError::Malformed(format!(
                "r = {} is not a prime > pq in the required class",
                self.r
            )));
        }
        Ok(())
    }

    /// Like [`ConstructionParams::validate`] but ignoring `r`, which a flip
    /// moves to the opposite class.
    pub fn validate_structure(&self) -> Result<(), ConstructionError> {
        let (w, branch, boundary_w) = residue_w(self.l, self.p)?;
        let (rho, sigma, s, tau) = structure_constants(self.l, self.p, self.q)?;
        if (w, branch, boundary_w, rho, sigma, s, tau)
            != (self.w, self.branch, self.boundary_w, self.rho, self.sigma, self.s, self.tau)
        {
            return Err(ConstructionError::Malformed(
                "derived parameters disagree with the recorded ones".into(),
            ));
        }
        Ok(())
    }

    fn r_class_ok(&self) -> Result<bool, ConstructionError> {
        let pq = self.pq();
        let class = r_class(self)?;
        Ok(is_prime(self.r) && self.r > pq && self.r % pq == class.value())
    }
}

/// `u`, `t`, `k = u*r + t*pq` and the placement bound `α < k/r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TargetIndex {
    pub u: i128,
    pub t: i128,
    pub k: u128,
    pub alpha: i128,
}

impl TargetIndex {
    /// Picks `t = ⌊(α - u) r / pq⌋ + 1`, the smallest `t` with `α < k/r`.
    pub fn place(u: i128, alpha: i128, r: u64, pq: u64) -> Result<Self, ConstructionError> {
        let (r, pq_i) = (r as i128, pq as i128);
        let t = ((alpha - u) * r).div_euclid(pq_i) + 1;
        let k = u * r + t * pq_i;
        if k <= 0 {
            return Err(ConstructionError::RangeViolation(format!("k = {k} is not positive")));
        }
        let idx = TargetIndex { u, t, k: k as u128, alpha };
        idx.check(r as u64, pq)?;
        Ok(idx)
    }

    /// Canonical decomposition of an arbitrary index `k` with `u ∈ [0, pq)`.
    pub fn from_index(k: u128, r: u64, pq: u64) -> Result<Self, ConstructionError> {
        let u = mod_inverse(r as i128, pq)?.value() as u128 * (k % pq as u128) % pq as u128;
        let t = (k as i128 - u as i128 * r as i128) / pq as i128;
        let alpha = Self::alpha_for(k, r);
        let idx = TargetIndex { u: u as i128, t, k, alpha };
        idx.check_decomposition(r, pq)?;
        Ok(idx)
    }

    /// `⌈k/r⌉ - 1`; for placed indices (`r > pq`) this is the only `α`
    /// compatible with the placement.
    pub fn alpha_for(k: u128, r: u64) -> i128 {
        (k.div_ceil(r as u128) as i128) - 1
    }

    /// `k = u r + t pq` and `α r < k`.
    pub fn check_decomposition(&self, r: u64, pq: u64) -> Result<(), ConstructionError> {
        let (r, pq) = (r as i128, pq as i128);
        let k = self.k as i128;
        if k != self.u * r + self.t * pq {
            return Err(ConstructionError::RangeViolation(format!(
                "k = {k} differs from u*r + t*pq"
            )));
        }
        if self.alpha * r >= k {
            return Err(ConstructionError::RangeViolation(format!(
                "alpha = {} is not below k/r",
                self.alpha
            )));
        }
        Ok(())
    }

    /// The decomposition plus `t = ⌊(α-u) r/pq⌋ + 1`. Only indices placed
    /// by [`TargetIndex::place`] satisfy this; scan witnesses need not.
    pub fn check(&self, r: u64, pq: u64) -> Result<(), ConstructionError> {
        self.check_decomposition(r, pq)?;
        if self.t != ((self.alpha - self.u) * r as i128).div_euclid(pq as i128) + 1 {
            return Err(ConstructionError::RangeViolation(format!(
                "t = {} is not the placement value for alpha = {}",
                self.t, self.alpha
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructionCertificate {
    pub params: ConstructionParams,
    pub variant: Variant,
    pub source: Source,
    pub k_plus: TargetIndex,
    pub k_minus: TargetIndex,
    pub a_plus: i64,
    pub a_minus: i64,
    pub set_min: i64,
    pub set_max: i64,
    pub delta: u64,
    pub full_scan: bool,
    pub verified: bool,
    pub failures: Vec<String>,
}

impl ConstructionCertificate {
    /// The interval the coefficient set should equal.
    pub fn expected_interval(&self) -> (i64, i64) {
        let (lo, hi) = (self.params.predicted_min(), self.params.predicted_max());
        match self.variant {
            Variant::DeltaPlus => (lo, hi),
            Variant::DeltaMinus => (-hi, -lo),
        }
    }

    pub fn ensure_verified(&self) -> Result<(), ConstructionError> {
        if self.verified {
            Ok(())
        } else {
            Err(ConstructionError::CertificationFailed {
                boundary_w: self.params.boundary_w,
                failures: self.failures.clone(),
                certificate: Box::new(self.clone()),
            })
        }
    }

    pub fn to_json(&self) -> CertificateJson {
        CertificateJson::from(self)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("certificate serializes")
    }

    pub fn from_json_str(s: &str) -> Result<Self, ConstructionError> {
        let raw: CertificateJson =
            serde_json::from_str(s).map_err(|e| ConstructionError::Malformed(e.to_string()))?;
        raw.try_into()
    }
}

fn hypothesis(l: u64, p: u64) -> Result<(), ConstructionError> {
    if l % 2 == 0 {
        return Err(ConstructionError::HypothesisViolated(format!("l = {l} must be odd")));
    }
    if !is_prime(p) {
        return Err(ConstructionError::HypothesisViolated(format!("p = {p} is not prime")));
    }
    let bound = l
        .checked_mul(l)
        .and_then(|l2| l2.checked_add(3 * l + 5))
        .ok_or_else(|| ConstructionError::HypothesisViolated(format!("l = {l} is too large")))?;
    if p < bound {
        return Err(ConstructionError::HypothesisViolated(format!(
            "p = {p} is below l^2 + 3l + 5 = {bound}"
        )));
    }
    Ok(())
}

/// `w ≡ 2/(l+2) (mod p)`, its branch, and whether it sits on one of the two
/// interval endpoints `(p-l-2)/2`, `(p+l+2)/2`.
pub fn residue_w(l: u64, p: u64) -> Result<(Residue, Branch, bool), ConstructionError> {
    hypothesis(l, p)?;
    let inv = mod_inverse((l + 2) as i128, p)?;
    let w = Residue::new(2 * inv.value() % p, p)?;
    let v = w.value();
    let low_end = (p - l - 2) / 2;
    let high_start = (p + l + 2) / 2;
    let branch = if l + 2 <= v && v <= low_end {
        Branch::One
    } else if high_start <= v && v <= p - l - 2 {
        Branch::Two
    } else {
        return Err(ConstructionError::IntervalMiss { l, p, w: v });
    };
    let boundary = v == low_end || v == high_start;
    Ok((w, branch, boundary))
}

/// The `j`-th (1-based) prime `q >= (p+l)p/2` with `q ≡ w (mod p)`.
pub fn find_q(l: u64, p: u64, j: u64) -> Result<u64, ConstructionError> {
    let (w, _, _) = residue_w(l, p)?;
    Ok(nth_prime_in_ap(w, (p + l) * p / 2, j)?)
}

/// `(ρ, σ, s, τ)` for the construction, with every structural inequality
/// the index placement relies on checked.
pub fn structure_constants(l: u64, p: u64, q: u64) -> Result<(u64, u64, u64, u64), ConstructionError> {
    let (w, _, _) = residue_w(l, p)?;
    if !is_prime(q) || q <= p || q % p != w.value() || 2 * q < (p + l) * p {
        return Err(ConstructionError::HypothesisViolated(format!(
            "q = {q} must be a prime >= (p+l)p/2 congruent to {w}"
        )));
    }
    let binary = BinaryContext::new(p, q).map_err(|e| ConstructionError::HypothesisViolated(e.to_string()))?;
    let (p_i, q_i, l_i) = (p as i128, q as i128, l as i128);
    let numerator = p_i * q_i - (l_i + 2) * q_i - 2 * p_i + 2;
    if numerator < 0 || numerator % (2 * p_i) != 0 {
        return Err(ConstructionError::InexactDivision(format!("{numerator} / {}", 2 * p)));
    }
    let rho = (numerator / (2 * p_i)) as u64;
    let sigma = (p + l) / 2;
    let half = (p + l) / 2;
    let s = rho / half;
    let tau = rho - s * half;
    let fail = |msg: String| Err(ConstructionError::StructureViolation(msg));
    if binary.rho() != rho || binary.sigma() != sigma {
        return fail(format!(
            "(rho, sigma) = ({rho}, {sigma}) but 1 + pq gives ({}, {})",
            binary.rho(),
            binary.sigma()
        ));
    }
    if 2 * rho >= q {
        return fail(format!("2 rho = {} is not below q = {q}", 2 * rho));
    }
    if q < s * p + 1 || q < (tau + 1) * p {
        return fail(format!("q = {q} is below max(sp + 1, (tau + 1)p)"));
    }
    if s < l + 2 {
        return fail(format!("s = {s} is below l + 2"));
    }
    if q <= rho + s * (p - l - 2) / 2 {
        return fail(format!("q - s(p-l-2)/2 does not exceed rho = {rho}"));
    }
    Ok((rho, sigma, s, tau))
}

/// Class of `r` modulo `pq`: `-(q-sp)⁻¹` for branch one, `+(q-sp)⁻¹` for two.
fn r_class(params: &ConstructionParams) -> Result<Residue, ConstructionError> {
    let pq = params.pq();
    let base = params.q - params.s * params.p;
    if gcd(base, pq) != 1 {
        return Err(ConstructionError::StructureViolation(format!(
            "q - sp = {base} is not coprime to pq"
        )));
    }
    let inv = mod_inverse(base as i128, pq)?;
    Ok(match params.branch {
        Branch::One => inv.neg(),
        Branch::Two => inv,
    })
}

/// The `j`-th (1-based) prime `r > pq` in the branch's class modulo `pq`.
pub fn find_r(params: &ConstructionParams, j: u64) -> Result<u64, ConstructionError> {
    let class = r_class(params)?;
    Ok(nth_prime_in_ap(class, params.pq() + 1, j)?)
}

/// `(k⁺, k⁻)` for the branch, placed above `α⁺ = (p+l)q/2` and
/// `α⁻ = (ρ+s)p - q`, each checked to lie in `(0, φ(pqr)]`.
pub fn target_indices(params: &ConstructionParams) -> Result<(TargetIndex, TargetIndex), ConstructionError> {
    let (p, q, l) = (params.p as i128, params.q as i128, params.l as i128);
    let (rho, s, tau) = (params.rho as i128, params.s as i128, params.tau as i128);
    let alpha_plus = (p + l) * q / 2;
    let alpha_minus = (rho + s) * p - q;
    let (u_plus, u_minus) = match params.branch {
        Branch::One => ((rho - tau) * p, -(p - l - 2) * q / 2 + ((p - 1) * s + tau) * p),
        Branch::Two => ((p - 1) * q - (p - l - 2) * s * p / 2, (p + l) * q / 2 + tau * p),
    };
    let pq = params.pq();
    let plus = TargetIndex::place(u_plus, alpha_plus, params.r, pq)?;
    let minus = TargetIndex::place(u_minus, alpha_minus, params.r, pq)?;
    let degree = (params.p as u128 - 1) * (params.q as u128 - 1) * (params.r as u128 - 1);
    for (name, idx) in [("k_plus", plus), ("k_minus", minus)] {
        if idx.k == 0 || idx.k > degree {
            return Err(ConstructionError::RangeViolation(format!(
                "{name} = {} is outside (0, {degree}]",
                idx.k
            )));
        }
    }
    Ok((plus, minus))
}

/// Builds `(l, p)`'s parameters with the `q_index`-th `q` and `r_index`-th `r`.
pub fn build_params(l: u64, p: u64, q_index: u64, r_index: u64) -> Result<ConstructionParams, ConstructionError> {
    let (w, branch, boundary_w) = residue_w(l, p)?;
    let q = find_q(l, p, q_index)?;
    let (rho, sigma, s, tau) = structure_constants(l, p, q)?;
    let mut params = ConstructionParams { l, p, w, branch, boundary_w, q, rho, sigma, s, tau, r: 0 };
    params.r = find_r(&params, r_index)?;
    Ok(params)
}

/// Runs the whole pipeline and certifies the result.
///
/// Returns [`ConstructionError::CertificationFailed`] (carrying the
/// certificate) when any evaluated value disagrees with the prediction.
pub fn construct(
    l: u64,
    p: u64,
    q_index: u64,
    r_index: u64,
    mode: VerifyMode,
    scan_opts: &ScanOptions,
) -> Result<ConstructionCertificate, ConstructionError> {
    let params = build_params(l, p, q_index, r_index)?;
    certify(params, mode, scan_opts)
}

/// Evaluates and certifies an already assembled parameter set.
pub fn certify(
    params: ConstructionParams,
    mode: VerifyMode,
    scan_opts: &ScanOptions,
) -> Result<ConstructionCertificate, ConstructionError> {
    let (k_plus, k_minus) = target_indices(&params)?;
    let ctx = params.kaplan()?;
    let a_plus = ctx.a_pqr(k_plus.k);
    let a_minus = ctx.a_pqr(k_minus.k);
    let (lo, hi) = (params.predicted_min(), params.predicted_max());
    let mut failures = Vec::new();
    if a_plus != hi {
        failures.push(format!("a(k_plus) = {a_plus}, expected {hi}"));
    }
    if a_minus != lo {
        failures.push(format!("a(k_minus) = {a_minus}, expected {lo}"));
    }
    if a_plus - a_minus != params.p as i64 {
        failures.push(format!("a_plus - a_minus = {} differs from p", a_plus - a_minus));
    }
    // Beiter's bound |a| <= (p+1)/2 must be broken.
    if 2 * a_plus <= params.p as i64 + 1 {
        failures.push(format!("a_plus = {a_plus} does not exceed (p+1)/2"));
    }
    let (set_min, set_max) = match mode {
        VerifyMode::Extremes => (a_minus, a_plus),
        VerifyMode::Full => {
            let set = kaplan::coefficient_set_with(&ctx, scan_opts)?;
            if !set.is_exactly(lo, hi) {
                failures.push(format!(
                    "coefficient set {:?} is not the interval [{lo}, {hi}]",
                    set.values
                ));
            }
            (set.min, set.max)
        }
    };
    let cert = ConstructionCertificate {
        params,
        variant: Variant::DeltaPlus,
        source: Source::Construction,
        k_plus,
        k_minus,
        a_plus,
        a_minus,
        set_min,
        set_max,
        delta: params.delta(),
        full_scan: mode == VerifyMode::Full,
        verified: failures.is_empty(),
        failures,
    };
    cert.ensure_verified()?;
    Ok(cert)
}

/// Replaces `r` by the smallest prime `s > pq` with `s ≡ -r (mod pq)` and
/// certifies that the coefficient set is negated. Extremes mode stops the
/// scan once the negated interval has been covered.
pub fn flip_certificate(
    cert: &ConstructionCertificate,
    mode: VerifyMode,
    scan_opts: &ScanOptions,
) -> Result<ConstructionCertificate, ConstructionError> {
    let ctx = cert.params.kaplan()?;
    let s = kaplan::flip_prime(&ctx)?;
    let partner = KaplanContext::new(cert.params.p, cert.params.q, s)?;
    let variant = cert.variant.flipped();
    let (orig_lo, orig_hi) = cert.expected_interval();
    let (lo, hi) = (-orig_hi, -orig_lo);
    let opts = match mode {
        VerifyMode::Full => ScanOptions { early_exit: None, ..*scan_opts },
        VerifyMode::Extremes => scan_opts.with_early_exit(lo, hi),
    };
    let outcome = kaplan::scan(&partner, &opts)?;
    let mut failures = Vec::new();
    if mode == VerifyMode::Full {
        if let Err(e) = outcome.set.check_ternary(cert.params.p) {
            failures.push(e.to_string());
        }
        if !outcome.jump_one_holds() {
            failures.push(format!("jump of {} between consecutive coefficients", outcome.max_jump));
        }
    }
    if !outcome.set.is_exactly(lo, hi) {
        failures.push(format!(
            "coefficient set {:?} is not the interval [{lo}, {hi}]",
            outcome.set.values
        ));
    }
    if outcome.set.max != -cert.set_min || outcome.set.min != -cert.set_max {
        failures.push("flipped extremes are not the negated originals".into());
    }
    let pq = cert.params.pq();
    let k_plus = TargetIndex::from_index(outcome.max_at, s, pq)?;
    let k_minus = TargetIndex::from_index(outcome.min_at, s, pq)?;
    let flipped = ConstructionCertificate {
        params: ConstructionParams { r: s, ..cert.params },
        variant,
        source: Source::Flip,
        k_plus,
        k_minus,
        a_plus: partner.a_pqr(k_plus.k),
        a_minus: partner.a_pqr(k_minus.k),
        set_min: outcome.set.min,
        set_max: outcome.set.max,
        delta: cert.delta,
        full_scan: outcome.complete,
        verified: failures.is_empty(),
        failures,
    };
    flipped.ensure_verified()?;
    Ok(flipped)
}

/// The `δ₋` partner of a certified `δ₊` instance.
pub fn delta_minus_variant(
    cert: &ConstructionCertificate,
    mode: VerifyMode,
    scan_opts: &ScanOptions,
) -> Result<ConstructionCertificate, ConstructionError> {
    if cert.variant != Variant::DeltaPlus || !cert.verified {
        return Err(ConstructionError::HypothesisViolated(
            "expected a verified delta_plus certificate".into(),
        ));
    }
    flip_certificate(cert, mode, scan_opts)
}

/// `M(p; q) = (p+l+2)/2` for `q` in the construction's class.
///
/// Only the lower bound is certified by this crate; the matching upper
/// bound is a known theorem and can be probed with [`sample_max_height`].
pub fn m_p_q_value(l: u64, p: u64, q: u64) -> Result<u64, ConstructionError> {
    let (w, _, _) = residue_w(l, p)?;
    if !is_prime(q) || 2 * q < (p + l) * p || q % p != w.value() {
        return Err(ConstructionError::HypothesisViolated(format!(
            "q = {q} must be a prime >= (p+l)p/2 congruent to {w}"
        )));
    }
    let value = (p + l + 2) / 2;
    // value < 2p/3
    if 3 * value >= 2 * p {
        return Err(ConstructionError::HypothesisViolated(format!(
            "(p+l+2)/2 = {value} is not below 2p/3"
        )));
    }
    Ok(value)
}

/// Heights `A(pqr)` for the first `count` primes `r > q`.
pub fn sample_max_height(
    p: u64,
    q: u64,
    count: usize,
    scan_opts: &ScanOptions,
) -> Result<Vec<(u64, u64)>, ConstructionError> {
    let mut out = Vec::with_capacity(count);
    let mut r = q + 1;
    while out.len() < count {
        if is_prime(r) {
            let ctx = KaplanContext::new(p, q, r)?;
            let set = kaplan::coefficient_set_with(&ctx, scan_opts)?;
            out.push((r, set.height));
        }
        r += 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests;
