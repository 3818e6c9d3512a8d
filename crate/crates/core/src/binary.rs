//! Coefficients of binary cyclotomic polynomials `Φ_pq` in closed form.
//!
//! Every `0 <= m < pq` decomposes as `m = a*p + b*q - δ*pq` with the
//! *p-part* `a ∈ [0, q)`, the *q-part* `b ∈ [0, p)` and `δ ∈ {0, 1}`. With
//! `ρ, σ` fixed by `1 + pq = (ρ+1)p + (σ+1)q`, the coefficient of `x^m` is
//! `1` when both parts are small (`a <= ρ`, `b <= σ`), `-1` when both are
//! large, and `0` otherwise.

use thiserror::Error;

use crate::numtheory::{is_prime, mod_inverse};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BinaryError {
    #[error("({p}, {q}) must be odd primes with p < q")]
    InvalidPrimes { p: u64, q: u64 },
    #[error("pq = {pq} exceeds the supported 32-bit range")]
    TooLarge { pq: u128 },
    #[error("index {m} is outside [0, {pq})")]
    OutOfRange { m: u64, pq: u64 },
}

/// Decomposition of an index `m < pq` into its p-part and q-part.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PartPair {
    pub p_part: u64,
    pub q_part: u64,
    /// 1 when `p_part*p + q_part*q` overshoots `m` by `pq`.
    pub wraps: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BinaryContext {
    p: u64,
    q: u64,
    pq: u64,
    rho: u64,
    sigma: u64,
    /// p⁻¹ mod q
    p_inv_q: u64,
    /// q⁻¹ mod p
    q_inv_p: u64,
}

impl BinaryContext {
    pub fn new(p: u64, q: u64) -> Result<Self, BinaryError> {
        if p < 3 || p >= q || p % 2 == 0 || !is_prime(p) || !is_prime(q) {
            return Err(BinaryError::InvalidPrimes { p, q });
        }
        let pq = p as u128 * q as u128;
        if pq >= 1 << 32 {
            return Err(BinaryError::TooLarge { pq });
        }
        let pq = pq as u64;
        let p_inv_q = mod_inverse(p as i128, q).expect("distinct primes").value();
        let q_inv_p = mod_inverse(q as i128, p).expect("distinct primes").value();
        // (σ+1) ≡ q⁻¹ (mod p) with 1 <= σ+1 <= p-1; ρ then follows exactly.
        let sigma = q_inv_p - 1;
        let rest = pq + 1 - (sigma + 1) * q;
        debug_assert_eq!(rest % p, 0);
        let rho = rest / p - 1;
        debug_assert_eq!(1 + pq, (rho + 1) * p + (sigma + 1) * q);
        Ok(BinaryContext { p, q, pq, rho, sigma, p_inv_q, q_inv_p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn pq(&self) -> u64 {
        self.pq
    }

    pub fn rho(&self) -> u64 {
        self.rho
    }

    pub fn sigma(&self) -> u64 {
        self.sigma
    }

    /// p⁻¹ mod q, the multiplier that extracts the p-part.
    pub fn p_inv_mod_q(&self) -> u64 {
        self.p_inv_q
    }

    /// q⁻¹ mod p, the multiplier that extracts the q-part.
    pub fn q_inv_mod_p(&self) -> u64 {
        self.q_inv_p
    }

    /// φ(pq) = (p-1)(q-1), the degree of Φ_pq.
    pub fn degree(&self) -> u64 {
        (self.p - 1) * (self.q - 1)
    }

    #[inline]
    pub fn p_part(&self, m: u64) -> u64 {
        (m % self.q) * self.p_inv_q % self.q
    }

    #[inline]
    pub fn q_part(&self, m: u64) -> u64 {
        (m % self.p) * self.q_inv_p % self.p
    }

    pub fn parts(&self, m: u64) -> Result<PartPair, BinaryError> {
        if m >= self.pq {
            return Err(BinaryError::OutOfRange { m, pq: self.pq });
        }
        let p_part = self.p_part(m);
        let q_part = self.q_part(m);
        let wraps = (p_part * self.p + q_part * self.q > m) as u8;
        debug_assert_eq!(
            p_part * self.p + q_part * self.q - wraps as u64 * self.pq,
            m
        );
        Ok(PartPair { p_part, q_part, wraps })
    }

    /// Sign pattern from the parts alone: `1` if both parts are in the low
    /// range, `-1` if both are in the high range, `0` otherwise.
    #[inline]
    pub fn sign_from_parts(&self, p_part: u64, q_part: u64) -> i8 {
        match (p_part <= self.rho, q_part <= self.sigma) {
            (true, true) => 1,
            (false, false) => -1,
            _ => 0,
        }
    }

    /// Coefficient of `x^m` in Φ_pq; zero for `m >= pq`.
    #[inline]
    pub fn a_pq(&self, m: u64) -> i8 {
        if m >= self.pq {
            return 0;
        }
        self.sign_from_parts(self.p_part(m), self.q_part(m))
    }

    pub fn same_range(&self, pp: &PartPair) -> bool {
        self.sign_from_parts(pp.p_part, pp.q_part) != 0
    }
}
