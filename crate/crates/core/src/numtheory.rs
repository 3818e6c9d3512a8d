//! Exact integer primitives: primality, modular inverses, arithmetic
//! functions and prime search in arithmetic progressions.
//!
//! Everything here is pure and allocation-free except [`factorize`].

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumTheoryError {
    #[error("{a} is not invertible modulo {m}")]
    NotInvertible { a: i128, m: u64 },
    #[error("modulus must be positive")]
    ZeroModulus,
    #[error("residue {value} is out of range for modulus {modulus}")]
    OutOfRange { value: u64, modulus: u64 },
    #[error("class {value} mod {modulus} is not coprime to its modulus")]
    NotCoprime { value: u64, modulus: u64 },
    #[error("no prime in class {value} mod {modulus} below 2^64 starting from {lower}")]
    SearchOverflow { value: u64, modulus: u64, lower: u64 },
}

/// A congruence class `value mod modulus` with `0 <= value < modulus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Residue {
    value: u64,
    modulus: u64,
}

impl Residue {
    pub fn new(value: u64, modulus: u64) -> Result<Self, NumTheoryError> {
        if modulus == 0 {
            return Err(NumTheoryError::ZeroModulus);
        }
        if value >= modulus {
            return Err(NumTheoryError::OutOfRange { value, modulus });
        }
        Ok(Residue { value, modulus })
    }

    /// Reduces an arbitrary signed integer into `[0, modulus)`.
    pub fn reduce(a: i128, modulus: u64) -> Result<Self, NumTheoryError> {
        if modulus == 0 {
            return Err(NumTheoryError::ZeroModulus);
        }
        let value = a.rem_euclid(modulus as i128) as u64;
        Ok(Residue { value, modulus })
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// The class `-self`.
    pub fn neg(&self) -> Self {
        let value = if self.value == 0 { 0 } else { self.modulus - self.value };
        Residue { value, modulus: self.modulus }
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.value, self.modulus)
    }
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

// Deterministic for every n < 3.3 * 10^24, in particular for all u64.
const MR_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic Miller–Rabin primality test valid for every `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_WITNESSES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Extended Euclid on signed 128-bit integers: returns `(g, x, y)` with
/// `a*x + b*y = g = gcd(a, b) >= 0`.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// The inverse of `a` modulo `m`, as a residue in `(0, m)` (or `0 mod 1`).
pub fn mod_inverse(a: i128, m: u64) -> Result<Residue, NumTheoryError> {
    if m == 0 {
        return Err(NumTheoryError::ZeroModulus);
    }
    let a_red = a.rem_euclid(m as i128);
    let (g, x, _) = ext_gcd(a_red, m as i128);
    if g != 1 {
        return Err(NumTheoryError::NotInvertible { a, m });
    }
    Residue::reduce(x, m)
}

/// Smallest prime `>= lower` in the class `class`.
pub fn next_prime_in_ap(class: Residue, lower: u64) -> Result<u64, NumTheoryError> {
    nth_prime_in_ap(class, lower, 1)
}

/// The `n`-th (1-based) prime `>= lower` in the class `class`.
pub fn nth_prime_in_ap(class: Residue, lower: u64, n: u64) -> Result<u64, NumTheoryError> {
    let (a, m) = (class.value, class.modulus);
    let overflow = NumTheoryError::SearchOverflow { value: a, modulus: m, lower };
    if gcd(a, m) != 1 {
        return Err(NumTheoryError::NotCoprime { value: a, modulus: m });
    }
    let offset = (a as i128 - lower as i128).rem_euclid(m as i128) as u64;
    let mut candidate = lower.checked_add(offset).ok_or(overflow.clone())?;
    let mut remaining = n.max(1);
    loop {
        if is_prime(candidate) {
            remaining -= 1;
            if remaining == 0 {
                return Ok(candidate);
            }
        }
        candidate = candidate.checked_add(m).ok_or(overflow.clone())?;
    }
}

/// Prime factorization by trial division, as `(prime, exponent)` pairs in
/// ascending order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .map(|(p, e)| (p - 1) * p.pow(e - 1))
        .product()
}

pub fn moebius(n: u64) -> i64 {
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// All positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut divs = vec![1u64];
    for (p, e) in factorize(n) {
        let len = divs.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs.sort_unstable();
    divs
}

/// Primes `<= limit` by the sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut i = 2;
    while i * i <= n {
        if !composite[i] {
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
        i += 1;
    }
    (2..=n).filter(|&k| !composite[k]).map(|k| k as u64).collect()
}
