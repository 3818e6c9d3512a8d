//! Slow, trusted baselines for cyclotomic coefficients.
//!
//! [`phi_coeffs`] expands `Φ_n = ∏_{d | n} (1 - x^d)^{μ(n/d)}` as a power
//! series truncated at degree `φ(n)` (exact for `n > 1`, since the signs
//! cancel). [`for_each_ternary_coeff`] streams the product
//! `(1 + x^{pq} + x^{2pq} + …)(1 + … + x^{p-1} - x^q - … - x^{q+p-1}) Φ_pq(x^r)`
//! using a ring buffer of length `pq`, never the full coefficient vector.
//!
//! Neither routine touches the closed-form binary formula or modular
//! inverses, so both stay independent of the Kaplan evaluator.

use std::io::{self, Write};

use thiserror::Error;

use crate::numtheory::{divisors, euler_phi, is_prime, moebius};

/// Default cap on the degree `phi_coeffs` will materialize.
pub const DEFAULT_DENSE_LIMIT: u64 = 50_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("degree {degree} exceeds the limit {limit}")]
    TooLarge { degree: u128, limit: u64 },
    #[error("n must be positive")]
    ZeroIndex,
    #[error("({p}, {q}, {r}) must be primes with 2 < p < q < r")]
    InvalidPrimes { p: u64, q: u64, r: u64 },
    #[error("upto = {upto} exceeds the degree {degree}")]
    BeyondDegree { upto: u64, degree: u128 },
    #[error("coefficient {value} at index {index} does not fit in a narrow integer")]
    Overflow { index: u64, value: i64 },
}

/// Dense coefficients of Φ_n, constant term first.
pub fn phi_coeffs(n: u64) -> Result<Vec<i64>, OracleError> {
    phi_coeffs_with_limit(n, DEFAULT_DENSE_LIMIT)
}

pub fn phi_coeffs_with_limit(n: u64, limit: u64) -> Result<Vec<i64>, OracleError> {
    if n == 0 {
        return Err(OracleError::ZeroIndex);
    }
    if n == 1 {
        // Φ_1 = x - 1
        return Ok(vec![-1, 1]);
    }
    let degree = euler_phi(n);
    if degree > limit {
        return Err(OracleError::TooLarge { degree: degree as u128, limit });
    }
    let len = degree as usize + 1;
    let mut coeffs = vec![0i64; len];
    coeffs[0] = 1;
    // Multiplications first keep the intermediate series short-lived; the
    // truncated series arithmetic is exact in any order.
    let divs = divisors(n);
    for &d in &divs {
        if moebius(n / d) == 1 {
            let d = d as usize;
            for i in (d..len).rev() {
                coeffs[i] -= coeffs[i - d];
            }
        }
    }
    for &d in &divs {
        if moebius(n / d) == -1 {
            let d = d as usize;
            for i in d..len {
                coeffs[i] += coeffs[i - d];
            }
        }
    }
    Ok(coeffs)
}

fn check_triple(p: u64, q: u64, r: u64) -> Result<(), OracleError> {
    if p < 3 || !(p < q && q < r) || !is_prime(p) || !is_prime(q) || !is_prime(r) {
        return Err(OracleError::InvalidPrimes { p, q, r });
    }
    Ok(())
}

/// Streams the coefficients of Φ_pqr for degrees `0..=upto` into `visit`.
///
/// Memory is `O(pq)`: the binary factor Φ_pq comes from [`phi_coeffs`] and
/// the geometric factor `1/(1 - x^{pq})` is applied through a ring buffer.
pub fn for_each_ternary_coeff<F>(
    p: u64,
    q: u64,
    r: u64,
    upto: u64,
    mut visit: F,
) -> Result<(), OracleError>
where
    F: FnMut(u64, i8),
{
    check_triple(p, q, r)?;
    let degree = (p as u128 - 1) * (q as u128 - 1) * (r as u128 - 1);
    if upto as u128 > degree {
        return Err(OracleError::BeyondDegree { upto, degree });
    }
    let pq = p * q;
    let binary = phi_coeffs(pq)?;
    let mut ring = vec![0i64; pq as usize];
    // Track n mod r for n and n - q incrementally.
    let mut n_mod_r = 0u64;
    for n in 0..=upto {
        // Coefficient of x^n in (Σ_{d<p} x^d - Σ_{d<p} x^{q+d}) Φ_pq(x^r).
        // Only d ≡ n (mod r) contributes; r > q > p leaves at most one such
        // d in [0, p) and at most two candidates for [q, q + p).
        let mut h = 0i64;
        let lookup = |d: u64| binary.get(((n - d) / r) as usize).copied().unwrap_or(0);
        if n_mod_r < p {
            h += lookup(n_mod_r);
        }
        for d in [n_mod_r, n_mod_r + r] {
            if d >= q && d < q + p && d <= n {
                h -= lookup(d);
            }
        }
        let slot = (n % pq) as usize;
        // ring[slot] still holds c[n - pq] (or 0 for n < pq).
        let c = h + ring[slot];
        ring[slot] = c;
        let narrow = i8::try_from(c).map_err(|_| OracleError::Overflow { index: n, value: c })?;
        visit(n, narrow);
        n_mod_r += 1;
        if n_mod_r == r {
            n_mod_r = 0;
        }
    }
    Ok(())
}

/// Coefficients of Φ_pqr up to degree `upto`, via the sparse product identity.
pub fn ternary_product_coeffs(p: u64, q: u64, r: u64, upto: u64) -> Result<Vec<i8>, OracleError> {
    if upto > DEFAULT_DENSE_LIMIT {
        return Err(OracleError::TooLarge { degree: upto as u128, limit: DEFAULT_DENSE_LIMIT });
    }
    let mut out = Vec::with_capacity(upto as usize + 1);
    for_each_ternary_coeff(p, q, r, upto, |_, c| out.push(c))?;
    Ok(out)
}

/// Writes `index,coefficient` rows (with a header) for external inspection.
pub fn write_csv<W: Write, T: Copy + Into<i64>>(mut out: W, coeffs: &[T]) -> io::Result<()> {
    writeln!(out, "index,coefficient")?;
    for (i, &c) in coeffs.iter().enumerate() {
        writeln!(out, "{},{}", i, c.into())?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Schoolbook reference: Φ_n = (x^n - 1) / ∏_{d | n, d < n} Φ_d.
    fn by_recursive_division(n: u64) -> Vec<i64> {
        let mut cache: Vec<Vec<i64>> = vec![Vec::new(); n as usize + 1];
        for m in 1..=n {
            if n % m != 0 {
                continue;
            }
            let mut num = vec![0i64; m as usize + 1];
            num[0] = -1;
            num[m as usize] = 1;
            for d in 1..m {
                if m % d == 0 {
                    num = poly_div_exact(&num, &cache[d as usize]);
                }
            }
            cache[m as usize] = num;
        }
        cache[n as usize].clone()
    }

    fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
        let mut rem = num.to_vec();
        let dl = den.len();
        let lead = *den.last().unwrap();
        let mut quot = vec![0i64; num.len() - dl + 1];
        for i in (0..quot.len()).rev() {
            let c = rem[i + dl - 1] / lead;
            quot[i] = c;
            for j in 0..dl {
                rem[i + j] -= c * den[j];
            }
        }
        assert!(rem.iter().all(|&x| x == 0));
        quot
    }

    #[test]
    fn small_examples() {
        assert_eq!(phi_coeffs(6).unwrap(), vec![1, -1, 1]);
        assert_eq!(phi_coeffs(15).unwrap(), vec![1, -1, 0, 1, -1, 1, 0, -1, 1]);
        assert_eq!(phi_coeffs(105).unwrap()[7], -2);
        assert_eq!(phi_coeffs(1).unwrap(), vec![-1, 1]);
        assert_eq!(phi_coeffs(2).unwrap(), vec![1, 1]);
        assert!(matches!(phi_coeffs(0), Err(OracleError::ZeroIndex)));
        assert!(matches!(
            phi_coeffs_with_limit(105, 10),
            Err(OracleError::TooLarge { .. })
        ));
    }

    #[test]
    fn mobius_product_matches_recursive_division() {
        for n in 1..=300 {
            assert_eq!(phi_coeffs(n).unwrap(), by_recursive_division(n), "n = {n}");
        }
    }

    #[test]
    fn ternary_product_matches_mobius_product() {
        for (p, q, r) in [(3, 5, 7), (3, 5, 11), (3, 7, 11), (5, 7, 11), (3, 5, 43), (5, 11, 13)] {
            let n = p * q * r;
            let dense = phi_coeffs(n).unwrap();
            let degree = dense.len() as u64 - 1;
            let streamed = ternary_product_coeffs(p, q, r, degree).unwrap();
            let widened: Vec<i64> = streamed.iter().map(|&c| c as i64).collect();
            assert_eq!(widened, dense, "n = {n}");
            // palindromic, and Φ_n(1) = 1
            assert!(dense.iter().eq(dense.iter().rev()));
            assert_eq!(dense.iter().sum::<i64>(), 1);
        }
        assert_eq!(ternary_product_coeffs(3, 5, 7, 0).unwrap(), vec![1]);
        assert_eq!(ternary_product_coeffs(11, 107, 14813, 0).unwrap(), vec![1]);
    }

    #[test]
    fn ternary_product_rejects_bad_input() {
        assert!(matches!(
            ternary_product_coeffs(3, 5, 7, 49),
            Err(OracleError::BeyondDegree { .. })
        ));
        assert!(matches!(
            ternary_product_coeffs(3, 7, 5, 1),
            Err(OracleError::InvalidPrimes { .. })
        ));
    }

    #[test]
    fn csv_output() {
        let mut buf = Vec::new();
        write_csv(&mut buf, &[1i64, -1, 1]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "index,coefficient\n0,1\n1,-1\n2,1\n");
    }
}
