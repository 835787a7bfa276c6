//! Closed-form rainbow numbers for the Sidon and Schur equations from the
//! prime factorization of the group order.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormulaError {
    #[error("order must be at least 2, got {0}")]
    OrderTooSmall(u64),
}

/// Prime factorization of `n` together with the selected factor `p_m` and the
/// counts `f1` (small remaining primes) and `f2` (large remaining primes).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorizationProfile {
    pub n: u64,
    /// Primes in increasing order, with multiplicity.
    pub factors: Vec<u64>,
    /// Index (0-based) of the selected prime: the smallest index with
    /// `p_m >= 3`, or the last index when every factor is 2.
    pub m: usize,
    pub p_m: u64,
    /// Remaining factors `<= 3`.
    pub f1: usize,
    /// Remaining factors `>= 5`.
    pub f2: usize,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factors of `n` in increasing order, by trial division.
pub fn prime_factors(n: u64) -> Vec<u64> {
    let mut n = n;
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        while n % d == 0 {
            out.push(d);
            n /= d;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn factor_profile(n: u64) -> Result<FactorizationProfile, FormulaError> {
    if n < 2 {
        return Err(FormulaError::OrderTooSmall(n));
    }
    let factors = prime_factors(n);
    let m = factors
        .iter()
        .position(|&p| p >= 3)
        .unwrap_or(factors.len() - 1);
    let p_m = factors[m];
    let f1 = factors
        .iter()
        .enumerate()
        .filter(|&(i, &p)| i != m && p <= 3)
        .count();
    let f2 = factors.len() - 1 - f1;
    Ok(FactorizationProfile { n, factors, m, p_m, f1, f2 })
}

fn rb_sidon_prime(p: u64) -> u64 {
    debug_assert!(is_prime(p));
    if p == 2 {
        3
    } else {
        4
    }
}

fn rb_schur_prime(p: u64) -> u64 {
    debug_assert!(is_prime(p));
    if p <= 3 {
        3
    } else {
        4
    }
}

/// Rainbow number of `Z_n` for the Sidon equation.
/// `rb(Z_1, S) = 2` extends the `rb = n+1` convention to the trivial group.
pub fn rb_sidon(n: u64) -> u64 {
    if n == 1 {
        return 2;
    }
    let profile = factor_profile(n).expect("n >= 2");
    rb_sidon_prime(profile.p_m) + profile.f1 as u64 + 2 * profile.f2 as u64
}

/// Rainbow number of `Z_n` for the Schur equation:
/// `2(1-k) + Σ rb(Z_{p_i}, 1)` over the prime factorization.
pub fn rb_schur(n: u64) -> Result<u64, FormulaError> {
    if n < 2 {
        return Err(FormulaError::OrderTooSmall(n));
    }
    let factors = prime_factors(n);
    let k = factors.len() as i64;
    let sum: i64 = factors.iter().map(|&p| rb_schur_prime(p) as i64).sum();
    Ok((2 * (1 - k) + sum) as u64)
}

/// The coarse upper bound `2(1-k) + Σ rb(Z_{p_i}, S)`; exceeds `rb_sidon`
/// exactly when `9 | n`.
pub fn rb_sidon_upper_ub1(n: u64) -> Result<u64, FormulaError> {
    if n < 2 {
        return Err(FormulaError::OrderTooSmall(n));
    }
    let factors = prime_factors(n);
    let k = factors.len() as i64;
    let sum: i64 = factors.iter().map(|&p| rb_sidon_prime(p) as i64).sum();
    Ok((2 * (1 - k) + sum) as u64)
}
