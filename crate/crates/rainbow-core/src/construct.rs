//! Extremal rainbow-Sidon-free colorings: lift a base coloring of the
//! selected prime through the remaining prime factors.

use thiserror::Error;

use crate::formulas::{self, factor_profile};
use crate::group::{Coloring, GroupError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConstructError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("order must be at least 2, got {0}")]
    OrderTooSmall(u64),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Expand a coloring of `Z_n` to `Z_{pn}`, preserving rainbow-Sidon-freeness.
///
/// For `p <= 3` the inserted elements all take one new color; for `p >= 5`
/// the elements at `±1 mod p` take one new color and the rest a second.
pub fn lift(c: &Coloring, p: u64) -> Result<Coloring, ConstructError> {
    if !formulas::is_prime(p) {
        return Err(ConstructError::NotPrime(p));
    }
    let p = p as usize;
    let n = c.n();
    let r = c.palette();
    let ids: Vec<u32> = (0..p * n)
        .map(|x| {
            if x % p == 0 {
                c.color(x / p)
            } else if p <= 3 {
                r
            } else if x % p == 1 || x % p == p - 1 {
                r
            } else {
                r + 1
            }
        })
        .collect();
    Ok(Coloring::from_exact(p * n, &ids)?)
}

/// An exact rainbow-Sidon-free coloring of `Z_n` with `rb_sidon(n) - 1`
/// colors: the fixed base coloring of `Z_{p_m}` lifted through the remaining
/// factors in increasing order.
pub fn extremal_coloring(n: u64) -> Result<Coloring, ConstructError> {
    if n < 2 {
        return Err(ConstructError::OrderTooSmall(n));
    }
    let profile = factor_profile(n).expect("n >= 2");
    let base = if profile.p_m == 2 {
        Coloring::new(2, &[0, 1])?
    } else {
        // Any exact 3-coloring works; this one is fixed for determinism.
        let pm = profile.p_m as usize;
        let ids: Vec<u32> = (0..pm).map(|x| (x as u32).min(2)).collect();
        Coloring::new(pm, &ids)?
    };
    let mut c = base;
    for (i, &p) in profile.factors.iter().enumerate() {
        if i != profile.m {
            c = lift(&c, p)?;
        }
    }
    debug_assert_eq!(c.n() as u64, n);
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::rb_sidon;
    use crate::group::LinearEquation;
    use crate::solver;

    #[test]
    fn lift_examples() {
        let c = Coloring::new(2, &[0, 1]).unwrap();
        let lifted = lift(&c, 5).unwrap();
        assert_eq!(lifted.colors(), &[0, 2, 3, 3, 2, 1, 2, 3, 3, 2]);
        assert_eq!(lifted.palette(), 4);

        let c = Coloring::new(3, &[0, 1, 2]).unwrap();
        let lifted = lift(&c, 2).unwrap();
        assert_eq!(lifted.colors(), &[0, 3, 1, 3, 2, 3]);
        assert_eq!(lifted.palette(), 4);
        assert!(solver::is_rainbow_free(&lifted, &LinearEquation::sidon()));

        let c = Coloring::new(1, &[0]).unwrap();
        let lifted = lift(&c, 3).unwrap();
        assert_eq!(lifted.colors(), &[0, 1, 1]);

        assert_eq!(lift(&c, 6), Err(ConstructError::NotPrime(6)));
    }

    #[test]
    fn lift_palette_arithmetic() {
        let c = Coloring::new(4, &[0, 1, 0, 2]).unwrap();
        assert_eq!(lift(&c, 2).unwrap().palette(), 4);
        assert_eq!(lift(&c, 3).unwrap().palette(), 4);
        assert_eq!(lift(&c, 5).unwrap().palette(), 5);
        assert_eq!(lift(&c, 7).unwrap().palette(), 5);
    }

    #[test]
    fn lift_restricts_to_the_subgroup() {
        let c = Coloring::new(6, &[0, 1, 2, 2, 1, 0]).unwrap();
        for p in [2u64, 3, 5] {
            let lifted = lift(&c, p).unwrap();
            let restricted: Vec<u32> =
                (0..6).map(|k| lifted.color(k * p as usize)).collect();
            assert_eq!(restricted, c.colors());
        }
    }

    #[test]
    fn extremal_examples() {
        let c = extremal_coloring(7).unwrap();
        assert_eq!(c.colors(), &[0, 1, 2, 2, 2, 2, 2]);
        assert!(solver::is_rainbow_free(&c, &LinearEquation::sidon()));

        let c = extremal_coloring(9).unwrap();
        assert_eq!(c.colors(), &[0, 3, 3, 1, 3, 3, 2, 3, 3]);
        assert_eq!(c.palette() as u64, rb_sidon(9) - 1);
        assert!(solver::is_rainbow_free(&c, &LinearEquation::sidon()));

        let c = extremal_coloring(10).unwrap();
        assert_eq!(c.palette() as u64, rb_sidon(10) - 1);
        assert!(solver::is_rainbow_free(&c, &LinearEquation::sidon()));

        assert_eq!(extremal_coloring(2).unwrap().colors(), &[0, 1]);
        assert_eq!(extremal_coloring(3).unwrap().colors(), &[0, 1, 2]);
    }

    #[test]
    fn extremal_palette_is_tight_at_desk_scale() {
        for n in 2..=500u64 {
            let c = extremal_coloring(n).unwrap();
            assert_eq!(c.palette() as u64, rb_sidon(n) - 1, "n={n}");
        }
    }

    #[test]
    fn lift_soundness_small_sweep() {
        // Solver-verified rainbow-free inputs stay rainbow-free after lifting.
        let sidon = LinearEquation::sidon();
        for m in 2..=12u64 {
            let c = extremal_coloring(m).unwrap();
            assert!(solver::is_rainbow_free(&c, &sidon));
            for p in [2u64, 3, 5, 7] {
                if p * m <= 60 {
                    let lifted = lift(&c, p).unwrap();
                    assert!(solver::is_rainbow_free(&lifted, &sidon), "m={m} p={p}");
                }
            }
        }
    }
}
