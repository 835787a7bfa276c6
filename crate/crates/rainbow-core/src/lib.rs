//! Rainbow numbers of cyclic groups for the Sidon equation
//! `x1 + x2 = x3 + x4` and the Schur equation `x1 + x2 = x3`.
//!
//! The crate computes the closed-form rainbow numbers from the prime
//! factorization ([`formulas`]), constructs extremal rainbow-free colorings
//! ([`construct`]), extracts rainbow witnesses constructively by coset
//! reduction ([`reduce`]), and certifies the closed forms by exhaustive
//! search over exact colorings up to symmetry ([`certify`]). The brute-force
//! solver ([`solver`]) is the ground truth everything else is tested against.

pub mod analyzer;
pub mod certify;
pub mod construct;
pub mod format;
pub mod formulas;
pub mod group;
pub mod reduce;
pub mod solver;

pub use group::{AffineMap, Coloring, CyclicIndex, LinearEquation, RainbowWitness};
