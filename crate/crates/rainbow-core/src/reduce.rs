//! Coset reduction of colorings and constructive extraction of rainbow Sidon
//! witnesses: reduce to a prime quotient, solve there, lift the witness back.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::analyzer::coset_color_table;
use crate::formulas::{is_prime, prime_factors};
use crate::group::{modn, Coloring, LinearEquation, RainbowWitness};
use crate::solver;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReduceError {
    #[error("{t} does not divide {n}")]
    NotADivisor { t: usize, n: usize },
    #[error("{0} is not prime")]
    NotPrime(usize),
    #[error("child witness carries more than one sentinel color")]
    SentinelOverload,
    #[error("no representative recorded for child coset {0}")]
    MissingRepresentative(usize),
    #[error("schur lift preconditions not met: {0}")]
    SchurPreconditions(&'static str),
    #[error("lifted tuple failed revalidation")]
    LiftedWitnessInvalid,
}

/// One coset reduction: the parent coloring of `Z_n` collapsed to a child
/// coloring of `Z_t` (`t = n/p`) relative to the base coset `R_0` after
/// shifting by `j`. The sentinel color (the largest child id) marks cosets
/// whose colors are all inherited from the base coset.
#[derive(Debug, Clone, Serialize)]
pub struct ReductionStep {
    pub n: usize,
    pub p: usize,
    pub t: usize,
    /// Shift applied to the parent: `c'(x) = c(x + shift)`.
    pub shift: usize,
    pub child: Coloring,
    /// Reserved child color id, `child.palette() - 1`.
    pub sentinel: u32,
    /// Colors of the shifted base coset `c'(R_0)`.
    pub base_colors: BTreeSet<u32>,
    /// For each child coset with a non-sentinel color: the smallest parent
    /// element of that coset (in shifted coordinates) realizing the color.
    pub representatives: BTreeMap<usize, usize>,
    /// Parent color carried by each non-sentinel child color id.
    pub child_to_parent: BTreeMap<u32, u32>,
}

#[derive(Debug, Clone)]
pub enum Reduction {
    Step(ReductionStep),
    /// The coset structure itself forced a rainbow Sidon witness.
    Witness(RainbowWitness),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BaseCoset {
    Index(usize),
    Witness(RainbowWitness),
}

/// Smallest index `j` maximizing `|c(R_j)|`. If some coset has two colors
/// outside `c(R_j)` the reduction hypothesis fails and a rainbow Sidon
/// witness is extracted instead.
pub fn select_base_coset(c: &Coloring, t: usize) -> Result<BaseCoset, ReduceError> {
    let n = c.n();
    if t == 0 || n % t != 0 {
        return Err(ReduceError::NotADivisor { t, n });
    }
    let p = n / t;
    if !is_prime(p as u64) {
        return Err(ReduceError::NotPrime(p));
    }
    let table = coset_color_table(c, t).expect("t divides n");
    let j = (0..t).max_by_key(|&i| (table[i].len(), usize::MAX - i)).unwrap();
    for i in 0..t {
        let outside: Vec<u32> = table[i].difference(&table[j]).copied().collect();
        if outside.len() >= 2 {
            return Ok(BaseCoset::Witness(coset_witness(c, t, i, j, outside[0], outside[1])));
        }
    }
    Ok(BaseCoset::Index(j))
}

/// Build the witness promised when `|c(R_i) \ c(R_j)| >= 2`: two elements of
/// `R_i` with distinct colors outside `c(R_j)`, and a pair in `R_j` whose
/// colors differ; such a pair exists because `|c(R_j)| >= 2`.
fn coset_witness(
    c: &Coloring,
    t: usize,
    i: usize,
    j: usize,
    col1: u32,
    col2: u32,
) -> RainbowWitness {
    let n = c.n();
    let p = n / t;
    let x1 = (0..p).map(|k| i + k * t).find(|&x| c.color(x) == col1).unwrap();
    let x2 = (0..p).map(|k| i + k * t).find(|&x| c.color(x) == col2).unwrap();
    for k in 0..p {
        let x3 = j + k * t;
        let x4 = modn(x1 as i64 + x3 as i64 - x2 as i64, n);
        if c.color(x4) != c.color(x3) {
            // x1 + x3 = x2 + x4 with four distinct colors.
            let w = RainbowWitness {
                equation: LinearEquation::sidon(),
                elements: vec![x1, x3, x2, x4],
                colors: vec![c.color(x1), c.color(x3), c.color(x2), c.color(x4)],
            };
            debug_assert_eq!(w.validate(c), Ok(()));
            return w;
        }
    }
    // Unreachable: all shifts agreeing would force |c(R_j)| = 1, which
    // contradicts the maximality of |c(R_j)| >= |c(R_i)| >= 2.
    unreachable!("base coset collapsed to a single color");
}

/// Reduce the coloring through the prime `p`, or short-circuit with a witness.
pub fn reduce_once(c: &Coloring, p: usize) -> Result<Reduction, ReduceError> {
    let n = c.n();
    if p == 0 || n % p != 0 {
        return Err(ReduceError::NotADivisor { t: p, n });
    }
    let t = n / p;
    let j = match select_base_coset(c, t)? {
        BaseCoset::Witness(w) => return Ok(Reduction::Witness(w)),
        BaseCoset::Index(j) => j,
    };
    // c'(x) = c(x + j) moves the base coset to R_0.
    let shifted: Vec<u32> = (0..n).map(|x| c.color(x + j)).collect();
    let shifted = Coloring::from_exact(n, &shifted).expect("shift preserves exactness");
    let table = coset_color_table(&shifted, t).expect("t divides n");
    let base: BTreeSet<u32> = table[0].clone();

    let mut child_ids = vec![0u32; t];
    let mut child_to_parent: BTreeMap<u32, u32> = BTreeMap::new();
    let mut parent_to_child: BTreeMap<u32, u32> = BTreeMap::new();
    let mut representatives: BTreeMap<usize, usize> = BTreeMap::new();
    let mut next = 0u32;
    let mut sentinel_cosets = Vec::new();
    for x in 0..t {
        let outside: Vec<u32> = table[x].difference(&base).copied().collect();
        match outside.as_slice() {
            [] => sentinel_cosets.push(x),
            [parent_color] => {
                let id = *parent_to_child.entry(*parent_color).or_insert_with(|| {
                    let id = next;
                    next += 1;
                    child_to_parent.insert(id, *parent_color);
                    id
                });
                child_ids[x] = id;
                let rep = (0..p)
                    .map(|k| x + k * t)
                    .find(|&y| shifted.color(y) == *parent_color)
                    .unwrap();
                representatives.insert(x, rep);
            }
            _ => unreachable!("select_base_coset bounds the difference"),
        }
    }
    let sentinel = next;
    for x in sentinel_cosets {
        child_ids[x] = sentinel;
    }
    let child = Coloring::from_exact(t, &child_ids).expect("sentinel occurs at coset 0");
    Ok(Reduction::Step(ReductionStep {
        n,
        p,
        t,
        shift: j,
        child,
        sentinel,
        base_colors: base,
        representatives,
        child_to_parent,
    }))
}

impl ReductionStep {
    /// Palette bookkeeping identity `|parent| = |base| + |child| - 1`.
    pub fn bookkeeping_holds(&self, parent: &Coloring) -> bool {
        parent.palette() as usize
            == self.base_colors.len() + self.child.palette() as usize - 1
    }

    fn parent_element(&self, shifted: usize) -> usize {
        (shifted + self.shift) % self.n
    }

    /// An element of the (shifted) coset `R_x` realizing the child color of
    /// `x` when non-sentinel, or the smallest coset member otherwise.
    fn pick_in_coset(&self, x: usize) -> Result<usize, ReduceError> {
        if self.child.color(x) == self.sentinel {
            Ok(x)
        } else {
            self.representatives
                .get(&x)
                .copied()
                .ok_or(ReduceError::MissingRepresentative(x))
        }
    }
}

/// Lift a rainbow Sidon witness on the child back to the parent: reorder the
/// sentinel variable to the last slot, realize the first three from the
/// recorded representatives, and close the tuple with `y4 = y1 + y2 - y3`.
pub fn lift_sidon_witness(
    parent: &Coloring,
    step: &ReductionStep,
    w: &RainbowWitness,
) -> Result<RainbowWitness, ReduceError> {
    debug_assert!(w.equation.is_sidon());
    let xs = &w.elements;
    let is_sent = |x: usize| step.child.color(x) == step.sentinel;
    if xs.iter().filter(|&&x| is_sent(x)).count() > 1 {
        return Err(ReduceError::SentinelOverload);
    }
    // Reorderings of (x1,x2,x3,x4) preserving x1+x2 = x3+x4.
    let order: [usize; 4] = if is_sent(xs[0]) {
        [2, 3, 1, 0]
    } else if is_sent(xs[1]) {
        [2, 3, 0, 1]
    } else if is_sent(xs[2]) {
        [0, 1, 3, 2]
    } else {
        [0, 1, 2, 3]
    };
    let xo: Vec<usize> = order.iter().map(|&k| xs[k]).collect();
    let y1 = step.pick_in_coset(xo[0])?;
    let y2 = step.pick_in_coset(xo[1])?;
    let y3 = step.pick_in_coset(xo[2])?;
    let y4 = modn(y1 as i64 + y2 as i64 - y3 as i64, step.n);
    let elements: Vec<usize> = [y1, y2, y3, y4]
        .iter()
        .map(|&y| step.parent_element(y))
        .collect();
    let lifted = RainbowWitness {
        equation: LinearEquation::sidon(),
        colors: elements.iter().map(|&y| parent.color(y)).collect(),
        elements,
    };
    lifted
        .validate(parent)
        .map_err(|_| ReduceError::LiftedWitnessInvalid)?;
    Ok(lifted)
}

/// Lift a rainbow Schur witness on the child of a `p = 3` reduction to a
/// parent Sidon witness, relying on the base coset carrying three colors.
pub fn lift_schur_witness(
    parent: &Coloring,
    step: &ReductionStep,
    w: &RainbowWitness,
) -> Result<RainbowWitness, ReduceError> {
    debug_assert!(w.equation.is_schur());
    if step.p != 3 {
        return Err(ReduceError::SchurPreconditions("reduction prime is not 3"));
    }
    if step.base_colors.len() != 3 {
        return Err(ReduceError::SchurPreconditions("base coset must carry 3 colors"));
    }
    let is_sent = |x: usize| step.child.color(x) == step.sentinel;
    // i + j = k; put a non-sentinel color at i (the equation is symmetric
    // in i and j).
    let (i, j, k) = if is_sent(w.elements[0]) {
        (w.elements[1], w.elements[0], w.elements[2])
    } else {
        (w.elements[0], w.elements[1], w.elements[2])
    };
    if is_sent(i) {
        return Err(ReduceError::SentinelOverload);
    }
    let shifted: Vec<u32> = (0..step.n).map(|x| parent.color(x + step.shift)).collect();
    let yj = step.pick_in_coset(j)?;
    let yk = step.pick_in_coset(k)?;
    let ci = *step
        .child_to_parent
        .get(&step.child.color(i))
        .ok_or(ReduceError::MissingRepresentative(i))?;
    let avoid = [shifted[yj], shifted[yk], ci];
    let y0 = (0..3)
        .map(|s| s * step.t)
        .find(|&y| !avoid.contains(&shifted[y]))
        .ok_or(ReduceError::SchurPreconditions("no free base color"))?;
    // (yi) + (yj) = (yk) + (y0) closes the Sidon tuple inside R_i.
    let yi = modn(yk as i64 + y0 as i64 - yj as i64, step.n);
    let elements: Vec<usize> = [yi, yj, yk, y0]
        .iter()
        .map(|&y| step.parent_element(y))
        .collect();
    let lifted = RainbowWitness {
        equation: LinearEquation::sidon(),
        colors: elements.iter().map(|&y| parent.color(y)).collect(),
        elements,
    };
    lifted
        .validate(parent)
        .map_err(|_| ReduceError::LiftedWitnessInvalid)?;
    Ok(lifted)
}

/// Find a rainbow Sidon witness by recursive coset reduction, falling back to
/// the brute-force solver at prime leaves (and to confirm absence). Agrees
/// with the solver on existence by construction.
pub fn find_witness_by_reduction(c: &Coloring) -> Option<RainbowWitness> {
    let sidon = LinearEquation::sidon();
    let n = c.n();
    if c.palette() < 4 {
        return None;
    }
    let factors = prime_factors(n as u64);
    if factors.len() < 2 {
        return solver::find_rainbow_witness(c, &sidon);
    }
    // Consume a factor of 3 through the Schur route when 9 | n, otherwise
    // peel the largest prime factor.
    let p = if n % 9 == 0 { 3 } else { *factors.last().unwrap() as usize };
    match reduce_once(c, p) {
        Err(_) => solver::find_rainbow_witness(c, &sidon),
        Ok(Reduction::Witness(w)) => Some(w),
        Ok(Reduction::Step(step)) => {
            if p == 3 && step.base_colors.len() == 3 {
                if let Some(sw) =
                    solver::find_rainbow_witness(&step.child, &LinearEquation::schur())
                {
                    if let Ok(lifted) = lift_schur_witness(c, &step, &sw) {
                        return Some(lifted);
                    }
                }
            }
            if let Some(cw) = find_witness_by_reduction(&step.child) {
                if let Ok(lifted) = lift_sidon_witness(c, &step, &cw) {
                    return Some(lifted);
                }
            }
            // Reduction found nothing; only brute force can certify absence.
            solver::find_rainbow_witness(c, &sidon)
        }
    }
}
