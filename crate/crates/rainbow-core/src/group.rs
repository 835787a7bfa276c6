//! Cyclic-group arithmetic, colorings, equations, affine maps, and canonical
//! forms. Everything downstream speaks this vocabulary.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("coloring length {got} does not match group order {n}")]
    LengthMismatch { n: usize, got: usize },
    #[error("coloring must have at least one element")]
    Empty,
    #[error("scale {scale} is not a unit of Z_{n}")]
    NonUnitScale { scale: usize, n: usize },
    #[error("order mismatch: map on Z_{map_n}, coloring on Z_{coloring_n}")]
    OrderMismatch { map_n: usize, coloring_n: usize },
    #[error("equation arity must be at least 3, got {0}")]
    BadArity(usize),
    #[error("equation coefficients must be non-zero")]
    ZeroCoefficient,
    #[error("coloring is not exact: color {missing} in [0, {r}) never occurs")]
    NotExact { missing: u32, r: u32 },
}

pub fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Reduce an integer (possibly negative) modulo `n` into `[0, n)`.
pub fn modn(v: i64, n: usize) -> usize {
    let n = n as i64;
    (((v % n) + n) % n) as usize
}

/// Modular inverse of `a` in `Z_n`, if `a` is a unit.
pub fn mod_inverse(a: usize, n: usize) -> Option<usize> {
    let (mut t, mut new_t) = (0i64, 1i64);
    let (mut r, mut new_r) = (n as i64, (a % n) as i64);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    if r != 1 {
        return None;
    }
    Some(modn(t, n))
}

/// The units of `Z_n` in increasing order.
pub fn units(n: usize) -> Vec<usize> {
    if n == 1 {
        return vec![0];
    }
    (1..n).filter(|&u| gcd(u as u64, n as u64) == 1).collect()
}

/// An element of `Z_n`, kept reduced into `[0, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CyclicIndex {
    n: usize,
    value: usize,
}

impl CyclicIndex {
    pub fn new(n: usize, value: i64) -> Self {
        assert!(n > 0, "group order must be positive");
        CyclicIndex { n, value: modn(value, n) }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn value(&self) -> usize {
        self.value
    }

    pub fn add(&self, other: CyclicIndex) -> CyclicIndex {
        assert_eq!(self.n, other.n);
        CyclicIndex::new(self.n, (self.value + other.value) as i64)
    }

    pub fn sub(&self, other: CyclicIndex) -> CyclicIndex {
        assert_eq!(self.n, other.n);
        CyclicIndex::new(self.n, self.value as i64 - other.value as i64)
    }

    pub fn neg(&self) -> CyclicIndex {
        CyclicIndex::new(self.n, -(self.value as i64))
    }

    pub fn scale(&self, k: i64) -> CyclicIndex {
        CyclicIndex::new(self.n, k.rem_euclid(self.n as i64) * self.value as i64)
    }
}

/// An exact coloring of `Z_n`. Color ids are dense (`0..r` in first-occurrence
/// order), so exactness holds by construction.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Coloring {
    n: usize,
    colors: Vec<u32>,
    r: u32,
}

impl Coloring {
    /// Build a coloring from arbitrary non-negative ids; ids are renumbered in
    /// first-occurrence order so the result is exact.
    pub fn new(n: usize, ids: &[u32]) -> Result<Self, GroupError> {
        if n == 0 {
            return Err(GroupError::Empty);
        }
        if ids.len() != n {
            return Err(GroupError::LengthMismatch { n, got: ids.len() });
        }
        let (colors, r) = first_occurrence_renumber(ids);
        Ok(Coloring { n, colors, r })
    }

    /// Keep the given labels, requiring them to be dense: every color in
    /// `[0, max+1)` occurs. Used where a specific labeling matters (lifted
    /// constructions, coset reductions, parsed files).
    pub fn from_exact(n: usize, ids: &[u32]) -> Result<Self, GroupError> {
        if n == 0 {
            return Err(GroupError::Empty);
        }
        if ids.len() != n {
            return Err(GroupError::LengthMismatch { n, got: ids.len() });
        }
        let r = ids.iter().max().unwrap() + 1;
        let mut seen = vec![false; r as usize];
        for &id in ids {
            seen[id as usize] = true;
        }
        if let Some(missing) = seen.iter().position(|&s| !s) {
            return Err(GroupError::NotExact { missing: missing as u32, r });
        }
        Ok(Coloring { n, colors: ids.to_vec(), r })
    }

    /// Accept an already-canonical color sequence without renumbering.
    /// Panics in debug builds if the sequence is not in first-occurrence form.
    pub(crate) fn from_canonical(n: usize, colors: Vec<u32>, r: u32) -> Self {
        debug_assert_eq!(first_occurrence_renumber(&colors), (colors.clone(), r));
        Coloring { n, colors, r }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Palette size `r`.
    pub fn palette(&self) -> u32 {
        self.r
    }

    pub fn color(&self, x: usize) -> u32 {
        self.colors[x % self.n]
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    /// `result(x) = self(scale*x + shift)`.
    pub fn apply_affine(&self, m: &AffineMap) -> Result<Coloring, GroupError> {
        if m.n != self.n {
            return Err(GroupError::OrderMismatch { map_n: m.n, coloring_n: self.n });
        }
        // Affine maps are bijections, so labels and exactness carry over.
        let colors: Vec<u32> = (0..self.n).map(|x| self.colors[m.apply(x)]).collect();
        Ok(Coloring { n: self.n, colors, r: self.r })
    }

    /// Lexicographically least coloring over the orbit of `self` under all
    /// affine maps of `Z_n` and all color permutations. First-occurrence
    /// renumbering is exactly the lex-least color permutation, so the orbit
    /// minimum is the minimum of the renumbered affine images.
    pub fn canonicalize(&self) -> Coloring {
        let mut best: Option<Vec<u32>> = None;
        for &scale in &units(self.n) {
            for shift in 0..self.n {
                let m = AffineMap { n: self.n, scale, shift };
                let (cand, _) = first_occurrence_renumber(
                    &(0..self.n).map(|x| self.colors[m.apply(x)]).collect::<Vec<_>>(),
                );
                if best.as_ref().is_none_or(|b| cand < *b) {
                    best = Some(cand);
                }
            }
        }
        Coloring::from_canonical(self.n, best.unwrap(), self.r)
    }
}

impl fmt::Display for Coloring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}\n", self.n, self.r)?;
        for (i, c) in self.colors.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{c}")?;
        }
        writeln!(f)
    }
}

/// Renumber ids in first-occurrence order starting at 0; returns the dense
/// sequence and the palette size.
pub fn first_occurrence_renumber(ids: &[u32]) -> (Vec<u32>, u32) {
    let mut map: Vec<Option<u32>> = Vec::new();
    let mut out = Vec::with_capacity(ids.len());
    let mut next = 0u32;
    for &id in ids {
        let idx = id as usize;
        if idx >= map.len() {
            map.resize(idx + 1, None);
        }
        let v = *map[idx].get_or_insert_with(|| {
            let v = next;
            next += 1;
            v
        });
        out.push(v);
    }
    (out, next)
}

/// `x -> scale*x + shift` on `Z_n`, with `scale` a unit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AffineMap {
    n: usize,
    scale: usize,
    shift: usize,
}

impl AffineMap {
    pub fn new(n: usize, scale: i64, shift: i64) -> Result<Self, GroupError> {
        assert!(n > 0);
        let scale = modn(scale, n);
        let shift = modn(shift, n);
        if n > 1 && gcd(scale as u64, n as u64) != 1 {
            return Err(GroupError::NonUnitScale { scale, n });
        }
        Ok(AffineMap { n, scale, shift })
    }

    pub fn identity(n: usize) -> Self {
        AffineMap { n, scale: 1 % n.max(1), shift: 0 }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn scale(&self) -> usize {
        self.scale
    }

    pub fn shift(&self) -> usize {
        self.shift
    }

    pub fn apply(&self, x: usize) -> usize {
        (self.scale * (x % self.n) + self.shift) % self.n
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &AffineMap) -> AffineMap {
        assert_eq!(self.n, other.n);
        AffineMap {
            n: self.n,
            scale: self.scale * other.scale % self.n,
            shift: (self.scale * other.shift + self.shift) % self.n,
        }
    }

    pub fn inverse(&self) -> AffineMap {
        let inv = mod_inverse(self.scale, self.n).expect("scale is a unit");
        AffineMap {
            n: self.n,
            scale: inv,
            shift: modn(-((inv * self.shift) as i64), self.n),
        }
    }
}

/// `a_1 x_1 + ... + a_s x_s = b`. Coefficients are integers; they are reduced
/// modulo the group order at evaluation time.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LinearEquation {
    coefficients: Vec<i64>,
    constant: i64,
}

impl LinearEquation {
    pub fn new(coefficients: Vec<i64>, constant: i64) -> Result<Self, GroupError> {
        if coefficients.len() < 3 {
            return Err(GroupError::BadArity(coefficients.len()));
        }
        if coefficients.iter().any(|&a| a == 0) {
            return Err(GroupError::ZeroCoefficient);
        }
        Ok(LinearEquation { coefficients, constant })
    }

    /// `x_1 + x_2 = x_3 + x_4`.
    pub fn sidon() -> Self {
        LinearEquation { coefficients: vec![1, 1, -1, -1], constant: 0 }
    }

    /// `x_1 + x_2 = x_3`.
    pub fn schur() -> Self {
        LinearEquation { coefficients: vec![1, 1, -1], constant: 0 }
    }

    pub fn is_sidon(&self) -> bool {
        self.coefficients == [1, 1, -1, -1] && self.constant == 0
    }

    pub fn is_schur(&self) -> bool {
        self.coefficients == [1, 1, -1] && self.constant == 0
    }

    pub fn arity(&self) -> usize {
        self.coefficients.len()
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.coefficients
    }

    pub fn constant(&self) -> i64 {
        self.constant
    }

    /// `Σ a_k x_k − b` reduced into `[0, n)`; zero means `xs` is a solution.
    pub fn residue(&self, xs: &[usize], n: usize) -> usize {
        debug_assert_eq!(xs.len(), self.arity());
        let mut acc: i64 = -self.constant;
        for (&a, &x) in self.coefficients.iter().zip(xs) {
            acc += a.rem_euclid(n as i64) * x as i64;
            acc = acc.rem_euclid(n as i64);
        }
        modn(acc, n)
    }
}

impl fmt::Display for LinearEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_sidon() {
            return write!(f, "sidon");
        }
        if self.is_schur() {
            return write!(f, "schur");
        }
        let terms: Vec<String> = self
            .coefficients
            .iter()
            .enumerate()
            .map(|(i, a)| format!("{a}*x{}", i + 1))
            .collect();
        write!(f, "{} = {}", terms.join(" + "), self.constant)
    }
}

/// A solution tuple whose elements and colors are pairwise distinct.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RainbowWitness {
    pub equation: LinearEquation,
    pub elements: Vec<usize>,
    pub colors: Vec<u32>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WitnessError {
    #[error("tuple does not satisfy the equation (residue {0})")]
    NotASolution(usize),
    #[error("elements are not pairwise distinct")]
    RepeatedElement,
    #[error("colors are not pairwise distinct")]
    RepeatedColor,
    #[error("recorded colors do not match the coloring")]
    ColorMismatch,
}

impl RainbowWitness {
    /// Check every type invariant against the coloring it claims to witness.
    pub fn validate(&self, c: &Coloring) -> Result<(), WitnessError> {
        if self.equation.residue(&self.elements, c.n()) != 0 {
            return Err(WitnessError::NotASolution(
                self.equation.residue(&self.elements, c.n()),
            ));
        }
        for i in 0..self.elements.len() {
            for j in i + 1..self.elements.len() {
                if self.elements[i] == self.elements[j] {
                    return Err(WitnessError::RepeatedElement);
                }
                if self.colors[i] == self.colors[j] {
                    return Err(WitnessError::RepeatedColor);
                }
            }
        }
        if self.elements.iter().zip(&self.colors).any(|(&x, &col)| c.color(x) != col) {
            return Err(WitnessError::ColorMismatch);
        }
        Ok(())
    }

    /// Map the witness through an affine transform of the ambient group.
    /// Used by the invariance tests: a witness for `apply_affine(c, m)`
    /// maps through `m` to a witness for `c` when the constant is zero.
    pub fn map_elements(&self, m: &AffineMap, c: &Coloring) -> RainbowWitness {
        let elements: Vec<usize> = self.elements.iter().map(|&x| m.apply(x)).collect();
        let colors = elements.iter().map(|&x| c.color(x)).collect();
        RainbowWitness { equation: self.equation.clone(), elements, colors }
    }
}

/// All tuples `(x_1..x_s)` with `Σ a_k x_k ≡ b (mod n)`. When the last
/// coefficient is a unit the last variable is solved in closed form, so the
/// enumeration costs `n^(s−1)`.
pub fn solutions<'a>(
    eq: &'a LinearEquation,
    n: usize,
) -> Box<dyn Iterator<Item = Vec<usize>> + 'a> {
    let s = eq.arity();
    let last = *eq.coefficients().last().unwrap();
    match mod_inverse(modn(last, n), n) {
        Some(inv) if n > 0 => {
            let iter = Odometer::new(n, s - 1).map(move |mut xs| {
                let mut acc: i64 = eq.constant();
                for (&a, &x) in eq.coefficients()[..s - 1].iter().zip(&xs) {
                    acc -= a.rem_euclid(n as i64) * x as i64;
                    acc = acc.rem_euclid(n as i64);
                }
                xs.push(inv * modn(acc, n) % n);
                xs
            });
            Box::new(iter)
        }
        _ => Box::new(Odometer::new(n, s).filter(move |xs| eq.residue(xs, n) == 0)),
    }
}

/// Lexicographic enumeration of `[0, n)^k`.
struct Odometer {
    n: usize,
    state: Vec<usize>,
    done: bool,
}

impl Odometer {
    fn new(n: usize, k: usize) -> Self {
        Odometer { n, state: vec![0; k], done: n == 0 }
    }
}

impl Iterator for Odometer {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.state.clone();
        let mut i = self.state.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            self.state[i] += 1;
            if self.state[i] < self.n {
                break;
            }
            self.state[i] = 0;
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn new_coloring_renumbers_first_occurrence() {
        let c = Coloring::new(3, &[7, 7, 9]).unwrap();
        assert_eq!(c.colors(), &[0, 0, 1]);
        assert_eq!(c.palette(), 2);

        let c = Coloring::new(1, &[0]).unwrap();
        assert_eq!(c.palette(), 1);

        let c = Coloring::new(5, &[0, 1, 2, 3, 0]).unwrap();
        assert_eq!(c.colors(), &[0, 1, 2, 3, 0]);
        assert_eq!(c.palette(), 4);
    }

    #[test]
    fn new_coloring_errors() {
        assert_eq!(
            Coloring::new(3, &[0, 1]),
            Err(GroupError::LengthMismatch { n: 3, got: 2 })
        );
        assert_eq!(Coloring::new(0, &[]), Err(GroupError::Empty));
    }

    #[test]
    fn apply_affine_examples() {
        let c = Coloring::new(3, &[0, 1, 2]).unwrap();
        let id = AffineMap::new(3, 1, 0).unwrap();
        assert_eq!(c.apply_affine(&id).unwrap().colors(), &[0, 1, 2]);

        // c(2x) for x = 0..4, evaluated pointwise.
        let c = Coloring::new(5, &[0, 1, 2, 3, 0]).unwrap();
        let m = AffineMap::new(5, 2, 0).unwrap();
        assert_eq!(c.apply_affine(&m).unwrap().colors(), &[0, 2, 0, 1, 3]);

        let m = AffineMap::new(5, 1, 1).unwrap();
        assert_eq!(c.apply_affine(&m).unwrap().colors(), &[1, 2, 3, 0, 0]);
    }

    #[test]
    fn affine_rejects_non_unit() {
        assert!(AffineMap::new(6, 2, 0).is_err());
        assert!(AffineMap::new(6, 5, 3).is_ok());
    }

    #[test]
    fn affine_compose_and_inverse() {
        let m1 = AffineMap::new(7, 3, 2).unwrap();
        let m2 = AffineMap::new(7, 5, 6).unwrap();
        let comp = m2.compose(&m1);
        for x in 0..7 {
            assert_eq!(comp.apply(x), m2.apply(m1.apply(x)));
        }
        let inv = m1.inverse();
        for x in 0..7 {
            assert_eq!(inv.apply(m1.apply(x)), x);
            assert_eq!(m1.apply(inv.apply(x)), x);
        }
    }

    #[test]
    fn canonicalize_examples() {
        let c = Coloring::new(2, &[1, 0]).unwrap();
        assert_eq!(c.canonicalize().colors(), &[0, 1]);

        // Oracle: the full orbit of (0,0,1) on Z_3 (6 affine maps x color
        // permutations, realized by renumbering) has minimum (0,0,1).
        let c = Coloring::new(3, &[0, 0, 1]).unwrap();
        let mut orbit = Vec::new();
        for &scale in &units(3) {
            for shift in 0..3 {
                let m = AffineMap::new(3, scale as i64, shift as i64).unwrap();
                let (renum, _) = first_occurrence_renumber(
                    &(0..3).map(|x| c.colors()[m.apply(x)]).collect::<Vec<_>>(),
                );
                orbit.push(renum);
            }
        }
        orbit.sort();
        assert_eq!(c.canonicalize().colors(), orbit[0].as_slice());
        assert_eq!(c.canonicalize().colors(), &[0, 0, 1]);

        let mono = Coloring::new(4, &[0, 0, 0, 0]).unwrap();
        assert_eq!(mono.canonicalize(), mono);
    }

    #[test]
    fn solutions_examples() {
        let sidon = LinearEquation::sidon();
        let sols: Vec<_> = solutions(&sidon, 2).collect();
        assert!(sols.contains(&vec![0, 1, 1, 0]));
        assert!(!sols.contains(&vec![0, 0, 1, 0]));

        let schur = LinearEquation::schur();
        let sols: Vec<_> = solutions(&schur, 3).collect();
        assert!(sols.contains(&vec![1, 1, 2]));

        // x_4 is determined by the first three variables.
        assert_eq!(solutions(&sidon, 5).count(), 125);
    }

    #[test]
    fn solutions_residue_is_zero() {
        let eq = LinearEquation::new(vec![2, 3, 5], 1).unwrap();
        for n in [4usize, 6, 7] {
            let mut count = 0;
            for xs in solutions(&eq, n) {
                assert_eq!(eq.residue(&xs, n), 0);
                count += 1;
            }
            // Oracle: filter the full cube.
            let brute = Odometer::new(n, 3).filter(|xs| eq.residue(xs, n) == 0).count();
            assert_eq!(count, brute);
        }
    }

    #[test]
    fn cyclic_index_arithmetic() {
        let a = CyclicIndex::new(5, 3);
        let b = CyclicIndex::new(5, 4);
        assert_eq!(a.add(b).value(), 2);
        assert_eq!(a.sub(b).value(), 4);
        assert_eq!(a.neg().value(), 2);
        assert_eq!(a.scale(-2).value(), 4);
        assert_eq!(CyclicIndex::new(5, -7).value(), 3);
    }
}
