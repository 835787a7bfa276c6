//! Rainbow-solution detection and counting. This is the brute-force ground
//! truth the reduction and certification machinery is checked against.
//!
//! Sidon solutions are searched in normalized form (`x1 < x2`, `x3 < x4`,
//! `x1 < x3`), one representative per orbit of the equation's variable
//! symmetries. The first witness in lexicographic order of the leading
//! variables is returned, so results are deterministic.

use crate::group::{modn, mod_inverse, Coloring, LinearEquation, RainbowWitness};

/// First rainbow witness in normalized lexicographic order, if any.
pub fn find_rainbow_witness(c: &Coloring, eq: &LinearEquation) -> Option<RainbowWitness> {
    if (eq.arity() as u32) > c.palette() {
        return None;
    }
    if eq.is_sidon() {
        return sidon_scan(c, true).map(|t| witness_from(c, eq, &t)).flatten();
    }
    if eq.is_schur() {
        return schur_scan(c, true).map(|t| witness_from(c, eq, &t)).flatten();
    }
    generic_scan(c, eq, true).map(|t| witness_from(c, eq, &t)).flatten()
}

pub fn is_rainbow_free(c: &Coloring, eq: &LinearEquation) -> bool {
    find_rainbow_witness(c, eq).is_none()
}

/// Number of normalized rainbow solution tuples.
pub fn count_rainbow_solutions(c: &Coloring, eq: &LinearEquation) -> u64 {
    if (eq.arity() as u32) > c.palette() {
        return 0;
    }
    if eq.is_sidon() {
        return sidon_count(c);
    }
    if eq.is_schur() {
        return schur_count(c);
    }
    generic_count(c, eq)
}

fn witness_from(c: &Coloring, eq: &LinearEquation, elements: &[usize]) -> Option<RainbowWitness> {
    let w = RainbowWitness {
        equation: eq.clone(),
        elements: elements.to_vec(),
        colors: elements.iter().map(|&x| c.color(x)).collect(),
    };
    debug_assert_eq!(w.validate(c), Ok(()));
    Some(w)
}

fn rainbow4(c: &Coloring, x1: usize, x2: usize, x3: usize, x4: usize) -> bool {
    let (a, b, d, e) = (c.color(x1), c.color(x2), c.color(x3), c.color(x4));
    a != b && a != d && a != e && b != d && b != e && d != e
}

/// Normalized Sidon scan: `x1 < x2`, `x3 < x4`, `x1 < x3`, `x4 = x1+x2-x3`.
/// With `first` set, stops at the first hit.
fn sidon_scan(c: &Coloring, first: bool) -> Option<[usize; 4]> {
    let n = c.n();
    let mut hit = None;
    for x1 in 0..n {
        for x2 in x1 + 1..n {
            for x3 in x1 + 1..n {
                let x4 = modn(x1 as i64 + x2 as i64 - x3 as i64, n);
                if x3 >= x4 || x2 == x3 || x2 == x4 {
                    continue;
                }
                if rainbow4(c, x1, x2, x3, x4) {
                    hit = Some([x1, x2, x3, x4]);
                    if first {
                        return hit;
                    }
                }
            }
        }
    }
    hit
}

fn sidon_count(c: &Coloring) -> u64 {
    let n = c.n();
    let mut count = 0;
    for x1 in 0..n {
        for x2 in x1 + 1..n {
            for x3 in x1 + 1..n {
                let x4 = modn(x1 as i64 + x2 as i64 - x3 as i64, n);
                if x3 < x4 && x2 != x3 && x2 != x4 && rainbow4(c, x1, x2, x3, x4) {
                    count += 1;
                }
            }
        }
    }
    count
}

/// Normalized Schur scan: `x1 < x2`, `x3 = x1+x2`.
fn schur_scan(c: &Coloring, first: bool) -> Option<[usize; 3]> {
    let n = c.n();
    let mut hit = None;
    for x1 in 0..n {
        for x2 in x1 + 1..n {
            let x3 = (x1 + x2) % n;
            if x3 == x1 || x3 == x2 {
                continue;
            }
            let (a, b, d) = (c.color(x1), c.color(x2), c.color(x3));
            if a != b && a != d && b != d {
                hit = Some([x1, x2, x3]);
                if first {
                    return hit;
                }
            }
        }
    }
    hit
}

fn schur_count(c: &Coloring) -> u64 {
    let n = c.n();
    let mut count = 0;
    for x1 in 0..n {
        for x2 in x1 + 1..n {
            let x3 = (x1 + x2) % n;
            if x3 != x1 && x3 != x2 {
                let (a, b, d) = (c.color(x1), c.color(x2), c.color(x3));
                if a != b && a != d && b != d {
                    count += 1;
                }
            }
        }
    }
    count
}

/// Generic equations: enumerate the leading `s-1` variables lexicographically,
/// normalized so positions sharing a coefficient carry increasing values, and
/// solve the last variable in closed form when its coefficient is a unit.
fn generic_scan(c: &Coloring, eq: &LinearEquation, first: bool) -> Option<Vec<usize>> {
    let mut hit = None;
    generic_walk(c, eq, &mut |xs| {
        hit = Some(xs.to_vec());
        first
    });
    hit
}

fn generic_count(c: &Coloring, eq: &LinearEquation) -> u64 {
    let mut count = 0;
    generic_walk(c, eq, &mut |_| {
        count += 1;
        false
    });
    count
}

/// Calls `visit` on each normalized rainbow solution; stops when it returns true.
fn generic_walk(c: &Coloring, eq: &LinearEquation, visit: &mut dyn FnMut(&[usize]) -> bool) {
    let n = c.n();
    let s = eq.arity();
    let coeffs = eq.coefficients();
    let last_inv = mod_inverse(modn(*coeffs.last().unwrap(), n), n);
    let mut xs = vec![0usize; s];
    walk_rec(c, eq, last_inv, &mut xs, 0, visit);
}

fn walk_rec(
    c: &Coloring,
    eq: &LinearEquation,
    last_inv: Option<usize>,
    xs: &mut Vec<usize>,
    depth: usize,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    let n = c.n();
    let s = eq.arity();
    let coeffs = eq.coefficients();
    if depth == s - 1 {
        let candidates: Vec<usize> = match last_inv {
            Some(inv) => {
                let mut acc: i64 = eq.constant();
                for k in 0..s - 1 {
                    acc -= coeffs[k].rem_euclid(n as i64) * xs[k] as i64;
                    acc = acc.rem_euclid(n as i64);
                }
                vec![inv * modn(acc, n) % n]
            }
            None => (0..n).collect(),
        };
        for x in candidates {
            xs[depth] = x;
            if eq.residue(xs, n) != 0 || !normalized_ok(coeffs, xs, depth) {
                continue;
            }
            if !distinct_rainbow(c, xs) {
                continue;
            }
            if visit(xs) {
                return true;
            }
        }
        return false;
    }
    for x in 0..n {
        xs[depth] = x;
        if !normalized_ok(coeffs, xs, depth) {
            continue;
        }
        if walk_rec(c, eq, last_inv, xs, depth + 1, visit) {
            return true;
        }
    }
    false
}

/// Positions with equal coefficients must carry strictly increasing values.
fn normalized_ok(coeffs: &[i64], xs: &[usize], upto: usize) -> bool {
    for j in 0..upto {
        if coeffs[j] == coeffs[upto] && xs[j] >= xs[upto] {
            return false;
        }
    }
    true
}

fn distinct_rainbow(c: &Coloring, xs: &[usize]) -> bool {
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            if xs[i] == xs[j] || c.color(xs[i]) == c.color(xs[j]) {
                return false;
            }
        }
    }
    true
}
