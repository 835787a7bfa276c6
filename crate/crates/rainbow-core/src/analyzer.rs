//! Structural inspection of colorings: i-dominant colors, dominance graphs,
//! strings, patterns, periodicity, and coset color tables.
//!
//! All positions are cyclic; pattern and string scans wrap around 0.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::group::Coloring;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AnalyzerError {
    #[error("{t} does not divide the group order {n}")]
    NotADivisor { t: usize, n: usize },
    #[error("step must lie in [1, n)")]
    BadStep,
    #[error("colorset must contain 1 or 2 colors")]
    BadColorset,
}

/// Graph on color ids with an edge for each unequal pair realized at distance `i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DominanceGraph {
    pub vertices: BTreeSet<u32>,
    pub edges: BTreeSet<(u32, u32)>,
}

impl DominanceGraph {
    /// Colors covering every edge; with no edges, the whole palette qualifies.
    pub fn covering_colors(&self) -> BTreeSet<u32> {
        self.vertices
            .iter()
            .copied()
            .filter(|&v| self.edges.iter().all(|&(a, b)| a == v || b == v))
            .collect()
    }

    /// Two disjoint edges on four distinct colors.
    pub fn contains_two_k2(&self) -> bool {
        for &(a, b) in &self.edges {
            for &(x, y) in &self.edges {
                if a != x && a != y && b != x && b != y {
                    return true;
                }
            }
        }
        false
    }
}

pub fn dominance_graph(c: &Coloring, i: usize) -> Result<DominanceGraph, AnalyzerError> {
    if i == 0 || i >= c.n() {
        return Err(AnalyzerError::BadStep);
    }
    let mut edges = BTreeSet::new();
    for x in 0..c.n() {
        let (a, b) = (c.color(x), c.color(x + i));
        if a != b {
            edges.insert((a.min(b), a.max(b)));
        }
    }
    Ok(DominanceGraph { vertices: (0..c.palette()).collect(), edges })
}

/// Colors `X` such that every unequal pair `(c(x), c(x+i))` contains `X`;
/// exactly the vertex covers of size one of the dominance graph.
pub fn i_dominant_colors(c: &Coloring, i: usize) -> Result<BTreeSet<u32>, AnalyzerError> {
    Ok(dominance_graph(c, i)?.covering_colors())
}

/// All positions `j` with `c(j+k) = pattern[k]` for every `k`, wrapping cyclically.
pub fn find_pattern(c: &Coloring, pattern: &[u32]) -> BTreeSet<usize> {
    if pattern.is_empty() || pattern.len() > c.n() {
        return BTreeSet::new();
    }
    (0..c.n())
        .filter(|&j| pattern.iter().enumerate().all(|(k, &p)| c.color(j + k) == p))
        .collect()
}

/// A cyclic interval of positions: `start, start+1, ..., start+len-1` mod n.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CyclicInterval {
    pub start: usize,
    pub len: usize,
}

impl CyclicInterval {
    pub fn contains(&self, x: usize, n: usize) -> bool {
        (x + n - self.start % n) % n < self.len
    }

    pub fn elements(&self, n: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).map(move |k| (self.start + k) % n)
    }
}

/// Maximal cyclic intervals whose image under `c` is exactly `colorset`.
/// Bichromatic strings must realize both colors. If the whole cycle
/// qualifies, a single interval of length `n` is returned.
pub fn maximal_strings(
    c: &Coloring,
    colorset: &BTreeSet<u32>,
) -> Result<Vec<CyclicInterval>, AnalyzerError> {
    if colorset.is_empty() || colorset.len() > 2 {
        return Err(AnalyzerError::BadColorset);
    }
    let n = c.n();
    let inside = |x: usize| colorset.contains(&c.color(x));
    if (0..n).all(inside) {
        let whole = CyclicInterval { start: 0, len: n };
        let seen: BTreeSet<u32> = (0..n).map(|x| c.color(x)).collect();
        return Ok(if seen == *colorset { vec![whole] } else { vec![] });
    }
    let mut out = Vec::new();
    for start in 0..n {
        // Maximal runs begin right after an outside element.
        if !inside(start) || inside((start + n - 1) % n) {
            continue;
        }
        let mut len = 1;
        while inside((start + len) % n) {
            len += 1;
        }
        let interval = CyclicInterval { start, len };
        let seen: BTreeSet<u32> = interval.elements(n).map(|x| c.color(x)).collect();
        if seen == *colorset {
            out.push(interval);
        }
    }
    Ok(out)
}

/// True iff `c(x) = c(x+i)` whenever both `x` and `x+i` lie in the interval.
/// The interval is read linearly: stepping by `i` never leaves one end and
/// re-enters at the other.
pub fn is_periodic(c: &Coloring, interval: CyclicInterval, i: usize) -> bool {
    if i == 0 || i >= interval.len {
        return true;
    }
    (0..interval.len - i)
        .all(|k| c.color(interval.start + k) == c.color(interval.start + k + i))
}

/// `table[i] = c(R_i)` where `R_i = i + <t>` is the i-th coset of the
/// subgroup generated by `t`.
pub fn coset_color_table(c: &Coloring, t: usize) -> Result<Vec<BTreeSet<u32>>, AnalyzerError> {
    let n = c.n();
    if t == 0 || n % t != 0 {
        return Err(AnalyzerError::NotADivisor { t, n });
    }
    let per = n / t;
    Ok((0..t)
        .map(|i| (0..per).map(|k| c.color(i + k * t)).collect())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(ids: &[u32]) -> BTreeSet<u32> {
        ids.iter().copied().collect()
    }

    #[test]
    fn dominance_graph_examples() {
        // Pairs (c(x), c(x+1)) for x = 0..3 are (0,0),(0,1),(1,1),(1,0).
        let c = Coloring::new(4, &[0, 0, 1, 1]).unwrap();
        let g = dominance_graph(&c, 1).unwrap();
        assert_eq!(g.edges, [(0, 1)].into_iter().collect());

        let mono = Coloring::new(5, &[0; 5]).unwrap();
        assert!(dominance_graph(&mono, 2).unwrap().edges.is_empty());

        let c = Coloring::new(5, &[0, 1, 2, 3, 0]).unwrap();
        let g = dominance_graph(&c, 1).unwrap();
        assert_eq!(g.edges, [(0, 1), (1, 2), (2, 3), (0, 3)].into_iter().collect());
    }

    #[test]
    fn dominant_color_examples() {
        let c = Coloring::new(5, &[0, 0, 0, 0, 1]).unwrap();
        assert_eq!(i_dominant_colors(&c, 1).unwrap(), set(&[0, 1]));

        // Any 2-coloring: every unequal pair is the full palette.
        let c = Coloring::new(6, &[0, 1, 0, 0, 1, 1]).unwrap();
        for i in 1..6 {
            assert_eq!(i_dominant_colors(&c, i).unwrap(), set(&[0, 1]));
        }

        // The 4-cycle of edges above has no single covering vertex.
        let c = Coloring::new(5, &[0, 1, 2, 3, 0]).unwrap();
        assert!(i_dominant_colors(&c, 1).unwrap().is_empty());
    }

    #[test]
    fn dominant_equals_cover_cross_check() {
        // Independent route: test the defining quantifier directly.
        for n in 3..=8usize {
            for seed in 0..6u64 {
                let ids: Vec<u32> =
                    (0..n).map(|x| ((x as u64 * 48271 + seed * 7) % 4) as u32).collect();
                let c = Coloring::new(n, &ids).unwrap();
                for i in 1..n {
                    let direct: BTreeSet<u32> = (0..c.palette())
                        .filter(|&col| {
                            (0..n).all(|x| {
                                let (a, b) = (c.color(x), c.color(x + i));
                                a == b || a == col || b == col
                            })
                        })
                        .collect();
                    assert_eq!(i_dominant_colors(&c, i).unwrap(), direct);
                }
            }
        }
    }

    #[test]
    fn pattern_examples() {
        let c = Coloring::new(4, &[0, 1, 0, 1]).unwrap();
        assert_eq!(find_pattern(&c, &[0, 1]), [0, 2].into_iter().collect());
        assert!(find_pattern(&c, &[1, 1]).is_empty());

        let c = Coloring::new(3, &[0, 0, 1]).unwrap();
        assert_eq!(find_pattern(&c, &[1, 0]), [2].into_iter().collect());
    }

    #[test]
    fn maximal_string_examples() {
        let c = Coloring::new(4, &[0, 0, 1, 2]).unwrap();
        let strings = maximal_strings(&c, &set(&[0])).unwrap();
        assert_eq!(strings, vec![CyclicInterval { start: 0, len: 2 }]);

        // Elements 4,5,0,1,2 carry colors 0,1,0,1,0; position 3 (color 2)
        // bounds the string on both sides.
        let c = Coloring::new(6, &[0, 1, 0, 2, 0, 1]).unwrap();
        let strings = maximal_strings(&c, &set(&[0, 1])).unwrap();
        assert_eq!(strings, vec![CyclicInterval { start: 4, len: 5 }]);

        let mono = Coloring::new(5, &[0; 5]).unwrap();
        let strings = maximal_strings(&mono, &set(&[0])).unwrap();
        assert_eq!(strings, vec![CyclicInterval { start: 0, len: 5 }]);
    }

    #[test]
    fn bichromatic_strings_must_use_both_colors() {
        let c = Coloring::new(5, &[0, 0, 1, 2, 2]).unwrap();
        // The run {3,4} is monochromatic 2, so it is not a {1,2}-string;
        // the run {2,3,4} uses both.
        let strings = maximal_strings(&c, &set(&[1, 2])).unwrap();
        assert_eq!(strings, vec![CyclicInterval { start: 2, len: 3 }]);
    }

    #[test]
    fn monochromatic_strings_partition_the_color_class() {
        let c = Coloring::new(8, &[0, 1, 0, 0, 1, 0, 1, 1]).unwrap();
        let strings = maximal_strings(&c, &set(&[0])).unwrap();
        let mut covered = BTreeSet::new();
        for s in &strings {
            for x in s.elements(8) {
                assert_eq!(c.color(x), 0);
                assert!(covered.insert(x), "intervals overlap at {x}");
            }
        }
        let class: BTreeSet<usize> = (0..8).filter(|&x| c.color(x) == 0).collect();
        assert_eq!(covered, class);
    }

    #[test]
    fn periodicity_examples() {
        let c = Coloring::new(5, &[0, 1, 0, 1, 2]).unwrap();
        assert!(is_periodic(&c, CyclicInterval { start: 0, len: 4 }, 2));
        assert!(!is_periodic(&c, CyclicInterval { start: 0, len: 5 }, 2));
        // Vacuous when the step exceeds the interval length.
        assert!(is_periodic(&c, CyclicInterval { start: 1, len: 2 }, 3));
    }

    #[test]
    fn coset_table_examples() {
        let c = Coloring::new(6, &[0, 1, 2, 1, 0, 1]).unwrap();
        let table = coset_color_table(&c, 2).unwrap();
        assert_eq!(table[0], set(&[0, 2]));
        assert_eq!(table[1], set(&[1]));

        let table = coset_color_table(&c, 6).unwrap();
        assert_eq!(table, vec![set(&[0]), set(&[1]), set(&[2]), set(&[1]), set(&[0]), set(&[1])]);

        let table = coset_color_table(&c, 1).unwrap();
        assert_eq!(table[0], set(&[0, 1, 2]));

        assert!(coset_color_table(&c, 4).is_err());
    }
}
