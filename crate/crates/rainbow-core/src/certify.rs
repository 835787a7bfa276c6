//! Exhaustive verification: decide whether every exact r-coloring of `Z_n`
//! admits a rainbow solution, by backtracking over canonically-labeled
//! colorings with rainbow, exactness, and affine-orbit pruning.

use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::group::{
    first_occurrence_renumber, modn, units, AffineMap, Coloring, LinearEquation,
};
use crate::solver;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CertifyError {
    #[error("palette {r} invalid for order {n}")]
    BadPalette { n: usize, r: u32 },
    #[error("order {n} exceeds the certification bound {bound}; pass an override to run anyway")]
    BoundExceeded { n: usize, bound: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    AllHaveRainbow,
    Counterexample,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct SearchStats {
    /// Complete exact colorings reached.
    pub colorings_visited: u64,
    /// Search-tree nodes expanded (canonical labeling classes).
    pub nodes_expanded: u64,
    pub rainbow_prunes: u64,
    pub exactness_prunes: u64,
    pub affine_prunes: u64,
    pub wall_ms: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CertificationReport {
    pub n: usize,
    pub equation: LinearEquation,
    pub r: u32,
    pub verdict: Verdict,
    pub counterexample: Option<Coloring>,
    pub stats: SearchStats,
}

#[derive(Debug, Clone)]
pub struct CertifyOptions {
    pub threads: Option<usize>,
    /// Prefix depth for work splitting.
    pub prefix_depth: usize,
    /// Run past the desk bound.
    pub allow_large: bool,
    pub bound_override: Option<usize>,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions { threads: None, prefix_depth: 4, allow_large: false, bound_override: None }
    }
}

/// Default full-certification bounds; beyond these the search refuses unless
/// explicitly overridden.
pub fn desk_bound(eq: &LinearEquation) -> usize {
    if eq.is_schur() {
        14
    } else {
        12
    }
}

/// Decide one level: does every exact r-coloring of `Z_n` have a rainbow
/// solution to `eq`?
pub fn certify_level(
    n: usize,
    r: u32,
    eq: &LinearEquation,
    opts: &CertifyOptions,
) -> Result<CertificationReport, CertifyError> {
    if r == 0 {
        return Err(CertifyError::BadPalette { n, r });
    }
    if r as usize > n {
        // No exact r-coloring exists, so the level holds vacuously.
        return Ok(CertificationReport {
            n,
            equation: eq.clone(),
            r,
            verdict: Verdict::AllHaveRainbow,
            counterexample: None,
            stats: SearchStats::default(),
        });
    }
    let start = Instant::now();
    let counterexample = match opts.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .expect("thread pool")
            .install(|| search(n, r, eq, opts)),
        None => search(n, r, eq, opts),
    };
    let (counterexample, mut stats) = counterexample;
    stats.wall_ms = start.elapsed().as_millis() as u64;
    let counterexample = counterexample.map(|c| {
        assert!(solver::is_rainbow_free(&c, eq), "counterexample failed re-verification");
        assert_eq!(c.palette(), r);
        let canon = canonical_under(&c, eq);
        assert!(solver::is_rainbow_free(&canon, eq), "symmetry mate lost rainbow-freeness");
        canon
    });
    Ok(CertificationReport {
        n,
        equation: eq.clone(),
        r,
        verdict: if counterexample.is_some() {
            Verdict::Counterexample
        } else {
            Verdict::AllHaveRainbow
        },
        counterexample,
        stats,
    })
}

/// Smallest r whose level certifies, else n+1 by convention. Returns the
/// per-level reports; the counterexample at level rb-1 is the lower-bound
/// certificate.
pub fn certify_rb(
    n: usize,
    eq: &LinearEquation,
    opts: &CertifyOptions,
) -> Result<(u64, Vec<CertificationReport>), CertifyError> {
    let bound = opts.bound_override.unwrap_or_else(|| desk_bound(eq));
    if n > bound && !opts.allow_large {
        return Err(CertifyError::BoundExceeded { n, bound });
    }
    let mut reports = Vec::new();
    for r in 1..=n as u32 {
        let report = certify_level(n, r, eq, opts)?;
        let verdict = report.verdict;
        reports.push(report);
        if verdict == Verdict::AllHaveRainbow {
            return Ok((r as u64, reports));
        }
    }
    Ok(((n + 1) as u64, reports))
}

struct SharedState {
    /// Index of the lowest-ranked task that found a counterexample.
    best_task: AtomicUsize,
    best: Mutex<Option<(usize, Vec<u32>)>>,
    colorings: AtomicU64,
    nodes: AtomicU64,
    rainbow_prunes: AtomicU64,
    exactness_prunes: AtomicU64,
    affine_prunes: AtomicU64,
}

struct SearchCtx<'a> {
    n: usize,
    r: u32,
    eq: &'a LinearEquation,
    /// Non-identity affine maps, empty when orbit pruning is off.
    maps: Vec<(usize, usize)>,
    shared: &'a SharedState,
}

fn search(
    n: usize,
    r: u32,
    eq: &LinearEquation,
    opts: &CertifyOptions,
) -> (Option<Coloring>, SearchStats) {
    let shared = SharedState {
        best_task: AtomicUsize::new(usize::MAX),
        best: Mutex::new(None),
        colorings: AtomicU64::new(0),
        nodes: AtomicU64::new(0),
        rainbow_prunes: AtomicU64::new(0),
        exactness_prunes: AtomicU64::new(0),
        affine_prunes: AtomicU64::new(0),
    };
    // Orbit checks cost more than they save at tiny n.
    let phi = units(n).len();
    let maps =
        if n * phi >= 64 && r <= 64 { symmetry_maps(n, eq) } else { Vec::new() };
    let ctx = SearchCtx { n, r, eq, maps, shared: &shared };

    let depth = opts.prefix_depth.min(n).max(1);
    let mut prefixes = Vec::new();
    let mut colors = vec![0u32; n];
    enumerate_prefixes(&ctx, &mut colors, 0, depth, &mut prefixes);
    prefixes
        .into_par_iter()
        .enumerate()
        .for_each(|(task, (prefix, used))| {
            if ctx.shared.best_task.load(Ordering::Relaxed) < task {
                return;
            }
            let mut colors = vec![0u32; n];
            colors[..prefix.len()].copy_from_slice(&prefix);
            dfs(&ctx, &mut colors, prefix.len(), used, task);
        });

    let stats = SearchStats {
        colorings_visited: shared.colorings.load(Ordering::Relaxed),
        nodes_expanded: shared.nodes.load(Ordering::Relaxed),
        rainbow_prunes: shared.rainbow_prunes.load(Ordering::Relaxed),
        exactness_prunes: shared.exactness_prunes.load(Ordering::Relaxed),
        affine_prunes: shared.affine_prunes.load(Ordering::Relaxed),
        wall_ms: 0,
    };
    let best = shared.best.lock().unwrap().take();
    (
        best.map(|(_, colors)| Coloring::from_exact(n, &colors).expect("exact by search")),
        stats,
    )
}

/// Collect the surviving partial assignments of the given depth, in
/// lexicographic order.
fn enumerate_prefixes(
    ctx: &SearchCtx,
    colors: &mut Vec<u32>,
    pos: usize,
    depth: usize,
    out: &mut Vec<(Vec<u32>, u32)>,
) {
    enumerate_rec(ctx, colors, pos, 0, depth, out);
}

fn enumerate_rec(
    ctx: &SearchCtx,
    colors: &mut Vec<u32>,
    pos: usize,
    used: u32,
    depth: usize,
    out: &mut Vec<(Vec<u32>, u32)>,
) {
    if pos == depth {
        out.push((colors[..depth].to_vec(), used));
        return;
    }
    for col in 0..=used.min(ctx.r - 1) {
        colors[pos] = col;
        let used_after = used.max(col + 1);
        if !viable(ctx, colors, pos, used_after, None) {
            continue;
        }
        enumerate_rec(ctx, colors, pos + 1, used_after, depth, out);
    }
}

/// Exactness, rainbow, and affine-orbit checks for the assignment at `pos`.
fn viable(ctx: &SearchCtx, colors: &[u32], pos: usize, used: u32, task: Option<usize>) -> bool {
    let remaining_colors = ctx.r - used;
    if remaining_colors as usize > ctx.n - pos - 1 {
        ctx.shared.exactness_prunes.fetch_add(1, Ordering::Relaxed);
        return false;
    }
    if has_new_rainbow(ctx, colors, pos) {
        ctx.shared.rainbow_prunes.fetch_add(1, Ordering::Relaxed);
        return false;
    }
    let _ = task;
    if affine_dominated(ctx, colors, pos + 1) {
        ctx.shared.affine_prunes.fetch_add(1, Ordering::Relaxed);
        return false;
    }
    true
}

fn dfs(ctx: &SearchCtx, colors: &mut Vec<u32>, pos: usize, used: u32, task: usize) {
    if ctx.shared.best_task.load(Ordering::Relaxed) < task {
        return;
    }
    ctx.shared.nodes.fetch_add(1, Ordering::Relaxed);
    if pos == ctx.n {
        ctx.shared.colorings.fetch_add(1, Ordering::Relaxed);
        if used == ctx.r {
            record_counterexample(ctx, colors, task);
        }
        return;
    }
    for col in 0..=used.min(ctx.r - 1) {
        colors[pos] = col;
        let used_after = used.max(col + 1);
        if viable(ctx, colors, pos, used_after, Some(task)) {
            dfs(ctx, colors, pos + 1, used_after, task);
            if ctx.shared.best_task.load(Ordering::Relaxed) <= task {
                return;
            }
        }
    }
}

fn record_counterexample(ctx: &SearchCtx, colors: &[u32], task: usize) {
    let mut best = ctx.shared.best.lock().unwrap();
    match &*best {
        Some((t, _)) if *t <= task => {}
        _ => {
            *best = Some((task, colors.to_vec()));
            ctx.shared.best_task.fetch_min(task, Ordering::Relaxed);
        }
    }
}

/// Does the assignment of position `pos` complete a rainbow solution among
/// positions `0..=pos`?
fn has_new_rainbow(ctx: &SearchCtx, colors: &[u32], pos: usize) -> bool {
    let n = ctx.n;
    if ctx.eq.is_sidon() {
        // pos + a = b + x4 with everything assigned.
        for a in 0..=pos {
            if a == pos {
                continue;
            }
            let ca = colors[a];
            let cp = colors[pos];
            if ca == cp {
                continue;
            }
            for b in 0..=pos {
                let x4 = modn(pos as i64 + a as i64 - b as i64, n);
                if x4 > pos || b == pos || b == a || x4 == pos || x4 == a || x4 == b {
                    continue;
                }
                let (cb, c4) = (colors[b], colors[x4]);
                if cb != c4 && cb != ca && cb != cp && c4 != ca && c4 != cp {
                    return true;
                }
            }
        }
        return false;
    }
    if ctx.eq.is_schur() {
        for a in 0..=pos {
            // pos + a = x3
            let x3 = (pos + a) % n;
            if a != pos
                && x3 <= pos
                && x3 != pos
                && x3 != a
                && distinct3(colors[pos], colors[a], colors[x3])
            {
                return true;
            }
            // a + b = pos
            let b = modn(pos as i64 - a as i64, n);
            if b <= pos
                && a < b
                && a != pos
                && b != pos
                && distinct3(colors[a], colors[b], colors[pos])
            {
                return true;
            }
        }
        return false;
    }
    generic_has_new_rainbow(ctx, colors, pos)
}

fn distinct3(a: u32, b: u32, c: u32) -> bool {
    a != b && a != c && b != c
}

/// Generic equations: enumerate tuples over the assigned window that contain
/// `pos`, solving the last variable when its coefficient is a unit.
fn generic_has_new_rainbow(ctx: &SearchCtx, colors: &[u32], pos: usize) -> bool {
    let s = ctx.eq.arity();
    let mut xs = vec![0usize; s];
    generic_rec(ctx, colors, pos, &mut xs, 0)
}

fn generic_rec(ctx: &SearchCtx, colors: &[u32], pos: usize, xs: &mut Vec<usize>, depth: usize) -> bool {
    let n = ctx.n;
    let s = ctx.eq.arity();
    if depth == s {
        if !xs.contains(&pos) || ctx.eq.residue(xs, n) != 0 {
            return false;
        }
        for i in 0..s {
            for j in i + 1..s {
                if xs[i] == xs[j] || colors[xs[i]] == colors[xs[j]] {
                    return false;
                }
            }
        }
        return true;
    }
    for x in 0..=pos {
        xs[depth] = x;
        if generic_rec(ctx, colors, pos, xs, depth + 1) {
            return true;
        }
    }
    false
}

/// Non-identity affine maps `x -> scale*x + shift` under which solution sets
/// of `eq` are preserved, so rainbow-freeness is constant on orbits. Scalings
/// need a homogeneous equation; translations additionally need the
/// coefficients to sum to zero mod n. Sidon admits the full affine group,
/// Schur only scalings.
fn symmetry_maps(n: usize, eq: &LinearEquation) -> Vec<(usize, usize)> {
    let homogeneous = modn(eq.constant(), n) == 0;
    if !homogeneous {
        return Vec::new();
    }
    let coeff_sum: i64 = eq.coefficients().iter().sum();
    let shift_bound = if modn(coeff_sum, n) == 0 { n } else { 1 };
    let mut maps = Vec::new();
    for &scale in &units(n) {
        for shift in 0..shift_bound {
            if (scale, shift) != (1, 0) {
                maps.push((scale, shift));
            }
        }
    }
    maps
}

/// Lex-least renumbered image of `c` over its symmetry orbit for `eq`. Agrees
/// with `Coloring::canonicalize` exactly when the full affine group applies.
fn canonical_under(c: &Coloring, eq: &LinearEquation) -> Coloring {
    let n = c.n();
    let renum = |img: &Coloring| first_occurrence_renumber(img.colors()).0;
    let mut best = renum(c);
    for (scale, shift) in symmetry_maps(n, eq) {
        let m = AffineMap::new(n, scale as i64, shift as i64).expect("scale is a unit");
        let image = renum(&c.apply_affine(&m).expect("orders match"));
        if image < best {
            best = image;
        }
    }
    let r = c.palette();
    Coloring::from_canonical(n, best, r)
}

/// True when some affine image of the assigned prefix, renumbered in
/// first-occurrence order, is lexicographically smaller: the subtree cannot
/// contain an orbit-minimal coloring.
fn affine_dominated(ctx: &SearchCtx, colors: &[u32], len: usize) -> bool {
    let n = ctx.n;
    'maps: for &(scale, shift) in &ctx.maps {
        let mut renum = [u32::MAX; 64];
        let mut next = 0u32;
        for x in 0..len {
            let src = (scale * x + shift) % n;
            if src >= len {
                continue 'maps;
            }
            let v = colors[src] as usize;
            if renum[v] == u32::MAX {
                renum[v] = next;
                next += 1;
            }
            match renum[v].cmp(&colors[x]) {
                std::cmp::Ordering::Less => return true,
                std::cmp::Ordering::Greater => continue 'maps,
                std::cmp::Ordering::Equal => {}
            }
        }
    }
    false
}
