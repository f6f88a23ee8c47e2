//! Independent oracles for the quenched recursion: exact draws from the
//! full tree (no resampling) and brute-force path enumeration on `D_n`.

use rand::Rng;

use crate::disorder::DisorderModel;
use crate::error::{argument, Error, Result};
use crate::logspace::log_add_exp;
use crate::params::ModelParams;
use crate::pool::{combine, LogASampler};

/// Largest tree size `s^n` accepted by [`exact_tree_sample`].
pub const TREE_SIZE_LIMIT: u128 = 10_000_000;
/// Largest number of directed paths accepted by the enumeration oracle.
pub const PATH_COUNT_LIMIT: u128 = 1_000_000;

/// One exact draw of `log R_n`, expanding the recursion into `s^n` fully
/// independent leaves. Cost `Theta(s^n)`.
pub fn exact_tree_sample<R: Rng + ?Sized>(
    params: &ModelParams,
    d: &DisorderModel,
    n: u32,
    rng: &mut R,
) -> Result<f64> {
    params.validate()?;
    let size = (params.s as u128).checked_pow(n).unwrap_or(u128::MAX);
    if size > TREE_SIZE_LIMIT {
        return Err(Error::Size { what: "exact tree s^n", size, limit: TREE_SIZE_LIMIT });
    }
    let sampler = LogASampler::new(d, params)?;
    let (log_b1, log_b) = ((params.b - 1.0).ln(), params.b.ln());
    Ok(tree(n, params.s, &sampler, log_b1, log_b, rng))
}

fn tree<R: Rng + ?Sized>(
    n: u32,
    s: u32,
    sampler: &LogASampler<'_>,
    log_b1: f64,
    log_b: f64,
    rng: &mut R,
) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let mut acc = 0.0;
    for j in 0..s {
        acc += tree(n - 1, s, sampler, log_b1, log_b, rng);
        if j + 1 < s {
            acc += sampler.draw(rng);
        }
    }
    combine(acc, log_b1, log_b)
}

/// `log R_n` for a fixed environment, `omega[j - 1]` sitting at wall
/// position `j` in `1..s^n`. Block `k` of a level-`m` system covers the
/// positions strictly between `k s^{m-1}` and `(k+1) s^{m-1}`; the
/// separators `k s^{m-1}` carry the weights `A`.
pub fn quenched_log_partition(
    params: &ModelParams,
    d: &DisorderModel,
    n: u32,
    omega: &[f64],
) -> Result<f64> {
    params.validate()?;
    let len = (params.s as usize).pow(n);
    if omega.len() != len - 1 {
        return argument(format!("need s^n - 1 = {} disorder values, got {}", len - 1, omega.len()));
    }
    let offset = params.h - d.log_mgf(params.beta)?;
    let weight = |j: usize| params.beta * omega[j - 1] + offset;
    let (log_b1, log_b) = ((params.b - 1.0).ln(), params.b.ln());
    fn rec(m: u32, start: usize, s: usize, w: &dyn Fn(usize) -> f64, l1: f64, lb: f64) -> f64 {
        if m == 0 {
            return 0.0;
        }
        let block = s.pow(m - 1);
        let mut acc = 0.0;
        for k in 0..s {
            acc += rec(m - 1, start + k * block, s, w, l1, lb);
            if k > 0 {
                acc += w(start + k * block);
            }
        }
        combine(acc, l1, lb)
    }
    Ok(rec(n, 0, params.s as usize, &weight, log_b1, log_b))
}

/// Partition function `R_n` by enumeration of every directed path on an
/// explicitly built `D_n` (integer `b`).
///
/// The wall is the path that follows branch 0 at every substitution; a path
/// collects `beta omega_j + h - log M(beta)` at each wall vertex it visits,
/// `j` being the vertex's distance from `A`.
pub fn enumerate_paths_partition(
    params: &ModelParams,
    d: &DisorderModel,
    n: u32,
    omega: &[f64],
) -> Result<f64> {
    params.validate()?;
    let b = params.b;
    if b.fract() != 0.0 || b < 2.0 {
        return argument(format!("path enumeration needs an integer b >= 2, got {b}"));
    }
    let (s, bi) = (params.s as u128, b as u128);
    let length = s.checked_pow(n).unwrap_or(u128::MAX);
    let exponent = ((length - 1) / (s - 1)) as u32;
    let count = bi.checked_pow(exponent).unwrap_or(u128::MAX);
    if count > PATH_COUNT_LIMIT {
        return Err(Error::Size { what: "directed path count", size: count, limit: PATH_COUNT_LIMIT });
    }
    if omega.len() as u128 != length - 1 {
        return argument(format!("need s^n - 1 = {} disorder values, got {}", length - 1, omega.len()));
    }
    let lattice = Lattice::build(params.s as usize, bi as usize, n);
    let offset = params.h - d.log_mgf(params.beta)?;
    let mut log_sum = f64::NEG_INFINITY;
    let mut paths = 0u64;
    let mut stack = vec![(lattice.source, 0.0f64)];
    while let Some((v, energy)) = stack.pop() {
        if v == lattice.sink {
            log_sum = log_add_exp(log_sum, energy);
            paths += 1;
            continue;
        }
        for &w in &lattice.out[v] {
            let gain = if lattice.on_wall[w] && w != lattice.sink {
                params.beta * omega[lattice.depth[w] - 1] + offset
            } else {
                0.0
            };
            stack.push((w, energy + gain));
        }
    }
    debug_assert_eq!(paths as u128, count);
    Ok((log_sum - (paths as f64).ln()).exp())
}

struct Lattice {
    out: Vec<Vec<usize>>,
    depth: Vec<usize>,
    on_wall: Vec<bool>,
    source: usize,
    sink: usize,
}

impl Lattice {
    fn build(s: usize, b: usize, n: u32) -> Lattice {
        let length = s.pow(n);
        let mut depth = vec![0, length];
        let mut on_wall = vec![true, true];
        // (from, to, span, wall edge)
        let mut edges = vec![(0usize, 1usize, length, true)];
        for _ in 0..n {
            let mut next = Vec::with_capacity(edges.len() * b * s);
            for &(u, v, span, wall) in &edges {
                let sub = span / s;
                for branch in 0..b {
                    let on = wall && branch == 0;
                    let mut prev = u;
                    for k in 1..s {
                        let id = depth.len();
                        depth.push(depth[u] + k * sub);
                        on_wall.push(on);
                        next.push((prev, id, sub, on));
                        prev = id;
                    }
                    next.push((prev, v, sub, on));
                }
            }
            edges = next;
        }
        let mut out = vec![Vec::new(); depth.len()];
        for (u, v, _, _) in edges {
            out[u].push(v);
        }
        Lattice { out, depth, on_wall, source: 0, sink: 1 }
    }
}
