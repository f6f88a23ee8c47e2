//! Population (pool) dynamics for the quenched recursion.
//!
//! A pool holds `N` realizations of `log R_n`. One step builds each output
//! sample from `s` pool members drawn uniformly with replacement and `s - 1`
//! fresh `log A` variables:
//!
//! `log R' = logsumexp(sum log R + sum log A, log(b - 1)) - log b`.
//!
//! Resampling correlates the members of a pool, so confidence intervals are
//! built from independent replicas, never from within-pool spread.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::disorder::DisorderModel;
use crate::error::{argument, Error, Result};
use crate::logspace::{log_add_exp, mean_stderr, shifted_mean};
use crate::params::ModelParams;
use crate::rng::{Lineage, StreamFamily};

pub const DEFAULT_POOL_SIZE: usize = 100_000;
pub const DEFAULT_REPLICAS: usize = 16;

/// Draws `log A = beta omega - log M(beta) + h`, so that `E[A] = e^h`.
pub fn sample_log_a<R: Rng + ?Sized>(
    d: &DisorderModel,
    beta: f64,
    h: f64,
    rng: &mut R,
) -> Result<f64> {
    let omega = d.sample(rng)?;
    Ok(beta * omega - d.log_mgf(beta)? + h)
}

/// Precomputed `log A` sampler for the inner loops.
#[derive(Debug, Clone)]
pub(crate) struct LogASampler<'a> {
    disorder: &'a DisorderModel,
    beta: f64,
    offset: f64,
}

impl<'a> LogASampler<'a> {
    pub(crate) fn new(d: &'a DisorderModel, params: &ModelParams) -> Result<Self> {
        if !d.can_sample() {
            return Err(Error::UnsupportedSampling(d.name()));
        }
        Ok(LogASampler { disorder: d, beta: params.beta, offset: params.h - d.log_mgf(params.beta)? })
    }

    #[inline]
    pub(crate) fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        if self.beta == 0.0 {
            return self.offset;
        }
        // samplers of built-in laws are infallible
        self.beta * self.disorder.sample(rng).unwrap_or(0.0) + self.offset
    }
}

/// Combines `s` log partition functions and `s - 1` log weights.
#[inline]
pub(crate) fn combine(sum_log: f64, log_b_minus_1: f64, log_b: f64) -> f64 {
    log_add_exp(sum_log, log_b_minus_1) - log_b
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pool {
    pub level: u32,
    pub log_samples: Vec<f64>,
    pub params: ModelParams,
    pub disorder: DisorderModel,
    pub lineage: Lineage,
}

impl Pool {
    /// Level-0 pool, `R_0 = 1` for every member.
    pub fn new(
        params: ModelParams,
        disorder: DisorderModel,
        size: usize,
        lineage: Lineage,
    ) -> Result<Self> {
        params.validate()?;
        if size == 0 {
            return argument("pool size must be >= 1");
        }
        if !disorder.can_sample() {
            return Err(Error::UnsupportedSampling(disorder.name()));
        }
        Ok(Pool { level: 0, log_samples: vec![0.0; size], params, disorder, lineage })
    }

    pub fn len(&self) -> usize {
        self.log_samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.log_samples.is_empty()
    }

    /// Lower bound `log((b-1)/b)` of every sample at level >= 1.
    pub fn floor(&self) -> f64 {
        ((self.params.b - 1.0) / self.params.b).ln()
    }

    pub fn mean_log(&self) -> f64 {
        shifted_mean(&self.log_samples)
    }

    pub fn step(&self) -> Result<Pool> {
        pool_step(self)
    }

    pub fn advance_to(mut self, level: u32) -> Result<Pool> {
        while self.level < level {
            self = pool_step(&self)?;
        }
        Ok(self)
    }
}

/// One level of population dynamics.
pub fn pool_step(pool: &Pool) -> Result<Pool> {
    if pool.is_empty() {
        return argument("cannot step an empty pool");
    }
    let p = &pool.params;
    let sampler = LogASampler::new(&pool.disorder, p)?;
    let (log_b1, log_b) = ((p.b - 1.0).ln(), p.b.ln());
    let n = pool.len();
    let next_level = pool.level + 1;
    let src = &pool.log_samples;
    let s = p.s as usize;
    let out: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|k| {
            let mut rng = pool.lineage.stream(StreamFamily::Pool, next_level as u64, k as u64);
            let mut acc = 0.0;
            for _ in 0..s {
                acc += src[rng.random_range(0..n)];
            }
            for _ in 1..s {
                acc += sampler.draw(&mut rng);
            }
            combine(acc, log_b1, log_b)
        })
        .collect();
    Ok(Pool {
        level: next_level,
        log_samples: out,
        params: pool.params,
        disorder: pool.disorder.clone(),
        lineage: pool.lineage,
    })
}

/// Mean and standard error over independent replicas.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimateCI {
    pub mean: f64,
    pub stderr: f64,
    pub n_samples: usize,
    pub level: u32,
}

impl EstimateCI {
    pub fn upper(&self, k: f64) -> f64 {
        self.mean + k * self.stderr
    }

    pub fn lower(&self, k: f64) -> f64 {
        self.mean - k * self.stderr
    }
}

/// Independent replicas sharing parameters and level.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    pub pools: Vec<Pool>,
}

impl Ensemble {
    /// `replicas` level-0 pools with lineages `(seed, 0..replicas)`.
    pub fn new(
        params: ModelParams,
        disorder: DisorderModel,
        pool_size: usize,
        replicas: usize,
        seed: u64,
    ) -> Result<Self> {
        let pools = (0..replicas as u64)
            .map(|r| Pool::new(params, disorder.clone(), pool_size, Lineage::new(seed, r)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Ensemble { pools })
    }

    pub fn from_pools(pools: Vec<Pool>) -> Self {
        Ensemble { pools }
    }

    pub fn advance_to(self, level: u32) -> Result<Self> {
        let pools = self
            .pools
            .into_par_iter()
            .map(|p| p.advance_to(level))
            .collect::<Result<Vec<_>>>()?;
        Ok(Ensemble { pools })
    }

    pub fn level(&self) -> u32 {
        self.pools.first().map_or(0, |p| p.level)
    }

    fn check(&self) -> Result<(&ModelParams, u32)> {
        if self.pools.len() < 2 {
            return argument(format!(
                "estimates need >= 2 independent replicas, got {}",
                self.pools.len()
            ));
        }
        let first = &self.pools[0];
        for p in &self.pools[1..] {
            if p.level != first.level || p.params != first.params {
                return argument("replicas disagree on level or parameters");
            }
        }
        Ok((&first.params, first.level))
    }

    fn replica_estimate(&self, per_replica: impl Fn(&Pool) -> f64) -> Result<EstimateCI> {
        let (_, level) = self.check()?;
        let values: Vec<f64> = self.pools.iter().map(per_replica).collect();
        let (mean, stderr) = mean_stderr(&values);
        Ok(EstimateCI { mean, stderr, n_samples: values.len(), level })
    }
}

/// Replica estimate of `E log R_n`.
pub fn estimate_mean_log(ensemble: &Ensemble) -> Result<EstimateCI> {
    ensemble.replica_estimate(Pool::mean_log)
}

/// Replica estimate of `s^{-n} E log R_n`.
///
/// The finite-size offset from the free energy is `O(s^{-n})` with a
/// constant that is not computable; it is not included in `stderr`.
pub fn estimate_free_energy(ensemble: &Ensemble) -> Result<EstimateCI> {
    let (params, level) = ensemble.check()?;
    let scale = params.s_f64().powi(-(level as i32));
    ensemble.replica_estimate(|p| scale * p.mean_log())
}

/// Replica estimate of `s^{-n} [E log R_n - log b/(s-1) + h - log M(beta)]`.
///
/// The expectation of this quantity is nondecreasing in `n` and converges
/// to the free energy, so it is a lower bound at every level.
pub fn estimate_free_energy_lower(ensemble: &Ensemble) -> Result<EstimateCI> {
    let (params, level) = ensemble.check()?;
    let p = *params;
    let d = ensemble.pools[0].disorder.clone();
    let offset = p.h - d.log_mgf(p.beta)? - p.b.ln() / (p.s_f64() - 1.0);
    let scale = p.s_f64().powi(-(level as i32));
    ensemble.replica_estimate(|pool| scale * (pool.mean_log() + offset))
}

/// Replica estimate of `u_n = E[R_n^theta]`.
///
/// Each replica average is computed as `e^m mean(e^{theta log R - m})` with
/// `m` the largest `theta log R` in the pool.
pub fn estimate_fractional_moment(ensemble: &Ensemble, theta: f64) -> Result<EstimateCI> {
    if !(theta > 0.0 && theta <= 1.0) {
        return argument(format!("theta must lie in (0, 1], got {theta}"));
    }
    ensemble.replica_estimate(|pool| shifted_exp_mean(&pool.log_samples, theta))
}

pub(crate) fn shifted_exp_mean(log_samples: &[f64], theta: f64) -> f64 {
    let m = log_samples.iter().fold(f64::NEG_INFINITY, |a, &x| a.max(theta * x));
    let tail: f64 = log_samples.iter().map(|&x| (theta * x - m).exp()).sum();
    m.exp() * (tail / log_samples.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::annealed::annealed_step;

    fn mp(s: u32, b: f64, beta: f64, h: f64) -> ModelParams {
        ModelParams::new(s, b, beta, h).unwrap()
    }

    #[test]
    fn log_a_examples() {
        let mut rng = Lineage::new(1, 0).stream(StreamFamily::Environment, 0, 0);
        let g = DisorderModel::Gaussian;
        assert_eq!(sample_log_a(&g, 0.0, 0.37, &mut rng).unwrap(), 0.37);
        let b = DisorderModel::BinaryPm1;
        let lc = 1f64.cosh().ln();
        for _ in 0..50 {
            let x = sample_log_a(&b, 1.0, 0.0, &mut rng).unwrap();
            assert!((x - (1.0 - lc)).abs() < 1e-15 || (x - (-1.0 - lc)).abs() < 1e-15);
        }
        let tab = DisorderModel::Table(
            crate::disorder::TableMgf::from_fn(2.0, 100, |t| 0.5 * t * t).unwrap(),
        );
        assert!(matches!(sample_log_a(&tab, 0.5, 0.0, &mut rng), Err(Error::UnsupportedSampling(_))));
    }

    #[test]
    fn gaussian_weights_have_unit_mean() {
        let mut rng = Lineage::new(11, 0).stream(StreamFamily::Environment, 0, 0);
        let g = DisorderModel::Gaussian;
        let xs: Vec<f64> =
            (0..1_000_000).map(|_| sample_log_a(&g, 1.0, 0.0, &mut rng).unwrap().exp()).collect();
        let (m, se) = mean_stderr(&xs);
        assert!((m - 1.0).abs() <= 3.0 * se, "mean {m} se {se}");
    }

    #[test]
    fn pure_pool_step_is_deterministic() {
        let p = mp(2, 2.0, 0.0, 0.1);
        let pool = Pool::new(p, DisorderModel::Gaussian, 64, Lineage::new(3, 0)).unwrap();
        let next = pool.step().unwrap();
        let expect = annealed_step(0.0, &p);
        assert!(next.log_samples.iter().all(|&x| x == expect));
        assert!((expect - 0.051_249_48).abs() < 1e-8);
    }

    #[test]
    fn floor_holds() {
        let p = mp(3, 1.4, 1.5, -1.0);
        let pool = Pool::new(p, DisorderModel::Gaussian, 2000, Lineage::new(5, 0))
            .unwrap()
            .advance_to(6)
            .unwrap();
        let fl = pool.floor();
        assert!(pool.log_samples.iter().all(|&x| x >= fl));
    }

    #[test]
    fn single_step_matches_hand_evaluation() {
        // level-0 pool: each output uses R = 1 twice and a single A
        let p = mp(2, 2f64.sqrt(), 0.8, 0.05);
        let lineage = Lineage::new(99, 4);
        let pool = Pool::new(p, DisorderModel::Gaussian, 10, lineage).unwrap();
        let next = pool.step().unwrap();
        for k in 0..10 {
            let mut rng = lineage.stream(StreamFamily::Pool, 1, k);
            let _: usize = rng.random_range(0..10);
            let _: usize = rng.random_range(0..10);
            let omega: f64 = rng.sample(rand_distr::StandardNormal);
            let b = 2f64.sqrt();
            let direct = (((0.8 * omega - 0.32 + 0.05).exp() + b - 1.0) / b).ln();
            assert!((next.log_samples[k as usize] - direct).abs() < 1e-14);
        }
    }

    #[test]
    fn estimates_need_two_replicas() {
        let p = mp(2, 1.5, 0.3, 0.0);
        let e = Ensemble::new(p, DisorderModel::Gaussian, 10, 1, 0).unwrap();
        assert!(estimate_free_energy(&e).is_err());
        assert!(estimate_fractional_moment(&e, 0.5).is_err());
    }

    #[test]
    fn pure_estimates_are_exact() {
        let p = mp(4, 2.0, 0.0, 0.05);
        let e = Ensemble::new(p, DisorderModel::Gaussian, 100, 4, 1)
            .unwrap()
            .advance_to(5)
            .unwrap();
        let mut lr = 0.0;
        for _ in 0..5 {
            lr = annealed_step(lr, &p);
        }
        let f = estimate_free_energy(&e).unwrap();
        assert!((f.mean - lr * 4f64.powi(-5)).abs() < 1e-17);
        assert_eq!(f.stderr, 0.0);
        let u = estimate_fractional_moment(&e, 0.6).unwrap();
        assert!((u.mean / (0.6 * lr).exp() - 1.0).abs() < 1e-13);
        let u1 = estimate_fractional_moment(&e, 1.0).unwrap();
        assert!((u1.mean / lr.exp() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn fractional_moment_survives_huge_logs() {
        let xs = vec![1000.0, 1000.5, 999.0];
        let m = shifted_exp_mean(&xs, 0.5);
        assert!(m.is_finite());
        let direct = ((500.0f64).exp() + (500.25f64).exp() + (499.5f64).exp()) / 3.0;
        assert!((m - direct).abs() < 1e-12 * direct);
    }
}
