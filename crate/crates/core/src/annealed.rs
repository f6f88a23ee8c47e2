//! Exact deterministic recursions: first moment `r_n = E R_n`, the excess
//! `p_n = r_n - 1` and the relative variance `v_n = Var(R_n) / r_n^2`.

use serde::{Deserialize, Serialize};

use crate::disorder::DisorderModel;
use crate::error::{argument, Error, Result};
use crate::logspace::log_add_exp;
use crate::params::ModelParams;

pub const DEFAULT_DIVERGENCE_THRESHOLD: f64 = 700.0;
pub const DEFAULT_CONVERGENCE_TOL: f64 = 1e-15;
pub const DEFAULT_N1_CAP: usize = 1_000_000;

/// One step of the pure recursion, in log domain:
/// `r' = (e^{(s-1)h} r^s + b - 1) / b`.
#[inline]
pub fn annealed_step(log_r: f64, p: &ModelParams) -> f64 {
    let top = (p.s_f64() - 1.0) * p.h + p.s_f64() * log_r;
    log_add_exp(top, (p.b - 1.0).ln()) - p.b.ln()
}

/// Same step in the linear domain; used to cross-check the log form.
#[inline]
pub fn annealed_step_linear(r: f64, p: &ModelParams) -> f64 {
    (((p.s_f64() - 1.0) * p.h).exp() * r.powi(p.s as i32) + p.b - 1.0) / p.b
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceStatus {
    Diverging,
    ConvergedBelowOne,
    Flat,
    /// `n_max` reached before any of the other outcomes was detected.
    Unresolved,
}

#[derive(Debug, Clone)]
pub struct IterateOptions {
    pub n_max: usize,
    pub div_threshold: f64,
    pub conv_tol: f64,
    /// When set, the relative variance is carried along.
    pub disorder: Option<DisorderModel>,
}

impl IterateOptions {
    pub fn new(n_max: usize) -> Self {
        IterateOptions {
            n_max,
            div_threshold: DEFAULT_DIVERGENCE_THRESHOLD,
            conv_tol: DEFAULT_CONVERGENCE_TOL,
            disorder: None,
        }
    }

    pub fn with_variance(mut self, d: DisorderModel) -> Self {
        self.disorder = Some(d);
        self
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AnnealedTrace {
    pub params: ModelParams,
    pub log_r: Vec<f64>,
    /// `r_n - 1`; `None` once `log r_n` is too large to exponentiate.
    pub p: Vec<Option<f64>>,
    /// Relative variance, empty unless requested. Infinite once blown up.
    pub v: Vec<f64>,
    pub status: TraceStatus,
    /// First level at which the variance overflowed.
    pub variance_blowup: Option<usize>,
}

impl AnnealedTrace {
    pub fn len(&self) -> usize {
        self.log_r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.log_r.is_empty()
    }

    pub fn last_log_r(&self) -> f64 {
        *self.log_r.last().unwrap()
    }
}

fn excess(log_r: f64) -> Option<f64> {
    (log_r < 700.0).then(|| log_r.exp_m1())
}

/// Iterates the annealed recursion from `r_0 = 1`.
pub fn annealed_iterate(params: &ModelParams, opts: &IterateOptions) -> Result<AnnealedTrace> {
    params.validate()?;
    if opts.n_max < 1 {
        return argument("n_max must be >= 1");
    }
    if !(opts.div_threshold > 0.0) {
        return argument("divergence threshold must be > 0");
    }
    let mut trace = AnnealedTrace {
        params: *params,
        log_r: vec![0.0],
        p: vec![Some(0.0)],
        v: Vec::new(),
        status: TraceStatus::Unresolved,
        variance_blowup: None,
    };
    let mut v = 0.0;
    if opts.disorder.is_some() {
        trace.v.push(0.0);
    }
    if params.h == 0.0 && opts.disorder.is_none() {
        trace.log_r.resize(opts.n_max + 1, 0.0);
        trace.p.resize(opts.n_max + 1, Some(0.0));
        trace.status = TraceStatus::Flat;
        return Ok(trace);
    }
    let mut log_r = 0.0_f64;
    for n in 0..opts.n_max {
        let next = annealed_step(log_r, params);
        if let Some(d) = &opts.disorder {
            v = variance_step(log_r, v, params, d)?;
            if v.is_infinite() && trace.variance_blowup.is_none() {
                trace.variance_blowup = Some(n + 1);
            }
            trace.v.push(v);
        }
        trace.log_r.push(next);
        trace.p.push(excess(next));
        if params.h == 0.0 {
            log_r = next;
            continue;
        }
        if next > opts.div_threshold {
            trace.status = TraceStatus::Diverging;
            return Ok(trace);
        }
        let (r0, r1) = (log_r.exp(), next.exp());
        if r1 < 1.0 && (r1 - r0).abs() < opts.conv_tol {
            trace.status = TraceStatus::ConvergedBelowOne;
            return Ok(trace);
        }
        log_r = next;
    }
    if params.h == 0.0 {
        trace.status = TraceStatus::Flat;
    }
    Ok(trace)
}

/// Stable fixed point `r_inf < 1` of the pure map for `h < 0`.
pub fn annealed_fixed_point(params: &ModelParams, n_max: usize) -> Result<f64> {
    if !(params.h < 0.0) {
        return argument("the sub-unit fixed point exists only for h < 0");
    }
    let trace = annealed_iterate(params, &IterateOptions::new(n_max))?;
    match trace.status {
        TraceStatus::ConvergedBelowOne => Ok(trace.last_log_r().exp()),
        _ => Err(Error::Cap { what: "converging to the pure fixed point", cap: n_max }),
    }
}

/// Pure free energy `F(0, h) = lim s^{-n} log r_n`.
///
/// Uses `s^{-n} (log r_n + h - log b / (s - 1))`, which is nondecreasing in
/// `n`, and stops when successive values agree to `rel_tol`. Depends only on
/// `(s, b, h)`: `E R_n = r_n` for every `beta`.
pub fn annealed_free_energy(params: &ModelParams, rel_tol: f64) -> Result<f64> {
    params.validate()?;
    if !(rel_tol > 0.0) {
        return argument("rel_tol must be > 0");
    }
    if params.h <= 0.0 {
        return Ok(0.0);
    }
    const CAP: usize = 100_000;
    let s = params.s_f64();
    let offset = params.h - params.b.ln() / (s - 1.0);
    let mut log_r = 0.0;
    let mut scale = 1.0_f64;
    let mut prev = offset;
    for _ in 0..CAP {
        log_r = annealed_step(log_r, params);
        scale /= s;
        let est = scale * (log_r + offset);
        if est > 0.0 && (est - prev).abs() <= rel_tol * est {
            return Ok(est);
        }
        if scale == 0.0 {
            return Ok(prev.max(0.0));
        }
        prev = est;
    }
    Err(Error::Cap { what: "converging the pure free energy", cap: CAP })
}

/// `p_{n+1} = ((1 + p_n)^s e^{(s-1)h} - 1) / b`.
#[inline]
pub fn p_step(p: f64, params: &ModelParams) -> f64 {
    let s = params.s_f64();
    (s * p.ln_1p() + (s - 1.0) * params.h).exp_m1() / params.b
}

/// Smallest `n` with `p_n >= 1`.
pub fn n1(params: &ModelParams, cap: usize) -> Result<usize> {
    params.validate()?;
    if !(params.h > 0.0) {
        return argument(format!("n1 needs h > 0, got {}", params.h));
    }
    let mut p = 0.0;
    for n in 0..=cap {
        if p >= 1.0 {
            return Ok(n);
        }
        p = p_step(p, params);
    }
    Err(Error::Cap { what: "searching n1", cap })
}

/// One step of the exact relative-variance recursion.
///
/// Returns `f64::INFINITY` when `(v + 1)^s e^{(s-1) gamma}` overflows.
pub fn variance_step(log_r: f64, v: f64, params: &ModelParams, d: &DisorderModel) -> Result<f64> {
    if !(v >= 0.0) {
        return argument(format!("relative variance must be >= 0, got {v}"));
    }
    if v.is_infinite() {
        return Ok(f64::INFINITY);
    }
    let s = params.s_f64();
    let gamma = d.gamma(params.beta)?;
    let log_top = s * log_r + (s - 1.0) * params.h;
    let log_den = log_add_exp(log_top, (params.b - 1.0).ln());
    let prefactor = (2.0 * (log_top - log_den)).exp();
    let exponent = (s - 1.0) * gamma + s * v.ln_1p();
    if exponent > 709.0 {
        return Ok(f64::INFINITY);
    }
    Ok((prefactor * exponent.exp_m1()).max(0.0))
}

/// Exact `(log r_n, v_n)` pairs up to level `n_max` (or until blow-up).
pub fn moment_trace(
    params: &ModelParams,
    d: &DisorderModel,
    n_max: usize,
) -> Result<Vec<(f64, f64)>> {
    params.validate()?;
    let mut out = Vec::with_capacity(n_max + 1);
    let (mut log_r, mut v) = (0.0, 0.0);
    out.push((log_r, v));
    for _ in 0..n_max {
        v = variance_step(log_r, v, params, d)?;
        log_r = annealed_step(log_r, params);
        out.push((log_r, v));
        if v.is_infinite() {
            break;
        }
    }
    Ok(out)
}
