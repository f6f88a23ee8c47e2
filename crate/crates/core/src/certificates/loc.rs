//! Localization certificate: exact second moment, a Chebyshev cut and the
//! monotone energy criterion.
//!
//! With `q = v_n / (1 - kappa)^2 >= P(R_n < kappa r_n)` and the almost sure
//! floor `R_n >= (b-1)/b`,
//!
//! `E log R_n >= (1 - q)(log r_n + log kappa) + q log((b-1)/b)`,
//!
//! and `E log R_n > log b/(s-1) + log M(beta) - h` at any level forces a
//! positive free energy.

use serde::{Deserialize, Serialize};

use super::strict::{log_mgf_dd, moments_dd};
use crate::annealed::{annealed_step, variance_step};
use crate::dd::Dd;
use crate::disorder::DisorderModel;
use crate::error::Result;
use crate::params::ModelParams;

pub const DEFAULT_LOC_MARGIN: f64 = 1e-9;
pub const DEFAULT_LOC_LEVEL_CAP: usize = 10_000;
pub const VARIANCE_SATURATION: f64 = 1e6;

/// How the Chebyshev cut `kappa` (the fraction of `r_n` below which `R_n`
/// counts as small) is chosen at each level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "policy", content = "kappa", rename_all = "snake_case")]
pub enum CutPolicy {
    /// Maximize the lower bound over `kappa` at every level.
    #[default]
    Optimized,
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LocOptions {
    /// Absolute margin: certified only if `bound > threshold + margin`.
    pub safety_margin: f64,
    pub level_cap: usize,
    pub cut: CutPolicy,
    pub strict: bool,
}

impl Default for LocOptions {
    fn default() -> Self {
        LocOptions {
            safety_margin: DEFAULT_LOC_MARGIN,
            level_cap: DEFAULT_LOC_LEVEL_CAP,
            cut: CutPolicy::Optimized,
            strict: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LocFailure {
    VarianceBlownUp,
    LevelCap,
    StrictReplayFailed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", content = "reason", rename_all = "snake_case")]
pub enum LocVerdict {
    CertifiedFPositive,
    Inconclusive(LocFailure),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocCertificate {
    pub params: ModelParams,
    pub disorder: String,
    /// Witness level, or the last level examined when inconclusive.
    pub witness_n: usize,
    #[serde(with = "crate::serde_float")]
    pub log_r_at_n: f64,
    #[serde(with = "crate::serde_float")]
    pub v_at_n: f64,
    #[serde(with = "crate::serde_float")]
    pub cut: f64,
    #[serde(with = "crate::serde_float")]
    pub exceed_prob: f64,
    pub chebyshev_valid: bool,
    pub floor_valid: bool,
    #[serde(with = "crate::serde_float")]
    pub elog_lower_bound: f64,
    pub threshold: f64,
    pub safety_margin: f64,
    pub strict_checked: bool,
    pub verdict: LocVerdict,
}

impl LocCertificate {
    pub fn is_certified(&self) -> bool {
        self.verdict == LocVerdict::CertifiedFPositive
    }
}

/// Lower bound on `E log R_n` for a given cut, with both validity flags.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutBound {
    pub cut: f64,
    pub exceed_prob: f64,
    pub chebyshev_valid: bool,
    pub floor_valid: bool,
    pub bound: f64,
}

impl CutBound {
    pub fn valid(&self) -> bool {
        self.chebyshev_valid && self.floor_valid
    }
}

pub fn cut_bound(log_r: f64, v: f64, b: f64, kappa: f64) -> CutBound {
    let floor = ((b - 1.0) / b).ln();
    let q = if v == 0.0 { 0.0 } else { v / ((1.0 - kappa) * (1.0 - kappa)) };
    let small = log_r + kappa.ln();
    CutBound {
        cut: kappa,
        exceed_prob: q,
        chebyshev_valid: q <= 1.0,
        floor_valid: small >= floor,
        bound: (1.0 - q) * small + q * floor,
    }
}

/// Best valid cut at `(log r, v)`, if any.
pub fn optimal_cut(log_r: f64, v: f64, b: f64) -> Option<CutBound> {
    if v == 0.0 {
        return Some(cut_bound(log_r, 0.0, b, 1.0));
    }
    let floor = ((b - 1.0) / b).ln();
    let hi = 1.0 - v.sqrt();
    let lo = (floor - log_r).exp();
    if !(hi > 0.0 && lo <= hi) {
        return None;
    }
    let lo = lo.max(f64::MIN_POSITIVE);
    let f = |k: f64| cut_bound(log_r, v, b, k).bound;
    const GRID: usize = 64;
    let step = (hi - lo) / GRID as f64;
    let mut best = (lo, f(lo));
    for i in 1..=GRID {
        let k = if i == GRID { hi } else { lo + step * i as f64 };
        let val = f(k);
        if val > best.1 {
            best = (k, val);
        }
    }
    let (mut a, mut c) = ((best.0 - step).max(lo), (best.0 + step).min(hi));
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..60 {
        let x1 = c - g * (c - a);
        let x2 = a + g * (c - a);
        if f(x1) < f(x2) {
            a = x1;
        } else {
            c = x2;
        }
    }
    let mid = 0.5 * (a + c);
    let k = if f(mid) > best.1 { mid } else { best.0 };
    let cb = cut_bound(log_r, v, b, k);
    cb.valid().then_some(cb)
}

pub fn loc_threshold(params: &ModelParams, d: &DisorderModel) -> Result<f64> {
    Ok(params.b.ln() / (params.s_f64() - 1.0) + d.log_mgf(params.beta)? - params.h)
}

pub fn loc_certify(params: &ModelParams, d: &DisorderModel, opts: &LocOptions) -> Result<LocCertificate> {
    params.validate()?;
    let threshold = loc_threshold(params, d)?;
    d.gamma(params.beta)?;
    let mut cert = LocCertificate {
        params: *params,
        disorder: d.name().to_string(),
        witness_n: 0,
        log_r_at_n: 0.0,
        v_at_n: 0.0,
        cut: f64::NAN,
        exceed_prob: f64::NAN,
        chebyshev_valid: false,
        floor_valid: false,
        elog_lower_bound: f64::NEG_INFINITY,
        threshold,
        safety_margin: opts.safety_margin,
        strict_checked: false,
        verdict: LocVerdict::Inconclusive(LocFailure::LevelCap),
    };
    let target = threshold + opts.safety_margin;
    let (mut log_r, mut v) = (0.0f64, 0.0f64);
    for n in 0..=opts.level_cap {
        cert.witness_n = n;
        cert.log_r_at_n = log_r;
        cert.v_at_n = v;
        if !(v <= VARIANCE_SATURATION) {
            cert.verdict = LocVerdict::Inconclusive(LocFailure::VarianceBlownUp);
            return Ok(cert);
        }
        // every valid bound is at most log r_n
        if log_r > target {
            let cb = match opts.cut {
                CutPolicy::Optimized => optimal_cut(log_r, v, params.b),
                CutPolicy::Fixed(k) => Some(cut_bound(log_r, v, params.b, k)).filter(|c| c.valid()),
            };
            if let Some(cb) = cb.filter(|c| c.bound > target) {
                cert.cut = cb.cut;
                cert.exceed_prob = cb.exceed_prob;
                cert.chebyshev_valid = cb.chebyshev_valid;
                cert.floor_valid = cb.floor_valid;
                cert.elog_lower_bound = cb.bound;
                cert.verdict = LocVerdict::CertifiedFPositive;
                break;
            }
        }
        if n == opts.level_cap {
            break;
        }
        v = variance_step(log_r, v, params, d)?;
        log_r = annealed_step(log_r, params);
    }
    if opts.strict && cert.is_certified() {
        cert.strict_checked = true;
        if !strict_replay(&cert, d) {
            cert.verdict = LocVerdict::Inconclusive(LocFailure::StrictReplayFailed);
        }
    }
    Ok(cert)
}

fn strict_replay(cert: &LocCertificate, d: &DisorderModel) -> bool {
    let p = &cert.params;
    let (lr, v) = moments_dd(p, d, cert.witness_n);
    let b = Dd::new(p.b);
    let floor = ((b - Dd::ONE) / b).ln();
    let kappa = Dd::new(cert.cut);
    let one_m = Dd::ONE - kappa;
    let q = if v.hi == 0.0 { Dd::ZERO } else { v / (one_m * one_m) };
    let small = lr + kappa.ln();
    if q > Dd::ONE || small < floor {
        return false;
    }
    let bound = (Dd::ONE - q) * small + q * floor;
    let threshold = b.ln() / Dd::new(p.s_f64() - 1.0) + log_mgf_dd(d, Dd::new(p.beta))
        - Dd::new(p.h);
    bound > threshold + Dd::new(cert.safety_margin)
}
