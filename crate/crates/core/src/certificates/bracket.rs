//! Bracketing the quenched critical point between the two certificates.

use serde::{Deserialize, Serialize};

use super::deloc::DelocCertificate;
use super::loc::{loc_certify, LocCertificate, LocOptions};
use super::search::{deloc_optimize, DelocSearch};
use crate::disorder::DisorderModel;
use crate::error::{argument, Result};
use crate::params::ModelParams;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BracketOptions {
    pub rel_tol: f64,
    /// Stop once the bracket on `h_ub` is this narrow in absolute terms.
    pub abs_tol: f64,
    pub max_steps: usize,
    /// First upper guess for `h_ub`; doubled until localization certifies.
    pub h_start: f64,
    pub max_doublings: usize,
}

impl Default for BracketOptions {
    fn default() -> Self {
        BracketOptions { rel_tol: 1e-3, abs_tol: 1e-15, max_steps: 60, h_start: 1.0, max_doublings: 16 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HcBracket {
    pub beta: f64,
    /// Largest certified delocalized field (0 is always valid).
    pub h_lb: f64,
    /// Smallest field certified localized, if one was found.
    pub h_ub: Option<f64>,
    pub lb_certificate: Option<DelocCertificate>,
    pub ub_certificate: Option<LocCertificate>,
    pub alarms: Vec<String>,
    /// No localized field found within the doubling budget.
    pub ub_exhausted: bool,
    /// Bisection stopped on the step budget rather than the tolerance.
    pub ub_unconverged: bool,
    pub deloc_evaluations: usize,
    pub loc_evaluations: usize,
}

impl HcBracket {
    pub fn width(&self) -> Option<f64> {
        self.h_ub.map(|u| u - self.h_lb)
    }
}

pub fn hc_bracket(
    params: &ModelParams,
    d: &DisorderModel,
    search: &DelocSearch,
    loc: &LocOptions,
    opts: &BracketOptions,
) -> Result<HcBracket> {
    params.validate()?;
    if !(opts.h_start > 0.0 && opts.rel_tol > 0.0) {
        return argument("h_start and rel_tol must be positive");
    }
    let beta = params.beta;
    let lb = if beta == 0.0 {
        None
    } else {
        Some(deloc_optimize(params, d, search)?)
    };
    let h_lb = lb.as_ref().map_or(0.0, |o| o.h_lb);
    let mut out = HcBracket {
        beta,
        h_lb,
        h_ub: None,
        lb_certificate: lb.as_ref().and_then(|o| o.certificate.clone()).filter(|c| c.is_certified()),
        ub_certificate: None,
        alarms: Vec::new(),
        ub_exhausted: false,
        ub_unconverged: false,
        deloc_evaluations: lb.as_ref().map_or(0, |o| o.evaluations),
        loc_evaluations: 0,
    };

    let mut trail: Vec<(f64, bool)> = Vec::new();
    let mut eval = |h: f64, out: &mut HcBracket| -> Result<LocCertificate> {
        out.loc_evaluations += 1;
        let c = loc_certify(&params.with_h(h), d, loc)?;
        trail.push((h, c.is_certified()));
        Ok(c)
    };

    let at_lb = eval(h_lb, &mut out)?;
    if at_lb.is_certified() {
        out.alarms.push(format!("localization certified at h = {h_lb:e}, which is certified delocalized"));
        out.h_ub = Some(h_lb);
        out.ub_certificate = Some(at_lb);
        return Ok(out);
    }

    let mut hi = opts.h_start.max(h_lb);
    let mut hi_cert = None;
    for _ in 0..=opts.max_doublings {
        let c = eval(hi, &mut out)?;
        if c.is_certified() {
            hi_cert = Some(c);
            break;
        }
        hi *= 2.0;
    }
    let Some(mut hi_cert) = hi_cert else {
        out.ub_exhausted = true;
        return Ok(out);
    };

    let mut lo = h_lb;
    let mut converged = false;
    for _ in 0..opts.max_steps {
        if hi - lo <= (opts.rel_tol * hi).max(opts.abs_tol) {
            converged = true;
            break;
        }
        let mid = if lo > 0.0 { (lo * hi).sqrt() } else { 0.5 * hi };
        let c = eval(mid, &mut out)?;
        if c.is_certified() {
            hi = mid;
            hi_cert = c;
        } else {
            lo = mid;
        }
    }
    if !converged && hi - lo <= (opts.rel_tol * hi).max(opts.abs_tol) {
        converged = true;
    }
    out.ub_unconverged = !converged;
    out.h_ub = Some(hi);
    out.ub_certificate = Some(hi_cert);

    trail.sort_by(|a, b| a.0.total_cmp(&b.0));
    if let Some(first) = trail.iter().position(|t| t.1) {
        if let Some(bad) = trail[first..].iter().find(|t| !t.1) {
            out.alarms.push(format!(
                "localization verdict not monotone in h: certified at {:e} but not at {:e}",
                trail[first].0, bad.0
            ));
        }
    }
    if h_lb > hi {
        out.alarms.push(format!("inverted bracket: h_lb = {h_lb:e} > h_ub = {hi:e}"));
    }
    Ok(out)
}
