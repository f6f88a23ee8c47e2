//! Variance control at the first level where the pure excess reaches one.

use serde::{Deserialize, Serialize};

use crate::annealed::{moment_trace, n1};
use crate::disorder::DisorderModel;
use crate::error::{argument, Error, Result};
use crate::params::ModelParams;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lemma22Outcome {
    pub pass: bool,
    pub beta: f64,
    pub c5: f64,
    pub h: f64,
    pub n1: Option<usize>,
    pub v_at_n1: Option<f64>,
    pub details: String,
}

/// Sets `h = exp(-c5 / beta)` and checks `v_{n1} <= beta`.
pub fn lemma22_check(
    params: &ModelParams,
    d: &DisorderModel,
    c5: f64,
    cap: usize,
) -> Result<Lemma22Outcome> {
    params.validate()?;
    if !params.is_marginal() {
        return argument(format!("requires b = sqrt(s); got s={}, b={}", params.s, params.b));
    }
    if !(params.beta > 0.0) {
        return argument(format!("requires beta > 0, got {}", params.beta));
    }
    if !(c5.is_finite() && c5 >= 0.0) {
        return argument(format!("c5 must be finite and >= 0, got {c5}"));
    }
    let beta = params.beta;
    let h = (-c5 / beta).exp();
    let mut out = Lemma22Outcome { pass: false, beta, c5, h, n1: None, v_at_n1: None, details: String::new() };
    if h == 0.0 {
        out.details = "h underflows to 0".into();
        return Ok(out);
    }
    let p = params.with_h(h);
    let n = match n1(&p, cap) {
        Ok(n) => n,
        Err(Error::Cap { cap, .. }) => {
            out.details = format!("n1 exceeds the cap {cap}");
            return Ok(out);
        }
        Err(e) => return Err(e),
    };
    out.n1 = Some(n);
    let trace = moment_trace(&p, d, n)?;
    let v = if trace.len() == n + 1 { trace[n].1 } else { f64::INFINITY };
    out.v_at_n1 = v.is_finite().then_some(v);
    out.pass = v <= beta;
    out.details = format!("v_n1 = {v:e} {} beta = {beta}", if out.pass { "<=" } else { ">" });
    Ok(out)
}

/// Largest `c5` in `c5s` that passes for every `beta`.
pub fn lemma22_scan(
    params: &ModelParams,
    d: &DisorderModel,
    betas: &[f64],
    c5s: &[f64],
    cap: usize,
) -> Result<Option<f64>> {
    let mut best = None;
    for &c5 in c5s {
        let mut all = true;
        for &beta in betas {
            if !lemma22_check(&params.with_beta(beta), d, c5, cap)?.pass {
                all = false;
                break;
            }
        }
        if all && best.is_none_or(|b| c5 > b) {
            best = Some(c5);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn non_marginal_rejected() {
        let p = ModelParams::new(4, 3.0, 0.2, 0.0).unwrap();
        assert!(lemma22_check(&p, &DisorderModel::Gaussian, 0.1, 1000).is_err());
        let p = ModelParams::marginal(4, 0.0, 0.0).unwrap();
        assert!(lemma22_check(&p, &DisorderModel::Gaussian, 0.1, 1000).is_err());
    }

    #[test]
    fn small_c5_passes_large_fails() {
        let p = ModelParams::marginal(4, 0.2, 0.0).unwrap();
        let ok = lemma22_check(&p, &DisorderModel::Gaussian, 0.05, 100_000).unwrap();
        assert!(ok.pass, "{ok:?}");
        let p = ModelParams::marginal(4, 2.0, 0.0).unwrap();
        let bad = lemma22_check(&p, &DisorderModel::Gaussian, 100.0, 100_000).unwrap();
        assert!(!bad.pass, "{bad:?}");
    }
}
