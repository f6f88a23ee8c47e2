//! Extended-precision replays of certificate inequality chains.

use crate::dd::Dd;
use crate::disorder::DisorderModel;
use crate::geometry::vi_size_f64;
use crate::params::ModelParams;

use super::cost::ChangeOfMeasure;
use super::profile::ShiftProfile;

pub(crate) fn log_mgf_dd(d: &DisorderModel, t: Dd) -> Dd {
    match d {
        DisorderModel::Gaussian => t * t / Dd::new(2.0),
        DisorderModel::BinaryPm1 => {
            let a = t.abs();
            a + (Dd::new(-2.0) * a).exp().ln_1p() - Dd::new(2.0).ln()
        }
        DisorderModel::Table(tab) => {
            let (ts, ls) = tab.points();
            let x = t.to_f64();
            let i = ts.partition_point(|&p| p < x).clamp(1, ts.len() - 1);
            let (t0, t1) = (Dd::new(ts[i - 1]), Dd::new(ts[i]));
            let w = (t - t0) / (t1 - t0);
            Dd::new(ls[i - 1]) * (Dd::ONE - w) + Dd::new(ls[i]) * w
        }
    }
}

fn theta_pows(b: f64, theta: f64) -> (Dd, Dd) {
    let th = Dd::new(theta);
    (Dd::new(b).powf(th), Dd::new(b - 1.0).powf(th))
}

/// `g_theta(x) <= x` at double-double precision.
pub(crate) fn in_absorbing_set(x: f64, s: u32, b: f64, theta: f64) -> bool {
    let (bt, b1t) = theta_pows(b, theta);
    let xd = Dd::new(x);
    (xd.powi(s) + b1t) / bt <= xd
}

pub(crate) fn log_a_theta_dd(d: &DisorderModel, beta: f64, h: f64, theta: f64) -> Dd {
    let th = Dd::new(theta);
    th * (Dd::new(h) - log_mgf_dd(d, Dd::new(beta))) + log_mgf_dd(d, th * Dd::new(beta))
}

pub(crate) fn log_cost_dd(
    d: &DisorderModel,
    profile: &ShiftProfile,
    theta: f64,
    measure: ChangeOfMeasure,
) -> Dd {
    let th = Dd::new(theta);
    let one_m = Dd::ONE - th;
    let mut total = Dd::ZERO;
    for (i, &delta) in profile.deltas.iter().enumerate() {
        let size = Dd::new(vi_size_f64(i as u32, profile.n, profile.s));
        let dl = Dd::new(delta);
        let per_site = match measure {
            ChangeOfMeasure::Shift => th * dl * dl / (Dd::new(2.0) * one_m),
            ChangeOfMeasure::Tilt => {
                let k = th / one_m;
                one_m * (log_mgf_dd(d, k * dl) + k * log_mgf_dd(d, -dl))
            }
        };
        total = total + size * per_site;
    }
    total
}

/// `tilde r_n` in linear scale at double-double precision.
pub(crate) fn shifted_r_dd(
    params: &ModelParams,
    d: &DisorderModel,
    profile: &ShiftProfile,
    measure: ChangeOfMeasure,
) -> Dd {
    let sm1 = Dd::new(params.s_f64() - 1.0);
    let beta = Dd::new(params.beta);
    let h = Dd::new(params.h);
    let b = Dd::new(params.b);
    let b1 = Dd::new(params.b - 1.0);
    let lm_beta = log_mgf_dd(d, beta);
    let mut r = Dd::ONE;
    for &delta in &profile.deltas {
        let dl = Dd::new(delta);
        let w = match measure {
            ChangeOfMeasure::Shift => sm1 * (h - beta * dl),
            ChangeOfMeasure::Tilt => {
                sm1 * (log_mgf_dd(d, beta - dl) - lm_beta - log_mgf_dd(d, -dl) + h)
            }
        };
        r = (r.powi(params.s) * w.exp() + b1) / b;
    }
    r
}

/// Fractional-moment bound sequence `u_0 = 1, ..., u_n` at double-double
/// precision.
pub(crate) fn plain_u_dd(params: &ModelParams, log_a: Dd, theta: f64, n: usize) -> Dd {
    let (bt, b1t) = theta_pows(params.b, theta);
    let a_pow = (Dd::new(params.s_f64() - 1.0) * log_a).exp();
    let mut u = Dd::ONE;
    for _ in 0..n {
        u = (u.powi(params.s) * a_pow + b1t) / bt;
    }
    u
}

/// Exact `(log r_n, v_n)` at double-double precision.
pub(crate) fn moments_dd(params: &ModelParams, d: &DisorderModel, n: usize) -> (Dd, Dd) {
    let s = Dd::new(params.s_f64());
    let sm1 = Dd::new(params.s_f64() - 1.0);
    let h = Dd::new(params.h);
    let b = Dd::new(params.b);
    let b1 = Dd::new(params.b - 1.0);
    let beta = Dd::new(params.beta);
    let gamma = if params.beta == 0.0 {
        Dd::ZERO
    } else {
        log_mgf_dd(d, Dd::new(2.0) * beta) - Dd::new(2.0) * log_mgf_dd(d, beta)
    };
    let (mut lr, mut v) = (Dd::ZERO, Dd::ZERO);
    for _ in 0..n {
        let t = s * lr + sm1 * h;
        // ratio = (b - 1) e^{-t}; prefactor = (1 + ratio)^{-2}
        let (ratio, log_den) = if t.hi > 0.0 {
            let ratio = b1 * (-t).exp();
            (ratio, t + ratio.ln_1p())
        } else {
            let top = t.exp();
            (b1 / top, (top + b1).ln())
        };
        let one_p = Dd::ONE + ratio;
        v = (sm1 * gamma + s * v.ln_1p()).exp_m1() / (one_p * one_p);
        lr = log_den - b.ln();
    }
    (lr, v)
}
