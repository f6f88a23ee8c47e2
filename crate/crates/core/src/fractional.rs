//! Scalars of the fractional-moment argument: the map `g_theta`, its
//! absorbing threshold `x_theta`, and `a_theta = E[A^theta]`.

use crate::disorder::DisorderModel;
use crate::error::{argument, Result};

pub const X_THETA_TOL: f64 = 1e-12;

/// `g_theta(x) = (x^s + (b-1)^theta) / b^theta`.
#[inline]
pub fn g_theta(x: f64, s: u32, b: f64, theta: f64) -> f64 {
    (x.powi(s as i32) + (b - 1.0).powf(theta)) / b.powf(theta)
}

/// Largest `x` in `[0, 1]` with `g_theta(x) <= x`, or `None` when that set
/// is empty.
///
/// `x -> g_theta(x) - x` is convex with its minimum at
/// `(b^theta / s)^{1/(s-1)}`; the sublevel set is an interval whose right
/// end is found by bisection from the minimizer.
pub fn x_theta(s: u32, b: f64, theta: f64) -> Result<Option<f64>> {
    if s < 2 || !(b > 1.0) {
        return argument(format!("x_theta needs s >= 2 and b > 1, got s={s}, b={b}"));
    }
    if !(theta > 0.0 && theta <= 1.0) {
        return argument(format!("theta must lie in (0, 1], got {theta}"));
    }
    if theta == 1.0 {
        return Ok(Some(1.0));
    }
    let f = |x: f64| g_theta(x, s, b, theta) - x;
    let sf = s as f64;
    let argmin = (b.powf(theta) / sf).powf(1.0 / (sf - 1.0)).clamp(0.0, 1.0);
    if f(argmin) > 0.0 {
        return Ok(None);
    }
    let (mut lo, mut hi) = (argmin, 1.0);
    if f(hi) <= 0.0 {
        return Ok(Some(hi));
    }
    while hi - lo > X_THETA_TOL {
        let mid = 0.5 * (lo + hi);
        if f(mid) <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(lo))
}

/// `a_theta = E[exp(theta (beta omega - log M(beta) + h))]`.
pub fn a_theta(d: &DisorderModel, beta: f64, h: f64, theta: f64) -> Result<f64> {
    Ok(log_a_theta(d, beta, h, theta)?.exp())
}

pub fn log_a_theta(d: &DisorderModel, beta: f64, h: f64, theta: f64) -> Result<f64> {
    Ok(theta * (h - d.log_mgf(beta)?) + d.log_mgf(theta * beta)?)
}

/// Largest `h` with `a_theta <= 1`: `log M(beta) - log M(theta beta) / theta`.
pub fn a_theta_h_max(d: &DisorderModel, beta: f64, theta: f64) -> Result<f64> {
    Ok(d.log_mgf(beta)? - d.log_mgf(theta * beta)? / theta)
}

/// One step of the fractional-moment upper bound
/// `u' = (u^s a^{s-1} + (b-1)^theta) / b^theta`.
#[inline]
pub fn u_bound_step(u: f64, a: f64, s: u32, b: f64, theta: f64) -> f64 {
    (u.powi(s as i32) * a.powi(s as i32 - 1) + (b - 1.0).powf(theta)) / b.powf(theta)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn x_theta_examples() {
        for b in [1.2, 1.5, 1.9] {
            assert_eq!(x_theta(2, b, 1.0).unwrap(), Some(1.0));
        }
        let x = x_theta(2, 2f64.sqrt(), 0.9).unwrap().unwrap();
        // larger root of the quadratic x^2 - 2^{0.45} x + (sqrt2 - 1)^{0.9}
        let (p, q) = (2f64.powf(0.45), (2f64.sqrt() - 1.0).powf(0.9));
        let root = (p + (p * p - 4.0 * q).sqrt()) / 2.0;
        assert!((x - root).abs() < 1e-11);
        assert!((x - 0.801_923_75).abs() < 1e-8);
        let near = x_theta(2, 2f64.sqrt(), 0.999).unwrap().unwrap();
        assert!(near > 0.99 && near < 1.0);
    }

    #[test]
    fn x_theta_undefined_far_from_one() {
        assert_eq!(x_theta(2, 2f64.sqrt(), 0.3).unwrap(), None);
        assert!(x_theta(2, 1.5, 0.0).is_err());
        assert!(x_theta(2, 1.5, 1.2).is_err());
        assert!(x_theta(1, 1.5, 0.5).is_err());
    }

    #[test]
    fn x_theta_monotone_in_theta() {
        let mut prev = 0.0;
        for k in 0..200 {
            let th = 0.5 + 0.0025 * k as f64;
            if let Some(x) = x_theta(4, 2.0, th).unwrap() {
                assert!(x < 1.0);
                assert!(x >= prev - 1e-12, "theta {th}");
                prev = x;
            }
        }
        assert!(prev > 0.99);
    }

    #[test]
    fn a_theta_examples() {
        let g = DisorderModel::Gaussian;
        assert_eq!(a_theta(&g, 0.0, 0.0, 0.7).unwrap(), 1.0);
        assert!((a_theta(&g, 1.0, 0.0, 0.5).unwrap() - (-0.125f64).exp()).abs() < 1e-15);
        let (beta, theta) = (0.7, 0.8);
        let hb = (1.0 - theta) * beta * beta / 2.0;
        assert!((a_theta_h_max(&g, beta, theta).unwrap() - hb).abs() < 1e-15);
        assert!((a_theta(&g, beta, hb, theta).unwrap() - 1.0).abs() < 1e-15);
        assert!(a_theta(&g, beta, hb * 0.9, theta).unwrap() < 1.0);
        assert!(a_theta(&g, beta, hb * 1.1, theta).unwrap() > 1.0);
    }
}
