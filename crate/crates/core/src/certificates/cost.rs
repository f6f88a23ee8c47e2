//! Cost of the change of measure and the annealed recursion under the
//! shifted (or tilted) environment.

use serde::{Deserialize, Serialize};

use super::profile::ShiftProfile;
use crate::disorder::DisorderModel;
use crate::error::{argument, Result};
use crate::geometry::vi_size_f64;
use crate::logspace::log_add_exp;
use crate::params::ModelParams;

/// Gaussian mean shift, or exponential tilt for general laws.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChangeOfMeasure {
    Shift,
    Tilt,
}

impl ChangeOfMeasure {
    pub fn for_disorder(d: &DisorderModel) -> Self {
        match d {
            DisorderModel::Gaussian => ChangeOfMeasure::Shift,
            _ => ChangeOfMeasure::Tilt,
        }
    }
}

fn check_theta(theta: f64) -> Result<()> {
    if !(theta > 0.0 && theta < 1.0) {
        return argument(format!("theta must lie in (0, 1), got {theta}"));
    }
    Ok(())
}

/// `log` of the Gaussian Hölder cost `theta / (2 (1-theta)) sum |V_i| delta_i^2`.
pub fn log_holder_cost_gaussian(profile: &ShiftProfile, theta: f64) -> Result<f64> {
    check_theta(theta)?;
    Ok(theta / (2.0 * (1.0 - theta)) * profile.weighted_square_sum())
}

pub fn holder_cost_gaussian(profile: &ShiftProfile, theta: f64) -> Result<f64> {
    Ok(log_holder_cost_gaussian(profile, theta)?.exp())
}

/// `log` of the tilt cost
/// `(1-theta) sum |V_i| [log M(theta delta_i/(1-theta)) + theta/(1-theta) log M(-delta_i)]`.
pub fn log_holder_cost_tilt(d: &DisorderModel, profile: &ShiftProfile, theta: f64) -> Result<f64> {
    check_theta(theta)?;
    let k = theta / (1.0 - theta);
    let mut total = 0.0;
    for (i, &delta) in profile.deltas.iter().enumerate() {
        if delta == 0.0 {
            continue;
        }
        let per_site = d.log_mgf(k * delta)? + k * d.log_mgf(-delta)?;
        total += vi_size_f64(i as u32, profile.n, profile.s) * per_site;
    }
    Ok((1.0 - theta) * total)
}

pub fn holder_cost_tilt(d: &DisorderModel, profile: &ShiftProfile, theta: f64) -> Result<f64> {
    Ok(log_holder_cost_tilt(d, profile, theta)?.exp())
}

pub fn log_holder_cost(
    d: &DisorderModel,
    profile: &ShiftProfile,
    theta: f64,
    measure: ChangeOfMeasure,
) -> Result<f64> {
    match measure {
        ChangeOfMeasure::Shift => {
            require_gaussian(d)?;
            log_holder_cost_gaussian(profile, theta)
        }
        ChangeOfMeasure::Tilt => log_holder_cost_tilt(d, profile, theta),
    }
}

fn require_gaussian(d: &DisorderModel) -> Result<()> {
    if *d != DisorderModel::Gaussian {
        return argument("the mean-shift change of measure is Gaussian-only; use the tilt");
    }
    Ok(())
}

/// Per-level exponents `(s-1) * (log E~[A] at level i)`.
pub(crate) fn shifted_log_weights(
    params: &ModelParams,
    d: &DisorderModel,
    profile: &ShiftProfile,
    measure: ChangeOfMeasure,
) -> Result<Vec<f64>> {
    let (beta, h) = (params.beta, params.h);
    let sm1 = params.s_f64() - 1.0;
    match measure {
        ChangeOfMeasure::Shift => {
            require_gaussian(d)?;
            Ok(profile.deltas.iter().map(|&dl| sm1 * (-beta * dl + h)).collect())
        }
        ChangeOfMeasure::Tilt => {
            let lm_beta = d.log_mgf(beta)?;
            profile
                .deltas
                .iter()
                .map(|&dl| {
                    Ok(sm1 * (d.log_mgf(beta - dl)? - lm_beta - d.log_mgf(-dl)? + h))
                })
                .collect()
        }
    }
}

/// `log tilde r_n` for the environment shifted by `profile`: starting from
/// `tilde r_0 = 1`, step `i -> i+1` consumes the `V_i` sites.
pub fn shifted_annealed_log(
    params: &ModelParams,
    d: &DisorderModel,
    profile: &ShiftProfile,
    measure: ChangeOfMeasure,
) -> Result<f64> {
    params.validate()?;
    if profile.s != params.s {
        return argument(format!("profile built for s={} but model has s={}", profile.s, params.s));
    }
    let weights = shifted_log_weights(params, d, profile, measure)?;
    Ok(run_shifted(params, &weights))
}

pub(crate) fn run_shifted(params: &ModelParams, weights: &[f64]) -> f64 {
    let s = params.s_f64();
    let (log_b1, log_b) = ((params.b - 1.0).ln(), params.b.ln());
    weights
        .iter()
        .fold(0.0, |lr, &w| log_add_exp(s * lr + w, log_b1) - log_b)
}

/// `tilde r_n` (linear scale).
pub fn shifted_annealed_iterate(
    params: &ModelParams,
    d: &DisorderModel,
    profile: &ShiftProfile,
    measure: ChangeOfMeasure,
) -> Result<f64> {
    Ok(shifted_annealed_log(params, d, profile, measure)?.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::annealed::annealed_step;

    #[test]
    fn zero_profile_costs_nothing() {
        let p = ShiftProfile::zero(7, 3).unwrap();
        assert_eq!(holder_cost_gaussian(&p, 0.6).unwrap(), 1.0);
        assert_eq!(holder_cost_tilt(&DisorderModel::BinaryPm1, &p, 0.6).unwrap(), 1.0);
        assert!(holder_cost_gaussian(&p, 1.0).is_err());
        assert!(holder_cost_gaussian(&p, 0.0).is_err());
    }

    #[test]
    fn marginal_cost_value() {
        for n in [1u32, 5, 50] {
            let p = ShiftProfile::marginal(n, 2, 0.4).unwrap();
            let c = holder_cost_gaussian(&p, 0.5).unwrap();
            assert!((c - 0.04f64.exp()).abs() < 1e-12);
            assert!((c - 1.040_810_8).abs() < 1e-7);
        }
    }

    #[test]
    fn binary_tilt_below_gaussian() {
        let p = ShiftProfile::marginal(10, 2, 0.4).unwrap();
        let g = holder_cost_gaussian(&p, 0.5).unwrap();
        let b = holder_cost_tilt(&DisorderModel::BinaryPm1, &p, 0.5).unwrap();
        assert!(b.is_finite() && b <= g * (1.0 + 1e-3));
    }

    #[test]
    fn zero_profile_recursion_is_pure() {
        let params = ModelParams::new(3, 1.8, 0.6, 0.02).unwrap();
        let p = ShiftProfile::zero(9, 3).unwrap();
        let mut lr = 0.0;
        for _ in 0..9 {
            lr = annealed_step(lr, &params);
        }
        for m in [ChangeOfMeasure::Shift, ChangeOfMeasure::Tilt] {
            let got = shifted_annealed_log(&params, &DisorderModel::Gaussian, &p, m).unwrap();
            assert!((got - lr).abs() < 1e-14);
        }
    }

    #[test]
    fn shift_requires_gaussian() {
        let params = ModelParams::new(2, 1.5, 0.6, 0.0).unwrap();
        let p = ShiftProfile::homogeneous(3, 2, 0.1).unwrap();
        assert!(shifted_annealed_log(&params, &DisorderModel::BinaryPm1, &p, ChangeOfMeasure::Shift).is_err());
        assert!(shifted_annealed_log(&params, &DisorderModel::BinaryPm1, &p, ChangeOfMeasure::Tilt).is_ok());
        let wrong_s = ShiftProfile::homogeneous(3, 3, 0.1).unwrap();
        assert!(shifted_annealed_log(&params, &DisorderModel::Gaussian, &wrong_s, ChangeOfMeasure::Tilt).is_err());
    }
}
