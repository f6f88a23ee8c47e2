//! Least-squares scaling fits on log axes.

use serde::{Deserialize, Serialize};

use crate::error::{argument, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// `y ~ prefactor * x^exponent`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub prefactor: f64,
    pub r_squared: f64,
}

/// Ordinary least squares of `ys` on `xs`.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> Result<LineFit> {
    if xs.len() != ys.len() {
        return argument(format!("length mismatch: {} x values, {} y values", xs.len(), ys.len()));
    }
    if xs.len() < 3 {
        return argument(format!("a fit needs at least 3 points, got {}", xs.len()));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return argument("all x values coincide");
    }
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(LineFit { slope, intercept: my - slope * mx, r_squared })
}

pub fn fit_power_law(xs: &[f64], ys: &[f64]) -> Result<PowerLawFit> {
    if let Some(v) = xs.iter().chain(ys).find(|v| !(**v > 0.0 && v.is_finite())) {
        return argument(format!("power-law fit needs positive finite data, got {v}"));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let f = fit_line(&lx, &ly)?;
    Ok(PowerLawFit { exponent: f.slope, prefactor: f.intercept.exp(), r_squared: f.r_squared })
}

/// Regresses `log(-log h)` on `log beta`: slope -2 for `exp(-c/beta^2)`,
/// slope -1 for `exp(-c/beta)`.
pub fn fit_double_log(betas: &[f64], hs: &[f64]) -> Result<LineFit> {
    if let Some(b) = betas.iter().find(|b| !(**b > 0.0 && b.is_finite())) {
        return argument(format!("betas must be positive, got {b}"));
    }
    if let Some(h) = hs.iter().find(|h| !(**h > 0.0 && **h < 1.0)) {
        return argument(format!("h values must lie in (0, 1), got {h}"));
    }
    let lx: Vec<f64> = betas.iter().map(|b| b.ln()).collect();
    let ly: Vec<f64> = hs.iter().map(|h| (-h.ln()).ln()).collect();
    fit_line(&lx, &ly)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law() {
        let xs = [1.0, 2.0, 5.0, 10.0];
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x * x).collect();
        let f = fit_power_law(&xs, &ys).unwrap();
        assert!((f.exponent - 2.0).abs() < 1e-12);
        assert!((f.prefactor - 3.0).abs() < 1e-12);
        assert!((f.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn double_log_shapes() {
        let betas = [0.4f64, 0.5, 0.6, 0.8, 1.0];
        let sq: Vec<f64> = betas.iter().map(|b| (-5.0 / (b * b)).exp()).collect();
        let f = fit_double_log(&betas, &sq).unwrap();
        assert!((f.slope + 2.0).abs() < 1e-12 && (f.r_squared - 1.0).abs() < 1e-12);
        let lin: Vec<f64> = betas.iter().map(|b| (-5.0 / b).exp()).collect();
        assert!((fit_double_log(&betas, &lin).unwrap().slope + 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(fit_power_law(&[1.0, 2.0, 3.0], &[1.0, 0.0, 2.0]).is_err());
        assert!(fit_power_law(&[1.0, 2.0], &[1.0, 2.0]).is_err());
        assert!(fit_double_log(&[0.1, 0.2, 0.3], &[0.5, 1.0, 0.1]).is_err());
        assert!(fit_double_log(&[0.1, 0.2, 0.3], &[0.5, 0.2]).is_err());
    }
}
