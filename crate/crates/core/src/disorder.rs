//! Disorder laws, described through their log moment generating function.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on the finite-difference normalization check for tables.
pub const TABLE_NORMALIZATION_TOL: f64 = 1e-2;

/// Law of a single site variable `omega` (mean zero, unit variance).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DisorderModel {
    /// Standard Gaussian, `log M(t) = t^2 / 2`.
    Gaussian,
    /// `omega = +1` or `-1` with probability 1/2, `log M(t) = log cosh t`.
    #[serde(alias = "binary")]
    BinaryPm1,
    /// User-supplied `log M` on a symmetric grid. Certificates only.
    Table(TableMgf),
}

/// Tabulated `log M` with piecewise-linear interpolation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTable", into = "RawTable")]
pub struct TableMgf {
    t: Vec<f64>,
    log_m: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawTable {
    t: Vec<f64>,
    log_mgf: Vec<f64>,
}

impl TryFrom<RawTable> for TableMgf {
    type Error = Error;
    fn try_from(raw: RawTable) -> Result<Self> {
        TableMgf::new(raw.t, raw.log_mgf)
    }
}

impl From<TableMgf> for RawTable {
    fn from(t: TableMgf) -> Self {
        RawTable { t: t.t, log_mgf: t.log_m }
    }
}

impl TableMgf {
    /// Validates symmetry of the grid, `log M(0) = 0`, convexity and the
    /// mean-zero / unit-variance normalization.
    pub fn new(t: Vec<f64>, log_m: Vec<f64>) -> Result<Self> {
        Self::with_tolerance(t, log_m, TABLE_NORMALIZATION_TOL)
    }

    pub fn with_tolerance(t: Vec<f64>, log_m: Vec<f64>, tol: f64) -> Result<Self> {
        let bad = |m: String| Err(Error::Table(m));
        if t.len() != log_m.len() {
            return bad(format!("{} grid points but {} values", t.len(), log_m.len()));
        }
        if t.len() < 3 || t.len().is_multiple_of(2) {
            return bad("grid needs an odd number (>= 3) of points centred on 0".into());
        }
        if t.iter().chain(&log_m).any(|v| !v.is_finite()) {
            return bad("non-finite entry".into());
        }
        if t.windows(2).any(|w| w[1] <= w[0]) {
            return bad("grid must be strictly increasing".into());
        }
        let n = t.len();
        for i in 0..n {
            if (t[i] + t[n - 1 - i]).abs() > 1e-12 * t[n - 1].abs().max(1.0) {
                return bad(format!("grid not symmetric at t = {}", t[i]));
            }
        }
        let mid = n / 2;
        if t[mid] != 0.0 && t[mid].abs() > 1e-15 {
            return bad("grid must contain t = 0".into());
        }
        if log_m[mid].abs() > 1e-12 {
            return bad(format!("log M(0) = {} != 0", log_m[mid]));
        }
        for i in 1..n - 1 {
            // slope increments must be nonnegative
            let left = (log_m[i] - log_m[i - 1]) / (t[i] - t[i - 1]);
            let right = (log_m[i + 1] - log_m[i]) / (t[i + 1] - t[i]);
            if right < left - 1e-12 * left.abs().max(1.0) {
                return bad(format!("log M not convex near t = {}", t[i]));
            }
        }
        let step = t[mid + 1];
        let d1 = (log_m[mid + 1] - log_m[mid - 1]) / (2.0 * step);
        let d2 = (log_m[mid + 1] - 2.0 * log_m[mid] + log_m[mid - 1]) / (step * step);
        if d1.abs() > tol {
            return bad(format!("mean {d1} differs from 0 by more than {tol}"));
        }
        if (d2 - 1.0).abs() > tol {
            return bad(format!("variance {d2} differs from 1 by more than {tol}"));
        }
        Ok(TableMgf { t, log_m })
    }

    /// Tabulates a closed-form `log M` on `[-t_max, t_max]`.
    pub fn from_fn(t_max: f64, points_per_side: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let k = points_per_side as i64;
        let t: Vec<f64> = (-k..=k).map(|i| t_max * i as f64 / k as f64).collect();
        let log_m = t.iter().map(|&x| f(x)).collect();
        Self::new(t, log_m)
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.t[0], *self.t.last().unwrap())
    }

    pub fn points(&self) -> (&[f64], &[f64]) {
        (&self.t, &self.log_m)
    }

    fn eval(&self, x: f64) -> f64 {
        let i = match self.t.binary_search_by(|p| p.total_cmp(&x)) {
            Ok(i) => return self.log_m[i],
            Err(i) => i,
        };
        let (t0, t1) = (self.t[i - 1], self.t[i]);
        let w = (x - t0) / (t1 - t0);
        self.log_m[i - 1] * (1.0 - w) + self.log_m[i] * w
    }
}

impl DisorderModel {
    pub fn name(&self) -> &'static str {
        match self {
            DisorderModel::Gaussian => "gaussian",
            DisorderModel::BinaryPm1 => "binary_pm1",
            DisorderModel::Table(_) => "table",
        }
    }

    /// Closed interval where `M(t) < infinity` (as represented).
    pub fn domain(&self) -> (f64, f64) {
        match self {
            DisorderModel::Gaussian | DisorderModel::BinaryPm1 => {
                (f64::NEG_INFINITY, f64::INFINITY)
            }
            DisorderModel::Table(tab) => tab.domain(),
        }
    }

    pub fn log_mgf(&self, t: f64) -> Result<f64> {
        let (lo, hi) = self.domain();
        if !(t >= lo && t <= hi) || t.is_nan() {
            return Err(Error::Domain { t, lo, hi });
        }
        Ok(match self {
            DisorderModel::Gaussian => 0.5 * t * t,
            DisorderModel::BinaryPm1 => log_cosh(t),
            DisorderModel::Table(tab) => tab.eval(t),
        })
    }

    /// `gamma(beta) = log M(2 beta) - 2 log M(beta)`, the exponent driving
    /// the growth of the relative variance.
    pub fn gamma(&self, beta: f64) -> Result<f64> {
        if beta == 0.0 {
            return Ok(0.0);
        }
        let g = self.log_mgf(2.0 * beta)? - 2.0 * self.log_mgf(beta)?;
        Ok(g.max(0.0))
    }

    pub fn can_sample(&self) -> bool {
        !matches!(self, DisorderModel::Table(_))
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<f64> {
        match self {
            DisorderModel::Gaussian => Ok(rng.sample(StandardNormal)),
            DisorderModel::BinaryPm1 => Ok(if rng.random::<bool>() { 1.0 } else { -1.0 }),
            DisorderModel::Table(_) => Err(Error::UnsupportedSampling("table")),
        }
    }

    /// Central finite-difference estimates of `(log M)'(0)` and `(log M)''(0)`.
    pub fn normalization_fd(&self, step: f64) -> Result<(f64, f64)> {
        let p = self.log_mgf(step)?;
        let m = self.log_mgf(-step)?;
        let z = self.log_mgf(0.0)?;
        Ok(((p - m) / (2.0 * step), (p - 2.0 * z + m) / (step * step)))
    }
}

/// `log cosh t`, stable for large `|t|`.
pub fn log_cosh(t: f64) -> f64 {
    let a = t.abs();
    a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_mgf_values() {
        let g = DisorderModel::Gaussian;
        assert_eq!(g.log_mgf(0.0).unwrap(), 0.0);
        assert!((g.log_mgf(0.6).unwrap() - 0.18).abs() < 1e-15);
        let b = DisorderModel::BinaryPm1;
        assert!((b.log_mgf(1.0).unwrap() - 0.433_780_8).abs() < 1e-7);
        assert!((b.log_mgf(1.0).unwrap() - 1.0_f64.cosh().ln()).abs() < 1e-15);
        // large argument stays finite
        assert!((b.log_mgf(800.0).unwrap() - (800.0 - 2.0_f64.ln())).abs() < 1e-9);
    }

    #[test]
    fn gamma_values() {
        let g = DisorderModel::Gaussian;
        assert!((g.gamma(0.3).unwrap() - 0.09).abs() < 1e-15);
        assert_eq!(g.gamma(0.0).unwrap(), 0.0);
        assert_eq!(DisorderModel::BinaryPm1.gamma(0.0).unwrap(), 0.0);
        let b = DisorderModel::BinaryPm1.gamma(0.5).unwrap();
        let direct = 1.0_f64.cosh().ln() - 2.0 * 0.5_f64.cosh().ln();
        assert!((b - direct).abs() < 1e-15);
        assert!((b - 0.193_551_82).abs() < 1e-8);
    }

    #[test]
    fn builtin_normalization() {
        for d in [DisorderModel::Gaussian, DisorderModel::BinaryPm1] {
            let (m, v) = d.normalization_fd(1e-4).unwrap();
            assert!(m.abs() < 1e-6, "{d:?} mean {m}");
            assert!((v - 1.0).abs() < 1e-6, "{d:?} var {v}");
        }
    }

    #[test]
    fn table_domain_and_validation() {
        let tab = TableMgf::from_fn(3.0, 300, log_cosh).unwrap();
        let d = DisorderModel::Table(tab);
        assert!(matches!(d.log_mgf(3.5), Err(Error::Domain { .. })));
        assert!((d.log_mgf(0.55).unwrap() - log_cosh(0.55)).abs() < 1e-4);
        assert!(!d.can_sample());
        let mut rng = rand::rng();
        assert_eq!(d.sample(&mut rng), Err(Error::UnsupportedSampling("table")));

        // wrong variance
        assert!(TableMgf::from_fn(2.0, 200, |t| t * t).is_err());
        // not convex
        assert!(TableMgf::from_fn(2.0, 200, |t| 0.5 * t * t - 0.2 * t.powi(4)).is_err());
        // not symmetric
        assert!(TableMgf::new(vec![-1.0, 0.0, 2.0], vec![0.5, 0.0, 2.0]).is_err());
    }

    #[test]
    fn serde_tags() {
        let s = serde_json::to_string(&DisorderModel::Gaussian).unwrap();
        assert_eq!(s, r#"{"kind":"gaussian"}"#);
        let d: DisorderModel = serde_json::from_str(r#"{"kind":"binary"}"#).unwrap();
        assert_eq!(d, DisorderModel::BinaryPm1);
        let t: std::result::Result<DisorderModel, _> =
            serde_json::from_str(r#"{"kind":"table","t":[-1,0,1],"log_mgf":[5,0,5]}"#);
        assert!(t.is_err());
    }
}
