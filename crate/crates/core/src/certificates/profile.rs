use serde::{Deserialize, Serialize};

use crate::error::{argument, Result};
use crate::geometry::vi_size_f64;

/// How a shift profile was generated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ProfileKind {
    /// `delta_i = eta s^{(i-n)/2} / sqrt(n)`: more shift where the Green
    /// function is larger.
    Marginal { eta: f64 },
    /// `delta_i = delta` on every site.
    Homogeneous { delta: f64 },
    Custom,
}

impl ProfileKind {
    pub fn family(&self) -> &'static str {
        match self {
            ProfileKind::Marginal { .. } => "marginal",
            ProfileKind::Homogeneous { .. } => "homogeneous",
            ProfileKind::Custom => "custom",
        }
    }

    /// `eta` or `delta`; NaN for custom profiles.
    pub fn parameter(&self) -> f64 {
        match *self {
            ProfileKind::Marginal { eta } => eta,
            ProfileKind::Homogeneous { delta } => delta,
            ProfileKind::Custom => f64::NAN,
        }
    }
}

/// Downward shifts `delta_i >= 0` applied to every `omega_j`, `j in V_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShiftProfile {
    pub n: u32,
    pub s: u32,
    pub deltas: Vec<f64>,
    pub kind: ProfileKind,
}

impl ShiftProfile {
    pub fn marginal(n: u32, s: u32, eta: f64) -> Result<Self> {
        check_rank(n, s)?;
        if !(eta >= 0.0 && eta.is_finite()) {
            return argument(format!("eta must be >= 0, got {eta}"));
        }
        let sf = s as f64;
        let norm = (n as f64).sqrt();
        let deltas = (0..n)
            .map(|i| eta * sf.powf((i as f64 - n as f64) / 2.0) / norm)
            .collect();
        Ok(ShiftProfile { n, s, deltas, kind: ProfileKind::Marginal { eta } })
    }

    pub fn homogeneous(n: u32, s: u32, delta: f64) -> Result<Self> {
        check_rank(n, s)?;
        if !(delta >= 0.0 && delta.is_finite()) {
            return argument(format!("delta must be >= 0, got {delta}"));
        }
        Ok(ShiftProfile { n, s, deltas: vec![delta; n as usize], kind: ProfileKind::Homogeneous { delta } })
    }

    pub fn custom(s: u32, deltas: Vec<f64>) -> Result<Self> {
        let n = deltas.len() as u32;
        check_rank(n, s)?;
        if let Some(d) = deltas.iter().find(|d| !(**d >= 0.0 && d.is_finite())) {
            return argument(format!("shifts must be finite and >= 0, got {d}"));
        }
        Ok(ShiftProfile { n, s, deltas, kind: ProfileKind::Custom })
    }

    pub fn zero(n: u32, s: u32) -> Result<Self> {
        Self::custom(s, vec![0.0; n as usize])
    }

    pub fn from_kind(kind: ProfileKind, n: u32, s: u32) -> Result<Self> {
        match kind {
            ProfileKind::Marginal { eta } => Self::marginal(n, s, eta),
            ProfileKind::Homogeneous { delta } => Self::homogeneous(n, s, delta),
            ProfileKind::Custom => argument("custom profiles need explicit shifts"),
        }
    }

    /// `sum_i |V_i| delta_i^2`.
    pub fn weighted_square_sum(&self) -> f64 {
        self.deltas
            .iter()
            .enumerate()
            .map(|(i, d)| vi_size_f64(i as u32, self.n, self.s) * d * d)
            .sum()
    }
}

fn check_rank(n: u32, s: u32) -> Result<()> {
    if n == 0 {
        return argument("profile rank n must be >= 1");
    }
    if s < 2 {
        return argument("s must be >= 2");
    }
    Ok(())
}
