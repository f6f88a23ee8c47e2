use serde::{Deserialize, Serialize};

use crate::error::{argument, Result};

/// Relative tolerance used to label `b = sqrt(s)` as marginal.
pub const MARGINAL_TOL: f64 = 1e-12;

/// Lattice and disorder parameters shared by every computation.
///
/// `s` is the number of edges per branch, `b` the (real) branching number,
/// `beta` the disorder strength and `h` the pinning reward per contact.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub s: u32,
    pub b: f64,
    pub beta: f64,
    pub h: f64,
}

/// Disorder-relevance classification of a lattice `(b, s)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    Relevant,
    Marginal,
    Irrelevant,
    AlphaZero,
}

impl ModelParams {
    pub fn new(s: u32, b: f64, beta: f64, h: f64) -> Result<Self> {
        let p = ModelParams { s, b, beta, h };
        p.validate()?;
        Ok(p)
    }

    /// Marginal lattice `b = sqrt(s)`.
    pub fn marginal(s: u32, beta: f64, h: f64) -> Result<Self> {
        Self::new(s, (s as f64).sqrt(), beta, h)
    }

    pub fn validate(&self) -> Result<()> {
        if self.s < 2 {
            return argument(format!("s must be an integer >= 2, got {}", self.s));
        }
        if !(self.b.is_finite() && self.b > 1.0) {
            return argument(format!("b must be a real > 1, got {}", self.b));
        }
        if !(self.beta.is_finite() && self.beta >= 0.0) {
            return argument(format!("beta must be >= 0, got {}", self.beta));
        }
        if !self.h.is_finite() {
            return argument(format!("h must be finite, got {}", self.h));
        }
        Ok(())
    }

    pub fn with_h(&self, h: f64) -> Self {
        ModelParams { h, ..*self }
    }

    pub fn with_beta(&self, beta: f64) -> Self {
        ModelParams { beta, ..*self }
    }

    pub fn s_f64(&self) -> f64 {
        self.s as f64
    }

    /// Exponent `alpha = (log s - log b) / log s` of the pure transition.
    pub fn alpha(&self) -> f64 {
        let ls = self.s_f64().ln();
        (ls - self.b.ln()) / ls
    }

    pub fn regime(&self) -> Regime {
        regime(self.b, self.s)
    }

    pub fn is_marginal(&self) -> bool {
        self.regime() == Regime::Marginal
    }
}

/// Classifies `(b, s)`; labels only, the numerics never branch on it.
pub fn regime(b: f64, s: u32) -> Regime {
    let s = s as f64;
    let root = s.sqrt();
    if (b - root).abs() <= MARGINAL_TOL * root {
        Regime::Marginal
    } else if b < root {
        Regime::Relevant
    } else if b < s {
        Regime::Irrelevant
    } else {
        Regime::AlphaZero
    }
}
