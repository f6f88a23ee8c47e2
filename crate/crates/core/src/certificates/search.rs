//! Search over `(theta, profile family, profile parameter, n)` for the
//! largest field `h` that the delocalization certificate accepts.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cost::ChangeOfMeasure;
use super::deloc::{deloc_certify_with, DelocCertificate, DelocOptions};
use super::profile::ShiftProfile;
use crate::disorder::DisorderModel;
use crate::error::{argument, Result};
use crate::fractional::{a_theta_h_max, x_theta};
use crate::params::ModelParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileFamily {
    /// No change of measure: the plain fractional-moment recursion.
    Plain,
    Marginal,
    Homogeneous,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DelocSearch {
    pub thetas: Vec<f64>,
    pub marginal_etas: Vec<f64>,
    pub homogeneous_deltas: Vec<f64>,
    pub levels: Vec<u32>,
    pub families: Vec<ProfileFamily>,
    /// Smallest field tried; a candidate that fails here is infeasible.
    pub h_floor: f64,
    pub bisection_steps: usize,
    /// Rounds of pattern search around the best grid point.
    pub refine_rounds: usize,
    pub measure: Option<ChangeOfMeasure>,
    pub safety_margin: f64,
    pub strict: bool,
}

pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
}

impl Default for DelocSearch {
    fn default() -> Self {
        DelocSearch {
            thetas: vec![
                0.5, 0.6, 0.7, 0.75, 0.8, 0.85, 0.88, 0.9, 0.92, 0.94, 0.95, 0.96, 0.97, 0.98,
                0.985, 0.99, 0.995,
            ],
            marginal_etas: log_grid(0.005, 2.0, 25),
            homogeneous_deltas: log_grid(1e-4, 1.0, 25),
            levels: (1..=60).collect(),
            families: vec![ProfileFamily::Plain, ProfileFamily::Marginal, ProfileFamily::Homogeneous],
            h_floor: 1e-300,
            bisection_steps: 60,
            refine_rounds: 24,
            measure: None,
            safety_margin: super::deloc::DEFAULT_SAFETY_MARGIN,
            strict: false,
        }
    }
}

impl DelocSearch {
    pub fn with_families(mut self, families: &[ProfileFamily]) -> Self {
        self.families = families.to_vec();
        self
    }

    fn options(&self, strict: bool) -> DelocOptions {
        DelocOptions {
            safety_margin: self.safety_margin,
            measure: self.measure,
            strict,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let mut bad = Vec::new();
        if self.thetas.is_empty() || self.thetas.iter().any(|t| !(*t > 0.0 && *t < 1.0)) {
            bad.push("thetas must be nonempty and inside (0, 1)");
        }
        if self.families.is_empty() {
            bad.push("families must be nonempty");
        }
        let shifted = self.families.iter().any(|f| *f != ProfileFamily::Plain);
        if shifted && (self.levels.is_empty() || self.levels.contains(&0)) {
            bad.push("levels must be nonempty and >= 1");
        }
        if self.families.contains(&ProfileFamily::Marginal)
            && (self.marginal_etas.is_empty() || self.marginal_etas.iter().any(|e| !(*e > 0.0)))
        {
            bad.push("marginal_etas must be nonempty and positive");
        }
        if self.families.contains(&ProfileFamily::Homogeneous)
            && (self.homogeneous_deltas.is_empty()
                || self.homogeneous_deltas.iter().any(|e| !(*e > 0.0)))
        {
            bad.push("homogeneous_deltas must be nonempty and positive");
        }
        if !(self.h_floor > 0.0) {
            bad.push("h_floor must be positive");
        }
        if bad.is_empty() {
            Ok(())
        } else {
            argument(bad.join("; "))
        }
    }
}

/// One point of the search space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub family: ProfileFamily,
    pub theta: f64,
    /// `eta` or `delta`; zero for the plain family.
    pub param: f64,
    pub n: u32,
}

impl Candidate {
    fn profile(&self, s: u32) -> Result<Option<ShiftProfile>> {
        Ok(match self.family {
            ProfileFamily::Plain => None,
            ProfileFamily::Marginal => Some(ShiftProfile::marginal(self.n, s, self.param)?),
            ProfileFamily::Homogeneous => Some(ShiftProfile::homogeneous(self.n, s, self.param)?),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DelocOptimum {
    /// Largest certified field; 0 when nothing positive is certifiable.
    pub h_lb: f64,
    pub candidate: Option<Candidate>,
    pub certificate: Option<DelocCertificate>,
    pub evaluations: usize,
    pub candidates_tried: usize,
    pub feasible: bool,
}

struct Scored {
    cand: Candidate,
    h: f64,
    evals: usize,
}

/// Ordering: larger `h` first, then larger `theta`, smaller parameter,
/// smaller `n`.
fn better(a: &Scored, b: &Scored) -> Ordering {
    b.h.total_cmp(&a.h)
        .then(b.cand.theta.total_cmp(&a.cand.theta))
        .then(a.cand.param.total_cmp(&b.cand.param))
        .then(a.cand.n.cmp(&b.cand.n))
}

struct Evaluator<'a> {
    params: ModelParams,
    d: &'a DisorderModel,
    search: &'a DelocSearch,
    opts: DelocOptions,
}

impl Evaluator<'_> {
    fn certified(&self, c: &Candidate, xt: Option<f64>, prof: Option<&ShiftProfile>, h: f64) -> bool {
        deloc_certify_with(&self.params.with_h(h), self.d, c.theta, xt, prof, &self.opts)
            .map(|cert| cert.is_certified())
            .unwrap_or(false)
    }

    /// Largest certifiable `h` for one candidate (0 if none).
    fn best_h(&self, c: Candidate) -> Scored {
        let mut evals = 0;
        let score = |h: f64| Scored { cand: c, h, evals: 0 };
        let Ok(xt @ Some(_)) = x_theta(self.params.s, self.params.b, c.theta) else {
            return score(0.0);
        };
        let Ok(h_max) = a_theta_h_max(self.d, self.params.beta, c.theta) else {
            return score(0.0);
        };
        if !(h_max > self.search.h_floor) {
            return score(0.0);
        }
        let Ok(prof) = c.profile(self.params.s) else { return score(0.0) };
        let prof = prof.as_ref();
        evals += 1;
        if !self.certified(&c, xt, prof, self.search.h_floor) {
            return Scored { cand: c, h: 0.0, evals };
        }
        evals += 1;
        if self.certified(&c, xt, prof, h_max) {
            return Scored { cand: c, h: h_max, evals };
        }
        let (mut lo, mut hi) = (self.search.h_floor.ln(), h_max.ln());
        let mut best = self.search.h_floor;
        for _ in 0..self.search.bisection_steps {
            let mid = 0.5 * (lo + hi);
            let h = mid.exp();
            evals += 1;
            if self.certified(&c, xt, prof, h) {
                lo = mid;
                best = best.max(h);
            } else {
                hi = mid;
            }
        }
        Scored { cand: c, h: best, evals }
    }
}

fn grid(search: &DelocSearch) -> Vec<Candidate> {
    let mut out = Vec::new();
    for &family in &search.families {
        for &theta in &search.thetas {
            match family {
                ProfileFamily::Plain => out.push(Candidate { family, theta, param: 0.0, n: 0 }),
                ProfileFamily::Marginal | ProfileFamily::Homogeneous => {
                    let params = if family == ProfileFamily::Marginal {
                        &search.marginal_etas
                    } else {
                        &search.homogeneous_deltas
                    };
                    for &param in params {
                        for &n in &search.levels {
                            out.push(Candidate { family, theta, param, n });
                        }
                    }
                }
            }
        }
    }
    out
}

fn pick(scored: Vec<Scored>) -> Option<Scored> {
    scored.into_iter().min_by(better)
}

/// Maximize the certified field at fixed `beta` over the search space.
pub fn deloc_optimize(params: &ModelParams, d: &DisorderModel, search: &DelocSearch) -> Result<DelocOptimum> {
    params.validate()?;
    search.validate()?;
    let ev = Evaluator { params: *params, d, search, opts: search.options(false) };
    let cands = grid(search);
    let scored: Vec<Scored> = cands.par_iter().map(|c| ev.best_h(*c)).collect();
    let mut evaluations: usize = scored.iter().map(|s| s.evals).sum();
    let mut tried = cands.len();
    let mut best = pick(scored).filter(|s| s.h > 0.0);

    if let Some(start) = best.as_ref().map(|b| b.cand) {
        if start.family != ProfileFamily::Plain && search.refine_rounds > 0 {
            let (refined, evals, count) = refine(&ev, start, search);
            evaluations += evals;
            tried += count;
            if let Some(r) = refined {
                if best.as_ref().is_none_or(|b| better(&r, b) == Ordering::Less) {
                    best = Some(r);
                }
            }
        }
    }

    let Some(best) = best else {
        return Ok(DelocOptimum {
            h_lb: 0.0,
            candidate: None,
            certificate: None,
            evaluations,
            candidates_tried: tried,
            feasible: false,
        });
    };
    let c = best.cand;
    let xt = x_theta(params.s, params.b, c.theta)?;
    let prof = c.profile(params.s)?;
    let cert = deloc_certify_with(
        &params.with_h(best.h),
        d,
        c.theta,
        xt,
        prof.as_ref(),
        &search.options(search.strict),
    )?;
    evaluations += 1;
    let ok = cert.is_certified();
    Ok(DelocOptimum {
        h_lb: if ok { best.h } else { 0.0 },
        candidate: Some(c),
        certificate: Some(cert),
        evaluations,
        candidates_tried: tried,
        feasible: ok,
    })
}

/// Pattern search in `(theta, log param)` with `n` moved by one level.
fn refine(ev: &Evaluator, start: Candidate, search: &DelocSearch) -> (Option<Scored>, usize, usize) {
    let spacing = |xs: &[f64], x: f64, log: bool| -> f64 {
        let f = |v: f64| if log { v.ln() } else { v };
        xs.windows(2)
            .map(|w| (f(w[1]) - f(w[0])).abs())
            .filter(|d| *d > 0.0)
            .fold(f64::INFINITY, f64::min)
            .min(if log { 0.5 } else { 0.5 * (1.0 - x) })
    };
    let params_grid = match start.family {
        ProfileFamily::Marginal => &search.marginal_etas,
        _ => &search.homogeneous_deltas,
    };
    let mut d_theta = 0.5 * spacing(&search.thetas, start.theta, false).min(0.05);
    let mut d_param = 0.5 * spacing(params_grid, start.param, true).min(0.5);
    if !d_theta.is_finite() {
        d_theta = 0.01;
    }
    if !d_param.is_finite() {
        d_param = 0.1;
    }
    let mut current = ev.best_h(start);
    let mut evals = current.evals;
    let mut count = 1;
    for _ in 0..search.refine_rounds {
        let c = current.cand;
        let mut moves = vec![
            Candidate { theta: c.theta + d_theta, ..c },
            Candidate { theta: c.theta - d_theta, ..c },
            Candidate { param: c.param * d_param.exp(), ..c },
            Candidate { param: c.param * (-d_param).exp(), ..c },
            Candidate { n: c.n + 1, ..c },
        ];
        if c.n > 1 {
            moves.push(Candidate { n: c.n - 1, ..c });
        }
        moves.retain(|m| m.theta > 0.0 && m.theta < 1.0);
        count += moves.len();
        let scored: Vec<Scored> = moves.par_iter().map(|m| ev.best_h(*m)).collect();
        evals += scored.iter().map(|s| s.evals).sum::<usize>();
        match pick(scored) {
            Some(s) if s.h > current.h => current = s,
            _ => {
                d_theta *= 0.5;
                d_param *= 0.5;
            }
        }
    }
    ((current.h > 0.0).then_some(current), evals, count)
}

/// Best certificate at the field already set in `params`, or the first
/// failure encountered in grid order when nothing certifies.
pub fn deloc_search_at(
    params: &ModelParams,
    d: &DisorderModel,
    search: &DelocSearch,
) -> Result<DelocCertificate> {
    params.validate()?;
    search.validate()?;
    let opts = search.options(false);
    let cands = grid(search);
    let results: Vec<(Candidate, DelocCertificate)> = cands
        .par_iter()
        .filter_map(|c| {
            let prof = c.profile(params.s).ok()?;
            let xt = x_theta(params.s, params.b, c.theta).ok()?;
            let cert = deloc_certify_with(params, d, c.theta, xt, prof.as_ref(), &opts).ok()?;
            Some((*c, cert))
        })
        .collect();
    let margin = |c: &DelocCertificate| c.x_theta.map_or(f64::NEG_INFINITY, |x| x - c.u_bound);
    let best = results
        .iter()
        .filter(|(_, c)| c.is_certified())
        .max_by(|a, b| margin(&a.1).total_cmp(&margin(&b.1)))
        .or_else(|| results.first());
    let Some((cand, _)) = best else {
        return argument("search space produced no evaluable candidate");
    };
    let prof = cand.profile(params.s)?;
    let xt = x_theta(params.s, params.b, cand.theta)?;
    deloc_certify_with(params, d, cand.theta, xt, prof.as_ref(), &search.options(search.strict))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_search() -> DelocSearch {
        DelocSearch {
            thetas: vec![0.9, 0.95, 0.97],
            marginal_etas: log_grid(0.05, 0.5, 6),
            homogeneous_deltas: log_grid(0.01, 0.5, 4),
            levels: (1..=16).collect(),
            refine_rounds: 4,
            ..Default::default()
        }
    }

    #[test]
    fn pure_model_has_no_lower_bound() {
        let p = ModelParams::new(4, 2.0, 0.0, 0.0).unwrap();
        let o = deloc_optimize(&p, &DisorderModel::Gaussian, &small_search()).unwrap();
        assert_eq!(o.h_lb, 0.0);
        assert!(!o.feasible);
    }

    #[test]
    fn strong_disorder_gives_positive_bound() {
        let p = ModelParams::new(4, 2.0, 1.0, 0.0).unwrap();
        let o = deloc_optimize(&p, &DisorderModel::Gaussian, &small_search()).unwrap();
        assert!(o.feasible && o.h_lb > 0.0, "{o:?}");
        let cert = o.certificate.unwrap();
        assert!(cert.is_certified());
        assert_eq!(cert.params.h, o.h_lb);
    }

    #[test]
    fn deterministic() {
        let p = ModelParams::new(4, 2.0, 0.8, 0.0).unwrap();
        let s = small_search();
        let a = deloc_optimize(&p, &DisorderModel::Gaussian, &s).unwrap();
        let b = deloc_optimize(&p, &DisorderModel::Gaussian, &s).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn search_at_fixed_field() {
        let p = ModelParams::new(4, 2.0, 1.0, 1e-6).unwrap();
        let c = deloc_search_at(&p, &DisorderModel::Gaussian, &small_search()).unwrap();
        assert!(c.is_certified());
    }

    #[test]
    fn log_grid_endpoints() {
        let g = log_grid(1e-3, 1.0, 4);
        assert!((g[0] - 1e-3).abs() < 1e-18 && (g[3] - 1.0).abs() < 1e-15);
        assert!((g[1] - 1e-2).abs() < 1e-15);
    }
}
