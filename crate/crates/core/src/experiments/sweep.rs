//! Running a [`SweepSpec`] over its grid.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::config::{SweepSpec, Task};
use crate::annealed::{annealed_free_energy, annealed_iterate, IterateOptions, TraceStatus};
use crate::certificates::{
    deloc_search_at, hc_bracket, lemma22_check, loc_certify, DelocCertificate, HcBracket,
    Lemma22Outcome, LocCertificate,
};
use crate::error::Result;
use crate::geometry::{expected_contacts, green_site};
use crate::pool::{
    estimate_free_energy, estimate_free_energy_lower, estimate_mean_log, Ensemble, EstimateCI,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Output of one grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "task", rename_all = "snake_case")]
pub enum PointOutput {
    Annealed {
        h: f64,
        status: TraceStatus,
        levels: usize,
        #[serde(with = "crate::serde_float")]
        log_r_final: f64,
        #[serde(with = "crate::serde_float")]
        free_energy: f64,
    },
    Variance {
        beta: f64,
        h: f64,
        levels: usize,
        #[serde(with = "crate::serde_float")]
        log_r_final: f64,
        #[serde(with = "crate::serde_float")]
        v_final: f64,
        variance_blowup: Option<usize>,
    },
    Mc {
        beta: f64,
        h: f64,
        mean_log: EstimateCI,
        free_energy: EstimateCI,
        free_energy_lower: EstimateCI,
        #[serde(with = "crate::serde_float")]
        annealed_log_r: f64,
        #[serde(with = "crate::serde_float")]
        pure_free_energy: f64,
    },
    CertifyDeloc {
        beta: f64,
        h: f64,
        certificate: DelocCertificate,
    },
    CertifyLoc {
        beta: f64,
        h: f64,
        certificate: LocCertificate,
    },
    Bracket(HcBracket),
    Green {
        level: u32,
        green_site: f64,
        expected_contacts: f64,
    },
    Lemma22(Lemma22Outcome),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub spec_hash: String,
    pub version: String,
    pub task: Task,
    pub wall_time_secs: f64,
    pub points: Vec<PointOutput>,
}

impl RunRecord {
    pub fn soundness_alarms(&self) -> Vec<String> {
        self.points
            .iter()
            .filter_map(|p| match p {
                PointOutput::Bracket(b) => Some(b.alarms.clone()),
                _ => None,
            })
            .flatten()
            .collect()
    }

    pub fn budget_exhausted(&self) -> bool {
        self.points.iter().any(|p| match p {
            PointOutput::Bracket(b) => b.ub_exhausted || b.ub_unconverged,
            _ => false,
        })
    }
}

pub fn spec_hash(spec: &SweepSpec) -> String {
    let canonical = serde_json::to_vec(spec).expect("specs always serialize");
    Sha256::digest(&canonical).iter().map(|b| format!("{b:02x}")).collect()
}

/// Seed of grid point `k`, decorrelated from neighbouring points.
pub fn point_seed(seed: u64, k: u64) -> u64 {
    let mut z = seed.wrapping_add(k.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn grid_points(spec: &SweepSpec) -> Vec<(f64, f64)> {
    let betas: &[f64] = if spec.beta_grid.is_empty() { &[0.0] } else { &spec.beta_grid };
    let hs: &[f64] = if spec.h_grid.is_empty() { &[0.0] } else { &spec.h_grid };
    match spec.task {
        Task::Annealed => hs.iter().map(|&h| (0.0, h)).collect(),
        Task::Bracket => betas.iter().map(|&b| (b, 0.0)).collect(),
        _ => betas.iter().flat_map(|&b| hs.iter().map(move |&h| (b, h))).collect(),
    }
}

fn run_point(spec: &SweepSpec, k: usize, beta: f64, h: f64) -> Result<Vec<PointOutput>> {
    let p = spec.model.at(beta, h);
    let d = &spec.disorder;
    let certs = &spec.certificates;
    Ok(match spec.task {
        Task::Annealed => {
            let trace = annealed_iterate(&p, &IterateOptions::new(spec.recursion.n_max))?;
            vec![PointOutput::Annealed {
                h,
                status: trace.status,
                levels: trace.len() - 1,
                log_r_final: trace.last_log_r(),
                free_energy: annealed_free_energy(&p, spec.recursion.rel_tol)?,
            }]
        }
        Task::Variance => {
            let opts = IterateOptions::new(spec.recursion.n_max).with_variance(d.clone());
            let trace = annealed_iterate(&p, &opts)?;
            vec![PointOutput::Variance {
                beta,
                h,
                levels: trace.len() - 1,
                log_r_final: trace.last_log_r(),
                v_final: trace.v.last().copied().unwrap_or(0.0),
                variance_blowup: trace.variance_blowup,
            }]
        }
        Task::Mc => {
            let mc = spec.mc;
            let seed = point_seed(spec.seed.unwrap_or_default(), k as u64);
            let ens = Ensemble::new(p, d.clone(), mc.pool_size, mc.replicas, seed)?.advance_to(mc.max_level)?;
            let mut log_r = 0.0;
            for _ in 0..mc.max_level {
                log_r = crate::annealed::annealed_step(log_r, &p);
            }
            vec![PointOutput::Mc {
                beta,
                h,
                mean_log: estimate_mean_log(&ens)?,
                free_energy: estimate_free_energy(&ens)?,
                free_energy_lower: estimate_free_energy_lower(&ens)?,
                annealed_log_r: log_r,
                pure_free_energy: annealed_free_energy(&p, spec.recursion.rel_tol)?,
            }]
        }
        Task::CertifyDeloc => vec![PointOutput::CertifyDeloc {
            beta,
            h,
            certificate: deloc_search_at(&p, d, &certs.deloc)?,
        }],
        Task::CertifyLoc => vec![PointOutput::CertifyLoc {
            beta,
            h,
            certificate: loc_certify(&p, d, &certs.loc)?,
        }],
        Task::Bracket => vec![PointOutput::Bracket(hc_bracket(
            &p,
            d,
            &certs.deloc,
            &certs.loc,
            &certs.bracket,
        )?)],
        Task::Green => {
            let n = spec.n.unwrap_or(0);
            (0..=n)
                .map(|i| PointOutput::Green {
                    level: i,
                    green_site: green_site(i, p.b),
                    expected_contacts: expected_contacts(i, &p),
                })
                .collect()
        }
        Task::Lemma22 => certs
            .lemma22
            .c5_grid
            .iter()
            .map(|&c5| lemma22_check(&p, d, c5, certs.lemma22.cap).map(PointOutput::Lemma22))
            .collect::<Result<_>>()?,
    })
}

/// Executes the task over the grid. Points run concurrently; the output
/// keeps grid order (beta outer, h inner).
pub fn run_sweep(spec: &SweepSpec) -> Result<RunRecord> {
    spec.validate()?;
    let start = Instant::now();
    let points = grid_points(spec);
    let per_point: Vec<Vec<PointOutput>> = if spec.task == Task::Green {
        vec![run_point(spec, 0, 0.0, 0.0)?]
    } else {
        points
            .par_iter()
            .enumerate()
            .map(|(k, &(beta, h))| run_point(spec, k, beta, h))
            .collect::<Result<_>>()?
    };
    Ok(RunRecord {
        spec_hash: spec_hash(spec),
        version: VERSION.to_string(),
        task: spec.task,
        wall_time_secs: start.elapsed().as_secs_f64(),
        points: per_point.into_iter().flatten().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_differ_per_point() {
        let a: Vec<u64> = (0..100).map(|k| point_seed(7, k)).collect();
        let mut b = a.clone();
        b.sort();
        b.dedup();
        assert_eq!(a.len(), b.len());
        assert_ne!(point_seed(7, 0), point_seed(8, 0));
    }

    #[test]
    fn annealed_sweep_in_grid_order() {
        let spec = SweepSpec::from_json(
            r#"{"model": {"s": 4, "b": 2}, "task": "annealed", "h_grid": [0.1, 0.0, -0.2]}"#,
        )
        .unwrap();
        let rec = run_sweep(&spec).unwrap();
        let hs: Vec<f64> = rec
            .points
            .iter()
            .map(|p| match p {
                PointOutput::Annealed { h, .. } => *h,
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(hs, vec![0.1, 0.0, -0.2]);
        assert_eq!(rec.spec_hash.len(), 64);
    }
}
