//! Flat CSV tables, one row per grid point with a fixed column order per
//! task. Floats are written with 17 significant digits.

use std::io::Write;
use std::path::Path;

use super::config::Task;
use super::sweep::{PointOutput, RunRecord};
use crate::certificates::{DelocCertificate, DelocVerdict, LocVerdict, ProfileKind};
use crate::error::{Error, Result};

pub fn columns(task: Task) -> &'static [&'static str] {
    match task {
        Task::Annealed => &["h", "status", "levels", "log_r_final", "free_energy"],
        Task::Variance => &["beta", "h", "levels", "log_r_final", "v_final", "variance_blowup_level"],
        Task::Mc => &[
            "beta", "h", "level", "replicas", "mean_log", "mean_log_stderr", "annealed_log_r",
            "free_energy", "free_energy_stderr", "free_energy_lower", "free_energy_lower_stderr",
            "pure_free_energy",
        ],
        Task::CertifyDeloc => &[
            "beta", "h", "verdict", "reason", "theta", "family", "param", "n", "a_theta", "x_theta",
            "holder_cost", "shifted_r", "u_bound", "witness_n",
        ],
        Task::CertifyLoc => &[
            "beta", "h", "verdict", "reason", "witness_n", "log_r", "v", "cut", "exceed_prob",
            "elog_lower_bound", "threshold",
        ],
        Task::Bracket => &[
            "beta", "h_lb", "h_ub", "ub_status", "theta", "family", "param", "n", "a_theta",
            "x_theta", "holder_cost", "shifted_r", "u_bound", "loc_witness_n", "loc_cut",
            "loc_elog_lower_bound", "loc_threshold", "deloc_evaluations", "loc_evaluations",
            "alarms",
        ],
        Task::Green => &["level", "green_site", "expected_contacts"],
        Task::Lemma22 => &["beta", "c5", "h", "n1", "v_n1", "pass"],
    }
}

pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.16e}")
    }
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn optf(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

fn snake<T: serde::Serialize>(v: &T) -> String {
    match serde_json::to_value(v) {
        Ok(serde_json::Value::String(s)) => s,
        Ok(other) => other.to_string(),
        Err(_) => String::new(),
    }
}

fn deloc_cells(c: &DelocCertificate) -> Vec<String> {
    let (family, param) = match c.profile.as_ref().map(|p| p.kind) {
        None => ("plain".to_string(), String::new()),
        Some(k @ ProfileKind::Custom) => (k.family().to_string(), String::new()),
        Some(k) => (k.family().to_string(), fmt_f64(k.parameter())),
    };
    let n = c.profile.as_ref().map(|p| p.n as usize).or(c.witness_n);
    vec![
        fmt_f64(c.theta),
        family,
        param,
        opt(n),
        fmt_f64(c.a_theta),
        optf(c.x_theta),
        fmt_f64(c.holder_cost),
        optf(c.shifted_r_final),
        fmt_f64(c.u_bound),
    ]
}

fn deloc_verdict(v: &DelocVerdict) -> (String, String) {
    match v {
        DelocVerdict::CertifiedFZero => ("certified_f_zero".into(), String::new()),
        DelocVerdict::Inconclusive(r) => ("inconclusive".into(), snake(r)),
    }
}

fn loc_verdict(v: &LocVerdict) -> (String, String) {
    match v {
        LocVerdict::CertifiedFPositive => ("certified_f_positive".into(), String::new()),
        LocVerdict::Inconclusive(r) => ("inconclusive".into(), snake(r)),
    }
}

pub fn row(point: &PointOutput) -> Vec<String> {
    match point {
        PointOutput::Annealed { h, status, levels, log_r_final, free_energy } => vec![
            fmt_f64(*h),
            snake(status),
            levels.to_string(),
            fmt_f64(*log_r_final),
            fmt_f64(*free_energy),
        ],
        PointOutput::Variance { beta, h, levels, log_r_final, v_final, variance_blowup } => vec![
            fmt_f64(*beta),
            fmt_f64(*h),
            levels.to_string(),
            fmt_f64(*log_r_final),
            fmt_f64(*v_final),
            opt(*variance_blowup),
        ],
        PointOutput::Mc { beta, h, mean_log, free_energy, free_energy_lower, annealed_log_r, pure_free_energy } => vec![
            fmt_f64(*beta),
            fmt_f64(*h),
            mean_log.level.to_string(),
            mean_log.n_samples.to_string(),
            fmt_f64(mean_log.mean),
            fmt_f64(mean_log.stderr),
            fmt_f64(*annealed_log_r),
            fmt_f64(free_energy.mean),
            fmt_f64(free_energy.stderr),
            fmt_f64(free_energy_lower.mean),
            fmt_f64(free_energy_lower.stderr),
            fmt_f64(*pure_free_energy),
        ],
        PointOutput::CertifyDeloc { beta, h, certificate } => {
            let (v, r) = deloc_verdict(&certificate.verdict);
            let mut out = vec![fmt_f64(*beta), fmt_f64(*h), v, r];
            out.extend(deloc_cells(certificate));
            out.push(opt(certificate.witness_n));
            out
        }
        PointOutput::CertifyLoc { beta, h, certificate: c } => {
            let (v, r) = loc_verdict(&c.verdict);
            vec![
                fmt_f64(*beta),
                fmt_f64(*h),
                v,
                r,
                c.witness_n.to_string(),
                fmt_f64(c.log_r_at_n),
                fmt_f64(c.v_at_n),
                fmt_f64(c.cut),
                fmt_f64(c.exceed_prob),
                fmt_f64(c.elog_lower_bound),
                fmt_f64(c.threshold),
            ]
        }
        PointOutput::Bracket(b) => {
            let status = if b.ub_exhausted {
                "exhausted"
            } else if b.ub_unconverged {
                "unconverged"
            } else {
                "converged"
            };
            let mut out = vec![fmt_f64(b.beta), fmt_f64(b.h_lb), optf(b.h_ub), status.into()];
            match &b.lb_certificate {
                Some(c) => out.extend(deloc_cells(c)),
                None => out.extend(std::iter::repeat_n(String::new(), 9)),
            }
            match &b.ub_certificate {
                Some(c) => out.extend([
                    c.witness_n.to_string(),
                    fmt_f64(c.cut),
                    fmt_f64(c.elog_lower_bound),
                    fmt_f64(c.threshold),
                ]),
                None => out.extend(std::iter::repeat_n(String::new(), 4)),
            }
            out.push(b.deloc_evaluations.to_string());
            out.push(b.loc_evaluations.to_string());
            out.push(b.alarms.join("; "));
            out
        }
        PointOutput::Green { level, green_site, expected_contacts } => {
            vec![level.to_string(), fmt_f64(*green_site), fmt_f64(*expected_contacts)]
        }
        PointOutput::Lemma22(o) => vec![
            fmt_f64(o.beta),
            fmt_f64(o.c5),
            fmt_f64(o.h),
            opt(o.n1),
            optf(o.v_at_n1),
            o.pass.to_string(),
        ],
    }
}

pub fn write_csv<W: Write>(record: &RunRecord, out: W) -> std::result::Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(columns(record.task))?;
    for p in &record.points {
        w.write_record(row(p))?;
    }
    w.flush()?;
    Ok(())
}

pub fn emit_csv(record: &RunRecord, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_csv(record, std::io::BufWriter::new(file)).map_err(|e| Error::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_round_trips() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02e23] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
        }
        assert_eq!(fmt_f64(0.5), "5.0000000000000000e-1");
    }
}
