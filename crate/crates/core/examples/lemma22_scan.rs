//! Scans `c5` so that with `h = exp(-c5 / beta)` the relative variance at
//! the first level where `r_n >= 2` stays below `beta`.
//!
//! ```text
//! cargo run --release --example lemma22_scan
//! ```

use hierpin::certificates::{lemma22_check, lemma22_scan};
use hierpin::{DisorderModel, ModelParams};

fn main() -> hierpin::Result<()> {
    let d = DisorderModel::Gaussian;
    let p = ModelParams::marginal(4, 0.1, 0.0)?;
    let betas = [0.05, 0.1, 0.2, 0.3];
    let c5s: Vec<f64> = (1..=60).map(|k| 0.005 * k as f64).collect();
    let best = lemma22_scan(&p, &d, &betas, &c5s, 1_000_000)?;
    println!("largest passing c5 on the grid: {best:?}");
    if let Some(c5) = best {
        for &beta in &betas {
            let o = lemma22_check(&p.with_beta(beta), &d, c5, 1_000_000)?;
            println!("  beta={beta:<5} h={:.3e} n1={:?} v={:.4e} pass={}", o.h, o.n1, o.v_at_n1.unwrap_or(f64::NAN), o.pass);
        }
    }
    Ok(())
}
