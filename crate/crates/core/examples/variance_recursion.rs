//! Exact relative variance `v_n = Var(R_n) / (E R_n)^2` against the sample
//! variance of exact tree draws.
//!
//! ```text
//! cargo run --release --example variance_recursion
//! ```

use hierpin::annealed::moment_trace;
use hierpin::oracle::exact_tree_sample;
use hierpin::rng::{Lineage, StreamFamily};
use hierpin::{DisorderModel, ModelParams};

fn main() -> hierpin::Result<()> {
    let d = DisorderModel::Gaussian;
    let p = ModelParams::marginal(2, 0.3, 0.0)?;
    let draws = 20_000u64;
    let lineage = Lineage::new(11, 0);
    println!("s=2 b=sqrt2 beta=0.3 h=0, {draws} exact draws per level");
    println!("{:>3} {:>12} {:>12} {:>10}", "n", "v_n", "sample", "z");
    for (n, &(log_r, v)) in moment_trace(&p, &d, 6)?.iter().enumerate().skip(1) {
        let xs: Vec<f64> = (0..draws)
            .map(|k| {
                let mut rng = lineage.stream(StreamFamily::ExactTree, n as u64, k);
                exact_tree_sample(&p, &d, n as u32, &mut rng).map(f64::exp)
            })
            .collect::<hierpin::Result<_>>()?;
        let m = draws as f64;
        let r = log_r.exp();
        // unbiased estimate of E[(R - r)^2] / r^2 with the known mean
        let sq: Vec<f64> = xs.iter().map(|x| ((x - r) / r).powi(2)).collect();
        let mean = sq.iter().sum::<f64>() / m;
        let sd = (sq.iter().map(|q| (q - mean).powi(2)).sum::<f64>() / (m - 1.0)).sqrt();
        println!("{n:>3} {v:>12.6e} {mean:>12.6e} {:>10.3}", (mean - v) / (sd / m.sqrt()));
    }
    Ok(())
}
