//! Population dynamics for the quenched recursion in the irrelevant-disorder
//! regime (s = 4, b = 3): the quenched free energy stays close to the pure
//! one, and `E log R_n` stays below `log r_n`.
//!
//! ```text
//! cargo run --release --example pool_dynamics -- [pool_size] [replicas] [level]
//! ```

use hierpin::annealed::{annealed_free_energy, annealed_step};
use hierpin::pool::{estimate_free_energy, estimate_free_energy_lower, estimate_mean_log, Ensemble};
use hierpin::{DisorderModel, ModelParams};

fn main() -> hierpin::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let pool_size = args.first().copied().unwrap_or(20_000);
    let replicas = args.get(1).copied().unwrap_or(8);
    let level = args.get(2).copied().unwrap_or(14) as u32;
    println!("pool {pool_size} x {replicas} replicas, level {level}");
    println!(
        "{:>6} {:>12} {:>12} {:>12} {:>12} {:>10}",
        "h", "F(0,h)", "F_mc", "stderr", "F_lower", "E logR-log r"
    );
    for h in [0.05, 0.1, 0.2] {
        let p = ModelParams::new(4, 3.0, 0.2, h)?;
        let ens = Ensemble::new(p, DisorderModel::Gaussian, pool_size, replicas, 2024)?.advance_to(level)?;
        let f = estimate_free_energy(&ens)?;
        let lower = estimate_free_energy_lower(&ens)?;
        let elog = estimate_mean_log(&ens)?;
        let log_r = (0..level).fold(0.0, |lr, _| annealed_step(lr, &p));
        println!(
            "{h:>6.2} {:>12.5e} {:>12.5e} {:>12.3e} {:>12.5e} {:>10.3e}",
            annealed_free_energy(&p, 1e-12)?,
            f.mean,
            f.stderr,
            lower.mean,
            elog.mean - log_r
        );
    }
    Ok(())
}
