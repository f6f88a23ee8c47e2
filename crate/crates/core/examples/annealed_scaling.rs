//! Pure (annealed) free energy near the transition and its critical
//! exponent `1/alpha`, `alpha = (log s - log b) / log s`.
//!
//! ```text
//! cargo run --release --example annealed_scaling
//! ```

use hierpin::annealed::{annealed_fixed_point, annealed_free_energy, annealed_iterate, IterateOptions};
use hierpin::certificates::log_grid;
use hierpin::experiments::fit_power_law;
use hierpin::ModelParams;

fn main() -> hierpin::Result<()> {
    let hs = log_grid(1e-8, 1e-3, 11);
    for (label, b) in [("4, 2", 2.0), ("4, sqrt 2", 2f64.sqrt())] {
        let base = ModelParams::new(4, b, 0.0, 0.0)?;
        let fs = hs
            .iter()
            .map(|&h| annealed_free_energy(&base.with_h(h), 1e-13))
            .collect::<hierpin::Result<Vec<_>>>()?;
        let fit = fit_power_law(&hs, &fs)?;
        println!(
            "(s, b) = ({label}): F(0,h) ~ {:.4} h^{:.4}, r^2 = {:.6}, 1/alpha = {:.4}",
            fit.prefactor,
            fit.exponent,
            fit.r_squared,
            1.0 / base.alpha()
        );
    }

    let p = ModelParams::new(2, 1.5, 0.0, -0.5)?;
    let trace = annealed_iterate(&p, &IterateOptions::new(500))?;
    println!(
        "\n(s, b) = (2, 1.5), h = -0.5: {:?} after {} levels, r = {:.9}",
        trace.status,
        trace.len() - 1,
        annealed_fixed_point(&p, 10_000)?
    );
    let flat = annealed_iterate(&p.with_h(0.0), &IterateOptions::new(50))?;
    println!("h = 0: {:?}, log r_50 = {}", flat.status, flat.last_log_r());
    Ok(())
}
