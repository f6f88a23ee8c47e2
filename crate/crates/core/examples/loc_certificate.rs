//! Localization certificates from the exact second moment, and the cut
//! choice that makes them work at moderate disorder.
//!
//! ```text
//! cargo run --release --example loc_certificate
//! ```

use hierpin::certificates::{loc_certify, CutPolicy, LocOptions};
use hierpin::{DisorderModel, ModelParams};

fn main() -> hierpin::Result<()> {
    let d = DisorderModel::Gaussian;
    let optimized = LocOptions { strict: true, ..Default::default() };
    let half = LocOptions { cut: CutPolicy::Fixed(0.5), ..Default::default() };
    println!("{:>5} {:>8} {:>22} {:>22}", "beta", "h", "optimized cut", "cut 1/2");
    for (beta, h) in [(0.05, 0.01), (0.1, 0.1), (0.3, 0.3), (0.5, 0.4), (1.0, 0.8)] {
        let p = ModelParams::marginal(4, beta, h)?;
        let show = |o: &LocOptions| -> hierpin::Result<String> {
            let c = loc_certify(&p, &d, o)?;
            Ok(if c.is_certified() {
                format!("n={} bound={:.4}", c.witness_n, c.elog_lower_bound)
            } else {
                format!("{:?}", c.verdict)
            })
        };
        println!("{beta:>5} {h:>8} {:>22} {:>22}", show(&optimized)?, show(&half)?);
    }
    let c = loc_certify(&ModelParams::marginal(4, 0.1, 0.1)?, &d, &optimized)?;
    println!("\nchain at beta=0.1 h=0.1:");
    println!("  n = {}, log r_n = {:.6}, v_n = {:.6}", c.witness_n, c.log_r_at_n, c.v_at_n);
    println!("  cut = {:.6}, P(R_n < cut r_n) <= {:.6}", c.cut, c.exceed_prob);
    println!("  E log R_n >= {:.6} > {:.6} (strict replay {})", c.elog_lower_bound, c.threshold, c.strict_checked);
    Ok(())
}
