//! The recursion against brute-force enumeration of every directed path of
//! an explicitly built diamond lattice, for one frozen environment.
//!
//! ```text
//! cargo run --release --example path_enumeration
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use hierpin::oracle::{enumerate_paths_partition, quenched_log_partition};
use hierpin::{DisorderModel, ModelParams};

fn main() -> hierpin::Result<()> {
    let d = DisorderModel::Gaussian;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (s, b, n) in [(2u32, 2.0, 2u32), (2, 3.0, 2), (3, 2.0, 2)] {
        let p = ModelParams::new(s, b, 0.7, 0.1)?;
        let sites = (s as usize).pow(n) - 1;
        let omega: Vec<f64> = (0..sites).map(|_| StandardNormal.sample(&mut rng)).collect();
        let by_recursion = quenched_log_partition(&p, &d, n, &omega)?.exp();
        let by_paths = enumerate_paths_partition(&p, &d, n, &omega)?;
        println!(
            "s={s} b={b} n={n}: recursion {by_recursion:.15}  paths {by_paths:.15}  diff {:.1e}",
            (by_recursion - by_paths).abs()
        );
    }
    Ok(())
}
