//! Site Green function and expected number of wall contacts in the three
//! regimes `b < sqrt(s)`, `b = sqrt(s)`, `b > sqrt(s)`.
//!
//! ```text
//! cargo run --example green_function
//! ```

use hierpin::geometry::{expected_contacts, green_site, vi_size};
use hierpin::ModelParams;

fn main() -> hierpin::Result<()> {
    for b in [1.3, 2.0, 3.0] {
        let p = ModelParams::new(4, b, 0.0, 0.0)?;
        print!("b={b:<4} {:<11}", format!("{:?}", p.regime()));
        for n in [1, 5, 10, 20] {
            print!("  E[contacts, n={n}] = {:<10.4}", expected_contacts(n, &p));
        }
        println!();
    }
    let n = 4;
    println!("\nlevel sets of D_{n}, s = 4, b = 2:");
    for i in 0..n {
        // positions in V_i appear at construction step n - i
        println!("  |V_{i}| = {:>3}, visit probability {}", vi_size(i, n, 4)?, green_site(n - i, 2.0));
    }
    Ok(())
}
