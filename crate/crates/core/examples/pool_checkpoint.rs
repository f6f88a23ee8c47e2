//! Checkpoints a pool mid-run and resumes it: the resumed trajectory is
//! bit-identical to the uninterrupted one.
//!
//! ```text
//! cargo run --release --example pool_checkpoint
//! ```

use hierpin::experiments::{checkpoint_pool, restore_pool};
use hierpin::pool::Pool;
use hierpin::rng::Lineage;
use hierpin::{DisorderModel, ModelParams};

fn main() -> hierpin::Result<()> {
    let p = ModelParams::marginal(4, 0.5, 0.01)?;
    let start = Pool::new(p, DisorderModel::Gaussian, 50_000, Lineage::new(99, 0))?;
    let halfway = start.clone().advance_to(4)?;
    let path = std::env::temp_dir().join("hierpin_pool.ckpt");
    checkpoint_pool(&halfway, &path)?;
    let resumed = restore_pool(&path)?.advance_to(8)?;
    let straight = start.advance_to(8)?;
    let same = resumed
        .log_samples
        .iter()
        .zip(&straight.log_samples)
        .all(|(a, b)| a.to_bits() == b.to_bits());
    println!(
        "checkpoint {} ({} bytes); level-8 mean log R = {:.6}; identical: {same}",
        path.display(),
        std::fs::metadata(&path).map(|m| m.len()).unwrap_or(0),
        resumed.mean_log()
    );
    std::fs::remove_file(&path).ok();
    Ok(())
}
