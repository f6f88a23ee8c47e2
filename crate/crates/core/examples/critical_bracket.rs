//! Brackets the quenched critical field at marginality (s = 4, b = 2) for a
//! few disorder strengths and fits the shape of both sides.
//!
//! ```text
//! cargo run --release --example critical_bracket
//! ```

use hierpin::certificates::{hc_bracket, BracketOptions, DelocSearch, LocOptions, ProfileFamily};
use hierpin::experiments::fit_double_log;
use hierpin::{DisorderModel, ModelParams};

fn main() -> hierpin::Result<()> {
    let betas = [0.4, 0.5, 0.6, 0.8, 1.0];
    let search = DelocSearch::default().with_families(&[ProfileFamily::Marginal]);
    let (mut lbs, mut ubs) = (Vec::new(), Vec::new());
    println!("{:>6} {:>12} {:>12} {:>6} {:>8} {:>4}", "beta", "h_lb", "h_ub", "theta", "eta", "n");
    for &beta in &betas {
        let p = ModelParams::marginal(4, beta, 0.0)?;
        let br = hc_bracket(&p, &DisorderModel::Gaussian, &search, &LocOptions::default(), &BracketOptions::default())?;
        let (theta, eta, n) = br
            .lb_certificate
            .as_ref()
            .and_then(|c| c.profile.as_ref().map(|pr| (c.theta, pr.kind.parameter(), pr.n)))
            .unwrap_or((f64::NAN, f64::NAN, 0));
        println!(
            "{beta:>6.2} {:>12.4e} {:>12.4e} {theta:>6.3} {eta:>8.4} {n:>4}",
            br.h_lb,
            br.h_ub.unwrap_or(f64::NAN)
        );
        for a in &br.alarms {
            println!("  alarm: {a}");
        }
        lbs.push(br.h_lb);
        ubs.push(br.h_ub.unwrap_or(f64::NAN));
    }
    if lbs.iter().all(|h| *h > 0.0) {
        let f = fit_double_log(&betas, &lbs)?;
        println!("h_lb: log(-log h) ~ {:.3} log beta (r^2 = {:.4})", f.slope, f.r_squared);
    }
    if ubs.iter().all(|h| *h > 0.0 && *h < 1.0) {
        let f = fit_double_log(&betas, &ubs)?;
        println!("h_ub: log(-log h) ~ {:.3} log beta (r^2 = {:.4})", f.slope, f.r_squared);
    }
    Ok(())
}
