//! Log-domain helpers shared by the recursions.

/// `log(exp(a) + exp(b))` without overflow.
#[inline]
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Mean of a slice computed as `x[0] + mean(x - x[0])`.
///
/// A constant slice returns its common value bit-exactly.
pub fn shifted_mean(xs: &[f64]) -> f64 {
    let Some(&first) = xs.first() else {
        return f64::NAN;
    };
    let mut acc = 0.0;
    let mut comp = 0.0;
    for &x in xs {
        // Kahan summation of the offsets
        let y = (x - first) - comp;
        let t = acc + y;
        comp = (t - acc) - y;
        acc = t;
    }
    first + acc / xs.len() as f64
}

/// Sample mean and standard error of the mean.
pub fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let m = shifted_mean(xs);
    let n = xs.len();
    if n < 2 {
        return (m, 0.0);
    }
    let ss: f64 = xs.iter().map(|x| (x - m) * (x - m)).sum();
    let var = ss / (n - 1) as f64;
    (m, (var / n as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_add_exp_matches_direct() {
        let v = log_add_exp(1.0_f64.ln(), 2.0_f64.ln());
        assert!((v - 3.0_f64.ln()).abs() < 1e-15);
        assert_eq!(log_add_exp(f64::NEG_INFINITY, 0.5), 0.5);
        // no overflow at large arguments
        let big = log_add_exp(1.0e5, 1.0e5);
        assert!((big - (1.0e5 + 2.0_f64.ln())).abs() < 1e-9);
    }

    #[test]
    fn constant_slice_mean_is_exact() {
        let x = 0.123_456_789_012_345_6;
        let xs = vec![x; 1000];
        assert_eq!(shifted_mean(&xs), x);
        let (m, se) = mean_stderr(&xs);
        assert_eq!(m, x);
        assert_eq!(se, 0.0);
    }
}
