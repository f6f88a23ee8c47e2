//! Lattice geometry: site Green function, expected contacts and the
//! level sets `V_i` of wall positions.

use crate::error::{Error, Result};
use crate::params::ModelParams;

/// Probability that a site created at construction level `i` is visited.
pub fn green_site(i: u32, b: f64) -> f64 {
    b.powi(-(i as i32))
}

/// Expected number of wall contacts of the uniform directed path on `D_n`,
/// `sum_{i=1}^n b^{-i} (s-1) s^{i-1} = (s-1) ((s/b)^n - 1) / (s - b)`.
pub fn expected_contacts(n: u32, params: &ModelParams) -> f64 {
    let (s, b) = (params.s_f64(), params.b);
    if n == 0 {
        return 0.0;
    }
    if s == b {
        return n as f64 * (s - 1.0) / s;
    }
    (s - 1.0) * (n as f64 * (s / b).ln()).exp_m1() / (s - b)
}

/// `|V_i| = (s-1) s^{n-1-i}`.
pub fn vi_size(i: u32, n: u32, s: u32) -> Result<u64> {
    if i >= n {
        return Err(Error::Index { index: i as usize, len: n as usize });
    }
    (s as u64 - 1)
        .checked_mul((s as u64).checked_pow(n - 1 - i).ok_or(Error::Size {
            what: "|V_i|",
            size: u128::MAX,
            limit: u64::MAX as u128,
        })?)
        .ok_or(Error::Size { what: "|V_i|", size: u128::MAX, limit: u64::MAX as u128 })
}

/// `|V_i|` as a float, valid for any `n` (no integer overflow).
pub fn vi_size_f64(i: u32, n: u32, s: u32) -> f64 {
    (s as f64 - 1.0) * (s as f64).powi((n - 1 - i) as i32)
}

/// Level of wall position `j` in `1..s^n`: the exponent of the largest power
/// of `s` dividing `j`.
pub fn level_of_position(j: u64, s: u32) -> u32 {
    debug_assert!(j > 0);
    let s = s as u64;
    let (mut j, mut i) = (j, 0);
    while j % s == 0 {
        j /= s;
        i += 1;
    }
    i
}

/// Positions `j` of `V_i` (`s^i | j`, `s^{i+1} ∤ j`), in increasing order.
pub fn vi_members(i: u32, n: u32, s: u32) -> Result<Vec<u64>> {
    vi_size(i, n, s)?;
    let len = (s as u64).pow(n);
    let step = (s as u64).pow(i);
    Ok((1..len / step)
        .filter(|k| k % s as u64 != 0)
        .map(|k| k * step)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mp(s: u32, b: f64) -> ModelParams {
        ModelParams::new(s, b, 0.0, 0.0).unwrap()
    }

    #[test]
    fn contacts_examples() {
        let p = mp(2, 2f64.sqrt());
        assert!((expected_contacts(1, &p) - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-7);
        assert!((expected_contacts(2, &p) - 1.707_106_8).abs() < 1e-7);
        // brute force sum
        for (s, b) in [(3, 1.7), (4, 2.0), (5, 4.2)] {
            let p = mp(s, b);
            for n in 1..12 {
                let brute: f64 = (1..=n)
                    .map(|i| green_site(i, b) * (s as f64 - 1.0) * (s as f64).powi(i as i32 - 1))
                    .sum();
                assert!((expected_contacts(n, &p) - brute).abs() < 1e-10 * brute);
            }
        }
        let eq = mp(3, 3.0);
        assert!((expected_contacts(7, &eq) - 7.0 * 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn contacts_marginal_limit() {
        let s = 4u32;
        let p = mp(s, 2.0);
        let limit = (s as f64 - 1.0) / (s as f64 - 2.0);
        let ratio = expected_contacts(40, &p) / (s as f64).powf(20.0);
        assert!((ratio - limit).abs() < 1e-10);
    }

    #[test]
    fn vi_sizes() {
        let sizes: Vec<u64> = (0..3).map(|i| vi_size(i, 3, 2).unwrap()).collect();
        assert_eq!(sizes, vec![4, 2, 1]);
        assert_eq!(vi_size(0, 2, 3).unwrap(), 6);
        assert!(matches!(vi_size(3, 3, 2), Err(Error::Index { .. })));
        for s in 2..=5u32 {
            for n in 1..=8u32 {
                let total: u64 = (0..n).map(|i| vi_size(i, n, s).unwrap()).sum();
                assert_eq!(total, (s as u64).pow(n) - 1);
            }
        }
    }

    #[test]
    fn vi_members_partition_positions() {
        let (s, n) = (3u32, 4u32);
        let mut seen = vec![false; 3usize.pow(4)];
        for i in 0..n {
            let m = vi_members(i, n, s).unwrap();
            assert_eq!(m.len() as u64, vi_size(i, n, s).unwrap());
            for j in m {
                assert_eq!(level_of_position(j, s), i);
                assert!(!seen[j as usize]);
                seen[j as usize] = true;
            }
        }
        assert!(seen[1..].iter().all(|&x| x));
    }
}
