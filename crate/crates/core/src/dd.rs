//! Double-double arithmetic (about 32 significant digits), used to replay
//! certificate inequality chains at twice the working precision.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

const LN2: Dd = Dd { hi: std::f64::consts::LN_2, lo: 2.319_046_813_846_299_6e-17 };

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    pub fn new(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Dd {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    fn ldexp(self, k: i32) -> Dd {
        let f = 2f64.powi(k);
        Dd { hi: self.hi * f, lo: self.lo * f }
    }

    pub fn powi(self, n: u32) -> Dd {
        let mut acc = Dd::ONE;
        let mut base = self;
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    pub fn exp(self) -> Dd {
        if self.hi > 709.0 {
            return Dd::new(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return Dd::ZERO;
        }
        let k = (self.hi / LN2.hi).round();
        let r = self - LN2 * Dd::new(k);
        // expm1(r / 2^10) by Taylor, then (1 + m)^2 - 1 = m (m + 2) ten times
        let r = r.ldexp(-10);
        let mut term = r;
        let mut m = r;
        for i in 2..=24 {
            term = term * r / Dd::new(i as f64);
            m = m + term;
            if term.hi.abs() < 1e-36 {
                break;
            }
        }
        for _ in 0..10 {
            m = m * (m + Dd::new(2.0));
        }
        (m + Dd::ONE).ldexp(k as i32)
    }

    /// `exp(x) - 1` without cancellation near zero.
    pub fn exp_m1(self) -> Dd {
        if self.hi.abs() > 0.25 {
            return self.exp() - Dd::ONE;
        }
        let mut term = self;
        let mut sum = self;
        for i in 2..=40 {
            term = term * self / Dd::new(i as f64);
            sum = sum + term;
            if term.hi.abs() < 1e-34 * sum.hi.abs() {
                break;
            }
        }
        sum
    }

    pub fn ln(self) -> Dd {
        if self.hi <= 0.0 {
            return Dd::new(f64::NAN);
        }
        let mut y = Dd::new(self.hi.ln());
        for _ in 0..2 {
            y = y + self * (-y).exp() - Dd::ONE;
        }
        y
    }

    pub fn ln_1p(self) -> Dd {
        (Dd::ONE + self).ln()
    }

    pub fn powf(self, y: Dd) -> Dd {
        (y * self.ln()).exp()
    }

    pub fn max(self, other: Dd) -> Dd {
        if self >= other {
            self
        } else {
            other
        }
    }
}

impl From<f64> for Dd {
    fn from(x: f64) -> Dd {
        Dd::new(x)
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, o: Dd) -> Dd {
        self + (-o)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self - o * Dd::new(q1);
        let q2 = r.hi / o.hi;
        let r = r - o * Dd::new(q2);
        let q3 = r.hi / o.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo } + Dd::new(q3)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_ln_round_trip() {
        for &x in &[-3.7, -0.4, 0.0, 1e-9, 0.5, 1.0, 2.3, 40.0] {
            let d = Dd::new(x);
            let back = d.exp().ln();
            assert!((back - d).abs().hi < 1e-30 * x.abs().max(1.0), "x = {x}");
        }
    }

    #[test]
    fn known_constants() {
        let e = Dd::ONE.exp();
        // e = 2.71828182845904523536028747135266...
        let lo = e - Dd::new(std::f64::consts::E);
        assert!((lo.to_f64() - 1.445_646_891_729_250_1e-16).abs() < 1e-30);
        let l2 = Dd::new(2.0).ln();
        assert!((l2 - LN2).abs().hi < 1e-31);
    }

    #[test]
    fn exp_m1_small() {
        let x = Dd::new(1e-20);
        let y = x.exp_m1();
        assert!((y.to_f64() - 1e-20).abs() < 1e-36);
        let z = Dd::new(0.3).exp_m1();
        assert!((z.to_f64() - 0.3f64.exp_m1()).abs() < 1e-16);
    }

    #[test]
    fn division_and_powers() {
        let third = Dd::ONE / Dd::new(3.0);
        let back = third * Dd::new(3.0) - Dd::ONE;
        assert!(back.abs().hi < 1e-31);
        let p = Dd::new(1.1).powi(7);
        assert!((p.to_f64() - 1.1f64.powi(7)).abs() < 1e-15);
        let q = Dd::new(2.0).powf(Dd::new(0.5));
        assert!((q.to_f64() - 2f64.sqrt()).abs() < 1e-16);
    }
}
