//! Minimal double-double arithmetic for evaluating mass-shell samples.
//!
//! Only what the closed-form Fourier transform needs: +, −, ×, exp and
//! reduction modulo 2π. Values are unevaluated sums hi + lo with |lo| ≤ ulp(hi)/2.

use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

const LN2: Dd = Dd { hi: std::f64::consts::LN_2, lo: 2.319_046_813_846_299_6e-17 };
const TAU: Dd = Dd { hi: std::f64::consts::TAU, lo: 2.449_293_598_294_706_4e-16 };
const QUARTER_TAU: Dd = Dd { hi: std::f64::consts::FRAC_PI_2, lo: 6.123_233_995_736_766e-17 };

fn two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    let bb = s - a;
    Dd { hi: s, lo: (a - (s - bb)) + (b - bb) }
}

fn quick_two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    Dd { hi: s, lo: b - (s - a) }
}

fn two_prod(a: f64, b: f64) -> Dd {
    let p = a * b;
    Dd { hi: p, lo: a.mul_add(b, -p) }
}

impl Dd {
    pub fn from(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    fn scale(self, k: i32) -> Dd {
        let f = 2f64.powi(k);
        Dd { hi: self.hi * f, lo: self.lo * f }
    }

    fn div_f64(self, d: f64) -> Dd {
        let q1 = self.hi / d;
        let r = self - two_prod(q1, d);
        let q2 = r.hi / d;
        let r = r - two_prod(q2, d);
        let q3 = r.hi / d;
        quick_two_sum(q1, q2) + Dd::from(q3)
    }

    /// e^x.
    pub fn exp(x: f64) -> Dd {
        if x == 0.0 {
            return Dd::from(1.0);
        }
        let k = (x / LN2.hi).round();
        let r = Dd::from(x) - LN2 * Dd::from(k);
        // e^r = (e^{r/2^10})^{2^10}, tracked as expm1 to keep the low bits.
        let s = r.scale(-10);
        let mut term = s;
        let mut sum = s;
        for i in 2..=12 {
            term = (term * s).div_f64(i as f64);
            sum = sum + term;
        }
        for _ in 0..10 {
            sum = sum * Dd::from(2.0) + sum * sum;
        }
        (sum + Dd::from(1.0)).scale(k as i32)
    }

    /// 2πm/n for a power-of-two n.
    pub fn tau_fraction(m: usize, n: usize) -> Dd {
        debug_assert!(n.is_power_of_two());
        let q = 1.0 / n as f64;
        let t = TAU * Dd::from(m as f64);
        Dd { hi: t.hi * q, lo: t.lo * q }
    }

    /// x − 2πn with n the nearest integer to x/2π.
    pub fn reduce_tau(self) -> Dd {
        let n = (self.hi / TAU.hi).round();
        self - TAU * Dd::from(n)
    }

    /// (cos, sin) in double-double, by quadrant reduction and Taylor series
    /// on |r| ≤ π/4.
    pub fn cos_sin_dd(self) -> (Dd, Dd) {
        let x = self.reduce_tau();
        let q = (x.hi / QUARTER_TAU.hi).round();
        let r = x - QUARTER_TAU * Dd::from(q);
        let r2 = r * r;
        let (mut sin, mut cos) = (r, Dd::from(1.0));
        let (mut ts, mut tc) = (r, Dd::from(1.0));
        for i in 1..=14 {
            let i = i as f64;
            ts = -(ts * r2).div_f64((2.0 * i) * (2.0 * i + 1.0));
            tc = -(tc * r2).div_f64((2.0 * i - 1.0) * (2.0 * i));
            sin = sin + ts;
            cos = cos + tc;
        }
        match (q as i64).rem_euclid(4) {
            0 => (cos, sin),
            1 => (-sin, cos),
            2 => (-cos, -sin),
            _ => (sin, -cos),
        }
    }

    /// (cos, sin) rounded to f64.
    pub fn cos_sin(self) -> (f64, f64) {
        let (c, s) = self.cos_sin_dd();
        (c.hi + c.lo, s.hi + s.lo)
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, o: Dd) -> Dd {
        let s = two_sum(self.hi, o.hi);
        let t = two_sum(self.lo, o.lo);
        let u = quick_two_sum(s.hi, s.lo + t.hi);
        quick_two_sum(u.hi, u.lo + t.lo)
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
        let p = two_prod(self.hi, o.hi);
        quick_two_sum(p.hi, p.lo + (self.hi * o.lo + self.lo * o.hi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_matches_reference_digits() {
        // e and e^{2.75} split as hi + lo.
        let cases = [
            (1.0, 2.718_281_828_459_045, 1.445_646_891_729_250_2e-16),
            (2.75, 15.642_631_884_188_171, 3.117_795_082_419_565_7e-16),
        ];
        for (x, hi, lo) in cases {
            let e = Dd::exp(x);
            let err = ((e.hi - hi) + (e.lo - lo)).abs() / hi;
            assert!(err < 1e-30, "{x}: {e:?}");
        }
        let a = Dd::exp(-3.2);
        let b = Dd::exp(3.2);
        let one = a * b - Dd::from(1.0);
        assert!((one.hi + one.lo).abs() < 1e-30);
    }

    #[test]
    fn reduction_keeps_low_bits() {
        let x = Dd::from(40.123456789);
        let (c, s) = x.reduce_tau().cos_sin();
        assert!((s - 0.657_312_987_984_723_8).abs() < 2e-16);
        assert!((c + 0.753_617_698_721_702_2).abs() < 2e-16);
    }
}
