//! Certified numerical enclosures for cyclotomic numbers.
//!
//! A [`Ball`] is a fixed-point midpoint with an integer radius, both in units of
//! `2^-prec`. Every rounding step widens the radius, so the true value always lies
//! inside `[mid - rad, mid + rad] * 2^-prec`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

/// Extra fractional bits carried while evaluating series.
const GUARD_BITS: u32 = 32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ball {
    mid: BigInt,
    rad: BigInt,
    prec: u32,
}

impl Ball {
    pub fn exact_zero(prec: u32) -> Ball {
        Ball {
            mid: BigInt::zero(),
            rad: BigInt::zero(),
            prec,
        }
    }

    pub(crate) fn new(mid: BigInt, rad: BigInt, prec: u32) -> Ball {
        debug_assert!(!rad.is_negative());
        Ball { mid, rad, prec }
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn mid(&self) -> f64 {
        scaled_to_f64(&self.mid, self.prec)
    }

    pub fn radius(&self) -> f64 {
        scaled_to_f64(&self.rad, self.prec)
    }

    pub fn lower(&self) -> f64 {
        scaled_to_f64(&(&self.mid - &self.rad), self.prec)
    }

    pub fn upper(&self) -> f64 {
        scaled_to_f64(&(&self.mid + &self.rad), self.prec)
    }

    pub fn contains_zero(&self) -> bool {
        self.mid.abs() <= self.rad
    }

    /// Sign of every point of the ball, or `None` when the ball straddles zero.
    pub fn sign(&self) -> Option<i8> {
        if self.mid.is_zero() && self.rad.is_zero() {
            Some(0)
        } else if &self.mid - &self.rad > BigInt::zero() {
            Some(1)
        } else if &self.mid + &self.rad < BigInt::zero() {
            Some(-1)
        } else {
            None
        }
    }

    /// Does the ball contain `x` (checked against the f64 rendering of the bounds)?
    pub fn contains_f64(&self, x: f64) -> bool {
        self.lower() <= x && x <= self.upper()
    }

    /// Drop `bits` fractional bits, widening the radius to cover the truncation.
    fn round_down(self, bits: u32) -> Ball {
        if bits == 0 {
            return self;
        }
        let mid = self.mid >> bits;
        let rad = (self.rad >> bits) + 2;
        Ball {
            mid,
            rad,
            prec: self.prec - bits,
        }
    }
}

/// A rectangle `re x im` of two real balls.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexBall {
    pub re: Ball,
    pub im: Ball,
}

impl ComplexBall {
    pub fn exact_zero(prec: u32) -> ComplexBall {
        ComplexBall {
            re: Ball::exact_zero(prec),
            im: Ball::exact_zero(prec),
        }
    }

    pub fn mid(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re.mid(), self.im.mid())
    }

    /// Largest half-width of the two components.
    pub fn radius(&self) -> f64 {
        self.re.radius().max(self.im.radius())
    }

    pub fn is_exact_zero(&self) -> bool {
        self.re.mid.is_zero() && self.re.rad.is_zero() && self.im.mid.is_zero() && self.im.rad.is_zero()
    }
}

fn scaled_to_f64(x: &BigInt, prec: u32) -> f64 {
    // keep the exponent of the conversion in range
    let (x, prec) = if prec > 900 {
        (x >> (prec - 900), 900)
    } else {
        (x.clone(), prec)
    };
    x.to_f64().unwrap_or(f64::NAN) * 2f64.powi(-(prec as i32))
}

/// `atan(1/x)` in fixed point with `w` fractional bits; returns (value, error bound).
fn atan_inv(x: u64, w: u32) -> (BigInt, u64) {
    let scale = BigInt::from(1) << w;
    let x2 = BigInt::from(x * x);
    // floor(floor(a/b)/c) == floor(a/(bc)), so each power term is an exact floor
    let mut power = scale / BigInt::from(x);
    let mut sum = power.clone();
    let mut k = 1u64;
    let mut err = 1u64;
    loop {
        power /= &x2;
        if power.is_zero() {
            break;
        }
        let term = &power / BigInt::from(2 * k + 1);
        if k % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
        err += 1;
        k += 1;
    }
    // alternating tail bounded by the first omitted term (< 1 ulp)
    (sum, err + 1)
}

/// pi with `w` fractional bits and an error bound in ulps (Machin's formula).
fn pi_fixed(w: u32) -> (BigInt, u64) {
    let (a, ea) = atan_inv(5, w);
    let (b, eb) = atan_inv(239, w);
    (a * 16 - b * 4, 16 * ea + 4 * eb)
}

/// Taylor series for (cos x, sin x) at `w` fractional bits, `0 <= x <= 1.6`.
/// Returns the values and a common truncation error bound in ulps.
fn cos_sin_fixed(x: &BigInt, w: u32) -> (BigInt, BigInt, u64) {
    let one = BigInt::from(1) << w;
    let mut cos = one.clone();
    let mut sin = BigInt::zero();
    let mut term = one;
    let mut n = 0u64;
    let mut steps = 0u64;
    loop {
        // term = x^n / n!
        term = (&term * x) >> w;
        n += 1;
        term /= BigInt::from(n);
        steps += 1;
        if term.is_zero() {
            break;
        }
        // n is the power of x carried by term
        match n % 4 {
            0 => cos += &term,
            1 => sin += &term,
            2 => cos -= &term,
            _ => sin -= &term,
        }
    }
    // Each step loses at most 2 ulps and |x|/n < 1.6 keeps propagated error
    // below a geometric sum; 4 ulps per step covers both, plus the tail.
    (cos, sin, 4 * steps + 2)
}

/// Enclosures of `zeta_N^k` for `0 <= k < count` with `prec` fractional bits.
pub(crate) fn root_powers(order: u32, count: usize, prec: u32) -> Vec<ComplexBall> {
    let w = prec + GUARD_BITS;
    let (pi, pi_err) = pi_fixed(w);
    let quarter = (order / 4) as u64;
    (0..count as u64)
        .map(|k| {
            let k = k % order as u64;
            let (q, r) = (k / quarter, k % quarter);
            // theta = 2 pi r / N <= pi / 2
            let denom = BigInt::from(order as u64);
            let theta = (&pi * BigInt::from(2 * r)) / &denom;
            let theta_err = pi_err + 1;
            let (c, s, trunc) = cos_sin_fixed(&theta, w);
            let rad = BigInt::from(trunc + theta_err);
            // multiply by i^q
            let (re, im) = match q {
                0 => (c, s),
                1 => (-s, c),
                2 => (-c, -s),
                _ => (s, -c),
            };
            ComplexBall {
                re: Ball::new(re, rad.clone(), w).round_down(GUARD_BITS),
                im: Ball::new(im, rad, w).round_down(GUARD_BITS),
            }
        })
        .collect()
}

/// Enclosure of `sum_k (num_k / den) * zeta^k` given enclosures of the powers.
pub(crate) fn combine<'a>(
    nums: impl Iterator<Item = (BigInt, &'a ComplexBall)>,
    den: &BigInt,
    prec: u32,
) -> ComplexBall {
    let mut re = BigInt::zero();
    let mut im = BigInt::zero();
    let mut rad_re = BigInt::zero();
    let mut rad_im = BigInt::zero();
    for (n, ball) in nums {
        if n.is_zero() {
            continue;
        }
        let a = n.abs();
        re += &n * &ball.re.mid;
        im += &n * &ball.im.mid;
        rad_re += &a * &ball.re.rad;
        rad_im += &a * &ball.im.rad;
    }
    let finish = |mid: BigInt, rad: BigInt| {
        let q = mid.div_floor(den);
        let r = if rad.is_zero() {
            BigInt::from(1)
        } else {
            rad.div_ceil(den) + 1
        };
        Ball::new(q, r, prec)
    };
    ComplexBall {
        re: finish(re, rad_re),
        im: finish(im, rad_im),
    }
}
