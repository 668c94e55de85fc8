//! Sign and log-magnitude bookkeeping for long products of signed factors,
//! plus the `ln(1 + x)` kernels shared by the inequality and blow-up code.

use std::f64::consts::LN_2;

/// Splits a finite `x` into `(m, e)` with `x = m * 2^e` and `0.5 <= |m| < 1`.
fn frexp(x: f64) -> (f64, i64) {
    if x == 0.0 || !x.is_finite() {
        return (x, 0);
    }
    let (x, bias) = if x.abs() < f64::MIN_POSITIVE {
        (x * 2f64.powi(64), -64)
    } else {
        (x, 0)
    };
    let bits = x.to_bits();
    let raw_exp = ((bits >> 52) & 0x7ff) as i64;
    let mant = f64::from_bits((bits & !(0x7ff << 52)) | (1022 << 52));
    (mant, raw_exp - 1022 + bias)
}

/// `x * 2^e` without intermediate overflow.
fn ldexp(mut x: f64, mut e: i64) -> f64 {
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
        if x.is_infinite() {
            return x;
        }
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
        if x == 0.0 {
            return x;
        }
    }
    x * 2f64.powi(e as i32)
}

/// A product of real factors kept as a signed mantissa in `[0.5, 1)` and a
/// binary exponent, so that it neither overflows nor underflows while
/// accumulating.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledProduct {
    mant: f64,
    exp: i64,
}

impl Default for ScaledProduct {
    fn default() -> Self {
        Self::one()
    }
}

impl ScaledProduct {
    pub fn one() -> Self {
        Self { mant: 0.5, exp: 1 }
    }

    pub fn from_factors<I: IntoIterator<Item = f64>>(factors: I) -> Self {
        factors.into_iter().fold(Self::one(), |p, f| p.mul(f))
    }

    #[must_use]
    pub fn mul(self, factor: f64) -> Self {
        if self.mant == 0.0 {
            return self;
        }
        let (m, e) = frexp(factor);
        let (mant, e2) = frexp(self.mant * m);
        Self {
            mant,
            exp: self.exp + e + e2,
        }
    }

    #[must_use]
    pub fn div(self, divisor: f64) -> Self {
        let (m, e) = frexp(divisor);
        let (mant, e2) = frexp(self.mant / m);
        Self {
            mant,
            exp: self.exp - e + e2,
        }
    }

    #[must_use]
    pub fn times(self, other: ScaledProduct) -> Self {
        let (mant, e2) = frexp(self.mant * other.mant);
        Self {
            mant,
            exp: self.exp + other.exp + e2,
        }
    }

    /// -1, 0 or +1.
    pub fn signum(&self) -> f64 {
        if self.mant == 0.0 {
            0.0
        } else {
            self.mant.signum()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mant == 0.0
    }

    /// `ln |product|`; `-inf` for a zero product.
    pub fn ln_abs(&self) -> f64 {
        if self.mant == 0.0 {
            f64::NEG_INFINITY
        } else {
            self.mant.abs().ln() + self.exp as f64 * LN_2
        }
    }

    /// Recombines into an `f64`, saturating to `±inf` or `0`.
    pub fn to_f64(&self) -> f64 {
        ldexp(self.mant, self.exp)
    }

    /// `self / other` recombined into an `f64`.
    pub fn ratio(&self, other: &ScaledProduct) -> f64 {
        if self.mant == 0.0 {
            return 0.0 * other.signum();
        }
        ldexp(self.mant / other.mant, self.exp - other.exp)
    }
}

/// Neumaier-compensated sum, returning the sum and the sum of magnitudes.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(terms: I) -> (f64, f64) {
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    let mut abs = 0.0_f64;
    for t in terms {
        abs += t.abs();
        let s = sum + t;
        if sum.abs() >= t.abs() {
            comp += (sum - s) + t;
        } else {
            comp += (t - s) + sum;
        }
        sum = s;
    }
    (sum + comp, abs)
}

/// Tail of the Mercator series, `sum_{p >= order} (-1)^{p+1} x^p / p`,
/// i.e. `ln(1 + x)` minus its Taylor polynomial of degree `order - 1`.
///
/// Converges for `|x| < 1`; callers keep `|x| <= 0.5`, where sixty terms
/// reach full precision.
pub fn log1p_remainder(x: f64, order: usize) -> f64 {
    if order <= 1 {
        return x.ln_1p();
    }
    debug_assert!(x.abs() <= 0.5 + 1e-12);
    if x == 0.0 {
        return 0.0;
    }
    let mut power = x.powi(order as i32);
    let mut sum = 0.0;
    for p in order..order + 200 {
        let sign = if p % 2 == 1 { 1.0 } else { -1.0 };
        let term = sign * power / p as f64;
        sum += term;
        if term.abs() <= 1e-18 * sum.abs() {
            break;
        }
        power *= x;
    }
    sum
}

/// Largest `|x|` for which the remainder-series evaluation is used.
pub const SERIES_RADIUS: f64 = 0.5;

/// `sum_i w_i ln(1 + x_i)` where `w` are the Lagrange weights of the nodes
/// `x` evaluated at zero (so `sum w_i p(x_i) = p(0)` for every polynomial of
/// degree below `n`).
///
/// Returns the value and an estimate of its absolute rounding error. When
/// all nodes are small the Taylor part of `ln(1 + x)` annihilates exactly,
/// and only the series remainder is summed; this removes the cancellation
/// that otherwise dominates for nodes near zero.
pub fn weighted_log1p_sum(nodes: &[f64], weights: &[f64]) -> (f64, f64) {
    debug_assert_eq!(nodes.len(), weights.len());
    let n = nodes.len();
    let order = if nodes.iter().all(|x| x.abs() <= SERIES_RADIUS) {
        n
    } else {
        1
    };
    let (sum, abs) =
        compensated_sum(nodes.iter().zip(weights).map(|(&x, &w)| w * log1p_remainder(x, order)));
    (sum, 4.0 * (n as f64 + 2.0) * f64::EPSILON * abs)
}
