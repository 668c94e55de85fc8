//! Exact weights for points given as small decimals or fractions.
//!
//! Whether `(1 + x_i)^{a_i}` is a real number for a negative base hinges on
//! `a_i` being an integer, which floating point cannot decide reliably. When
//! every coordinate is recognisable as a small rational `p/q` (the common case
//! for hand-typed points like `-0.5` or `1/3`) the weights are recomputed in
//! exact rational arithmetic.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Largest denominator accepted by [`reconstruct`].
pub const MAX_DENOMINATOR: i64 = 1_000_000;

/// Best rational approximation of `x` by continued fractions with denominator
/// at most `max_den`, accepted only if it rounds back to exactly `x`.
pub fn reconstruct(x: f64, max_den: i64) -> Option<(i64, i64)> {
    if !x.is_finite() || x.abs() > 1e15 {
        return None;
    }
    let (mut p0, mut q0, mut p1, mut q1) = (0i64, 1i64, 1i64, 0i64);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a.abs() > 1e15 {
            return None;
        }
        let a = a as i64;
        let p2 = a.checked_mul(p1)?.checked_add(p0)?;
        let q2 = a.checked_mul(q1)?.checked_add(q0)?;
        if q2 > max_den {
            return None;
        }
        if p2 as f64 / q2 as f64 == x {
            return Some((p2, q2));
        }
        let frac = r - a as f64;
        if frac == 0.0 {
            return None;
        }
        r = 1.0 / frac;
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
    }
    None
}

/// Exact `a_i = prod_{j != i} x_j / prod_{j != i} (x_j - x_i)`, or `None` if a
/// coordinate is not a small rational or two coordinates coincide.
pub fn exact_weights(x: &[f64]) -> Option<Vec<BigRational>> {
    let xs: Vec<BigRational> = x
        .iter()
        .map(|&v| {
            reconstruct(v, MAX_DENOMINATOR)
                .map(|(p, q)| BigRational::new(BigInt::from(p), BigInt::from(q)))
        })
        .collect::<Option<_>>()?;
    let mut out = Vec::with_capacity(xs.len());
    for (i, xi) in xs.iter().enumerate() {
        let mut num = BigRational::one();
        let mut den = BigRational::one();
        for (j, xj) in xs.iter().enumerate() {
            if i != j {
                num *= xj;
                den *= xj - xi;
            }
        }
        if den.is_zero() {
            return None;
        }
        out.push(num / den);
    }
    Some(out)
}

/// Exact facts about a weight that the extended-domain classifier needs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactWeightFacts {
    pub is_integer: bool,
    pub is_zero: bool,
    pub is_negative: bool,
    /// Parity of the weight when it is an integer.
    pub is_odd: bool,
}

pub fn facts(a: &BigRational) -> ExactWeightFacts {
    let is_integer = a.is_integer();
    let is_odd = is_integer && (a.to_integer() % BigInt::from(2)) != BigInt::zero();
    ExactWeightFacts {
        is_integer,
        is_zero: a.is_zero(),
        is_negative: a.is_negative(),
        is_odd,
    }
}
