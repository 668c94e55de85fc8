//! Partial-fraction decompositions of the reciprocal right-hand side of the
//! generalized logistic equation,
//!
//! ```text
//!   prod k_i / (-x prod (k_i - x)) = A/(-x) + sum A_i/(k_i - x),   x < 0,
//!   prod k_i / ( x prod (x - k_i)) = B/x    + sum B_i/(x - k_i),   x > k_n,
//! ```
//!
//! with `A = 1`, `A_i = -prod_{j!=i} k_j / prod_{j!=i} (k_j - k_i)`,
//! `B = (-1)^n` and `B_i = prod_{j!=i} k_j / prod_{j!=i} (k_i - k_j)`.
//! Residues come straight from these product formulas.

use serde::{Deserialize, Serialize};

use crate::logspace::{compensated_sum, ScaledProduct};
use crate::{check_finite, check_separation, Error, Result};

/// Carrying capacities `0 < k_1 < ... < k_n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct KVector(Vec<f64>);

impl KVector {
    pub fn new(k: Vec<f64>) -> Result<Self> {
        check_finite(&k, "k")?;
        if k.iter().any(|&v| v <= 0.0) {
            return Err(Error::DomainViolation("carrying capacities must be positive".into()));
        }
        if k.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::DomainViolation(
                "carrying capacities must be strictly ascending".into(),
            ));
        }
        check_separation(&k)?;
        Ok(Self(k))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `k_n`.
    pub fn largest(&self) -> f64 {
        *self.0.last().expect("KVector is never empty")
    }

    pub fn product(&self) -> ScaledProduct {
        ScaledProduct::from_factors(self.0.iter().copied())
    }

    /// `k * c` for `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.0.iter().map(|k| k * c).collect())
    }
}

impl TryFrom<Vec<f64>> for KVector {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<KVector> for Vec<f64> {
    fn from(k: KVector) -> Self {
        k.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    /// `x < 0`
    Negative,
    /// `x > k_n`
    Positive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Decomposition {
    pub side: Side,
    /// `A` or `B`.
    pub leading: f64,
    /// `A_i` or `B_i`.
    pub residues: Vec<f64>,
}

fn parity_sign(n: usize) -> f64 {
    if n % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

pub fn decompose_negative_side(k: &KVector) -> Decomposition {
    let k = k.as_slice();
    let residues = (0..k.len())
        .map(|i| {
            let mut num = ScaledProduct::one();
            let mut den = ScaledProduct::one();
            for (_, &kj) in k.iter().enumerate().filter(|&(j, _)| j != i) {
                num = num.mul(kj);
                den = den.mul(kj - k[i]);
            }
            -num.ratio(&den)
        })
        .collect();
    Decomposition {
        side: Side::Negative,
        leading: 1.0,
        residues,
    }
}

pub fn decompose_positive_side(k: &KVector) -> Decomposition {
    let n = k.len();
    let k = k.as_slice();
    let residues = (0..n)
        .map(|i| {
            let mut num = ScaledProduct::one();
            let mut den = ScaledProduct::one();
            for (_, &kj) in k.iter().enumerate().filter(|&(j, _)| j != i) {
                num = num.mul(kj);
                den = den.mul(k[i] - kj);
            }
            num.ratio(&den)
        })
        .collect();
    Decomposition {
        side: Side::Positive,
        leading: parity_sign(n),
        residues,
    }
}

pub fn decompose(k: &KVector, side: Side) -> Decomposition {
    match side {
        Side::Negative => decompose_negative_side(k),
        Side::Positive => decompose_positive_side(k),
    }
}

fn check_pole(k: &KVector, x: f64, side: Side) -> Result<()> {
    let ok = x.is_finite()
        && match side {
            Side::Negative => x < 0.0,
            Side::Positive => x > k.largest(),
        };
    if ok {
        Ok(())
    } else {
        Err(Error::PoleViolation { x })
    }
}

/// The rational function itself, by direct products.
pub fn evaluate_rational(k: &KVector, x: f64, side: Side) -> Result<f64> {
    check_pole(k, x, side)?;
    let num = k.product();
    let den = match side {
        Side::Negative => ScaledProduct::from_factors(k.as_slice().iter().map(|&ki| ki - x)).mul(-x),
        Side::Positive => ScaledProduct::from_factors(k.as_slice().iter().map(|&ki| x - ki)).mul(x),
    };
    Ok(num.ratio(&den))
}

fn decomposition_terms<'a>(d: &'a Decomposition, k: &'a KVector, x: f64) -> Result<impl Iterator<Item = f64> + 'a> {
    check_pole(k, x, d.side)?;
    if d.residues.len() != k.len() {
        return Err(Error::InvalidInput("decomposition does not match k".into()));
    }
    let lead = match d.side {
        Side::Negative => d.leading / (-x),
        Side::Positive => d.leading / x,
    };
    let side = d.side;
    let terms = d.residues.iter().zip(k.as_slice()).map(move |(&c, &ki)| match side {
        Side::Negative => c / (ki - x),
        Side::Positive => c / (x - ki),
    });
    Ok(std::iter::once(lead).chain(terms))
}

/// The partial-fraction sum for `d` at `x`.
pub fn evaluate_decomposition(d: &Decomposition, k: &KVector, x: f64) -> Result<f64> {
    Ok(compensated_sum(decomposition_terms(d, k, x)?).0)
}

/// `sum |terms| / |sum terms|`: how much the partial-fraction sum cancels at
/// `x`. Its relative rounding error is about `n eps` times this.
pub fn decomposition_condition(d: &Decomposition, k: &KVector, x: f64) -> Result<f64> {
    let (sum, abs) = compensated_sum(decomposition_terms(d, k, x)?);
    Ok(abs / sum.abs())
}
