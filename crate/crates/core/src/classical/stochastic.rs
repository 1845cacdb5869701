use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use crate::error::{shape_err, Error, Result};

/// Number type for probabilities: `f64`, or `BigRational` for exact work.
pub trait Prob: Clone + Debug + Display + PartialOrd + Signed {
    /// Memoization key for posterior values.
    type Key: Clone + Eq + Hash;

    /// Slack for column sums, supports and tie-breaking (zero when exact).
    fn tolerance() -> Self;
    fn ratio(num: i64, den: i64) -> Self;
    fn to_f64(&self) -> f64;
    fn key(&self) -> Self::Key;
    /// `p/q` form for exact types.
    fn exact(&self) -> Option<String>;
}

impl Prob for f64 {
    type Key = i64;

    fn tolerance() -> Self {
        1e-12
    }

    fn ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn key(&self) -> i64 {
        (self * 1e12).round() as i64
    }

    fn exact(&self) -> Option<String> {
        None
    }
}

impl Prob for BigRational {
    type Key = BigRational;

    fn tolerance() -> Self {
        BigRational::from_integer(BigInt::from(0))
    }

    fn ratio(num: i64, den: i64) -> Self {
        BigRational::new(num.into(), den.into())
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn key(&self) -> BigRational {
        self.clone()
    }

    fn exact(&self) -> Option<String> {
        Some(self.to_string())
    }
}

/// `a > b` beyond the tie tolerance.
pub(crate) fn beats<P: Prob>(a: &P, b: &P) -> bool {
    *a > b.clone() + P::tolerance()
}

pub(crate) fn max_of<P: Prob>(a: P, b: P) -> P {
    if b > a {
        b
    } else {
        a
    }
}

pub(crate) fn half<P: Prob>() -> P {
    P::ratio(1, 2)
}

pub(crate) fn quarter<P: Prob>() -> P {
    P::ratio(1, 4)
}

/// Column-stochastic matrix: column `k` is the output distribution on input `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct StochasticChannel<P> {
    outputs: usize,
    inputs: usize,
    matrix: Vec<P>,
}

impl<P: Prob> StochasticChannel<P> {
    /// `entries` is row-major, `outputs × inputs`.
    pub fn new(outputs: usize, inputs: usize, entries: Vec<P>) -> Result<Self> {
        if outputs == 0 || inputs == 0 {
            return shape_err("stochastic matrix needs at least one row and column");
        }
        if entries.len() != outputs * inputs {
            return shape_err(format!(
                "{} entries for a {outputs}x{inputs} matrix",
                entries.len()
            ));
        }
        let zero = P::zero();
        let mut problems = Vec::new();
        for (i, e) in entries.iter().enumerate() {
            if !(e.to_f64().is_finite() && *e >= zero) {
                problems.push(format!("entry ({}, {}) = {e}", i / inputs + 1, i % inputs + 1));
            }
        }
        for k in 0..inputs {
            let sum = (0..outputs).fold(P::zero(), |s, j| s + entries[j * inputs + k].clone());
            if (sum.clone() - P::one()).abs() > P::tolerance() {
                problems.push(format!("column {} sums to {sum}", k + 1));
            }
        }
        if !problems.is_empty() {
            return Err(Error::Validation(format!(
                "not column-stochastic: {}",
                problems.join("; ")
            )));
        }
        Ok(Self {
            outputs,
            inputs,
            matrix: entries,
        })
    }

    pub fn from_rows(rows: Vec<Vec<P>>) -> Result<Self> {
        let outputs = rows.len();
        let inputs = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != inputs) {
            return shape_err("ragged rows");
        }
        Self::new(outputs, inputs, rows.into_iter().flatten().collect())
    }

    pub fn outputs(&self) -> usize {
        self.outputs
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    /// `M(j, k)`: probability of output `j` on input `k`.
    pub fn get(&self, j: usize, k: usize) -> &P {
        &self.matrix[j * self.inputs + k]
    }

    pub fn column(&self, k: usize) -> Vec<P> {
        (0..self.outputs).map(|j| self.get(j, k).clone()).collect()
    }

    pub fn rows(&self) -> Vec<Vec<P>> {
        self.matrix.chunks(self.inputs).map(<[P]>::to_vec).collect()
    }

    pub fn to_f64(&self) -> StochasticChannel<f64> {
        StochasticChannel {
            outputs: self.outputs,
            inputs: self.inputs,
            matrix: self.matrix.iter().map(Prob::to_f64).collect(),
        }
    }
}

pub(crate) fn check_pair<P>(m0: &StochasticChannel<P>, m1: &StochasticChannel<P>) -> Result<()> {
    if (m0.outputs, m0.inputs) != (m1.outputs, m1.inputs) {
        return shape_err(format!(
            "channels are {}x{} and {}x{}",
            m0.outputs, m0.inputs, m1.outputs, m1.inputs
        ));
    }
    Ok(())
}

/// `base^exp`, or a capacity error if it exceeds `limit`.
pub(crate) fn guard(what: &'static str, base: usize, exp: usize, limit: u128) -> Result<u128> {
    let mut needed: u128 = 1;
    for _ in 0..exp {
        needed = needed.saturating_mul(base as u128);
        if needed > limit {
            return Err(Error::Capacity {
                what,
                needed,
                limit,
            });
        }
    }
    Ok(needed)
}
