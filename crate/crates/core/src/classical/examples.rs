//! The three worked channel pairs.

use num_rational::BigRational;

use super::optimize::{
    adaptive_two_step_optimum, nonadaptive_optimum, one_shot_optimum, two_step_value,
    ClassicalTwoStepPolicy,
};
use super::stochastic::{Prob, StochasticChannel};
use crate::error::Result;

fn rational_rows(rows: &[&[(i64, i64)]]) -> StochasticChannel<BigRational> {
    StochasticChannel::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|&(n, d)| BigRational::ratio(n, d)).collect())
            .collect(),
    )
    .expect("columns sum to one")
}

fn decimal_rows(rows: &[&[f64]]) -> StochasticChannel<f64> {
    StochasticChannel::from_rows(rows.iter().map(|r| r.to_vec()).collect()).expect("columns sum to one")
}

/// Smallest pair where adapting helps; exact entries.
pub fn example1() -> (StochasticChannel<BigRational>, StochasticChannel<BigRational>) {
    (
        rational_rows(&[&[(1, 3), (8, 9)], &[(2, 3), (1, 9)]]),
        rational_rows(&[&[(0, 1), (1, 3)], &[(1, 1), (2, 3)]]),
    )
}

/// The best one-shot input is never used by the best parallel strategy.
pub fn example2() -> (StochasticChannel<f64>, StochasticChannel<f64>) {
    (
        decimal_rows(&[
            &[0.86, 0.45, 1.0, 0.5],
            &[0.14, 0.1, 0.0, 0.5],
            &[0.0, 0.45, 0.0, 0.0],
        ]),
        decimal_rows(&[
            &[0.15, 0.1, 0.5, 0.0],
            &[0.85, 0.8, 0.5, 1.0],
            &[0.0, 0.1, 0.0, 0.0],
        ]),
    )
}

/// The best adaptive strategy does not start with the best one-shot input.
pub fn example3() -> (StochasticChannel<f64>, StochasticChannel<f64>) {
    (
        decimal_rows(&[
            &[1.0, 0.5, 0.828, 0.76],
            &[0.0, 0.5, 0.092, 0.04],
            &[0.0, 0.0, 0.08, 0.2],
        ]),
        decimal_rows(&[
            &[0.5, 0.0, 0.092, 0.04],
            &[0.5, 1.0, 0.828, 0.76],
            &[0.0, 0.0, 0.08, 0.2],
        ]),
    )
}

/// Exact optima for the first pair next to the values quoted for it in the
/// literature: 7/9 for two parallel uses with input 1 twice, and 65/81 for
/// the adaptive policy `k=2, f=(2,1)`.
#[derive(Clone, Debug)]
pub struct Example1Adjudication {
    pub one_shot: BigRational,
    pub one_shot_input: usize,
    pub nonadaptive: BigRational,
    pub nonadaptive_inputs: Vec<usize>,
    pub adaptive: BigRational,
    pub adaptive_policy: ClassicalTwoStepPolicy,
    pub quoted_nonadaptive: BigRational,
    /// Exact value of the quoted parallel strategy (input 1 twice).
    pub quoted_nonadaptive_strategy_value: BigRational,
    pub quoted_adaptive: BigRational,
    pub quoted_policy: ClassicalTwoStepPolicy,
    /// Exact value of the quoted adaptive policy.
    pub quoted_policy_value: BigRational,
}

impl Example1Adjudication {
    pub fn nonadaptive_reproduced(&self) -> bool {
        self.nonadaptive == self.quoted_nonadaptive
    }

    pub fn adaptive_reproduced(&self) -> bool {
        self.adaptive == self.quoted_adaptive
    }

    /// adaptive > parallel > 1/2, strictly.
    pub fn strict_ordering(&self) -> bool {
        self.adaptive > self.nonadaptive && self.nonadaptive > BigRational::ratio(1, 2)
    }
}

pub fn example1_adjudication() -> Result<Example1Adjudication> {
    let (m0, m1) = example1();
    let one = one_shot_optimum(&m0, &m1)?;
    let par = nonadaptive_optimum(&m0, &m1, 2)?;
    let ada = adaptive_two_step_optimum(&m0, &m1)?;
    let quoted_policy = ClassicalTwoStepPolicy {
        first_input: 1,
        response: vec![1, 0],
    };
    // parallel uses of input 1 twice = adaptive policy that always answers 1
    let repeat_first = ClassicalTwoStepPolicy {
        first_input: 0,
        response: vec![0, 0],
    };
    Ok(Example1Adjudication {
        one_shot: one.value,
        one_shot_input: one.input,
        nonadaptive: par.value,
        nonadaptive_inputs: par.inputs,
        adaptive: ada.value,
        adaptive_policy: ada.policy,
        quoted_nonadaptive: BigRational::ratio(7, 9),
        quoted_nonadaptive_strategy_value: two_step_value(&m0, &m1, &repeat_first)?,
        quoted_adaptive: BigRational::ratio(65, 81),
        quoted_policy_value: two_step_value(&m0, &m1, &quoted_policy)?,
        quoted_policy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printed_entries() {
        let (m0, m1) = example1();
        assert_eq!(*m0.get(0, 1), BigRational::ratio(8, 9));
        assert_eq!(*m1.get(1, 0), BigRational::ratio(1, 1));
        assert_eq!(*example2().0.get(0, 0), 0.86);
        assert_eq!(*example3().1.get(1, 3), 0.76);
    }

    #[test]
    fn adjudication() {
        let a = example1_adjudication().unwrap();
        assert_eq!(a.one_shot, BigRational::ratio(7, 9));
        assert_eq!(a.nonadaptive, BigRational::ratio(68, 81));
        assert_eq!(a.adaptive, BigRational::ratio(139, 162));
        assert_eq!(a.quoted_policy_value, a.adaptive);
        assert_eq!(a.quoted_nonadaptive_strategy_value, BigRational::ratio(7, 9));
        assert!(!a.nonadaptive_reproduced());
        assert!(!a.adaptive_reproduced());
        assert!(a.strict_ordering());
    }
}
