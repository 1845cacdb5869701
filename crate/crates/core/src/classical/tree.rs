//! Optimal adaptive strategies for any number of uses, by dynamic
//! programming over the posterior.

use std::collections::HashMap;
use std::fmt;

use crate::error::{shape_err, Result};

use super::optimize::MAX_ENUMERATION;
use super::posterior::posterior;
use super::stochastic::{beats, check_pair, guard, half, Prob, StochasticChannel};

/// Deterministic adaptive strategy: query an input, branch on the output,
/// guess at the leaves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassicalStrategyTree {
    Guess(u8),
    Query {
        input: usize,
        children: Vec<ClassicalStrategyTree>,
    },
}

impl ClassicalStrategyTree {
    /// Number of queries on the longest path.
    pub fn depth(&self) -> usize {
        match self {
            Self::Guess(_) => 0,
            Self::Query { children, .. } => 1 + children.iter().map(Self::depth).max().unwrap_or(0),
        }
    }

    /// Every query node has one child per channel output.
    pub fn is_total(&self, outputs: usize) -> bool {
        match self {
            Self::Guess(_) => true,
            Self::Query { children, .. } => {
                children.len() == outputs && children.iter().all(|c| c.is_total(outputs))
            }
        }
    }

    /// Probability of a correct final guess under equal priors.
    pub fn success_probability<P: Prob>(
        &self,
        m0: &StochasticChannel<P>,
        m1: &StochasticChannel<P>,
    ) -> Result<P> {
        check_pair(m0, m1)?;
        if !self.is_total(m0.outputs()) {
            return shape_err("strategy tree does not branch on every output");
        }
        Ok(half::<P>() * self.correct_mass(m0, m1, P::one(), P::one())?)
    }

    fn correct_mass<P: Prob>(
        &self,
        m0: &StochasticChannel<P>,
        m1: &StochasticChannel<P>,
        w0: P,
        w1: P,
    ) -> Result<P> {
        match self {
            Self::Guess(0) => Ok(w0),
            Self::Guess(_) => Ok(w1),
            Self::Query { input, children } => {
                if *input >= m0.inputs() {
                    return shape_err(format!("tree queries input {}", input + 1));
                }
                let mut total = P::zero();
                for (j, child) in children.iter().enumerate() {
                    total = total
                        + child.correct_mass(
                            m0,
                            m1,
                            w0.clone() * m0.get(j, *input).clone(),
                            w1.clone() * m1.get(j, *input).clone(),
                        )?;
                }
                Ok(total)
            }
        }
    }
}

impl fmt::Display for ClassicalStrategyTree {
    /// 1-based inputs and outputs, e.g. `input 4 {1: guess 0, 2: guess 1}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Guess(g) => write!(f, "guess {g}"),
            Self::Query { input, children } => {
                write!(f, "input {} {{", input + 1)?;
                for (j, c) in children.iter().enumerate() {
                    if j > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{}: {c}", j + 1)?;
                }
                write!(f, "}}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AdaptiveOptimum<P> {
    pub value: P,
    pub tree: ClassicalStrategyTree,
}

/// Optimal `n`-use adaptive strategy:
/// `V₀(π) = max(π, 1−π)`, `V_t(π) = max_k Σ_j q_π(j,k)·V_{t−1}(p₀(j,k))`.
pub fn adaptive_optimum<P: Prob>(
    m0: &StochasticChannel<P>,
    m1: &StochasticChannel<P>,
    n: usize,
) -> Result<AdaptiveOptimum<P>> {
    check_pair(m0, m1)?;
    if n == 0 {
        return shape_err("number of uses must be positive");
    }
    guard("recursion nodes", m0.inputs() * m0.outputs(), n, MAX_ENUMERATION)?;
    let mut memo = HashMap::new();
    let (value, tree) = solve(m0, m1, n, half(), &mut memo)?;
    Ok(AdaptiveOptimum { value, tree })
}

type Memo<P> = HashMap<(usize, <P as Prob>::Key), (P, ClassicalStrategyTree)>;

fn solve<P: Prob>(
    m0: &StochasticChannel<P>,
    m1: &StochasticChannel<P>,
    t: usize,
    prior: P,
    memo: &mut Memo<P>,
) -> Result<(P, ClassicalStrategyTree)> {
    if t == 0 {
        let other = P::one() - prior.clone();
        return Ok(if prior >= other {
            (prior, ClassicalStrategyTree::Guess(0))
        } else {
            (other, ClassicalStrategyTree::Guess(1))
        });
    }
    let key = (t, prior.key());
    if let Some(hit) = memo.get(&key) {
        return Ok(hit.clone());
    }
    let mut best: Option<(P, ClassicalStrategyTree)> = None;
    for k in 0..m0.inputs() {
        let mut total = P::zero();
        let mut children = Vec::with_capacity(m0.outputs());
        for j in 0..m0.outputs() {
            let post = posterior(m0, m1, k, j, &prior)?;
            match post.posterior {
                Some((p0, _)) => {
                    let (v, sub) = solve(m0, m1, t - 1, p0, memo)?;
                    total = total + post.q * v;
                    children.push(sub);
                }
                None => children.push(ClassicalStrategyTree::Guess(0)),
            }
        }
        if best.as_ref().is_none_or(|(b, _)| beats(&total, b)) {
            best = Some((total, ClassicalStrategyTree::Query { input: k, children }));
        }
    }
    let out = best.expect("at least one input");
    memo.insert(key, out.clone());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::examples::{example1, example2, example3};
    use crate::classical::optimize::{adaptive_two_step_optimum, one_shot_optimum};
    use num_rational::BigRational;

    #[test]
    fn one_use_is_one_shot() {
        let (m0, m1) = example3();
        let a = adaptive_optimum(&m0, &m1, 1).unwrap();
        let o = one_shot_optimum(&m0, &m1).unwrap();
        assert!((a.value - o.value).abs() < 1e-12);
        assert_eq!(a.tree.depth(), 1);
    }

    #[test]
    fn two_uses_match_enumeration() {
        let (m0, m1) = example2();
        let a = adaptive_optimum(&m0, &m1, 2).unwrap();
        let e = adaptive_two_step_optimum(&m0, &m1).unwrap();
        assert!((a.value - e.value).abs() < 1e-12);
        let (m0, m1) = example3();
        let a = adaptive_optimum(&m0, &m1, 2).unwrap();
        assert!((a.value - 0.9536).abs() < 1e-12);
        assert_eq!(
            a.tree.to_string(),
            "input 4 {1: input 1 {1: guess 0, 2: guess 1, 3: guess 0}, \
             2: input 2 {1: guess 0, 2: guess 1, 3: guess 0}, \
             3: input 3 {1: guess 0, 2: guess 1, 3: guess 0}}"
        );
    }

    #[test]
    fn tree_value_matches_recursion() {
        let (m0, m1) = example1();
        for n in 1..=4 {
            let a = adaptive_optimum(&m0, &m1, n).unwrap();
            assert_eq!(a.tree.success_probability(&m0, &m1).unwrap(), a.value);
        }
        assert_eq!(
            adaptive_optimum(&m0, &m1, 2).unwrap().value,
            BigRational::ratio(139, 162)
        );
    }

    #[test]
    fn identical_channels_stay_at_half() {
        let (m0, _) = example2();
        for n in 1..=3 {
            assert!((adaptive_optimum(&m0, &m0, n).unwrap().value - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn guard_and_zero_uses() {
        let (m0, m1) = example2();
        assert!(adaptive_optimum(&m0, &m1, 6).is_err());
        assert!(adaptive_optimum(&m0, &m1, 0).is_err());
    }
}
