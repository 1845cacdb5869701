//! Perfect discrimination: a single use suffices whenever any finite number
//! of adaptive uses does. The check below searches strategy trees directly,
//! without the posterior recursion.

use crate::error::{Error, Result};

use super::optimize::MAX_ENUMERATION;
use super::stochastic::{check_pair, half, Prob, StochasticChannel};
use super::tree::ClassicalStrategyTree;

/// Smallest input whose two output distributions have disjoint supports.
pub fn perfect_one_shot<P: Prob>(m0: &StochasticChannel<P>, m1: &StochasticChannel<P>) -> Result<Option<usize>> {
    check_pair(m0, m1)?;
    let tol = P::tolerance();
    Ok((0..m0.inputs()).find(|&k| {
        (0..m0.outputs()).all(|j| !(*m0.get(j, k) > tol && *m1.get(j, k) > tol))
    }))
}

#[derive(Clone, Debug)]
pub struct PerfectEquivalenceReport<P> {
    pub one_shot_witness: Option<usize>,
    /// Shallowest perfect tree found, if any.
    pub perfect_tree: Option<ClassicalStrategyTree>,
    /// Best success probability among the deepest trees searched.
    pub best_value: P,
    pub trees_searched: u128,
    /// Perfect trees exist exactly when a one-shot witness does.
    pub consistent: bool,
}

/// Number of query structures of depth `d`: `T(0) = 1`, `T(d) = K·T(d−1)^J`.
fn tree_count(inputs: usize, outputs: usize, depth: usize) -> Result<u128> {
    let mut t: u128 = 1;
    for _ in 0..depth {
        let mut next = inputs as u128;
        for _ in 0..outputs {
            next = next.saturating_mul(t);
        }
        if next > MAX_ENUMERATION {
            return Err(Error::Capacity {
                what: "strategy trees",
                needed: next,
                limit: MAX_ENUMERATION,
            });
        }
        t = next;
    }
    Ok(t)
}

/// Decodes tree number `index` of the given depth, with the best guess at
/// each leaf; returns the tree and its correct-guess mass `Σ max(w₀, w₁)`.
fn decode<P: Prob>(
    m0: &StochasticChannel<P>,
    m1: &StochasticChannel<P>,
    counts: &[u128],
    depth: usize,
    index: u128,
    w0: P,
    w1: P,
) -> (ClassicalStrategyTree, P) {
    if depth == 0 {
        return if w0 >= w1 {
            (ClassicalStrategyTree::Guess(0), w0)
        } else {
            (ClassicalStrategyTree::Guess(1), w1)
        };
    }
    let inputs = m0.inputs() as u128;
    let k = (index % inputs) as usize;
    let mut rest = index / inputs;
    let sub = counts[depth - 1];
    let mut children = Vec::with_capacity(m0.outputs());
    let mut mass = P::zero();
    for j in 0..m0.outputs() {
        let (child, m) = decode(
            m0,
            m1,
            counts,
            depth - 1,
            rest % sub,
            w0.clone() * m0.get(j, k).clone(),
            w1.clone() * m1.get(j, k).clone(),
        );
        rest /= sub;
        children.push(child);
        mass = mass + m;
    }
    (ClassicalStrategyTree::Query { input: k, children }, mass)
}

/// Searches every strategy tree of depth `1..=n_max` for one that succeeds
/// with certainty and compares the outcome with [`perfect_one_shot`].
pub fn perfect_equivalence_check<P: Prob>(
    m0: &StochasticChannel<P>,
    m1: &StochasticChannel<P>,
    n_max: usize,
) -> Result<PerfectEquivalenceReport<P>> {
    check_pair(m0, m1)?;
    let counts: Vec<u128> = (0..=n_max)
        .map(|d| tree_count(m0.inputs(), m0.outputs(), d))
        .collect::<Result<_>>()?;
    let witness = perfect_one_shot(m0, m1)?;
    let two = P::one() + P::one();
    let mut perfect_tree = None;
    let mut best_value = half::<P>();
    let mut searched = 0;
    for depth in 1..=n_max {
        let mut best_mass = P::zero();
        for index in 0..counts[depth] {
            let (tree, mass) = decode(m0, m1, &counts, depth, index, P::one(), P::one());
            searched += 1;
            if perfect_tree.is_none() && mass >= two.clone() - P::tolerance() {
                perfect_tree = Some(tree);
            }
            if mass > best_mass {
                best_mass = mass;
            }
        }
        best_value = half::<P>() * best_mass;
    }
    Ok(PerfectEquivalenceReport {
        consistent: perfect_tree.is_some() == witness.is_some(),
        one_shot_witness: witness,
        perfect_tree,
        best_value,
        trees_searched: searched,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::examples::{example1, example2};
    use crate::classical::tree::adaptive_optimum;
    use num_rational::BigRational;

    #[test]
    fn disjoint_columns() {
        let m0 = StochasticChannel::from_rows(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let m1 = StochasticChannel::from_rows(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(perfect_one_shot(&m0, &m1).unwrap(), Some(0));
        let r = perfect_equivalence_check(&m0, &m1, 1).unwrap();
        assert!(r.consistent);
        assert_eq!(r.perfect_tree.unwrap().to_string(), "input 1 {1: guess 0, 2: guess 1}");
        assert_eq!(r.best_value, 1.0);
    }

    #[test]
    fn example1_has_no_perfect_tree() {
        let (m0, m1) = example1();
        assert_eq!(perfect_one_shot(&m0, &m1).unwrap(), None);
        let r = perfect_equivalence_check(&m0, &m1, 2).unwrap();
        assert!(r.consistent && r.perfect_tree.is_none());
        assert_eq!(r.trees_searched, 2 + 8);
        assert_eq!(r.best_value, adaptive_optimum(&m0, &m1, 2).unwrap().value);
        assert!(r.best_value < BigRational::ratio(1, 1));
    }

    #[test]
    fn identical_channels() {
        let (m0, _) = example2();
        assert_eq!(perfect_one_shot(&m0, &m0).unwrap(), None);
        assert!(perfect_equivalence_check(&m0, &m0, 2).unwrap().consistent);
    }

    #[test]
    fn guard() {
        let (m0, m1) = example2();
        assert!(perfect_equivalence_check(&m0, &m1, 3).is_err());
    }
}
