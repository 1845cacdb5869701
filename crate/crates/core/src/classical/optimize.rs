//! Exhaustive optimization over one-shot, parallel and two-step adaptive
//! strategies.

use std::fmt;

use crate::error::{shape_err, Result};

use super::posterior::posterior;
use super::stochastic::{beats, check_pair, guard, half, max_of, quarter, Prob, StochasticChannel};

/// Largest search space enumerated exhaustively.
pub const MAX_ENUMERATION: u128 = 1_000_000;

#[derive(Clone, Debug, PartialEq)]
pub struct OneShotOptimum<P> {
    pub value: P,
    pub input: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NonAdaptiveOptimum<P> {
    pub value: P,
    pub inputs: Vec<usize>,
}

/// First input `k`, then input `response[j]` after seeing output `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalTwoStepPolicy {
    pub first_input: usize,
    pub response: Vec<usize>,
}

impl fmt::Display for ClassicalTwoStepPolicy {
    /// 1-based, e.g. `k=1, f=(3,4,1)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let resp: Vec<String> = self.response.iter().map(|r| (r + 1).to_string()).collect();
        write!(f, "k={}, f=({})", self.first_input + 1, resp.join(","))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TwoStepOptimum<P> {
    pub value: P,
    pub policy: ClassicalTwoStepPolicy,
}

/// `Σ_j |a_j − b_j|`
fn l1<P: Prob>(a: &[P], b: &[P]) -> P {
    a.iter()
        .zip(b)
        .fold(P::zero(), |s, (x, y)| s + (x.clone() - y.clone()).abs())
}

fn success_from_l1<P: Prob>(dist: P) -> P {
    half::<P>() + quarter::<P>() * dist
}

/// Best single use: `1/2 + ¼·max_k ‖M₀|k⟩ − M₁|k⟩‖₁`.
pub fn one_shot_optimum<P: Prob>(
    m0: &StochasticChannel<P>,
    m1: &StochasticChannel<P>,
) -> Result<OneShotOptimum<P>> {
    check_pair(m0, m1)?;
    let mut best: Option<(P, usize)> = None;
    for k in 0..m0.inputs() {
        let d = l1(&m0.column(k), &m1.column(k));
        if best.as_ref().is_none_or(|(b, _)| beats(&d, b)) {
            best = Some((d, k));
        }
    }
    let (d, input) = best.expect("at least one input");
    Ok(OneShotOptimum {
        value: success_from_l1(d),
        input,
    })
}

/// Output distribution of `m` on the input tuple, as a product over uses.
fn extend<P: Prob>(prefix: &[P], column: &[P]) -> Vec<P> {
    let mut out = Vec::with_capacity(prefix.len() * column.len());
    for a in prefix {
        for b in column {
            out.push(a.clone() * b.clone());
        }
    }
    out
}

/// Best `n` parallel uses over all ordered input tuples.
pub fn nonadaptive_optimum<P: Prob>(
    m0: &StochasticChannel<P>,
    m1: &StochasticChannel<P>,
    n: usize,
) -> Result<NonAdaptiveOptimum<P>> {
    check_pair(m0, m1)?;
    if n == 0 {
        return shape_err("number of uses must be positive");
    }
    guard("input tuples", m0.inputs(), n, MAX_ENUMERATION)?;
    guard("output tuples", m0.outputs(), n, MAX_ENUMERATION)?;
    let cols0: Vec<Vec<P>> = (0..m0.inputs()).map(|k| m0.column(k)).collect();
    let cols1: Vec<Vec<P>> = (0..m1.inputs()).map(|k| m1.column(k)).collect();
    let mut best: Option<(P, Vec<usize>)> = None;
    let mut tuple = Vec::with_capacity(n);
    search_tuples(&cols0, &cols1, n, &[P::one()], &[P::one()], &mut tuple, &mut best);
    let (d, inputs) = best.expect("at least one tuple");
    Ok(NonAdaptiveOptimum {
        value: success_from_l1(d),
        inputs,
    })
}

fn search_tuples<P: Prob>(
    cols0: &[Vec<P>],
    cols1: &[Vec<P>],
    remaining: usize,
    p0: &[P],
    p1: &[P],
    tuple: &mut Vec<usize>,
    best: &mut Option<(P, Vec<usize>)>,
) {
    if remaining == 0 {
        let d = l1(p0, p1);
        if best.as_ref().is_none_or(|(b, _)| beats(&d, b)) {
            *best = Some((d, tuple.clone()));
        }
        return;
    }
    for k in 0..cols0.len() {
        tuple.push(k);
        let q0 = extend(p0, &cols0[k]);
        let q1 = extend(p1, &cols1[k]);
        search_tuples(cols0, cols1, remaining - 1, &q0, &q1, tuple, best);
        tuple.pop();
    }
}

/// Success probability of a fixed two-step policy:
/// `1/2 + ¼·Σ_j ‖M₀(j,k)·M₀|f(j)⟩ − M₁(j,k)·M₁|f(j)⟩‖₁`.
pub fn two_step_value<P: Prob>(
    m0: &StochasticChannel<P>,
    m1: &StochasticChannel<P>,
    policy: &ClassicalTwoStepPolicy,
) -> Result<P> {
    check_pair(m0, m1)?;
    let k = policy.first_input;
    if k >= m0.inputs()
        || policy.response.len() != m0.outputs()
        || policy.response.iter().any(|&r| r >= m0.inputs())
    {
        return shape_err(format!("policy {policy} does not fit a {}x{} channel", m0.outputs(), m0.inputs()));
    }
    let mut total = P::zero();
    for (j, &next) in policy.response.iter().enumerate() {
        let (a, b) = (m0.get(j, k), m1.get(j, k));
        for l in 0..m0.outputs() {
            let t = a.clone() * m0.get(l, next).clone() - b.clone() * m1.get(l, next).clone();
            total = total + t.abs();
        }
    }
    Ok(success_from_l1(total))
}

/// Best two-step adaptive policy by enumerating every first input and every
/// total response map.
pub fn adaptive_two_step_optimum<P: Prob>(
    m0: &StochasticChannel<P>,
    m1: &StochasticChannel<P>,
) -> Result<TwoStepOptimum<P>> {
    check_pair(m0, m1)?;
    let (outputs, inputs) = (m0.outputs(), m0.inputs());
    guard("response maps", inputs, outputs, MAX_ENUMERATION)?;
    let mut best: Option<(P, ClassicalTwoStepPolicy)> = None;
    for k in 0..inputs {
        let mut response = vec![0; outputs];
        loop {
            let policy = ClassicalTwoStepPolicy {
                first_input: k,
                response: response.clone(),
            };
            let v = two_step_value(m0, m1, &policy)?;
            if best.as_ref().is_none_or(|(b, _)| beats(&v, b)) {
                best = Some((v, policy));
            }
            // next map in lexicographic order, f(1) most significant
            let Some(pos) = (0..outputs).rev().find(|&j| response[j] + 1 < inputs) else {
                break;
            };
            response[pos] += 1;
            for r in &mut response[pos + 1..] {
                *r = 0;
            }
        }
    }
    let (value, policy) = best.expect("at least one policy");
    Ok(TwoStepOptimum { value, policy })
}

/// The same optimum through posteriors:
/// `1/2 + ¼·max_k Σ_j q(j,k)·max_l 2‖p₀(j,k)M₀|l⟩ − p₁(j,k)M₁|l⟩‖₁`.
pub fn adaptive_two_step_via_posteriors<P: Prob>(
    m0: &StochasticChannel<P>,
    m1: &StochasticChannel<P>,
) -> Result<P> {
    check_pair(m0, m1)?;
    let two = P::one() + P::one();
    let mut best: Option<P> = None;
    for k in 0..m0.inputs() {
        let mut total = P::zero();
        for j in 0..m0.outputs() {
            let post = posterior(m0, m1, k, j, &half())?;
            let Some((p0, p1)) = post.posteriors() else {
                continue;
            };
            let mut inner: Option<P> = None;
            for l in 0..m0.inputs() {
                let scaled0: Vec<P> = m0.column(l).into_iter().map(|x| p0.clone() * x).collect();
                let scaled1: Vec<P> = m1.column(l).into_iter().map(|x| p1.clone() * x).collect();
                let d = l1(&scaled0, &scaled1);
                inner = Some(match inner {
                    Some(i) => max_of(i, d),
                    None => d,
                });
            }
            total = total + post.q.clone() * inner.expect("at least one input") * two.clone();
        }
        best = Some(match best {
            Some(b) => max_of(b, total),
            None => total,
        });
    }
    Ok(success_from_l1(best.expect("at least one input")))
}
