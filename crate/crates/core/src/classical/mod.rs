//! Discrimination of classical channels given as column-stochastic matrices.

mod examples;
mod optimize;
mod perfect;
mod posterior;
mod stochastic;
mod tree;

pub use examples::{example1, example1_adjudication, example2, example3, Example1Adjudication};
pub use optimize::{
    adaptive_two_step_optimum, adaptive_two_step_via_posteriors, nonadaptive_optimum,
    one_shot_optimum, two_step_value, ClassicalTwoStepPolicy, NonAdaptiveOptimum, OneShotOptimum,
    TwoStepOptimum, MAX_ENUMERATION,
};
pub use perfect::{perfect_equivalence_check, perfect_one_shot, PerfectEquivalenceReport};
pub use posterior::{posterior, PosteriorState};
pub use stochastic::{Prob, StochasticChannel};
pub use tree::{adaptive_optimum, AdaptiveOptimum, ClassicalStrategyTree};
