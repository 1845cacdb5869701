#![allow(dead_code)]

use discrim::channel::{DensityOperator, KrausChannel};
use discrim::classical::StochasticChannel;
use discrim::matrix::{c64, hermitian_eig, ComplexMatrix, StateVector, C64};
use proptest::collection::vec;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed, TestRunner};

/// Seeded runner, so every run draws the same cases.
pub fn runner(cases: u32, seed: u64) -> TestRunner {
    TestRunner::new(Config {
        cases,
        rng_seed: RngSeed::Fixed(seed),
        failure_persistence: None,
        ..Config::default()
    })
}

pub fn entries(n: usize) -> impl Strategy<Value = Vec<C64>> {
    vec((-1.0f64..1.0, -1.0f64..1.0), n).prop_map(|v| v.into_iter().map(|(re, im)| c64(re, im)).collect())
}

pub fn real_entries(n: usize) -> impl Strategy<Value = Vec<C64>> {
    vec(-1.0f64..1.0, n).prop_map(|v| v.into_iter().map(|re| c64(re, 0.0)).collect())
}

pub fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = ComplexMatrix> {
    entries(rows * cols).prop_map(move |d| ComplexMatrix::new(rows, cols, d).unwrap())
}

pub fn hermitian(dim: usize) -> impl Strategy<Value = ComplexMatrix> {
    matrix(dim, dim).prop_map(|m| m.hermitian_part())
}

/// `G G† / tr`, full rank with probability one.
pub fn density(dim: usize) -> impl Strategy<Value = DensityOperator> {
    matrix(dim, dim).prop_map(|g| {
        let m = &g * &g.adjoint();
        let t = m.trace().re;
        DensityOperator::new(m.scale_real(1.0 / t)).unwrap()
    })
}

pub fn unit_vector(dim: usize) -> impl Strategy<Value = StateVector> {
    entries(dim).prop_filter_map("zero vector", |v| StateVector::normalized(v).ok())
}

/// Splits the isometry `G (G†G)^{-1/2}` into `rank` Kraus blocks.
fn isometry_channel(g: &ComplexMatrix, dim_in: usize, dim_out: usize, rank: usize) -> Option<KrausChannel> {
    let gram = &g.adjoint() * g;
    let eig = hermitian_eig(&gram).ok()?;
    if eig.eigenvalues[0] < 1e-3 {
        return None;
    }
    let v = g * &eig.reconstruct_with(|x| 1.0 / x.sqrt());
    let kraus = (0..rank)
        .map(|r| ComplexMatrix::from_fn(dim_out, dim_in, |i, j| v[(r * dim_out + i, j)]))
        .collect();
    KrausChannel::new(dim_in, dim_out, kraus).ok()
}

/// Random channel with `rank` Kraus operators; needs `rank·dim_out ≥ dim_in`.
pub fn channel(dim_in: usize, dim_out: usize, rank: usize, real: bool) -> BoxedStrategy<KrausChannel> {
    let n = rank * dim_out * dim_in;
    let raw = if real { real_entries(n).boxed() } else { entries(n).boxed() };
    raw.prop_filter_map("ill-conditioned draw", move |d| {
        let g = ComplexMatrix::new(rank * dim_out, dim_in, d).unwrap();
        isometry_channel(&g, dim_in, dim_out, rank)
    })
    .boxed()
}

pub fn channel_with_dims(max_in: usize, max_out: usize, max_rank: usize) -> BoxedStrategy<KrausChannel> {
    (1..=max_in, 1..=max_out, 1..=max_rank, any::<bool>())
        .prop_filter("too few Kraus rows", |(i, o, r, _)| r * o >= *i)
        .prop_flat_map(|(i, o, r, real)| channel(i, o, r, real))
        .boxed()
}

/// Two channels with shared dimensions and independent ranks.
pub fn channel_pair(dim_in: usize, dim_out: usize) -> BoxedStrategy<(KrausChannel, KrausChannel)> {
    let min_rank = dim_in.div_ceil(dim_out);
    (min_rank..=min_rank + 2, min_rank..=min_rank + 2, any::<bool>())
        .prop_flat_map(move |(r0, r1, real)| (channel(dim_in, dim_out, r0, real), channel(dim_in, dim_out, r1, real)))
        .boxed()
}

/// A column of weights, mixing a coarse grid (with exact zeros) and
/// continuous draws, normalized to sum one.
fn column(outputs: usize) -> impl Strategy<Value = Vec<f64>> {
    let weight = prop_oneof![(0u8..=4).prop_map(f64::from), 0.0f64..1.0];
    vec(weight, outputs).prop_map(|mut w| {
        let s: f64 = w.iter().sum();
        if s == 0.0 {
            w[0] = 1.0;
            return w;
        }
        w.iter_mut().for_each(|x| *x /= s);
        w
    })
}

pub fn stochastic(outputs: usize, inputs: usize) -> impl Strategy<Value = StochasticChannel<f64>> {
    vec(column(outputs), inputs).prop_map(move |cols| {
        let entries = (0..outputs * inputs).map(|idx| cols[idx % inputs][idx / inputs]).collect();
        StochasticChannel::new(outputs, inputs, entries).unwrap()
    })
}

pub fn stochastic_pair(
    outputs: std::ops::RangeInclusive<usize>,
    inputs: std::ops::RangeInclusive<usize>,
) -> BoxedStrategy<(StochasticChannel<f64>, StochasticChannel<f64>)> {
    (outputs, inputs)
        .prop_flat_map(|(o, i)| (stochastic(o, i), stochastic(o, i)))
        .boxed()
}

/// 2×2 pairs with entries in `{0, 1/4, 1/2, 3/4, 1}`, so zeros and
/// disjoint supports are common.
pub fn grid_pair() -> impl Strategy<Value = (StochasticChannel<f64>, StochasticChannel<f64>)> {
    let one = || {
        (0u8..=4, 0u8..=4).prop_map(|(a, b)| {
            let (x, y) = (f64::from(a) / 4.0, f64::from(b) / 4.0);
            StochasticChannel::from_rows(vec![vec![x, y], vec![1.0 - x, 1.0 - y]]).unwrap()
        })
    };
    (one(), one())
}
