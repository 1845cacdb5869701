//! Browser bindings for a few `discrim` computations.
//!
//! Each exported function returns a JSON string; the plain `*_report`
//! functions underneath do the work and are what the native tests call.

use discrim::channel::{phi0, phi1, DensityOperator, KrausChannel};
use discrim::classical::{
    adaptive_optimum, adaptive_two_step_optimum, nonadaptive_optimum, one_shot_optimum, Prob,
    StochasticChannel,
};
use discrim::io::{parse_channel_file, ChannelData, StochasticData};
use discrim::matrix::{c64, StateVector};
use discrim::quantum::{diamond_norm_distance, simulate_strategy, two_step_strategy, DEFAULT_TOL};
use discrim::{Error, Result};
use num_rational::BigRational;
use serde::Serialize;
use wasm_bindgen::prelude::*;

#[derive(Debug, Serialize)]
pub struct Value {
    pub value: f64,
    /// `p/q` when every entry was given as a fraction.
    pub exact: Option<String>,
}

impl Value {
    fn of<P: Prob>(p: &P) -> Self {
        Self {
            value: p.to_f64(),
            exact: p.exact(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ClassicalReport {
    pub one_shot: Value,
    pub one_shot_input: usize,
    pub nonadaptive: Value,
    pub nonadaptive_inputs: Vec<usize>,
    pub adaptive: Value,
    pub adaptive_tree: String,
    pub two_step_policy: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct DiamondReport {
    pub value: f64,
    pub dual_bound: f64,
    pub gap: f64,
    pub success: f64,
}

#[derive(Debug, Serialize)]
pub struct ProtocolReport {
    pub first: Vec<f64>,
    pub second: Vec<f64>,
}

fn stochastic(rows_json: &str, name: &str) -> Result<StochasticData> {
    let rows: serde_json::Value =
        serde_json::from_str(rows_json).map_err(|e| Error::Validation(format!("{name}: {e}")))?;
    let file = serde_json::json!({ "name": name, "kind": "stochastic", "matrix": rows });
    match parse_channel_file(&file.to_string())?.channel {
        ChannelData::Stochastic(m) => Ok(m),
        ChannelData::Kraus(_) => unreachable!("kind is fixed above"),
    }
}

fn classical<P: Prob>(m0: &StochasticChannel<P>, m1: &StochasticChannel<P>, n: usize) -> Result<ClassicalReport> {
    let one = one_shot_optimum(m0, m1)?;
    let par = nonadaptive_optimum(m0, m1, n)?;
    let ada = adaptive_optimum(m0, m1, n)?;
    let two_step_policy = if n == 2 {
        Some(adaptive_two_step_optimum(m0, m1)?.policy.to_string())
    } else {
        None
    };
    Ok(ClassicalReport {
        one_shot: Value::of(&one.value),
        one_shot_input: one.input + 1,
        nonadaptive: Value::of(&par.value),
        nonadaptive_inputs: par.inputs.iter().map(|k| k + 1).collect(),
        adaptive: Value::of(&ada.value),
        adaptive_tree: ada.tree.to_string(),
        two_step_policy,
    })
}

/// Optimal one-shot, parallel and adaptive strategies for two stochastic
/// matrices given as JSON row arrays (numbers, or `"p/q"` strings for exact work).
pub fn classical_report(m0_rows: &str, m1_rows: &str, n: usize) -> Result<ClassicalReport> {
    match (stochastic(m0_rows, "first")?, stochastic(m1_rows, "second")?) {
        (StochasticData::Exact(a), StochasticData::Exact(b)) => classical::<BigRational>(&a, &b, n),
        (a, b) => classical(&a.to_f64(), &b.to_f64(), n),
    }
}

/// Diamond-norm distance of the separating pair after depolarizing noise of strength `p`.
pub fn noisy_pair_report(p: f64) -> Result<DiamondReport> {
    let noise = KrausChannel::depolarizing(p)?;
    let r = diamond_norm_distance(&phi0().then(&noise)?, &phi1().then(&noise)?, DEFAULT_TOL)?;
    Ok(DiamondReport {
        value: r.value,
        dual_bound: r.dual_bound,
        gap: r.gap,
        success: r.success_probability(),
    })
}

/// Outcome distributions of the two-step protocol on both channels when the
/// discarded qubit is `purity·|ψ⟩⟨ψ| + (1 − purity)·𝟙/2`, with `ψ` at Bloch
/// angles `theta`, `phi`.
pub fn protocol_report(theta: f64, phi: f64, purity: f64) -> Result<ProtocolReport> {
    if !(0.0..=1.0).contains(&purity) {
        return Err(Error::InvalidValue(format!("purity {purity} outside [0, 1]")));
    }
    let psi = StateVector::new(vec![
        c64((theta / 2.0).cos(), 0.0),
        c64(phi.cos(), phi.sin()) * (theta / 2.0).sin(),
    ])?;
    let pure = psi.projector().scale_real(purity);
    let mixed = DensityOperator::maximally_mixed(2).matrix().scale_real(1.0 - purity);
    let rho = DensityOperator::new(&pure + &mixed)?;
    let s = two_step_strategy(&rho)?;
    Ok(ProtocolReport {
        first: simulate_strategy(&s, &phi0())?,
        second: simulate_strategy(&s, &phi1())?,
    })
}

fn to_js<T: Serialize>(r: Result<T>) -> std::result::Result<String, JsError> {
    let v = r.map_err(|e| JsError::new(&e.to_string()))?;
    serde_json::to_string(&v).map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen]
pub fn classical_compare(m0_rows: &str, m1_rows: &str, n: usize) -> std::result::Result<String, JsError> {
    to_js(classical_report(m0_rows, m1_rows, n))
}

#[wasm_bindgen]
pub fn noisy_pair_diamond(p: f64) -> std::result::Result<String, JsError> {
    to_js(noisy_pair_report(p))
}

#[wasm_bindgen]
pub fn two_step_distribution(theta: f64, phi: f64, purity: f64) -> std::result::Result<String, JsError> {
    to_js(protocol_report(theta, phi, purity))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_rows_stay_exact() {
        let r = classical_report(r#"[["1/3", "8/9"], ["2/3", "1/9"]]"#, r#"[["0", "1/3"], ["1", "2/3"]]"#, 2).unwrap();
        assert_eq!(r.adaptive.exact.as_deref(), Some("139/162"));
        assert_eq!(r.nonadaptive.exact.as_deref(), Some("68/81"));
        assert_eq!(r.two_step_policy.as_deref(), Some("k=2, f=(2,1)"));
    }

    #[test]
    fn decimal_rows() {
        let m0 = "[[0.86, 0.45, 1, 0.5], [0.14, 0.1, 0, 0.5], [0, 0.45, 0, 0]]";
        let m1 = "[[0.15, 0.1, 0.5, 0], [0.85, 0.8, 0.5, 1], [0, 0.1, 0, 0]]";
        let r = classical_report(m0, m1, 2).unwrap();
        assert!(r.one_shot.exact.is_none());
        assert!((r.adaptive.value - 0.9275).abs() < 1e-9);
        assert_eq!(r.nonadaptive_inputs, vec![2, 3]);
    }

    #[test]
    fn malformed_rows_are_errors() {
        assert!(classical_report("[[0.5, 0.5]]", "[[1, 1]]", 2).is_err());
        assert!(classical_report("not json", "[[1]]", 1).is_err());
    }

    #[test]
    fn noise_shrinks_the_distance() {
        let clean = noisy_pair_report(0.0).unwrap();
        assert!((clean.value - (1.0 + std::f64::consts::FRAC_1_SQRT_2)).abs() < 1e-6);
        let full = noisy_pair_report(1.0).unwrap();
        assert!(full.value.abs() < 1e-6);
        assert!(noisy_pair_report(1.5).is_err());
    }

    #[test]
    fn protocol_is_perfect_for_any_discarded_state() {
        for (theta, phi, purity) in [(0.0, 0.0, 1.0), (1.1, 2.3, 0.4), (std::f64::consts::PI, 0.0, 0.0)] {
            let r = protocol_report(theta, phi, purity).unwrap();
            assert!((r.first[0] - 1.0).abs() < 1e-12 && r.first[1].abs() < 1e-12);
            assert!(r.second[0].abs() < 1e-12 && (r.second[1] - 1.0).abs() < 1e-12);
        }
        assert!(protocol_report(0.0, 0.0, 2.0).is_err());
    }

    #[test]
    fn reports_serialize() {
        let s = serde_json::to_string(&noisy_pair_report(0.3).unwrap()).unwrap();
        assert!(s.contains("\"dual_bound\""));
    }
}
