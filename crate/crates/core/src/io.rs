//! Channel files: JSON text describing either a Kraus channel or a
//! column-stochastic matrix.
//!
//! ```json
//! { "name": "flip", "kind": "kraus", "dim_in": 2, "dim_out": 2,
//!   "kraus": [ [[[0, 0], [1, 0]], [[1, 0], [0, 0]]] ] }
//!
//! { "name": "coin", "kind": "stochastic",
//!   "matrix": [["1/3", 1], ["2/3", 0]] }
//! ```
//!
//! Complex entries are `[re, im]`. Stochastic entries are numbers or exact
//! fractions `"p/q"`; a single fraction makes the whole matrix exact.

use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::channel::{KrausChannel, ValidationReport};
use crate::classical::StochasticChannel;
use crate::error::{Error, Result};
use crate::matrix::{c64, ComplexMatrix};

#[derive(Clone, Debug, PartialEq)]
pub enum StochasticData {
    Exact(StochasticChannel<BigRational>),
    Decimal(StochasticChannel<f64>),
}

impl StochasticData {
    pub fn to_f64(&self) -> StochasticChannel<f64> {
        match self {
            Self::Exact(m) => m.to_f64(),
            Self::Decimal(m) => m.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ChannelData {
    Kraus(KrausChannel),
    Stochastic(StochasticData),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChannelFile {
    pub name: String,
    pub channel: ChannelData,
}

impl ChannelFile {
    pub fn kind(&self) -> &'static str {
        match self.channel {
            ChannelData::Kraus(_) => "kraus",
            ChannelData::Stochastic(_) => "stochastic",
        }
    }
}

#[derive(Clone, Copy, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
enum Kind {
    Kraus,
    Stochastic,
}

/// Reads only the `kind` field, so the full parse can target a concrete
/// struct and keep error locations.
#[derive(Deserialize)]
struct KindProbe {
    kind: Kind,
}

#[derive(Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawKraus {
    name: String,
    kind: Kind,
    dim_in: usize,
    dim_out: usize,
    kraus: Vec<Vec<Vec<[f64; 2]>>>,
}

#[derive(Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawStochastic {
    name: String,
    kind: Kind,
    matrix: Vec<Vec<RawEntry>>,
}

#[derive(Deserialize, Serialize)]
#[serde(untagged)]
enum RawEntry {
    Number(serde_json::Number),
    Text(String),
}

fn parse_error(e: serde_json::Error) -> Error {
    Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

/// Exact value of a decimal literal such as `0.86` or `1e-3`.
fn decimal_to_rational(text: &str) -> Option<BigRational> {
    let (mantissa, exp) = match text.find(['e', 'E']) {
        Some(i) => (&text[..i], text[i + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let digits = BigInt::from_str(&format!("{int_part}{frac_part}")).ok()?;
    let shift = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let scale = num_traits::pow(ten, shift.unsigned_abs() as usize);
    Some(if shift >= 0 {
        BigRational::from_integer(digits * scale)
    } else {
        BigRational::new(digits, scale)
    })
}

fn fraction(text: &str) -> Option<BigRational> {
    let text = text.trim();
    match text.split_once('/') {
        Some((p, q)) => {
            let q = BigInt::from_str(q.trim()).ok()?;
            if q.is_zero() {
                return None;
            }
            Some(BigRational::new(BigInt::from_str(p.trim()).ok()?, q))
        }
        None => decimal_to_rational(text),
    }
}

fn build_kraus(raw: RawKraus) -> Result<ChannelFile> {
    let mut kraus = Vec::with_capacity(raw.kraus.len());
    for (idx, m) in raw.kraus.iter().enumerate() {
        let rows = m.len();
        let cols = m.first().map_or(0, Vec::len);
        if rows == 0 || m.iter().any(|r| r.len() != cols) {
            return Err(Error::Validation(format!("Kraus operator {idx} is empty or ragged")));
        }
        let data = m.iter().flatten().map(|&[re, im]| c64(re, im)).collect();
        kraus.push(ComplexMatrix::new(rows, cols, data)?);
    }
    let report = ValidationReport::check(raw.dim_in, raw.dim_out, &kraus);
    if !report.is_ok() {
        return Err(Error::Validation(report.to_string()));
    }
    Ok(ChannelFile {
        name: raw.name,
        channel: ChannelData::Kraus(KrausChannel::new(raw.dim_in, raw.dim_out, kraus)?),
    })
}

fn build_stochastic(raw: RawStochastic) -> Result<ChannelFile> {
    let exact = raw.matrix.iter().flatten().any(|e| matches!(e, RawEntry::Text(_)));
    let data = if exact {
        let rows = raw
            .matrix
            .iter()
            .map(|r| {
                r.iter()
                    .map(|e| {
                        let text = match e {
                            RawEntry::Number(n) => n.to_string(),
                            RawEntry::Text(t) => t.clone(),
                        };
                        fraction(&text)
                            .ok_or_else(|| Error::Validation(format!("not a fraction: {text:?}")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        StochasticData::Exact(StochasticChannel::from_rows(rows)?)
    } else {
        let rows = raw
            .matrix
            .iter()
            .map(|r| {
                r.iter()
                    .map(|e| match e {
                        RawEntry::Number(n) => n
                            .as_f64()
                            .ok_or_else(|| Error::Validation(format!("not a number: {n}"))),
                        RawEntry::Text(_) => unreachable!("handled by the exact branch"),
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        StochasticData::Decimal(StochasticChannel::from_rows(rows)?)
    };
    Ok(ChannelFile {
        name: raw.name,
        channel: ChannelData::Stochastic(data),
    })
}

/// Parses channel file text, rejecting unknown fields and invalid channels.
pub fn parse_channel_file(text: &str) -> Result<ChannelFile> {
    let probe: KindProbe = serde_json::from_str(text).map_err(parse_error)?;
    match probe.kind {
        Kind::Kraus => build_kraus(serde_json::from_str(text).map_err(parse_error)?),
        Kind::Stochastic => build_stochastic(serde_json::from_str(text).map_err(parse_error)?),
    }
}

pub fn read_channel_file(path: impl AsRef<Path>) -> Result<ChannelFile> {
    parse_channel_file(&std::fs::read_to_string(path)?)
}

fn to_text(raw: &impl Serialize) -> String {
    serde_json::to_string_pretty(raw).expect("channel files serialize") + "\n"
}

pub fn kraus_to_string(name: &str, c: &KrausChannel) -> String {
    let kraus = c
        .kraus()
        .iter()
        .map(|k| {
            (0..k.rows())
                .map(|i| k.row(i).iter().map(|z| [z.re, z.im]).collect())
                .collect()
        })
        .collect();
    to_text(&RawKraus {
        name: name.to_string(),
        kind: Kind::Kraus,
        dim_in: c.dim_in(),
        dim_out: c.dim_out(),
        kraus,
    })
}

pub fn stochastic_to_string(name: &str, m: &StochasticChannel<f64>) -> String {
    let matrix = m
        .rows()
        .into_iter()
        .map(|r| {
            r.into_iter()
                .map(|x| RawEntry::Number(serde_json::Number::from_f64(x).expect("finite entries")))
                .collect()
        })
        .collect();
    to_text(&RawStochastic {
        name: name.to_string(),
        kind: Kind::Stochastic,
        matrix,
    })
}

pub fn exact_stochastic_to_string(name: &str, m: &StochasticChannel<BigRational>) -> String {
    let matrix = m
        .rows()
        .into_iter()
        .map(|r| {
            r.into_iter()
                .map(|x| {
                    RawEntry::Text(if x.denom().is_one() {
                        format!("{}/1", x.numer())
                    } else {
                        x.to_string()
                    })
                })
                .collect()
        })
        .collect();
    to_text(&RawStochastic {
        name: name.to_string(),
        kind: Kind::Stochastic,
        matrix,
    })
}

pub fn channel_file_to_string(file: &ChannelFile) -> String {
    match &file.channel {
        ChannelData::Kraus(c) => kraus_to_string(&file.name, c),
        ChannelData::Stochastic(StochasticData::Decimal(m)) => stochastic_to_string(&file.name, m),
        ChannelData::Stochastic(StochasticData::Exact(m)) => exact_stochastic_to_string(&file.name, m),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::phi0;
    use crate::classical::{example1, example2};

    #[test]
    fn decimal_literals_are_exact() {
        assert_eq!(decimal_to_rational("0.86"), Some(BigRational::new(86.into(), 100.into())));
        assert_eq!(decimal_to_rational("1e-3"), Some(BigRational::new(1.into(), 1000.into())));
        assert_eq!(decimal_to_rational("2.5E1"), Some(BigRational::from_integer(25.into())));
        assert_eq!(fraction("8/9"), Some(BigRational::new(8.into(), 9.into())));
        assert_eq!(fraction("1/0"), None);
        assert_eq!(fraction("x"), None);
    }

    #[test]
    fn kraus_round_trip() {
        let text = kraus_to_string("phi0", &phi0());
        let back = parse_channel_file(&text).unwrap();
        assert_eq!(back.name, "phi0");
        assert_eq!(back.channel, ChannelData::Kraus(phi0()));
    }

    #[test]
    fn stochastic_round_trips() {
        let (m0, _) = example2();
        let back = parse_channel_file(&stochastic_to_string("m0", &m0)).unwrap();
        assert_eq!(back.channel, ChannelData::Stochastic(StochasticData::Decimal(m0)));
        let (e0, _) = example1();
        let back = parse_channel_file(&exact_stochastic_to_string("e0", &e0)).unwrap();
        assert_eq!(back.channel, ChannelData::Stochastic(StochasticData::Exact(e0)));
    }

    #[test]
    fn mixed_entries_become_exact() {
        let f = parse_channel_file(r#"{"name": "c", "kind": "stochastic", "matrix": [["1/3", 0.25], ["2/3", 0.75]]}"#)
            .unwrap();
        let ChannelData::Stochastic(StochasticData::Exact(m)) = f.channel else {
            panic!("expected exact matrix");
        };
        assert_eq!(*m.get(1, 1), BigRational::new(3.into(), 4.into()));
    }

    #[test]
    fn unknown_field_rejected_with_location() {
        let text = "{\n  \"name\": \"c\",\n  \"kind\": \"stochastic\",\n  \"colour\": 1,\n  \"matrix\": [[1]]\n}";
        match parse_channel_file(text) {
            Err(Error::Parse { line, message, .. }) => {
                assert!(message.contains("colour"), "{message}");
                assert_eq!(line, 4);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn syntax_error_has_location() {
        match parse_channel_file("{\n  \"name\": \"c\",\n  \"kind\": \"kraus\" \"dim_in\": 2\n}") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (3, 19)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn doubled_identity_reports_deviation() {
        let text = r#"{"name": "bad", "kind": "kraus", "dim_in": 2, "dim_out": 2,
            "kraus": [[[[1, 0], [0, 0]], [[0, 0], [1, 0]]], [[[1, 0], [0, 0]], [[0, 0], [1, 0]]]]}"#;
        let err = parse_channel_file(text).unwrap_err();
        assert!(matches!(err, Error::Validation(_)));
        assert!(err.to_string().contains("completeness"), "{err}");
    }

    #[test]
    fn non_stochastic_rejected() {
        let err = parse_channel_file(r#"{"name": "c", "kind": "stochastic", "matrix": [[0.5], [0.6]]}"#)
            .unwrap_err();
        assert!(matches!(err, Error::Validation(_)));
    }
}
