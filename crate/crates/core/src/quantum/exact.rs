//! Exact arithmetic in `ℚ(√2)`, enough to rebuild the separating pair's
//! Kraus operators and overlap operator without rounding.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{shape_err, Result};

/// `a + b√2` with rational `a`, `b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Surd2 {
    pub a: BigRational,
    pub b: BigRational,
}

impl Surd2 {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        Self { a, b }
    }

    pub fn rational(num: i64, den: i64) -> Self {
        Self::new(BigRational::new(num.into(), den.into()), BigRational::zero())
    }

    pub fn zero() -> Self {
        Self::rational(0, 1)
    }

    pub fn one() -> Self {
        Self::rational(1, 1)
    }

    /// `(num/den)·√2`
    pub fn sqrt2_times(num: i64, den: i64) -> Self {
        Self::new(BigRational::zero(), BigRational::new(num.into(), den.into()))
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        self.a.to_f64().unwrap_or(f64::NAN) + self.b.to_f64().unwrap_or(f64::NAN) * std::f64::consts::SQRT_2
    }
}

impl fmt::Display for Surd2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "{}√2", self.b),
            (false, false) => write!(f, "{} + {}√2", self.a, self.b),
        }
    }
}

impl Add for &Surd2 {
    type Output = Surd2;
    fn add(self, o: &Surd2) -> Surd2 {
        Surd2::new(&self.a + &o.a, &self.b + &o.b)
    }
}

impl Sub for &Surd2 {
    type Output = Surd2;
    fn sub(self, o: &Surd2) -> Surd2 {
        Surd2::new(&self.a - &o.a, &self.b - &o.b)
    }
}

impl Mul for &Surd2 {
    type Output = Surd2;
    fn mul(self, o: &Surd2) -> Surd2 {
        let two = BigRational::from_integer(2.into());
        Surd2::new(
            &self.a * &o.a + two * &self.b * &o.b,
            &self.a * &o.b + &self.b * &o.a,
        )
    }
}

impl Neg for &Surd2 {
    type Output = Surd2;
    fn neg(self) -> Surd2 {
        Surd2::new(-&self.a, -&self.b)
    }
}

/// Dense real matrix over `ℚ(√2)`, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Surd2>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Surd2::zero(); rows * cols],
        }
    }

    pub fn from_rationals(rows: usize, cols: usize, entries: &[(i64, i64)]) -> Result<Self> {
        if entries.len() != rows * cols {
            return shape_err("entry count does not match shape");
        }
        Ok(Self {
            rows,
            cols,
            data: entries.iter().map(|&(n, d)| Surd2::rational(n, d)).collect(),
        })
    }

    /// `s·|u⟩⟨v|`
    pub fn outer(u: &[Surd2], v: &[Surd2], s: &Surd2) -> Self {
        let mut m = Self::zeros(u.len(), v.len());
        for (i, x) in u.iter().enumerate() {
            let sx = s * x;
            for (j, y) in v.iter().enumerate() {
                m.data[i * v.len() + j] = &sx * y;
            }
        }
        m
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &Surd2 {
        &self.data[i * self.cols + j]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn matmul(&self, o: &Self) -> Result<Self> {
        if self.cols != o.rows {
            return shape_err("inner dimensions differ");
        }
        let mut m = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let x = self.get(i, k);
                if x.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let idx = i * o.cols + j;
                    m.data[idx] = &m.data[idx] + &(x * o.get(k, j));
                }
            }
        }
        Ok(m)
    }

    pub fn add_scaled(&self, o: &Self, s: &Surd2) -> Result<Self> {
        if self.shape() != o.shape() {
            return shape_err("shapes differ");
        }
        let data = self.data.iter().zip(&o.data).map(|(x, y)| x + &(s * y)).collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    /// Entries rounded to doubles.
    pub fn to_f64(&self) -> Vec<f64> {
        self.data.iter().map(Surd2::to_f64).collect()
    }

    /// Determinant by cofactor expansion; intended for tiny matrices.
    pub fn determinant(&self) -> Result<Surd2> {
        if self.rows != self.cols {
            return shape_err("determinant of a non-square matrix");
        }
        Ok(det(&self.data, self.rows))
    }

    /// `self − λ𝟙`
    pub fn shift(&self, lambda: &Surd2) -> Self {
        let mut m = self.clone();
        for i in 0..self.rows.min(self.cols) {
            let idx = i * self.cols + i;
            m.data[idx] = &m.data[idx] - lambda;
        }
        m
    }
}

fn det(d: &[Surd2], n: usize) -> Surd2 {
    if n == 1 {
        return d[0].clone();
    }
    let mut total = Surd2::zero();
    for c in 0..n {
        if d[c].is_zero() {
            continue;
        }
        let minor: Vec<Surd2> = (1..n)
            .flat_map(|r| (0..n).filter(move |&cc| cc != c).map(move |cc| (r, cc)))
            .map(|(r, cc)| d[r * n + cc].clone())
            .collect();
        let term = &d[c] * &det(&minor, n - 1);
        total = if c % 2 == 0 { &total + &term } else { &total - &term };
    }
    total
}

fn ket(bits: &[Vec<Surd2>]) -> Vec<Surd2> {
    bits.iter().skip(1).fold(bits[0].clone(), |acc, b| {
        acc.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
    })
}

fn qubits() -> [Vec<Surd2>; 4] {
    let h = Surd2::sqrt2_times(1, 2);
    [
        vec![Surd2::one(), Surd2::zero()],
        vec![Surd2::zero(), Surd2::one()],
        vec![h.clone(), h.clone()],
        vec![h.clone(), -&h],
    ]
}

/// Exact Kraus operators of the first channel of the separating pair.
pub fn phi0_exact() -> Vec<ExactMatrix> {
    let [z, o, _, _] = qubits();
    let (one, h) = (Surd2::one(), Surd2::sqrt2_times(1, 2));
    vec![
        ExactMatrix::outer(&z, &ket(&[z.clone(), z.clone()]), &one),
        ExactMatrix::outer(&z, &ket(&[z.clone(), o.clone()]), &one),
        ExactMatrix::outer(&z, &ket(&[o.clone(), z.clone()]), &one),
        ExactMatrix::outer(&z, &ket(&[o.clone(), o.clone()]), &h),
        ExactMatrix::outer(&o, &ket(&[o.clone(), o.clone()]), &h),
    ]
}

/// Exact Kraus operators of the second channel of the separating pair.
pub fn phi1_exact() -> Vec<ExactMatrix> {
    let [z, o, p, m] = qubits();
    let (one, h) = (Surd2::one(), Surd2::sqrt2_times(1, 2));
    vec![
        ExactMatrix::outer(&p, &ket(&[z.clone(), z.clone()]), &one),
        ExactMatrix::outer(&p, &ket(&[z.clone(), o.clone()]), &one),
        ExactMatrix::outer(&o, &ket(&[o.clone(), p.clone()]), &one),
        ExactMatrix::outer(&z, &ket(&[o.clone(), m.clone()]), &h),
        ExactMatrix::outer(&o, &ket(&[o.clone(), m.clone()]), &h),
    ]
}

/// The separating coefficients, `(row, col, α)` zero-based.
pub fn separating_alpha_exact() -> Vec<(usize, usize, Surd2)> {
    vec![
        (0, 0, Surd2::sqrt2_times(1, 1)),
        (1, 1, Surd2::sqrt2_times(1, 1)),
        (2, 4, Surd2::one()),
        (3, 2, Surd2::one()),
        (3, 3, Surd2::sqrt2_times(-2, 1)),
    ]
}

/// `Σ α_jk B_jᵀ A_k` over `ℚ(√2)` (all operators here are real).
pub fn exact_overlap_operator(
    kraus_a: &[ExactMatrix],
    kraus_b: &[ExactMatrix],
    alpha: &[(usize, usize, Surd2)],
) -> Result<ExactMatrix> {
    let Some(a0) = kraus_a.first() else {
        return shape_err("empty Kraus list");
    };
    let mut p = ExactMatrix::zeros(a0.cols, a0.cols);
    for (j, k, s) in alpha {
        let (Some(b), Some(a)) = (kraus_b.get(*j), kraus_a.get(*k)) else {
            return shape_err(format!("coefficient ({j}, {k}) outside the Kraus lists"));
        };
        p = p.add_scaled(&b.transpose().matmul(a)?, s)?;
    }
    Ok(p)
}
