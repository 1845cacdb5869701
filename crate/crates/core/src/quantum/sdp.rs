//! Primal-dual interior-point solver for small complex semidefinite programs.
//!
//! Problems are stated in the usual block form
//!
//! ```text
//!   (P)  minimize ⟨C, X⟩  s.t. ⟨A_i, X⟩ = b_i,  X ⪰ 0
//!   (D)  maximize bᵀy     s.t. S = C − Σ y_i A_i ⪰ 0
//! ```
//!
//! where `X`, `S`, `C` and every `A_i` are block-diagonal with Hermitian
//! blocks and `y` is real. Constraint matrices are sparse; the Schur
//! complement is assembled entry by entry from their nonzeros, which keeps
//! assembly cheap next to the dense Cholesky solve.
//!
//! Search directions follow the HKM scaling with a Mehrotra
//! predictor-corrector step. The solver makes no claim of exactness; callers
//! that need rigorous bounds should turn the returned iterates into feasible
//! points themselves.

use crate::matrix::{hermitian_eigenvalues, ComplexMatrix, C64};

/// Sparse Hermitian matrix given by its nonzero entries (both triangles).
#[derive(Clone, Debug, Default)]
pub struct SparseHermitian {
    pub entries: Vec<(usize, usize, C64)>,
}

impl SparseHermitian {
    pub fn push(&mut self, r: usize, c: usize, v: C64) {
        self.entries.push((r, c, v));
    }

    /// `Re tr(self · k)`
    fn dot(&self, k: &ComplexMatrix) -> f64 {
        self.entries
            .iter()
            .map(|&(r, c, v)| (v * k[(c, r)]).re)
            .sum()
    }

    fn add_scaled_into(&self, s: f64, out: &mut ComplexMatrix) {
        for &(r, c, v) in &self.entries {
            out[(r, c)] += v * s;
        }
    }
}

/// One equality constraint `⟨A_i, X⟩ = b_i`, given per block.
#[derive(Clone, Debug, Default)]
pub struct Constraint {
    pub parts: Vec<(usize, SparseHermitian)>,
}

#[derive(Clone, Debug)]
pub struct SdpProblem {
    pub block_dims: Vec<usize>,
    pub c: Vec<ComplexMatrix>,
    pub constraints: Vec<Constraint>,
    pub b: Vec<f64>,
}

#[derive(Clone, Copy, Debug)]
pub struct SdpSettings {
    pub max_iter: usize,
    /// Target for relative gap and relative infeasibilities.
    pub tol: f64,
}

impl Default for SdpSettings {
    fn default() -> Self {
        Self {
            max_iter: 100,
            tol: 1e-10,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SdpSolution {
    pub x: Vec<ComplexMatrix>,
    pub y: Vec<f64>,
    pub s: Vec<ComplexMatrix>,
    pub primal_objective: f64,
    pub dual_objective: f64,
    pub iterations: usize,
    pub converged: bool,
}

struct Direction {
    dx: Vec<ComplexMatrix>,
    dy: Vec<f64>,
    ds: Vec<ComplexMatrix>,
}

impl SdpProblem {
    fn apply_a(&self, k: &[ComplexMatrix]) -> Vec<f64> {
        self.constraints
            .iter()
            .map(|con| con.parts.iter().map(|(blk, a)| a.dot(&k[*blk])).sum())
            .collect()
    }

    fn apply_at(&self, y: &[f64]) -> Vec<ComplexMatrix> {
        let mut out: Vec<ComplexMatrix> = self
            .block_dims
            .iter()
            .map(|&n| ComplexMatrix::zeros(n, n))
            .collect();
        for (con, &yi) in self.constraints.iter().zip(y) {
            if yi == 0.0 {
                continue;
            }
            for (blk, a) in &con.parts {
                a.add_scaled_into(yi, &mut out[*blk]);
            }
        }
        out
    }

    fn validate(&self) {
        assert_eq!(self.c.len(), self.block_dims.len());
        assert_eq!(self.constraints.len(), self.b.len());
        for (c, &n) in self.c.iter().zip(&self.block_dims) {
            assert_eq!(c.shape(), (n, n));
        }
    }
}

fn inner(a: &[ComplexMatrix], b: &[ComplexMatrix]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.inner_re(y)).sum()
}

fn norm(a: &[ComplexMatrix]) -> f64 {
    a.iter().map(|x| x.frobenius_norm().powi(2)).sum::<f64>().sqrt()
}

fn vnorm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Largest `α` with `x + α·dx ⪰ 0` (infinite when `dx ⪰ 0`), given the
/// Cholesky factor of `x`.
fn max_step(chol: &ComplexMatrix, dx: &ComplexMatrix) -> f64 {
    let li = chol.lower_triangular_inverse();
    let m = li.sandwich(dx).hermitian_part();
    let lmin = hermitian_eigenvalues(&m).map(|e| e[0]).unwrap_or(f64::NEG_INFINITY);
    if lmin >= 0.0 {
        f64::INFINITY
    } else {
        -1.0 / lmin
    }
}

/// Dense real symmetric positive definite system, row-major lower Cholesky.
struct DenseCholesky {
    n: usize,
    l: Vec<f64>,
}

impl DenseCholesky {
    fn factor(mut a: Vec<f64>, n: usize) -> Option<Self> {
        for i in 0..n {
            for j in 0..=i {
                let (head, tail) = a.split_at_mut(i * n);
                let row_i = &tail[..n];
                let row_j: &[f64] = if j == i { row_i } else { &head[j * n..j * n + n] };
                let dot: f64 = row_i[..j].iter().zip(&row_j[..j]).map(|(x, y)| x * y).sum();
                let v = row_i[j] - dot;
                if i == j {
                    if !(v > 0.0) || !v.is_finite() {
                        return None;
                    }
                    tail[j] = v.sqrt();
                } else {
                    let d = head[j * n + j];
                    tail[j] = v / d;
                }
            }
        }
        Some(Self { n, l: a })
    }

    fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut z = rhs.to_vec();
        for i in 0..n {
            let row = &self.l[i * n..i * n + i];
            let s: f64 = row.iter().zip(&z[..i]).map(|(a, b)| a * b).sum();
            z[i] = (z[i] - s) / self.l[i * n + i];
        }
        for i in (0..n).rev() {
            let mut s = z[i];
            for k in i + 1..n {
                s -= self.l[k * n + i] * z[k];
            }
            z[i] = s / self.l[i * n + i];
        }
        z
    }
}

/// Solves the block SDP. Always returns the last iterate; `converged`
/// reports whether the tolerance was met.
pub fn solve(problem: &SdpProblem, settings: &SdpSettings) -> SdpSolution {
    problem.validate();
    let m = problem.constraints.len();
    let nb = problem.block_dims.len();
    let n_total: usize = problem.block_dims.iter().sum();

    // Per-block index of (constraint, matrix part).
    let mut by_block: Vec<Vec<(usize, &SparseHermitian)>> = vec![Vec::new(); nb];
    for (i, con) in problem.constraints.iter().enumerate() {
        for (blk, a) in &con.parts {
            by_block[*blk].push((i, a));
        }
    }

    // Starting point scaled to the data.
    let b_norm = vnorm(&problem.b);
    let c_norm = norm(&problem.c);
    let mut x = Vec::with_capacity(nb);
    let mut s = Vec::with_capacity(nb);
    for (blk, &n) in problem.block_dims.iter().enumerate() {
        let rn = (n as f64).sqrt();
        let mut xi = 10f64.max(rn);
        let mut eta = 10f64.max(rn).max(problem.c[blk].frobenius_norm());
        for (i, a) in &by_block[blk] {
            let an = a.entries.iter().map(|e| e.2.norm_sqr()).sum::<f64>().sqrt();
            xi = xi.max(rn * (1.0 + problem.b[*i].abs()) / (1.0 + an));
            eta = eta.max(an);
        }
        x.push(ComplexMatrix::identity(n).scale_real(xi));
        s.push(ComplexMatrix::identity(n).scale_real(eta / rn.max(1.0)));
    }
    let mut y = vec![0.0; m];

    let mut converged = false;
    let mut iterations = 0;
    for iter in 0..settings.max_iter {
        iterations = iter;
        let at_y = problem.apply_at(&y);
        let rd: Vec<ComplexMatrix> = (0..nb)
            .map(|k| &(&problem.c[k] - &s[k]) - &at_y[k])
            .collect();
        let ax = problem.apply_a(&x);
        let rp: Vec<f64> = problem.b.iter().zip(&ax).map(|(b, a)| b - a).collect();
        let pobj = inner(&problem.c, &x);
        let dobj: f64 = problem.b.iter().zip(&y).map(|(b, y)| b * y).sum();
        let mu = inner(&x, &s) / n_total as f64;

        let rel_gap = (pobj - dobj).abs() / (1.0 + pobj.abs() + dobj.abs());
        let pinf = vnorm(&rp) / (1.0 + b_norm);
        let dinf = norm(&rd) / (1.0 + c_norm);
        if rel_gap < settings.tol && pinf < settings.tol && dinf < settings.tol {
            converged = true;
            break;
        }

        let (Some(x_chol), Some(s_chol)) = (
            x.iter().map(ComplexMatrix::cholesky).collect::<Option<Vec<_>>>(),
            s.iter().map(ComplexMatrix::cholesky).collect::<Option<Vec<_>>>(),
        ) else {
            break;
        };
        let s_inv: Vec<ComplexMatrix> = s_chol
            .iter()
            .map(|l| {
                let li = l.lower_triangular_inverse();
                (&li.adjoint() * &li).hermitian_part()
            })
            .collect();

        let Some(schur) = assemble_and_factor(m, &by_block, &x, &s_inv) else {
            break;
        };

        // Terms shared by predictor and corrector.
        let x_rd_sinv: Vec<ComplexMatrix> =
            (0..nb).map(|k| &(&x[k] * &rd[k]) * &s_inv[k]).collect();
        let a_x_rd_sinv = problem.apply_a(&x_rd_sinv);
        let a_sinv = problem.apply_a(&s_inv);

        let direction = |sigma_mu: f64, corr: Option<&Vec<ComplexMatrix>>| -> Direction {
            let a_corr = corr.map(|c| problem.apply_a(c));
            let rhs: Vec<f64> = (0..m)
                .map(|i| {
                    problem.b[i] + a_x_rd_sinv[i] - sigma_mu * a_sinv[i]
                        + a_corr.as_ref().map_or(0.0, |v| v[i])
                })
                .collect();
            let dy = schur.solve(&rhs);
            let at_dy = problem.apply_at(&dy);
            let ds: Vec<ComplexMatrix> = (0..nb).map(|k| &rd[k] - &at_dy[k]).collect();
            let dx: Vec<ComplexMatrix> = (0..nb)
                .map(|k| {
                    let mut d = &s_inv[k].scale_real(sigma_mu) - &x[k];
                    d = &d - &(&(&x[k] * &ds[k]) * &s_inv[k]);
                    if let Some(c) = corr {
                        d = &d - &c[k];
                    }
                    d.hermitian_part()
                })
                .collect();
            Direction { dx, dy, ds }
        };
        let step_lengths = |d: &Direction| -> (f64, f64) {
            let ap = (0..nb)
                .map(|k| max_step(&x_chol[k], &d.dx[k]))
                .fold(f64::INFINITY, f64::min);
            let ad = (0..nb)
                .map(|k| max_step(&s_chol[k], &d.ds[k]))
                .fold(f64::INFINITY, f64::min);
            (ap, ad)
        };

        // Predictor.
        let pred = direction(0.0, None);
        let (ap, ad) = step_lengths(&pred);
        let (ap, ad) = (ap.min(1.0), ad.min(1.0));
        let mu_aff = (0..nb)
            .map(|k| {
                let xa = &x[k] + &pred.dx[k].scale_real(ap);
                let sa = &s[k] + &pred.ds[k].scale_real(ad);
                xa.inner_re(&sa)
            })
            .sum::<f64>()
            / n_total as f64;
        let sigma = (mu_aff / mu).clamp(0.0, 1.0).powi(3);

        // Corrector.
        let corr: Vec<ComplexMatrix> = (0..nb)
            .map(|k| &(&pred.dx[k] * &pred.ds[k]) * &s_inv[k])
            .collect();
        let dir = direction(sigma * mu, Some(&corr));
        let (ap, ad) = step_lengths(&dir);
        let gamma = 0.9 + 0.09 * ap.min(ad).min(1.0);
        let (ap, ad) = ((gamma * ap).min(1.0), (gamma * ad).min(1.0));
        if ap < 1e-12 && ad < 1e-12 {
            break;
        }

        for k in 0..nb {
            x[k] = (&x[k] + &dir.dx[k].scale_real(ap)).hermitian_part();
            s[k] = (&s[k] + &dir.ds[k].scale_real(ad)).hermitian_part();
        }
        for (yi, dyi) in y.iter_mut().zip(&dir.dy) {
            *yi += ad * dyi;
        }
        iterations = iter + 1;
    }

    let primal_objective = inner(&problem.c, &x);
    let dual_objective = problem.b.iter().zip(&y).map(|(b, y)| b * y).sum();
    SdpSolution {
        x,
        y,
        s,
        primal_objective,
        dual_objective,
        iterations,
        converged,
    }
}

/// `M_ij = Σ_blocks Re tr(A_i X A_j S⁻¹)`, then factor; retries with a small
/// diagonal shift if the factorization breaks down.
fn assemble_and_factor(
    m: usize,
    by_block: &[Vec<(usize, &SparseHermitian)>],
    x: &[ComplexMatrix],
    s_inv: &[ComplexMatrix],
) -> Option<DenseCholesky> {
    let mut mat = vec![0.0; m * m];
    for (blk, list) in by_block.iter().enumerate() {
        let xb = &x[blk];
        let sb = &s_inv[blk];
        for (pi, &(i, ai)) in list.iter().enumerate() {
            for &(j, aj) in &list[pi..] {
                let mut acc = 0.0;
                for &(r, c, v) in &ai.entries {
                    for &(r2, c2, v2) in &aj.entries {
                        acc += (v * xb[(c, r2)] * v2 * sb[(c2, r)]).re;
                    }
                }
                let (lo, hi) = if i >= j { (i, j) } else { (j, i) };
                mat[lo * m + hi] += acc;
            }
        }
    }
    let max_diag = (0..m).map(|i| mat[i * m + i]).fold(0.0, f64::max);
    if let Some(f) = DenseCholesky::factor(mat.clone(), m) {
        return Some(f);
    }
    for shift in [1e-14, 1e-12, 1e-10] {
        let mut shifted = mat.clone();
        for i in 0..m {
            shifted[i * m + i] += shift * max_diag.max(1.0);
        }
        if let Some(f) = DenseCholesky::factor(shifted, m) {
            return Some(f);
        }
    }
    None
}
