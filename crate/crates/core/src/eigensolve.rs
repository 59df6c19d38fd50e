//! Lowest eigenpairs of the pencil `A x = λ M x` (A Hermitian, M SPD).
//!
//! Small problems are reduced to a standard Hermitian problem through the
//! Cholesky factor of `M` and diagonalized densely. Larger ones use a
//! restarted block Krylov method on the shift-inverted operator
//! `(A + sM)⁻¹ M` with M-orthonormal blocks and Rayleigh–Ritz on `A`.

use faer::linalg::solvers::Solve;
use faer::sparse::{SparseColMat, Triplet};
use faer::{Mat, Side};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::operator::{MagneticOperator, OperatorConfig};
use crate::sparse::CsrMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Dense,
    Iterative,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodChoice {
    Auto,
    Dense,
    Iterative,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SolverOptions {
    pub method: MethodChoice,
    /// Dof count up to which `Auto` picks the dense path.
    pub dense_threshold: usize,
    /// Residual tolerance relative to `max(|λ_n|, 1)`.
    pub tolerance: f64,
    pub max_restarts: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            method: MethodChoice::Auto,
            dense_threshold: 500,
            tolerance: 1e-9,
            max_restarts: 300,
        }
    }
}

impl SolverOptions {
    pub fn dense() -> Self {
        SolverOptions {
            method: MethodChoice::Dense,
            ..Self::default()
        }
    }

    pub fn iterative() -> Self {
        SolverOptions {
            method: MethodChoice::Iterative,
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumConfig {
    #[serde(flatten)]
    pub operator: OperatorConfig,
    pub n: usize,
    pub dofs: usize,
    pub method: Method,
    pub tolerance: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumResult {
    pub eigenvalues: Vec<f64>,
    /// `‖A x − λ M x‖₂` for M-normalized `x`.
    pub residual_norms: Vec<f64>,
    /// M-orthonormal eigenvectors over the active dofs.
    #[serde(skip)]
    pub eigenvectors: Vec<Vec<Complex64>>,
    pub config: SpectrumConfig,
    pub restarts: usize,
}

impl SpectrumResult {
    pub fn sum(&self, n: usize) -> Result<f64> {
        eigenvalue_sum(self, n)
    }
}

pub fn eigenvalue_sum(res: &SpectrumResult, n: usize) -> Result<f64> {
    if n > res.eigenvalues.len() {
        return Err(Error::TooManyEigenvalues {
            requested: n,
            available: res.eigenvalues.len(),
        });
    }
    Ok(res.eigenvalues[..n].iter().sum())
}

pub fn lowest_eigenvalues(op: &MagneticOperator, n: usize) -> Result<SpectrumResult> {
    lowest_eigenvalues_with(op, n, &SolverOptions::default())
}

pub fn lowest_eigenvalues_with(op: &MagneticOperator, n: usize, opts: &SolverOptions) -> Result<SpectrumResult> {
    let dofs = op.dofs();
    if n == 0 {
        return Err(Error::InvalidParameter("at least one eigenvalue must be requested".into()));
    }
    if n > dofs {
        return Err(Error::TooManyEigenvalues {
            requested: n,
            available: dofs,
        });
    }
    let method = match opts.method {
        MethodChoice::Dense => Method::Dense,
        MethodChoice::Iterative => Method::Iterative,
        MethodChoice::Auto if dofs <= opts.dense_threshold => Method::Dense,
        MethodChoice::Auto => Method::Iterative,
    };
    let (eigenvalues, vectors, restarts) = match method {
        Method::Dense => {
            let (vals, vecs) = dense(op, n)?;
            (vals, vecs, 0)
        }
        Method::Iterative => block_krylov(op, n, opts)?,
    };
    let residual_norms = residuals(op, &eigenvalues, &vectors);
    let limit = opts.tolerance * eigenvalues[n - 1].abs().max(1.0);
    let worst = residual_norms.iter().copied().fold(0.0, f64::max);
    if !(worst <= limit) {
        return Err(Error::SolverDidNotConverge {
            iterations: restarts,
            worst_residual: worst,
            tolerance: limit,
            partial_eigenvalues: eigenvalues,
        });
    }
    Ok(SpectrumResult {
        eigenvalues,
        residual_norms,
        eigenvectors: vectors,
        config: SpectrumConfig {
            operator: op.config,
            n,
            dofs,
            method,
            tolerance: opts.tolerance,
        },
        restarts,
    })
}

fn residuals(op: &MagneticOperator, values: &[f64], vectors: &[Vec<Complex64>]) -> Vec<f64> {
    values
        .iter()
        .zip(vectors)
        .map(|(&lambda, x)| {
            let ax = op.stiffness.mul_vec(x);
            let mx = op.mass.mul_vec(x);
            ax.iter()
                .zip(&mx)
                .map(|(a, m)| (a - lambda * m).norm_sqr())
                .sum::<f64>()
                .sqrt()
        })
        .collect()
}

fn dense_complex(a: &CsrMatrix<Complex64>) -> Mat<Complex64> {
    let mut out = Mat::<Complex64>::zeros(a.nrows(), a.nrows());
    for (i, j, v) in a.triplets() {
        out[(i, j)] = v;
    }
    out
}

fn dense(op: &MagneticOperator, n: usize) -> Result<(Vec<f64>, Vec<Vec<Complex64>>)> {
    let a = dense_complex(&op.stiffness);
    let m = dense_complex(&op.mass.map(|v| Complex64::new(v, 0.0)));
    let llt = m
        .llt(Side::Lower)
        .map_err(|e| Error::Factorization(format!("mass matrix: {e:?}")))?;
    let l = llt.L();
    // C = L⁻¹ A L⁻ᴴ, formed as (L⁻¹ (L⁻¹ A)ᴴ)ᴴ
    let mut w = a;
    l.solve_lower_triangular_in_place(w.as_mut());
    let mut c = w.adjoint().to_owned();
    l.solve_lower_triangular_in_place(c.as_mut());
    let c = Mat::<Complex64>::from_fn(c.nrows(), c.ncols(), |i, j| 0.5 * (c[(j, i)].conj() + c[(i, j)]));
    let eig = c
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Factorization(format!("dense eigensolver: {e:?}")))?;
    let s = eig.S().column_vector();
    let u = eig.U();
    let mut y = u.subcols(0, n).to_owned();
    l.adjoint().solve_upper_triangular_in_place(y.as_mut());
    let values = (0..n).map(|k| s[k].re).collect();
    let vectors = (0..n).map(|k| y.col(k).iter().copied().collect()).collect();
    Ok((values, vectors))
}

fn csr_times_block<T>(a: &CsrMatrix<T>, x: &Mat<Complex64>) -> Mat<Complex64>
where
    T: Copy + Default + std::ops::AddAssign + std::ops::Mul<Complex64, Output = Complex64>,
{
    let (rp, ci, vals) = (a.row_ptr(), a.col_idx(), a.values());
    let mut out = Mat::<Complex64>::zeros(x.nrows(), x.ncols());
    for j in 0..x.ncols() {
        let col = x.col(j);
        for i in 0..a.nrows() {
            let mut acc = Complex64::default();
            for k in rp[i]..rp[i + 1] {
                acc += vals[k] * col[ci[k]];
            }
            out[(i, j)] = acc;
        }
    }
    out
}

/// Deterministic pseudo-random start block.
fn start_block(rows: usize, cols: usize) -> Mat<Complex64> {
    let unit = |mut z: u64| {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
        (z >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    };
    Mat::from_fn(rows, cols, |i, j| {
        if j == 0 {
            return Complex64::new(1.0, 0.0);
        }
        let k = (i as u64) << 20 | j as u64;
        Complex64::new(unit(2 * k), unit(2 * k + 1))
    })
}

/// M-orthonormalizes the columns of `w` against `q` (with `mq = M q`) and
/// among themselves, dropping numerically dependent directions.
fn m_orthonormalize(
    mass: &CsrMatrix<f64>,
    q: Option<(&Mat<Complex64>, &Mat<Complex64>)>,
    mut w: Mat<Complex64>,
) -> (Mat<Complex64>, Mat<Complex64>) {
    for _ in 0..2 {
        if let Some((q, mq)) = q {
            let coeff = mq.adjoint() * &w;
            w -= q * &coeff;
        }
        let mw = csr_times_block(mass, &w);
        let g = w.adjoint() * &mw;
        let g = Mat::<Complex64>::from_fn(g.nrows(), g.ncols(), |i, j| 0.5 * (g[(i, j)] + g[(j, i)].conj()));
        let Ok(eig) = g.self_adjoint_eigen(Side::Lower) else {
            return (Mat::zeros(w.nrows(), 0), Mat::zeros(w.nrows(), 0));
        };
        let s = eig.S().column_vector();
        let top = (0..s.nrows()).map(|k| s[k].re).fold(0.0, f64::max);
        let keep: Vec<usize> = (0..s.nrows()).filter(|&k| s[k].re > 1e-20 * top.max(f64::MIN_POSITIVE)).collect();
        let u = eig.U();
        let scale = Mat::<Complex64>::from_fn(u.nrows(), keep.len(), |i, c| u[(i, keep[c])] / s[keep[c]].re.sqrt());
        w = &w * &scale;
    }
    let mw = csr_times_block(mass, &w);
    (w, mw)
}

fn hstack(a: &Mat<Complex64>, b: &Mat<Complex64>) -> Mat<Complex64> {
    Mat::from_fn(a.nrows(), a.ncols() + b.ncols(), |i, j| {
        if j < a.ncols() {
            a[(i, j)]
        } else {
            b[(i, j - a.ncols())]
        }
    })
}

type IterativeOutput = (Vec<f64>, Vec<Vec<Complex64>>, usize);

fn block_krylov(op: &MagneticOperator, n: usize, opts: &SolverOptions) -> Result<IterativeOutput> {
    let dofs = op.dofs();
    let block = (2 * n + 6).min(dofs);
    let depth = 4;
    let hbar = op.config.hbar;
    let beta = op.config.gauge.beta;
    let volume: f64 = op.mass.values().iter().sum();
    let mut shift = hbar * hbar / volume.max(f64::MIN_POSITIVE) + hbar * beta.abs();

    let shifted = |shift: f64| {
        let mut triplets: Vec<Triplet<usize, usize, Complex64>> = op
            .stiffness
            .triplets()
            .map(|(i, j, v)| Triplet::new(i, j, v))
            .collect();
        triplets.extend(op.mass.triplets().map(|(i, j, v)| Triplet::new(i, j, Complex64::new(shift * v, 0.0))));
        SparseColMat::<usize, Complex64>::try_new_from_triplets(dofs, dofs, &triplets)
            .map_err(|e| Error::Factorization(format!("{e:?}")))
    };
    let mut factor = None;
    for _ in 0..8 {
        match shifted(shift)?.sp_cholesky(Side::Lower) {
            Ok(f) => {
                factor = Some(f);
                break;
            }
            Err(_) => shift *= 10.0,
        }
    }
    let factor = factor.ok_or_else(|| Error::Factorization("shifted operator is not positive definite".into()))?;

    let (mut x, mut mx) = m_orthonormalize(&op.mass, None, start_block(dofs, block));
    let mut last: (Vec<f64>, Vec<f64>) = (Vec::new(), Vec::new());
    for restart in 0..opts.max_restarts {
        let (mut q, mut mq) = (x.clone(), mx.clone());
        let mut current = mx.clone();
        for _ in 1..depth {
            if q.ncols() >= dofs {
                break;
            }
            let mut w = current;
            factor.solve_in_place(w.as_mut());
            let (w, mw) = m_orthonormalize(&op.mass, Some((&q, &mq)), w);
            if w.ncols() == 0 {
                break;
            }
            q = hstack(&q, &w);
            mq = hstack(&mq, &mw);
            current = mw;
        }
        let aq = csr_times_block(&op.stiffness, &q);
        let h = q.adjoint() * &aq;
        let h = Mat::<Complex64>::from_fn(h.nrows(), h.ncols(), |i, j| 0.5 * (h[(i, j)] + h[(j, i)].conj()));
        let eig = h
            .self_adjoint_eigen(Side::Lower)
            .map_err(|e| Error::Factorization(format!("Rayleigh–Ritz: {e:?}")))?;
        let s = eig.S().column_vector();
        let keep = block.min(h.nrows());
        let y = eig.U().subcols(0, keep).to_owned();
        x = &q * &y;
        mx = &mq * &y;
        let ax = &aq * &y;
        let values: Vec<f64> = (0..keep).map(|k| s[k].re).collect();
        if values.len() < n {
            return Err(Error::TooManyEigenvalues {
                requested: n,
                available: values.len(),
            });
        }
        let res: Vec<f64> = (0..n)
            .map(|k| {
                (0..dofs)
                    .map(|i| (ax[(i, k)] - values[k] * mx[(i, k)]).norm_sqr())
                    .sum::<f64>()
                    .sqrt()
            })
            .collect();
        // stop a little below the acceptance tolerance so that recomputed
        // residuals pass as well
        let limit = 0.1 * opts.tolerance * values[n - 1].abs().max(1.0);
        if res.iter().all(|&r| r <= limit) {
            let vectors = (0..n).map(|k| x.col(k).iter().copied().collect()).collect();
            return Ok((values[..n].to_vec(), vectors, restart + 1));
        }
        last = (values[..n].to_vec(), res);
    }
    Err(Error::SolverDidNotConverge {
        iterations: opts.max_restarts,
        worst_residual: last.1.iter().copied().fold(0.0, f64::max),
        tolerance: opts.tolerance,
        partial_eigenvalues: last.0,
    })
}
