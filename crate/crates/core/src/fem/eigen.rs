use faer::linalg::solvers::Solve;
use faer::{Mat, Side};
use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

use super::sparse::CsrMatrix;

/// Relative change in the wanted eigenvalues that stops the iteration.
pub const EIGEN_TOLERANCE: f64 = 1e-10;
pub const MAX_ITERATIONS: usize = 10_000;

/// Smallest generalized eigenpairs of `S x = lambda M x`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPairs {
    /// Ascending.
    pub values: Vec<f64>,
    /// `M`-orthonormal; each has nonnegative mean.
    pub vectors: Vec<Vec<f64>>,
    pub iterations: usize,
}

fn start_block(n: usize, b: usize) -> Vec<Vec<f64>> {
    (0..b)
        .map(|j| {
            if j == 0 {
                vec![1.0; n]
            } else {
                (0..n).map(|i| ((i + 1) as f64 * (j as f64 * 0.618_033_988_75 + 0.1)).sin()).collect()
            }
        })
        .collect()
}

fn gram(a: &[Vec<f64>], op: &CsrMatrix) -> DMatrix<f64> {
    let b = a.len();
    let applied: Vec<Vec<f64>> = a.iter().map(|x| op.matvec(x)).collect();
    let mut g = DMatrix::zeros(b, b);
    for i in 0..b {
        for j in i..b {
            let v: f64 = a[i].iter().zip(&applied[j]).map(|(x, y)| x * y).sum();
            g[(i, j)] = v;
            g[(j, i)] = v;
        }
    }
    g
}

/// Rayleigh-Ritz on the span of `y`: returns ascending Ritz values and the
/// `M`-orthonormal Ritz vectors.
fn rayleigh_ritz(y: &[Vec<f64>], s: &CsrMatrix, m: &CsrMatrix) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let b = y.len();
    let sh = gram(y, s);
    let mh = gram(y, m);
    let chol = mh
        .cholesky()
        .ok_or_else(|| Error::SingularSystem("projected mass matrix is not positive definite".into()))?;
    let l = chol.l();
    let linv = l
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::SingularSystem("projected mass factor is singular".into()))?;
    let c = &linv * sh * linv.transpose();
    let c = (&c + c.transpose()) * 0.5;
    let eig = SymmetricEigen::new(c);
    let mut order: Vec<usize> = (0..b).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let coeffs = linv.transpose() * &eig.eigenvectors;
    let n = y[0].len();
    let mut vals = Vec::with_capacity(b);
    let mut vecs = Vec::with_capacity(b);
    for &k in &order {
        vals.push(eig.eigenvalues[k]);
        let mut v = vec![0.0; n];
        for (j, yj) in y.iter().enumerate() {
            let w = coeffs[(j, k)];
            for (vi, yi) in v.iter_mut().zip(yj) {
                *vi += w * yi;
            }
        }
        vecs.push(v);
    }
    Ok((vals, vecs))
}

/// The `count` smallest eigenpairs by block shift-invert subspace iteration
/// at shift zero: `S` is factorized once.
pub fn solve_smallest(s: &CsrMatrix, m: &CsrMatrix, count: usize) -> Result<EigenPairs> {
    let n = s.dim();
    if count == 0 || count > n {
        return Err(Error::domain(format!("cannot compute {count} eigenvalues of a {n}-dimensional problem")));
    }
    if m.dim() != n {
        return Err(Error::domain("stiffness and mass matrices differ in size"));
    }
    let llt = s
        .to_faer_lower()?
        .sp_cholesky(Side::Lower)
        .map_err(|e| Error::SingularSystem(format!("Cholesky factorization failed: {e:?}")))?;
    let b = (count + 3).max(2 * count).min(n);
    let mut x = start_block(n, b);
    let mut prev: Option<Vec<f64>> = None;
    for it in 1..=MAX_ITERATIONS {
        let mut rhs = Mat::<f64>::zeros(n, b);
        for (j, xj) in x.iter().enumerate() {
            for (i, v) in m.matvec(xj).into_iter().enumerate() {
                rhs[(i, j)] = v;
            }
        }
        llt.solve_in_place(rhs.as_mut());
        let y: Vec<Vec<f64>> = (0..b).map(|j| (0..n).map(|i| rhs[(i, j)]).collect()).collect();
        if y.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::SingularSystem("solve produced non-finite values".into()));
        }
        let (vals, vecs) = rayleigh_ritz(&y, s, m)?;
        x = vecs;
        let done = prev.as_ref().is_some_and(|p| {
            (0..count).all(|i| (vals[i] - p[i]).abs() <= EIGEN_TOLERANCE * vals[i].abs())
        });
        if done {
            let mut vectors: Vec<Vec<f64>> = x.into_iter().take(count).collect();
            for v in &mut vectors {
                let norm = m.form(v, v).sqrt();
                let sign = if v.iter().sum::<f64>() < 0.0 { -1.0 } else { 1.0 };
                v.iter_mut().for_each(|c| *c *= sign / norm);
            }
            return Ok(EigenPairs { values: vals[..count].to_vec(), vectors, iterations: it });
        }
        prev = Some(vals);
    }
    Err(Error::Convergence { iterations: MAX_ITERATIONS })
}
