//! Eigenvalues of small hermitian matrices by cyclic Jacobi rotations.
//!
//! The complex hermitian `A = X + iY` is embedded as the real symmetric
//! `[[X, -Y], [Y, X]]`, whose spectrum is that of `A` with every eigenvalue
//! doubled. Sweeps visit `(p, q)` pairs in a fixed order, so results are
//! deterministic.

use crate::bloch::INPUT_TOLERANCE;
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

const MAX_SWEEPS: usize = 100;

/// Eigenvalues of a real symmetric matrix stored row-major, unsorted.
pub fn symmetric_eigenvalues(mut a: Vec<f64>, n: usize) -> Vec<f64> {
    assert_eq!(a.len(), n * n);
    let scale = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    if scale == 0.0 {
        return vec![0.0; n];
    }
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|p| (0..n).filter(move |&q| q != p).map(move |q| (p, q)))
            .map(|(p, q)| a[p * n + q] * a[p * n + q])
            .sum::<f64>()
            .sqrt();
        if off <= f64::EPSILON * 1e-2 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i * n + i]).collect()
}

/// Real eigenvalues of a hermitian matrix in descending order.
pub fn eigen_oracle(rho: &ComplexMatrix) -> Result<Vec<f64>> {
    eigen_oracle_with_tolerance(rho, INPUT_TOLERANCE)
}

pub fn eigen_oracle_with_tolerance(rho: &ComplexMatrix, tol: f64) -> Result<Vec<f64>> {
    let residual = rho.hermiticity_residual();
    if residual > tol {
        return Err(Error::InvalidArgument(format!(
            "eigen oracle needs a hermitian matrix (residual {residual:e})"
        )));
    }
    let h = rho.hermitian_part();
    let n = h.dim();
    let m = 2 * n;
    let mut big = vec![0.0; m * m];
    for i in 0..n {
        for j in 0..n {
            let z = h[(i, j)];
            big[i * m + j] = z.re;
            big[(i + n) * m + (j + n)] = z.re;
            big[i * m + (j + n)] = -z.im;
            big[(i + n) * m + j] = z.im;
        }
    }
    let mut doubled = symmetric_eigenvalues(big, m);
    doubled.sort_by(|a, b| b.total_cmp(a));
    Ok(doubled
        .chunks(2)
        .map(|pair| 0.5 * (pair[0] + pair[1]))
        .collect())
}

/// Elementary symmetric polynomials `e_1..e_n` of the given values.
pub fn elementary_symmetric(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut e = vec![0.0; n + 1];
    e[0] = 1.0;
    for (i, &x) in values.iter().enumerate() {
        for k in (1..=i + 1).rev() {
            e[k] += x * e[k - 1];
        }
    }
    e.split_off(1)
}
