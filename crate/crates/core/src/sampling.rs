//! Random density matrices and Bloch vectors for property checks.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::bloch::BlochVector;
use crate::error::Result;
use crate::matrix::ComplexMatrix;

fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

/// `n × k` matrix of independent complex standard normals, row-major.
fn ginibre<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> Vec<Complex64> {
    (0..n * k).map(|_| complex_normal(rng)).collect()
}

/// `ρ = G G† / Tr{G G†}` with `G` an `n × k` Ginibre matrix; rank `min(n, k)`.
pub fn induced_state<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> ComplexMatrix {
    let g = ginibre(rng, n, k);
    let mut rho = ComplexMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            rho[(i, j)] = (0..k).map(|c| g[i * k + c] * g[j * k + c].conj()).sum();
        }
    }
    let tr = rho.trace().re;
    rho.scale_real(1.0 / tr).hermitian_part()
}

/// Full-rank Ginibre (Hilbert-Schmidt) state.
pub fn ginibre_state<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    induced_state(rng, n, n)
}

pub fn pure_state<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let psi: Vec<Complex64> = (0..n).map(|_| complex_normal(rng)).collect();
    projector(&psi)
}

/// `|ψ><ψ| / <ψ|ψ>`.
pub fn projector(psi: &[Complex64]) -> ComplexMatrix {
    let n = psi.len();
    let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
    let mut rho = ComplexMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            rho[(i, j)] = psi[i] * psi[j].conj() / norm;
        }
    }
    rho
}

/// Haar-ish unitary from Gram-Schmidt on a Ginibre matrix; columns are orthonormal.
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let mut cols: Vec<Vec<Complex64>> = (0..n).map(|_| (0..n).map(|_| complex_normal(rng)).collect()).collect();
    for i in 0..n {
        for j in 0..i {
            let (done, rest) = cols.split_at_mut(i);
            let proj: Complex64 = done[j].iter().zip(&rest[0]).map(|(a, b)| a.conj() * b).sum();
            for (x, &q) in rest[0].iter_mut().zip(&done[j]) {
                *x -= proj * q;
            }
        }
        let norm = cols[i].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols[i].iter_mut().for_each(|z| *z /= norm);
    }
    let mut u = ComplexMatrix::zeros(n);
    for (c, col) in cols.iter().enumerate() {
        for (r, &z) in col.iter().enumerate() {
            u[(r, c)] = z;
        }
    }
    u
}

/// `U diag(spectrum) U†` for a random unitary `U`.
pub fn with_spectrum<R: Rng + ?Sized>(rng: &mut R, spectrum: &[f64]) -> ComplexMatrix {
    let u = unitary(rng, spectrum.len());
    u.matmul(&ComplexMatrix::from_diagonal(spectrum))
        .matmul(&u.adjoint())
        .hermitian_part()
}

/// Unit-trace hermitian matrix with exactly one clearly negative eigenvalue.
///
/// The positive eigenvalues are drawn from `[0.2, 1]` and the negative one
/// from `[-0.5, -0.05]` before normalising the trace, which keeps the
/// spectrum away from the positivity boundary.
pub fn indefinite_state<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let mut spectrum: Vec<f64> = (0..n - 1).map(|_| rng.random_range(0.2..1.0)).collect();
    spectrum.push(-rng.random_range(0.05..0.5));
    let total: f64 = spectrum.iter().sum();
    spectrum.iter_mut().for_each(|x| *x /= total);
    with_spectrum(rng, &spectrum)
}

/// Unit-trace hermitian matrix `H - (Tr H - 1)/n` with `H` from the Gaussian
/// unitary ensemble scaled by `width`. Usually indefinite.
pub fn hermitian_unit_trace<R: Rng + ?Sized>(rng: &mut R, n: usize, width: f64) -> ComplexMatrix {
    let g = ginibre(rng, n, n);
    let mut h = ComplexMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            h[(i, j)] = (g[i * n + j] + g[j * n + i].conj()) * (0.5 * width);
        }
    }
    let shift = (h.trace().re - 1.0) / n as f64;
    for i in 0..n {
        h[(i, i)] -= Complex64::new(shift, 0.0);
    }
    h.hermitian_part()
}

/// Bloch vector with independent uniform real parameters in `[-scale, scale]`.
pub fn uniform_bloch<R: Rng + ?Sized>(rng: &mut R, two_j: u32, scale: f64) -> Result<BlochVector> {
    let count = (two_j as usize + 1).pow(2) - 1;
    let params: Vec<f64> = (0..count).map(|_| rng.random_range(-scale..=scale)).collect();
    BlochVector::from_real_params(two_j, &params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::eigen_oracle;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_states_have_expected_spectra() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 2..=6 {
            let rho = ginibre_state(&mut rng, n);
            assert!((rho.trace().re - 1.0).abs() < 1e-12);
            assert!(eigen_oracle(&rho).unwrap().iter().all(|&l| l > -1e-12));

            let p = pure_state(&mut rng, n);
            let ev = eigen_oracle(&p).unwrap();
            assert!((ev[0] - 1.0).abs() < 1e-12 && ev[1..].iter().all(|l| l.abs() < 1e-12));

            let bad = indefinite_state(&mut rng, n);
            assert!((bad.trace().re - 1.0).abs() < 1e-12);
            assert!(*eigen_oracle(&bad).unwrap().last().unwrap() < -1e-3);

            let u = unitary(&mut rng, n);
            assert!(u.matmul(&u.adjoint()).max_abs_diff(&ComplexMatrix::identity(n)) < 1e-12);
        }
    }
}
