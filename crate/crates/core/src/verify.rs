//! Identity suites comparing closed forms with direct matrix computation.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bloch::{density_to_bloch, INPUT_TOLERANCE};
use crate::error::{invalid, Result};
use crate::matrix::ComplexMatrix;
use crate::polarization::{
    basis_set, commutator_expansion, expansion_matrix, labels, multi_trace, multi_trace_direct,
    product_expansion, tabulated_basis, PolOpLabel,
};
use crate::positivity::{char_poly_coeffs, s_from_bloch};
use crate::sampling::ginibre_state;

pub const MAX_TWO_J: u32 = 11;

/// Exhaustive pair and triple enumeration up to this `2j`; sampled above it.
const EXHAUSTIVE_TWO_J: u32 = 3;
const SAMPLED_CASES: usize = 100;
const SEED: u64 = 0x5eed;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteResult {
    pub suite: &'static str,
    pub two_j: u32,
    pub cases: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl SuiteResult {
    fn new(suite: &'static str, two_j: u32, cases: usize, max_residual: f64, tolerance: f64) -> Self {
        Self { suite, two_j, cases, max_residual, tolerance, passed: max_residual <= tolerance }
    }
}

pub fn fixtures(two_j: u32) -> Result<Option<SuiteResult>> {
    let Some(table) = tabulated_basis(two_j) else {
        return Ok(None);
    };
    let generated = basis_set(two_j)?;
    let mut worst = 0.0f64;
    for ((la, a), (lb, b)) in table.iter().zip(&generated) {
        worst = if la == lb { worst.max(a.max_abs_diff(b)) } else { f64::INFINITY };
    }
    Ok(Some(SuiteResult::new("fixtures", two_j, table.len(), worst, 1e-14)))
}

/// `Tr{T†_a T_b} = δ_ab`.
pub fn orthonormality(two_j: u32) -> Result<SuiteResult> {
    let basis = basis_set(two_j)?;
    let adjoints: Vec<ComplexMatrix> = basis.iter().map(|(_, m)| m.adjoint()).collect();
    let mut worst = 0.0f64;
    for (i, a) in adjoints.iter().enumerate() {
        for (j, (_, b)) in basis.iter().enumerate() {
            let expected = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((a.trace_of_product(b) - expected).norm());
        }
    }
    Ok(SuiteResult::new("orthonormality", two_j, basis.len().pow(2), worst, 1e-12))
}

fn label_pairs(two_j: u32, rng: &mut ChaCha8Rng) -> Vec<(PolOpLabel, PolOpLabel)> {
    let all = labels(two_j);
    if two_j <= EXHAUSTIVE_TWO_J {
        all.iter().flat_map(|&a| all.iter().map(move |&b| (a, b))).collect()
    } else {
        (0..SAMPLED_CASES)
            .map(|_| (all[rng.random_range(0..all.len())], all[rng.random_range(0..all.len())]))
            .collect()
    }
}

/// Product, commutator and anticommutator expansions against direct products.
pub fn products(two_j: u32) -> Result<SuiteResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ two_j as u64);
    let pairs = label_pairs(two_j, &mut rng);
    let basis = basis_set(two_j)?;
    let mat = |l: PolOpLabel| &basis[l.canonical_index()].1;
    let mut worst = 0.0f64;
    for &(a, b) in &pairs {
        let direct = mat(a).matmul(mat(b));
        let product = expansion_matrix(two_j, &product_expansion(a, b)?)?;
        worst = worst.max(product.max_abs_diff(&direct));
        for anti in [false, true] {
            let expanded = expansion_matrix(two_j, &commutator_expansion(a, b, anti)?)?;
            worst = worst.max(expanded.max_abs_diff(&mat(a).commutator(mat(b), anti)));
        }
    }
    Ok(SuiteResult::new("products", two_j, pairs.len(), worst, 1e-12))
}

/// Closed-form multiple traces against direct traces: every triple for small
/// `2j`, random tuples of length 3 to 5 otherwise.
pub fn multi_traces(two_j: u32) -> Result<SuiteResult> {
    let all = labels(two_j);
    let tuples: Vec<Vec<PolOpLabel>> = if two_j <= EXHAUSTIVE_TWO_J {
        let mut out = Vec::new();
        for &a in &all {
            for &b in &all {
                for &c in &all {
                    out.push(vec![a, b, c]);
                }
            }
        }
        out
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(SEED.rotate_left(7) ^ two_j as u64);
        (0..SAMPLED_CASES)
            .map(|_| {
                let len = rng.random_range(3..=5);
                (0..len).map(|_| all[rng.random_range(0..all.len())]).collect()
            })
            .collect()
    };
    let mut worst = 0.0f64;
    for t in &tuples {
        let diff: Complex64 = multi_trace(t)? - multi_trace_direct(t)?;
        worst = worst.max(diff.norm());
    }
    Ok(SuiteResult::new("multi_traces", two_j, tuples.len(), worst, 1e-12))
}

/// `S_k` from the Bloch traces against Newton's identities on the matrix.
pub fn s_paths(two_j: u32) -> Result<SuiteResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED.rotate_left(13) ^ two_j as u64);
    let n = two_j as usize + 1;
    let cases = 20;
    let mut worst = 0.0f64;
    for _ in 0..cases {
        let rho = ginibre_state(&mut rng, n);
        let a = char_poly_coeffs(&rho)?;
        let b = s_from_bloch(&density_to_bloch(&rho, INPUT_TOLERANCE)?)?;
        for (x, y) in a.iter().zip(&b) {
            worst = worst.max((x - y).abs());
        }
    }
    Ok(SuiteResult::new("s_paths", two_j, cases, worst, 1e-10))
}

/// Every suite for `2j = 1..=two_j_max`.
pub fn run_all(two_j_max: u32) -> Result<Vec<SuiteResult>> {
    if !(1..=MAX_TWO_J).contains(&two_j_max) {
        return invalid(format!("2j_max must lie in 1..={MAX_TWO_J}, got {two_j_max}"));
    }
    let mut out = Vec::new();
    for two_j in 1..=two_j_max {
        if let Some(r) = fixtures(two_j)? {
            out.push(r);
        }
        out.push(orthonormality(two_j)?);
        out.push(products(two_j)?);
        out.push(multi_traces(two_j)?);
        out.push(s_paths(two_j)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_pass_for_small_spins() {
        let results = run_all(2).unwrap();
        assert_eq!(results.len(), 10);
        for r in &results {
            assert!(r.passed, "{r:?}");
        }
    }

    #[test]
    fn guard() {
        assert!(run_all(0).is_err());
        assert!(run_all(12).is_err());
    }
}
