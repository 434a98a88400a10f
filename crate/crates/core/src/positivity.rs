//! Positivity of unit-trace hermitian matrices through the coefficients
//! `S_k` of the characteristic polynomial
//! `W(λ) = det(λ - ρ) = Σ_k (-1)^k S_k λ^(N-k)`.
//!
//! `ρ ≥ 0` exactly when every `S_k ≥ 0`. The `S_k` follow from power sums by
//! Newton's identities, either from matrix powers of `ρ` or from the traces
//! `T_m = Tr{(V·T)^m}` of a Bloch vector.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bloch::{bloch_to_density, validate_density, BlochVector, INPUT_TOLERANCE};
use crate::eigen::{eigen_oracle, elementary_symmetric};
use crate::error::{invalid, Error, Result};
use crate::matrix::ComplexMatrix;
use crate::polarization::{multi_trace, PolOpLabel};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Positive,
    NonPositive,
    Marginal,
}

impl Verdict {
    /// Positive semidefinite within tolerance.
    pub fn is_positive(self) -> bool {
        matches!(self, Verdict::Positive | Verdict::Marginal)
    }

    pub fn name(self) -> &'static str {
        match self {
            Verdict::Positive => "Positive",
            Verdict::NonPositive => "NonPositive",
            Verdict::Marginal => "Marginal",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    NewtonFromMatrix,
    NewtonFromBloch,
    EigenOracle,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PositivityReport {
    #[serde(rename = "N")]
    pub n: usize,
    /// `S_1..S_N`.
    #[serde(rename = "S")]
    pub s: Vec<f64>,
    /// `T_2..T_N`.
    #[serde(rename = "T")]
    pub t: Vec<f64>,
    /// `Tr{ρ^k}` for `k = 1..N`.
    pub traces: Vec<f64>,
    pub verdict: Verdict,
    pub tolerance: f64,
    pub method: Method,
}

impl PositivityReport {
    pub fn min_s(&self) -> f64 {
        self.s.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Marginal when the smallest `S_k` is within `tol` of zero, otherwise its sign decides.
pub fn verdict_for(s: &[f64], tol: f64) -> Verdict {
    let min = s.iter().copied().fold(f64::INFINITY, f64::min);
    if min.abs() <= tol {
        Verdict::Marginal
    } else if min > tol {
        Verdict::Positive
    } else {
        Verdict::NonPositive
    }
}

/// `S_1..S_n` from power sums `p_1..p_n` by Newton's identities
/// `k S_k = Σ_{m=1}^k (-1)^(m-1) S_{k-m} p_m`.
pub fn newton_coefficients(power_sums: &[f64]) -> Vec<f64> {
    let n = power_sums.len();
    let mut s = vec![1.0; n + 1];
    for k in 1..=n {
        let mut acc = 0.0;
        for m in 1..=k {
            let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
            acc += sign * s[k - m] * power_sums[m - 1];
        }
        s[k] = acc / k as f64;
    }
    s.split_off(1)
}

/// Real parts of `Tr{A^k}` for `k = 1..=kmax`.
fn matrix_power_traces(a: &ComplexMatrix, kmax: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(kmax);
    let mut power = a.clone();
    for k in 1..=kmax {
        if k > 1 {
            power = power.matmul(a);
        }
        out.push(power.trace().re);
    }
    out
}

fn require_nontrivial(n: usize) -> Result<()> {
    if n < 2 {
        return invalid(format!("positivity needs N ≥ 2, got N = {n}"));
    }
    Ok(())
}

/// `S_1..S_N` of a validated density-matrix candidate.
pub fn char_poly_coeffs(rho: &ComplexMatrix) -> Result<Vec<f64>> {
    validate_density(rho, INPUT_TOLERANCE)?;
    require_nontrivial(rho.dim())?;
    let rho = rho.hermitian_part();
    Ok(newton_coefficients(&matrix_power_traces(&rho, rho.dim())))
}

/// `W(λ) = Σ_{k=0}^N (-1)^k S_k λ^(N-k)` with `S_0 = 1`.
pub fn char_poly_eval(s: &[f64], lambda: f64) -> f64 {
    let mut acc = 1.0;
    for (k, &sk) in s.iter().enumerate() {
        let sign = if (k + 1) % 2 == 0 { 1.0 } else { -1.0 };
        acc = acc * lambda + sign * sk;
    }
    acc
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum TraceMethod {
    /// Matrix powers of `V·T`.
    #[default]
    Direct,
    /// Sum of closed-form multiple traces over component tuples.
    MultiTrace,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TracePowers {
    /// `T_0..T_kmax`.
    pub t: Vec<f64>,
    /// `Tr{ρ^k}` for `k = 0..kmax`.
    pub traces: Vec<f64>,
}

pub fn trace_powers_from_bloch(v: &BlochVector, kmax: usize) -> Result<TracePowers> {
    trace_powers_with(v, kmax, TraceMethod::Direct)
}

pub fn trace_powers_with(v: &BlochVector, kmax: usize, method: TraceMethod) -> Result<TracePowers> {
    let n = v.dim();
    let mut t = vec![0.0; kmax + 1];
    t[0] = n as f64;
    if kmax >= 2 {
        t[2] = v.norm_sq();
    }
    if kmax >= 3 {
        match method {
            TraceMethod::Direct => {
                let vt = v.operator_part()?;
                let direct = matrix_power_traces(&vt, kmax);
                t[3..].copy_from_slice(&direct[2..]);
            }
            TraceMethod::MultiTrace => {
                let comps: Vec<(PolOpLabel, Complex64)> =
                    v.components().into_iter().filter(|(_, z)| z.norm() != 0.0).collect();
                for (m, slot) in t.iter_mut().enumerate().skip(3) {
                    *slot = multi_trace_power(&comps, m, v.two_j())?;
                }
            }
        }
    }
    let traces = (0..=kmax).map(|k| trace_of_rho_power(&t, n, k)).collect();
    Ok(TracePowers { t, traces })
}

/// `Tr{ρ^k} = Σ_m C(k,m) T_m / N^(k-m)`.
fn trace_of_rho_power(t: &[f64], n: usize, k: usize) -> f64 {
    let nf = n as f64;
    let mut binom = 1.0;
    let mut acc = 0.0;
    for (m, &tm) in t.iter().enumerate().take(k + 1) {
        if m > 0 {
            binom = binom * (k + 1 - m) as f64 / m as f64;
        }
        acc += binom * tm / nf.powi((k - m) as i32);
    }
    acc
}

/// `Σ V_{a1} … V_{am} Tr{T_{a1} … T_{am}}` over tuples whose `M` values sum to zero.
fn multi_trace_power(comps: &[(PolOpLabel, Complex64)], m: usize, two_j: u32) -> Result<f64> {
    fn walk(
        comps: &[(PolOpLabel, Complex64)],
        remaining: usize,
        m_sum: i32,
        max_m: i32,
        coeff: Complex64,
        chain: &mut Vec<PolOpLabel>,
        acc: &mut Complex64,
    ) -> Result<()> {
        if remaining == 0 {
            if m_sum == 0 {
                *acc += coeff * multi_trace(chain)?;
            }
            return Ok(());
        }
        if m_sum.abs() > max_m * remaining as i32 {
            return Ok(());
        }
        for &(lab, z) in comps {
            chain.push(lab);
            walk(comps, remaining - 1, m_sum + lab.m, max_m, coeff * z, chain, acc)?;
            chain.pop();
        }
        Ok(())
    }
    let mut acc = Complex64::new(0.0, 0.0);
    let mut chain = Vec::with_capacity(m);
    walk(comps, m, 0, two_j as i32, Complex64::new(1.0, 0.0), &mut chain, &mut acc)?;
    Ok(acc.re)
}

/// `S_1..S_N` from the Bloch traces via
/// `n S_n = S_{n-1} + Σ_{k=2}^n (-1)^(k-1) S_{n-k} [1/N^(k-1) + Σ_{m=2}^k C(k,m) T_m / N^(k-m)]`.
pub fn s_from_bloch(v: &BlochVector) -> Result<Vec<f64>> {
    let n = v.dim();
    let tp = trace_powers_from_bloch(v, n)?;
    Ok(s_from_traces(&tp.t, n))
}

fn s_from_traces(t: &[f64], n: usize) -> Vec<f64> {
    let nf = n as f64;
    let mut s = vec![1.0; n + 1];
    for order in 2..=n {
        let mut acc = s[order - 1];
        for k in 2..=order {
            let mut bracket = 1.0 / nf.powi(k as i32 - 1);
            let mut binom = k as f64;
            for (m, &tm) in t.iter().enumerate().take(k + 1).skip(2) {
                binom = binom * (k + 1 - m) as f64 / m as f64;
                bracket += binom * tm / nf.powi((k - m) as i32);
            }
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            acc += sign * s[order - k] * bracket;
        }
        s[order] = acc / order as f64;
    }
    s.split_off(1)
}

#[derive(Clone, Copy, Debug)]
pub enum PositivityInput<'a> {
    Matrix(&'a ComplexMatrix),
    Bloch(&'a BlochVector),
}

impl<'a> From<&'a ComplexMatrix> for PositivityInput<'a> {
    fn from(m: &'a ComplexMatrix) -> Self {
        PositivityInput::Matrix(m)
    }
}

impl<'a> From<&'a BlochVector> for PositivityInput<'a> {
    fn from(v: &'a BlochVector) -> Self {
        PositivityInput::Bloch(v)
    }
}

fn matrix_report(rho: &ComplexMatrix, tol: f64) -> Result<PositivityReport> {
    validate_density(rho, INPUT_TOLERANCE)?;
    let n = rho.dim();
    require_nontrivial(n)?;
    let rho = rho.hermitian_part();
    let traces = matrix_power_traces(&rho, n);
    let s = newton_coefficients(&traces);
    let mut traceless = rho.clone();
    traceless.add_scaled(Complex64::new(-1.0 / n as f64, 0.0), &ComplexMatrix::identity(n));
    let t = matrix_power_traces(&traceless, n).split_off(1);
    Ok(PositivityReport {
        n,
        verdict: verdict_for(&s, tol),
        s,
        t,
        traces,
        tolerance: tol,
        method: Method::NewtonFromMatrix,
    })
}

fn bloch_report(v: &BlochVector, tol: f64) -> Result<PositivityReport> {
    let n = v.dim();
    let tp = trace_powers_from_bloch(v, n)?;
    let s = s_from_traces(&tp.t, n);
    Ok(PositivityReport {
        n,
        verdict: verdict_for(&s, tol),
        s,
        t: tp.t[2..].to_vec(),
        traces: tp.traces[1..].to_vec(),
        tolerance: tol,
        method: Method::NewtonFromBloch,
    })
}

/// Report whose `S_k` are the elementary symmetric polynomials of the
/// oracle eigenvalues.
pub fn eigen_report(rho: &ComplexMatrix, tol: f64) -> Result<PositivityReport> {
    let mut report = matrix_report(rho, tol)?;
    let ev = eigen_oracle(rho)?;
    report.s = elementary_symmetric(&ev);
    let min = ev.last().copied().unwrap_or(0.0);
    report.verdict = if min.abs() <= tol {
        Verdict::Marginal
    } else if min > tol {
        Verdict::Positive
    } else {
        Verdict::NonPositive
    };
    report.method = Method::EigenOracle;
    Ok(report)
}

pub fn check_positivity<'a>(input: impl Into<PositivityInput<'a>>, tol: f64) -> Result<PositivityReport> {
    match input.into() {
        PositivityInput::Matrix(rho) => matrix_report(rho, tol),
        PositivityInput::Bloch(v) => bloch_report(v, tol),
    }
}

/// As [`check_positivity`], then confirms `min S_k ≥ -tol ⇔ min λ ≥ -tol`
/// against the eigenvalue oracle.
pub fn check_positivity_with_oracle<'a>(
    input: impl Into<PositivityInput<'a>>,
    tol: f64,
) -> Result<PositivityReport> {
    let input = input.into();
    let report = check_positivity(input, tol)?;
    let rho = match input {
        PositivityInput::Matrix(rho) => rho.clone(),
        PositivityInput::Bloch(v) => bloch_to_density(v)?,
    };
    let ev = eigen_oracle(&rho)?;
    let eigen_positive = ev.last().is_some_and(|&l| l >= -tol);
    if eigen_positive != report.verdict.is_positive() {
        return Err(Error::OracleDisagreement {
            coefficients: report.verdict.name(),
            eigen: if eigen_positive { "positive" } else { "negative eigenvalue" },
        });
    }
    Ok(report)
}
