//! Conversion between operators and their polarization-basis coefficients.
//!
//! A density matrix is written `ρ = 1/N + Σ_{L≥1,M} V_LM T_LM`. Hermiticity of
//! `ρ` forces `V*_LM = (-1)^M V_{L,-M}`, so only `M ≥ 0` is stored and the
//! `M < 0` components are derived from it.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::angular::{cgc_f64, HalfInt};
use crate::error::{invalid, Error, Result};
use crate::matrix::ComplexMatrix;
use crate::polarization::{labels, polarization_operator, projection_of_index, PolOpLabel};

/// Default tolerance for hermiticity and unit-trace checks on input matrices.
pub const INPUT_TOLERANCE: f64 = 1e-9;

/// Coefficients `Ã_LM = Tr{T†_LM A}` of an arbitrary operator, `T_00` included,
/// in canonical label order.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorCoefficients {
    pub two_j: u32,
    pub coeffs: Vec<Complex64>,
}

impl OperatorCoefficients {
    pub fn get(&self, l: u32, m: i32) -> Option<Complex64> {
        let label = PolOpLabel::new(self.two_j, l, m).ok()?;
        self.coeffs.get(label.canonical_index()).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (PolOpLabel, Complex64)> + '_ {
        labels(self.two_j).into_iter().zip(self.coeffs.iter().copied())
    }

    /// `Σ Ã_LM T_LM`.
    pub fn reconstruct(&self) -> Result<ComplexMatrix> {
        let mut out = ComplexMatrix::zeros(self.two_j as usize + 1);
        for (label, c) in self.iter() {
            if c != Complex64::new(0.0, 0.0) {
                out.add_scaled(c, &polarization_operator(label)?);
            }
        }
        Ok(out)
    }

    /// Matrix elements from the Clebsch-Gordan relation
    /// `A_mm' = Σ_LM sqrt((2L+1)/(2j+1)) <j m'; L M | j m> Ã_LM`.
    pub fn reconstruct_via_cgc(&self) -> Result<ComplexMatrix> {
        let n = self.two_j as usize + 1;
        let j = HalfInt::from_twice(self.two_j as i32);
        let mut out = ComplexMatrix::zeros(n);
        for row in 0..n {
            let m = projection_of_index(self.two_j, row);
            for col in 0..n {
                let mp = projection_of_index(self.two_j, col);
                let big_m = (m.twice() - mp.twice()) / 2;
                let mut acc = Complex64::new(0.0, 0.0);
                for l in big_m.unsigned_abs()..=self.two_j {
                    let c = cgc_f64(j, mp, HalfInt::from_int(l as i32), HalfInt::from_int(big_m), j, m)?;
                    let w = ((2 * l + 1) as f64 / n as f64).sqrt();
                    let label = PolOpLabel { two_j: self.two_j, l, m: big_m };
                    acc += self.coeffs[label.canonical_index()] * (w * c);
                }
                out[(row, col)] = acc;
            }
        }
        Ok(out)
    }
}

fn two_j_of_dim(dim: usize) -> Result<u32> {
    if dim < 2 {
        return invalid(format!("operator dimension {dim} is below 2"));
    }
    u32::try_from(dim - 1).map_err(|_| Error::InvalidArgument("dimension too large".into()))
}

/// Hilbert-Schmidt projection onto every `T_LM`.
pub fn decompose_operator(a: &ComplexMatrix) -> Result<OperatorCoefficients> {
    let two_j = two_j_of_dim(a.dim())?;
    let coeffs = labels(two_j)
        .into_iter()
        .map(|l| polarization_operator(l).map(|t| t.hs_inner(a)))
        .collect::<Result<Vec<_>>>()?;
    Ok(OperatorCoefficients { two_j, coeffs })
}

/// Same coefficients from `Ã_LM = Σ_{mm'} sqrt((2L+1)/(2j+1)) <j m'; L M | j m> A_mm'`.
pub fn decompose_operator_cgc(a: &ComplexMatrix) -> Result<OperatorCoefficients> {
    let two_j = two_j_of_dim(a.dim())?;
    let n = a.dim();
    let j = HalfInt::from_twice(two_j as i32);
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n * n];
    for label in labels(two_j) {
        let w = ((2 * label.l + 1) as f64 / n as f64).sqrt();
        let mut acc = Complex64::new(0.0, 0.0);
        for row in 0..n {
            let m = projection_of_index(two_j, row);
            for col in 0..n {
                let mp = projection_of_index(two_j, col);
                if m.twice() - mp.twice() != 2 * label.m {
                    continue;
                }
                let c = cgc_f64(j, mp, HalfInt::from_int(label.l as i32), HalfInt::from_int(label.m), j, m)?;
                acc += a[(row, col)] * (w * c);
            }
        }
        coeffs[label.canonical_index()] = acc;
    }
    Ok(OperatorCoefficients { two_j, coeffs })
}

/// Generalized Bloch vector: the `L ≥ 1` coefficients of a unit-trace
/// hermitian matrix. `V_00 = 1/sqrt(N)` is implicit.
#[derive(Clone, Debug, PartialEq)]
pub struct BlochVector {
    two_j: u32,
    /// `V_LM` for `L = 1..=2j`, `M = 0..=L`, L-major.
    upper: Vec<Complex64>,
}

#[inline]
fn upper_index(l: u32, m: u32) -> usize {
    // L = 1 starts at 0; each L contributes L+1 entries.
    let l = l as usize;
    (l - 1) * (l + 2) / 2 + m as usize
}

impl BlochVector {
    pub fn zero(two_j: u32) -> Result<Self> {
        if two_j < 1 {
            return invalid("2j must be at least 1");
        }
        let len = upper_index(two_j + 1, 0);
        Ok(BlochVector {
            two_j,
            upper: vec![Complex64::new(0.0, 0.0); len],
        })
    }

    #[inline]
    pub fn two_j(&self) -> u32 {
        self.two_j
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.two_j as usize + 1
    }

    /// Number of independent real parameters, `N² - 1`.
    pub fn real_dim(&self) -> usize {
        self.dim() * self.dim() - 1
    }

    /// `V_LM` for any `1 ≤ L ≤ 2j`, `|M| ≤ L`.
    pub fn get(&self, l: u32, m: i32) -> Complex64 {
        assert!(l >= 1 && l <= self.two_j && m.unsigned_abs() <= l, "label out of range");
        let v = self.upper[upper_index(l, m.unsigned_abs())];
        if m >= 0 {
            v
        } else if m % 2 == 0 {
            v.conj()
        } else {
            -v.conj()
        }
    }

    /// Sets `V_LM` for `M ≥ 0`; `V_{L,-M}` follows. `V_L0` must be real.
    pub fn set(&mut self, l: u32, m: u32, value: Complex64) -> Result<()> {
        if l < 1 || l > self.two_j || m > l {
            return invalid(format!("no component (L={l}, M={m}) for 2j={}", self.two_j));
        }
        if m == 0 && value.im != 0.0 {
            return Err(Error::Validation {
                property: "V_L0 must be real",
                residual: value.im.abs(),
                tolerance: 0.0,
            });
        }
        self.upper[upper_index(l, m)] = value;
        Ok(())
    }

    /// All `(label, V_LM)` with `L ≥ 1` in canonical order.
    pub fn components(&self) -> Vec<(PolOpLabel, Complex64)> {
        labels(self.two_j)
            .into_iter()
            .skip(1)
            .map(|lab| (lab, self.get(lab.l, lab.m)))
            .collect()
    }

    /// Builds a vector from a full `(L, M)` coefficient family, checking the
    /// hermiticity constraint and the reality of `V_L0` within `tol`.
    pub fn from_components(two_j: u32, values: &[(PolOpLabel, Complex64)], tol: f64) -> Result<Self> {
        let mut full = vec![None; (two_j as usize + 1).pow(2)];
        for &(lab, v) in values {
            lab.validate()?;
            if lab.two_j != two_j {
                return Err(Error::DimensionMismatch {
                    expected: two_j as usize + 1,
                    found: lab.dim(),
                });
            }
            if lab.l == 0 {
                return invalid("the L = 0 component is fixed and must not be supplied");
            }
            full[lab.canonical_index()] = Some(v);
        }
        let mut out = Self::zero(two_j)?;
        for lab in labels(two_j).into_iter().skip(1) {
            let Some(v) = full[lab.canonical_index()] else {
                return invalid(format!("missing component {lab}"));
            };
            let mirror = full[PolOpLabel { m: -lab.m, ..lab }.canonical_index()].expect("checked above");
            let phase = if lab.m % 2 == 0 { 1.0 } else { -1.0 };
            let residual = (v.conj() - mirror * phase).norm();
            if residual > tol {
                return Err(Error::Validation {
                    property: "hermiticity constraint V*_LM = (-1)^M V_L,-M",
                    residual,
                    tolerance: tol,
                });
            }
            if lab.m == 0 {
                if v.im.abs() > tol {
                    return Err(Error::Validation {
                        property: "V_L0 must be real",
                        residual: v.im.abs(),
                        tolerance: tol,
                    });
                }
                out.upper[upper_index(lab.l, 0)] = Complex64::new(v.re, 0.0);
            } else if lab.m > 0 {
                out.upper[upper_index(lab.l, lab.m as u32)] = v;
            }
        }
        Ok(out)
    }

    /// Canonical real packing: for each `L`, `V_L0` then `(Re V_LM, Im V_LM)`
    /// for `M = 1..=L`.
    pub fn real_params(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.real_dim());
        for l in 1..=self.two_j {
            out.push(self.upper[upper_index(l, 0)].re);
            for m in 1..=l {
                let v = self.upper[upper_index(l, m)];
                out.push(v.re);
                out.push(v.im);
            }
        }
        out
    }

    pub fn from_real_params(two_j: u32, params: &[f64]) -> Result<Self> {
        let mut out = Self::zero(two_j)?;
        if params.len() != out.real_dim() {
            return invalid(format!(
                "expected {} real parameters for 2j = {two_j}, got {}",
                out.real_dim(),
                params.len()
            ));
        }
        let mut it = params.iter().copied();
        let mut next = || it.next().expect("length checked");
        for l in 1..=two_j {
            out.upper[upper_index(l, 0)] = Complex64::new(next(), 0.0);
            for m in 1..=l {
                let re = next();
                let im = next();
                out.upper[upper_index(l, m)] = Complex64::new(re, im);
            }
        }
        Ok(out)
    }

    /// `V·T = Σ_{L≥1,M} V_LM T_LM`, the traceless part of `ρ`.
    pub fn operator_part(&self) -> Result<ComplexMatrix> {
        let mut out = ComplexMatrix::zeros(self.dim());
        for (lab, v) in self.components() {
            if v != Complex64::new(0.0, 0.0) {
                out.add_scaled(v, &polarization_operator(lab)?);
            }
        }
        Ok(out.hermitian_part())
    }

    /// `|V|² = V·V`.
    pub fn norm_sq(&self) -> f64 {
        self.dot_unchecked(self)
    }

    fn dot_unchecked(&self, other: &BlochVector) -> f64 {
        let mut acc = 0.0;
        for l in 1..=self.two_j {
            let a = self.upper[upper_index(l, 0)];
            let b = other.upper[upper_index(l, 0)];
            acc += a.re * b.re;
            for m in 1..=l {
                let a = self.upper[upper_index(l, m)];
                let b = other.upper[upper_index(l, m)];
                acc += 2.0 * (a * b.conj()).re;
            }
        }
        acc
    }
}

/// `V1·V2 = Σ_{L≥1,M} V1_LM (V2_LM)* = Σ (-1)^M V1_LM V2_{L,-M}`; real for
/// vectors satisfying the hermiticity constraint.
pub fn bloch_dot(v1: &BlochVector, v2: &BlochVector) -> Result<f64> {
    if v1.two_j != v2.two_j {
        return Err(Error::DimensionMismatch {
            expected: v1.dim(),
            found: v2.dim(),
        });
    }
    Ok(v1.dot_unchecked(v2))
}

/// Checks hermiticity and unit trace of a candidate density matrix.
pub fn validate_density(rho: &ComplexMatrix, tol: f64) -> Result<()> {
    if rho.dim() < 2 {
        return invalid(format!("density matrix dimension {} is below 2", rho.dim()));
    }
    let herm = rho.hermiticity_residual();
    if herm > tol {
        return Err(Error::Validation {
            property: "hermiticity",
            residual: herm,
            tolerance: tol,
        });
    }
    let tr = (rho.trace() - Complex64::new(1.0, 0.0)).norm();
    if tr > tol {
        return Err(Error::Validation {
            property: "unit trace",
            residual: tr,
            tolerance: tol,
        });
    }
    Ok(())
}

/// `V_LM = Tr{T†_LM ρ}` after validating `ρ` within `tol`. The hermitian part
/// of `ρ` is projected, so the result satisfies the constraint exactly.
pub fn density_to_bloch(rho: &ComplexMatrix, tol: f64) -> Result<BlochVector> {
    validate_density(rho, tol)?;
    let two_j = (rho.dim() - 1) as u32;
    let herm = rho.hermitian_part();
    let mut out = BlochVector::zero(two_j)?;
    for l in 1..=two_j {
        for m in 0..=l {
            let t = polarization_operator(PolOpLabel { two_j, l, m: m as i32 })?;
            let mut v = t.hs_inner(&herm);
            if m == 0 {
                v.im = 0.0;
            }
            out.upper[upper_index(l, m)] = v;
        }
    }
    Ok(out)
}

/// `ρ = 1/N + V·T`. Hermitian and unit-trace; positivity is not implied.
pub fn bloch_to_density(v: &BlochVector) -> Result<ComplexMatrix> {
    let n = v.dim();
    let mut rho = v.operator_part()?;
    for i in 0..n {
        rho[(i, i)] += Complex64::new(1.0 / n as f64, 0.0);
    }
    Ok(rho)
}

/// Hermitian observables `Q_LM = T_LM + T†_LM` and `Q̃_LM = i(T_LM - T†_LM)`,
/// with `V_LM = (<Q> + i<Q̃>)/2`.
pub fn observables(label: PolOpLabel) -> Result<(ComplexMatrix, ComplexMatrix)> {
    label.validate()?;
    if label.l < 1 {
        return invalid("observables are defined for L >= 1");
    }
    let t = polarization_operator(label)?;
    let td = t.adjoint();
    let q = &t + &td;
    let qt = (&t - &td).scale(Complex64::new(0.0, 1.0));
    Ok((q, qt))
}

/// `Tr{ρ A}`.
pub fn expectation(rho: &ComplexMatrix, a: &ComplexMatrix) -> Complex64 {
    rho.trace_of_product(a)
}

/// Wire form `{"two_j": 2j, "params": [N²-1 reals]}`.
#[derive(Serialize, Deserialize)]
struct BlochWire {
    two_j: u32,
    params: Vec<f64>,
}

impl Serialize for BlochVector {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        BlochWire {
            two_j: self.two_j,
            params: self.real_params(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BlochVector {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = BlochWire::deserialize(deserializer)?;
        BlochVector::from_real_params(wire.two_j, &wire.params).map_err(serde::de::Error::custom)
    }
}
