//! Polarization operators `T_LM(j)` and their algebra.
//!
//! `T_LM(j) = sqrt((2L+1)/(2j+1)) Σ_{m,m'} <j m'; L M | j m> |j m><j m'|`
//!
//! The set `{T_LM : 0 ≤ L ≤ 2j, -L ≤ M ≤ L}` is an orthonormal basis of the
//! `(2j+1)×(2j+1)` matrices under the Hilbert-Schmidt product.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, LazyLock, RwLock};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::angular::{cgc, cgc_f64, wigner6j, HalfInt, SignedSqrtRational};
use crate::error::{invalid, Error, Result};
use crate::matrix::ComplexMatrix;

/// Label `(2j, L, M)` of one polarization operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PolOpLabel {
    pub two_j: u32,
    #[serde(rename = "L")]
    pub l: u32,
    #[serde(rename = "M")]
    pub m: i32,
}

impl PolOpLabel {
    pub fn new(two_j: u32, l: u32, m: i32) -> Result<Self> {
        let label = PolOpLabel { two_j, l, m };
        label.validate()?;
        Ok(label)
    }

    pub fn validate(&self) -> Result<()> {
        if self.two_j < 1 {
            return invalid("2j must be at least 1");
        }
        if self.l > self.two_j {
            return invalid(format!("L = {} exceeds 2j = {}", self.l, self.two_j));
        }
        if self.m.unsigned_abs() > self.l {
            return invalid(format!("|M| = {} exceeds L = {}", self.m.abs(), self.l));
        }
        Ok(())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.two_j as usize + 1
    }

    /// Position in the canonical (L ascending, M ascending) ordering, counting `T_00` as 0.
    #[inline]
    pub fn canonical_index(&self) -> usize {
        let l = self.l as usize;
        l * l + (self.m + self.l as i32) as usize
    }

    fn j(&self) -> HalfInt {
        HalfInt::from_twice(self.two_j as i32)
    }

    fn l_half(&self) -> HalfInt {
        HalfInt::from_int(self.l as i32)
    }

    fn m_half(&self) -> HalfInt {
        HalfInt::from_int(self.m)
    }
}

impl fmt::Display for PolOpLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T[{},{}](j={})", self.l, self.m, HalfInt::from_twice(self.two_j as i32))
    }
}

/// All labels for a given `2j` in canonical order.
pub fn labels(two_j: u32) -> Vec<PolOpLabel> {
    (0..=two_j)
        .flat_map(|l| (-(l as i32)..=l as i32).map(move |m| PolOpLabel { two_j, l, m }))
        .collect()
}

/// Projection `m` carried by row/column `i` of a `(2j+1)`-dimensional matrix.
#[inline]
pub fn projection_of_index(two_j: u32, i: usize) -> HalfInt {
    HalfInt::from_twice(two_j as i32 - 2 * i as i32)
}

/// Matrix element list `(row, col, exact value)` of an operator, prefactor included.
fn exact_entries(label: PolOpLabel) -> Result<Vec<(usize, usize, SignedSqrtRational)>> {
    label.validate()?;
    let n = label.dim();
    let prefactor = SignedSqrtRational::new(
        1,
        num_rational::BigRational::new((2 * label.l + 1).into(), (label.two_j + 1).into()),
    )?;
    let j = label.j();
    let mut out = Vec::new();
    for row in 0..n {
        let m = projection_of_index(label.two_j, row);
        for col in 0..n {
            let mp = projection_of_index(label.two_j, col);
            if m != mp + label.m_half() {
                continue;
            }
            let c = cgc(j, mp, label.l_half(), label.m_half(), j, m)?;
            if !c.is_zero() {
                out.push((row, col, &prefactor * &c));
            }
        }
    }
    Ok(out)
}

static BASIS_CACHE: LazyLock<RwLock<HashMap<u32, Arc<Vec<ComplexMatrix>>>>> =
    LazyLock::new(|| RwLock::new(HashMap::new()));

/// The matrix of `T_LM(j)`. Entries are real in the Condon-Shortley convention.
pub fn polarization_operator(label: PolOpLabel) -> Result<ComplexMatrix> {
    label.validate()?;
    Ok(cached_basis(label.two_j)?[label.canonical_index()].clone())
}

/// All operators for `2j` in canonical order, built once per process.
fn cached_basis(two_j: u32) -> Result<Arc<Vec<ComplexMatrix>>> {
    if let Some(b) = BASIS_CACHE.read().expect("basis cache poisoned").get(&two_j) {
        return Ok(Arc::clone(b));
    }
    let built = Arc::new(
        labels(two_j)
            .into_iter()
            .map(build_operator)
            .collect::<Result<Vec<_>>>()?,
    );
    let mut cache = BASIS_CACHE.write().expect("basis cache poisoned");
    Ok(Arc::clone(cache.entry(two_j).or_insert(built)))
}

fn build_operator(label: PolOpLabel) -> Result<ComplexMatrix> {
    let mut mat = ComplexMatrix::zeros(label.dim());
    for (row, col, value) in exact_entries(label)? {
        mat[(row, col)] = Complex64::new(value.to_f64(), 0.0);
    }
    debug_assert!(mat.is_real(0.0));
    Ok(mat)
}

/// Every operator for `2j`, in canonical order.
pub fn basis_set(two_j: u32) -> Result<Vec<(PolOpLabel, ComplexMatrix)>> {
    if two_j < 1 {
        return invalid("2j must be at least 1");
    }
    labels(two_j)
        .into_iter()
        .map(|l| polarization_operator(l).map(|m| (l, m)))
        .collect()
}

/// `T†_LM = (-1)^M T_{L,-M}`: returns the phase and the conjugate label.
pub fn adjoint_label(label: PolOpLabel) -> (i8, PolOpLabel) {
    let phase = if label.m % 2 == 0 { 1 } else { -1 };
    (
        phase,
        PolOpLabel {
            m: -label.m,
            ..label
        },
    )
}

/// A linear combination of polarization operators sharing one `2j`.
pub type Expansion = Vec<(Complex64, PolOpLabel)>;

fn check_same_j(a: PolOpLabel, b: PolOpLabel) -> Result<()> {
    a.validate()?;
    b.validate()?;
    if a.two_j != b.two_j {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(())
}

/// Coefficient of `T_{L3, M1+M2}` in `T_{L1M1} T_{L2M2}`:
/// `(-1)^(2j+L3) sqrt((2L1+1)(2L2+1)) {L1 L2 L3; j j j} <L1 M1; L2 M2 | L3 M3>`.
fn product_coefficient(a: PolOpLabel, b: PolOpLabel, l3: u32) -> Result<SignedSqrtRational> {
    let j = a.j();
    let l3h = HalfInt::from_int(l3 as i32);
    let sixj = wigner6j(a.l_half(), b.l_half(), l3h, j, j, j)?;
    if sixj.is_zero() {
        return Ok(SignedSqrtRational::zero());
    }
    let c = cgc(a.l_half(), a.m_half(), b.l_half(), b.m_half(), l3h, a.m_half() + b.m_half())?;
    if c.is_zero() {
        return Ok(SignedSqrtRational::zero());
    }
    let phase = if (a.two_j + l3).is_multiple_of(2) { 1 } else { -1 };
    let norm = SignedSqrtRational::new(
        phase,
        num_rational::BigRational::from_integer(((2 * a.l + 1) * (2 * b.l + 1)).into()),
    )?;
    Ok(&(&norm * &sixj) * &c)
}

fn product_terms(a: PolOpLabel, b: PolOpLabel) -> Result<Vec<(u32, SignedSqrtRational)>> {
    check_same_j(a, b)?;
    let m3 = a.m + b.m;
    let lo = a.l.abs_diff(b.l).max(m3.unsigned_abs());
    let hi = (a.l + b.l).min(a.two_j);
    let mut out = Vec::new();
    for l3 in lo..=hi {
        let c = product_coefficient(a, b, l3)?;
        if !c.is_zero() {
            out.push((l3, c));
        }
    }
    Ok(out)
}

/// `T_a T_b` expanded in the basis; only nonzero terms are returned.
pub fn product_expansion(a: PolOpLabel, b: PolOpLabel) -> Result<Expansion> {
    let m3 = a.m + b.m;
    Ok(product_terms(a, b)?
        .into_iter()
        .map(|(l3, c)| {
            (
                Complex64::new(c.to_f64(), 0.0),
                PolOpLabel { two_j: a.two_j, l: l3, m: m3 },
            )
        })
        .collect())
}

/// `[T_a, T_b]` (or the anticommutator when `anti`) expanded in the basis.
///
/// Commutator terms have `L1+L2+L3` odd, anticommutator terms even.
pub fn commutator_expansion(a: PolOpLabel, b: PolOpLabel, anti: bool) -> Result<Expansion> {
    let m3 = a.m + b.m;
    Ok(product_terms(a, b)?
        .into_iter()
        .filter(|(l3, _)| {
            let even = (a.l + b.l + l3).is_multiple_of(2);
            even == anti
        })
        .map(|(l3, c)| {
            (
                Complex64::new(2.0 * c.to_f64(), 0.0),
                PolOpLabel { two_j: a.two_j, l: l3, m: m3 },
            )
        })
        .collect())
}

/// Sums an expansion back into a matrix.
pub fn expansion_matrix(two_j: u32, terms: &[(Complex64, PolOpLabel)]) -> Result<ComplexMatrix> {
    let mut out = ComplexMatrix::zeros(two_j as usize + 1);
    for &(c, label) in terms {
        if label.two_j != two_j {
            return Err(Error::DimensionMismatch {
                expected: two_j as usize + 1,
                found: label.dim(),
            });
        }
        out.add_scaled(c, &polarization_operator(label)?);
    }
    Ok(out)
}

fn check_common_j(labels: &[PolOpLabel]) -> Result<u32> {
    let first = match labels.first() {
        Some(l) => *l,
        None => return invalid("multi-trace needs at least one operator"),
    };
    for &l in labels {
        check_same_j(first, l)?;
    }
    Ok(first.two_j)
}

/// `Tr{T_1 T_2 … T_n}` from the closed-form sum over chains of
/// Clebsch-Gordan coefficients:
///
/// `Π_k sqrt((2L_k+1)/(2j+1)) Σ_m Π_k <L_k M_k; j m+μ_{k-1} | j m+μ_k>`
///
/// with partial sums `μ_k = M_1 + … + M_k`, `μ_0 = 0`. Zero unless `Σ M_k = 0`.
pub fn multi_trace(labels: &[PolOpLabel]) -> Result<Complex64> {
    let two_j = check_common_j(labels)?;
    if labels.iter().map(|l| l.m).sum::<i32>() != 0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let j = HalfInt::from_twice(two_j as i32);
    let prefactor: f64 = labels
        .iter()
        .map(|l| ((2 * l.l + 1) as f64 / (two_j + 1) as f64).sqrt())
        .product();

    let mut total = 0.0;
    'chain: for m in j.projections() {
        let mut current = m;
        let mut product = 1.0;
        for label in labels {
            let next = current + label.m_half();
            if !next.is_projection_of(j) {
                continue 'chain;
            }
            let c = cgc_f64(label.l_half(), label.m_half(), j, current, j, next)?;
            if c == 0.0 {
                continue 'chain;
            }
            product *= c;
            current = next;
        }
        total += product;
    }
    Ok(Complex64::new(prefactor * total, 0.0))
}

/// `Tr{T_1 T_2 … T_n}` by explicit matrix multiplication.
pub fn multi_trace_direct(labels: &[PolOpLabel]) -> Result<Complex64> {
    let two_j = check_common_j(labels)?;
    let mut acc = ComplexMatrix::identity(two_j as usize + 1);
    for &l in labels {
        acc = acc.matmul(&polarization_operator(l)?);
    }
    Ok(acc.trace())
}

/// Hand-tabulated operator matrices for `2j = 1` and `2j = 2`, written out
/// independently of the Clebsch-Gordan machinery. Used as a convention fixture.
pub fn tabulated_basis(two_j: u32) -> Option<Vec<(PolOpLabel, ComplexMatrix)>> {
    let s2 = std::f64::consts::FRAC_1_SQRT_2;
    let s3 = 1.0 / 3f64.sqrt();
    let s6 = 1.0 / 6f64.sqrt();
    let lab = |l, m| PolOpLabel { two_j, l, m };
    let real = |rows: &[&[f64]]| ComplexMatrix::from_real_rows(rows).expect("square literal");
    match two_j {
        1 => Some(vec![
            (lab(0, 0), real(&[&[s2, 0.0], &[0.0, s2]])),
            (lab(1, -1), real(&[&[0.0, 0.0], &[1.0, 0.0]])),
            (lab(1, 0), real(&[&[s2, 0.0], &[0.0, -s2]])),
            (lab(1, 1), real(&[&[0.0, -1.0], &[0.0, 0.0]])),
        ]),
        2 => Some(vec![
            (lab(0, 0), real(&[&[s3, 0.0, 0.0], &[0.0, s3, 0.0], &[0.0, 0.0, s3]])),
            (lab(1, -1), real(&[&[0.0, 0.0, 0.0], &[s2, 0.0, 0.0], &[0.0, s2, 0.0]])),
            (lab(1, 0), real(&[&[s2, 0.0, 0.0], &[0.0, 0.0, 0.0], &[0.0, 0.0, -s2]])),
            (lab(1, 1), real(&[&[0.0, -s2, 0.0], &[0.0, 0.0, -s2], &[0.0, 0.0, 0.0]])),
            (lab(2, -2), real(&[&[0.0, 0.0, 0.0], &[0.0, 0.0, 0.0], &[1.0, 0.0, 0.0]])),
            (lab(2, -1), real(&[&[0.0, 0.0, 0.0], &[s2, 0.0, 0.0], &[0.0, -s2, 0.0]])),
            (lab(2, 0), real(&[&[s6, 0.0, 0.0], &[0.0, -2.0 * s6, 0.0], &[0.0, 0.0, s6]])),
            (lab(2, 1), real(&[&[0.0, -s2, 0.0], &[0.0, 0.0, s2], &[0.0, 0.0, 0.0]])),
            (lab(2, 2), real(&[&[0.0, 0.0, 1.0], &[0.0, 0.0, 0.0], &[0.0, 0.0, 0.0]])),
        ]),
        _ => None,
    }
}
