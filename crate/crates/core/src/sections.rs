//! Qubit spheroid and two-parameter cross-sections of the qutrit state space.
//!
//! A qutrit Bloch vector has eight real parameters
//! `V_10 = x`, `V_11 = a + ib`, `V_20 = y`, `V_21 = α₁ + iβ₁`, `V_22 = α₂ + iβ₂`.
//! Positivity reduces to `|V|² ≤ 2/3` and `F = 1/9 - |V|²/2 + T_3 ≥ 0`, with
//! `F = 3 det ρ`. Fixing all but two parameters at zero gives one of seven
//! section types.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bloch::{bloch_to_density, BlochVector};
use crate::contour::{join_segments, marching_squares, Point};
use crate::error::{invalid, Error, Result};
use crate::positivity::check_positivity;

/// Largest resolution at which [`scan`] re-checks every point through the
/// full positivity engine.
pub const CROSS_CHECK_MAX_RESOLUTION: usize = 201;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Param {
    X,
    A,
    B,
    Y,
    Alpha1,
    Beta1,
    Alpha2,
    Beta2,
}

impl Param {
    /// Packing order of [`QutritParams::to_array`].
    pub const ALL: [Param; 8] = [
        Param::X,
        Param::A,
        Param::B,
        Param::Y,
        Param::Alpha1,
        Param::Beta1,
        Param::Alpha2,
        Param::Beta2,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Param::X => "x",
            Param::A => "a",
            Param::B => "b",
            Param::Y => "y",
            Param::Alpha1 => "alpha1",
            Param::Beta1 => "beta1",
            Param::Alpha2 => "alpha2",
            Param::Beta2 => "beta2",
        }
    }

    /// Weight of the parameter in `|V|²`.
    fn norm_weight(self) -> f64 {
        match self {
            Param::X | Param::Y => 1.0,
            _ => 2.0,
        }
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Param {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let p = match s.trim() {
            "x" => Param::X,
            "a" => Param::A,
            "b" => Param::B,
            "y" => Param::Y,
            "alpha1" | "α1" | "α₁" => Param::Alpha1,
            "beta1" | "β1" | "β₁" => Param::Beta1,
            "alpha2" | "α2" | "α₂" => Param::Alpha2,
            "beta2" | "β2" | "β₂" => Param::Beta2,
            other => return invalid(format!("unknown qutrit parameter {other:?}")),
        };
        Ok(p)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct QutritParams {
    pub x: f64,
    pub a: f64,
    pub b: f64,
    pub y: f64,
    pub alpha1: f64,
    pub beta1: f64,
    pub alpha2: f64,
    pub beta2: f64,
}

impl QutritParams {
    pub fn to_array(&self) -> [f64; 8] {
        [
            self.x,
            self.a,
            self.b,
            self.y,
            self.alpha1,
            self.beta1,
            self.alpha2,
            self.beta2,
        ]
    }

    pub fn from_array(p: [f64; 8]) -> Self {
        let [x, a, b, y, alpha1, beta1, alpha2, beta2] = p;
        Self { x, a, b, y, alpha1, beta1, alpha2, beta2 }
    }

    pub fn get(&self, p: Param) -> f64 {
        self.to_array()[p.index()]
    }

    pub fn set(&mut self, p: Param, value: f64) {
        let mut arr = self.to_array();
        arr[p.index()] = value;
        *self = Self::from_array(arr);
    }

    pub fn to_bloch(&self) -> BlochVector {
        BlochVector::from_real_params(2, &self.to_array()).expect("eight parameters for 2j = 2")
    }

    pub fn from_bloch(v: &BlochVector) -> Result<Self> {
        if v.two_j() != 2 {
            return Err(Error::DimensionMismatch { expected: 3, found: v.dim() });
        }
        let p = v.real_params();
        Ok(Self::from_array(p.try_into().expect("qutrit has eight parameters")))
    }
}

/// `|V|² = x² + y² + 2(a² + b² + α₁² + β₁² + α₂² + β₂²)`.
pub fn qutrit_norm_sq(p: &QutritParams) -> f64 {
    p.x * p.x
        + p.y * p.y
        + 2.0
            * (p.a * p.a
                + p.b * p.b
                + p.alpha1 * p.alpha1
                + p.beta1 * p.beta1
                + p.alpha2 * p.alpha2
                + p.beta2 * p.beta2)
}

/// Closed form of `T_3 = Tr{(V·T)³}`.
pub fn qutrit_t3(p: &QutritParams) -> f64 {
    let QutritParams { x, a, b, y, alpha1: a1, beta1: b1, alpha2: a2, beta2: b2 } = *p;
    (3.0 * x * x * y - y * y * y) / 6f64.sqrt()
        + 3.0 * 2f64.sqrt() * x * (a * a1 + b * b1)
        + (1.5f64).sqrt() * y * (2.0 * a2 * a2 + 2.0 * b2 * b2 - a * a - b * b - a1 * a1 - b1 * b1)
        + 3.0 * (a2 * (a * a - b * b - a1 * a1 + b1 * b1) + 2.0 * b2 * (a * b - a1 * b1))
}

/// `F = 1/9 - |V|²/2 + T_3`.
pub fn qutrit_f(p: &QutritParams) -> f64 {
    1.0 / 9.0 - qutrit_norm_sq(p) / 2.0 + qutrit_t3(p)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SectionType {
    I,
    II,
    III,
    IV,
    V,
    VI,
    VII,
}

use Param::*;

const MEMBERS_I: &[(Param, Param)] = &[(X, Y)];
const MEMBERS_II: &[(Param, Param)] = &[(Y, Alpha2), (Y, Beta2)];
const MEMBERS_III: &[(Param, Param)] = &[(A, Alpha2), (Beta1, Alpha2)];
const MEMBERS_IV: &[(Param, Param)] = &[(B, Alpha2), (Alpha1, Alpha2)];
const MEMBERS_V: &[(Param, Param)] = &[(Y, A), (Y, B), (Y, Alpha1), (Y, Beta1)];
const MEMBERS_VI: &[(Param, Param)] = &[
    (A, B),
    (A, Alpha1),
    (A, Beta1),
    (A, Beta2),
    (B, Alpha1),
    (B, Beta1),
    (B, Beta2),
    (Alpha1, Beta1),
    (Alpha1, Beta2),
    (Beta1, Beta2),
    (Alpha2, Beta2),
];
const MEMBERS_VII: &[(Param, Param)] =
    &[(X, A), (X, B), (X, Alpha1), (X, Beta1), (X, Alpha2), (X, Beta2)];

impl SectionType {
    pub const ALL: [SectionType; 7] = [
        SectionType::I,
        SectionType::II,
        SectionType::III,
        SectionType::IV,
        SectionType::V,
        SectionType::VI,
        SectionType::VII,
    ];

    /// Parameter pairs of this type, each ordered as `(s, t)`.
    pub fn members(self) -> &'static [(Param, Param)] {
        match self {
            SectionType::I => MEMBERS_I,
            SectionType::II => MEMBERS_II,
            SectionType::III => MEMBERS_III,
            SectionType::IV => MEMBERS_IV,
            SectionType::V => MEMBERS_V,
            SectionType::VI => MEMBERS_VI,
            SectionType::VII => MEMBERS_VII,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SectionType::I => "I",
            SectionType::II => "II",
            SectionType::III => "III",
            SectionType::IV => "IV",
            SectionType::V => "V",
            SectionType::VI => "VI",
            SectionType::VII => "VII",
        }
    }

    /// Representative section: the first listed pair.
    pub fn section(self) -> Section {
        let (s, t) = self.members()[0];
        Section { kind: self, s, t }
    }
}

impl fmt::Display for SectionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SectionType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SectionType::ALL
            .into_iter()
            .find(|t| t.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown section type {s:?}")))
    }
}

/// A pair of free parameters in canonical `(s, t)` order with its type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Section {
    #[serde(rename = "type")]
    pub kind: SectionType,
    pub s: Param,
    pub t: Param,
}

impl Section {
    /// Looks up an unordered pair; the result is oriented as in the member table.
    pub fn from_pair(p: Param, q: Param) -> Result<Self> {
        if p == q {
            return invalid(format!("section needs two distinct parameters, got {p} twice"));
        }
        for kind in SectionType::ALL {
            for &(s, t) in kind.members() {
                if (s, t) == (p, q) || (s, t) == (q, p) {
                    return Ok(Section { kind, s, t });
                }
            }
        }
        unreachable!("the member table covers all 28 pairs")
    }

    /// Parses `"x,y"` or a type name such as `"VI"`.
    pub fn parse(text: &str) -> Result<Self> {
        match text.split_once(',') {
            Some((p, q)) => Self::from_pair(p.parse()?, q.parse()?),
            None => Ok(text.parse::<SectionType>()?.section()),
        }
    }

    pub fn embed(&self, s: f64, t: f64) -> QutritParams {
        let mut p = QutritParams::default();
        p.set(self.s, s);
        p.set(self.t, t);
        p
    }

    pub fn norm_sq(&self, s: f64, t: f64) -> f64 {
        self.s.norm_weight() * s * s + self.t.norm_weight() * t * t
    }
}

pub fn section_members(p: Param, q: Param) -> Result<SectionType> {
    Section::from_pair(p, q).map(|s| s.kind)
}

/// `F` on a section of the given type, `(s, t)` as in the member table.
pub fn section_f(kind: SectionType, s: f64, t: f64) -> f64 {
    let r6 = 6f64.sqrt();
    let base = 1.0 / 9.0;
    match kind {
        SectionType::I => base - (s * s + t * t) / 2.0 + (3.0 * s * s * t - t * t * t) / r6,
        SectionType::II => base - s * s / 2.0 - t * t + (6.0 * t * t * s - s * s * s) / r6,
        SectionType::III => base - s * s - t * t + 3.0 * s * s * t,
        SectionType::IV => base - s * s - t * t - 3.0 * s * s * t,
        SectionType::V => base - s * s / 2.0 - t * t - (3.0 * t * t * s + s * s * s) / r6,
        SectionType::VI => base - s * s - t * t,
        SectionType::VII => base - s * s / 2.0 - t * t,
    }
}

/// Pure states in the section plane, as `(s, t)`.
pub fn pure_states(kind: SectionType) -> Vec<Point> {
    let r6 = 6f64.sqrt();
    let vertex = -(2.0f64 / 3.0).sqrt();
    let third = 2f64.sqrt() / 3.0;
    match kind {
        SectionType::I => vec![(FRAC_1_SQRT_2, 1.0 / r6), (-FRAC_1_SQRT_2, 1.0 / r6), (0.0, vertex)],
        SectionType::II => vec![(1.0 / r6, 0.5), (1.0 / r6, -0.5), (vertex, 0.0)],
        SectionType::III => vec![(third, 1.0 / 3.0), (-third, 1.0 / 3.0)],
        SectionType::IV => vec![(third, -1.0 / 3.0), (-third, -1.0 / 3.0)],
        SectionType::V => vec![(vertex, 0.0)],
        SectionType::VI | SectionType::VII => vec![],
    }
}

/// Point of the qubit pure-state spheroid: `(Re V_11, Im V_11, V_10)`.
pub fn qubit_surface(t: f64, u: f64) -> Result<(f64, f64, f64)> {
    if !(0.0..=PI).contains(&t) {
        return invalid(format!("polar parameter t = {t} outside [0, π]"));
    }
    if !(0.0..=2.0 * PI).contains(&u) {
        return invalid(format!("azimuthal parameter u = {u} outside [0, 2π]"));
    }
    Ok((t.sin() / 2.0 * u.cos(), t.sin() / 2.0 * u.sin(), t.cos() * FRAC_1_SQRT_2))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[repr(u8)]
pub enum PointClass {
    Allowed = 0,
    TraceBoundOnly = 1,
    Outside = 2,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub s: f64,
    pub t: f64,
    pub norm_sq: f64,
    #[serde(rename = "F")]
    pub f: f64,
    pub class: PointClass,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub section: Section,
    pub resolution: usize,
    pub tolerance: f64,
    /// Row-major over `t`, then `s`: point `(i, j)` is at `j * resolution + i`.
    #[serde(skip)]
    pub points: Vec<ScanPoint>,
    pub boundary: Vec<Vec<Point>>,
    pub pure_states: Vec<Point>,
    /// Whether every point was re-checked with the positivity engine.
    pub cross_checked: bool,
}

impl ScanResult {
    pub fn step(&self) -> f64 {
        2.0 / (self.resolution - 1) as f64
    }

    pub fn count(&self, class: PointClass) -> usize {
        self.points.iter().filter(|p| p.class == class).count()
    }
}

pub fn grid_axis(resolution: usize) -> Vec<f64> {
    (0..resolution)
        .map(|i| -1.0 + 2.0 * i as f64 / (resolution - 1) as f64)
        .collect()
}

pub fn classify(norm_sq: f64, f: f64, tol: f64) -> PointClass {
    if norm_sq > 2.0 / 3.0 + tol {
        PointClass::Outside
    } else if f < -tol {
        PointClass::TraceBoundOnly
    } else {
        PointClass::Allowed
    }
}

/// Samples the section on a `resolution × resolution` grid over `[-1, 1]²`.
pub fn scan(section: Section, resolution: usize, tol: f64) -> Result<ScanResult> {
    if resolution < 3 {
        return invalid(format!("scan resolution must be at least 3, got {resolution}"));
    }
    let axis = grid_axis(resolution);
    let rows: Vec<Vec<ScanPoint>> = axis
        .par_iter()
        .map(|&t| {
            axis.iter()
                .map(|&s| {
                    let norm_sq = section.norm_sq(s, t);
                    let f = section_f(section.kind, s, t);
                    ScanPoint { s, t, norm_sq, f, class: classify(norm_sq, f, tol) }
                })
                .collect()
        })
        .collect();
    let points: Vec<ScanPoint> = rows.into_iter().flatten().collect();

    let cross_checked = resolution <= CROSS_CHECK_MAX_RESOLUTION;
    if cross_checked {
        cross_check(section, &points, tol)?;
    }

    // The zero set of min(F, 2/3 - |V|²) is the part of F = 0 that bounds the
    // Allowed region; branches of F = 0 outside the trace ball drop out.
    let values: Vec<f64> = points.iter().map(|p| p.f.min(2.0 / 3.0 - p.norm_sq)).collect();
    let boundary = join_segments(&marching_squares(&axis, &axis, &values));

    Ok(ScanResult {
        section,
        resolution,
        tolerance: tol,
        points,
        boundary,
        pure_states: pure_states(section.kind),
        cross_checked,
    })
}

/// Every grid point must be Allowed exactly when the positivity engine
/// accepts the corresponding density matrix.
fn cross_check(section: Section, points: &[ScanPoint], tol: f64) -> Result<()> {
    points.par_iter().try_for_each(|p| {
        let rho = bloch_to_density(&section.embed(p.s, p.t).to_bloch())?;
        let report = check_positivity(&rho, tol)?;
        let allowed = p.class == PointClass::Allowed;
        if allowed != report.verdict.is_positive() {
            return Err(Error::OracleDisagreement {
                coefficients: report.verdict.name(),
                eigen: if allowed { "Allowed" } else { "excluded" },
            });
        }
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::eigen_oracle;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn membership_partitions_all_pairs() {
        let sizes: Vec<usize> = SectionType::ALL.iter().map(|t| t.members().len()).collect();
        assert_eq!(sizes, vec![1, 2, 2, 2, 4, 11, 6]);
        let mut seen = std::collections::BTreeSet::new();
        for t in SectionType::ALL {
            for &(s, u) in t.members() {
                assert!(seen.insert(if s < u { (s, u) } else { (u, s) }));
            }
        }
        assert_eq!(seen.len(), 28);
    }

    #[test]
    fn lookup_examples() {
        assert_eq!(section_members(X, Y).unwrap(), SectionType::I);
        assert_eq!(section_members(Beta2, Y).unwrap(), SectionType::II);
        assert_eq!(section_members(Alpha2, Beta2).unwrap(), SectionType::VI);
        assert!(Section::parse("q,z").is_err());
        assert!(Section::parse("x,x").is_err());
        assert_eq!(Section::parse("VI").unwrap().kind, SectionType::VI);
        let flipped = Section::parse("alpha2,y").unwrap();
        assert_eq!((flipped.s, flipped.t), (Y, Alpha2));
    }

    #[test]
    fn norm_matches_bloch_dot() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = QutritParams::from_array(std::array::from_fn(|_| rng.random_range(-1.0..1.0)));
        let v = p.to_bloch();
        assert!((qutrit_norm_sq(&p) - v.norm_sq()).abs() < 1e-14);
        assert_eq!(QutritParams::from_bloch(&v).unwrap(), p);
    }

    #[test]
    fn t3_matches_direct_cube() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            let p = QutritParams::from_array(std::array::from_fn(|_| rng.random_range(-1.0..1.0)));
            let vt = p.to_bloch().operator_part().unwrap();
            let direct = vt.matmul(&vt).matmul(&vt).trace().re;
            assert!((qutrit_t3(&p) - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn section_formulas_match_generic() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for kind in SectionType::ALL {
            for &(s_par, t_par) in kind.members() {
                let sec = Section { kind, s: s_par, t: t_par };
                for _ in 0..50 {
                    let (s, t) = (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                    let p = sec.embed(s, t);
                    assert!((section_f(kind, s, t) - qutrit_f(&p)).abs() < 1e-14, "{kind} {s_par},{t_par}");
                    assert!((sec.norm_sq(s, t) - qutrit_norm_sq(&p)).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn f_values() {
        for kind in SectionType::ALL {
            assert_eq!(section_f(kind, 0.0, 0.0), 1.0 / 9.0);
        }
        assert!(section_f(SectionType::I, 0.0, -(2.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!(section_f(SectionType::VI, 1.0 / 3.0, 0.0).abs() < 1e-15);
    }

    #[test]
    fn pure_states_are_rank_one() {
        let counts: Vec<usize> = SectionType::ALL.iter().map(|&t| pure_states(t).len()).collect();
        assert_eq!(counts, vec![3, 3, 2, 2, 1, 0, 0]);
        for kind in SectionType::ALL {
            let sec = kind.section();
            for (s, t) in pure_states(kind) {
                assert!((sec.norm_sq(s, t) - 2.0 / 3.0).abs() < 1e-12);
                let rho = bloch_to_density(&sec.embed(s, t).to_bloch()).unwrap();
                let ev = eigen_oracle(&rho).unwrap();
                assert!((ev[0] - 1.0).abs() < 1e-10 && ev[1].abs() < 1e-10 && ev[2].abs() < 1e-10);
            }
        }
    }

    #[test]
    fn qubit_surface_points() {
        let (re, im, z) = qubit_surface(0.0, 1.3).unwrap();
        assert_eq!((re, im), (0.0, 0.0));
        assert!((z - FRAC_1_SQRT_2).abs() < 1e-15);
        let (re, im, z) = qubit_surface(PI / 2.0, 0.0).unwrap();
        assert!((re - 0.5).abs() < 1e-15 && im == 0.0 && z.abs() < 1e-15);
        assert!(qubit_surface(-0.1, 0.0).is_err());
        assert!(qubit_surface(0.1, 7.0).is_err());
    }

    #[test]
    fn small_scan_cross_checks() {
        for kind in SectionType::ALL {
            let r = scan(kind.section(), 41, 1e-9).unwrap();
            assert!(r.cross_checked);
            assert_eq!(r.points.len(), 41 * 41);
            assert!(r.count(PointClass::Allowed) > 0);
            assert!(r.count(PointClass::TraceBoundOnly) > 0, "{kind}");
            assert!(!r.boundary.is_empty());
        }
        assert!(scan(SectionType::I.section(), 2, 1e-9).is_err());
    }
}
