//! Exact Clebsch-Gordan coefficients and Wigner 6j symbols.
//!
//! Both are evaluated with the Racah single-sum formulas over arbitrary
//! precision integers and returned as signed square roots of rationals.
//! No floating point arithmetic happens until [`SignedSqrtRational::to_f64`].

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{LazyLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{invalid, Result};

/// Angular momentum quantum number stored as twice its value, so `j = 1/2`
/// is `HalfInt::from_twice(1)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInt(i32);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);

    #[inline]
    pub const fn from_twice(twice: i32) -> Self {
        HalfInt(twice)
    }

    #[inline]
    pub const fn from_int(n: i32) -> Self {
        HalfInt(2 * n)
    }

    #[inline]
    pub const fn twice(self) -> i32 {
        self.0
    }

    #[inline]
    pub fn value(self) -> f64 {
        f64::from(self.0) / 2.0
    }

    #[inline]
    pub const fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    /// True if `self` is a valid projection of the magnitude `j`.
    #[inline]
    pub const fn is_projection_of(self, j: HalfInt) -> bool {
        j.0 >= 0 && self.0.abs() <= j.0 && (j.0 - self.0) % 2 == 0
    }

    /// Projections `j, j-1, …, -j` in that order.
    pub fn projections(self) -> impl Iterator<Item = HalfInt> {
        let j = self.0;
        (0..=j.max(-1)).filter(move |_| j >= 0).map(move |i| HalfInt(j - 2 * i))
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 + rhs.0)
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 - rhs.0)
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

/// A number of the form `sign * sqrt(magnitude_squared)` with an exact
/// rational under the root.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignedSqrtRational {
    sign: i8,
    magnitude_squared: BigRational,
}

impl Default for SignedSqrtRational {
    fn default() -> Self {
        Self::zero()
    }
}

impl SignedSqrtRational {
    pub fn zero() -> Self {
        SignedSqrtRational {
            sign: 0,
            magnitude_squared: BigRational::zero(),
        }
    }

    pub fn one() -> Self {
        SignedSqrtRational {
            sign: 1,
            magnitude_squared: BigRational::one(),
        }
    }

    /// `sign * sqrt(magnitude_squared)`. The sign is dropped when the
    /// magnitude is zero.
    pub fn new(sign: i8, magnitude_squared: BigRational) -> Result<Self> {
        if magnitude_squared.is_negative() {
            return invalid("magnitude_squared must be nonnegative");
        }
        if magnitude_squared.is_zero() || sign == 0 {
            return Ok(Self::zero());
        }
        Ok(SignedSqrtRational {
            sign: sign.signum(),
            magnitude_squared,
        })
    }

    /// `c * sqrt(r)` for rational `c` and nonnegative rational `r`.
    fn from_coefficient_and_radicand(c: &BigRational, r: &BigRational) -> Self {
        let sign = if c.is_zero() || r.is_zero() {
            0
        } else if c.is_positive() {
            1
        } else {
            -1
        };
        if sign == 0 {
            return Self::zero();
        }
        SignedSqrtRational {
            sign,
            magnitude_squared: c * c * r,
        }
    }

    #[inline]
    pub fn sign(&self) -> i8 {
        self.sign
    }

    #[inline]
    pub fn magnitude_squared(&self) -> &BigRational {
        &self.magnitude_squared
    }

    /// The square of the value carrying the original sign.
    pub fn signed_square(&self) -> BigRational {
        match self.sign {
            0 => BigRational::zero(),
            s if s > 0 => self.magnitude_squared.clone(),
            _ => -self.magnitude_squared.clone(),
        }
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn to_f64(&self) -> f64 {
        if self.sign == 0 {
            return 0.0;
        }
        let ratio = self.magnitude_squared.to_f64().unwrap_or(f64::NAN);
        let mag = ratio.sqrt();
        f64::from(self.sign) * mag
    }
}

impl Mul for &SignedSqrtRational {
    type Output = SignedSqrtRational;
    fn mul(self, rhs: &SignedSqrtRational) -> SignedSqrtRational {
        if self.is_zero() || rhs.is_zero() {
            return SignedSqrtRational::zero();
        }
        SignedSqrtRational {
            sign: self.sign * rhs.sign,
            magnitude_squared: &self.magnitude_squared * &rhs.magnitude_squared,
        }
    }
}

impl fmt::Display for SignedSqrtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            0 => write!(f, "0"),
            s => {
                let sign = if s < 0 { "-" } else { "" };
                write!(f, "{sign}sqrt({})", self.magnitude_squared)
            }
        }
    }
}

static FACTORIALS: LazyLock<RwLock<Vec<BigInt>>> =
    LazyLock::new(|| RwLock::new(vec![BigInt::one()]));

fn factorial(n: i64) -> BigInt {
    debug_assert!(n >= 0);
    let n = n as usize;
    if let Some(v) = FACTORIALS.read().expect("factorial cache poisoned").get(n) {
        return v.clone();
    }
    let mut table = FACTORIALS.write().expect("factorial cache poisoned");
    while table.len() <= n {
        let k = table.len();
        let next = &table[k - 1] * BigInt::from(k);
        table.push(next);
    }
    table[n].clone()
}

/// Converts a twice-valued expression that is known to be even to an integer.
#[inline]
fn half(twice: i32) -> i64 {
    debug_assert!(twice % 2 == 0, "odd twice-value {twice}");
    i64::from(twice / 2)
}

fn check_magnitude(name: &str, j: HalfInt) -> Result<()> {
    if j.twice() < 0 {
        return invalid(format!("{name} = {j} is not a valid angular momentum magnitude"));
    }
    Ok(())
}

fn check_pair(name: &str, j: HalfInt, m: HalfInt) -> Result<()> {
    check_magnitude(name, j)?;
    if (j.twice() - m.twice()) % 2 != 0 {
        return invalid(format!(
            "projection {m} does not match the parity of magnitude {name} = {j}"
        ));
    }
    Ok(())
}

/// Triangle rule including integrality of the perimeter.
#[inline]
fn triangle(a: i32, b: i32, c: i32) -> bool {
    (a + b + c) % 2 == 0 && c <= a + b && c >= (a - b).abs()
}

type CgcKey = [i32; 6];

static CGC_CACHE: LazyLock<RwLock<HashMap<CgcKey, SignedSqrtRational>>> =
    LazyLock::new(|| RwLock::new(HashMap::new()));
static SIXJ_CACHE: LazyLock<RwLock<HashMap<CgcKey, SignedSqrtRational>>> =
    LazyLock::new(|| RwLock::new(HashMap::new()));

/// Clebsch-Gordan coefficient `<j1 m1; j2 m2 | J M>` in the Condon-Shortley
/// phase convention.
///
/// Returns an exact zero when a selection rule fails and an error when a
/// projection does not have the parity of its magnitude.
pub fn cgc(
    j1: HalfInt,
    m1: HalfInt,
    j2: HalfInt,
    m2: HalfInt,
    j: HalfInt,
    m: HalfInt,
) -> Result<SignedSqrtRational> {
    check_pair("j1", j1, m1)?;
    check_pair("j2", j2, m2)?;
    check_pair("J", j, m)?;

    let key = [j1.0, m1.0, j2.0, m2.0, j.0, m.0];
    if let Some(v) = CGC_CACHE.read().expect("cgc cache poisoned").get(&key) {
        return Ok(v.clone());
    }
    let value = cgc_racah(j1.0, m1.0, j2.0, m2.0, j.0, m.0);
    CGC_CACHE
        .write()
        .expect("cgc cache poisoned")
        .insert(key, value.clone());
    Ok(value)
}

fn cgc_racah(tj1: i32, tm1: i32, tj2: i32, tm2: i32, tj: i32, tm: i32) -> SignedSqrtRational {
    if tm != tm1 + tm2
        || tm1.abs() > tj1
        || tm2.abs() > tj2
        || tm.abs() > tj
        || !triangle(tj1, tj2, tj)
    {
        return SignedSqrtRational::zero();
    }

    let a = half(tj1 + tj2 - tj);
    let b = half(tj1 - tm1);
    let c = half(tj2 + tm2);
    let d = half(tj - tj2 + tm1);
    let e = half(tj - tj1 - tm2);

    let kmin = 0.max(-d).max(-e);
    let kmax = a.min(b).min(c);

    let mut sum = BigRational::zero();
    for k in kmin..=kmax {
        let den = factorial(k)
            * factorial(a - k)
            * factorial(b - k)
            * factorial(c - k)
            * factorial(d + k)
            * factorial(e + k);
        let term = BigRational::new(BigInt::one(), den);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }

    let triangle_num = BigInt::from(tj + 1)
        * factorial(half(tj + tj1 - tj2))
        * factorial(half(tj - tj1 + tj2))
        * factorial(a);
    let triangle_den = factorial(half(tj1 + tj2 + tj) + 1);
    let projections = factorial(half(tj + tm))
        * factorial(half(tj - tm))
        * factorial(b)
        * factorial(half(tj1 + tm1))
        * factorial(half(tj2 - tm2))
        * factorial(c);
    let radicand = BigRational::new(triangle_num * projections, triangle_den);

    SignedSqrtRational::from_coefficient_and_radicand(&sum, &radicand)
}

fn triangle_delta_squared(a: i32, b: i32, c: i32) -> BigRational {
    BigRational::new(
        factorial(half(a + b - c)) * factorial(half(a - b + c)) * factorial(half(-a + b + c)),
        factorial(half(a + b + c) + 1),
    )
}

/// Wigner 6j symbol `{a b c; d e f}`, exact.
pub fn wigner6j(
    a: HalfInt,
    b: HalfInt,
    c: HalfInt,
    d: HalfInt,
    e: HalfInt,
    f: HalfInt,
) -> Result<SignedSqrtRational> {
    for (name, x) in [("a", a), ("b", b), ("c", c), ("d", d), ("e", e), ("f", f)] {
        check_magnitude(name, x)?;
    }
    let key = [a.0, b.0, c.0, d.0, e.0, f.0];
    if let Some(v) = SIXJ_CACHE.read().expect("6j cache poisoned").get(&key) {
        return Ok(v.clone());
    }
    let value = sixj_racah(a.0, b.0, c.0, d.0, e.0, f.0);
    SIXJ_CACHE
        .write()
        .expect("6j cache poisoned")
        .insert(key, value.clone());
    Ok(value)
}

fn sixj_racah(a: i32, b: i32, c: i32, d: i32, e: i32, f: i32) -> SignedSqrtRational {
    let triads = [(a, b, c), (a, e, f), (d, b, f), (d, e, c)];
    if !triads.iter().all(|&(x, y, z)| triangle(x, y, z)) {
        return SignedSqrtRational::zero();
    }

    let alphas = triads.map(|(x, y, z)| half(x + y + z));
    let betas = [half(a + b + d + e), half(a + c + d + f), half(b + c + e + f)];
    let tmin = *alphas.iter().max().expect("four triads");
    let tmax = *betas.iter().min().expect("three sums");

    let mut sum = BigRational::zero();
    for t in tmin..=tmax {
        let mut den = BigInt::one();
        for alpha in alphas {
            den *= factorial(t - alpha);
        }
        for beta in betas {
            den *= factorial(beta - t);
        }
        let term = BigRational::new(factorial(t + 1), den);
        if t % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }

    let radicand = triads
        .iter()
        .map(|&(x, y, z)| triangle_delta_squared(x, y, z))
        .fold(BigRational::one(), |acc, r| acc * r);
    SignedSqrtRational::from_coefficient_and_radicand(&sum, &radicand)
}

/// Floating point Clebsch-Gordan coefficient; the same as `cgc(..)?.to_f64()`.
pub fn cgc_f64(j1: HalfInt, m1: HalfInt, j2: HalfInt, m2: HalfInt, j: HalfInt, m: HalfInt) -> Result<f64> {
    cgc(j1, m1, j2, m2, j, m).map(|v| v.to_f64())
}
