//! Exact Gaussian-rational scalars and functions on a finite point set.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::ParseError;

/// A complex number with exact rational real and imaginary parts.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar(Complex<BigRational>);

impl Scalar {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Scalar(Complex::new(re, im))
    }

    pub fn zero() -> Self {
        Scalar(Complex::new(BigRational::zero(), BigRational::zero()))
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Scalar(Complex::new(
            BigRational::from_integer(BigInt::from(n)),
            BigRational::zero(),
        ))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Scalar(Complex::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        ))
    }

    pub fn gaussian(re: i64, im: i64) -> Self {
        Scalar(Complex::new(
            BigRational::from_integer(BigInt::from(re)),
            BigRational::from_integer(BigInt::from(im)),
        ))
    }

    pub fn re(&self) -> &BigRational {
        &self.0.re
    }

    pub fn im(&self) -> &BigRational {
        &self.0.im
    }

    pub fn is_zero(&self) -> bool {
        self.0.re.is_zero() && self.0.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.re.is_one() && self.0.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Scalar(self.0.conj())
    }

    /// Squared modulus `|z|^2`, exact.
    pub fn norm_sqr(&self) -> BigRational {
        self.0.norm_sqr()
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let d = self.norm_sqr();
        Some(Scalar(Complex::new(&self.0.re / &d, -(&self.0.im / &d))))
    }

    /// Canonical `p/q` rendering with the denominator always present.
    pub fn to_exact_string(&self) -> String {
        let re = ratio_string(&self.0.re);
        if self.0.im.is_zero() {
            return re;
        }
        let im = ratio_string(&self.0.im.abs());
        let sign = if self.0.im.is_negative() { '-' } else { '+' };
        format!("{re}{sign}{im}*i")
    }
}

fn ratio_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn parse_ratio(s: &str) -> Result<BigRational, ParseError> {
    let s = s.trim();
    if s.contains(['.', 'e', 'E']) {
        return Err(ParseError::Scalar(format!(
            "floating-point literal {s:?} is not exact"
        )));
    }
    let bad = || ParseError::Scalar(format!("invalid rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(ParseError::Scalar(format!("zero denominator in {s:?}")));
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

impl FromStr for Scalar {
    type Err = ParseError;

    /// Accepts `p/q`, `p`, and `p/q+a/b*i` / `p/q-a/b*i`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Some(body) = s.strip_suffix("*i") {
            // split at the last sign that is not the leading one
            let idx = body
                .char_indices()
                .skip(1)
                .filter(|(_, c)| *c == '+' || *c == '-')
                .map(|(i, _)| i)
                .last()
                .ok_or_else(|| ParseError::Scalar(format!("invalid complex literal {s:?}")))?;
            let re = parse_ratio(&body[..idx])?;
            let im_str = &body[idx..];
            let im = parse_ratio(im_str.trim_start_matches('+'))?;
            return Ok(Scalar::new(re, im));
        }
        Ok(Scalar::new(parse_ratio(s)?, BigRational::zero()))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.im.is_zero() {
            write!(f, "{}", self.0.re)
        } else if self.0.re.is_zero() {
            write!(f, "{}i", self.0.im)
        } else {
            let sign = if self.0.im.is_negative() { '-' } else { '+' };
            write!(f, "{}{}{}i", self.0.re, sign, self.0.im.abs())
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_exact_string())
    }
}

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar(&self.0 + &rhs.0)
    }
}

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar(&self.0 - &rhs.0)
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        Scalar(&self.0 * &rhs.0)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-self.0.clone())
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-self.0)
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.0 = &self.0 + &rhs.0;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.0 = &self.0 - &rhs.0;
    }
}

/// A function `X -> Q(i)` on a finite point set, stored by point index.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ScalarFunction(Vec<Scalar>);

impl ScalarFunction {
    pub fn new(values: Vec<Scalar>) -> Self {
        ScalarFunction(values)
    }

    pub fn zeros(len: usize) -> Self {
        ScalarFunction(vec![Scalar::zero(); len])
    }

    pub fn constant(len: usize, value: Scalar) -> Self {
        ScalarFunction(vec![value; len])
    }

    pub fn ones(len: usize) -> Self {
        Self::constant(len, Scalar::one())
    }

    /// Indicator function of a single point.
    pub fn delta(len: usize, point: usize) -> Self {
        let mut f = Self::zeros(len);
        f.0[point] = Scalar::one();
        f
    }

    pub fn from_ints(values: &[i64]) -> Self {
        ScalarFunction(values.iter().map(|&v| Scalar::from_int(v)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[Scalar] {
        &self.0
    }

    pub fn get(&self, point: usize) -> &Scalar {
        &self.0[point]
    }

    pub fn set(&mut self, point: usize, value: Scalar) {
        self.0[point] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Scalar::is_zero)
    }

    /// `f ∘ map`, i.e. the pullback along a point map.
    pub fn compose(&self, map: &[usize]) -> Self {
        ScalarFunction(map.iter().map(|&z| self.0[z].clone()).collect())
    }

    pub fn pointwise_mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.len(), other.len());
        ScalarFunction(self.0.iter().zip(&other.0).map(|(a, b)| a * b).collect())
    }

    pub fn conj(&self) -> Self {
        ScalarFunction(self.0.iter().map(Scalar::conj).collect())
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        ScalarFunction(self.0.iter().map(|a| a * c).collect())
    }

    /// `max_z |f(z)|^2`.
    pub fn max_norm_sqr(&self) -> BigRational {
        self.0
            .iter()
            .map(Scalar::norm_sqr)
            .max()
            .unwrap_or_else(BigRational::zero)
    }

    /// True when `f` vanishes at every point of `set`.
    pub fn vanishes_on<'a>(&self, set: impl IntoIterator<Item = &'a usize>) -> bool {
        set.into_iter().all(|&z| self.0[z].is_zero())
    }

    /// Points where `f` is nonzero.
    pub fn support(&self) -> Vec<usize> {
        (0..self.len()).filter(|&z| !self.0[z].is_zero()).collect()
    }
}

impl Add<&ScalarFunction> for &ScalarFunction {
    type Output = ScalarFunction;
    fn add(self, rhs: &ScalarFunction) -> ScalarFunction {
        debug_assert_eq!(self.len(), rhs.len());
        ScalarFunction(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub<&ScalarFunction> for &ScalarFunction {
    type Output = ScalarFunction;
    fn sub(self, rhs: &ScalarFunction) -> ScalarFunction {
        debug_assert_eq!(self.len(), rhs.len());
        ScalarFunction(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &ScalarFunction {
    type Output = ScalarFunction;
    fn neg(self) -> ScalarFunction {
        ScalarFunction(self.0.iter().map(|a| -a).collect())
    }
}

impl AddAssign<&ScalarFunction> for ScalarFunction {
    fn add_assign(&mut self, rhs: &ScalarFunction) {
        for (a, b) in self.0.iter_mut().zip(&rhs.0) {
            *a += b;
        }
    }
}

impl Serialize for ScalarFunction {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

impl fmt::Display for ScalarFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}
