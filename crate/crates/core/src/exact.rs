//! Exact rational and univariate polynomial arithmetic.
//!
//! Rationals are [`num_rational::BigRational`], which keeps every value in
//! lowest terms with a positive denominator. [`RationalPolynomial`] is a dense
//! coefficient vector, lowest power first, with no trailing zeros.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};
use core::str::FromStr;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::hp::HPComplex;

/// Errors from exact polynomial operations and rational parsing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExactError {
    /// Synthetic division by `(s - root)` left a nonzero remainder.
    NotDivisible { root: BigRational, remainder: BigRational },
    /// A string was not of the form `num` or `num/den`.
    Parse(String),
}

impl fmt::Display for ExactError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NotDivisible { root, remainder } => {
                write!(f, "polynomial not divisible by (s - {root}); remainder {remainder}")
            }
            Self::Parse(s) => write!(f, "cannot parse rational from {s:?}"),
        }
    }
}

/// Builds `num/den` from machine integers. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int<T: Into<BigInt>>(n: T) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Parses `"num"` or `"num/den"` in base 10.
pub fn parse_rational(s: &str) -> Result<BigRational, ExactError> {
    let t = s.trim();
    // Ratio::from_str accepts "a/0" by panicking; reject it up front.
    if let Some((_, den)) = t.split_once('/') {
        if den.trim_start_matches(['+', '-']).bytes().all(|b| b == b'0') {
            return Err(ExactError::Parse(s.to_string()));
        }
    }
    BigRational::from_str(t).map_err(|_| ExactError::Parse(s.to_string()))
}

/// Canonical `num/den` form, `den` omitted when it is 1.
pub fn format_rational(r: &BigRational) -> String {
    r.to_string()
}

/// Dense polynomial in one variable over the rationals.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct RationalPolynomial {
    coeffs: Vec<BigRational>,
}

impl RationalPolynomial {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Self::from_coeffs(vec![BigRational::zero(), BigRational::one()])
    }

    /// `c0 + c1 x`.
    pub fn linear(c0: BigRational, c1: BigRational) -> Self {
        Self::from_coeffs(vec![c0, c1])
    }

    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| rat_int(c)).collect())
    }

    /// Coefficients, lowest power first.
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigRational> {
        self.coeffs
    }

    /// Coefficient of `x^i`, zero past the degree.
    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Exact Horner evaluation.
    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Horner evaluation at a high-precision complex point, at the point's
    /// working precision.
    pub fn eval_complex(&self, x: &HPComplex) -> HPComplex {
        let p = x.precision();
        let mut acc = HPComplex::zero(p);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(&HPComplex::from_rational(c, p));
        }
        acc
    }

    /// Synthetic division by `(x - root)`. Fails unless the remainder is
    /// exactly zero.
    pub fn divide_linear(&self, root: &BigRational) -> Result<Self, ExactError> {
        if self.coeffs.is_empty() {
            return Ok(Self::zero());
        }
        let n = self.coeffs.len();
        let mut q = vec![BigRational::zero(); n - 1];
        let mut carry = BigRational::zero();
        for i in (1..n).rev() {
            carry = &self.coeffs[i] + carry * root;
            q[i - 1] = carry.clone();
        }
        let remainder = &self.coeffs[0] + carry * root;
        if !remainder.is_zero() {
            return Err(ExactError::NotDivisible { root: root.clone(), remainder });
        }
        Ok(Self::from_coeffs(q))
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    /// Antiderivative with zero constant term.
    pub fn antiderivative(&self) -> Self {
        let mut out = Vec::with_capacity(self.coeffs.len() + 1);
        out.push(BigRational::zero());
        for (i, c) in self.coeffs.iter().enumerate() {
            out.push(c / BigRational::from_integer(BigInt::from(i + 1)));
        }
        Self::from_coeffs(out)
    }

    /// Exact definite integral over `[a, b]`.
    pub fn integrate(&self, a: &BigRational, b: &BigRational) -> BigRational {
        let anti = self.antiderivative();
        anti.eval(b) - anti.eval(a)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// `p(x + shift)`.
    pub fn shift(&self, shift: &BigRational) -> Self {
        let mut acc = Self::zero();
        let lin = Self::linear(shift.clone(), BigRational::one());
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &lin) + &Self::constant(c.clone());
        }
        acc
    }

    /// Multiplies by `(x - root)`.
    pub fn mul_linear(&self, root: &BigRational) -> Self {
        self * &Self::linear(-root.clone(), BigRational::one())
    }

    /// Renders the polynomial in `var`, highest power first, e.g.
    /// `1/8*s + 1/12`.
    pub fn format_in(&self, var: &str) -> String {
        if self.coeffs.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else if c.is_negative() {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let unit = mag.is_one() && i > 0;
            if !unit {
                out.push_str(&mag.to_string());
            }
            match i {
                0 => {}
                1 if unit => out.push_str(var),
                1 => {
                    out.push('*');
                    out.push_str(var);
                }
                _ => {
                    if !unit {
                        out.push('*');
                    }
                    out.push_str(var);
                    out.push('^');
                    out.push_str(&i.to_string());
                }
            }
        }
        out
    }

    /// Coefficients as `num/den` strings, lowest power first.
    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(format_rational).collect()
    }

    pub fn from_strs<S: AsRef<str>>(items: &[S]) -> Result<Self, ExactError> {
        items
            .iter()
            .map(|s| parse_rational(s.as_ref()))
            .collect::<Result<Vec<_>, _>>()
            .map(Self::from_coeffs)
    }
}

impl fmt::Display for RationalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_in("x"))
    }
}

impl Add for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn add(self, rhs: &RationalPolynomial) -> RationalPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RationalPolynomial::from_coeffs((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn sub(self, rhs: &RationalPolynomial) -> RationalPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RationalPolynomial::from_coeffs((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn mul(self, rhs: &RationalPolynomial) -> RationalPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return RationalPolynomial::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RationalPolynomial::from_coeffs(out)
    }
}

impl Neg for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn neg(self) -> RationalPolynomial {
        RationalPolynomial { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alpha2() -> RationalPolynomial {
        // (s - 1)(s/8 + 1/12)
        let beta = RationalPolynomial::linear(rat(1, 12), rat(1, 8));
        beta.mul_linear(&rat_int(1))
    }

    #[test]
    fn horner_on_zero_and_alpha2() {
        assert_eq!(RationalPolynomial::zero().eval(&rat(7, 3)), rat_int(0));
        assert_eq!(alpha2().eval(&rat_int(1)), rat_int(0));
        assert_eq!(alpha2().eval(&rat_int(3)), rat(11, 12));
    }

    #[test]
    fn complex_horner_matches_exact() {
        let p = 128;
        let one = HPComplex::from_rational(&rat_int(1), p);
        let alpha1 = RationalPolynomial::linear(rat(-1, 2), rat(1, 2));
        assert!(alpha1.eval_complex(&one).abs_upper() < 1e-35);
        let c = RationalPolynomial::one().eval_complex(&HPComplex::from_f64(0.3, -2.0, p));
        assert_eq!(c.re_f64(), 1.0);
        assert_eq!(c.im_f64(), 0.0);
        let v = alpha2().eval_complex(&HPComplex::from_rational(&rat_int(3), p));
        assert!((v.re_f64() - 11.0 / 12.0).abs() < 1e-15);
        let err = v.sub(&HPComplex::from_rational(&rat(11, 12), p)).abs_upper();
        assert!(err < libm::ldexp(1.0, -(p as i32) + 4));
    }

    #[test]
    fn synthetic_division() {
        let q = alpha2().divide_linear(&rat_int(1)).unwrap();
        assert_eq!(q, RationalPolynomial::linear(rat(1, 12), rat(1, 8)));
        let q = RationalPolynomial::from_integers(&[-1, 0, 1]).divide_linear(&rat_int(1)).unwrap();
        assert_eq!(q, RationalPolynomial::from_integers(&[1, 1]));
        let alpha1 = RationalPolynomial::linear(rat(-1, 2), rat(1, 2));
        match alpha1.divide_linear(&rat_int(2)) {
            Err(ExactError::NotDivisible { remainder, .. }) => assert_eq!(remainder, rat(1, 2)),
            other => panic!("expected NotDivisible, got {other:?}"),
        }
    }

    #[test]
    fn derivatives() {
        let alpha1 = RationalPolynomial::linear(rat(-1, 2), rat(1, 2));
        assert_eq!(alpha1.derivative(), RationalPolynomial::constant(rat(1, 2)));
        assert!(RationalPolynomial::constant(rat(5, 7)).derivative().is_zero());
        assert_eq!(alpha2().derivative(), RationalPolynomial::linear(rat(-1, 24), rat(1, 4)));
    }

    #[test]
    fn canonical_form_and_strings() {
        assert_eq!(alpha2().format_in("s"), "1/8*s^2 - 1/24*s - 1/12");
        let beta = RationalPolynomial::linear(rat(1, 12), rat(1, 8));
        assert_eq!(beta.format_in("s"), "1/8*s + 1/12");
        assert_eq!(RationalPolynomial::from_integers(&[0, 1, 1]).format_in("x"), "x^2 + x");
        assert_eq!(RationalPolynomial::zero().format_in("s"), "0");
        assert_eq!(beta.to_strings(), ["1/12", "1/8"]);
        assert_eq!(RationalPolynomial::from_strs(&["1/12", "1/8", "0"]).unwrap(), beta);
        assert!(parse_rational("3/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert_eq!(parse_rational("-6/4").unwrap(), rat(-3, 2));
        assert_eq!(format_rational(&rat(4, 2)), "2");
    }

    #[test]
    fn shift_and_integrate() {
        let p = RationalPolynomial::from_integers(&[0, 0, 1]);
        assert_eq!(p.shift(&rat_int(1)), RationalPolynomial::from_integers(&[1, 2, 1]));
        assert_eq!(p.integrate(&rat_int(0), &rat_int(1)), rat(1, 3));
    }
}
