//! High-precision complex numbers and directed-rounding helpers for `f64`
//! bounds.
//!
//! [`HPComplex`] wraps a pair of [`astro_float::BigFloat`] values together with
//! the working precision in bits. Binary operations run at the smaller of the
//! two operand precisions.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use astro_float::{BigFloat, Consts, RoundingMode, Sign, Word};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub(crate) const RM: RoundingMode = RoundingMode::ToEven;

/// Smallest precision accepted by constructors; astro-float works in whole words.
pub const MIN_PRECISION: usize = 2;

pub(crate) fn consts() -> Consts {
    Consts::new().expect("astro-float constant cache allocation")
}

/// `f64` value of a `BigFloat`, correct to about one ulp.
pub(crate) fn bf_to_f64(x: &BigFloat) -> f64 {
    let Some((m, _, sign, e, _)) = x.as_raw_parts() else {
        return f64::NAN;
    };
    if m.iter().all(|&w| w == 0) {
        return 0.0;
    }
    let len = m.len() as i32;
    let hi = m[m.len() - 1] as f64;
    let lo = if m.len() > 1 { m[m.len() - 2] as f64 } else { 0.0 };
    let base = e - 64 * len;
    let v = libm::ldexp(hi, base + 64 * (len - 1)) + libm::ldexp(lo, base + 64 * (len - 2));
    if sign == Sign::Neg {
        -v
    } else {
        v
    }
}

/// Exact conversion of a finite `BigFloat` to a rational.
pub(crate) fn bf_to_rational(x: &BigFloat) -> BigRational {
    let Some((m, _, sign, e, _)) = x.as_raw_parts() else {
        return BigRational::zero();
    };
    let mag = BigUint::from_slice(
        &m.iter().flat_map(|w| [*w as u32, (*w >> 32) as u32]).collect::<Vec<_>>(),
    );
    let mut v = BigRational::from_integer(BigInt::from(mag));
    let shift = e as i64 - 64 * m.len() as i64;
    let two = BigRational::from_integer(BigInt::from(2));
    if shift >= 0 {
        v *= num_traits::pow(two, shift as usize);
    } else {
        v /= num_traits::pow(two, (-shift) as usize);
    }
    if sign == Sign::Neg {
        -v
    } else {
        v
    }
}

pub(crate) fn bf_from_bigint(n: &BigInt, p: usize) -> BigFloat {
    if n.is_zero() {
        return BigFloat::from_word(0, p);
    }
    let (sign, digits) = n.to_u64_digits();
    let words: Vec<Word> = digits.iter().map(|&d| d as Word).collect();
    let e = (64 * words.len()) as i32;
    let s = if sign == num_bigint::Sign::Minus { Sign::Neg } else { Sign::Pos };
    let mut v = BigFloat::from_words(&words, s, e);
    if v.mantissa_max_bit_len().unwrap_or(0) > p {
        v.set_precision(p, RM).expect("precision within limits");
    }
    v
}

pub(crate) fn bf_from_rational(r: &BigRational, p: usize) -> BigFloat {
    let num = bf_from_bigint(r.numer(), p + 64);
    if r.denom().is_one() {
        let mut v = num;
        v.set_precision(p, RM).expect("precision within limits");
        return v;
    }
    let den = bf_from_bigint(r.denom(), p + 64);
    num.div(&den, p, RM)
}

pub(crate) fn bf_from_f64(x: f64, p: usize) -> BigFloat {
    BigFloat::from_f64(x, p.max(64))
}

/// Renders `x` with `digits` significant decimal digits.
pub(crate) fn bf_to_decimal(x: &BigFloat, digits: usize) -> String {
    let r = bf_to_rational(x);
    rational_to_decimal(&r, digits)
}

/// Decimal rendering of an exact rational, rounded half away from zero to
/// `digits` significant digits.
pub fn rational_to_decimal(r: &BigRational, digits: usize) -> String {
    use alloc::format;
    use alloc::string::ToString;
    if r.is_zero() {
        return "0".into();
    }
    let digits = digits.max(1);
    let neg = r.is_negative();
    let a = r.abs();
    // Estimate the decimal exponent, then correct it.
    let approx = a.numer().bits() as f64 - a.denom().bits() as f64;
    let mut exp10 = (approx * core::f64::consts::LOG10_2).floor() as i64;
    let ten = BigRational::from_integer(BigInt::from(10));
    let pow10 = |k: i64| -> BigRational {
        if k >= 0 {
            num_traits::pow(ten.clone(), k as usize)
        } else {
            num_traits::pow(ten.clone(), (-k) as usize).recip()
        }
    };
    while a >= pow10(exp10 + 1) {
        exp10 += 1;
    }
    while a < pow10(exp10) {
        exp10 -= 1;
    }
    let scaled = &a * pow10(digits as i64 - 1 - exp10);
    let (q, rem) = scaled.numer().div_rem(scaled.denom());
    let mut m = q;
    if rem * BigInt::from(2) >= *scaled.denom() {
        m += 1;
    }
    let mut s = m.to_string();
    if s.len() > digits {
        s.pop();
        exp10 += 1;
    }
    let body = if (-5..21).contains(&exp10) {
        if exp10 >= 0 {
            let int_len = exp10 as usize + 1;
            if s.len() <= int_len {
                let mut t = s.clone();
                t.extend(core::iter::repeat_n('0', int_len - s.len()));
                t
            } else {
                format!("{}.{}", &s[..int_len], &s[int_len..])
            }
        } else {
            let zeros = (-exp10 - 1) as usize;
            format!("0.{}{}", "0".repeat(zeros), s)
        }
    } else if s.trim_end_matches('0').len() > 1 {
        format!("{}.{}e{}", &s[..1], s[1..].trim_end_matches('0'), exp10)
    } else {
        format!("{}e{exp10}", &s[..1])
    };
    let body = if body.contains('.') && !body.contains('e') {
        body.trim_end_matches('0').trim_end_matches('.').into()
    } else {
        body
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

/// Complex number with explicit working precision.
#[derive(Debug)]
pub struct HPComplex {
    re: BigFloat,
    im: BigFloat,
    prec: usize,
}

impl Clone for HPComplex {
    fn clone(&self) -> Self {
        Self { re: self.re.clone(), im: self.im.clone(), prec: self.prec }
    }
}

impl HPComplex {
    pub fn zero(prec: usize) -> Self {
        let p = prec.max(MIN_PRECISION);
        Self { re: BigFloat::from_word(0, p), im: BigFloat::from_word(0, p), prec: p }
    }

    pub fn one(prec: usize) -> Self {
        Self::from_i64(1, prec)
    }

    pub fn from_i64(v: i64, prec: usize) -> Self {
        let p = prec.max(MIN_PRECISION);
        Self { re: BigFloat::from_i64(v, p.max(64)), im: BigFloat::from_word(0, p), prec: p }
    }

    pub fn from_f64(re: f64, im: f64, prec: usize) -> Self {
        let p = prec.max(MIN_PRECISION);
        Self { re: bf_from_f64(re, p), im: bf_from_f64(im, p), prec: p }
    }

    pub fn from_rational(r: &BigRational, prec: usize) -> Self {
        let p = prec.max(MIN_PRECISION);
        Self { re: bf_from_rational(r, p), im: BigFloat::from_word(0, p), prec: p }
    }

    pub fn from_rationals(re: &BigRational, im: &BigRational, prec: usize) -> Self {
        let p = prec.max(MIN_PRECISION);
        Self { re: bf_from_rational(re, p), im: bf_from_rational(im, p), prec: p }
    }

    pub(crate) fn from_parts(re: BigFloat, im: BigFloat, prec: usize) -> Self {
        Self { re, im, prec }
    }

    pub fn precision(&self) -> usize {
        self.prec
    }

    /// Same value tagged (and rounded) to a new precision.
    pub fn with_precision(&self, prec: usize) -> Self {
        let p = prec.max(MIN_PRECISION);
        let mut re = self.re.clone();
        let mut im = self.im.clone();
        if p < self.prec {
            re.set_precision(p, RM).expect("precision within limits");
            im.set_precision(p, RM).expect("precision within limits");
        }
        Self { re, im, prec: p }
    }

    pub fn re(&self) -> &BigFloat {
        &self.re
    }

    pub fn im(&self) -> &BigFloat {
        &self.im
    }

    pub fn re_f64(&self) -> f64 {
        bf_to_f64(&self.re)
    }

    pub fn im_f64(&self) -> f64 {
        bf_to_f64(&self.im)
    }

    pub fn re_rational(&self) -> BigRational {
        bf_to_rational(&self.re)
    }

    pub fn im_rational(&self) -> BigRational {
        bf_to_rational(&self.im)
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        let p = self.prec.min(o.prec);
        Self { re: self.re.add(&o.re, p, RM), im: self.im.add(&o.im, p, RM), prec: p }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let p = self.prec.min(o.prec);
        Self { re: self.re.sub(&o.re, p, RM), im: self.im.sub(&o.im, p, RM), prec: p }
    }

    pub fn neg(&self) -> Self {
        Self { re: self.re.neg(), im: self.im.neg(), prec: self.prec }
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: self.im.neg(), prec: self.prec }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let p = self.prec.min(o.prec);
        let w = p + 8;
        if o.im.is_zero() {
            return self.mul_real(&o.re).with_precision(p);
        }
        if self.im.is_zero() {
            return o.mul_real(&self.re).with_precision(p);
        }
        let re = self.re.mul(&o.re, w, RM).sub(&self.im.mul(&o.im, w, RM), p, RM);
        let im = self.re.mul(&o.im, w, RM).add(&self.im.mul(&o.re, w, RM), p, RM);
        Self { re, im, prec: p }
    }

    /// Multiplies by a real high-precision scalar.
    pub fn mul_real(&self, r: &BigFloat) -> Self {
        let p = self.prec;
        let im = if self.im.is_zero() { self.im.clone() } else { self.im.mul(r, p, RM) };
        Self { re: self.re.mul(r, p, RM), im, prec: p }
    }

    pub fn mul_i64(&self, k: i64) -> Self {
        self.mul_real(&BigFloat::from_i64(k, 64))
    }

    pub fn div_i64(&self, k: i64) -> Self {
        let d = BigFloat::from_i64(k, 64);
        let p = self.prec;
        let im = if self.im.is_zero() { self.im.clone() } else { self.im.div(&d, p, RM) };
        Self { re: self.re.div(&d, p, RM), im, prec: p }
    }

    pub fn add_i64(&self, k: i64) -> Self {
        Self {
            re: self.re.add(&BigFloat::from_i64(k, 64), self.prec, RM),
            im: self.im.clone(),
            prec: self.prec,
        }
    }

    /// `|z|^2` as a real high-precision value.
    pub fn norm_sqr(&self) -> BigFloat {
        let w = self.prec + 8;
        self.re.mul(&self.re, w, RM).add(&self.im.mul(&self.im, w, RM), w, RM)
    }

    pub fn recip(&self) -> Self {
        let p = self.prec;
        if self.im.is_zero() {
            let one = BigFloat::from_word(1, 64);
            return Self { re: one.div(&self.re, p, RM), im: self.im.clone(), prec: p };
        }
        let n = self.norm_sqr();
        Self { re: self.re.div(&n, p, RM), im: self.im.neg().div(&n, p, RM), prec: p }
    }

    pub fn div(&self, o: &Self) -> Self {
        let p = self.prec.min(o.prec);
        if o.im.is_zero() {
            let im = if self.im.is_zero() { self.im.clone() } else { self.im.div(&o.re, p, RM) };
            return Self { re: self.re.div(&o.re, p, RM), im, prec: p };
        }
        let w = p + 16;
        let num = self.with_precision(w).mul(&o.conj().with_precision(w));
        let n = o.norm_sqr();
        Self { re: num.re.div(&n, p, RM), im: num.im.div(&n, p, RM), prec: p }
    }

    /// Modulus at working precision.
    pub fn abs(&self) -> BigFloat {
        if self.im.is_zero() {
            return self.re.abs();
        }
        self.norm_sqr().sqrt(self.prec, RM)
    }

    /// An `f64` upper bound on `|z|`.
    pub fn abs_upper(&self) -> f64 {
        let re = bf_to_f64(&self.re).abs();
        let im = bf_to_f64(&self.im).abs();
        let v = libm::hypot(re, im);
        if v == 0.0 {
            if self.is_zero() {
                0.0
            } else {
                f64::MIN_POSITIVE
            }
        } else {
            up::rel(v)
        }
    }

    /// `ceil(|z|)`, computed exactly from the rational parts.
    pub fn ceil_abs(&self) -> u64 {
        let (re, im) = (self.re_rational(), self.im_rational());
        let n = &re * &re + &im * &im;
        let (a, b) = (n.numer().clone(), n.denom().clone());
        // floor(sqrt(ab))/b is within one of sqrt(a/b)
        let mut c = (&a * &b).sqrt() / &b;
        while &c * &c * &b < a {
            c += 1;
        }
        c.to_u64().unwrap_or(u64::MAX)
    }

    /// An `f64` lower bound on `|z|`.
    pub fn abs_lower(&self) -> f64 {
        let re = bf_to_f64(&self.re).abs();
        let im = bf_to_f64(&self.im).abs();
        up::rel_down(libm::hypot(re, im))
    }

    /// Complex exponential.
    pub fn exp(&self, cc: &mut Consts) -> Self {
        let p = self.prec;
        let w = p + 16;
        let mag = self.re.exp(w, RM, cc);
        if self.im.is_zero() {
            let mut re = mag;
            re.set_precision(p, RM).expect("precision within limits");
            return Self { re, im: BigFloat::from_word(0, p), prec: p };
        }
        let c = self.im.cos(w, RM, cc);
        let s = self.im.sin(w, RM, cc);
        Self { re: mag.mul(&c, p, RM), im: mag.mul(&s, p, RM), prec: p }
    }

    /// Principal branch of the logarithm.
    pub fn ln(&self, cc: &mut Consts) -> Self {
        let p = self.prec;
        let w = p + 16;
        let n = self.norm_sqr();
        let half = BigFloat::from_f64(0.5, 64);
        let re = n.ln(w, RM, cc).mul(&half, p, RM);
        let im = atan2(&self.im, &self.re, w, cc);
        let mut im = im;
        im.set_precision(p, RM).expect("precision within limits");
        Self { re, im, prec: p }
    }

    /// Nearest integer to the real part, when it fits in an `i64`.
    pub fn nearest_integer(&self) -> Option<i64> {
        let r = bf_to_f64(&self.re).round();
        if r.abs() < 9.0e15 {
            Some(r as i64)
        } else {
            None
        }
    }

    /// Upper bound-ish (`f64`) distance from `n`.
    pub fn distance_to_integer(&self, n: i64) -> f64 {
        let d = self.add_i64(-n);
        libm::hypot(d.re_f64(), d.im_f64())
    }

    /// Decimal rendering of the real and imaginary parts.
    pub fn to_decimal_parts(&self, digits: usize) -> (String, String) {
        (bf_to_decimal(&self.re, digits), bf_to_decimal(&self.im, digits))
    }

    /// Significant decimal digits carried by the working precision.
    pub fn decimal_digits(&self) -> usize {
        ((self.prec as f64) * core::f64::consts::LOG10_2).floor().max(1.0) as usize
    }
}

impl fmt::Display for HPComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.to_decimal_parts(self.decimal_digits().min(40));
        if self.im.is_zero() {
            f.write_str(&re)
        } else if im.starts_with('-') {
            write!(f, "{re} - {}i", &im[1..])
        } else {
            write!(f, "{re} + {im}i")
        }
    }
}

/// Four-quadrant arctangent of `y/x`.
pub(crate) fn atan2(y: &BigFloat, x: &BigFloat, p: usize, cc: &mut Consts) -> BigFloat {
    let pi = cc.pi(p + 8, RM);
    if x.is_zero() {
        if y.is_zero() {
            return BigFloat::from_word(0, p);
        }
        let half_pi = pi.div(&BigFloat::from_word(2, 64), p, RM);
        return if y.is_negative() { half_pi.neg() } else { half_pi };
    }
    let t = y.div(x, p + 8, RM).atan(p + 8, RM, cc);
    if x.is_positive() {
        t
    } else if y.is_negative() {
        t.sub(&pi, p, RM)
    } else {
        t.add(&pi, p, RM)
    }
}

/// Directed rounding on `f64`. Every function returns a value that is at
/// least (or, for the `_down` forms, at most) the exact result.
pub mod up {
    const SLACK: f64 = 1.0 + 4.0 * f64::EPSILON;

    /// Widens an approximation of a correctly-computed value upward.
    pub fn rel(x: f64) -> f64 {
        if x > 0.0 {
            (x * SLACK).next_up()
        } else if x < 0.0 {
            (x / SLACK).next_up()
        } else {
            0.0
        }
    }

    pub fn rel_down(x: f64) -> f64 {
        if x > 0.0 {
            (x / SLACK).next_down().max(0.0)
        } else if x < 0.0 {
            (x * SLACK).next_down()
        } else {
            0.0
        }
    }

    pub fn add(a: f64, b: f64) -> f64 {
        (a + b).next_up()
    }

    pub fn sub(a: f64, b: f64) -> f64 {
        (a - b).next_up()
    }

    pub fn mul(a: f64, b: f64) -> f64 {
        (a * b).next_up()
    }

    pub fn div(a: f64, b: f64) -> f64 {
        (a / b).next_up()
    }

    pub fn div_down(a: f64, b: f64) -> f64 {
        (a / b).next_down()
    }

    pub fn add_down(a: f64, b: f64) -> f64 {
        (a + b).next_down()
    }

    pub fn ln(x: f64) -> f64 {
        rel(libm::log(x)).max(libm::log(x).next_up())
    }

    pub fn exp(x: f64) -> f64 {
        rel(libm::exp(x))
    }

    /// `x^y` for `x >= 1`, `y >= 0`.
    pub fn powf(x: f64, y: f64) -> f64 {
        rel(libm::pow(x, y))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn rational_roundtrip_through_float() {
        let p = 192;
        let x = HPComplex::from_rational(&rat(11, 12), p);
        let back = x.re_rational();
        let err = (back - rat(11, 12)).abs();
        assert!(err < rat(1, 1) / num_traits::pow(BigRational::from_integer(2.into()), 190));
        assert_eq!(bf_to_rational(&bf_from_rational(&rat(-3, 8), 64)), rat(-3, 8));
    }

    #[test]
    fn arithmetic_identities() {
        let p = 160;
        let a = HPComplex::from_f64(3.0, 4.0, p);
        assert!((a.abs_upper() - 5.0).abs() < 1e-12);
        let b = HPComplex::from_f64(-1.5, 0.25, p);
        let q = a.div(&b).mul(&b).sub(&a);
        assert!(q.abs_upper() < 1e-40);
        let r = a.recip().mul(&a).sub(&HPComplex::one(p));
        assert!(r.abs_upper() < 1e-40);
    }

    #[test]
    fn exp_ln_inverse() {
        let p = 128;
        let mut cc = consts();
        let z = HPComplex::from_f64(0.75, -2.5, p);
        let back = z.ln(&mut cc).exp(&mut cc).sub(&z);
        assert!(back.abs_upper() < 1e-33);
        // exp(i*pi) = -1
        let ipi = HPComplex::from_parts(BigFloat::from_word(0, p), cc.pi(p, RM), p);
        let e = ipi.exp(&mut cc).add(&HPComplex::one(p));
        assert!(e.abs_upper() < 1e-35);
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(rational_to_decimal(&rat(1, 3), 5), "0.33333");
        assert_eq!(rational_to_decimal(&rat(-2, 3), 3), "-0.667");
        assert_eq!(rational_to_decimal(&rat(12345, 1), 3), "12300");
        assert_eq!(rational_to_decimal(&rat(1, 1_000_000_000), 2), "1e-9");
        assert_eq!(rational_to_decimal(&rat(999, 1000), 2), "1");
        assert_eq!(rational_to_decimal(&rat(5, 2), 10), "2.5");
    }

    #[test]
    fn directed_rounding_brackets() {
        let x = 0.1f64;
        assert!(up::mul(x, 3.0) >= 0.30000000000000004);
        assert!(up::rel_down(x) < x && up::rel(x) > x);
        assert!(up::ln(10.0) > core::f64::consts::LN_10);
    }

    #[test]
    fn exact_modulus_ceiling() {
        assert_eq!(HPComplex::from_i64(3, 128).ceil_abs(), 3);
        assert_eq!(HPComplex::from_f64(3.0, 4.0, 128).ceil_abs(), 5);
        assert_eq!(HPComplex::from_f64(-3.0, 4.0000001, 128).ceil_abs(), 6);
        assert_eq!(HPComplex::from_f64(0.5, 0.0, 128).ceil_abs(), 1);
        assert_eq!(HPComplex::zero(128).ceil_abs(), 0);
        let just_above = HPComplex::from_rational(&rat(3 * (1 << 30) + 1, 1 << 30), 128);
        assert_eq!(just_above.ceil_abs(), 4);
    }
}
