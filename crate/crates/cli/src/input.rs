//! Parsing of numeric command-line arguments.

use num_traits::{One, Pow, Zero};
use zeta_alpha_core::{parse_rational, BigInt, BigRational};

/// Parses an exact rational from `a/b`, an integer, or a decimal with an
/// optional exponent such as `-1.25e-3`. Decimals are converted exactly.
pub fn parse_number(text: &str) -> Result<BigRational, String> {
    let t = text.trim();
    if t.is_empty() {
        return Err("empty number".into());
    }
    if t.contains('/') {
        return parse_rational(t).map_err(|e| e.to_string());
    }
    let bad = || format!("cannot parse number from {text:?}");
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let all: String = [int_part, frac_part].concat();
    let mut num: BigInt = all.parse().map_err(|_| bad())?;
    if neg {
        num = -num;
    }
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        BigRational::from_integer(num * Pow::pow(&ten, scale as u32))
    } else {
        BigRational::new(num, Pow::pow(&ten, scale.unsigned_abs()))
    };
    Ok(value)
}

/// Parses `re` or `re,im`.
pub fn parse_complex(text: &str) -> Result<(BigRational, BigRational), String> {
    match text.split_once(',') {
        Some((re, im)) => Ok((parse_number(re)?, parse_number(im)?)),
        None => Ok((parse_number(text)?, BigRational::zero())),
    }
}

/// Canonical text for a Gaussian rational: `a/b`, or `a/b + c/d*i`.
pub fn format_complex(re: &BigRational, im: &BigRational) -> String {
    if im.is_zero() {
        return re.to_string();
    }
    let sign = if im < &BigRational::zero() { '-' } else { '+' };
    let mag = if im < &BigRational::zero() { -im.clone() } else { im.clone() };
    if mag.is_one() {
        format!("{re} {sign} i")
    } else {
        format!("{re} {sign} {mag}*i")
    }
}
