//! Reference evaluators for `ζ`, `Γ` and the trigamma function, built on
//! textbook methods that share nothing with the series in [`crate::series`].
//! Their accuracy is heuristic.

use alloc::vec::Vec;

use astro_float::BigFloat;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::combinatorics::{factorial, BernoulliTable};
use crate::hp::{consts, HPComplex, RM};

#[derive(Clone, Debug, PartialEq)]
pub enum OracleError {
    PoleAt { re: f64, im: f64 },
    OutOfRange(&'static str),
}

impl core::fmt::Display for OracleError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            OracleError::PoleAt { re, im } => write!(f, "pole at {re}+{im}i"),
            OracleError::OutOfRange(m) => f.write_str(m),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    pub precision: usize,
    /// Euler-Maclaurin cutoff `M`.
    pub em_terms: usize,
    /// Number of Bernoulli correction terms, at most 30.
    pub em_correction_order: usize,
}

impl OracleConfig {
    pub fn new(precision: usize) -> Self {
        let precision = precision.max(64);
        Self { precision, em_terms: (2 * precision / 3).max(50), em_correction_order: 15 }
    }
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self::new(128)
    }
}

fn near_nonpositive_integer(s: &HPComplex, prec: usize) -> bool {
    let tiny = libm::ldexp(1.0, -(prec as i32) / 2);
    match s.nearest_integer() {
        Some(n) if n <= 0 => s.distance_to_integer(n) < tiny,
        _ => false,
    }
}

fn pole(s: &HPComplex) -> OracleError {
    OracleError::PoleAt { re: s.re_f64(), im: s.im_f64() }
}

fn bernoulli_even(count: usize) -> Vec<BigRational> {
    let mut t = BernoulliTable::new();
    (1..=count).map(|n| t.number(2 * n)).collect()
}

/// Real part large enough that the truncated asymptotic series is accurate
/// to about `prec` bits with `terms` correction terms.
fn asymptotic_threshold(prec: usize, terms: usize) -> f64 {
    // |B_2n| ~ 2 (2n)! / (2π)^(2n); the first omitted term is about
    // (2n)! / ((2π)^(2n) x^(2n-1)) with n = terms + 1.
    let n = (terms + 1) as f64;
    let log2_fact = libm::lgamma(2.0 * n + 1.0) / core::f64::consts::LN_2;
    let log2_2pi = libm::log2(2.0 * core::f64::consts::PI);
    let need = prec as f64 + 8.0 + log2_fact - 2.0 * n * log2_2pi;
    libm::exp2(need / (2.0 * n - 1.0)).max(8.0)
}

/// `Γ(s)` by upward recurrence to a large real part and the Stirling series.
pub fn gamma_ref(s: &HPComplex, cfg: &OracleConfig) -> Result<HPComplex, OracleError> {
    let p = cfg.precision;
    if near_nonpositive_integer(s, p) {
        return Err(pole(s));
    }
    let w = p + 32;
    let mut cc = consts();
    let terms = 30;
    let x0 = asymptotic_threshold(w, terms);
    let z0 = s.with_precision(w);
    let shift = (x0 - z0.re_f64()).max(0.0).ceil() as i64;
    let z = z0.add_i64(shift);
    let bern = bernoulli_even(terms);

    let half = HPComplex::from_f64(0.5, 0.0, w);
    let ln_z = z.ln(&mut cc);
    let two_pi = HPComplex::from_parts(
        cc.pi(w, RM).mul(&BigFloat::from_word(2, 64), w, RM),
        BigFloat::from_word(0, w),
        w,
    );
    let half_ln_2pi = two_pi.ln(&mut cc).mul(&half);
    let mut lg = z.sub(&half).mul(&ln_z).sub(&z).add(&half_ln_2pi);
    let z_inv = z.recip();
    let z_inv2 = z_inv.mul(&z_inv);
    let mut zp = z_inv.clone();
    for (i, b) in bern.iter().enumerate() {
        let n = (i + 1) as i64;
        let c = HPComplex::from_rational(&(b / BigRational::from_integer((2 * n * (2 * n - 1)).into())), w);
        lg = lg.add(&c.mul(&zp));
        zp = zp.mul(&z_inv2);
    }
    let mut g = lg.exp(&mut cc);
    // Γ(s) = Γ(s+m) / (s (s+1) ... (s+m-1))
    let mut prod = HPComplex::one(w);
    for i in 0..shift {
        prod = prod.mul(&z0.add_i64(i));
    }
    g = g.div(&prod);
    Ok(g.with_precision(p))
}

/// Trigamma `Ψ1(s) = Σ_n 1/(s+n)^2` by upward recurrence and its
/// asymptotic expansion.
pub fn trigamma_ref(s: &HPComplex, cfg: &OracleConfig) -> Result<HPComplex, OracleError> {
    let p = cfg.precision;
    if near_nonpositive_integer(s, p) {
        return Err(pole(s));
    }
    let w = p + 32;
    let terms = 30;
    let x0 = asymptotic_threshold(w, terms);
    let z0 = s.with_precision(w);
    let shift = (x0 - z0.re_f64()).max(0.0).ceil() as i64;
    let mut acc = HPComplex::zero(w);
    for i in 0..shift {
        let zi = z0.add_i64(i);
        acc = acc.add(&zi.mul(&zi).recip());
    }
    let z = z0.add_i64(shift);
    let z_inv = z.recip();
    let z_inv2 = z_inv.mul(&z_inv);
    // 1/z + 1/(2z^2) + Σ B_2n / z^(2n+1)
    let mut tail = z_inv.add(&z_inv2.div_i64(2));
    let mut zp = z_inv2.mul(&z_inv);
    for b in bernoulli_even(terms) {
        tail = tail.add(&HPComplex::from_rational(&b, w).mul(&zp));
        zp = zp.mul(&z_inv2);
    }
    Ok(acc.add(&tail).with_precision(p))
}

/// `ζ(s)` by Euler-Maclaurin summation.
pub fn zeta_em(s: &HPComplex, cfg: &OracleConfig) -> Result<HPComplex, OracleError> {
    let p = cfg.precision;
    if cfg.em_correction_order > 30 {
        return Err(OracleError::OutOfRange("em_correction_order must be at most 30"));
    }
    let tiny = libm::ldexp(1.0, -(p as i32) / 2);
    if s.distance_to_integer(1) < tiny {
        return Err(pole(s));
    }
    let order = cfg.em_correction_order;
    if s.re_f64() <= -2.0 * order as f64 + 1.0 {
        return Err(OracleError::OutOfRange("real part too far left for the correction order"));
    }
    let w = p + 32;
    let mut cc = consts();
    let z = s.with_precision(w);
    let m = cfg.em_terms.max(2) as i64;
    let neg_z = z.neg();
    let pow = |n: i64, e: &HPComplex, cc: &mut astro_float::Consts| -> HPComplex {
        // n^e = exp(e ln n)
        let ln_n = BigFloat::from_i64(n, 64).ln(w, RM, cc);
        e.mul_real(&ln_n).exp(cc)
    };
    let mut sum = HPComplex::zero(w);
    for n in 1..m {
        sum = sum.add(&pow(n, &neg_z, &mut cc));
    }
    let m_neg_s = pow(m, &neg_z, &mut cc);
    let mf = HPComplex::from_i64(m, w);
    // M^(1-s)/(s-1) + M^(-s)/2
    sum = sum.add(&m_neg_s.mul(&mf).div(&z.add_i64(-1)));
    sum = sum.add(&m_neg_s.div_i64(2));
    // Σ_j B_2j/(2j)! s(s+1)...(s+2j-2) M^(-s-2j+1)
    let bern = bernoulli_even(order);
    let m_inv = mf.recip();
    let m_inv2 = m_inv.mul(&m_inv);
    let mut rising = z.clone();
    let mut mp = m_neg_s.mul(&m_inv);
    for (i, b) in bern.iter().enumerate() {
        let j = i + 1;
        let c = b / BigRational::from_integer(factorial(2 * j));
        sum = sum.add(&HPComplex::from_rational(&c, w).mul(&rising).mul(&mp));
        rising = rising.mul(&z.add_i64(2 * j as i64 - 1)).mul(&z.add_i64(2 * j as i64));
        mp = mp.mul(&m_inv2);
    }
    Ok(sum.with_precision(p))
}

/// `π` at the given precision, for reference comparisons.
pub fn pi(prec: usize) -> HPComplex {
    let mut cc = consts();
    HPComplex::from_parts(cc.pi(prec, RM), BigFloat::from_word(0, prec), prec)
}

/// Euler's constant from `H_n - ln n` with Euler-Maclaurin corrections.
pub fn euler_gamma(prec: usize) -> HPComplex {
    let w = prec + 32;
    let mut cc = consts();
    let n = (w as i64).max(64);
    let mut h = HPComplex::zero(w);
    for k in 1..=n {
        h = h.add(&HPComplex::one(w).div_i64(k));
    }
    let ln_n = HPComplex::from_i64(n, w).ln(&mut cc);
    let mut g = h.sub(&ln_n).sub(&HPComplex::one(w).div_i64(2 * n));
    // + Σ B_2k / (2k n^(2k))
    let nf = HPComplex::from_i64(n, w);
    let n_inv2 = nf.mul(&nf).recip();
    let mut np = n_inv2.clone();
    for (i, b) in bernoulli_even(30).iter().enumerate() {
        let k = (i + 1) as i64;
        let c = HPComplex::from_rational(b, w).div_i64(2 * k);
        g = g.add(&c.mul(&np));
        np = np.mul(&n_inv2);
    }
    g.with_precision(prec)
}

/// `f64` view of a rational, for diagnostics.
pub fn rational_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}
