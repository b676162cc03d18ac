//! The polynomials `α_k(s)`, coefficients of `g(t)^(s-1)` with
//! `g(t) = -log(1-t)/t`.
//!
//! Exact tables store `β_k = α_k/(s-1)` for `k >= 1`, whose coefficients are
//! all positive. Numeric sequences at a fixed complex `s` run the same
//! recursion in fixed point so that each step costs one rounding.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use astro_float::BigFloat;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::combinatorics::{factorial, norlund_integral, BernoulliTable, TriangleCache, TriangleKind};
use crate::exact::{rat, rat_int, RationalPolynomial};
use crate::fixed::{DotAccumulator, FixedVec};
use crate::hp::{up, HPComplex, RM};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlphaError {
    IndexOutOfTable { k: usize, max_k: usize },
    PrecisionTooLow { bits: usize, min: usize },
}

impl fmt::Display for AlphaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlphaError::IndexOutOfTable { k, max_k } => {
                write!(f, "index {k} is beyond the table limit {max_k}")
            }
            AlphaError::PrecisionTooLow { bits, min } => {
                write!(f, "precision of {bits} bits is below the minimum of {min}")
            }
        }
    }
}

/// Smallest working precision accepted by the numeric recursion.
pub const MIN_NUMERIC_PRECISION: usize = 64;

/// Exact `β_k(s) = α_k(s)/(s-1)` for `1 <= k <= max_k`; `α_0 = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaTable {
    betas: Vec<RationalPolynomial>,
}

/// `β_k` as an integer polynomial over a positive common denominator.
#[derive(Clone, Debug)]
struct Scaled {
    num: Vec<BigInt>,
    den: BigInt,
}

impl Scaled {
    fn from_poly(p: &RationalPolynomial) -> Self {
        let den = p.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = p.coeffs().iter().map(|c| c.numer() * (&den / c.denom())).collect();
        Self { num, den }
    }

    fn to_poly(&self) -> RationalPolynomial {
        RationalPolynomial::from_coeffs(
            self.num.iter().map(|n| BigRational::new(n.clone(), self.den.clone())).collect(),
        )
    }
}

/// `β_{k+1}` from `β_1..β_k` by the second-order recursion, in integers.
fn next_beta(prev: &[Scaled]) -> Scaled {
    let k = prev.len();
    debug_assert!(k >= 1);
    let kb = BigInt::from(k);
    let e: Vec<BigInt> = (1..=k)
        .map(|j| &prev[j - 1].den * BigInt::from((k - j + 1) * (k - j + 2)))
        .collect();
    let l = e.iter().fold(BigInt::one(), |acc, x| acc.lcm(x));
    let c0 = &kb * &kb + &kb;
    let mut q = vec![BigInt::zero(); k + 1];
    for j in 1..=k {
        let f = (&l / &e[j - 1]) * BigInt::from(j);
        let c1 = BigInt::from(2 * k + 2 - j);
        for (i, p) in prev[j - 1].num.iter().enumerate() {
            let t = &f * p;
            q[i] += &t * &c0;
            q[i + 1] += t * &c1;
        }
    }
    let den = l * BigInt::from(k * (k + 1) * (k + 2));
    let g = q.iter().fold(den.clone(), |acc, x| acc.gcd(x));
    Scaled { num: q.into_iter().map(|x| x / &g).collect(), den: den / g }
}

/// `α_0..=α_max_k` from the first-order recursion that the second-order one
/// is derived from. Used as an independent cross-check.
pub fn alpha_first_order(max_k: usize) -> Vec<RationalPolynomial> {
    let s_minus_1 = RationalPolynomial::linear(rat(-1, 1), rat(1, 1));
    let mut alphas = vec![RationalPolynomial::one()];
    for k in 0..max_k {
        let mut acc = RationalPolynomial::zero();
        for j in 1..=k {
            // (j - (s-1)(k-j+1)) / (k-j+2)
            let w = &RationalPolynomial::constant(rat_int(j as i64))
                - &s_minus_1.scale(&rat_int((k - j + 1) as i64));
            let w = w.scale(&rat(1, (k - j + 2) as i64));
            acc = &acc + &(&w * &alphas[j]);
        }
        let next = &s_minus_1.scale(&rat(1, (k + 2) as i64)) - &acc.scale(&rat(1, (k + 1) as i64));
        alphas.push(next);
    }
    alphas
}

/// Largest index for which [`build_alpha_table`] cross-checks its result
/// against [`alpha_first_order`].
pub const CROSS_CHECK_LIMIT: usize = 30;

pub fn build_alpha_table(max_k: usize) -> AlphaTable {
    let mut t = AlphaTable { betas: Vec::new() };
    t.extend_to(max_k);
    let limit = max_k.min(CROSS_CHECK_LIMIT);
    let first = alpha_first_order(limit);
    for (k, a) in first.iter().enumerate().skip(1) {
        assert_eq!(&t.alpha(k).expect("in table"), a, "alpha recursions disagree at k={k}");
    }
    t
}

impl AlphaTable {
    /// Wraps precomputed `β_1..β_K`, as read from a cache.
    pub fn from_betas(betas: Vec<RationalPolynomial>) -> Self {
        Self { betas }
    }

    pub fn max_k(&self) -> usize {
        self.betas.len()
    }

    pub fn betas(&self) -> &[RationalPolynomial] {
        &self.betas
    }

    /// Extends the table in place so that it covers `max_k`.
    pub fn extend_to(&mut self, max_k: usize) {
        if self.betas.len() >= max_k {
            return;
        }
        let mut scaled: Vec<Scaled> = self.betas.iter().map(Scaled::from_poly).collect();
        if scaled.is_empty() {
            scaled.push(Scaled { num: vec![BigInt::one()], den: BigInt::from(2) });
            self.betas.push(scaled[0].to_poly());
        }
        while scaled.len() < max_k {
            let next = next_beta(&scaled);
            self.betas.push(next.to_poly());
            scaled.push(next);
        }
    }

    /// The first `k` entries.
    pub fn prefix(&self, k: usize) -> AlphaTable {
        AlphaTable { betas: self.betas[..k.min(self.betas.len())].to_vec() }
    }

    /// `β_k` for `1 <= k <= max_k`.
    pub fn beta(&self, k: usize) -> Option<&RationalPolynomial> {
        if k == 0 {
            return None;
        }
        self.betas.get(k - 1)
    }

    /// `α_k` for `k <= max_k`.
    pub fn alpha(&self, k: usize) -> Option<RationalPolynomial> {
        if k == 0 {
            return Some(RationalPolynomial::one());
        }
        self.beta(k).map(|b| b.mul_linear(&BigRational::one()))
    }

    /// `α_k` in the factored form `(s-1)*(β_k)`, e.g. `(s-1)*(1/8*s + 1/12)`.
    pub fn format_alpha(&self, k: usize) -> Option<String> {
        if k == 0 {
            return Some("1".into());
        }
        self.beta(k).map(|b| alloc::format!("(s-1)*({})", b.format_in("s")))
    }

    pub fn eval<P: EvalPoint>(&self, k: usize, s: &P) -> Result<P, AlphaError> {
        match self.alpha(k) {
            Some(p) => Ok(P::eval_poly(&p, s)),
            None => Err(AlphaError::IndexOutOfTable { k, max_k: self.max_k() }),
        }
    }
}

/// Points at which table polynomials can be evaluated.
pub trait EvalPoint: Sized {
    fn eval_poly(p: &RationalPolynomial, at: &Self) -> Self;
}

impl EvalPoint for BigRational {
    fn eval_poly(p: &RationalPolynomial, at: &Self) -> Self {
        p.eval(at)
    }
}

impl EvalPoint for HPComplex {
    fn eval_poly(p: &RationalPolynomial, at: &Self) -> Self {
        p.eval_complex(at)
    }
}

/// `α_k(s)` with `k <= table.max_k()`.
pub fn alpha_eval<P: EvalPoint>(table: &AlphaTable, k: usize, s: &P) -> Result<P, AlphaError> {
    table.eval(k, s)
}

/// `α_k(1)'`; `values[0] = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaPrimeTable {
    pub values: Vec<BigRational>,
}

pub fn build_alpha_prime(max_k: usize) -> AlphaPrimeTable {
    let mut values = vec![BigRational::zero()];
    for k in 0..max_k {
        let mut acc = BigRational::zero();
        for (j, v) in values.iter().enumerate().skip(1) {
            acc += v * rat(j as i64, (k - j + 2) as i64);
        }
        values.push(rat(1, (k + 2) as i64) - acc / rat_int((k + 1) as i64));
    }
    AlphaPrimeTable { values }
}

/// `α_k(1)'` as `1/(k k!)` times the integral of `(x)_k` over `[0, 1]`.
pub fn alpha_prime_via_integral(k: usize) -> BigRational {
    assert!(k >= 1, "defined for k >= 1");
    norlund_integral(k) / BigRational::from_integer(BigInt::from(k) * factorial(k))
}

/// `α_k(s)` for positive integer `s` from signed Stirling numbers of the
/// first kind.
pub fn alpha_via_stirling1(k: usize, s: usize) -> BigRational {
    assert!(s >= 1, "defined for positive integer s");
    let top = s + k - 1;
    let st = TriangleCache::new(TriangleKind::Stirling1).get(top, s - 1);
    let sign = if k.is_multiple_of(2) { BigInt::one() } else { -BigInt::one() };
    BigRational::new(sign * factorial(s - 1) * st, factorial(top))
}

/// The constant `c_s = |s-1|/(|s|+1) (|s|+2) 2^(|s|+1)` of the per-term
/// bound, rounded up, from upper bounds on `|s|` and `|s-1|`.
pub fn coefficient_bound_constant(abs_s: f64, abs_s_minus_1: f64) -> f64 {
    // (x+2) 2^(x+1) / (x+1) increases with x, so an upper bound on |s| is safe.
    let f = up::div(
        up::mul(up::add(abs_s, 2.0), up::powf(2.0, up::add(abs_s, 1.0))),
        up::add_down(abs_s, 1.0),
    );
    up::mul(abs_s_minus_1, f)
}

/// Upper bound on `|α_k(s)|`: `c_s (1 + ln(k+1))^(|s|+1) / (k+1)`, evaluated
/// with upward rounding.
pub fn coefficient_bound(s: &HPComplex, k: usize) -> f64 {
    let abs_s = s.abs_upper();
    let abs_s1 = s.add_i64(-1).abs_upper();
    if abs_s1 == 0.0 {
        return 0.0;
    }
    let c = coefficient_bound_constant(abs_s, abs_s1);
    let base = up::add(1.0, up::ln((k + 1) as f64));
    let p = up::powf(base, up::add(abs_s, 1.0));
    up::div(up::mul(c, p), (k + 1) as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StructuralProperty {
    /// `(s+k-1) | α_k` for odd `k >= 3`.
    DivisibleKMinus1,
    /// `(s+k-2) | α_k` for odd `k >= 1`.
    DivisibleKMinus2,
    /// `(s+k-2) | 2α_{k+1} - α_k` for even `k >= 0`.
    PairDivisible,
    /// `α_k(-k) = (-1)^k / k!`.
    ValueAtMinusK,
    /// `α_{2m+2}(-2m-1) = B_{2m+2}/(2m+2)!`, reported at `k = 2m+2`.
    ValueAtMinus2mMinus1,
    /// `α_{2m+2}(-2m) = -(2m+1) B_{2m+2}/(2m+2)!`, reported at `k = 2m+2`.
    ValueAtMinus2m,
}

impl StructuralProperty {
    pub fn name(self) -> &'static str {
        match self {
            StructuralProperty::DivisibleKMinus1 => "divisible_s_plus_k_minus_1",
            StructuralProperty::DivisibleKMinus2 => "divisible_s_plus_k_minus_2",
            StructuralProperty::PairDivisible => "pair_divisible_s_plus_k_minus_2",
            StructuralProperty::ValueAtMinusK => "value_at_minus_k",
            StructuralProperty::ValueAtMinus2mMinus1 => "value_at_minus_2m_minus_1",
            StructuralProperty::ValueAtMinus2m => "value_at_minus_2m",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyCheck {
    pub property: StructuralProperty,
    pub k: usize,
    pub passed: bool,
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StructuralReport {
    pub checks: Vec<PropertyCheck>,
}

impl StructuralReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &PropertyCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn count(&self, property: StructuralProperty) -> usize {
        self.checks.iter().filter(|c| c.property == property).count()
    }
}

fn divisibility(p: &RationalPolynomial, root: i64) -> (bool, Option<String>) {
    match p.divide_linear(&rat_int(root)) {
        Ok(_) => (true, None),
        Err(e) => (false, Some(alloc::format!("{e}"))),
    }
}

fn equality(got: BigRational, want: BigRational) -> (bool, Option<String>) {
    if got == want {
        (true, None)
    } else {
        (
            false,
            Some(alloc::format!(
                "got {} expected {}",
                crate::exact::format_rational(&got),
                crate::exact::format_rational(&want)
            )),
        )
    }
}

/// Exact divisibility and special-value checks for every applicable
/// `k <= k_max`. Failures are reported, never raised.
pub fn check_structural_properties(table: &AlphaTable, k_max: usize) -> StructuralReport {
    let checks = (0..=k_max).flat_map(|k| structural_checks_at(table, k, k_max)).collect();
    StructuralReport { checks }
}

/// The checks of [`check_structural_properties`] that belong to index `k`.
/// The pair check at even `k` needs `α_{k+1}` and is skipped at `k_max`.
pub fn structural_checks_at(table: &AlphaTable, k: usize, k_max: usize) -> Vec<PropertyCheck> {
    assert!(k <= k_max && k_max <= table.max_k(), "k_max beyond table");
    let mut checks = Vec::new();
    let mut push = |property, (passed, detail): (bool, Option<String>)| {
        checks.push(PropertyCheck { property, k, passed, detail });
    };
    let ki = k as i64;
    let a = table.alpha(k).expect("in table");
    if k % 2 == 1 && k >= 3 {
        push(StructuralProperty::DivisibleKMinus1, divisibility(&a, 1 - ki));
    }
    if k % 2 == 1 {
        push(StructuralProperty::DivisibleKMinus2, divisibility(&a, 2 - ki));
    }
    if k.is_multiple_of(2) && k < k_max {
        let next = table.alpha(k + 1).expect("in table");
        let combo = &next.scale(&rat(2, 1)) - &a;
        push(StructuralProperty::PairDivisible, divisibility(&combo, 2 - ki));
    }
    let sign = if k.is_multiple_of(2) { 1 } else { -1 };
    let want = BigRational::new(BigInt::from(sign), factorial(k));
    push(StructuralProperty::ValueAtMinusK, equality(a.eval(&rat_int(-ki)), want));
    if k >= 2 && k.is_multiple_of(2) {
        let m = (k - 2) as i64 / 2;
        let bk = BernoulliTable::new().number(k) / BigRational::from_integer(factorial(k));
        push(StructuralProperty::ValueAtMinus2mMinus1, equality(a.eval(&rat_int(-2 * m - 1)), bk.clone()));
        push(
            StructuralProperty::ValueAtMinus2m,
            equality(a.eval(&rat_int(-2 * m)), -bk * rat_int(2 * m + 1)),
        );
    }
    checks
}

/// `α_0(s), α_1(s), ...` at one complex `s`, extendable up to a fixed
/// capacity.
///
/// The second-order recursion is rewritten as
/// `α_{k+1} = ((k^2+k+2(k+1)s) A_k - s B_k) / (k(k+1)(k+2))` with
/// `A_k = sum_j j α_j w_{k-j}`, `B_k = sum_j j^2 α_j w_{k-j}` and
/// `w_m = 1/((m+1)(m+2))`. The convolutions run over fixed-point copies of
/// `j α_j` and `j^2 α_j` with exact accumulation.
pub struct AlphaSequence {
    s: HPComplex,
    working: usize,
    guard: usize,
    capacity: usize,
    values: Vec<HPComplex>,
    a: [FixedVec; 2],
    b: [FixedVec; 2],
    w: FixedVec,
    acc: DotAccumulator,
    real: bool,
}

impl AlphaSequence {
    /// Prepares a sequence for `s` at `s.precision()` working bits that may
    /// be extended up to index `capacity`.
    pub fn new(s: &HPComplex, capacity: usize) -> Result<Self, AlphaError> {
        let working = s.precision();
        if working < MIN_NUMERIC_PRECISION {
            return Err(AlphaError::PrecisionTooLow { bits: working, min: MIN_NUMERIC_PRECISION });
        }
        let capacity = capacity.max(1);
        let log_n = usize::BITS as usize - capacity.leading_zeros() as usize;
        let guard = working + log_n + 16;
        let frac = (guard + 32) as u32;

        // |α_j(s)| <= |s-1| (r-2)! (r+j) with r = max(2, ceil|s|), from the
        // positive-coefficient majorant and Γ(r) = Σ α_k(r)/(r+k).
        let abs_s = s.abs_upper();
        let r = libm::ceil(abs_s).max(2.0);
        let scale = libm::log2(s.add_i64(-1).abs_upper().max(1.0))
            + libm::lgamma(r - 1.0) / core::f64::consts::LN_2
            + libm::log2(r + capacity as f64)
            + 2.0 * libm::log2(capacity as f64 + 1.0);
        let int_bits = libm::ceil(scale).max(0.0) as usize + 4;
        let limbs = (frac as usize + int_bits).div_ceil(64);
        let w_limbs = (frac as usize).div_ceil(64);

        let sg = s.with_precision(guard);
        let w = FixedVec::new(w_limbs, frac);
        let real = sg.is_real();
        let mut seq = Self {
            s: sg.clone(),
            working,
            guard,
            capacity,
            values: Vec::new(),
            a: [FixedVec::new(limbs, frac), FixedVec::new(limbs, frac)],
            b: [FixedVec::new(limbs, frac), FixedVec::new(limbs, frac)],
            w,
            acc: DotAccumulator::new(limbs, w_limbs, 2 * frac),
            real,
        };
        seq.push(HPComplex::one(guard));
        seq.push(sg.add_i64(-1).div_i64(2));
        Ok(seq)
    }

    fn push(&mut self, v: HPComplex) {
        let j = self.values.len() as i64;
        let av = v.mul_i64(j);
        let bv = av.mul_i64(j);
        self.a[0].push(av.re());
        self.a[1].push(av.im());
        self.b[0].push(bv.re());
        self.b[1].push(bv.im());
        self.values.push(v);
    }

    fn conv(&mut self, which: usize, part: usize, k: usize) -> BigFloat {
        self.acc.clear();
        let src = if which == 0 { &self.a[part] } else { &self.b[part] };
        self.acc.convolve(src, &self.w, 1, k);
        self.acc.to_float()
    }

    /// Computes terms through index `n`. Panics if `n > capacity`.
    pub fn extend_to(&mut self, n: usize) {
        assert!(n <= self.capacity, "alpha sequence capacity {} exceeded", self.capacity);
        let g = self.guard;
        let zero = BigFloat::from_word(0, g);
        while self.w.len() < n {
            let m = self.w.len();
            let d = BigFloat::from_u64(((m + 1) * (m + 2)) as u64, 128);
            self.w.push(&BigFloat::from_word(1, 64).div(&d, g + 64, RM));
        }
        while self.values.len() <= n {
            let k = self.values.len() - 1;
            let (a_re, b_re) = (self.conv(0, 0, k), self.conv(1, 0, k));
            let (a_im, b_im) = if self.real {
                (zero.clone(), zero.clone())
            } else {
                (self.conv(0, 1, k), self.conv(1, 1, k))
            };
            let a = HPComplex::from_parts(a_re, a_im, g);
            let b = HPComplex::from_parts(b_re, b_im, g);
            let kk = (k * k + k) as i64;
            let c = self.s.mul_i64(2 * (k as i64 + 1)).add_i64(kk);
            let num = c.mul(&a).sub(&self.s.mul(&b));
            let den = BigFloat::from_u64((k * (k + 1) * (k + 2)) as u64, 128);
            let next = HPComplex::from_parts(
                num.re().div(&den, g, RM),
                if self.real { zero.clone() } else { num.im().div(&den, g, RM) },
                g,
            );
            self.push(next);
        }
    }

    /// Number of computed terms (indices `0..len`).
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    /// Precision carried by stored terms.
    pub fn guard_precision(&self) -> usize {
        self.guard
    }

    pub fn working_precision(&self) -> usize {
        self.working
    }

    pub fn get(&self, k: usize) -> Option<&HPComplex> {
        self.values.get(k)
    }

    pub fn values(&self) -> &[HPComplex] {
        &self.values
    }

    /// Terms rounded to the working precision.
    pub fn working_values(&self) -> Vec<HPComplex> {
        self.values.iter().map(|v| v.with_precision(self.working)).collect()
    }
}

/// `α_0(s)..=α_n(s)` at `s.precision()` working bits.
pub fn alpha_seq_numeric(s: &HPComplex, n: usize) -> Result<Vec<HPComplex>, AlphaError> {
    let mut seq = AlphaSequence::new(s, n.max(1))?;
    seq.extend_to(n.max(1));
    let mut v = seq.working_values();
    v.truncate(n + 1);
    Ok(v)
}

/// Whether every coefficient of `β_k` is strictly positive.
pub fn has_positive_coefficients(p: &RationalPolynomial) -> bool {
    !p.is_zero() && p.coeffs().iter().all(|c| c.is_positive())
}
