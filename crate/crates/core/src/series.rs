//! Series for `Γ(s)`, `Γ(s)ζ(s)`, `Γ(s)ζ(s-λ)` and `Γ(s)ζ(s+1)` in terms of
//! `α_k(s)`, truncated at `N` terms with a rigorous bound on the tail.
//!
//! Every identity except the trigamma one has the shape
//! `Σ_k α_k(s) Σ_j c_j / Π_{i ∈ I_j} (s+k-i)`. Near an integer `s0` the
//! vanishing factors from all `(k, j)` pairs are collected into one exact
//! polynomial, and the group is evaluated after dividing out `s - s0`. When
//! that division fails the point is a genuine pole.
//!
//! Two tail bounds are available and the smaller is reported:
//! - from the per-term bound `|α_k(s)| <= c_s (1+ln(k+1))^(|s|+1)/(k+1)`,
//!   giving `2 e μ c_s Γ(a'+1, 1+ln(N+1))`;
//! - from `|α_k(s)| <= |s-1| α_k(r)/(r-1)` for an integer `r >= |s|`, where
//!   the `α_k(r)` are positive and `Σ_k α_k(r)/(r+k) = (r-1)!`, so the tail
//!   of that positive series is known from its partial sums.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::alpha::{build_alpha_table, AlphaSequence, AlphaTable};
use crate::combinatorics::{factorial, TriangleCache, TriangleKind};
use crate::exact::{rat_int, RationalPolynomial};
use crate::hp::{up, HPComplex};
use crate::oracle::{gamma_ref, trigamma_ref, OracleConfig, OracleError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Identity {
    /// `Γ(s) = Σ α_k(s)/(s+k)`.
    Gamma,
    /// `Γ(s)ζ(s) = Σ α_k(s)/(s+k-1)`.
    GammaZeta,
    /// `Γ(s)ζ(s-λ)` with Stirling numbers of the second kind.
    ShiftStirling2 { lambda: u32 },
    /// `Γ(s)ζ(s-λ)` with Eulerian numbers.
    ShiftEulerian { lambda: u32 },
    /// `Γ(s)ζ(s+1) = Σ α_k(s) Ψ1(s+k)`.
    Trigamma,
    /// `γ = -Σ_{k>=1} α_k(0)/k`, the `s -> 0` limit of the gamma series.
    EulerGamma,
}

impl Identity {
    pub fn name(self) -> &'static str {
        match self {
            Identity::Gamma => "gamma",
            Identity::GammaZeta => "gammazeta",
            Identity::ShiftStirling2 { .. } => "shift-stirling2",
            Identity::ShiftEulerian { .. } => "shift-eulerian",
            Identity::Trigamma => "trigamma",
            Identity::EulerGamma => "eulergamma",
        }
    }

    fn lambda(self) -> Option<u32> {
        match self {
            Identity::ShiftStirling2 { lambda } | Identity::ShiftEulerian { lambda } => Some(lambda),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TailMethod {
    /// `α_k(s) = 0` for `k >= 1`, so the tail vanishes.
    Exact,
    PerTermBound,
    PositiveMajorant,
}

#[derive(Clone, Debug)]
pub struct SeriesResult {
    pub value: HPComplex,
    pub terms_used: usize,
    pub tail_bound: f64,
    pub target_tol: f64,
    pub precision: usize,
    pub method: Option<TailMethod>,
}

impl SeriesResult {
    pub fn certified(&self) -> bool {
        self.tail_bound <= self.target_tol
    }
}

#[derive(Clone, Debug)]
pub enum SeriesError {
    PoleAt { re: f64, im: f64 },
    BudgetExceeded { partial: Box<SeriesResult> },
    PreconditionViolated(String),
}

impl fmt::Display for SeriesError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesError::PoleAt { re, im } => write!(f, "pole at s = {re} + {im}i"),
            SeriesError::BudgetExceeded { partial } => write!(
                f,
                "term cap reached at N = {} with tail bound {:e}",
                partial.terms_used, partial.tail_bound
            ),
            SeriesError::PreconditionViolated(m) => write!(f, "precondition violated: {m}"),
        }
    }
}

impl From<OracleError> for SeriesError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::PoleAt { re, im } => SeriesError::PoleAt { re, im },
            OracleError::OutOfRange(m) => SeriesError::PreconditionViolated(m.into()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeriesConfig {
    /// Largest truncation index tried.
    pub term_cap: usize,
    /// Largest `λ` accepted by the shifted identities.
    pub max_lambda: u32,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        Self { term_cap: 200_000, max_lambda: 12 }
    }
}

/// Default size of the exact table used for removable singularities.
pub const DEFAULT_EXACT_TABLE: usize = 64;

/// Series evaluator over an immutable exact table.
#[derive(Clone, Debug)]
pub struct Evaluator {
    table: AlphaTable,
    config: SeriesConfig,
}

impl Default for Evaluator {
    fn default() -> Self {
        Self::new(build_alpha_table(DEFAULT_EXACT_TABLE), SeriesConfig::default())
    }
}

/// One `c_j / Π_{i ∈ I_j} (s+k-i)` component of the inner sum.
#[derive(Clone, Debug)]
struct Part {
    coeff: BigRational,
    offsets: Vec<i64>,
}

struct Shape {
    kmin: usize,
    parts: Vec<Part>,
}

fn shape(id: Identity) -> Shape {
    match id {
        Identity::Gamma => Shape { kmin: 0, parts: vec![Part { coeff: rat_int(1), offsets: vec![0] }] },
        Identity::GammaZeta => Shape { kmin: 0, parts: vec![Part { coeff: rat_int(1), offsets: vec![1] }] },
        Identity::EulerGamma => Shape { kmin: 1, parts: vec![Part { coeff: rat_int(-1), offsets: vec![0] }] },
        Identity::ShiftStirling2 { lambda } => {
            let l = lambda as usize;
            let mut s2 = TriangleCache::new(TriangleKind::Stirling2);
            let parts = (1..=l)
                .map(|j| {
                    let sign = if (l + j).is_multiple_of(2) { 1 } else { -1 };
                    Part {
                        coeff: BigRational::from_integer(BigInt::from(sign) * factorial(j) * s2.get(l, j)),
                        offsets: vec![j as i64 + 1],
                    }
                })
                .collect();
            Shape { kmin: 0, parts }
        }
        Identity::ShiftEulerian { lambda } => {
            let l = lambda as usize;
            let mut e = TriangleCache::new(TriangleKind::Eulerian);
            let parts = (0..l)
                .map(|j| Part {
                    coeff: BigRational::from_integer(e.get(l, j) * factorial(l - j - 1)),
                    offsets: (j as i64 + 2..=l as i64 + 1).collect(),
                })
                .collect();
            Shape { kmin: 0, parts }
        }
        Identity::Trigamma => Shape { kmin: 0, parts: Vec::new() },
    }
}

/// Sum of the Eulerian-form coefficients, `Σ_j E(λ,j) (λ-j-1)!`.
fn eulerian_weight(lambda: usize) -> Vec<f64> {
    let mut e = TriangleCache::new(TriangleKind::Eulerian);
    (0..lambda)
        .map(|j| (e.get(lambda, j) * factorial(lambda - j - 1)).to_f64().map_or(f64::INFINITY, up::rel))
        .collect()
}

/// Constants for `|inner_k(s)| <= F(k - c)` with `F` decreasing.
struct InnerBound {
    /// `c`, so the bound needs `k - c >= 1`.
    shift: f64,
    /// `E(λ,j)(λ-j-1)!` indexed by `λ-j-1`, or `[1]` for a single `1/D`.
    weights: Vec<f64>,
    /// Extra `1/D^2` term of the trigamma bound.
    square: bool,
}

impl InnerBound {
    fn new(id: Identity, abs_s: f64) -> Self {
        match id {
            Identity::Gamma => Self { shift: abs_s, weights: vec![1.0], square: false },
            Identity::EulerGamma => Self { shift: 0.0, weights: vec![1.0], square: false },
            Identity::GammaZeta => Self { shift: up::add(abs_s, 1.0), weights: vec![1.0], square: false },
            Identity::Trigamma => Self { shift: abs_s, weights: vec![1.0], square: true },
            Identity::ShiftStirling2 { lambda } | Identity::ShiftEulerian { lambda } => {
                let l = lambda as usize;
                let mut w = eulerian_weight(l);
                w.reverse();
                Self { shift: up::add(abs_s, (l + 1) as f64), weights: w, square: false }
            }
        }
    }

    /// Upper bound on `|inner_k|` given a lower bound `d` on `k - c`, `d >= 1`.
    fn at(&self, d: f64) -> f64 {
        // Σ_m weights[m] / d^(m+1)
        let mut acc = 0.0;
        let mut p = d;
        for w in &self.weights {
            acc = up::add(acc, up::div(*w, p));
            p = (p * d).next_down();
        }
        if self.square {
            acc = up::add(acc, up::div(1.0, (d * d).next_down()));
        }
        acc
    }

    /// `μ` with `|inner_k| <= μ / (k - c)` for `k - c >= 1`.
    fn mu(&self) -> f64 {
        let s = self.weights.iter().fold(0.0, |a, w| up::add(a, *w));
        if self.square {
            up::add(s, 1.0)
        } else {
            s
        }
    }
}

/// Upper bound on `Γ(n+1, u) = n! e^(-u) Σ_{m<=n} u^m/m!` for a lower bound `u`.
pub fn upper_incomplete_gamma_int(n: usize, u: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for m in 1..=n {
        term = up::div(up::mul(term, u), m as f64);
        sum = up::add(sum, term);
    }
    let fact = (1..=n).fold(1.0, |a, m| up::mul(a, m as f64));
    up::mul(up::mul(fact, sum), up::exp(-u))
}

/// Smallest admissible truncation for the per-term-bound certificate, with
/// `a = ceil(|s|) + 1`.
fn per_term_threshold(a: u64, abs_s: f64, shift: f64) -> f64 {
    (2.0 * shift + 1.0).max(2.0 * (abs_s + 2.0)).max(up::exp(a as f64 / 2.0))
}

/// The per-term-bound tail certificate with a general inner factor.
fn per_term_tail(a: u64, abs_s: f64, abs_s1: f64, inner: &InnerBound, n: usize) -> Option<f64> {
    if abs_s1 == 0.0 {
        return Some(0.0);
    }
    if (n as f64) < per_term_threshold(a, abs_s, inner.shift) {
        return None;
    }
    let a = a as usize;
    let c = crate::alpha::coefficient_bound_constant(abs_s, abs_s1);
    let u = 1.0 + up::rel_down(libm::log((n + 1) as f64));
    let g = upper_incomplete_gamma_int(a, u.next_down());
    let e = core::f64::consts::E.next_up();
    Some(up::mul(up::mul(up::mul(2.0, inner.mu()), up::mul(e, c)), g))
}

/// Certified bound on `|Σ_{k>N} α_k(s)/(s+k-j-1)|` from the per-term bound;
/// `pole_offset` is `j` (`-1` for the gamma series, `0` for `Γζ`).
pub fn tail_bound(s: &HPComplex, n: usize, pole_offset: i64) -> Result<f64, SeriesError> {
    let abs_s = s.abs_upper();
    let inner = InnerBound {
        shift: up::add(abs_s, (pole_offset + 1).unsigned_abs() as f64),
        weights: vec![1.0],
        square: false,
    };
    let a = s.ceil_abs() + 1;
    let need = per_term_threshold(a, abs_s, inner.shift);
    per_term_tail(a, abs_s, s.add_i64(-1).abs_upper(), &inner, n).ok_or_else(|| {
        SeriesError::PreconditionViolated(format!("N = {n} is below the admissible minimum {need:.0}"))
    })
}

/// Lower bounds on `α_k(r)` for an integer `r >= 2`, and on the partial sums
/// of `α_k(r)/(r+k)`.
///
/// `α_k(r)` is the coefficient of `t^k` in `g(t)^(r-1)`, computed by repeated
/// convolution with the coefficients `1/(i+1)` of `g`. All terms are positive,
/// so the relative error after `r-1` passes and the final summation is at
/// most about `((r-1)(n+3) + n + 4) ε`; results are deflated by four times
/// that amount.
pub struct Majorant {
    r: usize,
    levels: Vec<Vec<f64>>,
    partial: f64,
    total: f64,
}

impl Majorant {
    /// `None` when `(r-1)!` is not exactly representable.
    pub fn new(r: usize) -> Option<Self> {
        if !(2..=19).contains(&r) {
            return None;
        }
        let total = (1..r).map(|i| i as f64).product();
        Some(Self { r, levels: vec![Vec::new(); r - 1], partial: 0.0, total })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn len(&self) -> usize {
        self.levels[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn extend_to(&mut self, n: usize) {
        while self.len() <= n {
            let k = self.len();
            let mut prev_val = 1.0 / (k as f64 + 1.0);
            self.levels[0].push(prev_val);
            for m in 1..self.levels.len() {
                let (lo, hi) = self.levels.split_at_mut(m);
                let below = &lo[m - 1];
                let mut acc = 0.0;
                for i in 0..=k {
                    acc += below[k - i] / (i as f64 + 1.0);
                }
                hi[0].push(acc);
                prev_val = acc;
            }
            self.partial += prev_val / (self.r as f64 + k as f64);
        }
    }

    /// Approximate `α_k(r)`.
    pub fn value(&self, k: usize) -> f64 {
        self.levels[self.levels.len() - 1][k]
    }

    /// Upper bound on `Σ_{k>n} α_k(r)/(r+k)`, after `extend_to(n)` and with
    /// no further extension.
    pub fn tail(&self, n: usize) -> f64 {
        assert_eq!(self.len(), n + 1, "majorant must be extended exactly to n");
        let eps = f64::EPSILON;
        let delta = 4.0 * (((self.r - 1) * (n + 3) + n + 4) as f64) * eps;
        let lower = (self.partial * (1.0 - delta)).next_down();
        up::sub(self.total, lower).max(0.0)
    }
}

/// Index `r` of the majorant for `s`: the smallest integer `>= max(|s|, 2)`.
pub fn majorant_index(s: &HPComplex) -> usize {
    s.ceil_abs().max(2).min(usize::MAX as u64) as usize
}

fn majorant_tail(abs_s1: f64, inner: &InnerBound, maj: &Majorant, n: usize) -> Option<f64> {
    if abs_s1 == 0.0 {
        return Some(0.0);
    }
    let d = (n as f64 + 1.0 - inner.shift).next_down();
    if d < 1.0 {
        return None;
    }
    let r = maj.r() as f64;
    // sup_{k>n} (r+k) |inner_k| is attained at k = n+1 since both factors
    // decrease in k.
    let rho = up::mul(r + n as f64 + 1.0, inner.at(d));
    let ratio = up::div(abs_s1, r - 1.0);
    Some(up::mul(up::mul(ratio, rho), maj.tail(n)))
}

/// Exact handling of the pairs `(k, j)` whose denominator vanishes at `s0`.
struct SingularGroup {
    s0: i64,
    /// `(k, part index)` pairs excluded from the numeric inner sums.
    pairs: Vec<(usize, usize)>,
    max_k: usize,
}

impl Evaluator {
    pub fn new(table: AlphaTable, config: SeriesConfig) -> Self {
        Self { table, config }
    }

    pub fn with_config(config: SeriesConfig) -> Self {
        Self { config, ..Self::default() }
    }

    pub fn table(&self) -> &AlphaTable {
        &self.table
    }

    pub fn config(&self) -> &SeriesConfig {
        &self.config
    }

    fn check_lambda(&self, id: Identity) -> Result<(), SeriesError> {
        if let Some(l) = id.lambda() {
            if l == 0 || l > self.config.max_lambda {
                return Err(SeriesError::PreconditionViolated(format!(
                    "lambda must be in 1..={}",
                    self.config.max_lambda
                )));
            }
        }
        Ok(())
    }

    fn singular_group(&self, shape: &Shape, s: &HPComplex) -> Option<SingularGroup> {
        let p = s.precision() as i32;
        let s0 = s.nearest_integer()?;
        if s.distance_to_integer(s0) >= libm::ldexp(1.0, -p / 4) {
            return None;
        }
        let mut pairs = Vec::new();
        for (pi, part) in shape.parts.iter().enumerate() {
            for &i in &part.offsets {
                let k = i - s0;
                if k >= shape.kmin as i64 {
                    pairs.push((k as usize, pi));
                }
            }
        }
        if pairs.is_empty() {
            return None;
        }
        let max_k = pairs.iter().map(|p| p.0).max().unwrap_or(0);
        Some(SingularGroup { s0, pairs, max_k })
    }

    /// Value of the grouped singular terms at `s`, or `PoleAt`.
    fn singular_value(
        &self,
        shape: &Shape,
        g: &SingularGroup,
        s: &HPComplex,
        prec: usize,
    ) -> Result<HPComplex, SeriesError> {
        let pole = || SeriesError::PoleAt { re: s.re_f64(), im: s.im_f64() };
        if g.max_k > self.table.max_k() {
            return Err(pole());
        }
        let s0r = rat_int(g.s0);
        let sp = s.with_precision(prec);
        let mut numer = RationalPolynomial::zero();
        let mut smooth = HPComplex::zero(prec);
        for &(k, pi) in &g.pairs {
            let part = &shape.parts[pi];
            let alpha = self.table.alpha(k).expect("checked against max_k");
            // D = (s - s0) D'
            let mut dprime = RationalPolynomial::one();
            for &i in &part.offsets {
                if i - g.s0 != k as i64 {
                    dprime = dprime.mul_linear(&rat_int(i - k as i64));
                }
            }
            let d0 = dprime.eval(&s0r);
            numer = &numer + &alpha.scale(&(&part.coeff / &d0));
            if dprime.degree().unwrap_or(0) > 0 {
                // c α_k(s) (1/D'(s) - 1/D'(s0)) / (s - s0) = -c α_k(s) Q(s) / (D'(s) D'(s0))
                let q = (&dprime - &RationalPolynomial::constant(d0.clone()))
                    .divide_linear(&s0r)
                    .expect("root of D'(s) - D'(s0)");
                let c = HPComplex::from_rational(&(-&part.coeff / &d0), prec);
                let v = alpha.eval_complex(&sp).mul(&q.eval_complex(&sp)).div(&dprime.eval_complex(&sp));
                smooth = smooth.add(&c.mul(&v));
            }
        }
        let grouped = match numer.divide_linear(&s0r) {
            Ok(q) => q.eval_complex(&sp),
            Err(_) => {
                let tiny = libm::ldexp(1.0, -(s.precision() as i32) / 2);
                if s.distance_to_integer(g.s0) < tiny {
                    return Err(pole());
                }
                numer.eval_complex(&sp).div(&sp.add_i64(-g.s0))
            }
        };
        Ok(grouped.add(&smooth))
    }

    /// Evaluates `id` at `s` with a certified tail no larger than `tol`,
    /// doubling the truncation until the certificate holds or the term cap
    /// is reached.
    pub fn evaluate(&self, id: Identity, s: &HPComplex, tol: f64) -> Result<SeriesResult, SeriesError> {
        let p = s.precision();
        if !(tol > 0.0) || tol < libm::ldexp(1.0, -(p as i32) + 16) {
            return Err(SeriesError::PreconditionViolated(format!(
                "tolerance {tol:e} is below 2^(16 - {p})"
            )));
        }
        self.run(id, s, tol, None)
    }

    /// Evaluates `id` truncated after exactly `n` terms, reporting the tail
    /// bound at that `n` (infinite when no certificate applies).
    pub fn evaluate_at(&self, id: Identity, s: &HPComplex, n: usize) -> Result<SeriesResult, SeriesError> {
        self.run(id, s, f64::INFINITY, Some(n))
    }

    fn run(&self, id: Identity, s_in: &HPComplex, tol: f64, fixed: Option<usize>) -> Result<SeriesResult, SeriesError> {
        self.check_lambda(id)?;
        let p = s_in.precision();
        let s = if id == Identity::EulerGamma { HPComplex::zero(p) } else { s_in.clone() };
        let shape = shape(id);
        let abs_s = s.abs_upper();
        let abs_s1 = s.add_i64(-1).abs_upper();
        let inner_bound = InnerBound::new(id, abs_s);

        let group = if id == Identity::Trigamma {
            let tiny = libm::ldexp(1.0, -(p as i32) / 2);
            if let Some(n0) = s.nearest_integer() {
                if n0 <= 0 && s.distance_to_integer(n0) < tiny {
                    return Err(SeriesError::PoleAt { re: s.re_f64(), im: s.im_f64() });
                }
            }
            None
        } else {
            self.singular_group(&shape, &s)
        };

        let a = s.ceil_abs().saturating_add(1);
        let n_start = (2.0 * (abs_s + 2.0)).max(libm::exp(a as f64 / 2.0)).max(64.0);
        let n_start = libm::ceil(n_start) as usize;
        let n_start = n_start.max(group.as_ref().map_or(0, |g| g.max_k));
        let cap = self.config.term_cap.max(1);
        let (mut n, last) = match fixed {
            Some(f) => (f.max(group.as_ref().map_or(0, |g| g.max_k)), true),
            None => (n_start.min(cap), false),
        };
        let capacity = if fixed.is_some() { n } else { cap.max(n) };

        let seq_s = s.with_precision(p + 16);
        let mut seq = AlphaSequence::new(&seq_s, capacity).map_err(|e| SeriesError::PreconditionViolated(format!("{e}")))?;
        let g = seq.guard_precision();
        let sg = s.with_precision(g);
        let mut maj = Majorant::new(majorant_index(&s));

        let group_value = match &group {
            Some(gr) => Some(self.singular_value(&shape, gr, &s, g)?),
            None => None,
        };
        let coeffs: Vec<HPComplex> =
            shape.parts.iter().map(|part| HPComplex::from_rational(&part.coeff, g)).collect();
        let max_offset = shape.parts.iter().flat_map(|pt| pt.offsets.iter().copied()).max().unwrap_or(0);

        let oracle = OracleConfig::new(g);
        let mut psi = if id == Identity::Trigamma { Some(trigamma_ref(&sg, &oracle)?) } else { None };

        let mut sum = group_value.unwrap_or_else(|| HPComplex::zero(g));
        let mut next_k = shape.kmin;
        loop {
            seq.extend_to(n);
            while next_k <= n {
                let k = next_k;
                let alpha = seq.get(k).expect("extended");
                let term = if let Some(ps) = psi.as_mut() {
                    let t = alpha.mul(ps);
                    let z = sg.add_i64(k as i64);
                    *ps = ps.sub(&z.mul(&z).recip());
                    t
                } else {
                    let recips: Vec<HPComplex> =
                        (0..=max_offset).map(|i| sg.add_i64(k as i64 - i).recip()).collect();
                    let mut inner = HPComplex::zero(g);
                    for (pi, part) in shape.parts.iter().enumerate() {
                        if group.as_ref().is_some_and(|gr| gr.pairs.contains(&(k, pi))) {
                            continue;
                        }
                        let mut v = coeffs[pi].clone();
                        for &i in &part.offsets {
                            v = v.mul(&recips[i as usize]);
                        }
                        inner = inner.add(&v);
                    }
                    alpha.mul(&inner)
                };
                sum = sum.add(&term);
                next_k += 1;
            }

            let t1 = per_term_tail(a, abs_s, abs_s1, &inner_bound, n);
            let t2 = maj.as_mut().and_then(|m| {
                m.extend_to(n);
                majorant_tail(abs_s1, &inner_bound, m, n)
            });
            let (tail, method) = match (t1, t2) {
                _ if abs_s1 == 0.0 => (0.0, Some(TailMethod::Exact)),
                (Some(x), Some(y)) if y < x => (y, Some(TailMethod::PositiveMajorant)),
                (Some(x), _) => (x, Some(TailMethod::PerTermBound)),
                (None, Some(y)) => (y, Some(TailMethod::PositiveMajorant)),
                (None, None) => (f64::INFINITY, None),
            };
            let result = SeriesResult {
                value: sum.with_precision(p),
                terms_used: n,
                tail_bound: tail,
                target_tol: tol,
                precision: p,
                method,
            };
            if last || tail <= tol {
                return Ok(result);
            }
            if n >= cap {
                return Err(SeriesError::BudgetExceeded { partial: Box::new(result) });
            }
            n = (2 * n).min(cap);
        }
    }

    pub fn gamma(&self, s: &HPComplex, tol: f64) -> Result<SeriesResult, SeriesError> {
        self.evaluate(Identity::Gamma, s, tol)
    }

    pub fn gamma_zeta(&self, s: &HPComplex, tol: f64) -> Result<SeriesResult, SeriesError> {
        self.evaluate(Identity::GammaZeta, s, tol)
    }

    pub fn shift_stirling2(&self, s: &HPComplex, lambda: u32, tol: f64) -> Result<SeriesResult, SeriesError> {
        self.evaluate(Identity::ShiftStirling2 { lambda }, s, tol)
    }

    pub fn shift_eulerian(&self, s: &HPComplex, lambda: u32, tol: f64) -> Result<SeriesResult, SeriesError> {
        self.evaluate(Identity::ShiftEulerian { lambda }, s, tol)
    }

    pub fn plus1_trigamma(&self, s: &HPComplex, tol: f64) -> Result<SeriesResult, SeriesError> {
        self.evaluate(Identity::Trigamma, s, tol)
    }

    /// `γ` at `prec` bits.
    pub fn euler_gamma(&self, tol: f64, prec: usize) -> Result<SeriesResult, SeriesError> {
        self.evaluate(Identity::EulerGamma, &HPComplex::zero(prec), tol)
    }

    /// `ζ(s)` as the `Γ(s)ζ(s)` series divided by the reference `Γ(s)`. The
    /// series runs to a tolerance scaled by `|Γ(s)|` so that the reported
    /// bound applies to `ζ(s)`.
    pub fn zeta(&self, s: &HPComplex, tol: f64) -> Result<SeriesResult, SeriesError> {
        let p = s.precision();
        let gamma = gamma_ref(&s.with_precision(p + 32), &OracleConfig::new(p + 32))?;
        // relative error of the reference is far below 2^-40
        let g_low = (gamma.abs_lower() * (1.0 - libm::ldexp(1.0, -40))).next_down();
        if !(g_low > 0.0) {
            return Err(SeriesError::PreconditionViolated("reference gamma underflows".into()));
        }
        let scale = |r: SeriesResult| SeriesResult {
            value: r.value.with_precision(p + 32).div(&gamma).with_precision(p),
            tail_bound: up::div(r.tail_bound, g_low),
            target_tol: tol,
            ..r
        };
        match self.evaluate(Identity::GammaZeta, s, (tol * g_low).next_down()) {
            Ok(r) => Ok(scale(r)),
            Err(SeriesError::BudgetExceeded { partial }) => {
                Err(SeriesError::BudgetExceeded { partial: Box::new(scale(*partial)) })
            }
            Err(e) => Err(e),
        }
    }
}

pub fn gamma_series(s: &HPComplex, tol: f64) -> Result<SeriesResult, SeriesError> {
    Evaluator::default().gamma(s, tol)
}

pub fn gamma_zeta_series(s: &HPComplex, tol: f64) -> Result<SeriesResult, SeriesError> {
    Evaluator::default().gamma_zeta(s, tol)
}

pub fn zeta_from_series(s: &HPComplex, tol: f64) -> Result<SeriesResult, SeriesError> {
    Evaluator::default().zeta(s, tol)
}

pub fn zeta_shift_stirling2(s: &HPComplex, lambda: u32, tol: f64) -> Result<SeriesResult, SeriesError> {
    Evaluator::default().shift_stirling2(s, lambda, tol)
}

pub fn zeta_shift_eulerian(s: &HPComplex, lambda: u32, tol: f64) -> Result<SeriesResult, SeriesError> {
    Evaluator::default().shift_eulerian(s, lambda, tol)
}

pub fn zeta_plus1_trigamma(s: &HPComplex, tol: f64) -> Result<SeriesResult, SeriesError> {
    Evaluator::default().plus1_trigamma(s, tol)
}

pub fn euler_gamma_limit(tol: f64) -> Result<SeriesResult, SeriesError> {
    Evaluator::default().euler_gamma(tol, 128)
}

/// Inner coefficients `c_j` of the Stirling-2 form, for `j = λ..=1`, matching
/// denominators `s+k-λ-1, ..., s+k-2`.
pub fn stirling2_inner_coefficients(lambda: u32) -> Vec<BigInt> {
    let mut v: Vec<BigInt> = shape(Identity::ShiftStirling2 { lambda })
        .parts
        .into_iter()
        .map(|p| p.coeff.to_integer())
        .collect();
    v.reverse();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{pi, zeta_em};

    const P: usize = 128;

    fn c(x: f64) -> HPComplex {
        HPComplex::from_f64(x, 0.0, P)
    }

    fn err(a: &HPComplex, b: &HPComplex) -> f64 {
        a.sub(b).abs_upper()
    }

    #[test]
    fn incomplete_gamma_closed_form() {
        // Γ(1, u) = e^-u, Γ(3, u) = e^-u (u^2 + 2u + 2)
        let u = 2.5f64;
        assert!(upper_incomplete_gamma_int(0, u) >= libm::exp(-u));
        let g3 = libm::exp(-u) * (u * u + 2.0 * u + 2.0);
        let b = upper_incomplete_gamma_int(2, u);
        assert!(b >= g3 && b < g3 * (1.0 + 1e-12));
    }

    #[test]
    fn per_term_tail_examples() {
        let s = c(2.0);
        assert!(tail_bound(&s, 1000, 0).unwrap() >= 1.0 / 1002.0);
        let b: Vec<f64> = [512, 1024, 2048, 4096].iter().map(|&n| tail_bound(&s, n, 0).unwrap()).collect();
        assert!(b.windows(2).all(|w| w[1] < w[0]));
        assert_eq!(tail_bound(&c(1.0), 500, 0).unwrap(), 0.0);
        assert!(matches!(tail_bound(&s, 3, 0), Err(SeriesError::PreconditionViolated(_))));
    }

    #[test]
    fn majorant_at_two_is_exact_series() {
        // α_k(2) = 1/(k+1), Σ_{k>n} 1/((k+1)(k+2)) = 1/(n+2)
        let mut m = Majorant::new(2).unwrap();
        m.extend_to(100);
        let t = m.tail(100);
        assert!((1.0 / 102.0..1.0 / 102.0 + 1e-12).contains(&t));
    }

    #[test]
    fn majorant_matches_exact_alpha() {
        let t = build_alpha_table(30);
        let mut m = Majorant::new(5).unwrap();
        m.extend_to(30);
        for k in 0..=30 {
            let want = t.eval(k, &rat_int(5)).unwrap().to_f64().unwrap();
            assert!((m.value(k) - want).abs() <= 1e-13 * want);
        }
    }

    #[test]
    fn gamma_examples() {
        let one = gamma_series(&c(1.0), 1e-3).unwrap();
        assert_eq!(one.value.re_f64(), 1.0);
        assert_eq!(one.tail_bound, 0.0);
        let half = gamma_series(&c(0.5), 1e-3).unwrap();
        let sqrt_pi = pi(P).re().sqrt(P, crate::hp::RM);
        assert!((half.value.re_f64() - crate::hp::bf_to_f64(&sqrt_pi)).abs() <= 1e-3);
        assert!(half.tail_bound <= 1e-3);
        assert!(matches!(gamma_series(&c(0.0), 1e-3), Err(SeriesError::PoleAt { .. })));
        assert!(matches!(gamma_series(&c(-3.0), 1e-3), Err(SeriesError::PoleAt { .. })));
    }

    #[test]
    fn gamma_zeta_poles_and_removable_points() {
        for s in [1.0, 0.0, -1.0, -3.0] {
            assert!(matches!(gamma_zeta_series(&c(s), 1e-3), Err(SeriesError::PoleAt { .. })), "s={s}");
        }
        // Γ(s)ζ(s) at s = -2 is ζ'(-2)/2 = -ζ(3)/(8π^2)
        let r = gamma_zeta_series(&c(-2.0), 1e-2).unwrap();
        let z3 = zeta_em(&c(3.0), &OracleConfig::new(P)).unwrap();
        let want = z3.div(&pi(P).mul(&pi(P)).mul_i64(8)).neg();
        assert!(err(&r.value, &want) <= r.tail_bound, "{}", r.value);
    }

    #[test]
    fn shifted_collapse_at_one() {
        // Γ(1)ζ(1-λ) from the series at s = 1 equals Euler's formula.
        let ev = Evaluator::default();
        for lambda in 1..=6u32 {
            let want = crate::special_values::euler_formula(lambda as usize);
            let want = crate::hp::HPComplex::from_rational(&want, P);
            for id in [Identity::ShiftStirling2 { lambda }, Identity::ShiftEulerian { lambda }] {
                let r = ev.evaluate(id, &c(1.0), 1e-20).unwrap();
                assert_eq!(r.tail_bound, 0.0);
                assert!(err(&r.value, &want) < 1e-30, "{id:?} {}", r.value);
            }
        }
    }

    #[test]
    fn inner_coefficients_row_four() {
        let v: Vec<i64> = stirling2_inner_coefficients(4).iter().map(|b| b.to_i64().unwrap()).collect();
        assert_eq!(v, [24, -36, 14, -1]);
    }

    #[test]
    fn low_tolerance_is_rejected() {
        assert!(matches!(gamma_series(&c(2.0), 1e-60), Err(SeriesError::PreconditionViolated(_))));
    }
}
