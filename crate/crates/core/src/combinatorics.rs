//! Stirling numbers of both kinds, Eulerian numbers, Bernoulli numbers and
//! polynomials, rising factorials, and the Nörlund-type integral of the
//! rising factorial.
//!
//! Triangles are grown row by row from their recurrences and memoized in a
//! [`TriangleCache`]. Growth needs `&mut`, so a cache shared between threads
//! has a single writer by construction; completed rows are read through `&`.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::exact::{rat_int, RationalPolynomial};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TriangleKind {
    /// Signed Stirling numbers of the first kind `s(n, m)`.
    Stirling1,
    /// Stirling numbers of the second kind `S(n, j)`.
    Stirling2,
    /// Eulerian numbers `E(n, j)`.
    Eulerian,
}

/// Memoized triangular table; row `n` holds entries `0..=n`.
#[derive(Clone, Debug)]
pub struct TriangleCache {
    kind: TriangleKind,
    rows: Vec<Vec<BigInt>>,
}

impl TriangleCache {
    pub fn new(kind: TriangleKind) -> Self {
        Self { kind, rows: vec![vec![BigInt::one()]] }
    }

    pub fn kind(&self) -> TriangleKind {
        self.kind
    }

    /// Number of completed rows.
    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    /// Grows the table so that row `n` exists.
    pub fn ensure(&mut self, n: usize) {
        while self.rows.len() <= n {
            let n0 = self.rows.len() - 1;
            let prev = &self.rows[n0];
            let at = |j: isize| -> BigInt {
                if j < 0 || j as usize >= prev.len() {
                    BigInt::zero()
                } else {
                    prev[j as usize].clone()
                }
            };
            let nb = BigInt::from(n0);
            let row: Vec<BigInt> = (0..=n0 + 1)
                .map(|j| {
                    let ji = j as isize;
                    let jb = BigInt::from(j);
                    match self.kind {
                        // s(n+1, m) = s(n, m-1) - n s(n, m)
                        TriangleKind::Stirling1 => at(ji - 1) - &nb * at(ji),
                        // S(n+1, j) = S(n, j-1) + j S(n, j)
                        TriangleKind::Stirling2 => at(ji - 1) + jb * at(ji),
                        // E(n+1, j) = (j+1) E(n, j) + (n+1-j) E(n, j-1)
                        TriangleKind::Eulerian => {
                            (&jb + 1) * at(ji) + (&nb + 1 - &jb) * at(ji - 1)
                        }
                    }
                })
                .collect();
            self.rows.push(row);
        }
    }

    /// Entry `(n, m)`, zero outside the triangle. Grows the table if needed.
    pub fn get(&mut self, n: usize, m: usize) -> BigInt {
        self.ensure(n);
        self.peek(n, m).expect("row ensured")
    }

    /// Read-only lookup; `None` when row `n` has not been computed yet.
    pub fn peek(&self, n: usize, m: usize) -> Option<BigInt> {
        let row = self.rows.get(n)?;
        Some(row.get(m).cloned().unwrap_or_else(BigInt::zero))
    }

    pub fn row(&mut self, n: usize) -> &[BigInt] {
        self.ensure(n);
        &self.rows[n]
    }
}

pub fn stirling1(n: usize, m: usize) -> BigInt {
    TriangleCache::new(TriangleKind::Stirling1).get(n, m)
}

pub fn stirling2(lambda: usize, j: usize) -> BigInt {
    TriangleCache::new(TriangleKind::Stirling2).get(lambda, j)
}

pub fn eulerian(lambda: usize, j: usize) -> BigInt {
    TriangleCache::new(TriangleKind::Eulerian).get(lambda, j)
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Bernoulli polynomials grown from `B_0 = 1`, `B_k' = k B_{k-1}` and
/// `∫_0^1 B_k = 0`.
#[derive(Clone, Debug)]
pub struct BernoulliTable {
    polys: Vec<RationalPolynomial>,
}

impl Default for BernoulliTable {
    fn default() -> Self {
        Self::new()
    }
}

impl BernoulliTable {
    pub fn new() -> Self {
        Self { polys: vec![RationalPolynomial::one()] }
    }

    pub fn ensure(&mut self, n: usize) {
        let zero = BigRational::zero();
        let one = BigRational::one();
        while self.polys.len() <= n {
            let k = self.polys.len();
            let prev = &self.polys[k - 1];
            let anti = prev.antiderivative().scale(&rat_int(k as i64));
            let c = -anti.integrate(&zero, &one);
            let next = &anti + &RationalPolynomial::constant(c);
            self.polys.push(next);
        }
    }

    pub fn polynomial(&mut self, n: usize) -> &RationalPolynomial {
        self.ensure(n);
        &self.polys[n]
    }

    /// `B_n = B_n(0)`, so `B_1 = -1/2`.
    pub fn number(&mut self, n: usize) -> BigRational {
        self.polynomial(n).coeff(0)
    }
}

pub fn bernoulli_number(n: usize) -> BigRational {
    BernoulliTable::new().number(n)
}

pub fn bernoulli_polynomial(n: usize) -> RationalPolynomial {
    BernoulliTable::new().polynomial(n).clone()
}

/// `(x)_k = x (x+1) ... (x+k-1)`.
pub fn rising_factorial(k: usize) -> RationalPolynomial {
    (0..k).fold(RationalPolynomial::one(), |acc, i| {
        &acc * &RationalPolynomial::linear(rat_int(i as i64), BigRational::one())
    })
}

/// `x (x-1) ... (x-k+1)`.
pub fn falling_factorial(k: usize) -> RationalPolynomial {
    (0..k).fold(RationalPolynomial::one(), |acc, i| {
        &acc * &RationalPolynomial::linear(rat_int(-(i as i64)), BigRational::one())
    })
}

/// `∫_0^1 (x)_k dx`, by exact term-wise integration.
pub fn norlund_integral(k: usize) -> BigRational {
    rising_factorial(k).integrate(&BigRational::zero(), &BigRational::one())
}

/// Laurent coefficients of `sum_{n>=1} n^lambda (1-t)^(n-1)` in powers of
/// `1/t`, obtained by repeatedly multiplying by `(1-t)` and applying `-d/dt`
/// to `1/t`. Entry `i` is the coefficient of `t^-i`.
pub fn power_sum_by_differentiation(lambda: usize) -> Vec<BigInt> {
    let mut f = vec![BigInt::zero(), BigInt::one()];
    for _ in 0..lambda {
        // (1-t) f: coefficient of t^-m is c_m - c_{m+1}; m = 0 is a constant.
        let len = f.len();
        let g: Vec<BigInt> = (0..len)
            .map(|m| {
                let next = f.get(m + 1).cloned().unwrap_or_else(BigInt::zero);
                &f[m] - next
            })
            .collect();
        // -d/dt t^-m = m t^-(m+1)
        let mut h = vec![BigInt::zero(); len + 1];
        for (m, c) in g.iter().enumerate() {
            h[m + 1] = c * BigInt::from(m);
        }
        f = h;
    }
    while f.last().is_some_and(Zero::is_zero) {
        f.pop();
    }
    f
}

/// The same Laurent coefficients from `sum_j (-1)^(lambda+j) j! S(lambda,j) / t^(j+1)`.
pub fn power_sum_by_stirling2(lambda: usize) -> Vec<BigInt> {
    let mut s2 = TriangleCache::new(TriangleKind::Stirling2);
    let mut out = vec![BigInt::zero(); lambda + 2];
    if lambda == 0 {
        out[1] = BigInt::one();
        return out;
    }
    for j in 1..=lambda {
        let sign = if (lambda + j).is_multiple_of(2) { BigInt::one() } else { -BigInt::one() };
        out[j + 1] = sign * factorial(j) * s2.get(lambda, j);
    }
    out
}

/// The same Laurent coefficients from the Eulerian form
/// `t^-(lambda+1) sum_j E(lambda,j) (1-t)^(lambda-j-1)`.
pub fn power_sum_by_eulerian(lambda: usize) -> Vec<BigInt> {
    let mut e = TriangleCache::new(TriangleKind::Eulerian);
    let mut out = vec![BigInt::zero(); lambda + 2];
    if lambda == 0 {
        out[1] = BigInt::one();
        return out;
    }
    for j in 0..lambda {
        let m = lambda - j - 1;
        let ej = e.get(lambda, j);
        // (1-t)^m = sum_i C(m,i) (-t)^i contributes to t^-(lambda+1-i)
        for i in 0..=m {
            let sign = if i % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            out[lambda + 1 - i] += &ej * binomial(m, i) * sign;
        }
    }
    out
}

/// Re-expands a Laurent polynomial `sum_i c_i t^-i` as a power series in
/// `u = 1 - t`, truncated after `u^order`.
pub fn laurent_to_series_in_u(laurent: &[BigInt], order: usize) -> Vec<BigRational> {
    // t^-i = (1-u)^-i = sum_n C(n+i-1, i-1) u^n for i >= 1
    (0..=order)
        .map(|n| {
            let mut acc = BigInt::zero();
            for (i, c) in laurent.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let coef = if i == 0 {
                    if n == 0 { BigInt::one() } else { BigInt::zero() }
                } else {
                    binomial(n + i - 1, i - 1)
                };
                acc += c * coef;
            }
            BigRational::from_integer(acc)
        })
        .collect()
}

/// Direct coefficients of `sum_n n^lambda u^(n-1)` up to `u^order`.
pub fn power_sum_series_brute(lambda: usize, order: usize) -> Vec<BigRational> {
    (1..=order + 1)
        .map(|n| BigRational::from_integer(num_traits::pow(BigInt::from(n), lambda)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn stirling_first_kind() {
        assert_eq!(stirling1(1, 1), b(1));
        assert_eq!(stirling1(0, 0), b(1));
        assert_eq!(stirling1(3, 1), b(2));
        assert_eq!(stirling1(4, 2), b(11));
        assert_eq!(stirling1(2, 1), b(-1));
        assert_eq!(stirling1(3, 5), b(0));
    }

    #[test]
    fn stirling_first_kind_from_log_series() {
        // log(1+t)^m = m! sum_n s(n,m) t^n / n!, checked by power-series multiplication
        let order = 12;
        let log1p: Vec<BigRational> = (0..=order)
            .map(|n| if n == 0 { rat(0, 1) } else { rat(if n % 2 == 1 { 1 } else { -1 }, n as i64) })
            .collect();
        let mut power = vec![rat(0, 1); order + 1];
        power[0] = rat(1, 1);
        let mut cache = TriangleCache::new(TriangleKind::Stirling1);
        for m in 1..=6 {
            let mut next = vec![rat(0, 1); order + 1];
            for i in 0..=order {
                for j in 0..=order - i {
                    next[i + j] += &power[i] * &log1p[j];
                }
            }
            power = next;
            for n in 0..=order {
                let expect = BigRational::from_integer(factorial(m) * cache.get(n, m))
                    / BigRational::from_integer(factorial(n));
                assert_eq!(power[n], expect, "n={n} m={m}");
            }
        }
    }

    #[test]
    fn stirling_second_kind() {
        assert_eq!(stirling2(4, 2), b(7));
        assert_eq!(stirling2(4, 3), b(6));
        for l in 1..20 {
            assert_eq!(stirling2(l, 1), b(1));
        }
    }

    #[test]
    fn stirling2_falling_factorial_expansion() {
        let mut s2 = TriangleCache::new(TriangleKind::Stirling2);
        for lambda in 0..=12usize {
            for x in 0..=12i64 {
                let mut acc = BigInt::zero();
                for j in 0..=lambda {
                    let ff: BigInt = (0..j as i64).map(|i| b(x - i)).product();
                    acc += s2.get(lambda, j) * ff;
                }
                assert_eq!(acc, num_traits::pow(b(x), lambda), "lambda={lambda} x={x}");
            }
        }
    }

    #[test]
    fn eulerian_numbers() {
        assert_eq!(eulerian(1, 0), b(1));
        assert_eq!(eulerian(4, 1), b(11));
        assert_eq!(eulerian(4, 4), b(0));
        let mut e = TriangleCache::new(TriangleKind::Eulerian);
        for lambda in 1..=12 {
            let sum: BigInt = e.row(lambda).iter().sum();
            assert_eq!(sum, factorial(lambda), "lambda={lambda}");
        }
        assert_eq!(e.row(4).iter().sum::<BigInt>(), b(24));
    }

    #[test]
    fn k0_alternating_stirling_sum() {
        let mut s2 = TriangleCache::new(TriangleKind::Stirling2);
        for lambda in 1..=15usize {
            let mut acc = BigInt::zero();
            for k in 1..=lambda {
                let sign = if (k - 1) % 2 == 0 { b(1) } else { b(-1) };
                acc += sign * factorial(k - 1) * s2.get(lambda, k);
            }
            let expect = if lambda == 1 { b(1) } else { b(0) };
            assert_eq!(acc, expect, "lambda={lambda}");
        }
    }

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli_number(0), rat(1, 1));
        assert_eq!(bernoulli_number(1), rat(-1, 2));
        assert_eq!(bernoulli_number(2), rat(1, 6));
        assert_eq!(bernoulli_number(3), rat(0, 1));
        assert_eq!(bernoulli_number(12), rat(-691, 2730));
        assert_eq!(bernoulli_polynomial(0), RationalPolynomial::one());
        assert_eq!(bernoulli_polynomial(1), RationalPolynomial::linear(rat(-1, 2), rat(1, 1)));
        let b3 = bernoulli_polynomial(3);
        assert_eq!(b3.integrate(&rat(-1, 1), &rat(0, 1)), rat(-1, 1));
    }

    #[test]
    fn bernoulli_difference_equation() {
        let mut t = BernoulliTable::new();
        for lambda in 1..=15usize {
            let p = t.polynomial(lambda).clone();
            let diff = &p.shift(&rat(1, 1)) - &p;
            let mut mono = vec![rat(0, 1); lambda + 1];
            mono[lambda - 1] = rat(lambda as i64, 1);
            // (B(u+1) - B(u)) / lambda = u^(lambda-1)
            assert_eq!(diff, RationalPolynomial::from_coeffs(mono), "lambda={lambda}");
        }
    }

    #[test]
    fn rising_factorials_and_integrals() {
        assert_eq!(rising_factorial(0), RationalPolynomial::one());
        assert_eq!(rising_factorial(1), RationalPolynomial::x());
        assert_eq!(rising_factorial(2), RationalPolynomial::from_integers(&[0, 1, 1]));
        assert_eq!(norlund_integral(1), rat(1, 2));
        assert_eq!(norlund_integral(2), rat(5, 6));
        assert_eq!(norlund_integral(2) / rat(4, 1), rat(5, 24));
    }

    #[test]
    fn power_sum_table_rows() {
        assert_eq!(power_sum_by_differentiation(1), [b(0), b(0), b(1)]);
        assert_eq!(power_sum_by_differentiation(4), [b(0), b(0), b(-1), b(14), b(-36), b(24)]);
        for lambda in 1..=10 {
            let d = power_sum_by_differentiation(lambda);
            let mut s = power_sum_by_stirling2(lambda);
            let mut e = power_sum_by_eulerian(lambda);
            while s.last().is_some_and(Zero::is_zero) {
                s.pop();
            }
            while e.last().is_some_and(Zero::is_zero) {
                e.pop();
            }
            assert_eq!(d, s, "lambda={lambda}");
            assert_eq!(d, e, "lambda={lambda}");
            assert_eq!(laurent_to_series_in_u(&d, 12), power_sum_series_brute(lambda, 12));
        }
    }
}
