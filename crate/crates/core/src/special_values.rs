//! Exact `ζ(1-λ)` for positive integers `λ` by two independent routes: the
//! derivative values `α_k(1)'` combined with Stirling numbers of the second
//! kind, and Euler's Bernoulli-number formula.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::alpha::{build_alpha_table, AlphaPrimeTable, AlphaTable};
use crate::combinatorics::{factorial, BernoulliTable, TriangleCache, TriangleKind};
use crate::exact::rat_int;

/// Default largest `λ` handled by [`zeta_nonpositive`].
pub const DEFAULT_MAX_LAMBDA: usize = 40;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecialValueReport {
    pub lambda: usize,
    pub via_alpha_prime: BigRational,
    pub via_euler: BigRational,
    /// Contribution of the `k = 0` term: `-1` for `λ = 1`, else `0`.
    pub delta_term: BigRational,
    pub agree: bool,
}

fn sign(even: bool) -> BigInt {
    if even {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

/// `(-1)^λ Σ_{j=1}^λ (-1)^(j-1) (j-1)! S(λ,j)`.
pub fn k0_term(lambda: usize) -> BigRational {
    assert!(lambda >= 1, "defined for lambda >= 1");
    let mut s2 = TriangleCache::new(TriangleKind::Stirling2);
    let mut acc = BigInt::zero();
    for j in 1..=lambda {
        acc += sign((j - 1) % 2 == 0) * factorial(j - 1) * s2.get(lambda, j);
    }
    BigRational::from_integer(sign(lambda.is_multiple_of(2)) * acc)
}

/// `(-1)^(λ+1) B_λ / λ`.
pub fn euler_formula(lambda: usize) -> BigRational {
    assert!(lambda >= 1, "defined for lambda >= 1");
    let b = BernoulliTable::new().number(lambda);
    let v = b / rat_int(lambda as i64);
    if lambda % 2 == 1 {
        v
    } else {
        -v
    }
}

/// `ζ(1-λ)` from the derivative table, with the Euler-formula value for
/// comparison. `primes` must cover index `λ`.
pub fn zeta_nonpositive_with(lambda: usize, primes: &AlphaPrimeTable) -> SpecialValueReport {
    assert!(lambda >= 1, "defined for lambda >= 1");
    assert!(primes.values.len() > lambda, "derivative table too short");
    let mut s2 = TriangleCache::new(TriangleKind::Stirling2);
    let mut acc = BigRational::zero();
    for k in 1..=lambda {
        let c = sign(k % 2 == 0) * factorial(k) * s2.get(lambda, k);
        acc += &primes.values[k] * BigRational::from_integer(c);
    }
    let delta_term = k0_term(lambda);
    let via_alpha_prime = &delta_term + BigRational::from_integer(sign(lambda.is_multiple_of(2))) * acc;
    let via_euler = euler_formula(lambda);
    let agree = via_alpha_prime == via_euler;
    SpecialValueReport { lambda, via_alpha_prime, via_euler, delta_term, agree }
}

pub fn zeta_nonpositive(lambda: usize) -> SpecialValueReport {
    zeta_nonpositive_with(lambda, &crate::alpha::build_alpha_prime(lambda))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueCheck {
    pub name: &'static str,
    /// `k` for the value at `-k`, `m` for the two Bernoulli identities.
    pub index: usize,
    pub passed: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ResidueReport {
    pub checks: Vec<ResidueCheck>,
}

impl ResidueReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Verifies `α_k(-k) = (-1)^k/k!` for `k <= 2 m_max + 2` and the two
/// Bernoulli identities at `-2m-1` and `-2m` for `m <= m_max`.
pub fn residue_identities_with(table: &AlphaTable, m_max: usize) -> ResidueReport {
    let kmax = 2 * m_max + 2;
    assert!(table.max_k() >= kmax, "table must reach k = 2 m_max + 2");
    let mut bern = BernoulliTable::new();
    let mut checks = Vec::new();
    for k in 0..=kmax {
        let want = BigRational::new(sign(k % 2 == 0), factorial(k));
        let got = table.eval(k, &rat_int(-(k as i64))).expect("in table");
        checks.push(ResidueCheck { name: "alpha_k(-k)", index: k, passed: got == want });
    }
    for m in 0..=m_max {
        let k = 2 * m + 2;
        let bk = bern.number(k) / BigRational::from_integer(factorial(k));
        let at_odd = table.eval(k, &rat_int(-(2 * m as i64) - 1)).expect("in table");
        checks.push(ResidueCheck { name: "alpha_2m+2(-2m-1)", index: m, passed: at_odd == bk });
        let at_even = table.eval(k, &rat_int(-(2 * m as i64))).expect("in table");
        let want = -bk * rat_int((2 * m + 1) as i64);
        checks.push(ResidueCheck { name: "alpha_2m+2(-2m)", index: m, passed: at_even == want });
    }
    ResidueReport { checks }
}

pub fn residue_identities(m_max: usize) -> ResidueReport {
    residue_identities_with(&build_alpha_table(2 * m_max + 2), m_max)
}

/// `∫_{-1}^0 B_λ(u) du`.
pub fn bernoulli_integral(lambda: usize) -> BigRational {
    BernoulliTable::new().polynomial(lambda).integrate(&rat_int(-1), &BigRational::zero())
}

/// Checks `u(u-1)...(u-k+1)/k = Σ_{m=0}^{u-1} m(m-1)...(m-k+2)` at integers.
pub fn telescoping_identity(u: i64, k: usize) -> bool {
    assert!(k >= 1, "defined for k >= 1");
    let falling = |x: i64, n: usize| -> BigInt { (0..n as i64).map(|i| BigInt::from(x - i)).product() };
    let lhs = BigRational::new(falling(u, k), BigInt::from(k));
    let rhs: BigInt = (0..u).map(|m| falling(m, k - 1)).sum();
    lhs == BigRational::from_integer(rhs)
}
