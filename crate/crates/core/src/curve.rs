//! Exact arithmetic of curve zeta data over finite fields.
//!
//! A curve enters the system as an arithmetic profile: its genus `g`, the
//! field size `q` and the integer coefficients of the zeta numerator `P(t)`,
//! so that `Z_C(t) = P(t) / ((1-t)(1-qt))`. Validation enforces the Weil
//! constraints that are exactly checkable (coefficient count, leading
//! coefficients, functional equation); everything downstream is derived from
//! the certified profile with arbitrary-precision integers and rationals.
//! Point counting on explicit curve equations is out of scope by design:
//! profiles are inputs.

use num::{BigInt, BigRational, One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Raw curve profile, as read from a JSON file.
///
/// The on-disk format is
/// `{"name": ..., "genus": g, "q": q, "zeta_numerator": [a_0, ..., a_2g]}`
/// with bit-exact integers; floating point values are rejected by
/// deserialization.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct CurveData {
    pub name: String,
    pub genus: u32,
    pub q: u64,
    pub zeta_numerator: Vec<i64>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CurveError {
    #[error("zeta numerator has {found} coefficients, expected 2g+1 = {expected}")]
    BadLength { expected: usize, found: usize },
    #[error("functional equation violated: a_{{2g-{index}}} != q^(g-{index}) * a_{index}")]
    FunctionalEquationViolated { index: usize },
    #[error("leading coefficients must satisfy a_0 = 1 and a_2g = q^g")]
    BadLeadingCoefficient,
    #[error("field size q = {0} must be at least 2")]
    BadFieldSize(u64),
    #[error("Jacobian count P(1) = {0} is not positive")]
    NonPositiveJacCount(BigInt),
    #[error("zeta function has a pole at exponent k = {0}; need k >= 2")]
    PoleAtArgument(i64),
}

/// A curve profile whose exactly checkable Weil constraints hold.
///
/// Construction goes through [`validate_curve`]; all fields are immutable
/// afterwards and every method is a pure function, so values can be shared
/// freely between threads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidatedCurve {
    name: String,
    genus: u32,
    q: u64,
    numerator: Vec<BigInt>,
    warnings: Vec<String>,
}

/// Checks the Weil constraints on a raw profile and certifies it.
///
/// Hard errors: wrong coefficient count, `q < 2`, `a_0 != 1` or
/// `a_2g != q^g`, or a violated functional equation. The Hasse–Weil
/// root-location condition is only checkable exactly in its integer form
/// `|a_1| <= 2g * ceil(sqrt(q))`; a violation produces a warning, not an
/// error, as does a composite `q` that is not a prime power.
pub fn validate_curve(raw: &CurveData) -> Result<ValidatedCurve, CurveError> {
    let g = raw.genus as usize;
    let expected = 2 * g + 1;
    if raw.zeta_numerator.len() != expected {
        return Err(CurveError::BadLength {
            expected,
            found: raw.zeta_numerator.len(),
        });
    }
    if raw.q < 2 {
        return Err(CurveError::BadFieldSize(raw.q));
    }
    let q = BigInt::from(raw.q);
    let a: Vec<BigInt> = raw.zeta_numerator.iter().map(|&c| BigInt::from(c)).collect();
    if a[0] != BigInt::one() {
        return Err(CurveError::BadLeadingCoefficient);
    }
    // a_{2g-i} = q^{g-i} a_i; the cases i > g are equivalent to i' = 2g-i <= g,
    // and i = 0 is the trailing-coefficient condition a_2g = q^g.
    for i in 0..=g {
        if a[2 * g - i] != num::pow(q.clone(), g - i) * &a[i] {
            return Err(CurveError::FunctionalEquationViolated { index: i });
        }
    }
    let mut warnings = Vec::new();
    if g >= 1 {
        let bound = BigInt::from(2 * raw.genus as u64) * BigInt::from(ceil_sqrt(raw.q));
        if a[1].abs() > bound {
            warnings.push(format!(
                "|a_1| = {} exceeds the Hasse-Weil bound 2g*ceil(sqrt(q)) = {}",
                a[1].abs(),
                bound
            ));
        }
    }
    if !is_prime_power(raw.q) {
        warnings.push(format!("q = {} is not a prime power", raw.q));
    }
    Ok(ValidatedCurve {
        name: raw.name.clone(),
        genus: raw.genus,
        q: raw.q,
        numerator: a,
        warnings,
    })
}

impl ValidatedCurve {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn q_big(&self) -> BigInt {
        BigInt::from(self.q)
    }

    /// Numerator coefficients `[a_0, ..., a_2g]` of `P(t)`.
    pub fn numerator(&self) -> &[BigInt] {
        &self.numerator
    }

    /// Validation warnings (Hasse–Weil bound, non-prime-power field size).
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Number of points of the `j`-th symmetric power of the curve: the
    /// coefficient of `t^j` in `P(t) / ((1-t)(1-qt))`, computed exactly.
    ///
    /// The value is a non-negative integer for genuine Weil data; profiles
    /// that satisfy the functional equation but violate the (warn-only)
    /// root-location condition can produce negative coefficients, which
    /// propagate as-is.
    pub fn sym_count(&self, j: u64) -> BigInt {
        // 1/((1-t)(1-qt)) = sum_k h_k t^k with h_k = 1 + q + ... + q^k.
        let j = j as usize;
        let deg = self.numerator.len() - 1;
        let mut coeff = BigInt::zero();
        for (i, ai) in self.numerator.iter().enumerate().take(deg.min(j) + 1) {
            coeff += ai * geometric_sum(&self.q_big(), (j - i) as u64);
        }
        coeff
    }

    /// All symmetric-power counts up to and including `t` in one pass.
    pub fn sym_counts_upto(&self, t: u64) -> Vec<BigInt> {
        (0..=t).map(|j| self.sym_count(j)).collect()
    }

    /// The `j`-th symmetric-power count as a polynomial in the formal field
    /// size: index `s` holds the coefficient of `q^s`, which is the prefix
    /// sum `a_0 + ... + a_{min(2g, j-s)}`. Evaluating at the numeric `q`
    /// recovers [`ValidatedCurve::sym_count`]; keeping `q` formal is what
    /// makes coefficient-wise series comparisons against geometric
    /// expansions meaningful.
    pub fn sym_count_poly(&self, j: u64) -> Vec<BigInt> {
        let j = j as usize;
        let deg = self.numerator.len() - 1;
        let mut prefix = Vec::with_capacity(deg + 1);
        let mut acc = BigInt::zero();
        for a in &self.numerator {
            acc += a;
            prefix.push(acc.clone());
        }
        (0..=j)
            .map(|s| prefix[deg.min(j - s)].clone())
            .collect()
    }

    /// Number of points of the Jacobian, `P(1)`.
    pub fn jac_count(&self) -> Result<BigInt, CurveError> {
        let p1: BigInt = self.numerator.iter().sum();
        if p1.is_positive() {
            Ok(p1)
        } else {
            Err(CurveError::NonPositiveJacCount(p1))
        }
    }

    /// Special value `zeta_C(q^{-k})` as an exact rational, for `k >= 2`.
    ///
    /// The zeta function has poles at the exponents 0 and 1, so smaller
    /// arguments are rejected.
    pub fn zeta_value(&self, k: i64) -> Result<BigRational, CurveError> {
        if k <= 1 {
            return Err(CurveError::PoleAtArgument(k));
        }
        let qk = BigRational::new(BigInt::one(), num::pow(self.q_big(), k as usize));
        // q^{1-k} = q / q^k
        let q1k = &qk * BigRational::from(self.q_big());
        let mut num = BigRational::zero();
        let mut tpow = BigRational::one();
        for ai in &self.numerator {
            num += BigRational::from(ai.clone()) * &tpow;
            tpow *= &qk;
        }
        let den = (BigRational::one() - qk) * (BigRational::one() - q1k);
        Ok(num / den)
    }
}

/// Euler characteristic `chi(E, F)` of a pair of bundles given by rank and
/// degree data: `nE*nF*(1-g) + (nE*dF - nF*dE)`, by Riemann-Roch.
pub fn euler_chi(n_e: i64, d_e: i64, n_f: i64, d_f: i64, g: i64) -> i64 {
    n_e * n_f * (1 - g) + (n_e * d_f - n_f * d_e)
}

/// Bookkeeping residual for the exact sequence relating `Hom(E, O_D^n)`,
/// `Hom(E, F(D))` and `chi(E, F)`:
///
/// `n*nE*degD - chi(E, F(D)) + chi(E, F)`
///
/// which is identically zero when `rank F = n` (the sequence's hypothesis).
/// The rank of `F` is taken explicitly so that a violated hypothesis is
/// visible: the residual equals `nE * degD * (n - rank_f)`.
pub fn coconut_audit(n_e: i64, d_e: i64, rank_f: i64, d_f: i64, n: i64, deg_d: i64, g: i64) -> i64 {
    let hom_torsion = n * n_e * deg_d;
    let chi_twisted = euler_chi(n_e, d_e, rank_f, d_f + rank_f * deg_d, g);
    let chi_plain = euler_chi(n_e, d_e, rank_f, d_f, g);
    hom_torsion - chi_twisted + chi_plain
}

/// `1 + q + ... + q^k` exactly.
pub(crate) fn geometric_sum(q: &BigInt, k: u64) -> BigInt {
    let mut acc = BigInt::zero();
    let mut pow = BigInt::one();
    for _ in 0..=k {
        acc += &pow;
        pow *= q;
    }
    acc
}

fn ceil_sqrt(n: u64) -> u64 {
    let s = isqrt(n);
    if s * s == n {
        s
    } else {
        s + 1
    }
}

fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u64;
    while x.saturating_mul(x) > n {
        x -= 1;
    }
    while (x + 1).saturating_mul(x + 1) <= n {
        x += 1;
    }
    x
}

fn is_prime_power(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut p = 0;
    let mut m = q;
    for cand in 2..=isqrt(q).max(2) {
        if m.is_multiple_of(cand) {
            p = cand;
            break;
        }
    }
    if p == 0 {
        return true; // q itself is prime
    }
    while m.is_multiple_of(p) {
        m /= p;
    }
    m == 1
}
