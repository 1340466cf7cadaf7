//! Truncated Laurent series in `q^{-1}` with exact rational coefficients.
//!
//! A [`LaurentQ`] stores finitely many terms `r * q^{-e}` indexed by the
//! integer exponent `e`, together with a truncation order `T`: coefficients
//! at exponents `e > T` are *undefined*, not zero. `T = None` means the
//! series is exact at every exponent. Arithmetic never fabricates
//! coefficients in the undefined region; in particular the truncation order
//! of a product is derived from the operands' truncations and valuations.

use num::{BigInt, BigRational, One, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Truncated Laurent series in `q^{-1}`; the term at key `e` is `r * q^{-e}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentQ {
    coeffs: BTreeMap<i64, BigRational>,
    /// Exponents `e > trunc` are undefined. `None` means exact everywhere.
    trunc: Option<i64>,
}

impl LaurentQ {
    pub fn zero(trunc: Option<i64>) -> Self {
        LaurentQ {
            coeffs: BTreeMap::new(),
            trunc,
        }
    }

    pub fn one() -> Self {
        Self::monomial(0, BigRational::one())
    }

    /// The exact single-term series `r * q^{-e}`.
    pub fn monomial(e: i64, r: BigRational) -> Self {
        let mut coeffs = BTreeMap::new();
        if !r.is_zero() {
            coeffs.insert(e, r);
        }
        LaurentQ {
            coeffs,
            trunc: None,
        }
    }

    /// Builds a series from `(exponent, coefficient)` pairs, dropping zeros.
    /// Terms beyond the truncation order are rejected by debug assertion.
    pub fn from_terms<I: IntoIterator<Item = (i64, BigRational)>>(
        terms: I,
        trunc: Option<i64>,
    ) -> Self {
        let mut coeffs = BTreeMap::new();
        for (e, r) in terms {
            if let Some(t) = trunc {
                debug_assert!(e <= t, "term q^-{} beyond truncation order {}", e, t);
            }
            if !r.is_zero() {
                let entry = coeffs.entry(e).or_insert_with(BigRational::zero);
                *entry += r;
                if entry.is_zero() {
                    coeffs.remove(&e);
                }
            }
        }
        LaurentQ { coeffs, trunc }
    }

    /// The exact expansion of `1/(q^s - 1)` to order `t`:
    /// `q^{-s} + q^{-2s} + ...` for step `s >= 1`.
    pub fn geometric(step: u64, t: i64) -> Self {
        assert!(step >= 1);
        let mut coeffs = BTreeMap::new();
        let mut e = step as i64;
        while e <= t {
            coeffs.insert(e, BigRational::one());
            e += step as i64;
        }
        LaurentQ {
            coeffs,
            trunc: Some(t),
        }
    }

    pub fn truncation(&self) -> Option<i64> {
        self.trunc
    }

    /// The coefficient at exponent `e`, or `None` if `e` is beyond the
    /// truncation order (undefined rather than zero).
    pub fn coeff(&self, e: i64) -> Option<BigRational> {
        match self.trunc {
            Some(t) if e > t => None,
            _ => Some(
                self.coeffs
                    .get(&e)
                    .cloned()
                    .unwrap_or_else(BigRational::zero),
            ),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Iterates over the stored nonzero terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&i64, &BigRational)> {
        self.coeffs.iter()
    }

    /// Smallest possibly-nonzero exponent: the valuation of the known part,
    /// or `trunc + 1` when the known part vanishes identically.
    fn min_possibly_nonzero(&self) -> Option<i64> {
        match self.coeffs.keys().next() {
            Some(&e) => Some(e),
            None => self.trunc.map(|t| t + 1), // exact zero has no nonzero exponent
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let trunc = min_trunc(self.trunc, other.trunc);
        let mut coeffs = self.coeffs.clone();
        for (&e, r) in &other.coeffs {
            let entry = coeffs.entry(e).or_insert_with(BigRational::zero);
            *entry += r;
            if entry.is_zero() {
                coeffs.remove(&e);
            }
        }
        if let Some(t) = trunc {
            coeffs.retain(|&e, _| e <= t);
        }
        LaurentQ { coeffs, trunc }
    }

    pub fn neg(&self) -> Self {
        LaurentQ {
            coeffs: self.coeffs.iter().map(|(&e, r)| (e, -r.clone())).collect(),
            trunc: self.trunc,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        if r.is_zero() {
            return LaurentQ::zero(self.trunc);
        }
        LaurentQ {
            coeffs: self.coeffs.iter().map(|(&e, c)| (e, c * r)).collect(),
            trunc: self.trunc,
        }
    }

    /// Shifts every exponent by `delta` (multiplication by `q^{-delta}`).
    pub fn shift(&self, delta: i64) -> Self {
        LaurentQ {
            coeffs: self.coeffs.iter().map(|(&e, c)| (e + delta, c.clone())).collect(),
            trunc: self.trunc.map(|t| t + delta),
        }
    }

    /// Product; the result's truncation is `min(T_x + v_y, T_y + v_x)` where
    /// `v` is the smallest possibly-nonzero exponent of the other operand, so
    /// no coefficient in the result depends on undefined inputs.
    pub fn mul(&self, other: &Self) -> Self {
        // An exact zero annihilates regardless of the other's truncation.
        if self.trunc.is_none() && self.coeffs.is_empty() {
            return LaurentQ::zero(None);
        }
        if other.trunc.is_none() && other.coeffs.is_empty() {
            return LaurentQ::zero(None);
        }
        let t1 = bound_from(self.trunc, other.min_possibly_nonzero());
        let t2 = bound_from(other.trunc, self.min_possibly_nonzero());
        let trunc = min_trunc(t1, t2);
        let mut coeffs: BTreeMap<i64, BigRational> = BTreeMap::new();
        for (&e1, r1) in &self.coeffs {
            for (&e2, r2) in &other.coeffs {
                let e = e1 + e2;
                if let Some(t) = trunc {
                    if e > t {
                        continue;
                    }
                }
                let entry = coeffs.entry(e).or_insert_with(BigRational::zero);
                *entry += r1 * r2;
            }
        }
        coeffs.retain(|_, r| !r.is_zero());
        LaurentQ { coeffs, trunc }
    }

    /// Restricts the defined region to exponents `<= t`.
    pub fn truncate(&self, t: i64) -> Self {
        let trunc = min_trunc(self.trunc, Some(t));
        let mut coeffs = self.coeffs.clone();
        coeffs.retain(|&e, _| e <= t);
        LaurentQ { coeffs, trunc }
    }

    /// True when both series are defined up to `t` and agree coefficient-wise
    /// there.
    pub fn agrees_upto(&self, other: &Self, t: i64) -> bool {
        let defined = |s: &Self| s.trunc.is_none_or(|u| u >= t);
        if !defined(self) || !defined(other) {
            return false;
        }
        let lo = self
            .coeffs
            .keys()
            .chain(other.coeffs.keys())
            .min()
            .copied()
            .unwrap_or(0);
        (lo..=t).all(|e| self.coeff(e) == other.coeff(e))
    }

    /// Numeric value of the known part at the curve's field size: substitutes
    /// the given `q` and sums. Meaningful when the series is exact or the
    /// tail is irrelevant to the caller.
    pub fn eval_at(&self, q: u64) -> BigRational {
        let q = BigInt::from(q);
        let mut acc = BigRational::zero();
        for (&e, r) in &self.coeffs {
            let p = num::pow(q.clone(), e.unsigned_abs() as usize);
            let factor = if e >= 0 {
                BigRational::new(BigInt::one(), p)
            } else {
                BigRational::from(p)
            };
            acc += r * factor;
        }
        acc
    }
}

fn min_trunc(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (None, x) => x,
        (x, None) => x,
        (Some(x), Some(y)) => Some(x.min(y)),
    }
}

/// `trunc + v` with `None` acting as plus infinity on either side.
fn bound_from(trunc: Option<i64>, v: Option<i64>) -> Option<i64> {
    match (trunc, v) {
        (None, _) => None,
        (_, None) => None,
        (Some(t), Some(v)) => Some(t + v),
    }
}

impl fmt::Display for LaurentQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            write!(f, "0")?;
        } else {
            for (i, (&e, r)) in self.coeffs.iter().enumerate() {
                if i > 0 {
                    write!(f, " + ")?;
                }
                if e == 0 {
                    write!(f, "{}", format_rational(r))?;
                } else if r.is_one() {
                    write!(f, "q^{}", -e)?;
                } else {
                    write!(f, "{}*q^{}", format_rational(r), -e)?;
                }
            }
        }
        if let Some(t) = self.trunc {
            write!(f, " + O(q^{})", -(t + 1))?;
        }
        Ok(())
    }
}

/// Lowest-terms rendering: integers plainly, otherwise `num/den`.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
