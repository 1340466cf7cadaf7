//! Fixed-point combinatorics of Quot schemes of matrix divisors.
//!
//! The Quot scheme of torsion quotients of `O(D)^n` of degree
//! `N = n·deg D - d` is smooth projective of dimension `n·N`, and a generic
//! one-parameter subgroup of the diagonal torus stratifies it into attracting
//! cells indexed by ordered `n`-tuples `(m_1, ..., m_n)` with `Σ m_i = N`.
//! The cell over the tuple `m` retracts onto `C^(m_1) × ... × C^(m_n)` and
//! has codimension `Σ (i-1) m_i`. This module enumerates the strata,
//! assembles the class and point-count decompositions, checks them against
//! an independent counting oracle (the Quot scheme is the `N`-th symmetric
//! power of `C × P^{n-1}`, so its count is a coefficient of a product of
//! shifted zeta series), and builds the stabilized pieces that survive the
//! large-divisor limit.

use crate::curve::ValidatedCurve;
use crate::motring::{Atom, ClassError, MotClass, Term, Window};
use num::{BigInt, One, Zero};
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

/// Ordered tuple of non-negative integers; indexes one stratum.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Composition {
    parts: Vec<u64>,
}

impl Composition {
    pub fn new(parts: Vec<u64>) -> Self {
        assert!(!parts.is_empty(), "a composition needs at least one part");
        Composition { parts }
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.parts.iter().sum()
    }

    /// `Σ (i-1) m_i`, the codimension weight of the attracting cell.
    pub fn codim_plus(&self) -> u64 {
        self.parts
            .iter()
            .enumerate()
            .map(|(i, &m)| i as u64 * m)
            .sum()
    }

    pub fn reversed(&self) -> Composition {
        let mut parts = self.parts.clone();
        parts.reverse();
        Composition { parts }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QuotError {
    #[error("no composition has first part above the stability threshold 2g-2; excluded: {0:?}")]
    UnstableRegime(Vec<Vec<u64>>),
}

/// Dimension bookkeeping of one stratum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StratumInfo {
    pub comp: Composition,
    pub codim_plus: u64,
    pub fixed_dim: u64,
    pub ambient_dim: u64,
}

/// All ordered `n`-tuples of non-negative integers summing to `total`,
/// enumerated with the first part descending (so `(N, 0, ..., 0)` — the open
/// stratum — comes first).
pub fn compositions(total: u64, n: usize) -> Vec<Composition> {
    assert!(n >= 1);
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n);
    fn rec(remaining: u64, slots: usize, current: &mut Vec<u64>, out: &mut Vec<Composition>) {
        if slots == 1 {
            current.push(remaining);
            out.push(Composition::new(current.clone()));
            current.pop();
            return;
        }
        for first in (0..=remaining).rev() {
            current.push(first);
            rec(remaining - first, slots - 1, current, out);
            current.pop();
        }
    }
    rec(total, n, &mut current, &mut out);
    out
}

pub fn stratum(comp: &Composition) -> StratumInfo {
    let n = comp.len() as u64;
    let total = comp.total();
    StratumInfo {
        codim_plus: comp.codim_plus(),
        fixed_dim: total,
        ambient_dim: n * total,
        comp: comp.clone(),
    }
}

fn stratum_atom(comp: &Composition) -> Atom {
    Atom::new(0, comp.parts().iter().map(|&m| m as u32).collect())
}

/// Class decomposition of the Quot scheme: `Σ_m Π_t Sym^{m_t} {c_m}` over
/// all `n`-part compositions of `N`, clipped to the window.
pub fn quot_class(n: usize, total: u64, w: Window) -> MotClass {
    let mut class = MotClass::zero();
    let mut coeffs: BTreeMap<Term, BigInt> = BTreeMap::new();
    for comp in compositions(total, n) {
        let term = Term::new(stratum_atom(&comp), comp.codim_plus() as i64);
        *coeffs.entry(term).or_insert_with(BigInt::zero) += BigInt::one();
    }
    for (term, c) in coeffs {
        let t = MotClass::from_atom(term.atom, term.twist, None)
            .expect("stratum atoms are Jacobian-free")
            .scale(&c);
        class = class.add(&t).expect("finite classes always intersect");
    }
    match class.restrict(w.lo, w.hi) {
        Ok(clipped) => clipped,
        Err(_) => class, // window wider than the full finite class
    }
}

/// Point count of the Quot scheme as the stratum sum
/// `Σ_m q^{c_m} Π_t |C^(m_t)|`, exactly.
pub fn quot_count(n: usize, total: u64, curve: &ValidatedCurve) -> BigInt {
    let q = curve.q_big();
    let mut acc = BigInt::zero();
    for comp in compositions(total, n) {
        let mut cell = num::pow(q.clone(), comp.codim_plus() as usize);
        for &m in comp.parts() {
            cell *= curve.sym_count(m);
        }
        acc += cell;
    }
    acc
}

/// Independent counting oracle: the Quot scheme is the `N`-th symmetric
/// power of `C × P^{n-1}`, whose zeta series is `Π_{i=0}^{n-1} Z_C(q^i t)`.
/// Returns the coefficient of `t^N` in that product, computed by dense
/// truncated power-series arithmetic on the numerator and the two geometric
/// factors of each `Z_C(q^i t)` — no stratum data enters this path.
pub fn quot_count_oracle(n: usize, total: u64, curve: &ValidatedCurve) -> BigInt {
    let len = total as usize + 1;
    let q = curve.q_big();
    let mut product = vec![BigInt::zero(); len];
    product[0] = BigInt::one();
    for i in 0..n {
        let qi = num::pow(q.clone(), i);
        // P(q^i t)
        let mut p_scaled = vec![BigInt::zero(); len];
        let mut power = BigInt::one();
        for (m, a) in curve.numerator().iter().enumerate() {
            if m >= len {
                break;
            }
            p_scaled[m] = a * &power;
            power *= &qi;
        }
        product = series_mul(&product, &p_scaled, len);
        product = series_mul(&product, &geometric_series(&qi, len), len);
        let qi1 = &qi * &q;
        product = series_mul(&product, &geometric_series(&qi1, len), len);
    }
    product[total as usize].clone()
}

fn geometric_series(ratio: &BigInt, len: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(len);
    let mut pow = BigInt::one();
    for _ in 0..len {
        out.push(pow.clone());
        pow *= ratio;
    }
    out
}

fn series_mul(a: &[BigInt], b: &[BigInt], len: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); len];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if i + j >= len {
                break;
            }
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Stratum matching under the transition to a divisor enlarged by degree
/// `delta`: the tuple gains `n·delta` on its first part, which has weight
/// zero, so the codimension is preserved. The function asserts that.
pub fn transition_target(comp: &Composition, delta: u64, n: usize) -> Composition {
    assert_eq!(comp.len(), n, "composition must have {} parts", n);
    let mut parts = comp.parts().to_vec();
    parts[0] += n as u64 * delta;
    let target = Composition::new(parts);
    assert_eq!(
        comp.codim_plus(),
        target.codim_plus(),
        "transition must preserve the codimension weight"
    );
    target
}

/// The piece surviving the large-divisor limit for a fixed tail
/// `m♭ = (m_2, ..., m_n)`: the classifying-space series times the Jacobian
/// times `Π_t Sym^{m♭_t}`, twisted by `c_{m♭} = Σ_t t·m♭_t`.
pub fn stabilized_piece(m_flat: &[u64], g: u32, w: Window) -> Result<MotClass, ClassError> {
    let c: i64 = m_flat
        .iter()
        .enumerate()
        .map(|(t, &m)| (t as i64 + 1) * m as i64)
        .sum();
    let atom = Atom::new(1, m_flat.iter().map(|&m| m as u32).collect());
    let base = MotClass::from_atom(atom, c, Some(g))?;
    let budget = (w.hi - w.lo).max(0) + w.hi.abs() + 1;
    let bgm = MotClass::bgm_hom(Window::lower(0, budget));
    base.mul(&bgm)
}

/// Report of a term-wise identity check between two class constructions.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    pub pass: bool,
    pub checked_lo: i64,
    pub checked_hi: i64,
    pub term_count: usize,
    pub first_mismatch: Option<String>,
}

/// Checks that summing `Π_t Sym^{m♭_t} {t·m♭_t}` over all `(n-1)`-tuples
/// `m♭` reproduces the product of the zeta series in directions
/// `1, ..., n-1` term by term on the window (a Cauchy-product identity; the
/// left side is enumerated directly, the right side goes through class
/// multiplication).
pub fn stabilized_sum_identity(n: usize, w: Window) -> Result<IdentityReport, ClassError> {
    assert!(n >= 1);
    let lo = w.lo.max(0);
    let hi = w.hi;
    // Left side: direct enumeration of tails with Σ (1+t) m_t <= hi.
    let mut coeffs: BTreeMap<Term, BigInt> = BTreeMap::new();
    let mut tail = vec![0u64; n - 1];
    fn rec(
        idx: usize,
        budget: i64,
        tail: &mut Vec<u64>,
        coeffs: &mut BTreeMap<Term, BigInt>,
    ) {
        if idx == tail.len() {
            let atom = Atom::new(0, tail.iter().map(|&m| m as u32).collect());
            let twist: i64 = tail
                .iter()
                .enumerate()
                .map(|(t, &m)| (t as i64 + 1) * m as i64)
                .sum();
            *coeffs.entry(Term::new(atom, twist)).or_insert_with(BigInt::zero) +=
                BigInt::one();
            return;
        }
        let weight = idx as i64 + 2; // vd weight of one unit in slot idx
        let mut m = 0i64;
        while weight * m <= budget {
            tail[idx] = m as u64;
            rec(idx + 1, budget - weight * m, tail, coeffs);
            m += 1;
        }
        tail[idx] = 0;
    }
    rec(0, hi, &mut tail, &mut coeffs);
    // Right side: fold of zeta classes.
    let mut rhs = MotClass::unit();
    for i in 1..n {
        rhs = rhs.mul(&MotClass::zeta_class(i as i64, Window::lower(0, hi))?)?;
    }
    let mismatch = (|| {
        for (t, c) in &coeffs {
            let v = t.vd(0);
            if v < lo || v > hi {
                continue;
            }
            if rhs.coeff(t) != *c {
                return Some(format!(
                    "tail enumeration has {}·[{:?}]{{{}}}, product has {}",
                    c,
                    t.atom.sym_parts(),
                    t.twist,
                    rhs.coeff(t)
                ));
            }
        }
        for (t, c) in rhs.terms_in(lo, hi) {
            if coeffs.get(t).cloned().unwrap_or_else(BigInt::zero) != *c {
                return Some(format!("product has extra term with coefficient {}", c));
            }
        }
        None
    })();
    Ok(IdentityReport {
        pass: mismatch.is_none(),
        checked_lo: lo,
        checked_hi: hi,
        term_count: coeffs.len(),
        first_mismatch: mismatch,
    })
}

/// Fixed-determinant analogue of [`quot_class`]: only compositions whose
/// first part clears the Abel–Jacobi threshold `m_1 > 2g-2` are
/// representable; each contributes `P^{m_1-g} · Π_{i>=2} Sym^{m_i} {c_m}`.
/// Excluded compositions are reported; if nothing qualifies the regime is
/// unstable and the call fails.
pub fn quot_class_fixed_det(
    n: usize,
    total: u64,
    g: u32,
    w: Window,
) -> Result<FixedDetClass, QuotError> {
    let threshold = 2 * g as i64 - 2;
    let mut excluded = Vec::new();
    let mut class = MotClass::zero();
    let mut any = false;
    for comp in compositions(total, n) {
        let m1 = comp.parts()[0] as i64;
        if m1 <= threshold {
            excluded.push(comp.parts().to_vec());
            continue;
        }
        any = true;
        let tail = Atom::new(0, comp.parts()[1..].iter().map(|&m| m as u32).collect());
        let piece = MotClass::projective_space((m1 - g as i64) as u32)
            .mul(
                &MotClass::from_atom(tail, comp.codim_plus() as i64, None)
                    .expect("tail atoms are Jacobian-free"),
            )
            .expect("finite product");
        class = class.add(&piece).expect("finite sum");
    }
    if !any {
        return Err(QuotError::UnstableRegime(excluded));
    }
    let class = class.restrict(w.lo, w.hi).unwrap_or(class);
    Ok(FixedDetClass { class, excluded })
}

/// Result of [`quot_class_fixed_det`].
#[derive(Debug, Clone)]
pub struct FixedDetClass {
    pub class: MotClass,
    /// Compositions below the representability threshold, as raw part lists.
    pub excluded: Vec<Vec<u64>>,
}

/// One line of the strata report.
#[derive(Debug, Clone, Serialize)]
pub struct StratumReportRow {
    pub comp: Vec<u64>,
    pub codim_plus: u64,
    pub fixed_dim: u64,
    pub sym_counts: Vec<String>,
    /// The stratum's contribution `q^{c_m} Π |C^(m_t)|` to the total count.
    pub cell_count: String,
}

/// Per-stratum report rows for the given curve, in enumeration order.
pub fn strata_report(n: usize, total: u64, curve: &ValidatedCurve) -> Vec<StratumReportRow> {
    let q = curve.q_big();
    compositions(total, n)
        .into_iter()
        .map(|comp| {
            let info = stratum(&comp);
            let sym_counts: Vec<BigInt> =
                comp.parts().iter().map(|&m| curve.sym_count(m)).collect();
            let mut cell = num::pow(q.clone(), info.codim_plus as usize);
            for s in &sym_counts {
                cell *= s;
            }
            StratumReportRow {
                comp: comp.parts().to_vec(),
                codim_plus: info.codim_plus,
                fixed_dim: info.fixed_dim,
                sym_counts: sym_counts.iter().map(|s| s.to_string()).collect(),
                cell_count: cell.to_string(),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn composition_enumeration_order_and_count() {
        let c = compositions(2, 2);
        let parts: Vec<Vec<u64>> = c.iter().map(|c| c.parts().to_vec()).collect();
        assert_eq!(parts, vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(compositions(0, 3), vec![Composition::new(vec![0, 0, 0])]);
        assert_eq!(compositions(4, 2).len(), 5);
    }

    #[test]
    fn stratum_codimensions() {
        assert_eq!(stratum(&Composition::new(vec![1, 2])).codim_plus, 2);
        assert_eq!(stratum(&Composition::new(vec![5, 0, 0])).codim_plus, 0);
        assert_eq!(stratum(&Composition::new(vec![0, 0, 5])).codim_plus, 10);
    }

    #[test]
    fn stratum_dimension_bookkeeping() {
        // fixed + codim + attracting fiber = ambient, for every stratum.
        for n in 1..=4usize {
            for total in 0..=6u64 {
                for comp in compositions(total, n) {
                    let s = stratum(&comp);
                    let fiber = s.ambient_dim - s.fixed_dim - s.codim_plus;
                    assert_eq!(s.fixed_dim + s.codim_plus + fiber, s.ambient_dim);
                    assert!(s.codim_plus <= (n as u64 - 1) * total);
                }
            }
        }
    }

    #[test]
    fn quot_class_small_cases() {
        let w = Window::finite(0, 100);
        let c = quot_class(1, 4, w);
        assert_eq!(c.term_count(), 1);
        assert_eq!(c.coeff(&Term::new(Atom::sym(4), 0)), big(1));

        let c = quot_class(2, 1, w);
        assert_eq!(c.coeff(&Term::new(Atom::sym(1), 0)), big(1));
        assert_eq!(c.coeff(&Term::new(Atom::sym(1), 1)), big(1));
        assert_eq!(c.term_count(), 2);

        let c = quot_class(2, 0, w);
        assert_eq!(c.coeff(&Term::new(Atom::unit(), 0)), big(1));
    }

    #[test]
    fn quot_class_merges_equal_terms() {
        // n = 3, N = 3: (1,2,0) and (2,0,1) both give Sym^1·Sym^2 {2}.
        let w = Window::finite(0, 100);
        let c = quot_class(3, 3, w);
        assert_eq!(c.coeff(&Term::new(Atom::new(0, vec![1, 2]), 2)), big(2));
    }

    #[test]
    fn quot_counts_match_hand_values() {
        let p1 = fixtures::p1_f2();
        assert_eq!(quot_count(2, 1, &p1), big(9));
        assert_eq!(quot_count(2, 2, &p1), big(53));
        assert_eq!(quot_count(2, 2, &fixtures::g1_q2()), big(63));
        assert_eq!(quot_count(2, 0, &p1), big(1));
    }

    #[test]
    fn oracle_matches_hand_values() {
        let p1 = fixtures::p1_f2();
        assert_eq!(quot_count_oracle(2, 1, &p1), big(9));
        assert_eq!(quot_count_oracle(2, 2, &p1), big(53));
        assert_eq!(quot_count_oracle(1, 7, &p1), p1.sym_count(7));
    }

    #[test]
    fn oracle_equivalence_small_grid() {
        for c in fixtures::all() {
            for n in 1..=3usize {
                for total in 0..=6u64 {
                    assert_eq!(
                        quot_count(n, total, &c),
                        quot_count_oracle(n, total, &c),
                        "n={} N={} curve={}",
                        n,
                        total,
                        c.name()
                    );
                }
            }
        }
    }

    #[test]
    fn reversal_symmetry_of_counts() {
        // Replacing weight i-1 by n-i reverses each tuple and preserves the sum.
        let c = fixtures::g1_q2();
        for n in 2..=3usize {
            for total in 0..=5u64 {
                let q = c.q_big();
                let mut reversed_sum = BigInt::zero();
                for comp in compositions(total, n) {
                    let rev = comp.reversed();
                    let mut cell = num::pow(q.clone(), rev.codim_plus() as usize);
                    for &m in comp.parts() {
                        cell *= c.sym_count(m);
                    }
                    reversed_sum += cell;
                }
                assert_eq!(reversed_sum, quot_count(n, total, &c));
            }
        }
    }

    #[test]
    fn quot_class_realizes_to_quot_count() {
        let w = Window::finite(0, 100);
        for c in fixtures::all() {
            for n in 1..=3usize {
                for total in 0..=4u64 {
                    let class = quot_class(n, total, w);
                    let r = class.count_realize(&c).unwrap();
                    assert_eq!(
                        r.eval_at(c.q()),
                        num::BigRational::from(quot_count(n, total, &c))
                    );
                }
            }
        }
    }

    #[test]
    fn transition_preserves_codimension() {
        let t = transition_target(&Composition::new(vec![1, 2]), 1, 2);
        assert_eq!(t.parts(), &[3, 2]);
        assert_eq!(t.codim_plus(), 2);
        let t = transition_target(&Composition::new(vec![0, 0]), 3, 2);
        assert_eq!(t.parts(), &[6, 0]);
        assert_eq!(t.codim_plus(), 0);
    }

    #[test]
    fn stabilized_piece_shapes() {
        let w = Window::lower(0, 10);
        // Empty tail: the line-bundle case Jac times the classifying series.
        let p = stabilized_piece(&[], 1, w).unwrap();
        assert_eq!(p.coeff(&Term::new(Atom::jac(), 0)), big(1));
        assert_eq!(p.coeff(&Term::new(Atom::jac(), 5)), big(1));
        // n = 2, tail (3): Jac·Sym^3 twisted by 3, times the series.
        let p = stabilized_piece(&[3], 1, w).unwrap();
        assert_eq!(p.coeff(&Term::new(Atom::new(1, vec![3]), 3)), big(1));
        assert_eq!(p.coeff(&Term::new(Atom::new(1, vec![3]), 6)), big(1));
    }

    #[test]
    fn stabilized_sum_identity_small() {
        assert!(stabilized_sum_identity(1, Window::lower(0, 10)).unwrap().pass);
        assert!(stabilized_sum_identity(2, Window::lower(0, 20)).unwrap().pass);
        assert!(stabilized_sum_identity(3, Window::lower(0, 15)).unwrap().pass);
    }

    #[test]
    fn fixed_det_class_examples() {
        let w = Window::finite(0, 100);
        // Genus 0: every composition qualifies.
        let r = quot_class_fixed_det(2, 3, 0, w).unwrap();
        assert!(r.excluded.is_empty());
        assert_eq!(
            r.class.coeff(&Term::new(Atom::unit(), 0)),
            big(1) // from (3,0): P^3 at twist 0
        );
        // Genus 1, N = 1: (0,1) is excluded, (1,0) gives P^0.
        let r = quot_class_fixed_det(2, 1, 1, w).unwrap();
        assert_eq!(r.excluded, vec![vec![0, 1]]);
        assert_eq!(r.class.coeff(&Term::new(Atom::unit(), 0)), big(1));
        // n = 1, N >= 2g-1: a single projective space.
        let r = quot_class_fixed_det(1, 5, 2, w).unwrap();
        let p3 = MotClass::projective_space(3);
        assert_eq!(r.class.compare_on(&p3, 0, 100).unwrap(), None);
        // Unstable: n = 1, N <= 2g-2.
        assert_eq!(
            quot_class_fixed_det(1, 2, 2, w).unwrap_err(),
            QuotError::UnstableRegime(vec![vec![2]])
        );
    }

    #[test]
    fn strata_report_sums_to_count() {
        let c = fixtures::p1_f2();
        let rows = strata_report(2, 2, &c);
        assert_eq!(rows.len(), 3);
        let total: BigInt = rows
            .iter()
            .map(|r| r.cell_count.parse::<BigInt>().unwrap())
            .sum();
        assert_eq!(total, big(53));
    }
}
