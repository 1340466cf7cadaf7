//! Formal class algebra of Tate-over-curve symbols.
//!
//! A class is a finite integer combination of terms `Atom{k}` where an atom
//! is a product `Jac^a * Sym^{j_1} * ... * Sym^{j_r}` of a Jacobian power
//! and symmetric powers of a fixed curve, and `{k}` is a Tate twist. The
//! virtual dimension of a term is `a*g + sum(j_t) + k` once a genus `g` is
//! fixed; atoms store only their structural data so the same class can be
//! evaluated against several curves of the same genus.
//!
//! Infinite objects (zeta series, the two classifying-space series) are
//! represented by truncations carrying completeness windows in *two*
//! gradings: virtual dimension and twist (see [`window`]). Both gradings are
//! additive under product, so one contamination calculus serves both; duals
//! exchange the gradings, because the dual of `A{k}` is `A{-dim A - k}`,
//! which sits at virtual dimension `-k` and twist `-vd`. A class stores
//! every term that is certified in either grading; readers must consult the
//! windows to know which levels are exact.
//!
//! Counting realization sends a class to a truncated Laurent series in
//! `q^{-1}`, with the field size kept formal: symmetric powers realize to
//! their count polynomials in `q`, Jacobians to the scalar `|Jac(C)|`, and
//! twists to powers of `q`. The dimension window determines the series'
//! truncation order; classes whose dimensions are unbounded above (the
//! homological-side series) have no Laurent realization and are refused.

mod render;
mod window;

pub use window::Window;

use crate::curve::ValidatedCurve;
use crate::laurent::LaurentQ;
use num::{BigInt, One, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ClassError {
    #[error("windows have no common certified level")]
    EmptyWindow,
    #[error("zeta series in direction {0} has infinitely many terms at one level")]
    NonConvergentDirection(i64),
    #[error("class was built at genus {class} but genus {other} was supplied")]
    GenusMismatch { class: u32, other: u32 },
    #[error("class contains Jacobian factors; a genus is required")]
    GenusRequired,
    #[error("virtual dimensions are not bounded above; no Laurent realization exists")]
    WindowUnboundedMismatch,
    #[error("curve data rejected during realization: {0}")]
    BadCurve(String),
    #[error("window [{lo}, {hi}] is not certified by this class")]
    NotCertified { lo: i64, hi: i64 },
}

/// Multiplicative atom: a Jacobian power times a multiset of symmetric
/// powers. `Sym^0` factors are absorbed into the unit and never stored.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    jac_exp: u32,
    sym_parts: Vec<u32>, // ascending, every entry >= 1
}

impl Atom {
    pub fn new(jac_exp: u32, mut sym_parts: Vec<u32>) -> Self {
        sym_parts.retain(|&j| j > 0);
        sym_parts.sort_unstable();
        Atom { jac_exp, sym_parts }
    }

    pub fn unit() -> Self {
        Atom::new(0, vec![])
    }

    pub fn jac() -> Self {
        Atom::new(1, vec![])
    }

    pub fn sym(j: u32) -> Self {
        Atom::new(0, vec![j])
    }

    pub fn is_unit(&self) -> bool {
        self.jac_exp == 0 && self.sym_parts.is_empty()
    }

    pub fn jac_exp(&self) -> u32 {
        self.jac_exp
    }

    pub fn sym_parts(&self) -> &[u32] {
        &self.sym_parts
    }

    /// `a*g + sum(j_t)`.
    pub fn dimension(&self, g: u32) -> i64 {
        self.jac_exp as i64 * g as i64 + self.sym_parts.iter().map(|&j| j as i64).sum::<i64>()
    }

    fn merge(&self, other: &Atom) -> Atom {
        let mut parts = self.sym_parts.clone();
        parts.extend_from_slice(&other.sym_parts);
        Atom::new(self.jac_exp + other.jac_exp, parts)
    }
}

/// An atom with a Tate twist.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Term {
    pub atom: Atom,
    pub twist: i64,
}

impl Term {
    pub fn new(atom: Atom, twist: i64) -> Self {
        Term { atom, twist }
    }

    pub fn vd(&self, g: u32) -> i64 {
        self.atom.dimension(g) + self.twist
    }
}

/// A formal class: finitely many terms with completeness windows in the
/// virtual-dimension and twist gradings, and the genus its Jacobian-bearing
/// windows were computed against (`None` while the class is Jacobian-free).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MotClass {
    coeffs: BTreeMap<Term, BigInt>,
    vd: Window,
    tw: Window,
    genus: Option<u32>,
}

impl MotClass {
    /// The zero class, known to vanish everywhere.
    pub fn zero() -> Self {
        MotClass {
            coeffs: BTreeMap::new(),
            vd: Window::finite(0, 0),
            tw: Window::finite(0, 0),
            genus: None,
        }
    }

    /// The unit `1{0}`.
    pub fn unit() -> Self {
        MotClass::scalar(BigInt::one())
    }

    pub fn scalar(n: BigInt) -> Self {
        if n.is_zero() {
            return MotClass::zero();
        }
        let mut coeffs = BTreeMap::new();
        coeffs.insert(Term::new(Atom::unit(), 0), n);
        MotClass {
            coeffs,
            vd: Window::finite(0, 0),
            tw: Window::finite(0, 0),
            genus: None,
        }
    }

    /// The Lefschetz class `L = 1{1}`.
    pub fn lefschetz() -> Self {
        MotClass::unit().twist(1)
    }

    /// A single term with coefficient one. Atoms containing a Jacobian
    /// factor need a genus to place their dimension window.
    pub fn from_atom(atom: Atom, twist: i64, genus: Option<u32>) -> Result<Self, ClassError> {
        let g = match (atom.jac_exp > 0, genus) {
            (true, None) => return Err(ClassError::GenusRequired),
            (true, Some(g)) => Some(g),
            (false, _) => None,
        };
        let vd = atom.dimension(g.unwrap_or(0)) + twist;
        let mut coeffs = BTreeMap::new();
        coeffs.insert(Term::new(atom, twist), BigInt::one());
        Ok(MotClass {
            coeffs,
            vd: Window::finite(vd, vd),
            tw: Window::finite(twist, twist),
            genus: g,
        })
    }

    /// `1{0} + 1{1} + ... + 1{n}`, the class of `P^n`.
    pub fn projective_space(n: u32) -> Self {
        let mut coeffs = BTreeMap::new();
        for i in 0..=n as i64 {
            coeffs.insert(Term::new(Atom::unit(), i), BigInt::one());
        }
        MotClass {
            coeffs,
            vd: Window::finite(0, n as i64),
            tw: Window::finite(0, n as i64),
            genus: None,
        }
    }

    /// Homological classifying-space series `1{0} + 1{1} + ...` truncated to
    /// the window.
    pub fn bgm_hom(w: Window) -> Self {
        let mut coeffs = BTreeMap::new();
        for j in w.lo.max(0)..=w.hi {
            coeffs.insert(Term::new(Atom::unit(), j), BigInt::one());
        }
        let win = Window {
            lo: w.lo,
            hi: w.hi,
            zero_below: w.lo <= 0,
            zero_above: false,
        };
        MotClass {
            coeffs,
            vd: win,
            tw: win,
            genus: None,
        }
    }

    /// Compact-support classifying-space series `1{-1} + 1{-2} + ...`
    /// truncated to the window. Realizes to the expansion of `1/(q-1)`.
    pub fn bgm_k0(w: Window) -> Self {
        let mut coeffs = BTreeMap::new();
        for v in w.lo..=w.hi.min(-1) {
            coeffs.insert(Term::new(Atom::unit(), v), BigInt::one());
        }
        let win = Window {
            lo: w.lo,
            hi: w.hi,
            zero_below: false,
            zero_above: w.hi >= -1,
        };
        MotClass {
            coeffs,
            vd: win,
            tw: win,
            genus: None,
        }
    }

    /// Zeta series in direction `i`: `sum_j Sym^j {i*j}`, truncated to the
    /// window. The term at index `j` has virtual dimension `(1+i)j`, so the
    /// series converges upward for `i >= 1` and downward for `i <= -2`. The
    /// directions `i = -1` (infinitely many terms at one dimension level)
    /// and `i = 0` (at one twist level) are rejected.
    pub fn zeta_class(i: i64, w: Window) -> Result<Self, ClassError> {
        if i == -1 || i == 0 {
            return Err(ClassError::NonConvergentDirection(i));
        }
        let step = 1 + i;
        let mut coeffs = BTreeMap::new();
        let (vd, tw);
        if i >= 1 {
            // ascending: j in [j0, jmax]
            let j0 = ceil_div(w.lo, step).max(0);
            let jmax = floor_div(w.hi, step);
            for j in j0..=jmax.max(j0 - 1) {
                if j > jmax {
                    break;
                }
                coeffs.insert(Term::new(Atom::sym(j as u32), i * j), BigInt::one());
            }
            vd = Window {
                lo: w.lo,
                hi: w.hi,
                zero_below: w.lo <= 0,
                zero_above: false,
            };
            tw = Window {
                lo: if j0 == 0 { 0 } else { i * (j0 - 1) + 1 },
                hi: i * (jmax.max(j0 - 1) + 1) - 1,
                zero_below: j0 == 0,
                zero_above: false,
            };
        } else {
            // descending: vd_j = (1+i) j <= 0
            let jmax = if w.lo > 0 { -1 } else { floor_div(w.lo, step) };
            let j0 = if w.hi >= 0 { 0 } else { ceil_div(w.hi, step) };
            for j in j0..=jmax.max(j0 - 1) {
                if j > jmax {
                    break;
                }
                coeffs.insert(Term::new(Atom::sym(j as u32), i * j), BigInt::one());
            }
            vd = Window {
                lo: w.lo,
                hi: w.hi,
                zero_below: false,
                zero_above: w.hi >= 0,
            };
            tw = Window {
                lo: i * (jmax.max(j0 - 1) + 1) + 1,
                hi: if j0 == 0 { 0 } else { i * (j0 - 1) - 1 },
                zero_below: false,
                zero_above: j0 == 0,
            };
        }
        Ok(MotClass {
            coeffs,
            vd,
            tw,
            genus: None,
        })
    }

    pub fn vd_window(&self) -> Window {
        self.vd
    }

    pub fn tw_window(&self) -> Window {
        self.tw
    }

    pub fn genus(&self) -> Option<u32> {
        self.genus
    }

    fn genus_value(&self) -> u32 {
        self.genus.unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, term: &Term) -> BigInt {
        self.coeffs.get(term).cloned().unwrap_or_else(BigInt::zero)
    }

    /// All stored terms. Consult the windows to know which are certified.
    pub fn terms(&self) -> impl Iterator<Item = (&Term, &BigInt)> {
        self.coeffs.iter()
    }

    /// Stored terms whose virtual dimension lies in `[lo, hi]`.
    pub fn terms_in(&self, lo: i64, hi: i64) -> Vec<(&Term, &BigInt)> {
        let g = self.genus_value();
        self.coeffs
            .iter()
            .filter(|(t, _)| {
                let v = t.vd(g);
                lo <= v && v <= hi
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Result<Self, ClassError> {
        let genus = unify_genus(self.genus, other.genus)?;
        let vd = intersect_regions(&self.vd, &other.vd).ok_or(ClassError::EmptyWindow)?;
        let tw = intersect_regions(&self.tw, &other.tw).unwrap_or_else(Window::void);
        let mut coeffs = self.coeffs.clone();
        for (t, c) in &other.coeffs {
            let entry = coeffs.entry(t.clone()).or_insert_with(BigInt::zero);
            *entry += c;
            if entry.is_zero() {
                coeffs.remove(t);
            }
        }
        Ok(MotClass {
            coeffs,
            vd,
            tw,
            genus,
        }
        .enforce_storage())
    }

    pub fn neg(&self) -> Self {
        self.scale(&BigInt::from(-1))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, ClassError> {
        self.add(&other.neg())
    }

    pub fn scale(&self, n: &BigInt) -> Self {
        if n.is_zero() {
            return MotClass {
                coeffs: BTreeMap::new(),
                ..self.clone()
            };
        }
        MotClass {
            coeffs: self.coeffs.iter().map(|(t, c)| (t.clone(), c * n)).collect(),
            ..self.clone()
        }
    }

    /// Tensor product: atoms merge, twists and windows add; the certified
    /// windows follow the contamination calculus of [`Window::product`].
    pub fn mul(&self, other: &Self) -> Result<Self, ClassError> {
        let genus = unify_genus(self.genus, other.genus)?;
        let vd = self.vd.product(&other.vd).ok_or(ClassError::EmptyWindow)?;
        let tw = self.tw.product(&other.tw).unwrap_or_else(Window::void);
        let g = genus.unwrap_or(0);
        let mut coeffs: BTreeMap<Term, BigInt> = BTreeMap::new();
        for (t1, c1) in &self.coeffs {
            for (t2, c2) in &other.coeffs {
                let term = Term::new(t1.atom.merge(&t2.atom), t1.twist + t2.twist);
                if !vd.contains(term.vd(g)) && !tw.contains(term.twist) {
                    continue;
                }
                let entry = coeffs.entry(term).or_insert_with(BigInt::zero);
                *entry += c1 * c2;
            }
        }
        coeffs.retain(|_, c| !c.is_zero());
        Ok(MotClass {
            coeffs,
            vd,
            tw,
            genus,
        })
    }

    /// Tate twist by `k`: shifts every term and both windows.
    pub fn twist(&self, k: i64) -> Self {
        MotClass {
            coeffs: self
                .coeffs
                .iter()
                .map(|(t, c)| (Term::new(t.atom.clone(), t.twist + k), c.clone()))
                .collect(),
            vd: self.vd.shift(k),
            tw: self.tw.shift(k),
            genus: self.genus,
        }
    }

    /// Poincaré dual, term by term: every atom is the class of a smooth
    /// projective variety, so `(A{k})^dual = A{-dim A - k}`. The dual term
    /// sits at virtual dimension `-k` and twist `-vd`, so the two gradings
    /// exchange: the dual's dimension window is the negated twist window and
    /// vice versa. An involution, windows included.
    pub fn dual(&self, g: u32) -> Result<Self, ClassError> {
        if let Some(h) = self.genus {
            if h != g {
                return Err(ClassError::GenusMismatch { class: h, other: g });
            }
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|(t, c)| {
                (
                    Term::new(t.atom.clone(), -t.atom.dimension(g) - t.twist),
                    c.clone(),
                )
            })
            .collect();
        Ok(MotClass {
            coeffs,
            vd: self.tw.negate(),
            tw: self.vd.negate(),
            genus: self.genus,
        })
    }

    /// Rewrites every symmetric power above the Abel–Jacobi threshold:
    /// `Sym^j -> Jac * (1{0} + ... + 1{j-g})` for `j >= max(1, 2g-1)`, and at
    /// genus zero also erases Jacobian factors (the Jacobian is a point).
    /// The rewrite preserves counting realization term by term. The result
    /// has every surviving symmetric part `<= 2g-2` and the operation is
    /// idempotent.
    ///
    /// The projective-bundle rewrite presumes the curve has a rational
    /// point (large symmetric powers fiber over the Jacobian in projective
    /// spaces only then); calling this accepts that hypothesis. Counting
    /// realizations are insensitive to it.
    ///
    /// On fully known classes this is exact. On one-sided truncations the
    /// rewrite is applied to the stored representative: upper truncations
    /// keep their certified windows (rewriting moves terms down and twists
    /// up, so unknown low terms stay low), while lower truncations lose
    /// certification because unknown high terms would scatter downward.
    pub fn reduce_large_sym(&self, g: u32) -> Result<Self, ClassError> {
        if let Some(h) = self.genus {
            if h != g {
                return Err(ClassError::GenusMismatch { class: h, other: g });
            }
        }
        let threshold = (2 * g as i64 - 1).max(1) as u32;
        let mut coeffs: BTreeMap<Term, BigInt> = BTreeMap::new();
        for (t, c) in &self.coeffs {
            let (small, large): (Vec<u32>, Vec<u32>) =
                t.atom.sym_parts.iter().partition(|&&j| j < threshold);
            // Multiplicity of each twist offset contributed by the large parts.
            let mut offsets: Vec<BigInt> = vec![BigInt::one()];
            for &j in &large {
                let reach = (j - g) as usize;
                let mut next = vec![BigInt::zero(); offsets.len() + reach];
                for (s, mult) in offsets.iter().enumerate() {
                    for d in 0..=reach {
                        next[s + d] += mult;
                    }
                }
                offsets = next;
            }
            let jac_exp = if g == 0 {
                0
            } else {
                t.atom.jac_exp + large.len() as u32
            };
            let atom = Atom::new(jac_exp, small);
            for (offset, mult) in offsets.iter().enumerate() {
                let term = Term::new(atom.clone(), t.twist + offset as i64);
                let entry = coeffs.entry(term).or_insert_with(BigInt::zero);
                *entry += c * mult;
            }
        }
        coeffs.retain(|_, c| !c.is_zero());
        // Hulls of the surviving terms; cancellation may have shrunk them.
        let mut min_vd = i64::MAX;
        let mut max_vd = i64::MIN;
        let mut min_tw = i64::MAX;
        let mut max_tw = i64::MIN;
        for term in coeffs.keys() {
            min_vd = min_vd.min(term.vd(g));
            max_vd = max_vd.max(term.vd(g));
            min_tw = min_tw.min(term.twist);
            max_tw = max_tw.max(term.twist);
        }
        let fully_known = self.vd.zero_below && self.vd.zero_above;
        let (vd, tw) = if fully_known {
            if coeffs.is_empty() {
                (Window::finite(0, 0), Window::finite(0, 0))
            } else {
                (
                    Window::finite(min_vd, max_vd),
                    Window::finite(min_tw, max_tw),
                )
            }
        } else if self.vd.zero_above {
            // Upper truncation: certification survives, and twist levels
            // above the dimension floor are complete after the rewrite.
            (
                self.vd,
                Window {
                    lo: self.vd.lo,
                    hi: self.vd.hi,
                    zero_below: false,
                    zero_above: true,
                },
            )
        } else {
            // Lower truncation: formal rewrite only.
            (
                Window {
                    lo: self.vd.lo.min(min_vd.min(i64::MAX - 1)),
                    hi: self.vd.hi,
                    zero_below: false,
                    zero_above: false,
                },
                Window::void(),
            )
        };
        Ok(MotClass {
            coeffs,
            vd,
            tw,
            genus: Some(g),
        }
        .enforce_storage())
    }

    /// Counting realization against a validated curve, as a Laurent series
    /// in `q^{-1}` with the field size kept formal: a term contributes
    /// `coeff · |Jac|^a · Π_t sympoly_{j_t}(q) · q^twist`, where the
    /// symmetric-power counts enter as polynomials in `q` (see
    /// [`ValidatedCurve::sym_count_poly`]) and the Jacobian count as a
    /// scalar. Evaluating the series at the numeric `q` gives the ordinary
    /// point count; keeping `q` formal makes the series comparable
    /// coefficient by coefficient with geometric expansions of closed-form
    /// counts.
    ///
    /// A term's contributions occupy exponents down to `-vd`, so the series
    /// has a defined leading edge only when virtual dimensions are bounded
    /// above; homological-side classes are refused. The truncation order is
    /// the lowest certified dimension level, negated.
    pub fn count_realize(&self, curve: &ValidatedCurve) -> Result<LaurentQ, ClassError> {
        if let Some(h) = self.genus {
            if h != curve.genus() {
                return Err(ClassError::GenusMismatch {
                    class: h,
                    other: curve.genus(),
                });
            }
        }
        if !self.vd.zero_above {
            return Err(ClassError::WindowUnboundedMismatch);
        }
        let trunc = if self.vd.zero_below {
            None
        } else {
            Some(-self.vd.lo)
        };
        let g = curve.genus();
        let needs_jac = self.coeffs.keys().any(|t| t.atom.jac_exp > 0);
        let jac = if needs_jac {
            curve
                .jac_count()
                .map_err(|e| ClassError::BadCurve(e.to_string()))?
        } else {
            BigInt::one()
        };
        let mut out = Vec::new();
        for (t, c) in &self.coeffs {
            if t.vd(g) < self.vd.lo {
                continue; // uncertified dimension level
            }
            let mut poly = vec![c.clone()];
            for _ in 0..t.atom.jac_exp {
                poly[0] *= &jac;
            }
            for &j in &t.atom.sym_parts {
                poly = poly_mul(&poly, &curve.sym_count_poly(j as u64));
            }
            for (s, coeff) in poly.into_iter().enumerate() {
                let e = -(t.twist + s as i64);
                if trunc.is_none_or(|u| e <= u) {
                    out.push((e, num::BigRational::from(coeff)));
                }
            }
        }
        Ok(LaurentQ::from_terms(out, trunc))
    }

    /// Compares two classes on `[lo, hi]` in the dimension grading. Errors
    /// when either class does not certify the whole interval; otherwise
    /// returns the first mismatching term, or `None` when they agree.
    pub fn compare_on(
        &self,
        other: &Self,
        lo: i64,
        hi: i64,
    ) -> Result<Option<String>, ClassError> {
        unify_genus(self.genus, other.genus)?;
        if !self.vd.certifies(lo, hi) || !other.vd.certifies(lo, hi) {
            return Err(ClassError::NotCertified { lo, hi });
        }
        let g = self.genus.or(other.genus).unwrap_or(0);
        let in_range = |t: &Term| {
            let v = t.vd(g);
            lo <= v && v <= hi
        };
        for (t, c) in self.coeffs.iter().filter(|(t, _)| in_range(t)) {
            let d = other.coeff(t);
            if *c != d {
                return Ok(Some(format!(
                    "coefficient of {} differs: {} vs {}",
                    render::render_term(t, &BigInt::one()),
                    c,
                    d
                )));
            }
        }
        for (t, c) in other.coeffs.iter().filter(|(t, _)| in_range(t)) {
            if self.coeff(t) != *c {
                return Ok(Some(format!(
                    "term {} with coefficient {} is missing",
                    render::render_term(t, &BigInt::one()),
                    c
                )));
            }
        }
        Ok(None)
    }

    /// Convenience wrapper around [`MotClass::compare_on`].
    pub fn eq_on(&self, other: &Self, lo: i64, hi: i64) -> Result<bool, ClassError> {
        Ok(self.compare_on(other, lo, hi)?.is_none())
    }

    /// Narrows the certified dimension window to `[lo, hi]`, dropping terms
    /// that fall outside the new storage region.
    pub fn restrict(&self, lo: i64, hi: i64) -> Result<Self, ClassError> {
        if !self.vd.certifies(lo, hi) {
            return Err(ClassError::NotCertified { lo, hi });
        }
        let g = self.genus_value();
        let zero_below = self.vd.zero_below
            && !self
                .coeffs
                .keys()
                .any(|t| t.vd(g) < lo && self.vd.contains(t.vd(g)));
        let zero_above = self.vd.zero_above
            && !self
                .coeffs
                .keys()
                .any(|t| t.vd(g) > hi && self.vd.contains(t.vd(g)));
        let vd = Window {
            lo,
            hi,
            zero_below,
            zero_above,
        };
        // Shrink the twist window away from any dropped term.
        let dropped: Vec<i64> = self
            .coeffs
            .keys()
            .filter(|t| !vd.contains(t.vd(g)) && self.tw.contains(t.twist))
            .map(|t| t.twist)
            .collect();
        let tw = if dropped.is_empty() {
            self.tw
        } else if self.tw.zero_above {
            let cut = dropped.iter().max().unwrap() + 1;
            Window {
                lo: cut.max(self.tw.lo),
                hi: self.tw.hi,
                zero_below: false,
                zero_above: true,
            }
        } else {
            let cut = dropped.iter().min().unwrap() - 1;
            Window {
                lo: self.tw.lo,
                hi: cut.min(self.tw.hi),
                zero_below: self.tw.zero_below,
                zero_above: false,
            }
        };
        Ok(MotClass {
            coeffs: self.coeffs.clone(),
            vd,
            tw,
            genus: self.genus,
        }
        .enforce_storage())
    }

    /// Drops stored terms outside the union of the two certified windows.
    fn enforce_storage(mut self) -> Self {
        let g = self.genus_value();
        let vd = self.vd;
        let tw = self.tw;
        self.coeffs
            .retain(|t, _| vd.contains(t.vd(g)) || tw.contains(t.twist));
        self
    }

    /// Canonical text form; terms sorted by (vd, twist, atom). Reparses via
    /// the expression grammar.
    pub fn canonical_text(&self) -> String {
        render::render_class(self)
    }
}

impl std::fmt::Display for MotClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.canonical_text())
    }
}

fn unify_genus(a: Option<u32>, b: Option<u32>) -> Result<Option<u32>, ClassError> {
    match (a, b) {
        (None, x) => Ok(x),
        (x, None) => Ok(x),
        (Some(x), Some(y)) if x == y => Ok(Some(x)),
        (Some(x), Some(y)) => Err(ClassError::GenusMismatch { class: x, other: y }),
    }
}

/// Intersection of certified regions (intervals extended to infinity on
/// known-zero sides). `None` when the regions do not meet.
fn intersect_regions(a: &Window, b: &Window) -> Option<Window> {
    let eff_lo = |w: &Window| if w.zero_below { None } else { Some(w.lo) };
    let eff_hi = |w: &Window| if w.zero_above { None } else { Some(w.hi) };
    let lo_region = match (eff_lo(a), eff_lo(b)) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => Some(x.max(y)),
    };
    let hi_region = match (eff_hi(a), eff_hi(b)) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => Some(x.min(y)),
    };
    if let (Some(lo), Some(hi)) = (lo_region, hi_region) {
        if lo > hi {
            return None;
        }
    }
    Some(Window {
        lo: lo_region.unwrap_or_else(|| a.lo.min(b.lo)),
        hi: hi_region.unwrap_or_else(|| a.hi.max(b.hi)),
        zero_below: a.zero_below && b.zero_below,
        zero_above: a.zero_above && b.zero_above,
    })
}

impl Window {
    /// A window certifying nothing.
    pub(crate) fn void() -> Window {
        Window {
            lo: 0,
            hi: -1,
            zero_below: false,
            zero_above: false,
        }
    }
}

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

pub(crate) fn floor_div(a: i64, b: i64) -> i64 {
    let q = a / b;
    let r = a % b;
    if r != 0 && ((r < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

pub(crate) fn ceil_div(a: i64, b: i64) -> i64 {
    -floor_div(-a, b)
}
