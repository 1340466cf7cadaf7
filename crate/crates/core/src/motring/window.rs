//! Completeness windows for formal classes.
//!
//! A window records where a (possibly infinite) graded object is known
//! exactly after truncation to finitely many terms. The interval `[lo, hi]`
//! is the certified region in the grading; the two flags extend it:
//! `zero_below` means the object is known to vanish below `lo` (so the
//! certified region is really `(-inf, hi]`), and `zero_above` the mirror
//! statement. Classes carry one window in the virtual-dimension grading and
//! one in the twist grading; both gradings are additive under tensor
//! product, so the same product rule serves both.
//!
//! The product rule is a contamination analysis. Writing `pnz` for the
//! possibly-nonzero range of an operand (its interval, extended to infinity
//! on a side whose flag is unset), a level of the product is certified
//! unless it can receive a contribution with one factor in an operand's
//! unknown region. Unknown-above regions push contamination down from
//! `hi + 1 + min pnz(other)`; unknown-below regions push it up from
//! `lo - 1 + max pnz(other)`. When an unknown region pairs with an operand
//! unbounded on the matching side, every level is contaminated and the
//! product has no certified window at all.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Window {
    pub lo: i64,
    pub hi: i64,
    /// The object is known to vanish at levels `< lo`.
    pub zero_below: bool,
    /// The object is known to vanish at levels `> hi`.
    pub zero_above: bool,
}

impl Window {
    /// A fully known object supported inside `[lo, hi]`.
    pub fn finite(lo: i64, hi: i64) -> Self {
        Window {
            lo,
            hi,
            zero_below: true,
            zero_above: true,
        }
    }

    /// Known-zero below `lo`, certified up to `hi`, unknown above.
    pub fn lower(lo: i64, hi: i64) -> Self {
        Window {
            lo,
            hi,
            zero_below: true,
            zero_above: false,
        }
    }

    /// Known-zero above `hi`, certified down to `lo`, unknown below.
    pub fn upper(lo: i64, hi: i64) -> Self {
        Window {
            lo,
            hi,
            zero_below: false,
            zero_above: true,
        }
    }

    /// Certified only inside `[lo, hi]`, unknown on both sides.
    pub fn inside(lo: i64, hi: i64) -> Self {
        Window {
            lo,
            hi,
            zero_below: false,
            zero_above: false,
        }
    }

    pub fn width(&self) -> i64 {
        self.hi - self.lo
    }

    pub fn contains(&self, v: i64) -> bool {
        self.lo <= v && v <= self.hi
    }

    /// True when every level of `[lo, hi]` is certified (inside the interval
    /// or in a known-zero region).
    pub fn certifies(&self, lo: i64, hi: i64) -> bool {
        let lo_ok = self.zero_below || lo >= self.lo;
        let hi_ok = self.zero_above || hi <= self.hi;
        lo_ok && hi_ok && lo <= hi
    }

    fn min_possibly_nonzero(&self) -> Option<i64> {
        if self.zero_below {
            Some(self.lo)
        } else {
            None // unbounded below
        }
    }

    fn max_possibly_nonzero(&self) -> Option<i64> {
        if self.zero_above {
            Some(self.hi)
        } else {
            None // unbounded above
        }
    }

    /// Intersection, for sums. `None` when the intervals do not meet.
    pub fn intersect(&self, other: &Window) -> Option<Window> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        if lo > hi {
            return None;
        }
        Some(Window {
            lo,
            hi,
            zero_below: self.zero_below && other.zero_below,
            zero_above: self.zero_above && other.zero_above,
        })
    }

    /// Certified window of a product of objects with windows `self`, `other`.
    /// `None` when no level of the product is certified.
    pub fn product(&self, other: &Window) -> Option<Window> {
        let mut hi_candidates: Vec<i64> = Vec::new();
        if self.zero_above && other.zero_above {
            hi_candidates.push(self.hi.checked_add(other.hi)?);
        }
        if !self.zero_above {
            hi_candidates.push(self.hi.checked_add(other.min_possibly_nonzero()?)?);
        }
        if !other.zero_above {
            hi_candidates.push(other.hi.checked_add(self.min_possibly_nonzero()?)?);
        }
        let mut lo_candidates: Vec<i64> = Vec::new();
        if self.zero_below && other.zero_below {
            lo_candidates.push(self.lo.checked_add(other.lo)?);
        }
        if !self.zero_below {
            lo_candidates.push(self.lo.checked_add(other.max_possibly_nonzero()?)?);
        }
        if !other.zero_below {
            lo_candidates.push(other.lo.checked_add(self.max_possibly_nonzero()?)?);
        }
        let hi = *hi_candidates.iter().min()?;
        let lo = *lo_candidates.iter().max()?;
        if lo > hi {
            return None;
        }
        Some(Window {
            lo,
            hi,
            zero_below: self.zero_below && other.zero_below,
            zero_above: self.zero_above && other.zero_above,
        })
    }

    /// Window of the negated grading (levels `v` become `-v`).
    pub fn negate(&self) -> Window {
        Window {
            lo: -self.hi,
            hi: -self.lo,
            zero_below: self.zero_above,
            zero_above: self.zero_below,
        }
    }

    pub fn shift(&self, k: i64) -> Window {
        Window {
            lo: self.lo + k,
            hi: self.hi + k,
            ..*self
        }
    }
}
