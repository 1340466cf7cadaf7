//! Harder–Narasimhan type combinatorics.
//!
//! An HN type records the ranks and degrees `(n_i, d_i)` of the subquotients
//! of the canonical slope filtration, with slopes `d_i/n_i` strictly
//! decreasing. The module enumerates all types of fixed total rank and
//! degree below a maximal-slope bound, evaluates the codimension of the
//! corresponding stratum of the stack of bundles, bounds the relevant
//! cohomology via the per-block case split (Riemann–Roch for positive
//! degrees, a Clifford-type estimate for slopes in `[-(2g-2), 0]`, vanishing
//! below), and exposes the slope-sum inequality whose non-negativity drives
//! the uniform codimension bound. The rank and slope bookkeeping of the
//! approximating vector bundles over the stack lives here too.

use num::{BigInt, BigRational};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HnError {
    #[error("slopes must be strictly decreasing (violated at block {0})")]
    SlopesNotDecreasing(usize),
    #[error("every block needs rank >= 1")]
    ZeroRankBlock,
    #[error("rank formula is negative ({0}); the slope regime does not apply")]
    NegativeRank(i64),
}

/// An HN type: blocks `(n_i, d_i)` with strictly decreasing slopes.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct HnType {
    blocks: Vec<(u32, i64)>,
}

impl HnType {
    pub fn new(blocks: Vec<(u32, i64)>) -> Result<Self, HnError> {
        if blocks.iter().any(|&(n, _)| n == 0) {
            return Err(HnError::ZeroRankBlock);
        }
        for i in 1..blocks.len() {
            let (n_prev, d_prev) = blocks[i - 1];
            let (n_cur, d_cur) = blocks[i];
            // d_prev/n_prev > d_cur/n_cur, cross-multiplied.
            if d_prev * n_cur as i64 <= d_cur * n_prev as i64 {
                return Err(HnError::SlopesNotDecreasing(i));
            }
        }
        Ok(HnType { blocks })
    }

    pub fn blocks(&self) -> &[(u32, i64)] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn total_rank(&self) -> u32 {
        self.blocks.iter().map(|&(n, _)| n).sum()
    }

    pub fn total_degree(&self) -> i64 {
        self.blocks.iter().map(|&(_, d)| d).sum()
    }

    pub fn is_trivial(&self) -> bool {
        self.blocks.len() == 1
    }
}

/// All HN types of total rank `n` and degree `d` whose maximal slope
/// `d_1/n_1` is at most `mu_max`, in canonical order (by block count, then
/// lexicographically on the blocks).
///
/// Finiteness: the first block satisfies `d_1 <= n_1 * mu_max`, and for the
/// remaining blocks to admit strictly smaller slopes averaging to the
/// remaining degree one needs `d_1/n_1 > d/n`, which bounds `d_1` below;
/// recursing with the previous slope as a strict bound terminates.
pub fn enumerate_hn(n: u32, d: i64, mu_max: &BigRational) -> Vec<HnType> {
    let mut out: Vec<HnType> = Vec::new();
    let mut blocks: Vec<(u32, i64)> = Vec::new();
    // bound = (num, den, strict): slope <= or < num/den
    fn slope_ok(d1: i64, n1: u32, num: &BigInt, den: &BigInt, strict: bool) -> bool {
        // d1/n1 vs num/den: d1 * den vs num * n1
        let lhs = BigInt::from(d1) * den;
        let rhs = num * BigInt::from(n1 as i64);
        if strict {
            lhs < rhs
        } else {
            lhs <= rhs
        }
    }
    #[allow(clippy::too_many_arguments)]
    fn rec(
        n_left: u32,
        d_left: i64,
        bound_num: &BigInt,
        bound_den: &BigInt,
        strict: bool,
        blocks: &mut Vec<(u32, i64)>,
        out: &mut Vec<HnType>,
    ) {
        if n_left == 0 {
            if d_left == 0 && !blocks.is_empty() {
                out.push(HnType {
                    blocks: blocks.clone(),
                });
            }
            return;
        }
        fn clamp(b: &BigInt) -> i64 {
            use num::Signed;
            b.try_into()
                .unwrap_or(if b.is_negative() { i64::MIN } else { i64::MAX })
        }
        for n1 in 1..=n_left {
            // Upper bound from the slope cap: d1 <= n1 * num/den (or the
            // strict analogue).
            let cap = BigInt::from(n1 as i64) * bound_num;
            let cap_floor = num::Integer::div_floor(&cap, bound_den);
            let mut d1_hi = clamp(&cap_floor);
            if strict && BigInt::from(d1_hi) * bound_den == cap {
                d1_hi -= 1;
            }
            // Lower bound: the rest must average strictly below d1/n1.
            // If blocks remain, d1/n1 > d_left/n_left.
            let n_rest = n_left - n1;
            let d1_lo = if n_rest == 0 {
                d_left
            } else {
                // smallest d1 with d1 * n_left > d_left * n1
                clamp(&num::Integer::div_floor(
                    &(BigInt::from(d_left) * BigInt::from(n1 as i64)),
                    &BigInt::from(n_left as i64),
                ))
                .saturating_add(1)
            };
            if n_rest == 0 {
                if d1_lo <= d1_hi && slope_ok(d_left, n1, bound_num, bound_den, strict) {
                    blocks.push((n1, d_left));
                    out.push(HnType {
                        blocks: blocks.clone(),
                    });
                    blocks.pop();
                }
                continue;
            }
            for d1 in d1_lo..=d1_hi {
                blocks.push((n1, d1));
                rec(
                    n_rest,
                    d_left - d1,
                    &BigInt::from(d1),
                    &BigInt::from(n1 as i64),
                    true,
                    blocks,
                    out,
                );
                blocks.pop();
            }
        }
    }
    rec(
        n,
        d,
        mu_max.numer(),
        mu_max.denom(),
        false,
        &mut blocks,
        &mut out,
    );
    out.sort_by(|a, b| {
        a.block_count()
            .cmp(&b.block_count())
            .then_with(|| a.blocks.cmp(&b.blocks))
    });
    out.dedup();
    out
}

/// Codimension of the stratum of the given HN type inside the stack of
/// rank-`n` degree-`d` bundles:
/// `(n^2 - Σ_{i<=j} n_i n_j)(g-1) + Σ_{i<j} (n_j d_i - n_i d_j)`.
pub fn codim_hn(tau: &HnType, g: i64) -> i64 {
    let n = tau.total_rank() as i64;
    let blocks = tau.blocks();
    let mut pair_sum = 0i64;
    let mut cross = 0i64;
    for i in 0..blocks.len() {
        for j in i..blocks.len() {
            pair_sum += blocks[i].0 as i64 * blocks[j].0 as i64;
            if i < j {
                cross += blocks[j].0 as i64 * blocks[i].1 - blocks[i].0 as i64 * blocks[j].1;
            }
        }
    }
    (n * n - pair_sum) * (g - 1) + cross
}

/// The terminal slope-sum inequality: returns the residual
/// `Σ_{i<j} (n_j d_i - n_i d_j) - n Σ_{d_i > 0} d_i + n |d|`, which is
/// non-negative for every HN type. The positive-degree blocks form a prefix
/// because slopes decrease; the slope-sum expression is bounded below by
/// `-n d` when `d >= 0` and by `0` when `d < 0`, so `-n |d|` is the uniform
/// bound that holds on the whole (rank, degree) grid.
pub fn key_inequality(tau: &HnType) -> i64 {
    let n = tau.total_rank() as i64;
    let d = tau.total_degree();
    let blocks = tau.blocks();
    let mut cross = 0i64;
    for i in 0..blocks.len() {
        for j in (i + 1)..blocks.len() {
            cross += blocks[j].0 as i64 * blocks[i].1 - blocks[i].0 as i64 * blocks[j].1;
        }
    }
    let positive_prefix: i64 = blocks.iter().map(|&(_, d)| d).filter(|&d| d > 0).sum();
    cross - n * positive_prefix + n * d.abs()
}

/// Upper bound for `h^0(E ⊗ ω) = h^1(E^vee)` summed over the blocks of the
/// type, following the per-block case split: Riemann–Roch for `d_i > 0`, the
/// Clifford-type estimate `n_i + ceil(d_i/2) + g - 1` for slopes in
/// `[-(2g-2), 0]`, and vanishing for slopes below `-(2g-2)`. Each block's
/// contribution is clamped at zero so the result stays a valid bound.
pub fn h1_upper(tau: &HnType, g: i64) -> i64 {
    let mut sum = 0i64;
    for &(n_i, d_i) in tau.blocks() {
        let n_i = n_i as i64;
        let contribution = if d_i > 0 {
            n_i * (g - 1) + d_i
        } else {
            // slope in [-(2g-2), 0] iff d_i >= -(2g-2) n_i
            if d_i >= -(2 * g - 2) * n_i {
                n_i + ceil_half(d_i) + g - 1
            } else {
                0
            }
        };
        sum += contribution.max(0);
    }
    sum
}

fn ceil_half(d: i64) -> i64 {
    if d >= 0 {
        (d + 1) / 2
    } else {
        -((-d) / 2)
    }
}

/// Certified lower bound for the codimension-minus-cohomology quantity:
/// `codim_hn(tau, g) - n * h1_upper(tau, g)`.
pub fn defect(tau: &HnType, g: i64) -> i64 {
    codim_hn(tau, g) - tau.total_rank() as i64 * h1_upper(tau, g)
}

/// Slope threshold of the `l`-th approximation step:
/// `l * d0 - 2g + 1 - 1/n^2`, exactly.
pub fn mu_l(l: u64, d0: u64, g: u32, n: u32) -> BigRational {
    let whole = BigRational::from(BigInt::from(
        l as i64 * d0 as i64 - 2 * g as i64 + 1,
    ));
    whole - BigRational::new(BigInt::from(1), BigInt::from((n as i64) * (n as i64)))
}

/// Rank of the approximating bundle whose fiber over `E` is
/// `Hom(E, O(lD)^n)`: by Riemann–Roch with the top cohomology vanishing,
/// `n (n l d0 - d) + n^2 (1 - g)`. A negative value signals a call outside
/// the slope regime and is rejected.
pub fn rank_vl(n: u32, d: i64, g: u32, l: u64, d0: u64) -> Result<i64, HnError> {
    let n = n as i64;
    let rank = n * (n * l as i64 * d0 as i64 - d) + n * n * (1 - g as i64);
    if rank < 0 {
        return Err(HnError::NegativeRank(rank));
    }
    Ok(rank)
}

/// One row of the HN audit report.
#[derive(Debug, Clone, Serialize)]
pub struct HnAuditRow {
    pub blocks: Vec<(u32, i64)>,
    pub codim: i64,
    pub h1_upper: i64,
    pub defect: i64,
    pub key_inequality_residual: i64,
}

/// Audit rows for every enumerated type, in canonical order.
pub fn hn_audit(n: u32, d: i64, mu_max: &BigRational, g: i64) -> Vec<HnAuditRow> {
    enumerate_hn(n, d, mu_max)
        .into_iter()
        .map(|tau| HnAuditRow {
            codim: codim_hn(&tau, g),
            h1_upper: h1_upper(&tau, g),
            defect: defect(&tau, g),
            key_inequality_residual: key_inequality(&tau),
            blocks: tau.blocks().to_vec(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn ty(blocks: &[(u32, i64)]) -> HnType {
        HnType::new(blocks.to_vec()).unwrap()
    }

    #[test]
    fn constructor_enforces_decreasing_slopes() {
        assert!(HnType::new(vec![(1, 1), (1, -1)]).is_ok());
        assert_eq!(
            HnType::new(vec![(1, 0), (1, 0)]).unwrap_err(),
            HnError::SlopesNotDecreasing(1)
        );
        assert_eq!(
            HnType::new(vec![(0, 1)]).unwrap_err(),
            HnError::ZeroRankBlock
        );
    }

    #[test]
    fn enumerate_small_cases() {
        let types = enumerate_hn(2, 0, &rat(1, 1));
        assert_eq!(types.len(), 2);
        assert_eq!(types[0], ty(&[(2, 0)]));
        assert_eq!(types[1], ty(&[(1, 1), (1, -1)]));

        assert_eq!(enumerate_hn(1, 5, &rat(5, 1)), vec![ty(&[(1, 5)])]);
        assert_eq!(enumerate_hn(2, 0, &rat(0, 1)), vec![ty(&[(2, 0)])]);
        assert!(enumerate_hn(1, 5, &rat(4, 1)).is_empty());
    }

    /// Brute-force oracle: search every block sequence inside a degree box
    /// and filter. Independent of the recursive enumerator's pruning.
    fn enumerate_oracle(n: u32, d: i64, mu_max: &BigRational) -> BTreeSet<HnType> {
        let mut found = BTreeSet::new();
        // degrees per block bounded: |d_i| <= n * mu bound + |d| + slack
        let cap = 2 * (mu_max.ceil().to_integer().try_into().unwrap_or(0i64).abs()
            + d.abs()
            + n as i64
            + 2);
        fn rec(
            n_left: u32,
            d_left: i64,
            cap: i64,
            blocks: &mut Vec<(u32, i64)>,
            found: &mut BTreeSet<HnType>,
            mu_max: &BigRational,
        ) {
            if n_left == 0 {
                if d_left != 0 || blocks.is_empty() {
                    return;
                }
                if let Ok(t) = HnType::new(blocks.clone()) {
                    let (n1, d1) = t.blocks()[0];
                    let slope = BigRational::new(BigInt::from(d1), BigInt::from(n1 as i64));
                    if slope <= *mu_max {
                        found.insert(t);
                    }
                }
                return;
            }
            for n1 in 1..=n_left {
                for d1 in -cap..=cap {
                    blocks.push((n1, d1));
                    rec(n_left - n1, d_left - d1, cap, blocks, found, mu_max);
                    blocks.pop();
                }
            }
        }
        rec(n, d, cap, &mut Vec::new(), &mut found, mu_max);
        found
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for n in 1..=3u32 {
            for d in -3..=3i64 {
                for (num, den) in [(2i64, 1i64), (5, 2), (0, 1)] {
                    let bound = rat(num, den);
                    let fast: BTreeSet<HnType> =
                        enumerate_hn(n, d, &bound).into_iter().collect();
                    let slow = enumerate_oracle(n, d, &bound);
                    assert_eq!(fast, slow, "n={} d={} bound={}/{}", n, d, num, den);
                }
            }
        }
    }

    #[test]
    fn codim_examples() {
        assert_eq!(codim_hn(&ty(&[(1, 1), (1, -1)]), 2), 3);
        assert_eq!(codim_hn(&ty(&[(3, 1)]), 7), 0);
        for g in 0..5 {
            assert_eq!(codim_hn(&ty(&[(1, 1), (1, 0)]), g), g);
        }
    }

    #[test]
    fn key_inequality_examples() {
        assert_eq!(key_inequality(&ty(&[(1, 1), (1, -1)])), 0);
        assert_eq!(key_inequality(&ty(&[(2, 0)])), 0);
        assert_eq!(key_inequality(&ty(&[(1, 2), (1, -1)])), 1);
    }

    #[test]
    fn h1_upper_examples() {
        assert_eq!(h1_upper(&ty(&[(1, -1)]), 0), 0);
        assert_eq!(h1_upper(&ty(&[(1, 1)]), 1), 1);
        assert_eq!(h1_upper(&ty(&[(1, -2)]), 2), 1);
    }

    #[test]
    fn defect_samples() {
        // Hand-checked per-block arithmetic for three grid points.
        assert_eq!(defect(&ty(&[(1, 1), (1, -1)]), 0), 1);
        assert_eq!(defect(&ty(&[(1, 1), (1, 0)]), 1), -3);
        assert_eq!(defect(&ty(&[(1, 1), (1, 0), (1, -1)]), 2), -11);
    }

    #[test]
    fn mu_l_values() {
        assert_eq!(mu_l(1, 1, 0, 2), rat(7, 4));
        assert_eq!(mu_l(0, 1, 1, 1), rat(-2, 1));
        assert_eq!(mu_l(2, 3, 1, 3), rat(44, 9));
    }

    #[test]
    fn rank_vl_values() {
        assert_eq!(rank_vl(2, 0, 0, 1, 1).unwrap(), 8);
        assert_eq!(rank_vl(2, 0, 1, 1, 1).unwrap(), 4);
        // rank 1: (l d0 - d) + (1 - g)
        assert_eq!(rank_vl(1, 2, 1, 3, 1).unwrap(), 1);
        assert!(matches!(
            rank_vl(2, 10, 2, 0, 1),
            Err(HnError::NegativeRank(_))
        ));
    }

    #[test]
    fn key_inequality_nonnegative_on_grid() {
        for n in 1..=3u32 {
            for d in -3..=3i64 {
                for tau in enumerate_hn(n, d, &rat(4, 1)) {
                    assert!(key_inequality(&tau) >= 0, "{:?}", tau);
                }
            }
        }
    }

    #[test]
    fn codim_genus_zero_sanity_bound() {
        // codim(tau, 0) >= cross-sum - n^2 on the enumeration grid.
        for n in 1..=3u32 {
            for d in -3..=3i64 {
                for tau in enumerate_hn(n, d, &rat(4, 1)) {
                    let blocks = tau.blocks();
                    let mut cross = 0i64;
                    for i in 0..blocks.len() {
                        for j in (i + 1)..blocks.len() {
                            cross += blocks[j].0 as i64 * blocks[i].1
                                - blocks[i].0 as i64 * blocks[j].1;
                        }
                    }
                    let n2 = (n as i64) * (n as i64);
                    assert!(codim_hn(&tau, 0) >= cross - n2, "{:?}", tau);
                }
            }
        }
    }

    #[test]
    fn codim_nonnegative_for_positive_genus() {
        for g in 1..=3i64 {
            for n in 1..=3u32 {
                for d in -3..=3i64 {
                    for tau in enumerate_hn(n, d, &rat(4, 1)) {
                        assert!(codim_hn(&tau, g) >= 0, "g={} {:?}", g, tau);
                        if g >= 2 && !tau.is_trivial() {
                            assert!(codim_hn(&tau, g) > 0, "g={} {:?}", g, tau);
                        }
                    }
                }
            }
        }
    }
}
