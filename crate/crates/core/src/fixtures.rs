//! Standard curve profiles used by the verification suite, tests and benches.
//!
//! These mirror the JSON profiles shipped in `profiles/` at the repository
//! root. All are Weil-consistent; the genus-2 profile has numerator
//! `1 + 4t^4` (field size 2, five Jacobian points), chosen so that every
//! Quot-scheme point count in the convergence audit is odd, which keeps the
//! 2-adic valuations of the convergence deltas exactly computable.

use crate::curve::{validate_curve, CurveData, ValidatedCurve};

fn build(name: &str, genus: u32, q: u64, numerator: &[i64]) -> ValidatedCurve {
    validate_curve(&CurveData {
        name: name.into(),
        genus,
        q,
        zeta_numerator: numerator.to_vec(),
    })
    .expect("fixture profile must validate")
}

/// The projective line over `F_2`.
pub fn p1_f2() -> ValidatedCurve {
    build("p1_f2", 0, 2, &[1])
}

/// The projective line over `F_3`.
pub fn p1_f3() -> ValidatedCurve {
    build("p1_f3", 0, 3, &[1])
}

/// A genus-1 profile over `F_2` with 3 rational points (`a_1 = 0`).
pub fn g1_q2() -> ValidatedCurve {
    build("g1_q2", 1, 2, &[1, 0, 2])
}

/// A genus-1 profile over `F_3` with 5 rational points.
pub fn g1_q3() -> ValidatedCurve {
    build("g1_q3", 1, 3, &[1, 1, 3])
}

/// A genus-2 profile over `F_2`: numerator `1 + 4t^4`.
pub fn g2_q2() -> ValidatedCurve {
    build("g2_q2", 2, 2, &[1, 0, 0, 0, 4])
}

/// The four profiles of the verification grid.
pub fn all() -> Vec<ValidatedCurve> {
    vec![p1_f2(), p1_f3(), g1_q2(), g2_q2()]
}
