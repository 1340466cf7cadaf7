//! Canonical text form for classes.
//!
//! Terms are sorted by (virtual dimension, twist, atom) and printed as
//! `coeff·Jac^a·Sym^j…{twist}`, e.g. `3·Jac·Sym^2{-4}`. The unit atom prints
//! as `1` and a coefficient of one is omitted when the atom is not the unit.
//! The output reparses under the expression grammar (`·` is accepted for
//! `*`, `Sym^j` for `Sym(j)`), so rendering round-trips losslessly.

use super::{MotClass, Term};
use num::BigInt;
use num::One;

pub(super) fn render_class(class: &MotClass) -> String {
    if class.is_empty() {
        return "0".to_string();
    }
    let g = class.genus().unwrap_or(0);
    let mut terms: Vec<(&Term, &BigInt)> = class.terms().collect();
    terms.sort_by(|(s, _), (t, _)| {
        s.vd(g)
            .cmp(&t.vd(g))
            .then(s.twist.cmp(&t.twist))
            .then(s.atom.cmp(&t.atom))
    });
    terms
        .iter()
        .map(|(t, c)| render_term(t, c))
        .collect::<Vec<_>>()
        .join(" + ")
}

pub(super) fn render_term(term: &Term, coeff: &BigInt) -> String {
    let mut factors: Vec<String> = Vec::new();
    if !coeff.is_one() {
        factors.push(coeff.to_string());
    }
    match term.atom.jac_exp() {
        0 => {}
        1 => factors.push("Jac".to_string()),
        a => factors.push(format!("Jac^{}", a)),
    }
    for &j in term.atom.sym_parts() {
        factors.push(format!("Sym^{}", j));
    }
    if term.atom.is_unit() {
        factors.push("1".to_string());
    }
    format!("{}{{{}}}", factors.join("·"), term.twist)
}
