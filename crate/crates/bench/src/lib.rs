//! Shared fixtures for the benchmarks.

use lgspin_core::statespace::unique_state;
use lgspin_core::symmetry::{aut_group, grading_element, DEFAULT_CAP};
use lgspin_core::{BasisState, InvertiblePolynomial};

pub const CHAIN5: &str = "x1^2*x2 + x2^3*x3 + x3^5*x4 + x4^10*x5 + x5^11";

pub fn chain5() -> InvertiblePolynomial {
    InvertiblePolynomial::parse(CHAIN5).expect("fixture parses")
}

pub fn jpow(w: &InvertiblePolynomial, k: i64) -> BasisState {
    unique_state(w, &grading_element(w).pow(k)).expect("powers of j have a state")
}

/// Balanced (e_g, e_{g^-1}) pairs for the pairing sweep.
pub fn dual_pairs(w: &InvertiblePolynomial) -> Vec<(BasisState, BasisState)> {
    aut_group(w)
        .elements(DEFAULT_CAP)
        .expect("small group")
        .into_iter()
        .filter_map(|g| {
            let a = unique_state(w, &g).ok()?;
            let b = unique_state(w, &g.inv()).ok()?;
            (!a.zero_flag && !b.zero_flag).then_some((a, b))
        })
        .collect()
}
