#![allow(dead_code)]

use num_traits::{One, Zero};

use lgspin_core::charclass::{
    bernoulli, by_degree, class_expansion, correlator3_report, gamma_number,
};
use lgspin_core::rational::{factorial, pow_q, qi};
use lgspin_core::spincomb::{
    lambda_assignment, omega_last, selection_ok, IFunctionNumerics, SpinNumerics,
};
use lgspin_core::statespace::{degree, unique_state, BasisState};
use lgspin_core::symmetry::{aut_group, DiagonalSymmetry, DEFAULT_CAP};
use lgspin_core::{Frac, InvertiblePolynomial, Q};

pub const CHAIN5: &str = "x1^2*x2 + x2^3*x3 + x3^5*x4 + x4^10*x5 + x5^11";
pub const D5: &str = "x1^2*x2 + x2^4";
pub const LOOP4: &str = "x1^2*x2 + x2^3*x3 + x3^2*x4 + x4^3*x1";

/// Chains used by the I-function checks.
pub const CHAINS: &[&str] = &[
    CHAIN5,
    D5,
    "x1^3*x2 + x2^3*x3 + x3^4",
    "x1^2*x2 + x2^2*x3 + x3^2*x4 + x4^3",
    "x1^4*x2 + x2^5",
    "x1^2*x2 + x2^3*x3 + x3^3",
];

/// Mixed corpus: Fermat, chain, loop and sums.
pub const CORPUS: &[&str] = &[
    CHAIN5,
    D5,
    LOOP4,
    "x^3 + y^3 + z^3",
    "x^5",
    "x1^2*x2 + x2^3*x1",
    "x1^3*x2 + x2^3*x3 + x3^3*x1",
    "x^4 + y^3*z + z^3",
    "x1^3*x2 + x2^3*x3 + x3^4",
];

pub fn poly(text: &str) -> InvertiblePolynomial {
    InvertiblePolynomial::parse(text).unwrap()
}

pub fn elements(w: &InvertiblePolynomial) -> Vec<DiagonalSymmetry> {
    aut_group(w).elements(DEFAULT_CAP).unwrap()
}

pub fn narrow_elements(w: &InvertiblePolynomial) -> Vec<DiagonalSymmetry> {
    elements(w).into_iter().filter(|g| g.is_narrow()).collect()
}

/// deg e_γ + deg e_{γ⁻¹} = 2ĉ.
pub fn degree_duality(w: &InvertiblePolynomial, g: &DiagonalSymmetry) -> bool {
    let first = |g: &DiagonalSymmetry| {
        lgspin_core::statespace::decorations(w, g)
            .into_iter()
            .next()
    };
    match (first(g), first(&g.inv())) {
        (Some(e), Some(f)) => degree(w, &e) + degree(w, &f) == w.central_charge() * 2,
        (None, None) => true,
        _ => false,
    }
}

/// The two expressions of D^R agree.
pub fn notationfin_forms(w: &InvertiblePolynomial, gammas: &[DiagonalSymmetry]) -> bool {
    let num = IFunctionNumerics::new(w, gammas).unwrap();
    num.dr == num.dr_floor_form(w)
}

/// −Ch₀(Rπ_* L^R_j) from the closed (n+1)-pointed tuple equals D^R_j + (−1)^{N−j} δ_{ω_j = 1}.
pub fn ch0_identity(w: &InvertiblePolynomial, gammas: &[DiagonalSymmetry]) -> bool {
    let num = IFunctionNumerics::new(w, gammas).unwrap();
    let mut states: Vec<BasisState> = gammas.iter().map(|g| unique_state(w, g).unwrap()).collect();
    states.push(unique_state(w, &num.omega.inv()).unwrap());
    let spin = SpinNumerics::new(w, &states).unwrap();
    spin.minus_ch0_r == num.minus_ch0_r()
}

/// D^R_j ≤ −1 forces D^R_{j+1} ≥ 1, and never happens at the last variable.
pub fn degco(w: &InvertiblePolynomial, gammas: &[DiagonalSymmetry]) -> bool {
    let num = IFunctionNumerics::new(w, gammas).unwrap();
    let n = num.dr.len();
    (0..n).all(|j| num.dr[j] > -1 || (j + 1 < n && num.dr[j + 1] >= 1))
}

/// z-power of the I-function term versus the degree bookkeeping.
/// Exact for narrow insertions with narrow ω(γ̄); other tuples pass vacuously.
pub fn z_power_bookkeeping(w: &InvertiblePolynomial, gammas: &[DiagonalSymmetry]) -> bool {
    let num = IFunctionNumerics::new(w, gammas).unwrap();
    if !num.omega.is_narrow() || gammas.iter().any(|g| !g.is_narrow()) {
        return true;
    }
    let n = gammas.len() as i64;
    let big_n = w.n() as i64;
    let qsum: Frac = (0..w.n()).map(|j| w.charge(j)).sum();
    let degs: Frac = gammas
        .iter()
        .map(|g| degree(w, &unique_state(w, g).unwrap()))
        .sum();
    let last = degree(w, &unique_state(w, &num.omega.inv()).unwrap());
    let expect = Frac::from_integer(1 - n - big_n) + qsum * 2 + degs / 2 + last / 2;
    expect == Frac::from_integer(num.z_power())
}

/// A random selection-compatible tuple: n − 1 random entries closed by the forced last one.
pub fn closed_tuple(w: &InvertiblePolynomial, free: &[DiagonalSymmetry]) -> Vec<DiagonalSymmetry> {
    let omega = omega_last(w, free);
    let mut out = free.to_vec();
    out.push(omega.inv());
    debug_assert!(selection_ok(w, &out));
    out
}

/// Every degree-k part of the class has ε-valuation ≥ degvir − k.
pub fn eps_valuation(w: &InvertiblePolynomial, gammas: &[DiagonalSymmetry], kmax: usize) -> bool {
    let states: Vec<BasisState> = gammas.iter().map(|g| unique_state(w, g).unwrap()).collect();
    let num = SpinNumerics::new(w, &states).unwrap();
    if num.degvir < 0 {
        return true;
    }
    let lambda = lambda_assignment(w, &states, &num).unwrap();
    let rel = 4 + kmax as i64 * w.n() as i64 + num.minus_ch0_r.iter().map(|e| e.abs()).sum::<i64>();
    let full = class_expansion(&num.minus_ch0_r, &lambda, kmax, rel).unwrap();
    by_degree(&full, kmax)
        .iter()
        .enumerate()
        .all(|(k, part)| match part.valuation() {
            Some(v) => v >= num.degvir - k as i64,
            None => true,
        })
}

/// Three-point correlators of non-zero states vanish exactly when degvir > 0.
pub fn correlator3_vanishing(w: &InvertiblePolynomial, gammas: &[DiagonalSymmetry]) -> bool {
    let states: Vec<BasisState> = gammas.iter().map(|g| unique_state(w, g).unwrap()).collect();
    if states.iter().any(|s| s.zero_flag) {
        return true;
    }
    match correlator3_report(w, [&states[0], &states[1], &states[2]]) {
        Ok((value, num, _)) => (num.degvir > 0) == value.is_zero(),
        Err(lgspin_core::Error::NegativeDegvir(_)) => true,
        Err(_) => false,
    }
}

fn series_exp(a: &[Q], order: usize) -> Vec<Q> {
    let mut e = vec![Q::zero(); order + 1];
    e[0] = Q::one();
    for m in 1..=order {
        let mut acc = Q::zero();
        for i in 1..=m {
            acc += qi(i as i64) * &a[i] * &e[m - i];
        }
        e[m] = acc / qi(m as i64);
    }
    e
}

/// 1 − x e^y = (1 − x) exp(−Σ_{l,k} (k−1)! (x/(1−x))^k γ(l,k) y^l/l!) through y^order.
pub fn lemma_exponential(x: &Q, order: usize) -> bool {
    let y = x / (Q::one() - x);
    let mut log = vec![Q::zero(); order + 1];
    for (l, slot) in log.iter_mut().enumerate().skip(1) {
        let mut s = Q::zero();
        for k in 1..=l {
            s +=
                Q::from_integer(factorial(k as u64 - 1) * gamma_number(l, k)) * pow_q(&y, k as i64);
        }
        *slot = -s / Q::from_integer(factorial(l as u64));
    }
    let rhs = series_exp(&log, order);
    (0..=order).all(|l| {
        let lhs = if l == 0 {
            Q::one() - x
        } else {
            -x / Q::from_integer(factorial(l as u64))
        };
        lhs == (Q::one() - x) * &rhs[l]
    })
}

/// y/(1 − e^{−y}) = exp(−Σ_l B_l y^l/(l · l!)) through y^order.
pub fn lemma_todd(order: usize) -> bool {
    let log: Vec<Q> = (0..=order)
        .map(|l| {
            if l == 0 {
                Q::zero()
            } else {
                -bernoulli(l) / (qi(l as i64) * Q::from_integer(factorial(l as u64)))
            }
        })
        .collect();
    let rhs = series_exp(&log, order);
    // (1 − e^{−y})/y = Σ (−1)^m y^m/(m+1)!
    let den: Vec<Q> = (0..=order)
        .map(|m| qi(if m % 2 == 0 { 1 } else { -1 }) / Q::from_integer(factorial(m as u64 + 1)))
        .collect();
    (0..=order).all(|m| {
        let s: Q = (0..=m).map(|i| &rhs[i] * &den[m - i]).sum();
        s == if m == 0 { Q::one() } else { Q::zero() }
    })
}

/// exp(−𝐬(t, x)) = t + (1 − x) Σ B_n tⁿ/n! with 𝐬 = Σ s_l(x) t^l/l!, s_0 = −ln(1−x).
pub fn lemma_twisting_series(x: &Q, order: usize) -> bool {
    let mut log = vec![Q::zero(); order + 1];
    for (l, slot) in log.iter_mut().enumerate().skip(1) {
        *slot = -lgspin_core::charclass::s_l(x, l).unwrap() / Q::from_integer(factorial(l as u64));
    }
    let e = series_exp(&log, order);
    (0..=order).all(|n| {
        let lhs = (Q::one() - x) * &e[n];
        let mut rhs = (Q::one() - x) * bernoulli(n) / Q::from_integer(factorial(n as u64));
        if n == 1 {
            rhs += Q::one();
        }
        lhs == rhs
    })
}
