//! Big and small I-functions of chain polynomials, the twisted ε-limit oracle,
//! the Picard–Fuchs operator, the mirror map and correlator extraction.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::charclass::bernoulli_table;
use crate::eps::{one_minus_lambda, Algebra, EpsSeries};
use crate::error::{Error, Result};
use crate::poly::InvertiblePolynomial;
use crate::rational::{factorial, frac_to_q, pow_q, qi, sign_pow, Frac, Q};
use crate::series::ParamSeries;
use crate::spincomb::{chain_lambda_exponents, IFunctionNumerics};
use crate::statespace::{degree, pairing, unique_state, BasisState, StateVector};
use crate::symmetry::{grading_element, DiagonalSymmetry};

/// Σ_k z^k v_k with state vectors v_k over parameter series.
#[derive(Clone, Debug, PartialEq)]
pub struct ZSeries {
    nvars: usize,
    order: usize,
    terms: BTreeMap<i64, StateVector<ParamSeries>>,
}

/// One populated coefficient of a [`ZSeries`].
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesTerm {
    pub t_exp: Vec<u16>,
    pub z_exp: i64,
    pub state: BasisState,
    pub coeff: Q,
}

impl ZSeries {
    pub fn new(nvars: usize, order: usize) -> Self {
        ZSeries {
            nvars,
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn add_term(&mut self, z_exp: i64, state: BasisState, c: ParamSeries) {
        let v = self.terms.entry(z_exp).or_default();
        v.add_term(state, c);
        if v.is_empty() {
            self.terms.remove(&z_exp);
        }
    }

    /// Coefficient of z^k.
    pub fn z_coefficient(&self, k: i64) -> StateVector<ParamSeries> {
        self.terms.get(&k).cloned().unwrap_or_default()
    }

    /// Coefficient of (−z)^k.
    pub fn minus_z_coefficient(&self, k: i64) -> StateVector<ParamSeries> {
        let mut out = StateVector::new();
        for (s, c) in self.z_coefficient(k) {
            out.add_term(s, c.scale(&qi(sign_pow(k))));
        }
        out
    }

    pub fn z_exponents(&self) -> Vec<i64> {
        self.terms.keys().copied().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Every non-zero scalar coefficient, ordered by parameter exponent, z-exponent and state.
    pub fn terms(&self) -> Vec<SeriesTerm> {
        let mut out = Vec::new();
        for (&z, v) in &self.terms {
            for (s, ps) in v.iter() {
                for (m, c) in ps.terms() {
                    out.push(SeriesTerm {
                        t_exp: m.clone(),
                        z_exp: z,
                        state: s.clone(),
                        coeff: c.clone(),
                    });
                }
            }
        }
        out.sort_by(|a, b| (&a.t_exp, a.z_exp, &a.state).cmp(&(&b.t_exp, b.z_exp, &b.state)));
        out
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut out = ZSeries::new(self.nvars, order.min(self.order));
        for (&z, v) in &self.terms {
            for (s, c) in v.iter() {
                out.add_term(z, s.clone(), c.truncate(order));
            }
        }
        out
    }
}

/// M_1(γ̄)⋯M_N(γ̄) = coeff · z^{z_power}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MProduct {
    pub coeff: Q,
    pub z_power: i64,
}

fn factor_lists(num: &IFunctionNumerics) -> Vec<Vec<(Frac, i64)>> {
    num.dr
        .iter()
        .zip(&num.omega_r)
        .map(|(&d, &om)| {
            if d >= 1 {
                (0..d).map(|m| (om + m, 1)).collect()
            } else {
                (1..=-d).map(|m| (om - m, -1)).collect()
            }
        })
        .collect()
}

/// Closed form of the λ → 1 limit, with the −a_j convention for the paired vanishing factors.
pub fn m_product(w: &InvertiblePolynomial, gammas: &[DiagonalSymmetry]) -> Result<MProduct> {
    let num = IFunctionNumerics::new(w, gammas)?;
    let z_power: i64 = num.dr.iter().sum();
    let mut facs = factor_lists(&num);
    let mut coeff = Q::one();
    for j in 0..facs.len() {
        if let Some(pos) = facs[j].iter().position(|&(v, e)| v.is_zero() && e == -1) {
            let partner = facs
                .get(j + 1)
                .and_then(|f| f.iter().position(|&(v, e)| v.is_zero() && e == 1))
                .ok_or(Error::Pole)?;
            facs[j].remove(pos);
            facs[j + 1].remove(partner);
            coeff *= qi(-(w.a(j) as i64));
        }
    }
    for (v, e) in facs.into_iter().flatten() {
        if v.is_zero() {
            if e == 1 {
                return Ok(MProduct {
                    coeff: Q::zero(),
                    z_power,
                });
            }
            return Err(Error::Pole);
        }
        let v = frac_to_q(&v);
        coeff = if e == 1 { coeff * v } else { coeff / v };
    }
    Ok(MProduct { coeff, z_power })
}

/// Multisets of size n from 0..m, as sorted index lists.
fn multisets(m: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(m: usize, n: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            rec(m, n, i, cur, out);
            cur.pop();
        }
    }
    rec(m, n, 0, &mut cur, &mut out);
    out
}

/// I^big(h, −z) with h = Σ_i u_i ẽ_{param_states[i]}, through total order `n_max` in u.
///
/// Output states are the basis vectors ẽ_ω; for broad ω these are the rescaled vectors.
pub fn big_i(
    w: &InvertiblePolynomial,
    param_states: &[BasisState],
    n_max: usize,
) -> Result<ZSeries> {
    w.require_chain()?;
    for s in param_states {
        if s.zero_flag {
            return Err(Error::Unbalanced(s.to_string()));
        }
    }
    let m = param_states.len();
    let tuples: Vec<Vec<usize>> = (0..=n_max).flat_map(|n| multisets(m, n)).collect();
    let pieces: Vec<Option<(i64, BasisState, ParamSeries)>> = tuples
        .par_iter()
        .map(|idx| -> Result<Option<(i64, BasisState, ParamSeries)>> {
            let gammas: Vec<DiagonalSymmetry> = idx
                .iter()
                .map(|&i| param_states[i].gamma().clone())
                .collect();
            let mp = m_product(w, &gammas)?;
            if mp.coeff.is_zero() {
                return Ok(None);
            }
            let num = IFunctionNumerics::new(w, &gammas)?;
            let state = unique_state(w, &num.omega)?;
            if state.zero_flag {
                return Ok(None);
            }
            let n = idx.len() as i64;
            let mut exps = vec![0u16; m];
            for &i in idx {
                exps[i] += 1;
            }
            let denom = exps.iter().fold(Q::one(), |acc, &e| {
                acc * Q::from_integer(factorial(e as u64))
            });
            // −z (−z)^{−n} c z^p = (−1)^{1−n} c z^{1−n+p}
            let c = mp.coeff * qi(sign_pow(1 - n)) / denom;
            Ok(Some((
                1 - n + mp.z_power,
                state,
                ParamSeries::monomial(m, n_max, exps, c),
            )))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = ZSeries::new(m, n_max);
    for (z, s, c) in pieces.into_iter().flatten() {
        out.add_term(z, s, c);
    }
    Ok(out)
}

/// t · I^big(−t ẽ_{𝔧²}, −z) from a one-parameter big I-function.
pub fn restrict_to_line(big: &ZSeries) -> Result<ZSeries> {
    if big.nvars != 1 {
        return Err(Error::Invalid(
            "restriction needs a one-parameter big I-function".into(),
        ));
    }
    let mut out = ZSeries::new(1, big.order + 1);
    for t in big.terms() {
        let k = t.t_exp[0];
        let c = t.coeff * qi(sign_pow(k as i64));
        out.add_term(
            t.z_exp,
            t.state,
            ParamSeries::monomial(1, big.order + 1, vec![k + 1], c),
        );
    }
    Ok(out)
}

/// I(t, −z) through t^{order}, closed form on the states e_{𝔧^k}.
pub fn small_i(w: &InvertiblePolynomial, order: usize) -> Result<ZSeries> {
    w.require_chain()?;
    let n = w.n();
    let j = grading_element(w);
    let mut out = ZSeries::new(1, order);
    for k in 1..=order as i64 {
        let state = unique_state(w, &j.pow(k))?;
        if state.zero_flag {
            continue;
        }
        let mut coeff = qi(-1);
        let mut zp = 1i64;
        let mut vanish = false;
        for jj in 0..n {
            let delta = if (n - 1 - jj) % 2 == 1 { -1 } else { 0 };
            let top = w.charge(jj) * k;
            // b = ⟨q_j k⟩ + m with m ≥ 0, b = 0 admitted only when δ_j = −1
            let mut b = crate::rational::fract(top);
            if b.is_zero() && delta == 0 {
                b += 1;
            }
            while b < top {
                if b.is_zero() {
                    vanish = true;
                }
                coeff *= frac_to_q(&b);
                zp += 1;
                b += 1;
            }
        }
        if vanish {
            continue;
        }
        for b in 1..k {
            coeff /= qi(b);
            zp -= 1;
        }
        out.add_term(
            zp,
            state,
            ParamSeries::monomial(1, order, vec![k as u16], coeff),
        );
    }
    Ok(out)
}

/// t^d ∏_j ∏_{c<w_j} (q_j θ + c) − ∏_{c=1}^{d} (θ − c), θ = t d/dt.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PicardFuchsOperator {
    pub weights: Vec<u64>,
    pub degree: u64,
    pub charges: Vec<Frac>,
}

impl PicardFuchsOperator {
    pub fn new(w: &InvertiblePolynomial) -> Self {
        PicardFuchsOperator {
            weights: w.weights().weights.clone(),
            degree: w.degree(),
            charges: w.weights().charges.clone(),
        }
    }

    fn raising(&self, k: i64) -> Q {
        let mut p = Q::one();
        for (wj, q) in self.weights.iter().zip(&self.charges) {
            let base = frac_to_q(&(*q * k));
            for c in 0..*wj as i64 {
                p *= &base + qi(c);
            }
        }
        p
    }

    fn lowering(&self, k: i64) -> Q {
        (1..=self.degree as i64).fold(Q::one(), |acc, c| acc * qi(k - c))
    }

    /// The image of a one-parameter series, kept through its own truncation order.
    pub fn apply(&self, s: &ZSeries) -> Result<ZSeries> {
        if s.nvars != 1 {
            return Err(Error::Invalid(
                "the Picard-Fuchs operator acts on one-parameter series".into(),
            ));
        }
        let d = self.degree as usize;
        let mut out = ZSeries::new(1, s.order);
        for t in s.terms() {
            let k = t.t_exp[0] as usize;
            let low = t.coeff.clone() * self.lowering(k as i64) * qi(-1);
            out.add_term(
                t.z_exp,
                t.state.clone(),
                ParamSeries::monomial(1, s.order, vec![k as u16], low),
            );
            if k + d <= s.order {
                let up = t.coeff * self.raising(k as i64);
                out.add_term(
                    t.z_exp,
                    t.state,
                    ParamSeries::monomial(1, s.order, vec![(k + d) as u16], up),
                );
            }
        }
        Ok(out)
    }
}

/// True when the Picard–Fuchs operator kills every coefficient through t^{order}.
pub fn pf_check(w: &InvertiblePolynomial, s: &ZSeries, order: usize) -> bool {
    match PicardFuchsOperator::new(w).apply(s) {
        Ok(image) => image.truncate(order.min(s.order)).is_zero(),
        Err(_) => false,
    }
}

/// I = ω_0 e_𝔧 (−z) + ω_1 + ω_2 (−z)^{−1} + ⋯ .
#[derive(Clone, Debug, PartialEq)]
pub struct SplitI {
    pub unit: BasisState,
    pub omega0: ParamSeries,
    /// `omegas[k]` multiplies (−z)^{1−k}; entry 0 is empty.
    pub omegas: Vec<StateVector<ParamSeries>>,
}

pub fn split_i(w: &InvertiblePolynomial, s: &ZSeries) -> Result<SplitI> {
    let n = w.n() as i64;
    let lowest = (3 - n).min(0);
    for z in s.z_exponents() {
        if z > 1 || z < lowest {
            return Err(Error::ZPower(z));
        }
    }
    let unit = unique_state(w, &grading_element(w))?;
    let top = s.minus_z_coefficient(1);
    let mut omega0 = ParamSeries::zero(s.nvars, s.order);
    for (st, c) in top.iter() {
        if *st != unit {
            return Err(Error::Extraction(format!(
                "the (-z)^1 coefficient has a component along {st}"
            )));
        }
        omega0 = c.clone();
    }
    let omegas = (0..=(1 - lowest) as usize)
        .map(|k| {
            if k == 0 {
                StateVector::new()
            } else {
                s.minus_z_coefficient(1 - k as i64)
            }
        })
        .collect();
    Ok(SplitI {
        unit,
        omega0,
        omegas,
    })
}

/// τ = ω_1/ω_0 and the J-coefficients ω_k/ω_0.
#[derive(Clone, Debug, PartialEq)]
pub struct MirrorData {
    pub tau: StateVector<ParamSeries>,
    /// `j_pieces[k]` multiplies (−z)^{1−k}; entries 0 and 1 are empty.
    pub j_pieces: Vec<StateVector<ParamSeries>>,
}

fn divide_vector(
    v: &StateVector<ParamSeries>,
    d: &ParamSeries,
) -> Result<StateVector<ParamSeries>> {
    let mut out = StateVector::new();
    for (s, c) in v.iter() {
        out.add_term(s.clone(), c.divide(d)?);
    }
    Ok(out)
}

pub fn mirror_map_and_j(split: &SplitI) -> Result<MirrorData> {
    if split.omega0.is_zero() {
        return Err(Error::Extraction("omega_0 vanishes".into()));
    }
    if split.omega0.constant_term().is_zero() && split.omega0.nvars() != 1 {
        return Err(Error::Extraction(
            "omega_0 has no unit constant term".into(),
        ));
    }
    let tau = divide_vector(
        split.omegas.get(1).unwrap_or(&StateVector::new()),
        &split.omega0,
    )?;
    let j_pieces = split
        .omegas
        .iter()
        .enumerate()
        .map(|(k, v)| {
            if k < 2 {
                Ok(StateVector::new())
            } else {
                divide_vector(v, &split.omega0)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MirrorData { tau, j_pieces })
}

/// ⟨ẽ_{γ_1}, …, ẽ_{γ_n}, ẽ_{last}⟩ with the γ_i drawn from the parameter states.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelatorTarget {
    pub insertions: Vec<BasisState>,
    pub last: BasisState,
}

fn solve_linear(m: &[Vec<Q>]) -> Result<Vec<Vec<Q>>> {
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|k| if k == i { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .find(|&i| !a[i][col].is_zero())
            .ok_or_else(|| Error::Extraction("linear part of the mirror map is singular".into()))?;
        a.swap(col, piv);
        let p = a[col][col].clone();
        for v in a[col].iter_mut() {
            *v = &*v / &p;
        }
        for i in 0..n {
            if i != col && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for k in 0..2 * n {
                    let d = &f * &a[col][k];
                    a[i][k] -= d;
                }
            }
        }
    }
    Ok(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Inverts s = τ(u) for a constant-free τ with invertible linear part.
pub fn invert_mirror_map(tau: &[ParamSeries]) -> Result<Vec<ParamSeries>> {
    let m = tau.len();
    let order = tau.iter().map(|t| t.order()).min().unwrap_or(0);
    let lin: Vec<Vec<Q>> = tau
        .iter()
        .map(|t| {
            (0..m)
                .map(|k| {
                    let mut e = vec![0u16; m];
                    e[k] = 1;
                    t.coeff(&e)
                })
                .collect()
        })
        .collect();
    let linv = solve_linear(&lin)?;
    let vars: Vec<ParamSeries> = (0..m).map(|i| ParamSeries::var(m, order, i)).collect();
    let nonlinear: Vec<ParamSeries> = tau
        .iter()
        .map(|t| t.sub(&t.homogeneous(1)).sub(&t.homogeneous(0)))
        .collect();
    let apply_linv = |v: &[ParamSeries]| -> Vec<ParamSeries> {
        (0..m)
            .map(|i| {
                (0..m).fold(ParamSeries::zero(m, order), |acc, k| {
                    acc.add(&v[k].scale(&linv[i][k]))
                })
            })
            .collect()
    };
    let mut u = apply_linv(&vars);
    for _ in 0..order {
        let mut rhs = Vec::with_capacity(m);
        for k in 0..m {
            rhs.push(vars[k].sub(&nonlinear[k].compose(&u)?));
        }
        u = apply_linv(&rhs);
    }
    Ok(u)
}

/// Genus-zero correlators read off the z^{−1} part of the J-function.
pub fn extract_correlators(
    w: &InvertiblePolynomial,
    param_states: &[BasisState],
    targets: &[CorrelatorTarget],
    n_max: usize,
) -> Result<Vec<Q>> {
    w.require_chain()?;
    if let Some(shape) = w.excluded_shape() {
        return Err(Error::Excluded(shape));
    }
    for s in param_states {
        if !s.gamma().is_narrow() || degree(w, s) != Frac::from_integer(2) {
            return Err(Error::Extraction(format!(
                "parameter state {s} is not narrow of degree 2"
            )));
        }
    }
    for t in targets {
        if t.insertions.len() > n_max {
            return Err(Error::Extraction(format!(
                "{} insertions exceed the tuple-length order {n_max}",
                t.insertions.len()
            )));
        }
        if t.insertions.len() < 2 {
            return Err(Error::Extraction(
                "a genus-zero correlator needs at least three insertions".into(),
            ));
        }
        if t.last.zero_flag {
            return Err(Error::Unbalanced(t.last.to_string()));
        }
    }
    let big = big_i(w, param_states, n_max)?;
    let split = split_i(w, &big)?;
    let mirror = mirror_map_and_j(&split)?;
    let m = param_states.len();
    for (s, _) in mirror.tau.iter() {
        if !param_states.contains(s) {
            return Err(Error::Extraction(format!(
                "mirror map leaves the parameter span along {s}"
            )));
        }
    }
    let tau: Vec<ParamSeries> = param_states
        .iter()
        .map(|s| {
            mirror
                .tau
                .get(s)
                .cloned()
                .unwrap_or_else(|| ParamSeries::zero(m, n_max))
        })
        .collect();
    let u = invert_mirror_map(&tau)?;
    let jm1 = mirror.j_pieces.get(2).cloned().unwrap_or_default();
    targets
        .iter()
        .map(|t| {
            let mut gen = ParamSeries::zero(m, n_max);
            for (s, c) in jm1.iter() {
                let p = pairing(w, s, &t.last);
                if !p.is_zero() {
                    gen = gen.add(&c.scale(&p));
                }
            }
            let gen = gen.compose(&u)?;
            let mut exps = vec![0u16; m];
            for s in &t.insertions {
                let i = param_states.iter().position(|p| p == s).ok_or_else(|| {
                    Error::Extraction(format!("insertion {s} is not a parameter state"))
                })?;
                exps[i] += 1;
            }
            let mult = exps.iter().fold(Q::one(), |acc, &e| {
                acc * Q::from_integer(factorial(e as u64))
            });
            Ok(gen.coeff(&exps) * mult)
        })
        .collect()
}

/// Narrow degree-2 states among the powers of 𝔧, the default parameter set.
pub fn default_params(w: &InvertiblePolynomial) -> Result<Vec<BasisState>> {
    let j = grading_element(w);
    let mut out = Vec::new();
    for k in 1..=w.degree() as i64 {
        let g = j.pow(k);
        if g.is_narrow() {
            let s = unique_state(w, &g)?;
            if !s.zero_flag && degree(w, &s) == Frac::from_integer(2) {
                out.push(s);
            }
        }
    }
    Ok(out)
}

/// Truncated Laurent series in z: the coefficient ring of the oracle.
pub type ZPoly = EpsSeries<Q>;

fn bernoulli_in_z(c: &Q, prec: i64) -> ZPoly {
    let b = bernoulli_table(prec.max(1) as usize);
    let coeffs = (0..prec.max(0) as usize)
        .map(|n| &b[n] * pow_q(c, n as i64) / Q::from_integer(factorial(n as u64)))
        .collect();
    EpsSeries::new(0, coeffs, prec, Q::zero())
}

fn exact_monomial(c: Q, k: i64) -> ZPoly {
    EpsSeries::new(k, vec![c], i64::MAX / 4, Q::zero())
}

/// ε-limit of the twisted coefficient of a tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleLimit {
    pub coeff: Q,
    pub z_power: i64,
}

/// Product over j and m of exp(∓𝐬(t, λ_j)), λ = (1 + ε)⁻¹, expanded in ε with z formal;
/// returns the ε⁰ coefficient once it is known to be a single monomial in z.
pub fn twisted_i_oracle(
    w: &InvertiblePolynomial,
    gammas: &[DiagonalSymmetry],
) -> Result<OracleLimit> {
    let num = IFunctionNumerics::new(w, gammas)?;
    let lambda = chain_lambda_exponents(w)?;
    let facs = factor_lists(&num);
    let z_power: i64 = num.dr.iter().sum();
    let count: i64 = facs.iter().map(|f| f.len() as i64).sum();
    let mut zprec = 4 + 2 * count;
    let mut eprec = 3 + count;
    loop {
        let zero_z: ZPoly = EpsSeries::zero(&Q::zero(), i64::MAX / 4);
        let mut total: EpsSeries<ZPoly> = EpsSeries::constant(zero_z.one_like(), i64::MAX / 4);
        for (j, list) in facs.iter().enumerate() {
            let oml = one_minus_lambda(lambda[j], eprec)
                .map(zero_z.clone(), |c| exact_monomial(c.clone(), 0));
            for &(v, e) in list {
                let c = frac_to_q(&v);
                let factor = if c.is_zero() {
                    oml.clone()
                } else {
                    let t = EpsSeries::constant(exact_monomial(c.clone(), 1), i64::MAX / 4);
                    let b = bernoulli_in_z(&c, zprec);
                    t.add(&oml.map(zero_z.clone(), |x| x.mul(&b)))
                };
                let factor = if e == 1 { factor } else { factor.inverse()? };
                total = total.mul(&factor);
            }
        }
        if total.precision() < 1 {
            eprec *= 2;
            continue;
        }
        if let Some(v) = total.valuation() {
            if v < 0 {
                return Err(Error::NegativeValuation {
                    degree: 0,
                    valuation: v,
                });
            }
        }
        let limit = total.coeff(0).expect("precision checked");
        if limit.valuation().is_some() && limit.precision() <= z_power {
            zprec *= 2;
            continue;
        }
        let mut coeff = Q::zero();
        for (k, c) in limit.terms() {
            if k == z_power {
                coeff = c.clone();
            } else {
                return Err(Error::Extraction(format!(
                    "oracle limit has a stray z^{k} term"
                )));
            }
        }
        return Ok(OracleLimit { coeff, z_power });
    }
}

/// The twisted coefficient at an exact λ ≠ 1, as a Laurent series in z through z^{zprec−1}.
pub fn twisted_i_at(
    w: &InvertiblePolynomial,
    gammas: &[DiagonalSymmetry],
    lambda: &Q,
    zprec: i64,
) -> Result<ZPoly> {
    if lambda.is_one() {
        return Err(Error::Invalid(
            "the twisted coefficient is evaluated at lambda = 1 only as a limit".into(),
        ));
    }
    if lambda.is_zero() {
        return Err(Error::Invalid("lambda must be non-zero".into()));
    }
    let num = IFunctionNumerics::new(w, gammas)?;
    let ks = chain_lambda_exponents(w)?;
    let mut total: ZPoly = EpsSeries::constant(Q::one(), i64::MAX / 4);
    let mut extra = 0;
    for (j, list) in factor_lists(&num).iter().enumerate() {
        let oml = Q::one() - pow_q(lambda, ks[j]);
        for &(v, e) in list {
            let c = frac_to_q(&v);
            let factor = if c.is_zero() {
                EpsSeries::constant(oml.clone(), i64::MAX / 4)
            } else {
                exact_monomial(c.clone(), 1).add(&bernoulli_in_z(&c, zprec + extra).scale(&oml))
            };
            if e == 1 {
                total = total.mul(&factor);
            } else {
                total = total.mul(&factor.inverse()?);
            }
            extra += 2;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn chain5() -> InvertiblePolynomial {
        InvertiblePolynomial::parse("x1^2*x2 + x2^3*x3 + x3^5*x4 + x4^10*x5 + x5^11").unwrap()
    }

    #[test]
    fn empty_tuple_is_the_unit() {
        let w = chain5();
        let big = big_i(&w, &default_params(&w).unwrap(), 0).unwrap();
        let unit = unique_state(&w, &grading_element(&w)).unwrap();
        let top = big.minus_z_coefficient(1);
        assert_eq!(top.get(&unit).unwrap().constant_term(), Q::one());
        assert_eq!(big.terms().len(), 1);
    }

    #[test]
    fn small_i_first_terms() {
        let w = chain5();
        let s = small_i(&w, 3).unwrap();
        let terms = s.terms();
        assert_eq!(terms[0].t_exp, vec![1]);
        assert_eq!((terms[0].z_exp, terms[0].coeff.clone()), (1, qi(-1)));
        let k2 = terms.iter().find(|t| t.t_exp == vec![2]).unwrap();
        assert_eq!(k2.z_exp, 0);
    }

    #[test]
    fn paired_convention() {
        // D5: the pair (case 1 at x1, case 2 at x2) contributes −a_1
        let w = InvertiblePolynomial::parse("x1^2*x2 + x2^4").unwrap();
        let j = grading_element(&w);
        for n in 0..6 {
            let gammas = vec![j.pow(3); n];
            let mp = m_product(&w, &gammas).unwrap();
            let or = twisted_i_oracle(&w, &gammas).unwrap();
            assert_eq!((or.coeff, or.z_power), (mp.coeff, mp.z_power), "n = {n}");
        }
    }

    #[test]
    fn pf_zero_series() {
        let w = chain5();
        assert!(pf_check(&w, &ZSeries::new(1, 10), 10));
    }

    #[test]
    fn twisted_at_lambda_is_finite() {
        let w = chain5();
        let j = grading_element(&w);
        let s = twisted_i_at(&w, &[j.pow(2), j.pow(2)], &q(1, 2), 6).unwrap();
        assert!(s.precision() >= 6);
        assert!(twisted_i_at(&w, &[], &Q::one(), 4).is_err());
    }
}
