//! The limit characteristic class: Bernoulli and γ(l,k) numbers, the series s_l,
//! symbolic Chern characters, ε-expansions of λ → 1 limits, three-point correlators,
//! and the polytope and truncation predicates.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::eps::{eps_of_power, one_minus_lambda};
pub use crate::eps::{Algebra, EpsSeries};
use crate::error::{Error, Result};
use crate::poly::InvertiblePolynomial;
use crate::rational::{factorial, pow_q, qi, Q};
use crate::spincomb::{lambda_assignment, SpinNumerics};
use crate::statespace::BasisState;

/// B_l(0), with B_1 = −1/2.
pub fn bernoulli(l: usize) -> Q {
    bernoulli_table(l)[l].clone()
}

pub fn bernoulli_table(l: usize) -> Vec<Q> {
    let mut b = vec![Q::one()];
    for m in 1..=l {
        // Σ_{k=0}^{m} C(m+1, k) B_k = 0
        let mut acc = Q::zero();
        let mut binom = BigInt::one();
        for (k, bk) in b.iter().enumerate() {
            acc += Q::from_integer(binom.clone()) * bk;
            binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
        }
        b.push(-acc / qi(m as i64 + 1));
    }
    b
}

/// γ(l, k): coefficients of (e^z − 1)^k / k! = Σ_l γ(l,k) z^l / l!.
pub fn gamma_number(l: usize, k: usize) -> BigInt {
    if k > l {
        return BigInt::zero();
    }
    let mut row = vec![BigInt::one()];
    for n in 1..=l {
        let mut next = vec![BigInt::zero(); n + 1];
        for kk in 1..=n {
            let stay = if kk < row.len() {
                &row[kk] * BigInt::from(kk)
            } else {
                BigInt::zero()
            };
            next[kk] = stay + &row[kk - 1];
        }
        row = next;
    }
    row[k].clone()
}

/// Coefficients in y = x/(1 − x) of s_l: entry k multiplies y^k.
pub fn s_l_in_y(l: usize) -> Vec<Q> {
    assert!(l >= 1, "s_0 is logarithmic and handled multiplicatively");
    let mut out = vec![Q::zero(); l + 1];
    out[0] = bernoulli(l) / qi(l as i64);
    let sign = if l % 2 == 0 { 1 } else { -1 };
    for (k, slot) in out.iter_mut().enumerate().skip(1) {
        *slot = Q::from_integer(factorial(k as u64 - 1) * gamma_number(l, k) * sign);
    }
    out
}

/// s_l(x) for l ≥ 1.
pub fn s_l(x: &Q, l: usize) -> Result<Q> {
    if x.is_one() {
        return Err(Error::Pole);
    }
    if l == 0 {
        return Err(Error::Invalid(
            "s_0 = -ln(1-x) is used through the factor (1-x)^(-ch0)".into(),
        ));
    }
    let y = x / (Q::one() - x);
    Ok(s_l_in_y(l)
        .iter()
        .enumerate()
        .map(|(k, c)| c * pow_q(&y, k as i64))
        .sum())
}

type Mono = Vec<(u16, u16, u32)>;

fn mono_degree(m: &Mono) -> usize {
    m.iter().map(|&(_, l, e)| l as usize * e as usize).sum()
}

fn mono_mul(a: &Mono, b: &Mono) -> Mono {
    let mut out: Mono = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut k) = (0, 0);
    while i < a.len() || k < b.len() {
        if k == b.len() || (i < a.len() && (a[i].0, a[i].1) < (b[k].0, b[k].1)) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || (b[k].0, b[k].1) < (a[i].0, a[i].1) {
            out.push(b[k]);
            k += 1;
        } else {
            out.push((a[i].0, a[i].1, a[i].2 + b[k].2));
            i += 1;
            k += 1;
        }
    }
    out
}

/// Polynomial in the symbols ch[j][l] (l ≥ 1, degree l), truncated above degree `kmax`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChernSymbolPoly {
    terms: BTreeMap<Mono, Q>,
    kmax: usize,
}

impl ChernSymbolPoly {
    pub fn zero(kmax: usize) -> Self {
        ChernSymbolPoly {
            terms: BTreeMap::new(),
            kmax,
        }
    }

    pub fn constant(c: Q, kmax: usize) -> Self {
        let mut p = Self::zero(kmax);
        if !c.is_zero() {
            p.terms.insert(Vec::new(), c);
        }
        p
    }

    pub fn one(kmax: usize) -> Self {
        Self::constant(Q::one(), kmax)
    }

    /// ch[j][l], 0-based variable index `j`.
    pub fn symbol(j: usize, l: usize, kmax: usize) -> Self {
        assert!(l >= 1, "ch[j][0] is an integer, not a symbol");
        let mut p = Self::zero(kmax);
        if l <= kmax {
            p.terms.insert(vec![(j as u16, l as u16, 1)], Q::one());
        }
        p
    }

    pub fn kmax(&self) -> usize {
        self.kmax
    }

    pub fn constant_term(&self) -> Q {
        self.terms.get(&Vec::new()).cloned().unwrap_or_else(Q::zero)
    }

    pub fn coefficient(&self, mono: &[(usize, usize, u32)]) -> Q {
        let key: Mono = mono
            .iter()
            .map(|&(j, l, e)| (j as u16, l as u16, e))
            .collect();
        self.terms.get(&key).cloned().unwrap_or_else(Q::zero)
    }

    pub fn degree_part(&self, k: usize) -> Self {
        ChernSymbolPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| mono_degree(m) == k)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
            kmax: self.kmax,
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Substitutes values for every ch[j][l]; entry k of the result is the degree-k part.
    pub fn evaluate(&self, values: &dyn Fn(usize, usize) -> Q) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.kmax + 1];
        for (m, c) in &self.terms {
            let v = m.iter().fold(c.clone(), |acc, &(j, l, e)| {
                acc * pow_q(&values(j as usize, l as usize), e as i64)
            });
            out[mono_degree(m)] += v;
        }
        out
    }

    /// exp of a polynomial without constant term.
    pub fn exp_nilpotent(&self) -> Self {
        assert!(
            self.constant_term().is_zero(),
            "exp needs a nilpotent argument"
        );
        let mut out = Self::one(self.kmax);
        let mut power = Self::one(self.kmax);
        for m in 1..=self.kmax {
            power = Algebra::mul(&power, self).scale(&(Q::one() / qi(m as i64)));
            out = Algebra::add(&out, &power);
        }
        out
    }
}

impl Algebra for ChernSymbolPoly {
    fn zero_like(&self) -> Self {
        Self::zero(self.kmax)
    }
    fn one_like(&self) -> Self {
        Self::one(self.kmax)
    }
    fn is_nil(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let e = terms.entry(m.clone()).or_insert_with(Q::zero);
            *e += c;
            if e.is_zero() {
                terms.remove(m);
            }
        }
        ChernSymbolPoly {
            terms,
            kmax: self.kmax.min(other.kmax),
        }
    }
    fn mul(&self, other: &Self) -> Self {
        let kmax = self.kmax.min(other.kmax);
        let mut terms: BTreeMap<Mono, Q> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            let da = mono_degree(ma);
            for (mb, cb) in &other.terms {
                if da + mono_degree(mb) > kmax {
                    continue;
                }
                let e = terms.entry(mono_mul(ma, mb)).or_insert_with(Q::zero);
                *e += ca * cb;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        ChernSymbolPoly { terms, kmax }
    }
    fn scale(&self, q: &Q) -> Self {
        if q.is_zero() {
            return self.zero_like();
        }
        ChernSymbolPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * q)).collect(),
            kmax: self.kmax,
        }
    }
    fn inverse(&self) -> Option<Self> {
        let c = self.constant_term();
        if c.is_zero() {
            return None;
        }
        // c (1 + n) with n nilpotent: c⁻¹ Σ (−n)^m
        let n = Algebra::add(self, &Self::constant(-c.clone(), self.kmax)).scale(&c.recip());
        let neg = n.scale(&qi(-1));
        let mut out = Self::one(self.kmax);
        let mut power = Self::one(self.kmax);
        for _ in 0..self.kmax {
            power = Algebra::mul(&power, &neg);
            out = Algebra::add(&out, &power);
        }
        Some(out.scale(&c.recip()))
    }
}

impl fmt::Display for ChernSymbolPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut s = vec![c.to_string()];
                for &(j, l, e) in m {
                    if e == 1 {
                        s.push(format!("ch[{}][{}]", j + 1, l));
                    } else {
                        s.push(format!("ch[{}][{}]^{}", j + 1, l, e));
                    }
                }
                s.join("*")
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Polynomial in y with symbolic coefficients; entry m multiplies y^m.
type YPoly = Vec<ChernSymbolPoly>;

fn ypoly_mul(a: &YPoly, b: &YPoly, kmax: usize) -> YPoly {
    let mut out = vec![ChernSymbolPoly::zero(kmax); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (k, y) in b.iter().enumerate() {
            out[i + k] = Algebra::add(&out[i + k], &Algebra::mul(x, y));
        }
    }
    out
}

/// exp(Σ_{l=1}^{kmax} s_l ch[j][l]) as a polynomial in y = x/(1 − x).
pub fn f_class_in_y(j: usize, kmax: usize) -> YPoly {
    let mut arg: YPoly = vec![ChernSymbolPoly::zero(kmax); kmax + 1];
    for l in 1..=kmax {
        let sym = ChernSymbolPoly::symbol(j, l, kmax);
        for (k, c) in s_l_in_y(l).iter().enumerate() {
            arg[k] = Algebra::add(&arg[k], &sym.scale(c));
        }
    }
    let mut out: YPoly = vec![ChernSymbolPoly::one(kmax)];
    let mut power: YPoly = vec![ChernSymbolPoly::one(kmax)];
    for m in 1..=kmax {
        power = ypoly_mul(&power, &arg, kmax)
            .into_iter()
            .map(|c| c.scale(&(Q::one() / qi(m as i64))))
            .collect();
        if out.len() < power.len() {
            out.resize(power.len(), ChernSymbolPoly::zero(kmax));
        }
        for (i, c) in power.iter().enumerate() {
            out[i] = Algebra::add(&out[i], c);
        }
    }
    out
}

/// 𝐅_j(x) = (1 − x)^{−ch[j][0]} · body.
#[derive(Clone, Debug, PartialEq)]
pub struct FClass {
    pub base: Q,
    pub body: ChernSymbolPoly,
}

pub fn f_class(j: usize, x: &Q, kmax: usize) -> Result<FClass> {
    if x.is_one() {
        return Err(Error::Pole);
    }
    let y = x / (Q::one() - x);
    let body = f_class_in_y(j, kmax)
        .iter()
        .enumerate()
        .fold(ChernSymbolPoly::zero(kmax), |acc, (m, c)| {
            Algebra::add(&acc, &c.scale(&pow_q(&y, m as i64)))
        });
    Ok(FClass {
        base: Q::one() - x,
        body,
    })
}

/// ε-expansion of ∏_j (1 − λ_j)^{e_j} 𝐅-body_j(λ_j) with λ_j = λ^{k_j}, λ = (1 + ε)⁻¹.
pub fn class_expansion(
    exponents: &[i64],
    lambda: &[i64],
    kmax: usize,
    rel_prec: i64,
) -> Result<EpsSeries<ChernSymbolPoly>> {
    assert_eq!(exponents.len(), lambda.len());
    let zero = ChernSymbolPoly::zero(kmax);
    let mut total = EpsSeries::constant(ChernSymbolPoly::one(kmax), i64::MAX / 4);
    for (j, (&e, &k)) in exponents.iter().zip(lambda).enumerate() {
        if k == 0 {
            return Err(Error::Invalid(
                "lambda exponent 0 makes lambda_j constant".into(),
            ));
        }
        let one_minus = one_minus_lambda(k, rel_prec + 1).pow(e)?;
        let mut factor =
            one_minus.map(zero.clone(), |c| ChernSymbolPoly::constant(c.clone(), kmax));
        if kmax > 0 {
            let y = eps_of_power(k, rel_prec + 1).inverse()?;
            let poly = f_class_in_y(j, kmax);
            let mut body = EpsSeries::zero(&zero, i64::MAX / 4);
            let mut ypow = EpsSeries::constant(Q::one(), i64::MAX / 4);
            for c in &poly {
                let term = ypow.map(zero.clone(), |q| c.scale(q));
                body = body.add(&term);
                ypow = ypow.mul(&y);
            }
            factor = factor.mul(&body);
        }
        total = total.mul(&factor);
    }
    Ok(total)
}

/// Splits a class expansion into its degree-k parts.
pub fn by_degree(s: &EpsSeries<ChernSymbolPoly>, kmax: usize) -> Vec<EpsSeries<ChernSymbolPoly>> {
    (0..=kmax)
        .map(|k| s.map(ChernSymbolPoly::zero(kmax), |c| c.degree_part(k)))
        .collect()
}

/// ε⁰ coefficient of each degree part, after checking that no negative power survives.
/// With `values`, the Chern symbols are replaced by numbers first.
pub fn limit_class(
    exponents: &[i64],
    lambda: &[i64],
    kmax: usize,
    values: Option<&dyn Fn(usize, usize) -> Q>,
) -> Result<Vec<ChernSymbolPoly>> {
    let degvir: i64 = exponents.iter().sum();
    let neg: i64 = exponents.iter().filter(|&&e| e < 0).map(|e| -e).sum();
    let mut rel = 2 + neg + (kmax * exponents.len()) as i64 - degvir.min(0);
    loop {
        let full = class_expansion(exponents, lambda, kmax, rel)?;
        if full.precision() < 1 {
            rel *= 2;
            continue;
        }
        let mut out = Vec::with_capacity(kmax + 1);
        for (k, part) in by_degree(&full, kmax).into_iter().enumerate() {
            let part = match values {
                Some(v) => part.map(ChernSymbolPoly::zero(kmax), |c| {
                    ChernSymbolPoly::constant(c.evaluate(v)[k].clone(), kmax)
                }),
                None => part,
            };
            if let Some(val) = part.valuation() {
                if val < 0 {
                    return Err(Error::NegativeValuation {
                        degree: k,
                        valuation: val,
                    });
                }
            }
            out.push(part.coeff(0).expect("precision checked"));
        }
        return Ok(out);
    }
}

/// ⟨e1, e2, e3⟩ in genus zero: the degree-zero limit of the virtual class.
pub fn correlator3(w: &InvertiblePolynomial, e: [&BasisState; 3]) -> Result<Q> {
    Ok(correlator3_report(w, e)?.0)
}

/// The value together with the spin data used to compute it.
pub fn correlator3_report(
    w: &InvertiblePolynomial,
    e: [&BasisState; 3],
) -> Result<(Q, SpinNumerics, Vec<i64>)> {
    let states: Vec<BasisState> = e.iter().map(|s| (*s).clone()).collect();
    let num = SpinNumerics::new(w, &states)?;
    if num.degvir < 0 {
        return Err(Error::NegativeDegvir(num.degvir));
    }
    let lambda = lambda_assignment(w, &states, &num)?;
    if states.iter().any(|s| s.zero_flag) {
        return Ok((Q::zero(), num, lambda));
    }
    let value = limit_class(&num.minus_ch0_r, &lambda, 0, None)?[0].constant_term();
    Ok((value, num, lambda))
}

/// (p, q) ∈ 𝒫⁺ ∩ ⋂_j 𝒫_j(R_j).
pub fn polytope_member(p: &[u64], q: &[u64], r: &[i64], a: &[u32], ranks_b: &[u64]) -> bool {
    let n = p.len();
    if q.len() != n || r.len() != n || ranks_b.len() != n || a.len() + 1 < n {
        return false;
    }
    if (0..n).any(|j| q[j] > ranks_b[j]) {
        return false;
    }
    let z: Vec<u64> = (0..n).map(|j| p[j] + q[j]).collect();
    domain_constraints_hold(&z, 0, r, a)
}

fn domain_constraints_hold(z: &[u64], offset: usize, r: &[i64], a: &[u32]) -> bool {
    let n = offset + z.len();
    (offset..n).all(|l| {
        let mut acc = BigInt::from(z[l - offset]);
        let mut coef = BigInt::one();
        for k in l + 1..n {
            coef *= -BigInt::from(a[k - 1]);
            acc += &coef * BigInt::from(z[k - offset]);
        }
        acc <= BigInt::from(r[l])
    })
}

/// Every (p, q) ∈ 𝒫(R), lexicographic.
pub fn enumerate_polytope(r: &[i64], a: &[u32], ranks_b: &[u64]) -> Vec<(Vec<u64>, Vec<u64>)> {
    let n = r.len();
    let zs = domain_of_sum(0, r, a);
    let mut out = Vec::new();
    for z in zs {
        let mut partial: Vec<(Vec<u64>, Vec<u64>)> = vec![(Vec::new(), Vec::new())];
        for j in 0..n {
            let mut next = Vec::new();
            for (p, q) in &partial {
                for qj in 0..=z[j].min(ranks_b[j]) {
                    let mut p2 = p.clone();
                    let mut q2 = q.clone();
                    p2.push(z[j] - qj);
                    q2.push(qj);
                    next.push((p2, q2));
                }
            }
            partial = next;
        }
        out.extend(partial);
    }
    out.sort();
    out
}

/// (z_j, …, z_N) ∈ ℕ^{N−j+1} with z_l + Σ_{k>l} (−a_l)⋯(−a_{k−1}) z_k ≤ R_l for l ≥ j.
pub fn domain_of_sum(j: usize, r: &[i64], a: &[u32]) -> Vec<Vec<u64>> {
    let n = r.len();
    // fill from the tail: z_l ≤ R_l − Σ_{k>l} (−a_l)⋯(−a_{k−1}) z_k
    fn rec(l: usize, j: usize, r: &[i64], a: &[u32], tail: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        // tail holds z_{l+1}, …, z_N
        let n = r.len();
        let mut bound = BigInt::from(r[l]);
        let mut coef = BigInt::one();
        for k in l + 1..n {
            coef *= -BigInt::from(a[k - 1]);
            bound -= &coef * BigInt::from(tail[k - l - 1]);
        }
        if bound.is_negative() {
            return;
        }
        let max = bound.to_u64().expect("domain bound fits in u64");
        for z in 0..=max {
            tail.insert(0, z);
            if l == j {
                out.push(tail.clone());
            } else {
                rec(l - 1, j, r, a, tail, out);
            }
            tail.remove(0);
        }
    }
    let mut out = Vec::new();
    if n == 0 || j >= n {
        return vec![Vec::new()];
    }
    rec(n - 1, j, r, a, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// Chern data of one derived class [A → B]: its rank and the symbols ch[k][l] for l ≥ 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VirtualRank {
    pub rank_a: i64,
    pub rank_b: i64,
}

/// Σ_z Ch^∨(S^z AB_k) x^z / Td(AB_k) through x^{zmax}; AB_k has rank `rank` and
/// symbolic ch[k][l].
pub fn formal_f_series(k: usize, rank: i64, kmax: usize, zmax: usize) -> Vec<ChernSymbolPoly> {
    // log = −rank·ln(1−x) + Σ_l (−1)^l ch_l Σ_m m^{l−1} x^m + Σ_l (B_l / l) ch_l
    let zero = ChernSymbolPoly::zero(kmax);
    let mut log = vec![zero.clone(); zmax + 1];
    for l in 1..=kmax {
        let sym = ChernSymbolPoly::symbol(k, l, kmax);
        log[0] = Algebra::add(&log[0], &sym.scale(&(bernoulli(l) / qi(l as i64))));
        let sign = if l % 2 == 0 { 1 } else { -1 };
        for (m, slot) in log.iter_mut().enumerate().skip(1) {
            let c = qi(sign) * pow_q(&qi(m as i64), l as i64 - 1);
            *slot = Algebra::add(slot, &sym.scale(&c));
        }
    }
    // exp of the symbolic part: its x⁰ term is nilpotent, the rest is a power series
    let c0 = log[0].exp_nilpotent();
    let mut rest = log.clone();
    rest[0] = zero.clone();
    let mut e = series_exp(&rest, kmax, zmax);
    e = e.iter().map(|c| Algebra::mul(c, &c0)).collect();
    // (1 − x)^{−rank}
    let binom: Vec<Q> = (0..=zmax)
        .map(|m| {
            let top = qi(rank + m as i64 - 1);
            if m == 0 {
                Q::one()
            } else {
                crate::rational::binomial_q(&top, m as u64)
            }
        })
        .collect();
    let mut out = vec![zero; zmax + 1];
    for (i, c) in e.iter().enumerate() {
        for (m, b) in binom.iter().enumerate() {
            if i + m <= zmax {
                out[i + m] = Algebra::add(&out[i + m], &c.scale(b));
            }
        }
    }
    out
}

/// exp of a power series in x without x⁰ term, through x^{zmax}.
fn series_exp(a: &[ChernSymbolPoly], kmax: usize, zmax: usize) -> Vec<ChernSymbolPoly> {
    // E' = A' E, solved coefficientwise
    let zero = ChernSymbolPoly::zero(kmax);
    let mut e = vec![zero.clone(); zmax + 1];
    e[0] = ChernSymbolPoly::one(kmax);
    for m in 1..=zmax {
        let mut acc = zero.clone();
        for i in 1..=m {
            if i < a.len() {
                acc = Algebra::add(&acc, &Algebra::mul(&a[i], &e[m - i]).scale(&qi(i as i64)));
            }
        }
        e[m] = acc.scale(&(Q::one() / qi(m as i64)));
    }
    e
}

/// 𝐆_j(1, …, 1): the truncated sum over the domain, each AB_k carrying its rank and
/// symbolic Chern characters.
pub fn g_truncation(
    j: usize,
    r: &[i64],
    a: &[u32],
    ranks: &[VirtualRank],
    kmax: usize,
) -> ChernSymbolPoly {
    let dom = domain_of_sum(j, r, a);
    let n = r.len();
    let zmax = dom.iter().flatten().copied().max().unwrap_or(0) as usize;
    let series: Vec<Vec<ChernSymbolPoly>> = (j..n)
        .map(|k| formal_f_series(k, ranks[k].rank_a - ranks[k].rank_b, kmax, zmax))
        .collect();
    let mut total = ChernSymbolPoly::zero(kmax);
    for z in dom {
        let term = z
            .iter()
            .enumerate()
            .fold(ChernSymbolPoly::one(kmax), |acc, (i, &zk)| {
                Algebra::mul(&acc, &series[i][zk as usize])
            });
        total = Algebra::add(&total, &term);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use crate::statespace::unique_state;
    use crate::symmetry::grading_element;

    #[test]
    fn numbers() {
        assert_eq!(bernoulli(0), Q::one());
        assert_eq!(bernoulli(1), q(-1, 2));
        assert_eq!(bernoulli(2), q(1, 6));
        assert_eq!(bernoulli(3), Q::zero());
        assert_eq!(bernoulli(4), q(-1, 30));
        for l in 0..=10 {
            assert_eq!(gamma_number(l, l), BigInt::one());
        }
        assert_eq!(gamma_number(0, 1), BigInt::zero());
        assert_eq!(gamma_number(4, 2), BigInt::from(7));
        assert_eq!(s_l(&Q::zero(), 3).unwrap(), Q::zero());
        assert_eq!(s_l(&Q::zero(), 2).unwrap(), q(1, 12));
        assert!(matches!(s_l(&Q::one(), 2), Err(Error::Pole)));
    }

    #[test]
    fn roots_form_of_f_class() {
        // rank-one −V with root α: ch0 = −1, ch_l = −α^l / l!
        let x = q(1, 3);
        let alpha = q(2, 5);
        let kmax = 4;
        let f = f_class(0, &x, kmax).unwrap();
        let vals =
            |_: usize, l: usize| -pow_q(&alpha, l as i64) / Q::from_integer(factorial(l as u64));
        let body = f.body.evaluate(&vals);
        for (n, b) in body.iter().enumerate() {
            let lhs = &f.base * b;
            let sign = if n % 2 == 0 { Q::one() } else { -Q::one() };
            let rhs = bernoulli(n) * (sign - &x) * pow_q(&alpha, n as i64)
                / Q::from_integer(factorial(n as u64));
            assert_eq!(lhs, rhs, "degree {n}");
        }
    }

    #[test]
    fn concave_limit_is_top_chern_class() {
        // a single bundle B of rank 2 with roots α, β: Rπ_* L = −B
        let (al, be) = (q(1, 2), qi(3));
        let vals = |_: usize, l: usize| {
            -(pow_q(&al, l as i64) + pow_q(&be, l as i64)) / Q::from_integer(factorial(l as u64))
        };
        let out = limit_class(&[2], &[1], 3, Some(&vals)).unwrap();
        let got: Vec<Q> = out.iter().map(|c| c.constant_term()).collect();
        assert_eq!(got, vec![Q::zero(), Q::zero(), &al * &be, Q::zero()]);
    }

    #[test]
    fn three_point_values() {
        let w =
            InvertiblePolynomial::parse("x1^2*x2 + x2^3*x3 + x3^5*x4 + x4^10*x5 + x5^11").unwrap();
        let j = grading_element(&w);
        let s = |k: i64| unique_state(&w, &j.pow(k)).unwrap();
        assert_eq!(correlator3(&w, [&s(3), &s(3), &s(6)]).unwrap(), qi(-2));
        assert_eq!(correlator3(&w, [&s(2), &s(4), &s(6)]).unwrap(), qi(1));
        let d5 = InvertiblePolynomial::parse("x1^2*x2 + x2^4").unwrap();
        let id = unique_state(&d5, &crate::symmetry::DiagonalSymmetry::identity(2)).unwrap();
        let jj = unique_state(&d5, &grading_element(&d5)).unwrap();
        assert_eq!(correlator3(&d5, [&id, &id, &jj]).unwrap(), qi(-2));
    }

    #[test]
    fn domain_and_polytope() {
        let a = [2u32];
        let r = [3i64, 2];
        let dom = domain_of_sum(0, &r, &a);
        for z in &dom {
            assert!(z[1] <= 2 && z[0] as i64 - 2 * z[1] as i64 <= 3);
        }
        assert_eq!(dom.len(), 4 + 6 + 8);
        assert!(polytope_member(&[0, 0], &[0, 0], &[0, 0], &a, &[1, 1]));
        assert!(!polytope_member(&[0, 0], &[2, 0], &[5, 5], &a, &[1, 1]));
        // r = p1 + q1 − a1 q2
        assert!(polytope_member(&[4, 0], &[1, 0], &[5, 0], &a, &[1, 1]));
        assert!(!polytope_member(&[4, 0], &[1, 0], &[4, 0], &a, &[1, 1]));
        assert!(polytope_member(&[6, 0], &[1, 1], &[5, 1], &a, &[1, 1]));
        let all = enumerate_polytope(&[2, 1], &a, &[1, 1]);
        assert!(all
            .iter()
            .all(|(p, q)| polytope_member(p, q, &[2, 1], &a, &[1, 1])));
        assert!(all.contains(&(vec![0, 0], vec![0, 0])));
    }
}
