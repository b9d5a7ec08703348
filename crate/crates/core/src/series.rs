//! Multivariate truncated power series with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{fmt_q, qi, Q};
use crate::ring::Coeff;

/// Σ c_m u^m over monomials of total degree ≤ `order` in `nvars` parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamSeries {
    nvars: usize,
    order: usize,
    terms: BTreeMap<Vec<u16>, Q>,
}

fn total(m: &[u16]) -> usize {
    m.iter().map(|&e| e as usize).sum()
}

impl ParamSeries {
    pub fn zero(nvars: usize, order: usize) -> Self {
        ParamSeries {
            nvars,
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, order: usize, c: Q) -> Self {
        Self::monomial(nvars, order, vec![0; nvars], c)
    }

    pub fn var(nvars: usize, order: usize, i: usize) -> Self {
        let mut m = vec![0; nvars];
        m[i] = 1;
        Self::monomial(nvars, order, m, Q::one())
    }

    pub fn monomial(nvars: usize, order: usize, exps: Vec<u16>, c: Q) -> Self {
        assert_eq!(
            exps.len(),
            nvars,
            "monomial has the wrong number of parameters"
        );
        let mut s = Self::zero(nvars, order);
        if total(&exps) <= order && !c.is_zero() {
            s.terms.insert(exps, c);
        }
        s
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: &[u16]) -> Q {
        self.terms.get(exps).cloned().unwrap_or_else(Q::zero)
    }

    pub fn constant_term(&self) -> Q {
        self.coeff(&vec![0; self.nvars])
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u16>, &Q)> {
        self.terms.iter()
    }

    /// Smallest total degree present.
    pub fn valuation(&self) -> Option<usize> {
        self.terms.keys().map(|m| total(m)).min()
    }

    pub fn truncate(&self, order: usize) -> Self {
        ParamSeries {
            nvars: self.nvars,
            order: order.min(self.order),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| total(m) <= order)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Part of total degree exactly `k`.
    pub fn homogeneous(&self, k: usize) -> Self {
        ParamSeries {
            nvars: self.nvars,
            order: self.order,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| total(m) == k)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let order = self.order.min(other.order);
        let mut out = self.truncate(order);
        for (m, c) in &other.terms {
            if total(m) <= order {
                out.add_coeff(m.clone(), c);
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&qi(-1)))
    }

    fn add_coeff(&mut self, m: Vec<u16>, c: &Q) {
        let e = self.terms.entry(m.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let order = self.order.min(other.order);
        let mut terms: BTreeMap<Vec<u16>, Q> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            let da = total(ma);
            if da > order {
                continue;
            }
            for (mb, cb) in &other.terms {
                if da + total(mb) > order {
                    continue;
                }
                let m: Vec<u16> = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                *terms.entry(m).or_insert_with(Q::zero) += ca * cb;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        ParamSeries {
            nvars: self.nvars,
            order,
            terms,
        }
    }

    pub fn scale(&self, q: &Q) -> Self {
        if q.is_zero() {
            return Self::zero(self.nvars, self.order);
        }
        ParamSeries {
            nvars: self.nvars,
            order: self.order,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * q)).collect(),
        }
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Self::constant(self.nvars, self.order, Q::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Inverse of a series with non-zero constant term.
    pub fn inverse(&self) -> Result<Self> {
        let c = self.constant_term();
        if c.is_zero() {
            return Err(Error::Extraction(
                "division by a series without unit constant term".into(),
            ));
        }
        let cinv = c.recip();
        let one = Self::constant(self.nvars, self.order, Q::one());
        let n = self.scale(&cinv).sub(&one);
        let neg = n.scale(&qi(-1));
        let mut out = one.clone();
        let mut power = one;
        for _ in 0..self.order {
            power = power.mul(&neg);
            out = out.add(&power);
        }
        Ok(out.scale(&cinv))
    }

    /// Multiplies by t^{−k} for a single parameter, losing k orders of precision.
    pub fn shift_down(&self, k: usize) -> Result<Self> {
        if self.nvars != 1 {
            return Err(Error::Extraction(
                "shifting needs a single parameter".into(),
            ));
        }
        let mut out = Self::zero(1, self.order.saturating_sub(k));
        for (m, c) in &self.terms {
            if (m[0] as usize) < k {
                return Err(Error::Extraction(
                    "series is not divisible by the requested power".into(),
                ));
            }
            if m[0] as usize - k <= out.order {
                out.terms.insert(vec![m[0] - k as u16], c.clone());
            }
        }
        Ok(out)
    }

    /// self / other, for other with unit constant term or, with one parameter, t^v times a unit.
    pub fn divide(&self, other: &Self) -> Result<Self> {
        if !other.constant_term().is_zero() {
            return Ok(self.mul(&other.inverse()?));
        }
        let v = other
            .valuation()
            .ok_or_else(|| Error::Extraction("division by zero series".into()))?;
        let num = self.shift_down(v)?;
        let den = other.shift_down(v)?;
        Ok(num.mul(&den.inverse()?))
    }

    /// Substitutes `subs[i]` (constant-free) for the i-th parameter.
    pub fn compose(&self, subs: &[ParamSeries]) -> Result<Self> {
        assert_eq!(subs.len(), self.nvars);
        let target = subs
            .first()
            .map(|s| (s.nvars, s.order))
            .unwrap_or((0, self.order));
        if subs.iter().any(|s| !s.constant_term().is_zero()) {
            return Err(Error::Extraction(
                "substitution with a constant term".into(),
            ));
        }
        let order = target.1.min(self.order);
        let mut powers: Vec<Vec<ParamSeries>> = subs
            .iter()
            .map(|s| {
                vec![
                    ParamSeries::constant(target.0, order, Q::one()),
                    s.truncate(order),
                ]
            })
            .collect();
        let mut out = ParamSeries::zero(target.0, order);
        for (m, c) in &self.terms {
            let mut term = ParamSeries::constant(target.0, order, c.clone());
            for (i, &e) in m.iter().enumerate() {
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().mul(&powers[i][1]);
                    powers[i].push(next);
                }
                term = term.mul(&powers[i][e as usize]);
            }
            out = out.add(&term);
        }
        Ok(out)
    }
}

impl Coeff for ParamSeries {
    fn is_zero_coeff(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_into(&mut self, other: &Self) {
        *self = ParamSeries::add(self, other);
    }
}

impl fmt::Display for ParamSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let name = |i: usize| {
            if self.nvars == 1 {
                "t".to_string()
            } else {
                format!("u{}", i + 1)
            }
        };
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let vars: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        name(i)
                    } else {
                        format!("{}^{}", name(i), e)
                    }
                })
                .collect();
            let neg = c.is_negative();
            let mag = fmt_q(&c.abs());
            let body = match (vars.is_empty(), c.abs().is_one()) {
                (true, _) => mag,
                (false, true) => vars.join("*"),
                (false, false) => format!("{mag}*{}", vars.join("*")),
            };
            match (k, neg) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            out.push_str(&body);
        }
        f.write_str(&out)
    }
}
