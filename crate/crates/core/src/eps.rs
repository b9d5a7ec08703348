//! Truncated Laurent series in ε with explicit absolute precision.

use std::fmt::Debug;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{binomial_q, qi, Q};

/// Coefficient rings for [`EpsSeries`]. Constructors take `self` as a template so
/// that context such as a truncation degree travels with the values.
pub trait Algebra: Clone + Debug + PartialEq {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_nil(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn scale(&self, q: &Q) -> Self;
    fn inverse(&self) -> Option<Self>;
}

impl Algebra for Q {
    fn zero_like(&self) -> Self {
        Q::zero()
    }
    fn one_like(&self) -> Self {
        Q::one()
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, q: &Q) -> Self {
        self * q
    }
    fn inverse(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
}

/// Σ_{k ≥ start} c_k ε^k, exact for exponents below `prec`.
#[derive(Clone, Debug, PartialEq)]
pub struct EpsSeries<C> {
    start: i64,
    coeffs: Vec<C>,
    prec: i64,
    zero: C,
}

impl<C: Algebra> EpsSeries<C> {
    pub fn new(start: i64, coeffs: Vec<C>, prec: i64, zero: C) -> Self {
        let mut coeffs = coeffs;
        coeffs.truncate((prec - start).max(0) as usize);
        let mut s = EpsSeries {
            start,
            coeffs,
            prec,
            zero,
        };
        s.normalize();
        s
    }

    pub fn constant(c: C, prec: i64) -> Self {
        let zero = c.zero_like();
        Self::new(0, vec![c], prec, zero)
    }

    pub fn zero(template: &C, prec: i64) -> Self {
        Self::new(0, Vec::new(), prec, template.zero_like())
    }

    fn normalize(&mut self) {
        let lead = self.coeffs.iter().take_while(|c| c.is_nil()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.start += lead as i64;
        }
        while self.coeffs.last().is_some_and(|c| c.is_nil()) {
            self.coeffs.pop();
        }
        if self.coeffs.is_empty() {
            self.start = self.prec;
        }
    }

    fn end(&self) -> i64 {
        self.start + self.coeffs.len() as i64
    }

    pub fn precision(&self) -> i64 {
        self.prec
    }

    /// Lower bound on the exponents present (the valuation when non-zero).
    pub fn low(&self) -> i64 {
        self.start
    }

    /// Exact valuation, or `None` when every known coefficient vanishes.
    pub fn valuation(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.start)
        }
    }

    /// Coefficient of ε^k, `None` beyond the precision.
    pub fn coeff(&self, k: i64) -> Option<C> {
        if k >= self.prec {
            return None;
        }
        let idx = k - self.start;
        if idx < 0 || idx as usize >= self.coeffs.len() {
            Some(self.zero.clone())
        } else {
            Some(self.coeffs[idx as usize].clone())
        }
    }

    /// Known terms as (exponent, coefficient), zero terms skipped.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &C)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_nil())
            .map(move |(i, c)| (self.start + i as i64, c))
    }

    pub fn add(&self, other: &Self) -> Self {
        let prec = self.prec.min(other.prec);
        let start = self.start.min(other.start).min(prec);
        let end = [self, other]
            .iter()
            .filter(|s| !s.coeffs.is_empty())
            .map(|s| s.end())
            .max()
            .unwrap_or(start)
            .min(prec);
        let len = (end - start).max(0) as usize;
        let mut coeffs = vec![self.zero.clone(); len];
        for (k, c) in self.terms().chain(other.terms()) {
            if k < prec {
                let i = (k - start) as usize;
                coeffs[i] = coeffs[i].add(c);
            }
        }
        Self::new(start, coeffs, prec, self.zero.clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let prec =
            (self.prec.saturating_add(other.low())).min(other.prec.saturating_add(self.low()));
        let start = self.low() + other.low();
        let end = (self.end() + other.end()).min(prec);
        let len = (end - start).max(0) as usize;
        let mut coeffs = vec![self.zero.clone(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_nil() {
                continue;
            }
            for (k, b) in other.coeffs.iter().enumerate() {
                let idx = i + k;
                if idx >= len {
                    break;
                }
                coeffs[idx] = coeffs[idx].add(&a.mul(b));
            }
        }
        Self::new(start, coeffs, prec, self.zero.clone())
    }

    pub fn scale(&self, q: &Q) -> Self {
        let coeffs = self.coeffs.iter().map(|c| c.scale(q)).collect();
        Self::new(self.start, coeffs, self.prec, self.zero.clone())
    }

    /// Multiplies by ε^k.
    pub fn shift(&self, k: i64) -> Self {
        Self::new(
            self.start + k,
            self.coeffs.clone(),
            self.prec + k,
            self.zero.clone(),
        )
    }

    /// Multiplicative inverse; needs a known, invertible leading coefficient.
    pub fn inverse(&self) -> Result<Self> {
        let v = self.valuation().ok_or_else(|| {
            Error::Invalid("inverse of a series with no known non-zero term".into())
        })?;
        if self.prec >= i64::MAX / 8 {
            if self.coeffs.len() == 1 {
                let inv = self.coeffs[0].inverse().ok_or_else(|| {
                    Error::Invalid("leading coefficient is not invertible".into())
                })?;
                return Ok(Self::new(-v, vec![inv], i64::MAX / 4, self.zero.clone()));
            }
            return Err(Error::Invalid(
                "inverse of an exact non-monomial series needs a precision".into(),
            ));
        }
        let rel = (self.prec - v) as usize;
        let inv0 = self.coeffs[0]
            .inverse()
            .ok_or_else(|| Error::Invalid("leading coefficient is not invertible".into()))?;
        let mut b: Vec<C> = Vec::with_capacity(rel);
        b.push(inv0.clone());
        for m in 1..rel {
            let mut acc = self.zero.clone();
            for i in 1..=m {
                if i < self.coeffs.len() {
                    acc = acc.add(&self.coeffs[i].mul(&b[m - i]));
                }
            }
            b.push(acc.mul(&inv0).scale(&qi(-1)));
        }
        Ok(Self::new(-v, b, rel as i64 - v, self.zero.clone()))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut acc = Self::constant(self.zero.one_like(), i64::MAX / 4);
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    pub fn map<D: Algebra>(&self, zero: D, f: impl Fn(&C) -> D) -> EpsSeries<D> {
        let coeffs = self.coeffs.iter().map(f).collect();
        EpsSeries::new(self.start, coeffs, self.prec, zero)
    }
}

/// Series over series: lets a truncated Laurent series in z serve as the ε-coefficients.
impl<C: Algebra> Algebra for EpsSeries<C> {
    fn zero_like(&self) -> Self {
        EpsSeries::zero(&self.zero, i64::MAX / 4)
    }
    fn one_like(&self) -> Self {
        EpsSeries::constant(self.zero.one_like(), i64::MAX / 4)
    }
    fn is_nil(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        EpsSeries::add(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        EpsSeries::mul(self, other)
    }
    fn scale(&self, q: &Q) -> Self {
        EpsSeries::scale(self, q)
    }
    fn inverse(&self) -> Option<Self> {
        EpsSeries::inverse(self).ok()
    }
}

/// (1 + ε)^k known modulo ε^prec.
pub fn one_plus_eps_pow(k: i64, prec: i64) -> EpsSeries<Q> {
    let kq = qi(k);
    let coeffs = (0..prec.max(0) as u64)
        .map(|m| binomial_q(&kq, m))
        .collect();
    EpsSeries::new(0, coeffs, prec, Q::zero())
}

/// ε_j = λ_j⁻¹ − 1 = (1 + ε)^k − 1 for λ_j = λ^k, λ = (1 + ε)⁻¹.
pub fn eps_of_power(k: i64, prec: i64) -> EpsSeries<Q> {
    one_plus_eps_pow(k, prec).add(&EpsSeries::constant(qi(-1), prec))
}

/// 1 − λ^k = 1 − (1 + ε)^{−k}.
pub fn one_minus_lambda(k: i64, prec: i64) -> EpsSeries<Q> {
    EpsSeries::constant(Q::one(), prec).add(&one_plus_eps_pow(-k, prec).scale(&qi(-1)))
}
