//! Diagonal symmetries of W, the group Aut(W), the grading element and SL(W).

use std::collections::{HashSet, VecDeque};
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::poly::{ExponentMatrix, InvertiblePolynomial};
use crate::rational::{fract, Frac, Q};
use crate::smith::invariant_factors;

/// Default limit on exhaustive enumeration of Aut(W).
pub const DEFAULT_CAP: u64 = 1_000_000;

/// γ = diag(exp 2πiΓ_1, …, exp 2πiΓ_N), stored as Γ_j ∈ [0, 1).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiagonalSymmetry {
    gamma: Vec<Frac>,
}

impl DiagonalSymmetry {
    pub fn new(gamma: Vec<Frac>) -> Self {
        DiagonalSymmetry {
            gamma: gamma.into_iter().map(fract).collect(),
        }
    }

    pub fn identity(n: usize) -> Self {
        DiagonalSymmetry {
            gamma: vec![Frac::zero(); n],
        }
    }

    pub fn gamma(&self) -> &[Frac] {
        &self.gamma
    }

    pub fn n(&self) -> usize {
        self.gamma.len()
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(
            self.n(),
            other.n(),
            "symmetries act on different variable counts"
        );
        Self::new(
            self.gamma
                .iter()
                .zip(&other.gamma)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn inv(&self) -> Self {
        Self::new(self.gamma.iter().map(|a| -a).collect())
    }

    pub fn pow(&self, k: i64) -> Self {
        Self::new(self.gamma.iter().map(|a| a * k).collect())
    }

    /// lcm of the denominators.
    pub fn order(&self) -> u64 {
        self.gamma
            .iter()
            .fold(1u64, |acc, g| acc.lcm(&(*g.denom() as u64)))
    }

    pub fn is_identity(&self) -> bool {
        self.gamma.iter().all(|g| g.is_zero())
    }

    /// Indices j with γ_j = 1.
    pub fn broad(&self) -> Vec<usize> {
        (0..self.n()).filter(|&j| self.gamma[j].is_zero()).collect()
    }

    pub fn is_narrow(&self) -> bool {
        self.gamma.iter().all(|g| !g.is_zero())
    }

    pub fn is_member(&self, e: &ExponentMatrix) -> bool {
        e.rows().iter().all(|row| {
            row.iter()
                .zip(&self.gamma)
                .map(|(&m, g)| g * m as i64)
                .sum::<Frac>()
                .is_integer()
        })
    }

    pub fn sum(&self) -> Frac {
        self.gamma.iter().sum()
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.gamma.iter().map(|g| g.to_string()).collect()
    }
}

impl fmt::Display for DiagonalSymmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_strings().join(","))
    }
}

/// Product in Aut(W), rejecting non-members.
pub fn checked_mul(
    w: &InvertiblePolynomial,
    a: &DiagonalSymmetry,
    b: &DiagonalSymmetry,
) -> Result<DiagonalSymmetry> {
    for g in [a, b] {
        if g.n() != w.n() || !g.is_member(w.matrix()) {
            return Err(Error::Membership(g.to_string()));
        }
    }
    Ok(a.mul(b))
}

/// 𝔧 = diag(exp 2πi q_j).
pub fn grading_element(w: &InvertiblePolynomial) -> DiagonalSymmetry {
    DiagonalSymmetry::new(w.weights().charges.clone())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryGroup {
    pub order: u64,
    pub invariant_factors: Vec<u64>,
    pub generators: Vec<DiagonalSymmetry>,
    pub exponent: u64,
}

fn inverse_columns(e: &ExponentMatrix) -> Vec<DiagonalSymmetry> {
    let n = e.n();
    let mut m: Vec<Vec<Q>> = (0..n)
        .map(|i| {
            let mut row: Vec<Q> = e.rows()[i]
                .iter()
                .map(|&x| Q::from_integer(x.into()))
                .collect();
            row.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .find(|&i| !m[i][col].is_zero())
            .expect("validated matrix is invertible");
        m.swap(col, piv);
        let p = m[col][col].clone();
        for v in m[col].iter_mut() {
            *v = &*v / &p;
        }
        for i in 0..n {
            if i != col && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in col..2 * n {
                    let d = &f * &m[col][j];
                    m[i][j] -= d;
                }
            }
        }
    }
    (0..n)
        .map(|k| {
            DiagonalSymmetry::new(
                (0..n)
                    .map(|i| {
                        let x = &m[i][n + k];
                        Frac::new(x.numer().to_i64().unwrap(), x.denom().to_i64().unwrap())
                    })
                    .collect(),
            )
        })
        .collect()
}

pub fn aut_group(w: &InvertiblePolynomial) -> SymmetryGroup {
    let e = w.matrix();
    let order = e
        .determinant()
        .abs()
        .to_u64()
        .expect("group order fits in u64");
    let factors = invariant_factors(&e.transpose().to_i64());
    let exponent = factors.last().copied().unwrap_or(1);
    let generators = inverse_columns(e);
    SymmetryGroup {
        order,
        invariant_factors: factors,
        generators,
        exponent,
    }
}

impl SymmetryGroup {
    /// All elements in lexicographic order of Γ.
    pub fn elements(&self, cap: u64) -> Result<Vec<DiagonalSymmetry>> {
        if self.order > cap {
            return Err(Error::EnumerationCap {
                order: self.order,
                cap,
            });
        }
        let n = self.generators.first().map(|g| g.n()).unwrap_or(0);
        let id = DiagonalSymmetry::identity(n);
        let mut seen: HashSet<DiagonalSymmetry> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(id.clone());
        queue.push_back(id);
        while let Some(g) = queue.pop_front() {
            for gen in &self.generators {
                let h = g.mul(gen);
                if seen.insert(h.clone()) {
                    queue.push_back(h);
                }
            }
        }
        let mut out: Vec<_> = seen.into_iter().collect();
        out.sort();
        Ok(out)
    }
}

/// Elements with Σ Γ_j ∈ ℤ.
pub fn sl_subgroup(w: &InvertiblePolynomial, cap: u64) -> Result<Vec<DiagonalSymmetry>> {
    Ok(aut_group(w)
        .elements(cap)?
        .into_iter()
        .filter(|g| g.sum().is_integer())
        .collect())
}
