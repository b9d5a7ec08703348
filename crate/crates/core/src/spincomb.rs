//! Genus-zero W-spin combinatorics: selection rule, Γ^R conventions, D^R, Euler
//! characteristics, virtual degree, concavity and the λ-exponents.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::InvertiblePolynomial;
use crate::rational::{floor_i64, Frac};
use crate::statespace::BasisState;
use crate::symmetry::{grading_element, DiagonalSymmetry};

/// N − j is even, for the 0-based index `j` among `n` variables.
pub fn even_from_tail(n: usize, j: usize) -> bool {
    (n - 1 - j) % 2 == 0
}

/// Γ^R_j: a broad entry is lifted to 1 when N − j is even.
pub fn gamma_r(n: usize, j: usize, g: Frac) -> Frac {
    if g.is_zero() && even_from_tail(n, j) {
        Frac::one()
    } else {
        g
    }
}

/// ω(γ̄)_j = Σ_i Γ_j(i) + q_j (1 − n) mod 1.
pub fn omega_last(w: &InvertiblePolynomial, gammas: &[DiagonalSymmetry]) -> DiagonalSymmetry {
    let n = gammas.len() as i64;
    DiagonalSymmetry::new(
        (0..w.n())
            .map(|j| gammas.iter().map(|g| g.gamma()[j]).sum::<Frac>() + w.charge(j) * (1 - n))
            .collect(),
    )
}

/// γ(1)⋯γ(n) = 𝔧^{n−2}.
pub fn selection_ok(w: &InvertiblePolynomial, gammas: &[DiagonalSymmetry]) -> bool {
    check_selection(w, gammas).is_ok()
}

pub fn check_selection(w: &InvertiblePolynomial, gammas: &[DiagonalSymmetry]) -> Result<()> {
    let prod = gammas
        .iter()
        .fold(DiagonalSymmetry::identity(w.n()), |acc, g| acc.mul(g));
    let expected = gammas.len() as i64 - 2;
    if prod == grading_element(w).pow(expected) {
        Ok(())
    } else {
        Err(Error::Selection {
            found: prod.to_string(),
            expected,
        })
    }
}

/// Combinatorics of one correlator tuple: the line bundles L_j on the genus-zero
/// n-pointed curve and their twists L^R_j by the crossed points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpinNumerics {
    pub n_points: usize,
    /// deg |L_j| = q_j (n − 2) − Σ_i Γ_j(i).
    pub line_degree: Vec<i64>,
    /// −Ch₀(Rπ_* L_j).
    pub minus_ch0: Vec<i64>,
    /// Number of marked points where x_j is crossed.
    pub r: Vec<i64>,
    /// −Ch₀(Rπ_* L^R_j) = −Ch₀(Rπ_* L_j) + r_j.
    pub minus_ch0_r: Vec<i64>,
    pub degvir: i64,
}

impl SpinNumerics {
    pub fn new(w: &InvertiblePolynomial, insertions: &[BasisState]) -> Result<Self> {
        let gammas: Vec<DiagonalSymmetry> = insertions.iter().map(|s| s.gamma().clone()).collect();
        check_selection(w, &gammas)?;
        let n = insertions.len() as i64;
        let mut line_degree = Vec::with_capacity(w.n());
        let mut minus_ch0 = Vec::with_capacity(w.n());
        let mut r = Vec::with_capacity(w.n());
        for j in 0..w.n() {
            let deg = w.charge(j) * (n - 2) - gammas.iter().map(|g| g.gamma()[j]).sum::<Frac>();
            debug_assert!(deg.is_integer());
            let deg = deg.to_integer();
            line_degree.push(deg);
            minus_ch0.push(-(deg + 1));
            r.push(
                insertions
                    .iter()
                    .filter(|s| s.decoration.is_crossed(j))
                    .count() as i64,
            );
        }
        let minus_ch0_r: Vec<i64> = minus_ch0.iter().zip(&r).map(|(c, r)| c + r).collect();
        let degvir = minus_ch0_r.iter().sum();
        Ok(SpinNumerics {
            n_points: insertions.len(),
            line_degree,
            minus_ch0,
            r,
            minus_ch0_r,
            degvir,
        })
    }
}

/// Sufficient test: w_j | d and every broad point of x_j is crossed. At three points the
/// curve is rigid and H⁰(L^R_j) = 0 is decided exactly by deg L^R_j < 0.
pub fn concave(
    w: &InvertiblePolynomial,
    j: usize,
    insertions: &[BasisState],
    num: &SpinNumerics,
) -> bool {
    let quasi = w.degree() % w.weight(j) == 0
        && insertions
            .iter()
            .all(|s| !s.gamma().gamma()[j].is_zero() || s.decoration.is_crossed(j));
    quasi || (insertions.len() == 3 && num.line_degree[j] - num.r[j] < 0)
}

/// Exponents k_j with λ_j = λ^{k_j}: k_{t(j)} = −a_j k_j across every non-concave j,
/// all other variables seeded with 1.
pub fn lambda_assignment(
    w: &InvertiblePolynomial,
    insertions: &[BasisState],
    num: &SpinNumerics,
) -> Result<Vec<i64>> {
    let n = w.n();
    let conc: Vec<bool> = (0..n).map(|j| concave(w, j, insertions, num)).collect();
    for comp in &w.decomposition().components {
        if comp.vars.iter().all(|&j| !conc[j]) {
            return Err(Error::NoConcave(comp.vars[0] + 1));
        }
    }
    let mut k: Vec<Option<i64>> = vec![None; n];
    for start in 0..n {
        let seeded = match w.source(start) {
            None => true,
            Some(p) => conc[p],
        };
        if !seeded {
            continue;
        }
        k[start] = Some(1);
        let mut j = start;
        while !conc[j] {
            let t = w.target(j);
            let next = k[j]
                .unwrap()
                .checked_mul(-(w.a(j) as i64))
                .ok_or(Error::Overflow("lambda exponents"))?;
            k[t] = Some(next);
            j = t;
        }
    }
    k.into_iter()
        .enumerate()
        .map(|(j, v)| v.ok_or(Error::NoConcave(j + 1)))
        .collect()
}

/// λ_j = λ^{(−a_1)⋯(−a_{j−1})} along an ordered chain.
pub fn chain_lambda_exponents(w: &InvertiblePolynomial) -> Result<Vec<i64>> {
    w.require_chain()?;
    let mut out = vec![1i64];
    for j in 1..w.n() {
        let prev = out[j - 1]
            .checked_mul(-(w.a(j - 1) as i64))
            .ok_or(Error::Overflow("lambda exponents"))?;
        out.push(prev);
    }
    Ok(out)
}

/// Data of the I-function term attached to a tuple γ̄ on a chain polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IFunctionNumerics {
    /// Γ^R_j(i), indexed `[i][j]`.
    pub gamma_r: Vec<Vec<Frac>>,
    pub omega: DiagonalSymmetry,
    pub omega_r: Vec<Frac>,
    pub dr: Vec<i64>,
}

impl IFunctionNumerics {
    pub fn new(w: &InvertiblePolynomial, gammas: &[DiagonalSymmetry]) -> Result<Self> {
        w.require_chain()?;
        let n = w.n();
        let len = gammas.len() as i64;
        let lifted: Vec<Vec<Frac>> = gammas
            .iter()
            .map(|g| (0..n).map(|j| gamma_r(n, j, g.gamma()[j])).collect())
            .collect();
        let omega = omega_last(w, gammas);
        let omega_r: Vec<Frac> = (0..n).map(|j| gamma_r(n, j, omega.gamma()[j])).collect();
        let dr = (0..n)
            .map(|j| {
                let q = w.charge(j);
                let s: Frac = lifted.iter().map(|row| row[j]).sum::<Frac>() - q * len;
                let d = q + s - omega_r[j];
                debug_assert!(d.is_integer());
                d.to_integer()
            })
            .collect();
        Ok(IFunctionNumerics {
            gamma_r: lifted,
            omega,
            omega_r,
            dr,
        })
    }

    /// ⌊q_j + Σ_i (Γ^R_j(i) − q_j)⌋ − ⌊ω^R_j⌋.
    pub fn dr_floor_form(&self, w: &InvertiblePolynomial) -> Vec<i64> {
        let len = self.gamma_r.len() as i64;
        (0..w.n())
            .map(|j| {
                let q = w.charge(j);
                let s: Frac = self.gamma_r.iter().map(|row| row[j]).sum::<Frac>() - q * len;
                floor_i64(&(q + s)) - floor_i64(&self.omega_r[j])
            })
            .collect()
    }

    /// −Ch₀(Rπ_* L^R_j) on the (n+1)-pointed curve closing the tuple with ω⁻¹.
    pub fn minus_ch0_r(&self) -> Vec<i64> {
        let n = self.dr.len();
        (0..n)
            .map(|j| {
                let delta = if self.omega.gamma()[j].is_zero() {
                    1
                } else {
                    0
                };
                let sign = if even_from_tail(n, j) { 1 } else { -1 };
                self.dr[j] + sign * delta
            })
            .collect()
    }

    /// Power of −z carried by the term: 1 − n + Σ_j D^R_j.
    pub fn z_power(&self) -> i64 {
        1 - self.gamma_r.len() as i64 + self.dr.iter().sum::<i64>()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statespace::unique_state;

    fn chain5() -> InvertiblePolynomial {
        InvertiblePolynomial::parse("x1^2*x2 + x2^3*x3 + x3^5*x4 + x4^10*x5 + x5^11").unwrap()
    }

    fn jpow(w: &InvertiblePolynomial, k: i64) -> BasisState {
        unique_state(w, &grading_element(w).pow(k)).unwrap()
    }

    #[test]
    fn gamma_r_cases() {
        assert_eq!(gamma_r(5, 4, Frac::zero()), Frac::one());
        assert_eq!(gamma_r(5, 3, Frac::zero()), Frac::zero());
        assert_eq!(gamma_r(5, 3, Frac::new(1, 3)), Frac::new(1, 3));
    }

    #[test]
    fn omega_examples() {
        let w = chain5();
        let j = grading_element(&w);
        assert_eq!(omega_last(&w, std::slice::from_ref(&j)), j);
        assert_eq!(omega_last(&w, &vec![j.pow(2); 4]).inv(), j.pow(6));
        assert_eq!(omega_last(&w, &[j.pow(3), j.pow(3)]).inv(), j.pow(6));
    }

    #[test]
    fn selection_examples() {
        let w = chain5();
        let j = grading_element(&w);
        assert!(selection_ok(
            &w,
            &[j.pow(2), j.pow(2), j.pow(2), j.pow(2), j.pow(6)]
        ));
        assert!(selection_ok(&w, &[j.pow(7), j.pow(4), j.clone()]));
        assert!(!selection_ok(&w, &[j.pow(2), j.pow(2)]));
    }

    #[test]
    fn degvir_examples() {
        let w = chain5();
        let five: Vec<BasisState> = [2, 2, 2, 2, 6].iter().map(|&k| jpow(&w, k)).collect();
        assert_eq!(SpinNumerics::new(&w, &five).unwrap().degvir, 2);
        for k in 1..11 {
            let t = [jpow(&w, k), jpow(&w, 11 - k), jpow(&w, 1)];
            assert_eq!(SpinNumerics::new(&w, &t).unwrap().degvir, 0);
        }
    }

    #[test]
    fn lambda_examples() {
        let f = InvertiblePolynomial::parse("x^3 + y^3").unwrap();
        let g = grading_element(&f);
        let t: Vec<BasisState> = [1, 1, 2]
            .iter()
            .map(|&k| unique_state(&f, &g.pow(k)).unwrap())
            .collect();
        let num = SpinNumerics::new(&f, &t).unwrap();
        assert_eq!(lambda_assignment(&f, &t, &num).unwrap(), vec![1, 1]);
        assert_eq!(
            chain_lambda_exponents(&chain5()).unwrap(),
            vec![1, -2, 6, -30, 300]
        );
    }

    #[test]
    fn fully_narrow_chain_assignment() {
        // weight 3 does not divide 8, so at four points only the tail is concave
        let w = InvertiblePolynomial::parse("x1^2*x2 + x2^4").unwrap();
        let j = grading_element(&w);
        let states: Vec<BasisState> = [1, 1, 1, 7]
            .iter()
            .map(|&k| unique_state(&w, &j.pow(k)).unwrap())
            .collect();
        let num = SpinNumerics::new(&w, &states).unwrap();
        assert!(!concave(&w, 0, &states, &num));
        assert!(concave(&w, 1, &states, &num));
        let k = lambda_assignment(&w, &states, &num).unwrap();
        assert_eq!(k, chain_lambda_exponents(&w).unwrap());
        assert_eq!(k, vec![1, -2]);
    }

    #[test]
    fn i_numerics_forms_agree() {
        let w = chain5();
        let j = grading_element(&w);
        let g = vec![j.pow(2); 4];
        let num = IFunctionNumerics::new(&w, &g).unwrap();
        assert_eq!(num.dr, num.dr_floor_form(&w));
        assert_eq!(num.omega.inv(), j.pow(6));
    }
}
