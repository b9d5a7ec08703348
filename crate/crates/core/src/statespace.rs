//! The state space: admissible and balanced decorations, grading, pairing and duals.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::poly::InvertiblePolynomial;
use crate::rational::{qi, Frac, Q};
use crate::ring::Coeff;
use crate::symmetry::{aut_group, grading_element, DiagonalSymmetry};

/// A symmetry together with a crossed subset of its broad variables (0-based, sorted).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Decoration {
    pub gamma: DiagonalSymmetry,
    pub crossed: Vec<usize>,
}

impl Decoration {
    pub fn new(gamma: DiagonalSymmetry, mut crossed: Vec<usize>) -> Self {
        crossed.sort_unstable();
        crossed.dedup();
        Decoration { gamma, crossed }
    }

    pub fn is_crossed(&self, j: usize) -> bool {
        self.crossed.binary_search(&j).is_ok()
    }

    pub fn mask(&self) -> u64 {
        self.crossed.iter().fold(0, |m, &j| m | (1 << j))
    }

    /// Every uncrossed broad vertex points to a crossed one, every crossed vertex
    /// points to itself or to an uncrossed one.
    pub fn is_admissible(&self, w: &InvertiblePolynomial) -> bool {
        let broad = self.gamma.broad();
        if self.crossed.iter().any(|j| !broad.contains(j)) {
            return false;
        }
        broad.iter().all(|&j| {
            let t = w.target(j);
            if self.is_crossed(j) {
                t == j || !self.is_crossed(t)
            } else {
                t != j && self.is_crossed(t)
            }
        })
    }

    /// As many crossed as uncrossed vertices on each component of the broad subgraph.
    pub fn is_balanced(&self, w: &InvertiblePolynomial) -> bool {
        broad_components(w, &self.gamma).iter().all(|comp| {
            let c = comp.iter().filter(|&&j| self.is_crossed(j)).count();
            2 * c == comp.len()
        })
    }
}

impl fmt::Display for Decoration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.gamma)?;
        if !self.crossed.is_empty() {
            let c: Vec<String> = self.crossed.iter().map(|j| (j + 1).to_string()).collect();
            write!(f, "[{}]", c.join(","))?;
        }
        Ok(())
    }
}

/// An admissible decoration; `zero_flag` marks the unbalanced ones, which are zero vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisState {
    pub decoration: Decoration,
    pub zero_flag: bool,
}

impl BasisState {
    pub fn new(w: &InvertiblePolynomial, decoration: Decoration) -> Result<Self> {
        if decoration.gamma.n() != w.n() || !decoration.gamma.is_member(w.matrix()) {
            return Err(Error::Membership(decoration.gamma.to_string()));
        }
        if !decoration.is_admissible(w) {
            return Err(Error::Invalid(format!(
                "decoration {decoration} is not admissible"
            )));
        }
        let zero_flag = !decoration.is_balanced(w);
        Ok(BasisState {
            decoration,
            zero_flag,
        })
    }

    pub fn gamma(&self) -> &DiagonalSymmetry {
        &self.decoration.gamma
    }

    pub fn crossed(&self) -> &[usize] {
        &self.decoration.crossed
    }

    pub fn is_zero(&self) -> bool {
        self.zero_flag
    }
}

impl fmt::Display for BasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.decoration.fmt(f)
    }
}

/// Finite linear combination of non-zero basis states.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector<C> {
    terms: BTreeMap<BasisState, C>,
}

impl<C: Coeff> Default for StateVector<C> {
    fn default() -> Self {
        StateVector {
            terms: BTreeMap::new(),
        }
    }
}

impl<C: Coeff> StateVector<C> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(state: BasisState, c: C) -> Self {
        let mut v = Self::new();
        v.add_term(state, c);
        v
    }

    /// Adds `c` to the coefficient of `state`; zero states and zero sums are dropped.
    pub fn add_term(&mut self, state: BasisState, c: C) {
        if state.zero_flag || c.is_zero_coeff() {
            return;
        }
        match self.terms.get_mut(&state) {
            Some(old) => {
                old.add_into(&c);
                if old.is_zero_coeff() {
                    self.terms.remove(&state);
                }
            }
            None => {
                self.terms.insert(state, c);
            }
        }
    }

    pub fn get(&self, state: &BasisState) -> Option<&C> {
        self.terms.get(state)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BasisState, &C)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<C: Coeff> IntoIterator for StateVector<C> {
    type Item = (BasisState, C);
    type IntoIter = std::collections::btree_map::IntoIter<BasisState, C>;
    fn into_iter(self) -> Self::IntoIter {
        self.terms.into_iter()
    }
}

pub fn broad_set(gamma: &DiagonalSymmetry) -> Vec<usize> {
    gamma.broad()
}

/// Connected components of the graph of W restricted to the broad variables of γ.
pub fn broad_components(w: &InvertiblePolynomial, gamma: &DiagonalSymmetry) -> Vec<Vec<usize>> {
    let broad = gamma.broad();
    let mut comp_of: BTreeMap<usize, usize> = broad.iter().map(|&j| (j, j)).collect();
    fn find(m: &mut BTreeMap<usize, usize>, x: usize) -> usize {
        let p = m[&x];
        if p == x {
            x
        } else {
            let r = find(m, p);
            m.insert(x, r);
            r
        }
    }
    for &j in &broad {
        let t = w.target(j);
        if comp_of.contains_key(&t) {
            let (a, b) = (find(&mut comp_of, j), find(&mut comp_of, t));
            if a != b {
                comp_of.insert(a.max(b), a.min(b));
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &j in &broad {
        let r = find(&mut comp_of, j);
        groups.entry(r).or_default().push(j);
    }
    groups.into_values().collect()
}

/// Admissible crossed sets of one broad component: alternation along the arrows.
fn component_options(w: &InvertiblePolynomial, comp: &[usize]) -> Vec<Vec<usize>> {
    if let Some(&tail) = comp.iter().find(|&&j| w.target(j) == j) {
        let mut crossed = Vec::new();
        let mut cur = Some(tail);
        let mut cross = true;
        while let Some(v) = cur {
            if cross {
                crossed.push(v);
            }
            cross = !cross;
            cur = w.source(v).filter(|s| comp.contains(s));
        }
        return vec![crossed];
    }
    if comp.len() % 2 == 1 {
        return Vec::new();
    }
    let start = comp[0];
    let mut cycle = vec![start];
    let mut cur = w.target(start);
    while cur != start {
        cycle.push(cur);
        cur = w.target(cur);
    }
    let evens: Vec<usize> = cycle.iter().step_by(2).copied().collect();
    let odds: Vec<usize> = cycle.iter().skip(1).step_by(2).copied().collect();
    vec![evens, odds]
}

/// All admissible decorations of γ, ordered by crossed-set bitmask.
pub fn decorations(w: &InvertiblePolynomial, gamma: &DiagonalSymmetry) -> Vec<BasisState> {
    let mut sets: Vec<Vec<usize>> = vec![Vec::new()];
    for comp in broad_components(w, gamma) {
        let opts = component_options(w, &comp);
        sets = sets
            .iter()
            .flat_map(|s| {
                opts.iter().map(move |o| {
                    let mut v = s.clone();
                    v.extend(o);
                    v
                })
            })
            .collect();
    }
    let mut out: Vec<BasisState> = sets
        .into_iter()
        .map(|c| {
            let d = Decoration::new(gamma.clone(), c);
            let zero_flag = !d.is_balanced(w);
            BasisState {
                decoration: d,
                zero_flag,
            }
        })
        .collect();
    out.sort_by_key(|s| s.decoration.mask());
    out
}

/// The unique admissible decoration of γ, when there is exactly one.
pub fn unique_state(w: &InvertiblePolynomial, gamma: &DiagonalSymmetry) -> Result<BasisState> {
    let mut ds = decorations(w, gamma);
    match ds.len() {
        1 => Ok(ds.pop().unwrap()),
        k => Err(Error::Invalid(format!(
            "{gamma} has {k} admissible decorations; give the crossed variables explicitly"
        ))),
    }
}

/// card B_γ + 2 Σ (Γ_j − q_j).
pub fn degree(w: &InvertiblePolynomial, e: &BasisState) -> Frac {
    let g = e.gamma();
    let b = g.broad().len() as i64;
    let s: Frac = (0..w.n()).map(|j| g.gamma()[j] - w.charge(j)).sum();
    Frac::from_integer(b) + s * 2
}

/// Zero unless γ′ = γ⁻¹; otherwise the product of −a_j over broad variables crossed in neither.
pub fn pairing(w: &InvertiblePolynomial, e: &BasisState, f: &BasisState) -> Q {
    if e.zero_flag || f.zero_flag || !e.gamma().mul(f.gamma()).is_identity() {
        return Q::zero();
    }
    e.gamma()
        .broad()
        .into_iter()
        .filter(|&j| !e.decoration.is_crossed(j) && !f.decoration.is_crossed(j))
        .fold(Q::one(), |acc, j| acc * qi(-(w.a(j) as i64)))
}

fn solve(mut m: Vec<Vec<Q>>, mut rhs: Vec<Q>) -> Option<Vec<Q>> {
    let n = rhs.len();
    for col in 0..n {
        let piv = (col..n).find(|&i| !m[i][col].is_zero())?;
        m.swap(col, piv);
        rhs.swap(col, piv);
        let p = m[col][col].clone();
        for v in m[col].iter_mut() {
            *v = &*v / &p;
        }
        rhs[col] = &rhs[col] / &p;
        for i in 0..n {
            if i != col && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in col..n {
                    let d = &f * &m[col][j];
                    m[i][j] -= d;
                }
                let d = &f * &rhs[col];
                rhs[i] -= d;
            }
        }
    }
    Some(rhs)
}

/// The vector e^γ with pairing(e^γ, e′) = δ for the basis states e′ of γ.
pub fn dual(w: &InvertiblePolynomial, e: &BasisState) -> Result<StateVector<Q>> {
    if e.zero_flag {
        return Err(Error::Unbalanced(e.to_string()));
    }
    let own: Vec<BasisState> = decorations(w, e.gamma())
        .into_iter()
        .filter(|s| !s.zero_flag)
        .collect();
    let partners: Vec<BasisState> = decorations(w, &e.gamma().inv())
        .into_iter()
        .filter(|s| !s.zero_flag)
        .collect();
    let i = own
        .iter()
        .position(|s| s == e)
        .ok_or_else(|| Error::Invalid(format!("{e} is not a basis state")))?;
    let g: Vec<Vec<Q>> = own
        .iter()
        .map(|s| partners.iter().map(|p| pairing(w, s, p)).collect())
        .collect();
    let rhs: Vec<Q> = (0..own.len())
        .map(|k| if k == i { Q::one() } else { Q::zero() })
        .collect();
    let c = solve(g, rhs).ok_or_else(|| Error::Invalid("singular pairing block".into()))?;
    let mut v = StateVector::new();
    for (p, ck) in partners.into_iter().zip(c) {
        v.add_term(p, ck);
    }
    Ok(v)
}

/// Every non-zero basis state, ordered by γ then crossed-set bitmask.
pub fn basis(w: &InvertiblePolynomial, cap: u64) -> Result<Vec<BasisState>> {
    let elems = aut_group(w).elements(cap)?;
    Ok(elems
        .par_iter()
        .map(|g| {
            decorations(w, g)
                .into_iter()
                .filter(|s| !s.zero_flag)
                .collect::<Vec<_>>()
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect())
}

pub fn gram_matrix(w: &InvertiblePolynomial, states: &[BasisState]) -> Vec<Vec<Q>> {
    states
        .iter()
        .map(|a| states.iter().map(|b| pairing(w, a, b)).collect())
        .collect()
}

/// Parses `j^k`, `j`, `id`, or an explicit `(g1,...,gN)`, optionally followed by `[i,...]`
/// listing crossed variables (1-based).
pub fn parse_state(w: &InvertiblePolynomial, spec: &str) -> Result<BasisState> {
    let spec = spec.trim();
    let (head, crossed) = match spec.find('[') {
        Some(p) => {
            let rest = spec[p..].trim();
            if !rest.ends_with(']') {
                return Err(Error::Invalid(format!(
                    "unterminated crossed list in {spec:?}"
                )));
            }
            let inner = &rest[1..rest.len() - 1];
            let list = inner
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| match s.trim_start_matches('x').parse::<usize>() {
                    Ok(k) if k >= 1 && k <= w.n() => Ok(k - 1),
                    _ => Err(Error::Invalid(format!("bad crossed variable {s:?}"))),
                })
                .collect::<Result<Vec<_>>>()?;
            (spec[..p].trim(), Some(list))
        }
        None => (spec, None),
    };
    let gamma = parse_symmetry(w, head)?;
    match crossed {
        Some(c) => BasisState::new(w, Decoration::new(gamma, c)),
        None => unique_state(w, &gamma),
    }
}

pub fn parse_symmetry(w: &InvertiblePolynomial, head: &str) -> Result<DiagonalSymmetry> {
    let head = head.trim();
    let j = grading_element(w);
    let gamma = if head == "id" || head == "1" {
        DiagonalSymmetry::identity(w.n())
    } else if head == "j" {
        j
    } else if let Some(k) = head.strip_prefix("j^") {
        let k: i64 = k
            .trim()
            .parse()
            .map_err(|_| Error::Invalid(format!("bad power in {head:?}")))?;
        j.pow(k)
    } else if head.starts_with('(') && head.ends_with(')') {
        let parts = head[1..head.len() - 1]
            .split(',')
            .map(|s| {
                let s = s.trim();
                let (n, d) = match s.split_once('/') {
                    Some((n, d)) => (n.trim().parse::<i64>(), d.trim().parse::<i64>()),
                    None => (s.parse::<i64>(), Ok(1)),
                };
                match (n, d) {
                    (Ok(n), Ok(d)) if d != 0 => Ok(Frac::new(n, d)),
                    _ => Err(Error::Invalid(format!("bad rational {s:?}"))),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        if parts.len() != w.n() {
            return Err(Error::Invalid(format!(
                "{head} has {} entries, expected {}",
                parts.len(),
                w.n()
            )));
        }
        DiagonalSymmetry::new(parts)
    } else {
        return Err(Error::Invalid(format!(
            "cannot read a symmetry from {head:?}"
        )));
    };
    if !gamma.is_member(w.matrix()) {
        return Err(Error::Membership(gamma.to_string()));
    }
    Ok(gamma)
}

/// Splits on commas outside brackets and parentheses.
pub fn split_specs(list: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in list.chars() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ => {}
        }
        if c == ',' && depth == 0 {
            out.push(cur.trim().to_string());
            cur.clear();
        } else {
            cur.push(c);
        }
    }
    if !cur.trim().is_empty() {
        out.push(cur.trim().to_string());
    }
    out
}

pub fn parse_states(w: &InvertiblePolynomial, list: &str) -> Result<Vec<BasisState>> {
    split_specs(list)
        .iter()
        .map(|s| parse_state(w, s))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmetry::DEFAULT_CAP;

    fn chain5() -> InvertiblePolynomial {
        InvertiblePolynomial::parse("x1^2*x2 + x2^3*x3 + x3^5*x4 + x4^10*x5 + x5^11").unwrap()
    }

    fn d5() -> InvertiblePolynomial {
        InvertiblePolynomial::parse("x1^2*x2 + x2^4").unwrap()
    }

    #[test]
    fn broad_sets() {
        let w = chain5();
        assert!(broad_set(&grading_element(&w).pow(2)).is_empty());
        assert_eq!(
            broad_set(&DiagonalSymmetry::identity(5)),
            vec![0, 1, 2, 3, 4]
        );
        assert_eq!(broad_set(&DiagonalSymmetry::identity(2)), vec![0, 1]);
    }

    #[test]
    fn decorations_of_examples() {
        let d = d5();
        let ds = decorations(&d, &DiagonalSymmetry::identity(2));
        assert_eq!(ds.len(), 1);
        assert_eq!(ds[0].crossed(), &[1]);
        assert!(!ds[0].zero_flag);

        let w = chain5();
        let ds = decorations(&w, &DiagonalSymmetry::identity(5));
        assert_eq!(ds.len(), 1);
        assert!(ds[0].zero_flag);
    }

    #[test]
    fn decorations_match_brute_force() {
        for text in [
            "x1^2*x2 + x2^3*x3 + x3^5*x4 + x4^10*x5 + x5^11",
            "x1^2*x2 + x2^3*x3 + x3^2*x4 + x4^3*x1",
            "x1^3*x2 + x2^2*x3 + x3^2*x1",
            "x^3 + y^2*z + z^4",
        ] {
            let w = InvertiblePolynomial::parse(text).unwrap();
            for g in aut_group(&w).elements(DEFAULT_CAP).unwrap() {
                let broad = g.broad();
                let mut brute: Vec<u64> = (0u64..1 << broad.len())
                    .map(|bits| {
                        let c = broad
                            .iter()
                            .enumerate()
                            .filter(|(i, _)| bits >> i & 1 == 1)
                            .map(|(_, &j)| j)
                            .collect();
                        Decoration::new(g.clone(), c)
                    })
                    .filter(|d| d.is_admissible(&w))
                    .map(|d| d.mask())
                    .collect();
                brute.sort_unstable();
                let fast: Vec<u64> = decorations(&w, &g)
                    .iter()
                    .map(|s| s.decoration.mask())
                    .collect();
                assert_eq!(fast, brute, "{text} {g}");
            }
        }
    }

    #[test]
    fn degrees() {
        let w = chain5();
        let j = grading_element(&w);
        let e2 = unique_state(&w, &j.pow(2)).unwrap();
        assert_eq!(degree(&w, &e2), Frac::from_integer(2));
        let e1 = unique_state(&w, &j).unwrap();
        assert_eq!(degree(&w, &e1), Frac::zero());
    }

    #[test]
    fn pairing_examples() {
        let w = chain5();
        let j = grading_element(&w);
        let a = unique_state(&w, &j.pow(3)).unwrap();
        let b = unique_state(&w, &j.pow(8)).unwrap();
        assert_eq!(pairing(&w, &a, &b), Q::one());
        assert_eq!(pairing(&w, &a, &a), Q::zero());
        let d = d5();
        let id = unique_state(&d, &DiagonalSymmetry::identity(2)).unwrap();
        assert_eq!(pairing(&d, &id, &id), qi(-2));
        let du = dual(&d, &id).unwrap();
        assert_eq!(du.get(&id), Some(&Q::new((-1).into(), 2.into())));
    }

    #[test]
    fn loop_identity_pairing_block() {
        let w = InvertiblePolynomial::parse("x1^2*x2 + x2^3*x3 + x3^2*x4 + x4^3*x1").unwrap();
        let ds = decorations(&w, &DiagonalSymmetry::identity(4));
        assert_eq!(ds.len(), 2);
        let g = gram_matrix(&w, &ds);
        // crossed {x1,x3} then crossed {x2,x4}
        assert_eq!(g, vec![vec![qi(9), qi(1)], vec![qi(1), qi(4)]]);
        for e in &ds {
            let du = dual(&w, e).unwrap();
            let p: Q = du.iter().map(|(s, c)| c * pairing(&w, s, e)).sum();
            assert_eq!(p, Q::one());
        }
    }

    #[test]
    fn parse_specs() {
        let w = chain5();
        let s = parse_states(&w, "j^2, j^3,(4/11,3/11,2/11,1/11,1/11)").unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s[2].gamma(), &grading_element(&w));
        let l = InvertiblePolynomial::parse("x1^2*x2 + x2^3*x3 + x3^2*x4 + x4^3*x1").unwrap();
        assert!(parse_state(&l, "id").is_err());
        assert_eq!(parse_state(&l, "id[2,4]").unwrap().crossed(), &[1, 3]);
        assert!(parse_state(&l, "id[1,2]").is_err());
    }
}
