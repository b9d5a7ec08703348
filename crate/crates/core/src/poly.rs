//! Invertible polynomials: parsing, exponent matrices, weights, the arrow graph
//! and the Fermat/chain/loop decomposition.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::{Frac, Q};

/// Square matrix of exponents; row `k` is the monomial owned by `x_{k+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentMatrix {
    rows: Vec<Vec<u32>>,
}

impl ExponentMatrix {
    /// Validates the grammar: at most one off-diagonal entry per row and equal to 1,
    /// every diagonal entry at least 2, no variable serving as partner twice, and a
    /// non-zero determinant.
    pub fn new(rows: Vec<Vec<u32>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Invalid("empty exponent matrix".into()));
        }
        for (k, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Invalid(format!(
                    "row {} has {} entries, expected {n}",
                    k + 1,
                    row.len()
                )));
            }
            let off: Vec<usize> = (0..n).filter(|&j| j != k && row[j] != 0).collect();
            if off.len() > 1 {
                return Err(Error::Grammar(format!(
                    "monomial of x{} has more than two variables",
                    k + 1
                )));
            }
            if let Some(&j) = off.first() {
                if row[j] != 1 {
                    return Err(Error::Grammar(format!(
                        "monomial of x{} has two exponents >= 2",
                        k + 1
                    )));
                }
            }
            if row[k] < 2 {
                return Err(Error::Diagonal {
                    var: k + 1,
                    entry: row[k],
                });
            }
        }
        let m = ExponentMatrix { rows };
        PolyGraph::from_matrix(&m)?;
        if m.determinant().is_zero() {
            return Err(Error::Singular);
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn entry(&self, k: usize, j: usize) -> u32 {
        self.rows[k][j]
    }

    /// Partner variable t(j), or j itself for a pure power.
    pub fn target(&self, j: usize) -> usize {
        (0..self.n())
            .find(|&k| k != j && self.rows[j][k] != 0)
            .unwrap_or(j)
    }

    /// a_j with the monomial written x_j^{a_j} x_{t(j)}.
    pub fn exponent_a(&self, j: usize) -> u32 {
        let diag = self.rows[j][j];
        if self.target(j) == j {
            diag - 1
        } else {
            diag
        }
    }

    /// Fraction-free Gaussian elimination.
    pub fn determinant(&self) -> BigInt {
        let n = self.n();
        let mut m: Vec<Vec<BigInt>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|&e| BigInt::from(e)).collect())
            .collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n.saturating_sub(1) {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                    Some(i) => {
                        m.swap(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                    m[i][j] = v;
                }
            }
            prev = m[k][k].clone();
        }
        sign * &m[n - 1][n - 1]
    }

    /// Berglund–Hübsch transpose; always satisfies the grammar again.
    pub fn transpose(&self) -> ExponentMatrix {
        let n = self.n();
        let rows = (0..n)
            .map(|k| (0..n).map(|j| self.rows[j][k]).collect())
            .collect();
        ExponentMatrix { rows }
    }

    pub fn to_i64(&self) -> Vec<Vec<i64>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|&e| e as i64).collect())
            .collect()
    }

    /// Solves E q = (1, ..., 1) exactly.
    pub fn solve_charges(&self) -> Result<Vec<Q>> {
        let n = self.n();
        let mut m: Vec<Vec<Q>> = self
            .rows
            .iter()
            .map(|r| {
                let mut v: Vec<Q> = r.iter().map(|&e| Q::from_integer(e.into())).collect();
                v.push(Q::one());
                v
            })
            .collect();
        for col in 0..n {
            let piv = (col..n)
                .find(|&i| !m[i][col].is_zero())
                .ok_or(Error::Singular)?;
            m.swap(col, piv);
            let p = m[col][col].clone();
            for v in m[col].iter_mut() {
                *v = &*v / &p;
            }
            for i in 0..n {
                if i != col && !m[i][col].is_zero() {
                    let f = m[i][col].clone();
                    for j in col..=n {
                        let d = &f * &m[col][j];
                        m[i][j] -= d;
                    }
                }
            }
        }
        Ok(m.into_iter().map(|r| r[n].clone()).collect())
    }
}

impl fmt::Display for ExponentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(j, &e)| {
                        if e == 1 {
                            format!("x{}", j + 1)
                        } else {
                            format!("x{}^{}", j + 1, e)
                        }
                    })
                    .collect::<Vec<_>>()
                    .join("*")
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightSystem {
    pub weights: Vec<u64>,
    pub degree: u64,
    pub charges: Vec<Frac>,
}

pub fn weight_system(e: &ExponentMatrix) -> Result<WeightSystem> {
    let qs = e.solve_charges()?;
    if let Some(bad) = qs.iter().find(|x| !x.is_positive()) {
        return Err(Error::NotQuasiHomogeneous(bad.to_string()));
    }
    let d = qs.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let weights: Vec<BigInt> = qs
        .iter()
        .map(|x| (x * BigRational::from_integer(d.clone())).to_integer())
        .collect();
    let degree = d.to_u64().ok_or(Error::Overflow("degree"))?;
    let weights = weights
        .iter()
        .map(|w| w.to_u64().ok_or(Error::Overflow("weights")))
        .collect::<Result<Vec<u64>>>()?;
    let charges = weights
        .iter()
        .map(|&w| Frac::new(w as i64, degree as i64))
        .collect();
    Ok(WeightSystem {
        weights,
        degree,
        charges,
    })
}

/// t, s and the vertex labels a_j of the graph attached to W.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyGraph {
    pub target: Vec<usize>,
    pub source: Vec<Option<usize>>,
    pub a: Vec<u32>,
}

impl PolyGraph {
    pub fn from_matrix(e: &ExponentMatrix) -> Result<Self> {
        let n = e.n();
        let target: Vec<usize> = (0..n).map(|j| e.target(j)).collect();
        let mut source = vec![None; n];
        for (j, &t) in target.iter().enumerate() {
            if t == j {
                continue;
            }
            if let Some(prev) = source[t] {
                return Err(Error::Grammar(format!(
                    "x{} is the partner of both x{} and x{}",
                    t + 1,
                    prev + 1,
                    j + 1
                )));
            }
            source[t] = Some(j);
        }
        let a = (0..n).map(|j| e.exponent_a(j)).collect();
        Ok(PolyGraph { target, source, a })
    }

    pub fn n(&self) -> usize {
        self.target.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AtomicKind {
    Fermat,
    Chain,
    Loop,
}

impl AtomicKind {
    pub fn name(self) -> &'static str {
        match self {
            AtomicKind::Fermat => "fermat",
            AtomicKind::Chain => "chain",
            AtomicKind::Loop => "loop",
        }
    }
}

/// One Thom–Sebastiani summand; `vars` follow the arrows of the graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomicComponent {
    pub kind: AtomicKind,
    pub vars: Vec<usize>,
    pub exps: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomicDecomposition {
    pub components: Vec<AtomicComponent>,
}

impl AtomicDecomposition {
    /// Component index of every variable.
    pub fn component_of(&self, n: usize) -> Vec<usize> {
        let mut out = vec![0; n];
        for (c, comp) in self.components.iter().enumerate() {
            for &v in &comp.vars {
                out[v] = c;
            }
        }
        out
    }
}

pub fn decompose(e: &ExponentMatrix) -> Result<AtomicDecomposition> {
    let g = PolyGraph::from_matrix(e)?;
    let n = g.n();
    let mut seen = vec![false; n];
    let mut components = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        // walk forward until a fixed point or a repeated vertex
        let mut path = vec![start];
        let mut on_path = vec![false; n];
        on_path[start] = true;
        let mut v = start;
        loop {
            let t = g.target[v];
            if t == v || on_path[t] || seen[t] {
                break;
            }
            on_path[t] = true;
            path.push(t);
            v = t;
        }
        let end = *path.last().unwrap();
        let comp = if g.target[end] == end {
            // chain ending at `end`: collect backwards through s
            let mut vars = vec![end];
            let mut cur = end;
            while let Some(p) = g.source[cur] {
                vars.push(p);
                cur = p;
            }
            vars.reverse();
            let exps = vars.iter().map(|&j| g.a[j]).collect();
            let kind = if vars.len() == 1 {
                AtomicKind::Fermat
            } else {
                AtomicKind::Chain
            };
            AtomicComponent { kind, vars, exps }
        } else {
            let first = path.iter().copied().min().unwrap();
            let mut vars = vec![first];
            let mut cur = g.target[first];
            while cur != first {
                vars.push(cur);
                cur = g.target[cur];
                if vars.len() > n {
                    return Err(Error::Grammar("arrow graph is not a cycle".into()));
                }
            }
            let exps = vars.iter().map(|&j| g.a[j]).collect();
            AtomicComponent {
                kind: AtomicKind::Loop,
                vars,
                exps,
            }
        };
        for &v in &comp.vars {
            if seen[v] {
                return Err(Error::Grammar("components overlap".into()));
            }
            seen[v] = true;
        }
        components.push(comp);
    }
    if let Some(v) = seen.iter().position(|s| !s) {
        return Err(Error::Grammar(format!(
            "x{} belongs to no component",
            v + 1
        )));
    }
    components.sort_by_key(|c| c.vars.iter().copied().min().unwrap());
    Ok(AtomicDecomposition { components })
}

pub fn mirror(e: &ExponentMatrix) -> ExponentMatrix {
    e.transpose()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Naming {
    Indexed,
    Letters,
}

/// Parses `x1^2*x2 + x2^4`-style text (or `x`, `y`, `z` for up to three variables).
pub fn parse_polynomial(text: &str) -> Result<ExponentMatrix> {
    let bytes = text.as_bytes();
    let mut pos = 0usize;
    let mut naming: Option<Naming> = None;
    let mut monomials: Vec<Vec<(usize, u32)>> = Vec::new();

    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };
    let read_uint = |pos: &mut usize| -> Option<u64> {
        let start = *pos;
        while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
            *pos += 1;
        }
        if start == *pos {
            None
        } else {
            text[start..*pos].parse().ok()
        }
    };
    let syntax = |pos: usize, msg: &str| Error::Syntax {
        pos,
        msg: msg.to_string(),
    };

    loop {
        let mut term: Vec<(usize, u32)> = Vec::new();
        loop {
            skip_ws(&mut pos);
            if pos >= bytes.len() {
                return Err(syntax(pos, "expected a variable"));
            }
            let c = bytes[pos];
            if c.is_ascii_digit() {
                let at = pos;
                let coeff = read_uint(&mut pos).ok_or_else(|| syntax(at, "bad integer"))?;
                if coeff != 1 {
                    return Err(Error::Coefficient(coeff.to_string()));
                }
            } else if c == b'x' || c == b'y' || c == b'z' {
                pos += 1;
                let at = pos;
                let (idx, style) = match read_uint(&mut pos) {
                    Some(i) if c == b'x' => {
                        if i == 0 {
                            return Err(syntax(at, "variable indices start at 1"));
                        }
                        (i as usize - 1, Naming::Indexed)
                    }
                    Some(_) => return Err(syntax(at, "only x takes an index")),
                    None => ((c - b'x') as usize, Naming::Letters),
                };
                match naming {
                    None => naming = Some(style),
                    Some(s) if s != style => {
                        return Err(syntax(at, "mixed x1-style and x/y/z-style variable names"))
                    }
                    _ => {}
                }
                skip_ws(&mut pos);
                let mut exp = 1u32;
                if pos < bytes.len() && bytes[pos] == b'^' {
                    pos += 1;
                    skip_ws(&mut pos);
                    let at = pos;
                    exp = read_uint(&mut pos)
                        .and_then(|e| u32::try_from(e).ok())
                        .ok_or_else(|| syntax(at, "expected an exponent"))?;
                }
                match term.iter_mut().find(|(v, _)| *v == idx) {
                    Some(entry) => entry.1 += exp,
                    None => term.push((idx, exp)),
                }
            } else {
                return Err(syntax(pos, "expected a variable"));
            }
            skip_ws(&mut pos);
            if pos < bytes.len() && bytes[pos] == b'*' {
                pos += 1;
                continue;
            }
            break;
        }
        term.retain(|&(_, e)| e > 0);
        if term.is_empty() {
            return Err(syntax(pos, "constant monomial"));
        }
        monomials.push(term);
        skip_ws(&mut pos);
        if pos >= bytes.len() {
            break;
        }
        if bytes[pos] == b'+' {
            pos += 1;
            continue;
        }
        return Err(syntax(pos, "expected '+' or end of input"));
    }

    let mut vars: Vec<usize> = monomials.iter().flatten().map(|&(v, _)| v).collect();
    vars.sort_unstable();
    vars.dedup();
    let n = vars.len();
    if monomials.len() != n {
        return Err(Error::Shape {
            monomials: monomials.len(),
            variables: n,
        });
    }
    if vars.iter().enumerate().any(|(i, &v)| i != v) {
        return Err(Error::Invalid(format!(
            "variables must be numbered consecutively from 1; found {}",
            vars.iter()
                .map(|v| format!("x{}", v + 1))
                .collect::<Vec<_>>()
                .join(",")
        )));
    }

    let mut rows: Vec<Option<Vec<u32>>> = vec![None; n];
    for term in &monomials {
        let owner = match term.as_slice() {
            [(v, e)] => {
                if *e < 2 {
                    return Err(Error::Diagonal {
                        var: v + 1,
                        entry: *e,
                    });
                }
                *v
            }
            [(v1, e1), (v2, e2)] => match (*e1 >= 2, *e2 >= 2) {
                (true, false) if *e2 == 1 => *v1,
                (false, true) if *e1 == 1 => *v2,
                (false, false) => {
                    return Err(Error::Diagonal {
                        var: v1 + 1,
                        entry: *e1,
                    })
                }
                _ => {
                    return Err(Error::Grammar(format!(
                        "monomial in x{} and x{} has two exponents >= 2",
                        v1 + 1,
                        v2 + 1
                    )))
                }
            },
            _ => {
                return Err(Error::Grammar(
                    "a monomial has more than two variables".into(),
                ))
            }
        };
        if rows[owner].is_some() {
            return Err(Error::Grammar(format!("x{} owns two monomials", owner + 1)));
        }
        let mut row = vec![0u32; n];
        for &(v, e) in term {
            row[v] = e;
        }
        rows[owner] = Some(row);
    }
    let rows = rows
        .into_iter()
        .enumerate()
        .map(|(j, r)| r.ok_or_else(|| Error::Grammar(format!("x{} owns no monomial", j + 1))))
        .collect::<Result<Vec<_>>>()?;
    ExponentMatrix::new(rows)
}

/// A validated invertible polynomial together with its derived data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvertiblePolynomial {
    matrix: ExponentMatrix,
    weights: WeightSystem,
    graph: PolyGraph,
    decomposition: AtomicDecomposition,
}

impl InvertiblePolynomial {
    pub fn parse(text: &str) -> Result<Self> {
        Self::from_matrix(parse_polynomial(text)?)
    }

    pub fn from_rows(rows: Vec<Vec<u32>>) -> Result<Self> {
        Self::from_matrix(ExponentMatrix::new(rows)?)
    }

    pub fn from_matrix(matrix: ExponentMatrix) -> Result<Self> {
        let weights = weight_system(&matrix)?;
        let graph = PolyGraph::from_matrix(&matrix)?;
        let decomposition = decompose(&matrix)?;
        Ok(InvertiblePolynomial {
            matrix,
            weights,
            graph,
            decomposition,
        })
    }

    pub fn n(&self) -> usize {
        self.matrix.n()
    }

    pub fn matrix(&self) -> &ExponentMatrix {
        &self.matrix
    }

    pub fn weights(&self) -> &WeightSystem {
        &self.weights
    }

    pub fn graph(&self) -> &PolyGraph {
        &self.graph
    }

    pub fn decomposition(&self) -> &AtomicDecomposition {
        &self.decomposition
    }

    pub fn degree(&self) -> u64 {
        self.weights.degree
    }

    pub fn weight(&self, j: usize) -> u64 {
        self.weights.weights[j]
    }

    pub fn charge(&self, j: usize) -> Frac {
        self.weights.charges[j]
    }

    pub fn a(&self, j: usize) -> u32 {
        self.graph.a[j]
    }

    pub fn target(&self, j: usize) -> usize {
        self.graph.target[j]
    }

    pub fn source(&self, j: usize) -> Option<usize> {
        self.graph.source[j]
    }

    pub fn is_calabi_yau(&self) -> bool {
        self.weights.weights.iter().sum::<u64>() == self.weights.degree
    }

    /// ĉ = Σ (1 − 2 q_j).
    pub fn central_charge(&self) -> Frac {
        self.weights
            .charges
            .iter()
            .map(|q| Frac::from_integer(1) - q * 2)
            .sum()
    }

    pub fn mirror(&self) -> Result<Self> {
        Self::from_matrix(self.matrix.transpose())
    }

    /// True for x1^a1 x2 + x2^a2 x3 + ... + xN^(aN+1), including a single Fermat.
    pub fn is_ordered_chain(&self) -> bool {
        let n = self.n();
        (0..n).all(|j| self.target(j) == if j + 1 < n { j + 1 } else { j })
    }

    pub fn require_chain(&self) -> Result<()> {
        if self.is_ordered_chain() {
            Ok(())
        } else {
            Err(Error::NotChain(self.matrix.to_string()))
        }
    }

    /// Monomials x^a y + y^2 or x^a y + y^2 x, which the broad-sector comparison excludes.
    pub fn excluded_shape(&self) -> Option<String> {
        for c in &self.decomposition.components {
            match c.kind {
                AtomicKind::Chain if *c.exps.last().unwrap() == 1 => {
                    let y = *c.vars.last().unwrap();
                    return Some(format!("chain tail x{}^2", y + 1));
                }
                AtomicKind::Loop if c.vars.len() == 2 && c.exps.contains(&2) => {
                    return Some(format!(
                        "two-variable loop in x{}, x{} with an exponent 2",
                        c.vars[0] + 1,
                        c.vars[1] + 1
                    ));
                }
                _ => {}
            }
        }
        None
    }
}

impl fmt::Display for InvertiblePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.matrix.fmt(f)
    }
}
