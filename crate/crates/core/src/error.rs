use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("non-unit coefficient {0}; monomial coefficients must be 1 or omitted")]
    Coefficient(String),
    #[error("{monomials} monomials for {variables} variables; an invertible polynomial has as many monomials as variables")]
    Shape { monomials: usize, variables: usize },
    #[error("exponent matrix is singular, so the weights are not uniquely defined")]
    Singular,
    #[error("diagonal entry {entry} for x{var} is below 2")]
    Diagonal { var: usize, entry: u32 },
    #[error("structure outside the Fermat/chain/loop grammar: {0}")]
    Grammar(String),
    #[error(
        "non-positive charge {0}; the polynomial is not quasi-homogeneous with positive weights"
    )]
    NotQuasiHomogeneous(String),
    #[error("{0} is not a diagonal symmetry of W (E.Gamma is not integral)")]
    Membership(String),
    #[error("group of order {order} exceeds the enumeration cap {cap}")]
    EnumerationCap { order: u64, cap: u64 },
    #[error(
        "selection rule violated: product of the insertions is {found}, expected j^{expected}"
    )]
    Selection { found: String, expected: i64 },
    #[error("no concave variable in the component containing x{0}; the limit formula needs one per component")]
    NoConcave(usize),
    #[error("negative epsilon valuation {valuation} in degree {degree}: the input violates polynomiality of the limit class")]
    NegativeValuation { degree: usize, valuation: i64 },
    #[error("virtual degree {0} is negative; the three-point limit is undefined")]
    NegativeDegvir(i64),
    #[error("state {0} is unbalanced and represents zero; it has no dual")]
    Unbalanced(String),
    #[error("operation requires a chain polynomial x1^a1*x2 + ... + xN^(aN+1): {0}")]
    NotChain(String),
    #[error("polynomial contains an excluded monomial shape (x^a*y + y^2 or x^a*y + y^2*x): {0}")]
    Excluded(String),
    #[error("unexpected power z^{0} in the I-function")]
    ZPower(i64),
    #[error("{0}")]
    Extraction(String),
    #[error("x = 1 is a pole of s_l")]
    Pole,
    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),
    #[error("invalid input: {0}")]
    Invalid(String),
}
