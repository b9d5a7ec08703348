//! Exact genus-zero computations for Landau–Ginzburg orbifolds of invertible
//! polynomials: symmetry groups, state spaces, virtual classes via λ-limits, and the
//! I- and J-functions of chain polynomials.

pub mod charclass;
pub mod eps;
pub mod error;
pub mod givental;
pub mod poly;
pub mod rational;
pub mod ring;
pub mod series;
pub mod smith;
pub mod spincomb;
pub mod statespace;
pub mod symmetry;

pub use charclass::{correlator3, limit_class, ChernSymbolPoly};
pub use eps::{Algebra, EpsSeries};
pub use error::{Error, Result};
pub use givental::{
    big_i, extract_correlators, m_product, pf_check, small_i, twisted_i_oracle, CorrelatorTarget,
    MProduct, PicardFuchsOperator, ZSeries,
};
pub use poly::{AtomicKind, ExponentMatrix, InvertiblePolynomial, WeightSystem};
pub use rational::{Frac, Q};
pub use ring::Coeff;
pub use series::ParamSeries;
pub use spincomb::{IFunctionNumerics, SpinNumerics};
pub use statespace::{BasisState, Decoration, StateVector};
pub use symmetry::{DiagonalSymmetry, SymmetryGroup};
