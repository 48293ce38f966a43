//! Mustafin-variety models of plane curves over a discretely valued ring.
//!
//! The ring `R` is modelled as `k[t]` localized along `t`: polynomials carry explicit
//! `t`-dependence and saturation by `t` plays the role of contraction to `R`.

pub mod cli;
pub mod error;
pub mod fermat;
pub mod geometry;
pub mod ideal;
pub mod monomial;
pub mod order;
pub mod parse;
pub mod poly;
pub mod ring;
pub mod scalar;
pub mod syzygy;

pub use error::{Error, Result};
pub use ideal::{IdealHandle, SyzygyBasis};
pub use monomial::Monomial;
pub use order::{InnerOrder, MonomialOrder};
pub use parse::{format_polynomial, parse_polynomial};
pub use poly::{minors_2x2, MultiDegree, Polynomial, Substitution, TScaled};
pub use ring::{Ring, RingRef, VariableBlock};
pub use scalar::{CoeffField, Scalar};
