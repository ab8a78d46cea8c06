//! Exact commutative algebra for Chow-type ideals of cycles in affine space.

pub mod cache;
pub mod certificates;
pub mod chow;
pub mod cli;
pub mod cycles;
pub mod decompose;
pub mod error;
pub mod factor;
pub mod field;
pub mod fixtures;
pub mod groebner;
pub mod hilbert;
pub mod ideal;
pub mod intclosure;
pub mod linalg;
pub mod loja;
pub mod lp;
pub mod mfactor;
pub mod monomial;
pub mod parse;
pub mod poly;
pub mod scene;

pub use error::{AlgebraError, Result};
pub use field::{Field, FieldElement};
pub use monomial::{Monomial, MonomialOrder};
pub use parse::{parse_polynomial, parse_polynomial_list};
pub use poly::{Polynomial, Ring, RingRef};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/polynomials.md")]
    mod polynomials {}
    #[doc = include_str!("../../../book/src/cycles.md")]
    mod cycles {}
    #[doc = include_str!("../../../book/src/chow.md")]
    mod chow {}
    #[doc = include_str!("../../../book/src/intclosure.md")]
    mod intclosure {}
    #[doc = include_str!("../../../book/src/certificates.md")]
    mod certificates {}
    #[doc = include_str!("../../../book/src/loja.md")]
    mod loja {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
