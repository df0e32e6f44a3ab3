pub mod error;
pub mod hopping;
pub mod lattice;
pub mod solver;
pub mod spectral;
pub mod spinor;

pub use error::{Error, Result};

pub const EXACT_TOL: f64 = 1e-12;
pub const EQUIV_TOL: f64 = 1e-10;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/lattice.md")]
    mod lattice {}
    #[doc = include_str!("../../../book/src/hopping.md")]
    mod hopping {}
    #[doc = include_str!("../../../book/src/symmetry.md")]
    mod symmetry {}
    #[doc = include_str!("../../../book/src/spectral.md")]
    mod spectral {}
    #[doc = include_str!("../../../book/src/spinor.md")]
    mod spinor {}
}
