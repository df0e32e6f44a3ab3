//! Component fields of the staggered wave function and the Dirac operator
//! acting on them.
//!
//! A wave function on an even torus splits exactly into band-limited pieces,
//! one per corner of the halved Brillouin zone. Boundary momenta `k = π/2`
//! go to the lower sector and `k = -π/2` to the upper one.

mod checks;
mod dirac;
mod fft;
mod matrix;
mod sectors;

pub use checks::{apply_parity, continuum_error, continuum_error_ratio, parity_check, verify_equivalence};
pub use dirac::{assemble_dirac, DiracOperator, DiracTerm, MassTerm, Stencil};
pub use matrix::SpinMatrix;
pub use sectors::{project_components, recompose, ComponentFields, SectorCount, LEAKAGE_TOL};
