//! Hamiltonians, spectra, Bloch bands and unitary time evolution.

mod bloch;
mod evolve;
mod hamiltonian;
mod packet;
mod wave;

pub use bloch::{bloch_bands, bloch_block, BandPoint, BlochSpectrum};
pub use evolve::{bessel_j_sequence, chebyshev_evolve, evolve, ExactPropagator, Method};
pub use hamiltonian::{build_hamiltonian, eigensystem, spectrum_dense, Eigensystem, Hamiltonian, DENSE_LIMIT};
pub use packet::{
    centroid, displacement, gaussian_packet, packet_displacement, rms_width, staticity_ratio, trajectory,
    StaticityReport, TrajectoryPoint,
};
pub use wave::{WaveDocument, WaveFunction};

pub(crate) use hamiltonian::eigh;
