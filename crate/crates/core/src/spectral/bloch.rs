use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hopping::HoppingField;
use crate::lattice::{Direction, LatticeSpec};

use super::hamiltonian::eigh;

/// Band energies at one crystal momentum of the 2×2×2 superlattice.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BandPoint {
    /// Integer labels `m`, with `k_i = 2π m_i / L_i`.
    pub m: [usize; 3],
    pub k: [f64; 3],
    /// Eight energies, ascending.
    pub energies: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlochSpectrum {
    pub cell: [usize; 3],
    pub points: Vec<BandPoint>,
}

impl BlochSpectrum {
    /// Union of all bands, ascending. Has exactly `volume` entries.
    pub fn all_energies(&self) -> Vec<f64> {
        let mut e: Vec<f64> = self.points.iter().flat_map(|p| p.energies.iter().copied()).collect();
        e.sort_by(f64::total_cmp);
        e
    }

    pub fn min_abs_energy(&self) -> f64 {
        self.points
            .iter()
            .flat_map(|p| p.energies.iter())
            .map(|e| e.abs())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn point(&self, m: [usize; 3]) -> Option<&BandPoint> {
        self.points.iter().find(|p| p.m == m)
    }
}

fn cell_index(c: [usize; 3]) -> usize {
    c[0] + 2 * c[1] + 4 * c[2]
}

/// The 8×8 block `H_k[a][b] = Σ_{n: a+n ≡ b} κ(a,n) e^{ik·n} + δ_ab κ₀(a)`
/// for a 2-periodic field, with `a, b` running over the sites of the unit cell.
pub fn bloch_block(field: &HoppingField, k: [f64; 3]) -> Result<DMatrix<C64>> {
    if !field.is_two_periodic() {
        return Err(Error::pre(
            "Bloch reduction needs a field invariant under translations by two sites",
        ));
    }
    Ok(block_unchecked(field, k))
}

fn block_unchecked(field: &HoppingField, k: [f64; 3]) -> DMatrix<C64> {
    let lattice = field.lattice();
    let mut m = DMatrix::zeros(8, 8);
    for a in 0..8 {
        let ac = [a & 1, (a >> 1) & 1, (a >> 2) & 1];
        let site = lattice.site([ac[0] as i64, ac[1] as i64, ac[2] as i64]);
        m[(a, a)] += field.onsite(site);
        for n in Direction::LINKS {
            let v = n.vector();
            let bc = [0, 1, 2].map(|i| (ac[i] as i64 + v[i]).rem_euclid(2) as usize);
            let phase = C64::from_polar(1.0, k[0] * v[0] as f64 + k[1] * v[1] as f64 + k[2] * v[2] as f64);
            m[(a, cell_index(bc))] += field.amp(site, n) * phase;
        }
    }
    m
}

fn reduced_zone(lattice: &LatticeSpec) -> Vec<[usize; 3]> {
    let [hx, hy, hz] = lattice.dims().map(|l| l / 2);
    let mut out = Vec::with_capacity(hx * hy * hz);
    for mz in 0..hz {
        for my in 0..hy {
            for mx in 0..hx {
                out.push([mx, my, mz]);
            }
        }
    }
    out
}

/// Diagonalizes the 8×8 cell block at every momentum `k_i = 2π m_i / L_i`,
/// `0 ≤ m_i < L_i / 2`. The union of the bands is the full spectrum.
pub fn bloch_bands(field: &HoppingField) -> Result<BlochSpectrum> {
    if !field.is_two_periodic() {
        return Err(Error::pre(
            "Bloch reduction needs a field invariant under translations by two sites",
        ));
    }
    let dims = field.lattice().dims();
    let points = reduced_zone(field.lattice())
        .into_par_iter()
        .map(|m| {
            let k = [0, 1, 2].map(|i| 2.0 * PI * m[i] as f64 / dims[i] as f64);
            let energies = eigh(block_unchecked(field, k)).values;
            BandPoint { m, k, energies }
        })
        .collect();
    Ok(BlochSpectrum {
        cell: [2, 2, 2],
        points,
    })
}
