use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::LatticeSpec;

use super::fft::{fft3, in_reduced_zone};
use super::matrix::SpinMatrix;
use super::sectors::{ComponentFields, SectorCount};

/// Mass contribution to the component operator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "mu", rename_all = "lowercase")]
pub enum MassTerm {
    None,
    /// On-site `μ(-1)^(x+y+z)`; needs eight sectors.
    Susskind(f64),
    /// Alternating `iμ(-1)^x` on the x links; needs four sectors.
    Alternating(f64),
}

impl MassTerm {
    pub fn mu(self) -> f64 {
        match self {
            MassTerm::None => 0.0,
            MassTerm::Susskind(mu) | MassTerm::Alternating(mu) => mu,
        }
    }
}

/// Spatial operator multiplying a matrix factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stencil {
    /// `i(f(·+e) - f(·-e))` along an axis; symbol `-2 sin k`.
    CentralDiff(usize),
    /// `f(·+e) + f(·-e)` along an axis; symbol `2 cos k`.
    Sum(usize),
    Identity,
}

impl Stencil {
    pub fn symbol(self, k: [f64; 3]) -> f64 {
        match self {
            Stencil::CentralDiff(a) => -2.0 * k[a].sin(),
            Stencil::Sum(a) => 2.0 * k[a].cos(),
            Stencil::Identity => 1.0,
        }
    }

    /// Symbol of the continuum counterpart: `-2k` for the difference, `2` for the sum.
    pub fn continuum_symbol(self, k: [f64; 3]) -> f64 {
        match self {
            Stencil::CentralDiff(a) => -2.0 * k[a],
            Stencil::Sum(_) => 2.0,
            Stencil::Identity => 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiracTerm {
    pub matrix: SpinMatrix,
    pub coefficient: f64,
    pub stencil: Stencil,
}

/// `D = Σ_terms coefficient · matrix ⊗ stencil`, acting on component fields.
#[derive(Debug, Clone, PartialEq)]
pub struct DiracOperator {
    sectors: SectorCount,
    mass: MassTerm,
    terms: Vec<DiracTerm>,
}

fn sigma(k: usize) -> SpinMatrix {
    SpinMatrix::pauli(k)
}

/// Builds the component operator matching the Dirac-gauge field:
///
/// * four sectors: `σ3⊗1·iΔx + σ1⊗σ3·iΔy + σ1⊗σ1·iΔz`, plus `μσ2⊗1·Σx` for
///   the alternating mass, where `Σx f = f(x+1) + f(x-1)`;
/// * eight sectors: `σ3⊗1⊗1·iΔx + σ1⊗σ3⊗1·iΔy + σ1⊗σ1⊗σ3·iΔz`, plus
///   `μσ1⊗σ1⊗σ1` for the Susskind mass.
pub fn assemble_dirac(sectors: SectorCount, mass: MassTerm) -> Result<DiracOperator> {
    let one = SpinMatrix::identity(2);
    let diff = |m: SpinMatrix, axis| DiracTerm {
        matrix: m,
        coefficient: 1.0,
        stencil: Stencil::CentralDiff(axis),
    };
    let mut terms = match sectors {
        SectorCount::Four => vec![
            diff(SpinMatrix::kron_all(&[sigma(3), one.clone()]), 0),
            diff(SpinMatrix::kron_all(&[sigma(1), sigma(3)]), 1),
            diff(SpinMatrix::kron_all(&[sigma(1), sigma(1)]), 2),
        ],
        SectorCount::Eight => vec![
            diff(SpinMatrix::kron_all(&[sigma(3), one.clone(), one.clone()]), 0),
            diff(SpinMatrix::kron_all(&[sigma(1), sigma(3), one.clone()]), 1),
            diff(SpinMatrix::kron_all(&[sigma(1), sigma(1), sigma(3)]), 2),
        ],
    };
    match (sectors, mass) {
        (_, MassTerm::None) => {}
        (SectorCount::Four, MassTerm::Alternating(mu)) => terms.push(DiracTerm {
            matrix: SpinMatrix::kron_all(&[sigma(2), one]),
            coefficient: mu,
            stencil: Stencil::Sum(0),
        }),
        (SectorCount::Eight, MassTerm::Susskind(mu)) => terms.push(DiracTerm {
            matrix: SpinMatrix::kron_all(&[sigma(1), sigma(1), sigma(1)]),
            coefficient: mu,
            stencil: Stencil::Identity,
        }),
        (SectorCount::Four, MassTerm::Susskind(_)) => {
            return Err(Error::pre("the Susskind mass needs eight sectors"))
        }
        (SectorCount::Eight, MassTerm::Alternating(_)) => {
            return Err(Error::pre("the alternating mass needs four sectors"))
        }
    }
    Ok(DiracOperator { sectors, mass, terms })
}

impl DiracOperator {
    pub fn sectors(&self) -> SectorCount {
        self.sectors
    }

    pub fn mass(&self) -> MassTerm {
        self.mass
    }

    pub fn terms(&self) -> &[DiracTerm] {
        &self.terms
    }

    /// Matrix factors of the three difference terms.
    pub fn alphas(&self) -> [SpinMatrix; 3] {
        [0, 1, 2].map(|i| self.terms[i].matrix.clone())
    }

    /// Matrix factor of the mass term, if any.
    pub fn beta(&self) -> Option<SpinMatrix> {
        self.terms.get(3).map(|t| t.matrix.clone())
    }

    /// Momentum-space matrix `Σ coefficient · matrix · symbol(k)`.
    pub fn symbol(&self, k: [f64; 3]) -> DMatrix<C64> {
        self.symbol_with(|s| s.symbol(k))
    }

    /// Same with every stencil replaced by its continuum symbol.
    pub fn continuum_symbol(&self, k: [f64; 3]) -> DMatrix<C64> {
        self.symbol_with(|s| s.continuum_symbol(k))
    }

    fn symbol_with(&self, f: impl Fn(Stencil) -> f64) -> DMatrix<C64> {
        let d = self.sectors.count();
        let mut m = DMatrix::zeros(d, d);
        for t in &self.terms {
            m += t.matrix.to_complex() * C64::new(t.coefficient * f(t.stencil), 0.0);
        }
        m
    }

    /// Applies `D` to component fields, mode by mode in momentum space.
    pub fn apply(&self, c: &ComponentFields) -> Result<ComponentFields> {
        if c.sectors() != self.sectors {
            return Err(Error::pre(format!(
                "operator acts on {} sectors, fields have {}",
                self.sectors.count(),
                c.sectors().count()
            )));
        }
        let lattice = *c.lattice();
        let d = self.sectors.count();
        let spectra: Vec<Vec<C64>> = c
            .fields()
            .iter()
            .map(|f| {
                let mut v = f.clone();
                fft3(&lattice, &mut v, false);
                v
            })
            .collect();
        let mut out = vec![vec![C64::new(0.0, 0.0); lattice.volume()]; d];
        for i in 0..lattice.volume() {
            let m = self.symbol(momentum(&lattice, i));
            for a in 0..d {
                out[a][i] = (0..d).map(|b| m[(a, b)] * spectra[b][i]).sum();
            }
        }
        for f in &mut out {
            fft3(&lattice, f, true);
        }
        ComponentFields::new(self.sectors, lattice, out)
    }

    /// Eigenvalues of the symbol over every band-limited momentum of the
    /// lattice, ascending. Reproduces the spectrum of the matching field.
    pub fn spectrum(&self, lattice: &LatticeSpec) -> Result<Vec<f64>> {
        lattice.require_even("the component spectrum")?;
        let dims = lattice.dims();
        let split = self.sectors.split_axes();
        let mut e = Vec::with_capacity(lattice.volume());
        for i in 0..lattice.volume() {
            let m = lattice.site_at(i).coords();
            if (0..split).all(|ax| in_reduced_zone(m[ax], dims[ax])) {
                e.extend(crate::spectral::eigh(self.symbol(momentum(lattice, i))).values);
            }
        }
        e.sort_by(f64::total_cmp);
        Ok(e)
    }
}

/// Momentum of FFT bin `i`, each component in `[0, 2π)`.
pub(crate) fn momentum(lattice: &LatticeSpec, i: usize) -> [f64; 3] {
    let dims = lattice.dims();
    let m = lattice.site_at(i).coords();
    [0, 1, 2].map(|ax| 2.0 * PI * m[ax] as f64 / dims[ax] as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_algebra(op: &DiracOperator) {
        let d = op.sectors().count();
        let id = SpinMatrix::identity(d);
        let alphas = op.alphas();
        for i in 0..3 {
            assert!(alphas[i].is_hermitian());
            for j in 0..3 {
                let expect = if i == j { id.scaled(2) } else { SpinMatrix::zeros(d) };
                assert_eq!(alphas[i].anticommutator(&alphas[j]), expect);
            }
        }
        if let Some(beta) = op.beta() {
            assert_eq!(&beta * &beta, id);
            for a in &alphas {
                assert_eq!(a.anticommutator(&beta), SpinMatrix::zeros(d));
            }
        }
    }

    #[test]
    fn algebra_holds_for_every_mass() {
        check_algebra(&assemble_dirac(SectorCount::Four, MassTerm::None).unwrap());
        check_algebra(&assemble_dirac(SectorCount::Four, MassTerm::Alternating(0.3)).unwrap());
        check_algebra(&assemble_dirac(SectorCount::Eight, MassTerm::Susskind(1.0)).unwrap());
        check_algebra(&assemble_dirac(SectorCount::Eight, MassTerm::None).unwrap());
    }

    #[test]
    fn mismatched_mass_rejected() {
        assert!(assemble_dirac(SectorCount::Four, MassTerm::Susskind(1.0)).is_err());
        assert!(assemble_dirac(SectorCount::Eight, MassTerm::Alternating(1.0)).is_err());
    }

    #[test]
    fn alternating_beta_is_sigma2() {
        let op = assemble_dirac(SectorCount::Four, MassTerm::Alternating(0.3)).unwrap();
        assert_eq!(
            op.beta().unwrap(),
            SpinMatrix::pauli(2).kron(&SpinMatrix::identity(2))
        );
    }

    #[test]
    fn zero_susskind_mass_doubles_massless_blocks() {
        let massless = assemble_dirac(SectorCount::Four, MassTerm::None).unwrap();
        let zero = assemble_dirac(SectorCount::Eight, MassTerm::Susskind(0.0)).unwrap();
        let k = [0.3, -0.7, 1.1];
        let mut a: Vec<f64> = crate::spectral::eigh(massless.symbol(k)).values;
        a.extend(a.clone());
        a.sort_by(f64::total_cmp);
        let b = crate::spectral::eigh(zero.symbol(k)).values;
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn symbol_is_hermitian_with_dirac_dispersion() {
        let op = assemble_dirac(SectorCount::Eight, MassTerm::Susskind(0.6)).unwrap();
        let k = [0.2, 1.3, -0.4];
        let m = op.symbol(k);
        assert!((&m - m.adjoint()).norm() < 1e-14);
        let e2 = 4.0 * k.iter().map(|v| v.sin().powi(2)).sum::<f64>() + 0.36;
        for e in crate::spectral::eigh(m).values {
            assert!((e * e - e2).abs() < 1e-12);
        }
    }
}
