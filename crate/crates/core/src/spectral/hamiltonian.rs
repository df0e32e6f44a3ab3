use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::hopping::HoppingField;
use crate::lattice::{Direction, LatticeSpec};
use crate::EXACT_TOL;

use super::WaveFunction;

/// Largest matrix handled by dense diagonalization.
pub const DENSE_LIMIT: usize = 8192;

/// Sparse hermitian operator `(Hψ)(s) = Σ_n κ(s,n) ψ(s+n) + κ₀(s) ψ(s)`,
/// stored row-compressed with sorted columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian {
    lattice: LatticeSpec,
    row_start: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<C64>,
}

impl Hamiltonian {
    pub fn dim(&self) -> usize {
        self.lattice.volume()
    }

    pub fn lattice(&self) -> &LatticeSpec {
        &self.lattice
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, C64)> + '_ {
        let r = self.row_start[i]..self.row_start[i + 1];
        self.cols[r.clone()].iter().copied().zip(self.vals[r].iter().copied())
    }

    pub fn max_row_len(&self) -> usize {
        self.row_start.windows(2).map(|w| w[1] - w[0]).max().unwrap_or(0)
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        let r = self.row_start[i]..self.row_start[i + 1];
        match self.cols[r.clone()].binary_search(&j) {
            Ok(pos) => self.vals[r.start + pos],
            Err(_) => C64::new(0.0, 0.0),
        }
    }

    pub fn apply_slice(&self, psi: &[C64]) -> Vec<C64> {
        (0..self.dim())
            .map(|i| self.row(i).map(|(j, v)| v * psi[j]).sum())
            .collect()
    }

    pub fn apply(&self, psi: &WaveFunction) -> WaveFunction {
        WaveFunction::from_parts(self.lattice, self.apply_slice(psi.amplitudes()))
    }

    /// `⟨ψ|H|ψ⟩` (not normalized).
    pub fn expectation(&self, psi: &WaveFunction) -> f64 {
        psi.inner(&self.apply(psi)).re
    }

    /// Largest `|H_ij - conj H_ji|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim() {
            for (j, v) in self.row(i) {
                worst = worst.max((v - self.entry(j, i).conj()).norm());
            }
        }
        worst
    }

    /// Gershgorin bound on the spectral radius.
    pub fn spectral_bound(&self) -> f64 {
        (0..self.dim())
            .map(|i| self.row(i).map(|(_, v)| v.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            for (j, v) in self.row(i) {
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        (0..self.dim()).flat_map(move |i| self.row(i).map(move |(j, v)| (i, j, v)))
    }
}

/// Assembles `H[s][s+n] += κ(s,n)` and `H[s][s] += κ₀(s)`. Links that land on
/// the same neighbour (sides of length 2) add up.
pub fn build_hamiltonian(k: &HoppingField) -> Result<Hamiltonian> {
    if !k.check_hermiticity() {
        return Err(Error::pre(format!(
            "hopping field is not hermitian (defect {:.3e})",
            k.hermiticity_defect()
        )));
    }
    let lattice = *k.lattice();
    let n = lattice.volume();
    let mut row_start = Vec::with_capacity(n + 1);
    let mut cols = Vec::with_capacity(7 * n);
    let mut vals = Vec::with_capacity(7 * n);
    row_start.push(0);
    let mut row: Vec<(usize, C64)> = Vec::with_capacity(7);
    for i in 0..n {
        row.clear();
        let s = lattice.site_at(i);
        row.push((i, k.onsite(s)));
        for dir in Direction::LINKS {
            row.push((lattice.step_index(i, dir), k.amp_at(i, dir)));
        }
        row.sort_by_key(|e| e.0);
        let mut last: Option<usize> = None;
        for &(j, v) in &row {
            if last == Some(j) {
                *vals.last_mut().unwrap() += v;
            } else {
                cols.push(j);
                vals.push(v);
                last = Some(j);
            }
        }
        row_start.push(cols.len());
    }
    let h = Hamiltonian {
        lattice,
        row_start,
        cols,
        vals,
    };
    let defect = h.hermiticity_defect();
    if defect > EXACT_TOL {
        return Err(Error::numerical(
            "hamiltonian hermiticity",
            format!("max |H - H†| = {defect:.3e}"),
        ));
    }
    Ok(h)
}

/// Eigenvalues ascending with matching eigenvector columns.
#[derive(Debug, Clone)]
pub struct Eigensystem {
    pub values: Vec<f64>,
    pub vectors: DMatrix<C64>,
}

pub(crate) fn eigh(m: DMatrix<C64>) -> Eigensystem {
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(eig.eigenvectors.nrows(), order.len(), |r, c| {
        eig.eigenvectors[(r, order[c])]
    });
    Eigensystem { values, vectors }
}

pub(crate) fn require_dense(n: usize) -> Result<()> {
    if n > DENSE_LIMIT {
        Err(Error::pre(format!(
            "dense diagonalization is capped at N = {DENSE_LIMIT}, got N = {n}; use the Bloch or Chebyshev path"
        )))
    } else {
        Ok(())
    }
}

pub fn eigensystem(h: &Hamiltonian) -> Result<Eigensystem> {
    require_dense(h.dim())?;
    Ok(eigh(h.to_dense()))
}

/// All eigenvalues, ascending.
pub fn spectrum_dense(h: &Hamiltonian) -> Result<Vec<f64>> {
    Ok(eigensystem(h)?.values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_two_cubed_spectrum() {
        let l = LatticeSpec::cubic(2).unwrap();
        let h = build_hamiltonian(&HoppingField::scalar(l)).unwrap();
        // both links to the single x-neighbour add up
        assert_eq!(h.entry(0, 1), C64::new(2.0, 0.0));
        let e = spectrum_dense(&h).unwrap();
        let expected = [-6.0, -2.0, -2.0, -2.0, 2.0, 2.0, 2.0, 6.0];
        for (a, b) in e.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12, "{e:?}");
        }
    }

    #[test]
    fn staggered_two_cubed_is_symmetric() {
        let l = LatticeSpec::cubic(2).unwrap();
        let e = spectrum_dense(&build_hamiltonian(&HoppingField::staggered(l).unwrap()).unwrap()).unwrap();
        for (a, b) in e.iter().zip(e.iter().rev()) {
            assert!((a + b).abs() < 1e-12);
        }
    }

    #[test]
    fn onsite_constant_shifts_spectrum() {
        let l = LatticeSpec::cubic(4).unwrap();
        let k = HoppingField::staggered(l).unwrap();
        let base = spectrum_dense(&build_hamiltonian(&k).unwrap()).unwrap();
        let shifted = k.with_onsite(|_| C64::new(0.75, 0.0));
        let moved = spectrum_dense(&build_hamiltonian(&shifted).unwrap()).unwrap();
        for (a, b) in base.iter().zip(&moved) {
            assert!((a + 0.75 - b).abs() < 1e-12);
        }
    }

    #[test]
    fn non_hermitian_field_rejected() {
        let l = LatticeSpec::cubic(4).unwrap();
        let mut k = HoppingField::scalar(l);
        k.set_amp(l.origin(), Direction::PlusX, C64::new(0.0, 1.0));
        assert!(matches!(build_hamiltonian(&k), Err(Error::Precondition(_))));
    }

    #[test]
    fn sparsity_and_bound() {
        let l = LatticeSpec::cubic(4).unwrap();
        let h = build_hamiltonian(&HoppingField::staggered(l).unwrap().add_susskind_mass(0.5).unwrap()).unwrap();
        assert!(h.max_row_len() <= 7);
        assert!((h.spectral_bound() - 6.5).abs() < 1e-12);
    }

    #[test]
    fn dense_cap_enforced() {
        assert!(require_dense(DENSE_LIMIT).is_ok());
        assert!(require_dense(DENSE_LIMIT + 1).is_err());
    }
}
