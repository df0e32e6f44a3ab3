use std::fmt;
use std::ops::{Add, Mul};

use nalgebra::DMatrix;
use num_complex::{Complex, Complex64 as C64};

type Zi = Complex<i32>;

/// Small square matrix over the Gaussian integers, so algebraic identities
/// between Pauli products can be checked with `==`.
#[derive(Clone, PartialEq, Eq)]
pub struct SpinMatrix {
    dim: usize,
    entries: Vec<Zi>,
}

impl SpinMatrix {
    pub fn from_rows(rows: &[&[(i32, i32)]]) -> SpinMatrix {
        let dim = rows.len();
        assert!(rows.iter().all(|r| r.len() == dim), "matrix must be square");
        SpinMatrix {
            dim,
            entries: rows.iter().flat_map(|r| r.iter().map(|&(re, im)| Zi::new(re, im))).collect(),
        }
    }

    pub fn identity(dim: usize) -> SpinMatrix {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = Zi::new(1, 0);
        }
        m
    }

    pub fn zeros(dim: usize) -> SpinMatrix {
        SpinMatrix {
            dim,
            entries: vec![Zi::new(0, 0); dim * dim],
        }
    }

    /// Pauli matrix `σ_k`, `k ∈ {1, 2, 3}`.
    pub fn pauli(k: usize) -> SpinMatrix {
        match k {
            1 => Self::from_rows(&[&[(0, 0), (1, 0)], &[(1, 0), (0, 0)]]),
            2 => Self::from_rows(&[&[(0, 0), (0, -1)], &[(0, 1), (0, 0)]]),
            3 => Self::from_rows(&[&[(1, 0), (0, 0)], &[(0, 0), (-1, 0)]]),
            _ => panic!("no Pauli matrix σ{k}"),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Zi {
        self.entries[row * self.dim + col]
    }

    /// Kronecker product; the left factor acts on the most significant index bit.
    pub fn kron(&self, other: &SpinMatrix) -> SpinMatrix {
        let d = self.dim * other.dim;
        let mut m = Self::zeros(d);
        for i in 0..d {
            for j in 0..d {
                m.entries[i * d + j] = self.get(i / other.dim, j / other.dim) * other.get(i % other.dim, j % other.dim);
            }
        }
        m
    }

    pub fn kron_all(factors: &[SpinMatrix]) -> SpinMatrix {
        factors
            .iter()
            .skip(1)
            .fold(factors[0].clone(), |acc, f| acc.kron(f))
    }

    pub fn adjoint(&self) -> SpinMatrix {
        let mut m = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                m.entries[i * self.dim + j] = self.get(j, i).conj();
            }
        }
        m
    }

    pub fn is_hermitian(&self) -> bool {
        *self == self.adjoint()
    }

    pub fn anticommutator(&self, other: &SpinMatrix) -> SpinMatrix {
        &(self * other) + &(other * self)
    }

    pub fn scaled(&self, c: i32) -> SpinMatrix {
        SpinMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|e| e * c).collect(),
        }
    }

    pub fn to_complex(&self) -> DMatrix<C64> {
        DMatrix::from_fn(self.dim, self.dim, |i, j| {
            let e = self.get(i, j);
            C64::new(e.re as f64, e.im as f64)
        })
    }
}

impl Mul for &SpinMatrix {
    type Output = SpinMatrix;

    fn mul(self, rhs: &SpinMatrix) -> SpinMatrix {
        assert_eq!(self.dim, rhs.dim);
        let d = self.dim;
        let mut m = SpinMatrix::zeros(d);
        for i in 0..d {
            for j in 0..d {
                m.entries[i * d + j] = (0..d).map(|k| self.get(i, k) * rhs.get(k, j)).sum();
            }
        }
        m
    }
}

impl Add for &SpinMatrix {
    type Output = SpinMatrix;

    fn add(self, rhs: &SpinMatrix) -> SpinMatrix {
        assert_eq!(self.dim, rhs.dim);
        SpinMatrix {
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

impl fmt::Debug for SpinMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|j| {
                    let e = self.get(i, j);
                    match (e.re, e.im) {
                        (re, 0) => format!("{re:>3}"),
                        (0, im) => format!("{im:>2}i"),
                        (re, im) => format!("{re}{im:+}i"),
                    }
                })
                .collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_algebra() {
        let id = SpinMatrix::identity(2);
        for a in 1..=3 {
            assert!(SpinMatrix::pauli(a).is_hermitian());
            for b in 1..=3 {
                let expect = if a == b { id.scaled(2) } else { SpinMatrix::zeros(2) };
                assert_eq!(SpinMatrix::pauli(a).anticommutator(&SpinMatrix::pauli(b)), expect);
            }
        }
        // σ1 σ2 = i σ3
        let p = &SpinMatrix::pauli(1) * &SpinMatrix::pauli(2);
        assert_eq!(p.get(0, 0), Zi::new(0, 1));
        assert_eq!(p.get(1, 1), Zi::new(0, -1));
    }

    #[test]
    fn kron_orders_factors() {
        let m = SpinMatrix::pauli(1).kron(&SpinMatrix::identity(2));
        // flips the high bit: 0 ↔ 2, 1 ↔ 3
        assert_eq!(m.get(2, 0), Zi::new(1, 0));
        assert_eq!(m.get(3, 1), Zi::new(1, 0));
        assert_eq!(m.get(1, 0), Zi::new(0, 0));
    }
}
