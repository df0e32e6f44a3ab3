//! Oracles shared by the integration tests. None of them calls into the
//! library's spectral code.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use staggered::hopping::HoppingField;
use staggered::lattice::Direction;

/// Eigenvalues of a hermitian matrix via cyclic Jacobi rotations on the real
/// embedding `[[A, -B], [B, A]]`; every eigenvalue appears twice there.
pub fn jacobi_eigenvalues(h: &[Vec<C64>]) -> Vec<f64> {
    let n = h.len();
    let m = 2 * n;
    let mut a = vec![vec![0.0; m]; m];
    for i in 0..n {
        for j in 0..n {
            a[i][j] = h[i][j].re;
            a[i + n][j + n] = h[i][j].re;
            a[i][j + n] = -h[i][j].im;
            a[i + n][j] = h[i][j].im;
        }
    }
    for _sweep in 0..100 {
        let off: f64 = (0..m)
            .flat_map(|i| (0..m).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-26 {
            break;
        }
        for p in 0..m {
            for q in p + 1..m {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..m {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..m {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut e: Vec<f64> = (0..m).map(|i| a[i][i]).collect();
    e.sort_by(f64::total_cmp);
    e.into_iter().step_by(2).collect()
}

/// Matrix of the hopping equation written out link by link.
pub fn matrix_by_hand(k: &HoppingField) -> Vec<Vec<C64>> {
    let l = *k.lattice();
    let n = l.volume();
    let mut h = vec![vec![C64::new(0.0, 0.0); n]; n];
    for s in l.sites() {
        let i = l.index(s);
        h[i][i] += k.onsite(s);
        for d in Direction::LINKS {
            let t = l.neighbor(s, d).unwrap();
            h[i][l.index(t)] += k.amp(s, d);
        }
    }
    h
}

/// Staggered spectrum with Susskind mass from the closed form
/// `±√(4Σsin²k + μ²)` over the reduced zone, eight states per momentum.
pub fn staggered_closed_form(l: usize, mu: f64) -> Vec<f64> {
    let mut e = Vec::new();
    for mx in 0..l / 2 {
        for my in 0..l / 2 {
            for mz in 0..l / 2 {
                let s: f64 = [mx, my, mz]
                    .iter()
                    .map(|&m| (2.0 * PI * m as f64 / l as f64).sin().powi(2))
                    .sum();
                let v = (4.0 * s + mu * mu).sqrt();
                e.extend([v, v, v, v, -v, -v, -v, -v]);
            }
        }
    }
    e.sort_by(f64::total_cmp);
    e
}
