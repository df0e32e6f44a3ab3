use nalgebra::DVector;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::hamiltonian::{eigensystem, Eigensystem, Hamiltonian};
use super::WaveFunction;

/// Allowed drift of the norm during one propagation.
const NORM_TOL: f64 = 1e-10;
/// Chebyshev terms are dropped once `|J_k(Rt)|` falls below this.
const SERIES_CUTOFF: f64 = 1e-18;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Full eigendecomposition, limited to `DENSE_LIMIT` sites.
    Exact,
    /// Chebyshev expansion of `exp(-iHt)` using sparse products only.
    Chebyshev,
}

/// Reusable `exp(-iHt)` from one eigendecomposition.
#[derive(Debug, Clone)]
pub struct ExactPropagator {
    eig: Eigensystem,
    lattice: crate::lattice::LatticeSpec,
}

impl ExactPropagator {
    pub fn new(h: &Hamiltonian) -> Result<ExactPropagator> {
        Ok(ExactPropagator {
            eig: eigensystem(h)?,
            lattice: *h.lattice(),
        })
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eig.values
    }

    pub fn evolve(&self, psi0: &WaveFunction, t: f64) -> Result<WaveFunction> {
        require_nonzero(psi0)?;
        self.lattice.require_same(psi0.lattice())?;
        let v = &self.eig.vectors;
        let mut coeff = v.ad_mul(&DVector::from_column_slice(psi0.amplitudes()));
        for (c, e) in coeff.iter_mut().zip(&self.eig.values) {
            *c *= C64::from_polar(1.0, -e * t);
        }
        let out = WaveFunction::from_parts(self.lattice, (v * coeff).as_slice().to_vec());
        check_norm(psi0, &out, "exact propagation")?;
        Ok(out)
    }
}

fn require_nonzero(psi: &WaveFunction) -> Result<()> {
    if psi.norm() > 0.0 {
        Ok(())
    } else {
        Err(Error::pre("cannot evolve a wave function of zero norm"))
    }
}

fn check_norm(before: &WaveFunction, after: &WaveFunction, what: &'static str) -> Result<()> {
    let (a, b) = (before.norm(), after.norm());
    if (a - b).abs() > NORM_TOL * a.max(1.0) {
        return Err(Error::numerical(
            "norm conservation",
            format!("{what}: norm went from {a:.17e} to {b:.17e}"),
        ));
    }
    Ok(())
}

/// `ψ(t) = exp(-iHt) ψ₀`.
pub fn evolve(h: &Hamiltonian, psi0: &WaveFunction, t: f64, method: Method) -> Result<WaveFunction> {
    match method {
        Method::Exact => ExactPropagator::new(h)?.evolve(psi0, t),
        Method::Chebyshev => chebyshev_evolve(h, psi0, t),
    }
}

/// Bessel functions `J_0(x) … J_n(x)` by Miller's backward recurrence,
/// normalized with `J_0 + 2 Σ J_2k = 1`.
pub fn bessel_j_sequence(x: f64, n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n + 1];
    if x == 0.0 {
        out[0] = 1.0;
        return out;
    }
    let ax = x.abs();
    let start = n.max((ax + 15.0 * ax.cbrt() + 40.0) as usize) + 2;
    let mut j = vec![0.0; start + 2];
    j[start] = 1e-300;
    for k in (1..=start).rev() {
        j[k - 1] = 2.0 * k as f64 / ax * j[k] - j[k + 1];
        if j[k - 1].abs() > 1e250 {
            for v in &mut j[k - 1..] {
                *v *= 1e-250;
            }
        }
    }
    let norm = j[0] + 2.0 * j.iter().skip(2).step_by(2).sum::<f64>();
    for (k, o) in out.iter_mut().enumerate() {
        *o = j[k] / norm;
        if x < 0.0 && k % 2 == 1 {
            *o = -*o;
        }
    }
    out
}

/// Chebyshev expansion `exp(-iHt) = Σ c_k (-i)^k J_k(Rt) T_k(H/R)` with `R`
/// the Gershgorin bound of `H`. Terms stop once the Bessel weights vanish to
/// double precision; a norm drift above `1e-10` is reported as an error.
pub fn chebyshev_evolve(h: &Hamiltonian, psi0: &WaveFunction, t: f64) -> Result<WaveFunction> {
    require_nonzero(psi0)?;
    h.lattice().require_same(psi0.lattice())?;
    let radius = h.spectral_bound();
    if t == 0.0 || radius == 0.0 {
        return Ok(psi0.clone());
    }
    let x = radius * t;
    let cap = (x.abs() + 20.0 * x.abs().cbrt() + 60.0) as usize;
    let bessel = bessel_j_sequence(x, cap);
    let terms = (0..=cap)
        .find(|&k| k as f64 > x.abs() && bessel[k].abs() < SERIES_CUTOFF)
        .ok_or_else(|| {
            Error::numerical(
                "chebyshev convergence",
                format!("Bessel weights did not decay within {cap} terms at Rt = {x}"),
            )
        })?;

    let inv_r = 1.0 / radius;
    let scaled = |v: &[C64]| -> Vec<C64> { h.apply_slice(v).into_iter().map(|a| a * inv_r).collect() };
    let minus_i_pow = [
        C64::new(1.0, 0.0),
        C64::new(0.0, -1.0),
        C64::new(-1.0, 0.0),
        C64::new(0.0, 1.0),
    ];

    let mut prev: Vec<C64> = psi0.amplitudes().to_vec();
    let mut acc: Vec<C64> = prev.iter().map(|a| a * bessel[0]).collect();
    if terms > 1 {
        let mut cur = scaled(&prev);
        for k in 1..terms {
            let w = minus_i_pow[k % 4] * (2.0 * bessel[k]);
            for (a, c) in acc.iter_mut().zip(&cur) {
                *a += w * c;
            }
            if k + 1 < terms {
                let next: Vec<C64> = scaled(&cur)
                    .into_iter()
                    .zip(&prev)
                    .map(|(hc, p)| 2.0 * hc - p)
                    .collect();
                prev = std::mem::replace(&mut cur, next);
            }
        }
    }
    let out = WaveFunction::from_parts(*psi0.lattice(), acc);
    check_norm(psi0, &out, "chebyshev propagation")?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopping::{GaugeTransform, HoppingField};
    use crate::lattice::LatticeSpec;
    use crate::spectral::build_hamiltonian;
    use proptest::prelude::*;

    fn staggered4() -> Hamiltonian {
        build_hamiltonian(&HoppingField::staggered(LatticeSpec::cubic(4).unwrap()).unwrap()).unwrap()
    }

    /// Power series of `J_k`, accurate for small arguments.
    fn bessel_series(k: usize, x: f64) -> f64 {
        let mut term = (x / 2.0).powi(k as i32) / (1..=k).map(|i| i as f64).product::<f64>();
        let mut sum = term;
        for m in 1..60 {
            term *= -(x * x / 4.0) / (m as f64 * (m + k) as f64);
            sum += term;
        }
        sum
    }

    #[test]
    fn bessel_matches_series() {
        for &x in &[0.1, 1.0, 3.7, 8.0] {
            let j = bessel_j_sequence(x, 12);
            for (k, v) in j.iter().enumerate() {
                assert!((v - bessel_series(k, x)).abs() < 1e-13, "J_{k}({x})");
            }
        }
    }

    #[test]
    fn bessel_large_argument_identity() {
        // Σ J_k² over all integers k is 1.
        let j = bessel_j_sequence(600.0, 800);
        let s = j[0] * j[0] + 2.0 * j[1..].iter().map(|v| v * v).sum::<f64>();
        assert!((s - 1.0).abs() < 1e-12);
        assert!(bessel_j_sequence(-2.0, 3)[1] < 0.0);
    }

    #[test]
    fn zero_time_is_identity() {
        let h = staggered4();
        let psi = WaveFunction::random(*h.lattice(), 3);
        assert!(evolve(&h, &psi, 0.0, Method::Exact).unwrap().max_abs_diff(&psi) < 1e-13);
        assert_eq!(evolve(&h, &psi, 0.0, Method::Chebyshev).unwrap(), psi);
    }

    #[test]
    fn eigenstate_only_rotates() {
        let h = staggered4();
        let eig = eigensystem(&h).unwrap();
        let col = 40;
        let psi = WaveFunction::new(*h.lattice(), eig.vectors.column(col).iter().copied().collect()).unwrap();
        let out = chebyshev_evolve(&h, &psi, 7.5).unwrap();
        let expect = psi.scaled(C64::from_polar(1.0, -eig.values[col] * 7.5));
        assert!(out.max_abs_diff(&expect) < 1e-11);
        assert!((psi.inner(&out).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn methods_agree_on_random_state() {
        let h = staggered4();
        let psi = WaveFunction::random(*h.lattice(), 11);
        let a = evolve(&h, &psi, 10.0, Method::Exact).unwrap();
        let b = evolve(&h, &psi, 10.0, Method::Chebyshev).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-9);
    }

    #[test]
    fn zero_norm_rejected() {
        let h = staggered4();
        let z = WaveFunction::zeros(*h.lattice());
        assert!(matches!(evolve(&h, &z, 1.0, Method::Chebyshev), Err(Error::Precondition(_))));
    }

    #[test]
    fn gauge_covariance_of_evolution() {
        let l = LatticeSpec::cubic(4).unwrap();
        let k = HoppingField::staggered(l).unwrap().add_susskind_mass(0.4).unwrap();
        let g = GaugeTransform::random(l, 2);
        let h = build_hamiltonian(&k).unwrap();
        let hg = build_hamiltonian(&k.apply_gauge(&g).unwrap()).unwrap();
        let psi = WaveFunction::random(l, 9);
        let out = chebyshev_evolve(&h, &psi, 3.0).unwrap();
        // H' = G⁻¹ H G, so the state carried into the new gauge evolves covariantly.
        let moved = WaveFunction::new(l, g.to_new_gauge(psi.amplitudes())).unwrap();
        let out_g = chebyshev_evolve(&hg, &moved, 3.0).unwrap();
        let back = WaveFunction::new(l, g.to_old_gauge(out_g.amplitudes())).unwrap();
        assert!(back.max_abs_diff(&out) < 1e-11);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]
        #[test]
        fn norm_and_energy_conserved(seed in 0u64..1000, t in 0.0f64..100.0, mu in 0.0f64..1.5) {
            let l = LatticeSpec::cubic(4).unwrap();
            let k = HoppingField::staggered(l).unwrap().add_susskind_mass(mu).unwrap();
            let h = build_hamiltonian(&k).unwrap();
            let psi = WaveFunction::random(l, seed);
            let e0 = h.expectation(&psi);
            let out = chebyshev_evolve(&h, &psi, t).unwrap();
            prop_assert!((out.norm() - 1.0).abs() < 1e-10);
            prop_assert!((h.expectation(&out) - e0).abs() < 1e-9);
        }
    }
}
