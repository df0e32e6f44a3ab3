use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::hopping::HoppingField;
use crate::lattice::LatticeSpec;
use crate::spectral::{build_hamiltonian, gaussian_packet, WaveFunction};

use super::dirac::{assemble_dirac, DiracOperator, MassTerm};
use super::fft::{centered, fft3};
use super::sectors::{project_components, recompose, SectorCount};

/// `‖Hψ − recompose(D · project(ψ))‖ / ‖ψ‖` for the field `k` and the
/// component operator `op`. Vanishes to rounding when `op` matches `k`.
pub fn verify_equivalence(k: &HoppingField, op: &DiracOperator, psi: &WaveFunction) -> Result<f64> {
    k.lattice().require_same(psi.lattice())?;
    let norm = psi.norm();
    if norm == 0.0 {
        return Err(Error::pre("equivalence check needs a non-zero wave function"));
    }
    let h = build_hamiltonian(k)?;
    let direct = h.apply(psi);
    let via_components = recompose(&op.apply(&project_components(psi, op.sectors())?)?)?;
    Ok(direct.sub(&via_components).norm() / norm)
}

/// Phase mismatch `|arg⟨ψ_cont(t)|ψ_lat(t)⟩|` between a spinor packet
/// evolved with the lattice symbol `-2 sin k` and with the continuum symbol
/// `-2k`, for the massless four-component operator.
///
/// The packet is a Gaussian of width `lambda` on an `l³` lattice with
/// momentum `k0` along x, carried entirely by the first spinor component.
/// The mismatch grows linearly in `t` and like `k0³` for small `k0`.
pub fn continuum_error(k0: f64, lambda: f64, l: usize, t: f64) -> Result<f64> {
    if k0.abs() >= PI / 2.0 {
        return Err(Error::pre(format!("k0 = {k0} lies outside the reduced zone")));
    }
    let lattice = LatticeSpec::cubic(l)?;
    let c = (l / 2) as f64;
    let packet = gaussian_packet(lattice, [c, c, c], lambda, [k0, 0.0, 0.0])?;
    let mut amp = packet.into_amplitudes();
    fft3(&lattice, &mut amp, false);
    let op = assemble_dirac(SectorCount::Four, MassTerm::None)?;

    let mut overlap = C64::new(0.0, 0.0);
    let mut weight = 0.0;
    for (i, a) in amp.iter().enumerate() {
        let w = a.norm_sqr();
        if w == 0.0 {
            continue;
        }
        let m = lattice.site_at(i).coords();
        let k = [0, 1, 2].map(|ax| 2.0 * PI * centered(m[ax], l) as f64 / l as f64);
        let lat = propagate_first_column(&op.symbol(k), t);
        let cont = propagate_first_column(&op.continuum_symbol(k), t);
        overlap += w * cont.iter().zip(&lat).map(|(x, y)| x.conj() * y).sum::<C64>();
        weight += w;
    }
    Ok((overlap / weight).arg().abs())
}

/// First column of `exp(-iHt)` for a symbol with `H² = E²·1`.
fn propagate_first_column(h: &DMatrix<C64>, t: f64) -> Vec<C64> {
    let e = (h * h)[(0, 0)].re.max(0.0).sqrt();
    let s = if e == 0.0 { t } else { (e * t).sin() / e };
    (0..h.nrows())
        .map(|r| {
            let diag = if r == 0 { C64::new((e * t).cos(), 0.0) } else { C64::new(0.0, 0.0) };
            diag - C64::new(0.0, s) * h[(r, 0)]
        })
        .collect()
}

/// `continuum_error(k0) / continuum_error(k0 / 2)`; about 2³ for a
/// third-order symbol mismatch.
pub fn continuum_error_ratio(k0: f64, lambda: f64, l: usize, t: f64) -> Result<f64> {
    let full = continuum_error(k0, lambda, l, t)?;
    let half = continuum_error(k0 / 2.0, lambda, l, t)?;
    if full < 1e-12 && half < 1e-12 {
        return Err(Error::Inconclusive(format!(
            "both continuum errors are below 1e-12 ({full:.3e}, {half:.3e})"
        )));
    }
    Ok(full / half)
}

/// `(Pψ)(s) = (-1)^(x+y+z) ψ(-s)`.
pub fn apply_parity(psi: &WaveFunction) -> Result<WaveFunction> {
    let lattice = *psi.lattice();
    lattice.require_even("the parity operation")?;
    Ok(psi.map(|s, _| {
        let c = s.coords();
        let mirror = lattice.site([-(c[0] as i64), -(c[1] as i64), -(c[2] as i64)]);
        psi.at(mirror) * s.parity_sign()
    }))
}

/// Largest column 1-norm of `P H P⁻¹ − H`.
pub fn parity_check(k: &HoppingField) -> Result<f64> {
    let lattice = *k.lattice();
    lattice.require_even("the parity operation")?;
    let h = build_hamiltonian(k)?;
    let mirror: Vec<usize> = lattice
        .sites()
        .map(|s| {
            let c = s.coords();
            lattice.index(lattice.site([-(c[0] as i64), -(c[1] as i64), -(c[2] as i64)]))
        })
        .collect();
    let sign: Vec<f64> = lattice.sites().map(|s| s.parity_sign()).collect();
    let mut diff: BTreeMap<(usize, usize), C64> = BTreeMap::new();
    for (i, j, v) in h.triplets() {
        *diff.entry((i, j)).or_default() -= v;
        // P is an involution: (P H P)_{m(i), m(j)} = ε_i ε_j H_ij
        *diff.entry((mirror[i], mirror[j])).or_default() += v * (sign[i] * sign[j]);
    }
    let mut columns = vec![0.0; lattice.volume()];
    for ((_, j), v) in diff {
        columns[j] += v.norm();
    }
    Ok(columns.into_iter().fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn l4() -> LatticeSpec {
        LatticeSpec::cubic(4).unwrap()
    }

    #[test]
    fn massless_dirac_gauge_equivalence() {
        let k = HoppingField::dirac_gauge(l4()).unwrap();
        let op = assemble_dirac(SectorCount::Four, MassTerm::None).unwrap();
        let r = verify_equivalence(&k, &op, &WaveFunction::random(l4(), 1)).unwrap();
        assert!(r < 1e-10, "{r}");
    }

    #[test]
    fn susskind_equivalence() {
        let l = LatticeSpec::new([8, 4, 4]).unwrap();
        let k = HoppingField::dirac_gauge(l).unwrap().add_susskind_mass(0.7).unwrap();
        let op = assemble_dirac(SectorCount::Eight, MassTerm::Susskind(0.7)).unwrap();
        let r = verify_equivalence(&k, &op, &WaveFunction::random(l, 2)).unwrap();
        assert!(r < 1e-10, "{r}");
    }

    #[test]
    fn alternating_equivalence() {
        let k = HoppingField::dirac_gauge(l4()).unwrap().add_alternating_mass(0.3).unwrap();
        let op = assemble_dirac(SectorCount::Four, MassTerm::Alternating(0.3)).unwrap();
        let r = verify_equivalence(&k, &op, &WaveFunction::random(l4(), 3)).unwrap();
        assert!(r < 1e-10, "{r}");
    }

    #[test]
    fn mismatched_pair_is_order_one() {
        let op = assemble_dirac(SectorCount::Four, MassTerm::None).unwrap();
        let r = verify_equivalence(&HoppingField::scalar(l4()), &op, &WaveFunction::random(l4(), 4)).unwrap();
        assert!(r > 0.5, "{r}");
        let wrong_mass = HoppingField::dirac_gauge(l4()).unwrap().add_susskind_mass(1.0).unwrap();
        let r = verify_equivalence(&wrong_mass, &op, &WaveFunction::random(l4(), 4)).unwrap();
        assert!(r > 0.5, "{r}");
    }

    #[test]
    fn parity_is_an_involution_and_a_symmetry() {
        let psi = WaveFunction::random(l4(), 5);
        let twice = apply_parity(&apply_parity(&psi).unwrap()).unwrap();
        assert_eq!(twice, psi);
        let k = HoppingField::dirac_gauge(l4()).unwrap();
        assert!(parity_check(&k).unwrap() < 1e-12);
        assert!(parity_check(&k.add_susskind_mass(1.0).unwrap()).unwrap() < 1e-12);
    }

    #[test]
    fn parity_matches_dense_conjugation() {
        // Oracle: conjugate the dense matrix by an explicit permutation-sign matrix.
        let k = HoppingField::dirac_gauge(l4()).unwrap().add_alternating_mass(0.3).unwrap();
        let h = build_hamiltonian(&k).unwrap().to_dense();
        let n = h.nrows();
        let p = DMatrix::from_fn(n, n, |i, j| {
            let e = WaveFunction::from_fn(l4(), |s| C64::new(if l4().index(s) == j { 1.0 } else { 0.0 }, 0.0));
            apply_parity(&e).unwrap().amplitudes()[i]
        });
        let d = &p * &h * &p - &h;
        let dense = (0..n).map(|j| d.column(j).iter().map(|v| v.norm()).sum::<f64>()).fold(0.0, f64::max);
        let sparse = parity_check(&k).unwrap();
        assert!(sparse > 0.1);
        assert!((dense - sparse).abs() < 1e-12);
    }

    #[test]
    fn continuum_error_scales_like_k0_cubed_and_t() {
        let a = continuum_error(PI / 8.0, 6.0, 32, 8.0).unwrap();
        let b = continuum_error(PI / 16.0, 6.0, 32, 8.0).unwrap();
        assert!((5.0..=12.0).contains(&(a / b)), "{a} {b}");
        let a2 = continuum_error(PI / 8.0, 6.0, 32, 16.0).unwrap();
        assert!((a2 / a - 2.0).abs() < 0.1, "{a} {a2}");
    }

    #[test]
    fn continuum_error_vanishes_with_k0() {
        let errs: Vec<f64> = [0.1, 0.01, 1e-3, 1e-4]
            .iter()
            .map(|&k0| continuum_error(k0, 6.0, 32, 8.0).unwrap())
            .collect();
        assert!(errs.windows(2).all(|w| w[1] < w[0] / 5.0), "{errs:?}");
        assert!(continuum_error(0.0, 6.0, 32, 8.0).unwrap() < 1e-15);
        assert!(matches!(continuum_error_ratio(0.0, 6.0, 32, 8.0), Err(Error::Inconclusive(_))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(8))]
        #[test]
        fn equivalence_is_linear_in_psi(seed in 0u64..1000, mu in 0.0f64..2.0) {
            let k = HoppingField::dirac_gauge(l4()).unwrap().add_susskind_mass(mu).unwrap();
            let op = assemble_dirac(SectorCount::Eight, MassTerm::Susskind(mu)).unwrap();
            let psi = WaveFunction::random(l4(), seed).scaled(C64::new(0.0, 3.5));
            prop_assert!(verify_equivalence(&k, &op, &psi).unwrap() < 1e-10);
        }
    }
}
