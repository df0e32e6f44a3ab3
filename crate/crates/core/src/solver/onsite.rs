use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::hopping::HoppingField;
use crate::lattice::{Site, SymmetryOp};
use crate::EXACT_TOL;

use super::verify_symmetry_mod_gauge;

/// A site whose on-site amplitude changes under one generator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OnsiteWitness {
    pub generator: usize,
    pub site: Site,
    pub value: C64,
    pub image_value: C64,
}

/// Result of checking the on-site term for strict invariance.
#[derive(Debug, Clone, PartialEq)]
pub struct OnsiteReport {
    /// The common value when the on-site term is constant.
    pub constant: Option<f64>,
    /// One witness per violated generator.
    pub witnesses: Vec<OnsiteWitness>,
}

impl OnsiteReport {
    pub fn is_symmetric(&self) -> bool {
        self.witnesses.is_empty()
    }
}

/// Checks `κ₀(S⁻¹s) = κ₀(s)` for every generator.
///
/// A static gauge leaves the on-site term untouched, and the time-dependent
/// global gauge only shifts it by a constant that the rotations force to
/// zero, so strict invariance is the right test. On a torus the linear
/// profile `s·c` is not periodic and never arises.
pub fn classify_onsite(k: &HoppingField, generators: &[SymmetryOp]) -> Result<OnsiteReport> {
    let lattice = *k.lattice();
    let links = k.without_onsite();
    for op in generators {
        if !verify_symmetry_mod_gauge(&links, op)?.equivalent {
            return Err(Error::pre(format!(
                "link amplitudes are not symmetric modulo gauge under {}",
                op.name()
            )));
        }
    }
    let mut witnesses = Vec::new();
    for (idx, op) in generators.iter().enumerate() {
        let inv = op.inverse();
        if let Some(s) = lattice
            .sites()
            .find(|&s| (k.onsite(inv.apply_site(s, &lattice)) - k.onsite(s)).norm() > EXACT_TOL)
        {
            witnesses.push(OnsiteWitness {
                generator: idx,
                site: s,
                value: k.onsite(s),
                image_value: k.onsite(inv.apply_site(s, &lattice)),
            });
        }
    }
    let first = k.onsite(lattice.origin());
    let constant = k
        .onsite_values()
        .iter()
        .all(|v| (v - first).norm() < EXACT_TOL && v.im.abs() < EXACT_TOL)
        .then_some(first.re);
    Ok(OnsiteReport { constant, witnesses })
}

/// Time-dependent global gauge `g(t) = exp(-i c t)`, solving `ġ = -i c g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlobalPhaseGauge {
    pub rate: f64,
}

impl GlobalPhaseGauge {
    pub fn at(&self, t: f64) -> C64 {
        C64::from_polar(1.0, -self.rate * t)
    }

    pub fn derivative(&self, t: f64) -> C64 {
        C64::new(0.0, -self.rate) * self.at(t)
    }

    /// On-site shift `-i ġ g⁻¹` this gauge induces; cancels the constant term.
    pub fn onsite_shift(&self, t: f64) -> C64 {
        C64::new(0.0, -1.0) * self.derivative(t) * self.at(t).conj()
    }

    pub fn is_identity(&self) -> bool {
        self.rate == 0.0
    }

    pub fn description(&self) -> String {
        if self.is_identity() {
            "identity".to_string()
        } else {
            format!("g(t) = exp(-i*{}*t)", self.rate)
        }
    }
}

/// Removes a constant on-site term. Link amplitudes are unchanged.
pub fn gauge_away_onsite(k: &HoppingField) -> Result<(HoppingField, GlobalPhaseGauge)> {
    let first = k.onsite(k.lattice().origin());
    if first.im.abs() > EXACT_TOL
        || k.onsite_values().iter().any(|v| (v - first).norm() > EXACT_TOL)
    {
        return Err(Error::pre(
            "only a constant real on-site term can be gauged away",
        ));
    }
    Ok((k.without_onsite(), GlobalPhaseGauge { rate: first.re }))
}
