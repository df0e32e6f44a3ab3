//! Symmetry modulo gauge: equivalence decisions, maximal gauge fixing and
//! the classification of symmetric hopping configurations.

mod classify;
mod equivalence;
mod gauge_fix;
mod onsite;

pub use classify::{
    candidate_field, classify_symmetric_configs, classify_with_generators, SolutionClass,
};
pub use equivalence::{find_gauge_equivalence, verify_symmetry_mod_gauge, EquivalenceResult};
pub use gauge_fix::{
    gauge_fix_tree, maximal_gauge_fix, preserves_gauge_fixing, residual_gauge_stabilizer,
    Stabilizer,
};
pub use onsite::{classify_onsite, gauge_away_onsite, GlobalPhaseGauge, OnsiteReport, OnsiteWitness};

use crate::error::Result;
use crate::hopping::HoppingField;
use crate::lattice::{Direction, SymmetryOp};

/// Field seen after moving the lattice by `op`:
/// `κ'(s,n) = κ(S⁻¹s, S⁻¹n)` and `κ₀'(s) = κ₀(S⁻¹s)`.
pub fn transform_field(k: &HoppingField, op: &SymmetryOp) -> Result<HoppingField> {
    let lattice = *k.lattice();
    op.check_compatible(&lattice)?;
    let inv = op.inverse();
    let moved = HoppingField::from_fn(lattice, |s, n| {
        k.amp(inv.apply_site(s, &lattice), inv.apply_direction(n))
    });
    Ok(moved.with_onsite(|s| k.onsite(inv.apply_site(s, &lattice))))
}

/// Unit translations along x, y, z followed by the quarter turns `Rx`, `Rz`.
pub fn standard_generators() -> Vec<SymmetryOp> {
    vec![
        SymmetryOp::translation(Direction::PlusX.vector()),
        SymmetryOp::translation(Direction::PlusY.vector()),
        SymmetryOp::translation(Direction::PlusZ.vector()),
        SymmetryOp::rx(),
        SymmetryOp::rz(),
    ]
}
