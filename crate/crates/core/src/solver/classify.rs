use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hopping::HoppingField;
use crate::lattice::{Direction, LatticeSpec, SymmetryOp};

use super::{find_gauge_equivalence, standard_generators, verify_symmetry_mod_gauge};

/// One gauge-equivalence class of symmetric configurations.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionClass {
    /// Phases of the first candidate in the class, in `[0, 2π)`.
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub representative: HoppingField,
    /// Quantum numbers `(a, b, c)` with `α = 2πa/L` etc. of every member.
    pub members: Vec<[usize; 3]>,
}

impl SolutionClass {
    /// `(e^{iα}, e^{iβ}, e^{iγ})` rounded to the nearest real sign when they are ±1.
    pub fn phase_signs(&self) -> [Option<i8>; 3] {
        [self.alpha, self.beta, self.gamma].map(|p| {
            let z = C64::from_polar(1.0, p);
            if (z - 1.0).norm() < 1e-12 {
                Some(1)
            } else if (z + 1.0).norm() < 1e-12 {
                Some(-1)
            } else {
                None
            }
        })
    }
}

/// Gauge-fixed ansatz `κ(s,+x) = 1`, `κ(s,+y) = e^{iαx}`, `κ(s,+z) = e^{i(βx+γy)}`
/// with the negative links set by hermiticity.
pub fn candidate_field(lattice: LatticeSpec, alpha: f64, beta: f64, gamma: f64) -> HoppingField {
    HoppingField::from_positive_links(lattice, |s, n| {
        let (x, y) = (s.x() as f64, s.y() as f64);
        match n {
            Direction::PlusX => C64::new(1.0, 0.0),
            Direction::PlusY => C64::from_polar(1.0, alpha * x),
            _ => C64::from_polar(1.0, beta * x + gamma * y),
        }
    })
}

/// All gauge classes of the ansatz that are symmetric modulo gauge under the
/// unit translations and the quarter turns `Rx`, `Rz`.
///
/// Phases are quantized to multiples of `2π/L`, which makes every straight
/// row holonomy equal to 1. On any even cubic lattice this returns the
/// scalar class `α=β=γ=0` followed by the staggered class `α=β=γ=π`.
pub fn classify_symmetric_configs(lattice: LatticeSpec) -> Result<Vec<SolutionClass>> {
    classify_with_generators(lattice, &standard_generators())
}

pub fn classify_with_generators(
    lattice: LatticeSpec,
    generators: &[SymmetryOp],
) -> Result<Vec<SolutionClass>> {
    lattice.require_even("classification")?;
    if !lattice.is_cubic() {
        return Err(Error::pre(format!(
            "classification under quarter turns needs a cubic lattice, got {lattice}"
        )));
    }
    for g in generators {
        g.check_compatible(&lattice)?;
    }
    let l = lattice.dims()[0];
    let step = 2.0 * PI / l as f64;
    let triples: Vec<[usize; 3]> = (0..l)
        .flat_map(|a| (0..l).flat_map(move |b| (0..l).map(move |c| [a, b, c])))
        .collect();

    let survivors: Vec<([usize; 3], HoppingField)> = triples
        .par_iter()
        .map(|&q| -> Result<Option<([usize; 3], HoppingField)>> {
            let [a, b, c] = q;
            let field = candidate_field(lattice, a as f64 * step, b as f64 * step, c as f64 * step);
            for op in generators {
                if !verify_symmetry_mod_gauge(&field, op)?.equivalent {
                    return Ok(None);
                }
            }
            Ok(Some((q, field)))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();

    let mut classes: Vec<SolutionClass> = Vec::new();
    for (q, field) in survivors {
        let mut placed = false;
        for class in classes.iter_mut() {
            if find_gauge_equivalence(&class.representative, &field)?.equivalent {
                class.members.push(q);
                placed = true;
                break;
            }
        }
        if !placed {
            classes.push(SolutionClass {
                alpha: q[0] as f64 * step,
                beta: q[1] as f64 * step,
                gamma: q[2] as f64 * step,
                representative: field,
                members: vec![q],
            });
        }
    }
    Ok(classes)
}
