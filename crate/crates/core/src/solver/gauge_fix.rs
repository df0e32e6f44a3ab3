use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::hopping::{GaugeTransform, HoppingField, Link};
use crate::lattice::{Direction, LatticeSpec};
use crate::EQUIV_TOL;

/// Links set to 1 by maximal gauge fixing: every `+x` link except the wrap,
/// the `+y` links in the plane `x = 0` except the wrap, and the `+z` links on
/// the line `x = y = 0` except the wrap. Together they form a spanning tree.
pub fn gauge_fix_tree(lattice: &LatticeSpec) -> Vec<Link> {
    let [lx, ly, lz] = lattice.dims();
    let mut tree = Vec::with_capacity(lattice.volume() - 1);
    for z in 0..lz - 1 {
        tree.push(Link::new(lattice.site([0, 0, z as i64]), Direction::PlusZ));
    }
    for z in 0..lz {
        for y in 0..ly - 1 {
            tree.push(Link::new(lattice.site([0, y as i64, z as i64]), Direction::PlusY));
        }
    }
    for z in 0..lz {
        for y in 0..ly {
            for x in 0..lx - 1 {
                tree.push(Link::new(
                    lattice.site([x as i64, y as i64, z as i64]),
                    Direction::PlusX,
                ));
            }
        }
    }
    tree
}

/// Gauge-fixes `k` so every tree link equals 1. Returns the fixed field and
/// the gauge used (`g(origin) = 1`). Wrap links keep the row holonomies.
pub fn maximal_gauge_fix(k: &HoppingField) -> Result<(HoppingField, GaugeTransform)> {
    k.require_unimodular("maximal gauge fixing")?;
    let lattice = *k.lattice();
    let mut phase = vec![C64::new(1.0, 0.0); lattice.volume()];
    // The tree is listed root-outward, so each link's source is already set.
    for link in gauge_fix_tree(&lattice) {
        let from = lattice.index(link.site);
        let to = lattice.index(link.target(&lattice));
        phase[to] = phase[from] * k.amp(link.site, link.dir).conj();
    }
    let g = GaugeTransform::new(lattice, phase)?;
    Ok((k.apply_gauge(&g)?, g))
}

/// Whether `g` leaves every tree link of a gauge-fixed field at 1.
pub fn preserves_gauge_fixing(k_fixed: &HoppingField, g: &GaugeTransform) -> bool {
    let lattice = *k_fixed.lattice();
    gauge_fix_tree(&lattice).iter().all(|link| {
        let v = g.at(link.target(&lattice)) * k_fixed.amp(link.site, link.dir) * g.at(link.site).conj();
        (v - 1.0).norm() < EQUIV_TOL
    })
}

/// Gauge freedom left after maximal gauge fixing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Stabilizer {
    /// Independent phases: one per connected component of the tree.
    pub free_phases: usize,
    pub tree_links: usize,
}

impl Stabilizer {
    pub fn is_global_phase(&self) -> bool {
        self.free_phases == 1
    }

    pub fn description(&self) -> String {
        if self.is_global_phase() {
            "global phase".to_string()
        } else {
            format!("{} independent phases", self.free_phases)
        }
    }
}

/// Gauges preserving the tree conditions satisfy `g(s+n) = g(s)` on every
/// tree link, so `g(origin)` propagates to every site the tree reaches. The
/// stabilizer is therefore one phase per connected component; on a
/// gauge-fixed lattice that is a single global phase, which also means no
/// time-dependent gauge can act on the links.
pub fn residual_gauge_stabilizer(k_fixed: &HoppingField) -> Result<Stabilizer> {
    let lattice = *k_fixed.lattice();
    let tree = gauge_fix_tree(&lattice);
    if let Some(bad) = tree
        .iter()
        .find(|l| (k_fixed.amp(l.site, l.dir) - 1.0).norm() > EQUIV_TOL)
    {
        return Err(Error::pre(format!(
            "field is not gauge-fixed: tree link {} {} = {}",
            bad.site,
            bad.dir,
            k_fixed.amp(bad.site, bad.dir)
        )));
    }
    let n = lattice.volume();
    let mut adjacency = vec![Vec::new(); n];
    for l in &tree {
        let a = lattice.index(l.site);
        let b = lattice.index(l.target(&lattice));
        adjacency[a].push(b);
        adjacency[b].push(a);
    }
    let mut component = vec![usize::MAX; n];
    let mut components = 0;
    for root in 0..n {
        if component[root] != usize::MAX {
            continue;
        }
        let mut stack = vec![root];
        component[root] = components;
        while let Some(i) = stack.pop() {
            for &j in &adjacency[i] {
                if component[j] == usize::MAX {
                    component[j] = components;
                    stack.push(j);
                }
            }
        }
        components += 1;
    }
    Ok(Stabilizer {
        free_phases: components,
        tree_links: tree.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn scalar_is_already_fixed() {
        let l = LatticeSpec::cubic(4).unwrap();
        let k = HoppingField::scalar(l);
        let (fixed, g) = maximal_gauge_fix(&k).unwrap();
        assert_eq!(fixed, k);
        assert!(g.is_constant(0.0));
    }

    #[test]
    fn tree_spans_the_lattice() {
        for dims in [[2, 2, 2], [4, 6, 2], [4, 4, 4]] {
            let l = LatticeSpec::new(dims).unwrap();
            assert_eq!(gauge_fix_tree(&l).len(), l.volume() - 1);
        }
    }

    #[test]
    fn fixing_a_random_orbit_point() {
        let l = LatticeSpec::new([4, 6, 4]).unwrap();
        let k = HoppingField::staggered(l).unwrap();
        let scrambled = k.apply_gauge(&GaugeTransform::random(l, 3)).unwrap();
        let (fixed, _) = maximal_gauge_fix(&scrambled).unwrap();
        for link in gauge_fix_tree(&l) {
            assert!((fixed.amp(link.site, link.dir) - 1.0).norm() < 1e-12);
        }
        for s in l.sites() {
            for axis in 0..3 {
                let before = scrambled.row_holonomy(s, axis);
                assert!((before - fixed.row_holonomy(s, axis)).norm() < 1e-11);
            }
        }
        assert!(fixed.check_hermiticity());
    }

    #[test]
    fn stabilizer_of_fixed_staggered_is_global_phase() {
        let l = LatticeSpec::cubic(4).unwrap();
        let (fixed, _) = maximal_gauge_fix(&HoppingField::staggered(l).unwrap()).unwrap();
        let st = residual_gauge_stabilizer(&fixed).unwrap();
        assert!(st.is_global_phase());
        assert_eq!(st.description(), "global phase");
        let c = GaugeTransform::constant(l, C64::from_polar(1.0, 0.8)).unwrap();
        assert!(preserves_gauge_fixing(&fixed, &c));
        assert_eq!(fixed.apply_gauge(&c).unwrap().max_difference(&fixed) < 1e-14, true);
    }

    #[test]
    fn unfixed_input_rejected() {
        let l = LatticeSpec::cubic(4).unwrap();
        let scrambled = HoppingField::scalar(l).apply_gauge(&GaugeTransform::random(l, 9)).unwrap();
        assert!(residual_gauge_stabilizer(&scrambled).is_err());
    }

    #[test]
    fn site_dependent_gauge_breaks_a_tree_link() {
        let l = LatticeSpec::cubic(4).unwrap();
        let (fixed, _) = maximal_gauge_fix(&HoppingField::staggered(l).unwrap()).unwrap();
        for s in l.sites().skip(1) {
            let g = GaugeTransform::from_fn(l, |t| {
                if t == s { C64::from_polar(1.0, PI / 4.0) } else { C64::new(1.0, 0.0) }
            })
            .unwrap();
            assert!(!preserves_gauge_fixing(&fixed, &g));
        }
    }
}
