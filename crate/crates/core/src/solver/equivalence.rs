use std::collections::VecDeque;

use num_complex::Complex64 as C64;
use serde_json::{json, Value};

use crate::error::Result;
use crate::hopping::{GaugeTransform, HoppingField, Link};
use crate::lattice::{Direction, LatticeSpec, Site, SymmetryOp};
use crate::EQUIV_TOL;

use super::transform_field;

/// Outcome of asking whether `g(s+n) κ_A(s,n) g(s)⁻¹ = κ_B(s,n)` has a solution.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceResult {
    pub equivalent: bool,
    /// The solving gauge, pinned to `g(origin) = 1`.
    pub gauge: Option<GaugeTransform>,
    /// Closed path whose A- and B-holonomies differ.
    pub failing_loop: Option<Vec<Link>>,
    /// First site whose on-site terms differ; static gauges cannot fix those.
    pub onsite_mismatch: Option<Site>,
    /// Largest link residual of `gauge`, or of the tree-propagated attempt.
    pub max_residual: f64,
}

impl EquivalenceResult {
    pub fn to_json_value(&self) -> Value {
        let gauge = match &self.gauge {
            Some(g) if g.is_constant(EQUIV_TOL) => json!("constant"),
            Some(g) => Value::Array(g.phases().iter().map(|p| json!([p.re, p.im])).collect()),
            None => Value::Null,
        };
        let failing_loop = self.failing_loop.as_ref().map(|path| {
            path.iter()
                .map(|l| json!({ "site": l.site.coords(), "dir": l.dir.label() }))
                .collect::<Vec<_>>()
        });
        json!({
            "equivalent": self.equivalent,
            "gauge": gauge,
            "failing_loop": failing_loop,
            "onsite_mismatch": self.onsite_mismatch.map(|s| s.coords()),
            "max_residual": self.max_residual,
        })
    }
}

/// Breadth-first spanning tree from the origin over all link directions.
/// `parent[i]` is the link that first reached site `i`.
struct SpanningTree {
    order: Vec<usize>,
    parent: Vec<Option<Link>>,
}

impl SpanningTree {
    fn build(lattice: &LatticeSpec) -> SpanningTree {
        let n = lattice.volume();
        let mut parent = vec![None; n];
        let mut seen = vec![false; n];
        let mut order = Vec::with_capacity(n);
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(i) = queue.pop_front() {
            order.push(i);
            let s = lattice.site_at(i);
            for dir in Direction::LINKS {
                let j = lattice.step_index(i, dir);
                if !seen[j] {
                    seen[j] = true;
                    parent[j] = Some(Link::new(s, dir));
                    queue.push_back(j);
                }
            }
        }
        SpanningTree { order, parent }
    }

    fn path_from_origin(&self, lattice: &LatticeSpec, s: Site) -> Vec<Link> {
        let mut path = Vec::new();
        let mut cur = lattice.index(s);
        while let Some(link) = self.parent[cur] {
            path.push(link);
            cur = lattice.index(link.site);
        }
        path.reverse();
        path
    }
}

/// Looks for a gauge carrying `ka` onto `kb`.
///
/// Phases are propagated from `g(origin) = 1` along a BFS spanning tree and
/// then every link is checked. When a link fails, its fundamental cycle has
/// different holonomies in the two fields; an elementary plaquette with
/// mismatched holonomy is reported instead when one exists.
pub fn find_gauge_equivalence(ka: &HoppingField, kb: &HoppingField) -> Result<EquivalenceResult> {
    ka.lattice().require_same(kb.lattice())?;
    ka.require_unimodular("gauge equivalence")?;
    kb.require_unimodular("gauge equivalence")?;
    let lattice = *ka.lattice();
    let tree = SpanningTree::build(&lattice);

    let mut phase = vec![C64::new(1.0, 0.0); lattice.volume()];
    for &i in &tree.order[1..] {
        let link = tree.parent[i].expect("non-root sites have a parent");
        let from = lattice.index(link.site);
        // g(s+n) = κ_B(s,n) g(s) / κ_A(s,n), with |κ_A| = 1
        let p = kb.amp_at(from, link.dir) * phase[from] * ka.amp_at(from, link.dir).conj();
        phase[i] = p / p.norm();
    }

    let mut max_residual = 0.0f64;
    let mut first_failure: Option<Link> = None;
    for i in 0..lattice.volume() {
        for dir in Direction::LINKS {
            let j = lattice.step_index(i, dir);
            let r = (phase[j] * ka.amp_at(i, dir) * phase[i].conj() - kb.amp_at(i, dir)).norm();
            if r > max_residual {
                max_residual = r;
            }
            if r > EQUIV_TOL && first_failure.is_none() {
                first_failure = Some(Link::new(lattice.site_at(i), dir));
            }
        }
    }

    let onsite_mismatch = lattice
        .sites()
        .find(|&s| (ka.onsite(s) - kb.onsite(s)).norm() > EQUIV_TOL);

    if let Some(bad) = first_failure {
        let witness = plaquette_witness(ka, kb).unwrap_or_else(|| {
            let mut cycle = tree.path_from_origin(&lattice, bad.site);
            cycle.push(bad);
            let back = tree.path_from_origin(&lattice, bad.target(&lattice));
            cycle.extend(back.iter().rev().map(|l| l.reversed(&lattice)));
            cycle
        });
        return Ok(EquivalenceResult {
            equivalent: false,
            gauge: None,
            failing_loop: Some(witness),
            onsite_mismatch,
            max_residual,
        });
    }

    let gauge = GaugeTransform::new(lattice, phase)?;
    Ok(EquivalenceResult {
        equivalent: onsite_mismatch.is_none(),
        gauge: Some(gauge),
        failing_loop: None,
        onsite_mismatch,
        max_residual,
    })
}

fn plaquette_witness(ka: &HoppingField, kb: &HoppingField) -> Option<Vec<Link>> {
    let lattice = *ka.lattice();
    for s in lattice.sites() {
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            let ha = ka.plaquette_holonomy(s, a, b);
            let hb = kb.plaquette_holonomy(s, a, b);
            if (ha - hb).norm() > EQUIV_TOL {
                let da = Direction::positive(a);
                let db = Direction::positive(b);
                let sa = lattice.step(s, da);
                let sab = lattice.step(sa, db);
                let sb = lattice.step(sab, da.negate());
                return Some(vec![
                    Link::new(s, da),
                    Link::new(sa, db),
                    Link::new(sab, da.negate()),
                    Link::new(sb, db.negate()),
                ]);
            }
        }
    }
    None
}

/// Is `k` mapped by `op` onto a gauge transform of itself?
pub fn verify_symmetry_mod_gauge(k: &HoppingField, op: &SymmetryOp) -> Result<EquivalenceResult> {
    find_gauge_equivalence(k, &transform_field(k, op)?)
}
