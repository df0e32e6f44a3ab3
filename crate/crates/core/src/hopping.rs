//! Hopping-amplitude fields and the gauge transformations acting on them.
//!
//! A [`HoppingField`] stores one complex amplitude per directed link, both
//! directions materialized, plus an on-site term per site. The evolution it
//! generates is `i dψ(s)/dt = Σ_n κ(s,n) ψ(s+n) + κ₀(s) ψ(s)`.
//!
//! Hermiticity `κ(s,-n) = conj κ(s-n,n)` is a checked property, not an
//! assumption, so tests can inject violations link by link.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{Direction, LatticeSpec, Site};
use crate::EXACT_TOL;

/// A directed link `s → s+n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Link {
    pub site: Site,
    pub dir: Direction,
}

impl Link {
    pub fn new(site: Site, dir: Direction) -> Link {
        Link { site, dir }
    }

    pub fn target(&self, lattice: &LatticeSpec) -> Site {
        lattice.step(self.site, self.dir)
    }

    /// The same link walked backwards.
    pub fn reversed(&self, lattice: &LatticeSpec) -> Link {
        Link {
            site: self.target(lattice),
            dir: self.dir.negate(),
        }
    }
}

fn sign(k: usize) -> f64 {
    if k % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Complex amplitude per directed link plus an on-site term per site.
#[derive(Debug, Clone, PartialEq)]
pub struct HoppingField {
    lattice: LatticeSpec,
    links: Vec<[C64; 6]>,
    onsite: Vec<C64>,
}

impl HoppingField {
    /// Field with `amp(s, n) = f(s, n)` for every link and zero on-site term.
    pub fn from_fn(lattice: LatticeSpec, f: impl Fn(Site, Direction) -> C64) -> HoppingField {
        let links = lattice
            .sites()
            .map(|s| Direction::LINKS.map(|n| f(s, n)))
            .collect();
        HoppingField {
            lattice,
            links,
            onsite: vec![C64::new(0.0, 0.0); lattice.volume()],
        }
    }

    /// Field specified on the positive links only; the negative links are
    /// filled in by hermiticity.
    pub fn from_positive_links(
        lattice: LatticeSpec,
        f: impl Fn(Site, Direction) -> C64,
    ) -> HoppingField {
        Self::from_fn(lattice, |s, n| {
            if n.is_positive() {
                f(s, n)
            } else {
                f(lattice.step(s, n), n.negate()).conj()
            }
        })
    }

    /// Strictly symmetric solution: every link amplitude equals 1.
    pub fn scalar(lattice: LatticeSpec) -> HoppingField {
        Self::from_fn(lattice, |_, _| C64::new(1.0, 0.0))
    }

    /// Staggered solution: `1` along x, `(-1)^x` along y, `(-1)^(x+y)` along z,
    /// identical for both orientations of each link.
    pub fn staggered(lattice: LatticeSpec) -> Result<HoppingField> {
        lattice.require_even("the staggered field")?;
        Ok(Self::from_fn(lattice, |s, n| {
            let v = match n.axis() {
                Some(0) => 1.0,
                Some(1) => sign(s.x()),
                _ => sign(s.x() + s.y()),
            };
            C64::new(v, 0.0)
        }))
    }

    /// The staggered field in the gauge `ψ_old = i^(x+y+z) ψ_new`:
    /// `κ(s,±x) = ±i`, `κ(s,±y) = ±i(-1)^x`, `κ(s,±z) = ±i(-1)^(x+y)`.
    pub fn dirac_gauge(lattice: LatticeSpec) -> Result<HoppingField> {
        lattice.require_divisible_by_4("the Dirac-gauge field")?;
        Ok(Self::from_fn(lattice, |s, n| {
            let eta = match n.axis() {
                Some(0) => 1.0,
                Some(1) => sign(s.x()),
                _ => sign(s.x() + s.y()),
            };
            let orient = if n.is_positive() { 1.0 } else { -1.0 };
            C64::new(0.0, orient * eta)
        }))
    }

    pub fn lattice(&self) -> &LatticeSpec {
        &self.lattice
    }

    /// `κ(s, n)`; for `OnSite` this is the on-site amplitude.
    pub fn amp(&self, s: Site, n: Direction) -> C64 {
        let i = self.lattice.index(s);
        match n {
            Direction::OnSite => self.onsite[i],
            _ => self.links[i][n.link_slot()],
        }
    }

    pub(crate) fn amp_at(&self, index: usize, n: Direction) -> C64 {
        self.links[index][n.link_slot()]
    }

    pub fn onsite(&self, s: Site) -> C64 {
        self.onsite[self.lattice.index(s)]
    }

    pub fn onsite_values(&self) -> &[C64] {
        &self.onsite
    }

    /// Overwrite one directed amplitude (or the on-site term) in place.
    /// Does not touch the reverse link.
    pub fn set_amp(&mut self, s: Site, n: Direction, value: C64) {
        let i = self.lattice.index(s);
        match n {
            Direction::OnSite => self.onsite[i] = value,
            _ => self.links[i][n.link_slot()] = value,
        }
    }

    pub fn with_onsite(mut self, f: impl Fn(Site) -> C64) -> HoppingField {
        for (i, v) in self.onsite.iter_mut().enumerate() {
            *v = f(self.lattice.site_at(i));
        }
        self
    }

    pub fn without_onsite(&self) -> HoppingField {
        let mut out = self.clone();
        out.onsite.iter_mut().for_each(|v| *v = C64::new(0.0, 0.0));
        out
    }

    pub fn has_onsite(&self) -> bool {
        self.onsite.iter().any(|v| v.norm() > EXACT_TOL)
    }

    /// Largest deviation from `κ(s,-n) = conj κ(s-n,n)` and from a real on-site term.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for s in self.lattice.sites() {
            for n in Direction::POSITIVE {
                let back = self.lattice.step(s, n.negate());
                let d = (self.amp(s, n.negate()) - self.amp(back, n).conj()).norm();
                worst = worst.max(d);
            }
            worst = worst.max(self.onsite(s).im.abs());
        }
        worst
    }

    pub fn check_hermiticity(&self) -> bool {
        self.hermiticity_defect() < EXACT_TOL
    }

    /// Largest `| |κ(s,n)| - 1 |` over all links.
    pub fn unimodularity_defect(&self) -> f64 {
        self.links
            .iter()
            .flat_map(|l| l.iter())
            .map(|a| (a.norm() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    pub fn is_unimodular(&self) -> bool {
        self.unimodularity_defect() < EXACT_TOL
    }

    pub(crate) fn require_unimodular(&self, what: &str) -> Result<()> {
        if self.is_unimodular() {
            Ok(())
        } else {
            Err(Error::pre(format!(
                "{what} needs unit-modulus link amplitudes (defect {:.3e})",
                self.unimodularity_defect()
            )))
        }
    }

    /// `κ'(s,n) = g(s+n) κ(s,n) g(s)⁻¹`. A static gauge leaves the on-site
    /// term alone.
    pub fn apply_gauge(&self, g: &GaugeTransform) -> Result<HoppingField> {
        self.lattice.require_same(&g.lattice)?;
        let mut out = self.clone();
        for (i, links) in out.links.iter_mut().enumerate() {
            let gs_inv = g.phase[i].conj();
            for (slot, n) in Direction::LINKS.into_iter().enumerate() {
                let j = self.lattice.step_index(i, n);
                links[slot] = g.phase[j] * links[slot] * gs_inv;
            }
        }
        Ok(out)
    }

    /// Adds the on-site term `μ(-1)^(x+y+z)`.
    pub fn add_susskind_mass(&self, mu: f64) -> Result<HoppingField> {
        self.lattice.require_even("the Susskind mass term")?;
        let mut out = self.clone();
        for (i, v) in out.onsite.iter_mut().enumerate() {
            *v += mu * self.lattice.site_at(i).parity_sign();
        }
        Ok(out)
    }

    /// Alternating-spacing mass on the x links of the Dirac-gauge field:
    /// `κ(s,+x) = i + iμ(-1)^x`, `κ(s,-x) = -i + iμ(-1)^x`.
    pub fn add_alternating_mass(&self, mu: f64) -> Result<HoppingField> {
        let reference = HoppingField::dirac_gauge(self.lattice)?;
        if self.max_link_difference(&reference) > EXACT_TOL {
            return Err(Error::pre(
                "the alternating mass term is defined only on the Dirac-gauge field",
            ));
        }
        let mut out = self.clone();
        for (i, links) in out.links.iter_mut().enumerate() {
            let shift = C64::new(0.0, mu * sign(self.lattice.site_at(i).x()));
            links[Direction::PlusX.link_slot()] += shift;
            links[Direction::MinusX.link_slot()] += shift;
        }
        Ok(out)
    }

    /// Largest `|κ_a(s,n) - κ_b(s,n)|` over links (on-site excluded).
    pub fn max_link_difference(&self, other: &HoppingField) -> f64 {
        if self.lattice != other.lattice {
            return f64::INFINITY;
        }
        self.links
            .iter()
            .zip(&other.links)
            .flat_map(|(a, b)| a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()))
            .fold(0.0, f64::max)
    }

    /// Largest difference over links and on-site terms.
    pub fn max_difference(&self, other: &HoppingField) -> f64 {
        let onsite = self
            .onsite
            .iter()
            .zip(&other.onsite)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        self.max_link_difference(other).max(onsite)
    }

    /// Product of the `+axis` amplitudes along the full periodic row through `start`.
    pub fn row_holonomy(&self, start: Site, axis: usize) -> C64 {
        let n = Direction::positive(axis);
        let mut s = start;
        let mut h = C64::new(1.0, 0.0);
        for _ in 0..self.lattice.dims()[axis] {
            h *= self.amp(s, n);
            s = self.lattice.step(s, n);
        }
        h
    }

    /// Holonomy of the elementary plaquette `s → s+a → s+a+b → s+b → s`.
    pub fn plaquette_holonomy(&self, s: Site, a: usize, b: usize) -> C64 {
        let da = Direction::positive(a);
        let db = Direction::positive(b);
        let l = &self.lattice;
        let sa = l.step(s, da);
        let sab = l.step(sa, db);
        let sb = l.step(sab, da.negate());
        self.amp(s, da) * self.amp(sa, db) * self.amp(sab, da.negate()) * self.amp(sb, db.negate())
    }

    /// Product of amplitudes along a path of links. Fails if consecutive links
    /// do not connect or the path is not closed.
    pub fn loop_holonomy(&self, path: &[Link]) -> Result<C64> {
        let mut h = C64::new(1.0, 0.0);
        for (k, link) in path.iter().enumerate() {
            let next = path[(k + 1) % path.len()].site;
            if link.target(&self.lattice) != next {
                return Err(Error::pre(format!(
                    "path broken after link {k} ({} {})",
                    link.site, link.dir
                )));
            }
            h *= self.amp(link.site, link.dir);
        }
        Ok(h)
    }

    /// Strict invariance under translations by two sites along every axis.
    pub fn is_two_periodic(&self) -> bool {
        let l = &self.lattice;
        l.is_even()
            && l.sites().all(|s| {
                (0..3).all(|axis| {
                    let mut shift = [0i64; 3];
                    shift[axis] = 2;
                    let t = l.translate(s, shift);
                    (self.onsite(s) - self.onsite(t)).norm() < EXACT_TOL
                        && Direction::LINKS
                            .iter()
                            .all(|&n| (self.amp(s, n) - self.amp(t, n)).norm() < EXACT_TOL)
                })
            })
    }

    pub fn to_document(&self) -> FieldDocument {
        let mut links = Vec::with_capacity(6 * self.lattice.volume());
        let mut onsite = Vec::with_capacity(self.lattice.volume());
        for s in self.lattice.sites() {
            for n in Direction::LINKS {
                let a = self.amp(s, n);
                links.push(LinkEntry {
                    site: s.coords(),
                    dir: n.label().to_string(),
                    re: a.re,
                    im: a.im,
                });
            }
            let o = self.onsite(s);
            onsite.push(OnsiteEntry {
                site: s.coords(),
                re: o.re,
                im: o.im,
            });
        }
        FieldDocument {
            dims: self.lattice.dims(),
            links,
            onsite,
        }
    }

    pub fn from_document(doc: &FieldDocument) -> Result<HoppingField> {
        let lattice = LatticeSpec::new(doc.dims)?;
        let mut field = HoppingField::from_fn(lattice, |_, _| C64::new(f64::NAN, f64::NAN));
        let in_range = |c: [usize; 3]| (0..3).all(|i| c[i] < doc.dims[i]);
        for e in &doc.links {
            let dir = Direction::from_label(&e.dir)
                .filter(|d| *d != Direction::OnSite)
                .ok_or_else(|| Error::Format(format!("unknown link direction {:?}", e.dir)))?;
            if !in_range(e.site) {
                return Err(Error::Format(format!("site {:?} outside lattice", e.site)));
            }
            field.set_amp(Site(e.site), dir, C64::new(e.re, e.im));
        }
        if field.links.iter().flatten().any(|a| a.re.is_nan()) {
            return Err(Error::Format("document does not cover every link".into()));
        }
        for e in &doc.onsite {
            if !in_range(e.site) {
                return Err(Error::Format(format!("site {:?} outside lattice", e.site)));
            }
            field.set_amp(Site(e.site), Direction::OnSite, C64::new(e.re, e.im));
        }
        Ok(field)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("field document serializes")
    }

    pub fn from_json(text: &str) -> Result<HoppingField> {
        let doc: FieldDocument =
            serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        Self::from_document(&doc)
    }
}

/// JSON layout of a [`HoppingField`]: sites in index order, links in the
/// order `+x,-x,+y,-y,+z,-z` within each site.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldDocument {
    pub dims: [usize; 3],
    pub links: Vec<LinkEntry>,
    #[serde(default)]
    pub onsite: Vec<OnsiteEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkEntry {
    pub site: [usize; 3],
    pub dir: String,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OnsiteEntry {
    pub site: [usize; 3],
    pub re: f64,
    pub im: f64,
}

/// Site-dependent unit phase `g(s)`; acts on wave functions as
/// `ψ_old(s) = g(s) ψ_new(s)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeTransform {
    lattice: LatticeSpec,
    phase: Vec<C64>,
}

impl GaugeTransform {
    pub fn new(lattice: LatticeSpec, phase: Vec<C64>) -> Result<GaugeTransform> {
        if phase.len() != lattice.volume() {
            return Err(Error::pre(format!(
                "gauge needs {} phases, got {}",
                lattice.volume(),
                phase.len()
            )));
        }
        if let Some((i, p)) = phase
            .iter()
            .enumerate()
            .find(|(_, p)| (p.norm() - 1.0).abs() > EXACT_TOL)
        {
            return Err(Error::pre(format!(
                "gauge phase at {} has modulus {}",
                lattice.site_at(i),
                p.norm()
            )));
        }
        Ok(GaugeTransform { lattice, phase })
    }

    pub fn from_fn(lattice: LatticeSpec, f: impl Fn(Site) -> C64) -> Result<GaugeTransform> {
        Self::new(lattice, lattice.sites().map(f).collect())
    }

    pub fn identity(lattice: LatticeSpec) -> GaugeTransform {
        GaugeTransform {
            lattice,
            phase: vec![C64::new(1.0, 0.0); lattice.volume()],
        }
    }

    pub fn constant(lattice: LatticeSpec, c: C64) -> Result<GaugeTransform> {
        Self::new(lattice, vec![c; lattice.volume()])
    }

    /// Independent uniform phases per site from a seeded stream.
    pub fn random(lattice: LatticeSpec, seed: u64) -> GaugeTransform {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phase = (0..lattice.volume())
            .map(|_| C64::from_polar(1.0, rng.random_range(0.0..2.0 * PI)))
            .collect();
        GaugeTransform { lattice, phase }
    }

    /// `g(s) = i^(x+y+z)`, mapping the staggered field onto the Dirac gauge.
    /// Single-valued on the torus only when every side is divisible by 4.
    pub fn staggered_to_dirac(lattice: LatticeSpec) -> Result<GaugeTransform> {
        lattice.require_divisible_by_4("the i^(x+y+z) gauge")?;
        let powers = [
            C64::new(1.0, 0.0),
            C64::new(0.0, 1.0),
            C64::new(-1.0, 0.0),
            C64::new(0.0, -1.0),
        ];
        Self::from_fn(lattice, |s| powers[(s.x() + s.y() + s.z()) % 4])
    }

    pub fn lattice(&self) -> &LatticeSpec {
        &self.lattice
    }

    pub fn at(&self, s: Site) -> C64 {
        self.phase[self.lattice.index(s)]
    }

    pub fn phases(&self) -> &[C64] {
        &self.phase
    }

    pub fn inverse(&self) -> GaugeTransform {
        GaugeTransform {
            lattice: self.lattice,
            phase: self.phase.iter().map(|p| p.conj()).collect(),
        }
    }

    /// Pointwise product; applying `a` then `b` equals applying `b.compose(a)`.
    pub fn compose(&self, other: &GaugeTransform) -> Result<GaugeTransform> {
        self.lattice.require_same(&other.lattice)?;
        Ok(GaugeTransform {
            lattice: self.lattice,
            phase: self.phase.iter().zip(&other.phase).map(|(a, b)| a * b).collect(),
        })
    }

    /// The same gauge divided by its value at the origin.
    pub fn pinned_at_origin(&self) -> GaugeTransform {
        let g0 = self.phase[0].conj();
        GaugeTransform {
            lattice: self.lattice,
            phase: self.phase.iter().map(|p| p * g0).collect(),
        }
    }

    pub fn is_constant(&self, tol: f64) -> bool {
        self.phase.iter().all(|p| (p - self.phase[0]).norm() <= tol)
    }

    /// Largest pointwise distance after removing the global phase of each.
    pub fn distance_mod_global_phase(&self, other: &GaugeTransform) -> f64 {
        let a = self.pinned_at_origin();
        let b = other.pinned_at_origin();
        a.phase
            .iter()
            .zip(&b.phase)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    /// `ψ ↦ g⁻¹ ψ`, the new wave function seen in the transformed gauge.
    pub fn to_new_gauge(&self, psi: &[C64]) -> Vec<C64> {
        psi.iter().zip(&self.phase).map(|(v, g)| v * g.conj()).collect()
    }

    /// `ψ ↦ g ψ`, back to the original gauge.
    pub fn to_old_gauge(&self, psi: &[C64]) -> Vec<C64> {
        psi.iter().zip(&self.phase).map(|(v, g)| v * g).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn l4() -> LatticeSpec {
        LatticeSpec::cubic(4).unwrap()
    }

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn scalar_amplitudes_are_one() {
        let l = l4();
        let k = HoppingField::scalar(l);
        assert_eq!(k.amp(l.site([0, 0, 0]), Direction::PlusX), c(1.0, 0.0));
        assert_eq!(k.amp(l.site([2, 3, 1]), Direction::MinusZ), c(1.0, 0.0));
        assert!(k.check_hermiticity());
    }

    #[test]
    fn staggered_sign_pattern() {
        let l = l4();
        let k = HoppingField::staggered(l).unwrap();
        assert_eq!(k.amp(l.site([1, 2, 3]), Direction::PlusY), c(-1.0, 0.0));
        assert_eq!(k.amp(l.site([1, 1, 0]), Direction::PlusZ), c(1.0, 0.0));
        assert_eq!(k.amp(l.site([0, 0, 0]), Direction::PlusX), c(1.0, 0.0));
        assert!(k.check_hermiticity());
        assert!(HoppingField::staggered(LatticeSpec::new([4, 3, 4]).unwrap()).is_err());
    }

    #[test]
    fn dirac_gauge_amplitudes() {
        let l = l4();
        let k = HoppingField::dirac_gauge(l).unwrap();
        assert_eq!(k.amp(l.origin(), Direction::PlusX), c(0.0, 1.0));
        assert_eq!(k.amp(l.origin(), Direction::MinusX), c(0.0, -1.0));
        assert_eq!(k.amp(l.site([1, 0, 0]), Direction::PlusY), c(0.0, -1.0));
        assert_eq!(k.amp(l.site([1, 0, 0]), Direction::MinusY), c(0.0, 1.0));
        assert_eq!(k.amp(l.site([1, 0, 2]), Direction::PlusZ), c(0.0, -1.0));
        assert!(k.check_hermiticity());
        assert!(HoppingField::dirac_gauge(LatticeSpec::cubic(6).unwrap()).is_err());
    }

    #[test]
    fn quarter_phase_gauge_maps_staggered_to_dirac() {
        for l in [l4(), LatticeSpec::cubic(8).unwrap(), LatticeSpec::new([4, 8, 12]).unwrap()] {
            let g = GaugeTransform::staggered_to_dirac(l).unwrap();
            let mapped = HoppingField::staggered(l).unwrap().apply_gauge(&g).unwrap();
            assert!(mapped.max_difference(&HoppingField::dirac_gauge(l).unwrap()) < EXACT_TOL);
        }
    }

    #[test]
    fn identity_gauge_changes_nothing() {
        let k = HoppingField::staggered(l4()).unwrap();
        assert_eq!(k.apply_gauge(&GaugeTransform::identity(l4())).unwrap(), k);
    }

    #[test]
    fn non_unimodular_gauge_rejected() {
        let mut p = vec![c(1.0, 0.0); 64];
        p[5] = c(1.1, 0.0);
        assert!(GaugeTransform::new(l4(), p).is_err());
    }

    #[test]
    fn susskind_mass_alternates() {
        let l = l4();
        let k = HoppingField::staggered(l).unwrap().add_susskind_mass(0.7).unwrap();
        assert_eq!(k.onsite(l.origin()), c(0.7, 0.0));
        assert_eq!(k.onsite(l.site([1, 0, 0])), c(-0.7, 0.0));
        assert_eq!(k.onsite(l.site([1, 1, 0])), c(0.7, 0.0));
        let zero = HoppingField::staggered(l).unwrap();
        assert_eq!(zero.add_susskind_mass(0.0).unwrap(), zero);
    }

    #[test]
    fn alternating_mass_on_dirac_gauge() {
        let l = l4();
        let mu = 0.3;
        let k = HoppingField::dirac_gauge(l).unwrap().add_alternating_mass(mu).unwrap();
        assert_eq!(k.amp(l.site([0, 2, 1]), Direction::PlusX), c(0.0, 1.0 + mu));
        assert_eq!(k.amp(l.site([1, 2, 1]), Direction::MinusX), c(0.0, -1.0 - mu));
        assert!(k.check_hermiticity());
        assert!(!k.is_unimodular());
        let heavy = HoppingField::dirac_gauge(l).unwrap().add_alternating_mass(0.5).unwrap();
        assert!(heavy.check_hermiticity());
        assert!(HoppingField::staggered(l).unwrap().add_alternating_mass(mu).is_err());
    }

    #[test]
    fn one_sided_phase_breaks_hermiticity() {
        let l = l4();
        let mut k = HoppingField::staggered(l).unwrap();
        assert!(k.check_hermiticity());
        let s = l.site([1, 2, 3]);
        let v = k.amp(s, Direction::PlusY) * C64::from_polar(1.0, 0.1);
        k.set_amp(s, Direction::PlusY, v);
        assert!(!k.check_hermiticity());
    }

    #[test]
    fn complex_onsite_is_not_hermitian() {
        let k = HoppingField::scalar(l4()).with_onsite(|_| c(0.0, 0.1));
        assert!(!k.check_hermiticity());
    }

    #[test]
    fn plaquettes_distinguish_scalar_from_staggered() {
        let l = l4();
        let scalar = HoppingField::scalar(l);
        let stag = HoppingField::staggered(l).unwrap();
        for s in l.sites() {
            for (a, b) in [(0, 1), (0, 2), (1, 2)] {
                assert!((scalar.plaquette_holonomy(s, a, b) - 1.0).norm() < EXACT_TOL);
                assert!((stag.plaquette_holonomy(s, a, b) + 1.0).norm() < EXACT_TOL);
            }
        }
    }

    #[test]
    fn json_round_trip_and_ordering() {
        let l = LatticeSpec::new([2, 2, 4]).unwrap();
        let k = HoppingField::staggered(l).unwrap().add_susskind_mass(0.25).unwrap();
        let doc = k.to_document();
        assert_eq!(doc.links[0].dir, "+x");
        assert_eq!(doc.links[5].dir, "-z");
        assert_eq!(doc.links[6].site, [1, 0, 0]);
        let back = HoppingField::from_json(&k.to_json()).unwrap();
        assert_eq!(back, k);
    }

    #[test]
    fn json_rejects_incomplete_documents() {
        let mut doc = HoppingField::scalar(LatticeSpec::cubic(2).unwrap()).to_document();
        doc.links.pop();
        let text = serde_json::to_string(&doc).unwrap();
        assert!(HoppingField::from_json(&text).is_err());
        let bad = r#"{"dims":[2,2,2],"links":[],"onsite":[],"extra":1}"#;
        assert!(HoppingField::from_json(bad).is_err());
    }

    fn arb_gauge(l: LatticeSpec) -> impl Strategy<Value = GaugeTransform> {
        any::<u64>().prop_map(move |seed| GaugeTransform::random(l, seed))
    }

    proptest! {
        #[test]
        fn gauge_round_trip(g in arb_gauge(LatticeSpec::cubic(4).unwrap())) {
            let k = HoppingField::staggered(g.lattice().to_owned()).unwrap();
            let back = k.apply_gauge(&g).unwrap().apply_gauge(&g.inverse()).unwrap();
            prop_assert!(back.max_difference(&k) < EXACT_TOL);
        }

        #[test]
        fn gauge_preserves_hermiticity_and_modulus(g in arb_gauge(LatticeSpec::new([4, 2, 6]).unwrap())) {
            let l = *g.lattice();
            let k = HoppingField::staggered(l).unwrap().add_susskind_mass(0.4).unwrap();
            let t = k.apply_gauge(&g).unwrap();
            prop_assert!(t.check_hermiticity());
            prop_assert!(t.is_unimodular());
        }

        #[test]
        fn row_holonomies_are_gauge_invariant(g in arb_gauge(LatticeSpec::cubic(4).unwrap()), c in prop::array::uniform3(0i64..4), axis in 0usize..3) {
            let l = *g.lattice();
            let k = HoppingField::staggered(l).unwrap();
            let t = k.apply_gauge(&g).unwrap();
            let s = l.site(c);
            prop_assert!((k.row_holonomy(s, axis) - t.row_holonomy(s, axis)).norm() < 1e-11);
        }
    }
}
