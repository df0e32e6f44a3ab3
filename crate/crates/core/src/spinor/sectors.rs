use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{LatticeSpec, Site};
use crate::spectral::{WaveDocument, WaveFunction};

use super::fft::{fft3, in_reduced_zone};

/// Largest relative out-of-zone weight accepted by [`recompose`].
pub const LEAKAGE_TOL: f64 = 1e-10;

/// Number of component fields: four splits the x and y momenta, eight
/// splits all three axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SectorCount {
    #[serde(rename = "4")]
    Four,
    #[serde(rename = "8")]
    Eight,
}

impl SectorCount {
    pub fn count(self) -> usize {
        match self {
            SectorCount::Four => 4,
            SectorCount::Eight => 8,
        }
    }

    /// Number of axes whose momenta are split in two.
    pub fn split_axes(self) -> usize {
        match self {
            SectorCount::Four => 2,
            SectorCount::Eight => 3,
        }
    }

    pub fn from_count(n: usize) -> Result<SectorCount> {
        match n {
            4 => Ok(SectorCount::Four),
            8 => Ok(SectorCount::Eight),
            _ => Err(Error::pre(format!("sector count must be 4 or 8, got {n}"))),
        }
    }

    /// Bits `(A, B[, C])` of sector `index`; `A` is the most significant.
    pub fn bits(self, index: usize) -> Vec<usize> {
        let d = self.split_axes();
        (0..d).map(|axis| (index >> (d - 1 - axis)) & 1).collect()
    }

    /// Label such as `"10"` or `"011"`.
    pub fn label(self, index: usize) -> String {
        self.bits(index).iter().map(|b| b.to_string()).collect()
    }

    fn index_of_label(self, label: &str) -> Option<usize> {
        if label.len() != self.split_axes() {
            return None;
        }
        label.chars().try_fold(0usize, |acc, c| match c {
            '0' => Some(acc * 2),
            '1' => Some(acc * 2 + 1),
            _ => None,
        })
    }

    /// `(-1)^(A x + B y [+ C z])` at `s`.
    pub fn sign(self, index: usize, s: Site) -> f64 {
        let c = s.coords();
        let exponent: usize = self.bits(index).iter().zip(c).map(|(b, x)| b * x).sum();
        if exponent % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// Sector that momentum bin `m` belongs to.
    fn sector_of(self, lattice: &LatticeSpec, m: [usize; 3]) -> usize {
        let dims = lattice.dims();
        (0..self.split_axes()).fold(0, |acc, axis| {
            acc * 2 + usize::from(!in_reduced_zone(m[axis], dims[axis]))
        })
    }
}

/// Band-limited component fields `ψ_AB` with `ψ = Σ ψ_AB (-1)^(Ax+By)`
/// (and the analogous three-bit form for eight sectors).
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentFields {
    sectors: SectorCount,
    lattice: LatticeSpec,
    fields: Vec<Vec<C64>>,
}

impl ComponentFields {
    pub fn new(sectors: SectorCount, lattice: LatticeSpec, fields: Vec<Vec<C64>>) -> Result<ComponentFields> {
        lattice.require_even("component fields")?;
        if fields.len() != sectors.count() || fields.iter().any(|f| f.len() != lattice.volume()) {
            return Err(Error::pre(format!(
                "expected {} fields of {} amplitudes each",
                sectors.count(),
                lattice.volume()
            )));
        }
        Ok(ComponentFields {
            sectors,
            lattice,
            fields,
        })
    }

    pub fn zeros(sectors: SectorCount, lattice: LatticeSpec) -> Result<ComponentFields> {
        Self::new(
            sectors,
            lattice,
            vec![vec![C64::new(0.0, 0.0); lattice.volume()]; sectors.count()],
        )
    }

    pub fn sectors(&self) -> SectorCount {
        self.sectors
    }

    pub fn lattice(&self) -> &LatticeSpec {
        &self.lattice
    }

    pub fn field(&self, index: usize) -> &[C64] {
        &self.fields[index]
    }

    pub(crate) fn fields(&self) -> &[Vec<C64>] {
        &self.fields
    }

    pub fn sector_norms_sqr(&self) -> Vec<f64> {
        self.fields
            .iter()
            .map(|f| f.iter().map(|a| a.norm_sqr()).sum())
            .collect()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.sector_norms_sqr().iter().sum()
    }

    /// One document per sector, tagged with its label.
    pub fn to_documents(&self) -> Vec<WaveDocument> {
        self.fields
            .iter()
            .enumerate()
            .map(|(i, f)| WaveDocument {
                dims: self.lattice.dims(),
                sector: Some(self.sectors.label(i)),
                amplitudes: f.iter().map(|a| [a.re, a.im]).collect(),
            })
            .collect()
    }

    pub fn from_documents(docs: &[WaveDocument]) -> Result<ComponentFields> {
        let sectors = SectorCount::from_count(docs.len())?;
        let lattice = LatticeSpec::new(docs[0].dims)?;
        let mut fields = vec![Vec::new(); docs.len()];
        for doc in docs {
            if doc.dims != lattice.dims() {
                return Err(Error::LatticeMismatch(lattice.dims(), doc.dims));
            }
            let label = doc
                .sector
                .as_deref()
                .ok_or_else(|| Error::Format("component document without a sector tag".into()))?;
            let i = sectors
                .index_of_label(label)
                .ok_or_else(|| Error::Format(format!("unknown sector tag {label:?}")))?;
            if !fields[i].is_empty() {
                return Err(Error::Format(format!("sector {label} given twice")));
            }
            fields[i] = doc.amplitudes.iter().map(|[re, im]| C64::new(*re, *im)).collect();
        }
        Self::new(sectors, lattice, fields)
    }
}

/// Splits `ψ` by momentum: each Fourier mode goes to the sector whose
/// π-shifts bring it into the reduced zone `(-π/2, π/2]` on the split axes.
pub fn project_components(psi: &WaveFunction, sectors: SectorCount) -> Result<ComponentFields> {
    let lattice = *psi.lattice();
    lattice.require_even("sector projection")?;
    let mut spectrum = psi.amplitudes().to_vec();
    fft3(&lattice, &mut spectrum, false);
    let mut pieces = vec![vec![C64::new(0.0, 0.0); lattice.volume()]; sectors.count()];
    for (i, v) in spectrum.iter().enumerate() {
        let m = lattice.site_at(i).coords();
        pieces[sectors.sector_of(&lattice, m)][i] = *v;
    }
    for (index, piece) in pieces.iter_mut().enumerate() {
        fft3(&lattice, piece, true);
        for (i, v) in piece.iter_mut().enumerate() {
            *v *= sectors.sign(index, lattice.site_at(i));
        }
    }
    ComponentFields::new(sectors, lattice, pieces)
}

/// Relative weight of a field outside the reduced zone.
pub(crate) fn leakage(lattice: &LatticeSpec, field: &[C64], split_axes: usize) -> f64 {
    let mut spectrum = field.to_vec();
    fft3(lattice, &mut spectrum, false);
    let dims = lattice.dims();
    let (mut outside, mut total) = (0.0, 0.0);
    for (i, v) in spectrum.iter().enumerate() {
        let m = lattice.site_at(i).coords();
        total += v.norm_sqr();
        if (0..split_axes).any(|ax| !in_reduced_zone(m[ax], dims[ax])) {
            outside += v.norm_sqr();
        }
    }
    if total == 0.0 {
        0.0
    } else {
        (outside / total).sqrt()
    }
}

/// `ψ = Σ ψ_AB · (-1)^(Ax+By…)`. Rejects fields that are not band-limited.
pub fn recompose(c: &ComponentFields) -> Result<WaveFunction> {
    let lattice = c.lattice;
    for (index, f) in c.fields.iter().enumerate() {
        let leak = leakage(&lattice, f, c.sectors.split_axes());
        if leak > LEAKAGE_TOL {
            return Err(Error::pre(format!(
                "sector {} is not band-limited (relative leakage {leak:.3e})",
                c.sectors.label(index)
            )));
        }
    }
    Ok(recompose_unchecked(c))
}

pub(crate) fn recompose_unchecked(c: &ComponentFields) -> WaveFunction {
    WaveFunction::from_fn(c.lattice, |s| {
        let i = c.lattice.index(s);
        c.fields
            .iter()
            .enumerate()
            .map(|(index, f)| f[i] * c.sectors.sign(index, s))
            .sum()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::gaussian_packet;
    use proptest::prelude::*;

    fn smooth(l: LatticeSpec) -> WaveFunction {
        gaussian_packet(l, [8.0, 8.0, 8.0], 3.0, [0.0; 3]).unwrap()
    }

    #[test]
    fn smooth_packet_stays_in_sector_00() {
        let l = LatticeSpec::cubic(16).unwrap();
        let c = project_components(&smooth(l), SectorCount::Four).unwrap();
        let n = c.sector_norms_sqr();
        assert!((n[0] - 1.0).abs() < 1e-12);
        assert!(n[1..].iter().all(|&v| v < 1e-12), "{n:?}");
    }

    #[test]
    fn alternating_packet_lands_in_sector_10() {
        let l = LatticeSpec::cubic(16).unwrap();
        let psi = smooth(l).map(|s, a| a * if s.x() % 2 == 0 { 1.0 } else { -1.0 });
        let c = project_components(&psi, SectorCount::Four).unwrap();
        let n = c.sector_norms_sqr();
        assert_eq!(SectorCount::Four.label(2), "10");
        assert!((n[2] - 1.0).abs() < 1e-12, "{n:?}");
    }

    #[test]
    fn single_mode_recomposes_to_signed_plane_wave() {
        let l = LatticeSpec::cubic(8).unwrap();
        let k = 2.0 * std::f64::consts::PI / 8.0;
        let mut c = ComponentFields::zeros(SectorCount::Four, l).unwrap();
        c.fields[1] = l.sites().map(|s| C64::from_polar(1.0, k * s.z() as f64)).collect();
        let psi = recompose(&c).unwrap();
        for s in l.sites() {
            let expect = C64::from_polar(1.0, k * s.z() as f64) * if s.y() % 2 == 0 { 1.0 } else { -1.0 };
            assert!((psi.at(s) - expect).norm() < 1e-14);
        }
    }

    #[test]
    fn zero_fields_recompose_to_zero() {
        let l = LatticeSpec::cubic(4).unwrap();
        let psi = recompose(&ComponentFields::zeros(SectorCount::Eight, l).unwrap()).unwrap();
        assert_eq!(psi.norm(), 0.0);
    }

    #[test]
    fn leaky_sector_rejected() {
        let l = LatticeSpec::cubic(4).unwrap();
        let mut c = ComponentFields::zeros(SectorCount::Four, l).unwrap();
        c.fields[0] = l.sites().map(|s| C64::new(if s.x() % 2 == 0 { 1.0 } else { -1.0 }, 0.0)).collect();
        assert!(matches!(recompose(&c), Err(Error::Precondition(_))));
    }

    #[test]
    fn odd_lattice_rejected() {
        let l = LatticeSpec::new([4, 3, 4]).unwrap();
        assert!(project_components(&WaveFunction::random(l, 0), SectorCount::Four).is_err());
    }

    #[test]
    fn documents_round_trip() {
        let l = LatticeSpec::cubic(4).unwrap();
        let c = project_components(&WaveFunction::random(l, 8), SectorCount::Eight).unwrap();
        let docs = c.to_documents();
        assert_eq!(docs[5].sector.as_deref(), Some("101"));
        let text = serde_json::to_string(&docs).unwrap();
        let back: Vec<WaveDocument> = serde_json::from_str(&text).unwrap();
        assert_eq!(ComponentFields::from_documents(&back).unwrap(), c);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn parseval_and_round_trip(seed in 0u64..10_000, eight in any::<bool>(), dims in prop::sample::select(vec![[4usize, 4, 4], [8, 4, 6], [6, 6, 2]])) {
            let l = LatticeSpec::new(dims).unwrap();
            let sectors = if eight { SectorCount::Eight } else { SectorCount::Four };
            let psi = WaveFunction::random(l, seed);
            let c = project_components(&psi, sectors).unwrap();
            prop_assert!((c.norm_sqr() - 1.0).abs() < 1e-12);
            let back = recompose(&c).unwrap();
            prop_assert!(back.max_abs_diff(&psi) < 1e-12);
        }
    }
}
