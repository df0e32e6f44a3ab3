use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{LatticeSpec, Site};

/// Complex amplitude per site, in lattice index order.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveFunction {
    lattice: LatticeSpec,
    amp: Vec<C64>,
}

impl WaveFunction {
    pub fn new(lattice: LatticeSpec, amp: Vec<C64>) -> Result<WaveFunction> {
        if amp.len() != lattice.volume() {
            return Err(Error::pre(format!(
                "wave function needs {} amplitudes, got {}",
                lattice.volume(),
                amp.len()
            )));
        }
        if amp.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::pre("wave function has non-finite amplitudes"));
        }
        Ok(WaveFunction { lattice, amp })
    }

    pub(crate) fn from_parts(lattice: LatticeSpec, amp: Vec<C64>) -> WaveFunction {
        debug_assert_eq!(amp.len(), lattice.volume());
        WaveFunction { lattice, amp }
    }

    pub fn from_fn(lattice: LatticeSpec, f: impl Fn(Site) -> C64) -> WaveFunction {
        WaveFunction {
            lattice,
            amp: lattice.sites().map(f).collect(),
        }
    }

    pub fn zeros(lattice: LatticeSpec) -> WaveFunction {
        Self::from_fn(lattice, |_| C64::new(0.0, 0.0))
    }

    /// Normalized state with independent standard-normal real and imaginary parts.
    pub fn random(lattice: LatticeSpec, seed: u64) -> WaveFunction {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut normal = || {
            // Box-Muller
            let u: f64 = rng.random_range(f64::EPSILON..1.0);
            let v: f64 = rng.random::<f64>();
            (-2.0 * u.ln()).sqrt() * (2.0 * std::f64::consts::PI * v).cos()
        };
        let amp = (0..lattice.volume())
            .map(|_| C64::new(normal(), normal()))
            .collect();
        WaveFunction { lattice, amp }.normalized()
    }

    pub fn lattice(&self) -> &LatticeSpec {
        &self.lattice
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amp
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amp
    }

    pub fn at(&self, s: Site) -> C64 {
        self.amp[self.lattice.index(s)]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amp.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalized(&self) -> WaveFunction {
        let n = self.norm();
        WaveFunction {
            lattice: self.lattice,
            amp: self.amp.iter().map(|a| a / n).collect(),
        }
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &WaveFunction) -> C64 {
        self.amp.iter().zip(&other.amp).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn scaled(&self, c: C64) -> WaveFunction {
        WaveFunction {
            lattice: self.lattice,
            amp: self.amp.iter().map(|a| a * c).collect(),
        }
    }

    pub fn map(&self, f: impl Fn(Site, C64) -> C64) -> WaveFunction {
        WaveFunction {
            lattice: self.lattice,
            amp: self
                .amp
                .iter()
                .enumerate()
                .map(|(i, &a)| f(self.lattice.site_at(i), a))
                .collect(),
        }
    }

    pub fn sub(&self, other: &WaveFunction) -> WaveFunction {
        WaveFunction {
            lattice: self.lattice,
            amp: self.amp.iter().zip(&other.amp).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn max_abs_diff(&self, other: &WaveFunction) -> f64 {
        self.amp
            .iter()
            .zip(&other.amp)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn to_document(&self) -> WaveDocument {
        WaveDocument {
            dims: self.lattice.dims(),
            sector: None,
            amplitudes: self.amp.iter().map(|a| [a.re, a.im]).collect(),
        }
    }

    pub fn from_document(doc: &WaveDocument) -> Result<WaveFunction> {
        let lattice = LatticeSpec::new(doc.dims)?;
        Self::new(
            lattice,
            doc.amplitudes.iter().map(|[re, im]| C64::new(*re, *im)).collect(),
        )
    }
}

/// JSON layout shared by wave functions and spinor component fields:
/// amplitudes as `[re, im]` pairs in lattice index order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WaveDocument {
    pub dims: [usize; 3],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sector: Option<String>,
    pub amplitudes: Vec<[f64; 2]>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_states_are_normalized_and_seeded() {
        let l = LatticeSpec::cubic(4).unwrap();
        let a = WaveFunction::random(l, 5);
        assert!((a.norm() - 1.0).abs() < 1e-14);
        assert_eq!(a, WaveFunction::random(l, 5));
        assert_ne!(a, WaveFunction::random(l, 6));
    }

    #[test]
    fn rejects_wrong_length_and_nan() {
        let l = LatticeSpec::cubic(2).unwrap();
        assert!(WaveFunction::new(l, vec![C64::new(1.0, 0.0); 7]).is_err());
        let mut v = vec![C64::new(1.0, 0.0); 8];
        v[3].im = f64::NAN;
        assert!(WaveFunction::new(l, v).is_err());
    }

    #[test]
    fn document_round_trip() {
        let l = LatticeSpec::new([2, 4, 2]).unwrap();
        let psi = WaveFunction::random(l, 1);
        let text = serde_json::to_string(&psi.to_document()).unwrap();
        let back: WaveDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(WaveFunction::from_document(&back).unwrap(), psi);
    }
}
