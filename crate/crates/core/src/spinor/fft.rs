use num_complex::Complex64 as C64;
use rustfft::FftPlanner;

use crate::lattice::LatticeSpec;

/// In-place 3D discrete Fourier transform in lattice index order.
/// The forward transform is unnormalized; the inverse divides by the volume.
pub(crate) fn fft3(lattice: &LatticeSpec, data: &mut [C64], inverse: bool) {
    let dims = lattice.dims();
    let strides = [1, dims[0], dims[0] * dims[1]];
    let mut planner = FftPlanner::new();
    for axis in 0..3 {
        let n = dims[axis];
        let fft = if inverse {
            planner.plan_fft_inverse(n)
        } else {
            planner.plan_fft_forward(n)
        };
        let stride = strides[axis];
        let mut line = vec![C64::new(0.0, 0.0); n];
        for start in 0..data.len() {
            // visit each line once, from the site whose coordinate on `axis` is 0
            if (start / stride) % n != 0 {
                continue;
            }
            for (j, v) in line.iter_mut().enumerate() {
                *v = data[start + j * stride];
            }
            fft.process(&mut line);
            for (j, v) in line.iter().enumerate() {
                data[start + j * stride] = *v;
            }
        }
    }
    if inverse {
        let scale = 1.0 / data.len() as f64;
        data.iter_mut().for_each(|v| *v *= scale);
    }
}

/// Signed momentum label `m` in `(-L/2, L/2]` for FFT bin `m`.
pub(crate) fn centered(m: usize, l: usize) -> i64 {
    let m = m as i64;
    let l = l as i64;
    if 2 * m > l {
        m - l
    } else {
        m
    }
}

/// Whether `k = 2π m / L` lies in the half-open reduced zone `(-π/2, π/2]`.
pub(crate) fn in_reduced_zone(m: usize, l: usize) -> bool {
    let c = centered(m, l);
    4 * c > -(l as i64) && 4 * c <= l as i64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_plane_wave() {
        let l = LatticeSpec::new([4, 6, 2]).unwrap();
        let mut v: Vec<C64> = (0..48).map(|i| C64::new(i as f64, (i * i % 7) as f64)).collect();
        let orig = v.clone();
        fft3(&l, &mut v, false);
        fft3(&l, &mut v, true);
        for (a, b) in v.iter().zip(&orig) {
            assert!((a - b).norm() < 1e-12);
        }
        // e^{2πi·y/6} lands entirely in bin (0,1,0)
        let mut w: Vec<C64> = l
            .sites()
            .map(|s| C64::from_polar(1.0, 2.0 * std::f64::consts::PI * s.y() as f64 / 6.0))
            .collect();
        fft3(&l, &mut w, false);
        let hit = l.index(l.site([0, 1, 0]));
        for (i, a) in w.iter().enumerate() {
            let expect = if i == hit { 48.0 } else { 0.0 };
            assert!((a.norm() - expect).abs() < 1e-9);
        }
    }

    #[test]
    fn zone_is_half_open() {
        // L = 8: m_c ∈ {-1, 0, 1, 2}; k = π/2 belongs, k = -π/2 does not
        let inside: Vec<usize> = (0..8).filter(|&m| in_reduced_zone(m, 8)).collect();
        assert_eq!(inside, vec![0, 1, 2, 7]);
        assert_eq!((0..6).filter(|&m| in_reduced_zone(m, 6)).count(), 3);
    }
}
