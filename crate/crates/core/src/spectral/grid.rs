//! Periodic-box grid with cached FFT plans and the wavenumber lattice.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftDirection, FftPlanner};

use super::SpectralError;

/// Shared handle to a grid; fields keep one of these.
pub type Grid = Arc<SpectralGrid>;

/// Uniform periodic grid on `[0, L)^3` with `N` points per axis.
///
/// The wavenumber lattice is `{2π k / L : k ∈ [-N/2, N/2)^3}`; the axis index
/// `i` maps to the integer mode `i` for `i < N/2` and `i - N` otherwise, so the
/// zero wavenumber appears exactly once (at index 0).
pub struct SpectralGrid {
    n: usize,
    box_length: f64,
    /// Per-axis wavenumber component, indexed by the FFT axis index.
    xi: Vec<f64>,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    /// Recycled work buffers, bucketed by component count (1, 3, 9 × N³);
    /// spectral kernels and field temporaries churn through several per
    /// call and fresh pages are the single largest overhead.
    pool: std::sync::Mutex<[Vec<Vec<Complex64>>; 3]>,
    pool_f64: std::sync::Mutex<[Vec<Vec<f64>>; 3]>,
}

fn bucket_of(len: usize, unit: usize) -> Option<(usize, usize)> {
    match len / unit {
        1 if len == unit => Some((0, 16)),
        3 if len == 3 * unit => Some((1, 6)),
        9 if len == 9 * unit => Some((2, 2)),
        _ => None,
    }
}

impl std::fmt::Debug for SpectralGrid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpectralGrid")
            .field("n", &self.n)
            .field("box_length", &self.box_length)
            .finish()
    }
}

impl PartialEq for SpectralGrid {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.box_length == other.box_length
    }
}

/// Build a grid handle. `points_per_axis` must be even and at least 8;
/// `box_length` must be positive and finite.
pub fn make_grid(points_per_axis: usize, box_length: f64) -> Result<Grid, SpectralError> {
    SpectralGrid::new(points_per_axis, box_length).map(Arc::new)
}

impl SpectralGrid {
    pub fn new(points_per_axis: usize, box_length: f64) -> Result<Self, SpectralError> {
        if points_per_axis < 8 || points_per_axis % 2 != 0 {
            return Err(SpectralError::InvalidGridSize(points_per_axis));
        }
        if !(box_length > 0.0) || !box_length.is_finite() {
            return Err(SpectralError::InvalidBoxLength(box_length));
        }
        let n = points_per_axis;
        let scale = 2.0 * std::f64::consts::PI / box_length;
        let xi = (0..n)
            .map(|i| {
                let k = if i < n / 2 { i as i64 } else { i as i64 - n as i64 };
                k as f64 * scale
            })
            .collect();
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft(n, FftDirection::Forward);
        let inv = planner.plan_fft(n, FftDirection::Inverse);
        Ok(Self {
            n,
            box_length,
            xi,
            fwd,
            inv,
            pool: std::sync::Mutex::new([Vec::new(), Vec::new(), Vec::new()]),
            pool_f64: std::sync::Mutex::new([Vec::new(), Vec::new(), Vec::new()]),
        })
    }

    /// Borrow a work buffer of `mult` components (contents arbitrary).
    pub(crate) fn take_sized(&self, mult: usize) -> Vec<Complex64> {
        let bucket = match mult {
            1 => 0,
            3 => 1,
            9 => 2,
            _ => return vec![Complex64::default(); mult * self.len()],
        };
        self.pool.lock().unwrap()[bucket]
            .pop()
            .unwrap_or_else(|| vec![Complex64::default(); mult * self.len()])
    }

    /// Return a work buffer to its bucket (dropped when full or odd-sized).
    pub(crate) fn give_sized(&self, buf: Vec<Complex64>) {
        if let Some((bucket, cap)) = bucket_of(buf.len(), self.len()) {
            let mut pool = self.pool.lock().unwrap();
            if pool[bucket].len() < cap {
                pool[bucket].push(buf);
            }
        }
    }

    /// Borrow a scalar work buffer (contents arbitrary).
    pub(crate) fn take_buf(&self) -> Vec<Complex64> {
        self.take_sized(1)
    }

    /// Return a scalar work buffer.
    pub(crate) fn give_buf(&self, buf: Vec<Complex64>) {
        self.give_sized(buf);
    }

    /// Borrow a real sample buffer of `mult` components.
    pub(crate) fn take_f64_sized(&self, mult: usize) -> Vec<f64> {
        let bucket = match mult {
            1 => 0,
            3 => 1,
            9 => 2,
            _ => return vec![0.0; mult * self.len()],
        };
        self.pool_f64.lock().unwrap()[bucket]
            .pop()
            .unwrap_or_else(|| vec![0.0; mult * self.len()])
    }

    /// Return a real sample buffer to its bucket.
    pub(crate) fn give_f64_sized(&self, buf: Vec<f64>) {
        if let Some((bucket, cap)) = bucket_of(buf.len(), self.len()) {
            let mut pool = self.pool_f64.lock().unwrap();
            // real buffers are smaller; allow more of them
            if pool[bucket].len() < 2 * cap {
                pool[bucket].push(buf);
            }
        }
    }

    /// Borrow a scalar real buffer.
    pub(crate) fn take_f64(&self) -> Vec<f64> {
        self.take_f64_sized(1)
    }

    /// Return a scalar real buffer.
    pub(crate) fn give_f64(&self, buf: Vec<f64>) {
        self.give_f64_sized(buf);
    }

    pub fn points_per_axis(&self) -> usize {
        self.n
    }

    pub fn box_length(&self) -> f64 {
        self.box_length
    }

    /// Number of grid points / spectral coefficients per component.
    pub fn len(&self) -> usize {
        self.n * self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Grid spacing `L / N`.
    pub fn dx(&self) -> f64 {
        self.box_length / self.n as f64
    }

    /// Physical cell volume `(L/N)^3`, the quadrature weight per sample.
    pub fn cell_volume(&self) -> f64 {
        self.dx().powi(3)
    }

    /// Box volume `L^3`, the Plancherel weight per spectral coefficient.
    pub fn volume(&self) -> f64 {
        self.box_length.powi(3)
    }

    /// Wavenumber component along one axis for a given axis index.
    #[inline]
    pub fn xi_axis(&self, index: usize) -> f64 {
        self.xi[index]
    }

    /// The whole per-axis wavenumber table (hot loops index it directly
    /// rather than decoding flat indices per element).
    #[inline]
    pub fn xi_table(&self) -> &[f64] {
        &self.xi
    }

    /// Integer mode along one axis for a given axis index.
    #[inline]
    pub fn mode_axis(&self, index: usize) -> i64 {
        let n = self.n as i64;
        let i = index as i64;
        if i < n / 2 {
            i
        } else {
            i - n
        }
    }

    /// Largest retained integer mode under the 2/3 dealiasing rule.
    pub fn dealias_limit(&self) -> i64 {
        (self.n / 3) as i64
    }

    /// Flat index of the mode with axis indices `(i0, i1, i2)`.
    #[inline]
    pub fn flat(&self, i0: usize, i1: usize, i2: usize) -> usize {
        (i0 * self.n + i1) * self.n + i2
    }

    /// Axis indices of a flat index.
    #[inline]
    pub fn unflat(&self, idx: usize) -> (usize, usize, usize) {
        let i2 = idx % self.n;
        let rest = idx / self.n;
        (rest / self.n, rest % self.n, i2)
    }

    /// Wavenumber vector of a flat index.
    #[inline]
    pub fn xi_vec(&self, idx: usize) -> [f64; 3] {
        let (i0, i1, i2) = self.unflat(idx);
        [self.xi[i0], self.xi[i1], self.xi[i2]]
    }

    /// |ξ|² of a flat index.
    #[inline]
    pub fn xi_sq(&self, idx: usize) -> f64 {
        let [a, b, c] = self.xi_vec(idx);
        a * a + b * b + c * c
    }

    /// In-place 3D FFT over one component. Forward maps physical samples to
    /// Fourier-series coefficients (normalized by 1/N³); inverse maps back.
    pub fn fft3(&self, data: &mut [Complex64], direction: FftDirection) {
        assert_eq!(data.len(), self.len(), "component length mismatch");
        let plan = match direction {
            FftDirection::Forward => &self.fwd,
            FftDirection::Inverse => &self.inv,
        };
        self.fft_axis2(data, plan);
        self.fft_axis1(data, plan);
        self.fft_axis0(data, plan);
        if direction == FftDirection::Forward {
            let norm = 1.0 / self.len() as f64;
            data.par_chunks_mut(self.n * self.n).for_each(|chunk| {
                for v in chunk {
                    *v *= norm;
                }
            });
        }
    }

    /// Lines along the contiguous axis, parallelized per plane so rayon
    /// tasks stay coarse.
    fn fft_axis2(&self, data: &mut [Complex64], plan: &Arc<dyn Fft<f64>>) {
        let n = self.n;
        let scratch_len = plan.get_inplace_scratch_len();
        data.par_chunks_exact_mut(n * n).for_each_init(
            || vec![Complex64::default(); scratch_len],
            |scratch, plane| {
                for line in plane.chunks_exact_mut(n) {
                    plan.process_with_scratch(line, scratch);
                }
            },
        );
    }

    /// Lines with stride N, per contiguous i0-plane: transpose the N×N
    /// plane (cache resident), run contiguous lines, transpose back.
    fn fft_axis1(&self, data: &mut [Complex64], plan: &Arc<dyn Fft<f64>>) {
        let n = self.n;
        let scratch_len = plan.get_inplace_scratch_len();
        data.par_chunks_exact_mut(n * n).for_each_init(
            || vec![Complex64::default(); scratch_len],
            |scratch, plane| {
                transpose_square(plane, n);
                for line in plane.chunks_exact_mut(n) {
                    plan.process_with_scratch(line, scratch);
                }
                transpose_square(plane, n);
            },
        );
    }

    /// Lines with stride N²: per fixed i1, gather the N×N (i0, i2) tile by
    /// contiguous row copies, transpose it so the i0 lines are contiguous,
    /// transform, and scatter back the same way. The whole working set is
    /// one tile per task.
    fn fft_axis0(&self, data: &mut [Complex64], plan: &Arc<dyn Fft<f64>>) {
        let n = self.n;
        let scratch_len = plan.get_inplace_scratch_len();
        // parallelize over bands of i1 without overlapping mutable access:
        // each task owns a tile and writes back disjoint rows
        let data_ptr = SendPtr(data.as_mut_ptr());
        (0..n).into_par_iter().for_each_init(
            || (vec![Complex64::default(); n * n], vec![Complex64::default(); scratch_len]),
            |(tile, scratch), i1| {
                let data = data_ptr;
                for i0 in 0..n {
                    let row = unsafe {
                        std::slice::from_raw_parts(data.0.add((i0 * n + i1) * n), n)
                    };
                    tile[i0 * n..(i0 + 1) * n].copy_from_slice(row);
                }
                transpose_square(tile, n);
                for line in tile.chunks_exact_mut(n) {
                    plan.process_with_scratch(line, scratch);
                }
                transpose_square(tile, n);
                for i0 in 0..n {
                    let row = unsafe {
                        std::slice::from_raw_parts_mut(data.0.add((i0 * n + i1) * n), n)
                    };
                    row.copy_from_slice(&tile[i0 * n..(i0 + 1) * n]);
                }
            },
        );
    }
}

/// Raw-pointer wrapper so disjoint strided rows can be written from rayon
/// tasks; each i1 task touches only rows `(·, i1, ·)`, which never overlap.
#[derive(Clone, Copy)]
struct SendPtr(*mut Complex64);
unsafe impl Send for SendPtr {}
unsafe impl Sync for SendPtr {}

/// In-place transpose of an N×N tile, blocked for cache lines.
fn transpose_square(tile: &mut [Complex64], n: usize) {
    const B: usize = 8;
    let mut ia = 0;
    while ia < n {
        let a_end = (ia + B).min(n);
        // diagonal block
        for i in ia..a_end {
            for j in (i + 1)..a_end {
                tile.swap(i * n + j, j * n + i);
            }
        }
        let mut ib = ia + B;
        while ib < n {
            let b_end = (ib + B).min(n);
            for i in ia..a_end {
                for j in ib..b_end {
                    tile.swap(i * n + j, j * n + i);
                }
            }
            ib += B;
        }
        ia += B;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_odd_or_small_n_and_bad_length() {
        assert!(make_grid(7, 1.0).is_err());
        assert!(make_grid(6, 1.0).is_err());
        assert!(make_grid(8, 0.0).is_err());
        assert!(make_grid(8, -1.0).is_err());
        assert!(make_grid(8, f64::NAN).is_err());
    }

    #[test]
    fn wavenumbers_scale_with_box_length() {
        let g = make_grid(8, 2.0 * std::f64::consts::PI).unwrap();
        // integer lattice in [-4, 4)
        let modes: Vec<i64> = (0..8).map(|i| g.mode_axis(i)).collect();
        assert_eq!(modes, vec![0, 1, 2, 3, -4, -3, -2, -1]);
        assert!((g.xi_axis(1) - 1.0).abs() < 1e-15);

        let g = make_grid(16, 4.0 * std::f64::consts::PI).unwrap();
        assert!((g.xi_axis(1) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn fft_round_trip_is_identity() {
        use rand::{Rng, SeedableRng};
        let g = make_grid(8, 1.0).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let orig: Vec<Complex64> =
            (0..g.len()).map(|_| Complex64::new(rng.gen::<f64>() - 0.5, 0.0)).collect();
        let mut data = orig.clone();
        g.fft3(&mut data, FftDirection::Forward);
        g.fft3(&mut data, FftDirection::Inverse);
        let max_err = data
            .iter()
            .zip(&orig)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0_f64, f64::max);
        assert!(max_err < 1e-13, "round trip error {max_err}");
    }

    #[test]
    fn forward_fft_of_cosine_hits_two_conjugate_modes() {
        let g = make_grid(8, 2.0 * std::f64::consts::PI).unwrap();
        let n = g.points_per_axis();
        let mut data = vec![Complex64::default(); g.len()];
        for i0 in 0..n {
            let x = i0 as f64 * g.dx();
            for i1 in 0..n {
                for i2 in 0..n {
                    data[g.flat(i0, i1, i2)] = Complex64::new(x.cos(), 0.0);
                }
            }
        }
        g.fft3(&mut data, FftDirection::Forward);
        for idx in 0..g.len() {
            let (i0, i1, i2) = g.unflat(idx);
            let expect = if (i0 == 1 || i0 == n - 1) && i1 == 0 && i2 == 0 {
                0.5
            } else {
                0.0
            };
            assert!(
                (data[idx] - Complex64::new(expect, 0.0)).norm() < 1e-13,
                "mode ({i0},{i1},{i2}) = {}",
                data[idx]
            );
        }
    }
}
