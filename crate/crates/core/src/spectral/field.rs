//! Fields on a periodic grid: spectral storage, transforms, differential
//! operators, and L²-based seminorms.
//!
//! A `Field` stores Fourier-series coefficients `f̂(ξ)` so that
//! `f(x) = Σ_ξ f̂(ξ) e^{iξ·x}`; a `PhysicalField` stores the real samples on
//! the grid. Real-valued data corresponds to Hermitian coefficients,
//! `f̂(-ξ) = conj(f̂(ξ))`.

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftDirection;

use super::grid::Grid;
use super::SpectralError;

/// Highest derivative order any operator here accepts.
pub const MAX_DERIVATIVE_ORDER: u32 = 4;

/// Relative zero-mode mass above which mean-zero preconditions fail.
pub const MEAN_ZERO_TOL: f64 = 1e-13;

/// Tensor rank: 0 = scalar (1 component), 1 = vector (3), 2 = 3×3 tensor (9).
pub type Rank = u8;

/// Number of components carried by a field of the given rank.
pub fn components_for_rank(rank: Rank) -> usize {
    3usize.pow(rank as u32)
}

/// Spectral coefficients of a (real-valued) field, component-major.
///
/// Storage is recycled through the grid's buffer pool on clone and drop;
/// fields are pure values semantically.
#[derive(Debug)]
pub struct Field {
    grid: Grid,
    rank: Rank,
    data: Vec<Complex64>,
}

impl Clone for Field {
    fn clone(&self) -> Self {
        let mut data = self.grid.take_sized(self.components());
        data.copy_from_slice(&self.data);
        Self { grid: self.grid.clone(), rank: self.rank, data }
    }
}

impl Drop for Field {
    fn drop(&mut self) {
        self.grid.give_sized(std::mem::take(&mut self.data));
    }
}

/// Physical samples of a real field, component-major, row-major per component.
#[derive(Debug)]
pub struct PhysicalField {
    grid: Grid,
    rank: Rank,
    data: Vec<f64>,
}

impl Clone for PhysicalField {
    fn clone(&self) -> Self {
        let mut data = self.grid.take_f64_sized(self.components());
        data.copy_from_slice(&self.data);
        Self { grid: self.grid.clone(), rank: self.rank, data }
    }
}

impl Drop for PhysicalField {
    fn drop(&mut self) {
        self.grid.give_f64_sized(std::mem::take(&mut self.data));
    }
}

impl Field {
    pub fn zeros(grid: &Grid, rank: Rank) -> Self {
        assert!(rank <= 2, "rank must be 0, 1 or 2");
        let mut data = grid.take_sized(components_for_rank(rank));
        data.fill(Complex64::default());
        Self { grid: grid.clone(), rank, data }
    }

    /// Build directly from spectral coefficients.
    pub fn from_spectral(
        grid: &Grid,
        rank: Rank,
        data: Vec<Complex64>,
    ) -> Result<Self, SpectralError> {
        if rank > 2 {
            return Err(SpectralError::UnsupportedRank(rank));
        }
        if data.len() != components_for_rank(rank) * grid.len() {
            return Err(SpectralError::LengthMismatch {
                expected: components_for_rank(rank) * grid.len(),
                got: data.len(),
            });
        }
        if !data.iter().all(|v| v.re.is_finite() && v.im.is_finite()) {
            return Err(SpectralError::NonFinite);
        }
        Ok(Self { grid: grid.clone(), rank, data })
    }

    /// Forward transform of real samples into spectral coefficients.
    pub fn from_physical(phys: &PhysicalField) -> Result<Self, SpectralError> {
        if !phys.data.iter().all(|v| v.is_finite()) {
            return Err(SpectralError::NonFinite);
        }
        Ok(Self::from_physical_unchecked(phys))
    }

    pub(crate) fn from_physical_unchecked(phys: &PhysicalField) -> Self {
        let grid = &phys.grid;
        let len = grid.len();
        let mut data = grid.take_sized(phys.components());
        for c in 0..phys.components() {
            let dst = &mut data[c * len..(c + 1) * len];
            for (d, s) in dst.iter_mut().zip(phys.component(c)) {
                *d = Complex64::new(*s, 0.0);
            }
            grid.fft3(dst, FftDirection::Forward);
        }
        Self { grid: grid.clone(), rank: phys.rank, data }
    }

    /// Inverse transform into real samples. The imaginary residue of a
    /// Hermitian-symmetric field is at round-off level and is dropped.
    pub fn to_physical(&self) -> Result<PhysicalField, SpectralError> {
        if !self.is_finite() {
            return Err(SpectralError::NonFinite);
        }
        let mut out = PhysicalField::zeros(&self.grid, self.rank);
        let mut buf = self.grid.take_buf();
        for c in 0..self.components() {
            buf.copy_from_slice(self.component(c));
            self.grid.fft3(&mut buf, FftDirection::Inverse);
            for (d, s) in out.component_mut(c).iter_mut().zip(&buf) {
                *d = s.re;
            }
        }
        self.grid.give_buf(buf);
        Ok(out)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn rank(&self) -> Rank {
        self.rank
    }

    pub fn components(&self) -> usize {
        components_for_rank(self.rank)
    }

    pub fn component(&self, c: usize) -> &[Complex64] {
        let n = self.grid.len();
        &self.data[c * n..(c + 1) * n]
    }

    pub fn component_mut(&mut self, c: usize) -> &mut [Complex64] {
        let n = self.grid.len();
        &mut self.data[c * n..(c + 1) * n]
    }

    pub fn raw(&self) -> &[Complex64] {
        &self.data
    }

    pub fn raw_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }

    /// Zero-mode coefficient (the mean value) of each component.
    pub fn mean(&self) -> Vec<Complex64> {
        (0..self.components()).map(|c| self.component(c)[0]).collect()
    }

    /// L² mass of the constant part relative to the full L² norm.
    pub fn zero_mode_fraction(&self) -> f64 {
        let norm = self.l2_norm();
        if norm == 0.0 {
            return 0.0;
        }
        let vol = self.grid.volume().sqrt();
        let mean_sq: f64 = self.mean().iter().map(|m| m.norm_sqr()).sum();
        vol * mean_sq.sqrt() / norm
    }

    /// Largest deviation from Hermitian symmetry, relative to the largest
    /// coefficient. Zero (to round-off) for fields that are real in physical
    /// space.
    pub fn hermitian_residual(&self) -> f64 {
        let n = self.grid.points_per_axis();
        let mut worst = 0.0_f64;
        let mut scale = 0.0_f64;
        for c in 0..self.components() {
            let comp = self.component(c);
            for idx in 0..self.grid.len() {
                let (i0, i1, i2) = self.grid.unflat(idx);
                let j = self.grid.flat((n - i0) % n, (n - i1) % n, (n - i2) % n);
                let r = (comp[idx] - comp[j].conj()).norm();
                worst = worst.max(r);
                scale = scale.max(comp[idx].norm());
            }
        }
        if scale == 0.0 {
            0.0
        } else {
            worst / scale
        }
    }

    /// Spectral multiplication by `(iξ)^α` for a multi-index `α`.
    ///
    /// Along any axis with odd `α_i` the Nyquist plane `k_i = -N/2` is
    /// annihilated; an odd power of the signed wavenumber is not defined
    /// there for real data.
    pub fn derivative(&self, alpha: [u32; 3]) -> Result<Field, SpectralError> {
        let order: u32 = alpha.iter().sum();
        if order > MAX_DERIVATIVE_ORDER {
            return Err(SpectralError::DerivativeOrder(order));
        }
        let mut out = Field::zeros(&self.grid, self.rank);
        for c in 0..self.components() {
            let mut buf = self.grid.take_buf();
            self.component_derivative_into(c, alpha, &mut buf);
            out.component_mut(c).copy_from_slice(&buf);
            self.grid.give_buf(buf);
        }
        Ok(out)
    }

    /// Gradient raises the rank: scalar → vector, vector → tensor with
    /// component `(j, m) = ∂_j u_m` stored at index `3j + m`.
    pub fn gradient(&self) -> Result<Field, SpectralError> {
        if self.rank >= 2 {
            return Err(SpectralError::UnsupportedRank(self.rank));
        }
        let grid = self.grid.clone();
        let in_comps = self.components();
        let mut out = Field::zeros(&grid, self.rank + 1);
        for m in 0..in_comps {
            for j in 0..3 {
                let mut alpha = [0u32; 3];
                alpha[j] = 1;
                self.component_derivative_into(m, alpha, out.component_mut(j * in_comps + m));
            }
        }
        Ok(out)
    }

    /// Divergence lowers the rank: vector → scalar, tensor → vector by
    /// contracting the first index, `(div T)_m = Σ_j ∂_j T_{jm}`.
    pub fn divergence(&self) -> Result<Field, SpectralError> {
        if self.rank == 0 {
            return Err(SpectralError::UnsupportedRank(0));
        }
        let grid = self.grid.clone();
        let mut out = Field::zeros(&grid, self.rank - 1);
        let out_comps = out.components();
        let mut temp = grid.take_buf();
        for m in 0..out_comps {
            for j in 0..3 {
                let mut alpha = [0u32; 3];
                alpha[j] = 1;
                self.component_derivative_into(j * out_comps + m, alpha, &mut temp);
                let acc = out.component_mut(m);
                for (a, b) in acc.iter_mut().zip(&temp) {
                    *a += b;
                }
            }
        }
        grid.give_buf(temp);
        Ok(out)
    }

    /// Vector curl `(∇×u)_m = ε_{mjk} ∂_j u_k`.
    pub fn curl(&self) -> Result<Field, SpectralError> {
        if self.rank != 1 {
            return Err(SpectralError::UnsupportedRank(self.rank));
        }
        let mut out = Field::zeros(&self.grid, 1);
        // (m, j, k, sign) entries of the Levi-Civita symbol
        const EPS: [(usize, usize, usize, f64); 6] = [
            (0, 1, 2, 1.0),
            (0, 2, 1, -1.0),
            (1, 2, 0, 1.0),
            (1, 0, 2, -1.0),
            (2, 0, 1, 1.0),
            (2, 1, 0, -1.0),
        ];
        let mut temp = self.grid.take_buf();
        for &(m, j, k, sign) in &EPS {
            let mut alpha = [0u32; 3];
            alpha[j] = 1;
            self.component_derivative_into(k, alpha, &mut temp);
            let acc = out.component_mut(m);
            for (a, b) in acc.iter_mut().zip(&temp) {
                *a += sign * b;
            }
        }
        self.grid.give_buf(temp);
        Ok(out)
    }

    /// Laplacian: multiplication by `-|ξ|²` on every component.
    pub fn laplacian(&self) -> Result<Field, SpectralError> {
        let grid = self.grid.clone();
        let n = grid.points_per_axis();
        let xi = grid.xi_table();
        let mut out = self.clone();
        for c in 0..self.components() {
            out.component_mut(c).par_chunks_mut(n).enumerate().with_min_len(n).for_each(
                |(row, chunk)| {
                    let (x0, x1) = (xi[row / n], xi[row % n]);
                    let s01 = x0 * x0 + x1 * x1;
                    for (i2, v) in chunk.iter_mut().enumerate() {
                        *v *= -(s01 + xi[i2] * xi[i2]);
                    }
                },
            );
        }
        Ok(out)
    }

    /// Fractional power `Λ^s`: spectral multiplication by `|ξ|^s`.
    ///
    /// The zero mode maps to zero for every `s ≠ 0`. Negative powers require
    /// mean-zero input; a zero-mode fraction above `MEAN_ZERO_TOL` is an
    /// ill-posed inversion and is rejected.
    pub fn lambda_power(&self, s: f64) -> Result<Field, SpectralError> {
        if s < 0.0 {
            let frac = self.zero_mode_fraction();
            if frac > MEAN_ZERO_TOL {
                return Err(SpectralError::NonzeroMean(frac));
            }
        }
        let grid = self.grid.clone();
        let n = grid.points_per_axis();
        let xi = grid.xi_table();
        let mut out = self.clone();
        for c in 0..self.components() {
            out.component_mut(c).par_chunks_mut(n).enumerate().with_min_len(n).for_each(
                |(row, chunk)| {
                    let (x0, x1) = (xi[row / n], xi[row % n]);
                    let s01 = x0 * x0 + x1 * x1;
                    for (i2, v) in chunk.iter_mut().enumerate() {
                        let sq = s01 + xi[i2] * xi[i2];
                        if sq == 0.0 {
                            if s != 0.0 {
                                *v = Complex64::default();
                            }
                        } else {
                            *v *= sq.powf(0.5 * s);
                        }
                    }
                },
            );
        }
        Ok(out)
    }

    /// `‖∇^k f‖_{L²} = (Σ_ξ |ξ|^{2k} |f̂(ξ)|² L³)^{1/2}`, summed over components.
    pub fn sobolev_seminorm(&self, k: u32) -> Result<f64, SpectralError> {
        if k > MAX_DERIVATIVE_ORDER {
            return Err(SpectralError::DerivativeOrder(k));
        }
        let grid = &self.grid;
        let mut sum = 0.0;
        for c in 0..self.components() {
            for (idx, v) in self.component(c).iter().enumerate() {
                sum += grid.xi_sq(idx).powi(k as i32) * v.norm_sqr();
            }
        }
        Ok((sum * grid.volume()).sqrt())
    }

    /// Plain L² norm (`sobolev_seminorm` with k = 0).
    pub fn l2_norm(&self) -> f64 {
        self.sobolev_seminorm(0).expect("k = 0 is always valid")
    }

    /// `H^1` norm: `(‖f‖² + ‖∇f‖²)^{1/2}`.
    pub fn h1_norm(&self) -> f64 {
        let a = self.l2_norm();
        let b = self.sobolev_seminorm(1).expect("k = 1 is always valid");
        (a * a + b * b).sqrt()
    }

    /// L² inner product `∫ f·g dx`, real for Hermitian-symmetric data and
    /// summed over components.
    pub fn inner_product(&self, other: &Field) -> f64 {
        self.assert_same_shape(other);
        let mut sum = 0.0;
        for (a, b) in self.data.iter().zip(&other.data) {
            sum += (a * b.conj()).re;
        }
        sum * self.grid.volume()
    }

    /// Zero every mode with `|k_i| > limit` on some axis (sharp truncation).
    pub fn truncate_modes(&mut self, limit: i64) {
        let grid = self.grid.clone();
        let n = grid.points_per_axis();
        let keep: Vec<bool> = (0..n).map(|i| grid.mode_axis(i).abs() <= limit).collect();
        for c in 0..self.components() {
            self.component_mut(c).par_chunks_mut(n).enumerate().with_min_len(n).for_each(
                |(row, chunk)| {
                    if !(keep[row / n] && keep[row % n]) {
                        chunk.fill(Complex64::default());
                        return;
                    }
                    for (i2, v) in chunk.iter_mut().enumerate() {
                        if !keep[i2] {
                            *v = Complex64::default();
                        }
                    }
                },
            );
        }
    }

    /// Copy with the 2/3-rule truncation applied.
    pub fn dealiased(&self) -> Field {
        let mut out = self.clone();
        out.truncate_modes(self.grid.dealias_limit());
        out
    }

    /// Apply the 2/3-rule truncation in place.
    pub fn dealias_in_place(&mut self) {
        self.truncate_modes(self.grid.dealias_limit());
    }

    /// Subtract the mean (zero the ξ = 0 coefficient of every component).
    pub fn remove_mean(&mut self) {
        for c in 0..self.components() {
            self.component_mut(c)[0] = Complex64::default();
        }
    }

    /// Largest |ξ| carrying a coefficient above `threshold` (in max norm).
    pub fn spectral_radius(&self, threshold: f64) -> f64 {
        let grid = &self.grid;
        let mut r = 0.0_f64;
        for c in 0..self.components() {
            for (idx, v) in self.component(c).iter().enumerate() {
                if v.norm() > threshold {
                    r = r.max(grid.xi_sq(idx).sqrt());
                }
            }
        }
        r
    }

    fn component_derivative_into(&self, c: usize, alpha: [u32; 3], out: &mut [Complex64]) {
        let grid = &self.grid;
        let n = grid.points_per_axis();
        let order: u32 = alpha.iter().sum();
        let i_pow = Complex64::i().powu(order);
        let src = self.component(c);
        // per-axis factor tables, with the Nyquist zeroing baked in
        let table = |a: u32| -> Vec<f64> {
            (0..n)
                .map(|i| {
                    if a == 0 {
                        1.0
                    } else if a % 2 == 1 && i == n / 2 {
                        0.0
                    } else {
                        grid.xi_axis(i).powi(a as i32)
                    }
                })
                .collect()
        };
        let (t0, t1, t2) = (table(alpha[0]), table(alpha[1]), table(alpha[2]));
        out.par_chunks_mut(n).enumerate().with_min_len(n).for_each(|(row, chunk)| {
            let (i0, i1) = (row / n, row % n);
            let f01 = i_pow * (t0[i0] * t1[i1]);
            let base = row * n;
            for (i2, v) in chunk.iter_mut().enumerate() {
                *v = src[base + i2] * f01 * t2[i2];
            }
        });
    }

    /// Physical samples of `∂^α` applied to one component: the spectral
    /// multiplication and the inverse transform fused, with no intermediate
    /// field allocation. This is the hot path of the source assembly.
    pub fn derivative_samples(&self, c: usize, alpha: [u32; 3]) -> Result<Vec<f64>, SpectralError> {
        let order: u32 = alpha.iter().sum();
        if order > MAX_DERIVATIVE_ORDER {
            return Err(SpectralError::DerivativeOrder(order));
        }
        let mut buf = self.grid.take_buf();
        self.component_derivative_into(c, alpha, &mut buf);
        self.grid.fft3(&mut buf, FftDirection::Inverse);
        let mut out = self.grid.take_f64();
        extract_re(&buf, &mut out);
        self.grid.give_buf(buf);
        Ok(out)
    }

    /// Physical samples of `Δ` applied to one component (fused).
    pub fn laplacian_samples(&self, c: usize) -> Vec<f64> {
        let grid = &self.grid;
        let n = grid.points_per_axis();
        let src = self.component(c);
        let xi = grid.xi_table();
        let mut buf = grid.take_buf();
        buf.par_chunks_mut(n).enumerate().with_min_len(n).for_each(|(row, chunk)| {
            let (x0, x1) = (xi[row / n], xi[row % n]);
            let s01 = x0 * x0 + x1 * x1;
            let base = row * n;
            for (i2, v) in chunk.iter_mut().enumerate() {
                *v = -(s01 + xi[i2] * xi[i2]) * src[base + i2];
            }
        });
        grid.fft3(&mut buf, FftDirection::Inverse);
        let mut out = grid.take_f64();
        extract_re(&buf, &mut out);
        grid.give_buf(buf);
        out
    }

    /// Fused `self += other * scale`, allocation free.
    pub fn mul_add_assign(&mut self, other: &Field, scale: f64) {
        self.assert_same_shape(other);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b * scale;
        }
    }

    fn assert_same_shape(&self, other: &Field) {
        assert!(
            self.grid.as_ref() == other.grid.as_ref() && self.rank == other.rank,
            "fields must share grid and rank"
        );
    }
}

pub(crate) fn extract_re(src: &[Complex64], dst: &mut [f64]) {
    dst.par_chunks_mut(16384).enumerate().for_each(|(chunk_idx, chunk)| {
        let base = chunk_idx * 16384;
        for (off, v) in chunk.iter_mut().enumerate() {
            *v = src[base + off].re;
        }
    });
}

impl std::ops::Add for &Field {
    type Output = Field;
    fn add(self, rhs: &Field) -> Field {
        self.assert_same_shape(rhs);
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
        out
    }
}

impl std::ops::Sub for &Field {
    type Output = Field;
    fn sub(self, rhs: &Field) -> Field {
        self.assert_same_shape(rhs);
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&rhs.data) {
            *a -= b;
        }
        out
    }
}

impl std::ops::Mul<f64> for &Field {
    type Output = Field;
    fn mul(self, rhs: f64) -> Field {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a *= rhs;
        }
        out
    }
}

impl PhysicalField {
    pub fn zeros(grid: &Grid, rank: Rank) -> Self {
        assert!(rank <= 2, "rank must be 0, 1 or 2");
        let mut data = grid.take_f64_sized(components_for_rank(rank));
        data.fill(0.0);
        Self { grid: grid.clone(), rank, data }
    }

    pub fn from_samples(grid: &Grid, rank: Rank, data: Vec<f64>) -> Result<Self, SpectralError> {
        if rank > 2 {
            return Err(SpectralError::UnsupportedRank(rank));
        }
        if data.len() != components_for_rank(rank) * grid.len() {
            return Err(SpectralError::LengthMismatch {
                expected: components_for_rank(rank) * grid.len(),
                got: data.len(),
            });
        }
        if !data.iter().all(|v| v.is_finite()) {
            return Err(SpectralError::NonFinite);
        }
        Ok(Self { grid: grid.clone(), rank, data })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn rank(&self) -> Rank {
        self.rank
    }

    pub fn components(&self) -> usize {
        components_for_rank(self.rank)
    }

    pub fn component(&self, c: usize) -> &[f64] {
        let n = self.grid.len();
        &self.data[c * n..(c + 1) * n]
    }

    pub fn component_mut(&mut self, c: usize) -> &mut [f64] {
        let n = self.grid.len();
        &mut self.data[c * n..(c + 1) * n]
    }

    pub fn raw(&self) -> &[f64] {
        &self.data
    }

    pub fn raw_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    /// Sup norm over all samples and components.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// L² norm by the grid quadrature (cell volume weight).
    pub fn l2_norm(&self) -> f64 {
        let w = self.grid.cell_volume();
        (self.data.iter().map(|v| v * v).sum::<f64>() * w).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::grid::make_grid;
    use crate::spectral::random::random_real_field;
    use rand::SeedableRng;
    use std::f64::consts::TAU;

    fn sample_scalar(grid: &Grid, f: impl Fn(f64, f64, f64) -> f64) -> Field {
        let n = grid.points_per_axis();
        let dx = grid.dx();
        let mut phys = PhysicalField::zeros(grid, 0);
        for i0 in 0..n {
            for i1 in 0..n {
                for i2 in 0..n {
                    phys.component_mut(0)[grid.flat(i0, i1, i2)] =
                        f(i0 as f64 * dx, i1 as f64 * dx, i2 as f64 * dx);
                }
            }
        }
        Field::from_physical(&phys).unwrap()
    }

    #[test]
    fn constant_field_has_mass_only_at_zero() {
        let grid = make_grid(8, TAU).unwrap();
        let f = sample_scalar(&grid, |_, _, _| 2.5);
        assert!((f.component(0)[0] - Complex64::new(2.5, 0.0)).norm() < 1e-13);
        let off: f64 = f.component(0)[1..].iter().map(|v| v.norm()).sum();
        assert!(off < 1e-12);
    }

    #[test]
    fn round_trip_max_error_below_1e12() {
        let grid = make_grid(16, 3.0).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let f = random_real_field(&grid, 1, 0.0, f64::INFINITY, &mut rng);
        let back = Field::from_physical(&f.to_physical().unwrap()).unwrap();
        let num = (&f - &back).l2_norm();
        let den = f.l2_norm();
        assert!(num / den < 1e-12, "relative round-trip error {}", num / den);
    }

    #[test]
    fn plancherel_for_random_fields() {
        let grid = make_grid(12, 2.0).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let f = random_real_field(&grid, 0, 0.0, f64::INFINITY, &mut rng);
            let spec = f.l2_norm();
            let phys = f.to_physical().unwrap().l2_norm();
            assert!((spec - phys).abs() / phys < 1e-12);
        }
    }

    #[test]
    fn derivative_of_sine_is_cosine() {
        let grid = make_grid(16, TAU).unwrap();
        let f = sample_scalar(&grid, |x, _, _| x.sin());
        let d = f.derivative([1, 0, 0]).unwrap();
        let expect = sample_scalar(&grid, |x, _, _| x.cos());
        assert!((&d - &expect).l2_norm() < 1e-12);
    }

    #[test]
    fn laplacian_of_constant_is_zero() {
        let grid = make_grid(8, TAU).unwrap();
        let f = sample_scalar(&grid, |_, _, _| 4.0);
        assert!(f.laplacian().unwrap().l2_norm() < 1e-13);
    }

    #[test]
    fn curl_of_gradient_vanishes() {
        let grid = make_grid(16, TAU).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let phi = random_real_field(&grid, 0, 0.0, 4.0, &mut rng);
        let curl = phi.gradient().unwrap().curl().unwrap();
        assert!(curl.l2_norm() < 1e-10 * phi.l2_norm().max(1.0));
    }

    #[test]
    fn derivative_order_guard() {
        let grid = make_grid(8, TAU).unwrap();
        let f = Field::zeros(&grid, 0);
        assert!(f.derivative([2, 2, 1]).is_err());
        assert!(f.sobolev_seminorm(5).is_err());
    }

    #[test]
    fn lambda_squared_matches_negative_laplacian() {
        let grid = make_grid(12, TAU).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let f = random_real_field(&grid, 0, 0.0, 4.0, &mut rng);
        let a = f.lambda_power(2.0).unwrap();
        let b = f.laplacian().unwrap();
        let diff = (&a - &(&b * -1.0)).l2_norm();
        assert!(diff < 1e-12 * f.l2_norm());
    }

    #[test]
    fn lambda_inverse_is_left_inverse_on_mean_zero() {
        let grid = make_grid(12, TAU).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        let f = random_real_field(&grid, 0, 1.0, 4.0, &mut rng);
        let g = f.lambda_power(1.0).unwrap().lambda_power(-1.0).unwrap();
        assert!((&g - &f).l2_norm() < 1e-12 * f.l2_norm());
    }

    #[test]
    fn lambda_negative_rejects_nonzero_mean() {
        let grid = make_grid(8, TAU).unwrap();
        let f = sample_scalar(&grid, |x, _, _| 1.0 + 0.1 * x.cos());
        let err = f.lambda_power(-1.0).unwrap_err();
        assert!(matches!(err, SpectralError::NonzeroMean(_)));
    }

    #[test]
    fn lambda_one_on_single_mode_multiplies_by_xi_mag() {
        let grid = make_grid(16, TAU).unwrap();
        let f = sample_scalar(&grid, |x, _, _| x.cos());
        let g = f.lambda_power(1.0).unwrap();
        // |ξ| = 1 on the support of cos(x₁)
        assert!((&g - &f).l2_norm() < 1e-12);
    }

    #[test]
    fn seminorm_on_single_shell_is_k_independent() {
        let grid = make_grid(16, TAU).unwrap();
        let f = sample_scalar(&grid, |x, _, _| x.cos());
        let s0 = f.sobolev_seminorm(0).unwrap();
        for k in 1..=4 {
            let sk = f.sobolev_seminorm(k).unwrap();
            assert!((sk - s0).abs() < 1e-12 * s0);
        }
        let c = sample_scalar(&grid, |_, _, _| 3.0);
        assert!(c.sobolev_seminorm(1).unwrap() < 1e-13);
    }

    #[test]
    fn hermitian_residual_small_for_real_fields() {
        let grid = make_grid(8, 1.0).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        let f = random_real_field(&grid, 1, 0.0, f64::INFINITY, &mut rng);
        assert!(f.hermitian_residual() < 1e-13);
    }

    /// Physical-space oracle for the Sobolev seminorm: sample a sparse-mode
    /// field on a refined grid by direct mode summation, differentiate with
    /// 8th-order centered finite differences, and integrate |∇^k f|² with the
    /// (exact, for band-limited integrands) periodic trapezoid rule.
    #[test]
    fn seminorm_matches_finite_difference_quadrature() {
        let grid = make_grid(8, TAU).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);

        // a handful of Hermitian mode pairs with |k|∞ ≤ 2
        use rand::Rng;
        let mut f = Field::zeros(&grid, 0);
        let n = grid.points_per_axis();
        let mut modes: Vec<([i64; 3], Complex64)> = Vec::new();
        for _ in 0..8 {
            let k = [
                rng.gen_range(-2i64..=2),
                rng.gen_range(-2i64..=2),
                rng.gen_range(-2i64..=2),
            ];
            if k == [0, 0, 0] {
                continue;
            }
            let a = Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
            modes.push((k, a));
        }
        for (k, a) in &modes {
            let wrap = |v: i64| ((v + n as i64) % n as i64) as usize;
            let idx = grid.flat(wrap(k[0]), wrap(k[1]), wrap(k[2]));
            let jdx = grid.flat(wrap(-k[0]), wrap(-k[1]), wrap(-k[2]));
            f.component_mut(0)[idx] += *a;
            f.component_mut(0)[jdx] += a.conj();
        }

        // refined samples by direct summation (independent of the FFT path)
        let m = 96usize;
        let h = TAU / m as f64;
        let mut samples = vec![0.0f64; m * m * m];
        for i0 in 0..m {
            for i1 in 0..m {
                for i2 in 0..m {
                    let x = [i0 as f64 * h, i1 as f64 * h, i2 as f64 * h];
                    let mut v = 0.0;
                    for (k, a) in &modes {
                        let phase = k[0] as f64 * x[0] + k[1] as f64 * x[1] + k[2] as f64 * x[2];
                        // a e^{iθ} + conj(a) e^{-iθ} = 2(Re a cos θ - Im a sin θ)
                        v += 2.0 * (a.re * phase.cos() - a.im * phase.sin());
                    }
                    samples[(i0 * m + i1) * m + i2] = v;
                }
            }
        }

        // 8th-order centered first derivative along an axis
        let coeff = [4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0];
        let diff = |data: &[f64], axis: usize| -> Vec<f64> {
            let mut out = vec![0.0f64; data.len()];
            let stride = [m * m, m, 1][axis];
            let idx3 = |i0: usize, i1: usize, i2: usize| (i0 * m + i1) * m + i2;
            for i0 in 0..m {
                for i1 in 0..m {
                    for i2 in 0..m {
                        let base = [i0, i1, i2];
                        let along = base[axis];
                        let flat = idx3(i0, i1, i2);
                        let mut v = 0.0;
                        for (s, c) in coeff.iter().enumerate() {
                            let sh = s + 1;
                            let plus = (along + sh) % m;
                            let minus = (along + m - sh) % m;
                            let p = flat - along * stride + plus * stride;
                            let q = flat - along * stride + minus * stride;
                            v += c * (data[p] - data[q]);
                        }
                        out[flat] = v / h;
                    }
                }
            }
            out
        };

        // multinomial expansion of |ξ|^{2k}: Σ_{|α|=k} k!/α! |∂^α f|²
        fn multis(k: u32) -> Vec<[u32; 3]> {
            let mut out = Vec::new();
            for a in 0..=k {
                for b in 0..=(k - a) {
                    out.push([a, b, k - a - b]);
                }
            }
            out
        }
        fn factorial(v: u32) -> f64 {
            (1..=v).map(|x| x as f64).product::<f64>().max(1.0)
        }

        let w = h * h * h;
        for k in 1..=3u32 {
            let mut total = 0.0;
            for alpha in multis(k) {
                let mut d = samples.clone();
                for (axis, &a) in alpha.iter().enumerate() {
                    for _ in 0..a {
                        d = diff(&d, axis);
                    }
                }
                let weight =
                    factorial(k) / (factorial(alpha[0]) * factorial(alpha[1]) * factorial(alpha[2]));
                total += weight * d.iter().map(|v| v * v).sum::<f64>() * w;
            }
            let oracle = total.sqrt();
            let spectral = f.sobolev_seminorm(k).unwrap();
            assert!(
                (oracle - spectral).abs() / oracle < 1e-8,
                "k = {k}: oracle {oracle}, spectral {spectral}"
            );
        }
    }
}
