//! Multimode Gaussian optical states.
//!
//! A state of `N` modes is stored as a `2N x 2N` covariance matrix and a `2N`
//! displacement vector in the interleaved quadrature basis `(x1, p1, ..., xN, pN)`.
//! The vacuum has covariance `I / 2`.
//!
//! Operations mutate the state in place. They validate their arguments before
//! touching anything, so a state is left unmodified when an error is returned.

mod measure;
mod symplectic;

pub use measure::{Homodyne, XSampler};

use nalgebra::{DMatrix, DVector, Matrix2, Vector2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Variance of each vacuum quadrature.
pub const VACUUM_VARIANCE: f64 = 0.5;

/// How single-mode squeezing acts on the two quadratures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SqueezeVariant {
    /// Symplectic squeezer: `x -> e^r x`, `p -> e^-r p`.
    #[default]
    Canonical,
    /// Scales both quadratures by `e^r`. Not a symplectic map; kept for
    /// comparison runs. Identical to `Canonical` on the x quadrature.
    Isotropic,
}

/// Homodyne measurement axis. Angle 0 is the x quadrature, pi/2 the p quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureAxis {
    pub angle: f64,
}

impl QuadratureAxis {
    pub const X: QuadratureAxis = QuadratureAxis { angle: 0.0 };
    pub const P: QuadratureAxis = QuadratureAxis { angle: std::f64::consts::FRAC_PI_2 };

    pub fn new(angle: f64) -> Self {
        Self { angle }
    }

    /// Unit vector in the `(x, p)` plane.
    pub fn unit(&self) -> Vector2<f64> {
        if self.angle == 0.0 {
            Vector2::new(1.0, 0.0)
        } else {
            Vector2::new(self.angle.cos(), self.angle.sin())
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    cov: DMatrix<f64>,
    disp: DVector<f64>,
}

impl GaussianState {
    /// The `n_modes`-mode vacuum.
    pub fn vacuum(n_modes: usize) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::invalid("a Gaussian state needs at least one mode"));
        }
        let dim = 2 * n_modes;
        Ok(Self {
            cov: DMatrix::identity(dim, dim) * VACUUM_VARIANCE,
            disp: DVector::zeros(dim),
        })
    }

    /// Builds a state from an explicit covariance matrix and displacement.
    ///
    /// Shapes and symmetry are checked; physicality is not (see
    /// [`GaussianState::symplectic_eigenvalues`]).
    pub fn from_parts(cov: DMatrix<f64>, disp: DVector<f64>) -> Result<Self> {
        let dim = disp.len();
        if dim == 0 || !dim.is_multiple_of(2) {
            return Err(Error::invalid(format!("displacement length {dim} is not a positive even number")));
        }
        if cov.nrows() != dim || cov.ncols() != dim {
            return Err(Error::invalid(format!(
                "covariance is {}x{}, expected {dim}x{dim}",
                cov.nrows(),
                cov.ncols()
            )));
        }
        if cov.iter().chain(disp.iter()).any(|v| !v.is_finite()) {
            return Err(Error::invalid("non-finite entry in covariance or displacement"));
        }
        let state = Self { cov, disp };
        if state.max_asymmetry() > 1e-12 {
            return Err(Error::invalid("covariance matrix is not symmetric"));
        }
        Ok(state)
    }

    pub fn n_modes(&self) -> usize {
        self.disp.len() / 2
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    pub fn disp(&self) -> &DVector<f64> {
        &self.disp
    }

    /// Reduced `2 x 2` covariance of one mode.
    pub fn mode_cov(&self, mode: usize) -> Result<Matrix2<f64>> {
        self.check_mode(mode)?;
        Ok(self.cov.fixed_view::<2, 2>(2 * mode, 2 * mode).into_owned())
    }

    pub fn mode_disp(&self, mode: usize) -> Result<Vector2<f64>> {
        self.check_mode(mode)?;
        Ok(self.disp.fixed_rows::<2>(2 * mode).into_owned())
    }

    /// x-quadrature means of all modes.
    pub fn disp_x(&self) -> Vec<f64> {
        self.disp.iter().step_by(2).copied().collect()
    }

    pub fn max_asymmetry(&self) -> f64 {
        let n = self.cov.nrows();
        let mut worst = 0.0f64;
        for a in 0..n {
            for b in (a + 1)..n {
                worst = worst.max((self.cov[(a, b)] - self.cov[(b, a)]).abs());
            }
        }
        worst
    }

    /// `det(2 * cov)`; equals 1 for pure states.
    pub fn purity_det(&self) -> f64 {
        (&self.cov * 2.0).determinant()
    }

    /// Total mean photon number `sum_i [(dx^2 + dp^2)/2 + (Vxx + Vpp)/2 - 1/2]`.
    pub fn mean_photon_number(&self) -> f64 {
        (0..self.n_modes())
            .map(|m| {
                let (x, p) = (2 * m, 2 * m + 1);
                0.5 * (self.disp[x].powi(2) + self.disp[p].powi(2))
                    + 0.5 * (self.cov[(x, x)] + self.cov[(p, p)])
                    - VACUUM_VARIANCE
            })
            .sum()
    }

    fn check_mode(&self, mode: usize) -> Result<()> {
        if mode >= self.n_modes() {
            return Err(Error::invalid(format!(
                "mode {mode} out of range for a {}-mode state",
                self.n_modes()
            )));
        }
        Ok(())
    }

    /// Scales row and column `idx` of the covariance and entry `idx` of the displacement.
    fn scale_index(&mut self, idx: usize, factor: f64) {
        self.cov.row_mut(idx).scale_mut(factor);
        self.cov.column_mut(idx).scale_mut(factor);
        self.disp[idx] *= factor;
    }

    /// Applies a linear map `S` (row-major `k x k`) on the listed indices:
    /// `cov -> S cov S^T`, `disp -> S disp`.
    fn transform_indices(&mut self, idx: &[usize], s: &[f64]) {
        let k = idx.len();
        debug_assert_eq!(s.len(), k * k);
        let dim = self.cov.nrows();
        let mut tmp = vec![0.0; k];

        // cov <- cov S^T
        for r in 0..dim {
            for (j, t) in tmp.iter_mut().enumerate() {
                *t = (0..k).map(|l| self.cov[(r, idx[l])] * s[j * k + l]).sum();
            }
            for (j, &c) in idx.iter().enumerate() {
                self.cov[(r, c)] = tmp[j];
            }
        }
        // cov <- S cov
        for c in 0..dim {
            for (j, t) in tmp.iter_mut().enumerate() {
                *t = (0..k).map(|l| s[j * k + l] * self.cov[(idx[l], c)]).sum();
            }
            for (j, &r) in idx.iter().enumerate() {
                self.cov[(r, c)] = tmp[j];
            }
        }
        // The touched block picks up rounding asymmetry from the two passes.
        for a in 0..k {
            for b in (a + 1)..k {
                let avg = 0.5 * (self.cov[(idx[a], idx[b])] + self.cov[(idx[b], idx[a])]);
                self.cov[(idx[a], idx[b])] = avg;
                self.cov[(idx[b], idx[a])] = avg;
            }
        }

        for (j, t) in tmp.iter_mut().enumerate() {
            *t = (0..k).map(|l| s[j * k + l] * self.disp[idx[l]]).sum();
        }
        for (j, &r) in idx.iter().enumerate() {
            self.disp[r] = tmp[j];
        }
    }

    /// Single-mode squeezing with parameter `r`.
    pub fn squeeze(&mut self, mode: usize, r: f64, variant: SqueezeVariant) -> Result<()> {
        self.check_mode(mode)?;
        if !r.is_finite() {
            return Err(Error::invalid(format!("squeezing parameter {r} is not finite")));
        }
        let gain = r.exp();
        let p_factor = match variant {
            SqueezeVariant::Canonical => (-r).exp(),
            SqueezeVariant::Isotropic => gain,
        };
        self.scale_index(2 * mode, gain);
        self.scale_index(2 * mode + 1, p_factor);
        Ok(())
    }

    /// Loss channel: mixes the mode with vacuum on a beam splitter of
    /// power transmission `transmission`.
    pub fn loss(&mut self, mode: usize, transmission: f64) -> Result<()> {
        self.check_mode(mode)?;
        check_fraction("transmission", transmission)?;
        let amp = transmission.sqrt();
        for idx in [2 * mode, 2 * mode + 1] {
            self.scale_index(idx, amp);
            self.cov[(idx, idx)] += (1.0 - transmission) * VACUUM_VARIANCE;
        }
        Ok(())
    }

    /// Two-mode beam splitter with power transmission `t`:
    /// `a' = sqrt(t) a + sqrt(1-t) b`, `b' = -sqrt(1-t) a + sqrt(t) b` on both quadratures.
    pub fn beam_splitter(&mut self, mode_a: usize, mode_b: usize, t: f64) -> Result<()> {
        self.check_mode(mode_a)?;
        self.check_mode(mode_b)?;
        if mode_a == mode_b {
            return Err(Error::invalid(format!("beam splitter needs two distinct modes, got {mode_a} twice")));
        }
        check_fraction("transmission", t)?;
        let c = t.sqrt();
        let s = (1.0 - t).sqrt();
        #[rustfmt::skip]
        let m = [
            c, 0.0, s, 0.0,
            0.0, c, 0.0, s,
            -s, 0.0, c, 0.0,
            0.0, -s, 0.0, c,
        ];
        self.transform_indices(&[2 * mode_a, 2 * mode_a + 1, 2 * mode_b, 2 * mode_b + 1], &m);
        Ok(())
    }

    /// Rotates the mode's `(x, p)` pair by `angle`.
    pub fn phase_shift(&mut self, mode: usize, angle: f64) -> Result<()> {
        self.check_mode(mode)?;
        if !angle.is_finite() {
            return Err(Error::invalid("phase angle is not finite"));
        }
        let (s, c) = angle.sin_cos();
        self.transform_indices(&[2 * mode, 2 * mode + 1], &[c, -s, s, c]);
        Ok(())
    }

    /// Adds `delta` (length `2N`) to the displacement.
    pub fn displace(&mut self, delta: &[f64]) -> Result<()> {
        if delta.len() != self.disp.len() {
            return Err(Error::invalid(format!(
                "displacement of length {} applied to a state of dimension {}",
                delta.len(),
                self.disp.len()
            )));
        }
        if delta.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("non-finite displacement"));
        }
        for (d, v) in self.disp.iter_mut().zip(delta) {
            *d += v;
        }
        Ok(())
    }

    /// Displaces a single mode by `(dx, dp)`.
    pub fn displace_mode(&mut self, mode: usize, dx: f64, dp: f64) -> Result<()> {
        self.check_mode(mode)?;
        if !(dx.is_finite() && dp.is_finite()) {
            return Err(Error::invalid("non-finite displacement"));
        }
        self.disp[2 * mode] += dx;
        self.disp[2 * mode + 1] += dp;
        Ok(())
    }

    /// Phase-insensitive amplification: two-mode squeezing with a vacuum ancilla
    /// that is then traced out. Amplitude gain is `cosh(r)` on both quadratures.
    pub fn phase_insensitive_gain(&mut self, mode: usize, r: f64) -> Result<()> {
        self.check_mode(mode)?;
        if !(r.is_finite() && r >= 0.0) {
            return Err(Error::invalid(format!("gain parameter must be finite and >= 0, got {r}")));
        }
        let (c, s) = (r.cosh(), r.sinh());
        for idx in [2 * mode, 2 * mode + 1] {
            self.scale_index(idx, c);
            self.cov[(idx, idx)] += s * s * VACUUM_VARIANCE;
        }
        Ok(())
    }

    /// Appends a vacuum mode and returns its index.
    pub fn add_vacuum_mode(&mut self) -> usize {
        let dim = self.disp.len();
        let cov = std::mem::replace(&mut self.cov, DMatrix::zeros(0, 0));
        let mut cov = cov.resize(dim + 2, dim + 2, 0.0);
        cov[(dim, dim)] = VACUUM_VARIANCE;
        cov[(dim + 1, dim + 1)] = VACUUM_VARIANCE;
        self.cov = cov;
        let disp = std::mem::replace(&mut self.disp, DVector::zeros(0));
        self.disp = disp.resize_vertically(dim + 2, 0.0);
        dim / 2
    }

    /// Partial trace over one mode.
    pub fn remove_mode(&mut self, mode: usize) -> Result<()> {
        self.check_mode(mode)?;
        if self.n_modes() < 2 {
            return Err(Error::invalid("cannot remove the last remaining mode"));
        }
        let cov = std::mem::replace(&mut self.cov, DMatrix::zeros(0, 0));
        self.cov = cov.remove_rows(2 * mode, 2).remove_columns(2 * mode, 2);
        let disp = std::mem::replace(&mut self.disp, DVector::zeros(0));
        self.disp = disp.remove_rows(2 * mode, 2);
        Ok(())
    }

    /// Traces out a mode and puts a fresh vacuum in its slot.
    ///
    /// Equivalent to [`remove_mode`](Self::remove_mode) followed by
    /// [`add_vacuum_mode`](Self::add_vacuum_mode) and moving the new mode back to
    /// `mode`, without reallocating.
    pub fn reset_mode_to_vacuum(&mut self, mode: usize) -> Result<()> {
        self.check_mode(mode)?;
        for idx in [2 * mode, 2 * mode + 1] {
            self.cov.row_mut(idx).fill(0.0);
            self.cov.column_mut(idx).fill(0.0);
            self.cov[(idx, idx)] = VACUUM_VARIANCE;
            self.disp[idx] = 0.0;
        }
        Ok(())
    }
}

pub(crate) fn check_fraction(name: &str, value: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&value) {
        return Err(Error::invalid(format!("{name} must lie in [0, 1], got {value}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    fn max_abs_diff(a: &GaussianState, b: &GaussianState) -> f64 {
        let dc = (a.cov() - b.cov()).abs().max();
        let dd = (a.disp() - b.disp()).abs().max();
        dc.max(dd)
    }

    fn coherent(dx: f64, dp: f64) -> GaussianState {
        let mut s = GaussianState::vacuum(1).unwrap();
        s.displace(&[dx, dp]).unwrap();
        s
    }

    #[test]
    fn vacuum_has_half_identity_covariance() {
        let s = GaussianState::vacuum(1).unwrap();
        assert_eq!(s.cov(), &DMatrix::from_row_slice(2, 2, &[0.5, 0.0, 0.0, 0.5]));
        assert_eq!(s.disp(), &DVector::zeros(2));
        let s2 = GaussianState::vacuum(2).unwrap();
        assert_eq!(s2.cov(), &(DMatrix::identity(4, 4) * 0.5));
        assert!(GaussianState::vacuum(0).is_err());
    }

    #[test]
    fn canonical_squeeze_on_vacuum() {
        let mut s = GaussianState::vacuum(1).unwrap();
        s.squeeze(0, 0.2, SqueezeVariant::Canonical).unwrap();
        // 0.5 e^{0.4}, 0.5 e^{-0.4}
        assert_close(s.cov()[(0, 0)], 0.745_912_348_820_635, 1e-12);
        assert_close(s.cov()[(1, 1)], 0.335_160_023_017_819, 1e-12);
        assert_close(s.purity_det(), 1.0, 1e-12);
    }

    #[test]
    fn isotropic_squeeze_scales_both_quadratures() {
        let mut s = GaussianState::vacuum(1).unwrap();
        s.squeeze(0, 0.2, SqueezeVariant::Isotropic).unwrap();
        assert_close(s.cov()[(0, 0)], 0.745_912_348_820_635, 1e-12);
        assert_close(s.cov()[(1, 1)], 0.745_912_348_820_635, 1e-12);
    }

    #[test]
    fn zero_parameters_are_identities() {
        let mut base = GaussianState::vacuum(2).unwrap();
        base.squeeze(0, 0.3, SqueezeVariant::Canonical).unwrap();
        base.beam_splitter(0, 1, 0.6).unwrap();
        base.displace(&[0.4, -0.2, 1.0, 0.3]).unwrap();

        let mut s = base.clone();
        s.squeeze(1, 0.0, SqueezeVariant::Canonical).unwrap();
        s.squeeze(0, 0.0, SqueezeVariant::Isotropic).unwrap();
        s.loss(0, 1.0).unwrap();
        s.beam_splitter(0, 1, 1.0).unwrap();
        s.phase_shift(1, 0.0).unwrap();
        s.phase_insensitive_gain(0, 0.0).unwrap();
        s.displace(&[0.0; 4]).unwrap();
        assert!(max_abs_diff(&s, &base) <= 1e-15);
    }

    #[test]
    fn loss_examples() {
        let mut v = GaussianState::vacuum(1).unwrap();
        v.loss(0, 0.37).unwrap();
        assert!(max_abs_diff(&v, &GaussianState::vacuum(1).unwrap()) <= 1e-15);

        let mut c = coherent(2.0, 0.0);
        c.loss(0, 0.25).unwrap();
        assert_close(c.disp()[0], 1.0, 1e-15);
        assert_close(c.cov()[(0, 0)], 0.5, 1e-15);
        assert_close(c.cov()[(1, 1)], 0.5, 1e-15);

        assert!(c.loss(0, 1.2).is_err());
        assert!(c.loss(0, -0.1).is_err());
    }

    #[test]
    fn beam_splitter_examples() {
        let mut s = GaussianState::vacuum(2).unwrap();
        s.displace(&[2.0, 0.0, 0.0, 0.0]).unwrap();
        s.beam_splitter(0, 1, 0.9).unwrap();
        let expect = [2.0 * 0.9f64.sqrt(), 0.0, -2.0 * 0.1f64.sqrt(), 0.0];
        for (a, b) in s.disp().iter().zip(expect) {
            assert_close(*a, b, 1e-14);
        }
        assert_close(expect[0], 1.8974, 1e-4);
        assert_close(expect[2], -0.6325, 1e-4);
        assert!(s.beam_splitter(1, 1, 0.5).is_err());
    }

    #[test]
    fn beam_splitter_conserves_photon_number() {
        let mut s = GaussianState::vacuum(3).unwrap();
        s.squeeze(0, 0.4, SqueezeVariant::Canonical).unwrap();
        s.displace(&[1.0, 0.2, -0.5, 0.0, 0.3, 0.7]).unwrap();
        s.phase_shift(2, 0.4).unwrap();
        let before = s.mean_photon_number();
        for t in [0.0, 0.1, 0.5, 0.93] {
            s.beam_splitter(0, 2, t).unwrap();
            s.beam_splitter(1, 0, t).unwrap();
            assert_close(s.mean_photon_number(), before, 1e-12);
        }
    }

    #[test]
    fn phase_shift_examples() {
        let mut s = coherent(1.0, 0.5);
        s.phase_shift(0, PI).unwrap();
        assert_close(s.disp()[0], -1.0, 1e-15);
        assert_close(s.disp()[1], -0.5, 1e-15);

        let mut a = GaussianState::vacuum(1).unwrap();
        a.squeeze(0, 0.3, SqueezeVariant::Canonical).unwrap();
        a.displace(&[0.7, -0.1]).unwrap();
        let mut b = a.clone();
        a.phase_shift(0, PI / 2.0).unwrap();
        a.phase_shift(0, PI / 2.0).unwrap();
        b.phase_shift(0, PI).unwrap();
        assert!(max_abs_diff(&a, &b) <= 1e-14);
    }

    #[test]
    fn displacements_add() {
        let mut a = GaussianState::vacuum(1).unwrap();
        a.displace(&[3.0, 0.0]).unwrap();
        assert_eq!(a.disp().as_slice(), &[3.0, 0.0]);
        assert_eq!(a.cov(), GaussianState::vacuum(1).unwrap().cov());

        let mut b = GaussianState::vacuum(1).unwrap();
        b.displace(&[1.0, 0.25]).unwrap();
        b.displace(&[-0.5, 2.0]).unwrap();
        let mut c = GaussianState::vacuum(1).unwrap();
        c.displace(&[0.5, 2.25]).unwrap();
        assert_eq!(b, c);
        assert!(b.displace(&[1.0]).is_err());
    }

    #[test]
    fn phase_insensitive_gain_on_vacuum() {
        assert_close(0.6f64.cosh(), 1.1855, 1e-4);
        let mut s = GaussianState::vacuum(1).unwrap();
        s.phase_insensitive_gain(0, 0.6).unwrap();
        // (cosh^2 + sinh^2)/2 = cosh(1.2)/2
        assert_close(s.cov()[(0, 0)], 1.2f64.cosh() / 2.0, 1e-14);
        assert_close(s.cov()[(1, 1)], 0.905_327_783_662_187, 1e-12);
        assert!(s.phase_insensitive_gain(0, -0.1).is_err());

        let mut c = coherent(1.0, -2.0);
        c.phase_insensitive_gain(0, 0.6).unwrap();
        assert_close(c.disp()[0], 0.6f64.cosh(), 1e-15);
        assert_close(c.disp()[1], -2.0 * 0.6f64.cosh(), 1e-15);
    }

    #[test]
    fn remove_mode_examples() {
        let mut s = GaussianState::vacuum(2).unwrap();
        s.remove_mode(1).unwrap();
        assert_eq!(s, GaussianState::vacuum(1).unwrap());
        assert!(s.remove_mode(0).is_err());

        // removing two modes in either order gives the same state
        let mut base = GaussianState::vacuum(4).unwrap();
        base.squeeze(1, 0.5, SqueezeVariant::Canonical).unwrap();
        base.beam_splitter(1, 3, 0.4).unwrap();
        base.beam_splitter(3, 0, 0.7).unwrap();
        base.displace(&[0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8]).unwrap();
        let mut a = base.clone();
        a.remove_mode(1).unwrap();
        a.remove_mode(2).unwrap(); // original mode 3
        let mut b = base.clone();
        b.remove_mode(3).unwrap();
        b.remove_mode(1).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn loss_equals_beam_splitter_with_traced_ancilla() {
        for t in [0.0, 0.3, 0.7, 0.9, 1.0] {
            let mut base = GaussianState::vacuum(2).unwrap();
            base.squeeze(0, 0.35, SqueezeVariant::Canonical).unwrap();
            base.squeeze(1, -0.2, SqueezeVariant::Canonical).unwrap();
            base.beam_splitter(0, 1, 0.45).unwrap();
            base.displace(&[1.5, -0.4, 0.2, 0.9]).unwrap();

            let mut lossy = base.clone();
            lossy.loss(1, t).unwrap();

            let mut routed = base.clone();
            let anc = routed.add_vacuum_mode();
            routed.beam_splitter(1, anc, t).unwrap();
            routed.remove_mode(anc).unwrap();
            assert!(max_abs_diff(&lossy, &routed) <= 1e-12, "t = {t}");
        }
    }

    #[test]
    fn reset_matches_remove_then_append() {
        let mut base = GaussianState::vacuum(3).unwrap();
        base.squeeze(0, 0.4, SqueezeVariant::Canonical).unwrap();
        base.beam_splitter(0, 2, 0.5).unwrap();
        base.beam_splitter(2, 1, 0.3).unwrap();
        base.displace(&[1.0, 0.0, 2.0, 0.0, -1.0, 0.5]).unwrap();

        let mut reset = base.clone();
        reset.reset_mode_to_vacuum(2).unwrap();
        let mut rebuilt = base.clone();
        rebuilt.remove_mode(2).unwrap();
        rebuilt.add_vacuum_mode();
        assert_eq!(reset, rebuilt);
    }

    #[test]
    fn errors_leave_state_untouched() {
        let mut s = GaussianState::vacuum(2).unwrap();
        s.squeeze(0, 0.1, SqueezeVariant::Canonical).unwrap();
        let before = s.clone();
        assert!(s.squeeze(2, 0.1, SqueezeVariant::Canonical).is_err());
        assert!(s.loss(0, 2.0).is_err());
        assert!(s.phase_shift(5, 0.1).is_err());
        assert!(s.displace(&[f64::NAN, 0.0, 0.0, 0.0]).is_err());
        assert_eq!(s, before);
    }

    #[test]
    fn from_parts_rejects_bad_shapes() {
        assert!(GaussianState::from_parts(DMatrix::identity(2, 2), DVector::zeros(3)).is_err());
        assert!(GaussianState::from_parts(DMatrix::identity(3, 3), DVector::zeros(2)).is_err());
        let asym = DMatrix::from_row_slice(2, 2, &[1.0, 0.1, 0.0, 1.0]);
        assert!(GaussianState::from_parts(asym, DVector::zeros(2)).is_err());
    }
}
