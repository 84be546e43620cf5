use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use super::{check_fraction, GaussianState, QuadratureAxis, VACUUM_VARIANCE};
use crate::error::{Error, Result};
use crate::rng::NormalSource;

/// Below this projected variance the pseudo-inverse of the projected block is zero.
const PINV_CUTOFF: f64 = 1e-15;

/// Outcome of a homodyne measurement together with the post-measurement state
/// of the unmeasured modes.
#[derive(Debug, Clone)]
pub struct Homodyne {
    pub outcome: f64,
    pub conditioned: GaussianState,
}

impl GaussianState {
    /// Mean and variance of a homodyne outcome on `mode` along `axis`.
    pub fn homodyne_marginal(&self, mode: usize, axis: QuadratureAxis) -> Result<(f64, f64)> {
        let c = self.mode_cov(mode)?;
        let d = self.mode_disp(mode)?;
        let u = axis.unit();
        Ok((u.dot(&d), u.dot(&(c * u))))
    }

    /// Measures `mode` along `axis`, drawing the outcome from its marginal.
    ///
    /// With `n_modes == 1` the conditioned state is meaningless; use
    /// [`homodyne_marginal`](Self::homodyne_marginal) or
    /// [`tap_homodyne`](Self::tap_homodyne) for single-mode states.
    pub fn homodyne<S: NormalSource + ?Sized>(
        &self,
        mode: usize,
        axis: QuadratureAxis,
        src: &mut S,
    ) -> Result<Homodyne> {
        if self.n_modes() < 2 {
            return Err(Error::InvalidState(
                "homodyne conditioning needs at least one unmeasured mode".into(),
            ));
        }
        let (mean, var) = self.homodyne_marginal(mode, axis)?;
        let outcome = mean + var.max(0.0).sqrt() * src.standard_normal();
        let conditioned = self.condition_on_homodyne(mode, axis, outcome)?;
        Ok(Homodyne { outcome, conditioned })
    }

    /// State of the remaining modes given that `mode` was measured along `axis`
    /// with result `outcome`.
    ///
    /// `A' = A - B (PCP)^+ B^T`, `d' = d_A + B (PCP)^+ (c u - d_C)` where the
    /// projected block has the rank-one pseudo-inverse `u u^T / (u^T C u)`.
    pub fn condition_on_homodyne(
        &self,
        mode: usize,
        axis: QuadratureAxis,
        outcome: f64,
    ) -> Result<GaussianState> {
        self.check_mode(mode)?;
        if self.n_modes() < 2 {
            return Err(Error::InvalidState("no modes left after measurement".into()));
        }
        let (mean, var) = self.homodyne_marginal(mode, axis)?;
        let u = axis.unit();
        let (ix, ip) = (2 * mode, 2 * mode + 1);

        let mut out = self.clone();
        out.remove_mode(mode)?;
        if var > PINV_CUTOFF {
            // g = B u over the remaining indices
            let g: Vec<f64> = (0..self.cov.nrows())
                .filter(|&r| r != ix && r != ip)
                .map(|r| self.cov[(r, ix)] * u[0] + self.cov[(r, ip)] * u[1])
                .collect();
            rank_one_update(&mut out, &g, var, outcome - mean);
        }
        Ok(out)
    }

    /// Taps a fraction of `mode` into a fresh vacuum ancilla, homodynes the
    /// ancilla along `axis` and returns the outcome. The mode keeps amplitude
    /// `sqrt(transmission)` and is conditioned on the outcome.
    ///
    /// Same result as appending a vacuum mode `a`, applying
    /// `beam_splitter(a, mode, transmission)` and measuring `a`, without
    /// growing the state. The ancilla carries `+sqrt(1 - transmission)` times the
    /// tapped mode.
    pub fn tap_homodyne<S: NormalSource + ?Sized>(
        &mut self,
        mode: usize,
        transmission: f64,
        axis: QuadratureAxis,
        src: &mut S,
    ) -> Result<f64> {
        self.check_mode(mode)?;
        check_fraction("transmission", transmission)?;
        let u = axis.unit();
        let t = transmission;
        let (amp_t, amp_r) = (t.sqrt(), (1.0 - t).sqrt());
        let (ix, ip) = (2 * mode, 2 * mode + 1);
        let dim = self.cov.nrows();

        let cu = self.mode_cov(mode)? * u;
        let ancilla_cov_u =
            cu * (1.0 - t) + u * (t * VACUUM_VARIANCE);
        let var = u.dot(&ancilla_cov_u);
        let mean = amp_r * (u[0] * self.disp[ix] + u[1] * self.disp[ip]);
        let outcome = mean + var.max(0.0).sqrt() * src.standard_normal();

        // Cross-covariance of every post-splitter index with the measured ancilla quadrature.
        let mut g = vec![0.0; dim];
        for (r, gr) in g.iter_mut().enumerate() {
            if r == ix || r == ip {
                let k = r - ix;
                *gr = amp_t * amp_r * (cu[k] - VACUUM_VARIANCE * u[k]);
            } else {
                *gr = amp_r * (self.cov[(r, ix)] * u[0] + self.cov[(r, ip)] * u[1]);
            }
        }

        // Transmitted mode: scale by sqrt(t) and mix in the ancilla vacuum.
        for idx in [ix, ip] {
            self.scale_index(idx, amp_t);
            self.cov[(idx, idx)] += (1.0 - t) * VACUUM_VARIANCE;
        }
        if var > PINV_CUTOFF {
            rank_one_update(self, &g, var, outcome - mean);
        }
        Ok(outcome)
    }

    /// Mean and covariance of the joint x-quadrature marginal.
    pub fn x_marginal(&self) -> (DVector<f64>, DMatrix<f64>) {
        let n = self.n_modes();
        let mean = DVector::from_fn(n, |i, _| self.disp[2 * i]);
        let cov = DMatrix::from_fn(n, n, |i, k| self.cov[(2 * i, 2 * k)]);
        (mean, cov)
    }

    /// Sampler for the joint x-quadrature marginal.
    pub fn x_sampler(&self) -> Result<XSampler> {
        let (mean, cov) = self.x_marginal();
        XSampler::new(mean, cov)
    }

    /// Draws `count` joint x-quadrature samples.
    pub fn sample_x_quadratures<S: NormalSource + ?Sized>(
        &self,
        count: usize,
        src: &mut S,
    ) -> Result<Vec<DVector<f64>>> {
        if count == 0 {
            return Err(Error::invalid("sample count must be at least 1"));
        }
        let sampler = self.x_sampler()?;
        Ok((0..count).map(|_| sampler.sample(src)).collect())
    }
}

/// `cov -= g g^T / var` and `disp += g * innovation / var`, visiting only the
/// nonzero entries of `g`.
fn rank_one_update(state: &mut GaussianState, g: &[f64], var: f64, innovation: f64) {
    let support: Vec<usize> = (0..g.len()).filter(|&r| g[r] != 0.0).collect();
    for &a in &support {
        for &b in &support {
            state.cov[(a, b)] -= g[a] * g[b] / var;
        }
        state.disp[a] += g[a] * innovation / var;
    }
}

/// Multivariate normal sampler backed by a Cholesky factor.
#[derive(Debug, Clone)]
pub struct XSampler {
    mean: DVector<f64>,
    factor: DMatrix<f64>,
    jitter: f64,
}

impl XSampler {
    const JITTER_START: f64 = 1e-12;
    const JITTER_MAX: f64 = 1e-6;

    /// Factors `cov`; if that fails, retries with diagonal jitter. The jitter
    /// starts at 1e-12 and grows tenfold up to 1e-6, in units of the largest
    /// diagonal entry (or absolute units when that entry is below one).
    pub fn new(mean: DVector<f64>, cov: DMatrix<f64>) -> Result<Self> {
        let n = mean.len();
        if cov.nrows() != n || cov.ncols() != n {
            return Err(Error::invalid("mean and covariance dimensions differ"));
        }
        if let Some(ch) = Cholesky::new(cov.clone()) {
            return Ok(Self { mean, factor: ch.unpack(), jitter: 0.0 });
        }
        let scale = cov.diagonal().max().max(1.0);
        let mut rel = Self::JITTER_START;
        while rel <= Self::JITTER_MAX * (1.0 + 1e-9) {
            let jitter = rel * scale;
            let bumped = &cov + DMatrix::<f64>::identity(n, n) * jitter;
            if let Some(ch) = Cholesky::<f64, Dyn>::new(bumped) {
                return Ok(Self { mean, factor: ch.unpack(), jitter });
            }
            rel *= 10.0;
        }
        Err(Error::NumericalFailure(format!(
            "x-quadrature covariance is not positive semidefinite within relative jitter {}",
            Self::JITTER_MAX
        )))
    }

    /// Diagonal jitter that was needed to factor the covariance (absolute units).
    pub fn jitter(&self) -> f64 {
        self.jitter
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn sample<S: NormalSource + ?Sized>(&self, src: &mut S) -> DVector<f64> {
        let z = DVector::from_fn(self.dim(), |_, _| src.standard_normal());
        &self.mean + &self.factor * z
    }
}
