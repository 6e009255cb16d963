//! Two-mode Gaussian states in the quadrature picture and the optical
//! elements of the interferometer: parametric amplifier, phase shift on
//! mode `a`, and a symmetric photon-loss channel.
//!
//! Quadratures are `x = a + a†`, `p = i(a† − a)` in the order
//! `(x_a, p_a, x_b, p_b)`, so the vacuum covariance is the identity.

use crate::error::{Error, Result};
use crate::linalg::{cholesky, complexify, hermitian_eigenvalues, Mat4, Vec4};
use crate::scalar::Real;
use num_complex::Complex;

/// Tolerance for structural checks (symmetry, symplecticity).
pub fn structural_tol<T: Real>() -> T {
    T::lit(1e-12).max(T::lit(1e3) * T::epsilon())
}

/// Tolerance for physical checks (uncertainty relation, purity).
pub fn physical_tol<T: Real>() -> T {
    T::lit(1e-9).max(T::lit(1e5) * T::epsilon())
}

pub(crate) fn check_param<T: Real>(name: &'static str, value: T, ok: bool, reason: &'static str) -> Result<()> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name, value: value.to_f64_lossy(), reason })
    }
}

pub(crate) fn check_non_negative<T: Real>(name: &'static str, value: T) -> Result<()> {
    check_param(name, value, value >= T::zero(), "must be finite and non-negative")
}

pub(crate) fn check_loss<T: Real>(loss: T) -> Result<()> {
    check_param("loss", loss, loss >= T::zero() && loss <= T::one(), "must lie in [0, 1]")
}

/// Block-diagonal symplectic form, `[[0, 1], [−1, 0]]` on each mode.
pub fn omega<T: Real>() -> Mat4<T> {
    let (o, l) = (T::zero(), T::one());
    Mat4::from_rows([[o, l, o, o], [-l, o, o, o], [o, o, o, l], [o, o, -l, o]])
}

/// Scalar parameters of one run of the interferometer.
///
/// Input displacement `α = alpha_mag·e^{iδ}`, squeezing `ξ = r·e^{iθ}`
/// (only `θ = 0` is modelled), amplifier gain `g`, encoded phase `φ` and
/// loss rate `L`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InterferometerConfig<T> {
    pub alpha_mag: T,
    pub delta: T,
    pub r: T,
    pub theta: T,
    pub g: T,
    pub phi: T,
    pub loss: T,
}

impl<T: Real> InterferometerConfig<T> {
    pub fn new(alpha_mag: T, delta: T, r: T, g: T, phi: T, loss: T) -> Result<Self> {
        let c = InterferometerConfig { alpha_mag, delta, r, theta: T::zero(), g, phi, loss };
        c.validate()?;
        Ok(c)
    }

    /// Squeezed-vacuum inputs (`α = 0`) at `φ = 0`.
    pub fn squeezed_vacuum(r: T, g: T, loss: T) -> Result<Self> {
        Self::new(T::zero(), T::zero(), r, g, T::zero(), loss)
    }

    /// Sets the squeezing phase; anything other than zero is rejected.
    pub fn with_theta(self, theta: T) -> Result<Self> {
        check_param("theta", theta, theta == T::zero(), "only zero squeezing phase is supported")?;
        Ok(self)
    }

    pub fn with_phi(self, phi: T) -> Result<Self> {
        let c = InterferometerConfig { phi, ..self };
        c.validate()?;
        Ok(c)
    }

    pub fn with_loss(self, loss: T) -> Result<Self> {
        let c = InterferometerConfig { loss, ..self };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        check_non_negative("alpha", self.alpha_mag)?;
        check_non_negative("r", self.r)?;
        check_non_negative("g", self.g)?;
        check_loss(self.loss)?;
        check_param("delta", self.delta, true, "must be finite")?;
        check_param("phi", self.phi, true, "must be finite")?;
        check_param("theta", self.theta, self.theta == T::zero(), "only zero squeezing phase is supported")
    }

    /// Converts every field to another scalar type.
    pub fn map<U: Real>(&self, f: impl Fn(T) -> U) -> InterferometerConfig<U> {
        InterferometerConfig {
            alpha_mag: f(self.alpha_mag),
            delta: f(self.delta),
            r: f(self.r),
            theta: f(self.theta),
            g: f(self.g),
            phi: f(self.phi),
            loss: f(self.loss),
        }
    }
}

/// Which pair of single-mode states enters the amplifier.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InputFamily {
    /// Two identical displaced squeezed vacua.
    DsvPair,
    /// Coherent state in mode `a`, squeezed vacuum in mode `b`.
    CoherentSqueezed,
}

impl InputFamily {
    pub fn input_state<T: Real>(self, c: &InterferometerConfig<T>) -> Result<GaussianState<T>> {
        match self {
            InputFamily::DsvPair => make_dsv_pair(c.alpha_mag, c.delta, c.r),
            InputFamily::CoherentSqueezed => make_coherent_squeezed(c.alpha_mag, c.r),
        }
    }
}

/// Mean vector and covariance matrix of a two-mode Gaussian state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussianState<T> {
    pub mean: Vec4<T>,
    pub cov: Mat4<T>,
}

impl<T: Real> GaussianState<T> {
    /// Validated constructor: the covariance must be symmetric and obey the
    /// uncertainty relation `Σ + iΩ ≥ 0`.
    pub fn new(mean: Vec4<T>, cov: Mat4<T>) -> Result<Self> {
        let s = GaussianState { mean, cov };
        s.validate()?;
        Ok(s)
    }

    pub fn vacuum() -> Self {
        GaussianState { mean: Vec4::zeros(), cov: Mat4::identity() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.mean.0.iter().chain(self.cov.rows().iter().flatten()).any(|x| !x.is_finite()) {
            return Err(Error::InvalidState("finiteness"));
        }
        let scale = T::one().max(self.cov.max_abs());
        if self.cov.max_abs_diff(&self.cov.transpose()) > structural_tol::<T>() * scale {
            return Err(Error::InvalidState("covariance symmetry"));
        }
        if self.uncertainty_min_eigenvalue() < -physical_tol::<T>() * scale {
            return Err(Error::InvalidState("the uncertainty relation"));
        }
        Ok(())
    }

    /// Smallest eigenvalue of the Hermitian matrix `Σ + iΩ`.
    pub fn uncertainty_min_eigenvalue(&self) -> T {
        let m = complexify(&self.cov) + omega::<T>().map(|w| Complex::new(T::zero(), w));
        hermitian_eigenvalues(&m)[0]
    }

    /// Symplectic eigenvalues `ν₋ ≤ ν₊`; both equal one for a pure state.
    ///
    /// With `Σ = L·Lᵀ`, the Hermitian matrix `Lᵀ(iΩ)L` has spectrum `±ν`,
    /// which keeps the degenerate (pure) case well conditioned. Returns NaN
    /// when `Σ` is not positive definite.
    pub fn symplectic_eigenvalues(&self) -> [T; 2] {
        let Some(l) = cholesky(&self.cov) else {
            return [T::nan(); 2];
        };
        let iw = omega::<T>().map(|w| Complex::new(T::zero(), w));
        let lc = complexify(&l);
        let eig = hermitian_eigenvalues(&lc.transpose().matmul(&iw).matmul(&lc));
        [eig[2], eig[3]]
    }

    pub fn is_pure(&self) -> bool {
        let tol = physical_tol::<T>();
        self.symplectic_eigenvalues().iter().all(|&nu| (nu - T::one()).abs() <= tol)
    }
}

/// Real 4×4 matrix preserving the symplectic form, `U Ω Uᵀ = Ω`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymplecticTransform<T> {
    matrix: Mat4<T>,
}

impl<T: Real> SymplecticTransform<T> {
    pub fn new(matrix: Mat4<T>) -> Result<Self> {
        let dev = symplectic_deviation(&matrix);
        let scale = T::one().max(matrix.max_abs() * matrix.max_abs());
        if !(dev <= structural_tol::<T>() * scale) {
            return Err(Error::NotSymplectic { deviation: dev.to_f64_lossy() });
        }
        Ok(SymplecticTransform { matrix })
    }

    pub fn identity() -> Self {
        SymplecticTransform { matrix: Mat4::identity() }
    }

    pub fn matrix(&self) -> &Mat4<T> {
        &self.matrix
    }

    /// `self` applied after `first`.
    pub fn compose(&self, first: &Self) -> Self {
        SymplecticTransform { matrix: self.matrix.matmul(&first.matrix) }
    }
}

/// Largest entry of `|U Ω Uᵀ − Ω|`.
pub fn symplectic_deviation<T: Real>(u: &Mat4<T>) -> T {
    let w = omega::<T>();
    u.congruence(&w).max_abs_diff(&w)
}

/// Displaced squeezed vacuum in both modes with identical `α` and `r`.
pub fn make_dsv_pair<T: Real>(alpha_mag: T, delta: T, r: T) -> Result<GaussianState<T>> {
    check_non_negative("alpha", alpha_mag)?;
    check_non_negative("r", r)?;
    check_param("delta", delta, true, "must be finite")?;
    let two = T::lit(2.0);
    let (s, c) = delta.sin_cos();
    let d = two * alpha_mag;
    let (up, down) = ((two * r).exp(), (-two * r).exp());
    Ok(GaussianState {
        mean: Vec4([d * c, d * s, d * c, d * s]),
        cov: Mat4::from_diag([up, down, up, down]),
    })
}

/// Coherent state (real amplitude) in mode `a`, squeezed vacuum in mode `b`.
pub fn make_coherent_squeezed<T: Real>(alpha_mag: T, r: T) -> Result<GaussianState<T>> {
    check_non_negative("alpha", alpha_mag)?;
    check_non_negative("r", r)?;
    let two = T::lit(2.0);
    let (o, l) = (T::zero(), T::one());
    Ok(GaussianState {
        mean: Vec4([two * alpha_mag, o, o, o]),
        cov: Mat4::from_diag([l, l, (two * r).exp(), (-two * r).exp()]),
    })
}

/// Two-mode squeezing by a parametric amplifier of gain `g`.
pub fn opa_transform<T: Real>(g: T) -> SymplecticTransform<T> {
    let (c, s, o) = (g.cosh(), g.sinh(), T::zero());
    SymplecticTransform {
        matrix: Mat4::from_rows([[c, o, s, o], [o, c, o, -s], [s, o, c, o], [o, -s, o, c]]),
    }
}

/// Rotation by `φ` of mode `a`; mode `b` untouched.
pub fn phase_transform<T: Real>(phi: T) -> SymplecticTransform<T> {
    let (s, c) = phi.sin_cos();
    let (o, l) = (T::zero(), T::one());
    SymplecticTransform {
        matrix: Mat4::from_rows([[c, -s, o, o], [s, c, o, o], [o, o, l, o], [o, o, o, l]]),
    }
}

/// `d/dφ` of the phase-shift matrix: rotated block derivative, zero on mode `b`.
pub fn phase_transform_derivative<T: Real>(phi: T) -> Mat4<T> {
    let (s, c) = phi.sin_cos();
    let o = T::zero();
    Mat4::from_rows([[-s, -c, o, o], [c, -s, o, o], [o, o, o, o], [o, o, o, o]])
}

pub fn apply_symplectic<T: Real>(state: &GaussianState<T>, u: &SymplecticTransform<T>) -> GaussianState<T> {
    GaussianState { mean: u.matrix.matvec(&state.mean), cov: u.matrix.congruence(&state.cov) }
}

/// Mixes each mode with vacuum at rate `L`.
pub fn apply_loss<T: Real>(state: &GaussianState<T>, loss: T) -> Result<GaussianState<T>> {
    check_loss(loss)?;
    let keep = T::one() - loss;
    Ok(GaussianState {
        mean: state.mean.scale(keep.sqrt()),
        cov: state.cov.scale(keep) + Mat4::identity().scale(loss),
    })
}

/// Total mean photon number `¼(tr Σ + |M|²) − 1`.
pub fn mean_photon_number<T: Real>(state: &GaussianState<T>) -> T {
    let m = state.mean.norm();
    (state.cov.trace() + m * m) / T::lit(4.0) - T::one()
}

/// Input → amplifier → phase shift → loss, as configured.
pub fn evolve<T: Real>(config: &InterferometerConfig<T>, family: InputFamily) -> Result<GaussianState<T>> {
    config.validate()?;
    let input = family.input_state(config)?;
    let u = phase_transform(config.phi).compose(&opa_transform(config.g));
    apply_loss(&apply_symplectic(&input, &u), config.loss)
}
