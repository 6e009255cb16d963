//! Quantum Fisher information of the encoded phase.
//!
//! [`qfi_general`] evaluates the matrix formula on the propagated state in
//! the complex basis `M = H·M_φ`, `Σ = H·Σ_φ·Hᵀ` (plain transposes):
//!
//! ```text
//! F = ½ Tr{ ∂Σ [Σ (∂Σ)⁻¹ Σᵀ + ¼ Ω (∂Σ)⁻¹ Ωᵀ]⁻¹ } + ∂Mᵀ Σ⁻¹ ∂M
//! ```
//!
//! with the real block form [`omega`] inside the bracket. Since
//! `H⁻¹ Ω H⁻ᵀ = 2iΩ`, this is the same number as the real-basis bracket
//! `Σ (∂Σ)⁻¹ Σ − Ω (∂Σ)⁻¹ Ωᵀ`, and it reproduces every closed form below.
//!
//! The general formula loses several digits to cancellation at strong
//! squeezing, so it runs in the scalar's [`Real::Work`] precision.
//! The closed forms are evaluated directly in `T`.

use crate::error::{Error, Result};
use crate::gaussian::{
    apply_loss, check_loss, check_non_negative, check_param, omega, opa_transform, phase_transform,
    phase_transform_derivative, GaussianState, InputFamily, InterferometerConfig,
};
use crate::linalg::{complexify, condition_number, Lu, Mat4, Vec4};
use crate::scalar::Real;
use num_complex::Complex;

/// Condition number of `∂Σ` above which the general formula is refused.
pub const SINGULARITY_THRESHOLD: f64 = 1e12;
/// Derivative norms below this carry no phase information.
pub const NEGLIGIBLE_DERIVATIVE: f64 = 1e-12;
/// Largest accepted `8r + 4g` in the closed forms.
pub const MAX_EXPONENT: f64 = 600.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QfiResult<T> {
    pub value: T,
    /// Trace (covariance) part of the formula.
    pub covariance_term: T,
    /// Displacement part of the formula.
    pub mean_term: T,
    /// Frobenius norm of `∂_φΣ` in the real basis.
    pub derivative_norm: T,
}

/// The state in the complex basis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexForm<T> {
    pub mean: Vec4<Complex<T>>,
    pub cov: Mat4<Complex<T>>,
}

/// `H = ½ [[1, i], [1, −i]]` on each mode.
pub fn h_matrix<T: Real>() -> Mat4<Complex<T>> {
    let h = T::lit(0.5);
    let (o, re, im) = (Complex::new(T::zero(), T::zero()), Complex::new(h, T::zero()), Complex::new(T::zero(), h));
    Mat4::from_rows([[re, im, o, o], [re, -im, o, o], [o, o, re, im], [o, o, re, -im]])
}

/// `H⁻¹ = [[1, 1], [−i, i]]` on each mode.
pub fn h_inverse<T: Real>() -> Mat4<Complex<T>> {
    let (o, l, i) = (Complex::new(T::zero(), T::zero()), Complex::new(T::one(), T::zero()), Complex::new(T::zero(), T::one()));
    Mat4::from_rows([[l, l, o, o], [-i, i, o, o], [o, o, l, l], [o, o, -i, i]])
}

pub fn to_complex_form<T: Real>(state: &GaussianState<T>) -> ComplexForm<T> {
    let h = h_matrix::<T>();
    ComplexForm {
        mean: h.matvec(&state.mean.map(Complex::from)),
        cov: h.congruence(&complexify(&state.cov)),
    }
}

impl<T: Real> ComplexForm<T> {
    /// Back to quadratures through `H⁻¹`; imaginary residue is dropped.
    pub fn to_real(&self) -> GaussianState<T> {
        let hi = h_inverse::<T>();
        GaussianState { mean: hi.matvec(&self.mean).map(|z| z.re), cov: hi.congruence(&self.cov).map(|z| z.re) }
    }
}

/// Propagated state together with its exact `φ`-derivatives.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseDerivative<T> {
    pub state: GaussianState<T>,
    pub d_mean: Vec4<T>,
    pub d_cov: Mat4<T>,
}

/// Runs the pipeline and differentiates it with `W = U_PE·U_OPA`,
/// `∂W = (∂U_PE)·U_OPA`.
pub fn evolve_with_derivative<T: Real>(config: &InterferometerConfig<T>, family: InputFamily) -> Result<PhaseDerivative<T>> {
    config.validate()?;
    let input = family.input_state(config)?;
    let opa = *opa_transform(config.g).matrix();
    let w = phase_transform(config.phi).matrix().matmul(&opa);
    let dw = phase_transform_derivative(config.phi).matmul(&opa);
    let keep = T::one() - config.loss;
    let unitary = GaussianState { mean: w.matvec(&input.mean), cov: w.congruence(&input.cov) };
    let state = apply_loss(&unitary, config.loss)?;
    let cw = dw.matmul(&input.cov).matmul(&w.transpose());
    Ok(PhaseDerivative {
        state,
        d_mean: dw.matvec(&input.mean).scale(keep.sqrt()),
        d_cov: (cw + cw.transpose()).scale(keep),
    })
}

/// General formula for two displaced squeezed vacua.
pub fn qfi_general<T: Real>(config: &InterferometerConfig<T>) -> Result<QfiResult<T>> {
    qfi_general_with(config, InputFamily::DsvPair)
}

/// General formula for any input family.
pub fn qfi_general_with<T: Real>(config: &InterferometerConfig<T>, family: InputFamily) -> Result<QfiResult<T>> {
    config.validate()?;
    let wide = evolve_with_derivative(&config.map(T::widen), family)?;
    let r = qfi_from_derivative(&wide)?;
    Ok(QfiResult {
        value: T::narrow(r.value),
        covariance_term: T::narrow(r.covariance_term),
        mean_term: T::narrow(r.mean_term),
        derivative_norm: T::narrow(r.derivative_norm),
    })
}

/// Evaluates the formula on a state and its derivatives, in `T` itself.
pub fn qfi_from_derivative<T: Real>(p: &PhaseDerivative<T>) -> Result<QfiResult<T>> {
    let derivative_norm = p.d_cov.frobenius_norm();
    let negligible = T::lit(NEGLIGIBLE_DERIVATIVE);
    if derivative_norm < negligible && p.d_mean.norm() < negligible {
        let o = T::zero();
        return Ok(QfiResult { value: o, covariance_term: o, mean_term: o, derivative_norm });
    }
    let h = h_matrix::<T>();
    let sigma = h.congruence(&complexify(&p.state.cov));
    let d_sigma = h.congruence(&complexify(&p.d_cov));
    let d_mean = h.matvec(&p.d_mean.map(Complex::from));

    let condition = condition_number(&d_sigma);
    let singular = |c: T| Error::SingularDerivative { condition: c.to_f64_lossy() };
    if !(condition <= T::lit(SINGULARITY_THRESHOLD)) {
        return Err(singular(condition));
    }
    let lu_d = Lu::new(&d_sigma).map_err(|_| singular(condition))?;
    let w = complexify(&omega::<T>());
    let quarter = Complex::from(T::lit(0.25));
    let bracket = sigma.matmul(&lu_d.solve_mat(&sigma.transpose())) + w.matmul(&lu_d.solve_mat(&w.transpose())).scale(quarter);
    let lu_b = Lu::new(&bracket).map_err(|_| singular(condition))?;
    let covariance_term = lu_b.solve_mat(&d_sigma).trace().re * T::lit(0.5);

    let lu_s = Lu::new(&sigma).map_err(|_| Error::InvalidState("invertible covariance"))?;
    let mean_term = d_mean.dot(&lu_s.solve(&d_mean)).re;
    Ok(QfiResult { value: covariance_term + mean_term, covariance_term, mean_term, derivative_norm })
}

fn check_range<T: Real>(r: T, g: T) -> Result<()> {
    let exponent = T::lit(8.0) * r + T::lit(4.0) * g;
    if exponent > T::lit(MAX_EXPONENT) {
        return Err(Error::OutOfRange { exponent: exponent.to_f64_lossy() });
    }
    Ok(())
}

fn checked_ratio<T: Real>(num: T, den: T, which: &'static str) -> Result<T> {
    if den == T::zero() || !den.is_finite() {
        return Err(Error::DegenerateDenominator { which });
    }
    Ok(num / den)
}

/// Lossless closed form for displaced squeezed vacuum pairs.
pub fn qfi_lossless_general<T: Real>(alpha_mag: T, delta: T, r: T, g: T) -> Result<T> {
    check_non_negative("alpha", alpha_mag)?;
    check_non_negative("r", r)?;
    check_non_negative("g", g)?;
    check_param("delta", delta, true, "must be finite")?;
    check_range(r, g)?;
    let l = |x: f64| T::lit(x);
    let a2 = alpha_mag * alpha_mag;
    let (s, c) = delta.sin_cos();
    let e4r = (l(4.0) * r).exp();
    let bracket = l(8.0) * a2 * (l(2.0) * r).exp() * (T::one() + (-l(4.0) * g).exp()) * ((l(4.0) * (r + g)).exp() * c * c + s * s)
        + (T::one() + (l(8.0) * r).exp()) * (T::one() + (l(4.0) * g).cosh());
    Ok((bracket / (l(4.0) * e4r) - T::one()).max(T::zero()))
}

/// Lossless closed form for two squeezed vacua.
pub fn qfi_lossless_svac<T: Real>(r: T, g: T) -> Result<T> {
    check_non_negative("r", r)?;
    check_non_negative("g", g)?;
    check_range(r, g)?;
    let l = |x: f64| T::lit(x);
    let e4r = (l(4.0) * r).exp();
    let bracket = T::one() + (l(8.0) * r).exp() + l(2.0) * e4r * (l(4.0) * g).cosh() * (l(4.0) * r).cosh();
    Ok((bracket / (l(4.0) * e4r) - T::one()).max(T::zero()))
}

/// Closed form for two squeezed vacua under loss, `(1−L)²Δ₁/(4Δ₂)`.
pub fn qfi_lossy_svac<T: Real>(r: T, g: T, loss: T) -> Result<T> {
    check_non_negative("r", r)?;
    check_non_negative("g", g)?;
    check_loss(loss)?;
    check_range(r, g)?;
    let l = |x: f64| T::lit(x);
    let one = T::one();
    let (ll, k) = (loss, one - loss);
    let l2 = ll * ll;
    let e4r = (l(4.0) * r).exp();
    let e8r = (l(8.0) * r).exp();
    let (ch2g, ch2r) = ((l(2.0) * g).cosh(), (l(2.0) * r).cosh());
    let (ch4g, ch4r) = ((l(4.0) * g).cosh(), (l(4.0) * r).cosh());

    let d1 = l(4.0) * e4r * (ll - l2) * ch2g * ch2r * (ch4g + l(2.0) * ch4r - l(3.0))
        + (one + e8r) * (l(2.0) - l(2.0) * ll + l2)
        - l(2.0) * e4r * (l(4.0) - l(4.0) * ll + l(3.0) * l2)
        + l(2.0) * e4r * ch4g * ((l(2.0) - l(2.0) * ll + l(3.0) * l2) * ch4r - l2);
    let d2 = e4r * l2 * (k * k * ch4g + l(2.0) * (l(2.0) - l(2.0) * ll + l2) * ch2r * ch2r)
        + l(2.0) * (l(2.0) * r).exp() * (one + e4r) * k * ll * (one - ll + l2) * ch2g
        + e4r * (l(2.0) - l(4.0) * ll + l(5.0) * l2)
        + e4r * l2 * (l2 - l(2.0) * ll - l(2.0));
    let ratio = checked_ratio(d1, l(4.0) * d2, "Delta2")?;
    Ok((k * k * ratio).max(T::zero()))
}

/// Closed form for a coherent state (mode `a`) and a squeezed vacuum
/// (mode `b`) under loss, `((1−L)/4)[γ₁/γ₂ + γ₃/γ₄]`.
pub fn qfi_lossy_cs<T: Real>(alpha_mag: T, r: T, g: T, loss: T) -> Result<T> {
    check_non_negative("alpha", alpha_mag)?;
    check_non_negative("r", r)?;
    check_non_negative("g", g)?;
    check_loss(loss)?;
    check_range(r, g)?;
    let l = |x: f64| T::lit(x);
    let one = T::one();
    let (ll, k) = (loss, one - loss);
    let (l2, l3, l4) = (ll * ll, ll * ll * ll, ll * ll * ll * ll);
    let e = (l(2.0) * r).exp();
    let (e2, pe) = (e * e, one + e);
    let c = (l(2.0) * g).cosh();
    let (chr, chg, shg) = (r.cosh(), g.cosh(), g.sinh());

    let gamma1 = l(16.0) * k * chr * chr * shg * shg
        * (k * ll * pe * pe * c * c
            + ((one + e2) * (l(2.0) - l(3.0) * ll + l(4.0) * l2) + l(2.0) * e * ll * (l(3.0) - l(4.0) * ll)) * c
            - (one + e2) * (l(2.0) - l(4.0) * ll + l(3.0) * l2)
            + l(2.0) * e * (l(4.0) - l(6.0) * ll + l(5.0) * l2));
    let gamma2 = pe * pe * (l(4.0) * ll * (one - l(2.0) * ll + l(2.0) * l2 - l3) * c + k * k * l2 * (l(4.0) * g).cosh())
        + e * (l(8.0) - l(16.0) * ll + l(18.0) * l2 - l(12.0) * l3 + l(6.0) * l4)
        + (one + e2) * (l(5.0) * l2 - l(6.0) * l3 + l(3.0) * l4);
    let gamma3 = l(8.0) * alpha_mag * alpha_mag * chg * chg * (one - e * (one - l(3.0) * ll) - ll + pe * k * c);
    let gamma4 = one - l(2.0) * ll + pe * l2 + pe * k * ll * c;
    let total = checked_ratio(gamma1, gamma2, "gamma2")? + checked_ratio(gamma3, gamma4, "gamma4")?;
    Ok((k / l(4.0) * total).max(T::zero()))
}

/// Closed form matching the configuration, where one exists.
pub fn qfi_closed<T: Real>(config: &InterferometerConfig<T>, family: InputFamily) -> Result<T> {
    config.validate()?;
    let c = config;
    match family {
        InputFamily::DsvPair if c.alpha_mag == T::zero() => qfi_lossy_svac(c.r, c.g, c.loss),
        InputFamily::DsvPair if c.loss == T::zero() => qfi_lossless_general(c.alpha_mag, c.delta, c.r, c.g),
        InputFamily::DsvPair => Err(Error::NoClosedForm("displaced inputs under loss")),
        InputFamily::CoherentSqueezed => qfi_lossy_cs(c.alpha_mag, c.r, c.g, c.loss),
    }
}

/// Shot-noise limit `N`.
pub fn snl<T: Real>(n: T) -> T {
    n
}

/// Heisenberg limit `N²`.
pub fn hl<T: Real>(n: T) -> T {
    n * n
}

/// Photon number after the amplifier for displaced squeezed vacuum pairs,
/// `N_in cosh 2g + 2|α|² cos 2δ sinh 2g + 2 sinh²g` with `N_in = 2(|α|² + sinh²r)`.
pub fn total_photon_number<T: Real>(config: &InterferometerConfig<T>) -> T {
    let two = T::lit(2.0);
    let a2 = config.alpha_mag * config.alpha_mag;
    let sr = config.r.sinh();
    let sg = config.g.sinh();
    let n_in = two * (a2 + sr * sr);
    n_in * (two * config.g).cosh() + two * a2 * (two * config.delta).cos() * (two * config.g).sinh() + two * sg * sg
}

/// Photon number after the amplifier for either input family.
pub fn total_photon_number_with<T: Real>(config: &InterferometerConfig<T>, family: InputFamily) -> T {
    match family {
        InputFamily::DsvPair => total_photon_number(config),
        InputFamily::CoherentSqueezed => {
            let sr = config.r.sinh();
            let sg = config.g.sinh();
            let n_in = config.alpha_mag * config.alpha_mag + sr * sr;
            n_in * (T::lit(2.0) * config.g).cosh() + T::lit(2.0) * sg * sg
        }
    }
}
