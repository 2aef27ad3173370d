//! Closed-form predictions: the quantum transmission rate, the outgoing
//! soliton parameters of a split soliton, and Zakharov–Shabat scattering
//! data of `α sech x`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::delta_linear::scattering_coefficients;
use crate::nls_evolution::SolitonParams;
use crate::quadrature::integrate_adaptive;
use crate::special::{complex_log_gamma, digamma, reciprocal_gamma};
use crate::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `T_q(v) = v²/(v² + q²)`, the fraction of a plane wave transmitted at
/// frequency `v`.
pub fn transmission_theory(q: f64, v: f64) -> Result<f64> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(Error::InvalidArgument(format!("v must be positive, got {v}")));
    }
    if !(q >= 0.0 && q.is_finite()) {
        return Err(Error::Unsupported(format!("q = {q}")));
    }
    Ok(v * v / (v * v + q * q))
}

/// `q²/(v² + q²) = 1 − T_q(v)`.
pub fn reflection_theory(q: f64, v: f64) -> Result<f64> {
    transmission_theory(q, v)?;
    Ok(q * q / (v * v + q * q))
}

/// Maps an angle into `(−π, π]`.
pub fn wrap_phase(theta: f64) -> f64 {
    let w = theta.rem_euclid(2.0 * PI);
    if w > PI {
        w - 2.0 * PI
    } else {
        w
    }
}

const PHI0_CUTOFF: f64 = 12.0;

/// `φ₀(ω) = ∫₀^∞ log(1 + sin²πω / cosh²πζ) · ζ/(ζ² + (2ω−1)²) dζ`, by
/// adaptive Gauss–Kronrod on `[0, 12]`. The neglected tail is below
/// `sin²πω·e^{−24π}/(24π)`.
///
/// ```
/// use solsplit_core::soliton_theory::phi0;
/// assert_eq!(phi0(1.0, 1e-10).unwrap(), 0.0);
/// assert!(phi0(0.5, 1e-10).is_err());
/// ```
pub fn phi0(omega: f64, tol: f64) -> Result<f64> {
    if !(omega > 0.0 && omega <= 1.0) {
        return Err(Error::InvalidArgument(format!("omega must lie in (0, 1], got {omega}")));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tol = {tol}")));
    }
    if omega == 0.5 {
        return Err(Error::Divergence("phi0 diverges at omega = 1/2".into()));
    }
    let s2 = (PI * omega).sin().powi(2);
    if s2 < 1e-300 || omega == 1.0 {
        return Ok(0.0);
    }
    let m2 = (2.0 * omega - 1.0).powi(2);
    let tail = s2 * (-2.0 * PI * PHI0_CUTOFF).exp() / (2.0 * PI * PHI0_CUTOFF);
    if tail > 0.5 * tol {
        return Err(Error::InvalidArgument(format!("tol {tol:e} below the truncation error {tail:e}")));
    }
    integrate_adaptive(
        |z| (s2 / (PI * z).cosh().powi(2)).ln_1p() * z / (z * z + m2),
        0.0,
        PHI0_CUTOFF,
        0.5 * tol,
    )
}

/// A predicted phase: a value, no soliton in the channel, or the threshold
/// `2|coefficient| = 1` where `φ₀` diverges.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Phase {
    Defined(f64),
    Absent,
    UndefinedAtThreshold,
}

impl Phase {
    pub fn value(&self) -> Option<f64> {
        match self {
            Phase::Defined(v) => Some(*v),
            _ => None,
        }
    }
}

/// Asymptotic amplitudes and phases of the transmitted and reflected
/// solitons.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutgoingPrediction {
    pub a_t: f64,
    pub a_r: f64,
    pub phi_t: Phase,
    pub phi_r: Phase,
    pub t_coeff: Complex64,
    pub r_coeff: Complex64,
}

fn channel(coeff: Complex64, x0: f64, v: f64) -> Result<(f64, Phase)> {
    let w = coeff.norm();
    let excess = 2.0 * w - 1.0;
    if excess.abs() <= 1e-12 {
        return Ok((0.0, Phase::UndefinedAtThreshold));
    }
    if excess < 0.0 {
        return Ok((0.0, Phase::Absent));
    }
    let a = excess;
    let phase = coeff.arg() + phi0(w, 1e-10)? + (1.0 - a * a) * x0.abs() / (2.0 * v);
    Ok((a, Phase::Defined(wrap_phase(phase))))
}

/// `A = (2|c| − 1)₊` and `φ = arg c + φ₀(|c|) + (1 − A²)|x₀|/2v` for
/// `c = t_q(v)` (transmitted) and `c = r_q(v)` (reflected). Phases are
/// wrapped into `(−π, π]`.
///
/// ```
/// use solsplit_core::soliton_theory::outgoing_prediction;
/// let p = outgoing_prediction(15.0, 15.0, -10.0).unwrap();
/// assert!((p.a_t - (2f64.sqrt() - 1.0)).abs() < 1e-12);
/// assert!((p.a_r - p.a_t).abs() < 1e-12);
/// ```
pub fn outgoing_prediction(q: f64, v: f64, x0: f64) -> Result<OutgoingPrediction> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(Error::InvalidArgument(format!("v must be positive, got {v}")));
    }
    if !x0.is_finite() {
        return Err(Error::InvalidArgument(format!("x0 = {x0}")));
    }
    let s = scattering_coefficients(q, v)?;
    let (a_t, phi_t) = channel(s.t, x0, v)?;
    let (a_r, phi_r) = channel(s.r, x0, v)?;
    Ok(OutgoingPrediction { a_t, a_r, phi_t, phi_r, t_coeff: s.t, r_coeff: s.r })
}

/// Zakharov–Shabat scattering data of `α sech x` at a spectral point.
/// `r` is infinite at zeros of `a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZSData {
    pub alpha: f64,
    pub a: Complex64,
    pub b: Complex64,
    pub r: Complex64,
    pub lambda: Complex64,
}

/// Discrete eigenvalue, norming constant and `a′(λ₀)` for `½ < α < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZSDiscreteData {
    pub alpha: f64,
    pub lambda0: Complex64,
    pub gamma0: Complex64,
    pub a_prime: Complex64,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidArgument(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    Ok(())
}

/// `a(λ) = Γ(½−iλ)² / (Γ(½+α−iλ) Γ(½−α−iλ))`, `b(λ) = i sin πα / cosh πλ`,
/// `r = b/a`.
pub fn zs_scattering_data(alpha: f64, lambda: Complex64) -> Result<ZSData> {
    check_alpha(alpha)?;
    let z = 0.5 - I * lambda;
    let ln_num = complex_log_gamma(z)?;
    let a = (2.0 * ln_num).exp() * reciprocal_gamma(z + alpha) * reciprocal_gamma(z - alpha);
    let ch = (PI * lambda).cosh();
    if ch.norm() == 0.0 {
        return Err(Error::Pole(format!("cosh(pi lambda) = 0 at lambda = {lambda}")));
    }
    let b = I * (PI * alpha).sin() / ch;
    Ok(ZSData { alpha, a, b, r: b / a, lambda })
}

/// `a′(λ) = −i a(λ)[2ψ(½−iλ) − ψ(½+α−iλ) − ψ(½−α−iλ)]` away from zeros of
/// `a`.
pub fn zs_a_derivative(alpha: f64, lambda: Complex64) -> Result<Complex64> {
    let d = zs_scattering_data(alpha, lambda)?;
    let z = 0.5 - I * lambda;
    let lg = 2.0 * digamma(z)? - digamma(z + alpha)? - digamma(z - alpha)?;
    Ok(-I * d.a * lg)
}

/// `λ₀ = i(α − ½)`, `γ₀ = b(λ₀)`, and `a′(λ₀) = −i Γ(α)²/Γ(2α)`: the limit
/// of the logarithmic-derivative formula at the simple zero, where
/// `a ψ(½−α−iλ)` tends to `−Γ(α)²/Γ(2α)`.
pub fn zs_discrete_data(alpha: f64) -> Result<ZSDiscreteData> {
    if !(alpha > 0.5 && alpha < 1.0) {
        return Err(Error::NoEigenvalue(format!(
            "alpha sech x has a discrete eigenvalue with these formulas only for 1/2 < alpha < 1, got {alpha}"
        )));
    }
    let lambda0 = I * (alpha - 0.5);
    let gamma0 = zs_scattering_data(alpha, lambda0)?.b;
    let z = 0.5 - I * lambda0;
    let residue = (2.0 * complex_log_gamma(z)? - complex_log_gamma(z + alpha)?).exp();
    Ok(ZSDiscreteData { alpha, lambda0, gamma0, a_prime: -I * residue })
}

/// Long-time behaviour of `NLS₀(α sech)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AsymptoticSoliton {
    /// A standing soliton of amplitude `2α − 1` at the origin.
    Soliton(SolitonParams),
    /// `α < ½`: pure radiation decaying like `t^{−1/2}`.
    Radiation,
    /// `α = ½`: no soliton; decay like `(log t / t)^{1/2}`.
    Threshold,
}

/// `(1/π)∫_{−∞}^0 log(1+|r(sζ)|²) ζ/(ζ² + (α−½)²) dζ` with the spectral
/// variable rescaled by `scale`; `scale = 1` is the plain integral.
pub fn phase_integral(alpha: f64, scale: f64, tol: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if alpha == 0.5 {
        return Err(Error::Divergence("the phase integral diverges at alpha = 1/2".into()));
    }
    let s2 = (PI * alpha).sin().powi(2);
    let m2 = (alpha - 0.5).powi(2);
    // log(1+|r|²) = −log(1 − |b|²) on the real axis
    let cut = PHI0_CUTOFF / scale;
    let v = integrate_adaptive(
        |z| -(-(s2 / (PI * scale * z).cosh().powi(2))).ln_1p() * z / (z * z + m2),
        0.0,
        cut,
        tol,
    )?;
    Ok(-v / PI)
}

/// `arg γ₀ − arg a′(λ₀) + I`, with `I` the phase
/// integral at `scale = 1`.
pub fn norming_phase(alpha: f64) -> Result<f64> {
    let d = zs_discrete_data(alpha)?;
    Ok(d.gamma0.arg() - d.a_prime.arg() + phase_integral(alpha, 1.0, 1e-12)?)
}

/// Amplitude `2α−1` at `x = 0`, velocity 0, for `α > ½`. The reported phase
/// is `π − ` [`norming_phase`], i.e. minus the phase integral, which
/// vanishes at `α = 1` where `α sech` is itself the soliton.
pub fn asymptotic_soliton(alpha: f64) -> Result<AsymptoticSoliton> {
    check_alpha(alpha)?;
    if alpha == 0.5 {
        return Ok(AsymptoticSoliton::Threshold);
    }
    if alpha < 0.5 {
        return Ok(AsymptoticSoliton::Radiation);
    }
    let phase = PI - norming_phase(alpha)?;
    Ok(AsymptoticSoliton::Soliton(SolitonParams::new(2.0 * alpha - 1.0, 0.0, 0.0, wrap_phase(phase))))
}

/// Which reading of the phase integral reproduces `φ₀`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalingVerdict {
    Zeta,
    TwoZeta,
    Neither,
}

/// `φ₀(α)` next to minus the phase integral at scales 1 and 2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Phi0CrossCheck {
    pub alpha: f64,
    pub phi0: f64,
    pub integral_zeta: f64,
    pub integral_two_zeta: f64,
}

impl Phi0CrossCheck {
    pub fn verdict(&self, tol: f64) -> ScalingVerdict {
        if (self.phi0 - self.integral_zeta).abs() <= tol {
            ScalingVerdict::Zeta
        } else if (self.phi0 - self.integral_two_zeta).abs() <= tol {
            ScalingVerdict::TwoZeta
        } else {
            ScalingVerdict::Neither
        }
    }
}

/// Evaluates both phase formulas at each `α ∈ (½, 1)`.
pub fn phi0_cross_check(alphas: &[f64]) -> Result<Vec<Phi0CrossCheck>> {
    alphas
        .iter()
        .map(|&alpha| {
            if !(alpha > 0.5 && alpha < 1.0) {
                return Err(Error::NoEigenvalue(format!("alpha = {alpha}")));
            }
            Ok(Phi0CrossCheck {
                alpha,
                phi0: phi0(alpha, 1e-12)?,
                integral_zeta: -phase_integral(alpha, 1.0, 1e-12)?,
                integral_two_zeta: -phase_integral(alpha, 2.0, 1e-12)?,
            })
        })
        .collect()
}

/// Overall verdict across several `α`: a scaling is reported only when it
/// matches at every point.
pub fn cross_check_verdict(checks: &[Phi0CrossCheck], tol: f64) -> ScalingVerdict {
    let first = match checks.first() {
        Some(c) => c.verdict(tol),
        None => return ScalingVerdict::Neither,
    };
    if checks.iter().all(|c| c.verdict(tol) == first) {
        first
    } else {
        ScalingVerdict::Neither
    }
}
