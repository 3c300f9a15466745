//! Green functions G(x, y; W) of every self-adjoint realization.
//!
//! With the extension-adapted pair (u, ũ) and the solution υ₁ decaying at
//! infinity written as υ₁ = a·u + b·ũ,
//!   G = Ω u(x)u(y) − ũ(x>)u(x<)/Wr(u, ũ),  Ω = −(a/b)/Wr(u, ũ),
//! equivalently G = −u(x<)υ₁(x>)/(b·Wr(u, ũ)), which is the form evaluated
//! (no cancellation between growing terms at large x). Derivative jump:
//! ∂ₓG(y⁺) − ∂ₓG(y⁻) = −1.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::basis::{eval_in, pair_wronskian, omega0_r3, omega_half_r5, Setting, SolutionId};
use crate::error::{Error, Result};
use crate::model::{CouplingParams, ExtensionParam, RangeId};
use crate::special_fns::{gamma, log_gamma, rgamma};
use crate::spectral::discrete_spectrum;

/// Relative distance to a discrete level below which real W is rejected.
pub const SPECTRUM_GUARD: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GreenSample {
    pub x: f64,
    pub y: f64,
    pub w: Complex64,
    pub value: Complex64,
}

/// Coefficients (a, b) of υ₁ = a·u + b·ũ (R1: u = u₁, a = 0, b = ω with
/// the convention Wr(u, ũ) := −1, ũ := −υ₁/ω).
fn decomposition(set: &Setting, ext: &ExtensionParam) -> Result<(Complex64, Complex64)> {
    let k0 = set.p.k0;
    let (s, c) = ext.angle_or_zero().sin_cos();
    let one = Complex64::new(1.0, 0.0);
    Ok(match set.range() {
        RangeId::R1 => (Complex64::new(0.0, 0.0), set.omega()?),
        RangeId::R2 | RangeId::R4 => {
            // υ₁ = A u₁ + B u₂
            let two_mu = 2.0 * set.mu;
            let a_ = set.lambda_2mu() * gamma(-two_mu)? * rgamma(set.alpha_m());
            let b_ = gamma(two_mu)? * rgamma(set.alpha_p());
            if set.range() == RangeId::R2 {
                let k1 = k0.powf(0.5 + set.mu.re);
                let k2 = k0.powf(0.5 - set.mu.re);
                (a_ * s / k1 + b_ * c / k2, -a_ * c / k1 + b_ * s / k2)
            } else {
                let ka = set.mu.im;
                let e1 = k0.sqrt() * Complex64::from_polar(1.0, ext.angle_or_zero() + ka * k0.ln());
                let (p1, p2) = (a_ / e1, b_ / e1.conj());
                (0.5 * (p1 + p2), Complex64::new(0.0, 0.5) * (p1 - p2))
            }
        }
        RangeId::R3 => {
            // Γ(α)υ₁ = ω₀u₁ − u₃
            let w0 = omega0_r3(set)?;
            let r = rgamma(set.alpha_p());
            (r * (w0 * s - c), r * (w0 * c + s))
        }
        RangeId::R5 => {
            // Γ(a)υ₁ = ω_{1/2}u₁ + u₅
            let wh = omega_half_r5(set)?;
            let r = rgamma(set.alpha_p());
            (r * (wh * s / k0 + c * one), r * (wh * c / k0 - s * one))
        }
    })
}

fn wr_pair(set: &Setting) -> Result<Complex64> {
    if set.range() == RangeId::R1 {
        return Ok(Complex64::new(-1.0, 0.0));
    }
    pair_wronskian(set)
}

fn check_args(p: &CouplingParams, ext: &ExtensionParam, x: f64, y: f64, w: Complex64) -> Result<Setting> {
    if !(x > 0.0 && y > 0.0 && x.is_finite() && y.is_finite()) {
        return Err(Error::Domain(format!("Green function needs x, y > 0, got ({x}, {y})")));
    }
    let set = Setting::new(p, w)?;
    if ext.range_id != set.range() {
        return Err(Error::InvalidExtension("extension/range mismatch".into()));
    }
    if w.im == 0.0 && w.re < 0.0 {
        let e = w.re;
        let near = discrete_spectrum(p, ext, (2.0 * e, 0.5 * e), usize::MAX)?;
        if let Some(l) = near.iter().find(|l| (l.energy - e).abs() < SPECTRUM_GUARD * l.energy.abs()) {
            return Err(Error::OnSpectrum(format!("{e} (level n = {} at {})", l.n, l.energy)));
        }
    }
    Ok(set)
}

/// Ω(W), the coefficient of u(x)u(y) (R1: none).
pub fn omega(p: &CouplingParams, ext: &ExtensionParam, w: Complex64) -> Result<Complex64> {
    let set = Setting::new(p, w)?;
    if set.range() == RangeId::R1 {
        return Err(Error::NotApplicable("range 1 has no extension-dependent Ω".into()));
    }
    let (a, b) = decomposition(&set, ext)?;
    if b.norm() == 0.0 {
        return Err(Error::OnSpectrum(format!("{w}")));
    }
    Ok(-(a / b) / wr_pair(&set)?)
}

/// G(x, y; W) and ∂ₓG(x, y; W).
pub fn green_with_derivative(
    p: &CouplingParams,
    ext: &ExtensionParam,
    x: f64,
    y: f64,
    w: Complex64,
) -> Result<(GreenSample, Complex64)> {
    let set = check_args(p, ext, x, y, w)?;
    let (_, b) = decomposition(&set, ext)?;
    let den = b * wr_pair(&set)?;
    if den.norm() == 0.0 || !den.re.is_finite() {
        return Err(Error::OnSpectrum(format!("{w}")));
    }
    let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
    let u = eval_in(&set, SolutionId::Principal, ext, lo)?;
    let v = eval_in(&set, SolutionId::V1, ext, hi)?;
    let value = -u.value * v.value / den;
    // ∂ₓ acts on whichever factor carries x
    let dx = if x <= y { -u.derivative * v.value / den } else { -u.value * v.derivative / den };
    Ok((GreenSample { x, y, w, value }, dx))
}

pub fn green(p: &CouplingParams, ext: &ExtensionParam, x: f64, y: f64, w: Complex64) -> Result<GreenSample> {
    Ok(green_with_derivative(p, ext, x, y, w)?.0)
}

/// The same G assembled as Ω u(x)u(y) − ũ(x>)u(x<)/Wr(u, ũ) (R1:
/// ω⁻¹υ₁(x>)u₁(x<)); accurate while e^{Re λ·max(x,y)} stays moderate.
pub fn green_display(p: &CouplingParams, ext: &ExtensionParam, x: f64, y: f64, w: Complex64) -> Result<GreenSample> {
    let set = check_args(p, ext, x, y, w)?;
    let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
    let value = if set.range() == RangeId::R1 {
        let u = eval_in(&set, SolutionId::U1, ext, lo)?.value;
        let v = eval_in(&set, SolutionId::V1, ext, hi)?.value;
        let lw = log_gamma(set.beta_p())?;
        u * v * (-lw).exp() / rgamma(set.alpha_p())
    } else {
        let om = omega(p, ext, w)?;
        let ux = eval_in(&set, SolutionId::Principal, ext, x)?.value;
        let uy = eval_in(&set, SolutionId::Principal, ext, y)?.value;
        let ul = eval_in(&set, SolutionId::Principal, ext, lo)?.value;
        let th = eval_in(&set, SolutionId::Conjugate, ext, hi)?.value;
        om * ux * uy - th * ul / wr_pair(&set)?
    };
    Ok(GreenSample { x, y, w, value })
}
