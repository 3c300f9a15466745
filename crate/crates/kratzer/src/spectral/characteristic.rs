//! Real characteristic functions on E < 0 whose zeros (or, for R4, whose
//! quantization points Θ = π/2 + πn) are the discrete levels.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{classify, canonical_angle, CouplingParams, ExtensionParam, RangeId};
use crate::special_fns::{digamma, digamma_real, log_gamma, log_gamma_real, trigamma_real, EULER_GAMMA};

/// |cos| below which a ±π/2-family angle is treated as the endpoint.
pub(crate) const ENDPOINT_COS: f64 = 1e-12;
/// Relative distance to a pole below which evaluation is refused.
pub const POLE_GUARD: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CharacteristicTag {
    /// F₂,ν = f₂ + tan ν (R2).
    F2nu,
    /// ω₃ = ψ(α) + ln(λ/k₀) − 2ψ(1) − tan ϑ (R3).
    Omega3,
    /// Θ(E), levels at Θ = π/2 + πn (R4).
    Theta,
    /// ω₅ = k₀ tan ε − ω_{1/2} (R5).
    Omega5,
    /// 1/Γ(α₊): R1 and the ±π/2 endpoints, levels at its zeros.
    ClosedForm,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CharacteristicFn {
    pub params: CouplingParams,
    pub range_id: RangeId,
    pub ext: ExtensionParam,
    pub tag: CharacteristicTag,
    /// μ for real-μ ranges, ϰ in R4.
    pub mu: f64,
}

fn tau_of(e: f64) -> Result<f64> {
    if !(e < 0.0) || !e.is_finite() {
        return Err(Error::Domain(format!("characteristic functions need finite E < 0, got {e}")));
    }
    Ok((-e).sqrt())
}

/// ψ(x)/Γ(x), finite at the poles of Γ.
fn psi_rgamma(x: f64) -> Result<f64> {
    if x <= 0.0 && x == x.round() {
        let m = -x;
        let (lf, _) = log_gamma_real(m + 1.0)?;
        let sign = if (m as i64) % 2 == 0 { -1.0 } else { 1.0 };
        return Ok(sign * lf.exp());
    }
    let (lg, s) = log_gamma_real(x)?;
    Ok(digamma_real(x)? * s * (-lg).exp())
}

/// ψ(b + d) − ψ(b) without the cancellation of two large ψ values.
fn digamma_diff(b: f64, d: f64) -> Result<f64> {
    let a = b + d;
    if a.min(b) < 20.0 {
        return Ok(digamma_real(a)? - digamma_real(b)?);
    }
    // ψ(z) ~ ln z − 1/2z − Σ B₂ₖ/(2k z^{2k}); the leading differences are
    // formed from d exactly
    const C: [f64; 6] = [1.0 / 12.0, -1.0 / 120.0, 1.0 / 252.0, -1.0 / 240.0, 1.0 / 132.0, -691.0 / 32760.0];
    let (ia2, ib2) = ((a * a).recip(), (b * b).recip());
    let mut series = C[0] * (-d * (a + b) * ia2 * ib2);
    let (mut pa, mut pb) = (ia2 * ia2, ib2 * ib2);
    for c in &C[1..] {
        series += c * (pa - pb);
        pa *= ia2;
        pb *= ib2;
    }
    Ok((d / b).ln_1p() + 0.5 * d / (a * b) - series)
}

fn rgamma_real(x: f64) -> Result<f64> {
    if x <= 0.0 && x == x.round() {
        return Ok(0.0);
    }
    let (lg, s) = log_gamma_real(x)?;
    Ok(s * (-lg).exp())
}

impl CharacteristicFn {
    pub fn new(p: &CouplingParams, ext: &ExtensionParam) -> Result<Self> {
        let class = classify(p)?;
        let r = class.range_id;
        if ext.range_id != r {
            return Err(Error::InvalidExtension(format!("extension for {:?} used in {:?}", ext.range_id, r)));
        }
        let endpoint = r != RangeId::R4 && r != RangeId::R1 && ext.angle_or_zero().cos().abs() < ENDPOINT_COS;
        let tag = match r {
            RangeId::R1 => CharacteristicTag::ClosedForm,
            _ if endpoint => CharacteristicTag::ClosedForm,
            RangeId::R2 => CharacteristicTag::F2nu,
            RangeId::R3 => CharacteristicTag::Omega3,
            RangeId::R4 => CharacteristicTag::Theta,
            RangeId::R5 => CharacteristicTag::Omega5,
        };
        Ok(Self { params: *p, range_id: r, ext: *ext, tag, mu: class.mu.magnitude })
    }

    fn t(&self) -> f64 {
        self.ext.angle_or_zero().tan()
    }

    fn cos(&self) -> f64 {
        self.ext.angle_or_zero().cos()
    }

    /// d₀ in ℰₙ = −g₁²/(d₀ + 2n)².
    fn pole_offset(&self) -> Option<f64> {
        match self.range_id {
            RangeId::R1 | RangeId::R2 => Some(1.0 + 2.0 * self.mu),
            RangeId::R3 => Some(1.0),
            RangeId::R5 => Some(2.0),
            RangeId::R4 => None,
        }
    }

    /// The endpoint energy ℰₙ (g₁ < 0 only; none in R4).
    pub fn pole(&self, n: u64) -> Option<f64> {
        let d0 = self.pole_offset()?;
        if self.params.g1 >= 0.0 {
            return None;
        }
        let g = self.params.g1 / (d0 + 2.0 * n as f64);
        Some(-g * g)
    }

    /// Index of the pole nearest to E, if E is within `rel` of it.
    pub fn near_pole(&self, e: f64, rel: f64) -> Option<u64> {
        let d0 = self.pole_offset()?;
        if self.params.g1 >= 0.0 || !(e < 0.0) {
            return None;
        }
        let nf = ((self.params.g1.abs() / (-e).sqrt() - d0) / 2.0).round();
        if nf < 0.0 {
            return None;
        }
        let n = nf as u64;
        let en = self.pole(n)?;
        ((e - en).abs() < rel * en.abs()).then_some(n)
    }

    /// The value without pole guarding (may be huge near a pole).
    pub(crate) fn raw(&self, e: f64) -> Result<f64> {
        let tau = tau_of(e)?;
        let p = &self.params;
        let g = p.g1 / (2.0 * tau);
        match self.tag {
            CharacteristicTag::ClosedForm => rgamma_real(0.5 * self.pole_offset().unwrap_or(1.0) + g),
            CharacteristicTag::F2nu => Ok(self.f2(tau)? + self.t()),
            CharacteristicTag::Omega3 => {
                Ok(digamma_real(0.5 + g)? + (2.0 * tau / p.k0).ln() + 2.0 * EULER_GAMMA - self.t())
            }
            CharacteristicTag::Omega5 => Ok(p.k0 * self.t() - self.omega_half(tau)?),
            CharacteristicTag::Theta => self.theta(tau),
        }
    }

    /// dχ/dE from the digamma/trigamma forms.
    pub fn derivative(&self, e: f64) -> Result<f64> {
        let tau = tau_of(e)?;
        let p = &self.params;
        let g1 = p.g1;
        let g = g1 / (2.0 * tau);
        let mu = self.mu;
        let t3 = 4.0 * tau * tau * tau;
        match self.tag {
            CharacteristicTag::ClosedForm => {
                let a = 0.5 * self.pole_offset().unwrap_or(1.0) + g;
                Ok(-psi_rgamma(a)? * g1 / t3)
            }
            CharacteristicTag::F2nu => {
                // f₂ψ(α₋) stays finite at the zeros of f₂ (Γ(α₋) poles)
                let (ap, am) = (0.5 + mu + g, 0.5 - mu + g);
                let f2 = self.f2(tau)?;
                if !(am <= 0.0 && am == am.round()) {
                    let dpsi = digamma_diff(am, 2.0 * mu)?;
                    return Ok(f2 * (dpsi * g1 / t3 - mu / (tau * tau)));
                }
                let f2_psi_m = {
                    let (lbm, sbm) = log_gamma_real(1.0 - 2.0 * mu)?;
                    let (lbp, _) = log_gamma_real(1.0 + 2.0 * mu)?;
                    let (lap, sap) = log_gamma_real(ap)?;
                    sbm * sap * (lbm - lbp + lap + 2.0 * mu * (2.0 * tau / p.k0).ln()).exp() * psi_rgamma(am)?
                };
                Ok((f2 * digamma_real(ap)? - f2_psi_m) * g1 / t3 - f2 * mu / (tau * tau))
            }
            CharacteristicTag::Omega3 => Ok(trigamma_real(0.5 + g)? * g1 / t3 - 0.5 / (tau * tau)),
            CharacteristicTag::Omega5 => {
                let tg = trigamma_real(1.0 + g)?;
                Ok(-(g1 * g1 * tg / t3 - g1 / (2.0 * tau * tau) + 0.5 / tau))
            }
            CharacteristicTag::Theta => {
                let ps = digamma(Complex64::new(0.5 + g, mu))?;
                Ok(-ps.im * g1 / t3 + mu / (2.0 * tau * tau))
            }
        }
    }

    /// f₂(E) = Γ(β₋)Γ(α₊)(λ/k₀)^{2μ}/(Γ(β₊)Γ(α₋)) at λ = 2τ.
    fn f2(&self, tau: f64) -> Result<f64> {
        let mu = self.mu;
        let g = self.params.g1 / (2.0 * tau);
        let (ap, am) = (0.5 + mu + g, 0.5 - mu + g);
        if ap <= 0.0 && ap == ap.round() {
            return Err(Error::PoleProximity(-tau * tau));
        }
        if am <= 0.0 && am == am.round() {
            return Ok(0.0);
        }
        let (lbm, sbm) = log_gamma_real(1.0 - 2.0 * mu)?;
        let (lbp, _) = log_gamma_real(1.0 + 2.0 * mu)?;
        let (lap, sap) = log_gamma_real(ap)?;
        let (lam, sam) = log_gamma_real(am)?;
        Ok(sbm * sap * sam * (lbm + lap - lbp - lam + 2.0 * mu * (2.0 * tau / self.params.k0).ln()).exp())
    }

    /// ω_{1/2}(E) = g₁C + g₁[ψ(a) + ln(λ/k₀)] − g₁ − λ/2, a = 1 + g₁/λ, λ = 2τ.
    fn omega_half(&self, tau: f64) -> Result<f64> {
        let g1 = self.params.g1;
        let a = 1.0 + g1 / (2.0 * tau);
        Ok(g1 * EULER_GAMMA + g1 * (digamma_real(a)? + (2.0 * tau / self.params.k0).ln()) - g1 - tau)
    }

    /// Θ(E) = θ + θ_Γ − Im ln Γ(1/2 + g₁/2τ + iϰ) + ϰ ln(k₀/2τ).
    fn theta(&self, tau: f64) -> Result<f64> {
        let ka = self.mu;
        let g = self.params.g1 / (2.0 * tau);
        let th_e = log_gamma(Complex64::new(0.5 + g, ka))?.im;
        Ok(self.ext.angle_or_zero() + theta_gamma(ka)? - th_e + ka * (self.params.k0 / (2.0 * tau)).ln())
    }

    /// lim χ(E) as E → 0⁻ for g₁ > 0.
    pub fn value_at_zero(&self) -> Result<f64> {
        let p = &self.params;
        if p.g1 <= 0.0 {
            return Err(Error::NotApplicable("the E → 0 limit is finite only for g1 > 0".into()));
        }
        match self.tag {
            CharacteristicTag::F2nu => Ok(self.t() - threshold_tan(p, self.range_id, self.mu)?),
            CharacteristicTag::Omega3 => Ok(threshold_tan(p, self.range_id, self.mu)? - self.t()),
            CharacteristicTag::Omega5 => Ok(p.k0 * (self.t() - threshold_tan(p, self.range_id, self.mu)?)),
            CharacteristicTag::Theta => {
                Ok(self.ext.angle_or_zero() + theta_gamma(self.mu)? + self.mu * (p.k0 / p.g1).ln())
            }
            CharacteristicTag::ClosedForm => Err(Error::NotApplicable("no threshold for closed-form cases".into())),
        }
    }

    /// The normalization weight Q² of a level at E from χ′(E).
    pub(crate) fn weight_sq(&self, e: f64) -> Result<f64> {
        let d = self.derivative(e)?;
        let c = self.cos();
        let k0 = self.params.k0;
        let q2 = match self.tag {
            CharacteristicTag::F2nu => -1.0 / (2.0 * self.mu * k0 * c * c * d),
            CharacteristicTag::Omega3 | CharacteristicTag::Omega5 => -1.0 / (c * c * d),
            CharacteristicTag::Theta => 1.0 / (4.0 * self.mu * k0 * d),
            CharacteristicTag::ClosedForm => {
                return Err(Error::NotApplicable("closed-form levels carry explicit weights".into()))
            }
        };
        if !(q2 > 0.0 && q2.is_finite()) {
            return Err(Error::Domain(format!("non-positive level weight {q2} at E = {e}")));
        }
        Ok(q2)
    }
}

/// θ_Γ = Im ln Γ(1 + 2iϰ).
pub fn theta_gamma(ka: f64) -> Result<f64> {
    Ok(log_gamma(Complex64::new(1.0, 2.0 * ka))?.im)
}

/// tan of the threshold angle (R2, R3, R5).
fn threshold_tan(p: &CouplingParams, r: RangeId, mu: f64) -> Result<f64> {
    let q = p.g1 / p.k0;
    Ok(match r {
        RangeId::R2 => {
            let (lbm, sbm) = log_gamma_real(1.0 - 2.0 * mu)?;
            let (lbp, _) = log_gamma_real(1.0 + 2.0 * mu)?;
            -sbm * (lbm - lbp + 2.0 * mu * q.ln()).exp()
        }
        RangeId::R3 => q.ln() + 2.0 * EULER_GAMMA,
        RangeId::R5 => q * (q.ln() + EULER_GAMMA - 1.0),
        _ => return Err(Error::NotApplicable(format!("no tangent threshold in {r:?}"))),
    })
}

/// The extension angle at which E = 0 is an eigenvalue (g₁ > 0), canonical.
pub fn threshold_param(p: &CouplingParams) -> Result<f64> {
    let class = classify(p)?;
    let r = class.range_id;
    if r == RangeId::R1 {
        return Err(Error::NotApplicable("range 1 has no extension family".into()));
    }
    if p.g1 < 0.0 {
        return Err(Error::NotApplicable("thresholds exist only for g1 > 0".into()));
    }
    let mu = class.mu.magnitude;
    if r == RangeId::R4 {
        let phi = mu * (p.g1 / p.k0).ln() - theta_gamma(mu)? + FRAC_PI_2;
        return Ok(canonical_angle(r, phi));
    }
    Ok(canonical_angle(r, threshold_tan(p, r, mu)?.atan()))
}

/// Distance between two extension angles on the circle of period π.
pub fn angle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(PI);
    d.min(PI - d)
}

/// χ(E), refusing E within 1e−10 (relative) of a pole.
pub fn characteristic_value(cf: &CharacteristicFn, e: f64) -> Result<f64> {
    if cf.tag != CharacteristicTag::ClosedForm && cf.tag != CharacteristicTag::Theta {
        if let Some(n) = cf.near_pole(e, POLE_GUARD) {
            return Err(Error::PoleProximity(cf.pole(n).unwrap_or(e)));
        }
    }
    cf.raw(e)
}
