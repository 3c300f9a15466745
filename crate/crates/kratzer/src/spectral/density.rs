//! Continuum spectral densities σ′(E), E ≥ 0, assembled in log space.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::characteristic::{angle_distance, threshold_param};
use crate::error::{Error, Result};
use crate::model::{classify, CouplingParams, ExtensionParam, RangeId};
use crate::special_fns::{digamma, log_gamma, log_gamma_real, richardson, EULER_GAMMA};

/// Angle tolerance for sitting at a threshold.
pub const THRESHOLD_TOL: f64 = 1e-9;

pub(crate) fn at_threshold(p: &CouplingParams, ext: &ExtensionParam) -> bool {
    if p.g1 <= 0.0 || ext.range_id == RangeId::R1 {
        return false;
    }
    threshold_param(p).is_ok_and(|t| angle_distance(t, ext.angle_or_zero()) < THRESHOLD_TOL)
}

/// σ′(E) for E ≥ 0.
pub fn continuum_density(p: &CouplingParams, ext: &ExtensionParam, e: f64) -> Result<f64> {
    let class = classify(p)?;
    if ext.range_id != class.range_id {
        return Err(Error::InvalidExtension(format!(
            "extension for {:?} used in {:?}",
            ext.range_id, class.range_id
        )));
    }
    if !(e >= 0.0) || !e.is_finite() {
        return Err(Error::Domain(format!("the continuum density needs finite E >= 0, got {e}")));
    }
    if e > 0.0 {
        return density_at(p, ext, class.mu.magnitude, e.sqrt());
    }
    if p.g1 > 0.0 {
        if at_threshold(p, ext) {
            return Err(Error::Threshold("E = 0 carries a point mass at the threshold extension".into()));
        }
        // exponentially small e^{−πg₁/p} suppression
        return Ok(0.0);
    }
    // attractive case: finite limit, extrapolated in p² from p ≪ |g₁|
    let p0 = 1e-3 * p.g1.abs();
    let hs = [p0, 0.5 * p0, 0.25 * p0];
    let mut vals = Vec::with_capacity(3);
    for &h in &hs {
        vals.push(Complex64::new(density_at(p, ext, class.mu.magnitude, h)?, 0.0));
    }
    Ok(richardson(&hs, &vals).re.max(0.0))
}

/// σ′ at momentum q = √E > 0.
fn density_at(p: &CouplingParams, ext: &ExtensionParam, mu: f64, q: f64) -> Result<f64> {
    let g1 = p.g1;
    let k0 = p.k0;
    let y = g1 / (2.0 * q);
    let (s, c) = ext.angle_or_zero().sin_cos();
    let half = 0.5 * PI * g1 / q;
    let v = match ext.range_id {
        RangeId::R1 => {
            let l = 2.0 * log_gamma(Complex64::new(0.5 + mu, y))?.re - 2.0 * log_gamma_real(1.0 + 2.0 * mu)?.0
                + 2.0 * mu * (2.0 * q).ln()
                - half;
            l.exp() / (2.0 * PI)
        }
        RangeId::R2 => {
            let l = 2.0 * log_gamma(Complex64::new(0.5 + mu, y))?.re - 2.0 * log_gamma_real(1.0 + 2.0 * mu)?.0
                + 2.0 * mu * (2.0 * q / k0).ln();
            let (e1, e2) = (l - half, l + half);
            let m = e1.max(e2).max(0.0);
            let (b, bp) = ((e1 - m).exp(), (e2 - m).exp());
            let tw = 2.0 * PI * mu;
            let a0 = mu / tw.sin() * (b * tw.cos() + bp);
            let sm = s * (-m).exp();
            let d = (c * a0 + sm).powi(2) + (c * mu * b).powi(2);
            if d == 0.0 {
                // c = 0 with a scale beyond the exponent range
                e1.exp() / (2.0 * PI * k0 * s * s)
            } else {
                b * (-m).exp() / (2.0 * PI * k0 * d)
            }
        }
        RangeId::R3 => {
            let r = digamma(Complex64::new(0.5, y))?.re + (2.0 * q / k0).ln() + 2.0 * EULER_GAMMA;
            let a = PI * g1 / q;
            // (π/2)(1 − tanh(a/2)) = π/(e^a + 1)
            let b = if a > 700.0 { PI * (-a).exp() } else { PI / (a.exp() + 1.0) };
            b / (PI * ((c * r - s).powi(2) + (c * b).powi(2)))
        }
        RangeId::R4 => {
            let d = r4_d(p, ext, mu, q)?;
            let one_minus = r4_one_minus_d2(g1, mu, q);
            one_minus / (4.0 * PI * mu * k0 * (1.0 + d).norm_sqr())
        }
        RangeId::R5 => {
            let a = Complex64::new(1.0, y);
            let lam = Complex64::new(0.0, -2.0 * q);
            let wh = g1 * EULER_GAMMA + g1 * (digamma(a)? + (lam / k0).ln()) - g1 - 0.5 * lam;
            let bp = PI * g1 / (PI * g1 / q).exp_m1();
            bp / (PI * (k0 * s - c * wh).norm_sqr())
        }
    };
    if !v.is_finite() || v < 0.0 {
        return Err(Error::Overflow(format!("density at E = {}", q * q)));
    }
    Ok(v)
}

/// D(E) = e^{2iθ}Γ(β₊)Γ(α₋)/(Γ(β₋)Γ(α₊))·(λ/k₀)^{−2iϰ}, λ = −2ip.
pub fn r4_d(p: &CouplingParams, ext: &ExtensionParam, ka: f64, q: f64) -> Result<Complex64> {
    let y = p.g1 / (2.0 * q);
    let i = Complex64::new(0.0, 1.0);
    let lam = Complex64::new(0.0, -2.0 * q);
    let ln_d = 2.0 * i * ext.angle_or_zero() + log_gamma(Complex64::new(1.0, 2.0 * ka))?
        + log_gamma(Complex64::new(0.5, y - ka))?
        - log_gamma(Complex64::new(1.0, -2.0 * ka))?
        - log_gamma(Complex64::new(0.5, y + ka))?
        - 2.0 * i * ka * (lam / p.k0).ln();
    Ok(ln_d.exp())
}

/// 1 − |D|² = (e^{2πϰ} − e^{−2πϰ})/(e^{πg₁/p} + e^{2πϰ}).
pub fn r4_one_minus_d2(g1: f64, ka: f64, q: f64) -> f64 {
    let a = PI * g1 / q;
    let b = 2.0 * PI * ka;
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    2.0 * b.sinh() * (-hi).exp() / (1.0 + (lo - hi).exp())
}
