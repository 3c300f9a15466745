//! Γ, ln Γ, ψ and ψ′ on the complex plane.
//!
//! ln Γ is the principal branch, analytic on ℂ ∖ (−∞, 0]. It is obtained from
//! Stirling's series after shifting the argument to the right half plane and
//! subtracting the individual principal logarithms ln(z + k); each of those is
//! analytic off (−∞, −k], so the sum inherits the principal cut.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

// B_{2k} / (2k (2k-1))
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

// B_{2k} / (2k)
const DIGAMMA_ASYM: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32_760.0,
    1.0 / 12.0,
    -3617.0 / 8160.0,
];

// B_{2k}
const BERNOULLI: [f64; 8] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
];

const SHIFT_RE: f64 = 10.0;
const SHIFT_ABS: f64 = 15.0;

/// True when `z` is one of 0, −1, −2, …
pub fn is_nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0
}

fn check_pole(z: Complex64, what: &str) -> Result<()> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Domain(format!("{what}: non-finite argument {z}")));
    }
    if is_nonpositive_integer(z) {
        return Err(Error::Pole(format!("{what}({})", z.re)));
    }
    Ok(())
}

fn needs_shift(z: Complex64) -> bool {
    z.re < SHIFT_RE || z.norm() < SHIFT_ABS
}

/// Principal branch of ln Γ(z).
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    check_pole(z, "log_gamma")?;
    let mut w = z;
    // ln of the shift product: modulus multiplied (one rounding in the log),
    // arguments summed so the branch stays principal
    let (mut modulus, mut log_mod, mut arg) = (1.0_f64, 0.0_f64, 0.0_f64);
    while needs_shift(w) {
        modulus *= w.norm();
        arg += w.arg();
        if !(1e-100..=1e100).contains(&modulus) {
            log_mod += modulus.ln();
            modulus = 1.0;
        }
        w += 1.0;
    }
    let acc = Complex64::new(log_mod + modulus.ln(), arg);
    let inv = 1.0 / w;
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut p = inv;
    for c in STIRLING {
        series += c * p;
        p *= inv2;
    }
    Ok((w - 0.5) * w.ln() - w + LN_SQRT_2PI + series - acc)
}

/// Γ(z).
pub fn gamma(z: Complex64) -> Result<Complex64> {
    let lg = log_gamma(z)?;
    if lg.re > 709.0 {
        return Err(Error::Overflow(format!("gamma({z})")));
    }
    Ok(lg.exp())
}

/// 1/Γ(z), entire; exactly zero at the poles of Γ.
pub fn rgamma(z: Complex64) -> Complex64 {
    if is_nonpositive_integer(z) {
        return Complex64::new(0.0, 0.0);
    }
    match log_gamma(z) {
        Ok(lg) => (-lg).exp(),
        Err(_) => Complex64::new(f64::NAN, f64::NAN),
    }
}

/// ln|Γ(x)| and the sign of Γ(x) for real non-pole `x`.
pub fn log_gamma_real(x: f64) -> Result<(f64, f64)> {
    let lg = log_gamma(Complex64::new(x, 0.0))?;
    // every negative factor contributes iπ to the imaginary part
    let m = (lg.im / PI).round() as i64;
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    Ok((lg.re, sign))
}

/// ψ(z) = Γ′(z)/Γ(z).
pub fn digamma(z: Complex64) -> Result<Complex64> {
    check_pole(z, "digamma")?;
    if z.re < -SHIFT_RE {
        // reflection keeps the shift count bounded for far-left arguments
        let cot = (PI * z).cos() / (PI * z).sin();
        return Ok(digamma(1.0 - z)? - PI * cot);
    }
    let mut w = z;
    let mut acc = Complex64::new(0.0, 0.0);
    while needs_shift(w) {
        acc += 1.0 / w;
        w += 1.0;
    }
    let inv = 1.0 / w;
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut p = inv2;
    for c in DIGAMMA_ASYM {
        series += c * p;
        p *= inv2;
    }
    Ok(w.ln() - 0.5 * inv - series - acc)
}

/// ψ′(z).
pub fn trigamma(z: Complex64) -> Result<Complex64> {
    check_pole(z, "trigamma")?;
    if z.re < -SHIFT_RE {
        let s = (PI * z).sin();
        return Ok(-trigamma(1.0 - z)? + PI * PI / (s * s));
    }
    let mut w = z;
    let mut acc = Complex64::new(0.0, 0.0);
    while needs_shift(w) {
        acc += 1.0 / (w * w);
        w += 1.0;
    }
    let inv = 1.0 / w;
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut p = inv2 * inv;
    for b in BERNOULLI {
        series += b * p;
        p *= inv2;
    }
    Ok(inv + 0.5 * inv2 + series + acc)
}

pub fn digamma_real(x: f64) -> Result<f64> {
    Ok(digamma(Complex64::new(x, 0.0))?.re)
}

pub fn trigamma_real(x: f64) -> Result<f64> {
    Ok(trigamma(Complex64::new(x, 0.0))?.re)
}
