//! Reads off the boundary-form coefficients (a₁, a₂) of a sampled solution
//! near x = 0, ψ ≈ a₁F₁ + a₂F₂, where (F₁, F₂) are the range's boundary forms
//! normalized so that the principal solution of angle ν has (sin ν, cos ν)
//! (R2, R3, R5) or (e^{iθ}, e^{−iθ}) (R4).
//!
//! The forms are the Frobenius series of u₁, u₂, u₃, u₅, so the fit is exact
//! up to rounding for any solution, not only at asymptotically small x.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::frobenius::FrobeniusSolution;
use super::SolutionSample;
use crate::error::{Error, Result};
use crate::model::{classify, CouplingParams, ExtensionParam, RangeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AsymptoticTag {
    U1as,
    U2as,
    U3as,
    U5as,
}

/// scale · (Frobenius series of the tagged solution).
#[derive(Debug, Clone)]
pub struct AsymptoticForm {
    pub tag: AsymptoticTag,
    pub scale: Complex64,
    series: FrobeniusSolution,
}

impl AsymptoticForm {
    pub fn eval(&self, x: f64) -> (Complex64, Complex64) {
        let (v, d) = self.series.eval(x);
        (self.scale * v, self.scale * d)
    }

    /// The pair (F₁, F₂) for the couplings at energy W.
    pub fn pair(p: &CouplingParams, w: Complex64) -> Result<[AsymptoticForm; 2]> {
        let class = classify(p)?;
        let mu = class.mu.complex();
        let k0 = Complex64::new(p.k0, 0.0);
        let form = |tag, scale, series| AsymptoticForm { tag, scale, series };
        Ok(match class.range_id {
            RangeId::R1 | RangeId::R2 | RangeId::R4 => [
                form(AsymptoticTag::U1as, k0.powc(0.5 + mu), FrobeniusSolution::u1(p, w, mu)?),
                form(AsymptoticTag::U2as, k0.powc(0.5 - mu), FrobeniusSolution::u2(p, w, mu)?),
            ],
            RangeId::R3 => [
                form(AsymptoticTag::U1as, Complex64::new(1.0, 0.0), FrobeniusSolution::u1(p, w, mu)?),
                form(AsymptoticTag::U3as, Complex64::new(1.0, 0.0), FrobeniusSolution::u3(p, w)?),
            ],
            RangeId::R5 => [
                form(AsymptoticTag::U1as, k0, FrobeniusSolution::u1(p, w, mu)?),
                form(AsymptoticTag::U5as, Complex64::new(1.0, 0.0), FrobeniusSolution::u5(p, w)?),
            ],
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryFit {
    pub a1: Complex64,
    pub a2: Complex64,
    /// Relative rms misfit of values and x-scaled derivatives.
    pub residual: f64,
}

/// Default upper end of the fitting window: min(0.01/k₀, 0.01/|g₁|, 0.1/√|W|).
pub fn fit_window(p: &CouplingParams, w: Complex64) -> f64 {
    (0.01 / p.k0).min(0.01 / p.g1.abs()).min(0.1 / w.norm().sqrt())
}

/// Least-squares (a₁, a₂) from samples of one solution at a common W.
/// Values and x·derivatives enter as equations, each row scaled to unit size.
pub fn boundary_fit(p: &CouplingParams, samples: &[SolutionSample], ext: &ExtensionParam) -> Result<BoundaryFit> {
    let class = classify(p)?;
    if ext.range_id != class.range_id {
        return Err(Error::InvalidExtension(format!(
            "extension for {:?} used with couplings in {:?}",
            ext.range_id, class.range_id
        )));
    }
    if samples.len() < 2 {
        return Err(Error::IllConditioned("boundary fit needs at least two samples".into()));
    }
    let w = samples[0].w;
    if samples.iter().any(|s| s.w != w) {
        return Err(Error::Domain("boundary fit samples must share one energy".into()));
    }
    let forms = AsymptoticForm::pair(p, w)?;
    let mut rows: Vec<(Complex64, Complex64, Complex64)> = Vec::with_capacity(2 * samples.len());
    for s in samples {
        if !(s.x > 0.0) {
            return Err(Error::Domain(format!("sample at x = {}", s.x)));
        }
        let (f1, d1) = forms[0].eval(s.x);
        let (f2, d2) = forms[1].eval(s.x);
        for (a, b, y) in [(f1, f2, s.value), (d1 * s.x, d2 * s.x, s.derivative * s.x)] {
            let n = a.norm().max(b.norm());
            if n > 0.0 && n.is_finite() {
                rows.push((a / n, b / n, y / n));
            }
        }
    }
    // normal equations [A B]^H [A B] a = [A B]^H y
    let (mut aa, mut ab, mut bb) = (0.0, Complex64::new(0.0, 0.0), 0.0);
    let (mut ay, mut by, mut yy) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), 0.0);
    for &(a, b, y) in &rows {
        aa += a.norm_sqr();
        bb += b.norm_sqr();
        ab += a.conj() * b;
        ay += a.conj() * y;
        by += b.conj() * y;
        yy += y.norm_sqr();
    }
    let det = aa * bb - ab.norm_sqr();
    if aa == 0.0 || bb == 0.0 || det <= 1e-12 * aa * bb {
        return Err(Error::IllConditioned(
            "boundary forms do not separate on the sampled window".into(),
        ));
    }
    let a1 = (bb * ay - ab * by) / det;
    let a2 = (aa * by - ab.conj() * ay) / det;
    let res: f64 = rows.iter().map(|&(a, b, y)| (y - a1 * a - a2 * b).norm_sqr()).sum();
    Ok(BoundaryFit { a1, a2, residual: if yy > 0.0 { (res / yy).sqrt() } else { res.sqrt() } })
}
