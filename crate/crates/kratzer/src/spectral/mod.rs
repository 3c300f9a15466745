//! Spectral data of every self-adjoint realization: continuum densities,
//! discrete levels with normalizations, threshold angles, zero modes and
//! assembled reports.

mod characteristic;
mod density;
mod levels;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use characteristic::{
    angle_distance, characteristic_value, theta_gamma, threshold_param, CharacteristicFn, CharacteristicTag,
    POLE_GUARD,
};
pub use density::{continuum_density, r4_d, r4_one_minus_d2, THRESHOLD_TOL};
pub use levels::{
    closed_form_levels, discrete_spectrum, theta_level, zero_energy_eigenvalue, zero_mode_residue,
    ClosedFormVariant, DiscreteLevel,
};

use crate::basis::{eval_solution, SolutionId};
use crate::error::{Error, Result};
use crate::model::{classify, CouplingParams, ExtensionParam, RangeClass, RangeId};

/// z = 2τx beyond which eigenfunctions are continued with the decaying υ₁.
pub const EIGEN_TAIL_Z: f64 = 12.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensitySample {
    pub energy: f64,
    pub density: f64,
}

/// The absolutely continuous part, supported on [support_min, ∞).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Continuum {
    pub support_min: f64,
    pub samples: Vec<DensitySample>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub params: CouplingParams,
    pub range: RangeClass,
    pub ext: ExtensionParam,
    pub continuum: Continuum,
    pub discrete: Vec<DiscreteLevel>,
    /// Weight of the E = 0 eigenvalue, when present.
    pub zero_mode: Option<f64>,
    pub notes: Vec<String>,
}

/// Density on `grid`, discrete levels in `window` (at most `n_limit`), the
/// zero mode and descriptive notes.
pub fn assemble_spectrum(
    p: &CouplingParams,
    ext: &ExtensionParam,
    window: (f64, f64),
    grid: &[f64],
    n_limit: usize,
) -> Result<SpectrumReport> {
    let range = classify(p)?;
    let samples = grid
        .iter()
        .map(|&e| Ok(DensitySample { energy: e, density: continuum_density(p, ext, e)? }))
        .collect::<Result<Vec<_>>>()?;
    let discrete = discrete_spectrum(p, ext, window, n_limit)?;
    let zero_mode = if p.g1 > 0.0 { zero_energy_eigenvalue(p, ext)? } else { None };
    let mut notes = Vec::new();
    if range.range_id == RangeId::R4 {
        notes.push("spectrum unbounded below: levels accumulate geometrically at -infinity".to_string());
        if p.g1 > 0.0 {
            let cf = CharacteristicFn::new(p, ext)?;
            notes.push(format!("n_max = {}", levels::r4_n_max(&cf)?));
        }
    }
    if p.g1 < 0.0 {
        notes.push("infinitely many negative levels with accumulation point E = 0".to_string());
    }
    if zero_mode.is_some() {
        notes.push("threshold extension: E = 0 is an eigenvalue".to_string());
    }
    if discrete.len() == n_limit && n_limit > 0 {
        notes.push(format!("discrete list truncated at {n_limit} levels"));
    }
    Ok(SpectrumReport {
        params: *p,
        range,
        ext: *ext,
        continuum: Continuum { support_min: 0.0, samples },
        discrete,
        zero_mode,
        notes,
    })
}

/// The normalized eigenfunction Uₙ(x) = Q·u(x; Eₙ) of a discrete level,
/// continued past z = 12 by the decaying solution matched there.
pub fn eigenfunction(p: &CouplingParams, ext: &ExtensionParam, level: &DiscreteLevel, x: f64) -> Result<f64> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::Domain(format!("eigenfunctions need x > 0, got {x}")));
    }
    if !(level.energy < 0.0) {
        return Err(Error::Domain("eigenfunctions are evaluated for E < 0".into()));
    }
    let w = Complex64::new(level.energy, 0.0);
    let tau = (-level.energy).sqrt();
    let xs = EIGEN_TAIL_Z / (2.0 * tau);
    if x <= xs {
        return Ok(level.weight_q * eval_solution(SolutionId::Principal, p, ext, x, w)?.value.re);
    }
    let at = eval_solution(SolutionId::Principal, p, ext, xs, w)?.value;
    let v_s = eval_solution(SolutionId::V1, p, ext, xs, w)?.value;
    let v = eval_solution(SolutionId::V1, p, ext, x, w)?.value;
    Ok(level.weight_q * (at / v_s * v).re)
}
