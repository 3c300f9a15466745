//! Seeded self-checks: Wronskians, ODE residuals, orthonormality, interlacing
//! and agreement with the shooting oracle.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use kratzer::basis::{eval_solution, lambda, pair_wronskian, wronskian, Setting, SolutionId};
use kratzer::model::{CouplingParams, ExtensionParam, RangeId};
use kratzer::oracle::{quad_inner_product, shoot_eigenvalues, Domain, ShootingConfig};
use kratzer::spectral::{discrete_spectrum, eigenfunction, theta_level, CharacteristicFn};
use kratzer::{Complex64, Error, Result};

pub const ALL_RANGES: [RangeId; 5] = [RangeId::R1, RangeId::R2, RangeId::R3, RangeId::R4, RangeId::R5];

/// Draws per range for the pointwise checks.
const DRAWS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Wronskian,
    OdeResidual,
    Orthonormality,
    Interlacing,
    Oracle,
}

impl Kind {
    const ALL: [Kind; 5] = [Kind::Wronskian, Kind::OdeResidual, Kind::Orthonormality, Kind::Interlacing, Kind::Oracle];

    fn name(self) -> &'static str {
        match self {
            Kind::Wronskian => "wronskian",
            Kind::OdeResidual => "ode_residual",
            Kind::Orthonormality => "orthonormality",
            Kind::Interlacing => "interlacing",
            Kind::Oracle => "oracle",
        }
    }

    fn default_tol(self) -> f64 {
        match self {
            Kind::Wronskian => 1e-8,
            Kind::OdeResidual => 1e-6,
            Kind::Orthonormality => 1e-4,
            Kind::Interlacing => 0.0,
            Kind::Oracle => 1e-6,
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub seed: u64,
    pub ranges: Vec<RangeId>,
    pub levels: usize,
    /// Replaces every per-check threshold when set.
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    /// `<check>/<range>`, e.g. `wronskian/R2`.
    pub name: String,
    pub samples: usize,
    /// Absent when the check could not be evaluated.
    pub max_error: Option<f64>,
    pub tolerance: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub seed: u64,
    pub ranges: Vec<RangeId>,
    pub levels: usize,
    pub passed: bool,
    pub failed: Vec<String>,
    pub checks: Vec<Check>,
}

/// A bound-state-carrying coupling (g₁ < 0) and extension in range `r`.
fn draw_case(rng: &mut ChaCha8Rng, r: RangeId) -> Result<(CouplingParams, ExtensionParam)> {
    let g1 = -rng.gen_range(0.6..1.4);
    let k0 = rng.gen_range(0.8..1.5);
    let g2 = match r {
        RangeId::R1 => 0.75 + rng.gen_range(0.0..1.5),
        RangeId::R2 => {
            let v: f64 = rng.gen_range(-0.2..0.7);
            if v.abs() < 0.05 { 0.3 } else { v }
        }
        RangeId::R3 => -0.25,
        RangeId::R4 => -0.25 - rng.gen_range(0.3..1.5),
        RangeId::R5 => 0.0,
    };
    let p = CouplingParams::new(g1, g2, k0)?;
    let angle = match r {
        RangeId::R1 => None,
        RangeId::R4 => Some(rng.gen_range(0.2..3.0)),
        _ => Some(rng.gen_range(-1.2..1.2)),
    };
    Ok((p, ExtensionParam::new(r, angle)?))
}

/// Complex W off the negative axis and a point with |λx| ≤ 8, where the
/// series solutions keep full relative accuracy.
fn draw_point(rng: &mut ChaCha8Rng) -> (Complex64, f64) {
    let phi = rng.gen_range(0.05..PI - 0.05) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    let w = Complex64::from_polar(10f64.powf(rng.gen_range(-1.0..1.0)), phi);
    let x = 10f64.powf(rng.gen_range(-1.5..1.0)).min(8.0 / lambda(w).norm());
    (w, x)
}

fn wronskian_check(rng: &mut ChaCha8Rng, p: &CouplingParams, ext: &ExtensionParam) -> Result<(f64, usize)> {
    let mut worst = 0.0f64;
    for _ in 0..DRAWS {
        let (w, x) = draw_point(rng);
        let set = Setting::new(p, w)?;
        let (got, want) = if ext.range_id == RangeId::R1 {
            // Wr(u₁, υ₁) = −Γ(β₊)/Γ(α₊)
            (wronskian(SolutionId::U1, SolutionId::V1, p, ext, x, w)?, -set.omega()?)
        } else {
            (wronskian(SolutionId::Principal, SolutionId::Conjugate, p, ext, x, w)?, pair_wronskian(&set)?)
        };
        worst = worst.max((got - want).norm() / want.norm().max(1.0));
    }
    Ok((worst, DRAWS))
}

fn ode_residual_check(rng: &mut ChaCha8Rng, p: &CouplingParams, ext: &ExtensionParam) -> Result<(f64, usize)> {
    let mut worst = 0.0f64;
    for _ in 0..DRAWS {
        let (w, x) = draw_point(rng);
        let h = 2e-3 * x.min(1.0);
        let u = |x: f64| eval_solution(SolutionId::Principal, p, ext, x, w).map(|s| s.value);
        let d2 = (-u(x + 2.0 * h)? + 16.0 * u(x + h)? - 30.0 * u(x)? + 16.0 * u(x - h)? - u(x - 2.0 * h)?)
            / (12.0 * h * h);
        let vw = (p.g1 / x + p.g2 / (x * x) - w) * u(x)?;
        worst = worst.max((vw - d2).norm() / (d2.norm() + vw.norm()));
    }
    Ok((worst, DRAWS))
}

fn orthonormality_check(p: &CouplingParams, ext: &ExtensionParam, levels: usize) -> Result<(f64, usize)> {
    let ls = discrete_spectrum(p, ext, (-50.0 * p.g1 * p.g1, 0.0), levels)?;
    let mut worst = 0.0f64;
    let mut count = 0;
    for (i, a) in ls.iter().enumerate() {
        for b in &ls[i..] {
            let tail = 60.0 / (-a.energy.max(b.energy)).sqrt();
            let v = quad_inner_product(
                |x| eigenfunction(p, ext, a, x),
                |x| eigenfunction(p, ext, b, x),
                Domain { a: 0.0, b: tail },
                1e-8,
            )?;
            let want = if a.n == b.n { 1.0 } else { 0.0 };
            worst = worst.max((v - want).abs());
            count += 1;
        }
    }
    Ok((worst, count))
}

/// Levels sit between consecutive poles and move monotonically with the
/// angle; the error is the largest relative violation.
fn interlacing_check(p: &CouplingParams, ext: &ExtensionParam, levels: usize) -> Result<(f64, usize)> {
    let r = ext.range_id;
    let a = ext.angle_or_zero();
    let mut worst = 0.0f64;
    let mut count = 0;
    match r {
        RangeId::R1 => {
            // unique extension: consecutive levels strictly increase
            let ls = discrete_spectrum(p, ext, (-50.0 * p.g1 * p.g1, 0.0), levels)?;
            for w in ls.windows(2) {
                worst = worst.max((w[0].energy - w[1].energy).max(0.0) / w[1].energy.abs());
                count += 1;
            }
        }
        RangeId::R4 => {
            // ∂Eₙ/∂θ < 0 at fixed n
            let da = 1e-3;
            let shifted = ExtensionParam::new(r, Some(a + da))?;
            for n in 0..levels as i64 {
                let (e0, e1) = (theta_level(p, ext, n)?.energy, theta_level(p, &shifted, n)?.energy);
                worst = worst.max((e1 - e0).max(0.0) / e0.abs());
                count += 1;
            }
        }
        _ => {
            // ∂Eₙ/∂angle is positive in R2 and R5, negative in R3
            let sign = if r == RangeId::R3 { -1.0 } else { 1.0 };
            let da = 1e-3;
            let shifted = ExtensionParam::new(r, Some(a + da))?;
            let cf = CharacteristicFn::new(p, ext)?;
            let window = (-1e6 * p.g1 * p.g1, 0.0);
            let l0 = discrete_spectrum(p, ext, window, levels)?;
            let l1 = discrete_spectrum(p, &shifted, window, levels)?;
            for (x, y) in l0.iter().zip(&l1) {
                let n = x.n as u64;
                let hi = cf.pole(n).unwrap_or(0.0);
                let lo = if n == 0 { f64::NEG_INFINITY } else { cf.pole(n - 1).unwrap_or(f64::NEG_INFINITY) };
                let scale = x.energy.abs();
                worst = worst.max((lo - x.energy).max(0.0) / scale).max((x.energy - hi).max(0.0) / scale);
                if x.n == y.n {
                    worst = worst.max((-sign * (y.energy - x.energy)).max(0.0) / scale);
                }
                count += 1;
            }
        }
    }
    Ok((worst, count))
}

fn oracle_check(p: &CouplingParams, ext: &ExtensionParam, levels: usize) -> Result<(f64, usize)> {
    let g = p.g1 * p.g1;
    let window = (-3.0 * g, -0.01 * g);
    let cfg = ShootingConfig::for_window(p, window)?;
    let shot = shoot_eigenvalues(p, ext, window, &cfg)?;
    let roots = discrete_spectrum(p, ext, window, usize::MAX)?;
    if shot.len() != roots.len() {
        return Err(Error::Domain(format!("shooting found {} levels, the root solver {}", shot.len(), roots.len())));
    }
    let worst = shot
        .iter()
        .zip(&roots)
        .take(levels)
        .map(|(s, r)| ((s - r.energy) / r.energy).abs())
        .fold(0.0, f64::max);
    Ok((worst, roots.len().min(levels)))
}

pub fn run(cfg: &VerifyConfig) -> Summary {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut checks = Vec::new();
    for &r in &cfg.ranges {
        let case = draw_case(&mut rng, r);
        for kind in Kind::ALL {
            let name = format!("{}/{r:?}", kind.name());
            let tolerance = cfg.tol.unwrap_or(kind.default_tol());
            let outcome = case.clone().and_then(|(p, ext)| match kind {
                Kind::Wronskian => wronskian_check(&mut rng, &p, &ext),
                Kind::OdeResidual => ode_residual_check(&mut rng, &p, &ext),
                Kind::Orthonormality => orthonormality_check(&p, &ext, cfg.levels),
                Kind::Interlacing => interlacing_check(&p, &ext, cfg.levels),
                Kind::Oracle => oracle_check(&p, &ext, cfg.levels),
            });
            checks.push(match outcome {
                Ok((max_error, samples)) => {
                    Check { name, samples, max_error: Some(max_error), tolerance, passed: max_error <= tolerance, error: None }
                }
                Err(e) => Check {
                    name,
                    samples: 0,
                    max_error: None,
                    tolerance,
                    passed: false,
                    error: Some(e.to_string()),
                },
            });
        }
    }
    let failed: Vec<String> = checks.iter().filter(|c| !c.passed).map(|c| c.name.clone()).collect();
    Summary {
        seed: cfg.seed,
        ranges: cfg.ranges.clone(),
        levels: cfg.levels,
        passed: failed.is_empty(),
        failed,
        checks,
    }
}
