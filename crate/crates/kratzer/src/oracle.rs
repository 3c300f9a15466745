//! Closed-form-independent checks: direct integration of
//! ψ″ = (g₁/x + g₂/x² − W)ψ from Frobenius seeds at the origin, shooting for
//! eigenvalues, and panelled double-exponential quadrature.

use std::cell::RefCell;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::basis::{principal_frobenius, SolutionSample};
use crate::error::{Error, Result};
use crate::model::{classify, CouplingParams, ExtensionParam, RangeId};
use crate::ode::{integrate, integrate_dense, Tolerances};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShootingConfig {
    pub x_start: f64,
    /// Upper bound on the matching point (the effective point tracks the
    /// outer turning point of each trial energy).
    pub x_match: f64,
    /// Upper bound on the outer seeding point.
    pub x_far: f64,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_steps: usize,
}

/// Energies scanned per window when bracketing eigenvalues.
const SCAN_POINTS: usize = 600;
/// Decay lengths between the matching point and the outer seed.
const DECAY_LENGTHS: f64 = 40.0;

impl ShootingConfig {
    /// Seeds at 1e−4/k₀ (further out in R2, see `seed_point`) and reaches
    /// well past the outer turning point of the shallowest energy in `window`.
    pub fn for_window(p: &CouplingParams, window: (f64, f64)) -> Result<Self> {
        check_window(window)?;
        let e_top = if window.1 < 0.0 { window.1 } else { window.0 * 1e-6 };
        let tau = (-e_top).sqrt();
        let x_turn = outer_turning_point(p, e_top).unwrap_or(1.0 / tau);
        let x_match = x_turn.max(2.0 / tau);
        Ok(Self {
            x_start: seed_point(p)?,
            x_match,
            x_far: x_match + DECAY_LENGTHS / tau,
            abs_tol: 1e-300,
            rel_tol: 1e-11,
            max_steps: 500_000,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0 < self.x_start && self.x_start < self.x_match && self.x_match < self.x_far) {
            return Err(Error::Domain("shooting needs 0 < x_start < x_match < x_far".into()));
        }
        let ok = |t: f64| t > 0.0 && t <= 1e-4;
        if !ok(self.abs_tol) || !ok(self.rel_tol) {
            return Err(Error::Domain("shooting tolerances must lie in (0, 1e-4]".into()));
        }
        if self.max_steps == 0 {
            return Err(Error::Domain("max_steps must be positive".into()));
        }
        Ok(())
    }

    fn tolerances(&self) -> Tolerances {
        Tolerances { rtol: self.rel_tol, atol: self.abs_tol, max_steps: self.max_steps }
    }
}

/// Largest growth (k₀x₀)^{−2μ} of the x^{1/2−μ} component over x^{1/2+μ}
/// tolerated at the seed point.
const SEED_AMPLIFICATION: f64 = 1e4;

/// In R2 the seed is dominated by x^{1/2−μ} near the origin, and integration
/// errors there leak into the growing x^{1/2+μ} component amplified by
/// (k₀x₀)^{−2μ}; the seed moves out until that factor is bounded.
fn seed_point(p: &CouplingParams) -> Result<f64> {
    let class = classify(p)?;
    let mut kx = 1e-4;
    if class.range_id == RangeId::R2 {
        kx = f64::max(kx, SEED_AMPLIFICATION.powf(-0.5 / class.mu.magnitude));
    }
    Ok(kx / p.k0)
}

fn check_window(window: (f64, f64)) -> Result<()> {
    let (lo, hi) = window;
    if !(lo.is_finite() && hi.is_finite() && lo < hi && hi <= 0.0) {
        return Err(Error::Domain(format!("window must satisfy E_min < E_max <= 0, got ({lo}, {hi})")));
    }
    Ok(())
}

/// Largest x > 0 with g₁/x + g₂/x² = E (E < 0), if any.
fn outer_turning_point(p: &CouplingParams, e: f64) -> Option<f64> {
    // E x² − g₁x − g₂ = 0
    let disc = p.g1 * p.g1 + 4.0 * e * p.g2;
    if disc < 0.0 {
        return None;
    }
    let r = disc.sqrt();
    [(p.g1 + r) / (2.0 * e), (p.g1 - r) / (2.0 * e)]
        .into_iter()
        .filter(|x| *x > 0.0)
        .reduce(f64::max)
}

fn rhs(p: CouplingParams, w: f64) -> impl Fn(f64, &[Complex64; 2]) -> [Complex64; 2] {
    move |x, y| [y[1], (p.g1 / x + p.g2 / (x * x) - w) * y[0]]
}

/// The boundary-condition solution integrated from `cfg.x_start` through the
/// ascending `grid` (all points ≥ x_start).
pub fn integrate_solution(
    p: &CouplingParams,
    ext: &ExtensionParam,
    w: f64,
    cfg: &ShootingConfig,
    grid: &[f64],
) -> Result<Vec<SolutionSample>> {
    cfg.validate()?;
    if grid.iter().any(|&x| !(x >= cfg.x_start && x.is_finite())) || grid.windows(2).any(|v| v[1] < v[0]) {
        return Err(Error::Domain("grid must be ascending and start at or after x_start".into()));
    }
    let wc = Complex64::new(w, 0.0);
    let seed = principal_frobenius(p, ext, wc)?;
    let (v0, d0) = seed.eval(cfg.x_start);
    let mut ts = Vec::with_capacity(grid.len() + 1);
    ts.push(cfg.x_start);
    ts.extend_from_slice(grid);
    let states = integrate_dense(rhs(*p, w), &ts, [v0, d0], &cfg.tolerances())?;
    Ok(ts
        .iter()
        .zip(states)
        .skip(1)
        .map(|(&x, y)| SolutionSample { value: y[0], derivative: y[1], x, w: wc })
        .collect())
}

/// Matching Wronskian between the origin solution and the solution decaying
/// at infinity (seeded by its leading asymptotics e^{−τx}x^{−g₁/2τ}).
pub fn matching_wronskian(p: &CouplingParams, ext: &ExtensionParam, e: f64, cfg: &ShootingConfig) -> Result<f64> {
    cfg.validate()?;
    if !(e < 0.0) {
        return Err(Error::Domain("matching needs E < 0".into()));
    }
    let tau = (-e).sqrt();
    let x_turn = outer_turning_point(p, e).unwrap_or(1.0 / tau);
    let x_match = cfg.x_match.min(x_turn.max(2.0 / tau)).max(2.0 * cfg.x_start);
    let x_far = cfg.x_far.min(x_match + DECAY_LENGTHS / tau).max(2.0 * x_match);
    let wc = Complex64::new(e, 0.0);
    let tol = cfg.tolerances();
    let (v0, d0) = principal_frobenius(p, ext, wc)?.eval(cfg.x_start);
    let left = integrate(rhs(*p, e), cfg.x_start, [v0, d0], x_match, &tol)?;
    let slope = -tau - p.g1 / (2.0 * tau * x_far);
    let one = Complex64::new(1.0, 0.0);
    let right = integrate(rhs(*p, e), x_far, [one, one * slope], x_match, &tol)?;
    let wr = left[0] * right[1] - left[1] * right[0];
    // sign-preserving scale: both solutions normalized at the matching point
    let scale = left[0].norm().max(left[1].norm() / tau) * right[0].norm().max(right[1].norm() / tau);
    Ok(wr.re / scale)
}

/// Eigenvalues in `window` from sign changes of the matching Wronskian on a
/// logarithmic energy scan, refined by bisection.
pub fn shoot_eigenvalues(
    p: &CouplingParams,
    ext: &ExtensionParam,
    window: (f64, f64),
    cfg: &ShootingConfig,
) -> Result<Vec<f64>> {
    check_window(window)?;
    cfg.validate()?;
    let hi = if window.1 < 0.0 { window.1 } else { window.0 * 1e-8 };
    let (l0, l1) = ((-window.0).ln(), (-hi).ln());
    let es: Vec<f64> = (0..=SCAN_POINTS)
        .map(|k| -(l0 + (l1 - l0) * k as f64 / SCAN_POINTS as f64).exp())
        .collect();
    let f = |e: f64| matching_wronskian(p, ext, e, cfg);
    let mut roots = Vec::new();
    let mut prev = (es[0], f(es[0])?);
    for &e in &es[1..] {
        let cur = (e, f(e)?);
        if prev.1 == 0.0 {
            roots.push(prev.0);
        } else if prev.1.signum() != cur.1.signum() && cur.1 != 0.0 {
            let (mut a, mut b, mut fa) = (prev.0, cur.0, prev.1);
            for _ in 0..200 {
                let m = 0.5 * (a + b);
                if (b - a) <= 1e-14 * m.abs() {
                    break;
                }
                let fm = f(m)?;
                if fm.signum() == fa.signum() {
                    a = m;
                    fa = fm;
                } else {
                    b = m;
                }
            }
            roots.push(0.5 * (a + b));
        }
        prev = cur;
    }
    Ok(roots)
}

/// Half-open integration domain [a, b], b possibly +∞.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    pub a: f64,
    pub b: f64,
}

const FIRST_PANEL: f64 = 1.0 / 1_048_576.0;
const MAX_PANELS: usize = 400;
const FIRST_PANEL_POWER: i32 = 8;

/// ∫ fa·fb over `domain` by double-exponential quadrature on panels that
/// double in width away from `a` (integrable endpoint singularities at `a`
/// and slow oscillation in ln x are resolved panel by panel). The first error
/// from either function is returned as is.
pub fn quad_inner_product<A, B>(fa: A, fb: B, domain: Domain, tol: f64) -> Result<f64>
where
    A: Fn(f64) -> Result<f64>,
    B: Fn(f64) -> Result<f64>,
{
    if !(tol >= 1e-10) {
        return Err(Error::Domain(format!("quadrature tolerance must be >= 1e-10, got {tol}")));
    }
    let Domain { a, b } = domain;
    if !(a.is_finite() && b > a) {
        return Err(Error::Domain("quadrature domain must satisfy a < b, a finite".into()));
    }
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let f = |x: f64| -> f64 {
        if failure.borrow().is_some() {
            return 0.0;
        }
        match fa(x).and_then(|u| Ok(u * fb(x)?)) {
            Ok(v) if v.is_finite() => v,
            Ok(v) => {
                *failure.borrow_mut() = Some(Error::Overflow(format!("integrand {v} at x = {x}")));
                0.0
            }
            Err(e) => {
                *failure.borrow_mut() = Some(e);
                0.0
            }
        }
    };
    let panel_tol = tol / 64.0;
    let mut total = 0.0;
    let mut err = 0.0;
    let mut edges = vec![a];
    let mut width = FIRST_PANEL;
    let mut quiet = 0;
    for k in 0..MAX_PANELS {
        let lo = *edges.last().expect("non-empty");
        let hi = (a + width).min(b);
        let out = if k == 0 {
            // x = a + h·tᵐ turns x^s into t^{m(s+1)−1}, so power singularities
            // close to x^{−1} keep no mass beyond the outermost nodes
            let h = hi - lo;
            let g = |t: f64| {
                let tm1 = t.powi(FIRST_PANEL_POWER - 1);
                f(a + h * tm1 * t) * h * FIRST_PANEL_POWER as f64 * tm1
            };
            quadrature::double_exponential::integrate(g, 0.0, 1.0, panel_tol)
        } else {
            quadrature::double_exponential::integrate(f, lo, hi, panel_tol)
        };
        if let Some(e) = failure.borrow_mut().take() {
            return Err(e);
        }
        total += out.integral;
        err += out.error_estimate;
        edges.push(hi);
        if hi >= b {
            break;
        }
        if width >= 1.0 && out.integral.abs() < 1e-3 * panel_tol && out.error_estimate < panel_tol {
            quiet += 1;
            if quiet >= 3 {
                break;
            }
        } else {
            quiet = 0;
        }
        width *= 2.0;
    }
    if !(err <= tol) {
        return Err(Error::NonConvergence(format!("quadrature error estimate {err:e} exceeds {tol:e}")));
    }
    Ok(total)
}
