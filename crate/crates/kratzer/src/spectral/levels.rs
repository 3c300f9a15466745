//! Discrete levels: closed forms, root-found levels, zero-energy modes.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use super::characteristic::{threshold_param, CharacteristicFn, CharacteristicTag};
use super::density::at_threshold;
use crate::error::{Error, Result};
use crate::model::{classify, CouplingParams, ExtensionParam, RangeId};
use crate::special_fns::{log_gamma_real, richardson};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscreteLevel {
    pub n: i64,
    pub energy: f64,
    /// Normalization of the principal solution: ∫(Q·u)² dx = 1.
    pub weight_q: f64,
    pub bracket: (f64, f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClosedFormVariant {
    R1,
    R2Endpoint,
    R3Endpoint,
    R5Endpoint,
    R2Nu0Mirror,
}

const BISECTION_REL: f64 = 1e-13;
const MAX_BISECTIONS: usize = 400;
/// Safety cap on the number of brackets scanned in one call.
const MAX_LEVEL_INDEX: u64 = 1_000_000;

fn lg(x: f64) -> Result<f64> {
    Ok(log_gamma_real(x)?.0)
}

/// Q for U = Q·u₁ at Eₙ = −g₁²/(1+2μ+2n)² (valid for any μ with 1+2μ > 0
/// read through the mirror μ → −μ for u₂).
fn hydrogenic_q(g1: f64, mu: f64, n: u64) -> Result<(f64, f64)> {
    let nf = n as f64;
    let tau = g1.abs() / (1.0 + 2.0 * mu + 2.0 * nf);
    let lq = (mu + 1.0) * (2.0 * tau).ln() - log_gamma_real(1.0 + 2.0 * mu)?.0
        + 0.5 * (tau.ln() + lg(1.0 + 2.0 * mu + nf)? - g1.abs().ln() - lg(nf + 1.0)?);
    Ok((-tau * tau, lq.exp()))
}

/// The explicit level tables (g₁ < 0; empty otherwise), first `n_count`.
pub fn closed_form_levels(p: &CouplingParams, variant: ClosedFormVariant, n_count: usize) -> Result<Vec<DiscreteLevel>> {
    let class = classify(p)?;
    let r = class.range_id;
    let mu = class.mu.magnitude;
    let expected = match variant {
        ClosedFormVariant::R1 => RangeId::R1,
        ClosedFormVariant::R2Endpoint | ClosedFormVariant::R2Nu0Mirror => RangeId::R2,
        ClosedFormVariant::R3Endpoint => RangeId::R3,
        ClosedFormVariant::R5Endpoint => RangeId::R5,
    };
    if r != expected {
        return Err(Error::InvalidCoupling(format!("{variant:?} needs couplings in {expected:?}, got {r:?}")));
    }
    if p.g1 > 0.0 {
        return Ok(Vec::new());
    }
    let g = p.g1.abs();
    let k0 = p.k0;
    let mut out = Vec::with_capacity(n_count);
    for k in 0..n_count as u64 {
        let (energy, q) = match variant {
            ClosedFormVariant::R1 => hydrogenic_q(p.g1, mu, k)?,
            ClosedFormVariant::R2Endpoint => {
                let (e, q) = hydrogenic_q(p.g1, mu, k)?;
                (e, q * k0.powf(-0.5 - mu))
            }
            ClosedFormVariant::R3Endpoint => {
                let d = 1.0 + 2.0 * k as f64;
                (-(g / d).powi(2), 2.0 * g * d.powf(-1.5))
            }
            ClosedFormVariant::R5Endpoint => {
                let t = g / (2.0 + 2.0 * k as f64);
                (-t * t, 2.0 / k0 * t.powf(1.5))
            }
            ClosedFormVariant::R2Nu0Mirror => {
                // U = Q·u₂ with μ → −μ; the first mirror index is 1 when μ > 1/2
                let n = k + u64::from(mu > 0.5);
                let nf = n as f64;
                let tau = g / (1.0 - 2.0 * mu + 2.0 * nf);
                let lq = (1.0 - mu) * (2.0 * tau).ln() - lg(1.0 - 2.0 * mu)?
                    + 0.5 * (tau.ln() + lg(1.0 - 2.0 * mu + nf)? - g.ln() - lg(nf + 1.0)?);
                (-tau * tau, lq.exp() * k0.powf(mu - 0.5))
            }
        };
        out.push(DiscreteLevel { n: k as i64, energy, weight_q: q, bracket: (energy, energy) });
    }
    Ok(out)
}

fn endpoint_variant(r: RangeId) -> ClosedFormVariant {
    match r {
        RangeId::R2 => ClosedFormVariant::R2Endpoint,
        RangeId::R3 => ClosedFormVariant::R3Endpoint,
        RangeId::R5 => ClosedFormVariant::R5Endpoint,
        _ => ClosedFormVariant::R1,
    }
}

/// Root of a decreasing f on (lo, hi) with f(lo⁺) > 0 > f(hi⁻): bisection
/// (geometric while the ends differ by more than a factor 4) to relative
/// width 1e−13, then one secant step. `flo`/`fhi` are None at poles.
fn bisect<F>(f: F, mut lo: f64, mut hi: f64, mut flo: Option<f64>, mut fhi: Option<f64>) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    for _ in 0..MAX_BISECTIONS {
        let mid = if lo < 0.0 && hi < 0.0 && lo / hi > 4.0 { -(lo * hi).sqrt() } else { 0.5 * (lo + hi) };
        if hi - lo <= BISECTION_REL * mid.abs() || mid <= lo || mid >= hi {
            break;
        }
        let fm = match f(mid) {
            Ok(v) => v,
            Err(Error::PoleProximity(_)) | Err(Error::Pole(_)) => {
                // exactly on a Γ pole: the sign is not informative; move off it
                f(mid + 1e-12 * mid.abs())?
            }
            Err(e) => return Err(e),
        };
        if fm > 0.0 {
            lo = mid;
            flo = Some(fm);
        } else {
            hi = mid;
            fhi = Some(fm);
        }
    }
    if let (Some(a), Some(b)) = (flo, fhi) {
        if a != b && a.is_finite() && b.is_finite() {
            let x = lo - a * (hi - lo) / (b - a);
            if x >= lo && x <= hi {
                return Ok(x);
            }
        }
    }
    Ok(0.5 * (lo + hi))
}

/// The finite lower end below `start` (< 0) where χ turns positive.
fn lower_bound(cf: &CharacteristicFn, start: f64) -> Result<f64> {
    let mut e = start;
    for _ in 0..200 {
        if cf.raw(e)? > 0.0 {
            return Ok(e);
        }
        e *= 4.0;
    }
    Err(Error::BracketFailure(format!("no sign change below E = {start}")))
}

fn check_window(window: (f64, f64)) -> Result<()> {
    let (lo, hi) = window;
    if !(lo.is_finite() && hi.is_finite() && lo < hi && hi <= 0.0) {
        return Err(Error::Domain(format!("window must satisfy E_min < E_max <= 0, got ({lo}, {hi})")));
    }
    Ok(())
}

fn in_window(e: f64, window: (f64, f64)) -> bool {
    e >= window.0 && e < window.1 && e < 0.0
}

/// Every discrete level in `window`, lowest first, at most `n_limit`.
pub fn discrete_spectrum(
    p: &CouplingParams,
    ext: &ExtensionParam,
    window: (f64, f64),
    n_limit: usize,
) -> Result<Vec<DiscreteLevel>> {
    check_window(window)?;
    let cf = CharacteristicFn::new(p, ext)?;
    let r = cf.range_id;
    if cf.tag == CharacteristicTag::ClosedForm {
        return closed_form_in_window(p, r, window, n_limit);
    }
    if r == RangeId::R4 {
        return theta_levels(&cf, window, n_limit);
    }
    let mut out = Vec::new();
    if p.g1 > 0.0 {
        // χ decreases from +∞ to χ(0⁻): one level iff χ(0⁻) < 0; at the
        // threshold angle that level is the E = 0 mode
        if cf.value_at_zero()? >= 0.0 || n_limit == 0 || at_threshold(p, ext) {
            return Ok(out);
        }
        // χ(E_min) < 0 puts the level below the window
        if cf.raw(window.0)? < 0.0 {
            return Ok(out);
        }
        let scale = -(p.g1 * p.g1).max(p.k0 * p.k0);
        let lo = lower_bound(&cf, scale)?;
        let mut hi = lo / 4.0;
        let mut fhi = cf.raw(hi)?;
        let mut steps = 0;
        while fhi > 0.0 {
            hi /= 4.0;
            steps += 1;
            if steps > 600 || hi == 0.0 {
                return Err(Error::BracketFailure("level too close to E = 0 to bracket".into()));
            }
            fhi = cf.raw(hi)?;
        }
        let flo = cf.raw(lo)?;
        let lo_b = if steps == 0 { lo } else { 4.0 * hi };
        let flo_b = if steps == 0 { flo } else { cf.raw(lo_b)? };
        let e = bisect(|x| cf.raw(x), lo_b, hi, Some(flo_b), Some(fhi))?;
        if in_window(e, window) {
            out.push(level_from(&cf, 0, e, (lo_b, hi))?);
        }
        return Ok(out);
    }
    for n in 0..MAX_LEVEL_INDEX {
        if out.len() >= n_limit {
            break;
        }
        let hi = cf.pole(n).expect("g1 < 0 has poles");
        let prev = if n == 0 { None } else { cf.pole(n - 1) };
        if let Some(pv) = prev {
            if pv >= window.1 {
                break;
            }
        }
        if hi < window.0 {
            continue;
        }
        let (lo, flo) = match prev {
            Some(pv) => (pv, None),
            None => {
                if cf.raw(window.0)? < 0.0 {
                    continue;
                }
                let l = lower_bound(&cf, 4.0 * hi)?;
                (l, Some(cf.raw(l)?))
            }
        };
        let e = bisect(|x| cf.raw(x), lo, hi, flo, None)?;
        if !(e > lo && e < hi) {
            return Err(Error::BracketFailure(format!("level {n} left its bracket ({lo}, {hi})")));
        }
        if in_window(e, window) {
            out.push(level_from(&cf, n as i64, e, (lo, hi))?);
        }
    }
    Ok(out)
}

fn level_from(cf: &CharacteristicFn, n: i64, e: f64, bracket: (f64, f64)) -> Result<DiscreteLevel> {
    Ok(DiscreteLevel { n, energy: e, weight_q: cf.weight_sq(e)?.sqrt(), bracket })
}

fn closed_form_in_window(p: &CouplingParams, r: RangeId, window: (f64, f64), n_limit: usize) -> Result<Vec<DiscreteLevel>> {
    if p.g1 > 0.0 {
        return Ok(Vec::new());
    }
    let variant = endpoint_variant(r);
    let mut out = Vec::new();
    // levels accumulate at 0: grow the table until past the window or the limit
    let mut count = 64usize;
    loop {
        let table = closed_form_levels(p, variant, count)?;
        out.clear();
        out.extend(table.iter().copied().filter(|l| in_window(l.energy, window)).take(n_limit));
        let last = table.last().map_or(0.0, |l| l.energy);
        if out.len() >= n_limit || last >= window.1 || count as u64 >= MAX_LEVEL_INDEX {
            return Ok(out);
        }
        count *= 4;
    }
}

/// R4: Θ(E) increases from −∞; level n solves Θ = π/2 + πn.
/// Highest R4 level index for g₁ > 0: π/2 + πn < Θ(0⁻). At the threshold
/// Θ(0⁻) hits a quantization value and that level is the E = 0 mode.
pub(crate) fn r4_n_max(cf: &CharacteristicFn) -> Result<i64> {
    let x = (cf.value_at_zero()? - FRAC_PI_2) / PI;
    let x = if at_threshold(&cf.params, &cf.ext) { x.round() } else { x.ceil() };
    Ok(x as i64 - 1)
}

fn theta_levels(cf: &CharacteristicFn, window: (f64, f64), n_limit: usize) -> Result<Vec<DiscreteLevel>> {
    let th = |tau: f64| cf.raw(-tau * tau);
    let tau_max = (-window.0).sqrt();
    let n_lo = ((th(tau_max)? - FRAC_PI_2) / PI).ceil() as i64;
    let n_hi = if cf.params.g1 > 0.0 { Some(r4_n_max(cf)?) } else { None };
    let mut out = Vec::new();
    let mut tau_hi = tau_max;
    let mut n = n_lo;
    while out.len() < n_limit {
        if n_hi.is_some_and(|m| n > m) || n - n_lo > MAX_LEVEL_INDEX as i64 {
            break;
        }
        let target = FRAC_PI_2 + PI * n as f64;
        // shrink τ until Θ exceeds the target
        let mut tau_lo = tau_hi;
        let mut steps = 0;
        while th(tau_lo)? <= target {
            tau_hi = tau_lo;
            tau_lo *= 0.5;
            steps += 1;
            if steps > 2000 {
                return Err(Error::BracketFailure(format!("R4 level {n}: no bracket above the window")));
            }
        }
        // Θ − target is increasing in E = −τ²: bisect in ln τ
        let (mut a, mut b) = (tau_lo.ln(), tau_hi.ln());
        for _ in 0..MAX_BISECTIONS {
            let m = 0.5 * (a + b);
            if (b - a) < 0.5 * BISECTION_REL || m <= a || m >= b {
                break;
            }
            if th(m.exp())? > target {
                a = m;
            } else {
                b = m;
            }
        }
        let (ta, tb) = (a.exp(), b.exp());
        let (fa, fb) = (th(ta)? - target, th(tb)? - target);
        let tau = if fa != fb { (ta - fa * (tb - ta) / (fb - fa)).clamp(ta, tb) } else { 0.5 * (ta + tb) };
        let e = -tau * tau;
        if e >= window.1 {
            break;
        }
        if in_window(e, window) {
            out.push(DiscreteLevel {
                n,
                energy: e,
                weight_q: cf.weight_sq(e)?.sqrt(),
                bracket: (-tau_hi * tau_hi, -tau_lo * tau_lo),
            });
        }
        tau_hi = tau;
        n += 1;
    }
    Ok(out)
}

/// The R4 level with quantization index n, Θ(Eₙ) = π/2 + πn.
pub fn theta_level(p: &CouplingParams, ext: &ExtensionParam, n: i64) -> Result<DiscreteLevel> {
    let cf = CharacteristicFn::new(p, ext)?;
    if cf.tag != CharacteristicTag::Theta {
        return Err(Error::NotApplicable("Θ-indexed levels exist only in range 4".into()));
    }
    let target = FRAC_PI_2 + PI * n as f64;
    if p.g1 > 0.0 && n > r4_n_max(&cf)? {
        return Err(Error::NotApplicable(format!("n = {n} exceeds n_max")));
    }
    // deep enough that Θ < target
    let mut e_min = -(p.g1 * p.g1).max(p.k0 * p.k0);
    let mut steps = 0;
    while cf.raw(e_min)? >= target {
        e_min *= 16.0;
        steps += 1;
        if steps > 300 {
            return Err(Error::BracketFailure(format!("R4 level {n}: no lower bracket")));
        }
    }
    let n_lo = ((cf.raw(e_min)? - FRAC_PI_2) / PI).ceil() as i64;
    let count = usize::try_from(n - n_lo + 1).unwrap_or(0);
    let levels = theta_levels(&cf, (e_min, 0.0), count)
        .map(|v| v.into_iter().find(|l| l.n == n))?;
    levels.ok_or_else(|| Error::BracketFailure(format!("R4 level {n} not found")))
}

/// The δ(E) weight at E = 0 when `ext` is the threshold extension (g₁ > 0).
pub fn zero_energy_eigenvalue(p: &CouplingParams, ext: &ExtensionParam) -> Result<Option<f64>> {
    let class = classify(p)?;
    if p.g1 < 0.0 {
        return Err(Error::NotApplicable("zero-energy eigenvalues need g1 > 0".into()));
    }
    if ext.range_id != class.range_id {
        return Err(Error::InvalidExtension("extension/range mismatch".into()));
    }
    if class.range_id == RangeId::R1 || !at_threshold(p, ext) {
        return Ok(None);
    }
    let t0 = threshold_param(p)?;
    let (g1, k0, mu) = (p.g1, p.k0, class.mu.magnitude);
    let c2 = t0.cos().powi(2);
    Ok(Some(match class.range_id {
        RangeId::R2 => {
            let a = g1 * (g1 / k0).powf(-mu) / (mu * t0.cos());
            let r = 3.0 * (lg(1.0 + 2.0 * mu)? - lg(2.0 - 2.0 * mu)?).exp() / (2.0 * k0 * (1.0 + 2.0 * mu));
            a * a * r
        }
        RangeId::R3 => 6.0 * g1 * g1 / c2,
        RangeId::R4 => {
            let a = 3.0 * g1 * g1 / (mu * (1.0 + 4.0 * mu * mu));
            a / (2.0 * mu * k0)
        }
        RangeId::R5 => 3.0 * g1 / c2,
        RangeId::R1 => unreachable!(),
    }))
}

/// The E = 0 residue read off numerically from the small-E expansion of the
/// characteristic function: χ′(−τ²) extrapolated to τ = 0 (expansion in τ,
/// τ = 0.03g₁·2⁻ᵏ, k < 5), then the range's weight formula.
pub fn zero_mode_residue(p: &CouplingParams, ext: &ExtensionParam) -> Result<f64> {
    let cf = CharacteristicFn::new(p, ext)?;
    cf.value_at_zero()?;
    let t0 = 0.03 * p.g1.abs();
    let taus: Vec<f64> = (0..5).map(|k| t0 / 2f64.powi(k)).collect();
    let mut vals = Vec::with_capacity(taus.len());
    for &t in &taus {
        vals.push(num_complex::Complex64::new(cf.derivative(-t * t)?, 0.0));
    }
    // richardson() extrapolates in the square of its nodes
    let roots: Vec<f64> = taus.iter().map(|t| t.sqrt()).collect();
    let d = richardson(&roots, &vals).re;
    let c = ext.angle_or_zero().cos();
    let k0 = p.k0;
    Ok(match cf.tag {
        CharacteristicTag::F2nu => -1.0 / (2.0 * cf.mu * k0 * c * c * d),
        CharacteristicTag::Omega3 | CharacteristicTag::Omega5 => -1.0 / (c * c * d),
        CharacteristicTag::Theta => 1.0 / (4.0 * cf.mu * k0 * d),
        CharacteristicTag::ClosedForm => {
            return Err(Error::NotApplicable("no zero mode at the endpoint extensions".into()))
        }
    })
}
