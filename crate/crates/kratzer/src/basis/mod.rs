//! Solutions of −ψ″ + (g₁/x + g₂/x²)ψ = Wψ: the hypergeometric bases u₁, u₂,
//! u₃, u₅, υ₁, υ₍ₘ₎, the boundary-condition–adapted pairs of each range, and
//! Wronskians.
//!
//! With λ = 2√|W| e^{i(φ−π)/2} (W = |W|e^{iφ}, 0 ≤ φ < 2π), z = λx and
//! α± = 1/2 ± μ + g₁/λ, β± = 1 ± 2μ:
//!   u₁ = x^{1/2+μ} e^{−z/2} Φ(α₊, β₊; z),   u₂ = u₁|_{μ→−μ},
//!   υ₁ = λ^{2μ} x^{1/2+μ} e^{−z/2} Ψ(α₊, β₊; z).

mod fit;
mod frobenius;

pub use fit::{boundary_fit, fit_window, AsymptoticForm, AsymptoticTag, BoundaryFit};
pub use frobenius::{FrobeniusCombination, FrobeniusSolution};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{classify, CouplingParams, ExtensionParam, MuKind, RangeClass, RangeId};
use crate::special_fns::{
    digamma, gamma, kummer_phi_d, log_gamma, richardson, rgamma, taylor_sums, tricomi_psi_d,
    SeriesControl, EULER_GAMMA, SWITCH_RADIUS,
};

/// Half-width of the band around 2μ ∈ ℤ where υ₍ₘ₎ is taken as a limit.
pub const HALF_INTEGER_BAND: f64 = 1e-3;
const VM_STEPS: [f64; 3] = [0.03, 0.02, 0.01];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolutionId {
    U1,
    U2,
    U3,
    U5,
    V1,
    Vm(u32),
    /// The solution obeying the extension's boundary condition at x = 0.
    Principal,
    /// Its partner in the extension-adapted pair.
    Conjugate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolutionSample {
    pub value: Complex64,
    pub derivative: Complex64,
    pub x: f64,
    pub w: Complex64,
}

/// λ(W) on the branch used throughout; Re λ ≥ 0.
pub fn lambda(w: Complex64) -> Complex64 {
    let mut phi = w.im.atan2(w.re);
    if phi < 0.0 {
        phi += 2.0 * std::f64::consts::PI;
    }
    2.0 * w.norm().sqrt() * Complex64::from_polar(1.0, 0.5 * (phi - std::f64::consts::PI))
}

/// Everything that depends on (g₁, g₂, k₀, W) but not on x.
#[derive(Debug, Clone, Copy)]
pub struct Setting {
    pub p: CouplingParams,
    pub class: RangeClass,
    pub mu: Complex64,
    pub w: Complex64,
    pub lambda: Complex64,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

impl Setting {
    pub fn new(p: &CouplingParams, w: Complex64) -> Result<Self> {
        let class = classify(p)?;
        Self::with_mu(p, w, class, class.mu.complex())
    }

    fn with_mu(p: &CouplingParams, w: Complex64, class: RangeClass, mu: Complex64) -> Result<Self> {
        if w.norm() == 0.0 || !w.re.is_finite() || !w.im.is_finite() {
            return Err(Error::Domain(format!("W = {w}: solutions are built for W ≠ 0")));
        }
        Ok(Self { p: *p, class, mu, w, lambda: lambda(w) })
    }

    pub fn range(&self) -> RangeId {
        self.class.range_id
    }

    pub fn g(&self) -> Complex64 {
        self.p.g1 / self.lambda
    }

    pub fn alpha_p(&self) -> Complex64 {
        0.5 + self.mu + self.g()
    }

    pub fn alpha_m(&self) -> Complex64 {
        0.5 - self.mu + self.g()
    }

    pub fn beta_p(&self) -> Complex64 {
        1.0 + 2.0 * self.mu
    }

    pub fn beta_m(&self) -> Complex64 {
        1.0 - 2.0 * self.mu
    }

    /// ω(W) = Γ(β₊)/Γ(α₊), so that Wr(u₁, υ₁) = −ω.
    pub fn omega(&self) -> Result<Complex64> {
        Ok(log_gamma(self.beta_p())?.exp() * rgamma(self.alpha_p()))
    }

    /// λ^{2μ} (principal).
    pub fn lambda_2mu(&self) -> Complex64 {
        (2.0 * self.mu * self.lambda.ln()).exp()
    }
}

fn sample(value: Complex64, derivative: Complex64, x: f64, w: Complex64) -> SolutionSample {
    SolutionSample { value, derivative, x, w }
}

fn check_x(x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("solutions are defined for x > 0, got {x}")))
    }
}

/// x^s e^{−z/2} Φ(a, b; z) and its x-derivative.
fn power_phi(set: &Setting, s: Complex64, a: Complex64, b: Complex64, x: f64) -> Result<(Complex64, Complex64)> {
    let l = set.lambda;
    let z = l * x;
    let (f, df) = kummer_phi_d(a, b, z, &SeriesControl::default())?;
    let pre = (s * x.ln() - 0.5 * z).exp();
    Ok((pre * f, pre * ((s / x - 0.5 * l) * f + l * df)))
}

/// x^s e^{−z/2} Ψ(a, b; z) and its x-derivative.
fn power_psi(set: &Setting, s: Complex64, a: Complex64, b: Complex64, x: f64) -> Result<(Complex64, Complex64)> {
    let l = set.lambda;
    let z = l * x;
    let (f, df) = tricomi_psi_d(a, b, z, &SeriesControl::default())?;
    let pre = (s * x.ln() - 0.5 * z).exp();
    Ok((pre * f, pre * ((s / x - 0.5 * l) * f + l * df)))
}

fn u1_raw(set: &Setting, x: f64) -> Result<(Complex64, Complex64)> {
    power_phi(set, 0.5 + set.mu, set.alpha_p(), set.beta_p(), x)
}

fn u2_raw(set: &Setting, x: f64) -> Result<(Complex64, Complex64)> {
    if crate::special_fns::is_nonpositive_integer(set.beta_m()) {
        return Err(Error::InvalidSolution(format!(
            "u2 is undefined for beta_- = {} (2mu an integer)",
            set.beta_m().re
        )));
    }
    power_phi(set, 0.5 - set.mu, set.alpha_m(), set.beta_m(), x)
}

fn v1_raw(set: &Setting, x: f64) -> Result<(Complex64, Complex64)> {
    let (v, d) = power_psi(set, 0.5 + set.mu, set.alpha_p(), set.beta_p(), x)?;
    let k = set.lambda_2mu();
    Ok((k * v, k * d))
}

/// ω₀ = 2ψ(1) − ψ(α) − ln(λ/k₀), the R3 coefficient in
/// υ₁ = Γ(α)⁻¹[ω₀u₁ − u₃].
pub fn omega0_r3(set: &Setting) -> Result<Complex64> {
    Ok(-2.0 * EULER_GAMMA - digamma(set.alpha_p())? - (set.lambda / set.p.k0).ln())
}

/// ω_{1/2} = g₁C + g₁[ψ(a) + ln(λ/k₀)] − g₁ − λ/2, the R5 coefficient in
/// υ₁ = Γ(a)⁻¹[ω_{1/2}u₁ + u₅].
pub fn omega_half_r5(set: &Setting) -> Result<Complex64> {
    let g1 = set.p.g1;
    Ok(g1 * EULER_GAMMA + g1 * (digamma(set.alpha_p())? + (set.lambda / set.p.k0).ln()) - g1 - 0.5 * set.lambda)
}

fn u3_raw(set: &Setting, x: f64) -> Result<(Complex64, Complex64)> {
    let l = set.lambda;
    let z = l * x;
    if z.norm() <= SWITCH_RADIUS {
        let s = taylor_sums(set.alpha_p(), c(1.0, 0.0), z, true, &SeriesControl::default())?;
        let lk = (set.p.k0 * x).ln();
        let m = lk * s.phi + s.l;
        let xm = s.phi + lk * s.z_dphi + s.z_dl;
        let pre = (0.5 * x.ln() - 0.5 * z).exp();
        return Ok((pre * m, pre * ((0.5 / x - 0.5 * l) * m + xm / x)));
    }
    let w0 = omega0_r3(set)?;
    let ga = gamma(set.alpha_p())?;
    let (u, du) = u1_raw(set, x)?;
    let (v, dv) = v1_raw(set, x)?;
    Ok((w0 * u - ga * v, w0 * du - ga * dv))
}

fn u5_raw(set: &Setting, x: f64) -> Result<(Complex64, Complex64)> {
    let l = set.lambda;
    let z = l * x;
    let g1 = set.p.g1;
    if z.norm() <= SWITCH_RADIUS {
        let s = taylor_sums(set.alpha_p(), c(2.0, 0.0), z, true, &SeriesControl::default())?;
        let ell = (set.p.k0 * x).ln() + EULER_GAMMA;
        let p = 1.0 + 0.5 * z * s.phi + g1 * x * ell * s.phi + g1 * x * s.l;
        let xp = 0.5 * z * (s.phi + s.z_dphi)
            + g1 * x * (ell * s.phi + s.phi + ell * s.z_dphi + s.l + s.z_dl);
        let e = (-0.5 * z).exp();
        return Ok((e * p, e * (xp / x - 0.5 * l * p)));
    }
    let wh = omega_half_r5(set)?;
    let ga = gamma(set.alpha_p())?;
    let (u, du) = u1_raw(set, x)?;
    let (v, dv) = v1_raw(set, x)?;
    Ok((ga * v - wh * u, ga * dv - wh * du))
}

/// a_m(W) = λ^m Γ(α₊ₘ)/(m! Γ(α₋ₘ)), a polynomial in W.
pub fn a_m(set: &Setting, m: u32) -> Complex64 {
    let l = set.lambda;
    let mut prod = c(1.0, 0.0);
    let mut fact = 1.0;
    for i in 0..m {
        prod *= set.p.g1 + l * (0.5 * (1.0 - m as f64) + i as f64);
        fact *= (i + 1) as f64;
    }
    prod / fact
}

fn vm_direct(set: &Setting, m: u32, x: f64) -> Result<(Complex64, Complex64)> {
    let (u1, d1) = u1_raw(set, x)?;
    let (u2, d2) = u2_raw(set, x)?;
    let k = a_m(set, m) * gamma(set.beta_m())?;
    Ok((u2 - k * u1, d2 - k * d1))
}

fn vm_raw(set: &Setting, m: u32, x: f64) -> Result<(Complex64, Complex64)> {
    let two_mu = 2.0 * set.mu.re;
    if set.class.mu.kind != MuKind::Real || m < 2 || !(two_mu > m as f64 - 1.0 && two_mu < m as f64 + 1.0) {
        return Err(Error::InvalidSolution(format!("upsilon_(m) needs m-1 < 2mu < m+1, m >= 2 (m = {m}, 2mu = {two_mu})")));
    }
    if (two_mu - m as f64).abs() >= HALF_INTEGER_BAND {
        return vm_direct(set, m, x);
    }
    // the μ-limit through 2μ = m, by symmetric offsets and extrapolation
    let mut vals = Vec::new();
    let mut ders = Vec::new();
    for h in VM_STEPS {
        let up = Setting::with_mu(&set.p, set.w, set.class, set.mu + h)?;
        let dn = Setting::with_mu(&set.p, set.w, set.class, set.mu - h)?;
        let (a, da) = vm_direct(&up, m, x)?;
        let (b, db) = vm_direct(&dn, m, x)?;
        vals.push(0.5 * (a + b));
        ders.push(0.5 * (da + db));
    }
    Ok((richardson(&VM_STEPS, &vals), richardson(&VM_STEPS, &ders)))
}

fn angle_sc(ext: &ExtensionParam) -> (f64, f64) {
    let a = ext.angle_or_zero();
    (a.sin(), a.cos())
}

fn pair_raw(set: &Setting, ext: &ExtensionParam, x: f64, conjugate: bool) -> Result<(Complex64, Complex64)> {
    if ext.range_id != set.range() {
        return Err(Error::InvalidExtension(format!(
            "extension for {:?} used with couplings in {:?}",
            ext.range_id,
            set.range()
        )));
    }
    let k0 = set.p.k0;
    let (s, cs) = angle_sc(ext);
    let lin = |a: Complex64, u: (Complex64, Complex64), b: Complex64, v: (Complex64, Complex64)| {
        (a * u.0 + b * v.0, a * u.1 + b * v.1)
    };
    match set.range() {
        RangeId::R1 => {
            if conjugate {
                Err(Error::InvalidSolution("range 1 has no conjugate boundary solution".into()))
            } else {
                u1_raw(set, x)
            }
        }
        RangeId::R2 => {
            if (2.0 * set.mu.re - 1.0).abs() < HALF_INTEGER_BAND {
                return Err(Error::InvalidSolution(
                    "range 2 with 2mu within 1e-3 of 1: u2 degenerates (use g2 = 0, range 5)".into(),
                ));
            }
            let k1 = k0.powf(0.5 + set.mu.re);
            let k2 = k0.powf(0.5 - set.mu.re);
            let u1 = u1_raw(set, x)?;
            let u2 = u2_raw(set, x)?;
            Ok(if conjugate {
                lin(c(-k1 * cs, 0.0), u1, c(k2 * s, 0.0), u2)
            } else {
                lin(c(k1 * s, 0.0), u1, c(k2 * cs, 0.0), u2)
            })
        }
        RangeId::R3 => {
            let u1 = u1_raw(set, x)?;
            let u3 = u3_raw(set, x)?;
            Ok(if conjugate {
                lin(c(cs, 0.0), u1, c(-s, 0.0), u3)
            } else {
                lin(c(s, 0.0), u1, c(cs, 0.0), u3)
            })
        }
        RangeId::R4 => {
            let th = ext.angle_or_zero();
            let ka = set.mu.im;
            let lk = k0.ln();
            // e^{iθ} k₀^{1/2+iϰ} and e^{−iθ} k₀^{1/2−iϰ}
            let e1 = k0.sqrt() * Complex64::from_polar(1.0, th + ka * lk);
            let e2 = e1.conj();
            let u1 = u1_raw(set, x)?;
            let u2 = u2_raw(set, x)?;
            let i = c(0.0, 1.0);
            Ok(if conjugate { lin(-i * e1, u1, i * e2, u2) } else { lin(e1, u1, e2, u2) })
        }
        RangeId::R5 => {
            let u1 = u1_raw(set, x)?;
            let u5 = u5_raw(set, x)?;
            Ok(if conjugate {
                lin(c(k0 * cs, 0.0), u1, c(-s, 0.0), u5)
            } else {
                lin(c(k0 * s, 0.0), u1, c(cs, 0.0), u5)
            })
        }
    }
}

/// Evaluates a named solution at (x; W) in a prepared setting.
pub fn eval_in(set: &Setting, id: SolutionId, ext: &ExtensionParam, x: f64) -> Result<SolutionSample> {
    check_x(x)?;
    let r = set.range();
    let (v, d) = match id {
        SolutionId::U1 => u1_raw(set, x)?,
        SolutionId::U2 => {
            if set.mu.norm() == 0.0 {
                return Err(Error::InvalidSolution("u2 coincides with u1 at mu = 0".into()));
            }
            u2_raw(set, x)?
        }
        SolutionId::U3 if r == RangeId::R3 => u3_raw(set, x)?,
        SolutionId::U5 if r == RangeId::R5 => u5_raw(set, x)?,
        SolutionId::U3 | SolutionId::U5 => {
            return Err(Error::InvalidSolution(format!("{id:?} is not defined in {r:?}")))
        }
        SolutionId::V1 => v1_raw(set, x)?,
        SolutionId::Vm(m) => vm_raw(set, m, x)?,
        SolutionId::Principal => pair_raw(set, ext, x, false)?,
        SolutionId::Conjugate => pair_raw(set, ext, x, true)?,
    };
    if !(v.re.is_finite() && v.im.is_finite() && d.re.is_finite() && d.im.is_finite()) {
        return Err(Error::Overflow(format!("{id:?} at x = {x}, W = {}", set.w)));
    }
    Ok(sample(v, d, x, set.w))
}

/// Evaluates a named solution at (x; W).
pub fn eval_solution(
    id: SolutionId,
    p: &CouplingParams,
    ext: &ExtensionParam,
    x: f64,
    w: Complex64,
) -> Result<SolutionSample> {
    eval_in(&Setting::new(p, w)?, id, ext, x)
}

/// υ₍ₘ₎ = u₂ − a_m Γ(β₋) u₁ (its μ-limit when 2μ = m).
pub fn eval_vm(m: u32, p: &CouplingParams, x: f64, w: Complex64) -> Result<SolutionSample> {
    eval_solution(SolutionId::Vm(m), p, &ExtensionParam::unique(), x, w)
}

/// υ₁ via Tricomi's Ψ.
pub fn eval_v1(p: &CouplingParams, x: f64, w: Complex64) -> Result<SolutionSample> {
    eval_solution(SolutionId::V1, p, &ExtensionParam::unique(), x, w)
}

/// υ₁ via λ^{2μ}Γ(−2μ)/Γ(α₋)·u₁ + Γ(2μ)/Γ(α₊)·u₂ (2μ not an integer).
pub fn eval_v1_decomposition(p: &CouplingParams, x: f64, w: Complex64) -> Result<SolutionSample> {
    check_x(x)?;
    let set = Setting::new(p, w)?;
    let two_mu = 2.0 * set.mu;
    if set.mu.im == 0.0 && (two_mu.re - two_mu.re.round()).abs() < 1e-12 {
        return Err(Error::InvalidSolution("decomposition needs 2mu not an integer".into()));
    }
    let ca = set.lambda_2mu() * gamma(-two_mu)? * rgamma(set.alpha_m());
    let cb = gamma(two_mu)? * rgamma(set.alpha_p());
    let (u1, d1) = u1_raw(&set, x)?;
    let (u2, d2) = u2_raw(&set, x)?;
    Ok(sample(ca * u1 + cb * u2, ca * d1 + cb * d2, x, w))
}

/// Wr(A, B) = A·B′ − A′·B at x.
pub fn wronskian(
    a: SolutionId,
    b: SolutionId,
    p: &CouplingParams,
    ext: &ExtensionParam,
    x: f64,
    w: Complex64,
) -> Result<Complex64> {
    let set = Setting::new(p, w)?;
    let sa = eval_in(&set, a, ext, x)?;
    let sb = eval_in(&set, b, ext, x)?;
    Ok(sa.value * sb.derivative - sa.derivative * sb.value)
}

/// Wronskian of the extension-adapted pair: −2μk₀ (R2), −1 (R3), 4ϰk₀ (R4),
/// k₀ (R5).
pub fn pair_wronskian(set: &Setting) -> Result<Complex64> {
    let k0 = set.p.k0;
    Ok(match set.range() {
        RangeId::R1 => return Err(Error::InvalidSolution("range 1 has no adapted pair".into())),
        RangeId::R2 => c(-2.0 * set.mu.re * k0, 0.0),
        RangeId::R3 => c(-1.0, 0.0),
        RangeId::R4 => c(4.0 * set.mu.im * k0, 0.0),
        RangeId::R5 => c(k0, 0.0),
    })
}

/// The principal solution as a Frobenius expansion (small x only).
pub fn principal_frobenius(p: &CouplingParams, ext: &ExtensionParam, w: Complex64) -> Result<FrobeniusCombination> {
    let class = classify(p)?;
    if ext.range_id != class.range_id {
        return Err(Error::InvalidExtension("extension/range mismatch".into()));
    }
    let mu = class.mu.complex();
    let k0 = p.k0;
    let (s, cs) = angle_sc(ext);
    let terms = match class.range_id {
        RangeId::R1 => vec![(c(1.0, 0.0), FrobeniusSolution::u1(p, w, mu)?)],
        RangeId::R2 => vec![
            (c(k0.powf(0.5 + mu.re) * s, 0.0), FrobeniusSolution::u1(p, w, mu)?),
            (c(k0.powf(0.5 - mu.re) * cs, 0.0), FrobeniusSolution::u2(p, w, mu)?),
        ],
        RangeId::R3 => vec![
            (c(s, 0.0), FrobeniusSolution::u1(p, w, mu)?),
            (c(cs, 0.0), FrobeniusSolution::u3(p, w)?),
        ],
        RangeId::R4 => {
            let e1 = k0.sqrt() * Complex64::from_polar(1.0, ext.angle_or_zero() + mu.im * k0.ln());
            vec![(e1, FrobeniusSolution::u1(p, w, mu)?), (e1.conj(), FrobeniusSolution::u2(p, w, mu)?)]
        }
        RangeId::R5 => vec![
            (c(k0 * s, 0.0), FrobeniusSolution::u1(p, w, mu)?),
            (c(cs, 0.0), FrobeniusSolution::u5(p, w)?),
        ],
    };
    Ok(FrobeniusCombination { terms })
}
