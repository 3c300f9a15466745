//! Frobenius expansions of ψ″ = (g₁/x + g₂/x² − W)ψ about the regular
//! singular point x = 0, built from the recurrence alone (no hypergeometric
//! functions). They serve as small-x reference forms and as ODE seeds.
//!
//! Power solutions x^s Σ c_k x^k satisfy
//!   c_k[(s+k)(s+k−1) − g₂] = g₁c_{k−1} − W c_{k−2}.
//! Logarithmic solutions c·ψ_b ln x + x^r Σ d_k x^k add the source term
//! −c·c_j(2(s_b+j) − 1) at the matching power.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::CouplingParams;
use crate::special_fns::EULER_GAMMA;

const MAX_TERMS: usize = 400;

#[derive(Debug, Clone)]
struct PowerSeries {
    s: Complex64,
    coeffs: Vec<Complex64>,
}

impl PowerSeries {
    fn eval(&self, x: f64, terms: usize) -> (Complex64, Complex64) {
        let lx = x.ln();
        let mut v = Complex64::new(0.0, 0.0);
        let mut d = Complex64::new(0.0, 0.0);
        let mut xk = 1.0;
        let n = terms.min(self.coeffs.len());
        for (k, &ck) in self.coeffs.iter().take(n).enumerate() {
            let t = ck * xk;
            v += t;
            d += (self.s + k as f64) * t;
            xk *= x;
            if k > 4 && t.norm() <= 1e-18 * v.norm() && ck.norm() != 0.0 {
                break;
            }
        }
        let xs = (self.s * lx).exp();
        (xs * v, xs * d / x)
    }
}

/// A solution near the origin, possibly with a logarithmic part
/// `log_coef · base(x) · ln x`.
#[derive(Debug, Clone)]
pub struct FrobeniusSolution {
    main: PowerSeries,
    log: Option<(Complex64, PowerSeries)>,
}

fn power_coeffs(p: &CouplingParams, w: Complex64, s: Complex64, n: usize) -> Result<Vec<Complex64>> {
    let mut c = vec![Complex64::new(1.0, 0.0)];
    for k in 1..n {
        let sk = s + k as f64;
        let den = sk * (sk - 1.0) - p.g2;
        if den.norm() < 1e-12 {
            return Err(Error::InvalidSolution(format!("resonant Frobenius exponent s = {s}")));
        }
        let prev2 = if k >= 2 { c[k - 2] } else { Complex64::new(0.0, 0.0) };
        c.push((p.g1 * c[k - 1] - w * prev2) / den);
    }
    Ok(c)
}

impl FrobeniusSolution {
    /// x^s Σ c_k x^k with c₀ = 1.
    pub fn power(p: &CouplingParams, w: Complex64, s: Complex64) -> Result<Self> {
        Ok(Self { main: PowerSeries { s, coeffs: power_coeffs(p, w, s, MAX_TERMS)? }, log: None })
    }

    /// u₁ ~ x^{1/2+μ}.
    pub fn u1(p: &CouplingParams, w: Complex64, mu: Complex64) -> Result<Self> {
        Self::power(p, w, 0.5 + mu)
    }

    /// u₂ ~ x^{1/2−μ}.
    pub fn u2(p: &CouplingParams, w: Complex64, mu: Complex64) -> Result<Self> {
        Self::power(p, w, 0.5 - mu)
    }

    /// u₃ = u₁ ln(k₀x) + x^{1/2} Σ_{k≥1} d_k x^k (g₂ = −1/4).
    pub fn u3(p: &CouplingParams, w: Complex64) -> Result<Self> {
        let base = power_coeffs(p, w, Complex64::new(0.5, 0.0), MAX_TERMS)?;
        let zero = Complex64::new(0.0, 0.0);
        let mut d = vec![zero];
        for k in 1..MAX_TERMS {
            let kf = k as f64;
            let prev2 = if k >= 2 { d[k - 2] } else { zero };
            d.push((p.g1 * d[k - 1] - w * prev2 - 2.0 * kf * base[k]) / (kf * kf));
        }
        let lk = p.k0.ln();
        let coeffs = d.iter().zip(&base).map(|(dk, ck)| dk + lk * ck).collect();
        Ok(Self {
            main: PowerSeries { s: Complex64::new(0.5, 0.0), coeffs },
            log: Some((Complex64::new(1.0, 0.0), PowerSeries { s: Complex64::new(0.5, 0.0), coeffs: base })),
        })
    }

    /// u₅ = g₁u₁ ln x + Σ d_k x^k with d₀ = 1, d₁ = g₁(ln k₀ + C) (g₂ = 0).
    pub fn u5(p: &CouplingParams, w: Complex64) -> Result<Self> {
        let base = power_coeffs(p, w, Complex64::new(1.0, 0.0), MAX_TERMS)?;
        let zero = Complex64::new(0.0, 0.0);
        let mut d = vec![Complex64::new(1.0, 0.0), Complex64::new(p.g1 * (p.k0.ln() + EULER_GAMMA), 0.0)];
        for k in 2..MAX_TERMS {
            let kf = k as f64;
            let rhs = p.g1 * d[k - 1] - w * d[k - 2] - p.g1 * base[k - 1] * (2.0 * kf - 1.0);
            d.push(rhs / (kf * (kf - 1.0)));
        }
        Ok(Self {
            main: PowerSeries { s: zero, coeffs: d },
            log: Some((Complex64::new(p.g1, 0.0), PowerSeries { s: Complex64::new(1.0, 0.0), coeffs: base })),
        })
    }

    /// Value and derivative, summing at most `terms` coefficients of each
    /// series (`usize::MAX` for the converged sum).
    pub fn eval_truncated(&self, x: f64, terms: usize) -> (Complex64, Complex64) {
        let (mut v, mut d) = self.main.eval(x, terms);
        if let Some((c, base)) = &self.log {
            let (bv, bd) = base.eval(x, terms);
            let lx = x.ln();
            v += c * bv * lx;
            d += c * (bd * lx + bv / x);
        }
        (v, d)
    }

    pub fn eval(&self, x: f64) -> (Complex64, Complex64) {
        self.eval_truncated(x, usize::MAX)
    }
}

/// A linear combination of Frobenius solutions.
#[derive(Debug, Clone)]
pub struct FrobeniusCombination {
    pub terms: Vec<(Complex64, FrobeniusSolution)>,
}

impl FrobeniusCombination {
    pub fn eval(&self, x: f64) -> (Complex64, Complex64) {
        self.terms.iter().fold(
            (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)),
            |(v, d), (c, s)| {
                let (sv, sd) = s.eval(x);
                (v + c * sv, d + c * sd)
            },
        )
    }
}
