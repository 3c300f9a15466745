use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use kratzer::basis::{boundary_fit, eval_solution, fit_window, SolutionId, SolutionSample};
use kratzer::greens::*;
use kratzer::model::*;
use kratzer::spectral::{continuum_density, discrete_spectrum};
use kratzer::{Complex64, Error};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// A coupling per range, each with a non-trivial extension.
fn cases() -> Vec<(CouplingParams, ExtensionParam)> {
    let mut out = Vec::new();
    for g1 in [-0.9, 0.7] {
        for (g2, a) in [(1.3, None), (0.3, Some(0.5)), (-0.25, Some(-0.7)), (-1.25, Some(1.9)), (0.0, Some(1.1))] {
            let p = CouplingParams::new(g1, g2, 1.2).unwrap();
            out.push((p, ExtensionParam::for_params(&p, a).unwrap()));
        }
    }
    out
}

fn ext_of(p: &CouplingParams, a: f64) -> ExtensionParam {
    ExtensionParam::for_params(p, Some(a)).unwrap()
}

#[test]
fn symmetric() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (p, ext) in cases() {
        for _ in 0..20 {
            let x = 10f64.powf(rng.gen_range(-2.0..0.8));
            let y = 10f64.powf(rng.gen_range(-2.0..0.8));
            let w = c(rng.gen_range(-3.0..3.0), rng.gen_range(0.05..2.0));
            let a = green(&p, &ext, x, y, w).unwrap().value;
            let b = green(&p, &ext, y, x, w).unwrap().value;
            assert!((a - b).norm() <= 1e-10 * a.norm(), "{p:?} x={x} y={y} W={w}");
        }
    }
}

#[test]
fn derivative_jump() {
    for (p, ext) in cases() {
        for y in [0.05, 0.8, 3.0] {
            for w in [c(-0.7, 0.3), c(1.5, 0.01), c(0.2, -1.0)] {
                let h = 1e-9 * y;
                let (_, d_hi) = green_with_derivative(&p, &ext, y + h, y, w).unwrap();
                let (_, d_lo) = green_with_derivative(&p, &ext, y - h, y, w).unwrap();
                let jump = d_hi - d_lo;
                assert!((jump - c(-1.0, 0.0)).norm() < 1e-6, "{p:?} y={y} W={w}: {jump}");
            }
        }
    }
}

#[test]
fn display_form_agrees() {
    for (p, ext) in cases() {
        for (x, y) in [(0.1, 0.4), (1.3, 0.2), (0.7, 0.7)] {
            let w = c(-0.4, 0.6);
            let a = green(&p, &ext, x, y, w).unwrap().value;
            let b = green_display(&p, &ext, x, y, w).unwrap().value;
            assert!((a - b).norm() < 1e-9 * a.norm(), "{p:?} ({x},{y}): {a} vs {b}");
        }
    }
}

#[test]
fn solves_the_equation_off_diagonal() {
    for (p, ext) in cases() {
        let w = c(0.6, 0.4);
        let y = 0.9;
        for x in [0.05f64, 0.3, 2.0, 6.0] {
            let h = 2e-3 * x.min(1.0);
            let g = |x: f64| green(&p, &ext, x, y, w).unwrap().value;
            let d2 = (-g(x + 2.0 * h) + 16.0 * g(x + h) - 30.0 * g(x) + 16.0 * g(x - h) - g(x - 2.0 * h))
                / (12.0 * h * h);
            let v = p.g1 / x + p.g2 / (x * x);
            let res = -d2 + (v - w) * g(x);
            let scale = d2.norm() + ((v - w) * g(x)).norm();
            assert!(res.norm() <= 1e-6 * scale, "{p:?} x={x}: {}", res.norm() / scale);
        }
    }
}

#[test]
fn boundary_condition_and_decay() {
    for (p, ext) in cases() {
        let w = c(-0.3, 0.5);
        let y = 0.8;
        let top = fit_window(&p, w);
        let samples: Vec<SolutionSample> = (0..8)
            .map(|i| {
                let x = top * 0.5f64.powi(i);
                let (g, d) = green_with_derivative(&p, &ext, x, y, w).unwrap();
                SolutionSample { value: g.value, derivative: d, x, w }
            })
            .collect();
        let principal: Vec<SolutionSample> =
            samples.iter().map(|s| eval_solution(SolutionId::Principal, &p, &ext, s.x, w).unwrap()).collect();
        let fg = boundary_fit(&p, &samples, &ext).unwrap();
        let fu = boundary_fit(&p, &principal, &ext).unwrap();
        // G(·, y) ∝ u near the origin: same (a₁ : a₂)
        let cross = fg.a1 * fu.a2 - fg.a2 * fu.a1;
        assert!(cross.norm() < 1e-6 * fg.a1.norm().max(fg.a2.norm()) * fu.a1.norm().max(fu.a2.norm()), "{p:?}");
        let far = green(&p, &ext, 40.0, y, w).unwrap().value.norm();
        let mid = green(&p, &ext, 10.0, y, w).unwrap().value.norm();
        assert!(far < 1e-3 * mid, "{p:?}: {far} vs {mid}");
    }
}

/// Root of Re 1/Ω on the negative axis near `e`, by secant iteration.
fn omega_pole(p: &CouplingParams, ext: &ExtensionParam, e: f64) -> f64 {
    let f = |e: f64| (1.0 / omega(p, ext, c(e, 0.0)).unwrap()).re;
    let (mut a, mut b) = (e * (1.0 + 1e-5), e * (1.0 - 1e-5));
    let (mut fa, mut fb) = (f(a), f(b));
    for _ in 0..50 {
        if fb == fa {
            break;
        }
        let x = b - fb * (b - a) / (fb - fa);
        a = b;
        fa = fb;
        b = x;
        fb = f(b);
        if (b - a).abs() < 1e-15 * b.abs() {
            break;
        }
    }
    b
}

#[test]
fn omega_poles_are_levels() {
    for (g1, g2, a) in [(-0.9, 0.3, 0.5), (-0.9, -0.25, -0.7), (-0.9, 0.0, 1.1), (0.7, -1.25, 1.9), (-0.9, -1.25, 0.4)] {
        let p = CouplingParams::new(g1, g2, 1.2).unwrap();
        let ext = ext_of(&p, a);
        let levels = discrete_spectrum(&p, &ext, (-1e3, 0.0), 4).unwrap();
        assert!(!levels.is_empty());
        for l in &levels {
            let e = omega_pole(&p, &ext, l.energy);
            assert!(((e - l.energy) / l.energy).abs() < 1e-9, "g2={g2} n={}: {e} vs {}", l.n, l.energy);
        }
    }
}

#[test]
fn r1_residues() {
    let p = CouplingParams::new(-1.0, 0.75, 1.0).unwrap();
    let ext = ExtensionParam::unique();
    let levels = discrete_spectrum(&p, &ext, (-1.0, 0.0), 3).unwrap();
    for l in &levels {
        for (x, y) in [(0.5, 2.0), (3.0, 1.0)] {
            let u = |x: f64| eval_solution(SolutionId::U1, &p, &ext, x, c(l.energy, 0.0)).unwrap().value.re;
            let want = l.weight_q.powi(2) * u(x) * u(y);
            // (W − Eₙ)G → −Qₙ²u(x)u(y), extrapolated linearly from two offsets
            let r = |d: f64| {
                let w = l.energy * (1.0 + d);
                ((w - l.energy) * green(&p, &ext, x, y, c(w, 0.0)).unwrap().value).re
            };
            let res = 2.0 * r(1e-5) - r(2e-5);
            assert!((res + want).abs() < 1e-6 * want.abs(), "n={}: {res} vs {}", l.n, -want);
        }
    }
}

#[test]
fn density_is_imaginary_part_of_omega() {
    for (p, ext) in cases() {
        if ext.range_id == RangeId::R1 {
            continue;
        }
        for e in [0.05, 0.9, 7.0] {
            let om = omega(&p, &ext, c(e, 1e-300)).unwrap();
            let s = continuum_density(&p, &ext, e).unwrap();
            assert!((om.im / std::f64::consts::PI - s).abs() < 1e-10 * s, "{p:?} E={e}");
        }
    }
}

#[test]
fn rejects_levels_and_bad_points() {
    let p = CouplingParams::new(-1.0, 0.75, 1.0).unwrap();
    let ext = ExtensionParam::unique();
    assert!(matches!(green(&p, &ext, 1.0, 2.0, c(-1.0 / 9.0, 0.0)), Err(Error::OnSpectrum(_))));
    assert!(green(&p, &ext, 1.0, 2.0, c(-1.0 / 9.0 * (1.0 + 1e-6), 0.0)).is_ok());
    assert!(green(&p, &ext, -1.0, 2.0, c(1.0, 1.0)).is_err());
    let q = CouplingParams::new(-1.0, 0.3, 1.0).unwrap();
    let e = discrete_spectrum(&q, &ext_of(&q, 0.2), (-10.0, 0.0), 1).unwrap()[0].energy;
    assert!(matches!(green(&q, &ext_of(&q, 0.2), 1.0, 2.0, c(e, 0.0)), Err(Error::OnSpectrum(_))));
    assert!(omega(&p, &ext, c(1.0, 1.0)).is_err());
}
