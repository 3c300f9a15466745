//! Solution bases: reference values, Wronskian identities, ODE residuals and
//! the boundary-form fit.

use kratzer::basis::*;
use kratzer::model::{classify, CouplingParams, ExtensionParam, RangeId};
use kratzer::special_fns::{gamma, rgamma};
use kratzer::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

// (g1, mu, W, x, u1, υ1)
const U1_V1: &[(f64, Complex64, Complex64, f64, Complex64, Complex64)] = &[
    (1.0, c(1.0, 0.0), c(-0.29999999999999999, 0.0), 0.80000000000000004, c(0.94745525341589106, 0.0), c(0.4683795944844209, 0.0)),
    (-1.0, c(0.29999999999999999, 0.0), c(2.0, 0.5), 1.7, c(-0.18921883976509461, -0.077768145914459213), c(-1.0002641078215125, -0.072201260381976904)),
    (0.69999999999999996, c(0.0, 0.59999999999999998), c(1.5, 0.0), 0.40000000000000002, c(0.53855620665666065, -0.41689812043562376), c(0.21983361368245828, 0.98718096201790795)),
    (-2.0, c(0.75, 0.0), c(-1.0, -2.0), 3.0, c(-2.3713382502712101, 2.0783572295930822), c(-0.11861080900831741, -0.054571413255644759)),
];
// (g1, k0, W, x, u3)
const U3: &[(f64, f64, Complex64, f64, Complex64)] = &[
    (1.0, 1.0, c(-0.5, 0.0), 0.59999999999999998, c(-1.9209520982558428, 0.0)),
    (-1.0, 2.0, c(1.0, 0.29999999999999999), 1.3, c(1.4906967615515931, -0.096840869492922867)),
    (0.5, 0.5, c(-2.0, 1.0), 45.0, c(3.7714966936402361e+28, 2.0376638259631741e+28)),
];
// (g1, k0, W, x, u5)
const U5: &[(f64, f64, Complex64, f64, Complex64)] = &[
    (1.0, 1.0, c(-0.5, 0.0), 0.59999999999999998, c(0.81782779226662331, 0.0)),
    (-1.0, 2.0, c(1.0, 0.29999999999999999), 1.3, c(-1.1583541853880978, -0.070133417137781634)),
    (0.5, 0.5, c(-2.0, 1.0), 45.0, c(-2.0191320313064023e+28, -8.0596776215514489e+27)),
];

fn params_for_mu(g1: f64, mu: Complex64, k0: f64) -> CouplingParams {
    CouplingParams::new(g1, (mu * mu).re - 0.25, k0).unwrap()
}

/// g₂ for a draw in the given range.
fn draw_g2(rng: &mut ChaCha8Rng, r: RangeId) -> f64 {
    match r {
        RangeId::R1 => rng.gen_range(0.75..4.0),
        RangeId::R2 => {
            // keep 2μ clear of 1, where u₂ degenerates
            let mu: f64 = if rng.gen_bool(0.5) { rng.gen_range(0.05..0.45) } else { rng.gen_range(0.55..0.95) };
            mu * mu - 0.25
        }
        RangeId::R3 => -0.25,
        RangeId::R4 => -0.25 - rng.gen_range(0.05..3.0),
        RangeId::R5 => 0.0,
    }
}

fn draw_params(rng: &mut ChaCha8Rng, r: RangeId) -> CouplingParams {
    let g1 = if rng.gen_bool(0.5) { 1.0 } else { -1.0 } * rng.gen_range(0.2..2.0);
    CouplingParams::new(g1, draw_g2(rng, r), rng.gen_range(0.5..2.0)).unwrap()
}

fn draw_ext(rng: &mut ChaCha8Rng, p: &CouplingParams) -> ExtensionParam {
    ExtensionParam::for_params(p, Some(rng.gen_range(-1.5..1.5))).unwrap()
}

fn draw_w(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::from_polar(rng.gen_range(0.05..2.0), rng.gen_range(-3.1..3.1))
}

const RANGES: [RangeId; 5] = [RangeId::R1, RangeId::R2, RangeId::R3, RangeId::R4, RangeId::R5];

#[test]
fn u1_and_v1_reference_values() {
    for &(g1, mu, w, x, want_u, want_v) in U1_V1 {
        let p = params_for_mu(g1, mu, 1.0);
        let u = eval_solution(SolutionId::U1, &p, &ExtensionParam::for_params(&p, None).unwrap(), x, w).unwrap();
        assert!(rel(u.value, want_u) < 1e-10, "u1: {} vs {want_u}", u.value);
        let v = eval_v1(&p, x, w).unwrap();
        assert!(rel(v.value, want_v) < 1e-9, "v1: {} vs {want_v}", v.value);
    }
}

#[test]
fn u3_and_u5_reference_values() {
    for &(g1, k0, w, x, want) in U3 {
        let p = CouplingParams::new(g1, -0.25, k0).unwrap();
        let ext = ExtensionParam::for_params(&p, None).unwrap();
        let got = eval_solution(SolutionId::U3, &p, &ext, x, w).unwrap().value;
        assert!(rel(got, want) < 1e-9, "u3: {got} vs {want}");
    }
    for &(g1, k0, w, x, want) in U5 {
        let p = CouplingParams::new(g1, 0.0, k0).unwrap();
        let ext = ExtensionParam::for_params(&p, None).unwrap();
        let got = eval_solution(SolutionId::U5, &p, &ext, x, w).unwrap().value;
        assert!(rel(got, want) < 1e-9, "u5: {got} vs {want}");
    }
}

#[test]
fn lambda_branch() {
    assert!((lambda(c(0.25, 0.0)) - c(0.0, -1.0)).norm() < 1e-15);
    assert!((lambda(c(-0.25, 0.0)) - c(1.0, 0.0)).norm() < 1e-15);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..20 {
        let w = draw_w(&mut rng);
        let l = lambda(w);
        assert!(l.re >= -1e-15);
        assert!((l * l / -4.0 - w).norm() < 1e-14 * w.norm());
    }
}

#[test]
fn u1_is_even_in_lambda() {
    // Kummer's transformation: x^{1/2+μ}e^{−z/2}Φ(α₊, β₊; z) is unchanged by λ → −λ
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..20 {
        let p = draw_params(&mut rng, RangeId::R2);
        let mu = classify(&p).unwrap().mu.complex();
        let w = draw_w(&mut rng);
        let x = rng.gen_range(0.05..5.0);
        let l = lambda(w);
        let eval = |l: Complex64| {
            let z = l * x;
            c(x, 0.0).powc(0.5 + mu) * (-0.5 * z).exp() * kratzer::special_fns::phi(0.5 + mu + p.g1 / l, 1.0 + 2.0 * mu, z).unwrap()
        };
        assert!(rel(eval(-l), eval(l)) < 1e-10);
        let u = eval_solution(SolutionId::U1, &p, &draw_ext(&mut rng, &p), x, w).unwrap();
        assert!(rel(u.value, eval(l)) < 1e-12);
    }
}

#[test]
fn u1_small_x_behaviour() {
    // μ = 1: u₁ ≈ x^{3/2} = k₀^{−3/2}(k₀x)^{3/2}
    let p = CouplingParams::new(0.7, 0.75, 2.0).unwrap();
    let ext = ExtensionParam::unique();
    for x in [1e-6, 1e-5, 1e-4] {
        let u = eval_solution(SolutionId::U1, &p, &ext, x, c(-0.4, 0.0)).unwrap();
        let lead = p.k0.powf(-1.5) * (p.k0 * x).powf(1.5);
        assert!((u.value.re / lead - 1.0).abs() < 10.0 * x);
    }
}

#[test]
fn small_x_exponents() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for r in [RangeId::R1, RangeId::R2, RangeId::R4] {
        for _ in 0..5 {
            let p = draw_params(&mut rng, r);
            let mu = classify(&p).unwrap().mu.complex();
            let ext = draw_ext(&mut rng, &p);
            let w = draw_w(&mut rng);
            for (id, s) in [(SolutionId::U1, 0.5 + mu), (SolutionId::U2, 0.5 - mu)] {
                let x = 1e-7;
                let u = eval_solution(id, &p, &ext, x, w).unwrap();
                let ratio = u.value / c(x, 0.0).powc(s);
                assert!((ratio - 1.0).norm() < 1e-5, "{r:?} {id:?}: {ratio}");
                // logarithmic derivative → s/x
                assert!((u.derivative * x / u.value - s).norm() < 1e-5);
            }
        }
    }
}

#[test]
fn u2_is_conjugate_of_u1_in_range_4() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..10 {
        let p = draw_params(&mut rng, RangeId::R4);
        let ext = draw_ext(&mut rng, &p);
        let e = rng.gen_range(-2.0..2.0);
        let x = rng.gen_range(0.01..10.0);
        let a = eval_solution(SolutionId::U1, &p, &ext, x, c(e, 0.0)).unwrap();
        let b = eval_solution(SolutionId::U2, &p, &ext, x, c(e, 0.0)).unwrap();
        assert!(rel(b.value, a.value.conj()) < 1e-10);
        assert!(rel(b.derivative, a.derivative.conj()) < 1e-10);
    }
}

#[test]
fn wronskian_examples() {
    let w = c(-0.5, 0.2);
    let p = params_for_mu(1.0, c(0.3, 0.0), 1.0);
    let ext = ExtensionParam::for_params(&p, None).unwrap();
    let wr = wronskian(SolutionId::U1, SolutionId::U2, &p, &ext, 0.7, w).unwrap();
    assert!((wr + 0.6).norm() < 1e-10);
    let p3 = CouplingParams::new(1.0, -0.25, 1.0).unwrap();
    let ext3 = ExtensionParam::for_params(&p3, None).unwrap();
    assert!((wronskian(SolutionId::U1, SolutionId::U3, &p3, &ext3, 0.7, w).unwrap() - 1.0).norm() < 1e-10);
    let p5 = CouplingParams::new(1.0, 0.0, 1.0).unwrap();
    let ext5 = ExtensionParam::for_params(&p5, None).unwrap();
    assert!((wronskian(SolutionId::U1, SolutionId::U5, &p5, &ext5, 0.7, w).unwrap() + 1.0).norm() < 1e-10);
}

#[test]
fn wronskian_identities_on_random_draws() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..30 {
        let w = draw_w(&mut rng);
        // u₁, u₂, u₃, u₅ grow with |z|; the computed Wronskian carries an error
        // ~1e−15·|u u′|, so keep |z| ≤ 8
        let x = 10f64.powf(rng.gen_range(-2.0..1.3)).min(8.0 / lambda(w).norm());
        // Wr(u₁, u₂) = −2μ
        let r = if rng.gen_bool(0.5) { RangeId::R2 } else { RangeId::R4 };
        let p = draw_params(&mut rng, r);
        let mu = classify(&p).unwrap().mu.complex();
        let ext = draw_ext(&mut rng, &p);
        let wr = wronskian(SolutionId::U1, SolutionId::U2, &p, &ext, x, w).unwrap();
        assert!((wr + 2.0 * mu).norm() <= 1e-8 * mu.norm().max(1.0), "{wr} vs {}", -2.0 * mu);
        // Wr(u₁, u₃) = 1, Wr(u₁, u₅) = −1
        let p3 = draw_params(&mut rng, RangeId::R3);
        let wr = wronskian(SolutionId::U1, SolutionId::U3, &p3, &draw_ext(&mut rng, &p3), x, w).unwrap();
        assert!((wr - 1.0).norm() <= 1e-8, "u3: {wr}");
        let p5 = draw_params(&mut rng, RangeId::R5);
        let wr = wronskian(SolutionId::U1, SolutionId::U5, &p5, &draw_ext(&mut rng, &p5), x, w).unwrap();
        assert!((wr + 1.0).norm() <= 1e-8, "u5: {wr}");
        // Wr(u₁, υ₁) = −Γ(β₊)/Γ(α₊)
        let r = RANGES[rng.gen_range(0..5)];
        let p = draw_params(&mut rng, r);
        let set = Setting::new(&p, w).unwrap();
        let want = -gamma(set.beta_p()).unwrap() * rgamma(set.alpha_p());
        let wr = wronskian(SolutionId::U1, SolutionId::V1, &p, &draw_ext(&mut rng, &p), x, w).unwrap();
        assert!((wr - want).norm() <= 1e-8 * want.norm().max(1.0), "{r:?}: {wr} vs {want}");
    }
}

#[test]
fn adapted_pair_wronskians() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for r in [RangeId::R2, RangeId::R3, RangeId::R4, RangeId::R5] {
        for _ in 0..5 {
            let p = draw_params(&mut rng, r);
            let ext = draw_ext(&mut rng, &p);
            let w = draw_w(&mut rng);
            let x = rng.gen_range(0.05..5.0);
            let want = pair_wronskian(&Setting::new(&p, w).unwrap()).unwrap();
            let wr = wronskian(SolutionId::Principal, SolutionId::Conjugate, &p, &ext, x, w).unwrap();
            assert!((wr - want).norm() <= 1e-8 * want.norm(), "{r:?}: {wr} vs {want}");
        }
    }
}

#[test]
fn v1_decomposition_agrees_with_tricomi() {
    let p = params_for_mu(-0.8, c(0.3, 0.0), 1.3);
    for (x, w) in [(0.5, c(-0.7, 0.0)), (2.0, c(1.2, 0.4)), (6.0, c(0.3, -0.2))] {
        let a = eval_v1(&p, x, w).unwrap();
        let b = eval_v1_decomposition(&p, x, w).unwrap();
        assert!(rel(b.value, a.value) < 1e-8, "{} vs {}", b.value, a.value);
        assert!(rel(b.derivative, a.derivative) < 1e-8);
    }
}

#[test]
fn v1_large_x_asymptotics() {
    // υ₁ λ^{α₋} x^{g₁/λ} e^{z/2} → 1 with an O(1/x) remainder
    let p = params_for_mu(0.9, c(0.4, 0.0), 1.0);
    let w = c(-0.6, 0.3);
    let set = Setting::new(&p, w).unwrap();
    let mut prev = f64::INFINITY;
    for x in [20.0, 40.0, 80.0, 160.0] {
        let v = eval_v1(&p, x, w).unwrap().value;
        let z = set.lambda * x;
        let r = v * (set.alpha_m() * set.lambda.ln()).exp() * (set.g() * x.ln()).exp() * (0.5 * z).exp();
        let d = (r - 1.0).norm();
        assert!(d * x < 5.0, "x = {x}: {d}");
        assert!(d < prev);
        prev = d;
    }
}

#[test]
fn vm_wronskian_and_limit() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for m in [2u32, 3] {
        for _ in 0..5 {
            let mu = 0.5 * m as f64 + rng.gen_range(-0.4..0.4);
            let p = params_for_mu(rng.gen_range(-2.0..2.0), c(mu, 0.0), 1.0);
            let w = draw_w(&mut rng);
            let x = rng.gen_range(0.1..4.0);
            let a = eval_solution(SolutionId::U1, &p, &ExtensionParam::unique(), x, w).unwrap();
            let v = eval_vm(m, &p, x, w).unwrap();
            let wr = a.value * v.derivative - a.derivative * v.value;
            assert!((wr + 2.0 * mu).norm() < 1e-9 * (2.0 * mu), "m = {m}, mu = {mu}: {wr}");
        }
        // a_m is a real polynomial in W for real W
        let p = params_for_mu(0.6, c(0.5 * m as f64 + 0.1, 0.0), 1.0);
        for e in [-1.3, 0.7] {
            let s = Setting::new(&p, c(e, 0.0)).unwrap();
            assert!(a_m(&s, m).im.abs() < 1e-14);
        }
        // continuity through 2μ = m
        let x = 0.9;
        let w = c(-0.5, 0.1);
        let g1 = -0.7;
        let at = eval_vm(m, &params_for_mu(g1, c(0.5 * m as f64, 0.0), 1.0), x, w).unwrap().value;
        for h in [1e-4, -1e-4] {
            let near = eval_vm(m, &params_for_mu(g1, c(0.5 * m as f64 + h, 0.0), 1.0), x, w).unwrap().value;
            assert!(rel(near, at) < 1e-3, "m = {m}, h = {h}: {near} vs {at}");
        }
    }
}

fn ode_residual(p: &CouplingParams, ext: &ExtensionParam, id: SolutionId, x: f64, w: Complex64) -> f64 {
    let h = 4e-3 * x.min(2.0 / lambda(w).norm());
    let f = |t: f64| eval_solution(id, p, ext, t, w).unwrap().value;
    let (fm2, fm1, f0, f1, f2) = (f(x - 2.0 * h), f(x - h), f(x), f(x + h), f(x + 2.0 * h));
    let d2 = (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * f1 - f2) / (12.0 * h * h);
    let v = p.g1 / x + p.g2 / (x * x) - w;
    let scale = (v * f0).norm() + d2.norm();
    (-d2 + v * f0).norm() / scale.max(1e-300)
}

#[test]
fn ode_residual_on_log_grid() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for r in RANGES {
        for _ in 0..30 {
            let p = draw_params(&mut rng, r);
            let ext = draw_ext(&mut rng, &p);
            let w = draw_w(&mut rng);
            let x = 10f64.powf(rng.gen_range(-3.0..50f64.log10()));
            let ids: &[SolutionId] = match r {
                RangeId::R1 => &[SolutionId::U1, SolutionId::V1],
                RangeId::R3 => &[SolutionId::U3, SolutionId::Principal, SolutionId::V1],
                RangeId::R5 => &[SolutionId::U5, SolutionId::Principal, SolutionId::V1],
                _ => &[SolutionId::U2, SolutionId::Principal, SolutionId::V1],
            };
            for &id in ids {
                let res = ode_residual(&p, &ext, id, x, w);
                assert!(res < 1e-6, "{r:?} {id:?} x = {x}, W = {w}: {res}");
            }
        }
    }
}

#[test]
fn boundary_solutions_are_real_for_real_energy() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for r in RANGES {
        for _ in 0..10 {
            let p = draw_params(&mut rng, r);
            let ext = draw_ext(&mut rng, &p);
            let e = rng.gen_range(-2.0..2.0);
            let x = rng.gen_range(0.01..20.0);
            let mut ids = vec![SolutionId::Principal];
            if r != RangeId::R1 {
                ids.push(SolutionId::Conjugate);
            }
            for id in ids {
                let s = eval_solution(id, &p, &ext, x, c(e, 0.0)).unwrap();
                assert!(s.value.im.abs() <= 1e-10 * s.value.norm().max(1.0), "{r:?} {id:?}: {}", s.value);
            }
        }
    }
}

fn samples(p: &CouplingParams, ext: &ExtensionParam, id: SolutionId, w: Complex64) -> Vec<SolutionSample> {
    let top = fit_window(p, w);
    (0..8).map(|i| eval_solution(id, p, ext, top * 0.5f64.powi(i), w).unwrap()).collect()
}

#[test]
fn boundary_fit_recovers_angles() {
    let w = c(-0.4, 0.0);
    for r in [RangeId::R2, RangeId::R3, RangeId::R5] {
        for nu in [-1.2, 0.3, 1.0] {
            let g2 = if r == RangeId::R2 { 0.16 - 0.25 } else if r == RangeId::R3 { -0.25 } else { 0.0 };
            let p = CouplingParams::new(-0.8, g2, 1.4).unwrap();
            let ext = ExtensionParam::new(r, Some(nu)).unwrap();
            let fit = boundary_fit(&p, &samples(&p, &ext, SolutionId::Principal, w), &ext).unwrap();
            assert!((fit.a1 - nu.sin()).norm() < 1e-6 && (fit.a2 - nu.cos()).norm() < 1e-6, "{r:?} {nu}: {fit:?}");
        }
    }
    let p = CouplingParams::new(0.6, -1.25, 0.8).unwrap();
    for th in [0.2, 1.5, 2.9] {
        let ext = ExtensionParam::new(RangeId::R4, Some(th)).unwrap();
        let fit = boundary_fit(&p, &samples(&p, &ext, SolutionId::Principal, w), &ext).unwrap();
        assert!((fit.a1 / fit.a2 - Complex64::from_polar(1.0, 2.0 * th)).norm() < 1e-6);
    }
}

#[test]
fn boundary_fit_of_pure_u1() {
    let w = c(0.3, 0.0);
    for g2 in [1.5, 0.0, -0.25, -0.1, -2.0] {
        let p = CouplingParams::new(1.1, g2, 1.0).unwrap();
        let ext = ExtensionParam::for_params(&p, Some(0.4)).unwrap();
        let fit = boundary_fit(&p, &samples(&p, &ext, SolutionId::U1, w), &ext).unwrap();
        assert!(fit.a2.norm() < 1e-8, "g2 = {g2}: {fit:?}");
    }
}

#[test]
fn boundary_fit_rejects_degenerate_samples() {
    let p = CouplingParams::new(1.0, -0.1, 1.0).unwrap();
    let ext = ExtensionParam::for_params(&p, Some(0.4)).unwrap();
    let s = eval_solution(SolutionId::Principal, &p, &ext, 1e-3, c(-1.0, 0.0)).unwrap();
    assert!(boundary_fit(&p, &[s], &ext).is_err());
}

#[test]
fn invalid_requests() {
    let p = CouplingParams::new(1.0, 1.0, 1.0).unwrap();
    let ext = ExtensionParam::unique();
    assert!(eval_solution(SolutionId::U3, &p, &ext, 1.0, c(-1.0, 0.0)).is_err());
    assert!(eval_solution(SolutionId::Conjugate, &p, &ext, 1.0, c(-1.0, 0.0)).is_err());
    assert!(eval_solution(SolutionId::U1, &p, &ext, -1.0, c(-1.0, 0.0)).is_err());
    assert!(eval_solution(SolutionId::U1, &p, &ext, 1.0, c(0.0, 0.0)).is_err());
}
