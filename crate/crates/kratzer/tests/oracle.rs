use kratzer::basis::{eval_solution, SolutionId};
use kratzer::model::*;
use kratzer::oracle::*;
use kratzer::spectral::{closed_form_levels, discrete_spectrum, eigenfunction, ClosedFormVariant};
use kratzer::{Complex64, Error};

fn params(g1: f64, g2: f64, k0: f64) -> CouplingParams {
    CouplingParams::new(g1, g2, k0).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn r1_config(p: &CouplingParams) -> ShootingConfig {
    ShootingConfig { x_far: 60.0, x_match: 30.0, ..ShootingConfig::for_window(p, (-1.0, -0.01)).unwrap() }
}

#[test]
fn bound_state_decays_and_neighbour_grows() {
    let p = params(-1.0, 0.75, 1.0);
    let ext = ExtensionParam::unique();
    let cfg = r1_config(&p);
    let grid = [5.0, 20.0, 60.0];
    let at = |w: f64| integrate_solution(&p, &ext, w, &cfg, &grid).unwrap();
    let s = at(-1.0 / 9.0);
    // u₀ ∝ x² e^{−x/3}: tiny at 60 relative to its peak region
    assert!(s[2].value.norm() < 1e-4 * s[0].value.norm());
    let g = at(-1.0 / 9.0 + 0.01);
    assert!(g[2].value.norm() > 1e3 * g[0].value.norm());
}

#[test]
fn shooting_finds_r1_levels() {
    let p = params(-1.0, 0.75, 1.0);
    let ext = ExtensionParam::unique();
    let window = (-0.2, -0.015);
    let cfg = ShootingConfig::for_window(&p, window).unwrap();
    let found = shoot_eigenvalues(&p, &ext, window, &cfg).unwrap();
    let want = [-1.0 / 9.0, -1.0 / 25.0, -1.0 / 49.0];
    assert_eq!(found.len(), 3, "{found:?}");
    for (f, w) in found.iter().zip(want) {
        assert!(rel(*f, w) < 1e-6, "{f} vs {w}");
    }
    let q = params(1.0, 0.75, 1.0);
    let cfg = ShootingConfig::for_window(&q, window).unwrap();
    assert!(shoot_eigenvalues(&q, &ext, window, &cfg).unwrap().is_empty());
}

#[test]
fn shooting_matches_root_solver_in_every_range() {
    // R2 ν = 0.3, μ = 1/4 first, then the other deficient ranges
    for (g1, g2, a, window) in [
        (-1.0, -0.1875, 0.3, (-3.0, -0.01)),
        (-1.0, 0.3, -0.9, (-3.0, -0.01)),
        (-1.0, -0.25, 0.7, (-3.0, -0.01)),
        (-1.0, 0.0, 1.2, (-3.0, -0.01)),
        (-1.0, -1.25, 0.4, (-20.0, -0.01)),
        (0.8, -1.25, 2.2, (-1e3, -1e-3)),
        (1.0, 0.3, -1.3, (-30.0, -1e-3)),
    ] {
        let p = params(g1, g2, 1.3);
        let ext = ExtensionParam::for_params(&p, Some(a)).unwrap();
        let cfg = ShootingConfig::for_window(&p, window).unwrap();
        let shot = shoot_eigenvalues(&p, &ext, window, &cfg).unwrap();
        let roots = discrete_spectrum(&p, &ext, window, 100).unwrap();
        assert_eq!(shot.len(), roots.len(), "g1={g1} g2={g2}: {shot:?}");
        assert!(!shot.is_empty() && (g1 > 0.0 || shot.len() >= 4));
        for (s, r) in shot.iter().zip(&roots) {
            assert!(rel(*s, r.energy) < 1e-6, "g1={g1} g2={g2} n={}: {s} vs {}", r.n, r.energy);
        }
    }
}

#[test]
fn tolerance_halving_is_consistent() {
    let p = params(-1.0, 0.3, 1.3);
    let ext = ExtensionParam::for_params(&p, Some(-0.9)).unwrap();
    let window = (-3.0, -0.01);
    let cfg = ShootingConfig::for_window(&p, window).unwrap();
    let fine = ShootingConfig { rel_tol: cfg.rel_tol / 2.0, ..cfg };
    let a = shoot_eigenvalues(&p, &ext, window, &cfg).unwrap();
    let b = shoot_eigenvalues(&p, &ext, window, &fine).unwrap();
    for (x, y) in a.iter().zip(&b) {
        assert!(rel(*x, *y) < 1e-6);
    }
}

#[test]
fn integration_matches_closed_forms() {
    for (g1, g2, a) in [(-1.0, 1.3, None), (0.7, 0.3, Some(0.5)), (-0.8, -0.25, Some(-0.7)), (0.6, -1.25, Some(1.9)), (-0.9, 0.0, Some(1.1))] {
        let p = params(g1, g2, 1.2);
        let ext = ExtensionParam::for_params(&p, a).unwrap();
        let w = -0.37;
        // seeded close to the origin in every range, to cover the small-x grid
        let cfg = ShootingConfig {
            x_start: 1e-4 / p.k0,
            x_far: 8.0,
            x_match: 4.0,
            ..ShootingConfig::for_window(&p, (-1.0, -0.1)).unwrap()
        };
        let grid = [1e-3, 0.01, 0.1, 1.0, 3.0, 8.0];
        let s = integrate_solution(&p, &ext, w, &cfg, &grid).unwrap();
        for smp in &s {
            let want = eval_solution(SolutionId::Principal, &p, &ext, smp.x, Complex64::new(w, 0.0)).unwrap();
            // scales that stay finite through nodes of u or u′
            let vscale = want.value.norm().max(want.derivative.norm() * smp.x);
            let dscale = want.derivative.norm().max(want.value.norm() / smp.x);
            assert!((smp.value - want.value).norm() < 1e-6 * vscale, "g2={g2} x={}: {} vs {}", smp.x, smp.value, want.value);
            assert!((smp.derivative - want.derivative).norm() < 1e-6 * dscale, "g2={g2} x={}: {} vs {}", smp.x, smp.derivative, want.derivative);
        }
    }
}

#[test]
fn r3_log_seed() {
    // the ϑ-mixed seed carries the logarithm: u₃,ϑ to 1e−6 near the origin
    let p = params(-0.8, -0.25, 1.4);
    for th in [-1.2, 0.3, 1.4] {
        let ext = ExtensionParam::new(RangeId::R3, Some(th)).unwrap();
        let cfg = ShootingConfig { x_far: 4.0, x_match: 2.0, ..ShootingConfig::for_window(&p, (-1.0, -0.1)).unwrap() };
        let s = integrate_solution(&p, &ext, -0.5, &cfg, &[2e-4, 1e-3, 0.5]).unwrap();
        for smp in &s {
            let want = eval_solution(SolutionId::Principal, &p, &ext, smp.x, Complex64::new(-0.5, 0.0)).unwrap();
            assert!((smp.value - want.value).norm() < 1e-6 * want.value.norm());
        }
    }
}

#[test]
fn quadrature_calibration() {
    let v = quad_inner_product(|x| Ok(x.sqrt()), |_| Ok(1.0), Domain { a: 0.0, b: 1.0 }, 1e-10).unwrap();
    assert!((v - 2.0 / 3.0).abs() < 1e-10);
    let v = quad_inner_product(|x| Ok((-x).exp()), |_| Ok(1.0), Domain { a: 0.0, b: 60.0 }, 1e-10).unwrap();
    assert!((v - 1.0).abs() < 1e-10);
    assert!(quad_inner_product(Ok, Ok, Domain { a: 0.0, b: 1.0 }, 1e-12).is_err());
    let e = quad_inner_product(|_| Err(Error::Domain("x".into())), |_| Ok(1.0), Domain { a: 0.0, b: 1.0 }, 1e-8);
    assert!(e.is_err());
}

#[test]
fn r1_orthonormal() {
    let p = params(-1.0, 0.75, 1.0);
    let ext = ExtensionParam::unique();
    let levels = closed_form_levels(&p, ClosedFormVariant::R1, 3).unwrap();
    let dom = Domain { a: 0.0, b: 400.0 };
    for (i, a) in levels.iter().enumerate() {
        for b in &levels[i..] {
            let v = quad_inner_product(|x| eigenfunction(&p, &ext, a, x), |x| eigenfunction(&p, &ext, b, x), dom, 1e-8)
                .unwrap();
            let want = if a.n == b.n { 1.0 } else { 0.0 };
            assert!((v - want).abs() < 1e-4, "({}, {}): {v}", a.n, b.n);
        }
    }
}

#[test]
fn generic_levels_orthonormal() {
    for (g1, g2, a) in [(-1.0, 0.3, 0.5), (-1.0, -0.25, -0.7), (-1.0, 0.0, 1.1), (-1.0, -1.25, 0.4)] {
        let p = params(g1, g2, 1.2);
        let ext = ExtensionParam::for_params(&p, Some(a)).unwrap();
        let levels = discrete_spectrum(&p, &ext, (-50.0, 0.0), 3).unwrap();
        for (i, la) in levels.iter().enumerate() {
            for lb in &levels[i..] {
                let tail = 60.0 / (-la.energy.max(lb.energy)).sqrt();
                let v = quad_inner_product(
                    |x| eigenfunction(&p, &ext, la, x),
                    |x| eigenfunction(&p, &ext, lb, x),
                    Domain { a: 0.0, b: tail },
                    1e-8,
                )
                .unwrap();
                let want = if la.n == lb.n { 1.0 } else { 0.0 };
                assert!((v - want).abs() < 1e-4, "g2={g2} ({}, {}): {v}", la.n, lb.n);
            }
        }
    }
}

#[test]
fn config_validation() {
    let p = params(-1.0, 0.75, 1.0);
    let cfg = ShootingConfig::for_window(&p, (-1.0, -0.01)).unwrap();
    assert!(cfg.validate().is_ok());
    assert!(ShootingConfig { x_start: 0.0, ..cfg }.validate().is_err());
    assert!(ShootingConfig { x_match: cfg.x_far * 2.0, ..cfg }.validate().is_err());
    assert!(ShootingConfig { rel_tol: 1e-3, ..cfg }.validate().is_err());
    assert!(ShootingConfig { abs_tol: 0.0, ..cfg }.validate().is_err());
    assert!(ShootingConfig { max_steps: 0, ..cfg }.validate().is_err());
    assert!(ShootingConfig::for_window(&p, (-1.0, 0.5)).is_err());
    let ext = ExtensionParam::unique();
    assert!(integrate_solution(&p, &ext, -0.1, &cfg, &[cfg.x_start / 2.0]).is_err());
    assert!(integrate_solution(&p, &ext, -0.1, &cfg, &[2.0, 1.0]).is_err());
    // too few steps to cross the domain
    let tight = ShootingConfig { max_steps: 3, ..cfg };
    assert!(integrate_solution(&p, &ext, -0.1, &tight, &[50.0]).is_err());
}

#[test]
fn strong_origin_singularity() {
    // μ ≈ 0.92: x^{1/2−μ} dominates the seed and |U|² ~ x^{−0.84} at the origin
    let p = params(-0.71, 0.5923, 1.078);
    let ext = ExtensionParam::for_params(&p, Some(0.912)).unwrap();
    let window = (-1.5, -0.005);
    let cfg = ShootingConfig::for_window(&p, window).unwrap();
    let shot = shoot_eigenvalues(&p, &ext, window, &cfg).unwrap();
    let roots = discrete_spectrum(&p, &ext, window, 100).unwrap();
    assert_eq!(shot.len(), roots.len());
    for (s, r) in shot.iter().zip(&roots) {
        assert!(rel(*s, r.energy) < 1e-7, "n={}: {s} vs {}", r.n, r.energy);
    }
    for l in &roots[..2] {
        let tail = 60.0 / (-l.energy).sqrt();
        let v = quad_inner_product(|x| eigenfunction(&p, &ext, l, x), |x| eigenfunction(&p, &ext, l, x), Domain { a: 0.0, b: tail }, 1e-8)
            .unwrap();
        assert!((v - 1.0).abs() < 1e-8, "n={}: {v}", l.n);
    }
}
