use dunklkit::area::{area_integral, area_integral_psi, make_cutoff, translated_cutoff, AreaOptions, ConeSpec, SVerdict};
use dunklkit::datum::Indicator;
use dunklkit::field::{HarmonicField, PolyField};
use dunklkit::poisson::PoissonField;
use dunklkit::poly::rat;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::sync::Arc;

/// Gauss–Legendre nodes and weights on [-1, 1] by Newton iteration.
fn legendre(n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|i| {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            (x, 2.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

/// Composite Gauss–Legendre over `[a, b]` with `panels` equal panels.
fn integrate(f: &mut dyn FnMut(f64) -> f64, a: f64, b: f64, panels: usize, rule: &[(f64, f64)]) -> f64 {
    let h = (b - a) / panels as f64;
    let mut s = 0.0;
    for p in 0..panels {
        let c = a + (p as f64 + 0.5) * h;
        for (x, w) in rule {
            s += w * 0.5 * h * f(c + 0.5 * h * x);
        }
    }
    s
}

/// Graded panels towards y = 0.
fn integrate_graded(f: &mut dyn FnMut(f64) -> f64, h: f64, rule: &[(f64, f64)]) -> f64 {
    let mut s = 0.0;
    let mut hi = h;
    for _ in 0..40 {
        s += integrate(f, hi / 2.0, hi, 2, rule);
        hi /= 2.0;
    }
    s
}

#[test]
fn classical_lusin_integral_of_indicator() {
    let ind = Arc::new(Indicator { bounds: vec![(-1.0, 1.0)] });
    let u = PoissonField::auto(&[0.0], ind).unwrap();
    let rule = legendre(16);
    for x in [0.0, 0.5, 1.6] {
        let grad2 = |t: f64, y: f64| {
            let (a, b) = (1.0 - t, 1.0 + t);
            let (da, db) = (a * a + y * y, b * b + y * y);
            let ut = (-y / da + y / db) / PI;
            let uy = (-a / da - b / db) / PI;
            ut * ut + uy * uy
        };
        let oracle = integrate_graded(
            &mut |y| integrate(&mut |t| 2.0 * grad2(t, y), x - y, x + y, 8, &rule),
            1.0,
            &rule,
        );
        let r = area_integral(&u, &ConeSpec::new(vec![x], 1.0, 1.0).unwrap(), AreaOptions::default()).unwrap();
        assert_eq!(r.verdict, SVerdict::Finite);
        assert!((r.squared - oracle).abs() < 1e-5 * oracle, "x = {x}: {} vs {oracle}", r.squared);
    }
}

#[test]
fn classical_linear_height() {
    let u = PolyField::parse("y", vec![rat(0, 1)]).unwrap();
    for (a, h) in [(1.0, 1.0), (0.5, 2.0)] {
        let r = area_integral(&u, &ConeSpec::new(vec![0.2], a, h).unwrap(), AreaOptions::default()).unwrap();
        // ∫_0^h ∫_{|t-x|<ay} 2 dt dy = 2 a h².
        assert!((r.squared - 2.0 * a * h * h).abs() < 1e-6 * r.squared, "{r:?}");
    }
}

#[test]
fn psi_variant_at_origin_matches_direct_quadrature() {
    let u = PolyField::parse("x*y", vec![rat(1, 2)]).unwrap();
    let psi = make_cutoff();
    let rule = legendre(16);
    for a in [1.0, 2.0] {
        let cone = ConeSpec::new(vec![0.0], a, 1.0).unwrap();
        // t = a y s: g(ays, y) ψ(|s|) a² y |s| ds dy for λ = 1/2.
        let direct = integrate(
            &mut |y| {
                2.0 * integrate(
                    &mut |s| u.laplacian_of_square(&[a * y * s], y).unwrap() * psi.profile(s) * a * a * y * s,
                    0.0,
                    1.0,
                    16,
                    &rule,
                )
            },
            0.0,
            1.0,
            4,
            &rule,
        );
        let r = area_integral_psi(&u, &cone, AreaOptions::default()).unwrap();
        assert!((r.squared - direct).abs() < 1e-6 * direct, "a = {a}: {} vs {direct}", r.squared);
    }
}

#[test]
fn translated_cutoff_support() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut tested = 0;
    while tested < 20 {
        let lam = rng.gen_range(0.0..2.0);
        let x = rng.gen_range(-2.0..2.0);
        let a = rng.gen_range(0.25..2.0);
        let y = rng.gen_range(0.01..1.0);
        let t: f64 = rng.gen_range(-4.0..4.0);
        if (t.abs() - f64::abs(x)).abs() <= a * y * 1.001 {
            continue;
        }
        let cone = ConeSpec::new(vec![x], a, 1.0).unwrap();
        assert_eq!(translated_cutoff(&[lam], &cone, &[t], y).unwrap(), 0.0, "λ={lam} x={x} a={a} y={y} t={t}");
        tested += 1;
    }
    let cone = ConeSpec::new(vec![0.4], 1.0, 1.0).unwrap();
    let inside = translated_cutoff(&[0.5], &cone, &[0.4], 0.3).unwrap();
    assert!(inside > 0.0);
}

#[test]
fn indicator_verdicts_at_jump_and_inside() {
    let ind = Arc::new(Indicator { bounds: vec![(-1.0, 1.0)] });
    let u = PoissonField::auto(&[0.5], ind).unwrap();
    let opts = AreaOptions::default();
    let inside = area_integral(&u, &ConeSpec::new(vec![0.5], 1.0, 1.0).unwrap(), opts).unwrap();
    assert_eq!(inside.verdict, SVerdict::Finite);
    let jump = area_integral(&u, &ConeSpec::new(vec![1.0], 1.0, 1.0).unwrap(), opts).unwrap();
    assert_eq!(jump.verdict, SVerdict::Infinite);
}
