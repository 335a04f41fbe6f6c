use dunklkit::datum::{Constant, Gaussian, Indicator};
use dunklkit::dunkl::dunkl_apply_numeric;
use dunklkit::field::HarmonicField;
use dunklkit::intertwine::TranslationEvaluator;
use dunklkit::means::SphericalMeanEvaluator;
use dunklkit::poisson::{integrator_by_name, poisson_kernel, PoissonField, PoissonKernel};
use dunklkit::poly::rat_from_f64;
use dunklkit::quadrature::{dm_lambda_rule, gauss_jacobi};
use dunklkit::rootsys::{RootSystemData, RootSystemKind};
use num_complex::Complex64;
use proptest::prelude::*;
use statrs::function::beta::beta;
use std::sync::Arc;

fn pochhammer(a: f64, m: u32) -> f64 {
    (0..m).fold(1.0, |acc, k| acc * (a + k as f64))
}

/// `∫ θ^n dm_λ(θ)`.
fn dm_moment(lambda: f64, n: u32) -> f64 {
    let m = n / 2;
    if n % 2 == 0 {
        pochhammer(0.5, m) / pochhammer(lambda + 0.5, m)
    } else {
        pochhammer(0.5, m + 1) / pochhammer(lambda + 0.5, m + 1)
    }
}

fn gauss(w: f64, c: f64) -> impl Fn(&[f64]) -> f64 {
    move |v: &[f64]| (-v.iter().map(|a| (a - c).powi(2)).sum::<f64>() / (w * w)).exp()
}

#[test]
fn jacobi_moments_match_beta_functions() {
    for (a, b) in [(0.0, 0.0), (-0.5, 0.5), (1.5, -0.25), (3.0, 2.0)] {
        let rule = gauss_jacobi(12, a, b).unwrap();
        for k in 0..=8u32 {
            let got = rule.integrate(|x| x.powi(k as i32)).unwrap();
            // x = 2u - 1 turns the moment into a sum of Beta functions.
            let mut want = 0.0;
            for j in 0..=k {
                let binom = (0..j).fold(1.0, |acc, i| acc * (k - i) as f64 / (i + 1) as f64);
                let sign = if (k - j) % 2 == 0 { 1.0 } else { -1.0 };
                want += binom * 2f64.powi(j as i32) * sign * beta(b + j as f64 + 1.0, a + 1.0);
            }
            want *= 2f64.powf(a + b + 1.0);
            assert!((got - want).abs() < 1e-9 * (1.0 + want.abs()), "a={a} b={b} k={k}: {got} vs {want}");
        }
    }
}

#[test]
fn legendre_rule_is_exact_to_degree_2n_minus_1() {
    let rule = gauss_jacobi(12, 0.0, 0.0).unwrap();
    for k in 0..24u32 {
        let got = rule.integrate(|x| x.powi(k as i32)).unwrap();
        let exact = if k % 2 == 0 { 2.0 / (k + 1) as f64 } else { 0.0 };
        assert!((got - exact).abs() < 1e-14, "k={k}");
    }
}

#[test]
fn dm_lambda_moments() {
    for l in [0.25, 0.5, 1.0, 2.5] {
        let rule = dm_lambda_rule(l, 16).unwrap();
        for n in 0..20 {
            let got = rule.integrate(|t| t.powi(n as i32)).unwrap();
            assert!((got - dm_moment(l, n)).abs() < 1e-13, "λ={l} n={n}");
        }
    }
}

#[test]
fn intertwining_on_monomials() {
    // V x^n = (∫θ^n dm_λ) x^n, and D V = V ∂ forces c_n (n + λ(1-(-1)^n)) = n c_{n-1}.
    for l in [0.3, 1.0, 1.7] {
        let ev = TranslationEvaluator::new(&[l], 32).unwrap();
        let x = 1.3f64;
        for n in 1..12u32 {
            let v = ev.intertwine_apply(&|p| p[0].powi(n as i32), &[x]).unwrap();
            let c = dm_moment(l, n);
            assert!((v - c * x.powi(n as i32)).abs() < 1e-12 * x.powi(n as i32), "λ={l} n={n}");
            let odd = if n % 2 == 1 { 2.0 * l } else { 0.0 };
            assert!((c * (n as f64 + odd) - n as f64 * dm_moment(l, n - 1)).abs() < 1e-13);
        }
    }
}

#[test]
fn dunkl_kernel_is_an_eigenfunction() {
    for l in [0.5, 1.25] {
        let rs = RootSystemData::build(&RootSystemKind::Z2d { lambda: vec![rat_from_f64(l).unwrap()] }).unwrap();
        let ev = TranslationEvaluator::new(&[l], 48).unwrap();
        for (x, z) in [(0.7, 0.9), (-1.1, 0.4), (0.3, -1.5)] {
            let e = |v: &[f64]| ev.dunkl_kernel(v, &[Complex64::new(z, 0.0)]).unwrap().re;
            let d = dunkl_apply_numeric(&rs, 0, &e, &[x], 1e-4);
            assert!((d - z * e(&[x])).abs() < 1e-6, "λ={l} x={x} z={z}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn translation_is_symmetric(l in 0.0..2.0f64, x in -2.0..2.0f64, t in -2.0..2.0f64, c in -1.0..1.0f64) {
        let ev = TranslationEvaluator::new(&[l], 48).unwrap();
        let f = gauss(0.8, c);
        let a = ev.translate_point(&[x], &f, &[t]).unwrap();
        let b = ev.translate_point(&[t], &f, &[x]).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn translation_is_linear_and_fixes_the_origin(
        l in prop::collection::vec(0.0..2.0f64, 2),
        x in prop::collection::vec(-2.0..2.0f64, 2),
        t in prop::collection::vec(-2.0..2.0f64, 2),
        s in -3.0..3.0f64,
    ) {
        let ev = TranslationEvaluator::new(&l, 24).unwrap();
        let f = gauss(0.9, 0.3);
        let g = |v: &[f64]| v[0] * v[1] + v[1].powi(3);
        let h = |v: &[f64]| f(v) + s * g(v);
        let lhs = ev.translate_point(&x, &h, &t).unwrap();
        let rhs = ev.translate_point(&x, &f, &t).unwrap() + s * ev.translate_point(&x, &g, &t).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-11 * (1.0 + rhs.abs()));
        prop_assert!((ev.translate_point(&[0.0, 0.0], &f, &t).unwrap() - f(&t)).abs() < 1e-12);
        prop_assert!((ev.translate_point(&x, &f, &[0.0, 0.0]).unwrap() - f(&x)).abs() < 1e-12);
    }

    #[test]
    fn radial_translation_is_positive(l in 0.0..2.0f64, x in -3.0..3.0f64, t in -3.0..3.0f64, w in 0.2..2.0f64) {
        let ev = TranslationEvaluator::new(&[l], 48).unwrap();
        let v = ev.translate_radial(&[x], &|r| (-(r / w).powi(2)).exp(), &[t]).unwrap();
        prop_assert!(v >= 0.0);
    }

    #[test]
    fn spherical_mean_positivity_and_scaling(
        l in prop::collection::vec(0.0..1.5f64, 2),
        x in prop::collection::vec(-1.5..1.5f64, 2),
        r in 0.05..1.5f64,
        k in 0.5..2.0f64,
    ) {
        let ev = SphericalMeanEvaluator::new(&l, 8, 24).unwrap();
        let f = gauss(0.7, 0.2);
        let m = ev.mean(&f, &x, r).unwrap();
        prop_assert!(m >= 0.0);
        prop_assert!((ev.mean(&|_| 1.0, &x, r).unwrap() - 1.0).abs() < 1e-13);
        // M_{f(k·)}(x, r) = M_f(kx, kr).
        let fk = |v: &[f64]| f(&[k * v[0], k * v[1]]);
        let kx = [k * x[0], k * x[1]];
        let a = ev.mean(&fk, &x, r).unwrap();
        let b = ev.mean(&f, &kx, k * r).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn poisson_integrators_agree(x in -2.5..2.5f64, y in 0.05..2.0f64, l in 0.1..1.5f64) {
        let ind: Arc<dyn dunklkit::datum::BoundaryDatum> = Arc::new(Indicator { bounds: vec![(-1.0, 0.5)] });
        let a = PoissonField::new(&[l], ind.clone(), integrator_by_name("hypergeometric").unwrap()).unwrap();
        let b = PoissonField::new(&[l], ind, integrator_by_name("adaptive").unwrap()).unwrap();
        let (va, vb) = (a.value(&[x], y).unwrap(), b.value(&[x], y).unwrap());
        prop_assert!((va - vb).abs() < 1e-8, "{} vs {}", va, vb);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&va));
    }

    #[test]
    fn poisson_of_constant_and_even_data(x in -2.0..2.0f64, y in 0.05..2.0f64, l in 0.0..1.5f64) {
        let one = PoissonField::auto(&[l], Arc::new(Constant { dim: 1, value: 1.0 })).unwrap();
        prop_assert!((one.value(&[x], y).unwrap() - 1.0).abs() < 1e-9);
        let g = PoissonField::auto(&[l], Arc::new(Gaussian { center: vec![0.0], width: 0.6, amplitude: 1.0 })).unwrap();
        let (p, m) = (g.value(&[x], y).unwrap(), g.value(&[-x], y).unwrap());
        prop_assert!((p - m).abs() < 1e-10 * (1.0 + p.abs()));
        prop_assert!(poisson_kernel(&[l], &[x], y).unwrap() > 0.0);
    }
}

#[test]
fn poisson_kernel_scaling() {
    // P_y(x) = y^{-N} P_1(x/y) with N = 2|λ| + d.
    for l in [0.0, 0.5, 1.0] {
        let k = PoissonKernel::new(&[l, l]).unwrap();
        let n = 4.0 * l + 2.0;
        for (x, y) in [([0.3, -0.4], 0.5), ([1.2, 0.1], 2.0)] {
            let a = k.eval(&x, y).unwrap();
            let b = y.powf(-n) * k.eval(&[x[0] / y, x[1] / y], 1.0).unwrap();
            assert!((a - b).abs() < 1e-13 * a, "λ={l}");
        }
    }
}
