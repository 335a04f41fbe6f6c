//! Generalized spherical means for `Z₂^d`, the mean-value test for
//! κ-harmonic fields and the Darboux-type identity.

use crate::dunkl::dunkl_laplacian;
use crate::error::{Error, Result};
use crate::field::HarmonicField;
use crate::intertwine::TranslationEvaluator;
use crate::poly::{rat_to_f64, Poly, Rat};
use crate::quadrature::{adaptive_scalar, pairwise_sum, sphere_rule_z2, AdaptiveOptions, SphereRule};
use crate::rootsys::{RootSystemData, RootSystemKind};
use std::cell::RefCell;

/// `M_f(x, r) = d_κ ∫_{S^{d-1}} (τ_x f)(r t') W_κ(t') dt'`.
#[derive(Debug, Clone)]
pub struct SphericalMeanEvaluator {
    pub lambda: Vec<f64>,
    pub sphere: SphereRule,
    pub translator: TranslationEvaluator,
    /// `(∫_{S^{d-1}} W_κ)^{-1}`.
    pub d_kappa: f64,
}

impl SphericalMeanEvaluator {
    pub fn new(lambda: &[f64], sphere_nodes: usize, translation_nodes: usize) -> Result<Self> {
        let sphere = sphere_rule_z2(lambda, sphere_nodes)?;
        let translator = TranslationEvaluator::new(lambda, translation_nodes)?;
        Ok(SphericalMeanEvaluator { lambda: lambda.to_vec(), d_kappa: 1.0 / sphere.total_mass, sphere, translator })
    }

    pub fn dim(&self) -> usize {
        self.lambda.len()
    }

    pub fn mean(&self, f: &dyn Fn(&[f64]) -> f64, x: &[f64], r: f64) -> Result<f64> {
        if !(r >= 0.0) {
            return Err(Error::Domain(format!("radius must be nonnegative, got {r}")));
        }
        if r == 0.0 {
            if x.len() != self.dim() {
                return Err(Error::Dimension { expected: self.dim(), got: x.len() });
            }
            return Ok(f(x));
        }
        let mut vals = Vec::with_capacity(self.sphere.rule.len());
        let mut t = vec![0.0; self.dim()];
        for (p, w) in self.sphere.rule.points.iter().zip(&self.sphere.rule.weights) {
            for j in 0..t.len() {
                t[j] = r * p[j];
            }
            vals.push(w * self.translator.translate_point(x, f, &t)?);
        }
        Ok(pairwise_sum(&vals))
    }
}

pub fn spherical_mean(lambda: &[f64], f: &dyn Fn(&[f64]) -> f64, x: &[f64], r: f64) -> Result<f64> {
    SphericalMeanEvaluator::new(lambda, 12, 32)?.mean(f, x, r)
}

/// Default mean-value tolerance, scaled by `1 + |u(x)|`.
pub const TOL_MV: f64 = 1e-7;

/// `|M_u((x,y), r) - u(x,y)|` in `ℝ^{d+1}` with multiplicities `(λ, 0)`.
pub fn mean_value_residual(
    u: &dyn HarmonicField,
    x: &[f64],
    y: f64,
    r: f64,
    sphere_nodes: usize,
    translation_nodes: usize,
) -> Result<f64> {
    if !(r < y) {
        return Err(Error::Domain(format!("ball of radius {r} around height {y} leaves the half-space")));
    }
    let mut lam = u.lambda().to_vec();
    lam.push(0.0);
    let ev = SphericalMeanEvaluator::new(&lam, sphere_nodes, translation_nodes)?;
    let err = RefCell::new(None);
    let d = x.len();
    let f = |v: &[f64]| match u.value(&v[..d], v[d]) {
        Ok(val) => val,
        Err(e) => {
            err.borrow_mut().get_or_insert(e);
            f64::NAN
        }
    };
    let mut p = x.to_vec();
    p.push(y);
    let m = ev.mean(&f, &p, r);
    if let Some(e) = err.into_inner() {
        return Err(e);
    }
    Ok((m? - u.value(x, y)?).abs())
}

/// `w(s) = ∫_s^r σ^{1-N} dσ · s^{N-1}`, written without cancellation.
fn darboux_weight(s: f64, r: f64, n: f64) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    let l = (s / r).ln();
    let e = n - 2.0;
    if e.abs() < 1e-12 {
        -s * l
    } else {
        -s * (e * l).exp_m1() / e
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DarbouxReport {
    pub mean: f64,
    pub center: f64,
    pub correction: f64,
    pub residual: f64,
}

/// `|M_f(x,r) - f(x) - ∫_0^r s^{1-N} ∫_0^s σ^{N-1} M_{Δf}(x,σ) dσ ds|` with
/// `N = 2|λ| + d`, for a polynomial `f` in `x` only.
pub fn darboux_residual(lambda: &[Rat], f: &Poly, x: &[f64], r: f64) -> Result<DarbouxReport> {
    if f.has_y() || f.nx() != lambda.len() {
        return Err(Error::Validation("darboux test takes a polynomial in x only".into()));
    }
    if !(r > 0.0) {
        return Err(Error::Domain(format!("radius must be positive, got {r}")));
    }
    let rs = RootSystemData::build(&RootSystemKind::Z2d { lambda: lambda.to_vec() })?;
    let lap = dunkl_laplacian(&rs, f)?;
    let lam: Vec<f64> = lambda.iter().map(rat_to_f64).collect();
    let deg = f.degree().unwrap_or(0) as usize;
    let ev = SphericalMeanEvaluator::new(&lam, deg / 2 + 4, deg / 2 + 8)?;
    let fc = f.compile();
    let lc = lap.compile();
    let n = 2.0 * lam.iter().sum::<f64>() + lam.len() as f64;
    let mean = ev.mean(&|v| fc.eval(v), x, r)?;
    let center = fc.eval(x);
    let err = RefCell::new(None);
    let opts = AdaptiveOptions { rel_tol: 1e-12, abs_tol: 1e-15, ..Default::default() };
    let correction = if lap.is_zero() {
        0.0
    } else {
        adaptive_scalar(
            |s| match ev.mean(&|v| lc.eval(v), x, s) {
                Ok(m) => darboux_weight(s, r, n) * m,
                Err(e) => {
                    err.borrow_mut().get_or_insert(e);
                    0.0
                }
            },
            &[0.0, r],
            opts,
        )?
        .value
    };
    if let Some(e) = err.into_inner() {
        return Err(e);
    }
    Ok(DarbouxReport { mean, center, correction, residual: (mean - center - correction).abs() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PolyField;
    use crate::poly::rat;

    #[test]
    fn constants_and_dirac() {
        let ev = SphericalMeanEvaluator::new(&[0.5, 1.0], 8, 16).unwrap();
        assert!((ev.mean(&|_| 1.0, &[0.3, -0.2], 0.7).unwrap() - 1.0).abs() < 1e-13);
        let f = |v: &[f64]| (v[0] - 0.2).sin() + v[1] * v[1];
        assert_eq!(ev.mean(&f, &[0.3, -0.2], 0.0).unwrap(), f(&[0.3, -0.2]));
    }

    #[test]
    fn one_dimensional_two_point_sphere() {
        let lam = 0.7;
        let ev = SphericalMeanEvaluator::new(&[lam], 4, 32).unwrap();
        assert!((ev.d_kappa - 0.5).abs() < 1e-14);
        let f = |v: &[f64]| (-(v[0] - 0.3) * (v[0] - 0.3)).exp();
        let (x, r) = (0.4, 0.9);
        let direct = 0.5
            * (ev.translator.translate_point(&[x], &f, &[r]).unwrap()
                + ev.translator.translate_point(&[x], &f, &[-r]).unwrap());
        assert!((ev.mean(&f, &[x], r).unwrap() - direct).abs() < 1e-14);
        // M_{x²}(x, r) = x² + r².
        let m = ev.mean(&|v| v[0] * v[0], &[x], r).unwrap();
        assert!((m - (x * x + r * r)).abs() < 1e-13);
    }

    #[test]
    fn mean_value_on_harmonic_and_not() {
        let u = PolyField::parse("x*y", vec![rat(1, 2)]).unwrap();
        assert!(mean_value_residual(&u, &[1.0], 2.0, 0.5, 8, 16).unwrap() < 1e-8);
        let v = PolyField::parse("y^2", vec![rat(1, 2)]).unwrap();
        let gap = mean_value_residual(&v, &[1.0], 2.0, 0.5, 8, 16).unwrap();
        // (y + r t_y)² averaged: r² E[t_y²] with E[t_y²] = (1/2)/(|λ̃| + 1) = 1/3.
        assert!((gap - 0.25 / 3.0).abs() < 1e-12, "{gap}");
        assert!(matches!(mean_value_residual(&u, &[1.0], 0.4, 0.5, 8, 16), Err(Error::Domain(_))));
    }

    #[test]
    fn darboux_examples() {
        let lam = [rat(1, 3)];
        let f = Poly::parse("x^2", 1, false).unwrap();
        let rep = darboux_residual(&lam, &f, &[0.8], 0.6).unwrap();
        assert!((rep.correction - 0.36).abs() < 1e-10);
        assert!(rep.residual < 1e-10);
        let rep = darboux_residual(&[rat(0, 1)], &Poly::parse("x^4", 1, false).unwrap(), &[0.8], 0.6).unwrap();
        let (x, r) = (0.8f64, 0.6f64);
        assert!((rep.mean - (x.powi(4) + 6.0 * x * x * r * r + r.powi(4))).abs() < 1e-12);
        assert!(rep.residual < 1e-10);
        for e in ["x1^2", "x2", "x1^4", "x1^2*x2^2", "x1^4 - x1^2*x2^2 + x2"] {
            let rep = darboux_residual(&[rat(1, 2), rat(1, 1)], &Poly::parse(e, 2, false).unwrap(), &[0.3, -0.7], 0.5).unwrap();
            assert!(rep.residual < 1e-8, "{e} {rep:?}");
        }
    }
}
