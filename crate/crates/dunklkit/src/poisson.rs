//! The κ-Poisson kernel for `Z₂^d`, its translates, Poisson integrals of
//! boundary data and the two-sided kernel bounds.

use crate::datum::{BoundaryDatum, Support, Tabulated};
use crate::error::{Error, Result};
use crate::field::{HarmonicField, Jet};
use crate::intertwine::{ball_measure_product, TranslationEvaluator};
use crate::quadrature::{
    adaptive, dm_adaptive, gauss_jacobi_on, gauss_legendre, pairwise_sum, semi_infinite, AdaptiveOptions, DmPoint,
    Rule1d,
};
use crate::special::{hyp2f1_unit, ln_gamma};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{LN_2, PI};
use std::sync::Arc;

/// `P_y(x) = c_{d,κ} y / (y² + |x|²)^{|κ| + (d+1)/2}` with its normalization.
#[derive(Debug, Clone, PartialEq)]
pub struct PoissonKernel {
    pub lambda: Vec<f64>,
    /// `|κ| + (d+1)/2`.
    pub exponent: f64,
    pub c_dk: f64,
    /// `c_κ = (∫ e^{-|x|²/2} dω_κ)^{-1}`.
    pub c_kappa: f64,
}

impl PoissonKernel {
    pub fn new(lambda: &[f64]) -> Result<PoissonKernel> {
        if lambda.is_empty() {
            return Err(Error::Domain("dimension must be at least 1".into()));
        }
        if let Some(l) = lambda.iter().find(|l| !(**l >= 0.0) || !l.is_finite()) {
            return Err(Error::Domain(format!("multiplicities must be finite and nonnegative, got {l}")));
        }
        let d = lambda.len() as f64;
        let total: f64 = lambda.iter().sum();
        let exponent = total + (d + 1.0) / 2.0;
        let c_dk = ((total + d / 2.0) * LN_2 - 0.5 * PI.ln() + ln_gamma(exponent)).exp();
        let ln_inv: f64 = lambda.iter().map(|l| (l + 0.5) * LN_2 + ln_gamma(l + 0.5)).sum();
        Ok(PoissonKernel { lambda: lambda.to_vec(), exponent, c_dk, c_kappa: (-ln_inv).exp() })
    }

    pub fn dim(&self) -> usize {
        self.lambda.len()
    }

    /// `P_y` as a function of `r² = |x|²`.
    #[inline]
    pub fn profile(&self, r2: f64, y: f64) -> f64 {
        self.c_dk * y * (y * y + r2).powf(-self.exponent)
    }

    /// `(P, ∂P/∂(r²), ∂P/∂y)` at `q = y² + r²`.
    #[inline]
    fn profile_jet(&self, q: f64, y: f64) -> [f64; 3] {
        let m = self.exponent;
        let p = self.c_dk * y * q.powf(-m);
        [p, -m * p / q, p / y - 2.0 * m * y * p / q]
    }

    pub fn eval(&self, x: &[f64], y: f64) -> Result<f64> {
        if x.len() != self.dim() {
            return Err(Error::Dimension { expected: self.dim(), got: x.len() });
        }
        if !(y > 0.0) {
            return Err(Error::Domain(format!("Poisson kernel needs y > 0, got {y}")));
        }
        Ok(self.profile(x.iter().map(|v| v * v).sum(), y))
    }
}

pub fn poisson_kernel(lambda: &[f64], x: &[f64], y: f64) -> Result<f64> {
    PoissonKernel::new(lambda)?.eval(x, y)
}

/// `y² + x² + t² - 2xtθ` and its `x`-derivative without cancellation.
#[inline]
fn q_and_dx(x: f64, t: f64, y: f64, p: DmPoint) -> (f64, f64) {
    let xt = x * t;
    if xt >= 0.0 {
        (y * y + (x - t) * (x - t) + 2.0 * xt * p.one_minus, 2.0 * (x - t) + 2.0 * t * p.one_minus)
    } else {
        (y * y + (x + t) * (x + t) - 2.0 * xt * p.one_plus, 2.0 * (x + t) - 2.0 * t * p.one_plus)
    }
}

/// `[(τ_x P_y)(-t), ∂_x, ∂_y]` for `d = 1`.
pub fn translated_poisson_jet_1d(k: &PoissonKernel, x: f64, t: f64, y: f64, opts: AdaptiveOptions) -> Result<[f64; 3]> {
    let lam = k.lambda[0];
    let xt = x * t;
    let mut near_one = Vec::new();
    let mut near_minus = Vec::new();
    if xt > 0.0 {
        let s = (y * y + (x - t) * (x - t)) / (2.0 * xt);
        if s < 1.0 {
            near_one.push(s);
        }
    } else if xt < 0.0 {
        let s = (y * y + (x + t) * (x + t)) / (-2.0 * xt);
        if s < 1.0 {
            near_minus.push(s);
        }
    }
    let r = dm_adaptive(
        lam,
        -1.0,
        1.0,
        |p| {
            let (q, dq) = q_and_dx(x, t, y, p);
            let j = k.profile_jet(q, y);
            [j[0], j[1] * dq, j[2]]
        },
        &near_one,
        &near_minus,
        opts,
    )?;
    if !r.converged {
        return Err(Error::NumericFailure {
            msg: format!("translated kernel at x={x}, t={t}, y={y} did not converge"),
            last: r.value[0],
            previous: r.value[0] - r.error,
        });
    }
    Ok(r.value)
}

/// `(τ_x P_y)(-t)`.
pub fn translated_poisson(k: &PoissonKernel, x: &[f64], y: f64, t: &[f64], nodes: usize) -> Result<f64> {
    if !(y > 0.0) {
        return Err(Error::Domain(format!("Poisson kernel needs y > 0, got {y}")));
    }
    if k.dim() == 1 {
        if x.len() != 1 || t.len() != 1 {
            return Err(Error::Dimension { expected: 1, got: x.len().max(t.len()) });
        }
        let opts = AdaptiveOptions { rel_tol: 1e-11, ..Default::default() };
        return Ok(translated_poisson_jet_1d(k, x[0], t[0], y, opts)?[0]);
    }
    let ev = TranslationEvaluator::new(&k.lambda, nodes)?;
    let neg: Vec<f64> = t.iter().map(|v| -v).collect();
    ev.translate_radial(x, &|r| k.profile(r * r, y), &neg)
}

/// `[(τ_x P_y)(-t), ∂_x, ∂_y]` for `d = 1` in closed form.
///
/// With `D = y² + (x-t)²` and `S = y² + (x+t)²`,
/// `(τ_x P_y)(-t) = c y D^{-1} S^{-λ} ₂F₁(λ, λ; 2λ+1; 1 - D/S)` when `xt ≥ 0` and
/// `c y D^{-λ-1} ₂F₁(λ+1, λ; 2λ+1; 1 - S/D)` when `xt < 0`.
pub fn translated_poisson_closed_1d(k: &PoissonKernel, x: f64, t: f64, y: f64) -> [f64; 3] {
    let lam = k.lambda[0];
    let m = k.exponent;
    let dxt = x - t;
    let sxt = x + t;
    let y2 = y * y;
    let d = y2 + dxt * dxt;
    let s = y2 + sxt * sxt;
    let b = 2.0 * x * t;
    let cross = 4.0 * t * (y2 + t * t - x * x);
    if b >= 0.0 {
        let om = d / s;
        let w = 2.0 * b / s;
        let g = hyp2f1_unit(lam, lam, 2.0 * lam + 1.0, w, om);
        let gp = lam * lam / (2.0 * lam + 1.0) * hyp2f1_unit(lam + 1.0, lam + 1.0, 2.0 * lam + 2.0, w, om);
        let base = k.c_dk * y / (d * s.powf(lam));
        let kv = base * g;
        let wx = cross / (s * s);
        let wy = -4.0 * b * y / (s * s);
        [
            kv,
            kv * (-2.0 * dxt / d - lam * 2.0 * sxt / s) + base * gp * wx,
            kv * (1.0 / y - 2.0 * y / d - 2.0 * lam * y / s) + base * gp * wy,
        ]
    } else {
        let zeta = s / d;
        let z = -2.0 * b / d;
        let f = hyp2f1_unit(lam + 1.0, lam, 2.0 * lam + 1.0, z, zeta);
        let fp = lam * (lam + 1.0) / (2.0 * lam + 1.0)
            * hyp2f1_unit(lam + 2.0, lam + 1.0, 2.0 * lam + 2.0, z, zeta);
        let base = k.c_dk * y * d.powf(-m);
        let kv = base * f;
        let zx = -cross / (d * d);
        let zy = 4.0 * b * y / (d * d);
        [kv, kv * (-m * 2.0 * dxt / d) + base * fp * zx, kv * (1.0 / y - 2.0 * m * y / d) + base * fp * zy]
    }
}

/// How `(Pf)(x, y)` is integrated.
pub trait PoissonIntegrator: Send + Sync {
    fn name(&self) -> &'static str;
    fn jet(&self, k: &PoissonKernel, f: &dyn BoundaryDatum, x: &[f64], y: f64) -> Result<Jet>;
    fn value(&self, k: &PoissonKernel, f: &dyn BoundaryDatum, x: &[f64], y: f64) -> Result<f64> {
        Ok(self.jet(k, f, x, y)?.value)
    }
}

/// Global adaptive Gauss–Kronrod in `θ` over graded Gauss rules in `t`,
/// `d = 1` only. The derivatives come from differentiating the kernel under
/// the integral.
#[derive(Debug, Clone, Copy)]
pub struct AdaptiveIntegrator {
    pub outer: AdaptiveOptions,
    pub inner: AdaptiveOptions,
}

impl Default for AdaptiveIntegrator {
    fn default() -> Self {
        AdaptiveIntegrator {
            outer: AdaptiveOptions { rel_tol: 1e-9, ..Default::default() },
            inner: AdaptiveOptions { rel_tol: 1e-10, ..Default::default() },
        }
    }
}

/// Nodes of the graded rule for `t ↦ ((t-c)² + Y²)^{-m}` on `[a, b]`.
const GRADE_NODES: usize = 16;
const GRADE_RATIO: f64 = 4.0;
/// Relative reach of the graded grid for data without bounded support.
const WHOLE_REACH: f64 = 1e12;

struct GradedRules {
    legendre: Rule1d,
    /// Weight `x^{2λ}` on `[0, 1]`.
    jacobi: Rule1d,
    lam2: f64,
}

impl GradedRules {
    fn new(lambda: f64) -> Result<Self> {
        Ok(GradedRules {
            legendre: gauss_legendre(GRADE_NODES, 0.0, 1.0)?,
            jacobi: gauss_jacobi_on(GRADE_NODES, 0.0, 2.0 * lambda, 0.0, 1.0)?,
            lam2: 2.0 * lambda,
        })
    }

    /// `∫_a^b f(t) |t|^{2λ} g(t) dt` on one panel not straddling `0`.
    fn panel(&self, a: f64, b: f64, mut g: impl FnMut(f64) -> [f64; 3], acc: &mut [f64; 3]) {
        let w = b - a;
        if a == 0.0 || b == 0.0 {
            // Weight absorbed at the end touching zero.
            let (origin, dir) = if a == 0.0 { (0.0, w) } else { (0.0, -w) };
            let scale = w.abs().powf(self.lam2) * w.abs();
            for (u, wt) in self.jacobi.nodes.iter().zip(&self.jacobi.weights) {
                let v = g(origin + dir * u);
                for c in 0..3 {
                    acc[c] += scale * wt * v[c];
                }
            }
        } else {
            for (u, wt) in self.legendre.nodes.iter().zip(&self.legendre.weights) {
                let t = a + w * u;
                let v = g(t);
                let s = w * wt * t.abs().powf(self.lam2);
                for c in 0..3 {
                    acc[c] += s * v[c];
                }
            }
        }
    }
}

/// Breakpoints `c ± Y·4^k` for every `(c, Y)` in `centres`, clipped to
/// `[a, b]`, plus `0` and `marks`.
fn graded_cuts(a: f64, b: f64, centres: &[(f64, f64)], marks: &[f64]) -> Vec<f64> {
    let mut cuts = vec![a, b, 0.0];
    for &(c, width) in centres {
        let cc = c.clamp(a, b);
        cuts.push(cc);
        let mut r = width.max((c - cc).abs());
        while cc - r > a || cc + r < b {
            cuts.push(cc - r);
            cuts.push(cc + r);
            r *= GRADE_RATIO;
        }
    }
    cuts.extend(marks.iter().copied());
    cuts.retain(|v| *v >= a && *v <= b);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    grade_from_origin(&mut cuts);
    cuts
}

/// Splits every one-signed panel `[a, b]` with `|b/a| > 4` geometrically so
/// that `|t|^{2λ}` stays smooth on each piece.
fn grade_from_origin(cuts: &mut Vec<f64>) {
    let mut extra = Vec::new();
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        if a * b <= 0.0 {
            continue;
        }
        let (lo, hi, sign) = if a > 0.0 { (a, b, 1.0) } else { (-b, -a, -1.0) };
        let mut r = lo * GRADE_RATIO;
        while r < hi {
            extra.push(sign * r);
            r *= GRADE_RATIO;
        }
    }
    if !extra.is_empty() {
        cuts.extend(extra);
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
    }
}

fn datum_interval(f: &dyn BoundaryDatum, x: f64, y: f64) -> (f64, f64) {
    match f.support() {
        Support::Box(b) => (b[0].0, b[0].1),
        Support::Whole { scale } => {
            let r = WHOLE_REACH * (scale + x.abs() + y);
            (-r, r)
        }
    }
}

impl AdaptiveIntegrator {
    /// `(Pf)(x,y) = c_κ ∫ dm_λ(θ) ∫ f(t)|t|^{2λ} P_y(√Q) dt` with
    /// `Q = (t - xθ)² + y² + x²(1-θ²)`; the inner bump has centre `xθ` and
    /// width `√(y² + x²(1-θ²))`.
    fn integrate(&self, k: &PoissonKernel, f: &dyn BoundaryDatum, x: f64, y: f64) -> Result<[f64; 3]> {
        let lam = k.lambda[0];
        let rules = GradedRules::new(lam)?;
        let marks = f.breakpoints(0);
        let (a0, b0) = datum_interval(f, x, y);
        let y2 = y * y;
        let inner = |p: DmPoint| -> [f64; 3] {
            let c = x * p.theta;
            let h2 = x * x * p.one_minus * p.one_plus;
            let width = (y2 + h2).sqrt();
            let cuts = graded_cuts(a0, b0, &[(c, width)], &marks);
            let mut acc = [0.0; 3];
            let kern = |t: f64| -> [f64; 3] {
                let fv = f.eval(&[t]);
                if fv == 0.0 {
                    return [0.0; 3];
                }
                let d = t - c;
                let q = d * d + y2 + h2;
                let dq = -2.0 * p.theta * d + 2.0 * x * p.one_minus * p.one_plus;
                let j = k.profile_jet(q, y);
                [fv * j[0], fv * j[1] * dq, fv * j[2]]
            };
            for w in cuts.windows(2) {
                rules.panel(w[0], w[1], kern, &mut acc);
            }
            acc
        };
        let mut near_one = Vec::new();
        let mut near_minus = Vec::new();
        if x != 0.0 {
            let mut s = y2 / (2.0 * x * x) / 16.0;
            while s < 1.0 {
                near_one.push(s);
                near_minus.push(s);
                s *= GRADE_RATIO;
            }
            for b in &marks {
                let th = b / x;
                if th > 0.0 && th < 1.0 {
                    near_one.push(1.0 - th);
                } else if th < 0.0 && th > -1.0 {
                    near_minus.push(1.0 + th);
                }
            }
        }
        let r = if x == 0.0 {
            let mut v = inner(DmPoint { theta: 1.0, one_minus: 0.0, one_plus: 2.0 });
            v[1] = 0.0;
            crate::quadrature::Adaptive { value: v, error: 0.0, evals: 1, converged: true }
        } else {
            dm_adaptive(lam, -1.0, 1.0, inner, &near_one, &near_minus, self.outer)?
        };
        if !r.converged {
            return Err(Error::NumericFailure {
                msg: format!("Poisson integral at x={x}, y={y} did not converge"),
                last: r.value[0],
                previous: r.value[0] - r.error,
            });
        }
        Ok([r.value[0] * k.c_kappa, r.value[1] * k.c_kappa, r.value[2] * k.c_kappa])
    }
}

/// Graded Gauss rules in `t` around `±x` applied to the closed-form
/// translated kernel, `d = 1` only.
#[derive(Debug, Clone, Copy, Default)]
pub struct HypergeometricIntegrator;

impl PoissonIntegrator for HypergeometricIntegrator {
    fn name(&self) -> &'static str {
        "hypergeometric"
    }

    fn jet(&self, k: &PoissonKernel, f: &dyn BoundaryDatum, x: &[f64], y: f64) -> Result<Jet> {
        if k.dim() != 1 {
            return Err(Error::Domain("the hypergeometric Poisson integrator is one-dimensional; use 'tensor'".into()));
        }
        let x = x[0];
        let rules = GradedRules::new(k.lambda[0])?;
        let (a, b) = datum_interval(f, x, y);
        let cuts = graded_cuts(a, b, &[(x, y), (-x, y)], &f.breakpoints(0));
        let mut acc = [0.0; 3];
        for w in cuts.windows(2) {
            rules.panel(
                w[0],
                w[1],
                |t| {
                    let fv = f.eval(&[t]);
                    if fv == 0.0 {
                        return [0.0; 3];
                    }
                    let j = translated_poisson_closed_1d(k, x, t, y);
                    [fv * j[0], fv * j[1], fv * j[2]]
                },
                &mut acc,
            );
        }
        if acc.iter().any(|v| !v.is_finite()) {
            return Err(Error::Poisoned { node: vec![x, y], value: acc[0] });
        }
        Ok(Jet { value: k.c_kappa * acc[0], grad: vec![k.c_kappa * acc[1]], dy: k.c_kappa * acc[2] })
    }
}

impl PoissonIntegrator for AdaptiveIntegrator {
    fn name(&self) -> &'static str {
        "adaptive"
    }

    fn jet(&self, k: &PoissonKernel, f: &dyn BoundaryDatum, x: &[f64], y: f64) -> Result<Jet> {
        if k.dim() != 1 {
            return Err(Error::Domain("the adaptive Poisson integrator is one-dimensional; use 'tensor'".into()));
        }
        let v = self.integrate(k, f, x[0], y)?;
        Ok(Jet { value: v[0], grad: vec![v[1]], dy: v[2] })
    }
}

/// Fixed tensor rules in `t` (split at `0` and `±x_j`, with the weight
/// `|t_j|^{2λ_j}` absorbed next to `0`) and in `θ`.
#[derive(Debug, Clone, Copy)]
pub struct TensorIntegrator {
    pub t_nodes: usize,
    pub theta_nodes: usize,
}

impl Default for TensorIntegrator {
    fn default() -> Self {
        TensorIntegrator { t_nodes: 24, theta_nodes: 16 }
    }
}

impl TensorIntegrator {
    fn coordinate_rule(&self, lam: f64, lo: f64, hi: f64, marks: &[f64]) -> Result<Rule1d> {
        let mut cuts: Vec<f64> = marks.iter().copied().filter(|m| *m > lo && *m < hi).collect();
        cuts.push(lo);
        cuts.push(hi);
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        grade_from_origin(&mut cuts);
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for w in cuts.windows(2) {
            let (a, b) = (w[0], w[1]);
            let r = if a == 0.0 {
                gauss_jacobi_on(self.t_nodes, 0.0, 2.0 * lam, a, b)?
            } else if b == 0.0 {
                gauss_jacobi_on(self.t_nodes, 2.0 * lam, 0.0, a, b)?
            } else {
                let mut r = gauss_legendre(self.t_nodes, a, b)?;
                for (wt, x) in r.weights.iter_mut().zip(&r.nodes) {
                    *wt *= x.abs().powf(2.0 * lam);
                }
                r
            };
            nodes.extend(r.nodes);
            weights.extend(r.weights);
        }
        Ok(Rule1d { nodes, weights, exactness_degree: 0, measure: crate::quadrature::MeasureTag::Lebesgue { a: lo, b: hi } })
    }
}

impl PoissonIntegrator for TensorIntegrator {
    fn name(&self) -> &'static str {
        "tensor"
    }

    fn value(&self, k: &PoissonKernel, f: &dyn BoundaryDatum, x: &[f64], y: f64) -> Result<f64> {
        let d = k.dim();
        let bx = f
            .effective_box()
            .ok_or_else(|| Error::Domain("tensor Poisson integration needs a datum with a finite effective box".into()))?;
        let rules = (0..d)
            .map(|j| {
                let mut marks = vec![0.0, x[j], -x[j]];
                marks.extend(f.breakpoints(j));
                self.coordinate_rule(k.lambda[j], bx[j].0, bx[j].1, &marks)
            })
            .collect::<Result<Vec<_>>>()?;
        let grid = crate::quadrature::tensor(&rules);
        let ev = TranslationEvaluator::new(&k.lambda, self.theta_nodes)?;
        let mut terms = Vec::with_capacity(grid.len());
        let mut neg = vec![0.0; d];
        for (t, w) in grid.points.iter().zip(&grid.weights) {
            let fv = f.eval(t);
            if fv == 0.0 {
                continue;
            }
            for j in 0..d {
                neg[j] = -t[j];
            }
            terms.push(w * fv * ev.translate_radial(x, &|r| k.profile(r * r, y), &neg)?);
        }
        Ok(k.c_kappa * pairwise_sum(&terms))
    }

    fn jet(&self, k: &PoissonKernel, f: &dyn BoundaryDatum, x: &[f64], y: f64) -> Result<Jet> {
        let value = self.value(k, f, x, y)?;
        let h = crate::field::FD_STEP_REL * y;
        let mut p = x.to_vec();
        let mut grad = Vec::new();
        for j in 0..x.len() {
            p[j] = x[j] + h;
            let a = self.value(k, f, &p, y)?;
            p[j] = x[j] - h;
            let b = self.value(k, f, &p, y)?;
            p[j] = x[j];
            grad.push((a - b) / (2.0 * h));
        }
        let dy = (self.value(k, f, x, y + h)? - self.value(k, f, x, y - h)?) / (2.0 * h);
        Ok(Jet { value, grad, dy })
    }
}

pub fn integrator_names() -> Vec<&'static str> {
    vec!["adaptive", "hypergeometric", "tensor"]
}

pub fn integrator_by_name(name: &str) -> Result<Arc<dyn PoissonIntegrator>> {
    match name {
        "adaptive" => Ok(Arc::new(AdaptiveIntegrator::default())),
        "hypergeometric" => Ok(Arc::new(HypergeometricIntegrator)),
        "tensor" => Ok(Arc::new(TensorIntegrator::default())),
        other => Err(Error::Validation(format!(
            "unknown Poisson integrator '{other}'; known: {}",
            integrator_names().join(", ")
        ))),
    }
}

/// `(Pf)(x, y) = c_κ ∫ f(t) (τ_x P_y)(-t) dω_κ(t)`.
pub fn poisson_integral(lambda: &[f64], f: &dyn BoundaryDatum, x: &[f64], y: f64) -> Result<f64> {
    let k = PoissonKernel::new(lambda)?;
    if f.dim() != k.dim() || x.len() != k.dim() {
        return Err(Error::Dimension { expected: k.dim(), got: f.dim().min(x.len()) });
    }
    if !(y > 0.0) {
        return Err(Error::Domain(format!("Poisson integral needs y > 0, got {y}")));
    }
    let name = if k.dim() == 1 { "hypergeometric" } else { "tensor" };
    integrator_by_name(name)?.value(&k, f, x, y)
}

/// The Poisson extension of a boundary datum.
#[derive(Clone)]
pub struct PoissonField {
    pub kernel: PoissonKernel,
    pub datum: Arc<dyn BoundaryDatum>,
    pub integrator: Arc<dyn PoissonIntegrator>,
}

impl PoissonField {
    pub fn new(lambda: &[f64], datum: Arc<dyn BoundaryDatum>, integrator: Arc<dyn PoissonIntegrator>) -> Result<Self> {
        let kernel = PoissonKernel::new(lambda)?;
        if datum.dim() != kernel.dim() {
            return Err(Error::Dimension { expected: kernel.dim(), got: datum.dim() });
        }
        Ok(PoissonField { kernel, datum, integrator })
    }

    /// The default integrator for the dimension.
    pub fn auto(lambda: &[f64], datum: Arc<dyn BoundaryDatum>) -> Result<Self> {
        let name = if lambda.len() == 1 { "hypergeometric" } else { "tensor" };
        Self::new(lambda, datum, integrator_by_name(name)?)
    }
}

impl HarmonicField for PoissonField {
    fn label(&self) -> String {
        format!("poisson[{}]({})", self.integrator.name(), self.datum.label())
    }
    fn lambda(&self) -> &[f64] {
        &self.kernel.lambda
    }
    fn value(&self, x: &[f64], y: f64) -> Result<f64> {
        check_xy(self.kernel.dim(), x, y)?;
        self.integrator.value(&self.kernel, self.datum.as_ref(), x, y)
    }
    fn jet(&self, x: &[f64], y: f64) -> Result<Jet> {
        check_xy(self.kernel.dim(), x, y)?;
        self.integrator.jet(&self.kernel, self.datum.as_ref(), x, y)
    }
    fn is_g_invariant(&self) -> bool {
        self.datum.is_g_invariant()
    }
}

fn check_xy(d: usize, x: &[f64], y: f64) -> Result<()> {
    if x.len() != d {
        return Err(Error::Dimension { expected: d, got: x.len() });
    }
    if !(y > 0.0) {
        return Err(Error::Domain(format!("y must be positive, got {y}")));
    }
    Ok(())
}

/// `u(x, y) = P_y(x)`, harmonic with a singularity at the boundary origin.
#[derive(Debug, Clone)]
pub struct KernelField {
    pub kernel: PoissonKernel,
}

impl KernelField {
    pub fn new(lambda: &[f64]) -> Result<Self> {
        Ok(KernelField { kernel: PoissonKernel::new(lambda)? })
    }
}

impl HarmonicField for KernelField {
    fn label(&self) -> String {
        "kernel(P_y(x))".into()
    }
    fn lambda(&self) -> &[f64] {
        &self.kernel.lambda
    }
    fn value(&self, x: &[f64], y: f64) -> Result<f64> {
        self.kernel.eval(x, y)
    }
    fn jet(&self, x: &[f64], y: f64) -> Result<Jet> {
        check_xy(self.kernel.dim(), x, y)?;
        let r2: f64 = x.iter().map(|v| v * v).sum();
        let j = self.kernel.profile_jet(y * y + r2, y);
        Ok(Jet { value: j[0], grad: x.iter().map(|v| 2.0 * v * j[1]).collect(), dy: j[2] })
    }
    fn is_g_invariant(&self) -> bool {
        true
    }
}

/// One grid entry of [`kernel_bound_ratio`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelBoundEntry {
    pub x: f64,
    pub t: f64,
    pub y: f64,
    pub kernel: f64,
    /// `(τ_xP_y)(-t) |B(x, y+|x-t|)| (y+|x-t|)/y`.
    pub lower_ratio: f64,
    /// `(τ_xP_y)(-t) |B(x, y+d)| (y²+|x-t|²) / (y (y+d))`.
    pub upper_ratio: f64,
    /// `|B(x, y+|x-t|)| / |B(t, y+|x-t|)|`.
    pub ball_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelBoundReport {
    pub lambda: f64,
    pub entries: Vec<KernelBoundEntry>,
    pub min_lower: f64,
    pub max_lower: f64,
    pub min_upper: f64,
    pub max_upper: f64,
    pub min_ball_ratio: f64,
    pub max_ball_ratio: f64,
}

/// `d(x, t) = min(|x - t|, |x + t|)` on the line.
pub fn orbit_distance_1d(x: f64, t: f64) -> f64 {
    (x - t).abs().min((x + t).abs())
}

/// The two-sided kernel bounds on a `Z₂¹` product grid.
pub fn kernel_bound_ratio(lambda: f64, xs: &[f64], ts: &[f64], ys: &[f64]) -> Result<KernelBoundReport> {
    if xs.is_empty() || ts.is_empty() || ys.is_empty() {
        return Err(Error::Validation("empty grid".into()));
    }
    let k = PoissonKernel::new(&[lambda])?;
    let mut cells = Vec::new();
    for &x in xs {
        for &t in ts {
            if x == t {
                return Err(Error::Validation(format!("grid contains x = t = {x}")));
            }
            for &y in ys {
                if !(y > 0.0) {
                    return Err(Error::Domain(format!("grid y must be positive, got {y}")));
                }
                cells.push((x, t, y));
            }
        }
    }
    let opts = AdaptiveOptions { rel_tol: 1e-10, ..Default::default() };
    let entries = cells
        .par_iter()
        .map(|&(x, t, y)| {
            let kv = translated_poisson_jet_1d(&k, x, t, y, opts)?[0];
            let dist = (x - t).abs();
            let dg = orbit_distance_1d(x, t);
            let bx = ball_measure_product(&[lambda], &[x], y + dist, opts)?;
            let bt = ball_measure_product(&[lambda], &[t], y + dist, opts)?;
            let bd = ball_measure_product(&[lambda], &[x], y + dg, opts)?;
            Ok(KernelBoundEntry {
                x,
                t,
                y,
                kernel: kv,
                lower_ratio: kv * bx * (y + dist) / y,
                upper_ratio: kv * bd * (y * y + dist * dist) / (y * (y + dg)),
                ball_ratio: bx / bt,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let fold = |f: fn(&KernelBoundEntry) -> f64| {
        entries.iter().map(f).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
    };
    let (min_lower, max_lower) = fold(|e| e.lower_ratio);
    let (min_upper, max_upper) = fold(|e| e.upper_ratio);
    let (min_ball_ratio, max_ball_ratio) = fold(|e| e.ball_ratio);
    Ok(KernelBoundReport { lambda, entries, min_lower, max_lower, min_upper, max_upper, min_ball_ratio, max_ball_ratio })
}

/// `c_κ ∫ P dω_κ` in polar form.
pub fn kernel_mass(lambda: &[f64]) -> Result<f64> {
    let k = PoissonKernel::new(lambda)?;
    let sphere = crate::quadrature::sphere_rule_z2(lambda, 1)?.total_mass;
    let n = 2.0 * lambda.iter().sum::<f64>() + lambda.len() as f64;
    let opts = AdaptiveOptions { rel_tol: 1e-12, ..Default::default() };
    let a = adaptive(|r| [k.profile(r * r, 1.0) * r.powf(n - 1.0)], &[0.0, 1.0], opts)?;
    let b = semi_infinite(|r| [k.profile(r * r, 1.0) * r.powf(n - 1.0)], 1.0, opts)?;
    Ok(k.c_kappa * sphere * (a.value[0] + b.value[0]))
}

/// `c_κ ∫ (τ_x P_y)(-t) dω_κ(t)`, `d = 1`.
pub fn translated_kernel_mass_1d(lambda: f64, x: f64, y: f64) -> Result<f64> {
    let one = crate::datum::Constant { dim: 1, value: 1.0 };
    poisson_integral(&[lambda], &one, &[x], y)
}

/// `(Pf)(x, y₁+y₂)` against `P[(Pf)(·, y₂)](x, y₁)`, `d = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SemigroupDiagnostic {
    pub direct: f64,
    pub composed: f64,
    pub difference: f64,
    pub samples: usize,
    pub radius: f64,
}

pub fn semigroup_diagnostic(
    lambda: f64,
    f: &dyn BoundaryDatum,
    x: f64,
    y1: f64,
    y2: f64,
    samples: usize,
    radius: f64,
) -> Result<SemigroupDiagnostic> {
    let k = PoissonKernel::new(&[lambda])?;
    let integ = AdaptiveIntegrator::default();
    let direct = integ.value(&k, f, &[x], y1 + y2)?;
    let nodes: Vec<f64> = (0..samples).map(|i| -radius + 2.0 * radius * i as f64 / (samples - 1) as f64).collect();
    let values = nodes.par_iter().map(|t| integ.value(&k, f, &[*t], y2)).collect::<Result<Vec<_>>>()?;
    let slice = Tabulated::new(nodes, values)?;
    let composed = integ.value(&k, &slice, &[x], y1)?;
    Ok(SemigroupDiagnostic { direct, composed, difference: (direct - composed).abs(), samples, radius })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datum::{Constant, Indicator};

    #[test]
    fn constants_and_mass() {
        let k = PoissonKernel::new(&[0.0]).unwrap();
        assert!((k.c_dk * k.c_kappa - 1.0 / PI).abs() < 1e-15);
        for lam in [&[0.0][..], &[0.5], &[1.0], &[0.5, 1.0], &[0.0, 0.0]] {
            assert!((kernel_mass(lam).unwrap() - 1.0).abs() < 1e-10, "{lam:?}");
        }
    }

    #[test]
    fn translated_reduces() {
        let k = PoissonKernel::new(&[0.0]).unwrap();
        let v = translated_poisson(&k, &[0.4], 0.3, &[-0.2], 8).unwrap();
        assert!((v - k.profile(0.36, 0.3)).abs() < 1e-13);
        let k = PoissonKernel::new(&[0.7]).unwrap();
        let v = translated_poisson(&k, &[0.0], 0.3, &[-0.2], 8).unwrap();
        assert!((v - k.profile(0.04, 0.3)).abs() < 1e-13);
    }

    #[test]
    fn constant_datum_gives_one() {
        for &(x, y) in &[(0.0, 1.0), (0.5, 0.1), (-1.3, 0.01)] {
            let v = poisson_integral(&[0.5], &Constant { dim: 1, value: 1.0 }, &[x], y).unwrap();
            assert!((v - 1.0).abs() < 1e-7, "{x} {y} {v}");
        }
    }

    #[test]
    fn closed_form_kernel_matches_quadrature() {
        let opts = AdaptiveOptions { rel_tol: 1e-12, ..Default::default() };
        for &lam in &[0.0, 0.25, 0.5, 1.0, 2.5] {
            let k = PoissonKernel::new(&[lam]).unwrap();
            for &(x, t, y) in &[(0.5, 0.5, 0.01), (0.5, 0.3, 0.2), (0.7, -0.6, 0.05), (-1.2, 0.4, 1.0), (0.0, 0.3, 0.1), (0.9, 1e-3, 1e-3)] {
                let q = translated_poisson_jet_1d(&k, x, t, y, opts).unwrap();
                let c = translated_poisson_closed_1d(&k, x, t, y);
                for i in 0..3 {
                    let scale = q[0].abs().max(q[i].abs()) * (1.0 + 1.0 / y);
                    assert!((q[i] - c[i]).abs() < 1e-9 * scale, "λ={lam} ({x},{t},{y}) comp {i}: {} vs {}", q[i], c[i]);
                }
            }
        }
    }

    #[test]
    fn integrators_agree() {
        let f = Indicator { bounds: vec![(-1.0, 1.0)] };
        let k = PoissonKernel::new(&[0.5]).unwrap();
        for &(x, y) in &[(0.5, 1.0), (0.5, 1e-2), (1.0, 1e-4), (0.0, 1e-3), (1.7, 0.3)] {
            let a = AdaptiveIntegrator::default().jet(&k, &f, &[x], y).unwrap();
            let h = HypergeometricIntegrator.jet(&k, &f, &[x], y).unwrap();
            assert!((a.value - h.value).abs() < 1e-9, "{x} {y}: {} {}", a.value, h.value);
            assert!((a.grad[0] - h.grad[0]).abs() < 1e-7 * (1.0 + a.grad[0].abs()), "{x} {y}");
            assert!((a.dy - h.dy).abs() < 1e-7 * (1.0 + a.dy.abs()), "{x} {y}");
        }
        let exact = 1.0 - 1e-3 / (1.0f64 + 1e-6).sqrt();
        assert!((HypergeometricIntegrator.value(&k, &f, &[0.0], 1e-3).unwrap() - exact).abs() < 1e-13);
    }

    #[test]
    fn indicator_jets_match_differences() {
        let f = PoissonField::auto(&[0.5], Arc::new(Indicator { bounds: vec![(-1.0, 1.0)] })).unwrap();
        let (x, y) = (0.6, 0.2);
        let j = f.jet(&[x], y).unwrap();
        let h = 1e-4;
        let dx = (f.value(&[x + h], y).unwrap() - f.value(&[x - h], y).unwrap()) / (2.0 * h);
        let dy = (f.value(&[x], y + h).unwrap() - f.value(&[x], y - h).unwrap()) / (2.0 * h);
        assert!((j.grad[0] - dx).abs() < 1e-6 && (j.dy - dy).abs() < 1e-6);
        assert!(j.value > 0.0 && j.value < 1.0);
        assert!((f.value(&[-x], y).unwrap() - j.value).abs() < 1e-9);
    }
}
