//! The `Z₂^d` intertwining operator, the Dunkl kernel and the generalized
//! translation, pointwise and radial.
//!
//! For `G = Z₂^d` the representing measure of `V_λ` at `x` is the image of
//! `⊗ dm_{λ_j}` under `ξ_j = x_j θ_j`, and the one-dimensional translation is
//!
//! ```text
//! (τ_x f)(t) = ∫ [ f_e(B) + f_o(B) (x+t)/B ] dm_λ(θ),  B = √(x² + t² + 2xtθ).
//! ```

use crate::error::{Error, Result};
use crate::quadrature::{dm_adaptive, dm_lambda_rule, pairwise_sum, tensor, AdaptiveOptions, Estimate, Rule1d, RuleNd};
use crate::rootsys::{ball_measure_z2_1d, RootSystemData, RootSystemKind};
use crate::special::dm_upper_tail;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum TranslationMode {
    #[default]
    Pointwise,
    Radial,
}

pub const DEFAULT_NODES: usize = 64;

#[derive(Debug, Clone)]
pub struct TranslationEvaluator {
    pub lambda: Vec<f64>,
    pub nodes: usize,
    pub rules: Vec<Rule1d>,
    pub mode: TranslationMode,
    grid: RuleNd,
}

/// `dμ_x` as weighted points `ξ = x∘θ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductMeasureRep {
    pub base: Vec<f64>,
    pub points: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
}

impl ProductMeasureRep {
    pub fn total_mass(&self) -> f64 {
        pairwise_sum(&self.weights)
    }

    /// `[-|x_1|, |x_1|] × ...`.
    pub fn support_box(&self) -> Vec<(f64, f64)> {
        self.base.iter().map(|x| (-x.abs(), x.abs())).collect()
    }
}

/// `x² + t² + 2xtθ` written as a sum of nonnegative terms.
#[inline]
pub fn b_squared(x: f64, t: f64, theta: f64) -> f64 {
    let xt = x * t;
    if xt >= 0.0 {
        (x - t) * (x - t) + 2.0 * xt * (1.0 + theta)
    } else {
        (x + t) * (x + t) - 2.0 * xt * (1.0 - theta)
    }
}

impl TranslationEvaluator {
    pub fn new(lambda: &[f64], nodes: usize) -> Result<TranslationEvaluator> {
        if lambda.is_empty() {
            return Err(Error::Domain("dimension must be at least 1".into()));
        }
        let rules = lambda.iter().map(|&l| dm_lambda_rule(l, nodes)).collect::<Result<Vec<_>>>()?;
        let grid = tensor(&rules);
        Ok(TranslationEvaluator { lambda: lambda.to_vec(), nodes, rules, mode: TranslationMode::Pointwise, grid })
    }

    pub fn from_root_system(rs: &RootSystemData, nodes: usize) -> Result<TranslationEvaluator> {
        let lambda = rs
            .z2_lambda()
            .ok_or_else(|| Error::Domain(format!("translation is available for Z2^d only, not {}", rs.label)))?;
        Self::new(&lambda, nodes)
    }

    pub fn with_mode(mut self, mode: TranslationMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn dim(&self) -> usize {
        self.lambda.len()
    }

    fn check(&self, v: &[f64]) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::Dimension { expected: self.dim(), got: v.len() });
        }
        Ok(())
    }

    pub fn product_measure(&self, x: &[f64]) -> Result<ProductMeasureRep> {
        self.check(x)?;
        Ok(ProductMeasureRep {
            base: x.to_vec(),
            points: self.grid.points.iter().map(|th| th.iter().zip(x).map(|(a, b)| a * b).collect()).collect(),
            weights: self.grid.weights.clone(),
        })
    }

    /// `V_λ f(x) = ∫ f(x_1θ_1, ..., x_dθ_d) dm_λ(θ)`.
    pub fn intertwine_apply(&self, f: &dyn Fn(&[f64]) -> f64, x: &[f64]) -> Result<f64> {
        self.check(x)?;
        let mut xi = vec![0.0; self.dim()];
        self.grid.integrate(|th| {
            for j in 0..xi.len() {
                xi[j] = x[j] * th[j];
            }
            f(&xi)
        })
    }

    /// `E_λ(x, z) = V_λ(e^{⟨·,z⟩})(x)`.
    pub fn dunkl_kernel(&self, x: &[f64], z: &[Complex64]) -> Result<Complex64> {
        self.check(x)?;
        if z.len() != self.dim() {
            return Err(Error::Dimension { expected: self.dim(), got: z.len() });
        }
        let growth: f64 = x.iter().zip(z).map(|(a, b)| (a * b.re).abs()).sum();
        if growth > 700.0 {
            return Err(Error::Overflow(format!(
                "|Re<x,z>| bound {growth:.1} exceeds the double range; rescale x or z"
            )));
        }
        let mut re = Vec::with_capacity(self.grid.len());
        let mut im = Vec::with_capacity(self.grid.len());
        for (th, w) in self.grid.points.iter().zip(&self.grid.weights) {
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..th.len() {
                s += z[j] * (x[j] * th[j]);
            }
            let e = s.exp() * *w;
            re.push(e.re);
            im.push(e.im);
        }
        Ok(Complex64::new(pairwise_sum(&re), pairwise_sum(&im)))
    }

    /// Iterated rank-one translation `(τ_{x_1} ... τ_{x_d} f)(t)`.
    ///
    /// The even/odd parts are formed by two-point sampling, which turns each
    /// coordinate into `f(B)(1+c)/2 + f(-B)(1-c)/2` with `c = (x+t)/B`.
    pub fn translate_point(&self, x: &[f64], f: &dyn Fn(&[f64]) -> f64, t: &[f64]) -> Result<f64> {
        self.check(x)?;
        self.check(t)?;
        let d = self.dim();
        let mut b = vec![0.0; d];
        let mut cp = vec![0.0; d];
        let mut arg = vec![0.0; d];
        self.grid.integrate(|th| {
            for j in 0..d {
                if self.lambda[j] == 0.0 {
                    b[j] = x[j] + t[j];
                    cp[j] = 1.0;
                    continue;
                }
                let bj = b_squared(x[j], t[j], th[j]).sqrt();
                b[j] = bj;
                cp[j] = if bj > 1e-300 { 0.5 * (1.0 + (x[j] + t[j]) / bj) } else { 0.5 };
            }
            let mut acc = 0.0;
            for s in 0..(1usize << d) {
                let mut w = 1.0;
                for j in 0..d {
                    if s >> j & 1 == 1 {
                        w *= 1.0 - cp[j];
                        arg[j] = -b[j];
                    } else {
                        w *= cp[j];
                        arg[j] = b[j];
                    }
                    if w == 0.0 {
                        break;
                    }
                }
                if w != 0.0 {
                    acc += w * f(&arg);
                }
            }
            acc
        })
    }

    /// `(τ_x f)(t) = ∫ f_0(√(|x|² + |t|² + 2⟨t, x∘θ⟩)) dm_λ(θ)` for `f = f_0(|·|)`.
    pub fn translate_radial(&self, x: &[f64], f0: &dyn Fn(f64) -> f64, t: &[f64]) -> Result<f64> {
        self.check(x)?;
        self.check(t)?;
        self.grid.integrate(|th| {
            let r2: f64 = (0..th.len()).map(|j| b_squared(x[j], t[j], th[j])).sum();
            f0(r2.sqrt())
        })
    }

    /// Translation of a radial function using the configured mode.
    pub fn translate_profile(&self, x: &[f64], f0: &dyn Fn(f64) -> f64, t: &[f64]) -> Result<f64> {
        match self.mode {
            TranslationMode::Radial => self.translate_radial(x, f0, t),
            TranslationMode::Pointwise => {
                let f = |v: &[f64]| f0(v.iter().map(|a| a * a).sum::<f64>().sqrt());
                self.translate_point(x, &f, t)
            }
        }
    }

    /// Evaluate with `n, 2n, 4n, ...` nodes until two levels agree within
    /// `tol` or `max_nodes` is reached.
    pub fn refined(
        &self,
        tol: f64,
        max_nodes: usize,
        eval: impl Fn(&TranslationEvaluator) -> Result<f64>,
    ) -> Result<Estimate> {
        let mut prev = eval(self)?;
        let mut n = self.nodes;
        loop {
            n *= 2;
            let ev = TranslationEvaluator::new(&self.lambda, n)?.with_mode(self.mode);
            let v = eval(&ev)?;
            let err = (v - prev).abs();
            if err <= tol * (1.0 + v.abs()) {
                return Ok(Estimate { value: v, error: err });
            }
            if n >= max_nodes {
                return Err(Error::NumericFailure {
                    msg: format!("translation did not settle with {n} nodes per coordinate"),
                    last: v,
                    previous: prev,
                });
            }
            prev = v;
        }
    }
}

/// `|B(x, r)|` for the weight `∏|t_j|^{2λ_j}`.
pub fn ball_measure_product(lambda: &[f64], x: &[f64], r: f64, opts: AdaptiveOptions) -> Result<f64> {
    if lambda.len() == 1 {
        if !(r > 0.0) {
            return Err(Error::Domain(format!("radius must be positive, got {r}")));
        }
        return Ok(ball_measure_z2_1d(lambda[0], x[0], r));
    }
    let lam: Vec<_> = lambda
        .iter()
        .map(|l| crate::poly::rat_from_f64(*l).ok_or_else(|| Error::Domain("non-finite multiplicity".into())))
        .collect::<Result<_>>()?;
    let rs = RootSystemData::build(&RootSystemKind::Z2d { lambda: lam })?;
    let total: f64 = lambda.iter().sum();
    Ok(rs.ball_measure(x, r, opts)? / 2f64.powf(total))
}

/// One `(x, δ)` entry of [`density_bound_probe`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityEntry {
    pub x: Vec<f64>,
    pub delta: f64,
    /// `μ_x{ξ : ⟨x,ξ⟩ > |x|² - δ²}`.
    pub measure: f64,
    /// `δ^{2|λ|+d} / |B(x,δ)|_λ`.
    pub comparator: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub entries: Vec<DensityEntry>,
    pub min_ratio: f64,
}

/// `m{θ : Σ_{i≥j} x_i²(1-θ_i) < c}` under `⊗ dm_{λ_i}`.
fn cap_mass(lambda: &[f64], x: &[f64], c: f64, opts: AdaptiveOptions) -> Result<f64> {
    if c <= 0.0 {
        return Ok(0.0);
    }
    let x2 = x[0] * x[0];
    if lambda.len() == 1 {
        if x2 == 0.0 {
            return Ok(1.0);
        }
        return Ok(dm_upper_tail(lambda[0], 1.0 - c / x2));
    }
    if x2 == 0.0 {
        return cap_mass(&lambda[1..], &x[1..], c, opts);
    }
    let mut err = None;
    let lo = 1.0 - c / x2;
    let r = dm_adaptive(
        lambda[0],
        lo,
        1.0,
        |p| match cap_mass(&lambda[1..], &x[1..], c - x2 * p.one_minus, opts) {
            Ok(v) => [v],
            Err(e) => {
                err.get_or_insert(e);
                [0.0]
            }
        },
        &[],
        &[],
        opts,
    )?;
    if let Some(e) = err {
        return Err(e);
    }
    Ok(r.value[0])
}

/// Ratio of `μ_x{⟨x,ξ⟩ > |x|² - δ²}` to `δ^{2|λ|+d}/|B(x,δ)|_λ` over a grid.
pub fn density_bound_probe(lambda: &[f64], points: &[Vec<f64>], deltas: &[f64]) -> Result<DensityReport> {
    let opts = AdaptiveOptions { rel_tol: 1e-9, ..Default::default() };
    let d = lambda.len();
    let total: f64 = lambda.iter().sum();
    let mut entries = Vec::new();
    for x in points {
        if x.len() != d {
            return Err(Error::Dimension { expected: d, got: x.len() });
        }
        for &delta in deltas {
            if !(delta > 0.0) {
                return Err(Error::Domain(format!("delta must be positive, got {delta}")));
            }
            let measure = cap_mass(lambda, x, delta * delta, opts)?;
            let ball = ball_measure_product(lambda, x, delta, opts)?;
            let comparator = delta.powf(2.0 * total + d as f64) / ball;
            entries.push(DensityEntry { x: x.clone(), delta, measure, comparator, ratio: measure / comparator });
        }
    }
    let min_ratio = entries.iter().map(|e| e.ratio).fold(f64::INFINITY, f64::min);
    Ok(DensityReport { entries, min_ratio })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_moment() {
        for &l in &[0.25, 0.5, 2.0] {
            let ev = TranslationEvaluator::new(&[l], 32).unwrap();
            let v = ev.intertwine_apply(&|p| p[0], &[1.7]).unwrap();
            assert!((v - 1.7 / (2.0 * l + 1.0)).abs() < 1e-13);
            assert!((ev.intertwine_apply(&|_| 1.0, &[1.7]).unwrap() - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn translate_linear_and_square() {
        for &l in &[0.0, 0.3, 1.5] {
            let ev = TranslationEvaluator::new(&[l], 32).unwrap();
            let (x, t) = (0.8, -1.3);
            let v = ev.translate_point(&[x], &|p| p[0], &[t]).unwrap();
            assert!((v - (x + t)).abs() < 1e-12, "{l}");
            let v2 = ev.translate_point(&[x], &|p| p[0] * p[0], &[t]).unwrap();
            assert!((v2 - (x * x + t * t + 2.0 * x * t / (2.0 * l + 1.0))).abs() < 1e-12, "{l}");
        }
    }

    #[test]
    fn kernel_at_origin_and_classical() {
        let ev = TranslationEvaluator::new(&[0.7, 0.2], 24).unwrap();
        let z = [Complex64::new(0.3, 1.0), Complex64::new(-2.0, 0.5)];
        assert!((ev.dunkl_kernel(&[0.0, 0.0], &z).unwrap() - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        let ev0 = TranslationEvaluator::new(&[0.0], 8).unwrap();
        let e = ev0.dunkl_kernel(&[1.3], &[Complex64::new(0.4, 0.0)]).unwrap();
        assert!((e.re - (1.3f64 * 0.4).exp()).abs() < 1e-14);
        assert!(matches!(ev0.dunkl_kernel(&[1e3], &[Complex64::new(1.0, 0.0)]), Err(Error::Overflow(_))));
    }

    #[test]
    fn density_probe_one_dimension() {
        let r = density_bound_probe(&[0.5], &[vec![0.5], vec![1.0], vec![2.0]], &[0.1, 0.5]).unwrap();
        assert!(r.min_ratio > 0.0 && r.min_ratio.is_finite());
        let r0 = density_bound_probe(&[0.0], &[vec![1.0]], &[0.3]).unwrap();
        assert!((r0.entries[0].measure - 1.0).abs() < 1e-15);
    }
}
