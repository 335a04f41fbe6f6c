//! Truncated cones, the smooth cutoff `ψ`, and the area integrals
//! `S_{a,h}u` and `S^ψ_{a,h}u` for `G = Z₂^d`.

use crate::error::{Error, Result};
use crate::field::{HarmonicField, SquareForms};
use crate::intertwine::TranslationEvaluator;
use crate::means::SphericalMeanEvaluator;
use crate::quadrature::{gauss_jacobi_on, gauss_legendre, pairwise_sum, tensor, Rule1d, RuleNd};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::cell::RefCell;

/// `Γ_a^h(x) = {(t, y) : |t - x| < a y, 0 < y < h}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConeSpec {
    pub vertex: Vec<f64>,
    pub aperture: f64,
    pub height: f64,
}

impl ConeSpec {
    pub fn new(vertex: Vec<f64>, aperture: f64, height: f64) -> Result<ConeSpec> {
        if vertex.is_empty() || vertex.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("cone vertex must be a finite point of dimension at least one".into()));
        }
        if !(aperture > 0.0 && aperture.is_finite()) {
            return Err(Error::Domain(format!("aperture must be positive, got {aperture}")));
        }
        if !(height > 0.0 && height.is_finite()) {
            return Err(Error::Domain(format!("height must be positive, got {height}")));
        }
        Ok(ConeSpec { vertex, aperture, height })
    }

    pub fn dim(&self) -> usize {
        self.vertex.len()
    }

    pub fn contains(&self, t: &[f64], y: f64) -> bool {
        if t.len() != self.dim() || !(y > 0.0 && y < self.height) {
            return false;
        }
        let d2: f64 = t.iter().zip(&self.vertex).map(|(a, b)| (a - b) * (a - b)).sum();
        d2.sqrt() < self.aperture * y
    }

    pub fn with_aperture(&self, aperture: f64) -> ConeSpec {
        ConeSpec { aperture, ..self.clone() }
    }

    pub fn with_height(&self, height: f64) -> ConeSpec {
        ConeSpec { height, ..self.clone() }
    }
}

/// Radial cutoff `ψ(x) = ψ₀(|x|)`, equal to 1 on `|x| ≤ inner` and 0 on `|x| ≥ outer`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CutoffPsi {
    pub inner: f64,
    pub outer: f64,
}

fn smooth_step_core(t: f64) -> f64 {
    if t > 0.0 {
        (-1.0 / t).exp()
    } else {
        0.0
    }
}

impl CutoffPsi {
    /// `ψ₀(r) = g(outer - r) / (g(outer - r) + g(r - inner))` with `g(t) = e^{-1/t}` for `t > 0`.
    pub fn profile(&self, r: f64) -> f64 {
        if r <= self.inner {
            return 1.0;
        }
        if r >= self.outer {
            return 0.0;
        }
        let a = smooth_step_core(self.outer - r);
        let b = smooth_step_core(r - self.inner);
        a / (a + b)
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.profile(x.iter().map(|v| v * v).sum::<f64>().sqrt())
    }
}

pub fn make_cutoff() -> CutoffPsi {
    CutoffPsi { inner: 0.5, outer: 1.0 }
}

/// Outcome of the δ-refinement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SVerdict {
    Finite,
    Infinite,
    Indeterminate,
}

impl std::fmt::Display for SVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SVerdict::Finite => "finite",
            SVerdict::Infinite => "infinite",
            SVerdict::Indeterminate => "indeterminate",
        })
    }
}

/// Constant convention used for `S_{a,h}`, recorded in every report.
pub const CONSTANT_CONVENTION: &str =
    "S^2 = d_kappa^-1 * int_0^h int_0^{ay} M(x,r) (r/y)^(2|kappa|+d-1) dr dy; S^psi has no extra factor";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AreaOptions {
    /// Number of bands `[h 4^{-k-1}, h 4^{-k}]`.
    pub levels: usize,
    /// Gauss nodes in `log y` per band.
    pub y_nodes: usize,
    /// Gauss–Jacobi nodes in `r`.
    pub r_nodes: usize,
    /// Chebyshev nodes per side for the slices of `Δ_κ(u²)` (d = 1), per unit aperture ratio.
    pub table_nodes: usize,
    /// `dm_λ` nodes for the translation in `M_f` (d = 1).
    pub theta_nodes: usize,
    /// `dm_λ` nodes per coordinate when d ≥ 2.
    pub theta_nodes_multi: usize,
    pub sphere_nodes: usize,
    /// `dm_λ` nodes for the translated cutoff.
    pub cutoff_nodes: usize,
    /// Panels and nodes per panel for the `t` integral of `S^ψ`.
    pub t_panels: usize,
    pub t_nodes: usize,
    pub rel_tol: f64,
    pub growth_ratio: f64,
    pub growth_runs: usize,
    /// Lowest `δ`; defaults to `h 4^{-levels}`.
    pub delta_floor: Option<f64>,
}

impl Default for AreaOptions {
    fn default() -> Self {
        AreaOptions {
            levels: 12,
            y_nodes: 8,
            r_nodes: 24,
            table_nodes: 32,
            theta_nodes: 64,
            theta_nodes_multi: 12,
            sphere_nodes: 6,
            cutoff_nodes: 128,
            t_panels: 4,
            t_nodes: 16,
            rel_tol: 1e-6,
            growth_ratio: 0.9,
            growth_runs: 3,
            delta_floor: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AreaResult {
    /// Estimate of `S` at the last `δ` used.
    pub value: f64,
    pub squared: f64,
    pub verdict: SVerdict,
    pub deltas: Vec<f64>,
    /// Cumulative `S²` after each band.
    pub partial_squares: Vec<f64>,
    /// Smallest sampled integrand value relative to the largest.
    pub min_integrand: f64,
    pub nonnegative: bool,
    pub convention: String,
}

impl AreaResult {
    pub fn is_finite(&self) -> bool {
        self.verdict == SVerdict::Finite
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Quantity {
    Cone { aperture: f64, gradient: bool },
    Psi { aperture: f64 },
}

impl Quantity {
    fn aperture(&self) -> f64 {
        match *self {
            Quantity::Cone { aperture, .. } | Quantity::Psi { aperture } => aperture,
        }
    }
}

/// Barycentric interpolant on Chebyshev points of the first kind.
struct Cheb {
    lo: f64,
    hi: f64,
    nodes: Vec<f64>,
    bary: Vec<f64>,
    values: Vec<[f64; 2]>,
}

impl Cheb {
    fn nodes(lo: f64, hi: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
        let mut nodes = Vec::with_capacity(n);
        let mut bary = Vec::with_capacity(n);
        for k in 0..n {
            let a = (2 * k + 1) as f64 * std::f64::consts::PI / (2 * n) as f64;
            nodes.push(0.5 * (lo + hi) + 0.5 * (hi - lo) * a.cos());
            bary.push(if k % 2 == 0 { a.sin() } else { -a.sin() });
        }
        (nodes, bary)
    }

    fn eval(&self, v: f64, c: usize) -> f64 {
        let v = v.clamp(self.lo, self.hi);
        let (mut num, mut den) = (0.0, 0.0);
        for ((x, b), f) in self.nodes.iter().zip(&self.bary).zip(&self.values) {
            let diff = v - x;
            if diff == 0.0 {
                return f[c];
            }
            let w = b / diff;
            num += w * f[c];
            den += w;
        }
        num / den
    }
}

/// Slices of `Δ_κ(u²)` and `2|∇u|²` at a fixed height.
enum Slice<'a> {
    Table { plus: Cheb, minus: Option<Cheb> },
    Direct { u: &'a dyn HarmonicField, y: f64, err: RefCell<Option<Error>> },
}

impl Slice<'_> {
    fn eval(&self, t: &[f64], c: usize) -> f64 {
        match self {
            Slice::Table { plus, minus } => {
                let v = t[0];
                match minus {
                    Some(m) if v < 0.0 => m.eval(-v, c),
                    _ => plus.eval(v.abs(), c),
                }
            }
            Slice::Direct { u, y, err } => match u.square_forms(t, *y) {
                Ok(f) => pick(&f, c),
                Err(e) => {
                    err.borrow_mut().get_or_insert(e);
                    0.0
                }
            },
        }
    }

    fn take_err(self) -> Result<()> {
        match self {
            Slice::Direct { err, .. } => err.into_inner().map_or(Ok(()), Err),
            _ => Ok(()),
        }
    }
}

fn pick(f: &SquareForms, c: usize) -> f64 {
    if c == 0 {
        f.laplacian_of_square
    } else {
        f.gradient_form
    }
}

/// Rule for `∫ F(t) |t|^{2λ} dt` on `±[lo, hi]`, exact weight at 0 when `lo = 0`.
fn side_rule(lambda: f64, lo: f64, hi: f64, panels: usize, n: usize) -> Result<Rule1d> {
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    let width = (hi - lo) / panels as f64;
    for p in 0..panels {
        let a = lo + p as f64 * width;
        let b = if p + 1 == panels { hi } else { a + width };
        if a == 0.0 && lambda > 0.0 {
            let r = gauss_jacobi_on(n, 0.0, 2.0 * lambda, 0.0, b)?;
            nodes.extend_from_slice(&r.nodes);
            weights.extend_from_slice(&r.weights);
        } else {
            let r = gauss_legendre(n, a, b)?;
            for (x, w) in r.nodes.iter().zip(&r.weights) {
                nodes.push(*x);
                weights.push(w * x.abs().powf(2.0 * lambda));
            }
        }
    }
    let mut all_n: Vec<f64> = nodes.iter().map(|x| -x).collect();
    let mut all_w = weights.clone();
    all_n.extend_from_slice(&nodes);
    all_w.extend_from_slice(&weights);
    Ok(Rule1d { nodes: all_n, weights: all_w, exactness_degree: 0, measure: crate::quadrature::MeasureTag::Lebesgue { a: -hi, b: hi } })
}

struct Engine<'a> {
    u: &'a dyn HarmonicField,
    x: Vec<f64>,
    h: f64,
    quantities: Vec<Quantity>,
    opts: AreaOptions,
    lambda: Vec<f64>,
    n_hom: f64,
    d_inv: f64,
    mean: SphericalMeanEvaluator,
    radial: TranslationEvaluator,
    r_rule: Rule1d,
    y_base: Rule1d,
    psi: CutoffPsi,
    reach: f64,
    table_n: usize,
}

struct SliceOut {
    values: Vec<f64>,
    min: f64,
    max: f64,
}

impl<'a> Engine<'a> {
    fn new(u: &'a dyn HarmonicField, cone: &ConeSpec, quantities: Vec<Quantity>, opts: AreaOptions) -> Result<Self> {
        let lambda = u.lambda().to_vec();
        if lambda.len() != cone.dim() {
            return Err(Error::Dimension { expected: lambda.len(), got: cone.dim() });
        }
        let d = lambda.len();
        let theta = if d == 1 { opts.theta_nodes } else { opts.theta_nodes_multi };
        let mean = SphericalMeanEvaluator::new(&lambda, opts.sphere_nodes, theta)?;
        let n_hom = 2.0 * lambda.iter().sum::<f64>() + d as f64;
        let reach = quantities.iter().map(|q| q.aperture()).fold(0.0, f64::max);
        let base = quantities.iter().map(|q| q.aperture()).fold(f64::INFINITY, f64::min);
        let table_n = (opts.table_nodes as f64 * (reach / base).max(1.0)).ceil() as usize;
        Ok(Engine {
            u,
            x: cone.vertex.clone(),
            h: cone.height,
            quantities,
            lambda: lambda.clone(),
            n_hom,
            d_inv: mean.sphere.total_mass,
            radial: TranslationEvaluator::new(&lambda, opts.cutoff_nodes)?,
            mean,
            r_rule: gauss_jacobi_on(opts.r_nodes, 0.0, n_hom - 1.0, 0.0, 1.0)?,
            y_base: gauss_legendre(opts.y_nodes, 0.0, 1.0)?,
            psi: make_cutoff(),
            reach,
            table_n,
            opts,
        })
    }

    fn slice_source(&self, y: f64) -> Result<Slice<'a>> {
        if self.lambda.len() != 1 {
            return Ok(Slice::Direct { u: self.u, y, err: RefCell::new(None) });
        }
        let ax = self.x[0].abs();
        let lo = (ax - self.reach * y).max(0.0);
        let hi = ax + self.reach * y;
        let (nodes, bary) = Cheb::nodes(lo, hi, self.table_n);
        let forms = |sign: f64| -> Result<Vec<[f64; 2]>> {
            nodes
                .iter()
                .map(|t| {
                    let f = self.u.square_forms(&[sign * t], y)?;
                    Ok([f.laplacian_of_square, f.gradient_form])
                })
                .collect()
        };
        let plus = Cheb { lo, hi, nodes: nodes.clone(), bary: bary.clone(), values: forms(1.0)? };
        let minus = if self.u.is_g_invariant() {
            None
        } else {
            Some(Cheb { lo, hi, values: forms(-1.0)?, nodes, bary })
        };
        Ok(Slice::Table { plus, minus })
    }

    fn translated_cutoff(&self, aperture: f64, t: &[f64], y: f64) -> Result<f64> {
        let s = aperture * y;
        let z: Vec<f64> = self.x.iter().map(|v| -v / s).collect();
        let w: Vec<f64> = t.iter().map(|v| v / s).collect();
        let psi = self.psi;
        self.radial.translate_radial(&z, &|r| psi.profile(r), &w)
    }

    fn t_rule(&self, aperture: f64, y: f64) -> Result<RuleNd> {
        let rules = self
            .x
            .iter()
            .zip(&self.lambda)
            .map(|(xj, lj)| {
                let lo = (xj.abs() - aperture * y).max(0.0);
                let hi = xj.abs() + aperture * y;
                side_rule(*lj, lo, hi, self.opts.t_panels, self.opts.t_nodes)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(tensor(&rules))
    }

    fn slice(&self, y: f64) -> Result<SliceOut> {
        let src = self.slice_source(y)?;
        let mut out = SliceOut { values: Vec::with_capacity(self.quantities.len()), min: f64::INFINITY, max: 0.0 };
        for q in &self.quantities {
            let v = match *q {
                Quantity::Cone { aperture, gradient } => {
                    let c = usize::from(gradient);
                    let f = |t: &[f64]| src.eval(t, c);
                    let mut acc = Vec::with_capacity(self.r_rule.len());
                    for (s, w) in self.r_rule.nodes.iter().zip(&self.r_rule.weights) {
                        let m = self.mean.mean(&f, &self.x, aperture * y * s)?;
                        out.min = out.min.min(m);
                        out.max = out.max.max(m.abs());
                        acc.push(w * m);
                    }
                    self.d_inv * aperture.powf(self.n_hom) * y * pairwise_sum(&acc)
                }
                Quantity::Psi { aperture } => {
                    let rule = self.t_rule(aperture, y)?;
                    let mut acc = Vec::with_capacity(rule.len());
                    for (t, w) in rule.points.iter().zip(&rule.weights) {
                        let c = self.translated_cutoff(aperture, t, y)?;
                        if c == 0.0 {
                            continue;
                        }
                        let g = src.eval(t, 0);
                        let v = g * c;
                        out.min = out.min.min(v);
                        out.max = out.max.max(v.abs());
                        acc.push(w * v);
                    }
                    pairwise_sum(&acc) * y.powf(1.0 - self.n_hom)
                }
            };
            if !v.is_finite() {
                return Err(Error::Poisoned { node: vec![y], value: v });
            }
            out.values.push(v);
        }
        src.take_err()?;
        Ok(out)
    }

    fn band(&self, lo: f64, hi: f64) -> Result<(Vec<f64>, f64, f64)> {
        let (l0, l1) = (lo.ln(), hi.ln());
        let jobs: Vec<(f64, f64)> = self
            .y_base
            .nodes
            .iter()
            .zip(&self.y_base.weights)
            .map(|(s, w)| {
                let y = (l0 + (l1 - l0) * s).exp();
                (y, w * (l1 - l0) * y)
            })
            .collect();
        let outs: Vec<Result<SliceOut>> = jobs.par_iter().map(|(y, _)| self.slice(*y)).collect();
        let mut sums = vec![Vec::with_capacity(jobs.len()); self.quantities.len()];
        let (mut mn, mut mx) = (f64::INFINITY, 0.0f64);
        for ((_, w), o) in jobs.iter().zip(outs) {
            let o = o?;
            mn = mn.min(o.min);
            mx = mx.max(o.max);
            for (k, v) in o.values.iter().enumerate() {
                sums[k].push(w * v);
            }
        }
        Ok((sums.iter().map(|s| pairwise_sum(s)).collect(), mn, mx))
    }

    fn run(&self) -> Result<Vec<AreaResult>> {
        let nq = self.quantities.len();
        let floor = self.opts.delta_floor.unwrap_or(self.h * 4f64.powi(-(self.opts.levels as i32)));
        let mut state: Vec<Track> = (0..nq).map(|_| Track::default()).collect();
        let (mut mn, mut mx) = (f64::INFINITY, 0.0f64);
        let mut hi = self.h;
        for _ in 0..self.opts.levels {
            let lo = hi / 4.0;
            if lo < floor * (1.0 - 1e-12) || state.iter().all(|s| s.verdict.is_some()) {
                break;
            }
            let (inc, a, b) = self.band(lo, hi)?;
            mn = mn.min(a);
            mx = mx.max(b);
            for (s, v) in state.iter_mut().zip(inc) {
                if s.verdict.is_none() {
                    s.push(lo, v, &self.opts);
                }
            }
            hi = lo;
        }
        let rel_min = if mx > 0.0 { mn.min(0.0) / mx } else { 0.0 };
        Ok(state
            .into_iter()
            .map(|s| {
                let sq = s.partial.last().copied().unwrap_or(0.0);
                AreaResult {
                    value: sq.max(0.0).sqrt(),
                    squared: sq,
                    verdict: s.verdict.unwrap_or(SVerdict::Indeterminate),
                    deltas: s.deltas,
                    partial_squares: s.partial,
                    min_integrand: rel_min,
                    nonnegative: rel_min > -1e-8,
                    convention: CONSTANT_CONVENTION.to_string(),
                }
            })
            .collect())
    }
}

#[derive(Default)]
struct Track {
    deltas: Vec<f64>,
    partial: Vec<f64>,
    increments: Vec<f64>,
    verdict: Option<SVerdict>,
}

impl Track {
    fn push(&mut self, delta: f64, inc: f64, opts: &AreaOptions) {
        let prev = self.partial.last().copied().unwrap_or(0.0);
        let now = prev + inc;
        self.deltas.push(delta);
        self.partial.push(now);
        self.increments.push(inc);
        let k = self.increments.len();
        if k >= 2 {
            let (s0, s1) = (prev.max(0.0).sqrt(), now.max(0.0).sqrt());
            if s1 == 0.0 || (s1 - s0).abs() < opts.rel_tol * s1 {
                self.verdict = Some(SVerdict::Finite);
                return;
            }
        }
        let runs = opts.growth_runs;
        if k > runs {
            let tail = &self.increments[k - runs - 1..];
            if tail.windows(2).all(|w| w[0] > 0.0 && w[1] >= opts.growth_ratio * w[0]) {
                self.verdict = Some(SVerdict::Infinite);
            }
        }
    }
}

/// `S_{a,h}u(x)` through the spherical-mean rewrite with δ-refinement.
pub fn area_integral(u: &dyn HarmonicField, cone: &ConeSpec, opts: AreaOptions) -> Result<AreaResult> {
    let q = vec![Quantity::Cone { aperture: cone.aperture, gradient: false }];
    Ok(Engine::new(u, cone, q, opts)?.run()?.remove(0))
}

/// `S^ψ_{a,h}u(x)` through the dual form with the translated cutoff.
pub fn area_integral_psi(u: &dyn HarmonicField, cone: &ConeSpec, opts: AreaOptions) -> Result<AreaResult> {
    let q = vec![Quantity::Psi { aperture: cone.aperture }];
    Ok(Engine::new(u, cone, q, opts)?.run()?.remove(0))
}

/// `(τ_{-x/ay} ψ)(t / ay)`.
pub fn translated_cutoff(lambda: &[f64], cone: &ConeSpec, t: &[f64], y: f64) -> Result<f64> {
    if lambda.len() != cone.dim() || t.len() != cone.dim() {
        return Err(Error::Dimension { expected: cone.dim(), got: lambda.len().min(t.len()) });
    }
    if !(y > 0.0) {
        return Err(Error::Domain(format!("y must be positive, got {y}")));
    }
    let ev = TranslationEvaluator::new(lambda, AreaOptions::default().cutoff_nodes)?;
    let s = cone.aperture * y;
    let z: Vec<f64> = cone.vertex.iter().map(|v| -v / s).collect();
    let w: Vec<f64> = t.iter().map(|v| v / s).collect();
    let psi = make_cutoff();
    ev.translate_radial(&z, &|r| psi.profile(r), &w)
}

/// `Δ_κ(u²)(t, y) (τ_{-x/ay}ψ)(t/ay)`, the dual-form density of `S^ψ` before the weights.
pub fn psi_integrand(u: &dyn HarmonicField, cone: &ConeSpec, t: &[f64], y: f64) -> Result<f64> {
    let c = translated_cutoff(u.lambda(), cone, t, y)?;
    if c == 0.0 {
        return Ok(0.0);
    }
    Ok(u.laplacian_of_square(t, y)? * c)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SandwichReport {
    pub psi_inner: AreaResult,
    pub cone: AreaResult,
    pub psi_outer: AreaResult,
    pub tolerance: f64,
    pub ordered: bool,
}

impl SandwichReport {
    pub fn triple(&self) -> [f64; 3] {
        [self.psi_inner.value, self.cone.value, self.psi_outer.value]
    }
}

/// `S^ψ_{a,h} ≤ S_{a,h} ≤ S^ψ_{2a,h}` on one refinement schedule.
pub fn sandwich_residual(u: &dyn HarmonicField, cone: &ConeSpec, opts: AreaOptions) -> Result<SandwichReport> {
    let a = cone.aperture;
    let q = vec![
        Quantity::Psi { aperture: a },
        Quantity::Cone { aperture: a, gradient: false },
        Quantity::Psi { aperture: 2.0 * a },
    ];
    let mut r = Engine::new(u, cone, q, opts)?.run()?;
    let psi_outer = r.pop().unwrap();
    let s = r.pop().unwrap();
    let psi_inner = r.pop().unwrap();
    let tolerance = 1e-5 * (1.0 + s.value);
    let ordered = psi_inner.value <= s.value + tolerance && s.value <= psi_outer.value + tolerance;
    Ok(SandwichReport { psi_inner, cone: s, psi_outer, tolerance, ordered })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominanceReport {
    /// Cone integral of `τ_x(2|∇u|²)`, as an `S`-type value.
    pub gradient: AreaResult,
    pub full: AreaResult,
    pub invariant: bool,
    pub dominated: bool,
    /// For invariant `u` the two agree within `1e-6`.
    pub agree: Option<bool>,
}

pub fn dominance_check(u: &dyn HarmonicField, cone: &ConeSpec, opts: AreaOptions) -> Result<DominanceReport> {
    let a = cone.aperture;
    let q = vec![Quantity::Cone { aperture: a, gradient: true }, Quantity::Cone { aperture: a, gradient: false }];
    let mut r = Engine::new(u, cone, q, opts)?.run()?;
    let full = r.pop().unwrap();
    let gradient = r.pop().unwrap();
    let invariant = u.is_g_invariant();
    let dominated = gradient.squared <= full.squared * (1.0 + 1e-6) + 1e-12;
    let agree = invariant.then(|| (gradient.squared - full.squared).abs() <= 1e-6 * (1.0 + full.squared));
    Ok(DominanceReport { gradient, full, invariant, dominated, agree })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityReport {
    pub by_aperture: Vec<(f64, f64)>,
    pub by_height: Vec<(f64, f64)>,
    pub monotone: bool,
}

/// `a ↦ S_{a,h}` at the cone's height and `h ↦ S_{a,h}` at its aperture.
pub fn monotonicity_check(
    u: &dyn HarmonicField,
    cone: &ConeSpec,
    apertures: &[f64],
    heights: &[f64],
    opts: AreaOptions,
) -> Result<MonotonicityReport> {
    let mut by_aperture = Vec::new();
    for &a in apertures {
        by_aperture.push((a, area_integral(u, &ConeSpec::new(cone.vertex.clone(), a, cone.height)?, opts)?.value));
    }
    let mut by_height = Vec::new();
    for &h in heights {
        by_height.push((h, area_integral(u, &ConeSpec::new(cone.vertex.clone(), cone.aperture, h)?, opts)?.value));
    }
    let nondecreasing = |v: &mut Vec<(f64, f64)>| {
        v.sort_by(|a, b| a.0.total_cmp(&b.0));
        v.windows(2).all(|w| w[1].1 >= w[0].1 * (1.0 - 1e-7) - 1e-12)
    };
    let monotone = nondecreasing(&mut by_aperture) & nondecreasing(&mut by_height);
    Ok(MonotonicityReport { by_aperture, by_height, monotone })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PolyField;
    use crate::poly::rat;

    #[test]
    fn cutoff_shape() {
        let p = make_cutoff();
        assert_eq!(p.profile(0.3), 1.0);
        assert_eq!(p.profile(1.2), 0.0);
        let m = p.profile(0.75);
        assert!(m > 0.0 && m < 1.0);
        assert!((m - 0.5).abs() < 1e-15);
        let mut last = 1.0;
        for k in 0..=100 {
            let v = p.profile(0.5 + 0.005 * k as f64);
            assert!(v <= last);
            last = v;
        }
    }

    #[test]
    fn cone_membership() {
        let c = ConeSpec::new(vec![0.5], 1.0, 1.0).unwrap();
        assert!(c.contains(&[0.7], 0.3));
        assert!(!c.contains(&[0.9], 0.3));
        assert!(!c.contains(&[0.5], 1.0));
        assert!(ConeSpec::new(vec![0.0], 0.0, 1.0).is_err());
    }

    #[test]
    fn linear_height_gives_one() {
        let u = PolyField::parse("y", vec![rat(1, 2)]).unwrap();
        let cone = ConeSpec::new(vec![0.3], 1.0, 1.0).unwrap();
        let r = area_integral(&u, &cone, AreaOptions::default()).unwrap();
        assert_eq!(r.verdict, SVerdict::Finite);
        assert!((r.value - 1.0).abs() < 1e-6, "{r:?}");
        let c = PolyField::parse("3 + 0*y", vec![rat(1, 2)]);
        if let Ok(c) = c {
            assert_eq!(area_integral(&c, &cone, AreaOptions::default()).unwrap().value, 0.0);
        }
    }

    #[test]
    fn sandwich_on_polynomials() {
        for (e, x) in [("y", 0.3), ("x*y", 0.7), ("x^2 - 2*y^2", -0.4)] {
            let u = PolyField::parse(e, vec![rat(1, 2)]).unwrap();
            let cone = ConeSpec::new(vec![x], 1.0, 1.0).unwrap();
            let r = sandwich_residual(&u, &cone, AreaOptions::default()).unwrap();
            assert!(r.ordered, "{e} {:?}", r.triple());
            assert!(r.psi_inner.value < r.cone.value && r.cone.value < r.psi_outer.value);
        }
    }
}
