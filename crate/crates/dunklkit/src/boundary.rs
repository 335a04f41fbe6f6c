//! Non-tangential sampling, limit and boundedness verdicts, the Fatou
//! agreement table, Green-formula checks and interior gradient bounds.

use crate::area::{area_integral, AreaOptions, AreaResult, ConeSpec, SVerdict};
use crate::dunkl::{dunkl_apply, dunkl_laplacian};
use crate::error::{Error, Result};
use crate::field::HarmonicField;
use crate::poly::{rat_to_f64, Poly, Rat};
use crate::rootsys::{RootSystemData, RootSystemKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NtOptions {
    /// Levels `y_k = h 2^{-k}`, `k = 0..=levels`.
    pub levels: usize,
    pub n_slice: usize,
    pub max_doublings: usize,
    /// Relative change allowed between a slice and its doubling.
    pub refine_tol: f64,
    pub tol_nt: f64,
    pub cauchy_window: usize,
    /// Level-to-level growth of the sup that counts as blow-up.
    pub growth_factor: f64,
    pub growth_runs: usize,
}

impl Default for NtOptions {
    fn default() -> Self {
        NtOptions {
            levels: 14,
            n_slice: 16,
            max_doublings: 4,
            refine_tol: 0.05,
            tol_nt: 1e-3,
            cauchy_window: 3,
            growth_factor: 1.5,
            growth_runs: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelSup {
    pub y: f64,
    pub sup: f64,
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    pub samples: usize,
    /// The last doubling changed the sup by less than `refine_tol`.
    pub refined: bool,
    pub poisoned: bool,
}

fn point_seed(seed: u64, index: u64) -> u64 {
    seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Jittered points of the open ball of radius `rho` around `x`.
fn slice_points(rng: &mut ChaCha8Rng, x: &[f64], rho: f64, n: usize) -> Vec<Vec<f64>> {
    let shrink = 1.0 - 1e-9;
    if x.len() == 1 {
        return (0..n)
            .map(|i| {
                let s = -1.0 + 2.0 * (i as f64 + rng.gen::<f64>()) / n as f64;
                vec![x[0] + rho * shrink * s]
            })
            .collect();
    }
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let v: Vec<f64> = x.iter().map(|_| rng.gen_range(-1.0..1.0)).collect();
        if v.iter().map(|a| a * a).sum::<f64>() < 1.0 {
            out.push(x.iter().zip(&v).map(|(a, b)| a + rho * shrink * b).collect());
        }
    }
    out
}

fn level_stats(u: &dyn HarmonicField, pts: &[Vec<f64>], y: f64) -> (Vec<f64>, bool) {
    let mut vals = Vec::with_capacity(pts.len());
    let mut poisoned = false;
    for p in pts {
        match u.value(p, y) {
            Ok(v) if v.is_finite() => vals.push(v),
            _ => poisoned = true,
        }
    }
    (vals, poisoned)
}

fn sup_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Per-level sup of `|u|` over the slices `{|t - x| < a y_k}` with `y_k = h 2^{-k}`.
pub fn cone_supremum(u: &dyn HarmonicField, cone: &ConeSpec, opts: &NtOptions, seed: u64) -> Result<Vec<LevelSup>> {
    if cone.dim() != u.dim() {
        return Err(Error::Dimension { expected: u.dim(), got: cone.dim() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(opts.levels + 1);
    for k in 0..=opts.levels {
        let y = cone.height * 0.5f64.powi(k as i32);
        let rho = cone.aperture * y;
        let mut n = opts.n_slice.max(1);
        let mut pts = slice_points(&mut rng, &cone.vertex, rho, n);
        pts.push(cone.vertex.clone());
        let (mut vals, mut poisoned) = level_stats(u, &pts, y);
        let mut refined = false;
        for _ in 0..opts.max_doublings {
            n *= 2;
            let mut p2 = slice_points(&mut rng, &cone.vertex, rho, n);
            p2.push(cone.vertex.clone());
            let (v2, bad) = level_stats(u, &p2, y);
            poisoned |= bad;
            let (s1, s2) = (sup_abs(&vals), sup_abs(&v2));
            vals.extend_from_slice(&v2);
            if (s2 - s1).abs() <= opts.refine_tol * s2.max(s1) {
                refined = true;
                break;
            }
        }
        let min = vals.iter().copied().fold(f64::INFINITY, f64::min);
        let max = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mean = vals.iter().sum::<f64>() / vals.len().max(1) as f64;
        out.push(LevelSup { y, sup: sup_abs(&vals), min, max, mean, samples: vals.len(), refined, poisoned });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NTProbeReport {
    pub vertex: Vec<f64>,
    pub aperture: f64,
    pub height: f64,
    pub levels: Vec<LevelSup>,
    pub bounded: bool,
    pub limit_exists: bool,
    pub limit_value: Option<f64>,
    /// Oscillation over the Cauchy window.
    pub oscillation: f64,
    pub area: Option<AreaResult>,
    pub seed: u64,
}

impl NTProbeReport {
    pub fn area_verdict(&self) -> Option<SVerdict> {
        self.area.as_ref().map(|a| a.verdict)
    }

    pub fn record(&self) -> NTProbeRecord {
        NTProbeRecord {
            x: self.vertex.iter().map(|v| format!("{v}")).collect::<Vec<_>>().join(";"),
            a: self.aperture,
            h: self.height,
            bounded: self.bounded,
            limit_exists: self.limit_exists,
            limit_value: self.limit_value,
            s_value: self.area.as_ref().map(|a| a.value),
            s_verdict: self.area_verdict(),
            seed: self.seed,
        }
    }
}

/// Flat row of the NT probe table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NTProbeRecord {
    pub x: String,
    pub a: f64,
    pub h: f64,
    pub bounded: bool,
    pub limit_exists: bool,
    pub limit_value: Option<f64>,
    #[serde(rename = "S_value")]
    pub s_value: Option<f64>,
    #[serde(rename = "S_verdict")]
    pub s_verdict: Option<SVerdict>,
    pub seed: u64,
}

pub const NT_COLUMNS: [&str; 9] = ["x", "a", "h", "bounded", "limit_exists", "limit_value", "S_value", "S_verdict", "seed"];

/// Boundedness and Cauchy-limit verdicts from a sup table.
pub fn nt_verdicts(levels: &[LevelSup], opts: &NtOptions) -> (bool, bool, Option<f64>, f64) {
    let finite = levels.iter().all(|l| !l.poisoned && l.sup.is_finite());
    let k = levels.len();
    let runs = opts.growth_runs;
    let growing = k > runs
        && levels[k - runs - 1..].windows(2).all(|w| w[1].sup >= opts.growth_factor * w[0].sup && w[0].sup > 0.0);
    let bounded = finite && !growing;
    let win = &levels[k.saturating_sub(opts.cauchy_window)..];
    let hi = win.iter().map(|l| l.max).fold(f64::NEG_INFINITY, f64::max);
    let lo = win.iter().map(|l| l.min).fold(f64::INFINITY, f64::min);
    let osc = hi - lo;
    let limit_exists = bounded && osc < opts.tol_nt;
    let value = limit_exists.then(|| levels[k - 1].mean);
    (bounded, limit_exists, value, osc)
}

pub fn nt_limit_probe(u: &dyn HarmonicField, cone: &ConeSpec, opts: &NtOptions, seed: u64) -> Result<NTProbeReport> {
    let levels = cone_supremum(u, cone, opts, seed)?;
    let (bounded, limit_exists, limit_value, oscillation) = nt_verdicts(&levels, opts);
    Ok(NTProbeReport {
        vertex: cone.vertex.clone(),
        aperture: cone.aperture,
        height: cone.height,
        levels,
        bounded,
        limit_exists,
        limit_value,
        oscillation,
        area: None,
        seed,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FatouOptions {
    pub nt: NtOptions,
    pub area: AreaOptions,
    /// Points where the three verdicts are allowed to disagree.
    pub designed: Vec<Vec<f64>>,
    pub seed: u64,
}

impl Default for FatouOptions {
    fn default() -> Self {
        FatouOptions { nt: NtOptions::default(), area: AreaOptions::default(), designed: Vec::new(), seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FatouRow {
    pub report: NTProbeReport,
    pub designed: bool,
    /// `None` when the area verdict is indeterminate.
    pub agree: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FatouSummary {
    pub points: usize,
    pub decided: usize,
    pub agreements: usize,
    pub disagreements: usize,
    pub agreement_rate: f64,
    /// Every disagreement lies in the designed set.
    pub disagreements_designed: bool,
    pub disagreement_points: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FatouTable {
    pub field: String,
    pub rows: Vec<FatouRow>,
    pub summary: FatouSummary,
}

fn is_sign_closed(grid: &[Vec<f64>]) -> bool {
    let key = |p: &[f64]| p.iter().map(|v| (v * 1e9).round() as i64).collect::<Vec<_>>();
    let set: std::collections::BTreeSet<Vec<i64>> = grid.iter().map(|p| key(p)).collect();
    grid.iter().all(|p| {
        (0..p.len()).all(|j| {
            let mut q = p.clone();
            q[j] = -q[j];
            set.contains(&key(&q))
        })
    })
}

fn close_to_any(p: &[f64], set: &[Vec<f64>]) -> bool {
    set.iter().any(|q| q.len() == p.len() && q.iter().zip(p).all(|(a, b)| (a - b).abs() < 1e-9))
}

/// Three-way verdict table over a sign-closed grid.
pub fn fatou_table(
    u: &dyn HarmonicField,
    grid: &[Vec<f64>],
    aperture: f64,
    height: f64,
    opts: &FatouOptions,
) -> Result<FatouTable> {
    if grid.is_empty() {
        return Err(Error::Validation("empty grid".into()));
    }
    if grid.iter().any(|p| p.len() != u.dim()) {
        return Err(Error::Dimension { expected: u.dim(), got: grid[0].len() });
    }
    if !is_sign_closed(grid) {
        return Err(Error::Validation("boundary grid is not closed under sign changes".into()));
    }
    let invariant = u.is_g_invariant();
    let rep = |p: &[f64]| -> Vec<f64> {
        if invariant {
            p.iter().map(|v| v.abs()).collect()
        } else {
            p.to_vec()
        }
    };
    let mut distinct: Vec<Vec<f64>> = Vec::new();
    for p in grid {
        let r = rep(p);
        if !close_to_any(&r, &distinct) {
            distinct.push(r);
        }
    }
    let areas: Vec<Result<AreaResult>> = distinct
        .par_iter()
        .map(|p| area_integral(u, &ConeSpec::new(p.clone(), aperture, height)?, opts.area))
        .collect();
    let mut area_of: BTreeMap<usize, AreaResult> = BTreeMap::new();
    for (i, a) in areas.into_iter().enumerate() {
        area_of.insert(i, a?);
    }
    let rows: Vec<Result<FatouRow>> = grid
        .par_iter()
        .enumerate()
        .map(|(i, p)| {
            let cone = ConeSpec::new(p.clone(), aperture, height)?;
            let mut report = nt_limit_probe(u, &cone, &opts.nt, point_seed(opts.seed, i as u64))?;
            let r = rep(p);
            let idx = distinct.iter().position(|q| q.iter().zip(&r).all(|(a, b)| (a - b).abs() < 1e-9)).unwrap();
            report.area = Some(area_of[&idx].clone());
            let s = report.area_verdict().unwrap();
            let agree = match s {
                SVerdict::Indeterminate => None,
                v => {
                    let fin = v == SVerdict::Finite;
                    Some(report.limit_exists == report.bounded && report.bounded == fin)
                }
            };
            Ok(FatouRow { designed: close_to_any(p, &opts.designed), report, agree })
        })
        .collect();
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let decided = rows.iter().filter(|r| r.agree.is_some()).count();
    let agreements = rows.iter().filter(|r| r.agree == Some(true)).count();
    let bad: Vec<&FatouRow> = rows.iter().filter(|r| r.agree == Some(false)).collect();
    let summary = FatouSummary {
        points: rows.len(),
        decided,
        agreements,
        disagreements: bad.len(),
        agreement_rate: if decided > 0 { agreements as f64 / decided as f64 } else { 0.0 },
        disagreements_designed: bad.iter().all(|r| r.designed),
        disagreement_points: bad.iter().map(|r| r.report.vertex.clone()).collect(),
    };
    Ok(FatouTable { field: u.label(), rows, summary })
}

/// Both sides of the Green formulas on `[-R, R]^d × [y₀, y₁]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GreenReport {
    pub volume: f64,
    pub flux_normal: f64,
    pub flux_dunkl: f64,
    pub scale: f64,
    pub residual_normal: f64,
    pub residual_dunkl: f64,
}

impl GreenReport {
    pub fn residual(&self) -> f64 {
        self.residual_normal.max(self.residual_dunkl)
    }
}

/// `∫ t^k |t|^{2λ} dt` over `[-R, R]`.
fn weighted_moment(k: u32, lambda: f64, r: f64) -> f64 {
    if k % 2 == 1 {
        return 0.0;
    }
    let e = k as f64 + 2.0 * lambda + 1.0;
    2.0 * r.powf(e) / e
}

fn power_moment(k: u32, a: f64, b: f64) -> f64 {
    let e = k as i32 + 1;
    (b.powi(e) - a.powi(e)) / e as f64
}

/// Integral of `p` over the box with each `x_j` weighted by `|x_j|^{2λ_j}`;
/// a pinned coordinate is evaluated instead of integrated.
fn box_integral(p: &Poly, lambda: &[f64], r: f64, y: (f64, f64), pin: Option<(usize, f64)>) -> f64 {
    let d = lambda.len();
    let mut acc = Vec::with_capacity(p.terms().len());
    for (m, c) in p.terms() {
        let mut v = rat_to_f64(c);
        for i in 0..=d {
            let k = m.0[i];
            let factor = match pin {
                Some((j, val)) if j == i => {
                    if i < d {
                        val.powi(k as i32) * val.abs().powf(2.0 * lambda[i])
                    } else {
                        val.powi(k as i32)
                    }
                }
                _ if i < d => weighted_moment(k, lambda[i], r),
                _ => power_moment(k, y.0, y.1),
            };
            v *= factor;
            if v == 0.0 {
                break;
            }
        }
        acc.push(v);
    }
    crate::quadrature::pairwise_sum(&acc)
}

pub fn green_residual(lambda: &[Rat], u: &Poly, v: &Poly, radius: f64, y0: f64, y1: f64) -> Result<GreenReport> {
    if !(y0 > 0.0 && y1 > y0 && radius > 0.0) {
        return Err(Error::Domain(format!("box needs 0 < y0 < y1 and R > 0, got R={radius}, y0={y0}, y1={y1}")));
    }
    let d = lambda.len();
    for p in [u, v] {
        if p.nx() != d || !p.has_y() {
            return Err(Error::Validation(format!("Green polynomials need {d} x-variables and y")));
        }
    }
    let rs = RootSystemData::build(&RootSystemKind::Z2d { lambda: lambda.to_vec() })?;
    let lam: Vec<f64> = lambda.iter().map(rat_to_f64).collect();
    let lu = dunkl_laplacian(&rs, u)?;
    let lv = dunkl_laplacian(&rs, v)?;
    let vol_poly = &(v * &lu) - &(u * &lv);
    let volume = box_integral(&vol_poly, &lam, radius, (y0, y1), None);
    let flux = |du: &[Poly], dv: &[Poly]| -> f64 {
        let mut total = Vec::new();
        for j in 0..=d {
            let q = &(v * &du[j]) - &(u * &dv[j]);
            let (lo, hi) = if j < d { (-radius, radius) } else { (y0, y1) };
            total.push(box_integral(&q, &lam, radius, (y0, y1), Some((j, hi))));
            total.push(-box_integral(&q, &lam, radius, (y0, y1), Some((j, lo))));
        }
        crate::quadrature::pairwise_sum(&total)
    };
    let grad = |p: &Poly| -> Vec<Poly> { (0..=d).map(|j| p.deriv(j)).collect() };
    let dgrad = |p: &Poly| -> Result<Vec<Poly>> {
        let mut g = (0..d).map(|j| dunkl_apply(&rs, j, p)).collect::<Result<Vec<_>>>()?;
        g.push(p.deriv(d));
        Ok(g)
    };
    let flux_normal = flux(&grad(u), &grad(v));
    let flux_dunkl = flux(&dgrad(u)?, &dgrad(v)?);
    let scale = volume.abs().max(flux_normal.abs()).max(flux_dunkl.abs()).max(1e-300);
    let res = |f: f64| if volume == f { 0.0 } else { (volume - f).abs() / scale };
    Ok(GreenReport {
        volume,
        flux_normal,
        flux_dunkl,
        scale,
        residual_normal: res(flux_normal),
        residual_dunkl: res(flux_dunkl),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GradientBoundReport {
    /// Sampled sup of `|u|` on `∪_σ Γ_b^η(σx⁰)`.
    pub wide_sup: f64,
    /// `max y|∇u|` over the inner grid of `Γ_a^h(x⁰)`.
    pub max_scaled_gradient: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GradientGrid {
    pub levels: usize,
    pub per_level: usize,
}

impl Default for GradientGrid {
    fn default() -> Self {
        GradientGrid { levels: 10, per_level: 16 }
    }
}

fn cone_grid(x: &[f64], a: f64, h: f64, grid: GradientGrid) -> Vec<(Vec<f64>, f64)> {
    let mut out = Vec::new();
    for k in 0..grid.levels {
        let y = h * 0.5f64.powi(k as i32) * 0.999;
        let n = grid.per_level.max(1);
        for i in 0..n {
            let s = -1.0 + (2.0 * i as f64 + 1.0) / n as f64;
            let mut t = x.to_vec();
            t[0] += a * y * s * 0.999;
            out.push((t, y));
        }
    }
    out
}

pub fn gradient_bound_probe(
    u: &dyn HarmonicField,
    x0: &[f64],
    (a, b): (f64, f64),
    (h, eta): (f64, f64),
    grid: GradientGrid,
) -> Result<GradientBoundReport> {
    if !(0.0 < a && a < b && 0.0 < h && h < eta) {
        return Err(Error::Domain(format!("need 0 < a < b and 0 < h < eta, got a={a}, b={b}, h={h}, eta={eta}")));
    }
    let wide_grid = GradientGrid { levels: grid.levels + 2, per_level: 2 * grid.per_level };
    let mut wide_sup = 0.0f64;
    for s in 0..(1usize << x0.len()) {
        let sx: Vec<f64> = x0.iter().enumerate().map(|(j, v)| if s >> j & 1 == 1 { -v } else { *v }).collect();
        for (t, y) in cone_grid(&sx, b, eta, wide_grid) {
            wide_sup = wide_sup.max(u.value(&t, y)?.abs());
        }
    }
    if wide_sup > 1.0 + 1e-9 {
        return Err(Error::Validation(format!("precondition violated: sup |u| = {wide_sup} exceeds 1 on the wide cone")));
    }
    let pts = cone_grid(x0, a, h, grid);
    let vals: Vec<Result<f64>> = pts
        .par_iter()
        .map(|(t, y)| {
            let j = u.jet(t, *y)?;
            Ok(y * j.grad_norm2().sqrt())
        })
        .collect();
    let mut max_scaled_gradient = 0.0f64;
    for v in vals {
        max_scaled_gradient = max_scaled_gradient.max(v?);
    }
    Ok(GradientBoundReport { wide_sup, max_scaled_gradient, samples: pts.len() })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaxPrincipleReport {
    pub interior_max: f64,
    pub boundary_max: f64,
    pub holds: bool,
}

/// `max |u|` inside `[-R, R] × [y₀, y₁]` against the boundary, d = 1.
pub fn max_principle_check(u: &dyn HarmonicField, radius: f64, y0: f64, y1: f64, n: usize) -> Result<MaxPrincipleReport> {
    if u.dim() != 1 {
        return Err(Error::Dimension { expected: 1, got: u.dim() });
    }
    if !(y0 > 0.0 && y1 > y0 && radius > 0.0 && n >= 2) {
        return Err(Error::Domain("box needs 0 < y0 < y1, R > 0 and n ≥ 2".into()));
    }
    let xs: Vec<f64> = (0..=n).map(|i| -radius + 2.0 * radius * i as f64 / n as f64).collect();
    let ys: Vec<f64> = (0..=n).map(|i| y0 + (y1 - y0) * i as f64 / n as f64).collect();
    let (mut interior_max, mut boundary_max) = (0.0f64, 0.0f64);
    for (i, x) in xs.iter().enumerate() {
        for (k, y) in ys.iter().enumerate() {
            let v = u.value(&[*x], *y)?.abs();
            if i == 0 || i == n || k == 0 || k == n {
                boundary_max = boundary_max.max(v);
            } else {
                interior_max = interior_max.max(v);
            }
        }
    }
    Ok(MaxPrincipleReport { interior_max, boundary_max, holds: interior_max <= boundary_max + 1e-6 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PolyField;
    use crate::poly::rat;

    #[test]
    fn green_closed_forms() {
        let lam = [rat(1, 2)];
        let u = Poly::parse("x*y + y^3", 1, true).unwrap();
        let r = green_residual(&lam, &u, &u, 1.0, 0.5, 1.5).unwrap();
        assert_eq!(r.residual(), 0.0);
        // v = 1, u = y²: volume ∫∫ 2 |x| dx dy = 2·1·1 = 2 and flux 2y|_{0.5}^{1.5}·1 = 2.
        let r = green_residual(&lam, &Poly::parse("y^2", 1, true).unwrap(), &Poly::parse("1", 1, true).unwrap(), 1.0, 0.5, 1.5).unwrap();
        assert!((r.volume - 2.0).abs() < 1e-14 && (r.flux_normal - 2.0).abs() < 1e-14, "{r:?}");
        let r = green_residual(
            &lam,
            &Poly::parse("x^3*y + x*y^2 + x^2", 1, true).unwrap(),
            &Poly::parse("x*y^2 - y + x^4", 1, true).unwrap(),
            1.3,
            0.2,
            0.9,
        )
        .unwrap();
        assert!(r.residual() < 1e-12, "{r:?}");
    }

    #[test]
    fn polynomial_limits() {
        let u = PolyField::parse("x*y", vec![rat(1, 2)]).unwrap();
        let cone = ConeSpec::new(vec![0.7], 1.0, 1.0).unwrap();
        let r = nt_limit_probe(&u, &cone, &NtOptions::default(), 3).unwrap();
        assert!(r.bounded && r.limit_exists);
        assert!(r.limit_value.unwrap().abs() < 1e-3);
        let grid = vec![vec![0.5], vec![0.3]];
        assert!(matches!(fatou_table(&u, &grid, 1.0, 1.0, &FatouOptions::default()), Err(Error::Validation(_))));
        assert!(matches!(fatou_table(&u, &[], 1.0, 1.0, &FatouOptions::default()), Err(Error::Validation(_))));
    }
}
