//! Deterministic quadrature: Gauss–Jacobi rules, the measures `dm_λ`,
//! tensor and sphere rules, and an adaptive Gauss–Kronrod integrator.
//!
//! Every reduction goes through [`pairwise_sum`] in node order, so results do
//! not depend on thread scheduling.

use crate::error::{domain, Error, Result};
use crate::special::{ln_gamma, dm_normalizer};
use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Which measure a rule integrates against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum MeasureTag {
    /// Lebesgue measure on `[a, b]`.
    Lebesgue { a: f64, b: f64 },
    /// `(b - x)^alpha (x - a)^beta dx` on `[a, b]`.
    Jacobi { alpha: f64, beta: f64, a: f64, b: f64 },
    /// `c_λ (1+θ)(1-θ²)^{λ-1} dθ` on `[-1, 1]`, a probability measure.
    DmLambda { lambda: f64 },
    /// Normalized `∏|t_j|^{2λ_j}` surface measure on the unit sphere.
    SphereZ2 { lambda: Vec<f64> },
    /// Tensor product of tagged factors.
    Product(Vec<MeasureTag>),
}

/// One-dimensional rule: `∫ f dμ ≈ Σ w_i f(x_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule1d {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub exactness_degree: usize,
    pub measure: MeasureTag,
}

/// Rule over points in `ℝ^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct RuleNd {
    pub points: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
    pub exactness_degree: usize,
    pub measure: MeasureTag,
}

/// Value with an error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

/// Pairwise summation in the given order.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 8 {
        return v.iter().fold(0.0, |acc, x| acc + x);
    }
    let mid = v.len() / 2;
    pairwise_sum(&v[..mid]) + pairwise_sum(&v[mid..])
}

fn check_finite(node: &[f64], value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Poisoned { node: node.to_vec(), value })
    }
}

impl Rule1d {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        pairwise_sum(&self.weights)
    }

    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> Result<f64> {
        let mut terms = Vec::with_capacity(self.nodes.len());
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            terms.push(w * check_finite(&[x], f(x))?);
        }
        Ok(pairwise_sum(&terms))
    }

    /// Affine image of a rule on `[-1, 1]` onto `[a, b]`, with the weights
    /// rescaled by `scale`.
    fn mapped(&self, a: f64, b: f64, scale: f64, measure: MeasureTag) -> Rule1d {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        Rule1d {
            nodes: self.nodes.iter().map(|x| mid + half * x).collect(),
            weights: self.weights.iter().map(|w| w * scale).collect(),
            exactness_degree: self.exactness_degree,
            measure,
        }
    }
}

impl RuleNd {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        pairwise_sum(&self.weights)
    }

    pub fn integrate(&self, mut f: impl FnMut(&[f64]) -> f64) -> Result<f64> {
        let mut terms = Vec::with_capacity(self.points.len());
        for (p, &w) in self.points.iter().zip(&self.weights) {
            terms.push(w * check_finite(p, f(p))?);
        }
        Ok(pairwise_sum(&terms))
    }
}

fn jacobi_recurrence(n: usize, alpha: f64, beta: f64) -> (Vec<f64>, Vec<f64>) {
    let ab = alpha + beta;
    let mut a = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    for k in 0..n {
        let kf = k as f64;
        let s = 2.0 * kf + ab;
        a.push(if k == 0 {
            (beta - alpha) / (ab + 2.0)
        } else {
            (beta * beta - alpha * alpha) / (s * (s + 2.0))
        });
        // b[k] couples p_{k-1} and p_k; b[0] is unused.
        b.push(if k == 0 {
            0.0
        } else if k == 1 {
            4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab).powi(2) * (3.0 + ab))
        } else {
            4.0 * kf * (kf + alpha) * (kf + beta) * (kf + ab) / (s * s * (s + 1.0) * (s - 1.0))
        });
    }
    (a, b)
}

/// Orthonormal values `p̂_0..p̂_n` at `x` and the derivative of `p̂_n`.
fn orthonormal_values(x: f64, a: &[f64], b: &[f64], bn: f64, mu0: f64) -> (f64, f64, f64) {
    let n = a.len();
    let mut p_prev = 0.0;
    let mut dp_prev = 0.0;
    let mut p = 1.0 / mu0.sqrt();
    let mut dp = 0.0;
    let mut sum_sq = p * p;
    for k in 0..n {
        let next_b = if k + 1 < n { b[k + 1] } else { bn };
        let sb = next_b.sqrt();
        let sb_prev = if k == 0 { 0.0 } else { b[k].sqrt() };
        let p_next = ((x - a[k]) * p - sb_prev * p_prev) / sb;
        let dp_next = (p + (x - a[k]) * dp - sb_prev * dp_prev) / sb;
        p_prev = p;
        dp_prev = dp;
        p = p_next;
        dp = dp_next;
        if k + 1 < n {
            sum_sq += p * p;
        }
    }
    (p, dp, sum_sq)
}

/// Gauss–Jacobi rule for `(1-x)^alpha (1+x)^beta` on `[-1, 1]`.
///
/// Nodes come from the Golub–Welsch eigenproblem, are polished by Newton
/// steps on the orthonormal recurrence, and the weights are the Christoffel
/// numbers `1 / Σ_{k<n} p̂_k(x_i)²`.
pub fn gauss_jacobi(n: usize, alpha: f64, beta: f64) -> Result<Rule1d> {
    if n == 0 {
        return domain("quadrature rule needs at least one node");
    }
    if !(alpha > -1.0 && beta > -1.0) {
        return domain(format!("Jacobi exponents must exceed -1 (alpha={alpha}, beta={beta})"));
    }
    let mu0 = ((alpha + beta + 1.0) * std::f64::consts::LN_2 + ln_gamma(alpha + 1.0)
        + ln_gamma(beta + 1.0)
        - ln_gamma(alpha + beta + 2.0))
    .exp();
    let (a, b) = jacobi_recurrence(n + 1, alpha, beta);
    let (a, bn) = (a[..n].to_vec(), b[n]);
    let b = b[..n].to_vec();
    let mut jm = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        jm[(i, i)] = a[i];
        if i + 1 < n {
            let off = b[i + 1].sqrt();
            jm[(i, i + 1)] = off;
            jm[(i + 1, i)] = off;
        }
    }
    let eig = SymmetricEigen::new(jm);
    let mut nodes: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    nodes.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let mut weights = Vec::with_capacity(n);
    for x in nodes.iter_mut() {
        for _ in 0..3 {
            let (p, dp, _) = orthonormal_values(*x, &a, &b, bn, mu0);
            if dp == 0.0 {
                break;
            }
            let step = p / dp;
            let cand = *x - step;
            if !(cand > -1.0 && cand < 1.0) || step.abs() > 1e-6 {
                break;
            }
            *x = cand;
            if step.abs() < 1e-17 {
                break;
            }
        }
        let (_, _, sum_sq) = orthonormal_values(*x, &a, &b, bn, mu0);
        weights.push(1.0 / sum_sq);
    }
    Ok(Rule1d {
        nodes,
        weights,
        exactness_degree: 2 * n - 1,
        measure: MeasureTag::Jacobi { alpha, beta, a: -1.0, b: 1.0 },
    })
}

/// Gauss–Legendre rule on `[a, b]`.
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Result<Rule1d> {
    let base = gauss_jacobi(n, 0.0, 0.0)?;
    Ok(base.mapped(a, b, 0.5 * (b - a), MeasureTag::Lebesgue { a, b }))
}

/// Gauss–Jacobi rule for `(b - x)^alpha (x - a)^beta dx` on `[a, b]`.
pub fn gauss_jacobi_on(n: usize, alpha: f64, beta: f64, a: f64, b: f64) -> Result<Rule1d> {
    let base = gauss_jacobi(n, alpha, beta)?;
    let scale = (0.5 * (b - a)).powf(alpha + beta + 1.0);
    Ok(base.mapped(a, b, scale, MeasureTag::Jacobi { alpha, beta, a, b }))
}

/// Rule for `dm_λ(θ) = c_λ (1+θ)(1-θ²)^{λ-1} dθ`; `λ = 0` is the Dirac mass at 1.
pub fn dm_lambda_rule(lambda: f64, n: usize) -> Result<Rule1d> {
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return domain(format!("multiplicity must be a finite nonnegative number, got {lambda}"));
    }
    if lambda == 0.0 {
        return Ok(Rule1d {
            nodes: vec![1.0],
            weights: vec![1.0],
            exactness_degree: usize::MAX,
            measure: MeasureTag::DmLambda { lambda },
        });
    }
    let base = gauss_jacobi(n, lambda - 1.0, lambda)?;
    let c = dm_normalizer(lambda);
    Ok(Rule1d {
        nodes: base.nodes,
        weights: base.weights.iter().map(|w| w * c).collect(),
        exactness_degree: base.exactness_degree,
        measure: MeasureTag::DmLambda { lambda },
    })
}

/// Tensor product of one-dimensional rules, first factor varying slowest.
pub fn tensor(rules: &[Rule1d]) -> RuleNd {
    let mut points: Vec<Vec<f64>> = vec![Vec::new()];
    let mut weights = vec![1.0];
    for r in rules {
        let mut np = Vec::with_capacity(points.len() * r.len());
        let mut nw = Vec::with_capacity(points.len() * r.len());
        for (p, w) in points.iter().zip(&weights) {
            for (&x, &wx) in r.nodes.iter().zip(&r.weights) {
                let mut q = p.clone();
                q.push(x);
                np.push(q);
                nw.push(w * wx);
            }
        }
        points = np;
        weights = nw;
    }
    RuleNd {
        points,
        weights,
        exactness_degree: rules.iter().map(|r| r.exactness_degree).min().unwrap_or(usize::MAX),
        measure: MeasureTag::Product(rules.iter().map(|r| r.measure.clone()).collect()),
    }
}

/// Integrate with an `n`-point and a `2n`-point member of a rule family; the
/// finer value is returned and the difference is the error estimate.
pub fn integrate_refined(
    family: impl Fn(usize) -> Result<Rule1d>,
    n: usize,
    mut f: impl FnMut(f64) -> f64,
) -> Result<Estimate> {
    let coarse = family(n)?.integrate(&mut f)?;
    let fine = family(2 * n)?.integrate(&mut f)?;
    Ok(Estimate { value: fine, error: (fine - coarse).abs() })
}

/// Rule on the unit sphere `S^{n-1}` for the normalized weight
/// `d ∏|t_j|^{2λ_j} dσ(t)`.
///
/// On each orthant the substitution `u_j = t_j²` turns the weighted surface
/// measure into a Dirichlet law with parameters `λ_j + 1/2`, built here as a
/// conical product of Gauss–Jacobi rules with `m` nodes per level. Results are
/// exact for polynomials whose even part has degree `< 4m` in each level.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereRule {
    pub rule: RuleNd,
    /// `∫_{S^{n-1}} ∏|t_j|^{2λ_j} dσ`, the inverse of the normalizing constant.
    pub total_mass: f64,
}

pub fn sphere_rule_z2(lambda: &[f64], m: usize) -> Result<SphereRule> {
    let n = lambda.len();
    if n == 0 {
        return domain("sphere rule needs dimension at least one");
    }
    if lambda.iter().any(|l| !(*l >= 0.0) || !l.is_finite()) {
        return domain("multiplicities must be finite and nonnegative");
    }
    let ln_total = std::f64::consts::LN_2
        + lambda.iter().map(|l| ln_gamma(l + 0.5)).sum::<f64>()
        - ln_gamma(lambda.iter().sum::<f64>() + n as f64 / 2.0);
    let total_mass = ln_total.exp();
    // Dirichlet nodes on the simplex via the conical product.
    let c: Vec<f64> = lambda.iter().map(|l| l + 0.5).collect();
    let mut simplex: Vec<(Vec<f64>, f64)> = vec![(vec![1.0], 1.0)];
    for k in 1..n {
        let prev: f64 = c[..k].iter().sum();
        // w ~ Beta(c_k, prev) on [0,1]: density w^{c_k-1}(1-w)^{prev-1}.
        let r = gauss_jacobi_on(m, prev - 1.0, c[k] - 1.0, 0.0, 1.0)?;
        let mass = r.total_mass();
        let mut next = Vec::with_capacity(simplex.len() * m);
        for (u, wu) in &simplex {
            for (&w, &ww) in r.nodes.iter().zip(&r.weights) {
                let mut v: Vec<f64> = u.iter().map(|x| x * (1.0 - w)).collect();
                v.push(w);
                next.push((v, wu * ww / mass));
            }
        }
        simplex = next;
    }
    let signs = 1usize << n;
    let mut points = Vec::with_capacity(simplex.len() * signs);
    let mut weights = Vec::with_capacity(simplex.len() * signs);
    for (u, wu) in &simplex {
        for s in 0..signs {
            let p: Vec<f64> = u
                .iter()
                .enumerate()
                .map(|(j, x)| if s >> j & 1 == 1 { -x.sqrt() } else { x.sqrt() })
                .collect();
            points.push(p);
            weights.push(wu / signs as f64);
        }
    }
    Ok(SphereRule {
        rule: RuleNd {
            points,
            weights,
            exactness_degree: 2 * m - 1,
            measure: MeasureTag::SphereZ2 { lambda: lambda.to_vec() },
        },
        total_mass,
    })
}

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Options for [`adaptive`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptiveOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_depth: u32,
    pub max_evals: usize,
}

impl Default for AdaptiveOptions {
    fn default() -> Self {
        AdaptiveOptions { abs_tol: 1e-300, rel_tol: 1e-11, max_depth: 60, max_evals: 2_000_000 }
    }
}

/// Result of an adaptive integration of an `N`-vector integrand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Adaptive<const N: usize> {
    pub value: [f64; N],
    pub error: f64,
    pub evals: usize,
    pub converged: bool,
}

struct Queued<const N: usize> {
    a: f64,
    b: f64,
    depth: u32,
    panel: Panel<N>,
}

impl<const N: usize> PartialEq for Queued<N> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<const N: usize> Eq for Queued<N> {}

impl<const N: usize> PartialOrd for Queued<N> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<const N: usize> Ord for Queued<N> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.panel
            .error
            .total_cmp(&other.panel.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

struct Panel<const N: usize> {
    kronrod: [f64; N],
    error: f64,
    l1: f64,
}

fn kronrod_panel<const N: usize>(
    f: &mut impl FnMut(f64) -> [f64; N],
    a: f64,
    b: f64,
    evals: &mut usize,
) -> Result<Panel<N>> {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut k = [0.0; N];
    let mut g = [0.0; N];
    let mut l1 = 0.0;
    let mut eval = |x: f64, evals: &mut usize| -> Result<[f64; N]> {
        *evals += 1;
        let v = f(x);
        for c in v.iter() {
            check_finite(&[x], *c)?;
        }
        Ok(v)
    };
    let fc = eval(mid, evals)?;
    for c in 0..N {
        k[c] = WGK[7] * fc[c];
        g[c] = WG[3] * fc[c];
        l1 += WGK[7] * fc[c].abs();
    }
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = eval(mid - dx, evals)?;
        let f2 = eval(mid + dx, evals)?;
        for c in 0..N {
            k[c] += WGK[j] * (f1[c] + f2[c]);
            l1 += WGK[j] * (f1[c].abs() + f2[c].abs());
            if j % 2 == 1 {
                g[c] += WG[j / 2] * (f1[c] + f2[c]);
            }
        }
    }
    let mut error: f64 = 0.0;
    for c in 0..N {
        k[c] *= half;
        error = error.max((k[c] - g[c] * half).abs());
    }
    Ok(Panel { kronrod: k, error, l1: l1 * half.abs() / N as f64 })
}

/// Adaptive Gauss–Kronrod (7/15) integration of a vector-valued integrand
/// over `[p_0, p_1] ∪ [p_1, p_2] ∪ ...` for increasing breakpoints `p`.
///
/// Globally adaptive: the panel with the largest error estimate is bisected
/// until the summed estimate falls below `max(abs_tol, rel_tol · ∫|f|)`.
/// Ties are broken by position and the final sum runs over panels in
/// left-to-right order, so the result is reproducible.
pub fn adaptive<const N: usize>(
    mut f: impl FnMut(f64) -> [f64; N],
    breakpoints: &[f64],
    opts: AdaptiveOptions,
) -> Result<Adaptive<N>> {
    let mut pts: Vec<f64> = breakpoints.iter().copied().filter(|x| x.is_finite()).collect();
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();
    if pts.len() < 2 {
        return Ok(Adaptive { value: [0.0; N], error: 0.0, evals: 0, converged: true });
    }
    let mut evals = 0;
    let mut heap: BinaryHeap<Queued<N>> = BinaryHeap::new();
    let mut done: Vec<Queued<N>> = Vec::new();
    let mut err = 0.0;
    let mut l1 = 0.0;
    for w in pts.windows(2) {
        let p = kronrod_panel(&mut f, w[0], w[1], &mut evals)?;
        err += p.error;
        l1 += p.l1;
        heap.push(Queued { a: w[0], b: w[1], depth: 0, panel: p });
    }
    let mut converged = true;
    loop {
        let tol = opts.abs_tol.max(opts.rel_tol * l1);
        if err <= tol {
            break;
        }
        let Some(q) = heap.pop() else {
            converged = false;
            break;
        };
        let m = 0.5 * (q.a + q.b);
        if q.depth >= opts.max_depth || !(m > q.a && m < q.b) {
            done.push(q);
            continue;
        }
        if evals >= opts.max_evals {
            heap.push(q);
            converged = false;
            break;
        }
        let left = kronrod_panel(&mut f, q.a, m, &mut evals)?;
        let right = kronrod_panel(&mut f, m, q.b, &mut evals)?;
        err += left.error + right.error - q.panel.error;
        l1 += left.l1 + right.l1 - q.panel.l1;
        heap.push(Queued { a: q.a, b: m, depth: q.depth + 1, panel: left });
        heap.push(Queued { a: m, b: q.b, depth: q.depth + 1, panel: right });
    }
    let mut panels: Vec<Queued<N>> = heap.into_vec();
    panels.extend(done);
    panels.sort_by(|x, y| x.a.partial_cmp(&y.a).unwrap());
    let mut value = [0.0; N];
    let mut comp = vec![0.0; panels.len()];
    for c in 0..N {
        for (k, p) in panels.iter().enumerate() {
            comp[k] = p.panel.kronrod[c];
        }
        value[c] = pairwise_sum(&comp);
    }
    let error = pairwise_sum(&panels.iter().map(|p| p.panel.error).collect::<Vec<_>>());
    Ok(Adaptive { value, error, evals, converged })
}

/// Scalar convenience wrapper around [`adaptive`].
pub fn adaptive_scalar(
    mut f: impl FnMut(f64) -> f64,
    breakpoints: &[f64],
    opts: AdaptiveOptions,
) -> Result<Estimate> {
    let r = adaptive(|x| [f(x)], breakpoints, opts)?;
    if !r.converged {
        return Err(Error::NumericFailure {
            msg: "adaptive quadrature did not reach its tolerance".into(),
            last: r.value[0],
            previous: r.value[0] - r.error,
        });
    }
    Ok(Estimate { value: r.value[0], error: r.error })
}

/// `∫_a^∞ f` through `t = a + (1-s)/s`.
pub fn semi_infinite<const N: usize>(
    mut f: impl FnMut(f64) -> [f64; N],
    a: f64,
    opts: AdaptiveOptions,
) -> Result<Adaptive<N>> {
    adaptive(
        |s| {
            let t = a + (1.0 - s) / s;
            let mut v = f(t);
            let j = 1.0 / (s * s);
            for c in v.iter_mut() {
                *c = if *c == 0.0 { 0.0 } else { *c * j };
            }
            v
        },
        &[0.0, 1.0],
        opts,
    )
}

/// A point of `[-1, 1]` with its distances to the endpoints, computed
/// without cancellation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DmPoint {
    pub theta: f64,
    pub one_minus: f64,
    pub one_plus: f64,
}

/// Adaptive `∫_{[lo,hi]} F(θ) dm_λ(θ)` for `[lo, hi] ⊂ [-1, 1]`.
///
/// The endpoint factors are removed by the substitutions `1-θ = v^{1/λ}`
/// (for `λ < 1`) and `1+θ = w^{1/(λ+1)}`. `near_one` and `near_minus_one`
/// are optional scales (distances from the endpoints) where `F` varies
/// rapidly; they become breakpoints.
pub fn dm_adaptive<const N: usize>(
    lambda: f64,
    lo: f64,
    hi: f64,
    mut f: impl FnMut(DmPoint) -> [f64; N],
    near_one: &[f64],
    near_minus_one: &[f64],
    opts: AdaptiveOptions,
) -> Result<Adaptive<N>> {
    let lo = lo.max(-1.0);
    let hi = hi.min(1.0);
    let empty = Adaptive { value: [0.0; N], error: 0.0, evals: 0, converged: true };
    if lambda == 0.0 {
        if hi >= 1.0 {
            let v = f(DmPoint { theta: 1.0, one_minus: 0.0, one_plus: 2.0 });
            return Ok(Adaptive { value: v, error: 0.0, evals: 1, converged: true });
        }
        return Ok(empty);
    }
    if !(lambda > 0.0) || hi <= lo {
        return if lambda < 0.0 { domain("multiplicity must be nonnegative") } else { Ok(empty) };
    }
    let c = dm_normalizer(lambda);
    let mut total = empty;
    let acc = |r: Adaptive<N>, total: &mut Adaptive<N>| {
        for k in 0..N {
            total.value[k] += r.value[k];
        }
        total.error += r.error;
        total.evals += r.evals;
        total.converged &= r.converged;
    };
    // θ ∈ [max(lo,0), hi] in the variable s = 1-θ.
    if hi > 0.0 {
        let s0 = 1.0 - hi;
        let s1 = 1.0 - lo.max(0.0);
        let mut bps: Vec<f64> = vec![s0, s1];
        bps.extend(near_one.iter().copied().filter(|s| *s > s0 && *s < s1));
        if lambda < 1.0 {
            let inv = 1.0 / lambda;
            let vb: Vec<f64> = bps.iter().map(|s| s.powf(lambda)).collect();
            let r = adaptive(
                |v| {
                    let s = v.powf(inv);
                    let p = DmPoint { theta: 1.0 - s, one_minus: s, one_plus: 2.0 - s };
                    let g = c / lambda * (2.0 - s).powf(lambda);
                    scale_arr(f(p), g)
                },
                &vb,
                opts,
            )?;
            acc(r, &mut total);
        } else {
            let r = adaptive(
                |s| {
                    let p = DmPoint { theta: 1.0 - s, one_minus: s, one_plus: 2.0 - s };
                    let g = c * s.powf(lambda - 1.0) * (2.0 - s).powf(lambda);
                    scale_arr(f(p), g)
                },
                &bps,
                opts,
            )?;
            acc(r, &mut total);
        }
    }
    // θ ∈ [lo, min(hi,0)] in the variable q = 1+θ, w = q^{λ+1}.
    if lo < 0.0 {
        let q0 = 1.0 + lo;
        let q1 = 1.0 + hi.min(0.0);
        let e = lambda + 1.0;
        let inv = 1.0 / e;
        let mut bps: Vec<f64> = vec![q0, q1];
        bps.extend(near_minus_one.iter().copied().filter(|q| *q > q0 && *q < q1));
        let wb: Vec<f64> = bps.iter().map(|q| q.powf(e)).collect();
        let r = adaptive(
            |w| {
                let q = w.powf(inv);
                let p = DmPoint { theta: q - 1.0, one_minus: 2.0 - q, one_plus: q };
                let g = c / e * (2.0 - q).powf(lambda - 1.0);
                scale_arr(f(p), g)
            },
            &wb,
            opts,
        )?;
        acc(r, &mut total);
    }
    Ok(total)
}

fn scale_arr<const N: usize>(mut v: [f64; N], g: f64) -> [f64; N] {
    for c in v.iter_mut() {
        *c = if *c == 0.0 { 0.0 } else { *c * g };
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_exact_on_x6() {
        let r = gauss_legendre(8, -1.0, 1.0).unwrap();
        let v = r.integrate(|x| x.powi(6)).unwrap();
        assert!((v - 2.0 / 7.0).abs() < 1e-14);
    }

    #[test]
    fn jacobi_weights_sum_to_moment() {
        for &(a, b) in &[(0.0, 0.0), (-0.5, 0.5), (-0.75, 0.25), (1.0, 2.0), (3.5, -0.2)] {
            let r = gauss_jacobi(40, a, b).unwrap();
            let mu0 = ((a + b + 1.0) * std::f64::consts::LN_2 + ln_gamma(a + 1.0) + ln_gamma(b + 1.0)
                - ln_gamma(a + b + 2.0))
            .exp();
            assert!((r.total_mass() - mu0).abs() < 1e-13 * mu0, "{a} {b}");
            assert!(r.weights.iter().all(|w| *w > 0.0));
        }
    }

    #[test]
    fn chebyshev_nodes() {
        let r = gauss_jacobi(5, -0.5, -0.5).unwrap();
        for (i, x) in r.nodes.iter().enumerate() {
            let expect = -((2 * i + 1) as f64 * std::f64::consts::PI / 10.0).cos();
            assert!((x - expect).abs() < 1e-14);
        }
    }

    #[test]
    fn dirac_degeneration() {
        let r = dm_lambda_rule(0.0, 64).unwrap();
        assert_eq!(r.nodes, vec![1.0]);
        assert_eq!(r.weights, vec![1.0]);
    }

    #[test]
    fn negative_multiplicity_rejected() {
        assert!(matches!(dm_lambda_rule(-0.1, 8), Err(Error::Domain(_))));
    }

    #[test]
    fn poisoned_node_reported() {
        let r = gauss_legendre(4, -1.0, 1.0).unwrap();
        let e = r.integrate(|x| if x > 0.5 { f64::NAN } else { 1.0 }).unwrap_err();
        assert!(matches!(e, Error::Poisoned { .. }));
    }

    #[test]
    fn adaptive_handles_endpoint_singularity() {
        let r = adaptive_scalar(|x| x.ln(), &[0.0, 1.0], AdaptiveOptions::default()).unwrap();
        assert!((r.value + 1.0).abs() < 1e-10);
        let opts = AdaptiveOptions { rel_tol: 1e-8, ..Default::default() };
        let r = adaptive_scalar(|x| 1.0 / x.sqrt(), &[0.0, 1.0], opts).unwrap();
        assert!((r.value - 2.0).abs() < 1e-7);
    }

    #[test]
    fn dm_adaptive_matches_fixed_rule() {
        for &l in &[0.25, 0.5, 1.0, 2.5] {
            let fixed = dm_lambda_rule(l, 40).unwrap().integrate(|t| (2.0 * t).exp()).unwrap();
            let ad = dm_adaptive(l, -1.0, 1.0, |p| [(2.0 * p.theta).exp()], &[], &[], AdaptiveOptions::default())
                .unwrap();
            assert!((fixed - ad.value[0]).abs() < 1e-11, "{l}");
        }
    }

    #[test]
    fn sphere_rule_mass_and_moments() {
        let s = sphere_rule_z2(&[0.5, 0.0], 8).unwrap();
        assert!((s.rule.total_mass() - 1.0).abs() < 1e-14);
        // ∫_{S^1} |t1|^{2a}|t2|^{2b} dσ = 2Γ(a+1/2)Γ(b+1/2)/Γ(a+b+1).
        let expect = 2.0 * (ln_gamma(1.0) + ln_gamma(0.5) - ln_gamma(1.5)).exp();
        assert!((s.total_mass - expect).abs() < 1e-13);
        // E[t1²] = (λ1+1/2)/(|λ|+n/2).
        let m2 = s.rule.integrate(|p| p[0] * p[0]).unwrap();
        assert!((m2 - 1.0 / 1.5).abs() < 1e-14);
    }
}
