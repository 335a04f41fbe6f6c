//! Root systems, multiplicity functions, reflection groups, the weight
//! `W_κ` and weighted ball measures.

use crate::error::{Error, Result};
use crate::poly::{rat_int, rat_to_f64, reflection_matrix, Rat, RatMatrix};
use crate::quadrature::{adaptive, AdaptiveOptions};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashSet, VecDeque};

pub type Matrix = Vec<Vec<f64>>;

/// Description of a root system to build.
#[derive(Debug, Clone, PartialEq)]
pub enum RootSystemKind {
    /// `±√2 e_j` with multiplicity `λ_j` on the j-th pair.
    Z2d { lambda: Vec<Rat> },
    /// `±(e_i - e_j)` in `ℝ^{rank+1}` with one multiplicity.
    A { rank: usize, kappa: Rat },
    /// `±√2 e_j` (multiplicity `kappa0`) and `±e_i ± e_j` (multiplicity `kappa1`).
    B { dim: usize, kappa0: Rat, kappa1: Rat },
    /// Rational root directions, rescaled to `⟨α,α⟩ = 2`, one multiplicity per root.
    Custom { roots: Vec<Vec<Rat>>, kappa: Vec<Rat> },
    /// Real root directions without an exact representation.
    CustomReal { roots: Vec<Vec<f64>>, kappa: Vec<f64> },
}

/// Per-orbit multiplicities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Multiplicity {
    pub values: Vec<f64>,
    #[serde(skip)]
    pub exact: Option<Vec<Rat>>,
    /// `|κ| = Σ_{α∈R₊} κ(α)`.
    pub total: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Root {
    /// Normalized root, `⟨α,α⟩ = 2`.
    pub alpha: Vec<f64>,
    /// Rational vector parallel to `alpha`, when available.
    pub beta: Option<Vec<Rat>>,
    pub orbit: usize,
}

/// Cached data for one positive root.
#[derive(Debug, Clone, PartialEq)]
pub struct PositiveRoot {
    pub index: usize,
    pub alpha: Vec<f64>,
    pub kappa: f64,
    pub kappa_exact: Option<Rat>,
    pub beta: Option<Vec<Rat>>,
    /// `⟨β,β⟩`.
    pub beta_norm2: Option<Rat>,
    pub reflection: Matrix,
    pub reflection_exact: Option<RatMatrix>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootSystemData {
    pub dim: usize,
    pub roots: Vec<Root>,
    pub positive: Vec<PositiveRoot>,
    pub multiplicity: Multiplicity,
    pub group: Vec<Matrix>,
    pub group_exact: Option<Vec<RatMatrix>>,
    pub label: String,
}

const DEFAULT_GROUP_CAP: usize = 1_000_000;

fn unit(d: usize, j: usize, c: i64) -> Vec<Rat> {
    let mut v = vec![Rat::zero(); d];
    v[j] = rat_int(c);
    v
}

fn check_nonneg(k: &Rat) -> Result<()> {
    if k.is_negative() {
        return Err(Error::Domain(format!("multiplicity must be nonnegative, got {k}")));
    }
    Ok(())
}

fn norm2_rat(v: &[Rat]) -> Rat {
    v.iter().fold(Rat::zero(), |a, b| a + b * b)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn mat_vec(m: &Matrix, v: &[f64]) -> Vec<f64> {
    m.iter().map(|r| dot(r, v)).collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

fn rat_mat_mul(a: &RatMatrix, b: &RatMatrix) -> RatMatrix {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).fold(Rat::zero(), |s, k| s + &a[i][k] * &b[k][j])).collect())
        .collect()
}

pub fn transpose(m: &Matrix) -> Matrix {
    let n = m.len();
    (0..n).map(|i| (0..n).map(|j| m[j][i]).collect()).collect()
}

/// `I - ααᵀ` for `⟨α,α⟩ = 2`.
pub fn reflection_f64(alpha: &[f64]) -> Matrix {
    let n2 = dot(alpha, alpha);
    let d = alpha.len();
    (0..d)
        .map(|i| (0..d).map(|j| (if i == j { 1.0 } else { 0.0 }) - 2.0 * alpha[i] * alpha[j] / n2).collect())
        .collect()
}

/// `σ_α x = x - ⟨α,x⟩α`.
pub fn reflect_point(alpha: &[f64], x: &[f64]) -> Vec<f64> {
    let c = 2.0 * dot(alpha, x) / dot(alpha, alpha);
    x.iter().zip(alpha).map(|(a, b)| a - c * b).collect()
}

fn key(m: &Matrix) -> Vec<i64> {
    m.iter().flatten().map(|v| (v * 1e9).round() as i64).collect()
}

fn lex_positive(v: &[f64]) -> bool {
    for x in v {
        if x.abs() > 1e-12 {
            return *x > 0.0;
        }
    }
    false
}

fn rat_vec_to_f64(v: &[Rat]) -> Vec<f64> {
    v.iter().map(rat_to_f64).collect()
}

/// Closure of the reflections under composition, sorted canonically.
pub fn generate_group(roots: &[Vec<f64>], cap: usize) -> Result<Vec<Matrix>> {
    let d = roots.first().map(|r| r.len()).unwrap_or(0);
    let id: Matrix = (0..d).map(|i| (0..d).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    let gens: Vec<Matrix> = roots.iter().map(|a| reflection_f64(a)).collect();
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    seen.insert(key(&id));
    queue.push_back(id);
    while let Some(g) = queue.pop_front() {
        for s in &gens {
            let h = mat_mul(s, &g);
            if seen.insert(key(&h)) {
                if seen.len() > cap {
                    return Err(Error::Validation(format!(
                        "group closure exceeded {cap} elements: not a finite reflection system"
                    )));
                }
                queue.push_back(h);
            }
        }
        out.push(g);
    }
    out.sort_by_key(key);
    Ok(out)
}

fn generate_group_exact(gens: &[RatMatrix], cap: usize) -> Result<Vec<RatMatrix>> {
    let d = gens.first().map(|g| g.len()).unwrap_or(0);
    let id: RatMatrix =
        (0..d).map(|i| (0..d).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect()).collect();
    let mut seen: HashSet<RatMatrix> = HashSet::new();
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    seen.insert(id.clone());
    queue.push_back(id);
    while let Some(g) = queue.pop_front() {
        for s in gens {
            let h = rat_mat_mul(s, &g);
            if seen.insert(h.clone()) {
                if seen.len() > cap {
                    return Err(Error::Validation(format!(
                        "group closure exceeded {cap} elements: not a finite reflection system"
                    )));
                }
                queue.push_back(h);
            }
        }
        out.push(g);
    }
    out.sort_by_key(|m| key(&m.iter().map(|r| rat_vec_to_f64(r)).collect()));
    Ok(out)
}

impl RootSystemData {
    pub fn build(kind: &RootSystemKind) -> Result<RootSystemData> {
        Self::build_with_cap(kind, DEFAULT_GROUP_CAP)
    }

    pub fn build_with_cap(kind: &RootSystemKind, cap: usize) -> Result<RootSystemData> {
        match kind {
            RootSystemKind::Z2d { lambda } => {
                let d = lambda.len();
                if d == 0 {
                    return Err(Error::Domain("dimension must be at least 1".into()));
                }
                let mut dirs = Vec::new();
                let mut kap = Vec::new();
                for (j, l) in lambda.iter().enumerate() {
                    check_nonneg(l)?;
                    dirs.push((unit(d, j, 1), j));
                    dirs.push((unit(d, j, -1), j));
                    kap.push(l.clone());
                }
                let label = format!("Z2^{d}");
                Self::assemble_exact(d, dirs, kap, label, cap)
            }
            RootSystemKind::A { rank, kappa } => {
                check_nonneg(kappa)?;
                if *rank == 0 {
                    return Err(Error::Domain("A-type rank must be at least 1".into()));
                }
                let d = rank + 1;
                let mut dirs = Vec::new();
                for i in 0..d {
                    for j in 0..d {
                        if i != j {
                            let mut v = vec![Rat::zero(); d];
                            v[i] = rat_int(1);
                            v[j] = rat_int(-1);
                            dirs.push((v, 0));
                        }
                    }
                }
                Self::assemble_exact(d, dirs, vec![kappa.clone()], format!("A{rank}"), cap)
            }
            RootSystemKind::B { dim, kappa0, kappa1 } => {
                check_nonneg(kappa0)?;
                check_nonneg(kappa1)?;
                let d = *dim;
                if d == 0 {
                    return Err(Error::Domain("dimension must be at least 1".into()));
                }
                let mut dirs = Vec::new();
                for j in 0..d {
                    dirs.push((unit(d, j, 1), 0));
                    dirs.push((unit(d, j, -1), 0));
                }
                for i in 0..d {
                    for j in (i + 1)..d {
                        for (si, sj) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                            let mut v = vec![Rat::zero(); d];
                            v[i] = rat_int(si);
                            v[j] = rat_int(sj);
                            dirs.push((v, 1));
                        }
                    }
                }
                let mut kap = vec![kappa0.clone()];
                if d > 1 {
                    kap.push(kappa1.clone());
                }
                Self::assemble_exact(d, dirs, kap, format!("B{d}"), cap)
            }
            RootSystemKind::Custom { roots, kappa } => Self::custom_exact(roots, kappa, cap),
            RootSystemKind::CustomReal { roots, kappa } => Self::custom_real(roots, kappa, cap),
        }
    }

    fn custom_exact(roots: &[Vec<Rat>], kappa: &[Rat], cap: usize) -> Result<RootSystemData> {
        if roots.is_empty() {
            return Err(Error::Validation("empty root list".into()));
        }
        if roots.len() != kappa.len() {
            return Err(Error::Validation(format!(
                "{} roots but {} multiplicities",
                roots.len(),
                kappa.len()
            )));
        }
        let d = roots[0].len();
        if d == 0 || roots.iter().any(|r| r.len() != d) {
            return Err(Error::Validation("roots must share one positive dimension".into()));
        }
        for k in kappa {
            check_nonneg(k)?;
        }
        for (i, r) in roots.iter().enumerate() {
            if r.iter().all(|v| v.is_zero()) {
                return Err(Error::Validation(format!("root {i} is zero")));
            }
        }
        // Parallel pairs must be ±; anything else is a non-reduced system.
        for i in 0..roots.len() {
            for j in (i + 1)..roots.len() {
                if let Some(c) = parallel_ratio(&roots[i], &roots[j]) {
                    if c.abs() != Rat::one() {
                        return Err(Error::Validation(format!(
                            "roots {i} and {j} are parallel with ratio {c}: non-reduced systems are not supported"
                        )));
                    }
                    if c.is_one() {
                        return Err(Error::Validation(format!("roots {i} and {j} coincide")));
                    }
                }
            }
        }
        let set: HashSet<Vec<Rat>> = roots.iter().map(|r| normalize_direction(r)).collect();
        for (i, r) in roots.iter().enumerate() {
            let neg: Vec<Rat> = r.iter().map(|v| -v).collect();
            if !set.contains(&normalize_direction(&neg)) {
                return Err(Error::Validation(format!("root {i} has no negative in the list")));
            }
        }
        for (i, a) in roots.iter().enumerate() {
            let s = reflection_matrix(a);
            for (j, b) in roots.iter().enumerate() {
                let img: Vec<Rat> = s.iter().map(|row| row.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)).collect();
                if !set.contains(&normalize_direction(&img)) {
                    return Err(Error::Validation(format!(
                        "reflection in root {i} does not map root {j} into the system"
                    )));
                }
            }
        }
        // Orbits under the generated action, then multiplicity constancy.
        let orbit = orbit_labels(roots.len(), |i, j| {
            let s = reflection_matrix(&roots[i]);
            let img: Vec<Rat> = s.iter().map(|row| row.iter().zip(&roots[j]).fold(Rat::zero(), |acc, (x, y)| acc + x * y)).collect();
            let key = normalize_direction(&img);
            roots.iter().position(|r| normalize_direction(r) == key).unwrap()
        });
        let n_orb = orbit.iter().max().map(|m| m + 1).unwrap_or(0);
        let mut per: Vec<Option<Rat>> = vec![None; n_orb];
        for (i, &o) in orbit.iter().enumerate() {
            match &per[o] {
                None => per[o] = Some(kappa[i].clone()),
                Some(v) if *v != kappa[i] => {
                    return Err(Error::Validation(format!(
                        "multiplicity is not constant on the orbit of root {i}"
                    )))
                }
                _ => {}
            }
        }
        let dirs: Vec<(Vec<Rat>, usize)> = roots.iter().cloned().zip(orbit).collect();
        Self::assemble_exact(d, dirs, per.into_iter().map(|v| v.unwrap()).collect(), format!("custom{d}"), cap)
    }

    fn custom_real(roots: &[Vec<f64>], kappa: &[f64], cap: usize) -> Result<RootSystemData> {
        if roots.is_empty() || roots.len() != kappa.len() {
            return Err(Error::Validation("root and multiplicity lists must be nonempty and aligned".into()));
        }
        let d = roots[0].len();
        if d == 0 || roots.iter().any(|r| r.len() != d) {
            return Err(Error::Validation("roots must share one positive dimension".into()));
        }
        if kappa.iter().any(|k| !(*k >= 0.0)) {
            return Err(Error::Domain("multiplicities must be nonnegative".into()));
        }
        let mut normed = Vec::new();
        for (i, r) in roots.iter().enumerate() {
            let n = dot(r, r).sqrt();
            if !(n > 1e-300) {
                return Err(Error::Validation(format!("root {i} is zero")));
            }
            normed.push(r.iter().map(|v| v * (2.0f64).sqrt() / n).collect::<Vec<f64>>());
        }
        let find = |v: &[f64]| normed.iter().position(|r| r.iter().zip(v).all(|(a, b)| (a - b).abs() < 1e-9));
        for i in 0..normed.len() {
            for j in (i + 1)..normed.len() {
                if normed[i].iter().zip(&normed[j]).all(|(a, b)| (a - b).abs() < 1e-9) {
                    return Err(Error::Validation(format!(
                        "roots {i} and {j} are positive multiples: non-reduced or duplicate"
                    )));
                }
            }
        }
        for (i, a) in normed.iter().enumerate() {
            let neg: Vec<f64> = a.iter().map(|v| -v).collect();
            if find(&neg).is_none() {
                return Err(Error::Validation(format!("root {i} has no negative in the list")));
            }
            for (j, b) in normed.iter().enumerate() {
                if find(&reflect_point(a, b)).is_none() {
                    return Err(Error::Validation(format!(
                        "reflection in root {i} does not map root {j} into the system"
                    )));
                }
            }
        }
        let orbit = orbit_labels(normed.len(), |i, j| find(&reflect_point(&normed[i], &normed[j])).unwrap());
        let n_orb = orbit.iter().max().map(|m| m + 1).unwrap_or(0);
        let mut per: Vec<Option<f64>> = vec![None; n_orb];
        for (i, &o) in orbit.iter().enumerate() {
            match per[o] {
                None => per[o] = Some(kappa[i]),
                Some(v) if (v - kappa[i]).abs() > 1e-12 => {
                    return Err(Error::Validation(format!(
                        "multiplicity is not constant on the orbit of root {i}"
                    )))
                }
                _ => {}
            }
        }
        let values: Vec<f64> = per.into_iter().map(|v| v.unwrap()).collect();
        let rts: Vec<Root> = normed
            .iter()
            .zip(&orbit)
            .map(|(a, &o)| Root { alpha: a.clone(), beta: None, orbit: o })
            .collect();
        let group = generate_group(&normed, cap)?;
        let positive: Vec<PositiveRoot> = rts
            .iter()
            .enumerate()
            .filter(|(_, r)| lex_positive(&r.alpha))
            .map(|(i, r)| PositiveRoot {
                index: i,
                alpha: r.alpha.clone(),
                kappa: values[r.orbit],
                kappa_exact: None,
                beta: None,
                beta_norm2: None,
                reflection: reflection_f64(&r.alpha),
                reflection_exact: None,
            })
            .collect();
        let total = positive.iter().map(|p| p.kappa).sum();
        Ok(RootSystemData {
            dim: d,
            roots: rts,
            positive,
            multiplicity: Multiplicity { values, exact: None, total },
            group,
            group_exact: None,
            label: format!("custom{d}"),
        })
    }

    fn assemble_exact(
        d: usize,
        dirs: Vec<(Vec<Rat>, usize)>,
        kappa: Vec<Rat>,
        label: String,
        cap: usize,
    ) -> Result<RootSystemData> {
        let roots: Vec<Root> = dirs
            .into_iter()
            .map(|(b, o)| {
                let n2 = rat_to_f64(&norm2_rat(&b));
                let s = (2.0 / n2).sqrt();
                Root { alpha: b.iter().map(|v| rat_to_f64(v) * s).collect(), beta: Some(b), orbit: o }
            })
            .collect();
        let values: Vec<f64> = kappa.iter().map(rat_to_f64).collect();
        let positive: Vec<PositiveRoot> = roots
            .iter()
            .enumerate()
            .filter(|(_, r)| lex_positive(&r.alpha))
            .map(|(i, r)| {
                let b = r.beta.clone().unwrap();
                PositiveRoot {
                    index: i,
                    alpha: r.alpha.clone(),
                    kappa: values[r.orbit],
                    kappa_exact: Some(kappa[r.orbit].clone()),
                    beta_norm2: Some(norm2_rat(&b)),
                    reflection: reflection_f64(&r.alpha),
                    reflection_exact: Some(reflection_matrix(&b)),
                    beta: Some(b),
                }
            })
            .collect();
        let alphas: Vec<Vec<f64>> = positive.iter().map(|p| p.alpha.clone()).collect();
        let group = generate_group(&alphas, cap)?;
        let gens: Vec<RatMatrix> = positive.iter().map(|p| p.reflection_exact.clone().unwrap()).collect();
        let group_exact = Some(generate_group_exact(&gens, cap)?);
        let total = positive.iter().map(|p| p.kappa).sum();
        Ok(RootSystemData {
            dim: d,
            roots,
            positive,
            multiplicity: Multiplicity { values, exact: Some(kappa), total },
            group,
            group_exact,
            label,
        })
    }

    /// `|κ|`.
    pub fn kappa_total(&self) -> f64 {
        self.multiplicity.total
    }

    pub fn is_exact(&self) -> bool {
        self.positive.iter().all(|p| p.beta.is_some() && p.kappa_exact.is_some())
    }

    /// Per-coordinate multiplicities if this is a `Z₂^d` system.
    pub fn z2_lambda(&self) -> Option<Vec<f64>> {
        if self.positive.len() != self.dim {
            return None;
        }
        let mut lam = vec![0.0; self.dim];
        for p in &self.positive {
            let nz: Vec<usize> = (0..self.dim).filter(|&j| p.alpha[j].abs() > 1e-12).collect();
            if nz.len() != 1 {
                return None;
            }
            lam[nz[0]] = p.kappa;
        }
        Some(lam)
    }

    /// `W_κ(x) = ∏_{α∈R₊} |⟨α,x⟩|^{2κ(α)}`.
    pub fn weight_eval(&self, x: &[f64]) -> f64 {
        let mut w = 1.0;
        for p in &self.positive {
            if p.kappa != 0.0 {
                w *= dot(&p.alpha, x).abs().powf(2.0 * p.kappa);
            }
        }
        w
    }

    /// Exact `W_κ(x)` at a rational point, available for integer `κ`.
    pub fn weight_eval_exact(&self, x: &[Rat]) -> Option<Rat> {
        let mut w = Rat::one();
        for p in &self.positive {
            let k = p.kappa_exact.as_ref()?;
            if !k.is_integer() {
                return None;
            }
            let e = k.to_integer().to_usize()?;
            let b = p.beta.as_ref()?;
            let l = b.iter().zip(x).fold(Rat::zero(), |a, (u, v)| a + u * v);
            let sq = rat_int(2) * &l * &l / p.beta_norm2.as_ref()?;
            w *= num_traits::pow(sq, e);
        }
        Some(w)
    }

    /// `r^d ∏_{α∈R} (|⟨α,x⟩| + r)^{κ(α)}`.
    pub fn ball_comparator(&self, x: &[f64], r: f64) -> f64 {
        let mut v = r.powi(self.dim as i32);
        for p in &self.positive {
            v *= (dot(&p.alpha, x).abs() + r).powf(2.0 * p.kappa);
        }
        v
    }

    /// `|B(x,r)|_κ = ∫_{B(x,r)} W_κ` by nested adaptive quadrature.
    pub fn ball_measure(&self, x: &[f64], r: f64, opts: AdaptiveOptions) -> Result<f64> {
        if !(r > 0.0) {
            return Err(Error::Domain(format!("radius must be positive, got {r}")));
        }
        if x.len() != self.dim {
            return Err(Error::Dimension { expected: self.dim, got: x.len() });
        }
        let mut t = vec![0.0; self.dim];
        let mut failure: Option<(f64, f64)> = None;
        let v = self.ball_level(x, r * r, 0, &mut t, opts, &mut failure)?;
        if let Some((last, prev)) = failure {
            return Err(Error::NumericFailure {
                msg: "ball measure quadrature did not converge".into(),
                last,
                previous: prev,
            });
        }
        Ok(v)
    }

    fn ball_level(
        &self,
        x: &[f64],
        rho2: f64,
        k: usize,
        t: &mut Vec<f64>,
        opts: AdaptiveOptions,
        failure: &mut Option<(f64, f64)>,
    ) -> Result<f64> {
        let rho = rho2.max(0.0).sqrt();
        if rho == 0.0 {
            return Ok(0.0);
        }
        let d = self.dim;
        // Hyperplanes that involve only coordinates up to k cut this level.
        let mut cuts = Vec::new();
        for p in &self.positive {
            if p.kappa == 0.0 || p.alpha[k].abs() < 1e-14 || p.alpha[k + 1..].iter().any(|v| v.abs() > 1e-14) {
                continue;
            }
            let s: f64 = (0..k).map(|i| p.alpha[i] * t[i]).sum();
            cuts.push(-s / p.alpha[k]);
        }
        if k + 1 == d {
            let mut bps = vec![x[k] - rho, x[k] + rho];
            bps.extend(cuts.into_iter().filter(|c| *c > x[k] - rho && *c < x[k] + rho));
            let mut tt = t.clone();
            let r = adaptive(
                |s| {
                    tt[k] = s;
                    [self.weight_eval(&tt)]
                },
                &bps,
                opts,
            )?;
            if !r.converged && failure.is_none() {
                *failure = Some((r.value[0], r.value[0] - r.error));
            }
            return Ok(r.value[0]);
        }
        let h = std::f64::consts::FRAC_PI_2;
        let mut bps = vec![-h, h];
        bps.extend(
            cuts.into_iter()
                .map(|c| (c - x[k]) / rho)
                .filter(|u| u.abs() < 1.0)
                .map(|u| u.asin()),
        );
        let inner = AdaptiveOptions { rel_tol: opts.rel_tol * 0.1, ..opts };
        let mut inner_err: Option<Error> = None;
        let mut tt = t.clone();
        let r = adaptive(
            |phi| {
                let c = phi.cos();
                tt[k] = x[k] + rho * phi.sin();
                let sub = rho2 * c * c;
                match self.ball_level(x, sub, k + 1, &mut tt.clone(), inner, failure) {
                    Ok(v) => [v * rho * c],
                    Err(e) => {
                        inner_err.get_or_insert(e);
                        [0.0]
                    }
                }
            },
            &bps,
            opts,
        )?;
        if let Some(e) = inner_err {
            return Err(e);
        }
        if !r.converged && failure.is_none() {
            *failure = Some((r.value[0], r.value[0] - r.error));
        }
        Ok(r.value[0])
    }

    /// Number of roots in each orbit.
    pub fn orbit_count(&self) -> BTreeMap<usize, usize> {
        let mut m = BTreeMap::new();
        for r in &self.roots {
            *m.entry(r.orbit).or_insert(0) += 1;
        }
        m
    }
}

fn parallel_ratio(a: &[Rat], b: &[Rat]) -> Option<Rat> {
    let k = a.iter().position(|v| !v.is_zero())?;
    if b[k].is_zero() {
        return None;
    }
    let c = &b[k] / &a[k];
    if a.iter().zip(b).all(|(x, y)| &(x * &c) == y) {
        Some(c)
    } else {
        None
    }
}

/// Scale a rational vector so its first nonzero entry is ±1.
fn normalize_direction(v: &[Rat]) -> Vec<Rat> {
    let k = v.iter().position(|x| !x.is_zero()).unwrap_or(0);
    let c = v[k].abs();
    if c.is_zero() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &c).collect()
}

fn orbit_labels(n: usize, image: impl Fn(usize, usize) -> usize) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut Vec<usize>, i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        let mut c = i;
        while p[c] != r {
            let nx = p[c];
            p[c] = r;
            c = nx;
        }
        r
    }
    for i in 0..n {
        for j in 0..n {
            let k = image(i, j);
            let (a, b) = (find(&mut parent, j), find(&mut parent, k));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut labels = vec![0; n];
    let mut map = BTreeMap::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        let next = map.len();
        labels[i] = *map.entry(r).or_insert(next);
    }
    labels
}

/// `∫_{B(x,r)} |t|^{2λ} dt` on the line.
pub fn ball_measure_z2_1d(lambda: f64, x: f64, r: f64) -> f64 {
    let g = 2.0 * lambda + 1.0;
    let f = |t: f64| t.signum() * t.abs().powf(g) / g;
    f(x + r) - f(x - r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    #[test]
    fn z2_example() {
        let rs = RootSystemData::build(&RootSystemKind::Z2d { lambda: vec![rat(1, 2), rat(1, 1)] }).unwrap();
        assert_eq!(rs.roots.len(), 4);
        assert!((rs.kappa_total() - 1.5).abs() < 1e-15);
        for r in &rs.roots {
            assert!((dot(&r.alpha, &r.alpha) - 2.0).abs() < 1e-12);
        }
        assert_eq!(rs.z2_lambda(), Some(vec![0.5, 1.0]));
    }

    #[test]
    fn a1_order_two() {
        let rs = RootSystemData::build(&RootSystemKind::A { rank: 1, kappa: rat(1, 1) }).unwrap();
        assert_eq!(rs.roots.len(), 2);
        assert_eq!(rs.group.len(), 2);
    }

    #[test]
    fn group_orders() {
        let z3 = RootSystemData::build(&RootSystemKind::Z2d { lambda: vec![rat(1, 2); 3] }).unwrap();
        assert_eq!(z3.group.len(), 8);
        let b2 = RootSystemData::build(&RootSystemKind::B { dim: 2, kappa0: rat(1, 2), kappa1: rat(3, 2) }).unwrap();
        assert_eq!(b2.group.len(), 8);
        assert_eq!(b2.group_exact.as_ref().unwrap().len(), 8);
        let a2 = RootSystemData::build(&RootSystemKind::A { rank: 2, kappa: rat(1, 1) }).unwrap();
        assert_eq!(a2.group.len(), 6);
    }

    #[test]
    fn custom_not_negation_closed() {
        let e = RootSystemData::build(&RootSystemKind::Custom { roots: vec![vec![rat(1, 1)]], kappa: vec![rat(1, 1)] });
        assert!(matches!(e, Err(Error::Validation(_))));
    }

    #[test]
    fn custom_non_reduced_rejected() {
        let roots = vec![vec![rat(1, 1)], vec![rat(-1, 1)], vec![rat(2, 1)], vec![rat(-2, 1)]];
        let e = RootSystemData::build(&RootSystemKind::Custom { roots, kappa: vec![rat(1, 1); 4] });
        assert!(matches!(e, Err(Error::Validation(_))));
    }

    #[test]
    fn custom_offending_pair_named() {
        // e1, e1+e2 and negatives: reflection in e1 sends e1+e2 to e2-e1.
        let roots = vec![
            vec![rat(1, 1), rat(0, 1)],
            vec![rat(-1, 1), rat(0, 1)],
            vec![rat(1, 1), rat(1, 1)],
            vec![rat(-1, 1), rat(-1, 1)],
        ];
        match RootSystemData::build(&RootSystemKind::Custom { roots, kappa: vec![rat(1, 1); 4] }) {
            Err(Error::Validation(m)) => assert!(m.contains("root 0") && m.contains("root 2"), "{m}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn custom_matches_builtin_b2_group() {
        let b2 = RootSystemData::build(&RootSystemKind::B { dim: 2, kappa0: rat(1, 1), kappa1: rat(2, 1) }).unwrap();
        let roots: Vec<Vec<Rat>> = b2.roots.iter().map(|r| r.beta.clone().unwrap()).collect();
        let kappa: Vec<Rat> = b2.roots.iter().map(|r| b2.multiplicity.exact.as_ref().unwrap()[r.orbit].clone()).collect();
        let c = RootSystemData::build(&RootSystemKind::Custom { roots, kappa }).unwrap();
        assert_eq!(c.group.len(), 8);
        assert!((c.kappa_total() - b2.kappa_total()).abs() < 1e-15);
    }

    #[test]
    fn custom_orbit_multiplicity_checked() {
        let roots = vec![
            vec![rat(1, 1), rat(-1, 1)],
            vec![rat(-1, 1), rat(1, 1)],
        ];
        let e = RootSystemData::build(&RootSystemKind::Custom { roots, kappa: vec![rat(1, 1), rat(2, 1)] });
        assert!(matches!(e, Err(Error::Validation(_))));
    }

    #[test]
    fn weight_examples() {
        let rs = RootSystemData::build(&RootSystemKind::Z2d { lambda: vec![rat(1, 1)] }).unwrap();
        assert!((rs.weight_eval(&[2.0]) - 8.0).abs() < 1e-12);
        assert_eq!(rs.weight_eval_exact(&[rat(2, 1)]), Some(rat(8, 1)));
        assert_eq!(rs.weight_eval(&[0.0]), 0.0);
    }

    #[test]
    fn ball_examples() {
        let opts = AdaptiveOptions::default();
        let rs0 = RootSystemData::build(&RootSystemKind::Z2d { lambda: vec![rat(0, 1)] }).unwrap();
        assert!((rs0.ball_measure(&[0.3], 1.0, opts).unwrap() - 2.0).abs() < 1e-12);
        let rs = RootSystemData::build(&RootSystemKind::Z2d { lambda: vec![rat(1, 1)] }).unwrap();
        assert!((rs.ball_measure(&[0.0], 1.0, opts).unwrap() - 4.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn real_custom_without_exact_path() {
        let s3 = 3f64.sqrt();
        let roots = vec![
            vec![1.0, 0.0],
            vec![-1.0, 0.0],
            vec![0.5, s3 / 2.0],
            vec![-0.5, -s3 / 2.0],
            vec![0.5, -s3 / 2.0],
            vec![-0.5, s3 / 2.0],
        ];
        let rs = RootSystemData::build(&RootSystemKind::CustomReal { roots, kappa: vec![1.0; 6] }).unwrap();
        assert_eq!(rs.group.len(), 6);
        assert!(!rs.is_exact());
    }
}
