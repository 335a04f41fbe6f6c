//! Dunkl operators and the κ-Laplacian on exact polynomials, κ-harmonic
//! bases, the square identity, and a numerical subharmonicity probe.
//!
//! For a positive root `α = cβ` with rational `β`, the factor
//! `α_j / ⟨α,x⟩` equals `β_j / ⟨β,x⟩`, so
//!
//! ```text
//! D_j p = ∂_j p + Σ_{α∈R₊} κ(α) β_j (p - σ_α p) / ⟨β,x⟩
//! ```
//!
//! stays inside rational arithmetic.

use crate::error::{Error, Result};
use crate::poly::{monomials_of_degree, rat_int, Poly, Rat};
use crate::rootsys::{reflect_point, RootSystemData};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

fn require_exact(rs: &RootSystemData, p: &Poly) -> Result<()> {
    if !rs.is_exact() {
        return Err(Error::SymbolicUnavailable(format!(
            "root system {} has no rational representation",
            rs.label
        )));
    }
    if p.nx() != rs.dim {
        return Err(Error::Dimension { expected: rs.dim, got: p.nx() });
    }
    Ok(())
}

/// `(p - σ_α p)/⟨β,x⟩` for every positive root, in root order.
fn reflection_quotients(rs: &RootSystemData, p: &Poly) -> Vec<Poly> {
    rs.positive
        .iter()
        .map(|r| {
            if r.kappa == 0.0 {
                Poly::zero(p.nx(), p.has_y())
            } else {
                p.divided_reflection_difference(r.beta.as_ref().unwrap())
            }
        })
        .collect()
}

fn dunkl_from_quotients(rs: &RootSystemData, j: usize, p: &Poly, q: &[Poly]) -> Poly {
    let mut out = p.deriv(j);
    for (r, qa) in rs.positive.iter().zip(q) {
        let b = &r.beta.as_ref().unwrap()[j];
        if b.is_zero() || qa.is_zero() {
            continue;
        }
        let c = r.kappa_exact.as_ref().unwrap() * b;
        out = &out + &qa.scale(&c);
    }
    out
}

/// `D_j p` for `0 ≤ j < d`.
pub fn dunkl_apply(rs: &RootSystemData, j: usize, p: &Poly) -> Result<Poly> {
    require_exact(rs, p)?;
    if j >= rs.dim {
        return Err(Error::Domain(format!("operator index {j} out of range for dimension {}", rs.dim)));
    }
    let q = reflection_quotients(rs, p);
    Ok(dunkl_from_quotients(rs, j, p, &q))
}

/// `(D_1 p, ..., D_d p)`.
pub fn dunkl_gradient(rs: &RootSystemData, p: &Poly) -> Result<Vec<Poly>> {
    require_exact(rs, p)?;
    let q = reflection_quotients(rs, p);
    Ok((0..rs.dim).map(|j| dunkl_from_quotients(rs, j, p, &q)).collect())
}

/// `∂_y² u + Σ_j D_j² u`.
pub fn laplacian_by_operators(rs: &RootSystemData, u: &Poly) -> Result<Poly> {
    require_exact(rs, u)?;
    let mut out = if u.has_y() { u.deriv(rs.dim).deriv(rs.dim) } else { Poly::zero(u.nx(), false) };
    for g in dunkl_gradient(rs, u)?.iter().enumerate() {
        out = &out + &dunkl_apply(rs, g.0, g.1)?;
    }
    Ok(out)
}

/// `Δu + 2 Σ_{α∈R₊} κ(α) δ_α u` with
/// `δ_α u = ⟨∇_x u, α⟩/⟨α,x⟩ - (u - σ_α u)/⟨α,x⟩²`.
pub fn laplacian_explicit(rs: &RootSystemData, u: &Poly) -> Result<Poly> {
    require_exact(rs, u)?;
    let mut out = Poly::zero(u.nx(), u.has_y());
    for i in 0..u.nvars() {
        out = &out + &u.deriv(i).deriv(i);
    }
    let grad: Vec<Poly> = (0..rs.dim).map(|j| u.deriv(j)).collect();
    for r in &rs.positive {
        if r.kappa == 0.0 {
            continue;
        }
        let beta = r.beta.as_ref().unwrap();
        let l = Poly::linear_form(u.nx(), u.has_y(), beta);
        let mut dir = Poly::zero(u.nx(), u.has_y());
        for (g, b) in grad.iter().zip(beta) {
            dir = &dir + &g.scale(b);
        }
        let half_norm = r.beta_norm2.as_ref().unwrap() / rat_int(2);
        let diff = u - &u.reflect(beta);
        let num = &(&dir * &l) - &diff.scale(&half_norm);
        let delta = num
            .div_linear(beta)
            .and_then(|q| q.div_linear(beta))
            .expect("explicit reflection term is not divisible by the squared linear form");
        out = &out + &delta.scale(&(rat_int(2) * r.kappa_exact.as_ref().unwrap()));
    }
    Ok(out)
}

/// `Δ_κ u`, computed by both defining formulas and cross-checked.
///
/// Panics if the two forms disagree.
pub fn dunkl_laplacian(rs: &RootSystemData, u: &Poly) -> Result<Poly> {
    let a = laplacian_by_operators(rs, u)?;
    let b = laplacian_explicit(rs, u)?;
    assert_eq!(a, b, "the two forms of the κ-Laplacian disagree on {u}");
    Ok(a)
}

/// Kernel basis of `Δ_κ` on homogeneous polynomials of degree `n` in
/// `(x, y)`, each scaled to coprime integers.
pub fn harmonic_basis(rs: &RootSystemData, n: u32) -> Result<HarmonicBasis> {
    let d = rs.dim;
    let nv = d + 1;
    let monos = monomials_of_degree(nv, n);
    if n < 2 {
        let polys: Vec<Poly> = monos.iter().map(|e| Poly::monomial(d, true, e.clone(), Rat::one())).collect();
        return Ok(HarmonicBasis { degree: n, monomials: monos.len(), rank: 0, basis: polys });
    }
    let targets = monomials_of_degree(nv, n - 2);
    let mut cols: Vec<Vec<Rat>> = Vec::with_capacity(monos.len());
    for e in &monos {
        let m = Poly::monomial(d, true, e.clone(), Rat::one());
        let img = dunkl_laplacian(rs, &m)?;
        cols.push(targets.iter().map(|t| img.coefficient(t)).collect());
    }
    // Rows of the system: one per target monomial.
    let rows: Vec<Vec<Rat>> = (0..targets.len()).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
    let (kernel, rank) = nullspace_fraction_free(&rows, monos.len());
    let basis: Vec<Poly> = kernel
        .into_iter()
        .map(|v| {
            let mut p = Poly::zero(d, true);
            for (e, c) in monos.iter().zip(v) {
                p.add_term(e.clone(), c);
            }
            p.primitive()
        })
        .collect();
    Ok(HarmonicBasis { degree: n, monomials: monos.len(), rank, basis })
}

#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicBasis {
    pub degree: u32,
    /// Number of degree-n monomials in `(x, y)`.
    pub monomials: usize,
    /// Rank of `Δ_κ` restricted to these monomials.
    pub rank: usize,
    pub basis: Vec<Poly>,
}

/// Kernel of an integer-scaled rational matrix by Bareiss elimination.
fn nullspace_fraction_free(rows: &[Vec<Rat>], ncols: usize) -> (Vec<Vec<Rat>>, usize) {
    use num_integer::Integer;
    let mut a: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| {
            let mut l = BigInt::one();
            for v in r {
                l = l.lcm(v.denom());
            }
            r.iter().map(|v| (v * Rat::from_integer(l.clone())).to_integer()).collect()
        })
        .collect();
    let m = a.len();
    let mut pivots: Vec<usize> = Vec::new();
    let mut prev = BigInt::one();
    let mut row = 0;
    for col in 0..ncols {
        if row >= m {
            break;
        }
        let Some(p) = (row..m).find(|&i| !a[i][col].is_zero()) else { continue };
        a.swap(row, p);
        for i in (row + 1)..m {
            for j in (col + 1)..ncols {
                let v = (&a[row][col] * &a[i][j] - &a[i][col] * &a[row][j]) / &prev;
                a[i][j] = v;
            }
            a[i][col] = BigInt::zero();
        }
        // Entries left of col in rows below are already zero.
        for j in 0..col {
            for i in (row + 1)..m {
                a[i][j] = BigInt::zero();
            }
        }
        prev = a[row][col].clone();
        pivots.push(col);
        row += 1;
    }
    let rank = pivots.len();
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let mut kernel = Vec::new();
    for &f in &free {
        let mut v: Vec<Rat> = vec![Rat::zero(); ncols];
        v[f] = Rat::one();
        for (r, &pc) in pivots.iter().enumerate().rev() {
            let mut s = Rat::zero();
            for j in (pc + 1)..ncols {
                if !a[r][j].is_zero() && !v[j].is_zero() {
                    s += Rat::from_integer(a[r][j].clone()) * &v[j];
                }
            }
            v[pc] = -s / Rat::from_integer(a[r][pc].clone());
        }
        kernel.push(v);
    }
    (kernel, rank)
}

/// Both sides of `Δ_κ(u²) = 2|∇u|² + 2Σ κ(α)((u - σ_α u)/⟨α,x⟩)²`.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareIdentity {
    pub lhs: Poly,
    pub rhs: Poly,
    pub difference: Poly,
}

impl SquareIdentity {
    pub fn holds(&self) -> bool {
        self.difference.is_zero()
    }
}

/// Right-hand side of the square identity, valid as `Δ_κ(u²)` for κ-harmonic `u`.
pub fn square_gradient_form(rs: &RootSystemData, u: &Poly) -> Result<Poly> {
    require_exact(rs, u)?;
    let mut rhs = Poly::zero(u.nx(), u.has_y());
    for i in 0..u.nvars() {
        let g = u.deriv(i);
        rhs = &rhs + &(&g * &g);
    }
    rhs = rhs.scale(&rat_int(2));
    for r in &rs.positive {
        if r.kappa == 0.0 {
            continue;
        }
        let q = u.divided_reflection_difference(r.beta.as_ref().unwrap());
        // ((u-σu)/⟨α,x⟩)² = (⟨β,β⟩/2) q².
        let c = rat_int(2) * r.kappa_exact.as_ref().unwrap() * r.beta_norm2.as_ref().unwrap() / rat_int(2);
        rhs = &rhs + &(&q * &q).scale(&c);
    }
    Ok(rhs)
}

pub fn square_identity_check(rs: &RootSystemData, u: &Poly) -> Result<SquareIdentity> {
    if !dunkl_laplacian(rs, u)?.is_zero() {
        return Err(Error::Domain(format!("{u} is not κ-harmonic")));
    }
    let lhs = dunkl_laplacian(rs, &(u * u))?;
    let rhs = square_gradient_form(rs, u)?;
    let difference = &lhs - &rhs;
    Ok(SquareIdentity { lhs, rhs, difference })
}

/// Outcome of [`subharmonic_probe`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubharmonicReport {
    pub min_value: f64,
    pub values: Vec<f64>,
    pub rejected: Vec<Vec<f64>>,
    pub step_rel: f64,
}

/// Numerical `Δ_κ g` at `(x, y)` for an evaluable `g`, with central
/// differences for the smooth part and exact reflection differences.
pub fn dunkl_laplacian_numeric(rs: &RootSystemData, g: &dyn Fn(&[f64]) -> f64, point: &[f64], h_rel: f64) -> f64 {
    let n = point.len();
    let d = rs.dim;
    let scale = point.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let h = h_rel * scale;
    let g0 = g(point);
    let mut lap = 0.0;
    let mut grad = vec![0.0; d];
    let mut p = point.to_vec();
    for i in 0..n {
        p[i] = point[i] + h;
        let gp = g(&p);
        p[i] = point[i] - h;
        let gm = g(&p);
        p[i] = point[i];
        lap += (gp - 2.0 * g0 + gm) / (h * h);
        if i < d {
            grad[i] = (gp - gm) / (2.0 * h);
        }
    }
    let x = &point[..d];
    for r in &rs.positive {
        if r.kappa == 0.0 {
            continue;
        }
        let ax: f64 = r.alpha.iter().zip(x).map(|(a, b)| a * b).sum();
        let dir: f64 = r.alpha.iter().zip(&grad).map(|(a, b)| a * b).sum();
        let mut q = reflect_point(&r.alpha, x);
        q.extend_from_slice(&point[d..]);
        lap += 2.0 * r.kappa * (dir / ax - (g0 - g(&q)) / (ax * ax));
    }
    lap
}

/// Minimum of `Δ_κ |F|` over sample points where `|F| > 0`.
pub fn subharmonic_probe(rs: &RootSystemData, f: &[Poly], points: &[Vec<f64>], h_rel: f64) -> Result<SubharmonicReport> {
    let comp: Vec<_> = f.iter().map(|p| p.compile()).collect();
    let norm = |p: &[f64]| comp.iter().map(|c| c.eval(p).powi(2)).sum::<f64>().sqrt();
    let mut values = Vec::new();
    let mut rejected = Vec::new();
    for p in points {
        if p.len() != rs.dim + 1 {
            return Err(Error::Dimension { expected: rs.dim + 1, got: p.len() });
        }
        let on_plane = rs.positive.iter().any(|r| r.alpha.iter().zip(p).map(|(a, b)| a * b).sum::<f64>().abs() < 1e-8);
        if norm(p) < 1e-10 || on_plane {
            rejected.push(p.clone());
            continue;
        }
        values.push(dunkl_laplacian_numeric(rs, &norm, p, h_rel));
    }
    let min_value = values.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(SubharmonicReport { min_value, values, rejected, step_rel: h_rel })
}

/// Numerical `D_j f` at `x` for systems without a rational representation.
pub fn dunkl_apply_numeric(rs: &RootSystemData, j: usize, f: &dyn Fn(&[f64]) -> f64, x: &[f64], h_rel: f64) -> f64 {
    let scale = x.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let h = h_rel * scale;
    let mut p = x.to_vec();
    p[j] += h;
    let fp = f(&p);
    p[j] = x[j] - h;
    let fm = f(&p);
    let mut v = (fp - fm) / (2.0 * h);
    let fx = f(x);
    for r in &rs.positive {
        if r.kappa == 0.0 || r.alpha[j] == 0.0 {
            continue;
        }
        let ax: f64 = r.alpha.iter().zip(x).map(|(a, b)| a * b).sum();
        v += r.kappa * r.alpha[j] * (fx - f(&reflect_point(&r.alpha, x))) / ax;
    }
    v
}

/// `true` when all coefficients are nonnegative, used by sign checks.
pub fn is_nonnegative_coefficients(p: &Poly) -> bool {
    p.terms().values().all(|c| !c.is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;
    use crate::rootsys::RootSystemKind;

    fn z1(l: Rat) -> RootSystemData {
        RootSystemData::build(&RootSystemKind::Z2d { lambda: vec![l] }).unwrap()
    }

    fn p(s: &str, nx: usize, y: bool) -> Poly {
        Poly::parse(s, nx, y).unwrap()
    }

    #[test]
    fn rank_one_operator() {
        let l = rat(3, 7);
        let rs = z1(l.clone());
        let one_plus = Rat::one() + rat_int(2) * &l;
        assert_eq!(dunkl_apply(&rs, 0, &p("x", 1, false)).unwrap(), Poly::constant(1, false, one_plus));
        assert_eq!(dunkl_apply(&rs, 0, &p("x^2", 1, false)).unwrap(), p("2*x", 1, false));
        assert!(dunkl_apply(&rs, 0, &p("1", 1, false)).unwrap().is_zero());
    }

    #[test]
    fn laplacian_examples() {
        let rs = z1(rat(1, 2));
        assert!(dunkl_laplacian(&rs, &p("x*y", 1, true)).unwrap().is_zero());
        assert!(dunkl_laplacian(&rs, &p("x^2 - 2*y^2", 1, true)).unwrap().is_zero());
        let rs0 = z1(rat(0, 1));
        assert!(dunkl_laplacian(&rs0, &p("x^2 - y^2", 1, true)).unwrap().is_zero());
    }

    #[test]
    fn basis_counts() {
        let rs0 = z1(rat(0, 1));
        assert_eq!(harmonic_basis(&rs0, 3).unwrap().basis.len(), 2);
        assert_eq!(harmonic_basis(&rs0, 0).unwrap().basis, vec![Poly::one(1, true)]);
        let rs = z1(rat(1, 3));
        let b = harmonic_basis(&rs, 2).unwrap();
        assert_eq!(b.basis.len(), 2);
        assert!(b.basis.contains(&p("x*y", 1, true)));
        assert!(b.basis.contains(&p("3*x^2 - 5*y^2", 1, true)));
    }

    #[test]
    fn square_identity_xy() {
        let rs = z1(rat(1, 2));
        let r = square_identity_check(&rs, &p("x*y", 1, true)).unwrap();
        assert!(r.holds());
        assert!(square_identity_check(&rs, &p("7", 1, true)).unwrap().lhs.is_zero());
    }

    #[test]
    fn symbolic_unavailable_for_real_custom() {
        let rs = RootSystemData::build(&RootSystemKind::CustomReal {
            roots: vec![vec![1.0, 0.3], vec![-1.0, -0.3]],
            kappa: vec![1.0, 1.0],
        })
        .unwrap();
        assert!(matches!(dunkl_apply(&rs, 0, &p("x1", 2, false)), Err(Error::SymbolicUnavailable(_))));
    }
}
