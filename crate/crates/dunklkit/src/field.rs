//! Functions on the upper half-space `ℝ^d × (0, ∞)` for `G = Z₂^d`.

use crate::dunkl::dunkl_laplacian;
use crate::error::{Error, Result};
use crate::poly::{rat_to_f64, CompiledPoly, Poly, Rat};
use crate::rootsys::{RootSystemData, RootSystemKind};

/// Value and first derivatives at a point `(x, y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    pub value: f64,
    pub grad: Vec<f64>,
    pub dy: f64,
}

impl Jet {
    pub fn grad_norm2(&self) -> f64 {
        self.grad.iter().map(|g| g * g).sum::<f64>() + self.dy * self.dy
    }
}

/// Relative finite-difference step for fields without analytic derivatives.
pub const FD_STEP_REL: f64 = 1e-3;

pub trait HarmonicField: Send + Sync {
    fn label(&self) -> String;

    /// Multiplicities `λ_j` of the weight `∏|x_j|^{2λ_j}`.
    fn lambda(&self) -> &[f64];

    fn dim(&self) -> usize {
        self.lambda().len()
    }

    fn value(&self, x: &[f64], y: f64) -> Result<f64>;

    /// Central differences with step `FD_STEP_REL · y`.
    fn jet(&self, x: &[f64], y: f64) -> Result<Jet> {
        let value = self.value(x, y)?;
        let h = FD_STEP_REL * y;
        let mut grad = Vec::with_capacity(x.len());
        let mut p = x.to_vec();
        for j in 0..x.len() {
            p[j] = x[j] + h;
            let a = self.value(&p, y)?;
            p[j] = x[j] - h;
            let b = self.value(&p, y)?;
            p[j] = x[j];
            grad.push((a - b) / (2.0 * h));
        }
        let dy = (self.value(x, y + h)? - self.value(x, y - h)?) / (2.0 * h);
        Ok(Jet { value, grad, dy })
    }

    /// Invariance under every sign change of `x`.
    fn is_g_invariant(&self) -> bool {
        false
    }

    /// `2|∇u|²`.
    fn gradient_form(&self, x: &[f64], y: f64) -> Result<f64> {
        Ok(2.0 * self.jet(x, y)?.grad_norm2())
    }

    /// `Δ_κ(u²) = 2|∇u|² + Σ_j λ_j ((u(x) - u(σ_j x)) / x_j)²` for harmonic `u`.
    fn laplacian_of_square(&self, x: &[f64], y: f64) -> Result<f64> {
        Ok(self.square_forms(x, y)?.laplacian_of_square)
    }

    /// `Δ_κ(u²)` and `2|∇u|²` from a single jet.
    fn square_forms(&self, x: &[f64], y: f64) -> Result<SquareForms> {
        let jet = self.jet(x, y)?;
        let gradient_form = 2.0 * jet.grad_norm2();
        let mut acc = gradient_form;
        if self.is_g_invariant() {
            return Ok(SquareForms { laplacian_of_square: acc, gradient_form });
        }
        let lam = self.lambda();
        let mut p = x.to_vec();
        for j in 0..x.len() {
            if lam[j] == 0.0 {
                continue;
            }
            let q = if x[j].abs() < 1e-7 * y {
                // (u - σ_j u)/x_j → 2 ∂_j u on the hyperplane.
                2.0 * jet.grad[j]
            } else {
                p[j] = -x[j];
                let r = self.value(&p, y)?;
                p[j] = x[j];
                (jet.value - r) / x[j]
            };
            acc += lam[j] * q * q;
        }
        Ok(SquareForms { laplacian_of_square: acc, gradient_form })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SquareForms {
    pub laplacian_of_square: f64,
    pub gradient_form: f64,
}

fn check_point(d: usize, x: &[f64], y: f64) -> Result<()> {
    if x.len() != d {
        return Err(Error::Dimension { expected: d, got: x.len() });
    }
    if !(y > 0.0) {
        return Err(Error::Domain(format!("y must be positive, got {y}")));
    }
    Ok(())
}

/// A polynomial in `(x, y)` with exact derivative data.
#[derive(Debug, Clone)]
pub struct PolyField {
    pub poly: Poly,
    pub lambda_exact: Vec<Rat>,
    lambda: Vec<f64>,
    harmonic: bool,
    invariant: bool,
    u: CompiledPoly,
    grad: Vec<CompiledPoly>,
    lap_sq: CompiledPoly,
    grad_form: CompiledPoly,
}

impl PolyField {
    pub fn new(poly: Poly, lambda: Vec<Rat>) -> Result<PolyField> {
        if !poly.has_y() || poly.nx() != lambda.len() {
            return Err(Error::Validation(format!(
                "field polynomial must have {} x-variables and y",
                lambda.len()
            )));
        }
        let rs = RootSystemData::build(&RootSystemKind::Z2d { lambda: lambda.clone() })?;
        let lap = dunkl_laplacian(&rs, &poly)?;
        let lap_sq = dunkl_laplacian(&rs, &(&poly * &poly))?;
        let invariant = (0..poly.nx()).all(|j| {
            let mut beta = vec![Rat::from_integer(0.into()); poly.nx()];
            beta[j] = Rat::from_integer(1.into());
            poly.reflect(&beta) == poly
        });
        let grad: Vec<CompiledPoly> = (0..poly.nvars()).map(|i| poly.deriv(i).compile()).collect();
        let mut grad_form = Poly::zero(poly.nx(), true);
        for i in 0..poly.nvars() {
            let g = poly.deriv(i);
            grad_form = &grad_form + &(&g * &g);
        }
        let grad_form = grad_form.scale(&Rat::from_integer(2.into()));
        Ok(PolyField {
            lambda: lambda.iter().map(rat_to_f64).collect(),
            lambda_exact: lambda,
            harmonic: lap.is_zero(),
            invariant,
            u: poly.compile(),
            grad,
            lap_sq: lap_sq.compile(),
            grad_form: grad_form.compile(),
            poly,
        })
    }

    pub fn parse(text: &str, lambda: Vec<Rat>) -> Result<PolyField> {
        let d = lambda.len();
        PolyField::new(Poly::parse(text, d, true)?, lambda)
    }

    pub fn is_harmonic(&self) -> bool {
        self.harmonic
    }

    fn point(x: &[f64], y: f64) -> Vec<f64> {
        let mut p = x.to_vec();
        p.push(y);
        p
    }
}

impl HarmonicField for PolyField {
    fn label(&self) -> String {
        format!("poly({})", self.poly)
    }

    fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    fn value(&self, x: &[f64], y: f64) -> Result<f64> {
        check_point(self.lambda.len(), x, y)?;
        Ok(self.u.eval(&Self::point(x, y)))
    }

    fn jet(&self, x: &[f64], y: f64) -> Result<Jet> {
        check_point(self.lambda.len(), x, y)?;
        let p = Self::point(x, y);
        let d = x.len();
        Ok(Jet {
            value: self.u.eval(&p),
            grad: self.grad[..d].iter().map(|g| g.eval(&p)).collect(),
            dy: self.grad[d].eval(&p),
        })
    }

    fn is_g_invariant(&self) -> bool {
        self.invariant
    }

    fn gradient_form(&self, x: &[f64], y: f64) -> Result<f64> {
        check_point(self.lambda.len(), x, y)?;
        Ok(self.grad_form.eval(&Self::point(x, y)))
    }

    /// Exact `Δ_κ(u²)`, valid whether or not `u` is harmonic.
    fn laplacian_of_square(&self, x: &[f64], y: f64) -> Result<f64> {
        check_point(self.lambda.len(), x, y)?;
        Ok(self.lap_sq.eval(&Self::point(x, y)))
    }

    fn square_forms(&self, x: &[f64], y: f64) -> Result<SquareForms> {
        check_point(self.lambda.len(), x, y)?;
        let p = Self::point(x, y);
        Ok(SquareForms { laplacian_of_square: self.lap_sq.eval(&p), gradient_form: self.grad_form.eval(&p) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    #[test]
    fn poly_field_square_form_matches_generic() {
        let f = PolyField::parse("x*y + x^2 - 2*y^2", vec![rat(1, 2)]).unwrap();
        assert!(f.is_harmonic());
        assert!(!f.is_g_invariant());
        let exact = f.laplacian_of_square(&[0.7], 0.4).unwrap();
        struct Wrap<'a>(&'a PolyField);
        impl HarmonicField for Wrap<'_> {
            fn label(&self) -> String {
                "wrap".into()
            }
            fn lambda(&self) -> &[f64] {
                self.0.lambda()
            }
            fn value(&self, x: &[f64], y: f64) -> Result<f64> {
                self.0.value(x, y)
            }
            fn jet(&self, x: &[f64], y: f64) -> Result<Jet> {
                self.0.jet(x, y)
            }
        }
        let generic = Wrap(&f).laplacian_of_square(&[0.7], 0.4).unwrap();
        assert!((exact - generic).abs() < 1e-12, "{exact} {generic}");
        assert!((f.gradient_form(&[0.7], 0.4).unwrap() - 2.0 * f.jet(&[0.7], 0.4).unwrap().grad_norm2()).abs() < 1e-12);
    }

    #[test]
    fn invariant_detection() {
        let f = PolyField::parse("x^2 - 2*y^2", vec![rat(1, 2)]).unwrap();
        assert!(f.is_g_invariant() && f.is_harmonic());
        assert!(!PolyField::parse("y^2", vec![rat(1, 2)]).unwrap().is_harmonic());
    }
}
