//! Boundary data for Poisson integrals, constructed by name.

use crate::error::{Error, Result};
use crate::poly::{CompiledPoly, Poly};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Where a datum lives, which bounds the truncation of the Poisson integral.
#[derive(Debug, Clone, PartialEq)]
pub enum Support {
    /// Vanishes outside the box.
    Box(Vec<(f64, f64)>),
    /// Bounded on all of `ℝ^d`; `scale` is a length beyond which the datum
    /// is constant or negligible.
    Whole { scale: f64 },
}

pub trait BoundaryDatum: Send + Sync {
    fn label(&self) -> String;
    fn dim(&self) -> usize;
    fn eval(&self, t: &[f64]) -> f64;
    fn support(&self) -> Support;
    fn sup_norm(&self) -> f64;

    /// Jump locations along coordinate `j`.
    fn breakpoints(&self, _j: usize) -> Vec<f64> {
        Vec::new()
    }

    fn is_continuous_at(&self, t: &[f64]) -> bool {
        (0..t.len()).all(|j| self.breakpoints(j).iter().all(|b| (t[j] - b).abs() > 1e-12))
    }

    fn is_g_invariant(&self) -> bool;

    /// Finite box carrying all but a negligible part of the datum.
    fn effective_box(&self) -> Option<Vec<(f64, f64)>> {
        match self.support() {
            Support::Box(b) => Some(b),
            Support::Whole { .. } => None,
        }
    }
}

fn symmetric_box(b: &[(f64, f64)]) -> bool {
    b.iter().all(|(lo, hi)| (lo + hi).abs() < 1e-14)
}

fn in_box(b: &[(f64, f64)], t: &[f64]) -> bool {
    b.iter().zip(t).all(|((lo, hi), v)| v >= lo && v <= hi)
}

#[derive(Debug, Clone)]
pub struct Indicator {
    pub bounds: Vec<(f64, f64)>,
}

impl BoundaryDatum for Indicator {
    fn label(&self) -> String {
        format!("indicator{:?}", self.bounds)
    }
    fn dim(&self) -> usize {
        self.bounds.len()
    }
    fn eval(&self, t: &[f64]) -> f64 {
        if b_open(&self.bounds, t) {
            1.0
        } else if in_box(&self.bounds, t) {
            0.5
        } else {
            0.0
        }
    }
    fn support(&self) -> Support {
        Support::Box(self.bounds.clone())
    }
    fn sup_norm(&self) -> f64 {
        1.0
    }
    fn breakpoints(&self, j: usize) -> Vec<f64> {
        vec![self.bounds[j].0, self.bounds[j].1]
    }
    fn is_g_invariant(&self) -> bool {
        symmetric_box(&self.bounds)
    }
}

fn b_open(b: &[(f64, f64)], t: &[f64]) -> bool {
    b.iter().zip(t).all(|((lo, hi), v)| v > lo && v < hi)
}

#[derive(Debug, Clone)]
pub struct PolynomialInBox {
    pub poly: Poly,
    pub bounds: Vec<(f64, f64)>,
    compiled: CompiledPoly,
    sup: f64,
}

impl PolynomialInBox {
    pub fn new(poly: Poly, bounds: Vec<(f64, f64)>) -> Result<Self> {
        if poly.has_y() || poly.nx() != bounds.len() {
            return Err(Error::Validation("datum polynomial must be in x only, matching the box".into()));
        }
        let compiled = poly.compile();
        // Sup over a sample lattice; only used as a reporting bound.
        let mut sup = 0.0f64;
        let n = 33usize;
        let d = bounds.len();
        let total = n.pow(d as u32);
        let mut p = vec![0.0; d];
        for k in 0..total {
            let mut r = k;
            for j in 0..d {
                let (lo, hi) = bounds[j];
                p[j] = lo + (hi - lo) * (r % n) as f64 / (n - 1) as f64;
                r /= n;
            }
            sup = sup.max(compiled.eval(&p).abs());
        }
        Ok(PolynomialInBox { poly, bounds, compiled, sup })
    }
}

impl BoundaryDatum for PolynomialInBox {
    fn label(&self) -> String {
        format!("polynomial({}) on {:?}", self.poly, self.bounds)
    }
    fn dim(&self) -> usize {
        self.bounds.len()
    }
    fn eval(&self, t: &[f64]) -> f64 {
        if in_box(&self.bounds, t) {
            self.compiled.eval(t)
        } else {
            0.0
        }
    }
    fn support(&self) -> Support {
        Support::Box(self.bounds.clone())
    }
    fn sup_norm(&self) -> f64 {
        self.sup
    }
    fn breakpoints(&self, j: usize) -> Vec<f64> {
        vec![self.bounds[j].0, self.bounds[j].1]
    }
    fn is_continuous_at(&self, t: &[f64]) -> bool {
        let on_edge = (0..t.len()).any(|j| self.breakpoints(j).iter().any(|b| (t[j] - b).abs() <= 1e-12));
        !on_edge || self.compiled.eval(t).abs() < 1e-12
    }
    fn is_g_invariant(&self) -> bool {
        if !symmetric_box(&self.bounds) {
            return false;
        }
        (0..self.poly.nx()).all(|j| self.poly.terms().keys().all(|m| m.0[j] % 2 == 0))
    }
}

#[derive(Debug, Clone)]
pub struct Gaussian {
    pub center: Vec<f64>,
    pub width: f64,
    pub amplitude: f64,
}

impl BoundaryDatum for Gaussian {
    fn label(&self) -> String {
        format!("gaussian(center={:?}, width={}, amplitude={})", self.center, self.width, self.amplitude)
    }
    fn dim(&self) -> usize {
        self.center.len()
    }
    fn eval(&self, t: &[f64]) -> f64 {
        let r2: f64 = t.iter().zip(&self.center).map(|(a, b)| (a - b) * (a - b)).sum();
        self.amplitude * (-r2 / (self.width * self.width)).exp()
    }
    fn support(&self) -> Support {
        Support::Whole { scale: self.center.iter().fold(0.0f64, |m, c| m.max(c.abs())) + 7.0 * self.width }
    }
    fn sup_norm(&self) -> f64 {
        self.amplitude.abs()
    }
    fn is_g_invariant(&self) -> bool {
        self.center.iter().all(|c| *c == 0.0)
    }
    fn effective_box(&self) -> Option<Vec<(f64, f64)>> {
        // e^{-r²/w²} < 1e-21 beyond 7w.
        Some(self.center.iter().map(|c| (c - 7.0 * self.width, c + 7.0 * self.width)).collect())
    }
}

#[derive(Debug, Clone)]
pub struct Constant {
    pub dim: usize,
    pub value: f64,
}

impl BoundaryDatum for Constant {
    fn label(&self) -> String {
        format!("constant({})", self.value)
    }
    fn dim(&self) -> usize {
        self.dim
    }
    fn eval(&self, _t: &[f64]) -> f64 {
        self.value
    }
    fn support(&self) -> Support {
        Support::Whole { scale: 1.0 }
    }
    fn sup_norm(&self) -> f64 {
        self.value.abs()
    }
    fn is_g_invariant(&self) -> bool {
        true
    }
}

/// Piecewise-linear samples on the line, zero outside the sample range.
#[derive(Debug, Clone)]
pub struct Tabulated {
    pub nodes: Vec<f64>,
    pub values: Vec<f64>,
}

impl Tabulated {
    pub fn new(nodes: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if nodes.len() < 2 || nodes.len() != values.len() {
            return Err(Error::Validation("tabulated datum needs at least two (t, f) samples of equal length".into()));
        }
        if nodes.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Validation("tabulated nodes must be strictly increasing".into()));
        }
        Ok(Tabulated { nodes, values })
    }
}

impl BoundaryDatum for Tabulated {
    fn label(&self) -> String {
        format!("tabulated({} samples on [{}, {}])", self.nodes.len(), self.nodes[0], self.nodes[self.nodes.len() - 1])
    }
    fn dim(&self) -> usize {
        1
    }
    fn eval(&self, t: &[f64]) -> f64 {
        let t = t[0];
        let n = self.nodes.len();
        if t < self.nodes[0] || t > self.nodes[n - 1] {
            return 0.0;
        }
        let k = self.nodes.partition_point(|v| *v <= t).clamp(1, n - 1);
        let (a, b) = (self.nodes[k - 1], self.nodes[k]);
        let w = (t - a) / (b - a);
        self.values[k - 1] * (1.0 - w) + self.values[k] * w
    }
    fn support(&self) -> Support {
        Support::Box(vec![(self.nodes[0], self.nodes[self.nodes.len() - 1])])
    }
    fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }
    fn breakpoints(&self, _j: usize) -> Vec<f64> {
        let n = self.nodes.len();
        let mut b = Vec::new();
        if self.values[0] != 0.0 {
            b.push(self.nodes[0]);
        }
        if self.values[n - 1] != 0.0 {
            b.push(self.nodes[n - 1]);
        }
        b
    }
    fn is_g_invariant(&self) -> bool {
        let n = self.nodes.len();
        (0..n).all(|i| (self.nodes[i] + self.nodes[n - 1 - i]).abs() < 1e-14 && self.values[i] == self.values[n - 1 - i])
    }
}

/// Parameters shared by every datum kind; each constructor reads its own.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatumSpec {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lo: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hi: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expr: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub width: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitude: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<Vec<f64>>,
}

type DatumCtor = fn(&DatumSpec, usize) -> Result<Arc<dyn BoundaryDatum>>;

fn need<T: Clone>(v: &Option<T>, kind: &str, field: &str) -> Result<T> {
    v.clone().ok_or_else(|| Error::Validation(format!("datum '{kind}' needs '{field}'")))
}

fn bounds(spec: &DatumSpec, d: usize) -> Result<Vec<(f64, f64)>> {
    let lo = need(&spec.lo, &spec.kind, "lo")?;
    let hi = need(&spec.hi, &spec.kind, "hi")?;
    if lo.len() != d || hi.len() != d {
        return Err(Error::Dimension { expected: d, got: lo.len().min(hi.len()) });
    }
    if lo.iter().zip(&hi).any(|(a, b)| !(a < b)) {
        return Err(Error::Validation("datum box needs lo < hi in every coordinate".into()));
    }
    Ok(lo.into_iter().zip(hi).collect())
}

fn make_indicator(s: &DatumSpec, d: usize) -> Result<Arc<dyn BoundaryDatum>> {
    Ok(Arc::new(Indicator { bounds: bounds(s, d)? }))
}

fn make_polynomial(s: &DatumSpec, d: usize) -> Result<Arc<dyn BoundaryDatum>> {
    let p = Poly::parse(&need(&s.expr, &s.kind, "expr")?, d, false)?;
    Ok(Arc::new(PolynomialInBox::new(p, bounds(s, d)?)?))
}

fn make_gaussian(s: &DatumSpec, d: usize) -> Result<Arc<dyn BoundaryDatum>> {
    let center = s.center.clone().unwrap_or_else(|| vec![0.0; d]);
    if center.len() != d {
        return Err(Error::Dimension { expected: d, got: center.len() });
    }
    let width = need(&s.width, &s.kind, "width")?;
    if !(width > 0.0) {
        return Err(Error::Validation("gaussian width must be positive".into()));
    }
    Ok(Arc::new(Gaussian { center, width, amplitude: s.amplitude.unwrap_or(1.0) }))
}

fn make_constant(s: &DatumSpec, d: usize) -> Result<Arc<dyn BoundaryDatum>> {
    Ok(Arc::new(Constant { dim: d, value: s.value.unwrap_or(1.0) }))
}

fn make_tabulated(s: &DatumSpec, d: usize) -> Result<Arc<dyn BoundaryDatum>> {
    if d != 1 {
        return Err(Error::Validation("tabulated data are one-dimensional".into()));
    }
    Ok(Arc::new(Tabulated::new(need(&s.t, &s.kind, "t")?, need(&s.f, &s.kind, "f")?)?))
}

const DATUM_REGISTRY: &[(&str, DatumCtor)] = &[
    ("constant", make_constant),
    ("gaussian", make_gaussian),
    ("indicator", make_indicator),
    ("polynomial", make_polynomial),
    ("tabulated", make_tabulated),
];

pub fn datum_kinds() -> Vec<&'static str> {
    DATUM_REGISTRY.iter().map(|(n, _)| *n).collect()
}

impl DatumSpec {
    pub fn build(&self, d: usize) -> Result<Arc<dyn BoundaryDatum>> {
        let ctor = DATUM_REGISTRY
            .iter()
            .find(|(n, _)| *n == self.kind)
            .map(|(_, c)| *c)
            .ok_or_else(|| {
                Error::Validation(format!("unknown datum kind '{}'; known kinds: {}", self.kind, datum_kinds().join(", ")))
            })?;
        ctor(self, d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_builds_every_kind() {
        let ind = DatumSpec { kind: "indicator".into(), lo: Some(vec![-1.0]), hi: Some(vec![1.0]), ..Default::default() };
        let f = ind.build(1).unwrap();
        assert_eq!(f.eval(&[0.3]), 1.0);
        assert_eq!(f.eval(&[1.0]), 0.5);
        assert!(f.is_g_invariant() && !f.is_continuous_at(&[1.0]) && f.is_continuous_at(&[0.9]));
        let p = DatumSpec { kind: "polynomial".into(), expr: Some("1 - x^2".into()), ..ind.clone() };
        let p = p.build(1).unwrap();
        assert!((p.eval(&[0.5]) - 0.75).abs() < 1e-15 && p.is_continuous_at(&[1.0]));
        let t = DatumSpec {
            kind: "tabulated".into(),
            t: Some(vec![-1.0, 0.0, 1.0]),
            f: Some(vec![0.0, 1.0, 0.0]),
            ..Default::default()
        };
        let t = t.build(1).unwrap();
        assert!((t.eval(&[0.25]) - 0.75).abs() < 1e-15 && t.is_g_invariant());
        assert!(DatumSpec { kind: "gaussian".into(), width: Some(0.5), ..Default::default() }.build(2).is_ok());
        assert!(DatumSpec { kind: "constant".into(), ..Default::default() }.build(1).is_ok());
        assert!(DatumSpec { kind: "bogus".into(), ..Default::default() }.build(1).is_err());
        assert!(DatumSpec { kind: "indicator".into(), ..Default::default() }.build(1).is_err());
    }
}
