//! Experiment configuration, read from TOML.

use dunklkit::area::AreaOptions;
use dunklkit::boundary::NtOptions;
use dunklkit::datum::DatumSpec;
use dunklkit::field::{HarmonicField, PolyField};
use dunklkit::poisson::{integrator_by_name, KernelField, PoissonField};
use dunklkit::poly::{rat_from_f64, Rat};
use dunklkit::rootsys::RootSystemKind;
use dunklkit::{Error, Result};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

pub const SCHEMA_VERSION: u32 = 1;

/// A multiplicity written as a number or as a rational string such as `"1/2"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Multiplicity {
    Number(f64),
    Text(String),
}

impl Multiplicity {
    pub fn to_rat(&self) -> Result<Rat> {
        let r = match self {
            Multiplicity::Number(v) => {
                rat_from_f64(*v).ok_or_else(|| Error::Validation(format!("multiplicity {v} is not finite")))?
            }
            Multiplicity::Text(s) => parse_rat(s)?,
        };
        if r < Rat::from_integer(0.into()) {
            return Err(Error::Domain(format!("multiplicities must be nonnegative, got {self}")));
        }
        Ok(r)
    }

    pub fn to_f64(&self) -> Result<f64> {
        Ok(dunklkit::poly::rat_to_f64(&self.to_rat()?))
    }
}

impl std::fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Multiplicity::Number(v) => write!(f, "{v}"),
            Multiplicity::Text(s) => f.write_str(s),
        }
    }
}

fn parse_rat(s: &str) -> Result<Rat> {
    let bad = || Error::Validation(format!("cannot read '{s}' as a rational number"));
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: i64 = n.trim().parse().map_err(|_| bad())?;
        let d: i64 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        return Ok(Rat::new(n.into(), d.into()));
    }
    if let Ok(n) = s.parse::<i64>() {
        return Ok(Rat::from_integer(n.into()));
    }
    let v: f64 = s.parse().map_err(|_| bad())?;
    rat_from_f64(v).ok_or_else(bad)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RootSystemSpec {
    /// `z2`, `a` or `b`.
    pub kind: String,
    /// One value per coordinate for `z2`; one for `a`; two for `b`.
    pub multiplicities: Vec<Multiplicity>,
    /// Rank of `A` or dimension of `B`.
    pub rank: usize,
}

impl Default for RootSystemSpec {
    fn default() -> Self {
        RootSystemSpec { kind: "z2".into(), multiplicities: vec![Multiplicity::Text("1/2".into())], rank: 2 }
    }
}

impl RootSystemSpec {
    pub fn exact_multiplicities(&self) -> Result<Vec<Rat>> {
        if self.multiplicities.is_empty() {
            return Err(Error::Validation("root system needs at least one multiplicity".into()));
        }
        self.multiplicities.iter().map(|m| m.to_rat()).collect()
    }

    pub fn kind(&self) -> Result<RootSystemKind> {
        let m = self.exact_multiplicities()?;
        match self.kind.as_str() {
            "z2" => Ok(RootSystemKind::Z2d { lambda: m }),
            "a" => Ok(RootSystemKind::A { rank: self.rank, kappa: m[0].clone() }),
            "b" if m.len() == 2 => Ok(RootSystemKind::B { dim: self.rank, kappa0: m[0].clone(), kappa1: m[1].clone() }),
            "b" => Err(Error::Validation("root system 'b' needs two multiplicities".into())),
            k => Err(Error::Validation(format!("unknown root system kind '{k}'; known kinds: z2, a, b"))),
        }
    }

    /// Multiplicities of `Z₂^d`, the group used by the analytic modules.
    pub fn z2_lambda(&self) -> Result<Vec<f64>> {
        if self.kind != "z2" {
            return Err(Error::Validation(format!("this experiment needs a z2 root system, got '{}'", self.kind)));
        }
        self.exact_multiplicities()?.iter().map(|r| Ok(dunklkit::poly::rat_to_f64(r))).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    /// `polynomial`, `poisson` or `kernel`.
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expr: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub datum: Option<DatumSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub integrator: Option<String>,
    /// Overrides `budgets.nt.levels` for this field.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nt_levels: Option<usize>,
}

/// A field with the boundary points where the three verdicts may disagree.
pub struct BuiltField {
    pub field: Arc<dyn HarmonicField>,
    pub designed: Vec<Vec<f64>>,
}

type FieldCtor = fn(&FieldSpec, &[Rat]) -> Result<BuiltField>;

fn build_polynomial(s: &FieldSpec, lambda: &[Rat]) -> Result<BuiltField> {
    let expr = s.expr.as_ref().ok_or_else(|| Error::Validation("polynomial field needs 'expr'".into()))?;
    Ok(BuiltField { field: Arc::new(PolyField::parse(expr, lambda.to_vec())?), designed: Vec::new() })
}

fn build_poisson(s: &FieldSpec, lambda: &[Rat]) -> Result<BuiltField> {
    let lam: Vec<f64> = lambda.iter().map(dunklkit::poly::rat_to_f64).collect();
    let spec = s.datum.as_ref().ok_or_else(|| Error::Validation("poisson field needs a 'datum' table".into()))?;
    let datum = spec.build(lam.len())?;
    let mut designed = Vec::new();
    if lam.len() == 1 {
        for b in datum.breakpoints(0) {
            if !datum.is_continuous_at(&[b]) {
                designed.push(vec![b]);
            }
        }
    }
    let field = match &s.integrator {
        Some(name) => PoissonField::new(&lam, datum, integrator_by_name(name)?)?,
        None => PoissonField::auto(&lam, datum)?,
    };
    Ok(BuiltField { field: Arc::new(field), designed })
}

fn build_kernel(_: &FieldSpec, lambda: &[Rat]) -> Result<BuiltField> {
    let lam: Vec<f64> = lambda.iter().map(dunklkit::poly::rat_to_f64).collect();
    let origin = vec![0.0; lam.len()];
    Ok(BuiltField { field: Arc::new(KernelField::new(&lam)?), designed: vec![origin] })
}

const FIELD_REGISTRY: &[(&str, FieldCtor)] =
    &[("kernel", build_kernel), ("poisson", build_poisson), ("polynomial", build_polynomial)];

pub fn field_kinds() -> Vec<&'static str> {
    FIELD_REGISTRY.iter().map(|(n, _)| *n).collect()
}

impl FieldSpec {
    pub fn build(&self, lambda: &[Rat]) -> Result<BuiltField> {
        let ctor = FIELD_REGISTRY.iter().find(|(n, _)| *n == self.kind).map(|(_, c)| *c).ok_or_else(|| {
            Error::Validation(format!("unknown field kind '{}'; known kinds: {}", self.kind, field_kinds().join(", ")))
        })?;
        ctor(self, lambda)
    }
}

/// Explicit values plus an optional arithmetic range, optionally mirrored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct GridSpec {
    pub values: Vec<f64>,
    pub start: Option<f64>,
    pub stop: Option<f64>,
    pub step: Option<f64>,
    /// Add `-v` for every `v`.
    pub mirror: bool,
}

impl GridSpec {
    pub fn range(start: f64, stop: f64, step: f64, mirror: bool) -> GridSpec {
        GridSpec { values: Vec::new(), start: Some(start), stop: Some(stop), step: Some(step), mirror }
    }

    pub fn points(&self) -> Result<Vec<f64>> {
        let mut pts = self.values.clone();
        match (self.start, self.stop, self.step) {
            (None, None, None) => {}
            (Some(a), Some(b), Some(h)) => {
                if !(h > 0.0) || !(b >= a) {
                    return Err(Error::Validation(format!("grid range needs step > 0 and stop ≥ start, got {a}..{b} by {h}")));
                }
                let n = ((b - a) / h + 1e-9).floor() as usize;
                if n > 1_000_000 {
                    return Err(Error::Validation("grid range is too large".into()));
                }
                pts.extend((0..=n).map(|k| round12(a + k as f64 * h)));
            }
            _ => return Err(Error::Validation("grid range needs start, stop and step together".into())),
        }
        if self.mirror {
            let neg: Vec<f64> = pts.iter().map(|v| -v).collect();
            pts.extend(neg);
        }
        if pts.iter().any(|v| !v.is_finite()) {
            return Err(Error::Validation("grid values must be finite".into()));
        }
        pts.sort_by(|a, b| a.total_cmp(b));
        pts.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        if pts.is_empty() {
            return Err(Error::Validation("empty grid".into()));
        }
        Ok(pts)
    }
}

fn round12(v: f64) -> f64 {
    (v * 1e12).round() / 1e12
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConeParams {
    pub aperture: f64,
    pub height: f64,
}

impl Default for ConeParams {
    fn default() -> Self {
        ConeParams { aperture: 1.0, height: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct Budgets {
    pub area: AreaOptions,
    pub nt: NtOptions,
}

/// Tolerances of the checks; every check reads its threshold from here.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub fatou_agreement: f64,
    pub mean_value: f64,
    pub darboux: f64,
    pub kernel_mass: f64,
    pub translated_mass: f64,
    pub translation_cross: f64,
    pub classical_shift: f64,
    pub sandwich: f64,
    pub closed_form_area: f64,
    pub dominance: f64,
    pub green: f64,
    pub max_principle: f64,
    pub cutoff_support: f64,
    pub gradient_stability: f64,
    pub exact_moments: f64,
    pub monotonicity: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            fatou_agreement: 0.95,
            mean_value: 1e-7,
            darboux: 1e-6,
            kernel_mass: 1e-8,
            translated_mass: 1e-6,
            translation_cross: 2e-6,
            classical_shift: 1e-10,
            sandwich: 1e-5,
            closed_form_area: 1e-6,
            dominance: 1e-6,
            green: 1e-4,
            max_principle: 1e-6,
            cutoff_support: 1e-12,
            gradient_stability: 0.05,
            exact_moments: 1e-12,
            monotonicity: 1e-7,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSpec {
    pub dir: String,
    pub stem: String,
}

impl Default for OutputSpec {
    fn default() -> Self {
        OutputSpec { dir: "out".into(), stem: "report".into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KernelBoundsSpec {
    pub x: GridSpec,
    pub t: GridSpec,
    pub y: GridSpec,
}

impl Default for KernelBoundsSpec {
    fn default() -> Self {
        KernelBoundsSpec {
            x: GridSpec { values: vec![-2.0, -1.1, -0.6, -0.3, -0.05, 0.05, 0.2, 0.5, 1.0, 1.7], ..Default::default() },
            t: GridSpec { values: vec![-1.8, -0.9, -0.4, -0.1, 0.0, 0.1, 0.35, 0.8, 1.3, 2.2], ..Default::default() },
            y: GridSpec { values: vec![0.01, 0.03, 0.07, 0.15, 0.3, 0.5, 0.8, 1.2, 2.0, 3.5], ..Default::default() },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AreaSweepSpec {
    pub apertures: Vec<f64>,
    pub heights: Vec<f64>,
}

impl Default for AreaSweepSpec {
    fn default() -> Self {
        AreaSweepSpec { apertures: vec![0.5, 1.0, 2.0], heights: vec![0.5, 1.0] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    /// Name in the experiment registry.
    pub experiment: String,
    pub seed: u64,
    pub root_system: RootSystemSpec,
    pub fields: Vec<FieldSpec>,
    pub cone: ConeParams,
    pub grid: GridSpec,
    pub budgets: Budgets,
    pub tolerances: Tolerances,
    pub output: OutputSpec,
    pub kernel_bounds: KernelBoundsSpec,
    pub area_sweep: AreaSweepSpec,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            schema_version: SCHEMA_VERSION,
            experiment: "fatou".into(),
            seed: 0,
            root_system: RootSystemSpec::default(),
            fields: Vec::new(),
            cone: ConeParams::default(),
            grid: GridSpec::default(),
            budgets: Budgets::default(),
            tolerances: Tolerances::default(),
            output: OutputSpec::default(),
            kernel_bounds: KernelBoundsSpec::default(),
            area_sweep: AreaSweepSpec::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<ExperimentConfig> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| {
            let offset = e.span().map(|s| s.start).unwrap_or(0).min(text.len());
            let before = &text[..offset];
            let line = before.matches('\n').count() + 1;
            let column = offset - before.rfind('\n').map_or(0, |i| i + 1) + 1;
            Error::Parse { column, msg: format!("line {line}: {}", e.message()) }
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Validation(format!(
                "config schema_version {} is not supported (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        self.root_system.kind()?;
        if !(self.cone.aperture > 0.0 && self.cone.height > 0.0) {
            return Err(Error::Domain("cone aperture and height must be positive".into()));
        }
        Ok(())
    }
}
