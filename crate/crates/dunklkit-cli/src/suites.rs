//! Verification suites, looked up by name.

use crate::config::{ExperimentConfig, GridSpec, Multiplicity, Tolerances};
use crate::report::{num, RunResults, Table};
use dunklkit::area::{
    area_integral, dominance_check, monotonicity_check, sandwich_residual, translated_cutoff, AreaOptions, ConeSpec,
    CONSTANT_CONVENTION,
};
use dunklkit::boundary::{
    fatou_table, gradient_bound_probe, green_residual, max_principle_check, nt_limit_probe, FatouOptions, GradientGrid,
    NtOptions,
};
use dunklkit::datum::Indicator;
use dunklkit::dunkl::{dunkl_apply, dunkl_gradient, dunkl_laplacian, harmonic_basis, laplacian_by_operators, laplacian_explicit, square_identity_check};
use dunklkit::field::{HarmonicField, PolyField};
use dunklkit::intertwine::{TranslationEvaluator, DEFAULT_NODES};
use dunklkit::means::{darboux_residual, mean_value_residual, spherical_mean};
use dunklkit::poisson::{
    kernel_bound_ratio, kernel_mass, translated_kernel_mass_1d, translated_poisson_closed_1d, translated_poisson_jet_1d,
    KernelField, PoissonField, PoissonKernel,
};
use dunklkit::poly::{monomials_of_degree, rat, rat_int, Poly, Rat};
use dunklkit::quadrature::AdaptiveOptions;
use dunklkit::rootsys::{RootSystemData, RootSystemKind};
use dunklkit::{Error, Result};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use std::sync::Arc;

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    /// Name of the identity or bound being checked.
    pub anchor: String,
    pub passed: bool,
    pub value: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl Check {
    fn below(name: &str, anchor: &str, value: f64, tolerance: f64, detail: String) -> Check {
        Check { name: name.into(), anchor: anchor.into(), passed: value <= tolerance, value, tolerance, detail }
    }

    fn flag(name: &str, anchor: &str, passed: bool, value: f64, tolerance: f64, detail: String) -> Check {
        Check { name: name.into(), anchor: anchor.into(), passed, value, tolerance, detail }
    }
}

#[derive(Debug, Default)]
pub struct SuiteOutput {
    pub checks: Vec<Check>,
    pub tables: Vec<Table>,
}

/// Settings shared by every suite.
pub struct SuiteContext {
    pub config: ExperimentConfig,
    pub seed: u64,
}

impl SuiteContext {
    pub fn new(mut config: ExperimentConfig, lambda: Option<Vec<Multiplicity>>, seed: Option<u64>) -> Result<Self> {
        if let Some(m) = lambda {
            config.root_system.kind = "z2".into();
            config.root_system.multiplicities = m;
        }
        if let Some(s) = seed {
            config.seed = s;
        }
        config.validate()?;
        let seed = config.seed;
        Ok(SuiteContext { config, seed })
    }

    pub fn tol(&self) -> &Tolerances {
        &self.config.tolerances
    }

    /// `Z₂^d` multiplicities from the configured root system.
    pub fn lambda(&self) -> Result<Vec<Rat>> {
        self.config.root_system.z2_lambda()?;
        self.config.root_system.exact_multiplicities()
    }

    pub fn lambda_f64(&self) -> Result<Vec<f64>> {
        self.config.root_system.z2_lambda()
    }

    fn rng(&self, stream: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15))
    }
}

pub trait VerifySuite: Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    fn run(&self, ctx: &SuiteContext) -> Result<SuiteOutput>;
}

struct Symbolic;
struct Translation;
struct Poisson;
struct Means;
struct Area;
struct Boundary;

static SUITES: [&dyn VerifySuite; 6] = [&Symbolic, &Translation, &Poisson, &Means, &Area, &Boundary];

pub fn suite_names() -> Vec<&'static str> {
    let mut v: Vec<&'static str> = SUITES.iter().map(|s| s.name()).collect();
    v.push("all");
    v
}

pub fn suites() -> &'static [&'static dyn VerifySuite] {
    &SUITES
}

pub fn find_suite(name: &str) -> Result<Vec<&'static dyn VerifySuite>> {
    if name == "all" {
        return Ok(SUITES.to_vec());
    }
    SUITES
        .iter()
        .find(|s| s.name() == name)
        .map(|s| vec![*s])
        .ok_or_else(|| Error::Validation(format!("unknown suite '{name}'; known suites: {}", suite_names().join(", "))))
}

pub const CHECK_COLUMNS: [&str; 7] = ["suite", "name", "anchor", "passed", "value", "tolerance", "detail"];

/// Runs the named suite and collects a report.
pub fn run_verify(name: &str, ctx: &SuiteContext) -> Result<RunResults> {
    let list = find_suite(name)?;
    let mut results = RunResults::new("verify", name, ctx.seed);
    results.metadata.insert("constant_convention".into(), CONSTANT_CONVENTION.into());
    results.metadata.insert("root_system".into(), ctx.config.root_system.kind.clone());
    let m: Vec<String> = ctx.config.root_system.multiplicities.iter().map(|m| m.to_string()).collect();
    results.metadata.insert("multiplicities".into(), m.join(","));
    let mut checks = Table::new("checks", &CHECK_COLUMNS);
    let mut extra = Vec::new();
    let (mut passed, mut failed) = (0usize, 0usize);
    for s in list {
        log::info!("running suite {}", s.name());
        let out = s.run(ctx)?;
        for c in out.checks {
            log::debug!("{}::{} passed={} value={:e}", s.name(), c.name, c.passed, c.value);
            if c.passed {
                passed += 1;
            } else {
                failed += 1;
            }
            checks.push(vec![
                json!(s.name()),
                json!(c.name),
                json!(c.anchor),
                json!(c.passed),
                num(c.value),
                num(c.tolerance),
                json!(c.detail),
            ]);
        }
        for mut t in out.tables {
            t.name = format!("{}_{}", s.name(), t.name);
            extra.push(t);
        }
    }
    results.tables.push(checks);
    results.tables.extend(extra);
    results.summary.insert("checks".into(), json!(passed + failed));
    results.summary.insert("passed".into(), json!(passed));
    results.summary.insert("failed".into(), json!(failed));
    results.passed = failed == 0;
    Ok(results)
}

fn z2(lambda: Vec<Rat>) -> Result<RootSystemData> {
    RootSystemData::build(&RootSystemKind::Z2d { lambda })
}

fn commutativity_systems() -> Vec<(&'static str, RootSystemKind)> {
    vec![
        ("Z2^3 (1/2, 1, 2)", RootSystemKind::Z2d { lambda: vec![rat(1, 2), rat_int(1), rat_int(2)] }),
        ("A2 (1)", RootSystemKind::A { rank: 2, kappa: rat_int(1) }),
        ("B2 (1/2, 3/2)", RootSystemKind::B { dim: 2, kappa0: rat(1, 2), kappa1: rat(3, 2) }),
    ]
}

/// `(monomials tested, nonzero commutators)`.
fn commutator_failures(rs: &RootSystemData, max_degree: u32) -> Result<(usize, usize)> {
    let d = rs.dim;
    let (mut tested, mut bad) = (0, 0);
    for deg in 0..=max_degree {
        for e in monomials_of_degree(d, deg) {
            let p = Poly::monomial(d, false, e, rat_int(1));
            let g = dunkl_gradient(rs, &p)?;
            for i in 0..d {
                for j in (i + 1)..d {
                    let c = &dunkl_apply(rs, i, &g[j])? - &dunkl_apply(rs, j, &g[i])?;
                    if !c.is_zero() {
                        bad += 1;
                    }
                }
            }
            tested += 1;
        }
    }
    Ok((tested, bad))
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

impl VerifySuite for Symbolic {
    fn name(&self) -> &'static str {
        "symbolic"
    }

    fn description(&self) -> &'static str {
        "exact identities of the Dunkl operators and the κ-Laplacian"
    }

    fn run(&self, ctx: &SuiteContext) -> Result<SuiteOutput> {
        let mut out = SuiteOutput::default();
        let mut systems = commutativity_systems();
        let own = ctx.config.root_system.kind()?;
        if !systems.iter().any(|(_, k)| *k == own) {
            systems.push(("configured", own));
        }
        for (label, kind) in &systems {
            let rs = RootSystemData::build(kind)?;
            let (tested, bad) = commutator_failures(&rs, 8)?;
            out.checks.push(Check::below(
                &format!("commutativity {label}"),
                "commutativity D_iD_j",
                bad as f64,
                0.0,
                format!("{tested} monomials of degree <= 8"),
            ));
            let mut mismatch = 0;
            let mut count = 0;
            for deg in 0..=6 {
                for e in monomials_of_degree(rs.dim, deg) {
                    let p = Poly::monomial(rs.dim, false, e, rat_int(1));
                    if laplacian_by_operators(&rs, &p)? != laplacian_explicit(&rs, &p)? {
                        mismatch += 1;
                    }
                    count += 1;
                }
            }
            out.checks.push(Check::below(
                &format!("laplacian explicit form {label}"),
                "κ-Laplacian as sum of D_j^2 vs explicit form",
                mismatch as f64,
                0.0,
                format!("{count} monomials of degree <= 6"),
            ));
        }
        let square_systems = [
            ("Z2^2 (1/2, 1)", RootSystemKind::Z2d { lambda: vec![rat(1, 2), rat_int(1)] }),
            ("B2 (1/2, 3/2)", RootSystemKind::B { dim: 2, kappa0: rat(1, 2), kappa1: rat(3, 2) }),
        ];
        let mut dims = Table::new("harmonic_dimensions", &["system", "degree", "monomials", "rank", "basis"]);
        for (label, kind) in &square_systems {
            let rs = RootSystemData::build(kind)?;
            let (mut bad, mut not_harmonic, mut wrong_dim, mut count) = (0, 0, 0, 0);
            for n in 0..=6u32 {
                let b = harmonic_basis(&rs, n)?;
                let vars = rs.dim + 1;
                let expect = binomial(n as usize + rs.dim, rs.dim) - if n >= 2 { binomial(n as usize - 2 + rs.dim, rs.dim) } else { 0 };
                if b.basis.len() != expect || b.monomials != binomial(n as usize + vars - 1, vars - 1) {
                    wrong_dim += 1;
                }
                dims.push(vec![json!(label), json!(n), json!(b.monomials), json!(b.rank), json!(b.basis.len())]);
                for u in &b.basis {
                    if !dunkl_laplacian(&rs, u)?.is_zero() {
                        not_harmonic += 1;
                    }
                    if !square_identity_check(&rs, u)?.holds() {
                        bad += 1;
                    }
                    count += 1;
                }
            }
            out.checks.push(Check::below(
                &format!("square identity {label}"),
                "Δ_κ(u²) = 2|∇u|² + 2Σκ(α)((u-σ_αu)/⟨α,x⟩)²",
                bad as f64,
                0.0,
                format!("{count} harmonic basis elements of degree <= 6"),
            ));
            out.checks.push(Check::below(
                &format!("harmonic basis {label}"),
                "harmonic basis is annihilated by Δ_κ and has the classical dimension",
                (not_harmonic + wrong_dim) as f64,
                0.0,
                format!("{not_harmonic} non-harmonic elements, {wrong_dim} degrees with a wrong dimension"),
            ));
        }
        out.tables.push(dims);
        Ok(out)
    }
}

impl VerifySuite for Translation {
    fn name(&self) -> &'static str {
        "translation"
    }

    fn description(&self) -> &'static str {
        "generalized translation on Z2^d: radial cross-check, classical limit, moments, kernel product formula"
    }

    fn run(&self, ctx: &SuiteContext) -> Result<SuiteOutput> {
        let tol = ctx.tol();
        let mut out = SuiteOutput::default();

        let mut rng = ctx.rng(11);
        let mut worst = 0.0f64;
        for _ in 0..50 {
            let d = rng.gen_range(1..=2usize);
            let lam: Vec<f64> = (0..d).map(|_| rng.gen_range(0.0..2.0)).collect();
            let x: Vec<f64> = (0..d).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let t: Vec<f64> = (0..d).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let w: f64 = rng.gen_range(0.5..2.0);
            let ev = TranslationEvaluator::new(&lam, DEFAULT_NODES)?;
            let f0 = |r: f64| (-(r / w).powi(2)).exp();
            let f = |v: &[f64]| f0(v.iter().map(|a| a * a).sum::<f64>().sqrt());
            let a = ev.translate_point(&x, &f, &t)?;
            let b = ev.translate_radial(&x, &f0, &t)?;
            worst = worst.max((a - b).abs());
        }
        out.checks.push(Check::below(
            "radial cross-check",
            "translate_point vs translate_radial on radial Gaussians",
            worst,
            tol.translation_cross,
            "50 random (λ, x, t), d in {1, 2}".into(),
        ));

        let mut rng = ctx.rng(12);
        let mut worst = 0.0f64;
        for _ in 0..20 {
            let d = rng.gen_range(1..=2usize);
            let x: Vec<f64> = (0..d).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let t: Vec<f64> = (0..d).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let c: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let f = |v: &[f64]| (-v.iter().zip(&c).map(|(a, b)| (a - b).powi(2)).sum::<f64>()).exp() + v[0].powi(3);
            let ev = TranslationEvaluator::new(&vec![0.0; d], DEFAULT_NODES)?;
            let shifted: Vec<f64> = x.iter().zip(&t).map(|(a, b)| a + b).collect();
            worst = worst.max((ev.translate_point(&x, &f, &t)? - f(&shifted)).abs());
        }
        out.checks.push(Check::below(
            "classical shift",
            "λ = 0 translation is f(x + t)",
            worst,
            tol.classical_shift,
            "20 random non-radial functions".into(),
        ));

        let lam = ctx.lambda_f64()?;
        let d = lam.len();
        let ev = TranslationEvaluator::new(&lam, DEFAULT_NODES)?;
        let mut rng = ctx.rng(13);
        let mut worst = 0.0f64;
        for _ in 0..10 {
            let x: Vec<f64> = (0..d).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let t: Vec<f64> = (0..d).map(|_| rng.gen_range(-2.0..2.0)).collect();
            for j in 0..d {
                let lin = ev.translate_point(&x, &|v| v[j], &t)?;
                let sq = ev.translate_point(&x, &|v| v[j] * v[j], &t)?;
                let want = x[j] * x[j] + t[j] * t[j] + 2.0 * x[j] * t[j] / (2.0 * lam[j] + 1.0);
                worst = worst.max((lin - (x[j] + t[j])).abs()).max((sq - want).abs());
            }
        }
        out.checks.push(Check::below(
            "first and second moments",
            "τ_x(t_j) = x_j + t_j and τ_x(t_j²) = x_j² + t_j² + 2x_jt_j/(2λ_j+1)",
            worst,
            tol.exact_moments,
            format!("configured λ = {lam:?}"),
        ));

        let mut rng = ctx.rng(14);
        let mut worst = 0.0f64;
        for _ in 0..10 {
            let x: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.5..1.5)).collect();
            let t: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.5..1.5)).collect();
            let z: Vec<Complex64> = (0..d).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), 0.0)).collect();
            let failed = std::cell::Cell::new(false);
            let e = |v: &[f64]| match ev.dunkl_kernel(v, &z) {
                Ok(c) => c.re,
                Err(_) => {
                    failed.set(true);
                    f64::NAN
                }
            };
            let lhs = ev.translate_point(&x, &e, &t)?;
            if failed.get() {
                return Err(Error::NumericFailure { msg: "Dunkl kernel evaluation failed".into(), last: lhs, previous: 0.0 });
            }
            let rhs = ev.dunkl_kernel(&x, &z)?.re * ev.dunkl_kernel(&t, &z)?.re;
            worst = worst.max((lhs - rhs).abs() / (1.0 + rhs.abs()));
        }
        out.checks.push(Check::below(
            "kernel product formula",
            "τ_x E(·, z)(t) = E(x, z) E(t, z)",
            worst,
            tol.translation_cross,
            "10 random (x, t, z), real z".into(),
        ));
        Ok(out)
    }
}

impl VerifySuite for Poisson {
    fn name(&self) -> &'static str {
        "poisson"
    }

    fn description(&self) -> &'static str {
        "κ-Poisson kernel: normalizations, translated kernel, two-sided bounds"
    }

    fn run(&self, ctx: &SuiteContext) -> Result<SuiteOutput> {
        let tol = ctx.tol();
        let mut out = SuiteOutput::default();
        let mut worst = 0.0f64;
        for d in 1..=2 {
            for l in [0.0, 0.5, 1.0] {
                worst = worst.max((kernel_mass(&vec![l; d])? - 1.0).abs());
            }
        }
        out.checks.push(Check::below(
            "kernel mass",
            "c_κ ∫ P_y dω_κ = 1",
            worst,
            tol.kernel_mass,
            "d in {1, 2}, λ in {0, 1/2, 1}".into(),
        ));

        let lam0 = ctx.lambda_f64()?[0];
        let mut rng = ctx.rng(21);
        let mut worst = 0.0f64;
        let mut closed = 0.0f64;
        let k = PoissonKernel::new(&[lam0])?;
        for _ in 0..10 {
            let x = rng.gen_range(-2.0..2.0);
            let y = rng.gen_range(0.05..2.0);
            worst = worst.max((translated_kernel_mass_1d(lam0, x, y)? - 1.0).abs());
            let t = rng.gen_range(-2.0..2.0);
            let a = translated_poisson_closed_1d(&k, x, t, y)[0];
            let b = translated_poisson_jet_1d(&k, x, t, y, AdaptiveOptions { rel_tol: 1e-11, ..Default::default() })?[0];
            closed = closed.max((a - b).abs() / (1.0 + b.abs()));
        }
        out.checks.push(Check::below(
            "translated kernel mass",
            "c_κ ∫ (τ_x P_y)(-t) dω_κ(t) = 1",
            worst,
            tol.translated_mass,
            format!("10 random (x, y), λ = {lam0}"),
        ));
        out.checks.push(Check::below(
            "translated kernel closed form",
            "closed form of (τ_x P_y)(-t) vs quadrature over dm_λ",
            closed,
            tol.translated_mass,
            format!("10 random (x, t, y), λ = {lam0}"),
        ));

        let kb = &ctx.config.kernel_bounds;
        let (xs, ts, ys) = (kb.x.points()?, kb.t.points()?, kb.y.points()?);
        let rep = kernel_bound_ratio(lam0, &xs, &ts, &ys)?;
        let ext = [
            ("lower", rep.min_lower, rep.max_lower),
            ("upper", rep.min_upper, rep.max_upper),
            ("ball", rep.min_ball_ratio, rep.max_ball_ratio),
        ];
        let ok = ext.iter().all(|(_, lo, hi)| lo.is_finite() && hi.is_finite() && *lo > 0.0 && *hi > 0.0);
        let mut t = Table::new("kernel_bounds", &["ratio", "min", "max"]);
        for (n, lo, hi) in ext {
            t.push(vec![json!(n), num(lo), num(hi)]);
        }
        out.tables.push(t);
        out.checks.push(Check::flag(
            "two-sided kernel bounds",
            "(τ_xP_y)(-t) comparable to y/((y+|x-t|)|B(x, y+|x-t|)|) above and below",
            ok,
            rep.min_lower.min(rep.min_upper),
            0.0,
            format!(
                "{} grid points; lower in [{:.6e}, {:.6e}], upper in [{:.6e}, {:.6e}]",
                rep.entries.len(),
                rep.min_lower,
                rep.max_lower,
                rep.min_upper,
                rep.max_upper
            ),
        ));
        Ok(out)
    }
}

impl VerifySuite for Means {
    fn name(&self) -> &'static str {
        "means"
    }

    fn description(&self) -> &'static str {
        "generalized spherical means: mean-value property, expansion in Δ_κ, positivity"
    }

    fn run(&self, ctx: &SuiteContext) -> Result<SuiteOutput> {
        let tol = ctx.tol();
        let mut out = SuiteOutput::default();
        let systems = [vec![rat(1, 2)], vec![rat(1, 2), rat_int(1)]];
        let mut rng = ctx.rng(31);
        let mut worst = 0.0f64;
        for (s, lam) in systems.iter().enumerate() {
            let rs = z2(lam.clone())?;
            let mut basis = Vec::new();
            for n in 0..=4 {
                basis.extend(harmonic_basis(&rs, n)?.basis);
            }
            for _ in 0..10 {
                let u = PolyField::new(basis[rng.gen_range(0..basis.len())].clone(), lam.clone())?;
                let x: Vec<f64> = (0..=s).map(|_| rng.gen_range(-1.5..1.5)).collect();
                let y = rng.gen_range(1.0..2.0);
                let r = rng.gen_range(0.1..0.9) * y;
                let res = mean_value_residual(&u, &x, y, r, 8, 16)?;
                worst = worst.max(res / (1.0 + u.value(&x, y)?.abs()));
            }
        }
        out.checks.push(Check::below(
            "mean-value property",
            "M_u(x, r) = u(x) for κ-harmonic u",
            worst,
            tol.mean_value,
            "20 (u, x, r) with u in the harmonic basis of degree <= 4 on Z2^1 and Z2^2".into(),
        ));

        let cases: [(Vec<Rat>, &str, Vec<f64>, f64); 6] = [
            (vec![rat(1, 3)], "x^2", vec![0.8], 0.6),
            (vec![rat(1, 2)], "x^4 - 3*x^3", vec![-0.4], 0.7),
            (vec![rat(1, 2), rat_int(1)], "x1^2", vec![0.3, -0.7], 0.5),
            (vec![rat(1, 2), rat_int(1)], "x2", vec![0.3, -0.7], 0.5),
            (vec![rat(1, 2), rat_int(1)], "x1^2*x2^2", vec![0.3, -0.7], 0.5),
            (vec![rat(1, 2), rat_int(1)], "x1^4 - x1^2*x2^2 + x2", vec![0.3, -0.7], 0.5),
        ];
        let mut worst = 0.0f64;
        for (lam, e, x, r) in &cases {
            let f = Poly::parse(e, lam.len(), false)?;
            worst = worst.max(darboux_residual(lam, &f, x, *r)?.residual);
        }
        out.checks.push(Check::below(
            "expansion in Δ_κ",
            "M_f(x, r) = f(x) + ∫_0^r s^{1-N} ∫_0^s σ^{N-1} M_{Δf}(x, σ) dσ ds",
            worst,
            tol.darboux,
            format!("{} polynomials", cases.len()),
        ));

        let lam = ctx.lambda_f64()?;
        let d = lam.len();
        let mut rng = ctx.rng(32);
        let mut least = f64::INFINITY;
        for _ in 0..10 {
            let c: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let x: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.5..1.5)).collect();
            let r = rng.gen_range(0.1..1.5);
            let f = |v: &[f64]| (-4.0 * v.iter().zip(&c).map(|(a, b)| (a - b).powi(2)).sum::<f64>()).exp();
            least = least.min(spherical_mean(&lam, &f, &x, r)?);
        }
        out.checks.push(Check::flag(
            "mean positivity",
            "M_f ≥ 0 for f ≥ 0",
            least >= 0.0,
            least,
            0.0,
            "10 random non-radial Gaussians".into(),
        ));
        Ok(out)
    }
}

type Curated = (String, Arc<dyn HarmonicField>, f64);

fn curated_fields() -> Result<Vec<Curated>> {
    let half = vec![rat(1, 2)];
    let poly = |e: &str| -> Result<Arc<dyn HarmonicField>> { Ok(Arc::new(PolyField::parse(e, half.clone())?)) };
    let ind: Arc<dyn HarmonicField> =
        Arc::new(PoissonField::auto(&[0.5], Arc::new(Indicator { bounds: vec![(-1.0, 1.0)] }))?);
    Ok(vec![
        ("y".into(), poly("y")?, 0.3),
        ("x*y".into(), poly("x*y")?, 0.3),
        ("x^2 - 2*y^2".into(), poly("x^2 - 2*y^2")?, 0.3),
        ("poisson(indicator[-1,1])".into(), ind, 0.5),
        ("kernel(P_y(x))".into(), Arc::new(KernelField::new(&[0.5])?), 0.5),
    ])
}

impl VerifySuite for Area {
    fn name(&self) -> &'static str {
        "area"
    }

    fn description(&self) -> &'static str {
        "area integrals: closed form, sandwich, gradient-form dominance, cutoff support, monotonicity"
    }

    fn run(&self, ctx: &SuiteContext) -> Result<SuiteOutput> {
        let tol = ctx.tol();
        let opts: AreaOptions = ctx.config.budgets.area;
        let mut out = SuiteOutput::default();

        let u = PolyField::parse("y", vec![rat(1, 2)])?;
        let s = area_integral(&u, &ConeSpec::new(vec![0.3], 1.0, 1.0)?, opts)?;
        out.checks.push(Check::below(
            "closed-form area",
            "S_{1,1}u = 1 for u = y, d = 1, λ = 1/2",
            (s.value - 1.0).abs(),
            tol.closed_form_area,
            format!("S = {} ({})", s.value, s.verdict),
        ));

        let fields = curated_fields()?;
        let mut tab = Table::new("sandwich", &["field", "x", "a", "h", "psi_inner", "S", "psi_outer_2a", "ordered"]);
        let mut worst = f64::NEG_INFINITY;
        let mut all = true;
        for (label, f, x) in &fields {
            let cone = ConeSpec::new(vec![*x], 1.0, 1.0)?;
            let r = sandwich_residual(f.as_ref(), &cone, opts)?;
            let [lo, mid, hi] = r.triple();
            let slack = tol.sandwich * (1.0 + mid);
            let excess = (lo - mid).max(mid - hi);
            let ordered = excess <= slack;
            all &= ordered;
            worst = worst.max(excess / (1.0 + mid));
            tab.push(vec![json!(label), num(*x), num(1.0), num(1.0), num(lo), num(mid), num(hi), json!(ordered)]);
        }
        out.tables.push(tab);
        out.checks.push(Check::flag(
            "sandwich",
            "S^ψ_{a,h} ≤ S_{a,h} ≤ S^ψ_{2a,h}",
            all,
            worst,
            tol.sandwich,
            format!("{} curated fields, relative excess scaled by 1 + S", fields.len()),
        ));

        let mut worst = 0.0f64;
        let mut ok = true;
        for (_, f, x) in &fields {
            let r = dominance_check(f.as_ref(), &ConeSpec::new(vec![*x], 1.0, 1.0)?, opts)?;
            let (g, full) = (r.gradient.squared, r.full.squared);
            let gap = if r.invariant { (g - full).abs() / (1.0 + full) } else { ((g - full) / (1.0 + full)).max(0.0) };
            ok &= gap <= tol.dominance;
            worst = worst.max(gap);
        }
        out.checks.push(Check::flag(
            "gradient-form dominance",
            "cone integral of τ_x(2|∇u|²) ≤ S² with equality for G-invariant u",
            ok,
            worst,
            tol.dominance,
            format!("{} curated fields", fields.len()),
        ));

        let mut rng = ctx.rng(41);
        let mut worst = 0.0f64;
        for _ in 0..20 {
            let x = rng.gen_range(-1.5..1.5);
            let a = rng.gen_range(0.5..2.0);
            let cone = ConeSpec::new(vec![x], a, 1.0)?;
            let y = rng.gen_range(0.05..1.0);
            let gap = a * y * rng.gen_range(1.01..3.0);
            let t = if rng.gen_bool(0.5) { x.abs() + gap } else { (x.abs() - gap).min(-(x.abs() + gap)) };
            let t = if rng.gen_bool(0.5) { t } else { -t };
            if (t.abs() - x.abs()).abs() <= a * y {
                continue;
            }
            worst = worst.max(translated_cutoff(&[0.5], &cone, &[t], y)?.abs());
        }
        out.checks.push(Check::below(
            "cutoff support",
            "(τ_{-x/ay}ψ)(t/ay) vanishes when ||t| - |x|| > ay",
            worst,
            tol.cutoff_support,
            "20 random probes, λ = 1/2".into(),
        ));

        let (_, ind, x) = &fields[3];
        let sw = &ctx.config.area_sweep;
        let m = monotonicity_check(ind.as_ref(), &ConeSpec::new(vec![*x], 1.0, 1.0)?, &sw.apertures, &sw.heights, opts)?;
        let drop = |v: &[(f64, f64)]| v.windows(2).map(|w| (w[0].1 - w[1].1) / (1.0 + w[1].1)).fold(0.0f64, f64::max);
        let worst = drop(&m.by_aperture).max(drop(&m.by_height));
        out.checks.push(Check::below(
            "monotonicity",
            "S_{a,h} is nondecreasing in a and in h",
            worst,
            tol.monotonicity,
            format!("apertures {:?}, heights {:?}", sw.apertures, sw.heights),
        ));
        Ok(out)
    }
}

impl VerifySuite for Boundary {
    fn name(&self) -> &'static str {
        "boundary"
    }

    fn description(&self) -> &'static str {
        "Green formulas, maximum principle, gradient bound and a reduced three-way Fatou table"
    }

    fn run(&self, ctx: &SuiteContext) -> Result<SuiteOutput> {
        let tol = ctx.tol();
        let lam = ctx.lambda()?;
        let mut out = SuiteOutput::default();

        if lam.len() == 1 {
            let pairs = [
                ("x^2*y", "y^2 + x", 1.0, 0.5, 1.5),
                ("x^2 - 2*y^2", "x*y + y^3", 1.3, 0.2, 0.9),
                ("x^3*y + x*y^2 + x^2", "x*y^2 - y + x^4", 0.8, 0.1, 1.0),
                ("x^4*y^2", "x^2*y - x*y^3", 1.7, 0.3, 2.0),
                ("y^5 + x^2*y", "x^3 - x*y^2 + 1", 0.6, 0.05, 0.7),
            ];
            let (mut n, mut dn) = (0.0f64, 0.0f64);
            for (u, v, r, y0, y1) in pairs {
                let rep = green_residual(&lam, &Poly::parse(u, 1, true)?, &Poly::parse(v, 1, true)?, r, y0, y1)?;
                n = n.max(rep.residual_normal);
                dn = dn.max(rep.residual_dunkl);
            }
            out.checks.push(Check::below(
                "Green formula, normal derivative",
                "∫(vΔ_κu - uΔ_κv)W = ∮(v∂_nu - u∂_nv)W",
                n,
                tol.green,
                "5 polynomial pairs on d = 1 boxes".into(),
            ));
            out.checks.push(Check::below(
                "Green formula, Dunkl derivative",
                "∫(vΔ_κu - uΔ_κv)W = ∮(vD_nu - uD_nv)W",
                dn,
                tol.green,
                "5 polynomial pairs on d = 1 boxes".into(),
            ));
        }

        let lam_f = ctx.lambda_f64()?;
        let ind: Arc<dyn HarmonicField> =
            Arc::new(PoissonField::auto(&lam_f, Arc::new(Indicator { bounds: vec![(-1.0, 1.0); lam_f.len()] }))?);
        if lam.len() == 1 {
            let mut worst = f64::NEG_INFINITY;
            let cubic = harmonic_basis(&z2(lam.clone())?, 3)?.basis.remove(0);
            let fields: Vec<Arc<dyn HarmonicField>> = vec![
                Arc::new(PolyField::parse("x*y", lam.clone())?),
                Arc::new(PolyField::new(cubic, lam.clone())?),
                ind.clone(),
            ];
            for f in &fields {
                let r = max_principle_check(f.as_ref(), 1.5, 0.2, 1.5, 24)?;
                worst = worst.max(r.interior_max - r.boundary_max);
            }
            out.checks.push(Check::below(
                "maximum principle",
                "max |u| over a box is attained on its boundary",
                worst,
                tol.max_principle,
                "interior max minus boundary max, 3 fields".into(),
            ));
        }

        let x0 = vec![0.5; lam_f.len()];
        let coarse = gradient_bound_probe(ind.as_ref(), &x0, (1.0, 2.0), (0.5, 1.0), GradientGrid::default())?;
        let fine = gradient_bound_probe(ind.as_ref(), &x0, (1.0, 2.0), (0.5, 1.0), GradientGrid { levels: 10, per_level: 32 })?;
        let change = (fine.max_scaled_gradient - coarse.max_scaled_gradient).abs() / fine.max_scaled_gradient.max(1e-300);
        out.checks.push(Check::flag(
            "gradient bound",
            "y|∇u| bounded on Γ_a^h(x⁰) when |u| ≤ 1 on the wider cones",
            fine.max_scaled_gradient.is_finite() && change <= tol.gradient_stability,
            change,
            tol.gradient_stability,
            format!("max y|∇u| = {:.6} (coarse {:.6}), wide sup {:.6}", fine.max_scaled_gradient, coarse.max_scaled_gradient, fine.wide_sup),
        ));

        if lam.len() == 1 {
            let grid: Vec<Vec<f64>> = GridSpec::range(0.1, 1.9, 0.2, true).points()?.into_iter().map(|v| vec![v]).collect();
            let area = ctx.config.budgets.area;
            let seed = ctx.seed;
            let curated: [(Arc<dyn HarmonicField>, usize, Vec<Vec<f64>>, bool); 2] = [
                (ind.clone(), 16, vec![vec![-1.0], vec![1.0]], false),
                (Arc::new(KernelField::new(&lam_f)?), 28, vec![vec![0.0]], true),
            ];
            let mut tab = Table::new("fatou", &["field", "points", "decided", "agreements", "agreement_rate", "disagreements_designed"]);
            for (f, levels, designed, with_origin) in curated {
                let mut g = grid.clone();
                if with_origin {
                    g.push(vec![0.0]);
                }
                let opts = FatouOptions { nt: NtOptions { levels, ..ctx.config.budgets.nt }, area, designed, seed };
                let t = fatou_table(f.as_ref(), &g, 1.0, 1.0, &opts)?;
                let s = &t.summary;
                tab.push(vec![
                    json!(t.field),
                    json!(s.points),
                    json!(s.decided),
                    json!(s.agreements),
                    num(s.agreement_rate),
                    json!(s.disagreements_designed),
                ]);
                out.checks.push(Check::flag(
                    &format!("three-way agreement {}", t.field),
                    "non-tangential limit, non-tangential boundedness and finite S agree off the designed set",
                    s.agreement_rate >= tol.fatou_agreement && s.disagreements_designed,
                    s.agreement_rate,
                    tol.fatou_agreement,
                    format!("{} of {} decided points agree; disagreements at {:?}", s.agreements, s.decided, s.disagreement_points),
                ));
            }
            out.tables.push(tab);

            let nt = NtOptions { levels: 16, ..ctx.config.budgets.nt };
            let mut stable = true;
            let mut detail = Vec::new();
            for x in [0.5, 1.5] {
                let mut verdicts = Vec::new();
                for a in [0.5, 1.0, 2.0] {
                    let r = nt_limit_probe(ind.as_ref(), &ConeSpec::new(vec![x], a, 1.0)?, &nt, seed)?;
                    verdicts.push((r.bounded, r.limit_exists));
                }
                stable &= verdicts.windows(2).all(|w| w[0] == w[1]);
                detail.push(format!("x = {x}: {verdicts:?}"));
            }
            out.checks.push(Check::flag(
                "aperture robustness",
                "non-tangential verdicts do not depend on the aperture",
                stable,
                0.0,
                0.0,
                detail.join("; "),
            ));
        }
        Ok(out)
    }
}
