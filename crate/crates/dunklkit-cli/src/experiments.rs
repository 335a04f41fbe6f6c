//! Config-driven experiments, looked up by name.

use crate::config::ExperimentConfig;
use crate::report::{num, opt_num, RunResults, Table};
use dunklkit::area::{area_integral, ConeSpec, CONSTANT_CONVENTION};
use dunklkit::boundary::{fatou_table, FatouOptions, NtOptions, NT_COLUMNS};
use dunklkit::poisson::kernel_bound_ratio;
use dunklkit::{Error, Result};
use serde_json::{json, Value};

pub trait Experiment: Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    fn run(&self, cfg: &ExperimentConfig, out: &mut RunResults) -> Result<()>;
}

struct Fatou;
struct KernelBounds;
struct AreaSweep;

static EXPERIMENTS: [&dyn Experiment; 3] = [&Fatou, &KernelBounds, &AreaSweep];

pub fn experiments() -> &'static [&'static dyn Experiment] {
    &EXPERIMENTS
}

pub fn experiment_names() -> Vec<&'static str> {
    EXPERIMENTS.iter().map(|e| e.name()).collect()
}

pub fn find_experiment(name: &str) -> Result<&'static dyn Experiment> {
    EXPERIMENTS.iter().copied().find(|e| e.name() == name).ok_or_else(|| {
        Error::Validation(format!("unknown experiment '{name}'; known experiments: {}", experiment_names().join(", ")))
    })
}

/// Runs the experiment named in `cfg`.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunResults> {
    cfg.validate()?;
    let e = find_experiment(&cfg.experiment)?;
    let mut out = RunResults::new("experiment", e.name(), cfg.seed);
    out.metadata.insert("constant_convention".into(), CONSTANT_CONVENTION.into());
    out.metadata.insert("config".into(), cfg.to_toml());
    e.run(cfg, &mut out)?;
    Ok(out)
}

/// Tensor grid of the configured boundary points in dimension `d`.
fn boundary_grid(values: &[f64], d: usize) -> Vec<Vec<f64>> {
    let mut pts: Vec<Vec<f64>> = vec![Vec::new()];
    for _ in 0..d {
        pts = pts.iter().flat_map(|p| values.iter().map(move |v| [p.as_slice(), &[*v]].concat())).collect();
    }
    pts
}

fn fmt_point(p: &[f64]) -> String {
    p.iter().map(|v| format!("{v}")).collect::<Vec<_>>().join(";")
}

impl Experiment for Fatou {
    fn name(&self) -> &'static str {
        "fatou"
    }

    fn description(&self) -> &'static str {
        "three-way table of non-tangential limit, boundedness and finite area integral"
    }

    fn run(&self, cfg: &ExperimentConfig, out: &mut RunResults) -> Result<()> {
        if cfg.fields.is_empty() {
            return Err(Error::Validation("fatou experiment needs at least one [[fields]] entry".into()));
        }
        let lambda = cfg.root_system.exact_multiplicities()?;
        cfg.root_system.z2_lambda()?;
        let values = cfg.grid.points()?;
        let grid = boundary_grid(&values, lambda.len());
        let mut agreement = Table::new(
            "agreement",
            &["field", "points", "decided", "agreements", "disagreements", "agreement_rate", "disagreements_designed", "disagreement_points"],
        );
        let mut verdicts = Table::new("verdicts", &["field", "x", "designed", "agree"]);
        let mut nt_tables = Vec::new();
        let mut passed = true;
        let mut worst_rate = 1.0f64;
        for (i, spec) in cfg.fields.iter().enumerate() {
            let built = spec.build(&lambda)?;
            let nt = NtOptions { levels: spec.nt_levels.unwrap_or(cfg.budgets.nt.levels), ..cfg.budgets.nt };
            let opts = FatouOptions { nt, area: cfg.budgets.area, designed: built.designed.clone(), seed: cfg.seed };
            log::info!("fatou table for {} on {} points", built.field.label(), grid.len());
            let t = fatou_table(built.field.as_ref(), &grid, cfg.cone.aperture, cfg.cone.height, &opts)?;
            let mut nt_table = Table::new(format!("nt_{i}"), &NT_COLUMNS);
            for row in &t.rows {
                let r = row.report.record();
                nt_table.push(vec![
                    json!(r.x),
                    num(r.a),
                    num(r.h),
                    json!(r.bounded),
                    json!(r.limit_exists),
                    opt_num(r.limit_value),
                    opt_num(r.s_value),
                    r.s_verdict.map_or(Value::Null, |v| json!(v.to_string())),
                    json!(r.seed),
                ]);
                verdicts.push(vec![
                    json!(t.field),
                    json!(r.x),
                    json!(row.designed),
                    row.agree.map_or(Value::Null, |a| json!(a)),
                ]);
            }
            nt_tables.push(nt_table);
            let s = &t.summary;
            let pts: Vec<String> = s.disagreement_points.iter().map(|p| fmt_point(p)).collect();
            agreement.push(vec![
                json!(t.field),
                json!(s.points),
                json!(s.decided),
                json!(s.agreements),
                json!(s.disagreements),
                num(s.agreement_rate),
                json!(s.disagreements_designed),
                json!(pts.join(" ")),
            ]);
            passed &= s.agreement_rate >= cfg.tolerances.fatou_agreement && s.disagreements_designed;
            worst_rate = worst_rate.min(s.agreement_rate);
        }
        out.tables.push(agreement);
        out.tables.push(verdicts);
        out.tables.extend(nt_tables);
        out.summary.insert("min_agreement_rate".into(), num(worst_rate));
        out.summary.insert("required_agreement_rate".into(), num(cfg.tolerances.fatou_agreement));
        out.passed = passed;
        Ok(())
    }
}

impl Experiment for KernelBounds {
    fn name(&self) -> &'static str {
        "kernel_bounds"
    }

    fn description(&self) -> &'static str {
        "lower and upper ratios of the translated Poisson kernel against its two-sided bounds on Z2^1"
    }

    fn run(&self, cfg: &ExperimentConfig, out: &mut RunResults) -> Result<()> {
        let lam = cfg.root_system.z2_lambda()?;
        if lam.len() != 1 {
            return Err(Error::Dimension { expected: 1, got: lam.len() });
        }
        let kb = &cfg.kernel_bounds;
        let rep = kernel_bound_ratio(lam[0], &kb.x.points()?, &kb.t.points()?, &kb.y.points()?)?;
        let mut entries = Table::new("entries", &["x", "t", "y", "kernel", "lower_ratio", "upper_ratio", "ball_ratio"]);
        for e in &rep.entries {
            entries.push(vec![num(e.x), num(e.t), num(e.y), num(e.kernel), num(e.lower_ratio), num(e.upper_ratio), num(e.ball_ratio)]);
        }
        let ext = [
            ("lower", rep.min_lower, rep.max_lower),
            ("upper", rep.min_upper, rep.max_upper),
            ("ball", rep.min_ball_ratio, rep.max_ball_ratio),
        ];
        let mut extremes = Table::new("extremes", &["ratio", "min", "max", "finite_positive"]);
        let mut ok = true;
        for (name, lo, hi) in ext {
            let good = lo.is_finite() && hi.is_finite() && lo > 0.0 && hi > 0.0;
            ok &= good;
            extremes.push(vec![json!(name), num(lo), num(hi), json!(good)]);
            out.summary.insert(format!("min_{name}"), num(lo));
            out.summary.insert(format!("max_{name}"), num(hi));
        }
        out.summary.insert("grid_points".into(), json!(rep.entries.len()));
        out.tables.push(extremes);
        out.tables.push(entries);
        out.passed = ok;
        Ok(())
    }
}

impl Experiment for AreaSweep {
    fn name(&self) -> &'static str {
        "area_sweep"
    }

    fn description(&self) -> &'static str {
        "area integral over apertures and heights for each field and boundary point"
    }

    fn run(&self, cfg: &ExperimentConfig, out: &mut RunResults) -> Result<()> {
        if cfg.fields.is_empty() {
            return Err(Error::Validation("area_sweep experiment needs at least one [[fields]] entry".into()));
        }
        let lambda = cfg.root_system.exact_multiplicities()?;
        cfg.root_system.z2_lambda()?;
        let grid = boundary_grid(&cfg.grid.points()?, lambda.len());
        let sw = &cfg.area_sweep;
        if sw.apertures.is_empty() || sw.heights.is_empty() {
            return Err(Error::Validation("area_sweep needs apertures and heights".into()));
        }
        let mut tab = Table::new("area", &["field", "x", "a", "h", "S_value", "S_squared", "S_verdict"]);
        let mut monotone = true;
        for spec in &cfg.fields {
            let f = spec.build(&lambda)?.field;
            for x in &grid {
                let mut values = Vec::new();
                for &a in &sw.apertures {
                    for &h in &sw.heights {
                        let r = area_integral(f.as_ref(), &ConeSpec::new(x.clone(), a, h)?, cfg.budgets.area)?;
                        tab.push(vec![
                            json!(f.label()),
                            json!(fmt_point(x)),
                            num(a),
                            num(h),
                            num(r.value),
                            num(r.squared),
                            json!(r.verdict.to_string()),
                        ]);
                        values.push((a, h, r));
                    }
                }
                for (a1, h1, r1) in &values {
                    for (a2, h2, r2) in &values {
                        if a1 <= a2 && h1 <= h2 && r1.is_finite() && r2.is_finite() {
                            monotone &= r1.value <= r2.value * (1.0 + cfg.tolerances.monotonicity);
                        }
                    }
                }
            }
        }
        out.tables.push(tab);
        out.summary.insert("monotone".into(), json!(monotone));
        out.passed = monotone;
        Ok(())
    }
}
