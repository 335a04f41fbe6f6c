use dunklkit_cli::config::ExperimentConfig;
use dunklkit_cli::experiments::run_experiment;
use dunklkit_cli::report::RunResults;
use dunklkit_cli::suites::{run_verify, SuiteContext};
use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

type Outcome = Result<(bool, String), String>;

struct Criterion {
    id: u32,
    title: &'static str,
    cap: Duration,
    run: fn() -> Outcome,
}

fn suite(name: &str) -> Result<RunResults, String> {
    let ctx = SuiteContext::new(ExperimentConfig::default(), None, None).map_err(|e| e.to_string())?;
    run_verify(name, &ctx).map_err(|e| e.to_string())
}

/// Every check whose name starts with `prefix` passed at a tolerance no
/// looser than `tol`.
fn checks(r: &RunResults, prefixes: &[(&str, f64)]) -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for (prefix, tol) in prefixes {
        let rows: Vec<&Vec<Value>> =
            r.tables[0].rows.iter().filter(|row| row[1].as_str().is_some_and(|n| n.starts_with(prefix))).collect();
        if rows.is_empty() {
            return Err(format!("no check named '{prefix}'"));
        }
        for row in rows {
            let passed = row[3].as_bool() == Some(true);
            let used = row[5].as_f64().unwrap_or(f64::INFINITY);
            ok &= passed && used <= *tol;
            notes.push(format!("{}={} (tol {used:e})", row[1].as_str().unwrap_or(""), row[4]));
        }
    }
    Ok((ok, notes.join("; ")))
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn load(name: &str) -> Result<ExperimentConfig, String> {
    let text = std::fs::read_to_string(configs().join(name)).map_err(|e| e.to_string())?;
    ExperimentConfig::from_toml(&text).map_err(|e| e.to_string())
}

fn commutativity() -> Outcome {
    checks(&suite("symbolic")?, &[("commutativity Z2^3", 0.0), ("commutativity A2", 0.0), ("commutativity B2", 0.0)])
}

fn square_identity() -> Outcome {
    checks(&suite("symbolic")?, &[("square identity Z2^2", 0.0), ("square identity B2", 0.0)])
}

fn mean_value() -> Outcome {
    checks(&suite("means")?, &[("mean-value property", 1e-7)])
}

fn normalizations() -> Outcome {
    checks(&suite("poisson")?, &[("kernel mass", 1e-8), ("translated kernel mass", 1e-6)])
}

fn translation() -> Outcome {
    checks(&suite("translation")?, &[("radial cross-check", 2e-6), ("classical shift", 1e-10)])
}

/// Extremes of the ratio table on the bundled 10³ grid.
const BOUNDS_PINS: [(&str, f64); 4] =
    [("min_lower", 0.72844), ("max_lower", 6.27682), ("min_upper", 0.71650), ("max_upper", 4.87185)];

fn poisson_bounds() -> Outcome {
    let r = run_experiment(&load("kernel_bounds.toml")?).map_err(|e| e.to_string())?;
    let points = r.summary.get("grid_points").and_then(Value::as_u64).unwrap_or(0);
    let mut ok = points == 1000;
    let mut notes = vec![format!("{points} points")];
    for (key, pin) in BOUNDS_PINS {
        let v = r.summary.get(key).and_then(Value::as_f64).unwrap_or(f64::NAN);
        let drift = (v - pin).abs() / pin;
        ok &= v.is_finite() && v > 0.0 && drift < 0.01;
        notes.push(format!("{key}={v:.6} (drift {drift:.1e})"));
    }
    Ok((ok, notes.join("; ")))
}

fn sandwich() -> Outcome {
    checks(&suite("area")?, &[("sandwich", 1e-5), ("closed-form area", 1e-6)])
}

fn green() -> Outcome {
    checks(&suite("boundary")?, &[("Green formula, normal derivative", 1e-4), ("Green formula, Dunkl derivative", 1e-4)])
}

fn fatou() -> Outcome {
    let r = run_experiment(&load("fatou_indicator.toml")?).map_err(|e| e.to_string())?;
    let t = r.tables.iter().find(|t| t.name == "agreement").ok_or("no agreement table")?;
    let col = |n: &str| t.columns.iter().position(|c| c == n).ok_or(format!("no column {n}"));
    let (field, rate, designed, pts) =
        (col("field")?, col("agreement_rate")?, col("disagreements_designed")?, col("disagreement_points")?);
    let mut ok = t.rows.len() == 2;
    let mut notes = Vec::new();
    for row in &t.rows {
        let a = row[rate].as_f64().unwrap_or(0.0);
        ok &= a >= 0.95 && row[designed].as_bool() == Some(true);
        notes.push(format!("{}: {a:.4}, disagreements {}", row[field].as_str().unwrap_or(""), row[pts]));
    }
    Ok((ok, notes.join("; ")))
}

fn run_all(threads: &str, out: &Path) -> Result<(), String> {
    let o = Command::new(env!("CARGO_BIN_EXE_dunklkit"))
        .args(["verify", "all", "--threads", threads, "--out"])
        .arg(out)
        .output()
        .map_err(|e| e.to_string())?;
    if o.status.code() != Some(0) {
        return Err(format!("verify all --threads {threads} exited with {:?}", o.status.code()));
    }
    Ok(())
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let (a, b) = (dir.path().join("t1"), dir.path().join("t8"));
    run_all("1", &a)?;
    run_all("8", &b)?;
    let mut names: Vec<_> = std::fs::read_dir(&a).map_err(|e| e.to_string())?.map(|e| e.unwrap().file_name()).collect();
    names.sort();
    let mut ok = !names.is_empty();
    for n in &names {
        let same = std::fs::read(a.join(n)).ok().zip(std::fs::read(b.join(n)).ok()).is_some_and(|(x, y)| x == y);
        ok &= same;
    }
    let count = std::fs::read_dir(&b).map_err(|e| e.to_string())?.count();
    ok &= count == names.len();
    Ok((ok, format!("{} files compared", names.len())))
}

fn main() -> ExitCode {
    let s = Duration::from_secs;
    let criteria = [
        Criterion { id: 1, title: "exact commutativity", cap: s(30), run: commutativity },
        Criterion { id: 2, title: "exact square identity", cap: s(60), run: square_identity },
        Criterion { id: 3, title: "mean-value property", cap: s(60), run: mean_value },
        Criterion { id: 4, title: "kernel normalizations", cap: s(120), run: normalizations },
        Criterion { id: 5, title: "translation cross-validation", cap: s(60), run: translation },
        Criterion { id: 6, title: "two-sided Poisson bounds", cap: s(120), run: poisson_bounds },
        Criterion { id: 7, title: "area sandwich and closed form", cap: s(180), run: sandwich },
        Criterion { id: 8, title: "Green identities", cap: s(60), run: green },
        Criterion { id: 9, title: "Fatou three-way table", cap: s(600), run: fatou },
        Criterion { id: 10, title: "determinism across thread counts", cap: s(600), run: determinism },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let (ok, detail) = match outcome {
            Ok((ok, d)) => (ok && elapsed < c.cap, d),
            Err(e) => (false, format!("error: {e}")),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "{} criterion {:>2} {}: {} [{:.1}s, cap {}s]",
            if ok { "PASS" } else { "FAIL" },
            c.id,
            c.title,
            detail,
            elapsed.as_secs_f64(),
            c.cap.as_secs()
        );
    }
    println!("{} of {} acceptance criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
