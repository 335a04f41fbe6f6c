use dunklkit_cli::config::{ExperimentConfig, GridSpec, Multiplicity};
use dunklkit_cli::report::{emit_report, from_json, num, to_json, Format, RunResults, Table};
use dunklkit_cli::suites::{find_suite, run_verify, SuiteContext};
use std::path::Path;
use std::process::Command;

const BIN: &str = env!("CARGO_BIN_EXE_dunklkit");

fn configs() -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn dunklkit(args: &[&str]) -> (i32, String, String) {
    let o = Command::new(BIN).args(args).output().expect("binary runs");
    (o.status.code().unwrap_or(-1), String::from_utf8_lossy(&o.stdout).into(), String::from_utf8_lossy(&o.stderr).into())
}

#[test]
fn default_config_round_trips() {
    let cfg = ExperimentConfig::default();
    let back = ExperimentConfig::from_toml(&cfg.to_toml()).unwrap();
    assert_eq!(back, cfg);
}

#[test]
fn bundled_configs_round_trip() {
    for entry in std::fs::read_dir(configs()).unwrap() {
        let p = entry.unwrap().path();
        let cfg = ExperimentConfig::from_toml(&std::fs::read_to_string(&p).unwrap()).unwrap();
        let again = ExperimentConfig::from_toml(&cfg.to_toml()).unwrap();
        assert_eq!(again, cfg, "{}", p.display());
        assert_eq!(again.to_toml(), cfg.to_toml());
    }
}

#[test]
fn parse_error_reports_line_and_column() {
    let err = ExperimentConfig::from_toml("seed = 1\n[cone]\naperture = = 2\n").unwrap_err();
    match err {
        dunklkit::Error::Parse { column, msg } => {
            assert!(msg.starts_with("line 3"), "{msg}");
            assert!(column > 1);
        }
        e => panic!("unexpected {e:?}"),
    }
    assert!(ExperimentConfig::from_toml("bogus_key = 3").is_err());
}

#[test]
fn negative_multiplicity_is_a_domain_error() {
    let e = Multiplicity::Text("-1/3".into()).to_rat().unwrap_err();
    assert!(matches!(e, dunklkit::Error::Domain(_)));
    let r = SuiteContext::new(ExperimentConfig::default(), Some(vec![Multiplicity::Number(-0.5)]), None);
    assert!(matches!(r, Err(dunklkit::Error::Domain(_))));
}

#[test]
fn empty_grid_is_rejected() {
    let e = GridSpec::default().points().unwrap_err();
    assert_eq!(e, dunklkit::Error::Validation("empty grid".into()));
    let g = GridSpec::range(0.5, 1.0, 0.25, true).points().unwrap();
    assert_eq!(g, vec![-1.0, -0.75, -0.5, 0.5, 0.75, 1.0]);
}

#[test]
fn unknown_suite_is_a_validation_error() {
    assert!(find_suite("spectral").is_err());
    assert_eq!(find_suite("all").unwrap().len(), 6);
}

#[test]
fn symbolic_suite_reports_commutativity() {
    let ctx = SuiteContext::new(ExperimentConfig::default(), None, None).unwrap();
    let r = run_verify("symbolic", &ctx).unwrap();
    assert!(r.passed);
    let checks = &r.tables[0];
    assert!(checks.rows.iter().any(|row| row[2] == "commutativity D_iD_j" && row[3] == true));
    assert!(r.metadata.contains_key("constant_convention"));
}

fn sample() -> RunResults {
    let mut r = RunResults::new("experiment", "sample", 5);
    let mut t = Table::new("one", &["a", "b"]);
    t.push(vec![num(0.1 + 0.2), serde_json::json!("x")]);
    let mut u = Table::new("two", &["c"]);
    u.push(vec![num(1e-300)]);
    r.tables.push(t);
    r.tables.push(u);
    r
}

#[test]
fn emission_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let r = sample();
    for fmt in [Format::Json, Format::Csv] {
        let ext = if fmt == Format::Json { "json" } else { "csv" };
        let a = emit_report(&r, fmt, &dir.path().join(format!("a.{ext}"))).unwrap();
        let b = emit_report(&r, fmt, &dir.path().join(format!("b.{ext}"))).unwrap();
        assert_eq!(a.len(), b.len());
        for (p, q) in a.iter().zip(&b) {
            assert_eq!(std::fs::read(p).unwrap(), std::fs::read(q).unwrap());
        }
    }
    let text = std::fs::read_to_string(dir.path().join("a.json")).unwrap();
    assert_eq!(from_json(&text).unwrap(), r);
    assert_eq!(to_json(&from_json(&text).unwrap()), text);
}

#[test]
fn csv_header_matches_schema() {
    let dir = tempfile::tempdir().unwrap();
    let paths = emit_report(&sample(), Format::Csv, &dir.path().join("r.csv")).unwrap();
    assert_eq!(paths[0].file_name().unwrap(), "r.one.csv");
    let text = std::fs::read_to_string(&paths[0]).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "# dunklkit-report/1 table=one");
    assert_eq!(lines.next().unwrap(), "a,b");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let (code, _, err) = dunklkit(&["verify", "symbolic", "--out", out]);
    assert_eq!(code, 0, "{err}");
    assert!(dir.path().join("verify_symbolic.json").exists());

    let (code, _, err) = dunklkit(&["verify", "all", "--lambda=-1/2", "--out", out]);
    assert_eq!(code, 2);
    assert!(err.contains("domain error"), "{err}");

    let (code, _, err) = dunklkit(&["verify", "nonsense"]);
    assert_eq!(code, 2);
    assert!(err.contains("unknown suite"), "{err}");

    let cfg = dir.path().join("empty.toml");
    std::fs::write(&cfg, "experiment = \"fatou\"\n[[fields]]\nkind = \"kernel\"\n").unwrap();
    let (code, _, err) = dunklkit(&["run", cfg.to_str().unwrap(), "--out", out]);
    assert_eq!(code, 2);
    assert!(err.contains("empty grid"), "{err}");

    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "seed = 3\n[cone]\naperture = = 1\n").unwrap();
    let (code, _, err) = dunklkit(&["run", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("line 3") && err.contains("column"), "{err}");

    let (code, _, _) = dunklkit(&["report", dir.path().join("missing.json").to_str().unwrap(), "x.csv"]);
    assert_eq!(code, 3);

    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "").unwrap();
    let target = blocker.join("sub");
    let (code, _, _) = dunklkit(&["verify", "symbolic", "--out", target.to_str().unwrap()]);
    assert_eq!(code, 3);
}

#[test]
fn report_converts_between_formats() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("in.json");
    emit_report(&sample(), Format::Json, &json).unwrap();
    let back = dir.path().join("back.json");
    let (code, _, err) = dunklkit(&["report", json.to_str().unwrap(), back.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(std::fs::read(&json).unwrap(), std::fs::read(&back).unwrap());
    let csv = dir.path().join("out.csv");
    let (code, _, _) = dunklkit(&["report", json.to_str().unwrap(), csv.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(dir.path().join("out.two.csv").exists());
}

#[test]
fn kernel_bounds_config_runs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = configs().join("kernel_bounds.toml");
    let (code, stdout, err) = dunklkit(&["run", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    assert!(stdout.contains("grid_points = 1000"));
    let r = from_json(&std::fs::read_to_string(dir.path().join("kernel_bounds.json")).unwrap()).unwrap();
    for k in ["min_lower", "max_lower", "min_upper", "max_upper"] {
        let v = r.summary[k].as_f64().unwrap();
        assert!(v.is_finite() && v > 0.0, "{k} = {v}");
    }
}
