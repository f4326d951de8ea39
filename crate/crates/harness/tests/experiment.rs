use adasmooth::solvers::{theoretical_bound, BoundKind, BoundParams};
use adasmooth::{Provenance, Trace};
use adasmooth_bench::experiment::{prepare, reference_provenance};
use adasmooth_bench::{
    gen_instance, run_experiment, run_sweep, sweep, AlgorithmSpec, ExperimentConfig, Family, HarnessError, InstanceSpec,
};

fn desk_config(out: &std::path::Path) -> ExperimentConfig {
    ExperimentConfig::from_toml(&format!(
        r#"
iters = 300
output_dir = "{}"

[instance]
family = "l1l1-lasso"
p = 50
n = 20
s = 5
lambda = 1.0
seed = 2024

[[algorithm]]
kind = "adaptive"

[[algorithm]]
kind = "nonadaptive"
gamma = 0.01
"#,
        out.display()
    ))
    .unwrap()
}

#[test]
fn config_round_trips_through_toml() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = desk_config(dir.path());
    cfg.algorithms.push(AlgorithmSpec::BotHendrich { c_a: 51.0, c_b: 49.0 });
    cfg.algorithms.push(AlgorithmSpec::SmoothG);
    assert_eq!(ExperimentConfig::from_toml(&cfg.to_toml()).unwrap(), cfg);
}

#[test]
fn invalid_configs_are_rejected() {
    let base = "[instance]\nfamily = \"sqrt-lasso\"\nlambda = 0.1\np = 5\nn = 3\ns = 1\n";
    let bad = [
        format!("iters = 0\n{base}[[algorithm]]\nkind = \"adaptive\"\n"),
        base.to_string(),
        format!("{base}[[algorithm]]\nkind = \"adaptive\"\nc_bar = 0.5\n"),
        format!("{base}[[algorithm]]\nkind = \"bot-hendrich\"\nc_a = 1.0\n"),
        format!("{base}[[algorithm]]\nkind = \"adaptive\"\ngamma = 1.0\n"),
        format!("{base}[[algorithm]]\nkind = \"adaptive\"\n[sweep]\nalgorithm = \"adaptive\"\ngamma1 = []\n"),
        format!("{base}[[algorithm]]\nkind = \"adaptive\"\n[sweep]\nalgorithm = \"adaptive\"\nmu = [1.0]\n"),
        format!("{base}[[algorithm]]\nkind = \"adaptive\"\n[sweep]\nalgorithm = \"nonadaptive\"\ngamma = [1.0]\n"),
    ];
    for text in &bad {
        assert!(
            matches!(ExperimentConfig::from_toml(text), Err(HarnessError::Config(_))),
            "{text}"
        );
    }
}

#[test]
fn generation_is_deterministic() {
    let spec = InstanceSpec {
        correlated: true,
        ..InstanceSpec::desk(Family::SqrtLasso, 0.5, 99)
    };
    assert_eq!(gen_instance(&spec).unwrap(), gen_instance(&spec).unwrap());
    let other = InstanceSpec { seed: 100, ..spec };
    assert_ne!(gen_instance(&spec).unwrap().rhs, gen_instance(&other).unwrap().rhs);
}

#[test]
fn experiment_writes_parseable_traces() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = desk_config(dir.path());
    let rows = run_experiment(&cfg).unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0].label, "00-adaptive");
    for row in &rows {
        let text = std::fs::read_to_string(dir.path().join(format!("{}.csv", row.label))).unwrap();
        let trace = Trace::from_csv(&text).unwrap();
        assert_eq!(trace.rows.len(), 300);
        assert_eq!(trace.to_csv(), text);
        assert!(row.final_gap >= -1e-9);
        assert!(row.best_objective <= row.final_objective);
    }
    let summary = std::fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 3);
    assert!(summary.starts_with("label,algorithm,params,iters,final_objective"));
}

#[test]
fn adaptive_bound_column_is_the_optimized_rate() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = desk_config(dir.path());
    let prep = prepare(&cfg).unwrap();
    assert_eq!(reference_provenance(&prep), Some(Provenance::LpOracle));
    let p = prep.problem.composite().unwrap();
    run_experiment(&cfg).unwrap();
    let trace = Trace::from_csv(&std::fs::read_to_string(dir.path().join("00-adaptive.csv")).unwrap()).unwrap();
    let params = BoundParams {
        r0: Some(prep.r0),
        opnorm: Some(p.opnorm),
        diameter: Some(p.f.prox_diameter()),
        ..Default::default()
    };
    for w in trace.rows.windows(2) {
        assert!(w[1].bound_adaptive < w[0].bound_adaptive);
    }
    for row in &trace.rows {
        let eq = theoretical_bound(BoundKind::AdaptiveOptimal, &params, row.k).unwrap();
        assert!((row.bound_adaptive - eq).abs() <= 1e-12 * eq);
        assert!(row.gap <= row.bound_adaptive + 1e-9);
    }
}

#[test]
fn every_algorithm_runs_on_its_family() {
    let cases = [
        (Family::SqrtLasso, "kind = \"smooth-g\"", ""),
        (Family::SqrtLasso, "kind = \"bot-hendrich\"\nc_a = 1.0\nc_b = 1.0", ""),
        (Family::L1l1Lasso, "kind = \"double-prox\"", "design = \"identity\"\n"),
        (Family::ConstrainedLp, "kind = \"dual-primal\"", "noise_sigma = 0.0\n"),
    ];
    for (family, alg, extra) in cases {
        let dir = tempfile::tempdir().unwrap();
        let text = format!(
            "iters = 200\noutput_dir = \"{}\"\n[instance]\nfamily = \"{}\"\np = 12\nn = 6\ns = 2\nlambda = 0.2\n{extra}[[algorithm]]\n{alg}\n",
            dir.path().display(),
            family.name()
        );
        let rows = run_experiment(&ExperimentConfig::from_toml(&text).unwrap()).unwrap();
        assert!(rows[0].final_objective.is_finite(), "{alg}");
    }
}

#[test]
fn algorithms_refuse_the_wrong_family() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("sqrt-lasso", "kind = \"double-prox\""),
        ("sqrt-lasso", "kind = \"dual-primal\""),
        ("constrained-lp", "kind = \"adaptive\""),
    ];
    for (family, alg) in cases {
        let text = format!(
            "iters = 5\noutput_dir = \"{}\"\n[instance]\nfamily = \"{family}\"\np = 6\nn = 3\ns = 1\nlambda = 0.2\n[[algorithm]]\n{alg}\n",
            dir.path().display()
        );
        let err = run_experiment(&ExperimentConfig::from_toml(&text).unwrap()).unwrap_err();
        assert_eq!(err.exit_code(), 2, "{family} {alg}: {err}");
    }
}

#[test]
fn deblur_reports_psnr_checkpoints() {
    let dir = tempfile::tempdir().unwrap();
    let text = format!(
        "iters = 600\nreport_every = 100\noutput_dir = \"{}\"\n[instance]\nfamily = \"deblur-l1\"\nheight = 32\nwidth = 32\nlambda = 1e-4\nnoise_sigma = 0.01\n[[algorithm]]\nkind = \"adaptive\"\ngamma1 = 0.5\n",
        dir.path().display()
    );
    let rows = run_experiment(&ExperimentConfig::from_toml(&text).unwrap()).unwrap();
    let ks: Vec<usize> = rows[0].psnr.iter().map(|p| p.0).collect();
    assert_eq!(ks, vec![300, 500, 600]);
    let summary = std::fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    assert!(summary.starts_with("# observed_psnr: "));
}

#[test]
fn sweep_is_deterministic_and_sorted() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = desk_config(dir.path());
    cfg.iters = 100;
    cfg.algorithms = vec![AlgorithmSpec::Adaptive {
        gamma1: None,
        c_bar: 1.0,
    }];
    cfg.sweep = Some(toml::from_str("algorithm = \"adaptive\"\ngamma1 = [100.0, 1.0, 10.0, 0.1]\n").unwrap());
    let a = run_sweep(&cfg).unwrap();
    let b = sweep(&cfg).unwrap();
    // NaN columns rule out PartialEq; the Debug form of f64 round-trips exactly.
    assert_eq!(format!("{a:?}"), format!("{b:?}"));
    let values: Vec<f64> = a.points.iter().map(|p| p.params[0].1).collect();
    assert_eq!(values, vec![0.1, 1.0, 10.0, 100.0]);
    let best = a.best_point().summary.final_objective;
    assert!(a.points.iter().all(|p| p.summary.final_objective >= best));
    assert!(dir.path().join("sweep_summary.csv").exists());
}

#[test]
fn single_point_sweep_returns_that_point() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = desk_config(dir.path());
    cfg.iters = 20;
    cfg.sweep = Some(toml::from_str("algorithm = \"nonadaptive\"\ngamma = [0.3]\n").unwrap());
    let r = sweep(&cfg).unwrap();
    assert_eq!(r.points.len(), 1);
    assert_eq!(r.best, 0);
    assert_eq!(r.best_point().params, vec![("gamma".to_string(), 0.3)]);
}

#[test]
fn lambda_sweep_rebuilds_the_problem() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = desk_config(dir.path());
    cfg.iters = 50;
    cfg.sweep = Some(toml::from_str("algorithm = \"adaptive\"\nlambda = [0.5, 2.0]\ngamma1 = [1.0]\n").unwrap());
    let r = sweep(&cfg).unwrap();
    assert_eq!(r.points.len(), 2);
    // larger lambda cannot lower the optimal value, and both points carry LP gaps
    assert!(r.points.iter().all(|p| p.summary.final_gap >= -1e-9));
    assert_eq!(r.points[0].params[1], ("lambda".to_string(), 0.5));
}
