use std::path::Path;

use colloc::bench::{
    run_convergence_comparison, run_error_vs_dimension, run_error_vs_k, run_timing, DatasetTemplate,
    ExperimentConfig, ExperimentReport, FunctionEntry, MethodConfig, REPORT_COLUMNS,
};
use colloc::datagen::DatasetKind;
use colloc::quadrature::relative_error;

fn small_sweep() -> ExperimentConfig {
    ExperimentConfig {
        k_max: vec![4, 8],
        p: vec![1, 3],
        functions: vec![FunctionEntry::Id(1), FunctionEntry::Id(2), FunctionEntry::Id(6)],
        methods: vec![
            MethodConfig::Pmc { repeats: 1 },
            MethodConfig::Pca { alpha: f64::EPSILON },
            MethodConfig::Rsc { m: 40 },
            MethodConfig::Kme { r: 3 },
        ],
        n: 400,
        seed: 77,
        ..ExperimentConfig::default()
    }
}

fn assert_rows_consistent(report: &ExperimentReport) {
    for row in &report.rows {
        let (est, reference) = (row.estimate.unwrap(), row.reference.unwrap());
        assert_eq!(row.relative_error.unwrap(), relative_error(est, reference).unwrap());
        assert!(row.n_nodes <= row.k_max);
    }
}

#[test]
fn dimension_sweep_shape_and_consistency() {
    let config = small_sweep();
    let report = run_error_vs_dimension(&config).unwrap();
    // 4 methods x 3 data sets x 2 dimensions x 2 k values x 3 functions.
    assert_eq!(report.rows.len(), 4 * 3 * 2 * 2 * 3);
    assert_rows_consistent(&report);
    let header = report.to_csv().lines().next().unwrap().to_string();
    assert_eq!(header, REPORT_COLUMNS.join(","));
}

#[test]
fn dimension_sweep_matches_golden_file() {
    let report = run_error_vs_dimension(&small_sweep()).unwrap();
    let csv = report.to_csv_without_timing();
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/dim_small.csv");
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, &csv).unwrap();
    }
    let golden = std::fs::read_to_string(&path).expect("golden file; rerun with UPDATE_GOLDEN=1");
    assert_eq!(csv, golden);
}

#[test]
fn reports_are_byte_stable() {
    let a = run_error_vs_k(&small_sweep()).unwrap();
    let b = run_error_vs_k(&small_sweep()).unwrap();
    assert_eq!(a.to_csv_without_timing(), b.to_csv_without_timing());
}

#[test]
fn disk_cache_reproduces_fresh_run() {
    let dir = tempfile::tempdir().unwrap();
    let cached = ExperimentConfig {
        cache_dir: Some(dir.path().to_path_buf()),
        ..small_sweep()
    };
    let fresh = run_error_vs_dimension(&small_sweep()).unwrap();
    let first = run_error_vs_dimension(&cached).unwrap();
    let second = run_error_vs_dimension(&cached).unwrap();
    assert!(std::fs::read_dir(dir.path()).unwrap().count() >= 6);
    assert_eq!(fresh.to_csv_without_timing(), first.to_csv_without_timing());
    assert_eq!(first.to_csv_without_timing(), second.to_csv_without_timing());
}

#[test]
fn pca_error_vanishes_at_k_equal_n() {
    let config = ExperimentConfig {
        datasets: vec![DatasetTemplate::new(DatasetKind::IidBeta)],
        methods: vec![MethodConfig::Pca { alpha: f64::EPSILON }],
        k_max: vec![5, 20, 80],
        p: vec![4],
        functions: vec![FunctionEntry::Id(1), FunctionEntry::Id(2)],
        n: 80,
        ..ExperimentConfig::default()
    };
    let report = run_error_vs_k(&config).unwrap();
    for row in report.rows.iter().filter(|r| r.k_max == 80) {
        assert!(row.relative_error.unwrap() < 1e-13);
    }
}

#[test]
fn empty_k_list_gives_empty_report() {
    let config = ExperimentConfig {
        k_max: vec![],
        ..small_sweep()
    };
    assert!(run_error_vs_k(&config).unwrap().rows.is_empty());
}

#[test]
fn convergence_report_layout() {
    let config = ExperimentConfig {
        datasets: vec![DatasetTemplate::new(DatasetKind::CopulaBeta)],
        functions: vec![FunctionEntry::Id(1), FunctionEntry::Id(2)],
        rhos: vec![0.0, 0.8],
        l_max: 3,
        pmc_repeats: 4,
        n: 2000,
        seed: 5,
        ..ExperimentConfig::default()
    };
    let report = run_convergence_comparison(&config).unwrap();
    assert_rows_consistent(&report);
    let count = |method: &str, kind: &str| {
        report.rows.iter().filter(|r| r.method == method && r.reference_kind == kind).count()
    };
    // Three levels, two functions; sample rows for both rhos, exact rows for rho = 0 only.
    assert_eq!(count("pca", "sample"), 3 * 2 * 2);
    assert_eq!(count("pca", "exact-beta"), 3 * 2);
    assert_eq!(count("pmc", "sample"), 3 * 2 * 2 * 4);
    assert_eq!(count("grid", "exact-beta"), 3 * 2);
    let ks: Vec<usize> = report.rows.iter().map(|r| r.k_max).collect();
    assert!(ks.iter().all(|k| [9, 25, 81].contains(k)));
    for row in report.rows.iter().filter(|r| r.method == "grid") {
        assert_eq!(row.n_nodes, row.k_max);
    }
}

#[test]
fn timing_rows_are_positive_and_have_no_estimates() {
    let config = ExperimentConfig {
        datasets: vec![DatasetTemplate::new(DatasetKind::CorrelatedGaussian)],
        k_max: vec![10],
        p: vec![2],
        n: 500,
        ..small_sweep()
    };
    let report = run_timing(&config).unwrap();
    assert_eq!(report.rows.len(), 4);
    assert!(report.rows.iter().all(|r| r.wall_time_ns > 0 && r.estimate.is_none()));
}

#[test]
fn outputs_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let report = run_error_vs_dimension(&small_sweep()).unwrap();
    report.write_outputs(dir.path()).unwrap();
    let csv = std::fs::read_to_string(dir.path().join("report.csv")).unwrap();
    assert_eq!(csv.lines().count(), report.rows.len() + 1);
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("summary.json")).unwrap()).unwrap();
    assert!(summary.is_object());
}
