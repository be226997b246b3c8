//! A reduced error-vs-dimension sweep; pass a directory to also write
//! report.csv and summary.json.

use colloc::bench::{run_error_vs_dimension, ExperimentConfig, FunctionEntry};

fn main() -> colloc::Result<()> {
    let config = ExperimentConfig {
        k_max: vec![50],
        p: vec![1, 2, 4, 8],
        functions: vec![FunctionEntry::Id(1), FunctionEntry::Id(2)],
        n: 10_000,
        seed: 1,
        ..ExperimentConfig::default()
    };
    let report = run_error_vs_dimension(&config)?;
    for row in report.rows.iter().filter(|r| r.genz_id == 2) {
        println!(
            "{:<4} {:<20} p={:<2} relative error {:.2e}",
            row.method,
            row.dataset,
            row.p,
            row.relative_error.unwrap()
        );
    }
    if let Some(dir) = std::env::args().nth(1) {
        report.write_outputs(dir.as_ref())?;
    }
    Ok(())
}
