//! PCA, PMC, the full Gauss-Jacobi grid and credulous collocation on the
//! two-dimensional copula data as the node count grows. PMC errors are
//! averaged over the repeats.

use std::collections::BTreeMap;

use colloc::bench::{run_convergence_comparison, ExperimentConfig, FunctionEntry};

fn main() -> colloc::Result<()> {
    let config = ExperimentConfig {
        functions: vec![FunctionEntry::Id(1)],
        rhos: vec![0.0, 0.8],
        l_max: 5,
        pmc_repeats: 10,
        n: 100_000,
        seed: 3,
        ..ExperimentConfig::default()
    };
    let report = run_convergence_comparison(&config)?;
    let mut cells: BTreeMap<(String, usize, String), Vec<f64>> = BTreeMap::new();
    for row in report.rows.iter().filter(|r| r.reference_kind == "sample") {
        cells
            .entry((row.dataset.clone(), row.k_max, row.method.clone()))
            .or_default()
            .push(row.relative_error.unwrap());
    }
    for ((dataset, k, method), errors) in &cells {
        let mean = errors.iter().sum::<f64>() / errors.len() as f64;
        println!("{dataset:<20} k={k:<5} {method:<13} {mean:.2e}");
    }
    Ok(())
}
