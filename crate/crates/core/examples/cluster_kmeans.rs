//! k-means++ with restarts: per-run sums of squares and the chosen run.

use colloc::cluster::{kmeans_pp_report, KmeParams};
use colloc::datagen::{DatasetKind, DatasetSpec};
use colloc::RngSpec;

fn main() -> colloc::Result<()> {
    let data = DatasetSpec::new(DatasetKind::CorrelatedGaussian, 3, 20_000).generate_benchmark(RngSpec::new(1))?;
    let report = kmeans_pp_report(&data, &KmeParams::new(25, 8)?, RngSpec::new(2))?;
    for (i, run) in report.runs.iter().enumerate() {
        println!(
            "run {i}: SOS {:.4} after {} Lloyd steps{}",
            run.sos,
            run.iteration_sos.len(),
            if run.converged { "" } else { " (cap reached)" }
        );
    }
    let best = report.best();
    println!("best run {} with {} clusters, SOS {:.4}", report.best, best.clustering.k(), best.sos);
    Ok(())
}
