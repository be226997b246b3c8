//! Divisive PCA splitting, stopped either by k_max or by the variance
//! threshold.

use colloc::cluster::{pca_split_report, PcaParams};
use colloc::datagen::{DatasetKind, DatasetSpec};
use colloc::RngSpec;

fn main() -> colloc::Result<()> {
    let data = DatasetSpec::new(DatasetKind::Polynomial, 4, 20_000).generate_benchmark(RngSpec::new(3))?;
    for alpha in [f64::EPSILON, 1e-3, 1e-2, 5e-2] {
        let outcome = pca_split_report(&data, &PcaParams::new(200, alpha)?)?;
        println!(
            "alpha {alpha:>8.1e}: {:>3} clusters, stop {:?}, SOS {:.4}",
            outcome.clustering.k(),
            outcome.stop,
            outcome.clustering.assigned_sos(&data)
        );
    }
    Ok(())
}
