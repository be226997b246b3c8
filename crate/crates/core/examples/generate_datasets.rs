//! Generates each benchmark data set and prints its column means and the
//! correlation between the first two columns.

use colloc::datagen::{DatasetKind, DatasetSpec};
use colloc::{DataMatrix, RngSpec};

fn correlation(data: &DataMatrix, a: usize, b: usize) -> f64 {
    let n = data.n_rows() as f64;
    let means = data.column_means();
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for row in data.rows() {
        let (x, y) = (row[a] - means[a], row[b] - means[b]);
        sab += x * y;
        saa += x * x;
        sbb += y * y;
    }
    (sab / n) / ((saa / n) * (sbb / n)).sqrt()
}

fn main() -> colloc::Result<()> {
    let specs = [
        DatasetSpec::new(DatasetKind::CorrelatedGaussian, 4, 50_000),
        DatasetSpec::new(DatasetKind::IidBeta, 4, 50_000),
        DatasetSpec::new(DatasetKind::Polynomial, 4, 50_000),
        DatasetSpec::new(DatasetKind::CopulaBeta, 2, 50_000).with_rho(0.8),
    ];
    for spec in specs {
        let data = spec.generate_benchmark(RngSpec::new(42))?;
        let means: Vec<String> = data.column_means().iter().map(|m| format!("{m:.3}")).collect();
        println!(
            "{:<26} means [{}]  corr(x1,x2) = {:.3}",
            spec.label(),
            means.join(", "),
            correlation(&data, 0, 1)
        );
    }
    Ok(())
}
