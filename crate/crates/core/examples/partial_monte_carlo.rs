//! Spread of the partial Monte-Carlo estimate over repeated subsamples.

use colloc::cluster::pmc;
use colloc::datagen::{DatasetKind, DatasetSpec};
use colloc::genz::GenzSpec;
use colloc::quadrature::{apply_rule, mc_reference, relative_error};
use colloc::RngSpec;

fn main() -> colloc::Result<()> {
    let data = DatasetSpec::new(DatasetKind::IidBeta, 4, 100_000).generate_benchmark(RngSpec::new(6))?;
    let f = GenzSpec::standard(1, 4)?;
    let reference = mc_reference(&data, |x| f.eval_unchecked(x))?;
    for k in [10, 40, 160, 640, 2560] {
        let errors: Vec<f64> = (0..25)
            .map(|rep| {
                let rule = pmc(&data, k, RngSpec::new(7).derive(&[k as u64, rep]))?;
                relative_error(apply_rule(&rule, |x| f.eval_unchecked(x))?, reference)
            })
            .collect::<colloc::Result<_>>()?;
        let mean = errors.iter().sum::<f64>() / errors.len() as f64;
        let max = errors.iter().cloned().fold(0.0, f64::max);
        println!("k = {k:>4}: mean relative error {mean:.2e}, max {max:.2e}");
    }
    Ok(())
}
