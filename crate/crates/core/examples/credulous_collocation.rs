//! The Beta grid with empirical nearest-node weights on correlated copula
//! data, next to PCA nodes with the same budget.

use colloc::cluster::{pca_split, PcaParams};
use colloc::datagen::gen_copula_beta;
use colloc::genz::GenzSpec;
use colloc::quadrature::{apply_rule, credulous_sc, mc_reference, relative_error, TensorGridSpec};
use colloc::RngSpec;

fn main() -> colloc::Result<()> {
    let spec = TensorGridSpec { level: 3, p: 2, alpha: 2.0, beta: 5.0 };
    let f = GenzSpec::standard(3, 2)?;
    for rho in [0.0, 0.5, 0.8] {
        let data = gen_copula_beta(100_000, rho, 2.0, 5.0, RngSpec::new(8))?;
        let reference = mc_reference(&data, |x| f.eval_unchecked(x))?;
        let sc = credulous_sc(&data, &spec)?;
        let pca = pca_split(&data, &PcaParams::new(81, f64::EPSILON)?)?.to_rule();
        let err = |rule| -> colloc::Result<f64> { relative_error(apply_rule(rule, |x| f.eval_unchecked(x))?, reference) };
        println!(
            "rho {rho}: credulous SC {} nodes, error {:.2e}; PCA {} nodes, error {:.2e}",
            sc.len(),
            err(&sc)?,
            pca.len(),
            err(&pca)?
        );
    }
    Ok(())
}
