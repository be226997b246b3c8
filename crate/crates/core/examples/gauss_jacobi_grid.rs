//! One-dimensional Gauss-Jacobi rules for Beta(2,5) and the tensor grids
//! built from them.

use colloc::genz::GenzSpec;
use colloc::quadrature::{apply_rule, exact_beta_reference, gauss_jacobi_1d, tensor_grid, TensorGridSpec};

fn main() -> colloc::Result<()> {
    let rule = gauss_jacobi_1d(5, 2.0, 5.0)?;
    for (x, w) in rule.nodes.iter().zip(&rule.weights) {
        println!("node {x:.12}  weight {w:.12}");
    }
    let f = GenzSpec::standard(2, 2)?;
    let exact = exact_beta_reference(&f, 2.0, 5.0)?;
    println!("E[f2] under Beta(2,5) x Beta(2,5) = {exact:.15}");
    for level in 1..=5 {
        let grid = tensor_grid(&TensorGridSpec { level, p: 2, alpha: 2.0, beta: 5.0 })?;
        let est = apply_rule(&grid, |x| f.eval_unchecked(x))?;
        println!("l = {level}: {:>4} nodes, relative error {:.2e}", grid.len(), ((est - exact) / exact).abs());
    }
    Ok(())
}
