//! The six Genz integrands with default parameters, at a few points.

use colloc::genz::{CornerPeakForm, GenzSpec};

fn main() -> colloc::Result<()> {
    let points = [[0.0, 0.0], [0.5, 0.5], [0.25, 0.75], [0.6, 0.3]];
    for id in 1..=6 {
        let f = GenzSpec::standard(id, 2)?;
        let values: Vec<String> = points.iter().map(|x| format!("{:.6}", f.eval_unchecked(x))).collect();
        println!("f{id} {:<18} {}", f.name(), values.join("  "));
    }
    let mut classical = GenzSpec::standard(5, 2)?;
    classical.corner = CornerPeakForm::Classical;
    println!("f5 classical exponent at (0.5,0.5): {:.6}", classical.eval(&[0.5, 0.5])?);
    Ok(())
}
