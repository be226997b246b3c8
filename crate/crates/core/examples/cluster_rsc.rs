//! Random split-and-combine: the lambda schedule and a condensed trace.

use colloc::cluster::{rsc_traced, RscAction, RscParams};
use colloc::datagen::{DatasetKind, DatasetSpec};
use colloc::RngSpec;

fn main() -> colloc::Result<()> {
    let data = DatasetSpec::new(DatasetKind::IidBeta, 2, 5_000).generate_benchmark(RngSpec::new(4))?;
    let params = RscParams::new(20, 200)?;
    println!("k_max = {}, M = {}, lambda = {:.6}", params.k_max, params.m, params.lambda);
    let (clustering, trace) = rsc_traced(&data, &params, RngSpec::new(5))?;
    for e in trace.events.iter().filter(|e| e.t % 20 == 0 || e.t == 2) {
        println!("t={:>3}  k {:>2} -> {:>2}  P(split) {:.3}  {:?}", e.t, e.k_before, e.k_after, e.p_split, e.action);
    }
    let combines = trace.events.iter().filter(|e| e.action == RscAction::Combine).count();
    println!(
        "{combines} combines; final k = {}, SOS {:.4} -> {:.4} after reassignment",
        clustering.k(),
        trace.sos_before_reassign,
        trace.sos_after_reassign
    );
    Ok(())
}
