//! Nodes with multiplicities, expanded to x_i, 2 x_i, ..., r_i x_i.
use blowuplab::weights::{repetition_gap, repetition_weights, RepetitionSpec};

fn main() -> blowuplab::Result<()> {
    for (x, r) in [(vec![1.0], vec![2]), (vec![0.7, 2.0], vec![2, 3]), (vec![0.4, 1.3, 3.0], vec![1, 2, 1])] {
        let spec = RepetitionSpec::new(x, r)?;
        println!("x = {:?}, r = {:?}", spec.x().as_slice(), spec.r());
        println!("  nodes   {:?}", spec.expanded_nodes());
        println!("  weights {:?}", repetition_weights(&spec));
        println!("  gap     {:.6e}", repetition_gap(&spec)?);
    }
    Ok(())
}
