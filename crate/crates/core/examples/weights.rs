//! Lagrange weights at zero and the gap of the weighted inequality for a few
//! node sets.
use blowuplab::weights::{inequality_gap, lagrange_weights, XVector};

fn main() -> blowuplab::Result<()> {
    for x in [vec![1.0, 2.0, 3.0], vec![0.5, 4.0], vec![0.1, 0.2, 0.3, 0.4]] {
        let xv = XVector::new(x.clone())?;
        let w = lagrange_weights(&xv);
        println!("x = {x:?}");
        println!("  weights = {:?} (sum {})", w.as_slice(), w.sum());
        println!("  gap     = {:.6e}", inequality_gap(&xv)?);
    }
    Ok(())
}
