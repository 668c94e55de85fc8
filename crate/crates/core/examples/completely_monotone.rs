//! ln(1+x)/x is completely monotone: its signed derivatives are positive
//! and bounded by their value at zero, and its divided differences stay
//! below 1/n.
use blowuplab::divdiff::{cm_derivative, cm_limit_at_zero, locate_mean_value_point, mean_value_bound_check, NodeSet};

fn main() -> blowuplab::Result<()> {
    for order in 0..=5 {
        let vals: Vec<String> = [0.0, 0.5, 2.0, 10.0]
            .iter()
            .map(|&x| cm_derivative(order, x).map(|v| format!("{v:.6}")))
            .collect::<Result<_, _>>()?;
        println!("order {order}: limit {:.6}  values {}", cm_limit_at_zero(order), vals.join(" "));
    }
    let nodes = NodeSet::new(vec![0.3, 1.0, 2.5, 6.0])?;
    let b = mean_value_bound_check(&nodes)?;
    println!("nodes {:?}: value {:.10} < {} (margin {:.3e})", nodes.as_slice(), b.value, b.bound, b.margin);
    if let Some(x0) = locate_mean_value_point(&nodes)? {
        println!("mean-value point x0 = {x0:.8}");
    }
    Ok(())
}
