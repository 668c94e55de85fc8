//! Partial-fraction residues on both sides of the equilibria, checked
//! against the rational function they decompose.
use blowuplab::partial_fractions::{decompose, decomposition_condition, evaluate_decomposition, evaluate_rational, KVector, Side};

fn main() -> blowuplab::Result<()> {
    let k = KVector::new(vec![0.5, 1.0, 2.0, 4.0])?;
    for (side, xs) in [(Side::Negative, [-0.01, -1.0, -50.0]), (Side::Positive, [4.01, 6.0, 40.0])] {
        let d = decompose(&k, side);
        println!("{side:?}: leading {} residues {:?}", d.leading, d.residues);
        for x in xs {
            let direct = evaluate_rational(&k, x, side)?;
            let pf = evaluate_decomposition(&d, &k, x)?;
            let cond = decomposition_condition(&d, &k, x)?;
            println!("  x = {x:>6}: {direct:.12e} vs {pf:.12e} (condition {cond:.1e})");
        }
    }
    Ok(())
}
