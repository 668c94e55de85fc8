//! Classifying arbitrary real points, including ones outside the positive
//! orthant where the inequality can fail or stop making sense.
use blowuplab::weights::analyze_point;

fn main() {
    let points: [&[f64]; 5] = [&[1.0, 2.0], &[1.0, -0.5], &[0.0, 7.0], &[-1.5, 2.0], &[3.0, 3.0]];
    for x in points {
        let r = analyze_point(x);
        match r.gap {
            Some(g) => println!("{x:?}: {:?}, gap {g:.6e}", r.class),
            None => println!("{x:?}: {:?}", r.class),
        }
    }
}
