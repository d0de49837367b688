//! The normalized DoF landscape over the ratio gamma = M/N.
//!
//! For each reduced ratio: the counting bound (M+N)/(K+1), the
//! decomposition value MN/(M+N), the piecewise value where it applies, the
//! best known value and the proof status. The regime flips exactly where
//! the two bounds cross.
//!
//! Run with: `cargo run --example dof_landscape`

use dof_lab::cli::curve_csv;
use dof_lab::dof::{classify, decomposition_bound, k3_gap_identity};

fn main() {
    println!("selected K = 4 operating points:");
    for (mt, mr) in [
        (2usize, 5usize),
        (3, 7),
        (3, 8),
        (8, 21),
        (11, 29),
        (11, 21),
        (4, 11),
    ] {
        let r = classify(4, mt, mr).unwrap();
        println!(
            "  ({mt:2}, {mr:2}) gamma {:>5}: counting {:>6}, decomposition {:>6}, best {:>6}, {} (regime {})",
            r.point.gamma, r.counting, r.decomposition, r.best_known, r.status, r.regime
        );
    }

    // The three-user gap identity that forces regime 1 at K = 3.
    println!("\nthree-user gap (M+N)/4 - MN/(M+N) at a few points:");
    for (m, n) in [(2usize, 5usize), (1, 3), (4, 4)] {
        println!("  ({m}, {n}): {}", k3_gap_identity(m, n));
    }

    // The piecewise value meets the decomposition value at the boundary.
    let r = classify(5, 4, 15).unwrap();
    println!(
        "\nK = 5 boundary point (4, 15): dstar = {}, decomposition = {}",
        r.dstar.unwrap(),
        decomposition_bound(4, 15)
    );

    println!("\nCSV landscape for K = 4, denominators up to 8:");
    print!("{}", curve_csv(4, 8).unwrap());
}
