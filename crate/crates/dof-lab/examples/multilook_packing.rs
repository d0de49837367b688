//! Packing ordered subspaces into complete sets of M independent vectors.
//!
//! Six subspaces of R^3 with dimensions (1, 2, 1, 1, 3, 2) are collected in
//! order. Whenever the next subspace would overflow the current set it is
//! split against the set's span; the non-overlapping part completes the set
//! and the overlapping part restarts the scan. Ten input dimensions pack
//! into three complete sets with one leftover line.
//!
//! Run with: `cargo run --example multilook_packing`

use dof_lab::cli::demo_multilook_instance;
use dof_lab::multilook::{build_full_sets, l_sigma_generic};
use dof_lab::subspace::FSubspace;

fn main() {
    let subs = demo_multilook_instance();
    let dims: Vec<usize> = subs.iter().map(|s| s.dim()).collect();
    println!("input dims: {dims:?}, ambient M = 3, total = 10");

    let result = build_full_sets(&subs, 3).unwrap();
    println!("complete sets built: {}", result.l_sigma);
    for (i, set) in result.sets.iter().enumerate() {
        let parts: Vec<String> = set
            .iter()
            .map(|(src, part)| format!("subspace #{} part (dim {})", src + 1, part.dim()))
            .collect();
        println!("  set {}: {}", i + 1, parts.join(" + "));
    }
    for (src, part) in &result.discarded {
        println!(
            "  discarded: subspace #{} part (dim {})",
            src + 1,
            part.dim()
        );
    }
    println!(
        "dimension conservation: {} packed + discarded = {} input",
        result.total_dims(),
        dims.iter().sum::<usize>()
    );
    println!(
        "generic count floor(10 / 3) = {}",
        l_sigma_generic(&dims, 3).unwrap()
    );

    // On generic subspaces the greedy construction always reaches the floor.
    let generic: Vec<FSubspace> = (0..5)
        .map(|i| FSubspace::random_generic(4, 1 + (i % 3), 100 + i as u64).unwrap())
        .collect();
    let gdims: Vec<usize> = generic.iter().map(|s| s.dim()).collect();
    let res = build_full_sets(&generic, 4).unwrap();
    println!(
        "generic dims {gdims:?} in R^4: built {} sets, floor {}",
        res.l_sigma,
        l_sigma_generic(&gdims, 4).unwrap()
    );
}
