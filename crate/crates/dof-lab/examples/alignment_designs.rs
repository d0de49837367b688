//! Interference-alignment precoders from stacked null spaces.
//!
//! The K-user design at (M, N) = (K, K^2-K-1) scaled by beta gives every
//! user K-1 streams by aligning exactly beta interference dimensions per
//! receiver. The four-to-one designs hit the three breakpoint ratios of
//! that network. Every rank condition is verified on the instance,
//! including the existence of zero-forcing receive filters.
//!
//! Run with: `cargo run --example alignment_designs`

use dof_lab::align::{
    design_four_to_one, design_k_user, proper_test, verify_alignment, FourToOneCase,
};
use dof_lab::network::{Network, Topology};
use num_rational::BigRational;

fn main() {
    for (k, beta) in [(4usize, 1usize), (5, 1), (4, 2)] {
        let (mt, mr) = (beta * k, beta * (k * k - k - 1));
        let net = Network::<f64>::generate_generic(Topology::FullIc, k, mt, mr, 3).unwrap();
        let set = design_k_user(&net, beta).unwrap();
        let report = verify_alignment(&net, &set, set.streams);
        println!(
            "K={k} beta={beta} ({mt}, {mr}): d = {} per user, interference dims {:?}, pass = {}",
            set.streams,
            report
                .per_rx
                .iter()
                .map(|c| c.interference_dim)
                .collect::<Vec<_>>(),
            report.pass
        );
    }

    println!();
    for case in [
        FourToOneCase::M4N9,
        FourToOneCase::M3N5,
        FourToOneCase::M5N6,
    ] {
        let (mu, nu) = case.unit_antennas();
        let net = Network::<f64>::generate_generic(Topology::ManyToOne, 4, mu, nu, 31).unwrap();
        let set = design_four_to_one(&net, case, 31).unwrap();
        let report = verify_alignment(&net, &set, set.streams);
        println!(
            "four-to-one ({mu}, {nu}): d = {}, interference at RX 1 spans {} dims, pass = {}",
            set.streams, report.per_rx[0].interference_dim, report.pass
        );
    }

    // The counting test that separates proper from improper points.
    println!();
    let d = BigRational::new(10.into(), 7.into());
    println!(
        "full IC K=4 (2,5) at d = 10/7: proper = {} (threshold 7/5)",
        proper_test(4, 2, 5, &d, Topology::FullIc)
    );
    let d = BigRational::new(3.into(), 2.into());
    println!(
        "many-to-one K=4 (2,5) at d = 3/2: proper = {} (threshold 11/7)",
        proper_test(4, 2, 5, &d, Topology::ManyToOne)
    );
}
