//! Chains beyond the basic interference channel.
//!
//! * `recip_8x3` — more transmit than receive antennas: whole transmit
//!   vectors ride in the genies, and the chain closes by reconstructing
//!   TX 2 from four retained observations;
//! * `five_to_one_2x5` — only receiver 1 hears interference;
//! * `xch_2x3` — the three-user X channel with nine messages, where the
//!   genie hands over individual messages instead of transmit vectors;
//! * the six four-to-one outer-bound scripts across the ratio pieces.
//!
//! Run with: `cargo run --example reciprocal_and_xchannel`

use dof_lab::genie::ledger_bound;
use dof_lab::network::Network;
use dof_lab::scripts::{builtin, run_script};

fn run(name: &str, dims: Option<(usize, usize)>, seed: u64) {
    let script = builtin(name, dims).unwrap();
    let net =
        Network::<f64>::generate_generic(script.topology, script.k, script.m_t, script.m_r, seed)
            .unwrap();
    let ledger = run_script(&net, &script, seed).unwrap();
    println!(
        "{:<18} {} K={} ({:2}, {:2}): {} inequalities, degraded {}, d <= {}",
        name,
        script.topology,
        script.k,
        script.m_t,
        script.m_r,
        ledger.inequalities.len(),
        ledger.degraded,
        ledger_bound(&ledger).unwrap()
    );
}

fn main() {
    run("recip_8x3", None, 9);
    run("five_to_one_2x5", None, 1);
    run("xch_2x3", None, 1);
    println!();
    run("four_to_one_3m4", Some((4, 9)), 23);
    run("four_to_one_n3", Some((4, 9)), 23);
    run("four_to_one_2m3", Some((5, 9)), 23);
    run("four_to_one_2n5", Some((3, 5)), 23);
    run("four_to_one_3m5", Some((5, 6)), 23);
    run("four_to_one_n2", Some((5, 6)), 23);
}
