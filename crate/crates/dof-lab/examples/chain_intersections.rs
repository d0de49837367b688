//! Chains that shrink genies via intersections of exposed spaces.
//!
//! Three runs:
//! * `ex3_3x8` — on (3, 8) the exposed spaces are 2-dimensional but only a
//!   1-dimensional genie fits, so two receivers' views are intersected;
//! * `kuser_5_4_15` — the five-user (4, 15) chain needs two successive
//!   intersections before the final step;
//! * `chain_8_21` — the eight-step chain whose carried observation walks
//!   the dimensions 5, 2, 7, 4, 1, 6, 3 before closing at 168/29.
//!
//! Run with: `cargo run --example chain_intersections`

use dof_lab::genie::ledger_bound;
use dof_lab::network::Network;
use dof_lab::scripts::{builtin, run_script};

fn run(name: &str, seed: u64) {
    let script = builtin(name, None).unwrap();
    let net =
        Network::<f64>::generate_generic(script.topology, script.k, script.m_t, script.m_r, seed)
            .unwrap();
    let ledger = run_script(&net, &script, seed).unwrap();
    println!("{name}: K={} ({}, {})", script.k, script.m_t, script.m_r);
    for t in &ledger.trace {
        let produced = match (&t.produced, t.produced_dim) {
            (Some(id), Some(dim)) => format!(" -> {id} (dim {dim})"),
            _ => String::new(),
        };
        println!(
            "  step {} {:<9} rx {}{}{}",
            t.step + 1,
            t.action,
            t.rx,
            produced,
            if t.note.is_empty() {
                String::new()
            } else {
                format!("  [{}]", t.note)
            }
        );
    }
    println!(
        "  degraded: {}, bound: d <= {}\n",
        ledger.degraded,
        ledger_bound(&ledger).unwrap()
    );
}

fn main() {
    run("ex3_3x8", 11);
    run("kuser_5_4_15", 1);
    run("chain_8_21", 3);
}
