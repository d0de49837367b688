//! The two-step genie chain on the (2, 5) four-user channel.
//!
//! Uses the fixed reference channel realization, so the exposed directions
//! printed here match the documented values 0.3227 X1 + 1.2639 X2 at
//! receiver 2 and 0.7366 X1 + 1.0464 X2 at receiver 3. The chain hands the
//! first exposed combination to receiver 3 as genie, telescopes, and lands
//! on d <= 10/7 — exactly the decomposition value 2*5/(2+5).
//!
//! Run with: `cargo run --example chain_2x5`

use dof_lab::genie::{exposed_subspace, ledger_bound};
use dof_lab::network::reference_2x5;
use dof_lab::scripts::{builtin, run_script};

fn main() {
    let net = reference_2x5(7);
    for rx in [2usize, 3] {
        let exposed = exposed_subspace(&net, rx, 1).unwrap();
        let d = exposed.unit_direction().unwrap();
        println!(
            "exposed space of TX 1 at RX {rx}: dim {}, direction [{:.4}, {:.4}]",
            exposed.dim(),
            d[0],
            d[1]
        );
    }

    let script = builtin("ex1_2x5", None).unwrap();
    let ledger = run_script(&net, &script, 7).unwrap();
    println!("\nledger ({} inequalities):", ledger.inequalities.len());
    for (i, ineq) in ledger.inequalities.iter().enumerate() {
        let terms: Vec<String> = ineq
            .terms
            .iter()
            .map(|t| format!("{}h({})", if t.sign > 0 { "+" } else { "-" }, t.id))
            .collect();
        println!(
            "  step {}: {}nR <= {} n log(rho) + {} nR {}",
            i + 1,
            ineq.lhs_rate_users,
            ineq.log_coeff,
            ineq.rate_coeff,
            terms.join(" ")
        );
    }
    let bound = ledger_bound(&ledger).unwrap();
    println!("degraded: {}", ledger.degraded);
    println!("telescoped bound: d <= {bound}");
}
