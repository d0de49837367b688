//! The `dof-lab` command-line front end.
//!
//! Exit codes are a stable contract: 0 on success, 2 on usage errors,
//! 3 when a chain degrades or a certificate fails. Every command is
//! deterministic given `--seed` (default from `DOF_LAB_SEED`), and sweep
//! commands produce byte-identical output whether run serially or with
//! `--parallel`.

use crate::align::{design_four_to_one, design_k_user, verify_alignment, FourToOneCase};
use crate::certify::{certify_structured, regime_points, CertReport, Regime};
use crate::dof::classify;
use crate::genie::ChainLedger;
use crate::linalg::Scalar;
use crate::multilook::{build_full_sets, MultilookResult};
use crate::network::{Network, Topology};
use crate::rng::derive_seed;
use crate::scripts::{builtin, builtin_names, run_script, ChainScript};
use crate::subspace::{RSubspace, Subspace};
use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use rayon::prelude::*;
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "dof-lab",
    about = "Degrees-of-freedom bounds for MIMO interference networks",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum BackendArg {
    Float,
    Rational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Closed-form bounds and proof status for one (K, M_T, M_R) point.
    Bounds {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        mt: usize,
        #[arg(long)]
        mr: usize,
        /// For K = 4 ratios in [1/2, 1): also run this many seeded
        /// independence trials and attach the outcome as "verified
        /// (seeded)" evidence. The proof status itself is unchanged.
        #[arg(long)]
        verify_seeds: Option<usize>,
        #[arg(long, env = "DOF_LAB_SEED", default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a chain script against a seeded network and emit the ledger.
    Chain {
        /// Built-in script name (see `chain --script list`).
        #[arg(long)]
        script: String,
        /// Transmit antennas, for scripts parameterized by the ratio.
        #[arg(long)]
        mt: Option<usize>,
        /// Receive antennas, for scripts parameterized by the ratio.
        #[arg(long)]
        mr: Option<usize>,
        #[arg(long, env = "DOF_LAB_SEED", default_value_t = 1)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = BackendArg::Float)]
        backend: BackendArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact structured-channel certificates over a regime sweep.
    Certify {
        /// Regime: `half` for [2/5, 1/2), `p3` for (2c-1)/(5c-2).
        #[arg(long)]
        regime: String,
        /// Largest N visited.
        #[arg(long, default_value_t = 40)]
        max: usize,
        #[arg(long, env = "DOF_LAB_SEED", default_value_t = 1)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
        format: FormatArg,
        /// Evaluate sweep points on a thread pool; output is identical.
        #[arg(long)]
        parallel: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build an interference-alignment precoder design and verify it.
    Align {
        /// `kuser` or `four_to_one`.
        #[arg(long)]
        design: String,
        #[arg(long, default_value_t = 4)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        beta: usize,
        /// Four-to-one case: `4x9`, `3x5` or `5x6`.
        #[arg(long)]
        case: Option<String>,
        #[arg(long, env = "DOF_LAB_SEED", default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit the (gamma, d/N) landscape as CSV.
    Curve {
        #[arg(long)]
        k: usize,
        /// Largest denominator of the reduced ratios enumerated.
        #[arg(long, default_value_t = 8)]
        max: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pack subspaces into complete sets and report the split parts.
    Multilook {
        /// JSON input: {"m": .., "subspaces": [[..vectors..], ..]}.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Run the built-in six-subspace demonstration instance.
        #[arg(long)]
        demo: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn write_output(text: &str, out: &Option<PathBuf>) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("write {path:?}: {e}")),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

/// Parse argv and run; returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32, String> {
    match cli.cmd {
        Cmd::Bounds {
            k,
            mt,
            mr,
            verify_seeds,
            seed,
            out,
        } => {
            let report = classify(k, mt, mr).map_err(|e| e.to_string())?;
            let mut json = report.to_json();
            if let Some(trials) = verify_seeds {
                let mc =
                    crate::scripts::monte_carlo_half_regime(mt.min(mr), mt.max(mr), trials, seed)
                        .map_err(|e| e.to_string())?;
                json["seeded_verification"] = serde_json::json!({
                    "trials": mc.trials,
                    "failures": mc.failures,
                    "verified": mc.verified(),
                });
            }
            write_output(&pretty(&json), &out)?;
            Ok(0)
        }
        Cmd::Chain {
            script,
            mt,
            mr,
            seed,
            backend,
            out,
        } => {
            if script == "list" {
                write_output(&builtin_names().join("\n"), &out)?;
                return Ok(0);
            }
            let dims = match (mt, mr) {
                (Some(a), Some(b)) => Some((a, b)),
                (None, None) => None,
                _ => return Err("--mt and --mr must be given together".into()),
            };
            let script = builtin(&script, dims).map_err(|e| e.to_string())?;
            let ledger = match backend {
                BackendArg::Float => run_chain::<f64>(&script, seed)?,
                BackendArg::Rational => run_chain::<BigRational>(&script, seed)?,
            };
            write_output(&pretty(&ledger.to_json()), &out)?;
            Ok(if ledger.degraded { 3 } else { 0 })
        }
        Cmd::Certify {
            regime,
            max,
            seed,
            format,
            parallel,
            out,
        } => {
            let regime: Regime = regime.parse()?;
            let points = regime_points(regime, max);
            let eval = |&(m, n): &(usize, usize)| -> Result<CertReport, String> {
                let sub_seed = derive_seed(seed, "certify", (m * 1000 + n) as u64);
                certify_structured(m, n, regime, sub_seed).map_err(|e| e.to_string())
            };
            let reports: Vec<CertReport> = if parallel {
                points.par_iter().map(eval).collect::<Result<Vec<_>, _>>()?
            } else {
                points.iter().map(eval).collect::<Result<Vec<_>, _>>()?
            };
            let all_pass = reports.iter().all(|r| r.pass);
            let text = match format {
                FormatArg::Csv => {
                    let mut s = String::from("m,n,regime,a,steps,pass,bound\n");
                    for r in &reports {
                        s.push_str(&format!(
                            "{},{},{},{},{},{},{}\n",
                            r.m,
                            r.n,
                            r.regime,
                            r.a,
                            r.steps.len(),
                            r.pass,
                            r.bound
                                .as_ref()
                                .map(|b| b.to_string())
                                .unwrap_or_else(|| "none".into()),
                        ));
                    }
                    s
                }
                FormatArg::Json => pretty(&serde_json::Value::Array(
                    reports.iter().map(CertReport::to_json).collect(),
                )),
            };
            write_output(&text, &out)?;
            Ok(if all_pass { 0 } else { 3 })
        }
        Cmd::Align {
            design,
            k,
            beta,
            case,
            seed,
            out,
        } => {
            let (set_json, report_json, pass) = match design.as_str() {
                "kuser" => {
                    let net = Network::<f64>::generate_generic(
                        Topology::FullIc,
                        k,
                        beta * k,
                        beta * (k * k - k - 1),
                        seed,
                    )
                    .map_err(|e| e.to_string())?;
                    let set = design_k_user(&net, beta).map_err(|e| e.to_string())?;
                    let report = verify_alignment(&net, &set, set.streams);
                    (set.to_json(), report.to_json(), report.pass)
                }
                "four_to_one" => {
                    let case: FourToOneCase = case.ok_or("four_to_one needs --case")?.parse()?;
                    let (mu, nu) = case.unit_antennas();
                    let net = Network::<f64>::generate_generic(
                        Topology::ManyToOne,
                        4,
                        beta * mu,
                        beta * nu,
                        seed,
                    )
                    .map_err(|e| e.to_string())?;
                    let set = design_four_to_one(&net, case, seed).map_err(|e| e.to_string())?;
                    let report = verify_alignment(&net, &set, set.streams);
                    (set.to_json(), report.to_json(), report.pass)
                }
                other => return Err(format!("unknown design: {other}")),
            };
            let text = pretty(&serde_json::json!({
                "design": design,
                "precoders": set_json,
                "verification": report_json,
            }));
            write_output(&text, &out)?;
            Ok(if pass { 0 } else { 3 })
        }
        Cmd::Curve { k, max, out } => {
            let text = curve_csv(k, max).map_err(|e| e.to_string())?;
            write_output(&text, &out)?;
            Ok(0)
        }
        Cmd::Multilook { input, demo, out } => {
            let (m, subs): (usize, Vec<RSubspace>) = if demo {
                (3, demo_multilook_instance())
            } else {
                let path = input.ok_or("multilook needs --input or --demo")?;
                let text =
                    std::fs::read_to_string(&path).map_err(|e| format!("read {path:?}: {e}"))?;
                parse_multilook_input(&text)?
            };
            let result = build_full_sets(&subs, m).map_err(|e| e.to_string())?;
            write_output(&pretty(&multilook_json(&result)), &out)?;
            Ok(0)
        }
    }
}

fn run_chain<S: Scalar>(script: &ChainScript, seed: u64) -> Result<ChainLedger, String> {
    let net =
        Network::<S>::generate_generic(script.topology, script.k, script.m_t, script.m_r, seed)
            .map_err(|e| e.to_string())?;
    run_script(&net, script, seed).map_err(|e| e.to_string())
}

fn multilook_json<S: Scalar>(result: &MultilookResult<S>) -> serde_json::Value {
    result.to_json()
}

/// The six-subspace packing instance used across the documentation.
pub fn demo_multilook_instance() -> Vec<RSubspace> {
    let s = |vs: &[Vec<i64>]| RSubspace::from_int_columns(3, vs).unwrap();
    vec![
        s(&[vec![1, 1, 1]]),
        s(&[vec![0, 2, 3], vec![0, 1, -1]]),
        s(&[vec![1, -1, 0]]),
        s(&[vec![1, 0, 1]]),
        s(&[vec![1, -1, 3], vec![1, 0, 0], vec![0, 1, 0]]),
        s(&[vec![0, 0, 1], vec![1, 2, -4]]),
    ]
}

fn parse_multilook_input(text: &str) -> Result<(usize, Vec<RSubspace>), String> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| format!("parse input: {e}"))?;
    let m = value
        .get("m")
        .and_then(serde_json::Value::as_u64)
        .ok_or("input needs an \"m\" field")? as usize;
    let raw = value
        .get("subspaces")
        .and_then(serde_json::Value::as_array)
        .ok_or("input needs a \"subspaces\" array")?;
    let mut subs = Vec::new();
    for entry in raw {
        // Either a full subspace object or a bare list of column vectors.
        let sub = if entry.is_object() {
            Subspace::from_json(entry).map_err(|e| e.to_string())?
        } else {
            let vectors: Vec<Vec<i64>> =
                serde_json::from_value(entry.clone()).map_err(|e| format!("vector list: {e}"))?;
            RSubspace::from_int_columns(m, &vectors).map_err(|e| e.to_string())?
        };
        if sub.ambient_dim() != m {
            return Err(format!(
                "subspace ambient {} does not match m = {m}",
                sub.ambient_dim()
            ));
        }
        subs.push(sub);
    }
    Ok((m, subs))
}

/// CSV of the normalized DoF landscape: one row per reduced ratio
/// gamma = M/N with N up to `max`, sorted by gamma.
pub fn curve_csv(k: usize, max: usize) -> Result<String, crate::dof::DofError> {
    let mut points: Vec<(usize, usize)> = Vec::new();
    for n in 1..=max {
        for m in 1..=n {
            if num_integer::gcd(m, n) == 1 {
                points.push((m, n));
            }
        }
    }
    points.sort_by(|&(m1, n1), &(m2, n2)| (m1 * n2).cmp(&(m2 * n1)).then(n1.cmp(&n2)));
    let mut s = String::from(
        "gamma,m,n,counting_over_n,decomposition_over_n,dstar_over_n,best_over_n,status,regime\n",
    );
    for (m, n) in points {
        let report = classify(k, m, n)?;
        let n_rat = BigRational::new((n as i64).into(), 1.into());
        let div = |v: &BigRational| (v / n_rat.clone()).to_string();
        s.push_str(&format!(
            "{}/{},{},{},{},{},{},{},{},{}\n",
            m,
            n,
            m,
            n,
            div(&report.counting),
            div(&report.decomposition),
            report.dstar.as_ref().map(&div).unwrap_or_else(|| "".into()),
            div(&report.best_known),
            report.status,
            report.regime,
        ));
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_contains_boundary_rows() {
        let csv = curve_csv(4, 8).unwrap();
        // gamma = 3/8: the piecewise value meets the decomposition value at 3/11.
        let row = csv
            .lines()
            .find(|l| l.starts_with("3/8,"))
            .expect("3/8 row");
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols[4], "3/11"); // decomposition / N
        assert_eq!(cols[5], "3/11"); // dstar / N
                                     // gamma = 1/2 best known is 1/3 per N.
        let row = csv
            .lines()
            .find(|l| l.starts_with("1/2,"))
            .expect("1/2 row");
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols[6], "1/3");
    }

    #[test]
    fn curve_regime_switches_once() {
        let csv = curve_csv(4, 8).unwrap();
        let regimes: Vec<&str> = csv
            .lines()
            .skip(1)
            .map(|l| l.rsplit(',').next().unwrap())
            .collect();
        let switches = regimes.windows(2).filter(|w| w[0] != w[1]).count();
        assert_eq!(switches, 1, "{regimes:?}");
    }

    #[test]
    fn multilook_demo_parses_and_packs() {
        let subs = demo_multilook_instance();
        let res = build_full_sets(&subs, 3).unwrap();
        assert_eq!(res.l_sigma, 3);
    }

    #[test]
    fn multilook_input_accepts_vector_lists() {
        let text = r#"{"m": 3, "subspaces": [[[1,0,0],[0,1,0]], [[0,0,2]]]}"#;
        let (m, subs) = parse_multilook_input(text).unwrap();
        assert_eq!(m, 3);
        assert_eq!(subs.len(), 2);
        assert_eq!(subs[0].dim(), 2);
    }
}
