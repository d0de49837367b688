//! Exposed-subspace algebra and the symbolic entropy ledger.
//!
//! A chain argument walks receivers and hands each one a small set of genie
//! signals: fresh generic combinations of one transmitter's symbols, whole
//! transmit vectors, or observation subspaces carried over from earlier
//! steps. Each step yields one sum-rate inequality whose entropy terms are
//! tracked purely symbolically: a term is an id plus a dimension, appearing
//! once with each sign across the chain so that summation cancels it. The
//! bound extractor then only needs the leftover log and rate coefficients.
//!
//! The linear-algebra side is exact: an exposed subspace is what remains of
//! one interferer after the receiver's other interference is eliminated,
//! computed from the null space of the stacked channel-plus-genie rows.

use crate::linalg::{Mat, Scalar};
use crate::network::{Network, NetworkError};
use crate::subspace::{Subspace, SubspaceError};
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ChainError {
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error(transparent)]
    Subspace(#[from] SubspaceError),
    #[error("genie too small: {have} rows given, at least {need} required")]
    GenieTooSmall { need: usize, have: usize },
    #[error("TX {tx} is not an interference source at RX {rx}")]
    NotAnInterferer { rx: usize, tx: usize },
    #[error("genie row has {got} coefficients, expected {expected}")]
    RowLength { expected: usize, got: usize },
    #[error("malformed script: {0}")]
    MalformedScript(String),
    #[error("unregistered subspace id: {0}")]
    UnregisteredId(String),
    #[error("regime violation: {0}")]
    RegimeViolation(String),
    #[error("chain does not close: rate terms meet or exceed the left-hand side")]
    DoesNotClose,
}

/// Where a genie row came from; bookkeeping only.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Generic,
    Exposed { rx: usize, tx: usize },
    Intersection { id: String },
    Message { tx: usize },
}

/// One genie signal: a linear combination of a receiver's stacked
/// interference variables (all arriving transmitters in ascending index
/// order, `M_T` coordinates each).
#[derive(Clone, Debug)]
pub struct GenieRow<S> {
    pub coeffs: Vec<S>,
    pub provenance: Provenance,
}

impl<S: Scalar> GenieRow<S> {
    /// A row whose support is one transmitter's block.
    pub fn in_block(
        sources: &[usize],
        m_t: usize,
        tx: usize,
        block_coeffs: &[S],
        provenance: Provenance,
    ) -> Self {
        let pos = sources
            .iter()
            .position(|&t| t == tx)
            .expect("tx must be one of the receiver's sources");
        let mut coeffs = vec![S::zero(); sources.len() * m_t];
        coeffs[pos * m_t..pos * m_t + m_t].clone_from_slice(block_coeffs);
        GenieRow { coeffs, provenance }
    }
}

/// Stacked interference channel of `rx`: its arriving transmitters in
/// ascending order and the `M_R x (sources * M_T)` block matrix.
pub fn interference_matrix<S: Scalar>(
    net: &Network<S>,
    rx: usize,
) -> Result<(Vec<usize>, Mat<S>), ChainError> {
    let sources = net.interference_sources(rx);
    let blocks: Vec<&Mat<S>> = sources
        .iter()
        .map(|&tx| net.link(rx, tx))
        .collect::<Result<_, _>>()?;
    Ok((sources, Mat::hstack(&blocks)))
}

/// Row combinations of `rows` that annihilate every non-target block,
/// mapped into the target transmitter's coordinate space.
fn eliminate_to_target<S: Scalar>(
    rows: &Mat<S>,
    sources: &[usize],
    m_t: usize,
    target: usize,
) -> Subspace<S> {
    let pos = sources
        .iter()
        .position(|&t| t == target)
        .expect("target must be a source");
    let others: Vec<Mat<S>> = (0..sources.len())
        .filter(|&i| i != pos)
        .map(|i| rows.col_slice(i * m_t, (i + 1) * m_t))
        .collect();
    let target_block = rows.col_slice(pos * m_t, (pos + 1) * m_t);
    let combos = if others.is_empty() {
        Mat::identity(rows.rows())
    } else {
        let refs: Vec<&Mat<S>> = others.iter().collect();
        Mat::hstack(&refs).transpose().null_space()
    };
    Subspace::from_basis(m_t, target_block.transpose().mul(&combos))
}

/// The exposed subspace of `tx` at `rx`: linear combinations of `tx`'s
/// symbols left after zero-forcing every other arriving interferer.
/// Generic dimension `max(0, M_R - (K-2) M_T)` on the full interference
/// channel.
pub fn exposed_subspace<S: Scalar>(
    net: &Network<S>,
    rx: usize,
    tx: usize,
) -> Result<Subspace<S>, ChainError> {
    resolve_exposed(net, rx, tx, &[])
}

/// Exposed subspace of `tx` at `rx` when the receiver additionally holds
/// the given genie rows. The rows are stacked under the channel rows and
/// the combined system is zero-forced against every non-target block, so a
/// row fully supported on another transmitter's block widens the view of
/// the target by one dimension (generically).
pub fn resolve_exposed<S: Scalar>(
    net: &Network<S>,
    rx: usize,
    tx: usize,
    genie: &[GenieRow<S>],
) -> Result<Subspace<S>, ChainError> {
    let (sources, channel) = interference_matrix(net, rx)?;
    if !sources.contains(&tx) {
        return Err(ChainError::NotAnInterferer { rx, tx });
    }
    let width = sources.len() * net.tx_antennas();
    let mut rows = vec![channel];
    for g in genie {
        if g.coeffs.len() != width {
            return Err(ChainError::RowLength {
                expected: width,
                got: g.coeffs.len(),
            });
        }
        rows.push(Mat::from_fn(1, width, |_, j| g.coeffs[j].clone()));
    }
    let refs: Vec<&Mat<S>> = rows.iter().collect();
    let stacked = Mat::vstack(&refs);
    Ok(eliminate_to_target(
        &stacked,
        &sources,
        net.tx_antennas(),
        tx,
    ))
}

/// Whether the receiver can resolve all of its interference: the stacked
/// `(M_R + |genie|) x (sources * M_T)` matrix of channel rows plus genie
/// rows must have full column rank. Errors distinctly when the genie is
/// too small for the count to work out at all.
pub fn genie_acceptable<S: Scalar>(
    net: &Network<S>,
    rx: usize,
    genie: &[GenieRow<S>],
) -> Result<bool, ChainError> {
    let (sources, channel) = interference_matrix(net, rx)?;
    let width = sources.len() * net.tx_antennas();
    let have = net.rx_antennas() + genie.len();
    if have < width {
        return Err(ChainError::GenieTooSmall { need: width, have });
    }
    let mut rows = vec![channel];
    for g in genie {
        if g.coeffs.len() != width {
            return Err(ChainError::RowLength {
                expected: width,
                got: g.coeffs.len(),
            });
        }
        rows.push(Mat::from_fn(1, width, |_, j| g.coeffs[j].clone()));
    }
    let refs: Vec<&Mat<S>> = rows.iter().collect();
    Ok(Mat::vstack(&refs).rank() == width)
}

/// One signed symbolic entropy term.
#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub id: String,
    pub sign: i8,
}

/// One sum-rate inequality: `lhs_rate_users * nR <= log_coeff * n log(rho)
/// + rate_coeff * nR + sum(sign * h(term))`.
#[derive(Clone, Debug)]
pub struct Inequality {
    pub lhs_rate_users: u32,
    pub log_coeff: BigRational,
    pub rate_coeff: BigRational,
    pub terms: Vec<Term>,
}

impl Inequality {
    pub fn to_json(&self) -> Value {
        json!({
            "lhs": self.lhs_rate_users,
            "log": self.log_coeff.to_string(),
            "rate": self.rate_coeff.to_string(),
            "terms": self.terms.iter()
                .map(|t| json!({"id": t.id, "sign": t.sign}))
                .collect::<Vec<_>>(),
        })
    }
}

/// Registry entry for a symbolic term.
#[derive(Clone, Debug)]
pub struct TermInfo {
    pub dim: usize,
    pub provenance: Provenance,
}

/// Step-by-step record of a chain run, for traces and JSON output.
#[derive(Clone, Debug, serde::Serialize)]
pub struct StepTrace {
    pub step: usize,
    pub action: String,
    pub rx: usize,
    pub target: Option<usize>,
    pub genie: Vec<String>,
    pub produced: Option<String>,
    pub produced_dim: Option<usize>,
    /// Coordinate indices occupied by the produced subspace (pivot rows of
    /// its canonical basis); the per-step index-set trace of the exact
    /// certificates.
    pub indices: Option<Vec<usize>>,
    pub acceptable: bool,
    pub note: String,
}

/// Ordered inequalities plus the registry of every symbolic term.
#[derive(Clone, Debug, Default)]
pub struct ChainLedger {
    pub inequalities: Vec<Inequality>,
    pub registry: BTreeMap<String, TermInfo>,
    pub degraded: bool,
    pub trace: Vec<StepTrace>,
}

impl ChainLedger {
    pub fn register(&mut self, id: &str, dim: usize, provenance: Provenance) {
        self.registry
            .insert(id.to_string(), TermInfo { dim, provenance });
    }

    pub fn dim_of(&self, id: &str) -> Result<usize, ChainError> {
        self.registry
            .get(id)
            .map(|t| t.dim)
            .ok_or_else(|| ChainError::UnregisteredId(id.to_string()))
    }

    /// Net sign of every id across all inequalities. In a healthy chain
    /// every id cancels except those consumed by the closing step.
    pub fn term_balance(&self) -> BTreeMap<String, i64> {
        let mut counts: BTreeMap<String, i64> = BTreeMap::new();
        for ineq in &self.inequalities {
            for t in &ineq.terms {
                *counts.entry(t.id.clone()).or_insert(0) += t.sign as i64;
            }
        }
        counts
    }

    pub fn to_json(&self) -> Value {
        let bound = ledger_bound(self)
            .map(|b| b.to_string())
            .unwrap_or_else(|_| "none".to_string());
        json!({
            "inequalities": self.inequalities.iter().map(Inequality::to_json).collect::<Vec<_>>(),
            "bound": bound,
            "degraded": self.degraded,
            "registry": self.registry.iter().map(|(id, info)| {
                json!({"id": id, "dim": info.dim, "provenance": info.provenance})
            }).collect::<Vec<_>>(),
            "trace": serde_json::to_value(&self.trace).unwrap(),
        })
    }
}

/// Sum the inequalities and extract the DoF bound.
///
/// Matched +/- pairs cancel; any residual positive term is capped by its
/// maximum signal dimension (adding `dim` to the log side) and any residual
/// negative term is dropped, which only weakens the bound. The result is
/// `d <= sum(log) / (sum(lhs) - sum(rate))`.
pub fn ledger_bound(ledger: &ChainLedger) -> Result<BigRational, ChainError> {
    if ledger.inequalities.is_empty() {
        return Err(ChainError::MalformedScript("empty ledger".into()));
    }
    let mut sum_lhs = BigRational::zero();
    let mut sum_log = BigRational::zero();
    let mut sum_rate = BigRational::zero();
    for ineq in &ledger.inequalities {
        sum_lhs += BigRational::from_integer(ineq.lhs_rate_users.into());
        sum_log += ineq.log_coeff.clone();
        sum_rate += ineq.rate_coeff.clone();
    }
    for (id, net_sign) in ledger.term_balance() {
        if net_sign > 0 {
            let dim = ledger.dim_of(&id)?;
            sum_log += BigRational::from_integer((net_sign * dim as i64).into());
        }
        // net_sign < 0: dropping -h(term) <= 0 is a valid weakening.
    }
    let denom = sum_lhs - sum_rate;
    if !denom.is_positive() {
        return Err(ChainError::DoesNotClose);
    }
    Ok(sum_log / denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{reference_2x5, Topology};
    use num_traits::One;

    fn rational(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn exposed_directions_match_reference_values() {
        let net = reference_2x5(7);
        let at_rx2 = exposed_subspace(&net, 2, 1).unwrap();
        assert_eq!(at_rx2.dim(), 1);
        let d = at_rx2.unit_direction().unwrap();
        let want = {
            let n = (0.3227f64 * 0.3227 + 1.2639 * 1.2639).sqrt();
            [0.3227 / n, 1.2639 / n]
        };
        assert!((d[0] - want[0]).abs() < 1e-3 && (d[1] - want[1]).abs() < 1e-3);

        let at_rx3 = exposed_subspace(&net, 3, 1).unwrap();
        let d = at_rx3.unit_direction().unwrap();
        let want = {
            let n = (0.7366f64 * 0.7366 + 1.0464 * 1.0464).sqrt();
            [0.7366 / n, 1.0464 / n]
        };
        assert!((d[0] - want[0]).abs() < 1e-3 && (d[1] - want[1]).abs() < 1e-3);
    }

    #[test]
    fn zero_forcing_as_an_explicit_map() {
        // Same computation as exposed_subspace, phrased through the
        // subspace API: the complement of the other interferers' column
        // span, mapped through the transposed target channel, is the
        // reference direction at RX 2.
        let net = reference_2x5(7);
        let h21 = net.link(2, 1).unwrap();
        let h23 = net.link(2, 3).unwrap();
        let h24 = net.link(2, 4).unwrap();
        let others = crate::linalg::Mat::hstack(&[h23, h24]);
        let c = crate::subspace::Subspace::from_basis(5, others).complement();
        assert_eq!(c.dim(), 1);
        let line = c.map_through(&h21.transpose()).unwrap();
        assert_eq!(line.dim(), 1);
        let got = line.unit_direction().unwrap();
        let norm = (0.3227f64 * 0.3227 + 1.2639 * 1.2639).sqrt();
        assert!((got[0] - 0.3227 / norm).abs() < 1e-3);
        assert!((got[1] - 1.2639 / norm).abs() < 1e-3);
        assert!(line
            .span_eq(&exposed_subspace(&net, 2, 1).unwrap())
            .unwrap());
    }

    #[test]
    fn exposed_dimension_on_3x7() {
        let net = Network::<f64>::generate_generic(Topology::FullIc, 4, 3, 7, 5).unwrap();
        let x = exposed_subspace(&net, 2, 1).unwrap();
        assert_eq!(x.dim(), 1); // 7 - 2*3
    }

    #[test]
    fn resolve_with_empty_genie_reduces_to_exposed() {
        let net = Network::<f64>::generate_generic(Topology::FullIc, 4, 2, 5, 9).unwrap();
        let a = exposed_subspace(&net, 2, 1).unwrap();
        let b = resolve_exposed(&net, 2, 1, &[]).unwrap();
        assert!(a.span_eq(&b).unwrap());
    }

    #[test]
    fn resolve_widens_by_foreign_rows() {
        // (3, 7): a one-dimensional exposed row of TX 1 handed to RX 3
        // widens the view of TX 2 from one to two dimensions.
        let net = Network::<f64>::generate_generic(Topology::FullIc, 4, 3, 7, 13).unwrap();
        let x12 = exposed_subspace(&net, 2, 1).unwrap();
        assert_eq!(x12.dim(), 1);
        let (sources, _) = interference_matrix(&net, 3).unwrap();
        let basis_col: Vec<f64> = (0..3).map(|i| *x12.basis().get(i, 0)).collect();
        let row = GenieRow::in_block(
            &sources,
            3,
            1,
            &basis_col,
            Provenance::Exposed { rx: 2, tx: 1 },
        );
        let widened = resolve_exposed(&net, 3, 2, &[row]).unwrap();
        assert_eq!(widened.dim(), 2);
    }

    #[test]
    fn acceptability_generic_and_duplicate() {
        let net = Network::<f64>::generate_generic(Topology::FullIc, 4, 2, 5, 21).unwrap();
        let (sources, channel) = interference_matrix(&net, 2).unwrap();
        let mut rng = crate::rng::Rng::new(3);
        let generic = GenieRow {
            coeffs: (0..sources.len() * 2).map(|_| rng.next_normal()).collect(),
            provenance: Provenance::Generic,
        };
        assert!(genie_acceptable(&net, 2, std::slice::from_ref(&generic)).unwrap());
        // A genie row copied from an existing channel row adds no rank.
        let dup = GenieRow {
            coeffs: channel.row(0).to_vec(),
            provenance: Provenance::Generic,
        };
        assert!(!genie_acceptable(&net, 2, &[dup]).unwrap());
        // Too few rows to ever resolve the interference.
        assert!(matches!(
            genie_acceptable(&net, 2, &[]),
            Err(ChainError::GenieTooSmall { .. })
        ));
    }

    #[test]
    fn exposed_row_is_acceptable_at_the_next_receiver() {
        let net = reference_2x5(7);
        let x12 = exposed_subspace(&net, 2, 1).unwrap();
        let (sources, _) = interference_matrix(&net, 3).unwrap();
        let basis_col: Vec<f64> = (0..2).map(|i| *x12.basis().get(i, 0)).collect();
        let row = GenieRow::in_block(
            &sources,
            2,
            1,
            &basis_col,
            Provenance::Exposed { rx: 2, tx: 1 },
        );
        assert!(genie_acceptable(&net, 3, &[row]).unwrap());
    }

    #[test]
    fn structured_channels_expose_exactly_the_clean_dimensions() {
        // Zero-forcing any two interferers on the structured families
        // leaves exactly N - 2M clean dimensions of the third, in exact
        // arithmetic.
        for (m, n, net) in [
            (
                2usize,
                5usize,
                crate::network::structured_channels_half(2, 5, 1).unwrap(),
            ),
            (
                4,
                10,
                crate::network::structured_channels_half(4, 10, 1).unwrap(),
            ),
            (
                3,
                8,
                crate::network::structured_channels_p3(3, 8, 1).unwrap(),
            ),
        ] {
            for rx in 1..=4usize {
                for tx in 1..=4usize {
                    if tx == rx {
                        continue;
                    }
                    let exposed = exposed_subspace(&net, rx, tx).unwrap();
                    assert_eq!(exposed.dim(), n - 2 * m, "({m},{n}) rx {rx} tx {tx}");
                }
            }
        }
    }

    #[test]
    fn ledger_bound_cancels_and_divides() {
        // The canonical two-step chain: 4R <= 5 log + 1R - h(O); 4R <= 5 log + h(O).
        let mut ledger = ChainLedger::default();
        ledger.register("O1", 1, Provenance::Exposed { rx: 2, tx: 1 });
        ledger.inequalities.push(Inequality {
            lhs_rate_users: 4,
            log_coeff: rational(5, 1),
            rate_coeff: BigRational::one(),
            terms: vec![Term {
                id: "O1".into(),
                sign: -1,
            }],
        });
        ledger.inequalities.push(Inequality {
            lhs_rate_users: 4,
            log_coeff: rational(5, 1),
            rate_coeff: BigRational::zero(),
            terms: vec![Term {
                id: "O1".into(),
                sign: 1,
            }],
        });
        assert_eq!(ledger_bound(&ledger).unwrap(), rational(10, 7));
    }

    #[test]
    fn ledger_bound_caps_residual_positive_terms() {
        let mut ledger = ChainLedger::default();
        ledger.register("X", 2, Provenance::Generic);
        ledger.inequalities.push(Inequality {
            lhs_rate_users: 4,
            log_coeff: rational(5, 1),
            rate_coeff: BigRational::zero(),
            terms: vec![Term {
                id: "X".into(),
                sign: 1,
            }],
        });
        // Positive leftover adds its dimension to the log side: (5+2)/4.
        assert_eq!(ledger_bound(&ledger).unwrap(), rational(7, 4));
    }

    #[test]
    fn ledger_bound_rejects_nonpositive_denominator() {
        let mut ledger = ChainLedger::default();
        ledger.inequalities.push(Inequality {
            lhs_rate_users: 4,
            log_coeff: rational(5, 1),
            rate_coeff: rational(4, 1),
            terms: vec![],
        });
        assert!(matches!(
            ledger_bound(&ledger),
            Err(ChainError::DoesNotClose)
        ));
    }
}
