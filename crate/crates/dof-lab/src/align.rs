//! Achievability side: null-space precoder designs and their verification.
//!
//! The designs here never assume independence — every rank condition that
//! the dimension counting promises is re-checked on the concrete instance
//! by [`verify_alignment`], including the constructive existence of
//! zero-forcing receive filters.

use crate::linalg::{Mat, Scalar};
use crate::network::{Network, Topology};
use crate::rng::Rng;
use num_rational::BigRational;
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum AlignError {
    #[error("design expects {expected} antennas ({detail}), network has {got}")]
    WrongShape {
        expected: String,
        got: String,
        detail: &'static str,
    },
    #[error("alignment system is rank deficient: null space has {got} columns, need {need}")]
    RankDeficient { need: usize, got: usize },
    #[error("design requires the {0} topology")]
    WrongTopology(&'static str),
    #[error(transparent)]
    Network(#[from] crate::network::NetworkError),
}

/// One precoding matrix per transmitter (index 0 is TX 1), `streams`
/// columns each.
#[derive(Clone, Debug)]
pub struct PrecoderSet<S: Scalar> {
    pub precoders: Vec<Mat<S>>,
    pub streams: usize,
}

impl<S: Scalar> PrecoderSet<S> {
    pub fn to_json(&self) -> Value {
        json!({
            "streams": self.streams,
            "precoders": self.precoders.iter().map(|v| {
                (0..v.rows()).map(|i| {
                    (0..v.cols()).map(|j| v.get(i, j).json_string()).collect::<Vec<_>>()
                }).collect::<Vec<_>>()
            }).collect::<Vec<_>>(),
        })
    }
}

fn truncate_null<S: Scalar>(null: &Mat<S>, need: usize) -> Result<Mat<S>, AlignError> {
    if null.cols() < need {
        return Err(AlignError::RankDeficient {
            need,
            got: null.cols(),
        });
    }
    Ok(null.col_slice(0, need))
}

/// K-user design at `(M_T, M_R) = (beta K, beta (K^2 - K - 1))`: for each
/// receiver, stack its K-1 interference channels and read one null-space
/// block per interfering transmitter, aligning `beta` interference
/// dimensions there. Every transmitter ends up with `beta (K-1)` streams.
pub fn design_k_user<S: Scalar>(
    net: &Network<S>,
    beta: usize,
) -> Result<PrecoderSet<S>, AlignError> {
    if net.topology() != Topology::FullIc {
        return Err(AlignError::WrongTopology("full_ic"));
    }
    let k = net.users();
    let (m_t, m_r) = (net.tx_antennas(), net.rx_antennas());
    if m_t != beta * k || m_r != beta * (k * k - k - 1) {
        return Err(AlignError::WrongShape {
            expected: format!("{}x{}", beta * k, beta * (k * k - k - 1)),
            got: format!("{m_t}x{m_r}"),
            detail: "(beta*K, beta*(K^2-K-1))",
        });
    }
    let d = beta * (k - 1);
    // blocks[tx - 1][slot - 1] = beta columns of V^[tx].
    let mut blocks: Vec<Vec<Option<Mat<S>>>> = vec![vec![None; k - 1]; k];
    for eq in 1..=k {
        let sources: Vec<usize> = (1..=k).filter(|&i| i != eq).collect();
        let stacked: Vec<&Mat<S>> = sources
            .iter()
            .map(|&i| net.link(eq, i))
            .collect::<Result<_, _>>()?;
        let system = Mat::hstack(&stacked);
        let null = truncate_null(&system.null_space(), beta)?;
        for (p, &tx) in sources.iter().enumerate() {
            let slot = if tx < eq { eq - 1 } else { eq };
            let rows = Mat::from_fn(m_t, beta, |i, j| null.get(p * m_t + i, j).clone());
            blocks[tx - 1][slot - 1] = Some(rows);
        }
    }
    let precoders: Vec<Mat<S>> = blocks
        .into_iter()
        .map(|slots| {
            let parts: Vec<Mat<S>> = slots.into_iter().map(|b| b.expect("slot filled")).collect();
            let refs: Vec<&Mat<S>> = parts.iter().collect();
            Mat::hstack(&refs)
        })
        .collect();
    Ok(PrecoderSet {
        precoders,
        streams: d,
    })
}

/// The three four-to-one breakpoint designs at `(M, N) = (4b, 9b)`,
/// `(3b, 5b)` and `(5b, 6b)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FourToOneCase {
    /// `(4b, 9b)`: align TX 4 entirely into the span of TX 2 and TX 3.
    M4N9,
    /// `(3b, 5b)`: pairwise intersections, `b` dimensions per pair.
    M3N5,
    /// `(5b, 6b)`: TX 3 and TX 4 ride in TX 2's subspace.
    M5N6,
}

impl std::str::FromStr for FourToOneCase {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "4x9" => Ok(FourToOneCase::M4N9),
            "3x5" => Ok(FourToOneCase::M3N5),
            "5x6" => Ok(FourToOneCase::M5N6),
            other => Err(format!("unknown case: {other} (expected 4x9, 3x5 or 5x6)")),
        }
    }
}

impl FourToOneCase {
    pub fn unit_antennas(self) -> (usize, usize) {
        match self {
            FourToOneCase::M4N9 => (4, 9),
            FourToOneCase::M3N5 => (3, 5),
            FourToOneCase::M5N6 => (5, 6),
        }
    }

    pub fn streams_per_unit(self) -> usize {
        match self {
            FourToOneCase::M4N9 => 3,
            FourToOneCase::M3N5 => 2,
            FourToOneCase::M5N6 => 3,
        }
    }
}

/// Four-to-one breakpoint designs. TX 1 is unconstrained (random generic);
/// the interfering precoders come from the stated stacked null spaces,
/// truncated to the needed column count.
pub fn design_four_to_one<S: Scalar>(
    net: &Network<S>,
    case: FourToOneCase,
    seed: u64,
) -> Result<PrecoderSet<S>, AlignError> {
    if net.topology() != Topology::ManyToOne || net.users() != 4 {
        return Err(AlignError::WrongTopology("many_to_one with K = 4"));
    }
    let (mu, nu) = case.unit_antennas();
    let (m, n) = (net.tx_antennas(), net.rx_antennas());
    if m % mu != 0 || n / nu != m / mu || n % nu != 0 {
        return Err(AlignError::WrongShape {
            expected: format!("({mu}b, {nu}b)"),
            got: format!("{m}x{n}"),
            detail: "case antennas",
        });
    }
    let beta = m / mu;
    let d = beta * case.streams_per_unit();
    let block = |null: &Mat<S>, idx: usize| -> Mat<S> {
        Mat::from_fn(m, null.cols(), |i, j| null.get(idx * m + i, j).clone())
    };
    let (v2, v3, v4) = match case {
        FourToOneCase::M4N9 => {
            let sys = Mat::hstack(&[net.link(1, 2)?, net.link(1, 3)?, net.link(1, 4)?]);
            let null = truncate_null(&sys.null_space(), d)?;
            (block(&null, 0), block(&null, 1), block(&null, 2))
        }
        FourToOneCase::M3N5 => {
            let pair = |a: usize, b: usize| -> Result<Mat<S>, AlignError> {
                let sys = Mat::hstack(&[net.link(1, a)?, net.link(1, b)?]);
                truncate_null(&sys.null_space(), beta)
            };
            let n23 = pair(2, 3)?;
            let n24 = pair(2, 4)?;
            let n34 = pair(3, 4)?;
            let v2 = Mat::hstack(&[&block(&n23, 0), &block(&n24, 0)]);
            let v3 = Mat::hstack(&[&block(&n23, 1), &block(&n34, 0)]);
            let v4 = Mat::hstack(&[&block(&n24, 1), &block(&n34, 1)]);
            (v2, v3, v4)
        }
        FourToOneCase::M5N6 => {
            let zero = Mat::<S>::zeros(n, m);
            let top = Mat::hstack(&[net.link(1, 2)?, net.link(1, 3)?, &zero]);
            let bot = Mat::hstack(&[net.link(1, 2)?, &zero, net.link(1, 4)?]);
            let sys = Mat::vstack(&[&top, &bot]);
            let null = truncate_null(&sys.null_space(), d)?;
            (block(&null, 0), block(&null, 1), block(&null, 2))
        }
    };
    let mut rng = Rng::new(seed);
    let v1 = Mat::random_generic(m, d, &mut rng);
    Ok(PrecoderSet {
        precoders: vec![v1, v2, v3, v4],
        streams: d,
    })
}

/// Per-receiver verification outcome.
#[derive(Clone, Debug)]
pub struct RxCheck {
    pub rx: usize,
    pub interference_dim: usize,
    pub interference_fits: bool,
    pub desired_separated: bool,
    pub zero_forcing_decodes: bool,
}

/// Full verification report.
#[derive(Clone, Debug)]
pub struct AlignmentReport<S: Scalar> {
    pub per_rx: Vec<RxCheck>,
    pub precoder_ranks_ok: bool,
    pub pass: bool,
    /// Zero-forcing receive filters per receiver (columns orthogonal to the
    /// interference), kept for duality experiments.
    pub filters: Vec<Option<Mat<S>>>,
}

impl<S: Scalar> AlignmentReport<S> {
    pub fn to_json(&self) -> Value {
        json!({
            "pass": self.pass,
            "precoder_ranks_ok": self.precoder_ranks_ok,
            "per_rx": self.per_rx.iter().map(|c| json!({
                "rx": c.rx,
                "interference_dim": c.interference_dim,
                "interference_fits": c.interference_fits,
                "desired_separated": c.desired_separated,
                "zero_forcing_decodes": c.zero_forcing_decodes,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Check a precoder set end to end: per-receiver interference span small
/// enough, desired signal separated from it, and a zero-forcing filter that
/// actually recovers all `d` streams. Failures are report entries, never
/// errors.
pub fn verify_alignment<S: Scalar>(
    net: &Network<S>,
    set: &PrecoderSet<S>,
    d: usize,
) -> AlignmentReport<S> {
    let k = net.users();
    let m_r = net.rx_antennas();
    let precoder_ranks_ok = d == 0 || set.precoders.iter().all(|v| v.cols() == d && v.rank() == d);
    let mut per_rx = Vec::new();
    let mut filters: Vec<Option<Mat<S>>> = Vec::new();
    for rx in 1..=k {
        let interferers = net.interference_sources(rx);
        let mut parts: Vec<Mat<S>> = Vec::new();
        for &tx in &interferers {
            if tx == rx {
                continue;
            }
            let h = match net.link(rx, tx) {
                Ok(h) => h,
                Err(_) => continue,
            };
            parts.push(h.mul(&set.precoders[tx - 1]));
        }
        let interference = if parts.is_empty() {
            Mat::<S>::zeros(m_r, 0)
        } else {
            let refs: Vec<&Mat<S>> = parts.iter().collect();
            Mat::hstack(&refs).col_span_basis()
        };
        let i_dim = interference.cols();
        let desired = match net.link(rx, rx) {
            Ok(h) => h.mul(&set.precoders[rx - 1]),
            Err(_) => Mat::zeros(m_r, 0),
        };
        let interference_fits = i_dim + d <= m_r;
        let desired_separated = if d == 0 {
            true
        } else {
            Mat::hstack(&[&desired, &interference]).rank() == d + i_dim
        };
        let filter = interference.transpose().null_space();
        let zero_forcing_decodes = if d == 0 {
            true
        } else {
            filter.transpose().mul(&desired).rank() == d
        };
        per_rx.push(RxCheck {
            rx,
            interference_dim: i_dim,
            interference_fits,
            desired_separated,
            zero_forcing_decodes,
        });
        filters.push(Some(filter));
    }
    let pass = precoder_ranks_ok
        && per_rx
            .iter()
            .all(|c| c.interference_fits && c.desired_separated && c.zero_forcing_decodes);
    AlignmentReport {
        per_rx,
        precoder_ranks_ok,
        pass,
        filters,
    }
}

/// Counting test: does `d` streams per user satisfy the proper-system
/// inequality for the topology?
pub fn proper_test(k: usize, m: usize, n: usize, d: &BigRational, topology: Topology) -> bool {
    let bound = match topology {
        Topology::ManyToOne => crate::dof::many_to_one_counting(k, m, n),
        _ => crate::dof::counting_bound(k, m, n),
    };
    *d <= bound
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::derive_seed;

    fn k_user_net(k: usize, beta: usize, seed: u64) -> Network<f64> {
        Network::generate_generic(Topology::FullIc, k, beta * k, beta * (k * k - k - 1), seed)
            .unwrap()
    }

    #[test]
    fn k_user_design_aligns_and_decodes() {
        for (k, beta) in [(4usize, 1usize), (5, 1), (4, 2)] {
            let net = k_user_net(k, beta, derive_seed(3, "kud", (k * 10 + beta) as u64));
            let set = design_k_user(&net, beta).unwrap();
            assert_eq!(set.streams, beta * (k - 1));
            let report = verify_alignment(&net, &set, set.streams);
            assert!(report.pass, "K={k} beta={beta}: {report:?}");
            // Each receiver absorbs beta*(K-1)^2 interference dims into
            // beta*((K-1)^2 - 1), saving exactly beta.
            for check in &report.per_rx {
                assert_eq!(check.interference_dim, beta * ((k - 1) * (k - 1) - 1));
            }
        }
    }

    #[test]
    fn k_user_design_rejects_wrong_shapes() {
        let net = Network::<f64>::generate_generic(Topology::FullIc, 4, 3, 11, 2).unwrap();
        assert!(matches!(
            design_k_user(&net, 1),
            Err(AlignError::WrongShape { .. })
        ));
    }

    #[test]
    fn four_to_one_breakpoint_designs() {
        let cases = [
            (FourToOneCase::M4N9, 4usize, 9usize, 3usize, 6usize),
            (FourToOneCase::M3N5, 3, 5, 2, 3),
            (FourToOneCase::M5N6, 5, 6, 3, 3),
        ];
        for (case, m, n, d, i_dim) in cases {
            let net = Network::<f64>::generate_generic(Topology::ManyToOne, 4, m, n, 31).unwrap();
            let set = design_four_to_one(&net, case, 31).unwrap();
            assert_eq!(set.streams, d);
            let report = verify_alignment(&net, &set, d);
            assert!(report.pass, "{case:?}: {report:?}");
            assert_eq!(report.per_rx[0].interference_dim, i_dim, "{case:?}");
        }
    }

    #[test]
    fn random_precoders_fail_to_align() {
        let net = Network::<f64>::generate_generic(Topology::ManyToOne, 4, 4, 9, 7).unwrap();
        let mut rng = Rng::new(99);
        let set = PrecoderSet {
            precoders: (0..4)
                .map(|_| Mat::random_generic(4, 3, &mut rng))
                .collect(),
            streams: 3,
        };
        let report = verify_alignment(&net, &set, 3);
        assert_eq!(report.per_rx[0].interference_dim, 9);
        assert!(!report.pass);
    }

    #[test]
    fn zero_stream_precoders_pass_vacuously() {
        let net = Network::<f64>::generate_generic(Topology::FullIc, 4, 2, 5, 7).unwrap();
        let set = PrecoderSet {
            precoders: (0..4).map(|_| Mat::<f64>::zeros(2, 0)).collect(),
            streams: 0,
        };
        assert!(verify_alignment(&net, &set, 0).pass);
    }

    #[test]
    fn duality_of_the_k_user_design() {
        // Receive filters of the primal design serve as precoders on the
        // reciprocal network at the same stream count.
        let net = k_user_net(4, 1, 15);
        let set = design_k_user(&net, 1).unwrap();
        let report = verify_alignment(&net, &set, set.streams);
        assert!(report.pass);
        let rec = net.reciprocal().unwrap();
        let dual_precoders: Vec<Mat<f64>> =
            report.filters.iter().map(|f| f.clone().unwrap()).collect();
        assert!(dual_precoders.iter().all(|u| u.cols() == set.streams));
        let dual_set = PrecoderSet {
            precoders: dual_precoders,
            streams: set.streams,
        };
        let dual_report = verify_alignment(&rec, &dual_set, set.streams);
        assert!(dual_report.pass, "{dual_report:?}");
    }

    #[test]
    fn proper_test_values() {
        let d = BigRational::new(10.into(), 7.into());
        assert!(!proper_test(4, 2, 5, &d, Topology::FullIc)); // 10/7 > 7/5
        let d = BigRational::new(3.into(), 2.into());
        assert!(proper_test(4, 2, 5, &d, Topology::ManyToOne)); // 3/2 <= 11/7
        let zero = BigRational::new(0.into(), 1.into());
        assert!(proper_test(4, 2, 5, &zero, Topology::FullIc));
    }
}
