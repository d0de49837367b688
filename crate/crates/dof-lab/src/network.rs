//! Network topologies and channel realizations.
//!
//! A [`Network`] holds the channel matrix of every present link, keyed by
//! `(rx, tx)` with 1-based user indices. Three topologies are supported:
//! the fully connected interference channel, the many-to-one channel (only
//! receiver 1 hears interference), and the X channel (every link present,
//! every transmitter has a message for every receiver).
//!
//! Besides seeded generic fills, two structured 0/1 channel families are
//! provided for exact full-rank certificates: one for ratios M/N in
//! [2/5, 1/2), one for ratios of the form (2c-1)/(5c-2). Their interference
//! links are built from identity blocks sized by gcd arithmetic; desired
//! links stay generic.

use crate::linalg::{Mat, Scalar};
use crate::rng::Rng;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum NetworkError {
    #[error("invalid network size: K={k}, M_T={m_t}, M_R={m_r}")]
    InvalidSize { k: usize, m_t: usize, m_r: usize },
    #[error("ratio {m}/{n} outside the required range {range}")]
    RatioOutOfRange {
        m: usize,
        n: usize,
        range: &'static str,
    },
    #[error("ratio {m}/{n} is not of the form (2c-1)/(5c-2) with c >= 2")]
    NotP3Form { m: usize, n: usize },
    #[error("operation requires the {0} topology")]
    UnsupportedTopology(&'static str),
    #[error("no channel from TX {tx} to RX {rx}")]
    MissingLink { rx: usize, tx: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Topology {
    FullIc,
    ManyToOne,
    XChannel,
}

impl std::fmt::Display for Topology {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Topology::FullIc => write!(f, "full_ic"),
            Topology::ManyToOne => write!(f, "many_to_one"),
            Topology::XChannel => write!(f, "x_channel"),
        }
    }
}

/// A `(K, M, N)` operating point with `M = min(M_T, M_R)`,
/// `N = max(M_T, M_R)` and the ratio `gamma = M/N` kept exact.
#[derive(Clone, Debug, PartialEq)]
pub struct RegimePoint {
    pub k: usize,
    pub m: usize,
    pub n: usize,
    pub gamma: BigRational,
}

impl RegimePoint {
    pub fn new(k: usize, m_t: usize, m_r: usize) -> Self {
        let m = m_t.min(m_r);
        let n = m_t.max(m_r);
        RegimePoint {
            k,
            m,
            n,
            gamma: BigRational::new(BigInt::from(m as i64), BigInt::from(n as i64)),
        }
    }
}

/// Channel realization of an interference network.
#[derive(Clone)]
pub struct Network<S> {
    topology: Topology,
    k: usize,
    m_t: usize,
    m_r: usize,
    channels: BTreeMap<(usize, usize), Mat<S>>,
}

impl<S: Scalar> Network<S> {
    pub fn topology(&self) -> Topology {
        self.topology
    }
    pub fn users(&self) -> usize {
        self.k
    }
    pub fn tx_antennas(&self) -> usize {
        self.m_t
    }
    pub fn rx_antennas(&self) -> usize {
        self.m_r
    }

    pub fn has_link(&self, rx: usize, tx: usize) -> bool {
        self.channels.contains_key(&(rx, tx))
    }

    pub fn link(&self, rx: usize, tx: usize) -> Result<&Mat<S>, NetworkError> {
        self.channels
            .get(&(rx, tx))
            .ok_or(NetworkError::MissingLink { rx, tx })
    }

    pub fn links(&self) -> impl Iterator<Item = (&(usize, usize), &Mat<S>)> {
        self.channels.iter()
    }

    /// Transmitters whose signal arrives at `rx` and cannot be subtracted
    /// outright, in ascending index order. Own-message removal applies on
    /// the interference channels; on the X channel a receiver decodes only
    /// one of each transmitter's messages, so every arriving signal stays.
    pub fn interference_sources(&self, rx: usize) -> Vec<usize> {
        match self.topology {
            Topology::FullIc => (1..=self.k).filter(|&t| t != rx).collect(),
            Topology::ManyToOne => {
                if rx == 1 {
                    (2..=self.k).collect()
                } else {
                    Vec::new()
                }
            }
            Topology::XChannel => (1..=self.k).collect(),
        }
    }

    fn link_set(topology: Topology, k: usize) -> Vec<(usize, usize)> {
        match topology {
            Topology::FullIc | Topology::XChannel => (1..=k)
                .flat_map(|rx| (1..=k).map(move |tx| (rx, tx)))
                .collect(),
            Topology::ManyToOne => {
                let mut links: Vec<(usize, usize)> = (1..=k).map(|tx| (1, tx)).collect();
                links.extend((2..=k).map(|j| (j, j)));
                links.sort_unstable();
                links
            }
        }
    }

    /// Fill every present link with generic entries, deterministically in
    /// the seed. Links are visited in ascending `(rx, tx)` order.
    pub fn generate_generic(
        topology: Topology,
        k: usize,
        m_t: usize,
        m_r: usize,
        seed: u64,
    ) -> Result<Self, NetworkError> {
        if k < 2 || m_t < 1 || m_r < 1 {
            return Err(NetworkError::InvalidSize { k, m_t, m_r });
        }
        let mut rng = Rng::new(seed);
        let mut channels = BTreeMap::new();
        for (rx, tx) in Self::link_set(topology, k) {
            channels.insert((rx, tx), Mat::random_generic(m_r, m_t, &mut rng));
        }
        Ok(Network {
            topology,
            k,
            m_t,
            m_r,
            channels,
        })
    }

    /// Swap transmit and receive roles: `(M_T, M_R)` becomes `(M_R, M_T)`
    /// and the channel from i to j becomes the transpose of the original
    /// channel from j to i. An involution.
    pub fn reciprocal(&self) -> Result<Self, NetworkError> {
        if self.topology != Topology::FullIc {
            return Err(NetworkError::UnsupportedTopology("full_ic"));
        }
        let channels = self
            .channels
            .iter()
            .map(|(&(rx, tx), m)| ((tx, rx), m.transpose()))
            .collect();
        Ok(Network {
            topology: self.topology,
            k: self.k,
            m_t: self.m_r,
            m_r: self.m_t,
            channels,
        })
    }

    pub fn to_json(&self) -> Value {
        let links: Vec<Value> = self
            .channels
            .iter()
            .map(|(&(rx, tx), m)| {
                let rows: Vec<Value> = (0..m.rows())
                    .map(|i| {
                        Value::Array(
                            (0..m.cols())
                                .map(|j| Value::String(m.get(i, j).json_string()))
                                .collect(),
                        )
                    })
                    .collect();
                json!({"rx": rx, "tx": tx, "matrix": rows})
            })
            .collect();
        json!({
            "topology": self.topology.to_string(),
            "k": self.k,
            "m_t": self.m_t,
            "m_r": self.m_r,
            "backend": S::BACKEND.to_string(),
            "links": links,
        })
    }
}

/// Writes ones on the diagonal of an `h x h` identity block at `(row0, col0)`.
fn place_identity<S: Scalar>(m: &mut Mat<S>, row0: usize, col0: usize, h: usize) {
    for d in 0..h {
        m.set(row0 + d, col0 + d, S::one());
    }
}

/// Structured interference channels for M/N in [2/5, 1/2), K = 4.
///
/// Cross links are 0/1 matrices: the next and second-next interferer project
/// onto disjoint identity blocks, and the previous interferer's matrix is a
/// block pattern sized by `a = gcd(M, N)`. Desired links are generic.
pub fn structured_channels_half(
    m: usize,
    n: usize,
    seed: u64,
) -> Result<Network<BigRational>, NetworkError> {
    // 2/5 <= m/n < 1/2, exactly.
    if !(5 * m >= 2 * n && 2 * m < n) {
        return Err(NetworkError::RatioOutOfRange {
            m,
            n,
            range: "[2/5, 1/2)",
        });
    }
    let a = m.gcd(&n);
    let w1 = n - 2 * m;
    let w2 = n - 2 * m - a; // a divides n - 2m, so this cannot underflow
    let w3 = 5 * m - 2 * n + a;
    assert_eq!(w1 + w2 + w3, m, "column blocks must tile the M columns");

    let mut prev = Mat::zeros(n, m);
    let mut r = w2; // rows 0..w2 are zero
    place_identity(&mut prev, r, w1 + w2, w3);
    r += w3;
    place_identity(&mut prev, r, w1, w2);
    r += w2;
    r += a; // zero rows
    place_identity(&mut prev, r, w1, w2);
    r += w2;
    place_identity(&mut prev, r, w1 + w2, w3);
    r += w3;
    r += w1; // zero rows
    place_identity(&mut prev, r, 0, w1);
    r += w1;
    assert_eq!(r, n, "row blocks must tile the N rows");

    build_structured_four_user(m, n, prev, seed)
}

/// Structured interference channels for M/N = (2c-1)/(5c-2), c >= 2, K = 4,
/// scaled by any integer factor. Here `a = 2N - 5M`, which equals gcd(M, N).
pub fn structured_channels_p3(
    m: usize,
    n: usize,
    seed: u64,
) -> Result<Network<BigRational>, NetworkError> {
    let g = m.gcd(&n);
    let (mr, nr) = (m / g, n / g);
    // mr = 2c - 1 and nr = 5c - 2 for an integer c >= 2.
    let c_ok = mr % 2 == 1 && {
        let c = mr.div_ceil(2);
        c >= 2 && nr == 5 * c - 2
    };
    if !c_ok {
        return Err(NetworkError::NotP3Form { m, n });
    }
    let a = 2 * n - 5 * m;
    assert_eq!(a, g, "2N - 5M must equal gcd(M, N) on this family");
    let w1 = n - 2 * m;
    let w2 = n - 2 * m - a;
    assert_eq!(w1 + w2, m, "column blocks must tile the M columns");

    let mut prev = Mat::zeros(n, m);
    let mut r = 3 * m - n; // zero rows
    place_identity(&mut prev, r, w1, w2);
    r += w2;
    r += a; // zero rows
    place_identity(&mut prev, r, w1, w2);
    r += w2;
    r += w1; // zero rows
    place_identity(&mut prev, r, 0, w1);
    r += w1;
    assert_eq!(r, n, "row blocks must tile the N rows");

    build_structured_four_user(m, n, prev, seed)
}

/// Shared assembly: H[k, k+1] and H[k, k+2] are stacked identity blocks,
/// H[k, k-1] is the supplied pattern, desired links are generic.
fn build_structured_four_user(
    m: usize,
    n: usize,
    prev_pattern: Mat<BigRational>,
    seed: u64,
) -> Result<Network<BigRational>, NetworkError> {
    let k = 4usize;
    let mut next = Mat::zeros(n, m);
    place_identity(&mut next, 0, 0, m);
    let mut second = Mat::zeros(n, m);
    place_identity(&mut second, m, 0, m);

    let mut rng = Rng::new(seed);
    let mut channels = BTreeMap::new();
    let wrap = |u: usize| (u - 1) % k + 1;
    for rx in 1..=k {
        channels.insert((rx, rx), Mat::random_generic(n, m, &mut rng));
        channels.insert((rx, wrap(rx + 1)), next.clone());
        channels.insert((rx, wrap(rx + 2)), second.clone());
        channels.insert((rx, wrap(rx + 3)), prev_pattern.clone());
    }
    Ok(Network {
        topology: Topology::FullIc,
        k,
        m_t: m,
        m_r: n,
        channels,
    })
}

/// Fixed `(M_T, M_R) = (2, 5)` four-user channel realization used by the
/// runnable examples and golden tests. The six cross links below determine
/// the documented exposed directions at receivers 2 and 3; the remaining
/// links are filled generically from the given seed.
#[allow(clippy::approx_constant)] // fixed reference coefficients
pub fn reference_2x5(seed: u64) -> Network<f64> {
    let h21 = vec![
        vec![0.5888, -0.3927],
        vec![1.0095, -1.5730],
        vec![-0.4297, -1.3400],
        vec![0.3536, 0.4674],
        vec![-1.4046, 0.6240],
    ];
    let h23 = vec![
        vec![-2.4617, 0.1171],
        vec![1.9378, 1.5657],
        vec![0.8237, 0.5253],
        vec![-0.8099, 1.5186],
        vec![0.4344, -0.6581],
    ];
    let h24 = vec![
        vec![-0.5819, -1.4890],
        vec![0.2349, 0.1483],
        vec![-0.0988, 0.9539],
        vec![-0.1352, 2.2932],
        vec![-1.8865, -0.1452],
    ];
    let h31 = vec![
        vec![0.0720, -1.9399],
        vec![0.7140, 2.4346],
        vec![1.2446, 0.3470],
        vec![0.4961, -0.9756],
        vec![0.5580, 0.4654],
    ];
    let h32 = vec![
        vec![-0.0999, -0.9784],
        vec![-0.2805, -1.1571],
        vec![0.4136, -0.0548],
        vec![0.2967, 1.1387],
        vec![1.1556, 0.7722],
    ];
    let h34 = vec![
        vec![0.6760, 0.0171],
        vec![-0.8062, -0.3684],
        vec![0.0049, -0.3526],
        vec![0.8783, 0.3086],
        vec![-0.9020, 0.3290],
    ];
    let mut net = Network::<f64>::generate_generic(Topology::FullIc, 4, 2, 5, seed).unwrap();
    let fixed = [
        ((2usize, 1usize), h21),
        ((2, 3), h23),
        ((2, 4), h24),
        ((3, 1), h31),
        ((3, 2), h32),
        ((3, 4), h34),
    ];
    for (key, rows) in fixed {
        net.channels.insert(key, Mat::from_f64_rows(&rows));
    }
    net
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generic_full_ic_has_all_links_with_right_shape() {
        let net = Network::<f64>::generate_generic(Topology::FullIc, 4, 2, 5, 3).unwrap();
        assert_eq!(net.links().count(), 16);
        for (_, m) in net.links() {
            assert_eq!((m.rows(), m.cols()), (5, 2));
        }
    }

    #[test]
    fn many_to_one_link_pattern() {
        let net = Network::<f64>::generate_generic(Topology::ManyToOne, 5, 2, 5, 3).unwrap();
        let mut keys: Vec<(usize, usize)> = net.links().map(|(&k, _)| k).collect();
        keys.sort_unstable();
        let expected = vec![
            (1, 1),
            (1, 2),
            (1, 3),
            (1, 4),
            (1, 5),
            (2, 2),
            (3, 3),
            (4, 4),
            (5, 5),
        ];
        assert_eq!(keys, expected);
        assert_eq!(net.interference_sources(1), vec![2, 3, 4, 5]);
        assert!(net.interference_sources(3).is_empty());
    }

    #[test]
    fn same_seed_same_network() {
        let a = Network::<f64>::generate_generic(Topology::FullIc, 4, 3, 7, 11).unwrap();
        let b = Network::<f64>::generate_generic(Topology::FullIc, 4, 3, 7, 11).unwrap();
        assert_eq!(a.to_json(), b.to_json());
    }

    #[test]
    fn reciprocal_is_an_involution_and_swaps_shapes() {
        let net = Network::<f64>::generate_generic(Topology::FullIc, 4, 2, 5, 1).unwrap();
        let rec = net.reciprocal().unwrap();
        assert_eq!((rec.tx_antennas(), rec.rx_antennas()), (5, 2));
        for (_, m) in rec.links() {
            assert_eq!((m.rows(), m.cols()), (2, 5));
        }
        let back = rec.reciprocal().unwrap();
        assert_eq!(net.to_json(), back.to_json());
    }

    #[test]
    fn structured_half_blocks_for_2x5() {
        let net = structured_channels_half(2, 5, 1).unwrap();
        // Next-interferer link is the identity over the first M rows.
        let next = net.link(1, 2).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let want = if i == j { 1 } else { 0 };
                assert_eq!(next.get(i, j), &Scalar::from_int(want));
            }
        }
        for i in 2..5 {
            for j in 0..2 {
                assert!(num_traits::Zero::is_zero(next.get(i, j)));
            }
        }
        // All cross links have full column rank M.
        for (&(rx, tx), m) in net.links() {
            if rx != tx {
                assert_eq!(m.rank(), 2, "link ({rx},{tx})");
            }
        }
    }

    #[test]
    fn structured_half_block_dims_stay_consistent() {
        // (M, N) = (4, 10): a = 2 and the middle column block is empty.
        let net = structured_channels_half(4, 10, 1).unwrap();
        for (&(rx, tx), m) in net.links() {
            assert_eq!((m.rows(), m.cols()), (10, 4), "link ({rx},{tx})");
            if rx != tx {
                assert_eq!(m.rank(), 4);
            }
        }
        assert!(matches!(
            structured_channels_half(3, 8, 1),
            Err(NetworkError::RatioOutOfRange { .. })
        ));
    }

    #[test]
    fn structured_p3_accepts_the_family_and_rejects_others() {
        let net = structured_channels_p3(3, 8, 1).unwrap();
        for (&(rx, tx), m) in net.links() {
            assert_eq!((m.rows(), m.cols()), (8, 3), "link ({rx},{tx})");
            if rx != tx {
                assert_eq!(m.rank(), 3);
            }
        }
        // (5, 13): c = 3, and 2N - 5M = 1 = gcd.
        assert!(structured_channels_p3(5, 13, 1).is_ok());
        // Scaled member (6, 16): c = 2 scaled by 2.
        assert!(structured_channels_p3(6, 16, 1).is_ok());
        assert!(matches!(
            structured_channels_p3(2, 5, 1),
            Err(NetworkError::NotP3Form { .. })
        ));
        assert!(matches!(
            structured_channels_p3(8, 21, 1),
            Err(NetworkError::NotP3Form { .. })
        ));
    }

    #[test]
    fn regime_point_orders_antennas() {
        let p = RegimePoint::new(4, 8, 3);
        assert_eq!((p.m, p.n), (3, 8));
        assert_eq!(p.gamma, BigRational::new(3.into(), 8.into()));
    }
}
