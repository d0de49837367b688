//! Greedy packing of ordered subspaces into complete sets.
//!
//! Given subspaces of an M-dimensional space, collect them in the given
//! order into sets of M linearly independent basis vectors. When the next
//! subspace would overflow a set, it is split into the part intersecting the
//! current set's span and the remainder; the remainder completes the set and
//! the intersecting part restarts the scan as the head of the queue. The
//! number of complete sets built this way is `l_sigma`; leftovers that never
//! complete a set are reported, not dropped, so a downstream entropy ledger
//! can apply its non-negativity rule explicitly.

use crate::linalg::Scalar;
use crate::subspace::{Subspace, SubspaceError};
use serde_json::{json, Value};
use std::collections::VecDeque;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum MultilookError {
    #[error(transparent)]
    Subspace(#[from] SubspaceError),
    #[error("subspace dimension {dim} exceeds the ambient dimension {m}")]
    DimExceedsM { dim: usize, m: usize },
}

/// Outcome of [`build_full_sets`]: the complete sets (each a list of
/// `(source index, part)`), and the parts left over at termination.
#[derive(Clone, Debug)]
pub struct MultilookResult<S: Scalar> {
    pub l_sigma: usize,
    pub sets: Vec<Vec<(usize, Subspace<S>)>>,
    pub discarded: Vec<(usize, Subspace<S>)>,
}

impl<S: Scalar> MultilookResult<S> {
    /// Sum of part dimensions over the complete sets plus the discarded
    /// parts; equals the sum of the input dimensions.
    pub fn total_dims(&self) -> usize {
        let in_sets: usize = self
            .sets
            .iter()
            .flat_map(|set| set.iter().map(|(_, p)| p.dim()))
            .sum();
        let dropped: usize = self.discarded.iter().map(|(_, p)| p.dim()).sum();
        in_sets + dropped
    }

    pub fn to_json(&self) -> Value {
        let set_json = |set: &[(usize, Subspace<S>)]| {
            Value::Array(
                set.iter()
                    .map(|(src, part)| json!({"source": src, "part": part.to_json()}))
                    .collect(),
            )
        };
        json!({
            "l_sigma": self.l_sigma,
            "sets": self.sets.iter().map(|s| set_json(s)).collect::<Vec<_>>(),
            "discarded": set_json(&self.discarded),
        })
    }
}

/// Sequential collection in list order. Subspaces are taken whole while the
/// raw dimension count stays below M; an overflowing subspace is split into
/// (intersection with the current span, remainder), the remainder completes
/// the set and the intersection restarts the scan. A subspace already
/// contained in the current span is absorbed whole: it contributes no new
/// independent vectors, so it cannot overflow the set.
pub fn build_full_sets<S: Scalar>(
    subspaces: &[Subspace<S>],
    m: usize,
) -> Result<MultilookResult<S>, MultilookError> {
    for s in subspaces {
        if s.ambient_dim() != m {
            return Err(SubspaceError::AmbientMismatch(s.ambient_dim(), m).into());
        }
    }
    let mut queue: VecDeque<(usize, Subspace<S>)> = subspaces
        .iter()
        .cloned()
        .enumerate()
        .filter(|(_, s)| s.dim() > 0)
        .collect();

    let mut sets: Vec<Vec<(usize, Subspace<S>)>> = Vec::new();
    let mut cur: Vec<(usize, Subspace<S>)> = Vec::new();
    let mut cur_span = Subspace::<S>::zero(m);
    let mut cur_raw = 0usize;

    while let Some((src, s)) = queue.pop_front() {
        if cur_raw + s.dim() <= m {
            cur_span = cur_span.union_span(&s)?;
            cur_raw += s.dim();
            cur.push((src, s));
        } else {
            let sa = s.intersect(&cur_span)?;
            let sr = s.subtract(&sa)?;
            if sr.dim() == 0 {
                // Entirely inside the current span; absorb without progress.
                cur_raw += s.dim();
                cur.push((src, s));
                continue;
            }
            cur_span = cur_span.union_span(&sr)?;
            cur_raw += sr.dim();
            cur.push((src, sr));
            queue.push_front((src, sa));
        }
        if cur_span.dim() == m {
            sets.push(std::mem::take(&mut cur));
            cur_span = Subspace::zero(m);
            cur_raw = 0;
        }
    }

    Ok(MultilookResult {
        l_sigma: sets.len(),
        sets,
        discarded: cur,
    })
}

/// Number of complete sets for generic subspaces: `floor(sum(dims) / m)`.
pub fn l_sigma_generic(dims: &[usize], m: usize) -> Result<usize, MultilookError> {
    for &d in dims {
        if d > m {
            return Err(MultilookError::DimExceedsM { dim: d, m });
        }
    }
    Ok(dims.iter().sum::<usize>() / m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::derive_seed;
    use crate::subspace::{FSubspace, RSubspace};

    fn worked_instance() -> Vec<RSubspace> {
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

    #[test]
    fn worked_instance_builds_three_sets() {
        let subs = worked_instance();
        let res = build_full_sets(&subs, 3).unwrap();
        assert_eq!(res.l_sigma, 3);
        assert_eq!(res.total_dims(), 10);

        let s = |vs: &[Vec<i64>]| RSubspace::from_int_columns(3, vs).unwrap();
        // Set 2 carries the non-overlapping remainder of the fifth subspace.
        let l5_rem = &res.sets[1].iter().find(|(src, _)| *src == 4).unwrap().1;
        assert!(l5_rem.span_eq(&s(&[vec![1, 1, -1]])).unwrap());
        // Set 3 starts from the intersecting part of the fifth subspace and
        // closes with the remainder of the sixth.
        let l5_a = &res.sets[2].iter().find(|(src, _)| *src == 4).unwrap().1;
        assert!(l5_a.span_eq(&s(&[vec![1, -1, 0], vec![1, 0, 1]])).unwrap());
        let l6_rem = &res.sets[2].iter().find(|(src, _)| *src == 5).unwrap().1;
        assert!(l6_rem.span_eq(&s(&[vec![3, 6, -5]])).unwrap());
        // The intersecting part of the sixth subspace is discarded.
        assert_eq!(res.discarded.len(), 1);
        assert_eq!(res.discarded[0].0, 5);
        assert!(res.discarded[0].1.span_eq(&s(&[vec![1, 2, 3]])).unwrap());
        // Every complete set spans the whole space.
        for set in &res.sets {
            let mut span = RSubspace::zero(3);
            for (_, part) in set {
                span = span.union_span(part).unwrap();
            }
            assert_eq!(span.dim(), 3);
        }
    }

    #[test]
    fn single_full_subspace_is_one_set() {
        let res = build_full_sets(&[RSubspace::full(4)], 4).unwrap();
        assert_eq!(res.l_sigma, 1);
        assert!(res.discarded.is_empty());
    }

    #[test]
    fn m_plus_one_generic_lines_leave_one_line_over() {
        let lines: Vec<FSubspace> = (1..=4)
            .map(|seed| FSubspace::random_generic(3, 1, seed).unwrap())
            .collect();
        let res = build_full_sets(&lines, 3).unwrap();
        assert_eq!(res.l_sigma, 1);
        assert_eq!(res.discarded.len(), 1);
        assert_eq!(res.discarded[0].1.dim(), 1);
    }

    #[test]
    fn l_sigma_generic_values() {
        assert_eq!(l_sigma_generic(&[1, 2, 1, 1, 3, 2], 3).unwrap(), 3);
        assert_eq!(l_sigma_generic(&[4], 4).unwrap(), 1);
        assert_eq!(l_sigma_generic(&[1, 1], 3).unwrap(), 0);
        assert!(l_sigma_generic(&[4], 3).is_err());
    }

    #[test]
    fn generic_instances_reach_the_floor_bound() {
        for seed in 0..25u64 {
            let m = 3 + (seed % 6) as usize;
            let count = 2 + (seed % 5) as usize;
            let mut dims = Vec::new();
            let mut subs = Vec::new();
            for k in 0..count {
                let d = 1 + ((seed as usize + 3 * k) % m);
                dims.push(d);
                subs.push(
                    FSubspace::random_generic(m, d, derive_seed(seed, "mlk", k as u64)).unwrap(),
                );
            }
            let res = build_full_sets(&subs, m).unwrap();
            let floor = l_sigma_generic(&dims, m).unwrap();
            assert_eq!(res.l_sigma, floor, "seed {seed} dims {dims:?} m {m}");
            assert_eq!(res.total_dims(), dims.iter().sum::<usize>());
        }
    }

    #[test]
    fn repeated_lines_never_exceed_the_floor() {
        // Three copies of the same line in R^2: the raw dimension count
        // reaches the floor but the span never completes a set, so
        // everything lands in the leftovers.
        let line = RSubspace::from_int_columns(2, &[vec![1, 0]]).unwrap();
        let res = build_full_sets(&[line.clone(), line.clone(), line], 2).unwrap();
        assert_eq!(res.l_sigma, 0);
        assert_eq!(res.total_dims(), 3);
        assert!(res.l_sigma <= l_sigma_generic(&[1, 1, 1], 2).unwrap());
    }

    #[test]
    fn determinism() {
        let subs = worked_instance();
        let a = build_full_sets(&subs, 3).unwrap();
        let b = build_full_sets(&subs, 3).unwrap();
        assert_eq!(a.to_json(), b.to_json());
    }
}
