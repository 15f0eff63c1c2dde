//! Brute-force truncation oracles.
//!
//! Everything here uses only pointwise queries (`member`, `term`, `eval`,
//! `contains`) over a finite window of the fan, never the symbolic decision
//! procedures, so it can independently confirm their answers. The windows are
//! sound for descriptors produced by [`crate::corpus`], whose finite features
//! all sit far below the sampled depths and indices.

use std::collections::{BTreeMap, BTreeSet};

use crate::fan::{FanPoint, NeighborhoodSpec, Ramp};
use crate::functions::FunctionDescriptor;
use crate::sequences::SequenceDescriptor;
use crate::sets::DefinableSet;

pub const TRUNC_SPOKES: u64 = 32;
pub const TRUNC_DEPTH: u64 = 2048;
/// Generated spoke components live on spokes `≤` this bound.
pub const COMPONENT_SPOKES: u64 = 12;
/// Depth above every generated finite feature and tail start.
pub const DEEP: u64 = 1024;

/// Late window of term indices used by the sequence oracles.
pub const LATE_FROM: u64 = 2000;
pub const LATE_TO: u64 = 3000;
/// Uniform threshold that every late term of a generated convergent sequence meets.
pub const LATE_THRESHOLD: u64 = 100;

pub fn truncation_points(m: &DefinableSet, max_spoke: u64, max_depth: u64) -> BTreeSet<(u64, u64)> {
    let mut out = BTreeSet::new();
    for n in 1..=max_spoke {
        for d in 1..=max_depth {
            if m.member(&FanPoint::at(n, d)) {
                out.insert((n, d));
            }
        }
    }
    out
}

/// Number of truncated points of `m` outside `u`.
pub fn escape_count(m: &DefinableSet, u: &NeighborhoodSpec, max_spoke: u64, max_depth: u64) -> u64 {
    truncation_points(m, max_spoke, max_depth)
        .into_iter()
        .filter(|&(n, d)| !u.contains(&FanPoint::at(n, d)))
        .count() as u64
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IpVerdict {
    Finite,
    OnFinitelyManySpokes,
    UnboundedSpokes,
}

/// I_P classification of a generated set from its truncation alone.
///
/// Infinite iff some point is deeper than [`DEEP`] or some point lies past the
/// component spokes (only rows reach there). Unbounded iff a point lies past
/// the component spokes.
pub fn classify_ip(m: &DefinableSet) -> IpVerdict {
    let pts = truncation_points(m, TRUNC_SPOKES, TRUNC_DEPTH);
    if pts.iter().any(|&(n, _)| n > COMPONENT_SPOKES) {
        IpVerdict::UnboundedSpokes
    } else if pts.iter().any(|&(_, d)| d > DEEP) {
        IpVerdict::OnFinitelyManySpokes
    } else {
        IpVerdict::Finite
    }
}

/// Points of `m` outside `u`, scanning the complement of `u` spoke by spoke, up to `count`.
pub fn escaping_points(m: &DefinableSet, u: &NeighborhoodSpec, count: usize) -> Vec<FanPoint> {
    let mut out = Vec::new();
    for n in 1..=TRUNC_SPOKES * 32 {
        for d in 1..u.threshold(n).min(TRUNC_DEPTH + 1) {
            let x = FanPoint::at(n, d);
            if m.member(&x) {
                out.push(x);
                if out.len() == count {
                    return out;
                }
            }
        }
    }
    out
}

/// Deterministic family of 50 neighborhoods of the apex: uniform, sparse
/// overrides, and ramps.
pub fn sampled_neighborhoods() -> Vec<NeighborhoodSpec> {
    (0..50u64)
        .map(|i| {
            let default = 1 + (i * 7) % 23;
            let overrides: BTreeMap<u64, u64> = (1..=(i % 5)).map(|j| (j * (1 + i % 3), 1 + (i * j * 13) % 61)).collect();
            let ramp = (i % 4 == 3).then_some(Ramp { slope: 1 + i % 3, intercept: (i % 7) as i64 - 3 });
            NeighborhoodSpec::new(default, overrides, ramp).expect("positive thresholds")
        })
        .collect()
}

/// Whether `term(k) ∈ u` for every `k` in `from..=to`.
pub fn absorbed_on(t: &SequenceDescriptor, u: &NeighborhoodSpec, from: u64, to: u64) -> bool {
    (from.max(1)..=to).all(|k| u.contains(&t.term(k)))
}

/// Convergence of a generated sequence judged from its late window only.
pub fn converges_late(t: &SequenceDescriptor) -> bool {
    absorbed_on(t, &NeighborhoodSpec::uniform(LATE_THRESHOLD), LATE_FROM, LATE_TO)
}

/// Indices in the late window where `f(T_k) ≠ f(P)`.
pub fn late_deviations(f: &FunctionDescriptor, t: &SequenceDescriptor) -> u64 {
    let v0 = f.eval(&FanPoint::Apex);
    (LATE_FROM..=LATE_TO).filter(|&k| f.eval(&t.term(k)) != v0).count() as u64
}

/// `T ∈ D(f)` judged from the late window.
pub fn in_witness_family_late(f: &FunctionDescriptor, t: &SequenceDescriptor) -> bool {
    converges_late(t) && late_deviations(f, t) > 0
}

/// Least `k ≤ bound` with differing terms.
pub fn first_difference(a: &SequenceDescriptor, b: &SequenceDescriptor, bound: u64) -> Option<u64> {
    (1..=bound).find(|&k| a.term(k) != b.term(k))
}

/// Least colliding pair `(i, j)`, ordered by `j`, among the first `horizon` terms.
pub fn first_collision(t: &SequenceDescriptor, horizon: u64) -> Option<(u64, u64)> {
    let mut seen: BTreeMap<FanPoint, u64> = BTreeMap::new();
    for k in 1..=horizon {
        let x = t.term(k);
        if let Some(&i) = seen.get(&x) {
            return Some((i, k));
        }
        seen.insert(x, k);
    }
    None
}

/// Whether `f` differs from `f(P)` at some node on spoke `n` deeper than [`DEEP`].
pub fn spoke_deviates_deep(f: &FunctionDescriptor, n: u64) -> bool {
    let v0 = f.eval(&FanPoint::Apex);
    (DEEP + 1..=TRUNC_DEPTH).any(|d| f.eval(&FanPoint::at(n, d)) != v0)
}
