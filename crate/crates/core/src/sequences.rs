//! Sequences in the fan given by a finite prefix followed by a round-robin
//! interleaving of channels.
//!
//! With prefix length `p` and `c` channels, term `p + 1 + i + c*j` is the
//! `j`-th emission of channel `i`. All terms are computed in closed form.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::arith::{first_index_at_least, lcm, progression_meet};
use crate::fan::{excluding_neighborhood, FanPoint, NeighborhoodSpec};
use crate::sets::{DefinableSet, SetError, SpokeComponent};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SequenceError {
    #[error("a sequence needs at least one channel")]
    NoChannels,
    #[error("spoke, depth and run indices start at 1")]
    ZeroIndex,
    #[error("run stride must be at least 1")]
    ZeroStride,
    #[error("skipped depth {0} is not on the run")]
    SkipOffRun(u64),
    #[error("term indices start at 1")]
    ZeroTerm,
    #[error("the set is not in I_P")]
    NotInIp,
    #[error("index map is not strictly increasing at k = {0}")]
    NotStrictlyIncreasing(u64),
    #[error("a channel must carry exactly one of \"run\", \"constApex\" or \"constNode\"")]
    AmbiguousChannel,
    #[error(transparent)]
    Set(#[from] SetError),
}

/// One round-robin source of terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Channel {
    /// `x(spoke, start), x(spoke, start + stride), ...` omitting `skip`.
    SpokeRun { spoke: u64, start: u64, stride: u64, skip: BTreeSet<u64> },
    ConstApex,
    ConstNode { spoke: u64, depth: u64 },
}

impl Channel {
    pub fn run(spoke: u64, start: u64, stride: u64) -> Self {
        Channel::SpokeRun { spoke, start, stride, skip: BTreeSet::new() }
    }

    fn validate(&self) -> Result<(), SequenceError> {
        match self {
            Channel::SpokeRun { spoke, start, stride, skip } => {
                if *spoke == 0 || *start == 0 {
                    return Err(SequenceError::ZeroIndex);
                }
                if *stride == 0 {
                    return Err(SequenceError::ZeroStride);
                }
                if let Some(&d) = skip.iter().find(|&&d| d < *start || (d - start) % stride != 0) {
                    return Err(SequenceError::SkipOffRun(d));
                }
                Ok(())
            }
            Channel::ConstApex => Ok(()),
            Channel::ConstNode { spoke, depth } => {
                if *spoke == 0 || *depth == 0 {
                    Err(SequenceError::ZeroIndex)
                } else {
                    Ok(())
                }
            }
        }
    }

    /// Progression index of depth `d` on a run (ignores skips).
    fn progression_index(start: u64, stride: u64, d: u64) -> u64 {
        (d - start) / stride
    }

    /// The `j`-th emission (0-based).
    pub fn emission(&self, j: u64) -> FanPoint {
        match self {
            Channel::SpokeRun { spoke, start, stride, skip } => {
                let mut p = j;
                for &s in skip {
                    if Self::progression_index(*start, *stride, s) <= p {
                        p += 1;
                    } else {
                        break;
                    }
                }
                FanPoint::at(*spoke, start + stride * p)
            }
            Channel::ConstApex => FanPoint::Apex,
            Channel::ConstNode { spoke, depth } => FanPoint::at(*spoke, *depth),
        }
    }

    /// Emission index of `x`, if the channel ever emits it (first one for constants).
    pub fn index_of(&self, x: &FanPoint) -> Option<u64> {
        match (self, x) {
            (Channel::SpokeRun { spoke, start, stride, skip }, FanPoint::Node { spoke: n, depth }) => {
                if n != spoke || depth < start || (depth - start) % stride != 0 || skip.contains(depth) {
                    return None;
                }
                Some(Self::progression_index(*start, *stride, *depth) - skip.range(..depth).count() as u64)
            }
            (Channel::ConstApex, FanPoint::Apex) => Some(0),
            (Channel::ConstNode { spoke, depth }, FanPoint::Node { spoke: n, depth: d }) => {
                (spoke == n && depth == d).then_some(0)
            }
            _ => None,
        }
    }

    /// Number of emissions with depth `< bound` on a run.
    fn emissions_below(start: u64, stride: u64, skip: &BTreeSet<u64>, bound: u64) -> u64 {
        first_index_at_least(start, stride, bound) - skip.range(..bound).count() as u64
    }

    /// The channel with its first `j0` emissions removed.
    fn advanced(&self, j0: u64) -> Channel {
        match self {
            Channel::SpokeRun { spoke, stride, skip, .. } => {
                let Some(d0) = self.emission(j0).depth() else { unreachable!() };
                Channel::SpokeRun {
                    spoke: *spoke,
                    start: d0,
                    stride: *stride,
                    skip: skip.range(d0..).copied().collect(),
                }
            }
            c => c.clone(),
        }
    }

    /// Largest progression index of a skipped depth, plus one.
    fn skip_horizon(&self) -> u64 {
        match self {
            Channel::SpokeRun { start, stride, skip, .. } => {
                skip.iter().next_back().map_or(0, |&s| Self::progression_index(*start, *stride, s) + 1)
            }
            _ => 0,
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RunRepr {
    spoke: u64,
    start: u64,
    stride: u64,
    #[serde(default)]
    skip: BTreeSet<u64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeRepr {
    spoke: u64,
    depth: u64,
}

#[derive(Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
struct ChannelRepr {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    run: Option<RunRepr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    const_apex: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    const_node: Option<NodeRepr>,
}

impl Serialize for Channel {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let r = match self.clone() {
            Channel::SpokeRun { spoke, start, stride, skip } => {
                ChannelRepr { run: Some(RunRepr { spoke, start, stride, skip }), ..Default::default() }
            }
            Channel::ConstApex => ChannelRepr { const_apex: Some(true), ..Default::default() },
            Channel::ConstNode { spoke, depth } => {
                ChannelRepr { const_node: Some(NodeRepr { spoke, depth }), ..Default::default() }
            }
        };
        r.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Channel {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = ChannelRepr::deserialize(d)?;
        let c = match (r.run, r.const_apex, r.const_node) {
            (Some(run), None, None) => {
                Channel::SpokeRun { spoke: run.spoke, start: run.start, stride: run.stride, skip: run.skip }
            }
            (None, Some(true), None) => Channel::ConstApex,
            (None, None, Some(n)) => Channel::ConstNode { spoke: n.spoke, depth: n.depth },
            _ => return Err(serde::de::Error::custom(SequenceError::AmbiguousChannel)),
        };
        c.validate().map_err(serde::de::Error::custom)?;
        Ok(c)
    }
}

/// Prefix plus round-robin channels.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SequenceDescriptor {
    prefix: Vec<FanPoint>,
    channels: Vec<Channel>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SequenceRepr {
    #[serde(default)]
    prefix: Vec<FanPoint>,
    channels: Vec<Channel>,
}

impl<'de> Deserialize<'de> for SequenceDescriptor {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = SequenceRepr::deserialize(d)?;
        SequenceDescriptor::new(r.prefix, r.channels).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", rename_all_fields = "camelCase", tag = "kind")]
pub enum ConvergenceCertificate {
    /// Every channel is a run or the constant apex; [`SequenceDescriptor::absorption_index`]
    /// answers each neighborhood query.
    Absorbing { prefix_len: u64, runs: Vec<u64> },
    /// Channel `channel` emits `point` at every index `first_index + k*index_stride`,
    /// and `neighborhood` excludes `point`.
    Escaping {
        channel: u64,
        point: FanPoint,
        neighborhood: NeighborhoodSpec,
        first_index: u64,
        index_stride: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Convergence {
    pub converges: bool,
    pub certificate: ConvergenceCertificate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", rename_all_fields = "camelCase", tag = "kind")]
pub enum InjectivityCertificate {
    /// Prefix distinct, channels non-constant and pairwise disjoint, prefix outside every channel.
    Structural,
    /// `term(first) = term(second)` with `first < second`; the pair is least by `second`.
    Collision { first: u64, second: u64, point: FanPoint },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Injectivity {
    pub injective: bool,
    pub certificate: InjectivityCertificate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RangeSet {
    pub set: DefinableSet,
    pub contains_apex: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Disagreement {
    /// The sequences agree at every index.
    Equal,
    /// Least index with different terms.
    At(u64),
    AgreeUpTo(u64),
}

pub const DEFAULT_DISAGREEMENT_BOUND: u64 = 10_000;

/// `a(k)` = `initial[k-1]` for `k ≤ initial.len()`, then `slope*k + intercept`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IncreasingIndexMap {
    #[serde(default)]
    pub initial: Vec<u64>,
    pub slope: u64,
    pub intercept: i64,
}

impl IncreasingIndexMap {
    pub fn value(&self, k: u64) -> i128 {
        if k >= 1 && (k as usize) <= self.initial.len() {
            self.initial[k as usize - 1] as i128
        } else {
            self.slope as i128 * k as i128 + self.intercept as i128
        }
    }

    pub fn validate(&self) -> Result<(), SequenceError> {
        let len = self.initial.len() as u64;
        if self.value(1) < 1 {
            return Err(SequenceError::NotStrictlyIncreasing(1));
        }
        if self.slope == 0 {
            return Err(SequenceError::NotStrictlyIncreasing(len + 2));
        }
        for k in 1..=len + 1 {
            if self.value(k + 1) <= self.value(k) {
                return Err(SequenceError::NotStrictlyIncreasing(k + 1));
            }
        }
        Ok(())
    }
}

impl SequenceDescriptor {
    pub fn new(prefix: Vec<FanPoint>, channels: Vec<Channel>) -> Result<Self, SequenceError> {
        if channels.is_empty() {
            return Err(SequenceError::NoChannels);
        }
        for c in &channels {
            c.validate()?;
        }
        if prefix.iter().any(|p| matches!(p, FanPoint::Node { spoke: 0, .. } | FanPoint::Node { depth: 0, .. })) {
            return Err(SequenceError::ZeroIndex);
        }
        Ok(SequenceDescriptor { prefix, channels })
    }

    /// `T_n(k) = x(n, k)`.
    pub fn canonical(n: u64) -> Self {
        SequenceDescriptor { prefix: Vec::new(), channels: vec![Channel::run(n, 1, 1)] }
    }

    pub fn constant(x: FanPoint) -> Self {
        let c = match x {
            FanPoint::Apex => Channel::ConstApex,
            FanPoint::Node { spoke, depth } => Channel::ConstNode { spoke, depth },
        };
        SequenceDescriptor { prefix: Vec::new(), channels: vec![c] }
    }

    pub fn prefix(&self) -> &[FanPoint] {
        &self.prefix
    }

    pub fn channels(&self) -> &[Channel] {
        &self.channels
    }

    pub fn prefix_len(&self) -> u64 {
        self.prefix.len() as u64
    }

    pub fn channel_count(&self) -> u64 {
        self.channels.len() as u64
    }

    /// Term index of emission `j` of channel `i`.
    pub fn index_of_emission(&self, i: u64, j: u64) -> u64 {
        self.prefix_len() + 1 + i + self.channel_count() * j
    }

    pub fn term(&self, k: u64) -> FanPoint {
        assert!(k >= 1, "term indices start at 1");
        let plen = self.prefix_len();
        if k <= plen {
            return self.prefix[k as usize - 1];
        }
        let i = k - plen - 1;
        let c = self.channel_count();
        self.channels[(i % c) as usize].emission(i / c)
    }

    pub fn checked_term(&self, k: u64) -> Result<FanPoint, SequenceError> {
        if k == 0 {
            Err(SequenceError::ZeroTerm)
        } else {
            Ok(self.term(k))
        }
    }

    pub fn terms(&self, range: std::ops::RangeInclusive<u64>) -> impl Iterator<Item = FanPoint> + '_ {
        range.map(|k| self.term(k))
    }

    pub fn converges_to_apex(&self) -> Convergence {
        let c = self.channel_count();
        for (i, ch) in self.channels.iter().enumerate() {
            if let Channel::ConstNode { spoke, depth } = *ch {
                let point = FanPoint::at(spoke, depth);
                return Convergence {
                    converges: false,
                    certificate: ConvergenceCertificate::Escaping {
                        channel: i as u64,
                        point,
                        neighborhood: excluding_neighborhood(&point).expect("node"),
                        first_index: self.index_of_emission(i as u64, 0),
                        index_stride: c,
                    },
                };
            }
        }
        Convergence {
            converges: true,
            certificate: ConvergenceCertificate::Absorbing {
                prefix_len: self.prefix_len(),
                runs: self
                    .channels
                    .iter()
                    .enumerate()
                    .filter(|(_, ch)| matches!(ch, Channel::SpokeRun { .. }))
                    .map(|(i, _)| i as u64)
                    .collect(),
            },
        }
    }

    /// Least `N` with `term(k) ∈ u` for every `k ≥ N`, or `None` when some
    /// channel stays outside `u` forever.
    pub fn absorption_index(&self, u: &NeighborhoodSpec) -> Option<u64> {
        let mut last_bad = 0u64;
        for (k, x) in self.prefix.iter().enumerate() {
            if !u.contains(x) {
                last_bad = k as u64 + 1;
            }
        }
        for (i, ch) in self.channels.iter().enumerate() {
            match ch {
                Channel::SpokeRun { spoke, start, stride, skip } => {
                    let bad = Channel::emissions_below(*start, *stride, skip, u.threshold(*spoke));
                    if bad > 0 {
                        last_bad = last_bad.max(self.index_of_emission(i as u64, bad - 1));
                    }
                }
                Channel::ConstApex => {}
                Channel::ConstNode { spoke, depth } => {
                    if !u.contains(&FanPoint::at(*spoke, *depth)) {
                        return None;
                    }
                }
            }
        }
        Some(last_bad + 1)
    }

    pub fn is_injective(&self) -> Injectivity {
        match self.least_collision() {
            None => Injectivity { injective: true, certificate: InjectivityCertificate::Structural },
            Some((first, second)) => Injectivity {
                injective: false,
                certificate: InjectivityCertificate::Collision { first, second, point: self.term(first) },
            },
        }
    }

    fn least_collision(&self) -> Option<(u64, u64)> {
        let mut best: Option<(u64, u64)> = None;
        let mut offer = |a: u64, b: u64| {
            let cand = (a.min(b), a.max(b));
            if best.is_none_or(|(x, y)| (cand.1, cand.0) < (y, x)) {
                best = Some(cand);
            }
        };
        let mut seen: BTreeMap<FanPoint, u64> = BTreeMap::new();
        for (k, x) in self.prefix.iter().enumerate() {
            if let Some(&prev) = seen.get(x) {
                offer(prev, k as u64 + 1);
            } else {
                seen.insert(*x, k as u64 + 1);
            }
        }
        for (i, ch) in self.channels.iter().enumerate() {
            let i = i as u64;
            for (x, &k) in &seen {
                if let Some(j) = ch.index_of(x) {
                    offer(k, self.index_of_emission(i, j));
                }
            }
            if !matches!(ch, Channel::SpokeRun { .. }) {
                offer(self.index_of_emission(i, 0), self.index_of_emission(i, 1));
            }
        }
        for (i, a) in self.channels.iter().enumerate() {
            for (i2, b) in self.channels.iter().enumerate().skip(i + 1) {
                if let Some((ja, jb)) = first_common_emission(a, b) {
                    offer(self.index_of_emission(i as u64, ja), self.index_of_emission(i2 as u64, jb));
                }
            }
        }
        best
    }

    /// `S` with `S_k = p_k` for `k ≤ |p|` and `S_k = T_k` afterwards, plus the
    /// agreement index `N = |p| + 1`.
    pub fn modify_prefix(&self, p: &[FanPoint]) -> (SequenceDescriptor, u64) {
        let plen = self.prefix.len();
        let n = p.len() as u64 + 1;
        if p.len() <= plen {
            let mut prefix = p.to_vec();
            prefix.extend_from_slice(&self.prefix[p.len()..]);
            return (SequenceDescriptor { prefix, channels: self.channels.clone() }, n);
        }
        let c = self.channels.len();
        let extra = (p.len() - plen).div_ceil(c);
        let k = plen + extra * c;
        let mut prefix = p.to_vec();
        prefix.extend(self.terms(p.len() as u64 + 1..=k as u64));
        let channels = self.channels.iter().map(|ch| ch.advanced(extra as u64)).collect();
        (SequenceDescriptor { prefix, channels }, n)
    }

    /// Exact range, with the apex reported separately.
    pub fn range_set(&self) -> RangeSet {
        let mut comps = Vec::new();
        let mut contains_apex = false;
        let mut add_point = |x: &FanPoint, comps: &mut Vec<SpokeComponent>| match *x {
            FanPoint::Apex => contains_apex = true,
            FanPoint::Node { spoke, depth } => {
                comps.push(SpokeComponent::FiniteChunk { spoke, depths: [depth].into_iter().collect() })
            }
        };
        for x in &self.prefix {
            add_point(x, &mut comps);
        }
        for ch in &self.channels {
            match ch {
                Channel::SpokeRun { spoke, start, stride, skip } => comps.push(SpokeComponent::StridedTail {
                    spoke: *spoke,
                    start: *start,
                    stride: *stride,
                    excluded: skip.clone(),
                }),
                Channel::ConstApex => add_point(&FanPoint::Apex, &mut comps),
                Channel::ConstNode { spoke, depth } => add_point(&FanPoint::at(*spoke, *depth), &mut comps),
            }
        }
        RangeSet { set: DefinableSet::new(comps, vec![]).expect("range components are valid"), contains_apex }
    }

    /// Index beyond which, on each residue class of indices modulo the channel
    /// count, every term is an affine function of the index.
    fn affine_from(&self) -> u64 {
        let h = self.channels.iter().map(Channel::skip_horizon).max().unwrap_or(0);
        self.prefix_len() + self.channel_count() * (h + 1)
    }

    /// Index `H` such that agreement on `1..=H` implies agreement everywhere.
    pub fn equality_horizon(&self, other: &SequenceDescriptor) -> u64 {
        let l = lcm(self.channel_count(), other.channel_count()).expect("small channel counts");
        self.affine_from().max(other.affine_from()) + 2 * l
    }

    pub fn first_disagreement(&self, other: &SequenceDescriptor, bound: u64) -> Disagreement {
        if self == other {
            return Disagreement::Equal;
        }
        let horizon = self.equality_horizon(other);
        let limit = bound.min(horizon);
        if let Some(k) = (1..=limit).find(|&k| self.term(k) != other.term(k)) {
            return Disagreement::At(k);
        }
        if horizon <= bound {
            Disagreement::Equal
        } else {
            Disagreement::AgreeUpTo(bound)
        }
    }

    /// Exact equality of the two sequences as maps `k ↦ term(k)`.
    pub fn same_sequence(&self, other: &SequenceDescriptor) -> bool {
        self.first_disagreement(other, self.equality_horizon(other)) == Disagreement::Equal
    }

    /// `Some(n)` when this is the canonical `T_n`.
    pub fn canonical_index(&self) -> Option<u64> {
        let n = self.term(1).spoke()?;
        self.same_sequence(&SequenceDescriptor::canonical(n)).then_some(n)
    }

    /// Injective enumeration `T^M` of a set in `I_P`.
    pub fn enumerate_set(m: &DefinableSet) -> Result<SequenceDescriptor, SequenceError> {
        if !m.in_ip().in_ip {
            return Err(SequenceError::NotInIp);
        }
        let mut prefix = Vec::new();
        let mut channels = Vec::new();
        for (&n, part) in m.spoke_parts() {
            let form = part.periodic_form()?;
            prefix.extend(form.below.iter().map(|&d| FanPoint::at(n, d)));
            channels.extend(form.residues.iter().map(|&r| Channel::run(n, form.base + r, form.period)));
        }
        SequenceDescriptor::new(prefix, channels)
    }

    /// `T^a` with `T^a(k) = x(1, a(k))`.
    pub fn build_spoke_subsequence(a: &IncreasingIndexMap) -> Result<SequenceDescriptor, SequenceError> {
        a.validate()?;
        let next = a.value(a.initial.len() as u64 + 1) as u64;
        SequenceDescriptor::new(
            a.initial.iter().map(|&d| FanPoint::at(1, d)).collect(),
            vec![Channel::run(1, next, a.slope)],
        )
    }
}

/// Least emission indices `(ja, jb)` at which two channels emit the same point.
fn first_common_emission(a: &Channel, b: &Channel) -> Option<(u64, u64)> {
    match (a, b) {
        (
            Channel::SpokeRun { spoke: n1, start: s1, stride: t1, skip: k1 },
            Channel::SpokeRun { spoke: n2, start: s2, stride: t2, skip: k2 },
        ) => {
            if n1 != n2 {
                return None;
            }
            let (mut d, l) = progression_meet(*s1, *t1, *s2, *t2)?;
            // skips are finite, so some common depth survives within |k1| + |k2| + 1 steps
            for _ in 0..=k1.len() + k2.len() {
                if !k1.contains(&d) && !k2.contains(&d) {
                    let x = FanPoint::at(*n1, d);
                    return Some((a.index_of(&x)?, b.index_of(&x)?));
                }
                d += l;
            }
            None
        }
        (Channel::SpokeRun { .. }, c) => {
            let x = c.emission(0);
            Some((a.index_of(&x)?, 0))
        }
        (c, Channel::SpokeRun { .. }) => {
            let x = c.emission(0);
            Some((0, b.index_of(&x)?))
        }
        (x, y) => (x.emission(0) == y.emission(0)).then_some((0, 0)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn seq(prefix: Vec<FanPoint>, channels: Vec<Channel>) -> SequenceDescriptor {
        SequenceDescriptor::new(prefix, channels).unwrap()
    }

    #[test]
    fn term_examples() {
        assert_eq!(SequenceDescriptor::canonical(1).term(3), FanPoint::at(1, 3));
        let t = seq(vec![FanPoint::at(2, 1)], vec![Channel::run(1, 1, 1)]);
        assert_eq!(t.term(1), FanPoint::at(2, 1));
        let t = seq(vec![], vec![Channel::run(1, 1, 1), Channel::run(2, 1, 1)]);
        let unfolded: Vec<FanPoint> = t.terms(1..=4).collect();
        assert_eq!(unfolded, vec![FanPoint::at(1, 1), FanPoint::at(2, 1), FanPoint::at(1, 2), FanPoint::at(2, 2)]);
    }

    #[test]
    fn skipped_runs() {
        let ch = Channel::SpokeRun { spoke: 1, start: 2, stride: 3, skip: [5, 11].into_iter().collect() };
        let got: Vec<u64> = (0..5).map(|j| ch.emission(j).depth().unwrap()).collect();
        assert_eq!(got, vec![2, 8, 14, 17, 20]);
        for j in 0..20 {
            assert_eq!(ch.index_of(&ch.emission(j)), Some(j));
        }
        assert_eq!(ch.index_of(&FanPoint::at(1, 5)), None);
    }

    #[test]
    fn convergence_examples() {
        assert!(SequenceDescriptor::canonical(4).converges_to_apex().converges);
        let t = SequenceDescriptor::constant(FanPoint::at(1, 1));
        let c = t.converges_to_apex();
        assert!(!c.converges);
        let ConvergenceCertificate::Escaping { neighborhood, first_index, index_stride, .. } = c.certificate else {
            panic!()
        };
        assert_eq!(neighborhood, NeighborhoodSpec::new(1, [(1, 2)].into_iter().collect(), None).unwrap());
        for k in (first_index..200).step_by(index_stride as usize) {
            assert!(!neighborhood.contains(&t.term(k)));
        }
        let t = seq(vec![], vec![Channel::run(1, 1, 1), Channel::run(2, 5, 3)]);
        assert!(t.converges_to_apex().converges);
        let u = NeighborhoodSpec::uniform(10);
        let n = t.absorption_index(&u).unwrap();
        assert!((n..n + 500).all(|k| u.contains(&t.term(k))));
        assert!(!u.contains(&t.term(n - 1)));
    }

    #[test]
    fn injectivity_examples() {
        assert!(SequenceDescriptor::canonical(3).is_injective().injective);
        let t = seq(vec![FanPoint::at(1, 1)], vec![Channel::run(1, 1, 1)]);
        assert_eq!(
            t.is_injective().certificate,
            InjectivityCertificate::Collision { first: 1, second: 2, point: FanPoint::at(1, 1) }
        );
        let t = seq(vec![], vec![Channel::run(1, 1, 2), Channel::run(1, 1, 3)]);
        let r = t.is_injective();
        assert!(!r.injective);
        let InjectivityCertificate::Collision { first, second, .. } = r.certificate else { panic!() };
        assert_eq!(t.term(first), t.term(second));
        let brute = (1..=100u64).any(|i| (i + 1..=100).any(|j| t.term(i) == t.term(j)));
        assert!(brute);
        assert!(!SequenceDescriptor::constant(FanPoint::Apex).is_injective().injective);
    }

    #[test]
    fn modify_prefix_examples() {
        let t = SequenceDescriptor::canonical(1);
        let (s, n) = t.modify_prefix(&[FanPoint::at(2, 7)]);
        assert_eq!(n, 2);
        assert_eq!(s.term(1), FanPoint::at(2, 7));
        assert!((2..300).all(|k| s.term(k) == FanPoint::at(1, k)));
        assert!(s.converges_to_apex().converges);

        let t = seq(vec![FanPoint::at(3, 1), FanPoint::Apex], vec![Channel::run(1, 2, 1)]);
        assert_eq!(t.modify_prefix(t.prefix()).0, t);

        let t = SequenceDescriptor::constant(FanPoint::at(3, 3));
        let (s, _) = t.modify_prefix(&[FanPoint::Apex, FanPoint::at(1, 9)]);
        assert!(!s.converges_to_apex().converges);
    }

    #[test]
    fn range_examples() {
        let r = SequenceDescriptor::canonical(3).range_set();
        assert_eq!(r.set, DefinableSet::spoke(3));
        assert!(!r.contains_apex);
        let t = seq(vec![FanPoint::at(2, 1)], vec![Channel::run(1, 2, 2)]);
        let expected = DefinableSet::finite(2, [1]).unwrap().union(&DefinableSet::tail(1, 2, 2, []).unwrap());
        assert_eq!(t.range_set().set, expected);
        let brute: BTreeSet<FanPoint> = t.terms(1..=500).collect();
        for x in &brute {
            assert!(expected.member(x));
        }
        let r = SequenceDescriptor::constant(FanPoint::Apex).range_set();
        assert!(r.contains_apex && r.set == DefinableSet::empty());
    }

    #[test]
    fn enumerate_examples() {
        assert_eq!(SequenceDescriptor::enumerate_set(&DefinableSet::spoke(2)).unwrap(), SequenceDescriptor::canonical(2));
        let m = DefinableSet::tail(1, 3, 1, [5]).unwrap().union(&DefinableSet::finite(1, [1]).unwrap());
        let t = SequenceDescriptor::enumerate_set(&m).unwrap();
        assert_eq!(t.prefix(), &[FanPoint::at(1, 1), FanPoint::at(1, 3), FanPoint::at(1, 4)]);
        assert_eq!(t.channels(), &[Channel::run(1, 6, 1)]);
        let diag = DefinableSet::from_rows(vec![crate::sets::RowComponent::new(1, 1, 0).unwrap()]);
        assert_eq!(SequenceDescriptor::enumerate_set(&diag), Err(SequenceError::NotInIp));
    }

    #[test]
    fn disagreement_examples() {
        let a = seq(vec![FanPoint::at(2, 2)], vec![Channel::run(1, 1, 1), Channel::ConstApex]);
        assert_eq!(a.first_disagreement(&a, 100), Disagreement::Equal);
        let mut terms: Vec<FanPoint> = a.terms(1..=5).collect();
        terms[4] = FanPoint::at(9, 9);
        let (b, _) = a.modify_prefix(&terms);
        assert_eq!(a.first_disagreement(&b, DEFAULT_DISAGREEMENT_BOUND), Disagreement::At(5));
        // structurally different but equal sequences
        let c = seq(vec![FanPoint::at(1, 1)], vec![Channel::run(1, 2, 1)]);
        assert_eq!(SequenceDescriptor::canonical(1).first_disagreement(&c, 100), Disagreement::Equal);
    }

    #[test]
    fn spoke_subsequence_examples() {
        let id = IncreasingIndexMap { initial: vec![], slope: 1, intercept: 0 };
        assert_eq!(SequenceDescriptor::build_spoke_subsequence(&id).unwrap(), SequenceDescriptor::canonical(1));
        let twice = IncreasingIndexMap { initial: vec![], slope: 2, intercept: 0 };
        let t = SequenceDescriptor::build_spoke_subsequence(&twice).unwrap();
        assert_eq!(t.channels(), &[Channel::run(1, 2, 2)]);
        assert!(t.converges_to_apex().converges);
        let a = IncreasingIndexMap { initial: vec![1, 2], slope: 1, intercept: 5 };
        let b = IncreasingIndexMap { initial: vec![1, 2], slope: 1, intercept: 6 };
        let ta = SequenceDescriptor::build_spoke_subsequence(&a).unwrap();
        let tb = SequenceDescriptor::build_spoke_subsequence(&b).unwrap();
        assert_eq!(ta.first_disagreement(&tb, DEFAULT_DISAGREEMENT_BOUND), Disagreement::At(3));
        let bad = IncreasingIndexMap { initial: vec![3, 2], slope: 1, intercept: 5 };
        assert_eq!(SequenceDescriptor::build_spoke_subsequence(&bad), Err(SequenceError::NotStrictlyIncreasing(2)));
        let bad = IncreasingIndexMap { initial: vec![1, 9], slope: 1, intercept: 0 };
        assert!(SequenceDescriptor::build_spoke_subsequence(&bad).is_err());
    }

    #[test]
    fn json_shape() {
        let t = seq(
            vec![FanPoint::Apex, FanPoint::at(1, 2)],
            vec![
                Channel::SpokeRun { spoke: 1, start: 3, stride: 2, skip: [5].into_iter().collect() },
                Channel::ConstApex,
                Channel::ConstNode { spoke: 2, depth: 4 },
            ],
        );
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(
            s,
            r#"{"prefix":[{"apex":true},{"spoke":1,"depth":2}],"channels":[{"run":{"spoke":1,"start":3,"stride":2,"skip":[5]}},{"constApex":true},{"constNode":{"spoke":2,"depth":4}}]}"#
        );
        assert_eq!(serde_json::from_str::<SequenceDescriptor>(&s).unwrap(), t);
        assert!(serde_json::from_str::<SequenceDescriptor>(r#"{"prefix":[],"channels":[]}"#).is_err());
        assert!(serde_json::from_str::<SequenceDescriptor>(r#"{"channels":[{"run":{"spoke":1,"start":1,"stride":2,"skip":[2]}}]}"#).is_err());
    }

    fn arb_channel() -> impl Strategy<Value = Channel> {
        prop_oneof![
            6 => (1u64..4, 1u64..10, 1u64..4, proptest::collection::btree_set(0u64..6, 0..3)).prop_map(|(n, s, t, k)| {
                Channel::SpokeRun { spoke: n, start: s, stride: t, skip: k.into_iter().map(|i| s + i * t).collect() }
            }),
            1 => Just(Channel::ConstApex),
            1 => (1u64..4, 1u64..10).prop_map(|(spoke, depth)| Channel::ConstNode { spoke, depth }),
        ]
    }

    fn arb_point() -> impl Strategy<Value = FanPoint> {
        prop_oneof![1 => Just(FanPoint::Apex), 6 => (1u64..4, 1u64..12).prop_map(|(n, d)| FanPoint::at(n, d))]
    }

    fn arb_seq() -> impl Strategy<Value = SequenceDescriptor> {
        (proptest::collection::vec(arb_point(), 0..5), proptest::collection::vec(arb_channel(), 1..4))
            .prop_map(|(p, c)| SequenceDescriptor::new(p, c).unwrap())
    }

    proptest! {
        #[test]
        fn injectivity_matches_brute_force(t in arb_seq()) {
            let r = t.is_injective();
            // runs are strictly increasing, so collisions show up early
            let brute = (1..=200u64).flat_map(|j| (1..j).map(move |i| (i, j))).find(|&(i, j)| t.term(i) == t.term(j));
            match r.certificate {
                InjectivityCertificate::Structural => prop_assert!(brute.is_none()),
                InjectivityCertificate::Collision { first, second, .. } => {
                    prop_assert_eq!(t.term(first), t.term(second));
                    if let Some((i, j)) = brute {
                        prop_assert_eq!((first, second), (i, j));
                    }
                }
            }
        }

        #[test]
        fn absorption_index_is_exact(t in arb_seq(), d in 1u64..20, o in proptest::collection::btree_map(1u64..4, 1u64..30, 0..3)) {
            let u = NeighborhoodSpec::new(d, o, None).unwrap();
            match t.absorption_index(&u) {
                Some(n) => {
                    prop_assert!((n..n + 500).all(|k| u.contains(&t.term(k))));
                    if n > 1 {
                        prop_assert!(!u.contains(&t.term(n - 1)));
                    }
                }
                None => prop_assert!(!t.converges_to_apex().converges),
            }
        }

        #[test]
        fn modify_prefix_agrees_after_n(t in arb_seq(), p in proptest::collection::vec(arb_point(), 0..9)) {
            let (s, n) = t.modify_prefix(&p);
            for (k, x) in p.iter().enumerate() {
                prop_assert_eq!(s.term(k as u64 + 1), *x);
            }
            prop_assert!((n..n + 300).all(|k| s.term(k) == t.term(k)));
            prop_assert_eq!(s.converges_to_apex().converges, t.converges_to_apex().converges);
        }

        #[test]
        fn range_set_matches_terms(t in arb_seq()) {
            let r = t.range_set();
            let seen: BTreeSet<FanPoint> = t.terms(1..=400).collect();
            prop_assert_eq!(r.contains_apex, seen.contains(&FanPoint::Apex));
            for x in seen.iter().filter(|x| !x.is_apex()) {
                prop_assert!(r.set.member(x));
            }
            for n in 1..4 {
                for d in 1..40 {
                    let x = FanPoint::at(n, d);
                    if r.set.member(&x) {
                        prop_assert!(seen.contains(&x), "{} missing", x);
                    }
                }
            }
        }

        #[test]
        fn disagreement_matches_brute_force(a in arb_seq(), b in arb_seq()) {
            let brute = (1..=2000u64).find(|&k| a.term(k) != b.term(k));
            match a.first_disagreement(&b, 2000) {
                Disagreement::Equal => prop_assert!(brute.is_none()),
                Disagreement::At(k) => prop_assert_eq!(Some(k), brute),
                Disagreement::AgreeUpTo(_) => prop_assert!(brute.is_none()),
            }
        }
    }
}
