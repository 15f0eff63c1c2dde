//! Definable subsets of `S_ω ∖ {P}`.
//!
//! A [`DefinableSet`] is a finite union of
//!
//! * finite chunks of depths on a spoke,
//! * strided tails `{start + k*stride} ∖ excluded` on a spoke, and
//! * affine rows `{x(n, slope*n + intercept) : n ≥ from}` meeting every spoke
//!   from `from` on in exactly one point.
//!
//! Components on the same spoke are merged into one [`SpokePart`] at
//! construction. Membership, cardinality, intersection cardinality and `I_P`
//! membership are all decided exactly; tail/tail intersections go through the
//! Chinese-remainder meet of the two progressions.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::arith::{lcm, progression_meet};
use crate::fan::{FanPoint, NeighborhoodSpec, Ramp};

/// Largest common period materialized by [`SpokePart::periodic_form`].
pub const MAX_PERIOD: u64 = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SetError {
    #[error("spoke and depth indices start at 1")]
    ZeroIndex,
    #[error("tail stride must be at least 1")]
    ZeroStride,
    #[error("finite chunk on spoke {0} is empty")]
    EmptyChunk(u64),
    #[error("excluded depth {depth} is not on the progression {start} + k*{stride}")]
    ExclusionOffProgression { depth: u64, start: u64, stride: u64 },
    #[error("row from spoke {from} with slope {slope} and intercept {intercept} reaches depth < 1")]
    RowBelowDepthOne { from: u64, slope: u64, intercept: i64 },
    #[error("spoke component must carry exactly one of \"tail\" or \"finite\"")]
    AmbiguousComponent,
    #[error("the apex is never a member of a definable set")]
    ApexMember,
    #[error("common period {0} exceeds the supported bound")]
    PeriodTooLarge(u64),
}

/// `{start + k*stride : k ≥ 0} ∖ excluded`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tail {
    start: u64,
    stride: u64,
    excluded: BTreeSet<u64>,
}

impl Tail {
    pub fn new(start: u64, stride: u64, excluded: BTreeSet<u64>) -> Result<Self, SetError> {
        if start == 0 {
            return Err(SetError::ZeroIndex);
        }
        if stride == 0 {
            return Err(SetError::ZeroStride);
        }
        for &e in &excluded {
            if e < start || !(e - start).is_multiple_of(stride) {
                return Err(SetError::ExclusionOffProgression { depth: e, start, stride });
            }
        }
        let mut t = Tail { start, stride, excluded };
        t.normalize();
        Ok(t)
    }

    pub fn full(start: u64, stride: u64) -> Self {
        Tail::new(start, stride, BTreeSet::new()).expect("valid tail")
    }

    fn normalize(&mut self) {
        while self.excluded.remove(&self.start) {
            self.start += self.stride;
        }
    }

    pub fn start(&self) -> u64 {
        self.start
    }

    pub fn stride(&self) -> u64 {
        self.stride
    }

    pub fn excluded(&self) -> &BTreeSet<u64> {
        &self.excluded
    }

    pub fn on_progression(&self, d: u64) -> bool {
        d >= self.start && (d - self.start).is_multiple_of(self.stride)
    }

    pub fn contains(&self, d: u64) -> bool {
        self.on_progression(d) && !self.excluded.contains(&d)
    }

    /// Whether this tail's progression contains the other's progression.
    fn progression_covers(&self, other: &Tail) -> bool {
        other.stride.is_multiple_of(self.stride) && self.on_progression(other.start)
    }

    /// First depth from which membership is decided by the residue alone.
    pub fn settled_from(&self) -> u64 {
        self.excluded.iter().next_back().map_or(self.start, |&e| e + 1).max(self.start)
    }
}

/// Exact union of every component on one spoke.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SpokePart {
    finite: BTreeSet<u64>,
    tails: Vec<Tail>,
}

/// `members = below ∪ {base + r + k*period : r ∈ residues, k ≥ 0}` with
/// every element of `below` smaller than `base`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicForm {
    pub below: Vec<u64>,
    pub base: u64,
    pub period: u64,
    pub residues: Vec<u64>,
}

impl SpokePart {
    pub fn finite(&self) -> &BTreeSet<u64> {
        &self.finite
    }

    pub fn tails(&self) -> &[Tail] {
        &self.tails
    }

    pub fn is_empty(&self) -> bool {
        self.finite.is_empty() && self.tails.is_empty()
    }

    pub fn is_infinite(&self) -> bool {
        !self.tails.is_empty()
    }

    pub fn contains(&self, d: u64) -> bool {
        self.finite.contains(&d) || self.tails.iter().any(|t| t.contains(d))
    }

    fn absorb(&mut self, other: SpokePart) {
        self.finite.extend(other.finite);
        self.tails.extend(other.tails);
        self.normalize();
    }

    fn normalize(&mut self) {
        loop {
            let before = self.clone();
            for t in &mut self.tails {
                t.normalize();
            }
            self.tails.sort();
            // identical progressions: the union excludes only common exclusions
            let mut merged: Vec<Tail> = Vec::with_capacity(self.tails.len());
            for t in std::mem::take(&mut self.tails) {
                match merged.last_mut() {
                    Some(last) if last.start == t.start && last.stride == t.stride => {
                        last.excluded = last.excluded.intersection(&t.excluded).copied().collect();
                    }
                    _ => merged.push(t),
                }
            }
            self.tails = merged;
            // a progression inside another one is absorbed into it
            'outer: loop {
                for i in 0..self.tails.len() {
                    for j in 0..self.tails.len() {
                        if i != j && self.tails[j].progression_covers(&self.tails[i]) {
                            let small = self.tails.remove(i);
                            let j = if j > i { j - 1 } else { j };
                            let big = &mut self.tails[j];
                            big.excluded.retain(|&e| !small.contains(e));
                            continue 'outer;
                        }
                    }
                }
                break;
            }
            let finite = std::mem::take(&mut self.finite);
            for d in finite {
                if self.tails.iter().any(|t| t.contains(d)) {
                    continue;
                }
                if let Some(t) = self.tails.iter_mut().find(|t| t.excluded.contains(&d)) {
                    t.excluded.remove(&d);
                    continue;
                }
                if let Some(t) = self.tails.iter_mut().find(|t| d + t.stride == t.start) {
                    t.start = d;
                    continue;
                }
                self.finite.insert(d);
            }
            if *self == before {
                break;
            }
        }
    }

    /// First depth from which membership depends only on the residue of the
    /// depth modulo the tail strides.
    pub fn settled_from(&self) -> u64 {
        let tails = self.tails.iter().map(Tail::settled_from).max().unwrap_or(1);
        let finite = self.finite.iter().next_back().map_or(1, |&d| d + 1);
        tails.max(finite).max(1)
    }

    pub fn common_period(&self) -> Result<u64, SetError> {
        let mut p = 1u64;
        for t in &self.tails {
            p = lcm(p, t.stride).filter(|&l| l <= MAX_PERIOD).ok_or(SetError::PeriodTooLarge(u64::MAX))?;
        }
        Ok(p)
    }

    pub fn periodic_form(&self) -> Result<PeriodicForm, SetError> {
        let base = self.settled_from();
        let period = self.common_period()?;
        let below = (1..base).filter(|&d| self.contains(d)).collect();
        let residues = if self.tails.is_empty() {
            Vec::new()
        } else {
            (0..period).filter(|&r| self.contains(base + r)).collect()
        };
        Ok(PeriodicForm { below, base, period, residues })
    }

    fn components(&self, spoke: u64) -> Vec<SpokeComponent> {
        let mut out = Vec::new();
        if !self.finite.is_empty() {
            out.push(SpokeComponent::FiniteChunk { spoke, depths: self.finite.clone() });
        }
        for t in &self.tails {
            out.push(SpokeComponent::StridedTail {
                spoke,
                start: t.start,
                stride: t.stride,
                excluded: t.excluded.clone(),
            });
        }
        out
    }
}

/// One input component on a spoke.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpokeComponent {
    FiniteChunk { spoke: u64, depths: BTreeSet<u64> },
    StridedTail { spoke: u64, start: u64, stride: u64, excluded: BTreeSet<u64> },
}

impl SpokeComponent {
    pub fn spoke(&self) -> u64 {
        match self {
            SpokeComponent::FiniteChunk { spoke, .. } | SpokeComponent::StridedTail { spoke, .. } => *spoke,
        }
    }

    fn into_part(self) -> Result<(u64, SpokePart), SetError> {
        match self {
            SpokeComponent::FiniteChunk { spoke, depths } => {
                if spoke == 0 || depths.contains(&0) {
                    return Err(SetError::ZeroIndex);
                }
                if depths.is_empty() {
                    return Err(SetError::EmptyChunk(spoke));
                }
                Ok((spoke, SpokePart { finite: depths, tails: Vec::new() }))
            }
            SpokeComponent::StridedTail { spoke, start, stride, excluded } => {
                if spoke == 0 {
                    return Err(SetError::ZeroIndex);
                }
                let t = Tail::new(start, stride, excluded)?;
                Ok((spoke, SpokePart { finite: BTreeSet::new(), tails: vec![t] }))
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TailRepr {
    start: u64,
    stride: u64,
    #[serde(default)]
    excluded: BTreeSet<u64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComponentRepr {
    spoke: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tail: Option<TailRepr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    finite: Option<BTreeSet<u64>>,
}

impl Serialize for SpokeComponent {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.clone() {
            SpokeComponent::FiniteChunk { spoke, depths } => ComponentRepr { spoke, tail: None, finite: Some(depths) },
            SpokeComponent::StridedTail { spoke, start, stride, excluded } => {
                ComponentRepr { spoke, tail: Some(TailRepr { start, stride, excluded }), finite: None }
            }
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SpokeComponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = ComponentRepr::deserialize(d)?;
        match (r.tail, r.finite) {
            (Some(t), None) => Ok(SpokeComponent::StridedTail {
                spoke: r.spoke,
                start: t.start,
                stride: t.stride,
                excluded: t.excluded,
            }),
            (None, Some(depths)) => Ok(SpokeComponent::FiniteChunk { spoke: r.spoke, depths }),
            _ => Err(serde::de::Error::custom(SetError::AmbiguousComponent)),
        }
    }
}

/// `{x(n, slope*n + intercept) : n ≥ from}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RowComponent {
    from: u64,
    slope: u64,
    intercept: i64,
}

impl RowComponent {
    pub fn new(from: u64, slope: u64, intercept: i64) -> Result<Self, SetError> {
        if from == 0 {
            return Err(SetError::ZeroIndex);
        }
        if (slope as i128) * (from as i128) + intercept as i128 <= 0 {
            return Err(SetError::RowBelowDepthOne { from, slope, intercept });
        }
        Ok(RowComponent { from, slope, intercept })
    }

    pub fn from(&self) -> u64 {
        self.from
    }

    pub fn slope(&self) -> u64 {
        self.slope
    }

    pub fn intercept(&self) -> i64 {
        self.intercept
    }

    pub fn depth_at(&self, spoke: u64) -> Option<u64> {
        if spoke < self.from {
            return None;
        }
        let d = self.slope as i128 * spoke as i128 + self.intercept as i128;
        u64::try_from(d).ok()
    }

    /// The `i`-th point of the row (0-based).
    pub fn point(&self, i: u64) -> FanPoint {
        let n = self.from + i;
        FanPoint::at(n, self.depth_at(n).expect("row depth is positive"))
    }

    fn same_line(&self, other: &RowComponent) -> bool {
        self.slope == other.slope && self.intercept == other.intercept
    }

    /// The unique common point of two different lines, if any.
    fn crossing(&self, other: &RowComponent) -> Option<FanPoint> {
        if self.slope == other.slope {
            return None;
        }
        let num = other.intercept as i128 - self.intercept as i128;
        let den = self.slope as i128 - other.slope as i128;
        if num % den != 0 {
            return None;
        }
        let n = num / den;
        if n < self.from.max(other.from) as i128 {
            return None;
        }
        let n = u64::try_from(n).ok()?;
        Some(FanPoint::at(n, self.depth_at(n)?))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Cardinality {
    Finite(u64),
    Infinite,
}

impl Cardinality {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Cardinality::Infinite)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", rename_all_fields = "camelCase", tag = "kind")]
pub enum IntersectionCertificate {
    /// Every depth `first + k*modulus` on `spoke` outside `excluded` is common.
    SpokeResidue { spoke: u64, first: u64, modulus: u64, excluded: Vec<u64> },
    /// Both sets contain this row.
    SharedRow { row: RowComponent },
    /// The complete list of common points.
    Points { points: Vec<FanPoint> },
}

impl IntersectionCertificate {
    /// Lower bound on the number of certified common points with depth `≤ depth_bound`.
    pub fn count_lower_bound(&self, depth_bound: u64) -> u64 {
        match self {
            IntersectionCertificate::SpokeResidue { first, modulus, excluded, .. } => {
                if depth_bound < *first {
                    0
                } else {
                    ((depth_bound - first) / modulus + 1).saturating_sub(excluded.len() as u64)
                }
            }
            IntersectionCertificate::SharedRow { .. } => u64::MAX,
            IntersectionCertificate::Points { points } => points.len() as u64,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionClass {
    pub class: Cardinality,
    pub certificate: IntersectionCertificate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", rename_all_fields = "camelCase", tag = "kind")]
pub enum InIpCertificate {
    /// `M` is finite.
    Finite { count: u64 },
    /// Every point of `row` (a subset of `M`) lies outside `neighborhood`.
    Escape { neighborhood: NeighborhoodSpec, row: RowComponent },
    /// `M` is infinite and lies in these finitely many spokes.
    FiniteSupport { spokes: Vec<u64>, infinite_on: Vec<u64> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct InIp {
    pub in_ip: bool,
    pub certificate: InIpCertificate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum SpokeSupport {
    Spokes(Vec<u64>),
    UnboundedRows,
}

/// See the module docs.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct DefinableSet {
    spokes: BTreeMap<u64, SpokePart>,
    rows: Vec<RowComponent>,
}

impl DefinableSet {
    pub fn new(components: Vec<SpokeComponent>, rows: Vec<RowComponent>) -> Result<Self, SetError> {
        let mut set = DefinableSet::default();
        for c in components {
            let (spoke, part) = c.into_part()?;
            set.spokes.entry(spoke).or_default().absorb(part);
        }
        for r in rows {
            RowComponent::new(r.from, r.slope, r.intercept)?;
            set.rows.push(r);
        }
        set.normalize_rows();
        Ok(set)
    }

    pub fn empty() -> Self {
        DefinableSet::default()
    }

    /// The full spoke `B_n`.
    pub fn spoke(n: u64) -> Self {
        DefinableSet::tail(n, 1, 1, []).expect("valid spoke")
    }

    pub fn tail(n: u64, start: u64, stride: u64, excluded: impl IntoIterator<Item = u64>) -> Result<Self, SetError> {
        DefinableSet::new(
            vec![SpokeComponent::StridedTail { spoke: n, start, stride, excluded: excluded.into_iter().collect() }],
            vec![],
        )
    }

    pub fn finite(n: u64, depths: impl IntoIterator<Item = u64>) -> Result<Self, SetError> {
        DefinableSet::new(vec![SpokeComponent::FiniteChunk { spoke: n, depths: depths.into_iter().collect() }], vec![])
    }

    pub fn from_points(points: &[FanPoint]) -> Result<Self, SetError> {
        let mut comps = Vec::new();
        for p in points {
            match *p {
                FanPoint::Apex => return Err(SetError::ApexMember),
                FanPoint::Node { spoke, depth } => {
                    comps.push(SpokeComponent::FiniteChunk { spoke, depths: [depth].into_iter().collect() })
                }
            }
        }
        DefinableSet::new(comps, vec![])
    }

    pub fn from_rows(rows: Vec<RowComponent>) -> Self {
        let mut s = DefinableSet { spokes: BTreeMap::new(), rows };
        s.normalize_rows();
        s
    }

    fn normalize_rows(&mut self) {
        let mut best: BTreeMap<(u64, i64), u64> = BTreeMap::new();
        for r in &self.rows {
            let e = best.entry((r.slope, r.intercept)).or_insert(r.from);
            *e = (*e).min(r.from);
        }
        self.rows = best
            .into_iter()
            .map(|((slope, intercept), from)| RowComponent { from, slope, intercept })
            .collect();
        self.spokes.retain(|_, p| !p.is_empty());
    }

    /// Exact union.
    pub fn union(&self, other: &DefinableSet) -> DefinableSet {
        let mut out = self.clone();
        for (n, part) in &other.spokes {
            out.spokes.entry(*n).or_default().absorb(part.clone());
        }
        out.rows.extend(other.rows.iter().copied());
        out.normalize_rows();
        out
    }

    pub fn spoke_parts(&self) -> &BTreeMap<u64, SpokePart> {
        &self.spokes
    }

    pub fn rows(&self) -> &[RowComponent] {
        &self.rows
    }

    pub fn components(&self) -> Vec<SpokeComponent> {
        self.spokes.iter().flat_map(|(n, p)| p.components(*n)).collect()
    }

    pub fn member(&self, x: &FanPoint) -> bool {
        match *x {
            FanPoint::Apex => false,
            FanPoint::Node { spoke, depth } => {
                self.spokes.get(&spoke).is_some_and(|p| p.contains(depth))
                    || self.rows.iter().any(|r| r.depth_at(spoke) == Some(depth))
            }
        }
    }

    pub fn cardinality_class(&self) -> Cardinality {
        if !self.rows.is_empty() || self.spokes.values().any(SpokePart::is_infinite) {
            Cardinality::Infinite
        } else {
            Cardinality::Finite(self.spokes.values().map(|p| p.finite.len() as u64).sum())
        }
    }

    pub fn intersection_class(&self, other: &DefinableSet) -> IntersectionClass {
        let mut points = BTreeSet::new();
        for (&n, a) in &self.spokes {
            let Some(b) = other.spokes.get(&n) else { continue };
            for ta in &a.tails {
                for tb in &b.tails {
                    if let Some((first, modulus)) = progression_meet(ta.start, ta.stride, tb.start, tb.stride) {
                        let excluded = ta
                            .excluded
                            .union(&tb.excluded)
                            .copied()
                            .filter(|&e| e >= first && (e - first) % modulus == 0)
                            .collect();
                        return IntersectionClass {
                            class: Cardinality::Infinite,
                            certificate: IntersectionCertificate::SpokeResidue { spoke: n, first, modulus, excluded },
                        };
                    }
                }
            }
            points.extend(a.finite.iter().filter(|&&d| b.contains(d)).map(|&d| FanPoint::at(n, d)));
            points.extend(b.finite.iter().filter(|&&d| a.contains(d)).map(|&d| FanPoint::at(n, d)));
        }
        for ra in &self.rows {
            for rb in &other.rows {
                if ra.same_line(rb) {
                    return IntersectionClass {
                        class: Cardinality::Infinite,
                        certificate: IntersectionCertificate::SharedRow {
                            row: RowComponent { from: ra.from.max(rb.from), ..*ra },
                        },
                    };
                }
                points.extend(ra.crossing(rb));
            }
        }
        let row_hits = |rows: &[RowComponent], parts: &BTreeMap<u64, SpokePart>, out: &mut BTreeSet<FanPoint>| {
            for r in rows {
                for (&n, part) in parts.range(r.from..) {
                    if let Some(d) = r.depth_at(n) {
                        if part.contains(d) {
                            out.insert(FanPoint::at(n, d));
                        }
                    }
                }
            }
        };
        row_hits(&self.rows, &other.spokes, &mut points);
        row_hits(&other.rows, &self.spokes, &mut points);
        IntersectionClass {
            class: Cardinality::Finite(points.len() as u64),
            certificate: IntersectionCertificate::Points { points: points.into_iter().collect() },
        }
    }

    /// `|M ∩ N| < ∞`
    pub fn almost_disjoint(&self, other: &DefinableSet) -> bool {
        !self.intersection_class(other).class.is_infinite()
    }

    pub fn spoke_support(&self) -> SpokeSupport {
        if self.rows.is_empty() {
            SpokeSupport::Spokes(self.spokes.keys().copied().collect())
        } else {
            SpokeSupport::UnboundedRows
        }
    }

    /// Decides `M ∈ I_P`: infinite and contained in finitely many spokes.
    pub fn in_ip(&self) -> InIp {
        if let Cardinality::Finite(count) = self.cardinality_class() {
            return InIp { in_ip: false, certificate: InIpCertificate::Finite { count } };
        }
        if let Some(row) = self.rows.first() {
            return InIp {
                in_ip: false,
                certificate: InIpCertificate::Escape { neighborhood: row_escape_neighborhood(row), row: *row },
            };
        }
        InIp {
            in_ip: true,
            certificate: InIpCertificate::FiniteSupport {
                spokes: self.spokes.keys().copied().collect(),
                infinite_on: self.spokes.iter().filter(|(_, p)| p.is_infinite()).map(|(n, _)| *n).collect(),
            },
        }
    }

    /// A neighborhood missing every finite-chunk point and every row point.
    /// Tails are untouched, so the result is disjoint from `M` exactly when
    /// `M` has no tail.
    pub fn separating_neighborhood(&self) -> NeighborhoodSpec {
        let flat = self.rows.iter().filter(|r| r.slope == 0).map(|r| r.intercept).max();
        let default = flat.map_or(1, |b| (b + 1) as u64);
        let ramp = self
            .rows
            .iter()
            .filter(|r| r.slope >= 1)
            .fold(None, |acc: Option<Ramp>, r| {
                let (slope, intercept) = acc.map_or((r.slope, r.intercept), |a| {
                    (a.slope.max(r.slope), a.intercept.max(r.intercept))
                });
                Some(Ramp { slope, intercept })
            })
            .map(|r| Ramp { slope: r.slope, intercept: r.intercept + 1 });
        let mut u = NeighborhoodSpec::new(default, BTreeMap::new(), ramp).expect("positive thresholds");
        for (&n, part) in &self.spokes {
            if let Some(&d) = part.finite.iter().next_back() {
                u.raise(n, d + 1);
            }
        }
        u
    }

    /// Largest spoke index carrying a spoke component.
    pub fn max_spoke(&self) -> Option<u64> {
        self.spokes.keys().next_back().copied()
    }
}

/// The proof's `f(n) = m_n + 1` on the spokes met by the row, `1` elsewhere.
fn row_escape_neighborhood(row: &RowComponent) -> NeighborhoodSpec {
    let mut u = if row.slope == 0 {
        NeighborhoodSpec::uniform((row.intercept + 1) as u64)
    } else {
        NeighborhoodSpec::new(1, BTreeMap::new(), Some(Ramp { slope: row.slope, intercept: row.intercept + 1 }))
            .expect("positive slope")
    };
    for n in 1..row.from {
        u.set(n, 1);
    }
    u
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SetRepr {
    #[serde(default)]
    spokes: Vec<SpokeComponent>,
    #[serde(default)]
    rows: Vec<RowComponent>,
}

impl Serialize for DefinableSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SetRepr { spokes: self.components(), rows: self.rows.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for DefinableSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = SetRepr::deserialize(d)?;
        DefinableSet::new(r.spokes, r.rows).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_points(m: &DefinableSet, spokes: u64, depths: u64) -> BTreeSet<(u64, u64)> {
        let mut out = BTreeSet::new();
        for n in 1..=spokes {
            for d in 1..=depths {
                if m.member(&FanPoint::at(n, d)) {
                    out.insert((n, d));
                }
            }
        }
        out
    }

    #[test]
    fn membership_examples() {
        let b2 = DefinableSet::spoke(2);
        assert!(b2.member(&FanPoint::at(2, 9)));
        assert!(!b2.member(&FanPoint::Apex));
        assert!(!b2.member(&FanPoint::at(1, 9)));
        let m = DefinableSet::tail(1, 2, 2, [4]).unwrap();
        assert!(!m.member(&FanPoint::at(1, 4)));
        assert!(m.member(&FanPoint::at(1, 2)));
        assert!(m.member(&FanPoint::at(1, 6)));
        assert!(!m.member(&FanPoint::at(1, 3)));
    }

    #[test]
    fn cardinality_examples() {
        let m = DefinableSet::from_points(&[FanPoint::at(1, 1), FanPoint::at(2, 2)]).unwrap();
        assert_eq!(m.cardinality_class(), Cardinality::Finite(2));
        assert_eq!(DefinableSet::spoke(1).cardinality_class(), Cardinality::Infinite);
        let m = DefinableSet::tail(1, 3, 2, [5]).unwrap();
        assert_eq!(m.cardinality_class(), Cardinality::Infinite);
        // brute-force growth: 3,7,9,...,999 -> 498 points below 1000, 998 below 2000
        assert_eq!(brute_points(&m, 1, 1000).len(), 498);
        assert_eq!(brute_points(&m, 1, 2000).len(), 998);
    }

    #[test]
    fn intersection_examples() {
        let c = DefinableSet::spoke(1).intersection_class(&DefinableSet::spoke(2));
        assert_eq!(c.class, Cardinality::Finite(0));

        let a = DefinableSet::tail(1, 1, 2, []).unwrap();
        let b = DefinableSet::tail(1, 1, 3, []).unwrap();
        let c = a.intersection_class(&b);
        assert_eq!(c.class, Cardinality::Infinite);
        assert_eq!(
            c.certificate,
            IntersectionCertificate::SpokeResidue { spoke: 1, first: 1, modulus: 6, excluded: vec![] }
        );
        let common: Vec<u64> = (1..=1000).filter(|&d| a.member(&FanPoint::at(1, d)) && b.member(&FanPoint::at(1, d))).collect();
        assert_eq!(common.len(), 167);
        assert!(common.iter().all(|d| d % 6 == 1));

        let even = DefinableSet::tail(1, 2, 2, []).unwrap();
        let odd = DefinableSet::tail(1, 1, 2, []).unwrap();
        assert_eq!(even.intersection_class(&odd).class, Cardinality::Finite(0));
        assert!(
            (1..=1000).all(|d| !(even.member(&FanPoint::at(1, d)) && odd.member(&FanPoint::at(1, d))))
        );
    }

    #[test]
    fn almost_disjoint_examples() {
        assert!(DefinableSet::spoke(3).almost_disjoint(&DefinableSet::spoke(5)));
        let t7 = DefinableSet::tail(1, 7, 1, []).unwrap();
        assert!(!DefinableSet::spoke(1).almost_disjoint(&t7));
        let m = DefinableSet::tail(4, 2, 3, [5]).unwrap();
        assert!(!m.almost_disjoint(&m));
        let f = DefinableSet::finite(2, [1, 5]).unwrap();
        assert!(f.almost_disjoint(&f));
    }

    #[test]
    fn in_ip_examples() {
        let r = DefinableSet::spoke(1).in_ip();
        assert!(r.in_ip);

        let row = DefinableSet::from_rows(vec![RowComponent::new(1, 0, 2).unwrap()]);
        let r = row.in_ip();
        assert!(!r.in_ip);
        let InIpCertificate::Escape { neighborhood, row: esc } = r.certificate else { panic!() };
        assert_eq!(neighborhood, NeighborhoodSpec::uniform(3));
        for i in 0..100 {
            let p = esc.point(i);
            assert!(row.member(&p) && !neighborhood.contains(&p));
        }

        let r = DefinableSet::finite(4, [1, 2, 3]).unwrap().in_ip();
        assert_eq!(r, InIp { in_ip: false, certificate: InIpCertificate::Finite { count: 3 } });
    }

    #[test]
    fn sloped_row_escapes_the_ramp() {
        let row = RowComponent::new(3, 2, -1).unwrap();
        let m = DefinableSet::from_rows(vec![row]).union(&DefinableSet::spoke(7));
        let r = m.in_ip();
        assert!(!r.in_ip);
        let InIpCertificate::Escape { neighborhood, row: esc } = r.certificate else { panic!() };
        for i in 0..100 {
            let p = esc.point(i);
            assert!(m.member(&p) && !neighborhood.contains(&p), "{p}");
        }
        // spokes before the row keep threshold 1
        assert_eq!(neighborhood.threshold(1), 1);
        assert_eq!(neighborhood.threshold(2), 1);
    }

    #[test]
    fn support_examples() {
        let m = DefinableSet::spoke(2).union(&DefinableSet::finite(9, [3]).unwrap());
        assert_eq!(m.spoke_support(), SpokeSupport::Spokes(vec![2, 9]));
        let row = DefinableSet::from_rows(vec![RowComponent::new(1, 1, 0).unwrap()]);
        assert_eq!(row.spoke_support(), SpokeSupport::UnboundedRows);
        assert_eq!(DefinableSet::empty().spoke_support(), SpokeSupport::Spokes(vec![]));
    }

    #[test]
    fn merges_on_one_spoke() {
        let m = DefinableSet::tail(1, 3, 1, [5])
            .unwrap()
            .union(&DefinableSet::finite(1, [1, 5]).unwrap());
        let part = &m.spoke_parts()[&1];
        assert_eq!(part.finite().iter().copied().collect::<Vec<_>>(), vec![1]);
        assert_eq!(part.tails().len(), 1);
        assert!(part.tails()[0].excluded().is_empty());
        // B_1 absorbs any tail on spoke 1
        let m = DefinableSet::spoke(1).union(&DefinableSet::tail(1, 5, 3, [8]).unwrap());
        assert_eq!(m, DefinableSet::spoke(1));
    }

    #[test]
    fn rows_rejected_below_depth_one() {
        assert!(RowComponent::new(1, 1, -1).is_err());
        assert!(RowComponent::new(2, 1, -1).is_ok());
        assert!(RowComponent::new(0, 1, 1).is_err());
        assert!(DefinableSet::tail(1, 2, 2, [3]).is_err());
        assert!(DefinableSet::finite(1, []).is_err());
    }

    #[test]
    fn json_roundtrip_and_shape() {
        let m = DefinableSet::tail(1, 3, 1, [5])
            .unwrap()
            .union(&DefinableSet::finite(2, [1]).unwrap())
            .union(&DefinableSet::from_rows(vec![RowComponent::new(1, 0, 2).unwrap()]));
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(
            s,
            r#"{"spokes":[{"spoke":1,"tail":{"start":3,"stride":1,"excluded":[5]}},{"spoke":2,"finite":[1]}],"rows":[{"from":1,"slope":0,"intercept":2}]}"#
        );
        let back: DefinableSet = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        assert!(serde_json::from_str::<DefinableSet>(r#"{"spokes":[{"spoke":1}]}"#).is_err());
    }

    #[test]
    fn periodic_form_of_two_strides() {
        let m = DefinableSet::tail(1, 1, 2, []).unwrap().union(&DefinableSet::tail(1, 1, 3, []).unwrap());
        let pf = m.spoke_parts()[&1].periodic_form().unwrap();
        assert_eq!(pf.period, 6);
        for d in 1..200 {
            let expected = d % 2 == 1 || d % 3 == 1;
            let got = if d < pf.base {
                pf.below.contains(&d)
            } else {
                pf.residues.contains(&((d - pf.base) % pf.period))
            };
            assert_eq!(got, expected, "depth {d}");
        }
    }

    fn arb_set() -> impl Strategy<Value = DefinableSet> {
        let comp = (1u64..5, 1u64..12, 1u64..5, proptest::collection::btree_set(0u64..4, 0..2), any::<bool>(), proptest::collection::btree_set(1u64..30, 1..4))
            .prop_map(|(spoke, start, stride, ex, is_tail, depths)| {
                if is_tail {
                    let excluded = ex.into_iter().map(|k| start + k * stride).collect();
                    SpokeComponent::StridedTail { spoke, start, stride, excluded }
                } else {
                    SpokeComponent::FiniteChunk { spoke, depths }
                }
            });
        let row = (1u64..4, 0u64..3, 1i64..6).prop_map(|(f, s, b)| RowComponent::new(f, s, b).unwrap());
        (proptest::collection::vec(comp, 0..4), proptest::collection::vec(row, 0..2))
            .prop_map(|(c, r)| DefinableSet::new(c, r).unwrap())
    }

    proptest! {
        #[test]
        fn intersection_agrees_with_truncation(a in arb_set(), b in arb_set()) {
            let c = a.intersection_class(&b);
            let common: BTreeSet<(u64, u64)> = brute_points(&a, 32, 2048).intersection(&brute_points(&b, 32, 2048)).copied().collect();
            match (&c.class, &c.certificate) {
                (Cardinality::Finite(k), IntersectionCertificate::Points { points }) => {
                    // all generated points live well inside the truncation
                    let rows_far = a.rows().iter().chain(b.rows()).any(|r| r.slope * 32 + r.intercept as u64 > 2048);
                    prop_assume!(!rows_far);
                    prop_assert_eq!(*k as usize, common.len());
                    for p in points {
                        prop_assert!(a.member(p) && b.member(p));
                    }
                }
                (Cardinality::Infinite, cert) => {
                    let bound = cert.count_lower_bound(2048);
                    prop_assert!(common.len() as u64 >= bound.min(20));
                    if let IntersectionCertificate::SpokeResidue { spoke, first, modulus, excluded } = cert {
                        let mut d = *first;
                        for _ in 0..50 {
                            if !excluded.contains(&d) {
                                prop_assert!(a.member(&FanPoint::at(*spoke, d)) && b.member(&FanPoint::at(*spoke, d)));
                            }
                            d += modulus;
                        }
                    }
                }
                _ => prop_assert!(false, "finite class must list points"),
            }
        }

        #[test]
        fn almost_disjointness_is_symmetric(a in arb_set(), b in arb_set()) {
            prop_assert_eq!(a.almost_disjoint(&b), b.almost_disjoint(&a));
            prop_assert_eq!(a.almost_disjoint(&a), !a.cardinality_class().is_infinite());
        }

        #[test]
        fn union_is_exact(a in arb_set(), b in arb_set()) {
            let u = a.union(&b);
            for n in 1..6 {
                for d in 1..80 {
                    let x = FanPoint::at(n, d);
                    prop_assert_eq!(u.member(&x), a.member(&x) || b.member(&x));
                }
            }
        }

        #[test]
        fn in_ip_implies_finite_support(a in arb_set()) {
            let r = a.in_ip();
            if r.in_ip {
                prop_assert!(matches!(a.spoke_support(), SpokeSupport::Spokes(_)));
                prop_assert!(a.cardinality_class().is_infinite());
            }
            if let InIpCertificate::Escape { neighborhood, row } = r.certificate {
                for i in 0..100 {
                    let p = row.point(i);
                    prop_assert!(a.member(&p) && !neighborhood.contains(&p));
                }
            }
        }

        #[test]
        fn set_json_roundtrip(a in arb_set()) {
            let s = serde_json::to_string(&a).unwrap();
            let back: DefinableSet = serde_json::from_str(&s).unwrap();
            prop_assert_eq!(back, a);
        }
    }
}
