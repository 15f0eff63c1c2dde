//! The countable sequential fan `S_ω = {P} ∪ {x(n,m) : n, m ≥ 1}`.
//!
//! Points are the apex `P` and the isolated nodes `x(n,m)` on spoke `n` at
//! depth `m`. A basic neighborhood of the apex is `U_f = {P} ∪ {x(n,m) : m ≥
//! f(n)}`; this module represents `f` by a [`NeighborhoodSpec`].

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::par::{self, Mode};
use crate::report::{CheckRecord, SuiteReport};
use crate::sets::DefinableSet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FanError {
    #[error("the apex lies in every neighborhood and cannot be excluded")]
    ApexNotExcludable,
    #[error("spoke and depth indices start at 1")]
    ZeroIndex,
    #[error("neighborhood thresholds must be at least 1")]
    ZeroThreshold,
    #[error("ramp slope must be at least 1 (fold constant ramps into the default)")]
    FlatRamp,
}

/// A point of the fan. Spokes and depths are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FanPoint {
    Apex,
    Node { spoke: u64, depth: u64 },
}

impl FanPoint {
    pub fn node(spoke: u64, depth: u64) -> Result<Self, FanError> {
        if spoke == 0 || depth == 0 {
            return Err(FanError::ZeroIndex);
        }
        Ok(FanPoint::Node { spoke, depth })
    }

    /// Unchecked constructor for indices already known to be positive.
    pub const fn at(spoke: u64, depth: u64) -> Self {
        FanPoint::Node { spoke, depth }
    }

    pub fn is_apex(&self) -> bool {
        matches!(self, FanPoint::Apex)
    }

    pub fn spoke(&self) -> Option<u64> {
        match self {
            FanPoint::Apex => None,
            FanPoint::Node { spoke, .. } => Some(*spoke),
        }
    }

    pub fn depth(&self) -> Option<u64> {
        match self {
            FanPoint::Apex => None,
            FanPoint::Node { depth, .. } => Some(*depth),
        }
    }
}

impl Ord for FanPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (FanPoint::Apex, FanPoint::Apex) => Ordering::Equal,
            (FanPoint::Apex, _) => Ordering::Less,
            (_, FanPoint::Apex) => Ordering::Greater,
            (FanPoint::Node { spoke: a, depth: b }, FanPoint::Node { spoke: c, depth: d }) => (a, b).cmp(&(c, d)),
        }
    }
}

impl PartialOrd for FanPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for FanPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FanPoint::Apex => write!(f, "P"),
            FanPoint::Node { spoke, depth } => write!(f, "x({spoke},{depth})"),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum PointRepr {
    Apex {
        apex: bool,
    },
    Node {
        spoke: u64,
        depth: u64,
    },
}

impl Serialize for FanPoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match *self {
            FanPoint::Apex => PointRepr::Apex { apex: true },
            FanPoint::Node { spoke, depth } => PointRepr::Node { spoke, depth },
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FanPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match PointRepr::deserialize(d)? {
            PointRepr::Apex { apex: true } => Ok(FanPoint::Apex),
            PointRepr::Apex { apex: false } => Err(serde::de::Error::custom("\"apex\" must be true")),
            PointRepr::Node { spoke, depth } => FanPoint::node(spoke, depth).map_err(serde::de::Error::custom),
        }
    }
}

/// Affine growth `slope*n + intercept` of a neighborhood threshold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Ramp {
    pub slope: u64,
    pub intercept: i64,
}

impl Ramp {
    pub fn at(&self, spoke: u64) -> i128 {
        self.slope as i128 * spoke as i128 + self.intercept as i128
    }
}

/// Threshold function of a basic neighborhood `U_f`.
///
/// `f(n) = overrides[n]` when present and `max(default, ramp(n))` otherwise.
/// Overrides equal to the base value are dropped, so equal specs compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct NeighborhoodSpec {
    default: u64,
    overrides: BTreeMap<u64, u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ramp: Option<Ramp>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NeighborhoodRepr {
    default: u64,
    #[serde(default)]
    overrides: BTreeMap<u64, u64>,
    #[serde(default)]
    ramp: Option<Ramp>,
}

impl<'de> Deserialize<'de> for NeighborhoodSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = NeighborhoodRepr::deserialize(d)?;
        NeighborhoodSpec::new(r.default, r.overrides, r.ramp).map_err(serde::de::Error::custom)
    }
}

impl NeighborhoodSpec {
    pub fn new(default: u64, overrides: BTreeMap<u64, u64>, ramp: Option<Ramp>) -> Result<Self, FanError> {
        if default == 0 || overrides.values().any(|&t| t == 0) {
            return Err(FanError::ZeroThreshold);
        }
        if overrides.keys().any(|&n| n == 0) {
            return Err(FanError::ZeroIndex);
        }
        if ramp.is_some_and(|r| r.slope == 0) {
            return Err(FanError::FlatRamp);
        }
        let mut spec = NeighborhoodSpec { default, overrides, ramp };
        spec.normalize();
        Ok(spec)
    }

    /// `U_f` with the constant threshold `d ≥ 1`.
    pub fn uniform(default: u64) -> Self {
        NeighborhoodSpec::new(default.max(1), BTreeMap::new(), None).expect("positive threshold")
    }

    pub fn default_threshold(&self) -> u64 {
        self.default
    }

    pub fn overrides(&self) -> &BTreeMap<u64, u64> {
        &self.overrides
    }

    pub fn ramp(&self) -> Option<Ramp> {
        self.ramp
    }

    /// Threshold on spokes without an override.
    pub fn base_threshold(&self, spoke: u64) -> u64 {
        match self.ramp {
            None => self.default,
            Some(r) => {
                let v = r.at(spoke).max(self.default as i128);
                u64::try_from(v).unwrap_or(u64::MAX)
            }
        }
    }

    pub fn threshold(&self, spoke: u64) -> u64 {
        self.overrides.get(&spoke).copied().unwrap_or_else(|| self.base_threshold(spoke))
    }

    pub fn contains(&self, x: &FanPoint) -> bool {
        match *x {
            FanPoint::Apex => true,
            FanPoint::Node { spoke, depth } => depth >= self.threshold(spoke),
        }
    }

    /// Sets `threshold(spoke) := max(threshold(spoke), t)`.
    pub fn raise(&mut self, spoke: u64, t: u64) {
        let cur = self.threshold(spoke);
        if t > cur {
            self.overrides.insert(spoke, t);
        }
        self.normalize();
    }

    /// Sets `threshold(spoke) := t` exactly.
    pub fn set(&mut self, spoke: u64, t: u64) {
        self.overrides.insert(spoke, t.max(1));
        self.normalize();
    }

    fn normalize(&mut self) {
        let overrides = std::mem::take(&mut self.overrides);
        self.overrides = overrides.into_iter().filter(|&(n, t)| t != self.base_threshold(n)).collect();
    }

    /// Largest threshold value mentioned anywhere in this neighborhood, evaluated on
    /// spokes `1..=max_spoke`.
    pub fn max_threshold(&self, max_spoke: u64) -> u64 {
        (1..=max_spoke.max(1)).map(|n| self.threshold(n)).max().unwrap_or(self.default)
    }
}

/// The canonical neighborhood excluding a node: `d = 1` and `f(spoke) = depth + 1`.
pub fn excluding_neighborhood(x: &FanPoint) -> Result<NeighborhoodSpec, FanError> {
    match *x {
        FanPoint::Apex => Err(FanError::ApexNotExcludable),
        FanPoint::Node { spoke, depth } => {
            let mut overrides = BTreeMap::new();
            overrides.insert(spoke, depth + 1);
            NeighborhoodSpec::new(1, overrides, None)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelEntry {
    pub point: FanPoint,
    pub neighborhood: NeighborhoodSpec,
}

/// One excluding neighborhood per node of the truncation, each re-validated.
pub fn kernel_certificates(max_spoke: u64, max_depth: u64) -> Vec<(KernelEntry, bool)> {
    let mut out = Vec::with_capacity((max_spoke * max_depth) as usize);
    for n in 1..=max_spoke {
        for m in 1..=max_depth {
            let point = FanPoint::at(n, m);
            let neighborhood = excluding_neighborhood(&point).expect("node is excludable");
            let ok = !neighborhood.contains(&point) && neighborhood.contains(&FanPoint::Apex);
            out.push((KernelEntry { point, neighborhood }, ok));
        }
    }
    out
}

/// Certifies `K_P = {P}` on the truncation: every node `x(n,m)` with
/// `n ≤ max_spoke`, `m ≤ max_depth` is excluded by a validated neighborhood.
pub fn kernel_certificate(max_spoke: u64, max_depth: u64) -> SuiteReport {
    kernel_certificate_with(max_spoke, max_depth, Mode::default())
}

pub fn kernel_certificate_with(max_spoke: u64, max_depth: u64, mode: Mode) -> SuiteReport {
    let max_spoke = max_spoke.max(1);
    let max_depth = max_depth.max(1);
    let spokes: Vec<u64> = (1..=max_spoke).collect();
    let per_spoke = par::map(mode, &spokes, |&n| {
        let mut validated = 0u64;
        let mut first_bad = None;
        for m in 1..=max_depth {
            let point = FanPoint::at(n, m);
            let u = excluding_neighborhood(&point).expect("node is excludable");
            if !u.contains(&point) && u.contains(&FanPoint::Apex) {
                validated += 1;
            } else if first_bad.is_none() {
                first_bad = Some(point);
            }
        }
        let sample = excluding_neighborhood(&FanPoint::at(n, max_depth)).expect("node");
        (n, validated, first_bad, sample)
    });
    let mut report = SuiteReport::new("kernel");
    let mut total = 0;
    for (n, validated, first_bad, sample) in per_spoke {
        total += validated;
        let detail = match first_bad {
            None => format!("{validated} excluding neighborhoods validated on spoke {n}"),
            Some(p) => format!("neighborhood for {p} failed validation"),
        };
        let entry = KernelEntry { point: FanPoint::at(n, max_depth), neighborhood: sample };
        report.push(
            CheckRecord::new(
                format!("kernel/spoke-{n:05}"),
                "kernel of the apex is {P} (T1 at P)",
                first_bad.is_none(),
                detail,
            )
            .with_certificate(&entry),
        );
    }
    report.metric("certificates_validated", total);
    report.metric("nodes", max_spoke * max_depth);
    report.finish()
}

/// Outcome of [`accumulates_at_apex`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", rename_all_fields = "camelCase", tag = "kind")]
pub enum AccumulationCertificate {
    /// The spoke carries the infinite residue class `first + k*stride`, minus `excluded`.
    Spoke { spoke: u64, first: u64, stride: u64, excluded: Vec<u64> },
    /// `M ∩ U = ∅`.
    Separated { neighborhood: NeighborhoodSpec },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Accumulation {
    pub accumulates: bool,
    pub certificate: AccumulationCertificate,
}

/// Decides `P ∈ cl(M)`: true iff some spoke meets `M` infinitely.
pub fn accumulates_at_apex(m: &DefinableSet) -> Accumulation {
    for (spoke, part) in m.spoke_parts() {
        if let Some(tail) = part.tails().first() {
            return Accumulation {
                accumulates: true,
                certificate: AccumulationCertificate::Spoke {
                    spoke: *spoke,
                    first: tail.start(),
                    stride: tail.stride(),
                    excluded: tail.excluded().iter().copied().collect(),
                },
            };
        }
    }
    Accumulation {
        accumulates: false,
        certificate: AccumulationCertificate::Separated { neighborhood: m.separating_neighborhood() },
    }
}
