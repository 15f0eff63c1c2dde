//! Rational-valued functions on the fan with first-match priority layers.
//!
//! Evaluation order: point overrides, then the apex value at `P`, then the
//! first layer whose set contains the point, then the default.

use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::arith::{gcd, lcm};
use crate::fan::{FanPoint, NeighborhoodSpec};
use crate::rational::Rat;
use crate::sequences::{Channel, SequenceDescriptor};
use crate::sets::{DefinableSet, SetError, MAX_PERIOD};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FunctionError {
    #[error("constant node channels have no spoke pattern; use the constant value")]
    UnsupportedChannel,
    #[error("the sequence does not converge to the apex, so it is not in S_P")]
    NotInSp,
    #[error("value period exceeds the supported bound")]
    PeriodTooLarge,
    #[error(transparent)]
    Set(#[from] SetError),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Layer {
    pub set: DefinableSet,
    pub value: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FunctionDescriptor {
    apex: Rat,
    default: Rat,
    layers: Vec<Layer>,
    overrides: BTreeMap<FanPoint, Rat>,
}

/// Values of `j ↦ f(ch(j))` (0-based emissions): `prefix` below
/// `pattern_start`, then `values` repeating with period `values.len()`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ValuePattern {
    pub pattern_start: u64,
    pub prefix: Vec<Rat>,
    pub values: Vec<Rat>,
}

impl ValuePattern {
    pub fn period(&self) -> u64 {
        self.values.len() as u64
    }

    pub fn value_at(&self, j: u64) -> Rat {
        if j < self.pattern_start {
            self.prefix[j as usize]
        } else {
            self.values[((j - self.pattern_start) % self.period()) as usize]
        }
    }

    fn constant(v: Rat) -> Self {
        ValuePattern { pattern_start: 0, prefix: Vec::new(), values: vec![v] }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", rename_all_fields = "camelCase", tag = "kind")]
pub enum DiscontinuityCertificate {
    /// `|f(x(spoke, first_depth + k*modulus)) - f(P)| = epsilon` for every `k ≥ 0`.
    Spoke { spoke: u64, epsilon: Rat, value: Rat, first_depth: u64, modulus: u64 },
    /// `f ≡ f(P)` on `neighborhood`.
    Constant { neighborhood: NeighborhoodSpec, scanned_spokes: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discontinuity {
    pub discontinuous: bool,
    pub certificate: DiscontinuityCertificate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", rename_all_fields = "camelCase", tag = "kind")]
pub enum WitnessCertificate {
    /// `|f(T_k) - f(P)| = epsilon` for every `k = first_index + i*index_stride`.
    Recurring { channel: u64, epsilon: Rat, value: Rat, first_index: u64, index_stride: u64 },
    /// `f(T_k) = f(P)` for every `k ≥ agrees_from`.
    Settled { agrees_from: u64 },
}

impl WitnessCertificate {
    pub fn witness_indices(&self, count: usize) -> Vec<u64> {
        match self {
            WitnessCertificate::Recurring { first_index, index_stride, .. } => {
                (0..count as u64).map(|i| first_index + i * index_stride).collect()
            }
            WitnessCertificate::Settled { .. } => Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessMembership {
    pub member: bool,
    pub certificate: WitnessCertificate,
}

impl FunctionDescriptor {
    pub fn new(apex: Rat, default: Rat, layers: Vec<Layer>, overrides: BTreeMap<FanPoint, Rat>) -> Self {
        FunctionDescriptor { apex, default, layers, overrides }
    }

    pub fn constant(v: Rat) -> Self {
        FunctionDescriptor::new(v, v, Vec::new(), BTreeMap::new())
    }

    /// `value` on `set`, `0` elsewhere (including the apex).
    pub fn indicator(set: DefinableSet, value: Rat) -> Self {
        FunctionDescriptor::new(Rat::zero(), Rat::zero(), vec![Layer { set, value }], BTreeMap::new())
    }

    /// The characteristic function of `{P}`.
    pub fn apex_indicator() -> Self {
        FunctionDescriptor::new(Rat::one(), Rat::zero(), Vec::new(), BTreeMap::new())
    }

    pub fn with_layer(mut self, set: DefinableSet, value: Rat) -> Self {
        self.layers.push(Layer { set, value });
        self
    }

    pub fn with_override(mut self, x: FanPoint, value: Rat) -> Self {
        self.overrides.insert(x, value);
        self
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn overrides(&self) -> &BTreeMap<FanPoint, Rat> {
        &self.overrides
    }

    pub fn default_value(&self) -> Rat {
        self.default
    }

    pub fn eval(&self, x: &FanPoint) -> Rat {
        if let Some(v) = self.overrides.get(x) {
            return *v;
        }
        if x.is_apex() {
            return self.apex;
        }
        self.layers.iter().find(|l| l.set.member(x)).map_or(self.default, |l| l.value)
    }

    /// `f(P)`, overrides included.
    pub fn apex_value(&self) -> Rat {
        self.eval(&FanPoint::Apex)
    }

    /// One past the largest spoke carrying a spoke component or an override.
    /// Every spoke from here on behaves like this one along its canonical sequence.
    pub fn scan_bound(&self) -> u64 {
        let layers = self.layers.iter().filter_map(|l| l.set.max_spoke()).max().unwrap_or(0);
        let overrides = self.overrides.keys().filter_map(FanPoint::spoke).max().unwrap_or(0);
        layers.max(overrides) + 1
    }

    /// Depth from which `f(x(spoke, d))` depends only on `d` modulo [`Self::spoke_period`].
    fn settled_depth(&self, spoke: u64) -> u64 {
        let mut d = 1;
        for x in self.overrides.keys() {
            if let FanPoint::Node { spoke: n, depth } = *x {
                if n == spoke {
                    d = d.max(depth + 1);
                }
            }
        }
        for l in &self.layers {
            if let Some(part) = l.set.spoke_parts().get(&spoke) {
                d = d.max(part.settled_from());
            }
            for r in l.set.rows() {
                if let Some(depth) = r.depth_at(spoke) {
                    d = d.max(depth + 1);
                }
            }
        }
        d
    }

    fn spoke_period(&self, spoke: u64) -> Result<u64, FunctionError> {
        let mut q = 1;
        for l in &self.layers {
            if let Some(part) = l.set.spoke_parts().get(&spoke) {
                q = lcm(q, part.common_period()?).filter(|&q| q <= MAX_PERIOD).ok_or(FunctionError::PeriodTooLarge)?;
            }
        }
        Ok(q)
    }

    /// Exact eventually periodic pattern of `f` along a channel.
    pub fn channel_limit_values(&self, ch: &Channel) -> Result<ValuePattern, FunctionError> {
        let Channel::SpokeRun { spoke, start, stride, skip } = ch else {
            return match ch {
                Channel::ConstApex => Ok(ValuePattern::constant(self.apex_value())),
                _ => Err(FunctionError::UnsupportedChannel),
            };
        };
        let q = self.spoke_period(*spoke)?;
        let period = q / gcd(q, *stride);
        let skip_count = skip.len() as u64;
        let linear_from = skip.iter().next_back().map_or(0, |&s| (s - start) / stride + 1 - skip_count);
        let settled = self.settled_depth(*spoke);
        let depth_from = crate::arith::first_index_at_least(*start, *stride, settled).saturating_sub(skip_count);
        let mut j0 = linear_from.max(depth_from);
        let value = |j: u64| self.eval(&ch.emission(j));
        let mut values: Vec<Rat> = (0..period).map(|r| value(j0 + r)).collect();
        let p = (1..=period)
            .filter(|p| period.is_multiple_of(*p))
            .find(|&p| (0..period).all(|r| values[r as usize] == values[(r % p) as usize]))
            .expect("the full period always works");
        values.truncate(p as usize);
        while j0 > 0 && value(j0 - 1) == values[p as usize - 1] {
            j0 -= 1;
            values.rotate_right(1);
        }
        Ok(ValuePattern { pattern_start: j0, prefix: (0..j0).map(value).collect(), values })
    }

    /// The value of `f` along a constant-node channel.
    pub fn constant_value(&self, ch: &Channel) -> Option<Rat> {
        match ch {
            Channel::ConstNode { spoke, depth } => Some(self.eval(&FanPoint::at(*spoke, *depth))),
            _ => None,
        }
    }

    pub fn discontinuous_at_apex(&self) -> Result<Discontinuity, FunctionError> {
        let v0 = self.apex_value();
        let scanned = self.scan_bound();
        let mut neighborhood = self
            .layers
            .iter()
            .fold(DefinableSet::empty(), |acc, l| acc.union(&DefinableSet::from_rows(l.set.rows().to_vec())))
            .separating_neighborhood();
        for n in 1..=scanned {
            let pattern = self.channel_limit_values(&Channel::run(n, 1, 1))?;
            if let Some(r) = pattern.values.iter().position(|v| *v != v0) {
                let value = pattern.values[r];
                return Ok(Discontinuity {
                    discontinuous: true,
                    certificate: DiscontinuityCertificate::Spoke {
                        spoke: n,
                        epsilon: value.gap(v0),
                        value,
                        first_depth: pattern.pattern_start + r as u64 + 1,
                        modulus: pattern.period(),
                    },
                });
            }
            if let Some(j) = pattern.prefix.iter().rposition(|v| *v != v0) {
                neighborhood.raise(n, j as u64 + 2);
            }
        }
        Ok(Discontinuity {
            discontinuous: false,
            certificate: DiscontinuityCertificate::Constant { neighborhood, scanned_spokes: scanned },
        })
    }

    /// Least spoke `n` with the canonical `T_n ∈ D(f)`.
    pub fn find_fan_witness(&self) -> Result<Option<u64>, FunctionError> {
        Ok(match self.discontinuous_at_apex()?.certificate {
            DiscontinuityCertificate::Spoke { spoke, .. } => Some(spoke),
            DiscontinuityCertificate::Constant { .. } => None,
        })
    }

    /// Decides `T ∈ D(f)`, i.e. `T → P` and `f(T_k) ↛ f(P)`.
    pub fn in_witness_family(&self, t: &SequenceDescriptor) -> Result<WitnessMembership, FunctionError> {
        if !t.converges_to_apex().converges {
            return Err(FunctionError::NotInSp);
        }
        let v0 = self.apex_value();
        let c = t.channel_count();
        let mut agrees_from = t
            .prefix()
            .iter()
            .rposition(|x| self.eval(x) != v0)
            .map_or(1, |k| k as u64 + 2);
        for (i, ch) in t.channels().iter().enumerate() {
            let i = i as u64;
            let pattern = self.channel_limit_values(ch)?;
            if let Some(r) = pattern.values.iter().position(|v| *v != v0) {
                let value = pattern.values[r];
                return Ok(WitnessMembership {
                    member: true,
                    certificate: WitnessCertificate::Recurring {
                        channel: i,
                        epsilon: value.gap(v0),
                        value,
                        first_index: t.index_of_emission(i, pattern.pattern_start + r as u64),
                        index_stride: c * pattern.period(),
                    },
                });
            }
            if let Some(j) = pattern.prefix.iter().rposition(|v| *v != v0) {
                agrees_from = agrees_from.max(t.index_of_emission(i, j as u64) + 1);
            }
        }
        Ok(WitnessMembership { member: false, certificate: WitnessCertificate::Settled { agrees_from } })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OverrideRepr {
    point: FanPoint,
    value: Rat,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FunctionRepr {
    apex: Rat,
    default: Rat,
    #[serde(default)]
    layers: Vec<Layer>,
    #[serde(default)]
    overrides: Vec<OverrideRepr>,
}

impl Serialize for FunctionDescriptor {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        FunctionRepr {
            apex: self.apex,
            default: self.default,
            layers: self.layers.clone(),
            overrides: self.overrides.iter().map(|(p, v)| OverrideRepr { point: *p, value: *v }).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FunctionDescriptor {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = FunctionRepr::deserialize(d)?;
        Ok(FunctionDescriptor {
            apex: r.apex,
            default: r.default,
            layers: r.layers,
            overrides: r.overrides.into_iter().map(|o| (o.point, o.value)).collect(),
        })
    }
}
