//! Sampled `sin(1/x)` example on the real line, evaluated in double precision.
//!
//! Membership in a witness family is only semi-decidable here, so the check
//! answers either with a witness or with "none up to depth".

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::Rat;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RealLineError {
    #[error("the leading coefficient must be positive and the offset non-negative")]
    NotDecreasing,
}

/// `value` or `value * π`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RealConst {
    pub value: Rat,
    #[serde(default)]
    pub times_pi: bool,
}

impl RealConst {
    pub fn pi_times(value: Rat) -> Self {
        RealConst { value, times_pi: true }
    }

    pub fn to_f64(self) -> f64 {
        let v = self.value.to_f64();
        if self.times_pi {
            v * PI
        } else {
            v
        }
    }
}

/// `T_k = 1 / (c1*k + c2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum RealSeqGen {
    ReciprocalAffine { c1: RealConst, c2: RealConst },
}

impl RealSeqGen {
    pub fn reciprocal_affine(c1: RealConst, c2: RealConst) -> Result<Self, RealLineError> {
        if c1.value <= Rat::zero() || c2.value < Rat::zero() {
            return Err(RealLineError::NotDecreasing);
        }
        Ok(RealSeqGen::ReciprocalAffine { c1, c2 })
    }

    /// `1 / (2kπ + π/2)`, on which `sin(1/x)` is identically 1.
    pub fn peaks() -> Self {
        RealSeqGen::ReciprocalAffine { c1: RealConst::pi_times(Rat::int(2)), c2: RealConst::pi_times(Rat::new(1, 2)) }
    }

    /// `1 / (kπ)`, on which `sin(1/x)` is identically 0.
    pub fn zeros() -> Self {
        RealSeqGen::ReciprocalAffine { c1: RealConst::pi_times(Rat::one()), c2: RealConst::pi_times(Rat::zero()) }
    }

    /// `1 / T_k`, computed directly.
    pub fn reciprocal(&self, k: u64) -> f64 {
        let RealSeqGen::ReciprocalAffine { c1, c2 } = self;
        c1.to_f64() * k as f64 + c2.to_f64()
    }

    pub fn term(&self, k: u64) -> f64 {
        1.0 / self.reciprocal(k)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum RealFunction {
    /// `sin(1/x)` for `x ≠ 0`, `0` at `0`.
    #[default]
    SinReciprocal,
    Zero,
}

impl RealFunction {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            RealFunction::SinReciprocal if x != 0.0 => (1.0 / x).sin(),
            _ => 0.0,
        }
    }

    /// `f(T_k)` evaluated from the exact reciprocal of the term.
    pub fn along(&self, gen: &RealSeqGen, k: u64) -> f64 {
        match self {
            RealFunction::SinReciprocal => gen.reciprocal(k).sin(),
            RealFunction::Zero => 0.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", rename_all_fields = "camelCase", tag = "kind")]
pub enum WitnessVerdict {
    /// `|f(T_k) - f(0)| ≥ ε - tol` at every listed index.
    Witness { epsilon: Rat, indices: Vec<u64>, min_deviation: f64, max_deviation: f64 },
    /// No witness among `T_1..T_depth`; not a proof of non-membership.
    NoneUpTo { depth: u64, max_deviation: f64 },
}

pub fn sample_witness_check(gen: &RealSeqGen, f: RealFunction, depth: u64, epsilon: Rat, tol: f64) -> WitnessVerdict {
    let threshold = epsilon.to_f64() - tol;
    let deviations: Vec<f64> = (1..=depth).map(|k| f.along(gen, k).abs()).collect();
    let max_deviation = deviations.iter().copied().fold(0.0, f64::max);
    let indices: Vec<u64> = (1..=depth).filter(|&k| deviations[k as usize - 1] >= threshold).collect();
    if !indices.is_empty() && 2 * indices.len() as u64 >= depth {
        let min_deviation = indices.iter().map(|&k| deviations[k as usize - 1]).fold(f64::INFINITY, f64::min);
        WitnessVerdict::Witness { epsilon, indices, min_deviation, max_deviation }
    } else {
        WitnessVerdict::NoneUpTo { depth, max_deviation }
    }
}

/// `max_{k ≤ depth} |f(T_k) - target|`.
pub fn max_distance_to(gen: &RealSeqGen, f: RealFunction, depth: u64, target: f64) -> f64 {
    (1..=depth).map(|k| (f.along(gen, k) - target).abs()).fold(0.0, f64::max)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ConvergenceRow {
    pub epsilon: Rat,
    /// First `N ≤ depth` with `|T_k| ≤ ε` for all sampled `k ≥ N`.
    pub absorption_index: Option<u64>,
}

pub fn convergence_sample(gen: &RealSeqGen, depth: u64, epsilons: &[Rat]) -> Vec<ConvergenceRow> {
    epsilons
        .iter()
        .map(|&epsilon| {
            let e = epsilon.to_f64();
            let mut n = None;
            for k in (1..=depth).rev() {
                if gen.term(k).abs() <= e {
                    n = Some(k);
                } else {
                    break;
                }
            }
            ConvergenceRow { epsilon, absorption_index: n }
        })
        .collect()
}

pub fn is_strictly_decreasing(gen: &RealSeqGen, depth: u64) -> bool {
    (1..=depth).all(|k| gen.term(k + 1) < gen.term(k) && gen.term(k) > 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn peaks_witness() {
        let v = sample_witness_check(&RealSeqGen::peaks(), RealFunction::SinReciprocal, 10_000, Rat::new(1, 2), 1e-9);
        let WitnessVerdict::Witness { indices, min_deviation, .. } = v else { panic!("{v:?}") };
        assert_eq!(indices.len(), 10_000);
        assert!(1.0 - min_deviation <= 1e-9);
    }

    #[test]
    fn zeros_have_no_witness() {
        let v = sample_witness_check(&RealSeqGen::zeros(), RealFunction::SinReciprocal, 10_000, Rat::new(1, 2), 1e-9);
        let WitnessVerdict::NoneUpTo { depth, max_deviation } = v else { panic!() };
        assert_eq!(depth, 10_000);
        assert!(max_deviation <= 1e-7, "{max_deviation}");
        let v = sample_witness_check(&RealSeqGen::peaks(), RealFunction::Zero, 50, Rat::new(1, 2), 1e-9);
        assert!(matches!(v, WitnessVerdict::NoneUpTo { depth: 50, .. }));
    }

    #[test]
    fn convergence_examples() {
        let g = RealSeqGen::peaks();
        let rows = convergence_sample(&g, 1000, &[Rat::new(1, 100), Rat::int(10)]);
        let brute = (1..=1000u64).find(|&k| (k..=1000).all(|j| g.term(j) <= 0.01)).unwrap();
        assert_eq!(rows[0].absorption_index, Some(brute));
        assert!(brute <= 16);
        assert_eq!(rows[1].absorption_index, Some(1));
        assert!(convergence_sample(&g, 10, &[]).is_empty());
    }

    #[test]
    fn generators_decrease() {
        assert!(is_strictly_decreasing(&RealSeqGen::peaks(), 10_000));
        assert!(is_strictly_decreasing(&RealSeqGen::zeros(), 10_000));
        assert!(RealSeqGen::reciprocal_affine(RealConst::pi_times(Rat::zero()), RealConst::pi_times(Rat::one())).is_err());
    }
}
