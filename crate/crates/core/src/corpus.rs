//! Seeded generators for sets, sequences, functions, index maps, probes and
//! chains, plus the default function corpus.
//!
//! All generators draw from a ChaCha stream, so a seed reproduces a corpus
//! exactly. The bounds below keep every finite feature well inside the windows
//! used by [`crate::oracle`].

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fan::FanPoint;
use crate::functions::{FunctionDescriptor, Layer};
use crate::rational::Rat;
use crate::sequences::{Channel, IncreasingIndexMap, SequenceDescriptor};
use crate::sets::{DefinableSet, RowComponent, SpokeComponent};
use crate::testsets::{FunctionCorpus, TestSetDescriptor};

pub const DEFAULT_SEED: u64 = 0x5EED_F00D;

/// A reproducible stream for one named consumer of a seed.
pub fn rng_for(seed: u64, stream: &str) -> ChaCha8Rng {
    let tag = stream.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3));
    ChaCha8Rng::seed_from_u64(seed ^ tag)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SetKind {
    /// Spoke components only, at least one tail.
    Ip,
    /// Nonempty finite chunks only.
    Finite,
    /// At least one row, possibly with spoke components.
    Rows,
    Mixed,
}

#[derive(Clone, Copy, Debug)]
pub struct SetParams {
    pub max_spoke: u64,
    pub max_start: u64,
    pub max_stride: u64,
    pub max_depth: u64,
    pub max_row_from: u64,
    pub max_slope: u64,
}

impl Default for SetParams {
    fn default() -> Self {
        SetParams { max_spoke: 12, max_start: 64, max_stride: 8, max_depth: 64, max_row_from: 8, max_slope: 16 }
    }
}

impl SetParams {
    /// Bounds for function layers: small strides keep value periods short.
    pub fn for_layers() -> Self {
        SetParams { max_spoke: 6, max_stride: 4, ..SetParams::default() }
    }
}

fn random_tail(rng: &mut impl Rng, p: &SetParams) -> SpokeComponent {
    let spoke = rng.gen_range(1..=p.max_spoke);
    let start = rng.gen_range(1..=p.max_start);
    let stride = rng.gen_range(1..=p.max_stride);
    let excluded = (0..rng.gen_range(0..=2)).map(|_| start + stride * rng.gen_range(0..8)).collect();
    SpokeComponent::StridedTail { spoke, start, stride, excluded }
}

fn random_chunk(rng: &mut impl Rng, p: &SetParams) -> SpokeComponent {
    let spoke = rng.gen_range(1..=p.max_spoke);
    let depths = (0..rng.gen_range(1..=4)).map(|_| rng.gen_range(1..=p.max_depth)).collect();
    SpokeComponent::FiniteChunk { spoke, depths }
}

fn random_row(rng: &mut impl Rng, p: &SetParams) -> RowComponent {
    let from = rng.gen_range(1..=p.max_row_from);
    let slope = rng.gen_range(0..=p.max_slope);
    let lowest = 1 - (slope * from) as i64;
    let intercept = rng.gen_range(lowest.max(-3)..=8);
    RowComponent::new(from, slope, intercept).expect("row depth ≥ 1")
}

pub fn random_set(rng: &mut impl Rng, kind: SetKind, p: &SetParams) -> DefinableSet {
    let mut comps = Vec::new();
    let mut rows = Vec::new();
    match kind {
        SetKind::Ip => {
            comps.push(random_tail(rng, p));
            for _ in 0..rng.gen_range(0..3) {
                comps.push(if rng.gen_bool(0.5) { random_tail(rng, p) } else { random_chunk(rng, p) });
            }
        }
        SetKind::Finite => {
            for _ in 0..rng.gen_range(1..=3) {
                comps.push(random_chunk(rng, p));
            }
        }
        SetKind::Rows => {
            for _ in 0..rng.gen_range(1..=2) {
                rows.push(random_row(rng, p));
            }
            for _ in 0..rng.gen_range(0..2) {
                comps.push(if rng.gen_bool(0.5) { random_tail(rng, p) } else { random_chunk(rng, p) });
            }
        }
        SetKind::Mixed => {
            for _ in 0..rng.gen_range(0..3) {
                comps.push(if rng.gen_bool(0.5) { random_tail(rng, p) } else { random_chunk(rng, p) });
            }
            if rng.gen_bool(0.3) {
                rows.push(random_row(rng, p));
            }
        }
    }
    DefinableSet::new(comps, rows).expect("generated components are valid")
}

/// A corpus of `count` sets with every kind represented; a quarter rows and a quarter finite.
pub fn set_corpus(seed: u64, count: usize) -> Vec<DefinableSet> {
    let mut rng = rng_for(seed, "sets");
    let p = SetParams::default();
    (0..count)
        .map(|i| {
            let kind = [SetKind::Ip, SetKind::Finite, SetKind::Rows, SetKind::Mixed][i % 4];
            random_set(&mut rng, kind, &p)
        })
        .collect()
}

pub fn ip_corpus(seed: u64, count: usize, max_spoke: u64) -> Vec<DefinableSet> {
    let mut rng = rng_for(seed, "ip-sets");
    let p = SetParams { max_spoke, ..SetParams::default() };
    (0..count).map(|_| random_set(&mut rng, SetKind::Ip, &p)).collect()
}

pub fn random_point(rng: &mut impl Rng) -> FanPoint {
    if rng.gen_bool(0.1) {
        FanPoint::Apex
    } else {
        FanPoint::at(rng.gen_range(1..=8), rng.gen_range(1..=30))
    }
}

pub fn random_prefix(rng: &mut impl Rng, max_len: usize) -> Vec<FanPoint> {
    (0..rng.gen_range(0..=max_len)).map(|_| random_point(rng)).collect()
}

fn random_run(rng: &mut impl Rng) -> Channel {
    let spoke = rng.gen_range(1..=6);
    let start = rng.gen_range(1..=20);
    let stride = rng.gen_range(1..=4);
    let skip = (0..rng.gen_range(0..=2)).map(|_| start + stride * rng.gen_range(0..6)).collect();
    Channel::SpokeRun { spoke, start, stride, skip }
}

/// A sequence with up to four channels; `constant_node` allows non-convergent ones.
pub fn random_sequence(rng: &mut impl Rng, constant_node: bool) -> SequenceDescriptor {
    let prefix = random_prefix(rng, 6);
    let mut channels = vec![random_run(rng)];
    for _ in 0..rng.gen_range(0..=3) {
        let roll: f64 = rng.gen();
        channels.push(if roll < 0.15 {
            Channel::ConstApex
        } else if constant_node && roll < 0.35 {
            Channel::ConstNode { spoke: rng.gen_range(1..=6), depth: rng.gen_range(1..=20) }
        } else {
            random_run(rng)
        });
    }
    channels.shuffle(rng);
    SequenceDescriptor::new(prefix, channels).expect("generated channels are valid")
}

fn small_rational(rng: &mut impl Rng) -> Rat {
    *[Rat::zero(), Rat::one(), Rat::new(1, 2), Rat::int(-1), Rat::new(3, 4), Rat::int(2)]
        .choose(rng)
        .expect("nonempty")
}

pub fn random_function(rng: &mut impl Rng) -> FunctionDescriptor {
    let p = SetParams::for_layers();
    let apex = small_rational(rng);
    let default = if rng.gen_bool(0.5) { apex } else { small_rational(rng) };
    let layers = (0..rng.gen_range(0..=3))
        .map(|_| {
            let kind = [SetKind::Ip, SetKind::Finite, SetKind::Rows, SetKind::Mixed][rng.gen_range(0..4)];
            Layer { set: random_set(rng, kind, &p), value: small_rational(rng) }
        })
        .collect();
    let mut f = FunctionDescriptor::new(apex, default, layers, Default::default());
    for _ in 0..rng.gen_range(0..=2) {
        let x = if rng.gen_bool(0.1) { FanPoint::Apex } else { FanPoint::at(rng.gen_range(1..=6), rng.gen_range(1..=30)) };
        f = f.with_override(x, small_rational(rng));
    }
    f
}

/// The characteristic function of `{P}`, `1_{B_n}` for `n ≤ spoke_bound`, a few
/// continuous functions, and seeded random functions until at least 40 members
/// are discontinuous.
pub fn default_corpus(seed: u64, spoke_bound: u64) -> FunctionCorpus {
    let mut functions = vec![FunctionDescriptor::apex_indicator()];
    functions.extend((1..=spoke_bound).map(|n| FunctionDescriptor::indicator(DefinableSet::spoke(n), Rat::one())));
    functions.push(FunctionDescriptor::constant(Rat::zero()));
    functions.push(FunctionDescriptor::constant(Rat::new(1, 2)));
    let diagonal = DefinableSet::from_rows(vec![RowComponent::new(1, 0, 1).expect("row")]);
    functions.push(FunctionDescriptor::indicator(diagonal, Rat::one()));
    functions.push(FunctionDescriptor::indicator(DefinableSet::finite(2, [1, 4, 9]).expect("chunk"), Rat::int(3)));
    let mut rng = rng_for(seed, "functions");
    let discontinuous = |fs: &[FunctionDescriptor]| {
        fs.iter().filter(|f| f.discontinuous_at_apex().map(|d| d.discontinuous).unwrap_or(false)).count()
    };
    let mut added = 0;
    while added < 32 || discontinuous(&functions) < 40 {
        functions.push(random_function(&mut rng));
        added += 1;
    }
    FunctionCorpus { functions, seed: Some(seed), spoke_bound }
}

pub fn random_index_map(rng: &mut impl Rng) -> IncreasingIndexMap {
    let mut initial = Vec::new();
    let mut last = 0u64;
    for _ in 0..rng.gen_range(0..=4) {
        last += rng.gen_range(1..=5);
        initial.push(last);
    }
    let slope = rng.gen_range(1..=5u64);
    let lowest = last as i64 + 1 - (slope * (initial.len() as u64 + 1)) as i64;
    let intercept = rng.gen_range(lowest..=lowest + 10);
    IncreasingIndexMap { initial, slope, intercept }
}

/// Probes around a reference: copies, single changes, shared prefixes with new tails, and unrelated sequences.
pub fn random_probe(rng: &mut impl Rng, a: &SequenceDescriptor) -> SequenceDescriptor {
    match rng.gen_range(0..4) {
        0 => {
            let r = rng.gen_range(0..=8);
            a.modify_prefix(&a.terms(1..=r).collect::<Vec<_>>()).0
        }
        1 => {
            let k = rng.gen_range(1..=25u64);
            let mut p: Vec<FanPoint> = a.terms(1..=k).collect();
            p[k as usize - 1] = random_point(rng);
            a.modify_prefix(&p).0
        }
        2 => {
            let r = rng.gen_range(0..=25u64);
            let t = random_sequence(rng, true);
            t.modify_prefix(&a.terms(1..=r).collect::<Vec<_>>()).0
        }
        _ => random_sequence(rng, true),
    }
}

/// A descending chain ending at the canonical family, each step removing one extra sequence.
pub fn random_chain(rng: &mut impl Rng) -> Vec<TestSetDescriptor> {
    let target = rng.gen_range(0..=4);
    let mut extras = Vec::new();
    while extras.len() < target {
        let t = random_sequence(rng, false);
        if t.canonical_index().is_none() && !extras.iter().any(|e: &SequenceDescriptor| e.same_sequence(&t)) {
            extras.push(t);
        }
    }
    let mut chain: Vec<TestSetDescriptor> = (0..extras.len())
        .map(|i| TestSetDescriptor::CanonicalFan { excluded: Default::default(), extras: extras[i..].to_vec() })
        .collect();
    chain.push(TestSetDescriptor::canonical_fan());
    chain
}
