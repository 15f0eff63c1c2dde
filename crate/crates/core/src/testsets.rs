//! Families of sequences converging to the apex and the test-set property
//! relative to a finite function corpus.
//!
//! Three intensional families are supported: explicit finite lists, the
//! canonical spoke sequences `{T_j : j ∉ excluded}` (plus optional extra
//! sequences), and the prefix-fixed families `A_n(a)` and `B_n(a) = A_n(a) ∖ {a}`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fan::FanPoint;
use crate::functions::{FunctionDescriptor, FunctionError, WitnessCertificate};
use crate::rational::Rat;
use crate::report::{CheckRecord, SuiteReport};
use crate::sequences::{Channel, Disagreement, SequenceDescriptor};
use crate::sets::{Cardinality, DefinableSet};

pub const RELATIVIZATION_NOTE: &str =
    "test-set verdicts are relative to the declared function corpus, a decidable fragment of the functions discontinuous at P";
pub const FINITE_STAGE_NOTE: &str = "chains are checked at a finite stage; maximality of chains is not certified";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TestSetError {
    #[error("the reference sequence does not converge to the apex")]
    NotConvergent,
    #[error("the function is continuous at the apex")]
    ContinuousFunction,
    #[error("the minimal marker is not an entry of the chain")]
    MarkerNotInChain,
    #[error("chain entry {0} is a prefix family; only explicit and canonical entries are supported")]
    UnsupportedChainEntry(usize),
    #[error("corpus set {0} is not in I_P")]
    CorpusNotInIp(usize),
    #[error("family members {0} and {1} are not almost disjoint")]
    FamilyNotAd(usize, usize),
    #[error(transparent)]
    Function(#[from] FunctionError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum TestSetDescriptor {
    #[serde(rename = "explicit")]
    ExplicitFinite(Vec<SequenceDescriptor>),
    CanonicalFan {
        #[serde(default)]
        excluded: BTreeSet<u64>,
        #[serde(default)]
        extras: Vec<SequenceDescriptor>,
    },
    #[serde(rename_all = "camelCase")]
    PrefixFamily { reference: SequenceDescriptor, n: u64, remove_reference: bool },
}

impl TestSetDescriptor {
    /// `{T_n : n ∈ ℕ}`.
    pub fn canonical_fan() -> Self {
        TestSetDescriptor::CanonicalFan { excluded: BTreeSet::new(), extras: Vec::new() }
    }

    pub fn canonical_without(excluded: impl IntoIterator<Item = u64>) -> Self {
        TestSetDescriptor::CanonicalFan { excluded: excluded.into_iter().collect(), extras: Vec::new() }
    }

    pub fn a_n(a: SequenceDescriptor, n: u64) -> Self {
        TestSetDescriptor::PrefixFamily { reference: a, n, remove_reference: false }
    }

    pub fn b_n(a: SequenceDescriptor, n: u64) -> Self {
        TestSetDescriptor::PrefixFamily { reference: a, n, remove_reference: true }
    }

    pub fn member_of(&self, t: &SequenceDescriptor) -> bool {
        match self {
            TestSetDescriptor::ExplicitFinite(list) => list.iter().any(|s| s.same_sequence(t)),
            TestSetDescriptor::CanonicalFan { excluded, extras } => {
                t.canonical_index().is_some_and(|j| !excluded.contains(&j)) || extras.iter().any(|s| s.same_sequence(t))
            }
            TestSetDescriptor::PrefixFamily { reference, n, remove_reference } => {
                t.converges_to_apex().converges
                    && (1..=*n).all(|k| t.term(k) == reference.term(k))
                    && !(*remove_reference && t.same_sequence(reference))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FunctionCorpus {
    pub functions: Vec<FunctionDescriptor>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default)]
    pub spoke_bound: u64,
}

impl FunctionCorpus {
    pub fn from_functions(functions: Vec<FunctionDescriptor>) -> Self {
        FunctionCorpus { functions, seed: None, spoke_bound: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", rename_all_fields = "camelCase", tag = "kind")]
pub enum NoWitness {
    /// Every member of an explicit list was checked.
    Exhausted { checked: u64 },
    /// Only these canonical spokes witness `f`, all of them excluded; every
    /// spoke from `beyond` on settles to `f(P)` because the default agrees.
    ExcludedSpokes { witness_spokes: Vec<u64>, beyond: u64, extras_checked: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", rename_all_fields = "camelCase", tag = "kind")]
pub enum Outcome {
    Continuous,
    Witnessed { sequence: SequenceDescriptor, certificate: WitnessCertificate },
    Unwitnessed { reason: NoWitness },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionOutcome {
    pub function: u64,
    pub outcome: Outcome,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TestSetVerdict {
    pub pass: bool,
    pub outcomes: Vec<FunctionOutcome>,
}

impl TestSetVerdict {
    pub fn first_failure(&self) -> Option<u64> {
        self.outcomes.iter().find(|o| matches!(o.outcome, Outcome::Unwitnessed { .. })).map(|o| o.function)
    }
}

/// Canonical spokes `n < f.scan_bound()` with `T_n ∈ D(f)`, and whether every
/// spoke from the bound on is a witness too.
pub fn witness_spokes(f: &FunctionDescriptor) -> Result<(Vec<u64>, bool), FunctionError> {
    let bound = f.scan_bound();
    let mut spokes = Vec::new();
    for n in 1..bound {
        if f.in_witness_family(&SequenceDescriptor::canonical(n))?.member {
            spokes.push(n);
        }
    }
    let beyond = f.in_witness_family(&SequenceDescriptor::canonical(bound))?.member;
    Ok((spokes, beyond))
}

fn witnessed(f: &FunctionDescriptor, t: SequenceDescriptor) -> Result<Option<Outcome>, FunctionError> {
    if !t.converges_to_apex().converges {
        return Ok(None);
    }
    let r = f.in_witness_family(&t)?;
    Ok(r.member.then_some(Outcome::Witnessed { sequence: t, certificate: r.certificate }))
}

fn outcome_for(a: &TestSetDescriptor, f: &FunctionDescriptor) -> Result<Outcome, FunctionError> {
    if !f.discontinuous_at_apex()?.discontinuous {
        return Ok(Outcome::Continuous);
    }
    match a {
        TestSetDescriptor::ExplicitFinite(list) => {
            for t in list {
                if let Some(o) = witnessed(f, t.clone())? {
                    return Ok(o);
                }
            }
            Ok(Outcome::Unwitnessed { reason: NoWitness::Exhausted { checked: list.len() as u64 } })
        }
        TestSetDescriptor::CanonicalFan { excluded, extras } => {
            let (spokes, beyond) = witness_spokes(f)?;
            let bound = f.scan_bound();
            let pick = spokes
                .iter()
                .copied()
                .find(|n| !excluded.contains(n))
                .or_else(|| beyond.then(|| (bound..).find(|n| !excluded.contains(n)).expect("finitely many excluded")));
            if let Some(n) = pick {
                return Ok(witnessed(f, SequenceDescriptor::canonical(n))?.expect("witness spoke"));
            }
            for t in extras {
                if let Some(o) = witnessed(f, t.clone())? {
                    return Ok(o);
                }
            }
            Ok(Outcome::Unwitnessed {
                reason: NoWitness::ExcludedSpokes { witness_spokes: spokes, beyond: bound, extras_checked: extras.len() as u64 },
            })
        }
        TestSetDescriptor::PrefixFamily { reference, n, .. } => {
            let m = f.find_fan_witness()?.expect("discontinuous");
            let t = prefix_witness(reference, *n, m);
            Ok(witnessed(f, t)?.expect("canonical tail witnesses f"))
        }
    }
}

/// Decides whether `A ∩ D(f) ≠ ∅` for every discontinuous `f` in the corpus.
pub fn is_test_set_relative(a: &TestSetDescriptor, corpus: &FunctionCorpus) -> Result<TestSetVerdict, TestSetError> {
    let mut outcomes = Vec::with_capacity(corpus.functions.len());
    for (i, f) in corpus.functions.iter().enumerate() {
        let outcome = outcome_for(a, f)?;
        if let Outcome::Witnessed { sequence, .. } = &outcome {
            debug_assert!(a.member_of(sequence));
        }
        outcomes.push(FunctionOutcome { function: i as u64, outcome });
    }
    let pass = outcomes.iter().all(|o| !matches!(o.outcome, Outcome::Unwitnessed { .. }));
    Ok(TestSetVerdict { pass, outcomes })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanWitness {
    pub spoke: u64,
    pub certificate: WitnessCertificate,
}

/// Least spoke `n` with `T_n ∈ D(f)`.
pub fn find_fan_witness(f: &FunctionDescriptor) -> Result<FanWitness, TestSetError> {
    let spoke = f.find_fan_witness()?.ok_or(TestSetError::ContinuousFunction)?;
    let certificate = f.in_witness_family(&SequenceDescriptor::canonical(spoke))?.certificate;
    Ok(FanWitness { spoke, certificate })
}

/// A point different from `x`: the next depth on its spoke, or `x(1,1)` for the apex.
pub fn successor_point(x: &FanPoint) -> FanPoint {
    match *x {
        FanPoint::Apex => FanPoint::at(1, 1),
        FanPoint::Node { spoke, depth } => FanPoint::at(spoke, depth + 1),
    }
}

fn changed_prefix(a: &SequenceDescriptor, n: u64) -> Vec<FanPoint> {
    let mut p: Vec<FanPoint> = a.terms(1..=n).collect();
    p.push(successor_point(&a.term(n + 1)));
    p
}

fn prefix_witness(a: &SequenceDescriptor, n: u64, spoke: u64) -> SequenceDescriptor {
    SequenceDescriptor::new(changed_prefix(a, n), vec![Channel::run(spoke, n + 2, 1)]).expect("valid witness")
}

/// `a` with term `n + 1` replaced by [`successor_point`]; a member of `B_n(a)`.
pub fn construct_bn_witness(a: &SequenceDescriptor, n: u64) -> Result<SequenceDescriptor, TestSetError> {
    if !a.converges_to_apex().converges {
        return Err(TestSetError::NotConvergent);
    }
    Ok(a.modify_prefix(&changed_prefix(a, n)).0)
}

/// A member of `B_n(a) ∩ D(f)`: `a_1..a_n`, a changed term, then the tail of the
/// least canonical witness of `f`.
pub fn construct_bn_df_witness(
    a: &SequenceDescriptor,
    n: u64,
    f: &FunctionDescriptor,
) -> Result<SequenceDescriptor, TestSetError> {
    if !a.converges_to_apex().converges {
        return Err(TestSetError::NotConvergent);
    }
    let m = find_fan_witness(f)?.spoke;
    Ok(prefix_witness(a, n, m))
}

/// Removing `T_n` from the canonical family destroys the test-set property.
pub fn minimality_refutation(n: u64, sample_spokes: &BTreeSet<u64>) -> SuiteReport {
    let mut r = SuiteReport::new("minimality");
    let bn = DefinableSet::spoke(n);
    let h = FunctionDescriptor::indicator(bn.clone(), Rat::one());
    let own = h.in_witness_family(&SequenceDescriptor::canonical(n)).expect("canonical converges");
    r.push(
        CheckRecord::new(
            format!("minimality/n{n:03}/witness"),
            "h = 1_{B_n} has T_n ∈ D(h)",
            own.member,
            format!("h(T_{n}(k)) = 1 for all k"),
        )
        .with_certificate(&own.certificate),
    );
    for &j in sample_spokes.iter().filter(|&&j| j != n) {
        let other = h.in_witness_family(&SequenceDescriptor::canonical(j)).expect("canonical converges");
        let meet = DefinableSet::spoke(j).intersection_class(&bn);
        let ok = !other.member && meet.class == Cardinality::Finite(0);
        r.push(
            CheckRecord::new(
                format!("minimality/n{n:03}/spoke-{j:03}"),
                "T_j ∉ D(h) for j ≠ n since B_j ∩ B_n = ∅",
                ok,
                format!("h(T_{j}(k)) = 0 for all k"),
            )
            .with_certificate(&meet),
        );
    }
    let corpus = FunctionCorpus::from_functions(vec![h]);
    let without = is_test_set_relative(&TestSetDescriptor::canonical_without([n]), &corpus).expect("decidable");
    let with = is_test_set_relative(&TestSetDescriptor::canonical_fan(), &corpus).expect("decidable");
    r.push(
        CheckRecord::new(
            format!("minimality/n{n:03}/removal"),
            "the canonical family without T_n is not a test set",
            !without.pass && without.first_failure() == Some(0) && with.pass,
            "fails on 1_{B_n}; the full canonical family passes",
        )
        .with_certificate(&without),
    );
    r.note(RELATIVIZATION_NOTE);
    r.finish()
}

/// Exact disagreement index of a probe against `a` (never a bounded answer).
fn exact_disagreement(t: &SequenceDescriptor, a: &SequenceDescriptor) -> Disagreement {
    t.first_disagreement(a, t.equality_horizon(a))
}

/// The descending chain `B_1(a) ⊇ B_2(a) ⊇ ...` of test sets with empty intersection.
pub fn bad_chain_report(
    a: &SequenceDescriptor,
    big_n: u64,
    corpus: &FunctionCorpus,
    probes: &[SequenceDescriptor],
) -> Result<SuiteReport, TestSetError> {
    if !a.converges_to_apex().converges {
        return Err(TestSetError::NotConvergent);
    }
    let mut r = SuiteReport::new("bad-chain");
    for n in 1..=big_n {
        let next = construct_bn_witness(a, n + 1)?;
        let bn = TestSetDescriptor::b_n(a.clone(), n);
        r.push(CheckRecord::new(
            format!("bad-chain/n{n:04}/i-nested"),
            "B_{n+1}(a) ⊆ B_n(a)",
            bn.member_of(&next) && TestSetDescriptor::b_n(a.clone(), n + 1).member_of(&next),
            "agreement on 1..n+1 implies agreement on 1..n; the B_{n+1} witness lies in B_n",
        ));
        let w = construct_bn_witness(a, n)?;
        r.push(
            CheckRecord::new(
                format!("bad-chain/n{n:04}/ii-nonempty"),
                "B_n(a) ≠ ∅",
                bn.member_of(&w) && w.converges_to_apex().converges,
                format!("term {} changed to {}", n + 1, w.term(n + 1)),
            )
            .with_certificate(&w),
        );
        let v = is_test_set_relative(&bn, corpus)?;
        let validated = v.outcomes.iter().all(|o| match &o.outcome {
            Outcome::Witnessed { sequence, .. } => {
                bn.member_of(sequence)
                    && corpus.functions[o.function as usize].in_witness_family(sequence).is_ok_and(|m| m.member)
            }
            Outcome::Continuous => true,
            Outcome::Unwitnessed { .. } => false,
        });
        r.push(CheckRecord::new(
            format!("bad-chain/n{n:04}/iii-test-set"),
            "B_n(a) ∩ D(f) ≠ ∅ for every corpus f",
            v.pass && validated,
            format!("{} corpus functions checked", corpus.functions.len()),
        ));
    }
    let b1 = TestSetDescriptor::b_n(a.clone(), 1);
    r.push(CheckRecord::new("bad-chain/iv-reference", "a ∉ B_1(a)", !b1.member_of(a), "a is removed from every B_n(a)"));
    for (i, t) in probes.iter().enumerate() {
        let (ok, detail) = match exact_disagreement(t, a) {
            Disagreement::Equal => (!b1.member_of(t), "probe equals a, excluded from B_1".to_string()),
            Disagreement::At(k) => (
                !TestSetDescriptor::b_n(a.clone(), k).member_of(t),
                format!("first disagreement at {k}, so T ∉ B_{k}"),
            ),
            Disagreement::AgreeUpTo(b) => (false, format!("no decision up to {b}")),
        };
        r.push(CheckRecord::new(format!("bad-chain/iv-probe-{i:04}"), "⋂_n B_n(a) = ∅", ok, detail));
    }
    r.note(RELATIVIZATION_NOTE);
    r.note(FINITE_STAGE_NOTE);
    Ok(r.finish())
}

/// Canonical part of a chain entry's normal form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum CanonPart {
    /// `{T_j : j ∉ E}`
    Cofinite(BTreeSet<u64>),
    /// `{T_j : j ∈ I}`
    Finite(BTreeSet<u64>),
}

/// `canon ∪ extras`, with every extra non-canonical and extras pairwise distinct.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyNormalForm {
    pub canon: CanonPart,
    pub extras: Vec<SequenceDescriptor>,
}

impl FamilyNormalForm {
    fn from_entry(a: &TestSetDescriptor, index: usize) -> Result<Self, TestSetError> {
        let (mut canon, list) = match a {
            TestSetDescriptor::ExplicitFinite(list) => (CanonPart::Finite(BTreeSet::new()), list),
            TestSetDescriptor::CanonicalFan { excluded, extras } => (CanonPart::Cofinite(excluded.clone()), extras),
            TestSetDescriptor::PrefixFamily { .. } => return Err(TestSetError::UnsupportedChainEntry(index)),
        };
        let mut extras: Vec<SequenceDescriptor> = Vec::new();
        for t in list {
            match (t.canonical_index(), &mut canon) {
                (Some(j), CanonPart::Finite(i)) => {
                    i.insert(j);
                }
                (Some(j), CanonPart::Cofinite(e)) => {
                    e.remove(&j);
                }
                (None, _) => {
                    if !extras.iter().any(|s| s.same_sequence(t)) {
                        extras.push(t.clone());
                    }
                }
            }
        }
        Ok(FamilyNormalForm { canon, extras })
    }

    fn contains_extra(&self, t: &SequenceDescriptor) -> bool {
        self.extras.iter().any(|s| s.same_sequence(t))
    }

    pub fn includes(&self, other: &FamilyNormalForm) -> bool {
        let canon = match (&self.canon, &other.canon) {
            (CanonPart::Cofinite(e), CanonPart::Cofinite(e2)) => e.is_subset(e2),
            (CanonPart::Cofinite(e), CanonPart::Finite(i)) => i.is_disjoint(e),
            (CanonPart::Finite(_), CanonPart::Cofinite(_)) => false,
            (CanonPart::Finite(i), CanonPart::Finite(i2)) => i2.is_subset(i),
        };
        canon && other.extras.iter().all(|t| self.contains_extra(t))
    }

    pub fn intersect(&self, other: &FamilyNormalForm) -> FamilyNormalForm {
        let canon = match (&self.canon, &other.canon) {
            (CanonPart::Cofinite(a), CanonPart::Cofinite(b)) => CanonPart::Cofinite(a.union(b).copied().collect()),
            (CanonPart::Cofinite(e), CanonPart::Finite(i)) | (CanonPart::Finite(i), CanonPart::Cofinite(e)) => {
                CanonPart::Finite(i.difference(e).copied().collect())
            }
            (CanonPart::Finite(a), CanonPart::Finite(b)) => CanonPart::Finite(a.intersection(b).copied().collect()),
        };
        let extras = self.extras.iter().filter(|t| other.contains_extra(t)).cloned().collect();
        FamilyNormalForm { canon, extras }
    }

    pub fn same_family(&self, other: &FamilyNormalForm) -> bool {
        self.includes(other) && other.includes(self)
    }
}

/// Verifies that a finite chain through the minimal marker intersects to it.
pub fn chain_intersection_check(
    chain: &[TestSetDescriptor],
    marker: &TestSetDescriptor,
    corpus: &FunctionCorpus,
) -> Result<SuiteReport, TestSetError> {
    let forms = chain
        .iter()
        .enumerate()
        .map(|(i, a)| FamilyNormalForm::from_entry(a, i))
        .collect::<Result<Vec<_>, _>>()?;
    let m = FamilyNormalForm::from_entry(marker, chain.len())?;
    if !forms.iter().any(|f| f.same_family(&m)) {
        return Err(TestSetError::MarkerNotInChain);
    }
    let mut r = SuiteReport::new("good-chain");
    for (i, f) in forms.iter().enumerate() {
        r.push(CheckRecord::new(
            format!("good-chain/entry-{i:03}/contains-marker"),
            "every chain member contains A_min",
            f.includes(&m),
            "normal-form inclusion",
        ));
        if let Some(next) = forms.get(i + 1) {
            r.push(CheckRecord::new(
                format!("good-chain/entry-{i:03}/descends"),
                "the chain is descending",
                f.includes(next),
                format!("entry {i} ⊇ entry {}", i + 1),
            ));
        }
    }
    let meet = forms.iter().skip(1).fold(forms[0].clone(), |acc, f| acc.intersect(f));
    r.push(
        CheckRecord::new(
            "good-chain/intersection",
            "⋂C = A_min",
            meet.same_family(&m),
            "pointwise intersection of the normal forms",
        )
        .with_certificate(&meet),
    );
    let v = is_test_set_relative(marker, corpus)?;
    r.push(CheckRecord::new(
        "good-chain/marker-test-set",
        "A_min is a test set, so the chain is good",
        v.pass,
        format!("{} corpus functions checked", corpus.functions.len()),
    ));
    r.note(RELATIVIZATION_NOTE);
    r.note(FINITE_STAGE_NOTE);
    Ok(r.finish())
}

/// `{B_n}` is almost disjoint and meets every corpus set of `I_P` infinitely.
pub fn mad_verify(spoke_bound: u64, ip_corpus: &[DefinableSet]) -> Result<SuiteReport, TestSetError> {
    if let Some(i) = ip_corpus.iter().position(|m| !m.in_ip().in_ip) {
        return Err(TestSetError::CorpusNotInIp(i));
    }
    let mut r = SuiteReport::new("mad");
    for i in 1..=spoke_bound {
        let ok = (i + 1..=spoke_bound)
            .all(|j| DefinableSet::spoke(i).intersection_class(&DefinableSet::spoke(j)).class == Cardinality::Finite(0));
        r.push(CheckRecord::new(
            format!("mad/pairwise/spoke-{i:03}"),
            "B_i ∩ B_j = ∅ for i < j",
            ok,
            format!("against spokes {}..={spoke_bound}", i + 1),
        ));
    }
    for (i, m) in ip_corpus.iter().enumerate() {
        let hit = m
            .spoke_parts()
            .iter()
            .find(|(_, p)| p.is_infinite())
            .map(|(n, _)| *n)
            .map(|n| (n, m.intersection_class(&DefinableSet::spoke(n))));
        let (ok, detail) = match &hit {
            Some((n, c)) => (c.class.is_infinite(), format!("|M ∩ B_{n}| = ∞")),
            None => (false, "no spoke meets M infinitely".to_string()),
        };
        let mut rec = CheckRecord::new(format!("mad/maximal/set-{i:04}"), "every M ∈ I_P meets some B_n infinitely", ok, detail);
        if let Some((_, c)) = &hit {
            rec = rec.with_certificate(c);
        }
        r.push(rec);
    }
    Ok(r.finish())
}

/// Adds pool members in order whenever they are almost disjoint from everything kept.
pub fn greedy_ad_extend(family: &[DefinableSet], pool: &[DefinableSet]) -> Result<Vec<DefinableSet>, TestSetError> {
    for i in 0..family.len() {
        for j in i + 1..family.len() {
            if !family[i].almost_disjoint(&family[j]) {
                return Err(TestSetError::FamilyNotAd(i, j));
            }
        }
    }
    let mut out = family.to_vec();
    for m in pool {
        if out.iter().all(|f| f.almost_disjoint(m)) {
            out.push(m.clone());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sets::RowComponent;

    fn corpus(fs: Vec<FunctionDescriptor>) -> FunctionCorpus {
        FunctionCorpus::from_functions(fs)
    }

    fn one_b(n: u64) -> FunctionDescriptor {
        FunctionDescriptor::indicator(DefinableSet::spoke(n), Rat::one())
    }

    #[test]
    fn membership_examples() {
        let a = SequenceDescriptor::canonical(1);
        assert!(!TestSetDescriptor::b_n(a.clone(), 3).member_of(&a));
        assert!(TestSetDescriptor::a_n(a.clone(), 3).member_of(&a));
        let w = construct_bn_witness(&a, 3).unwrap();
        assert!(TestSetDescriptor::b_n(a.clone(), 3).member_of(&w));
        assert!(TestSetDescriptor::canonical_fan().member_of(&SequenceDescriptor::canonical(9)));
        assert!(!TestSetDescriptor::canonical_without([9]).member_of(&SequenceDescriptor::canonical(9)));
        let disguised = SequenceDescriptor::new(vec![FanPoint::at(4, 1)], vec![Channel::run(4, 2, 1)]).unwrap();
        assert!(TestSetDescriptor::canonical_fan().member_of(&disguised));
    }

    #[test]
    fn test_set_examples() {
        let mut fs = vec![FunctionDescriptor::apex_indicator()];
        fs.extend((1..=16).map(one_b));
        let c = corpus(fs.clone());
        assert!(is_test_set_relative(&TestSetDescriptor::canonical_fan(), &c).unwrap().pass);
        let v = is_test_set_relative(&TestSetDescriptor::canonical_without([3]), &c).unwrap();
        assert!(!v.pass);
        assert_eq!(v.first_failure(), Some(3));
        let c = corpus(vec![FunctionDescriptor::constant(Rat::one())]);
        assert!(is_test_set_relative(&TestSetDescriptor::ExplicitFinite(vec![]), &c).unwrap().pass);
    }

    #[test]
    fn fan_witness_examples() {
        assert_eq!(find_fan_witness(&one_b(7)).unwrap().spoke, 7);
        assert!(FunctionDescriptor::apex_indicator().in_witness_family(&SequenceDescriptor::canonical(7)).unwrap().member);
        assert_eq!(find_fan_witness(&FunctionDescriptor::apex_indicator()).unwrap().spoke, 1);
        assert_eq!(find_fan_witness(&FunctionDescriptor::constant(Rat::zero())), Err(TestSetError::ContinuousFunction));
    }

    #[test]
    fn minimality_examples() {
        let r = minimality_refutation(3, &(1..=10).collect());
        assert!(r.passed());
        assert_eq!(r.checks.len(), 11);
        assert!(minimality_refutation(1, &[1].into_iter().collect()).passed());
        assert_eq!(minimality_refutation(5, &[5].into_iter().collect()).checks.len(), 2);
    }

    #[test]
    fn bn_witness_examples() {
        let t = construct_bn_witness(&SequenceDescriptor::canonical(1), 3).unwrap();
        assert_eq!(t.term(4), FanPoint::at(1, 5));
        assert!((1..200).filter(|&k| k != 4).all(|k| t.term(k) == FanPoint::at(1, k)));
        assert!(t.converges_to_apex().converges);
        let t = construct_bn_witness(&SequenceDescriptor::canonical(2), 1).unwrap();
        assert_eq!(t.term(2), FanPoint::at(2, 3));
        let bad = SequenceDescriptor::constant(FanPoint::at(1, 1));
        assert_eq!(construct_bn_witness(&bad, 1), Err(TestSetError::NotConvergent));
    }

    #[test]
    fn bn_df_witness_examples() {
        let a = SequenceDescriptor::canonical(1);
        let f = one_b(2);
        let t = construct_bn_df_witness(&a, 3, &f).unwrap();
        assert_eq!(t.prefix(), &[FanPoint::at(1, 1), FanPoint::at(1, 2), FanPoint::at(1, 3), FanPoint::at(1, 5)]);
        assert_eq!(t.channels(), &[Channel::run(2, 5, 1)]);
        assert!(TestSetDescriptor::b_n(a.clone(), 3).member_of(&t));
        assert!(f.in_witness_family(&t).unwrap().member);
        let g = FunctionDescriptor::apex_indicator();
        let t = construct_bn_df_witness(&a, 1, &g).unwrap();
        assert_eq!(t.channels(), &[Channel::run(1, 3, 1)]);
        assert!(g.in_witness_family(&t).unwrap().member && TestSetDescriptor::b_n(a.clone(), 1).member_of(&t));
        assert_eq!(
            construct_bn_df_witness(&a, 1, &FunctionDescriptor::constant(Rat::one())),
            Err(TestSetError::ContinuousFunction)
        );
    }

    #[test]
    fn bad_chain_small() {
        let a = SequenceDescriptor::canonical(1);
        let c = corpus(vec![FunctionDescriptor::apex_indicator(), one_b(1), one_b(2)]);
        let probes = vec![a.clone(), SequenceDescriptor::canonical(2), construct_bn_witness(&a, 6).unwrap()];
        let r = bad_chain_report(&a, 8, &c, &probes).unwrap();
        assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
        assert!(bad_chain_report(&a, 1, &c, &[]).unwrap().passed());
    }

    #[test]
    fn chain_examples() {
        let c = corpus(vec![FunctionDescriptor::apex_indicator(), one_b(1)]);
        let extra = SequenceDescriptor::new(vec![FanPoint::at(2, 5)], vec![Channel::run(1, 2, 1)]).unwrap();
        let top = TestSetDescriptor::CanonicalFan { excluded: BTreeSet::new(), extras: vec![extra] };
        let marker = TestSetDescriptor::canonical_fan();
        let r = chain_intersection_check(&[top, marker.clone()], &marker, &c).unwrap();
        assert!(r.passed());
        assert!(chain_intersection_check(std::slice::from_ref(&marker), &marker, &c).unwrap().passed());
        let other = TestSetDescriptor::canonical_without([2]);
        assert_eq!(chain_intersection_check(&[other], &marker, &c), Err(TestSetError::MarkerNotInChain));
    }

    #[test]
    fn mad_examples() {
        let r = mad_verify(16, &[DefinableSet::spoke(5)]).unwrap();
        assert!(r.passed());
        let c = r.checks.iter().find(|c| c.id == "mad/maximal/set-0000").unwrap();
        assert!(c.detail.contains("B_5"));
        let row = DefinableSet::from_rows(vec![RowComponent::new(1, 0, 1).unwrap()]);
        assert_eq!(mad_verify(4, &[row]), Err(TestSetError::CorpusNotInIp(0)));
    }

    #[test]
    fn greedy_examples() {
        let tail5 = DefinableSet::tail(1, 5, 1, []).unwrap();
        let out = greedy_ad_extend(&[DefinableSet::spoke(1)], &[DefinableSet::spoke(2), tail5]).unwrap();
        assert_eq!(out, vec![DefinableSet::spoke(1), DefinableSet::spoke(2)]);
        assert!(greedy_ad_extend(&[], &[]).unwrap().is_empty());
        assert_eq!(
            greedy_ad_extend(&[DefinableSet::spoke(1), DefinableSet::spoke(1)], &[]),
            Err(TestSetError::FamilyNotAd(0, 1))
        );
    }

    #[test]
    fn json_shape() {
        let t = TestSetDescriptor::b_n(SequenceDescriptor::canonical(1), 2);
        let s = serde_json::to_string(&t).unwrap();
        assert!(s.starts_with(r#"{"prefixFamily":{"reference":"#), "{s}");
        assert!(s.contains(r#""removeReference":true"#));
        assert_eq!(serde_json::from_str::<TestSetDescriptor>(&s).unwrap(), t);
        let c: TestSetDescriptor = serde_json::from_str(r#"{"canonicalFan":{"excluded":[3]}}"#).unwrap();
        assert_eq!(c, TestSetDescriptor::canonical_without([3]));
        let e: TestSetDescriptor = serde_json::from_str(r#"{"explicit":[]}"#).unwrap();
        assert_eq!(e, TestSetDescriptor::ExplicitFinite(vec![]));
    }
}
