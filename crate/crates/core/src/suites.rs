//! Named verification suites.
//!
//! Every suite first generates its instances sequentially from the seed, then
//! evaluates the independent checks through [`crate::par`], and finally sorts
//! the checks by identifier, so reports are byte-identical across modes.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::corpus::{self, rng_for, DEFAULT_SEED};
use crate::fan::{self, accumulates_at_apex, FanPoint};
use crate::functions::{FunctionDescriptor, FunctionError, WitnessCertificate};
use crate::oracle::{self, IpVerdict};
use crate::par::{self, Mode};
use crate::rational::Rat;
use crate::realline::{self, RealFunction, RealSeqGen, WitnessVerdict};
use crate::report::{CheckRecord, SuiteReport};
use crate::sequences::{Disagreement, SequenceDescriptor};
use crate::sets::InIpCertificate;
use crate::testsets::{self, FunctionCorpus, TestSetDescriptor, RELATIVIZATION_NOTE};

pub const SUITES: [&str; 11] = [
    "kernel",
    "finite-modification",
    "prefix-chain",
    "bad-chain",
    "ip-characterization",
    "mad",
    "amin-testset",
    "minimality",
    "good-chain",
    "cardinality-evidence",
    "realline-example",
];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SuiteError {
    #[error("unknown suite \"{0}\"; expected one of: {list}", list = SUITES.join(", "))]
    UnknownSuite(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SuiteConfig {
    pub suite: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_spoke: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_depth: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probes: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

impl SuiteConfig {
    pub fn named(suite: &str) -> Self {
        SuiteConfig { suite: suite.to_string(), ..Default::default() }
    }

    fn validate(&self) -> Result<(), SuiteError> {
        if !SUITES.contains(&self.suite.as_str()) {
            return Err(SuiteError::UnknownSuite(self.suite.clone()));
        }
        for (name, v) in [("max-spoke", self.max_spoke), ("max-depth", self.max_depth), ("probes", self.probes)] {
            if v == Some(0) {
                return Err(SuiteError::InvalidConfig(format!("{name} must be at least 1")));
            }
        }
        if let Some(t) = self.tolerance {
            if !(t > 0.0 && t.is_finite()) {
                return Err(SuiteError::InvalidConfig("tolerance must be positive".into()));
            }
        }
        Ok(())
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }
}

/// Resolved bounds of one run, echoed into the report.
#[derive(Clone, Copy, Debug)]
struct Bounds {
    max_spoke: u64,
    max_depth: u64,
    probes: u64,
    seed: u64,
    tolerance: f64,
    mode: Mode,
}

impl Bounds {
    /// Echo of the bounds that `suite` reads; `0` marks an unused bound.
    fn echo(&self, suite: &str, used: (u64, u64, u64)) -> serde_json::Value {
        let mut m = serde_json::Map::new();
        m.insert("suite".into(), json!(suite));
        for (key, v, default) in [("maxSpoke", self.max_spoke, used.0), ("maxDepth", self.max_depth, used.1), ("probes", self.probes, used.2)] {
            if default > 0 {
                m.insert(key.into(), json!(v));
            }
        }
        m.insert("seed".into(), json!(self.seed));
        if suite == "realline-example" {
            m.insert("tolerance".into(), json!(self.tolerance));
        }
        serde_json::Value::Object(m)
    }
}

pub fn run_suite(config: &SuiteConfig) -> Result<SuiteReport, SuiteError> {
    run_suite_with(config, Mode::default())
}

pub fn run_suite_with(config: &SuiteConfig, mode: Mode) -> Result<SuiteReport, SuiteError> {
    config.validate()?;
    let used = match config.suite.as_str() {
        "kernel" => (64, 4096, 0),
        "finite-modification" => (16, 0, 1000),
        "prefix-chain" => (16, 20, 200),
        "bad-chain" => (16, 20, 100),
        "ip-characterization" => (oracle::TRUNC_SPOKES, oracle::TRUNC_DEPTH, 200),
        "mad" => (16, 0, 50),
        "amin-testset" => (16, 0, 0),
        "minimality" => (16, 0, 0),
        "good-chain" => (16, 0, 50),
        "cardinality-evidence" => (0, 10_000, 1000),
        _ => (0, 10_000, 0),
    };
    let (spokes, depth, probes) = (used.0.max(1), used.1.max(1), used.2.max(1));
    let b = Bounds {
        max_spoke: config.max_spoke.unwrap_or(spokes),
        max_depth: config.max_depth.unwrap_or(depth),
        probes: config.probes.unwrap_or(probes),
        seed: config.seed(),
        tolerance: config.tolerance.unwrap_or(1e-7),
        mode,
    };
    let mut report = match config.suite.as_str() {
        "kernel" => fan::kernel_certificate_with(b.max_spoke, b.max_depth, mode),
        "finite-modification" => finite_modification(&b),
        "prefix-chain" => prefix_chain(&b),
        "bad-chain" => bad_chain(&b),
        "ip-characterization" => ip_characterization(&b),
        "mad" => mad(&b),
        "amin-testset" => amin_testset(&b),
        "minimality" => minimality(&b),
        "good-chain" => good_chain(&b),
        "cardinality-evidence" => cardinality_evidence(&b),
        _ => realline_example(&b),
    };
    report.suite = config.suite.clone();
    report.seed = Some(b.seed);
    report.config = b.echo(&config.suite, used);
    Ok(report.finish())
}

fn corpus_for(b: &Bounds) -> FunctionCorpus {
    corpus::default_corpus(b.seed, b.max_spoke)
}

fn discontinuous(f: &FunctionDescriptor) -> bool {
    f.discontinuous_at_apex().map(|d| d.discontinuous).unwrap_or(false)
}

fn same_witness_verdict(
    a: &Result<crate::functions::WitnessMembership, FunctionError>,
    b: &Result<crate::functions::WitnessMembership, FunctionError>,
) -> bool {
    match (a, b) {
        (Ok(x), Ok(y)) => x.member == y.member,
        (Err(x), Err(y)) => x == y,
        _ => false,
    }
}

fn finite_modification(b: &Bounds) -> SuiteReport {
    let corpus = corpus_for(b);
    let mut rng = rng_for(b.seed, "finite-modification");
    let cross = b.probes.min(100) as usize;
    type Triple = (SequenceDescriptor, Vec<FanPoint>, usize);
    let triples: Vec<Triple> = (0..b.probes)
        .map(|_| {
            let t = corpus::random_sequence(&mut rng, true);
            let p = corpus::random_prefix(&mut rng, 10);
            let f = rand::Rng::gen_range(&mut rng, 0..corpus.functions.len());
            (t, p, f)
        })
        .collect();
    let indexed: Vec<(usize, &Triple)> = triples.iter().enumerate().collect();
    let checks = par::map(b.mode, &indexed, |&(i, (t, p, fi))| {
        let f = &corpus.functions[*fi];
        let (s, n) = t.modify_prefix(p);
        let prefix_ok = p.iter().enumerate().all(|(k, x)| s.term(k as u64 + 1) == *x);
        let tail_ok = (n..n + 200).all(|k| s.term(k) == t.term(k));
        let ct = t.converges_to_apex().converges;
        let cs = s.converges_to_apex().converges;
        let wt = f.in_witness_family(t);
        let ws = f.in_witness_family(&s);
        let mut ok = prefix_ok && tail_ok && ct == cs && same_witness_verdict(&wt, &ws);
        let mut detail = format!("N = {n}, converges = {ct}, in D(f) = {}", wt.as_ref().map(|w| w.member.to_string()).unwrap_or_else(|_| "not in S_P".into()));
        if i < cross {
            let oracle_conv = oracle::converges_late(t) == ct && oracle::converges_late(&s) == cs;
            let oracle_wit = !ct
                || (oracle::in_witness_family_late(f, t) == wt.as_ref().is_ok_and(|w| w.member)
                    && oracle::in_witness_family_late(f, &s) == ws.as_ref().is_ok_and(|w| w.member));
            ok &= oracle_conv && oracle_wit;
            detail.push_str(if oracle_conv && oracle_wit { "; oracle agrees" } else { "; oracle disagrees" });
        }
        CheckRecord::new(
            format!("finite-modification/triple-{i:04}"),
            "finite modification preserves convergence and membership in D(f)",
            ok,
            detail,
        )
    });
    let mut r = SuiteReport::new("finite-modification");
    checks.into_iter().for_each(|c| r.push(c));
    r.metric("triples", b.probes);
    r.metric("oracle_cross_checks", cross as u64);
    r.note(RELATIVIZATION_NOTE);
    r
}

fn probes_around(b: &Bounds, a: &SequenceDescriptor, stream: &str, count: u64) -> Vec<SequenceDescriptor> {
    let mut rng = rng_for(b.seed, stream);
    (0..count).map(|_| corpus::random_probe(&mut rng, a)).collect()
}

fn corpus_size_check(r: &mut SuiteReport, suite: &str, corpus: &FunctionCorpus) {
    let n = corpus.functions.iter().filter(|f| discontinuous(f)).count() as u64;
    r.push(CheckRecord::new(
        format!("{suite}/corpus"),
        "the default corpus carries at least 40 discontinuous functions",
        n >= 40,
        format!("{n} of {} corpus functions are discontinuous at P", corpus.functions.len()),
    ));
    r.metric("discontinuous_functions", n);
}

fn prefix_chain(b: &Bounds) -> SuiteReport {
    let a = SequenceDescriptor::canonical(1);
    let corpus = corpus_for(b);
    let probes = probes_around(b, &a, "prefix-chain", b.probes);
    let big_n = b.max_depth;
    let empty = &probes[..probes.len().min(100)];
    let mut r = testsets::bad_chain_report(&a, big_n, &corpus, empty).expect("T_1 converges");
    for c in &mut r.checks {
        c.id = c.id.replacen("bad-chain", "prefix-chain", 1);
    }
    let indexed: Vec<(usize, &SequenceDescriptor)> = probes.iter().enumerate().collect();
    let checks = par::map(b.mode, &indexed, |&(i, t)| {
        let members: Vec<bool> = (1..=big_n + 1).map(|n| TestSetDescriptor::b_n(a.clone(), n).member_of(t)).collect();
        let bad = (0..big_n as usize).find(|&n| members[n + 1] && !members[n]);
        let deepest = members.iter().rposition(|&m| m).map_or(0, |n| n + 1);
        CheckRecord::new(
            format!("prefix-chain/monotone/probe-{i:04}"),
            "T ∈ B_{n+1}(a) implies T ∈ B_n(a)",
            bad.is_none(),
            match bad {
                None => format!("member of B_1..B_{deepest}"),
                Some(n) => format!("in B_{} but not B_{}", n + 2, n + 1),
            },
        )
    });
    checks.into_iter().for_each(|c| r.push(c));
    corpus_size_check(&mut r, "prefix-chain", &corpus);
    r.metric("probes", b.probes);
    r.metric("empty_intersection_probes", empty.len() as u64);
    r
}

fn bad_chain(b: &Bounds) -> SuiteReport {
    let a = SequenceDescriptor::canonical(1);
    let corpus = corpus_for(b);
    let probes = probes_around(b, &a, "bad-chain", b.probes);
    let mut r = testsets::bad_chain_report(&a, b.max_depth, &corpus, &probes).expect("T_1 converges");
    corpus_size_check(&mut r, "bad-chain", &corpus);
    r.metric("probes", b.probes);
    r
}

fn ip_characterization(b: &Bounds) -> SuiteReport {
    let sets = corpus::set_corpus(b.seed, b.probes as usize);
    let indexed: Vec<(usize, &crate::sets::DefinableSet)> = sets.iter().enumerate().collect();
    let checks = par::map(b.mode, &indexed, |&(i, m)| {
        let decision = m.in_ip();
        let verdict = oracle::classify_ip(m);
        let pts = oracle::truncation_points(m, b.max_spoke, b.max_depth);
        let (ok, detail) = match (&decision.certificate, verdict) {
            (InIpCertificate::Finite { count }, IpVerdict::Finite) => {
                (*count == pts.len() as u64, format!("finite with {count} points"))
            }
            (InIpCertificate::Escape { neighborhood, row }, IpVerdict::UnboundedSpokes) => {
                let row_escapes = (0..100).all(|k| {
                    let x = row.point(k);
                    m.member(&x) && !neighborhood.contains(&x)
                });
                let found = oracle::escaping_points(m, neighborhood, 100).len();
                (row_escapes && found == 100, format!("100 row points escape U; oracle found {found} points of M outside U"))
            }
            (InIpCertificate::FiniteSupport { spokes, .. }, IpVerdict::OnFinitelyManySpokes) => {
                let seen: BTreeSet<u64> = pts.iter().map(|&(n, _)| n).collect();
                let listed: BTreeSet<u64> = spokes.iter().copied().collect();
                (decision.in_ip && seen == listed, format!("in I_P, supported on spokes {spokes:?}"))
            }
            (c, v) => (false, format!("decision {c:?} disagrees with oracle {v:?}")),
        };
        let acc = accumulates_at_apex(m).accumulates;
        let acc_ok = acc == (verdict == IpVerdict::OnFinitelyManySpokes || m.spoke_parts().values().any(|p| p.is_infinite()));
        CheckRecord::new(
            format!("ip-characterization/set-{i:04}"),
            "M ∈ I_P iff M is infinite and lies in finitely many spokes",
            ok && acc_ok,
            detail,
        )
        .with_certificate(&decision)
    });
    let mut r = SuiteReport::new("ip-characterization");
    let rows = sets.iter().filter(|m| !m.rows().is_empty()).count() as u64;
    let finite = sets.iter().filter(|m| !m.cardinality_class().is_infinite()).count() as u64;
    let need = (sets.len() as u64 / 10).max(1);
    r.push(CheckRecord::new(
        "ip-characterization/corpus",
        "at least a tenth of the corpus are row sets, and a tenth finite",
        rows >= need && finite >= need,
        format!("{} sets, {rows} with rows, {finite} finite", sets.len()),
    ));
    checks.into_iter().for_each(|c| r.push(c));
    r.metric("sets", sets.len() as u64);
    r.metric("row_sets", rows);
    r.metric("finite_sets", finite);
    r
}

fn mad(b: &Bounds) -> SuiteReport {
    let ip = corpus::ip_corpus(b.seed, b.probes as usize, b.max_spoke);
    let mut r = testsets::mad_verify(b.max_spoke, &ip).expect("generated sets are in I_P");
    let mut pool: Vec<_> = (1..=b.max_spoke).map(crate::sets::DefinableSet::spoke).collect();
    pool.extend(ip.iter().cloned());
    let out = testsets::greedy_ad_extend(&[], &pool).expect("empty family");
    let pairwise = (0..out.len()).all(|i| (i + 1..out.len()).all(|j| out[i].almost_disjoint(&out[j])));
    let spokes_kept = (1..=b.max_spoke).all(|n| out.contains(&crate::sets::DefinableSet::spoke(n)));
    r.push(CheckRecord::new(
        "mad/greedy-extension",
        "greedy extension stays pairwise almost disjoint",
        pairwise && spokes_kept,
        format!("kept {} of {} pool sets", out.len(), pool.len()),
    ));
    r.metric("ip_sets", ip.len() as u64);
    r
}

fn amin_testset(b: &Bounds) -> SuiteReport {
    let corpus = corpus_for(b);
    let indexed: Vec<(usize, &FunctionDescriptor)> = corpus.functions.iter().enumerate().collect();
    let checks = par::map(b.mode, &indexed, |&(i, f)| {
        let id = format!("amin-testset/function-{i:03}");
        if discontinuous(f) {
            match testsets::find_fan_witness(f) {
                Ok(w) => {
                    let t = SequenceDescriptor::canonical(w.spoke);
                    let decided = f.in_witness_family(&t).is_ok_and(|m| m.member);
                    let v0 = f.apex_value();
                    let cert_ok = match &w.certificate {
                        WitnessCertificate::Recurring { epsilon, .. } => {
                            w.certificate.witness_indices(100).iter().all(|&k| f.eval(&t.term(k)).gap(v0) >= *epsilon)
                        }
                        WitnessCertificate::Settled { .. } => false,
                    };
                    let late = oracle::in_witness_family_late(f, &t) && oracle::spoke_deviates_deep(f, w.spoke);
                    CheckRecord::new(
                        id,
                        "A_min meets D(f) at the canonical sequence of a spoke",
                        decided && cert_ok && late,
                        format!("T_{} ∈ D(f)", w.spoke),
                    )
                    .with_certificate(&w)
                }
                Err(e) => CheckRecord::new(id, "A_min meets D(f)", false, e.to_string()),
            }
        } else {
            let none = testsets::witness_spokes(f).is_ok_and(|(s, beyond)| s.is_empty() && !beyond);
            let oracle_none = (1..=f.scan_bound() + 2).all(|n| !oracle::spoke_deviates_deep(f, n));
            CheckRecord::new(
                id,
                "continuous functions have no canonical witness",
                none && oracle_none,
                "continuous at P; no spoke deviates",
            )
        }
    });
    let mut r = SuiteReport::new("amin-testset");
    checks.into_iter().for_each(|c| r.push(c));
    let v = testsets::is_test_set_relative(&TestSetDescriptor::canonical_fan(), &corpus).expect("decidable");
    r.push(CheckRecord::new(
        "amin-testset/canonical-family",
        "A_min is a test set",
        v.pass,
        format!("{} corpus functions", corpus.functions.len()),
    ));
    corpus_size_check(&mut r, "amin-testset", &corpus);
    r.note(RELATIVIZATION_NOTE);
    r
}

fn minimality(b: &Bounds) -> SuiteReport {
    let corpus = corpus_for(b);
    let sample: BTreeSet<u64> = (1..=b.max_spoke).collect();
    let ns: Vec<u64> = sample.iter().copied().collect();
    let reports = par::map(b.mode, &ns, |&n| {
        let mut r = testsets::minimality_refutation(n, &sample);
        let h = FunctionDescriptor::indicator(crate::sets::DefinableSet::spoke(n), Rat::one());
        let only_n = testsets::witness_spokes(&h).is_ok_and(|(s, beyond)| s == vec![n] && !beyond);
        r.push(CheckRecord::new(
            format!("minimality/n{n:03}/all-spokes"),
            "T_n is the only canonical sequence in D(1_{B_n})",
            only_n,
            "every other spoke is disjoint from B_n, so h vanishes along it",
        ));
        let mut extended = corpus.clone();
        extended.functions.push(h);
        let without = testsets::is_test_set_relative(&TestSetDescriptor::canonical_without([n]), &extended).expect("decidable");
        let with = testsets::is_test_set_relative(&TestSetDescriptor::canonical_fan(), &extended).expect("decidable");
        r.push(CheckRecord::new(
            format!("minimality/n{n:03}/removal-sensitivity"),
            "removing T_n fails against the corpus with 1_{B_n}; the full family passes",
            !without.pass && with.pass,
            match without.first_failure() {
                Some(i) => format!("without T_{n}, corpus function {i} has no witness"),
                None => format!("without T_{n}, every corpus function is still witnessed"),
            },
        ));
        r
    });
    let mut r = SuiteReport::new("minimality");
    reports.into_iter().for_each(|x| r.merge(x));
    r
}

fn good_chain(b: &Bounds) -> SuiteReport {
    let corpus = corpus_for(b);
    let mut rng = rng_for(b.seed, "good-chain");
    let chains: Vec<Vec<TestSetDescriptor>> = (0..b.probes).map(|_| corpus::random_chain(&mut rng)).collect();
    let marker = TestSetDescriptor::canonical_fan();
    let indexed: Vec<(usize, &Vec<TestSetDescriptor>)> = chains.iter().enumerate().collect();
    let reports = par::map(b.mode, &indexed, |&(i, chain)| {
        let mut r = testsets::chain_intersection_check(chain, &marker, &corpus).expect("marker ends each chain");
        for c in &mut r.checks {
            c.id = c.id.replacen("good-chain/", &format!("good-chain/chain-{i:03}/"), 1);
        }
        r
    });
    let mut r = SuiteReport::new("good-chain");
    reports.into_iter().for_each(|x| r.merge(x));
    r.metric("chains", b.probes);
    r
}

fn cardinality_evidence(b: &Bounds) -> SuiteReport {
    let mut rng = rng_for(b.seed, "cardinality-evidence");
    let mut pairs = Vec::new();
    while (pairs.len() as u64) < b.probes {
        let a = corpus::random_index_map(&mut rng);
        let c = corpus::random_index_map(&mut rng);
        let ta = SequenceDescriptor::build_spoke_subsequence(&a).expect("valid map");
        let tc = SequenceDescriptor::build_spoke_subsequence(&c).expect("valid map");
        if !ta.same_sequence(&tc) {
            pairs.push((a, c, ta, tc));
        }
    }
    let bound = b.max_depth;
    let indexed: Vec<(usize, &_)> = pairs.iter().enumerate().collect();
    let checks = par::map(b.mode, &indexed, |&(i, (a, c, ta, tc))| {
        let d = ta.first_disagreement(tc, bound);
        let (ok, detail) = match d {
            Disagreement::At(k) => {
                let brute = oracle::first_difference(ta, tc, k) == Some(k) && a.value(k) != c.value(k);
                let sane = ta.converges_to_apex().converges && ta.is_injective().injective;
                (brute && sane, format!("T^a and T^a' first differ at {k}"))
            }
            other => (false, format!("{other:?}")),
        };
        CheckRecord::new(
            format!("cardinality-evidence/pair-{i:04}"),
            "distinct increasing maps a give distinct sequences T^a",
            ok,
            detail,
        )
    });
    let mut r = SuiteReport::new("cardinality-evidence");
    checks.into_iter().for_each(|c| r.push(c));
    r.metric("pairs", b.probes);
    r.metric("bound", bound);
    r.note("the cardinal inequality itself (that the fan's test set is strictly smaller) is outside computational scope; this suite only exhibits the injection a ↦ T^a on sampled pairs");
    r
}

fn realline_example(b: &Bounds) -> SuiteReport {
    let depth = b.max_depth;
    let tol = b.tolerance;
    let t = RealSeqGen::peaks();
    let s = RealSeqGen::zeros();
    let f = RealFunction::SinReciprocal;
    let mut r = SuiteReport::new("realline-example");
    let vt = realline::sample_witness_check(&t, f, depth, Rat::new(1, 2), 1e-9);
    let dist_t = realline::max_distance_to(&t, f, depth, 1.0);
    let full = matches!(&vt, WitnessVerdict::Witness { indices, .. } if indices.len() as u64 == depth);
    r.push(
        CheckRecord::new(
            "realline/peaks-witness",
            "f(T_k) = 1 for T_k = 1/(2kπ + π/2)",
            full && dist_t <= tol,
            format!("max |f(T_k) - 1| = {dist_t:.3e} over k ≤ {depth}"),
        )
        .with_certificate(&json!({ "depth": depth, "maxDistanceToOne": dist_t, "tolerance": tol })),
    );
    let vs = realline::sample_witness_check(&s, f, depth, Rat::new(1, 2), 1e-9);
    let dist_s = realline::max_distance_to(&s, f, depth, 0.0);
    r.push(
        CheckRecord::new(
            "realline/zeros-no-witness",
            "f(S_k) = 0 for S_k = 1/(kπ)",
            matches!(vs, WitnessVerdict::NoneUpTo { .. }) && dist_s <= tol,
            format!("no witness up to depth {depth}; max |f(S_k)| = {dist_s:.3e}"),
        )
        .with_certificate(&vs),
    );
    let vz = realline::sample_witness_check(&t, RealFunction::Zero, depth, Rat::new(1, 2), 1e-9);
    r.push(CheckRecord::new(
        "realline/zero-function",
        "the zero function has no witness",
        matches!(vz, WitnessVerdict::NoneUpTo { .. }),
        format!("no witness up to depth {depth}"),
    ));
    let rows = realline::convergence_sample(&t, depth, &[Rat::new(1, 100), Rat::int(10)]);
    let ok = rows[0].absorption_index.is_some_and(|n| n <= 16) && rows[1].absorption_index == Some(1);
    r.push(
        CheckRecord::new("realline/convergence", "T_k → 0", ok, format!("{:?}", rows.iter().map(|x| x.absorption_index).collect::<Vec<_>>()))
            .with_certificate(&rows),
    );
    r.push(CheckRecord::new(
        "realline/monotone",
        "both generators decrease strictly to 0",
        realline::is_strictly_decreasing(&t, depth) && realline::is_strictly_decreasing(&s, depth),
        format!("checked k ≤ {depth}"),
    ));
    r.note(format!("sampled to depth {depth}; a no-witness verdict is not a proof of non-membership"));
    r
}
