//! Single-descriptor queries over JSON files.
//!
//! A file holds either one bare descriptor, whose type is implied by the
//! query, or a bundle object keyed by role:
//!
//! | key            | type                   |
//! |----------------|------------------------|
//! | `point`        | [`FanPoint`]           |
//! | `neighborhood` | [`NeighborhoodSpec`]   |
//! | `set`, `other` | [`DefinableSet`]       |
//! | `sequence`     | [`SequenceDescriptor`] |
//! | `function`     | [`FunctionDescriptor`] |
//! | `testset`      | [`TestSetDescriptor`]  |
//! | `corpus`       | [`FunctionCorpus`]     |

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::corpus::{default_corpus, DEFAULT_SEED};
use crate::fan::{FanPoint, NeighborhoodSpec};
use crate::functions::{FunctionDescriptor, FunctionError};
use crate::sequences::SequenceDescriptor;
use crate::sets::DefinableSet;
use crate::testsets::{FunctionCorpus, TestSetDescriptor};
use crate::SCHEMA;

pub const QUERIES: [&str; 8] = [
    "member",
    "converges",
    "injective",
    "in-ip",
    "almost-disjoint",
    "in-witness-family",
    "discontinuous",
    "test-set-relative",
];

const BUNDLE_KEYS: [&str; 8] = ["point", "neighborhood", "set", "other", "sequence", "function", "testset", "corpus"];

/// Spoke bound of the corpus used when a `test-set-relative` bundle omits one.
pub const DEFAULT_CORPUS_SPOKES: u64 = 16;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QueryError {
    #[error("parse error: {0}")]
    ParseError(String),
    #[error("unknown query \"{0}\"; expected one of: {list}", list = QUERIES.join(", "))]
    UnknownQuery(String),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Answer {
    pub schema: &'static str,
    pub query: String,
    pub result: bool,
    pub certificate: Value,
}

impl Answer {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("answer serializes");
        s.push('\n');
        s
    }
}

pub fn eval_descriptor(path: impl AsRef<Path>, query: &str) -> Result<Answer, QueryError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| QueryError::ParseError(format!("{}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| QueryError::ParseError(format!("{}: {e}", path.display())))?;
    eval_value(&value, query)
}

struct Input<'a> {
    value: &'a Value,
    bundle: bool,
}

impl<'a> Input<'a> {
    fn new(value: &'a Value) -> Self {
        let bundle = value
            .as_object()
            .is_some_and(|m| !m.is_empty() && m.keys().all(|k| BUNDLE_KEYS.contains(&k.as_str())));
        Input { value, bundle }
    }

    fn optional<T: DeserializeOwned>(&self, key: &str) -> Result<Option<T>, QueryError> {
        match self.bundle.then(|| self.value.get(key)).flatten() {
            None => Ok(None),
            Some(v) => T::deserialize(v).map(Some).map_err(|e| QueryError::ParseError(format!("\"{key}\": {e}"))),
        }
    }

    /// The bundle entry `key`, or the whole file when it is a bare descriptor.
    fn get<T: DeserializeOwned>(&self, key: &str) -> Result<T, QueryError> {
        if self.bundle {
            self.optional(key)?.ok_or_else(|| QueryError::ParseError(format!("missing \"{key}\"")))
        } else {
            T::deserialize(self.value).map_err(|e| QueryError::ParseError(format!("expected a {key} descriptor: {e}")))
        }
    }

    fn bundled<T: DeserializeOwned>(&self, key: &str) -> Result<T, QueryError> {
        if !self.bundle {
            return Err(QueryError::ParseError(format!("query needs a bundle with \"{key}\"")));
        }
        self.get(key)
    }
}

fn cert<T: Serialize>(c: &T) -> Value {
    serde_json::to_value(c).expect("certificate serializes")
}

fn function_error(e: FunctionError) -> QueryError {
    QueryError::ParseError(e.to_string())
}

pub fn eval_value(value: &Value, query: &str) -> Result<Answer, QueryError> {
    if !QUERIES.contains(&query) {
        return Err(QueryError::UnknownQuery(query.to_string()));
    }
    let input = Input::new(value);
    let (result, certificate) = match query {
        "member" => {
            let x: FanPoint = input.bundled("point")?;
            match input.optional::<NeighborhoodSpec>("neighborhood")? {
                Some(u) if input.value.get("set").is_none() => {
                    let ok = u.contains(&x);
                    (ok, json!({ "point": x, "threshold": x.spoke().map(|n| u.threshold(n)) }))
                }
                _ => {
                    let m: DefinableSet = input.bundled("set")?;
                    (m.member(&x), json!({ "point": x }))
                }
            }
        }
        "converges" => {
            let t: SequenceDescriptor = input.get("sequence")?;
            let c = t.converges_to_apex();
            (c.converges, cert(&c.certificate))
        }
        "injective" => {
            let t: SequenceDescriptor = input.get("sequence")?;
            let c = t.is_injective();
            (c.injective, cert(&c.certificate))
        }
        "in-ip" => {
            let m: DefinableSet = input.get("set")?;
            let c = m.in_ip();
            (c.in_ip, cert(&c.certificate))
        }
        "almost-disjoint" => {
            let a: DefinableSet = input.bundled("set")?;
            let b: DefinableSet = input.bundled("other")?;
            let c = a.intersection_class(&b);
            (a.almost_disjoint(&b), cert(&c))
        }
        "in-witness-family" => {
            let f: FunctionDescriptor = input.bundled("function")?;
            let t: SequenceDescriptor = input.bundled("sequence")?;
            match f.in_witness_family(&t) {
                Ok(w) => (w.member, cert(&w.certificate)),
                Err(FunctionError::NotInSp) => (false, json!({ "notConvergent": t.converges_to_apex().certificate })),
                Err(e) => return Err(function_error(e)),
            }
        }
        "discontinuous" => {
            let f: FunctionDescriptor = input.get("function")?;
            let d = f.discontinuous_at_apex().map_err(function_error)?;
            (d.discontinuous, cert(&d.certificate))
        }
        _ => {
            let a: TestSetDescriptor = input.get("testset")?;
            let corpus = match input.optional::<FunctionCorpus>("corpus")? {
                Some(c) => c,
                None => default_corpus(DEFAULT_SEED, DEFAULT_CORPUS_SPOKES),
            };
            let v = crate::testsets::is_test_set_relative(&a, &corpus).map_err(|e| QueryError::ParseError(e.to_string()))?;
            (v.pass, cert(&v))
        }
    };
    Ok(Answer { schema: SCHEMA, query: query.to_string(), result, certificate })
}
