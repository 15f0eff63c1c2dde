//! Exact decision procedures for sequential test sets on the countable
//! sequential fan `S_ω`.
//!
//! Every object in this crate is a finite symbolic descriptor of an infinite
//! object: definable subsets of the fan, round-robin sequences, priority-layer
//! functions, and intensional families of sequences. Every decision returns a
//! certificate that can be re-validated independently by brute force over a
//! truncation of the fan (see [`oracle`]).
//!
//! Module map:
//!
//! * [`fan`] points, basic neighborhoods of the apex, kernel certificates and
//!   accumulation at the apex.
//! * [`sets`] definable subsets: strided spoke tails, finite chunks and affine
//!   rows, with exact intersection classification.
//! * [`sequences`] round-robin sequence descriptors, convergence, injectivity,
//!   prefix modification and set enumeration.
//! * [`functions`] rational-valued priority-layer functions, discontinuity at
//!   the apex and witness-family membership.
//! * [`testsets`] test-set checks relative to a function corpus, prefix-fixed
//!   families, chains and almost disjoint families.
//! * [`realline`] the bounded numeric `sin(1/x)` example on the real line.
//! * [`suites`] and [`query`] drive the named verification suites and the
//!   descriptor queries exposed by the `seqwit` binary.
//!
//! ```
//! use seqwit::{DefinableSet, FunctionDescriptor, Rat, SequenceDescriptor};
//!
//! let h = FunctionDescriptor::indicator(DefinableSet::spoke(3), Rat::one());
//! assert!(h.discontinuous_at_apex().unwrap().discontinuous);
//! assert!(h.in_witness_family(&SequenceDescriptor::canonical(3)).unwrap().member);
//! assert!(!h.in_witness_family(&SequenceDescriptor::canonical(4)).unwrap().member);
//! ```

pub mod arith;
pub mod corpus;
pub mod fan;
pub mod functions;
pub mod oracle;
pub mod par;
pub mod query;
pub mod rational;
pub mod realline;
pub mod report;
pub mod sequences;
pub mod sets;
pub mod suites;
pub mod testsets;

/// Version tag carried by every JSON document this crate reads or writes.
pub const SCHEMA: &str = "seqwit/1";

pub use fan::{FanPoint, NeighborhoodSpec, Ramp};
pub use rational::Rat;
pub use report::{CheckRecord, Status, SuiteReport};
pub use sets::{DefinableSet, RowComponent, SpokeComponent};
pub use sequences::{Channel, SequenceDescriptor};
pub use functions::FunctionDescriptor;
pub use testsets::{FunctionCorpus, TestSetDescriptor};
