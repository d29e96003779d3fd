//! Superpatterns of preferential arrangements.
//!
//! A preferential arrangement is a word whose values are exactly {1, .., j}
//! for some j: the canonical form of a ranking with ties. A word over the
//! alphabet [d] is a superpattern for length k when every preferential
//! arrangement of length k with at most min(k, d) distinct values occurs in
//! it order-isomorphically. For d = k this is equivalent to containing all k!
//! permutations as subsequences (a complete word), and equivalent again when
//! occurrences are required to be regular; those equivalences are exercised
//! exhaustively in the test suite.
//!
//! The crate provides:
//!
//! * enumeration and counting of preferential arrangements ([`pattern`],
//!   [`counting`]),
//! * containment predicates, including regular occurrences and an
//!   incremental all-permutations matcher ([`containment`], [`matcher`]),
//! * exhaustive minimal-length search with refutation certificates
//!   ([`search`]),
//! * published bounds for minimal superpattern lengths ([`bounds`]),
//! * simulation and exact analysis of the random waiting times until a
//!   uniform letter stream first becomes a superpattern ([`stochastic`]).

pub mod bounds;
pub mod containment;
pub mod counting;
pub mod error;
pub mod matcher;
pub mod pattern;
mod perm;
pub mod search;
pub mod stochastic;
pub mod word;

pub use bounds::{bounds_report, BoundsReport};
pub use containment::{
    contains_subsequence, find_occurrence, first_missing_pattern, first_missing_permutation,
    is_complete, is_regular_occurrence, is_superpattern, is_superpattern_direct,
    NextOccurrenceTable, Occurrence,
};
pub use counting::{fubini, pa_count};
pub use error::{Error, Result};
pub use matcher::PermutationMatcher;
pub use pattern::{canonicalize, enumerate_pa, PrefArrangement};
pub use search::{
    refute_length, search_min, verify_witness, RefutationCertificate, RefuteOutcome,
    SearchProblem, SearchResult,
};
pub use stochastic::{
    closed_forms, concentration_check, exact_expectation, run_trial, simulate, trial_seed,
    ClosedForms, ConcentrationReport, Process, SimulationReport, StreamConfig, StreamTracker,
    SummaryStats, TrialRecord,
};
pub use word::Word;
