//! Exact combinatorics of line arrangements in the complex projective plane.
//!
//! The crate computes the incidence structure of an arrangement (multiple
//! points, adjacency, condition (C)), the path/graph/zone machinery built on
//! top of it, and produces independently checkable admissibility
//! certificates for rank-one local systems on the complement. A bounded
//! brute-force search and a counting obstruction act as ground truth for
//! small instances, and a multinet module validates and searches for
//! (k, d)-multinets.
//!
//! All arithmetic is exact: coefficients are arbitrary-precision integers and
//! residues are arbitrary-precision rationals.

pub mod admissibility;
pub mod error;
pub mod format;
pub mod generate;
pub mod geometry;
pub mod graphs;
pub mod incidence;
pub mod multinet;
pub mod oracle;

pub use admissibility::{
    choose_h0, classify, classify_system, correct_common_line, correct_dichotomy, correct_even_cycles,
    correct_no_cycle, correct_open_cycles, decide_admissible, exceptional_cycles, normalize,
    verify_certificate, verify_residues,
    AdmCertificate, Decision, LocalSystem, ResidueVector, Step, StepKind, Strategy,
    StrategyError, StrategyReport, Verification, Violation,
};
pub use error::{Error, Result};
pub use geometry::{canonicalize_line, intersect, on_line, Line, Point, Q};
pub use graphs::{cycles, maximal_graphs, verify_zone_partition, zones, GraphKind, LineGraph, PathSeq, Zone};
pub use incidence::{build_incidence, Arrangement, ConditionC, IncidenceStructure, MultPoint};
pub use generate::{generate_condition_c, generate_filtered, random_local_system};
pub use multinet::{report_global_components, search_multinets, validate_multinet, Multinet, MultinetViolation};
pub use oracle::{obstruction_check, oracle_search, Obstruction, SearchOutcome, ShiftSearchConfig};
