//! Rank-one local systems, residue vectors and admissibility certificates.
//!
//! A local system is encoded by one residue class in `[0, 1)` per line, with
//! integral total. A residue vector lifts those classes to exact rationals
//! summing to zero; it certifies admissibility when no line residue and no
//! point sum over a multiple point is a positive integer.
//!
//! The correctors start from the vector that agrees with the classes on
//! every line except a base line `h0`, then move integer amounts between
//! lines until no multiple point has a positive integral sum. Every move is
//! logged in the certificate trace.

mod correct;
mod strategy;
mod verify;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::error::{Error, Result};
use crate::geometry::Q;

pub use correct::{
    choose_h0, correct_common_line, correct_dichotomy, correct_even_cycles, correct_no_cycle,
    correct_open_cycles, exposed_points, valid_h0,
};
pub use strategy::{classify, classify_system, decide_admissible, exceptional_cycles, Decision, StrategyReport};
pub use verify::{verify_certificate, verify_residues, Verification, Violation};

/// Fractional part in `[0, 1)`.
pub(crate) fn frac(q: &Q) -> Q {
    q - q.floor()
}

pub(crate) fn positive_integer(q: &Q) -> Option<BigInt> {
    (q.is_integer() && q.is_positive()).then(|| q.to_integer())
}

/// Exact residues `a_H`, one per line, summing to zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueVector(Vec<Q>);

impl ResidueVector {
    pub fn new(residues: Vec<Q>) -> Result<Self> {
        let total: Q = residues.iter().sum();
        if !total.is_zero() {
            return Err(Error::Domain(format!("residues sum to {total}, not 0")));
        }
        Ok(ResidueVector(residues))
    }

    /// Skips the zero-sum check; the verifier reports it instead.
    pub fn new_unchecked(residues: Vec<Q>) -> Self {
        ResidueVector(residues)
    }

    pub fn get(&self, line: usize) -> &Q {
        &self.0[line]
    }

    pub fn as_slice(&self) -> &[Q] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Residue classes mod 1; class `c` stands for monodromy `exp(2πi c)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalSystem(Vec<Q>);

impl LocalSystem {
    /// Reduces each value mod 1. The classes must have integral sum.
    pub fn from_values(values: Vec<Q>) -> Result<Self> {
        let classes: Vec<Q> = values.iter().map(frac).collect();
        let total: Q = classes.iter().sum();
        if !total.is_integer() {
            return Err(Error::Domain(format!(
                "classes sum to {total}; monodromies must multiply to 1"
            )));
        }
        Ok(LocalSystem(classes))
    }

    pub fn trivial(n: usize) -> Self {
        LocalSystem(vec![Q::zero(); n])
    }

    pub fn from_residues(rv: &ResidueVector) -> Self {
        LocalSystem(rv.as_slice().iter().map(frac).collect())
    }

    pub fn classes(&self) -> &[Q] {
        &self.0
    }

    pub fn class(&self, line: usize) -> &Q {
        &self.0[line]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `a_H = class_H` off the base line, `a_h0 = −Σ_{H≠h0} class_H`.
pub fn normalize(ls: &LocalSystem, h0: usize) -> ResidueVector {
    let mut a = ls.0.clone();
    a[h0] = Q::zero();
    let rest: Q = a.iter().sum();
    a[h0] = -rest;
    ResidueVector(a)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// At most one cycle; base line on it.
    NoCycle,
    /// All cycles share a line, used as base line.
    CommonLine,
    /// Each cycle avoiding the base line is opened through a single-point
    /// line with nonzero class.
    OpenCycles,
    /// Cycles avoiding the base line are even and expose at most two points
    /// per line.
    EvenCycles,
    /// As `EvenCycles` without the parity condition; fails only on the
    /// exceptional monodromy pattern.
    Dichotomy,
    /// Bounded brute-force shift search.
    Oracle,
    /// No constructive rule applies.
    None,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::NoCycle => "no-cycle",
            Strategy::CommonLine => "common-line",
            Strategy::OpenCycles => "open-cycles",
            Strategy::EvenCycles => "even-cycles",
            Strategy::Dichotomy => "cycle-dichotomy",
            Strategy::Oracle => "oracle",
            Strategy::None => "none",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepKind {
    /// A line with at most one unprocessed neighbour absorbs the largest
    /// positive integral sum among the points it alone still covers.
    LeafPeel,
    /// An isolated multiple point is fixed on one of its lines.
    IsolatedPoint,
    /// Transfer from a cycle line to a single-point line through a joint.
    OpenCycle,
    /// Alternate lines of an even cycle absorb their joint sums.
    EvenCycleAlternate,
    /// Minimal even-cycle cover when no alternation is optimal.
    EvenCycleOptimal,
}

/// One residue move: `amount` leaves `from` and is added to `to`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub kind: StepKind,
    pub from: usize,
    pub to: usize,
    pub amount: BigInt,
    /// The multiple point whose sum determined the amount.
    pub point: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmCertificate {
    pub residues: ResidueVector,
    pub h0: usize,
    pub strategy: Strategy,
    pub trace: Vec<Step>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StrategyError {
    #[error("condition (C) fails at point {0}")]
    ConditionC(usize),
    #[error("{0} cycles present, at most one is allowed")]
    TooManyCycles(usize),
    #[error("base line {0} is not on the cycle")]
    BaseOffCycle(usize),
    #[error("line {0} cannot be the base line: its only multiple point is not isolated")]
    InvalidBase(usize),
    #[error("residues are not normalized with respect to base line {0}")]
    NotNormalized(usize),
    #[error("cycles have no line in common")]
    NoCommonLine,
    #[error("cycle {0:?} has no single-point line with nonzero class through a joint")]
    NotOpenable(Vec<usize>),
    #[error("cycle {0:?} has odd length")]
    OddCycle(Vec<usize>),
    #[error("line {line} of a cycle exposes {count} points")]
    Exposed { line: usize, count: usize },
    #[error("cycle {0:?} is not a whole maximal graph")]
    NotPureCycle(Vec<usize>),
    #[error("cycle {0:?} carries the exceptional monodromy pattern")]
    Exceptional(Vec<usize>),
    #[error("lines {0:?} still contain a cycle")]
    Cyclic(Vec<usize>),
    #[error("corrected residues still fail at points {0:?}")]
    Unresolved(Vec<usize>),
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n.into(), d.into())
    }

    #[test]
    fn normalization() {
        let ls = LocalSystem::trivial(4);
        assert!(normalize(&ls, 2).as_slice().iter().all(Zero::is_zero));

        let ls = LocalSystem::from_values(vec![q(1, 3), q(1, 3), q(1, 3)]).unwrap();
        assert_eq!(normalize(&ls, 0).as_slice(), &[q(-2, 3), q(1, 3), q(1, 3)]);
    }

    #[test]
    fn classes_reduce_mod_one() {
        let ls = LocalSystem::from_values(vec![q(-1, 2), q(5, 2), q(3, 1)]).unwrap();
        assert_eq!(ls.classes(), &[q(1, 2), q(1, 2), q(0, 1)]);
        assert!(LocalSystem::from_values(vec![q(1, 2), q(0, 1)]).is_err());
    }

    #[test]
    fn residue_vectors_sum_to_zero() {
        assert!(ResidueVector::new(vec![q(1, 2), q(-1, 2)]).is_ok());
        assert!(ResidueVector::new(vec![q(1, 2), q(1, 2)]).is_err());
    }
}
