//! Certificate checking.
//!
//! Written directly against the definition and sharing no helpers with the
//! correctors: every quantity is recomputed from the raw residues.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{AdmCertificate, LocalSystem, ResidueVector};
use crate::incidence::IncidenceStructure;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Length { expected: usize, got: usize },
    NonZeroSum(BigRational),
    /// `residue − class` is not an integer.
    NotExpCompatible { line: usize, difference: BigRational },
    PositiveIntegerLine { line: usize, value: BigRational },
    PositiveIntegerPoint { point: usize, value: BigRational },
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Verification {
    pub violations: Vec<Violation>,
}

impl Verification {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violating_points(&self) -> Vec<usize> {
        self.violations
            .iter()
            .filter_map(|v| match v {
                Violation::PositiveIntegerPoint { point, .. } => Some(*point),
                _ => None,
            })
            .collect()
    }
}

fn in_positive_integers(x: &BigRational) -> bool {
    x.is_integer() && x.is_positive()
}

pub fn verify_certificate(
    inc: &IncidenceStructure,
    ls: &LocalSystem,
    cert: &AdmCertificate,
) -> Verification {
    verify_residues(inc, ls, &cert.residues)
}

pub fn verify_residues(inc: &IncidenceStructure, ls: &LocalSystem, rv: &ResidueVector) -> Verification {
    let residues = rv.as_slice();
    let classes = ls.classes();
    let n = inc.n_lines();
    let mut out = Verification::default();
    if residues.len() != n || classes.len() != n {
        out.violations.push(Violation::Length {
            expected: n,
            got: residues.len().min(classes.len()),
        });
        return out;
    }

    let mut total = BigRational::zero();
    for r in residues {
        total += r;
    }
    if !total.is_zero() {
        out.violations.push(Violation::NonZeroSum(total));
    }

    for line in 0..n {
        let difference = &residues[line] - &classes[line];
        if !difference.is_integer() {
            out.violations.push(Violation::NotExpCompatible { line, difference });
        }
    }

    for (line, value) in residues.iter().enumerate() {
        if in_positive_integers(value) {
            out.violations.push(Violation::PositiveIntegerLine {
                line,
                value: value.clone(),
            });
        }
    }

    for (point, p) in inc.points().iter().enumerate() {
        if p.incident.len() < 3 {
            continue;
        }
        let mut value = BigRational::zero();
        for &line in &p.incident {
            value += &residues[line];
        }
        if in_positive_integers(&value) {
            out.violations
                .push(Violation::PositiveIntegerPoint { point, value });
        }
    }
    out
}
