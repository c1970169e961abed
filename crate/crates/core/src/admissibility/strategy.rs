//! Strategy selection and the admissibility dispatcher.

use std::collections::BTreeSet;

use num_traits::Zero;

use super::correct::{
    choose_h0, correct_common_line, correct_dichotomy, correct_even_cycles, correct_no_cycle,
    correct_open_cycles, exposed_points, valid_h0,
};
use super::{normalize, AdmCertificate, LocalSystem, ResidueVector, Strategy, StrategyError};
use crate::geometry::Q;
use crate::graphs::{cycles, cycles_within, regular_lines, PathSeq};
use crate::incidence::{ConditionC, IncidenceStructure};
use crate::oracle::{obstruction_check, oracle_search, Obstruction, SearchOutcome, ShiftSearchConfig};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrategyReport {
    pub condition_c: ConditionC,
    pub cycles: Vec<PathSeq>,
    /// First constructive strategy whose hypotheses hold.
    pub applicable: Strategy,
    pub h0: Option<usize>,
    /// Some base line makes every remaining cycle expose at most two points
    /// per line, so each system is either correctable or exceptional.
    pub dichotomy: bool,
    /// Cycles carrying the exceptional monodromy pattern (system reports
    /// only).
    pub exceptional: Vec<Vec<usize>>,
}

impl StrategyReport {
    pub fn n_cycles(&self) -> usize {
        self.cycles.len()
    }
}

/// Base line candidates: the default choice first, then every other valid
/// line in index order.
fn candidates(inc: &IncidenceStructure) -> Vec<usize> {
    let first = choose_h0(inc);
    std::iter::once(first)
        .chain((0..inc.n_lines()).filter(move |&l| l != first))
        .filter(|&l| valid_h0(inc, l))
        .collect()
}

fn remaining_cycles(inc: &IncidenceStructure, h0: usize) -> Vec<PathSeq> {
    let allowed: Vec<usize> = regular_lines(inc).into_iter().filter(|&l| l != h0).collect();
    cycles_within(inc, &allowed)
}

fn low_exposure(inc: &IncidenceStructure, cs: &[PathSeq]) -> bool {
    cs.iter()
        .all(|c| c.lines.iter().all(|&l| exposed_points(inc, l).len() <= 2))
}

fn common_line(cs: &[PathSeq]) -> Option<usize> {
    let (first, rest) = cs.split_first()?;
    first
        .lines
        .iter()
        .copied()
        .filter(|l| rest.iter().all(|c| c.contains(*l)))
        .min()
}

fn arrangement_level(inc: &IncidenceStructure, cs: &[PathSeq]) -> (Strategy, Option<usize>, bool) {
    if cs.len() <= 1 {
        return (Strategy::NoCycle, Some(choose_h0(inc)), false);
    }
    if let Some(l) = common_line(cs) {
        return (Strategy::CommonLine, Some(l), false);
    }
    let cands = candidates(inc);
    for &h0 in &cands {
        let rest = remaining_cycles(inc, h0);
        if rest.iter().all(|c| c.len() % 2 == 0) && low_exposure(inc, &rest) {
            return (Strategy::EvenCycles, Some(h0), false);
        }
    }
    let dichotomy = cands
        .iter()
        .find(|&&h0| low_exposure(inc, &remaining_cycles(inc, h0)));
    (Strategy::None, dichotomy.copied(), dichotomy.is_some())
}

/// Condition (C), the cycle census and the first strategy that applies to
/// every local system on the arrangement.
pub fn classify(inc: &IncidenceStructure) -> StrategyReport {
    let condition_c = inc.check_condition_c();
    let cs = cycles(inc);
    if !condition_c.holds() {
        return StrategyReport {
            condition_c,
            cycles: cs,
            applicable: Strategy::None,
            h0: None,
            dichotomy: false,
            exceptional: Vec::new(),
        };
    }
    let (applicable, h0, dichotomy) = arrangement_level(inc, &cs);
    StrategyReport {
        condition_c,
        cycles: cs,
        applicable,
        h0: if applicable == Strategy::None && !dichotomy { None } else { h0 },
        dichotomy,
        exceptional: Vec::new(),
    }
}

fn half() -> Q {
    Q::new(1.into(), 2.into())
}

/// Class 1/2 on every line of `c`, class 0 on every other line meeting a
/// line of `c` in a multiple point.
pub(crate) fn is_exceptional(inc: &IncidenceStructure, ls: &LocalSystem, c: &PathSeq) -> bool {
    if !c.lines.iter().all(|&l| ls.class(l) == &half()) {
        return false;
    }
    let neighbours: BTreeSet<usize> = c
        .lines
        .iter()
        .flat_map(|&l| inc.m_points_on(l).iter())
        .flat_map(|&p| inc.lines_through(p).iter().copied())
        .filter(|l| !c.contains(*l))
        .collect();
    neighbours.iter().all(|&l| ls.class(l).is_zero())
}

/// Cycles carrying the exceptional pattern.
pub fn exceptional_cycles(inc: &IncidenceStructure, ls: &LocalSystem) -> Vec<PathSeq> {
    cycles(inc).into_iter().filter(|c| is_exceptional(inc, ls, c)).collect()
}

fn openable(inc: &IncidenceStructure, ls: &LocalSystem, h0: usize) -> bool {
    remaining_cycles(inc, h0).iter().all(|c| {
        c.joints.iter().any(|&p| {
            inc.lines_through(p)
                .iter()
                .any(|&h| h != h0 && inc.m_points_on(h).len() == 1 && !ls.class(h).is_zero())
        })
    })
}

/// As [`classify`], with the system-dependent cycle-opening test and the
/// exceptional-pattern check added.
pub fn classify_system(inc: &IncidenceStructure, ls: &LocalSystem) -> StrategyReport {
    let mut report = classify(inc);
    if !report.condition_c.holds() {
        return report;
    }
    report.exceptional = exceptional_cycles(inc, ls).into_iter().map(|c| c.lines).collect();
    if report.applicable == Strategy::None {
        if let Some(h0) = candidates(inc).into_iter().find(|&h0| openable(inc, ls, h0)) {
            report.applicable = Strategy::OpenCycles;
            report.h0 = Some(h0);
        } else if report.dichotomy && report.exceptional.is_empty() {
            report.applicable = Strategy::Dichotomy;
        }
    }
    report
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decision {
    Admissible(AdmCertificate),
    /// Bounded search exhausted and the counting obstruction fired.
    NotAdmissible {
        transcript: Vec<String>,
        search: SearchOutcome,
    },
    /// No constructive strategy succeeded and the search settled nothing
    /// unconditionally.
    NotCovered {
        errors: Vec<StrategyError>,
        search: SearchOutcome,
    },
}

fn constructive(inc: &IncidenceStructure, ls: &LocalSystem) -> Result<AdmCertificate, Vec<StrategyError>> {
    let mut errors = Vec::new();
    let mut attempt = |r: Result<AdmCertificate, StrategyError>| match r {
        Ok(c) => Some(c),
        Err(e) => {
            if !errors.contains(&e) {
                errors.push(e);
            }
            None
        }
    };
    if let ConditionC::Fails { point, .. } = inc.check_condition_c() {
        return Err(vec![StrategyError::ConditionC(point)]);
    }
    let at = |h0: usize| -> ResidueVector { normalize(ls, h0) };
    let h0 = choose_h0(inc);
    if let Some(c) = attempt(correct_no_cycle(inc, &at(h0), h0)) {
        return Ok(c);
    }
    if let Some(c) = attempt(correct_common_line(inc, &at(h0))) {
        return Ok(c);
    }
    let cands = candidates(inc);
    type Corrector = fn(&IncidenceStructure, &ResidueVector, usize) -> Result<AdmCertificate, StrategyError>;
    let correctors: [Corrector; 3] = [correct_open_cycles, correct_even_cycles, correct_dichotomy];
    for corrector in correctors {
        for &h0 in &cands {
            if let Some(c) = attempt(corrector(inc, &at(h0), h0)) {
                return Ok(c);
            }
        }
    }
    Err(errors)
}

/// Constructive strategies in order of cost, then the bounded search,
/// then the counting obstruction.
pub fn decide_admissible(inc: &IncidenceStructure, ls: &LocalSystem, cfg: &ShiftSearchConfig) -> Decision {
    let errors = match constructive(inc, ls) {
        Ok(cert) => return Decision::Admissible(cert),
        Err(errors) => errors,
    };
    let search = oracle_search(inc, ls, cfg);
    match &search {
        SearchOutcome::Found { residues, .. } => Decision::Admissible(AdmCertificate {
            residues: residues.clone(),
            h0: choose_h0(inc),
            strategy: Strategy::Oracle,
            trace: Vec::new(),
        }),
        SearchOutcome::ExhaustedWithinBound { .. } => match obstruction_check(inc, ls) {
            Obstruction::Obstructed { transcript } => Decision::NotAdmissible { transcript, search },
            Obstruction::Inconclusive => Decision::NotCovered { errors, search },
        },
        SearchOutcome::BudgetExceeded { .. } | SearchOutcome::TooLarge => Decision::NotCovered { errors, search },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::admissibility::verify_certificate;
    use crate::format::fixtures;
    use crate::incidence::build_incidence;

    #[test]
    fn example_one_is_covered_by_no_cycle() {
        let (arr, _) = fixtures::example_one();
        let inc = build_incidence(&arr).unwrap();
        let r = classify(&inc);
        assert!(r.condition_c.holds());
        assert_eq!(r.n_cycles(), 0);
        assert_eq!(r.applicable, Strategy::NoCycle);
        assert_eq!(r.h0, Some(0));
    }

    #[test]
    fn example_two_has_no_arrangement_level_strategy() {
        let (arr, systems) = fixtures::example_two();
        let inc = build_incidence(&arr).unwrap();
        let r = classify(&inc);
        assert_eq!(r.n_cycles(), 2);
        assert_eq!(r.applicable, Strategy::None);
        assert!(r.dichotomy);

        let r = classify_system(&inc, &systems[0].1);
        assert_eq!(r.applicable, Strategy::None);
        assert_eq!(r.exceptional, vec![vec![0, 7, 8], vec![1, 2, 3]]);
    }

    #[test]
    fn pencil_is_trivially_covered() {
        let inc = build_incidence(&fixtures::pencil(5)).unwrap();
        assert_eq!(classify(&inc).applicable, Strategy::NoCycle);
    }

    #[test]
    fn dispatcher_on_examples() {
        let cfg = ShiftSearchConfig::default();
        let (arr, systems) = fixtures::example_two();
        let inc = build_incidence(&arr).unwrap();
        match decide_admissible(&inc, &systems[0].1, &cfg) {
            Decision::NotAdmissible { transcript, .. } => {
                assert_eq!(
                    transcript.last().unwrap(),
                    "b_1 = b_2 = b_3 = 0 which is impossible"
                );
            }
            other => panic!("unexpected {other:?}"),
        }
        let trivial = LocalSystem::trivial(12);
        match decide_admissible(&inc, &trivial, &cfg) {
            Decision::Admissible(c) => {
                assert!(c.residues.as_slice().iter().all(Zero::is_zero));
                assert!(verify_certificate(&inc, &trivial, &c).is_ok());
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
