//! Incidence structure of an arrangement: intersection points, the set M of
//! points of multiplicity at least 3, adjacency and condition (C).

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::geometry::{intersect, Line, Point};

/// A finite ordered set of distinct lines. The index of a line is its identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrangement {
    pub name: Option<String>,
    lines: Vec<Line>,
    labels: Vec<String>,
}

impl Arrangement {
    /// Lines are labelled `L_0, L_1, ...`.
    pub fn new(lines: Vec<Line>) -> Result<Self> {
        let labels = (0..lines.len()).map(|i| format!("L_{i}")).collect();
        Self::with_labels(lines, labels)
    }

    pub fn with_labels(lines: Vec<Line>, labels: Vec<String>) -> Result<Self> {
        if lines.len() < 2 {
            return Err(Error::TooFewLines(lines.len()));
        }
        assert_eq!(lines.len(), labels.len(), "one label per line");
        let mut seen: BTreeMap<&Line, usize> = BTreeMap::new();
        for (i, l) in lines.iter().enumerate() {
            if let Some(&j) = seen.get(l) {
                return Err(Error::DuplicateLine(labels[j].clone(), labels[i].clone()));
            }
            seen.insert(l, i);
        }
        Ok(Arrangement {
            name: None,
            lines,
            labels,
        })
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn lines(&self) -> &[Line] {
        &self.lines
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

/// An intersection point together with the lines through it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultPoint {
    /// Coordinates, absent for purely combinatorial fixtures.
    pub point: Option<Point>,
    /// Sorted indices of the incident lines.
    pub incident: Vec<usize>,
}

impl MultPoint {
    pub fn multiplicity(&self) -> usize {
        self.incident.len()
    }

    pub fn contains(&self, line: usize) -> bool {
        self.incident.binary_search(&line).is_ok()
    }
}

/// Outcome of the condition (C) test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConditionC {
    Holds,
    /// `point` is adjacent to M-points spread over three or more lines.
    Fails { point: usize, lines: Vec<usize> },
}

impl ConditionC {
    pub fn holds(&self) -> bool {
        matches!(self, ConditionC::Holds)
    }
}

#[derive(Debug, Clone)]
pub struct IncidenceStructure {
    labels: Vec<String>,
    points: Vec<MultPoint>,
    m_points: Vec<usize>,
    /// All point ids on each line, sorted.
    on_line: Vec<Vec<usize>>,
    /// M-point ids on each line, sorted.
    m_on_line: Vec<Vec<usize>>,
    /// Position of a point id inside `m_points`, if it is a multiple point.
    m_rank: Vec<Option<usize>>,
    /// `adjacency[i][j]` for the i-th and j-th entries of `m_points`.
    adjacency: Vec<Vec<bool>>,
}

pub fn build_incidence(arr: &Arrangement) -> Result<IncidenceStructure> {
    let lines = arr.lines();
    let mut by_point: BTreeMap<Point, BTreeSet<usize>> = BTreeMap::new();
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            let p = intersect(&lines[i], &lines[j]).map_err(|_| {
                Error::DuplicateLine(arr.labels()[i].clone(), arr.labels()[j].clone())
            })?;
            let set = by_point.entry(p).or_default();
            set.insert(i);
            set.insert(j);
        }
    }
    let points = by_point
        .into_iter()
        .map(|(p, inc)| MultPoint {
            point: Some(p),
            incident: inc.into_iter().collect(),
        })
        .collect();
    IncidenceStructure::assemble(arr.labels().to_vec(), points)
}

impl IncidenceStructure {
    /// Builds a structure from abstract incidences, for configurations with no
    /// rational realization. `points` lists the multiple points by their
    /// incident lines; every pair of lines not covered is completed by a
    /// double point.
    pub fn from_incidences(labels: Vec<String>, points: Vec<Vec<usize>>) -> Result<Self> {
        let n = labels.len();
        if n < 2 {
            return Err(Error::TooFewLines(n));
        }
        let mut covered = vec![vec![false; n]; n];
        let mut all = Vec::new();
        for raw in points {
            let inc: BTreeSet<usize> = raw.into_iter().collect();
            if inc.len() < 2 || inc.iter().any(|&l| l >= n) {
                return Err(Error::Domain(format!("bad incidence list {inc:?}")));
            }
            let inc: Vec<usize> = inc.into_iter().collect();
            for (a, &i) in inc.iter().enumerate() {
                for &j in &inc[a + 1..] {
                    if covered[i][j] {
                        return Err(Error::Domain(format!(
                            "lines {i} and {j} meet in two listed points"
                        )));
                    }
                    covered[i][j] = true;
                }
            }
            all.push(MultPoint {
                point: None,
                incident: inc,
            });
        }
        for i in 0..n {
            for j in i + 1..n {
                if !covered[i][j] {
                    all.push(MultPoint {
                        point: None,
                        incident: vec![i, j],
                    });
                }
            }
        }
        all.sort_by(|a, b| a.incident.cmp(&b.incident));
        Self::assemble(labels, all)
    }

    fn assemble(labels: Vec<String>, points: Vec<MultPoint>) -> Result<Self> {
        let n = labels.len();
        let mut on_line = vec![Vec::new(); n];
        let mut m_on_line = vec![Vec::new(); n];
        let mut m_points = Vec::new();
        let mut m_rank = vec![None; points.len()];
        for (pid, p) in points.iter().enumerate() {
            for &l in &p.incident {
                on_line[l].push(pid);
                if p.multiplicity() >= 3 {
                    m_on_line[l].push(pid);
                }
            }
            if p.multiplicity() >= 3 {
                m_rank[pid] = Some(m_points.len());
                m_points.push(pid);
            }
        }
        let k = m_points.len();
        let mut adjacency = vec![vec![false; k]; k];
        for list in &m_on_line {
            for (a, &x) in list.iter().enumerate() {
                for &y in &list[a + 1..] {
                    let (rx, ry) = (m_rank[x].unwrap(), m_rank[y].unwrap());
                    adjacency[rx][ry] = true;
                    adjacency[ry][rx] = true;
                }
            }
        }
        Ok(IncidenceStructure {
            labels,
            points,
            m_points,
            on_line,
            m_on_line,
            m_rank,
            adjacency,
        })
    }

    pub fn n_lines(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, line: usize) -> &str {
        &self.labels[line]
    }

    /// Every intersection point, sorted by canonical coordinates.
    pub fn points(&self) -> &[MultPoint] {
        &self.points
    }

    pub fn point(&self, pid: usize) -> &MultPoint {
        &self.points[pid]
    }

    /// Point ids of M, in point order.
    pub fn m_points(&self) -> &[usize] {
        &self.m_points
    }

    pub fn is_m(&self, pid: usize) -> bool {
        self.m_rank[pid].is_some()
    }

    pub fn points_on(&self, line: usize) -> &[usize] {
        &self.on_line[line]
    }

    pub fn m_points_on(&self, line: usize) -> &[usize] {
        &self.m_on_line[line]
    }

    pub fn lines_through(&self, pid: usize) -> &[usize] {
        &self.points[pid].incident
    }

    /// Id of the point where two distinct lines meet.
    pub fn meet(&self, l1: usize, l2: usize) -> Option<usize> {
        if l1 == l2 {
            return None;
        }
        self.on_line[l1]
            .iter()
            .copied()
            .find(|&pid| self.points[pid].contains(l2))
    }

    /// The M-point id with the given coordinates.
    pub fn find_point(&self, p: &Point) -> Option<usize> {
        self.points
            .iter()
            .position(|mp| mp.point.as_ref() == Some(p))
    }

    pub fn adjacent(&self, x: usize, y: usize) -> bool {
        match (self.m_rank[x], self.m_rank[y]) {
            (Some(rx), Some(ry)) => self.adjacency[rx][ry],
            _ => false,
        }
    }

    /// The line of the arrangement containing two distinct M-points.
    ///
    /// Two points span at most one line; finding two is an incidence bug and
    /// panics.
    pub fn common_line(&self, x: usize, y: usize) -> Option<usize> {
        let py = &self.points[y];
        let mut found = self.points[x].incident.iter().filter(|&&l| py.contains(l));
        let first = found.next().copied();
        assert!(found.next().is_none(), "points {x} and {y} share two lines");
        first
    }

    /// All y in M, y ≠ x, sharing a line with x.
    pub fn adjacent_points(&self, x: usize) -> Result<Vec<usize>> {
        let rx = self.m_rank[x]
            .ok_or_else(|| Error::Domain(format!("point {x} is not a multiple point")))?;
        Ok(self
            .m_points
            .iter()
            .enumerate()
            .filter(|&(ry, _)| self.adjacency[rx][ry])
            .map(|(_, &y)| y)
            .collect())
    }

    /// Lines through `x` that carry some M-point adjacent to `x`.
    pub fn covering_lines(&self, x: usize) -> Vec<usize> {
        self.points[x]
            .incident
            .iter()
            .copied()
            .filter(|&l| self.m_on_line[l].len() >= 2)
            .collect()
    }

    pub fn check_condition_c(&self) -> ConditionC {
        for &x in &self.m_points {
            let adj = self.adjacent_points(x).expect("x in M");
            let lines: BTreeSet<usize> = adj
                .iter()
                .map(|&y| self.common_line(x, y).expect("adjacent points share a line"))
                .collect();
            if lines.len() > 2 {
                return ConditionC::Fails {
                    point: x,
                    lines: lines.into_iter().collect(),
                };
            }
        }
        ConditionC::Holds
    }

    /// M-points adjacent to nothing.
    pub fn is_isolated(&self, x: usize) -> bool {
        self.is_m(x) && self.points[x].incident.iter().all(|&l| self.m_on_line[l].len() == 1)
    }

    /// True when a single point lies on every line.
    pub fn is_concurrent(&self) -> bool {
        self.points.iter().any(|p| p.multiplicity() == self.n_lines())
    }

    /// Lines carrying exactly one M-point.
    pub fn single_point_lines(&self) -> Vec<usize> {
        (0..self.n_lines())
            .filter(|&l| self.m_on_line[l].len() == 1)
            .collect()
    }

    /// Human-readable point name: coordinates when known, else `P#id`.
    pub fn point_name(&self, pid: usize) -> String {
        match &self.points[pid].point {
            Some(p) => p.to_string(),
            None => format!("P#{pid}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::fixtures;

    fn generic3() -> IncidenceStructure {
        let arr = Arrangement::new(vec![
            Line::from_integers(1, 0, 0).unwrap(),
            Line::from_integers(0, 1, 0).unwrap(),
            Line::from_integers(1, 1, -1).unwrap(),
        ])
        .unwrap();
        build_incidence(&arr).unwrap()
    }

    #[test]
    fn generic_lines_have_no_multiple_points() {
        let inc = generic3();
        assert_eq!(inc.points().len(), 3);
        assert!(inc.m_points().is_empty());
        assert!(inc.check_condition_c().holds());
    }

    #[test]
    fn duplicate_lines_rejected() {
        let l = Line::from_integers(1, 2, 3).unwrap();
        let m = Line::from_integers(-2, -4, -6).unwrap();
        assert!(matches!(
            Arrangement::new(vec![l, m]),
            Err(Error::DuplicateLine(..))
        ));
        assert!(matches!(
            Arrangement::new(vec![Line::from_integers(1, 0, 0).unwrap()]),
            Err(Error::TooFewLines(1))
        ));
    }

    #[test]
    fn example_one_adjacency() {
        let (arr, _) = fixtures::example_one();
        let inc = build_incidence(&arr).unwrap();
        let p = |x, y, z| inc.find_point(&Point::new(x, y, z).unwrap()).unwrap();
        let mut adj = inc.adjacent_points(p(0, 1, 0)).unwrap();
        adj.sort();
        let mut expect = vec![p(0, 1, 1), p(1, 0, 0), p(1, 1, 0)];
        expect.sort();
        assert_eq!(adj, expect);
        assert_eq!(inc.common_line(p(0, 1, 0), p(0, 1, 1)), Some(1));
        assert_eq!(inc.common_line(p(0, 1, 0), p(1, 0, 0)), Some(0));
    }

    #[test]
    fn example_two_adjacency() {
        let (arr, _) = fixtures::example_two();
        let inc = build_incidence(&arr).unwrap();
        let p = |x, y, z| inc.find_point(&Point::new(x, y, z).unwrap()).unwrap();
        let mut adj = inc.adjacent_points(p(2, 4, 1)).unwrap();
        adj.sort();
        let mut expect = vec![p(1, 1, 0), p(1, -4, 0)];
        expect.sort();
        assert_eq!(adj, expect);
    }

    #[test]
    fn isolated_triple_point_has_no_neighbours() {
        // three lines through the origin plus two generic lines
        let arr = Arrangement::new(vec![
            Line::from_integers(1, 0, 0).unwrap(),
            Line::from_integers(0, 1, 0).unwrap(),
            Line::from_integers(1, -1, 0).unwrap(),
            Line::from_integers(1, 2, -7).unwrap(),
            Line::from_integers(3, -1, -5).unwrap(),
        ])
        .unwrap();
        let inc = build_incidence(&arr).unwrap();
        assert_eq!(inc.m_points().len(), 1);
        let x = inc.m_points()[0];
        assert!(inc.adjacent_points(x).unwrap().is_empty());
        assert!(inc.is_isolated(x));
        let double = inc.points().iter().position(|p| p.multiplicity() == 2).unwrap();
        assert!(matches!(inc.adjacent_points(double), Err(Error::Domain(_))));
    }

    #[test]
    fn condition_c_violation_has_witness() {
        // Triple point at the origin on x=0, y=0, x=y; each of those lines
        // carries a second triple point.
        let arr = Arrangement::new(vec![
            Line::from_integers(1, 0, 0).unwrap(),  // x = 0
            Line::from_integers(0, 1, 0).unwrap(),  // y = 0
            Line::from_integers(1, -1, 0).unwrap(), // x = y
            Line::from_integers(0, 1, -1).unwrap(), // y = 1 (through [0:1:1])
            Line::from_integers(1, 1, -1).unwrap(), // x + y = 1 (through [0:1:1] and [1:0:1])
            Line::from_integers(1, 0, -1).unwrap(), // x = 1 (through [1:0:1] and [1:1:1])
            Line::from_integers(1, -2, 1).unwrap(), // x - 2y + 1 = 0 (through [1:1:1])
        ])
        .unwrap();
        let inc = build_incidence(&arr).unwrap();
        let origin = inc.find_point(&Point::new(0, 0, 1).unwrap()).unwrap();
        assert_eq!(
            inc.check_condition_c(),
            ConditionC::Fails {
                point: origin,
                lines: vec![0, 1, 2]
            }
        );
    }

    #[test]
    fn abstract_incidences_complete_double_points() {
        let labels = (0..4).map(|i| format!("L_{i}")).collect();
        let inc = IncidenceStructure::from_incidences(labels, vec![vec![0, 1, 2]]).unwrap();
        assert_eq!(inc.points().len(), 4);
        assert_eq!(inc.m_points().len(), 1);
        let pairs: usize = inc
            .points()
            .iter()
            .map(|p| p.multiplicity() * (p.multiplicity() - 1) / 2)
            .sum();
        assert_eq!(pairs, 6);
    }
}
