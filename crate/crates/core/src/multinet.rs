//! Multinets: validation, bounded search and the resonance report.
//!
//! A `(k, d)`-multinet partitions the lines into `k ≥ 3` classes with
//! positive multiplicities such that
//! 1. every class has total multiplicity `d`;
//! 2. lines of different classes meet only in the base locus `X ⊂ M`;
//! 3. at every point of `X` each class has the same multiplicity sum;
//! 4. each class is connected through intersections outside `X`.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::incidence::IncidenceStructure;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multinet {
    pub classes: Vec<Vec<usize>>,
    /// Multiplicity of each line, indexed by line.
    pub mult: Vec<u32>,
    /// Point ids of the base locus.
    pub base_locus: Vec<usize>,
    pub d: u32,
}

impl Multinet {
    pub fn k(&self) -> usize {
        self.classes.len()
    }

    /// Unit multiplicities, base locus the cross-class intersections.
    pub fn with_unit_weights(inc: &IncidenceStructure, classes: Vec<Vec<usize>>) -> Self {
        let mult = vec![1; inc.n_lines()];
        let d = classes.first().map_or(0, |c| c.len() as u32);
        let base_locus = cross_points(inc, &classes);
        Multinet {
            classes,
            mult,
            base_locus,
            d,
        }
    }
}

/// First clause a candidate breaks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MultinetViolation {
    /// Not a partition into at least three non-empty classes with positive
    /// multiplicities, or X not inside M.
    Structure(String),
    Weight { class: usize, total: u32, d: u32 },
    CrossPoint { lines: (usize, usize), point: usize },
    BaseLocus { point: usize, sums: Vec<u32> },
    Disconnected { class: usize, lines: (usize, usize) },
}

impl fmt::Display for MultinetViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MultinetViolation::Structure(s) => write!(f, "structure: {s}"),
            MultinetViolation::Weight { class, total, d } => {
                write!(f, "clause 1: class {class} has weight {total}, expected {d}")
            }
            MultinetViolation::CrossPoint { lines, point } => write!(
                f,
                "clause 2: lines {} and {} of different classes meet at point {point} outside X",
                lines.0, lines.1
            ),
            MultinetViolation::BaseLocus { point, sums } => {
                write!(f, "clause 3: class sums {sums:?} differ at point {point}")
            }
            MultinetViolation::Disconnected { class, lines } => write!(
                f,
                "clause 4: lines {} and {} of class {class} are not connected outside X",
                lines.0, lines.1
            ),
        }
    }
}

fn cross_points(inc: &IncidenceStructure, classes: &[Vec<usize>]) -> Vec<usize> {
    let mut owner = vec![usize::MAX; inc.n_lines()];
    for (i, c) in classes.iter().enumerate() {
        for &l in c {
            owner[l] = i;
        }
    }
    inc.points()
        .iter()
        .enumerate()
        .filter(|(_, p)| {
            let first = owner[p.incident[0]];
            p.incident.iter().any(|&l| owner[l] != first)
        })
        .map(|(i, _)| i)
        .collect()
}

pub fn validate_multinet(inc: &IncidenceStructure, mn: &Multinet) -> std::result::Result<(), MultinetViolation> {
    let n = inc.n_lines();
    if mn.classes.len() < 3 {
        return Err(MultinetViolation::Structure(format!("{} classes, need at least 3", mn.classes.len())));
    }
    if mn.mult.len() != n || mn.mult.contains(&0) {
        return Err(MultinetViolation::Structure("multiplicities must be positive, one per line".into()));
    }
    let mut class_of = vec![None; n];
    for (i, c) in mn.classes.iter().enumerate() {
        if c.is_empty() {
            return Err(MultinetViolation::Structure(format!("class {i} is empty")));
        }
        for &l in c {
            if l >= n || class_of[l].is_some() {
                return Err(MultinetViolation::Structure(format!("line {l} is missing or repeated")));
            }
            class_of[l] = Some(i);
        }
    }
    if class_of.iter().any(Option::is_none) {
        return Err(MultinetViolation::Structure("classes do not cover every line".into()));
    }
    let x: BTreeSet<usize> = mn.base_locus.iter().copied().collect();
    if let Some(&p) = x.iter().find(|&&p| p >= inc.points().len() || !inc.is_m(p)) {
        return Err(MultinetViolation::Structure(format!("base point {p} is not a multiple point")));
    }

    for (i, c) in mn.classes.iter().enumerate() {
        let total: u32 = c.iter().map(|&l| mn.mult[l]).sum();
        if total != mn.d {
            return Err(MultinetViolation::Weight { class: i, total, d: mn.d });
        }
    }

    for a in 0..n {
        for b in a + 1..n {
            if class_of[a] == class_of[b] {
                continue;
            }
            let p = inc.meet(a, b).expect("distinct lines meet");
            if !x.contains(&p) {
                return Err(MultinetViolation::CrossPoint { lines: (a, b), point: p });
            }
        }
    }

    for &p in &x {
        let sums: Vec<u32> = mn
            .classes
            .iter()
            .map(|c| c.iter().filter(|&&l| inc.point(p).contains(l)).map(|&l| mn.mult[l]).sum())
            .collect();
        if sums.iter().any(|s| *s != sums[0]) {
            return Err(MultinetViolation::BaseLocus { point: p, sums });
        }
    }

    for (i, c) in mn.classes.iter().enumerate() {
        let mut reached = vec![c[0]];
        let mut frontier = vec![c[0]];
        while let Some(l) = frontier.pop() {
            for &m in c {
                if !reached.contains(&m) && !x.contains(&inc.meet(l, m).expect("distinct lines meet")) {
                    reached.push(m);
                    frontier.push(m);
                }
            }
        }
        if let Some(&m) = c.iter().find(|m| !reached.contains(m)) {
            return Err(MultinetViolation::Disconnected { class: i, lines: (c[0], m) });
        }
    }
    Ok(())
}

struct PartitionSearch<'a> {
    inc: &'a IncidenceStructure,
    /// Groups of lines forced together by double points.
    blocks: Vec<Vec<usize>>,
    k_max: usize,
    m_max: u32,
    assign: Vec<usize>,
    out: Vec<Multinet>,
}

impl PartitionSearch<'_> {
    fn walk(&mut self, b: usize, used: usize) {
        if b == self.blocks.len() {
            if used >= 3 {
                self.finish(used);
            }
            return;
        }
        let remaining = self.blocks.len() - b;
        if used + remaining < 3 {
            return;
        }
        for class in 0..=used.min(self.k_max - 1) {
            self.assign[b] = class;
            self.walk(b + 1, used.max(class + 1));
        }
    }

    fn finish(&mut self, k: usize) {
        let n = self.inc.n_lines();
        let mut line_class = vec![0; n];
        for (b, block) in self.blocks.iter().enumerate() {
            for &l in block {
                line_class[l] = self.assign[b];
            }
        }
        let mut classes = vec![Vec::new(); k];
        for (l, &c) in line_class.iter().enumerate() {
            classes[c].push(l);
        }
        // Every point where classes mix must see all of them.
        let mut base = Vec::new();
        for (pid, p) in self.inc.points().iter().enumerate() {
            let seen: BTreeSet<usize> = p.incident.iter().map(|&l| line_class[l]).collect();
            if seen.len() > 1 {
                if seen.len() < k {
                    return;
                }
                base.push(pid);
            }
        }
        let in_base = |pid: usize| base.binary_search(&pid).is_ok();
        for class in &classes {
            let mut comp: Vec<usize> = vec![class[0]];
            let mut i = 0;
            while i < comp.len() {
                let l = comp[i];
                for &m in class {
                    if !comp.contains(&m) {
                        let p = self.inc.meet(l, m).expect("distinct lines meet");
                        if !in_base(p) {
                            comp.push(m);
                        }
                    }
                }
                i += 1;
            }
            if comp.len() != class.len() {
                return;
            }
        }
        self.weights(&classes, &line_class, &base);
    }

    /// Lexicographic enumeration of multiplicity vectors with gcd 1.
    fn weights(&mut self, classes: &[Vec<usize>], line_class: &[usize], base: &[usize]) {
        let n = self.inc.n_lines();
        let k = classes.len();
        let mut m = vec![1u32; n];
        loop {
            let d: u32 = classes[0].iter().map(|&l| m[l]).sum();
            let balanced = classes.iter().all(|c| c.iter().map(|&l| m[l]).sum::<u32>() == d)
                && base.iter().all(|&p| {
                    let mut sums = vec![0u32; k];
                    for &l in self.inc.lines_through(p) {
                        sums[line_class[l]] += m[l];
                    }
                    sums.iter().all(|s| *s == sums[0])
                });
            if balanced && m.iter().fold(0u32, |g, x| g.gcd(x)) == 1 {
                self.out.push(Multinet {
                    classes: classes.to_vec(),
                    mult: m.clone(),
                    base_locus: base.to_vec(),
                    d,
                });
            }
            // next vector
            let mut i = n;
            loop {
                if i == 0 {
                    return;
                }
                i -= 1;
                if m[i] < self.m_max {
                    m[i] += 1;
                    break;
                }
                m[i] = 1;
            }
        }
    }
}

/// All multinets with at most `k_max` classes and multiplicities at most
/// `m_max`, one per relabeling class, with the smallest admissible base
/// locus and coprime multiplicities.
pub fn search_multinets(
    inc: &IncidenceStructure,
    k_max: usize,
    m_max: u32,
    guard: usize,
) -> Result<Vec<Multinet>> {
    let n = inc.n_lines();
    if n > guard {
        return Err(Error::SizeGuard { lines: n, guard });
    }
    if k_max < 3 || m_max == 0 {
        return Ok(Vec::new());
    }
    // Lines meeting at a double point share a class.
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        parent[x] = r;
        r
    }
    for p in inc.points() {
        if p.incident.len() == 2 {
            let (a, b) = (root(&mut parent, p.incident[0]), root(&mut parent, p.incident[1]));
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut index = vec![usize::MAX; n];
    for l in 0..n {
        let r = root(&mut parent, l);
        if index[r] == usize::MAX {
            index[r] = blocks.len();
            blocks.push(Vec::new());
        }
        blocks[index[r]].push(l);
    }
    let mut search = PartitionSearch {
        inc,
        assign: vec![0; blocks.len()],
        blocks,
        k_max,
        m_max,
        out: Vec::new(),
    };
    search.walk(0, 0);
    Ok(search.out)
}

/// One line per multinet found, or a single line stating there is none.
pub fn report_global_components(inc: &IncidenceStructure, multinets: &[Multinet]) -> Vec<String> {
    if multinets.is_empty() {
        let reason = if inc.check_condition_c().holds() && !inc.is_concurrent() {
            " (condition (C) holds and the lines are not concurrent)"
        } else {
            ""
        };
        return vec![format!("no global component{reason}")];
    }
    multinets
        .iter()
        .map(|mn| {
            format!(
                "({},{})-multinet present => global component of dimension {}",
                mn.k(),
                mn.d,
                mn.k() - 1
            )
        })
        .collect()
}
