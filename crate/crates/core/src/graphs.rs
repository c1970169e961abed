//! Paths, cycles, maximal graphs and zones.
//!
//! A regular graph is a connected component of the incidence between
//! M-points and the lines carrying at least two of them. Lines through a
//! single isolated M-point, and lines with no M-point at all, form singleton
//! graphs. The zone of a graph is the set of lines through its M-points.

use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::incidence::IncidenceStructure;

/// A sequence of distinct lines whose consecutive members meet in M.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathSeq {
    pub lines: Vec<usize>,
    /// `joints[i]` is the meeting point of `lines[i]` and `lines[i + 1]`; for
    /// a cycle the last entry closes it up.
    pub joints: Vec<usize>,
    pub is_cycle: bool,
}

impl PathSeq {
    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn contains(&self, line: usize) -> bool {
        self.lines.contains(&line)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphKind {
    Regular,
    IsolatedPoint,
    NoMultiplePoint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineGraph {
    pub members: Vec<usize>,
    pub joint_points: Vec<usize>,
    pub kind: GraphKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Zone {
    pub graph: LineGraph,
    pub members: Vec<usize>,
}

/// Lines carrying at least two M-points.
pub fn regular_lines(inc: &IncidenceStructure) -> Vec<usize> {
    (0..inc.n_lines())
        .filter(|&l| inc.m_points_on(l).len() >= 2)
        .collect()
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut c = x;
    while parent[c] != r {
        let next = parent[c];
        parent[c] = r;
        c = next;
    }
    r
}

pub fn maximal_graphs(inc: &IncidenceStructure) -> Vec<LineGraph> {
    let n = inc.n_lines();
    let regular = regular_lines(inc);
    let mut parent: Vec<usize> = (0..n).collect();
    for &x in inc.m_points() {
        let through: Vec<usize> = inc
            .lines_through(x)
            .iter()
            .copied()
            .filter(|&l| inc.m_points_on(l).len() >= 2)
            .collect();
        for w in through.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }

    let mut graphs = Vec::new();
    let mut roots: Vec<usize> = regular.iter().map(|&l| find(&mut parent, l)).collect();
    roots.sort_unstable();
    roots.dedup();
    for root in roots {
        let members: Vec<usize> = regular
            .iter()
            .copied()
            .filter(|&l| find(&mut parent, l) == root)
            .collect();
        let joints: BTreeSet<usize> = members
            .iter()
            .flat_map(|&l| inc.m_points_on(l).iter().copied())
            .collect();
        graphs.push(LineGraph {
            members,
            joint_points: joints.into_iter().collect(),
            kind: GraphKind::Regular,
        });
    }
    for &x in inc.m_points() {
        if inc.is_isolated(x) {
            // all singleton paths through an isolated point are identified
            // with the one on the smallest line index
            graphs.push(LineGraph {
                members: vec![inc.lines_through(x)[0]],
                joint_points: vec![x],
                kind: GraphKind::IsolatedPoint,
            });
        }
    }
    for l in 0..n {
        if inc.m_points_on(l).is_empty() {
            graphs.push(LineGraph {
                members: vec![l],
                joint_points: vec![],
                kind: GraphKind::NoMultiplePoint,
            });
        }
    }
    graphs.sort_by_key(|g| g.members[0]);
    graphs
}

pub fn zone_of(inc: &IncidenceStructure, graph: &LineGraph) -> Zone {
    let mut members: BTreeSet<usize> = graph
        .joint_points
        .iter()
        .flat_map(|&x| inc.lines_through(x).iter().copied())
        .collect();
    if graph.kind == GraphKind::NoMultiplePoint {
        members.extend(graph.members.iter().copied());
    }
    Zone {
        graph: graph.clone(),
        members: members.into_iter().collect(),
    }
}

pub fn zones(inc: &IncidenceStructure, graphs: &[LineGraph]) -> Vec<Zone> {
    graphs.iter().map(|g| zone_of(inc, g)).collect()
}

/// Every cycle, i.e. closed sequence of at least three distinct lines whose
/// consecutive members meet in distinct M-points. Each cycle is reported once,
/// rotated to start at its smallest line and oriented so the second line is
/// smaller than the last.
pub fn cycles(inc: &IncidenceStructure) -> Vec<PathSeq> {
    cycles_within(inc, &regular_lines(inc))
}

/// Cycles using only the given lines.
pub fn cycles_within(inc: &IncidenceStructure, allowed: &[usize]) -> Vec<PathSeq> {
    let allowed: BTreeSet<usize> = allowed.iter().copied().collect();
    let neighbours = |l: usize| -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for &x in inc.m_points_on(l) {
            for &m in inc.lines_through(x) {
                if m != l && allowed.contains(&m) {
                    out.push((m, x));
                }
            }
        }
        out.sort_unstable();
        out
    };

    struct Dfs<'a> {
        start: usize,
        lines: Vec<usize>,
        joints: Vec<usize>,
        out: &'a mut Vec<PathSeq>,
    }

    fn walk(dfs: &mut Dfs, nb: &dyn Fn(usize) -> Vec<(usize, usize)>) {
        let last = *dfs.lines.last().unwrap();
        for (next, joint) in nb(last) {
            if dfs.joints.contains(&joint) {
                continue;
            }
            if next == dfs.start {
                if dfs.lines.len() >= 3 && dfs.lines[1] < last {
                    let mut joints = dfs.joints.clone();
                    joints.push(joint);
                    dfs.out.push(PathSeq {
                        lines: dfs.lines.clone(),
                        joints,
                        is_cycle: true,
                    });
                }
                continue;
            }
            if next < dfs.start || dfs.lines.contains(&next) {
                continue;
            }
            dfs.lines.push(next);
            dfs.joints.push(joint);
            walk(dfs, nb);
            dfs.lines.pop();
            dfs.joints.pop();
        }
    }

    let mut out = Vec::new();
    for &s in &allowed {
        let mut dfs = Dfs {
            start: s,
            lines: vec![s],
            joints: vec![],
            out: &mut out,
        };
        walk(&mut dfs, &neighbours);
    }
    out.sort_by(|a, b| (a.len(), &a.lines).cmp(&(b.len(), &b.lines)));
    out
}

/// Why the zones of the maximal graphs fail to partition the lines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PartitionCheck {
    Partition,
    Uncovered { line: usize },
    Overlap { line: usize, zones: (usize, usize) },
}

impl PartitionCheck {
    pub fn holds(&self) -> bool {
        matches!(self, PartitionCheck::Partition)
    }
}

pub fn verify_zone_partition(inc: &IncidenceStructure) -> Result<PartitionCheck> {
    if let crate::incidence::ConditionC::Fails { point, .. } = inc.check_condition_c() {
        return Err(Error::Precondition(format!(
            "condition (C) fails at {}",
            inc.point_name(point)
        )));
    }
    let zs = zones(inc, &maximal_graphs(inc));
    let mut owner: Vec<Option<usize>> = vec![None; inc.n_lines()];
    for (zi, z) in zs.iter().enumerate() {
        for &l in &z.members {
            if let Some(prev) = owner[l] {
                return Ok(PartitionCheck::Overlap {
                    line: l,
                    zones: (prev, zi),
                });
            }
            owner[l] = Some(zi);
        }
    }
    if let Some(line) = owner.iter().position(Option::is_none) {
        return Ok(PartitionCheck::Uncovered { line });
    }
    Ok(PartitionCheck::Partition)
}

/// A path inside `graph` whose first two lines meet at `x` and whose last two
/// meet at `y`, for two distinct joint points of the graph.
pub fn realizing_path(
    inc: &IncidenceStructure,
    graph: &LineGraph,
    x: usize,
    y: usize,
) -> Option<PathSeq> {
    let members: BTreeSet<usize> = graph.members.iter().copied().collect();
    let through = |p: usize| -> Vec<usize> {
        inc.lines_through(p)
            .iter()
            .copied()
            .filter(|l| members.contains(l))
            .collect()
    };
    let (at_x, at_y) = (through(x), through(y));
    for &a in &at_x {
        for &b in &at_x {
            for &c in &at_y {
                for &d in &at_y {
                    if a == b || c == d || a == d || a == c || b == d {
                        continue;
                    }
                    if let Some(mid) = shortest_line_path(inc, &members, b, c, &[a, d]) {
                        let mut lines = vec![a];
                        lines.extend(mid);
                        lines.push(d);
                        let joints: Vec<usize> = lines
                            .windows(2)
                            .map(|w| inc.meet(w[0], w[1]).unwrap())
                            .collect();
                        if joints.iter().all(|&j| inc.is_m(j)) {
                            return Some(PathSeq {
                                lines,
                                joints,
                                is_cycle: false,
                            });
                        }
                    }
                }
            }
        }
    }
    None
}

fn shortest_line_path(
    inc: &IncidenceStructure,
    members: &BTreeSet<usize>,
    from: usize,
    to: usize,
    avoid: &[usize],
) -> Option<Vec<usize>> {
    let mut prev = vec![usize::MAX; inc.n_lines()];
    let mut queue = VecDeque::from([from]);
    prev[from] = from;
    while let Some(l) = queue.pop_front() {
        if l == to {
            let mut path = vec![to];
            let mut c = to;
            while c != from {
                c = prev[c];
                path.push(c);
            }
            path.reverse();
            return Some(path);
        }
        for &x in inc.m_points_on(l) {
            for &m in inc.lines_through(x) {
                if members.contains(&m) && prev[m] == usize::MAX && !avoid.contains(&m) {
                    prev[m] = l;
                    queue.push_back(m);
                }
            }
        }
    }
    None
}

/// Joint points of a regular graph: M-points on at least two member lines.
pub fn shared_joints(inc: &IncidenceStructure, graph: &LineGraph) -> Vec<usize> {
    graph
        .joint_points
        .iter()
        .copied()
        .filter(|&x| {
            inc.lines_through(x)
                .iter()
                .filter(|l| graph.members.contains(l))
                .count()
                >= 2
        })
        .collect()
}
