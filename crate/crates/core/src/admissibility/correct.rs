//! Constructive correctors.
//!
//! All of them share one engine. Starting from residues normalized at `h0`,
//! lines of the regular graphs (minus `h0`) are peeled off one leaf at a
//! time: a line whose remaining neighbours contribute at most one point with
//! a positive integral sum hands the largest such sum among the points it
//! alone still covers to `h0`. On a forest this is an optimal cover of the
//! offending points, so the total moved out of a zone never reaches the
//! zone's class sum. Cycles are dealt with first, either by opening them
//! through a single-point line or by an explicit cover of an even cycle.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::{
    frac, normalize, positive_integer, verify_residues, AdmCertificate, LocalSystem, ResidueVector,
    Step, StepKind, Strategy, StrategyError,
};
use crate::geometry::Q;
use crate::graphs::{cycles, cycles_within, regular_lines, PathSeq};
use crate::incidence::{ConditionC, IncidenceStructure};

/// A line may serve as base line unless its only M-point is shared with a
/// regular line.
pub fn valid_h0(inc: &IncidenceStructure, h0: usize) -> bool {
    if h0 >= inc.n_lines() {
        return false;
    }
    match inc.m_points_on(h0) {
        [x] => inc.is_isolated(*x),
        _ => true,
    }
}

/// Smallest line of the unique cycle if there is exactly one, else the
/// smallest line with two M-points, else line 0.
pub fn choose_h0(inc: &IncidenceStructure) -> usize {
    let cs = cycles(inc);
    if cs.len() == 1 {
        return *cs[0].lines.iter().min().expect("cycles are non-empty");
    }
    regular_lines(inc).first().copied().unwrap_or(0)
}

/// M-points of `line` adjacent to some M-point off `line`.
pub fn exposed_points(inc: &IncidenceStructure, line: usize) -> Vec<usize> {
    inc.m_points_on(line)
        .iter()
        .copied()
        .filter(|&x| {
            inc.lines_through(x)
                .iter()
                .any(|&l| l != line && inc.m_points_on(l).len() >= 2)
        })
        .collect()
}

fn require_c(inc: &IncidenceStructure) -> Result<(), StrategyError> {
    match inc.check_condition_c() {
        ConditionC::Holds => Ok(()),
        ConditionC::Fails { point, .. } => Err(StrategyError::ConditionC(point)),
    }
}

fn require_base(inc: &IncidenceStructure, rv: &ResidueVector, h0: usize) -> Result<(), StrategyError> {
    if !valid_h0(inc, h0) {
        return Err(StrategyError::InvalidBase(h0));
    }
    let normalized = rv.len() == inc.n_lines()
        && rv.as_slice().iter().sum::<Q>().is_zero()
        && rv
            .as_slice()
            .iter()
            .enumerate()
            .all(|(l, a)| l == h0 || &frac(a) == a);
    if normalized {
        Ok(())
    } else {
        Err(StrategyError::NotNormalized(h0))
    }
}

struct Engine<'a> {
    inc: &'a IncidenceStructure,
    h0: usize,
    a: Vec<Q>,
    trace: Vec<Step>,
}

impl<'a> Engine<'a> {
    fn new(inc: &'a IncidenceStructure, rv: &ResidueVector, h0: usize) -> Self {
        Engine {
            inc,
            h0,
            a: rv.as_slice().to_vec(),
            trace: Vec::new(),
        }
    }

    fn value(&self, p: usize) -> Q {
        self.inc.lines_through(p).iter().map(|&l| &self.a[l]).sum()
    }

    /// Positive integral point sum, if any.
    fn demand(&self, p: usize) -> Option<BigInt> {
        positive_integer(&self.value(p))
    }

    fn shift(&mut self, from: usize, to: usize, amount: BigInt, kind: StepKind, point: Option<usize>) {
        if amount.is_zero() {
            return;
        }
        let q = Q::from_integer(amount.clone());
        self.a[from] -= &q;
        self.a[to] += &q;
        self.trace.push(Step {
            kind,
            from,
            to,
            amount,
            point,
        });
    }

    fn off_base(&self, p: usize) -> bool {
        !self.inc.point(p).contains(self.h0)
    }

    /// Remaining lines meeting `l` in a point with positive integral sum.
    fn demanding_neighbours(&self, l: usize, remaining: &BTreeSet<usize>) -> usize {
        remaining
            .iter()
            .filter(|&&m| {
                m != l
                    && self
                        .inc
                        .meet(l, m)
                        .is_some_and(|p| self.inc.is_m(p) && self.off_base(p) && self.demand(p).is_some())
            })
            .count()
    }

    fn peel(&mut self, mut remaining: BTreeSet<usize>) -> Result<(), StrategyError> {
        while !remaining.is_empty() {
            let leaf = remaining
                .iter()
                .copied()
                .find(|&l| self.demanding_neighbours(l, &remaining) <= 1)
                .ok_or_else(|| StrategyError::Cyclic(remaining.iter().copied().collect()))?;
            let best = self
                .inc
                .m_points_on(leaf)
                .iter()
                .copied()
                .filter(|&p| {
                    self.off_base(p)
                        && !self
                            .inc
                            .lines_through(p)
                            .iter()
                            .any(|&m| m != leaf && remaining.contains(&m))
                })
                .filter_map(|p| self.demand(p).map(|d| (d, p)))
                .max_by(|(d1, p1), (d2, p2)| d1.cmp(d2).then(p2.cmp(p1)));
            if let Some((d, p)) = best {
                self.shift(leaf, self.h0, d, StepKind::LeafPeel, Some(p));
            }
            remaining.remove(&leaf);
        }
        Ok(())
    }

    fn isolated(&mut self) {
        for &x in self.inc.m_points() {
            if !self.inc.is_isolated(x) || !self.off_base(x) {
                continue;
            }
            if let Some(d) = self.demand(x) {
                let line = self.inc.lines_through(x)[0];
                self.shift(line, self.h0, d, StepKind::IsolatedPoint, Some(x));
            }
        }
    }

    /// Cuts `c` by moving from one of its lines to a single-point line with
    /// nonzero class through a joint. Returns false if there is no such line.
    fn open(&mut self, c: &PathSeq, working: &mut BTreeSet<usize>, used: &mut BTreeSet<usize>) -> bool {
        let n = c.len();
        for (i, &p) in c.joints.iter().enumerate() {
            let target = self.inc.lines_through(p).iter().copied().find(|&h| {
                h != self.h0
                    && !used.contains(&h)
                    && self.inc.m_points_on(h).len() == 1
                    && !self.a[h].is_zero()
            });
            let Some(target) = target else { continue };
            let (l1, l2) = (c.lines[i], c.lines[(i + 1) % n]);
            let opened = l1.min(l2);
            let amount = self
                .inc
                .m_points_on(opened)
                .iter()
                .filter_map(|&x| self.demand(x))
                .max()
                .unwrap_or_else(BigInt::zero);
            self.shift(opened, target, amount, StepKind::OpenCycle, Some(p));
            working.remove(&opened);
            used.insert(target);
            return true;
        }
        false
    }

    fn open_all(&mut self, working: &mut BTreeSet<usize>) -> Result<(), StrategyError> {
        let mut used = BTreeSet::new();
        loop {
            let allowed: Vec<usize> = working.iter().copied().collect();
            let Some(c) = cycles_within(self.inc, &allowed).into_iter().next() else {
                return Ok(());
            };
            if !self.open(&c, working, &mut used) {
                return Err(StrategyError::NotOpenable(c.lines));
            }
        }
    }

    /// Handles every cycle avoiding `h0`: nothing if a joint carries no
    /// positive integral sum, an opening if one is available, otherwise an
    /// explicit cover.
    fn cover_cycles(&mut self, working: &mut BTreeSet<usize>, allow_odd: bool) -> Result<(), StrategyError> {
        let allowed: Vec<usize> = working.iter().copied().collect();
        let cs = cycles_within(self.inc, &allowed);
        let mut used = BTreeSet::new();
        for c in &cs {
            for &l in &c.lines {
                let neighbours = allowed
                    .iter()
                    .filter(|&&m| m != l && self.inc.meet(l, m).is_some_and(|p| self.inc.is_m(p)))
                    .count();
                if neighbours != 2 {
                    return Err(StrategyError::NotPureCycle(c.lines.clone()));
                }
            }
            if c.joints.iter().any(|&p| self.demand(p).is_none()) {
                continue;
            }
            if self.open(c, working, &mut used) {
                continue;
            }
            if c.len() % 2 == 1 && !allow_odd {
                return Err(StrategyError::OddCycle(c.lines.clone()));
            }
            self.cover(c);
        }
        Ok(())
    }

    /// Smallest integer cover `n_i` of the joints (`n_i + n_{i+1} ≥ d_i`)
    /// that also covers each line's private points, preferring alternation.
    fn cover(&mut self, c: &PathSeq) {
        let m = c.len();
        let small = |b: Option<BigInt>| b.and_then(|v| v.to_i64()).unwrap_or(0);
        let d: Vec<i64> = c.joints.iter().map(|&p| small(self.demand(p))).collect();
        let private: Vec<i64> = c
            .lines
            .iter()
            .map(|&l| {
                self.inc
                    .m_points_on(l)
                    .iter()
                    .filter(|p| !c.joints.contains(p) && self.off_base(**p))
                    .map(|&p| small(self.demand(p)))
                    .max()
                    .unwrap_or(0)
            })
            .collect();

        let alternate = |parity: usize| -> Vec<i64> {
            (0..m)
                .map(|i| {
                    let own = if i % 2 == parity {
                        d[(i + m - 1) % m].max(d[i])
                    } else {
                        0
                    };
                    own.max(private[i])
                })
                .collect()
        };
        let feasible = |n: &[i64]| (0..m).all(|i| n[i] + n[(i + 1) % m] >= d[i]);
        let optimal = min_cycle_cover(&d, &private);
        let best: i64 = optimal.iter().sum();

        let mut choice = (optimal, StepKind::EvenCycleOptimal);
        for parity in [1, 0] {
            let n = alternate(parity);
            if feasible(&n) && n.iter().sum::<i64>() == best {
                choice = (n, StepKind::EvenCycleAlternate);
                break;
            }
        }
        let (n, kind) = choice;
        for i in 0..m {
            let joint = if n[i] >= private[i] { c.joints[i] } else { c.joints[(i + m - 1) % m] };
            self.shift(c.lines[i], self.h0, BigInt::from(n[i]), kind, Some(joint));
        }
    }

    fn finish(self, strategy: Strategy) -> Result<AdmCertificate, StrategyError> {
        let residues = ResidueVector::new_unchecked(self.a);
        let ls = LocalSystem::from_residues(&residues);
        let check = verify_residues(self.inc, &ls, &residues);
        if !check.is_ok() {
            return Err(StrategyError::Unresolved(check.violating_points()));
        }
        Ok(AdmCertificate {
            residues,
            h0: self.h0,
            strategy,
            trace: self.trace,
        })
    }
}

/// Exact minimum of `Σ n_i` subject to `n_i ≥ private_i` and
/// `n_i + n_{i+1 mod m} ≥ d_i`, by dynamic programming around the cycle.
fn min_cycle_cover(d: &[i64], private: &[i64]) -> Vec<i64> {
    let m = d.len();
    let top = d.iter().chain(private).copied().max().unwrap_or(0);
    let width = (top + 1) as usize;
    let mut best: Option<(i64, Vec<i64>)> = None;
    for first in private[0]..=top {
        // cost[v], parent pointers per position
        let mut cost = vec![i64::MAX; width];
        cost[first as usize] = first;
        let mut parents: Vec<Vec<usize>> = Vec::with_capacity(m);
        for i in 1..m {
            let mut next = vec![i64::MAX; width];
            let mut par = vec![0usize; width];
            for v in private[i] as usize..width {
                for (u, &cu) in cost.iter().enumerate() {
                    if cu == i64::MAX || (u + v) < d[i - 1] as usize {
                        continue;
                    }
                    if cu + (v as i64) < next[v] {
                        next[v] = cu + v as i64;
                        par[v] = u;
                    }
                }
            }
            parents.push(par);
            cost = next;
        }
        for (v, &cv) in cost.iter().enumerate() {
            if cv == i64::MAX || (v as i64 + first) < d[m - 1] {
                continue;
            }
            if best.as_ref().is_none_or(|(b, _)| cv < *b) {
                let mut n = vec![0i64; m];
                let mut cur = v;
                for i in (1..m).rev() {
                    n[i] = cur as i64;
                    cur = parents[i - 1][cur];
                }
                n[0] = first;
                best = Some((cv, n));
            }
        }
    }
    best.expect("the all-top assignment is feasible").1
}

fn base_lines(inc: &IncidenceStructure, h0: usize) -> BTreeSet<usize> {
    regular_lines(inc).into_iter().filter(|&l| l != h0).collect()
}

/// At most one cycle, with `h0` on it.
pub fn correct_no_cycle(
    inc: &IncidenceStructure,
    rv: &ResidueVector,
    h0: usize,
) -> Result<AdmCertificate, StrategyError> {
    require_c(inc)?;
    require_base(inc, rv, h0)?;
    let cs = cycles(inc);
    if cs.len() > 1 {
        return Err(StrategyError::TooManyCycles(cs.len()));
    }
    if let Some(c) = cs.first() {
        if !c.contains(h0) {
            return Err(StrategyError::BaseOffCycle(h0));
        }
    }
    let mut engine = Engine::new(inc, rv, h0);
    engine.peel(base_lines(inc, h0))?;
    engine.isolated();
    engine.finish(Strategy::NoCycle)
}

/// All cycles share a line; the smallest shared line becomes the base line
/// and the residues are renormalized there.
pub fn correct_common_line(
    inc: &IncidenceStructure,
    rv: &ResidueVector,
) -> Result<AdmCertificate, StrategyError> {
    require_c(inc)?;
    let cs = cycles(inc);
    let h0 = match cs.split_first() {
        None => choose_h0(inc),
        Some((first, rest)) => first
            .lines
            .iter()
            .copied()
            .filter(|l| rest.iter().all(|c| c.contains(*l)))
            .min()
            .ok_or(StrategyError::NoCommonLine)?,
    };
    let rv = normalize(&LocalSystem::from_residues(rv), h0);
    require_base(inc, &rv, h0)?;
    let mut engine = Engine::new(inc, &rv, h0);
    engine.peel(base_lines(inc, h0))?;
    engine.isolated();
    engine.finish(Strategy::CommonLine)
}

/// Every cycle avoiding `h0` is opened through a single-point line of
/// nonzero class meeting it at a joint.
pub fn correct_open_cycles(
    inc: &IncidenceStructure,
    rv: &ResidueVector,
    h0: usize,
) -> Result<AdmCertificate, StrategyError> {
    require_c(inc)?;
    require_base(inc, rv, h0)?;
    let mut working = base_lines(inc, h0);
    let mut engine = Engine::new(inc, rv, h0);
    engine.open_all(&mut working)?;
    engine.peel(working)?;
    engine.isolated();
    engine.finish(Strategy::OpenCycles)
}

fn check_exposure(inc: &IncidenceStructure, h0: usize, allow_odd: bool) -> Result<(), StrategyError> {
    let allowed: Vec<usize> = base_lines(inc, h0).into_iter().collect();
    for c in cycles_within(inc, &allowed) {
        if !allow_odd && c.len() % 2 == 1 {
            return Err(StrategyError::OddCycle(c.lines));
        }
        for &l in &c.lines {
            let count = exposed_points(inc, l).len();
            if count > 2 {
                return Err(StrategyError::Exposed { line: l, count });
            }
        }
    }
    Ok(())
}

/// Cycles avoiding `h0` are even and each of their lines exposes at most
/// two points.
pub fn correct_even_cycles(
    inc: &IncidenceStructure,
    rv: &ResidueVector,
    h0: usize,
) -> Result<AdmCertificate, StrategyError> {
    require_c(inc)?;
    require_base(inc, rv, h0)?;
    check_exposure(inc, h0, false)?;
    let mut working = base_lines(inc, h0);
    let mut engine = Engine::new(inc, rv, h0);
    engine.cover_cycles(&mut working, false)?;
    engine.peel(working)?;
    engine.isolated();
    engine.finish(Strategy::EvenCycles)
}

/// Like [`correct_even_cycles`] with odd cycles allowed. Fails with
/// [`StrategyError::Exceptional`] when an odd cycle carries class 1/2 on
/// its lines and class 0 on the other lines through its joints.
pub fn correct_dichotomy(
    inc: &IncidenceStructure,
    rv: &ResidueVector,
    h0: usize,
) -> Result<AdmCertificate, StrategyError> {
    require_c(inc)?;
    require_base(inc, rv, h0)?;
    check_exposure(inc, h0, true)?;
    let ls = LocalSystem::from_residues(rv);
    let allowed: Vec<usize> = base_lines(inc, h0).into_iter().collect();
    if let Some(c) = cycles_within(inc, &allowed)
        .into_iter()
        .find(|c| c.len() % 2 == 1 && super::strategy::is_exceptional(inc, &ls, c))
    {
        return Err(StrategyError::Exceptional(c.lines));
    }
    let mut working = base_lines(inc, h0);
    let mut engine = Engine::new(inc, rv, h0);
    engine.cover_cycles(&mut working, true)?;
    engine.peel(working)?;
    engine.isolated();
    engine.finish(Strategy::Dichotomy)
}
