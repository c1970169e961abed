//! Ground truth for small instances.
//!
//! [`oracle_search`] enumerates integer lifts `b_H = class_H + k_H` with
//! `|k_H| ≤ K` depth-first, line by line, in the order `0, −1, 1, −2, 2, …`.
//! Values are scaled to a common denominator and handled as `i128`.
//!
//! [`obstruction_check`] generalizes the classical counting argument: if
//! the multiple points with integral class sum, each counted once, cover
//! every line of non-integral class exactly `λ` times and every other line
//! at most `λ` times, then summing their point values gives
//! `Σ b(p) = −Σ ν_H k_H ≥ 0`, so every such `b(p)` vanishes. The resulting
//! linear system is then reduced exactly and checked for a forced value
//! incompatible with the classes.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::admissibility::{LocalSystem, ResidueVector};
use crate::format::format_rational;
use crate::geometry::Q;
use crate::incidence::IncidenceStructure;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShiftSearchConfig {
    /// Largest `|k_H|` tried on each line.
    pub bound: u32,
    /// Maximum number of search nodes.
    pub node_budget: u64,
}

impl Default for ShiftSearchConfig {
    fn default() -> Self {
        ShiftSearchConfig {
            bound: 3,
            node_budget: 50_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found { residues: ResidueVector, nodes: u64 },
    /// No admissible lift with `|k_H| ≤ K`; says nothing about larger shifts.
    ExhaustedWithinBound { nodes: u64 },
    BudgetExceeded { nodes: u64 },
    /// The common denominator does not fit the search arithmetic.
    TooLarge,
}

impl SearchOutcome {
    pub fn nodes(&self) -> u64 {
        match self {
            SearchOutcome::Found { nodes, .. }
            | SearchOutcome::ExhaustedWithinBound { nodes }
            | SearchOutcome::BudgetExceeded { nodes } => *nodes,
            SearchOutcome::TooLarge => 0,
        }
    }
}

struct Search<'a> {
    n: usize,
    bound: i128,
    scale: i128,
    /// Scaled classes.
    c: Vec<i128>,
    /// Points with multiplicity ≥ 3 closed off by each line (its highest line).
    closing: Vec<Vec<&'a [usize]>>,
    /// Smallest and largest attainable Σ of values over lines `i..n`.
    low: Vec<i128>,
    high: Vec<i128>,
    k: Vec<i128>,
    nodes: u64,
    budget: u64,
}

enum Step {
    Found,
    Exhausted,
    Budget,
}

impl Search<'_> {
    fn value(&self, line: usize) -> i128 {
        self.c[line] + self.k[line] * self.scale
    }

    fn positive_integer(&self, v: i128) -> bool {
        v > 0 && v % self.scale == 0
    }

    fn consistent(&self, line: usize) -> bool {
        if self.positive_integer(self.value(line)) {
            return false;
        }
        self.closing[line].iter().all(|pts| {
            let v: i128 = pts.iter().map(|&l| self.value(l)).sum();
            !self.positive_integer(v)
        })
    }

    fn order(&self) -> Vec<i128> {
        let mut out = vec![0];
        for m in 1..=self.bound {
            out.push(-m);
            out.push(m);
        }
        out
    }

    fn dfs(&mut self, line: usize, partial: i128) -> Step {
        let rest = self.n - line - 1;
        if rest == 0 {
            // The zero-sum constraint forces the last shift.
            self.nodes += 1;
            if self.nodes > self.budget {
                return Step::Budget;
            }
            let needed = -(partial + self.c[line]);
            if needed % self.scale != 0 || (needed / self.scale).abs() > self.bound {
                return Step::Exhausted;
            }
            self.k[line] = needed / self.scale;
            return if self.consistent(line) { Step::Found } else { Step::Exhausted };
        }
        for k in self.order() {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Step::Budget;
            }
            self.k[line] = k;
            let next = partial + self.value(line);
            if next + self.low[line + 1] > 0 || next + self.high[line + 1] < 0 || !self.consistent(line) {
                continue;
            }
            match self.dfs(line + 1, next) {
                Step::Exhausted => {}
                other => return other,
            }
        }
        Step::Exhausted
    }
}

fn common_denominator(ls: &LocalSystem) -> BigInt {
    ls.classes()
        .iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

pub fn oracle_search(inc: &IncidenceStructure, ls: &LocalSystem, cfg: &ShiftSearchConfig) -> SearchOutcome {
    let n = inc.n_lines();
    let denom = common_denominator(ls);
    let Some(scale) = denom.to_i128().filter(|d| *d < (1i128 << 80)) else {
        return SearchOutcome::TooLarge;
    };
    let c: Vec<i128> = ls
        .classes()
        .iter()
        .map(|q| (q.numer() * (&denom / q.denom())).to_i128().expect("class < 1"))
        .collect();
    let mut closing: Vec<Vec<&[usize]>> = vec![Vec::new(); n];
    for p in inc.points() {
        if p.incident.len() >= 3 {
            let last = *p.incident.iter().max().expect("non-empty");
            closing[last].push(&p.incident);
        }
    }
    // A line of class 0 cannot take a positive value.
    let bound = cfg.bound as i128;
    let mut low = vec![0i128; n + 1];
    let mut high = vec![0i128; n + 1];
    for i in (0..n).rev() {
        low[i] = low[i + 1] + c[i] - bound * scale;
        high[i] = high[i + 1] + if c[i] == 0 { 0 } else { c[i] + bound * scale };
    }
    let mut s = Search {
        n,
        bound,
        scale,
        c,
        closing,
        low,
        high,
        k: vec![0; n],
        nodes: 0,
        budget: cfg.node_budget,
    };
    let step = if n == 0 { Step::Exhausted } else { s.dfs(0, 0) };
    match step {
        Step::Found => {
            let residues = (0..n)
                .map(|i| &ls.classes()[i] + Q::from_integer(BigInt::from(s.k[i])))
                .collect();
            SearchOutcome::Found {
                residues: ResidueVector::new_unchecked(residues),
                nodes: s.nodes,
            }
        }
        Step::Exhausted => SearchOutcome::ExhaustedWithinBound { nodes: s.nodes },
        Step::Budget => SearchOutcome::BudgetExceeded { nodes: s.nodes },
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Obstruction {
    Obstructed { transcript: Vec<String> },
    Inconclusive,
}

fn set(ids: &[usize]) -> String {
    let parts: Vec<String> = ids.iter().map(usize::to_string).collect();
    format!("{{{}}}", parts.join(", "))
}

fn row_text(row: &[Q], vars: &[usize], rhs: &Q) -> String {
    let mut terms = Vec::new();
    for (j, coef) in row.iter().enumerate() {
        if coef.is_zero() {
            continue;
        }
        let name = format!("b_{}", vars[j]);
        let sign = if coef.is_negative() { "-" } else { "+" };
        let mag = coef.abs();
        let term = if mag.is_one() { name } else { format!("{} {}", format_rational(&mag), name) };
        terms.push((sign, term));
    }
    let mut s = String::new();
    for (i, (sign, term)) in terms.iter().enumerate() {
        match (i, *sign) {
            (0, "-") => s.push_str(&format!("-{term}")),
            (0, _) => s.push_str(term),
            (_, sign) => s.push_str(&format!(" {sign} {term}")),
        }
    }
    if s.is_empty() {
        s.push('0');
    }
    format!("{s} = {}", format_rational(rhs))
}

/// Reduced row echelon form in place; returns pivot columns per row.
fn rref(rows: &mut [(Vec<Q>, Q)], width: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..width {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i].0[col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r].0[col].recip();
        for x in rows[r].0.iter_mut() {
            *x *= &inv;
        }
        rows[r].1 *= &inv;
        for i in 0..rows.len() {
            if i != r && !rows[i].0[col].is_zero() {
                let f = rows[i].0[col].clone();
                let (pr, pv) = rows[r].clone();
                for (x, y) in rows[i].0.iter_mut().zip(&pr) {
                    *x -= &f * y;
                }
                rows[i].1 -= &f * pv;
            }
        }
        pivots.push(col);
        r += 1;
    }
    pivots
}

pub fn obstruction_check(inc: &IncidenceStructure, ls: &LocalSystem) -> Obstruction {
    let n = inc.n_lines();
    let class = |l: usize| &ls.classes()[l];
    let selected: Vec<usize> = inc
        .m_points()
        .iter()
        .copied()
        .filter(|&p| inc.lines_through(p).iter().map(|&l| class(l)).sum::<Q>().is_integer())
        .collect();
    if selected.is_empty() {
        return Obstruction::Inconclusive;
    }
    let cover: Vec<usize> = (0..n)
        .map(|l| selected.iter().filter(|&&p| inc.point(p).contains(l)).count())
        .collect();
    let fractional: Vec<usize> = (0..n).filter(|&l| !class(l).is_zero()).collect();
    let integral: Vec<usize> = (0..n).filter(|&l| class(l).is_zero()).collect();
    let lambda = cover.iter().copied().max().unwrap_or(0);
    if lambda == 0 || fractional.iter().any(|&l| cover[l] != lambda) {
        return Obstruction::Inconclusive;
    }

    let mut t = Vec::new();
    let mut by_class: BTreeMap<Q, Vec<usize>> = BTreeMap::new();
    for l in 0..n {
        by_class.entry(class(l).clone()).or_default().push(l);
    }
    for (c, lines) in &by_class {
        if c.is_zero() {
            t.push(format!("b_j = k_j for j in {} with k_j integer", set(lines)));
        } else {
            t.push(format!(
                "b_i = k_i + {} for i in {} with k_i integer",
                format_rational(c),
                set(lines)
            ));
        }
    }
    if !integral.is_empty() {
        t.push(format!(
            "b_j is not a positive integer, so k_j <= 0 for j in {}",
            set(&integral)
        ));
    }
    let names: Vec<String> = selected.iter().map(|&p| inc.point_name(p)).collect();
    t.push(format!(
        "points with integral sum: {}",
        names.join(", ")
    ));
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for l in 0..n {
        groups.entry(cover[l]).or_default().push(l);
    }
    let terms: Vec<String> = groups
        .iter()
        .rev()
        .filter(|(w, _)| **w > 0)
        .map(|(w, lines)| format!("{w} (sum of b_i for i in {})", set(lines)))
        .collect();
    let deficient: Vec<usize> = integral.iter().copied().filter(|&l| cover[l] < lambda).collect();
    let weighted = |var: &str| -> String {
        let parts: Vec<String> = deficient
            .iter()
            .map(|&l| match lambda - cover[l] {
                1 => format!("{var}_{l}"),
                w => format!("{w} {var}_{l}"),
            })
            .collect();
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    };
    t.push(format!("sum of b(p) = {}", terms.join(" + ")));
    t.push(format!(
        "= {lambda} (sum of all b_i) - ({}) = -({}) >= 0",
        weighted("b"),
        weighted("k"),
    ));
    t.push("each b(p) is an integer and not a positive integer, so b(p) = 0 for every selected point".into());
    if !deficient.is_empty() {
        t.push(format!("hence k_j = 0 for j in {}", set(&deficient)));
    }

    // Unknowns: lines not pinned to zero.
    let vars: Vec<usize> = (0..n).filter(|l| !deficient.contains(l)).collect();
    let col = |l: usize| vars.iter().position(|&v| v == l);
    let equation = |p: usize| -> (Vec<Q>, Q) {
        let mut row = vec![Q::zero(); vars.len()];
        for &l in inc.lines_through(p) {
            if let Some(j) = col(l) {
                row[j] += Q::one();
            }
        }
        (row, Q::zero())
    };
    for &p in &selected {
        let (row, rhs) = equation(p);
        let line = row_text(&row, &vars, &rhs);
        if !t.contains(&line) && line != "0 = 0" {
            t.push(line);
        }
    }
    t.push(row_text(&vec![Q::one(); vars.len()], &vars, &Q::zero()));

    // Connected groups of equations first, then everything together.
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for &p in &selected {
        let touching: Vec<usize> = groups
            .iter()
            .enumerate()
            .filter(|(_, g)| {
                g.iter().any(|&q| {
                    inc.lines_through(q)
                        .iter()
                        .any(|&l| col(l).is_some() && inc.point(p).contains(l))
                })
            })
            .map(|(i, _)| i)
            .collect();
        let mut merged = vec![p];
        for &i in touching.iter().rev() {
            merged.extend(groups.remove(i));
        }
        merged.sort_unstable();
        groups.push(merged);
    }
    groups.sort();
    for group in &groups {
        let rows: Vec<(Vec<Q>, Q)> = group.iter().map(|&p| equation(p)).collect();
        if let Some(conclusion) = contradiction(rows, &vars, ls) {
            let names: Vec<String> = group.iter().map(|&p| inc.point_name(p)).collect();
            t.push(format!("b(p) = 0 at {} gives", names.join(", ")));
            t.push(conclusion);
            return Obstruction::Obstructed { transcript: t };
        }
    }
    let mut rows: Vec<(Vec<Q>, Q)> = selected.iter().map(|&p| equation(p)).collect();
    rows.push((vec![Q::one(); vars.len()], Q::zero()));
    match contradiction(rows, &vars, ls) {
        Some(conclusion) => {
            t.push(conclusion);
            Obstruction::Obstructed { transcript: t }
        }
        None => Obstruction::Inconclusive,
    }
}

/// The final transcript line if the equations force an inconsistency or a
/// value incompatible with the classes.
fn contradiction(mut rows: Vec<(Vec<Q>, Q)>, vars: &[usize], ls: &LocalSystem) -> Option<String> {
    let pivots = rref(&mut rows, vars.len());
    if rows.iter().any(|(row, rhs)| row.iter().all(Zero::is_zero) && !rhs.is_zero()) {
        return Some("the system is inconsistent, which is impossible".into());
    }
    let mut by_value: BTreeMap<Q, Vec<usize>> = BTreeMap::new();
    for (i, &pc) in pivots.iter().enumerate() {
        let (row, v) = &rows[i];
        if !row.iter().enumerate().all(|(j, x)| j == pc || x.is_zero()) {
            continue;
        }
        let line = vars[pc];
        let diff = v - &ls.classes()[line];
        if !diff.is_integer() || (v.is_integer() && v.is_positive()) {
            by_value.entry(v.clone()).or_default().push(line);
        }
    }
    if by_value.is_empty() {
        return None;
    }
    let parts: Vec<String> = by_value
        .iter()
        .map(|(v, lines)| {
            let names: Vec<String> = lines.iter().map(|l| format!("b_{l}")).collect();
            format!("{} = {}", names.join(" = "), format_rational(v))
        })
        .collect();
    Some(format!("{} which is impossible", parts.join(", ")))
}
