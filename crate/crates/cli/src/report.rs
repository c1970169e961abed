//! Serializable reports and their text rendering.

use lineadm_core::format::{format_rational, parse_rational};
use lineadm_core::{
    classify, exceptional_cycles, maximal_graphs, zones, AdmCertificate, ConditionC, Decision, GraphKind,
    IncidenceStructure, LocalSystem, ResidueVector, SearchOutcome, StepKind, Q,
};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MPointReport {
    pub point: String,
    pub lines: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphReport {
    pub kind: String,
    pub lines: Vec<String>,
    pub zone: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Entry {
    pub line: String,
    pub value: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StepReport {
    pub kind: String,
    pub from: String,
    pub to: String,
    pub amount: String,
    pub point: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateReport {
    pub h0: String,
    pub strategy: String,
    pub residues: Vec<Entry>,
    pub trace: Vec<StepReport>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchReport {
    pub bound: u32,
    pub outcome: String,
    pub nodes: u64,
    pub residues: Option<Vec<Entry>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SystemReport {
    pub name: String,
    pub verdict: String,
    pub certificate: Option<CertificateReport>,
    pub exceptional_cycles: Vec<Vec<String>>,
    pub search: Option<SearchReport>,
    pub transcript: Vec<String>,
    pub errors: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub name: Option<String>,
    pub lines: Vec<String>,
    pub m_count: usize,
    pub multiplicities: Vec<usize>,
    pub double_points: usize,
    pub m_points: Vec<MPointReport>,
    pub condition_c: bool,
    pub condition_c_witness: Option<String>,
    pub cycles: Vec<Vec<String>>,
    pub graphs: Vec<GraphReport>,
    pub strategy: String,
    pub h0: Option<String>,
    pub dichotomy: bool,
    pub systems: Vec<SystemReport>,
}

fn labels(inc: &IncidenceStructure, ls: &[usize]) -> Vec<String> {
    ls.iter().map(|&l| inc.label(l).to_string()).collect()
}

pub fn entries(inc: &IncidenceStructure, values: &[Q]) -> Vec<Entry> {
    values
        .iter()
        .enumerate()
        .map(|(l, v)| Entry { line: inc.label(l).to_string(), value: format_rational(v) })
        .collect()
}

fn step_kind(k: StepKind) -> &'static str {
    match k {
        StepKind::LeafPeel => "leaf-peel",
        StepKind::IsolatedPoint => "isolated-point",
        StepKind::OpenCycle => "open-cycle",
        StepKind::EvenCycleAlternate => "even-cycle-alternate",
        StepKind::EvenCycleOptimal => "even-cycle-optimal",
    }
}

pub fn certificate(inc: &IncidenceStructure, c: &AdmCertificate) -> CertificateReport {
    CertificateReport {
        h0: inc.label(c.h0).to_string(),
        strategy: c.strategy.name().to_string(),
        residues: entries(inc, c.residues.as_slice()),
        trace: c
            .trace
            .iter()
            .map(|s| StepReport {
                kind: step_kind(s.kind).to_string(),
                from: inc.label(s.from).to_string(),
                to: inc.label(s.to).to_string(),
                amount: s.amount.to_string(),
                point: s.point.map(|p| inc.point_name(p)),
            })
            .collect(),
    }
}

pub fn search(inc: &IncidenceStructure, bound: u32, s: &SearchOutcome) -> SearchReport {
    let (outcome, residues) = match s {
        SearchOutcome::Found { residues, .. } => ("found", Some(entries(inc, residues.as_slice()))),
        SearchOutcome::ExhaustedWithinBound { .. } => ("exhausted-within-bound", None),
        SearchOutcome::BudgetExceeded { .. } => ("budget-exceeded", None),
        SearchOutcome::TooLarge => ("denominator-too-large", None),
    };
    SearchReport { bound, outcome: outcome.to_string(), nodes: s.nodes(), residues }
}

pub fn system(
    inc: &IncidenceStructure,
    name: &str,
    ls: &LocalSystem,
    decision: &Decision,
    bound: u32,
) -> SystemReport {
    let exceptional_cycles = exceptional_cycles(inc, ls).iter().map(|c| labels(inc, &c.lines)).collect();
    let mut r = SystemReport {
        name: name.to_string(),
        verdict: String::new(),
        certificate: None,
        exceptional_cycles,
        search: None,
        transcript: Vec::new(),
        errors: Vec::new(),
    };
    match decision {
        Decision::Admissible(c) => {
            r.verdict = "admissible".into();
            r.certificate = Some(certificate(inc, c));
        }
        Decision::NotAdmissible { transcript, search: s } => {
            r.verdict = "not-admissible".into();
            r.transcript = transcript.clone();
            r.search = Some(search(inc, bound, s));
        }
        Decision::NotCovered { errors, search: s } => {
            r.verdict = "not-covered".into();
            r.errors = errors.iter().map(ToString::to_string).collect();
            r.search = Some(search(inc, bound, s));
        }
    }
    r
}

pub fn analysis(
    name: Option<String>,
    inc: &IncidenceStructure,
    systems: Vec<SystemReport>,
) -> AnalysisReport {
    let report = classify(inc);
    let mut multiplicities: Vec<usize> = inc.m_points().iter().map(|&p| inc.point(p).multiplicity()).collect();
    multiplicities.sort_unstable_by(|a, b| b.cmp(a));
    let graphs = maximal_graphs(inc);
    let zs = zones(inc, &graphs);
    AnalysisReport {
        name,
        lines: inc.labels().to_vec(),
        m_count: inc.m_points().len(),
        multiplicities,
        double_points: inc.points().iter().filter(|p| p.multiplicity() == 2).count(),
        m_points: inc
            .m_points()
            .iter()
            .map(|&p| MPointReport { point: inc.point_name(p), lines: labels(inc, &inc.point(p).incident) })
            .collect(),
        condition_c: report.condition_c.holds(),
        condition_c_witness: match &report.condition_c {
            ConditionC::Holds => None,
            ConditionC::Fails { point, .. } => Some(inc.point_name(*point)),
        },
        cycles: report.cycles.iter().map(|c| labels(inc, &c.lines)).collect(),
        graphs: zs
            .iter()
            .map(|z| GraphReport {
                kind: match z.graph.kind {
                    GraphKind::Regular => "regular",
                    GraphKind::IsolatedPoint => "isolated-point",
                    GraphKind::NoMultiplePoint => "no-multiple-point",
                }
                .to_string(),
                lines: labels(inc, &z.graph.members),
                zone: labels(inc, &z.members),
            })
            .collect(),
        strategy: report.applicable.name().to_string(),
        h0: report.h0.map(|l| inc.label(l).to_string()),
        dichotomy: report.dichotomy,
        systems,
    }
}

/// Rebuilds a residue vector from report entries, in line order.
pub fn load_residues(inc: &IncidenceStructure, entries: &[Entry]) -> Result<ResidueVector, String> {
    if entries.len() != inc.n_lines() {
        return Err(format!("expected {} residues, got {}", inc.n_lines(), entries.len()));
    }
    let mut values = Vec::with_capacity(entries.len());
    for (l, e) in entries.iter().enumerate() {
        if e.line != inc.label(l) {
            return Err(format!("residue {l} is for {}, expected {}", e.line, inc.label(l)));
        }
        values.push(parse_rational(&e.value).ok_or_else(|| format!("bad rational {:?}", e.value))?);
    }
    ResidueVector::new(values).map_err(|e| e.to_string())
}

fn join(xs: &[String]) -> String {
    xs.join(" ")
}

fn residue_text(es: &[Entry]) -> String {
    es.iter().map(|e| format!("{} = {}", e.line, e.value)).collect::<Vec<_>>().join(", ")
}

pub fn system_text(r: &SystemReport) -> String {
    let mut out = String::new();
    match r.verdict.as_str() {
        "admissible" => {
            let c = r.certificate.as_ref().expect("certificate");
            out += &format!("system {}: ADMISSIBLE ({}, h0 = {})\n", r.name, c.strategy, c.h0);
            out += &format!("  residues: {}\n", residue_text(&c.residues));
            for s in &c.trace {
                let at = s.point.as_deref().map(|p| format!(" at {p}")).unwrap_or_default();
                out += &format!("  {}: move {} from {} to {}{at}\n", s.kind, s.amount, s.from, s.to);
            }
        }
        "not-admissible" => {
            out += &format!("system {}: NOT ADMISSIBLE (obstruction)\n", r.name);
            if let Some(s) = &r.search {
                out += &format!("  search: {} at K = {} ({} nodes)\n", s.outcome, s.bound, s.nodes);
            }
            for l in &r.transcript {
                out += &format!("  {l}\n");
            }
        }
        _ => {
            out += &format!("system {}: NOT COVERED\n", r.name);
            if let Some(s) = &r.search {
                out += &format!("  search: {} at K = {} ({} nodes)\n", s.outcome, s.bound, s.nodes);
            }
            for e in &r.errors {
                out += &format!("  {e}\n");
            }
        }
    }
    for c in &r.exceptional_cycles {
        out += &format!("  exceptional cycle: {}\n", join(c));
    }
    out
}

pub fn analysis_text(r: &AnalysisReport) -> String {
    let mut out = String::new();
    if let Some(n) = &r.name {
        out += &format!("arrangement {n}: {} lines\n", r.lines.len());
    }
    out += &format!(
        "|M| = {}, condition (C): {}, cycles: {}, strategy: {}\n",
        r.m_count,
        if r.condition_c { "yes" } else { "no" },
        r.cycles.len(),
        r.strategy
    );
    if let Some(w) = &r.condition_c_witness {
        out += &format!("condition (C) fails at {w}\n");
    }
    out += &format!("double points: {}\n", r.double_points);
    for p in &r.m_points {
        out += &format!("  {} on {}\n", p.point, join(&p.lines));
    }
    for c in &r.cycles {
        out += &format!("cycle: {}\n", join(c));
    }
    for g in &r.graphs {
        out += &format!("graph ({}): {} | zone: {}\n", g.kind, join(&g.lines), join(&g.zone));
    }
    if let Some(h0) = &r.h0 {
        out += &format!("base line: {h0}{}\n", if r.dichotomy { " (dichotomy)" } else { "" });
    }
    for s in &r.systems {
        out += &system_text(s);
    }
    out
}
