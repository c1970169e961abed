//! `lineadm`: incidence analysis, admissibility certificates, bounded
//! search, multinet detection and SVG rendering for line arrangements.

mod render;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lineadm_core::format::{parse_arrangement, print_arrangement, ArrangementFile};
use lineadm_core::{
    build_incidence, correct_dichotomy, correct_even_cycles, correct_no_cycle, correct_open_cycles,
    decide_admissible, generate_condition_c, normalize, oracle_search, random_local_system,
    report_global_components, search_multinets, verify_residues, AdmCertificate, Decision,
    Error, IncidenceStructure, LocalSystem, ShiftSearchConfig, StrategyError,
};
use serde::Serialize;

const EXIT_FAILURE: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_NOT_COVERED: u8 = 3;
const EXIT_NOT_ADMISSIBLE: u8 = 4;
const EXIT_SIZE_GUARD: u8 = 5;

#[derive(Parser)]
#[command(name = "lineadm", version, about = "Admissibility of rank-one local systems on line arrangements")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write to a file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SearchArgs {
    /// Shift bound K for the bounded search.
    #[arg(long, default_value_t = 3)]
    bound: u32,
    /// Node budget for the bounded search.
    #[arg(long, default_value_t = 50_000_000)]
    budget: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Incidence summary, condition (C), cycles, zones, strategy and
    /// per-system verdicts.
    Analyze {
        file: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        output: Output,
    },
    /// Certificate or verdict for each (or one named) local system.
    Admissible {
        file: PathBuf,
        #[arg(long)]
        system: Option<String>,
        /// Base line label.
        #[arg(long)]
        h0: Option<String>,
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        output: Output,
    },
    /// Bounded integer-shift search only.
    Oracle {
        file: PathBuf,
        #[arg(long)]
        system: Option<String>,
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        output: Output,
    },
    /// Multinet search and global-component report.
    Multinet {
        file: PathBuf,
        #[arg(long, default_value_t = 4)]
        k_max: usize,
        #[arg(long, default_value_t = 2)]
        m_max: u32,
        /// Refuse arrangements with more lines than this.
        #[arg(long, default_value_t = 16)]
        guard: usize,
        #[command(flatten)]
        output: Output,
    },
    /// SVG of the affine chart z = 1.
    Render {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random arrangement satisfying condition (C), in the text format.
    Generate {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        lines: usize,
        /// Also emit a random local system named `random`.
        #[arg(long)]
        system_seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-verify every certificate in a JSON report against its arrangement.
    Verify { file: PathBuf, report: PathBuf },
}

struct Failure {
    code: u8,
    message: String,
}

type Outcome = Result<u8, Failure>;

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure { code, message: message.into() }
}

fn from_core(e: Error) -> Failure {
    let code = match e {
        Error::Parse { .. }
        | Error::Degenerate(_)
        | Error::DuplicateLine(..)
        | Error::TooFewLines(_)
        | Error::NoUniqueIntersection(..) => EXIT_PARSE,
        Error::SizeGuard { .. } => EXIT_SIZE_GUARD,
        Error::Strategy(_) => EXIT_NOT_COVERED,
        _ => EXIT_FAILURE,
    };
    fail(code, e.to_string())
}

fn load(path: &Path) -> Result<(ArrangementFile, IncidenceStructure), Failure> {
    let file = parse_arrangement(path).map_err(from_core)?;
    let inc = build_incidence(&file.arrangement).map_err(from_core)?;
    Ok((file, inc))
}

fn select<'a>(file: &'a ArrangementFile, name: Option<&'a str>) -> Result<Vec<(&'a str, &'a LocalSystem)>, Failure> {
    match name {
        Some(n) => file
            .system(n)
            .map(|s| vec![(n, s)])
            .ok_or_else(|| fail(EXIT_PARSE, format!("no system named {n:?}"))),
        None => Ok(file.systems.iter().map(|(n, s)| (n.as_str(), s)).collect()),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| fail(EXIT_FAILURE, format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_as<T: Serialize>(output: &Output, value: &T, text: impl FnOnce(&T) -> String) -> Result<(), Failure> {
    let body = match output.format {
        Format::Json => serde_json::to_string_pretty(value).expect("reports serialize") + "\n",
        Format::Text => text(value),
    };
    emit(output.out.as_deref(), &body)
}

fn config(s: &SearchArgs) -> ShiftSearchConfig {
    ShiftSearchConfig { bound: s.bound, node_budget: s.budget }
}

/// Constructive correctors at a fixed base line, then the full dispatcher.
fn decide(inc: &IncidenceStructure, ls: &LocalSystem, h0: Option<usize>, cfg: &ShiftSearchConfig) -> Decision {
    if let Some(h0) = h0 {
        type Corrector = fn(
            &IncidenceStructure,
            &lineadm_core::ResidueVector,
            usize,
        ) -> Result<AdmCertificate, StrategyError>;
        let correctors: [Corrector; 4] = [correct_no_cycle, correct_open_cycles, correct_even_cycles, correct_dichotomy];
        let rv = normalize(ls, h0);
        if let Some(c) = correctors.iter().find_map(|f| f(inc, &rv, h0).ok()) {
            return Decision::Admissible(c);
        }
    }
    decide_admissible(inc, ls, cfg)
}

fn exit_for(decisions: &[&Decision]) -> u8 {
    if decisions.iter().any(|d| matches!(d, Decision::NotCovered { .. })) {
        EXIT_NOT_COVERED
    } else if decisions.iter().any(|d| matches!(d, Decision::NotAdmissible { .. })) {
        EXIT_NOT_ADMISSIBLE
    } else {
        0
    }
}

fn systems_report(
    file: &ArrangementFile,
    inc: &IncidenceStructure,
    name: Option<&str>,
    h0: Option<&str>,
    search: &SearchArgs,
) -> Result<(Vec<report::SystemReport>, u8), Failure> {
    let h0 = match h0 {
        Some(label) => Some(
            file.arrangement
                .index_of(label)
                .ok_or_else(|| fail(EXIT_PARSE, format!("no line labelled {label:?}")))?,
        ),
        None => None,
    };
    let cfg = config(search);
    let mut reports = Vec::new();
    let mut decisions = Vec::new();
    for (n, ls) in select(file, name)? {
        let d = decide(inc, ls, h0, &cfg);
        reports.push(report::system(inc, n, ls, &d, search.bound));
        decisions.push(d);
    }
    Ok((reports, exit_for(&decisions.iter().collect::<Vec<_>>())))
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Analyze { file, search, output } => {
            let (f, inc) = load(&file)?;
            let (systems, _) = systems_report(&f, &inc, None, None, &search)?;
            let r = report::analysis(f.arrangement.name.clone(), &inc, systems);
            emit_as(&output, &r, report::analysis_text)?;
            Ok(0)
        }
        Command::Admissible { file, system, h0, search, output } => {
            let (f, inc) = load(&file)?;
            let (systems, code) = systems_report(&f, &inc, system.as_deref(), h0.as_deref(), &search)?;
            emit_as(&output, &systems, |s| s.iter().map(report::system_text).collect())?;
            Ok(code)
        }
        Command::Oracle { file, system, search, output } => {
            let (f, inc) = load(&file)?;
            let cfg = config(&search);
            let mut code = 0;
            let mut results = Vec::new();
            for (n, ls) in select(&f, system.as_deref())? {
                let s = oracle_search(&inc, ls, &cfg);
                if matches!(s, lineadm_core::SearchOutcome::BudgetExceeded { .. } | lineadm_core::SearchOutcome::TooLarge) {
                    code = EXIT_NOT_COVERED;
                }
                results.push((n.to_string(), report::search(&inc, search.bound, &s)));
            }
            emit_as(&output, &results, |rs| {
                rs.iter()
                    .map(|(n, s)| {
                        let mut t = format!("system {n}: {} at K = {} ({} nodes)\n", s.outcome, s.bound, s.nodes);
                        if let Some(r) = &s.residues {
                            let vals: Vec<String> = r.iter().map(|e| format!("{} = {}", e.line, e.value)).collect();
                            t += &format!("  residues: {}\n", vals.join(", "));
                        }
                        t
                    })
                    .collect()
            })?;
            Ok(code)
        }
        Command::Multinet { file, k_max, m_max, guard, output } => {
            let (_, inc) = load(&file)?;
            let found = search_multinets(&inc, k_max, m_max, guard).map_err(from_core)?;
            #[derive(Serialize)]
            struct MultinetReport {
                k: usize,
                d: u32,
                classes: Vec<Vec<String>>,
                multiplicities: Vec<u32>,
                base_locus: Vec<String>,
            }
            #[derive(Serialize)]
            struct Report {
                multinets: Vec<MultinetReport>,
                global_components: Vec<String>,
            }
            let r = Report {
                multinets: found
                    .iter()
                    .map(|m| MultinetReport {
                        k: m.k(),
                        d: m.d,
                        classes: m.classes.iter().map(|c| c.iter().map(|&l| inc.label(l).to_string()).collect()).collect(),
                        multiplicities: m.mult.clone(),
                        base_locus: m.base_locus.iter().map(|&p| inc.point_name(p)).collect(),
                    })
                    .collect(),
                global_components: report_global_components(&inc, &found),
            };
            emit_as(&output, &r, |r| {
                let mut t = format!("multinets: {}\n", r.multinets.len());
                for m in &r.multinets {
                    let cs: Vec<String> = m.classes.iter().map(|c| format!("{{{}}}", c.join(", "))).collect();
                    t += &format!("  ({}, {}): {} base locus {}\n", m.k, m.d, cs.join(" "), m.base_locus.join(" "));
                }
                for g in &r.global_components {
                    t += &format!("{g}\n");
                }
                t
            })?;
            Ok(0)
        }
        Command::Render { file, out } => {
            let (f, inc) = load(&file)?;
            let title = f.arrangement.name.clone().unwrap_or_else(|| file.display().to_string());
            emit(out.as_deref(), &render::render_svg(&inc, f.arrangement.lines(), &title))?;
            Ok(0)
        }
        Command::Generate { seed, lines, system_seed, out } => {
            let arr = generate_condition_c(seed, lines).map_err(from_core)?;
            let systems: Vec<_> = system_seed
                .map(|s| ("random".to_string(), random_local_system(s, lines, 6)))
                .into_iter()
                .collect();
            emit(out.as_deref(), &print_arrangement(&arr, &systems))?;
            Ok(0)
        }
        Command::Verify { file, report: path } => {
            let (f, inc) = load(&file)?;
            let text = std::fs::read_to_string(&path).map_err(|e| fail(EXIT_FAILURE, format!("{}: {e}", path.display())))?;
            let systems: Vec<report::SystemReport> = match serde_json::from_str::<report::AnalysisReport>(&text) {
                Ok(r) => r.systems,
                Err(_) => serde_json::from_str(&text).map_err(|e| fail(EXIT_PARSE, format!("report: {e}")))?,
            };
            let mut checked = 0;
            for s in &systems {
                let Some(c) = &s.certificate else { continue };
                let ls = f.system(&s.name).ok_or_else(|| fail(EXIT_PARSE, format!("no system named {:?}", s.name)))?;
                let rv = report::load_residues(&inc, &c.residues).map_err(|e| fail(EXIT_PARSE, e))?;
                let v = verify_residues(&inc, ls, &rv);
                if !v.is_ok() {
                    return Err(fail(EXIT_FAILURE, format!("system {}: {:?}", s.name, v.violations)));
                }
                checked += 1;
            }
            println!("{checked} certificate(s) verified");
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("lineadm: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
