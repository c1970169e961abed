//! Plain-text arrangement files.
//!
//! ```text
//! # comment
//! [arrangement ex1]
//! L_0: 0 0 1
//! L_1: 1 0 0
//! L_2: 1/2 -3 1
//!
//! [system sample]
//! L_1 = 1/3
//! ```
//!
//! Each arrangement line is `label: a b c` with exact rationals (`7`, `-5/2`).
//! A `[system NAME]` section assigns residue classes to labels; unlisted
//! lines get class 0. Decimal notation is rejected.

use std::fmt::Write as _;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::admissibility::LocalSystem;
use crate::error::{Error, Result};
use crate::geometry::{canonicalize_line, Q};
use crate::incidence::Arrangement;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrangementFile {
    pub arrangement: Arrangement,
    pub systems: Vec<(String, LocalSystem)>,
}

impl ArrangementFile {
    pub fn system(&self, name: &str) -> Option<&LocalSystem> {
        self.systems.iter().find(|(n, _)| n == name).map(|(_, s)| s)
    }
}

pub fn parse_arrangement(path: impl AsRef<Path>) -> Result<ArrangementFile> {
    let text = std::fs::read_to_string(path.as_ref()).map_err(|e| {
        Error::parse(0, 0, format!("cannot read {}: {e}", path.as_ref().display()))
    })?;
    parse_str(&text)
}

/// Parses `p/q` or an integer.
pub fn parse_rational(token: &str) -> Option<Q> {
    let (num, den) = match token.split_once('/') {
        Some((n, d)) => (n, d),
        None => (token, "1"),
    };
    let valid = |s: &str, signed: bool| {
        let digits = if signed {
            s.strip_prefix(['-', '+']).unwrap_or(s)
        } else {
            s
        };
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid(num, true) || !valid(den, false) {
        return None;
    }
    let n: BigInt = num.trim_start_matches('+').parse().ok()?;
    let d: BigInt = den.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Q::new(n, d))
}

enum Section {
    Lines,
    System(usize),
}

pub fn parse_str(text: &str) -> Result<ArrangementFile> {
    let mut name = None;
    let mut labels: Vec<String> = Vec::new();
    let mut lines = Vec::new();
    let mut raw_systems: Vec<(String, Vec<(usize, usize, String, Q)>)> = Vec::new();
    let mut section = Section::Lines;

    for (ln, raw) in text.lines().enumerate() {
        let ln = ln + 1;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        let indent = content.len() - content.trim_start().len();
        if let Some(header) = trimmed.strip_prefix('[') {
            let header = header
                .strip_suffix(']')
                .ok_or_else(|| Error::parse(ln, indent + 1, "unterminated section header"))?;
            let mut words = header.splitn(2, char::is_whitespace);
            match (words.next(), words.next().map(str::trim)) {
                (Some("arrangement"), n) => {
                    if !lines.is_empty() || !raw_systems.is_empty() {
                        return Err(Error::parse(ln, indent + 1, "arrangement header must come first"));
                    }
                    name = n.filter(|s| !s.is_empty()).map(str::to_owned);
                }
                (Some("system"), Some(n)) if !n.is_empty() => {
                    if raw_systems.iter().any(|(s, _)| s == n) {
                        return Err(Error::parse(ln, indent + 1, format!("duplicate system {n}")));
                    }
                    raw_systems.push((n.to_owned(), Vec::new()));
                    section = Section::System(raw_systems.len() - 1);
                }
                _ => return Err(Error::parse(ln, indent + 1, format!("unknown section [{header}]"))),
            }
            continue;
        }
        match section {
            Section::Lines => {
                let (label, rest) = trimmed
                    .split_once(':')
                    .ok_or_else(|| Error::parse(ln, indent + 1, "expected `label: a b c`"))?;
                let label = label.trim();
                if label.is_empty() || label.contains(char::is_whitespace) {
                    return Err(Error::parse(ln, indent + 1, "bad line label"));
                }
                if labels.iter().any(|l| l == label) {
                    return Err(Error::parse(ln, indent + 1, format!("duplicate label {label}")));
                }
                let rest_offset = indent + trimmed.len() - rest.len();
                let coeffs = tokens(rest, rest_offset)
                    .map(|(col, tok)| {
                        parse_rational(tok).ok_or_else(|| {
                            Error::parse(ln, col, format!("malformed rational `{tok}`"))
                        })
                    })
                    .collect::<Result<Vec<Q>>>()?;
                let coeffs: [Q; 3] = coeffs.try_into().map_err(|v: Vec<Q>| {
                    Error::parse(ln, rest_offset + 1, format!("expected 3 coefficients, got {}", v.len()))
                })?;
                let line = canonicalize_line(&coeffs)
                    .map_err(|e| Error::parse(ln, rest_offset + 1, e.to_string()))?;
                labels.push(label.to_owned());
                lines.push((ln, line));
            }
            Section::System(idx) => {
                let (label, value) = trimmed
                    .split_once('=')
                    .ok_or_else(|| Error::parse(ln, indent + 1, "expected `label = p/q`"))?;
                let label = label.trim();
                let value_col = indent + trimmed.len() - value.len() + (value.len() - value.trim_start().len()) + 1;
                let value = value.trim();
                let q = parse_rational(value).ok_or_else(|| {
                    Error::parse(ln, value_col, format!("malformed rational `{value}`"))
                })?;
                raw_systems[idx].1.push((ln, indent + 1, label.to_owned(), q));
            }
        }
    }

    let line_numbers: Vec<usize> = lines.iter().map(|(ln, _)| *ln).collect();
    let all_labels = labels.clone();
    let arrangement = Arrangement::with_labels(lines.into_iter().map(|(_, l)| l).collect(), labels)
        .map_err(|e| match e {
            Error::DuplicateLine(_, ref b) => {
                let at = all_labels
                    .iter()
                    .position(|l| l == b)
                    .map_or(0, |i| line_numbers[i]);
                Error::parse(at, 1, e.to_string())
            }
            other => Error::parse(0, 0, other.to_string()),
        })?;
    let arrangement = match name {
        Some(n) => arrangement.named(n),
        None => arrangement,
    };

    let mut systems = Vec::new();
    for (sname, entries) in raw_systems {
        let mut values = vec![Q::zero(); arrangement.len()];
        let mut seen = vec![false; arrangement.len()];
        for (ln, col, label, q) in &entries {
            let idx = arrangement
                .index_of(label)
                .ok_or_else(|| Error::parse(*ln, *col, format!("unknown line label {label}")))?;
            if seen[idx] {
                return Err(Error::parse(*ln, *col, format!("{label} assigned twice")));
            }
            seen[idx] = true;
            values[idx] = q.clone();
        }
        let ls = LocalSystem::from_values(values).map_err(|e| {
            let ln = entries.first().map(|e| e.0).unwrap_or(0);
            Error::parse(ln, 1, format!("system {sname}: {e}"))
        })?;
        systems.push((sname, ls));
    }
    Ok(ArrangementFile {
        arrangement,
        systems,
    })
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokens(s: &str, offset: usize) -> impl Iterator<Item = (usize, &str)> {
    let mut pos = 0;
    s.split(char::is_whitespace).filter_map(move |tok| {
        let col = offset + pos + 1;
        pos += tok.len() + 1;
        (!tok.is_empty()).then_some((col, tok))
    })
}

pub fn format_rational(q: &Q) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Renders a file that [`parse_str`] reads back to the same values.
pub fn print_arrangement(arr: &Arrangement, systems: &[(String, LocalSystem)]) -> String {
    let mut out = String::new();
    match &arr.name {
        Some(n) => writeln!(out, "[arrangement {n}]").unwrap(),
        None => writeln!(out, "[arrangement]").unwrap(),
    }
    for (label, line) in arr.labels().iter().zip(arr.lines()) {
        let [a, b, c] = line.coeffs();
        writeln!(out, "{label}: {a} {b} {c}").unwrap();
    }
    for (name, ls) in systems {
        writeln!(out, "\n[system {name}]").unwrap();
        for (label, class) in arr.labels().iter().zip(ls.classes()) {
            if !class.is_zero() {
                writeln!(out, "{label} = {}", format_rational(class)).unwrap();
            }
        }
    }
    out
}

/// Built-in fixtures.
pub mod fixtures {
    use super::*;
    use crate::incidence::IncidenceStructure;

    pub const EXAMPLE_ONE: &str = include_str!("../fixtures/ex1.arr");
    pub const EXAMPLE_TWO: &str = include_str!("../fixtures/ex2.arr");

    /// Thirteen lines with six triple points and no cycle.
    pub fn example_one() -> (Arrangement, Vec<(String, LocalSystem)>) {
        let f = parse_str(EXAMPLE_ONE).expect("fixture parses");
        (f.arrangement, f.systems)
    }

    /// Twelve lines with two disjoint triangles of lines.
    pub fn example_two() -> (Arrangement, Vec<(String, LocalSystem)>) {
        let f = parse_str(EXAMPLE_TWO).expect("fixture parses");
        (f.arrangement, f.systems)
    }

    /// The nine lines of (x³ − y³)(y³ − z³)(z³ − x³) = 0 as a combinatorial
    /// incidence structure. Lines 0..3 are x = ωⁱy, 3..6 are y = ωʲz and
    /// 6..9 are z = ωᵏx; the triple points are the three coordinate vertices
    /// and the nine points with i + j + k ≡ 0 (mod 3).
    pub fn fermat_incidence() -> IncidenceStructure {
        let labels = (0..9).map(|i| format!("L_{i}")).collect();
        let mut points = vec![vec![0, 1, 2], vec![3, 4, 5], vec![6, 7, 8]];
        for i in 0..3 {
            for j in 0..3 {
                let k = (6 - i - j) % 3;
                points.push(vec![i, 3 + j, 6 + k]);
            }
        }
        IncidenceStructure::from_incidences(labels, points).expect("valid incidences")
    }

    /// `n` lines through the origin.
    pub fn pencil(n: usize) -> Arrangement {
        let lines = (0..n as i64)
            .map(|i| crate::geometry::Line::from_integers(1, i, 0).unwrap())
            .collect();
        Arrangement::new(lines).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::admissibility::normalize;

    #[test]
    fn example_files_parse() {
        let (a1, s1) = fixtures::example_one();
        assert_eq!(a1.len(), 13);
        assert_eq!(a1.labels()[12], "L_12");
        assert_eq!(a1.name.as_deref(), Some("ex1"));
        assert_eq!(s1.len(), 1);

        let (a2, s2) = fixtures::example_two();
        assert_eq!(a2.len(), 12);
        let halves = &s2.iter().find(|(n, _)| n == "paper").unwrap().1;
        let rv = normalize(halves, 0);
        assert_eq!(rv.get(0), &Q::new((-5).into(), 2.into()));
    }

    #[test]
    fn decimals_rejected() {
        let err = parse_str("L_0: 0.5 0 1\nL_1: 1 0 0\n").unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: 1,
                column: 6,
                message: "malformed rational `0.5`".into()
            }
        );
    }

    #[test]
    fn errors_carry_positions() {
        let dup = parse_str("A: 1 0 0\nB: 2 0 0\n").unwrap_err();
        assert!(matches!(dup, Error::Parse { line: 2, .. }), "{dup:?}");

        let sum = parse_str("A: 1 0 0\nB: 0 1 0\nC: 0 0 1\n[system s]\nA = 1/3\n").unwrap_err();
        assert!(matches!(sum, Error::Parse { line: 5, .. }), "{sum:?}");

        let bad = parse_str("A: 1 0 0\nB: 0 1 0\n[system s]\nA = 1/0\n").unwrap_err();
        assert!(matches!(bad, Error::Parse { line: 4, column: 5, .. }), "{bad:?}");

        let unknown = parse_str("A: 1 0 0\nB: 0 1 0\n[system s]\nZ = 1\n").unwrap_err();
        assert!(matches!(unknown, Error::Parse { line: 4, .. }));
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("-5/2"), Some(Q::new((-5).into(), 2.into())));
        assert_eq!(parse_rational("+3"), Some(Q::from_integer(3.into())));
        assert_eq!(parse_rational("1e3"), None);
        assert_eq!(parse_rational("1/-2"), None);
        assert_eq!(parse_rational(""), None);
    }

    #[test]
    fn print_round_trips() {
        for text in [fixtures::EXAMPLE_ONE, fixtures::EXAMPLE_TWO] {
            let f = parse_str(text).unwrap();
            let printed = print_arrangement(&f.arrangement, &f.systems);
            let back = parse_str(&printed).unwrap();
            assert_eq!(back, f);
        }
    }
}
