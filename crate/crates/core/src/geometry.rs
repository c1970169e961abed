//! Exact projective-plane primitives.
//!
//! Lines and points are stored as coprime integer triples whose first nonzero
//! entry is positive, so two proportional triples compare equal and hash the
//! same.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar used throughout the crate.
pub type Q = BigRational;

/// Canonical integer triple.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Triple([BigInt; 3]);

impl Triple {
    fn from_integers(mut v: [BigInt; 3]) -> Option<Self> {
        let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        if g.is_zero() {
            return None;
        }
        let first = v.iter().find(|x| !x.is_zero()).expect("nonzero entry");
        let g = if first.is_negative() { -g } else { g };
        for x in v.iter_mut() {
            *x = &*x / &g;
        }
        Some(Triple(v))
    }

    fn from_rationals(raw: &[Q; 3]) -> Option<Self> {
        let den = raw
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let ints = raw
            .clone()
            .map(|x| (x * Q::from_integer(den.clone())).to_integer());
        Self::from_integers(ints)
    }

    fn dot(&self, other: &Triple) -> BigInt {
        let [a, b, c] = &self.0;
        let [x, y, z] = &other.0;
        a * x + b * y + c * z
    }

    fn cross(&self, other: &Triple) -> [BigInt; 3] {
        let [a1, b1, c1] = &self.0;
        let [a2, b2, c2] = &other.0;
        [
            b1 * c2 - c1 * b2,
            c1 * a2 - a1 * c2,
            a1 * b2 - b1 * a2,
        ]
    }
}

/// A line `a·x + b·y + c·z = 0` in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Line(Triple);

/// A point `[x:y:z]` in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point(Triple);

impl Line {
    pub fn from_integers(a: i64, b: i64, c: i64) -> Result<Self> {
        canonicalize_line(&[a, b, c].map(|x| Q::from_integer(x.into())))
    }

    pub fn coeffs(&self) -> &[BigInt; 3] {
        &self.0 .0
    }

    /// True for the line `z = 0`.
    pub fn is_at_infinity(&self) -> bool {
        let [a, b, _] = self.coeffs();
        a.is_zero() && b.is_zero()
    }
}

impl Point {
    pub fn new(x: i64, y: i64, z: i64) -> Result<Self> {
        Self::from_big([x.into(), y.into(), z.into()])
    }

    pub fn from_big(coords: [BigInt; 3]) -> Result<Self> {
        Triple::from_integers(coords)
            .map(Point)
            .ok_or_else(|| Error::Degenerate("point [0:0:0]".into()))
    }

    pub fn coords(&self) -> &[BigInt; 3] {
        &self.0 .0
    }

    pub fn is_at_infinity(&self) -> bool {
        self.coords()[2].is_zero()
    }
}

/// Scales a nonzero rational triple to its canonical integer line.
pub fn canonicalize_line(raw: &[Q; 3]) -> Result<Line> {
    Triple::from_rationals(raw)
        .map(Line)
        .ok_or_else(|| Error::Degenerate("line coefficients (0, 0, 0)".into()))
}

/// The unique common point of two distinct lines.
pub fn intersect(l1: &Line, l2: &Line) -> Result<Point> {
    let cross = l1.0.cross(&l2.0);
    Triple::from_integers(cross)
        .map(Point)
        .ok_or_else(|| Error::NoUniqueIntersection(l1.to_string(), l2.to_string()))
}

pub fn on_line(p: &Point, l: &Line) -> bool {
    l.0.dot(&p.0).is_zero()
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.coeffs();
        write!(f, "({a}, {b}, {c})")
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [x, y, z] = self.coords();
        write!(f, "[{x}:{y}:{z}]")
    }
}
