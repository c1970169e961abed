//! SVG of the affine chart z = 1.
//!
//! Finite lines are clipped to a square window around the finite M-points,
//! widened until every line crosses it. The line z = 0, when present, is drawn as the window
//! frame; M-points at infinity sit on the frame in their direction.

use lineadm_core::{IncidenceStructure, Line, Point};
use num_traits::ToPrimitive;

const SIZE: f64 = 640.0;
const MARGIN: f64 = 48.0;

fn affine(p: &Point) -> Option<(f64, f64)> {
    let [x, y, z] = p.coords();
    let z = z.to_f64()?;
    if z == 0.0 {
        return None;
    }
    Some((x.to_f64()? / z, y.to_f64()? / z))
}

fn coeffs(l: &Line) -> (f64, f64, f64) {
    let [a, b, c] = l.coeffs();
    (a.to_f64().unwrap_or(0.0), b.to_f64().unwrap_or(0.0), c.to_f64().unwrap_or(0.0))
}

struct Window {
    x0: f64,
    y0: f64,
    side: f64,
}

impl Window {
    fn around(pts: &[(f64, f64)]) -> Self {
        let (mut x0, mut x1, mut y0, mut y1) = (-1.0f64, 1.0f64, -1.0f64, 1.0f64);
        for &(x, y) in pts {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        let side = (x1 - x0).max(y1 - y0) * 1.6;
        let (cx, cy) = ((x0 + x1) / 2.0, (y0 + y1) / 2.0);
        Window { x0: cx - side / 2.0, y0: cy - side / 2.0, side }
    }

    fn to_svg(&self, (x, y): (f64, f64)) -> (f64, f64) {
        let s = (SIZE - 2.0 * MARGIN) / self.side;
        (MARGIN + (x - self.x0) * s, SIZE - MARGIN - (y - self.y0) * s)
    }

    fn clip(&self, (a, b, c): (f64, f64, f64)) -> Option<((f64, f64), (f64, f64))> {
        let (x0, x1, y0, y1) = (self.x0, self.x0 + self.side, self.y0, self.y0 + self.side);
        let mut hits: Vec<(f64, f64)> = Vec::new();
        if b != 0.0 {
            for x in [x0, x1] {
                let y = -(a * x + c) / b;
                if (y0..=y1).contains(&y) {
                    hits.push((x, y));
                }
            }
        }
        if a != 0.0 {
            for y in [y0, y1] {
                let x = -(b * y + c) / a;
                if (x0..=x1).contains(&x) {
                    hits.push((x, y));
                }
            }
        }
        hits.sort_by(|p, q| p.partial_cmp(q).unwrap());
        Some((*hits.first()?, *hits.last()?))
    }

    /// Where the ray from the centre in direction `(dx, dy)` leaves the
    /// window.
    fn frame_point(&self, (dx, dy): (f64, f64)) -> (f64, f64) {
        let h = self.side / 2.0;
        let t = h / dx.abs().max(dy.abs());
        (self.x0 + h + dx * t, self.y0 + h + dy * t)
    }
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn render_svg(inc: &IncidenceStructure, lines: &[Line], title: &str) -> String {
    let mut pts: Vec<(f64, f64)> = inc
        .m_points()
        .iter()
        .filter_map(|&m| inc.point(m).point.as_ref().and_then(affine))
        .collect();
    let mut w = Window::around(&pts);
    for l in lines.iter().filter(|l| !l.is_at_infinity()) {
        if w.clip(coeffs(l)).is_none() {
            // Nearest point of the line to the window centre.
            let (a, b, c) = coeffs(l);
            let (cx, cy) = (w.x0 + w.side / 2.0, w.y0 + w.side / 2.0);
            let t = (a * cx + b * cy + c) / (a * a + b * b);
            pts.push((cx - a * t, cy - b * t));
            w = Window::around(&pts);
        }
    }
    let mut out = String::new();
    out += &format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{}\" viewBox=\"0 0 {SIZE} {}\">\n",
        SIZE + 40.0,
        SIZE + 40.0
    );
    out += &format!("<title>{}</title>\n", esc(title));
    out += "<rect x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    let infinity = lines.iter().position(Line::is_at_infinity);
    let (fx, fy) = w.to_svg((w.x0, w.y0 + w.side));
    let fs = SIZE - 2.0 * MARGIN;
    match infinity {
        Some(l) => out += &format!(
            "<rect class=\"arr-line at-infinity\" data-label=\"{}\" x=\"{fx:.2}\" y=\"{fy:.2}\" width=\"{fs:.2}\" height=\"{fs:.2}\" fill=\"none\" stroke=\"#444\" stroke-width=\"2\" stroke-dasharray=\"6 4\"/>\n",
            esc(inc.label(l))
        ),
        None => out += &format!(
            "<rect class=\"frame\" x=\"{fx:.2}\" y=\"{fy:.2}\" width=\"{fs:.2}\" height=\"{fs:.2}\" fill=\"none\" stroke=\"#ccc\"/>\n"
        ),
    }
    for (i, l) in lines.iter().enumerate() {
        if l.is_at_infinity() {
            continue;
        }
        let Some((p, q)) = w.clip(coeffs(l)) else { continue };
        let (x1, y1) = w.to_svg(p);
        let (x2, y2) = w.to_svg(q);
        let label = esc(inc.label(i));
        out += &format!(
            "<line class=\"arr-line\" data-label=\"{label}\" x1=\"{x1:.2}\" y1=\"{y1:.2}\" x2=\"{x2:.2}\" y2=\"{y2:.2}\" stroke=\"#1f4e9a\" stroke-width=\"1.2\"/>\n"
        );
        out += &format!("<text class=\"line-label\" x=\"{:.2}\" y=\"{:.2}\" font-size=\"11\">{label}</text>\n", x2 + 3.0, y2 - 3.0);
    }
    for &m in inc.m_points() {
        let Some(p) = inc.point(m).point.as_ref() else { continue };
        let pos = match affine(p) {
            Some(a) => a,
            None => {
                let [x, y, _] = p.coords();
                w.frame_point((x.to_f64().unwrap_or(0.0), y.to_f64().unwrap_or(0.0)))
            }
        };
        let (x, y) = w.to_svg(pos);
        let name = esc(&inc.point_name(m));
        out += &format!("<circle class=\"m-point\" data-point=\"{name}\" cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"4.5\" fill=\"#c0392b\"/>\n");
        out += &format!("<text class=\"point-label\" x=\"{:.2}\" y=\"{:.2}\" font-size=\"10\" fill=\"#c0392b\">{name}</text>\n", x + 6.0, y + 12.0);
    }
    let legend = match infinity {
        Some(l) => format!("{}: z = 0, drawn as the dashed frame; its points are placed by direction.", inc.label(l)),
        None => "No line at infinity.".to_string(),
    };
    for (i, text) in [legend.as_str(), "Red: points of multiplicity at least 3."].iter().enumerate() {
        out += &format!(
            "<text class=\"legend\" x=\"{MARGIN}\" y=\"{:.2}\" font-size=\"12\">{}</text>\n",
            SIZE + 4.0 + 16.0 * i as f64,
            esc(text)
        );
    }
    out += "</svg>\n";
    out
}
