//! SVG rendering of a three-dimensional polytope in the triangular apartment.
//!
//! The normalized vertex `[0, x_2, x_3]` sits at `x_2·u + x_3·w` with
//! `u = (1, 0)` and `w = (1/2, √3/2)`, so the walls `x_i - x_j = c` form
//! the three line families of the A_2 lattice.

use std::fmt::Write;

use splitorder::{polytope_of, ExponentMatrix, LatticePoint};

use crate::CliError;

const SQRT3_2: f64 = 0.866_025_403_784_438_6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DrawOptions {
    /// Pixels per lattice step.
    pub scale: f64,
    /// Lattice steps of padding around the declared hyperplanes.
    pub margin: i64,
}

impl Default for DrawOptions {
    fn default() -> Self {
        DrawOptions { scale: 40.0, margin: 1 }
    }
}

/// A declared bounding hyperplane `x_i - x_j = c` (zero-based indices).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Wall {
    pub i: usize,
    pub j: usize,
    pub c: i64,
    pub supporting: bool,
}

impl Wall {
    pub fn label(&self) -> String {
        match (self.i, self.j) {
            (0, j) => format!("x_{} = {}", j + 1, -self.c),
            (i, 0) => format!("x_{} = {}", i + 1, self.c),
            (i, j) => format!("x_{} - x_{} = {}", i + 1, j + 1, self.c),
        }
    }
}

/// The six walls `x_i - x_j = nu_ij`, each marked supporting when the
/// region is nonempty and attains it.
pub fn walls(nu: &ExponentMatrix) -> Vec<Wall> {
    let poly = polytope_of(nu);
    let mut out = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            if i == j {
                continue;
            }
            let c = nu.get(i, j);
            let supporting = poly.max_difference(i, j).map(|m| m == c).unwrap_or(false);
            out.push(Wall { i, j, c, supporting });
        }
    }
    out
}

/// Screen position of `[0, x2, x3]` before the viewport shift, y pointing down.
pub fn embed(x2: f64, x3: f64) -> (f64, f64) {
    (x2 + 0.5 * x3, -SQRT3_2 * x3)
}

/// Inverse of [`embed`].
pub fn unembed(x: f64, y: f64) -> (f64, f64) {
    let x3 = -y / SQRT3_2;
    (x - 0.5 * x3, x3)
}

/// Window in apartment coordinates: a box `[-r, r]^2` in `(x2, x3)`, where
/// `r` covers every declared constant, so each wall crosses it.
fn radius(nu: &ExponentMatrix, margin: i64) -> i64 {
    nu.rows().iter().flatten().map(|v| v.abs()).max().unwrap_or(0) + margin.max(1)
}

/// Endpoints of `x_i - x_j = c` clipped to the box, in `(x2, x3)`.
fn clip(w: &Wall, r: i64) -> Option<((f64, f64), (f64, f64))> {
    let (r, c) = (r as f64, w.c as f64);
    // with x_1 = 0 the wall reads a·x2 + b·x3 = c
    let on = |axis: usize| (w.i == axis) as i8 as f64 - (w.j == axis) as i8 as f64;
    let (a, b) = (on(1), on(2));
    let mut pts: Vec<(f64, f64)> = Vec::new();
    for s in [-r, r] {
        if b != 0.0 {
            let x3 = (c - a * s) / b;
            if x3.abs() <= r {
                pts.push((s, x3));
            }
        }
        if a != 0.0 {
            let x2 = (c - b * s) / a;
            if x2.abs() <= r {
                pts.push((x2, s));
            }
        }
    }
    pts.sort_by(|p, q| p.partial_cmp(q).unwrap());
    pts.dedup();
    match pts.as_slice() {
        [first, .., last] => Some((*first, *last)),
        _ => None,
    }
}

/// Pixel frame around the box `[-r, r]^2` of apartment coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Viewport {
    r: i64,
    scale: f64,
    min_x: f64,
    min_y: f64,
    pub width: f64,
    pub height: f64,
}

const PAD: f64 = 0.5;

impl Viewport {
    pub fn new(nu: &ExponentMatrix, opts: DrawOptions) -> Self {
        let r = radius(nu, opts.margin);
        let rf = r as f64;
        let corners = [(-rf, -rf), (-rf, rf), (rf, -rf), (rf, rf)].map(|(a, b)| embed(a, b));
        let fold =
            |f: fn(f64, f64) -> f64, init: f64, pick: fn(&(f64, f64)) -> f64| corners.iter().map(pick).fold(init, f);
        let min_x = fold(f64::min, f64::INFINITY, |p| p.0);
        let max_x = fold(f64::max, f64::NEG_INFINITY, |p| p.0);
        let min_y = fold(f64::min, f64::INFINITY, |p| p.1);
        let max_y = fold(f64::max, f64::NEG_INFINITY, |p| p.1);
        Viewport {
            r,
            scale: opts.scale,
            min_x,
            min_y,
            width: (max_x - min_x + 2.0 * PAD) * opts.scale,
            height: (max_y - min_y + 2.0 * PAD) * opts.scale,
        }
    }

    pub fn to_screen(&self, x2: f64, x3: f64) -> (f64, f64) {
        let (x, y) = embed(x2, x3);
        ((x - self.min_x + PAD) * self.scale, (y - self.min_y + PAD) * self.scale)
    }

    /// Nearest lattice coordinates `(x2, x3)` of a pixel position.
    pub fn from_screen(&self, cx: f64, cy: f64) -> (i64, i64) {
        let (x2, x3) = unembed(cx / self.scale - PAD + self.min_x, cy / self.scale - PAD + self.min_y);
        (x2.round() as i64, x3.round() as i64)
    }

    fn segment(&self, out: &mut String, w: &Wall, attrs: &str) {
        if let Some(((a2, a3), (b2, b3))) = clip(w, self.r) {
            let (x1, y1) = self.to_screen(a2, a3);
            let (x2, y2) = self.to_screen(b2, b3);
            let _ = writeln!(out, r#"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}"{attrs}"#);
        }
    }
}

/// Renders `C(nu)` for `n = 3` as an SVG 1.1 document: the apartment
/// grid, the six declared walls (dashed when not supporting) and `points`.
pub fn render_svg(nu: &ExponentMatrix, points: &[LatticePoint], opts: DrawOptions) -> Result<String, CliError> {
    if nu.n() != 3 {
        return Err(CliError::UnsupportedDimension(nu.n()));
    }
    let vp = Viewport::new(nu, opts);
    let (w, h) = (vp.width, vp.height);
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w:.2}" height="{h:.2}" viewBox="0 0 {w:.2} {h:.2}">"#
    );
    let _ = writeln!(out, "<title>C(nu) for nu = {nu}</title>");
    let _ = writeln!(out, r##"<rect x="0" y="0" width="{w:.2}" height="{h:.2}" fill="#ffffff"/>"##);

    let _ =
        writeln!(out, r##"<g class="apartment" fill="none" stroke="#000000" stroke-opacity="0.15" stroke-width="1">"##);
    for k in -vp.r..=vp.r {
        for (i, j, c) in [(0, 1, -k), (0, 2, -k), (1, 2, k)] {
            vp.segment(&mut out, &Wall { i, j, c, supporting: false }, "/>");
        }
    }
    let _ = writeln!(out, "</g>");

    let _ = writeln!(out, r##"<g class="walls" fill="none" stroke="#1f4e99" stroke-width="2">"##);
    for wall in walls(nu) {
        let attrs = if wall.supporting {
            format!(r#" class="wall supporting"><title>{}</title></line>"#, wall.label())
        } else {
            format!(r#" class="wall non-supporting" stroke-dasharray="8 6"><title>{}</title></line>"#, wall.label())
        };
        vp.segment(&mut out, &wall, &attrs);
    }
    let _ = writeln!(out, "</g>");

    let _ = writeln!(out, r##"<g class="points" fill="#000000">"##);
    for p in points {
        let c = p.coords();
        let (cx, cy) = vp.to_screen(c[1] as f64, c[2] as f64);
        let _ = writeln!(
            out,
            r#"<circle class="point" cx="{cx:.2}" cy="{cy:.2}" r="{:.2}"><title>[{}, {}, {}]</title></circle>"#,
            opts.scale * 0.12,
            c[0],
            c[1],
            c[2]
        );
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, "</svg>");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nu_prime() -> ExponentMatrix {
        ExponentMatrix::new(vec![vec![0, 0, 2], vec![3, 0, 1], vec![3, 2, 0]]).unwrap()
    }

    #[test]
    fn embedding_round_trips() {
        for (a, b) in [(0.0, 0.0), (3.0, -1.0), (-2.0, 5.0)] {
            let (x, y) = embed(a, b);
            let (c, d) = unembed(x, y);
            assert!((a - c).abs() < 1e-9 && (b - d).abs() < 1e-9);
        }
    }

    #[test]
    fn wall_labels_and_support() {
        let ws = walls(&nu_prime());
        let dashed: Vec<String> = ws.iter().filter(|w| !w.supporting).map(Wall::label).collect();
        assert_eq!(dashed, vec!["x_3 = -2"]);
        assert_eq!(ws[0].label(), "x_2 = 0");
        assert_eq!(ws[4].label(), "x_3 = 3");
        assert_eq!(ws[5].label(), "x_3 - x_2 = 2");
    }

    #[test]
    fn every_wall_crosses_the_window() {
        let nu = nu_prime();
        let r = radius(&nu, 1);
        for w in walls(&nu) {
            assert!(clip(&w, r).is_some(), "{}", w.label());
        }
    }

    #[test]
    fn rejects_other_dimensions() {
        let nu = ExponentMatrix::zero(2).unwrap();
        assert!(matches!(render_svg(&nu, &[], DrawOptions::default()), Err(CliError::UnsupportedDimension(2))));
    }
}
