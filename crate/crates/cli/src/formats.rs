//! File formats: quad-graph JSON schema, circle-pattern JSON, SVG
//! rendering, OBJ quad meshes, CSV tables.

use std::io::Write;
use std::path::Path;

use ddg_core::grid::Grid2;
use ddg_core::patterns::CirclePattern;
use ddg_core::quadcomplex::{Color, QuadGraph};
use num_complex::Complex64;
use serde::Serialize;

#[derive(Serialize)]
struct VertexDto {
    id: usize,
    color: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pos: Option<[f64; 2]>,
}

#[derive(Serialize)]
struct QuadGraphDto {
    vertices: Vec<VertexDto>,
    edges: Vec<[usize; 2]>,
    faces: Vec<[usize; 4]>,
}

/// {vertices: [{id, color, pos?}], edges: [[id, id]], faces: [[id; 4]]}
pub fn quadgraph_json(g: &QuadGraph) -> String {
    let dto = QuadGraphDto {
        vertices: (0..g.n_vertices())
            .map(|v| VertexDto {
                id: v,
                color: match g.color(v) {
                    Color::Black => "black",
                    Color::White => "white",
                },
                pos: g.position(v).map(|p| [p.re, p.im]),
            })
            .collect(),
        edges: g.edges().iter().map(|&(a, b)| [a, b]).collect(),
        faces: g.faces().to_vec().into_iter().map(|f| [f[0], f[1], f[2], f[3]]).collect(),
    };
    serde_json::to_string_pretty(&dto).expect("serializable")
}

#[derive(Serialize)]
struct CircleDto {
    id: usize,
    cx: f64,
    cy: f64,
    r: f64,
}

#[derive(Serialize)]
struct PointDto {
    id: usize,
    x: f64,
    y: f64,
}

#[derive(Serialize)]
struct AngleDto {
    edge: [usize; 2],
    phi: f64,
}

#[derive(Serialize)]
struct PatternDto {
    circles: Vec<CircleDto>,
    intersections: Vec<PointDto>,
    angles: Vec<AngleDto>,
}

/// {circles: [{id, cx, cy, r}], intersections: [{id, x, y}], angles: [{edge, phi}]}
pub fn pattern_json(p: &CirclePattern) -> String {
    let angles = p
        .phi
        .iter()
        .map(|(&f, &phi)| {
            let q = p.graph.face(f);
            AngleDto { edge: [q[0], q[2]], phi }
        })
        .collect();
    let dto = PatternDto {
        circles: p
            .circles
            .iter()
            .map(|(&id, c)| CircleDto { id, cx: c.center.re, cy: c.center.im, r: c.radius })
            .collect(),
        intersections: p
            .points
            .iter()
            .map(|(&id, z)| PointDto { id, x: z.re, y: z.im })
            .collect(),
        angles,
    };
    serde_json::to_string_pretty(&dto).expect("serializable")
}

/// SVG with stroked circles and optionally filled kites; 1 unit = `scale`
/// px (default 40).
pub fn pattern_svg(p: &CirclePattern, z: &[Complex64], kites: bool, scale: f64) -> String {
    let mut min = (f64::INFINITY, f64::INFINITY);
    let mut max = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for c in p.circles.values() {
        min.0 = min.0.min(c.center.re - c.radius);
        min.1 = min.1.min(c.center.im - c.radius);
        max.0 = max.0.max(c.center.re + c.radius);
        max.1 = max.1.max(c.center.im + c.radius);
    }
    let pad = 0.5;
    let (w, h) = ((max.0 - min.0 + 2.0 * pad) * scale, (max.1 - min.1 + 2.0 * pad) * scale);
    let tx = |v: Complex64| ((v.re - min.0 + pad) * scale, (max.1 - v.im + pad) * scale);
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w:.1}\" height=\"{h:.1}\" viewBox=\"0 0 {w:.1} {h:.1}\">\n"
    ));
    if kites {
        for f in p.graph.proper_faces() {
            let q = p.graph.face(f);
            let pts: Vec<(f64, f64)> = q.iter().map(|&v| tx(z[v])).collect();
            let path: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
            out.push_str(&format!(
                "  <polygon points=\"{}\" fill=\"#dbe9f4\" stroke=\"#88a\" stroke-width=\"0.6\"/>\n",
                path.join(" ")
            ));
        }
    }
    for (_, c) in p.circles.iter() {
        let (cx, cy) = tx(c.center);
        out.push_str(&format!(
            "  <circle cx=\"{cx:.2}\" cy=\"{cy:.2}\" r=\"{:.2}\" fill=\"none\" stroke=\"#222\" stroke-width=\"1\"/>\n",
            c.radius * scale
        ));
    }
    out.push_str("</svg>\n");
    out
}

/// OBJ quad mesh of an R^3-valued grid.
pub fn grid_obj(f: &Grid2<Vec<f64>>) -> String {
    let mut out = String::new();
    for j in 0..f.h {
        for i in 0..f.w {
            let p = f.at(i, j);
            out.push_str(&format!("v {} {} {}\n", p[0], p[1], p.get(2).copied().unwrap_or(0.0)));
        }
    }
    let idx = |i: usize, j: usize| j * f.w + i + 1;
    for j in 0..f.h - 1 {
        for i in 0..f.w - 1 {
            out.push_str(&format!(
                "f {} {} {} {}\n",
                idx(i, j),
                idx(i + 1, j),
                idx(i + 1, j + 1),
                idx(i, j + 1)
            ));
        }
    }
    out
}

#[derive(Serialize)]
struct ContourDto {
    center: [f64; 2],
    radius: f64,
    argument_window: [f64; 2],
}

/// Integration loops of the discrete-logarithm contour for a sector:
/// small circles around the sector's slopes with their argument windows.
pub fn contour_json(sectors: &ddg_core::dca::Sectors, m: i64) -> String {
    let d = sectors.dim() as i64;
    let lo = sectors.gamma_at(m);
    let hi = sectors.gamma_at(m + d - 1);
    let loops: Vec<ContourDto> = (0..d)
        .map(|k| {
            let th = sectors.theta_at(m + k);
            ContourDto { center: [th.re, th.im], radius: 0.15, argument_window: [lo, hi] }
        })
        .collect();
    serde_json::to_string_pretty(&loops).expect("serializable")
}

pub fn write_text(path: &Path, body: &str) -> std::io::Result<()> {
    let mut f = std::fs::File::create(path)?;
    f.write_all(body.as_bytes())
}
