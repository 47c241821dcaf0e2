//! Object generation: z^{2a} and Log circle patterns, K-surface meshes,
//! isothermic surfaces, Green's function tables.

use std::path::PathBuf;

use clap::{Subcommand, ValueEnum};
use ddg_core::dca::{green_function_z2, Sectors};
use ddg_core::grid::Grid2;
use ddg_core::nets;
use ddg_core::patterns::{self, pattern_from_z};
use ddg_core::quadcomplex::QuadGraph;
use ddg_core::scalar::seeded_rng;
use num_complex::Complex64;
use rand::Rng;

use crate::formats;

#[derive(Clone, Copy, ValueEnum)]
pub enum GridKind {
    Square,
    Hex,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum AxesKind {
    GreatCircle,
    Generic,
}

#[derive(Subcommand)]
pub enum Target {
    /// discrete z^{2a} circle pattern
    Zpow {
        #[arg(long, default_value_t = 0.8)]
        a: f64,
        #[arg(long, value_enum, default_value_t = GridKind::Square)]
        grid: GridKind,
        #[arg(long, default_value_t = 20)]
        n: usize,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
        /// axis-table CSV
        #[arg(long)]
        csv: Option<PathBuf>,
        /// underlying quad-graph in the JSON schema
        #[arg(long)]
        graph_json: Option<PathBuf>,
    },
    /// discrete logarithm circle pattern
    Logpattern {
        #[arg(long, default_value_t = 12)]
        n: usize,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// discrete K-surface quad mesh
    Knet {
        #[arg(long, value_enum, default_value_t = AxesKind::GreatCircle)]
        axes: AxesKind,
        #[arg(long, default_value_t = 16)]
        steps: usize,
        #[arg(long)]
        obj: Option<PathBuf>,
    },
    /// discrete isothermic surface with its Christoffel dual
    Isothermic {
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[arg(long)]
        obj: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// discrete Green's function table on the black vertices
    Greens {
        #[arg(long, value_enum, default_value_t = GridKind::Square)]
        grid: GridKind,
        #[arg(long, default_value_t = 40)]
        radius: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
        /// contour data of the defining integral: per-sector loops
        /// {center theta_r, radius, argument window}
        #[arg(long)]
        contours: Option<PathBuf>,
    },
}

fn z2_sectors() -> Sectors {
    Sectors::new(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)], 0.0)
}

pub fn run(target: Target, seed: u64) -> Result<Vec<PathBuf>, String> {
    let mut written = Vec::new();
    match target {
        Target::Zpow { a, grid, n, svg, json, csv, graph_json } => {
            if !(0.0..1.0).contains(&a) || a == 0.0 {
                return Err("exponent a must lie in (0, 1)".into());
            }
            if svg.is_none() && json.is_none() && csv.is_none() && graph_json.is_none() {
                return Err("no output selected (use --svg/--json/--csv/--graph-json)".into());
            }
            match grid {
                GridKind::Square => {
                    let s = z2_sectors();
                    let z = patterns::zpow_octant_stable(&s, a, 0, n).map_err(|e| e.to_string())?;
                    let g = QuadGraph::grid_with_parity(n, n, false);
                    let zv: Vec<Complex64> = (0..g.n_vertices())
                        .map(|v| {
                            let p = g.position(v).unwrap();
                            z[&vec![p.re as i64, p.im as i64]]
                        })
                        .collect();
                    let pattern = pattern_from_z(&g, &zv, 1e-8).map_err(|e| e.to_string())?;
                    if let Some(path) = svg {
                        formats::write_text(&path, &formats::pattern_svg(&pattern, &zv, true, 40.0))
                            .map_err(|e| e.to_string())?;
                        written.push(path);
                    }
                    if let Some(path) = json {
                        formats::write_text(&path, &formats::pattern_json(&pattern))
                            .map_err(|e| e.to_string())?;
                        written.push(path);
                    }
                    if let Some(path) = csv {
                        let s2 = z2_sectors();
                        let mut body = String::from("n,axis,re,im\n");
                        for r in 0..2i64 {
                            for k in 0..=n {
                                let v = patterns::zpow_axis(&s2, a, r, k);
                                body.push_str(&format!("{k},{r},{},{}\n", v.re, v.im));
                            }
                        }
                        formats::write_text(&path, &body).map_err(|e| e.to_string())?;
                        written.push(path);
                    }
                    if let Some(path) = graph_json {
                        formats::write_text(&path, &formats::quadgraph_json(&g))
                            .map_err(|e| e.to_string())?;
                        written.push(path);
                    }
                }
                GridKind::Hex => {
                    // d = 3 rhombille slopes; bulk values via the Hirota fill
                    let s = Sectors::new(
                        vec![
                            Complex64::from_polar(1.0, 0.0),
                            Complex64::from_polar(1.0, std::f64::consts::PI / 3.0),
                            Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0),
                        ],
                        0.0,
                    );
                    let size = n.min(8);
                    let w = patterns::wpow_octant(&s, a, 0, size).map_err(|e| e.to_string())?;
                    let (z, _) = patterns::zpow_from_w(&s, &w).map_err(|e| e.to_string())?;
                    if let Some(path) = csv {
                        let mut body = String::from("n1,n2,n3,re,im\n");
                        for (p, v) in &z {
                            body.push_str(&format!("{},{},{},{},{}\n", p[0], p[1], p[2], v.re, v.im));
                        }
                        formats::write_text(&path, &body).map_err(|e| e.to_string())?;
                        written.push(path);
                    } else {
                        return Err("hex grid supports --csv output".into());
                    }
                }
            }
        }
        Target::Logpattern { n, svg, json } => {
            if svg.is_none() && json.is_none() {
                return Err("no output selected (use --svg/--json)".into());
            }
            let s = z2_sectors();
            let field = patterns::dlog_octant_stable(&s, 0, n).map_err(|e| e.to_string())?;
            // drop the origin row/column (the origin itself is infinite)
            let g = QuadGraph::grid_with_parity(n - 1, n - 1, false);
            let zv: Vec<Complex64> = (0..g.n_vertices())
                .map(|v| {
                    let p = g.position(v).unwrap();
                    field.at(&[p.re as i64 + 1, p.im as i64 + 1]).unwrap()
                })
                .collect();
            let pattern = pattern_from_z(&g, &zv, 1e-7).map_err(|e| e.to_string())?;
            if let Some(path) = svg {
                formats::write_text(&path, &formats::pattern_svg(&pattern, &zv, true, 40.0))
                    .map_err(|e| e.to_string())?;
                written.push(path);
            }
            if let Some(path) = json {
                formats::write_text(&path, &formats::pattern_json(&pattern))
                    .map_err(|e| e.to_string())?;
                written.push(path);
            }
        }
        Target::Knet { axes, steps, obj } => {
            let Some(path) = obj else {
                return Err("no output selected (use --obj)".into());
            };
            let eps = 1.0 / steps as f64;
            let (g1, g2): (Box<dyn Fn(f64) -> [f64; 3]>, Box<dyn Fn(f64) -> [f64; 3]>) = match axes
            {
                AxesKind::GreatCircle => (
                    Box::new(|t: f64| [t.sin(), 0.0, t.cos()]),
                    Box::new(|t: f64| [0.0, t.sin(), t.cos()]),
                ),
                AxesKind::Generic => (
                    Box::new(|t: f64| {
                        let v = [(t + 0.2 * (2.0 * t).sin()).sin(), 0.2 * (1.3 * t).sin(), (t + 0.2 * (2.0 * t).sin()).cos()];
                        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
                        [v[0] / n, v[1] / n, v[2] / n]
                    }),
                    Box::new(|t: f64| {
                        let v = [0.15 * (1.1 * t).sin(), (t - 0.1 * t * t).sin(), (t - 0.1 * t * t).cos()];
                        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
                        [v[0] / n, v[1] / n, v[2] / n]
                    }),
                ),
            };
            let row0: Vec<Vec<f64>> = (0..=steps).map(|i| g1(i as f64 * eps).to_vec()).collect();
            let col0: Vec<Vec<f64>> = (0..=steps).map(|j| g2(j as f64 * eps).to_vec()).collect();
            let gauss = nets::ksurface_extend(&row0, &col0).map_err(|e| e.to_string())?;
            let (f, _) = nets::lelieuvre_surface(&gauss).map_err(|e| e.to_string())?;
            formats::write_text(&path, &formats::grid_obj(&f)).map_err(|e| e.to_string())?;
            written.push(path);
        }
        Target::Isothermic { n, obj, json } => {
            if obj.is_none() && json.is_none() {
                return Err("no output selected (use --obj/--json)".into());
            }
            // planar isothermic patch from the factorized cross-ratio
            // system, lifted to the sphere by inverse stereographic
            // projection (Moebius invariance keeps it isothermic)
            let mut rng = seeded_rng(seed);
            let alpha1: Vec<f64> = (0..n).map(|_| 0.8 + 0.4 * rng.gen::<f64>()).collect();
            let alpha2: Vec<f64> = (0..n).map(|_| 0.8 + 0.4 * rng.gen::<f64>()).collect();
            let mut z: Grid2<Complex64> = Grid2::new(n + 1, n + 1);
            z.set(0, 0, Complex64::new(0.12, 0.07));
            for i in 1..=n {
                let step = Complex64::from_polar(0.5 + 0.1 * rng.gen::<f64>(), 0.25 * rng.gen::<f64>());
                let prev = *z.at(i - 1, 0);
                z.set(i, 0, prev + step);
            }
            for j in 1..=n {
                let step = Complex64::from_polar(
                    0.5 + 0.1 * rng.gen::<f64>(),
                    std::f64::consts::FRAC_PI_2 + 0.25 * rng.gen::<f64>(),
                );
                let prev = *z.at(0, j - 1);
                z.set(0, j, prev + step);
            }
            for j in 1..=n {
                for i in 1..=n {
                    let rho = Complex64::new(-alpha1[i - 1] / alpha2[j - 1], 0.0);
                    let (a, b, d) = (*z.at(i - 1, j - 1), *z.at(i, j - 1), *z.at(i - 1, j));
                    let k = rho * (d - a);
                    let x = ((a - b) * d + k * b) / ((a - b) + k);
                    z.set(i, j, x);
                }
            }
            // inverse stereographic lift to S^2
            let f = Grid2::from_fn(n + 1, n + 1, |i, j| {
                let w = *z.at(i, j);
                let d = 1.0 + w.norm_sqr();
                vec![2.0 * w.re / d, 2.0 * w.im / d, (w.norm_sqr() - 1.0) / d]
            });
            if let Some(path) = obj {
                formats::write_text(&path, &formats::grid_obj(&f)).map_err(|e| e.to_string())?;
                written.push(path);
            }
            if let Some(path) = json {
                let rows: Vec<Vec<[f64; 3]>> = (0..f.h)
                    .map(|j| (0..f.w).map(|i| {
                        let p = f.at(i, j);
                        [p[0], p[1], p[2]]
                    }).collect())
                    .collect();
                let body = serde_json::to_string_pretty(&rows).expect("serializable");
                formats::write_text(&path, &body).map_err(|e| e.to_string())?;
                written.push(path);
            }
        }
        Target::Greens { grid, radius, csv, contours } => {
            if csv.is_none() && contours.is_none() {
                return Err("no output selected (use --csv/--contours)".into());
            }
            match grid {
                GridKind::Square => {
                    if let Some(path) = csv {
                        let g = green_function_z2(radius).map_err(|e| e.to_string())?;
                        let mut body = String::from("x,y,value\n");
                        for (&(x, y), &v) in &g {
                            body.push_str(&format!("{x},{y},{v}\n"));
                        }
                        formats::write_text(&path, &body).map_err(|e| e.to_string())?;
                        written.push(path);
                    }
                    if let Some(path) = contours {
                        let s = z2_sectors();
                        formats::write_text(&path, &formats::contour_json(&s, 0))
                            .map_err(|e| e.to_string())?;
                        written.push(path);
                    }
                }
                GridKind::Hex => return Err("greens supports the square grid".into()),
            }
        }
    }
    Ok(written)
}
