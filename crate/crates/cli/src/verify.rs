//! Verification suites behind `ddg verify`: randomized consistency sweeps
//! with deterministic seeds, one report per check.

use std::path::Path;

use ddg_core::dca::{self, Sectors};
use ddg_core::hypsys;
use ddg_core::nets;
use ddg_core::patterns;
use ddg_core::quadeq::{self, QuadKind};
use ddg_core::scalar::{seeded_rng, GaussRational};
use ddg_core::ybmaps::{self, YbKind};
use num_complex::Complex64;

use crate::report::CheckReport;
use crate::Suite;

pub struct Options {
    pub exact: bool,
    pub samples: usize,
    pub tol: f64,
    pub sub: Option<String>,
    pub a: f64,
    pub n: usize,
    pub seed: u64,
}

pub fn run(suite: Suite, opts: &Options) -> Result<Vec<CheckReport>, String> {
    match suite {
        Suite::Abs => abs_suite(opts),
        Suite::Nets => nets_suite(opts),
        Suite::Dca => dca_suite(opts),
        Suite::Patterns => patterns_suite(opts),
        Suite::Yb => yb_suite(opts),
        Suite::Hypsys => hypsys_suite(opts),
    }
}

fn catalog() -> Vec<QuadKind> {
    vec![
        QuadKind::Q1 { delta: false },
        QuadKind::Q1 { delta: true },
        QuadKind::Q2,
        QuadKind::Q3 { delta: false },
        QuadKind::Q3 { delta: true },
        QuadKind::q4(Complex64::new(0.5, 0.0)),
        QuadKind::H1,
        QuadKind::H2,
        QuadKind::H3 { delta: false },
        QuadKind::H3 { delta: true },
        QuadKind::A1 { delta: false },
        QuadKind::A1 { delta: true },
        QuadKind::A2,
        QuadKind::CrossRatio,
        QuadKind::Hirota,
        QuadKind::Calapso,
    ]
}

fn abs_suite(opts: &Options) -> Result<Vec<CheckReport>, String> {
    let mut out = Vec::new();
    let mut rng = seeded_rng(opts.seed);
    for kind in catalog() {
        let name = format!("3d-consistency {}", kind.name());
        let report = if opts.exact && kind.supports_exact() {
            match quadeq::check_3d_consistency::<GaussRational, _>(&kind, opts.samples, &mut rng) {
                Ok(rep) => CheckReport::new(name, "exact", rep.samples)
                    .require(rep.failures == 0, "exact disagreement"),
                Err(e) => CheckReport::new(name, "exact", 0).fail(e.to_string()),
            }
        } else {
            match quadeq::check_3d_consistency::<Complex64, _>(&kind, opts.samples, &mut rng) {
                Ok(rep) => CheckReport::new(name, "float", rep.samples)
                    .residual(rep.max_discrepancy, 1e-9f64.max(opts.tol)),
                Err(e) => CheckReport::new(name, "float", 0).fail(e.to_string()),
            }
        };
        out.push(report);
        let name = format!("tetrahedron {}", kind.name());
        let rep = match quadeq::check_tetrahedron::<Complex64, _>(&kind, 10, &mut rng, 1e-9) {
            Ok(ok) => CheckReport::new(name, "float", 10).require(ok, "far vertex depends on f"),
            Err(e) => CheckReport::new(name, "float", 0).fail(e.to_string()),
        };
        out.push(rep);
    }
    Ok(out)
}

fn nets_suite(opts: &Options) -> Result<Vec<CheckReport>, String> {
    let mut out = Vec::new();
    let mut rng = seeded_rng(opts.seed);
    let n = (opts.samples / 5).max(10);
    out.push(match nets::qnet_check_c_map_4d::<GaussRational, _>(n, &mut rng) {
        Ok(k) => CheckReport::new("qnet coefficient map 4d", "exact", k),
        Err(e) => CheckReport::new("qnet coefficient map 4d", "exact", 0).fail(e.to_string()),
    });
    out.push(match nets::qnet_check_rotation_map_4d::<GaussRational, _>(n, &mut rng) {
        Ok(k) => CheckReport::new("rotation coefficient map 4d", "exact", k),
        Err(e) => CheckReport::new("rotation coefficient map 4d", "exact", 0).fail(e.to_string()),
    });
    out.push(match nets::tnet_check_star_triangle_4d::<GaussRational, _>(n, &mut rng) {
        Ok(k) => CheckReport::new("star-triangle map 4d", "exact", k)
            .require(k == n, "inconsistent sample"),
        Err(e) => CheckReport::new("star-triangle map 4d", "exact", 0).fail(e.to_string()),
    });
    // Miquel sweep
    let mut worst = 0.0f64;
    let mut done = 0;
    while done < opts.samples {
        use rand::Rng;
        let center: Vec<f64> = (0..3).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect();
        let radius = 1.0 + rng.gen::<f64>();
        let sphere_pt = |rng: &mut rand_chacha::ChaCha8Rng| -> Vec<f64> {
            loop {
                let v: Vec<f64> = (0..3).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect();
                let nn = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
                if nn > 0.3 {
                    return (0..3).map(|k| center[k] + radius * v[k] / nn).collect();
                }
            }
        };
        let f = sphere_pt(&mut rng);
        let f1 = sphere_pt(&mut rng);
        let f2 = sphere_pt(&mut rng);
        let f3 = sphere_pt(&mut rng);
        let f12 = circle_fourth(&f, &f1, &f2, 0.4 + rng.gen::<f64>());
        let f13 = circle_fourth(&f, &f1, &f3, 0.7 + rng.gen::<f64>());
        let f23 = circle_fourth(&f, &f2, &f3, 1.1 + rng.gen::<f64>());
        match nets::circular_extend(&f, [&f1, &f2, &f3], [&f12, &f13, &f23], 1e-7) {
            Ok(r) => {
                worst = worst.max(r.sphere_residual);
                done += 1;
            }
            Err(_) => continue,
        }
    }
    out.push(CheckReport::new("miquel sphere closing", "float", opts.samples).residual(worst, 1e-9));
    Ok(out)
}

fn circle_fourth(a: &[f64], b: &[f64], c: &[f64], t: f64) -> Vec<f64> {
    use ddg_core::nets::vector::{dot, sub};
    let u = sub(b, a);
    let v = sub(c, a);
    let uu = dot(&u, &u);
    let vv = dot(&v, &v);
    let uv = dot(&u, &v);
    let det = uu * vv - uv * uv;
    let s = 0.5 * (vv * uu - uv * vv) / det;
    let tt = 0.5 * (uu * vv - uv * uu) / det;
    let cc: Vec<f64> = (0..3).map(|k| a[k] + s * u[k] + tt * v[k]).collect();
    let e1 = sub(a, &cc);
    let r = dot(&e1, &e1).sqrt();
    let e1: Vec<f64> = e1.iter().map(|x| x / r).collect();
    let mut e2 = sub(b, &cc);
    let p = dot(&e2, &e1);
    for k in 0..3 {
        e2[k] -= p * e1[k];
    }
    let n2 = dot(&e2, &e2).sqrt();
    let e2: Vec<f64> = e2.iter().map(|x| x / n2).collect();
    (0..3)
        .map(|k| cc[k] + r * (t.cos() * e1[k] + t.sin() * e2[k]))
        .collect()
}

fn dca_suite(opts: &Options) -> Result<Vec<CheckReport>, String> {
    let mut out = Vec::new();
    let radius = opts.n.max(12);
    let g = dca::green_function_z2(radius).map_err(|e| e.to_string())?;
    let lap = |x: i64, y: i64| -> f64 {
        let mut acc = -4.0 * g[&(x, y)];
        for (dx, dy) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
            acc += g[&(x + dx, y + dy)];
        }
        acc
    };
    let origin = (lap(0, 0) - 2.0 * std::f64::consts::PI).abs();
    let mut off = 0.0f64;
    for x in -(radius as i64 - 1)..(radius as i64) {
        for y in -(radius as i64 - 1)..(radius as i64) {
            if (x + y).rem_euclid(2) == 0 && (x, y) != (0, 0) && x.abs() + y.abs() < radius as i64 {
                off = off.max(lap(x, y).abs());
            }
        }
    }
    out.push(CheckReport::new("green function laplacian", "float", g.len()).residual(origin.max(off), 1e-11));
    // exponential basis reconstruction
    let theta = vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)];
    let z0 = Complex64::new(1.7, 0.9);
    let reach = 8;
    let axis = |f: &dyn Fn(i64, i64) -> Complex64| -> Vec<Vec<Complex64>> {
        let r = reach as i64;
        vec![(-r..=r).map(|k| f(k, 0)).collect(), (-r..=r).map(|k| f(0, k)).collect()]
    };
    let fexp = |a: i64, b: i64| dca::discrete_exp(&theta, &[a, b], z0).unwrap();
    let data = dca::exp_expansion(&theta, axis(&fexp), reach).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for a in 0..6i64 {
        for b in 0..6i64 {
            let got = dca::reconstruct(&data, &[a, b]).map_err(|e| e.to_string())?;
            worst = worst.max((got - (fexp(a, b) - fexp(0, 0))).norm());
        }
    }
    out.push(CheckReport::new("exponential basis reconstruction", "float", 36).residual(worst, 1e-8));
    // isomonodromy constraint of the discrete log
    let s = Sectors::new(theta, 0.0);
    let field = dca::discrete_log_octant(&s, 0, 8).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for a in 0..7i64 {
        for b in 0..7i64 {
            if a + b == 0 {
                continue;
            }
            worst = worst.max(dca::constraint_residual(&field, &[a, b]).map_err(|e| e.to_string())?);
        }
    }
    out.push(CheckReport::new("discrete log isomonodromic constraint", "float", 48).residual(worst, 1e-10));
    Ok(out)
}

fn patterns_suite(opts: &Options) -> Result<Vec<CheckReport>, String> {
    let sub = opts.sub.as_deref().unwrap_or("zpow");
    let s = Sectors::new(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)], 0.0);
    let mut out = Vec::new();
    match sub {
        "zpow" => {
            let a = opts.a;
            if !(0.0 < a && a < 1.0) {
                return Err("exponent a must lie in (0, 1)".into());
            }
            let n = opts.n;
            let w = patterns::wpow_octant_stable(&s, a, 0, n).map_err(|e| e.to_string())?;
            let mut class = 0.0f64;
            for (p, v) in &w.values {
                if (p[0] + p[1]) % 2 == 0 {
                    class = class.max(v.im.abs());
                } else {
                    class = class.max((v.norm() - 1.0).abs());
                }
            }
            out.push(CheckReport::new("kite reality classes", "float", w.values.len()).residual(class, 1e-10));
            let z = patterns::zpow_octant_stable(&s, a, 0, n).map_err(|e| e.to_string())?;
            let mut worst = 0.0f64;
            for x in 1..n as i64 {
                for y in 1..n as i64 {
                    if let Some(r) = patterns::zpow_constraint_residual(&z, a, &[x, y]) {
                        worst = worst.max(r);
                    }
                    if let Some(r) = patterns::zpow_hirota_constraint_residual(&w, a, &[x, y]) {
                        worst = worst.max(r);
                    }
                }
            }
            out.push(CheckReport::new("isomonodromic constraints", "float", (n - 1) * (n - 1))
                .residual(worst, 1e-10));
        }
        "log" => {
            let field = patterns::dlog_octant_stable(&s, 0, opts.n).map_err(|e| e.to_string())?;
            let mut worst = 0.0f64;
            for x in 1..opts.n as i64 {
                for y in 1..opts.n as i64 {
                    if let Some(r) = patterns::dlog_constraint_residual(&field, &[x, y]) {
                        worst = worst.max(r);
                    }
                }
            }
            out.push(CheckReport::new("discrete log pattern constraint", "float", (opts.n - 1) * (opts.n - 1))
                .residual(worst, 1e-10));
        }
        "laplace" => {
            use ddg_core::quadcomplex::QuadGraph;
            let n = opts.n.min(12);
            let z = patterns::zpow_octant_stable(&s, opts.a, 0, n).map_err(|e| e.to_string())?;
            let g = QuadGraph::grid_with_parity(n, n, false);
            let zv: Vec<Complex64> = (0..g.n_vertices())
                .map(|v| {
                    let p = g.position(v).unwrap();
                    z[&vec![p.re as i64, p.im as i64]]
                })
                .collect();
            let pattern = patterns::pattern_from_z(&g, &zv, 1e-8).map_err(|e| e.to_string())?;
            let labels = |v: usize, w: usize| {
                let d = g.position(w).unwrap() - g.position(v).unwrap();
                d * d
            };
            let (black, white) = patterns::pattern_laplace_residuals(&pattern, &labels);
            let wb = black.iter().map(|(_, r)| *r).fold(0.0f64, f64::max);
            let ww = white.iter().map(|(_, r)| *r).fold(0.0f64, f64::max);
            out.push(CheckReport::new("black laplace sums", "float", black.len()).residual(wb, 1e-9));
            out.push(CheckReport::new("white radii products", "float", white.len()).residual(ww, 1e-9));
        }
        other => return Err(format!("unknown patterns sub-suite '{other}'")),
    }
    Ok(out)
}

fn yb_suite(opts: &Options) -> Result<Vec<CheckReport>, String> {
    let mut out = Vec::new();
    let mut rng = seeded_rng(opts.seed);
    for kind in [YbKind::RI, YbKind::RII, YbKind::RIII, YbKind::RIV, YbKind::RV] {
        let name = format!("yang-baxter {kind:?}");
        let rep = if opts.exact && matches!(kind, YbKind::RV) {
            match ybmaps::yb_check_exact(kind, opts.samples, &mut rng) {
                Ok(ok) => CheckReport::new(name, "exact", opts.samples).require(ok, "exact disagreement"),
                Err(e) => CheckReport::new(name, "exact", 0).fail(e.to_string()),
            }
        } else {
            match ybmaps::yb_check::<Complex64, _>(kind, opts.samples, &mut rng) {
                Ok(r) => CheckReport::new(name, "float", opts.samples).residual(r, 1e-10f64.max(opts.tol)),
                Err(e) => CheckReport::new(name, "float", 0).fail(e.to_string()),
            }
        };
        out.push(rep);
    }
    Ok(out)
}

fn hypsys_suite(_opts: &Options) -> Result<Vec<CheckReport>, String> {
    let mut out = Vec::new();
    let eps_list = [1.0 / 8.0, 1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0];
    for (name, family) in hypsys::canonical::stock::families() {
        match hypsys::convergence_order(family.as_ref(), &eps_list, 1.0) {
            Ok(rep) => {
                let expect_second = matches!(name, "ksurface" | "ksurface-backlund");
                let band = if expect_second { 1.8..=2.2 } else { 0.8..=1.2 };
                out.push(
                    CheckReport::new(format!("self-convergence {name}"), "float", eps_list.len())
                        .require(
                            band.contains(&rep.slope),
                            &format!("slope {:.3} outside {band:?}", rep.slope),
                        ),
                );
            }
            Err(e) => out.push(CheckReport::new(format!("self-convergence {name}"), "float", 0)
                .fail(e.to_string())),
        }
    }
    Ok(out)
}

pub fn convergence(csv: Option<&Path>) -> Result<Vec<String>, String> {
    let eps_list = [1.0 / 8.0, 1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0, 1.0 / 128.0];
    let mut lines = Vec::new();
    let mut body = String::from("family,eps,sup_error,slope\n");
    for (name, family) in hypsys::canonical::stock::families() {
        let rep = hypsys::convergence_order(family.as_ref(), &eps_list, 1.0)
            .map_err(|e| e.to_string())?;
        lines.push(format!("{name}: slope {:.3}", rep.slope));
        for (eps, err) in rep.eps.iter().zip(&rep.sup_errors) {
            body.push_str(&format!("{name},{eps},{err},{:.4}\n", rep.slope));
        }
    }
    if let Some(path) = csv {
        crate::formats::write_text(path, &body).map_err(|e| e.to_string())?;
        lines.push(format!("wrote {}", path.display()));
    }
    Ok(lines)
}
