//! Circle patterns extracted from kite-class solutions: circles at white
//! vertices, intersection points at black ones, intersection angles per
//! black edge, and the pattern-level identities.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::{cross_ratio, PatternError};
use crate::quadcomplex::{Color, QuadGraph};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circle {
    pub center: Complex64,
    pub radius: f64,
}

/// A circle pattern with the combinatorics of the black graph of `graph`:
/// circles indexed by white vertices, intersection points by black ones,
/// intersection angles by faces (equivalently black edges).
#[derive(Debug, Clone)]
pub struct CirclePattern {
    pub graph: QuadGraph,
    pub circles: BTreeMap<usize, Circle>,
    pub points: BTreeMap<usize, Complex64>,
    /// geometric intersection angle phi in (0, pi) per face
    pub phi: BTreeMap<usize, f64>,
}

/// Build the pattern from a kite-class solution z on the graph vertices:
/// white values are centers, black values intersection points, radii the
/// (constant) kite edge lengths, angles from the face cross-ratios
/// q = exp(2 i phi*).
pub fn pattern_from_z(
    graph: &QuadGraph,
    z: &[Complex64],
    tol: f64,
) -> Result<CirclePattern, PatternError> {
    let mut circles = BTreeMap::new();
    let mut points = BTreeMap::new();
    let mut radii_samples: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    for f in graph.proper_faces() {
        let q = graph.face(f);
        let (x0, y0, x1, y1) = (q[0], q[1], q[2], q[3]);
        for (w, blacks) in [(y0, [x0, x1]), (y1, [x0, x1])] {
            for b in blacks {
                radii_samples.entry(w).or_default().push((z[b] - z[w]).norm());
            }
        }
    }
    for (w, samples) in &radii_samples {
        let r0 = samples[0];
        for s in samples {
            if (s - r0).abs() > tol * (1.0 + r0) {
                // witness: first face at this white vertex
                let face = graph
                    .proper_faces()
                    .find(|&f| graph.face(f).contains(w))
                    .unwrap_or(0);
                return Err(PatternError::NotAKite(face));
            }
        }
        circles.insert(*w, Circle { center: z[*w], radius: r0 });
    }
    for v in 0..graph.n_vertices() {
        if graph.color(v) == Color::Black {
            points.insert(v, z[v]);
        }
    }
    let mut phi = BTreeMap::new();
    for f in graph.proper_faces() {
        let q = graph.face(f);
        let cr = cross_ratio(z[q[0]], z[q[1]], z[q[2]], z[q[3]]);
        if (cr.norm() - 1.0).abs() > 100.0 * tol {
            return Err(PatternError::NotAKite(f));
        }
        let mut phi_star = cr.arg() / 2.0;
        if phi_star < 0.0 {
            phi_star += core::f64::consts::PI;
        }
        phi.insert(f, core::f64::consts::PI - phi_star);
    }
    Ok(CirclePattern { graph: graph.clone(), circles, points, phi })
}

/// Integrability per circle: around every interior white vertex the
/// product of exp(i phi(e*)) with phi(e*) = pi - phi equals 1. The companion
/// black-vertex identity (the kite angles close up around intersection
/// points) holds for any pattern and is asserted unconditionally.
/// Returns (white vertex, integrable) pairs.
pub fn integrable_pattern_check(pattern: &CirclePattern, tol: f64) -> Vec<(usize, bool)> {
    let g = &pattern.graph;
    let mut out = Vec::new();
    for v in g.interior_vertices() {
        let flower = match g.flower(v) {
            Some(fl) => fl,
            None => continue,
        };
        let total: f64 = flower.iter().map(|f| pattern.phi[f]).sum();
        match g.color(v) {
            Color::White => {
                let sum_dual: f64 = flower
                    .iter()
                    .map(|f| core::f64::consts::PI - pattern.phi[f])
                    .sum();
                let prod_defect = (Complex64::from_polar(1.0, sum_dual) - 1.0).norm();
                out.push((v, prod_defect < tol));
            }
            Color::Black => {
                // geometric identity for genuine patterns
                let defect = (Complex64::from_polar(1.0, total) - 1.0).norm();
                debug_assert!(defect < 1e-6, "kite angles do not close at {v}");
                let _ = defect;
            }
        }
    }
    out
}

/// Laplace-type residuals of a pattern: per interior black vertex the sum
/// sum_k (alpha_k - alpha_{k+1}) / (z(x_k) - z(x_0)), and per interior
/// white vertex the radii product
/// prod_j (r_0 + r_j exp(i phi_j^*)) / (r_0 + r_j exp(-i phi_j^*)) = 1
/// which holds for any circle pattern.
pub fn pattern_laplace_residuals(
    pattern: &CirclePattern,
    labels: &dyn Fn(usize, usize) -> Complex64,
) -> (Vec<(usize, f64)>, Vec<(usize, f64)>) {
    let g = &pattern.graph;
    let mut black = Vec::new();
    let mut white = Vec::new();
    for v in g.interior_vertices() {
        let flower = match g.flower(v) {
            Some(fl) => fl,
            None => continue,
        };
        match g.color(v) {
            Color::Black => {
                let n = flower.len();
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    let q = {
                        let raw = g.face(flower[k]);
                        if raw[0] == v {
                            raw
                        } else {
                            [raw[2], raw[3], raw[0], raw[1]]
                        }
                    };
                    let (wa, xop, wb) = (q[1], q[2], q[3]);
                    let next = g.face(flower[(k + 1) % n]);
                    let (w_prev, w_next) = if next.contains(&wb) { (wa, wb) } else { (wb, wa) };
                    let z0 = pattern.points[&v];
                    let zk = pattern.points[&xop];
                    acc += (labels(v, w_prev) - labels(v, w_next)) / (zk - z0);
                }
                black.push((v, acc.norm()));
            }
            Color::White => {
                let r0 = pattern.circles[&v].radius;
                let mut prod = Complex64::new(1.0, 0.0);
                for &f in &flower {
                    let q = g.face(f);
                    let other_white = if q[1] == v { q[3] } else { q[1] };
                    let rj = pattern.circles[&other_white].radius;
                    let phi_star = core::f64::consts::PI - pattern.phi[&f];
                    let e = Complex64::from_polar(1.0, phi_star);
                    prod *= (r0 + rj * e) / (r0 + rj * e.conj());
                }
                white.push((v, (prod - 1.0).norm()));
            }
        }
    }
    (black, white)
}

/// Count proper edge crossings between kites of adjacent faces: an
/// immersion audit. Shared endpoints are not crossings.
pub fn kite_overlap_count(graph: &QuadGraph, z: &[Complex64], tol: f64) -> usize {
    let faces: Vec<usize> = graph.proper_faces().collect();
    let mut count = 0;
    for (ai, &fa) in faces.iter().enumerate() {
        for &fb in faces.iter().skip(ai + 1) {
            let qa = graph.face(fa);
            let qb = graph.face(fb);
            // adjacent kites share an edge (two vertices)
            let shared = qa.iter().filter(|v| qb.contains(v)).count();
            if shared < 2 {
                continue;
            }
            for ea in 0..4 {
                let (a1, a2) = (qa[ea], qa[(ea + 1) % 4]);
                for eb in 0..4 {
                    let (b1, b2) = (qb[eb], qb[(eb + 1) % 4]);
                    if a1 == b1 || a1 == b2 || a2 == b1 || a2 == b2 {
                        continue;
                    }
                    if segments_cross(z[a1], z[a2], z[b1], z[b2], tol) {
                        count += 1;
                    }
                }
            }
        }
    }
    count
}

fn segments_cross(a: Complex64, b: Complex64, c: Complex64, d: Complex64, tol: f64) -> bool {
    let orient = |p: Complex64, q: Complex64, r: Complex64| -> f64 {
        let u = q - p;
        let v = r - p;
        u.re * v.im - u.im * v.re
    };
    let d1 = orient(a, b, c);
    let d2 = orient(a, b, d);
    let d3 = orient(c, d, a);
    let d4 = orient(c, d, b);
    let scale = (b - a).norm() * (d - c).norm() + 1e-300;
    d1 * d2 < -tol * scale && d3 * d4 < -tol * scale
}

#[cfg(test)]
mod tests {
    use super::*;

    /// isoradial trivial pattern on the grid with white at even parity
    fn isoradial(n: usize) -> (QuadGraph, Vec<Complex64>) {
        let g = QuadGraph::grid_with_parity(n, n, false);
        let z: Vec<Complex64> = (0..g.n_vertices()).map(|v| g.position(v).unwrap()).collect();
        (g, z)
    }

    #[test]
    fn isoradial_pattern_extraction() {
        let (g, z) = isoradial(4);
        let p = pattern_from_z(&g, &z, 1e-10).unwrap();
        for c in p.circles.values() {
            assert!((c.radius - 1.0).abs() < 1e-12);
        }
        for (_, phi) in &p.phi {
            assert!((phi - core::f64::consts::FRAC_PI_2).abs() < 1e-12);
        }
        // orthogonal pattern is integrable
        for (_, ok) in integrable_pattern_check(&p, 1e-9) {
            assert!(ok);
        }
        // both Laplace identities hold
        let labels = |v: usize, w: usize| {
            let d = g.position(w).unwrap() - g.position(v).unwrap();
            d * d
        };
        let (black, white) = pattern_laplace_residuals(&p, &labels);
        assert!(!black.is_empty() && !white.is_empty());
        for (_, r) in black {
            assert!(r < 1e-12);
        }
        for (_, r) in white {
            assert!(r < 1e-12);
        }
        // zero overlaps
        assert_eq!(kite_overlap_count(&g, &z, 1e-12), 0);
    }

    #[test]
    fn perturbed_angle_fails_adjacent_circles() {
        let (g, z) = isoradial(4);
        let mut p = pattern_from_z(&g, &z, 1e-10).unwrap();
        // bump one stored angle
        let f0 = g.proper_faces().next().unwrap();
        *p.phi.get_mut(&f0).unwrap() += 0.1;
        let q = g.face(f0);
        let results = integrable_pattern_check(&p, 1e-9);
        for (v, ok) in results {
            let adjacent = q[1] == v || q[3] == v;
            if adjacent {
                assert!(!ok, "adjacent circle unexpectedly integrable");
            }
        }
    }

    #[test]
    fn perturbed_point_breaks_black_laplace_keeps_radii_product() {
        let (g, mut z) = isoradial(4);
        let p0 = pattern_from_z(&g, &z, 1e-10).unwrap();
        // move one interior black point inside the struct only
        let vmove = g
            .interior_vertices()
            .into_iter()
            .find(|&v| g.color(v) == Color::Black)
            .unwrap();
        z[vmove] += Complex64::new(0.07, -0.04);
        let mut p = p0.clone();
        p.points.insert(vmove, z[vmove]);
        let labels = |v: usize, w: usize| {
            let d = g.position(w).unwrap() - g.position(v).unwrap();
            d * d
        };
        let (black, white) = pattern_laplace_residuals(&p, &labels);
        // radii product untouched
        for (_, r) in white {
            assert!(r < 1e-12);
        }
        // black Laplace fails at the moved vertex
        let moved = black.iter().find(|(v, _)| *v == vmove).unwrap();
        assert!(moved.1 > 1e-3, "moved point residual {}", moved.1);
    }

    #[test]
    fn rhombic_flower_pattern_is_integrable() {
        // isoradial pattern on the rhombille flower: z = p
        let g = QuadGraph::rhombic_flower(6);
        // recolor: centers must be white; the flower's hub is black in the
        // constructor, so swap colors via the z-values directly by using
        // the graph as-is: hub = black intersection point, ring = whites
        let z: Vec<Complex64> = (0..g.n_vertices()).map(|v| g.position(v).unwrap()).collect();
        let p = pattern_from_z(&g, &z, 1e-9).unwrap();
        for (_, ok) in integrable_pattern_check(&p, 1e-9) {
            assert!(ok, "rhombic flower should be integrable");
        }
    }

    #[test]
    fn hexagonal_zpow_laplace_sums() {
        // z^{2/3} on the corner surface of the Z^3 octant: a rhombille
        // patch; black Laplace sums with labels theta_k^2 vanish
        use crate::dca::Sectors;
        use crate::patterns::{wpow_octant, zpow_from_w};
        use crate::quadcomplex::Color;
        let theta = [
            Complex64::from_polar(1.0, 0.0),
            Complex64::from_polar(1.0, core::f64::consts::PI / 3.0),
            Complex64::from_polar(1.0, 2.0 * core::f64::consts::PI / 3.0),
        ];
        let s = Sectors::new(theta.to_vec(), 0.0);
        let a = 1.0 / 3.0;
        let w = wpow_octant(&s, a, 0, 6).unwrap();
        let (zfield, _) = zpow_from_w(&s, &w).unwrap();
        // corner surface of [0,3]^3: faces on the three coordinate planes
        let mut pts: Vec<[i64; 3]> = Vec::new();
        let mut faces_idx: Vec<[usize; 4]> = Vec::new();
        let mut index = alloc::collections::BTreeMap::new();
        let mut id_of = |p: [i64; 3], pts: &mut Vec<[i64; 3]>| -> usize {
            *index.entry(p).or_insert_with(|| {
                pts.push(p);
                pts.len() - 1
            })
        };
        let planes = [(0usize, 1usize), (0, 2), (1, 2)];
        for (i, j) in planes {
            for u in 0..3i64 {
                for v in 0..3i64 {
                    let mut base = [0i64; 3];
                    base[i] = u;
                    base[j] = v;
                    let mut pi = base;
                    pi[i] += 1;
                    let mut pj = base;
                    pj[j] += 1;
                    let mut pij = base;
                    pij[i] += 1;
                    pij[j] += 1;
                    let q = [
                        id_of(base, &mut pts),
                        id_of(pi, &mut pts),
                        id_of(pij, &mut pts),
                        id_of(pj, &mut pts),
                    ];
                    faces_idx.push(q);
                }
            }
        }
        let colors: Vec<Color> = pts
            .iter()
            .map(|p| {
                if (p[0] + p[1] + p[2]).rem_euclid(2) == 1 {
                    Color::Black // intersection points at odd parity
                } else {
                    Color::White
                }
            })
            .collect();
        let positions: Vec<Option<Complex64>> = pts
            .iter()
            .map(|p| Some(theta[0] * p[0] as f64 + theta[1] * p[1] as f64 + theta[2] * p[2] as f64))
            .collect();
        let g = QuadGraph::new(colors, positions, faces_idx).unwrap();
        let z: Vec<Complex64> = pts.iter().map(|p| zfield[&alloc::vec![p[0], p[1], p[2]]]).collect();
        // labels alpha = theta_axis^2 on the lattice edges
        let labels = |vi: usize, wi: usize| -> Complex64 {
            let (p, q) = (pts[vi], pts[wi]);
            let axis = (0..3).find(|&k| p[k] != q[k]).unwrap();
            theta[axis] * theta[axis]
        };
        let residuals =
            crate::quadeq::laplace_reduce(&crate::quadeq::QuadKind::CrossRatio, &g, &labels, &z)
                .unwrap();
        assert!(!residuals.is_empty(), "no interior black vertices");
        for (v, r) in residuals {
            assert!(r < 1e-9, "hexagonal laplace at {v}: {r}");
        }
    }

    #[test]
    fn non_kite_rejected() {
        let (g, mut z) = isoradial(3);
        let w = (0..g.n_vertices()).find(|&v| g.color(v) == Color::White).unwrap();
        z[w] += Complex64::new(0.2, 0.1);
        assert!(matches!(
            pattern_from_z(&g, &z, 1e-8),
            Err(PatternError::NotAKite(_))
        ));
    }
}
