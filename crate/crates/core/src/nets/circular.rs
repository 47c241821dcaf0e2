//! Circular nets: concircularity tests on lifted coordinates, Miquel
//! propagation, and sphere fits.

use alloc::vec;
use alloc::vec::Vec;


use super::qnet::qnet_extend;
use super::vector::{dist, dot};
use super::NetError;

/// Rank of the lifted point matrix with rows (p, |p|^2, 1), computed by
/// row-reduction with normalized pivots; `tol` is the relative pivot
/// threshold.
pub fn lifted_rank(points: &[Vec<f64>], tol: f64) -> usize {
    let dim = points[0].len();
    let cols = dim + 2;
    let mut m: Vec<Vec<f64>> = points
        .iter()
        .map(|p| {
            let mut row: Vec<f64> = p.clone();
            row.push(dot(p, p));
            row.push(1.0);
            row
        })
        .collect();
    // normalize rows
    for row in m.iter_mut() {
        let s = row.iter().fold(0.0f64, |a, v| a.max(v.abs())).max(1e-300);
        for v in row.iter_mut() {
            *v /= s;
        }
    }
    let rows = m.len();
    let mut rank = 0;
    let mut r = 0;
    for c in 0..cols {
        let Some((pr, pv)) = (r..rows)
            .map(|i| (i, m[i][c].abs()))
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        else {
            break;
        };
        if pv < tol {
            continue;
        }
        m.swap(r, pr);
        for i in (r + 1)..rows {
            let f = m[i][c] / m[r][c];
            for cc in 0..cols {
                m[i][cc] -= f * m[r][cc];
            }
            // renormalize to keep the pivot threshold meaningful
            let s = m[i].iter().fold(0.0f64, |a, v| a.max(v.abs()));
            if s > 1.0 {
                for v in m[i].iter_mut() {
                    *v /= s;
                }
            }
        }
        rank += 1;
        r += 1;
        if r == rows {
            break;
        }
    }
    rank
}

/// Four points are concircular iff their lifted rank is at most 3.
pub fn circular_check(points: &[Vec<f64>; 4], tol: f64) -> bool {
    lifted_rank(points.as_slice(), tol) <= 3
}

/// Least-squares sphere through points: returns (center, radius, max
/// distance residual).
pub fn sphere_fit(points: &[Vec<f64>]) -> Result<(Vec<f64>, f64, f64), NetError> {
    let dim = points[0].len();
    // |p|^2 = 2 c . p + rho, solve normal equations for (c, rho)
    let n = dim + 1;
    let mut ata = vec![vec![0.0f64; n]; n];
    let mut atb = vec![0.0f64; n];
    for p in points {
        let mut row: Vec<f64> = p.iter().map(|v| 2.0 * v).collect();
        row.push(1.0);
        let b = dot(p, p);
        for i in 0..n {
            atb[i] += row[i] * b;
            for j in 0..n {
                ata[i][j] += row[i] * row[j];
            }
        }
    }
    let x = crate::linalg::solve_dense(&mut ata, &mut atb).map_err(|_| NetError::DegeneratePlanes)?;
    let center = x[..dim].to_vec();
    let rho = x[dim];
    let r2 = rho + dot(&center, &center);
    if r2 <= 0.0 {
        return Err(NetError::DegeneratePlanes);
    }
    let radius = r2.sqrt();
    let residual = points
        .iter()
        .map(|p| (dist(p, &center) - radius).abs())
        .fold(0.0f64, f64::max);
    Ok((center, radius, residual))
}

/// Miquel step: seven concircular-face points determine the eighth as the
/// intersection of the three shifted planes. Verifies the inputs are
/// concircular, and that the output closes three concircular faces with
/// all eight points on one sphere.
#[derive(Debug)]
pub struct MiquelResult {
    pub point: Vec<f64>,
    pub face_rank_tol: f64,
    pub sphere_residual: f64,
}

pub fn circular_extend(
    f: &[f64],
    f_i: [&[f64]; 3],
    f_ij: [&[f64]; 3], // f12, f13, f23
    tol: f64,
) -> Result<MiquelResult, NetError> {
    let [f1, f2, f3] = f_i;
    let [f12, f13, f23] = f_ij;
    for (a, b, c, d) in [
        (f, f1, f12, f2),
        (f, f1, f13, f3),
        (f, f2, f23, f3),
    ] {
        let quad = [a.to_vec(), b.to_vec(), c.to_vec(), d.to_vec()];
        if !circular_check(&quad, tol) {
            return Err(NetError::NotConcircular);
        }
    }
    let p = qnet_extend([f1, f2, f3], [f12, f13, f23])?;
    // new faces concircular
    for (a, b, c) in [(f1, f12, f13), (f2, f12, f23), (f3, f13, f23)] {
        let quad = [a.to_vec(), b.to_vec(), c.to_vec(), p.clone()];
        if !circular_check(&quad, 1e-7) {
            return Err(NetError::NotConcircular);
        }
    }
    let all: Vec<Vec<f64>> = [f, f1, f2, f3, f12, f13, f23, &p]
        .iter()
        .map(|v| v.to_vec())
        .collect();
    let (_, _, sphere_residual) = sphere_fit(&all)?;
    Ok(MiquelResult { point: p, face_rank_tol: tol, sphere_residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nets::vector::sub;
    use crate::scalar::seeded_rng;
    use rand::Rng;

    #[test]
    fn unit_square_is_circular() {
        let quad = [
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![1.0, 1.0],
            vec![0.0, 1.0],
        ];
        assert!(circular_check(&quad, 1e-9));
        let mut bad = quad.clone();
        bad[3][0] += 0.05;
        assert!(!circular_check(&bad, 1e-9));
    }

    #[test]
    fn unit_cube_miquel_point() {
        let f = vec![0.0, 0.0, 0.0];
        let f1 = vec![1.0, 0.0, 0.0];
        let f2 = vec![0.0, 1.0, 0.0];
        let f3 = vec![0.0, 0.0, 1.0];
        let f12 = vec![1.0, 1.0, 0.0];
        let f13 = vec![1.0, 0.0, 1.0];
        let f23 = vec![0.0, 1.0, 1.0];
        let r = circular_extend(&f, [&f1, &f2, &f3], [&f12, &f13, &f23], 1e-9).unwrap();
        assert!(dist(&r.point, &[1.0, 1.0, 1.0]) < 1e-12);
        assert!(r.sphere_residual < 1e-12);
    }

    /// random concircular hexahedron data on a sphere
    pub(crate) fn random_miquel_seed(
        rng: &mut rand_chacha::ChaCha8Rng,
    ) -> ([Vec<f64>; 4], [Vec<f64>; 3]) {
        let center: Vec<f64> = (0..3).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect();
        let radius = 1.0 + rng.gen::<f64>();
        let sphere_pt = |rng: &mut rand_chacha::ChaCha8Rng| -> Vec<f64> {
            loop {
                let v: Vec<f64> = (0..3).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect();
                let n = super::super::vector::norm(&v);
                if n > 0.3 {
                    return alloc::vec![
                        center[0] + radius * v[0] / n,
                        center[1] + radius * v[1] / n,
                        center[2] + radius * v[2] / n,
                    ];
                }
            }
        };
        let f = sphere_pt(rng);
        let f1 = sphere_pt(rng);
        let f2 = sphere_pt(rng);
        let f3 = sphere_pt(rng);
        // fourth point of each face on the circle through (f, f_i, f_j):
        // parametrize the circle through three points
        let circle_pt = |a: &[f64], b: &[f64], c: &[f64], t: f64| -> Vec<f64> {
            // circumcenter in the plane of (a, b, c)
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
            let r = super::super::vector::norm(&e1);
            let e1: Vec<f64> = e1.iter().map(|x| x / r).collect();
            // orthonormal e2 in the plane
            let mut e2 = sub(b, &cc);
            let p = dot(&e2, &e1);
            for k in 0..3 {
                e2[k] -= p * e1[k];
            }
            let n2 = super::super::vector::norm(&e2);
            let e2: Vec<f64> = e2.iter().map(|x| x / n2).collect();
            (0..3)
                .map(|k| cc[k] + r * (t.cos() * e1[k] + t.sin() * e2[k]))
                .collect()
        };
        let f12 = circle_pt(&f, &f1, &f2, 0.4 + rng.gen::<f64>());
        let f13 = circle_pt(&f, &f1, &f3, 0.7 + rng.gen::<f64>());
        let f23 = circle_pt(&f, &f2, &f3, 1.1 + rng.gen::<f64>());
        ([f, f1, f2, f3], [f12, f13, f23])
    }

    #[test]
    fn random_miquel_seeds_close_on_sphere() {
        let mut rng = seeded_rng(131);
        let mut done = 0;
        while done < 30 {
            let ([f, f1, f2, f3], [f12, f13, f23]) = random_miquel_seed(&mut rng);
            match circular_extend(&f, [&f1, &f2, &f3], [&f12, &f13, &f23], 1e-7) {
                Ok(r) => {
                    assert!(r.sphere_residual < 1e-9, "sphere residual {}", r.sphere_residual);
                    done += 1;
                }
                Err(NetError::DegeneratePlanes) => continue,
                Err(e) => panic!("unexpected: {e:?}"),
            }
        }
    }

    #[test]
    fn perturbed_quad_rejected() {
        let f = vec![0.0, 0.0, 0.0];
        let f1 = vec![1.0, 0.0, 0.0];
        let f2 = vec![0.0, 1.0, 0.0];
        let f3 = vec![0.0, 0.0, 1.0];
        let f12 = vec![1.0, 1.0, 0.03]; // off the circle through f, f1, f2
        let f13 = vec![1.0, 0.0, 1.0];
        let f23 = vec![0.0, 1.0, 1.0];
        assert_eq!(
            circular_extend(&f, [&f1, &f2, &f3], [&f12, &f13, &f23], 1e-9).unwrap_err(),
            NetError::NotConcircular
        );
    }
}
