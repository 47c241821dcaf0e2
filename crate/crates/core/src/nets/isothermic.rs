//! Discrete isothermic surfaces: factorized cross-ratios, the metric
//! function, Christoffel dual, Darboux transforms, and the light-cone lift.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::vector::{add, dist, dot, norm, scale, sub};
use super::{BilinearForm, NetError};
use crate::grid::Grid2;

/// Orthonormal chart of the plane through three points; returns the
/// complex coordinates of a list of (nearly) coplanar points in it.
fn plane_chart(points: &[&[f64]]) -> Result<Vec<Complex64>, NetError> {
    let origin = points[0];
    let mut e1 = sub(points[1], origin);
    let n1 = norm(&e1);
    if n1 < 1e-14 {
        return Err(NetError::SingularConfiguration);
    }
    e1 = scale(&e1, &(1.0 / n1));
    let mut e2 = Vec::new();
    for p in &points[2..] {
        let mut cand = sub(p, origin);
        let pr = dot(&cand, &e1);
        for (k, v) in cand.iter_mut().enumerate() {
            *v -= pr * e1[k];
        }
        if norm(&cand) > 1e-10 {
            e2 = scale(&cand, &(1.0 / norm(&cand)));
            break;
        }
    }
    if e2.is_empty() {
        // collinear configuration: chart onto the line
        e2 = vec![0.0; origin.len()];
    }
    Ok(points
        .iter()
        .map(|p| {
            let d = sub(p, origin);
            Complex64::new(dot(&d, &e1), if e2.iter().all(|v| *v == 0.0) { 0.0 } else { dot(&d, &e2) })
        })
        .collect())
}

/// Complex cross-ratio q(a, b, c, d) = (a-b)(c-d) / ((b-c)(d-a)) of four
/// concircular points in R^N, computed in the chart of their plane.
pub fn cross_ratio_planar(a: &[f64], b: &[f64], c: &[f64], d: &[f64]) -> Result<Complex64, NetError> {
    let z = plane_chart(&[a, b, c, d])?;
    let num = (z[0] - z[1]) * (z[2] - z[3]);
    let den = (z[1] - z[2]) * (z[3] - z[0]);
    if den.norm() < 1e-16 {
        return Err(NetError::SingularConfiguration);
    }
    Ok(num / den)
}

/// Solve q(a, b, X, d) = rho for X on the circle through (a, b, d).
pub fn solve_cross_ratio_in_plane(
    a: &[f64],
    b: &[f64],
    d: &[f64],
    rho: Complex64,
) -> Result<Vec<f64>, NetError> {
    let origin = a;
    let mut e1 = sub(b, origin);
    let n1 = norm(&e1);
    if n1 < 1e-14 {
        return Err(NetError::SingularConfiguration);
    }
    e1 = scale(&e1, &(1.0 / n1));
    let mut e2 = sub(d, origin);
    let pr = dot(&e2, &e1);
    for (k, v) in e2.iter_mut().enumerate() {
        *v -= pr * e1[k];
    }
    let n2 = norm(&e2);
    let planar = n2 > 1e-12;
    if planar {
        e2 = scale(&e2, &(1.0 / n2));
    }
    let chart = |p: &[f64]| {
        let dd = sub(p, origin);
        Complex64::new(dot(&dd, &e1), if planar { dot(&dd, &e2) } else { 0.0 })
    };
    let (za, zb, zd) = (chart(a), chart(b), chart(d));
    // (za - zb)(X - zd) = rho (zb - X)(zd - za)
    let k = rho * (zd - za);
    let x = ((za - zb) * zd + k * zb) / ((za - zb) + k);
    if !x.is_finite() {
        return Err(NetError::SingularConfiguration);
    }
    let mut out = origin.to_vec();
    for (kk, v) in out.iter_mut().enumerate() {
        *v += x.re * e1[kk];
        if planar {
            *v += x.im * e2[kk];
        }
    }
    Ok(out)
}

/// Cross-ratios of all faces factorize as -alpha1/alpha2.
pub fn isothermic_check(
    f: &Grid2<Vec<f64>>,
    alpha1: &[f64],
    alpha2: &[f64],
    tol: f64,
) -> Result<bool, NetError> {
    for j in 0..f.h - 1 {
        for i in 0..f.w - 1 {
            let q = cross_ratio_planar(f.at(i, j), f.at(i + 1, j), f.at(i + 1, j + 1), f.at(i, j + 1))?;
            let want = -alpha1[i] / alpha2[j];
            if (q - Complex64::new(want, 0.0)).norm() > tol * (1.0 + want.abs()) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Metric function s with |f_i - f|^2 = alpha_i s s_i, fixed by s(0, 0).
/// The two determinations at interior vertices must agree.
pub fn isothermic_metric(
    f: &Grid2<Vec<f64>>,
    alpha1: &[f64],
    alpha2: &[f64],
    s00: f64,
) -> Result<Grid2<f64>, NetError> {
    let (w, h) = (f.w, f.h);
    let mut s = Grid2::new(w, h);
    s.set(0, 0, s00);
    for i in 1..w {
        let prev = *s.at(i - 1, 0);
        let e = dist(f.at(i, 0), f.at(i - 1, 0));
        s.set(i, 0, e * e / (alpha1[i - 1] * prev));
    }
    for j in 1..h {
        for i in 0..w {
            let prev = *s.at(i, j - 1);
            let e = dist(f.at(i, j), f.at(i, j - 1));
            let v = e * e / (alpha2[j - 1] * prev);
            if i > 0 {
                let eh = dist(f.at(i, j), f.at(i - 1, j));
                let alt = eh * eh / (alpha1[i - 1] * s.at(i - 1, j));
                if (alt - v).abs() > 1e-8 * (1.0 + v.abs()) {
                    return Err(NetError::NotIsothermic);
                }
            }
            s.set(i, j, v);
        }
    }
    Ok(s)
}

/// Christoffel dual: integrate delta_1 f* = delta_1 f / (s s_1),
/// delta_2 f* = -delta_2 f / (s s_2). Returns the dual surface and the
/// worst face-closure residual.
pub fn isothermic_dual(
    f: &Grid2<Vec<f64>>,
    s: &Grid2<f64>,
    tol: f64,
) -> Result<(Grid2<Vec<f64>>, f64), NetError> {
    let (w, h) = (f.w, f.h);
    let d1 = |i: usize, j: usize| -> Vec<f64> {
        scale(&sub(f.at(i + 1, j), f.at(i, j)), &(1.0 / (s.at(i, j) * s.at(i + 1, j))))
    };
    let d2 = |i: usize, j: usize| -> Vec<f64> {
        scale(&sub(f.at(i, j + 1), f.at(i, j)), &(-1.0 / (s.at(i, j) * s.at(i, j + 1))))
    };
    let mut worst = 0.0f64;
    for j in 0..h - 1 {
        for i in 0..w - 1 {
            let pa = add(&d1(i, j), &d2(i + 1, j));
            let pb = add(&d2(i, j), &d1(i, j + 1));
            worst = worst.max(dist(&pa, &pb));
        }
    }
    if worst > tol {
        return Err(NetError::NonClosedForm);
    }
    let mut out: Grid2<Vec<f64>> = Grid2::from_fn(w, h, |_, _| Vec::new());
    out.set(0, 0, vec![0.0; f.at(0, 0).len()]);
    for i in 1..w {
        let prev = out.at(i - 1, 0).clone();
        out.set(i, 0, add(&prev, &d1(i - 1, 0)));
    }
    for j in 1..h {
        for i in 0..w {
            let prev = out.at(i, j - 1).clone();
            out.set(i, j, add(&prev, &d2(i, j - 1)));
        }
    }
    Ok((out, worst))
}

/// Darboux transform with parameter c from a seed point:
/// q(f, f1, f1+, f+) = alpha1 / c on horizontal edges,
/// q(f, f2, f2+, f+) = -alpha2 / c on vertical ones.
/// Returns the transform and the worst double-determination deviation.
pub fn isothermic_darboux(
    f: &Grid2<Vec<f64>>,
    alpha1: &[f64],
    alpha2: &[f64],
    c: f64,
    seed: &[f64],
) -> Result<(Grid2<Vec<f64>>, f64), NetError> {
    let (w, h) = (f.w, f.h);
    let mut p: Grid2<Vec<f64>> = Grid2::from_fn(w, h, |_, _| Vec::new());
    p.set(0, 0, seed.to_vec());
    let horiz = |i: usize, j: usize, fp: &[f64]| -> Result<Vec<f64>, NetError> {
        // q(f, f1, X, f+) = alpha1/c: X = f1+
        let rho = Complex64::new(alpha1[i] / c, 0.0);
        solve_q_fourth(f.at(i, j), f.at(i + 1, j), fp, rho)
    };
    let vert = |i: usize, j: usize, fp: &[f64]| -> Result<Vec<f64>, NetError> {
        let rho = Complex64::new(-alpha2[j] / c, 0.0);
        solve_q_fourth(f.at(i, j), f.at(i, j + 1), fp, rho)
    };
    for i in 1..w {
        let prev = p.at(i - 1, 0).clone();
        p.set(i, 0, horiz(i - 1, 0, &prev)?);
    }
    let mut worst = 0.0f64;
    for j in 1..h {
        for i in 0..w {
            let below = p.at(i, j - 1).clone();
            let v = vert(i, j - 1, &below)?;
            if i > 0 {
                let left = p.at(i - 1, j).clone();
                let alt = horiz(i - 1, j, &left)?;
                worst = worst.max(dist(&v, &alt));
            }
            p.set(i, j, v);
        }
    }
    Ok((p, worst))
}

/// Solve q(a, b, X, d) = rho for the third argument.
fn solve_q_fourth(a: &[f64], b: &[f64], d: &[f64], rho: Complex64) -> Result<Vec<f64>, NetError> {
    solve_cross_ratio_in_plane(a, b, d, rho)
}

/// Lift to the light cone of R^{N+1,1} in orthonormal coordinates:
/// s_hat = (f/s, (1 - |f|^2)/(2s), (1 + |f|^2)/(2s)).
pub fn lightcone_lift(f: &Grid2<Vec<f64>>, s: &Grid2<f64>) -> Grid2<Vec<f64>> {
    Grid2::from_fn(f.w, f.h, |i, j| {
        let p = f.at(i, j);
        let sv = *s.at(i, j);
        let f2 = dot(p, p);
        let mut out: Vec<f64> = p.iter().map(|v| v / sv).collect();
        out.push((1.0 - f2) / (2.0 * sv));
        out.push((1.0 + f2) / (2.0 * sv));
        out
    })
}

/// Residual of the Moutard equation of the lift:
/// s12 + s = a (s1 + s2) with a = (1/s12 + 1/s) / (1/s1 + 1/s2),
/// plus the strip invariants <s_hat, tau_i s_hat> = -alpha_i / 2.
pub fn lift_moutard_residual(
    lift: &Grid2<Vec<f64>>,
    s: &Grid2<f64>,
    alpha1: &[f64],
    alpha2: &[f64],
) -> (f64, f64) {
    let form = BilinearForm::Minkowski;
    let mut worst = 0.0f64;
    for j in 0..lift.h - 1 {
        for i in 0..lift.w - 1 {
            let a = (1.0 / s.at(i + 1, j + 1) + 1.0 / s.at(i, j))
                / (1.0 / s.at(i + 1, j) + 1.0 / s.at(i, j + 1));
            let lhs = add(lift.at(i + 1, j + 1), lift.at(i, j));
            let rhs = scale(&add(lift.at(i + 1, j), lift.at(i, j + 1)), &a);
            worst = worst.max(dist(&lhs, &rhs));
        }
    }
    let mut label_worst = 0.0f64;
    for j in 0..lift.h {
        for i in 0..lift.w - 1 {
            let ip = form.inner(lift.at(i, j), lift.at(i + 1, j));
            label_worst = label_worst.max((ip + alpha1[i] / 2.0).abs());
        }
    }
    for j in 0..lift.h - 1 {
        for i in 0..lift.w {
            let ip = form.inner(lift.at(i, j), lift.at(i, j + 1));
            label_worst = label_worst.max((ip + alpha2[j] / 2.0).abs());
        }
    }
    (worst, label_worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::seeded_rng;
    use rand::Rng;

    fn grid_from_complex(z: &Grid2<Complex64>) -> Grid2<Vec<f64>> {
        Grid2::from_fn(z.w, z.h, |i, j| alloc::vec![z.at(i, j).re, z.at(i, j).im])
    }

    /// planar isothermic patch by solving the factorized cross-ratio
    /// system in C
    pub(crate) fn planar_isothermic(
        w: usize,
        h: usize,
        alpha1: &[f64],
        alpha2: &[f64],
        seed: u64,
    ) -> Grid2<Vec<f64>> {
        let mut rng = seeded_rng(seed);
        let mut z: Grid2<Complex64> = Grid2::new(w, h);
        z.set(0, 0, Complex64::new(0.0, 0.0));
        for i in 1..w {
            let step = Complex64::from_polar(1.0 + 0.2 * rng.gen::<f64>(), 0.35 * rng.gen::<f64>());
            let prev = *z.at(i - 1, 0);
            z.set(i, 0, prev + step);
        }
        for j in 1..h {
            let step = Complex64::from_polar(1.0 + 0.2 * rng.gen::<f64>(), core::f64::consts::FRAC_PI_2 + 0.3 * rng.gen::<f64>());
            let prev = *z.at(0, j - 1);
            z.set(0, j, prev + step);
        }
        for j in 1..h {
            for i in 1..w {
                // q(f, f1, f12, f2) = -alpha1/alpha2: solve for f12
                let rho = Complex64::new(-alpha1[i - 1] / alpha2[j - 1], 0.0);
                let (a, b, d) = (*z.at(i - 1, j - 1), *z.at(i, j - 1), *z.at(i - 1, j));
                let k = rho * (d - a);
                let x = ((a - b) * d + k * b) / ((a - b) + k);
                z.set(i, j, x);
            }
        }
        grid_from_complex(&z)
    }

    #[test]
    fn unit_square_dual() {
        // f = (0, 1, 1+i, i), alpha = 1, 1: q = -1, dual (0, 1, 1-i, -i)
        let f = Grid2::from_fn(2, 2, |i, j| alloc::vec![i as f64, j as f64]);
        let q = cross_ratio_planar(f.at(0, 0), f.at(1, 0), f.at(1, 1), f.at(0, 1)).unwrap();
        assert!((q - Complex64::new(-1.0, 0.0)).norm() < 1e-14);
        let s = isothermic_metric(&f, &[1.0], &[1.0], 1.0).unwrap();
        let (dual, worst) = isothermic_dual(&f, &s, 1e-12).unwrap();
        assert!(worst < 1e-14);
        assert!(dist(dual.at(1, 0), &[1.0, 0.0]) < 1e-14);
        assert!(dist(dual.at(1, 1), &[1.0, -1.0]) < 1e-14);
        assert!(dist(dual.at(0, 1), &[0.0, -1.0]) < 1e-14);
        let qd = cross_ratio_planar(dual.at(0, 0), dual.at(1, 0), dual.at(1, 1), dual.at(0, 1)).unwrap();
        assert!((qd - Complex64::new(-1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn planar_patch_isothermic_and_dual_involutive() {
        let alpha1 = [1.0, 1.4, 0.8, 1.1];
        let alpha2 = [0.9, 1.2, 1.3, 0.7];
        let f = planar_isothermic(5, 5, &alpha1, &alpha2, 151);
        assert!(isothermic_check(&f, &alpha1, &alpha2, 1e-9).unwrap());
        let s = isothermic_metric(&f, &alpha1, &alpha2, 1.0).unwrap();
        let (dual, worst) = isothermic_dual(&f, &s, 1e-9).unwrap();
        assert!(worst < 1e-11, "closure {worst}");
        // dual cross-ratios factorize with the same labels
        assert!(isothermic_check(&dual, &alpha1, &alpha2, 1e-8).unwrap());
        // dual metric is 1/s
        let sd = isothermic_metric(&dual, &alpha1, &alpha2, 1.0).unwrap();
        for j in 0..f.h {
            for i in 0..f.w {
                assert!((sd.at(i, j) - 1.0 / s.at(i, j)).abs() < 1e-9);
            }
        }
        // double dual is the original up to translation
        let (ddual, _) = isothermic_dual(&dual, &sd, 1e-9).unwrap();
        let offset = sub(ddual.at(0, 0), f.at(0, 0));
        let mut worst = 0.0f64;
        for j in 0..f.h {
            for i in 0..f.w {
                worst = worst.max(dist(&sub(ddual.at(i, j), f.at(i, j)), &offset));
            }
        }
        assert!(worst < 1e-10, "involution deviation {worst}");
    }

    #[test]
    fn perturbed_patch_rejected() {
        let alpha1 = [1.0, 1.4];
        let alpha2 = [0.9, 1.2];
        let mut f = planar_isothermic(3, 3, &alpha1, &alpha2, 157);
        let mut p = f.at(1, 1).clone();
        p[0] += 0.05;
        f.set(1, 1, p);
        assert!(!isothermic_check(&f, &alpha1, &alpha2, 1e-6).unwrap());
    }

    #[test]
    fn darboux_transform_properties() {
        let alpha1 = [1.0, 1.3, 0.7];
        let alpha2 = [0.8, 1.1, 1.2];
        let f = planar_isothermic(4, 4, &alpha1, &alpha2, 163);
        let c = 1.7;
        let seed = alloc::vec![0.4, -0.6];
        let (fp, dev) = isothermic_darboux(&f, &alpha1, &alpha2, c, &seed).unwrap();
        assert!(dev < 1e-10, "path dependence {dev}");
        // transform is isothermic with the same labels
        assert!(isothermic_check(&fp, &alpha1, &alpha2, 1e-8).unwrap());
        // |f+ - f|^2 = c s s+ with s+ normalized by the seed distance
        let s = isothermic_metric(&f, &alpha1, &alpha2, 1.0).unwrap();
        let d0 = dist(fp.at(0, 0), f.at(0, 0));
        let sp0 = d0 * d0 / (c * s.at(0, 0));
        let sp = isothermic_metric(&fp, &alpha1, &alpha2, sp0).unwrap();
        let mut worst = 0.0f64;
        for j in 0..f.h {
            for i in 0..f.w {
                let d = dist(fp.at(i, j), f.at(i, j));
                worst = worst.max((d * d - c * s.at(i, j) * sp.at(i, j)).abs());
            }
        }
        assert!(worst < 1e-9, "metric relation deviation {worst}");
        // superposition of two Darboux transforms has cross-ratio c1/c2
        let c2 = 0.6;
        let seed2 = alloc::vec![-0.3, 0.5];
        let (fp2, _) = isothermic_darboux(&f, &alpha1, &alpha2, c2, &seed2).unwrap();
        let rho = Complex64::new(c / c2, 0.0);
        let top = solve_cross_ratio_in_plane(f.at(0, 0), fp.at(0, 0), fp2.at(0, 0), rho).unwrap();
        let (f12, dev12) = isothermic_darboux(&fp, &alpha1, &alpha2, c2, &top).unwrap();
        let (f21, dev21) = isothermic_darboux(&fp2, &alpha1, &alpha2, c, &top).unwrap();
        assert!(dev12 < 1e-9 && dev21 < 1e-9);
        let mut sup = 0.0f64;
        for j in 0..f.h {
            for i in 0..f.w {
                sup = sup.max(dist(f12.at(i, j), f21.at(i, j)));
            }
        }
        assert!(sup < 1e-8, "superposition deviation {sup}");
    }

    #[test]
    fn darboux_small_c_collapses_onto_surface() {
        let alpha1 = [1.0, 1.3, 0.7];
        let alpha2 = [0.8, 1.1, 1.2];
        let f = planar_isothermic(4, 4, &alpha1, &alpha2, 167);
        let seed = alloc::vec![0.5, -0.8];
        let mut prev = f64::INFINITY;
        for k in 1..=4 {
            let c = 10.0f64.powi(-k);
            let (fp, _) = isothermic_darboux(&f, &alpha1, &alpha2, c, &seed).unwrap();
            // mean displacement away from the seed vertex
            let mut acc = 0.0;
            let mut cnt = 0;
            for j in 0..f.h {
                for i in 0..f.w {
                    if i + j >= 2 {
                        acc += dist(fp.at(i, j), f.at(i, j));
                        cnt += 1;
                    }
                }
            }
            let mean = acc / cnt as f64;
            assert!(mean < prev, "displacement should decrease: {mean} vs {prev}");
            prev = mean;
        }
    }

    #[test]
    fn lightcone_lift_is_moutard() {
        let alpha1 = [1.0, 1.4, 0.8];
        let alpha2 = [0.9, 1.2, 1.3];
        let f = planar_isothermic(4, 4, &alpha1, &alpha2, 173);
        let s = isothermic_metric(&f, &alpha1, &alpha2, 1.0).unwrap();
        let lift = lightcone_lift(&f, &s);
        let form = BilinearForm::Minkowski;
        for ((_, _), v) in lift.iter_indexed() {
            assert!(form.inner(v, v).abs() < 1e-12, "light cone membership");
        }
        let (worst, labels) = lift_moutard_residual(&lift, &s, &alpha1, &alpha2);
        assert!(worst < 1e-10, "Moutard residual {worst}");
        assert!(labels < 1e-10, "label encoding {labels}");
    }

    #[test]
    fn unit_square_lift_values() {
        let f = Grid2::from_fn(2, 2, |i, j| alloc::vec![i as f64, j as f64]);
        let s = isothermic_metric(&f, &[1.0], &[1.0], 1.0).unwrap();
        let lift = lightcone_lift(&f, &s);
        let form = BilinearForm::Minkowski;
        let ip = form.inner(lift.at(0, 0), lift.at(1, 0));
        assert!((ip + 0.5).abs() < 1e-14, "<s, tau1 s> = -1/2");
        let (worst, _) = lift_moutard_residual(&lift, &s, &[1.0], &[1.0]);
        assert!(worst < 1e-14);
    }
}
