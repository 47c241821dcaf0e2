//! S-isothermic surfaces: sphere-valued Moutard nets in the quadric
//! <s, s> = 1 of R^{N+1,1} and the dual surface built from centers and
//! radii.

use alloc::vec::Vec;


use super::vector::{add, dist, dot, scale, sub};
use super::{BilinearForm, NetError};
use crate::grid::Grid2;

/// Fill a 2D Moutard net in the quadric <s, s> = kappa^2 (plus form):
/// s12 = a (s1 + s2) - s with a = <s, s1 + s2> / (kappa^2 + <s1, s2>).
pub fn sisothermic_moutard_fill(
    form: BilinearForm,
    kappa_sq: f64,
    row0: &[Vec<f64>],
    col0: &[Vec<f64>],
) -> Result<Grid2<Vec<f64>>, NetError> {
    let w = row0.len();
    let h = col0.len();
    let mut s: Grid2<Vec<f64>> = Grid2::from_fn(w, h, |_, _| Vec::new());
    for (i, p) in row0.iter().enumerate() {
        s.set(i, 0, p.clone());
    }
    for (j, p) in col0.iter().enumerate() {
        s.set(0, j, p.clone());
    }
    for j in 1..h {
        for i in 1..w {
            let sv = s.at(i - 1, j - 1);
            let s1 = s.at(i, j - 1);
            let s2 = s.at(i - 1, j);
            let den = kappa_sq + form.inner(s1, s2);
            if den.abs() < 1e-12 {
                return Err(NetError::SingularConfiguration);
            }
            let sum = add(s1, s2);
            let a = form.inner(sv, &sum) / den;
            let v = sub(&scale(&sum, &a), sv);
            s.set(i, j, v);
        }
    }
    Ok(s)
}

/// Centers and radii from a lift in the quadric <s, s> = 1 of R^{N+1,1}
/// (orthonormal coordinates, last two from e0/e_infty):
/// s = (c/r, (1 - (|c|^2 - r^2))/(2r), (1 + (|c|^2 - r^2))/(2r)).
pub fn sisothermic_from_lift(lift: &Grid2<Vec<f64>>) -> Result<(Grid2<Vec<f64>>, Grid2<f64>), NetError> {
    let n = lift.at(0, 0).len() - 2;
    let mut centers: Grid2<Vec<f64>> = Grid2::from_fn(lift.w, lift.h, |_, _| Vec::new());
    let mut radii: Grid2<f64> = Grid2::new(lift.w, lift.h);
    for j in 0..lift.h {
        for i in 0..lift.w {
            let v = lift.at(i, j);
            // xi0 = e0-coefficient = v[n] + v[n+1]
            let xi0 = v[n] + v[n + 1];
            if xi0.abs() < 1e-12 {
                return Err(NetError::SingularConfiguration);
            }
            let r = 1.0 / xi0;
            let c: Vec<f64> = v[..n].iter().map(|x| x * r).collect();
            centers.set(i, j, c);
            radii.set(i, j, r);
        }
    }
    Ok((centers, radii))
}

/// Dual S-isothermic surface: integrate
/// delta_1 c* = delta_1 c / (r r_1), delta_2 c* = -delta_2 c / (r r_2),
/// r* = 1/r. Returns (c*, r*) with the closure residuals of the center
/// form and of the auxiliary e_infty form.
pub fn sisothermic_dual(
    centers: &Grid2<Vec<f64>>,
    radii: &Grid2<f64>,
    tol: f64,
) -> Result<(Grid2<Vec<f64>>, Grid2<f64>, f64, f64), NetError> {
    let (w, h) = (centers.w, centers.h);
    let d1 = |i: usize, j: usize| -> Vec<f64> {
        scale(
            &sub(centers.at(i + 1, j), centers.at(i, j)),
            &(1.0 / (radii.at(i, j) * radii.at(i + 1, j))),
        )
    };
    let d2 = |i: usize, j: usize| -> Vec<f64> {
        scale(
            &sub(centers.at(i, j + 1), centers.at(i, j)),
            &(-1.0 / (radii.at(i, j) * radii.at(i, j + 1))),
        )
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
    // auxiliary w-form: the e_infty part |c|^2 - r^2 under the same rule
    let q = |i: usize, j: usize| -> f64 {
        dot(centers.at(i, j), centers.at(i, j)) - radii.at(i, j) * radii.at(i, j)
    };
    let w1 = |i: usize, j: usize| (q(i + 1, j) - q(i, j)) / (radii.at(i, j) * radii.at(i + 1, j));
    let w2 = |i: usize, j: usize| -(q(i, j + 1) - q(i, j)) / (radii.at(i, j) * radii.at(i, j + 1));
    let mut w_worst = 0.0f64;
    for j in 0..h - 1 {
        for i in 0..w - 1 {
            let pa = w1(i, j) + w2(i + 1, j);
            let pb = w2(i, j) + w1(i, j + 1);
            w_worst = w_worst.max((pa - pb).abs());
        }
    }
    let mut cstar: Grid2<Vec<f64>> = Grid2::from_fn(w, h, |_, _| Vec::new());
    cstar.set(0, 0, alloc::vec![0.0; centers.at(0, 0).len()]);
    for i in 1..w {
        let prev = cstar.at(i - 1, 0).clone();
        cstar.set(i, 0, add(&prev, &d1(i - 1, 0)));
    }
    for j in 1..h {
        for i in 0..w {
            let prev = cstar.at(i, j - 1).clone();
            cstar.set(i, j, add(&prev, &d2(i, j - 1)));
        }
    }
    let rstar = Grid2::from_fn(w, h, |i, j| 1.0 / radii.at(i, j));
    Ok((cstar, rstar, worst, w_worst))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::seeded_rng;
    use rand::Rng;

    /// random point of the quadric <s, s> = 1 in R^{4,1} with positive
    /// e0-coefficient (a genuine sphere in R^3)
    fn random_sphere_rep(rng: &mut rand_chacha::ChaCha8Rng) -> Vec<f64> {
        let c: Vec<f64> = (0..3).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect();
        let r = 0.5 + rng.gen::<f64>();
        let q = dot(&c, &c) - r * r;
        let mut v: Vec<f64> = c.iter().map(|x| x / r).collect();
        v.push((1.0 - q) / (2.0 * r));
        v.push((1.0 + q) / (2.0 * r));
        v
    }

    #[test]
    fn sphere_rep_roundtrip_is_quadric_point() {
        let mut rng = seeded_rng(179);
        let form = BilinearForm::Minkowski;
        for _ in 0..10 {
            let v = random_sphere_rep(&mut rng);
            assert!((form.inner(&v, &v) - 1.0).abs() < 1e-12);
        }
    }

    fn smooth_sphere_rep(c: [f64; 3], r: f64) -> Vec<f64> {
        let q = c.iter().map(|x| x * x).sum::<f64>() - r * r;
        let mut v: Vec<f64> = c.iter().map(|x| x / r).collect();
        v.push((1.0 - q) / (2.0 * r));
        v.push((1.0 + q) / (2.0 * r));
        v
    }

    #[test]
    fn moutard_fill_stays_in_quadric_and_dual_closes() {
        let mut rng = seeded_rng(181);
        let form = BilinearForm::Minkowski;
        let w = 4;
        let h = 4;
        // rings of gently perturbed touching-sphere data; retry until the
        // fill keeps positive e0-coefficients throughout
        'outer: for round in 0..60 {
            let eps = 0.05 + 0.002 * round as f64;
            let mut noise = || eps * (rng.gen::<f64>() - 0.5);
            let row0: Vec<Vec<f64>> = (0..w)
                .map(|i| smooth_sphere_rep([i as f64 + noise(), noise(), noise()], 1.0 + noise()))
                .collect();
            let mut col0: Vec<Vec<f64>> = (0..h)
                .map(|j| smooth_sphere_rep([noise(), j as f64 + noise(), noise()], 1.0 + noise()))
                .collect();
            col0[0] = row0[0].clone();
            let Ok(lift) = sisothermic_moutard_fill(form, 1.0, &row0, &col0) else {
                continue 'outer;
            };
            for ((_, _), v) in lift.iter_indexed() {
                if (form.inner(v, v) - 1.0).abs() > 1e-10 {
                    panic!("left the quadric");
                }
                if v[3] + v[4] <= 0.1 {
                    continue 'outer;
                }
            }
            let (centers, radii) = sisothermic_from_lift(&lift).unwrap();
            let (_, rstar, c_res, w_res) = sisothermic_dual(&centers, &radii, 1e-10).unwrap();
            assert!(c_res < 1e-11, "center closure {c_res}");
            assert!(w_res < 1e-11, "w-form closure {w_res}");
            for j in 0..h {
                for i in 0..w {
                    assert!((rstar.at(i, j) - 1.0 / radii.at(i, j)).abs() < 1e-14);
                }
            }
            return;
        }
        panic!("no admissible random configuration found");
    }

    #[test]
    fn unit_radius_dual_is_reflection() {
        // orthogonal-increment center net with r = 1 solves the Moutard
        // equation; the dual reflects the second axis
        let centers = Grid2::from_fn(4, 3, |i, j| alloc::vec![i as f64, 2.0 * j as f64, 0.0]);
        let radii = Grid2::from_fn(4, 3, |_, _| 1.0);
        let (cstar, rstar, c_res, w_res) = sisothermic_dual(&centers, &radii, 1e-12).unwrap();
        assert!(c_res < 1e-14 && w_res < 1e-12);
        for j in 0..3 {
            for i in 0..4 {
                assert!(dist(cstar.at(i, j), &[i as f64, -2.0 * j as f64, 0.0]) < 1e-12);
                assert!((rstar.at(i, j) - 1.0).abs() < 1e-15);
            }
        }
    }
}
